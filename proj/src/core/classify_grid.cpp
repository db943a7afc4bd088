#include <algorithm>
#include <cmath>

#include "classify.hpp"
#include "errors.hpp"

namespace lf {

namespace {

using P = Poly2<double>;
constexpr int kPatch = 7;
constexpr int kDeg = 4;

// Taylor coefficients (degree <= kDeg) at `at` of the Lagrange basis on `nodes`.
std::vector<std::array<double, kDeg + 1>> lagrange_taylor(const std::vector<double>& nodes, double at) {
    const int w = static_cast<int>(nodes.size());
    std::vector<std::array<double, kDeg + 1>> out(w);
    for (int m = 0; m < w; ++m) {
        std::vector<double> poly{1.0};
        double denom = 1.0;
        for (int k = 0; k < w; ++k) {
            if (k == m) continue;
            const double dk = nodes[k] - at;
            std::vector<double> next(poly.size() + 1, 0.0);
            for (size_t q = 0; q < poly.size(); ++q) {
                next[q + 1] += poly[q];
                next[q] -= dk * poly[q];
            }
            poly.swap(next);
            denom *= nodes[m] - nodes[k];
        }
        for (int q = 0; q <= kDeg; ++q) out[m][q] = q < static_cast<int>(poly.size()) ? poly[q] / denom : 0.0;
    }
    return out;
}

struct Patch {
    double x = 0, y = 0;
    P sig, b, A;
};

bool fit_patch(const SurfaceData& s, double x, double y, Patch& p) {
    const Grid& g = s.grid;
    const int wx = std::min(kPatch, g.nx), wy = std::min(kPatch, g.ny);
    const auto [ic, jc] = g.nearest(x, y);
    const int i0 = std::clamp(ic - wx / 2, 0, g.nx - wx), j0 = std::clamp(jc - wy / 2, 0, g.ny - wy);
    std::vector<double> xn(wx), yn(wy);
    for (int m = 0; m < wx; ++m) xn[m] = g.x(i0 + m);
    for (int m = 0; m < wy; ++m) yn[m] = g.y(j0 + m);
    for (int n = 0; n < wy; ++n)
        for (int m = 0; m < wx; ++m)
            if (!s.ok(g.index(i0 + m, j0 + n))) return false;
    const auto lx = lagrange_taylor(xn, x), ly = lagrange_taylor(yn, y);
    p.x = x;
    p.y = y;
    p.sig = P(kDeg);
    p.b = P(kDeg);
    p.A = P(kDeg);
    for (int n = 0; n < wy; ++n)
        for (int m = 0; m < wx; ++m) {
            const int k = g.index(i0 + m, j0 + n);
            const double fs = s.sigma_frame[k], fb = s.b[k], fA = s.A[k];
            for (int qx = 0; qx <= kDeg; ++qx)
                for (int qy = 0; qx + qy <= kDeg; ++qy) {
                    const double w = lx[m][qx] * ly[n][qy];
                    p.sig.at(qx, qy) += w * fs;
                    p.b.at(qx, qy) += w * fb;
                    p.A.at(qx, qy) += w * fA;
                }
        }
    return true;
}

P abs_poly(const P& p) {
    P q(p.degree());
    for (int i = 0; i <= p.degree(); ++i)
        for (int j = 0; i + j <= p.degree(); ++j) q.at(i, j) = std::abs(p.at(i, j));
    return q;
}

struct Chain {
    P e1, e2, e3;        // eta^k sigma
    double s1, s2, s3;   // majorant scales at the point
};

Chain eta_chain(const Patch& p) {
    Chain c;
    const P ex = p.b, ey = -p.A;
    c.e1 = directional(p.sig, ex, ey, kDeg - 1);
    c.e2 = directional(c.e1, ex, ey, kDeg - 2);
    c.e3 = directional(c.e2, ex, ey, kDeg - 3);
    const P as = abs_poly(p.sig), ax = abs_poly(ex), ay = abs_poly(ey);
    const P m1 = directional(as, ax, ay, kDeg - 1);
    const P m2 = directional(m1, ax, ay, kDeg - 2);
    const P m3 = directional(m2, ax, ay, kDeg - 3);
    c.s1 = m1.value_at_origin();
    c.s2 = m2.value_at_origin();
    c.s3 = m3.value_at_origin();
    // Floor: |grad sigma| |eta|^k, so fit noise on a flat chain reads as zero.
    const double gn = std::hypot(p.sig.get(1, 0), p.sig.get(0, 1));
    const double en = std::hypot(ex.value_at_origin(), ey.value_at_origin());
    c.s1 = std::max(c.s1, gn * en);
    c.s2 = std::max(c.s2, gn * en * en);
    c.s3 = std::max(c.s3, gn * en * en * en);
    return c;
}

Verdict band(double v, double scale, bool sign = false) {
    const double s = std::max(scale, 1e-300);
    if (std::abs(v) < 1e-6 * s) return Verdict::Zero;
    if (std::abs(v) <= 1e-4 * s) return Verdict::Indeterminate;
    if (!sign) return Verdict::NonZero;
    return v > 0 ? Verdict::Positive : Verdict::Negative;
}

bool nonzero(Verdict v) { return v == Verdict::NonZero || v == Verdict::Positive || v == Verdict::Negative; }

bool inside(const Grid& g, double x, double y) {
    return x >= g.x_min && x <= g.x_max && y >= g.y_min && y <= g.y_max;
}

double cell(const Grid& g) { return std::max(g.hx(), g.hy()); }

// Newton iterations; `kind` 0: project onto sigma = 0, 1: solve (sigma, eta sigma) = 0, 2: grad sigma = 0,
// 3: solve (sigma, eta^2 sigma) = 0.
bool newton(const SurfaceData& s, double& x, double& y, int kind, double max_move) {
    const Grid& g = s.grid;
    const double x0 = x, y0 = y;
    Patch p;
    for (int it = 0; it < 30; ++it) {
        if (!fit_patch(s, x, y, p)) return false;
        double F1, F2, J11, J12, J21, J22;
        if (kind == 0) {
            const double gx = p.sig.get(1, 0), gy = p.sig.get(0, 1), g2 = gx * gx + gy * gy;
            if (!(g2 > 0)) return false;
            const double t = p.sig.value_at_origin() / g2;
            x -= t * gx;
            y -= t * gy;
            if (std::abs(t) * std::sqrt(g2) < 1e-13 * cell(g)) break;
            continue;
        }
        if (kind == 1 || kind == 3) {
            P e1 = directional(p.sig, p.b, -p.A, kDeg - 1);
            if (kind == 3) e1 = directional(e1, p.b, -p.A, kDeg - 2);
            F1 = p.sig.value_at_origin();
            F2 = e1.value_at_origin();
            J11 = p.sig.get(1, 0);
            J12 = p.sig.get(0, 1);
            J21 = e1.get(1, 0);
            J22 = e1.get(0, 1);
        } else {
            F1 = p.sig.get(1, 0);
            F2 = p.sig.get(0, 1);
            J11 = 2 * p.sig.get(2, 0);
            J12 = p.sig.get(1, 1);
            J21 = p.sig.get(1, 1);
            J22 = 2 * p.sig.get(0, 2);
        }
        const double det = J11 * J22 - J12 * J21;
        if (!(std::abs(det) > 0)) return false;
        const double dx = (F1 * J22 - F2 * J12) / det, dy = (J11 * F2 - J21 * F1) / det;
        x -= dx;
        y -= dy;
        if (!std::isfinite(x) || !std::isfinite(y)) return false;
        if (std::hypot(dx, dy) < 1e-13 * cell(g)) break;
    }
    return inside(g, x, y) && std::hypot(x - x0, y - y0) <= max_move;
}

bool identically_singular(const SurfaceData& s) {
    double m = 0.0, scale = 0.0;
    for (int k = 0; k < s.grid.size(); ++k)
        if (s.ok(k)) {
            m = std::max(m, std::abs(s.sigma_frame[k]));
            scale = std::max(scale, std::abs(s.A[k]) * (std::abs(s.b[k]) + 1.0));
        }
    return m <= 1e-10 * std::max(scale, 1e-300);
}

SingularityReport classify_at(const SurfaceData& s, double x, double y, bool refine_swallowtail) {
    const Grid& g = s.grid;
    SingularityReport r;
    r.method = Method::Grid;
    Patch p;
    if (!fit_patch(s, x, y, p)) throw Error(Status::NotSingular, "no valid patch around the point");
    const double gnorm = std::hypot(p.sig.get(1, 0), p.sig.get(0, 1));
    const double hscale = 2 * std::abs(p.sig.get(2, 0)) + std::abs(p.sig.get(1, 1)) + 2 * std::abs(p.sig.get(0, 2));
    // Locate the nearby point of Sigma.
    double px = x, py = y;
    if (gnorm > 1e-3 * hscale * cell(g)) {
        if (!newton(s, px, py, 0, 2 * cell(g))) throw Error(Status::NotSingular, "no singular point near the query");
    } else if (!newton(s, px, py, 2, 2 * cell(g))) {
        throw Error(Status::NotSingular, "no singular point near the query");
    }
    fit_patch(s, px, py, p);
    Chain c = eta_chain(p);
    if (refine_swallowtail && !nonzero(band(c.e1.value_at_origin(), c.s1))) {
        double qx = px, qy = py;
        if (newton(s, qx, qy, 1, 1.5 * cell(g))) {
            px = qx;
            py = qy;
            fit_patch(s, px, py, p);
            c = eta_chain(p);
        }
        // Near a butterfly eta sigma has a double zero along Sigma; the root of eta^2 sigma is better conditioned.
        if (band(c.e2.value_at_origin(), c.s2) != Verdict::Zero) {
            double zx = px, zy = py;
            Patch q;
            if (newton(s, zx, zy, 3, 1.5 * cell(g)) && fit_patch(s, zx, zy, q)) {
                const Chain cz = eta_chain(q);
                if (band(cz.e1.value_at_origin(), cz.s1) == Verdict::Zero) {
                    px = zx;
                    py = zy;
                    p = q;
                    c = cz;
                }
            }
        }
    }
    r.x = px;
    r.y = py;
    const double sig = p.sig.value_at_origin();
    const double sx = p.sig.get(1, 0), sy = p.sig.get(0, 1);
    const double b = p.b.value_at_origin(), A = p.A.value_at_origin();
    const double hxx = 2 * p.sig.get(2, 0), hxy = p.sig.get(1, 1), hyy = 2 * p.sig.get(0, 2);
    const double local_scale = std::abs(A) * (std::abs(b) + std::abs(sx) + std::abs(sy)) + hscale * cell(g);
    auto add = [&](const std::string& id, double v, Verdict vd) {
        r.conditions.push_back({id, v, vd});
        return vd;
    };
    add("sigma", sig, band(sig, std::max(local_scale, std::abs(sx) + std::abs(sy)) * cell(g)));
    const Verdict vb = add("b", b, band(b, std::abs(A)));
    if (!nonzero(vb)) {
        r.note = "not a wave front at this point (a = b = 0)";
        return r;
    }
    const double gscale = std::abs(sx) + std::abs(sy) + (std::abs(hxx) + std::abs(hxy) + std::abs(hyy)) * cell(g);
    const Verdict vg = add("|grad sigma|", std::hypot(sx, sy), band(std::hypot(sx, sy), gscale));
    const Verdict v1 = add("eta sigma", c.e1.value_at_origin(), band(c.e1.value_at_origin(), c.s1));
    const Verdict v2 = add("eta^2 sigma", c.e2.value_at_origin(), band(c.e2.value_at_origin(), c.s2));
    if (nonzero(vg)) {
        if (nonzero(v1)) {
            r.label = Label::CuspidalEdge;
            r.codimension = 0;
        } else if (v1 == Verdict::Zero && nonzero(v2)) {
            r.label = Label::Swallowtail;
            r.codimension = 0;
        } else if (v1 == Verdict::Zero && v2 == Verdict::Zero) {
            const Verdict v3 = add("eta^3 sigma", c.e3.value_at_origin(), band(c.e3.value_at_origin(), c.s3));
            if (nonzero(v3)) {
                r.label = Label::CuspidalButterfly;
                r.codimension = 1;
            } else {
                r.note = "eta^k sigma unresolved for k <= 3";
            }
        } else {
            r.note = "two strata within tolerance";
        }
        return r;
    }
    if (vg != Verdict::Zero) {
        r.note = "gradient of sigma within the indeterminate band";
        return r;
    }
    const double det = hxx * hyy - hxy * hxy;
    add("hess_xx", hxx, band(hxx, std::abs(hxx) + std::abs(hyy) + std::abs(hxy)));
    add("hess_xy", hxy, band(hxy, std::abs(hxx) + std::abs(hyy) + std::abs(hxy)));
    add("hess_yy", hyy, band(hyy, std::abs(hxx) + std::abs(hyy) + std::abs(hxy)));
    const Verdict vd = add("hess det", det, band(det, std::abs(hxx * hyy) + hxy * hxy, true));
    if (vd == Verdict::Positive) {
        r.label = Label::CuspidalLips;
        r.codimension = 1;
    } else if (vd == Verdict::Negative && nonzero(v2)) {
        r.label = Label::CuspidalBeaks;
        r.codimension = 1;
    } else {
        r.note = "Morse point not resolved";
    }
    return r;
}

}  // namespace

SingularityReport classify_grid(const SurfaceData& s, double x, double y) {
    if (!inside(s.grid, x, y)) throw Error(Status::InvalidArgument, "point outside the grid");
    if (identically_singular(s)) {
        SingularityReport r;
        r.method = Method::Grid;
        r.x = x;
        r.y = y;
        r.note = "identically singular";
        return r;
    }
    return classify_at(s, x, y, true);
}

Detection detect_singularities(const SurfaceData& s) {
    Detection det;
    const Grid& g = s.grid;
    const auto contours = singular_contour(s);
    det.contours = static_cast<int>(contours.size());
    for (const auto& c : contours) det.closed_contours += c.closed ? 1 : 0;
    if (identically_singular(s)) {
        det.identically_singular = true;
        SingularityReport r;
        r.method = Method::Grid;
        r.x = s.base_x;
        r.y = s.base_y;
        r.note = "identically singular";
        det.points.push_back(r);
        det.contours = 0;
        det.closed_contours = 0;
        return det;
    }
    const double h = cell(g);
    auto add_point = [&](const SingularityReport& r) {
        for (const auto& q : det.points)
            if (std::hypot(q.x - r.x, q.y - r.y) < 1.5 * h) return;
        det.points.push_back(r);
    };
    // Sign changes of eta sigma along the frame zero set.
    for (const auto& c : zero_contour(s, s.sigma_frame)) {
        double prev = std::numeric_limits<double>::quiet_NaN();
        const size_t n = c.points.size() + (c.closed ? 1 : 0);
        std::array<double, 2> prev_pt{0, 0};
        std::vector<double> es(c.points.size(), std::numeric_limits<double>::quiet_NaN());
        std::vector<double> sc(c.points.size(), 0.0);
        for (size_t q = 0; q < n; ++q) {
            const auto& pt = c.points[q % c.points.size()];
            Patch p;
            if (!fit_patch(s, pt.x, pt.y, p)) {
                prev = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const Chain ch = eta_chain(p);
            const double e = ch.e1.value_at_origin();
            es[q % c.points.size()] = e;
            sc[q % c.points.size()] = ch.s1;
            if (std::isfinite(prev) && ((prev < 0) != (e < 0))) {
                double x = 0.5 * (prev_pt[0] + pt.x), y = 0.5 * (prev_pt[1] + pt.y);
                if (newton(s, x, y, 1, 2 * h)) {
                    try {
                        add_point(classify_at(s, x, y, true));
                    } catch (const Error&) {
                    }
                }
            }
            prev = e;
            prev_pt = {pt.x, pt.y};
        }
        // Touching zeros of eta sigma (butterfly candidates) do not change sign.
        const size_t m = c.points.size();
        for (size_t q = 0; q < m; ++q) {
            if (!c.closed && (q == 0 || q + 1 == m)) continue;
            const double e0 = es[(q + m - 1) % m], e1 = es[q], e2 = es[(q + 1) % m];
            if (!std::isfinite(e0) || !std::isfinite(e1) || !std::isfinite(e2)) continue;
            if (std::abs(e1) > std::abs(e0) || std::abs(e1) > std::abs(e2) || std::abs(e1) > 1e-2 * sc[q]) continue;
            if ((e0 < 0) != (e2 < 0)) continue;
            double x = c.points[q].x, y = c.points[q].y;
            try {
                const SingularityReport r = classify_at(s, x, y, true);
                if (r.label == Label::CuspidalButterfly) add_point(r);
            } catch (const Error&) {
            }
        }
    }
    // Morse candidates: interior local minima of |sigma_frame|.
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!s.ok(k)) continue;
            const double v = std::abs(s.sigma_frame[k]);
            bool minimum = true;
            for (int a = -1; a <= 1 && minimum; ++a)
                for (int b = -1; b <= 1 && minimum; ++b) {
                    if (a == 0 && b == 0) continue;
                    const int kk = g.index(i + a, j + b);
                    if (!s.ok(kk) || std::abs(s.sigma_frame[kk]) < v) minimum = false;
                }
            if (!minimum) continue;
            double x = g.x(i), y = g.y(j);
            if (!newton(s, x, y, 2, 1.5 * h)) continue;
            Patch p;
            if (!fit_patch(s, x, y, p)) continue;
            const double hs = 2 * std::abs(p.sig.get(2, 0)) + std::abs(p.sig.get(1, 1)) + 2 * std::abs(p.sig.get(0, 2));
            if (band(p.sig.value_at_origin(), hs * h * h) != Verdict::Zero) continue;
            try {
                add_point(classify_at(s, x, y, false));
            } catch (const Error&) {
            }
        }
    for (const auto& r : det.points) det.swallowtails += r.label == Label::Swallowtail ? 1 : 0;
    return det;
}

}  // namespace lf
