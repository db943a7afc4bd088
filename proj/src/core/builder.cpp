#include "builder.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "errors.hpp"
#include "parallel.hpp"

namespace lf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_entry(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

void Grid::validate() const {
    if (nx < 2 || ny < 2) throw Error(Status::InvalidArgument, "grid needs at least 2 samples per axis");
    if (!(x_max > x_min) || !(y_max > y_min)) throw Error(Status::InvalidArgument, "grid extents must be ascending");
}

std::pair<int, int> Grid::nearest(double x, double y) const {
    const int i = std::clamp(static_cast<int>(std::lround((x - x_min) / hx())), 0, nx - 1);
    const int j = std::clamp(static_cast<int>(std::lround((y - y_min) / hy())), 0, ny - 1);
    return {i, j};
}

const std::vector<double>& fd_weights(int derivative, int order) {
    static const std::vector<double> d1o2{-0.5, 0.0, 0.5};
    static const std::vector<double> d1o4{1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    static const std::vector<double> d1o6{-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
    static const std::vector<double> d2o2{1.0, -2.0, 1.0};
    static const std::vector<double> d2o4{-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    static const std::vector<double> d2o6{1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
    if (derivative == 1) {
        if (order == 2) return d1o2;
        if (order == 4) return d1o4;
        if (order == 6) return d1o6;
    } else if (derivative == 2) {
        if (order == 2) return d2o2;
        if (order == 4) return d2o4;
        if (order == 6) return d2o6;
    }
    throw Error(Status::InvalidArgument, "finite-difference order must be 2, 4 or 6");
}

namespace {

// First derivative weights at node `at` of the 7-point window 0..6 (Lagrange basis derivatives).
const std::array<std::array<double, 7>, 7>& window_weights() {
    static const auto table = [] {
        std::array<std::array<double, 7>, 7> w{};
        for (int at = 0; at < 7; ++at)
            for (int m = 0; m < 7; ++m) {
                double denom = 1.0;
                for (int k = 0; k < 7; ++k)
                    if (k != m) denom *= m - k;
                double sum = 0.0;
                for (int skip = 0; skip < 7; ++skip) {
                    if (skip == m) continue;
                    double prod = 1.0;
                    for (int k = 0; k < 7; ++k)
                        if (k != m && k != skip) prod *= at - k;
                    sum += prod;
                }
                w[at][m] = sum / denom;
            }
        return w;
    }();
    return table;
}

// First derivative of a Vec3 field along an axis: sixth order (one-sided windows at the
// edges) when seven nodes exist, else the best low-order stencil.
template <class Field>
Vec3 d1_best(const Field& at, int k, int n, double h) {
    if (n >= 7) {
        const int s0 = std::clamp(k - 3, 0, n - 7);
        const auto& w = window_weights()[k - s0];
        Vec3 d = Vec3::Zero();
        for (int m = 0; m < 7; ++m) d += w[m] * at(s0 + m);
        return d / h;
    }
    if (n == 2) return (at(1) - at(0)) / h;
    if (k >= 1 && k <= n - 2) return (at(k + 1) - at(k - 1)) / (2 * h);
    if (k == 0) return (-1.5 * at(0) + 2.0 * at(1) - 0.5 * at(2)) / h;
    return (1.5 * at(n - 1) - 2.0 * at(n - 2) + 0.5 * at(n - 3)) / h;
}

Vec3 dx_best(const std::vector<Vec3>& v, const Grid& g, int i, int j) {
    return d1_best([&](int ii) -> Vec3 { return v[g.index(ii, j)]; }, i, g.nx, g.hx());
}
Vec3 dy_best(const std::vector<Vec3>& v, const Grid& g, int i, int j) {
    return d1_best([&](int jj) -> Vec3 { return v[g.index(i, jj)]; }, j, g.ny, g.hy());
}

}  // namespace

SurfaceData dalembert_solve(const PotentialPair& p, const Grid& g, const BuildOptions& opts) {
    g.validate();
    const int M = opts.M, S = opts.circle_samples;
    if (M < 1) throw Error(Status::InvalidArgument, "truncation order M must be positive");
    if (S < 3 * M + 1) throw Error(Status::InvalidArgument, "circle_samples must be at least 3M+1");
    if (opts.rk4_steps_per_unit < 1) throw Error(Status::InvalidArgument, "rk4_steps_per_unit must be positive");
    const double tol = 1e-12;
    if (p.x0 < g.x_min - tol || p.x0 > g.x_max + tol || p.y0 < g.y_min - tol || p.y0 > g.y_max + tol)
        throw Error(Status::InvalidArgument, "base point lies outside the grid");

    std::vector<double> xs(g.nx), ys(g.ny);
    for (int i = 0; i < g.nx; ++i) xs[i] = g.x(i);
    for (int j = 0; j < g.ny; ++j) ys[j] = g.y(j);
    const auto Xs = integrate_loop_path(p.chi, p.x0, xs, opts.rk4_steps_per_unit, S);
    const auto Ys = integrate_loop_path(p.psi, p.y0, ys, opts.rk4_steps_per_unit, S);

    // Per-column (x) and per-row (y) caches.
    const int half = S / 2;
    PartialDft full(S, -half + (S % 2 == 0 ? 1 : 0), half);
    std::vector<std::vector<Mat2>> Xinv(g.nx, std::vector<Mat2>(S));
    std::vector<Mat2> X1(g.nx), Xd(g.nx), chi0(g.nx), chi1(g.nx), psim(g.ny);
    std::vector<Mat2> coeffs(full.nhi() - full.nlo() + 1);
    Mat2 band[3];
    for (int i = 0; i < g.nx; ++i) {
        for (int l = 0; l < S; ++l) {
            if (!Xs[i][l].allFinite()) throw Error(Status::Overflow, "loop ODE overflow along x");
            Xinv[i][l] = inv2(Xs[i][l]);
        }
        X1[i] = Xs[i][0];
        full.apply(Xs[i].data(), coeffs.data());
        Xd[i].setZero();
        for (int n = full.nlo(); n <= full.nhi(); ++n) Xd[i] += static_cast<double>(n) * coeffs[n - full.nlo()];
        p.chi.eval(xs[i], band);
        chi0[i] = band[1];
        chi1[i] = band[2];
    }
    for (int j = 0; j < g.ny; ++j) {
        for (int l = 0; l < S; ++l)
            if (!Ys[j][l].allFinite()) throw Error(Status::Overflow, "loop ODE overflow along y");
        p.psi.eval(ys[j], band);
        psim[j] = band[0];
    }

    SurfaceData s;
    s.grid = g;
    s.base_x = p.x0;
    s.base_y = p.y0;
    const int P = g.size();
    s.f.assign(P, Vec3::Constant(kNaN));
    s.N.assign(P, Vec3::Constant(kNaN));
    s.F.assign(P, Mat2::Zero());
    s.sigma.assign(P, kNaN);
    s.sigma_frame.assign(P, kNaN);
    s.a.assign(P, kNaN);
    s.b.assign(P, kNaN);
    s.c.assign(P, kNaN);
    s.A.assign(P, kNaN);
    s.status.assign(P, PointStatus::Ok);
    s.tail.assign(P, 0.0);

    const PartialDft gdft(S, -2 * M, M);
    const Mat2 F0 = p.F0;
    const Mat2 F0inv = inv2(F0);
    parallel_for(g.ny, opts.threads, [&](int j) {
        std::vector<Mat2> gs(S), gc(3 * M + 1), hm(M + 1), kk(M + 1);
        for (int i = 0; i < g.nx; ++i) {
            const int idx = g.index(i, j);
            for (int l = 0; l < S; ++l) gs[l] = Xinv[i][l] * Ys[j][l];
            gdft.apply(gs.data(), gc.data());
            double cond = 1.0;
            if (!birkhoff_core(gc.data(), M, hm.data(), kk.data(), &cond)) {
                s.status[idx] = PointStatus::OutsideBigCell;
                continue;
            }
            Mat2 H1 = Mat2::Zero(), Hd = Mat2::Zero();
            for (int n = -M; n <= 0; ++n) {
                H1 += hm[n + M];
                Hd += static_cast<double>(n) * hm[n + M];
            }
            const Mat2 Fh = X1[i] * H1;
            const Mat2 F = F0 * Fh;
            s.F[idx] = F;
            s.N[idx] = adjoint_unchecked(F, Vec3(0, 0, 1));
            const Mat2 sym = (Xd[i] * H1 + X1[i] * Hd) * inv2(Fh);
            s.f[idx] = su2_components(F0 * sym * F0inv);
            const Mat2 Vp = inv2(kk[0]) * psim[j] * kk[0];
            const Vec3 vp = su2_components(Vp);
            s.a[idx] = vp.y();
            s.b[idx] = -vp.x();
            const Mat2 U0 = chi0[i] + bracket(chi1[i], M >= 1 ? hm[M - 1] : Mat2::Zero());
            s.c[idx] = su2_components(U0).z();
            s.A[idx] = su2_components(chi1[i]).x();
            s.sigma_frame[idx] = -s.A[idx] * s.a[idx];
            double t = max_entry(hm[0]);
            if (M >= 2) t = std::max(t, max_entry(hm[1]));
            s.tail[idx] = t;
        }
    });
    for (int k = 0; k < P; ++k) {
        if (s.status[k] == PointStatus::OutsideBigCell)
            ++s.outside_count;
        else
            s.max_tail = std::max(s.max_tail, s.tail[k]);
    }
    const auto [ib, jb] = g.nearest(p.x0, p.y0);
    if (!s.ok(g.index(ib, jb))) throw Error(Status::OutsideBigCell, "Birkhoff split fails at the base point");
    compute_sigma(s);
    return s;
}

void compute_sigma(SurfaceData& s) {
    const Grid& g = s.grid;
    s.sigma.assign(g.size(), kNaN);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int idx = g.index(i, j);
            if (!s.ok(idx)) continue;
            const Vec3 fx = dx_best(s.f, g, i, j), fy = dy_best(s.f, g, i, j);
            s.sigma[idx] = fx.cross(fy).dot(s.N[idx]);
        }
}

std::vector<Vec3> integrate_frontal(const std::vector<Vec3>& N, const Grid& g, double base_x, double base_y) {
    g.validate();
    if (static_cast<int>(N.size()) != g.size()) throw Error(Status::InvalidArgument, "N field does not match grid");
    const auto [ib, jb] = g.nearest(base_x, base_y);
    std::vector<Vec3> gx(g.size()), gy(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            gx[k] = N[k].cross(dx_best(N, g, i, j));
            gy[k] = -N[k].cross(dy_best(N, g, i, j));
        }
    std::vector<Vec3> f(g.size(), Vec3::Zero());
    // Trapezoid steps with the endpoint-derivative correction (fourth order for smooth integrands).
    auto step_x = [&](int i0, int i1, int j) {
        const double h = g.x(i1) - g.x(i0);
        const Vec3 d0 = dx_best(gx, g, i0, j), d1 = dx_best(gx, g, i1, j);
        return Vec3(0.5 * h * (gx[g.index(i0, j)] + gx[g.index(i1, j)]) - h * h / 12.0 * (d1 - d0));
    };
    auto step_y = [&](int i, int j0, int j1) {
        const double h = g.y(j1) - g.y(j0);
        const Vec3 d0 = dy_best(gy, g, i, j0), d1 = dy_best(gy, g, i, j1);
        return Vec3(0.5 * h * (gy[g.index(i, j0)] + gy[g.index(i, j1)]) - h * h / 12.0 * (d1 - d0));
    };
    for (int i = ib + 1; i < g.nx; ++i) f[g.index(i, jb)] = f[g.index(i - 1, jb)] + step_x(i - 1, i, jb);
    for (int i = ib - 1; i >= 0; --i) f[g.index(i, jb)] = f[g.index(i + 1, jb)] + step_x(i + 1, i, jb);
    for (int i = 0; i < g.nx; ++i) {
        for (int j = jb + 1; j < g.ny; ++j) f[g.index(i, j)] = f[g.index(i, j - 1)] + step_y(i, j - 1, j);
        for (int j = jb - 1; j >= 0; --j) f[g.index(i, j)] = f[g.index(i, j + 1)] + step_y(i, j + 1, j);
    }
    return f;
}

namespace {

struct Stencil {
    const Grid& g;
    int r;
    const std::vector<double>& w1;
    const std::vector<double>& w2;

    Stencil(const Grid& grid, int order)
        : g(grid), r(order / 2), w1(fd_weights(1, order)), w2(fd_weights(2, order)) {}

    bool fits(int i, int j) const { return i >= r && i < g.nx - r && j >= r && j < g.ny - r; }

    Vec3 dx(const std::vector<Vec3>& v, int i, int j) const {
        Vec3 acc = Vec3::Zero();
        for (int m = -r; m <= r; ++m) acc += w1[m + r] * v[g.index(i + m, j)];
        return acc / g.hx();
    }
    Vec3 dy(const std::vector<Vec3>& v, int i, int j) const {
        Vec3 acc = Vec3::Zero();
        for (int m = -r; m <= r; ++m) acc += w1[m + r] * v[g.index(i, j + m)];
        return acc / g.hy();
    }
    Vec3 dxx(const std::vector<Vec3>& v, int i, int j) const {
        Vec3 acc = Vec3::Zero();
        for (int m = -r; m <= r; ++m) acc += w2[m + r] * v[g.index(i + m, j)];
        return acc / (g.hx() * g.hx());
    }
    Vec3 dyy(const std::vector<Vec3>& v, int i, int j) const {
        Vec3 acc = Vec3::Zero();
        for (int m = -r; m <= r; ++m) acc += w2[m + r] * v[g.index(i, j + m)];
        return acc / (g.hy() * g.hy());
    }
    Vec3 dxy(const std::vector<Vec3>& v, int i, int j) const {
        Vec3 acc = Vec3::Zero();
        for (int m = -r; m <= r; ++m)
            for (int n = -r; n <= r; ++n) acc += w1[m + r] * w1[n + r] * v[g.index(i + m, j + n)];
        return acc / (g.hx() * g.hy());
    }
    bool all_ok(const SurfaceData& s, int i, int j) const {
        for (int m = -r; m <= r; ++m)
            for (int n = -r; n <= r; ++n)
                if (!s.ok(g.index(i + m, j + n))) return false;
        return true;
    }
};

}  // namespace

FundamentalForms fundamental_forms(const SurfaceData& s, int fd_order) {
    const Grid& g = s.grid;
    const Stencil st(g, fd_order);
    FundamentalForms ff;
    ff.fd_order = fd_order;
    const int P = g.size();
    ff.evaluated.assign(P, 0);
    ff.A.assign(P, kNaN);
    ff.B.assign(P, kNaN);
    ff.cos_phi.assign(P, kNaN);
    ff.sin_phi.assign(P, kNaN);
    ff.K.assign(P, kNaN);
    ff.H.assign(P, kNaN);
    ff.fx_nx_residual.assign(P, kNaN);
    ff.asymptotic_residual.assign(P, kNaN);
    const double h = std::max(g.hx(), g.hy());
    ff.threshold = 10.0 * h * h;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!st.fits(i, j) || !st.all_ok(s, i, j)) continue;
            if (!(std::abs(s.sigma[k]) > ff.threshold)) continue;
            const Vec3& N = s.N[k];
            const Vec3 fx = st.dx(s.f, i, j), fy = st.dy(s.f, i, j);
            const Vec3 fxx = st.dxx(s.f, i, j), fyy = st.dyy(s.f, i, j), fxy = st.dxy(s.f, i, j);
            const Vec3 Nx = st.dx(s.N, i, j), Ny = st.dy(s.N, i, j);
            const double E = fx.dot(fx), F = fx.dot(fy), G = fy.dot(fy);
            const double L = fxx.dot(N), Mm = fxy.dot(N), Nn = fyy.dot(N);
            const double W = E * G - F * F;
            ff.evaluated[k] = 1;
            ff.A[k] = std::sqrt(E);
            ff.B[k] = std::sqrt(G);
            ff.cos_phi[k] = F / (ff.A[k] * ff.B[k]);
            ff.sin_phi[k] = fx.cross(fy).dot(N) / (ff.A[k] * ff.B[k]);
            ff.K[k] = (L * Nn - Mm * Mm) / W;
            ff.H[k] = (E * Nn - 2 * F * Mm + G * L) / (2 * W);
            ff.fx_nx_residual[k] = std::abs(fx.norm() - Nx.norm()) + std::abs(fy.norm() - Ny.norm());
            ff.asymptotic_residual[k] = std::abs(fx.dot(Nx)) + std::abs(fy.dot(Ny));
        }
    return ff;
}

ParallelData parallel_surface(const SurfaceData& s, double r, int fd_order) {
    const Grid& g = s.grid;
    const FundamentalForms ff = fundamental_forms(s, fd_order);
    const Stencil st(g, fd_order);
    ParallelData pd;
    pd.r = r;
    const int P = g.size();
    pd.g.resize(P);
    for (int k = 0; k < P; ++k) pd.g[k] = s.f[k] + r * s.N[k];
    pd.retained.assign(P, 0);
    pd.focal.assign(P, 0);
    pd.K_formula.assign(P, kNaN);
    pd.H_formula.assign(P, kNaN);
    pd.K_fd.assign(P, kNaN);
    pd.H_fd.assign(P, kNaN);
    pd.denominator.assign(P, kNaN);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (!ff.evaluated[k]) continue;
            const double sp = ff.sin_phi[k], cp = ff.cos_phi[k];
            const double D = (1 - r * r) * sp + 2 * r * cp;
            pd.denominator[k] = D;
            if (std::abs(D) < 1e-3) {
                pd.focal[k] = 1;
                ++pd.focal_count;
                continue;
            }
            pd.K_formula[k] = -sp / D;
            pd.H_formula[k] = (r * sp - cp) / D;
            const Vec3& N = s.N[k];
            const Vec3 gx = st.dx(pd.g, i, j), gy = st.dy(pd.g, i, j);
            const Vec3 gxx = st.dxx(pd.g, i, j), gyy = st.dyy(pd.g, i, j), gxy = st.dxy(pd.g, i, j);
            const double E = gx.dot(gx), F = gx.dot(gy), G = gy.dot(gy);
            const double L = gxx.dot(N), Mm = gxy.dot(N), Nn = gyy.dot(N);
            const double W = E * G - F * F;
            if (!(W > 0)) continue;
            pd.K_fd[k] = (L * Nn - Mm * Mm) / W;
            pd.H_fd[k] = (E * Nn - 2 * F * Mm + G * L) / (2 * W);
            pd.retained[k] = 1;
        }
    return pd;
}

namespace {

struct UV {
    double u, v, ux, vx;
};

// Stereographic chart w = (N1 + i N2) / (1 + N3) about e3.
UV uv_from(const Vec3& N, const Vec3& Nx) {
    const double d = 1.0 + N.z();
    if (!(d > 1e-9)) throw Error(Status::Overflow, "Cauchy data reaches the pole of the stereographic chart");
    return {N.x() / d, N.y() / d, (Nx.x() * d - N.x() * Nx.z()) / (d * d), (Nx.y() * d - N.y() * Nx.z()) / (d * d)};
}

// w_xy = 2 conj(w) w_x w_y / (1 + |w|^2), split into real and imaginary parts.
std::pair<double, double> mixed_rhs(double u, double v, double ux, double uy, double vx, double vy) {
    const std::complex<double> w(u, v), wx(ux, vx), wy(uy, vy);
    const std::complex<double> r = 2.0 * std::conj(w) * wx * wy / (1.0 + std::norm(w));
    return {r.real(), r.imag()};
}

}  // namespace

MarchResult pde_march(const DiagonalData& d, const Grid& g, int refine) {
    g.validate();
    if (g.nx != g.ny || std::abs(g.x_min - g.y_min) > 1e-12 || std::abs(g.x_max - g.y_max) > 1e-12)
        throw Error(Status::InvalidArgument, "pde_march needs a square grid symmetric about the diagonal");
    if (refine < 1) throw Error(Status::InvalidArgument, "refinement factor must be positive");
    const int n = (g.nx - 1) * refine + 1;
    const double h = g.hx() / refine;
    auto tval = [&](double i) { return g.x_min + h * i; };
    std::vector<double> u(static_cast<size_t>(n) * n, kNaN), v(u.size(), kNaN);
    auto at = [&](std::vector<double>& f, int i, int j) -> double& { return f[static_cast<size_t>(j) * n + i]; };

    // The equation is rotation invariant; centre the chart on the normal at the middle of the diagonal.
    const Vec3 Nmid = d(0.5 * (g.x_min + g.x_max)).first.normalized();
    const Eigen::Matrix3d R = Eigen::Quaterniond::FromTwoVectors(Nmid, Vec3::UnitZ()).toRotationMatrix();
    auto diag_uv = [&](double t) {
        const auto [N, Nx] = d(t);
        return uv_from(R * N, R * Nx);
    };
    std::function<double(double)> uf = [&](double t) { return diag_uv(t).u; };
    std::function<double(double)> vf = [&](double t) { return diag_uv(t).v; };

    for (int i = 0; i < n; ++i) {
        const UV p = diag_uv(tval(i));
        at(u, i, i) = p.u;
        at(v, i, i) = p.v;
    }
    // First off-diagonal levels from the second-order Taylor expansion in s = (x - y)/2.
    for (int i = 0; i + 1 < n; ++i) {
        const double t = tval(i + 0.5);
        const UV p = diag_uv(t);
        const double ut = central_derivative(uf, t, 1), vt = central_derivative(vf, t, 1);
        const double utt = central_derivative(uf, t, 2), vtt = central_derivative(vf, t, 2);
        const double us = 2 * p.ux - ut, vs = 2 * p.vx - vt;
        const auto [ruxy, rvxy] = mixed_rhs(p.u, p.v, p.ux, ut - p.ux, p.vx, vt - p.vx);
        const double uss = utt - 4 * ruxy, vss = vtt - 4 * rvxy;
        for (int side : {1, -1}) {
            const double sh = side * h / 2;
            const int ii = side > 0 ? i + 1 : i, jj = side > 0 ? i : i + 1;
            at(u, ii, jj) = p.u + sh * us + 0.5 * sh * sh * uss;
            at(v, ii, jj) = p.v + sh * vs + 0.5 * sh * sh * vss;
        }
    }
    // Box scheme on characteristic cells; the unknown corner enters the centre values,
    // resolved by fixed-point iteration.
    auto cell = [&](int i0, int j0, int ui, int uj) {
        // cell [i0, i0+1] x [j0, j0+1], unknown corner (ui, uj)
        const int ci = (ui == i0) ? i0 + 1 : i0, cj = (uj == j0) ? j0 + 1 : j0;  // opposite corner
        const int sgn = ((ui == i0) == (uj == j0)) ? 1 : -1;
        double gu = at(u, ci, uj) + at(u, ui, cj) - at(u, ci, cj);
        double gv = at(v, ci, uj) + at(v, ui, cj) - at(v, ci, cj);
        for (int it = 0; it < 4; ++it) {
            at(u, ui, uj) = gu;
            at(v, ui, uj) = gv;
            auto U = [&](int a, int b) { return at(u, i0 + a, j0 + b); };
            auto Vv = [&](int a, int b) { return at(v, i0 + a, j0 + b); };
            const double uc = 0.25 * (U(0, 0) + U(1, 0) + U(0, 1) + U(1, 1));
            const double vc = 0.25 * (Vv(0, 0) + Vv(1, 0) + Vv(0, 1) + Vv(1, 1));
            const double ux = (U(1, 0) + U(1, 1) - U(0, 0) - U(0, 1)) / (2 * h);
            const double uy = (U(0, 1) + U(1, 1) - U(0, 0) - U(1, 0)) / (2 * h);
            const double vx = (Vv(1, 0) + Vv(1, 1) - Vv(0, 0) - Vv(0, 1)) / (2 * h);
            const double vy = (Vv(0, 1) + Vv(1, 1) - Vv(0, 0) - Vv(1, 0)) / (2 * h);
            const auto [Fu, Fv] = mixed_rhs(uc, vc, ux, uy, vx, vy);
            // u11 - u10 - u01 + u00 = h^2 F; the unknown carries sign sgn.
            gu = at(u, ci, uj) + at(u, ui, cj) - at(u, ci, cj) + sgn * h * h * Fu;
            gv = at(v, ci, uj) + at(v, ui, cj) - at(v, ci, cj) + sgn * h * h * Fv;
        }
        at(u, ui, uj) = gu;
        at(v, ui, uj) = gv;
        if (!(std::abs(gu) + std::abs(gv) <= 1e6)) throw Error(Status::Overflow, "pde_march: |u| + |v| exceeds 1e6");
    };
    for (int k = 2; k < n; ++k) {
        for (int j = 0; j + k < n; ++j) cell(j + k - 1, j, j + k, j);  // below the diagonal (x > y)
        for (int i = 0; i + k < n; ++i) cell(i, i + k - 1, i, i + k);  // above the diagonal
    }
    MarchResult out;
    out.grid = g;
    out.u.resize(g.size());
    out.v.resize(g.size());
    out.N.resize(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double uu = at(u, i * refine, j * refine), vv = at(v, i * refine, j * refine);
            const int k = g.index(i, j);
            out.u[k] = uu;
            out.v[k] = vv;
            const double q = uu * uu + vv * vv;
            out.N[k] = R.transpose() * Vec3(2 * uu, 2 * vv, 1 - q) / (1 + q);
        }
    return out;
}

std::vector<Contour> singular_contour(const SurfaceData& s) { return zero_contour(s, s.sigma); }

std::vector<Contour> zero_contour(const SurfaceData& s, const std::vector<double>& field) {
    const Grid& g = s.grid;
    // Values below the rounding floor count as positive so identically singular fields give no contour.
    double scale = 0.0;
    for (int k = 0; k < g.size(); ++k)
        if (std::isfinite(field[k])) scale = std::max(scale, std::abs(field[k]));
    double fscale = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (s.ok(k)) fscale = std::max(fscale, dx_best(s.f, g, i, j).norm() * dy_best(s.f, g, i, j).norm());
        }
    const double floor = 1e-9 * std::max(fscale, 1e-300);
    auto val = [&](int i, int j) {
        const double x = field[g.index(i, j)];
        return std::abs(x) <= floor ? 0.0 : x;
    };
    auto neg = [&](int i, int j) { return val(i, j) < 0; };
    auto valid = [&](int i, int j) { return s.ok(g.index(i, j)) && std::isfinite(field[g.index(i, j)]); };

    // Edge ids: horizontal (i,j)-(i+1,j) -> 2k, vertical (i,j)-(i,j+1) -> 2k+1.
    auto hedge = [&](int i, int j) { return 2 * g.index(i, j); };
    auto vedge = [&](int i, int j) { return 2 * g.index(i, j) + 1; };
    std::map<int, ContourPoint> pts;
    auto crossing = [&](int i0, int j0, int i1, int j1) {
        const int k0 = g.index(i0, j0), k1 = g.index(i1, j1);
        const double v0 = val(i0, j0), v1 = val(i1, j1);
        const double t = v0 / (v0 - v1);
        ContourPoint p;
        p.x = g.x(i0) + t * (g.x(i1) - g.x(i0));
        p.y = g.y(j0) + t * (g.y(j1) - g.y(j0));
        p.f = (1 - t) * s.f[k0] + t * s.f[k1];
        const double b = (1 - t) * s.b[k0] + t * s.b[k1];
        const double A = (1 - t) * s.A[k0] + t * s.A[k1];
        p.eta = {std::abs(b), -(b >= 0 ? 1.0 : -1.0) * A};
        return p;
    };
    std::map<int, std::vector<int>> adj;
    std::vector<std::pair<int, int>> segs;
    auto add_seg = [&](int e0, int e1) {
        adj[e0].push_back(static_cast<int>(segs.size()));
        adj[e1].push_back(static_cast<int>(segs.size()));
        segs.emplace_back(e0, e1);
    };
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) {
            if (!valid(i, j) || !valid(i + 1, j) || !valid(i, j + 1) || !valid(i + 1, j + 1)) continue;
            const bool n00 = neg(i, j), n10 = neg(i + 1, j), n01 = neg(i, j + 1), n11 = neg(i + 1, j + 1);
            std::vector<int> edges;
            if (n00 != n10) {
                edges.push_back(hedge(i, j));
                if (!pts.count(hedge(i, j))) pts[hedge(i, j)] = crossing(i, j, i + 1, j);
            }
            if (n10 != n11) {
                edges.push_back(vedge(i + 1, j));
                if (!pts.count(vedge(i + 1, j))) pts[vedge(i + 1, j)] = crossing(i + 1, j, i + 1, j + 1);
            }
            if (n01 != n11) {
                edges.push_back(hedge(i, j + 1));
                if (!pts.count(hedge(i, j + 1))) pts[hedge(i, j + 1)] = crossing(i, j + 1, i + 1, j + 1);
            }
            if (n00 != n01) {
                edges.push_back(vedge(i, j));
                if (!pts.count(vedge(i, j))) pts[vedge(i, j)] = crossing(i, j, i, j + 1);
            }
            if (edges.size() == 2) {
                add_seg(edges[0], edges[1]);
            } else if (edges.size() == 4) {
                // Saddle: edges are in order bottom, right, top, left. Resolve with the centre value.
                const double centre = 0.25 * (val(i, j) + val(i + 1, j) + val(i, j + 1) + val(i + 1, j + 1));
                const bool cneg = centre < 0;
                if (cneg == n00) {
                    add_seg(edges[0], edges[1]);
                    add_seg(edges[2], edges[3]);
                } else {
                    add_seg(edges[0], edges[3]);
                    add_seg(edges[1], edges[2]);
                }
            }
        }
    std::vector<char> used(segs.size(), 0);
    std::vector<Contour> out;
    auto walk = [&](int start_edge, int first_seg) {
        Contour c;
        int edge = start_edge, seg = first_seg;
        c.points.push_back(pts[edge]);
        while (seg >= 0 && !used[seg]) {
            used[seg] = 1;
            const int next = segs[seg].first == edge ? segs[seg].second : segs[seg].first;
            edge = next;
            if (edge == start_edge) {
                c.closed = true;
                break;
            }
            c.points.push_back(pts[edge]);
            seg = -1;
            for (int sidx : adj[edge])
                if (!used[sidx]) seg = sidx;
        }
        return c;
    };
    for (const auto& [edge, list] : adj)
        if (list.size() == 1 && !used[list[0]]) out.push_back(walk(edge, list[0]));
    for (size_t sidx = 0; sidx < segs.size(); ++sidx)
        if (!used[sidx]) out.push_back(walk(segs[sidx].first, static_cast<int>(sidx)));
    return out;
}

namespace {

std::FILE* open_or_throw(const std::string& path, const char* mode) {
    std::FILE* fp = std::fopen(path.c_str(), mode);
    if (!fp) throw Error(Status::Io, "cannot open '" + path + "' for writing");
    return fp;
}

void close_or_throw(std::FILE* fp, const std::string& path) {
    const bool bad = std::ferror(fp) != 0;
    if (std::fclose(fp) != 0 || bad) throw Error(Status::Io, "write failed for '" + path + "'");
}

int orientation(double sigma) { return sigma > 0 ? 1 : (sigma < 0 ? -1 : 0); }

// Triangles of the split quads whose corners are all valid.
std::vector<std::array<int, 3>> triangles(const SurfaceData& s) {
    const Grid& g = s.grid;
    std::vector<std::array<int, 3>> tri;
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) {
            const int a = g.index(i, j), b = g.index(i + 1, j), c = g.index(i + 1, j + 1), d = g.index(i, j + 1);
            if (!s.ok(a) || !s.ok(b) || !s.ok(c) || !s.ok(d)) continue;
            tri.push_back({a, b, c});
            tri.push_back({a, c, d});
        }
    return tri;
}

std::string sidecar_path(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ".csv";
    return path.substr(0, dot) + ".csv";
}

}  // namespace

void export_sigma(const SurfaceData& s, const std::string& path) {
    const Grid& g = s.grid;
    std::FILE* fp = open_or_throw(path, "w");
    std::fprintf(fp, "i,j,x,y,sigma,sigma_frame,status\n");
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            std::fprintf(fp, "%d,%d,%.17g,%.17g,%.17g,%.17g,%d\n", i, j, g.x(i), g.y(j), s.sigma[k], s.sigma_frame[k],
                         static_cast<int>(s.status[k]));
        }
    close_or_throw(fp, path);
}

void export_mesh(const SurfaceData& s, const std::string& path, MeshFormat format) {
    const Grid& g = s.grid;
    const auto tri = triangles(s);
    if (format == MeshFormat::Obj) {
        std::FILE* fp = open_or_throw(path, "w");
        for (int k = 0; k < g.size(); ++k)
            std::fprintf(fp, "v %.17g %.17g %.17g\n", s.f[k].x(), s.f[k].y(), s.f[k].z());
        for (const auto& t : tri) std::fprintf(fp, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        close_or_throw(fp, path);
        const std::string csv = sidecar_path(path);
        fp = open_or_throw(csv, "w");
        std::fprintf(fp, "x,y,fx,fy,fz,Nx,Ny,Nz,sigma,orient\n");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const int k = g.index(i, j);
                std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", g.x(i), g.y(j),
                             s.f[k].x(), s.f[k].y(), s.f[k].z(), s.N[k].x(), s.N[k].y(), s.N[k].z(), s.sigma[k],
                             orientation(s.sigma[k]));
            }
        close_or_throw(fp, csv);
        return;
    }
    const bool binary = format == MeshFormat::PlyBinary;
    std::FILE* fp = open_or_throw(path, binary ? "wb" : "w");
    std::fprintf(fp, "ply\nformat %s 1.0\n", binary ? "binary_little_endian" : "ascii");
    std::fprintf(fp, "element vertex %d\n", g.size());
    std::fprintf(fp,
                 "property double x\nproperty double y\nproperty double z\n"
                 "property double nx\nproperty double ny\nproperty double nz\n"
                 "property float sigma\nproperty char orient\n");
    std::fprintf(fp, "element face %zu\nproperty list uchar int vertex_indices\nend_header\n", tri.size());
    for (int k = 0; k < g.size(); ++k) {
        const double xyz[6] = {s.f[k].x(), s.f[k].y(), s.f[k].z(), s.N[k].x(), s.N[k].y(), s.N[k].z()};
        const float sg = static_cast<float>(s.sigma[k]);
        const signed char o = static_cast<signed char>(orientation(s.sigma[k]));
        if (binary) {
            // Little-endian hosts only; the build is configured for them.
            std::fwrite(xyz, sizeof(double), 6, fp);
            std::fwrite(&sg, sizeof(float), 1, fp);
            std::fwrite(&o, 1, 1, fp);
        } else {
            std::fprintf(fp, "%.17g %.17g %.17g %.17g %.17g %.17g %.9g %d\n", xyz[0], xyz[1], xyz[2], xyz[3], xyz[4],
                         xyz[5], static_cast<double>(sg), static_cast<int>(o));
        }
    }
    for (const auto& t : tri) {
        if (binary) {
            const unsigned char three = 3;
            const int idx[3] = {t[0], t[1], t[2]};
            std::fwrite(&three, 1, 1, fp);
            std::fwrite(idx, sizeof(int), 3, fp);
        } else {
            std::fprintf(fp, "3 %d %d %d\n", t[0], t[1], t[2]);
        }
    }
    close_or_throw(fp, path);
}

void export_contours(const std::vector<Contour>& contours, const std::string& path) {
    std::FILE* fp = open_or_throw(path, "w");
    std::fprintf(fp, "curve_id,x,y,fx,fy,fz\n");
    for (size_t c = 0; c < contours.size(); ++c) {
        const auto& pts = contours[c].points;
        const size_t n = pts.size() + (contours[c].closed && !pts.empty() ? 1 : 0);
        for (size_t q = 0; q < n; ++q) {
            const auto& p = pts[q % pts.size()];
            std::fprintf(fp, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", c, p.x, p.y, p.f.x(), p.f.y(), p.f.z());
        }
    }
    close_or_throw(fp, path);
}

double sphere_residual(const SurfaceData& s) {
    double r = 0.0;
    for (int k = 0; k < s.grid.size(); ++k)
        if (s.ok(k)) r = std::max(r, std::abs(s.N[k].norm() - 1.0));
    return r;
}

double harmonicity_residual(const SurfaceData& s) {
    const Grid& g = s.grid;
    if (g.nx < 7 || g.ny < 7) return 0.0;
    const auto& w = window_weights();
    double r = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int i0 = std::clamp(i - 3, 0, g.nx - 7), j0 = std::clamp(j - 3, 0, g.ny - 7);
            bool ok = true;
            Vec3 Nxy = Vec3::Zero();
            for (int b = 0; b < 7 && ok; ++b)
                for (int a = 0; a < 7 && ok; ++a) {
                    const int k = g.index(i0 + a, j0 + b);
                    ok = s.ok(k);
                    Nxy += w[i - i0][a] * w[j - j0][b] * s.N[k];
                }
            if (!ok) continue;
            Nxy /= g.hx() * g.hy();
            r = std::max(r, s.N[g.index(i, j)].cross(Nxy).norm());
        }
    return r;
}

double translation_gauge_residual(const SurfaceData& s, const std::vector<Vec3>& f_int) {
    const auto [ib, jb] = s.grid.nearest(s.base_x, s.base_y);
    const int kb = s.grid.index(ib, jb);
    const Vec3 d0 = s.f[kb] - f_int[kb];
    double r = 0.0;
    for (int k = 0; k < s.grid.size(); ++k)
        if (s.ok(k)) r = std::max(r, (s.f[k] - f_int[k] - d0).norm());
    return r;
}

}  // namespace lf
