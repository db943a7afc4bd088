#include <sstream>

#include "classify.hpp"
#include "errors.hpp"

namespace lf {

namespace {

using Q = Rational;
using P2 = Poly2<Q>;

Verdict exact_verdict(const Q& v, bool sign) {
    if (v == 0) return Verdict::Zero;
    if (!sign) return Verdict::NonZero;
    return v > 0 ? Verdict::Positive : Verdict::Negative;
}

struct Conds {
    std::vector<Condition>& out;
    void add(const std::string& id, const Q& v, bool sign = false) {
        out.push_back({id, to_double(v), exact_verdict(v, sign)});
    }
};

void need_order(const JetCoeffs<Q>& c, int k, const char* what) {
    if (c.n < k)
        throw Error(Status::OrderTooLow, std::string(what) + " needs a jet of order >= " + std::to_string(k) +
                                             " (got " + std::to_string(c.n) + "); pad with zero coefficients");
}

// Jacobian u_x v_y - u_y v_x of the expanded jet, exact through degree n-1.
P2 jacobian(const BivariateJet<Q>& j) {
    const int d = std::max(j.order - 1, 0);
    return j.u.dx().mul(j.v.dy(), d) - j.u.dy().mul(j.v.dx(), d);
}

Q edge_E2(const JetCoeffs<Q>& c) {
    return c.B1(1) * (c.A0(2) * c.B1(1) - c.A1(1) * c.B0(2)) + c.B0(1) * (c.A0(1) * c.B1(2) - c.A1(2) * c.B0(1));
}

Q swallowtail_E3(const JetCoeffs<Q>& c) {
    const Q a10 = c.A0(1), a20 = c.A0(2), a30 = c.A0(3), a11 = c.A1(1), a22 = c.A1(2), a33 = c.A1(3);
    const Q b10 = c.B0(1), b20 = c.B0(2), b30 = c.B0(3), b11 = c.B1(1), b22 = c.B1(2), b33 = c.B1(3);
    return 6 * b33 * a10 * b10 * b10 - 6 * b30 * a11 * b11 * b11 - 6 * a33 * b10 * b10 * b10 +
           6 * a30 * b11 * b11 * b11 + 4 * b20 * b22 * a10 * b11 - 4 * b20 * b22 * a11 * b10 +
           12 * a20 * b22 * b10 * b11 - 12 * a22 * b20 * b10 * b11 + a10 * a10 * a10 * b11 * b11 * b11 +
           3 * a10 * a10 * a11 * b10 * b11 * b11 - 3 * a10 * a11 * a11 * b10 * b10 * b11 +
           6 * a10 * b10 * b10 * b11 * b11 * b11 - a11 * a11 * a11 * b10 * b10 * b10 -
           6 * a11 * b10 * b10 * b10 * b11 * b11;
}

}  // namespace

SingularityReport classify_jet(const JetCoeffs<Q>& c0) {
    if (c0.n < 1) throw Error(Status::InvalidArgument, "empty jet");
    if (c0.n > kJetOrderCap) throw Error(Status::InvalidArgument, "jet order exceeds the cap");
    SingularityReport r;
    r.method = Method::Jet;
    Conds cond{r.conditions};
    // Coefficients beyond the given order are taken as zero.
    JetCoeffs<Q> c = c0.n < 5 ? c0.padded(5) : c0;
    if (c0.n < 5) r.note = "higher coefficients taken as zero";
    const bool nx = c.A0(1) != 0 || c.B0(1) != 0;
    const bool ny = c.A1(1) != 0 || c.B1(1) != 0;
    cond.add("N_x(0) nonzero", nx ? 1 : 0);
    cond.add("N_y(0) nonzero", ny ? 1 : 0);
    if (!nx && !ny) {
        r.label = Label::Rank0;
        r.codimension = 2;
        r.note = "rank 0 at the origin; codimension >= 2";
        return r;
    }
    if (nx && ny) {
        const Q det = c.B1(1) * c.A0(1) - c.B0(1) * c.A1(1);
        cond.add("b11*a10-b10*a11", det);
        if (det != 0) {
            r.label = Label::Regular;
            r.codimension = 0;
            return r;
        }
        need_order(c, 2, "the singular wave-front branch");
        const BivariateJet<Q> j = expand_jet(c);
        const int n = c.n;
        const bool use_u = c.B0(1) == 0 && c.B1(1) == 0;
        const P2 sigma = jacobian(j);
        const P2 ex = (use_u ? j.u.dy() : j.v.dy()).truncated(n - 1);
        const P2 ey = (use_u ? j.u.dx() : j.v.dx()).truncated(n - 1);
        if (use_u) r.note += (r.note.empty() ? "" : "; ") + std::string("null direction taken from u");
        const Q g1 = c.A0(2) * c.B1(1) - c.A1(1) * c.B0(2);
        const Q g2 = c.A0(1) * c.B1(2) - c.A1(2) * c.B0(1);
        cond.add("a20*b11-a11*b20", g1);
        cond.add("a10*b22-a22*b10", g2);
        const P2 es = directional(sigma, ex, ey, std::max(n - 2, 0));
        cond.add("edge E2", edge_E2(c));
        cond.add("eta sigma", es.value_at_origin());
        if (g1 != 0 || g2 != 0) {
            if (es.value_at_origin() != 0) {
                r.label = Label::CuspidalEdge;
                r.codimension = 0;
                return r;
            }
            need_order(c, 3, "the swallowtail test");
            const P2 ees = directional(es, ex, ey, n - 3);
            cond.add("swallowtail E3", swallowtail_E3(c));
            cond.add("eta^2 sigma", ees.value_at_origin());
            if (ees.value_at_origin() != 0) {
                r.label = Label::Swallowtail;
                r.codimension = 0;
                return r;
            }
            need_order(c, 5, "the butterfly test");
            const P2 eees = directional(ees, ex, ey, n - 4);
            cond.add("eta^3 sigma", eees.value_at_origin());
            if (eees.value_at_origin() != 0) {
                r.label = Label::CuspidalButterfly;
                r.codimension = 1;
                return r;
            }
            r.label = Label::Unresolved;
            r.note = "eta sigma, eta^2 sigma and eta^3 sigma all vanish";
            return r;
        }
        need_order(c, 3, "the Morse test");
        const Q hxx = 2 * sigma.get(2, 0), hxy = sigma.get(1, 1), hyy = 2 * sigma.get(0, 2);
        const Q hdet = hxx * hyy - hxy * hxy;
        const P2 ees = directional(es, ex, ey, n - 3);
        cond.add("hess_xx", hxx);
        cond.add("hess_xy", hxy);
        cond.add("hess_yy", hyy);
        cond.add("hess_det", hdet, true);
        cond.add("eta^2 sigma", ees.value_at_origin());
        const Q K30 = c.A0(1) * c.B0(3) - c.A0(3) * c.B0(1);
        const Q K33 = c.A0(1) * c.B1(3) - c.A1(3) * c.B0(1);
        cond.add("(a10b30-a30b10)a11^3-(a10b33-a33b10)a10^3",
                 K30 * c.A1(1) * c.A1(1) * c.A1(1) - K33 * c.A0(1) * c.A0(1) * c.A0(1));
        if (hdet > 0) {
            r.label = Label::CuspidalLips;
            r.codimension = 1;
        } else if (hdet < 0 && ees.value_at_origin() != 0) {
            r.label = Label::CuspidalBeaks;
            r.codimension = 1;
        } else {
            r.label = Label::Unresolved;
            r.note = hdet == 0 ? "degenerate Hessian of sigma" : "eta^2 sigma vanishes at a saddle of sigma";
        }
        return r;
    }
    // Not a wave front: bring to N_y(0) = 0 and a10 != 0.
    std::string swaps;
    if (ny) {
        c = c.swapped_xy();
        swaps += "x<->y ";
    }
    if (c.A0(1) == 0) {
        c = c.swapped_uv();
        swaps += "u<->v ";
    }
    if (!swaps.empty()) r.note += std::string(r.note.empty() ? "" : "; ") + "normalized by " + swaps.substr(0, swaps.size() - 1);
    need_order(c, 3, "the non-wave-front branch");
    const Q R = c.A0(1) * c.B1(2) - c.A1(2) * c.B0(1);
    cond.add("a10*b22-a22*b10", R);
    if (R != 0) {
        const Q T = c.A1(2) * c.B1(3) - c.A1(3) * c.B1(2);
        cond.add("a22*b33-a33*b22", T);
        if (T != 0) {
            r.label = Label::TwoFiveCuspidalEdge;
            r.codimension = 1;
        } else {
            r.label = Label::Unresolved;
            r.note += (r.note.empty() ? "" : "; ") + std::string("[N, N_yy, N_yyy] vanishes");
        }
        return r;
    }
    need_order(c, 5, "the Shcherbak test");
    const Q m1 = c.A1(2) * (c.A0(1) * c.B0(2) - c.A0(2) * c.B0(1));
    const Q m2 = c.A0(1) * c.B1(3) - c.A1(3) * c.B0(1);
    cond.add("a22*(a10*b20-a20*b10)", m1);
    cond.add("a10*b33-a33*b10", m2);
    if (m1 != 0 && m2 != 0) {
        r.label = Label::Shcherbak;
        r.codimension = 1;
    } else {
        r.label = Label::Unresolved;
        r.note += (r.note.empty() ? "" : "; ") + std::string("Morse conditions fail");
    }
    return r;
}

MongeTaylorTangent monge_taylor_tangent(const BivariateJet<Q>& j) {
    if (j.order < 2) throw Error(Status::OrderTooLow, "Monge-Taylor tangent needs order >= 2");
    const int n = j.order;
    const P2 ux = j.u.dx(), uy = j.u.dy(), vx = j.v.dx(), vy = j.v.dy();
    const Q ux0 = ux.value_at_origin(), uy0 = uy.value_at_origin(), vx0 = vx.value_at_origin(),
            vy0 = vy.value_at_origin();
    auto minus_const = [&](const P2& p) {
        P2 q = p.truncated(n);
        q.at(0, 0) = 0;
        return q;
    };
    MongeTaylorTangent t;
    t.U1 = minus_const(ux) - (j.u.scaled(ux0) + j.v.scaled(vx0)).mul(j.u, n);
    t.U2 = minus_const(uy) - (j.u.scaled(uy0) + j.v.scaled(vy0)).mul(j.u, n);
    t.V1 = minus_const(vx) - (j.u.scaled(ux0) + j.v.scaled(vx0)).mul(j.v, n);
    t.V2 = minus_const(vy) - (j.u.scaled(uy0) + j.v.scaled(vy0)).mul(j.v, n);
    return t;
}

FamilyReport family_genericity(const FamilyJet& fj0) {
    const SingularityReport base = classify_jet(fj0.base);
    FamilyReport r;
    r.stratum = base.label;
    if (base.label != Label::TwoFiveCuspidalEdge && base.label != Label::Shcherbak)
        throw Error(Status::WrongStratum, std::string("base jet is ") + label_name(base.label) +
                                              ", not a 2/5-cuspidal edge or Shcherbak germ");
    // Apply the same normalization as classify_jet.
    FamilyJet fj = fj0;
    const bool ny = fj.base.A1(1) != 0 || fj.base.B1(1) != 0;
    if (ny) {
        fj.base = fj.base.swapped_xy();
        std::swap(fj.usx, fj.usy);
        std::swap(fj.vsx, fj.vsy);
    }
    if (fj.base.A0(1) == 0) {
        fj.base = fj.base.swapped_uv();
        std::swap(fj.usx, fj.vsx);
        std::swap(fj.usy, fj.vsy);
    }
    const auto& c = fj.base;
    Conds cond{r.conditions};
    if (base.label == Label::TwoFiveCuspidalEdge) {
        const Q ca = c.B1(2) * fj.usy - c.A1(2) * fj.vsy;
        const Q cb = c.B0(1) * fj.usx - c.A0(1) * fj.vsx;
        const Q dp = c.B0(1) * c.B1(2) * fj.usy + (2 * c.A1(2) * c.B0(1) - 3 * c.A0(1) * c.B1(2)) * fj.vsy;
        cond.add("(a) b22*u_sy-a22*v_sy", ca);
        cond.add("(b) b10*u_sx-a10*v_sx", cb);
        cond.add("double point b10*b22*u_sy+(2a22*b10-3a10*b22)*v_sy", dp, true);
        r.double_point_side = dp > 0 ? 1 : (dp < 0 ? -1 : 0);
        r.note = "double points are born on the side where the family parameter has the sign of the double-point value";
    } else {
        const Q tr = c.B0(1) * fj.usy - c.A0(1) * fj.vsy;
        cond.add("transversality b10*u_sy-a10*v_sy", tr);
        cond.add("a22*(a10*b20-a20*b10)", c.A1(2) * (c.A0(1) * c.B0(2) - c.A0(2) * c.B0(1)));
        cond.add("a10*b33-a33*b10", c.A0(1) * c.B1(3) - c.A1(3) * c.B0(1));
    }
    if (!base.note.empty()) r.note = r.note.empty() ? base.note : base.note + "; " + r.note;
    return r;
}

namespace {

// p(P, Q) truncated to `deg`.
P2 compose(const P2& p, const P2& P, const P2& Qp, int deg) {
    P2 acc(deg);
    std::vector<P2> pw{P2::constant(deg, 1)}, qw{P2::constant(deg, 1)};
    for (int k = 1; k <= p.degree(); ++k) {
        pw.push_back(pw.back().mul(P, deg));
        qw.push_back(qw.back().mul(Qp, deg));
    }
    for (int i = 0; i <= p.degree(); ++i)
        for (int j = 0; i + j <= p.degree(); ++j)
            if (p.at(i, j) != 0) acc = acc + pw[i].mul(qw[j], deg).scaled(p.at(i, j));
    return acc;
}

P2 var_x(int deg) {
    P2 p(deg);
    if (deg >= 1) p.at(1, 0) = 1;
    return p;
}
P2 var_y(int deg) {
    P2 p(deg);
    if (deg >= 1) p.at(0, 1) = 1;
    return p;
}

}  // namespace

GaussMapReport classify_gauss_map_jet(const JetCoeffs<Q>& c0) {
    if (c0.n < 3) throw Error(Status::OrderTooLow, "Gauss-map classification needs a jet of order >= 3");
    GaussMapReport r;
    Conds cond{r.conditions};
    JetCoeffs<Q> c = c0;
    const bool rank0 = c.A0(1) == 0 && c.A1(1) == 0 && c.B0(1) == 0 && c.B1(1) == 0;
    if (rank0) {
        const Q I22 = c.A0(2) * c.B1(2) - c.A1(2) * c.B0(2);
        cond.add("a20*b22-a22*b20", I22);
        if (I22 != 0) {
            r.label = "RankZeroI22";
            r.note = "j^2 N equivalent to (x^2, y^2)";
        } else {
            r.label = "Excluded";
            r.note = "rank-0 germ with degenerate quadratic part cannot be represented";
        }
        return r;
    }
    const Q det = c.B1(1) * c.A0(1) - c.B0(1) * c.A1(1);
    cond.add("b11*a10-b10*a11", det);
    if (det != 0) {
        r.label = "Regular";
        return r;
    }
    std::string swaps;
    if (c.A0(1) == 0 && c.B0(1) == 0) {
        c = c.swapped_xy();
        swaps += "x<->y ";
    }
    if (c.A0(1) == 0) {
        c = c.swapped_uv();
        swaps += "u<->v ";
    }
    if (!swaps.empty()) r.note += std::string(r.note.empty() ? "" : "; ") + "normalized by " + swaps.substr(0, swaps.size() - 1);
    const Q a10 = c.A0(1), a11 = c.A1(1), b10 = c.B0(1);
    const Q K20 = a10 * c.B0(2) - c.A0(2) * b10;
    const Q K22 = a10 * c.B1(2) - c.A1(2) * b10;
    const Q K30 = a10 * c.B0(3) - c.A0(3) * b10;
    const Q K33 = a10 * c.B1(3) - c.A1(3) * b10;
    const Q cyy = (K20 * a11 * a11 + K22 * a10 * a10) / (a10 * a10 * a10);
    const Q cxy = 2 * a11 * K20 / (a10 * a10 * a10);
    cond.add("y^2 coefficient of j^2 g", cyy);
    cond.add("a11*(a10*b20-a20*b10)", a11 * K20);

    const int n = c.n;
    const BivariateJet<Q> j = expand_jet(c);
    if (cyy != 0) {
        r.label = "Fold";
        r.series_index = 2;
        return r;
    }
    if (a11 * K20 != 0) {
        // Order of eta(lambda) along Sigma, Sigma parametrized as a power series.
        const P2 lam = jacobian(j);
        const P2 ex = (-j.u.dy()).truncated(n - 1), ey = j.u.dx().truncated(n - 1);
        const P2 el = directional(lam, ex, ey, n - 2);
        const int D = n - 2;
        const Q lx = lam.get(1, 0), ly = lam.get(0, 1);
        P2 curve(D);  // one coordinate of Sigma as a series in t (stored in the x slot)
        const bool solve_x = lx != 0;
        for (int it = 0; it <= D + 1; ++it) {
            const P2 tvar = var_x(D);
            const P2 X = solve_x ? curve : tvar, Y = solve_x ? tvar : curve;
            const P2 val = compose(lam.truncated(D), X, Y, D);
            curve = curve - val.scaled(Q(1) / (solve_x ? lx : ly));
        }
        const P2 tvar = var_x(D);
        const P2 X = solve_x ? curve : tvar, Y = solve_x ? tvar : curve;
        const P2 along = compose(el, X, Y, D);
        int ord = -1;
        for (int k = 0; k <= D; ++k)
            if (along.get(k, 0) != 0) {
                ord = k;
                break;
            }
        if (ord < 0) {
            r.label = "Deeper";
            r.note += (r.note.empty() ? "" : "; ") + std::string("series index beyond the jet order");
            return r;
        }
        r.label = "CuspSeries";
        r.series_index = 2 + ord;
        cond.add("first nonzero coefficient of eta(lambda) along Sigma", along.get(ord, 0));
        return r;
    }
    // j^2 g vanishes: reduce N to (x, g(x, y)) and read the cubic part.
    const int D = 3;
    const P2 u = j.u.truncated(D), v = j.v.truncated(D);
    P2 xs = var_x(D).scaled(Q(1) / a10);
    for (int it = 0; it < 4; ++it) {
        const P2 ex = compose(u, xs, var_y(D), D) - var_x(D);
        xs = xs - ex.scaled(Q(1) / a10);
    }
    P2 g = compose(v, xs, var_y(D), D);
    for (int i = 0; i <= D; ++i) g.at(i, 0) = 0;
    // Source-coordinate normalization X = a10 x, overall factor a10^4.
    const Q s4 = a10 * a10 * a10 * a10;
    const Q l1 = g.get(2, 1) * a10 * a10 * s4, l2 = g.get(1, 2) * a10 * s4, l3 = g.get(0, 3) * s4;
    cond.add("xy coefficient of j^2 g", cxy);
    cond.add("l1", l1);
    cond.add("l2", l2);
    cond.add("l3", l3);
    const Q disc = l2 * l2 - 3 * l1 * l3;
    cond.add("l2^2-3*l1*l3", disc, true);
    cond.add("printed l1 = -3*a11*(a10*b33-a33*b10)", -3 * a11 * K33);
    cond.add("printed l2 = 3*a11^2*(a10*b33-a33*b10)", 3 * a11 * a11 * K33);
    cond.add("printed l3", K33 * a10 * a10 * a10 - K30 * a11 * a11 * a11);
    cond.add("printed discriminant (a10b30-a30b10)(a10b33-a33b10)", K30 * K33, true);
    if (l3 != 0 && disc < 0) {
        r.label = "Lips";
    } else if (l3 != 0 && disc > 0) {
        r.label = "Beaks";
    } else if (l1 != 0 && l2 == 0 && l3 == 0) {
        r.label = "Excluded";
        r.note += (r.note.empty() ? "" : "; ") + std::string("3-jet of type (x, x^2 y) cannot be represented");
    } else {
        r.label = "Deeper";
    }
    return r;
}

}  // namespace lf
