#include <cmath>

#include "classify.hpp"
#include "errors.hpp"

namespace lf {

namespace {

struct Judge {
    bool exact;
    Verdict operator()(double v, double scale, bool sign = false) const {
        const double s = std::max(scale, 1.0);
        if (exact) {
            if (std::abs(v) <= 1e-12 * s) return Verdict::Zero;
        } else {
            if (std::abs(v) < 1e-6 * s) return Verdict::Zero;
            if (std::abs(v) <= 1e-4 * s) return Verdict::Indeterminate;
        }
        if (!sign) return Verdict::NonZero;
        return v > 0 ? Verdict::Positive : Verdict::Negative;
    }
};

bool is_zero(Verdict v) { return v == Verdict::Zero; }
bool is_nonzero(Verdict v) { return v == Verdict::NonZero || v == Verdict::Positive || v == Verdict::Negative; }

using P = Poly2<double>;

P abs_poly(const P& p) {
    P q(p.degree());
    for (int i = 0; i <= p.degree(); ++i)
        for (int j = 0; i + j <= p.degree(); ++j) q.at(i, j) = std::abs(p.at(i, j));
    return q;
}

}  // namespace

SingularityReport classify_abc(const AbcData& d, double t0) {
    if (t0 < d.t_min || t0 > d.t_max)
        throw Error(Status::NotOnCurve, "t0 = " + std::to_string(t0) + " lies outside the parameter interval");
    SingularityReport r;
    r.method = Method::Abc;
    r.x = t0;
    const bool exact = d.a.is_polynomial() && d.b.is_polynomial() && d.c.is_polynomial() && d.A.is_polynomial();
    const Judge judge{exact};
    double da[4], db[4], dc[4], dA[4];
    for (int k = 0; k < 4; ++k) {
        da[k] = d.a.derivative(t0, k);
        db[k] = d.b.derivative(t0, k);
        dc[k] = d.c.derivative(t0, k);
        dA[k] = d.A.derivative(t0, k);
    }
    if (!(dA[0] > 0)) throw Error(Status::InvalidArgument, "A must be positive at t0");
    double scale = 0.0;
    for (int k = 0; k < 4; ++k)
        scale = std::max({scale, std::abs(da[k]), std::abs(db[k]), std::abs(dc[k]), std::abs(dA[k])});
    auto add = [&](const std::string& id, double v, Verdict verdict) {
        r.conditions.push_back({id, v, verdict});
        return verdict;
    };
    const Verdict va = add("a", da[0], judge(da[0], scale));
    const Verdict vb = add("b", db[0], judge(db[0], scale));

    if (is_zero(va) && is_zero(vb)) {
        // Not a wave front.
        const Verdict v1 = add("a'", da[1], judge(da[1], scale));
        if (is_nonzero(v1)) {
            const double q = da[1] * db[2] - db[1] * da[2] + 2 * dc[0] * (da[1] * da[1] + db[1] * db[1]);
            const double qs = std::abs(da[1] * db[2]) + std::abs(db[1] * da[2]) +
                              std::abs(2 * dc[0] * (da[1] * da[1] + db[1] * db[1]));
            const Verdict vq = add("a'b''-b'a''+2c(a'^2+b'^2)", q, judge(q, std::max(qs, scale)));
            if (is_nonzero(vq)) {
                r.label = Label::TwoFiveCuspidalEdge;
                r.codimension = 1;
            } else {
                r.note = "2/5-edge discriminant not resolved as nonzero";
            }
            return r;
        }
        if (is_zero(v1)) {
            const double bc = db[1] * dc[0];
            const Verdict vm = add("b'c", bc, judge(bc, scale));
            if (is_nonzero(vm)) {
                const double sh = da[2] - 2 * bc;
                const Verdict vs = add("a''-2b'c", sh, judge(sh, scale));
                if (is_nonzero(vs)) {
                    r.label = Label::Shcherbak;
                    r.codimension = 1;
                    return r;
                }
            }
            r.note = "Morse/Shcherbak conditions not resolved as nonzero";
            return r;
        }
        r.note = "a' is within the indeterminate band";
        return r;
    }
    if (is_nonzero(va)) {
        r.label = Label::Regular;
        r.codimension = 0;
        return r;
    }
    if (!is_zero(va)) {
        r.note = "a is within the indeterminate band";
        return r;
    }

    const bool normal_form = is_zero(judge(db[0] + 1, scale)) && is_zero(judge(db[1], scale)) &&
                             is_zero(judge(db[2], scale)) && is_zero(judge(db[3], scale)) &&
                             is_zero(judge(dA[0] - 1, scale)) && is_zero(judge(dA[1], scale)) &&
                             is_zero(judge(dA[2], scale)) && is_zero(judge(dA[3], scale));
    if (normal_form) {
        const Verdict v1 = add("a'", da[1], judge(da[1], scale));
        if (is_nonzero(v1)) {
            r.label = Label::CuspidalEdge;
            r.codimension = 0;
            return r;
        }
        if (!is_zero(v1)) return r;
        const Verdict vc = add("c", dc[0], judge(dc[0], scale));
        const Verdict v2 = add("a''", da[2], judge(da[2], scale));
        if (is_nonzero(vc)) {
            if (is_nonzero(v2)) {
                r.label = Label::Swallowtail;
                r.codimension = 0;
                return r;
            }
            if (is_zero(v2)) {
                const Verdict v3 = add("a'''", da[3], judge(da[3], scale));
                if (is_nonzero(v3)) {
                    r.label = Label::CuspidalButterfly;
                    r.codimension = 1;
                    return r;
                }
            }
            r.note = "a'' and a''' not resolved";
            return r;
        }
        if (is_zero(vc)) {
            const double m = dc[1] * (da[2] + dc[1]);
            const Verdict vm = add("c'(a''+c')", m, judge(m, scale, true));
            if (vm == Verdict::Negative) {
                r.label = Label::CuspidalLips;
                r.codimension = 1;
                return r;
            }
            if (vm == Verdict::Positive && is_nonzero(v2)) {
                r.label = Label::CuspidalBeaks;
                r.codimension = 1;
                return r;
            }
            r.note = "lips/beaks conditions not resolved";
        }
        return r;
    }

    // General data: series in (t, s) around (t0, 0), x = t + s, y = t - s.
    constexpr int D = 3;
    auto seed = [&](const double* dv) {
        P p(D);
        double f = 1.0;
        for (int k = 0; k <= D; ++k) {
            if (k > 0) f *= k;
            p.at(k, 0) = dv[k] / f;
        }
        return p;
    };
    P a = seed(da), b = seed(db), c = seed(dc), A = seed(dA);
    for (int k = 0; k < D; ++k) {
        const P ra = b.mul(c, D).scaled(2) - a.dx();
        const P rb = a.mul(c, D).scaled(-2) - b.dx();
        const P rc = c.dx() - A.mul(a, D).scaled(2);
        const P rA = A.dx();
        for (int i = 0; i + k + 1 <= D; ++i) {
            a.at(i, k + 1) = ra.get(i, k) / (k + 1);
            b.at(i, k + 1) = rb.get(i, k) / (k + 1);
            c.at(i, k + 1) = rc.get(i, k) / (k + 1);
            A.at(i, k + 1) = rA.get(i, k) / (k + 1);
        }
    }
    const P et = (b - A).scaled(0.5), es = (b + A).scaled(0.5);
    const P e1 = directional(a, et, es, D - 1);
    const P e2 = directional(e1, et, es, D - 2);
    const P e3 = directional(e2, et, es, D - 3);
    const P aa = abs_poly(a), aet = abs_poly(et), aes = abs_poly(es);
    const P m1 = directional(aa, aet, aes, D - 1);
    const P m2 = directional(m1, aet, aes, D - 2);
    const P m3 = directional(m2, aet, aes, D - 3);
    const double gt = a.get(1, 0), gs = a.get(0, 1);
    const double gscale = std::max(scale, std::abs(gt) + std::abs(gs));
    const Verdict vg = add("|grad a|", std::hypot(gt, gs), judge(std::hypot(gt, gs), gscale));
    const Verdict v1 = add("eta a", e1.value_at_origin(), judge(e1.value_at_origin(), m1.value_at_origin()));
    const Verdict v2 = add("eta^2 a", e2.value_at_origin(), judge(e2.value_at_origin(), m2.value_at_origin()));
    r.note = "general (a, b, c, A) data: series criteria with eta = ((b-A)/2) d/dt + ((b+A)/2) d/ds";
    if (is_nonzero(vg)) {
        if (is_nonzero(v1)) {
            r.label = Label::CuspidalEdge;
            r.codimension = 0;
        } else if (is_zero(v1) && is_nonzero(v2)) {
            r.label = Label::Swallowtail;
            r.codimension = 0;
        } else if (is_zero(v1) && is_zero(v2)) {
            const Verdict v3 = add("eta^3 a", e3.value_at_origin(), judge(e3.value_at_origin(), m3.value_at_origin()));
            if (is_nonzero(v3)) {
                r.label = Label::CuspidalButterfly;
                r.codimension = 1;
            }
        }
        return r;
    }
    if (!is_zero(vg)) return r;
    const double hxx = 2 * a.get(2, 0), hxy = a.get(1, 1), hyy = 2 * a.get(0, 2);
    const double det = hxx * hyy - hxy * hxy;
    const Verdict vd = add("hess det", det, judge(det, std::abs(hxx * hyy) + hxy * hxy, true));
    if (vd == Verdict::Positive) {
        r.label = Label::CuspidalLips;
        r.codimension = 1;
    } else if (vd == Verdict::Negative && is_nonzero(v2)) {
        r.label = Label::CuspidalBeaks;
        r.codimension = 1;
    }
    return r;
}

}  // namespace lf
