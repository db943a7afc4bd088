#include "cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>

#include "errors.hpp"

namespace lf {

namespace {

struct Geometry {
    Vec3 N0, dN0, V, dV;
};

Geometry sample(const GeometricCauchyData& d, double t) {
    Geometry g;
    g.N0 = d.N0(t);
    g.V = d.V(t);
    g.dN0 = d.dN0 ? d.dN0(t) : central_derivative(d.N0, t, 1);
    g.dV = d.dV ? d.dV(t) : central_derivative(d.V, t, 1);
    return g;
}

struct AbcPoint {
    double a, b, c, A;
    double bA;        // <V - N0', V>
    double c_num;     // numerator of the quotient formula for c
    int eps;
};

AbcPoint abc_at(const Geometry& g) {
    AbcPoint p{};
    p.A = g.V.norm();
    const double dA = p.A > 0 ? g.V.dot(g.dV) / p.A : 0.0;
    const Vec3 nv = g.N0.cross(g.V);
    p.a = g.dN0.dot(nv) / p.A;
    p.bA = (g.V - g.dN0).dot(g.V);
    p.b = p.bA / p.A;
    p.c_num = (g.dN0 - g.V).dot(g.N0.cross(g.dV)) - g.dN0.dot(nv) * dA / p.A;
    // Quotient away from zeros of b; the equivalent direct form <V', N0 x V>/A^2 near them.
    if (std::abs(p.bA) > 1e-3 * p.A * p.A)
        p.c = p.c_num / p.bA;
    else
        p.c = g.dV.dot(nv) / (p.A * p.A);
    const double e = g.dV.cross(g.N0).dot(g.V);
    p.eps = e > 0 ? 1 : (e < 0 ? -1 : 0);
    return p;
}

}  // namespace

std::array<double, 4> AbcData::eval(double t) const {
    if (joint) return joint(t);
    return {a(t), b(t), c(t), A(t)};
}

AbcData geometric_to_abc(const GeometricCauchyData& d) {
    if (!d.N0 || !d.V) throw Error(Status::InvalidArgument, "geometric Cauchy data needs N0 and V");
    if (!(d.t_max > d.t_min)) throw Error(Status::InvalidArgument, "empty parameter interval");
    AbcData out;
    out.t_min = d.t_min;
    out.t_max = d.t_max;
    out.t0 = d.t0;
    double max_b = 0.0, min_A = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kValidationSamples; ++k) {
        const double t = d.t_min + (d.t_max - d.t_min) * k / (kValidationSamples - 1);
        const Geometry g = sample(d, t);
        if (std::abs(g.N0.norm() - 1.0) > 1e-6)
            throw Error(Status::InvalidArgument, "N0 is not a unit vector at t = " + std::to_string(t));
        const double A = g.V.norm();
        min_A = std::min(min_A, A);
        if (A < 1e-10) throw Error(Status::ZeroTransverseDerivative, "|V| vanishes at t = " + std::to_string(t));
        if (std::abs(g.V.dot(g.N0)) > 1e-6 * std::max(1.0, A))
            throw Error(Status::InvalidArgument, "V is not tangent to the sphere at t = " + std::to_string(t));
        if (d.A && std::abs(d.A(t) - A) > 1e-6 * std::max(1.0, A))
            throw Error(Status::InvalidArgument, "A differs from |V| at t = " + std::to_string(t));
        const AbcPoint p = abc_at(g);
        max_b = std::max(max_b, std::abs(p.bA) / (A * A));
        if (std::abs(p.bA) < 1e-10 * A * A && std::abs(p.c_num) > 1e-6 * std::max(1.0, A * A))
            throw Error(Status::DegenerateData,
                        "<V - N0', V> vanishes while the c numerator does not at t = " + std::to_string(t));
        out.epsilon.push_back(p.eps);
    }
    // Differenced or sampled inputs carry derivative noise, so "identically zero" is judged above it.
    if (max_b < std::max(1e-8, 10.0 * d.derivative_noise / min_A))
        throw Error(Status::DegenerateData, "<V - N0', V> vanishes identically");

    auto data = std::make_shared<GeometricCauchyData>(d);
    auto point = [data](double t) { return abc_at(sample(*data, t)); };
    out.a = UniFunc::callable([point](double t) { return point(t).a; });
    out.b = UniFunc::callable([point](double t) { return point(t).b; });
    out.c = UniFunc::callable([point](double t) { return point(t).c; });
    out.A = UniFunc::callable([point](double t) { return point(t).A; });
    out.joint = [point](double t) {
        const AbcPoint p = point(t);
        return std::array<double, 4>{p.a, p.b, p.c, p.A};
    };
    return out;
}

Mat2 adapted_initial_frame(const Vec3& N0, const Vec3& V) {
    const Vec3 n = N0.normalized();
    const Vec3 e2 = (-V).normalized();
    Eigen::Matrix3d R;
    R.col(0) = e2.cross(n);
    R.col(1) = e2;
    R.col(2) = n;
    return su2_from_rotation(R);
}

PotentialPair abc_to_potential(const AbcData& d, const Mat2& F0) {
    PotentialPair p;
    p.x0 = p.y0 = d.t0;
    p.F0 = F0;
    p.abc = d;
    auto shared = std::make_shared<AbcData>(d);
    auto eval = [shared](double t, Mat2* out) {
        const auto [a, b, c, A] = shared->eval(t);
        out[0] = -b * e1() + a * e2();
        out[1] = c * e3();
        out[2] = A * e1();
    };
    p.chi = LoopAlgebraForm{-1, 1, eval};
    p.psi = LoopAlgebraForm{-1, 1, eval};
    // Along the diagonal the frame solves F' = F (alpha_0 at lambda = 1).
    p.diagonal = [shared, F0](double t) {
        const double t0 = shared->t0;
        const int steps = std::max(1, static_cast<int>(std::ceil(512.0 * std::abs(t - t0))));
        const double h = (t - t0) / steps;
        auto rhs = [&](double s, const Mat2& F) {
            const auto [a, b, c, A] = shared->eval(s);
            const Mat2 alpha = (A - b) * e1() + a * e2() + c * e3();
            return Mat2(F * alpha);
        };
        Mat2 F = F0;
        double s = t0;
        for (int k = 0; k < steps; ++k) {
            const Mat2 k1 = rhs(s, F);
            const Mat2 k2 = rhs(s + h / 2, F + (h / 2) * k1);
            const Mat2 k3 = rhs(s + h / 2, F + (h / 2) * k2);
            const Mat2 k4 = rhs(s + h, F + h * k3);
            F += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            s += h;
        }
        const double A = shared->eval(t)[3];
        return std::make_pair(adjoint_unchecked(F, Vec3(0, 0, 1)), Vec3(-A * adjoint_unchecked(F, Vec3(0, 1, 0))));
    };
    return p;
}

PotentialPair geometric_to_potential(const GeometricCauchyData& d) {
    const AbcData abc = geometric_to_abc(d);
    PotentialPair p = abc_to_potential(abc, adapted_initial_frame(d.N0(d.t0), d.V(d.t0)));
    auto data = std::make_shared<GeometricCauchyData>(d);
    p.diagonal = [data](double t) { return std::make_pair(data->N0(t), data->V(t)); };
    return p;
}

GeometricCauchyData jet_geometric_data(const BivariateJet<double>& j, double t_min, double t_max) {
    auto jet = std::make_shared<BivariateJet<double>>(j);
    GeometricCauchyData d;
    d.N0 = [jet](double t) { return jet_eval(*jet, t, t).N; };
    d.V = [jet](double t) { return jet_eval(*jet, t, t).d[1][0]; };
    d.dN0 = [jet](double t) {
        const JetEval e = jet_eval(*jet, t, t);
        return Vec3(e.d[1][0] + e.d[0][1]);
    };
    d.dV = [jet](double t) {
        const JetEval e = jet_eval(*jet, t, t);
        return Vec3(e.d[2][0] + e.d[1][1]);
    };
    d.t_min = t_min;
    d.t_max = t_max;
    d.t0 = 0.0;
    return d;
}

PotentialPair jet_to_potential(const BivariateJet<double>& j, double t_min, double t_max) {
    GeometricCauchyData d = jet_geometric_data(j, t_min, t_max);
    AbcData abc = geometric_to_abc(d);
    // One jet evaluation per parameter value for the combined evaluator.
    auto jet = std::make_shared<BivariateJet<double>>(j);
    abc.joint = [jet](double t) {
        const JetEval e = jet_eval(*jet, t, t);
        const Geometry g{e.N, Vec3(e.d[1][0] + e.d[0][1]), e.d[1][0], Vec3(e.d[2][0] + e.d[1][1])};
        const AbcPoint p = abc_at(g);
        return std::array<double, 4>{p.a, p.b, p.c, p.A};
    };
    PotentialPair p = abc_to_potential(abc, adapted_initial_frame(Vec3(0, 0, 1), d.V(0.0)));
    p.diagonal = [jet](double t) {
        const JetEval e = jet_eval(*jet, t, t);
        return std::make_pair(e.N, e.d[1][0]);
    };
    return p;
}

}  // namespace lf

namespace lf {

GeometricCauchyData geometric_from_samples(const std::vector<double>& t, const std::vector<Vec3>& N0,
                                           const std::vector<Vec3>& V, double t0) {
    using Spline = boost::math::interpolators::cardinal_quintic_b_spline<double>;
    const size_t n = t.size();
    if (n < 8 || N0.size() != n || V.size() != n)
        throw Error(Status::InvalidArgument, "geometric samples need at least 8 rows of t, N0 and V");
    const double h = (t.back() - t.front()) / static_cast<double>(n - 1);
    if (!(h > 0)) throw Error(Status::InvalidArgument, "sample parameters must increase");
    for (size_t i = 0; i < n; ++i)
        if (std::abs(t[i] - (t.front() + h * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(t[i])))
            throw Error(Status::InvalidArgument, "sample parameters must be uniformly spaced");
    if (t0 < t.front() || t0 > t.back()) throw Error(Status::InvalidArgument, "base parameter outside the samples");
    auto make = [&](const std::vector<Vec3>& v) {
        std::array<std::shared_ptr<Spline>, 3> s;
        for (int c = 0; c < 3; ++c) {
            std::vector<double> col(n);
            for (size_t i = 0; i < n; ++i) col[i] = v[i][c];
            s[c] = std::make_shared<Spline>(col.data(), n, t.front(), h);
        }
        return s;
    };
    const auto sn = make(N0), sv = make(V);
    const double lo = t.front(), hi = t.back();
    // Quadratic Taylor continuation outside the samples, for difference stencils near the ends.
    auto value = [lo, hi](const Spline& sp, double x) {
        const double e = std::clamp(x, lo, hi), dx = x - e;
        if (dx == 0.0) return sp(x);
        return sp(e) + dx * sp.prime(e) + 0.5 * dx * dx * sp.double_prime(e);
    };
    auto slope = [lo, hi](const Spline& sp, double x) {
        const double e = std::clamp(x, lo, hi);
        return sp.prime(e) + (x - e) * sp.double_prime(e);
    };
    auto vec = [value](const std::array<std::shared_ptr<Spline>, 3>& s, double x) {
        return Vec3(value(*s[0], x), value(*s[1], x), value(*s[2], x));
    };
    auto dvec = [slope](const std::array<std::shared_ptr<Spline>, 3>& s, double x) {
        return Vec3(slope(*s[0], x), slope(*s[1], x), slope(*s[2], x));
    };
    GeometricCauchyData d;
    d.t_min = lo;
    d.t_max = hi;
    d.t0 = t0;
    // N0 is renormalized after interpolation.
    d.N0 = [sn, vec](double x) { return Vec3(vec(sn, x).normalized()); };
    d.dN0 = [sn, vec, dvec](double x) {
        const Vec3 s = vec(sn, x), sp = dvec(sn, x);
        const double r = s.norm();
        const Vec3 u = s / r;
        return Vec3((sp - u * u.dot(sp)) / r);
    };
    d.V = [sv, vec](double x) { return vec(sv, x); };
    d.dV = [sv, dvec](double x) { return dvec(sv, x); };
    // Spline slope against a fourth-order difference of the raw samples; conservative.
    for (size_t i = 2; i + 2 < n; ++i) {
        const Vec3 fd = (N0[i - 2] - 8.0 * N0[i - 1] + 8.0 * N0[i + 1] - N0[i + 2]) / (12.0 * h);
        d.derivative_noise = std::max(d.derivative_noise, (dvec(sn, t[i]) - fd).cwiseAbs().maxCoeff());
    }
    return d;
}

}  // namespace lf
