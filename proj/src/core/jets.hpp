#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "poly2.hpp"

namespace lf {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kJetOrderCap = 8;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double v) { return v; }

// Free jet parameters: a0[i-1] = a_{i0}, a1[i-1] = a_{ii}, b0[i-1] = b_{i0}, b1[i-1] = b_{ii}.
template <class T>
struct JetCoeffs {
    int n = 0;
    std::vector<T> a0, a1, b0, b1;

    JetCoeffs() = default;
    explicit JetCoeffs(int order) : n(order), a0(order, T(0)), a1(order, T(0)), b0(order, T(0)), b1(order, T(0)) {}

    // Coefficient accessors by degree (1-based); zero beyond the order.
    T A0(int i) const { return i >= 1 && i <= n ? a0[i - 1] : T(0); }
    T A1(int i) const { return i >= 1 && i <= n ? a1[i - 1] : T(0); }
    T B0(int i) const { return i >= 1 && i <= n ? b0[i - 1] : T(0); }
    T B1(int i) const { return i >= 1 && i <= n ? b1[i - 1] : T(0); }

    JetCoeffs padded(int m) const {
        JetCoeffs r(std::max(m, n));
        for (int i = 0; i < n; ++i) {
            r.a0[i] = a0[i];
            r.a1[i] = a1[i];
            r.b0[i] = b0[i];
            r.b1[i] = b1[i];
        }
        return r;
    }

    // Exchange u and v (a <-> b).
    JetCoeffs swapped_uv() const {
        JetCoeffs r(*this);
        std::swap(r.a0, r.b0);
        std::swap(r.a1, r.b1);
        return r;
    }
    // Exchange x and y (pure x coefficients <-> pure y coefficients).
    JetCoeffs swapped_xy() const {
        JetCoeffs r(*this);
        std::swap(r.a0, r.a1);
        std::swap(r.b0, r.b1);
        return r;
    }

    template <class S>
    JetCoeffs<S> cast() const {
        JetCoeffs<S> r(n);
        for (int i = 0; i < n; ++i) {
            r.a0[i] = static_cast<S>(a0[i]);
            r.a1[i] = static_cast<S>(a1[i]);
            r.b0[i] = static_cast<S>(b0[i]);
            r.b1[i] = static_cast<S>(b1[i]);
        }
        return r;
    }
};

template <class T>
struct BivariateJet {
    int order = 0;
    Poly2<T> u, v;
};

template <class T>
struct PolyCauchyData {
    std::vector<T> alpha, beta, lambda, mu;
};

namespace detail {

// (1+u^2+v^2) u_xy - 2 u u_x u_y - v (u_x v_y + u_y v_x), truncated to `deg`.
template <class T>
Poly2<T> harmonic_residual(const Poly2<T>& u, const Poly2<T>& v, int deg) {
    const Poly2<T> ux = u.dx(), uy = u.dy(), vx = v.dx(), vy = v.dy();
    const Poly2<T> uxy = ux.dy();
    const Poly2<T> w = u.mul(u, deg) + v.mul(v, deg);
    Poly2<T> lhs = uxy.truncated(deg) + w.mul(uxy, deg);
    Poly2<T> rhs = u.mul(ux, deg).mul(uy, deg).scaled(T(2)) + v.mul(ux.mul(vy, deg) + uy.mul(vx, deg), deg);
    return lhs - rhs;
}

// Right-hand side 2 u u_x u_y + v (u_x v_y + u_y v_x) - (u^2+v^2) u_xy, truncated to `deg`.
template <class T>
Poly2<T> mixed_source(const Poly2<T>& u, const Poly2<T>& v, int deg) {
    const Poly2<T> ux = u.dx(), uy = u.dy(), vx = v.dx(), vy = v.dy();
    const Poly2<T> uxy = ux.dy();
    const Poly2<T> w = u.mul(u, deg) + v.mul(v, deg);
    return u.mul(ux, deg).mul(uy, deg).scaled(T(2)) + v.mul(ux.mul(vy, deg) + uy.mul(vx, deg), deg) - w.mul(uxy, deg);
}

}  // namespace detail

template <class T>
BivariateJet<T> expand_jet(const JetCoeffs<T>& c) {
    const int n = c.n;
    BivariateJet<T> j;
    j.order = n;
    j.u = Poly2<T>(n);
    j.v = Poly2<T>(n);
    for (int k = 1; k <= n; ++k) {
        j.u.at(k, 0) = c.A0(k);
        j.u.at(0, k) = c.A1(k);
        j.v.at(k, 0) = c.B0(k);
        j.v.at(0, k) = c.B1(k);
    }
    // Mixed coefficients of degree k are forced by the residual at degree k-2.
    for (int k = 2; k <= n; ++k) {
        const Poly2<T> ut = j.u.truncated(k - 1), vt = j.v.truncated(k - 1);
        const Poly2<T> ru = detail::mixed_source(ut, vt, k - 2);
        const Poly2<T> rv = detail::mixed_source(vt, ut, k - 2);
        for (int p = 0; p <= k - 2; ++p) {
            const int q = k - 2 - p;
            const T den = T((p + 1) * (q + 1));
            j.u.at(p + 1, q + 1) = ru.get(p, q) / den;
            j.v.at(p + 1, q + 1) = rv.get(p, q) / den;
        }
    }
    return j;
}

// Residual polynomials of the harmonic-map system truncated to degree n-2.
template <class T>
std::pair<Poly2<T>, Poly2<T>> pde_residual(const BivariateJet<T>& j) {
    const int d = std::max(j.order - 2, 0);
    return {detail::harmonic_residual(j.u, j.v, d), detail::harmonic_residual(j.v, j.u, d)};
}

template <class T>
PolyCauchyData<T> jet_to_poly_cauchy(const JetCoeffs<T>& c) {
    const BivariateJet<T> j = expand_jet(c);
    PolyCauchyData<T> d;
    for (int i = 1; i <= c.n; ++i) {
        T al(0), be(0), la(0), mu(0);
        for (int k = 0; k <= i; ++k) {
            // coefficient of x^{i-k} y^k
            al += j.u.at(i - k, k);
            be += T(i - k) * j.u.at(i - k, k);
            la += j.v.at(i - k, k);
            mu += T(i - k) * j.v.at(i - k, k);
        }
        d.alpha.push_back(al);
        d.beta.push_back(be);
        d.lambda.push_back(la);
        d.mu.push_back(mu);
    }
    return d;
}

template <class T>
JetCoeffs<T> poly_cauchy_to_jet(const PolyCauchyData<T>& d) {
    const int n = static_cast<int>(d.alpha.size());
    if (d.beta.size() != d.alpha.size() || d.lambda.size() != d.alpha.size() || d.mu.size() != d.alpha.size())
        throw Error(Status::InvalidArgument, "PolyCauchyData arrays differ in length");
    JetCoeffs<T> c(n);
    for (int i = 1; i <= n; ++i) {
        // Mixed coefficients of degree i depend only on pure coefficients of degree <= i-2.
        JetCoeffs<T> partial = c;
        partial.n = i;
        partial.a0.resize(i);
        partial.a1.resize(i);
        partial.b0.resize(i);
        partial.b1.resize(i);
        const BivariateJet<T> j = expand_jet(partial);
        T sa(0), sb(0), sl(0), sm(0);
        for (int k = 1; k <= i - 1; ++k) {
            sa += j.u.at(i - k, k);
            sb += T(i - k) * j.u.at(i - k, k);
            sl += j.v.at(i - k, k);
            sm += T(i - k) * j.v.at(i - k, k);
        }
        c.a0[i - 1] = (d.beta[i - 1] - sb) / T(i);
        c.a1[i - 1] = d.alpha[i - 1] - sa - c.a0[i - 1];
        c.b0[i - 1] = (d.mu[i - 1] - sm) / T(i);
        c.b1[i - 1] = d.lambda[i - 1] - sl - c.b0[i - 1];
    }
    return c;
}

// N and its partials d[p][q] = d^{p+q} N / dx^p dy^q for p, q <= 3.
struct JetEval {
    Vec3 N;
    std::array<std::array<Vec3, 4>, 4> d;
};

JetEval jet_eval(const BivariateJet<double>& j, double x, double y);

// Polynomial shifted to (x0, y0): p(x0 + X, y0 + Y).
Poly2<double> shift_poly(const Poly2<double>& p, double x0, double y0);

Rational parse_rational(const std::string& text);

// "a10,a20,...; a11,a22,...; b10,...; b11,..." (the four groups of equal length).
JetCoeffs<Rational> parse_jet(const std::string& text);

std::string format_rational(const Rational& q);

}  // namespace lf
