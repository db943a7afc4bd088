#pragma once

#include <array>
#include <random>
#include <string>

#include "builder.hpp"
#include "cauchy.hpp"
#include "jets.hpp"
#include "loops.hpp"

namespace lftest {

inline const std::array<const char*, 5> kReferenceJets = {
    "1,1,0; 1,0,0; 1,0,0; 1,0,0",   // cuspidal edge
    "1,1,0; 1,2,0; 1,0,0; 1,1,0",   // swallowtail
    "1,1,1; 1,1,0; 1,0,1; 1,0,0",   // cuspidal butterfly
    "1,0,1; 1,0,0; 1,0,0; 1,0,1",   // cuspidal lips
    "1,0,1; 3,0,0; 1,0,0; 3,0,-1",  // cuspidal beaks
};

inline lf::Grid square(double half, int n) {
    lf::Grid g;
    g.x_min = g.y_min = -half;
    g.x_max = g.y_max = half;
    g.nx = g.ny = n;
    return g;
}

inline lf::PotentialPair jet_potential(const char* row, double half = 0.5) {
    return lf::jet_to_potential(lf::expand_jet(lf::parse_jet(row).cast<double>()), -half, half);
}

inline lf::SurfaceData jet_surface(const char* row, int n, int M = 12) {
    lf::BuildOptions o;
    o.M = M;
    return lf::dalembert_solve(jet_potential(row), square(0.5, n), o);
}

inline lf::PotentialPair vacuum_potential() {
    lf::AbcData d;
    d.a = lf::UniFunc::constant(0.0);
    d.b = lf::UniFunc::constant(-1.0);
    d.c = lf::UniFunc::constant(0.0);
    return lf::abc_to_potential(d);
}

inline lf::AbcData abc_poly(std::vector<double> a, std::vector<double> b, std::vector<double> c, double half = 0.5) {
    lf::AbcData d;
    d.a = lf::UniFunc::polynomial(std::move(a));
    d.b = lf::UniFunc::polynomial(std::move(b));
    d.c = lf::UniFunc::polynomial(std::move(c));
    d.t_min = -half;
    d.t_max = half;
    return d;
}

// Random rational p/q with |p| <= 9, 1 <= q <= 7.
inline lf::Rational random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    return lf::Rational(num(rng), den(rng));
}

inline lf::JetCoeffs<lf::Rational> random_jet(std::mt19937& rng, int n) {
    lf::JetCoeffs<lf::Rational> c(n);
    for (int i = 0; i < n; ++i) {
        c.a0[i] = random_rational(rng);
        c.a1[i] = random_rational(rng);
        c.b0[i] = random_rational(rng);
        c.b1[i] = random_rational(rng);
    }
    return c;
}

// exp(X lambda^k) as a truncated twisted loop.
inline lf::TwistedLaurentLoop exp_loop(const lf::Mat2& X, int k, int M) {
    lf::TwistedLaurentLoop g(M);
    if (k == 0) {
        g.coeff(0) = lf::exp_su2(lf::su2_components(X));
        return g;
    }
    lf::Mat2 term = lf::Mat2::Identity();
    for (int n = 0; std::abs(n * k) <= M; ++n) {
        g.coeff(n * k) += term;
        term = term * X / double(n + 1);
    }
    return g;
}

// Product of exponentials of odd and even generators, small enough to decay fast.
inline lf::TwistedLaurentLoop random_loop(std::mt19937& rng, int M, double amp = 0.3) {
    std::uniform_real_distribution<double> u(-amp, amp);
    auto odd = [&] { return lf::vec_to_su2(lf::Vec3(u(rng), u(rng), 0.0)); };
    lf::TwistedLaurentLoop g = exp_loop(odd(), -1, M);
    g = lf::loop_multiply(g, exp_loop(odd(), 1, M));
    g = lf::loop_multiply(g, exp_loop(lf::vec_to_su2(lf::Vec3(0, 0, u(rng))), 0, M));
    g = lf::loop_multiply(g, exp_loop(odd(), 1, M));
    g = lf::loop_multiply(g, exp_loop(odd(), -1, M));
    return g;
}

}  // namespace lftest
