#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "jets.hpp"
#include "loops.hpp"
#include "univariate.hpp"

namespace lf {

struct GeometricCauchyData {
    std::function<Vec3(double)> N0;
    std::function<Vec3(double)> V;
    // Optional exact derivatives; central differences are used when empty.
    std::function<Vec3(double)> dN0;
    std::function<Vec3(double)> dV;
    // Optional speed; must agree with |V| when given.
    std::function<double(double)> A;
    double t_min = -1.0;
    double t_max = 1.0;
    double t0 = 0.0;
    double derivative_noise = 0.0;  // error estimate of dN0 for sampled data
};

struct AbcData {
    UniFunc a, b, c;
    UniFunc A = UniFunc::constant(1.0);
    double t_min = -1.0;
    double t_max = 1.0;
    double t0 = 0.0;
    // Optional evaluator returning (a, b, c, A) in one call.
    std::function<std::array<double, 4>(double)> joint;
    // Per-sample sign of <V' x N0, V> when derived from geometric data (0 where V' = 0).
    std::vector<int> epsilon;

    std::array<double, 4> eval(double t) const;
};

struct PotentialPair {
    LoopAlgebraForm chi;  // powers -1..1 in x
    LoopAlgebraForm psi;  // powers -1..1 in y
    double x0 = 0.0;
    double y0 = 0.0;
    // Constant rotation applied to the frame on the left (identity for abc data).
    Mat2 F0 = Mat2::Identity();
    AbcData abc;
    // N and N_x along the diagonal x = y = t.
    std::function<std::pair<Vec3, Vec3>(double)> diagonal;
};

inline constexpr int kValidationSamples = 201;

AbcData geometric_to_abc(const GeometricCauchyData& d);
PotentialPair abc_to_potential(const AbcData& d, const Mat2& F0 = Mat2::Identity());
PotentialPair geometric_to_potential(const GeometricCauchyData& d);
PotentialPair jet_to_potential(const BivariateJet<double>& j, double t_min, double t_max);

// Uniformly spaced samples (t, N0, V) interpolated by quintic B-splines.
GeometricCauchyData geometric_from_samples(const std::vector<double>& t, const std::vector<Vec3>& N0,
                                           const std::vector<Vec3>& V, double t0);

// Diagonal Cauchy data of an expanded jet (exact derivatives).
GeometricCauchyData jet_geometric_data(const BivariateJet<double>& j, double t_min, double t_max);

// SU(2) element with Ad e1, Ad e2, Ad e3 = the columns (-V/A) x N0, -V/A, N0.
Mat2 adapted_initial_frame(const Vec3& N0, const Vec3& V);

}  // namespace lf
