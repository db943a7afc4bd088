#pragma once

#include <array>
#include <string>
#include <vector>

#include "builder.hpp"
#include "classify.hpp"
#include "univariate.hpp"

namespace lf {

// N(x, y) = (f1(x) + g1(y), f2(x) + g2(y)), a general solution of N_xy = 0 in the plane.
struct PlanarWaveMap {
    UniFunc f1, f2, g1, g2;
};

struct PlanarSample {
    std::array<double, 2> value{};
    // Rows are components, columns d/dx and d/dy.
    std::array<std::array<double, 2>, 2> jacobian{};
    double lambda = 0.0;
};

std::vector<PlanarSample> planar_eval(const PlanarWaveMap& m, const Grid& g);
PlanarSample planar_eval(const PlanarWaveMap& m, double x, double y);

struct PlanarReport {
    std::string label;  // Regular, Singular, Rank0
    int rank = 2;
    bool null_x_in_sigma = false;  // the line x = x0 lies in the singular set
    bool null_y_in_sigma = false;  // the line y = y0 lies in the singular set
    bool morse_degenerate = false;  // lambda = lambda_x = lambda_y = 0 forces lambda_xy = 0
    bool not_finitely_determined = false;  // zero 2-jet, lambda = x^2 y^2 Lambda
    std::vector<Condition> conditions;
    std::string note;
};

PlanarReport planar_stratum(const PlanarWaveMap& m, double x, double y);
std::string to_json(const PlanarReport& r, int indent = -1);

}  // namespace lf
