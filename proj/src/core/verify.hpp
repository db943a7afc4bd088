#pragma once

#include <string>
#include <vector>

#include "builder.hpp"
#include "cauchy.hpp"

namespace lf {

struct VerifyOptions {
    int fd_order = 6;
    // Curvature checks use points with |sigma| above this.
    double sigma_min = 0.1;
    // Parallel checks use points where the parallel is this far from focal.
    double focal_min = 0.1;
    std::vector<double> radii{0.3, -0.3};
    bool oracle = true;
    int oracle_refine = 4;
};

struct VerifyCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    int points = 0;
    std::string note;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    int outside_count = 0;
    bool pass() const;
};

VerifyReport verify_surface(const SurfaceData& s, const PotentialPair& p, const VerifyOptions& o = {});
std::string to_json(const VerifyReport& r, int indent = -1);

}  // namespace lf
