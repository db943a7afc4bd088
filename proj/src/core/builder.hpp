#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "cauchy.hpp"

namespace lf {

struct Grid {
    double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
    int nx = 201, ny = 201;

    double hx() const { return (x_max - x_min) / (nx - 1); }
    double hy() const { return (y_max - y_min) / (ny - 1); }
    double x(int i) const { return x_min + (x_max - x_min) * i / (nx - 1); }
    double y(int j) const { return y_min + (y_max - y_min) * j / (ny - 1); }
    // Row-major: rows are constant y.
    int index(int i, int j) const { return j * nx + i; }
    int size() const { return nx * ny; }
    void validate() const;
    // Nearest node to (x, y).
    std::pair<int, int> nearest(double x, double y) const;
};

struct BuildOptions {
    int M = kDefaultTruncation;
    int circle_samples = kDefaultCircleSamples;
    int rk4_steps_per_unit = 256;
    int threads = 0;
};

enum class PointStatus : std::uint8_t { Ok = 0, OutsideBigCell = 1 };

struct SurfaceData {
    Grid grid;
    std::vector<Vec3> f, N;
    std::vector<Mat2> F;
    // det(f_x, f_y, N) from finite differences of f.
    std::vector<double> sigma;
    // Frame quantities: sigma_frame = -A a, and the potential fields at each point.
    std::vector<double> sigma_frame, a, b, c, A;
    std::vector<PointStatus> status;
    std::vector<double> tail;
    double max_tail = 0.0;
    int outside_count = 0;
    double base_x = 0.0, base_y = 0.0;

    bool ok(int k) const { return status[k] == PointStatus::Ok; }
};

SurfaceData dalembert_solve(const PotentialPair& p, const Grid& g, const BuildOptions& opts = {});

// Recomputes the finite-difference sigma field from f and N.
void compute_sigma(SurfaceData& s);

// f from N by path integration of N x N_x dx - N x N_y dy (rows through the base, then columns).
std::vector<Vec3> integrate_frontal(const std::vector<Vec3>& N, const Grid& g, double base_x, double base_y);

struct FundamentalForms {
    int fd_order = 4;
    std::vector<std::uint8_t> evaluated;  // interior stencil and regular
    std::vector<double> A, B, cos_phi, sin_phi, K, H;
    std::vector<double> fx_nx_residual;   // | |f_x| - |N_x| | + | |f_y| - |N_y| |
    std::vector<double> asymptotic_residual;  // |<f_x, N_x>| + |<f_y, N_y>|
    double threshold = 0.0;
};

// fd_order in {2, 4, 6}; points with |sigma| <= 10 h^2 are skipped.
FundamentalForms fundamental_forms(const SurfaceData& s, int fd_order = 4);

struct ParallelData {
    double r = 0.0;
    std::vector<Vec3> g;
    std::vector<std::uint8_t> retained;
    std::vector<std::uint8_t> focal;
    // Printed closed forms from phi, and finite-difference values on g.
    std::vector<double> K_formula, H_formula, K_fd, H_fd, denominator;
    int focal_count = 0;
};

ParallelData parallel_surface(const SurfaceData& s, double r, int fd_order = 6);

// Diagonal Cauchy data for the PDE oracle: N and N_x at x = y = t.
using DiagonalData = std::function<std::pair<Vec3, Vec3>(double)>;

struct MarchResult {
    Grid grid;
    std::vector<double> u, v;
    std::vector<Vec3> N;
};

// Requires a square grid with equal spacing whose diagonal passes through nodes.
MarchResult pde_march(const DiagonalData& d, const Grid& g, int refine = 4);

struct ContourPoint {
    double x = 0.0, y = 0.0;
    Vec3 f = Vec3::Zero();
    // Null direction (|b|, -sign(b) A) in (x, y) coordinates.
    std::array<double, 2> eta{0.0, 0.0};
};

struct Contour {
    std::vector<ContourPoint> points;
    bool closed = false;
};

std::vector<Contour> singular_contour(const SurfaceData& s);
// Zero set of an arbitrary grid field (same conventions).
std::vector<Contour> zero_contour(const SurfaceData& s, const std::vector<double>& field);

enum class MeshFormat { Obj, PlyAscii, PlyBinary };

// Writes the mesh; OBJ also writes `<path without extension>.csv` with per-vertex data.
void export_mesh(const SurfaceData& s, const std::string& path, MeshFormat format);
void export_contours(const std::vector<Contour>& contours, const std::string& path);
// CSV i,j,x,y,sigma,sigma_frame,status.
void export_sigma(const SurfaceData& s, const std::string& path);

// Finite-difference weights for the first and second derivative, central, given order.
const std::vector<double>& fd_weights(int derivative, int order);

// Invariant residuals.
double sphere_residual(const SurfaceData& s);
double harmonicity_residual(const SurfaceData& s);
// max over points of |(f - f_int) - (f - f_int)(base)|
double translation_gauge_residual(const SurfaceData& s, const std::vector<Vec3>& f_int);

}  // namespace lf
