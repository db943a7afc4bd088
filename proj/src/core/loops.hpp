#pragma once

#include <functional>
#include <vector>

#include "algebra.hpp"

namespace lf {

inline constexpr int kDefaultTruncation = 12;
inline constexpr int kDefaultCircleSamples = 64;
inline constexpr double kBigCellCond = 1e12;

// Unit-circle sample points lambda_j = exp(2 pi i j / S); lambda_0 = 1.
std::vector<cd> circle_points(int S);

class TwistedLaurentLoop {
public:
    explicit TwistedLaurentLoop(int M = kDefaultTruncation);
    static TwistedLaurentLoop identity(int M = kDefaultTruncation);

    int order() const { return M_; }
    Mat2& coeff(int n) { return c_[n + M_]; }
    const Mat2& coeff(int n) const { return c_[n + M_]; }

    Mat2 evaluate(cd lambda) const;
    // (lambda d/dlambda gamma) at lambda = 1, i.e. sum n C_n.
    Mat2 lambda_derivative_at_one() const;

    // Max entry norm over the two outermost bands on each side.
    double tail_mass() const;
    // Norm of the coefficients dropped by the operation that produced this loop.
    double dropped_mass() const { return dropped_; }
    void set_dropped_mass(double d) { dropped_ = d; }

    bool parity_ok(double tol = 0.0) const;
    void enforce_parity();

    std::vector<Mat2> sample(int S) const;
    static TwistedLaurentLoop from_samples(const std::vector<Mat2>& samples, int M);

    // max_n max-entry |C_n - other.C_n|
    double distance(const TwistedLaurentLoop& other) const;

private:
    int M_;
    std::vector<Mat2> c_;
    double dropped_ = 0.0;
};

// Loop-algebra valued 1-form with a finite band of powers [nmin, nmax].
struct LoopAlgebraForm {
    int nmin = 0;
    int nmax = 0;
    // Writes the coefficients of lambda^nmin .. lambda^nmax at parameter t.
    std::function<void(double t, Mat2* coeffs)> eval;

    Mat2 at(double t, cd lambda) const;
};

TwistedLaurentLoop loop_multiply(const TwistedLaurentLoop& g, const TwistedLaurentLoop& h);
TwistedLaurentLoop loop_inverse(const TwistedLaurentLoop& g, int S = kDefaultCircleSamples);

// Solves X^{-1} X' = form with X(t0) = I independently at each circle sample.
TwistedLaurentLoop integrate_loop_ode(const LoopAlgebraForm& form, double t0, double t1, int steps,
                                      int M = kDefaultTruncation, int S = kDefaultCircleSamples);

// Sampled solution at every requested parameter (any order, either side of t0).
// Result[k][j] is X(ts[k]) at lambda_j. Substeps between consecutive stops are
// ceil(steps_per_unit * |dt|), at least one.
std::vector<std::vector<Mat2>> integrate_loop_path(const LoopAlgebraForm& form, double t0,
                                                   const std::vector<double>& ts, int steps_per_unit,
                                                   int S = kDefaultCircleSamples);

struct BirkhoffSplit {
    TwistedLaurentLoop minus;  // in G^-_*: powers <= 0, constant term I
    TwistedLaurentLoop plus;   // powers >= 0
    double condition = 1.0;
};

BirkhoffSplit birkhoff_split(const TwistedLaurentLoop& g, int S = kDefaultCircleSamples);

// Core of the split used by the surface builder.
// g: coefficients for n in [-2M, M] stored at g[n + 2M].
// Writes H_- coefficients for n in [-M, 0] at hminus[n + M] and K = H_+^{-1}
// coefficients for m in [0, M] at k[m]. Returns false (cond set) when outside the big cell.
bool birkhoff_core(const Mat2* g, int M, Mat2* hminus, Mat2* k, double* cond);

// Precomputed partial DFT: coefficients n in [nlo, nhi] from S samples.
class PartialDft {
public:
    PartialDft(int S, int nlo, int nhi);
    // samples: S matrices; out: (nhi - nlo + 1) matrices.
    void apply(const Mat2* samples, Mat2* out) const;
    int nlo() const { return nlo_; }
    int nhi() const { return nhi_; }

private:
    int S_, nlo_, nhi_;
    Eigen::MatrixXcd W_;
};

}  // namespace lf
