#pragma once

#include <functional>
#include <vector>

#include "algebra.hpp"

namespace lf {

// Real function of one variable: either a polynomial (exact derivatives) or a
// callable (five-point central differences).
class UniFunc {
public:
    UniFunc() : poly_{0.0} {}
    static UniFunc constant(double v) { return polynomial({v}); }
    static UniFunc polynomial(std::vector<double> ascending);
    static UniFunc callable(std::function<double(double)> f);

    double operator()(double t) const { return derivative(t, 0); }
    // k-th derivative, k in 0..4.
    double derivative(double t, int k) const;

    bool is_polynomial() const { return !fn_; }
    const std::vector<double>& coefficients() const { return poly_; }
    // Largest absolute coefficient (polynomials) or |f| at t (callables); used for tolerance scales.
    double scale_at(double t) const;

private:
    std::vector<double> poly_;
    std::function<double(double)> fn_;
};

// Step used for the first derivative of sampled callables; higher orders use larger steps.
inline constexpr double kFdStep = 1e-4;

double central_derivative(const std::function<double(double)>& f, double t, int k);
Vec3 central_derivative(const std::function<Vec3(double)>& f, double t, int k);

}  // namespace lf
