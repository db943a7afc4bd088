#include "univariate.hpp"

#include <cmath>

#include "errors.hpp"

namespace lf {

namespace {

// Step per derivative order keeps the rounding error of the five-point rules near 1e-8 relative.
double step_for(int k) {
    static const double steps[5] = {0.0, kFdStep, 1e-3, 5e-3, 1e-2};
    return steps[k];
}

template <class V, class F>
V five_point(const F& f, double t, int k) {
    const double h = step_for(k);
    const V fm2 = f(t - 2 * h), fm1 = f(t - h), fp1 = f(t + h), fp2 = f(t + 2 * h);
    switch (k) {
        case 1:
            return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        case 2: {
            const V f0 = f(t);
            return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        }
        case 3:
            return (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
        case 4: {
            const V f0 = f(t);
            return (fp2 - 4.0 * fp1 + 6.0 * f0 - 4.0 * fm1 + fm2) / (h * h * h * h);
        }
        default:
            throw Error(Status::InvalidArgument, "derivative order out of range");
    }
}

}  // namespace

UniFunc UniFunc::polynomial(std::vector<double> ascending) {
    UniFunc u;
    if (ascending.empty()) ascending.push_back(0.0);
    u.poly_ = std::move(ascending);
    return u;
}

UniFunc UniFunc::callable(std::function<double(double)> f) {
    UniFunc u;
    u.poly_.clear();
    u.fn_ = std::move(f);
    return u;
}

double UniFunc::derivative(double t, int k) const {
    if (k < 0 || k > 4) throw Error(Status::InvalidArgument, "derivative order out of range");
    if (fn_) return k == 0 ? fn_(t) : central_derivative(fn_, t, k);
    double acc = 0.0;
    for (int n = static_cast<int>(poly_.size()) - 1; n >= k; --n) {
        double c = poly_[n];
        for (int j = 0; j < k; ++j) c *= (n - j);
        acc = acc * t + c;
    }
    return acc;
}

double UniFunc::scale_at(double t) const {
    if (fn_) return std::abs(fn_(t));
    double s = 0.0;
    for (double c : poly_) s = std::max(s, std::abs(c));
    return s;
}

double central_derivative(const std::function<double(double)>& f, double t, int k) {
    return five_point<double>(f, t, k);
}

Vec3 central_derivative(const std::function<Vec3(double)>& f, double t, int k) {
    return five_point<Vec3>(f, t, k);
}

}  // namespace lf
