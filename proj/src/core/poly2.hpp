#pragma once

#include <algorithm>
#include <vector>

namespace lf {

// Dense bivariate polynomial sum c(i,j) x^i y^j with i + j <= deg.
template <class T>
class Poly2 {
public:
    Poly2() : Poly2(0) {}
    explicit Poly2(int deg) : deg_(deg), c_((deg + 1) * (deg + 1), T(0)) {}

    int degree() const { return deg_; }
    T& at(int i, int j) { return c_[i * (deg_ + 1) + j]; }
    const T& at(int i, int j) const { return c_[i * (deg_ + 1) + j]; }
    T get(int i, int j) const { return (i >= 0 && j >= 0 && i + j <= deg_) ? at(i, j) : T(0); }

    static Poly2 constant(int deg, const T& v) {
        Poly2 p(deg);
        p.at(0, 0) = v;
        return p;
    }

    Poly2 truncated(int deg) const {
        Poly2 r(deg);
        for (int i = 0; i <= std::min(deg, deg_); ++i)
            for (int j = 0; i + j <= std::min(deg, deg_); ++j) r.at(i, j) = at(i, j);
        return r;
    }

    Poly2 operator+(const Poly2& o) const {
        Poly2 r(std::max(deg_, o.deg_));
        for (int i = 0; i <= r.deg_; ++i)
            for (int j = 0; i + j <= r.deg_; ++j) r.at(i, j) = get(i, j) + o.get(i, j);
        return r;
    }
    Poly2 operator-(const Poly2& o) const {
        Poly2 r(std::max(deg_, o.deg_));
        for (int i = 0; i <= r.deg_; ++i)
            for (int j = 0; i + j <= r.deg_; ++j) r.at(i, j) = get(i, j) - o.get(i, j);
        return r;
    }
    Poly2 operator-() const {
        Poly2 r(deg_);
        for (size_t k = 0; k < c_.size(); ++k) r.c_[k] = -c_[k];
        return r;
    }
    Poly2 scaled(const T& s) const {
        Poly2 r(*this);
        for (auto& v : r.c_) v *= s;
        return r;
    }

    // Product truncated to total degree `deg` (defaults to the larger input degree).
    Poly2 mul(const Poly2& o, int deg = -1) const {
        if (deg < 0) deg = std::max(deg_, o.deg_);
        Poly2 r(deg);
        for (int i = 0; i <= deg_; ++i)
            for (int j = 0; i + j <= deg_; ++j) {
                const T& a = at(i, j);
                if (a == T(0)) continue;
                for (int k = 0; k <= o.deg_ && i + k <= deg; ++k)
                    for (int l = 0; k + l <= o.deg_ && i + j + k + l <= deg; ++l) {
                        const T& b = o.at(k, l);
                        if (b == T(0)) continue;
                        r.at(i + k, j + l) += a * b;
                    }
            }
        return r;
    }
    Poly2 operator*(const Poly2& o) const { return mul(o); }

    Poly2 dx() const {
        Poly2 r(std::max(deg_ - 1, 0));
        for (int i = 1; i <= deg_; ++i)
            for (int j = 0; i + j <= deg_; ++j) r.at(i - 1, j) = at(i, j) * T(i);
        return r;
    }
    Poly2 dy() const {
        Poly2 r(std::max(deg_ - 1, 0));
        for (int i = 0; i <= deg_; ++i)
            for (int j = 1; i + j <= deg_; ++j) r.at(i, j - 1) = at(i, j) * T(j);
        return r;
    }

    template <class S>
    S eval(const S& x, const S& y) const {
        S acc = S(0);
        for (int i = deg_; i >= 0; --i) {
            S row = S(0);
            for (int j = deg_ - i; j >= 0; --j) row = row * y + S(at(i, j));
            acc = acc * x + row;
        }
        return acc;
    }

    T value_at_origin() const { return at(0, 0); }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const T& v) { return v == T(0); });
    }

    // Homogeneous part of degree k as coefficients of x^{k-i} y^i, i = 0..k.
    std::vector<T> homogeneous(int k) const {
        std::vector<T> out(k + 1, T(0));
        for (int i = 0; i <= k; ++i) out[i] = get(k - i, i);
        return out;
    }

    template <class S>
    Poly2<S> cast() const {
        Poly2<S> r(deg_);
        for (int i = 0; i <= deg_; ++i)
            for (int j = 0; i + j <= deg_; ++j) r.at(i, j) = static_cast<S>(at(i, j));
        return r;
    }

private:
    int deg_;
    std::vector<T> c_;
};

// Directional derivative a * p_x + b * p_y, truncated to `deg`.
template <class T>
Poly2<T> directional(const Poly2<T>& p, const Poly2<T>& a, const Poly2<T>& b, int deg) {
    return a.mul(p.dx(), deg) + b.mul(p.dy(), deg);
}

}  // namespace lf
