#include "loops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace lf {

std::vector<cd> circle_points(int S) {
    std::vector<cd> pts(S);
    for (int j = 0; j < S; ++j) pts[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / S);
    return pts;
}

TwistedLaurentLoop::TwistedLaurentLoop(int M) : M_(M), c_(2 * M + 1, Mat2::Zero()) {
    if (M < 1) throw Error(Status::InvalidArgument, "truncation order must be positive");
}

TwistedLaurentLoop TwistedLaurentLoop::identity(int M) {
    TwistedLaurentLoop g(M);
    g.coeff(0) = Mat2::Identity();
    return g;
}

Mat2 TwistedLaurentLoop::evaluate(cd lambda) const {
    Mat2 acc = Mat2::Zero();
    // Horner in lambda for positive powers, in 1/lambda for negative ones.
    for (int n = M_; n >= 1; --n) acc = acc * lambda + coeff(n);
    acc = acc * lambda + coeff(0);
    Mat2 neg = Mat2::Zero();
    const cd inv = 1.0 / lambda;
    for (int n = -M_; n <= -1; ++n) neg = (neg + coeff(n)) * inv;
    return acc + neg;
}

Mat2 TwistedLaurentLoop::lambda_derivative_at_one() const {
    Mat2 acc = Mat2::Zero();
    for (int n = -M_; n <= M_; ++n) acc += static_cast<double>(n) * coeff(n);
    return acc;
}

double TwistedLaurentLoop::tail_mass() const {
    double t = 0.0;
    for (int n : {-M_, -M_ + 1, M_ - 1, M_}) {
        if (std::abs(n) > M_ || (M_ == 1 && n == 0)) continue;
        t = std::max(t, coeff(n).cwiseAbs().maxCoeff());
    }
    return t;
}

bool TwistedLaurentLoop::parity_ok(double tol) const {
    for (int n = -M_; n <= M_; ++n) {
        const Mat2& c = coeff(n);
        if (n % 2 == 0) {
            if (std::abs(c(0, 1)) > tol || std::abs(c(1, 0)) > tol) return false;
        } else {
            if (std::abs(c(0, 0)) > tol || std::abs(c(1, 1)) > tol) return false;
        }
    }
    return true;
}

void TwistedLaurentLoop::enforce_parity() {
    for (int n = -M_; n <= M_; ++n) {
        Mat2& c = coeff(n);
        if (n % 2 == 0) {
            c(0, 1) = 0.0;
            c(1, 0) = 0.0;
        } else {
            c(0, 0) = 0.0;
            c(1, 1) = 0.0;
        }
    }
}

std::vector<Mat2> TwistedLaurentLoop::sample(int S) const {
    const auto pts = circle_points(S);
    std::vector<Mat2> out(S);
    for (int j = 0; j < S; ++j) out[j] = evaluate(pts[j]);
    return out;
}

TwistedLaurentLoop TwistedLaurentLoop::from_samples(const std::vector<Mat2>& samples, int M) {
    const int S = static_cast<int>(samples.size());
    if (S < 2 * M + 1) throw Error(Status::InvalidArgument, "too few circle samples for truncation order");
    const int half = S / 2;
    PartialDft dft(S, -half + (S % 2 == 0 ? 1 : 0), half);
    std::vector<Mat2> all(dft.nhi() - dft.nlo() + 1);
    dft.apply(samples.data(), all.data());
    TwistedLaurentLoop g(M);
    double dropped = 0.0;
    for (int n = dft.nlo(); n <= dft.nhi(); ++n) {
        const Mat2& c = all[n - dft.nlo()];
        if (std::abs(n) <= M)
            g.coeff(n) = c;
        else
            dropped = std::max(dropped, c.cwiseAbs().maxCoeff());
    }
    g.enforce_parity();
    g.set_dropped_mass(dropped);
    return g;
}

double TwistedLaurentLoop::distance(const TwistedLaurentLoop& other) const {
    const int K = std::max(M_, other.M_);
    double d = 0.0;
    for (int n = -K; n <= K; ++n) {
        const Mat2 a = std::abs(n) <= M_ ? coeff(n) : Mat2::Zero();
        const Mat2 b = std::abs(n) <= other.M_ ? other.coeff(n) : Mat2::Zero();
        d = std::max(d, (a - b).cwiseAbs().maxCoeff());
    }
    return d;
}

Mat2 LoopAlgebraForm::at(double t, cd lambda) const {
    std::vector<Mat2> c(nmax - nmin + 1);
    eval(t, c.data());
    Mat2 acc = Mat2::Zero();
    for (int n = nmin; n <= nmax; ++n) acc += std::pow(lambda, n) * c[n - nmin];
    return acc;
}

TwistedLaurentLoop loop_multiply(const TwistedLaurentLoop& g, const TwistedLaurentLoop& h) {
    const int M = g.order();
    if (h.order() != M) throw Error(Status::InvalidArgument, "loop_multiply: truncation orders differ");
    TwistedLaurentLoop r(M);
    double dropped = 0.0;
    for (int n = -2 * M; n <= 2 * M; ++n) {
        Mat2 acc = Mat2::Zero();
        for (int m = std::max(-M, n - M); m <= std::min(M, n + M); ++m) acc += g.coeff(m) * h.coeff(n - m);
        if (std::abs(n) <= M)
            r.coeff(n) = acc;
        else
            dropped = std::max(dropped, acc.cwiseAbs().maxCoeff());
    }
    r.set_dropped_mass(dropped);
    return r;
}

TwistedLaurentLoop loop_inverse(const TwistedLaurentLoop& g, int S) {
    auto s = g.sample(S);
    for (auto& m : s) {
        const cd d = det2(m);
        if (std::abs(d) < 1e-12) throw Error(Status::SingularLoop, "loop is singular at a circle sample");
        m = inv2(m);
    }
    return TwistedLaurentLoop::from_samples(s, g.order());
}

namespace {

// One RK4 step of X' = X A(t, lambda_j) for all samples.
struct SampledRk4 {
    const LoopAlgebraForm& form;
    std::vector<std::vector<cd>> powers;  // powers[j][n - nmin]
    std::vector<Mat2> coeff;
    int S;

    SampledRk4(const LoopAlgebraForm& f, int S_) : form(f), S(S_) {
        const auto pts = circle_points(S);
        powers.assign(S, std::vector<cd>(f.nmax - f.nmin + 1));
        for (int j = 0; j < S; ++j)
            for (int n = f.nmin; n <= f.nmax; ++n) powers[j][n - f.nmin] = std::pow(pts[j], n);
        coeff.resize(f.nmax - f.nmin + 1);
    }

    void load(double t, std::vector<Mat2>& A) {
        form.eval(t, coeff.data());
        A.resize(S);
        for (int j = 0; j < S; ++j) {
            Mat2 acc = Mat2::Zero();
            for (size_t k = 0; k < coeff.size(); ++k) acc += powers[j][k] * coeff[k];
            A[j] = acc;
        }
    }

    void step(std::vector<Mat2>& X, double t, double h) {
        std::vector<Mat2> A1, A2, A3;
        load(t, A1);
        load(t + 0.5 * h, A2);
        load(t + h, A3);
        for (int j = 0; j < S; ++j) {
            const Mat2& x = X[j];
            const Mat2 k1 = x * A1[j];
            const Mat2 k2 = (x + 0.5 * h * k1) * A2[j];
            const Mat2 k3 = (x + 0.5 * h * k2) * A2[j];
            const Mat2 k4 = (x + h * k3) * A3[j];
            X[j] = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }

    void advance(std::vector<Mat2>& X, double ta, double tb, int steps) {
        const double h = (tb - ta) / steps;
        for (int s = 0; s < steps; ++s) step(X, ta + s * h, h);
    }
};

}  // namespace

TwistedLaurentLoop integrate_loop_ode(const LoopAlgebraForm& form, double t0, double t1, int steps, int M, int S) {
    if (steps < 1) throw Error(Status::InvalidArgument, "integrate_loop_ode: steps must be >= 1");
    if (form.nmin < -M || form.nmax > M) throw Error(Status::InvalidArgument, "form band exceeds truncation order");
    SampledRk4 rk(form, S);
    std::vector<Mat2> X(S, Mat2::Identity());
    rk.advance(X, t0, t1, steps);
    for (const auto& m : X)
        if (!m.allFinite()) throw Error(Status::Overflow, "loop ODE overflow");
    return TwistedLaurentLoop::from_samples(X, M);
}

std::vector<std::vector<Mat2>> integrate_loop_path(const LoopAlgebraForm& form, double t0,
                                                   const std::vector<double>& ts, int steps_per_unit, int S) {
    SampledRk4 rk(form, S);
    std::vector<std::vector<Mat2>> out(ts.size());
    std::vector<size_t> idx(ts.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return ts[a] < ts[b]; });
    auto sweep = [&](auto begin, auto end) {
        std::vector<Mat2> X(S, Mat2::Identity());
        double t = t0;
        for (auto it = begin; it != end; ++it) {
            const double tn = ts[*it];
            const double dt = tn - t;
            if (dt != 0.0) {
                const int steps = std::max(1, static_cast<int>(std::ceil(steps_per_unit * std::abs(dt) - 1e-9)));
                rk.advance(X, t, tn, steps);
                t = tn;
            }
            out[*it] = X;
        }
    };
    // Split at t0: ascending sweep for ts >= t0, descending for ts < t0.
    auto mid = std::lower_bound(idx.begin(), idx.end(), t0, [&](size_t a, double v) { return ts[a] < v; });
    sweep(mid, idx.end());
    std::vector<size_t> below(idx.begin(), mid);
    std::reverse(below.begin(), below.end());
    sweep(below.begin(), below.end());
    return out;
}

PartialDft::PartialDft(int S, int nlo, int nhi) : S_(S), nlo_(nlo), nhi_(nhi), W_(nhi - nlo + 1, S) {
    const auto pts = circle_points(S);
    for (int n = nlo; n <= nhi; ++n)
        for (int j = 0; j < S; ++j) W_(n - nlo, j) = std::pow(std::conj(pts[j]), n) / static_cast<double>(S);
}

void PartialDft::apply(const Mat2* samples, Mat2* out) const {
    Eigen::Matrix<cd, Eigen::Dynamic, 4> G(S_, 4);
    for (int j = 0; j < S_; ++j) {
        G(j, 0) = samples[j](0, 0);
        G(j, 1) = samples[j](0, 1);
        G(j, 2) = samples[j](1, 0);
        G(j, 3) = samples[j](1, 1);
    }
    const Eigen::Matrix<cd, Eigen::Dynamic, 4> C = W_ * G;
    for (int k = 0; k < C.rows(); ++k) out[k] << C(k, 0), C(k, 1), C(k, 2), C(k, 3);
}

bool birkhoff_core(const Mat2* g, int M, Mat2* hminus, Mat2* k, double* cond) {
    // The twisting parity decouples each column of K into an (M+1)-dimensional scalar system:
    // column c of k_m lives in row r(m,c) = c for even m, 1-c for odd m.
    auto G = [&](int n) -> const Mat2& { return g[n + 2 * M]; };
    auto row = [](int m, int c) { return (m % 2 == 0) ? c : 1 - c; };
    double worst = 1.0;
    Eigen::MatrixXcd A(M + 1, M + 1);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(M + 1);
    rhs(0) = 1.0;
    for (int m = 0; m <= M; ++m) k[m].setZero();
    for (int n = -M; n <= 0; ++n) hminus[n + M].setZero();
    for (int c = 0; c < 2; ++c) {
        for (int n = 0; n <= M; ++n)
            for (int m = 0; m <= M; ++m) A(n, m) = G(n - m)(row(std::abs(n), c), row(m, c));
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
        const double rc = lu.rcond();
        const double cn = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
        worst = std::max(worst, cn);
        if (!(cn <= kBigCellCond)) {
            if (cond) *cond = cn;
            return false;
        }
        const Eigen::VectorXcd x = lu.solve(rhs);
        for (int m = 0; m <= M; ++m) k[m](row(m, c), c) = x(m);
        for (int n = -M; n <= 0; ++n) {
            const int r = row(std::abs(n), c);
            cd acc = 0.0;
            for (int m = 0; m <= M; ++m) acc += G(n - m)(r, row(m, c)) * x(m);
            hminus[n + M](r, c) = acc;
        }
    }
    if (cond) *cond = worst;
    return true;
}

BirkhoffSplit birkhoff_split(const TwistedLaurentLoop& g, int S) {
    const int M = g.order();
    std::vector<Mat2> gc(3 * M + 1, Mat2::Zero());
    for (int n = -M; n <= M; ++n) gc[n + 2 * M] = g.coeff(n);
    std::vector<Mat2> hm(M + 1), kk(M + 1);
    double cond = 0.0;
    if (!birkhoff_core(gc.data(), M, hm.data(), kk.data(), &cond))
        throw Error(Status::OutsideBigCell, "loop is outside the big cell (condition " + std::to_string(cond) + ")");
    BirkhoffSplit out{TwistedLaurentLoop(M), TwistedLaurentLoop(M), cond};
    for (int n = -M; n <= 0; ++n) out.minus.coeff(n) = hm[n + M];
    TwistedLaurentLoop K(M);
    for (int m = 0; m <= M; ++m) K.coeff(m) = kk[m];
    out.plus = loop_inverse(K, S);
    // H_+ has no negative powers; anything left there is sampling noise.
    for (int n = -M; n < 0; ++n) out.plus.coeff(n).setZero();
    return out;
}

}  // namespace lf
