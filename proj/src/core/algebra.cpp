#include "algebra.hpp"

#include <cmath>

#include "errors.hpp"

namespace lf {

namespace {
const cd I(0.0, 1.0);

Mat2 make(cd a, cd b, cd c, cd d) {
    Mat2 m;
    m << a, b, c, d;
    return m;
}
}  // namespace

const Mat2& e1() {
    static const Mat2 m = make(0.0, 0.5 * I, 0.5 * I, 0.0);
    return m;
}
const Mat2& e2() {
    static const Mat2 m = make(0.0, -0.5, 0.5, 0.0);
    return m;
}
const Mat2& e3() {
    static const Mat2 m = make(0.5 * I, 0.0, 0.0, -0.5 * I);
    return m;
}

double inner(const Mat2& a, const Mat2& b) { return (-2.0 * (a * b).trace()).real(); }

Mat2 vec_to_su2(const Vec3& v) { return v.x() * e1() + v.y() * e2() + v.z() * e3(); }

Vec3 su2_components(const Mat2& m) {
    // m = [[i z/2, (i x - y)/2], [(i x + y)/2, -i z/2]]
    const double z = (m(0, 0) - m(1, 1)).imag();
    const double x = (m(0, 1) + m(1, 0)).imag();
    const double y = (m(1, 0) - m(0, 1)).real();
    return {x, y, z};
}

Vec3 su2_to_vec(const Mat2& m, double tol) {
    const Mat2 herm = m + m.adjoint();
    const double res = std::max(herm.cwiseAbs().maxCoeff(), std::abs(m.trace()));
    if (!(res <= tol)) throw Error(Status::NotInSu2, "matrix is not in su(2): residual " + std::to_string(res));
    return su2_components(m);
}

Vec3 adjoint_unchecked(const Mat2& F, const Vec3& v) { return su2_components(F * vec_to_su2(v) * inv2(F)); }

Vec3 adjoint_rotate(const Mat2& F, const Vec3& v, double tol) {
    const double res = (F.adjoint() * F - Mat2::Identity()).cwiseAbs().maxCoeff();
    const double dres = std::abs(det2(F) - 1.0);
    if (!(res <= tol) || !(dres <= tol))
        throw Error(Status::NotUnitary, "frame is not in SU(2): residual " + std::to_string(std::max(res, dres)));
    return su2_components(F * vec_to_su2(v) * F.adjoint());
}

Vec3 cross(const Vec3& u, const Vec3& v) { return u.cross(v); }

Mat2 bracket(const Mat2& a, const Mat2& b) { return a * b - b * a; }

Mat2 exp_su2(const Vec3& v) {
    const double th = v.norm();
    if (th < 1e-300) return Mat2::Identity();
    return std::cos(th / 2) * Mat2::Identity() + (2.0 * std::sin(th / 2) / th) * vec_to_su2(v);
}

Eigen::Matrix3d rotation_of(const Mat2& F) {
    Eigen::Matrix3d R;
    R.col(0) = adjoint_unchecked(F, Vec3::UnitX());
    R.col(1) = adjoint_unchecked(F, Vec3::UnitY());
    R.col(2) = adjoint_unchecked(F, Vec3::UnitZ());
    return R;
}

Mat2 su2_from_rotation(const Eigen::Matrix3d& R) {
    // Unit quaternion (w, q) acts as F = w I + 2 q.e; Ad_F is the usual rotation of q.
    const Eigen::Quaterniond quat(R);
    const Vec3 q(quat.x(), quat.y(), quat.z());
    return quat.w() * Mat2::Identity() + 2.0 * vec_to_su2(q);
}

}  // namespace lf
