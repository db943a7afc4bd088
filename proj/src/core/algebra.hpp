#pragma once

#include <Eigen/Dense>
#include <complex>

namespace lf {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kSu2Tol = 1e-8;

const Mat2& e1();
const Mat2& e2();
const Mat2& e3();

// ⟨X,Y⟩ = -2 tr(XY), real part.
double inner(const Mat2& a, const Mat2& b);

Mat2 vec_to_su2(const Vec3& v);

// Throws NotInSu2 when m is not trace-free anti-Hermitian within tol.
Vec3 su2_to_vec(const Mat2& m, double tol = kSu2Tol);

// Components along e1,e2,e3 without the membership check.
Vec3 su2_components(const Mat2& m);

// Ad_F v. Throws NotUnitary when F is not in SU(2) within tol.
Vec3 adjoint_rotate(const Mat2& F, const Vec3& v, double tol = kSu2Tol);

// Ad_F v for F in SL(2,C), unchecked.
Vec3 adjoint_unchecked(const Mat2& F, const Vec3& v);

Vec3 cross(const Vec3& u, const Vec3& v);

Mat2 bracket(const Mat2& a, const Mat2& b);

// exp(vec_to_su2(v)) in closed form.
Mat2 exp_su2(const Vec3& v);

// SU(2) element whose adjoint action is the rotation R (columns = images of e1,e2,e3).
Mat2 su2_from_rotation(const Eigen::Matrix3d& R);

// Rotation matrix of Ad_F.
Eigen::Matrix3d rotation_of(const Mat2& F);

inline Mat2 inv2(const Mat2& m) {
    const cd det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Mat2 r;
    r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return r / det;
}

inline cd det2(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

}  // namespace lf
