#include <doctest.h>

#include <cmath>
#include <random>

#include "algebra.hpp"
#include "errors.hpp"
#include "loops.hpp"
#include "support.hpp"

using namespace lf;

namespace {

double mdiff(const Mat2& a, const Mat2& b) { return (a - b).cwiseAbs().maxCoeff(); }

Vec3 random_vec(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return Vec3(u(rng), u(rng), u(rng));
}

}  // namespace

TEST_SUITE("algebra") {
    TEST_CASE("basis and round trips") {
        CHECK(vec_to_su2(Vec3::Zero()).cwiseAbs().maxCoeff() == 0.0);
        Mat2 e3m;
        e3m << cd(0, 0.5), 0, 0, cd(0, -0.5);
        CHECK(mdiff(vec_to_su2(Vec3(0, 0, 1)), e3m) == 0.0);
        CHECK(mdiff(vec_to_su2(Vec3(1, 2, 3)), e1() + 2.0 * e2() + 3.0 * e3()) < 1e-15);
        CHECK((su2_to_vec(vec_to_su2(Vec3(1, 2, 3))) - Vec3(1, 2, 3)).norm() < 1e-15);
        CHECK((su2_to_vec(e1()) - Vec3(1, 0, 0)).norm() == 0.0);
        std::mt19937 rng(7);
        for (int k = 0; k < 50; ++k) {
            const Vec3 v = random_vec(rng);
            CHECK((su2_to_vec(vec_to_su2(v)) - v).norm() < 1e-14);
        }
    }

    TEST_CASE("non su2 input is rejected") {
        Mat2 m = Mat2::Identity();
        CHECK_THROWS_AS(su2_to_vec(m), Error);
        try {
            su2_to_vec(m);
        } catch (const Error& e) {
            CHECK(e.code() == Status::NotInSu2);
        }
    }

    TEST_CASE("bracket and cross product") {
        CHECK((su2_to_vec(bracket(e1(), e2())) - Vec3(0, 0, 1)).norm() < 1e-15);
        CHECK((cross(Vec3(1, 0, 0), Vec3(0, 1, 0)) - Vec3(0, 0, 1)).norm() == 0.0);
        CHECK(cross(Vec3(1, 2, 3), Vec3(1, 2, 3)).norm() == 0.0);
        std::mt19937 rng(11);
        for (int k = 0; k < 50; ++k) {
            const Vec3 u = random_vec(rng), v = random_vec(rng);
            CHECK((su2_to_vec(bracket(vec_to_su2(u), vec_to_su2(v))) - cross(u, v)).norm() < 1e-13);
        }
    }

    TEST_CASE("adjoint action") {
        const Vec3 v(0.3, -1.2, 2.0);
        CHECK((adjoint_rotate(Mat2::Identity(), v) - v).norm() < 1e-15);
        for (double s : {0.1, 0.7, 2.5}) {
            const Vec3 r = adjoint_rotate(exp_su2(Vec3(s, 0, 0)), Vec3(0, 0, 1));
            CHECK((r - Vec3(0, -std::sin(s), std::cos(s))).norm() < 1e-14);
        }
        std::mt19937 rng(3);
        for (int k = 0; k < 50; ++k) {
            const Mat2 F = exp_su2(random_vec(rng));
            const Vec3 w = random_vec(rng);
            CHECK(std::abs(adjoint_rotate(F, w).norm() - w.norm()) < 1e-13);
        }
    }

    TEST_CASE("rotation conversion") {
        std::mt19937 rng(5);
        for (int k = 0; k < 20; ++k) {
            const Mat2 F = exp_su2(random_vec(rng));
            const Eigen::Matrix3d R = rotation_of(F);
            CHECK((rotation_of(su2_from_rotation(R)) - R).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_SUITE("loops") {
    TEST_CASE("multiplication") {
        const int M = 6;
        std::mt19937 rng(1);
        const TwistedLaurentLoop g = lftest::random_loop(rng, M, 0.3);
        CHECK(loop_multiply(g, TwistedLaurentLoop::identity(M)).distance(g) < 1e-15);

        TwistedLaurentLoop p = TwistedLaurentLoop::identity(M), q = TwistedLaurentLoop::identity(M);
        p.coeff(1) = e1();
        q.coeff(1) = -e1();
        const TwistedLaurentLoop r = loop_multiply(p, q);
        TwistedLaurentLoop expect = TwistedLaurentLoop::identity(M);
        expect.coeff(2) = 0.25 * Mat2::Identity();
        CHECK(r.distance(expect) < 1e-15);
        CHECK(r.parity_ok());
    }

    TEST_CASE("associativity") {
        std::mt19937 rng(2);
        const int M = 12;
        for (int k = 0; k < 10; ++k) {
            const auto a = lftest::random_loop(rng, M, 0.2), b = lftest::random_loop(rng, M, 0.2),
                       c = lftest::random_loop(rng, M, 0.2);
            const auto l = loop_multiply(loop_multiply(a, b), c);
            const auto r = loop_multiply(a, loop_multiply(b, c));
            CHECK(l.distance(r) < 1e-12);
        }
    }

    TEST_CASE("inverse") {
        const int M = 12;
        CHECK(loop_inverse(TwistedLaurentLoop::identity(M)).distance(TwistedLaurentLoop::identity(M)) < 1e-14);
        const auto g = lftest::exp_loop(0.7 * e1(), 1, M);
        CHECK(loop_inverse(g).distance(lftest::exp_loop(-0.7 * e1(), 1, M)) < 1e-12);
        std::mt19937 rng(4);
        for (int k = 0; k < 10; ++k) {
            const auto h = lftest::random_loop(rng, M);
            CHECK(loop_multiply(h, loop_inverse(h)).distance(TwistedLaurentLoop::identity(M)) < 1e-10);
        }
    }

    TEST_CASE("loop ode closed forms") {
        LoopAlgebraForm zero{-1, 1, [](double, Mat2* c) {
                                 for (int i = 0; i < 3; ++i) c[i] = Mat2::Zero();
                             }};
        CHECK(integrate_loop_ode(zero, 0.0, 1.0, 32).distance(TwistedLaurentLoop::identity()) < 1e-15);

        LoopAlgebraForm plus{0, 1, [](double, Mat2* c) {
                                 c[0] = Mat2::Zero();
                                 c[1] = e1();
                             }};
        const double s = 0.8;
        const auto g = integrate_loop_ode(plus, 0.0, s, 200);
        for (const cd lam : {cd(1, 0), cd(0, 1), std::polar(1.0, 0.9)}) {
            const Mat2 expect = std::cos(lam * s / 2.0) * Mat2::Identity() + 2.0 * std::sin(lam * s / 2.0) * e1();
            CHECK(mdiff(g.evaluate(lam), expect) < 1e-10);
        }

        LoopAlgebraForm both{-1, 1, [](double, Mat2* c) {
                                 c[0] = e1();
                                 c[1] = Mat2::Zero();
                                 c[2] = e1();
                             }};
        const auto h = integrate_loop_ode(both, 0.0, s, 200);
        const auto expect = loop_multiply(lftest::exp_loop(s * e1(), -1, 12), lftest::exp_loop(s * e1(), 1, 12));
        CHECK(h.distance(expect) < 1e-10);
    }

    TEST_CASE("birkhoff trivial cases") {
        const int M = 12;
        const auto id = birkhoff_split(TwistedLaurentLoop::identity(M));
        CHECK(id.minus.distance(TwistedLaurentLoop::identity(M)) < 1e-13);
        CHECK(id.plus.distance(TwistedLaurentLoop::identity(M)) < 1e-13);

        const auto gm = lftest::exp_loop(0.6 * e2(), -1, M);
        const auto sm = birkhoff_split(gm);
        CHECK(sm.minus.distance(gm) < 1e-12);
        CHECK(sm.plus.distance(TwistedLaurentLoop::identity(M)) < 1e-12);
    }

    TEST_CASE("birkhoff commuting example") {
        const int M = 12;
        const double s = 0.9;
        const auto hm = lftest::exp_loop(s * e1(), -1, M), hp = lftest::exp_loop(s * e1(), 1, M);
        const auto split = birkhoff_split(loop_multiply(hm, hp));
        CHECK(split.minus.distance(hm) < 1e-10);
        CHECK(split.plus.distance(hp) < 1e-10);
    }

    TEST_CASE("sample round trip") {
        std::mt19937 rng(9);
        const auto g = lftest::random_loop(rng, 12);
        CHECK(TwistedLaurentLoop::from_samples(g.sample(64), 12).distance(g) < 1e-13);
        CHECK(g.parity_ok(1e-14));
    }
}
