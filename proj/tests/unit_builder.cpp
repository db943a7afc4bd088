#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "builder.hpp"
#include "cauchy.hpp"
#include "errors.hpp"
#include "support.hpp"

using namespace lf;
namespace fs = std::filesystem;

namespace {

GeometricCauchyData geometric(std::function<Vec3(double)> N0, std::function<Vec3(double)> V) {
    GeometricCauchyData d;
    d.N0 = std::move(N0);
    d.V = std::move(V);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "loopfront_unit";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("cauchy") {
    TEST_CASE("geometric data to a, b, c") {
        const auto d1 = geometric_to_abc(geometric([](double t) { return Vec3(std::sin(t), 0, std::cos(t)); },
                                                   [](double) { return Vec3(0, 1, 0); }));
        for (double t : {-0.5, 0.0, 0.7}) {
            const auto v = d1.eval(t);
            CHECK(v[0] == doctest::Approx(-1.0).epsilon(1e-6));
            CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(std::abs(v[2]) < 1e-6);
        }
        const auto d2 = geometric_to_abc(geometric([](double) { return Vec3(0, 0, 1); },
                                                   [](double t) { return Vec3(std::cos(t), std::sin(t), 0); }));
        for (double t : {-0.3, 0.4}) {
            const auto v = d2.eval(t);
            CHECK(std::abs(v[0]) < 1e-6);
            CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(v[2] == doctest::Approx(1.0).epsilon(1e-6));
        }
    }

    TEST_CASE("V equal to N0' is degenerate") {
        const auto d = geometric([](double t) { return Vec3(std::cos(t), std::sin(t), 0); },
                                 [](double t) { return Vec3(-std::sin(t), std::cos(t), 0); });
        try {
            geometric_to_abc(d);
            FAIL("expected DegenerateData");
        } catch (const Error& e) {
            CHECK(e.code() == Status::DegenerateData);
        }
    }

    TEST_CASE("invalid geometric data") {
        CHECK_THROWS_AS(geometric_to_abc(geometric([](double) { return Vec3(0, 0, 2); },
                                                   [](double) { return Vec3(1, 0, 0); })),
                        Error);
        CHECK_THROWS_AS(geometric_to_abc(geometric([](double) { return Vec3(0, 0, 1); },
                                                   [](double) { return Vec3(0, 0, 0); })),
                        Error);
    }

    TEST_CASE("potential coefficients") {
        auto coeffs = [](const AbcData& d, double t) {
            const auto p = abc_to_potential(d);
            std::array<Mat2, 3> c;
            p.chi.eval(t, c.data());
            return c;
        };
        const auto c0 = coeffs(lftest::abc_poly({0}, {0}, {0}), 0.2);
        CHECK(c0[0].cwiseAbs().maxCoeff() == 0.0);
        CHECK(c0[1].cwiseAbs().maxCoeff() == 0.0);
        CHECK((c0[2] - e1()).cwiseAbs().maxCoeff() == 0.0);

        const auto cv = coeffs(lftest::abc_poly({0}, {-1}, {0}), 0.2);
        CHECK((cv[0] - e1()).cwiseAbs().maxCoeff() == 0.0);

        const auto ct = coeffs(lftest::abc_poly({0, 1}, {0, 1}, {0.1}), 0.5);
        CHECK((ct[0] - (-0.5 * e1() + 0.5 * e2())).cwiseAbs().maxCoeff() < 1e-15);
    }

    TEST_CASE("jet potential without a y-derivative") {
        // N_y vanishes identically, so the lambda^-1 part of the potential (hence b) does too.
        JetCoeffs<double> c(1);
        c.a0[0] = 1;
        try {
            jet_to_potential(expand_jet(c), -0.3, 0.3);
            FAIL("expected DegenerateData");
        } catch (const Error& e) {
            CHECK(e.code() == Status::DegenerateData);
        }
    }

    TEST_CASE("jet potential of a singular diagonal") {
        // Cuspidal edge germ: the origin is singular, so a vanishes there while b does not.
        const auto p = jet_to_potential(expand_jet(parse_jet("1,1,0; 1,0,0; 1,0,0; 1,0,0").cast<double>()), -0.3, 0.3);
        const auto v = p.abc.eval(0.0);
        CHECK(std::abs(v[0]) < 1e-6);
        CHECK(std::abs(v[1]) > 1e-3);
    }

    TEST_CASE("sampled data") {
        std::vector<double> t;
        std::vector<Vec3> N0, V;
        for (int k = 0; k <= 40; ++k) {
            const double s = -1.0 + k / 20.0;
            t.push_back(s);
            N0.emplace_back(0, -std::sin(2 * s), std::cos(2 * s));
            V.emplace_back(0, -std::cos(2 * s), -std::sin(2 * s));
        }
        const auto g = geometric_from_samples(t, N0, V, 0.0);
        CHECK((g.N0(0.33) - Vec3(0, -std::sin(0.66), std::cos(0.66))).norm() < 1e-6);
        CHECK_THROWS_AS(geometric_from_samples({0, 1, 2}, {Vec3(0, 0, 1)}, {Vec3(1, 0, 0)}, 0.0), Error);
    }
}

TEST_SUITE("builder") {
    TEST_CASE("vacuum closed form") {
        const Grid g = lftest::square(1.0, 41);
        const auto s = dalembert_solve(lftest::vacuum_potential(), g);
        double ef = 0, en = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const int k = g.index(i, j);
                const double x = g.x(i), y = g.y(j);
                ef = std::max(ef, (s.f[k] - Vec3(x - y, 0, 0)).norm());
                en = std::max(en, (s.N[k] - Vec3(0, -std::sin(x + y), std::cos(x + y))).norm());
            }
        CHECK(ef < 1e-6);
        CHECK(en < 1e-6);
        CHECK(s.outside_count == 0);
        CHECK(sphere_residual(s) < 1e-10);
    }

    TEST_CASE("lambda-only potential") {
        const Grid g = lftest::square(1.0, 21);
        const auto s = dalembert_solve(abc_to_potential(lftest::abc_poly({0}, {0}, {0}, 1.0)), g);
        double ef = 0, en = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const int k = g.index(i, j);
                const double x = g.x(i);
                ef = std::max(ef, (s.f[k] - Vec3(x, 0, 0)).norm());
                en = std::max(en, (s.N[k] - Vec3(0, -std::sin(x), std::cos(x))).norm());
            }
        CHECK(ef < 1e-6);
        CHECK(en < 1e-6);
    }

    TEST_CASE("grid validation") {
        Grid g;
        g.nx = 1;
        CHECK_THROWS_AS(g.validate(), Error);
        g = Grid();
        g.x_max = g.x_min;
        CHECK_THROWS_AS(g.validate(), Error);
    }

    TEST_CASE("frontal integration") {
        const Grid g = lftest::square(1.0, 41);
        const std::vector<Vec3> flat(g.size(), Vec3(0, 0, 1));
        for (const Vec3& f : integrate_frontal(flat, g, 0, 0)) CHECK(f.norm() < 1e-14);

        std::vector<Vec3> N(g.size());
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                N[g.index(i, j)] = Vec3(0, -std::sin(g.x(i) + g.y(j)), std::cos(g.x(i) + g.y(j)));
        const auto f = integrate_frontal(N, g, 0, 0);
        double e = 0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) e = std::max(e, (f[g.index(i, j)] - Vec3(g.x(i) - g.y(j), 0, 0)).norm());
        CHECK(e < 1e-6);
    }

    TEST_CASE("cuspidal edge surface invariants") {
        const auto s = lftest::jet_surface(lftest::kReferenceJets[0], 61);
        CHECK(harmonicity_residual(s) < 1e-4);
        const auto ff = fundamental_forms(s, 6);
        double ek = 0, efx = 0;
        int count = 0;
        for (int k = 0; k < s.grid.size(); ++k)
            if (ff.evaluated[k] && std::abs(s.sigma[k]) > 0.1) {
                ek = std::max(ek, std::abs(ff.K[k] + 1));
                efx = std::max(efx, ff.fx_nx_residual[k]);
                ++count;
            }
        CHECK(count > 100);
        CHECK(ek < 1e-3);
        CHECK(efx < 1e-6);
        const auto fi = integrate_frontal(s.N, s.grid, s.base_x, s.base_y);
        CHECK(translation_gauge_residual(s, fi) < 1e-5);
    }

    TEST_CASE("parallel at r = 0") {
        const auto s = lftest::jet_surface(lftest::kReferenceJets[0], 61);
        const auto p = parallel_surface(s, 0.0);
        int count = 0;
        for (int k = 0; k < s.grid.size(); ++k)
            if (p.retained[k]) {
                ++count;
                CHECK((p.g[k] - s.f[k]).norm() < 1e-15);
                CHECK(p.K_formula[k] == doctest::Approx(-1.0));
            }
        CHECK(count > 0);
    }

    TEST_CASE("oracle march") {
        const Grid g = lftest::square(0.5, 21);
        const DiagonalData zero = [](double) { return std::make_pair(Vec3(0, 0, 1), Vec3(0, 0, 0)); };
        const auto m = pde_march(zero, g, 2);
        for (const Vec3& n : m.N) CHECK((n - Vec3(0, 0, 1)).norm() < 1e-14);

        const auto p = lftest::jet_potential(lftest::kReferenceJets[0]);
        const auto s = dalembert_solve(p, lftest::square(0.5, 41));
        const auto o = pde_march(p.diagonal, s.grid, 4);
        double e = 0;
        for (int k = 0; k < s.grid.size(); ++k) e = std::max(e, (o.N[k] - s.N[k]).norm());
        CHECK(e < 1e-3);
    }

    TEST_CASE("singular contours") {
        const auto reg = dalembert_solve(abc_to_potential(lftest::abc_poly({-1}, {-1}, {0})), lftest::square(0.5, 41));
        CHECK(singular_contour(reg).empty());

        const auto s = lftest::jet_surface(lftest::kReferenceJets[0], 61);
        const auto cs = singular_contour(s);
        REQUIRE(cs.size() == 1);
        double best = 1e9;
        for (const auto& q : cs[0].points) best = std::min(best, std::hypot(q.x, q.y));
        CHECK(best < 2 * s.grid.hx());
    }

    TEST_CASE("exports") {
        auto s = dalembert_solve(lftest::vacuum_potential(), lftest::square(1.0, 2));
        const fs::path obj = scratch("tiny.obj");
        export_mesh(s, obj.string(), MeshFormat::Obj);
        const std::string text = slurp(obj);
        int v = 0, f = 0;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);) {
            if (line.rfind("v ", 0) == 0) ++v;
            if (line.rfind("f ", 0) == 0) ++f;
        }
        CHECK(v == 4);
        CHECK(f == 2);

        const fs::path ply = scratch("tiny.ply");
        export_mesh(s, ply.string(), MeshFormat::PlyBinary);
        CHECK(slurp(ply).rfind("ply\nformat binary_little_endian 1.0", 0) == 0);

        const fs::path csv = scratch("tiny_sigma.csv");
        export_sigma(s, csv.string());
        CHECK(slurp(csv).rfind("i,j,x,y,sigma,sigma_frame,status", 0) == 0);

        CHECK_THROWS_AS(export_mesh(s, "/nonexistent/dir/x.obj", MeshFormat::Obj), Error);
    }
}
