#include <doctest.h>

#include <cmath>

#include "classify.hpp"
#include "errors.hpp"
#include "planar.hpp"
#include "support.hpp"
#include "verify.hpp"

using namespace lf;

namespace {

SingularityReport jet(const char* text) { return classify_jet(parse_jet(text)); }

double cond(const SingularityReport& r, const char* id) {
    const Condition* c = r.find(id);
    REQUIRE(c != nullptr);
    return c->value;
}

FamilyJet family(const char* base, int usx, int usy, int vsx, int vsy) {
    FamilyJet f;
    f.base = parse_jet(base);
    f.usx = usx;
    f.usy = usy;
    f.vsx = vsx;
    f.vsy = vsy;
    return f;
}

UniFunc poly(std::vector<double> c) { return UniFunc::polynomial(std::move(c)); }

}  // namespace

TEST_SUITE("classify_jet") {
    TEST_CASE("reference jets") {
        CHECK(jet(lftest::kReferenceJets[0]).label == Label::CuspidalEdge);
        const auto sw = jet(lftest::kReferenceJets[1]);
        CHECK(sw.label == Label::Swallowtail);
        CHECK(cond(sw, "swallowtail E3") == 12.0);
        CHECK(jet(lftest::kReferenceJets[2]).label == Label::CuspidalButterfly);
        CHECK(jet(lftest::kReferenceJets[3]).label == Label::CuspidalLips);
        CHECK(jet(lftest::kReferenceJets[4]).label == Label::CuspidalBeaks);
    }

    TEST_CASE("non-front strata") {
        CHECK(jet("1,0,0; 0,0,1; 0,0,0; 0,1,0").label == Label::TwoFiveCuspidalEdge);
        CHECK(jet("1,0,0; 0,1,0; 1,1,0; 0,1,1").label == Label::Shcherbak);
        CHECK(jet("1,0,0; 0,0,0; 0,0,0; 1,0,0").label == Label::Regular);
    }

    TEST_CASE("rank zero and order checks") {
        CHECK(jet("0,1,0; 0,1,0; 0,1,0; 0,1,0").label == Label::Rank0);
        const auto r = jet("1,1; 1,0; 1,0; 1,0");
        CHECK(r.label == Label::CuspidalEdge);
    }

    TEST_CASE("monge taylor tangent") {
        BivariateJet<Rational> z{3, Poly2<Rational>(3), Poly2<Rational>(3)};
        const auto t0 = monge_taylor_tangent(z);
        CHECK((t0.U1.is_zero() && t0.U2.is_zero() && t0.V1.is_zero() && t0.V2.is_zero()));

        BivariateJet<Rational> jx = z;
        jx.u.at(1, 0) = 1;
        auto tx = monge_taylor_tangent(jx);
        CHECK(tx.U1.get(2, 0) == -1);
        tx.U1.at(2, 0) = 0;
        CHECK((tx.U1.is_zero() && tx.U2.is_zero() && tx.V1.is_zero() && tx.V2.is_zero()));

        BivariateJet<Rational> jy = z;
        jy.u.at(0, 1) = 1;
        auto ty = monge_taylor_tangent(jy);
        CHECK(ty.U2.get(0, 2) == -1);
        ty.U2.at(0, 2) = 0;
        CHECK((ty.U1.is_zero() && ty.U2.is_zero() && ty.V1.is_zero() && ty.V2.is_zero()));

        BivariateJet<Rational> low{1, Poly2<Rational>(1), Poly2<Rational>(1)};
        CHECK_THROWS_AS(monge_taylor_tangent(low), Error);
    }

    TEST_CASE("family genericity") {
        const auto r = family_genericity(family("1,0,0; 0,0,1; 0,0,0; 0,1,0", 0, 1, 0, 0));
        CHECK(r.stratum == Label::TwoFiveCuspidalEdge);
        CHECK(r.conditions[0].verdict != Verdict::Zero);

        const auto triv = family_genericity(family("1,0,0; 0,0,1; 0,0,0; 0,1,0", 0, 0, 0, 0));
        for (const auto& c : triv.conditions) CHECK(c.verdict == Verdict::Zero);

        const auto sh = family_genericity(family("1,0,0; 0,1,0; 1,1,0; 0,1,1", 0, 1, 0, 0));
        CHECK(sh.stratum == Label::Shcherbak);
        CHECK(sh.conditions[0].value == 1.0);

        try {
            family_genericity(family(lftest::kReferenceJets[0], 0, 1, 0, 0));
            FAIL("expected WrongStratum");
        } catch (const Error& e) {
            CHECK(e.code() == Status::WrongStratum);
        }
    }

    TEST_CASE("gauss map strata") {
        auto g = [](const char* t) { return classify_gauss_map_jet(parse_jet(t)).label; };
        CHECK(g("1,0,0; 0,0,0; 1,0,0; 1,0,0") == "Regular");
        CHECK(g("1,0,0; 0,0,0; 0,0,0; 0,1,0") == "Fold");
        CHECK(g("0,1,0; 0,1,0; 0,1,0; 0,1,0") == "Excluded");
        CHECK(g("0,1,0; 0,1,0; 0,0,0; 0,1,0") == "RankZeroI22");
        CHECK(g("1,0,0; 1,0,0; 0,0,1; 0,0,-1") == "Lips");
        CHECK(g("1,0,0; 1,0,0; 0,0,1; 0,0,2") == "Beaks");
        CHECK_THROWS_AS(classify_gauss_map_jet(parse_jet("1,0; 0,0; 0,0; 0,1")), Error);
    }
}

TEST_SUITE("classify_abc") {
    TEST_CASE("families at the bifurcation value") {
        CHECK(classify_abc(lftest::abc_poly({0, 0, 1}, {-1}, {0, -1}), 0.0).label == Label::CuspidalLips);
        const auto beaks = classify_abc(lftest::abc_poly({0, 0, 1}, {-1}, {0, 1}), 0.0);
        CHECK(beaks.label == Label::CuspidalBeaks);
        CHECK(cond(beaks, "c'(a''+c')") == doctest::Approx(3.0));
        CHECK(classify_abc(lftest::abc_poly({0, 0, 0, 1}, {-1}, {1}), 0.0).label == Label::CuspidalButterfly);
        const auto tf = classify_abc(lftest::abc_poly({0, 1}, {0, 1}, {0.1}), 0.0);
        CHECK(tf.label == Label::TwoFiveCuspidalEdge);
        CHECK(cond(tf, "a'b''-b'a''+2c(a'^2+b'^2)") == doctest::Approx(0.4));
        const auto sh = classify_abc(lftest::abc_poly({0, 0, 1}, {0, 1}, {-1}), 0.0);
        CHECK(sh.label == Label::Shcherbak);
        CHECK(cond(sh, "b'c") == doctest::Approx(-1.0));
        CHECK(cond(sh, "a''-2b'c") == doctest::Approx(4.0));
    }

    TEST_CASE("off the curve") {
        CHECK(classify_abc(lftest::abc_poly({0, 0, 1}, {-1}, {0, -1}), 0.3).label == Label::Regular);
        CHECK(classify_abc(lftest::abc_poly({0, 1}, {-1}, {0}), 0.0).label == Label::CuspidalEdge);
    }
}

TEST_SUITE("classify_grid") {
    TEST_CASE("vacuum is identically singular") {
        const auto s = dalembert_solve(lftest::vacuum_potential(), lftest::square(1.0, 41));
        const auto r = classify_grid(s, 0.0, 0.0);
        CHECK(r.label == Label::Unresolved);
        CHECK(r.note.find("identically singular") != std::string::npos);
        CHECK(detect_singularities(s).identically_singular);
        CHECK_THROWS_AS(classify_grid(s, 3.0, 0.0), Error);
    }

    TEST_CASE("agrees with the jet classifier on the reference jets") {
        for (const char* row : lftest::kReferenceJets) {
            CAPTURE(row);
            const auto s = lftest::jet_surface(row, 101);
            CHECK(classify_grid(s, 0.0, 0.0).label == classify_jet(parse_jet(row)).label);
        }
    }

    TEST_CASE("swallowtail conditions") {
        const auto s = lftest::jet_surface(lftest::kReferenceJets[1], 101);
        const auto r = classify_grid(s, 0.0, 0.0);
        REQUIRE(r.label == Label::Swallowtail);
        CHECK(r.find("eta sigma")->verdict == Verdict::Zero);
        CHECK(r.find("eta^2 sigma")->verdict != Verdict::Zero);
    }

    TEST_CASE("regular surface has nothing to detect") {
        const auto s = dalembert_solve(abc_to_potential(lftest::abc_poly({-1}, {-1}, {0})), lftest::square(0.5, 41));
        const auto d = detect_singularities(s);
        CHECK(d.points.empty());
        CHECK(d.contours == 0);
        try {
            classify_grid(s, 0.1, 0.2);
            FAIL("expected NotSingular");
        } catch (const Error& e) {
            CHECK(e.code() == Status::NotSingular);
        }
    }
}

TEST_SUITE("planar") {
    TEST_CASE("singular set of a simple map") {
        const PlanarWaveMap m{poly({0, 1}), poly({0, 0, 1}), poly({0, 1}), poly({0, 0, 1})};
        for (double t : {-0.4, 0.0, 0.3}) CHECK(std::abs(planar_eval(m, t, t).lambda) < 1e-14);
        CHECK(std::abs(planar_eval(m, 0.3, -0.1).lambda - 2 * (-0.1 - 0.3)) < 1e-14);
        CHECK(planar_stratum(m, 0.2, 0.2).label == "Singular");
        CHECK(planar_stratum(m, 0.2, -0.2).label == "Regular");
    }

    TEST_CASE("zero map") {
        const PlanarWaveMap z{poly({0}), poly({0}), poly({0}), poly({0})};
        const Grid g = lftest::square(1.0, 5);
        for (const auto& p : planar_eval(z, g)) CHECK(p.lambda == 0.0);
    }

    TEST_CASE("null lines in the singular set") {
        const PlanarWaveMap m{poly({0, 0, 1}), poly({0, 0, 0, 1}), poly({0, 1}), poly({0, 0, 1})};
        const auto r = planar_stratum(m, 0.0, 0.0);
        CHECK(r.null_x_in_sigma);
        CHECK_FALSE(r.null_y_in_sigma);
        for (double y : {-0.5, 0.25, 0.9}) CHECK(std::abs(planar_eval(m, 0.0, y).lambda) < 1e-14);
    }

    TEST_CASE("rank zero") {
        const PlanarWaveMap m{poly({0, 0, 1}), poly({0, 0, 0, 1}), poly({0, 0, 1}), poly({0, 0, 0, 1})};
        const auto r = planar_stratum(m, 0.0, 0.0);
        CHECK(r.label == "Rank0");
        CHECK(r.rank == 0);
        CHECK(r.null_x_in_sigma);
        CHECK(r.null_y_in_sigma);
        CHECK_FALSE(r.not_finitely_determined);

        const PlanarWaveMap flat{poly({0, 0, 0, 1}), poly({0, 0, 0, 0, 1}), poly({0, 0, 0, 1}), poly({0, 0, 0, 0, 1})};
        CHECK(planar_stratum(flat, 0.0, 0.0).not_finitely_determined);
    }
}

TEST_SUITE("verify") {
    TEST_CASE("vacuum passes") {
        BuildOptions o;
        o.M = 16;
        const auto p = lftest::vacuum_potential();
        const auto s = dalembert_solve(p, lftest::square(1.0, 81), o);
        const auto r = verify_surface(s, p);
        for (const auto& c : r.checks) {
            CAPTURE(c.name);
            CHECK(c.pass);
        }
        CHECK(r.pass());
    }

    TEST_CASE("tiny truncation fails") {
        BuildOptions o;
        o.M = 2;
        const auto p = lftest::vacuum_potential();
        const auto s = dalembert_solve(p, lftest::square(1.0, 41), o);
        VerifyOptions vo;
        vo.oracle = false;
        const auto r = verify_surface(s, p, vo);
        CHECK_FALSE(r.pass());
        bool tail_failed = false;
        for (const auto& c : r.checks)
            if (c.name == "truncation_tail") tail_failed = !c.pass;
        CHECK(tail_failed);
    }
}
