// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "builder.hpp"
#include "cauchy.hpp"
#include "classify.hpp"
#include "jets.hpp"
#include "loops.hpp"
#include "support.hpp"

using namespace lf;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome reference_labels() {
    const Label expect[] = {Label::CuspidalEdge, Label::Swallowtail, Label::CuspidalButterfly, Label::CuspidalLips,
                            Label::CuspidalBeaks};
    const auto t0 = Clock::now();
    bool ok = true;
    std::string got;
    for (int i = 0; i < 5; ++i) {
        const auto r = classify_jet(parse_jet(lftest::kReferenceJets[i]));
        ok = ok && r.label == expect[i];
        got += std::string(i ? "," : "") + label_name(r.label);
    }
    const double dt = seconds_since(t0);
    return {ok && dt < 1.0, fmt("%s in %.3f s", got.c_str(), dt)};
}

Outcome family_labels() {
    struct Case {
        AbcData d;
        Label expect;
    };
    const Case cases[] = {
        {lftest::abc_poly({0, 0, 1}, {-1}, {0, -1}), Label::CuspidalLips},
        {lftest::abc_poly({0, 0, 1}, {-1}, {0, 1}), Label::CuspidalBeaks},
        {lftest::abc_poly({0, 0, 0, 1}, {-1}, {1}), Label::CuspidalButterfly},
        {lftest::abc_poly({0, 1}, {0, 1}, {0.1}), Label::TwoFiveCuspidalEdge},
        {lftest::abc_poly({0, 0, 1}, {0, 1}, {-1}), Label::Shcherbak},
    };
    const auto t0 = Clock::now();
    bool ok = true;
    std::string got;
    for (const auto& c : cases) {
        const auto r = classify_abc(c.d, 0.0);
        ok = ok && r.label == c.expect;
        got += std::string(got.empty() ? "" : ",") + label_name(r.label);
    }
    const double dt = seconds_since(t0);
    return {ok && dt < 1.0, fmt("%s in %.3f s", got.c_str(), dt)};
}

Outcome vacuum_closed_form() {
    const Grid g = lftest::square(1.0, 201);
    BuildOptions o;
    o.M = 12;
    const auto t0 = Clock::now();
    const auto s = dalembert_solve(lftest::vacuum_potential(), g, o);
    const double dt = seconds_since(t0);
    double ef = 0, en = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            const double x = g.x(i), y = g.y(j);
            ef = std::max(ef, (s.f[k] - Vec3(x - y, 0, 0)).norm());
            en = std::max(en, (s.N[k] - Vec3(0, -std::sin(x + y), std::cos(x + y))).norm());
        }
    return {ef < 1e-6 && en < 1e-6 && dt < 60.0, fmt("max |f err| %.2e, |N err| %.2e, %.2f s", ef, en, dt)};
}

// Max |K + 1| over coarse nodes with |sigma| > 0.1, sampled at the same points on both grids.
Outcome curvature() {
    bool ok = true;
    std::string detail;
    for (int row = 0; row < 5; ++row) {
        const auto coarse = lftest::jet_surface(lftest::kReferenceJets[row], 101);
        const auto fine = lftest::jet_surface(lftest::kReferenceJets[row], 201);
        const auto fc = fundamental_forms(coarse, 2), ff = fundamental_forms(fine, 2);
        double ec = 0, ef = 0;
        int n = 0;
        for (int j = 0; j < 101; ++j)
            for (int i = 0; i < 101; ++i) {
                const int kc = coarse.grid.index(i, j), kf = fine.grid.index(2 * i, 2 * j);
                if (!fc.evaluated[kc] || !ff.evaluated[kf] || std::abs(coarse.sigma[kc]) <= 0.1) continue;
                ec = std::max(ec, std::abs(fc.K[kc] + 1));
                ef = std::max(ef, std::abs(ff.K[kf] + 1));
                ++n;
            }
        const double ratio = ec / ef;
        const bool row_ok = n > 0 && ec < 1e-3 && ratio >= 3.0;
        ok = ok && row_ok;
        detail += fmt("%sjet %d: %.2e -> %.2e (ratio %.2f, %d pts)", row ? "; " : "", row + 1, ec, ef, ratio, n);
    }
    return {ok, detail};
}

Outcome oracle() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (int row = 0; row < 2; ++row) {
        const auto p = lftest::jet_potential(lftest::kReferenceJets[row]);
        const auto s = dalembert_solve(p, lftest::square(0.5, 101));
        const auto m = pde_march(p.diagonal, s.grid, 4);
        double e = 0;
        for (int k = 0; k < s.grid.size(); ++k) e = std::max(e, (m.N[k] - s.N[k]).norm());
        ok = ok && e < 1e-4;
        detail += fmt("%sjet %d: %.2e", row ? "; " : "", row + 1, e);
    }
    const double dt = seconds_since(t0);
    return {ok && dt < 300.0, detail + fmt(" in %.2f s", dt)};
}

Outcome dual_f() {
    bool ok = true;
    std::string detail;
    auto check = [&](const char* name, const SurfaceData& s) {
        const double r = translation_gauge_residual(s, integrate_frontal(s.N, s.grid, s.base_x, s.base_y));
        ok = ok && r < 1e-5;
        detail += fmt("%s%s %.1e", detail.empty() ? "" : "; ", name, r);
    };
    check("vacuum", dalembert_solve(lftest::vacuum_potential(), lftest::square(1.0, 101)));
    for (int row = 0; row < 5; ++row) check(fmt("jet%d", row + 1).c_str(), lftest::jet_surface(lftest::kReferenceJets[row], 101));
    check("regular", dalembert_solve(abc_to_potential(lftest::abc_poly({-1}, {-1}, {0})), lftest::square(0.5, 101)));
    return {ok, detail};
}

Outcome parallels() {
    bool ok = true;
    std::string detail;
    auto check = [&](const char* name, const SurfaceData& s) {
        for (double r : {0.3, -0.3}) {
            const ParallelData pd = parallel_surface(s, r, 6);
            double w = 0, u = 0;
            int n = 0;
            for (int k = 0; k < s.grid.size(); ++k) {
                if (!pd.retained[k] || std::abs(s.sigma[k]) <= 0.1 || std::abs(pd.denominator[k]) < 0.1) continue;
                const double K = pd.K_fd[k], H = pd.H_fd[k], D = pd.denominator[k];
                w = std::max(w, std::abs((1 + r * r) * K + 2 * r * H + 1));
                u = std::max(u, std::abs(H * H - K - 1.0 / (D * D)));
                ++n;
            }
            ok = ok && n > 0 && w < 1e-6 && u < 1e-5;
            detail += fmt("%s%s r=%+.1f: %.1e/%.1e (%d pts)", detail.empty() ? "" : "; ", name, r, w, u, n);
        }
    };
    check("regular", dalembert_solve(abc_to_potential(lftest::abc_poly({-1}, {-1}, {0})), lftest::square(0.5, 101)));
    check("jet1", lftest::jet_surface(lftest::kReferenceJets[0], 101));
    return {ok, detail};
}

Outcome jet_engine() {
    std::mt19937 rng(20240);
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = lftest::random_jet(rng, 3);
        const auto j = expand_jet(c);
        const Rational a10 = c.a0[0], a11 = c.a1[0], b10 = c.b0[0], b11 = c.b1[0];
        const Rational half(1, 2);
        const Rational u12 = a10 * a11 * a11 + half * a10 * b11 * b11 + half * a11 * b10 * b11;
        const Rational u21 = a10 * a10 * a11 + half * a10 * b10 * b11 + half * a11 * b10 * b10;
        const Rational v12 = b10 * b11 * b11 + half * b10 * a11 * a11 + half * b11 * a10 * a11;
        const Rational v21 = b10 * b10 * b11 + half * b10 * a10 * a11 + half * b11 * a10 * a10;
        if (j.u.get(1, 2) != u12 || j.u.get(2, 1) != u21 || j.v.get(1, 2) != v12 || j.v.get(2, 1) != v21 ||
            j.u.get(1, 1) != 0 || j.v.get(1, 1) != 0)
            ++bad;
    }
    int bad_trip = 0, trips = 0;
    for (int n = 1; n <= 6; ++n)
        for (int trial = 0; trial < 20; ++trial, ++trips) {
            const auto c = lftest::random_jet(rng, n);
            const auto back = poly_cauchy_to_jet(jet_to_poly_cauchy(c));
            if (back.a0 != c.a0 || back.a1 != c.a1 || back.b0 != c.b0 || back.b1 != c.b1) ++bad_trip;
            PolyCauchyData<Rational> d;
            for (int i = 0; i < n; ++i) {
                d.alpha.push_back(lftest::random_rational(rng));
                d.beta.push_back(lftest::random_rational(rng));
                d.lambda.push_back(lftest::random_rational(rng));
                d.mu.push_back(lftest::random_rational(rng));
            }
            const auto d2 = jet_to_poly_cauchy(poly_cauchy_to_jet(d));
            if (d2.alpha != d.alpha || d2.beta != d.beta || d2.lambda != d.lambda || d2.mu != d.mu) ++bad_trip;
        }
    return {bad == 0 && bad_trip == 0,
            fmt("%d/100 degree-3 mismatches, %d/%d round-trip failures (n <= 6)", bad, bad_trip, 2 * trips)};
}

// Residual and factor structure of one splitting.
struct SplitCheck {
    double residual = 0;
    bool structure = true;
};

SplitCheck split_check(const TwistedLaurentLoop& g) {
    const int M = g.order();
    const auto s = birkhoff_split(g);
    SplitCheck c;
    c.residual = loop_multiply(s.minus, s.plus).distance(g);
    c.structure = (s.minus.coeff(0) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12;
    for (int n = 1; n <= M; ++n) {
        c.structure = c.structure && s.minus.coeff(n).cwiseAbs().maxCoeff() == 0.0;
        c.structure = c.structure && s.plus.coeff(-n).cwiseAbs().maxCoeff() == 0.0;
    }
    c.structure = c.structure && s.minus.parity_ok(1e-12) && s.plus.parity_ok(1e-12);
    for (const cd lam : circle_points(16)) {
        c.structure = c.structure && std::abs(det2(s.minus.evaluate(lam)) - 1.0) < 1e-9;
        c.structure = c.structure && std::abs(det2(s.plus.evaluate(lam)) - 1.0) < 1e-9;
    }
    return c;
}

Outcome birkhoff() {
    const int M = 12;
    const double s = 0.9;
    const auto hm = lftest::exp_loop(s * e1(), -1, M), hp = lftest::exp_loop(s * e1(), 1, M);
    const auto closed = birkhoff_split(loop_multiply(hm, hp));
    const double closed_err = std::max(closed.minus.distance(hm), closed.plus.distance(hp));
    const SplitCheck cc = split_check(loop_multiply(hm, hp));
    bool ok = closed_err < 1e-9 && cc.residual < 1e-9 && cc.structure;

    std::mt19937 rng(77);
    double worst = 0, worst_tail = 0;
    int structural = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = lftest::random_loop(rng, M);
        worst_tail = std::max(worst_tail, g.tail_mass());
        const SplitCheck c = split_check(g);
        worst = std::max(worst, c.residual);
        if (!c.structure) ++structural;
    }
    ok = ok && worst_tail < 1e-12 && worst < 1e-9 && structural == 0;
    return {ok, fmt("closed form factor error %.1e, residual %.1e; random: max tail %.1e, max residual %.1e, "
                    "%d structural failures",
                    closed_err, cc.residual, worst_tail, worst, structural)};
}

Detection sweep_point(const AbcData& d) {
    BuildOptions o;
    o.M = 12;
    return detect_singularities(dalembert_solve(abc_to_potential(d), lftest::square(0.5, 101), o));
}

Outcome bifurcations() {
    const auto minus = sweep_point(lftest::abc_poly({-0.014, 0, 1}, {0, 1}, {-1}));
    const auto plus = sweep_point(lftest::abc_poly({0.015, 0, 1}, {0, 1}, {-1}));
    const bool shcherbak = (minus.swallowtails >= 2 && plus.swallowtails == 0) ||
                           (plus.swallowtails >= 2 && minus.swallowtails == 0);

    const auto rp = sweep_point(lftest::abc_poly({0.1, 0, 1}, {-1}, {0, -1}));
    const auto rm = sweep_point(lftest::abc_poly({-0.06, 0, 1}, {-1}, {0, -1}));
    const bool lips = (rp.contours == 0 && rm.closed_contours >= 1) || (rm.contours == 0 && rp.closed_contours >= 1);
    return {shcherbak && lips,
            fmt("shcherbak swallowtails %d (zeta<0) / %d (zeta>0); lips contours %d (r=0.1) / %d closed of %d (r=-0.06)",
                minus.swallowtails, plus.swallowtails, rp.contours, rm.closed_contours, rm.contours)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"reference jets classify exactly", reference_labels},
        {"family germs classify at the bifurcation value", family_labels},
        {"vacuum surface matches its closed form", vacuum_closed_form},
        {"K = -1 with second-order convergence", curvature},
        {"oracle march agrees with the loop-group build", oracle},
        {"Sym and integrated f agree up to translation", dual_f},
        {"parallel surfaces satisfy Weingarten and umbilic identities", parallels},
        {"jet engine is exact", jet_engine},
        {"Birkhoff splitting", birkhoff},
        {"bifurcation sweeps", bifurcations},
    };
    int failed = 0;
    int index = 1;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", index++, c.name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d/10 acceptance criteria passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
