#include "verify.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace lf {

bool VerifyReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

namespace {

VerifyCheck make(std::string name, double residual, double tol, int points, std::string note = {}) {
    VerifyCheck c;
    c.name = std::move(name);
    c.residual = residual;
    c.tolerance = tol;
    c.pass = std::isfinite(residual) && residual <= tol;
    c.points = points;
    c.note = std::move(note);
    return c;
}

}  // namespace

VerifyReport verify_surface(const SurfaceData& s, const PotentialPair& p, const VerifyOptions& o) {
    const Grid& g = s.grid;
    VerifyReport rep;
    rep.outside_count = s.outside_count;
    int ok_count = 0;
    for (int k = 0; k < g.size(); ++k) ok_count += s.ok(k) ? 1 : 0;

    rep.checks.push_back(make("truncation_tail", s.max_tail, 1e-8, ok_count));
    rep.checks.push_back(make("unit_normal", sphere_residual(s), 1e-8, ok_count));
    rep.checks.push_back(make("harmonicity", harmonicity_residual(s), 1e-5, ok_count));
    const auto fi = integrate_frontal(s.N, g, s.base_x, s.base_y);
    rep.checks.push_back(make("sym_vs_integrated", translation_gauge_residual(s, fi), 1e-5, ok_count));

    const FundamentalForms ff = fundamental_forms(s, o.fd_order);
    double ek = 0.0, efx = 0.0;
    int nk = 0;
    for (int k = 0; k < g.size(); ++k)
        if (ff.evaluated[k] && std::abs(s.sigma[k]) > o.sigma_min) {
            ek = std::max(ek, std::abs(ff.K[k] + 1.0));
            efx = std::max(efx, ff.fx_nx_residual[k]);
            ++nk;
        }
    const std::string none = nk == 0 ? "no regular points" : "";
    rep.checks.push_back(make("curvature", ek, 1e-3, nk, none));
    rep.checks.push_back(make("fx_equals_nx", efx, 1e-6, nk, none));

    for (double r : o.radii) {
        const ParallelData pd = parallel_surface(s, r, o.fd_order);
        double w = 0.0, u = 0.0;
        int n = 0;
        for (int k = 0; k < g.size(); ++k) {
            if (!pd.retained[k] || std::abs(s.sigma[k]) <= o.sigma_min) continue;
            const double D = pd.denominator[k];
            if (std::abs(D) < o.focal_min) continue;
            const double K = pd.K_fd[k], H = pd.H_fd[k];
            w = std::max(w, std::abs((1 + r * r) * K + 2 * r * H + 1));
            u = std::max(u, std::abs(H * H - K - 1.0 / (D * D)));
            ++n;
        }
        char tag[32];
        std::snprintf(tag, sizeof tag, "%+.3g", r);
        const std::string note = n == 0 ? "no retained points" : "";
        rep.checks.push_back(make(std::string("weingarten_r") + tag, w, 1e-6, n, note));
        rep.checks.push_back(make(std::string("umbilic_r") + tag, u, 1e-5, n, note));
    }

    if (o.oracle) {
        const bool square = g.nx == g.ny && std::abs(g.x_min - g.y_min) < 1e-12 && std::abs(g.x_max - g.y_max) < 1e-12;
        if (!square) {
            VerifyCheck c = make("oracle", 0.0, 1e-4, 0, "skipped: grid is not square about the diagonal");
            rep.checks.push_back(c);
        } else {
            // Richardson extrapolation of the second-order march over two refinements.
            const MarchResult m1 = pde_march(p.diagonal, g, o.oracle_refine);
            const MarchResult m2 = pde_march(p.diagonal, g, 2 * o.oracle_refine);
            double e = 0.0;
            int n = 0;
            for (int k = 0; k < g.size(); ++k)
                if (s.ok(k)) {
                    const Vec3 N = ((4.0 * m2.N[k] - m1.N[k]) / 3.0).normalized();
                    e = std::max(e, (N - s.N[k]).norm());
                    ++n;
                }
            rep.checks.push_back(make("oracle", e, 1e-4, n));
        }
    }
    return rep;
}

std::string to_json(const VerifyReport& r, int indent) {
    nlohmann::ordered_json o;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["residual"] = c.residual;
        j["tolerance"] = c.tolerance;
        j["pass"] = c.pass;
        j["points"] = c.points;
        if (!c.note.empty()) j["note"] = c.note;
        arr.push_back(j);
    }
    o["checks"] = arr;
    o["outside_big_cell"] = r.outside_count;
    o["pass"] = r.pass();
    return o.dump(indent);
}

}  // namespace lf
