#include "planar.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace lf {

PlanarSample planar_eval(const PlanarWaveMap& m, double x, double y) {
    PlanarSample s;
    s.value = {m.f1(x) + m.g1(y), m.f2(x) + m.g2(y)};
    const double f1 = m.f1.derivative(x, 1), f2 = m.f2.derivative(x, 1);
    const double g1 = m.g1.derivative(y, 1), g2 = m.g2.derivative(y, 1);
    s.jacobian = {{{f1, g1}, {f2, g2}}};
    s.lambda = f1 * g2 - f2 * g1;
    return s;
}

std::vector<PlanarSample> planar_eval(const PlanarWaveMap& m, const Grid& g) {
    g.validate();
    std::vector<PlanarSample> out(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out[g.index(i, j)] = planar_eval(m, g.x(i), g.y(j));
    return out;
}

PlanarReport planar_stratum(const PlanarWaveMap& m, double x, double y) {
    const bool exact = m.f1.is_polynomial() && m.f2.is_polynomial() && m.g1.is_polynomial() && m.g2.is_polynomial();
    std::array<double, 4> F1{}, F2{}, G1{}, G2{};
    for (int k = 1; k <= 3; ++k) {
        F1[k] = m.f1.derivative(x, k);
        F2[k] = m.f2.derivative(x, k);
        G1[k] = m.g1.derivative(y, k);
        G2[k] = m.g2.derivative(y, k);
    }
    double scale = 1.0;
    for (int k = 1; k <= 3; ++k)
        scale = std::max({scale, std::abs(F1[k]), std::abs(F2[k]), std::abs(G1[k]), std::abs(G2[k])});
    auto judge = [&](double v, double s) {
        if (exact) return std::abs(v) <= 1e-12 * s ? Verdict::Zero : Verdict::NonZero;
        if (std::abs(v) < 1e-6 * s) return Verdict::Zero;
        return std::abs(v) <= 1e-4 * s ? Verdict::Indeterminate : Verdict::NonZero;
    };
    PlanarReport r;
    auto add = [&](const std::string& id, double v, double s) {
        const Verdict vd = judge(v, s);
        r.conditions.push_back({id, v, vd});
        return vd == Verdict::Zero;
    };
    const bool nx0 = add("|N_x|", std::hypot(F1[1], F2[1]), scale);
    const bool ny0 = add("|N_y|", std::hypot(G1[1], G2[1]), scale);
    const double s2 = scale * scale;
    const bool l0 = add("lambda", F1[1] * G2[1] - F2[1] * G1[1], s2);
    r.null_x_in_sigma = nx0;
    r.null_y_in_sigma = ny0;
    if (nx0 && ny0) {
        r.rank = 0;
        r.label = "Rank0";
    } else if (l0) {
        r.rank = 1;
        r.label = "Singular";
    } else {
        r.rank = 2;
        r.label = "Regular";
        return r;
    }
    const bool lx0 = add("lambda_x", F1[2] * G2[1] - F2[2] * G1[1], s2);
    const bool ly0 = add("lambda_y", F1[1] * G2[2] - F2[1] * G1[2], s2);
    const bool lxy0 = add("lambda_xy", F1[2] * G2[2] - F2[2] * G1[2], s2);
    const bool lxx0 = add("lambda_xx", F1[3] * G2[1] - F2[3] * G1[1], s2);
    const bool lyy0 = add("lambda_yy", F1[1] * G2[3] - F2[1] * G1[3], s2);
    if (lx0 && ly0) {
        r.morse_degenerate = lxy0 && (lxx0 || lyy0);
        if (r.morse_degenerate) r.note = "j^2 lambda is more degenerate than Morse";
        else if (lxy0) r.note = "lambda_xy vanishes; Morse only through lambda_xx lambda_yy";
    }
    const bool j2zero = nx0 && ny0 && add("|N_xx|", std::hypot(F1[2], F2[2]), scale) &&
                        add("|N_yy|", std::hypot(G1[2], G2[2]), scale);
    if (j2zero) {
        r.not_finitely_determined = true;
        r.note = "zero 2-jet: lambda = x^2 y^2 Lambda, not finitely determined";
    }
    return r;
}

std::string to_json(const PlanarReport& r, int indent) {
    nlohmann::ordered_json o;
    o["label"] = r.label;
    o["rank"] = r.rank;
    o["null_x_in_sigma"] = r.null_x_in_sigma;
    o["null_y_in_sigma"] = r.null_y_in_sigma;
    o["morse_degenerate"] = r.morse_degenerate;
    o["not_finitely_determined"] = r.not_finitely_determined;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : r.conditions)
        arr.push_back({{"id", c.id}, {"value", c.value}, {"verdict", verdict_name(c.verdict)}});
    o["conditions"] = arr;
    o["note"] = r.note;
    return o.dump(indent);
}

}  // namespace lf
