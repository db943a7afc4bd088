#include "jets.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace lf {

Poly2<double> shift_poly(const Poly2<double>& p, double x0, double y0) {
    const int n = p.degree();
    // binomial expansion of (x0+X)^i (y0+Y)^j
    std::vector<std::vector<double>> binom(n + 1, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i <= n; ++i) {
        binom[i][0] = 1.0;
        for (int k = 1; k <= i; ++k) binom[i][k] = binom[i - 1][k - 1] + (k <= i - 1 ? binom[i - 1][k] : 0.0);
    }
    std::vector<double> px(n + 1, 1.0), py(n + 1, 1.0);
    for (int i = 1; i <= n; ++i) {
        px[i] = px[i - 1] * x0;
        py[i] = py[i - 1] * y0;
    }
    Poly2<double> r(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) {
            const double c = p.at(i, j);
            if (c == 0.0) continue;
            for (int a = 0; a <= i; ++a)
                for (int b = 0; b <= j; ++b) r.at(a, b) += c * binom[i][a] * px[i - a] * binom[j][b] * py[j - b];
        }
    return r;
}

JetEval jet_eval(const BivariateJet<double>& j, double x, double y) {
    constexpr int D = 6;
    const Poly2<double> u = shift_poly(j.u, x, y).truncated(D);
    const Poly2<double> v = shift_poly(j.v, x, y).truncated(D);
    const Poly2<double> w = u.mul(u, D) + v.mul(v, D);
    const double w0 = w.at(0, 0);
    Poly2<double> q = w;
    q.at(0, 0) = 0.0;
    q = q.scaled(1.0 / (1.0 + w0));
    // (1+q)^{-1/2} as a binomial series; q has no constant term so D+1 terms suffice.
    Poly2<double> delta = Poly2<double>::constant(D, 1.0);
    Poly2<double> qk = Poly2<double>::constant(D, 1.0);
    double coef = 1.0;
    for (int k = 1; k <= D; ++k) {
        coef *= (-0.5 - (k - 1)) / k;
        qk = qk.mul(q, D);
        delta = delta + qk.scaled(coef);
    }
    delta = delta.scaled(1.0 / std::sqrt(1.0 + w0));
    const Poly2<double> n1 = delta.mul(u, D), n2 = delta.mul(v, D);
    JetEval out;
    double fact[4] = {1, 1, 2, 6};
    for (int p = 0; p <= 3; ++p)
        for (int r = 0; r <= 3; ++r) {
            const double f = fact[p] * fact[r];
            out.d[p][r] = Vec3(n1.get(p, r), n2.get(p, r), delta.get(p, r)) * f;
        }
    out.N = out.d[0][0];
    return out;
}

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw Error(Status::InvalidArgument, "empty number");
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const Rational num = parse_rational(s.substr(0, slash));
        const Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw Error(Status::InvalidArgument, "zero denominator in '" + text + "'");
        return num / den;
    }
    size_t pos = 0;
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
    boost::multiprecision::cpp_int mant = 0;
    int scale = 0;
    bool digits = false, dot = false;
    for (; pos < s.size(); ++pos) {
        const char ch = s[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            mant = mant * 10 + (ch - '0');
            if (dot) ++scale;
            digits = true;
        } else if (ch == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    if (!digits) throw Error(Status::InvalidArgument, "not a number: '" + text + "'");
    int exp10 = 0;
    if (pos < s.size()) {
        if (s[pos] != 'e' && s[pos] != 'E') throw Error(Status::InvalidArgument, "not a number: '" + text + "'");
        try {
            size_t used = 0;
            exp10 = std::stoi(s.substr(pos + 1), &used);
            if (pos + 1 + used != s.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw Error(Status::InvalidArgument, "bad exponent in '" + text + "'");
        }
    }
    exp10 -= scale;
    Rational q(mant);
    boost::multiprecision::cpp_int p10 = 1;
    for (int k = 0; k < std::abs(exp10); ++k) p10 *= 10;
    q = exp10 >= 0 ? q * Rational(p10) : q / Rational(p10);
    return neg ? Rational(-q) : q;
}

JetCoeffs<Rational> parse_jet(const std::string& text) {
    std::vector<std::vector<Rational>> groups;
    std::stringstream ss(text);
    std::string group;
    while (std::getline(ss, group, ';')) {
        std::vector<Rational> vals;
        std::stringstream gs(group);
        std::string item;
        while (std::getline(gs, item, ',')) vals.push_back(parse_rational(item));
        groups.push_back(vals);
    }
    if (groups.size() != 4)
        throw Error(Status::InvalidArgument, "jet needs four ';'-separated groups (a_i0; a_ii; b_i0; b_ii)");
    const size_t n = groups[0].size();
    for (const auto& g : groups)
        if (g.size() != n || n == 0) throw Error(Status::InvalidArgument, "jet groups must have equal nonzero length");
    if (n > static_cast<size_t>(kJetOrderCap))
        throw Error(Status::InvalidArgument, "jet order exceeds the cap of " + std::to_string(kJetOrderCap));
    JetCoeffs<Rational> c(static_cast<int>(n));
    c.a0 = groups[0];
    c.a1 = groups[1];
    c.b0 = groups[2];
    c.b1 = groups[3];
    return c;
}

std::string format_rational(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

}  // namespace lf
