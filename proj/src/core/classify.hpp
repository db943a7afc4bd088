#pragma once

#include <optional>
#include <string>
#include <vector>

#include "builder.hpp"
#include "cauchy.hpp"
#include "jets.hpp"

namespace lf {

enum class Label {
    Regular,
    CuspidalEdge,
    Swallowtail,
    CuspidalButterfly,
    CuspidalLips,
    CuspidalBeaks,
    TwoFiveCuspidalEdge,
    Shcherbak,
    Rank0,
    Unresolved
};

enum class Method { Jet, Abc, Grid };

enum class Verdict { Zero, NonZero, Positive, Negative, Indeterminate };

const char* label_name(Label l);
const char* method_name(Method m);
const char* verdict_name(Verdict v);

struct Condition {
    std::string id;
    double value = 0.0;
    Verdict verdict = Verdict::Indeterminate;
};

struct SingularityReport {
    Label label = Label::Unresolved;
    Method method = Method::Jet;
    std::optional<int> codimension;
    std::vector<Condition> conditions;
    std::string note;
    // Location (grid method) or parameter (abc method).
    double x = 0.0, y = 0.0;

    const Condition* find(const std::string& id) const;
};

std::string to_json(const SingularityReport& r, int indent = -1);

// Exact classification of the front at the origin from its jet.
SingularityReport classify_jet(const JetCoeffs<Rational>& c);

SingularityReport classify_abc(const AbcData& d, double t0);

// Grid classification at (or near) a point; throws NotSingular if no point of the
// singular set is found close by.
SingularityReport classify_grid(const SurfaceData& s, double x, double y);

struct Detection {
    std::vector<SingularityReport> points;
    int swallowtails = 0;
    int contours = 0;
    int closed_contours = 0;
    bool identically_singular = false;
};

// Locates swallowtail and Morse candidates on the singular set and classifies them.
Detection detect_singularities(const SurfaceData& s);
std::string to_json(const Detection& d, int indent = -1);

struct MongeTaylorTangent {
    Poly2<Rational> U1, U2, V1, V2;
};

MongeTaylorTangent monge_taylor_tangent(const BivariateJet<Rational>& j);

struct FamilyJet {
    JetCoeffs<Rational> base;
    // d^2 u / ds dx, d^2 u / ds dy, d^2 v / ds dx, d^2 v / ds dy at the origin.
    Rational usx = 0, usy = 0, vsx = 0, vsy = 0;
};

struct FamilyReport {
    Label stratum = Label::Unresolved;
    std::vector<Condition> conditions;
    // Sign of the double-point expression for 2/5 edges (+1, -1, 0).
    int double_point_side = 0;
    std::string note;
};

FamilyReport family_genericity(const FamilyJet& fj);
std::string to_json(const FamilyReport& r, int indent = -1);

struct GaussMapReport {
    std::string label;  // Regular, Fold, CuspSeries, Lips, Beaks, RankZeroI22, Excluded, Deeper
    std::vector<Condition> conditions;
    // For CuspSeries: k with g ~ (x, xy + c y^k + ...), k = 2 + order of eta(lambda) along Sigma.
    int series_index = 0;
    std::string note;
};

GaussMapReport classify_gauss_map_jet(const JetCoeffs<Rational>& c);
std::string to_json(const GaussMapReport& r, int indent = -1);

}  // namespace lf
