#include <json.hpp>

#include "classify.hpp"

namespace lf {

const char* label_name(Label l) {
    switch (l) {
        case Label::Regular: return "Regular";
        case Label::CuspidalEdge: return "CuspidalEdge";
        case Label::Swallowtail: return "Swallowtail";
        case Label::CuspidalButterfly: return "CuspidalButterfly";
        case Label::CuspidalLips: return "CuspidalLips";
        case Label::CuspidalBeaks: return "CuspidalBeaks";
        case Label::TwoFiveCuspidalEdge: return "TwoFiveCuspidalEdge";
        case Label::Shcherbak: return "Shcherbak";
        case Label::Rank0: return "Rank0";
        case Label::Unresolved: return "Unresolved";
    }
    return "Unresolved";
}

const char* method_name(Method m) {
    switch (m) {
        case Method::Jet: return "jet";
        case Method::Abc: return "abc";
        case Method::Grid: return "grid";
    }
    return "jet";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Zero: return "zero";
        case Verdict::NonZero: return "nonzero";
        case Verdict::Positive: return "positive";
        case Verdict::Negative: return "negative";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

const Condition* SingularityReport::find(const std::string& id) const {
    for (const auto& c : conditions)
        if (c.id == id) return &c;
    return nullptr;
}

namespace {

nlohmann::ordered_json conditions_json(const std::vector<Condition>& cs) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : cs) {
        nlohmann::ordered_json o;
        o["id"] = c.id;
        if (std::isfinite(c.value))
            o["value"] = c.value;
        else
            o["value"] = nullptr;
        o["verdict"] = verdict_name(c.verdict);
        arr.push_back(o);
    }
    return arr;
}

}  // namespace

namespace {

nlohmann::ordered_json report_json(const SingularityReport& r) {
    nlohmann::ordered_json o;
    o["label"] = label_name(r.label);
    o["method"] = method_name(r.method);
    if (r.codimension)
        o["codimension"] = *r.codimension;
    else
        o["codimension"] = nullptr;
    o["conditions"] = conditions_json(r.conditions);
    o["note"] = r.note;
    if (r.method != Method::Jet) {
        o["x"] = r.x;
        if (r.method == Method::Grid) o["y"] = r.y;
    }
    return o;
}

}  // namespace

std::string to_json(const SingularityReport& r, int indent) { return report_json(r).dump(indent); }

std::string to_json(const Detection& d, int indent) {
    nlohmann::ordered_json o;
    o["identically_singular"] = d.identically_singular;
    o["contours"] = d.contours;
    o["closed_contours"] = d.closed_contours;
    o["swallowtails"] = d.swallowtails;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : d.points) arr.push_back(report_json(p));
    o["points"] = arr;
    return o.dump(indent);
}

std::string to_json(const FamilyReport& r, int indent) {
    nlohmann::ordered_json o;
    o["stratum"] = label_name(r.stratum);
    o["conditions"] = conditions_json(r.conditions);
    o["double_point_side"] = r.double_point_side;
    o["note"] = r.note;
    return o.dump(indent);
}

std::string to_json(const GaussMapReport& r, int indent) {
    nlohmann::ordered_json o;
    o["label"] = r.label;
    o["method"] = "jet";
    o["conditions"] = conditions_json(r.conditions);
    o["series_index"] = r.series_index;
    o["note"] = r.note;
    return o.dump(indent);
}

}  // namespace lf
