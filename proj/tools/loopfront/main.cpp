// loopfront command-line front end; talks to the library only through the C API.
#include <loopfront/loopfront.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <toml.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kDegenerate = 3, kOutside = 4, kVerifyFailed = 5 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LibError : std::runtime_error {
    lf_status status;
    LibError(lf_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(lf_status s, const char* what) {
    if (s != LF_OK)
        throw LibError(s, std::string(what) + ": " + lf_status_name(s) + ": " + lf_last_error());
}

std::string take(char* p) {
    std::string s = p ? p : "";
    lf_string_free(p);
    return s;
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
};
using Source = Handle<lf_source, lf_source_free>;
using Surface = Handle<lf_surface, lf_surface_free>;

// ---- configuration ----

struct Config {
    fs::path dir;  // directory of the config file
    std::string jet;
    std::vector<double> a, b, c, A;
    std::string samples;
    std::optional<std::array<double, 2>> t_range;
    double t0 = 0.0;
    lf_grid grid{-1.0, 1.0, -1.0, 1.0, 101, 101};
    lf_build_options numerics{};
    fs::path out_dir = ".";
    std::string name = "surface";
    std::string mesh = "obj";
    std::string family_coefficient;
    std::string family_label = "parameter";
    std::vector<double> family_values;
    bool has_family = false;
    bool is_jet() const { return !jet.empty(); }
    bool is_abc() const { return !a.empty(); }
};

void allow_keys(const toml::table& t, const std::string& section, const std::set<std::string>& keys) {
    for (const auto& [k, v] : t) {
        (void)v;
        if (!keys.count(std::string(k.str()))) {
            const std::string where = section.empty() ? std::string(k.str()) : section + "." + std::string(k.str());
            throw ConfigError("unknown key '" + where + "'");
        }
    }
}

const toml::table* section(const toml::table& root, const char* name, bool required) {
    const toml::node* n = root.get(name);
    if (!n) {
        if (required) throw ConfigError(std::string("missing section [") + name + "]");
        return nullptr;
    }
    if (!n->is_table()) throw ConfigError(std::string("'") + name + "' must be a table");
    return n->as_table();
}

double number(const toml::node& n, const std::string& key) {
    if (auto v = n.value<double>()) return *v;
    throw ConfigError("'" + key + "' must be a number");
}

int integer(const toml::table& t, const char* k, const std::string& sec, int fallback) {
    const toml::node* n = t.get(k);
    if (!n) return fallback;
    if (!n->is_integer()) throw ConfigError("'" + sec + "." + k + "' must be an integer");
    return static_cast<int>(n->as_integer()->get());
}

std::vector<double> numbers(const toml::node& n, const std::string& key) {
    const toml::array* arr = n.as_array();
    if (!arr) throw ConfigError("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : *arr) out.push_back(number(e, key));
    return out;
}

std::array<double, 2> range(const toml::node& n, const std::string& key) {
    const auto v = numbers(n, key);
    if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError("'" + key + "' must be [min, max] with min < max");
    return {v[0], v[1]};
}

std::string text(const toml::node& n, const std::string& key) {
    if (auto v = n.value<std::string>()) return *v;
    throw ConfigError("'" + key + "' must be a string");
}

Config load_config(const std::string& path) {
    toml::table root;
    try {
        root = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << e.description() << " at line " << e.source().begin.line;
        throw ConfigError(os.str());
    }
    Config c;
    c.dir = fs::path(path).parent_path();
    lf_build_options_default(&c.numerics);
    allow_keys(root, "", {"cauchy", "grid", "numerics", "output", "family"});

    const toml::table& ca = *section(root, "cauchy", true);
    allow_keys(ca, "cauchy", {"jet", "a", "b", "c", "A", "samples", "t_range", "t0"});
    int sources = 0;
    if (const auto* n = ca.get("jet")) {
        c.jet = text(*n, "cauchy.jet");
        ++sources;
    }
    if (ca.get("a") || ca.get("b") || ca.get("c")) {
        for (const char* k : {"a", "b", "c"})
            if (!ca.get(k)) throw ConfigError(std::string("missing key 'cauchy.") + k + "' (a, b and c go together)");
        c.a = numbers(*ca.get("a"), "cauchy.a");
        c.b = numbers(*ca.get("b"), "cauchy.b");
        c.c = numbers(*ca.get("c"), "cauchy.c");
        if (const auto* n = ca.get("A")) c.A = numbers(*n, "cauchy.A");
        for (const auto* v : {&c.a, &c.b, &c.c})
            if (v->empty()) throw ConfigError("'cauchy.a', 'cauchy.b' and 'cauchy.c' need at least one coefficient");
        ++sources;
    } else if (ca.get("A")) {
        throw ConfigError("'cauchy.A' needs 'cauchy.a', 'cauchy.b' and 'cauchy.c'");
    }
    if (const auto* n = ca.get("samples")) {
        c.samples = text(*n, "cauchy.samples");
        ++sources;
    }
    if (sources != 1) throw ConfigError("[cauchy] needs exactly one of 'jet', 'a'/'b'/'c' or 'samples'");
    if (const auto* n = ca.get("t_range")) c.t_range = range(*n, "cauchy.t_range");
    if (const auto* n = ca.get("t0")) c.t0 = number(*n, "cauchy.t0");

    if (const toml::table* g = section(root, "grid", false)) {
        allow_keys(*g, "grid", {"x", "y", "n", "nx", "ny"});
        if (const auto* n = g->get("x")) {
            const auto r = range(*n, "grid.x");
            c.grid.x_min = r[0];
            c.grid.x_max = r[1];
        }
        if (const auto* n = g->get("y")) {
            const auto r = range(*n, "grid.y");
            c.grid.y_min = r[0];
            c.grid.y_max = r[1];
        }
        const int n = integer(*g, "n", "grid", 101);
        c.grid.nx = integer(*g, "nx", "grid", n);
        c.grid.ny = integer(*g, "ny", "grid", n);
        if (c.grid.nx < 2 || c.grid.ny < 2) throw ConfigError("'grid.n' (or nx, ny) must be at least 2");
    }
    if (const toml::table* nu = section(root, "numerics", false)) {
        allow_keys(*nu, "numerics", {"M", "circle_samples", "rk4_steps_per_unit", "threads"});
        c.numerics.M = integer(*nu, "M", "numerics", c.numerics.M);
        c.numerics.circle_samples = integer(*nu, "circle_samples", "numerics", c.numerics.circle_samples);
        c.numerics.rk4_steps_per_unit = integer(*nu, "rk4_steps_per_unit", "numerics", c.numerics.rk4_steps_per_unit);
        c.numerics.threads = integer(*nu, "threads", "numerics", c.numerics.threads);
    }
    if (const toml::table* o = section(root, "output", false)) {
        allow_keys(*o, "output", {"dir", "name", "mesh"});
        if (const auto* n = o->get("dir")) c.out_dir = text(*n, "output.dir");
        if (const auto* n = o->get("name")) c.name = text(*n, "output.name");
        if (const auto* n = o->get("mesh")) c.mesh = text(*n, "output.mesh");
        if (c.mesh != "obj" && c.mesh != "ply" && c.mesh != "ply-binary" && c.mesh != "none")
            throw ConfigError("'output.mesh' must be one of obj, ply, ply-binary, none");
    }
    if (c.out_dir.is_relative()) c.out_dir = c.dir / c.out_dir;
    if (const toml::table* f = section(root, "family", false)) {
        allow_keys(*f, "family", {"coefficient", "values", "label"});
        if (!f->get("coefficient")) throw ConfigError("missing key 'family.coefficient'");
        if (!f->get("values")) throw ConfigError("missing key 'family.values'");
        c.family_coefficient = text(*f->get("coefficient"), "family.coefficient");
        c.family_values = numbers(*f->get("values"), "family.values");
        if (const auto* n = f->get("label")) c.family_label = text(*n, "family.label");
        c.has_family = true;
    }
    return c;
}

// ---- sources ----

void read_samples(const fs::path& path, std::vector<double>& t, std::vector<double>& N0, std::vector<double>& V) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open 'cauchy.samples' file " + path.string());
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                size_t used = 0;
                v.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (t.empty()) continue;  // header
            throw ConfigError("'cauchy.samples' row " + std::to_string(row) + " is not numeric");
        }
        if (v.size() != 7) throw ConfigError("'cauchy.samples' row " + std::to_string(row) + " needs 7 columns");
        t.push_back(v[0]);
        N0.insert(N0.end(), v.begin() + 1, v.begin() + 4);
        V.insert(V.end(), v.begin() + 4, v.end());
    }
}

std::array<double, 2> t_range(const Config& c) {
    if (c.t_range) return *c.t_range;
    return {std::min(c.grid.x_min, c.grid.y_min), std::max(c.grid.x_max, c.grid.y_max)};
}

void make_source(const Config& c, Source& src) {
    const auto tr = t_range(c);
    if (c.is_jet()) {
        check(lf_source_from_jet(c.jet.c_str(), tr[0], tr[1], &src.p), "jet source");
    } else if (c.is_abc()) {
        check(lf_source_from_abc(c.a.data(), static_cast<int>(c.a.size()), c.b.data(), static_cast<int>(c.b.size()),
                                 c.c.data(), static_cast<int>(c.c.size()), c.A.empty() ? nullptr : c.A.data(),
                                 static_cast<int>(c.A.size()), tr[0], tr[1], c.t0, &src.p),
              "abc source");
    } else {
        std::vector<double> t, N0, V;
        read_samples(c.dir / c.samples, t, N0, V);
        check(lf_source_from_samples(t.data(), N0.data(), V.data(), static_cast<int>(t.size()), c.t0, &src.p),
              "sample source");
    }
}

// ---- outputs ----

std::string mesh_extension(const std::string& mesh) { return mesh == "obj" ? ".obj" : ".ply"; }

lf_mesh_format mesh_format(const std::string& mesh) {
    if (mesh == "ply") return LF_MESH_PLY_ASCII;
    if (mesh == "ply-binary") return LF_MESH_PLY_BINARY;
    return LF_MESH_OBJ;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream out(p);
    out << s << "\n";
    if (!out) throw LibError(LF_IO, "cannot write " + p.string());
}

// Builds the surface and writes its files; returns the classification report.
json build_and_export(const Config& c, const Source& src, const std::string& stem, Surface& surf) {
    check(lf_build(src.p, &c.grid, &c.numerics, &surf.p), "build");
    fs::create_directories(c.out_dir);
    const fs::path base = c.out_dir / stem;
    if (c.mesh != "none")
        check(lf_surface_export_mesh(surf.p, (base.string() + mesh_extension(c.mesh)).c_str(), mesh_format(c.mesh)),
              "mesh export");
    check(lf_surface_export_sigma(surf.p, (base.string() + "_sigma.csv").c_str()), "sigma export");
    check(lf_surface_export_contours(surf.p, (base.string() + "_contours.csv").c_str()), "contour export");

    char* out = nullptr;
    check(lf_source_classify(src.p, &out), "classification");
    const json primary = json::parse(take(out));
    check(lf_surface_detect(surf.p, &out), "detection");
    const json detection = json::parse(take(out));
    const double bx = c.t0, by = c.t0;
    json grid;
    const lf_status gs = lf_surface_classify_point(surf.p, bx, by, &out);
    if (gs == LF_OK) {
        grid = json::parse(take(out));
    } else if (gs == LF_NOT_SINGULAR) {
        grid = {{"label", "Regular"}, {"method", "grid"}, {"note", lf_last_error()}};
    } else {
        check(gs, "grid classification");
    }

    json report;
    report["label"] = primary["label"];
    report["note"] = primary["note"];
    if (detection["identically_singular"].get<bool>()) {
        report["label"] = "Unresolved";
        report["note"] = "identically singular";
    }
    report["base_point"] = {bx, by};
    report["classification"] = primary;
    report["grid"] = grid;
    report["detection"] = detection;
    report["max_tail"] = lf_surface_max_tail(surf.p);
    report["outside_big_cell"] = lf_surface_outside_count(surf.p);
    write_text(base.string() + "_report.json", report.dump(2));
    return report;
}

int exit_for(lf_status s) {
    switch (s) {
        case LF_DEGENERATE_DATA:
        case LF_ZERO_TRANSVERSE_DERIVATIVE: return kDegenerate;
        case LF_OUTSIDE_BIG_CELL: return kOutside;
        default: return kFailure;
    }
}

// ---- commands ----

std::string g_out_override;

Config load(const std::string& cfg) {
    Config c = load_config(cfg);
    if (!g_out_override.empty()) c.out_dir = g_out_override;
    return c;
}

int cmd_build(const std::string& cfg) {
    const Config c = load(cfg);
    Source src;
    make_source(c, src);
    Surface surf;
    const json report = build_and_export(c, src, c.name, surf);
    std::cout << report.dump(2) << "\n";
    return kOk;
}

// "a0" -> (vector of a, power 0)
std::vector<double>* family_target(Config& c, size_t& power) {
    const std::string& k = c.family_coefficient;
    if (k.size() < 2) throw ConfigError("'family.coefficient' must look like a0, b1, c2 or A0");
    std::vector<double>* v = nullptr;
    switch (k[0]) {
        case 'a': v = &c.a; break;
        case 'b': v = &c.b; break;
        case 'c': v = &c.c; break;
        case 'A': v = &c.A; break;
        default: throw ConfigError("'family.coefficient' must start with a, b, c or A");
    }
    try {
        size_t used = 0;
        const int p = std::stoi(k.substr(1), &used);
        if (used != k.size() - 1 || p < 0) throw std::invalid_argument("power");
        power = static_cast<size_t>(p);
    } catch (const std::exception&) {
        throw ConfigError("'family.coefficient' has a bad power: " + k);
    }
    if (v == &c.A && v->empty()) v->push_back(1.0);
    if (v->size() <= power) v->resize(power + 1, 0.0);
    return v;
}

// Shortest representation that round-trips.
std::string csv_value(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

int cmd_family(const std::string& cfg) {
    Config c = load(cfg);
    if (!c.has_family) throw ConfigError("missing section [family]");
    if (!c.is_abc()) throw ConfigError("[family] sweeps need an a/b/c source");
    size_t power = 0;
    std::vector<double>* target = family_target(c, power);
    fs::create_directories(c.out_dir);
    const fs::path events = c.out_dir / (c.name + "_events.csv");
    std::ofstream ev(events);
    if (!ev) throw LibError(LF_IO, "cannot write " + events.string());
    ev << "index," << c.family_label << ",status,base_label,labels,swallowtails,contours,closed_contours\n";
    json summary = json::array();
    for (size_t i = 0; i < c.family_values.size(); ++i) {
        const double value = c.family_values[i];
        (*target)[power] = value;
        const std::string stem = c.name + "_" + std::to_string(i);
        std::string status = "Ok", base_label, labels;
        int swallowtails = 0, contours = 0, closed = 0;
        try {
            Source src;
            make_source(c, src);
            Surface surf;
            const json r = build_and_export(c, src, stem, surf);
            const json& d = r["detection"];
            base_label = r["label"].get<std::string>();
            for (const auto& p : d["points"]) {
                if (!labels.empty()) labels += ";";
                labels += p["label"].get<std::string>();
            }
            swallowtails = d["swallowtails"].get<int>();
            contours = d["contours"].get<int>();
            closed = d["closed_contours"].get<int>();
            summary.push_back({{"index", i}, {"value", value}, {"label", r["label"]}, {"detection", d}});
        } catch (const LibError& e) {
            status = lf_status_name(e.status);
            std::cerr << "value " << csv_value(value) << ": " << e.what() << "\n";
            summary.push_back({{"index", i}, {"value", value}, {"error", e.what()}});
        }
        ev << i << "," << csv_value(value) << "," << status << "," << base_label << "," << labels << "," << swallowtails << "," << contours
           << "," << closed << "\n";
    }
    std::cout << summary.dump(2) << "\n";
    return kOk;
}

int cmd_verify(const std::string& cfg) {
    const Config c = load(cfg);
    Source src;
    make_source(c, src);
    Surface surf;
    check(lf_build(src.p, &c.grid, &c.numerics, &surf.p), "build");
    char* out = nullptr;
    int pass = 0;
    check(lf_verify(surf.p, src.p, &out, &pass), "verify");
    const json report = json::parse(take(out));
    fs::create_directories(c.out_dir);
    write_text(c.out_dir / (c.name + "_verify.json"), report.dump(2));
    std::cout << report.dump(2) << "\n";
    return pass ? kOk : kVerifyFailed;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            v.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "expected comma-separated numbers");
        }
    }
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudospherical fronts from loop-group potentials"};
    app.set_version_flag("--version", std::string(lf_version()));
    app.require_subcommand(1);

    std::string cfg;
    auto* build = app.add_subcommand("build", "Build a surface from a config and classify its base point");
    build->add_option("-c,--config", cfg, "TOML config")->required()->check(CLI::ExistingFile);
    build->add_option("-o,--out", g_out_override, "output directory (overrides output.dir)");
    auto* family = app.add_subcommand("family", "Sweep a coefficient and report singularities per value");
    family->add_option("-c,--config", cfg, "TOML config")->required()->check(CLI::ExistingFile);
    family->add_option("-o,--out", g_out_override, "output directory (overrides output.dir)");
    auto* verify = app.add_subcommand("verify", "Run the invariant checks on a built surface");
    verify->add_option("-c,--config", cfg, "TOML config")->required()->check(CLI::ExistingFile);
    verify->add_option("-o,--out", g_out_override, "output directory (overrides output.dir)");

    auto* classify = app.add_subcommand("classify", "Classify a jet, a/b/c data or a planar wave map");
    std::string jet, s_derivs, abc_a, abc_b, abc_c, abc_A, planar;
    double t0 = 0.0;
    std::vector<double> at{0.0, 0.0};
    bool gauss = false;
    auto* o_jet = classify->add_option("--jet", jet, "jet 'a_i0; a_ii; b_i0; b_ii' (groups of equal length)");
    classify->add_flag("--gauss", gauss, "classify the Gauss map N instead of the front")->needs(o_jet);
    classify->add_option("--family", s_derivs, "s-derivatives 'usx,usy,vsx,vsy' for the family test")->needs(o_jet);
    auto* o_a = classify->add_option("--a", abc_a, "coefficients of a(t), ascending");
    auto* o_b = classify->add_option("--b", abc_b, "coefficients of b(t), ascending");
    auto* o_c = classify->add_option("--c", abc_c, "coefficients of c(t), ascending");
    classify->add_option("--A", abc_A, "coefficients of A(t), ascending (default 1)");
    classify->add_option("--t0", t0, "parameter value for a/b/c data");
    auto* o_planar = classify->add_option("--planar", planar, "planar map 'f1; f2; g1; g2' as coefficient lists");
    classify->add_option("--at", at, "point (x y) for --planar")->expected(2);
    o_a->needs(o_b, o_c);
    o_jet->excludes(o_a, o_planar);
    o_a->excludes(o_planar);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*build) return cmd_build(cfg);
        if (*family) return cmd_family(cfg);
        if (*verify) return cmd_verify(cfg);
        char* out = nullptr;
        if (!jet.empty()) {
            if (!s_derivs.empty()) {
                std::vector<std::string> parts;
                std::stringstream ss(s_derivs);
                std::string cell;
                while (std::getline(ss, cell, ',')) parts.push_back(cell);
                if (parts.size() != 4) throw CLI::ValidationError("--family", "expected four values");
                check(lf_family_genericity(jet.c_str(), parts[0].c_str(), parts[1].c_str(), parts[2].c_str(),
                                           parts[3].c_str(), &out),
                      "family");
            } else if (gauss) {
                check(lf_classify_gauss_jet(jet.c_str(), &out), "gauss map");
            } else {
                check(lf_classify_jet(jet.c_str(), &out), "jet");
            }
        } else if (!abc_a.empty()) {
            const auto a = parse_list(abc_a, "--a"), b = parse_list(abc_b, "--b"), c = parse_list(abc_c, "--c");
            const auto A = abc_A.empty() ? std::vector<double>{} : parse_list(abc_A, "--A");
            Source src;
            check(lf_source_from_abc(a.data(), static_cast<int>(a.size()), b.data(), static_cast<int>(b.size()),
                                     c.data(), static_cast<int>(c.size()), A.empty() ? nullptr : A.data(),
                                     static_cast<int>(A.size()), t0 - 1.0, t0 + 1.0, t0, &src.p),
                  "abc source");
            check(lf_source_classify(src.p, &out), "abc");
        } else if (!planar.empty()) {
            std::vector<std::vector<double>> parts;
            std::stringstream ss(planar);
            std::string group;
            while (std::getline(ss, group, ';')) parts.push_back(parse_list(group, "--planar"));
            if (parts.size() != 4) throw CLI::ValidationError("--planar", "expected four ';'-separated lists");
            check(lf_planar_stratum(parts[0].data(), static_cast<int>(parts[0].size()), parts[1].data(),
                                    static_cast<int>(parts[1].size()), parts[2].data(),
                                    static_cast<int>(parts[2].size()), parts[3].data(),
                                    static_cast<int>(parts[3].size()), at[0], at[1], &out),
                  "planar");
        } else {
            std::cerr << "classify needs --jet, --a/--b/--c or --planar\n";
            return kConfig;
        }
        std::cout << json::parse(take(out)).dump(2) << "\n";
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kConfig;
    } catch (const LibError& e) {
        std::cerr << "error: " << e.what() << "\n";
        // Malformed classify arguments count as command-line errors.
        if (*classify && e.status == LF_INVALID_ARGUMENT) return kConfig;
        return exit_for(e.status);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}
