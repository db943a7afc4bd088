#include "loopfront/loopfront.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "builder.hpp"
#include "cauchy.hpp"
#include "classify.hpp"
#include "errors.hpp"
#include "jets.hpp"
#include "planar.hpp"
#include "verify.hpp"

#ifndef LOOPFRONT_VERSION
#define LOOPFRONT_VERSION "0.0.0"
#endif

static_assert(static_cast<int>(lf::Status::FocalDistance) == LF_FOCAL_DISTANCE, "status codes out of sync");
static_assert(static_cast<int>(lf::Status::Overflow) == LF_OVERFLOW, "status codes out of sync");

struct lf_source {
    enum class Kind { Jet, Abc, Samples } kind = Kind::Abc;
    lf::JetCoeffs<lf::Rational> jet;
    lf::PotentialPair potential;
};

struct lf_surface {
    lf::SurfaceData data;
};

namespace {

thread_local std::string g_last_error;

lf_status fail(lf_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

// Runs body, mapping exceptions to status codes.
template <class F>
lf_status guarded(F&& body) {
    try {
        g_last_error.clear();
        body();
        return LF_OK;
    } catch (const lf::Error& e) {
        return fail(static_cast<lf_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(LF_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(LF_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void require(bool cond, const char* what) {
    if (!cond) throw lf::Error(lf::Status::InvalidArgument, what);
}

lf::UniFunc poly(const double* c, int n, double fallback) {
    if (!c || n <= 0) return lf::UniFunc::constant(fallback);
    return lf::UniFunc::polynomial(std::vector<double>(c, c + n));
}

lf::Grid to_grid(const lf_grid& g) {
    lf::Grid out;
    out.x_min = g.x_min;
    out.x_max = g.x_max;
    out.y_min = g.y_min;
    out.y_max = g.y_max;
    out.nx = g.nx;
    out.ny = g.ny;
    out.validate();
    return out;
}

}  // namespace

extern "C" {

const char* lf_version(void) { return LOOPFRONT_VERSION; }

const char* lf_status_name(lf_status s) {
    if (s == LF_INTERNAL) return "Internal";
    if (s < LF_OK || s > LF_FOCAL_DISTANCE) return "Unknown";
    return lf::status_name(static_cast<lf::Status>(s));
}

const char* lf_last_error(void) { return g_last_error.c_str(); }

void lf_string_free(char* s) { std::free(s); }

lf_status lf_source_from_jet(const char* jet, double t_min, double t_max, lf_source** out) {
    return guarded([&] {
        require(jet && out, "null argument");
        auto src = std::make_unique<lf_source>();
        src->kind = lf_source::Kind::Jet;
        src->jet = lf::parse_jet(jet);
        src->potential = lf::jet_to_potential(lf::expand_jet(src->jet.cast<double>()), t_min, t_max);
        *out = src.release();
    });
}

lf_status lf_source_from_abc(const double* a, int na, const double* b, int nb, const double* c, int nc,
                             const double* A, int nA, double t_min, double t_max, double t0, lf_source** out) {
    return guarded([&] {
        require(out && a && b && c && na > 0 && nb > 0 && nc > 0, "a, b and c need at least one coefficient");
        lf::AbcData d;
        d.a = poly(a, na, 0.0);
        d.b = poly(b, nb, 0.0);
        d.c = poly(c, nc, 0.0);
        d.A = poly(A, nA, 1.0);
        d.t_min = t_min;
        d.t_max = t_max;
        d.t0 = t0;
        auto src = std::make_unique<lf_source>();
        src->kind = lf_source::Kind::Abc;
        src->potential = lf::abc_to_potential(d);
        *out = src.release();
    });
}

lf_status lf_source_from_samples(const double* t, const double* N0, const double* V, int n, double t0,
                                 lf_source** out) {
    return guarded([&] {
        require(out && t && N0 && V && n > 0, "null argument");
        std::vector<double> ts(t, t + n);
        std::vector<lf::Vec3> ns(n), vs(n);
        for (int i = 0; i < n; ++i) {
            ns[i] = lf::Vec3(N0[3 * i], N0[3 * i + 1], N0[3 * i + 2]);
            vs[i] = lf::Vec3(V[3 * i], V[3 * i + 1], V[3 * i + 2]);
        }
        auto src = std::make_unique<lf_source>();
        src->kind = lf_source::Kind::Samples;
        src->potential = lf::geometric_to_potential(lf::geometric_from_samples(ts, ns, vs, t0));
        *out = src.release();
    });
}

void lf_source_free(lf_source* s) { delete s; }

lf_status lf_source_abc_at(const lf_source* s, double t, double out[4]) {
    return guarded([&] {
        require(s && out, "null argument");
        const auto v = s->potential.abc.eval(t);
        for (int i = 0; i < 4; ++i) out[i] = v[i];
    });
}

lf_status lf_source_classify(const lf_source* s, char** json) {
    return guarded([&] {
        require(s && json, "null argument");
        const lf::SingularityReport r = s->kind == lf_source::Kind::Jet
                                            ? lf::classify_jet(s->jet)
                                            : lf::classify_abc(s->potential.abc, s->potential.abc.t0);
        *json = dup_string(lf::to_json(r));
    });
}

void lf_build_options_default(lf_build_options* o) {
    if (!o) return;
    const lf::BuildOptions d;
    o->M = d.M;
    o->circle_samples = d.circle_samples;
    o->rk4_steps_per_unit = d.rk4_steps_per_unit;
    o->threads = d.threads;
}

lf_status lf_build(const lf_source* s, const lf_grid* g, const lf_build_options* o, lf_surface** out) {
    return guarded([&] {
        require(s && g && out, "null argument");
        lf::BuildOptions opts;
        if (o) {
            opts.M = o->M;
            opts.circle_samples = o->circle_samples;
            opts.rk4_steps_per_unit = o->rk4_steps_per_unit;
            opts.threads = o->threads;
        }
        auto surf = std::make_unique<lf_surface>();
        surf->data = lf::dalembert_solve(s->potential, to_grid(*g), opts);
        *out = surf.release();
    });
}

void lf_surface_free(lf_surface* s) { delete s; }

lf_status lf_surface_grid(const lf_surface* s, lf_grid* out) {
    return guarded([&] {
        require(s && out, "null argument");
        const lf::Grid& g = s->data.grid;
        *out = lf_grid{g.x_min, g.x_max, g.y_min, g.y_max, g.nx, g.ny};
    });
}

double lf_surface_max_tail(const lf_surface* s) { return s ? s->data.max_tail : 0.0; }

int lf_surface_outside_count(const lf_surface* s) { return s ? s->data.outside_count : 0; }

lf_status lf_surface_field(const lf_surface* s, lf_field which, double* out, size_t count) {
    return guarded([&] {
        require(s && out, "null argument");
        const lf::SurfaceData& d = s->data;
        const size_t n = static_cast<size_t>(d.grid.size());
        auto vec = [&](const std::vector<lf::Vec3>& v) {
            require(count == 3 * n, "count must be 3 * nx * ny");
            for (size_t k = 0; k < n; ++k)
                for (int c = 0; c < 3; ++c) out[3 * k + c] = v[k][c];
        };
        auto scal = [&](const std::vector<double>& v) {
            require(count == n, "count must be nx * ny");
            std::copy(v.begin(), v.end(), out);
        };
        switch (which) {
            case LF_FIELD_F: vec(d.f); break;
            case LF_FIELD_N: vec(d.N); break;
            case LF_FIELD_SIGMA: scal(d.sigma); break;
            case LF_FIELD_SIGMA_FRAME: scal(d.sigma_frame); break;
            case LF_FIELD_A_SMALL: scal(d.a); break;
            case LF_FIELD_B: scal(d.b); break;
            case LF_FIELD_C: scal(d.c); break;
            case LF_FIELD_A: scal(d.A); break;
            case LF_FIELD_TAIL: scal(d.tail); break;
            case LF_FIELD_STATUS:
                require(count == n, "count must be nx * ny");
                for (size_t k = 0; k < n; ++k) out[k] = static_cast<double>(d.status[k]);
                break;
            default: require(false, "unknown field");
        }
    });
}

lf_status lf_surface_export_mesh(const lf_surface* s, const char* path, lf_mesh_format format) {
    return guarded([&] {
        require(s && path, "null argument");
        lf::MeshFormat f = lf::MeshFormat::Obj;
        if (format == LF_MESH_PLY_ASCII) f = lf::MeshFormat::PlyAscii;
        else if (format == LF_MESH_PLY_BINARY) f = lf::MeshFormat::PlyBinary;
        else require(format == LF_MESH_OBJ, "unknown mesh format");
        lf::export_mesh(s->data, path, f);
    });
}

lf_status lf_surface_export_contours(const lf_surface* s, const char* path) {
    return guarded([&] {
        require(s && path, "null argument");
        lf::export_contours(lf::singular_contour(s->data), path);
    });
}

lf_status lf_surface_export_sigma(const lf_surface* s, const char* path) {
    return guarded([&] {
        require(s && path, "null argument");
        lf::export_sigma(s->data, path);
    });
}

lf_status lf_surface_detect(const lf_surface* s, char** json) {
    return guarded([&] {
        require(s && json, "null argument");
        *json = dup_string(lf::to_json(lf::detect_singularities(s->data)));
    });
}

lf_status lf_surface_classify_point(const lf_surface* s, double x, double y, char** json) {
    return guarded([&] {
        require(s && json, "null argument");
        *json = dup_string(lf::to_json(lf::classify_grid(s->data, x, y)));
    });
}

lf_status lf_verify(const lf_surface* surf, const lf_source* src, char** json, int* all_pass) {
    return guarded([&] {
        require(surf && src && json, "null argument");
        const lf::VerifyReport r = lf::verify_surface(surf->data, src->potential);
        if (all_pass) *all_pass = r.pass() ? 1 : 0;
        *json = dup_string(lf::to_json(r));
    });
}

lf_status lf_classify_jet(const char* jet, char** json) {
    return guarded([&] {
        require(jet && json, "null argument");
        *json = dup_string(lf::to_json(lf::classify_jet(lf::parse_jet(jet))));
    });
}

lf_status lf_classify_gauss_jet(const char* jet, char** json) {
    return guarded([&] {
        require(jet && json, "null argument");
        *json = dup_string(lf::to_json(lf::classify_gauss_map_jet(lf::parse_jet(jet))));
    });
}

lf_status lf_family_genericity(const char* jet, const char* usx, const char* usy, const char* vsx, const char* vsy,
                               char** json) {
    return guarded([&] {
        require(jet && usx && usy && vsx && vsy && json, "null argument");
        lf::FamilyJet fj;
        fj.base = lf::parse_jet(jet);
        fj.usx = lf::parse_rational(usx);
        fj.usy = lf::parse_rational(usy);
        fj.vsx = lf::parse_rational(vsx);
        fj.vsy = lf::parse_rational(vsy);
        *json = dup_string(lf::to_json(lf::family_genericity(fj)));
    });
}

lf_status lf_planar_stratum(const double* f1, int n1, const double* f2, int n2, const double* g1, int m1,
                            const double* g2, int m2, double x, double y, char** json) {
    return guarded([&] {
        require(json, "null argument");
        lf::PlanarWaveMap m{poly(f1, n1, 0.0), poly(f2, n2, 0.0), poly(g1, m1, 0.0), poly(g2, m2, 0.0)};
        *json = dup_string(lf::to_json(lf::planar_stratum(m, x, y)));
    });
}

}  // extern "C"
