#ifndef LOOPFRONT_LOOPFRONT_H
#define LOOPFRONT_LOOPFRONT_H

#include <stddef.h>

#if defined(_WIN32)
#define LF_API __declspec(dllexport)
#else
#define LF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lf_status {
    LF_OK = 0,
    LF_INVALID_ARGUMENT,
    LF_DEGENERATE_DATA,
    LF_OUTSIDE_BIG_CELL,
    LF_NOT_IN_SU2,
    LF_NOT_UNITARY,
    LF_SINGULAR_LOOP,
    LF_ORDER_TOO_LOW,
    LF_WRONG_STRATUM,
    LF_NOT_SINGULAR,
    LF_OVERFLOW,
    LF_IO,
    LF_ZERO_TRANSVERSE_DERIVATIVE,
    LF_NOT_ON_CURVE,
    LF_SINGULAR_POINT,
    LF_FOCAL_DISTANCE,
    LF_INTERNAL = 100
} lf_status;

/* Opaque handles. */
typedef struct lf_source lf_source;   /* Cauchy data and its potential pair */
typedef struct lf_surface lf_surface; /* gridded surface */

typedef struct lf_grid {
    double x_min, x_max, y_min, y_max;
    int nx, ny;
} lf_grid;

typedef struct lf_build_options {
    int M;
    int circle_samples;
    int rk4_steps_per_unit;
    int threads; /* 0: LOOPFRONT_THREADS or hardware concurrency */
} lf_build_options;

typedef enum lf_field {
    LF_FIELD_F = 0,       /* 3 values per node */
    LF_FIELD_N,           /* 3 values per node */
    LF_FIELD_SIGMA,       /* det(f_x, f_y, N) by finite differences */
    LF_FIELD_SIGMA_FRAME, /* -A a from the frame */
    LF_FIELD_A_SMALL,     /* a */
    LF_FIELD_B,           /* b */
    LF_FIELD_C,           /* c */
    LF_FIELD_A,           /* A */
    LF_FIELD_STATUS,      /* 0 ok, 1 outside the big cell */
    LF_FIELD_TAIL         /* truncation tail mass */
} lf_field;

typedef enum lf_mesh_format { LF_MESH_OBJ = 0, LF_MESH_PLY_ASCII, LF_MESH_PLY_BINARY } lf_mesh_format;

LF_API const char* lf_version(void);
LF_API const char* lf_status_name(lf_status s);
/* Message of the last failed call on this thread ("" if none). */
LF_API const char* lf_last_error(void);
/* Frees strings returned through char** out-parameters. */
LF_API void lf_string_free(char* s);

/* Sources. Polynomial coefficients are ascending in t. A may be NULL (A = 1). */
LF_API lf_status lf_source_from_jet(const char* jet, double t_min, double t_max, lf_source** out);
LF_API lf_status lf_source_from_abc(const double* a, int na, const double* b, int nb, const double* c, int nc,
                                    const double* A, int nA, double t_min, double t_max, double t0,
                                    lf_source** out);
/* n uniformly spaced samples; N0 and V are n x 3 row-major. */
LF_API lf_status lf_source_from_samples(const double* t, const double* N0, const double* V, int n, double t0,
                                        lf_source** out);
LF_API void lf_source_free(lf_source* s);
/* (a, b, c, A) at t. */
LF_API lf_status lf_source_abc_at(const lf_source* s, double t, double out[4]);
/* Exact (jet) or a, b, c (abc, samples) classification at the base point, as JSON. */
LF_API lf_status lf_source_classify(const lf_source* s, char** json);

LF_API void lf_build_options_default(lf_build_options* o);
LF_API lf_status lf_build(const lf_source* s, const lf_grid* g, const lf_build_options* o, lf_surface** out);
LF_API void lf_surface_free(lf_surface* s);
LF_API lf_status lf_surface_grid(const lf_surface* s, lf_grid* out);
LF_API double lf_surface_max_tail(const lf_surface* s);
LF_API int lf_surface_outside_count(const lf_surface* s);
/* Copies a field; count must be nx*ny (scalar fields) or 3*nx*ny (vector fields). */
LF_API lf_status lf_surface_field(const lf_surface* s, lf_field which, double* out, size_t count);

LF_API lf_status lf_surface_export_mesh(const lf_surface* s, const char* path, lf_mesh_format format);
LF_API lf_status lf_surface_export_contours(const lf_surface* s, const char* path);
/* CSV: i,j,x,y,sigma,sigma_frame,status */
LF_API lf_status lf_surface_export_sigma(const lf_surface* s, const char* path);

LF_API lf_status lf_surface_detect(const lf_surface* s, char** json);
LF_API lf_status lf_surface_classify_point(const lf_surface* s, double x, double y, char** json);
/* Runs the invariant suite; *all_pass is 1 iff every check passes. */
LF_API lf_status lf_verify(const lf_surface* surf, const lf_source* src, char** json, int* all_pass);

LF_API lf_status lf_classify_jet(const char* jet, char** json);
LF_API lf_status lf_classify_gauss_jet(const char* jet, char** json);
/* s-derivatives u_sx, u_sy, v_sx, v_sy given as rationals or decimals. */
LF_API lf_status lf_family_genericity(const char* jet, const char* usx, const char* usy, const char* vsx,
                                      const char* vsy, char** json);
LF_API lf_status lf_planar_stratum(const double* f1, int n1, const double* f2, int n2, const double* g1, int m1,
                                   const double* g2, int m2, double x, double y, char** json);

#ifdef __cplusplus
}
#endif

#endif
