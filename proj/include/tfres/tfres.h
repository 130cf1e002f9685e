/*
 * tfres: exact-diagonalization toolkit for frustrated XYZ rings.
 *
 * Every fallible call returns a tfres_status; on failure the message is
 * available from tfres_last_error() on the same thread. Objects are opaque
 * handles released with the matching *_free function. Strings returned
 * through char** are owned by the caller and released with tfres_string_free.
 *
 * Sites are 1-based. Basis index bit j-1 holds site j, a clear bit is the
 * sigma^z = +1 state.
 */
#ifndef TFRES_TFRES_H
#define TFRES_TFRES_H

#include <stddef.h>
#include <stdint.h>

#if defined(TFRES_BUILDING_LIBRARY)
#define TFRES_API __attribute__((visibility("default")))
#else
#define TFRES_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tfres_status {
    TFRES_OK = 0,
    TFRES_ERR_DOMAIN = 1,
    TFRES_ERR_CONTRACT = 2,
    TFRES_ERR_CONVERGENCE = 3,
    TFRES_ERR_RESOURCE = 4,
    TFRES_ERR_IO = 5,
    TFRES_ERR_USAGE = 6,
    TFRES_ERR_NOT_FOUND = 7,
    TFRES_ERR_INTERNAL = 8
} tfres_status;

typedef struct tfres_state tfres_state;
typedef struct tfres_model tfres_model;
typedef struct tfres_bundle tfres_bundle;
typedef struct tfres_circuit tfres_circuit;

typedef struct tfres_model_params {
    int n_sites;
    double jx;
    double jy;
    double jz;
    double h;
    int periodic; /* 1 ring, 0 open chain */
} tfres_model_params;

typedef struct tfres_solver_options {
    uint64_t seed;
    int dense_max_sites;
    int lanczos_max_sites;
    double tolerance;
    int max_krylov;
    int force_lanczos;
} tfres_solver_options;

typedef struct tfres_power_law {
    double a;
    double b;
    double stderr_b;
    double r2;
    size_t points;
} tfres_power_law;

typedef struct tfres_sre_jump_result {
    double below;
    double above;
    double jump;
    int momentum_index;
} tfres_sre_jump_result;

typedef struct tfres_axes {
    const char* x;
    const char* y;
    const char* group;       /* NULL: single series */
    int log_x;
    int log_y;
    int has_hline;
    double hline;
    const char* hline_label; /* may be NULL */
    const char* title;       /* may be NULL */
} tfres_axes;

typedef enum tfres_state_kind {
    TFRES_STATE_OMEGA = 0,      /* kink superposition, param = momentum index */
    TFRES_STATE_W = 1,          /* generalized W state, param = momentum index */
    TFRES_STATE_GHZ = 2,
    TFRES_STATE_NEEL = 3,
    TFRES_STATE_KINK_MINUS = 4, /* param = kink position k */
    TFRES_STATE_KINK_PLUS = 5
} tfres_state_kind;

/* Library */
TFRES_API const char* tfres_version(void);
TFRES_API const char* tfres_last_error(void);
TFRES_API const char* tfres_status_name(tfres_status status);
TFRES_API void tfres_string_free(char* text);
TFRES_API tfres_status tfres_set_threads(unsigned threads);
TFRES_API unsigned tfres_get_threads(void);

/* States */
TFRES_API tfres_status tfres_state_basis(int n_sites, uint64_t index, tfres_state** out);
/* re_im holds 2 * 2^N doubles, interleaved (re, im); count is that number of doubles. */
TFRES_API tfres_status tfres_state_from_amplitudes(int n_sites, const double* re_im, size_t count,
                                                   tfres_state** out);
TFRES_API tfres_status tfres_state_reference(tfres_state_kind kind, int n_sites, int param, tfres_state** out);
TFRES_API tfres_status tfres_state_random(int n_sites, uint64_t seed, tfres_state** out);
TFRES_API tfres_status tfres_state_clone(const tfres_state* state, tfres_state** out);
TFRES_API void tfres_state_free(tfres_state* state);
TFRES_API int tfres_state_n_sites(const tfres_state* state);
TFRES_API tfres_status tfres_state_amplitudes(const tfres_state* state, double* re_im, size_t count);
TFRES_API tfres_status tfres_state_norm(const tfres_state* state, double* out);
TFRES_API tfres_status tfres_state_inner(const tfres_state* a, const tfres_state* b, double* re, double* im);
/* pauli: "IXYZ..." with the first character on site 1 */
TFRES_API tfres_status tfres_state_expect_pauli(const tfres_state* state, const char* pauli, double* out);
TFRES_API tfres_status tfres_state_translate(const tfres_state* state, int shift, tfres_state** out);
/* TFRES_ERR_NOT_FOUND when the state is not a translation/parity eigenstate. */
TFRES_API tfres_status tfres_state_symmetry(const tfres_state* state, int* momentum_index, int* parity_z);
TFRES_API tfres_status tfres_state_save(const tfres_state* state, const char* path);
TFRES_API tfres_status tfres_state_load(const char* path, tfres_state** out);
TFRES_API tfres_status tfres_state_to_json(const tfres_state* state, char** out);

/* Model */
TFRES_API tfres_status tfres_model_create(const tfres_model_params* params, tfres_model** out);
/* key-value text with keys n, jx, jy, jz, h, boundary */
TFRES_API tfres_status tfres_model_parse(const char* text, tfres_model** out);
TFRES_API void tfres_model_free(tfres_model* model);
TFRES_API tfres_status tfres_model_params_get(const tfres_model* model, tfres_model_params* out);
TFRES_API int tfres_model_is_frustrated(const tfres_model* model);
TFRES_API tfres_status tfres_model_apply(const tfres_model* model, const tfres_state* state, tfres_state** out);
TFRES_API tfres_status tfres_model_energy(const tfres_model* model, const tfres_state* state, double* out);
TFRES_API tfres_status tfres_classical_ground_energy(const tfres_model_params* params, double* out);

/* Eigensolver; options may be NULL for defaults. */
TFRES_API void tfres_solver_options_default(tfres_solver_options* out);
TFRES_API tfres_status tfres_solve_lowest(const tfres_model* model, int k, const tfres_solver_options* options,
                                          tfres_bundle** out);
TFRES_API tfres_status tfres_ground_multiplet(const tfres_model* model, const tfres_solver_options* options,
                                              tfres_bundle** out);
TFRES_API tfres_status tfres_bundle_resolve_momentum(tfres_bundle* bundle, size_t group);
TFRES_API void tfres_bundle_free(tfres_bundle* bundle);
TFRES_API size_t tfres_bundle_size(const tfres_bundle* bundle);
TFRES_API size_t tfres_bundle_group_count(const tfres_bundle* bundle);
TFRES_API tfres_status tfres_bundle_group_size(const tfres_bundle* bundle, size_t group, size_t* out);
TFRES_API tfres_status tfres_bundle_energy(const tfres_bundle* bundle, size_t index, double* out);
TFRES_API tfres_status tfres_bundle_residual(const tfres_bundle* bundle, size_t index, double* out);
TFRES_API tfres_status tfres_bundle_state(const tfres_bundle* bundle, size_t index, tfres_state** out);
/* TFRES_ERR_NOT_FOUND for unlabeled states */
TFRES_API tfres_status tfres_bundle_sector(const tfres_bundle* bundle, size_t index, int* momentum_index,
                                           int* parity_z);
TFRES_API tfres_status tfres_bundle_to_json(const tfres_bundle* bundle, char** out);
/* TFRES_ERR_NOT_FOUND when the pair phase does not end inside [h_lo, h_hi]. */
TFRES_API tfres_status tfres_detect_transition(const tfres_model_params* family, double h_lo, double h_hi,
                                               double resolution, const tfres_solver_options* options,
                                               double* h_star);

/* Entanglement; alpha = 1 is von Neumann. */
TFRES_API tfres_status tfres_entropy(const tfres_state* state, const int* sites, size_t count, double alpha,
                                     double* out);
TFRES_API tfres_status tfres_disconnected_entropy(const tfres_state* state, int m, int l, int r, double alpha,
                                                  double* out);
TFRES_API tfres_status tfres_dee_preset(int n_sites, int allow_rounding, int* m, int* l, int* r);
TFRES_API tfres_status tfres_tf_entropy_oracle(double m, double* out);
TFRES_API tfres_status tfres_dee_oracle(double m, double l, double* out);

/* Magic */
TFRES_API tfres_status tfres_pauli_moment(const tfres_state* state, int q, double* zeta);
TFRES_API tfres_status tfres_sre(const tfres_state* state, int q, double* out);
TFRES_API tfres_status tfres_sre_naive(const tfres_state* state, int q, double* out);
TFRES_API tfres_status tfres_w_sre_oracle(int n_sites, int momentum_index, double* out);
TFRES_API tfres_status tfres_extra_magic(int n_sites, double* out);
TFRES_API tfres_status tfres_relative_sre_correction(double m_tf, double m_nf, int n_sites, int momentum_index,
                                                     double* out);
TFRES_API tfres_status tfres_ground_sre(const tfres_model* model, int q, const tfres_solver_options* options,
                                        double* value, int* momentum_index, int* multiplicity);
/* TFRES_ERR_NOT_FOUND when h* does not separate a momentum pair from a singlet. */
TFRES_API tfres_status tfres_sre_jump(const tfres_model_params* family, double h_star, double delta,
                                      const tfres_solver_options* options, tfres_sre_jump_result* out);

/* Clifford circuits */
TFRES_API tfres_status tfres_circuit_clifford_map(int n_sites, tfres_circuit** out);
TFRES_API tfres_status tfres_circuit_random(int n_sites, int length, uint64_t seed, tfres_circuit** out);
TFRES_API tfres_status tfres_circuit_from_json(const char* text, tfres_circuit** out);
TFRES_API tfres_status tfres_circuit_to_json(const tfres_circuit* circuit, char** out);
TFRES_API size_t tfres_circuit_length(const tfres_circuit* circuit);
TFRES_API tfres_status tfres_circuit_apply(const tfres_circuit* circuit, const tfres_state* state,
                                           tfres_state** out);
TFRES_API void tfres_circuit_free(tfres_circuit* circuit);

/* Lab */
/* Runs a key-value sweep plan; *out receives the rendered table. Rows that
 * failed (status other than "ok" or "not_found") are counted in *failed_rows
 * when it is not NULL; they do not make the call fail. */
TFRES_API tfres_status tfres_sweep_run(const char* plan_text, char** out, size_t* failed_rows);
TFRES_API tfres_status tfres_fit_power_law(const double* x, const double* y, size_t count, tfres_power_law* out);
/* Fits columns of a CSV table (rows with a non-"ok" status are skipped). */
TFRES_API tfres_status tfres_fit_table(const char* csv_text, const char* x_column, const char* y_column,
                                       tfres_power_law* out);
/* suite: oracles, clifford, degeneracy or all. *passed is 1 when every check passed. */
TFRES_API tfres_status tfres_verify(const char* suite, uint64_t seed, int with_timestamp, char** report_json,
                                    int* passed);
TFRES_API tfres_status tfres_plot(const char* csv_text, const tfres_axes* axes, char** svg);

#ifdef __cplusplus
}
#endif

#endif /* TFRES_TFRES_H */
