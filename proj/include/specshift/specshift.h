/* specshift — spectral shift functions of finite self-adjoint operator pairs.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed here; every fallible call returns a specshift_status, with a
 * thread-local diagnostic available from specshift_last_error(). Handles are
 * immutable after creation and may be shared across threads.
 *
 * Complex matrices cross this boundary as interleaved doubles, row-major:
 * entries[2*(i*dim + j)] = Re A_ij, entries[2*(i*dim + j) + 1] = Im A_ij.
 */

#ifndef SPECSHIFT_H
#define SPECSHIFT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum specshift_status {
    SPECSHIFT_OK = 0,
    SPECSHIFT_ERR_INVALID_ARGUMENT = 1,
    SPECSHIFT_ERR_NON_HERMITIAN = 2,
    SPECSHIFT_ERR_DIMENSION_MISMATCH = 3,
    SPECSHIFT_ERR_QUADRATURE_FAILURE = 4,
    SPECSHIFT_ERR_GUARD_VIOLATION = 5,
    SPECSHIFT_ERR_BRANCH_AMBIGUITY = 6,
    SPECSHIFT_ERR_ENDPOINT_DEGENERACY = 7,
    SPECSHIFT_ERR_CROSSING_AMBIGUITY = 8,
    SPECSHIFT_ERR_LABEL_STRUCTURE = 9,
    SPECSHIFT_ERR_PARSE = 10,
    SPECSHIFT_ERR_IO = 11,
    SPECSHIFT_ERR_INTERNAL = 12
} specshift_status;

const char* specshift_status_name(specshift_status status);

/* Message for the most recent failure on this thread; empty string if the
 * last call succeeded. The pointer stays valid until the next failing call
 * on the same thread. */
const char* specshift_last_error(void);

/* Frees strings returned through char** out-parameters. */
void specshift_string_free(char* s);

/* ---- operators ---------------------------------------------------------- */

typedef struct specshift_operator specshift_operator;

/* Creates a Hermitian operator from a dense dim x dim complex matrix.
 * Inputs are symmetrized to (A + A*)/2 when ||A - A*||_F is within
 * 1e-12 * max(1, ||A||_F) and rejected as non-Hermitian otherwise. */
specshift_status specshift_operator_create(size_t dim, const double* entries,
                                           specshift_operator** out);
specshift_status specshift_operator_diagonal(size_t dim, const double* diag,
                                             specshift_operator** out);
specshift_status specshift_operator_read_matrix_market(const char* path,
                                                       specshift_operator** out);
specshift_status specshift_operator_write_matrix_market(const specshift_operator* op,
                                                        const char* path);
void specshift_operator_free(specshift_operator* op);

size_t specshift_operator_dim(const specshift_operator* op);
/* a + scale * b */
specshift_status specshift_operator_add_scaled(const specshift_operator* a,
                                               const specshift_operator* b,
                                               double scale,
                                               specshift_operator** out);
/* Ascending eigenvalues; out must hold dim doubles. */
specshift_status specshift_operator_eigenvalues(const specshift_operator* op,
                                                double* out);
specshift_status specshift_operator_trace(const specshift_operator* op, double* out);
specshift_status specshift_operator_trace_norm(const specshift_operator* op,
                                               double* out);
/* N_H(lambda) = #{ eigenvalues <= lambda }. */
specshift_status specshift_operator_counting(const specshift_operator* op,
                                             double lambda, size_t* out);

/* ---- test functions ------------------------------------------------------ */

typedef struct specshift_testfn specshift_testfn;

typedef enum specshift_testfn_family {
    SPECSHIFT_TESTFN_BUMP = 0,    /* exp(-1/(1-t^2)) profile */
    SPECSHIFT_TESTFN_COSINE = 1,  /* raised cosine */
    SPECSHIFT_TESTFN_HAT = 2,     /* cubic spline hat */
    SPECSHIFT_TESTFN_PLATEAU = 3  /* 1 on the middle half of [a, b] */
} specshift_testfn_family;

specshift_status specshift_testfn_create(specshift_testfn_family family, double a,
                                         double b, double amplitude,
                                         specshift_testfn** out);
/* Plateau variant with explicit inner interval: a < p <= q < b. */
specshift_status specshift_testfn_create_plateau(double a, double p, double q,
                                                 double b, double amplitude,
                                                 specshift_testfn** out);
void specshift_testfn_free(specshift_testfn* f);

/* order 0: phi(x); order 1: phi'(x). Exactly 0 outside the support. */
specshift_status specshift_testfn_evaluate(const specshift_testfn* f, double x,
                                           int order, double* out);
specshift_status specshift_testfn_sup_norm(const specshift_testfn* f, double* out);

/* Functional calculus phi(H) = U phi(Lambda) U*. */
specshift_status specshift_operator_apply_testfn(const specshift_operator* op,
                                                 const specshift_testfn* f,
                                                 specshift_operator** out);

/* ---- step functions ------------------------------------------------------ */

typedef struct specshift_stepfn specshift_stepfn;

/* n_breakpoints ascending breakpoints and n_breakpoints - 1 integer values
 * (value k lives on [b_k, b_{k+1})). The result is canonicalized: adjacent
 * equal values merge and zero-valued ends are trimmed. Pass 0 breakpoints
 * for the zero function. */
specshift_status specshift_stepfn_create(size_t n_breakpoints,
                                         const double* breakpoints,
                                         const int64_t* values,
                                         specshift_stepfn** out);
void specshift_stepfn_free(specshift_stepfn* s);

size_t specshift_stepfn_breakpoint_count(const specshift_stepfn* s);
specshift_status specshift_stepfn_breakpoints(const specshift_stepfn* s, double* out);
specshift_status specshift_stepfn_values(const specshift_stepfn* s, int64_t* out);
specshift_status specshift_stepfn_evaluate(const specshift_stepfn* s, double x,
                                           int64_t* out);
/* Integral of the step function. */
specshift_status specshift_stepfn_mass(const specshift_stepfn* s, double* out);
specshift_status specshift_stepfn_equal(const specshift_stepfn* a,
                                        const specshift_stepfn* b, int* out);
specshift_status specshift_stepfn_negate(const specshift_stepfn* s,
                                         specshift_stepfn** out);
specshift_status specshift_stepfn_add(const specshift_stepfn* a,
                                      const specshift_stepfn* b,
                                      specshift_stepfn** out);

/* CSV schema: header `breakpoint,value`, one row per breakpoint carrying the
 * value on the right-open interval starting there, final row value 0.
 * Breakpoints are written with 17 significant digits and round-trip
 * exactly. */
specshift_status specshift_stepfn_to_csv(const specshift_stepfn* s, char** out);
specshift_status specshift_stepfn_from_csv(const char* text, specshift_stepfn** out);
specshift_status specshift_stepfn_write_csv(const specshift_stepfn* s,
                                            const char* path);
specshift_status specshift_stepfn_read_csv(const char* path, specshift_stepfn** out);

/* ---- pairings ------------------------------------------------------------ */

/* integral xi * phi, adaptive, absolute error <= tol. */
specshift_status specshift_pair_density(const specshift_stepfn* xi,
                                        const specshift_testfn* f, double tol,
                                        double* out);
/* integral xi * phi' by the exact telescoping closed form. */
specshift_status specshift_pair_derivative(const specshift_stepfn* xi,
                                           const specshift_testfn* f, double* out);

/* ---- SSF engines --------------------------------------------------------- */

typedef enum specshift_engine {
    SPECSHIFT_ENGINE_COUNTING = 0,
    SPECSHIFT_ENGINE_AVERAGING = 1,
    SPECSHIFT_ENGINE_KREIN = 2
} specshift_engine;

/* xi = N_{h0} - N_{h1} as a canonical step function (exact integers). */
specshift_status specshift_ssf_counting(const specshift_operator* h0,
                                        const specshift_operator* h1,
                                        specshift_stepfn** out);
/* Tr(phi(h1)) - Tr(phi(h0)). */
specshift_status specshift_trace_difference(const specshift_operator* h0,
                                            const specshift_operator* h1,
                                            const specshift_testfn* f, double* out);
/* Birman-Solomyak average over the path h0 + r v, absolute error <= tol. */
specshift_status specshift_ssf_averaging(const specshift_operator* h0,
                                         const specshift_operator* v,
                                         const specshift_testfn* f, double tol,
                                         double* out);
/* Perturbation-determinant estimates of xi at each grid point. The grid must
 * ascend and keep 1e-6 * (spectral diameter) away from all eigenvalues of
 * h0 and h0 + v. xi_out must hold n doubles. */
specshift_status specshift_ssf_krein(const specshift_operator* h0,
                                     const specshift_operator* v,
                                     const double* lambda_grid, size_t n,
                                     double epsilon_start, double epsilon_min,
                                     double refinement_factor, double* xi_out);
/* |xi_{H0+V2,H0}(phi) - xi_{H0+V2,H0+V1}(phi) - xi_{H0+V1,H0}(phi)| under the
 * chosen engine (counting or averaging). */
specshift_status specshift_additivity_residual(const specshift_operator* h0,
                                               const specshift_operator* v1,
                                               const specshift_operator* v2,
                                               const specshift_testfn* f,
                                               specshift_engine engine, double tol,
                                               double* out);

/* ---- labeled block models ------------------------------------------------ */

typedef struct specshift_labeled specshift_labeled;

typedef enum specshift_label {
    SPECSHIFT_LABEL_AC = 0,
    SPECSHIFT_LABEL_SING = 1
} specshift_label;

/* n_blocks blocks; block k is a dense dims[k] x dims[k] complex matrix at
 * block_entries[k] (same interleaved layout as operators). */
specshift_status specshift_labeled_create(size_t n_blocks, const size_t* dims,
                                          const specshift_label* labels,
                                          const double* const* block_entries,
                                          specshift_labeled** out);
/* Manifest file: one `<matrix-market-file> label=AC|SING` line per block. */
specshift_status specshift_labeled_read_manifest(const char* path,
                                                 specshift_labeled** out);
void specshift_labeled_free(specshift_labeled* l);

size_t specshift_labeled_total_dim(const specshift_labeled* l);
specshift_status specshift_labeled_add_scaled(const specshift_labeled* a,
                                              const specshift_labeled* b,
                                              double scale,
                                              specshift_labeled** out);
specshift_status specshift_labeled_flatten(const specshift_labeled* l,
                                           specshift_operator** out);
specshift_status specshift_part_projector(const specshift_labeled* l,
                                          specshift_label label,
                                          specshift_operator** out);
/* Part SSF xi^{label}_{H0+V,H0}(phi) over the labeled path, error <= tol.
 * V must be block conformal with H0 (same dims and labels). */
specshift_status specshift_ssf_part(const specshift_labeled* h0,
                                    const specshift_labeled* v,
                                    specshift_label label,
                                    const specshift_testfn* f, double tol,
                                    double* out);
specshift_status specshift_part_additivity_residual(
    const specshift_labeled* h0, const specshift_labeled* v1,
    const specshift_labeled* v2, specshift_label label, const specshift_testfn* f,
    double tol, double* out);
/* For each of the n sequence elements fills trace_norm_gaps[k] with
 * ||V - V_k||_1 and ssf_gaps[k] with the AC part SSF gap. */
specshift_status specshift_weak_continuity_table(
    const specshift_labeled* h0, const specshift_labeled* v,
    const specshift_labeled* const* vseq, size_t n, const specshift_testfn* f,
    double tol, double* trace_norm_gaps, double* ssf_gaps);

/* ---- spectral flow ------------------------------------------------------- */

/* Net signed count of eigenvalue crossings of h0 + r v through lambda over
 * r in [0, 1]. lambda must be neither an eigenvalue of h0 nor of h0 + v. */
specshift_status specshift_spectral_flow(const specshift_operator* h0,
                                         const specshift_operator* v,
                                         double lambda, double max_step,
                                         int64_t* out);

/* Sampled sorted-eigenvalue curves of the path. Query the sample count
 * first; then parameters_out (n_samples) and curves_out (n_samples * dim,
 * sample-major) may be filled. */
specshift_status specshift_track_eigenvalues_count(const specshift_operator* h0,
                                                   const specshift_operator* v,
                                                   double max_step,
                                                   size_t* n_samples);
specshift_status specshift_track_eigenvalues(const specshift_operator* h0,
                                             const specshift_operator* v,
                                             double max_step, double* parameters_out,
                                             double* curves_out);

/* ---- verification suite -------------------------------------------------- */

/* Runs the built-in identity suite. Writes the report CSV
 * (`check,engine,residual,bound,pass`) to *report_csv (free with
 * specshift_string_free) and the number of failed checks to *num_failed.
 * max_threads = 0 defers to SPECSHIFT_THREADS, then hardware concurrency.
 * Reports are byte-identical for identical seed and tol. */
specshift_status specshift_verify_run(uint64_t seed, double tol, int max_threads,
                                      char** report_csv, int* num_failed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPECSHIFT_H */
