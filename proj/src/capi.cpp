#include "specshift/specshift.h"

#include "decomposition.hpp"
#include "engines.hpp"
#include "errors.hpp"
#include "flow.hpp"
#include "hermitian.hpp"
#include "io.hpp"
#include "testfn.hpp"
#include "verify.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <utility>
#include <vector>

struct specshift_operator {
    specshift::HermitianOperator impl;
};
struct specshift_testfn {
    specshift::TestFunction impl;
};
struct specshift_stepfn {
    specshift::StepFunction impl;
};
struct specshift_labeled {
    specshift::LabeledOperator impl;
};

namespace {

thread_local std::string g_last_error;

specshift_status map_code(specshift::ErrorCode code) {
    using specshift::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument:         return SPECSHIFT_ERR_INVALID_ARGUMENT;
        case ErrorCode::NonHermitianInput:       return SPECSHIFT_ERR_NON_HERMITIAN;
        case ErrorCode::DimensionMismatch:       return SPECSHIFT_ERR_DIMENSION_MISMATCH;
        case ErrorCode::QuadratureFailure:       return SPECSHIFT_ERR_QUADRATURE_FAILURE;
        case ErrorCode::GuardViolation:          return SPECSHIFT_ERR_GUARD_VIOLATION;
        case ErrorCode::BranchAmbiguity:         return SPECSHIFT_ERR_BRANCH_AMBIGUITY;
        case ErrorCode::EndpointDegeneracy:      return SPECSHIFT_ERR_ENDPOINT_DEGENERACY;
        case ErrorCode::CrossingAmbiguity:       return SPECSHIFT_ERR_CROSSING_AMBIGUITY;
        case ErrorCode::LabelStructureViolation: return SPECSHIFT_ERR_LABEL_STRUCTURE;
        case ErrorCode::ParseError:              return SPECSHIFT_ERR_PARSE;
        case ErrorCode::IoError:                 return SPECSHIFT_ERR_IO;
    }
    return SPECSHIFT_ERR_INTERNAL;
}

template <typename Fn>
specshift_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SPECSHIFT_OK;
    } catch (const specshift::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SPECSHIFT_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SPECSHIFT_ERR_INTERNAL;
    }
}

specshift_status fail_argument(const char* message) {
    g_last_error = message;
    return SPECSHIFT_ERR_INVALID_ARGUMENT;
}

specshift::Matrix matrix_from_interleaved(size_t dim, const double* entries) {
    specshift::Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) {
            const size_t k = 2 * (i * dim + j);
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::complex<double>(entries[k], entries[k + 1]);
        }
    return m;
}

specshift::PartLabel to_label(specshift_label label) {
    return label == SPECSHIFT_LABEL_AC ? specshift::PartLabel::AC
                                       : specshift::PartLabel::Sing;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* specshift_status_name(specshift_status status) {
    switch (status) {
        case SPECSHIFT_OK:                      return "OK";
        case SPECSHIFT_ERR_INVALID_ARGUMENT:    return "InvalidArgument";
        case SPECSHIFT_ERR_NON_HERMITIAN:       return "NonHermitianInput";
        case SPECSHIFT_ERR_DIMENSION_MISMATCH:  return "DimensionMismatch";
        case SPECSHIFT_ERR_QUADRATURE_FAILURE:  return "QuadratureFailure";
        case SPECSHIFT_ERR_GUARD_VIOLATION:     return "GuardViolation";
        case SPECSHIFT_ERR_BRANCH_AMBIGUITY:    return "BranchAmbiguity";
        case SPECSHIFT_ERR_ENDPOINT_DEGENERACY: return "EndpointDegeneracy";
        case SPECSHIFT_ERR_CROSSING_AMBIGUITY:  return "CrossingAmbiguity";
        case SPECSHIFT_ERR_LABEL_STRUCTURE:     return "LabelStructureViolation";
        case SPECSHIFT_ERR_PARSE:               return "ParseError";
        case SPECSHIFT_ERR_IO:                  return "IoError";
        case SPECSHIFT_ERR_INTERNAL:            return "InternalError";
    }
    return "UnknownStatus";
}

const char* specshift_last_error(void) { return g_last_error.c_str(); }

void specshift_string_free(char* s) { std::free(s); }

/* ---- operators ---------------------------------------------------------- */

specshift_status specshift_operator_create(size_t dim, const double* entries,
                                           specshift_operator** out) {
    if (!entries || !out) return fail_argument("operator_create: null argument");
    if (dim == 0) return fail_argument("operator_create: dim must be >= 1");
    return guarded([&] {
        *out = new specshift_operator{
            specshift::HermitianOperator(matrix_from_interleaved(dim, entries))};
    });
}

specshift_status specshift_operator_diagonal(size_t dim, const double* diag,
                                             specshift_operator** out) {
    if (!diag || !out) return fail_argument("operator_diagonal: null argument");
    if (dim == 0) return fail_argument("operator_diagonal: dim must be >= 1");
    return guarded([&] {
        *out = new specshift_operator{specshift::HermitianOperator::diagonal(
            std::vector<double>(diag, diag + dim))};
    });
}

specshift_status specshift_operator_read_matrix_market(const char* path,
                                                       specshift_operator** out) {
    if (!path || !out) return fail_argument("operator_read_matrix_market: null argument");
    return guarded([&] {
        *out = new specshift_operator{specshift::read_matrix_market(path)};
    });
}

specshift_status specshift_operator_write_matrix_market(const specshift_operator* op,
                                                        const char* path) {
    if (!op || !path) return fail_argument("operator_write_matrix_market: null argument");
    return guarded([&] { specshift::write_matrix_market(path, op->impl); });
}

void specshift_operator_free(specshift_operator* op) { delete op; }

size_t specshift_operator_dim(const specshift_operator* op) {
    return op ? op->impl.dim() : 0;
}

specshift_status specshift_operator_add_scaled(const specshift_operator* a,
                                               const specshift_operator* b,
                                               double scale,
                                               specshift_operator** out) {
    if (!a || !b || !out) return fail_argument("operator_add_scaled: null argument");
    return guarded([&] {
        *out = new specshift_operator{a->impl.add_scaled(b->impl, scale)};
    });
}

specshift_status specshift_operator_eigenvalues(const specshift_operator* op,
                                                double* out) {
    if (!op || !out) return fail_argument("operator_eigenvalues: null argument");
    return guarded([&] {
        const Eigen::VectorXd& ev = op->impl.eigensystem().eigenvalues;
        for (Eigen::Index i = 0; i < ev.size(); ++i) out[i] = ev(i);
    });
}

specshift_status specshift_operator_trace(const specshift_operator* op, double* out) {
    if (!op || !out) return fail_argument("operator_trace: null argument");
    return guarded([&] { *out = specshift::trace(op->impl); });
}

specshift_status specshift_operator_trace_norm(const specshift_operator* op,
                                               double* out) {
    if (!op || !out) return fail_argument("operator_trace_norm: null argument");
    return guarded([&] { *out = specshift::trace_norm(op->impl); });
}

specshift_status specshift_operator_counting(const specshift_operator* op,
                                             double lambda, size_t* out) {
    if (!op || !out) return fail_argument("operator_counting: null argument");
    return guarded([&] { *out = specshift::counting_function(op->impl, lambda); });
}

/* ---- test functions ------------------------------------------------------ */

specshift_status specshift_testfn_create(specshift_testfn_family family, double a,
                                         double b, double amplitude,
                                         specshift_testfn** out) {
    if (!out) return fail_argument("testfn_create: null argument");
    return guarded([&] {
        specshift::TestFamily fam;
        switch (family) {
            case SPECSHIFT_TESTFN_BUMP:    fam = specshift::TestFamily::SmoothBump; break;
            case SPECSHIFT_TESTFN_COSINE:  fam = specshift::TestFamily::RaisedCosine; break;
            case SPECSHIFT_TESTFN_HAT:     fam = specshift::TestFamily::CubicHat; break;
            case SPECSHIFT_TESTFN_PLATEAU: fam = specshift::TestFamily::PlateauBump; break;
            default:
                specshift::raise(specshift::ErrorCode::InvalidArgument, "testfn_create",
                                 "unknown family");
        }
        *out = new specshift_testfn{specshift::TestFunction(fam, a, b, amplitude)};
    });
}

specshift_status specshift_testfn_create_plateau(double a, double p, double q,
                                                 double b, double amplitude,
                                                 specshift_testfn** out) {
    if (!out) return fail_argument("testfn_create_plateau: null argument");
    return guarded([&] {
        *out = new specshift_testfn{
            specshift::TestFunction::plateau(a, p, q, b, amplitude)};
    });
}

void specshift_testfn_free(specshift_testfn* f) { delete f; }

specshift_status specshift_testfn_evaluate(const specshift_testfn* f, double x,
                                           int order, double* out) {
    if (!f || !out) return fail_argument("testfn_evaluate: null argument");
    return guarded([&] { *out = f->impl.evaluate(x, order); });
}

specshift_status specshift_testfn_sup_norm(const specshift_testfn* f, double* out) {
    if (!f || !out) return fail_argument("testfn_sup_norm: null argument");
    return guarded([&] { *out = f->impl.sup_norm(); });
}

specshift_status specshift_operator_apply_testfn(const specshift_operator* op,
                                                 const specshift_testfn* f,
                                                 specshift_operator** out) {
    if (!op || !f || !out) return fail_argument("operator_apply_testfn: null argument");
    return guarded([&] {
        *out = new specshift_operator{specshift::apply_function(
            op->impl, [f](double x) { return f->impl.evaluate(x, 0); })};
    });
}

/* ---- step functions ------------------------------------------------------ */

specshift_status specshift_stepfn_create(size_t n_breakpoints,
                                         const double* breakpoints,
                                         const int64_t* values,
                                         specshift_stepfn** out) {
    if (!out) return fail_argument("stepfn_create: null argument");
    if (n_breakpoints > 0 && (!breakpoints || !values))
        return fail_argument("stepfn_create: null data");
    return guarded([&] {
        std::vector<double> bp(breakpoints, breakpoints + n_breakpoints);
        std::vector<std::int64_t> vv;
        if (n_breakpoints > 1)
            vv.assign(values, values + n_breakpoints - 1);
        *out = new specshift_stepfn{
            specshift::StepFunction(std::move(bp), std::move(vv))};
    });
}

void specshift_stepfn_free(specshift_stepfn* s) { delete s; }

size_t specshift_stepfn_breakpoint_count(const specshift_stepfn* s) {
    return s ? s->impl.breakpoints().size() : 0;
}

specshift_status specshift_stepfn_breakpoints(const specshift_stepfn* s, double* out) {
    if (!s || !out) return fail_argument("stepfn_breakpoints: null argument");
    return guarded([&] {
        const auto& bp = s->impl.breakpoints();
        for (std::size_t i = 0; i < bp.size(); ++i) out[i] = bp[i];
    });
}

specshift_status specshift_stepfn_values(const specshift_stepfn* s, int64_t* out) {
    if (!s || !out) return fail_argument("stepfn_values: null argument");
    return guarded([&] {
        const auto& vv = s->impl.values();
        for (std::size_t i = 0; i < vv.size(); ++i) out[i] = vv[i];
    });
}

specshift_status specshift_stepfn_evaluate(const specshift_stepfn* s, double x,
                                           int64_t* out) {
    if (!s || !out) return fail_argument("stepfn_evaluate: null argument");
    return guarded([&] { *out = s->impl.evaluate(x); });
}

specshift_status specshift_stepfn_mass(const specshift_stepfn* s, double* out) {
    if (!s || !out) return fail_argument("stepfn_mass: null argument");
    return guarded([&] { *out = s->impl.mass(); });
}

specshift_status specshift_stepfn_equal(const specshift_stepfn* a,
                                        const specshift_stepfn* b, int* out) {
    if (!a || !b || !out) return fail_argument("stepfn_equal: null argument");
    return guarded([&] { *out = a->impl == b->impl ? 1 : 0; });
}

specshift_status specshift_stepfn_negate(const specshift_stepfn* s,
                                         specshift_stepfn** out) {
    if (!s || !out) return fail_argument("stepfn_negate: null argument");
    return guarded([&] { *out = new specshift_stepfn{s->impl.negated()}; });
}

specshift_status specshift_stepfn_add(const specshift_stepfn* a,
                                      const specshift_stepfn* b,
                                      specshift_stepfn** out) {
    if (!a || !b || !out) return fail_argument("stepfn_add: null argument");
    return guarded([&] { *out = new specshift_stepfn{a->impl.plus(b->impl)}; });
}

specshift_status specshift_stepfn_to_csv(const specshift_stepfn* s, char** out) {
    if (!s || !out) return fail_argument("stepfn_to_csv: null argument");
    return guarded([&] { *out = copy_string(specshift::step_to_csv(s->impl)); });
}

specshift_status specshift_stepfn_from_csv(const char* text, specshift_stepfn** out) {
    if (!text || !out) return fail_argument("stepfn_from_csv: null argument");
    return guarded([&] {
        *out = new specshift_stepfn{specshift::step_from_csv(text)};
    });
}

specshift_status specshift_stepfn_write_csv(const specshift_stepfn* s,
                                            const char* path) {
    if (!s || !path) return fail_argument("stepfn_write_csv: null argument");
    return guarded([&] { specshift::write_step_csv(path, s->impl); });
}

specshift_status specshift_stepfn_read_csv(const char* path, specshift_stepfn** out) {
    if (!path || !out) return fail_argument("stepfn_read_csv: null argument");
    return guarded([&] {
        *out = new specshift_stepfn{specshift::read_step_csv(path)};
    });
}

/* ---- pairings ------------------------------------------------------------ */

specshift_status specshift_pair_density(const specshift_stepfn* xi,
                                        const specshift_testfn* f, double tol,
                                        double* out) {
    if (!xi || !f || !out) return fail_argument("pair_density: null argument");
    return guarded([&] { *out = specshift::pair_density(xi->impl, f->impl, tol); });
}

specshift_status specshift_pair_derivative(const specshift_stepfn* xi,
                                           const specshift_testfn* f, double* out) {
    if (!xi || !f || !out) return fail_argument("pair_derivative: null argument");
    return guarded([&] { *out = specshift::pair_derivative(xi->impl, f->impl); });
}

/* ---- SSF engines --------------------------------------------------------- */

specshift_status specshift_ssf_counting(const specshift_operator* h0,
                                        const specshift_operator* h1,
                                        specshift_stepfn** out) {
    if (!h0 || !h1 || !out) return fail_argument("ssf_counting: null argument");
    return guarded([&] {
        *out = new specshift_stepfn{specshift::ssf_counting(h0->impl, h1->impl)};
    });
}

specshift_status specshift_trace_difference(const specshift_operator* h0,
                                            const specshift_operator* h1,
                                            const specshift_testfn* f, double* out) {
    if (!h0 || !h1 || !f || !out)
        return fail_argument("trace_difference: null argument");
    return guarded([&] {
        *out = specshift::trace_difference(h0->impl, h1->impl, f->impl);
    });
}

specshift_status specshift_ssf_averaging(const specshift_operator* h0,
                                         const specshift_operator* v,
                                         const specshift_testfn* f, double tol,
                                         double* out) {
    if (!h0 || !v || !f || !out) return fail_argument("ssf_averaging: null argument");
    return guarded([&] {
        *out = specshift::ssf_averaging(specshift::PerturbationPath(h0->impl, v->impl),
                                        f->impl, tol);
    });
}

specshift_status specshift_ssf_krein(const specshift_operator* h0,
                                     const specshift_operator* v,
                                     const double* lambda_grid, size_t n,
                                     double epsilon_start, double epsilon_min,
                                     double refinement_factor, double* xi_out) {
    if (!h0 || !v || !lambda_grid || !xi_out || n == 0)
        return fail_argument("ssf_krein: null argument");
    return guarded([&] {
        specshift::KreinSchedule sched;
        sched.lambda_grid.assign(lambda_grid, lambda_grid + n);
        sched.epsilon_start = epsilon_start;
        sched.epsilon_min = epsilon_min;
        sched.refinement_factor = refinement_factor;
        const auto estimates = specshift::ssf_krein(
            specshift::PerturbationPath(h0->impl, v->impl), sched);
        for (std::size_t i = 0; i < estimates.size(); ++i)
            xi_out[i] = estimates[i].second;
    });
}

specshift_status specshift_additivity_residual(const specshift_operator* h0,
                                               const specshift_operator* v1,
                                               const specshift_operator* v2,
                                               const specshift_testfn* f,
                                               specshift_engine engine, double tol,
                                               double* out) {
    if (!h0 || !v1 || !v2 || !f || !out)
        return fail_argument("additivity_residual: null argument");
    return guarded([&] {
        specshift::EngineChoice choice;
        switch (engine) {
            case SPECSHIFT_ENGINE_COUNTING:
                choice = specshift::EngineChoice::Counting;
                break;
            case SPECSHIFT_ENGINE_AVERAGING:
                choice = specshift::EngineChoice::Averaging;
                break;
            case SPECSHIFT_ENGINE_KREIN:
                choice = specshift::EngineChoice::Krein;
                break;
            default:
                specshift::raise(specshift::ErrorCode::InvalidArgument,
                                 "additivity_residual", "unknown engine");
        }
        *out = specshift::additivity_residual(h0->impl, v1->impl, v2->impl, f->impl,
                                              choice, tol);
    });
}

/* ---- labeled block models ------------------------------------------------ */

specshift_status specshift_labeled_create(size_t n_blocks, const size_t* dims,
                                          const specshift_label* labels,
                                          const double* const* block_entries,
                                          specshift_labeled** out) {
    if (!dims || !labels || !block_entries || !out || n_blocks == 0)
        return fail_argument("labeled_create: null argument");
    return guarded([&] {
        std::vector<specshift::LabeledBlock> blocks;
        blocks.reserve(n_blocks);
        for (size_t k = 0; k < n_blocks; ++k)
            blocks.push_back({specshift::HermitianOperator(
                                  matrix_from_interleaved(dims[k], block_entries[k])),
                              to_label(labels[k])});
        *out = new specshift_labeled{specshift::LabeledOperator(std::move(blocks))};
    });
}

specshift_status specshift_labeled_read_manifest(const char* path,
                                                 specshift_labeled** out) {
    if (!path || !out) return fail_argument("labeled_read_manifest: null argument");
    return guarded([&] {
        *out = new specshift_labeled{specshift::read_labeled_manifest(path)};
    });
}

void specshift_labeled_free(specshift_labeled* l) { delete l; }

size_t specshift_labeled_total_dim(const specshift_labeled* l) {
    return l ? l->impl.total_dim() : 0;
}

specshift_status specshift_labeled_add_scaled(const specshift_labeled* a,
                                              const specshift_labeled* b,
                                              double scale,
                                              specshift_labeled** out) {
    if (!a || !b || !out) return fail_argument("labeled_add_scaled: null argument");
    return guarded([&] {
        *out = new specshift_labeled{a->impl.add_scaled(b->impl, scale)};
    });
}

specshift_status specshift_labeled_flatten(const specshift_labeled* l,
                                           specshift_operator** out) {
    if (!l || !out) return fail_argument("labeled_flatten: null argument");
    return guarded([&] { *out = new specshift_operator{l->impl.flatten()}; });
}

specshift_status specshift_part_projector(const specshift_labeled* l,
                                          specshift_label label,
                                          specshift_operator** out) {
    if (!l || !out) return fail_argument("part_projector: null argument");
    return guarded([&] {
        *out = new specshift_operator{
            specshift::part_projector(l->impl, to_label(label))};
    });
}

specshift_status specshift_ssf_part(const specshift_labeled* h0,
                                    const specshift_labeled* v,
                                    specshift_label label,
                                    const specshift_testfn* f, double tol,
                                    double* out) {
    if (!h0 || !v || !f || !out) return fail_argument("ssf_part: null argument");
    return guarded([&] {
        *out = specshift::ssf_part(specshift::LabeledPath(h0->impl, v->impl),
                                   to_label(label), f->impl, tol);
    });
}

specshift_status specshift_part_additivity_residual(
    const specshift_labeled* h0, const specshift_labeled* v1,
    const specshift_labeled* v2, specshift_label label, const specshift_testfn* f,
    double tol, double* out) {
    if (!h0 || !v1 || !v2 || !f || !out)
        return fail_argument("part_additivity_residual: null argument");
    return guarded([&] {
        *out = specshift::part_additivity_residual(h0->impl, v1->impl, v2->impl,
                                                   to_label(label), f->impl, tol);
    });
}

specshift_status specshift_weak_continuity_table(
    const specshift_labeled* h0, const specshift_labeled* v,
    const specshift_labeled* const* vseq, size_t n, const specshift_testfn* f,
    double tol, double* trace_norm_gaps, double* ssf_gaps) {
    if (!h0 || !v || !vseq || !f || !trace_norm_gaps || !ssf_gaps)
        return fail_argument("weak_continuity_table: null argument");
    return guarded([&] {
        std::vector<specshift::LabeledOperator> seq;
        seq.reserve(n);
        for (size_t k = 0; k < n; ++k) {
            if (!vseq[k])
                specshift::raise(specshift::ErrorCode::InvalidArgument,
                                 "weak_continuity_table", "null sequence element");
            seq.push_back(vseq[k]->impl);
        }
        const auto table =
            specshift::weak_continuity_table(h0->impl, v->impl, seq, f->impl, tol);
        for (size_t k = 0; k < table.size(); ++k) {
            trace_norm_gaps[k] = table[k].first;
            ssf_gaps[k] = table[k].second;
        }
    });
}

/* ---- spectral flow ------------------------------------------------------- */

specshift_status specshift_spectral_flow(const specshift_operator* h0,
                                         const specshift_operator* v,
                                         double lambda, double max_step,
                                         int64_t* out) {
    if (!h0 || !v || !out) return fail_argument("spectral_flow: null argument");
    return guarded([&] {
        *out = specshift::spectral_flow(
            specshift::PerturbationPath(h0->impl, v->impl), lambda, max_step);
    });
}

specshift_status specshift_track_eigenvalues_count(const specshift_operator* h0,
                                                   const specshift_operator* v,
                                                   double max_step,
                                                   size_t* n_samples) {
    if (!h0 || !v || !n_samples)
        return fail_argument("track_eigenvalues_count: null argument");
    return guarded([&] {
        *n_samples = specshift::track_eigenvalues(
                         specshift::PerturbationPath(h0->impl, v->impl), max_step)
                         .parameters.size();
    });
}

specshift_status specshift_track_eigenvalues(const specshift_operator* h0,
                                             const specshift_operator* v,
                                             double max_step, double* parameters_out,
                                             double* curves_out) {
    if (!h0 || !v || !parameters_out || !curves_out)
        return fail_argument("track_eigenvalues: null argument");
    return guarded([&] {
        const specshift::EigenPath path = specshift::track_eigenvalues(
            specshift::PerturbationPath(h0->impl, v->impl), max_step);
        const std::size_t dim = h0->impl.dim();
        for (std::size_t k = 0; k < path.parameters.size(); ++k) {
            parameters_out[k] = path.parameters[k];
            for (std::size_t i = 0; i < dim; ++i)
                curves_out[k * dim + i] =
                    path.curves[k](static_cast<Eigen::Index>(i));
        }
    });
}

/* ---- verification suite -------------------------------------------------- */

specshift_status specshift_verify_run(uint64_t seed, double tol, int max_threads,
                                      char** report_csv, int* num_failed) {
    if (!report_csv || !num_failed) return fail_argument("verify_run: null argument");
    return guarded([&] {
        specshift::verify::Options opts;
        opts.seed = seed;
        opts.tol = tol;
        opts.max_threads = max_threads;
        const auto results = specshift::verify::run_all(opts);
        *report_csv = copy_string(specshift::verify::report_csv(results));
        *num_failed = specshift::verify::count_failures(results);
    });
}

} /* extern "C" */
