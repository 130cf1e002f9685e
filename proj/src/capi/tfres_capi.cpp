#include "tfres/tfres.h"

#include <cstdlib>
#include <cstring>
#include <random>
#include <string>

#include "core/eigensolver.hpp"
#include "core/entanglement.hpp"
#include "core/error.hpp"
#include "core/lab.hpp"
#include "core/magic.hpp"
#include "core/model.hpp"
#include "core/parallel.hpp"
#include "core/plot.hpp"
#include "core/reference_states.hpp"
#include "core/spin.hpp"
#include "core/verify.hpp"

struct tfres_state {
    tfres::StateVector value;
};

struct tfres_model {
    tfres::Hamiltonian value;
};

struct tfres_bundle {
    tfres::GroundStateBundle value;
};

struct tfres_circuit {
    tfres::CliffordCircuit value;
};

namespace {

thread_local std::string last_error;

struct NotFound : tfres::Error {
    using tfres::Error::Error;
};

template <class F>
tfres_status guard(F&& body) noexcept {
    try {
        last_error.clear();
        body();
        return TFRES_OK;
    } catch (const NotFound& e) {
        last_error = e.what();
        return TFRES_ERR_NOT_FOUND;
    } catch (const tfres::DomainError& e) {
        last_error = e.what();
        return TFRES_ERR_DOMAIN;
    } catch (const tfres::ContractError& e) {
        last_error = e.what();
        return TFRES_ERR_CONTRACT;
    } catch (const tfres::ConvergenceError& e) {
        last_error = e.what();
        return TFRES_ERR_CONVERGENCE;
    } catch (const tfres::ResourceError& e) {
        last_error = e.what();
        return TFRES_ERR_RESOURCE;
    } catch (const tfres::IoError& e) {
        last_error = e.what();
        return TFRES_ERR_IO;
    } catch (const tfres::UsageError& e) {
        last_error = e.what();
        return TFRES_ERR_USAGE;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return TFRES_ERR_RESOURCE;
    } catch (const std::exception& e) {
        last_error = e.what();
        return TFRES_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return TFRES_ERR_INTERNAL;
    }
}

template <class... Ptrs>
void require(const Ptrs*... ptrs) {
    if (((ptrs == nullptr) || ...)) throw tfres::UsageError("null argument");
}

char* duplicate(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

tfres::ModelSpec to_spec(const tfres_model_params& p) {
    tfres::ModelSpec spec;
    spec.n_sites = p.n_sites;
    spec.jx = p.jx;
    spec.jy = p.jy;
    spec.jz = p.jz;
    spec.h = p.h;
    spec.boundary = p.periodic ? tfres::Boundary::periodic : tfres::Boundary::open;
    return spec;
}

tfres::SolverOptions to_options(const tfres_solver_options* o) {
    tfres::SolverOptions opts;
    if (!o) return opts;
    opts.seed = o->seed;
    opts.dense_max_sites = o->dense_max_sites;
    opts.lanczos_max_sites = o->lanczos_max_sites;
    opts.tolerance = o->tolerance;
    opts.max_krylov = o->max_krylov;
    opts.force_lanczos = o->force_lanczos != 0;
    return opts;
}

const tfres::StateVector& bundle_state(const tfres_bundle* b, size_t index) {
    require(b);
    if (index >= b->value.size()) throw tfres::UsageError("bundle index out of range");
    return b->value.states[index];
}

}  // namespace

extern "C" {

const char* tfres_version(void) { return "0.1.0"; }

const char* tfres_last_error(void) { return last_error.c_str(); }

const char* tfres_status_name(tfres_status status) {
    switch (status) {
        case TFRES_OK: return "ok";
        case TFRES_ERR_DOMAIN: return "domain";
        case TFRES_ERR_CONTRACT: return "contract";
        case TFRES_ERR_CONVERGENCE: return "convergence";
        case TFRES_ERR_RESOURCE: return "resource";
        case TFRES_ERR_IO: return "io";
        case TFRES_ERR_USAGE: return "usage";
        case TFRES_ERR_NOT_FOUND: return "not_found";
        case TFRES_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

void tfres_string_free(char* text) { std::free(text); }

tfres_status tfres_set_threads(unsigned threads) {
    return guard([&] {
        if (threads == 0) throw tfres::UsageError("thread count must be positive");
        tfres::parallel::set_default_thread_budget(threads);
    });
}

unsigned tfres_get_threads(void) { return tfres::parallel::thread_budget(); }

tfres_status tfres_state_basis(int n_sites, uint64_t index, tfres_state** out) {
    return guard([&] {
        require(out);
        *out = new tfres_state{tfres::StateVector::basis(n_sites, index)};
    });
}

tfres_status tfres_state_from_amplitudes(int n_sites, const double* re_im, size_t count, tfres_state** out) {
    return guard([&] {
        require(re_im, out);
        tfres::detail::check_sites(n_sites);
        const size_t dim = size_t{1} << n_sites;
        if (count != 2 * dim) throw tfres::ContractError("expected 2 * 2^N doubles");
        std::vector<tfres::Complex> amps(dim);
        for (size_t i = 0; i < dim; ++i) amps[i] = {re_im[2 * i], re_im[2 * i + 1]};
        *out = new tfres_state{tfres::StateVector(n_sites, std::move(amps))};
    });
}

tfres_status tfres_state_reference(tfres_state_kind kind, int n_sites, int param, tfres_state** out) {
    return guard([&] {
        require(out);
        tfres::StateVector s;
        switch (kind) {
            case TFRES_STATE_OMEGA: s = tfres::omega_state(n_sites, param); break;
            case TFRES_STATE_W: s = tfres::w_state(n_sites, param); break;
            case TFRES_STATE_GHZ: s = tfres::ghz_state(n_sites); break;
            case TFRES_STATE_NEEL: s = tfres::neel_state(n_sites); break;
            case TFRES_STATE_KINK_MINUS: s = tfres::kink_state(n_sites, param, tfres::KinkFamily::minus); break;
            case TFRES_STATE_KINK_PLUS: s = tfres::kink_state(n_sites, param, tfres::KinkFamily::plus); break;
            default: throw tfres::UsageError("unknown state kind");
        }
        *out = new tfres_state{std::move(s)};
    });
}

tfres_status tfres_state_random(int n_sites, uint64_t seed, tfres_state** out) {
    return guard([&] {
        require(out);
        std::mt19937_64 rng(seed);
        *out = new tfres_state{tfres::random_state(n_sites, rng)};
    });
}

tfres_status tfres_state_clone(const tfres_state* state, tfres_state** out) {
    return guard([&] {
        require(state, out);
        *out = new tfres_state{state->value};
    });
}

void tfres_state_free(tfres_state* state) { delete state; }

int tfres_state_n_sites(const tfres_state* state) { return state ? state->value.n_sites() : -1; }

tfres_status tfres_state_amplitudes(const tfres_state* state, double* re_im, size_t count) {
    return guard([&] {
        require(state, re_im);
        const auto amps = state->value.amps();
        if (count != 2 * amps.size()) throw tfres::ContractError("expected 2 * 2^N doubles");
        for (size_t i = 0; i < amps.size(); ++i) {
            re_im[2 * i] = amps[i].real();
            re_im[2 * i + 1] = amps[i].imag();
        }
    });
}

tfres_status tfres_state_norm(const tfres_state* state, double* out) {
    return guard([&] {
        require(state, out);
        *out = state->value.norm();
    });
}

tfres_status tfres_state_inner(const tfres_state* a, const tfres_state* b, double* re, double* im) {
    return guard([&] {
        require(a, b, re, im);
        const auto z = tfres::inner(a->value, b->value);
        *re = z.real();
        *im = z.imag();
    });
}

tfres_status tfres_state_expect_pauli(const tfres_state* state, const char* pauli, double* out) {
    return guard([&] {
        require(state, pauli, out);
        if (static_cast<int>(std::strlen(pauli)) != state->value.n_sites()) {
            throw tfres::UsageError("Pauli string length differs from N");
        }
        *out = tfres::expect_pauli(state->value, tfres::PauliString::parse(pauli));
    });
}

tfres_status tfres_state_translate(const tfres_state* state, int shift, tfres_state** out) {
    return guard([&] {
        require(state, out);
        *out = new tfres_state{tfres::translate(state->value, shift)};
    });
}

tfres_status tfres_state_symmetry(const tfres_state* state, int* momentum_index, int* parity_z) {
    return guard([&] {
        require(state, momentum_index, parity_z);
        const auto sector = tfres::symmetry_sector(state->value);
        if (!sector) throw NotFound("state is not a translation and parity eigenstate");
        *momentum_index = sector->momentum_index;
        *parity_z = sector->parity_z;
    });
}

tfres_status tfres_state_save(const tfres_state* state, const char* path) {
    return guard([&] {
        require(state, path);
        tfres::save_tfsv(path, state->value);
    });
}

tfres_status tfres_state_load(const char* path, tfres_state** out) {
    return guard([&] {
        require(path, out);
        *out = new tfres_state{tfres::load_tfsv(path)};
    });
}

tfres_status tfres_state_to_json(const tfres_state* state, char** out) {
    return guard([&] {
        require(state, out);
        *out = duplicate(tfres::to_json(state->value));
    });
}

tfres_status tfres_model_create(const tfres_model_params* params, tfres_model** out) {
    return guard([&] {
        require(params, out);
        *out = new tfres_model{tfres::Hamiltonian(to_spec(*params))};
    });
}

tfres_status tfres_model_parse(const char* text, tfres_model** out) {
    return guard([&] {
        require(text, out);
        *out = new tfres_model{tfres::Hamiltonian(tfres::ModelSpec::parse(text))};
    });
}

void tfres_model_free(tfres_model* model) { delete model; }

tfres_status tfres_model_params_get(const tfres_model* model, tfres_model_params* out) {
    return guard([&] {
        require(model, out);
        const auto& s = model->value.spec();
        *out = {s.n_sites, s.jx, s.jy, s.jz, s.h, s.boundary == tfres::Boundary::periodic ? 1 : 0};
    });
}

int tfres_model_is_frustrated(const tfres_model* model) {
    return model && model->value.spec().is_topologically_frustrated() ? 1 : 0;
}

tfres_status tfres_model_apply(const tfres_model* model, const tfres_state* state, tfres_state** out) {
    return guard([&] {
        require(model, state, out);
        *out = new tfres_state{tfres::matvec(model->value, state->value)};
    });
}

tfres_status tfres_model_energy(const tfres_model* model, const tfres_state* state, double* out) {
    return guard([&] {
        require(model, state, out);
        *out = tfres::energy(model->value, state->value);
    });
}

tfres_status tfres_classical_ground_energy(const tfres_model_params* params, double* out) {
    return guard([&] {
        require(params, out);
        *out = tfres::classical_ground_energy(to_spec(*params));
    });
}

void tfres_solver_options_default(tfres_solver_options* out) {
    if (!out) return;
    const tfres::SolverOptions d;
    *out = {d.seed, d.dense_max_sites, d.lanczos_max_sites, d.tolerance, d.max_krylov, d.force_lanczos ? 1 : 0};
}

tfres_status tfres_solve_lowest(const tfres_model* model, int k, const tfres_solver_options* options,
                                tfres_bundle** out) {
    return guard([&] {
        require(model, out);
        *out = new tfres_bundle{tfres::solve_lowest(model->value, k, to_options(options))};
    });
}

tfres_status tfres_ground_multiplet(const tfres_model* model, const tfres_solver_options* options,
                                    tfres_bundle** out) {
    return guard([&] {
        require(model, out);
        *out = new tfres_bundle{tfres::ground_multiplet(model->value, to_options(options))};
    });
}

tfres_status tfres_bundle_resolve_momentum(tfres_bundle* bundle, size_t group) {
    return guard([&] {
        require(bundle);
        bundle->value = tfres::resolve_momentum(std::move(bundle->value), group);
    });
}

void tfres_bundle_free(tfres_bundle* bundle) { delete bundle; }

size_t tfres_bundle_size(const tfres_bundle* bundle) { return bundle ? bundle->value.size() : 0; }

size_t tfres_bundle_group_count(const tfres_bundle* bundle) {
    return bundle ? bundle->value.degeneracy_groups.size() : 0;
}

tfres_status tfres_bundle_group_size(const tfres_bundle* bundle, size_t group, size_t* out) {
    return guard([&] {
        require(bundle, out);
        if (group >= bundle->value.degeneracy_groups.size()) throw tfres::UsageError("group index out of range");
        *out = bundle->value.degeneracy_groups[group].size();
    });
}

tfres_status tfres_bundle_energy(const tfres_bundle* bundle, size_t index, double* out) {
    return guard([&] {
        require(out);
        bundle_state(bundle, index);
        *out = bundle->value.energies[index];
    });
}

tfres_status tfres_bundle_residual(const tfres_bundle* bundle, size_t index, double* out) {
    return guard([&] {
        require(out);
        bundle_state(bundle, index);
        *out = bundle->value.residuals[index];
    });
}

tfres_status tfres_bundle_state(const tfres_bundle* bundle, size_t index, tfres_state** out) {
    return guard([&] {
        require(out);
        *out = new tfres_state{bundle_state(bundle, index)};
    });
}

tfres_status tfres_bundle_sector(const tfres_bundle* bundle, size_t index, int* momentum_index, int* parity_z) {
    return guard([&] {
        require(momentum_index, parity_z);
        bundle_state(bundle, index);
        const auto& label = bundle->value.sector_labels[index];
        if (!label) throw NotFound("state carries no symmetry label");
        *momentum_index = label->momentum_index;
        *parity_z = label->parity_z;
    });
}

tfres_status tfres_bundle_to_json(const tfres_bundle* bundle, char** out) {
    return guard([&] {
        require(bundle, out);
        *out = duplicate(tfres::bundle_to_json(bundle->value));
    });
}

tfres_status tfres_detect_transition(const tfres_model_params* family, double h_lo, double h_hi,
                                     double resolution, const tfres_solver_options* options, double* h_star) {
    return guard([&] {
        require(family, h_star);
        const auto found = tfres::detect_transition_h(to_spec(*family), h_lo, h_hi, resolution, to_options(options));
        if (!found) throw NotFound("no end of the momentum-pair phase inside the range");
        *h_star = *found;
    });
}

tfres_status tfres_entropy(const tfres_state* state, const int* sites, size_t count, double alpha, double* out) {
    return guard([&] {
        require(state, out);
        if (count > 0) require(sites);
        const tfres::PartitionSpec part(state->value.n_sites(), std::vector<int>(sites, sites + count));
        *out = tfres::subsystem_entropy(state->value, part, alpha);
    });
}

tfres_status tfres_disconnected_entropy(const tfres_state* state, int m, int l, int r, double alpha, double* out) {
    return guard([&] {
        require(state, out);
        const auto geom = tfres::DisconnectedGeometry::from_sites(state->value.n_sites(), m, l, r);
        *out = tfres::disconnected_entropy(state->value, geom, alpha);
    });
}

tfres_status tfres_dee_preset(int n_sites, int allow_rounding, int* m, int* l, int* r) {
    return guard([&] {
        require(m, l, r);
        const auto geom = tfres::DisconnectedGeometry::preset_quarter(n_sites, allow_rounding != 0);
        *m = geom.m_sites;
        *l = geom.l_sites;
        *r = geom.r_sites;
    });
}

tfres_status tfres_tf_entropy_oracle(double m, double* out) {
    return guard([&] {
        require(out);
        *out = tfres::tf_entropy_oracle(m);
    });
}

tfres_status tfres_dee_oracle(double m, double l, double* out) {
    return guard([&] {
        require(out);
        *out = tfres::dee_oracle(m, l);
    });
}

tfres_status tfres_pauli_moment(const tfres_state* state, int q, double* zeta) {
    return guard([&] {
        require(state, zeta);
        *zeta = tfres::pauli_spectrum(state->value, {q}).moments.at(q);
    });
}

tfres_status tfres_sre(const tfres_state* state, int q, double* out) {
    return guard([&] {
        require(state, out);
        *out = tfres::sre(state->value, q).value;
    });
}

tfres_status tfres_sre_naive(const tfres_state* state, int q, double* out) {
    return guard([&] {
        require(state, out);
        *out = tfres::sre_naive(state->value, q).value;
    });
}

tfres_status tfres_w_sre_oracle(int n_sites, int momentum_index, double* out) {
    return guard([&] {
        require(out);
        *out = tfres::w_sre_oracle(n_sites, momentum_index);
    });
}

tfres_status tfres_extra_magic(int n_sites, double* out) {
    return guard([&] {
        require(out);
        *out = tfres::extra_magic(n_sites);
    });
}

tfres_status tfres_relative_sre_correction(double m_tf, double m_nf, int n_sites, int momentum_index,
                                           double* out) {
    return guard([&] {
        require(out);
        *out = tfres::relative_sre_correction(m_tf, m_nf, n_sites, momentum_index);
    });
}

tfres_status tfres_ground_sre(const tfres_model* model, int q, const tfres_solver_options* options, double* value,
                              int* momentum_index, int* multiplicity) {
    return guard([&] {
        require(model, value);
        const auto g = tfres::ground_state_sre(model->value.spec(), q, to_options(options));
        *value = g.value;
        if (momentum_index) *momentum_index = g.momentum_index;
        if (multiplicity) *multiplicity = g.multiplicity;
    });
}

tfres_status tfres_sre_jump(const tfres_model_params* family, double h_star, double delta,
                            const tfres_solver_options* options, tfres_sre_jump_result* out) {
    return guard([&] {
        require(family, out);
        const auto jump = tfres::sre_jump_at_transition(to_spec(*family), h_star, delta, to_options(options));
        if (!jump) throw NotFound("h* does not separate a momentum pair from a unique ground state");
        *out = {jump->below, jump->above, jump->jump, jump->momentum_index};
    });
}

tfres_status tfres_circuit_clifford_map(int n_sites, tfres_circuit** out) {
    return guard([&] {
        require(out);
        *out = new tfres_circuit{tfres::clifford_map_circuit(n_sites)};
    });
}

tfres_status tfres_circuit_random(int n_sites, int length, uint64_t seed, tfres_circuit** out) {
    return guard([&] {
        require(out);
        std::mt19937_64 rng(seed);
        *out = new tfres_circuit{tfres::random_clifford_circuit(n_sites, length, rng)};
    });
}

tfres_status tfres_circuit_from_json(const char* text, tfres_circuit** out) {
    return guard([&] {
        require(text, out);
        *out = new tfres_circuit{tfres::circuit_from_json(text)};
    });
}

tfres_status tfres_circuit_to_json(const tfres_circuit* circuit, char** out) {
    return guard([&] {
        require(circuit, out);
        *out = duplicate(tfres::to_json(circuit->value));
    });
}

size_t tfres_circuit_length(const tfres_circuit* circuit) { return circuit ? circuit->value.gates.size() : 0; }

tfres_status tfres_circuit_apply(const tfres_circuit* circuit, const tfres_state* state, tfres_state** out) {
    return guard([&] {
        require(circuit, state, out);
        *out = new tfres_state{tfres::apply_circuit(circuit->value, state->value)};
    });
}

void tfres_circuit_free(tfres_circuit* circuit) { delete circuit; }

tfres_status tfres_sweep_run(const char* plan_text, char** out, size_t* failed_rows) {
    return guard([&] {
        require(plan_text, out);
        const auto plan = tfres::SweepPlan::parse(plan_text);
        const auto table = tfres::run_sweep(plan);
        if (failed_rows) {
            const std::size_t sc = table.column("status");
            *failed_rows = 0;
            for (const auto& row : table.rows) {
                if (row[sc] != "ok" && row[sc] != "not_found") ++*failed_rows;
            }
        }
        *out = duplicate(tfres::render(table, plan));
    });
}

tfres_status tfres_fit_power_law(const double* x, const double* y, size_t count, tfres_power_law* out) {
    return guard([&] {
        require(x, y, out);
        std::vector<std::pair<double, double>> points;
        for (size_t i = 0; i < count; ++i) points.emplace_back(x[i], y[i]);
        const auto fit = tfres::fit_power_law(points);
        *out = {fit.a, fit.b, fit.stderr_b, fit.r2, fit.points};
    });
}

tfres_status tfres_fit_table(const char* csv_text, const char* x_column, const char* y_column,
                             tfres_power_law* out) {
    return guard([&] {
        require(csv_text, x_column, y_column, out);
        const auto table = tfres::parse_csv(csv_text);
        const std::size_t xc = table.column(x_column);
        const std::size_t yc = table.column(y_column);
        std::optional<std::size_t> sc;
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (table.columns[i] == "status") sc = i;
        }
        std::vector<std::pair<double, double>> points;
        for (const auto& row : table.rows) {
            if (sc && row[*sc] != "ok") continue;
            points.emplace_back(tfres::parse_double(row[xc], x_column), tfres::parse_double(row[yc], y_column));
        }
        const auto fit = tfres::fit_power_law(points);
        *out = {fit.a, fit.b, fit.stderr_b, fit.r2, fit.points};
    });
}

tfres_status tfres_verify(const char* suite, uint64_t seed, int with_timestamp, char** report_json, int* passed) {
    return guard([&] {
        require(suite, report_json);
        const auto report = tfres::run_verify(tfres::parse_verify_suite(suite), seed);
        *report_json = duplicate(
            tfres::to_json(report, with_timestamp ? std::optional(tfres::iso_timestamp()) : std::nullopt));
        if (passed) *passed = report.passed() ? 1 : 0;
    });
}

tfres_status tfres_plot(const char* csv_text, const tfres_axes* axes, char** svg) {
    return guard([&] {
        require(csv_text, axes, svg, axes->x, axes->y);
        tfres::AxesSpec spec;
        spec.x = axes->x;
        spec.y = axes->y;
        if (axes->group) spec.group = std::string(axes->group);
        spec.log_x = axes->log_x != 0;
        spec.log_y = axes->log_y != 0;
        if (axes->has_hline) spec.hline = axes->hline;
        if (axes->hline_label) spec.hline_label = axes->hline_label;
        if (axes->title) spec.title = axes->title;
        *svg = duplicate(tfres::emit_plot(tfres::parse_csv(csv_text), spec));
    });
}

}  // extern "C"
