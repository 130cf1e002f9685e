#include "core/lab.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "core/entanglement.hpp"
#include "core/error.hpp"
#include "core/magic.hpp"
#include "core/parallel.hpp"
#include "core/reference_states.hpp"

namespace tfres {
namespace {

using Row = std::vector<std::string>;

template <class Enum, std::size_t K>
Enum parse_enum(std::string_view text, const std::array<Enum, K>& values, std::string_view what) {
    for (Enum v : values) {
        if (to_string(v) == text) return v;
    }
    throw UsageError("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
    std::uint64_t value = 0;
    const auto t = trim(text);
    int base = 10;
    std::string_view digits = t;
    if (digits.starts_with("0x") || digits.starts_with("0X")) {
        base = 16;
        digits.remove_prefix(2);
    }
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
        throw UsageError("invalid " + std::string(what) + " '" + t + "'");
    }
    return value;
}

bool parse_bool(std::string_view text, std::string_view what) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw UsageError("invalid " + std::string(what) + " '" + t + "'");
}

std::string csv_field(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string status_of(const std::exception& e) {
    std::string kind = "error";
    if (dynamic_cast<const DomainError*>(&e)) kind = "domain";
    else if (dynamic_cast<const ContractError*>(&e)) kind = "contract";
    else if (dynamic_cast<const ConvergenceError*>(&e)) kind = "convergence";
    else if (dynamic_cast<const ResourceError*>(&e)) kind = "resource";
    else if (dynamic_cast<const UsageError*>(&e)) kind = "usage";
    return kind + ": " + e.what();
}

std::string fmt(double v) { return format_number(v); }
std::string fmt(int v) { return std::to_string(v); }

// Model parameter cells shared by most layouts.
void put_model(Row& row, const std::vector<std::string>& cols, const ModelSpec& spec) {
    auto set = [&](std::string_view name, std::string value) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (cols[i] == name) row[i] = std::move(value);
        }
    };
    set("N", fmt(spec.n_sites));
    set("jx", fmt(spec.jx));
    set("jy", fmt(spec.jy));
    set("jz", fmt(spec.jz));
    set("h", fmt(spec.h));
    set("boundary", std::string(to_string(spec.boundary)));
}

class RowBuilder {
public:
    explicit RowBuilder(Quantity q) : cols_(table_columns(q)), row_(cols_.size()) {}
    void set(std::string_view name, std::string value) {
        for (std::size_t i = 0; i < cols_.size(); ++i) {
            if (cols_[i] == name) {
                row_[i] = std::move(value);
                return;
            }
        }
        throw ContractError("no column " + std::string(name));
    }
    void model(const ModelSpec& spec) { put_model(row_, cols_, spec); }
    Row take() { return std::move(row_); }

private:
    std::vector<std::string> cols_;
    Row row_;
};

StateVector analytic_state(StateSource source, int n, int ell) {
    switch (source) {
        case StateSource::omega: return omega_state(n, ell);
        case StateSource::w: return w_state(n, ell);
        case StateSource::ghz: return ghz_state(n);
        case StateSource::ground: break;
    }
    throw ContractError("ground state is not analytic");
}

// The state a row is evaluated on, with the momentum label it carries.
std::pair<StateVector, int> source_state(const SweepPlan& plan, const ModelSpec& spec) {
    if (plan.source != StateSource::ground) {
        return {analytic_state(plan.source, spec.n_sites, plan.momentum_index),
                plan.source == StateSource::ghz ? 0 : plan.momentum_index};
    }
    const auto gm = ground_multiplet(Hamiltonian(spec), plan.solver_options());
    const int ell = gm.sector_labels[0] ? gm.sector_labels[0]->momentum_index : 0;
    return {gm.states[0], ell};
}

DisconnectedGeometry plan_geometry(const SweepPlan& plan, int n) {
    if (plan.dee_sites) {
        const auto& s = *plan.dee_sites;
        return DisconnectedGeometry::from_sites(n, s[0], s[1], s[2]);
    }
    return DisconnectedGeometry::preset_quarter(n, plan.allow_rounding);
}

Row spectrum_row(const SweepPlan& plan, const ModelSpec& spec) {
    RowBuilder r(Quantity::energy_spectrum);
    r.model(spec);
    r.set("frustrated", spec.is_topologically_frustrated() ? "1" : "0");
    r.set("levels", fmt(plan.levels));
    auto bundle = solve_lowest(Hamiltonian(spec), plan.levels, plan.solver_options());
    std::vector<std::string> energies;
    for (double e : bundle.energies) energies.push_back(fmt(e));
    r.set("energies", join(energies, ';'));
    r.set("degeneracy", fmt(static_cast<int>(bundle.degeneracy_groups.front().size())));
    std::string momenta;
    if (spec.boundary == Boundary::periodic) {
        try {
            bundle = resolve_momentum(bundle, 0);
            std::vector<std::string> labels;
            for (std::size_t i : bundle.degeneracy_groups.front()) {
                if (bundle.sector_labels[i]) labels.push_back(fmt(bundle.sector_labels[i]->momentum_index));
            }
            momenta = join(labels, ';');
        } catch (const ContractError&) {
            // Ground group cut by the level count; leave the labels blank.
        }
    }
    r.set("ground_momenta", momenta);
    r.set("method", bundle.method);
    r.set("status", "ok");
    return r.take();
}

Row ee_row(const SweepPlan& plan, const ModelSpec& spec) {
    RowBuilder r(Quantity::ee);
    r.model(spec);
    const int n = spec.n_sites;
    const int length = plan.subsystem.value_or(n / 2);
    r.set("source", std::string(to_string(plan.source)));
    r.set("subsystem", fmt(length));
    r.set("alpha", fmt(plan.alpha));
    const auto [state, ell] = source_state(plan, spec);
    r.set("momentum_index", fmt(ell));
    const PartitionSpec part = PartitionSpec::contiguous(n, 1, length);
    const double value = subsystem_entropy(state, part, plan.alpha);
    r.set("value", fmt(value));
    const double m = static_cast<double>(length) / n;
    std::optional<double> oracle;
    if (plan.alpha == 1.0) {
        if (plan.source == StateSource::omega && ell == 0) {
            oracle = tf_entropy_oracle(m);
        } else if (plan.source == StateSource::ground && spec.is_topologically_frustrated()) {
            const auto nf = ground_multiplet(Hamiltonian(unfrustrated_counterpart(spec)), plan.solver_options());
            oracle = tf_phase_entropy(subsystem_entropy(nf.states[0], part, 1.0), m);
        }
    }
    if (oracle) {
        r.set("oracle", fmt(*oracle));
        r.set("delta", fmt(std::abs(value - *oracle)));
    }
    r.set("status", "ok");
    return r.take();
}

Row dee_row(const SweepPlan& plan, const ModelSpec& spec) {
    RowBuilder r(Quantity::dee);
    r.model(spec);
    const auto geom = plan_geometry(plan, spec.n_sites);
    r.set("source", std::string(to_string(plan.source)));
    r.set("m", fmt(geom.m_sites));
    r.set("l", fmt(geom.l_sites));
    r.set("r", fmt(geom.r_sites));
    r.set("alpha", fmt(plan.dee_alpha));
    const auto [state, ell] = source_state(plan, spec);
    (void)ell;
    const double value = disconnected_entropy(state, geom, plan.dee_alpha);
    const double oracle = dee_oracle(geom.m_frac, geom.l_frac);
    r.set("value", fmt(value));
    r.set("oracle", fmt(oracle));
    r.set("normalized", fmt(value / oracle));
    r.set("delta", fmt(std::abs(value - oracle)));
    r.set("status", "ok");
    return r.take();
}

Row sre_row(const SweepPlan& plan, const ModelSpec& spec) {
    RowBuilder r(Quantity::sre);
    r.model(spec);
    r.set("q", fmt(plan.q));
    const auto start = std::chrono::steady_clock::now();
    double value = 0.0;
    int ell = 0;
    if (plan.source == StateSource::ground) {
        const auto g = ground_state_sre(spec, plan.q, plan.solver_options(), plan.sre_max_sites);
        value = g.value;
        ell = g.labels.empty() ? 0 : g.labels.front().momentum_index;
    } else {
        const auto [state, label] = source_state(plan, spec);
        value = sre(state, plan.q, plan.sre_max_sites).value;
        ell = label;
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.set("momentum_index", fmt(ell));
    r.set("sre_bits", fmt(value));
    r.set("method", std::string(to_string(SreMethod::fast_transform)));
    r.set("wall_time_s", plan.timestamp ? fmt(elapsed) : "0");
    r.set("status", "ok");
    return r.take();
}

Row r2_row(const SweepPlan& plan, const ModelSpec& spec) {
    RowBuilder r(Quantity::r2);
    r.model(spec);
    const auto opts = plan.solver_options();
    const auto tf = ground_state_sre(spec, 2, opts, plan.sre_max_sites);
    const auto nf = ground_state_sre(unfrustrated_counterpart(spec), 2, opts, plan.sre_max_sites);
    const double excitation = w_sre_oracle(spec.n_sites, tf.momentum_index);
    r.set("momentum_index", fmt(tf.momentum_index));
    r.set("m2_tf", fmt(tf.value));
    r.set("m2_nf", fmt(nf.value));
    r.set("m2_excitation", fmt(excitation));
    r.set("r2", fmt(relative_sre_correction(tf.value, nf.value, spec.n_sites, tf.momentum_index)));
    r.set("status", "ok");
    return r.take();
}

Row transition_row(const SweepPlan& plan, const ModelSpec& spec) {
    RowBuilder r(Quantity::transition);
    r.model(spec);
    r.set("h_lo", fmt(plan.h_lo));
    r.set("h_hi", fmt(plan.h_hi));
    r.set("resolution", fmt(plan.resolution));
    r.set("delta", fmt(plan.jump_delta));
    r.set("extra_magic", fmt(extra_magic(spec.n_sites)));
    const auto opts = plan.solver_options();
    const auto h_star = detect_transition_h(spec, plan.h_lo, plan.h_hi, plan.resolution, opts);
    if (!h_star) {
        r.set("status", "not_found");
        return r.take();
    }
    r.set("h_star", fmt(*h_star));
    const auto jump = sre_jump_at_transition(spec, *h_star, plan.jump_delta, opts);
    if (!jump) {
        r.set("status", "not_found");
        return r.take();
    }
    r.set("m2_below", fmt(jump->below));
    r.set("m2_above", fmt(jump->above));
    r.set("jump", fmt(jump->jump));
    r.set("momentum_index", fmt(jump->momentum_index));
    r.set("status", "ok");
    return r.take();
}

Row compute_row(const SweepPlan& plan, std::size_t index) {
    const ModelSpec spec = plan.point(index);
    try {
        switch (plan.quantity) {
            case Quantity::energy_spectrum: return spectrum_row(plan, spec);
            case Quantity::ee: return ee_row(plan, spec);
            case Quantity::dee: return dee_row(plan, spec);
            case Quantity::sre: return sre_row(plan, spec);
            case Quantity::r2: return r2_row(plan, spec);
            case Quantity::transition: return transition_row(plan, spec);
        }
        throw ContractError("unhandled quantity");
    } catch (const std::exception& e) {
        RowBuilder r(plan.quantity);
        r.model(spec);
        r.set("status", status_of(e));
        return r.take();
    }
}

Row resource_row(const SweepPlan& plan, std::size_t index, std::uint64_t need) {
    RowBuilder r(plan.quantity);
    r.model(plan.point(index));
    r.set("status", "resource: estimated " + std::to_string(need) + " bytes exceeds the memory budget of " +
                        std::to_string(plan.mem_budget));
    return r.take();
}

}  // namespace

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::energy_spectrum: return "energy_spectrum";
        case Quantity::ee: return "ee";
        case Quantity::dee: return "dee";
        case Quantity::sre: return "sre";
        case Quantity::r2: return "r2";
        case Quantity::transition: return "transition";
    }
    return "?";
}

std::string_view to_string(StateSource s) {
    switch (s) {
        case StateSource::ground: return "ground";
        case StateSource::omega: return "omega";
        case StateSource::w: return "w";
        case StateSource::ghz: return "ghz";
    }
    return "?";
}

Quantity parse_quantity(std::string_view text) {
    static constexpr std::array all{Quantity::energy_spectrum, Quantity::ee, Quantity::dee,
                                    Quantity::sre,             Quantity::r2, Quantity::transition};
    return parse_enum(trim(text), all, "quantity");
}

StateSource parse_state_source(std::string_view text) {
    static constexpr std::array all{StateSource::ground, StateSource::omega, StateSource::w, StateSource::ghz};
    return parse_enum(trim(text), all, "state source");
}

SweepPlan SweepPlan::parse(std::string_view text) {
    const auto kv = KeyValueFile::parse(text);
    static const std::vector<std::string> known{
        "quantity", "grid.n", "grid.h", "grid.j", "boundary", "state", "momentum", "levels", "subsystem",
        "alpha", "dee.alpha", "dee.m", "dee.l", "dee.r", "allow_rounding", "q", "sre_max_sites", "h_lo",
        "h_hi", "resolution", "delta", "output", "format", "seed", "threads", "mem_budget", "timestamp",
        "lanczos_max_sites"};
    for (const auto& [key, value] : kv.entries) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw UsageError("unknown plan key '" + key + "'");
        }
    }
    SweepPlan plan;
    plan.quantity = parse_quantity(kv.get("quantity"));
    for (const auto& v : kv.all("grid.n")) {
        for (const auto& item : split(v, ',')) plan.n_values.push_back(parse_int(item, "grid.n"));
    }
    if (kv.has("grid.h")) {
        plan.h_values.clear();
        for (const auto& v : kv.all("grid.h")) {
            for (const auto& item : split(v, ',')) plan.h_values.push_back(parse_double(item, "grid.h"));
        }
    }
    if (kv.has("grid.j")) {
        plan.j_values.clear();
        for (const auto& v : kv.all("grid.j")) {
            const auto items = split(v, ',');
            if (items.size() != 3) throw UsageError("grid.j takes jx,jy,jz triples, got '" + v + "'");
            plan.j_values.push_back({parse_double(items[0], "jx"), parse_double(items[1], "jy"),
                                     parse_double(items[2], "jz")});
        }
    }
    if (kv.has("boundary")) plan.boundary = parse_boundary(kv.get("boundary"));
    if (kv.has("state")) plan.source = parse_state_source(kv.get("state"));
    if (kv.has("momentum")) plan.momentum_index = kv.get_int("momentum");
    if (kv.has("levels")) plan.levels = kv.get_int("levels");
    if (kv.has("subsystem")) plan.subsystem = kv.get_int("subsystem");
    if (kv.has("alpha")) plan.alpha = kv.get_double("alpha");
    if (kv.has("dee.alpha")) plan.dee_alpha = kv.get_double("dee.alpha");
    const int dee_keys = kv.has("dee.m") + kv.has("dee.l") + kv.has("dee.r");
    if (dee_keys == 3) {
        plan.dee_sites = std::array{kv.get_int("dee.m"), kv.get_int("dee.l"), kv.get_int("dee.r")};
    } else if (dee_keys != 0) {
        throw UsageError("dee.m, dee.l and dee.r must be given together");
    }
    if (kv.has("allow_rounding")) plan.allow_rounding = parse_bool(kv.get("allow_rounding"), "allow_rounding");
    if (kv.has("q")) plan.q = kv.get_int("q");
    if (kv.has("sre_max_sites")) plan.sre_max_sites = kv.get_int("sre_max_sites");
    if (kv.has("h_lo")) plan.h_lo = kv.get_double("h_lo");
    if (kv.has("h_hi")) plan.h_hi = kv.get_double("h_hi");
    if (kv.has("resolution")) plan.resolution = kv.get_double("resolution");
    if (kv.has("delta")) plan.jump_delta = kv.get_double("delta");
    if (kv.has("output")) plan.output = kv.get("output");
    if (kv.has("format")) {
        const auto format = trim(kv.get("format"));
        if (format != "csv" && format != "json") throw UsageError("format must be csv or json");
        plan.json = format == "json";
    }
    if (kv.has("seed")) plan.seed = parse_u64(kv.get("seed"), "seed");
    if (kv.has("threads")) plan.threads = static_cast<unsigned>(parse_u64(kv.get("threads"), "threads"));
    if (kv.has("mem_budget")) plan.mem_budget = parse_u64(kv.get("mem_budget"), "mem_budget");
    if (kv.has("timestamp")) plan.timestamp = parse_bool(kv.get("timestamp"), "timestamp");
    if (kv.has("lanczos_max_sites")) plan.lanczos_max_sites = kv.get_int("lanczos_max_sites");
    return plan;
}

SweepPlan SweepPlan::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read plan file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::size_t SweepPlan::size() const {
    const std::size_t h_count = quantity == Quantity::transition ? 1 : h_values.size();
    return n_values.size() * j_values.size() * h_count;
}

ModelSpec SweepPlan::point(std::size_t index) const {
    const std::size_t h_count = quantity == Quantity::transition ? 1 : h_values.size();
    const std::size_t hi = index % h_count;
    const std::size_t ji = (index / h_count) % j_values.size();
    const std::size_t ni = index / (h_count * j_values.size());
    ModelSpec spec;
    spec.n_sites = n_values.at(ni);
    spec.jx = j_values[ji][0];
    spec.jy = j_values[ji][1];
    spec.jz = j_values[ji][2];
    spec.h = quantity == Quantity::transition ? 0.0 : h_values[hi];
    spec.boundary = boundary;
    return spec;
}

SolverOptions SweepPlan::solver_options() const {
    SolverOptions opts;
    opts.seed = seed;
    opts.lanczos_max_sites = lanczos_max_sites;
    return opts;
}

void SweepPlan::validate() const {
    if (n_values.empty()) throw UsageError("plan grid has no N values");
    if (h_values.empty() && quantity != Quantity::transition) throw UsageError("plan grid has no h values");
    if (j_values.empty()) throw UsageError("plan grid has no J triples");
    if (mem_budget == 0) throw UsageError("memory budget must be positive");
    for (std::size_t i = 0; i < size(); ++i) {
        const ModelSpec spec = point(i);
        const std::string where = " (grid point " + std::to_string(i) + ", N=" + std::to_string(spec.n_sites) + ")";
        const int n = spec.n_sites;
        if (n < 2 || n > kMaxSites) throw UsageError("chain length out of range" + where);
        for (double v : {spec.jx, spec.jy, spec.jz, spec.h}) {
            if (!std::isfinite(v)) throw UsageError("non-finite model parameter" + where);
        }
        const bool needs_ground = source == StateSource::ground || quantity == Quantity::energy_spectrum ||
                                  quantity == Quantity::r2 || quantity == Quantity::transition;
        if (needs_ground && n > lanczos_max_sites) {
            throw UsageError("N above the eigensolver cap of " + std::to_string(lanczos_max_sites) + where);
        }
        if (quantity != Quantity::energy_spectrum && quantity != Quantity::transition &&
            quantity != Quantity::r2 && source != StateSource::ground) {
            if (source != StateSource::ghz) {
                if (n % 2 == 0 && source == StateSource::omega) throw UsageError("omega states need odd N" + where);
                if (momentum_index < min_momentum_index(n) || momentum_index > max_momentum_index(n)) {
                    throw UsageError("momentum index outside the quantized range" + where);
                }
            }
        }
        switch (quantity) {
            case Quantity::energy_spectrum:
                if (levels < 1) throw UsageError("levels must be >= 1");
                break;
            case Quantity::ee: {
                const int length = subsystem.value_or(n / 2);
                if (length < 1 || length >= n) throw UsageError("subsystem length outside [1, N-1]" + where);
                if (!(alpha > 0.0)) throw UsageError("alpha must be positive");
                break;
            }
            case Quantity::dee:
                try {
                    plan_geometry(*this, n);
                } catch (const DomainError& e) {
                    throw UsageError(std::string(e.what()) + where);
                }
                if (!(dee_alpha > 0.0)) throw UsageError("dee.alpha must be positive");
                break;
            case Quantity::sre:
                if (q < 2) throw UsageError("q must be >= 2");
                if (n > sre_max_sites) {
                    throw UsageError("N above the SRE cap of " + std::to_string(sre_max_sites) + where);
                }
                break;
            case Quantity::r2:
                if (spec.boundary != Boundary::periodic || n % 2 == 0) {
                    throw UsageError("r2 needs a periodic ring with odd N" + where);
                }
                if (n > sre_max_sites) {
                    throw UsageError("N above the SRE cap of " + std::to_string(sre_max_sites) + where);
                }
                break;
            case Quantity::transition:
                if (spec.boundary != Boundary::periodic) throw UsageError("transition needs a periodic ring" + where);
                if (spec.jz < -spec.jy) throw UsageError("transition expects J_z >= -J_y" + where);
                if (!(h_lo < h_hi) || !(resolution > 0.0) || !(jump_delta > 0.0)) {
                    throw UsageError("transition needs h_lo < h_hi and positive resolution and delta");
                }
                if (n > sre_max_sites) {
                    throw UsageError("N above the SRE cap of " + std::to_string(sre_max_sites) + where);
                }
                break;
        }
    }
}

std::vector<std::string> table_columns(Quantity quantity) {
    switch (quantity) {
        case Quantity::energy_spectrum:
            return {"N", "jx", "jy", "jz", "h", "boundary", "frustrated", "levels", "energies", "degeneracy",
                    "ground_momenta", "method", "status"};
        case Quantity::ee:
            return {"N", "h", "jx", "jy", "jz", "boundary", "source", "momentum_index", "subsystem", "alpha",
                    "value", "oracle", "delta", "status"};
        case Quantity::dee:
            return {"N", "h", "jx", "jy", "jz", "source", "m", "l", "r", "alpha", "value", "oracle", "normalized",
                    "delta", "status"};
        case Quantity::sre:
            return {"N", "jx", "jy", "jz", "h", "boundary", "momentum_index", "q", "sre_bits", "method",
                    "wall_time_s", "status"};
        case Quantity::r2:
            return {"N", "jx", "jy", "jz", "h", "momentum_index", "m2_tf", "m2_nf", "m2_excitation", "r2",
                    "status"};
        case Quantity::transition:
            return {"N",       "jx",       "jy",       "jz",   "h_lo",           "h_hi",        "resolution",
                    "h_star",  "delta",    "m2_below", "m2_above", "jump", "momentum_index", "extra_magic",
                    "status"};
    }
    return {};
}

std::uint64_t estimate_job_bytes(const SweepPlan& plan, int n_sites) {
    const double dim = std::ldexp(1.0, n_sites);
    const double amp = 16.0 * dim;
    double bytes = 4.0 * amp;
    const bool needs_ground = plan.source == StateSource::ground || plan.quantity == Quantity::energy_spectrum ||
                              plan.quantity == Quantity::r2 || plan.quantity == Quantity::transition;
    if (needs_ground) {
        const SolverOptions opts = plan.solver_options();
        if (n_sites <= opts.dense_max_sites) {
            bytes += 16.0 * dim * dim;
        } else {
            bytes += std::min(8.0 * dim * (opts.max_krylov + 2.0 * plan.levels + 8.0), 1.5e9);
        }
        bytes += amp * std::max(plan.levels, 4);
    }
    if (plan.quantity == Quantity::sre || plan.quantity == Quantity::r2 || plan.quantity == Quantity::transition) {
        bytes += amp * std::max(1u, parallel::thread_budget());
    }
    return static_cast<std::uint64_t>(bytes);
}

Table run_sweep(const SweepPlan& plan) {
    plan.validate();
    std::ofstream out;
    if (!plan.output.empty()) {
        out.open(plan.output, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + plan.output);
    }

    const std::size_t count = plan.size();
    std::vector<Row> rows(count);
    const unsigned budget = std::max(1u, plan.threads ? plan.threads : parallel::thread_budget());
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(budget, count));
    const unsigned inner = std::max(1u, budget / std::max(1u, workers));

    std::mutex mutex;
    std::condition_variable cv;
    std::size_t next = 0;
    std::uint64_t in_use = 0;

    auto work = [&] {
        parallel::ScopedThreadBudget scope(inner);
        for (;;) {
            std::size_t index = 0;
            std::uint64_t need = 0;
            {
                std::unique_lock lock(mutex);
                if (next >= count) return;
                index = next++;
                need = estimate_job_bytes(plan, plan.point(index).n_sites);
                if (need > plan.mem_budget) {
                    rows[index] = resource_row(plan, index, need);
                    continue;
                }
                cv.wait(lock, [&] { return in_use + need <= plan.mem_budget; });
                in_use += need;
            }
            rows[index] = compute_row(plan, index);
            {
                std::lock_guard lock(mutex);
                in_use -= need;
            }
            cv.notify_all();
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    Table table{table_columns(plan.quantity), std::move(rows)};
    if (out.is_open()) {
        out << render(table, plan);
        if (!out) throw IoError("failed writing " + plan.output);
    }
    return table;
}

std::string render(const Table& table, const SweepPlan& plan) {
    if (plan.json) return to_json(table);
    return to_csv(table, plan.timestamp ? std::optional(timestamp_line()) : std::nullopt);
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw UsageError("unknown column '" + std::string(name) + "'");
}

std::vector<double> Table::numeric_column(std::string_view name) const {
    const std::size_t c = column(name);
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& row : rows) {
        const std::string& cell = c < row.size() ? row[c] : std::string();
        values.push_back(cell.empty() ? std::nan("") : parse_double(cell, name));
    }
    return values;
}

std::string to_csv(const Table& table, const std::optional<std::string>& timestamp) {
    std::string out;
    if (timestamp) out += *timestamp + '\n';
    std::vector<std::string> cells;
    for (const auto& c : table.columns) cells.push_back(csv_field(c));
    out += join(cells, ',') + '\n';
    for (const auto& row : table.rows) {
        cells.clear();
        for (const auto& c : row) cells.push_back(csv_field(c));
        out += join(cells, ',') + '\n';
    }
    return out;
}

std::string to_json(const Table& table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            const std::string& cell = i < row.size() ? row[i] : std::string();
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty()) {
                obj[table.columns[i]] = nullptr;
            } else if (ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(value)) {
                const bool integral = cell.find_first_of(".eEn") == std::string::npos && std::abs(value) < 9e15;
                if (integral) {
                    obj[table.columns[i]] = static_cast<std::int64_t>(value);
                } else {
                    obj[table.columns[i]] = value;
                }
            } else {
                obj[table.columns[i]] = cell;
            }
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + '\n';
}

Table parse_csv(std::string_view text) {
    Table table;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        if (text[pos] == '#') {
            const auto eol = text.find('\n', pos);
            pos = eol == std::string_view::npos ? text.size() : eol + 1;
            continue;
        }
        Row row;
        std::string cell;
        bool quoted = false;
        for (; pos < text.size(); ++pos) {
            const char c = text[pos];
            if (quoted) {
                if (c == '"') {
                    if (pos + 1 < text.size() && text[pos + 1] == '"') {
                        cell += '"';
                        ++pos;
                    } else {
                        quoted = false;
                    }
                } else {
                    cell += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.push_back(std::move(cell));
                cell.clear();
            } else if (c == '\n') {
                ++pos;
                break;
            } else if (c != '\r') {
                cell += c;
            }
        }
        if (quoted) throw UsageError("unterminated quote in CSV");
        row.push_back(std::move(cell));
        if (row.size() == 1 && row[0].empty()) continue;
        if (header) {
            table.columns = std::move(row);
            header = false;
        } else {
            if (row.size() != table.columns.size()) {
                throw UsageError("CSV row " + std::to_string(table.rows.size() + 1) + " has " +
                                 std::to_string(row.size()) + " cells, header has " +
                                 std::to_string(table.columns.size()));
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

Table load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DomainError("power-law fit needs at least 3 points");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [x, y] = points[i];
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw DomainError("row " + std::to_string(i) + " (x=" + format_number(x) +
                              ") has non-positive value " + format_number(y));
        }
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw DomainError("row " + std::to_string(i) + " has non-positive abscissa " + format_number(x));
        }
        xs.push_back(std::log(x));
        ys.push_back(std::log(y));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("power-law fit needs at least two distinct abscissae");
    PowerLawFit fit;
    fit.points = xs.size();
    fit.b = sxy / sxx;
    fit.a = std::exp(my - fit.b * mx);
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double resid = ys[i] - (my + fit.b * (xs[i] - mx));
        sse += resid * resid;
    }
    fit.stderr_b = std::sqrt(sse / (n - 2.0) / sxx);
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

ModelSpec unfrustrated_counterpart(const ModelSpec& spec) {
    ModelSpec nf = spec;
    nf.jx = -spec.jx;
    return nf;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string timestamp_line() { return "# generated " + iso_timestamp(); }

}  // namespace tfres
