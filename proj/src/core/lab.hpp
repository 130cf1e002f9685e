#pragma once

// Batch driver: sweep plans, result tables, power-law fits.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/eigensolver.hpp"
#include "core/keyvalue.hpp"
#include "core/model.hpp"

namespace tfres {

enum class Quantity { energy_spectrum, ee, dee, sre, r2, transition };
enum class StateSource { ground, omega, w, ghz };

std::string_view to_string(Quantity q);
std::string_view to_string(StateSource s);
Quantity parse_quantity(std::string_view text);
StateSource parse_state_source(std::string_view text);

inline constexpr std::uint64_t kDefaultMemBudget = std::uint64_t{4} << 30;
inline constexpr int kDefaultSreMaxSites = 13;

struct SweepPlan {
    Quantity quantity = Quantity::energy_spectrum;
    std::vector<int> n_values;
    std::vector<double> h_values{0.0};
    std::vector<std::array<double, 3>> j_values{{1.0, 0.0, 0.0}};
    Boundary boundary = Boundary::periodic;

    StateSource source = StateSource::ground;
    int momentum_index = 0;
    int levels = 4;             // energy_spectrum
    std::optional<int> subsystem;  // ee: sites 1..L, default floor(N/2)
    double alpha = 1.0;         // ee (von Neumann by default)
    double dee_alpha = 2.0;
    // dee: preset "quarter" (m, l, r) = ((N-1)/2, (N-1)/8, (N-1)/4) unless
    // explicit site counts are given.
    std::optional<std::array<int, 3>> dee_sites;
    bool allow_rounding = false;
    int q = 2;                  // sre
    int sre_max_sites = kDefaultSreMaxSites;
    double h_lo = 0.0;          // transition
    double h_hi = 1.0;
    double resolution = 1e-3;
    double jump_delta = 1e-2;

    std::string output;         // empty: caller handles the table
    bool json = false;          // output format, CSV otherwise
    std::uint64_t seed = SolverOptions{}.seed;
    unsigned threads = 0;       // 0: current budget
    std::uint64_t mem_budget = kDefaultMemBudget;
    bool timestamp = true;
    int lanczos_max_sites = SolverOptions{}.lanczos_max_sites;

    // Flat key-value plan; grid.n / grid.h / grid.j may repeat and each value
    // may be a comma list (grid.j takes "jx,jy,jz" triples).
    static SweepPlan parse(std::string_view text);
    static SweepPlan load(const std::string& path);

    // Throws UsageError (or DomainError) for the first invalid grid point.
    void validate() const;
    std::size_t size() const;
    ModelSpec point(std::size_t index) const;
    SolverOptions solver_options() const;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;  // UsageError if absent
    std::vector<double> numeric_column(std::string_view name) const;
};

std::string to_csv(const Table& table, const std::optional<std::string>& timestamp_line = std::nullopt);
std::string to_json(const Table& table);
// Accepts the CSV written by to_csv; '#' lines are skipped.
Table parse_csv(std::string_view text);
Table load_csv(const std::string& path);

// Column layout for a quantity.
std::vector<std::string> table_columns(Quantity quantity);

// One row per grid point, in grid order. Per-point failures are recorded in
// the status column. If plan.output is set, the file is opened before any
// compute (IoError if unwritable) and the rendered table is written there.
Table run_sweep(const SweepPlan& plan);
// CSV (with the timestamp line when plan.timestamp) or JSON, per the plan.
std::string render(const Table& table, const SweepPlan& plan);

// Estimated peak bytes of one grid point.
std::uint64_t estimate_job_bytes(const SweepPlan& plan, int n_sites);

struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;
    double stderr_b = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

// Least squares of log y on log x.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

// Same N and h with the J_x coupling reversed (the reference chain for the
// frustration corrections).
ModelSpec unfrustrated_counterpart(const ModelSpec& spec);

std::string format_number(double value);
std::string iso_timestamp();
std::string timestamp_line();

}  // namespace tfres
