// Command-line front end. Talks to the library only through the C API.

#include <tfres/tfres.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

enum Exit { kPass = 0, kUsage = 1, kCompute = 2, kVerifyFailed = 3 };

struct Failure {
    int code;
    std::string message;
};

void check(tfres_status status) {
    if (status == TFRES_OK) return;
    throw Failure{status == TFRES_ERR_USAGE ? kUsage : kCompute,
                  std::string(tfres_status_name(status)) + ": " + tfres_last_error()};
}

struct CString {
    char* ptr = nullptr;
    ~CString() { tfres_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

struct StateDeleter {
    void operator()(tfres_state* s) const { tfres_state_free(s); }
};
using StatePtr = std::unique_ptr<tfres_state, StateDeleter>;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kCompute, "io: cannot read " + path};
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) throw Failure{kCompute, "io: cannot write " + path};
}

// Accepts plain bytes or a K/M/G suffix (powers of 1024).
std::uint64_t parse_bytes(const std::string& text) {
    if (text.empty()) throw Failure{kUsage, "empty memory budget"};
    std::uint64_t scale = 1;
    std::string digits = text;
    switch (text.back()) {
        case 'K': case 'k': scale = 1ull << 10; digits.pop_back(); break;
        case 'M': case 'm': scale = 1ull << 20; digits.pop_back(); break;
        case 'G': case 'g': scale = 1ull << 30; digits.pop_back(); break;
        default: break;
    }
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(digits, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != digits.size() || value == 0) throw Failure{kUsage, "invalid memory budget '" + text + "'"};
    return value * scale;
}

template <class T>
std::string list(const std::vector<T>& values) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    return out.str();
}

std::string num(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

struct Globals {
    std::vector<int> n;
    double jx = 1.0;
    double jy = 0.0;
    double jz = 0.0;
    std::vector<double> h{0.0};
    std::string boundary = "periodic";
    unsigned threads = 0;
    std::string mem_budget;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
    bool no_timestamp = false;
    bool allow_rounding = false;
    int lanczos_max_sites = 20;
    int sre_max_sites = 13;
};

struct StateChoice {
    std::string kind = "ground";
    int ell = 0;
};

// Builds the key-value plan for a single subcommand run.
class PlanText {
public:
    PlanText(const Globals& g, const std::string& quantity) {
        if (g.n.empty()) throw Failure{kUsage, "--n is required"};
        add("quantity", quantity);
        add("grid.n", list(g.n));
        add("grid.h", list(g.h));
        add("grid.j", num(g.jx) + "," + num(g.jy) + "," + num(g.jz));
        add("boundary", g.boundary);
        add("format", g.format);
        add("timestamp", g.no_timestamp ? "false" : "true");
        add("allow_rounding", g.allow_rounding ? "true" : "false");
        add("lanczos_max_sites", std::to_string(g.lanczos_max_sites));
        add("sre_max_sites", std::to_string(g.sre_max_sites));
        if (g.threads) add("threads", std::to_string(g.threads));
        if (!g.mem_budget.empty()) add("mem_budget", std::to_string(parse_bytes(g.mem_budget)));
        if (g.seed) add("seed", std::to_string(*g.seed));
        if (!g.out.empty()) add("output", g.out);
    }
    void add(const std::string& key, const std::string& value) { text_ += key + " = " + value + "\n"; }
    void state(const StateChoice& s) {
        add("state", s.kind);
        add("momentum", std::to_string(s.ell));
    }
    const std::string& text() const { return text_; }

private:
    std::string text_;
};

int run_plan(const std::string& plan, const std::string& out, bool single) {
    CString rendered;
    std::size_t failed = 0;
    check(tfres_sweep_run(plan.c_str(), &rendered.ptr, &failed));
    if (out.empty()) std::cout << rendered.str();
    if (failed > 0 && single) {
        std::cerr << "tfres: " << failed << " row(s) failed, see the status column\n";
        return kCompute;
    }
    return kPass;
}

tfres_state_kind state_kind(const std::string& kind) {
    if (kind == "omega") return TFRES_STATE_OMEGA;
    if (kind == "w") return TFRES_STATE_W;
    if (kind == "ghz") return TFRES_STATE_GHZ;
    if (kind == "neel") return TFRES_STATE_NEEL;
    if (kind == "kink-minus") return TFRES_STATE_KINK_MINUS;
    if (kind == "kink-plus") return TFRES_STATE_KINK_PLUS;
    throw Failure{kUsage, "unknown state kind '" + kind + "'"};
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run_states(const Globals& g, const std::string& kind, int param) {
    if (g.n.size() != 1) throw Failure{kUsage, "states takes a single --n"};
    StatePtr state;
    std::string metadata;
    if (kind == "ground") {
        if (g.h.size() != 1) throw Failure{kUsage, "states takes a single --h"};
        tfres_model_params params{g.n[0], g.jx, g.jy, g.jz, g.h[0], g.boundary == "open" ? 0 : 1};
        if (g.boundary != "open" && g.boundary != "periodic") throw Failure{kUsage, "unknown boundary"};
        tfres_model* model = nullptr;
        check(tfres_model_create(&params, &model));
        std::unique_ptr<tfres_model, void (*)(tfres_model*)> guard(model, tfres_model_free);
        tfres_solver_options opts;
        tfres_solver_options_default(&opts);
        opts.lanczos_max_sites = g.lanczos_max_sites;
        if (g.seed) opts.seed = *g.seed;
        tfres_bundle* bundle = nullptr;
        check(tfres_ground_multiplet(model, &opts, &bundle));
        std::unique_ptr<tfres_bundle, void (*)(tfres_bundle*)> bguard(bundle, tfres_bundle_free);
        CString json;
        check(tfres_bundle_to_json(bundle, &json.ptr));
        metadata = json.str();
        tfres_state* s = nullptr;
        check(tfres_bundle_state(bundle, 0, &s));
        state.reset(s);
    } else {
        tfres_state* s = nullptr;
        check(tfres_state_reference(state_kind(kind), g.n[0], param, &s));
        state.reset(s);
    }

    if (ends_with(g.out, ".tfsv")) {
        check(tfres_state_save(state.get(), g.out.c_str()));
        if (!metadata.empty()) std::cout << metadata;
        return kPass;
    }
    if (g.format == "csv") {
        const std::size_t dim = std::size_t{1} << tfres_state_n_sites(state.get());
        std::vector<double> amps(2 * dim);
        check(tfres_state_amplitudes(state.get(), amps.data(), amps.size()));
        std::ostringstream csv;
        csv.precision(17);
        csv << "index,re,im\n";
        for (std::size_t i = 0; i < dim; ++i) csv << i << ',' << amps[2 * i] << ',' << amps[2 * i + 1] << '\n';
        write_output(g.out, csv.str());
    } else {
        CString json;
        check(tfres_state_to_json(state.get(), &json.ptr));
        write_output(g.out, json.str() + "\n");
    }
    return kPass;
}

int run_fit(const Globals& g, const std::string& input, const std::string& x, const std::string& y) {
    const std::string csv = read_file(input);
    tfres_power_law fit{};
    check(tfres_fit_table(csv.c_str(), x.c_str(), y.c_str(), &fit));
    std::ostringstream out;
    out.precision(17);
    if (g.format == "json") {
        out << "{\"a\": " << fit.a << ", \"b\": " << fit.b << ", \"stderr_b\": " << fit.stderr_b
            << ", \"r2\": " << fit.r2 << ", \"points\": " << fit.points << "}\n";
    } else {
        out << "a,b,stderr_b,r2,points\n" << fit.a << ',' << fit.b << ',' << fit.stderr_b << ',' << fit.r2 << ','
            << fit.points << '\n';
    }
    write_output(g.out, out.str());
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact diagonalization lab for frustrated XYZ rings"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--n", g.n, "Chain length(s), comma separated")->delimiter(',');
    app.add_option("--jx", g.jx, "X coupling")->capture_default_str();
    app.add_option("--jy", g.jy, "Y coupling")->capture_default_str();
    app.add_option("--jz", g.jz, "Z coupling")->capture_default_str();
    app.add_option("--h", g.h, "Transverse field(s), comma separated")->delimiter(',')->capture_default_str();
    app.add_option("--boundary", g.boundary, "periodic or open")
        ->check(CLI::IsMember({"periodic", "open", "pbc", "obc"}))
        ->capture_default_str();
    app.add_option("--threads", g.threads, "Thread budget");
    app.add_option("--mem-budget", g.mem_budget, "Sweep memory budget in bytes (K/M/G suffix allowed)");
    app.add_option("--seed", g.seed, "Seed for random starts and random fixtures");
    app.add_option("--out", g.out, "Output path (stdout when omitted)");
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_flag("--no-timestamp", g.no_timestamp, "Omit timestamps and wall times for byte-stable output");
    app.add_flag("--allow-rounding", g.allow_rounding, "Round DEE preset lengths for N != 1 mod 8");
    app.add_option("--lanczos-max-sites", g.lanczos_max_sites, "Eigensolver size cap")->capture_default_str();
    app.add_option("--sre-max-sites", g.sre_max_sites, "SRE size cap")->capture_default_str();

    auto* spectrum = app.add_subcommand("spectrum", "Lowest levels, degeneracy and ground momenta");
    int levels = 4;
    spectrum->add_option("--levels", levels, "Number of levels")->capture_default_str();

    auto add_state = [](CLI::App* cmd, StateChoice& s) {
        cmd->add_option("--state", s.kind, "ground, omega, w or ghz")
            ->check(CLI::IsMember({"ground", "omega", "w", "ghz"}))
            ->capture_default_str();
        cmd->add_option("--ell", s.ell, "Momentum index for omega and w")->capture_default_str();
    };

    auto* states = app.add_subcommand("states", "Write a reference or ground state (TFSV when --out ends in .tfsv)");
    std::string state_kind_name = "omega";
    int state_param = 0;
    states->add_option("--kind", state_kind_name, "omega, w, ghz, neel, kink-minus, kink-plus or ground")
        ->capture_default_str();
    states->add_option("--param", state_param, "Momentum index (omega, w) or kink position (kink-*)")
        ->capture_default_str();

    auto* ee = app.add_subcommand("ee", "Entanglement entropy of sites 1..L");
    StateChoice ee_state;
    add_state(ee, ee_state);
    std::optional<int> subsystem;
    double ee_alpha = 1.0;
    ee->add_option("--subsystem", subsystem, "L, default floor(N/2)");
    ee->add_option("--alpha", ee_alpha, "Renyi index, 1 for von Neumann")->capture_default_str();

    auto* dee = app.add_subcommand("dee", "Disconnected entanglement entropy");
    StateChoice dee_state;
    add_state(dee, dee_state);
    std::optional<int> dm;
    std::optional<int> dl;
    std::optional<int> dr;
    double dee_alpha = 2.0;
    dee->add_option("--m", dm, "Sites in A (default preset (N-1)/2)");
    dee->add_option("--l", dl, "Gap between the blocks of B (default (N-1)/8)");
    dee->add_option("--r", dr, "Length of each block of B (default (N-1)/4)");
    dee->add_option("--alpha", dee_alpha, "Renyi index")->capture_default_str();

    auto* sre_cmd = app.add_subcommand("sre", "Stabilizer Renyi entropy");
    StateChoice sre_state;
    add_state(sre_cmd, sre_state);
    int q = 2;
    sre_cmd->add_option("--q", q, "Renyi index, >= 2")->capture_default_str();

    auto* r2 = app.add_subcommand("r2", "Relative frustrated SRE correction");

    auto* transition = app.add_subcommand("transition", "Locate h* and the SRE jump across it");
    double h_lo = 0.0;
    double h_hi = 1.0;
    double resolution = 1e-3;
    double delta = 1e-2;
    transition->add_option("--h-lo", h_lo)->capture_default_str();
    transition->add_option("--h-hi", h_hi)->capture_default_str();
    transition->add_option("--resolution", resolution)->capture_default_str();
    transition->add_option("--delta", delta, "Offset from h* for the jump")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Run a plan file");
    std::string plan_path;
    sweep->add_option("plan", plan_path, "Key-value plan file")->required();

    auto* verify = app.add_subcommand("verify", "Run a verification suite and print a JSON report");
    std::string suite;
    verify->add_option("suite", suite, "oracles, clifford, degeneracy or all")
        ->check(CLI::IsMember({"oracles", "clifford", "degeneracy", "all"}))
        ->required();

    auto* plot = app.add_subcommand("plot", "Render a CSV table as SVG");
    std::string plot_in;
    tfres_axes axes{};
    std::string px;
    std::string py;
    std::string pgroup;
    std::string hline_label;
    std::string title;
    bool logx = false;
    bool logy = false;
    std::optional<double> hline;
    plot->add_option("--in", plot_in, "CSV table")->required();
    plot->add_option("--x", px, "Column for the x axis")->required();
    plot->add_option("--y", py, "Column for the y axis")->required();
    plot->add_option("--group", pgroup, "Column splitting the series");
    plot->add_flag("--logx", logx);
    plot->add_flag("--logy", logy);
    plot->add_option("--hline", hline, "Horizontal reference line");
    plot->add_option("--hline-label", hline_label);
    plot->add_option("--title", title);

    auto* fit = app.add_subcommand("fit", "Power-law fit y = a x^b of two CSV columns");
    std::string fit_in;
    std::string fx = "N";
    std::string fy = "delta";
    fit->add_option("--in", fit_in, "CSV table")->required();
    fit->add_option("--x", fx)->capture_default_str();
    fit->add_option("--y", fy)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (g.boundary == "pbc") g.boundary = "periodic";
        if (g.boundary == "obc") g.boundary = "open";
        if (g.threads) check(tfres_set_threads(g.threads));
        if (g.lanczos_max_sites > 20) {
            std::cerr << "tfres: warning: eigensolver cap raised to N=" << g.lanczos_max_sites << "\n";
        }
        if (g.sre_max_sites > 13) {
            std::cerr << "tfres: warning: SRE cap raised to N=" << g.sre_max_sites << "\n";
        }

        if (*spectrum) {
            PlanText plan(g, "energy_spectrum");
            plan.add("levels", std::to_string(levels));
            return run_plan(plan.text(), g.out, true);
        }
        if (*states) return run_states(g, state_kind_name, state_param);
        if (*ee) {
            PlanText plan(g, "ee");
            plan.state(ee_state);
            if (subsystem) plan.add("subsystem", std::to_string(*subsystem));
            plan.add("alpha", num(ee_alpha));
            return run_plan(plan.text(), g.out, true);
        }
        if (*dee) {
            PlanText plan(g, "dee");
            plan.state(dee_state);
            const int given = dm.has_value() + dl.has_value() + dr.has_value();
            if (given == 3) {
                plan.add("dee.m", std::to_string(*dm));
                plan.add("dee.l", std::to_string(*dl));
                plan.add("dee.r", std::to_string(*dr));
            } else if (given != 0) {
                throw Failure{kUsage, "--m, --l and --r must be given together"};
            }
            plan.add("dee.alpha", num(dee_alpha));
            return run_plan(plan.text(), g.out, true);
        }
        if (*sre_cmd) {
            PlanText plan(g, "sre");
            plan.state(sre_state);
            plan.add("q", std::to_string(q));
            return run_plan(plan.text(), g.out, true);
        }
        if (*r2) {
            PlanText plan(g, "r2");
            return run_plan(plan.text(), g.out, true);
        }
        if (*transition) {
            PlanText plan(g, "transition");
            plan.add("h_lo", num(h_lo));
            plan.add("h_hi", num(h_hi));
            plan.add("resolution", num(resolution));
            plan.add("delta", num(delta));
            return run_plan(plan.text(), g.out, true);
        }
        if (*sweep) {
            std::string plan = read_file(plan_path) + "\n";
            // Command-line flags override the plan file.
            if (!g.out.empty()) plan += "output = " + g.out + "\n";
            if (g.no_timestamp) plan += "timestamp = false\n";
            if (g.threads) plan += "threads = " + std::to_string(g.threads) + "\n";
            if (!g.mem_budget.empty()) plan += "mem_budget = " + std::to_string(parse_bytes(g.mem_budget)) + "\n";
            if (g.seed) plan += "seed = " + std::to_string(*g.seed) + "\n";
            if (app.get_option("--format")->count() > 0) plan += "format = " + g.format + "\n";
            if (g.allow_rounding) plan += "allow_rounding = true\n";
            return run_plan(plan, g.out, false);
        }
        if (*verify) {
            CString report;
            int passed = 0;
            check(tfres_verify(suite.c_str(), g.seed.value_or(7), g.no_timestamp ? 0 : 1, &report.ptr, &passed));
            write_output(g.out, report.str());
            return passed ? kPass : kVerifyFailed;
        }
        if (*plot) {
            const std::string csv = read_file(plot_in);
            axes.x = px.c_str();
            axes.y = py.c_str();
            axes.group = pgroup.empty() ? nullptr : pgroup.c_str();
            axes.log_x = logx;
            axes.log_y = logy;
            axes.has_hline = hline.has_value();
            axes.hline = hline.value_or(0.0);
            axes.hline_label = hline_label.empty() ? nullptr : hline_label.c_str();
            axes.title = title.empty() ? nullptr : title.c_str();
            CString svg;
            check(tfres_plot(csv.c_str(), &axes, &svg.ptr));
            write_output(g.out, svg.str());
            return kPass;
        }
        if (*fit) return run_fit(g, fit_in, fx, fy);
    } catch (const Failure& f) {
        std::cerr << "tfres: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "tfres: " << e.what() << "\n";
        return kCompute;
    }
    return kUsage;
}
