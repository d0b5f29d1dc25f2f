#pragma once

#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qcst/recovery.hpp"
#include "qcst/states.hpp"

namespace qcst {

inline constexpr std::uint64_t default_master_seed = 42;

enum class Strategy { SuDirect, AncillaPauli };

inline std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::SuDirect: return "SuDirect";
        case Strategy::AncillaPauli: return "AncillaPauli";
    }
    throw InvalidInputError("unknown strategy");
}

inline Strategy strategy_from_string(const std::string& s) {
    if (s == "SuDirect") return Strategy::SuDirect;
    if (s == "AncillaPauli") return Strategy::AncillaPauli;
    throw InvalidInputError("unknown strategy: " + s);
}

namespace detail {

inline std::uint64_t strategy_tag(Strategy s) {
    return s == Strategy::SuDirect ? 0u : 1u;
}

/// Compensated accumulator so aggregate statistics do not depend on how the
/// trial loop was scheduled (results are reduced in index order regardless).
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

/// Runs fn(0..n-1) on `threads` workers pulling indices from a shared
/// counter. The caller must make the work items independent; determinism of
/// the overall computation comes from writing into preassigned slots.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    threads = std::min(threads, std::max(n, 1));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace detail

struct SweepConfig {
    int d1 = 0;
    int rank = 1;
    std::vector<Strategy> strategies{Strategy::SuDirect, Strategy::AncillaPauli};
    std::vector<int> m_values;
    int trials = 1;
    std::uint64_t master_seed = default_master_seed;
    SuccessCriterion criterion{};
    SolverOptions solver{};
    int threads = 0;

    void validate() const;
};

struct SweepRow {
    Strategy strategy;
    int m = 0;
    int trials = 0;
    double mean_fidelity = 0.0;
    double std_fidelity = 0.0;
    double success_rate = 0.0;
};

struct TrialDiagnostics {
    bool converged = false;
    int iterations = 0;
    double constraint_residual = 0.0;
    /// AncillaPauli only: fidelity against the original state after cutting
    /// the recovered iterate back to the top-left block, and the Frobenius
    /// mass found outside that block. NaN / 0 for SuDirect.
    double fidelity_extract = std::numeric_limits<double>::quiet_NaN();
    double leakage = 0.0;
};

struct TrialOutcome {
    double fidelity = 0.0;
    bool success = false;
    TrialDiagnostics diag{};
};

struct TrialLogRow {
    Strategy strategy;
    int m = 0;
    int trial = 0;
    TrialOutcome outcome{};
};

struct SweepOutput {
    std::vector<SweepRow> rows;
    std::vector<TrialLogRow> trial_log;
};

/// Shared read-only per-sweep data: the operator bases are expensive to
/// build relative to a single trial, so they are constructed once and read
/// concurrently.
class TrialContext {
public:
    TrialContext(int d1, bool need_sud, bool need_pauli) : d1_(d1), plan_(plan_embedding(d1)) {
        if (need_sud) sud_.emplace(OperatorBasis::sud(d1));
        if (need_pauli)
            pauli_.emplace(OperatorBasis::pauli(std::countr_zero(static_cast<unsigned>(plan_.d2))));
    }

    int d1() const { return d1_; }
    const EmbeddingPlan& plan() const { return plan_; }
    const OperatorBasis& sud() const {
        if (!sud_) throw InvalidInputError("TrialContext: SU(d) basis not built");
        return *sud_;
    }
    const OperatorBasis& pauli() const {
        if (!pauli_) throw InvalidInputError("TrialContext: Pauli basis not built");
        return *pauli_;
    }

    int pool_size(Strategy s) const {
        return s == Strategy::SuDirect ? d1_ * d1_ : plan_.d2 * plan_.d2;
    }

private:
    int d1_;
    EmbeddingPlan plan_;
    std::optional<OperatorBasis> sud_;
    std::optional<OperatorBasis> pauli_;
};

inline void SweepConfig::validate() const {
    if (d1 < 2) throw InvalidInputError("SweepConfig: d1 must be at least 2");
    if (rank < 1 || rank > d1) throw InvalidInputError("SweepConfig: rank must be in [1, d1]");
    if (trials < 1) throw InvalidInputError("SweepConfig: trials must be positive");
    if (strategies.empty()) throw InvalidInputError("SweepConfig: no strategies selected");
    if (m_values.empty()) throw InvalidInputError("SweepConfig: no m values");
    const int d2 = plan_embedding(d1).d2;
    int max_pool = 0;
    for (Strategy s : strategies)
        max_pool = std::max(max_pool, s == Strategy::SuDirect ? d1 * d1 : d2 * d2);
    for (int m : m_values)
        if (m < 1 || m > max_pool)
            throw InvalidInputError("SweepConfig: m value outside (0, d^2] for every strategy");
    solver.validate();
}

/// One Monte Carlo trial. Draws a fresh rank-r state from the trial's own
/// stream, samples the measurement settings, recovers, and scores. The
/// AncillaPauli route works entirely in the padded dimension d2; its primary
/// fidelity is against the embedded truth, with the post-extraction fidelity
/// kept as a diagnostic.
inline TrialOutcome run_trial(const TrialContext& ctx, Strategy strategy, int rank, int m,
                              RngStream& rng, const SuccessCriterion& criterion = {},
                              const SolverOptions& solver = {}) {
    if (m < 1 || m > ctx.pool_size(strategy))
        throw InvalidInputError("run_trial: m outside (0, pool size]");
    TrialOutcome out;
    DensityMatrix rho = random_rank_r_density(ctx.d1(), rank, rng);

    const OperatorBasis& basis = strategy == Strategy::SuDirect ? ctx.sud() : ctx.pauli();
    DensityMatrix target =
        strategy == Strategy::SuDirect ? rho : embed(rho, ctx.plan());

    std::vector<int> omega = sample_omega(ctx.pool_size(strategy), m, rng);
    MeasurementRecord record = measure(target, basis, omega);
    RecoveryResult result = recover(basis, record, solver);

    out.fidelity = recovered_fidelity(target, result.sigma_star);
    out.success = run_success(target, result, criterion);
    out.diag.converged = result.converged;
    out.diag.iterations = result.iterations;
    out.diag.constraint_residual = result.constraint_residual;

    if (strategy == Strategy::AncillaPauli) {
        ComplexMatrix clamped = psd_clamp(result.sigma_star);
        double trace = clamped.trace().real();
        if (trace > 0.0) {
            clamped /= trace;
            BlockSplit split = split_block(clamped, ctx.d1());
            out.diag.leakage = split.leakage;
            double block_trace = split.block.trace().real();
            if (block_trace > 0.0) {
                ComplexMatrix block = split.block / block_trace;
                out.diag.fidelity_extract = fidelity(rho.mat(), psd_clamp(block));
            } else {
                out.diag.fidelity_extract = 0.0;
            }
        } else {
            out.diag.fidelity_extract = 0.0;
            out.diag.leakage = 0.0;
        }
    }
    return out;
}

/// Standalone form used by tests and one-off runs; builds the context ad hoc.
inline TrialOutcome run_trial(Strategy strategy, int d1, int rank, int m,
                              std::uint64_t trial_seed, const SuccessCriterion& criterion = {},
                              const SolverOptions& solver = {}) {
    TrialContext ctx(d1, strategy == Strategy::SuDirect, strategy == Strategy::AncillaPauli);
    RngStream rng(trial_seed);
    return run_trial(ctx, strategy, rank, m, rng, criterion, solver);
}

/// Runs the full (strategy x m x trial) grid. Each trial gets its own RNG
/// stream derived from (master_seed, strategy, m, trial), and every result
/// lands in a preassigned slot, so the output is identical for any thread
/// count. m values that exceed a strategy's pool (e.g. m = d2^2 asked of the
/// direct strategy) are skipped for that strategy only.
inline SweepOutput run_sweep(const SweepConfig& config) {
    config.validate();
    bool need_sud = false, need_pauli = false;
    for (Strategy s : config.strategies)
        (s == Strategy::SuDirect ? need_sud : need_pauli) = true;
    TrialContext ctx(config.d1, need_sud, need_pauli);

    struct Cell {
        Strategy strategy;
        int m;
    };
    std::vector<Cell> cells;
    std::vector<Strategy> order = config.strategies;
    std::sort(order.begin(), order.end(),
              [](Strategy a, Strategy b) { return detail::strategy_tag(a) < detail::strategy_tag(b); });
    order.erase(std::unique(order.begin(), order.end()), order.end());
    std::vector<int> ms = config.m_values;
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    for (Strategy s : order)
        for (int m : ms)
            if (m <= ctx.pool_size(s)) cells.push_back({s, m});

    const int trials = config.trials;
    std::vector<TrialOutcome> slots(cells.size() * static_cast<std::size_t>(trials));
    detail::parallel_for(static_cast<int>(slots.size()), config.threads, [&](int idx) {
        const Cell& cell = cells[static_cast<std::size_t>(idx) / static_cast<std::size_t>(trials)];
        const int trial = idx % trials;
        RngStream rng = RngStream::derive(
            config.master_seed,
            {detail::strategy_tag(cell.strategy), static_cast<std::uint64_t>(cell.m),
             static_cast<std::uint64_t>(trial)});
        slots[static_cast<std::size_t>(idx)] =
            run_trial(ctx, cell.strategy, config.rank, cell.m, rng, config.criterion, config.solver);
    });

    SweepOutput out;
    out.trial_log.reserve(slots.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        detail::KahanSum mean_acc;
        int successes = 0;
        const TrialOutcome* base = slots.data() + c * static_cast<std::size_t>(trials);
        for (int t = 0; t < trials; ++t) {
            mean_acc.add(base[t].fidelity);
            successes += base[t].success ? 1 : 0;
            out.trial_log.push_back({cells[c].strategy, cells[c].m, t, base[t]});
        }
        const double mean = mean_acc.sum / trials;
        detail::KahanSum var_acc;
        for (int t = 0; t < trials; ++t) {
            double dev = base[t].fidelity - mean;
            var_acc.add(dev * dev);
        }
        SweepRow row;
        row.strategy = cells[c].strategy;
        row.m = cells[c].m;
        row.trials = trials;
        row.mean_fidelity = mean;
        row.std_fidelity = trials > 1 ? std::sqrt(var_acc.sum / (trials - 1)) : 0.0;
        row.success_rate = static_cast<double>(successes) / trials;
        out.rows.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fixed-state SU(7) benchmark.
// ---------------------------------------------------------------------------

struct BenchmarkRow {
    PaperState state;
    int m = 0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
};

struct Su7Report {
    std::vector<BenchmarkRow> rows;
};

/// Wilson score interval for a binomial proportion at 95% coverage.
inline std::pair<double, double> wilson_interval(int successes, int trials) {
    if (trials < 1) throw InvalidInputError("wilson_interval: trials must be positive");
    const double z = 1.959963984540054;
    const double n = trials;
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Success rates for the two reference 7-level states under random SU(7)
/// setting subsets: the diagonal projector at m = 46 and m = 28, and the
/// uniform-superposition projector at m = 28. The state is fixed per row;
/// randomness is the choice of settings.
inline Su7Report run_su7_benchmark(int trials, std::uint64_t master_seed = default_master_seed,
                                   const SolverOptions& solver = {},
                                   const SuccessCriterion& criterion = {}, int threads = 0) {
    if (trials < 1) throw InvalidInputError("run_su7_benchmark: trials must be positive");
    const int d = 7;
    const OperatorBasis basis = OperatorBasis::sud(d);

    struct RowSpec {
        PaperState state;
        int m;
        std::uint64_t tag;
    };
    const std::vector<RowSpec> specs = {
        {PaperState::Rho1, 46, 100}, {PaperState::Rho1, 28, 101}, {PaperState::Rho2, 28, 102}};

    std::vector<DensityMatrix> states;
    states.reserve(specs.size());
    for (const RowSpec& spec : specs) states.push_back(paper_state(spec.state, d));

    std::vector<unsigned char> success_slots(specs.size() * static_cast<std::size_t>(trials), 0);
    detail::parallel_for(static_cast<int>(success_slots.size()), threads, [&](int idx) {
        const std::size_t row = static_cast<std::size_t>(idx) / static_cast<std::size_t>(trials);
        const int trial = idx % trials;
        const RowSpec& spec = specs[row];
        RngStream rng = RngStream::derive(
            master_seed,
            {spec.tag, static_cast<std::uint64_t>(spec.m), static_cast<std::uint64_t>(trial)});
        std::vector<int> omega = sample_omega(d * d, spec.m, rng);
        MeasurementRecord record = measure(states[row], basis, omega);
        RecoveryResult result = recover(basis, record, solver);
        success_slots[static_cast<std::size_t>(idx)] =
            run_success(states[row], result, criterion) ? 1 : 0;
    });

    Su7Report report;
    for (std::size_t r = 0; r < specs.size(); ++r) {
        BenchmarkRow row;
        row.state = specs[r].state;
        row.m = specs[r].m;
        row.trials = trials;
        for (int t = 0; t < trials; ++t)
            row.successes += success_slots[r * static_cast<std::size_t>(trials) +
                                           static_cast<std::size_t>(t)];
        row.success_rate = static_cast<double>(row.successes) / trials;
        auto [low, high] = wilson_interval(row.successes, trials);
        row.wilson_low = low;
        row.wilson_high = high;
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Preset configurations for the two comparison figures.
// ---------------------------------------------------------------------------

inline std::vector<int> default_m_values(int d1) {
    std::vector<int> ms;
    for (int k = 1; k * d1 <= d1 * d1; ++k) ms.push_back(k * d1);
    return ms;
}

inline SweepConfig fig1_config(int trials = 200, std::uint64_t seed = default_master_seed) {
    SweepConfig config;
    config.d1 = 15;
    config.rank = 1;
    config.m_values = default_m_values(15);
    config.trials = trials;
    config.master_seed = seed;
    return config;
}

inline SweepConfig fig2_config(int trials = 100, std::uint64_t seed = default_master_seed) {
    SweepConfig config;
    config.d1 = 31;
    config.rank = 1;
    config.m_values = default_m_values(31);
    config.trials = trials;
    config.master_seed = seed;
    return config;
}

// ---------------------------------------------------------------------------
// Result emission: CSV + companion plot script.
// ---------------------------------------------------------------------------

inline std::string sweep_rows_csv(const std::vector<SweepRow>& rows) {
    std::string out = "strategy,m,trials,mean_fidelity,std_fidelity,success_rate\n";
    for (const SweepRow& row : rows) {
        out += to_string(row.strategy);
        out += ',';
        out += std::to_string(row.m);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += detail::format_double(row.mean_fidelity);
        out += ',';
        out += detail::format_double(row.std_fidelity);
        out += ',';
        out += detail::format_double(row.success_rate);
        out += '\n';
    }
    return out;
}

inline std::vector<SweepRow> parse_sweep_rows_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("results csv: empty input");
    if (line != "strategy,m,trials,mean_fidelity,std_fidelity,success_rate")
        throw IoError("results csv: unexpected header: " + line);
    std::vector<SweepRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 6) throw IoError("results csv: malformed row: " + line);
        SweepRow row;
        row.strategy = strategy_from_string(fields[0]);
        row.m = std::stoi(fields[1]);
        row.trials = std::stoi(fields[2]);
        row.mean_fidelity = std::stod(fields[3]);
        row.std_fidelity = std::stod(fields[4]);
        row.success_rate = std::stod(fields[5]);
        rows.push_back(row);
    }
    return rows;
}

inline std::string trial_log_csv(const std::vector<TrialLogRow>& log) {
    std::string out =
        "strategy,m,trial,fidelity,success,converged,iterations,constraint_residual,"
        "fidelity_extract,leakage\n";
    for (const TrialLogRow& row : log) {
        out += to_string(row.strategy);
        out += ',';
        out += std::to_string(row.m);
        out += ',';
        out += std::to_string(row.trial);
        out += ',';
        out += detail::format_double(row.outcome.fidelity);
        out += ',';
        out += row.outcome.success ? '1' : '0';
        out += ',';
        out += row.outcome.diag.converged ? '1' : '0';
        out += ',';
        out += std::to_string(row.outcome.diag.iterations);
        out += ',';
        out += detail::format_double(row.outcome.diag.constraint_residual);
        out += ',';
        out += detail::format_double(row.outcome.diag.fidelity_extract);
        out += ',';
        out += detail::format_double(row.outcome.diag.leakage);
        out += '\n';
    }
    return out;
}

inline std::string su7_report_csv(const Su7Report& report) {
    std::string out = "state,m,trials,successes,success_rate,wilson_low,wilson_high\n";
    for (const BenchmarkRow& row : report.rows) {
        out += row.state == PaperState::Rho1 ? "rho1" : "rho2";
        out += ',';
        out += std::to_string(row.m);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += std::to_string(row.successes);
        out += ',';
        out += detail::format_double(row.success_rate);
        out += ',';
        out += detail::format_double(row.wilson_low);
        out += ',';
        out += detail::format_double(row.wilson_high);
        out += '\n';
    }
    return out;
}

inline std::string plot_script(const std::string& csv_name, const std::string& png_name) {
    std::string s;
    s += "#!/usr/bin/env python3\n";
    s += "\"\"\"Plot mean fidelity vs m with mean +/- std bands per strategy.\"\"\"\n";
    s += "import csv\n";
    s += "import collections\n";
    s += "import matplotlib\n";
    s += "matplotlib.use(\"Agg\")\n";
    s += "import matplotlib.pyplot as plt\n";
    s += "\n";
    s += "series = collections.defaultdict(list)\n";
    s += "with open(\"" + csv_name + "\") as f:\n";
    s += "    for row in csv.DictReader(f):\n";
    s += "        series[row[\"strategy\"]].append(\n";
    s += "            (int(row[\"m\"]), float(row[\"mean_fidelity\"]), float(row[\"std_fidelity\"]))\n";
    s += "        )\n";
    s += "\n";
    s += "fig, ax = plt.subplots(figsize=(7, 4.5))\n";
    s += "for name in sorted(series):\n";
    s += "    pts = sorted(series[name])\n";
    s += "    ms = [p[0] for p in pts]\n";
    s += "    mean = [p[1] for p in pts]\n";
    s += "    std = [p[2] for p in pts]\n";
    s += "    ax.plot(ms, mean, marker=\"o\", label=name)\n";
    s += "    ax.fill_between(ms, [a - b for a, b in zip(mean, std)],\n";
    s += "                    [a + b for a, b in zip(mean, std)], alpha=0.25)\n";
    s += "ax.set_xlabel(\"measurement settings m\")\n";
    s += "ax.set_ylabel(\"mean fidelity\")\n";
    s += "ax.set_ylim(0.0, 1.05)\n";
    s += "ax.legend()\n";
    s += "ax.grid(True, alpha=0.3)\n";
    s += "fig.tight_layout()\n";
    s += "fig.savefig(\"" + png_name + "\", dpi=160)\n";
    s += "print(\"wrote " + png_name + "\")\n";
    return s;
}

struct EmitPaths {
    std::filesystem::path results_csv;
    std::filesystem::path trials_csv;
    std::filesystem::path plot;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << content;
    if (!os) throw IoError("write failed: " + path.string());
}

inline EmitPaths emit_results(const SweepOutput& output, const std::filesystem::path& out_dir,
                              const std::string& stem = "results") {
    if (output.rows.empty()) throw InvalidInputError("emit_results: no rows");
    std::filesystem::create_directories(out_dir);
    EmitPaths paths;
    paths.results_csv = out_dir / (stem + ".csv");
    paths.trials_csv = out_dir / (stem + "_trials.csv");
    paths.plot = out_dir / ("plot_" + stem + ".py");
    write_text_file(paths.results_csv, sweep_rows_csv(output.rows));
    if (!output.trial_log.empty()) write_text_file(paths.trials_csv, trial_log_csv(output.trial_log));
    write_text_file(paths.plot, plot_script(stem + ".csv", stem + ".png"));
    return paths;
}

// ---------------------------------------------------------------------------
// Flat key=value config files (lists are comma separated).
// ---------------------------------------------------------------------------

inline SweepConfig parse_sweep_config(std::istream& is) {
    SweepConfig config;
    bool have_m = false;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        auto first = s.find_first_not_of(" \t\r");
        if (first == std::string::npos) return std::string();
        auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    };
    auto split_list = [&trim](const std::string& s) {
        std::vector<std::string> items;
        std::istringstream ls(s);
        std::string item;
        while (std::getline(ls, item, ',')) items.push_back(trim(item));
        return items;
    };
    while (std::getline(is, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError("config line " + std::to_string(line_no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "d1")
                config.d1 = std::stoi(value);
            else if (key == "rank")
                config.rank = std::stoi(value);
            else if (key == "strategies") {
                config.strategies.clear();
                for (const std::string& item : split_list(value))
                    config.strategies.push_back(strategy_from_string(item));
            } else if (key == "m_values") {
                config.m_values.clear();
                for (const std::string& item : split_list(value))
                    config.m_values.push_back(std::stoi(item));
                have_m = true;
            } else if (key == "trials")
                config.trials = std::stoi(value);
            else if (key == "master_seed")
                config.master_seed = std::stoull(value);
            else if (key == "threads")
                config.threads = std::stoi(value);
            else if (key == "success") {
                if (value == "fidelity")
                    config.criterion.kind = SuccessCriterion::Kind::Fidelity;
                else if (value == "frobenius")
                    config.criterion.kind = SuccessCriterion::Kind::FrobeniusError;
                else
                    throw IoError("unknown success criterion: " + value);
            } else if (key == "fidelity_threshold")
                config.criterion.fidelity_threshold = std::stod(value);
            else if (key == "frobenius_tol")
                config.criterion.frobenius_tol = std::stod(value);
            else if (key == "penalty")
                config.solver.penalty = std::stod(value);
            else if (key == "max_iters")
                config.solver.max_iters = std::stoi(value);
            else if (key == "eps_abs")
                config.solver.eps_abs = std::stod(value);
            else if (key == "eps_rel")
                config.solver.eps_rel = std::stod(value);
            else if (key == "constraint_tol")
                config.solver.constraint_tol = std::stod(value);
            else if (key == "adaptive_penalty")
                config.solver.adaptive_penalty = value == "1" || value == "true";
            else if (key == "psd")
                config.solver.psd = value == "1" || value == "true";
            else
                throw IoError("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw IoError("config line " + std::to_string(line_no) + ": bad value for " + key);
        } catch (const std::out_of_range&) {
            throw IoError("config line " + std::to_string(line_no) + ": value out of range for " + key);
        }
    }
    if (!have_m && config.d1 >= 2) config.m_values = default_m_values(config.d1);
    return config;
}

inline SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path);
    return parse_sweep_config(is);
}

} // namespace qcst
