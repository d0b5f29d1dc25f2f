// qcst: compressed-sensing tomography toolkit.
//
// Subcommands: basis, coherence, state, measure, recover, sweep, reproduce.
// Exit codes: 0 success, 1 invalid arguments, 2 runtime failure.
// All randomness flows from --seed (default fixed); QCST_OUT_DIR only sets
// the default output directory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcst/qcst.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_argv_echo;

fs::path default_out_dir() {
    if (const char* env = std::getenv("QCST_OUT_DIR")) return fs::path(env);
    return fs::path(".");
}

void write_manifest(const fs::path& dir, const std::string& subcommand, std::uint64_t seed) {
    fs::create_directories(dir.empty() ? fs::path(".") : dir);
    fs::path path = (dir.empty() ? fs::path(".") : dir) / ("manifest-" + subcommand + ".txt");
    std::ofstream os(path);
    if (!os) throw qcst::IoError("cannot write manifest: " + path.string());
    os << "tool=qcst\n"
       << "version=" << qcst::version_string << "\n"
       << "command=" << g_argv_echo << "\n"
       << "seed=" << seed << "\n";
}

fs::path manifest_dir_for_file(const std::string& out_file) {
    fs::path parent = fs::path(out_file).parent_path();
    return parent.empty() ? fs::path(".") : parent;
}

std::string fmt(double x) { return qcst::detail::format_double(x); }

qcst::OperatorBasis build_basis(const std::string& kind, int dim, int dim_cap) {
    qcst::BasisKind k = qcst::basis_kind_from_string(kind);
    if (k == qcst::BasisKind::PauliTensor) {
        if (dim < 2 || (dim & (dim - 1)) != 0)
            throw qcst::InvalidInputError("pauli basis needs a power-of-two dimension");
        return qcst::OperatorBasis::pauli(std::countr_zero(static_cast<unsigned>(dim)), dim_cap);
    }
    return qcst::OperatorBasis::sud(dim, dim_cap);
}

/// Largest |<w_a, w_b> - delta_ab| over all element pairs, via the Gram
/// matrix of the vectorized elements.
double orthonormality_residual(const qcst::OperatorBasis& basis) {
    const int n = basis.size();
    const Eigen::Index len = static_cast<Eigen::Index>(basis.dim()) * basis.dim();
    qcst::ComplexMatrix stacked(len, n);
    for (int a = 0; a < n; ++a)
        stacked.col(a) = Eigen::Map<const qcst::ComplexVector>(basis.element(a).data(), len);
    qcst::ComplexMatrix gram = stacked.adjoint() * stacked;
    gram -= qcst::ComplexMatrix::Identity(n, n);
    return gram.cwiseAbs().maxCoeff();
}

struct GlobalOpts {
    std::uint64_t seed = qcst::default_master_seed;
    int threads = 0;
    std::string out_dir;
};

int cmd_basis(const std::string& kind, int dim, int dim_cap, bool check, const std::string& out,
              const GlobalOpts& global) {
    qcst::OperatorBasis basis = build_basis(kind, dim, dim_cap);
    std::cout << "kind=" << to_string(basis.kind()) << "\n"
              << "d=" << basis.dim() << "\n"
              << "size=" << basis.size() << "\n";
    if (check) std::cout << "orthonormality_residual=" << fmt(orthonormality_residual(basis)) << "\n";
    fs::path mdir = out.empty() ? fs::path(global.out_dir) : manifest_dir_for_file(out);
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw qcst::IoError("cannot open for writing: " + out);
        for (const auto& w : basis.elements()) qcst::write_matrix_text(os, w);
        std::cout << "out=" << out << "\n";
    }
    write_manifest(mdir, "basis", global.seed);
    return 0;
}

qcst::DensityMatrix state_from_arg(const std::string& arg, int dim) {
    if (arg == "rho1") return qcst::paper_state(qcst::PaperState::Rho1, dim);
    if (arg == "rho2") return qcst::paper_state(qcst::PaperState::Rho2, dim);
    return qcst::DensityMatrix(qcst::load_matrix(arg));
}

int cmd_coherence(const std::string& kind, int dim, const std::string& state_arg,
                  const GlobalOpts& global) {
    qcst::OperatorBasis basis = build_basis(kind, dim, qcst::OperatorBasis::default_dim_cap);
    qcst::CoherenceValue nu1 = qcst::coherence_nu1(basis);
    std::cout << "kind=" << to_string(basis.kind()) << "\n"
              << "d=" << basis.dim() << "\n"
              << "nu1=" << fmt(nu1.value) << "\n"
              << "argmax_nu1=" << nu1.argmax << "\n";
    if (!state_arg.empty()) {
        qcst::DensityMatrix rho = state_from_arg(state_arg, dim);
        if (rho.dim() != basis.dim())
            throw qcst::InvalidInputError("state dimension does not match basis");
        qcst::CoherenceReport report = qcst::coherence_report(basis, rho);
        int rank = rho.rank();
        std::cout << "rank=" << rank << "\n"
                  << "nu2=" << fmt(report.nu2) << "\n"
                  << "argmax_nu2=" << report.argmax_index_nu2 << "\n"
                  << "nu=" << fmt(report.nu) << "\n";
        if (basis.kind() == qcst::BasisKind::SuD && rank == 1)
            std::cout << "pure_bound=" << fmt(qcst::sud_pure_bound(rho)) << "\n";
    }
    write_manifest(fs::path(global.out_dir), "coherence", global.seed);
    return 0;
}

int cmd_state(const std::string& kind, int dim, int rank, const std::string& out,
              const std::string& format, const GlobalOpts& global) {
    qcst::StateSpec spec;
    spec.dim = dim;
    spec.rank = rank;
    spec.seed = global.seed;
    if (kind == "haar_pure")
        spec.kind = qcst::StateKind::HaarPure;
    else if (kind == "haar_rank")
        spec.kind = qcst::StateKind::HaarRankR;
    else if (kind == "rho1")
        spec.kind = qcst::StateKind::Rho1;
    else if (kind == "rho2")
        spec.kind = qcst::StateKind::Rho2;
    else
        throw qcst::InvalidInputError("unknown state kind: " + kind);
    qcst::DensityMatrix rho = qcst::make_state(spec);
    qcst::MatrixFileFormat fmt_kind =
        format == "binary" ? qcst::MatrixFileFormat::Binary : qcst::MatrixFileFormat::Text;
    qcst::save_matrix(out, rho.mat(), fmt_kind);
    std::cout << "d=" << rho.dim() << "\n"
              << "rank=" << rho.rank() << "\n"
              << "out=" << out << "\n";
    write_manifest(manifest_dir_for_file(out), "state", global.seed);
    return 0;
}

int cmd_measure(const std::string& state_path, const std::string& basis_kind, int m,
                const std::string& out, const std::string& format, const GlobalOpts& global) {
    qcst::MatrixFileFormat fmt_kind =
        format == "binary" ? qcst::MatrixFileFormat::Binary : qcst::MatrixFileFormat::Text;
    qcst::DensityMatrix rho(qcst::load_matrix(state_path, fmt_kind));
    qcst::OperatorBasis basis =
        build_basis(basis_kind, rho.dim(), qcst::OperatorBasis::default_dim_cap);
    qcst::RngStream rng(global.seed);
    std::vector<int> omega = qcst::sample_omega(basis.size(), m, rng);
    qcst::MeasurementRecord record = qcst::measure(rho, basis, omega);
    qcst::save_record(out, record);
    std::cout << "basis=" << to_string(record.basis_kind) << "\n"
              << "d=" << record.dim << "\n"
              << "m=" << record.m() << "\n"
              << "out=" << out << "\n";
    write_manifest(manifest_dir_for_file(out), "measure", global.seed);
    return 0;
}

int cmd_recover(const std::string& record_path, const std::string& out, const std::string& solver,
                const qcst::SolverOptions& opts, const GlobalOpts& global) {
    qcst::MeasurementRecord record = qcst::load_record(record_path);
    qcst::OperatorBasis basis = build_basis(to_string(record.basis_kind), record.dim,
                                            qcst::OperatorBasis::default_dim_cap);
    qcst::RecoveryResult result;
    if (solver == "admm")
        result = qcst::recover(basis, record, opts);
    else if (solver == "reference")
        result = qcst::recover_reference(basis, record, opts);
    else
        throw qcst::InvalidInputError("unknown solver: " + solver);
    std::cout << "solver=" << solver << "\n"
              << "converged=" << (result.converged ? 1 : 0) << "\n"
              << "iterations=" << result.iterations << "\n"
              << "primal_residual=" << fmt(result.primal_residual) << "\n"
              << "dual_residual=" << fmt(result.dual_residual) << "\n"
              << "constraint_residual=" << fmt(result.constraint_residual) << "\n"
              << "nuclear_value=" << fmt(result.nuclear_value) << "\n";
    fs::path mdir = out.empty() ? fs::path(global.out_dir) : manifest_dir_for_file(out);
    if (!out.empty()) {
        qcst::save_matrix(out, result.sigma_star);
        std::cout << "out=" << out << "\n";
    }
    write_manifest(mdir, "recover", global.seed);
    if (!result.converged) {
        std::cerr << "recover: solver did not converge within "
                  << opts.max_iters << " iterations\n";
        return 2;
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out, const GlobalOpts& global,
              bool seed_set, bool threads_set) {
    qcst::SweepConfig config = qcst::load_sweep_config(config_path);
    if (seed_set) config.master_seed = global.seed;
    if (threads_set) config.threads = global.threads;
    qcst::SweepOutput output = qcst::run_sweep(config);
    fs::path out_dir = out.empty() ? fs::path(global.out_dir) : fs::path(out);
    qcst::EmitPaths paths = qcst::emit_results(output, out_dir, "results");
    std::cout << qcst::sweep_rows_csv(output.rows);
    std::cerr << "wrote " << paths.results_csv.string() << "\n"
              << "wrote " << paths.trials_csv.string() << "\n"
              << "wrote " << paths.plot.string() << "\n";
    write_manifest(out_dir, "sweep", config.master_seed);
    return 0;
}

int cmd_reproduce(const std::string& target, int trials, bool full_scale, const std::string& out,
                  const GlobalOpts& global) {
    fs::path out_dir = out.empty() ? fs::path(global.out_dir) : fs::path(out);
    if (target == "su7") {
        int n = trials > 0 ? trials : 500;
        qcst::Su7Report report =
            qcst::run_su7_benchmark(n, global.seed, {}, {}, global.threads);
        std::string csv = qcst::su7_report_csv(report);
        std::cout << csv;
        fs::create_directories(out_dir);
        qcst::write_text_file(out_dir / "su7.csv", csv);
        std::cerr << "wrote " << (out_dir / "su7.csv").string() << "\n";
        write_manifest(out_dir, "reproduce", global.seed);
        return 0;
    }
    qcst::SweepConfig config;
    if (target == "fig1")
        config = qcst::fig1_config(trials > 0 ? trials : (full_scale ? 2000 : 200), global.seed);
    else if (target == "fig2")
        config = qcst::fig2_config(trials > 0 ? trials : (full_scale ? 1000 : 100), global.seed);
    else
        throw qcst::InvalidInputError("unknown reproduce target: " + target);
    config.threads = global.threads;
    qcst::SweepOutput output = qcst::run_sweep(config);
    qcst::EmitPaths paths = qcst::emit_results(output, out_dir, target);
    std::cout << qcst::sweep_rows_csv(output.rows);
    std::cerr << "wrote " << paths.results_csv.string() << "\n"
              << "wrote " << paths.trials_csv.string() << "\n"
              << "wrote " << paths.plot.string() << "\n";
    write_manifest(out_dir, "reproduce", global.seed);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) {
        if (i) g_argv_echo += ' ';
        g_argv_echo += argv[i];
    }

    CLI::App app{"compressed-sensing tomography for qudits of arbitrary dimension"};
    app.set_version_flag("--version", qcst::version_string);
    app.require_subcommand(1);

    GlobalOpts global;
    global.out_dir = default_out_dir().string();
    app.add_option("--seed", global.seed, "master seed for all randomness")
        ->default_val(qcst::default_master_seed);
    app.add_option("--threads", global.threads, "worker threads for experiment trials (0 = auto)");
    app.add_option("--out-dir", global.out_dir,
                   "default output directory (env QCST_OUT_DIR; default .)");

    std::string kind = "sud", state_arg, out, format = "text";
    int dim = 0, dim_cap = qcst::OperatorBasis::default_dim_cap, rank = 1, m = 0;
    bool check = false;

    auto* basis_cmd = app.add_subcommand("basis", "build an operator basis and inspect it");
    basis_cmd->add_option("--kind", kind, "pauli or sud")->required();
    basis_cmd->add_option("--dim", dim, "Hilbert space dimension")->required();
    basis_cmd->add_option("--dim-cap", dim_cap, "refuse dimensions above this cap");
    basis_cmd->add_flag("--check", check, "print max pairwise orthonormality residual");
    basis_cmd->add_option("--out", out, "write all elements to this file (text blocks)");

    auto* coherence_cmd = app.add_subcommand("coherence", "basis coherence parameters");
    coherence_cmd->add_option("--kind", kind, "pauli or sud")->required();
    coherence_cmd->add_option("--dim", dim, "Hilbert space dimension")->required();
    coherence_cmd->add_option("--state", state_arg,
                              "rho1, rho2, or a density-matrix file (enables nu2)");

    auto* state_cmd = app.add_subcommand("state", "generate a density matrix");
    state_cmd->add_option("--kind", kind, "haar_pure, haar_rank, rho1, rho2")->required();
    state_cmd->add_option("--dim", dim, "Hilbert space dimension")->required();
    state_cmd->add_option("--rank", rank, "rank for haar_rank");
    state_cmd->add_option("--out", out, "output file")->required();
    state_cmd->add_option("--format", format, "text or binary");

    auto* measure_cmd = app.add_subcommand("measure", "sample settings and expectation values");
    measure_cmd->add_option("--state", state_arg, "density-matrix file")->required();
    measure_cmd->add_option("--basis", kind, "pauli or sud")->required();
    measure_cmd->add_option("--m", m, "number of measurement settings")->required();
    measure_cmd->add_option("--out", out, "record output file")->required();
    measure_cmd->add_option("--format", format, "state file format: text or binary");

    std::string solver = "admm";
    qcst::SolverOptions solver_opts;
    std::string record_path;
    auto* recover_cmd = app.add_subcommand("recover", "nuclear-norm recovery from a record");
    recover_cmd->add_option("--record", record_path, "measurement record file")->required();
    recover_cmd->add_option("--out", out, "write the recovered matrix here");
    recover_cmd->add_option("--solver", solver, "admm or reference");
    recover_cmd->add_option("--penalty", solver_opts.penalty, "ADMM penalty");
    recover_cmd->add_option("--max-iters", solver_opts.max_iters, "iteration cap");
    recover_cmd->add_option("--eps-abs", solver_opts.eps_abs, "absolute tolerance");
    recover_cmd->add_option("--eps-rel", solver_opts.eps_rel, "relative tolerance");
    recover_cmd->add_option("--constraint-tol", solver_opts.constraint_tol,
                            "data-fit tolerance on the returned iterate");
    recover_cmd->add_flag("--adaptive", solver_opts.adaptive_penalty, "adapt the penalty");
    recover_cmd->add_flag("--psd", solver_opts.psd, "restrict iterates to the PSD cone");

    std::string config_path;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo fidelity-vs-m sweep");
    sweep_cmd->add_option("--config", config_path, "key=value config file")->required();
    sweep_cmd->add_option("--out", out, "output directory");

    std::string target;
    int trials = 0;
    bool full_scale = false;
    auto* reproduce_cmd = app.add_subcommand("reproduce", "canned experiment presets");
    reproduce_cmd->add_option("target", target, "fig1, fig2, or su7")->required();
    reproduce_cmd->add_option("--trials", trials, "override trial count");
    reproduce_cmd->add_flag("--full-scale", full_scale, "fig1: 2000 trials, fig2: 1000 trials");
    reproduce_cmd->add_option("--out", out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(basis_cmd))
            return cmd_basis(kind, dim, dim_cap, check, out, global);
        if (app.got_subcommand(coherence_cmd)) return cmd_coherence(kind, dim, state_arg, global);
        if (app.got_subcommand(state_cmd)) return cmd_state(kind, dim, rank, out, format, global);
        if (app.got_subcommand(measure_cmd))
            return cmd_measure(state_arg, kind, m, out, format, global);
        if (app.got_subcommand(recover_cmd))
            return cmd_recover(record_path, out, solver, solver_opts, global);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep(config_path, out, global, app.count("--seed") > 0,
                             app.count("--threads") > 0);
        if (app.got_subcommand(reproduce_cmd))
            return cmd_reproduce(target, trials, full_scale, out, global);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const qcst::InvalidInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
