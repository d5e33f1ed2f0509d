// Command-line front end: single-point rate evaluation, distance scans,
// achievable-distance search, Monte-Carlo validation, and finite-size
// analysis. CSV output is the plotting contract; there is no plotting here.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "b92/config.hpp"
#include "b92/finite_size.hpp"
#include "b92/montecarlo.hpp"
#include "b92/observables.hpp"
#include "b92/oracle.hpp"
#include "b92/phase_bound.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// Oracle sums loop over every nu in the window; keep that to desk scale.
constexpr double kOracleMuLimit = 1e6;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> distance_grid(const b92::RunConfig& cfg) {
    std::vector<double> grid;
    if (cfg.l_step <= 0.0) throw std::invalid_argument("l-step must be > 0");
    for (double l = cfg.l_min; l <= cfg.l_max + 1e-9; l += cfg.l_step) grid.push_back(l);
    return grid;
}

struct OutputTarget {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit OutputTarget(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::ios_base::failure("cannot open output file '" + path + "'");
        stream = &file;
    }
    std::ostream& out() { return *stream; }
    void finish() {
        stream->flush();
        if (!*stream) throw std::ios_base::failure("write failure on output");
    }
};

const char kScanHeader[] =
    "l_km,eta,nu_i,nu_f,fil_all,fil_win,vac_win,bit_win,phase_bound,key_rate,"
    "key_rate_oracle,feasible";

void write_scan_row(std::ostream& os, const b92::DistanceRow& row, const std::string& oracle) {
    os << num(row.l_km) << ',' << num(row.eta) << ',' << row.nu_i << ',' << row.nu_f << ','
       << num(row.obs.fil_all) << ',' << num(row.obs.fil_win) << ',' << num(row.obs.vac_win) << ','
       << num(row.obs.bit_win) << ',' << num(row.phase_bound) << ',' << num(row.key_rate) << ','
       << oracle << ',' << (row.feasible ? 1 : 0) << '\n';
}

std::string oracle_field(const b92::RunConfig& cfg, const b92::DistanceRow& row) {
    if (!cfg.use_oracle || cfg.mu > kOracleMuLimit || !row.window_valid) return "";
    const b92::OracleRow orc = b92::oracle_point(cfg.protocol(), cfg.channel_at(row.l_km));
    return orc.window_valid ? num(orc.key_rate) : "";
}

int cmd_keyrate(const b92::RunConfig& cfg) {
    const b92::DistanceRow row = b92::evaluate_point(cfg.protocol(), cfg.channel());
    std::cout << "l_km = " << num(row.l_km) << "\n";
    std::cout << "eta = " << num(row.eta) << "\n";
    if (row.window_valid) {
        std::cout << "nu_i = " << row.nu_i << "\n";
        std::cout << "nu_f = " << row.nu_f << "\n";
        std::cout << "fil_all = " << num(row.obs.fil_all) << "\n";
        std::cout << "fil_win = " << num(row.obs.fil_win) << "\n";
        std::cout << "vac_win = " << num(row.obs.vac_win) << "\n";
        std::cout << "bit_win = " << num(row.obs.bit_win) << "\n";
        std::cout << "bit_all = " << num(row.obs.bit_all) << "\n";
        std::cout << "eta_tilde = " << num(row.obs.eta_tilde()) << "\n";
        std::cout << "phase_bound = " << num(row.phase_bound) << "\n";
    } else {
        std::cout << "window = invalid (no estimate in this regime)\n";
    }
    std::cout << "key_rate = " << num(row.key_rate) << "\n";
    std::cout << "feasible = " << (row.feasible ? 1 : 0) << "\n";
    if (!cfg.out.empty()) {
        OutputTarget target(cfg.out);
        target.out() << kScanHeader << '\n';
        write_scan_row(target.out(), row, oracle_field(cfg, row));
        target.finish();
    }
    return kExitOk;
}

int cmd_scan(const b92::RunConfig& cfg) {
    const auto grid = distance_grid(cfg);
    const auto rows = b92::scan_distance(cfg.protocol(), cfg.channel(), grid);
    OutputTarget target(cfg.out);
    target.out() << kScanHeader << '\n';
    for (const auto& row : rows) write_scan_row(target.out(), row, oracle_field(cfg, row));
    target.finish();
    return kExitOk;
}

int cmd_find_distance(const b92::RunConfig& cfg) {
    const double la = b92::find_achievable_distance(cfg.protocol(), cfg.channel(), cfg.l_max);
    std::printf("%.1f\n", la);
    return kExitOk;
}

int cmd_simulate(const b92::RunConfig& cfg) {
    const b92::ProtocolParams params = cfg.protocol();
    const b92::ChannelParams channel = cfg.channel();
    const b92::PhotonWindow window = b92::make_window(params, channel);
    const b92::TrialTally tally =
        b92::simulate(params, channel, window, cfg.trials, cfg.seed);
    const b92::Observables analytic = b92::analytic_observables(params, channel, window);
    const b92::Observables empirical = tally.to_observables();

    std::cout << "trials = " << tally.n_trials << ", seed = " << tally.rng_seed << "\n";
    std::cout << "counts: conclusive_all = " << tally.conclusive_all
              << ", conclusive_win = " << tally.conclusive_win
              << ", vacuum_win = " << tally.vacuum_win
              << ", bit_err_win = " << tally.bit_err_win
              << ", bit_err_all = " << tally.bit_err_all << "\n";
    std::cout << "rate,empirical,analytic,z,pass\n";

    const double n = static_cast<double>(tally.n_trials);
    bool all_ok = true;
    auto report = [&](const char* name, double emp, double ana) {
        const double se = std::sqrt(std::max(ana * (1.0 - ana), 1e-300) / n);
        const double z = (emp - ana) / se;
        const bool ok = std::abs(z) <= 3.0;
        all_ok = all_ok && ok;
        std::cout << name << ',' << num(emp) << ',' << num(ana) << ',' << num(z) << ','
                  << (ok ? 1 : 0) << "\n";
    };
    report("fil_all", empirical.fil_all, analytic.fil_all);
    report("fil_win", empirical.fil_win, analytic.fil_win);
    report("vac_win", empirical.vac_win, analytic.vac_win);
    report("bit_win", empirical.bit_win, analytic.bit_win);
    report("bit_all", empirical.bit_all, analytic.bit_all);
    std::cout << "all_within_3se = " << (all_ok ? 1 : 0) << "\n";
    return kExitOk;
}

int cmd_finite_size(const b92::RunConfig& cfg) {
    const b92::ProtocolParams params = cfg.protocol();
    const b92::ChannelParams channel = cfg.channel();
    const b92::PhotonWindow window = b92::make_window(params, channel);
    const b92::Observables obs = b92::analytic_observables(params, channel, window);
    const double alpha_sq = b92::alice_nonorthogonality(params.kappa).alpha_tilde_sq;
    const b92::CPrimeSplit split = b92::c_prime(params.reflectivity(), window);
    const b92::QubitConstants q_f = b92::qubit_constants(params.reflectivity(), window.nu_f);

    OutputTarget target(cfg.out);
    target.out() << "n_pairs,eps_code,eps_test,phase_bound,key_rate,feasible\n";
    auto emit = [&](double n_pairs, const char* label) {
        const b92::AzumaBudget budget{n_pairs, cfg.t, cfg.delta};
        const b92::FiniteSizeResult fs =
            b92::finite_size_key_rate(obs, alpha_sq, budget, q_f, split, cfg.two_eta);
        target.out() << label << ',' << num(fs.eps_code) << ',' << num(fs.eps_test) << ','
                     << num(fs.result.phase_bound) << ',' << num(fs.result.key_rate) << ','
                     << (fs.result.feasible ? 1 : 0) << '\n';
    };
    for (double n = 1e6; n < cfg.n_pairs * 0.999; n *= 10.0) emit(n, num(n).c_str());
    emit(cfg.n_pairs, num(cfg.n_pairs).c_str());
    emit(INFINITY, "inf");
    target.finish();
    return kExitOk;
}

// The config file is handled before CLI11 sees argv so that flags always
// override file values.
std::string prescan_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config") {
            if (i + 1 >= argc) throw std::invalid_argument("--config needs a path");
            return argv[i + 1];
        }
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    b92::RunConfig cfg;
    try {
        const std::string config_path = prescan_config_path(argc, argv);
        if (!config_path.empty()) b92::apply_config_file(cfg, config_path);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    CLI::App app{"Key generation rates for the B92 protocol with strong reference pulse"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path_opt;
    app.add_option("--config", config_path_opt, "config file (key = value lines, # comments)");
    app.add_option("--out", cfg.out, "output path for CSV-producing subcommands");
    app.add_option("--mu", cfg.mu, "mean photon number of the strong reference pulse");
    app.add_option("--kappa", cfg.kappa, "mean photon number of the signal pulse");
    app.add_option("--a", cfg.a, "window half-width in units of sqrt(eta*mu)");
    app.add_option("--t", cfg.t, "test-pair fraction in (0,1)");
    app.add_option("--xi", cfg.xi, "fiber loss coefficient [dB/km]");
    app.add_option("--eta-bob", cfg.eta_bob, "Bob's detection efficiency");
    app.add_option("--p", cfg.p, "dark/replacement probability");
    app.add_option("--l", cfg.l, "distance [km] for single-point subcommands");
    app.add_option("--l-min", cfg.l_min, "scan start [km]");
    app.add_option("--l-max", cfg.l_max, "scan end / search cap [km]");
    app.add_option("--l-step", cfg.l_step, "scan step [km]");
    app.add_option("--trials", cfg.trials, "Monte-Carlo trial count");
    app.add_option("--seed", cfg.seed, "Monte-Carlo seed");
    app.add_option("--n-pairs", cfg.n_pairs, "finite-size total pair count N");
    app.add_option("--delta", cfg.delta, "finite-size per-quantity failure probability");
    app.add_flag("--use-oracle", cfg.use_oracle,
                 "fill the oracle key-rate column (desk-scale mu only)");
    app.add_flag("--two-eta", cfg.two_eta, "use the two-parameter eta~ variant in finite-size");

    auto* sub_keyrate = app.add_subcommand("keyrate", "evaluate the pipeline at one distance");
    auto* sub_scan = app.add_subcommand("scan", "distance scan as CSV");
    auto* sub_find = app.add_subcommand("find-distance", "largest distance with positive rate");
    auto* sub_simulate = app.add_subcommand("simulate", "Monte-Carlo tally vs analytic rates");
    auto* sub_finite = app.add_subcommand("finite-size", "key rate vs N as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (sub_keyrate->parsed()) return cmd_keyrate(cfg);
        if (sub_scan->parsed()) return cmd_scan(cfg);
        if (sub_find->parsed()) return cmd_find_distance(cfg);
        if (sub_simulate->parsed()) return cmd_simulate(cfg);
        if (sub_finite->parsed()) return cmd_finite_size(cfg);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
