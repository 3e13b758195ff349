// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: dictionary generation, greedy matrix selection,
// Monte-Carlo sweeps, guarantee evaluation, and SVG reports.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmp/config.hpp"
#include "lmp/io.hpp"
#include "lmp/nuws.hpp"
#include "lmp/svgplot.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lmp;

struct ConfigOpts {
    std::string config_name = "default";
    std::vector<std::string> overrides;
    bool print_config = false;
};

void add_config_opts(CLI::App* cmd, ConfigOpts& opts) {
    cmd->add_option("--config", opts.config_name,
                    "Config file path, or 'default' for built-in defaults");
    cmd->add_option("--set", opts.overrides, "Override a config field, e.g. --set p=2")
        ->take_all();
    cmd->add_flag("--print-config", opts.print_config, "Dump the effective config to stdout");
}

// Resolves --config: "default" yields built-in defaults; bare names are also
// looked up under $LMP_CONFIG_DIR.
std::string resolve_config_text(const std::string& name) {
    if (name == "default") return serialize_config(BenchmarkConfig{});
    if (fs::exists(name)) return io::load_text(name);
    if (name.find('/') == std::string::npos) {
        if (const char* dir = std::getenv("LMP_CONFIG_DIR")) {
            for (const std::string candidate :
                 {std::string(dir) + "/" + name, std::string(dir) + "/" + name + ".json"})
                if (fs::exists(candidate)) return io::load_text(candidate);
        }
    }
    throw std::runtime_error("config error: cannot read config '" + name + "'");
}

BenchmarkConfig load_config(const ConfigOpts& opts) {
    std::string text = resolve_config_text(opts.config_name);
    try {
        for (const auto& assignment : opts.overrides)
            text = apply_override(text, assignment);
        BenchmarkConfig cfg = parse_config(text);
        if (opts.print_config) std::cout << serialize_config(cfg);
        return cfg;
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("validation error: ") + e.what());
    }
}

WaveletDictionary dictionary_from_config(const BenchmarkConfig& cfg) {
    return build_dictionary(cfg.n, cfg.dictionary.tau_step, cfg.dictionary.rho_set,
                            cfg.dictionary.halfperiod_set, cfg.dictionary.cap);
}

std::optional<int> candidates_opt(const BenchmarkConfig& cfg) {
    if (cfg.dictionary.candidates_per_step > 0) return cfg.dictionary.candidates_per_step;
    return std::nullopt;
}

int run(int argc, char** argv) {
    CLI::App app{"Compressive whitespace detection benchmark"};
    app.require_subcommand(1);

    ConfigOpts dict_opts, select_opts, sweep_opts, guarantee_opts, report_opts;
    std::uint64_t seed = 0;
    bool seed_given = false;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Random seed")->each([&](const std::string&) {
            seed_given = true;
        });
    };

    // dict-gen
    auto* dict_cmd = app.add_subcommand("dict-gen", "Build and write the wavelet dictionary");
    std::string dict_out = "dictionary.txt";
    add_config_opts(dict_cmd, dict_opts);
    add_seed(dict_cmd);
    dict_cmd->add_option("--out", dict_out, "Output dictionary file");

    // matrix-select
    auto* select_cmd =
        app.add_subcommand("matrix-select", "Greedy coherence-minimizing row selection");
    std::string select_dict, select_out = "selection.txt", select_matrix_out, select_traj_out;
    int select_m = 0;
    add_config_opts(select_cmd, select_opts);
    add_seed(select_cmd);
    select_cmd->add_option("--dict", select_dict, "Dictionary file (from dict-gen)");
    select_cmd->add_option("--m", select_m, "Number of rows to select")->required();
    select_cmd->add_option("--out-selection", select_out, "Output selection file");
    select_cmd->add_option("--out-matrix", select_matrix_out, "Output sensing-matrix file");
    select_cmd->add_option("--out-trajectory", select_traj_out,
                           "Output per-step coherence trajectory");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Run the Monte-Carlo error-rate sweep");
    std::string sweep_dict, sweep_out = "results.csv";
    std::vector<std::string> sweep_selections;
    int workers = 1;
    add_config_opts(sweep_cmd, sweep_opts);
    add_seed(sweep_cmd);
    sweep_cmd->add_option("--dict", sweep_dict, "Dictionary file");
    sweep_cmd->add_option("--selection", sweep_selections,
                          "Selection file per M as m=path (repeatable)")
        ->take_all();
    sweep_cmd->add_option("--out", sweep_out, "Output results table");
    sweep_cmd->add_option("--workers", workers, "Worker threads (output identical for any k)");

    // guarantee
    auto* guarantee_cmd =
        app.add_subcommand("guarantee", "Evaluate the detection guarantee on an instance file");
    std::string instance_path;
    add_config_opts(guarantee_cmd, guarantee_opts);
    add_seed(guarantee_cmd);
    guarantee_cmd->add_option("--instance", instance_path, "Instance file")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "Render an SVG chart from a results table");
    std::string results_path, plot_out = "plot.svg";
    add_config_opts(report_cmd, report_opts);
    add_seed(report_cmd);
    report_cmd->add_option("--results", results_path, "Results table")->required();
    report_cmd->add_option("--out", plot_out, "Output SVG file");

    CLI11_PARSE(app, argc, argv);

    if (dict_cmd->parsed()) {
        const BenchmarkConfig cfg = load_config(dict_opts);
        const WaveletDictionary dict = dictionary_from_config(cfg);
        io::save_text(dict_out, [&](std::ostream& out) { io::write_dictionary(out, dict); });
        std::cout << "wrote " << dict_out << " (" << dict.size() << " rows)\n";
        return 0;
    }

    if (select_cmd->parsed()) {
        const BenchmarkConfig cfg = load_config(select_opts);
        WaveletDictionary dict;
        if (select_dict.empty()) {
            dict = dictionary_from_config(cfg);
        } else {
            std::istringstream in(io::load_text(select_dict));
            dict = io::read_dictionary(in);
        }
        const BlockPartition partition = channel_plan(cfg).partition();
        const std::uint64_t sel_seed = seed_given ? seed : cfg.seed;
        const SelectionResult sel =
            greedy_select(dict, partition, select_m, candidates_opt(cfg), sel_seed);
        io::save_text(select_out, [&](std::ostream& out) { io::write_selection(out, sel.chosen); });
        std::cout << "wrote " << select_out << " (M=" << select_m
                  << ", final coherence=" << sel.coherence_trajectory.back() << ")\n";
        if (!select_matrix_out.empty())
            io::save_text(select_matrix_out,
                          [&](std::ostream& out) { io::write_matrix(out, sel.matrix); });
        if (!select_traj_out.empty())
            io::save_text(select_traj_out, [&](std::ostream& out) {
                for (double mu : sel.coherence_trajectory) out << mu << '\n';
            });
        return 0;
    }

    if (sweep_cmd->parsed()) {
        const BenchmarkConfig cfg = load_config(sweep_opts);
        if (sweep_dict.empty())
            throw std::runtime_error("io error: sweep requires --dict (run dict-gen first)");
        std::istringstream din(io::load_text(sweep_dict));
        const WaveletDictionary dict = io::read_dictionary(din);
        const BlockPartition partition = channel_plan(cfg).partition();

        std::map<int, std::string> selection_paths;
        for (const auto& s : sweep_selections) {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("validation error: --selection expects m=path");
            selection_paths[std::stoi(s.substr(0, eq))] = s.substr(eq + 1);
        }
        std::map<int, SensingMatrix> matrices;
        for (int m : cfg.m_values) {
            auto it = selection_paths.find(m);
            if (it == selection_paths.end())
                throw std::runtime_error("io error: missing --selection for M=" +
                                         std::to_string(m));
            std::istringstream sin(io::load_text(it->second));
            const std::vector<int> chosen = io::read_selection(sin);
            CMat theta(chosen.size(), cfg.n);
            for (std::size_t r = 0; r < chosen.size(); ++r) {
                if (chosen[r] < 0 || chosen[r] >= dict.size())
                    throw std::runtime_error("validation error: selection index out of range");
                theta.row(static_cast<Eigen::Index>(r)) =
                    dict.rows.row(chosen[r]).cast<cxd>();
            }
            matrices.emplace(m, effective_matrix(theta, cfg.n, partition));
        }
        const std::uint64_t sweep_seed = seed_given ? seed : cfg.seed;
        const rfsim::ErrorCurve curve =
            rfsim::run_sweep(sweep_config(cfg), matrices, sweep_seed, workers);
        io::save_text(sweep_out, [&](std::ostream& out) { io::write_results(out, curve); });
        std::cout << "wrote " << sweep_out << " (" << curve.cells.size() << " cells)\n";
        return 0;
    }

    if (guarantee_cmd->parsed()) {
        std::istringstream in(io::load_text(instance_path));
        const io::GuaranteeInstance inst = io::read_instance(in);
        const BlockSparseSignal x(inst.signal, inst.matrix.partition());
        const GuaranteeReport report = check_zd_guarantee(inst.matrix, x, inst.noise_norm);
        std::cout << "lhs (dynamic ratio)  = " << report.lhs << "\n"
                  << "rhs (threshold)      = " << report.rhs << "\n"
                  << "holds                = " << (report.holds ? "true" : "false") << "\n"
                  << "block coherence      = " << report.mu_b << "\n"
                  << "min block sing. val  = " << report.sigma_min << "\n"
                  << "min used block norm  = " << report.x_min_norm << "\n"
                  << "noise norm           = " << report.noise_norm << "\n";
        return 0;
    }

    if (report_cmd->parsed()) {
        std::istringstream in(io::load_text(results_path));
        const rfsim::ErrorCurve curve = io::read_results(in);
        io::save_text(plot_out, [&](std::ostream& out) { emit_plot(curve, out); });
        std::cout << "wrote " << plot_out << "\n";
        return 0;
    }

    std::cerr << "error: unknown subcommand\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::runtime_error& e) {
        // Messages already carry their prefix where one applies.
        std::string msg = e.what();
        if (msg.rfind("config error:", 0) != 0 && msg.rfind("validation error:", 0) != 0 &&
            msg.rfind("io error:", 0) != 0)
            msg = "io error: " + msg;
        std::cerr << msg << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    }
}
