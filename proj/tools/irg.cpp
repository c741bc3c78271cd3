// irg: command-line front end for simulation, analytic expectations, Stein
// bounds, calibration and sweeps.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "irg/analytics.hpp"
#include "irg/error.hpp"
#include "irg/harness.hpp"
#include "irg/parallel.hpp"

using nlohmann::json;

namespace {

// Model given either by a config file or by inline flags.
struct ModelFlags {
    std::string config;
    std::string space = "torus";
    int dimension = 2;
    std::string density;
    std::string family;
    std::optional<double> p;
    std::optional<double> r;
    std::optional<double> a;
    std::optional<double> cap;
    std::string kernel = "gaussian";
    std::string profile = "rayleigh";
    std::optional<double> partition_s;
    std::optional<double> s;
    std::size_t outer = 20000;
    std::size_t inner = 0;
    std::uint64_t integration_seed = irg::IntegrationOptions{}.seed;

    void attach(CLI::App* app)
    {
        app->add_option("-c,--config", config, "Experiment config (space, connection and process sections are used)");
        app->add_option("--space", space, "unit-cube | torus | euclidean");
        app->add_option("--dimension", dimension, "State space dimension");
        app->add_option("--density", density, "uniform | isotropic-gaussian | product-weibull");
        app->add_option("--family", family,
                        "constant | hard-disk | soft-disk | profile | kernel-capped | partition-counterexample");
        app->add_option("--p", p, "Connection probability / amplitude");
        app->add_option("--r", r, "Connection radius / length scale");
        app->add_option("--a", a, "Kernel scale (kernel-capped)");
        app->add_option("--cap", cap, "Kernel cap (kernel-capped)");
        app->add_option("--kernel", kernel, "gaussian | product (kernel-capped)");
        app->add_option("--profile", profile, "rayleigh | exponential (profile)");
        app->add_option("--partition-s", partition_s, "Partition parameter (defaults to --s)");
        app->add_option("--s", s, "Poisson intensity s");
        app->add_option("--outer", outer, "Outer Monte Carlo samples");
        app->add_option("--inner", inner, "Inner Monte Carlo samples (0 = automatic)");
        app->add_option("--integration-seed", integration_seed, "Integration seed");
    }

    irg::ExperimentConfig resolve() const
    {
        irg::ExperimentConfig cfg;
        if (!config.empty()) {
            cfg = irg::load_config(config);
        } else {
            if (family.empty()) {
                throw irg::ConfigError("give --config or --family");
            }
            json space_doc{{"kind", space}, {"dimension", dimension}};
            if (!density.empty()) {
                space_doc["density"] = density;
            }
            json conn{{"family", family}};
            auto put = [&](const char* key, const std::optional<double>& v) {
                if (v) {
                    conn[key] = *v;
                }
            };
            put("p", p);
            put("r", r);
            put("a", a);
            put("cap", cap);
            put("s", partition_s);
            if (family == "kernel-capped") {
                conn["kernel"] = kernel;
            }
            if (family == "profile") {
                conn["shape"] = profile;
            }
            if (!s) {
                throw irg::ConfigError("--s is required with inline model flags");
            }
            const json doc{{"space", space_doc},
                           {"connection", conn},
                           {"process", {{"type", "poisson"}, {"intensity", *s}}}};
            cfg = irg::parse_config(doc);
        }
        if (s) {
            cfg.process.kind = irg::ProcessKind::Poisson;
            cfg.process.intensity = *s;
        }
        cfg.integration.outer = outer;
        cfg.integration.inner = inner;
        cfg.integration.seed = integration_seed;
        return cfg;
    }
};

void print(const json& record)
{
    std::cout << record.dump(2) << '\n';
}

json estimate_record(const irg::ExpectationEstimate& e)
{
    return json{{"value", e.value},
                {"std_error", e.std_error},
                {"samples", {{"outer", e.outer_samples}, {"inner", e.inner_samples}}},
                {"method", irg::to_string(e.method)}};
}

int finish_experiment(const irg::ExperimentResult& result, const std::string& out, const std::string& format)
{
    if (!out.empty()) {
        irg::emit(result, format == "jsonl" ? irg::RecordFormat::Jsonl : irg::RecordFormat::Csv, out);
    }
    for (const auto& v : result.report.verdicts) {
        std::printf("%-4s %-36s %.6g %s %.6g  (%s)\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.value,
                    v.relation.c_str(), v.threshold, v.detail.c_str());
    }
    for (const auto& s : result.report.statistics) {
        std::printf("     %-8s mean %.6g +- %.3g  alpha %.6g  dTV %.4g [%.4g, %.4g]  dW %.4g\n", s.column.c_str(),
                    s.mean, s.std_error, s.alpha, s.dtv, s.dtv_interval.lower, s.dtv_interval.upper, s.dw);
    }
    for (const auto& r : result.report.sweep) {
        if (r.failed) {
            std::printf("     s=%-10g FAILED  %s\n", r.s, r.message.c_str());
        } else {
            std::printf("     s=%-10g knob %-12.6g alpha %.6g  alpha_hat %.6g  dTV %.4g  dW %.4g\n", r.s,
                        r.knob.value_or(NAN), r.alpha_analytic, r.alpha_hat, r.dtv, r.dw);
        }
    }
    const bool pass = result.report.all_pass();
    std::printf("%s\n", pass ? "ALL VERDICTS PASS" : "SOME VERDICTS FAILED");
    return pass ? 0 : 1;
}

void dump_edge_lists(const irg::ExperimentConfig& cfg, const irg::ConnectionFunction& phi,
                     const std::vector<irg::ReplicationRecord>& records, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw irg::IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    const auto measure = irg::make_measure(cfg.space);
    for (const auto& r : records) {
        const auto path = dir / ("graph_" + std::to_string(r.index) + ".txt");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << irg::format_edge_list(irg::replication_graph(cfg, phi, measure, r.seed));
        if (!out) {
            throw irg::IoError("failed writing " + path.string());
        }
    }
}

} // namespace

int main(int argc, char** argv)
{
    irg::apply_thread_env();
    CLI::App app{"Inhomogeneous random graph laboratory"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config;
    std::optional<std::uint64_t> sim_seed;
    std::string sim_out;
    std::string sim_format = "csv";
    bool serial = false;
    auto* simulate = app.add_subcommand("simulate", "Run the experiment described by a config file");
    simulate->add_option("-c,--config", sim_config, "Experiment config (JSON)")->required();
    simulate->add_option("--seed", sim_seed, "Override master_seed");
    simulate->add_option("--out", sim_out, "Output directory");
    simulate->add_option("--format", sim_format, "Record format")->check(CLI::IsMember({"csv", "jsonl"}));
    simulate->add_flag("--serial", serial, "Use the serial reference path");
    std::string sim_process;
    std::optional<double> sim_intensity;
    std::optional<std::size_t> sim_count;
    std::optional<std::size_t> sim_reps;
    std::string dump_graphs;
    simulate->add_option("--process", sim_process, "Override the process kind")
        ->check(CLI::IsMember({"poisson", "binomial"}));
    simulate->add_option("--intensity", sim_intensity, "Poisson intensity s");
    simulate->add_option("--count", sim_count, "Binomial point count n");
    simulate->add_option("--replications", sim_reps, "Override the replication count");
    simulate->add_option("--dump-graphs", dump_graphs, "Write one edge list per replication into this directory");

    // expect
    ModelFlags expect_model;
    std::string formula;
    auto* expect = app.add_subcommand("expect", "Analytic expectation of D_j, N_k or H_k");
    expect_model.attach(expect);
    expect->add_option("--formula", formula, "D<j> | N<k> | H<k>")->required();

    // bound
    ModelFlags bound_model;
    std::string bound_kind = "edge";
    std::size_t bound_k = 2;
    auto* bound = app.add_subcommand("bound", "Stein-method Poisson approximation bound");
    bound_model.attach(bound);
    bound->add_option("--kind", bound_kind, "edge | ustat")->check(CLI::IsMember({"edge", "ustat"}));
    bound->add_option("--k", bound_k, "Order of the U-statistic (connected k-subsets)");

    // calibrate
    ModelFlags cal_model;
    double target_alpha = 1.0;
    std::string cal_stat = "D0";
    double cal_tol = 1e-9;
    auto* calibrate = app.add_subcommand("calibrate", "Choose the family knob so that E[statistic] = alpha");
    cal_model.attach(calibrate);
    calibrate->add_option("--target-alpha", target_alpha, "Target mean");
    calibrate->add_option("--statistic", cal_stat, "D<j> | N<k>");
    calibrate->add_option("--tolerance", cal_tol, "Absolute tolerance on the mean");

    // sweep
    std::string sweep_config;
    std::vector<double> grid;
    bool recalibrate = false;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Convergence sweep over intensities");
    sweep->add_option("-c,--config", sweep_config, "Experiment config (JSON)")->required();
    sweep->add_option("--grid", grid, "Ascending intensities (overrides scenario s_grid)")->delimiter(',');
    sweep->add_flag("--recalibrate", recalibrate, "Recalibrate the knob at each s");
    sweep->add_option("--out", sweep_out, "Output directory");

    // counterexample
    double cx_s = 1000.0;
    std::size_t cx_reps = 20000;
    std::uint64_t cx_seed = 1;
    std::string cx_out;
    auto* counter = app.add_subcommand("counterexample", "Partition counterexample: D0 is not Poisson");
    counter->add_option("--s", cx_s, "Intensity and partition parameter");
    counter->add_option("--replications", cx_reps, "Replications");
    counter->add_option("--seed", cx_seed, "Master seed");
    counter->add_option("--out", cx_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto exec = serial ? irg::Execution::Serial : irg::Execution::Parallel;
        if (simulate->parsed()) {
            auto cfg = irg::load_config(sim_config);
            if (sim_seed) {
                cfg.master_seed = *sim_seed;
            }
            if (!sim_process.empty()) {
                cfg.process.kind = sim_process == "poisson" ? irg::ProcessKind::Poisson : irg::ProcessKind::Binomial;
            }
            if (sim_intensity) {
                cfg.process.intensity = *sim_intensity;
            }
            if (sim_count) {
                cfg.process.count = *sim_count;
            }
            if (sim_reps) {
                cfg.replications = *sim_reps;
            }
            // Re-validate after the overrides.
            cfg = irg::parse_config(irg::to_json(cfg));
            const auto start = std::chrono::steady_clock::now();
            const auto result = irg::run_experiment(cfg, exec);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::fprintf(stderr, "%zu replications in %.2f s on %d thread(s)\n", cfg.replications, seconds,
                         serial ? 1 : irg::max_threads());
            if (!dump_graphs.empty() && result.connection) {
                dump_edge_lists(cfg, *result.connection, result.records, dump_graphs);
            }
            return finish_experiment(result, sim_out, sim_format);
        }
        if (expect->parsed()) {
            const auto cfg = expect_model.resolve();
            const auto measure = irg::make_measure(cfg.space);
            const double s = cfg.process.size();
            const auto phi = irg::make_connection(cfg.connection, measure, s);
            const auto id = irg::parse_statistic(formula);
            auto record = estimate_record(irg::expected_statistic(s, phi, measure, id, cfg.integration));
            record["formula"] = irg::to_string(id);
            record["connection"] = phi.describe();
            record["s"] = s;
            print(record);
            return 0;
        }
        if (bound->parsed()) {
            const auto cfg = bound_model.resolve();
            const auto measure = irg::make_measure(cfg.space);
            const double s = cfg.process.size();
            const auto phi = irg::make_connection(cfg.connection, measure, s);
            const auto b = bound_kind == "edge"
                               ? irg::edge_stein_bound(s, phi, measure, cfg.integration)
                               : irg::ustat_gamma(bound_k, irg::indicator_selection(phi, bound_k), s, measure,
                                                  cfg.integration);
            print(json{{"value", b.tv_bound},
                       {"std_error", b.std_error},
                       {"samples", {{"outer", cfg.integration.outer}, {"inner", cfg.integration.inner}}},
                       {"method", irg::to_string(b.method)},
                       {"kind", bound_kind},
                       {"k", b.k},
                       {"alpha", b.alpha},
                       {"w_bound", b.w_bound},
                       {"gamma", b.gamma},
                       {"gamma_std_error", b.gamma_std_error},
                       {"connection", phi.describe()}});
            return 0;
        }
        if (calibrate->parsed()) {
            const auto cfg = cal_model.resolve();
            const auto measure = irg::make_measure(cfg.space);
            const double s = cfg.process.size();
            const auto phi = irg::make_connection(cfg.connection, measure, s);
            irg::CalibrationRequest request;
            request.s = s;
            request.target_alpha = target_alpha;
            request.statistic = irg::parse_statistic(cal_stat);
            request.tolerance = cal_tol;
            request.integration = cfg.integration;
            const auto result = irg::calibrate_parameter(phi, measure, request);
            print(json{{"value", result.knob},
                       {"std_error", 0.0},
                       {"samples", {{"outer", cfg.integration.outer}, {"inner", cfg.integration.inner}}},
                       {"method", irg::to_string(result.method)},
                       {"knob", phi.knob_name()},
                       {"achieved", result.achieved},
                       {"iterations", result.iterations},
                       {"connection", result.phi.describe()}});
            return 0;
        }
        if (sweep->parsed()) {
            auto cfg = irg::load_config(sweep_config);
            const auto& use_grid = grid.empty() ? cfg.scenario.s_grid : grid;
            const bool recal = recalibrate || cfg.scenario.recalibrate;
            if (recal && !cfg.calibrate) {
                cfg.calibrate = irg::CalibrateSpec{};
            }
            const auto result = irg::run_sweep(cfg, use_grid, recal, exec);
            return finish_experiment(result, sweep_out, "csv");
        }
        if (counter->parsed()) {
            const json doc{
                {"space", {{"kind", "unit-cube"}, {"dimension", 1}}},
                {"connection", {{"family", "partition-counterexample"}}},
                {"process", {{"type", "poisson"}, {"intensity", cx_s}}},
                {"statistics", {"D0"}},
                {"replications", cx_reps},
                {"master_seed", cx_seed},
                {"scenario", {{"name", "counterexample"}}},
            };
            const auto result = irg::run_experiment(irg::parse_config(doc), exec);
            return finish_experiment(result, cx_out, "csv");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "irg: %s\n", e.what());
        return 2;
    }
    return 0;
}
