#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "irg/analytics.hpp"
#include "irg/connection.hpp"
#include "irg/distributions.hpp"
#include "irg/marked_sampler.hpp"
#include "irg/parallel.hpp"
#include "irg/statespace.hpp"
#include "irg/statistic.hpp"

namespace irg {

struct SpaceSpec {
    SpaceKind kind = SpaceKind::Torus;
    int dimension = 2;
    DensityKind density = DensityKind::Uniform;
    double shape = 1.0; // product-weibull
    double scale = 1.0; // product-weibull
    int bins = 0; // user-tabulated
    std::vector<double> table; // user-tabulated, row-major, last axis fastest
};

struct ConnectionSpec {
    Family family = Family::Constant;
    double p = 0.0;
    double r = 0.0;
    double a = 0.0;
    double cap = 1.0;
    ProfileShape profile = ProfileShape::Rayleigh;
    KernelShape kernel = KernelShape::Gaussian;
    // Partition threshold parameter; when absent it follows the process size.
    std::optional<double> partition_s;
};

struct ProcessSpec {
    ProcessKind kind = ProcessKind::Poisson;
    double intensity = 1.0;
    std::size_t count = 1;

    // s for Poisson, n for binomial.
    double size() const noexcept { return kind == ProcessKind::Poisson ? intensity : static_cast<double>(count); }
};

enum class ScenarioKind {
    None,
    RggPoissonLimit,
    Counterexample,
    EdgeStein,
    Ustat,
    Normality,
    BinomialCoupling,
    Sweep,
};

std::string to_string(ScenarioKind kind);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::None;
    StatisticId target{};
    std::vector<StatisticId> moment_statistics; // rgg-poisson-limit
    std::size_t k = 2; // ustat
    std::size_t binomial_count = 0; // binomial-coupling, 0 = round(s)
    std::vector<double> s_grid; // sweep
    bool recalibrate = false; // sweep
    std::map<std::string, double> tolerances; // resolved, defaults included
};

struct CalibrateSpec {
    double target_alpha = 1.0;
    StatisticId statistic{};
    double tolerance = 1e-9;
    std::optional<std::pair<double, double>> bracket;
};

struct ExperimentConfig {
    SpaceSpec space;
    ConnectionSpec connection;
    ProcessSpec process;
    std::vector<StatisticId> statistics;
    std::size_t replications = 1000;
    std::uint64_t master_seed = 1;
    Construction construction = Construction::Ordered;
    BuildOptions build;
    std::optional<CalibrateSpec> calibrate;
    IntegrationOptions integration;
    BootstrapOptions bootstrap;
    ScenarioSpec scenario;
};

// Default tolerances for a scenario.
std::map<std::string, double> default_tolerances(ScenarioKind kind);

// Throws ConfigError with the JSON pointer of the offending entry.
ExperimentConfig parse_config(const nlohmann::json& document);
ExperimentConfig load_config(const std::filesystem::path& path);

// Fully resolved config, defaults included. Round-trips through parse_config.
nlohmann::json to_json(const ExperimentConfig& config);

ProbabilityMeasure make_measure(const SpaceSpec& spec);
// Bound to the measure's metric. `size` is the process size used by the
// partition family when its parameter is not given.
ConnectionFunction make_connection(const ConnectionSpec& spec, const ProbabilityMeasure& measure,
                                   double size);

struct ReplicationRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t vertices = 0;
    std::vector<std::uint64_t> values; // aligned with the column list
};

struct StatisticSummary {
    std::string column;
    StatisticId id{};
    double mean = 0.0;
    double std_error = 0.0;
    double variance = 0.0;
    std::optional<ExpectationEstimate> analytic;
    std::string analytic_error;
    double alpha = 0.0; // Poisson parameter used for the distances
    double dtv = 0.0; // to Poisson(alpha)
    Interval dtv_interval;
    double dw = 0.0;
    double dtv_fitted = 0.0; // to Poisson(sample mean)
    std::vector<FactorialMoment> factorial; // orders 1, 2, 3
    CountDistribution empirical;
};

struct Verdict {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string relation; // "<=" or ">="
    double threshold = 0.0;
    std::string tolerance; // name of the configured tolerance
    double tolerance_value = 0.0;
    std::string detail;
};

struct CalibrationInfo {
    std::string knob_name;
    double knob = 0.0;
    double target = 0.0;
    double achieved = 0.0;
    StatisticId statistic{};
    EstimateMethod method = EstimateMethod::ClosedForm;
};

struct SweepRow {
    double s = 0.0;
    std::optional<double> knob;
    double alpha_analytic = 0.0;
    double alpha_hat = 0.0;
    double dtv = 0.0;
    Interval dtv_interval;
    double dw = 0.0;
    bool failed = false;
    std::string message;
};

struct SummaryReport {
    nlohmann::json config;
    std::string connection;
    std::vector<StatisticSummary> statistics;
    std::optional<CalibrationInfo> calibration;
    std::optional<SteinBound> edge_bound;
    std::optional<SteinBound> gamma_bound;
    std::optional<NormalityReport> normality;
    std::optional<double> binomial_dtv;
    std::optional<Interval> binomial_dtv_interval;
    std::vector<SweepRow> sweep;
    std::vector<Verdict> verdicts;

    bool all_pass() const;
};

nlohmann::json to_json(const SummaryReport& report);

struct ExperimentResult {
    std::vector<std::string> columns;
    std::vector<ReplicationRecord> records;
    SummaryReport report;
    std::optional<ConnectionFunction> connection; // after calibration; empty for sweeps
};

// Replications only: record i is seeded with derive_key(master_seed,
// kReplication, i) and records are returned sorted by index.
std::vector<ReplicationRecord> simulate(const ExperimentConfig& config, const ConnectionFunction& phi,
                                        const ProbabilityMeasure& measure,
                                        Execution execution = Execution::Parallel);

std::vector<std::string> record_columns(const ExperimentConfig& config);

// The graph measured by the replication with the given seed.
Graph replication_graph(const ExperimentConfig& config, const ConnectionFunction& phi,
                        const ProbabilityMeasure& measure, std::uint64_t seed);

// "v <count>" followed by one "e <i> <j>" line per edge, vertices in
// construction order.
std::string format_edge_list(const Graph& g);

// Calibrates (if requested), simulates, aggregates and evaluates the
// scenario verdicts. Sweep scenarios dispatch to run_sweep.
ExperimentResult run_experiment(const ExperimentConfig& config, Execution execution = Execution::Parallel);

// One row per grid point; calibration failures mark the row FAILED and the
// sweep continues.
ExperimentResult run_sweep(const ExperimentConfig& config, const std::vector<double>& s_grid,
                           bool recalibrate, Execution execution = Execution::Parallel);

enum class RecordFormat { Csv, Jsonl };

std::string format_csv(const std::vector<std::string>& columns, const std::vector<ReplicationRecord>& records);
std::string format_jsonl(const std::vector<std::string>& columns,
                         const std::vector<ReplicationRecord>& records);

// Writes records.{csv,jsonl}, summary.json and plot data (two-column "x y"
// files under plots/) into `directory`. Throws IoError with the path.
void emit(const ExperimentResult& result, RecordFormat format, const std::filesystem::path& directory);

} // namespace irg
