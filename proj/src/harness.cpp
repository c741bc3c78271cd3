#include "irg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "irg/error.hpp"
#include "irg/graph_stats.hpp"
#include "irg/rng.hpp"

namespace irg {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSweepStream = 0x5EE9;

bool needs_graph(const std::vector<StatisticId>& stats)
{
    return std::any_of(stats.begin(), stats.end(), [](const StatisticId& id) {
        return id.kind == StatisticKind::ConnectedInduced && id.index > 2;
    });
}

std::vector<std::uint64_t> measure_statistics(const MarkedConfiguration& mc, const ConnectionFunction& phi,
                                              Construction construction, const BuildOptions& build,
                                              const std::vector<StatisticId>& stats)
{
    std::vector<std::uint64_t> values;
    values.reserve(stats.size());
    if (needs_graph(stats)) {
        const Graph g = build_graph(mc, phi, construction, build);
        const auto degrees = degree_counts(g);
        const auto components = component_counts(g);
        for (const auto& id : stats) {
            switch (id.kind) {
            case StatisticKind::Degree: values.push_back(degrees.count(id.index)); break;
            case StatisticKind::Component: values.push_back(components.count(id.index)); break;
            case StatisticKind::ConnectedInduced: values.push_back(connected_induced_count(g, id.index)); break;
            }
        }
        return values;
    }
    const bool components_needed = std::any_of(stats.begin(), stats.end(), [](const StatisticId& id) {
        return id.kind == StatisticKind::Component;
    });
    StreamingCounter counter(mc.size(), components_needed);
    visit_edges(mc, phi, construction, build, counter);
    std::optional<DegreeHistogram> degrees;
    std::optional<ComponentSummary> components;
    for (const auto& id : stats) {
        switch (id.kind) {
        case StatisticKind::Degree:
            if (!degrees) {
                degrees = counter.degrees();
            }
            values.push_back(degrees->count(id.index));
            break;
        case StatisticKind::Component:
            if (!components) {
                components = counter.components();
            }
            values.push_back(components->count(id.index));
            break;
        case StatisticKind::ConnectedInduced: values.push_back(counter.edge_count()); break;
        }
    }
    return values;
}

MarkedConfiguration sample_configuration(const ExperimentConfig& config, const ProbabilityMeasure& measure,
                                         std::uint64_t seed)
{
    if (config.process.kind == ProcessKind::Poisson) {
        return sample_poisson_configuration(measure, config.process.intensity, seed);
    }
    return sample_binomial_configuration(measure, config.process.count, seed);
}

Verdict make_verdict(std::string name, double value, const char* relation, double threshold,
                     const std::string& tolerance, double tolerance_value, std::string detail)
{
    Verdict v;
    v.name = std::move(name);
    v.value = value;
    v.relation = relation;
    v.threshold = threshold;
    v.tolerance = tolerance;
    v.tolerance_value = tolerance_value;
    v.detail = std::move(detail);
    v.pass = v.relation == "<=" ? value <= threshold : value >= threshold;
    if (!std::isfinite(value)) {
        v.pass = false;
    }
    return v;
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

StatisticSummary summarize(const std::string& column, const StatisticId& id,
                           const std::vector<std::uint64_t>& samples,
                           const std::optional<ExpectationEstimate>& analytic, std::string analytic_error,
                           const BootstrapOptions& bootstrap)
{
    StatisticSummary s;
    s.column = column;
    s.id = id;
    s.analytic = analytic;
    s.analytic_error = std::move(analytic_error);
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (std::uint64_t x : samples) {
        sum += static_cast<double>(x);
    }
    s.mean = sum / n;
    double ss = 0.0;
    for (std::uint64_t x : samples) {
        const double d = static_cast<double>(x) - s.mean;
        ss += d * d;
    }
    s.variance = samples.size() > 1 ? ss / (n - 1.0) : 0.0;
    s.std_error = std::sqrt(s.variance / n);
    s.empirical = empirical_law(samples);
    s.alpha = analytic ? std::max(0.0, analytic->value) : s.mean;
    const auto target = poisson_law(s.alpha);
    s.dtv = tv_distance(s.empirical, target);
    s.dw = wasserstein_distance(s.empirical, target);
    s.dtv_interval = bootstrap_tv_interval(samples, target, bootstrap);
    s.dtv_fitted = tv_distance(s.empirical, poisson_law(s.mean));
    for (unsigned order = 1; order <= 3; ++order) {
        s.factorial.push_back(factorial_moment(samples, order));
    }
    return s;
}

std::vector<std::uint64_t> column_values(const std::vector<ReplicationRecord>& records, std::size_t c)
{
    std::vector<std::uint64_t> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(r.values[c]);
    }
    return out;
}

std::size_t column_index(const std::vector<std::string>& columns, const std::string& name)
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw ConfigError("statistic " + name + " is not among the recorded columns");
    }
    return static_cast<std::size_t>(it - columns.begin());
}

IntegrationOptions integration_for(const ExperimentConfig& config, Execution execution)
{
    IntegrationOptions options = config.integration;
    options.execution = execution;
    return options;
}

void analytic_for(const ExperimentConfig& config, const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                  double s, const StatisticId& id, Execution execution,
                  std::optional<ExpectationEstimate>& value, std::string& error)
{
    try {
        value = expected_statistic(s, phi, measure, id, integration_for(config, execution));
    } catch (const CapabilityError& e) {
        error = e.what();
    } catch (const DomainError& e) {
        error = e.what();
    }
}

void evaluate_scenario(const ExperimentConfig& config, const ConnectionFunction& phi,
                       const ProbabilityMeasure& measure, const std::vector<std::string>& columns,
                       const std::vector<ReplicationRecord>& records, SummaryReport& report, Execution execution)
{
    const ScenarioSpec& sc = config.scenario;
    const auto& tol = sc.tolerances;
    const double s = config.process.size();
    const std::string target_name = to_string(sc.target);
    const std::size_t target_col = column_index(columns, target_name);
    const StatisticSummary& target = report.statistics[target_col];
    const auto samples = column_values(records, target_col);
    const IntegrationOptions integration = integration_for(config, execution);

    switch (sc.kind) {
    case ScenarioKind::None:
    case ScenarioKind::Sweep: break;
    case ScenarioKind::RggPoissonLimit: {
        const double limit = tol.at("dtv_max");
        report.verdicts.push_back(make_verdict(
            "dtv_poisson_" + target_name, target.dtv_interval.upper, "<=", limit, "dtv_max", limit,
            "upper bootstrap edge of d_TV(" + target_name + ", Poisson(" + fmt(target.alpha) + ")); point " +
                fmt(target.dtv)));
        const double sigma = tol.at("factorial_sigma");
        for (const auto& id : sc.moment_statistics) {
            const auto& m = report.statistics[column_index(columns, to_string(id))];
            const FactorialMoment& fm = m.factorial[1];
            const double expected = m.alpha * m.alpha;
            report.verdicts.push_back(make_verdict(
                "factorial_moment_2_" + m.column, std::fabs(fm.estimate - expected), "<=", sigma * fm.std_error,
                "factorial_sigma", sigma,
                "E(" + m.column + ")_2 = " + fmt(fm.estimate) + " +- " + fmt(fm.std_error) + " vs alpha^2 = " +
                    fmt(expected)));
        }
        break;
    }
    case ScenarioKind::Counterexample: {
        const double gap = tol.at("bernoulli_gap");
        const double p1 = target.empirical.pmf.size() > 1 ? target.empirical.pmf[1] : 0.0;
        const double limit = std::exp(-1.0);
        report.verdicts.push_back(make_verdict("bernoulli_mass_" + target_name, std::fabs(p1 - limit), "<=", gap,
                                               "bernoulli_gap", gap,
                                               "P[" + target_name + "=1] = " + fmt(p1) + " vs exp(-1)"));
        const double floor = tol.at("dtv_min");
        const Interval ci = bootstrap_tv_interval(samples, poisson_law(target.mean), config.bootstrap);
        report.verdicts.push_back(make_verdict(
            "dtv_fitted_poisson_" + target_name, ci.lower, ">=", floor, "dtv_min", floor,
            "lower bootstrap edge of d_TV(" + target_name + ", Poisson(" + fmt(target.mean) + ")); point " +
                fmt(target.dtv_fitted)));
        break;
    }
    case ScenarioKind::EdgeStein: {
        const SteinBound bound = edge_stein_bound(s, phi, measure, integration);
        report.edge_bound = bound;
        const double margin = tol.at("bootstrap_margin");
        report.verdicts.push_back(make_verdict(
            "dtv_below_edge_bound", target.dtv_interval.upper, "<=", bound.tv_bound + margin, "bootstrap_margin",
            margin,
            "upper bootstrap edge of d_TV(" + target_name + ", Poisson(" + fmt(target.alpha) +
                ")) vs edge bound " + fmt(bound.tv_bound)));
        break;
    }
    case ScenarioKind::Ustat: {
        const SteinBound gamma = ustat_gamma(sc.k, indicator_selection(phi, sc.k), s, measure, integration);
        report.gamma_bound = gamma;
        const double margin = tol.at("bootstrap_margin");
        report.verdicts.push_back(make_verdict(
            "dtv_below_gamma_bound", target.dtv_interval.upper, "<=", gamma.tv_bound + margin, "bootstrap_margin",
            margin,
            "upper bootstrap edge of d_TV(" + target_name + ", Poisson(" + fmt(target.alpha) +
                ")) vs gamma bound " + fmt(gamma.tv_bound)));
        if (sc.k == 2) {
            const SteinBound edge = edge_stein_bound(s, phi, measure, integration);
            report.edge_bound = edge;
            const double sigma = tol.at("agreement_sigma");
            const double se = std::sqrt(gamma.std_error * gamma.std_error + edge.std_error * edge.std_error);
            report.verdicts.push_back(make_verdict(
                "gamma_matches_edge_bound", std::fabs(gamma.tv_bound - edge.tv_bound), "<=", sigma * se + 1e-12,
                "agreement_sigma", sigma,
                "gamma bound " + fmt(gamma.tv_bound) + " vs edge bound " + fmt(edge.tv_bound) +
                    ", combined SE " + fmt(se)));
        }
        break;
    }
    case ScenarioKind::Normality: {
        const auto normal = normality_diagnostic(samples, target.alpha);
        report.normality = normal;
        const double gap = tol.at("cdf_gap");
        report.verdicts.push_back(make_verdict(
            "normal_cdf_" + target_name, normal.degenerate ? INFINITY : normal.max_deviation, "<=", gap,
            "cdf_gap", gap,
            "max |F_mid(z) - Phi(z)| over z in {-1,0,1}, standardized by alpha = " + fmt(target.alpha) +
                (normal.degenerate ? "; degenerate sample" : "")));
        break;
    }
    case ScenarioKind::BinomialCoupling: {
        const auto other = column_values(records, column_index(columns, target_name + "_binomial"));
        const double dtv = tv_distance(empirical_law(samples), empirical_law(other));
        report.binomial_dtv = dtv;
        report.binomial_dtv_interval = bootstrap_tv_interval(samples, other, config.bootstrap);
        const double limit = tol.at("dtv_max");
        report.verdicts.push_back(make_verdict(
            "dtv_poisson_vs_binomial_" + target_name, dtv, "<=", limit, "dtv_max", limit,
            "Poisson(" + fmt(config.process.intensity) + ") vs binomial(" + std::to_string(sc.binomial_count) +
                ") on one mark stream"));
        break;
    }
    }
}

} // namespace

bool SummaryReport::all_pass() const
{
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<std::string> record_columns(const ExperimentConfig& config)
{
    std::vector<std::string> columns;
    for (const auto& id : config.statistics) {
        columns.push_back(to_string(id));
    }
    if (config.scenario.kind == ScenarioKind::BinomialCoupling) {
        for (const auto& id : config.statistics) {
            columns.push_back(to_string(id) + "_binomial");
        }
    }
    return columns;
}

Graph replication_graph(const ExperimentConfig& config, const ConnectionFunction& phi,
                        const ProbabilityMeasure& measure, std::uint64_t seed)
{
    return build_graph(sample_configuration(config, measure, seed), phi, config.construction, config.build);
}

std::vector<ReplicationRecord> simulate(const ExperimentConfig& config, const ConnectionFunction& phi,
                                        const ProbabilityMeasure& measure, Execution execution)
{
    std::vector<ReplicationRecord> records(config.replications);
    const bool coupled = config.scenario.kind == ScenarioKind::BinomialCoupling;
    for_each_index(config.replications, execution, [&](std::size_t i) {
        ReplicationRecord& r = records[i];
        r.index = i;
        r.seed = derive_key(config.master_seed, stream::kReplication, i);
        const MarkedConfiguration mc = sample_configuration(config, measure, r.seed);
        r.vertices = mc.size();
        r.values = measure_statistics(mc, phi, config.construction, config.build, config.statistics);
        if (coupled) {
            // Same seed: the binomial points are a prefix of the Poisson stream.
            const MarkedConfiguration bin =
                sample_binomial_configuration(measure, config.scenario.binomial_count, r.seed);
            const auto extra = measure_statistics(bin, phi, config.construction, config.build, config.statistics);
            r.values.insert(r.values.end(), extra.begin(), extra.end());
        }
    });
    return records;
}

ExperimentResult run_experiment(const ExperimentConfig& config, Execution execution)
{
    if (config.scenario.kind == ScenarioKind::Sweep) {
        return run_sweep(config, config.scenario.s_grid, config.scenario.recalibrate, execution);
    }
    const ProbabilityMeasure measure = make_measure(config.space);
    const double s = config.process.size();
    ConnectionFunction phi = make_connection(config.connection, measure, s);

    ExperimentResult result;
    SummaryReport& report = result.report;
    report.config = to_json(config);
    if (config.calibrate) {
        CalibrationRequest request;
        request.s = s;
        request.target_alpha = config.calibrate->target_alpha;
        request.statistic = config.calibrate->statistic;
        request.tolerance = config.calibrate->tolerance;
        request.bracket = config.calibrate->bracket;
        request.integration = integration_for(config, execution);
        const auto cal = calibrate_parameter(phi, measure, request);
        phi = cal.phi;
        report.calibration =
            CalibrationInfo{phi.knob_name(), cal.knob, request.target_alpha, cal.achieved, request.statistic, cal.method};
    }
    report.connection = phi.describe();

    result.columns = record_columns(config);
    result.records = simulate(config, phi, measure, execution);

    std::vector<StatisticId> ids = config.statistics;
    if (config.scenario.kind == ScenarioKind::BinomialCoupling) {
        ids.insert(ids.end(), config.statistics.begin(), config.statistics.end());
    }
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
        std::optional<ExpectationEstimate> analytic;
        std::string error;
        const double size = c < config.statistics.size() ? s : static_cast<double>(config.scenario.binomial_count);
        analytic_for(config, phi, measure, size, ids[c], execution, analytic, error);
        report.statistics.push_back(summarize(result.columns[c], ids[c], column_values(result.records, c),
                                              analytic, error, config.bootstrap));
    }
    evaluate_scenario(config, phi, measure, result.columns, result.records, report, execution);
    result.connection = phi;
    return result;
}

ExperimentResult run_sweep(const ExperimentConfig& config, const std::vector<double>& s_grid, bool recalibrate,
                           Execution execution)
{
    const ProbabilityMeasure measure = make_measure(config.space);
    ExperimentResult result;
    SummaryReport& report = result.report;
    report.config = to_json(config);
    const std::string target_name = to_string(config.scenario.target);

    for (std::size_t row_index = 0; row_index < s_grid.size(); ++row_index) {
        SweepRow row;
        row.s = s_grid[row_index];
        ExperimentConfig cfg = config;
        cfg.scenario.kind = ScenarioKind::None;
        cfg.master_seed = derive_key(config.master_seed, kSweepStream, row_index);
        if (cfg.process.kind == ProcessKind::Poisson) {
            cfg.process.intensity = row.s;
        } else {
            cfg.process.count = static_cast<std::size_t>(std::max(1.0, std::round(row.s)));
        }
        const double s = cfg.process.size();
        try {
            ConnectionFunction phi = make_connection(cfg.connection, measure, s);
            if (recalibrate) {
                const CalibrateSpec spec = config.calibrate.value_or(CalibrateSpec{});
                CalibrationRequest request;
                request.s = s;
                request.target_alpha = spec.target_alpha;
                request.statistic = spec.statistic;
                request.tolerance = spec.tolerance;
                request.bracket = spec.bracket;
                request.integration = integration_for(config, execution);
                phi = calibrate_parameter(phi, measure, request).phi;
            }
            if (phi.has_knob()) {
                row.knob = phi.knob();
            }
            const auto records = simulate(cfg, phi, measure, execution);
            const std::size_t col = column_index(record_columns(cfg), target_name);
            const auto samples = column_values(records, col);
            const auto emp = empirical_law(samples);
            row.alpha_hat = emp.mean();
            row.alpha_analytic = NAN;
            try {
                row.alpha_analytic =
                    expected_statistic(s, phi, measure, config.scenario.target, integration_for(config, execution))
                        .value;
            } catch (const CapabilityError& e) {
                row.message = e.what();
            } catch (const DomainError& e) {
                row.message = e.what();
            }
            const double alpha = std::isfinite(row.alpha_analytic) ? std::max(0.0, row.alpha_analytic) : row.alpha_hat;
            const auto target = poisson_law(alpha);
            row.dtv = tv_distance(emp, target);
            row.dw = wasserstein_distance(emp, target);
            row.dtv_interval = bootstrap_tv_interval(samples, target, config.bootstrap);
        } catch (const CalibrationError& e) {
            row.failed = true;
            row.message = e.what();
        }
        report.sweep.push_back(row);
    }

    const auto& tol = config.scenario.tolerances;
    const double slack = tol.contains("monotone_slack") ? tol.at("monotone_slack") : 0.0;
    double worst = 0.0;
    const SweepRow* previous = nullptr;
    std::size_t failed = 0;
    for (const auto& row : report.sweep) {
        if (row.failed) {
            ++failed;
            continue;
        }
        if (previous != nullptr) {
            worst = std::max(worst, row.dtv - previous->dtv_interval.upper);
        }
        previous = &row;
    }
    report.verdicts.push_back(make_verdict("sweep_rows_ok", static_cast<double>(failed), "<=", 0.0, "", 0.0,
                                           "rows marked FAILED"));
    report.verdicts.push_back(make_verdict("dtv_nonincreasing", worst, "<=", slack, "monotone_slack", slack,
                                           "max over consecutive rows of d_TV(s_i) - upper edge of d_TV(s_{i-1})"));
    if (tol.contains("dtv_min")) {
        double lowest = INFINITY;
        for (const auto& row : report.sweep) {
            if (!row.failed) {
                lowest = std::min(lowest, row.dtv_interval.lower);
            }
        }
        if (std::isfinite(lowest)) {
            report.verdicts.push_back(make_verdict("dtv_bounded_below", lowest, ">=", tol.at("dtv_min"), "dtv_min",
                                                   tol.at("dtv_min"), "min lower bootstrap edge over rows"));
        }
    }
    return result;
}

namespace {

json interval_json(const Interval& i)
{
    return json{{"lower", i.lower}, {"upper", i.upper}};
}

json estimate_json(const ExpectationEstimate& e)
{
    return json{{"value", e.value},
                {"std_error", e.std_error},
                {"outer_samples", e.outer_samples},
                {"inner_samples", e.inner_samples},
                {"method", to_string(e.method)}};
}

json bound_json(const SteinBound& b)
{
    return json{{"alpha", b.alpha},         {"alpha_std_error", b.alpha_std_error},
                {"tv_bound", b.tv_bound},   {"w_bound", b.w_bound},
                {"std_error", b.std_error}, {"k", b.k},
                {"gamma", b.gamma},         {"gamma_std_error", b.gamma_std_error},
                {"method", to_string(b.method)}};
}

json optional_number(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

} // namespace

json to_json(const SummaryReport& report)
{
    json doc;
    doc["config"] = report.config;
    doc["connection"] = report.connection;
    json stats = json::array();
    for (const auto& s : report.statistics) {
        json entry{{"column", s.column},
                   {"mean", s.mean},
                   {"std_error", s.std_error},
                   {"variance", s.variance},
                   {"alpha", s.alpha},
                   {"dtv_poisson", s.dtv},
                   {"dtv_poisson_interval", interval_json(s.dtv_interval)},
                   {"dw_poisson", s.dw},
                   {"dtv_fitted_poisson", s.dtv_fitted}};
        entry["analytic"] = s.analytic ? estimate_json(*s.analytic) : json(nullptr);
        if (!s.analytic_error.empty()) {
            entry["analytic_error"] = s.analytic_error;
        }
        json fm = json::array();
        for (std::size_t i = 0; i < s.factorial.size(); ++i) {
            fm.push_back({{"order", i + 1}, {"estimate", s.factorial[i].estimate}, {"std_error", s.factorial[i].std_error}});
        }
        entry["factorial_moments"] = fm;
        entry["pmf"] = s.empirical.pmf;
        stats.push_back(entry);
    }
    doc["statistics"] = stats;
    if (report.calibration) {
        const auto& c = *report.calibration;
        doc["calibration"] = {{"knob", c.knob_name},         {"value", c.knob},
                              {"target_alpha", c.target},    {"achieved", c.achieved},
                              {"statistic", to_string(c.statistic)}, {"method", to_string(c.method)}};
    }
    if (report.edge_bound) {
        doc["edge_bound"] = bound_json(*report.edge_bound);
    }
    if (report.gamma_bound) {
        doc["gamma_bound"] = bound_json(*report.gamma_bound);
    }
    if (report.normality) {
        json points = json::array();
        for (const auto& p : report.normality->points) {
            points.push_back({{"z", p.z}, {"cdf_below", p.cdf_below}, {"cdf", p.cdf}, {"cdf_mid", p.cdf_mid}, {"target", p.target}});
        }
        doc["normality"] = {{"points", points},
                            {"degenerate", report.normality->degenerate},
                            {"max_deviation", report.normality->max_deviation}};
    }
    if (report.binomial_dtv) {
        doc["binomial_coupling"] = {{"dtv", *report.binomial_dtv},
                                    {"dtv_interval", interval_json(report.binomial_dtv_interval.value_or(Interval{}))}};
    }
    if (!report.sweep.empty() || report.config.value("/scenario/name"_json_pointer, "") == "sweep") {
        json rows = json::array();
        for (const auto& r : report.sweep) {
            rows.push_back({{"s", r.s},
                            {"knob", r.knob ? json(*r.knob) : json(nullptr)},
                            {"alpha_analytic", optional_number(r.alpha_analytic)},
                            {"alpha_hat", r.alpha_hat},
                            {"dtv", r.dtv},
                            {"dtv_interval", interval_json(r.dtv_interval)},
                            {"dw", r.dw},
                            {"status", r.failed ? "FAILED" : "OK"},
                            {"message", r.message}});
        }
        doc["sweep"] = rows;
    }
    json verdicts = json::array();
    for (const auto& v : report.verdicts) {
        verdicts.push_back({{"name", v.name},
                            {"pass", v.pass},
                            {"value", optional_number(v.value)},
                            {"relation", v.relation},
                            {"threshold", v.threshold},
                            {"tolerance", v.tolerance},
                            {"tolerance_value", v.tolerance_value},
                            {"detail", v.detail}});
    }
    doc["verdicts"] = verdicts;
    doc["pass"] = report.all_pass();
    return doc;
}

} // namespace irg
