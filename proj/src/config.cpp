#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "irg/error.hpp"
#include "irg/harness.hpp"

namespace irg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message)
{
    throw ConfigError("config " + (path.empty() ? std::string("/") : path) + ": " + message);
}

// Reads keys of one JSON object, remembering which were consumed so that
// unknown keys can be reported.
class Section {
public:
    Section(const json& value, std::string path) : value_(value), path_(std::move(path))
    {
        if (!value_.is_object()) {
            fail(path_, "expected an object");
        }
    }

    std::string path(const std::string& key) const { return path_ + "/" + key; }
    const std::string& where() const noexcept { return path_; }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        auto it = value_.find(key);
        return it == value_.end() || it->is_null() ? nullptr : &*it;
    }

    double number(const std::string& key, double fallback)
    {
        const json* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_number()) {
            fail(path(key), "expected a number");
        }
        const double x = v->get<double>();
        if (!std::isfinite(x)) {
            fail(path(key), "expected a finite number");
        }
        return x;
    }

    double required_number(const std::string& key)
    {
        if (find(key) == nullptr) {
            fail(path(key), "missing required number");
        }
        return number(key, 0.0);
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback)
    {
        const json* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (v->is_string()) {
            const std::string text = v->get<std::string>();
            try {
                std::size_t used = 0;
                const std::uint64_t x = std::stoull(text, &used, 0);
                if (used != text.size()) {
                    fail(path(key), "malformed integer '" + text + "'");
                }
                return x;
            } catch (const std::logic_error&) {
                fail(path(key), "malformed integer '" + text + "'");
            }
        }
        if (v->is_number_unsigned()) {
            return v->get<std::uint64_t>();
        }
        if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
            return static_cast<std::uint64_t>(v->get<std::int64_t>());
        }
        if (v->is_number_float()) {
            const double x = v->get<double>();
            if (x >= 0.0 && x < 1.8e19 && std::floor(x) == x) {
                return static_cast<std::uint64_t>(x);
            }
        }
        fail(path(key), "expected a nonnegative integer");
    }

    std::string text(const std::string& key, const std::string& fallback)
    {
        const json* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_string()) {
            fail(path(key), "expected a string");
        }
        return v->get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback)
    {
        const json* v = find(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_boolean()) {
            fail(path(key), "expected true or false");
        }
        return v->get<bool>();
    }

    std::vector<double> numbers(const std::string& key)
    {
        const json* v = find(key);
        if (v == nullptr) {
            return {};
        }
        if (!v->is_array()) {
            fail(path(key), "expected an array of numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v->size(); ++i) {
            const json& item = (*v)[i];
            if (!item.is_number() || !std::isfinite(item.get<double>())) {
                fail(path(key) + "/" + std::to_string(i), "expected a finite number");
            }
            out.push_back(item.get<double>());
        }
        return out;
    }

    std::vector<StatisticId> statistics(const std::string& key)
    {
        const json* v = find(key);
        if (v == nullptr) {
            return {};
        }
        if (!v->is_array()) {
            fail(path(key), "expected an array of statistic names");
        }
        std::vector<StatisticId> out;
        for (std::size_t i = 0; i < v->size(); ++i) {
            out.push_back(statistic((*v)[i], path(key) + "/" + std::to_string(i)));
        }
        return out;
    }

    static StatisticId statistic(const json& value, const std::string& where)
    {
        if (!value.is_string()) {
            fail(where, "expected a statistic name such as \"D0\"");
        }
        try {
            return parse_statistic(value.get<std::string>());
        } catch (const ConfigError& e) {
            fail(where, e.what());
        }
    }

    std::optional<Section> child(const std::string& key)
    {
        const json* v = find(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        return Section(*v, path(key));
    }

    void finish() const
    {
        for (const auto& [key, _] : value_.items()) {
            if (!seen_.contains(key)) {
                fail(path(key), "unknown key");
            }
        }
    }

private:
    const json& value_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class Enum, std::size_t N>
Enum choose(const std::string& value, const std::array<std::pair<const char*, Enum>, N>& names,
            const std::string& where)
{
    std::string allowed;
    for (const auto& [name, e] : names) {
        if (value == name) {
            return e;
        }
        allowed += allowed.empty() ? "" : ", ";
        allowed += name;
    }
    fail(where, "unknown value '" + value + "' (expected one of: " + allowed + ")");
}

constexpr std::array<std::pair<const char*, SpaceKind>, 3> kSpaceNames{{
    {"unit-cube", SpaceKind::UnitCube},
    {"torus", SpaceKind::Torus},
    {"euclidean", SpaceKind::Euclidean},
}};

constexpr std::array<std::pair<const char*, DensityKind>, 4> kDensityNames{{
    {"uniform", DensityKind::Uniform},
    {"isotropic-gaussian", DensityKind::Gaussian},
    {"product-weibull", DensityKind::Weibull},
    {"user-tabulated", DensityKind::Tabulated},
}};

constexpr std::array<std::pair<const char*, Family>, 6> kFamilyNames{{
    {"constant", Family::Constant},
    {"hard-disk", Family::HardDisk},
    {"soft-disk", Family::SoftDisk},
    {"profile", Family::Profile},
    {"kernel-capped", Family::KernelCapped},
    {"partition-counterexample", Family::Partition},
}};

constexpr std::array<std::pair<const char*, ProfileShape>, 2> kProfileNames{{
    {"rayleigh", ProfileShape::Rayleigh},
    {"exponential", ProfileShape::Exponential},
}};

constexpr std::array<std::pair<const char*, KernelShape>, 2> kKernelNames{{
    {"gaussian", KernelShape::Gaussian},
    {"product", KernelShape::Product},
}};

constexpr std::array<std::pair<const char*, ScenarioKind>, 8> kScenarioNames{{
    {"none", ScenarioKind::None},
    {"rgg-poisson-limit", ScenarioKind::RggPoissonLimit},
    {"counterexample", ScenarioKind::Counterexample},
    {"edge-stein", ScenarioKind::EdgeStein},
    {"ustat", ScenarioKind::Ustat},
    {"normality", ScenarioKind::Normality},
    {"binomial-coupling", ScenarioKind::BinomialCoupling},
    {"sweep", ScenarioKind::Sweep},
}};

constexpr std::array<std::pair<const char*, Construction>, 2> kConstructionNames{{
    {"ordered", Construction::Ordered},
    {"sequential", Construction::Sequential},
}};

constexpr std::array<std::pair<const char*, EdgeSampling>, 3> kSamplingNames{{
    {"auto", EdgeSampling::Auto},
    {"exact", EdgeSampling::Exact},
    {"thinned", EdgeSampling::Thinned},
}};

template <class Enum, std::size_t N>
std::string name_of(Enum e, const std::array<std::pair<const char*, Enum>, N>& names)
{
    for (const auto& [name, value] : names) {
        if (value == e) {
            return name;
        }
    }
    return "unknown";
}

SpaceSpec parse_space(Section& s)
{
    SpaceSpec spec;
    spec.kind = choose(s.text("kind", "torus"), kSpaceNames, s.path("kind"));
    const auto dim = s.unsigned_integer("dimension", 2);
    if (dim < 1 || dim > static_cast<std::uint64_t>(kMaxDimension)) {
        fail(s.path("dimension"), "dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
    }
    spec.dimension = static_cast<int>(dim);
    const std::string fallback_density = spec.kind == SpaceKind::Euclidean ? "isotropic-gaussian" : "uniform";
    spec.density = choose(s.text("density", fallback_density), kDensityNames, s.path("density"));
    if (spec.density == DensityKind::Weibull) {
        spec.shape = s.number("shape", 1.0);
        spec.scale = s.number("scale", 1.0);
    }
    if (spec.density == DensityKind::Tabulated) {
        spec.bins = static_cast<int>(s.unsigned_integer("bins", 0));
        spec.table = s.numbers("table");
    }
    s.finish();
    try {
        make_measure(spec);
    } catch (const ConfigError& e) {
        fail(s.where(), e.what());
    }
    return spec;
}

ConnectionSpec parse_connection(Section& s)
{
    ConnectionSpec spec;
    if (s.find("family") == nullptr) {
        fail(s.path("family"), "missing connection family");
    }
    spec.family = choose(s.text("family", ""), kFamilyNames, s.path("family"));
    switch (spec.family) {
    case Family::Constant: spec.p = s.required_number("p"); break;
    case Family::HardDisk: spec.r = s.required_number("r"); break;
    case Family::SoftDisk:
        spec.p = s.required_number("p");
        spec.r = s.required_number("r");
        break;
    case Family::Profile:
        spec.profile = choose(s.text("shape", "rayleigh"), kProfileNames, s.path("shape"));
        spec.p = s.number("p", 1.0);
        spec.r = s.required_number("r");
        break;
    case Family::KernelCapped:
        spec.kernel = choose(s.text("kernel", "gaussian"), kKernelNames, s.path("kernel"));
        spec.a = s.required_number("a");
        spec.cap = s.number("cap", 1.0);
        break;
    case Family::Partition:
        if (s.find("s") != nullptr) {
            spec.partition_s = s.number("s", 1.0);
        }
        break;
    }
    s.finish();
    return spec;
}

ProcessSpec parse_process(Section& s)
{
    ProcessSpec spec;
    const std::string type = s.text("type", "poisson");
    if (type == "poisson") {
        spec.kind = ProcessKind::Poisson;
        spec.intensity = s.required_number("intensity");
        if (!(spec.intensity > 0.0)) {
            fail(s.path("intensity"), "intensity must be positive");
        }
    } else if (type == "binomial") {
        spec.kind = ProcessKind::Binomial;
        if (s.find("count") == nullptr) {
            fail(s.path("count"), "missing required integer");
        }
        spec.count = s.unsigned_integer("count", 1);
        if (spec.count < 1) {
            fail(s.path("count"), "count must be at least 1");
        }
    } else {
        fail(s.path("type"), "unknown process '" + type + "' (expected poisson or binomial)");
    }
    s.finish();
    return spec;
}

StatisticId default_target(ScenarioKind kind, std::size_t k)
{
    switch (kind) {
    case ScenarioKind::EdgeStein:
    case ScenarioKind::Normality: return {StatisticKind::ConnectedInduced, 2};
    case ScenarioKind::Ustat: return {StatisticKind::ConnectedInduced, k};
    default: return {StatisticKind::Degree, 0};
    }
}

} // namespace

std::string to_string(ScenarioKind kind)
{
    return name_of(kind, kScenarioNames);
}

std::map<std::string, double> default_tolerances(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::RggPoissonLimit: return {{"dtv_max", 0.03}, {"factorial_sigma", 3.0}};
    case ScenarioKind::Counterexample: return {{"bernoulli_gap", 0.02}, {"dtv_min", 0.08}};
    case ScenarioKind::EdgeStein: return {{"bootstrap_margin", 0.01}};
    case ScenarioKind::Ustat: return {{"bootstrap_margin", 0.01}, {"agreement_sigma", 2.0}};
    case ScenarioKind::Normality: return {{"cdf_gap", 0.05}};
    case ScenarioKind::BinomialCoupling: return {{"dtv_max", 0.05}};
    case ScenarioKind::Sweep: return {{"monotone_slack", 0.0}};
    case ScenarioKind::None: return {};
    }
    return {};
}

ProbabilityMeasure make_measure(const SpaceSpec& spec)
{
    switch (spec.density) {
    case DensityKind::Uniform: return ProbabilityMeasure::uniform(spec.kind, spec.dimension);
    case DensityKind::Gaussian:
        if (spec.kind != SpaceKind::Euclidean) {
            throw ConfigError("isotropic-gaussian density requires the euclidean space");
        }
        return ProbabilityMeasure::gaussian(spec.dimension);
    case DensityKind::Weibull:
        if (spec.kind != SpaceKind::Euclidean) {
            throw ConfigError("product-weibull density requires the euclidean space");
        }
        return ProbabilityMeasure::weibull(spec.dimension, spec.shape, spec.scale);
    case DensityKind::Tabulated:
        return ProbabilityMeasure::tabulated(spec.kind, spec.dimension, spec.bins, spec.table);
    }
    throw ConfigError("unknown density");
}

ConnectionFunction make_connection(const ConnectionSpec& spec, const ProbabilityMeasure& measure, double size)
{
    auto build = [&] {
        switch (spec.family) {
        case Family::Constant: return ConnectionFunction::constant(spec.p);
        case Family::HardDisk: return ConnectionFunction::hard_disk(spec.r);
        case Family::SoftDisk: return ConnectionFunction::soft_disk(spec.p, spec.r);
        case Family::Profile: return ConnectionFunction::profile(spec.profile, spec.p, spec.r);
        case Family::KernelCapped: return ConnectionFunction::kernel_capped(spec.a, spec.kernel, spec.cap);
        case Family::Partition: return ConnectionFunction::partition(spec.partition_s.value_or(size));
        }
        throw ConfigError("unknown connection family");
    };
    return build().bind(measure);
}

ExperimentConfig parse_config(const json& document)
{
    Section root(document, "");
    ExperimentConfig config;

    auto space = root.child("space");
    if (!space) {
        fail("/space", "missing section");
    }
    config.space = parse_space(*space);

    auto connection = root.child("connection");
    if (!connection) {
        fail("/connection", "missing section");
    }
    config.connection = parse_connection(*connection);

    auto process = root.child("process");
    if (!process) {
        fail("/process", "missing section");
    }
    config.process = parse_process(*process);

    const auto measure = make_measure(config.space);
    try {
        make_connection(config.connection, measure, config.process.size());
    } catch (const ConfigError& e) {
        fail("/connection", e.what());
    }

    config.replications = root.unsigned_integer("replications", config.replications);
    if (config.replications < 1) {
        fail("/replications", "replications must be at least 1");
    }
    config.master_seed = root.unsigned_integer("master_seed", config.master_seed);
    config.construction =
        choose(root.text("construction", "ordered"), kConstructionNames, "/construction");
    config.build.sampling = choose(root.text("sampling", "auto"), kSamplingNames, "/sampling");
    config.build.use_grid = root.boolean("grid", true);

    if (auto integration = root.child("integration")) {
        config.integration.outer = integration->unsigned_integer("outer", config.integration.outer);
        config.integration.inner = integration->unsigned_integer("inner", config.integration.inner);
        config.integration.seed = integration->unsigned_integer("seed", config.integration.seed);
        const std::string method = integration->text("connectedness", "subset-recursion");
        if (method == "enumerate") {
            config.integration.connectedness.method = ConnectednessMethod::Enumerate;
        } else if (method == "subset-recursion") {
            config.integration.connectedness.method = ConnectednessMethod::SubsetRecursion;
        } else if (method == "monte-carlo") {
            config.integration.connectedness.method = ConnectednessMethod::MonteCarlo;
        } else {
            fail(integration->path("connectedness"),
                 "unknown method '" + method + "' (expected enumerate, subset-recursion or monte-carlo)");
        }
        config.integration.connectedness.samples =
            integration->unsigned_integer("connectedness_samples", config.integration.connectedness.samples);
        if (config.integration.outer < 1) {
            fail(integration->path("outer"), "outer sample count must be at least 1");
        }
        integration->finish();
    }

    if (auto bootstrap = root.child("bootstrap")) {
        config.bootstrap.resamples = bootstrap->unsigned_integer("resamples", config.bootstrap.resamples);
        config.bootstrap.level = bootstrap->number("level", config.bootstrap.level);
        config.bootstrap.seed = bootstrap->unsigned_integer("seed", config.bootstrap.seed);
        if (config.bootstrap.resamples < 2) {
            fail(bootstrap->path("resamples"), "at least two resamples are needed");
        }
        if (!(config.bootstrap.level > 0.0 && config.bootstrap.level < 1.0)) {
            fail(bootstrap->path("level"), "level must lie in (0,1)");
        }
        bootstrap->finish();
    }

    ScenarioSpec& scenario = config.scenario;
    std::optional<StatisticId> explicit_target;
    std::map<std::string, double> overrides;
    if (auto sc = root.child("scenario")) {
        scenario.kind = choose(sc->text("name", "none"), kScenarioNames, sc->path("name"));
        if (const json* t = sc->find("statistic")) {
            explicit_target = Section::statistic(*t, sc->path("statistic"));
        }
        scenario.k = sc->unsigned_integer("k", 2);
        if (scenario.k < 2 || scenario.k > kMaxComponentOrder) {
            fail(sc->path("k"), "k must be in [2, 5]");
        }
        scenario.binomial_count = sc->unsigned_integer("binomial_count", 0);
        scenario.s_grid = sc->numbers("s_grid");
        for (std::size_t i = 0; i < scenario.s_grid.size(); ++i) {
            if (!(scenario.s_grid[i] > 0.0)) {
                fail(sc->path("s_grid") + "/" + std::to_string(i), "grid values must be positive");
            }
            if (i > 0 && !(scenario.s_grid[i] > scenario.s_grid[i - 1])) {
                fail(sc->path("s_grid") + "/" + std::to_string(i), "grid must be strictly ascending");
            }
        }
        scenario.recalibrate = sc->boolean("recalibrate", false);
        scenario.moment_statistics = sc->statistics("moment_statistics");
        if (auto tol = sc->child("tolerances")) {
            const auto defaults = default_tolerances(scenario.kind);
            for (const auto& [name, _] : defaults) {
                if (tol->find(name) != nullptr) {
                    overrides[name] = tol->number(name, 0.0);
                }
            }
            // dtv_min is an optional extra check in sweeps.
            if (scenario.kind == ScenarioKind::Sweep && tol->find("dtv_min") != nullptr) {
                overrides["dtv_min"] = tol->number("dtv_min", 0.0);
            }
            tol->finish();
        }
        sc->finish();
    }
    scenario.tolerances = default_tolerances(scenario.kind);
    for (const auto& [name, value] : overrides) {
        scenario.tolerances[name] = value;
    }
    scenario.target = explicit_target.value_or(default_target(scenario.kind, scenario.k));
    if (scenario.kind == ScenarioKind::Ustat && explicit_target &&
        !(explicit_target->kind == StatisticKind::ConnectedInduced && explicit_target->index == scenario.k)) {
        fail("/scenario/statistic", "the ustat scenario counts H_k with k from /scenario/k");
    }
    if (scenario.kind == ScenarioKind::BinomialCoupling && config.process.kind != ProcessKind::Poisson) {
        fail("/process/type", "binomial-coupling compares against a Poisson process; use type poisson");
    }
    if (scenario.kind == ScenarioKind::BinomialCoupling) {
        config.construction = Construction::Sequential;
        if (scenario.binomial_count == 0) {
            scenario.binomial_count = static_cast<std::size_t>(std::llround(config.process.intensity));
        }
    }
    if (scenario.moment_statistics.empty() && scenario.kind == ScenarioKind::RggPoissonLimit) {
        scenario.moment_statistics.push_back(scenario.target);
    }

    config.statistics = root.statistics("statistics");
    auto ensure = [&](const StatisticId& id) {
        if (std::find(config.statistics.begin(), config.statistics.end(), id) == config.statistics.end()) {
            config.statistics.push_back(id);
        }
    };
    if (scenario.kind != ScenarioKind::None || config.statistics.empty()) {
        ensure(scenario.target);
    }
    for (const auto& id : scenario.moment_statistics) {
        ensure(id);
    }

    if (auto cal = root.child("calibrate")) {
        CalibrateSpec spec;
        spec.target_alpha = cal->number("target_alpha", 1.0);
        if (!(spec.target_alpha > 0.0)) {
            fail(cal->path("target_alpha"), "target alpha must be positive");
        }
        if (const json* st = cal->find("statistic")) {
            spec.statistic = Section::statistic(*st, cal->path("statistic"));
        }
        if (spec.statistic.kind == StatisticKind::ConnectedInduced) {
            fail(cal->path("statistic"), "calibration targets D<j> or N<k>");
        }
        spec.tolerance = cal->number("tolerance", spec.tolerance);
        if (!(spec.tolerance > 0.0)) {
            fail(cal->path("tolerance"), "tolerance must be positive");
        }
        const auto bracket = cal->numbers("bracket");
        if (!bracket.empty()) {
            if (bracket.size() != 2 || !(bracket[0] < bracket[1])) {
                fail(cal->path("bracket"), "expected [lo, hi] with lo < hi");
            }
            spec.bracket = std::make_pair(bracket[0], bracket[1]);
        }
        cal->finish();
        if (config.connection.family == Family::Partition) {
            fail("/calibrate", "the partition-counterexample family has no calibration knob");
        }
        config.calibrate = spec;
    }
    if (scenario.kind == ScenarioKind::Sweep && scenario.recalibrate && !config.calibrate) {
        config.calibrate = CalibrateSpec{};
    }

    root.finish();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    json document;
    try {
        document = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return parse_config(document);
}

json to_json(const ExperimentConfig& config)
{
    json space{{"kind", name_of(config.space.kind, kSpaceNames)},
               {"dimension", config.space.dimension},
               {"density", name_of(config.space.density, kDensityNames)}};
    if (config.space.density == DensityKind::Weibull) {
        space["shape"] = config.space.shape;
        space["scale"] = config.space.scale;
    }
    if (config.space.density == DensityKind::Tabulated) {
        space["bins"] = config.space.bins;
        space["table"] = config.space.table;
    }

    const ConnectionSpec& c = config.connection;
    json connection{{"family", name_of(c.family, kFamilyNames)}};
    switch (c.family) {
    case Family::Constant: connection["p"] = c.p; break;
    case Family::HardDisk: connection["r"] = c.r; break;
    case Family::SoftDisk:
        connection["p"] = c.p;
        connection["r"] = c.r;
        break;
    case Family::Profile:
        connection["shape"] = name_of(c.profile, kProfileNames);
        connection["p"] = c.p;
        connection["r"] = c.r;
        break;
    case Family::KernelCapped:
        connection["kernel"] = name_of(c.kernel, kKernelNames);
        connection["a"] = c.a;
        connection["cap"] = c.cap;
        break;
    case Family::Partition:
        if (c.partition_s) {
            connection["s"] = *c.partition_s;
        }
        break;
    }

    json process;
    if (config.process.kind == ProcessKind::Poisson) {
        process = {{"type", "poisson"}, {"intensity", config.process.intensity}};
    } else {
        process = {{"type", "binomial"}, {"count", config.process.count}};
    }

    json statistics = json::array();
    for (const auto& id : config.statistics) {
        statistics.push_back(to_string(id));
    }

    const char* connectedness = "subset-recursion";
    switch (config.integration.connectedness.method) {
    case ConnectednessMethod::Enumerate: connectedness = "enumerate"; break;
    case ConnectednessMethod::SubsetRecursion: connectedness = "subset-recursion"; break;
    case ConnectednessMethod::MonteCarlo: connectedness = "monte-carlo"; break;
    }

    json doc{
        {"space", space},
        {"connection", connection},
        {"process", process},
        {"statistics", statistics},
        {"replications", config.replications},
        {"master_seed", config.master_seed},
        {"construction", name_of(config.construction, kConstructionNames)},
        {"sampling", name_of(config.build.sampling, kSamplingNames)},
        {"grid", config.build.use_grid},
        {"integration",
         {{"outer", config.integration.outer},
          {"inner", config.integration.inner},
          {"seed", config.integration.seed},
          {"connectedness", connectedness},
          {"connectedness_samples", config.integration.connectedness.samples}}},
        {"bootstrap",
         {{"resamples", config.bootstrap.resamples},
          {"level", config.bootstrap.level},
          {"seed", config.bootstrap.seed}}},
    };

    if (config.calibrate) {
        json cal{{"target_alpha", config.calibrate->target_alpha},
                 {"statistic", to_string(config.calibrate->statistic)},
                 {"tolerance", config.calibrate->tolerance}};
        if (config.calibrate->bracket) {
            cal["bracket"] = {config.calibrate->bracket->first, config.calibrate->bracket->second};
        }
        doc["calibrate"] = cal;
    }

    const ScenarioSpec& sc = config.scenario;
    json scenario{{"name", to_string(sc.kind)}, {"statistic", to_string(sc.target)}};
    json tolerances = json::object();
    for (const auto& [name, value] : sc.tolerances) {
        tolerances[name] = value;
    }
    scenario["tolerances"] = tolerances;
    switch (sc.kind) {
    case ScenarioKind::RggPoissonLimit: {
        json moments = json::array();
        for (const auto& id : sc.moment_statistics) {
            moments.push_back(to_string(id));
        }
        scenario["moment_statistics"] = moments;
        break;
    }
    case ScenarioKind::Ustat: scenario["k"] = sc.k; break;
    case ScenarioKind::BinomialCoupling: scenario["binomial_count"] = sc.binomial_count; break;
    case ScenarioKind::Sweep:
        scenario["s_grid"] = sc.s_grid;
        scenario["recalibrate"] = sc.recalibrate;
        break;
    default: break;
    }
    doc["scenario"] = scenario;
    return doc;
}

} // namespace irg
