// Serial reference path against the OpenMP path: wall time and result equality.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "irg/analytics.hpp"
#include "irg/harness.hpp"

using namespace irg;

namespace {

struct Timed {
    double seconds = 0.0;
    std::string fingerprint;
};

Timed time_it(const std::function<std::string()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    std::string fp = body();
    return {std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), std::move(fp)};
}

std::string number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ExperimentConfig rgg_config(std::size_t reps)
{
    auto doc = nlohmann::json::parse(R"({
        "space": {"kind": "torus", "dimension": 2},
        "connection": {"family": "hard-disk", "r": 0.046891436},
        "process": {"type": "poisson", "intensity": 1000},
        "statistics": ["D0", "D1", "N1", "N2", "H2"],
        "master_seed": 11
    })");
    doc["replications"] = reps;
    return parse_config(doc);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Serial vs parallel benchmark"};
    bool quick = false;
    int threads = 0;
    app.add_flag("--quick", quick, "Small workloads (used as a smoke test)");
    app.add_option("--threads", threads, "Threads for the parallel path (default: all)");
    CLI11_PARSE(app, argc, argv);
    apply_thread_env();
    if (threads > 0) {
        set_threads(threads);
    }
    const int parallel_threads = max_threads();

    const std::size_t reps = quick ? 200 : 4000;
    const std::size_t outer = quick ? 500 : 20000;

    struct Workload {
        std::string name;
        std::function<std::string(Execution)> run;
    };
    const auto cube = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 2);
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const std::vector<Workload> workloads{
        {"replications (rgg, s=1000)",
         [&](Execution exec) {
             const auto config = rgg_config(reps);
             const auto measure = make_measure(config.space);
             const auto phi = make_connection(config.connection, measure, config.process.size());
             const auto records = simulate(config, phi, measure, exec);
             return format_csv(record_columns(config), records);
         }},
        {"E D1 Monte Carlo (cube disk)",
         [&](Execution exec) {
             IntegrationOptions o;
             o.outer = outer;
             o.inner = 2000;
             o.execution = exec;
             const auto e = expected_degree_count(200.0, ConnectionFunction::hard_disk(0.05).bind(cube), cube, 1, o);
             return number(e.value) + ' ' + number(e.std_error);
         }},
        {"E N3 Monte Carlo (profile)",
         [&](Execution exec) {
             IntegrationOptions o;
             o.outer = outer;
             o.inner = 500;
             o.execution = exec;
             const auto phi = ConnectionFunction::profile(ProfileShape::Rayleigh, 0.5, 0.1).bind(torus);
             const auto e = expected_k_components(50.0, phi, torus, 3, o);
             return number(e.value) + ' ' + number(e.std_error);
         }},
        {"ustat gamma k=3 (disk)",
         [&](Execution exec) {
             IntegrationOptions o;
             o.outer = outer / 4;
             o.inner = 2000;
             o.execution = exec;
             const auto phi = ConnectionFunction::hard_disk(0.05).bind(torus);
             const auto b = ustat_gamma(3, indicator_selection(phi, 3), 40.0, torus, o);
             return number(b.gamma) + ' ' + number(b.gamma_std_error);
         }},
    };

    std::printf("%-32s %12s %12s %9s  %s\n", "workload", "serial [s]", "parallel [s]", "speedup", "identical");
    bool all_same = true;
    for (const auto& w : workloads) {
        const Timed serial = time_it([&] { return w.run(Execution::Serial); });
        const Timed parallel = time_it([&] { return w.run(Execution::Parallel); });
        const bool same = serial.fingerprint == parallel.fingerprint;
        all_same = all_same && same;
        std::printf("%-32s %12.3f %12.3f %9.2f  %s\n", w.name.c_str(), serial.seconds, parallel.seconds,
                    serial.seconds / std::max(parallel.seconds, 1e-9), same ? "yes" : "NO");
    }
    std::printf("parallel path used %d thread(s); results %s\n", parallel_threads,
                all_same ? "bit-identical" : "DIFFER");
    return all_same ? 0 : 1;
}
