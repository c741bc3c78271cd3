#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "irg/error.hpp"
#include "irg/harness.hpp"

namespace irg {

namespace {

// Shortest representation that parses back to the same double.
std::string number(double x)
{
    if (!std::isfinite(x)) {
        return "nan";
    }
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    out.close();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

std::string xy(const std::vector<std::pair<double, double>>& points)
{
    std::string text;
    for (const auto& [x, y] : points) {
        text += number(x) + ' ' + number(y) + '\n';
    }
    return text;
}

} // namespace

std::string format_csv(const std::vector<std::string>& columns, const std::vector<ReplicationRecord>& records)
{
    std::string text = "replication,seed,vertices";
    for (const auto& c : columns) {
        text += ',' + c;
    }
    text += '\n';
    for (const auto& r : records) {
        text += std::to_string(r.index) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.vertices);
        for (std::uint64_t v : r.values) {
            text += ',' + std::to_string(v);
        }
        text += '\n';
    }
    return text;
}

std::string format_jsonl(const std::vector<std::string>& columns, const std::vector<ReplicationRecord>& records)
{
    std::string text;
    for (const auto& r : records) {
        text += "{\"replication\":" + std::to_string(r.index) + ",\"seed\":" + std::to_string(r.seed) +
                ",\"vertices\":" + std::to_string(r.vertices);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            text += ",\"" + columns[c] + "\":" + std::to_string(r.values[c]);
        }
        text += "}\n";
    }
    return text;
}

std::string format_edge_list(const Graph& g)
{
    std::string text = "v " + std::to_string(g.vertex_count()) + '\n';
    for (const Edge& e : g.edges()) {
        text += "e " + std::to_string(e.u) + ' ' + std::to_string(e.v) + '\n';
    }
    return text;
}

void emit(const ExperimentResult& result, RecordFormat format, const std::filesystem::path& directory)
{
    std::error_code ec;
    std::filesystem::create_directories(directory / "plots", ec);
    if (ec) {
        throw IoError("cannot create " + (directory / "plots").string() + ": " + ec.message());
    }
    if (format == RecordFormat::Csv) {
        write_file(directory / "records.csv", format_csv(result.columns, result.records));
    } else {
        write_file(directory / "records.jsonl", format_jsonl(result.columns, result.records));
    }
    write_file(directory / "summary.json", to_json(result.report).dump(2) + "\n");

    const auto plots = directory / "plots";
    for (const auto& s : result.report.statistics) {
        std::vector<std::pair<double, double>> empirical;
        for (std::size_t i = 0; i < s.empirical.pmf.size(); ++i) {
            empirical.emplace_back(static_cast<double>(i), s.empirical.pmf[i]);
        }
        write_file(plots / ("pmf_" + s.column + ".dat"), xy(empirical));
        const auto law = poisson_law(s.alpha, s.empirical.cutoff());
        std::vector<std::pair<double, double>> target;
        for (std::size_t i = 0; i < law.pmf.size(); ++i) {
            target.emplace_back(static_cast<double>(i), law.pmf[i]);
        }
        write_file(plots / ("poisson_" + s.column + ".dat"), xy(target));
    }
    if (!result.report.sweep.empty()) {
        std::string table = "s,knob,alpha_analytic,alpha_hat,dtv,dtv_lower,dtv_upper,dw,status\n";
        std::vector<std::pair<double, double>> dtv;
        std::vector<std::pair<double, double>> dw;
        for (const auto& r : result.report.sweep) {
            table += number(r.s) + ',' + (r.knob ? number(*r.knob) : std::string()) + ',' +
                     number(r.alpha_analytic) + ',' + number(r.alpha_hat) + ',' + number(r.dtv) + ',' +
                     number(r.dtv_interval.lower) + ',' + number(r.dtv_interval.upper) + ',' + number(r.dw) + ',' +
                     (r.failed ? "FAILED" : "OK") + '\n';
            if (!r.failed) {
                dtv.emplace_back(r.s, r.dtv);
                dw.emplace_back(r.s, r.dw);
            }
        }
        write_file(directory / "sweep.csv", table);
        write_file(plots / "sweep_dtv.dat", xy(dtv));
        write_file(plots / "sweep_dw.dat", xy(dw));
    }
}

} // namespace irg
