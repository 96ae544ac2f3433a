#include "couplemap/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "couplemap/error.hpp"

namespace couplemap {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, path.string());
    out << text;
    if (!out) throw Error(ErrorKind::IoError, path.string());
}

Json to_json(const MeasureReport& report) {
    Json j = Json::object();
    for (std::size_t m = 0; m < kMeasureNames.size(); ++m) j[std::string(kMeasureNames[m])] = report.values[m];
    j["bin_count"] = report.bin_count;
    j["sample_count"] = report.sample_count;
    j["flags"] = report.flags;
    return j;
}

MeasureReport report_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "measure report must be a JSON object");
    MeasureReport r;
    for (std::size_t m = 0; m < kMeasureNames.size(); ++m) {
        const auto it = j.find(std::string(kMeasureNames[m]));
        if (it == j.end() || !it->is_number())
            throw Error(ErrorKind::MismatchedMeasureSets, "missing measure '" + std::string(kMeasureNames[m]) + "'");
        r.values[m] = it->get<double>();
    }
    if (auto it = j.find("bin_count"); it != j.end()) r.bin_count = it->get<std::size_t>();
    if (auto it = j.find("sample_count"); it != j.end()) r.sample_count = it->get<std::uint64_t>();
    if (auto it = j.find("flags"); it != j.end()) r.flags = it->get<std::vector<std::string>>();
    return r;
}

MeasureReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
    return report_from_json(j);
}

void write_summary_csv(std::span<const SystemSummary> systems, std::ostream& out) {
    out << "system,measure_name,mean,half_width,n,flags\n";
    for (const auto& s : systems)
        for (const auto& r : s.rows)
            out << s.system << ',' << r.measure_name << ',' << format_double(r.mean) << ','
                << format_double(r.half_width) << ',' << r.n << ',' << r.flags << '\n';
}

std::vector<SystemSummary> read_summary_csv(std::istream& in) {
    std::vector<SystemSummary> out;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            if (line != "system,measure_name,mean,half_width,n,flags")
                throw Error(ErrorKind::ParseError, "row 1: unexpected summary header");
            header = false;
            continue;
        }
        // The system name may itself contain commas; the last five fields never do.
        std::vector<std::string> cells;
        std::string rest = line;
        for (int k = 0; k < 5; ++k) {
            const auto comma = rest.rfind(',');
            if (comma == std::string::npos) throw Error(ErrorKind::ParseError, "row " + std::to_string(line_no) + ": too few columns");
            cells.insert(cells.begin(), rest.substr(comma + 1));
            rest.resize(comma);
        }
        SummaryRow row;
        row.measure_name = cells[0];
        try {
            row.mean = std::stod(cells[1]);
            row.half_width = std::stod(cells[2]);
            row.n = std::stoul(cells[3]);
            row.flags = std::stoul(cells[4]);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "row " + std::to_string(line_no) + ": bad number");
        }
        if (out.empty() || out.back().system != rest) out.push_back(SystemSummary{rest, {}, {}});
        out.back().rows.push_back(std::move(row));
    }
    if (header) throw Error(ErrorKind::ParseError, "empty summary");
    return out;
}

std::vector<SystemSummary> load_summary_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, path.string());
    return read_summary_csv(in);
}

Json to_json(const SystemSummary& summary) {
    Json rows = Json::array();
    for (const auto& r : summary.rows) {
        rows.push_back(Json{{"measure_name", r.measure_name},
                            {"mean", r.mean},
                            {"half_width", r.half_width},
                            {"n", r.n},
                            {"flags", r.flags}});
    }
    return Json{{"system", summary.system}, {"rows", std::move(rows)}};
}

Json to_json(const ComparisonReport& report) {
    Json systems = Json::array();
    for (const auto& e : report.systems) {
        Json values = Json::object();
        Json normalized = Json::object();
        for (std::size_t m = 0; m < report.measures.size(); ++m) {
            values[report.measures[m]] = e.values[m];
            normalized[report.measures[m]] = e.normalized[m];
        }
        systems.push_back(Json{{"name", e.name},
                               {"distance_to_uncoupled", e.distance_to_uncoupled},
                               {"values", std::move(values)},
                               {"normalized", std::move(normalized)}});
    }
    return Json{{"baseline", report.baseline}, {"measures", report.measures}, {"systems", std::move(systems)}};
}

}  // namespace couplemap
