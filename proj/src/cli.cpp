#include "couplemap/cli.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <sstream>

#include "couplemap/ensemble.hpp"
#include "couplemap/error.hpp"
#include "couplemap/metrics.hpp"
#include "couplemap/netmap.hpp"
#include "couplemap/report_io.hpp"
#include "couplemap/series.hpp"

namespace couplemap::cli {
namespace {

namespace fs = std::filesystem;

enum class Preprocess { returns, raw };

const std::map<std::string, Preprocess> kPreprocessNames{{"returns", Preprocess::returns}, {"raw", Preprocess::raw}};
const std::map<std::string, CouplingMode> kModeNames{{"lagged", CouplingMode::lagged}, {"pair", CouplingMode::pair}};

TimeSeries prepare(const TimeSeries& s, Preprocess mode) {
    if (mode == Preprocess::raw) return s;
    return standardize(log_returns(s));
}

AlignedPair prepare(const AlignedPair& pair, Preprocess mode) {
    return AlignedPair(prepare(pair.x, mode), prepare(pair.y, mode));
}

fs::path ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, dir);
    return fs::path(dir);
}

void require(bool ok, ErrorKind kind, const std::string& detail) {
    if (!ok) throw Error(kind, detail);
}

void check_bins(std::size_t bins) { require(bins >= 3, ErrorKind::InvalidArgument, "--bins must be >= 3"); }
void check_replicas(std::size_t r) { require(r >= 2, ErrorKind::TooFewSamples, "--replicas must be >= 2"); }
void check_level(double level) {
    require(level > 0.0 && level < 1.0, ErrorKind::InvalidArgument, "--level must lie in (0, 1)");
}

std::string text_of(const auto& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

struct MapOptions {
    std::string x_path;
    std::string y_path;
    std::string input;
    std::string column = "value";
    std::string x_column;
    std::string y_column;
    std::size_t bins = 50;
    std::size_t lag = 1;
    Preprocess preprocess = Preprocess::returns;
    std::string out = "out";
};

void write_network_outputs(const CouplingNetwork& net, const fs::path& dir, std::ostream& out) {
    const auto report = measure_all(net);
    const auto jp = joint_probability(net);
    const auto adjacency = dir / "adjacency.tsv";
    const auto edges = dir / "edges.csv";
    const auto joint = dir / "joint_probability.tsv";
    const auto json = dir / "report.json";
    write_text(adjacency, text_of([&](std::ostream& os) { write_adjacency_tsv(net, os); }));
    write_text(edges, text_of([&](std::ostream& os) { write_edge_list_csv(net, os); }));
    write_text(joint, text_of([&](std::ostream& os) { write_joint_probability_tsv(jp, os); }));
    write_text(json, to_json(report).dump(2) + "\n");
    for (const auto& p : {adjacency, edges, joint, json}) out << p.string() << '\n';
}

void cmd_map(const MapOptions& o, std::ostream& out) {
    check_bins(o.bins);
    const auto x = load_csv(o.x_path, o.x_column.empty() ? o.column : o.x_column);
    const auto y = load_csv(o.y_path, o.y_column.empty() ? o.column : o.y_column);
    const auto pair = prepare(align_pair(x, y), o.preprocess);
    const auto dir = ensure_dir(o.out);
    write_network_outputs(map_pair(pair, o.bins), dir, out);
}

void cmd_map_lag(const MapOptions& o, std::ostream& out) {
    check_bins(o.bins);
    require(o.lag >= 1, ErrorKind::InvalidArgument, "--lag must be >= 1");
    const auto s = prepare(load_csv(o.input, o.column), o.preprocess);
    const auto net = map_lagged(s, o.lag, o.bins);
    const auto dir = ensure_dir(o.out);
    write_network_outputs(net, dir, out);
}

struct BaselineOptions {
    std::vector<double> hurst{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t replicas = 32;
    std::size_t length = 2000;
    std::size_t bins = 50;
    std::size_t lag = 1;
    std::uint64_t seed = 0;
    double level = 0.90;
    CouplingMode mode = CouplingMode::lagged;
    std::string out = "out";
};

void cmd_baseline(const BaselineOptions& o, std::ostream& out) {
    check_replicas(o.replicas);
    check_bins(o.bins);
    check_level(o.level);
    EnsembleConfig cfg;
    cfg.hurst_values = o.hurst;
    cfg.replicas_per_h = o.replicas;
    cfg.series_length = o.length;
    cfg.bin_count = o.bins;
    cfg.lag = o.lag;
    cfg.master_seed = o.seed;
    cfg.level = o.level;
    cfg.mode = o.mode;
    cfg.validate();

    const auto systems = run_fgn_ensemble(cfg);
    const auto dir = ensure_dir(o.out);
    const auto csv = dir / "baseline_summary.csv";
    const auto json = dir / "baseline.json";
    write_text(csv, text_of([&](std::ostream& os) { write_summary_csv(systems, os); }));

    Json groups = Json::array();
    for (std::size_t h = 0; h < systems.size(); ++h) {
        Json g = to_json(systems[h]);
        g["hurst"] = cfg.hurst_values[h];
        g["replicas"] = cfg.replicas_per_h;
        g["series_length"] = cfg.series_length;
        g["bin_count"] = cfg.bin_count;
        g["lag"] = cfg.lag;
        g["mode"] = cfg.mode == CouplingMode::lagged ? "lagged" : "pair";
        g["level"] = cfg.level;
        g["master_seed"] = cfg.master_seed;
        groups.push_back(std::move(g));
    }
    write_text(json, groups.dump(2) + "\n");
    out << csv.string() << '\n' << json.string() << '\n';
}

struct SurrogateOptions {
    MapOptions io;
    std::size_t replicas = 32;
    std::uint64_t seed = 0;
    double level = 0.90;
    std::string name;
};

void cmd_surrogate(const SurrogateOptions& o, std::ostream& out) {
    check_replicas(o.replicas);
    check_bins(o.io.bins);
    check_level(o.level);
    const auto x = load_csv(o.io.x_path, o.io.x_column.empty() ? o.io.column : o.io.x_column);
    const auto y = load_csv(o.io.y_path, o.io.y_column.empty() ? o.io.column : o.io.y_column);
    const auto pair = prepare(align_pair(x, y), o.io.preprocess);

    SurrogateConfig cfg;
    cfg.replicas = o.replicas;
    cfg.bin_count = o.io.bins;
    cfg.master_seed = o.seed;
    cfg.level = o.level;
    const std::string name = o.name.empty()
                                 ? "surrogate(" + fs::path(o.io.x_path).stem().string() + "-" +
                                       fs::path(o.io.y_path).stem().string() + ")"
                                 : o.name;
    const auto summary = run_surrogate_pair(pair, cfg, name);

    const auto dir = ensure_dir(o.io.out);
    const auto csv = dir / "surrogate_summary.csv";
    const auto json = dir / "surrogate.json";
    write_text(csv, text_of([&](std::ostream& os) { write_summary_csv(std::span(&summary, 1), os); }));
    Json j = to_json(summary);
    j["replicas"] = cfg.replicas;
    j["bin_count"] = cfg.bin_count;
    j["level"] = cfg.level;
    j["master_seed"] = cfg.master_seed;
    write_text(json, j.dump(2) + "\n");
    out << csv.string() << '\n' << json.string() << '\n';
}

struct CompareOptions {
    std::vector<std::string> reports;
    std::vector<std::string> baselines;
    std::vector<std::string> surrogates;
    std::string uncoupled{kUncoupledBaseline};
    std::string out = "out";
};

void cmd_compare(const CompareOptions& o, std::ostream& out) {
    std::vector<SystemVector> systems;
    for (const auto& spec : o.reports) {
        std::string name;
        fs::path path;
        if (const auto eq = spec.find('='); eq != std::string::npos) {
            name = spec.substr(0, eq);
            path = spec.substr(eq + 1);
        } else {
            path = spec;
            name = (path.filename() == "report.json" && path.has_parent_path()) ? path.parent_path().filename().string()
                                                                                 : path.stem().string();
        }
        systems.push_back(to_system_vector(name, load_report(path)));
    }
    for (const auto* group : {&o.baselines, &o.surrogates})
        for (const auto& path : *group)
            for (const auto& s : load_summary_csv(path)) systems.push_back(to_system_vector(s));

    const auto report = radar_normalize(systems, o.uncoupled);
    const auto dir = ensure_dir(o.out);
    const auto json = dir / "comparison.json";
    write_text(json, to_json(report).dump(2) + "\n");
    out << json.string() << '\n';
}

struct FetchOptions {
    std::string url;
    std::string column = "Close";
    std::string out;
};

void cmd_fetch(const FetchOptions& o, std::ostream& out) {
    const auto scheme_end = o.url.find("://");
    require(scheme_end != std::string::npos, ErrorKind::InvalidArgument, "URL needs a scheme: " + o.url);
    const auto path_start = o.url.find('/', scheme_end + 3);
    const std::string origin = o.url.substr(0, path_start);
    const std::string target = path_start == std::string::npos ? "/" : o.url.substr(path_start);

    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(60);
    const auto res = client.Get(target);
    if (!res) throw Error(ErrorKind::NetworkError, httplib::to_string(res.error()) + " " + o.url);
    if (res->status != 200) throw Error(ErrorKind::NetworkError, "HTTP " + std::to_string(res->status) + " " + o.url);

    const auto series = parse_csv(res->body, o.column);
    if (const auto parent = fs::path(o.out).parent_path(); !parent.empty()) ensure_dir(parent.string());
    save_csv(series, o.out);
    out << o.out << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Map coupled time series onto weighted directed networks and measure them", "couplemap"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    MapOptions map_o;
    MapOptions lag_o;
    BaselineOptions base_o;
    SurrogateOptions sur_o;
    CompareOptions cmp_o;
    FetchOptions fetch_o;

    auto add_io = [](CLI::App* sub, MapOptions& o, bool pair) {
        if (pair) {
            sub->add_option("--x", o.x_path, "CSV of the first (source) series; needs a 'date' or 't' column")
                ->required();
            sub->add_option("--y", o.y_path, "CSV of the second (target) series, same format")->required();
            sub->add_option("--x-column", o.x_column, "value column of --x (overrides --column)");
            sub->add_option("--y-column", o.y_column, "value column of --y (overrides --column)");
        } else {
            sub->add_option("--input", o.input, "CSV of the series; needs a 'date' or 't' column")->required();
        }
        sub->add_option("--column", o.column, "value column name")->capture_default_str();
        sub->add_option("--bins", o.bins, "amplitude bins per series, B >= 3")->capture_default_str();
        sub->add_option("--preprocess", o.preprocess,
                        "returns: standardized log-returns (values must be > 0); raw: map values as given")
            ->transform(CLI::CheckedTransformer(kPreprocessNames, CLI::ignore_case))
            ->default_str("returns");
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
    };

    auto* map = app.add_subcommand("map", "Map two series on their common calendar onto a network");
    add_io(map, map_o, true);

    auto* map_lag = app.add_subcommand("map-lag", "Map a series against its own lag-shifted copy");
    add_io(map_lag, lag_o, false);
    map_lag->add_option("--lag", lag_o.lag, "lag in samples, 1 <= lag < series length")->capture_default_str();

    auto* baseline = app.add_subcommand("baseline", "Fractional Gaussian noise baseline ensemble");
    baseline->add_option("--hurst", base_o.hurst, "comma-separated Hurst exponents, each in (0, 1)")
        ->delimiter(',')
        ->default_str("0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9");
    baseline->add_option("--replicas", base_o.replicas, "replicas per Hurst value, >= 2")->capture_default_str();
    baseline->add_option("--length", base_o.length, "samples per series, >= 64")->capture_default_str();
    baseline->add_option("--bins", base_o.bins, "amplitude bins, B >= 3")->capture_default_str();
    baseline->add_option("--lag", base_o.lag, "self-coupling lag, 1 <= lag < length")->capture_default_str();
    baseline->add_option("--seed", base_o.seed, "master seed (64-bit unsigned)")->capture_default_str();
    baseline->add_option("--level", base_o.level, "confidence level in (0, 1)")->capture_default_str();
    baseline->add_option("--mode", base_o.mode, "lagged: series vs its lag; pair: two independent series")
        ->transform(CLI::CheckedTransformer(kModeNames, CLI::ignore_case))
        ->default_str("lagged");
    baseline->add_option("--out", base_o.out, "output directory")->capture_default_str();

    auto* sur = app.add_subcommand("surrogate", "Fourier-surrogate ensemble of a coupled pair");
    add_io(sur, sur_o.io, true);
    sur->add_option("--replicas", sur_o.replicas, "surrogate replicas, >= 2")->capture_default_str();
    sur->add_option("--seed", sur_o.seed, "master seed (64-bit unsigned)")->capture_default_str();
    sur->add_option("--level", sur_o.level, "confidence level in (0, 1)")->capture_default_str();
    sur->add_option("--name", sur_o.name, "system name in the summary (default: surrogate(<x>-<y>))");

    auto* cmp = app.add_subcommand("compare", "Radar-normalize measure vectors against the uncoupled baseline");
    cmp->add_option("--report", cmp_o.reports, "measure report JSON, optionally NAME=path; repeatable");
    cmp->add_option("--baseline", cmp_o.baselines, "baseline summary CSV; repeatable");
    cmp->add_option("--surrogate", cmp_o.surrogates, "surrogate summary CSV; repeatable");
    cmp->add_option("--uncoupled", cmp_o.uncoupled, "name of the reference system; must be among the inputs")
        ->capture_default_str();
    cmp->add_option("--out", cmp_o.out, "output directory")->capture_default_str();

    auto* fetch = app.add_subcommand("fetch", "Download a CSV over HTTP(S) and normalize it");
    fetch->add_option("--url", fetch_o.url, "http:// or https:// URL serving a CSV with a 'date' or 't' column")
        ->required();
    fetch->add_option("--column", fetch_o.column, "value column to keep")->capture_default_str();
    fetch->add_option("--out", fetch_o.out, "output CSV path")->required();

    std::vector<std::string> argv_store{"couplemap"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        for (auto& c : msg)
            if (c == '\n') c = ' ';
        err << "InvalidArgument:" << msg << '\n';
        return 1;
    }

    try {
        if (*map) cmd_map(map_o, out);
        else if (*map_lag) cmd_map_lag(lag_o, out);
        else if (*baseline) cmd_baseline(base_o, out);
        else if (*sur) cmd_surrogate(sur_o, out);
        else if (*cmp) cmd_compare(cmp_o, out);
        else if (*fetch) cmd_fetch(fetch_o, out);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "InternalError:" << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace couplemap::cli
