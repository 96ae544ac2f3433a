#include "couplemap/ensemble.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <thread>

#include "couplemap/error.hpp"
#include "couplemap/netmap.hpp"
#include "couplemap/synth.hpp"

namespace couplemap {

double z_score(double level) {
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::InvalidArgument, "confidence level must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), (1.0 + level) / 2.0);
}

Interval confidence_interval(std::span<const double> samples, double level) {
    const double z = z_score(level);
    const std::size_t n = samples.size();
    if (n < 2) throw Error(ErrorKind::TooFewSamples, "need at least 2 samples, got " + std::to_string(n));
    if (std::ranges::all_of(samples, [&](double v) { return v == samples.front(); })) return {samples.front(), 0.0};
    const double mu = mean(samples);
    double ss = 0.0;
    for (double v : samples) ss += (v - mu) * (v - mu);
    const double s = std::sqrt(ss / static_cast<double>(n - 1));
    return {mu, z * s / std::sqrt(static_cast<double>(n))};
}

const SummaryRow& SystemSummary::row(std::string_view measure) const {
    for (const auto& r : rows)
        if (r.measure_name == measure) return r;
    throw Error(ErrorKind::InvalidArgument, "no row for measure '" + std::string(measure) + "'");
}

std::vector<SummaryRow> summarize(std::span<const MeasureReport> reports, double level) {
    if (reports.size() < 2) throw Error(ErrorKind::TooFewSamples, "need at least 2 replicas, got " + std::to_string(reports.size()));
    std::vector<SummaryRow> rows;
    rows.reserve(kMeasureNames.size());
    std::vector<double> samples(reports.size());
    for (std::size_t m = 0; m < kMeasureNames.size(); ++m) {
        std::size_t flags = 0;
        for (std::size_t r = 0; r < reports.size(); ++r) {
            samples[r] = reports[r].values[m];
            flags += reports[r].flagged(kMeasureNames[m]) ? 1 : 0;
        }
        const auto ci = confidence_interval(samples, level);
        rows.push_back({std::string(kMeasureNames[m]), ci.mean, ci.half_width, reports.size(), flags});
    }
    return rows;
}

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("COUPLEMAP_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
    }
    return n;
}

namespace {

// Runs task(i) for i in [0, count) on up to `threads` workers. Results are
// written by index, so completion order never matters; the lowest-index
// failure is rethrown.
template <typename Task>
void parallel_for(std::size_t count, std::size_t threads, Task&& task) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n = std::min(std::max<std::size_t>(threads, 1), count);
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

void EnsembleConfig::validate() const {
    if (hurst_values.empty()) throw Error(ErrorKind::InvalidArgument, "no Hurst values given");
    for (double h : hurst_values) FgnSpec{h, series_length, 0}.validate();
    if (replicas_per_h < 2) throw Error(ErrorKind::TooFewSamples, "replicas must be >= 2");
    if (series_length < 64) throw Error(ErrorKind::LengthTooShort, "series length must be >= 64");
    if (bin_count < 3) throw Error(ErrorKind::InvalidArgument, "bin count must be >= 3");
    if (lag < 1) throw Error(ErrorKind::InvalidArgument, "lag must be >= 1");
    if (mode == CouplingMode::lagged && lag >= series_length) throw Error(ErrorKind::LagTooLarge, "lag must be below the series length");
    z_score(level);
}

std::string fgn_system_name(double hurst) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "fGn(H=%g)", hurst);
    return buf;
}

std::vector<SystemSummary> run_fgn_ensemble(const EnsembleConfig& cfg) {
    cfg.validate();
    const std::size_t nh = cfg.hurst_values.size();
    const std::size_t reps = cfg.replicas_per_h;
    std::vector<MeasureReport> reports(nh * reps);

    parallel_for(reports.size(), resolve_threads(cfg.threads), [&](std::size_t job) {
        const std::size_t h = job / reps;
        const std::size_t r = job % reps;
        const double hurst = cfg.hurst_values[h];
        if (cfg.mode == CouplingMode::lagged) {
            const auto s = generate_fgn({hurst, cfg.series_length, derive_seed(cfg.master_seed, {h, r})});
            reports[job] = measure_all(map_lagged(s, cfg.lag, cfg.bin_count));
        } else {
            const auto x = generate_fgn({hurst, cfg.series_length, derive_seed(cfg.master_seed, {h, r, 0})});
            const auto y = generate_fgn({hurst, cfg.series_length, derive_seed(cfg.master_seed, {h, r, 1})});
            reports[job] = measure_all(map_pair(AlignedPair(x, y), cfg.bin_count));
        }
    });

    std::vector<SystemSummary> out;
    out.reserve(nh);
    for (std::size_t h = 0; h < nh; ++h) {
        SystemSummary s;
        s.system = fgn_system_name(cfg.hurst_values[h]);
        s.replicas.assign(reports.begin() + static_cast<std::ptrdiff_t>(h * reps),
                          reports.begin() + static_cast<std::ptrdiff_t>((h + 1) * reps));
        s.rows = summarize(s.replicas, cfg.level);
        out.push_back(std::move(s));
    }
    return out;
}

SystemSummary run_surrogate_pair(const AlignedPair& pair, const SurrogateConfig& cfg, std::string system) {
    if (cfg.replicas < 2) throw Error(ErrorKind::TooFewSamples, "replicas must be >= 2");
    if (cfg.bin_count < 3) throw Error(ErrorKind::InvalidArgument, "bin count must be >= 3");
    z_score(cfg.level);
    std::vector<MeasureReport> reports(cfg.replicas);
    parallel_for(cfg.replicas, resolve_threads(cfg.threads), [&](std::size_t r) {
        auto sx = surrogate(pair.x, derive_seed(cfg.master_seed, {0, r}));
        auto sy = surrogate(pair.y, derive_seed(cfg.master_seed, {1, r}));
        reports[r] = measure_all(map_pair(AlignedPair(std::move(sx), std::move(sy)), cfg.bin_count));
    });
    SystemSummary s;
    s.system = std::move(system);
    s.replicas = std::move(reports);
    s.rows = summarize(s.replicas, cfg.level);
    return s;
}

SystemSummary run_surrogate_pair(const TimeSeries& x, const TimeSeries& y, const SurrogateConfig& cfg,
                                 std::string system) {
    return run_surrogate_pair(AlignedPair(x, y), cfg, std::move(system));
}

SystemVector to_system_vector(std::string name, const MeasureReport& report) {
    SystemVector v{std::move(name), {}, {}};
    for (std::size_t m = 0; m < kMeasureNames.size(); ++m) {
        v.measures.emplace_back(kMeasureNames[m]);
        v.values.push_back(report.values[m]);
    }
    return v;
}

SystemVector to_system_vector(const SystemSummary& summary) {
    SystemVector v{summary.system, {}, {}};
    for (const auto& r : summary.rows) {
        v.measures.push_back(r.measure_name);
        v.values.push_back(r.mean);
    }
    return v;
}

ComparisonReport radar_normalize(std::span<const SystemVector> systems, std::string_view baseline) {
    if (systems.size() < 2) throw Error(ErrorKind::InvalidArgument, "radar comparison needs at least 2 systems");
    const auto& names = systems.front().measures;
    const std::size_t nm = names.size();

    ComparisonReport rep;
    rep.baseline = std::string(baseline);
    rep.measures = names;
    for (const auto& sys : systems) {
        if (sys.measures.size() != sys.values.size())
            throw Error(ErrorKind::MismatchedMeasureSets, sys.name + ": names and values differ in length");
        std::vector<std::string> a = sys.measures;
        std::vector<std::string> b = names;
        std::ranges::sort(a);
        std::ranges::sort(b);
        if (a != b || std::ranges::adjacent_find(a) != a.end())
            throw Error(ErrorKind::MismatchedMeasureSets, sys.name);
        ComparisonReport::Entry e;
        e.name = sys.name;
        e.values.resize(nm);
        for (std::size_t m = 0; m < nm; ++m) {
            const auto it = std::ranges::find(sys.measures, names[m]);
            e.values[m] = sys.values[static_cast<std::size_t>(it - sys.measures.begin())];
        }
        rep.systems.push_back(std::move(e));
    }

    for (std::size_t m = 0; m < nm; ++m) {
        double lo = rep.systems.front().values[m];
        double hi = lo;
        for (const auto& e : rep.systems) {
            lo = std::min(lo, e.values[m]);
            hi = std::max(hi, e.values[m]);
        }
        for (auto& e : rep.systems) e.normalized.push_back(hi == lo ? 0.5 : (e.values[m] - lo) / (hi - lo));
    }

    const auto base = std::ranges::find(rep.systems, baseline, &ComparisonReport::Entry::name);
    if (base == rep.systems.end()) throw Error(ErrorKind::MissingBaseline, std::string(baseline));
    const auto ref = base->normalized;
    for (auto& e : rep.systems) {
        double ss = 0.0;
        for (std::size_t m = 0; m < nm; ++m) ss += (e.normalized[m] - ref[m]) * (e.normalized[m] - ref[m]);
        e.distance_to_uncoupled = std::sqrt(ss);
    }
    return rep;
}

}  // namespace couplemap
