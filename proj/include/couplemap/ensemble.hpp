#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "couplemap/metrics.hpp"
#include "couplemap/series.hpp"

namespace couplemap {

struct Interval {
    double mean = 0;
    double half_width = 0;
};

/// Two-sided normal quantile Z_{(1+level)/2}; 1.6449 at level 0.90.
double z_score(double level);

/// mean +/- Z * S / sqrt(n), S the sample (n-1) standard deviation.
Interval confidence_interval(std::span<const double> samples, double level = 0.90);

struct SummaryRow {
    std::string measure_name;
    double mean = 0;
    double half_width = 0;
    std::size_t n = 0;
    std::size_t flags = 0;  // replicas in which the measure was a flagged zero
};

/// Aggregated measures of one system (an fGn baseline, a surrogate pair...).
struct SystemSummary {
    std::string system;
    std::vector<SummaryRow> rows;         // one per measure, export order
    std::vector<MeasureReport> replicas;  // in replica order

    const SummaryRow& row(std::string_view measure) const;
};

std::vector<SummaryRow> summarize(std::span<const MeasureReport> reports, double level = 0.90);

/// How an fGn replica is turned into a network: a series against its own lag,
/// or two independent series of the same Hurst exponent.
enum class CouplingMode { lagged, pair };

struct EnsembleConfig {
    std::vector<double> hurst_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t replicas_per_h = 32;
    std::size_t series_length = 2000;
    std::size_t bin_count = 50;
    std::size_t lag = 1;
    std::uint64_t master_seed = 0;
    double level = 0.90;
    CouplingMode mode = CouplingMode::lagged;
    std::size_t threads = 0;  // 0 = automatic

    void validate() const;
};

std::string fgn_system_name(double hurst);

/// One summary per Hurst value, in configuration order. Bit-identical for a
/// fixed configuration whatever the thread count.
std::vector<SystemSummary> run_fgn_ensemble(const EnsembleConfig& cfg);

struct SurrogateConfig {
    std::size_t replicas = 32;
    std::size_t bin_count = 50;
    std::uint64_t master_seed = 0;
    double level = 0.90;
    std::size_t threads = 0;
};

/// Surrogates both series independently per replica, maps the pair and
/// aggregates the measures.
SystemSummary run_surrogate_pair(const AlignedPair& pair, const SurrogateConfig& cfg, std::string system = "surrogate");
SystemSummary run_surrogate_pair(const TimeSeries& x, const TimeSeries& y, const SurrogateConfig& cfg,
                                 std::string system = "surrogate");

/// Named measure vector entering a radar comparison.
struct SystemVector {
    std::string name;
    std::vector<std::string> measures;
    std::vector<double> values;
};

SystemVector to_system_vector(std::string name, const MeasureReport& report);
SystemVector to_system_vector(const SystemSummary& summary);

struct ComparisonReport {
    struct Entry {
        std::string name;
        std::vector<double> values;
        std::vector<double> normalized;
        double distance_to_uncoupled = 0;
    };
    std::string baseline;
    std::vector<std::string> measures;
    std::vector<Entry> systems;
};

inline constexpr std::string_view kUncoupledBaseline = "fGn(H=0.5)";

/// Per-measure min-max rescaling across systems (0.5 when all values agree)
/// and Euclidean distance of each normalized vector to the baseline's.
ComparisonReport radar_normalize(std::span<const SystemVector> systems,
                                 std::string_view baseline = kUncoupledBaseline);

/// Worker count: `requested` if nonzero, else hardware concurrency capped by
/// COUPLEMAP_THREADS when that is set to a positive value.
std::size_t resolve_threads(std::size_t requested);

}  // namespace couplemap
