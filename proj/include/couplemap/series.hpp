#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace couplemap {

// How timestamps are labelled. Dates are stored as days since 1970-01-01 so
// both axes share an ordered integer key.
enum class TimeAxis { date, index };

enum class SeriesKind { raw, log_return, standardized };

std::string_view to_string(SeriesKind kind) noexcept;

/// Ordered, finite, timestamped amplitudes.
///
/// The constructor enforces the invariants: at least one point, strictly
/// increasing timestamps, finite values, and for `standardized` series a
/// sample mean of 0 and population standard deviation of 1 (both within 1e-9).
class TimeSeries {
public:
    TimeSeries(TimeAxis axis, std::vector<std::int64_t> timestamps, std::vector<double> values,
               SeriesKind kind = SeriesKind::raw);

    /// Integer-indexed series with timestamps 0..n-1.
    static TimeSeries indexed(std::vector<double> values, SeriesKind kind = SeriesKind::raw);

    TimeAxis axis() const noexcept { return axis_; }
    SeriesKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const std::int64_t> timestamps() const noexcept { return timestamps_; }

    std::string label(std::size_t i) const;

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    TimeAxis axis_;
    std::vector<std::int64_t> timestamps_;
    std::vector<double> values_;
    SeriesKind kind_;
};

/// Two series restricted to a common calendar.
struct AlignedPair {
    TimeSeries x;
    TimeSeries y;

    AlignedPair(TimeSeries x_, TimeSeries y_);
    std::size_t common_length() const noexcept { return x.size(); }
};

// Date helpers ("YYYY-MM-DD" <-> days since epoch).
std::int64_t parse_iso_date(std::string_view text);
std::string format_iso_date(std::int64_t days);

/// Parses CSV text with a header row. The timestamp column is `date`
/// (ISO-8601) or `t` (integer); `value_column` names the amplitude column.
/// Rows are sorted by timestamp; duplicates are rejected.
TimeSeries parse_csv(std::string_view text, std::string_view value_column);
TimeSeries load_csv(const std::filesystem::path& path, std::string_view value_column);

/// Writes `date,value` or `t,value` rows, values at round-trip precision.
void write_csv(const TimeSeries& s, std::ostream& out);
void save_csv(const TimeSeries& s, const std::filesystem::path& path);

/// Inner join on timestamps.
AlignedPair align_pair(const TimeSeries& a, const TimeSeries& b);

/// ln(s[t+1]/s[t]) stamped with the later timestamp. Requires a raw, strictly
/// positive series.
TimeSeries log_returns(const TimeSeries& s);

/// (s - mean) / std with the population standard deviation.
TimeSeries standardize(const TimeSeries& s);

// Population moments shared across modules.
double mean(std::span<const double> xs);
double population_std(std::span<const double> xs);

}  // namespace couplemap
