#include "couplemap/series.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "couplemap/error.hpp"

namespace couplemap {

std::string_view to_string(SeriesKind kind) noexcept {
    switch (kind) {
        case SeriesKind::raw: return "raw";
        case SeriesKind::log_return: return "log-return";
        case SeriesKind::standardized: return "standardized";
    }
    return "unknown";
}

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    const double mu = mean(xs);
    double ss = 0.0;
    for (double v : xs) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

TimeSeries::TimeSeries(TimeAxis axis, std::vector<std::int64_t> timestamps, std::vector<double> values,
                       SeriesKind kind)
    : axis_(axis), timestamps_(std::move(timestamps)), values_(std::move(values)), kind_(kind) {
    if (values_.empty()) throw Error(ErrorKind::InvalidSeries, "empty series");
    if (timestamps_.size() != values_.size())
        throw Error(ErrorKind::InvalidSeries, "timestamp and value counts differ");
    for (std::size_t i = 1; i < timestamps_.size(); ++i) {
        if (timestamps_[i] <= timestamps_[i - 1])
            throw Error(ErrorKind::InvalidSeries, "timestamps not strictly increasing at " + label(i));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw Error(ErrorKind::InvalidSeries, "non-finite value at " + label(i));
    }
    if (kind_ == SeriesKind::standardized) {
        const double mu = mean(values_);
        const double sd = population_std(values_);
        if (std::abs(mu) > 1e-9 || std::abs(sd - 1.0) > 1e-9)
            throw Error(ErrorKind::InvalidSeries, "standardized series must have mean 0 and std 1");
    }
}

TimeSeries TimeSeries::indexed(std::vector<double> values, SeriesKind kind) {
    std::vector<std::int64_t> ts(values.size());
    std::iota(ts.begin(), ts.end(), std::int64_t{0});
    return TimeSeries(TimeAxis::index, std::move(ts), std::move(values), kind);
}

std::string TimeSeries::label(std::size_t i) const {
    if (axis_ == TimeAxis::date) return format_iso_date(timestamps_[i]);
    return std::to_string(timestamps_[i]);
}

AlignedPair::AlignedPair(TimeSeries x_, TimeSeries y_) : x(std::move(x_)), y(std::move(y_)) {
    if (x.axis() != y.axis() || !std::ranges::equal(x.timestamps(), y.timestamps()))
        throw Error(ErrorKind::InvalidSeries, "aligned pair requires identical timestamps");
}

std::int64_t parse_iso_date(std::string_view text) {
    // Accept "YYYY-MM-DD" optionally followed by a time part.
    if (text.size() > 10 && (text[10] == 'T' || text[10] == ' ')) text = text.substr(0, 10);
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw Error(ErrorKind::ParseError, "bad date '" + std::string(text) + "'");
    auto field = [&](std::size_t pos, std::size_t len, auto& out) {
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
        if (ec != std::errc{} || ptr != text.data() + pos + len)
            throw Error(ErrorKind::ParseError, "bad date '" + std::string(text) + "'");
    };
    field(0, 4, y);
    field(5, 2, m);
    field(8, 2, d);
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) throw Error(ErrorKind::ParseError, "bad date '" + std::string(text) + "'");
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_iso_date(std::int64_t days) {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char l, char r) {
               return std::tolower(static_cast<unsigned char>(l)) == std::tolower(static_cast<unsigned char>(r));
           });
}

std::ptrdiff_t find_column(const std::vector<std::string_view>& header, std::string_view name) {
    if (auto it = std::ranges::find(header, name); it != header.end()) return it - header.begin();
    std::ptrdiff_t found = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (iequals(header[i], name)) {
            if (found >= 0) return -1;
            found = static_cast<std::ptrdiff_t>(i);
        }
    }
    return found;
}

std::string row_error(std::size_t line_no, std::string_view what) {
    return "row " + std::to_string(line_no) + ": " + std::string(what);
}

}  // namespace

TimeSeries parse_csv(std::string_view text, std::string_view value_column) {
    std::vector<std::pair<std::string_view, std::size_t>> lines;
    std::size_t line_no = 0;
    for (std::size_t pos = 0; pos < text.size();) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++line_no;
        std::string_view line = trim(text.substr(pos, nl - pos));
        if (!line.empty()) lines.emplace_back(line, line_no);
        pos = nl + 1;
    }
    if (lines.empty()) throw Error(ErrorKind::ParseError, "empty input");

    // Strip a UTF-8 byte-order mark from the header.
    std::string_view header_line = lines.front().first;
    if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
    const auto header = split_row(header_line);

    TimeAxis axis = TimeAxis::date;
    std::ptrdiff_t ts_col = find_column(header, "date");
    if (ts_col < 0) {
        axis = TimeAxis::index;
        ts_col = find_column(header, "t");
    }
    if (ts_col < 0) throw Error(ErrorKind::ParseError, row_error(lines.front().second, "no 'date' or 't' column"));
    const std::ptrdiff_t val_col = find_column(header, value_column);
    if (val_col < 0)
        throw Error(ErrorKind::ParseError,
                    row_error(lines.front().second, "no column named '" + std::string(value_column) + "'"));

    std::vector<std::pair<std::int64_t, double>> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto [line, no] = lines[r];
        const auto cells = split_row(line);
        if (cells.size() != header.size()) throw Error(ErrorKind::ParseError, row_error(no, "wrong number of columns"));
        const auto ts_text = cells[static_cast<std::size_t>(ts_col)];
        const auto val_text = cells[static_cast<std::size_t>(val_col)];

        std::int64_t key = 0;
        if (axis == TimeAxis::date) {
            try {
                key = parse_iso_date(ts_text);
            } catch (const Error& e) {
                throw Error(ErrorKind::ParseError, row_error(no, e.detail()));
            }
        } else {
            auto [ptr, ec] = std::from_chars(ts_text.data(), ts_text.data() + ts_text.size(), key);
            if (ec != std::errc{} || ptr != ts_text.data() + ts_text.size())
                throw Error(ErrorKind::ParseError, row_error(no, "bad integer timestamp"));
        }

        double value = 0.0;
        const char* first = val_text.data();
        if (!val_text.empty() && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, val_text.data() + val_text.size(), value);
        if (val_text.empty() || ec != std::errc{} || ptr != val_text.data() + val_text.size() || !std::isfinite(value))
            throw Error(ErrorKind::ParseError, row_error(no, "bad numeric value '" + std::string(val_text) + "'"));
        rows.emplace_back(key, value);
    }
    if (rows.size() < 2) throw Error(ErrorKind::ParseError, "fewer than 2 data rows");

    std::ranges::stable_sort(rows, {}, &std::pair<std::int64_t, double>::first);
    std::vector<std::int64_t> ts;
    std::vector<double> vs;
    ts.reserve(rows.size());
    vs.reserve(rows.size());
    for (const auto& [k, v] : rows) {
        if (!ts.empty() && ts.back() == k) {
            throw Error(ErrorKind::DuplicateTimestamp,
                        axis == TimeAxis::date ? format_iso_date(k) : std::to_string(k));
        }
        ts.push_back(k);
        vs.push_back(v);
    }
    return TimeSeries(axis, std::move(ts), std::move(vs), SeriesKind::raw);
}

TimeSeries load_csv(const std::filesystem::path& path, std::string_view value_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::IoError, path.string());
    return parse_csv(buf.str(), value_column);
}

void write_csv(const TimeSeries& s, std::ostream& out) {
    out << (s.axis() == TimeAxis::date ? "date" : "t") << ",value\n";
    char buf[32];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", s.values()[i]);
        out << s.label(i) << ',' << buf << '\n';
    }
}

void save_csv(const TimeSeries& s, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, path.string());
    write_csv(s, out);
    if (!out) throw Error(ErrorKind::IoError, path.string());
}

AlignedPair align_pair(const TimeSeries& a, const TimeSeries& b) {
    if (a.axis() != b.axis()) throw Error(ErrorKind::EmptyIntersection, "series use different timestamp axes");
    std::vector<std::int64_t> ts;
    std::vector<double> xs;
    std::vector<double> ys;
    const auto ta = a.timestamps();
    const auto tb = b.timestamps();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ta.size() && j < tb.size()) {
        if (ta[i] < tb[j]) {
            ++i;
        } else if (tb[j] < ta[i]) {
            ++j;
        } else {
            ts.push_back(ta[i]);
            xs.push_back(a.values()[i]);
            ys.push_back(b.values()[j]);
            ++i;
            ++j;
        }
    }
    if (ts.empty()) throw Error(ErrorKind::EmptyIntersection, "no common timestamps");
    // Restricting a standardized series changes its moments, so only the
    // unnormalized kinds carry over.
    auto keep = [](SeriesKind k, bool whole) { return (k == SeriesKind::standardized && !whole) ? SeriesKind::raw : k; };
    TimeSeries x(a.axis(), ts, std::move(xs), keep(a.kind(), ts.size() == a.size()));
    TimeSeries y(b.axis(), std::move(ts), std::move(ys), keep(b.kind(), x.size() == b.size()));
    return AlignedPair(std::move(x), std::move(y));
}

TimeSeries log_returns(const TimeSeries& s) {
    if (s.kind() != SeriesKind::raw)
        throw Error(ErrorKind::WrongKind, "log_returns expects a raw series, got " + std::string(to_string(s.kind())));
    if (s.size() < 2) throw Error(ErrorKind::LengthTooShort, "log_returns needs at least 2 points");
    const auto v = s.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw Error(ErrorKind::NonPositiveValue, "at " + s.label(i));
    }
    std::vector<std::int64_t> ts(s.timestamps().begin() + 1, s.timestamps().end());
    std::vector<double> out(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) out[i] = std::log(v[i + 1] / v[i]);
    return TimeSeries(s.axis(), std::move(ts), std::move(out), SeriesKind::log_return);
}

TimeSeries standardize(const TimeSeries& s) {
    if (s.kind() == SeriesKind::standardized)
        throw Error(ErrorKind::WrongKind, "series is already standardized");
    const auto v = s.values();
    const auto [lo, hi] = std::ranges::minmax(v);
    const double sd = population_std(v);
    if (lo == hi || !(sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "");
    const double mu = mean(v);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mu) / sd;
    // A second centering pass removes rounding left by the first.
    const double residual = mean(out);
    for (double& x : out) x -= residual;
    return TimeSeries(s.axis(), std::vector<std::int64_t>(s.timestamps().begin(), s.timestamps().end()),
                      std::move(out), SeriesKind::standardized);
}

}  // namespace couplemap
