#include "couplemap/netmap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "couplemap/error.hpp"

namespace couplemap {
namespace {

void require_bins(std::size_t bins) {
    if (bins < 2) throw Error(ErrorKind::InvalidArgument, "bin count must be >= 2");
}

}  // namespace

std::vector<double> bin_edges(std::span<const double> values, std::size_t bins) {
    require_bins(bins);
    if (values.empty()) throw Error(ErrorKind::InvalidArgument, "cannot bin an empty series");
    const auto [lo, hi] = std::ranges::minmax(values);
    std::vector<double> edges(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t k = 0; k <= bins; ++k) edges[k] = lo + width * static_cast<double>(k);
    edges[bins] = hi;
    return edges;
}

std::vector<std::size_t> discretize(std::span<const double> values, std::size_t bins) {
    require_bins(bins);
    if (values.empty()) throw Error(ErrorKind::InvalidArgument, "cannot bin an empty series");
    const auto [lo, hi] = std::ranges::minmax(values);
    std::vector<std::size_t> idx(values.size(), 0);
    if (lo == hi) return idx;
    const double range = hi - lo;
    const double b = static_cast<double>(bins);
    for (std::size_t t = 0; t < values.size(); ++t) {
        const double pos = std::floor(b * (values[t] - lo) / range);
        idx[t] = static_cast<std::size_t>(std::clamp(pos, 0.0, b - 1.0));
    }
    return idx;
}

std::vector<std::size_t> discretize(const TimeSeries& s, std::size_t bins) { return discretize(s.values(), bins); }

CouplingNetwork::CouplingNetwork(std::size_t bin_count)
    : bins_(bin_count), weights_(bin_count * bin_count, 0), samples_(0) {
    require_bins(bin_count);
}

CouplingNetwork::CouplingNetwork(std::size_t bin_count, std::vector<std::uint64_t> weights,
                                 std::uint64_t sample_count)
    : bins_(bin_count), weights_(std::move(weights)), samples_(sample_count) {
    require_bins(bins_);
    if (weights_.size() != bins_ * bins_) throw Error(ErrorKind::InvalidArgument, "weight matrix must be B x B");
    const auto total = std::accumulate(weights_.begin(), weights_.end(), std::uint64_t{0});
    if (total != samples_) throw Error(ErrorKind::InvalidArgument, "weights must sum to the sample count");
}

void CouplingNetwork::add(std::size_t i, std::size_t j, std::uint64_t count) {
    if (i >= bins_ || j >= bins_) throw Error(ErrorKind::InvalidArgument, "bin index out of range");
    weights_[i * bins_ + j] += count;
    samples_ += count;
}

CouplingNetwork CouplingNetwork::transposed() const {
    std::vector<std::uint64_t> w(weights_.size());
    for (std::size_t i = 0; i < bins_; ++i)
        for (std::size_t j = 0; j < bins_; ++j) w[j * bins_ + i] = weights_[i * bins_ + j];
    return CouplingNetwork(bins_, std::move(w), samples_);
}

CouplingNetwork map_indices(std::span<const std::size_t> x_bins, std::span<const std::size_t> y_bins,
                            std::size_t bins) {
    if (x_bins.size() != y_bins.size()) throw Error(ErrorKind::InvalidArgument, "index sequences differ in length");
    CouplingNetwork net(bins);
    for (std::size_t t = 0; t < x_bins.size(); ++t) net.add(x_bins[t], y_bins[t]);
    return net;
}

BinGrid bin_grid(const AlignedPair& pair, std::size_t bins) {
    return BinGrid{bins, bin_edges(pair.x.values(), bins), bin_edges(pair.y.values(), bins)};
}

CouplingNetwork map_pair(const AlignedPair& pair, std::size_t bins) {
    return map_indices(discretize(pair.x, bins), discretize(pair.y, bins), bins);
}

CouplingNetwork map_lagged(const TimeSeries& s, std::size_t lag, std::size_t bins) {
    if (lag < 1) throw Error(ErrorKind::InvalidArgument, "lag must be >= 1");
    if (lag >= s.size())
        throw Error(ErrorKind::LagTooLarge, "lag " + std::to_string(lag) + " with length " + std::to_string(s.size()));
    const auto idx = discretize(s, bins);
    const std::span<const std::size_t> all(idx);
    return map_indices(all.first(idx.size() - lag), all.subspan(lag), bins);
}

JointProbability joint_probability(const CouplingNetwork& net) {
    if (net.sample_count() == 0) throw Error(ErrorKind::EmptyNetwork, "");
    JointProbability jp{net.bin_count(), std::vector<double>(net.weights().size())};
    const double n = static_cast<double>(net.sample_count());
    std::ranges::transform(net.weights(), jp.p.begin(), [n](std::uint64_t w) { return static_cast<double>(w) / n; });
    return jp;
}

void write_adjacency_tsv(const CouplingNetwork& net, std::ostream& out) {
    const std::size_t b = net.bin_count();
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            if (j) out << '\t';
            out << net.weight(i, j);
        }
        out << '\n';
    }
}

void write_edge_list_csv(const CouplingNetwork& net, std::ostream& out) {
    out << "source,target,weight\n";
    const std::size_t b = net.bin_count();
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            if (const auto w = net.weight(i, j); w > 0) out << i << ',' << j << ',' << w << '\n';
}

void write_joint_probability_tsv(const JointProbability& p, std::ostream& out) {
    char buf[32];
    for (std::size_t i = 0; i < p.bin_count; ++i) {
        for (std::size_t j = 0; j < p.bin_count; ++j) {
            if (j) out << '\t';
            std::snprintf(buf, sizeof buf, "%.17g", p.at(i, j));
            out << buf;
        }
        out << '\n';
    }
}

CouplingNetwork read_adjacency_tsv(std::istream& in) {
    std::vector<std::uint64_t> weights;
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++rows;
        std::size_t start = 0;
        while (start <= line.size()) {
            auto tab = line.find('\t', start);
            if (tab == std::string::npos) tab = line.size();
            std::uint64_t w = 0;
            auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + tab, w);
            if (ec != std::errc{} || ptr != line.data() + tab)
                throw Error(ErrorKind::ParseError, "row " + std::to_string(rows) + ": bad weight");
            weights.push_back(w);
            start = tab + 1;
        }
    }
    if (rows == 0 || weights.size() != rows * rows) throw Error(ErrorKind::ParseError, "adjacency is not square");
    const auto total = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
    return CouplingNetwork(rows, std::move(weights), total);
}

}  // namespace couplemap
