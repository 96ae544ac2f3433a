#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "couplemap/series.hpp"

namespace couplemap {

/// Equal-width partition of each series' [min, max] into `bin_count` bins.
struct BinGrid {
    std::size_t bin_count = 0;
    std::vector<double> edges_x;
    std::vector<double> edges_y;
};

std::vector<double> bin_edges(std::span<const double> values, std::size_t bins);

/// index = floor(B (v - min) / (max - min)), clamped to [0, B-1]; the maximum
/// lands in the last bin and a constant series maps entirely to bin 0.
std::vector<std::size_t> discretize(std::span<const double> values, std::size_t bins);
std::vector<std::size_t> discretize(const TimeSeries& s, std::size_t bins);

/// Weighted directed network over amplitude bins. weight(i, j) counts the time
/// steps where the first series sat in bin i and the second in bin j.
class CouplingNetwork {
public:
    CouplingNetwork(std::size_t bin_count, std::vector<std::uint64_t> weights, std::uint64_t sample_count);

    /// Network with every weight zero.
    explicit CouplingNetwork(std::size_t bin_count);

    std::size_t bin_count() const noexcept { return bins_; }
    std::uint64_t sample_count() const noexcept { return samples_; }
    std::uint64_t weight(std::size_t i, std::size_t j) const { return weights_[i * bins_ + j]; }
    std::span<const std::uint64_t> weights() const noexcept { return weights_; }

    void add(std::size_t i, std::size_t j, std::uint64_t count = 1);

    CouplingNetwork transposed() const;

    friend bool operator==(const CouplingNetwork&, const CouplingNetwork&) = default;

private:
    std::size_t bins_;
    std::vector<std::uint64_t> weights_;
    std::uint64_t samples_;
};

/// Row-major B x B joint probability p = W / N.
struct JointProbability {
    std::size_t bin_count = 0;
    std::vector<double> p;

    double at(std::size_t i, std::size_t j) const { return p[i * bin_count + j]; }
};

/// Pairs two index sequences of equal length into a network.
CouplingNetwork map_indices(std::span<const std::size_t> x_bins, std::span<const std::size_t> y_bins,
                            std::size_t bins);

BinGrid bin_grid(const AlignedPair& pair, std::size_t bins);
CouplingNetwork map_pair(const AlignedPair& pair, std::size_t bins);

/// Couples a series with its own lag-shifted copy. Bins come from the range of
/// the full series.
CouplingNetwork map_lagged(const TimeSeries& s, std::size_t lag, std::size_t bins);

JointProbability joint_probability(const CouplingNetwork& net);

// Dense tab-separated matrix (row = source bin), sparse edge list, and the
// joint probability matrix.
void write_adjacency_tsv(const CouplingNetwork& net, std::ostream& out);
void write_edge_list_csv(const CouplingNetwork& net, std::ostream& out);
void write_joint_probability_tsv(const JointProbability& p, std::ostream& out);

CouplingNetwork read_adjacency_tsv(std::istream& in);

}  // namespace couplemap
