#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "couplemap/netmap.hpp"
#include "oracle/brute_force.hpp"

namespace testing {

inline couplemap::CouplingNetwork from_matrix(const oracle::Matrix& w) {
    const std::size_t n = w.size();
    std::vector<std::uint64_t> flat;
    std::uint64_t total = 0;
    for (const auto& row : w)
        for (auto v : row) {
            flat.push_back(v);
            total += v;
        }
    return couplemap::CouplingNetwork(n, std::move(flat), total);
}

inline oracle::Matrix to_matrix(const couplemap::CouplingNetwork& net) {
    const std::size_t n = net.bin_count();
    oracle::Matrix w(n, std::vector<std::uint64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = net.weight(i, j);
    return w;
}

// Unweighted edge list helper: every listed arc gets weight 1.
inline oracle::Matrix arcs(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> list) {
    oracle::Matrix w(n, std::vector<std::uint64_t>(n, 0));
    for (auto [i, j] : list) w[i][j] = 1;
    return w;
}

inline oracle::Matrix bidirectional(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> list) {
    oracle::Matrix w(n, std::vector<std::uint64_t>(n, 0));
    for (auto [i, j] : list) w[i][j] = w[j][i] = 1;
    return w;
}

// Random weighted digraph with at least one edge.
inline oracle::Matrix random_matrix(std::mt19937_64& rng, std::size_t n, double density, std::uint64_t max_w) {
    std::bernoulli_distribution on(density);
    std::uniform_int_distribution<std::uint64_t> weight(1, max_w);
    oracle::Matrix w(n, std::vector<std::uint64_t>(n, 0));
    bool any = false;
    for (auto& row : w)
        for (auto& v : row)
            if (on(rng)) {
                v = weight(rng);
                any = true;
            }
    if (!any) w[0][n - 1] = 1;
    return w;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("couplemap_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace testing
