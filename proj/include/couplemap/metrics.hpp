#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "couplemap/netmap.hpp"

namespace couplemap {

/// Degree moments on the binarized graph (edge present iff weight > 0). A
/// self-loop counts once as an out-neighbor and once as an in-neighbor.
/// Averages run over all B nodes, isolated ones included.
struct DegreeStats {
    double mean_sq_total = 0;
    double mean_sq_out = 0;
    double mean_sq_in = 0;
    double mean_total = 0;
    double mean_out = 0;
    double mean_in = 0;
    double std_total = 0;
    double concentration = 0;  // <k>^2 / <k^2> on total degree; 0 for an empty graph
};

struct ClusteringStats {
    double global = 0;
    double std_local = 0;
    double mean_local_undirected = 0;
    double mean_local_directed = 0;
    bool global_degenerate = false;  // no connected triples
};

struct PathStats {
    double mean_directed = 0;
    double mean_undirected = 0;
    bool directed_degenerate = false;  // no reachable ordered pair
    bool undirected_degenerate = false;
};

struct AssortStats {
    double coef = 0;
    double coef_var = 0;
    double scalar_coef = 0;
    double scalar_coef_var = 0;
    bool categorical_degenerate = false;
    bool scalar_degenerate = false;
};

/// Community label per node; -1 marks an unassigned node.
using Partition = std::vector<int>;

struct ModularityStats {
    double q_total_degree = 0;
    double q_out_degree = 0;
    Partition partition;
};

/// The measure battery in its fixed export order. The first twenty are the
/// table statistics; `degree_concentration` is the extra degree ratio.
inline constexpr std::array<std::string_view, 21> kMeasureNames{
    "mean_sq_k_total",
    "mean_sq_k_out",
    "mean_sq_k_in",
    "mean_k_total",
    "mean_k_out",
    "mean_k_in",
    "std_k_total",
    "cl_global_std",
    "cl_local_undirected_mean",
    "cl_local_directed_mean",
    "cl_global",
    "scalar_assort_var",
    "mean_len_directed",
    "mean_len_undirected",
    "deformation_R",
    "assort_var",
    "assort_coef",
    "scalar_assort_coef",
    "modularity_total_degree",
    "modularity_out_degree",
    "degree_concentration",
};
inline constexpr std::size_t kTableMeasureCount = 20;

struct MeasureReport {
    std::array<double, kMeasureNames.size()> values{};
    std::size_t bin_count = 0;
    std::uint64_t sample_count = 0;
    std::vector<std::string> flags;  // names of measures reported as flagged zeros

    double& operator[](std::string_view name);
    double operator[](std::string_view name) const;
    bool flagged(std::string_view name) const;
};

std::optional<std::size_t> measure_index(std::string_view name);

/// Normalized difference of the weighted standard deviations of the joint
/// probability along the main diagonal and the anti-diagonal.
double deformation_ratio(const JointProbability& p);

DegreeStats degree_stats(const CouplingNetwork& net);
ClusteringStats clustering_stats(const CouplingNetwork& net);
PathStats path_stats(const CouplingNetwork& net);
AssortStats assortativity_stats(const CouplingNetwork& net);

/// Greedy agglomerative modularity maximization on W + W^T.
Partition detect_communities(const CouplingNetwork& net);
ModularityStats modularity_stats(const CouplingNetwork& net, const Partition& partition);

MeasureReport measure_all(const CouplingNetwork& net);

}  // namespace couplemap
