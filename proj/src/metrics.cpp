#include "couplemap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

#include "couplemap/error.hpp"

namespace couplemap {
namespace {

__extension__ using i128 = __int128;

// Binarized adjacency. `loops` keeps the diagonal, `plain` drops it.
struct Binary {
    std::size_t n = 0;
    std::vector<char> loops;
    std::vector<char> plain;

    explicit Binary(const CouplingNetwork& net) : n(net.bin_count()), loops(n * n, 0), plain(n * n, 0) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (net.weight(i, j) > 0) {
                    loops[i * n + j] = 1;
                    if (i != j) plain[i * n + j] = 1;
                }
            }
        }
    }

    bool has(std::size_t i, std::size_t j) const { return loops[i * n + j] != 0; }
    bool arc(std::size_t i, std::size_t j) const { return plain[i * n + j] != 0; }
    bool link(std::size_t i, std::size_t j) const { return arc(i, j) || arc(j, i); }
};

std::vector<std::int64_t> total_degrees(const Binary& g) {
    std::vector<std::int64_t> k(g.n, 0);
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = 0; j < g.n; ++j) {
            if (g.has(i, j)) {
                ++k[i];
                ++k[j];
            }
        }
    }
    return k;
}

double ratio(i128 num, i128 den) { return static_cast<double>(num) / static_cast<double>(den); }

}  // namespace

std::optional<std::size_t> measure_index(std::string_view name) {
    for (std::size_t i = 0; i < kMeasureNames.size(); ++i)
        if (kMeasureNames[i] == name) return i;
    return std::nullopt;
}

double& MeasureReport::operator[](std::string_view name) {
    const auto i = measure_index(name);
    if (!i) throw Error(ErrorKind::InvalidArgument, "unknown measure '" + std::string(name) + "'");
    return values[*i];
}

double MeasureReport::operator[](std::string_view name) const {
    const auto i = measure_index(name);
    if (!i) throw Error(ErrorKind::InvalidArgument, "unknown measure '" + std::string(name) + "'");
    return values[*i];
}

bool MeasureReport::flagged(std::string_view name) const { return std::ranges::find(flags, name) != flags.end(); }

double deformation_ratio(const JointProbability& p) {
    const std::size_t b = p.bin_count;
    double total = 0.0;
    for (double v : p.p) total += v;
    if (!(total > 0.0)) throw Error(ErrorKind::EmptyDistribution, "");

    const double s = std::numbers::sqrt2;
    double mu = 0.0;
    double mv = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            const double w = p.at(i, j);
            if (w == 0.0) continue;
            const double fi = static_cast<double>(i);
            const double fj = static_cast<double>(j);
            mu += w * (fi + fj) / s;
            mv += w * (fi - fj) / s;
        }
    }
    mu /= total;
    mv /= total;
    double vu = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            const double w = p.at(i, j);
            if (w == 0.0) continue;
            const double fi = static_cast<double>(i);
            const double fj = static_cast<double>(j);
            const double du = (fi + fj) / s - mu;
            const double dv = (fi - fj) / s - mv;
            vu += w * du * du;
            vv += w * dv * dv;
        }
    }
    const double sigma_main = std::sqrt(vu / total);
    const double sigma_anti = std::sqrt(vv / total);
    const double top = std::max(sigma_main, sigma_anti);
    if (top == 0.0) return 0.0;
    return (sigma_main - sigma_anti) / top;
}

DegreeStats degree_stats(const CouplingNetwork& net) {
    const Binary g(net);
    std::vector<std::int64_t> kout(g.n, 0);
    std::vector<std::int64_t> kin(g.n, 0);
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = 0; j < g.n; ++j) {
            if (g.has(i, j)) {
                ++kout[i];
                ++kin[j];
            }
        }
    }
    std::int64_t s_out = 0, s_in = 0, s_tot = 0, q_out = 0, q_in = 0, q_tot = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const std::int64_t kt = kout[i] + kin[i];
        s_out += kout[i];
        s_in += kin[i];
        s_tot += kt;
        q_out += kout[i] * kout[i];
        q_in += kin[i] * kin[i];
        q_tot += kt * kt;
    }
    const auto n = static_cast<std::int64_t>(g.n);
    DegreeStats d;
    d.mean_out = ratio(s_out, n);
    d.mean_in = ratio(s_in, n);
    d.mean_total = ratio(s_tot, n);
    d.mean_sq_out = ratio(q_out, n);
    d.mean_sq_in = ratio(q_in, n);
    d.mean_sq_total = ratio(q_tot, n);
    // Population variance n*sum(k^2) - (sum k)^2 over n^2, exact in integers.
    d.std_total = std::sqrt(ratio(static_cast<i128>(n) * q_tot - static_cast<i128>(s_tot) * s_tot,
                                  static_cast<i128>(n) * n));
    d.concentration = q_tot == 0 ? 0.0 : ratio(static_cast<i128>(s_tot) * s_tot, static_cast<i128>(n) * q_tot);
    return d;
}

ClusteringStats clustering_stats(const CouplingNetwork& net) {
    if (net.bin_count() < 3) throw Error(ErrorKind::InvalidArgument, "clustering needs at least 3 nodes");
    const Binary g(net);
    const std::size_t n = g.n;

    std::vector<std::vector<std::size_t>> nbrs(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && g.link(i, j)) nbrs[i].push_back(j);

    std::int64_t closed = 0;
    std::int64_t triples = 0;
    std::vector<double> local(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nb = nbrs[i];
        const auto d = static_cast<std::int64_t>(nb.size());
        if (d < 2) continue;
        std::int64_t t = 0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                if (g.link(nb[a], nb[b])) ++t;
        closed += t;
        triples += d * (d - 1) / 2;
        local[i] = ratio(t, d * (d - 1) / 2);
    }

    ClusteringStats c;
    if (triples == 0) {
        c.global_degenerate = true;
    } else {
        c.global = ratio(closed, triples);
    }
    c.mean_local_undirected = mean(local);
    c.std_local = population_std(local);

    // Directed local clustering over all triangle orientations.
    std::vector<double> directed(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t d_tot = 0;
        std::int64_t d_recip = 0;
        for (std::size_t j = 0; j < n; ++j) {
            d_tot += g.arc(i, j) + g.arc(j, i);
            d_recip += g.arc(i, j) && g.arc(j, i);
        }
        const std::int64_t den = 2 * (d_tot * (d_tot - 1) - 2 * d_recip);
        if (den <= 0) continue;
        std::int64_t num = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const int sij = g.arc(i, j) + g.arc(j, i);
            if (sij == 0) continue;
            for (std::size_t h = 0; h < n; ++h) {
                const int shi = g.arc(h, i) + g.arc(i, h);
                if (shi == 0) continue;
                num += static_cast<std::int64_t>(sij) * (g.arc(j, h) + g.arc(h, j)) * shi;
            }
        }
        directed[i] = ratio(num, den);
    }
    c.mean_local_directed = mean(directed);
    return c;
}

namespace {

// Sum of hop distances and count of reachable ordered pairs (i != j).
std::pair<std::int64_t, std::int64_t> bfs_totals(std::size_t n, const auto& adjacent) {
    std::int64_t sum = 0;
    std::int64_t count = 0;
    std::vector<int> dist(n);
    std::deque<std::size_t> queue;
    for (std::size_t src = 0; src < n; ++src) {
        std::ranges::fill(dist, -1);
        dist[src] = 0;
        queue.assign(1, src);
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t v = 0; v < n; ++v) {
                if (dist[v] < 0 && adjacent(u, v)) {
                    dist[v] = dist[u] + 1;
                    sum += dist[v];
                    ++count;
                    queue.push_back(v);
                }
            }
        }
    }
    return {sum, count};
}

}  // namespace

PathStats path_stats(const CouplingNetwork& net) {
    const Binary g(net);
    if (std::ranges::none_of(g.loops, [](char c) { return c != 0; })) throw Error(ErrorKind::NoEdges, "");
    PathStats p;
    const auto [ds, dc] = bfs_totals(g.n, [&](std::size_t u, std::size_t v) { return g.arc(u, v); });
    const auto [us, uc] = bfs_totals(g.n, [&](std::size_t u, std::size_t v) { return g.link(u, v); });
    if (dc == 0) {
        p.directed_degenerate = true;
    } else {
        p.mean_directed = ratio(ds, dc);
    }
    if (uc == 0) {
        p.undirected_degenerate = true;
    } else {
        p.mean_undirected = ratio(us, uc);
    }
    return p;
}

namespace {

struct EdgeEnds {
    std::int64_t ku;
    std::int64_t kv;
};

}  // namespace

// Each binarized edge (self-loops included) contributes both orientations of
// its endpoint total-degree pair, so the mixing matrix is symmetric. Variances
// are jackknife sums over single-edge removals.
AssortStats assortativity_stats(const CouplingNetwork& net) {
    const Binary g(net);
    const auto k = total_degrees(g);
    std::vector<EdgeEnds> edges;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            if (g.has(i, j)) edges.push_back({k[i], k[j]});

    AssortStats a;

    // Scalar (Pearson) assortativity from integer moments.
    i128 m = 0, s1 = 0, s2 = 0, sxy = 0;
    for (const auto& e : edges) {
        m += 2;
        s1 += e.ku + e.kv;
        s2 += e.ku * e.ku + e.kv * e.kv;
        sxy += 2 * e.ku * e.kv;
    }
    auto pearson = [](i128 m_, i128 s1_, i128 s2_, i128 sxy_) -> std::optional<double> {
        const i128 den = m_ * s2_ - s1_ * s1_;
        if (m_ == 0 || den == 0) return std::nullopt;
        return ratio(m_ * sxy_ - s1_ * s1_, den);
    };
    if (const auto r = pearson(m, s1, s2, sxy)) {
        a.scalar_coef = *r;
        double var = 0.0;
        for (const auto& e : edges) {
            const auto rj = pearson(m - 2, s1 - (e.ku + e.kv), s2 - (e.ku * e.ku + e.kv * e.kv), sxy - 2 * e.ku * e.kv);
            if (rj) var += (*rj - *r) * (*rj - *r);
        }
        a.scalar_coef_var = var;
    } else {
        a.scalar_degenerate = true;
    }

    // Categorical assortativity over distinct degree values.
    std::map<std::int64_t, std::int64_t> row;  // category -> endpoint count
    i128 trace = 0;
    for (const auto& e : edges) {
        row[e.ku] += 1;
        row[e.kv] += 1;
        if (e.ku == e.kv) trace += 2;
    }
    i128 sum_sq = 0;
    for (const auto& [c, cnt] : row) sum_sq += static_cast<i128>(cnt) * cnt;
    auto categorical = [](i128 t, i128 tr, i128 sq) -> std::optional<double> {
        const i128 den = t * t - sq;
        if (t == 0 || den == 0) return std::nullopt;
        return ratio(t * tr - sq, den);
    };
    if (const auto r = categorical(m, trace, sum_sq)) {
        a.coef = *r;
        double var = 0.0;
        for (const auto& e : edges) {
            i128 sq = sum_sq;
            i128 tr = trace;
            if (e.ku == e.kv) {
                const i128 c = row[e.ku];
                sq += (c - 2) * (c - 2) - c * c;
                tr -= 2;
            } else {
                const i128 cu = row[e.ku];
                const i128 cv = row[e.kv];
                sq += (cu - 1) * (cu - 1) - cu * cu + (cv - 1) * (cv - 1) - cv * cv;
            }
            if (const auto rj = categorical(m - 2, tr, sq)) var += (*rj - *r) * (*rj - *r);
        }
        a.coef_var = var;
    } else {
        a.categorical_degenerate = true;
    }
    return a;
}

Partition detect_communities(const CouplingNetwork& net) {
    const std::size_t n = net.bin_count();
    // Symmetrized weights S = W + W^T; strengths include self-loops.
    std::vector<i128> e(n * n, 0);
    std::vector<i128> tot(n, 0);
    i128 two_m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const i128 s = static_cast<i128>(net.weight(i, j)) + net.weight(j, i);
            e[i * n + j] = s;
            tot[i] += s;
            two_m += s;
        }
    }
    if (two_m == 0) throw Error(ErrorKind::NoEdges, "");

    std::vector<int> owner(n);
    for (std::size_t i = 0; i < n; ++i) owner[i] = static_cast<int>(i);
    std::vector<char> alive(n, 1);

    // Modularity scaled by (2m)^2, exact in integers.
    auto q_scaled = [&] {
        i128 q = 0;
        for (std::size_t c = 0; c < n; ++c)
            if (alive[c]) q += two_m * e[c * n + c] - tot[c] * tot[c];
        return q;
    };

    i128 best_q = q_scaled();
    std::vector<int> best = owner;
    while (true) {
        bool found = false;
        i128 best_gain = 0;
        std::size_t ba = 0;
        std::size_t bb = 0;
        for (std::size_t a = 0; a < n; ++a) {
            if (!alive[a]) continue;
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!alive[b] || e[a * n + b] == 0) continue;
                const i128 gain = two_m * e[a * n + b] - tot[a] * tot[b];
                if (!found || gain > best_gain) {
                    found = true;
                    best_gain = gain;
                    ba = a;
                    bb = b;
                }
            }
        }
        if (!found) break;

        for (std::size_t x = 0; x < n; ++x) {
            if (!alive[x] || x == ba || x == bb) continue;
            e[ba * n + x] += e[bb * n + x];
            e[x * n + ba] = e[ba * n + x];
        }
        e[ba * n + ba] += e[bb * n + bb] + 2 * e[ba * n + bb];
        tot[ba] += tot[bb];
        alive[bb] = 0;
        for (auto& o : owner)
            if (o == static_cast<int>(bb)) o = static_cast<int>(ba);

        const i128 q = q_scaled();
        if (q > best_q) {
            best_q = q;
            best = owner;
        }
    }

    // Relabel 0, 1, ... in order of each community's smallest node.
    std::vector<int> relabel(n, -1);
    int next = 0;
    Partition out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& r = relabel[static_cast<std::size_t>(best[i])];
        if (r < 0) r = next++;
        out[i] = r;
    }
    return out;
}

ModularityStats modularity_stats(const CouplingNetwork& net, const Partition& partition) {
    const std::size_t n = net.bin_count();
    if (partition.size() != n) throw Error(ErrorKind::InvalidPartition, "partition size differs from bin count");
    i128 m = 0;
    std::vector<i128> wout(n, 0);
    std::vector<i128> win(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const i128 w = net.weight(i, j);
            wout[i] += w;
            win[j] += w;
            m += w;
        }
    }
    if (m == 0) throw Error(ErrorKind::NoEdges, "");
    for (std::size_t i = 0; i < n; ++i) {
        if (partition[i] < 0 && wout[i] + win[i] > 0)
            throw Error(ErrorKind::InvalidPartition, "node " + std::to_string(i) + " has edges but no community");
    }

    std::map<int, i128> in_s;   // sum of S within community
    std::map<int, i128> tot_s;  // strength in S
    std::map<int, i128> in_w;   // sum of W within community
    std::map<int, i128> out_c;
    std::map<int, i128> in_c;
    for (std::size_t i = 0; i < n; ++i) {
        if (partition[i] < 0) continue;
        const int ci = partition[i];
        tot_s[ci] += wout[i] + win[i];
        out_c[ci] += wout[i];
        in_c[ci] += win[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (partition[j] != ci) continue;
            const i128 w = net.weight(i, j);
            in_w[ci] += w;
            in_s[ci] += w + net.weight(j, i);
        }
    }
    const i128 two_m = 2 * m;
    i128 q_tot = 0;
    for (const auto& [c, t] : tot_s) q_tot += two_m * in_s[c] - t * t;
    i128 q_out = 0;
    for (const auto& [c, o] : out_c) q_out += m * in_w[c] - o * in_c[c];

    ModularityStats s;
    s.q_total_degree = ratio(q_tot, two_m * two_m);
    s.q_out_degree = ratio(q_out, m * m);
    s.partition = partition;
    return s;
}

MeasureReport measure_all(const CouplingNetwork& net) {
    if (net.bin_count() < 3) throw Error(ErrorKind::InvalidArgument, "measures need at least 3 bins");
    if (net.sample_count() == 0) throw Error(ErrorKind::EmptyNetwork, "");

    MeasureReport r;
    r.bin_count = net.bin_count();
    r.sample_count = net.sample_count();
    auto flag = [&](std::string_view name) { r.flags.emplace_back(name); };

    const auto d = degree_stats(net);
    r["mean_sq_k_total"] = d.mean_sq_total;
    r["mean_sq_k_out"] = d.mean_sq_out;
    r["mean_sq_k_in"] = d.mean_sq_in;
    r["mean_k_total"] = d.mean_total;
    r["mean_k_out"] = d.mean_out;
    r["mean_k_in"] = d.mean_in;
    r["std_k_total"] = d.std_total;
    r["degree_concentration"] = d.concentration;

    const auto c = clustering_stats(net);
    r["cl_global_std"] = c.std_local;
    r["cl_local_undirected_mean"] = c.mean_local_undirected;
    r["cl_local_directed_mean"] = c.mean_local_directed;
    r["cl_global"] = c.global;
    if (c.global_degenerate) flag("cl_global");

    const auto p = path_stats(net);
    r["mean_len_directed"] = p.mean_directed;
    r["mean_len_undirected"] = p.mean_undirected;
    if (p.directed_degenerate) flag("mean_len_directed");
    if (p.undirected_degenerate) flag("mean_len_undirected");

    r["deformation_R"] = deformation_ratio(joint_probability(net));

    const auto a = assortativity_stats(net);
    r["assort_coef"] = a.coef;
    r["assort_var"] = a.coef_var;
    r["scalar_assort_coef"] = a.scalar_coef;
    r["scalar_assort_var"] = a.scalar_coef_var;
    if (a.categorical_degenerate) {
        flag("assort_coef");
        flag("assort_var");
    }
    if (a.scalar_degenerate) {
        flag("scalar_assort_coef");
        flag("scalar_assort_var");
    }

    const auto q = modularity_stats(net, detect_communities(net));
    r["modularity_total_degree"] = q.q_total_degree;
    r["modularity_out_degree"] = q.q_out_degree;

    // Keep flags in export order.
    std::ranges::sort(r.flags, {}, [](const std::string& f) { return *measure_index(f); });
    return r;
}

}  // namespace couplemap
