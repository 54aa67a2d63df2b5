#include "mclab/transport.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <vector>

#include "mclab/errors.hpp"

namespace mclab {

namespace {

constexpr double kMassTol = 1e-12;
constexpr double kResidualEps = 1e-15;

struct Arc {
    int to;
    int rev;
    double cap;
    double cost;
};

/// Residual network over source / supply nodes / demand nodes / sink.
class FlowNetwork {
public:
    explicit FlowNetwork(int nodes) : adj_(nodes) {}

    void add_arc(int from, int to, double cap, double cost) {
        adj_[from].push_back({to, static_cast<int>(adj_[to].size()), cap, cost});
        adj_[to].push_back({from, static_cast<int>(adj_[from].size()) - 1, 0.0, -cost});
    }

    /// Successive shortest paths (Bellman–Ford, residual costs may be
    /// negative). Returns {flow, cost}.
    std::pair<double, double> min_cost_flow(int s, int t) {
        const int n = static_cast<int>(adj_.size());
        double flow = 0.0;
        double cost = 0.0;
        std::vector<double> dist(n);
        std::vector<int> prev_node(n), prev_arc(n);
        std::vector<char> in_queue(n);
        for (;;) {
            std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
            std::fill(in_queue.begin(), in_queue.end(), 0);
            dist[s] = 0.0;
            std::queue<int> q;
            q.push(s);
            while (!q.empty()) {
                const int u = q.front();
                q.pop();
                in_queue[u] = 0;
                for (int i = 0; i < static_cast<int>(adj_[u].size()); ++i) {
                    const Arc& a = adj_[u][i];
                    if (a.cap <= kResidualEps) continue;
                    const double nd = dist[u] + a.cost;
                    // Costs are small integers in practice; the slack avoids
                    // cycling on roundoff-equal paths.
                    if (nd < dist[a.to] - 1e-12) {
                        dist[a.to] = nd;
                        prev_node[a.to] = u;
                        prev_arc[a.to] = i;
                        if (!in_queue[a.to]) {
                            in_queue[a.to] = 1;
                            q.push(a.to);
                        }
                    }
                }
            }
            if (dist[t] == std::numeric_limits<double>::infinity()) break;

            double push = std::numeric_limits<double>::infinity();
            for (int v = t; v != s; v = prev_node[v]) push = std::min(push, adj_[prev_node[v]][prev_arc[v]].cap);
            for (int v = t; v != s; v = prev_node[v]) {
                Arc& a = adj_[prev_node[v]][prev_arc[v]];
                a.cap = (a.cap == push) ? 0.0 : a.cap - push;
                adj_[v][a.rev].cap += push;
            }
            flow += push;
            cost += push * dist[t];
        }
        return {flow, cost};
    }

    /// Edmonds–Karp.
    double max_flow(int s, int t) {
        const int n = static_cast<int>(adj_.size());
        double flow = 0.0;
        std::vector<int> prev_node(n), prev_arc(n);
        for (;;) {
            std::fill(prev_node.begin(), prev_node.end(), -1);
            prev_node[s] = s;
            std::queue<int> q;
            q.push(s);
            while (!q.empty() && prev_node[t] < 0) {
                const int u = q.front();
                q.pop();
                for (int i = 0; i < static_cast<int>(adj_[u].size()); ++i) {
                    const Arc& a = adj_[u][i];
                    if (a.cap > kResidualEps && prev_node[a.to] < 0) {
                        prev_node[a.to] = u;
                        prev_arc[a.to] = i;
                        q.push(a.to);
                    }
                }
            }
            if (prev_node[t] < 0) break;
            double push = std::numeric_limits<double>::infinity();
            for (int v = t; v != s; v = prev_node[v]) push = std::min(push, adj_[prev_node[v]][prev_arc[v]].cap);
            for (int v = t; v != s; v = prev_node[v]) {
                Arc& a = adj_[prev_node[v]][prev_arc[v]];
                a.cap = (a.cap == push) ? 0.0 : a.cap - push;
                adj_[v][a.rev].cap += push;
            }
            flow += push;
        }
        return flow;
    }

private:
    std::vector<std::vector<Arc>> adj_;
};

void validate(const TransportProblem& problem) {
    const auto m = problem.mu.size();
    if (problem.nu.size() != m || problem.cost.rows() != m || problem.cost.cols() != m) {
        throw DimensionError("transport problem has inconsistent dimensions");
    }
    if ((problem.mu.array() < 0).any() || (problem.nu.array() < 0).any()) {
        throw InfeasibleError("transport marginals must be nonnegative");
    }
    if (std::fabs(problem.mu.sum() - problem.nu.sum()) > kMassTol) {
        throw InfeasibleError("transport marginals have different total mass");
    }
}

std::vector<int> support(const Eigen::VectorXd& v) {
    std::vector<int> out;
    for (int i = 0; i < v.size(); ++i) {
        if (v(i) > 0) out.push_back(i);
    }
    return out;
}

/// Node layout: 0 source, 1..S supply, S+1..S+T demand, S+T+1 sink.
template <class ArcFilter>
FlowNetwork bipartite_network(const TransportProblem& problem, const std::vector<int>& src,
                              const std::vector<int>& dst, ArcFilter&& keep) {
    const int ns = static_cast<int>(src.size());
    const int nt = static_cast<int>(dst.size());
    FlowNetwork net(ns + nt + 2);
    const double unbounded = problem.mu.sum() + 1.0;
    for (int i = 0; i < ns; ++i) net.add_arc(0, 1 + i, problem.mu(src[i]), 0.0);
    for (int j = 0; j < nt; ++j) net.add_arc(1 + ns + j, ns + nt + 1, problem.nu(dst[j]), 0.0);
    for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < nt; ++j) {
            const double c = problem.cost(src[i], dst[j]);
            if (keep(c)) net.add_arc(1 + i, 1 + ns + j, unbounded, c);
        }
    }
    return net;
}

}  // namespace

double w1_distance(const TransportProblem& problem) {
    validate(problem);
    const auto src = support(problem.mu);
    const auto dst = support(problem.nu);
    if (src.empty()) return 0.0;
    FlowNetwork net = bipartite_network(problem, src, dst, [](double) { return true; });
    const int sink = static_cast<int>(src.size() + dst.size()) + 1;
    return net.min_cost_flow(0, sink).second;
}

double w1_path(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
    if (mu.size() != nu.size()) throw DimensionError("path measures differ in length");
    double total = 0.0;
    double cdf_gap = 0.0;
    for (Eigen::Index k = 0; k + 1 < mu.size(); ++k) {
        cdf_gap += mu(k) - nu(k);
        total += std::fabs(cdf_gap);
    }
    return total;
}

bool coupling_within(const TransportProblem& problem, double threshold) {
    validate(problem);
    const auto src = support(problem.mu);
    const auto dst = support(problem.nu);
    if (src.empty()) return true;
    FlowNetwork net = bipartite_network(problem, src, dst, [threshold](double c) { return c <= threshold; });
    const int sink = static_cast<int>(src.size() + dst.size()) + 1;
    return net.max_flow(0, sink) >= problem.mu.sum() - kMassTol;
}

double w_infinity(const TransportProblem& problem) {
    validate(problem);
    const auto src = support(problem.mu);
    const auto dst = support(problem.nu);
    std::set<double> values{0.0};
    for (int i : src) {
        for (int j : dst) values.insert(problem.cost(i, j));
    }
    const std::vector<double> candidates(values.begin(), values.end());
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;  // the largest value always admits a coupling
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (coupling_within(problem, candidates[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return candidates[lo];
}

}  // namespace mclab
