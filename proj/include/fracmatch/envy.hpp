#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracmatch/fractional.hpp"
#include "fracmatch/instance.hpp"
#include "fracmatch/integral.hpp"

namespace fracmatch {

/// Directed graph over one side's agents under a matching: an edge a -> b
/// means a strictly prefers b's allocation to its own utility. Graphs are
/// immutable snapshots rebuilt per query.
struct EnvyGraph {
    Side side = Side::Men;
    int n = 0;

    /// adj[a]: envied agents, ascending index (canonical form).
    std::vector<std::vector<int>> adj;
    /// pref[a]: same edges ordered by the value a places on the target's
    /// allocation, best first. This is the deterministic successor order for
    /// cycle and path extraction. Value ties (possible only under fractional
    /// allocations) break toward the lower index.
    std::vector<std::vector<int>> pref;

    bool has_edge(int a, int b) const {
        return std::binary_search(adj[a].begin(), adj[a].end(), b);
    }

    int out_degree(int a) const { return static_cast<int>(adj[a].size()); }

    bool is_sink(int a) const { return adj[a].empty(); }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int a = 0; a < n; ++a)
            for (int b : adj[a]) out.emplace_back(a, b);
        return out;
    }
};

/// Envy graph of one side under a fractional matching. For integral weights
/// the edge test reduces to comparing partners' values directly.
inline EnvyGraph build_envy_graph(const MatchingInstance& instance, const FractionalMatching& mu,
                                  Side side) {
    detail::check_weights(instance, mu);
    const int n = instance.n;

    // value_for[a][b]: a's valuation of b's allocation (same side).
    // Sparse in the matching support, so gather nonzero cells first.
    std::vector<std::vector<std::pair<int, Rational>>> alloc(n);
    for (int m = 0; m < n; ++m)
        for (int w = 0; w < n; ++w)
            if (mu.weights[m][w] != 0) {
                if (side == Side::Men)
                    alloc[m].emplace_back(w, mu.weights[m][w]);
                else
                    alloc[w].emplace_back(m, mu.weights[m][w]);
            }

    auto value_of_allocation = [&](int a, int b) {
        Rational total(0);
        for (const auto& [partner, weight] : alloc[b]) {
            total += side == Side::Men ? weight * instance.U[a][partner]
                                       : weight * instance.V[partner][a];
        }
        return total;
    };

    EnvyGraph g;
    g.side = side;
    g.n = n;
    g.adj.resize(n);
    g.pref.resize(n);
    for (int a = 0; a < n; ++a) {
        const Rational own = value_of_allocation(a, a);
        std::vector<std::pair<Rational, int>> envied;
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            Rational v = value_of_allocation(a, b);
            if (v > own) {
                g.adj[a].push_back(b);
                envied.emplace_back(std::move(v), b);
            }
        }
        std::stable_sort(envied.begin(), envied.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
        for (const auto& [v, b] : envied) g.pref[a].push_back(b);
    }
    return g;
}

/// Some directed cycle, or nullopt for acyclic graphs. Depth-first from the
/// lowest-index node, following most-envied successors first; the first back
/// edge closes the cycle. Any cycle would do for correctness, the fixed rule
/// only pins the trace.
inline std::optional<std::vector<int>> find_cycle(const EnvyGraph& g) {
    enum : char { White, Gray, Black };
    std::vector<char> color(g.n, White);
    std::vector<int> stack;

    // Iterative DFS keeping [node, next successor position] frames.
    std::vector<std::pair<int, int>> frames;
    for (int start = 0; start < g.n; ++start) {
        if (color[start] != White) continue;
        frames.emplace_back(start, 0);
        color[start] = Gray;
        stack.push_back(start);
        while (!frames.empty()) {
            auto& [node, pos] = frames.back();
            if (pos < static_cast<int>(g.pref[node].size())) {
                int next = g.pref[node][pos++];
                if (color[next] == Gray) {
                    auto it = std::find(stack.begin(), stack.end(), next);
                    return std::vector<int>(it, stack.end());
                }
                if (color[next] == White) {
                    color[next] = Gray;
                    stack.push_back(next);
                    frames.emplace_back(next, 0);
                }
            } else {
                color[node] = Black;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
    return std::nullopt;
}

/// Walk from `start` along preferred envy edges until a sink. A sink start
/// yields the one-node path. Throws CycleEncountered if the walk revisits a
/// node, which cannot happen on acyclic graphs.
inline std::vector<int> path_to_sink(const EnvyGraph& g, int start) {
    std::vector<char> seen(g.n, 0);
    std::vector<int> path;
    int node = start;
    for (;;) {
        if (seen[node]) throw CycleEncountered("envy path revisited node " + std::to_string(node));
        seen[node] = 1;
        path.push_back(node);
        if (g.is_sink(node)) return path;
        node = g.pref[node].front();
    }
}

enum class RotationKind { Cycle, Path };

/// Rotation of a base matching along an envy cycle or path. For both kinds,
/// node `a` takes the base partner of its successor; the path's last node
/// (its sink) wraps around to the source's partner. All other agents keep
/// their base partners.
struct Rotation {
    RotationKind kind = RotationKind::Cycle;
    Side side = Side::Men;
    std::vector<int> nodes;
    IntegralMatching produced;
};

inline Rotation rotate(const MatchingInstance& instance, const IntegralMatching& base, Side side,
                       const std::vector<int>& nodes, RotationKind kind) {
    detail::check_matching(instance, base);
    Rotation rot;
    rot.kind = kind;
    rot.side = side;
    rot.nodes = nodes;
    rot.produced = base;
    if (nodes.empty()) return rot;  // identity rotation

    std::vector<char> seen(instance.n, 0);
    for (int a : nodes) {
        if (a < 0 || a >= instance.n) throw InvalidRotation("node index out of range");
        if (seen[a]) throw InvalidRotation("repeated node in rotation");
        seen[a] = 1;
    }

    const EnvyGraph g = build_envy_graph(instance, FractionalMatching::from_integral(base), side);
    const int len = static_cast<int>(nodes.size());
    for (int i = 0; i + 1 < len; ++i)
        if (!g.has_edge(nodes[i], nodes[i + 1]))
            throw InvalidRotation("consecutive nodes are not an envy edge");
    if (kind == RotationKind::Cycle && len > 1 && !g.has_edge(nodes.back(), nodes.front()))
        throw InvalidRotation("cycle does not close with an envy edge");

    const std::vector<int> inv = base.inverse();
    for (int i = 0; i < len; ++i) {
        const int a = nodes[i];
        const int succ = nodes[(i + 1) % len];
        if (side == Side::Men) {
            rot.produced.pairing[a] = base.pairing[succ];
        } else {
            // Woman a takes the man holding her successor under the base.
            rot.produced.pairing[inv[succ]] = a;
        }
    }
    return rot;
}

/// Graphviz export, one digraph per side, nodes labelled m<i> / w<j>.
inline std::string to_dot(const EnvyGraph& g) {
    const char prefix = g.side == Side::Men ? 'm' : 'w';
    std::ostringstream out;
    out << "digraph envy_" << side_name(g.side) << " {\n";
    for (int a = 0; a < g.n; ++a) out << "  " << prefix << a << ";\n";
    for (const auto& [a, b] : g.edges())
        out << "  " << prefix << a << " -> " << prefix << b << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace fracmatch
