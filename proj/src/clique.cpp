// Copyright 2026 annealslice contributors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "annealslice/clique.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "annealslice/common.hpp"

namespace annealslice {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 0) throw ValidationError("vertex count must be non-negative");
    adjacent_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw ValidationError("edge endpoint out of range");
        if (u == v) throw ValidationError("self loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw ValidationError("duplicate edge");
    for (auto [u, v] : edges) {
        adjacent_[static_cast<std::size_t>(u * n + v)] = 1;
        adjacent_[static_cast<std::size_t>(v * n + u)] = 1;
    }
    edges_ = std::move(edges);
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
    return adjacent_[static_cast<std::size_t>(u * n_ + v)] != 0;
}

double Graph::density() const {
    if (n_ < 2) return 0.0;
    return static_cast<double>(edges_.size()) / (0.5 * n_ * (n_ - 1));
}

std::size_t Graph::pair_index(int n, int u, int v) {
    if (u > v) std::swap(u, v);
    const auto uu = static_cast<std::size_t>(u), nn = static_cast<std::size_t>(n);
    return uu * nn - uu * (uu + 1) / 2 + static_cast<std::size_t>(v - u - 1);
}

std::vector<std::uint8_t> Graph::pair_bits() const {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n_) * static_cast<std::size_t>(std::max(n_ - 1, 0)) / 2, 0);
    for (auto [u, v] : edges_) bits[pair_index(n_, u, v)] = 1;
    return bits;
}

Graph Graph::from_pair_bits(int n, std::span<const std::uint8_t> bits) {
    if (bits.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(std::max(n - 1, 0)) / 2)
        throw ValidationError("pair bit count does not match vertex count");
    std::vector<std::pair<int, int>> edges;
    std::size_t p = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++p)
            if (bits[p]) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

Graph random_graph(int n, std::optional<double> density, std::uint64_t seed) {
    if (n < 1) throw ValidationError("graph needs at least one vertex");
    Rng rng(seed);
    const double p = density ? *density : 0.2 + 0.6 * rng.uniform();
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("density must lie in [0, 1]");
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

ProblemModel maxclique_qubo(const Graph& graph, double penalty) {
    if (!std::isfinite(penalty)) throw ValidationError("penalty must be finite");
    const int n = graph.num_vertices();
    std::vector<double> linear(static_cast<std::size_t>(n), -1.0);
    std::vector<Coupling> quad;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (!graph.has_edge(u, v)) quad.push_back({u, v, penalty});
    return ProblemModel(Domain::binary, n, std::move(linear), std::move(quad));
}

// ---------------------------------------------------------------------------
// Embedding

void check_embedding(const Embedding& embedding, const ChimeraTopology& topology) {
    std::vector<int> owner(static_cast<std::size_t>(topology.num_nodes()), -1);
    for (int v = 0; v < embedding.num_logical(); ++v) {
        const auto& chain = embedding.chains[static_cast<std::size_t>(v)];
        if (chain.empty()) throw ValidationError("empty chain for variable " + std::to_string(v));
        for (int q : chain) {
            if (q < 0 || q >= topology.num_nodes()) throw ValidationError("chain qubit out of range");
            if (owner[static_cast<std::size_t>(q)] != -1) throw ValidationError("chains overlap at qubit " + std::to_string(q));
            owner[static_cast<std::size_t>(q)] = v;
        }
        std::vector<char> seen(chain.size(), 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t b = 0; b < chain.size(); ++b) {
                if (seen[b] || !topology.has_edge(std::min(chain[a], chain[b]), std::max(chain[a], chain[b]))) continue;
                seen[b] = 1;
                ++reached;
                stack.push_back(b);
            }
        }
        if (reached != chain.size()) throw ValidationError("chain for variable " + std::to_string(v) + " is disconnected");
    }
}

Embedding clique_embedding(int n_logical, const ChimeraTopology& topology) {
    const int m = topology.rows();
    if (topology.cols() != m || topology.shore() != 4) throw ValidationError("clique embedding needs a square C(m, m, 4)");
    if (n_logical < 1) throw ValidationError("need at least one logical variable");
    if (n_logical > 4 * m)
        throw ValidationError("clique of " + std::to_string(n_logical) + " exceeds capacity " + std::to_string(4 * m));
    Embedding e;
    for (int v = 0; v < n_logical; ++v) {
        const int b = v / 4, k = v % 4;
        std::vector<int> hw;
        for (int c = 0; c <= b; ++c) hw.push_back(topology.hardware_id(b, c, 1, k));
        for (int r = b; r < m; ++r) hw.push_back(topology.hardware_id(r, b, 0, k));
        std::vector<int> chain;
        for (int h : hw) {
            auto node = topology.node_of(h);
            if (!node) throw RuntimeError("embedding needs dead qubit " + std::to_string(h));
            chain.push_back(*node);
        }
        e.chains.push_back(std::move(chain));
    }
    return e;
}

EmbeddedModel embed(const ProblemModel& logical, const Embedding& embedding,
                    std::shared_ptr<const ChimeraTopology> topology, double chain_strength) {
    if (!topology) throw ValidationError("embedding needs a topology");
    if (!std::isfinite(chain_strength)) throw ValidationError("chain strength must be finite");
    if (embedding.num_logical() != logical.num_variables())
        throw ValidationError("embedding covers " + std::to_string(embedding.num_logical()) + " variables, model has " +
                              std::to_string(logical.num_variables()));
    check_embedding(embedding, *topology);

    EmbeddedModel out;
    ProblemModel ising = logical;
    if (logical.domain() == Domain::binary) {
        Converted c = to_ising(logical);
        ising = std::move(c.model);
        out.offset = c.offset;
    }

    std::vector<double> linear(static_cast<std::size_t>(topology->num_nodes()), 0.0);
    std::map<std::pair<int, int>, double> quad;
    for (int v = 0; v < ising.num_variables(); ++v) {
        const auto& chain = embedding.chains[static_cast<std::size_t>(v)];
        const double share = ising.linear(v) / static_cast<double>(chain.size());
        for (int q : chain) linear[static_cast<std::size_t>(q)] += share;
        for (std::size_t a = 0; a < chain.size(); ++a) {
            for (std::size_t b = a + 1; b < chain.size(); ++b) {
                const int p = std::min(chain[a], chain[b]), q = std::max(chain[a], chain[b]);
                if (!topology->has_edge(p, q)) continue;
                quad[{p, q}] -= chain_strength;
                out.offset += chain_strength;
            }
        }
    }
    for (const Coupling& c : ising.quadratic()) {
        std::optional<std::pair<int, int>> best;
        for (int p : embedding.chains[static_cast<std::size_t>(c.i)]) {
            for (int q : embedding.chains[static_cast<std::size_t>(c.j)]) {
                std::pair<int, int> e{std::min(p, q), std::max(p, q)};
                if (topology->has_edge(e.first, e.second) && (!best || e < *best)) best = e;
            }
        }
        if (!best)
            throw RuntimeError("no physical edge between chains " + std::to_string(c.i) + " and " + std::to_string(c.j));
        quad[*best] += c.value;
    }
    std::vector<Coupling> couplings;
    couplings.reserve(quad.size());
    for (const auto& [key, value] : quad) couplings.push_back({key.first, key.second, value});
    out.model = ProblemModel(Domain::spin, topology->num_nodes(), std::move(linear), std::move(couplings), topology);
    return out;
}

Assignment expand(std::span<const std::int8_t> logical, const Embedding& embedding, int num_physical, Domain logical_domain) {
    if (static_cast<int>(logical.size()) != embedding.num_logical()) throw ValidationError("logical assignment length mismatch");
    Assignment out(static_cast<std::size_t>(num_physical), -1);
    for (int v = 0; v < embedding.num_logical(); ++v) {
        const std::int8_t value = logical[static_cast<std::size_t>(v)];
        const std::int8_t spin = logical_domain == Domain::spin ? value : (value ? 1 : -1);
        for (int q : embedding.chains[static_cast<std::size_t>(v)]) out.at(static_cast<std::size_t>(q)) = spin;
    }
    return out;
}

Assignment unembed_read(std::span<const std::int8_t> physical, const Embedding& embedding, const ProblemModel& logical) {
    if (embedding.num_logical() != logical.num_variables()) throw ValidationError("embedding and model sizes differ");
    const bool binary = logical.domain() == Domain::binary;
    const std::int8_t low = binary ? 0 : -1;
    Assignment out(static_cast<std::size_t>(logical.num_variables()), low);
    std::vector<int> ties;
    for (int v = 0; v < embedding.num_logical(); ++v) {
        int vote = 0;
        for (int q : embedding.chains[static_cast<std::size_t>(v)]) vote += physical[static_cast<std::size_t>(q)] > 0 ? 1 : -1;
        if (vote > 0) out[static_cast<std::size_t>(v)] = 1;
        else if (vote == 0) ties.push_back(v);
    }
    // Ties resolved in index order; later tied variables sit at the low value meanwhile.
    for (int v : ties) {
        out[static_cast<std::size_t>(v)] = 1;
        const double e_high = energy(logical, out);
        out[static_cast<std::size_t>(v)] = low;
        const double e_low = energy(logical, out);
        if (e_high < e_low) out[static_cast<std::size_t>(v)] = 1;
    }
    return out;
}

SampleSet unembed(const SampleSet& physical, const Embedding& embedding, const ProblemModel& logical) {
    if (physical.domain() != Domain::spin) throw ValidationError("physical samples must be spins");
    std::vector<Assignment> reads;
    reads.reserve(physical.reads());
    for (const SampleRecord& r : physical.records()) {
        Assignment a = unembed_read(r.bits, embedding, logical);
        for (std::uint64_t c = 0; c < r.count; ++c) reads.push_back(a);
    }
    return SampleSet::from_reads(logical, std::move(reads), physical.seed());
}

ChainBreaks chain_break_fraction(const SampleSet& physical, const Embedding& embedding) {
    if (embedding.num_logical() == 0) throw ValidationError("empty embedding");
    ChainBreaks out;
    double weighted = 0.0;
    for (const SampleRecord& r : physical.records()) {
        int broken = 0;
        for (const auto& chain : embedding.chains) {
            const std::int8_t first = r.bits.at(static_cast<std::size_t>(chain.front()));
            for (int q : chain) {
                if (r.bits.at(static_cast<std::size_t>(q)) != first) {
                    ++broken;
                    break;
                }
            }
        }
        const double f = static_cast<double>(broken) / embedding.num_logical();
        out.per_record.push_back(f);
        weighted += f * static_cast<double>(r.count);
    }
    out.broken = physical.reads() ? weighted / static_cast<double>(physical.reads()) : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Text formats

void write_graph(std::ostream& out, const Graph& graph) {
    out << "# vertices " << graph.num_vertices() << '\n';
    for (auto [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    int declared = -1, max_id = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first[0] == '#') {
            std::string word;
            int n;
            if (ls >> word >> n && word == "vertices") declared = n;
            continue;
        }
        int u, v;
        std::istringstream fields(line);
        if (!(fields >> u >> v)) throw ValidationError("graph line " + std::to_string(lineno) + ": expected 'u v'");
        std::string extra;
        if (fields >> extra) throw ValidationError("graph line " + std::to_string(lineno) + ": trailing text");
        edges.emplace_back(u, v);
        max_id = std::max({max_id, u, v});
    }
    const int n = declared >= 0 ? declared : max_id + 1;
    return Graph(n, std::move(edges));
}

void write_embedding(std::ostream& out, const Embedding& embedding) {
    for (int v = 0; v < embedding.num_logical(); ++v) {
        out << v << ':';
        for (int q : embedding.chains[static_cast<std::size_t>(v)]) out << ' ' << q;
        out << '\n';
    }
}

Embedding read_embedding(std::istream& in) {
    Embedding e;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw ValidationError("embedding line lacks ':'");
        const int v = std::stoi(line.substr(0, colon));
        if (v != e.num_logical()) throw ValidationError("embedding variables must be listed in order");
        std::istringstream qs(line.substr(colon + 1));
        std::vector<int> chain;
        int q;
        while (qs >> q) chain.push_back(q);
        e.chains.push_back(std::move(chain));
    }
    return e;
}

}  // namespace annealslice
