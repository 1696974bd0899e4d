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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "annealslice/model.hpp"
#include "annealslice/sampler.hpp"

namespace annealslice {

/// Simple undirected graph on vertices 0..n-1.
class Graph {
  public:
    Graph() = default;
    /// Edges in either orientation; self loops and duplicates are rejected.
    Graph(int n, std::vector<std::pair<int, int>> edges);

    int num_vertices() const { return n_; }
    /// Sorted (u, v) pairs with u < v.
    std::span<const std::pair<int, int>> edges() const { return edges_; }
    bool has_edge(int u, int v) const;
    double density() const;

    /// Index of the unordered pair {u, v} in the row-major upper triangle.
    static std::size_t pair_index(int n, int u, int v);
    /// One flag per unordered pair, in pair_index order.
    std::vector<std::uint8_t> pair_bits() const;
    static Graph from_pair_bits(int n, std::span<const std::uint8_t> bits);

    bool operator==(const Graph& other) const { return n_ == other.n_ && edges_ == other.edges_; }

  private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::uint8_t> adjacent_;
};

/// Erdos-Renyi G(n, p). Without a density one is drawn uniformly from [0.2, 0.8].
Graph random_graph(int n, std::optional<double> density, std::uint64_t seed);

inline constexpr double kMaxCliquePenalty = 2.0;

/// -sum_v x_v + penalty * sum over non-adjacent pairs x_u x_v.
ProblemModel maxclique_qubo(const Graph& graph, double penalty = kMaxCliquePenalty);

/// Logical variable -> physical qubits (compact topology indices).
struct Embedding {
    std::vector<std::vector<int>> chains;

    int num_logical() const { return static_cast<int>(chains.size()); }
    bool operator==(const Embedding&) const = default;
};

/// Throws ValidationError unless the chains are non-empty, disjoint, live and
/// connected in `topology`.
void check_embedding(const Embedding& embedding, const ChimeraTopology& topology);

/// Clique embedding into C(m, m, 4). Variable 4b + k is the index-k
/// horizontal qubits of row b over columns 0..b joined, in cell (b, b), to the
/// index-k vertical qubits of column b over rows b..m-1. Chains have m + 1
/// qubits and every pair meets in some cell.
Embedding clique_embedding(int n_logical, const ChimeraTopology& topology);

inline constexpr double kDefaultChainStrength = 2.0;

/// Embedded spin model and the constant with
/// energy(logical, a) = energy(physical, expanded a) + offset for unbroken chains.
struct EmbeddedModel {
    ProblemModel model;
    double offset = 0.0;
};

/// Binary models are converted to Ising first. Linear terms are split evenly
/// over the chain, each coupler goes on the lexicographically smallest physical
/// edge between the two chains, and every edge inside a chain gets -chain_strength.
EmbeddedModel embed(const ProblemModel& logical, const Embedding& embedding,
                    std::shared_ptr<const ChimeraTopology> topology, double chain_strength = kDefaultChainStrength);

/// Physical spins for a logical assignment (unbroken chains).
Assignment expand(std::span<const std::int8_t> logical, const Embedding& embedding, int num_physical, Domain logical_domain);

/// Majority vote per chain. Exact ties take the value with lower logical
/// energy given the rest of the read, then the low value (-1 or 0).
Assignment unembed_read(std::span<const std::int8_t> physical, const Embedding& embedding, const ProblemModel& logical);

/// Logical sample set; energies are those of `logical`.
SampleSet unembed(const SampleSet& physical, const Embedding& embedding, const ProblemModel& logical);

struct ChainBreaks {
    /// Broken fraction for each record of the sample set.
    std::vector<double> per_record;
    /// Read-weighted mean broken fraction.
    double broken = 0.0;
    double unbroken() const { return 1.0 - broken; }
};

ChainBreaks chain_break_fraction(const SampleSet& physical, const Embedding& embedding);

// Graph file: "u v" per line, '#' comments; "# vertices N" fixes the vertex
// count (otherwise max id + 1).
void write_graph(std::ostream& out, const Graph& graph);
Graph read_graph(std::istream& in);
// Embedding file: "L: q1 q2 ..." per logical variable.
void write_embedding(std::ostream& out, const Embedding& embedding);
Embedding read_embedding(std::istream& in);

}  // namespace annealslice
