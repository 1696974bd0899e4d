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

namespace annealslice {

enum class Domain { spin, binary };

std::string to_string(Domain d);

/// One readout or candidate solution: entries in {-1,+1} (spin) or {0,1} (binary).
using Assignment = std::vector<std::int8_t>;

/// Chimera graph C(m, n, k): an m x n grid of K_{k,k} cells. Shore 0 qubits
/// couple vertically to the same index in the cells above and below; shore 1
/// qubits couple horizontally.
///
/// Live nodes are numbered compactly 0..num_nodes()-1 in increasing hardware
/// id order; with no dead nodes the two numberings coincide. Models built on a
/// topology use the compact numbering.
class ChimeraTopology {
  public:
    ChimeraTopology(int rows, int cols, int shore, std::vector<int> dead = {});

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int shore() const { return shore_; }
    /// m * n * 2k, including dead ids.
    int hardware_size() const { return rows_ * cols_ * 2 * shore_; }
    int num_nodes() const { return static_cast<int>(live_.size()); }
    std::span<const int> dead() const { return dead_; }

    /// Edges as (i, j), i < j, in compact numbering, sorted.
    std::span<const std::pair<int, int>> edges() const { return edges_; }
    bool has_edge(int i, int j) const;

    /// Hardware id of (row, col, shore side u, index k) = ((row*cols + col)*2 + u)*shore + k.
    int hardware_id(int row, int col, int u, int k) const;
    /// Compact index of a hardware id, or nullopt if it is dead.
    std::optional<int> node_of(int hardware_id) const;
    int hardware_id_of(int node) const { return live_[static_cast<std::size_t>(node)]; }

    bool operator==(const ChimeraTopology& other) const;

  private:
    int rows_, cols_, shore_;
    std::vector<int> dead_;
    std::vector<int> live_;          // compact -> hardware
    std::vector<int> compact_;       // hardware -> compact or -1
    std::vector<std::pair<int, int>> edges_;
};

/// Builds C(rows, cols, shore) with the listed hardware ids removed.
ChimeraTopology chimera(int rows, int cols, int shore, std::vector<int> dead = {});

struct Coupling {
    int i;
    int j;
    double value;
    bool operator==(const Coupling&) const = default;
};

/// Q(q) = sum_i a_i q_i + sum_{i<j} a_ij q_i q_j over spin or binary variables.
///
/// Linear terms are dense (one per variable, zero allowed). Quadratic terms are
/// sparse, stored sorted by (i, j) with i < j; duplicate keys are rejected.
/// Instances are immutable once built.
class ProblemModel {
  public:
    ProblemModel() = default;
    ProblemModel(Domain domain, int n, std::vector<double> linear, std::vector<Coupling> quadratic,
                 std::shared_ptr<const ChimeraTopology> topology = nullptr);

    /// All-zero model.
    static ProblemModel zeros(Domain domain, int n);

    Domain domain() const { return domain_; }
    int num_variables() const { return n_; }
    std::span<const double> linear() const { return linear_; }
    std::span<const Coupling> quadratic() const { return quadratic_; }
    double linear(int i) const { return linear_[static_cast<std::size_t>(i)]; }
    /// Coefficient at (i, j) in either order; 0 if absent.
    double quadratic(int i, int j) const;
    const ChimeraTopology* topology() const { return topology_.get(); }
    const std::shared_ptr<const ChimeraTopology>& topology_ptr() const { return topology_; }

    /// Same keys and topology, new coefficient values (linear first, then quadratic in key order).
    ProblemModel with_coefficients(std::vector<double> linear, std::span<const double> quadratic_values) const;

    /// Canonical 64-bit hash of domain, size and every coefficient bit pattern.
    std::uint64_t hash() const;

    bool operator==(const ProblemModel& other) const;

  private:
    Domain domain_ = Domain::spin;
    int n_ = 0;
    std::vector<double> linear_;
    std::vector<Coupling> quadratic_;
    std::shared_ptr<const ChimeraTopology> topology_;
};

/// Throws ValidationError unless `a` has the model's length and domain.
void check_assignment(const ProblemModel& model, std::span<const std::int8_t> a);

double energy(const ProblemModel& model, std::span<const std::int8_t> a);

/// A converted model plus the constant c with energy(source, a) = energy(result, a') + c.
struct Converted {
    ProblemModel model;
    double offset = 0.0;
};

/// QUBO -> Ising via q = (sigma + 1) / 2.
Converted to_ising(const ProblemModel& qubo);
/// Ising -> QUBO via sigma = 2q - 1.
Converted to_qubo(const ProblemModel& ising);

Assignment spins_to_binary(std::span<const std::int8_t> spins);
Assignment binary_to_spins(std::span<const std::int8_t> bits);

/// Every coefficient multiplied by `factor`.
ProblemModel rescale(const ProblemModel& model, double factor);

struct Interval {
    double lo;
    double hi;
};

inline constexpr Interval kDefaultLinearRange{-2.0, 2.0};
inline constexpr Interval kDefaultQuadraticRange{-1.0, 1.0};

/// Spin model on `topology` with each live node's linear term uniform on the
/// open `linear_range` and each edge's coupler uniform on the open `quad_range`.
ProblemModel random_instance(std::shared_ptr<const ChimeraTopology> topology, Interval linear_range,
                             Interval quad_range, std::uint64_t seed);

struct GroundState {
    Assignment assignment;
    double energy;
};

inline constexpr int kBruteForceLimit = 24;

/// Exhaustive minimum. Ties go to the lexicographically smallest assignment,
/// with -1 < +1 and 0 < 1.
GroundState brute_force_ground(const ProblemModel& model);

/// Model restricted to `vars` (relabelled 0..vars.size()-1 in the given order);
/// terms touching other variables are dropped. The result has no topology.
ProblemModel induced_submodel(const ProblemModel& model, std::span<const int> vars);

// Text format: "<ising|qubo> <n>" then "i i value" (linear) or "i j value"
// (quadratic, i<j) lines; '#' starts a comment line. Values use 17 significant digits.
void write_model(std::ostream& out, const ProblemModel& model);
ProblemModel read_model(std::istream& in);
void save_model(const std::string& path, const ProblemModel& model);
ProblemModel load_model(const std::string& path);

}  // namespace annealslice
