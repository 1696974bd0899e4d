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
#include <span>
#include <string>
#include <vector>

#include "annealslice/common.hpp"
#include "annealslice/model.hpp"
#include "annealslice/schedule.hpp"

namespace annealslice {

/// Boltzmann constant in GHz per kelvin.
inline constexpr double kBoltzmannGHzPerK = 20.83661;
/// Default physical temperature, kelvin.
inline constexpr double kDefaultTemperatureK = 0.015;

enum class Backend { svmc, thermal, boltzmann_exact };

std::string to_string(Backend b);
Backend parse_backend(const std::string& name);

struct SamplerConfig {
    Backend backend = Backend::svmc;
    int sweeps_per_us = 10;
    double temperature_k = kDefaultTemperatureK;
    std::uint64_t seed = 0;
    /// Inverse temperature used by the boltzmann_exact backend (schedule ignored).
    double beta = 1.0;
    /// Worker threads for independent reads; 0 = hardware concurrency.
    unsigned threads = 1;

    void validate() const;
    double kt_ghz() const { return kBoltzmannGHzPerK * temperature_k; }
};

struct SampleRecord {
    Assignment bits;
    double energy;
    std::uint64_t count;
};

/// Multiset of readouts. Records hold distinct bitstrings sorted by energy,
/// then lexicographically; energies are those of the generating model.
class SampleSet {
  public:
    SampleSet() = default;
    SampleSet(Domain domain, int num_variables, std::vector<SampleRecord> records, std::uint64_t seed);

    /// Aggregates raw reads and evaluates each distinct one on `model`.
    static SampleSet from_reads(const ProblemModel& model, std::vector<Assignment> reads, std::uint64_t seed);

    Domain domain() const { return domain_; }
    int num_variables() const { return n_; }
    std::span<const SampleRecord> records() const { return records_; }
    std::uint64_t reads() const { return reads_; }
    std::uint64_t seed() const { return seed_; }
    bool empty() const { return reads_ == 0; }

    double mean_energy() const;
    /// Energies of every read, ascending, with multiplicity.
    std::vector<double> energies() const;

    bool operator==(const SampleSet& other) const;

  private:
    Domain domain_ = Domain::spin;
    int n_ = 0;
    std::vector<SampleRecord> records_;
    std::uint64_t reads_ = 0;
    std::uint64_t seed_ = 0;
};

/// Runs `reads` trajectories of `schedule` using cfg.backend.
SampleSet sample(const ProblemModel& model, const AnnealSchedule& schedule, const EnergyCurves& curves,
                 std::uint64_t reads, const SamplerConfig& cfg);

/// Spin-vector Monte Carlo: one angle per qubit, Metropolis on
/// E(theta; s) = -A(s)/2 sum sin(theta_i) + B(s)/2 (sum h_i cos(theta_i) + sum J_ij cos(theta_i) cos(theta_j)).
SampleSet svmc_sample(const ProblemModel& model, const AnnealSchedule& schedule, const EnergyCurves& curves,
                      std::uint64_t reads, const SamplerConfig& cfg);

/// Single-spin-flip simulated annealing with beta(t) = B(s(t)) / (2 k_B T).
SampleSet thermal_sample(const ProblemModel& model, const AnnealSchedule& schedule, const EnergyCurves& curves,
                         std::uint64_t reads, const SamplerConfig& cfg);

inline constexpr int kExactSamplerLimit = 20;

/// i.i.d. draws from P(state) ~ exp(-beta * energy), by enumeration.
SampleSet boltzmann_exact_sample(const ProblemModel& model, double beta, std::uint64_t reads, std::uint64_t seed);

/// Exact Boltzmann probabilities of every state, index = lexicographic rank
/// (variable 0 most significant, low value first).
std::vector<double> boltzmann_probabilities(const ProblemModel& model, double beta);
Assignment state_from_index(const ProblemModel& model, std::uint64_t index);

/// Number of lowest reads averaged for `fraction`: ceil(fraction * reads).
std::uint64_t best_fraction_count(std::uint64_t reads, double fraction);

/// Mean of the ceil(fraction * reads) lowest-energy reads, counting multiplicity.
double best_fraction_mean(const SampleSet& samples, double fraction = 0.01);

/// Bitstrings of those reads, in record order, with multiplicity.
std::vector<Assignment> best_fraction_set(const SampleSet& samples, double fraction = 0.01);

/// Spin model in adjacency (CSR) form, shared read-only by sampler threads.
struct SpinGraph {
    explicit SpinGraph(const ProblemModel& spin_model);

    std::size_t size() const { return h.size(); }
    /// h_i + sum_j J_ij x_j for arbitrary real x (cos(theta) or spins).
    template <typename T>
    double field(std::size_t i, const std::vector<T>& x) const {
        double f = h[i];
        for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) f += weights[e] * x[neighbors[e]];
        return f;
    }

    std::vector<double> h;
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> neighbors;
    std::vector<double> weights;
};

/// Angle-per-spin state driven one sweep at a time. Exposed for tests that
/// probe the dynamics at a fixed anneal fraction.
class SvmcEngine {
  public:
    SvmcEngine(std::shared_ptr<const SpinGraph> graph, double kt_ghz, std::uint64_t seed);
    /// `model` must be in the spin domain.
    SvmcEngine(const ProblemModel& model, double kt_ghz, std::uint64_t seed);

    /// Resets every angle to pi/2 (the transverse-field ground state).
    void reset();
    /// One Metropolis update per spin, in index order, at energy scales (A, B) GHz.
    /// Proposals are fresh uniform angles in [0, pi].
    void sweep(double a_ghz, double b_ghz);
    /// sign(cos theta_i), with 0 mapped to +1.
    Assignment readout() const;
    double effective_energy(double a_ghz, double b_ghz) const;

    std::span<const double> angles() const { return theta_; }
    void set_angles(std::span<const double> theta);

  private:
    std::shared_ptr<const SpinGraph> graph_;
    double kt_;
    Rng rng_;
    std::vector<double> theta_, cos_, sin_;
};

// CSV "energy,count,bitstring"; bitstring is 0/1 per variable (spin -1 -> 0).
void write_sampleset_csv(std::ostream& out, const SampleSet& samples);
/// Recomputes nothing; energies are taken from the file.
SampleSet read_sampleset_csv(std::istream& in, Domain domain);

}  // namespace annealslice
