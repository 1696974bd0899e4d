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
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "annealslice/clique.hpp"
#include "annealslice/model.hpp"
#include "annealslice/sampler.hpp"
#include "annealslice/schedule.hpp"

namespace annealslice {

inline constexpr double kMaxCliqueMutation = 0.01;

struct GAConfig {
    int population = 100;
    double p_cross = 0.1;
    double p_mut = 0.001;
    int generations = 200;
    Interval linear_range = kDefaultLinearRange;
    Interval quad_range = kDefaultQuadraticRange;
    std::uint64_t reads = 1000;
    double t_short = 1.0;
    double t_long = 1000.0;
    /// Parallel fitness evaluations; 0 = hardware concurrency.
    unsigned threads = 1;

    void validate() const;
    /// ceil(p_cross * population).
    int pool_size() const;
};

/// |a - b| of the best-1% means.
double fitness_from_samples(const SampleSet& short_anneal, const SampleSet& long_anneal);

/// Samples standard(t_short) and standard(t_long) with `reads` reads each and
/// returns fitness_from_samples. The two runs use seeds derived from sampler.seed.
double fitness(const ProblemModel& model, const SamplerConfig& sampler, const GAConfig& ga,
               const EnergyCurves& curves = default_curves());

/// Child taking each coefficient from q1 or q2 with probability 1/2.
ProblemModel crossover(const ProblemModel& q1, const ProblemModel& q2, Rng& rng);
ProblemModel crossover(const ProblemModel& q1, const ProblemModel& q2, std::uint64_t seed);

/// Each coefficient redrawn from its open range with probability p_mut.
ProblemModel mutate(const ProblemModel& q, double p_mut, Interval linear_range, Interval quad_range, Rng& rng);
ProblemModel mutate(const ProblemModel& q, double p_mut, Interval linear_range, Interval quad_range, std::uint64_t seed);

struct GenerationStats {
    int generation;
    double max_fitness;
    double mean_fitness;
};

/// Called once per evaluated generation (0..R) with the population and fitness.
template <typename Genome>
using GenerationObserver = std::function<void(int, std::span<const Genome>, std::span<const double>)>;

struct EvolveResult {
    ProblemModel best;
    double best_fitness = 0.0;
    /// R + 1 entries; entry 0 is the initial population.
    std::vector<GenerationStats> history;
};

/// Genetic search for instances whose best-1% energy differs most between a
/// short and a long anneal. No elitism: each generation is replaced by N
/// mutated crossovers of parents drawn uniformly, with replacement, from the
/// top ceil(p_cross N) members (ties at the cut included).
EvolveResult evolve(std::shared_ptr<const ChimeraTopology> topology, const GAConfig& ga, const SamplerConfig& sampler,
                    std::uint64_t seed, const EnergyCurves& curves = default_curves(),
                    const GenerationObserver<ProblemModel>& observer = {});

struct MaxCliqueResult {
    Graph best_graph;
    /// Logical Maximum Clique QUBO of best_graph.
    ProblemModel best_model;
    double best_fitness = 0.0;
    std::vector<GenerationStats> history;
    Embedding embedding;
};

/// Same search over graphs: genomes are the vertex-pair edge flags, crossover
/// picks each pair from either parent, mutation toggles each pair with p_mut.
/// Fitness uses the logical energies of majority-vote unembedded reads of the
/// embedded Maximum Clique QUBO.
MaxCliqueResult evolve_maxclique(int vertex_count, std::shared_ptr<const ChimeraTopology> topology, const GAConfig& ga,
                                 const SamplerConfig& sampler, std::uint64_t seed,
                                 double chain_strength = kDefaultChainStrength,
                                 const EnergyCurves& curves = default_curves(),
                                 const GenerationObserver<Graph>& observer = {});

/// Random initial graph: density uniform on [0.2, 0.8], then G(n, density).
Graph random_clique_genome(int vertex_count, Rng& rng);
Graph crossover_graphs(const Graph& g1, const Graph& g2, Rng& rng);
Graph mutate_graph(const Graph& g, double p_mut, Rng& rng);

// "generation,max_fitness,mean_fitness"
void write_history_csv(std::ostream& out, std::span<const GenerationStats> history);

}  // namespace annealslice
