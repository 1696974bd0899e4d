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

#include "annealslice/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "annealslice/common.hpp"
#include "annealslice/csv.hpp"

namespace annealslice {

namespace {

// Stream tags under the run seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kFitnessStream = 2;
constexpr std::uint64_t kBreedStream = 3;

void check_range(Interval r, const char* name) {
    if (!(r.lo < r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi))
        throw ValidationError(std::string(name) + " range must satisfy lo < hi");
}

}  // namespace

void GAConfig::validate() const {
    if (population < 2) throw ValidationError("population must be >= 2");
    if (!(p_cross > 0.0 && p_cross <= 1.0)) throw ValidationError("p_cross must lie in (0, 1]");
    if (!(p_mut >= 0.0 && p_mut <= 1.0)) throw ValidationError("p_mut must lie in [0, 1]");
    if (generations < 0) throw ValidationError("generations must be >= 0");
    check_range(linear_range, "linear");
    check_range(quad_range, "quadratic");
    if (reads == 0) throw ValidationError("reads must be positive");
    if (!(t_short >= 1.0)) throw ValidationError("t_short must be >= 1 us");
    if (!(t_short < t_long)) throw ValidationError("t_short must be below t_long");
    if (pool_size() < 2) throw ValidationError("crossover pool too small: ceil(p_cross * N) < 2");
}

int GAConfig::pool_size() const {
    const double raw = p_cross * population;
    return static_cast<int>(std::ceil(raw - 1e-9 * raw));
}

double fitness_from_samples(const SampleSet& short_anneal, const SampleSet& long_anneal) {
    return std::abs(best_fraction_mean(short_anneal) - best_fraction_mean(long_anneal));
}

double fitness(const ProblemModel& model, const SamplerConfig& sampler, const GAConfig& ga, const EnergyCurves& curves) {
    SamplerConfig c1 = sampler, c2 = sampler;
    c1.seed = derive_seed(sampler.seed, 0);
    c2.seed = derive_seed(sampler.seed, 1);
    SampleSet a = sample(model, standard(ga.t_short), curves, ga.reads, c1);
    SampleSet b = sample(model, standard(ga.t_long), curves, ga.reads, c2);
    return fitness_from_samples(a, b);
}

ProblemModel crossover(const ProblemModel& q1, const ProblemModel& q2, Rng& rng) {
    if (q1.domain() != q2.domain() || q1.num_variables() != q2.num_variables() ||
        q1.quadratic().size() != q2.quadratic().size())
        throw ValidationError("crossover parents have different coefficient keys");
    const bool same_topology = q1.topology() == q2.topology() ||
                               (q1.topology() && q2.topology() && *q1.topology() == *q2.topology());
    if (!same_topology) throw ValidationError("crossover parents have different topologies");
    std::vector<double> linear(static_cast<std::size_t>(q1.num_variables()));
    for (int i = 0; i < q1.num_variables(); ++i)
        linear[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? q2.linear(i) : q1.linear(i);
    std::vector<double> quad(q1.quadratic().size());
    for (std::size_t k = 0; k < quad.size(); ++k) {
        const Coupling& a = q1.quadratic()[k];
        const Coupling& b = q2.quadratic()[k];
        if (a.i != b.i || a.j != b.j) throw ValidationError("crossover parents have different coefficient keys");
        quad[k] = rng.bernoulli(0.5) ? b.value : a.value;
    }
    return q1.with_coefficients(std::move(linear), quad);
}

ProblemModel crossover(const ProblemModel& q1, const ProblemModel& q2, std::uint64_t seed) {
    Rng rng(seed);
    return crossover(q1, q2, rng);
}

ProblemModel mutate(const ProblemModel& q, double p_mut, Interval linear_range, Interval quad_range, Rng& rng) {
    if (!(p_mut >= 0.0 && p_mut <= 1.0)) throw ValidationError("p_mut must lie in [0, 1]");
    check_range(linear_range, "linear");
    check_range(quad_range, "quadratic");
    std::vector<double> linear(q.linear().begin(), q.linear().end());
    for (double& v : linear)
        if (rng.bernoulli(p_mut)) v = rng.uniform_open(linear_range.lo, linear_range.hi);
    std::vector<double> quad;
    quad.reserve(q.quadratic().size());
    for (const Coupling& c : q.quadratic())
        quad.push_back(rng.bernoulli(p_mut) ? rng.uniform_open(quad_range.lo, quad_range.hi) : c.value);
    return q.with_coefficients(std::move(linear), quad);
}

ProblemModel mutate(const ProblemModel& q, double p_mut, Interval linear_range, Interval quad_range, std::uint64_t seed) {
    Rng rng(seed);
    return mutate(q, p_mut, linear_range, quad_range, rng);
}

Graph random_clique_genome(int vertex_count, Rng& rng) {
    const double density = 0.2 + 0.6 * rng.uniform();
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(vertex_count) * static_cast<std::size_t>(vertex_count - 1) / 2);
    for (auto& b : bits) b = rng.bernoulli(density) ? 1 : 0;
    return Graph::from_pair_bits(vertex_count, bits);
}

Graph crossover_graphs(const Graph& g1, const Graph& g2, Rng& rng) {
    if (g1.num_vertices() != g2.num_vertices()) throw ValidationError("crossover graphs differ in vertex count");
    std::vector<std::uint8_t> a = g1.pair_bits();
    const std::vector<std::uint8_t> b = g2.pair_bits();
    for (std::size_t p = 0; p < a.size(); ++p)
        if (rng.bernoulli(0.5)) a[p] = b[p];
    return Graph::from_pair_bits(g1.num_vertices(), a);
}

Graph mutate_graph(const Graph& g, double p_mut, Rng& rng) {
    if (!(p_mut >= 0.0 && p_mut <= 1.0)) throw ValidationError("p_mut must lie in [0, 1]");
    std::vector<std::uint8_t> bits = g.pair_bits();
    for (auto& b : bits)
        if (rng.bernoulli(p_mut)) b ^= 1;
    return Graph::from_pair_bits(g.num_vertices(), bits);
}

namespace {

std::uint64_t graph_hash(const Graph& g) {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(g.num_vertices()));
    for (auto [u, v] : g.edges()) h = mix64(h ^ (static_cast<std::uint64_t>(u) << 32 | static_cast<std::uint32_t>(v)));
    return h;
}

template <typename Genome>
struct GaOps {
    std::function<Genome(Rng&)> init;
    std::function<std::uint64_t(const Genome&)> hash;
    std::function<double(const Genome&, std::uint64_t)> fitness;
    std::function<Genome(const Genome&, const Genome&, Rng&)> cross;
    std::function<Genome(const Genome&, Rng&)> mutate;
};

template <typename Genome>
struct GaOutcome {
    std::vector<Genome> population;
    std::vector<double> fitness;
    std::vector<GenerationStats> history;
};

// Fitness of every member. Equal genomes share one evaluation whose seed
// depends only on the run seed, the generation and the genome hash, so the
// result does not depend on population order or thread count.
template <typename Genome>
std::vector<double> evaluate(const std::vector<Genome>& pop, const GaOps<Genome>& ops, std::uint64_t seed, int gen,
                             unsigned threads) {
    const std::uint64_t gen_seed = derive_seed(derive_seed(seed, kFitnessStream), static_cast<std::uint64_t>(gen));
    std::vector<std::size_t> unique;
    std::vector<std::size_t> slot(pop.size());
    std::unordered_multimap<std::uint64_t, std::size_t> seen;
    std::vector<std::uint64_t> hashes(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        hashes[i] = ops.hash(pop[i]);
        auto [lo, hi] = seen.equal_range(hashes[i]);
        std::optional<std::size_t> match;
        for (auto it = lo; it != hi; ++it)
            if (pop[unique[it->second]] == pop[i]) match = it->second;
        if (!match) {
            match = unique.size();
            seen.emplace(hashes[i], *match);
            unique.push_back(i);
        }
        slot[i] = *match;
    }
    std::vector<double> values(unique.size());
    parallel_for(unique.size(), threads, [&](std::size_t u) {
        values[u] = ops.fitness(pop[unique[u]], derive_seed(gen_seed, hashes[unique[u]]));
    });
    std::vector<double> out(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) out[i] = values[slot[i]];
    return out;
}

GenerationStats stats(int gen, const std::vector<double>& f) {
    const double mx = *std::max_element(f.begin(), f.end());
    const double mean = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
    return {gen, mx, mean};
}

template <typename Genome>
GaOutcome<Genome> run_ga(const GAConfig& ga, std::uint64_t seed, const GaOps<Genome>& ops,
                         const GenerationObserver<Genome>& observer) {
    ga.validate();
    const auto n = static_cast<std::size_t>(ga.population);
    GaOutcome<Genome> out;
    Rng init_rng(derive_seed(seed, kInitStream));
    for (std::size_t i = 0; i < n; ++i) out.population.push_back(ops.init(init_rng));

    for (int gen = 0;; ++gen) {
        out.fitness = evaluate(out.population, ops, seed, gen, ga.threads);
        out.history.push_back(stats(gen, out.fitness));
        if (observer) observer(gen, out.population, out.fitness);
        if (gen == ga.generations) break;

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return out.fitness[a] > out.fitness[b]; });
        const double cutoff = out.fitness[order[static_cast<std::size_t>(ga.pool_size()) - 1]];
        std::vector<std::size_t> pool;
        for (std::size_t i : order)
            if (out.fitness[i] >= cutoff) pool.push_back(i);

        Rng rng(derive_seed(derive_seed(seed, kBreedStream), static_cast<std::uint64_t>(gen)));
        std::vector<Genome> next;
        next.reserve(n);
        for (std::size_t c = 0; c < n; ++c) {
            const Genome& p1 = out.population[pool[rng.below(pool.size())]];
            const Genome& p2 = out.population[pool[rng.below(pool.size())]];
            next.push_back(ops.mutate(ops.cross(p1, p2, rng), rng));
        }
        out.population = std::move(next);
    }
    return out;
}

std::size_t fittest(const std::vector<double>& f) {
    return static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
}

SamplerConfig inner_sampler(const SamplerConfig& sampler, const GAConfig& ga) {
    SamplerConfig c = sampler;
    if (resolve_threads(ga.threads) > 1) c.threads = 1;
    return c;
}

}  // namespace

EvolveResult evolve(std::shared_ptr<const ChimeraTopology> topology, const GAConfig& ga, const SamplerConfig& sampler,
                    std::uint64_t seed, const EnergyCurves& curves, const GenerationObserver<ProblemModel>& observer) {
    if (!topology) throw ValidationError("evolve needs a topology");
    sampler.validate();
    const SamplerConfig inner = inner_sampler(sampler, ga);
    GaOps<ProblemModel> ops;
    ops.init = [&](Rng& rng) { return random_instance(topology, ga.linear_range, ga.quad_range, rng.next()); };
    ops.hash = [](const ProblemModel& m) { return m.hash(); };
    ops.fitness = [&](const ProblemModel& m, std::uint64_t s) {
        SamplerConfig c = inner;
        c.seed = s;
        return fitness(m, c, ga, curves);
    };
    ops.cross = [](const ProblemModel& a, const ProblemModel& b, Rng& rng) { return crossover(a, b, rng); };
    ops.mutate = [&](const ProblemModel& m, Rng& rng) { return mutate(m, ga.p_mut, ga.linear_range, ga.quad_range, rng); };

    GaOutcome<ProblemModel> run = run_ga(ga, seed, ops, observer);
    const std::size_t best = fittest(run.fitness);
    return {run.population[best], run.fitness[best], std::move(run.history)};
}

MaxCliqueResult evolve_maxclique(int vertex_count, std::shared_ptr<const ChimeraTopology> topology, const GAConfig& ga,
                                 const SamplerConfig& sampler, std::uint64_t seed, double chain_strength,
                                 const EnergyCurves& curves, const GenerationObserver<Graph>& observer) {
    if (!topology) throw ValidationError("evolve_maxclique needs a topology");
    if (vertex_count < 2) throw ValidationError("vertex count must be >= 2");
    sampler.validate();
    const Embedding embedding = clique_embedding(vertex_count, *topology);
    const SamplerConfig inner = inner_sampler(sampler, ga);

    GaOps<Graph> ops;
    ops.init = [&](Rng& rng) { return random_clique_genome(vertex_count, rng); };
    ops.hash = graph_hash;
    ops.fitness = [&](const Graph& g, std::uint64_t s) {
        const ProblemModel logical = maxclique_qubo(g);
        const EmbeddedModel physical = embed(logical, embedding, topology, chain_strength);
        SamplerConfig c1 = inner, c2 = inner;
        c1.seed = derive_seed(s, 0);
        c2.seed = derive_seed(s, 1);
        SampleSet a = sample(physical.model, standard(ga.t_short), curves, ga.reads, c1);
        SampleSet b = sample(physical.model, standard(ga.t_long), curves, ga.reads, c2);
        return fitness_from_samples(unembed(a, embedding, logical), unembed(b, embedding, logical));
    };
    ops.cross = [](const Graph& a, const Graph& b, Rng& rng) { return crossover_graphs(a, b, rng); };
    ops.mutate = [&](const Graph& g, Rng& rng) { return mutate_graph(g, ga.p_mut, rng); };

    GaOutcome<Graph> run = run_ga(ga, seed, ops, observer);
    const std::size_t best = fittest(run.fitness);
    MaxCliqueResult out;
    out.best_graph = run.population[best];
    out.best_model = maxclique_qubo(out.best_graph);
    out.best_fitness = run.fitness[best];
    out.history = std::move(run.history);
    out.embedding = embedding;
    return out;
}

void write_history_csv(std::ostream& out, std::span<const GenerationStats> history) {
    out << "generation,max_fitness,mean_fitness\n";
    for (const GenerationStats& g : history)
        out << g.generation << ',' << csv::number(g.max_fitness) << ',' << csv::number(g.mean_fitness) << '\n';
}

}  // namespace annealslice
