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

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "annealslice/clique.hpp"
#include "support.hpp"

using namespace annealslice;
using namespace annealslice::testing;

namespace {

std::shared_ptr<const ChimeraTopology> grid(int m, std::vector<int> dead = {}) {
    return std::make_shared<const ChimeraTopology>(chimera(m, m, 4, std::move(dead)));
}

/// Connectivity of a chain by flood fill over topology edges.
bool connected(const std::vector<int>& chain, const ChimeraTopology& t) {
    std::set<int> seen{chain.front()};
    std::vector<int> stack{chain.front()};
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (int r : chain)
            if (!seen.count(r) && t.has_edge(std::min(q, r), std::max(q, r))) seen.insert(r), stack.push_back(r);
    }
    return seen.size() == chain.size();
}

/// Brute-force ground of the embedded model restricted to chain qubits, as a full physical assignment.
Assignment embedded_ground(const EmbeddedModel& em, const Embedding& emb) {
    std::vector<int> used;
    for (const auto& c : emb.chains) used.insert(used.end(), c.begin(), c.end());
    std::sort(used.begin(), used.end());
    GroundState g = brute_force_ground(induced_submodel(em.model, used));
    Assignment full(static_cast<std::size_t>(em.model.num_variables()), -1);
    for (std::size_t i = 0; i < used.size(); ++i) full[static_cast<std::size_t>(used[i])] = g.assignment[i];
    return full;
}

}  // namespace

TEST_CASE("max clique QUBO on small graphs") {
    ProblemModel k3 = maxclique_qubo(Graph(3, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK(k3.domain() == Domain::binary);
    CHECK(energy(k3, Assignment{1, 1, 1}) == -3.0);
    CHECK(brute_force_ground(k3).energy == -3.0);

    ProblemModel path = maxclique_qubo(Graph(3, {{0, 1}, {1, 2}}));
    CHECK(energy(path, Assignment{1, 0, 1}) == 0.0);
    GroundState pg = brute_force_ground(path);
    CHECK(pg.energy == -2.0);
    CHECK(pg.assignment == Assignment{0, 1, 1});

    GroundState eg = brute_force_ground(maxclique_qubo(Graph(3, {})));
    CHECK(eg.energy == -1.0);
    CHECK(std::count(eg.assignment.begin(), eg.assignment.end(), 1) == 1);
}

TEST_CASE("max clique QUBO minima are exactly the maximum cliques") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int n = 3 + static_cast<int>(seed % 8);
        Graph g = random_graph(n, std::nullopt, seed);
        ProblemModel q = maxclique_qubo(g);
        std::vector<Assignment> cliques = oracle_maximum_cliques(g);
        const double best = -static_cast<double>(std::count(cliques[0].begin(), cliques[0].end(), 1));
        std::vector<Assignment> minima;
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
            Assignment a = state_of(Domain::binary, n, k);
            const double e = energy(q, a);
            CHECK(e >= best);
            if (e == best) minima.push_back(a);
        }
        std::sort(minima.begin(), minima.end());
        std::sort(cliques.begin(), cliques.end());
        CHECK(minima == cliques);
    }
}

TEST_CASE("random graph density and determinism") {
    CHECK(random_graph(20, 0.5, 3) == random_graph(20, 0.5, 3));
    CHECK(random_graph(20, 0.0, 3).edges().empty());
    CHECK(random_graph(20, 1.0, 3).edges().size() == 190);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Graph g = random_graph(64, std::nullopt, seed);
        CHECK(g.density() > 0.1);
        CHECK(g.density() < 0.9);
    }
    CHECK_THROWS_AS(random_graph(5, 1.5, 0), ValidationError);
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), ValidationError);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), ValidationError);
}

TEST_CASE("graph pair bits round trip") {
    Graph g = random_graph(9, 0.4, 2);
    CHECK(Graph::from_pair_bits(9, g.pair_bits()) == g);
    CHECK(Graph::pair_index(4, 0, 1) == 0);
    CHECK(Graph::pair_index(4, 2, 3) == 5);
    CHECK(Graph::pair_index(4, 3, 2) == 5);
}

TEST_CASE("clique embedding on a single cell") {
    auto t = grid(1);
    Embedding e = clique_embedding(4, *t);
    REQUIRE(e.chains.size() == 4);
    for (const auto& c : e.chains) CHECK(c.size() == 2);
    CHECK_THROWS_AS(clique_embedding(5, *t), ValidationError);
}

TEST_CASE("clique embeddings are valid for every size up to C(8,8,4)") {
    for (int m = 1; m <= 8; ++m) {
        auto t = grid(m);
        Embedding e = clique_embedding(4 * m, *t);
        CHECK_NOTHROW(check_embedding(e, *t));
        std::set<int> all;
        for (const auto& c : e.chains) {
            CHECK(static_cast<int>(c.size()) == m + 1);
            CHECK(connected(c, *t));
            for (int q : c) CHECK(all.insert(q).second);
        }
        for (int u = 0; u < 4 * m; ++u)
            for (int v = u + 1; v < 4 * m; ++v) {
                bool linked = false;
                for (int p : e.chains[u])
                    for (int q : e.chains[v]) linked = linked || t->has_edge(std::min(p, q), std::max(p, q));
                CHECK(linked);
            }
    }
}

TEST_CASE("clique embedding reports dead qubits") {
    auto t = grid(2, {0});
    CHECK_THROWS_AS(clique_embedding(8, *t), RuntimeError);
    CHECK_THROWS_AS(check_embedding(Embedding{{{0}, {0}}}, *grid(1)), ValidationError);
    CHECK_THROWS_AS(check_embedding(Embedding{{{0, 1}}}, *grid(1)), ValidationError);
}

TEST_CASE("length-one chains leave the model unchanged") {
    auto t = grid(1);
    ProblemModel logical(Domain::spin, 2, {0.5, -0.25}, {{0, 1, 0.75}});
    Embedding e{{{0}, {4}}};
    EmbeddedModel em = embed(logical, e, t);
    CHECK(em.offset == 0.0);
    CHECK(em.model.linear(0) == 0.5);
    CHECK(em.model.linear(4) == -0.25);
    CHECK(em.model.quadratic(0, 4) == 0.75);
    CHECK(em.model.quadratic().size() == 1);
}

TEST_CASE("embedding preserves energies of unbroken chains") {
    auto t = grid(2);
    std::mt19937_64 gen(14);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 7;
        Domain d = trial % 2 ? Domain::binary : Domain::spin;
        DenseModel dm = random_dense(gen, d, n, 0.7);
        ProblemModel logical = dm.build();
        Embedding e = clique_embedding(n, *t);
        EmbeddedModel em = embed(logical, e, t, kDefaultChainStrength);
        for (int r = 0; r < 10; ++r) {
            Assignment a = random_assignment(gen, d, n);
            Assignment phys = expand(a, e, t->num_nodes(), d);
            CHECK(energy(em.model, phys) + em.offset == Catch::Approx(oracle_energy(dm, a).value).margin(1e-9));
            CHECK(unembed_read(phys, e, logical) == a);
        }
    }
}

TEST_CASE("embedded ground state unembeds to the logical ground state") {
    auto t = grid(2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 3 + static_cast<int>(seed % 4);
        ProblemModel logical = maxclique_qubo(random_graph(n, std::nullopt, seed));
        Embedding e = clique_embedding(n, *t);
        EmbeddedModel em = embed(logical, e, t, 8.0);
        Assignment phys = embedded_ground(em, e);
        CHECK(energy(logical, unembed_read(phys, e, logical)) == brute_force_ground(logical).energy);
    }
}

TEST_CASE("unembedding votes and tie breaking") {
    auto t = grid(1);
    Embedding e{{{0, 4, 5}, {1, 6}}};
    ProblemModel logical(Domain::spin, 2, {0.0, 0.0}, {{0, 1, -1.0}});
    Assignment phys(8, -1);
    phys[0] = phys[4] = 1;  // chain 0: (+, +, -)
    phys[1] = 1;            // chain 1: (+, -) tie
    Assignment out = unembed_read(phys, e, logical);
    CHECK(out[0] == 1);
    // Ferromagnetic coupling favours following variable 0.
    CHECK(out[1] == 1);
    ProblemModel anti(Domain::spin, 2, {0.0, 0.0}, {{0, 1, 1.0}});
    CHECK(unembed_read(phys, e, anti)[1] == -1);
    ProblemModel free(Domain::spin, 2, {0.0, 0.0}, {});
    CHECK(unembed_read(phys, e, free)[1] == -1);
}

TEST_CASE("chain break accounting") {
    Embedding e{{{0, 4}, {1, 5}, {2, 6}, {3, 7}}};
    Assignment good(8, 1), bad(8, 1);
    bad[4] = -1;
    std::vector<SampleRecord> uniform{{good, 0.0, 3}};
    CHECK(chain_break_fraction(SampleSet(Domain::spin, 8, uniform, 0), e).broken == 0.0);
    Assignment bad2(8, -1);
    bad2[0] = 1;
    std::vector<SampleRecord> broken{{bad, 0.0, 5}, {bad2, 1.0, 2}};
    ChainBreaks b = chain_break_fraction(SampleSet(Domain::spin, 8, broken, 0), e);
    CHECK(b.broken == 0.25);
    CHECK(b.unbroken() == 0.75);
    for (double f : b.per_record) CHECK(f == 0.25);
}

TEST_CASE("chain breaks stay in the unit interval and fall with chain strength") {
    auto t = grid(1);
    Embedding e = clique_embedding(4, *t);
    ProblemModel logical = maxclique_qubo(Graph(4, {{0, 1}, {1, 2}, {2, 3}}));
    std::vector<double> weak, strong;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SamplerConfig c;
        c.seed = seed;
        for (double cs : {0.1, 8.0}) {
            EmbeddedModel em = embed(logical, e, t, cs);
            SampleSet s = sample(em.model, standard(100), default_curves(), 200, c);
            ChainBreaks b = chain_break_fraction(s, e);
            CHECK(b.broken >= 0.0);
            CHECK(b.broken <= 1.0);
            for (double f : b.per_record) CHECK((f >= 0.0 && f <= 1.0));
            (cs < 1.0 ? weak : strong).push_back(b.broken);
        }
    }
    std::sort(weak.begin(), weak.end());
    std::sort(strong.begin(), strong.end());
    CHECK(strong[2] < weak[2]);
}

TEST_CASE("graph and embedding text round trip") {
    Graph g = random_graph(12, 0.3, 5);
    std::stringstream gs;
    write_graph(gs, g);
    CHECK(read_graph(gs) == g);
    Embedding e = clique_embedding(8, *grid(2));
    std::stringstream es;
    write_embedding(es, e);
    CHECK(read_embedding(es) == e);
    std::stringstream bad("0: 1 2\n2: 3\n");
    CHECK_THROWS_AS(read_embedding(bad), ValidationError);
}
