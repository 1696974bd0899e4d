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

// Test-only generators and reference implementations. The oracles here work
// from plain dense arrays and never call the library code they check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "annealslice/clique.hpp"
#include "annealslice/model.hpp"

namespace annealslice::testing {

/// Dense coefficients: lin[i], quad[i][j] for i < j (quad[j][i] unused).
struct DenseModel {
    Domain domain = Domain::spin;
    int n = 0;
    std::vector<double> lin;
    std::vector<std::vector<double>> quad;

    ProblemModel build() const {
        std::vector<Coupling> c;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (quad[i][j] != 0.0) c.push_back({i, j, quad[i][j]});
        return ProblemModel(domain, n, lin, std::move(c));
    }
};

/// Random dense model; each pair gets a coupler with probability `density`.
inline DenseModel random_dense(std::mt19937_64& gen, Domain domain, int n, double density = 0.5) {
    std::uniform_real_distribution<double> lin(-2.0, 2.0), quad(-1.0, 1.0), coin(0.0, 1.0);
    DenseModel d;
    d.domain = domain;
    d.n = n;
    d.lin.resize(n);
    d.quad.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) d.lin[i] = lin(gen);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(gen) < density) d.quad[i][j] = quad(gen);
    return d;
}

inline Assignment random_assignment(std::mt19937_64& gen, Domain domain, int n) {
    Assignment a(n);
    for (auto& v : a) {
        const bool up = (gen() >> 63) != 0;
        v = up ? 1 : (domain == Domain::spin ? -1 : 0);
    }
    return a;
}

/// Sum of a_i q_i + a_ij q_i q_j by direct double loop, plus the sum of the
/// absolute term values (the scale used for relative tolerances).
struct OracleEnergy {
    double value;
    double scale;
};

inline OracleEnergy oracle_energy(const DenseModel& d, const Assignment& a) {
    double e = 0.0, s = 0.0;
    for (int i = 0; i < d.n; ++i) {
        const double t = d.lin[i] * a[i];
        e += t;
        s += std::abs(t);
        for (int j = i + 1; j < d.n; ++j) {
            const double u = d.quad[i][j] * a[i] * a[j];
            e += u;
            s += std::abs(u);
        }
    }
    return {e, s};
}

/// State with lexicographic rank k: variable 0 is the most significant bit.
inline Assignment state_of(Domain domain, int n, std::uint64_t k) {
    Assignment a(n);
    for (int v = 0; v < n; ++v) {
        const bool up = ((k >> (n - 1 - v)) & 1) != 0;
        a[v] = up ? 1 : (domain == Domain::spin ? -1 : 0);
    }
    return a;
}

/// Every maximum clique of `g`, as 0/1 membership vectors; enumeration over subsets.
inline std::vector<Assignment> oracle_maximum_cliques(const Graph& g) {
    const int n = g.num_vertices();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;
    int best = 0;
    std::vector<Assignment> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        bool clique = true;
        int size = 0;
        for (int u = 0; u < n && clique; ++u) {
            if (!((mask >> u) & 1)) continue;
            ++size;
            for (int v = u + 1; v < n; ++v)
                if (((mask >> v) & 1) && !adj[u][v]) {
                    clique = false;
                    break;
                }
        }
        if (!clique || size < best) continue;
        if (size > best) {
            best = size;
            out.clear();
        }
        Assignment a(n, 0);
        for (int u = 0; u < n; ++u) a[u] = (mask >> u) & 1 ? 1 : 0;
        out.push_back(a);
    }
    return out;
}

/// Random +-1 fields and couplers on the K(k,k) cell C(1,1,k): 2k spins with
/// integer energies, so every energy level is well populated.
inline ProblemModel pm_spin_glass(int shore, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto pm = [&] { return (gen() >> 63) ? 1.0 : -1.0; };
    ChimeraTopology t = chimera(1, 1, shore);
    std::vector<double> lin(static_cast<std::size_t>(t.num_nodes()));
    for (double& v : lin) v = pm();
    std::vector<Coupling> quad;
    for (auto [i, j] : t.edges()) quad.push_back({i, j, pm()});
    return ProblemModel(Domain::spin, t.num_nodes(), lin, quad);
}

/// Exact Boltzmann mean and variance of the energy from dense enumeration.
struct BoltzmannMoments {
    double mean;
    double variance;
};

inline BoltzmannMoments oracle_boltzmann_moments(const DenseModel& d, double beta) {
    const std::uint64_t states = std::uint64_t{1} << d.n;
    std::vector<double> e(states);
    double e_min = 1e300;
    for (std::uint64_t k = 0; k < states; ++k) {
        e[k] = oracle_energy(d, state_of(d.domain, d.n, k)).value;
        e_min = std::min(e_min, e[k]);
    }
    double z = 0.0, m1 = 0.0, m2 = 0.0;
    for (double v : e) {
        const double w = std::exp(-beta * (v - e_min));
        z += w;
        m1 += w * v;
        m2 += w * v * v;
    }
    m1 /= z;
    m2 /= z;
    return {m1, m2 - m1 * m1};
}

/// Upper tail of the chi-square distribution by the Wilson-Hilferty approximation.
inline double chi_square_p_value(double stat, int dof) {
    const double k = dof;
    const double z = (std::cbrt(stat / k) - (1.0 - 2.0 / (9.0 * k))) / std::sqrt(2.0 / (9.0 * k));
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace annealslice::testing
