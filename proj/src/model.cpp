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

#include "annealslice/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "annealslice/common.hpp"

namespace annealslice {

std::string to_string(Domain d) { return d == Domain::spin ? "ising" : "qubo"; }

// ---------------------------------------------------------------------------
// ChimeraTopology

ChimeraTopology::ChimeraTopology(int rows, int cols, int shore, std::vector<int> dead)
    : rows_(rows), cols_(cols), shore_(shore), dead_(std::move(dead)) {
    if (rows < 1 || cols < 1 || shore < 1) throw ValidationError("chimera dimensions must be >= 1");
    const int size = hardware_size();
    std::sort(dead_.begin(), dead_.end());
    dead_.erase(std::unique(dead_.begin(), dead_.end()), dead_.end());
    for (int d : dead_) {
        if (d < 0 || d >= size) throw ValidationError("dead node id " + std::to_string(d) + " out of range");
    }
    compact_.assign(static_cast<std::size_t>(size), -1);
    auto dead_it = dead_.begin();
    for (int id = 0; id < size; ++id) {
        if (dead_it != dead_.end() && *dead_it == id) {
            ++dead_it;
            continue;
        }
        compact_[static_cast<std::size_t>(id)] = static_cast<int>(live_.size());
        live_.push_back(id);
    }

    auto add = [&](int a, int b) {
        int ca = compact_[static_cast<std::size_t>(a)];
        int cb = compact_[static_cast<std::size_t>(b)];
        if (ca < 0 || cb < 0) return;
        edges_.emplace_back(std::min(ca, cb), std::max(ca, cb));
    };
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            for (int k = 0; k < shore_; ++k) {
                for (int l = 0; l < shore_; ++l) add(hardware_id(r, c, 0, k), hardware_id(r, c, 1, l));
                if (r + 1 < rows_) add(hardware_id(r, c, 0, k), hardware_id(r + 1, c, 0, k));
                if (c + 1 < cols_) add(hardware_id(r, c, 1, k), hardware_id(r, c + 1, 1, k));
            }
        }
    }
    std::sort(edges_.begin(), edges_.end());
}

int ChimeraTopology::hardware_id(int row, int col, int u, int k) const {
    return ((row * cols_ + col) * 2 + u) * shore_ + k;
}

std::optional<int> ChimeraTopology::node_of(int id) const {
    if (id < 0 || id >= hardware_size()) return std::nullopt;
    int c = compact_[static_cast<std::size_t>(id)];
    if (c < 0) return std::nullopt;
    return c;
}

bool ChimeraTopology::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(i, j));
}

bool ChimeraTopology::operator==(const ChimeraTopology& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && shore_ == other.shore_ && dead_ == other.dead_;
}

ChimeraTopology chimera(int rows, int cols, int shore, std::vector<int> dead) {
    return ChimeraTopology(rows, cols, shore, std::move(dead));
}

// ---------------------------------------------------------------------------
// ProblemModel

ProblemModel::ProblemModel(Domain domain, int n, std::vector<double> linear, std::vector<Coupling> quadratic,
                           std::shared_ptr<const ChimeraTopology> topology)
    : domain_(domain), n_(n), linear_(std::move(linear)), quadratic_(std::move(quadratic)),
      topology_(std::move(topology)) {
    if (n < 0) throw ValidationError("variable count must be non-negative");
    if (linear_.empty()) linear_.assign(static_cast<std::size_t>(n), 0.0);
    if (static_cast<int>(linear_.size()) != n) throw ValidationError("linear term count differs from n");
    for (double v : linear_) {
        if (!std::isfinite(v)) throw ValidationError("non-finite linear coefficient");
    }
    std::sort(quadratic_.begin(), quadratic_.end(),
              [](const Coupling& a, const Coupling& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
    for (std::size_t q = 0; q < quadratic_.size(); ++q) {
        const Coupling& c = quadratic_[q];
        if (!(c.i < c.j)) throw ValidationError("quadratic key must satisfy i < j");
        if (c.i < 0 || c.j >= n) throw ValidationError("quadratic key out of range");
        if (!std::isfinite(c.value)) throw ValidationError("non-finite quadratic coefficient");
        if (q > 0 && quadratic_[q - 1].i == c.i && quadratic_[q - 1].j == c.j)
            throw ValidationError("duplicate quadratic key (" + std::to_string(c.i) + "," + std::to_string(c.j) + ")");
    }
    if (topology_) {
        if (topology_->num_nodes() != n) throw ValidationError("model size differs from topology node count");
        for (const Coupling& c : quadratic_) {
            if (!topology_->has_edge(c.i, c.j)) throw ValidationError("quadratic key is not a topology edge");
        }
    }
}

ProblemModel ProblemModel::zeros(Domain domain, int n) { return ProblemModel(domain, n, {}, {}); }

double ProblemModel::quadratic(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = std::lower_bound(quadratic_.begin(), quadratic_.end(), std::make_pair(i, j),
                               [](const Coupling& c, const std::pair<int, int>& key) {
                                   return std::tie(c.i, c.j) < std::tie(key.first, key.second);
                               });
    if (it != quadratic_.end() && it->i == i && it->j == j) return it->value;
    return 0.0;
}

ProblemModel ProblemModel::with_coefficients(std::vector<double> linear, std::span<const double> quadratic_values) const {
    if (quadratic_values.size() != quadratic_.size()) throw ValidationError("quadratic value count mismatch");
    std::vector<Coupling> quad = quadratic_;
    for (std::size_t q = 0; q < quad.size(); ++q) quad[q].value = quadratic_values[q];
    return ProblemModel(domain_, n_, std::move(linear), std::move(quad), topology_);
}

std::uint64_t ProblemModel::hash() const {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(n_) * 2 + (domain_ == Domain::binary ? 1 : 0));
    auto feed = [&h](std::uint64_t v) { h = mix64(h ^ v); };
    for (double v : linear_) feed(std::bit_cast<std::uint64_t>(v));
    for (const Coupling& c : quadratic_) {
        feed((static_cast<std::uint64_t>(c.i) << 32) | static_cast<std::uint32_t>(c.j));
        feed(std::bit_cast<std::uint64_t>(c.value));
    }
    return h;
}

bool ProblemModel::operator==(const ProblemModel& other) const {
    bool same_topology = (topology_ == nullptr) == (other.topology_ == nullptr);
    if (same_topology && topology_) same_topology = *topology_ == *other.topology_;
    return domain_ == other.domain_ && n_ == other.n_ && linear_ == other.linear_ &&
           quadratic_ == other.quadratic_ && same_topology;
}

// ---------------------------------------------------------------------------
// Energy and conversions

void check_assignment(const ProblemModel& model, std::span<const std::int8_t> a) {
    if (static_cast<int>(a.size()) != model.num_variables())
        throw ValidationError("assignment length " + std::to_string(a.size()) + " differs from model size " +
                              std::to_string(model.num_variables()));
    const bool spin = model.domain() == Domain::spin;
    for (std::int8_t v : a) {
        bool ok = spin ? (v == -1 || v == 1) : (v == 0 || v == 1);
        if (!ok) throw ValidationError("assignment value outside the model's domain");
    }
}

double energy(const ProblemModel& model, std::span<const std::int8_t> a) {
    check_assignment(model, a);
    double e = 0.0;
    auto lin = model.linear();
    for (std::size_t i = 0; i < lin.size(); ++i) e += lin[i] * a[i];
    for (const Coupling& c : model.quadratic()) e += c.value * a[static_cast<std::size_t>(c.i)] * a[static_cast<std::size_t>(c.j)];
    return e;
}

Converted to_ising(const ProblemModel& qubo) {
    if (qubo.domain() != Domain::binary) throw ValidationError("to_ising expects a binary (QUBO) model");
    std::vector<double> h(qubo.linear().begin(), qubo.linear().end());
    double offset = 0.0;
    for (double& v : h) {
        offset += v / 2.0;
        v /= 2.0;
    }
    std::vector<Coupling> j;
    j.reserve(qubo.quadratic().size());
    for (const Coupling& c : qubo.quadratic()) {
        const double quarter = c.value / 4.0;
        h[static_cast<std::size_t>(c.i)] += quarter;
        h[static_cast<std::size_t>(c.j)] += quarter;
        offset += quarter;
        j.push_back({c.i, c.j, quarter});
    }
    return {ProblemModel(Domain::spin, qubo.num_variables(), std::move(h), std::move(j), qubo.topology_ptr()), offset};
}

Converted to_qubo(const ProblemModel& ising) {
    if (ising.domain() != Domain::spin) throw ValidationError("to_qubo expects a spin (Ising) model");
    std::vector<double> a(ising.linear().begin(), ising.linear().end());
    double offset = 0.0;
    for (double& v : a) {
        offset -= v;
        v *= 2.0;
    }
    std::vector<Coupling> q;
    q.reserve(ising.quadratic().size());
    for (const Coupling& c : ising.quadratic()) {
        a[static_cast<std::size_t>(c.i)] -= 2.0 * c.value;
        a[static_cast<std::size_t>(c.j)] -= 2.0 * c.value;
        offset += c.value;
        q.push_back({c.i, c.j, 4.0 * c.value});
    }
    return {ProblemModel(Domain::binary, ising.num_variables(), std::move(a), std::move(q), ising.topology_ptr()), offset};
}

Assignment spins_to_binary(std::span<const std::int8_t> spins) {
    Assignment out(spins.size());
    std::transform(spins.begin(), spins.end(), out.begin(), [](std::int8_t s) { return static_cast<std::int8_t>(s > 0 ? 1 : 0); });
    return out;
}

Assignment binary_to_spins(std::span<const std::int8_t> bits) {
    Assignment out(bits.size());
    std::transform(bits.begin(), bits.end(), out.begin(), [](std::int8_t b) { return static_cast<std::int8_t>(b ? 1 : -1); });
    return out;
}

ProblemModel rescale(const ProblemModel& model, double factor) {
    if (!std::isfinite(factor)) throw ValidationError("rescale factor must be finite");
    std::vector<double> lin(model.linear().begin(), model.linear().end());
    for (double& v : lin) v *= factor;
    std::vector<double> quad;
    quad.reserve(model.quadratic().size());
    for (const Coupling& c : model.quadratic()) quad.push_back(c.value * factor);
    return model.with_coefficients(std::move(lin), quad);
}

ProblemModel random_instance(std::shared_ptr<const ChimeraTopology> topology, Interval linear_range,
                             Interval quad_range, std::uint64_t seed) {
    if (!topology || topology->num_nodes() == 0) throw ValidationError("random_instance needs a non-empty topology");
    if (!(linear_range.lo < linear_range.hi) || !(quad_range.lo < quad_range.hi))
        throw ValidationError("coefficient ranges must satisfy lo < hi");
    Rng rng(seed);
    std::vector<double> lin(static_cast<std::size_t>(topology->num_nodes()));
    for (double& v : lin) v = rng.uniform_open(linear_range.lo, linear_range.hi);
    std::vector<Coupling> quad;
    quad.reserve(topology->edges().size());
    for (auto [i, j] : topology->edges()) quad.push_back({i, j, rng.uniform_open(quad_range.lo, quad_range.hi)});
    const int n = topology->num_nodes();
    return ProblemModel(Domain::spin, n, std::move(lin), std::move(quad), std::move(topology));
}

GroundState brute_force_ground(const ProblemModel& model) {
    const int n = model.num_variables();
    if (n > kBruteForceLimit) throw ValidationError("brute force limited to " + std::to_string(kBruteForceLimit) + " variables");
    const bool spin = model.domain() == Domain::spin;
    const std::int8_t low = spin ? -1 : 0;

    // Enumerate in lexicographic order: variable 0 is the most significant
    // position, low value first, so the first strict minimum wins ties.
    std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
    for (const Coupling& c : model.quadratic()) {
        adj[static_cast<std::size_t>(c.i)].emplace_back(c.j, c.value);
        adj[static_cast<std::size_t>(c.j)].emplace_back(c.i, c.value);
    }
    Assignment a(static_cast<std::size_t>(n), low);
    double e = energy(model, a);
    GroundState best{a, e};
    double scale = 1.0;
    for (double v : model.linear()) scale += std::abs(v);
    for (const Coupling& c : model.quadratic()) scale += std::abs(c.value);
    const double slack = 1e-9 * scale;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t code = 1; code < total; ++code) {
        // Binary counter with variable n-1 least significant: flip the bits that changed.
        std::uint64_t changed = code ^ (code - 1);
        for (int bit = 0; changed >> bit; ++bit) {
            const auto v = static_cast<std::size_t>(n - 1 - bit);
            const std::int8_t old = a[v];
            const std::int8_t now = ((code >> bit) & 1) ? std::int8_t{1} : low;
            double field = model.linear(n - 1 - bit);
            for (auto [nb, w] : adj[v]) field += w * a[static_cast<std::size_t>(nb)];
            e += field * (now - old);
            a[v] = now;
        }
        if (e < best.energy - slack) {
            best.energy = energy(model, a);
            best.assignment = a;
        } else if (e < best.energy + slack) {
            // Near tie: decide on exact energies so drift cannot reorder equal states.
            const double exact = energy(model, a);
            if (exact < best.energy) {
                best.energy = exact;
                best.assignment = a;
            }
        }
    }
    // Accumulated updates drift; report the exact energy of the winner.
    best.energy = energy(model, best.assignment);
    return best;
}

ProblemModel induced_submodel(const ProblemModel& model, std::span<const int> vars) {
    std::vector<int> where(static_cast<std::size_t>(model.num_variables()), -1);
    std::vector<double> lin(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) {
        int v = vars[k];
        if (v < 0 || v >= model.num_variables()) throw ValidationError("submodel variable out of range");
        if (where[static_cast<std::size_t>(v)] >= 0) throw ValidationError("duplicate submodel variable");
        where[static_cast<std::size_t>(v)] = static_cast<int>(k);
        lin[k] = model.linear(v);
    }
    std::vector<Coupling> quad;
    for (const Coupling& c : model.quadratic()) {
        int a = where[static_cast<std::size_t>(c.i)];
        int b = where[static_cast<std::size_t>(c.j)];
        if (a < 0 || b < 0) continue;
        quad.push_back({std::min(a, b), std::max(a, b), c.value});
    }
    return ProblemModel(model.domain(), static_cast<int>(vars.size()), std::move(lin), std::move(quad));
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_model(std::ostream& out, const ProblemModel& model) {
    out << to_string(model.domain()) << ' ' << model.num_variables() << '\n';
    for (int i = 0; i < model.num_variables(); ++i) {
        if (model.linear(i) != 0.0) out << i << ' ' << i << ' ' << format_double(model.linear(i)) << '\n';
    }
    for (const Coupling& c : model.quadratic()) out << c.i << ' ' << c.j << ' ' << format_double(c.value) << '\n';
}

ProblemModel read_model(std::istream& in) {
    std::string line;
    int line_no = 0;
    std::optional<Domain> domain;
    int n = 0;
    std::vector<double> lin;
    std::vector<bool> seen_linear;
    std::vector<Coupling> quad;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        auto fail = [&](const std::string& what) {
            throw ValidationError("model line " + std::to_string(line_no) + ": " + what);
        };
        if (!domain) {
            std::string kind;
            if (!(fields >> kind >> n) || n < 0) fail("expected '<ising|qubo> <n>' header");
            if (kind == "ising") domain = Domain::spin;
            else if (kind == "qubo") domain = Domain::binary;
            else fail("unknown model kind '" + kind + "'");
            lin.assign(static_cast<std::size_t>(n), 0.0);
            seen_linear.assign(static_cast<std::size_t>(n), false);
            continue;
        }
        long long i = 0, j = 0;
        std::string value_text;
        if (!(fields >> i >> j >> value_text)) fail("expected 'i j value'");
        std::string extra;
        if (fields >> extra) fail("trailing tokens");
        char* end = nullptr;
        double value = std::strtod(value_text.c_str(), &end);
        if (end == value_text.c_str() || *end != '\0') fail("bad number '" + value_text + "'");
        if (i < 0 || j < 0 || i >= n || j >= n) fail("index out of range");
        if (i == j) {
            if (seen_linear[static_cast<std::size_t>(i)]) fail("duplicate linear term");
            seen_linear[static_cast<std::size_t>(i)] = true;
            lin[static_cast<std::size_t>(i)] = value;
        } else {
            if (i > j) fail("quadratic key must satisfy i < j");
            quad.push_back({static_cast<int>(i), static_cast<int>(j), value});
        }
    }
    if (!domain) throw ValidationError("empty model file");
    return ProblemModel(*domain, n, std::move(lin), std::move(quad));
}

void save_model(const std::string& path, const ProblemModel& model) {
    std::ofstream out(path);
    if (!out) throw RuntimeError("cannot write " + path);
    write_model(out, model);
}

ProblemModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    return read_model(in);
}

}  // namespace annealslice
