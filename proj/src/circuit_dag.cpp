#include "telesim/circuit_dag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "telesim/telep_relation.hpp"
#include "telesim/uext.hpp"

namespace telesim {

namespace {

// Bit s of kPattern[p] is bit p of s.
constexpr uint64_t kPattern[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                  0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

uint64_t eval_gate(const DagNode &g, const uint64_t *vals) {
    size_t k = g.in.size();
    uint64_t out = 0;
    for (uint64_t e = 0; e < (uint64_t{1} << k); e++) {
        if (!((g.table >> e) & 1)) continue;
        uint64_t term = ~uint64_t{0};
        for (size_t i = 0; i < k; i++) term &= ((e >> i) & 1) ? vals[g.in[i]] : ~vals[g.in[i]];
        out |= term;
    }
    return out;
}

std::vector<uint32_t> merge(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b) {
    std::vector<uint32_t> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<std::vector<uint32_t>> forward_from(const std::vector<std::vector<uint32_t>> &backward, size_t n_in) {
    std::vector<std::vector<uint32_t>> fwd(n_in);
    for (uint32_t o = 0; o < backward.size(); o++) {
        for (uint32_t i : backward[o]) fwd[i].push_back(o);
    }
    return fwd;
}

// Inputs among `cone` that output `o` actually depends on.
std::vector<uint32_t> semantic_cone(const CircuitDag &dag, uint32_t o, const std::vector<uint32_t> &cone) {
    std::vector<uint32_t> anc;
    std::vector<uint8_t> seen(dag.nodes.size(), 0);
    std::vector<uint32_t> stack{o};
    seen[o] = 1;
    while (!stack.empty()) {
        uint32_t v = stack.back();
        stack.pop_back();
        anc.push_back(v);
        for (uint32_t u : dag.nodes[v].in) {
            if (!seen[u]) {
                seen[u] = 1;
                stack.push_back(u);
            }
        }
    }
    std::sort(anc.begin(), anc.end());
    size_t nb = cone.size();
    size_t words = nb <= 6 ? 1 : size_t(1) << (nb - 6);
    uint64_t valid = nb >= 6 ? ~uint64_t{0} : (uint64_t{1} << (size_t(1) << nb)) - 1;
    std::vector<uint64_t> vals(dag.nodes.size(), 0), table(words);
    for (size_t w = 0; w < words; w++) {
        for (uint32_t v : anc) {
            const DagNode &nd = dag.nodes[v];
            if (nd.is_input) {
                size_t p = size_t(std::lower_bound(cone.begin(), cone.end(), v) - cone.begin());
                vals[v] = p < 6 ? kPattern[p] : (((w >> (p - 6)) & 1) ? ~uint64_t{0} : 0);
            } else {
                vals[v] = eval_gate(nd, vals.data());
            }
        }
        table[w] = vals[o];
    }
    std::vector<uint32_t> out;
    for (size_t p = 0; p < nb; p++) {
        bool dep = false;
        if (p < 6) {
            size_t sh = size_t(1) << p;
            for (size_t w = 0; w < words && !dep; w++) dep = ((table[w] ^ (table[w] >> sh)) & ~kPattern[p] & valid) != 0;
        } else {
            size_t f = size_t(1) << (p - 6);
            for (size_t w = 0; w < words && !dep; w++) dep = table[w] != table[w ^ f];
        }
        if (dep) out.push_back(cone[p]);
    }
    return out;
}

}  // namespace

CircuitDag CircuitDag::with_inputs(size_t n_in, size_t fan_in) {
    if (fan_in > kMaxFanIn) throw std::invalid_argument("CircuitDag: fan-in above 6");
    CircuitDag d;
    d.n_in = n_in;
    d.fan_in = fan_in;
    d.nodes.assign(n_in, DagNode{{}, 0, true});
    return d;
}

uint32_t CircuitDag::add_gate(std::vector<uint32_t> in, uint64_t table) {
    if (in.size() > fan_in) throw std::invalid_argument("CircuitDag: gate exceeds the fan-in bound");
    for (uint32_t u : in) {
        if (u >= nodes.size()) throw std::invalid_argument("CircuitDag: operand refers to a later node");
    }
    if (in.size() < 6) table &= (uint64_t{1} << (size_t(1) << in.size())) - 1;
    nodes.push_back({std::move(in), table, false});
    return uint32_t(nodes.size() - 1);
}

void CircuitDag::validate() const {
    if (fan_in > kMaxFanIn) throw std::invalid_argument("CircuitDag: fan-in above 6");
    if (nodes.size() < n_in) throw std::invalid_argument("CircuitDag: missing input nodes");
    for (size_t v = 0; v < nodes.size(); v++) {
        const DagNode &nd = nodes[v];
        if ((v < n_in) != nd.is_input) throw std::invalid_argument("CircuitDag: inputs must come first");
        if (nd.is_input && !nd.in.empty()) throw std::invalid_argument("CircuitDag: input with operands");
        if (nd.in.size() > fan_in) throw std::invalid_argument("CircuitDag: gate exceeds the fan-in bound");
        for (uint32_t u : nd.in) {
            if (u >= v) throw std::invalid_argument("CircuitDag: operands must precede their gate");
        }
        if (nd.in.size() < 6 && (nd.table >> (size_t(1) << nd.in.size())) != 0)
            throw std::invalid_argument("CircuitDag: truth table too long");
    }
    for (uint32_t o : outputs) {
        if (o >= nodes.size()) throw std::invalid_argument("CircuitDag: output out of range");
    }
}

size_t CircuitDag::depth() const {
    std::vector<size_t> dep(nodes.size(), 0);
    for (size_t v = n_in; v < nodes.size(); v++) {
        for (uint32_t u : nodes[v].in) dep[v] = std::max(dep[v], dep[u] + 1);
    }
    size_t out = 0;
    for (uint32_t o : outputs) out = std::max(out, dep[o]);
    return out;
}

std::vector<uint64_t> CircuitDag::eval64(const std::vector<uint64_t> &in) const {
    if (in.size() != n_in) throw std::invalid_argument("CircuitDag::eval64: wrong input arity");
    std::vector<uint64_t> vals(nodes.size());
    std::copy(in.begin(), in.end(), vals.begin());
    for (size_t v = n_in; v < nodes.size(); v++) vals[v] = eval_gate(nodes[v], vals.data());
    std::vector<uint64_t> out;
    out.reserve(outputs.size());
    for (uint32_t o : outputs) out.push_back(vals[o]);
    return out;
}

std::vector<bool> CircuitDag::eval(const std::vector<bool> &in) const {
    std::vector<uint64_t> w(in.size());
    for (size_t i = 0; i < in.size(); i++) w[i] = in[i] ? 1 : 0;
    std::vector<bool> out;
    for (uint64_t x : eval64(w)) out.push_back(x & 1);
    return out;
}

std::string CircuitDag::to_json() const {
    nlohmann::json j;
    j["n_in"] = n_in;
    j["fan_in"] = fan_in;
    auto &g = j["gates"] = nlohmann::json::array();
    for (size_t v = n_in; v < nodes.size(); v++) g.push_back({{"in", nodes[v].in}, {"table", nodes[v].table}});
    j["outputs"] = outputs;
    return j.dump();
}

CircuitDag CircuitDag::from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("CircuitDag: ") + e.what());
    }
    try {
        CircuitDag d = with_inputs(j.at("n_in").get<size_t>(), j.value("fan_in", size_t(2)));
        for (const auto &g : j.at("gates")) d.add_gate(g.at("in").get<std::vector<uint32_t>>(), g.at("table").get<uint64_t>());
        d.outputs = j.at("outputs").get<std::vector<uint32_t>>();
        d.validate();
        return d;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("CircuitDag: ") + e.what());
    }
}

CircuitDag random_layered_dag(size_t n_in, size_t n_out, size_t depth, size_t fan_in, Rng &rng, size_t width) {
    if (depth == 0) throw std::invalid_argument("random_layered_dag: depth must be positive");
    if (width == 0) width = n_out;
    CircuitDag d = CircuitDag::with_inputs(n_in, fan_in);
    size_t prev_lo = 0, prev_n = n_in;
    for (size_t l = 1; l <= depth; l++) {
        size_t cnt = l == depth ? n_out : width;
        size_t lo = d.nodes.size();
        size_t k = std::min(fan_in, prev_n);
        for (size_t g = 0; g < cnt; g++) {
            std::vector<uint32_t> in;
            while (in.size() < k) {
                uint32_t u = uint32_t(prev_lo + uniform_below(rng, prev_n));
                if (std::find(in.begin(), in.end(), u) == in.end()) in.push_back(u);
            }
            d.add_gate(std::move(in), rng());
        }
        prev_lo = lo;
        prev_n = cnt;
    }
    for (size_t o = 0; o < n_out; o++) d.outputs.push_back(uint32_t(prev_lo + o));
    return d;
}

bool LightCones::all_exact() const { return std::all_of(exact.begin(), exact.end(), [](bool b) { return b; }); }

size_t LightCones::max_backward() const {
    size_t m = 0;
    for (const auto &b : backward) m = std::max(m, b.size());
    return m;
}

LightCones light_cones(const CircuitDag &dag, ConeMode mode) {
    dag.validate();
    std::vector<std::vector<uint32_t>> cone(dag.nodes.size());
    for (uint32_t v = 0; v < dag.nodes.size(); v++) {
        if (dag.nodes[v].is_input) {
            cone[v] = {v};
            continue;
        }
        for (uint32_t u : dag.nodes[v].in) cone[v] = merge(cone[v], cone[u]);
    }
    LightCones lc;
    lc.mode = mode;
    for (uint32_t o : dag.outputs) {
        const auto &c = cone[o];
        if (mode == ConeMode::Semantic && c.size() <= LightCones::kSemanticLimit) {
            lc.backward.push_back(semantic_cone(dag, o, c));
            lc.exact.push_back(true);
        } else {
            lc.backward.push_back(c);
            lc.exact.push_back(false);
        }
    }
    lc.forward = forward_from(lc.backward, dag.n_in);
    return lc;
}

LightCones block_cones(const LightCones &bits, size_t in_block, size_t out_block) {
    if (in_block == 0 || out_block == 0 || bits.forward.size() % in_block || bits.backward.size() % out_block)
        throw std::invalid_argument("block_cones: arities are not multiples of the block sizes");
    LightCones lc;
    lc.mode = bits.mode;
    size_t nb_out = bits.backward.size() / out_block;
    for (size_t b = 0; b < nb_out; b++) {
        std::vector<uint32_t> c;
        bool ex = true;
        for (size_t o = b * out_block; o < (b + 1) * out_block; o++) {
            for (uint32_t i : bits.backward[o]) c.push_back(uint32_t(i / in_block));
            ex = ex && bits.exact[o];
        }
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        lc.backward.push_back(std::move(c));
        lc.exact.push_back(ex);
    }
    lc.forward = forward_from(lc.backward, bits.forward.size() / in_block);
    return lc;
}

std::optional<std::pair<uint32_t, uint32_t>> find_nonsignaling_pair(const LightCones &cones) {
    size_t n = cones.forward.size();
    if (n < 2) return std::nullopt;
    uint32_t j = 0;
    for (uint32_t i = 1; i < n; i++) {
        if (cones.forward[i].size() < cones.forward[j].size()) j = i;
    }
    std::vector<uint8_t> blocked(n, 0);
    blocked[j] = 1;
    for (uint32_t o : cones.forward[j]) {
        for (uint32_t i : cones.backward[o]) blocked[i] = 1;
    }
    for (uint32_t k = 0; k < n; k++) {
        if (!blocked[k]) return std::make_pair(std::min(j, k), std::max(j, k));
    }
    return std::nullopt;
}

size_t ceiling_depth_bound(size_t n, size_t fan_in, double c) {
    if (n < 2 || fan_in < 2) return 0;
    return size_t(std::floor(c * std::log(double(n)) / std::log(double(fan_in))));
}

CeilingReport nc0_ceiling_experiment(const CircuitDag &strategy, size_t n, uint64_t trials, Rng &rng,
                                     const EncodingMap &enc) {
    if (strategy.n_in != kEncBits * n || strategy.n_out() != 2 * n)
        throw std::invalid_argument("nc0_ceiling_experiment: strategy must map 5n bits to 2n bits");
    CeilingReport r;
    LightCones bits = light_cones(strategy);
    r.cones_exact = bits.all_exact();
    r.pair = find_nonsignaling_pair(block_cones(bits, kEncBits, 2));
    std::vector<uint8_t> witness(1024, 0);
    std::vector<uint64_t> in(strategy.n_in);
    CliffordTuple b(n);
    PauliTuple z(n);
    std::vector<unsigned> x(n);
    while (r.trials < trials) {
        size_t shots = size_t(std::min<uint64_t>(64, trials - r.trials));
        for (auto &w : in) w = rng();
        std::vector<uint64_t> out = strategy.eval64(in);
        for (size_t s = 0; s < shots; s++) {
            for (size_t j = 0; j < n; j++) {
                unsigned v = 0;
                for (size_t i = 0; i < kEncBits; i++) v = (v << 1) | unsigned((in[kEncBits * j + i] >> s) & 1);
                x[j] = v;
                b[j] = enc.apply(v);
                z[j] = pauli_from_bits((out[2 * j] >> s) & 1, (out[2 * j + 1] >> s) & 1);
            }
            bool ok = verify(b, z).valid;
            r.successes += ok;
            if (!ok && r.pair) witness[(x[r.pair->first] << kEncBits) | x[r.pair->second]] = 1;
        }
        r.trials += shots;
    }
    for (uint8_t w : witness) r.pair_failure_witnesses += w;
    r.rate = r.trials ? double(r.successes) / double(r.trials) : 0.0;
    std::tie(r.wilson_lo, r.wilson_hi) = wilson_interval(r.successes, r.trials);
    return r;
}

}  // namespace telesim
