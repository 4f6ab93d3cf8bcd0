#include "telesim/restrictions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace telesim {

namespace {

constexpr uint64_t kPattern[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
                                  0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

RVal bit(Rng &rng) { return (rng() & 1) ? RVal::One : RVal::Zero; }

// Truth tables of every output over the free bits of rho, plus for each (output, free bit p)
// the set of points x where toggling p changes the output.
struct Sensitivity {
    size_t N = 0, words = 0;
    uint64_t valid = 0;
    std::vector<std::vector<std::vector<uint64_t>>> diff;  // [o][p][word]
};

Sensitivity sensitivity(const CircuitDag &dag, const BitRestriction &rho) {
    Sensitivity s;
    auto freep = rho.free_positions();
    s.N = freep.size();
    s.words = s.N <= 6 ? 1 : size_t(1) << (s.N - 6);
    s.valid = s.N >= 6 ? ~uint64_t{0} : (uint64_t{1} << (size_t(1) << s.N)) - 1;
    std::vector<std::vector<uint64_t>> table(dag.n_out(), std::vector<uint64_t>(s.words));
    std::vector<uint64_t> in(dag.n_in);
    for (size_t w = 0; w < s.words; w++) {
        for (size_t i = 0; i < dag.n_in; i++) in[i] = rho.a[i] == RVal::One ? ~uint64_t{0} : 0;
        for (size_t p = 0; p < s.N; p++) in[freep[p]] = p < 6 ? kPattern[p] : (((w >> (p - 6)) & 1) ? ~uint64_t{0} : 0);
        auto out = dag.eval64(in);
        for (size_t o = 0; o < out.size(); o++) table[o][w] = out[o];
    }
    s.diff.assign(dag.n_out(), std::vector<std::vector<uint64_t>>(s.N, std::vector<uint64_t>(s.words)));
    for (size_t o = 0; o < dag.n_out(); o++) {
        const auto &t = table[o];
        for (size_t p = 0; p < s.N; p++) {
            auto &d = s.diff[o][p];
            for (size_t w = 0; w < s.words; w++) {
                if (p < 6) {
                    size_t sh = size_t(1) << p;
                    uint64_t lo = (t[w] ^ (t[w] >> sh)) & ~kPattern[p];
                    d[w] = (lo | (lo << sh)) & s.valid;
                } else {
                    d[w] = t[w] ^ t[w ^ (size_t(1) << (p - 6))];
                }
            }
        }
    }
    return s;
}

// Does every assignment of T leave each output depending on at most `locality` other free bits?
bool locality_holds(const Sensitivity &s, const std::vector<uint32_t> &T, size_t locality) {
    size_t k = T.size();
    std::vector<uint8_t> inT(s.N, 0);
    for (uint32_t p : T) inT[p] = 1;
    std::vector<uint32_t> count(size_t(1) << k), hit(size_t(1) << k);
    for (const auto &per_o : s.diff) {
        std::fill(count.begin(), count.end(), 0);
        for (size_t p = 0; p < s.N; p++) {
            if (inT[p]) continue;
            std::fill(hit.begin(), hit.end(), 0);
            const auto &d = per_o[p];
            for (size_t w = 0; w < s.words; w++) {
                uint64_t bits = d[w];
                while (bits) {
                    uint64_t x = uint64_t(w) * 64 + uint64_t(std::countr_zero(bits));
                    bits &= bits - 1;
                    uint32_t eta = 0;
                    for (size_t i = 0; i < k; i++) eta |= uint32_t((x >> T[i]) & 1) << i;
                    hit[eta] = 1;
                }
            }
            for (size_t e = 0; e < hit.size(); e++) count[e] += hit[e];
        }
        for (uint32_t c : count) {
            if (c > locality) return false;
        }
    }
    return true;
}

// Advances a sorted k-subset of {0..n-1}; false after the last one.
bool next_subset(std::vector<uint32_t> &c, size_t n) {
    size_t k = c.size();
    for (size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            c[i]++;
            for (size_t j = i + 1; j < k; j++) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

size_t BitRestriction::num_free() const { return size_t(std::count(a.begin(), a.end(), RVal::Star)); }

std::vector<uint32_t> BitRestriction::free_positions() const {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < a.size(); i++) {
        if (a[i] == RVal::Star) out.push_back(i);
    }
    return out;
}

std::string BitRestriction::str() const {
    std::string s;
    for (RVal v : a) s += v == RVal::Star ? '*' : (v == RVal::One ? '1' : '0');
    return s;
}

size_t BlockRestriction::num_active() const {
    return size_t(std::count(blocks.begin(), blocks.end(), std::nullopt));
}

BitRestriction BlockRestriction::to_bits() const {
    BitRestriction r;
    for (const auto &b : blocks) {
        for (size_t i = 0; i < kBlockBits; i++) {
            r.a.push_back(!b ? RVal::Star : (((*b >> (kBlockBits - 1 - i)) & 1) ? RVal::One : RVal::Zero));
        }
    }
    return r;
}

BitRestriction sample_rp(size_t n, double p, Rng &rng) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("sample_rp: p must lie in [0, 1]");
    BitRestriction r;
    r.a.reserve(n);
    for (size_t i = 0; i < n; i++) r.a.push_back(uniform01(rng) < p ? RVal::Star : bit(rng));
    return r;
}

BitRestriction concat(const BitRestriction &rho, const BitRestriction &eta) {
    if (eta.size() != rho.num_free()) throw std::invalid_argument("concat: eta must cover the free bits of rho");
    BitRestriction r = rho;
    size_t k = 0;
    for (RVal &v : r.a) {
        if (v == RVal::Star) v = eta.a[k++];
    }
    return r;
}

ToBlock to_block(const BitRestriction &rho) {
    if (rho.size() % kBlockBits) throw std::invalid_argument("to_block: length is not a multiple of 5");
    ToBlock out;
    BlockRestriction b;
    for (size_t j = 0; j < rho.size() / kBlockBits; j++) {
        size_t stars = 0;
        uint8_t v = 0;
        for (size_t i = 0; i < kBlockBits; i++) {
            RVal x = rho.a[kBlockBits * j + i];
            stars += x == RVal::Star;
            v = uint8_t((v << 1) | (x == RVal::One));
        }
        if (stars == kBlockBits) {
            b.blocks.push_back(std::nullopt);
        } else if (stars == 0) {
            b.blocks.push_back(v);
        } else {
            out.offending_block = j;
            return out;
        }
    }
    out.block = std::move(b);
    return out;
}

size_t free_blocks(const BitRestriction &rho) {
    if (rho.size() % kBlockBits) throw std::invalid_argument("free_blocks: length is not a multiple of 5");
    size_t n = 0;
    for (size_t j = 0; j < rho.size(); j += kBlockBits) {
        n += std::all_of(rho.a.begin() + long(j), rho.a.begin() + long(j + kBlockBits),
                         [](RVal v) { return v == RVal::Star; });
    }
    return n;
}

SwitchingParams switching_params(size_t n, double s, int d) {
    if (n == 0 || d < 1 || !(s > 0)) throw std::invalid_argument("switching_params: need n >= 1, d >= 1, s > 0");
    SwitchingParams r;
    r.n = n;
    r.s = s;
    r.d = d;
    r.q = 20 * d;
    double N = double(n);
    double log_s = std::max(std::log(s), 1.0);
    r.p_star = std::min(1.0, 1.0 / (std::pow(2 * N, 1.0 / r.q) * std::pow(log_s, d - 1)));
    r.t = std::pow(r.p_star, 5) * N / 5;
    r.p_star_lower_bound = std::pow(2.0, -1.0 / r.q) * std::pow(N, -1.0 / 20);
    r.size_assumption = std::log(s) <= std::pow(N, 1.0 / r.q);
    r.s_le_2_pow_t_half = std::log(s) <= r.t / 2 * std::log(2.0);
    return r;
}

EOracle stub_oracle() {
    EOracle o;
    o.mode = "stub";
    o.query = [](const BitRestriction &rho, double t, Rng &rng) {
        EOracleResult r;
        r.status = EOracleResult::Status::NonEmpty;
        size_t N = rho.num_free();
        size_t k = std::min(N, size_t(std::floor(2 * t)));
        std::vector<uint32_t> idx(N);
        for (uint32_t i = 0; i < N; i++) idx[i] = i;
        for (size_t i = 0; i < k; i++) std::swap(idx[i], idx[i + uniform_below(rng, N - i)]);
        r.T.assign(idx.begin(), idx.begin() + long(k));
        std::sort(r.T.begin(), r.T.end());
        return r;
    };
    return o;
}

EOracle exhaustive_oracle(const CircuitDag &dag, size_t locality, uint64_t budget) {
    dag.validate();
    EOracle o;
    o.mode = "exhaustive";
    o.query = [dag, locality, budget](const BitRestriction &rho, double t, Rng &) {
        EOracleResult r;
        if (rho.size() != dag.n_in) {
            r.error = "restriction does not match the dag input arity";
            return r;
        }
        size_t N = rho.num_free();
        if (N > 24) {
            r.error = "more than 24 free bits";
            return r;
        }
        Sensitivity s = sensitivity(dag, rho);
        size_t kmax = std::min(N, size_t(std::floor(2 * t)));
        uint64_t cost_per = uint64_t(dag.n_out()) * std::max<size_t>(N, 1) * (uint64_t(1) << N);
        uint64_t spent = 0;
        for (size_t k = 0; k <= kmax; k++) {
            std::vector<uint32_t> T(k);
            for (uint32_t i = 0; i < k; i++) T[i] = i;
            do {
                spent += cost_per;
                if (spent > budget) {
                    r.error = "search budget exhausted";
                    return r;
                }
                if (locality_holds(s, T, locality)) {
                    r.status = EOracleResult::Status::NonEmpty;
                    r.T = T;
                    return r;
                }
            } while (next_subset(T, N));
        }
        r.status = EOracleResult::Status::Empty;
        return r;
    };
    return o;
}

ProcessResult block_restriction_process(size_t n, const SwitchingParams &params, const EOracle &oracle, Rng &rng) {
    ProcessResult res;
    ProcessDiagnostics &dg = res.diag;
    dg.t = params.t;
    dg.oracle_mode = oracle.mode;
    res.rho = sample_rp(kBlockBits * n, params.p_star, rng);
    size_t N = res.rho.num_free();
    dg.rho_free_bits = N;
    dg.rho_free_blocks = free_blocks(res.rho);

    EOracleResult e;
    try {
        e = oracle.query(res.rho, params.t, rng);
    } catch (const std::exception &ex) {
        e.status = EOracleResult::Status::Failed;
        e.error = ex.what();
    }
    if (e.status == EOracleResult::Status::NonEmpty) {
        std::vector<uint32_t> T = e.T;
        std::sort(T.begin(), T.end());
        bool ok = std::adjacent_find(T.begin(), T.end()) == T.end() && (T.empty() || T.back() < N) &&
                  double(T.size()) <= 2 * params.t;
        if (!ok) {
            e.status = EOracleResult::Status::Failed;
            e.error = "oracle returned an invalid T";
        }
    }
    dg.oracle_status = e.status;
    dg.oracle_error = e.error;

    BitRestriction eta = BitRestriction::all_free(N);
    if (e.status == EOracleResult::Status::NonEmpty) {
        for (uint32_t i : e.T) eta.a[i] = bit(rng);
        dg.T_size = e.T.size();
        dg.uniform_path = true;
    } else {
        for (RVal &v : eta.a) v = RVal(uniform_below(rng, 3));
    }
    res.eta = eta;

    BitRestriction x = concat(res.rho, eta);
    for (size_t j = 0; j < n; j++) {
        auto first = x.a.begin() + long(kBlockBits * j), last = first + long(kBlockBits);
        size_t stars = size_t(std::count(first, last, RVal::Star));
        if (stars == 0 || stars == kBlockBits) continue;
        dg.partially_fixed++;
        for (auto it = first; it != last; ++it) {
            if (*it == RVal::Star) *it = bit(rng);
        }
    }
    ToBlock tb = to_block(x);
    if (!tb.block) throw std::logic_error("block_restriction_process: cleaning left a partially fixed block");
    res.xi = std::move(*tb.block);
    dg.xi_free_blocks = res.xi.num_active();
    dg.bound_holds = double(dg.xi_free_blocks) >= double(dg.rho_free_blocks) - 2 * params.t;
    return res;
}

}  // namespace telesim
