#include "telesim/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace telesim {

bool NoiseModel::active_at(size_t slot) const {
    if (kind == NoiseKind::None || p <= 0) return false;
    return slots.empty() || std::find(slots.begin(), slots.end(), slot) != slots.end();
}

std::string NoiseModel::kind_name() const {
    switch (kind) {
        case NoiseKind::None: return "none";
        case NoiseKind::Iid: return "iid";
        case NoiseKind::Clustered: return "clustered";
    }
    return "none";
}

NoiseKind parse_noise_kind(const std::string &s) {
    if (s == "none") return NoiseKind::None;
    if (s == "iid") return NoiseKind::Iid;
    if (s == "clustered") return NoiseKind::Clustered;
    throw std::invalid_argument("unknown noise kind: " + s);
}

std::string NoiseModel::to_json() const {
    nlohmann::json j = {{"kind", kind_name()}, {"p", p}, {"slots", slots}};
    return j.dump();
}

NoiseModel NoiseModel::from_json(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    NoiseModel m;
    m.kind = parse_noise_kind(j.value("kind", "none"));
    m.p = j.value("p", 0.0);
    if (j.contains("slots")) m.slots = j["slots"].get<std::vector<size_t>>();
    if (m.p < 0 || m.p > 1) throw std::invalid_argument("noise strength must be in [0,1]");
    return m;
}

namespace {

// Calls hit(k) for each k < total independently with probability q.
template <class F>
void bernoulli_positions(uint64_t total, double q, Rng &rng, F &&hit) {
    if (q <= 0 || total == 0) return;
    if (q >= 1) {
        for (uint64_t k = 0; k < total; k++) hit(k);
        return;
    }
    std::geometric_distribution<uint64_t> gap(q);
    for (uint64_t k = gap(rng); k < total; k += 1 + gap(rng)) hit(k);
}

Pauli random_nontrivial(Rng &rng) { return Pauli(1 + uniform_below(rng, 3)); }

struct Blocks {
    std::vector<std::pair<int64_t, int64_t>> members;  // live positions, -1 if absent
};

Blocks blocks_of(const std::vector<uint32_t> &live) {
    Blocks b;
    std::vector<std::pair<uint32_t, size_t>> sorted;
    for (size_t i = 0; i < live.size(); i++) sorted.emplace_back(live[i], i);
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); i++) {
        uint32_t q = sorted[i].first;
        if (i + 1 < sorted.size() && (q >> 1) == (sorted[i + 1].first >> 1)) {
            b.members.push_back({int64_t(sorted[i].second), int64_t(sorted[i + 1].second)});
            i++;
        } else {
            b.members.push_back({int64_t(sorted[i].second), -1});
        }
    }
    return b;
}

// Draws error events on `live` for `shots` shots; emit(live_index, shot, pauli).
template <class Emit>
void draw(const NoiseModel &m, const std::vector<uint32_t> &live, uint64_t shots, Rng &rng, Emit &&emit) {
    if (m.kind == NoiseKind::None || m.p <= 0) return;
    if (m.p > 1) throw std::invalid_argument("noise strength must be in [0,1]");
    if (m.kind == NoiseKind::Iid) {
        bernoulli_positions(live.size() * shots, m.p, rng,
                            [&](uint64_t k) { emit(k / shots, k % shots, random_nontrivial(rng)); });
        return;
    }
    Blocks b = blocks_of(live);
    bernoulli_positions(b.members.size() * shots, m.p * m.p / 2, rng, [&](uint64_t k) {
        auto [u, v] = b.members[k / shots];
        emit(size_t(u), k % shots, random_nontrivial(rng));
        if (v >= 0) emit(size_t(v), k % shots, random_nontrivial(rng));
    });
    bernoulli_positions(live.size() * shots, m.p / 2, rng,
                        [&](uint64_t k) { emit(k / shots, k % shots, random_nontrivial(rng)); });
}

}  // namespace

PauliFrame sample(const NoiseModel &m, size_t n, Rng &rng) {
    PauliFrame e(n);
    std::vector<uint32_t> live(n);
    for (size_t q = 0; q < n; q++) live[q] = uint32_t(q);
    draw(m, live, 1, rng, [&](size_t i, uint64_t, Pauli p) {
        if (pauli_s2(p)) e.x.flip(i);
        if (pauli_s1(p)) e.z.flip(i);
    });
    return e;
}

void sample_batch(const NoiseModel &m, const std::vector<uint32_t> &live, Rng &rng, uint64_t *x, uint64_t *z) {
    draw(m, live, 64, rng, [&](size_t i, uint64_t shot, Pauli p) {
        uint64_t bit = uint64_t{1} << shot;
        if (pauli_s2(p)) x[live[i]] ^= bit;
        if (pauli_s1(p)) z[live[i]] ^= bit;
    });
}

double event_cover_probability(const NoiseModel &m, const std::vector<uint32_t> &F) {
    if (F.empty()) return 1.0;
    if (m.kind == NoiseKind::None || m.p <= 0) return 0.0;
    double p = m.p;
    if (m.kind == NoiseKind::Iid) return std::pow(p, double(F.size()));
    std::vector<uint32_t> f = F;
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    double block = p * p / 2, single = p / 2, prob = 1.0;
    for (size_t i = 0; i < f.size(); i++) {
        if (i + 1 < f.size() && (f[i] >> 1) == (f[i + 1] >> 1)) {
            prob *= block + (1 - block) * single * single;
            i++;
        } else {
            prob *= block + (1 - block) * single;
        }
    }
    return prob;
}

LocalStochasticVerifier::LocalStochasticVerifier(size_t n, std::vector<std::vector<uint32_t>> subsets)
    : n_(n), subsets_(std::move(subsets)), hits_(subsets_.size(), 0) {
    for (const auto &F : subsets_) {
        BitVec mask(n_);
        for (uint32_t q : F) {
            if (q >= n_) throw std::invalid_argument("subset qubit out of range");
            mask.set(q);
        }
        masks_.push_back(std::move(mask));
    }
}

void LocalStochasticVerifier::add(const BitVec &support) {
    samples_++;
    for (size_t i = 0; i < masks_.size(); i++) {
        const BitVec &m = masks_[i];
        bool inside = true;
        for (size_t k = 0; k < m.num_words() && inside; k++) inside = (m.word(k) & ~support.word(k)) == 0;
        hits_[i] += inside;
    }
}

LocalStochasticReport LocalStochasticVerifier::report(double p) const {
    if (samples_ < 10000) throw std::invalid_argument("verify_local_stochastic needs at least 1e4 samples");
    LocalStochasticReport r;
    r.samples = samples_;
    r.p = p;
    for (size_t i = 0; i < subsets_.size(); i++) {
        SubsetCheck c;
        c.F = subsets_[i];
        c.hits = hits_[i];
        c.empirical = double(c.hits) / double(samples_);
        c.bound = std::pow(p, double(c.F.size()));
        c.sigma = std::sqrt(c.bound * (1 - c.bound) / double(samples_));
        c.violation = c.empirical > c.bound + 3 * c.sigma;
        r.violations += c.violation;
        r.checks.push_back(std::move(c));
    }
    return r;
}

std::vector<std::vector<uint32_t>> subsets_up_to(size_t n, size_t k) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> cur;
    auto rec = [&](auto &&self, uint32_t start) -> void {
        if (!cur.empty()) out.push_back(cur);
        if (cur.size() == k) return;
        for (uint32_t q = start; q < n; q++) {
            cur.push_back(q);
            self(self, q + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

BitVec support_of(const PauliFrame &e) {
    BitVec s = e.x;
    s |= e.z;
    return s;
}

LocalStochasticReport verify_local_stochastic(const std::function<BitVec(Rng &)> &sampler, size_t n, double p,
                                              const std::vector<std::vector<uint32_t>> &subsets, uint64_t samples,
                                              Rng &rng) {
    LocalStochasticVerifier v(n, subsets);
    for (uint64_t t = 0; t < samples; t++) v.add(sampler(rng));
    return v.report(p);
}

LocalStochasticReport verify_local_stochastic(const NoiseModel &m, size_t n,
                                              const std::vector<std::vector<uint32_t>> &subsets, uint64_t samples,
                                              Rng &rng) {
    return verify_local_stochastic([&](Rng &r) { return support_of(sample(m, n, r)); }, n, m.p, subsets, samples, rng);
}

}  // namespace telesim
