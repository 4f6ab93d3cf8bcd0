#include "telesim/wedge.hpp"

#include <map>
#include <stdexcept>

namespace telesim {

namespace {

int num_odd(int a, int b, int k) { return (a & 1) + ((b + 1) & 1) + (k & 1); }

// Colour of the CZ between an edge qubit e (one odd shifted coordinate) and a face qubit f.
int cz_colour(const std::array<int, 3> &p, const std::array<int, 3> &q) {
    bool p_edge = num_odd(p[0], p[1], p[2]) == 1;
    const auto &e = p_edge ? p : q;
    const auto &f = p_edge ? q : p;
    int shifted[3] = {e[0] & 1, (e[1] + 1) & 1, e[2] & 1};
    int mu = shifted[0] ? 0 : shifted[1] ? 1 : 2;
    int nu = e[0] != f[0] ? 0 : e[1] != f[1] ? 1 : 2;
    return 2 * (nu == (mu + 1) % 3) + (f[nu] > e[nu]);
}

PauliString restrict_to_data(const WedgeLayout &w, const PauliString &p) {
    PauliString out(w.num_qubits());
    for (uint32_t q : w.data) {
        out.x.set(q, p.x.get(q));
        out.z.set(q, p.z.get(q));
    }
    return out;
}

void xor_into(PauliString &a, const PauliString &b) {
    a.x ^= b.x;
    a.z ^= b.z;
}

void build_degenerate(WedgeLayout &w) {
    w.sites = {{0, 0, 0}, {0, 0, 1}};
    w.is_data = {1, 1};
    w.data = {0, 1};
    w.left = {0};
    w.right = {1};
    w.edges = {{0, 1}};
    w.circuit.num_qubits = 2;
    w.circuit.layers = {Layer{{{GateType::H, 0}}, {}}, Layer{{{GateType::CNOT, 0, 1}}, {}}};
}

void build_cluster(WedgeLayout &w) {
    int K = w.K;
    std::map<std::array<int, 3>, uint32_t> id;
    for (int a = 0; a < K; a++) {
        for (int b = 0; b < K; b++) {
            for (int k = 0; k < K; k++) {
                int o = num_odd(a, b, k);
                if (o != 1 && o != 2) continue;
                id[{a, b, k}] = uint32_t(w.sites.size());
                w.sites.push_back({a, b, k});
                bool face = (k == 0 || k == K - 1) && (a + b) % 2 == 0;
                w.is_data.push_back(face);
            }
        }
    }
    for (uint32_t q = 0; q < w.sites.size(); q++) (w.is_data[q] ? w.data : w.aux).push_back(q);
    w.left.resize(w.patch.m);
    w.right.resize(w.patch.m);
    for (size_t i = 0; i < w.patch.m; i++) {
        auto [a, b] = w.patch.coords[i];
        w.left[i] = id.at({a, b, 0});
        w.right[i] = id.at({a, b, K - 1});
    }

    size_t n = w.sites.size();
    w.circuit.num_qubits = n;
    Layer hall;
    for (uint32_t q = 0; q < n; q++) hall.gates.push_back({GateType::H, q});
    std::vector<Layer> cz(4);
    for (uint32_t q = 0; q < n; q++) {
        for (int ax = 0; ax < 3; ax++) {
            std::array<int, 3> t = w.sites[q];
            t[ax]++;
            auto it = id.find(t);
            if (it == id.end()) continue;
            w.edges.push_back({q, it->second});
            cz[size_t(cz_colour(w.sites[q], t))].gates.push_back({GateType::CZ, q, it->second});
        }
    }
    Layer last;
    for (uint32_t q : w.aux) {
        last.gates.push_back({GateType::H, q});
        last.measure.push_back(q);
    }
    w.circuit.layers.push_back(hall);
    for (auto &l : cz) w.circuit.layers.push_back(l);
    w.circuit.layers.push_back(last);
}

}  // namespace

std::shared_ptr<const WedgeLayout> build_wedge(int d) {
    if (d < 1 || d % 2 == 0) throw std::invalid_argument("build_wedge: d must be odd and positive");
    auto wp = std::make_shared<WedgeLayout>();
    WedgeLayout &w = *wp;
    w.d = d;
    w.K = 2 * d - 1;
    w.patch = build_patch(d);
    if (d == 1) {
        build_degenerate(w);
    } else {
        build_cluster(w);
    }
    w.circuit.validate();
    size_t n = w.num_qubits(), na = w.num_aux(), nd = w.num_data(), m = w.patch.m;
    w.data_pos.assign(n, -1);
    w.aux_pos.assign(n, -1);
    for (size_t i = 0; i < nd; i++) w.data_pos[w.data[i]] = int32_t(i);
    for (size_t j = 0; j < na; j++) w.aux_pos[w.aux[j]] = int32_t(j);

    std::vector<std::vector<uint32_t>> nbr(n);
    for (auto [u, v] : w.edges) {
        nbr[u].push_back(v);
        nbr[v].push_back(u);
    }

    // Observables on the two faces.
    auto lift = [&](const PauliString &p, const std::vector<uint32_t> &face) {
        PauliString out(n);
        for (size_t i = 0; i < m; i++) {
            out.x.set(face[i], p.x.get(i));
            out.z.set(face[i], p.z.get(i));
        }
        return out;
    };
    for (const auto *face : {&w.left, &w.right}) {
        for (size_t i = 0; i < w.patch.x_checks.size(); i++) w.observables.push_back(lift(w.patch.check_operator(true, i), *face));
        for (size_t i = 0; i < w.patch.z_checks.size(); i++) w.observables.push_back(lift(w.patch.check_operator(false, i), *face));
    }
    for (Pauli L : {Pauli::X, Pauli::Z}) {
        PauliString o = lift(w.patch.logical(L), w.left);
        xor_into(o, lift(w.patch.logical(L), w.right));
        w.observables.push_back(o);
    }
    size_t no = w.observables.size();

    // Sign coefficients: O = +- prod_{v in S} K_v times X on aux set y, where K_v = X_v Z_{N(v)}.
    // The Z part must cancel: M_aux y = z_O + sum_{v in x_O} N(v).
    std::vector<BitVec> rows(n, BitVec(na));
    for (size_t j = 0; j < na; j++) {
        for (uint32_t u : nbr[w.aux[j]]) rows[u].flip(j);
    }
    Gf2Solver aux_solver(rows, na);
    for (const auto &o : w.observables) {
        if (na == 0) {  // d = 1: the Bell pair needs no measurement
            w.obs_coeff.push_back(BitVec(0));
            continue;
        }
        BitVec rhs = o.z;
        for (size_t v : o.x.ones()) {
            for (uint32_t u : nbr[v]) rhs.flip(u);
        }
        auto y = aux_solver.solve(rhs);
        if (!y) throw std::logic_error("build_wedge: observable is not fixed by the bulk measurement");
        w.obs_coeff.push_back(*y);
    }

    // Pure errors over data qubits: variables (t_x, t_z) per data position.
    std::vector<BitVec> sym(no, BitVec(2 * nd));
    for (size_t i = 0; i < no; i++) {
        for (size_t k = 0; k < nd; k++) {
            sym[i].set(k, w.observables[i].z.get(w.data[k]));
            sym[i].set(nd + k, w.observables[i].x.get(w.data[k]));
        }
    }
    Gf2Solver sym_solver(sym, 2 * nd);
    for (size_t i = 0; i < no; i++) {
        BitVec e(no);
        e.set(i);
        auto t = sym_solver.solve(e);
        if (!t) throw std::logic_error("build_wedge: observables are not independent");
        PauliString T(n);
        for (size_t k = 0; k < nd; k++) {
            T.x.set(w.data[k], t->get(k));
            T.z.set(w.data[k], t->get(nd + k));
        }
        w.pure_error.push_back(T);
    }
    w.rec_unit.assign(na, PauliString(n));
    for (size_t i = 0; i < no; i++) {
        for (size_t j : w.obs_coeff[i].ones()) xor_into(w.rec_unit[j], w.pure_error[i]);
    }

    // Bulk checks: non-qubit points whose neighbours are all aux and whose K product has no Z part.
    if (d > 1) {
        int K = w.K;
        std::map<std::array<int, 3>, uint32_t> id;
        for (uint32_t q = 0; q < n; q++) id[w.sites[q]] = q;
        for (int a = 0; a < K; a++) {
            for (int b = 0; b < K; b++) {
                for (int k = 0; k < K; k++) {
                    int o = num_odd(a, b, k);
                    if (o == 1 || o == 2) continue;
                    std::vector<uint32_t> V;
                    bool ok = true;
                    for (int ax = 0; ax < 3 && ok; ax++) {
                        for (int sg : {-1, 1}) {
                            std::array<int, 3> t{a, b, k};
                            t[ax] += sg;
                            auto it = id.find(t);
                            if (it == id.end()) continue;
                            if (w.is_data[it->second]) ok = false;
                            V.push_back(it->second);
                        }
                    }
                    if (!ok || V.empty()) continue;
                    BitVec zsum(n);
                    for (uint32_t v : V) {
                        for (uint32_t u : nbr[v]) zsum.flip(u);
                    }
                    if (zsum.any()) continue;
                    std::vector<uint32_t> c;
                    for (uint32_t v : V) c.push_back(uint32_t(w.aux_pos[v]));
                    w.checks.push_back(c);
                }
            }
        }
    }
    std::vector<std::vector<uint32_t>> fault_nodes(na);
    for (size_t c = 0; c < w.checks.size(); c++) {
        for (uint32_t j : w.checks[c]) fault_nodes[j].push_back(uint32_t(c));
    }
    for (size_t j = 0; j < na; j++) {
        if (fault_nodes[j].empty() || fault_nodes[j].size() > 2) throw std::logic_error("build_wedge: aux outcome not covered by 1-2 checks");
    }
    w.graph = std::make_unique<DecodingGraph>(w.checks.size(), fault_nodes);

    // Constants from one ideal run.
    Rng rng(0x5eed);
    Tableau st(0);
    BitVec s = run_ideal(w.circuit, rng, &st);
    w.obs_const = BitVec(no);
    for (size_t i = 0; i < no; i++) {
        int e = st.expectation(w.observables[i]);
        if (e == 0) throw std::logic_error("build_wedge: observable is random after the preparation");
        w.obs_const.set(i, (e < 0) ^ w.obs_coeff[i].dot(s));
    }
    w.check_const = BitVec(w.checks.size());
    for (size_t c = 0; c < w.checks.size(); c++) {
        bool v = false;
        for (uint32_t j : w.checks[c]) v ^= s.get(j);
        w.check_const.set(c, v);
    }
    return wp;
}

PauliString wedge_rec(const WedgeLayout &w, const BitVec &s) {
    PauliString r(w.num_qubits());
    for (size_t i = 0; i < w.observables.size(); i++) {
        if (w.obs_const.get(i) ^ w.obs_coeff[i].dot(s)) xor_into(r, w.pure_error[i]);
    }
    return r;
}

BitVec wedge_syndrome(const WedgeLayout &w, const BitVec &s) {
    BitVec syn(w.checks.size());
    for (size_t c = 0; c < w.checks.size(); c++) {
        bool v = w.check_const.get(c);
        for (uint32_t j : w.checks[c]) v ^= s.get(j);
        syn.set(c, v);
    }
    return syn;
}

PauliString wedge_rec_linear(const WedgeLayout &w, const BitVec &delta) {
    PauliString r(w.num_qubits());
    for (size_t j : delta.ones()) xor_into(r, w.rec_unit[j]);
    return r;
}

WedgeClassifier::WedgeClassifier(const WedgeLayout &w) : w_(&w), ro_(w.patch, DecoderChoice{DecoderKind::Matching}) {}

FaceLogicals WedgeClassifier::classify(const PauliString &r) const {
    FaceLogicals out;
    size_t m = w_->patch.m;
    for (int side = 0; side < 2; side++) {
        const auto &face = side ? w_->right : w_->left;
        BitVec x(m), z(m);
        for (size_t i = 0; i < m; i++) {
            x.set(i, r.x.get(face[i]));
            z.set(i, r.z.get(face[i]));
        }
        out.bits[size_t(2 * side)] = ro_.decode(x, false);
        out.bits[size_t(2 * side + 1)] = ro_.decode(z, true);
    }
    return out;
}

BellPrepResult single_shot_bell_prep(const WedgeLayout &w, const NoiseModel &noise, Rng &rng, DecoderChoice choice,
                                     const std::vector<PlantedError> &planted) {
    BellPrepResult r;
    Tableau st(0);
    BitVec s0 = run_ideal(w.circuit, rng, &st);
    FrameBatch fb = run_frames(w.circuit, noise, rng, planted);
    PauliFrame frame = fb.shot_frame(0);
    size_t na = w.num_aux();
    r.s = s0;
    for (size_t j = 0; j < na; j++) {
        if (fb.flip(j, 0)) r.s.flip(j);
    }
    PauliString fdata = restrict_to_data(w, frame);
    st.apply_pauli(fdata);

    Decoder dec(*w.graph, choice);
    r.s_decoded = r.s ^ dec.decode(wedge_syndrome(w, r.s));
    r.rec = wedge_rec(w, r.s_decoded);
    st.apply_pauli(r.rec);

    r.residual = fdata;
    xor_into(r.residual, r.rec);
    xor_into(r.residual, wedge_rec(w, s0));
    r.logicals = WedgeClassifier(w).classify(r.residual);
    r.logical_failure = !r.logicals.bell_preserving();
    r.state = std::move(st);
    return r;
}

BellPrepStats bell_prep_monte_carlo(const WedgeLayout &w, const NoiseModel &noise, uint64_t trials, Rng &rng,
                                    DecoderChoice choice, const std::vector<PlantedError> &planted) {
    BellPrepStats out;
    Decoder dec(*w.graph, choice);
    WedgeClassifier cls(w);
    size_t na = w.num_aux();
    while (out.trials < trials) {
        FrameBatch fb = run_frames(w.circuit, noise, rng, planted);
        uint64_t shots = std::min<uint64_t>(64, trials - out.trials);
        for (size_t sh = 0; sh < shots; sh++) {
            BitVec f(na);
            for (size_t j = 0; j < na; j++) f.set(j, fb.flip(j, sh));
            BitVec syn(w.checks.size());
            for (size_t c = 0; c < w.checks.size(); c++) {
                bool v = false;
                for (uint32_t j : w.checks[c]) v ^= f.get(j);
                syn.set(c, v);
            }
            BitVec delta = f ^ dec.decode(syn);
            PauliString res = wedge_rec_linear(w, delta);
            for (uint32_t q : w.data) {
                if ((fb.x[q] >> sh) & 1) res.x.flip(q);
                if ((fb.z[q] >> sh) & 1) res.z.flip(q);
            }
            out.logical_failures += !cls.classify(res).bell_preserving();
            bool trivial = true;
            for (const auto &o : w.observables) trivial &= res.commutes(o);
            out.nontrivial_residuals += !trivial;
        }
        out.trials += shots;
    }
    return out;
}

}  // namespace telesim
