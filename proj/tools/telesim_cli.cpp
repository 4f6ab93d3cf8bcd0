#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "telesim/circuit_dag.hpp"
#include "telesim/frame_sim.hpp"
#include "telesim/geometry.hpp"
#include "telesim/nonlocal_games.hpp"
#include "telesim/restrictions.hpp"
#include "telesim/telep_relation.hpp"
#include "telesim/uext.hpp"

#ifndef TELESIM_VERSION
#define TELESIM_VERSION "dev"
#endif

using namespace telesim;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0, kAssertFailed = 1, kConfigError = 2;
constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string &s, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        auto b = cur.find_first_not_of(" \t"), e = cur.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

double parse_double(const std::string &s, const char *what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception &) {
        throw ConfigError(std::string("bad ") + what + ": " + s);
    }
}

// Accepts "100000" and "1e5".
uint64_t parse_count(const std::string &s, const char *what) {
    double v = parse_double(s, what);
    if (v < 0 || v != std::floor(v) || v > 1e15) throw ConfigError(std::string("bad ") + what + ": " + s);
    return uint64_t(v);
}

std::vector<size_t> parse_sizes(const std::string &s, const char *what) {
    std::vector<size_t> out;
    for (const auto &t : split(s)) out.push_back(size_t(parse_count(t, what)));
    if (out.empty()) throw ConfigError(std::string("empty ") + what);
    return out;
}

// "a,b,c" or "lo..hi" (log-spaced, `steps` points, endpoints included).
std::vector<double> parse_grid(const std::string &s, size_t steps) {
    auto dots = s.find("..");
    if (dots == std::string::npos) {
        std::vector<double> out;
        for (const auto &t : split(s)) out.push_back(parse_double(t, "p"));
        if (out.empty()) throw ConfigError("empty p grid");
        return out;
    }
    double lo = parse_double(s.substr(0, dots), "p"), hi = parse_double(s.substr(dots + 2), "p");
    if (!(lo > 0) || !(hi >= lo) || steps == 0) throw ConfigError("bad p range: " + s);
    if (steps == 1 || lo == hi) return {lo};
    std::vector<double> out;
    for (size_t i = 0; i < steps; i++) out.push_back(lo * std::pow(hi / lo, double(i) / double(steps - 1)));
    out.back() = hi;
    return out;
}

CliffordTuple parse_cliffords(const std::string &s) {
    CliffordTuple c;
    try {
        for (const auto &t : split(s)) c.push_back(parse_clifford(t));
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    if (c.empty()) throw ConfigError("no Cliffords given");
    return c;
}

PauliTuple parse_paulis(const std::string &s) {
    PauliTuple p;
    try {
        for (const auto &t : split(s)) {
            if (t.size() != 1) throw std::invalid_argument("Pauli tokens are single letters: " + t);
            p.push_back(pauli_from_char(t[0]));
        }
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    return p;
}

std::string paulis_str(const PauliTuple &p) {
    std::string s;
    for (Pauli x : p) s += pauli_char(x);
    return s;
}

DecoderChoice parse_decoder(const std::string &s) {
    DecoderChoice d;
    if (s == "matching") d.kind = DecoderKind::Matching;
    else if (s == "union-find" || s == "uf") d.kind = DecoderKind::UnionFind;
    else if (s == "exhaustive") d.kind = DecoderKind::Exhaustive;
    else throw ConfigError("unknown decoder: " + s);
    return d;
}

size_t thread_count() {
    const char *env = std::getenv("TELESIM_THREADS");
    if (!env || !*env) return 1;
    try {
        long v = std::stol(env);
        if (v < 1) throw std::invalid_argument(env);
        return size_t(v);
    } catch (const std::exception &) {
        throw ConfigError(std::string("TELESIM_THREADS must be a positive integer, got ") + env);
    }
}

// Runs fn(i) for i < count on TELESIM_THREADS workers; callers store results by index so the
// output order never depends on scheduling.
void run_cells(size_t count, const std::function<void(size_t)> &fn) {
    size_t workers = std::min(thread_count(), std::max<size_t>(count, 1));
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](size_t w) {
        try {
            for (size_t i = next++; i < count; i = next++) fn(i);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (size_t w = 1; w < workers; w++) pool.emplace_back(work, w);
    work(0);
    for (auto &t : pool) t.join();
    for (auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// Output sink: --output file or stdout.
class Sink {
public:
    explicit Sink(const std::string &path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ConfigError("cannot open output file: " + path);
        }
    }
    std::ostream &out() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(10) << x;
    return s.str();
}

void write_report(const std::string &path, const json &config, const json &results, double seconds) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open report file: " + path);
    json r;
    r["schema_version"] = kSchemaVersion;
    r["version"] = TELESIM_VERSION;
    r["config"] = config;
    r["results"] = results;
    r["wall_seconds"] = seconds;
    f << r.dump(2) << "\n";
}

// Turns a JSON config file into flags placed before the command-line ones, so explicit flags win.
std::vector<std::string> config_args(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (j.value("schema_version", kSchemaVersion) != kSchemaVersion) throw ConfigError("unsupported config schema_version");
    if (!j.contains("subcommand") || !j["subcommand"].is_string()) throw ConfigError("config needs a \"subcommand\" string");
    std::vector<std::string> args{j["subcommand"].get<std::string>()};
    for (auto &[k, v] : j.items()) {
        if (k == "subcommand" || k == "schema_version") continue;
        std::string flag = "--" + k;
        if (v.is_boolean()) {
            if (v.get<bool>()) args.push_back(flag);
        } else if (v.is_array()) {
            std::string joined;
            for (const auto &e : v) joined += (joined.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
            args.push_back(flag);
            args.push_back(joined);
        } else {
            args.push_back(flag);
            args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
    }
    return args;
}

}  // namespace

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        for (size_t i = 0; i < args.size(); i++) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                auto extra = config_args(args[i + 1]);
                args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
                if (!args.empty() && args[0] == extra[0]) args.erase(args.begin());
                args.insert(args.begin(), extra.begin(), extra.end());
                break;
            }
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    CLI::App app{"Gate-teleportation relation simulator"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", TELESIM_VERSION);
    std::string config_unused;
    app.add_option("--config", config_unused, "JSON config file; keys mirror the flags");

    int rc = kOk;
    std::function<void()> action;
    json config;

    // verify
    auto *verify_cmd = app.add_subcommand("verify", "Check (C, P) against the relation");
    std::string v_cliffs, v_paulis;
    size_t v_n = 0;
    bool v_assert = false;
    verify_cmd->add_option("--cliffords", v_cliffs, "Comma-separated Cliffords (I X Y Z H S SDG, 5-bit string, c<k>)")->required();
    verify_cmd->add_option("--paulis", v_paulis, "Comma-separated Paulis")->required();
    verify_cmd->add_option("--n", v_n, "Expected length");
    verify_cmd->add_flag("--assert", v_assert, "Exit 1 unless the pair is valid");
    verify_cmd->callback([&] {
        action = [&] {
            CliffordTuple c = parse_cliffords(v_cliffs);
            PauliTuple p = parse_paulis(v_paulis);
            if (c.size() != p.size()) throw ConfigError("Clifford and Pauli tuples differ in length");
            if (v_n && v_n != c.size()) throw ConfigError("--n does not match the tuple length");
            RelationOutcome o = verify(c, p);
            json j{{"n", c.size()}, {"valid", o.valid}, {"prob", o.prob().str()}, {"prob_value", o.prob().value()}};
            std::cout << j.dump() << "\n";
            if (v_assert && !o.valid) rc = kAssertFailed;
        };
    });

    // sample
    auto *sample_cmd = app.add_subcommand("sample", "Draw outputs of the ideal relation sampler or the circuit");
    std::string s_cliffs, s_method = "ideal", s_output, s_shots = "10";
    uint64_t s_seed = 0;
    sample_cmd->add_option("--cliffords", s_cliffs)->required();
    sample_cmd->add_option("--shots", s_shots);
    sample_cmd->add_option("--seed", s_seed)->required();
    sample_cmd->add_option("--method", s_method)->check(CLI::IsMember({"ideal", "circuit"}));
    sample_cmd->add_option("--output", s_output);
    sample_cmd->callback([&] {
        action = [&] {
            CliffordTuple c = parse_cliffords(s_cliffs);
            uint64_t shots = parse_count(s_shots, "shots");
            if (s_method == "circuit" && c.size() > 4096) throw ConfigError("circuit sampling is limited to n <= 4096");
            Sink sink(s_output);
            sink.out() << "shot,paulis,valid\n";
            Rng rng(derive_seed(s_seed, 0));
            for (uint64_t k = 0; k < shots; k++) {
                PauliTuple z = s_method == "ideal" ? sample_ideal(c, rng) : run_telep_circuit(c, rng);
                sink.out() << k << "," << paulis_str(z) << "," << (verify(c, z).valid ? 1 : 0) << "\n";
            }
        };
    });

    // distribution
    auto *dist_cmd = app.add_subcommand("distribution", "Exact output distribution (n <= 8)");
    std::string d_cliffs;
    bool d_all = false;
    dist_cmd->add_option("--cliffords", d_cliffs)->required();
    dist_cmd->add_flag("--all", d_all, "Include zero-probability outcomes");
    dist_cmd->callback([&] {
        action = [&] {
            CliffordTuple c = parse_cliffords(d_cliffs);
            if (c.size() > kMaxEnumerationN) throw ConfigError("distribution is limited to n <= 8");
            auto probs = full_distribution(c);
            json out = json::array();
            for (uint64_t i = 0; i < probs.size(); i++) {
                if (!d_all && probs[i].num == 0) continue;
                PauliTuple z = pauli_tuple_from_index(i, c.size());
                out.push_back({{"paulis", paulis_str(z)}, {"prob", probs[i].str()}, {"valid", verify(c, z).valid}});
            }
            std::cout << json{{"n", c.size()}, {"outcomes", out}}.dump() << "\n";
        };
    });

    // games
    auto *games_cmd = app.add_subcommand("games", "Magic-square and game G values");
    bool g_brute = false, g_assert = false;
    games_cmd->add_flag("--brute-force", g_brute, "Enumerate all deterministic strategies");
    games_cmd->add_flag("--assert", g_assert, "Exit 1 unless the classical value is 8/9 and the checks hold");
    games_cmd->callback([&] {
        action = [&] {
            json j;
            bool ok = true;
            if (g_brute) {
                Fraction v = magic_square_classical_value();
                j["magic_square_classical_value"] = v.str();
                ok = ok && v == Fraction::make(8, 9);
                MainMSReport ms = check_cor_mainMS();
                j["zero_trace_witness_all_FG"] = ms.holds;
                j["min_zero_pairs"] = ms.min_zero_pairs;
                ok = ok && ms.holds;
                j["game_G_classical_value"] = game_G_classical_value().str();
            }
            int losses = support_losses();
            j["quantum_support_losses"] = losses;
            ok = ok && losses == 0;
            std::cout << j.dump() << "\n";
            if (g_assert && !ok) rc = kAssertFailed;
        };
    });

    // threshold-scan
    auto *scan_cmd = app.add_subcommand("threshold-scan", "End-to-end success over an (n, d, p) grid");
    std::string t_n = "8", t_d = "3", t_p = "1e-4..1e-2", t_trials = "10000", t_decoder = "matching", t_noise = "iid";
    std::string t_output, t_report;
    size_t t_steps = 5;
    uint64_t t_seed = 0;
    bool t_literal = false, t_assert = false;
    scan_cmd->add_option("--n", t_n, "Comma-separated ring sizes (2..16)");
    scan_cmd->add_option("--d", t_d, "Comma-separated odd distances (1..5)");
    scan_cmd->add_option("--p", t_p, "Comma list or lo..hi (log-spaced)");
    scan_cmd->add_option("--p-steps", t_steps, "Points of a lo..hi range");
    scan_cmd->add_option("--trials", t_trials);
    scan_cmd->add_option("--seed", t_seed)->required();
    scan_cmd->add_option("--decoder", t_decoder);
    scan_cmd->add_option("--noise", t_noise)->check(CLI::IsMember({"iid", "clustered"}));
    scan_cmd->add_flag("--literal", t_literal, "Tableau runs instead of the frame pipeline");
    scan_cmd->add_option("--output", t_output);
    scan_cmd->add_option("--report", t_report, "JSON run report");
    scan_cmd->add_flag("--assert", t_assert, "Exit 1 if a rate rises with p beyond the Wilson intervals");
    scan_cmd->callback([&] {
        action = [&] {
            auto ns = parse_sizes(t_n, "n"), ds = parse_sizes(t_d, "d");
            auto ps = parse_grid(t_p, t_steps);
            uint64_t trials = parse_count(t_trials, "trials");
            EndToEndOptions opt{t_noise == "clustered" ? NoiseKind::Clustered : NoiseKind::Iid, parse_decoder(t_decoder),
                                t_literal};
            for (size_t n : ns) {
                if (n < 2 || n > 16) throw ConfigError("n must lie in 2..16");
            }
            for (size_t d : ds) {
                if (d < 1 || d > 5 || d % 2 == 0) throw ConfigError("d must be odd and at most 5");
            }
            for (double p : ps) {
                if (p < 0 || p > 0.5) throw ConfigError("p must lie in [0, 0.5]");
            }
            struct Cell {
                size_t n, d;
                double p;
                uint64_t seed;
                SuccessEstimate est;
            };
            std::vector<Cell> cells;
            for (size_t n : ns) {
                for (size_t d : ds) {
                    for (double p : ps) cells.push_back({n, d, p, derive_seed(t_seed, cells.size()), {}});
                }
            }
            auto t0 = std::chrono::steady_clock::now();
            run_cells(cells.size(), [&](size_t i) {
                Rng rng(cells[i].seed);
                cells[i].est = end_to_end_success(cells[i].n, int(cells[i].d), cells[i].p, trials, rng, opt);
            });
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            Sink sink(t_output);
            sink.out() << "n,d,p,trials,successes,rate,wilson_lo,wilson_hi,seed\n";
            json res = json::array();
            for (const Cell &c : cells) {
                sink.out() << c.n << "," << c.d << "," << fmt(c.p) << "," << c.est.trials << "," << c.est.successes << ","
                           << fmt(c.est.rate) << "," << fmt(c.est.wilson_lo) << "," << fmt(c.est.wilson_hi) << ","
                           << c.seed << "\n";
                res.push_back({{"n", c.n}, {"d", c.d}, {"p", c.p}, {"trials", c.est.trials}, {"successes", c.est.successes},
                               {"seed", c.seed}});
            }
            // Monotone within CI: a later (larger p) cell may not sit above an earlier one.
            bool mono = true;
            for (size_t a = 0; a < cells.size(); a++) {
                for (size_t b = 0; b < cells.size(); b++) {
                    if (cells[a].n == cells[b].n && cells[a].d == cells[b].d && cells[a].p < cells[b].p &&
                        cells[b].est.wilson_lo > cells[a].est.wilson_hi)
                        mono = false;
                }
            }
            config = {{"subcommand", "threshold-scan"}, {"n", ns},           {"d", ds},          {"p", ps},
                      {"trials", trials},               {"seed", t_seed},    {"decoder", t_decoder},
                      {"noise", t_noise},               {"literal", t_literal}};
            write_report(t_report, config, res, secs);
            if (!mono) std::cerr << "rates are not monotone in p within their intervals\n";
            if (t_assert && !mono) rc = kAssertFailed;
        };
    });

    // locality-check
    auto *loc_cmd = app.add_subcommand("locality-check", "Place the ring of wedges in 3D and check locality");
    std::string l_n = "8,16,32", l_d = "3", l_json;
    double l_kappa = 1.5, l_dout = 1.0, l_dr = 1.0;
    size_t l_occ = 40;
    bool l_assert = false;
    loc_cmd->add_option("--n", l_n);
    loc_cmd->add_option("--d", l_d);
    loc_cmd->add_option("--kappa", l_kappa);
    loc_cmd->add_option("--delta-out", l_dout);
    loc_cmd->add_option("--delta-r", l_dr);
    loc_cmd->add_option("--occupancy", l_occ);
    loc_cmd->add_option("--layout-json", l_json, "Write the layout of the last (n, d) here");
    loc_cmd->add_flag("--assert", l_assert, "Exit 1 if any layout fails");
    loc_cmd->callback([&] {
        action = [&] {
            auto ns = parse_sizes(l_n, "n"), ds = parse_sizes(l_d, "d");
            for (size_t d : ds) {
                if (d < 1 || d > 7 || d % 2 == 0) throw ConfigError("d must be odd and at most 7");
            }
            for (size_t n : ns) {
                if (n < 3 || n > 4096) throw ConfigError("n must lie in 3..4096");
            }
            std::cout << "n,d,sites,edges,max_edge,min_site_distance,max_ball_occupancy,delta_in,delta_in_formula,"
                         "nonlocal_gates,pass\n";
            bool all = true;
            Layout3D last;
            for (size_t n : ns) {
                for (size_t d : ds) {
                    Layout3D l;
                    try {
                        l = colosseum_layout(n, int(d), l_dout, l_dr);
                    } catch (const std::invalid_argument &e) {
                        throw ConfigError(e.what());
                    }
                    LocalityReport r = check_locality(l, l_kappa, l_occ);
                    auto u = build_uext(n, int(d));
                    size_t bad = nonlocal_gates(l, uext_circuit(*u, CliffordTuple(n, Clifford(0)))).size();
                    CliffordTuple all_gates(n);
                    for (size_t j = 0; j < n; j++) all_gates[j] = Clifford(j % GroupTable::kSize);
                    bad += nonlocal_gates(l, uext_circuit(*u, all_gates)).size();
                    bool pass = r.pass && bad == 0;
                    all = all && pass;
                    std::cout << n << "," << d << "," << l.sites.size() << "," << l.edges.size() << ","
                              << fmt(r.max_edge_length) << "," << fmt(r.min_site_distance) << "," << r.max_ball_occupancy
                              << "," << fmt(l.delta_in) << "," << fmt(colosseum_delta_in(n, l_dout, l_dr)) << "," << bad
                              << "," << (pass ? 1 : 0) << "\n";
                    last = std::move(l);
                }
            }
            if (!l_json.empty()) {
                std::ofstream f(l_json);
                if (!f) throw ConfigError("cannot open " + l_json);
                f << last.to_json() << "\n";
            }
            if (l_assert && !all) rc = kAssertFailed;
        };
    });

    // restrictions
    auto *res_cmd = app.add_subcommand("restrictions", "Run the block-restriction process");
    size_t r_n = 64;
    int r_depth = 2;
    double r_s = 200, r_pstar = -1, r_t = -1;
    std::string r_runs = "1000";
    uint64_t r_seed = 0;
    bool r_assert = false;
    res_cmd->add_option("--n", r_n, "Clifford blocks");
    res_cmd->add_option("--size", r_s, "Circuit size s");
    res_cmd->add_option("--depth", r_depth, "Circuit depth d");
    res_cmd->add_option("--p-star", r_pstar, "Override p_*");
    res_cmd->add_option("--t", r_t, "Override t");
    res_cmd->add_option("--runs", r_runs);
    res_cmd->add_option("--seed", r_seed)->required();
    res_cmd->add_flag("--assert", r_assert, "Exit 1 on any invalid block restriction or bound violation");
    res_cmd->callback([&] {
        action = [&] {
            if (r_n < 1 || r_n > (1u << 20)) throw ConfigError("n must lie in 1..2^20");
            if (r_depth < 1 || !(r_s > 0)) throw ConfigError("need depth >= 1 and size > 0");
            uint64_t runs = parse_count(r_runs, "runs");
            SwitchingParams sp = switching_params(r_n, r_s, r_depth);
            if (r_pstar >= 0) {
                if (r_pstar > 1) throw ConfigError("p_star must lie in [0, 1]");
                sp.p_star = r_pstar;
            }
            if (r_t >= 0) sp.t = r_t;
            Rng rng(derive_seed(r_seed, 0));
            EOracle oracle = stub_oracle();
            uint64_t valid = 0, bound = 0;
            double sum_rho = 0, sum_xi = 0;
            for (uint64_t k = 0; k < runs; k++) {
                ProcessResult r = block_restriction_process(r_n, sp, oracle, rng);
                valid += to_block(r.xi.to_bits()).block.has_value();
                bound += r.diag.bound_holds;
                sum_rho += double(r.diag.rho_free_blocks);
                sum_xi += double(r.diag.xi_free_blocks);
            }
            double pb = std::pow(sp.p_star, 5), mean = double(r_n) * pb;
            double sigma = runs ? std::sqrt(double(r_n) * pb * (1 - pb) / double(runs)) : 0;
            double emp = runs ? sum_rho / double(runs) : 0;
            json j{{"n", r_n},
                   {"q", sp.q},
                   {"p_star", sp.p_star},
                   {"t", sp.t},
                   {"p_star_lower_bound", sp.p_star_lower_bound},
                   {"size_assumption", sp.size_assumption},
                   {"s_le_2_pow_t_half", sp.s_le_2_pow_t_half},
                   {"oracle", oracle.mode},
                   {"runs", runs},
                   {"block_valid", valid},
                   {"bound_holds", bound},
                   {"mean_free_blocks_rho", emp},
                   {"expected_free_blocks_rho", mean},
                   {"mean_free_blocks_xi", runs ? sum_xi / double(runs) : 0}};
            std::cout << j.dump() << "\n";
            if (!sp.size_assumption) std::cerr << "warning: size assumption ln s <= n^(1/(20d)) does not hold\n";
            bool ok = valid == runs && bound == runs && std::abs(emp - mean) <= 3 * sigma + 1e-12;
            if (r_assert && !ok) rc = kAssertFailed;
        };
    });

    // adversary
    auto *adv_cmd = app.add_subcommand("adversary", "Classical strategy ceiling experiment");
    size_t a_n = 64, a_depth = 2, a_fanin = 2, a_dags = 10;
    std::string a_trials = "10000", a_dag, a_output;
    uint64_t a_seed = 0;
    bool a_assert = false;
    adv_cmd->add_option("--n", a_n, "Clifford inputs");
    adv_cmd->add_option("--depth", a_depth);
    adv_cmd->add_option("--fan-in", a_fanin);
    adv_cmd->add_option("--dags", a_dags, "Random dags to draw");
    adv_cmd->add_option("--dag", a_dag, "JSON dag file instead of random dags");
    adv_cmd->add_option("--trials", a_trials);
    adv_cmd->add_option("--seed", a_seed)->required();
    adv_cmd->add_option("--output", a_output);
    adv_cmd->add_flag("--assert", a_assert, "Exit 1 if a dag with a non-signaling pair beats 80/81 + 3 sigma");
    adv_cmd->callback([&] {
        action = [&] {
            if (a_n < 1 || a_n > 4096) throw ConfigError("n must lie in 1..4096");
            if (a_fanin < 1 || a_fanin > CircuitDag::kMaxFanIn || a_depth < 1 || a_depth > 8)
                throw ConfigError("fan-in must lie in 1..6 and depth in 1..8");
            uint64_t trials = parse_count(a_trials, "trials");
            std::vector<CircuitDag> dags;
            std::vector<uint64_t> seeds;
            if (!a_dag.empty()) {
                std::ifstream f(a_dag);
                if (!f) throw ConfigError("cannot open " + a_dag);
                std::stringstream ss;
                ss << f.rdbuf();
                try {
                    dags.push_back(CircuitDag::from_json(ss.str()));
                } catch (const std::invalid_argument &e) {
                    throw ConfigError(e.what());
                }
                if (dags[0].n_in != kEncBits * a_n || dags[0].n_out() != 2 * a_n)
                    throw ConfigError("dag arity must be 5n inputs and 2n outputs");
                seeds.push_back(derive_seed(a_seed, 0));
            } else {
                for (size_t i = 0; i < a_dags; i++) {
                    seeds.push_back(derive_seed(a_seed, i));
                    Rng g(seeds.back());
                    dags.push_back(random_layered_dag(kEncBits * a_n, 2 * a_n, a_depth, a_fanin, g));
                }
            }
            std::vector<CeilingReport> reps(dags.size());
            run_cells(dags.size(), [&](size_t i) {
                Rng rng(splitmix64(seeds[i]));
                reps[i] = nc0_ceiling_experiment(dags[i], a_n, trials, rng);
            });
            const double bound = 80.0 / 81;
            bool ok = true;
            Sink sink(a_output);
            sink.out() << "dag,seed,depth,has_pair,j,k,trials,successes,rate,wilson_lo,wilson_hi,pair_witnesses,cones_exact\n";
            for (size_t i = 0; i < dags.size(); i++) {
                const CeilingReport &r = reps[i];
                if (r.pair && r.rate > bound + 3 * std::sqrt(bound * (1 - bound) / double(std::max<uint64_t>(r.trials, 1))))
                    ok = false;
                sink.out() << i << "," << seeds[i] << "," << dags[i].depth() << "," << (r.pair ? 1 : 0) << ","
                           << (r.pair ? std::to_string(r.pair->first) : "") << ","
                           << (r.pair ? std::to_string(r.pair->second) : "") << "," << r.trials << "," << r.successes << ","
                           << fmt(r.rate) << "," << fmt(r.wilson_lo) << "," << fmt(r.wilson_hi) << ","
                           << r.pair_failure_witnesses << "," << (r.cones_exact ? 1 : 0) << "\n";
            }
            if (a_assert && !ok) rc = kAssertFailed;
        };
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kConfigError;
    }
    try {
        if (action) action();
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    return rc;
}
