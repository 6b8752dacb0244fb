// pnpbell: one entry point for the penalized N-product Bell toolkit.
// Data goes to stdout (or --out), a reproduction manifest to stderr (or
// --manifest). Exit codes: 0 success, 2 usage error (bad flags, bad ranges,
// caps), 1 computational failure.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pnpbell/bell.hpp"
#include "pnpbell/efficiency.hpp"
#include "pnpbell/lhv.hpp"
#include "pnpbell/parallel.hpp"
#include "pnpbell/pnp.hpp"
#include "pnpbell/polytope.hpp"
#include "pnpbell/quantum.hpp"
#include "pnpbell/rational.hpp"
#include "pnpbell/simulator.hpp"
#include "pnpbell/version.hpp"

using json = nlohmann::ordered_json;
using namespace pnpbell;

namespace {

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Presents r over the denominator 4^N when that is exact (the paper's C_N
// convention, e.g. 10/16 rather than 5/8); canonical form otherwise.
std::string rat_str_4n(const Rat& r, int N) {
    const Int target = pow(Int(4), N);
    const Int den = denominator(r);
    if (target % den == 0) {
        std::ostringstream os;
        os << numerator(r) * (target / den) << "/" << target;
        return os.str();
    }
    return rat_str(r);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) parts.push_back(cur);
    return parts;
}

struct Common {
    std::string out;
    std::string manifest;
    int threads = 0;
    uint64_t seed = 20240801;

    void attach(CLI::App* sub) {
        sub->add_option("--out", out, "write data here instead of stdout");
        sub->add_option("--manifest", manifest, "write the manifest here instead of stderr");
        sub->add_option("--threads", threads, "worker threads (0: all cores)");
        sub->add_option("--seed", seed, "base seed for any randomized step");
    }

    int resolved_threads() const { return threads < 1 ? default_threads() : threads; }
};

// Writes payload and manifest, recording duration and a digest so the output
// can be traced back to its exact invocation.
void emit(const std::string& subcommand, const Common& common, const json& params,
          const std::string& payload,
          const std::chrono::steady_clock::time_point& start) {
    if (common.out.empty()) {
        std::cout << payload;
    } else {
        std::ofstream f(common.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file " + common.out);
        f << payload;
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload)));
    json manifest;
    manifest["subcommand"] = subcommand;
    manifest["version"] = kVersion;
    manifest["parameters"] = params;
    manifest["seed"] = common.seed;
    manifest["threads"] = common.resolved_threads();
    manifest["duration_ms"] = ms;
    manifest["output"] = {{"destination", common.out.empty() ? "stdout" : common.out},
                          {"bytes", payload.size()},
                          {"digest_fnv1a64", std::string(digest)}};
    const std::string text = manifest.dump(2) + "\n";
    if (common.manifest.empty()) {
        std::cerr << text;
    } else {
        std::ofstream f(common.manifest, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open manifest file " + common.manifest);
        f << text;
    }
}

json witness_json(const DeterministicStrategy& s) {
    return json{{"party", s.party == Party::alice ? "alice" : "bob"}, {"table", s.table}};
}

BellExpression load_expression(const std::string& path) {
    if (path.empty()) return make_chsh();
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read expression file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return deserialize_bell(buf.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"penalized N-product Bell inequalities: bounds, curves, simulation"};
    app.require_subcommand(1);

    try {
        // ---- chsh-info ----------------------------------------------------
        {
            auto* sub = app.add_subcommand("chsh-info", "the base game as a JSON document");
            auto common = std::make_shared<Common>();
            common->attach(sub);
            sub->callback([common]() {
                const auto t0 = std::chrono::steady_clock::now();
                emit("chsh-info", *common, json::object(), serialize_bell(make_chsh()) + "\n",
                     t0);
            });
        }

        // ---- lhv-bound ----------------------------------------------------
        {
            auto* sub = app.add_subcommand("lhv-bound", "exact LHV bound of one expression");
            auto common = std::make_shared<Common>();
            auto expr_path = std::make_shared<std::string>();
            common->attach(sub);
            sub->add_option("--expr", *expr_path, "JSON expression file (default: chsh)");
            sub->callback([common, expr_path]() {
                const auto t0 = std::chrono::steady_clock::now();
                const BoundResult r = lhv_bound(load_expression(*expr_path));
                json out;
                out["value"] = rat_str(r.value);
                out["value_real"] = rat_double(r.value);
                out["strategies_scanned"] = r.strategies_scanned;
                out["witness"] = {{"alice", witness_json(r.witness_alice)},
                                  {"bob", witness_json(r.witness_bob)}};
                emit("lhv-bound", *common, json{{"expr", *expr_path}}, out.dump(2) + "\n", t0);
            });
        }

        // ---- product-bound ------------------------------------------------
        {
            auto* sub = app.add_subcommand("product-bound",
                                           "exact N-copy parallel LHV bound C_N of chsh");
            auto common = std::make_shared<Common>();
            auto n_copies = std::make_shared<int>(2);
            auto prune = std::make_shared<bool>(true);
            common->attach(sub);
            sub->add_option("--n-copies", *n_copies, "number of parallel copies")
                ->check(CLI::Range(1, 3));
            sub->add_flag("--prune-symmetry,!--no-prune-symmetry", *prune,
                          "halve the scan via the global outcome flip");
            sub->callback([common, n_copies, prune]() {
                const auto t0 = std::chrono::steady_clock::now();
                ProductBoundOptions opts;
                opts.prune_symmetry = *prune;
                opts.threads = common->resolved_threads();
                const BoundResult r = product_lhv_bound(make_chsh(), *n_copies, opts);
                json out;
                out["n_copies"] = *n_copies;
                out["value"] = rat_str_4n(r.value, *n_copies);
                out["value_canonical"] = rat_str(r.value);
                out["value_real"] = rat_double(r.value);
                out["scanned"] = r.strategies_scanned;
                out["symmetry_pruned"] = r.symmetry_pruned;
                out["witness"] = {{"alice", witness_json(r.witness_alice)},
                                  {"bob", witness_json(r.witness_bob)}};
                emit("product-bound", *common,
                     json{{"n_copies", *n_copies}, {"prune_symmetry", *prune}},
                     out.dump(2) + "\n", t0);
            });
        }

        // ---- kappa ----------------------------------------------------------
        {
            auto* sub = app.add_subcommand("kappa", "sufficient penalty constant of Result 1");
            auto common = std::make_shared<Common>();
            auto n_copies = std::make_shared<int>(2);
            auto sigma = std::make_shared<std::string>();
            common->attach(sub);
            sub->add_option("--n-copies", *n_copies, "number of parallel copies")
                ->check(CLI::Range(1, 16));
            sub->add_option("--sigma-override", *sigma,
                            "tighter product bound Sigma_N as p/q (default: 1 per copy)");
            sub->callback([common, n_copies, sigma]() {
                const auto t0 = std::chrono::steady_clock::now();
                std::optional<Rat> override_value;
                if (!sigma->empty()) override_value = parse_rat(*sigma);
                const Rat k = kappa_sufficient(make_chsh(), *n_copies, override_value);
                json out;
                out["n_copies"] = *n_copies;
                out["kappa"] = rat_str(k);
                out["kappa_real"] = rat_double(k);
                out["sigma_override"] = sigma->empty() ? json(nullptr) : json(*sigma);
                emit("kappa", *common,
                     json{{"n_copies", *n_copies}, {"sigma_override", *sigma}},
                     out.dump(2) + "\n", t0);
            });
        }

        // ---- certify --------------------------------------------------------
        {
            auto* sub = app.add_subcommand(
                "certify", "exact LP bound of the penalized expression over LHV mixtures");
            auto common = std::make_shared<Common>();
            auto n_copies = std::make_shared<int>(2);
            auto kappa_s = std::make_shared<std::string>("7/8");
            auto grid_s = std::make_shared<std::string>();
            common->attach(sub);
            sub->add_option("--n-copies", *n_copies, "number of parallel copies")
                ->check(CLI::Range(1, 2));
            sub->add_option("--kappa", *kappa_s, "penalty constant as p/q");
            sub->add_option("--kappa-grid", *grid_s,
                            "comma-separated kappas; certifies each and checks monotonicity");
            sub->callback([common, n_copies, kappa_s, grid_s]() {
                const auto t0 = std::chrono::steady_clock::now();
                CertifyOptions opts;
                opts.seed = common->seed;
                json out;
                out["n_copies"] = *n_copies;
                if (grid_s->empty()) {
                    const Rat kappa = parse_rat(*kappa_s);
                    const CertifyResult r =
                        certify_pnp_lhv_bound(make_chsh(), *n_copies, kappa, opts);
                    out["kappa"] = rat_str(kappa);
                    out["bound"] = rat_str(r.bound);
                    out["bound_over_4n"] = rat_str_4n(r.bound, *n_copies);
                    out["bound_real"] = rat_double(r.bound);
                    out["iterations"] = r.rounds;
                    out["support_size"] = r.support.size();
                    out["columns"] = r.columns;
                    out["pivots"] = r.pivots;
                    out["pricing_sound"] = r.pricing_sound;
                } else {
                    std::vector<Rat> kappas;
                    for (const std::string& part : split_commas(*grid_s))
                        kappas.push_back(parse_rat(part));
                    const auto points = certify_scan(make_chsh(), *n_copies, kappas, opts);
                    bool nonincreasing = true;
                    json rows = json::array();
                    for (size_t i = 0; i < points.size(); ++i) {
                        if (i > 0 && points[i].second > points[i - 1].second)
                            nonincreasing = false;
                        rows.push_back({{"kappa", rat_str(points[i].first)},
                                        {"bound", rat_str(points[i].second)},
                                        {"bound_real", rat_double(points[i].second)}});
                    }
                    out["points"] = rows;
                    out["nonincreasing"] = nonincreasing;
                }
                emit("certify", *common,
                     json{{"n_copies", *n_copies},
                          {"kappa", *kappa_s},
                          {"kappa_grid", *grid_s}},
                     out.dump(2) + "\n", t0);
            });
        }

        // ---- polytope -------------------------------------------------------
        {
            auto* sub = app.add_subcommand(
                "polytope", "marginal-polytope lemma checks by exact enumeration");
            auto common = std::make_shared<Common>();
            auto lemma = std::make_shared<int>(2);
            auto n_copies = std::make_shared<int>(2);
            auto trials = std::make_shared<int>(100);
            common->attach(sub);
            sub->add_option("--lemma", *lemma, "which lemma to check")->check(CLI::Range(1, 2));
            sub->add_option("--n-copies", *n_copies, "number of parallel copies")
                ->check(CLI::Range(1, 2));
            sub->add_option("--trials", *trials, "random objectives for the lemma 1 sweep")
                ->check(CLI::Range(1, 100000));
            sub->callback([common, lemma, n_copies, trials]() {
                const auto t0 = std::chrono::steady_clock::now();
                json out;
                out["lemma"] = *lemma;
                out["n_copies"] = *n_copies;
                if (*lemma == 2) {
                    const SubsetScanResult s = scan_marginal_subsets(*n_copies, 2);
                    const Rat bound(1, ipow(2, *n_copies - 1));
                    out["num_subsets"] = s.subsets;
                    out["distinct_geometries"] = s.distinct_geometries;
                    out["min_nonzero_marginal"] = rat_str(s.overall_min_nonzero);
                    out["bound"] = rat_str(bound);
                    out["pass"] = s.overall_min_nonzero >= bound;
                } else {
                    CertifyOptions opts;
                    opts.seed = common->seed;
                    const DecompositionReport report =
                        check_lp_vs_vertex_products(*n_copies, 2, *trials, common->seed, opts);
                    json rows = json::array();
                    for (const DecompositionTrial& t : report.trials)
                        rows.push_back({{"lp", rat_str(t.lp_value)},
                                        {"product", rat_str(t.product_value)},
                                        {"equal", t.equal}});
                    out["trials"] = *trials;
                    out["violations"] = report.violations;
                    out["max_gap"] = rat_str(report.max_gap);
                    out["pass"] = report.violations == 0;
                    out["per_trial"] = rows;
                }
                emit("polytope", *common,
                     json{{"lemma", *lemma}, {"n_copies", *n_copies}, {"trials", *trials}},
                     out.dump(2) + "\n", t0);
            });
        }

        // ---- tradeoff -------------------------------------------------------
        {
            auto* sub = app.add_subcommand(
                "tradeoff", "assignment-term tradeoff along the partially entangled family");
            auto common = std::make_shared<Common>();
            auto grid = std::make_shared<int>(101);
            common->attach(sub);
            sub->add_option("--q-grid", *grid, "number of q samples in [0,1]")
                ->check(CLI::Range(2, 100001));
            sub->callback([common, grid]() {
                const auto t0 = std::chrono::steady_clock::now();
                std::ostringstream csv;
                csv << "q,Q,A_analytic,A_computed,abs_error\n";
                for (int i = 0; i < *grid; ++i) {
                    const double q = static_cast<double>(i) / (*grid - 1);
                    const double Q = closed_form_Q(q);
                    const double analytic = tradeoff_A_of_Q(Q);
                    const QuantumModel m = make_quantum_model(q);
                    csv << fmt12(q) << "," << fmt12(Q) << "," << fmt12(analytic) << ","
                        << fmt12(m.A) << "," << fmt12(std::abs(analytic - m.A)) << "\n";
                }
                emit("tradeoff", *common, json{{"q_grid", *grid}}, csv.str(), t0);
            });
        }

        // ---- eta-crit -------------------------------------------------------
        {
            auto* sub = app.add_subcommand("eta-crit",
                                           "critical detection efficiency per copy count");
            auto common = std::make_shared<Common>();
            auto max_n = std::make_shared<int>(14);
            common->attach(sub);
            sub->add_option("--max-n", *max_n, "largest copy count")->check(CLI::Range(1, 40));
            sub->callback([common, max_n]() {
                const auto t0 = std::chrono::steady_clock::now();
                std::vector<CurvePoint> rows(static_cast<size_t>(*max_n));
                parallel_chunks(static_cast<uint64_t>(*max_n), common->resolved_threads(),
                                [&rows](int, uint64_t begin, uint64_t end) {
                                    for (uint64_t i = begin; i < end; ++i)
                                        rows[i] = critical_eta(static_cast<int>(i) + 1);
                                });
                std::ostringstream csv;
                csv << "N,eta_crit,q_opt,boundary_flag\n";
                for (const CurvePoint& p : rows)
                    csv << p.N << "," << fmt12(p.value) << "," << fmt12(p.q_opt) << ","
                        << (p.boundary ? 1 : 0) << "\n";
                emit("eta-crit", *common, json{{"max_n", *max_n}}, csv.str(), t0);
            });
        }

        // ---- visibility -----------------------------------------------------
        {
            auto* sub = app.add_subcommand(
                "visibility", "visibility threshold per copy count at fixed efficiency");
            auto common = std::make_shared<Common>();
            auto max_n = std::make_shared<int>(14);
            auto eta = std::make_shared<double>(0.75);
            common->attach(sub);
            sub->add_option("--max-n", *max_n, "largest copy count")->check(CLI::Range(1, 40));
            sub->add_option("--eta", *eta, "detection efficiency")
                ->check(CLI::Range(0.0, 1.0));
            sub->callback([common, max_n, eta]() {
                const auto t0 = std::chrono::steady_clock::now();
                std::vector<CurvePoint> rows(static_cast<size_t>(*max_n));
                parallel_chunks(static_cast<uint64_t>(*max_n), common->resolved_threads(),
                                [&rows, eta](int, uint64_t begin, uint64_t end) {
                                    for (uint64_t i = begin; i < end; ++i)
                                        rows[i] =
                                            min_visibility(*eta, static_cast<int>(i) + 1);
                                });
                std::ostringstream csv;
                csv << "N,v_min,q_opt,attainable\n";
                for (const CurvePoint& p : rows)
                    csv << p.N << "," << fmt12(p.value) << "," << fmt12(p.q_opt) << ","
                        << (p.attainable ? 1 : 0) << "\n";
                emit("visibility", *common, json{{"max_n", *max_n}, {"eta", *eta}}, csv.str(),
                     t0);
            });
        }

        // ---- fig2 -----------------------------------------------------------
        {
            auto* sub = app.add_subcommand(
                "fig2", "penalized efficiency thresholds for a set of visibilities");
            auto common = std::make_shared<Common>();
            auto max_n = std::make_shared<int>(14);
            auto epsilon = std::make_shared<double>(1e-5);
            auto vis_s = std::make_shared<std::string>("1,0.99,0.97,0.95,0.9,0.85");
            common->attach(sub);
            sub->add_option("--max-n", *max_n, "largest copy count")->check(CLI::Range(1, 40));
            sub->add_option("--epsilon", *epsilon, "assumed residual penalty total")
                ->check(CLI::Range(0.0, 1.0));
            sub->add_option("--visibilities", *vis_s, "comma-separated visibility values");
            sub->callback([common, max_n, epsilon, vis_s]() {
                const auto t0 = std::chrono::steady_clock::now();
                std::vector<double> vs;
                for (const std::string& part : split_commas(*vis_s)) {
                    const double v = std::stod(part);
                    if (v < 0 || v > 1)
                        throw std::invalid_argument("visibility values must be in [0,1]");
                    vs.push_back(v);
                }
                const size_t total = vs.size() * static_cast<size_t>(*max_n);
                std::vector<CurvePoint> rows(total);
                parallel_chunks(total, common->resolved_threads(),
                                [&](int, uint64_t begin, uint64_t end) {
                                    for (uint64_t i = begin; i < end; ++i) {
                                        const size_t vi = i / static_cast<size_t>(*max_n);
                                        const int N =
                                            static_cast<int>(i % static_cast<size_t>(*max_n)) +
                                            1;
                                        rows[i] = eta_with_penalty_and_visibility(
                                            vs[vi], N, *epsilon);
                                    }
                                });
                std::ostringstream csv;
                csv << "v,N,eta,q_opt,boundary_flag,attainable\n";
                for (size_t i = 0; i < total; ++i) {
                    const CurvePoint& p = rows[i];
                    csv << fmt12(vs[i / static_cast<size_t>(*max_n)]) << "," << p.N << ","
                        << fmt12(p.value) << "," << fmt12(p.q_opt) << ","
                        << (p.boundary ? 1 : 0) << "," << (p.attainable ? 1 : 0) << "\n";
                }
                emit("fig2", *common,
                     json{{"max_n", *max_n},
                          {"epsilon", *epsilon},
                          {"visibilities", *vis_s}},
                     csv.str(), t0);
            });
        }

        // ---- simulate -------------------------------------------------------
        {
            auto* sub = app.add_subcommand("simulate",
                                           "finite-statistics run of the lossy experiment");
            auto common = std::make_shared<Common>();
            auto q = std::make_shared<double>(1.0);
            auto eta = std::make_shared<double>(1.0);
            auto v = std::make_shared<double>(1.0);
            auto n_copies = std::make_shared<int>(1);
            auto trials = std::make_shared<uint64_t>(100000);
            auto kappa_s = std::make_shared<std::string>();
            auto dump = std::make_shared<std::string>();
            common->attach(sub);
            sub->add_option("--q", *q, "entanglement parameter")->check(CLI::Range(0.0, 1.0));
            sub->add_option("--eta", *eta, "detection efficiency")
                ->check(CLI::Range(0.0, 1.0));
            sub->add_option("--v", *v, "visibility")->check(CLI::Range(0.0, 1.0));
            sub->add_option("--n-copies", *n_copies, "number of parallel copies")
                ->check(CLI::Range(1, 3));
            sub->add_option("--trials", *trials, "trial count");
            sub->add_option("--kappa", *kappa_s,
                            "penalty constant as p/q (default: the sufficient one)");
            sub->add_option("--dump-counts", *dump, "also write per-setting counts CSV here");
            sub->callback([common, q, eta, v, n_copies, trials, kappa_s, dump]() {
                const auto t0 = std::chrono::steady_clock::now();
                const Rat kappa = kappa_s->empty()
                                      ? kappa_sufficient(make_chsh(), *n_copies)
                                      : parse_rat(*kappa_s);
                ExperimentConfig config;
                config.strategy = make_quantum_model(*q);
                config.N = *n_copies;
                config.eta = *eta;
                config.v = *v;
                config.trials = *trials;
                config.seed = common->seed;
                config.threads = common->resolved_threads();
                const ExperimentResult res = run_experiment(config, kappa);
                const LossyExpectation expect =
                    lossy_expectation(config.strategy, *v, *eta, *n_copies);
                json out;
                out["q"] = *q;
                out["n_copies"] = *n_copies;
                out["eta"] = *eta;
                out["v"] = *v;
                out["trials"] = *trials;
                out["seed"] = common->seed;
                out["kappa"] = rat_str(kappa);
                out["kappa_real"] = rat_double(kappa);
                out["product_value_estimate"] = res.product_value_estimate;
                out["std_error"] = res.std_error;
                out["penalty_a"] = res.penalty_a;
                out["penalty_b"] = res.penalty_b;
                out["pnp_estimate"] = res.pnp_estimate;
                out["wins"] = res.wins;
                out["unobserved_settings"] = res.unobserved_settings;
                out["coverage_warning"] = res.coverage_warning;
                out["expected"] = {{"Q", expect.Q},
                                   {"A", expect.A},
                                   {"B", expect.B},
                                   {"value", expect.value}};
                if (!dump->empty()) {
                    std::ofstream f(*dump, std::ios::binary);
                    if (!f)
                        throw std::runtime_error("cannot open counts file " + *dump);
                    f << "x,y,count\n";
                    const int S = ipow(2, *n_copies);
                    for (int x = 0; x < S; ++x)
                        for (int yy = 0; yy < S; ++yy)
                            f << x << "," << yy << ","
                              << res.setting_counts[static_cast<size_t>(x) * S + yy] << "\n";
                }
                emit("simulate", *common,
                     json{{"q", *q},
                          {"eta", *eta},
                          {"v", *v},
                          {"n_copies", *n_copies},
                          {"trials", *trials},
                          {"kappa", kappa_s->empty() ? rat_str(kappa) : *kappa_s},
                          {"dump_counts", *dump}},
                     out.dump(2) + "\n", t0);
            });
        }

        // ---- penalty-probe ----------------------------------------------------
        {
            auto* sub = app.add_subcommand(
                "penalty-probe", "spread of the empirical penalty of a product strategy");
            auto common = std::make_shared<Common>();
            auto q = std::make_shared<double>(0.8);
            auto n_copies = std::make_shared<int>(2);
            auto trials = std::make_shared<uint64_t>(1000);
            auto repeats = std::make_shared<int>(6);
            common->attach(sub);
            sub->add_option("--q", *q, "entanglement parameter")->check(CLI::Range(0.0, 1.0));
            sub->add_option("--n-copies", *n_copies, "number of parallel copies")
                ->check(CLI::Range(1, 3));
            sub->add_option("--trials", *trials, "trials per repeat");
            sub->add_option("--repeats", *repeats, "independent repeats")
                ->check(CLI::Range(0, 1000));
            sub->callback([common, q, n_copies, trials, repeats]() {
                const auto t0 = std::chrono::steady_clock::now();
                ExperimentConfig config;
                config.strategy = make_quantum_model(*q);
                config.N = *n_copies;
                config.trials = *trials;
                config.seed = common->seed;
                config.threads = common->resolved_threads();
                const PenaltyProbeStats stats = penalty_bias_probe(config, *repeats);
                json out;
                out["q"] = *q;
                out["n_copies"] = *n_copies;
                out["trials"] = *trials;
                out["repeats"] = *repeats;
                out["mean"] = stats.mean;
                out["stddev"] = stats.stddev;
                out["min"] = stats.min;
                out["max"] = stats.max;
                out["penalties"] = stats.penalties;
                emit("penalty-probe", *common,
                     json{{"q", *q},
                          {"n_copies", *n_copies},
                          {"trials", *trials},
                          {"repeats", *repeats}},
                     out.dump(2) + "\n", t0);
            });
        }

        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
