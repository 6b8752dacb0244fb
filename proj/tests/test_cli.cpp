// End-to-end checks of the pnpbell binary: output contracts, exit codes,
// manifests, reproducibility. Each invocation is a real subprocess.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef PNPBELL_CLI_PATH
#error "PNPBELL_CLI_PATH must point at the built binary"
#endif

namespace {

using json = nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

int run_counter = 0;

RunResult run(const std::string& args) {
    const std::string tag = std::to_string(++run_counter);
    const std::string out_path = "cli_stdout_" + tag + ".txt";
    const std::string err_path = "cli_stderr_" + tag + ".txt";
    const std::string cmd =
        std::string(PNPBELL_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream is(line);
    std::string f;
    while (std::getline(is, f, ',')) fields.push_back(f);
    return fields;
}

}  // namespace

TEST_CASE("chsh-info prints the serialized game") {
    const RunResult r = run("chsh-info");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["n"] == 2);
    CHECK(doc["m"] == 2);
    CHECK(doc["C"] == "3/4");
    CHECK(doc["sigma"] == "1");
    CHECK(doc["coeffs"].size() == 2);
}

TEST_CASE("lhv-bound on the default game") {
    const RunResult r = run("lhv-bound");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["value"] == "3/4");
    CHECK(doc["value_real"] == doctest::Approx(0.75));
}

TEST_CASE("product-bound prints C_N over 4^N") {
    const RunResult r2 = run("product-bound --n-copies 2");
    REQUIRE(r2.exit_code == 0);
    const json d2 = json::parse(r2.out);
    CHECK(d2["value"] == "10/16");
    CHECK(d2["value_canonical"] == "5/8");
    CHECK(d2["value_real"] == doctest::Approx(0.625));

    const RunResult r1 = run("product-bound --n-copies 1");
    REQUIRE(r1.exit_code == 0);
    CHECK(json::parse(r1.out)["value"] == "3/4");
}

TEST_CASE("kappa values and the sigma override") {
    CHECK(json::parse(run("kappa --n-copies 2").out)["kappa"] == "7/8");
    CHECK(json::parse(run("kappa --n-copies 1").out)["kappa"] == "1/4");
    CHECK(json::parse(run("kappa --n-copies 2 --sigma-override 10/16").out)["kappa"] ==
          "1/8");
}

TEST_CASE("certify emits the contract keys and the N=1 bound") {
    const RunResult r = run("certify --n-copies 1 --kappa 1/4");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["bound"] == "3/4");
    CHECK(doc.contains("kappa"));
    CHECK(doc.contains("iterations"));
    CHECK(doc.contains("support_size"));
    CHECK(doc["pricing_sound"] == true);
}

TEST_CASE("polytope lemma 2 passes by enumeration") {
    const RunResult r = run("polytope --lemma 2 --n-copies 2");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["num_subsets"] == 256);
    CHECK(doc["bound"] == "1/2");
    CHECK(doc["pass"] == true);
}

TEST_CASE("tradeoff CSV matches the analytic curve") {
    const RunResult r = run("tradeoff --q-grid 11");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 12);
    CHECK(lines[0] == "q,Q,A_analytic,A_computed,abs_error");
    double worst = 0;
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto f = fields_of(lines[i]);
        REQUIRE(f.size() == 5);
        worst = std::max(worst, std::stod(f[4]));
    }
    CHECK(worst < 1e-7);
    const auto first = fields_of(lines[1]);
    CHECK(std::stod(first[1]) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("eta-crit rows sit on the small-N plateau") {
    const RunResult r = run("eta-crit --max-n 4");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "N,eta_crit,q_opt,boundary_flag");
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto f = fields_of(lines[i]);
        REQUIRE(f.size() == 4);
        CHECK(std::stoi(f[0]) == static_cast<int>(i));
        CHECK(std::abs(std::stod(f[1]) - 2.0 / 3.0) < 1e-3);
        CHECK(f[3] == "1");
    }
}

TEST_CASE("visibility CSV has the contract header") {
    const RunResult r = run("visibility --max-n 2 --eta 0.75");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "N,v_min,q_opt,attainable");
    CHECK(std::stod(fields_of(lines[1])[1]) == doctest::Approx(0.98871893).epsilon(1e-6));
}

TEST_CASE("fig2 with zero penalty reduces to eta-crit") {
    const RunResult r = run("fig2 --max-n 1 --visibilities 1 --epsilon 0");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "v,N,eta,q_opt,boundary_flag,attainable");
    const auto f = fields_of(lines[1]);
    CHECK(std::stod(f[2]) == doctest::Approx(0.666677758658).epsilon(1e-8));
    CHECK(f[5] == "1");
}

TEST_CASE("simulate is reproducible by seed and the manifest digest matches") {
    const std::string args =
        "simulate --q 0.9 --n-copies 1 --trials 5000 --seed 42 --manifest cli_man.json";
    const RunResult a = run(args);
    const RunResult b = run(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const RunResult c = run("simulate --q 0.9 --n-copies 1 --trials 5000 --seed 43");
    CHECK(c.out != a.out);

    const json man = json::parse(slurp("cli_man.json"));
    std::remove("cli_man.json");
    CHECK(man["subcommand"] == "simulate");
    CHECK(man["version"] == "1.0.0");
    CHECK(man["seed"] == 42);
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(b.out)));
    CHECK(man["output"]["digest_fnv1a64"] == std::string(digest));
    CHECK(man["output"]["bytes"] == b.out.size());

    const json doc = json::parse(a.out);
    CHECK(doc["pnp_estimate"].is_number());
    CHECK(doc["expected"]["Q"].is_number());
}

TEST_CASE("simulate writes setting counts that sum to trials") {
    const RunResult r = run(
        "simulate --q 1 --n-copies 2 --trials 4000 --seed 3 --dump-counts cli_counts.csv");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(slurp("cli_counts.csv"));
    std::remove("cli_counts.csv");
    REQUIRE(lines.size() == 17);
    CHECK(lines[0] == "x,y,count");
    uint64_t total = 0;
    for (size_t i = 1; i < lines.size(); ++i) total += std::stoull(fields_of(lines[i])[2]);
    CHECK(total == 4000);
}

TEST_CASE("penalty-probe emits one penalty per repeat") {
    const RunResult r = run("penalty-probe --q 0.8 --n-copies 2 --trials 400 --repeats 3 --seed 9");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc["penalties"].size() == 3);
    CHECK(doc["mean"].get<double>() > 0);
    CHECK(doc["min"].get<double>() <= doc["max"].get<double>());
}

TEST_CASE("exit codes follow the usage/failure split") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("no-such-command").exit_code == 2);
    CHECK(run("simulate --eta 1.5").exit_code == 2);
    CHECK(run("product-bound --n-copies 9").exit_code == 2);
    CHECK(run("lhv-bound --expr does_not_exist.json").exit_code == 2);
    CHECK(run("kappa --sigma-override garbage").exit_code == 2);
    const RunResult bad_out = run("product-bound --out /no_such_dir/x.json");
    CHECK(bad_out.exit_code == 1);
    CHECK(bad_out.err.find("error") != std::string::npos);
}

TEST_CASE("out file carries the payload and stderr stays manifest-only") {
    const RunResult r = run("kappa --n-copies 2 --out cli_payload.json");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    const json doc = json::parse(slurp("cli_payload.json"));
    std::remove("cli_payload.json");
    CHECK(doc["kappa"] == "7/8");
    const json man = json::parse(r.err);
    CHECK(man["output"]["destination"] == "cli_payload.json");
}
