#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "output.hpp"
#include "runner.hpp"

using namespace su2dual;
using namespace su2dual::cli;
namespace fs = std::filesystem;

namespace {

int error_line(const std::string& text) {
    try {
        parse_config(text, "t.toml");
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Table1Ladder ladder(SweepMode m, std::vector<double> rel) {
    Table1Ladder l;
    l.mode = m;
    for (std::size_t i = 0; i < rel.size(); ++i) {
        l.lmax.push_back(static_cast<int>(i) + 1);
        l.energy.push_back(1.0 + rel[i]);
        l.errors.emplace_back();
    }
    l.rel_err = std::move(rel);
    return l;
}

Table1Beta row(double beta, std::vector<double> electric, std::vector<double> ansatz, std::vector<double> var) {
    Table1Beta r;
    r.beta = beta;
    r.reference = 1.0;
    r.ladders = {ladder(SweepMode::ElectricBaseline, std::move(electric)), ladder(SweepMode::Ansatz, std::move(ansatz)),
                 ladder(SweepMode::Variational, std::move(var))};
    return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults validate") {
    CHECK_NOTHROW(default_config(Task::Sweep).validate());
    CHECK_NOTHROW(default_config(Task::Table1).validate());
    const auto b = default_config(Task::Sweep).betas();
    CHECK(b.size() == 24);
    CHECK(b.front() == 0.01);
    CHECK(b.back() == 100.0);
}

TEST_CASE("a full configuration parses") {
    const auto c = parse_config(R"(schema = 1
task = "table1"
seed = 7
workers = 2
output = "o"

[beta]
values = [0.5, 2.0]

[sweep]
modes = ["variational"]
truncations = [[2, 2, 2, 1, 1], [3, 3, 3, 2, 2]]

[table1]
betas = [1.0]
reference_lmax = 4
max_lmax = 3
threshold = 0.02

[optimizer]
max_cycles = 2
restarts = 1

[solver]
dense_threshold = 10

[plots]
svg = false
)",
                                "t.toml");
    CHECK(c.task == Task::Table1);
    CHECK(c.seed == 7);
    CHECK(c.workers == 2);
    CHECK(c.output_dir == "o");
    CHECK(c.betas() == std::vector<double>{0.5, 2.0});
    CHECK(c.modes == std::vector<SweepMode>{SweepMode::Variational});
    REQUIRE(c.truncations.size() == 2);
    CHECK(c.truncations[1] == Truncation{3, 3, 3, 2, 2});
    CHECK(c.table1_betas == std::vector<double>{1.0});
    CHECK(c.reference_lmax == 4);
    CHECK(c.max_lmax == 3);
    CHECK(c.threshold == 0.02);
    CHECK(c.optimizer.max_cycles == 2);
    CHECK(c.solver.dense_threshold == 10);
    CHECK_FALSE(c.svg);
}

TEST_CASE("errors carry the offending line") {
    CHECK(error_line("task = \"sweep\"\n") == 1);                      // schema missing
    CHECK(error_line("schema = 2\n") == 1);
    CHECK(error_line("schema = 1\n\n[beta]\nmin = \"x\"\n") == 4);
    CHECK(error_line("schema = 1\n[beta]\nmin = 1\nmax = 2\nfoo = 3\n") == 5);
    CHECK(error_line("schema = 1\n[sweep]\nmodes = [\"magnetic\"]\n") == 3);
    CHECK(error_line("schema = 1\ntask = \"sweep\"\n[sweep]\nlmax = [0]\n") == 4);
    CHECK(error_line("schema = 1\n[beta\n") == 2);  // syntax error
    try {
        parse_config("schema = 1\nbogus = 1\n", "cfg.toml");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind("cfg.toml:2:", 0) == 0);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/file.toml"), ConfigError);
}

TEST_CASE("overrides: flags beat the environment, which beats the file") {
    RunConfig c = parse_config("schema = 1\ncache_dir = \"file\"\nseed = 3\n", "t.toml");
    ::unsetenv("SU2DUAL_CACHE_DIR");
    RunConfig a = c;
    apply_overrides(a, {});
    CHECK(a.cache_dir == "file");
    CHECK(a.optimizer.seed == 3);

    ::setenv("SU2DUAL_CACHE_DIR", "env", 1);
    RunConfig b = c;
    apply_overrides(b, {});
    CHECK(b.cache_dir == "env");

    Overrides o;
    o.cache_dir = "flag";
    o.seed = 11;
    o.beta_points = 4;
    o.truncations = parse_truncation_list("2");
    RunConfig d = c;
    apply_overrides(d, o);
    ::unsetenv("SU2DUAL_CACHE_DIR");
    CHECK(d.cache_dir == "flag");
    CHECK(d.optimizer.seed == 11);
    CHECK(d.betas().size() == 4);
    CHECK(d.truncations == std::vector<Truncation>{{2, 2, 2, 1, 1}});

    Overrides bad;
    bad.beta_min = 5.0;
    bad.beta_max = 1.0;
    RunConfig e = c;
    CHECK_THROWS_AS(apply_overrides(e, bad), ConfigError);
}

TEST_CASE("truncation and mode lists") {
    CHECK(parse_truncation_list("1,4,5") ==
          std::vector<Truncation>{{1, 1, 1, 1, 1}, {4, 4, 4, 1, 1}, {5, 5, 5, 1, 1}});
    CHECK(parse_truncation_list("4x4x4x1x1;5x3x5x2x2") == std::vector<Truncation>{{4, 4, 4, 1, 1}, {5, 3, 5, 2, 2}});
    CHECK_THROWS(parse_truncation_list("4x4x4"));
    CHECK_THROWS(parse_truncation_list("a"));
    CHECK_THROWS(parse_truncation_list("0"));
    CHECK_THROWS(parse_truncation_list("4a"));
    CHECK(parse_mode_list("ansatz,electric") ==
          std::vector<SweepMode>{SweepMode::Ansatz, SweepMode::ElectricBaseline});
    CHECK(truncation_label({4, 4, 4, 1, 1}) == "4x4x4x1x1");
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) CHECK(std::stod(num(x)) == x);
    CHECK(num(0.5) == "0.5");
}

TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("csv writer quotes when needed") {
    CsvWriter w({"a", "b"});
    w.row({"1", "x,y"}).row({"2", "say \"hi\""});
    CHECK(w.str() == "a,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
}

TEST_CASE("svg plot is well formed and drops unusable points") {
    const std::string s = svg_line_plot({"t", "x", "y", true, false},
                                        {{"one", {0.1, 1.0, 10.0, -1.0}, {1.0, 2.0, 3.0, 4.0}},
                                         {"two", {0.1, 1.0}, {NAN, 1.5}}});
    CHECK(s.rfind("<svg", 0) == 0);
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(s.find("one") != std::string::npos);
    CHECK(s.find("two") != std::string::npos);
    CHECK(s.find("nan") == std::string::npos);
}

TEST_CASE("state-count certification logic") {
    const std::vector<Table1Beta> rows = {
        row(0.01, {0.001}, {0.001}, {0.0}),
        row(1.0, {0.9, 0.5, 0.2, 0.1, 0.05, 0.0}, {0.5, 0.2, 0.05, 0.009, 0.001, 0.0}, {0.4, 0.1, 0.02, 0.005, 0, 0}),
        row(100.0, {1, 1, 1, 1, 1, 0.5}, {0.5, 0.3, 0.1, 0.02, 0.008, 0.0}, {0.02, 0.001, 0, 0, 0, 0}),
    };
    const auto checks = certify_table1(rows, 0.01);
    REQUIRE(checks.size() == 7);
    std::map<std::string, bool> by_name;
    for (const auto& c : checks) by_name[c.name] = c.pass;
    CHECK(by_name.at("beta=0.01 electric 1 states"));
    CHECK(by_name.at("beta=1 ansatz 64 states"));
    CHECK(by_name.at("beta=1 variational 64 states"));
    CHECK_FALSE(by_name.at("beta=100 variational 1 states"));
    CHECK(by_name.at("beta=100 ansatz needs 125 states"));

    // "needs" fails when a smaller truncation already suffices
    auto early = rows;
    early[2].ladders[1].rel_err[3] = 0.005;
    for (const auto& c : certify_table1(early, 0.01))
        if (c.name == "beta=100 ansatz needs 125 states") CHECK_FALSE(c.pass);

    // missing betas are skipped, short ladders fail
    auto partial = std::vector<Table1Beta>{row(1.0, {0.1}, {0.1}, {0.1})};
    const auto pc = certify_table1(partial, 0.01);
    REQUIRE(pc.size() == 2);
    for (const auto& c : pc) {
        CHECK_FALSE(c.pass);
        CHECK(c.detail.find("not computed") != std::string::npos);
    }
}

TEST_CASE("a tiny run is deterministic and its manifest is consistent") {
    const fs::path base = fs::temp_directory_path() / "su2dual_cli_test";
    fs::remove_all(base);
    auto run = [&](const std::string& sub, int workers) {
        RunConfig c = parse_config("schema = 1\n[beta]\nmin = 0.5\nmax = 2.0\npoints = 2\n[sweep]\nlmax = [1, 2]\n"
                                   "[optimizer]\nmax_cycles = 1\nrestarts = 1\nmax_evals_per_phase = 30\n",
                                   "tiny.toml");
        Overrides o;
        o.output_dir = (base / sub).string();
        o.workers = workers;
        apply_overrides(c, o);
        std::ostringstream log;
        return execute(c, log);
    };
    const auto a = run("a", 1);
    const auto b = run("b", 2);
    CHECK(a.exit_code == kExitOk);
    CHECK(b.exit_code == kExitOk);
    CHECK(a.failures.empty());
    for (const char* f : {"results.csv", "results.json", "fig_plaquette.csv", "fig_energy_gain.csv",
                          "fig_truncation.csv", "fig_couplings.csv", "plaquette.svg"}) {
        REQUIRE(fs::exists(base / "a" / f));
        CHECK_MESSAGE(slurp(base / "a" / f) == slurp(base / "b" / f), f);
    }
    const auto m = nlohmann::json::parse(slurp(base / "a" / "manifest.json"));
    CHECK(m.at("exit_code") == 0);
    for (const auto& o : m.at("outputs")) {
        const fs::path p = base / "a" / o.at("path").get<std::string>();
        CHECK(o.at("sha256") == sha256_file(p));
        CHECK(o.at("bytes") == fs::file_size(p));
    }
    fs::remove_all(base);
}

TEST_CASE("job plan lists every point") {
    RunConfig c = default_config(Task::Sweep);
    c.beta_points = 3;
    const std::string plan = job_plan(c);
    CHECK(plan.find("27") != std::string::npos);  // 3 betas x 3 truncations x 3 modes
}

}  // TEST_SUITE
