#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "output.hpp"
#include "runner.hpp"
#include "su2dual/basis.hpp"
#include "verify.hpp"

using namespace su2dual;
using namespace su2dual::cli;

namespace {

struct CommonFlags {
    std::string out, cache_dir;
    int workers = -1;
    long long seed = -1;
    bool no_svg = false;
    bool dry_run = false;

    void add(CLI::App* app) {
        app->add_option("--out", out, "Output directory");
        app->add_option("--cache-dir", cache_dir, "Operator table cache directory (overrides SU2DUAL_CACHE_DIR)");
        app->add_option("--workers", workers, "Worker threads, 0 for one per core")->check(CLI::NonNegativeNumber);
        app->add_option("--seed", seed, "Optimizer seed")->check(CLI::NonNegativeNumber);
        app->add_flag("--no-svg", no_svg, "Skip SVG plots");
        app->add_flag("--dry-run", dry_run, "Validate the configuration and print the job plan only");
    }

    Overrides overrides() const {
        Overrides o;
        if (!out.empty()) o.output_dir = out;
        if (!cache_dir.empty()) o.cache_dir = cache_dir;
        if (workers >= 0) o.workers = workers;
        if (seed >= 0) o.seed = static_cast<std::uint64_t>(seed);
        if (no_svg) o.svg = false;
        return o;
    }
};

int launch(RunConfig cfg, const Overrides& o, bool dry_run) {
    apply_overrides(cfg, o);
    if (dry_run) {
        std::cout << job_plan(cfg);
        return kExitOk;
    }
    const RunOutcome r = execute(cfg, std::cerr);
    for (const auto& f : r.failures) std::cerr << "failed: " << f << '\n';
    std::cout << "wrote " << r.outputs.size() << " files to " << cfg.output_dir << " (exit " << r.exit_code << ")\n";
    return r.exit_code;
}

int report(const VerifyResult& v, const std::string& json_path) {
    std::cout << v.text;
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
            std::cerr << "cannot write " << json_path << '\n';
            return kExitConfig;
        }
        out << v.json.dump(2) << '\n';
    }
    return v.passed ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SU(2) lattice gauge theory on the 2x2 torus in the dual loop basis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string());

    // run
    auto* run = app.add_subcommand("run", "Run a TOML configuration (task = sweep or table1)");
    std::string run_config;
    CommonFlags run_flags;
    run->add_option("config", run_config, "Configuration file")->required();
    run_flags.add(run);

    // sweep
    auto* sw = app.add_subcommand("sweep", "Beta sweep over modes and truncations");
    std::string sw_config, sw_lmax, sw_modes;
    double sw_min = 0, sw_max = 0;
    int sw_points = -1;
    CommonFlags sw_flags;
    sw->add_option("--config", sw_config, "Start from this configuration file");
    sw->add_option("--beta-min", sw_min, "Smallest beta")->check(CLI::PositiveNumber);
    sw->add_option("--beta-max", sw_max, "Largest beta")->check(CLI::PositiveNumber);
    sw->add_option("--points", sw_points, "Number of beta points")->check(CLI::NonNegativeNumber);
    sw->add_option("--lmax", sw_lmax, "Truncations: \"1,4,5\" for (L,L,L,1,1), or \"4x4x4x1x1;5x5x5x1x1\"");
    sw->add_option("--modes", sw_modes, "Comma-separated modes: ansatz, variational, electric");
    sw_flags.add(sw);

    // table1
    auto* t1 = app.add_subcommand("table1", "Certify the state counts needed for 1% accuracy");
    std::string t1_config;
    int t1_max = 0;
    CommonFlags t1_flags;
    t1->add_option("--config", t1_config, "Start from this configuration file");
    t1->add_option("--max-lmax", t1_max, "Largest ladder truncation")->check(CLI::Range(1, 12));
    t1_flags.add(t1);

    // verify
    auto* ver = app.add_subcommand("verify", "Symbolic and numerical verification suites");
    ver->require_subcommand(1);
    std::string json_path;
    ver->add_option("--json", json_path, "Also write the report as JSON");
    auto* v_gauss = ver->add_subcommand("gauss", "Dual Gauss laws reduce to zero");
    auto* v_links = ver->add_subcommand("links", "Inverse link relations and field definitions");
    auto* v_we = ver->add_subcommand("wigner-eckart", "Assembled matrix elements against Haar quadrature");
    int samples = 50;
    long long we_seed = 1;
    double tol = 1e-8;
    v_we->add_option("--samples", samples, "Number of random elements")->check(CLI::PositiveNumber);
    v_we->add_option("--seed", we_seed, "Sampling seed")->check(CLI::NonNegativeNumber);
    v_we->add_option("--tol", tol, "Maximum allowed deviation")->check(CLI::PositiveNumber);
    auto* v_dof = ver->add_subcommand("dof", "Loop and string counts on Nx x Ny tori");
    int nx = 0, ny = 0;
    v_dof->add_option("--nx", nx, "Sites along x (default: all sizes 2..6)")->check(CLI::Range(2, 64));
    v_dof->add_option("--ny", ny, "Sites along y")->check(CLI::Range(2, 64));
    auto* v_inv = ver->add_subcommand("invariants", "Hermiticity, Casimir equality, large-loop commutators");
    auto* v_all = ver->add_subcommand("all", "Every suite above");

    // dump-basis
    auto* db = app.add_subcommand("dump-basis", "Write the radial functions of a local basis as CSV");
    double g = 0;
    bool electric = false;
    int lmax = 10, points = 513;
    std::string db_out;
    bool labels = false;
    auto* g_opt = db->add_option("--g", g, "Local coupling")->check(CLI::PositiveNumber);
    db->add_flag("--electric", electric, "Electric-limit basis")->excludes(g_opt);
    db->add_option("--lmax", lmax, "Number of states")->check(CLI::Range(1, 400));
    db->add_option("--points", points, "Grid points in omega")->check(CLI::Range(2, 1000000));
    db->add_option("--out", db_out, "Output file (default: stdout)");
    db->add_flag("--labels", labels, "Print the state labels and eigenvalues instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) return launch(load_config(run_config), run_flags.overrides(), run_flags.dry_run);

        if (*sw) {
            RunConfig cfg = sw_config.empty() ? default_config(Task::Sweep) : load_config(sw_config);
            cfg.task = Task::Sweep;
            Overrides o = sw_flags.overrides();
            if (sw->count("--beta-min")) o.beta_min = sw_min;
            if (sw->count("--beta-max")) o.beta_max = sw_max;
            if (sw_points >= 0) o.beta_points = sw_points;
            if (!sw_lmax.empty()) o.truncations = parse_truncation_list(sw_lmax);
            if (!sw_modes.empty()) o.modes = parse_mode_list(sw_modes);
            return launch(cfg, o, sw_flags.dry_run);
        }

        if (*t1) {
            RunConfig cfg = t1_config.empty() ? default_config(Task::Table1) : load_config(t1_config);
            cfg.task = Task::Table1;
            Overrides o = t1_flags.overrides();
            if (t1_max > 0) o.max_lmax = t1_max;
            return launch(cfg, o, t1_flags.dry_run);
        }

        if (*ver) {
            if (*v_gauss) return report(verify_gauss(), json_path);
            if (*v_links) return report(verify_links(), json_path);
            if (*v_we) return report(verify_wigner_eckart(samples, static_cast<std::uint64_t>(we_seed), tol), json_path);
            if (*v_dof) {
                if ((nx == 0) != (ny == 0)) throw ConfigError("verify dof", 0, "give both --nx and --ny, or neither");
                return report(verify_dof(nx, ny), json_path);
            }
            if (*v_inv) return report(verify_invariants(), json_path);
            if (*v_all) {
                VerifyResult all{true, "", nlohmann::json::object()};
                const std::pair<const char*, VerifyResult> parts[] = {
                    {"gauss", verify_gauss()},
                    {"links", verify_links()},
                    {"wigner_eckart", verify_wigner_eckart(samples, static_cast<std::uint64_t>(we_seed), tol)},
                    {"dof", verify_dof(0, 0)},
                    {"invariants", verify_invariants()}};
                for (const auto& [name, v] : parts) {
                    all.passed = all.passed && v.passed;
                    all.text += v.text;
                    all.json[name] = v.json;
                }
                return report(all, json_path);
            }
        }

        if (*db) {
            if (!electric && !(g > 0)) throw ConfigError("dump-basis", 0, "give --g or --electric");
            const auto basis = build_local_basis(electric ? Coupling::electric() : Coupling::finite(g), lmax);
            std::ofstream file;
            if (!db_out.empty()) {
                file.open(db_out);
                if (!file) throw ConfigError(db_out, 0, "cannot open for writing");
            }
            std::ostream& os = db_out.empty() ? std::cout : file;
            if (labels) {
                os << "index,alpha,ell,m,epsilon_tilde\n";
                for (int i = 0; i < basis.size(); ++i)
                    os << i << ',' << basis.labels[i].alpha << ',' << basis.labels[i].ell << ',' << basis.labels[i].m
                       << ',' << num(basis.eps[i]) << '\n';
            } else {
                write_basis_csv(basis, os, points);
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
