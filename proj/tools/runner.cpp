#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <nlohmann/json.hpp>
#include <openssl/crypto.h>
#include <toml.hpp>

#include "output.hpp"
#include "su2dual/observables.hpp"

#ifndef SU2DUAL_VERSION
#define SU2DUAL_VERSION "0.0.0"
#endif

namespace su2dual::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

nlohmann::json g_json(const Coupling& c) {
    if (c.is_electric()) return "inf";
    return c.g();
}

nlohmann::json locals_json(const Locals& l) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : l) a.push_back(g_json(c));
    return a;
}

nlohmann::json trace_json(const OptimizationTrace& t) {
    nlohmann::json it = nlohmann::json::array();
    for (const auto& x : t.iterates) {
        nlohmann::json g = nlohmann::json::array();
        for (double v : x.g) g.push_back(std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v));
        it.push_back({{"phase", x.phase}, {"g", g}, {"energy", x.energy}});
    }
    return {{"beta", t.beta},
            {"truncation", t.trunc},
            {"initial", locals_json(t.initial)},
            {"final", locals_json(t.final)},
            {"e_initial", t.e_initial},
            {"e_final", t.e_final},
            {"converged", t.converged},
            {"cycles", t.cycles},
            {"evaluations", t.evaluations},
            {"loop_plateau", t.loop_plateau},
            {"warning", t.warning},
            {"iterates", it}};
}

std::vector<std::string> trunc_cells(const Truncation& t) {
    std::vector<std::string> v;
    for (int l : t) v.push_back(std::to_string(l));
    return v;
}

std::string g_cell(const Coupling& c) { return c.is_electric() ? "inf" : num(c.g()); }

using PointKey = std::tuple<double, int, Truncation>;

std::map<PointKey, const SweepPoint*> index_points(const std::vector<SweepPoint>& pts) {
    std::map<PointKey, const SweepPoint*> m;
    for (const auto& p : pts) m[{p.beta, static_cast<int>(p.mode), p.trunc}] = &p;
    return m;
}

std::vector<double> distinct_betas(const std::vector<SweepPoint>& pts) {
    std::vector<double> b;
    for (const auto& p : pts)
        if (std::find(b.begin(), b.end(), p.beta) == b.end()) b.push_back(p.beta);
    return b;
}

int cube(int l) { return l * l * l; }

bool same_beta(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b)); }

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    void write(const std::string& name, const std::string& content) {
        const auto p = dir_ / name;
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + p.string());
        written_.push_back({name, content.size(), sha256_hex(content)});
        paths_.push_back(p);
    }

    nlohmann::json listing() const {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& w : written_) a.push_back({{"path", w.name}, {"bytes", w.bytes}, {"sha256", w.sha}});
        return a;
    }
    const std::vector<std::filesystem::path>& paths() const { return paths_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    struct Entry {
        std::string name;
        std::size_t bytes;
        std::string sha;
    };
    std::filesystem::path dir_;
    std::vector<Entry> written_;
    std::vector<std::filesystem::path> paths_;
};

nlohmann::json library_versions() {
    std::ostringstream eigen;
    eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
    std::ostringstream boost;
    boost << BOOST_VERSION / 100000 << '.' << BOOST_VERSION / 100 % 1000 << '.' << BOOST_VERSION % 100;
    std::ostringstream toml;
    toml << TOML_LIB_MAJOR << '.' << TOML_LIB_MINOR << '.' << TOML_LIB_PATCH;
    std::ostringstream json;
    json << NLOHMANN_JSON_VERSION_MAJOR << '.' << NLOHMANN_JSON_VERSION_MINOR << '.' << NLOHMANN_JSON_VERSION_PATCH;
    return {{"eigen", eigen.str()},
            {"boost", boost.str()},
            {"tomlplusplus", toml.str()},
            {"nlohmann_json", json.str()},
            {"openssl", OpenSSL_version(OPENSSL_VERSION)},
            {"compiler", __VERSION__}};
}

void write_manifest(ArtifactWriter& w, const RunConfig& c, const RunOutcome& r, const nlohmann::json& timings) {
    const std::string physics = physics_json(c).dump();
    nlohmann::json m = {{"tool", "su2dual"},
                        {"version", version_string()},
                        {"schema", kSchemaVersion},
                        {"task", task_name(c.task)},
                        {"config", config_json(c)},
                        {"config_sha256", sha256_hex(physics)},
                        {"libraries", library_versions()},
                        {"outputs", w.listing()},
                        {"failures", r.failures},
                        {"exit_code", r.exit_code},
                        {"timings", timings}};
    const auto p = w.dir() / "manifest.json";
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << m.dump(2) << '\n';
}

}  // namespace

std::string version_string() { return std::string("su2dual ") + SU2DUAL_VERSION; }

// ----------------------------------------------------- state-count certification

const Table1Ladder& Table1Beta::ladder(SweepMode m) const {
    for (const auto& l : ladders)
        if (l.mode == m) return l;
    throw std::out_of_range(std::string("no ladder for mode ") + mode_name(m));
}

const std::vector<Table1Target>& table1_targets() {
    static const std::vector<Table1Target> t{{0.01, 1, 1, 1}, {1.0, 2744, 64, 64}, {100.0, -2744, 125, 1}};
    return t;
}

Table1Beta table1_point(double beta, const RunConfig& c, TableCache& cache, std::ostream* log) {
    Table1Beta row;
    row.beta = beta;
    const Truncation ref_trunc{c.reference_lmax, c.reference_lmax, c.reference_lmax, 1, 1};
    const auto t0 = Clock::now();
    row.reference_trace = optimize_couplings(beta, ref_trunc, c.optimizer, cache, c.solver);
    row.reference = row.reference_trace.e_final;
    if (!std::isfinite(row.reference) || std::fabs(row.reference) < 1e-14)
        throw std::runtime_error("reference energy is not usable at beta = " + num(beta));
    if (log)
        *log << "  beta " << num(beta) << ": reference E0 = " << num(row.reference) << " (" << num(seconds_since(t0))
             << " s)\n";

    SweepOptions so;
    so.optimizer = c.optimizer;
    so.solver = c.solver;
    for (SweepMode mode : {SweepMode::ElectricBaseline, SweepMode::Ansatz, SweepMode::Variational}) {
        Table1Ladder lad;
        lad.mode = mode;
        for (int l = 1; l <= c.max_lmax; ++l) {
            const Truncation t{l, l, l, 1, 1};
            double e = std::numeric_limits<double>::quiet_NaN();
            std::string err;
            if (mode == SweepMode::Variational && t == ref_trunc) {
                e = row.reference;
            } else {
                const SweepPoint p = run_point(beta, t, mode, so, cache);
                if (p.ok)
                    e = p.energy;
                else
                    err = p.error;
            }
            lad.lmax.push_back(l);
            lad.energy.push_back(e);
            lad.rel_err.push_back(std::fabs(e - row.reference) / std::fabs(row.reference));
            lad.errors.push_back(err);
            if (lad.lmax_needed == 0 && std::isfinite(e) && lad.rel_err.back() <= c.threshold) lad.lmax_needed = l;
        }
        if (log) {
            *log << "    " << mode_name(mode) << ':';
            for (double r : lad.rel_err) *log << ' ' << num(r);
            *log << '\n';
        }
        row.ladders.push_back(std::move(lad));
    }
    return row;
}

std::vector<Table1Check> certify_table1(const std::vector<Table1Beta>& rows, double threshold) {
    struct Claim {
        double beta;
        SweepMode mode;
        int lmax;
        bool minimal;  // "needs": also the next smaller truncation misses
    };
    static const Claim claims[] = {{0.01, SweepMode::ElectricBaseline, 1, false},
                                   {0.01, SweepMode::Ansatz, 1, false},
                                   {0.01, SweepMode::Variational, 1, false},
                                   {1.0, SweepMode::Ansatz, 4, false},
                                   {1.0, SweepMode::Variational, 4, false},
                                   {100.0, SweepMode::Variational, 1, false},
                                   {100.0, SweepMode::Ansatz, 5, true}};
    std::vector<Table1Check> out;
    for (const auto& cl : claims) {
        const Table1Beta* row = nullptr;
        for (const auto& r : rows)
            if (same_beta(r.beta, cl.beta)) row = &r;
        if (!row) continue;
        const auto& lad = row->ladder(cl.mode);
        Table1Check ch;
        ch.beta = cl.beta;
        std::ostringstream name;
        name << "beta=" << num(cl.beta) << ' ' << mode_name(cl.mode) << ' ' << (cl.minimal ? "needs " : "")
             << cube(cl.lmax) << " states";
        ch.name = name.str();
        std::ostringstream d;
        if (cl.lmax > static_cast<int>(lad.lmax.size())) {
            ch.pass = false;
            d << "lmax " << cl.lmax << " not computed";
        } else {
            const double r = lad.rel_err[cl.lmax - 1];
            ch.pass = std::isfinite(r) && r <= threshold;
            d << "rel_err(" << cl.lmax << ")=" << num(r);
            if (cl.minimal && cl.lmax > 1) {
                const double below = lad.rel_err[cl.lmax - 2];
                ch.pass = ch.pass && !(below <= threshold);
                d << " rel_err(" << cl.lmax - 1 << ")=" << num(below);
            }
            d << " threshold=" << num(threshold);
        }
        ch.detail = d.str();
        out.push_back(ch);
    }
    return out;
}

// ---------------------------------------------------------------- sweep data

std::string results_csv(const std::vector<SweepPoint>& pts) {
    CsvWriter w({"beta", "mode", "lmax_wa", "lmax_wb", "lmax_wc", "lmax_lx", "lmax_ly", "ok", "E0", "g1", "g2", "g3",
                 "g4", "g5", "plaq_expectation", "iterations", "error"});
    for (const auto& p : pts) {
        std::vector<std::string> r{num(p.beta), mode_name(p.mode)};
        for (auto& s : trunc_cells(p.trunc)) r.push_back(s);
        r.push_back(p.ok ? "1" : "0");
        r.push_back(p.ok ? num(p.energy) : "");
        for (const auto& g : p.locals) r.push_back(p.ok ? g_cell(g) : "");
        r.push_back(p.ok ? num(p.plaquette) : "");
        r.push_back(std::to_string(p.iterations));
        r.push_back(p.error);
        w.row(r);
    }
    return w.str();
}

nlohmann::json results_json(const std::vector<SweepPoint>& pts) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : pts) {
        nlohmann::json j = {{"beta", p.beta}, {"mode", mode_name(p.mode)}, {"truncation", p.trunc}, {"ok", p.ok}};
        if (p.ok) {
            j["E0"] = p.energy;
            j["couplings"] = locals_json(p.locals);
            j["plaq_expectation"] = p.plaquette;
            j["iterations"] = p.iterations;
            j["solver"] = p.ground.method;
            j["residual"] = p.ground.residual;
        } else {
            j["error"] = p.error;
        }
        a.push_back(j);
    }
    return a;
}

std::string traces_jsonl(const std::vector<SweepPoint>& pts) {
    std::string s;
    for (const auto& p : pts)
        if (p.trace) s += trace_json(*p.trace).dump() + "\n";
    return s;
}

std::string plaquette_csv(const std::vector<SweepPoint>& pts) {
    CsvWriter w({"beta", "mode", "truncation", "plaq_expectation"});
    for (const auto& p : pts)
        if (p.ok) w.row({num(p.beta), mode_name(p.mode), truncation_label(p.trunc), num(p.plaquette)});
    return w.str();
}

std::string energy_gain_csv(const std::vector<SweepPoint>& pts) {
    const auto idx = index_points(pts);
    CsvWriter w({"beta", "truncation", "E0_ansatz", "E0_variational", "E0_electric", "delta_E0_rel"});
    for (const auto& p : pts) {
        if (p.mode != SweepMode::Variational || !p.ok) continue;
        auto find = [&](SweepMode m) -> const SweepPoint* {
            auto it = idx.find({p.beta, static_cast<int>(m), p.trunc});
            return it != idx.end() && it->second->ok ? it->second : nullptr;
        };
        const SweepPoint* a = find(SweepMode::Ansatz);
        if (!a) continue;
        const SweepPoint* e = find(SweepMode::ElectricBaseline);
        w.row({num(p.beta), truncation_label(p.trunc), num(a->energy), num(p.energy), e ? num(e->energy) : "",
               num(relative_energy_diff(a->energy, p.energy))});
    }
    return w.str();
}

std::vector<TruncationStep> truncation_steps(const std::vector<SweepPoint>& pts, const std::vector<Truncation>& order,
                                             TableCache& cache) {
    const auto idx = index_points(pts);
    std::vector<TruncationStep> out;
    for (double b : distinct_betas(pts))
        for (int m = 0; m < 3; ++m)
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                auto a = idx.find({b, m, order[k]});
                auto c = idx.find({b, m, order[k + 1]});
                if (a == idx.end() || c == idx.end() || !a->second->ok || !c->second->ok) continue;
                const auto& pa = *a->second;
                const auto& pc = *c->second;
                TruncationStep st;
                st.beta = b;
                st.mode = static_cast<SweepMode>(m);
                st.from = order[k];
                st.to = order[k + 1];
                st.delta_e = truncation_delta(pa.energy, pc.energy);
                st.infidelity = infidelity(pa.ground.psi, tables_for(pa.ground.config, cache), pc.ground.psi,
                                           tables_for(pc.ground.config, cache));
                out.push_back(st);
            }
    return out;
}

std::string truncation_csv(const std::vector<TruncationStep>& steps) {
    CsvWriter w({"beta", "mode", "from", "to", "delta_E", "infidelity"});
    for (const auto& s : steps)
        w.row({num(s.beta), mode_name(s.mode), truncation_label(s.from), truncation_label(s.to), num(s.delta_e),
               num(s.infidelity)});
    return w.str();
}

std::string couplings_csv(const std::vector<SweepPoint>& pts) {
    CsvWriter w({"beta", "truncation", "g", "g1_over_g", "g2_over_g", "g3_over_g", "g4_over_g", "g5_over_g",
                 "loop_plateau", "converged"});
    for (const auto& p : pts) {
        if (p.mode != SweepMode::Variational || !p.ok || !p.trace) continue;
        const double g = std::sqrt(1.0 / (2.0 * p.beta));
        std::vector<std::string> r{num(p.beta), truncation_label(p.trunc), num(g)};
        for (const auto& c : p.locals) r.push_back(c.is_electric() ? "inf" : num(c.g() / g));
        r.push_back(num(p.trace->loop_plateau));
        r.push_back(p.trace->converged ? "1" : "0");
        w.row(r);
    }
    return w.str();
}

// ---------------------------------------------------------------- running

std::string job_plan(const RunConfig& c) {
    std::ostringstream os;
    os << version_string() << "\ntask: " << task_name(c.task) << "\n";
    if (c.task == Task::Sweep) {
        const auto b = c.betas();
        os << "betas: " << b.size();
        if (!b.empty()) os << " in [" << num(b.front()) << ", " << num(b.back()) << "]";
        os << (c.log_spacing && c.beta_values.empty() ? " log-spaced" : "") << "\nmodes:";
        for (auto m : c.modes) os << ' ' << mode_name(m);
        os << "\ntruncations:";
        for (const auto& t : c.truncations) os << ' ' << truncation_label(t);
        os << "\njobs: " << b.size() * c.modes.size() * c.truncations.size() << "\n";
        os << "outputs: results.csv results.json traces.jsonl fig_plaquette.csv fig_energy_gain.csv "
              "fig_truncation.csv fig_couplings.csv";
        if (c.svg) os << " plaquette.svg energy_gain.svg infidelity.svg";
    } else {
        os << "betas:";
        for (double b : c.table1_betas) os << ' ' << num(b);
        os << "\nreference: variational " << truncation_label({c.reference_lmax, c.reference_lmax, c.reference_lmax, 1, 1})
           << "\nladder: L = 1.." << c.max_lmax << " in modes electric, ansatz, variational"
           << "\nthreshold: " << num(c.threshold) << "\n";
        os << "outputs: table1.csv table1_summary.csv table1_checks.csv traces.jsonl";
    }
    os << " manifest.json\noutput directory: " << c.output_dir << "\ncache directory: "
       << (c.cache_dir.empty() ? "(memory only)" : c.cache_dir) << "\nworkers: " << c.workers
       << "\nseed: " << c.seed << "\n";
    return os.str();
}

namespace {

RunOutcome execute_sweep(const RunConfig& c, TableCache& cache, ArtifactWriter& w, nlohmann::json& timings,
                         std::ostream& log) {
    RunOutcome r;
    SweepOptions so;
    so.optimizer = c.optimizer;
    so.optimizer.seed = c.seed;
    so.solver = c.solver;
    so.workers = c.workers;
    const auto betas = c.betas();
    log << "sweep: " << betas.size() * c.modes.size() * c.truncations.size() << " jobs\n";
    auto t0 = Clock::now();
    const auto pts = sweep(betas, c.truncations, c.modes, so, cache);
    timings["sweep_s"] = seconds_since(t0);

    int failed = 0;
    for (const auto& p : pts)
        if (!p.ok) {
            ++failed;
            r.failures.push_back("beta=" + num(p.beta) + " mode=" + mode_name(p.mode) +
                                 " truncation=" + truncation_label(p.trunc) + ": " + p.error);
        }

    t0 = Clock::now();
    w.write("results.csv", results_csv(pts));
    w.write("results.json", results_json(pts).dump(1) + "\n");
    w.write("traces.jsonl", traces_jsonl(pts));
    const auto steps = truncation_steps(pts, c.truncations, cache);
    w.write("fig_plaquette.csv", plaquette_csv(pts));
    w.write("fig_energy_gain.csv", energy_gain_csv(pts));
    w.write("fig_truncation.csv", truncation_csv(steps));
    w.write("fig_couplings.csv", couplings_csv(pts));

    if (c.svg) {
        std::vector<Series> ps;
        for (auto m : c.modes)
            for (const auto& t : c.truncations) {
                Series s{std::string(mode_name(m)) + " " + truncation_label(t), {}, {}};
                for (const auto& p : pts)
                    if (p.ok && p.mode == m && p.trunc == t) {
                        s.x.push_back(p.beta);
                        s.y.push_back(p.plaquette);
                    }
                ps.push_back(s);
            }
        w.write("plaquette.svg", svg_line_plot({"Plaquette expectation", "beta", "<plaq>", true, false}, ps));

        const auto idx = index_points(pts);
        std::vector<Series> gs;
        for (const auto& t : c.truncations) {
            Series s{truncation_label(t), {}, {}};
            for (double b : betas) {
                auto a = idx.find({b, static_cast<int>(SweepMode::Ansatz), t});
                auto v = idx.find({b, static_cast<int>(SweepMode::Variational), t});
                if (a == idx.end() || v == idx.end() || !a->second->ok || !v->second->ok) continue;
                s.x.push_back(b);
                s.y.push_back(relative_energy_diff(a->second->energy, v->second->energy));
            }
            gs.push_back(s);
        }
        w.write("energy_gain.svg", svg_line_plot({"Variational energy gain", "beta", "dE0/E0", true, false}, gs));

        std::vector<Series> is;
        for (int m = 0; m < 3; ++m)
            for (std::size_t k = 0; k + 1 < c.truncations.size(); ++k) {
                Series s{std::string(mode_name(static_cast<SweepMode>(m))) + " " +
                             truncation_label(c.truncations[k]) + "->" + truncation_label(c.truncations[k + 1]),
                         {},
                         {}};
                for (const auto& st : steps)
                    if (static_cast<int>(st.mode) == m && st.from == c.truncations[k]) {
                        s.x.push_back(st.beta);
                        s.y.push_back(st.infidelity);
                    }
                if (!s.x.empty()) is.push_back(s);
            }
        w.write("infidelity.svg", svg_line_plot({"Ground-state infidelity", "beta", "1 - F", true, false}, is));
    }
    timings["artifacts_s"] = seconds_since(t0);

    if (pts.empty() || failed == 0)
        r.exit_code = kExitOk;
    else if (failed == static_cast<int>(pts.size()))
        r.exit_code = kExitNumerical;
    else
        r.exit_code = kExitPartial;
    log << "sweep: " << pts.size() - failed << "/" << pts.size() << " points ok\n";
    return r;
}

RunOutcome execute_table1(const RunConfig& c, TableCache& cache, ArtifactWriter& w, nlohmann::json& timings,
                          std::ostream& log) {
    RunOutcome r;
    RunConfig cc = c;
    cc.optimizer.seed = c.seed;
    std::vector<Table1Beta> rows;
    nlohmann::json per_beta = nlohmann::json::object();
    for (double b : c.table1_betas) {
        const auto t0 = Clock::now();
        rows.push_back(table1_point(b, cc, cache, &log));
        per_beta[num(b)] = seconds_since(t0);
    }
    timings["per_beta_s"] = per_beta;

    CsvWriter ladder({"beta", "mode", "lmax", "states", "E0", "E0_reference", "rel_err", "within_threshold", "error"});
    CsvWriter summary({"beta", "mode", "states_needed", "target_states"});
    std::string traces;
    for (const auto& row : rows) {
        traces += trace_json(row.reference_trace).dump() + "\n";
        const Table1Target* target = nullptr;
        for (const auto& p : table1_targets())
            if (same_beta(p.beta, row.beta)) target = &p;
        for (const auto& lad : row.ladders) {
            for (std::size_t k = 0; k < lad.lmax.size(); ++k) {
                const bool ok = std::isfinite(lad.energy[k]);
                if (!ok)
                    r.failures.push_back("beta=" + num(row.beta) + " mode=" + mode_name(lad.mode) +
                                         " lmax=" + std::to_string(lad.lmax[k]) + ": " + lad.errors[k]);
                ladder.row({num(row.beta), mode_name(lad.mode), std::to_string(lad.lmax[k]),
                            std::to_string(cube(lad.lmax[k])), ok ? num(lad.energy[k]) : "", num(row.reference),
                            ok ? num(lad.rel_err[k]) : "", ok && lad.rel_err[k] <= c.threshold ? "1" : "0",
                            lad.errors[k]});
            }
            const std::string needed =
                lad.lmax_needed ? std::to_string(cube(lad.lmax_needed)) : ">" + std::to_string(cube(c.max_lmax));
            std::string pr;
            if (target) {
                const int n = lad.mode == SweepMode::ElectricBaseline ? target->electric
                              : lad.mode == SweepMode::Ansatz         ? target->ansatz
                                                                      : target->variational;
                pr = n < 0 ? ">" + std::to_string(-n) : std::to_string(n);
            }
            summary.row({num(row.beta), mode_name(lad.mode), needed, pr});
        }
    }
    const auto checks = certify_table1(rows, c.threshold);
    CsvWriter cw({"claim", "pass", "detail"});
    int passed = 0;
    for (const auto& ch : checks) {
        cw.row({ch.name, ch.pass ? "1" : "0", ch.detail});
        passed += ch.pass;
        log << (ch.pass ? "  PASS " : "  FAIL ") << ch.name << " (" << ch.detail << ")\n";
    }
    log << "table1: " << passed << "/" << checks.size() << " target state counts reproduced\n";

    w.write("table1.csv", ladder.str());
    w.write("table1_summary.csv", summary.str());
    w.write("table1_checks.csv", cw.str());
    w.write("traces.jsonl", traces);
    r.exit_code = r.failures.empty() ? kExitOk : kExitPartial;
    return r;
}

}  // namespace

RunOutcome execute(const RunConfig& c, std::ostream& log) {
    const auto t0 = Clock::now();
    TableCache cache(c.cache_dir, c.radial, c.table);
    ArtifactWriter w(c.output_dir);
    nlohmann::json timings = nlohmann::json::object();
    RunOutcome r;
    try {
        r = c.task == Task::Table1 ? execute_table1(c, cache, w, timings, log)
                                   : execute_sweep(c, cache, w, timings, log);
    } catch (const std::exception& e) {
        r.exit_code = kExitNumerical;
        r.failures.push_back(e.what());
        log << "error: " << e.what() << "\n";
    }
    timings["total_s"] = seconds_since(t0);
    timings["cache_tables"] = cache.size();
    timings["cache_disk_hits"] = cache.disk_hits();
    write_manifest(w, c, r, timings);
    r.outputs = w.paths();
    r.outputs.push_back(w.dir() / "manifest.json");
    return r;
}

}  // namespace su2dual::cli
