#include "su2dual/variational.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "su2dual/observables.hpp"

namespace su2dual {

GroundStateResult solve_config(const CouplingConfig& config, TableCache& cache, const SolverOptions& sopt) {
    return ground_state(assemble_full(config, cache), sopt);
}

double energy_functional(double beta, const Locals& locals, const Truncation& trunc, TableCache& cache,
                         const SolverOptions& sopt) {
    CouplingConfig c;
    c.beta = beta;
    c.locals = locals;
    c.trunc = trunc;
    return solve_config(c, cache, sopt).energy;
}

// ------------------------------------------------------------- Nelder-Mead

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const std::vector<double>& lo, const std::vector<double>& hi, double step, double ftol,
                             double xtol, int max_evals,
                             const std::function<void(const std::vector<double>&, double)>& on_improve) {
    const std::size_t n = x0.size();
    if (lo.size() != n || hi.size() != n) throw std::invalid_argument("nelder_mead: bound sizes differ");
    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    };
    NelderMeadResult r;
    double best = std::numeric_limits<double>::infinity();
    auto eval = [&](std::vector<double> x) {
        clamp(x);
        const double v = f(x);
        ++r.evaluations;
        if (v < best) {
            best = v;
            if (on_improve) on_improve(x, v);
        }
        return std::make_pair(x, v);
    };

    clamp(x0);
    std::vector<std::pair<std::vector<double>, double>> s;
    s.push_back(eval(x0));
    for (std::size_t i = 0; i < n; ++i) {
        auto x = x0;
        // step away from the nearer bound so the simplex is not degenerate
        x[i] += (x0[i] + step <= hi[i]) ? step : -step;
        s.push_back(eval(x));
    }
    auto by_value = [](const auto& a, const auto& b) { return a.second < b.second; };
    for (;;) {
        std::stable_sort(s.begin(), s.end(), by_value);
        double spread = 0.0;
        for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::fabs(s[k].first[i] - s[0].first[i]));
        const double fspread = s[n].second - s[0].second;
        if (fspread <= ftol * std::max(std::fabs(s[0].second), 1e-300) && spread <= xtol) {
            r.converged = true;
            break;
        }
        if (r.evaluations >= max_evals) break;

        std::vector<double> c(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) c[i] += s[k].first[i] / n;
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = c[i] + t * (s[n].first[i] - c[i]);
            return x;
        };
        auto xr = eval(along(-1.0));
        if (xr.second < s[0].second) {
            auto xe = eval(along(-2.0));
            s[n] = xe.second < xr.second ? xe : xr;
        } else if (xr.second < s[n - 1].second) {
            s[n] = xr;
        } else {
            auto xc = xr.second < s[n].second ? eval(along(-0.5)) : eval(along(0.5));
            if (xc.second < std::min(xr.second, s[n].second)) {
                s[n] = xc;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    std::vector<double> x(n);
                    for (std::size_t i = 0; i < n; ++i) x[i] = s[0].first[i] + 0.5 * (s[k].first[i] - s[0].first[i]);
                    s[k] = eval(x);
                }
            }
        }
    }
    std::stable_sort(s.begin(), s.end(), by_value);
    r.x = s[0].first;
    r.f = s[0].second;
    return r;
}

// ------------------------------------------------------------ optimisation

namespace {

std::array<double, kSlots> g_values(const Locals& l) {
    std::array<double, kSlots> g{};
    for (int s = 0; s < kSlots; ++s) g[s] = l[s].g();
    return g;
}

double relative_coupling_change(const Locals& a, const Locals& b) {
    double d = 0.0;
    for (int s = 0; s < kSlots; ++s) {
        if (a[s].is_electric() && b[s].is_electric()) continue;
        if (a[s].is_electric() != b[s].is_electric()) return std::numeric_limits<double>::infinity();
        d = std::max(d, std::fabs(a[s].g() - b[s].g()) / a[s].g());
    }
    return d;
}

}  // namespace

OptimizationTrace optimize_couplings(double beta, const Truncation& trunc, const OptimizerOptions& opt,
                                     TableCache& cache, const SolverOptions& sopt) {
    if (!(beta > 0)) throw std::invalid_argument("beta must be positive");
    OptimizationTrace tr;
    tr.beta = beta;
    tr.trunc = trunc;
    tr.initial = initial_ansatz(beta);
    const double g = tr.initial[kWA].g();

    auto energy = [&](const Locals& l) {
        ++tr.evaluations;
        return energy_functional(beta, l, trunc, cache, sopt);
    };
    Locals cur = tr.initial;
    double e_cur = energy(cur);
    tr.e_initial = e_cur;
    tr.iterates.push_back({0, g_values(cur), e_cur});
    auto accept = [&](int phase, const Locals& l, double e) {
        if (e < tr.iterates.back().energy) tr.iterates.push_back({phase, g_values(l), e});
    };

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);

    for (int cycle = 0; cycle < opt.max_cycles; ++cycle) {
        const Locals before = cur;
        const double e_before = e_cur;

        // phase 1: plaquettes free, large loops fixed
        {
            const int slots[3] = {kWA, kWB, kWC};
            std::vector<double> x0(3), lo(3), hi(3);
            for (int i = 0; i < 3; ++i) {
                x0[i] = std::log(cur[slots[i]].g());
                lo[i] = std::log(g / opt.plaquette_range);
                hi[i] = std::log(g * opt.plaquette_range);
            }
            auto make = [&](const std::vector<double>& x) {
                Locals l = cur;
                for (int i = 0; i < 3; ++i) l[slots[i]] = Coupling::finite(std::exp(x[i]));
                return l;
            };
            auto f = [&](const std::vector<double>& x) { return energy(make(x)); };
            auto on_improve = [&](const std::vector<double>& x, double e) { accept(1, make(x), e); };
            for (int r = 0; r < std::max(1, opt.restarts + 1); ++r) {
                std::vector<double> start = x0;
                double step = opt.simplex_step;
                if (r > 0) {
                    for (int i = 0; i < 3; ++i) start[i] += 0.1 * opt.simplex_step * jitter(rng);
                    step *= 0.5;
                }
                auto res = nelder_mead(f, start, lo, hi, step, opt.nm_ftol, opt.nm_xtol, opt.max_evals_per_phase,
                                       on_improve);
                if (res.f < e_cur) {
                    cur = make(res.x);
                    e_cur = res.f;
                    for (int i = 0; i < 3; ++i) x0[i] = res.x[i];
                }
            }
        }

        // phase 2: large loops free over finite g, plaquettes fixed
        {
            const int slots[2] = {kLx, kLy};
            std::vector<double> x0(2), lo(2), hi(2);
            for (int i = 0; i < 2; ++i) {
                lo[i] = std::log(g * opt.loop_min_factor);
                hi[i] = std::log(g * opt.loop_max_factor);
                x0[i] = cur[slots[i]].is_electric() ? 0.5 * (lo[i] + hi[i]) : std::log(cur[slots[i]].g());
            }
            auto make = [&](const std::vector<double>& x) {
                Locals l = cur;
                for (int i = 0; i < 2; ++i) l[slots[i]] = Coupling::finite(std::exp(x[i]));
                return l;
            };
            auto f = [&](const std::vector<double>& x) { return energy(make(x)); };
            auto on_improve = [&](const std::vector<double>& x, double e) {
                if (e < e_cur) accept(2, make(x), e);
            };
            auto res = nelder_mead(f, x0, lo, hi, opt.simplex_step, opt.nm_ftol, opt.nm_xtol,
                                   opt.max_evals_per_phase, on_improve);
            if (res.f < e_cur) {
                cur = make(res.x);
                e_cur = res.f;
            }
        }

        ++tr.cycles;
        const double de = std::fabs(e_before - e_cur) / std::max(std::fabs(e_cur), 1e-300);
        const double dg = relative_coupling_change(before, cur);
        // a flat energy landscape leaves the couplings undetermined; any point on it is accepted
        if (de <= opt.energy_tol && (dg <= opt.coupling_tol || de <= 1e-12)) {
            tr.converged = true;
            break;
        }
    }
    if (!tr.converged) tr.warning = "cycle cap reached before the energy and coupling criteria were met";
    tr.final = cur;
    tr.e_final = e_cur;

    for (double factor : {10.0, 100.0, 1000.0}) {
        Locals l = cur;
        l[kLx] = l[kLy] = Coupling::finite(factor * g);
        const double e = energy(l);
        tr.loop_plateau = std::max(tr.loop_plateau, std::fabs(e - e_cur) / std::max(std::fabs(e_cur), 1e-300));
    }
    return tr;
}

// ------------------------------------------------------------------- sweep

const char* mode_name(SweepMode m) {
    switch (m) {
        case SweepMode::Ansatz: return "ansatz";
        case SweepMode::Variational: return "variational";
        case SweepMode::ElectricBaseline: return "electric";
    }
    return "?";
}

SweepMode parse_mode(const std::string& s) {
    if (s == "ansatz") return SweepMode::Ansatz;
    if (s == "variational") return SweepMode::Variational;
    if (s == "electric" || s == "electric-baseline") return SweepMode::ElectricBaseline;
    throw std::invalid_argument("unknown mode '" + s + "' (expected ansatz, variational or electric)");
}

SweepPoint run_point(double beta, const Truncation& trunc, SweepMode mode, const SweepOptions& opt,
                     TableCache& cache) {
    SweepPoint p;
    p.beta = beta;
    p.mode = mode;
    p.trunc = trunc;
    try {
        CouplingConfig c;
        c.beta = beta;
        c.trunc = trunc;
        switch (mode) {
            case SweepMode::Ansatz: c.locals = initial_ansatz(beta); break;
            case SweepMode::ElectricBaseline:
                for (auto& l : c.locals) l = Coupling::electric();
                break;
            case SweepMode::Variational: {
                p.trace = optimize_couplings(beta, trunc, opt.optimizer, cache, opt.solver);
                c.locals = p.trace->final;
                p.iterations = p.trace->evaluations;
                break;
            }
        }
        const DualHamiltonian h = assemble_full(c, cache);
        p.ground = ground_state(h, opt.solver);
        p.energy = p.ground.energy;
        p.locals = c.locals;
        p.plaquette = plaquette_expectation(p.ground.psi, h.HB, beta);
        if (mode != SweepMode::Variational) p.iterations = p.ground.iterations;
        p.ok = true;
    } catch (const std::exception& e) {
        p.ok = false;
        p.error = e.what();
    }
    return p;
}

std::vector<SweepPoint> sweep(const std::vector<double>& betas, const std::vector<Truncation>& truncations,
                              const std::vector<SweepMode>& modes, const SweepOptions& opt, TableCache& cache) {
    struct Job {
        double beta;
        Truncation trunc;
        SweepMode mode;
    };
    std::vector<Job> jobs;
    for (double b : betas)
        for (const auto& t : truncations)
            for (SweepMode m : modes) jobs.push_back({b, t, m});
    std::vector<SweepPoint> out(jobs.size());
    if (jobs.empty()) return out;

    int workers = opt.workers > 0 ? opt.workers : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, static_cast<int>(jobs.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
            out[i] = run_point(jobs[i].beta, jobs[i].trunc, jobs[i].mode, opt, cache);
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return out;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (n < 0 || !(lo > 0) || !(hi > 0)) throw std::invalid_argument("log_grid needs positive bounds");
    std::vector<double> g(n);
    if (n == 0) return g;
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (int i = 0; i < n; ++i) g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace su2dual
