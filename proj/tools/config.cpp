#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <toml.hpp>

namespace su2dual::cli {

namespace {

std::string anchored(const std::string& source, int line, const std::string& message) {
    std::ostringstream os;
    os << source << ':' << line << ": " << message;
    return os.str();
}

int line_of(const toml::node& n) { return static_cast<int>(n.source().begin.line); }

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const toml::node& n, const std::string& msg) const {
        throw ConfigError(source_, line_of(n), msg);
    }

    void only_keys(const toml::table& t, const std::set<std::string>& allowed, const std::string& where) const {
        for (auto&& [k, v] : t) {
            if (!allowed.count(std::string(k.str()))) {
                const std::string name = where.empty() ? std::string(k.str()) : where + "." + std::string(k.str());
                throw ConfigError(source_, static_cast<int>(k.source().begin.line), "unknown key '" + name + "'");
            }
        }
    }

    const toml::table* section(const toml::table& root, const char* name) const {
        const toml::node* n = root.get(name);
        if (!n) return nullptr;
        if (!n->is_table()) fail(*n, std::string("'") + name + "' must be a table");
        return n->as_table();
    }

    double number(const toml::node& n, const std::string& key) const {
        if (auto v = n.value<double>()) return *v;
        fail(n, "'" + key + "' must be a number");
    }

    void read(const toml::table& t, const char* key, double& out) const {
        if (const auto* n = t.get(key)) out = number(*n, key);
    }

    void read(const toml::table& t, const char* key, int& out) const {
        if (const auto* n = t.get(key)) {
            const auto v = n->value<std::int64_t>();
            if (!n->is_integer() || !v) fail(*n, std::string("'") + key + "' must be an integer");
            if (*v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max())
                fail(*n, std::string("'") + key + "' is out of range");
            out = static_cast<int>(*v);
        }
    }

    void read(const toml::table& t, const char* key, std::uint64_t& out) const {
        if (const auto* n = t.get(key)) {
            const auto v = n->value<std::int64_t>();
            if (!n->is_integer() || !v || *v < 0) fail(*n, std::string("'") + key + "' must be a non-negative integer");
            out = static_cast<std::uint64_t>(*v);
        }
    }

    void read(const toml::table& t, const char* key, bool& out) const {
        if (const auto* n = t.get(key)) {
            if (!n->is_boolean()) fail(*n, std::string("'") + key + "' must be true or false");
            out = *n->value<bool>();
        }
    }

    void read(const toml::table& t, const char* key, std::string& out) const {
        if (const auto* n = t.get(key)) {
            if (!n->is_string()) fail(*n, std::string("'") + key + "' must be a string");
            out = *n->value<std::string>();
        }
    }

    const toml::array* array(const toml::table& t, const char* key) const {
        const toml::node* n = t.get(key);
        if (!n) return nullptr;
        if (!n->is_array()) fail(*n, std::string("'") + key + "' must be an array");
        return n->as_array();
    }

    void read(const toml::table& t, const char* key, std::vector<double>& out) const {
        if (const auto* a = array(t, key)) {
            out.clear();
            for (const auto& e : *a) out.push_back(number(e, key));
        }
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

void require(bool ok, const std::string& source, const std::string& msg) {
    if (!ok) throw ConfigError(source, 0, msg);
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(anchored(source, line, message)), line_(line) {}

const char* task_name(Task t) { return t == Task::Table1 ? "table1" : "sweep"; }

std::vector<double> RunConfig::betas() const {
    if (!beta_values.empty()) return beta_values;
    if (beta_points == 0) return {};
    if (log_spacing) return log_grid(beta_min, beta_max, beta_points);
    std::vector<double> g(beta_points);
    for (int i = 0; i < beta_points; ++i)
        g[i] = beta_points == 1 ? beta_min : beta_min + (beta_max - beta_min) * i / (beta_points - 1);
    return g;
}

void RunConfig::validate(const std::string& src) const {
    require(schema == kSchemaVersion, src, "unsupported schema version " + std::to_string(schema));
    require(beta_min > 0 && std::isfinite(beta_min), src, "beta.min must be positive");
    require(beta_max >= beta_min && std::isfinite(beta_max), src, "beta.max must be finite and >= beta.min");
    require(beta_points >= 0 && beta_points <= 10000, src, "beta.points must be in [0, 10000]");
    for (double b : beta_values) require(b > 0 && std::isfinite(b), src, "beta.values must be positive");
    for (double b : table1_betas) require(b > 0 && std::isfinite(b), src, "table1.betas must be positive");
    require(!modes.empty(), src, "sweep.modes must not be empty");
    require(!truncations.empty(), src, "sweep.truncations must not be empty");
    for (const auto& t : truncations)
        for (int l : t) require(l >= 1 && l <= 40, src, "truncations must lie in [1, 40]");
    require(reference_lmax >= 1 && reference_lmax <= 12, src, "table1.reference_lmax must be in [1, 12]");
    require(max_lmax >= 1 && max_lmax <= reference_lmax, src, "table1.max_lmax must be in [1, reference_lmax]");
    require(threshold > 0 && threshold < 1, src, "table1.threshold must be in (0, 1)");
    require(optimizer.energy_tol > 0 && optimizer.coupling_tol > 0, src, "optimizer tolerances must be positive");
    require(optimizer.max_cycles >= 1 && optimizer.max_evals_per_phase >= 1, src,
            "optimizer.max_cycles and max_evals_per_phase must be >= 1");
    require(optimizer.simplex_step > 0, src, "optimizer.simplex_step must be positive");
    require(optimizer.restarts >= 1, src, "optimizer.restarts must be >= 1");
    require(solver.tol > 0 && solver.krylov_dim >= 4 && solver.max_restarts >= 1 && solver.dense_threshold >= 0, src,
            "solver options out of range");
    require(radial.tol > 0 && table.quad_tol > 0, src, "numerics tolerances must be positive");
    require(workers >= 0, src, "workers must be >= 0");
    require(!output_dir.empty(), src, "output must not be empty");
}

RunConfig default_config(Task task) {
    RunConfig c;
    c.task = task;
    c.output_dir = task == Task::Table1 ? "out/table1" : "out/sweep";
    return c;
}

std::string truncation_label(const Truncation& t) {
    std::string s;
    for (int k = 0; k < kSlots; ++k) s += (k ? "x" : "") + std::to_string(t[k]);
    return s;
}

namespace {

int positive_int(const std::string& s) {
    int v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || v < 1) throw std::invalid_argument(s);
    return v;
}

}  // namespace

std::vector<Truncation> parse_truncation_list(const std::string& s) {
    std::vector<Truncation> out;
    std::stringstream ss(s);
    std::string item;
    const char sep = s.find('x') != std::string::npos ? ';' : ',';
    while (std::getline(ss, item, sep)) {
        if (item.empty()) continue;
        try {
            if (item.find('x') == std::string::npos) {
                const int l = positive_int(item);
                out.push_back({l, l, l, 1, 1});
                continue;
            }
            Truncation t{};
            std::stringstream is(item);
            std::string part;
            int k = 0;
            while (std::getline(is, part, 'x')) {
                if (k >= kSlots) throw std::invalid_argument("too many");
                t[k++] = positive_int(part);
            }
            if (k != kSlots) throw std::invalid_argument("too few");
            out.push_back(t);
        } catch (const std::exception&) {
            throw ConfigError("--lmax", 0, "cannot read truncation '" + item + "'");
        }
    }
    return out;
}

std::vector<SweepMode> parse_mode_list(const std::string& s) {
    std::vector<SweepMode> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(parse_mode(item));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("--modes", 0, e.what());
        }
    }
    return out;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        throw ConfigError(source, static_cast<int>(e.source().begin.line), std::string(e.description()));
    }
    Reader r(source);
    r.only_keys(root, {"schema", "task", "seed", "workers", "output", "cache_dir", "beta", "sweep", "table1",
                       "optimizer", "solver", "numerics", "plots"},
                "");

    const toml::node* schema = root.get("schema");
    if (!schema) throw ConfigError(source, 1, "missing 'schema' (expected schema = " + std::to_string(kSchemaVersion) + ")");
    RunConfig c;
    r.read(root, "schema", c.schema);
    if (c.schema != kSchemaVersion) r.fail(*schema, "unsupported schema version " + std::to_string(c.schema));

    std::string task = "sweep";
    r.read(root, "task", task);
    if (task == "sweep") {
        c = default_config(Task::Sweep);
    } else if (task == "table1") {
        c = default_config(Task::Table1);
    } else {
        r.fail(*root.get("task"), "unknown task '" + task + "' (expected sweep or table1)");
    }

    r.read(root, "seed", c.seed);
    r.read(root, "workers", c.workers);
    r.read(root, "output", c.output_dir);
    r.read(root, "cache_dir", c.cache_dir);
    if (const auto* n = root.get("workers"); n && c.workers < 0) r.fail(*n, "'workers' must be >= 0");

    if (const auto* t = r.section(root, "beta")) {
        r.only_keys(*t, {"min", "max", "points", "spacing", "values"}, "beta");
        r.read(*t, "min", c.beta_min);
        r.read(*t, "max", c.beta_max);
        r.read(*t, "points", c.beta_points);
        r.read(*t, "values", c.beta_values);
        std::string spacing = "log";
        r.read(*t, "spacing", spacing);
        if (spacing != "log" && spacing != "linear") r.fail(*t->get("spacing"), "spacing must be \"log\" or \"linear\"");
        c.log_spacing = spacing == "log";
        if (const auto* n = t->get("min"); n && !(c.beta_min > 0)) r.fail(*n, "beta.min must be positive");
        if (const auto* n = t->get("max"); n && !(c.beta_max >= c.beta_min)) r.fail(*n, "beta.max must be >= beta.min");
        if (const auto* n = t->get("points"); n && c.beta_points < 0) r.fail(*n, "beta.points must be >= 0");
        if (const auto* a = r.array(*t, "values"))
            for (const auto& e : *a)
                if (!(*e.value<double>() > 0)) r.fail(e, "beta values must be positive");
    }

    if (const auto* t = r.section(root, "sweep")) {
        r.only_keys(*t, {"modes", "truncations", "lmax"}, "sweep");
        if (const auto* a = r.array(*t, "modes")) {
            c.modes.clear();
            for (const auto& e : *a) {
                if (!e.is_string()) r.fail(e, "modes must be strings");
                try {
                    c.modes.push_back(parse_mode(*e.value<std::string>()));
                } catch (const std::invalid_argument& ex) {
                    r.fail(e, ex.what());
                }
            }
            if (c.modes.empty()) r.fail(*t->get("modes"), "sweep.modes must not be empty");
        }
        if (t->get("truncations") && t->get("lmax")) r.fail(*t->get("lmax"), "give either 'truncations' or 'lmax', not both");
        if (const auto* a = r.array(*t, "lmax")) {
            c.truncations.clear();
            for (const auto& e : *a) {
                const auto v = e.value<std::int64_t>();
                if (!e.is_integer() || *v < 1 || *v > 40) r.fail(e, "lmax entries must be integers in [1, 40]");
                const int l = static_cast<int>(*v);
                c.truncations.push_back({l, l, l, 1, 1});
            }
        }
        if (const auto* a = r.array(*t, "truncations")) {
            c.truncations.clear();
            for (const auto& e : *a) {
                const auto* row = e.as_array();
                if (!row || row->size() != kSlots) r.fail(e, "each truncation is an array of 5 integers");
                Truncation tr{};
                for (int k = 0; k < kSlots; ++k) {
                    const auto& x = *row->get(k);
                    const auto v = x.value<std::int64_t>();
                    if (!x.is_integer() || *v < 1 || *v > 40) r.fail(x, "truncations must be integers in [1, 40]");
                    tr[k] = static_cast<int>(*v);
                }
                c.truncations.push_back(tr);
            }
        }
        if (c.truncations.empty()) r.fail(*t, "sweep needs at least one truncation");
    }

    if (const auto* t = r.section(root, "table1")) {
        r.only_keys(*t, {"betas", "reference_lmax", "max_lmax", "threshold"}, "table1");
        r.read(*t, "betas", c.table1_betas);
        r.read(*t, "reference_lmax", c.reference_lmax);
        r.read(*t, "max_lmax", c.max_lmax);
        r.read(*t, "threshold", c.threshold);
        if (const auto* n = t->get("reference_lmax"); n && (c.reference_lmax < 1 || c.reference_lmax > 12))
            r.fail(*n, "reference_lmax must be in [1, 12]");
        if (const auto* n = t->get("max_lmax"); n && (c.max_lmax < 1 || c.max_lmax > c.reference_lmax))
            r.fail(*n, "max_lmax must be in [1, reference_lmax]");
        if (const auto* n = t->get("threshold"); n && !(c.threshold > 0 && c.threshold < 1))
            r.fail(*n, "threshold must be in (0, 1)");
    }

    if (const auto* t = r.section(root, "optimizer")) {
        r.only_keys(*t, {"energy_tol", "coupling_tol", "max_cycles", "max_evals_per_phase", "simplex_step", "restarts"},
                    "optimizer");
        auto& o = c.optimizer;
        r.read(*t, "energy_tol", o.energy_tol);
        r.read(*t, "coupling_tol", o.coupling_tol);
        r.read(*t, "max_cycles", o.max_cycles);
        r.read(*t, "max_evals_per_phase", o.max_evals_per_phase);
        r.read(*t, "simplex_step", o.simplex_step);
        r.read(*t, "restarts", o.restarts);
        for (const char* k : {"energy_tol", "coupling_tol", "simplex_step"})
            if (const auto* n = t->get(k); n && !(*n->value<double>() > 0)) r.fail(*n, std::string(k) + " must be positive");
        for (const char* k : {"max_cycles", "max_evals_per_phase", "restarts"})
            if (const auto* n = t->get(k); n && *n->value<std::int64_t>() < 1) r.fail(*n, std::string(k) + " must be >= 1");
    }

    if (const auto* t = r.section(root, "solver")) {
        r.only_keys(*t, {"dense_threshold", "tol", "krylov_dim", "max_restarts"}, "solver");
        r.read(*t, "dense_threshold", c.solver.dense_threshold);
        r.read(*t, "tol", c.solver.tol);
        r.read(*t, "krylov_dim", c.solver.krylov_dim);
        r.read(*t, "max_restarts", c.solver.max_restarts);
        if (const auto* n = t->get("tol"); n && !(c.solver.tol > 0)) r.fail(*n, "solver.tol must be positive");
        if (const auto* n = t->get("krylov_dim"); n && c.solver.krylov_dim < 4) r.fail(*n, "krylov_dim must be >= 4");
    }

    if (const auto* t = r.section(root, "numerics")) {
        r.only_keys(*t, {"radial_tol", "quad_tol"}, "numerics");
        r.read(*t, "radial_tol", c.radial.tol);
        r.read(*t, "quad_tol", c.table.quad_tol);
        for (const char* k : {"radial_tol", "quad_tol"})
            if (const auto* n = t->get(k); n && !(*n->value<double>() > 0)) r.fail(*n, std::string(k) + " must be positive");
    }

    if (const auto* t = r.section(root, "plots")) {
        r.only_keys(*t, {"svg"}, "plots");
        r.read(*t, "svg", c.svg);
    }

    c.validate(source);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, 0, "cannot read config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void apply_overrides(RunConfig& c, const Overrides& o) {
    if (o.output_dir) c.output_dir = *o.output_dir;
    if (const char* env = std::getenv("SU2DUAL_CACHE_DIR"); env && *env) c.cache_dir = env;
    if (o.cache_dir) c.cache_dir = *o.cache_dir;
    if (o.workers) c.workers = *o.workers;
    if (o.seed) c.seed = *o.seed;
    if (o.svg) c.svg = *o.svg;
    if (o.beta_points) {
        c.beta_points = *o.beta_points;
        c.beta_values.clear();
    }
    if (o.beta_min) {
        c.beta_min = *o.beta_min;
        c.beta_values.clear();
    }
    if (o.beta_max) {
        c.beta_max = *o.beta_max;
        c.beta_values.clear();
    }
    if (o.modes) c.modes = *o.modes;
    if (o.truncations) c.truncations = *o.truncations;
    if (o.max_lmax) c.max_lmax = *o.max_lmax;
    c.optimizer.seed = c.seed;
    c.validate("command line");
}

nlohmann::json physics_json(const RunConfig& c) {
    nlohmann::json trunc = nlohmann::json::array();
    for (const auto& t : c.truncations) trunc.push_back(t);
    nlohmann::json modes = nlohmann::json::array();
    for (auto m : c.modes) modes.push_back(mode_name(m));
    const auto& o = c.optimizer;
    return {{"schema", c.schema},
            {"task", task_name(c.task)},
            {"seed", c.seed},
            {"betas", c.task == Task::Table1 ? c.table1_betas : c.betas()},
            {"modes", modes},
            {"truncations", trunc},
            {"table1",
             {{"reference_lmax", c.reference_lmax}, {"max_lmax", c.max_lmax}, {"threshold", c.threshold}}},
            {"optimizer",
             {{"energy_tol", o.energy_tol},
              {"coupling_tol", o.coupling_tol},
              {"max_cycles", o.max_cycles},
              {"max_evals_per_phase", o.max_evals_per_phase},
              {"simplex_step", o.simplex_step},
              {"restarts", o.restarts}}},
            {"solver",
             {{"dense_threshold", c.solver.dense_threshold},
              {"tol", c.solver.tol},
              {"krylov_dim", c.solver.krylov_dim},
              {"max_restarts", c.solver.max_restarts}}},
            {"numerics", {{"radial_tol", c.radial.tol}, {"quad_tol", c.table.quad_tol}}}};
}

nlohmann::json config_json(const RunConfig& c) {
    auto j = physics_json(c);
    j["output"] = c.output_dir;
    j["workers"] = c.workers;
    j["cache_dir"] = c.cache_dir;
    j["svg"] = c.svg;
    return j;
}

}  // namespace su2dual::cli
