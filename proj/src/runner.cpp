#include "polystab/runner.hpp"

#include "polystab/errors.hpp"
#include "polystab/io.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace polystab {
namespace {

namespace fs = std::filesystem;

struct ConfigView {
    std::map<std::string, std::string> kv;
    mutable std::set<std::string> used;

    static ConfigView parse(const std::string& body) {
        ConfigView cfg;
        std::istringstream in(body);
        std::string line;
        int lineno = 0;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  " is not key = value");
            const std::string key = trim(t.substr(0, eq));
            const std::string val = trim(t.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key on line " + std::to_string(lineno));
            if (!cfg.kv.emplace(key, val).second)
                throw ConfigError("duplicate config key " + key);
        }
        return cfg;
    }

    bool has(const std::string& key) const {
        if (kv.count(key)) { used.insert(key); return true; }
        return false;
    }
    std::string str(const std::string& key, const std::string& dflt = "") const {
        if (!kv.count(key)) return dflt;
        used.insert(key);
        return kv.at(key);
    }
    std::string require(const std::string& key) const {
        if (!kv.count(key)) throw ConfigError("missing required config key " + key);
        used.insert(key);
        return kv.at(key);
    }
    double num(const std::string& key, double dflt) const {
        if (!kv.count(key)) return dflt;
        return parse_num(require(key), key);
    }
    double require_num(const std::string& key) const { return parse_num(require(key), key); }
    long integer(const std::string& key, long dflt) const {
        if (!kv.count(key)) return dflt;
        const std::string s = require(key);
        try {
            std::size_t pos = 0;
            const long v = std::stol(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key " + key + " is not an integer: " + s);
        }
    }
    bool flag(const std::string& key, bool dflt) const {
        if (!kv.count(key)) return dflt;
        const std::string s = require(key);
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw ConfigError("key " + key + " is not a boolean: " + s);
    }
    std::vector<double> list(const std::string& key) const {
        const std::string s = require(key);
        std::vector<double> out;
        std::istringstream in(s);
        std::string tok;
        while (std::getline(in, tok, ',')) out.push_back(parse_num(tok, key));
        return out;
    }
    void finish() const {
        std::string unknown;
        for (const auto& [k, v] : kv)
            if (!used.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
        if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
    }

private:
    static double parse_num(const std::string& s, const std::string& key) {
        try {
            std::size_t pos = 0;
            std::string t = s;
            const auto a = t.find_first_not_of(" \t");
            const auto b = t.find_last_not_of(" \t");
            t = a == std::string::npos ? "" : t.substr(a, b - a + 1);
            const double v = std::stod(t, &pos);
            if (pos != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key " + key + " is not a number: " + s);
        }
    }
};

Dimension read_dim(const ConfigView& cfg) {
    Dimension dim;
    dim.m = static_cast<int>(cfg.integer("dim.m", 0));
    dim.N = static_cast<int>(cfg.integer("dim.N", 0));
    if (dim.m <= 0 || dim.N <= 0)
        throw ConfigError("experiment requires dim.m and dim.N");
    return dim;
}

IntegratorConfig read_integrator(const ConfigView& cfg, const Problem& p) {
    IntegratorConfig base = IntegratorConfig::defaults_for(p);
    base.r_max = cfg.num("integrator.r_max", base.r_max);
    base.rel_tol = cfg.num("integrator.rel_tol", base.rel_tol);
    base.abs_tol = cfg.num("integrator.abs_tol", base.abs_tol);
    base.u_cap = cfg.num("integrator.u_cap", base.u_cap);
    base.r_taylor = cfg.num("integrator.r_taylor", base.r_taylor);
    base.max_steps = cfg.integer("integrator.max_steps", base.max_steps);
    return base;
}

Eigen::VectorXd read_vector(const ConfigView& cfg, const std::string& key, int expect) {
    const std::vector<double> vals = cfg.list(key);
    if (static_cast<int>(vals.size()) != expect)
        throw ConfigError("key " + key + " must carry " + std::to_string(expect) + " values");
    return Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
}

PolynomialSpec read_poly(const ConfigView& cfg) {
    const std::string kind = cfg.str("poly.kind", "radial");
    if (kind == "radial") {
        const std::vector<double> coeffs = cfg.list("poly.coeffs");
        return PolynomialSpec::radial(
            Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size()));
    }
    if (kind != "multivariate") throw ConfigError("poly.kind must be radial or multivariate");
    const int d = static_cast<int>(cfg.integer("poly.dim", 0));
    std::vector<PolynomialSpec::Term> terms;
    std::istringstream in(cfg.require("poly.terms"));
    std::string tok;
    while (std::getline(in, tok, ';')) {
        std::istringstream ts(tok);
        PolynomialSpec::Term t;
        if (!(ts >> t.coeff >> t.expo[0] >> t.expo[1] >> t.expo[2]))
            throw ConfigError("poly.terms entries must read: coeff e1 e2 e3");
        terms.push_back(t);
    }
    return PolynomialSpec::multivariate(std::move(terms), d);
}

struct RunOutput {
    std::vector<std::string> artifacts;
    Json summary;
};

void emit_csv(const fs::path& dir, const std::string& name,
              const std::function<void(std::ostream&)>& writer, RunOutput& out) {
    std::ostringstream ss;
    writer(ss);
    io::write_text_file(dir / name, ss.str());
    out.artifacts.push_back(name);
}

void emit_json(const fs::path& dir, const std::string& name, const Json& doc, RunOutput& out) {
    io::write_json_file(dir / name, doc);
    out.artifacts.push_back(name);
}

RunOutput run_experiment(const ConfigView& cfg, const std::string& experiment,
                         const fs::path& outdir) {
    RunOutput out;
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed", 0));

    if (experiment == "solve" || experiment == "certify") {
        const Dimension dim = read_dim(cfg);
        Problem p;
        p.dim = dim;
        p.a = read_vector(cfg, "a", dim.m);
        const IntegratorConfig icfg = read_integrator(cfg, p);
        const RadialProfile prof = integrate(p, icfg);
        emit_csv(outdir, "profile.csv", [&](std::ostream& os) { write_profile_csv(os, prof); },
                 out);
        emit_json(outdir, "profile.json", profile_metadata(prof, icfg), out);
        out.summary["status"] = to_string(prof.status);
        if (experiment == "certify") {
            if (cfg.flag("certify.scan", false)) {
                ScanPolicy policy = ScanPolicy::defaults_for(prof);
                policy.n = static_cast<int>(cfg.integer("certify.n", policy.n));
                const StabilityVerdict verdict = stability_verdict(prof, policy);
                emit_json(outdir, "verdict.json", to_json(verdict), out);
                emit_json(outdir, "certificate.json", to_json(verdict.certificate), out);
                if (verdict.witness) {
                    emit_csv(outdir, "witness.csv",
                             [&](std::ostream& os) { write_witness_csv(os, *verdict.witness); },
                             out);
                    emit_json(outdir, "witness.json", to_json(*verdict.witness), out);
                }
                out.summary["verdict"] = to_string(verdict.kind);
            } else {
                const Certificate cert = pointwise_certificate(prof);
                emit_json(outdir, "certificate.json", to_json(cert), out);
                out.summary["verdict"] = to_string(cert.verdict);
                out.summary["sup_value"] = cert.sup_value;
            }
        }
        return out;
    }

    if (experiment == "shoot") {
        const Dimension dim = read_dim(cfg);
        if (dim.odd())
            throw ClassificationError(
                "shoot requires even m: odd-order radial solutions are always global, so "
                "there is no global/blow-up dichotomy to bracket (got m=" +
                std::to_string(dim.m) + ")");
        const Eigen::VectorXd head = read_vector(cfg, "head", dim.m - 1);
        Problem probe;
        probe.dim = dim;
        probe.a = Eigen::VectorXd::Zero(dim.m);
        probe.a.head(dim.m - 1) = head;
        const IntegratorConfig icfg = read_integrator(cfg, probe);
        const double tol = cfg.num("shoot.tol", 1e-6);
        const Bracket bracket = find_borderline(dim, head, tol, icfg);
        emit_json(outdir, "bracket.json", to_json(bracket), out);
        out.summary["beta0_lo"] = bracket.lo;
        out.summary["beta0_hi"] = bracket.hi;
        if (cfg.flag("shoot.threshold", false)) {
            const CertificateThreshold th =
                find_certificate_threshold(dim, head, tol, icfg, bracket);
            emit_json(outdir, "threshold.json", to_json(th), out);
            out.summary["beta1_lo"] = th.bracket.lo;
            out.summary["beta1_hi"] = th.bracket.hi;
        }
        return out;
    }

    if (experiment == "construct-odd") {
        const Dimension dim = read_dim(cfg);
        const Eigen::VectorXd head = read_vector(cfg, "head", dim.m - 1);
        const OddTailRecipe recipe = odd_tail_recipe(dim, head);
        Problem p;
        p.dim = dim;
        p.a.resize(dim.m);
        p.a.head(dim.m - 1) = head;
        p.a[dim.m - 1] = recipe.chosen_a_last;
        const IntegratorConfig icfg = read_integrator(cfg, p);
        const RadialProfile prof = integrate(p, icfg);
        const Certificate cert = pointwise_certificate(prof);
        emit_json(outdir, "recipe.json", to_json(recipe), out);
        emit_csv(outdir, "profile.csv", [&](std::ostream& os) { write_profile_csv(os, prof); },
                 out);
        emit_json(outdir, "profile.json", profile_metadata(prof, icfg), out);
        emit_json(outdir, "certificate.json", to_json(cert), out);
        out.summary["sup_value"] = recipe.sup_value;
        out.summary["verdict"] = to_string(cert.verdict);
        return out;
    }

    if (experiment == "construct-even") {
        const Dimension dim = read_dim(cfg);
        const Eigen::VectorXd head = read_vector(cfg, "head", dim.m - 1);
        Problem probe;
        probe.dim = dim;
        probe.a = Eigen::VectorXd::Zero(dim.m);
        probe.a.head(dim.m - 1) = head;
        const IntegratorConfig icfg = read_integrator(cfg, probe);
        const double tol = cfg.num("shoot.tol", 1e-6);
        const Bracket bracket = find_borderline(dim, head, tol, icfg);
        Problem pb;
        pb.dim = dim;
        pb.a.resize(dim.m);
        pb.a.head(dim.m - 1) = head;
        pb.a[dim.m - 1] = bracket.lo;
        IntegratorConfig bcfg = icfg;
        bcfg.r_max = std::max(icfg.r_max, bracket.lo_evidence.r_max_used);
        const RadialProfile borderline = integrate(pb, bcfg);
        const EvenTailRecipe recipe = even_tail_recipe(dim, head, borderline, bracket.hi);
        Problem p = pb;
        p.a[dim.m - 1] = recipe.chosen_a_last;
        const RadialProfile prof = integrate(p, icfg);
        const Certificate cert = pointwise_certificate(prof);
        emit_json(outdir, "bracket.json", to_json(bracket), out);
        emit_json(outdir, "recipe.json", to_json(recipe), out);
        emit_csv(outdir, "profile.csv", [&](std::ostream& os) { write_profile_csv(os, prof); },
                 out);
        emit_json(outdir, "profile.json", profile_metadata(prof, icfg), out);
        emit_json(outdir, "certificate.json", to_json(cert), out);
        out.summary["sup_value"] = recipe.sup_value;
        out.summary["verdict"] = to_string(cert.verdict);
        return out;
    }

    if (experiment == "thm31") {
        const Dimension dim = read_dim(cfg);
        Problem probe;
        probe.dim = dim;
        probe.a = Eigen::VectorXd::Zero(dim.m);
        const IntegratorConfig icfg = read_integrator(cfg, probe);
        const AlternatingConstruction res = alternating_construction(dim, icfg);
        Json j;
        j["eps"] = res.eps;
        j["beta"] = res.beta;
        j["xi0"] = res.xi0;
        j["gamma0"] = res.gamma0;
        j["eps1"] = res.eps1;
        j["h_beta"] = res.h_beta;
        j["a"] = std::vector<double>(res.problem.a.data(),
                                     res.problem.a.data() + res.problem.a.size());
        j["certificate"] = to_json(res.certificate);
        emit_json(outdir, "construction.json", j, out);
        emit_csv(outdir, "profile.csv",
                 [&](std::ostream& os) { write_profile_csv(os, res.profile); }, out);
        out.summary["beta"] = res.beta;
        out.summary["verdict"] = to_string(res.certificate.verdict);
        return out;
    }

    if (experiment == "n0-scan") {
        const int m = static_cast<int>(cfg.integer("n0.m", 3));
        const int window = static_cast<int>(cfg.integer("n0.window", 200));
        const ThresholdScan scan = find_threshold_dimension(m, window);
        emit_json(outdir, "n0.json", to_json(scan), out);
        emit_csv(outdir, "n0.csv", [&](std::ostream& os) {
            os << "N,p_exact,lambda_exact,holds\n";
            for (const auto& row : scan.table)
                os << row.N << ',' << row.p.str() << ',' << row.lambda.str() << ','
                   << (row.holds ? 1 : 0) << '\n';
        }, out);
        out.summary["N0"] = scan.N0;
        return out;
    }

    if (experiment == "iterate") {
        const Dimension dim = read_dim(cfg);
        const PolynomialSpec P = read_poly(cfg);
        const AdmissibleConstants consts = compute_CP_prime(P, dim, seed);
        double C;
        const std::string c_str = cfg.str("iterate.C", "auto");
        if (c_str == "auto") C = consts.cp_tilde + cfg.num("iterate.C_offset", 0.0);
        else C = cfg.require_num("iterate.C");
        const int n = static_cast<int>(cfg.integer("iterate.n", 8192));
        const double R = cfg.num("iterate.R", 0.0);
        IterateOptions opts;
        opts.tol = cfg.num("iterate.tol", 1e-8);
        const std::vector<double> grid = graded_grid(dim, n, R);
        const SystemIterate it = monotone_iterate(P, C, dim, grid, opts);
        const Certificate cert = certify_constructed(it, consts.cp_tilde);
        emit_csv(outdir, "iterate.csv", [&](std::ostream& os) { write_iterate_csv(os, it); },
                 out);
        emit_json(outdir, "iterate.json", iterate_metadata(it, consts), out);
        emit_json(outdir, "certificate.json", to_json(cert), out);
        out.summary["C"] = C;
        out.summary["iterations"] = it.iter_count;
        out.summary["residual"] = it.residual;
        out.summary["verdict"] = to_string(cert.verdict);
        return out;
    }

    throw ConfigError("unknown experiment: " + experiment);
}

// one sweep cell: the base config with the axis key substituted
RunOutput run_cell(ConfigView cell_cfg, const std::string& experiment, const fs::path& dir) {
    return run_experiment(cell_cfg, experiment, dir);
}

int do_run(const fs::path& config_path, std::ostream& out, bool force_sweep);

int run_sweep(const ConfigView& cfg, const fs::path& config_path, const fs::path& outdir,
              std::ostream& out) {
    const std::string cell_exp = cfg.require("sweep.experiment");
    const std::string axis = cfg.require("sweep.axis");
    if (axis != "N" && axis != "beta" && axis != "C")
        throw ConfigError("sweep.axis must be one of N, beta, C");
    const std::vector<double> values = cfg.list("sweep.values");
    if (values.empty()) throw ConfigError("sweep.values is empty");
    const int workers_cfg = static_cast<int>(
        cfg.integer("workers", static_cast<long>(std::thread::hardware_concurrency())));
    const int workers = std::max(1, std::min<int>(workers_cfg, static_cast<int>(values.size())));

    // carry every non-sweep key into the cells
    std::map<std::string, std::string> base_kv = cfg.kv;
    base_kv.erase("experiment");
    base_kv.erase("sweep.experiment");
    base_kv.erase("sweep.axis");
    base_kv.erase("sweep.values");
    base_kv.erase("workers");
    base_kv.erase("out");

    struct Cell {
        double value = 0.0;
        bool ok = false;
        std::string error;
        Json summary;
        std::string dir;
    };
    std::vector<Cell> cells(values.size());
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            Cell& cell = cells[i];
            cell.value = values[i];
            std::ostringstream name;
            name << "cell_" << i;
            cell.dir = name.str();
            ConfigView cc;
            cc.kv = base_kv;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", values[i]);
            if (axis == "N") cc.kv["dim.N"] = std::to_string(static_cast<long>(values[i]));
            else if (axis == "C") cc.kv["iterate.C"] = buf;
            else cc.kv["beta"] = buf;
            if (axis == "beta") {
                // append beta to the head/initial data of the cell experiment
                if (cc.kv.count("head")) cc.kv["a"] = cc.kv["head"] + "," + buf;
                else if (cc.kv.count("a")) cc.kv["a"] += std::string(",") + buf;
                cc.kv.erase("head");
                cc.kv.erase("beta");
            }
            try {
                RunOutput res = run_cell(std::move(cc), cell_exp, outdir / cell.dir);
                cell.summary = std::move(res.summary);
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    // summary table in declared cell order
    std::set<std::string> columns;
    for (const Cell& c : cells)
        for (const auto& [k, v] : c.summary.items()) columns.insert(k);
    std::ostringstream table;
    table << axis << ",status";
    for (const std::string& c : columns) table << ',' << c;
    table << '\n';
    Json cells_json = Json::array();
    std::size_t failed = 0;
    for (const Cell& c : cells) {
        table << io::fmt(c.value) << ',' << (c.ok ? "ok" : "error");
        for (const std::string& col : columns) {
            table << ',';
            if (c.ok && c.summary.contains(col)) {
                const Json& v = c.summary.at(col);
                table << (v.is_string() ? v.get<std::string>()
                                        : (v.is_number_integer()
                                               ? std::to_string(v.get<long>())
                                               : io::fmt(v.get<double>())));
            }
        }
        table << '\n';
        Json cj;
        cj["value"] = c.value;
        cj["dir"] = c.dir;
        cj["ok"] = c.ok;
        if (c.ok) cj["summary"] = c.summary;
        else { cj["error"] = c.error; ++failed; }
        cells_json.push_back(cj);
        io::write_json_file(outdir / c.dir / "cell.json", cj);
    }
    io::write_text_file(outdir / "sweep.csv", table.str());
    io::write_json_file(outdir / "cells.json", cells_json);
    out << "sweep: " << (values.size() - failed) << "/" << values.size() << " cells ok -> "
        << (outdir / "sweep.csv").string() << "\n";
    return failed == values.size() ? kExitNumerical : kExitOk;
}

fs::path resolve_outdir(const ConfigView& cfg) {
    fs::path outdir = cfg.str("out", "out");
    if (const char* root = std::getenv("POLYSTAB_OUT_ROOT"); root && *root && outdir.is_relative())
        outdir = fs::path(root) / outdir;
    return outdir;
}

int do_run(const fs::path& config_path, std::ostream& out, bool force_sweep) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string body = io::read_text_file(config_path);
    const ConfigView cfg = ConfigView::parse(body);
    const std::string experiment = cfg.require("experiment");
    if (force_sweep && experiment != "sweep")
        throw ConfigError("the sweep subcommand requires experiment = sweep");
    const fs::path outdir = resolve_outdir(cfg);
    fs::create_directories(outdir);

    Json manifest;
    manifest["version"] = kVersion;
    manifest["experiment"] = experiment;
    manifest["config_path"] = config_path.string();
    manifest["config_hash"] = io::hex64(io::fnv1a(body));
    manifest["seed"] = cfg.integer("seed", 0);

    int code = kExitOk;
    if (experiment == "sweep") {
        code = run_sweep(cfg, config_path, outdir, out);
        cfg.finish();
    } else {
        RunOutput res = run_experiment(cfg, experiment, outdir);
        cfg.finish();
        manifest["artifacts"] = res.artifacts;
        manifest["summary"] = res.summary;
        out << experiment << ": ok -> " << outdir.string() << "\n";
    }
    manifest["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
    io::write_json_file(outdir / "manifest.json", manifest);
    return code;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"numerical laboratory for entire stable solutions of (-Delta)^m u = e^u"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "execute one named experiment from a config file");
    run->add_option("config", config_path, "flat key = value config file")->required();

    std::string sweep_path;
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    sweep->add_option("config", sweep_path, "flat key = value config file")->required();

    int tables_m = 4, tables_N = 64;
    std::string tables_out;
    CLI::App* tables = app.add_subcommand("tables", "emit the Hardy/Rellich constant table");
    tables->add_option("--m-max", tables_m, "largest m");
    tables->add_option("--n-max", tables_N, "largest N");
    tables->add_option("--out", tables_out, "output CSV path (default stdout)");

    int n0_m = 0, n0_window = 200;
    CLI::App* n0 = app.add_subcommand("n0", "scan for the threshold dimension (odd m >= 3)");
    n0->add_option("m", n0_m, "half-order of the operator")->required();
    n0->add_option("--window", n0_window, "verification window above the threshold");

    std::vector<std::string> argv_like = args;
    try {
        std::vector<const char*> argv;
        argv.push_back("polystab");
        for (const auto& a : argv_like) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (run->parsed()) return do_run(config_path, out, false);
    if (sweep->parsed()) return do_run(sweep_path, out, true);
    if (tables->parsed()) {
        std::ostringstream ss;
        write_constant_table_csv(ss, tables_m, tables_N);
        if (tables_out.empty()) out << ss.str();
        else io::write_text_file(tables_out, ss.str());
        return kExitOk;
    }
    if (n0->parsed()) {
        const ThresholdScan scan = find_threshold_dimension(n0_m, n0_window);
        out << "N0(" << scan.m << ") = " << scan.N0 << " (verified through N = "
            << scan.window_end << ", ratio increasing: "
            << (scan.ratio_increasing ? "yes" : "no") << ")\n";
        out << "N,p_exact,lambda_exact,holds\n";
        for (const auto& row : scan.table)
            out << row.N << ',' << row.p.str() << ',' << row.lambda.str() << ','
                << (row.holds ? 1 : 0) << "\n";
        return kExitOk;
    }
    return kExitConfig;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ClassificationError& e) {
        err << "classification error: " << e.what() << "\n";
        return kExitClassification;
    } catch (const ParityError& e) {
        err << "classification error: " << e.what() << "\n";
        return kExitClassification;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace polystab
