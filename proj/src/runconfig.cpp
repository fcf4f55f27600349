#include "lognewton/runconfig.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace lognewton {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// key = value lines; '#' starts a comment; unknown keys are rejected.
std::map<std::string, std::string> parse_kv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config not found: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) +
                              ": empty key or value");
        if (kv.count(key))
            throw ConfigError("duplicate key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not a number: '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
    }
}

template <class T, class Fn>
std::vector<T> to_list(const std::string& key, const std::string& v, Fn conv) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(conv(key, item));
    }
    return out;
}

const std::vector<std::string> kRunKeys = {
    "p",      "q",        "gamma",    "b",           "a",
    "n",      "L",        "mode",     "tol",         "max_iters",
    "step0",  "armijo_c", "backtrack_ratio",
    "init",   "amplitude", "width",   "center_x",    "center_y",
    "path",   "seed",     "diagnostics", "output"};
const std::vector<std::string> kSweepOnlyKeys = {"n_list", "L_list", "seeds"};

RunConfig run_config_from_kv(const std::map<std::string, std::string>& kv,
                             bool allow_sweep_keys) {
    for (const auto& [key, value] : kv) {
        (void)value;
        bool known = std::count(kRunKeys.begin(), kRunKeys.end(), key) > 0;
        if (!known && allow_sweep_keys)
            known = std::count(kSweepOnlyKeys.begin(), kSweepOnlyKeys.end(),
                               key) > 0;
        if (!known) throw ConfigError("unknown key '" + key + "'");
    }
    RunConfig cfg;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto* v = get("p")) cfg.p = to_double("p", *v);
    if (auto* v = get("q")) cfg.q = to_double("q", *v);
    if (auto* v = get("gamma")) cfg.gamma = to_double("gamma", *v);
    if (auto* v = get("b")) cfg.b = to_double("b", *v);
    if (auto* v = get("a")) cfg.a = to_double("a", *v);
    if (auto* v = get("n")) cfg.n = static_cast<int>(to_long("n", *v));
    if (auto* v = get("L")) cfg.L = to_double("L", *v);
    if (auto* v = get("mode")) {
        if (*v == "nehari") cfg.solver.mode = SolveMode::Nehari;
        else if (*v == "fiber") cfg.solver.mode = SolveMode::Fiber;
        else throw ConfigError("mode must be 'nehari' or 'fiber'");
    }
    if (auto* v = get("tol")) cfg.solver.tol = to_double("tol", *v);
    if (auto* v = get("max_iters"))
        cfg.solver.max_iters = static_cast<int>(to_long("max_iters", *v));
    if (auto* v = get("step0")) cfg.solver.step0 = to_double("step0", *v);
    if (auto* v = get("armijo_c"))
        cfg.solver.armijo_c = to_double("armijo_c", *v);
    if (auto* v = get("backtrack_ratio"))
        cfg.solver.backtrack_ratio = to_double("backtrack_ratio", *v);
    if (auto* v = get("init")) {
        if (*v == "gaussian") cfg.solver.init.kind = InitSpec::Kind::Gaussian;
        else if (*v == "random") cfg.solver.init.kind = InitSpec::Kind::Random;
        else if (*v == "file") cfg.solver.init.kind = InitSpec::Kind::FromFile;
        else throw ConfigError("init must be 'gaussian', 'random' or 'file'");
    }
    if (auto* v = get("amplitude"))
        cfg.solver.init.amplitude = to_double("amplitude", *v);
    if (auto* v = get("width")) cfg.solver.init.width = to_double("width", *v);
    if (auto* v = get("center_x"))
        cfg.solver.init.center[0] = to_double("center_x", *v);
    if (auto* v = get("center_y"))
        cfg.solver.init.center[1] = to_double("center_y", *v);
    if (auto* v = get("path")) cfg.solver.init.path = *v;
    if (auto* v = get("seed"))
        cfg.solver.init.seed = static_cast<std::uint64_t>(to_long("seed", *v));
    if (auto* v = get("diagnostics")) {
        if (*v == "on") cfg.diagnostics = true;
        else if (*v == "off") cfg.diagnostics = false;
        else throw ConfigError("diagnostics must be 'on' or 'off'");
    }
    if (auto* v = get("output")) cfg.output = *v;

    // Validate before any compute.
    try {
        (void)make_grid(cfg.n, cfg.L);
    } catch (const InvalidGrid& e) {
        throw ConfigError(e.what());
    }
    Params params = cfg.params();
    if (cfg.solver.mode == SolveMode::Nehari && !params.nehari_ok)
        throw ConfigError("q >= 2p required for nehari mode (got p=" +
                          std::to_string(cfg.p) + ", q=" +
                          std::to_string(cfg.q) + ")");
    if (cfg.solver.mode == SolveMode::Fiber && !params.fiber_ok)
        throw ConfigError(
            "fiber mode requires q >= 2p-2 and q > 2, and q >= 2p-1 when "
            "p < 3 (got p=" +
            std::to_string(cfg.p) + ", q=" + std::to_string(cfg.q) + ")");
    if (!(cfg.solver.tol > 0.0))
        throw ConfigError("tol must be positive");
    if (cfg.solver.backtrack_ratio <= 0.0 || cfg.solver.backtrack_ratio >= 1.0)
        throw ConfigError("backtrack_ratio must lie in (0, 1)");
    if (cfg.solver.armijo_c <= 0.0 || cfg.solver.armijo_c >= 1.0)
        throw ConfigError("armijo_c must lie in (0, 1)");
    if (cfg.solver.init.kind == InitSpec::Kind::FromFile &&
        cfg.solver.init.path.empty())
        throw ConfigError("init = file requires a 'path' key");
    return cfg;
}

}  // namespace

Params RunConfig::params() const {
    try {
        return Params::make(p, q, gamma, b, Coefficient::constant(a));
    } catch (const InvalidParams& e) {
        throw ConfigError(e.what());
    }
}

RunConfig parse_run_config(const std::string& path) {
    return run_config_from_kv(parse_kv(path), false);
}

SweepConfig parse_sweep_config(const std::string& path) {
    auto kv = parse_kv(path);
    SweepConfig sweep;
    sweep.base = run_config_from_kv(kv, true);
    if (auto it = kv.find("n_list"); it != kv.end())
        sweep.n_list = to_list<int>("n_list", it->second,
                                    [](const std::string& k,
                                       const std::string& v) {
                                        return static_cast<int>(to_long(k, v));
                                    });
    else
        sweep.n_list = {sweep.base.n};
    if (auto it = kv.find("L_list"); it != kv.end())
        sweep.L_list = to_list<double>("L_list", it->second, to_double);
    else
        sweep.L_list = {sweep.base.L};
    if (auto it = kv.find("seeds"); it != kv.end())
        sweep.seeds = to_list<std::uint64_t>(
            "seeds", it->second,
            [](const std::string& k, const std::string& v) {
                return static_cast<std::uint64_t>(to_long(k, v));
            });
    else
        sweep.seeds = {sweep.base.solver.init.seed};
    if (sweep.n_list.empty() || sweep.L_list.empty() || sweep.seeds.empty())
        throw ConfigError("empty sweep list");
    for (int n : sweep.n_list)
        (void)make_grid(n, sweep.L_list.front());
    return sweep;
}

int run_solve(const std::string& config_path) {
    RunConfig cfg;
    try {
        cfg = parse_run_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    try {
        Params params = cfg.params();
        GridSpec spec = make_grid(cfg.n, cfg.L);
        LogKernel kernel = LogKernel::build(spec);
        GroundStateResult result =
            solve_ground_state(params, cfg.solver, spec, &kernel);

        std::filesystem::create_directories(cfg.output);
        std::filesystem::copy_file(
            config_path, cfg.output + "/config.txt",
            std::filesystem::copy_options::overwrite_existing);
        save_result(result, cfg.output);
        if (cfg.diagnostics) save_diagnostics(result, kernel, cfg.output);

        if (!result.converged) {
            std::cerr << "non-convergence: residual " << result.residual
                      << " after " << result.iters << " iterations\n";
            return 2;
        }
        std::cout << "converged: level " << result.level << ", residual "
                  << result.residual << ", " << result.iters
                  << " iterations\n";
        return 0;
    } catch (const NoNehariRoot& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 2;
    } catch (const Diverged& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

bool close_rel(double a, double b, double tol) {
    double scale = std::max({std::fabs(a), std::fabs(b), 1e-12});
    return std::fabs(a - b) <= tol * scale;
}

}  // namespace

int run_verify(const std::string& result_dir) {
    GroundStateResult saved{Field(make_grid(8, 1.0)), EnergyReport{}};
    try {
        saved = load_result(result_dir);
    } catch (const CorruptField& e) {
        std::cerr << "corrupt field: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::vector<std::string> failures;
    auto check = [&](const std::string& name, double got, double want) {
        if (!close_rel(got, want, 1e-9))
            failures.push_back(name + " mismatch: recomputed " +
                               std::to_string(got) + ", sidecar " +
                               std::to_string(want));
    };

    try {
        LogKernel kernel = LogKernel::build(saved.field.spec());
        EnergyReport fresh =
            energy_report(saved.field, saved.params, kernel);
        check("energy", fresh.I, saved.report.I);
        check("nehari pairing", fresh.nehari, saved.report.nehari);
        check("pohozaev", fresh.P, saved.report.P);
        check("J1", fresh.J1, saved.report.J1);
        check("J2", fresh.J2, saved.report.J2);
        check("v0", fresh.vsplit.v0, saved.report.vsplit.v0);
        check("v1", fresh.vsplit.v1, saved.report.vsplit.v1);
        check("v2", fresh.vsplit.v2, saved.report.vsplit.v2);
        check("h1_sq", fresh.h1_sq, saved.report.h1_sq);
        check("lp_p", fresh.lp_p, saved.report.lp_p);
        check("lq_q", fresh.lq_q, saved.report.lq_q);
        check("a_l2", fresh.a_l2, saved.report.a_l2);
        check("level", fresh.I, saved.level);
        check("residual", residual_norm(saved.field, saved.params, kernel),
              saved.residual);
        double h1 = std::max(fresh.h1_sq, 1e-300);
        check("nehari_residual", std::fabs(fresh.nehari) / h1,
              saved.nehari_residual);
        check("pohozaev_residual", std::fabs(fresh.P) / h1,
              saved.pohozaev_residual);

        // Diagnostics, when the run saved them.
        std::ifstream ds(result_dir + "/diagnostics.json");
        if (ds) {
            nlohmann::json dj;
            ds >> dj;
            SymmetryReport sym = symmetry_report(saved.field);
            DecayFit decay = decay_fit(saved.field);
            double far = far_field_check(saved.field, saved.params.p, kernel);
            check("angular_rel_dev", sym.angular_rel_dev,
                  dj.at("symmetry").at("angular_rel_dev"));
            if (sym.monotone_violations !=
                static_cast<int>(dj.at("symmetry").at("monotone_violations")))
                failures.push_back("monotone_violations mismatch");
            check("decay rate", decay.rate, dj.at("decay").at("rate"));
            check("decay r2", decay.r2, dj.at("decay").at("r2"));
            check("far_field_dev", far, dj.at("far_field_dev"));
            if (sign_check(saved.field) !=
                static_cast<bool>(dj.at("sign_ok")))
                failures.push_back("sign_ok mismatch");
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed diagnostics.json: " << e.what() << "\n";
        return 1;
    }

    if (!failures.empty()) {
        for (const auto& f : failures) std::cerr << f << "\n";
        std::cerr << failures.size() << " check(s) failed\n";
        return 3;
    }
    std::cout << "all checks pass\n";
    return 0;
}

namespace {

struct SweepRow {
    int index = 0;
    int n = 0;
    double L = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    GroundStateResult result{Field(make_grid(8, 1.0)), EnergyReport{}};
    double angular_rel_dev = 0.0;
    int monotone_violations = 0;
    double decay_rate = 0.0, decay_r2 = 0.0, far_field_dev = 0.0;
    double wall_time_s = 0.0;
    std::string error;
};

}  // namespace

int run_sweep(const std::string& sweep_config_path) {
    SweepConfig sweep;
    try {
        sweep = parse_sweep_config(sweep_config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    struct Job {
        int index;
        int n;
        double L;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    int index = 0;
    for (int n : sweep.n_list)
        for (double L : sweep.L_list)
            for (std::uint64_t seed : sweep.seeds)
                jobs.push_back({index++, n, L, seed});

    std::vector<SweepRow> rows(jobs.size());

    // Immutable kernels shared across concurrent runs on one grid.
    std::map<std::pair<int, double>, LogKernel> kernels;
    std::mutex kernels_mutex;
    auto kernel_for = [&](const GridSpec& spec) -> const LogKernel& {
        std::lock_guard<std::mutex> lock(kernels_mutex);
        auto key = std::make_pair(spec.n, spec.half_width);
        auto it = kernels.find(key);
        if (it == kernels.end())
            it = kernels.emplace(key, LogKernel::build(spec)).first;
        return it->second;
    };

    auto run_job = [&](const Job& job) {
        SweepRow row;
        row.index = job.index;
        row.n = job.n;
        row.L = job.L;
        row.seed = job.seed;
        auto t0 = std::chrono::steady_clock::now();
        try {
            RunConfig cfg = sweep.base;
            cfg.n = job.n;
            cfg.L = job.L;
            cfg.solver.init.seed = job.seed;
            Params params = cfg.params();
            GridSpec spec = make_grid(cfg.n, cfg.L);
            const LogKernel& kernel = kernel_for(spec);
            row.result = solve_ground_state(params, cfg.solver, spec, &kernel);
            SymmetryReport sym = symmetry_report(row.result.field);
            DecayFit decay = decay_fit(row.result.field);
            row.angular_rel_dev = sym.angular_rel_dev;
            row.monotone_violations = sym.monotone_violations;
            row.decay_rate = decay.rate;
            row.decay_r2 = decay.r2;
            row.far_field_dev =
                far_field_check(row.result.field, params.p, kernel);
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        rows[job.index] = std::move(row);
    };

    unsigned workers = std::max(1u, std::min<unsigned>(
                                        std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) break;
                run_job(jobs[i]);
            }
        });
    for (auto& t : pool) t.join();

    std::filesystem::create_directories(sweep.base.output);
    std::string csv_path = sweep.base.output + "/sweep.csv";
    std::ofstream os(csv_path);
    if (!os) {
        std::cerr << "error: cannot write " << csv_path << "\n";
        return 1;
    }
    os << "index,n,L,seed,p,q,gamma,b,a,mode,converged,level,residual,"
          "nehari_residual,pohozaev_residual,angular_rel_dev,"
          "monotone_violations,decay_rate,decay_r2,far_field_dev,iters,"
          "wall_time_s,error\n";
    char buf[640];
    for (const SweepRow& row : rows) {
        const RunConfig& base = sweep.base;
        std::snprintf(
            buf, sizeof buf,
            "%d,%d,%.17g,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%d,%.17g,"
            "%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%d,%.3f,%s\n",
            row.index, row.n, row.L,
            static_cast<unsigned long long>(row.seed), base.p, base.q,
            base.gamma, base.b, base.a,
            base.solver.mode == SolveMode::Nehari ? "nehari" : "fiber",
            row.ok ? static_cast<int>(row.result.converged) : 0,
            row.ok ? row.result.level : 0.0,
            row.ok ? row.result.residual : 0.0,
            row.ok ? row.result.nehari_residual : 0.0,
            row.ok ? row.result.pohozaev_residual : 0.0,
            row.angular_rel_dev, row.monotone_violations, row.decay_rate,
            row.decay_r2, row.far_field_dev,
            row.ok ? row.result.iters : 0, row.wall_time_s,
            row.error.c_str());
        os << buf;
    }
    std::cout << "wrote " << csv_path << " (" << rows.size() << " rows)\n";
    return 0;
}

}  // namespace lognewton
