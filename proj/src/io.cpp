#include "lognewton/io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace lognewton {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json report_to_json(const EnergyReport& r) {
    ordered_json j;
    j["I"] = r.I;
    j["nehari"] = r.nehari;
    j["P"] = r.P;
    j["J1"] = r.J1;
    j["J2"] = r.J2;
    j["v0"] = r.vsplit.v0;
    j["v1"] = r.vsplit.v1;
    j["v2"] = r.vsplit.v2;
    j["h1_sq"] = r.h1_sq;
    j["grad_sq"] = r.grad_sq;
    j["lp_p"] = r.lp_p;
    j["lq_q"] = r.lq_q;
    j["a_l2"] = r.a_l2;
    j["variable_a_heuristic"] = r.variable_a_heuristic;
    return j;
}

EnergyReport report_from_json(const ordered_json& j) {
    EnergyReport r;
    r.I = j.at("I");
    r.nehari = j.at("nehari");
    r.P = j.at("P");
    r.J1 = j.at("J1");
    r.J2 = j.at("J2");
    r.vsplit.v0 = j.at("v0");
    r.vsplit.v1 = j.at("v1");
    r.vsplit.v2 = j.at("v2");
    r.h1_sq = j.at("h1_sq");
    r.grad_sq = j.at("grad_sq");
    r.lp_p = j.at("lp_p");
    r.lq_q = j.at("lq_q");
    r.a_l2 = j.at("a_l2");
    r.variable_a_heuristic = j.at("variable_a_heuristic");
    return r;
}

std::string mode_name(SolveMode m) {
    return m == SolveMode::Nehari ? "nehari" : "fiber";
}

SolveMode mode_from_name(const std::string& s) {
    if (s == "nehari") return SolveMode::Nehari;
    if (s == "fiber") return SolveMode::Fiber;
    throw ConfigError("unknown solver mode '" + s + "'");
}

std::string init_kind_name(InitSpec::Kind k) {
    switch (k) {
        case InitSpec::Kind::Gaussian: return "gaussian";
        case InitSpec::Kind::FromFile: return "file";
        case InitSpec::Kind::Random: return "random";
    }
    return "gaussian";
}

InitSpec::Kind init_kind_from_name(const std::string& s) {
    if (s == "gaussian") return InitSpec::Kind::Gaussian;
    if (s == "file") return InitSpec::Kind::FromFile;
    if (s == "random") return InitSpec::Kind::Random;
    throw ConfigError("unknown init kind '" + s + "'");
}

}  // namespace

std::string report_json(const EnergyReport& report) {
    return report_to_json(report).dump(2);
}

void save_result(const GroundStateResult& result, const std::string& dir) {
    if (!result.params.a.is_constant())
        throw ConfigError("result persistence supports constant coefficients");
    std::filesystem::create_directories(dir);
    save_field(result.field, dir + "/field.bin");

    ordered_json j;
    j["schema_version"] = 1;
    j["params"] = {{"p", result.params.p},
                   {"q", result.params.q},
                   {"gamma", result.params.gamma},
                   {"b", result.params.b},
                   {"a", result.params.a.constant_value()}};
    j["grid"] = {{"n", result.field.n()},
                 {"L", result.field.spec().half_width}};
    const SolverConfig& c = result.config;
    j["solver"] = {{"mode", mode_name(c.mode)},
                   {"max_iters", c.max_iters},
                   {"tol", c.tol},
                   {"step0", c.step0},
                   {"armijo_c", c.armijo_c},
                   {"backtrack_ratio", c.backtrack_ratio},
                   {"init",
                    {{"kind", init_kind_name(c.init.kind)},
                     {"amplitude", c.init.amplitude},
                     {"width", c.init.width},
                     {"center", {c.init.center[0], c.init.center[1]}},
                     {"path", c.init.path},
                     {"seed", c.init.seed}}}};
    j["level"] = result.level;
    j["residual"] = result.residual;
    j["nehari_residual"] = result.nehari_residual;
    j["pohozaev_residual"] = result.pohozaev_residual;
    j["constraint_residual"] = result.constraint_residual;
    j["iters"] = result.iters;
    j["converged"] = result.converged;
    j["report"] = report_to_json(result.report);
    ordered_json hist = ordered_json::array();
    for (const auto& rec : result.history)
        hist.push_back({rec.energy, rec.residual});
    j["history"] = std::move(hist);

    std::ofstream os(dir + "/result.json");
    if (!os) throw Error("cannot write " + dir + "/result.json");
    os << j.dump(2) << "\n";
}

GroundStateResult load_result(const std::string& dir) {
    std::ifstream is(dir + "/result.json");
    if (!is) throw ConfigError("missing " + dir + "/result.json");
    ordered_json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("unparseable result.json: ") + e.what());
    }

    Field field = load_field(dir + "/field.bin");

    GroundStateResult r{std::move(field), EnergyReport{}};
    try {
        const auto& p = j.at("params");
        r.params = Params::make(p.at("p"), p.at("q"), p.at("gamma"),
                                p.at("b"),
                                Coefficient::constant(p.at("a")));
        const auto& g = j.at("grid");
        if (static_cast<int>(g.at("n")) != r.field.n() ||
            static_cast<double>(g.at("L")) != r.field.spec().half_width)
            throw ConfigError("sidecar grid disagrees with field.bin");
        const auto& s = j.at("solver");
        r.config.mode = mode_from_name(s.at("mode"));
        r.config.max_iters = s.at("max_iters");
        r.config.tol = s.at("tol");
        r.config.step0 = s.at("step0");
        r.config.armijo_c = s.at("armijo_c");
        r.config.backtrack_ratio = s.at("backtrack_ratio");
        const auto& in = s.at("init");
        r.config.init.kind = init_kind_from_name(in.at("kind"));
        r.config.init.amplitude = in.at("amplitude");
        r.config.init.width = in.at("width");
        r.config.init.center = {in.at("center")[0], in.at("center")[1]};
        r.config.init.path = in.at("path");
        r.config.init.seed = in.at("seed");
        r.level = j.at("level");
        r.residual = j.at("residual");
        r.nehari_residual = j.at("nehari_residual");
        r.pohozaev_residual = j.at("pohozaev_residual");
        r.constraint_residual = j.at("constraint_residual");
        r.iters = j.at("iters");
        r.converged = j.at("converged");
        r.report = report_from_json(j.at("report"));
        for (const auto& rec : j.at("history"))
            r.history.push_back({rec[0], rec[1]});
    } catch (const ordered_json::exception& e) {
        throw ConfigError(std::string("malformed result.json: ") + e.what());
    }
    return r;
}

void save_diagnostics(const GroundStateResult& result, const LogKernel& kernel,
                      const std::string& dir) {
    std::filesystem::create_directories(dir);
    SymmetryReport sym = symmetry_report(result.field);
    DecayFit decay = decay_fit(result.field);
    double far = far_field_check(result.field, result.params.p, kernel);

    ordered_json j;
    j["symmetry"] = {{"center", {sym.center[0], sym.center[1]}},
                     {"angular_rel_dev", sym.angular_rel_dev},
                     {"monotone_violations", sym.monotone_violations},
                     {"bins", sym.radial_profile.size()}};
    j["decay"] = {{"rate", decay.rate},
                  {"r2", decay.r2},
                  {"window", {decay.window[0], decay.window[1]}},
                  {"points", decay.points}};
    j["far_field_dev"] = far;
    j["sign_ok"] = sign_check(result.field);

    std::ofstream os(dir + "/diagnostics.json");
    if (!os) throw Error("cannot write " + dir + "/diagnostics.json");
    os << j.dump(2) << "\n";

    std::ofstream cs(dir + "/radial_profile.csv");
    if (!cs) throw Error("cannot write " + dir + "/radial_profile.csv");
    cs << "radius,mean,min,max,max_dev,count\n";
    char buf[160];
    for (const auto& bin : sym.radial_profile) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      bin.radius, bin.mean, bin.min, bin.max, bin.max_dev,
                      bin.count);
        cs << buf;
    }
}

}  // namespace lognewton
