#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <CLI11.hpp>

#include "nkspin/acceptance.hpp"
#include "nkspin/errors.hpp"
#include "nkspin/sampling.hpp"

namespace nkspin::cli {

using nlohmann::json;

namespace {

std::vector<double> parse_reals(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("malformed number '" + item + "' in '" + text + "'");
        }
    }
    return out;
}

void renormalization_warning(double norm, const std::string& text, std::vector<std::string>& warnings) {
    if (!(norm > 0.0)) throw UsageError("zero vector '" + text + "'");
    if (std::abs(norm - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "warning: '" << text << "' has norm " << norm << "; normalized to unit length";
        warnings.push_back(msg.str());
    }
}

json vec_json(const ImQuat& v) { return json::array({v.x, v.y, v.z}); }

const char* deriv_name(DerivMode m) { return m == DerivMode::Analytic ? "analytic" : "fd"; }

const char* geometry_name(GeometryKind k) {
    switch (k) {
        case GeometryKind::Round: return "round";
        case GeometryKind::Berger: return "berger";
        case GeometryKind::Other: return "other";
    }
    return "other";
}

std::map<std::string, double> default_tolerances(const std::string& command, DerivMode mode) {
    const bool analytic = mode == DerivMode::Analytic;
    const double residual = analytic ? 1e-8 : 1e-4;
    if (command == "verify-spinor")
        return {{"skew", residual},     {"divergence", residual}, {"length", residual},
                {"identity", residual}, {"real_part", residual},  {"system", residual},
                {"killing_fit", analytic ? 1e-6 : 1e-4}};
    if (command == "lagrangian") return {{"omega", residual}};
    if (command == "geometry")
        return {{"shape", analytic ? 1e-6 : 1e-4}, {"axis", analytic ? 1e-6 : 1e-4}, {"omega", residual},
                {"volume", 1e-3}, {"radius", 1e-6}, {"degenerate_det", 1e-10}};
    if (command == "frame") return {{"round_trip", 1e-9}, {"frame", 1e-9}, {"divergence", analytic ? 1e-6 : 1e-4}};
    if (command == "components") return {{"volume_class", 1e-6}, {"omega", residual}};
    return {};
}

struct Checks {
    json list = json::array();
    void add(const std::string& metric, const std::string& op, double threshold) {
        list.push_back({{"metric", metric}, {"op", op}, {"threshold", threshold}});
    }
};

bool check_holds(const json& value, const std::string& op, double threshold) {
    if (!value.is_number()) return false;
    const double v = value.get<double>();
    if (!std::isfinite(v)) return false;
    if (op == "<=") return v <= threshold;
    if (op == ">=") return v >= threshold;
    if (op == "==") return v == threshold;
    return false;
}

std::size_t sample_count(const RunConfig& cfg, std::size_t fallback) { return cfg.samples ? cfg.samples : fallback; }

DerivOptions deriv_options(const RunConfig& cfg) { return {cfg.deriv, cfg.h, false}; }

// Parsed, validated inputs for a command.
struct Prepared {
    std::map<std::string, double> tol;
    std::optional<SpinorField> spinor;
    std::optional<LagrangianFamily> family;
};

Prepared prepare(const RunConfig& cfg, std::vector<std::string>& warnings) {
    static const std::vector<std::string> kCommands{"verify-spinor", "lagrangian", "geometry",
                                                    "frame",         "components", "all"};
    if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
        throw UsageError("unknown command '" + cfg.command + "'");
    if (!(cfg.h > 0.0)) throw UsageError("--h must be positive");

    Prepared p;
    p.tol = default_tolerances(cfg.command, cfg.deriv);
    for (const auto& [key, value] : cfg.tolerance_overrides) {
        if (!p.tol.count(key)) throw UsageError("unknown tolerance '" + key + "' for command " + cfg.command);
        if (!(value >= 0.0)) throw UsageError("tolerance '" + key + "' must be non-negative");
        p.tol[key] = value;
    }
    if (cfg.command == "verify-spinor" || cfg.command == "frame") {
        if (cfg.family.empty()) throw UsageError(cfg.command + " requires --family");
        p.spinor = parse_spinor_spec(cfg.family, warnings);
    } else if (cfg.command == "lagrangian" || cfg.command == "geometry") {
        if (cfg.family.empty()) throw UsageError(cfg.command + " requires --family");
        p.family = parse_family_spec(cfg.family, cfg.a, cfg.b, warnings);
    } else if (cfg.command == "components") {
        LagrangianFamily::lab(cfg.a, cfg.b);  // validates a, b
    }
    return p;
}

void verify_spinor(const RunConfig& cfg, const Prepared& p, json& metrics, Checks& checks) {
    const auto& psi = *p.spinor;
    const SampleSet s = uniform_s3(cfg.seed, sample_count(cfg, 1000), cfg.h);
    const DerivOptions opts = deriv_options(cfg);
    GKTolerances tol;
    tol.skew = p.tol.at("skew");
    tol.divergence = p.tol.at("divergence");
    tol.length = p.tol.at("length");
    tol.identity = p.tol.at("identity");
    tol.real_part = p.tol.at("real_part");
    tol.killing_fit = p.tol.at("killing_fit");
    const GKReport gk = gk_check(psi, s, tol, opts);
    const SystemResidual sys = max_residuals(system_residuals(decompose_valpha(psi), s, opts));

    metrics["skew_residual"] = gk.skew_residual;
    metrics["divergence_residual"] = gk.divergence_residual;
    metrics["length_residual"] = gk.length_residual;
    metrics["divergence_identity_residual"] = gk.divergence_identity_residual;
    metrics["real_part_residual"] = gk.real_part_residual;
    metrics["lambda_fit"] = gk.lambda_fit;
    metrics["lambda_fit_residual"] = gk.lambda_fit_residual;
    metrics["killing_constant"] = gk.killing_constant ? json(*gk.killing_constant) : json(nullptr);
    metrics["system_unit_length"] = sys.unit_length;
    metrics["system_vector_eq"] = sys.vector_eq;
    metrics["system_scalar_eq"] = sys.scalar_eq;
    metrics["classification"] = !gk.pass ? "not_generalized_killing"
                                : gk.killing_constant ? "killing"
                                                      : "generalized_killing";

    checks.add("skew_residual", "<=", tol.skew);
    checks.add("divergence_residual", "<=", tol.divergence);
    checks.add("length_residual", "<=", tol.length);
    checks.add("divergence_identity_residual", "<=", tol.identity);
    checks.add("real_part_residual", "<=", tol.real_part);
    checks.add("system_unit_length", "<=", p.tol.at("system"));
    checks.add("system_vector_eq", "<=", p.tol.at("system"));
    checks.add("system_scalar_eq", "<=", p.tol.at("system"));
}

void lagrangian(const RunConfig& cfg, const Prepared& p, json& metrics, Checks& checks) {
    const SampleSet s = uniform_s3(cfg.seed, sample_count(cfg, 1000), cfg.h);
    metrics["max_abs_omega"] = lagrangian_residual(*p.family, s, deriv_options(cfg));
    metrics["family_name"] = p.family->name();
    checks.add("max_abs_omega", "<=", p.tol.at("omega"));
}

void geometry(const RunConfig& cfg, const Prepared& p, json& metrics, Checks& checks) {
    const SampleSet s = uniform_s3(cfg.seed, sample_count(cfg, 20000), cfg.h);
    FitTolerances ft;
    ft.shape = p.tol.at("shape");
    ft.axis = p.tol.at("axis");
    ft.degenerate_det = p.tol.at("degenerate_det");
    const GramReport rep = fit_geometry(*p.family, s, ft, deriv_options(cfg));

    metrics["family_name"] = p.family->name();
    metrics["classification"] = geometry_name(rep.fit.kind);
    metrics["classified"] = rep.fit.kind == GeometryKind::Other ? 0 : 1;
    metrics["fit_residual"] = rep.fit_residual;
    metrics["axis_residual"] = rep.axis_residual;
    metrics["max_abs_omega"] = rep.lagrangian_residual;
    metrics["volume_ratio"] = rep.volume.estimate;
    metrics["volume_standard_error"] = rep.volume.standard_error;
    metrics["volume_exact"] = rep.volume.exact;
    checks.add("classified", ">=", 1);
    checks.add("max_abs_omega", "<=", p.tol.at("omega"));

    double implied = 0.0;
    if (rep.fit.kind == GeometryKind::Round) {
        metrics["radius"] = rep.fit.radius;
        const auto adm = admissible_round_radius(rep.fit.radius, p.tol.at("radius"));
        metrics["admissible"] = adm.admissible ? 1 : 0;
        metrics["k"] = adm.k ? json(*adm.k) : json(nullptr);
        implied = std::pow(rep.fit.radius, 3);
        checks.add("admissible", ">=", 1);
    } else if (rep.fit.kind == GeometryKind::Berger) {
        metrics["c_base"] = rep.fit.c_base;
        metrics["c_fiber"] = rep.fit.c_fiber;
        metrics["length_ratio"] = rep.fit.c_fiber / rep.fit.c_base;
        metrics["eigenvalue_ratio"] = (rep.fit.c_fiber * rep.fit.c_fiber) / (rep.fit.c_base * rep.fit.c_base);
        metrics["fiber_axis_first_sample"] = vec_json(rep.fit.fiber_axis);
        implied = rep.fit.c_base * rep.fit.c_base * rep.fit.c_fiber;
    }
    if (rep.fit.kind != GeometryKind::Other) {
        metrics["implied_volume_ratio"] = implied;
        metrics["volume_consistency"] = std::abs(rep.volume.estimate - implied);
        checks.add("volume_consistency", "<=", p.tol.at("volume"));
    }
}

void frame(const RunConfig& cfg, const Prepared& p, json& metrics, Checks& checks) {
    const auto& psi = *p.spinor;
    const SampleSet s = uniform_s3(cfg.seed, sample_count(cfg, 1000), cfg.h);
    const OrthoFrame fr = frame_from_spinor(psi);
    metrics["orthoframe_defect"] = orthoframe_defect(fr, s);
    checks.add("frame_admissible", ">=", 1);
    checks.add("round_trip_residual", "<=", p.tol.at("round_trip"));
    try {
        const auto rec = spinor_from_frame(fr, s, p.tol.at("frame"), p.tol.at("divergence"), deriv_options(cfg));
        metrics["frame_admissible"] = 1;
        metrics["round_trip_residual"] = round_trip_residual(psi, rec);
    } catch (const DomainError& e) {
        metrics["frame_admissible"] = 0;
        metrics["round_trip_residual"] = nullptr;
        metrics["frame_rejection"] = e.what();
    }
}

void components(const RunConfig& cfg, const Prepared& p, json& metrics, Checks& checks) {
    const SampleSet s = uniform_s3(cfg.seed, sample_count(cfg, 1000), cfg.h);
    const DerivOptions opts = deriv_options(cfg);
    std::vector<std::pair<std::string, GramReport>> reports;
    for (const auto& F : {LagrangianFamily::gamma1(), LagrangianFamily::gamma2(), LagrangianFamily::gamma3(cfg.b),
                          LagrangianFamily::gamma4(cfg.b), LagrangianFamily::lab(cfg.a, cfg.b)})
        reports.emplace_back(F.name(), fit_geometry(F, s, {}, opts));
    const auto classes = component_invariant(reports, p.tol.at("volume_class"), p.tol.at("omega"));
    json arr = json::array();
    for (const auto& c : classes) arr.push_back({{"volume_ratio", c.volume_ratio}, {"members", c.members}});
    metrics["classes"] = arr;
    metrics["class_count"] = classes.size();
    checks.add("class_count", "==", 3);
}

void all(const RunConfig& cfg, json& metrics, Checks& checks) {
    AcceptanceConfig ac;
    ac.seed = cfg.seed;
    if (cfg.samples) ac.residual_samples = cfg.samples;
    const auto results = run_acceptance(ac);
    json detail = json::array();
    for (const auto& r : results) {
        char key[64];
        std::snprintf(key, sizeof key, "criterion_%02d_%s", r.id, r.name.c_str());
        metrics[key] = r.pass ? 1 : 0;
        checks.add(key, ">=", 1);
        json m = json::object();
        for (const auto& [k, v] : r.metrics) m[k] = std::isfinite(v) ? json(v) : json(nullptr);
        detail.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"metrics", m}});
    }
    metrics["criteria"] = detail;
}

}  // namespace

ImQuat parse_unit_vector(const std::string& text, std::vector<std::string>& warnings) {
    const auto v = parse_reals(text);
    if (v.size() != 3) throw UsageError("expected three comma-separated reals, got '" + text + "'");
    const ImQuat q{v[0], v[1], v[2]};
    renormalization_warning(q.norm(), text, warnings);
    return q / q.norm();
}

SpinorField parse_spinor_spec(const std::string& spec, std::vector<std::string>& warnings) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto need_arg = [&] {
        if (arg.empty()) throw UsageError("family '" + head + "' needs a parameter");
    };
    auto no_arg = [&] {
        if (colon != std::string::npos) throw UsageError("family '" + head + "' takes no parameter");
    };
    if (head == "const") {
        need_arg();
        const auto v = parse_reals(arg);
        if (v.size() != 4) throw UsageError("const expects four reals w,x,y,z");
        const Quat c{v[0], v[1], v[2], v[3]};
        renormalization_warning(c.norm(), arg, warnings);
        return families::constant(c / c.norm());
    }
    if (head == "inv") {
        no_arg();
        return families::inverse();
    }
    if (head == "identity") {
        no_arg();
        return families::identity_map();
    }
    if (head == "conjb") {
        need_arg();
        return families::conj_b(parse_unit_vector(arg, warnings));
    }
    if (head == "binv") {
        need_arg();
        return families::b_inverse(parse_unit_vector(arg, warnings));
    }
    if (head == "randpoly") {
        need_arg();
        try {
            std::size_t used = 0;
            const unsigned long long seed = std::stoull(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
            return families::random_poly(seed);
        } catch (const std::exception&) {
            throw UsageError("randpoly expects an unsigned integer seed, got '" + arg + "'");
        }
    }
    throw UsageError("unknown spinor family '" + spec + "'");
}

LagrangianFamily parse_family_spec(const std::string& spec, const ImQuat& a, const ImQuat& b,
                                   std::vector<std::string>& warnings) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "gamma1" && arg.empty()) return LagrangianFamily::gamma1();
    if (head == "gamma2" && arg.empty()) return LagrangianFamily::gamma2();
    if (head == "gamma3") return LagrangianFamily::gamma3(arg.empty() ? b : parse_unit_vector(arg, warnings));
    if (head == "gamma4") return LagrangianFamily::gamma4(arg.empty() ? b : parse_unit_vector(arg, warnings));
    if (head == "lab" && arg.empty()) {
        if (std::abs(dot(a, b)) > 1e-6) throw UsageError("lab requires orthogonal --a and --b");
        // Remove the residual component left by renormalization.
        ImQuat bb = b - dot(a, b) * a;
        return LagrangianFamily::lab(a, bb / bb.norm());
    }
    if (head == "graphinv") {
        if (arg.empty()) throw UsageError("graphinv needs a map spec, e.g. graphinv:identity");
        return LagrangianFamily::graph_inv(parse_spinor_spec(arg, warnings));
    }
    throw UsageError("unknown family '" + spec + "'");
}

RunConfig parse_args(int argc, const char* const* argv) {
    CLI::App app{"Numerical verification of generalized Killing spinors on S^3 and Lagrangian submanifolds "
                 "of the nearly Kaehler S^3 x S^3"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string a_text, b_text, deriv = "analytic";
    std::vector<std::string> tols;

    app.set_help_flag("--help", "Print this help message and exit");
    auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "Print this help message and exit");
        sub->add_option("--family", cfg.family, "Family spec");
        sub->add_option("--a", a_text, "Parameter a as x,y,z (default 1,0,0)");
        sub->add_option("--b", b_text, "Parameter b as x,y,z (default 0,1,0)");
        sub->add_option("--samples", cfg.samples, "Number of samples (default: command-specific)");
        sub->add_option("--seed", cfg.seed, "Sampling seed");
        sub->add_option("--deriv", deriv, "Derivative mode")->check(CLI::IsMember({"analytic", "fd"}));
        sub->add_option("--h", cfg.h, "Finite-difference step");
        sub->add_option("--tol", tols, "Tolerance override name=value (repeatable)");
        sub->add_option("--out", cfg.out, "Output path, '-' for standard output");
    };
    const std::pair<const char*, const char*> commands[] = {
        {"verify-spinor", "generalized Killing check and (V, alpha) system residuals"},
        {"lagrangian", "max |Omega| over sampled tangent pairs"},
        {"geometry", "induced metric classification, volume ratio and radius admissibility"},
        {"frame", "spinor -> frame -> spinor round trip"},
        {"components", "volume classes of the five built-in families"},
        {"all", "full verification suite"},
    };
    for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.deriv = deriv == "fd" ? DerivMode::FiniteDifference : DerivMode::Analytic;
    if (!a_text.empty()) cfg.a = parse_unit_vector(a_text, cfg.warnings);
    if (!b_text.empty()) cfg.b = parse_unit_vector(b_text, cfg.warnings);
    for (const auto& t : tols) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw UsageError("--tol expects name=value, got '" + t + "'");
        const auto v = parse_reals(t.substr(eq + 1));
        if (v.size() != 1) throw UsageError("--tol expects a single value, got '" + t + "'");
        cfg.tolerance_overrides[t.substr(0, eq)] = v[0];
    }
    return cfg;
}

bool recompute_pass(const json& report) {
    const auto& metrics = report.at("metrics");
    for (const auto& c : report.at("checks")) {
        const auto key = c.at("metric").get<std::string>();
        if (!metrics.contains(key)) return false;
        if (!check_holds(metrics.at(key), c.at("op").get<std::string>(), c.at("threshold").get<double>())) return false;
    }
    return true;
}

ReportDocument run(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ReportDocument doc;
    json& j = doc.json;
    j["schema_version"] = kSchemaVersion;
    j["command"] = cfg.command;

    std::vector<std::string> warnings = cfg.warnings;
    json metrics = json::object();
    Checks checks;
    json config = {{"command", cfg.command},
                   {"family", cfg.family},
                   {"a", vec_json(cfg.a)},
                   {"b", vec_json(cfg.b)},
                   {"samples", cfg.samples},
                   {"seed", cfg.seed},
                   {"deriv", deriv_name(cfg.deriv)},
                   {"h", cfg.h},
                   {"out", cfg.out}};

    auto finish = [&](int code) {
        j["config"] = config;
        j["metrics"] = metrics;
        j["checks"] = checks.list;
        j["warnings"] = warnings;
        const bool pass = code == kPass;
        j["pass"] = pass;
        j["duration_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        doc.exit_code = code;
        return doc;
    };

    Prepared p;
    try {
        p = prepare(cfg, warnings);
    } catch (const UsageError& e) {
        j["error"] = {{"kind", "usage"}, {"message", e.what()}};
        return finish(kUsage);
    } catch (const DomainError& e) {
        j["error"] = {{"kind", "usage"}, {"message", e.what()}};
        return finish(kUsage);
    }
    config["tolerances"] = p.tol;

    try {
        if (cfg.command == "verify-spinor") verify_spinor(cfg, p, metrics, checks);
        else if (cfg.command == "lagrangian") lagrangian(cfg, p, metrics, checks);
        else if (cfg.command == "geometry") geometry(cfg, p, metrics, checks);
        else if (cfg.command == "frame") frame(cfg, p, metrics, checks);
        else if (cfg.command == "components") components(cfg, p, metrics, checks);
        else all(cfg, metrics, checks);
    } catch (const Error& e) {
        j["error"] = {{"kind", "degeneracy"}, {"message", e.what()}};
        return finish(kDegeneracy);
    }

    j["metrics"] = metrics;
    j["checks"] = checks.list;
    return finish(recompute_pass(j) ? kPass : kFail);
}

}  // namespace nkspin::cli
