#include "lcgeom/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "lcgeom/bodies.hpp"
#include "lcgeom/errors.hpp"
#include "lcgeom/monge_ampere.hpp"
#include "lcgeom/report_io.hpp"
#include "lcgeom/rng.hpp"

namespace lcgeom {

namespace {

std::string fmt_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

const std::vector<double> kDefaultLambdas = {-2, -1, -0.5, 0, 0.25, 0.5, 0.75, 1, 2, 3};
const std::vector<double> kDefaultPValues = {-1, 0, 1, 2, 10};

std::vector<double> doubles_or(const Json& item, const char* key,
                               const std::vector<double>& fallback) {
    if (!item.contains(key)) return fallback;
    const Json& j = item.at(key);
    if (!j.is_array()) throw ConfigError(std::string(key) + ": expected an array of numbers");
    return j.get<std::vector<double>>();
}

std::vector<DivergenceGenerator> generators_or(const Json& item, const char* key,
                                               const std::vector<DivergenceGenerator>& fallback) {
    if (!item.contains(key)) return fallback;
    std::vector<DivergenceGenerator> out;
    for (const Json& g : item.at(key)) out.push_back(generator_from_json(g));
    return out;
}

Mat random_self_adjoint_unimodular(int dim, Rng& rng) {
    Mat s = Mat::identity(dim);
    if (dim >= 2) {
        const double a = std::exp(rng.uniform(-0.6, 0.6));
        const double b = rng.uniform(-0.8, 0.8);
        s(0, 0) = a;
        s(0, 1) = s(1, 0) = b;
        s(1, 1) = (1.0 + b * b) / a;
    }
    return s;
}

// Equality in the Jensen divergence bound holds exactly when the density
// ratio is constant, which is exactly when the defining second-order
// equation det hess psi = C e^{-2 psi + <grad psi, x>} holds. This check
// verifies the two flags agree.
InequalityReport ma_consistency(const ConvexFunctionSpec& spec, const QuadratureSpec& quad) {
    const MAResidualField field = ma_residual(spec, quad);
    const InequalityReport jensen =
        check_divergence_bound(spec, DivergenceGenerator::neg_log(), quad);
    const bool div_eq = jensen.verdict == Verdict::Equality;

    InequalityReport r;
    r.name = "ma_consistency";
    r.lhs = field.l1_norm / field.mass;
    r.rhs = std::abs(jensen.slack) / field.mass;
    r.slack = r.rhs - r.lhs;
    r.tolerance = 1e-5;
    r.eq_tolerance = 1e-5;
    if (field.equality == div_eq)
        r.verdict = field.equality ? Verdict::Equality : Verdict::Pass;
    else
        r.verdict = Verdict::Fail;
    r.terms["ma_l1_over_mass"] = field.l1_norm / field.mass;
    r.terms["ma_sup"] = field.sup_norm;
    r.terms["c_constant"] = field.c_constant;
    r.terms["jensen_gap"] = std::abs(jensen.slack);
    r.note = "equality in the Jensen bound iff the defining equation holds";
    return r;
}

InequalityReport envelope_report(const ConvexFunctionSpec& spec, std::uint64_t seed) {
    const double dev = envelope_check(spec, sample_points(spec, 512, seed));
    InequalityReport r;
    r.name = "envelope_identity";
    r.lhs = dev;
    r.rhs = 0.0;
    r.slack = -dev;
    r.tolerance = r.eq_tolerance = 1e-6;
    r.verdict = dev <= 1e-6 ? Verdict::Equality : Verdict::Fail;
    r.note = "psi*(grad psi) = <x, grad psi> - psi";
    return r;
}

InequalityReport pushforward_report(const ConvexFunctionSpec& spec, int samples,
                                    std::uint64_t seed) {
    const TransportCheck t = pushforward_check(spec, samples, seed);
    InequalityReport r;
    r.name = "pushforward_ks";
    r.lhs = t.ks;
    r.rhs = t.threshold;
    r.slack = t.threshold - t.ks;
    r.verdict = t.pass ? Verdict::Pass : Verdict::Fail;
    r.terms["sample_count"] = double(t.sample_count);
    r.terms["acceptance"] = t.acceptance;
    for (const auto& [k, v] : t.moment_mismatch) r.terms["mismatch_" + k] = v;
    r.note = "grad psi pushes e^{-psi}/Z to e^{-psi*}/Z*";
    return r;
}

struct Item {
    std::string name;
    bool is_body = false;
    ConvexFunctionSpec spec;
    BodySpec body;
    std::vector<std::string> checks;
    std::vector<DivergenceGenerator> gens, pinsker_gens;
    std::vector<double> lambdas, santalo_lambdas, p_values, bridge_p_values, sl_lambdas;
    std::vector<Mat> sl_matrices;
    int boundary_nodes = 0;
    int pushforward_samples = 20000;
};

Item parse_item(const Json& j, size_t index, std::uint64_t seed, int scenario_nodes) {
    if (!j.is_object()) throw ConfigError("items: each entry must be an object");
    Item it;
    it.name = j.value("name", "item" + std::to_string(index));
    const bool has_spec = j.contains("spec"), has_body = j.contains("body");
    if (has_spec == has_body)
        throw ConfigError("item \"" + it.name + "\": needs exactly one of \"spec\"/\"body\"");
    it.is_body = has_body;
    if (has_spec) it.spec = spec_from_json(j.at("spec"));
    if (has_body) it.body = body_from_json(j.at("body"));

    if (!j.contains("checks") || !j.at("checks").is_array() || j.at("checks").empty())
        throw ConfigError("item \"" + it.name + "\": missing non-empty \"checks\" list");
    it.checks = j.at("checks").get<std::vector<std::string>>();

    const std::vector<DivergenceGenerator> default_gens = {
        DivergenceGenerator::neg_log(), DivergenceGenerator::t_log_t(),
        DivergenceGenerator::power(2.0), DivergenceGenerator::power(0.5)};
    it.gens = generators_or(j, "generators", default_gens);
    it.pinsker_gens = generators_or(j, "pinsker_generators",
                                    {DivergenceGenerator::neg_log(),
                                     DivergenceGenerator::t_log_t()});
    it.lambdas = doubles_or(j, "lambdas", kDefaultLambdas);
    it.santalo_lambdas = doubles_or(j, "santalo_lambdas", it.lambdas);
    it.p_values = doubles_or(j, "p_values", kDefaultPValues);
    it.bridge_p_values = doubles_or(j, "bridge_p_values", it.p_values);
    it.sl_lambdas = doubles_or(j, "sl_lambdas", {0.5});
    it.boundary_nodes = j.value("boundary_nodes", scenario_nodes);
    it.pushforward_samples = j.value("pushforward_samples", 20000);

    if (j.contains("sl_matrices")) {
        for (const Json& m : j.at("sl_matrices")) {
            const int dim = it.is_body ? it.body.dim : it.spec.dim;
            Mat s(dim);
            if (!m.is_array() || int(m.size()) != dim * dim)
                throw ConfigError("sl_matrices: flat row-major, dim^2 entries");
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) s(a, b) = m[size_t(a * dim + b)].get<double>();
            it.sl_matrices.push_back(s);
        }
    } else if (!it.is_body) {
        Rng rng(seed ^ (0x5bd1e995u + index));
        it.sl_matrices.push_back(random_self_adjoint_unimodular(it.spec.dim, rng));
    }
    return it;
}

using Task = std::function<std::vector<InequalityReport>()>;

void add_prefixed(std::vector<Task>& tasks, std::vector<std::string>& contexts,
                  const std::string& prefix, const std::string& context,
                  std::function<std::vector<InequalityReport>()> fn) {
    tasks.push_back([prefix, fn = std::move(fn)]() {
        std::vector<InequalityReport> rs = fn();
        for (InequalityReport& r : rs) r.name = prefix + r.name;
        return rs;
    });
    contexts.push_back(context);
}

void build_tasks(const Item& it, const QuadratureSpec& quad, std::uint64_t seed,
                 std::vector<Task>& tasks, std::vector<std::string>& contexts) {
    const std::string base = it.name + "/";
    auto ctx = [&](const std::string& check) { return "check '" + check + "' on item '" + it.name + "'"; };
    auto need_spec = [&](const std::string& check) {
        if (it.is_body)
            throw ConfigError(ctx(check) + ": needs a function spec item");
    };
    auto need_body = [&](const std::string& check) {
        if (!it.is_body)
            throw ConfigError(ctx(check) + ": needs a body item");
    };

    for (const std::string& check : it.checks) {
        if (check == "divergence_bound") {
            need_spec(check);
            for (const DivergenceGenerator& g : it.gens)
                add_prefixed(tasks, contexts, base, ctx(check), [&it, g, quad] {
                    return std::vector<InequalityReport>{check_divergence_bound(it.spec, g, quad)};
                });
        } else if (check == "dragomir") {
            need_spec(check);
            for (const DivergenceGenerator& g : it.gens)
                add_prefixed(tasks, contexts, base, ctx(check),
                             [&it, g, quad] { return check_dragomir(it.spec, g, quad); });
        } else if (check == "pinsker") {
            need_spec(check);
            for (const DivergenceGenerator& g : it.pinsker_gens)
                add_prefixed(tasks, contexts, base, ctx(check), [&it, g, quad] {
                    return std::vector<InequalityReport>{check_pinsker(it.spec, g, quad)};
                });
        } else if (check == "kl_bounds") {
            need_spec(check);
            add_prefixed(tasks, contexts, base, ctx(check),
                         [&it, quad] { return check_kl_bounds(it.spec, quad); });
        } else if (check == "entropy_chain") {
            need_spec(check);
            add_prefixed(tasks, contexts, base, ctx(check),
                         [&it, quad] { return check_entropy_chain(it.spec, quad); });
        } else if (check == "affine_chain") {
            need_spec(check);
            for (double lam : it.lambdas)
                add_prefixed(tasks, contexts, base + "lambda=" + fmt_param(lam) + "/",
                             ctx(check), [&it, lam, quad] {
                                 return check_affine_chain(it.spec, lam, quad);
                             });
        } else if (check == "santalo_family") {
            need_spec(check);
            for (double lam : it.santalo_lambdas)
                add_prefixed(tasks, contexts, base + "lambda=" + fmt_param(lam) + "/",
                             ctx(check), [&it, lam, quad] {
                                 return check_santalo_family(it.spec, lam, quad);
                             });
        } else if (check == "sl_invariance") {
            need_spec(check);
            for (size_t mi = 0; mi < it.sl_matrices.size(); ++mi)
                for (double lam : it.sl_lambdas) {
                    const Mat s = it.sl_matrices[mi];
                    add_prefixed(tasks, contexts,
                                 base + "sl" + std::to_string(mi) + ",lambda=" +
                                     fmt_param(lam) + "/",
                                 ctx(check), [&it, lam, s, quad] {
                                     return check_sl_invariance(it.spec, lam, s, quad);
                                 });
                }
        } else if (check == "envelope") {
            need_spec(check);
            add_prefixed(tasks, contexts, base, ctx(check), [&it, seed] {
                return std::vector<InequalityReport>{envelope_report(it.spec, seed)};
            });
        } else if (check == "ma_consistency") {
            need_spec(check);
            add_prefixed(tasks, contexts, base, ctx(check), [&it, quad] {
                return std::vector<InequalityReport>{ma_consistency(it.spec, quad)};
            });
        } else if (check == "pushforward") {
            need_spec(check);
            add_prefixed(tasks, contexts, base, ctx(check), [&it, seed] {
                return std::vector<InequalityReport>{
                    pushforward_report(it.spec, it.pushforward_samples, seed)};
            });
        } else if (check == "body_dragomir") {
            need_body(check);
            for (const DivergenceGenerator& g : it.gens)
                add_prefixed(tasks, contexts, base, ctx(check), [&it, g] {
                    return check_body_dragomir(it.body, g, it.boundary_nodes);
                });
        } else if (check == "body_kl_bounds") {
            need_body(check);
            add_prefixed(tasks, contexts, base, ctx(check),
                         [&it] { return check_body_kl_bounds(it.body, it.boundary_nodes); });
        } else if (check == "body_affine_family") {
            need_body(check);
            for (double p : it.p_values)
                add_prefixed(tasks, contexts, base + "p=" + fmt_param(p) + "/", ctx(check),
                             [&it, p] {
                                 return check_body_affine_family(it.body, p, it.boundary_nodes);
                             });
        } else if (check == "body_pinsker") {
            need_body(check);
            for (const DivergenceGenerator& g : it.pinsker_gens)
                add_prefixed(tasks, contexts, base, ctx(check), [&it, g] {
                    return std::vector<InequalityReport>{
                        check_body_pinsker(it.body, g, it.boundary_nodes)};
                });
        } else if (check == "body_bridge") {
            need_body(check);
            for (double p : it.bridge_p_values)
                add_prefixed(tasks, contexts, base + "p=" + fmt_param(p) + "/", ctx(check),
                             [&it, p, quad] {
                                 return check_body_bridge(it.body, p, quad, it.boundary_nodes);
                             });
        } else {
            throw ConfigError("unknown check \"" + check + "\" on item \"" + it.name + "\"");
        }
    }
}

} // namespace

std::vector<std::string> scenario_check_names() {
    return {"divergence_bound", "dragomir",        "pinsker",
            "kl_bounds",        "entropy_chain",   "affine_chain",
            "santalo_family",   "sl_invariance",   "envelope",
            "ma_consistency",   "pushforward",     "body_dragomir",
            "body_kl_bounds",   "body_affine_family", "body_pinsker",
            "body_bridge"};
}

int ScenarioOutcome::exit_code() const {
    for (const InequalityReport& r : reports)
        if (r.verdict == Verdict::Fail) return 2;
    return 0;
}

Json ScenarioOutcome::to_json() const {
    Json j;
    j["scenario"] = name;
    j["seed"] = seed;
    int npass = 0, neq = 0, nfail = 0, nskip = 0;
    for (const InequalityReport& r : reports) {
        switch (r.verdict) {
            case Verdict::Pass: ++npass; break;
            case Verdict::Equality: ++neq; break;
            case Verdict::Fail: ++nfail; break;
            case Verdict::Skipped: ++nskip; break;
        }
    }
    j["summary"] = Json{{"pass", npass}, {"equality", neq}, {"fail", nfail},
                        {"skipped", nskip}};
    Json rs = Json::array();
    for (const InequalityReport& r : reports) rs.push_back(report_to_json(r));
    j["reports"] = std::move(rs);
    return j;
}

std::string ScenarioOutcome::to_csv() const { return reports_to_csv(reports); }

ScenarioOutcome run_scenario(const Json& config, const RunOptions& opt) {
    if (!config.is_object()) throw ConfigError("scenario: expected a JSON object");
    if (!config.contains("items") || !config.at("items").is_array() ||
        config.at("items").empty())
        throw ConfigError("scenario: missing non-empty \"items\" list");

    ScenarioOutcome out;
    out.name = config.value("name", "scenario");
    out.seed = opt.seed ? opt.seed : config.value("seed", std::uint64_t(20260825));

    QuadratureSpec quad;
    if (!opt.quad_preset.empty())
        quad = quad_preset(opt.quad_preset);
    else if (config.contains("quadrature"))
        quad = quad_from_json(config.at("quadrature"));
    else if (!opt.default_quad_preset.empty())
        quad = quad_preset(opt.default_quad_preset);
    quad.seed = out.seed;

    const int scenario_nodes = config.value("boundary_nodes", 0);
    const int jobs = std::max(1, opt.jobs ? opt.jobs : config.value("jobs", 1));

    std::vector<Item> items;
    const Json& jitems = config.at("items");
    for (size_t i = 0; i < jitems.size(); ++i)
        items.push_back(parse_item(jitems[i], i, out.seed, scenario_nodes));

    std::vector<Task> tasks;
    std::vector<std::string> contexts;
    for (const Item& it : items) build_tasks(it, quad, out.seed, tasks, contexts);

    std::vector<std::vector<InequalityReport>> slots(tasks.size());
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::string first_context;
    std::mutex err_mutex;

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                slots[i] = tasks[i]();
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                    first_context = contexts[i];
                }
            }
        }
    };
    if (jobs == 1 || tasks.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min<int>(jobs, int(tasks.size())); ++t)
            pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const ConfigError& e) {
            throw ConfigError(first_context + ": " + e.what());
        } catch (const Error& e) {
            throw NumericalError(first_context + ": " + e.what());
        }
    }

    for (std::vector<InequalityReport>& rs : slots)
        for (InequalityReport& r : rs) out.reports.push_back(std::move(r));
    return out;
}

SweepResult run_sweep(const Json& config, const RunOptions& opt) {
    if (!config.is_object()) throw ConfigError("sweep: expected a JSON object");
    SweepResult out;
    out.quantity = config.value("quantity", std::string());
    if (out.quantity.empty()) throw ConfigError("sweep: missing \"quantity\"");

    std::vector<double> grid;
    if (!config.contains("grid")) throw ConfigError("sweep: missing \"grid\"");
    const Json& jg = config.at("grid");
    if (jg.is_array()) {
        grid = jg.get<std::vector<double>>();
    } else if (jg.is_object()) {
        const double from = jg.at("from").get<double>(), to = jg.at("to").get<double>();
        const int count = jg.at("count").get<int>();
        if (count < 2) throw ConfigError("sweep grid: count must be >= 2");
        for (int i = 0; i < count; ++i)
            grid.push_back(from + (to - from) * double(i) / double(count - 1));
    } else {
        throw ConfigError("sweep grid: array or {from,to,count}");
    }

    const std::uint64_t seed = opt.seed ? opt.seed : config.value("seed", std::uint64_t(20260825));
    QuadratureSpec quad;
    if (!opt.quad_preset.empty())
        quad = quad_preset(opt.quad_preset);
    else if (config.contains("quadrature"))
        quad = quad_from_json(config.at("quadrature"));
    else if (!opt.default_quad_preset.empty())
        quad = quad_preset(opt.default_quad_preset);
    quad.seed = seed;
    const int nodes = config.value("boundary_nodes", 0);

    if (out.quantity == "as_lambda") {
        if (!config.contains("spec")) throw ConfigError("sweep as_lambda: needs \"spec\"");
        const ConvexFunctionSpec spec = spec_from_json(config.at("spec"));
        for (double lam : grid) {
            const IntegralResult r = affine_surface_area_ext(spec, lam, quad);
            out.rows.push_back({lam, r.value, r.error_estimate});
        }
        return out;
    }
    if (out.quantity == "as_p") {
        if (!config.contains("body")) throw ConfigError("sweep as_p: needs \"body\"");
        const BodySpec body = body_from_json(config.at("body"));
        for (double p : grid) {
            const IntegralResult r = body_affine_surface_area(body, p, nodes);
            out.rows.push_back({p, r.value, r.error_estimate});
        }
        return out;
    }
    if (out.quantity == "slack") {
        const std::string check = config.value("check", std::string());
        const std::string sub = config.value("report", std::string());
        if (check.empty()) throw ConfigError("sweep slack: missing \"check\"");
        auto pick = [&](const std::vector<InequalityReport>& rs,
                        double param) -> void {
            for (const InequalityReport& r : rs) {
                if (!sub.empty() && r.name != sub) continue;
                if (r.verdict == Verdict::Skipped) return; // row omitted
                out.rows.push_back({param, r.slack, r.tolerance / 3.0});
                return;
            }
            if (!sub.empty())
                throw ConfigError("sweep slack: check emitted no report named \"" + sub + "\"");
        };
        if (check == "pinsker" || check == "divergence_bound" || check == "dragomir") {
            if (!config.contains("spec")) throw ConfigError("sweep slack: needs \"spec\"");
            const ConvexFunctionSpec spec = spec_from_json(config.at("spec"));
            for (double lam : grid) {
                const DivergenceGenerator g = DivergenceGenerator::power(lam);
                if (check == "pinsker")
                    pick({check_pinsker(spec, g, quad)}, lam);
                else if (check == "divergence_bound")
                    pick({check_divergence_bound(spec, g, quad)}, lam);
                else
                    pick(check_dragomir(spec, g, quad), lam);
            }
            return out;
        }
        if (check == "affine_chain" || check == "santalo_family") {
            if (!config.contains("spec")) throw ConfigError("sweep slack: needs \"spec\"");
            const ConvexFunctionSpec spec = spec_from_json(config.at("spec"));
            for (double lam : grid)
                pick(check == "affine_chain" ? check_affine_chain(spec, lam, quad)
                                             : check_santalo_family(spec, lam, quad),
                     lam);
            return out;
        }
        if (check == "body_affine_family" || check == "body_bridge") {
            if (!config.contains("body")) throw ConfigError("sweep slack: needs \"body\"");
            const BodySpec body = body_from_json(config.at("body"));
            for (double p : grid)
                pick(check == "body_affine_family"
                         ? check_body_affine_family(body, p, nodes)
                         : check_body_bridge(body, p, quad, nodes),
                     p);
            return out;
        }
        throw ConfigError("sweep slack: unsupported check \"" + check + "\"");
    }
    throw ConfigError("sweep: unknown quantity \"" + out.quantity +
                      "\" (expected as_lambda, as_p or slack)");
}

namespace {

Json integral_to_json(const IntegralResult& r) {
    Json j;
    j["value"] = json_number(r.value);
    j["error_estimate"] = json_number(r.error_estimate);
    j["regular_fraction"] = r.regular_fraction;
    return j;
}

} // namespace

Json run_compute(const Json& config, const RunOptions& opt) {
    if (!config.is_object()) throw ConfigError("compute: expected a JSON object");
    const std::uint64_t seed = opt.seed ? opt.seed : config.value("seed", std::uint64_t(20260825));
    QuadratureSpec quad;
    if (!opt.quad_preset.empty())
        quad = quad_preset(opt.quad_preset);
    else if (config.contains("quadrature"))
        quad = quad_from_json(config.at("quadrature"));
    else if (!opt.default_quad_preset.empty())
        quad = quad_preset(opt.default_quad_preset);
    quad.seed = seed;

    Json out;
    if (config.contains("spec")) {
        const ConvexFunctionSpec spec = spec_from_json(config.at("spec"));
        out["spec"] = to_json(spec);
        out["mass"] = integral_to_json(mass(spec, quad));
        out["entropy"] = json_number(entropy(spec, quad));
        const Vec bc = barycenter(spec, quad);
        Json jb = Json::array();
        for (int i = 0; i < bc.n; ++i) jb.push_back(bc[i]);
        out["barycenter"] = std::move(jb);
        Json as = Json::object();
        for (double lam : doubles_or(config, "lambdas", kDefaultLambdas))
            as[fmt_param(lam)] = integral_to_json(affine_surface_area_ext(spec, lam, quad));
        out["as_lambda"] = std::move(as);
        return out;
    }
    if (config.contains("body")) {
        const BodySpec body = body_from_json(config.at("body"));
        const int nodes = config.value("boundary_nodes", 0);
        out["body"] = to_json(body);
        out["volume"] = body_volume(body, nodes);
        out["polar_volume"] = body_polar_volume(body, nodes);
        Json as = Json::object();
        for (double p : doubles_or(config, "p_values", kDefaultPValues))
            as[fmt_param(p)] = integral_to_json(body_affine_surface_area(body, p, nodes));
        out["as_p"] = std::move(as);
        return out;
    }
    throw ConfigError("compute: needs \"spec\" or \"body\"");
}

namespace {

Json trace_to_json(const std::vector<SolverTraceRow>& trace) {
    Json rows = Json::array();
    for (const SolverTraceRow& t : trace) {
        Json r;
        r["iter"] = t.iter;
        r["residual_sup"] = json_number(t.residual_sup);
        r["residual_l1"] = json_number(t.residual_l1);
        r["C"] = json_number(t.c_constant);
        rows.push_back(std::move(r));
    }
    return rows;
}

Json run_summary(const MASolution& s) {
    Json j;
    j["converged"] = s.converged;
    j["iterations"] = int(s.trace.size());
    j["c_constant"] = json_number(s.c_constant);
    j["fitted_a"] = json_number(s.fitted_a);
    j["fit_residual"] = json_number(s.fit_residual);
    j["odd_part"] = json_number(s.odd_part);
    return j;
}

} // namespace

Json run_solve_ma(const Json& config,
                  std::vector<std::pair<std::string, std::string>>& files_out) {
    if (!config.is_object()) throw ConfigError("solve-ma: expected a JSON object");
    const int max_iter = config.value("max_iter", 200);
    const double damping = config.value("damping", 0.5);
    const bool radial = config.value("radial", false);
    const int points = config.value("points", 801);
    const double radius = config.value("radius", 8.0);

    Json out;
    if (config.value("battery", false)) {
        const UniquenessReport rep =
            uniqueness_probe(default_ma_initials(points, radius, false),
                             default_ma_initials(points, radius, true), max_iter, damping);
        out["mode"] = "battery";
        out["agree"] = rep.agree;
        out["max_pairwise"] = json_number(rep.max_pairwise);
        out["max_pairwise_radial"] = json_number(rep.max_pairwise_radial);
        out["max_odd_part"] = json_number(rep.max_odd_part);
        if (!rep.note.empty()) out["note"] = rep.note;
        Json runs = Json::array();
        for (const MASolution& s : rep.line_runs) runs.push_back(run_summary(s));
        out["line_runs"] = std::move(runs);
        Json rruns = Json::array();
        for (const MASolution& s : rep.radial_runs) rruns.push_back(run_summary(s));
        out["radial_runs"] = std::move(rruns);
        if (!rep.line_runs.empty()) {
            files_out.emplace_back("ma_solution.json",
                                   to_json(rep.line_runs.front().psi).dump(2) + "\n");
            files_out.emplace_back(
                "ma_trace.json", trace_to_json(rep.line_runs.front().trace).dump(2) + "\n");
        }
        return out;
    }

    GridFunction initial;
    if (config.contains("initial"))
        initial = grid_from_json(config.at("initial"));
    else
        initial = default_ma_initials(points, radius, radial).front();
    const MASolution sol = radial ? solve_ma_radial(initial, max_iter, damping)
                                  : solve_ma_1d(initial, max_iter, damping);
    out = run_summary(sol);
    out["mode"] = radial ? "radial" : "line";
    files_out.emplace_back("ma_solution.json", to_json(sol.psi).dump(2) + "\n");
    files_out.emplace_back("ma_trace.json", trace_to_json(sol.trace).dump(2) + "\n");
    return out;
}

} // namespace lcgeom
