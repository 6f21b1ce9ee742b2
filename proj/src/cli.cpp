#include "uavnet/cli.hpp"

#include "uavnet/errors.hpp"
#include "uavnet/policy_opt.hpp"
#include "uavnet/simcheck.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fmt/format.h>

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace uavnet {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct CommonOptions {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format = "csv";
    std::vector<std::string> beta;
    std::string beta_file;
};

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.12g}", x);
}

/// 12 significant digits as a JSON number; non-finite values become null.
Json jnum(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::stod(fmt::format("{:.12g}", x));
}

Json jopt(const std::optional<double>& x) { return x ? jnum(*x) : Json(nullptr); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

using Row = std::vector<std::string>;

void write_csv(std::ostream& os, const Row& header, const std::vector<Row>& rows) {
    auto line = [&](const Row& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
        os << '\n';
    };
    line(header);
    for (const Row& r : rows) line(r);
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path.string() + "'");
    f << text;
}

std::string csv_text(const Row& header, const std::vector<Row>& rows) {
    std::ostringstream os;
    write_csv(os, header, rows);
    return os.str();
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

fs::path out_path(const CommonOptions& o, const std::string& name) {
    return (o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir)) / name;
}

Scenario load(const CommonOptions& o) {
    Scenario s = load_scenario(o.scenario);
    if (o.seed) {
        s.interference.seed = *o.seed;
        s.optimizer.seed = *o.seed;
        s.sim.seed = *o.seed;
    }
    return s;
}

void apply_beta_file(const NetworkModel& model, PolicyVector& pv, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open beta file '" + path + "'");
    Json j;
    try {
        j = Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw ValidationError("beta file '" + path + "': " + e.what());
    }
    if (!j.contains("beta") || !j["beta"].is_object()) {
        throw ValidationError("beta file '" + path + "' needs a 'beta' object mapping node ids to thresholds");
    }
    for (const auto& [id, v] : j["beta"].items()) {
        if (!v.is_number()) throw ValidationError("beta file: threshold of node '" + id + "' is not a number");
        model.apply_override(pv, id, v.get<double>());
    }
}

void apply_beta_flags(const NetworkModel& model, PolicyVector& pv, const std::vector<std::string>& flags) {
    for (const std::string& f : flags) {
        const auto eq = f.find('=');
        if (eq == std::string::npos || eq == 0) throw ValidationError("--beta expects id=value, got '" + f + "'");
        const std::string id = f.substr(0, eq);
        const std::string text = f.substr(eq + 1);
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } catch (const std::exception&) {
            throw ValidationError("--beta value for node '" + id + "' is not a number: '" + text + "'");
        }
        model.apply_override(pv, id, v);
    }
}

PolicyVector resolve_policy(const NetworkModel& model, const CommonOptions& o) {
    PolicyVector pv = model.default_policy();
    if (!o.beta_file.empty()) apply_beta_file(model, pv, o.beta_file);
    apply_beta_flags(model, pv, o.beta);
    return pv;
}

std::string fading_name(const Transmitter& t) { return std::string(to_string(t.link.fading.kind)); }

// ---- evaluate -------------------------------------------------------------

const Row kEvaluateHeader = {"node",   "role",  "fading",       "target",
                             "beta",   "beta_max", "mu",        "p_dly",
                             "p_ov",   "p_out", "p_loss_exact", "p_loss_first_order",
                             "r_n",    "r_n_exact", "unstable", "clamped"};

int cmd_evaluate(const CommonOptions& o, std::ostream& out) {
    const NetworkModel model(load(o));
    const PolicyVector pv = resolve_policy(model, o);
    const auto rows = evaluate_all(model, pv);
    const auto& nodes = model.scenario().nodes;

    std::string text;
    if (o.format == "json") {
        Json j = Json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Transmitter& t = model.transmitters()[i];
            const LossBreakdown& b = rows[i];
            j.push_back({{"node", t.id},
                         {"role", std::string(to_string(t.role))},
                         {"fading", fading_name(t)},
                         {"target", nodes[t.receiver].id},
                         {"beta", jnum(pv.beta[i])},
                         {"beta_max", jnum(t.beta_max)},
                         {"mu", jnum(b.mu)},
                         {"p_dly", jnum(b.p_dly)},
                         {"p_ov", jnum(b.p_ov)},
                         {"p_out", jnum(b.p_out)},
                         {"p_loss_exact", jnum(b.p_loss_exact)},
                         {"p_loss_first_order", jnum(b.p_loss_first_order)},
                         {"r_n", jnum(b.r_n)},
                         {"r_n_exact", jnum(b.r_n_exact)},
                         {"unstable", b.flags.unstable},
                         {"clamped", b.flags.clamped}});
        }
        text = json_text(Json{{"nodes", j}});
    } else {
        std::vector<Row> table;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Transmitter& t = model.transmitters()[i];
            const LossBreakdown& b = rows[i];
            table.push_back({t.id, std::string(to_string(t.role)), fading_name(t), nodes[t.receiver].id,
                             num(pv.beta[i]), num(t.beta_max), num(b.mu), num(b.p_dly), num(b.p_ov), num(b.p_out),
                             num(b.p_loss_exact), num(b.p_loss_first_order), num(b.r_n), num(b.r_n_exact),
                             b.flags.unstable ? "1" : "0", b.flags.clamped ? "1" : "0"});
        }
        text = csv_text(kEvaluateHeader, table);
    }
    out << text;
    if (!o.out_dir.empty()) write_file(out_path(o, o.format == "json" ? "evaluate.json" : "evaluate.csv"), text);
    return exit_ok;
}

// ---- optimize ---------------------------------------------------------------

struct AlgoRun {
    std::string algo;
    PolicyVector policy;
    bool converged = true;
    int iterations = 0;
    std::optional<std::size_t> source;
    std::optional<double> beta_rice;
    std::optional<double> beta_ray;
    std::vector<LossBreakdown> per_node;
    Row trace_header;
    std::vector<Row> trace;
};

double mean_r(const std::vector<LossBreakdown>& v) {
    double s = 0.0;
    for (const auto& b : v) s += b.r_n;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void append_rounds(AlgoRun& run, int round, const std::vector<double>& beta, const std::vector<double>& r) {
    for (std::size_t i = 0; i < beta.size(); ++i) {
        run.trace.push_back({std::to_string(round), run.policy.ids[i], num(beta[i]), num(r[i])});
    }
}

AlgoRun run_algo(const NetworkModel& model, const std::string& algo) {
    AlgoRun run;
    run.algo = algo;
    run.source = model.source_index();
    if (algo == "ia-tc") {
        const TcResult r = ia_tc(model);
        run.policy = r.policy;
        run.converged = r.converged;
        run.iterations = r.iterations;
        if (r.has_rice) run.beta_rice = r.trace.empty() ? model.scenario().optimizer.beta_ini.rice : *r.trace.back().beta_rice;
        if (r.has_ray) run.beta_ray = r.trace.empty() ? model.scenario().optimizer.beta_ini.ray : *r.trace.back().beta_ray;
        run.trace_header = {"iteration", "beta_rice", "beta_ray", "beta_n", "r_best"};
        const auto& ini = model.scenario().optimizer.beta_ini;
        auto opt = [](const std::optional<double>& x) { return x ? num(*x) : std::string(); };
        run.trace.push_back({"0", r.has_rice ? num(ini.rice) : "", r.has_ray ? num(ini.ray) : "", num(ini.source),
                             num(r.r_initial)});
        for (const TcTraceRow& row : r.trace) {
            run.trace.push_back({std::to_string(row.iteration), opt(row.beta_rice), opt(row.beta_ray), num(row.beta_n),
                                 num(row.r_best)});
        }
        run.per_node = evaluate_all(model, run.policy);
    } else if (algo == "ia-dtc") {
        const DtcResult r = ia_dtc(model);
        run.policy = r.policy;
        run.converged = r.converged;
        run.iterations = r.iterations;
        run.trace_header = {"round", "node", "beta", "r_n"};
        append_rounds(run, 0, r.selfish.beta, r.selfish.r);
        for (std::size_t k = 0; k < r.rounds.size(); ++k) {
            append_rounds(run, static_cast<int>(k + 1), r.rounds[k].beta, r.rounds[k].r);
        }
        run.per_node = r.final;
    } else if (algo.rfind("baseline:", 0) == 0) {
        const BaselineKind kind = parse_baseline(algo.substr(9));
        run.policy = baseline_policy(kind, model, model.scenario().optimizer.seed);
        run.per_node = evaluate_all(model, run.policy);
        run.trace_header = {"round", "node", "beta", "r_n"};
        std::vector<double> r;
        for (const auto& b : run.per_node) r.push_back(b.r_n);
        append_rounds(run, 0, run.policy.beta, r);
    } else {
        throw ValidationError("unknown algorithm '" + algo +
                              "' (expected ia-tc, ia-dtc or baseline:random|aggressive|selfish|conservative)");
    }
    return run;
}

Json result_json(const NetworkModel& model, const AlgoRun& run) {
    Json beta = Json::object();
    Json nodes = Json::array();
    for (std::size_t i = 0; i < run.policy.size(); ++i) {
        // Full precision so that re-loading reproduces the throughput exactly.
        beta[run.policy.ids[i]] = run.policy.beta[i];
        nodes.push_back({{"id", run.policy.ids[i]},
                         {"beta", jnum(run.policy.beta[i])},
                         {"beta_max", jnum(model.transmitters()[i].beta_max)},
                         {"r_n", jnum(run.per_node[i].r_n)},
                         {"r_n_exact", jnum(run.per_node[i].r_n_exact)}});
    }
    Json j;
    j["algo"] = run.algo;
    j["converged"] = run.converged;
    j["iterations"] = run.iterations;
    j["source"] = run.source ? Json(run.policy.ids[*run.source]) : Json(nullptr);
    j["r_star"] = run.source ? jnum(run.per_node[*run.source].r_n) : Json(nullptr);
    j["r_mean"] = jnum(mean_r(run.per_node));
    if (run.algo == "ia-tc") {
        j["beta_rice"] = jopt(run.beta_rice);
        j["beta_ray"] = jopt(run.beta_ray);
    }
    j["beta"] = beta;
    j["nodes"] = nodes;
    return j;
}

int cmd_optimize(const CommonOptions& o, const std::string& algo, std::ostream& out) {
    const NetworkModel model(load(o));
    const AlgoRun run = run_algo(model, algo);
    write_file(out_path(o, "trace.csv"), csv_text(run.trace_header, run.trace));
    write_file(out_path(o, "result.json"), json_text(result_json(model, run)));
    out << "algo=" << run.algo << " converged=" << (run.converged ? "true" : "false")
        << " iterations=" << run.iterations;
    if (run.source) out << " r_star=" << num(run.per_node[*run.source].r_n);
    out << " r_mean=" << num(mean_r(run.per_node)) << '\n';
    return exit_ok;
}

// ---- sweep ------------------------------------------------------------------

const Row kSweepHeader = {"param",     "value",    "algo",        "converged", "iterations",
                          "beta_rice", "beta_ray", "beta_source", "r_source",  "r_mean"};

Scenario sweep_point(const Scenario& base, const std::string& param, double value) {
    if (param == "uav_alt") return with_uav_altitude(base, value);
    if (param == "gamma_th") return with_gamma_th(base, value);
    if (param == "num_nodes") {
        if (!(value >= 1.0) || value != std::floor(value)) {
            throw ValidationError("num_nodes values must be positive integers, got " + num(value));
        }
        return with_node_count(base, static_cast<std::size_t>(value));
    }
    throw ValidationError("unknown sweep parameter '" + param + "' (expected uav_alt, num_nodes or gamma_th)");
}

int cmd_sweep(const CommonOptions& o, const std::string& param, const std::vector<double>& values,
              const std::string& algo, std::ostream& out) {
    const Scenario base = load(o);
    if (values.empty()) throw ValidationError("--values needs at least one value");
    for (double v : values) sweep_point(base, param, v);

    std::vector<Row> rows(values.size());
    std::vector<Json> jrows(values.size());
    std::vector<std::exception_ptr> errors(values.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(values.size()); ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            const NetworkModel model(sweep_point(base, param, values[i]));
            const AlgoRun run = run_algo(model, algo);
            std::optional<double> bs;
            std::optional<double> rs;
            if (run.source) {
                bs = run.policy.beta[*run.source];
                rs = run.per_node[*run.source].r_n;
            }
            auto opt = [](const std::optional<double>& x) { return x ? num(*x) : std::string(); };
            rows[i] = {param,
                       num(values[i]),
                       algo,
                       run.converged ? "1" : "0",
                       std::to_string(run.iterations),
                       opt(run.beta_rice),
                       opt(run.beta_ray),
                       opt(bs),
                       opt(rs),
                       num(mean_r(run.per_node))};
            jrows[i] = Json{{"param", param},
                            {"value", jnum(values[i])},
                            {"algo", algo},
                            {"converged", run.converged},
                            {"iterations", run.iterations},
                            {"beta_rice", jopt(run.beta_rice)},
                            {"beta_ray", jopt(run.beta_ray)},
                            {"beta_source", jopt(bs)},
                            {"r_source", jopt(rs)},
                            {"r_mean", jnum(mean_r(run.per_node))}};
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::string text;
    if (o.format == "json") {
        Json arr = Json::array();
        for (auto& j : jrows) arr.push_back(std::move(j));
        text = json_text(Json{{"rows", arr}});
        write_file(out_path(o, "sweep.json"), text);
    } else {
        text = csv_text(kSweepHeader, rows);
        write_file(out_path(o, "sweep.csv"), text);
    }
    out << text;
    return exit_ok;
}

// ---- simulate ---------------------------------------------------------------

const Row kComparisonHeader = {"node",          "component", "analytic", "empirical",
                               "ci_half_width", "rel_error", "within_3ci"};

int cmd_simulate(const CommonOptions& o, const std::string& algo, std::optional<std::uint64_t> slots,
                 std::optional<std::uint64_t> warmup, std::optional<int> replications, std::ostream& out) {
    Scenario sc = load(o);
    if (slots) sc.sim.num_slots = *slots;
    if (warmup) sc.sim.warmup_slots = *warmup;
    if (replications) sc.sim.replications = *replications;
    sc.sim.validate();
    const NetworkModel model(sc);
    PolicyVector pv;
    if (!algo.empty()) {
        pv = run_algo(model, algo).policy;
        apply_beta_flags(model, pv, o.beta);
    } else {
        pv = resolve_policy(model, o);
    }
    const SimConfig& cfg = model.scenario().sim;
    const SimReport rep = simulate(model, pv, cfg);
    const auto analytic = evaluate_all(model, pv);

    std::vector<Row> table;
    Json nodes = Json::array();
    for (std::size_t i = 0; i < model.size(); ++i) {
        const LossBreakdown& a = analytic[i];
        const NodeEstimates& e = rep.estimates[i];
        const NodeCounts& c = rep.counts[i];
        double out_slot = a.p_out;
        if (sc.interference.convention == OutageConvention::per_transmission) out_slot *= a.mu;
        const double out_an =
            cfg.convention == OutageConvention::per_transmission ? (a.mu > 0 ? out_slot / a.mu : 0.0) : out_slot;
        const std::pair<const char*, std::pair<double, Estimate>> comps[] = {
            {"mu", {a.mu, e.mu}},       {"p_dly", {a.p_dly, e.p_dly}}, {"p_ov", {a.p_ov, e.p_ov}},
            {"p_out", {out_an, e.p_out}}, {"r_n", {a.r_n, e.r_n}},
        };
        Json comp = Json::object();
        for (const auto& [name, pair] : comps) {
            const double an = pair.first;
            const Estimate& em = pair.second;
            const double diff = std::abs(em.value - an);
            const double rel = an != 0.0 ? diff / std::abs(an) : (diff == 0.0 ? 0.0 : HUGE_VAL);
            const bool ok = diff <= 3.0 * em.half_width;
            table.push_back({rep.ids[i], name, num(an), num(em.value), num(em.half_width), num(rel), ok ? "1" : "0"});
            comp[name] = {{"analytic", jnum(an)},
                          {"empirical", jnum(em.value)},
                          {"ci_half_width", jnum(em.half_width)},
                          {"rel_error", jnum(rel)}};
        }
        nodes.push_back({{"id", rep.ids[i]},
                         {"beta", jnum(pv.beta[i])},
                         {"counts",
                          {{"slots", c.slots},
                           {"arrivals", c.arrivals},
                           {"carried_in", c.carried_in},
                           {"delivered", c.delivered},
                           {"outages", c.outages},
                           {"overflow", c.overflow},
                           {"expired", c.expired},
                           {"queued", c.queued},
                           {"eligible_slots", c.eligible_slots},
                           {"backlogged_slots", c.backlogged_slots}}},
                         {"conserved", c.conserved()},
                         {"components", comp}});
    }
    Json j;
    j["slots_simulated"] = rep.slots_simulated;
    j["replications"] = rep.replications;
    j["warmup_slots"] = cfg.warmup_slots;
    j["seed"] = cfg.seed;
    j["outage_convention"] = cfg.convention == OutageConvention::per_slot ? "per-slot" : "per-transmission";
    j["interferer_traffic"] = cfg.interferer_traffic == InterfererTraffic::saturated ? "saturated" : "queued";
    j["nodes"] = nodes;

    const std::string csv = csv_text(kComparisonHeader, table);
    write_file(out_path(o, "simreport.json"), json_text(j));
    write_file(out_path(o, "comparison.csv"), csv);
    out << csv;
    return exit_ok;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool policy_flags) {
    cmd->add_option("--scenario", o.scenario, "Scenario file (YAML or JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Seed for interference moments, baselines and simulation");
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--format", o.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    if (policy_flags) {
        cmd->add_option("--beta", o.beta, "Threshold override id=value (repeatable)");
        cmd->add_option("--beta-file", o.beta_file, "JSON file with a 'beta' object, e.g. result.json")
            ->check(CLI::ExistingFile);
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Interference-aware throughput analysis and threshold optimization for UAV networks", "uavnet"};
    app.require_subcommand(1);

    CommonOptions eval_o, opt_o, sweep_o, sim_o;
    std::string opt_algo, sweep_algo = "ia-dtc", sweep_param, sim_algo;
    std::vector<double> sweep_values;
    std::optional<std::uint64_t> sim_slots, sim_warmup;
    std::optional<int> sim_reps;

    auto* evaluate = app.add_subcommand("evaluate", "Per-node loss breakdown for a threshold vector");
    add_common(evaluate, eval_o, true);

    auto* optimize = app.add_subcommand("optimize", "Run IA-TC, IA-DTC or a baseline policy");
    add_common(optimize, opt_o, false);
    optimize->add_option("--algo", opt_algo, "ia-tc | ia-dtc | baseline:<random|aggressive|selfish|conservative>")
        ->required();

    auto* sweep = app.add_subcommand("sweep", "Re-optimize over one experiment axis");
    add_common(sweep, sweep_o, false);
    sweep->add_option("--param", sweep_param, "uav_alt | num_nodes | gamma_th")->required();
    sweep->add_option("--values", sweep_values, "Comma-separated values")->required()->delimiter(',');
    sweep->add_option("--algo", sweep_algo, "Algorithm run at every point");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the analytic losses");
    add_common(simulate, sim_o, true);
    simulate->add_option("--algo", sim_algo, "Take thresholds from this algorithm instead of the scenario");
    simulate->add_option("--slots", sim_slots, "Slots per replication");
    simulate->add_option("--warmup", sim_warmup, "Warm-up slots per replication");
    simulate->add_option("--replications", sim_reps, "Independent replications");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return exit_validation;
    }

    try {
        if (*evaluate) return cmd_evaluate(eval_o, out);
        if (*optimize) return cmd_optimize(opt_o, opt_algo, out);
        if (*sweep) return cmd_sweep(sweep_o, sweep_param, sweep_values, sweep_algo, out);
        if (*simulate) return cmd_simulate(sim_o, sim_algo, sim_slots, sim_warmup, sim_reps, out);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return exit_validation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << " (best estimate " << num(e.best_estimate()) << ")\n";
        return exit_numerical;
    } catch (const DomainError& e) {
        err << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_failure;
}

} // namespace uavnet
