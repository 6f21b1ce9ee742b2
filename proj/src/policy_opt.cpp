#include "uavnet/policy_opt.hpp"

#include "uavnet/errors.hpp"
#include "uavnet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace uavnet {

SearchResult coordinate_search(const std::function<double(double)>& objective, double value, double score,
                               double lo, double hi, double stp, int max_moves) {
    SearchResult best{value, score, 0};
    if (max_moves < 1) return best;
    auto project = [&](double x) { return std::clamp(x, lo, hi); };
    const double up = project(value + stp);
    const double down = project(value - stp);
    double s_up = -std::numeric_limits<double>::infinity();
    double s_down = s_up;
    if (up != value) {
        s_up = objective(up);
        ++best.evaluations;
    }
    if (down != value) {
        s_down = objective(down);
        ++best.evaluations;
    }
    if (!(s_up > score) && !(s_down > score)) return best;
    const double dir = s_up >= s_down ? 1.0 : -1.0;
    best.value = dir > 0 ? up : down;
    best.score = dir > 0 ? s_up : s_down;
    for (int moves = 1; moves < max_moves; ++moves) {
        const double next = project(best.value + dir * stp);
        if (next == best.value) break;
        const double s = objective(next);
        ++best.evaluations;
        if (!(s > best.score)) break;
        best.value = next;
        best.score = s;
    }
    return best;
}

double search_score(const NetworkModel& model, std::size_t tx, std::span<const double> beta) {
    return model.evaluate(tx, beta).r_n_unclamped;
}

SearchResult local_coordinate_search(const NetworkModel& model, std::size_t tx, std::span<const double> beta,
                                     double stp, int max_moves) {
    std::vector<double> work(beta.begin(), beta.end());
    auto objective = [&](double b) {
        work[tx] = b;
        return search_score(model, tx, work);
    };
    const double start = beta[tx];
    const double score = objective(start);
    SearchResult r = coordinate_search(objective, start, score, 0.0, model.transmitters()[tx].beta_max, stp, max_moves);
    ++r.evaluations;
    return r;
}

namespace {

struct Groups {
    std::vector<std::size_t> rice;
    std::vector<std::size_t> ray;
    double rice_max = std::numeric_limits<double>::infinity();
    double ray_max = std::numeric_limits<double>::infinity();
};

Groups interferer_groups(const NetworkModel& model, std::size_t source) {
    Groups g;
    const auto& tx = model.transmitters();
    for (std::size_t i = 0; i < tx.size(); ++i) {
        if (i == source) continue;
        if (tx[i].link.fading.kind == FadingKind::rician) {
            g.rice.push_back(i);
            g.rice_max = std::min(g.rice_max, tx[i].beta_max);
        } else {
            g.ray.push_back(i);
            g.ray_max = std::min(g.ray_max, tx[i].beta_max);
        }
    }
    return g;
}

double clamped(double score) { return std::max(0.0, score); }

} // namespace

TcResult ia_tc(const NetworkModel& model) {
    const auto src = model.source_index();
    if (!src) throw ValidationError("ia-tc needs exactly one node with role source and a target");
    const OptimizerConfig& cfg = model.scenario().optimizer;
    const std::size_t s = *src;
    const Groups g = interferer_groups(model, s);

    TcResult res;
    res.source = s;
    res.policy = model.default_policy();
    res.has_rice = !g.rice.empty();
    res.has_ray = !g.ray.empty();
    res.rice_max = res.has_rice ? g.rice_max : 0.0;
    res.ray_max = res.has_ray ? g.ray_max : 0.0;

    double rice = cfg.beta_ini.rice;
    double ray = cfg.beta_ini.ray;
    double bn = cfg.beta_ini.source;
    const double source_max = model.transmitters()[s].beta_max;
    if (res.has_rice && rice > g.rice_max) {
        throw ValidationError("optimizer: beta_ini rice " + std::to_string(rice) + " exceeds the group bound " +
                              std::to_string(g.rice_max));
    }
    if (res.has_ray && ray > g.ray_max) {
        throw ValidationError("optimizer: beta_ini ray " + std::to_string(ray) + " exceeds the group bound " +
                              std::to_string(g.ray_max));
    }
    if (bn > source_max) {
        throw ValidationError("optimizer: beta_ini source " + std::to_string(bn) + " exceeds the source bound " +
                              std::to_string(source_max));
    }

    std::vector<double>& beta = res.policy.beta;
    auto assign = [&] {
        for (std::size_t i : g.rice) beta[i] = rice;
        for (std::size_t i : g.ray) beta[i] = ray;
        beta[s] = bn;
    };
    assign();
    double best = search_score(model, s, beta);
    res.r_initial = clamped(best);

    auto group_objective = [&](double& coord) {
        return [&](double x) {
            const double keep = coord;
            coord = x;
            assign();
            const double v = search_score(model, s, beta);
            coord = keep;
            assign();
            return v;
        };
    };

    for (int it = 1; it <= cfg.maxiter; ++it) {
        const double prev = best;
        if (res.has_rice && rice + cfg.stp_m < g.rice_max) {
            const auto r = coordinate_search(group_objective(rice), rice, best, 0.0, g.rice_max, cfg.stp_m, cfg.maxiter);
            rice = r.value;
            best = r.score;
        }
        if (res.has_ray && ray + cfg.stp_m < g.ray_max) {
            const auto r = coordinate_search(group_objective(ray), ray, best, 0.0, g.ray_max, cfg.stp_m, cfg.maxiter);
            ray = r.value;
            best = r.score;
        }
        const auto r = coordinate_search(group_objective(bn), bn, best, 0.0, source_max, cfg.stp_n, cfg.maxiter);
        bn = r.value;
        best = r.score;
        assign();

        TcTraceRow row;
        row.iteration = it;
        if (res.has_rice) row.beta_rice = rice;
        if (res.has_ray) row.beta_ray = ray;
        row.beta_n = bn;
        row.r_best = clamped(best);
        res.trace.push_back(row);
        res.iterations = it;
        if (std::abs(prev - best) < cfg.epsilon_r) {
            res.converged = true;
            break;
        }
    }
    res.final = model.evaluate(s, beta);
    return res;
}

DtcRound best_response_round(const NetworkModel& model, std::span<const double> snapshot, bool gauss_seidel) {
    const OptimizerConfig& cfg = model.scenario().optimizer;
    const std::size_t n = model.size();
    DtcRound round;
    round.beta.assign(snapshot.begin(), snapshot.end());
    round.r.assign(n, 0.0);
    if (gauss_seidel) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = local_coordinate_search(model, i, round.beta, cfg.stp, cfg.maxiter);
            round.beta[i] = r.value;
            round.r[i] = clamped(r.score);
        }
    } else {
        std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
            const auto i = static_cast<std::size_t>(k);
            try {
                const auto r = local_coordinate_search(model, i, snapshot, cfg.stp, cfg.maxiter);
                round.beta[i] = r.value;
                round.r[i] = clamped(r.score);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        round.max_change = std::max(round.max_change, std::abs(round.beta[i] - snapshot[i]));
    }
    return round;
}

DtcResult ia_dtc(const NetworkModel& model) {
    const OptimizerConfig& cfg = model.scenario().optimizer;
    DtcResult res;
    res.policy = model.upper_policy();
    res.selfish = best_response_round(model, res.policy.beta, cfg.gauss_seidel);
    std::vector<double> candidate = res.selfish.beta;
    for (int it = 1; it <= cfg.maxiter; ++it) {
        DtcRound round = best_response_round(model, candidate, cfg.gauss_seidel);
        candidate = round.beta;
        const bool done = round.max_change < cfg.epsilon_beta;
        res.rounds.push_back(std::move(round));
        res.iterations = it;
        if (done) {
            res.converged = true;
            break;
        }
    }
    res.policy.beta = candidate;
    res.final = evaluate_all(model, res.policy);
    return res;
}

BaselineKind parse_baseline(std::string_view name) {
    if (name == "random") return BaselineKind::random;
    if (name == "aggressive") return BaselineKind::aggressive;
    if (name == "selfish") return BaselineKind::selfish;
    if (name == "conservative") return BaselineKind::conservative;
    throw ValidationError("unknown baseline '" + std::string(name) +
                          "' (expected random|aggressive|selfish|conservative)");
}

std::string_view to_string(BaselineKind kind) {
    switch (kind) {
    case BaselineKind::random: return "random";
    case BaselineKind::aggressive: return "aggressive";
    case BaselineKind::selfish: return "selfish";
    case BaselineKind::conservative: return "conservative";
    }
    return "?";
}

PolicyVector baseline_policy(BaselineKind kind, const NetworkModel& model, std::uint64_t seed) {
    PolicyVector pv = model.upper_policy();
    switch (kind) {
    case BaselineKind::random: {
        kernels::Rng rng(kernels::substream_seed(seed, 0));
        for (std::size_t i = 0; i < pv.size(); ++i) pv.beta[i] = kernels::uniform01(rng) * pv.upper[i];
        break;
    }
    case BaselineKind::aggressive:
        std::fill(pv.beta.begin(), pv.beta.end(), 0.0);
        break;
    case BaselineKind::selfish:
        pv.beta = best_response_round(model, pv.upper, false).beta;
        break;
    case BaselineKind::conservative:
        for (std::size_t i = 0; i < pv.size(); ++i) pv.beta[i] = 0.95 * pv.upper[i];
        break;
    }
    return pv;
}

std::vector<LossBreakdown> evaluate_all(const NetworkModel& model, const PolicyVector& pv) {
    std::vector<LossBreakdown> out(model.size());
    std::vector<std::exception_ptr> errors(model.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(model.size()); ++k) {
        const auto i = static_cast<std::size_t>(k);
        try {
            out[i] = model.evaluate(i, pv.beta);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

} // namespace uavnet
