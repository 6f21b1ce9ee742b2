#pragma once

#include "uavnet/network.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace uavnet {

struct SearchResult {
    double value = 0.0;  ///< coordinate value reached
    double score = 0.0;  ///< objective at `value`
    int evaluations = 0;
};

/// Greedy line search on one coordinate. Probes value +/- stp (projected onto
/// [lo, hi]), follows the strictly improving direction until no probe improves or
/// `max_moves` moves were made. Ties keep the incumbent. `score` is the objective at
/// `value`; the returned score is never lower.
SearchResult coordinate_search(const std::function<double(double)>& objective, double value, double score,
                               double lo, double hi, double stp, int max_moves = 1 << 20);

/// Search score of one node: the first-order throughput before clamping at zero.
/// It ranks like R_n wherever R_n > 0 and keeps a slope where R_n is clamped.
double search_score(const NetworkModel& model, std::size_t tx, std::span<const double> beta);

/// Best threshold of node `tx` with every other threshold frozen, starting from beta[tx].
SearchResult local_coordinate_search(const NetworkModel& model, std::size_t tx, std::span<const double> beta,
                                     double stp, int max_moves);

struct TcTraceRow {
    int iteration = 0;
    std::optional<double> beta_rice;
    std::optional<double> beta_ray;
    double beta_n = 0.0;
    double r_best = 0.0;
};

struct TcResult {
    std::size_t source = 0;
    PolicyVector policy;
    double r_initial = 0.0;
    std::vector<TcTraceRow> trace;  ///< one row per iteration
    bool converged = false;
    int iterations = 0;
    double rice_max = 0.0;  ///< bound of the shared Rician interferer coordinate
    double ray_max = 0.0;
    bool has_rice = false;
    bool has_ray = false;
    LossBreakdown final;
};

/// Centralized coordinate search over {beta_Rice group, beta_Ray group, beta_source}.
/// Throws ValidationError without a unique source or when the initial point is infeasible.
TcResult ia_tc(const NetworkModel& model);

struct DtcRound {
    std::vector<double> beta;  ///< thresholds after the round
    std::vector<double> r;     ///< each node's throughput from its own search
    double max_change = 0.0;
};

struct DtcResult {
    PolicyVector policy;
    DtcRound selfish;              ///< best responses to all others at their bounds
    std::vector<DtcRound> rounds;  ///< one entry per best-response round
    bool converged = false;
    int iterations = 0;
    std::vector<LossBreakdown> final;  ///< per node at the returned thresholds
};

/// One synchronous best-response round: every node searches against `snapshot`
/// (Jacobi), or against the progressively updated vector when gauss_seidel is set.
DtcRound best_response_round(const NetworkModel& model, std::span<const double> snapshot, bool gauss_seidel);

/// Distributed threshold control: start at the upper bounds, selfish pass, then
/// best-response rounds until no threshold moves by epsilon_beta or maxiter rounds.
DtcResult ia_dtc(const NetworkModel& model);

enum class BaselineKind { random, aggressive, selfish, conservative };

BaselineKind parse_baseline(std::string_view name);
std::string_view to_string(BaselineKind kind);

PolicyVector baseline_policy(BaselineKind kind, const NetworkModel& model, std::uint64_t seed);

/// Per-node breakdowns under a policy.
std::vector<LossBreakdown> evaluate_all(const NetworkModel& model, const PolicyVector& pv);

} // namespace uavnet
