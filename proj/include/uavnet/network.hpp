#pragma once

// Network-level model: resolves the scenario into transmit links, builds the
// interference seen at every receiver and evaluates per-node throughput.

#include "uavnet/scenario.hpp"
#include "uavnet/throughput.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uavnet {

/// Thresholds of every transmitter, in transmitter order, with their upper bounds.
struct PolicyVector {
    std::vector<std::string> ids;
    std::vector<double> beta;
    std::vector<double> upper;

    std::size_t size() const { return beta.size(); }
    bool within_bounds() const;
    /// Throws ValidationError naming the node and the violated bound.
    void check_bounds() const;
};

struct Transmitter {
    std::string id;
    std::size_t node = 0;      ///< index into Scenario::nodes
    std::size_t receiver = 0;  ///< index into Scenario::nodes
    NodeRole role = NodeRole::interferer;
    LinkChannel link;
    double beta_max = 0.0;     ///< stability bound, capped by the optimizer group caps
    double default_beta = 0.0;
};

class NetworkModel {
public:
    explicit NetworkModel(Scenario scenario);

    const Scenario& scenario() const { return scenario_; }
    const std::vector<Transmitter>& transmitters() const { return tx_; }
    std::size_t size() const { return tx_.size(); }

    /// Transmitter index of a node id; throws ValidationError for unknown or silent nodes.
    std::size_t index_of(std::string_view id) const;
    /// The transmitter with role source, if exactly one exists.
    std::optional<std::size_t> source_index() const;

    /// Interferers seen by the receiver of transmitter `tx` under `beta`.
    std::vector<Interferer> interferers(std::size_t tx, std::span<const double> beta) const;
    /// Indices of the transmitters that interfere with `tx`.
    const std::vector<std::size_t>& interferer_indices(std::size_t tx) const { return interferers_[tx]; }
    /// P_m * path_gain^2 from transmitter `from` to the receiver of `tx`.
    double rx_power_gain(std::size_t from, std::size_t tx) const { return gain_[from][tx]; }
    /// Received signal power factor P * path_gain^2 of transmitter `tx` on its own link.
    double signal_gain(std::size_t tx) const;

    /// Gamma fit of the interference at the receiver of `tx`. Fits are cached on the
    /// quantized thresholds of the interferers and computed at the quantized values,
    /// so the result does not depend on evaluation order. Thread-safe.
    std::optional<GammaFit> interference_fit(std::size_t tx, std::span<const double> beta) const;

    InterferenceModel interference_model(std::size_t tx) const;

    LossBreakdown evaluate(std::size_t tx, std::span<const double> beta) const;
    double objective(std::size_t tx, std::span<const double> beta) const { return evaluate(tx, beta).r_n; }

    /// Thresholds from the scenario (or role defaults), clamped to the bounds.
    PolicyVector default_policy() const;
    /// Every threshold at its upper bound.
    PolicyVector upper_policy() const;
    /// Applies "id=value" overrides; throws ValidationError for unknown ids or bound violations.
    void apply_override(PolicyVector& pv, std::string_view id, double value) const;

    std::size_t cached_fits() const;

private:
    Scenario scenario_;
    std::vector<Transmitter> tx_;
    std::vector<std::vector<std::size_t>> interferers_;
    std::vector<std::vector<double>> gain_;
    double noise_ = 0.0;

    using FitKey = std::pair<std::size_t, std::vector<std::int64_t>>;
    mutable std::mutex cache_mutex_;
    mutable std::map<FitKey, std::optional<GammaFit>> fit_cache_;
};

/// Loss breakdown of the designated source node.
LossBreakdown expected_throughput(const NetworkModel& model, const PolicyVector& policy,
                                  std::string_view source_id);

} // namespace uavnet
