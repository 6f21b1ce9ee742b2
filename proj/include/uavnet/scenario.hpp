#pragma once

#include "uavnet/channel.hpp"
#include "uavnet/geometry.hpp"
#include "uavnet/interference.hpp"
#include "uavnet/queueing.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uavnet {

enum class NodeRole { source, interferer, uav_main, uav_interferer };

std::string_view to_string(NodeRole role);

struct NodeSpec {
    std::string id;
    NodeRole role = NodeRole::interferer;
    NodePosition position;
    bool placed = false;  ///< position drawn by place_nodes rather than given
    std::optional<std::string> target;
    std::optional<FadingKind> fading;  ///< nullopt selects the P_LoS >= 0.5 rule
    std::optional<double> beta;
    int line = 0;
};

struct InterferenceSettings {
    double gamma_th = 10.0;
    double temperature = 290.0;
    double bandwidth = 20e6;
    std::uint64_t moment_samples = 200000;
    std::uint64_t seed = 1;
    OutageConvention convention = OutageConvention::per_slot;
    double fit_quantum = 0.005;  ///< threshold resolution of the cached interference fits
};

/// Initial thresholds for the grouped IA-TC coordinates.
struct InitialThresholds {
    double rice = 3.0;
    double ray = 2.0;
    double source = 4.0;
};

struct OptimizerConfig {
    InitialThresholds beta_ini;
    double stp_m = 0.05;
    double stp_n = 0.02;
    double stp = 0.05;
    int maxiter = 100;
    double epsilon_r = 1e-4;
    double epsilon_beta = 1e-3;
    std::optional<double> beta_max_rice;  ///< optional cap on the Rician interferer group
    std::optional<double> beta_max_ray;   ///< optional cap on the Rayleigh interferer group
    bool gauss_seidel = false;
    std::uint64_t seed = 7;

    void validate() const;
};

enum class InterfererTraffic {
    saturated,  ///< a node occupies its best channel whenever the fading clears its threshold
    queued,     ///< only nodes with a queued packet occupy a channel
};

struct SimConfig {
    std::uint64_t num_slots = 1000000;
    std::uint64_t warmup_slots = 10000;
    std::uint64_t seed = 2024;
    OutageConvention convention = OutageConvention::per_slot;
    InterfererTraffic interferer_traffic = InterfererTraffic::saturated;
    int replications = 1;

    void validate() const;
};

struct Scenario {
    Environment env;
    RadioParams radio;
    TrafficParams traffic;
    InterferenceSettings interference;
    OptimizerConfig optimizer;
    SimConfig sim;
    std::uint64_t placement_seed = 1;
    std::vector<NodeSpec> nodes;

    const NodeSpec* find_node(std::string_view id) const;
};

/// Parses a scenario from YAML or JSON text, fills random positions and validates.
/// Throws ValidationError with the offending line.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Structural and parameter checks; resolves nothing.
void validate_scenario(const Scenario& s);

/// Experiment-axis edits used by sweeps.
Scenario with_uav_altitude(Scenario s, double altitude);
Scenario with_gamma_th(Scenario s, double gamma_th);
/// Keeps sources, UAVs and the first (count - kept) remaining nodes in file order.
Scenario with_node_count(Scenario s, std::size_t count);

} // namespace uavnet
