#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace uavnet {

struct NodePosition {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    std::string node_id;

    void validate() const;
};

/// Parameters of the line-of-sight probability model and the deployment area.
struct Environment {
    double zeta = 20.0;
    double v = 3e-4;
    double mu_env = 0.5;
    double area_side = 100.0;

    void validate() const;
};

struct Distances {
    double horizontal;
    double vertical;
    double total;
};

Distances distances(const NodePosition& tx, const NodePosition& rx);

/// Line-of-sight probability between a transmitter at height z_i and a receiver at z_u.
/// Equal heights (compared exactly) select the building-height branch; otherwise the
/// Q-function branch. A purely vertical link with unequal heights has P_LoS = 1.
double p_los(const NodePosition& tx, const NodePosition& rx, const Environment& env);

/// Places `count` nodes: the `fixed` entries first and unchanged, then uniformly random
/// ground nodes (z = 0) inside [0, area_side]^2 with generated ids "n<k>".
std::vector<NodePosition> place_nodes(std::size_t count, const Environment& env, std::uint64_t seed,
                                      const std::vector<NodePosition>& fixed = {});

} // namespace uavnet
