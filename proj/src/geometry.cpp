#include "uavnet/geometry.hpp"

#include "uavnet/errors.hpp"
#include "uavnet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace uavnet {

void NodePosition::validate() const {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
        throw ValidationError("node '" + node_id + "': coordinates must be finite");
    }
    if (z < 0.0) throw ValidationError("node '" + node_id + "': height must be non-negative");
}

void Environment::validate() const {
    if (!(zeta > 0.0) || !(v > 0.0) || !(mu_env > 0.0) || !(area_side > 0.0)) {
        throw ValidationError("environment: zeta, v, mu and area_side must be strictly positive");
    }
}

Distances distances(const NodePosition& tx, const NodePosition& rx) {
    const double dh = std::hypot(tx.x - rx.x, tx.y - rx.y);
    const double dv = std::abs(tx.z - rx.z);
    return {dh, dv, std::hypot(dh, dv)};
}

double p_los(const NodePosition& tx, const NodePosition& rx, const Environment& env) {
    const Distances d = distances(tx, rx);
    const double density = std::sqrt(env.v * env.mu_env);
    if (tx.z == rx.z) {
        const double base = -std::expm1(-(tx.z * tx.z) / (2.0 * env.zeta * env.zeta));
        return std::clamp(std::pow(base, d.total * density), 0.0, 1.0);
    }
    const double q_gap = std::abs(numerics::normal_q(tx.z / env.zeta) - numerics::normal_q(rx.z / env.zeta));
    const double base = 1.0 - std::sqrt(2.0 * std::numbers::pi) * env.zeta / d.vertical * q_gap;
    return std::clamp(std::pow(std::max(base, 0.0), d.horizontal * density), 0.0, 1.0);
}

std::vector<NodePosition> place_nodes(std::size_t count, const Environment& env, std::uint64_t seed,
                                      const std::vector<NodePosition>& fixed) {
    if (count == 0) throw ValidationError("place_nodes: count must be at least 1");
    if (fixed.size() > count) throw ValidationError("place_nodes: more fixed nodes than count");
    env.validate();

    std::vector<NodePosition> out(fixed.begin(), fixed.end());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, env.area_side);
    for (std::size_t k = out.size(); k < count; ++k) {
        NodePosition p;
        p.x = coord(rng);
        p.y = coord(rng);
        p.z = 0.0;
        p.node_id = "n" + std::to_string(k + 1);
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace uavnet
