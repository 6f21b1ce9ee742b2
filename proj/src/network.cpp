#include "uavnet/network.hpp"

#include "uavnet/errors.hpp"
#include "uavnet/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace uavnet {

bool PolicyVector::within_bounds() const {
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (!(beta[i] >= 0.0 && beta[i] <= upper[i])) return false;
    }
    return true;
}

void PolicyVector::check_bounds() const {
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (!(beta[i] >= 0.0 && beta[i] <= upper[i])) {
            throw ValidationError(fmt::format("beta for node '{}' is {:.12g}, outside [0, {:.12g}]", ids[i], beta[i],
                                              upper[i]));
        }
    }
}

NetworkModel::NetworkModel(Scenario scenario) : scenario_(std::move(scenario)) {
    validate_scenario(scenario_);
    const auto& nodes = scenario_.nodes;
    const RadioParams& rp = scenario_.radio;
    const TrafficParams& tp = scenario_.traffic;
    const OptimizerConfig& oc = scenario_.optimizer;

    auto node_index = [&](const std::string& id) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].id == id) return i;
        }
        throw ValidationError("unknown node '" + id + "'");
    };

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const NodeSpec& n = nodes[i];
        if (!n.target) continue;
        Transmitter t;
        t.id = n.id;
        t.node = i;
        t.receiver = node_index(*n.target);
        t.role = n.role;
        try {
            t.link = make_link(n.position, nodes[t.receiver].position, scenario_.env, rp, n.fading);
        } catch (const DomainError&) {
            throw ValidationError(fmt::format("link '{}' -> '{}' is shorter than the reference distance d0 = {} m",
                                              n.id, *n.target, rp.d0),
                                  n.line);
        }
        try {
            t.beta_max = beta_upper_bound(t.link.fading, tp.lambda_n, tp.slot, rp.num_channels);
        } catch (const InfeasibleTrafficError& e) {
            throw ValidationError(std::string("traffic: ") + e.what());
        }
        const bool rice = t.link.fading.kind == FadingKind::rician;
        if (n.role != NodeRole::source) {
            const auto& cap = rice ? oc.beta_max_rice : oc.beta_max_ray;
            if (cap) t.beta_max = std::min(t.beta_max, *cap);
        }
        if (n.beta) {
            t.default_beta = *n.beta;
        } else if (n.role == NodeRole::source) {
            t.default_beta = oc.beta_ini.source;
        } else {
            t.default_beta = rice ? oc.beta_ini.rice : oc.beta_ini.ray;
        }
        t.default_beta = std::min(t.default_beta, t.beta_max);
        tx_.push_back(std::move(t));
    }

    const std::size_t n = tx_.size();
    interferers_.assign(n, {});
    gain_.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t v = 0; v < n; ++v) {
        const NodeSpec& rx = nodes[tx_[v].receiver];
        for (std::size_t m = 0; m < n; ++m) {
            if (m == v || tx_[m].node == tx_[v].receiver) continue;
            const NodeSpec& from = nodes[tx_[m].node];
            LinkChannel path;
            try {
                path = make_link(from.position, rx.position, scenario_.env, rp);
            } catch (const DomainError&) {
                throw ValidationError(fmt::format("nodes '{}' and '{}' are closer than the reference distance d0 = {} m",
                                                  from.id, rx.id, rp.d0),
                                      from.line);
            }
            interferers_[v].push_back(m);
            gain_[m][v] = rp.tx_power * path.path_gain * path.path_gain;
        }
    }
    noise_ = thermal_noise(scenario_.interference.temperature, scenario_.interference.bandwidth);
}

std::size_t NetworkModel::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < tx_.size(); ++i) {
        if (tx_[i].id == id) return i;
    }
    if (scenario_.find_node(id)) throw ValidationError("node '" + std::string(id) + "' has no link target");
    throw ValidationError("unknown node '" + std::string(id) + "'");
}

std::optional<std::size_t> NetworkModel::source_index() const {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < tx_.size(); ++i) {
        if (tx_[i].role != NodeRole::source) continue;
        if (found) return std::nullopt;
        found = i;
    }
    return found;
}

double NetworkModel::signal_gain(std::size_t tx) const {
    const double g = tx_[tx].link.path_gain;
    return scenario_.radio.tx_power * g * g;
}

std::vector<Interferer> NetworkModel::interferers(std::size_t tx, std::span<const double> beta) const {
    std::vector<Interferer> out;
    out.reserve(interferers_[tx].size());
    for (std::size_t m : interferers_[tx]) out.push_back({tx_[m].link.fading, gain_[m][tx], beta[m]});
    return out;
}

InterferenceModel NetworkModel::interference_model(std::size_t) const {
    InterferenceModel im;
    im.gamma_th = scenario_.interference.gamma_th;
    im.noise_power = noise_;
    im.moment_samples = scenario_.interference.moment_samples;
    im.moment_seed = scenario_.interference.seed;
    im.convention = scenario_.interference.convention;
    return im;
}

std::optional<GammaFit> NetworkModel::interference_fit(std::size_t tx, std::span<const double> beta) const {
    const double q = scenario_.interference.fit_quantum;
    FitKey key{tx, {}};
    std::vector<double> snapped(beta.begin(), beta.end());
    for (std::size_t m : interferers_[tx]) {
        const auto level = static_cast<std::int64_t>(std::llround(beta[m] / q));
        key.second.push_back(level);
        snapped[m] = static_cast<double>(level) * q;
    }
    {
        std::lock_guard lock(cache_mutex_);
        if (auto it = fit_cache_.find(key); it != fit_cache_.end()) return it->second;
    }
    const auto list = interferers(tx, snapped);
    const InterferenceModel im = interference_model(tx);
    std::optional<GammaFit> fit;
    if (!list.empty()) {
        fit = fit_interference(interference_moments(list, scenario_.radio.num_channels, im.moment_samples, im.moment_seed));
    }
    std::lock_guard lock(cache_mutex_);
    fit_cache_.emplace(std::move(key), fit);
    return fit;
}

std::size_t NetworkModel::cached_fits() const {
    std::lock_guard lock(cache_mutex_);
    return fit_cache_.size();
}

LossBreakdown NetworkModel::evaluate(std::size_t tx, std::span<const double> beta) const {
    const Transmitter& t = tx_[tx];
    const TrafficParams& tp = scenario_.traffic;
    const int channels = scenario_.radio.num_channels;
    const double b = beta[tx];
    const double mu = transmit_prob(t.link.fading, b, channels);
    const QueueLoss dly = p_delay(mu, tp);
    const QueueLoss ov = p_overflow(mu, tp);
    const auto fit = interference_fit(tx, beta);
    const double out = p_outage(t.link, scenario_.radio.tx_power, b, channels, interference_model(tx), fit);
    return compose_losses(tp.lambda_n, mu, dly.probability, ov.probability, out, dly.unstable || ov.unstable);
}

PolicyVector NetworkModel::default_policy() const {
    PolicyVector pv;
    for (const Transmitter& t : tx_) {
        pv.ids.push_back(t.id);
        pv.beta.push_back(t.default_beta);
        pv.upper.push_back(t.beta_max);
    }
    return pv;
}

PolicyVector NetworkModel::upper_policy() const {
    PolicyVector pv = default_policy();
    pv.beta = pv.upper;
    return pv;
}

void NetworkModel::apply_override(PolicyVector& pv, std::string_view id, double value) const {
    const std::size_t i = index_of(id);
    if (!(value >= 0.0 && value <= pv.upper[i])) {
        throw ValidationError(fmt::format("beta override for node '{}' is {:.12g}, outside [0, {:.12g}] (beta_max)", id,
                                          value, pv.upper[i]));
    }
    pv.beta[i] = value;
}

LossBreakdown expected_throughput(const NetworkModel& model, const PolicyVector& policy, std::string_view source_id) {
    policy.check_bounds();
    return model.evaluate(model.index_of(source_id), policy.beta);
}

} // namespace uavnet
