#include "uavnet/simcheck.hpp"

#include "uavnet/errors.hpp"
#include "uavnet/kernels.hpp"

#include <cmath>
#include <deque>
#include <exception>
#include <random>

namespace uavnet {

NodeCounts& NodeCounts::operator+=(const NodeCounts& o) {
    slots += o.slots;
    arrivals += o.arrivals;
    carried_in += o.carried_in;
    delivered += o.delivered;
    outages += o.outages;
    overflow += o.overflow;
    expired += o.expired;
    queued += o.queued;
    eligible_slots += o.eligible_slots;
    backlogged_slots += o.backlogged_slots;
    return *this;
}

double wilson_half_width(std::uint64_t k, std::uint64_t n) {
    if (n == 0) return 1.0;
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    return z / (1.0 + z * z / nn) * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
}

NodeEstimates estimate(const NodeCounts& c, double slot, OutageConvention convention) {
    NodeEstimates e;
    auto ratio = [](std::uint64_t k, std::uint64_t n) {
        return Estimate{n ? static_cast<double>(k) / static_cast<double>(n) : 0.0, wilson_half_width(k, n)};
    };
    e.mu = ratio(c.eligible_slots, c.slots);
    e.p_dly = ratio(c.expired, c.arrivals);
    e.p_ov = ratio(c.overflow, c.arrivals);
    const std::uint64_t attempts = convention == OutageConvention::per_slot ? c.backlogged_slots : c.departures();
    e.p_out = ratio(c.outages, attempts);
    const double time = static_cast<double>(c.slots) * slot;
    if (time > 0.0) {
        e.r_n.value = static_cast<double>(c.delivered) / time;
        e.r_n.half_width = 1.959963984540054 * std::sqrt(std::max<double>(1.0, static_cast<double>(c.delivered))) / time;
    }
    return e;
}

namespace {

struct Packet {
    std::uint64_t enqueued;
    double length;
};

/// FIFO queue with a continuous-length buffer and a waiting-time deadline.
class SlotQueue {
public:
    SlotQueue(const TrafficParams& tp)
        : capacity_(tp.buffer_eta), deadline_slots_(tp.deadline / tp.slot), arrivals_(tp.lambda_n * tp.slot) {}

    void arrive(std::uint64_t now, kernels::Rng& rng, NodeCounts& c) {
        const unsigned n = arrivals_(rng);
        for (unsigned k = 0; k < n; ++k) {
            const double len = length_(rng);
            ++c.arrivals;
            if (occupancy_ + len > capacity_) {
                ++c.overflow;
                continue;
            }
            occupancy_ += len;
            q_.push_back({now, len});
        }
    }

    bool empty() const { return q_.empty(); }

    void pop() {
        occupancy_ -= q_.front().length;
        q_.pop_front();
        if (q_.empty()) occupancy_ = 0.0;
    }

    /// Drops packets whose waiting time at the end of slot `now` exceeds the deadline.
    void expire(std::uint64_t now, NodeCounts& c) {
        while (!q_.empty() && static_cast<double>(now - q_.front().enqueued + 1) > deadline_slots_) {
            pop();
            ++c.expired;
        }
    }

    std::size_t size() const { return q_.size(); }

private:
    double capacity_;
    double deadline_slots_;
    double occupancy_ = 0.0;
    std::deque<Packet> q_;
    std::poisson_distribution<unsigned> arrivals_;
    std::exponential_distribution<double> length_{1.0};
};

std::vector<NodeCounts> run_replication(const NetworkModel& model, const PolicyVector& policy, const SimConfig& cfg,
                                        std::uint64_t seed) {
    const std::size_t n = model.size();
    const Scenario& sc = model.scenario();
    const int channels = sc.radio.num_channels;
    const double gamma = sc.interference.gamma_th;
    const double noise = model.interference_model(0).noise_power;
    const bool saturated = cfg.interferer_traffic == InterfererTraffic::saturated;

    std::vector<double> signal(n);
    for (std::size_t i = 0; i < n; ++i) signal[i] = model.signal_gain(i);

    kernels::Rng rng(seed);
    std::normal_distribution<double> normal;
    std::vector<SlotQueue> queues(n, SlotQueue(sc.traffic));
    std::vector<NodeCounts> counts(n);
    std::vector<kernels::BestChannel> best(n);
    std::vector<char> eligible(n), backlogged(n), active(n);

    for (std::uint64_t t = 0; t < cfg.num_slots; ++t) {
        if (t == cfg.warmup_slots) {
            for (std::size_t i = 0; i < n; ++i) {
                counts[i] = NodeCounts{};
                counts[i].carried_in = queues[i].size();
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            queues[i].arrive(t, rng, counts[i]);
            backlogged[i] = !queues[i].empty();
        }
        for (std::size_t i = 0; i < n; ++i) {
            best[i] = kernels::sample_best_channel(model.transmitters()[i].link.fading, channels, rng, normal);
            eligible[i] = best[i].amplitude >= policy.beta[i];
            active[i] = eligible[i] && (saturated || !queues[i].empty());
        }
        for (std::size_t i = 0; i < n; ++i) {
            NodeCounts& c = counts[i];
            ++c.slots;
            if (eligible[i]) ++c.eligible_slots;
            if (backlogged[i]) ++c.backlogged_slots;
            if (!eligible[i] || queues[i].empty()) continue;
            double interference = 0.0;
            for (std::size_t m : model.interferer_indices(i)) {
                if (active[m] && best[m].channel == best[i].channel) {
                    interference += model.rx_power_gain(m, i) * best[m].amplitude * best[m].amplitude;
                }
            }
            const double s = signal[i] * best[i].amplitude * best[i].amplitude;
            if (s < gamma * (interference + noise)) {
                ++c.outages;
            } else {
                ++c.delivered;
            }
            queues[i].pop();
        }
        for (std::size_t i = 0; i < n; ++i) queues[i].expire(t, counts[i]);
    }
    for (std::size_t i = 0; i < n; ++i) counts[i].queued = queues[i].size();
    return counts;
}

} // namespace

SimReport simulate(const NetworkModel& model, const PolicyVector& policy, const SimConfig& cfg) {
    cfg.validate();
    policy.check_bounds();
    const int reps = cfg.replications;
    std::vector<std::vector<NodeCounts>> per_rep(static_cast<std::size_t>(reps));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
        try {
            per_rep[r] = run_replication(model, policy, cfg, kernels::substream_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        } catch (...) {
            errors[r] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    SimReport rep;
    rep.ids = policy.ids;
    rep.replications = reps;
    rep.convention = cfg.convention;
    rep.counts.assign(model.size(), NodeCounts{});
    for (const auto& counts : per_rep) {
        for (std::size_t i = 0; i < counts.size(); ++i) rep.counts[i] += counts[i];
    }
    rep.slots_simulated = rep.counts.empty() ? 0 : rep.counts.front().slots;
    for (const NodeCounts& c : rep.counts) rep.estimates.push_back(estimate(c, model.scenario().traffic.slot, cfg.convention));
    return rep;
}

NodeCounts simulate_queue(const TrafficParams& traffic, double mu, std::uint64_t slots, std::uint64_t warmup,
                          std::uint64_t seed) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("simulate_queue: mu must lie in [0, 1]");
    if (!(slots > warmup)) throw DomainError("simulate_queue: slots must exceed warmup");
    kernels::Rng rng(kernels::substream_seed(seed, 0));
    SlotQueue q(traffic);
    NodeCounts c;
    for (std::uint64_t t = 0; t < slots; ++t) {
        if (t == warmup) {
            c = NodeCounts{};
            c.carried_in = q.size();
        }
        ++c.slots;
        q.arrive(t, rng, c);
        if (!q.empty()) ++c.backlogged_slots;
        const bool serve = kernels::uniform01(rng) < mu;
        if (serve) ++c.eligible_slots;
        if (serve && !q.empty()) {
            q.pop();
            ++c.delivered;
        }
        q.expire(t, c);
    }
    c.queued = q.size();
    return c;
}

} // namespace uavnet
