// Samplers for the Glauber dynamics: the continuous-time chain driven by
// rate-1 Poisson clocks, and its discrete-time heat-bath counterpart.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "glauber/ising.hpp"
#include "glauber/trace.hpp"

namespace glauber {

// Substream layout: stream 2k drives event times and node picks, stream
// 2k+1 drives the spin coin flips, so tests can vary one source alone.
inline Rng clock_rng(RngSeed seed) { return Rng(seed.seed, 2 * seed.stream); }
inline Rng spin_rng(RngSeed seed) { return Rng(seed.seed, 2 * seed.stream + 1); }

/// Advances `config` by continuous-time dynamics for `T` time units without
/// recording events. Returns the number of updates applied.
inline std::int64_t evolve_ct(const IsingModel& model, SpinConfiguration& config, double T,
                              Rng& clock, Rng& spins) {
    const int p = model.node_count();
    // A single Exponential(p) global clock plus a uniform node pick is
    // distributionally identical to p independent rate-1 clocks.
    double t = clock.exponential(static_cast<double>(p));
    std::int64_t n = 0;
    while (t <= T) {
        const int node = static_cast<int>(clock.below(static_cast<std::uint32_t>(p)));
        config.set(node, spins.spin(update_prob_plus(model, config, node)));
        ++n;
        t += clock.exponential(static_cast<double>(p));
    }
    return n;
}

/// Continuous-time trace on [0, T]: every node updates at the arrivals of
/// its own rate-1 Poisson process, resampling from the local conditional.
inline Trace simulate_ct(const IsingModel& model, const SpinConfiguration& initial, double T,
                         RngSeed seed) {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("simulate_ct: T must be positive and finite");
    const int p = model.node_count();
    if (initial.size() != p) throw std::invalid_argument("simulate_ct: initial size != p");

    Rng clock = clock_rng(seed);
    Rng spins = spin_rng(seed);
    SpinConfiguration config = initial;
    std::vector<UpdateEvent> events;
    events.reserve(static_cast<size_t>(static_cast<double>(p) * T * 1.05) + 16);

    double t = clock.exponential(static_cast<double>(p));
    while (t <= T) {
        const int node = static_cast<int>(clock.below(static_cast<std::uint32_t>(p)));
        const std::int8_t s = spins.spin(update_prob_plus(model, config, node));
        events.push_back({t, node, s});
        config.set(node, s);
        t += clock.exponential(static_cast<double>(p));
    }
    return Trace(p, TraceMode::continuous, initial, std::move(events), T);
}

/// Discrete heat-bath trace with n samples. The first sample is the initial
/// configuration itself (its update identity is fixed to node 0 by
/// convention); steps 2..n each pick a uniform node and resample it. Event
/// times are the step indices.
inline Trace simulate_dt(const IsingModel& model, const SpinConfiguration& initial,
                         std::int64_t n, RngSeed seed) {
    if (n < 1) throw std::invalid_argument("simulate_dt: n must be >= 1");
    const int p = model.node_count();
    if (initial.size() != p) throw std::invalid_argument("simulate_dt: initial size != p");

    Rng clock = clock_rng(seed);
    Rng spins = spin_rng(seed);
    SpinConfiguration config = initial;
    std::vector<UpdateEvent> events;
    events.reserve(static_cast<size_t>(n - 1));

    for (std::int64_t step = 2; step <= n; ++step) {
        const int node = static_cast<int>(clock.below(static_cast<std::uint32_t>(p)));
        const std::int8_t s = spins.spin(update_prob_plus(model, config, node));
        events.push_back({static_cast<double>(step), node, s});
        config.set(node, s);
    }
    return Trace(p, TraceMode::discrete, initial, std::move(events), static_cast<double>(n));
}

}  // namespace glauber
