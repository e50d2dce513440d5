// Structure learner. Time is cut into windows of length L; within window k
// (1-based, spanning [(k-1)L, kL)) the thirds are the half-open intervals
// [w0, w0+L/3), [w0+L/3, w0+2L/3), [w0+2L/3, kL). The per-window statistic
// X_ij detects whether node i's resampling outcome tracks a flip of node j:
//
//   A: i updates (and j does not) in the first and last thirds, while j
//      updates (and i does not) in the middle third.
//   B: sigma_j differs between the first and second third boundaries.
//   X = 1_{A and B} * (-1)^{[sigma_j(mid1) = +1]} * (sigma_i(end-) - sigma_i(mid1))
//
// so X in {-2, 0, +2} and E[X] carries the sign of theta_ij. The end-of-window
// state uses the left limit (events strictly before kL), which makes window
// k a function of [(k-1)L, kL) alone. A pair is reported as an edge when
// |mean_k X_ij| >= tau.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "glauber/trace.hpp"

namespace glauber {

/// Thrown when a parameter formula leaves the representable range; carries
/// the name of the offending quantity.
class ParameterRangeError : public std::domain_error {
  public:
    ParameterRangeError(std::string quantity, const std::string& detail)
        : std::domain_error("parameter '" + quantity + "' out of range: " + detail),
          quantity_(std::move(quantity)) {}
    const std::string& quantity() const { return quantity_; }

  private:
    std::string quantity_;
};

struct LearnerParams {
    double L = 0.0;     // window length
    double tau = 0.0;   // decision threshold on |mean X|
    double T = 0.0;     // total observation time
    double q = 0.0;     // probability of the window event A
    double k_max = 0;   // floor(T/L); double because theory-mode window
                        // counts overflow 64 bits long before T does
};

/// P(A) = [(1 - e^{-L/3}) e^{-L/3}]^3, from the Poisson update times.
inline double window_event_prob(double L) {
    const double x = std::exp(-L / 3.0);
    const double one_minus_x = -std::expm1(-L / 3.0);
    const double f = one_minus_x * x;
    return f * f * f;
}

inline std::uint64_t window_count(double horizon, double L) {
    if (!(L > 0.0)) throw std::invalid_argument("window length L must be positive");
    return static_cast<std::uint64_t>(std::floor(horizon / L));
}

/// Parameters with guaranteed recovery: L = (alpha/16d) e^{-10 d beta},
/// tau = 3 L d q, T = (10^6 e^{20 d beta} / alpha^2) ln p. Exponentials are
/// assembled in log space; quantities that leave the double range raise
/// ParameterRangeError naming the culprit.
inline LearnerParams theory_params(int p, int d, double alpha, double beta) {
    if (p < 2) throw std::invalid_argument("theory_params: p must be >= 2");
    if (d < 1) throw std::invalid_argument("theory_params: d must be >= 1");
    if (!(alpha > 0.0) || alpha > beta) throw std::invalid_argument("theory_params: need 0 < alpha <= beta");

    LearnerParams params;
    const double log_L = std::log(alpha) - std::log(16.0 * d) - 10.0 * d * beta;
    if (log_L < std::log(1e-300)) throw ParameterRangeError("L", "underflows below 1e-300");
    params.L = std::exp(log_L);

    params.q = window_event_prob(params.L);
    if (!(params.q > 0.0)) throw ParameterRangeError("q", "underflows to zero");

    params.tau = 3.0 * params.L * d * params.q;
    if (!(params.tau > 0.0)) throw ParameterRangeError("tau", "underflows to zero");

    const double log_T = std::log(1e6) + 20.0 * d * beta - 2.0 * std::log(alpha) +
                         std::log(std::log(static_cast<double>(p)));
    if (log_T > std::log(1e300)) throw ParameterRangeError("T", "overflows above 1e300");
    params.T = std::exp(log_T);

    params.k_max = std::floor(params.T / params.L);
    if (!std::isfinite(params.k_max)) throw ParameterRangeError("k_max", "not finite");
    return params;
}

/// User-chosen L and T. When tau is not supplied it defaults to half the
/// per-window signal floor 2q(alpha/4 e^{-10 d beta} e^{-Ld} - Ld) if that
/// is positive, and to 3 L d q otherwise.
inline LearnerParams practical_params(int d, double alpha, double beta, double L, double T,
                                      std::optional<double> tau = std::nullopt) {
    if (!(L > 0.0)) throw std::invalid_argument("practical_params: L must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("practical_params: T must be positive");
    LearnerParams params;
    params.L = L;
    params.T = T;
    params.q = window_event_prob(L);
    params.k_max = static_cast<double>(window_count(T, L));
    if (params.k_max < 1) throw std::invalid_argument("practical_params: T shorter than one window");
    if (tau) {
        if (!(*tau > 0.0)) throw std::invalid_argument("practical_params: tau must be positive");
        params.tau = *tau;
    } else {
        const double signal = 2.0 * params.q *
            (alpha * 0.25 * std::exp(-10.0 * d * beta) * std::exp(-L * d) - L * d);
        params.tau = signal > 0.0 ? 0.5 * signal : 3.0 * L * d * params.q;
    }
    return params;
}

/// Lower bound on sign(theta_ij) E_x[X_ij] for an edge with |theta_ij| = theta_abs.
inline double lemma2_edge_lower_bound(double theta_abs, int d, double beta, double L) {
    const double q = window_event_prob(L);
    return 2.0 * q * (theta_abs * 0.25 * std::exp(-10.0 * d * beta) * std::exp(-L * d) - L * d);
}

/// Upper bound on |E_x[X_ij]| for a non-edge pair.
inline double lemma2_nonedge_upper_bound(int d, double L) {
    return 2.0 * window_event_prob(L) * L * d;
}

namespace detail {

struct WindowBounds {
    double begin;  // (k-1) L
    double mid1;   // begin + L/3
    double mid2;   // begin + 2L/3
    double end;    // k L
};

inline WindowBounds window_bounds(std::uint64_t k, double L) {
    WindowBounds w;
    w.begin = static_cast<double>(k - 1) * L;
    w.mid1 = w.begin + L / 3.0;
    w.mid2 = w.begin + (2.0 * L) / 3.0;
    w.end = static_cast<double>(k) * L;
    return w;
}

inline void check_window(const Trace& trace, std::uint64_t k, double L) {
    if (k < 1 || k > window_count(trace.horizon(), L))
        throw std::out_of_range("window index " + std::to_string(k) + " out of range");
}

// 0-based index of the window containing time t, adjusted so that the
// product-form boundaries k*L <= t < (k+1)*L hold exactly in floats.
inline std::int64_t window_of(double t, double L) {
    auto k = static_cast<std::int64_t>(std::floor(t / L));
    while (static_cast<double>(k + 1) * L <= t) ++k;
    while (k > 0 && static_cast<double>(k) * L > t) --k;
    return k;
}

}  // namespace detail

/// The i-j-i update pattern across the thirds of window k.
inline bool event_A(const Trace& trace, int i, int j, std::uint64_t k, double L) {
    if (i == j) throw std::invalid_argument("event_A: i == j");
    detail::check_window(trace, k, L);
    const auto w = detail::window_bounds(k, L);
    return trace.count_in(i, w.begin, w.mid1) >= 1 && trace.count_in(j, w.begin, w.mid1) == 0 &&
           trace.count_in(j, w.mid1, w.mid2) >= 1 && trace.count_in(i, w.mid1, w.mid2) == 0 &&
           trace.count_in(i, w.mid2, w.end) >= 1 && trace.count_in(j, w.mid2, w.end) == 0;
}

/// Whether sigma_j differs between the two interior third boundaries.
inline bool event_B(const Trace& trace, int j, std::uint64_t k, double L) {
    detail::check_window(trace, k, L);
    const auto w = detail::window_bounds(k, L);
    return trace.spin_at(j, w.mid1) != trace.spin_at(j, w.mid2);
}

/// Per-window statistic, in {-2, 0, +2}; nonzero only when A and B hold.
inline int edge_statistic(const Trace& trace, int i, int j, std::uint64_t k, double L) {
    if (!event_A(trace, i, j, k, L)) return 0;
    const auto w = detail::window_bounds(k, L);
    const std::int8_t sj = trace.spin_at(j, w.mid1);
    if (sj == trace.spin_at(j, w.mid2)) return 0;  // event B failed
    const int si_mid = trace.spin_at(i, w.mid1);
    const int si_end = trace.spin_before(i, w.end);
    const int sign = (sj == 1) ? -1 : 1;
    return sign * (si_end - si_mid);
}

namespace detail {

// Sum of X_ij over the first k_max windows for any ordered role assignment
// (i responds, j flips). Only windows where both nodes update can score, so
// the scan advances through the two per-node event lists in lockstep.
inline long long statistic_sum(const Trace& trace, int i, int j, double L, std::int64_t k_max) {
    const auto& ev_i = trace.node_events(i);
    const auto& ev_j = trace.node_events(j);
    long long sum = 0;
    size_t pi = 0, pj = 0;
    while (pi < ev_i.size() && pj < ev_j.size()) {
        const std::int64_t ki = window_of(trace.event(ev_i[pi]).time, L);
        const std::int64_t kj = window_of(trace.event(ev_j[pj]).time, L);
        if (ki >= k_max || kj >= k_max) break;
        if (ki != kj) {
            const double start = static_cast<double>(std::max(ki, kj)) * L;
            if (ki < kj)
                while (pi < ev_i.size() && trace.event(ev_i[pi]).time < start) ++pi;
            else
                while (pj < ev_j.size() && trace.event(ev_j[pj]).time < start) ++pj;
            continue;
        }
        sum += edge_statistic(trace, i, j, static_cast<std::uint64_t>(ki + 1), L);
        const double next = static_cast<double>(ki + 1) * L;
        while (pi < ev_i.size() && trace.event(ev_i[pi]).time < next) ++pi;
        while (pj < ev_j.size() && trace.event(ev_j[pj]).time < next) ++pj;
    }
    return sum;
}

}  // namespace detail

/// Mean of X_ij over the k_max whole windows of the trace; cost per pair is
/// O(|events_i| + |events_j| + candidates * log |events|).
inline double pair_mean(const Trace& trace, int i, int j, const LearnerParams& params) {
    if (i >= j) throw std::invalid_argument("pair_mean: require i < j");
    const auto k_max = static_cast<std::int64_t>(window_count(trace.horizon(), params.L));
    if (k_max < 1) throw std::invalid_argument("pair_mean: trace shorter than one window");
    return static_cast<double>(detail::statistic_sum(trace, i, j, params.L, k_max)) /
           static_cast<double>(k_max);
}

struct EdgeSet {
    std::vector<NodePair> edges;  // sorted, i < j

    bool contains(int i, int j) const {
        return std::binary_search(edges.begin(), edges.end(), make_pair_key(i, j));
    }
    size_t size() const { return edges.size(); }
    bool operator==(const EdgeSet& o) const { return edges == o.edges; }
};

/// Scans all ordered pairs i < j and reports {i,j} as an edge when
/// |mean X_ij| >= tau (ties included). The window count is recomputed from
/// the actual trace horizon. With `symmetrize`, the role-swapped statistic
/// X_ji is also computed and the larger magnitude decides.
inline EdgeSet glauber_learn(const Trace& trace, const LearnerParams& params,
                             bool symmetrize = false) {
    const int p = trace.node_count();
    if (p < 2) throw std::invalid_argument("glauber_learn: need p >= 2");
    const auto k_max = static_cast<std::int64_t>(window_count(trace.horizon(), params.L));
    if (k_max < 1) throw std::invalid_argument("glauber_learn: trace shorter than one window");

    EdgeSet result;
    const double denom = static_cast<double>(k_max);
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            double score = std::abs(detail::statistic_sum(trace, i, j, params.L, k_max)) / denom;
            if (symmetrize) {
                const double reverse =
                    std::abs(detail::statistic_sum(trace, j, i, params.L, k_max)) / denom;
                score = std::max(score, reverse);
            }
            if (score >= params.tau) result.edges.push_back({i, j});
        }
    }
    return result;
}

inline void write_edge_set(std::ostream& out, const EdgeSet& edges) {
    for (const auto& [i, j] : edges.edges) out << i << ' ' << j << '\n';
}

inline EdgeSet read_edge_set(std::istream& in) {
    EdgeSet result;
    int i = 0, j = 0;
    while (in >> i >> j) result.edges.push_back(make_pair_key(i, j));
    std::sort(result.edges.begin(), result.edges.end());
    return result;
}

}  // namespace glauber
