// Update traces: the initial configuration plus the time-ordered sequence of
// (time, node, new spin) resampling events, with a per-node event index for
// O(log n) state queries.
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "glauber/ising.hpp"

namespace glauber {

enum class TraceMode { continuous, discrete };

struct UpdateEvent {
    double time = 0.0;
    int node = 0;
    std::int8_t spin = 1;
};

/// Immutable sample path of the dynamics. Events are sorted by time; each
/// event records a full resampling (the new spin may equal the old one).
/// State queries follow the cadlag convention: the state at an update time
/// includes that update.
class Trace {
  public:
    Trace(int p, TraceMode mode, SpinConfiguration initial, std::vector<UpdateEvent> events,
          double horizon)
        : p_(p), mode_(mode), initial_(std::move(initial)), events_(std::move(events)),
          horizon_(horizon), node_events_(static_cast<size_t>(p)) {
        if (initial_.size() != p) throw std::invalid_argument("Trace: initial size != p");
        if (horizon_ < 0.0) throw std::invalid_argument("Trace: negative horizon");
        double prev = -1.0;
        for (size_t idx = 0; idx < events_.size(); ++idx) {
            const auto& ev = events_[idx];
            if (ev.node < 0 || ev.node >= p_) throw std::invalid_argument("Trace: event node out of range");
            if (ev.spin != 1 && ev.spin != -1) throw std::invalid_argument("Trace: event spin must be +1/-1");
            if (ev.time < 0.0 || ev.time > horizon_) throw std::invalid_argument("Trace: event time outside [0, horizon]");
            // Duplicate timestamps (float collisions) keep generation order.
            if (ev.time < prev) throw std::invalid_argument("Trace: events not sorted by time");
            prev = ev.time;
            node_events_[static_cast<size_t>(ev.node)].push_back(static_cast<std::int64_t>(idx));
        }
    }

    int node_count() const { return p_; }
    TraceMode mode() const { return mode_; }
    const SpinConfiguration& initial() const { return initial_; }
    const std::vector<UpdateEvent>& events() const { return events_; }
    double horizon() const { return horizon_; }

    /// Positions (into events()) of node i's updates, in time order.
    const std::vector<std::int64_t>& node_events(int i) const {
        check_node(i);
        return node_events_[static_cast<size_t>(i)];
    }

    /// Spin of `node` at time t, including an update at exactly t.
    std::int8_t spin_at(int node, double t) const {
        check_time(t);
        return spin_last_before(node, t, /*inclusive=*/true);
    }

    /// Spin of `node` just before time t (events strictly earlier than t).
    std::int8_t spin_before(int node, double t) const {
        check_time(t);
        return spin_last_before(node, t, /*inclusive=*/false);
    }

    /// Full configuration after applying all events with time <= t.
    SpinConfiguration state_at(double t) const {
        check_time(t);
        SpinConfiguration config = initial_;
        for (int i = 0; i < p_; ++i) config.set(i, spin_last_before(i, t, true));
        return config;
    }

    /// Node i's events with t1 <= time < t2, located by binary search.
    std::span<const std::int64_t> updates_in(int i, double t1, double t2) const {
        if (t1 > t2) throw std::invalid_argument("updates_in: t1 > t2");
        const auto& idx = node_events(i);
        auto lo = std::lower_bound(idx.begin(), idx.end(), t1,
                                   [this](std::int64_t e, double t) { return events_[static_cast<size_t>(e)].time < t; });
        auto hi = std::lower_bound(lo, idx.end(), t2,
                                   [this](std::int64_t e, double t) { return events_[static_cast<size_t>(e)].time < t; });
        return {&*idx.begin() + (lo - idx.begin()), static_cast<size_t>(hi - lo)};
    }

    std::int64_t count_in(int i, double t1, double t2) const {
        return static_cast<std::int64_t>(updates_in(i, t1, t2).size());
    }

    const UpdateEvent& event(std::int64_t idx) const { return events_[static_cast<size_t>(idx)]; }

  private:
    void check_node(int i) const {
        if (i < 0 || i >= p_) throw std::out_of_range("trace: node out of range");
    }
    void check_time(double t) const {
        if (!(t >= 0.0) || t > horizon_) throw std::out_of_range("trace: time outside [0, horizon]");
    }

    std::int8_t spin_last_before(int node, double t, bool inclusive) const {
        const auto& idx = node_events_[static_cast<size_t>(node)];
        auto it = inclusive
                      ? std::upper_bound(idx.begin(), idx.end(), t,
                                         [this](double tt, std::int64_t e) { return tt < events_[static_cast<size_t>(e)].time; })
                      : std::lower_bound(idx.begin(), idx.end(), t,
                                         [this](std::int64_t e, double tt) { return events_[static_cast<size_t>(e)].time < tt; });
        if (it == idx.begin()) return initial_[node];
        return events_[static_cast<size_t>(*(it - 1))].spin;
    }

    int p_;
    TraceMode mode_;
    SpinConfiguration initial_;
    std::vector<UpdateEvent> events_;
    double horizon_;
    std::vector<std::vector<std::int64_t>> node_events_;
};

// --- Trace file format -----------------------------------------------------
// Header "p mode horizon", then "init s0 s1 ... s(p-1)", then one event per
// line "time node spin". Times use 17 significant digits so that the decimal
// form round-trips doubles exactly.

inline void write_trace(std::ostream& out, const Trace& trace) {
    out << std::setprecision(17);
    out << trace.node_count() << ' '
        << (trace.mode() == TraceMode::continuous ? "continuous" : "discrete") << ' '
        << trace.horizon() << '\n';
    out << "init";
    for (int i = 0; i < trace.node_count(); ++i) out << ' ' << static_cast<int>(trace.initial()[i]);
    out << '\n';
    for (const auto& ev : trace.events())
        out << ev.time << ' ' << ev.node << ' ' << static_cast<int>(ev.spin) << '\n';
}

inline void write_trace_file(const std::string& path, const Trace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);
    write_trace(out, trace);
}

inline Trace read_trace(std::istream& in) {
    int p = 0;
    std::string mode_word;
    double horizon = 0.0;
    if (!(in >> p >> mode_word >> horizon))
        throw std::runtime_error("trace file: malformed header (want 'p mode horizon')");
    TraceMode mode;
    if (mode_word == "continuous") mode = TraceMode::continuous;
    else if (mode_word == "discrete") mode = TraceMode::discrete;
    else throw std::runtime_error("trace file: unknown mode '" + mode_word + "'");

    std::string init_tag;
    if (!(in >> init_tag) || init_tag != "init")
        throw std::runtime_error("trace file: missing 'init' line");
    std::vector<std::int8_t> spins(static_cast<size_t>(p));
    for (auto& s : spins) {
        int v = 0;
        if (!(in >> v) || (v != 1 && v != -1))
            throw std::runtime_error("trace file: bad initial spin");
        s = static_cast<std::int8_t>(v);
    }

    std::vector<UpdateEvent> events;
    double t = 0.0;
    int node = 0, spin = 0;
    while (in >> t >> node >> spin) {
        if (spin != 1 && spin != -1) throw std::runtime_error("trace file: bad event spin");
        events.push_back({t, node, static_cast<std::int8_t>(spin)});
    }
    if (!in.eof() && in.fail()) {
        in.clear();
        std::string tail;
        std::getline(in, tail);
        throw std::runtime_error("trace file: malformed event line near '" + tail + "'");
    }
    return Trace(p, mode, SpinConfiguration(std::move(spins)), std::move(events), horizon);
}

inline Trace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return read_trace(in);
}

}  // namespace glauber
