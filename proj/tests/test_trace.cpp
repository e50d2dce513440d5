#include <catch2/catch_amalgamated.hpp>

#include "glauber/trace.hpp"

#include <sstream>

using namespace glauber;

namespace {

Trace sample_trace() {
    // p = 4, node 3 flips at t = 1.0, node 0 updates twice.
    std::vector<UpdateEvent> events = {{0.25, 0, -1}, {1.0, 3, 1}, {2.5, 0, 1}};
    return Trace(4, TraceMode::continuous,
                 SpinConfiguration(std::vector<std::int8_t>{1, 1, 1, -1}), events, 3.0);
}

}  // namespace

TEST_CASE("trace validation") {
    const SpinConfiguration init = SpinConfiguration::all_plus(2);
    REQUIRE_THROWS_AS(Trace(2, TraceMode::continuous, init, {{1.0, 2, 1}}, 2.0),
                      std::invalid_argument);  // node out of range
    REQUIRE_THROWS_AS(Trace(2, TraceMode::continuous, init, {{1.0, 0, 0}}, 2.0),
                      std::invalid_argument);  // bad spin
    REQUIRE_THROWS_AS(Trace(2, TraceMode::continuous, init, {{2.0, 0, 1}, {1.0, 1, 1}}, 3.0),
                      std::invalid_argument);  // unsorted
    REQUIRE_THROWS_AS(Trace(2, TraceMode::continuous, init, {{5.0, 0, 1}}, 3.0),
                      std::invalid_argument);  // beyond horizon
}

TEST_CASE("state queries follow the cadlag convention") {
    const Trace trace = sample_trace();

    SECTION("t = 0 without an event returns the initial configuration") {
        REQUIRE(trace.state_at(0.0) == trace.initial());
    }
    SECTION("query before the only event of a node") {
        REQUIRE(trace.state_at(0.5)[3] == -1);
        REQUIRE(trace.spin_at(3, 0.5) == -1);
    }
    SECTION("query exactly at the event includes it") {
        REQUIRE(trace.spin_at(3, 1.0) == 1);
        SpinConfiguration expected(std::vector<std::int8_t>{-1, 1, 1, 1});
        REQUIRE(trace.state_at(1.0) == expected);
    }
    SECTION("left limit excludes the event") {
        REQUIRE(trace.spin_before(3, 1.0) == -1);
        REQUIRE(trace.spin_before(0, 0.25) == 1);
        REQUIRE(trace.spin_at(0, 0.25) == -1);
    }
    SECTION("time out of range throws") {
        REQUIRE_THROWS_AS(trace.state_at(-0.1), std::out_of_range);
        REQUIRE_THROWS_AS(trace.state_at(3.5), std::out_of_range);
    }
}

TEST_CASE("updates_in returns half-open windows per node") {
    std::vector<UpdateEvent> events = {{0.2, 1, 1}, {0.7, 1, -1}};
    const Trace trace(3, TraceMode::continuous, SpinConfiguration::all_plus(3), events, 1.0);

    REQUIRE(trace.updates_in(0, 0.0, 1.0).empty());
    REQUIRE(trace.updates_in(1, 0.5, 0.7).empty());  // 0.7 excluded
    const auto both = trace.updates_in(1, 0.1, 0.8);
    REQUIRE(both.size() == 2);
    REQUIRE(trace.event(both[0]).time == 0.2);
    REQUIRE(trace.event(both[1]).time == 0.7);
    REQUIRE_THROWS_AS(trace.updates_in(1, 0.8, 0.1), std::invalid_argument);
}

TEST_CASE("per-node index is consistent with the event list") {
    const Trace trace = sample_trace();
    REQUIRE(trace.node_events(0).size() == 2);
    REQUIRE(trace.node_events(1).empty());
    REQUIRE(trace.event(trace.node_events(0)[1]).time == 2.5);
}

TEST_CASE("trace file round trip is bit exact") {
    // Times chosen to exercise the 17-significant-digit representation.
    std::vector<UpdateEvent> events = {
        {0.1234567890123456789, 1, -1}, {1.0 / 3.0, 0, 1}, {2.718281828459045, 1, 1}};
    const Trace trace(2, TraceMode::continuous,
                      SpinConfiguration(std::vector<std::int8_t>{-1, 1}), events, 3.0);
    std::stringstream buffer;
    write_trace(buffer, trace);
    const Trace back = read_trace(buffer);

    REQUIRE(back.node_count() == 2);
    REQUIRE(back.mode() == TraceMode::continuous);
    REQUIRE(back.horizon() == 3.0);
    REQUIRE(back.initial() == trace.initial());
    REQUIRE(back.events().size() == trace.events().size());
    for (size_t k = 0; k < events.size(); ++k) {
        REQUIRE(back.events()[k].time == trace.events()[k].time);
        REQUIRE(back.events()[k].node == trace.events()[k].node);
        REQUIRE(back.events()[k].spin == trace.events()[k].spin);
    }

    // A second write must produce identical bytes.
    std::stringstream again;
    write_trace(again, back);
    std::stringstream first;
    write_trace(first, trace);
    REQUIRE(again.str() == first.str());
}

TEST_CASE("trace file parse errors") {
    std::stringstream bad_mode("2 sometimes 1.0\ninit 1 1\n");
    REQUIRE_THROWS_AS(read_trace(bad_mode), std::runtime_error);
    std::stringstream bad_spin("2 continuous 1.0\ninit 1 2\n");
    REQUIRE_THROWS_AS(read_trace(bad_spin), std::runtime_error);
    std::stringstream bad_event("2 continuous 1.0\ninit 1 1\n0.5 0 nope\n");
    REQUIRE_THROWS_AS(read_trace(bad_event), std::runtime_error);
}

TEST_CASE("discrete-mode traces use integer step times") {
    std::vector<UpdateEvent> events = {{2.0, 1, -1}, {3.0, 0, 1}};
    const Trace trace(2, TraceMode::discrete, SpinConfiguration::all_plus(2), events, 3.0);
    std::stringstream buffer;
    write_trace(buffer, trace);
    const Trace back = read_trace(buffer);
    REQUIRE(back.mode() == TraceMode::discrete);
    REQUIRE(back.events()[0].time == 2.0);
}
