#include "trickle/core/node.hpp"

#include <algorithm>
#include <stdexcept>

namespace trickle {

NodeState start_interval(NodeState state, const TrickleConfig& config, double now, double u) {
    const double lo = config.eta * state.tau;
    state.c = 0;
    state.theta = lo + u * (state.tau - lo);
    state.interval_start = now;
    state.has_fired = false;
    return state;
}

NodeState hear_consistent(NodeState state) {
    ++state.c;
    return state;
}

FireOutcome timer_fire(NodeState state, const TrickleConfig& config) {
    if (state.has_fired) {
        throw std::logic_error("timer_fire called twice in one interval");
    }
    state.has_fired = true;
    return {state, state.c < config.k};
}

NodeState interval_end(NodeState state, const TrickleConfig& config, double now, double u) {
    state.tau = std::min(2.0 * state.tau, config.tau_h);
    return start_interval(state, config, now, u);
}

NodeState hear_inconsistent(NodeState state, const TrickleConfig& config, double now, double u) {
    if (state.tau > config.tau_l) {
        state.tau = config.tau_l;
        return start_interval(state, config, now, u);
    }
    return state;
}

NodeEvent next_event(const NodeState& state) {
    if (!state.has_fired) {
        return {NodeEventKind::TimerFire, state.fire_time()};
    }
    return {NodeEventKind::IntervalEnd, state.end_time()};
}

} // namespace trickle
