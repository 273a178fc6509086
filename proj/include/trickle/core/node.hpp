#pragma once

#include "trickle/core/config.hpp"

namespace trickle {

// Timer state of one node. `theta` is relative to `interval_start`.
struct NodeState {
    double tau = 1.0;
    int c = 0;
    double theta = 0.0;
    double interval_start = 0.0;
    bool has_fired = false;

    double fire_time() const { return interval_start + theta; }
    double end_time() const { return interval_start + tau; }

    bool operator==(const NodeState&) const = default;
};

enum class NodeEventKind { IntervalEnd = 0, TimerFire = 1 };

struct NodeEvent {
    NodeEventKind kind;
    double time;
};

struct FireOutcome {
    NodeState state;
    bool transmit;
};

// The generalized Trickle rules as pure state transitions. `u` is a draw
// from a uniform [0,1) source; the caller owns the random stream, which
// makes every trajectory reproducible from its draw sequence.

// Rule 1: reset c and timer, theta uniform on [eta*tau, tau).
NodeState start_interval(NodeState state, const TrickleConfig& config, double now, double u);

// Rule 2: a consistent message was heard.
NodeState hear_consistent(NodeState state);

// Rule 3: the timer reached theta. Throws std::logic_error if the node
// already fired in this interval.
FireOutcome timer_fire(NodeState state, const TrickleConfig& config);

// Rule 4: the timer reached tau. Doubles tau up to tau_h and restarts.
NodeState interval_end(NodeState state, const TrickleConfig& config, double now, double u);

// Rule 5: an inconsistent message was heard. No-op when tau == tau_l.
NodeState hear_inconsistent(NodeState state, const TrickleConfig& config, double now, double u);

// The next scheduled event of a node: its broadcast attempt if still
// pending, otherwise the end of the interval.
NodeEvent next_event(const NodeState& state);

} // namespace trickle
