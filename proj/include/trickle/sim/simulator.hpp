#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trickle/core/config.hpp"
#include "trickle/sim/topology.hpp"

namespace trickle::sim {

enum class Skew {
    UniformRandom,  // each node's interval phase uniform on [0, tau_h)
    Synchronized,   // every node starts its interval at t = 0
};

struct SimRunConfig {
    TrickleConfig trickle;
    Topology topology = SingleCell{1};
    double duration = 100.0;
    double warmup = 10.0;
    std::uint64_t seed = 1;
    Skew skew = Skew::UniformRandom;
    bool record_attempts = false;

    // Throws ConfigError. Requires duration > warmup >= 0.
    void validate() const;
};

struct Transmission {
    double time;
    std::size_t node;

    bool operator==(const Transmission&) const = default;
};

struct Attempt {
    double time;
    std::size_t node;
    double interval_start;
    int heard;         // counter c at the moment of the attempt
    bool transmitted;

    bool operator==(const Attempt&) const = default;
};

// Statistics over the measured window (window_start, window_end], where
// window_start = warmup and window_end = warmup + W * tau_h for the largest
// whole number W of tau_h-windows that fit before `duration`.
struct SimStats {
    double window_start = 0.0;
    double window_end = 0.0;
    std::vector<Transmission> transmission_times;
    std::vector<double> inter_transmission_times;
    std::vector<int> per_interval_counts;
    std::vector<std::uint64_t> per_node_counts;
    std::vector<Attempt> attempts;  // filled when record_attempts is set

    std::size_t total_transmissions() const { return transmission_times.size(); }

    bool operator==(const SimStats&) const = default;
};

// Steady-state run: every node at tau = tau_h, all traffic consistent.
// Deterministic for a fixed config (including seed).
SimStats run(const SimRunConfig& config);

// Seed used for replication `index` of a config with base seed `seed`.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t index);

// Runs `replications` independently seeded copies of `config`. Workers pull
// replication indices; results are returned in index order regardless of
// `threads` (0 = hardware concurrency).
std::vector<SimStats> run_replications(const SimRunConfig& config, std::size_t replications,
                                       unsigned threads = 0);

struct SweepRow {
    SimRunConfig config;
    std::size_t replications = 0;
    std::size_t intervals = 0;     // pooled count of tau_h windows
    double mean = 0.0;             // mean transmissions per window
    double std_dev = 0.0;
    double ci_half_width = 0.0;    // 1.96 * std / sqrt(intervals)
};

SweepRow summarize_replications(const SimRunConfig& config, const std::vector<SimStats>& runs);

std::vector<SweepRow> sweep(const std::vector<SimRunConfig>& configs, std::size_t replications,
                            unsigned threads = 0);

struct AttemptProcessResult {
    double ks_statistic = 0.0;
    std::size_t gaps = 0;
};

// KS distance between the n-dilated inter-attempt gaps of a single cell and
// Exp(1). Every timer fire counts, suppressed or not.
AttemptProcessResult attempt_process_test(int n, double eta, double duration, std::uint64_t seed);

} // namespace trickle::sim
