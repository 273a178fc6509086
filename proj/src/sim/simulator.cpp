#include "trickle/sim/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <queue>
#include <thread>
#include <tuple>

#include "trickle/core/node.hpp"
#include "trickle/numeric/rng.hpp"
#include "trickle/numeric/stats.hpp"

namespace trickle::sim {

namespace {

struct QueuedEvent {
    double time;
    std::size_t node;
    NodeEventKind kind;

    // Min-heap order: (time, node_id, kind) with IntervalEnd before TimerFire.
    bool operator>(const QueuedEvent& o) const {
        return std::tie(time, node, kind) > std::tie(o.time, o.node, o.kind);
    }
};

using EventQueue = std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>>;

class Engine {
public:
    explicit Engine(const SimRunConfig& config)
        : config_(config), neighbors_(config.topology), nodes_(neighbors_.size()) {
        const double tau_h = config_.trickle.tau_h;
        const std::size_t n = nodes_.size();
        window_start_ = config_.warmup;
        const auto windows = static_cast<std::size_t>(
            std::floor((config_.duration - config_.warmup) / tau_h * (1.0 + 1e-12)));
        window_end_ = config_.warmup + static_cast<double>(windows) * tau_h;

        stats_.window_start = window_start_;
        stats_.window_end = window_end_;
        stats_.per_interval_counts.assign(windows, 0);
        stats_.per_node_counts.assign(n, 0);

        streams_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            streams_.emplace_back(numeric::derive_seed(config_.seed, i));
        }

        for (std::size_t i = 0; i < n; ++i) {
            NodeState s;
            s.tau = tau_h;
            if (config_.skew == Skew::UniformRandom) {
                // The node is already part-way through an interval at t = 0;
                // its phase is uniform, so the attempt process is stationary
                // from the start. Attempts scheduled before 0 are skipped.
                const double phase = streams_[i].uniform() * tau_h;
                s = start_interval(s, config_.trickle, phase - tau_h, streams_[i].uniform());
                if (s.fire_time() <= 0.0) s.has_fired = true;
            } else {
                s = start_interval(s, config_.trickle, 0.0, streams_[i].uniform());
            }
            nodes_[i] = s;
            schedule(i);
        }
    }

    SimStats run() {
        while (!queue_.empty()) {
            const QueuedEvent ev = queue_.top();
            if (ev.time > config_.duration) break;
            queue_.pop();
            if (ev.kind == NodeEventKind::TimerFire) {
                on_timer_fire(ev);
            } else {
                nodes_[ev.node] = interval_end(nodes_[ev.node], config_.trickle, ev.time,
                                               streams_[ev.node].uniform());
            }
            schedule(ev.node);
        }
        finish();
        return std::move(stats_);
    }

private:
    bool measured(double t) const { return t > window_start_ && t <= window_end_; }

    void schedule(std::size_t i) {
        const NodeEvent next = next_event(nodes_[i]);
        queue_.push({next.time, i, next.kind});
    }

    void on_timer_fire(const QueuedEvent& ev) {
        const NodeState before = nodes_[ev.node];
        const FireOutcome out = timer_fire(before, config_.trickle);
        nodes_[ev.node] = out.state;
        const bool in_window = measured(ev.time);
        if (in_window && config_.record_attempts) {
            stats_.attempts.push_back({ev.time, ev.node, before.interval_start, before.c, out.transmit});
        }
        if (!out.transmit) return;

        if (in_window) {
            stats_.transmission_times.push_back({ev.time, ev.node});
            ++stats_.per_node_counts[ev.node];
            // Windows are (start + i tau_h, start + (i + 1) tau_h], matching the
            // measured span, so a fire exactly on a boundary closes a window.
            const double pos = std::ceil((ev.time - window_start_) / config_.trickle.tau_h);
            auto idx = static_cast<std::size_t>(std::max(pos, 1.0)) - 1;
            idx = std::min(idx, stats_.per_interval_counts.size() - 1);
            ++stats_.per_interval_counts[idx];
        }
        // Instantaneous, lossless delivery: receptions complete before any
        // other event at the same timestamp is dequeued.
        neighbors_.for_each_neighbor(ev.node, [&](std::size_t j) { nodes_[j] = hear_consistent(nodes_[j]); });
    }

    void finish() {
        const auto& tx = stats_.transmission_times;
        stats_.inter_transmission_times.reserve(tx.size());
        for (std::size_t i = 1; i < tx.size(); ++i) {
            stats_.inter_transmission_times.push_back(tx[i].time - tx[i - 1].time);
        }
    }

    SimRunConfig config_;
    NeighborTable neighbors_;
    std::vector<NodeState> nodes_;
    std::vector<numeric::RandomStream> streams_;
    EventQueue queue_;
    SimStats stats_;
    double window_start_ = 0.0;
    double window_end_ = 0.0;
};

} // namespace

void SimRunConfig::validate() const {
    trickle.validate();
    sim::validate(topology);
    if (!(warmup >= 0.0) || !std::isfinite(warmup)) throw ConfigError("warmup must be >= 0");
    if (!(duration > warmup) || !std::isfinite(duration)) throw ConfigError("duration must exceed warmup");
}

SimStats run(const SimRunConfig& config) {
    config.validate();
    Engine engine(config);
    return engine.run();
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t index) {
    return numeric::derive_seed(seed ^ 0xA5A5A5A5A5A5A5A5ULL, index);
}

std::vector<SimStats> run_replications(const SimRunConfig& config, std::size_t replications,
                                       unsigned threads) {
    config.validate();
    if (replications == 0) throw ConfigError("replications must be >= 1");
    std::vector<SimStats> out(replications);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, replications));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= replications) return;
            try {
                SimRunConfig rep = config;
                rep.seed = replication_seed(config.seed, i);
                out[i] = run(rep);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

SweepRow summarize_replications(const SimRunConfig& config, const std::vector<SimStats>& runs) {
    std::vector<double> pooled;
    for (const auto& r : runs) {
        pooled.insert(pooled.end(), r.per_interval_counts.begin(), r.per_interval_counts.end());
    }
    const auto s = numeric::summarize(pooled);
    SweepRow row;
    row.config = config;
    row.replications = runs.size();
    row.intervals = s.count;
    row.mean = s.mean;
    row.std_dev = s.std_dev;
    row.ci_half_width = s.count > 0 ? 1.96 * s.std_dev / std::sqrt(static_cast<double>(s.count)) : 0.0;
    return row;
}

std::vector<SweepRow> sweep(const std::vector<SimRunConfig>& configs, std::size_t replications,
                            unsigned threads) {
    std::vector<SweepRow> rows;
    rows.reserve(configs.size());
    for (const auto& c : configs) {
        rows.push_back(summarize_replications(c, run_replications(c, replications, threads)));
    }
    return rows;
}

AttemptProcessResult attempt_process_test(int n, double eta, double duration, std::uint64_t seed) {
    SimRunConfig config;
    config.trickle = TrickleConfig{1, 1.0, 1.0, eta};
    config.topology = SingleCell{n};
    config.duration = duration;
    config.warmup = 0.0;
    config.seed = seed;
    config.record_attempts = true;
    const SimStats stats = run(config);

    std::vector<double> times;
    times.reserve(stats.attempts.size());
    for (const auto& a : stats.attempts) times.push_back(a.time);
    std::sort(times.begin(), times.end());
    std::vector<double> gaps;
    gaps.reserve(times.size());
    for (std::size_t i = 1; i < times.size(); ++i) gaps.push_back((times[i] - times[i - 1]) * n);

    AttemptProcessResult result;
    result.gaps = gaps.size();
    result.ks_statistic = numeric::ks_statistic(std::move(gaps), [](double x) { return 1.0 - std::exp(-x); });
    return result;
}

} // namespace trickle::sim
