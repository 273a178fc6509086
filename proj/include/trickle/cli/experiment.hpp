#pragma once

// Experiment description shared by every subcommand.
//
// Spec file grammar, one entry per line:
//     key = value            lists are comma separated: k = 1, 2, 3
//     # comment              blank lines are ignored
// Keys are the long flag names with '-' or '_' interchangeable (see
// spec_keys()). Unknown keys, duplicate keys and malformed values are
// configuration errors.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace trickle::cli {

enum class Mode { Simulate, Analytic, Compare, Multicell, MarkovValidate };

Mode parse_mode(std::string_view text);  // throws ConfigError
std::string mode_name(Mode mode);

struct ExperimentSpec {
    std::string name = "experiment";
    Mode mode = Mode::Simulate;

    std::vector<int> k{1};
    std::vector<int> n{50};          // single-cell sizes
    std::vector<int> side{50};       // grid sides (multicell)
    std::vector<double> range{2, 4, 6, 8};
    std::vector<double> eta{0.0};

    std::string profile = "quick";
    int replications = 50;
    double duration = 100.0;         // measured virtual time per replication
    double warmup = 10.0;            // simulated before measuring starts
    std::uint64_t seed = 1;
    int histogram_bins = 60;
    int t_points = 101;              // analytic curve resolution

    double ks_threshold = 0.05;      // compare
    double theta_min = 0.95;         // multicell, eta = 0
    double theta_max = 1.25;
    bool toroidal = true;
    bool include_self = true;        // S(R) counts the broadcaster

    std::string output_dir = ".";
    unsigned threads = 0;            // 0 = hardware concurrency

    void validate() const;  // throws ConfigError

    // Every field except output_dir and threads, in a fixed order, so that
    // output files do not depend on where or how fast they were produced.
    std::string canonical() const;
};

// Replication count and duration for a named profile: quick = 50 x 100,
// paper = 1000 x 100.
void apply_profile(ExperimentSpec& spec, std::string_view profile);

std::vector<std::string> spec_keys();

// Applies one key/value pair; throws ConfigError.
void set_field(ExperimentSpec& spec, std::string_view key, std::string_view value);

// Parses spec-file text on top of `base`.
ExperimentSpec parse_spec_text(std::string_view text, ExperimentSpec base);
ExperimentSpec load_spec_file(const std::string& path, ExperimentSpec base);

} // namespace trickle::cli
