#include "trickle/cli/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "trickle/core/config.hpp"
#include "trickle/numeric/format.hpp"

namespace trickle::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string_view key) {
    std::string out(trim(key));
    std::replace(out.begin(), out.end(), '_', '-');
    return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    const auto t = trim(text);
    T value{};
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (t.empty() || ec != std::errc() || ptr != end) {
        throw ConfigError("invalid value for '" + std::string(key) + "': '" + std::string(t) + "'");
    }
    return value;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
    std::vector<T> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        out.push_back(parse_number<T>(key, item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("invalid boolean for '" + std::string(key) + "': '" + std::string(t) + "'");
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        if constexpr (std::is_floating_point_v<T>) {
            out += numeric::format_real(v[i]);
        } else {
            out += std::to_string(v[i]);
        }
    }
    return out;
}

} // namespace

Mode parse_mode(std::string_view text) {
    const auto t = trim(text);
    if (t == "simulate") return Mode::Simulate;
    if (t == "analytic") return Mode::Analytic;
    if (t == "compare") return Mode::Compare;
    if (t == "multicell") return Mode::Multicell;
    if (t == "markov-validate") return Mode::MarkovValidate;
    throw ConfigError("unknown mode '" + std::string(t) + "'");
}

std::string mode_name(Mode mode) {
    switch (mode) {
    case Mode::Simulate: return "simulate";
    case Mode::Analytic: return "analytic";
    case Mode::Compare: return "compare";
    case Mode::Multicell: return "multicell";
    case Mode::MarkovValidate: return "markov-validate";
    }
    return "?";
}

void ExperimentSpec::validate() const {
    if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
        throw ConfigError("name must be non-empty and contain no path separators");
    }
    if (k.empty() || n.empty() || eta.empty() || side.empty() || range.empty()) {
        throw ConfigError("parameter grids must be non-empty");
    }
    for (int v : k) {
        if (v < 1) throw ConfigError("k must be >= 1");
    }
    for (int v : n) {
        if (v < 1) throw ConfigError("n must be >= 1");
    }
    for (int v : side) {
        if (v < 1) throw ConfigError("side must be >= 1");
    }
    for (double v : range) {
        if (!(v > 0.0)) throw ConfigError("range must be > 0");
    }
    for (double v : eta) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("eta must lie in [0, 1]");
    }
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (!(duration > 0.0)) throw ConfigError("duration must be > 0");
    if (!(warmup >= 0.0)) throw ConfigError("warmup must be >= 0");
    if (histogram_bins < 1) throw ConfigError("bins must be >= 1");
    if (t_points < 2) throw ConfigError("t-points must be >= 2");
    if (!(ks_threshold > 0.0 && ks_threshold <= 1.0)) throw ConfigError("ks-threshold must lie in (0, 1]");
    if (!(theta_min < theta_max)) throw ConfigError("theta-min must be below theta-max");
}

std::string ExperimentSpec::canonical() const {
    std::ostringstream os;
    os << "name=" << name << "; mode=" << mode_name(mode) << "; k=" << join(k) << "; n=" << join(n)
       << "; side=" << join(side) << "; range=" << join(range) << "; eta=" << join(eta)
       << "; profile=" << profile << "; replications=" << replications
       << "; duration=" << numeric::format_real(duration) << "; warmup=" << numeric::format_real(warmup)
       << "; seed=" << seed << "; bins=" << histogram_bins << "; t-points=" << t_points
       << "; ks-threshold=" << numeric::format_real(ks_threshold)
       << "; theta-min=" << numeric::format_real(theta_min) << "; theta-max=" << numeric::format_real(theta_max)
       << "; toroidal=" << (toroidal ? "true" : "false") << "; include-self=" << (include_self ? "true" : "false");
    return os.str();
}

void apply_profile(ExperimentSpec& spec, std::string_view profile) {
    const auto p = trim(profile);
    if (p == "quick") {
        spec.replications = 50;
        spec.duration = 100.0;
    } else if (p == "paper") {
        spec.replications = 1000;
        spec.duration = 100.0;
    } else {
        throw ConfigError("unknown profile '" + std::string(p) + "' (expected quick or paper)");
    }
    spec.profile = std::string(p);
}

std::vector<std::string> spec_keys() {
    return {"name",      "mode",     "k",         "n",            "side",      "range",
            "eta",       "profile",  "replications", "duration",  "warmup",    "seed",
            "bins",      "t-points", "ks-threshold", "theta-min", "theta-max", "toroidal",
            "include-self", "out",   "threads"};
}

void set_field(ExperimentSpec& spec, std::string_view raw_key, std::string_view value) {
    const std::string key = normalize_key(raw_key);
    const auto v = trim(value);
    if (key == "name") spec.name = std::string(v);
    else if (key == "mode") spec.mode = parse_mode(v);
    else if (key == "k") spec.k = parse_list<int>(key, v);
    else if (key == "n") spec.n = parse_list<int>(key, v);
    else if (key == "side") spec.side = parse_list<int>(key, v);
    else if (key == "range") spec.range = parse_list<double>(key, v);
    else if (key == "eta") spec.eta = parse_list<double>(key, v);
    else if (key == "profile") apply_profile(spec, v);
    else if (key == "replications") spec.replications = parse_number<int>(key, v);
    else if (key == "duration") spec.duration = parse_number<double>(key, v);
    else if (key == "warmup") spec.warmup = parse_number<double>(key, v);
    else if (key == "seed") spec.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "bins") spec.histogram_bins = parse_number<int>(key, v);
    else if (key == "t-points") spec.t_points = parse_number<int>(key, v);
    else if (key == "ks-threshold") spec.ks_threshold = parse_number<double>(key, v);
    else if (key == "theta-min") spec.theta_min = parse_number<double>(key, v);
    else if (key == "theta-max") spec.theta_max = parse_number<double>(key, v);
    else if (key == "toroidal") spec.toroidal = parse_bool(key, v);
    else if (key == "include-self") spec.include_self = parse_bool(key, v);
    else if (key == "out") spec.output_dir = std::string(v);
    else if (key == "threads") spec.threads = parse_number<unsigned>(key, v);
    else throw ConfigError("unknown spec key '" + key + "'");
}

ExperimentSpec parse_spec_text(std::string_view text, ExperimentSpec base) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("spec line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = normalize_key(t.substr(0, eq));
        if (!seen.insert(key).second) {
            throw ConfigError("spec line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        entries.emplace_back(std::move(key), std::string(trim(t.substr(eq + 1))));
    }
    // A profile sets defaults that the other keys in the same file refine.
    std::stable_partition(entries.begin(), entries.end(), [](const auto& e) { return e.first == "profile"; });
    for (const auto& [key, value] : entries) set_field(base, key, value);
    return base;
}

ExperimentSpec load_spec_file(const std::string& path, ExperimentSpec base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read spec file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec_text(buf.str(), std::move(base));
}

} // namespace trickle::cli
