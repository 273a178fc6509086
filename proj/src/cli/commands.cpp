#include "trickle/cli/commands.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "trickle/analytics/limits.hpp"
#include "trickle/analytics/multicell.hpp"
#include "trickle/analytics/single_cell.hpp"
#include "trickle/cli/csv.hpp"
#include "trickle/cli/markov_suite.hpp"
#include "trickle/core/config.hpp"
#include "trickle/markov/lifetime.hpp"
#include "trickle/numeric/quadrature.hpp"
#include "trickle/numeric/rng.hpp"
#include "trickle/numeric/stats.hpp"
#include "trickle/sim/simulator.hpp"
#include "trickle/sim/topology.hpp"

namespace trickle::cli {

namespace {

namespace fs = std::filesystem;

fs::path output_path(const ExperimentSpec& spec, const std::string& suffix) {
    return fs::path(spec.output_dir) / (spec.name + "_" + suffix + ".csv");
}

// Seeds depend on the parameters rather than the grid position, so adding a
// grid point does not perturb the others.
std::uint64_t point_seed(std::uint64_t seed, int a, double b, double eta) {
    auto s = numeric::derive_seed(seed, static_cast<std::uint64_t>(a));
    s = numeric::derive_seed(s, std::bit_cast<std::uint64_t>(b));
    return numeric::derive_seed(s, std::bit_cast<std::uint64_t>(eta));
}

sim::SimRunConfig base_config(const ExperimentSpec& spec, int k, double eta) {
    sim::SimRunConfig cfg;
    cfg.trickle = TrickleConfig{k, 1.0, 1.0, eta};
    cfg.warmup = spec.warmup;
    cfg.duration = spec.warmup + spec.duration;
    return cfg;
}

sim::SimRunConfig cell_config(const ExperimentSpec& spec, int k, int n, double eta) {
    auto cfg = base_config(spec, k, eta);
    cfg.topology = sim::SingleCell{n};
    cfg.seed = point_seed(spec.seed, k, n, eta);
    return cfg;
}

std::string point_label(int k, int n, double eta) {
    std::ostringstream os;
    os << "k=" << k << " n=" << n << " eta=" << eta;
    return os.str();
}

std::vector<double> pooled_gaps(const std::vector<sim::SimStats>& runs) {
    std::vector<double> gaps;
    for (const auto& r : runs) gaps.insert(gaps.end(), r.inter_transmission_times.begin(), r.inter_transmission_times.end());
    return gaps;
}

// The analytic model assumes suppression is possible.
bool out_of_model(int k, int n) { return n <= k; }

double curve_end(int n, double eta) {
    if (eta >= 1.0) return 1.0;
    return eta + 6.0 * std::sqrt((1.0 - eta) / n);
}

void finish(CommandResult& res, CsvFile& file) {
    file.close();
    res.files.push_back(file.path());
}

} // namespace

CommandResult cmd_simulate(const ExperimentSpec& spec) {
    CommandResult res;
    CsvFile counts(output_path(spec, "counts"), spec,
                   {"k", "n", "eta", "mean_N_sim", "std", "ci_halfwidth", "replications"});
    CsvFile gaps(output_path(spec, "gaps"), spec, {"k", "n", "eta", "gap"});
    for (int k : spec.k) {
        for (int n : spec.n) {
            for (double eta : spec.eta) {
                const auto cfg = cell_config(spec, k, n, eta);
                const auto runs = sim::run_replications(cfg, spec.replications, spec.threads);
                const auto row = sim::summarize_replications(cfg, runs);
                counts.row(k, n, eta, row.mean, row.std_dev, row.ci_half_width, spec.replications);
                for (double g : pooled_gaps(runs)) gaps.row(k, n, eta, g);
                std::ostringstream os;
                os << point_label(k, n, eta) << ": mean_N_sim = " << row.mean << " +/- " << row.ci_half_width;
                res.summary.push_back(os.str());
            }
        }
    }
    finish(res, counts);
    finish(res, gaps);
    return res;
}

CommandResult cmd_analytic(const ExperimentSpec& spec) {
    CommandResult res;
    CsvFile table(output_path(spec, "analytic"), spec, {"k", "n", "eta", "quantity", "t", "value"});
    CsvFile moments(output_path(spec, "exp_moments"), spec,
                    {"k", "n", "eta", "j", "value", "reference", "rel_err"});
    for (int k : spec.k) {
        for (int n : spec.n) {
            for (double eta : spec.eta) {
                const analytics::AnalyticParams p{k, static_cast<double>(n), eta};
                const std::string none;
                const double mean = analytics::mean_N(p);
                table.row(k, n, eta, "norm_const", none, analytics::norm_const(p));
                table.row(k, n, eta, "mean_N", none, mean);
                table.row(k, n, eta, "mean_N_asymptotic", none, analytics::mean_N_asymptotic(p));
                for (int j = 1; j <= 3; ++j) {
                    table.row(k, n, eta, "moment_" + std::to_string(j), none, analytics::moment_T(j, p));
                }
                const double hi = curve_end(n, eta);
                const double scale = std::sqrt(n / 2.0);
                for (int i = 0; i < spec.t_points; ++i) {
                    const double t = hi * i / (spec.t_points - 1);
                    table.row(k, n, eta, "pdf", t, analytics::pdf_T(t, p));
                    table.row(k, n, eta, "cdf", t, analytics::cdf_T(t, p));
                    if (k >= 2 && eta == 0.0) {
                        table.row(k, n, eta, "limit_pdf", t, scale * analytics::limiting_pdf_eta0(scale * t, k));
                    } else if (k >= 2) {
                        table.row(k, n, eta, "limit_pdf", t, analytics::limiting_pdf_eta_pos(t, k, eta));
                    }
                }
                for (const auto& r : analytics::limiting_exp_checks(k, n, eta)) {
                    moments.row(k, n, eta, r.j, r.value, r.reference, r.rel_err);
                }
                std::ostringstream os;
                os << point_label(k, n, eta) << ": mean_N = " << mean;
                res.summary.push_back(os.str());
            }
        }
    }
    finish(res, table);
    finish(res, moments);
    return res;
}

CommandResult cmd_compare(const ExperimentSpec& spec) {
    CommandResult res;
    CsvFile hist(output_path(spec, "hist"), spec,
                 {"k", "n", "eta", "t_bin_lo", "t_bin_hi", "empirical_density", "analytic_density"});
    CsvFile ks(output_path(spec, "ks"), spec, {"k", "n", "eta", "gaps", "ks_statistic", "threshold", "status"});
    bool failed = false;
    for (int k : spec.k) {
        for (int n : spec.n) {
            for (double eta : spec.eta) {
                const auto cfg = cell_config(spec, k, n, eta);
                const auto gaps = pooled_gaps(sim::run_replications(cfg, spec.replications, spec.threads));
                const analytics::AnalyticParams p{k, static_cast<double>(n), eta};
                auto cdf = [&](double t) { return analytics::cdf_T(t, p); };

                std::string status;
                double d = 0.0;
                if (gaps.empty()) {
                    status = "no_data";
                } else {
                    d = numeric::ks_statistic(gaps, cdf);
                    if (out_of_model(k, n)) status = "out_of_model";
                    else status = d <= spec.ks_threshold ? "pass" : "fail";
                    for (const auto& b : numeric::density_histogram(gaps, spec.histogram_bins)) {
                        const double analytic = (cdf(b.hi) - cdf(b.lo)) / (b.hi - b.lo);
                        hist.row(k, n, eta, b.lo, b.hi, b.density, analytic);
                    }
                }
                failed = failed || status == "fail";
                ks.row(k, n, eta, gaps.size(), d, spec.ks_threshold, status);
                std::ostringstream os;
                os << point_label(k, n, eta) << ": KS = " << d << " over " << gaps.size() << " gaps [" << status
                   << "]";
                res.summary.push_back(os.str());
            }
        }
    }
    finish(res, hist);
    finish(res, ks);
    res.exit_code = failed ? kExitValidationFailure : kExitOk;
    return res;
}

CommandResult cmd_multicell(const ExperimentSpec& spec) {
    CommandResult res;
    CsvFile theta_csv(output_path(spec, "theta"), spec,
                      {"k", "R", "eta", "S", "mean_sim", "estimate", "theta", "side", "ci_halfwidth",
                       "large_range_estimate", "status"});
    CsvFile trend_csv(output_path(spec, "trend"), spec, {"side", "k", "eta", "spearman_R_theta", "status"});
    bool failed = false;
    for (int side : spec.side) {
        for (int k : spec.k) {
            for (double eta : spec.eta) {
                std::vector<double> ranges;
                std::vector<double> thetas;
                for (double range : spec.range) {
                    sim::Grid grid{side, range, 1.0, spec.toroidal};
                    const int s = sim::cell_size(grid, spec.include_self);
                    const analytics::GridParams gp{side, range, eta, k};
                    auto cfg = base_config(spec, k, eta);
                    cfg.topology = grid;
                    cfg.seed = point_seed(numeric::derive_seed(spec.seed, static_cast<std::uint64_t>(side)), k,
                                          range, eta);
                    const auto row = sim::summarize_replications(
                        cfg, sim::run_replications(cfg, spec.replications, spec.threads));
                    const double estimate = analytics::multicell_estimate(gp, s);
                    const double theta = row.mean / estimate;
                    const double theta_ci = row.ci_half_width / estimate;
                    bool ok = true;
                    if (eta == 0.0) ok = theta >= spec.theta_min && theta <= spec.theta_max;
                    else ok = theta >= 1.0 - theta_ci;
                    failed = failed || !ok;
                    theta_csv.row(k, range, eta, s, row.mean, estimate, theta, side, row.ci_half_width,
                                  analytics::multicell_large_range(gp), ok ? "pass" : "fail");
                    std::ostringstream os;
                    os << "side=" << side << " k=" << k << " R=" << range << " eta=" << eta << ": S = " << s
                       << ", theta = " << theta << " [" << (ok ? "pass" : "fail") << "]";
                    res.summary.push_back(os.str());
                    ranges.push_back(range);
                    thetas.push_back(theta);
                }
                if (eta > 0.0 && ranges.size() >= 2) {
                    const double rho = numeric::spearman(ranges, thetas);
                    const bool ok = rho >= 0.0;
                    failed = failed || !ok;
                    trend_csv.row(side, k, eta, rho, ok ? "pass" : "fail");
                    std::ostringstream os;
                    os << "side=" << side << " k=" << k << " eta=" << eta << ": rank correlation(R, theta) = " << rho
                       << " [" << (ok ? "pass" : "fail") << "]";
                    res.summary.push_back(os.str());
                }
            }
        }
    }
    finish(res, theta_csv);
    finish(res, trend_csv);
    res.exit_code = failed ? kExitValidationFailure : kExitOk;
    return res;
}

CommandResult cmd_markov_validate(const ExperimentSpec& spec) {
    CommandResult res;
    CsvFile report(output_path(spec, "markov"), spec,
                   {"check", "observed", "expected", "error", "tolerance", "status", "note"});
    bool failed = false;
    for (const auto& c : run_markov_suite(spec.seed)) {
        report.row(c.name, c.observed, c.expected, c.error, c.tolerance, c.passed ? "pass" : "fail", c.note);
        failed = failed || !c.passed;
        std::ostringstream os;
        os << c.name << ": observed " << c.observed << ", expected " << c.expected << " [" << (c.passed ? "pass" : "fail")
           << "]";
        res.summary.push_back(os.str());
    }
    finish(res, report);
    res.exit_code = failed ? kExitValidationFailure : kExitOk;
    return res;
}

CommandResult run_command(const ExperimentSpec& spec) {
    spec.validate();
    fs::create_directories(spec.output_dir);
    switch (spec.mode) {
    case Mode::Simulate: return cmd_simulate(spec);
    case Mode::Analytic: return cmd_analytic(spec);
    case Mode::Compare: return cmd_compare(spec);
    case Mode::Multicell: return cmd_multicell(spec);
    case Mode::MarkovValidate: return cmd_markov_validate(spec);
    }
    throw ConfigError("unknown mode");
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trickle steady-state experiments: simulation, analytic model and validation."};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    // Raw flag text, applied through the same path as spec-file entries.
    std::map<std::string, std::string> flags;
    std::map<std::string, CLI::App*> subs;
    const std::pair<const char*, const char*> options[] = {
        {"k", "redundancy constants, comma separated"},
        {"n", "single-cell sizes, comma separated"},
        {"side", "grid sides (multicell), comma separated"},
        {"range", "transmission ranges (multicell), comma separated"},
        {"eta", "listen-only fractions, comma separated"},
        {"replications", "replications per grid point"},
        {"duration", "measured virtual time per replication"},
        {"warmup", "virtual time simulated before measuring"},
        {"seed", "base random seed"},
        {"bins", "histogram bins (compare)"},
        {"t-points", "points on analytic curves"},
        {"ks-threshold", "KS pass threshold (compare)"},
        {"theta-min", "lower theta bound at eta = 0 (multicell)"},
        {"theta-max", "upper theta bound at eta = 0 (multicell)"},
        {"toroidal", "wrap the grid around (true/false)"},
        {"include-self", "count the broadcaster in S(R) (true/false)"},
        {"name", "experiment name, prefix of output files"},
        {"out", "output directory"},
        {"threads", "worker threads, 0 = all cores"},
        {"profile", "quick or paper"},
    };
    std::string spec_path;
    const std::pair<const char*, const char*> modes[] = {
        {"simulate", "single-cell runs: per-interval counts and attempt gaps"},
        {"analytic", "model curves for T and the expected count"},
        {"compare", "simulated gaps against the analytic law, KS per point"},
        {"multicell", "grid runs against the side^2/S(R) estimate"},
        {"markov-validate", "residual-chain and integral identity checks"},
    };
    for (const auto& [mode, about] : modes) {
        auto* sub = app.add_subcommand(mode, about);
        for (const auto& [key, help] : options) sub->add_option(std::string("--") + key, flags[key], help);
        sub->add_option("--spec", spec_path, "key = value spec file; its entries override flags");
        subs[mode] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        ExperimentSpec spec;
        std::string chosen;
        for (const auto& [name, sub] : subs) {
            if (sub->parsed()) chosen = name;
        }
        spec.mode = parse_mode(chosen);
        auto* sub = subs.at(chosen);
        if (sub->count("--profile")) apply_profile(spec, flags["profile"]);
        for (const auto& [key, help] : options) {
            if (std::string(key) != "profile" && sub->count(std::string("--") + key)) set_field(spec, key, flags[key]);
        }
        if (!spec_path.empty()) {
            spec = load_spec_file(spec_path, spec);
            if (spec.mode != parse_mode(chosen)) {
                throw ConfigError("spec file mode '" + mode_name(spec.mode) + "' does not match subcommand '" + chosen + "'");
            }
        }
        const auto res = run_command(spec);
        for (const auto& line : res.summary) out << line << '\n';
        for (const auto& f : res.files) out << "wrote " << f.string() << '\n';
        if (res.exit_code == kExitValidationFailure) err << "validation failed: thresholds exceeded\n";
        return res.exit_code;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const analytics::NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const numeric::QuadratureError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const markov::DomainError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const std::overflow_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
}

} // namespace trickle::cli
