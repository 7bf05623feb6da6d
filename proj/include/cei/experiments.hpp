#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cei/grid_path.hpp"
#include "cei/stats.hpp"

namespace cei {

enum class file_format { csv, json };

const char* file_format_name(file_format f);
file_format parse_file_format(const std::string& s);

// Accepts "lo,hi" (read as the half-open interval (lo, hi]) or an explicit
// bracketed form: "[lo,hi]", "(lo,hi]", "[lo,hi)", "(lo,hi)".
interval parse_interval(const std::string& text);

// Everything a named experiment needs; unset optionals fall back to the
// experiment's registered defaults (e.g. local-time experiments run at
// n = 4096, everything else at n = 1024).
struct experiment_config {
    std::string experiment;
    std::optional<int> n;
    std::optional<long> paths;
    std::uint64_t seed = 0;
    std::optional<double> epsilon;
    std::optional<interval> window;
    std::optional<double> x;
    std::optional<double> y;
    double alpha = 0.001;
    std::string out_dir = ".";
    file_format format = file_format::csv;
};

struct experiment_info {
    std::string name;
    std::string citation;
    std::string description;
};

// The full registry, in a fixed order.
const std::vector<experiment_info>& list_experiments();

// Runs the named experiment and returns its report without touching the
// filesystem. `sample_sink`, when given, receives up to 64 representative
// paths for artifact emission. The report is a pure function of the config.
test_report evaluate_experiment(const experiment_config& cfg,
                                std::vector<grid_path>* sample_sink = nullptr);

// evaluate_experiment plus artifacts: writes <name>-report.json and
// <name>-samples.{csv,json} into out_dir.
test_report run_experiment(const experiment_config& cfg);

// CSV: a `# n=<n> seed=<seed> paths=<count>` comment, a t_0..t_n header row,
// then one row per path. JSON: {"metadata": {...}, "paths": [[...], ...]}.
// Values are printed with 17 significant digits so a round-trip is exact.
void emit_samples(const std::vector<grid_path>& paths, file_format format,
                  const std::string& destination, std::uint64_t seed);

// Reads a file written by emit_samples; the format is sniffed from the
// content (JSON object vs. CSV rows).
std::vector<grid_path> read_samples(const std::string& source);

std::string report_to_json(const test_report& r);
void write_report(const test_report& r, const std::string& destination);

// Key=value config lines (one per line, '#' comments) holding any of the
// experiment_config fields: experiment, n, paths, seed, epsilon, interval,
// x, y, alpha, out_dir, format. Values overwrite the matching cfg fields;
// anything not mentioned keeps its previous value, so CLI flags can override
// afterwards.
void apply_config_file(const std::string& file, experiment_config& cfg);

}  // namespace cei
