#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vmiq/vmdm.hpp"

namespace vmiq::cli {

/// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;  // at least one input could not be processed
inline constexpr int exit_usage = 2;    // bad arguments

/// mu (radians, axial) folded into degrees in [-90, 90).
double mu_to_degrees(double mu_radians);

/// Fixed-format numeric cell ("%.12g"), used by all CSV output.
std::string fmt(double v);

struct ScoreOptions {
    bool vmdm = false;
    bool json = false;
    double phi0 = 0.88;
    int window = 8;
    double step = 0.01;
    int probe_size = 5;
    double probe_sigma = 1.5;
};

struct ScoreRecord {
    std::string image;
    double kappa = 0.0;
    double abs_kappa = 0.0;
    double mu_degrees = 0.0;
    double epsilon = 0.0;
    double phi = 0.0;
    std::optional<double> d;
    std::optional<double> log_d;
    bool degenerate = false;
    bool fitted = false;   // von Mises stage completed (even if the VMDM stage failed)
    std::string error;     // nonempty when the record is incomplete
};

/// Scores one image; failures are captured in the record, not thrown.
ScoreRecord score_image(const std::string& path, const ScoreOptions& opts);

/// score: one CSV/JSON record per input, in input order. Returns exit_failure
/// if any record carries an error.
int cmd_score(const std::vector<std::string>& paths, const ScoreOptions& opts, std::ostream& out,
              std::ostream& err);

struct AutofocusOptions {
    bool json = false;
    int window = 8;
    double step = 0.01;
};

/// autofocus: |kappa| per frame plus the index of the sharpest frame (highest
/// |kappa|, ties to the lowest index), reported 0- and 1-based. Any unloadable
/// frame aborts with exit_failure since the winner would be meaningless.
int cmd_autofocus(const std::vector<std::string>& paths, const AutofocusOptions& opts,
                  std::ostream& out, std::ostream& err);

struct DegradeCmdOptions {
    std::string kind = "blur";  // blur | noise | blur+noise
    int steps = 10;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int blur_size = 5;
    double blur_sigma = 1.0;
    double noise_sigma = 0.01;
};

/// degrade: writes a step-indexed PGM ladder (step 0 = grayed original) and
/// prints one step,file row per image written.
int cmd_degrade(const std::string& path, const DegradeCmdOptions& opts, std::ostream& out,
                std::ostream& err);

/// Score CSV re-read for benchmarking: identifier column plus named numeric
/// columns; cells that are empty or non-numeric read back as nullopt.
struct ScoreTable {
    std::vector<std::string> columns;
    std::vector<std::string> ids;
    std::vector<std::vector<std::optional<double>>> cells;  // [row][column]
};

ScoreTable parse_score_csv(const std::string& path);

struct BenchmarkOptions {
    bool json = false;
};

/// benchmark: joins a score CSV with an opinion table by identifier and
/// prints Pearson, Spearman and Kendall tau-b (signed and absolute) for every
/// numeric column. Columns whose correlation is undefined (constant data,
/// fewer than 2 joined rows) get empty cells. A score identifier missing from
/// the opinion table is an error.
int cmd_benchmark(const std::string& score_csv, const std::string& opinion_path,
                  const BenchmarkOptions& opts, std::ostream& out, std::ostream& err);

struct LearnCmdOptions {
    std::string column = "log_d";
    double holdout = 0.2;
    int iterations = 20000;
    std::uint64_t seed = 0;
    std::string out_params = "transform_params.json";
    bool json = false;
};

/// learn: fits transform parameters on the leading (1 - holdout) fraction of
/// the joined rows, evaluates identity vs transformed Pearson/Spearman on
/// both splits, and writes the winning parameters as JSON.
int cmd_learn(const std::string& score_csv, const std::string& opinion_path,
              const LearnCmdOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace vmiq::cli
