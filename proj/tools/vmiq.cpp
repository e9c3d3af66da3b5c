#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "vmiq/cli.hpp"

namespace {

const CLI::Validator even_window{[](std::string& s) {
                                     int v = 0;
                                     try {
                                         v = std::stoi(s);
                                     } catch (...) {
                                         return std::string("not an integer");
                                     }
                                     if (v < 2 || v % 2 != 0) return std::string("must be even and >= 2");
                                     return std::string{};
                                 },
                                 "EVEN"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vmiq: no-reference image quality scoring via directional entropy"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI/TOML config file; flags take precedence")
        ->configurable(false);

    int rc = vmiq::cli::exit_ok;

    std::vector<std::string> score_paths;
    vmiq::cli::ScoreOptions score_opts;
    CLI::App* score = app.add_subcommand("score", "Score images (kappa, phi, optional VMDM)");
    score->add_option("paths", score_paths, "Input images (PNG, BMP, PGM)")->required();
    score->add_flag("--vmdm", score_opts.vmdm, "Also compute the degradation measure D");
    score->add_flag("--json", score_opts.json, "Emit JSON instead of CSV");
    score->add_option("--phi0", score_opts.phi0, "Pristine-image fitness anchor")
        ->capture_default_str();
    score->add_option("--window", score_opts.window, "Analysis window size N")
        ->check(even_window)
        ->capture_default_str();
    score->add_option("--step", score_opts.step, "Initial relative step of the kappa descent")
        ->capture_default_str();
    score->add_option("--probe-size", score_opts.probe_size, "Probe blur kernel size")
        ->capture_default_str();
    score->add_option("--probe-sigma", score_opts.probe_sigma, "Probe blur kernel sigma")
        ->capture_default_str();
    score->callback(
        [&] { rc = vmiq::cli::cmd_score(score_paths, score_opts, std::cout, std::cerr); });

    std::vector<std::string> af_paths;
    vmiq::cli::AutofocusOptions af_opts;
    CLI::App* autofocus =
        app.add_subcommand("autofocus", "Pick the sharpest frame of a stack by |kappa|");
    autofocus->add_option("paths", af_paths, "Frames, in stack order")->required();
    autofocus->add_flag("--json", af_opts.json, "Emit JSON instead of CSV");
    autofocus->add_option("--window", af_opts.window, "Analysis window size N")
        ->check(even_window)
        ->capture_default_str();
    autofocus->add_option("--step", af_opts.step, "Initial relative step of the kappa descent")
        ->capture_default_str();
    autofocus->callback(
        [&] { rc = vmiq::cli::cmd_autofocus(af_paths, af_opts, std::cout, std::cerr); });

    std::string degrade_path;
    vmiq::cli::DegradeCmdOptions degrade_opts;
    CLI::App* degrade = app.add_subcommand("degrade", "Write a progressive degradation ladder");
    degrade->add_option("path", degrade_path, "Source image")->required();
    degrade->add_option("--kind", degrade_opts.kind, "blur, noise, or blur+noise")
        ->check(CLI::IsMember({"blur", "noise", "blur+noise"}))
        ->capture_default_str();
    degrade->add_option("--steps", degrade_opts.steps, "Ladder length including step 0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    degrade->add_option("--out", degrade_opts.out_dir, "Output directory")->capture_default_str();
    degrade->add_option("--seed", degrade_opts.seed, "Noise seed")->capture_default_str();
    degrade->add_option("--blur-size", degrade_opts.blur_size, "Blur kernel size")
        ->capture_default_str();
    degrade->add_option("--blur-sigma", degrade_opts.blur_sigma, "Blur kernel sigma")
        ->capture_default_str();
    degrade->add_option("--noise-sigma", degrade_opts.noise_sigma, "Noise standard deviation")
        ->capture_default_str();
    degrade->callback(
        [&] { rc = vmiq::cli::cmd_degrade(degrade_path, degrade_opts, std::cout, std::cerr); });

    std::string bench_scores, bench_opinions;
    vmiq::cli::BenchmarkOptions bench_opts;
    CLI::App* benchmark =
        app.add_subcommand("benchmark", "Correlate a score CSV against an opinion table");
    benchmark->add_option("scores", bench_scores, "Score CSV (as written by `score`)")->required();
    benchmark->add_option("opinions", bench_opinions, "Opinion table (identifier score rows)")
        ->required();
    benchmark->add_flag("--json", bench_opts.json, "Emit JSON instead of CSV");
    benchmark->callback([&] {
        rc = vmiq::cli::cmd_benchmark(bench_scores, bench_opinions, bench_opts, std::cout,
                                      std::cerr);
    });

    std::string learn_scores, learn_opinions;
    vmiq::cli::LearnCmdOptions learn_opts;
    CLI::App* learn =
        app.add_subcommand("learn", "Fit a monotone score-to-opinion transform");
    learn->add_option("scores", learn_scores, "Score CSV (as written by `score`)")->required();
    learn->add_option("opinions", learn_opinions, "Opinion table (identifier score rows)")
        ->required();
    learn->add_option("--column", learn_opts.column, "Score column to learn from")
        ->capture_default_str();
    learn->add_option("--holdout", learn_opts.holdout, "Trailing fraction held out")
        ->check(CLI::Range(0.0, 0.999))
        ->capture_default_str();
    learn->add_option("--iterations", learn_opts.iterations, "Random-search iterations")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    learn->add_option("--seed", learn_opts.seed, "Random-search seed")->capture_default_str();
    learn->add_option("--out", learn_opts.out_params, "Where to write the learned parameters")
        ->capture_default_str();
    learn->add_flag("--json", learn_opts.json, "Emit JSON instead of CSV");
    learn->callback([&] {
        rc = vmiq::cli::cmd_learn(learn_scores, learn_opinions, learn_opts, std::cout, std::cerr);
    });

    // Let --config (a root option) appear after the subcommand as well.
    for (CLI::App* sub : {score, autofocus, degrade, benchmark, learn}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? vmiq::cli::exit_ok : vmiq::cli::exit_usage;
    }
    return rc;
}
