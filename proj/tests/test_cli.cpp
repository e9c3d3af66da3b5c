#include "vmiq/cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "support/tmp.hpp"
#include "vmiq/degrade.hpp"
#include "vmiq/image_io.hpp"

using namespace vmiq;
using namespace vmiq::cli;
using vmiq::testing::TempDir;

namespace {

const std::string kSceneA = std::string(VMIQ_ASSET_DIR) + "/scene_a.pgm";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Parses one CSV data row (no quoting, matching the writer).
std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("mu_to_degrees folds the axial angle into [-90, 90)") {
    const double pi = std::numbers::pi;
    CHECK(mu_to_degrees(0.0) == 0.0);
    CHECK(mu_to_degrees(pi / 4) == doctest::Approx(45.0).epsilon(1e-12));
    CHECK(mu_to_degrees(pi / 2) == doctest::Approx(-90.0).epsilon(1e-12));
    CHECK(mu_to_degrees(101.25 * pi / 180.0) == doctest::Approx(-78.75).epsilon(1e-12));
    CHECK(mu_to_degrees(170.0 * pi / 180.0) == doctest::Approx(-10.0).epsilon(1e-12));
    // a full period up or down lands on the same fold
    CHECK(mu_to_degrees(pi / 4 + pi) == doctest::Approx(45.0).epsilon(1e-12));
    CHECK(mu_to_degrees(pi / 4 - pi) == doctest::Approx(45.0).epsilon(1e-12));
}

TEST_CASE("fmt uses twelve significant digits") {
    CHECK(fmt(0.5) == "0.5");
    CHECK(fmt(0.0) == "0");
    CHECK(fmt(1.0 / 3.0) == "0.333333333333");
    CHECK(fmt(-2.0) == "-2");
}

TEST_CASE("score emits one CSV row per image with consistent cells") {
    std::ostringstream out, err;
    int rc = cmd_score({kSceneA, kSceneA}, {}, out, err);
    CHECK(rc == exit_ok);
    CHECK(err.str().empty());

    std::vector<std::string> lines = lines_of(out.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "image,kappa,abs_kappa,mu_degrees,epsilon,phi,d,log_d,degenerate,error");
    CHECK(lines[1] == lines[2]);  // same input, same row

    std::vector<std::string> cells = split_row(lines[1]);
    REQUIRE(cells.size() == 10);
    CHECK(cells[0] == kSceneA);
    double kappa = std::stod(cells[1]);
    double abs_kappa = std::stod(cells[2]);
    double mu_deg = std::stod(cells[3]);
    double epsilon = std::stod(cells[4]);
    double phi = std::stod(cells[5]);
    CHECK(abs_kappa == std::abs(kappa));
    CHECK(mu_deg >= -90.0);
    CHECK(mu_deg < 90.0);
    CHECK(phi == doctest::Approx(std::exp(-epsilon)).epsilon(1e-9));
    CHECK(cells[6].empty());  // no --vmdm, no d
    CHECK(cells[7].empty());
    CHECK(cells[8] == "0");
    CHECK(cells[9].empty());

    SUBCASE("output is deterministic") {
        std::ostringstream again;
        cmd_score({kSceneA, kSceneA}, {}, again, err);
        CHECK(again.str() == out.str());
    }
}

TEST_CASE("score --vmdm fills d and log1p(d)") {
    ScoreOptions opts;
    opts.vmdm = true;
    std::ostringstream out, err;
    int rc = cmd_score({kSceneA}, opts, out, err);
    CHECK(rc == exit_ok);

    std::vector<std::string> cells = split_row(lines_of(out.str()).at(1));
    REQUIRE(cells.size() == 10);
    double d = std::stod(cells[6]);
    double log_d = std::stod(cells[7]);
    CHECK(d > -1.0);
    CHECK(log_d == doctest::Approx(std::log1p(d)).epsilon(1e-9));
}

TEST_CASE("score records failures without aborting the batch") {
    TempDir dir;
    std::ostringstream out, err;
    int rc = cmd_score({dir.file("missing.pgm"), kSceneA}, {}, out, err);
    CHECK(rc == exit_failure);

    std::vector<std::string> lines = lines_of(out.str());
    REQUIRE(lines.size() == 3);
    std::vector<std::string> bad = split_row(lines[1]);
    REQUIRE(bad.size() == 10);
    CHECK(bad[1].empty());        // no fit columns
    CHECK_FALSE(bad[9].empty());  // error text present
    std::vector<std::string> good = split_row(lines[2]);
    CHECK(good[9].empty());  // second image still scored
}

TEST_CASE("score marks a constant image as degenerate") {
    TempDir dir;
    save_pgm(GrayImage(32, 32, 0.5), dir.file("flat.pgm"));
    std::ostringstream out, err;
    int rc = cmd_score({dir.file("flat.pgm")}, {}, out, err);
    CHECK(rc == exit_ok);

    std::vector<std::string> cells = split_row(lines_of(out.str()).at(1));
    CHECK(cells[1] == "0");  // kappa
    CHECK(cells[8] == "1");  // degenerate flag
}

TEST_CASE("score --json emits a parsable array") {
    ScoreOptions opts;
    opts.json = true;
    std::ostringstream out, err;
    int rc = cmd_score({kSceneA}, opts, out, err);
    CHECK(rc == exit_ok);

    nlohmann::json arr = nlohmann::json::parse(out.str());
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 1);
    CHECK(arr[0]["image"] == kSceneA);
    CHECK(arr[0]["abs_kappa"].get<double>() == doctest::Approx(std::abs(arr[0]["kappa"].get<double>())));
    CHECK(arr[0]["degenerate"] == false);
    CHECK_FALSE(arr[0].contains("d"));
    CHECK_FALSE(arr[0].contains("error"));
}

TEST_CASE("score with no inputs is a usage error") {
    std::ostringstream out, err;
    CHECK(cmd_score({}, {}, out, err) == exit_usage);
    CHECK_FALSE(err.str().empty());
}

TEST_CASE("autofocus picks the frame with the largest |kappa|") {
    TempDir dir;
    GrayImage scene = load_image(kSceneA);
    std::vector<GrayImage> ladder = degradation_series(scene, Degradation::blur, 3);
    std::vector<std::string> frames;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        frames.push_back(dir.file("frame" + std::to_string(i) + ".pgm"));
        save_pgm(ladder[i], frames[i]);
    }

    // frame order: most blurred, sharp, mid; the sharp one must win
    std::ostringstream out, err;
    int rc = cmd_autofocus({frames[2], frames[0], frames[1]}, {}, out, err);
    CHECK(rc == exit_ok);

    std::vector<std::string> lines = lines_of(out.str());
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "frame,image,abs_kappa,degenerate");
    CHECK(lines[4] == "# best frame (0-based): 1");
    CHECK(lines[5] == "# best frame (1-based): 2");

    SUBCASE("json report agrees") {
        AutofocusOptions jopts;
        jopts.json = true;
        std::ostringstream jout;
        CHECK(cmd_autofocus({frames[2], frames[0], frames[1]}, jopts, jout, err) == exit_ok);
        nlohmann::json o = nlohmann::json::parse(jout.str());
        CHECK(o["best_index"] == 1);
        CHECK(o["best_index_1based"] == 2);
        REQUIRE(o["frames"].size() == 3);
        CHECK(o["frames"][1]["abs_kappa"].get<double>() >
              o["frames"][0]["abs_kappa"].get<double>());
        CHECK(o["frames"][1]["abs_kappa"].get<double>() >
              o["frames"][2]["abs_kappa"].get<double>());
    }
}

TEST_CASE("autofocus ties resolve to the lowest index") {
    std::ostringstream out, err;
    int rc = cmd_autofocus({kSceneA, kSceneA, kSceneA}, {}, out, err);
    CHECK(rc == exit_ok);
    std::vector<std::string> lines = lines_of(out.str());
    CHECK(lines[lines.size() - 2] == "# best frame (0-based): 0");
}

TEST_CASE("autofocus failure modes") {
    std::ostringstream out, err;
    CHECK(cmd_autofocus({}, {}, out, err) == exit_usage);

    TempDir dir;
    std::ostringstream out2, err2;
    CHECK(cmd_autofocus({kSceneA, dir.file("gone.pgm")}, {}, out2, err2) == exit_failure);
    CHECK_FALSE(err2.str().empty());
}

TEST_CASE("degrade writes a step-indexed ladder") {
    TempDir dir;
    DegradeCmdOptions opts;
    opts.kind = "blur";
    opts.steps = 3;
    opts.out_dir = dir.file("ladder");
    std::ostringstream out, err;
    int rc = cmd_degrade(kSceneA, opts, out, err);
    REQUIRE(rc == exit_ok);

    std::vector<std::string> lines = lines_of(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "step,file");
    CHECK(split_row(lines[1])[0] == "0");
    CHECK(split_row(lines[3])[0] == "2");

    // step 0 is the grayed original: for a PGM input, an exact round trip
    std::string step0 = split_row(lines[1])[1];
    CHECK(load_image(step0).data == load_image(kSceneA).data);

    std::string step2 = split_row(lines[3])[1];
    GrayImage blurred = load_image(step2);
    CHECK(blurred.width == 256);
    CHECK(blurred.data != load_image(kSceneA).data);
}

TEST_CASE("degrade noise ladders reproduce bit-for-bit under one seed") {
    TempDir dir;
    DegradeCmdOptions opts;
    opts.kind = "noise";
    opts.steps = 3;
    opts.seed = 7;

    opts.out_dir = dir.file("run1");
    std::ostringstream out1, err;
    REQUIRE(cmd_degrade(kSceneA, opts, out1, err) == exit_ok);
    opts.out_dir = dir.file("run2");
    std::ostringstream out2;
    REQUIRE(cmd_degrade(kSceneA, opts, out2, err) == exit_ok);

    for (int step = 1; step <= 2; ++step) {
        char name[32];
        std::snprintf(name, sizeof(name), "/scene_a_step%02d.pgm", step);
        CHECK(slurp(dir.file("run1") + name) == slurp(dir.file("run2") + name));
    }

    SUBCASE("a different seed changes the noise") {
        opts.seed = 8;
        opts.out_dir = dir.file("run3");
        std::ostringstream out3;
        REQUIRE(cmd_degrade(kSceneA, opts, out3, err) == exit_ok);
        CHECK(slurp(dir.file("run3") + "/scene_a_step01.pgm") !=
              slurp(dir.file("run1") + "/scene_a_step01.pgm"));
    }
}

TEST_CASE("degrade argument and input failures") {
    TempDir dir;
    std::ostringstream out, err;

    DegradeCmdOptions opts;
    opts.kind = "sharpen";
    CHECK(cmd_degrade(kSceneA, opts, out, err) == exit_usage);

    opts.kind = "blur";
    opts.steps = 0;
    CHECK(cmd_degrade(kSceneA, opts, out, err) == exit_usage);

    opts.steps = 1;
    opts.out_dir = dir.file("x");
    CHECK(cmd_degrade(dir.file("gone.pgm"), opts, out, err) == exit_failure);
}

TEST_CASE("benchmark correlates every numeric column against opinions") {
    TempDir dir;
    write_text(dir.file("scores.csv"),
               "image,kappa,flag,note\n"
               "a,0.1,1,oops\n"
               "b,0.4,1,\n"
               "c,0.2,1,\n"
               "d,0.9,1,\n");
    write_text(dir.file("mos.txt"), "a 1\nb 4\nc 2\nd 9\n");

    std::ostringstream out, err;
    int rc = cmd_benchmark(dir.file("scores.csv"), dir.file("mos.txt"), {}, out, err);
    REQUIRE(rc == exit_ok);

    std::vector<std::string> lines = lines_of(out.str());
    REQUIRE(lines.size() == 3);  // header + kappa + flag ("note" never numeric)
    CHECK(lines[0] == "column,n,pearson,spearman,kendall,abs_pearson,abs_spearman,abs_kendall");

    std::vector<std::string> kappa = split_row(lines[1]);
    CHECK(kappa[0] == "kappa");
    CHECK(kappa[1] == "4");
    CHECK(std::stod(kappa[2]) == doctest::Approx(1.0).epsilon(1e-12));  // opinions = 10 * kappa
    CHECK(std::stod(kappa[3]) == 1.0);
    CHECK(std::stod(kappa[4]) == 1.0);
    CHECK(std::stod(kappa[5]) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<std::string> flag = split_row(lines[2]);
    CHECK(flag[0] == "flag");
    CHECK(flag[1] == "4");
    CHECK(flag[2].empty());  // constant column: correlation undefined
    CHECK(flag[3].empty());
    CHECK(flag[4].empty());

    SUBCASE("opinion row order does not matter") {
        write_text(dir.file("mos2.txt"), "d 9\na 1\nc 2\nb 4\n");
        std::ostringstream out2;
        CHECK(cmd_benchmark(dir.file("scores.csv"), dir.file("mos2.txt"), {}, out2, err) ==
              exit_ok);
        CHECK(out2.str() == out.str());
    }

    SUBCASE("json mirrors the table") {
        BenchmarkOptions jopts;
        jopts.json = true;
        std::ostringstream jout;
        CHECK(cmd_benchmark(dir.file("scores.csv"), dir.file("mos.txt"), jopts, jout, err) ==
              exit_ok);
        nlohmann::json arr = nlohmann::json::parse(jout.str());
        REQUIRE(arr.size() == 2);
        CHECK(arr[0]["column"] == "kappa");
        CHECK(arr[0]["spearman"].get<double>() == 1.0);
        CHECK(arr[1]["pearson"].is_null());
    }
}

TEST_CASE("benchmark consumes score output unchanged") {
    TempDir dir;
    GrayImage scene = load_image(kSceneA);
    std::vector<GrayImage> ladder = degradation_series(scene, Degradation::blur, 3);
    std::vector<std::string> paths;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        paths.push_back(dir.file("step" + std::to_string(i) + ".pgm"));
        save_pgm(ladder[i], paths[i]);
    }

    std::ostringstream score_out, err;
    REQUIRE(cmd_score(paths, {}, score_out, err) == exit_ok);
    write_text(dir.file("scores.csv"), score_out.str());
    write_text(dir.file("mos.txt"),
               paths[0] + " 5\n" + paths[1] + " 3\n" + paths[2] + " 1\n");

    std::ostringstream out;
    REQUIRE(cmd_benchmark(dir.file("scores.csv"), dir.file("mos.txt"), {}, out, err) == exit_ok);

    // blur strictly lowers |kappa|, so abs_kappa tracks the mock opinions
    bool found = false;
    for (const std::string& line : lines_of(out.str())) {
        std::vector<std::string> cells = split_row(line);
        if (cells[0] != "abs_kappa") continue;
        found = true;
        CHECK(cells[1] == "3");
        CHECK(std::stod(cells[3]) == 1.0);  // spearman
    }
    CHECK(found);
}

TEST_CASE("benchmark fails when an identifier has no opinion") {
    TempDir dir;
    write_text(dir.file("scores.csv"), "image,kappa\na,0.1\nb,0.2\n");
    write_text(dir.file("mos.txt"), "a 1\n");
    std::ostringstream out, err;
    CHECK(cmd_benchmark(dir.file("scores.csv"), dir.file("mos.txt"), {}, out, err) ==
          exit_failure);
    CHECK(err.str().find("not present") != std::string::npos);
}

TEST_CASE("learn keeps the identity when it is already perfect") {
    TempDir dir;
    std::string csv = "image,log_d\n";
    std::string mos;
    for (int i = 0; i < 10; ++i) {
        std::string id = "img" + std::to_string(i);
        double v = 0.1 * (i + 1);
        csv += id + "," + fmt(v) + "\n";
        mos += id + " " + fmt(v) + "\n";
    }
    write_text(dir.file("scores.csv"), csv);
    write_text(dir.file("mos.txt"), mos);

    LearnCmdOptions opts;
    opts.iterations = 500;
    opts.out_params = dir.file("params.json");
    std::ostringstream out, err;
    int rc = cmd_learn(dir.file("scores.csv"), dir.file("mos.txt"), opts, out, err);
    REQUIRE(rc == exit_ok);

    nlohmann::json params = nlohmann::json::parse(slurp(dir.file("params.json")));
    CHECK(params["identity_objective"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(params["objective"] == params["identity_objective"]);
    for (double a : params["a"].get<std::vector<double>>()) CHECK(a == 0.0);

    std::vector<std::string> lines = lines_of(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] ==
          "split,n,pearson_identity,spearman_identity,pearson_transformed,spearman_transformed");
    std::vector<std::string> train = split_row(lines[1]);
    CHECK(train[0] == "train");
    CHECK(train[1] == "8");  // holdout 0.2 of 10
    std::vector<std::string> hold = split_row(lines[2]);
    CHECK(hold[0] == "holdout");
    CHECK(hold[1] == "2");
    CHECK(std::stod(hold[4]) == doctest::Approx(1.0).epsilon(1e-9));  // transformed pearson
    CHECK(lines[3] == "# params written to " + dir.file("params.json"));
}

TEST_CASE("learn is deterministic for a fixed seed") {
    TempDir dir;
    std::string csv = "image,log_d\n";
    std::string mos;
    // a saturating relationship the identity cannot match
    for (int i = 0; i < 12; ++i) {
        std::string id = "img" + std::to_string(i);
        double v = 0.5 * i;
        csv += id + "," + fmt(v) + "\n";
        mos += id + " " + fmt(std::tanh(v - 2.0) + 0.01 * i) + "\n";
    }
    write_text(dir.file("scores.csv"), csv);
    write_text(dir.file("mos.txt"), mos);

    LearnCmdOptions opts;
    opts.iterations = 300;
    opts.seed = 11;
    opts.holdout = 0.0;

    opts.out_params = dir.file("p1.json");
    std::ostringstream out1, err;
    REQUIRE(cmd_learn(dir.file("scores.csv"), dir.file("mos.txt"), opts, out1, err) == exit_ok);
    opts.out_params = dir.file("p2.json");
    std::ostringstream out2;
    REQUIRE(cmd_learn(dir.file("scores.csv"), dir.file("mos.txt"), opts, out2, err) == exit_ok);

    CHECK(slurp(dir.file("p1.json")) == slurp(dir.file("p2.json")));
    nlohmann::json params = nlohmann::json::parse(slurp(dir.file("p1.json")));
    CHECK(params["objective"].get<double>() >= params["identity_objective"].get<double>());
}

TEST_CASE("learn argument and data failures") {
    TempDir dir;
    write_text(dir.file("scores.csv"), "image,log_d,d\na,1,\nb,2,\nc,3,\nd,4,\n");
    write_text(dir.file("mos.txt"), "a 1\nb 1\nc 1\nd 1\n");
    std::ostringstream out, err;

    SUBCASE("holdout outside [0, 1)") {
        LearnCmdOptions opts;
        opts.holdout = 1.0;
        CHECK(cmd_learn(dir.file("scores.csv"), dir.file("mos.txt"), opts, out, err) ==
              exit_usage);
        opts.holdout = -0.1;
        CHECK(cmd_learn(dir.file("scores.csv"), dir.file("mos.txt"), opts, out, err) ==
              exit_usage);
    }
    SUBCASE("constant opinions leave the objective undefined") {
        LearnCmdOptions opts;
        opts.holdout = 0.0;
        opts.out_params = dir.file("p.json");
        CHECK(cmd_learn(dir.file("scores.csv"), dir.file("mos.txt"), opts, out, err) ==
              exit_failure);
    }
    SUBCASE("unknown column") {
        LearnCmdOptions opts;
        opts.column = "nope";
        CHECK(cmd_learn(dir.file("scores.csv"), dir.file("mos.txt"), opts, out, err) ==
              exit_failure);
        CHECK(err.str().find("no column named") != std::string::npos);
    }
    SUBCASE("empty cell in the chosen column") {
        LearnCmdOptions opts;
        opts.column = "d";
        CHECK(cmd_learn(dir.file("scores.csv"), dir.file("mos.txt"), opts, out, err) ==
              exit_failure);
    }
}

TEST_SUITE_END();
