// Generates the bundled test scenes under assets/images/.
//
// Each scene is value-noise terrain plus a handful of soft-edged ellipses,
// normalized to mid-range contrast: smooth shading with sparse structure,
// which is the regime where the fitness of an undegraded image sits above
// 0.8 and repeated blurring walks |kappa| down monotonically. Candidate
// seeds are verified against exactly the properties the test suite relies
// on before anything is written; run with --search to scan for new seeds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vmiq/degrade.hpp"
#include "vmiq/image_io.hpp"
#include "vmiq/stats.hpp"
#include "vmiq/vmdm.hpp"

namespace {

using namespace vmiq;

double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// One octave of bilinear value noise with smoothstep-eased weights.
struct NoiseOctave {
    int grid_w, grid_h, spacing;
    std::vector<double> grid;

    NoiseOctave(int w, int h, int spacing_, std::mt19937_64& rng) : spacing(spacing_) {
        grid_w = w / spacing + 2;
        grid_h = h / spacing + 2;
        grid.resize(static_cast<std::size_t>(grid_w) * grid_h);
        for (double& v : grid) v = uniform01(rng);
    }

    double sample(int x, int y) const {
        double fx = static_cast<double>(x) / spacing;
        double fy = static_cast<double>(y) / spacing;
        int x0 = static_cast<int>(fx);
        int y0 = static_cast<int>(fy);
        double tx = smoothstep(fx - x0);
        double ty = smoothstep(fy - y0);
        const double* row0 = &grid[static_cast<std::size_t>(y0) * grid_w];
        const double* row1 = row0 + grid_w;
        double a = row0[x0] + (row0[x0 + 1] - row0[x0]) * tx;
        double b = row1[x0] + (row1[x0 + 1] - row1[x0]) * tx;
        return a + (b - a) * ty;
    }
};

GrayImage synth_scene(int width, int height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);

    const int spacings[] = {64, 32, 16, 8, 4};
    const double amps[] = {0.50, 0.25, 0.12, 0.05, 0.02};
    std::vector<NoiseOctave> octaves;
    for (int s : spacings) octaves.emplace_back(width, height, s, rng);

    GrayImage img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double v = 0.0;
            for (std::size_t i = 0; i < octaves.size(); ++i) v += amps[i] * octaves[i].sample(x, y);
            img.at(x, y) = v;
        }
    }

    // Soft-edged ellipses: extended objects with crisp but not aliased rims.
    int objects = 6 + static_cast<int>(rng() % 4);
    for (int i = 0; i < objects; ++i) {
        double cx = width * uniform01(rng);
        double cy = height * uniform01(rng);
        double rx = 12.0 + 50.0 * uniform01(rng);
        double ry = 12.0 + 50.0 * uniform01(rng);
        double rot = 3.141592653589793 * uniform01(rng);
        double amp = (uniform01(rng) < 0.5 ? -1.0 : 1.0) * (0.15 + 0.2 * uniform01(rng));
        double cr = std::cos(rot), sr = std::sin(rot);
        double edge = 2.0 / std::min(rx, ry);  // ~2 px transition band

        int x_lo = std::max(0, static_cast<int>(cx - rx - ry)), x_hi = std::min(width - 1, static_cast<int>(cx + rx + ry));
        int y_lo = std::max(0, static_cast<int>(cy - rx - ry)), y_hi = std::min(height - 1, static_cast<int>(cy + rx + ry));
        for (int y = y_lo; y <= y_hi; ++y) {
            for (int x = x_lo; x <= x_hi; ++x) {
                double dx = x - cx, dy = y - cy;
                double u = (dx * cr + dy * sr) / rx;
                double w = (-dx * sr + dy * cr) / ry;
                double s = std::sqrt(u * u + w * w);
                if (s >= 1.0) continue;
                double t = std::min(1.0, (1.0 - s) / edge);
                img.at(x, y) += amp * smoothstep(t);
            }
        }
    }

    double lo = img.data[0], hi = img.data[0];
    for (double v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span = hi - lo;
    for (double& v : img.data) v = 0.04 + 0.92 * (v - lo) / span;

    // Snap to the 8-bit grid the PGM writer uses, so every property checked
    // below holds for the exact bytes that land on disk.
    for (double& v : img.data) v = std::lround(v * 255.0) / 255.0;
    return img;
}

struct SceneReport {
    bool ok = false;
    double phi = 0.0;
    double abs_kappa = 0.0;
    double beta = 0.0;
    std::vector<double> kappa_ladder;
    std::vector<double> phi_ladder;
    std::string reason;
};

// The properties the acceptance tests need from a bundled scene: pristine
// fitness above 0.8 with margin, usable VMDM decay, and a 14-entry blur
// ladder (deep enough for a 21-frame focus stack centered at index 13)
// with strictly decreasing |kappa| and a falling phi trend.
SceneReport check_scene(const GrayImage& img) {
    SceneReport rep;

    VonMisesFit fit = fit_vonmises(mean_directional_entropy(img));
    rep.phi = fit.phi;
    rep.abs_kappa = std::abs(fit.kappa);
    if (fit.degenerate) {
        rep.reason = "degenerate fit";
        return rep;
    }
    if (rep.phi < 0.82) {
        rep.reason = "phi too low";
        return rep;
    }

    try {
        VmdmResult vr = vmdm_score(img);
        rep.beta = vr.beta;
        if (vr.beta < 2e-4) {
            rep.reason = "beta too small";
            return rep;
        }
    } catch (const std::exception& e) {
        rep.reason = std::string("vmdm failed: ") + e.what();
        return rep;
    }

    std::vector<GrayImage> ladder = degradation_series(img, Degradation::blur, 14);
    for (const GrayImage& step : ladder) {
        VonMisesFit f = fit_vonmises(mean_directional_entropy(step));
        rep.kappa_ladder.push_back(std::abs(f.kappa));
        rep.phi_ladder.push_back(f.phi);
    }
    for (std::size_t i = 1; i < rep.kappa_ladder.size(); ++i) {
        if (!(rep.kappa_ladder[i] < rep.kappa_ladder[i - 1] - 1e-4)) {
            rep.reason = "kappa ladder not strictly decreasing at step " + std::to_string(i);
            return rep;
        }
    }
    std::vector<double> steps(rep.phi_ladder.size());
    for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = static_cast<double>(i);
    double rho = spearman(rep.phi_ladder, steps);
    if (!(rho <= -0.8)) {
        rep.reason = "phi trend too weak (spearman " + std::to_string(rho) + ")";
        return rep;
    }

    rep.ok = true;
    return rep;
}

void print_report(std::uint64_t seed, const SceneReport& rep) {
    std::printf("seed %llu: %s  phi=%.4f |kappa|=%.4f beta=%.5f",
                static_cast<unsigned long long>(seed), rep.ok ? "OK  " : "fail", rep.phi,
                rep.abs_kappa, rep.beta);
    if (!rep.ok) std::printf("  (%s)", rep.reason.c_str());
    if (!rep.kappa_ladder.empty()) {
        std::printf("  kappa ladder:");
        for (double k : rep.kappa_ladder) std::printf(" %.3f", k);
    }
    std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
    // Seeds found by --search and frozen; regeneration is deterministic.
    const std::uint64_t scene_seeds[] = {1, 2, 3, 11, 12};
    const char* scene_names[] = {"scene_a", "scene_b", "scene_c", "scene_d", "scene_e"};
    const int size = 256;

    std::string out_dir = "assets/images";
    bool search = false;
    std::uint64_t search_start = 1;
    int search_count = 40;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--search" && i + 1 < argc) {
            search = true;
            search_start = std::strtoull(argv[++i], nullptr, 10);
        } else if (arg == "--count" && i + 1 < argc) {
            search_count = std::atoi(argv[++i]);
        } else {
            out_dir = arg;
        }
    }

    if (search) {
        for (std::uint64_t seed = search_start; seed < search_start + search_count; ++seed) {
            print_report(seed, check_scene(synth_scene(size, size, seed)));
        }
        return 0;
    }

    std::filesystem::create_directories(out_dir);
    bool all_ok = true;
    for (std::size_t i = 0; i < std::size(scene_seeds); ++i) {
        GrayImage img = synth_scene(size, size, scene_seeds[i]);
        SceneReport rep = check_scene(img);
        print_report(scene_seeds[i], rep);
        if (!rep.ok) {
            all_ok = false;
            continue;
        }
        std::string path = out_dir + "/" + scene_names[i] + ".pgm";
        save_pgm(img, path);
        std::printf("wrote %s\n", path.c_str());
    }
    return all_ok ? 0 : 1;
}
