#include "vmiq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vmiq/errors.hpp"
#include "vmiq/image_io.hpp"
#include "vmiq/stats.hpp"

namespace vmiq::cli {

namespace {

using nlohmann::json;

std::string sanitize_csv(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return text;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

std::optional<double> parse_cell(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) return std::nullopt;
    return v;
}

struct JoinedColumn {
    std::vector<double> values;
    std::vector<double> opinions;
};

// Pairs every non-empty cell of each score column with the opinion of its
// row's identifier. Throws ParseError when an identifier has no opinion.
std::vector<JoinedColumn> join_columns(const ScoreTable& table, const OpinionTable& opinions,
                                       const std::string& score_path) {
    std::vector<JoinedColumn> joined(table.columns.size());
    for (std::size_t row = 0; row < table.ids.size(); ++row) {
        long at = opinions.find(table.ids[row]);
        if (at < 0) {
            throw ParseError(score_path + ": identifier '" + table.ids[row] +
                             "' not present in the opinion table");
        }
        double opinion = opinions.scores[static_cast<std::size_t>(at)];
        for (std::size_t col = 0; col < table.columns.size(); ++col) {
            if (table.cells[row][col]) {
                joined[col].values.push_back(*table.cells[row][col]);
                joined[col].opinions.push_back(opinion);
            }
        }
    }
    return joined;
}

}  // namespace

double mu_to_degrees(double mu_radians) {
    double deg = std::fmod(mu_radians * 180.0 / std::numbers::pi, 180.0);
    if (deg >= 90.0) deg -= 180.0;
    if (deg < -90.0) deg += 180.0;
    return deg;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

ScoreRecord score_image(const std::string& path, const ScoreOptions& opts) {
    ScoreRecord rec;
    rec.image = path;
    try {
        GrayImage img = load_image(path);
        FitOptions fit_opts;
        fit_opts.step = opts.step;
        VonMisesFit fit = fit_vonmises(mean_directional_entropy(img, opts.window), fit_opts);
        rec.kappa = fit.kappa;
        rec.abs_kappa = std::abs(fit.kappa);
        rec.mu_degrees = mu_to_degrees(fit.mu);
        rec.epsilon = fit.epsilon;
        rec.phi = fit.phi;
        rec.degenerate = fit.degenerate;
        rec.fitted = true;
        if (opts.vmdm) {
            VmdmOptions vopts;
            vopts.phi0 = opts.phi0;
            vopts.window = opts.window;
            vopts.probe = gaussian_kernel(opts.probe_size, opts.probe_sigma);
            vopts.fit = fit_opts;
            VmdmResult vr = vmdm_score(img, vopts);
            rec.d = vr.d;
            rec.log_d = vr.log_d;
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

int cmd_score(const std::vector<std::string>& paths, const ScoreOptions& opts, std::ostream& out,
              std::ostream& err) {
    if (paths.empty()) {
        err << "score: no input images\n";
        return exit_usage;
    }

    std::vector<ScoreRecord> records;
    records.reserve(paths.size());
    for (const std::string& path : paths) records.push_back(score_image(path, opts));

    bool any_failed = false;
    if (opts.json) {
        json arr = json::array();
        for (const ScoreRecord& r : records) {
            json o;
            o["image"] = r.image;
            if (r.fitted) {
                o["kappa"] = r.kappa;
                o["abs_kappa"] = r.abs_kappa;
                o["mu_degrees"] = r.mu_degrees;
                o["epsilon"] = r.epsilon;
                o["phi"] = r.phi;
                o["degenerate"] = r.degenerate;
                if (r.d) o["d"] = *r.d;
                if (r.log_d) o["log_d"] = *r.log_d;
            }
            if (!r.error.empty()) {
                o["error"] = r.error;
                any_failed = true;
            }
            arr.push_back(std::move(o));
        }
        out << arr.dump(2) << "\n";
    } else {
        out << "image,kappa,abs_kappa,mu_degrees,epsilon,phi,d,log_d,degenerate,error\n";
        for (const ScoreRecord& r : records) {
            out << sanitize_csv(r.image) << ',';
            if (r.fitted) {
                out << fmt(r.kappa) << ',' << fmt(r.abs_kappa) << ',' << fmt(r.mu_degrees) << ','
                    << fmt(r.epsilon) << ',' << fmt(r.phi) << ','
                    << (r.d ? fmt(*r.d) : std::string{}) << ','
                    << (r.log_d ? fmt(*r.log_d) : std::string{}) << ','
                    << (r.degenerate ? '1' : '0') << ',';
            } else {
                out << ",,,,,,,,";
            }
            out << sanitize_csv(r.error) << '\n';
            if (!r.error.empty()) any_failed = true;
        }
    }
    return any_failed ? exit_failure : exit_ok;
}

int cmd_autofocus(const std::vector<std::string>& paths, const AutofocusOptions& opts,
                  std::ostream& out, std::ostream& err) {
    if (paths.empty()) {
        err << "autofocus: no input frames\n";
        return exit_usage;
    }

    ScoreOptions sopts;
    sopts.window = opts.window;
    sopts.step = opts.step;
    std::vector<ScoreRecord> records;
    records.reserve(paths.size());
    for (const std::string& path : paths) {
        ScoreRecord rec = score_image(path, sopts);
        if (!rec.error.empty()) {
            err << "autofocus: " << rec.error << "\n";
            return exit_failure;
        }
        records.push_back(std::move(rec));
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].abs_kappa > records[best].abs_kappa) best = i;
    }

    if (opts.json) {
        json o;
        json frames = json::array();
        for (std::size_t i = 0; i < records.size(); ++i) {
            frames.push_back({{"frame", i},
                              {"image", records[i].image},
                              {"abs_kappa", records[i].abs_kappa},
                              {"degenerate", records[i].degenerate}});
        }
        o["frames"] = std::move(frames);
        o["best_index"] = best;
        o["best_index_1based"] = best + 1;
        out << o.dump(2) << "\n";
    } else {
        out << "frame,image,abs_kappa,degenerate\n";
        for (std::size_t i = 0; i < records.size(); ++i) {
            out << i << ',' << sanitize_csv(records[i].image) << ',' << fmt(records[i].abs_kappa)
                << ',' << (records[i].degenerate ? '1' : '0') << '\n';
        }
        out << "# best frame (0-based): " << best << "\n";
        out << "# best frame (1-based): " << best + 1 << "\n";
    }
    return exit_ok;
}

int cmd_degrade(const std::string& path, const DegradeCmdOptions& opts, std::ostream& out,
                std::ostream& err) {
    Degradation kind;
    if (opts.kind == "blur") {
        kind = Degradation::blur;
    } else if (opts.kind == "noise") {
        kind = Degradation::noise;
    } else if (opts.kind == "blur+noise") {
        kind = Degradation::blur_noise;
    } else {
        err << "degrade: unknown kind '" << opts.kind << "' (expected blur, noise, blur+noise)\n";
        return exit_usage;
    }
    if (opts.steps < 1) {
        err << "degrade: steps must be >= 1\n";
        return exit_usage;
    }

    try {
        GrayImage img = load_image(path);
        DegradeOptions dopts;
        dopts.blur_size = opts.blur_size;
        dopts.blur_sigma = opts.blur_sigma;
        dopts.noise_sigma = opts.noise_sigma;
        dopts.seed = opts.seed;
        std::vector<GrayImage> series = degradation_series(img, kind, opts.steps, dopts);

        std::filesystem::path dir(opts.out_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

        std::string stem = std::filesystem::path(path).stem().string();
        out << "step,file\n";
        for (std::size_t i = 0; i < series.size(); ++i) {
            char suffix[24];
            std::snprintf(suffix, sizeof(suffix), "_step%02zu.pgm", i);
            std::filesystem::path file = dir / (stem + suffix);
            save_pgm(series[i], file.string());
            out << i << ',' << sanitize_csv(file.string()) << '\n';
        }
    } catch (const std::exception& e) {
        err << "degrade: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_ok;
}

ScoreTable parse_score_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    ScoreTable table;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty score file");
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2) throw ParseError(path + ": header needs an identifier column plus data");
    table.columns.assign(header.begin() + 1, header.end());

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " cells, got " +
                             std::to_string(cells.size()));
        }
        table.ids.push_back(cells[0]);
        std::vector<std::optional<double>> row;
        row.reserve(table.columns.size());
        for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(parse_cell(cells[i]));
        table.cells.push_back(std::move(row));
    }
    return table;
}

int cmd_benchmark(const std::string& score_csv, const std::string& opinion_path,
                  const BenchmarkOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        ScoreTable table = parse_score_csv(score_csv);
        OpinionTable opinions = load_opinion_table(opinion_path);
        std::vector<JoinedColumn> joined = join_columns(table, opinions, score_csv);

        struct Row {
            std::string column;
            std::size_t n = 0;
            std::optional<double> pearson_v, spearman_v, kendall_v;
        };
        std::vector<Row> rows;
        for (std::size_t col = 0; col < table.columns.size(); ++col) {
            const JoinedColumn& j = joined[col];
            if (j.values.empty()) continue;  // never-populated column (e.g. error text)
            Row row;
            row.column = table.columns[col];
            row.n = j.values.size();
            try {
                row.pearson_v = pearson(j.values, j.opinions);
            } catch (const UndefinedCorrelation&) {
            } catch (const std::invalid_argument&) {
            }
            try {
                row.spearman_v = spearman(j.values, j.opinions);
            } catch (const UndefinedCorrelation&) {
            } catch (const std::invalid_argument&) {
            }
            try {
                row.kendall_v = kendall_tau_b(j.values, j.opinions);
            } catch (const UndefinedCorrelation&) {
            } catch (const std::invalid_argument&) {
            }
            rows.push_back(std::move(row));
        }

        if (opts.json) {
            json arr = json::array();
            for (const Row& r : rows) {
                json o;
                o["column"] = r.column;
                o["n"] = r.n;
                o["pearson"] = r.pearson_v ? json(*r.pearson_v) : json(nullptr);
                o["spearman"] = r.spearman_v ? json(*r.spearman_v) : json(nullptr);
                o["kendall"] = r.kendall_v ? json(*r.kendall_v) : json(nullptr);
                o["abs_pearson"] = r.pearson_v ? json(std::abs(*r.pearson_v)) : json(nullptr);
                o["abs_spearman"] = r.spearman_v ? json(std::abs(*r.spearman_v)) : json(nullptr);
                o["abs_kendall"] = r.kendall_v ? json(std::abs(*r.kendall_v)) : json(nullptr);
                arr.push_back(std::move(o));
            }
            out << arr.dump(2) << "\n";
        } else {
            out << "column,n,pearson,spearman,kendall,abs_pearson,abs_spearman,abs_kendall\n";
            for (const Row& r : rows) {
                auto cell = [](const std::optional<double>& v) {
                    return v ? fmt(*v) : std::string{};
                };
                auto abs_cell = [](const std::optional<double>& v) {
                    return v ? fmt(std::abs(*v)) : std::string{};
                };
                out << sanitize_csv(r.column) << ',' << r.n << ',' << cell(r.pearson_v) << ','
                    << cell(r.spearman_v) << ',' << cell(r.kendall_v) << ','
                    << abs_cell(r.pearson_v) << ',' << abs_cell(r.spearman_v) << ','
                    << abs_cell(r.kendall_v) << '\n';
            }
        }
    } catch (const std::exception& e) {
        err << "benchmark: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_ok;
}

int cmd_learn(const std::string& score_csv, const std::string& opinion_path,
              const LearnCmdOptions& opts, std::ostream& out, std::ostream& err) {
    if (!(opts.holdout >= 0.0 && opts.holdout < 1.0)) {
        err << "learn: holdout must lie in [0, 1)\n";
        return exit_usage;
    }
    try {
        ScoreTable table = parse_score_csv(score_csv);
        OpinionTable opinions = load_opinion_table(opinion_path);

        auto col_it = std::find(table.columns.begin(), table.columns.end(), opts.column);
        if (col_it == table.columns.end()) {
            throw ParseError(score_csv + ": no column named '" + opts.column + "'");
        }
        std::size_t col = static_cast<std::size_t>(col_it - table.columns.begin());

        std::vector<double> scores, opinion_values;
        for (std::size_t row = 0; row < table.ids.size(); ++row) {
            if (!table.cells[row][col]) {
                throw ParseError(score_csv + ": row for '" + table.ids[row] +
                                 "' has no value in column '" + opts.column + "'");
            }
            long at = opinions.find(table.ids[row]);
            if (at < 0) {
                throw ParseError(score_csv + ": identifier '" + table.ids[row] +
                                 "' not present in the opinion table");
            }
            scores.push_back(*table.cells[row][col]);
            opinion_values.push_back(opinions.scores[static_cast<std::size_t>(at)]);
        }

        std::size_t n = scores.size();
        std::size_t n_hold =
            static_cast<std::size_t>(std::llround(opts.holdout * static_cast<double>(n)));
        if (n >= 3 && n_hold > n - 3) n_hold = n - 3;  // keep at least 3 training rows
        std::size_t n_train = n - n_hold;

        std::span<const double> train_s(scores.data(), n_train);
        std::span<const double> train_o(opinion_values.data(), n_train);
        std::span<const double> hold_s(scores.data() + n_train, n_hold);
        std::span<const double> hold_o(opinion_values.data() + n_train, n_hold);

        LearnConfig cfg;
        cfg.iterations = opts.iterations;
        cfg.seed = opts.seed;
        LearnOutcome outcome = learn_transform(train_s, train_o, cfg);

        auto metrics = [&](std::span<const double> s, std::span<const double> o,
                           bool transformed) -> std::pair<std::optional<double>, std::optional<double>> {
            if (s.size() < 2) return {std::nullopt, std::nullopt};
            std::vector<double> v(s.begin(), s.end());
            if (transformed) {
                for (double& x : v) x = transform(x, outcome.params);
            }
            std::pair<std::optional<double>, std::optional<double>> m;
            try {
                m.first = pearson(v, o);
            } catch (const UndefinedCorrelation&) {
            }
            try {
                m.second = spearman(v, o);
            } catch (const UndefinedCorrelation&) {
            }
            return m;
        };

        auto [train_ip, train_is] = metrics(train_s, train_o, false);
        auto [train_tp, train_ts] = metrics(train_s, train_o, true);
        auto [hold_ip, hold_is] = metrics(hold_s, hold_o, false);
        auto [hold_tp, hold_ts] = metrics(hold_s, hold_o, true);

        json params;
        params["a"] = outcome.params.a;
        params["b"] = outcome.params.b;
        params["c"] = outcome.params.c;
        params["iterations"] = opts.iterations;
        params["seed"] = opts.seed;
        params["objective"] = outcome.objective;
        params["identity_objective"] = outcome.identity_objective;
        {
            std::ofstream pf(opts.out_params);
            if (!pf) throw IoError("cannot open " + opts.out_params + " for writing");
            pf << params.dump(2) << "\n";
            if (!pf) throw IoError("write failed on " + opts.out_params);
        }

        if (opts.json) {
            json o;
            o["params_file"] = opts.out_params;
            o["n_train"] = n_train;
            o["n_holdout"] = n_hold;
            o["objective"] = outcome.objective;
            o["identity_objective"] = outcome.identity_objective;
            auto put = [](const std::optional<double>& v) {
                return v ? json(*v) : json(nullptr);
            };
            o["train"] = {{"pearson_identity", put(train_ip)},
                          {"spearman_identity", put(train_is)},
                          {"pearson_transformed", put(train_tp)},
                          {"spearman_transformed", put(train_ts)}};
            o["holdout"] = {{"pearson_identity", put(hold_ip)},
                            {"spearman_identity", put(hold_is)},
                            {"pearson_transformed", put(hold_tp)},
                            {"spearman_transformed", put(hold_ts)}};
            out << o.dump(2) << "\n";
        } else {
            auto cell = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string{}; };
            out << "split,n,pearson_identity,spearman_identity,pearson_transformed,"
                   "spearman_transformed\n";
            out << "train," << n_train << ',' << cell(train_ip) << ',' << cell(train_is) << ','
                << cell(train_tp) << ',' << cell(train_ts) << '\n';
            out << "holdout," << n_hold << ',' << cell(hold_ip) << ',' << cell(hold_is) << ','
                << cell(hold_tp) << ',' << cell(hold_ts) << '\n';
            out << "# params written to " << opts.out_params << "\n";
        }
    } catch (const std::exception& e) {
        err << "learn: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_ok;
}

}  // namespace vmiq::cli
