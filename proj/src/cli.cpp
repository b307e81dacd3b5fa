#include "rainrule/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rainrule/dl_reference.hpp"
#include "rainrule/run_curves.hpp"
#include "rainrule/score_stats.hpp"
#include "rainrule/target_engine.hpp"

#ifndef RAINRULE_FIXTURE_DIR
#define RAINRULE_FIXTURE_DIR "data/fixtures"
#endif

namespace rainrule {

namespace fs = std::filesystem;
using nlohmann::json;

ExitCode exit_code_for(Errc code) noexcept {
    switch (code) {
        case Errc::parse:
        case Errc::unsupported_format:
        case Errc::io:
        case Errc::empty_selection: return ExitCode::data;
        case Errc::invalid_scenario:
        case Errc::degenerate_curve: return ExitCode::scenario;
        case Errc::insufficient_data:
        case Errc::degenerate_fit:
        case Errc::empty_curve:
        case Errc::singular_fit:
        case Errc::incomplete_family: return ExitCode::fit;
    }
    return ExitCode::data;
}

fs::path fixture_dir() { return RAINRULE_FIXTURE_DIR; }

void RunConfig::validate() const {
    if (innings_index && *innings_index != 1 && *innings_index != 2)
        throw std::invalid_argument("--innings must be 1 or 2");
    if (bin_width && !(*bin_width > 0.0)) throw std::invalid_argument("--bin-width must be positive");
    if (min_support < 1) throw std::invalid_argument("--min-support must be positive");
    if (degree != 2 && degree != 3) throw std::invalid_argument("--degree must be 2 or 3");
}

namespace {

constexpr MatchFormat kAllFormats[] = {MatchFormat::odi, MatchFormat::t20i, MatchFormat::ipl};

std::string lower_name(MatchFormat f) {
    std::string s(format_name(f));
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

std::optional<std::chrono::year_month_day> parse_until(const std::string& s) {
    int y = 0;
    unsigned mo = 0, d = 0;
    char dash1 = 0, dash2 = 0;
    std::istringstream in(s);
    in >> y >> dash1 >> mo >> dash2 >> d;
    std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
    if (!in || dash1 != '-' || dash2 != '-' || !date.ok()) return std::nullopt;
    return date;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(Errc::io, "cannot write " + path.string());
    f << content;
    if (!f) throw Error(Errc::io, "write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return std::move(ss).str();
}

Corpus load(const RunConfig& cfg, std::ostream& err) {
    if (cfg.data_dir.empty()) throw Error(Errc::io, "no data directory: pass --data-dir or set RAINRULE_DATA_DIR");
    Corpus corpus = load_corpus(cfg.data_dir, cfg.format);
    if (cfg.until) {
        std::erase_if(corpus.matches, [&](const MatchRecord& m) { return !m.date.ok() || m.date > *cfg.until; });
    }
    for (const auto& d : corpus.diagnostics) err << "warning: " << d.path << ": " << d.message << '\n';
    if (corpus.matches.empty()) throw Error(Errc::empty_selection, "corpus is empty: " + cfg.data_dir.string());
    return corpus;
}

void ensure_output_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(Errc::io, "cannot create " + cfg.output_dir.string() + ": " + ec.message());
}

int cmd_ingest(const RunConfig& cfg, const std::string& export_csv, std::ostream& out, std::ostream& err) {
    const Corpus corpus = load(cfg, err);
    std::map<MatchFormat, int> counts;
    for (const auto& m : corpus.matches) ++counts[m.format];
    for (auto f : kAllFormats) out << fmt::format("{:<5} {}\n", format_name(f), counts[f]);
    out << fmt::format("matches {}\ndiagnostics {}\ndropped_innings {}\n", corpus.matches.size(),
                       corpus.diagnostics.size(), corpus.dropped_innings);
    if (!export_csv.empty()) write_file(export_csv, write_ball_log_csv(corpus.matches));
    return 0;
}

int cmd_stats(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Corpus corpus = load(cfg, err);
    ensure_output_dir(cfg);
    std::string summary = "format,innings,n_samples,xi,sigma,amplitude,rss\n";
    out << fmt::format("{:<6}{:>8}{:>8}{:>12}{:>12}{:>12}\n", "format", "innings", "n", "xi", "sigma", "A");
    bool any = false;
    for (auto f : kAllFormats) {
        if (cfg.format && *cfg.format != f) continue;
        for (int inn = 1; inn <= 2; ++inn) {
            if (cfg.innings_index && *cfg.innings_index != inn) continue;
            try {
                const auto values = totals(corpus.matches, f, inn);
                const auto hist = build_histogram(values, cfg.bin_width.value_or(default_bin_width(f)));
                const auto fit = fit_normal(hist);
                const std::string stem = fmt::format("{}_inn{}", lower_name(f), inn);
                write_file(cfg.output_dir / ("hist_" + stem + ".csv"), histogram_csv(hist, fit));
                write_file(cfg.output_dir / ("normal_" + stem + ".json"), normal_fit_json(fit, hist));
                summary += fmt::format("{},{},{},{},{},{},{}\n", format_name(f), inn, hist.n_samples, fit.xi, fit.sigma,
                                       fit.amplitude, fit.rss);
                out << fmt::format("{:<6}{:>8}{:>8}{:>12.3f}{:>12.4f}{:>12.3f}\n", format_name(f), inn, hist.n_samples,
                                   fit.xi, fit.sigma, fit.amplitude);
                any = true;
            } catch (const Error& e) {
                err << fmt::format("warning: {} innings {}: {}\n", format_name(f), inn, e.what());
            }
        }
    }
    write_file(cfg.output_dir / "normal_summary.csv", summary);
    return any ? 0 : static_cast<int>(ExitCode::fit);
}

int cmd_curves(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Corpus corpus = load(cfg, err);
    ensure_output_dir(cfg);
    const MatchFormat f = cfg.format.value_or(MatchFormat::odi);
    const int inn = cfg.innings_index.value_or(1);
    const std::string stem = fmt::format("{}_inn{}", lower_name(f), inn);

    json fits = json::array();
    for (int w = 0; w <= 9; ++w) {
        try {
            const auto curve = wicket_curve(corpus.matches, f, inn, w, cfg.min_support);
            const auto fit = fit_poly(curve, cfg.degree, cfg.weighted);
            const std::string fit_json = poly_fit_json(curve, fit);
            write_file(cfg.output_dir / fmt::format("curve_{}_w{}.csv", stem, w), curve_csv(curve, fit));
            write_file(cfg.output_dir / fmt::format("fit_{}_w{}.json", stem, w), fit_json);
            fits.push_back(json::parse(fit_json));
            out << fmt::format("w={} points={} a={} b={} c={} rss={}\n", w, curve.points.size(), fit.a, fit.b, fit.c,
                               fit.rss);
        } catch (const Error& e) {
            err << fmt::format("warning: w={}: {}\n", w, e.what());
        }
    }
    write_file(cfg.output_dir / fmt::format("fits_{}.json", stem), fits.dump(2) + "\n");

    // The exponential baseline is always fitted on first innings.
    try {
        const auto family = fit_dl_family(corpus.matches, f, cfg.min_support);
        for (const auto& d : family.diagnostics) err << "warning: dl: " << d << '\n';
        write_file(cfg.output_dir / fmt::format("dl_family_{}.json", lower_name(f)), dl_family_json(family));
        const auto table = resource_table(family.curves, scheduled_overs(f));
        write_file(cfg.output_dir / fmt::format("resource_table_{}.csv", lower_name(f)), resource_table_csv(table));
    } catch (const Error& e) {
        err << "warning: dl: " << e.what() << '\n';
    }
    return fits.empty() ? static_cast<int>(ExitCode::fit) : 0;
}

int field_int(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(Errc::invalid_scenario, fmt::format("{}: missing", key));
    if (!it->is_number_integer()) throw Error(Errc::invalid_scenario, fmt::format("{}: expected an integer", key));
    return it->get<int>();
}

struct ScenarioFile {
    InterruptionScenario scenario;
    std::optional<MatchFormat> format;
};

ScenarioFile read_scenario(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw Error(Errc::invalid_scenario, fmt::format("{}: {}", path.string(), e.what()));
    }
    if (!j.is_object()) throw Error(Errc::invalid_scenario, "scenario must be a JSON object");
    ScenarioFile sf;
    if (auto f = j.find("format"); f != j.end()) {
        if (!f->is_string() || !parse_format_name(f->get<std::string>()))
            throw Error(Errc::invalid_scenario, "format: expected ODI, T20I or IPL");
        sf.format = parse_format_name(f->get<std::string>());
    }
    if (j.contains("innings")) {
        const int inn = field_int(j, "innings");
        if (inn != 1 && inn != 2) throw Error(Errc::invalid_scenario, "innings: must be 1 or 2");
    }
    auto& s = sf.scenario;
    s.wickets_at_stoppage = field_int(j, "wickets");
    s.n = field_int(j, "n");
    s.m = field_int(j, "m");
    s.N = field_int(j, "N");
    s.target_score = field_int(j, "target_score");
    s.current_score = field_int(j, "current_score");
    if (auto it = j.find("interruptions"); it != j.end()) {
        if (!it->is_array()) throw Error(Errc::invalid_scenario, "interruptions: expected an array");
        for (const auto& iv : *it) {
            if (!iv.is_object()) throw Error(Errc::invalid_scenario, "interruptions: expected objects");
            s.later.push_back({field_int(iv, "stop"), field_int(iv, "restart")});
        }
    }
    s.validate();
    return sf;
}

PolyFit read_fit(const fs::path& path, const ScenarioFile& sf) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse, fmt::format("{}: {}", path.string(), e.what()));
    }
    if (j.is_object()) j = json::array({j});
    if (!j.is_array()) throw Error(Errc::parse, "fits file must hold an object or an array");
    for (const auto& f : j) {
        if (!f.is_object() || f.value("wickets", -1) != sf.scenario.wickets_at_stoppage) continue;
        if (sf.format && f.contains("format") && parse_format_name(f.value("format", "")) != sf.format) continue;
        PolyFit fit;
        try {
            fit.a = f.at("a").get<double>();
            fit.b = f.at("b").get<double>();
            fit.c = f.at("c").get<double>();
            fit.degree = f.value("degree", 3);
            fit.rss = f.value("rss", 0.0);
        } catch (const json::exception& e) {
            throw Error(Errc::parse, fmt::format("{}: {}", path.string(), e.what()));
        }
        return fit;
    }
    throw Error(Errc::incomplete_family,
                fmt::format("{} has no fit for {} wickets", path.string(), sf.scenario.wickets_at_stoppage));
}

json revised_json(const RevisedTarget& r) {
    return json::parse(revised_target_json(r));
}

int cmd_target(const fs::path& scenario_path, const fs::path& fits_path, const fs::path& out_file, std::ostream& out,
               std::ostream& err) {
    const auto sf = read_scenario(scenario_path);
    const auto fit = read_fit(fits_path, sf);
    const auto revised = revise_target(fit, sf.scenario);
    const std::string text = revised_target_json(revised);
    out << text;
    if (!out_file.empty()) write_file(out_file, text);
    if (!(revised.ratio > 0.0)) {
        err << "error: nothing to chase: no playable balls remain (degenerate scenario)\n";
        return static_cast<int>(ExitCode::scenario);
    }
    return 0;
}

int cmd_compare(const fs::path& scenario_path, const fs::path& fits_path, const fs::path& table_path,
                const fs::path& out_file, std::ostream& out, std::ostream& err) {
    const auto sf = read_scenario(scenario_path);
    const auto& s = sf.scenario;
    const auto fit = read_fit(fits_path, sf);
    const auto revised = revise_target(fit, s);

    nlohmann::ordered_json j;
    j["scenario"] = {{"n", s.n}, {"m", s.m}, {"N", s.N}, {"wickets", s.wickets_at_stoppage},
                     {"target_score", s.target_score}, {"current_score", s.current_score}};
    j["area_ratio"] = revised_json(revised);
    j["dl"] = nullptr;
    try {
        if (table_path.empty()) throw Error(Errc::io, "no resource table given");
        const auto table = parse_resource_table_csv(read_text(table_path));
        // Whole overs remaining, sub-over states rounded down.
        const int u_stop = std::min((s.N - s.n) / 6, table.max_overs());
        const int u_restart = std::min((s.N - s.m) / 6, table.max_overs());
        const int w = s.wickets_at_stoppage;
        const double at_stop = table.percentage(u_stop, w);
        const double at_restart = table.percentage(u_restart, w);
        nlohmann::ordered_json dl;
        dl["overs_remaining_at_stoppage"] = u_stop;
        dl["overs_remaining_at_restart"] = u_restart;
        dl["resource_at_stoppage_pct"] = at_stop;
        dl["resource_at_restart_pct"] = at_restart;
        dl["resource_lost_pct"] = at_stop - at_restart;
        dl["resource_available_pct"] = 100.0 - (at_stop - at_restart);
        j["dl"] = dl;
    } catch (const std::exception& e) {
        err << "warning: DL comparison unavailable: " << e.what() << '\n';
    }
    const std::string text = j.dump(2) + "\n";
    out << text;
    if (!out_file.empty()) write_file(out_file, text);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rain-rule target revision from ball-by-ball scoring curves", "rainrule"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("RAINRULE_DATA_DIR")) cfg.data_dir = env;
    std::string format_opt, until_opt, export_csv;
    bool fixture = false, unweighted = false;
    int innings = 0;
    double bin_width = 0.0;
    std::string scenario_path, fits_path, table_path, out_file;

    auto add_corpus_opts = [&](CLI::App* sub) {
        sub->add_option("--data-dir", cfg.data_dir, "Directory of match files (default $RAINRULE_DATA_DIR)");
        sub->add_option("--format", format_opt, "Match format")->check(CLI::IsMember({"odi", "t20i", "ipl"}));
        sub->add_option("--until", until_opt, "Keep matches dated on or before YYYY-MM-DD");
        sub->add_flag("--fixture", fixture, "Use the bundled synthetic fixture corpus");
    };

    auto* ingest = app.add_subcommand("ingest", "Parse a corpus and report match counts");
    add_corpus_opts(ingest);
    ingest->add_option("--export-csv", export_csv, "Write the normalized ball log here");

    auto* stats = app.add_subcommand("stats", "Innings-total histograms and normal fits");
    add_corpus_opts(stats);
    stats->add_option("--innings", innings, "Innings index")->check(CLI::IsMember({1, 2}));
    stats->add_option("--bin-width", bin_width, "Histogram bin width in runs")->check(CLI::PositiveNumber);
    stats->add_option("--out", cfg.output_dir, "Output directory");

    auto* curves = app.add_subcommand("curves", "Wicket-conditioned scoring curves and polynomial fits");
    add_corpus_opts(curves);
    curves->add_option("--innings", innings, "Innings index")->check(CLI::IsMember({1, 2}));
    curves->add_option("--min-support", cfg.min_support, "Minimum innings per ball")->check(CLI::PositiveNumber);
    curves->add_option("--degree", cfg.degree, "Polynomial degree")->check(CLI::IsMember({2, 3}));
    curves->add_flag("--unweighted", unweighted, "Give every ball equal weight");
    curves->add_option("--out", cfg.output_dir, "Output directory");

    auto* target = app.add_subcommand("target", "Revise a target for an interrupted chase");
    target->add_option("scenario", scenario_path, "Scenario JSON")->required();
    target->add_option("--fits", fits_path, "Fit JSON (object or array)")->required();
    target->add_option("--out", out_file, "Also write the result JSON here");

    auto* compare = app.add_subcommand("compare", "Area-ratio target next to DL-style resources");
    compare->add_option("scenario", scenario_path, "Scenario JSON")->required();
    compare->add_option("--fits", fits_path, "Fit JSON (object or array)")->required();
    compare->add_option("--dl-table", table_path, "Resource table CSV");
    compare->add_option("--out", out_file, "Also write the result JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
    }

    try {
        if (fixture) cfg.data_dir = fixture_dir();
        if (!format_opt.empty()) cfg.format = parse_format_name(format_opt);
        if (innings != 0) cfg.innings_index = innings;
        if (bin_width > 0.0) cfg.bin_width = bin_width;
        cfg.weighted = !unweighted;
        if (!until_opt.empty()) {
            cfg.until = parse_until(until_opt);
            if (!cfg.until) throw std::invalid_argument("--until expects YYYY-MM-DD");
        }
        cfg.validate();

        if (*ingest) return cmd_ingest(cfg, export_csv, out, err);
        if (*stats) return cmd_stats(cfg, out, err);
        if (*curves) return cmd_curves(cfg, out, err);
        if (*target) return cmd_target(scenario_path, fits_path, out_file, out, err);
        if (*compare) return cmd_compare(scenario_path, fits_path, table_path, out_file, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(exit_code_for(e.code()));
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    }
    return static_cast<int>(ExitCode::usage);
}

}  // namespace rainrule
