#include "rainrule/ball_log.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rainrule/error.hpp"

namespace rainrule {

using nlohmann::json;

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::parse: return "parse error";
        case Errc::unsupported_format: return "unsupported format";
        case Errc::io: return "I/O error";
        case Errc::empty_selection: return "empty selection";
        case Errc::insufficient_data: return "insufficient data";
        case Errc::degenerate_fit: return "degenerate fit";
        case Errc::empty_curve: return "empty curve";
        case Errc::singular_fit: return "singular fit";
        case Errc::invalid_scenario: return "invalid scenario";
        case Errc::degenerate_curve: return "degenerate curve";
        case Errc::incomplete_family: return "incomplete family";
    }
    return "unknown error";
}

std::string_view format_name(MatchFormat format) noexcept {
    switch (format) {
        case MatchFormat::odi: return "ODI";
        case MatchFormat::t20i: return "T20I";
        case MatchFormat::ipl: return "IPL";
    }
    return "ODI";
}

std::optional<MatchFormat> parse_format_name(std::string_view name) noexcept {
    if (name == "ODI" || name == "odi") return MatchFormat::odi;
    if (name == "T20I" || name == "t20i") return MatchFormat::t20i;
    if (name == "IPL" || name == "ipl") return MatchFormat::ipl;
    return std::nullopt;
}

namespace {

constexpr std::array<std::string_view, 6> kExtrasNames = {"none",    "wide",    "no_ball",
                                                          "bye",     "leg_bye", "penalty"};

}  // namespace

std::string_view extras_kind_name(ExtrasKind kind) noexcept {
    return kExtrasNames[static_cast<std::size_t>(kind)];
}

std::optional<ExtrasKind> parse_extras_kind(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kExtrasNames.size(); ++i)
        if (kExtrasNames[i] == name) return static_cast<ExtrasKind>(i);
    return std::nullopt;
}

const InningsRecord* MatchRecord::find_innings(int index) const noexcept {
    for (const auto& inn : innings)
        if (inn.innings_index == index) return &inn;
    return nullptr;
}

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw ParseError("invalid match document at " + where + ": " + what, 0, 0);
}

int non_negative_int(const json& node, const char* key, const std::string& where) {
    auto it = node.find(key);
    if (it == node.end()) return 0;
    if (!it->is_number_integer() || it->get<long long>() < 0)
        schema_error(where + "." + key, "expected a non-negative integer");
    return it->get<int>();
}

std::chrono::year_month_day parse_date(std::string_view s) {
    int y = 0;
    unsigned mo = 0, d = 0;
    auto fail = [&] { schema_error("info.dates[0]", "expected YYYY-MM-DD, got '" + std::string(s) + "'"); };
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') fail();
    if (std::from_chars(s.data(), s.data() + 4, y).ec != std::errc{}) fail();
    if (std::from_chars(s.data() + 5, s.data() + 7, mo).ec != std::errc{}) fail();
    if (std::from_chars(s.data() + 8, s.data() + 10, d).ec != std::errc{}) fail();
    std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
    if (!date.ok()) fail();
    return date;
}

MatchFormat detect_format(const json& info) {
    const std::string type = info.value("match_type", std::string{});
    if (type == "ODI") return MatchFormat::odi;
    if (type == "T20" || type == "IT20") {
        if (auto ev = info.find("event"); ev != info.end() && ev->is_object()) {
            if (ev->value("name", std::string{}).find("Indian Premier League") != std::string::npos)
                return MatchFormat::ipl;
        }
        // Domestic T20 leagues other than the IPL share match_type "T20".
        if (info.value("team_type", std::string{}) == "club")
            throw Error(Errc::unsupported_format, "club T20 match outside the Indian Premier League");
        return MatchFormat::t20i;
    }
    throw Error(Errc::unsupported_format,
                "unsupported match_type '" + type + "' (expected ODI, T20 or IT20)");
}

bool counts_as_wicket(const json& wickets) {
    if (!wickets.is_array()) return false;
    for (const auto& w : wickets) {
        const std::string kind = w.is_object() ? w.value("kind", std::string{}) : std::string{};
        if (kind != "retired hurt" && kind != "retired not out") return true;
    }
    return false;
}

DeliveryEvent parse_delivery(const json& d, int over, int ball_in_over, const std::string& where) {
    if (!d.is_object()) schema_error(where, "delivery is not an object");
    auto runs = d.find("runs");
    if (runs == d.end() || !runs->is_object()) schema_error(where, "missing runs object");

    DeliveryEvent ev;
    ev.over = over;
    ev.ball_in_over = ball_in_over;
    ev.batter_runs = non_negative_int(*runs, "batter", where + ".runs");
    ev.extras_runs = non_negative_int(*runs, "extras", where + ".runs");

    if (auto ex = d.find("extras"); ex != d.end()) {
        if (!ex->is_object()) schema_error(where + ".extras", "expected an object");
        // Wides and no-balls decide legality, so they take precedence when a
        // delivery carries several extras kinds (e.g. no-ball plus byes).
        if (ex->contains("wides")) ev.extras_kind = ExtrasKind::wide;
        else if (ex->contains("noballs")) ev.extras_kind = ExtrasKind::no_ball;
        else if (ex->contains("byes")) ev.extras_kind = ExtrasKind::bye;
        else if (ex->contains("legbyes")) ev.extras_kind = ExtrasKind::leg_bye;
        else if (ex->contains("penalty")) ev.extras_kind = ExtrasKind::penalty;
    }
    ev.legal = ev.extras_kind != ExtrasKind::wide && ev.extras_kind != ExtrasKind::no_ball;
    if (!ev.legal && ev.extras_runs < 1) schema_error(where, "wide or no-ball with zero extras");
    if (auto w = d.find("wickets"); w != d.end()) ev.wicket = counts_as_wicket(*w);
    return ev;
}

InningsRecord parse_innings(const json& inn, int index, const std::string& where) {
    InningsRecord rec;
    rec.innings_index = index;
    rec.batting_team = inn.value("team", std::string{});
    auto overs = inn.find("overs");
    if (overs == inn.end()) return rec;
    if (!overs->is_array()) schema_error(where + ".overs", "expected an array");

    int wickets = 0;
    for (std::size_t oi = 0; oi < overs->size(); ++oi) {
        const json& ov = (*overs)[oi];
        const std::string ow = where + ".overs[" + std::to_string(oi) + "]";
        if (!ov.is_object()) schema_error(ow, "over is not an object");
        const int over_no = ov.contains("over") ? non_negative_int(ov, "over", ow) : static_cast<int>(oi);
        if (!rec.deliveries.empty() && over_no < rec.deliveries.back().over)
            schema_error(ow, "overs out of order");
        auto dels = ov.find("deliveries");
        if (dels == ov.end() || !dels->is_array()) schema_error(ow, "missing deliveries array");
        for (std::size_t di = 0; di < dels->size(); ++di) {
            auto ev = parse_delivery((*dels)[di], over_no, static_cast<int>(di) + 1,
                                     ow + ".deliveries[" + std::to_string(di) + "]");
            if (ev.wicket && ++wickets > 10) schema_error(where, "more than 10 wickets");
            rec.deliveries.push_back(ev);
        }
    }
    return rec;
}

bool is_shortened(const json& doc, MatchFormat format) {
    const json& info = doc["info"];
    const int allotted = scheduled_overs(format);
    if (auto outcome = info.find("outcome"); outcome != info.end() && outcome->is_object())
        if (outcome->contains("method")) return true;
    if (auto ov = info.find("overs"); ov != info.end() && ov->is_number() && ov->get<double>() < allotted)
        return true;
    if (auto inns = doc.find("innings"); inns != doc.end() && inns->is_array()) {
        for (const auto& inn : *inns) {
            if (!inn.is_object()) continue;
            auto target = inn.find("target");
            if (target == inn.end() || !target->is_object()) continue;
            auto ov = target->find("overs");
            if (ov != target->end() && ov->is_number() && ov->get<double>() < allotted) return true;
        }
    }
    return false;
}

}  // namespace

ParsedMatch parse_match(std::string_view raw_bytes, std::optional<MatchFormat> format_hint,
                        std::string match_id) {
    json doc;
    try {
        doc = json::parse(raw_bytes.begin(), raw_bytes.end());
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        throw ParseError(e.what(), line_of(raw_bytes, byte), byte);
    }
    if (!doc.is_object()) schema_error("<root>", "expected an object");
    auto info_it = doc.find("info");
    if (info_it == doc.end() || !info_it->is_object()) schema_error("info", "missing info object");
    const json& info = *info_it;

    ParsedMatch out;
    MatchRecord& m = out.match;
    m.match_id = std::move(match_id);
    m.format = format_hint ? *format_hint : detect_format(info);

    if (auto dates = info.find("dates"); dates != info.end() && dates->is_array() && !dates->empty()) {
        if (!(*dates)[0].is_string()) schema_error("info.dates[0]", "expected a string");
        m.date = parse_date((*dates)[0].get<std::string>());
    }
    if (auto teams = info.find("teams"); teams != info.end() && teams->is_array() && teams->size() == 2 &&
                                          (*teams)[0].is_string() && (*teams)[1].is_string()) {
        m.teams = {(*teams)[0].get<std::string>(), (*teams)[1].get<std::string>()};
    }
    m.venue = info.value("venue", std::string{});
    m.shortened = is_shortened(doc, m.format);

    auto inns = doc.find("innings");
    if (inns != doc.end()) {
        if (!inns->is_array()) schema_error("innings", "expected an array");
        for (std::size_t i = 0; i < inns->size(); ++i) {
            const json& inn = (*inns)[i];
            if (!inn.is_object()) schema_error("innings[" + std::to_string(i) + "]", "expected an object");
            if (inn.value("super_over", false) || m.innings.size() == 2) {
                ++out.diagnostics.dropped_innings;
                continue;
            }
            m.innings.push_back(parse_innings(inn, static_cast<int>(m.innings.size()) + 1,
                                              "innings[" + std::to_string(i) + "]"));
        }
    }
    if (m.teams.first.empty() && !m.innings.empty()) {
        m.teams.first = m.innings[0].batting_team;
        if (m.innings.size() > 1) m.teams.second = m.innings[1].batting_team;
    }
    return out;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(Errc::io, "read failed for " + path.string());
    return std::move(ss).str();
}

struct FileResult {
    std::vector<MatchRecord> matches;
    int dropped_innings = 0;
    std::optional<std::string> error;
};

FileResult parse_file(const std::filesystem::path& path) {
    FileResult r;
    try {
        const std::string bytes = read_file(path);
        if (path.extension() == ".csv") {
            r.matches = parse_ball_log_csv(bytes);
        } else {
            auto parsed = parse_match(bytes, std::nullopt, path.stem().string());
            r.dropped_innings = parsed.diagnostics.dropped_innings;
            r.matches.push_back(std::move(parsed.match));
        }
    } catch (const ParseError& e) {
        r.error = e.line() > 0 ? "line " + std::to_string(e.line()) + ": " + e.what() : e.what();
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& directory, std::optional<MatchFormat> format_filter) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    std::error_code ec;
    fs::directory_iterator it(directory, ec);
    if (ec) throw Error(Errc::io, "cannot read directory " + directory.string() + ": " + ec.message());
    for (const auto& entry : it) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension();
        if (ext == ".json" || ext == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<FileResult> results(files.size());
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(files.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < files.size(); i += workers) results[i] = parse_file(files[i]);
            });
        }
    }

    Corpus corpus;
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto& r = results[i];
        if (r.error) {
            corpus.diagnostics.push_back({files[i].string(), *r.error});
            continue;
        }
        corpus.dropped_innings += r.dropped_innings;
        for (auto& m : r.matches)
            if (!format_filter || m.format == *format_filter) corpus.matches.push_back(std::move(m));
    }
    std::stable_sort(corpus.matches.begin(), corpus.matches.end(),
                     [](const MatchRecord& a, const MatchRecord& b) { return a.match_id < b.match_id; });
    return corpus;
}

InningsTrajectory trajectory(const InningsRecord& innings, MatchFormat format) {
    const int limit = scheduled_balls(format);
    InningsTrajectory t;
    int runs = 0;
    int wickets = 0;
    int pending_runs = 0;
    int pending_wickets = 0;
    for (const auto& d : innings.deliveries) {
        t.total += d.total_runs();
        pending_runs += d.total_runs();
        pending_wickets += d.wicket ? 1 : 0;
        if (!d.legal) continue;
        runs += pending_runs;
        wickets = std::min(10, wickets + pending_wickets);
        pending_runs = pending_wickets = 0;
        if (static_cast<int>(t.points.size()) < limit) {
            t.points.push_back({static_cast<int>(t.points.size()) + 1, runs, wickets});
        } else {
            t.points.back().cumulative_runs = runs;
            t.points.back().wickets_fallen = wickets;
        }
    }
    t.completed_balls = static_cast<int>(t.points.size());
    if (pending_runs > 0 || pending_wickets > 0 || t.points.empty()) {
        runs += pending_runs;
        wickets = std::min(10, wickets + pending_wickets);
        if (t.points.empty()) {
            t.points.push_back({1, runs, wickets});
        } else {
            t.points.back().cumulative_runs = runs;
            t.points.back().wickets_fallen = wickets;
        }
    }
    return t;
}

}  // namespace rainrule
