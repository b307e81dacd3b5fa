#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rainrule {

enum class MatchFormat { odi, t20i, ipl };

// 300 legal balls for ODI, 120 for T20I and IPL.
constexpr int scheduled_balls(MatchFormat format) noexcept {
    return format == MatchFormat::odi ? 300 : 120;
}

constexpr int scheduled_overs(MatchFormat format) noexcept { return scheduled_balls(format) / 6; }

// "ODI", "T20I", "IPL".
std::string_view format_name(MatchFormat format) noexcept;
// Accepts the canonical names and the lowercase CLI spellings ("odi", "t20i", "ipl").
std::optional<MatchFormat> parse_format_name(std::string_view name) noexcept;

enum class ExtrasKind { none, wide, no_ball, bye, leg_bye, penalty };

std::string_view extras_kind_name(ExtrasKind kind) noexcept;
std::optional<ExtrasKind> parse_extras_kind(std::string_view name) noexcept;

struct DeliveryEvent {
    int over = 0;
    int ball_in_over = 1;
    int batter_runs = 0;
    int extras_runs = 0;
    ExtrasKind extras_kind = ExtrasKind::none;
    bool wicket = false;
    bool legal = true;

    int total_runs() const noexcept { return batter_runs + extras_runs; }

    friend bool operator==(const DeliveryEvent&, const DeliveryEvent&) = default;
};

struct InningsRecord {
    int innings_index = 1;
    std::string batting_team;
    std::vector<DeliveryEvent> deliveries;

    friend bool operator==(const InningsRecord&, const InningsRecord&) = default;
};

struct MatchRecord {
    std::string match_id;
    MatchFormat format = MatchFormat::odi;
    std::chrono::year_month_day date{};
    std::pair<std::string, std::string> teams;
    std::string venue;
    std::vector<InningsRecord> innings;
    // Result decided by a rain rule, or overs reduced below the format's allotment.
    bool shortened = false;

    const InningsRecord* find_innings(int index) const noexcept;

    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

struct ParseDiagnostics {
    int dropped_innings = 0;  // super overs and anything past innings 2
};

struct ParsedMatch {
    MatchRecord match;
    ParseDiagnostics diagnostics;
};

// Reads one Cricsheet JSON match document. `match_id` is stored verbatim
// (Cricsheet carries the id in the file name, not the document).
ParsedMatch parse_match(std::string_view raw_bytes,
                        std::optional<MatchFormat> format_hint = std::nullopt,
                        std::string match_id = {});

// Canonical CSV ball log. One file may hold several matches; rows of one
// match must be contiguous.
inline constexpr std::string_view kBallLogHeader =
    "match_id,format,innings,over,ball_in_over,legal,batter_runs,extras_runs,extras_kind,wicket";

std::vector<MatchRecord> parse_ball_log_csv(std::string_view text,
                                            std::optional<MatchFormat> format_hint = std::nullopt);
std::string write_ball_log_csv(const std::vector<MatchRecord>& matches);

struct FileDiagnostic {
    std::string path;
    std::string message;
};

struct Corpus {
    std::vector<MatchRecord> matches;       // sorted by match_id
    std::vector<FileDiagnostic> diagnostics;  // per-file failures
    int dropped_innings = 0;
};

// Parses every *.json and *.csv file directly inside `directory`.
Corpus load_corpus(const std::filesystem::path& directory,
                   std::optional<MatchFormat> format_filter = std::nullopt);

struct TrajectoryPoint {
    int ball = 1;
    int cumulative_runs = 0;
    int wickets_fallen = 0;

    friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct InningsTrajectory {
    std::vector<TrajectoryPoint> points;
    int total = 0;
    int completed_balls = 0;
};

// Legal-ball indexed cumulative score. Runs and wickets on wides and
// no-balls are credited to the next legal ball, or to the last one when the
// innings ends on an illegal delivery. Legal balls past the format's
// allotment (miscounted overs) fold into the final scheduled ball.
InningsTrajectory trajectory(const InningsRecord& innings, MatchFormat format);

}  // namespace rainrule
