#include <charconv>
#include <string>
#include <vector>

#include "rainrule/ball_log.hpp"
#include "rainrule/error.hpp"

namespace rainrule {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

int to_int(std::string_view s, const char* field, std::size_t line, std::size_t byte) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v < 0)
        throw ParseError(std::string("ball log: bad ") + field + " '" + std::string(s) + "'", line, byte);
    return v;
}

bool to_flag(std::string_view s, const char* field, std::size_t line, std::size_t byte) {
    if (s == "1") return true;
    if (s == "0") return false;
    throw ParseError(std::string("ball log: ") + field + " must be 0 or 1", line, byte);
}

}  // namespace

std::vector<MatchRecord> parse_ball_log_csv(std::string_view text, std::optional<MatchFormat> format_hint) {
    std::vector<MatchRecord> matches;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (pos < text.size()) {
        const std::size_t line_start = pos;
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            throw ParseError("ball log: CRLF line endings are not accepted", line_no, line_start);
        if (line.empty()) continue;

        if (!header_seen) {
            if (line != kBallLogHeader) throw ParseError("ball log: unexpected header", line_no, line_start);
            header_seen = true;
            continue;
        }

        const auto f = split_fields(line);
        if (f.size() != 10)
            throw ParseError("ball log: expected 10 fields, got " + std::to_string(f.size()), line_no, line_start);

        auto format = parse_format_name(f[1]);
        if (!format) throw ParseError("ball log: unknown format '" + std::string(f[1]) + "'", line_no, line_start);
        if (format_hint) format = format_hint;

        const int innings_index = to_int(f[2], "innings", line_no, line_start);
        if (innings_index != 1 && innings_index != 2)
            throw ParseError("ball log: innings must be 1 or 2", line_no, line_start);

        DeliveryEvent ev;
        ev.over = to_int(f[3], "over", line_no, line_start);
        ev.ball_in_over = to_int(f[4], "ball_in_over", line_no, line_start);
        ev.legal = to_flag(f[5], "legal", line_no, line_start);
        ev.batter_runs = to_int(f[6], "batter_runs", line_no, line_start);
        ev.extras_runs = to_int(f[7], "extras_runs", line_no, line_start);
        auto kind = parse_extras_kind(f[8]);
        if (!kind) throw ParseError("ball log: unknown extras_kind '" + std::string(f[8]) + "'", line_no, line_start);
        ev.extras_kind = *kind;
        ev.wicket = to_flag(f[9], "wicket", line_no, line_start);

        const bool illegal_kind = ev.extras_kind == ExtrasKind::wide || ev.extras_kind == ExtrasKind::no_ball;
        if (ev.legal == illegal_kind)
            throw ParseError("ball log: legal flag disagrees with extras_kind", line_no, line_start);
        if (illegal_kind && ev.extras_runs < 1)
            throw ParseError("ball log: wide or no-ball with zero extras", line_no, line_start);
        if (ev.ball_in_over < 1) throw ParseError("ball log: ball_in_over starts at 1", line_no, line_start);

        if (matches.empty() || matches.back().match_id != f[0]) {
            for (const auto& m : matches)
                if (m.match_id == f[0])
                    throw ParseError("ball log: rows of match '" + std::string(f[0]) + "' are not contiguous",
                                     line_no, line_start);
            MatchRecord m;
            m.match_id = std::string(f[0]);
            m.format = *format;
            matches.push_back(std::move(m));
        }
        MatchRecord& m = matches.back();
        if (m.innings.empty() || m.innings.back().innings_index != innings_index) {
            if (m.find_innings(innings_index) != nullptr)
                throw ParseError("ball log: innings rows are not contiguous", line_no, line_start);
            m.innings.push_back({innings_index, {}, {}});
        }
        auto& dels = m.innings.back().deliveries;
        if (!dels.empty()) {
            const auto& prev = dels.back();
            if (ev.over < prev.over || (ev.over == prev.over && ev.ball_in_over <= prev.ball_in_over))
                throw ParseError("ball log: deliveries out of order", line_no, line_start);
        }
        int wickets = 0;
        if (ev.wicket)
            for (const auto& d : dels) wickets += d.wicket ? 1 : 0;
        if (wickets >= 10) throw ParseError("ball log: more than 10 wickets in an innings", line_no, line_start);
        dels.push_back(ev);
    }
    if (!header_seen) throw ParseError("ball log: missing header", 1, 0);
    return matches;
}

std::string write_ball_log_csv(const std::vector<MatchRecord>& matches) {
    std::string out(kBallLogHeader);
    out += '\n';
    for (const auto& m : matches) {
        if (m.match_id.find_first_of(",\n\r\"") != std::string::npos)
            throw Error(Errc::parse, "match id '" + m.match_id + "' cannot be written to a ball log");
        for (const auto& inn : m.innings) {
            for (const auto& d : inn.deliveries) {
                out += m.match_id;
                out += ',';
                out += format_name(m.format);
                out += ',' + std::to_string(inn.innings_index);
                out += ',' + std::to_string(d.over);
                out += ',' + std::to_string(d.ball_in_over);
                out += d.legal ? ",1" : ",0";
                out += ',' + std::to_string(d.batter_runs);
                out += ',' + std::to_string(d.extras_runs);
                out += ',';
                out += extras_kind_name(d.extras_kind);
                out += d.wicket ? ",1\n" : ",0\n";
            }
        }
    }
    return out;
}

}  // namespace rainrule
