#include "rainrule/dl_reference.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rainrule/detail/levenberg_marquardt.hpp"
#include "rainrule/error.hpp"

namespace rainrule {

double DLCurve::operator()(double overs_remaining) const { return z0 * -std::expm1(-decay * overs_remaining); }

std::array<std::vector<DLObservation>, 10> dl_observations(std::span<const MatchRecord> corpus, MatchFormat format,
                                                           int min_support) {
    const int overs = scheduled_overs(format);
    // [w][u]
    std::vector<std::array<long long, 10>> sum(static_cast<std::size_t>(overs) + 1);
    std::vector<std::array<int, 10>> count(static_cast<std::size_t>(overs) + 1);
    for (auto& s : sum) s.fill(0);
    for (auto& c : count) c.fill(0);

    for (const auto& m : corpus) {
        if (m.format != format || m.shortened) continue;
        const InningsRecord* inn = m.find_innings(1);
        if (inn == nullptr || inn->deliveries.empty()) continue;
        const auto traj = trajectory(*inn, format);
        for (int done = 0; done < overs; ++done) {
            const int ball = done * 6;
            int runs = 0, wickets = 0;
            if (ball > 0) {
                // Innings over before this boundary: all out or chase ended.
                if (ball > static_cast<int>(traj.points.size())) break;
                const auto& p = traj.points[static_cast<std::size_t>(ball) - 1];
                runs = p.cumulative_runs;
                wickets = p.wickets_fallen;
            }
            if (wickets >= 10) break;
            const auto u = static_cast<std::size_t>(overs - done);
            sum[u][static_cast<std::size_t>(wickets)] += traj.total - runs;
            ++count[u][static_cast<std::size_t>(wickets)];
        }
    }

    std::array<std::vector<DLObservation>, 10> out;
    for (int w = 0; w < 10; ++w) {
        for (int u = 1; u <= overs; ++u) {
            const int n = count[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)];
            if (n < min_support) continue;
            out[static_cast<std::size_t>(w)].push_back(
                {u, static_cast<double>(sum[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)]) / n, n});
        }
    }
    return out;
}

DLCurve fit_dl_curve(int w, std::span<const DLObservation> observations) {
    if (observations.size() < 3)
        throw Error(Errc::insufficient_data,
                    fmt::format("w={}: exponential fit needs 3 observations, got {}", w, observations.size()));

    const auto n = static_cast<Eigen::Index>(observations.size());
    Eigen::VectorXd u(n), y(n), sw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& o = observations[static_cast<std::size_t>(i)];
        u(i) = o.overs_remaining;
        y(i) = o.mean_runs;
        sw(i) = std::sqrt(static_cast<double>(o.n_contributing));
    }

    // Start from the best decay on a log grid, with z0 solved in closed form.
    Eigen::Vector2d init(1.0, 0.05);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 120; ++k) {
        const double b = 1e-4 * std::pow(10.0, k / 30.0);
        double gy = 0.0, gg = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double g = -std::expm1(-b * u(i)) * sw(i);
            gy += g * y(i) * sw(i);
            gg += g * g;
        }
        const double z0 = gy / gg;
        if (!(z0 > 0.0)) continue;
        double rss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = (y(i) + z0 * std::expm1(-b * u(i))) * sw(i);
            rss += r * r;
        }
        if (rss < best) {
            best = rss;
            init = {z0, b};
        }
    }

    auto model = [&](const Eigen::Vector2d& p, Eigen::VectorXd& r, Eigen::Matrix<double, Eigen::Dynamic, 2>& J) {
        const double z0 = p(0), b = p(1);
        if (!(z0 > 0.0) || !(b > 0.0) || !std::isfinite(z0) || !std::isfinite(b)) return false;
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            const double e = std::exp(-b * u(i));
            r(i) = (y(i) + z0 * std::expm1(-b * u(i))) * sw(i);
            J(i, 0) = -std::expm1(-b * u(i)) * sw(i);
            J(i, 1) = z0 * u(i) * e * sw(i);
        }
        return true;
    };
    const auto res = detail::levenberg_marquardt<2>(model, init, n);
    const DLCurve curve{w, res.params(0), res.params(1), res.rss};
    if (!(curve.z0 > 0.0) || !(curve.decay > 0.0) || !std::isfinite(curve.z0))
        throw Error(Errc::degenerate_fit, fmt::format("w={}: exponential fit did not converge", w));
    return curve;
}

DLFamily fit_dl_family(std::span<const MatchRecord> corpus, MatchFormat format, int min_support) {
    if (corpus.empty()) throw Error(Errc::empty_selection, "empty corpus");
    DLFamily fam;
    fam.format = format;
    const auto obs = dl_observations(corpus, format, min_support);
    std::vector<double> support;
    for (int w = 0; w < 10; ++w) {
        const auto& o = obs[static_cast<std::size_t>(w)];
        try {
            fam.curves.push_back(fit_dl_curve(w, o));
            double s = 0.0;
            for (const auto& x : o) s += x.n_contributing;
            support.push_back(s);
        } catch (const Error& e) {
            fam.diagnostics.push_back(e.what());
        }
    }

    // Pool adjacent violators so that z0 is non-increasing in w.
    struct Block {
        double value, weight;
        std::size_t len;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < fam.curves.size(); ++i) {
        blocks.push_back({fam.curves[i].z0, support[i], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].value < blocks.back().value) {
            auto last = blocks.back();
            blocks.pop_back();
            auto& prev = blocks.back();
            prev.value = (prev.value * prev.weight + last.value * last.weight) / (prev.weight + last.weight);
            prev.weight += last.weight;
            prev.len += last.len;
        }
    }
    std::size_t i = 0;
    for (const auto& b : blocks) {
        for (std::size_t k = 0; k < b.len; ++k, ++i) {
            if (fam.curves[i].z0 != b.value) {
                fam.isotonic_adjusted = true;
                fam.curves[i].z0 = b.value;
            }
        }
    }
    if (fam.isotonic_adjusted) fam.diagnostics.push_back("z0 pooled across wickets to keep it non-increasing");
    return fam;
}

ResourceTable::ResourceTable(int max_overs) : max_overs_(max_overs) {
    if (max_overs < 1) throw std::invalid_argument("max_overs must be positive");
    rows_.resize(static_cast<std::size_t>(max_overs) + 1);
    for (auto& r : rows_) r.fill(0.0);
}

double ResourceTable::percentage(int overs_remaining, int wickets_lost) const {
    if (overs_remaining < 0 || overs_remaining > max_overs_ || wickets_lost < 0 || wickets_lost > 10)
        throw std::out_of_range(fmt::format("no resource cell ({}, {})", overs_remaining, wickets_lost));
    return rows_[static_cast<std::size_t>(overs_remaining)][static_cast<std::size_t>(wickets_lost)];
}

void ResourceTable::set(int overs_remaining, int wickets_lost, double pct) {
    if (overs_remaining < 0 || overs_remaining > max_overs_ || wickets_lost < 0 || wickets_lost > 10)
        throw std::out_of_range(fmt::format("no resource cell ({}, {})", overs_remaining, wickets_lost));
    rows_[static_cast<std::size_t>(overs_remaining)][static_cast<std::size_t>(wickets_lost)] = pct;
}

ResourceTable resource_table(std::span<const DLCurve> family, int max_overs) {
    std::array<const DLCurve*, 10> by_w{};
    for (const auto& c : family)
        if (c.w >= 0 && c.w < 10) by_w[static_cast<std::size_t>(c.w)] = &c;
    if (by_w[0] == nullptr) throw Error(Errc::incomplete_family, "resource table needs the w=0 curve");

    ResourceTable table(max_overs);
    const double full = (*by_w[0])(max_overs);
    for (int u = 0; u <= max_overs; ++u) {
        // A wicket state without its own curve inherits the state before it;
        // a running minimum keeps the row non-increasing when curves cross.
        double ceiling = std::numeric_limits<double>::infinity();
        for (int w = 0; w < 10; ++w) {
            const DLCurve* c = by_w[static_cast<std::size_t>(w)];
            double pct = ceiling;
            if (c != nullptr) {
                const double raw = u == 0 ? 0.0 : 100.0 * (*c)(u) / full;
                if (raw > ceiling) table.crossing_adjusted = true;
                pct = std::min(raw, ceiling);
            }
            table.set(u, w, pct);
            ceiling = pct;
        }
        table.set(u, 10, 0.0);
    }
    table.set(max_overs, 0, 100.0);
    return table;
}

std::string resource_table_csv(const ResourceTable& table) {
    std::string out = "overs_remaining";
    for (int w = 0; w <= 10; ++w) out += fmt::format(",w{}", w);
    out += '\n';
    for (int u = table.max_overs(); u >= 0; --u) {
        out += std::to_string(u);
        for (int w = 0; w <= 10; ++w) out += fmt::format(",{:.1f}", table.percentage(u, w));
        out += '\n';
    }
    return out;
}

ResourceTable parse_resource_table_csv(std::string_view text) {
    std::vector<std::vector<std::string_view>> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::size_t s = 0;
        for (;;) {
            auto c = line.find(',', s);
            f.push_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
            if (c == std::string_view::npos) break;
            s = c + 1;
        }
        rows.push_back(std::move(f));
    }
    if (rows.size() < 2 || rows[0].size() != 12 || rows[0][0] != "overs_remaining")
        throw ParseError("resource table: unexpected header", 1, 0);

    auto number = [](std::string_view s, std::size_t line) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw ParseError("resource table: bad number '" + std::string(s) + "'", line, 0);
        return v;
    };

    const int max_overs = static_cast<int>(rows.size()) - 2;
    ResourceTable table(max_overs);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 12) throw ParseError("resource table: expected 12 fields", r + 1, 0);
        const double u = number(rows[r][0], r + 1);
        if (u != static_cast<double>(max_overs - static_cast<int>(r - 1)))
            throw ParseError("resource table: rows must run from max overs down to 0", r + 1, 0);
        for (int w = 0; w <= 10; ++w)
            table.set(static_cast<int>(u), w, number(rows[r][static_cast<std::size_t>(w) + 1], r + 1));
    }
    return table;
}

std::string dl_family_json(const DLFamily& family) {
    nlohmann::ordered_json j;
    j["format"] = format_name(family.format);
    j["isotonic_adjusted"] = family.isotonic_adjusted;
    j["curves"] = nlohmann::ordered_json::array();
    for (const auto& c : family.curves)
        j["curves"].push_back({{"w", c.w}, {"z0", c.z0}, {"decay", c.decay}, {"rss", c.rss}});
    j["diagnostics"] = family.diagnostics;
    return j.dump(2) + "\n";
}

}  // namespace rainrule
