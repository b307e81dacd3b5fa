#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rainrule/ball_log.hpp"
#include "rainrule/error.hpp"

namespace rainrule {

// 0 success, 2 data errors, 3 scenario errors, 4 fit errors.
enum class ExitCode : int { ok = 0, usage = 1, data = 2, scenario = 3, fit = 4 };

ExitCode exit_code_for(Errc code) noexcept;

struct RunConfig {
    std::filesystem::path data_dir;
    std::optional<MatchFormat> format;  // unset means every format
    std::optional<int> innings_index;   // unset means the command's default
    std::optional<double> bin_width;    // unset means the per-format default
    int min_support = 10;
    int degree = 3;
    bool weighted = true;
    std::filesystem::path output_dir = "rainrule_out";
    std::optional<std::chrono::year_month_day> until;  // keep matches dated on or before

    void validate() const;
};

// Directory holding the bundled synthetic corpus used by `--fixture`.
std::filesystem::path fixture_dir();

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rainrule
