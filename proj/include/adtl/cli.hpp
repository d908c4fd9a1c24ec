#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "adtl/types.hpp"

namespace adtl::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kDataError = 2 };

// Applies a config file on top of `base`. The text is either a JSON object
// or `key = value` lines ('#' starts a comment). Keys match the Config
// field names; size cutoffs are `small_max_frac` / `medium_max_frac` and
// `iou_thresholds` takes a comma-separated list in key=value form.
// Throws Error(InvalidArgument) on unknown keys or bad values.
Config parse_config_text(std::string_view text, Config base = {});

// Runs one subcommand. `args` excludes the program name. Output is written
// to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace adtl::cli
