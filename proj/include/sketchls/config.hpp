#pragma once

#include "sketchls/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace sketchls {

// Flat "key = value" config files mirroring TrialConfig. '#' starts a comment.
//
//   kind          gaussian-incoherent | spiked-coherent | consistent | custom-file
//   rows, cols, rhs, noise, coherence, problem_seed, a_file, b_file
//   dist          leverage | uniform | blended:ALPHA
//   samples       auto | INT | xR:INT
//   epsilon, delta, trials, seed, threads, max_samples

/// Applies one setting; throws InvalidParameter for unknown keys or bad values.
void apply_setting(TrialConfig& cfg, std::string_view key, std::string_view value);

/// Parse errors are reported as ParseError with the 1-based line number.
TrialConfig parse_config(std::istream& in, TrialConfig base = {});
TrialConfig load_config(const std::filesystem::path& path, TrialConfig base = {});

} // namespace sketchls
