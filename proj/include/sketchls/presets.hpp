#pragma once

#include "sketchls/experiment.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace sketchls {

/// Outcome of one built-in experiment preset.
struct PresetResult {
	std::string name;
	bool passed = false;
	std::string detail;  // observed values against thresholds, human readable
	double seconds = 0.0;
	std::vector<ExperimentSummary> runs;
};

/// Lower acceptance bound on an empirical rate with nominal value `rate`:
/// rate - 3 sqrt(rate (1 - rate) / n).
double rate_threshold(double rate, std::size_t n_trials) noexcept;

const std::vector<std::string>& preset_names();

/// Presets:
///   consistent-zero-residual  B in col(A), s = 10 N: every trial has ratio 1.
///   implication-sweep         3 problem kinds x 3 distributions, 1008 trials: SC1 and SC2 always imply both bounds.
///   sc1-concentration-rate    s = C r ln(2r/delta) / beta: SC1 holds at rate >= 1 - delta (3-SE allowance).
///   sc2-markov-rate           s = 2 r / (beta delta eps), N = 20000, r = 8: SC2 rate >= 1 - delta (3-SE allowance).
///   main-theorem-desk         N = 50000, r = 5, delta = 0.2, eps = 0.1, theorem s: success rate >= 0.8.
///   leverage-beats-uniform    spiked coherence 0.99, same s: leverage success >= uniform success.
PresetResult run_preset(std::string_view name, std::size_t threads = 1);

} // namespace sketchls
