#pragma once

#include "sketchls/problem.hpp"
#include "sketchls/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sketchls {

struct DistributionChoice {
	enum class Kind { Leverage, Uniform, Blended };
	Kind kind = Kind::Leverage;
	double alpha = 0.0;  // blended only

	/// "leverage", "uniform" or "blended:ALPHA".
	static DistributionChoice parse(std::string_view text);
	std::string label() const;
};

struct SampleRule {
	enum class Kind { TheoremFormula, Explicit, MultipleOfRank };
	Kind kind = Kind::TheoremFormula;
	std::uint64_t value = 0;  // s for Explicit, c for MultipleOfRank

	/// "auto", "INT" or "xR:INT".
	static SampleRule parse(std::string_view text);
	std::string label() const;
};

struct TrialConfig {
	ProblemSpec problem;
	DistributionChoice distribution;
	SampleRule samples;
	AccuracyTarget target{0.1, 0.2};
	std::size_t n_trials = 100;
	std::uint64_t master_seed = 1;
	std::size_t threads = 1;
	std::optional<std::uint64_t> max_samples;  // caps theorem-formula counts

	void validate() const;
};

enum class TrialStatus { Ok, SketchRankDeficient, Failed };
std::string_view to_string(TrialStatus status) noexcept;

struct TrialRecord {
	std::size_t trial_id = 0;
	TrialStatus status = TrialStatus::Ok;
	std::string error;
	std::uint64_t s = 0;
	double beta = 0.0;
	double sc1_value = 0.0;
	bool sc1_holds = false;
	double sc2_value = 0.0;
	bool sc2_holds = false;
	double accuracy_ratio = 0.0;
	bool eps_accurate = false;
	bool residual_bound_holds = false;
	double solution_err_sq = 0.0;
	double solution_bound_limit = 0.0;
	bool solution_bound_holds = false;
	double gamma_bound_limit = 0.0;
	bool gamma_bound_holds = false;
	std::uint64_t rng_seed = 0;
	std::uint64_t rng_stream = 0;
	bool implication_violated = false;
};

struct ExperimentSummary {
	std::size_t n_trials = 0;
	std::size_t eps_accurate = 0;
	std::size_t sc1_holds = 0;
	std::size_t sc2_holds = 0;
	std::size_t both_hold = 0;
	std::size_t implication_violations = 0;
	std::size_t failed_trials = 0;

	double rate(std::size_t count) const noexcept {
		return n_trials ? static_cast<double>(count) / static_cast<double>(n_trials) : 0.0;
	}
	double success_rate() const noexcept { return rate(eps_accurate); }
	double sc1_rate() const noexcept { return rate(sc1_holds); }
	double sc2_rate() const noexcept { return rate(sc2_holds); }
};

struct ExperimentReport {
	ProblemSpec problem;
	std::size_t n_rows = 0;
	std::size_t n_cols = 0;
	std::size_t rhs_cols = 0;
	std::string distribution;
	std::string sample_rule;
	std::uint64_t s = 0;
	double beta = 0.0;
	double coherence = 0.0;
	double residual_sq = 0.0;
	double epsilon = 0.0;
	double delta = 0.0;
	std::uint64_t master_seed = 0;
	std::vector<TrialRecord> trials;  // sorted by trial_id
	ExperimentSummary summary;
	double wall_time_s = 0.0;
};

/// Per-trial RNG stream; the problem generator uses kProblemStreamBase and above.
RngStream trial_stream(std::uint64_t master_seed, std::size_t trial_id) noexcept;

ExperimentReport run_experiment(const TrialConfig& cfg);

/// Column order of the per-trial CSV rows.
inline constexpr std::string_view kReportHeader =
    "trial_id,status,s,beta,sc1_value,sc1_holds,sc2_value,sc2_holds,accuracy_ratio,eps_accurate,"
    "residual_bound_holds,solution_err_sq,solution_bound_limit,solution_bound_holds,gamma_bound_limit,"
    "gamma_bound_holds,rng_algorithm,rng_seed,rng_stream";

/// CSV body plus '#'-prefixed trailer; wall_time_s is always the last line.
void write_report(std::ostream& out, const ExperimentReport& report);
void write_report(const std::filesystem::path& path, const ExperimentReport& report);
std::string format_report(const ExperimentReport& report);

} // namespace sketchls
