#include "sketchls/presets.hpp"

#include "sketchls/matrix_io.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace sketchls {

double rate_threshold(double rate, std::size_t n_trials) noexcept {
	return rate - 3.0 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(n_trials));
}

const std::vector<std::string>& preset_names() {
	static const std::vector<std::string> names = {
	    "consistent-zero-residual", "implication-sweep", "sc1-concentration-rate",
	    "sc2-markov-rate",          "main-theorem-desk", "leverage-beats-uniform",
	};
	return names;
}

namespace {

TrialConfig base_config(ProblemKind kind, std::size_t n, std::size_t r, std::size_t rhs, std::uint64_t seed,
                        std::size_t threads) {
	TrialConfig cfg;
	cfg.problem.kind = kind;
	cfg.problem.n_rows = n;
	cfg.problem.n_cols = r;
	cfg.problem.rhs_cols = rhs;
	cfg.problem.noise_scale = 1.0;
	cfg.problem.seed = seed;
	cfg.master_seed = seed * 7919 + 17;
	cfg.threads = threads;
	return cfg;
}

std::string fmt(double v) { return format_double(v); }

PresetResult consistent_zero_residual(std::size_t threads) {
	PresetResult res;
	TrialConfig cfg = base_config(ProblemKind::Consistent, 200, 4, 2, 11, threads);
	cfg.samples = {SampleRule::Kind::Explicit, 2000};
	cfg.n_trials = 20;
	const ExperimentReport rep = run_experiment(cfg);
	bool all_one = true;
	for (const auto& t : rep.trials) all_one = all_one && t.accuracy_ratio == 1.0;
	res.passed = all_one && rep.summary.success_rate() == 1.0 && rep.summary.implication_violations == 0;
	res.detail = "success_rate=" + fmt(rep.summary.success_rate()) + " all_ratios_one=" + (all_one ? "1" : "0") +
	             " residual_sq=" + fmt(rep.residual_sq);
	res.runs.push_back(rep.summary);
	return res;
}

PresetResult implication_sweep(std::size_t threads) {
	PresetResult res;
	const ProblemKind kinds[] = {ProblemKind::GaussianIncoherent, ProblemKind::SpikedCoherent,
	                             ProblemKind::Consistent};
	const char* dists[] = {"leverage", "uniform", "blended:0.5"};
	std::size_t trials = 0, both = 0, violations = 0;
	std::uint64_t seed = 100;
	for (ProblemKind kind : kinds) {
		for (const char* dist : dists) {
			TrialConfig cfg = base_config(kind, 1000, 4, 2, ++seed, threads);
			cfg.problem.coherence_target = 0.9;
			cfg.distribution = DistributionChoice::parse(dist);
			cfg.samples = {SampleRule::Kind::MultipleOfRank, 40};
			cfg.target = AccuracyTarget(0.5, 0.25);
			cfg.n_trials = 112;
			const ExperimentReport rep = run_experiment(cfg);
			trials += rep.summary.n_trials;
			both += rep.summary.both_hold;
			violations += rep.summary.implication_violations;
			res.runs.push_back(rep.summary);
		}
	}
	res.passed = violations == 0 && both > 0 && trials >= 1000;
	res.detail = "trials=" + std::to_string(trials) + " sc1_and_sc2=" + std::to_string(both) +
	             " implication_violations=" + std::to_string(violations);
	return res;
}

PresetResult sc1_concentration_rate(std::size_t threads) {
	PresetResult res;
	TrialConfig cfg = base_config(ProblemKind::GaussianIncoherent, 5000, 3, 2, 21, threads);
	const double delta = 0.2;
	const double r = 3.0;
	const auto s = static_cast<std::uint64_t>(std::ceil(sample_size_constant() * r * std::log(2.0 * r / delta)));
	cfg.samples = {SampleRule::Kind::Explicit, s};
	cfg.target = AccuracyTarget(0.1, delta);
	cfg.n_trials = 200;
	const ExperimentReport rep = run_experiment(cfg);
	const double threshold = rate_threshold(1.0 - delta, cfg.n_trials);
	res.passed = rep.summary.sc1_rate() >= threshold && rep.summary.implication_violations == 0;
	res.detail = "s=" + std::to_string(s) + " sc1_rate=" + fmt(rep.summary.sc1_rate()) + " threshold=" + fmt(threshold);
	res.runs.push_back(rep.summary);
	return res;
}

PresetResult sc2_markov_rate(std::size_t threads) {
	PresetResult res;
	TrialConfig cfg = base_config(ProblemKind::GaussianIncoherent, 20000, 8, 2, 31, threads);
	const double delta = 0.25, eps = 0.5, beta = 1.0;
	const auto s = static_cast<std::uint64_t>(std::ceil(2.0 * 8.0 / (beta * delta * eps)));
	cfg.samples = {SampleRule::Kind::Explicit, s};
	cfg.target = AccuracyTarget(eps, delta);
	cfg.n_trials = 400;
	const ExperimentReport rep = run_experiment(cfg);
	const double threshold = rate_threshold(1.0 - delta, cfg.n_trials);
	res.passed = s == 128 && rep.summary.sc2_rate() >= threshold && rep.summary.implication_violations == 0;
	res.detail = "s=" + std::to_string(s) + " sc2_rate=" + fmt(rep.summary.sc2_rate()) + " threshold=" + fmt(threshold);
	res.runs.push_back(rep.summary);
	return res;
}

PresetResult main_theorem_desk(std::size_t threads) {
	PresetResult res;
	TrialConfig cfg = base_config(ProblemKind::GaussianIncoherent, 50000, 5, 2, 41, threads);
	cfg.samples = {SampleRule::Kind::TheoremFormula, 0};
	cfg.target = AccuracyTarget(0.1, 0.2);
	cfg.n_trials = 200;
	const ExperimentReport rep = run_experiment(cfg);
	constexpr double threshold = 0.8;
	res.passed = rep.s == 27016 && rep.s <= rep.n_rows && rep.summary.success_rate() >= threshold &&
	             rep.summary.implication_violations == 0;
	res.detail = "s=" + std::to_string(rep.s) + " success_rate=" + fmt(rep.summary.success_rate()) +
	             " threshold=" + fmt(threshold) + " sc1_rate=" + fmt(rep.summary.sc1_rate()) +
	             " sc2_rate=" + fmt(rep.summary.sc2_rate());
	res.runs.push_back(rep.summary);
	return res;
}

PresetResult leverage_beats_uniform(std::size_t threads) {
	PresetResult res;
	TrialConfig cfg = base_config(ProblemKind::SpikedCoherent, 2000, 5, 2, 51, threads);
	cfg.problem.coherence_target = 0.99;
	cfg.samples = {SampleRule::Kind::Explicit, 200};
	cfg.target = AccuracyTarget(0.1, 0.2);
	cfg.n_trials = 200;
	cfg.distribution = DistributionChoice::parse("leverage");
	const ExperimentReport lev = run_experiment(cfg);
	cfg.distribution = DistributionChoice::parse("uniform");
	const ExperimentReport uni = run_experiment(cfg);
	res.passed = lev.summary.success_rate() >= uni.summary.success_rate() &&
	             lev.summary.implication_violations == 0 && uni.summary.implication_violations == 0;
	res.detail = "leverage_success=" + fmt(lev.summary.success_rate()) +
	             " uniform_success=" + fmt(uni.summary.success_rate()) + " uniform_beta=" + fmt(uni.beta);
	res.runs.push_back(lev.summary);
	res.runs.push_back(uni.summary);
	return res;
}

} // namespace

PresetResult run_preset(std::string_view name, std::size_t threads) {
	const auto start = std::chrono::steady_clock::now();
	PresetResult res;
	if (name == "consistent-zero-residual") res = consistent_zero_residual(threads);
	else if (name == "implication-sweep") res = implication_sweep(threads);
	else if (name == "sc1-concentration-rate") res = sc1_concentration_rate(threads);
	else if (name == "sc2-markov-rate") res = sc2_markov_rate(threads);
	else if (name == "main-theorem-desk") res = main_theorem_desk(threads);
	else if (name == "leverage-beats-uniform") res = leverage_beats_uniform(threads);
	else throw Error(ErrorCode::InvalidParameter, "unknown preset '" + std::string(name) + "'");
	res.name = std::string(name);
	res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return res;
}

} // namespace sketchls
