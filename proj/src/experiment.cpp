#include "sketchls/experiment.hpp"

#include "sketchls/diagnostics.hpp"
#include "sketchls/leverage.hpp"
#include "sketchls/matrix_io.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace sketchls {

namespace {

template <class T>
bool parse_whole(std::string_view tok, T& out) {
	auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
	return ec == std::errc() && ptr == tok.data() + tok.size() && !tok.empty();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

DistributionChoice DistributionChoice::parse(std::string_view text) {
	if (text == "leverage") return {Kind::Leverage, 0.0};
	if (text == "uniform") return {Kind::Uniform, 0.0};
	constexpr std::string_view prefix = "blended:";
	if (text.substr(0, prefix.size()) == prefix) {
		double alpha = 0.0;
		if (parse_whole(text.substr(prefix.size()), alpha) && alpha >= 0.0 && alpha <= 1.0)
			return {Kind::Blended, alpha};
	}
	throw Error(ErrorCode::InvalidParameter,
	            "distribution must be leverage, uniform or blended:ALPHA with ALPHA in [0,1], got '" +
	                std::string(text) + "'");
}

std::string DistributionChoice::label() const {
	switch (kind) {
	case Kind::Leverage: return "leverage";
	case Kind::Uniform: return "uniform";
	case Kind::Blended: return "blended:" + format_double(alpha);
	}
	return "unknown";
}

SampleRule SampleRule::parse(std::string_view text) {
	if (text == "auto") return {Kind::TheoremFormula, 0};
	std::uint64_t v = 0;
	constexpr std::string_view prefix = "xR:";
	if (text.substr(0, prefix.size()) == prefix) {
		if (parse_whole(text.substr(prefix.size()), v) && v > 0) return {Kind::MultipleOfRank, v};
	} else if (parse_whole(text, v) && v > 0) {
		return {Kind::Explicit, v};
	}
	throw Error(ErrorCode::InvalidParameter,
	            "samples must be auto, a positive integer or xR:INT, got '" + std::string(text) + "'");
}

std::string SampleRule::label() const {
	switch (kind) {
	case Kind::TheoremFormula: return "auto";
	case Kind::Explicit: return std::to_string(value);
	case Kind::MultipleOfRank: return "xR:" + std::to_string(value);
	}
	return "unknown";
}

void TrialConfig::validate() const {
	problem.validate();
	if (n_trials < 1) throw Error(ErrorCode::InvalidParameter, "need at least one trial");
	if (threads < 1) throw Error(ErrorCode::InvalidParameter, "need at least one thread");
	if (max_samples && *max_samples == 0) throw Error(ErrorCode::InvalidParameter, "max_samples must be positive");
}

std::string_view to_string(TrialStatus status) noexcept {
	switch (status) {
	case TrialStatus::Ok: return "ok";
	case TrialStatus::SketchRankDeficient: return "sketch-rank-deficient";
	case TrialStatus::Failed: return "failed";
	}
	return "unknown";
}

RngStream trial_stream(std::uint64_t master_seed, std::size_t trial_id) noexcept {
	return RngStream(master_seed, static_cast<std::uint64_t>(trial_id));
}

namespace {

SamplingDistribution make_distribution(const DistributionChoice& choice, const LeverageProfile& profile) {
	switch (choice.kind) {
	case DistributionChoice::Kind::Leverage: return leverage_distribution(profile);
	case DistributionChoice::Kind::Uniform: return SamplingDistribution::uniform(profile.size());
	case DistributionChoice::Kind::Blended: return blended_distribution(leverage_distribution(profile), choice.alpha);
	}
	throw Error(ErrorCode::InvalidParameter, "unknown distribution kind");
}

std::uint64_t choose_samples(const TrialConfig& cfg, std::size_t r, double beta) {
	std::uint64_t s = 0;
	switch (cfg.samples.kind) {
	case SampleRule::Kind::TheoremFormula:
		s = required_samples(r, beta, cfg.target);
		if (cfg.max_samples) s = std::min(s, *cfg.max_samples);
		break;
	case SampleRule::Kind::Explicit: s = cfg.samples.value; break;
	case SampleRule::Kind::MultipleOfRank: s = cfg.samples.value * r; break;
	}
	if (s < r)
		throw Error(ErrorCode::InvalidParameter,
		            "sample count " + std::to_string(s) + " is below the rank " + std::to_string(r));
	return s;
}

struct TrialInputs {
	const DenseMatrix& a;
	const DenseMatrix& b;
	const OrthonormalBasis& basis;
	const LstsqSolution& exact;
	const DenseMatrix& structural_b_perp;
	double structural_residual_sq;
	const BoundContext& bounds;
	const SamplingDistribution& p;
	std::uint64_t s;
	double beta;
	double epsilon;
	std::uint64_t master_seed;
};

TrialRecord run_trial(const TrialInputs& in, std::size_t trial_id) {
	TrialRecord rec;
	rec.trial_id = trial_id;
	rec.s = in.s;
	rec.beta = in.beta;
	RngStream rng = trial_stream(in.master_seed, trial_id);
	rec.rng_seed = rng.seed();
	rec.rng_stream = rng.stream_index();
	try {
		SketchSolution sol = sketched_lstsq(in.a, in.b, in.p, static_cast<std::size_t>(in.s), rng);
		const StructuralReport sr =
		    check_structural(sol.plan, in.basis, in.structural_b_perp, in.epsilon, in.structural_residual_sq);
		const BoundReport br = check_bounds(in.bounds, in.a, in.b, in.exact, sol.x_tilde, in.epsilon);
		rec.sc1_value = sr.sc1_value;
		rec.sc1_holds = sr.sc1_holds;
		rec.sc2_value = sr.sc2_value;
		rec.sc2_holds = sr.sc2_holds;
		rec.accuracy_ratio = accuracy_ratio(in.a, in.b, sol.x_tilde, in.exact);
		rec.residual_bound_holds = br.residual_bound_holds;
		rec.eps_accurate = br.residual_bound_holds;
		rec.solution_err_sq = br.solution_bound_value;
		rec.solution_bound_limit = br.solution_bound_limit;
		rec.solution_bound_holds = br.solution_bound_holds;
		rec.gamma_bound_limit = br.gamma_bound_limit;
		rec.gamma_bound_holds = br.gamma_bound_holds;
		rec.implication_violated = implication_violated(sr, br);
	} catch (const Error& e) {
		// Counted as accuracy failures; never retried.
		rec.status = e.code() == ErrorCode::SketchRankDeficient ? TrialStatus::SketchRankDeficient
		                                                          : TrialStatus::Failed;
		rec.error = e.what();
		rec.sc1_value = rec.sc2_value = rec.accuracy_ratio = kNaN;
		rec.solution_err_sq = rec.solution_bound_limit = rec.gamma_bound_limit = kNaN;
	}
	return rec;
}

} // namespace

ExperimentReport run_experiment(const TrialConfig& cfg) {
	const auto start = std::chrono::steady_clock::now();
	cfg.validate();

	const Problem prob = generate_problem(cfg.problem);
	const OrthonormalBasis basis = orthonormal_basis(prob.a);
	const LeverageProfile profile = leverage_scores(basis);
	const LstsqSolution exact = exact_lstsq(prob.a, prob.b);
	const BoundContext bounds = make_bound_context(prob.a, prob.b, exact);
	// A round-off B_perp has no direction worth testing SC2 against; treat it as exactly zero.
	const bool consistent = is_zero_residual(exact.residual_sq, bounds.b_norm_sq);
	const DenseMatrix structural_b_perp =
	    consistent ? DenseMatrix::zeros(prob.b.rows(), prob.b.cols()) : exact.b_perp;
	const double structural_residual_sq = consistent ? 0.0 : exact.residual_sq;
	const SamplingDistribution p = make_distribution(cfg.distribution, profile);
	const double beta = misestimation_beta(p, profile);
	const std::uint64_t s = choose_samples(cfg, profile.rank(), beta);

	ExperimentReport rep;
	rep.problem = cfg.problem;
	rep.n_rows = prob.a.rows();
	rep.n_cols = prob.a.cols();
	rep.rhs_cols = prob.b.cols();
	rep.distribution = cfg.distribution.label();
	rep.sample_rule = cfg.samples.label();
	rep.s = s;
	rep.beta = beta;
	rep.coherence = profile.coherence();
	rep.residual_sq = exact.residual_sq;
	rep.epsilon = cfg.target.epsilon();
	rep.delta = cfg.target.delta();
	rep.master_seed = cfg.master_seed;
	rep.trials.resize(cfg.n_trials);

	const TrialInputs inputs{prob.a,  prob.b, basis, exact, structural_b_perp, structural_residual_sq, bounds,
	                         p,       s,      beta,  cfg.target.epsilon(), cfg.master_seed};
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t id = next++; id < cfg.n_trials; id = next++) rep.trials[id] = run_trial(inputs, id);
	};
	const std::size_t n_threads = std::min(cfg.threads, cfg.n_trials);
	if (n_threads <= 1) {
		worker();
	} else {
		std::vector<std::jthread> pool;
		pool.reserve(n_threads);
		for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
	}

	ExperimentSummary& sum = rep.summary;
	sum.n_trials = rep.trials.size();
	for (const TrialRecord& t : rep.trials) {
		sum.eps_accurate += t.eps_accurate;
		sum.sc1_holds += t.sc1_holds;
		sum.sc2_holds += t.sc2_holds;
		sum.both_hold += t.sc1_holds && t.sc2_holds;
		sum.implication_violations += t.implication_violated;
		sum.failed_trials += t.status != TrialStatus::Ok;
	}
	rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return rep;
}

void write_report(std::ostream& out, const ExperimentReport& rep) {
	out << kReportHeader << '\n';
	for (const TrialRecord& t : rep.trials) {
		out << t.trial_id << ',' << to_string(t.status) << ',' << t.s << ',' << format_double(t.beta) << ','
		    << format_double(t.sc1_value) << ',' << int(t.sc1_holds) << ',' << format_double(t.sc2_value) << ','
		    << int(t.sc2_holds) << ',' << format_double(t.accuracy_ratio) << ',' << int(t.eps_accurate) << ','
		    << int(t.residual_bound_holds) << ',' << format_double(t.solution_err_sq) << ','
		    << format_double(t.solution_bound_limit) << ',' << int(t.solution_bound_holds) << ','
		    << format_double(t.gamma_bound_limit) << ',' << int(t.gamma_bound_holds) << ','
		    << RngStream::algorithm_id << ',' << t.rng_seed << ',' << t.rng_stream << '\n';
	}
	const ExperimentSummary& s = rep.summary;
	out << "# problem=" << to_string(rep.problem.kind) << '\n'
	    << "# n_rows=" << rep.n_rows << '\n'
	    << "# n_cols=" << rep.n_cols << '\n'
	    << "# rhs_cols=" << rep.rhs_cols << '\n'
	    << "# problem_seed=" << rep.problem.seed << '\n'
	    << "# coherence=" << format_double(rep.coherence) << '\n'
	    << "# residual_sq=" << format_double(rep.residual_sq) << '\n'
	    << "# distribution=" << rep.distribution << '\n'
	    << "# sample_rule=" << rep.sample_rule << '\n'
	    << "# s=" << rep.s << '\n'
	    << "# beta=" << format_double(rep.beta) << '\n'
	    << "# epsilon=" << format_double(rep.epsilon) << '\n'
	    << "# delta=" << format_double(rep.delta) << '\n'
	    << "# rng_algorithm=" << RngStream::algorithm_id << '\n'
	    << "# master_seed=" << rep.master_seed << '\n'
	    << "# n_trials=" << s.n_trials << '\n'
	    << "# success_rate=" << format_double(s.success_rate()) << '\n'
	    << "# sc1_rate=" << format_double(s.sc1_rate()) << '\n'
	    << "# sc2_rate=" << format_double(s.sc2_rate()) << '\n'
	    << "# both_rate=" << format_double(s.rate(s.both_hold)) << '\n'
	    << "# implication_violations=" << s.implication_violations << '\n'
	    << "# failed_trials=" << s.failed_trials << '\n'
	    << "# wall_time_s=" << format_double(rep.wall_time_s) << '\n';
}

void write_report(const std::filesystem::path& path, const ExperimentReport& report) {
	std::ofstream out(path, std::ios::binary);
	if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
	write_report(out, report);
	if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string format_report(const ExperimentReport& report) {
	std::ostringstream os;
	write_report(os, report);
	return os.str();
}

} // namespace sketchls
