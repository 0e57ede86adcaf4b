// sketchls: sketched least squares by leverage-score row sampling.
//
//   sketchls solve    --a A.mtx --b B.mtx [--dist D] [--samples S] [--out X.mtx]
//   sketchls leverage --a A.mtx [--out scores.csv]
//   sketchls bench    [--config FILE] [overrides...] [--out report.csv]
//   sketchls validate [--preset NAME]... [--threads N]
//
// Exit codes: 0 success, 1 usage error, 2 I/O / parse / input-data error,
// 3 validation failure.

#include "sketchls/config.hpp"
#include "sketchls/diagnostics.hpp"
#include "sketchls/experiment.hpp"
#include "sketchls/leverage.hpp"
#include "sketchls/matrix_io.hpp"
#include "sketchls/presets.hpp"
#include "sketchls/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace sketchls;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitValidation = 3;

int exit_code_for(ErrorCode code) {
	switch (code) {
	case ErrorCode::InvalidParameter:
	case ErrorCode::InvalidSampleCount:
	case ErrorCode::UnsupportedRow:
		return kExitUsage;
	default:
		return kExitData;
	}
}

struct SolveArgs {
	std::string a_path, b_path, out;
	std::string dist = "leverage";
	std::string samples = "auto";
	double epsilon = 0.1;
	double delta = 0.2;
	std::uint64_t seed = 1;
	std::optional<std::uint64_t> max_samples;
	bool diagnostics = false;
};

int run_solve(const SolveArgs& args) {
	const DenseMatrix a = read_matrix(args.a_path);
	const DenseMatrix b = read_matrix(args.b_path);
	if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionError, "A and B have different row counts");
	const AccuracyTarget target(args.epsilon, args.delta);
	const OrthonormalBasis basis = orthonormal_basis(a);
	const LeverageProfile profile = leverage_scores(basis);

	const DistributionChoice choice = DistributionChoice::parse(args.dist);
	SamplingDistribution p = [&] {
		switch (choice.kind) {
		case DistributionChoice::Kind::Uniform: return SamplingDistribution::uniform(a.rows());
		case DistributionChoice::Kind::Blended: return blended_distribution(leverage_distribution(profile), choice.alpha);
		default: return leverage_distribution(profile);
		}
	}();
	const double beta = misestimation_beta(p, profile);

	const SampleRule rule = SampleRule::parse(args.samples);
	std::uint64_t s = 0;
	switch (rule.kind) {
	case SampleRule::Kind::TheoremFormula:
		s = required_samples(a.cols(), beta, target);
		if (args.max_samples) s = std::min(s, *args.max_samples);
		break;
	case SampleRule::Kind::Explicit: s = rule.value; break;
	case SampleRule::Kind::MultipleOfRank: s = rule.value * a.cols(); break;
	}

	RngStream rng(args.seed, 0);
	const SketchSolution sol = sketched_lstsq(a, b, p, static_cast<std::size_t>(s), rng);

	std::cout << "rows=" << a.rows() << " cols=" << a.cols() << " rhs=" << b.cols() << '\n'
	          << "distribution=" << choice.label() << " beta=" << format_double(beta) << " s=" << s << '\n'
	          << "rng=" << RngStream::algorithm_id << " seed=" << args.seed << " stream=0\n"
	          << "sketched_residual_sq=" << format_double(sol.sketched_residual_sq) << '\n';

	if (args.diagnostics) {
		const LstsqSolution exact = exact_lstsq(a, b);
		const bool consistent = is_zero_residual(exact.residual_sq, b.frobenius_norm_sq());
		const StructuralReport sr =
		    consistent ? check_structural(sol.plan, basis, DenseMatrix::zeros(b.rows(), b.cols()), target.epsilon(), 0.0)
		               : check_structural(sol.plan, basis, exact.b_perp, target.epsilon(), exact.residual_sq);
		const BoundReport br = check_bounds(a, b, exact, sol, target.epsilon());
		std::cout << "optimal_residual_sq=" << format_double(exact.residual_sq) << '\n'
		          << "accuracy_ratio=" << format_double(accuracy_ratio(a, b, sol.x_tilde, exact)) << '\n'
		          << "sc1_value=" << format_double(sr.sc1_value) << " sc1_holds=" << sr.sc1_holds << '\n'
		          << "sc2_value=" << format_double(sr.sc2_value) << " sc2_holds=" << sr.sc2_holds << '\n'
		          << "residual_bound_holds=" << br.residual_bound_holds
		          << " solution_err_sq=" << format_double(br.solution_bound_value)
		          << " solution_bound_limit=" << format_double(br.solution_bound_limit) << '\n'
		          << "gamma=" << format_double(br.gamma) << " gamma_bound_limit=" << format_double(br.gamma_bound_limit)
		          << '\n';
	}
	if (args.out.empty()) {
		std::cout << "x_tilde:\n";
		write_matrix(std::cout, sol.x_tilde);
	} else {
		write_matrix(args.out, sol.x_tilde);
	}
	return kExitOk;
}

int run_leverage(const std::string& a_path, const std::string& out) {
	const DenseMatrix a = read_matrix(a_path);
	const LeverageProfile profile = leverage_scores(a);
	std::cout << "rows=" << a.rows() << " rank=" << profile.rank() << '\n'
	          << "coherence=" << format_double(profile.coherence()) << '\n'
	          << "incoherent_floor=" << format_double(static_cast<double>(profile.rank()) / a.rows()) << '\n'
	          << "score_sum=" << format_double(stable_sum(profile.scores())) << '\n';
	std::ofstream file;
	if (!out.empty()) {
		file.open(out);
		if (!file) throw Error(ErrorCode::IoError, "cannot write " + out);
	}
	std::ostream& os = out.empty() ? std::cout : file;
	os << "row,score\n";
	const auto scores = profile.scores();
	for (std::size_t i = 0; i < scores.size(); ++i) os << i << ',' << format_double(scores[i]) << '\n';
	return kExitOk;
}

int run_validate(std::vector<std::string> presets, std::size_t threads) {
	if (presets.empty()) presets = preset_names();
	bool all = true;
	for (const auto& name : presets) {
		const PresetResult r = run_preset(name, threads);
		all = all && r.passed;
		std::printf("[%s] %-26s %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.seconds);
		std::fflush(stdout);
	}
	return all ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"Sketched least squares via leverage-score row sampling"};
	app.require_subcommand(1);

	SolveArgs solve;
	auto* solve_cmd = app.add_subcommand("solve", "One-shot sketched solve on Matrix Market files");
	solve_cmd->add_option("--a", solve.a_path, "Design matrix A (N x r)")->required();
	solve_cmd->add_option("--b", solve.b_path, "Right-hand sides B (N x n)")->required();
	solve_cmd->add_option("--dist", solve.dist, "leverage | uniform | blended:ALPHA");
	solve_cmd->add_option("--samples", solve.samples, "auto | INT | xR:INT");
	solve_cmd->add_option("--epsilon", solve.epsilon, "Accuracy epsilon in (0,1)");
	solve_cmd->add_option("--delta", solve.delta, "Failure probability delta in (0,1)");
	solve_cmd->add_option("--seed", solve.seed, "RNG seed");
	solve_cmd->add_option("--max-samples", solve.max_samples, "Cap on the theorem sample count");
	solve_cmd->add_option("--out", solve.out, "Write X~ as Matrix Market (stdout if omitted)");
	solve_cmd->add_flag("--diagnostics", solve.diagnostics, "Also solve exactly and report SC1/SC2 and bounds");

	std::string lev_a, lev_out;
	auto* lev_cmd = app.add_subcommand("leverage", "Print leverage scores and coherence");
	lev_cmd->add_option("--a", lev_a, "Matrix Market file")->required();
	lev_cmd->add_option("--out", lev_out, "Write scores CSV here instead of stdout");

	std::string config_path, out_path;
	std::vector<std::pair<std::string, std::string>> overrides;
	auto* bench_cmd = app.add_subcommand("bench", "Run a Monte Carlo experiment and write a CSV report");
	bench_cmd->add_option("--config", config_path, "key = value config file");
	bench_cmd->add_option("--out", out_path, "CSV report path (stdout if omitted)");
	const std::vector<std::pair<std::string, std::string>> override_flags = {
	    {"--seed", "seed"},         {"--trials", "trials"},   {"--epsilon", "epsilon"},
	    {"--delta", "delta"},       {"--dist", "dist"},       {"--samples", "samples"},
	    {"--threads", "threads"},   {"--kind", "kind"},       {"--rows", "rows"},
	    {"--cols", "cols"},         {"--rhs", "rhs"},         {"--noise", "noise"},
	    {"--coherence", "coherence"}, {"--problem-seed", "problem_seed"}, {"--a", "a_file"},
	    {"--b", "b_file"},          {"--max-samples", "max_samples"},
	};
	std::vector<std::string> override_values(override_flags.size());
	for (std::size_t i = 0; i < override_flags.size(); ++i)
		bench_cmd->add_option(override_flags[i].first, override_values[i], "Overrides config key '" +
		                                                                        override_flags[i].second + "'");

	std::vector<std::string> presets;
	std::size_t validate_threads = 1;
	auto* validate_cmd = app.add_subcommand("validate", "Run the built-in acceptance presets");
	validate_cmd->add_option("--preset", presets, "Preset name (repeatable; default all)");
	validate_cmd->add_option("--threads", validate_threads, "Worker threads per experiment");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int rc = app.exit(e);
		return rc == 0 ? kExitOk : kExitUsage;
	}

	try {
		if (*solve_cmd) return run_solve(solve);
		if (*lev_cmd) return run_leverage(lev_a, lev_out);
		if (*bench_cmd) {
			TrialConfig cfg = config_path.empty() ? TrialConfig{} : load_config(config_path);
			for (std::size_t i = 0; i < override_flags.size(); ++i)
				if (bench_cmd->count(override_flags[i].first) > 0)
					apply_setting(cfg, override_flags[i].second, override_values[i]);
			const ExperimentReport rep = run_experiment(cfg);
			if (out_path.empty()) write_report(std::cout, rep);
			else write_report(out_path, rep);
			const auto& s = rep.summary;
			std::cerr << "s=" << rep.s << " beta=" << format_double(rep.beta)
			          << " success_rate=" << format_double(s.success_rate())
			          << " sc1_rate=" << format_double(s.sc1_rate()) << " sc2_rate=" << format_double(s.sc2_rate())
			          << " implication_violations=" << s.implication_violations << '\n';
			return kExitOk;
		}
		if (*validate_cmd) return run_validate(presets, validate_threads);
	} catch (const Error& e) {
		std::cerr << "error: " << e.what() << '\n';
		return exit_code_for(e.code());
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitData;
	}
	return kExitUsage;
}
