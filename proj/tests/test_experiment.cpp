#include "sketchls/config.hpp"
#include "sketchls/experiment.hpp"
#include "sketchls/presets.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace sketchls;

namespace {

std::string without_wall_time(const std::string& text) {
	std::istringstream in(text);
	std::string out, line;
	while (std::getline(in, line))
		if (line.rfind("# wall_time_s=", 0) != 0) out += line + '\n';
	return out;
}

std::vector<std::string> lines_of(const std::string& text) {
	std::istringstream in(text);
	std::vector<std::string> out;
	for (std::string line; std::getline(in, line);) out.push_back(line);
	return out;
}

TrialConfig small_config() {
	TrialConfig cfg;
	cfg.problem.n_rows = 300;
	cfg.problem.n_cols = 3;
	cfg.samples = SampleRule::parse("xR:20");
	cfg.target = AccuracyTarget(0.5, 0.25);
	cfg.n_trials = 40;
	cfg.master_seed = 5;
	return cfg;
}

} // namespace

TEST_CASE("distribution and sample-rule labels") {
	for (const char* text : {"leverage", "uniform", "blended:0.25"})
		CHECK(DistributionChoice::parse(text).label() == text);
	CHECK(DistributionChoice::parse("blended:0.25").alpha == 0.25);
	for (const char* text : {"auto", "128", "xR:40"}) CHECK(SampleRule::parse(text).label() == text);
	CHECK(SampleRule::parse("xR:40").kind == SampleRule::Kind::MultipleOfRank);
	CHECK(SampleRule::parse("xR:40").value == 40);
	for (const char* bad : {"", "lev", "blended:", "blended:1.5", "blended:x"})
		CHECK_THROWS_AS(DistributionChoice::parse(bad), Error);
	for (const char* bad : {"", "0", "-3", "xR:", "xR:0", "many", "12abc"})
		CHECK_THROWS_AS(SampleRule::parse(bad), Error);
}

TEST_CASE("config files") {
	std::istringstream in(
	    "# experiment\n"
	    "kind = spiked-coherent\n"
	    "rows = 500   # trailing comment\n"
	    "cols=4\n"
	    "\n"
	    "coherence = 0.95\n"
	    "dist = blended:0.5\n"
	    "samples = xR:30\n"
	    "epsilon = 0.3\n"
	    "delta = 0.05\n"
	    "trials = 12\n"
	    "seed = 99\n"
	    "threads = 3\n"
	    "max_samples = 1000\n");
	const TrialConfig cfg = parse_config(in);
	CHECK(cfg.problem.kind == ProblemKind::SpikedCoherent);
	CHECK(cfg.problem.n_rows == 500);
	CHECK(cfg.problem.n_cols == 4);
	CHECK(cfg.problem.coherence_target == 0.95);
	CHECK(cfg.distribution.kind == DistributionChoice::Kind::Blended);
	CHECK(cfg.samples.label() == "xR:30");
	CHECK(cfg.target.epsilon() == 0.3);
	CHECK(cfg.target.delta() == 0.05);
	CHECK(cfg.n_trials == 12);
	CHECK(cfg.master_seed == 99);
	CHECK(cfg.threads == 3);
	CHECK(cfg.max_samples == 1000u);

	SUBCASE("base values survive and settings override") {
		TrialConfig base;
		base.n_trials = 7;
		std::istringstream one("seed = 4\n");
		const TrialConfig c = parse_config(one, base);
		CHECK(c.n_trials == 7);
		CHECK(c.master_seed == 4);
		TrialConfig d = c;
		apply_setting(d, "trials", "9");
		CHECK(d.n_trials == 9);
	}
	SUBCASE("errors carry the line number") {
		auto message = [](const std::string& text) -> std::string {
			std::istringstream bad(text);
			try {
				parse_config(bad);
			} catch (const Error& e) {
				CHECK(e.code() == ErrorCode::ParseError);
				return e.what();
			}
			return "";
		};
		CHECK(message("rows = 10\nnonsense\n").find("line 2") != std::string::npos);
		CHECK(message("# c\n\ncolour = red\n").find("line 3") != std::string::npos);
		CHECK(message("trials = -1\n").find("line 1") != std::string::npos);
		CHECK(message("epsilon = 2\n").find("line 1") != std::string::npos);
		CHECK_THROWS_AS(load_config("/nonexistent/sketchls.cfg"), Error);
	}
}

TEST_CASE("trial streams") {
	RngStream a = trial_stream(11, 3);
	RngStream b(11, 3);
	CHECK(a() == b());
	CHECK(trial_stream(11, 3).stream_index() == 3);
}

TEST_CASE("consistent problem: every trial is exact") {
	TrialConfig cfg;
	cfg.problem.kind = ProblemKind::Consistent;
	cfg.problem.n_rows = 200;
	cfg.problem.n_cols = 4;
	cfg.samples = SampleRule::parse("2000");
	cfg.n_trials = 20;
	const auto rep = run_experiment(cfg);
	CHECK(rep.summary.success_rate() == 1.0);
	for (const auto& t : rep.trials) {
		CHECK(t.accuracy_ratio == 1.0);
		CHECK(t.status == TrialStatus::Ok);
		CHECK(t.sc2_value == 0.0);
		CHECK(t.sc2_holds);
	}
	CHECK(rep.summary.implication_violations == 0);
}

TEST_CASE("theorem sample size gives success at least 1 - delta") {
	TrialConfig cfg;
	cfg.problem.n_rows = 2000;
	cfg.problem.n_cols = 3;
	cfg.target = AccuracyTarget(0.1, 0.2);
	cfg.n_trials = 200;
	cfg.threads = 4;
	const auto rep = run_experiment(cfg);
	CHECK(rep.s == required_samples(3, rep.beta, cfg.target));
	CHECK(rep.beta == doctest::Approx(1.0).epsilon(1e-12));
	CHECK(rep.summary.success_rate() >= 0.8);
	CHECK(rep.summary.implication_violations == 0);

	SUBCASE("max_samples caps the count") {
		TrialConfig capped = cfg;
		capped.n_trials = 5;
		capped.max_samples = 100;
		CHECK(run_experiment(capped).s == 100);
	}
}

TEST_CASE("records and aggregates are consistent") {
	TrialConfig cfg = small_config();
	cfg.distribution = DistributionChoice::parse("blended:0.5");
	const auto rep = run_experiment(cfg);
	REQUIRE(rep.trials.size() == 40);
	std::size_t acc = 0, sc1 = 0, sc2 = 0, both = 0;
	for (std::size_t i = 0; i < rep.trials.size(); ++i) {
		const auto& t = rep.trials[i];
		CHECK(t.trial_id == i);
		CHECK(t.rng_stream == i);
		CHECK(t.rng_seed == 5);
		CHECK(t.s == 60);
		CHECK(t.eps_accurate == t.residual_bound_holds);
		CHECK(t.eps_accurate == (t.accuracy_ratio <= 1.5 + 1e-10));
		// the realized beta of a 50/50 blend is at least 1/2
		CHECK(t.beta >= 0.5 - 1e-12);
		CHECK(t.beta == rep.beta);
		acc += t.eps_accurate;
		sc1 += t.sc1_holds;
		sc2 += t.sc2_holds;
		both += t.sc1_holds && t.sc2_holds;
		CHECK_FALSE(t.implication_violated);
	}
	CHECK(rep.summary.eps_accurate == acc);
	CHECK(rep.summary.sc1_holds == sc1);
	CHECK(rep.summary.sc2_holds == sc2);
	CHECK(rep.summary.both_hold == both);
}

TEST_CASE("reports do not depend on the thread count") {
	TrialConfig cfg = small_config();
	cfg.threads = 1;
	const std::string one = without_wall_time(format_report(run_experiment(cfg)));
	for (std::size_t threads : {2u, 4u, 7u}) {
		cfg.threads = threads;
		CHECK(without_wall_time(format_report(run_experiment(cfg))) == one);
	}
	cfg.master_seed = 6;
	CHECK(without_wall_time(format_report(run_experiment(cfg))) != one);
}

TEST_CASE("CSV layout") {
	TrialConfig cfg = small_config();
	cfg.n_trials = 3;
	const auto lines = lines_of(format_report(run_experiment(cfg)));
	REQUIRE(lines.size() > 4);
	CHECK(lines[0] == kReportHeader);
	const auto n_cols = static_cast<std::size_t>(std::count(kReportHeader.begin(), kReportHeader.end(), ',')) + 1;
	for (std::size_t i = 1; i <= 3; ++i) {
		CHECK(static_cast<std::size_t>(std::count(lines[i].begin(), lines[i].end(), ',')) + 1 == n_cols);
		CHECK(lines[i].rfind(std::to_string(i - 1) + ",ok,60,", 0) == 0);
		CHECK(lines[i].find(",philox4x32-10,5," + std::to_string(i - 1)) != std::string::npos);
	}
	const std::vector<std::string> keys = {
	    "problem",     "n_rows",      "n_cols",        "rhs_cols",     "problem_seed", "coherence",
	    "residual_sq", "distribution", "sample_rule",  "s",            "beta",         "epsilon",
	    "delta",       "rng_algorithm", "master_seed", "n_trials",     "success_rate", "sc1_rate",
	    "sc2_rate",    "both_rate",    "implication_violations", "failed_trials", "wall_time_s"};
	REQUIRE(lines.size() == 4 + keys.size());
	for (std::size_t k = 0; k < keys.size(); ++k) CHECK(lines[4 + k].rfind("# " + keys[k] + "=", 0) == 0);
	CHECK(lines[4] == "# problem=gaussian-incoherent");
	CHECK(lines[12] == "# sample_rule=xR:20");
	CHECK(lines[13] == "# s=60");
}

TEST_CASE("rank-deficient sketches are counted as failures") {
	TrialConfig cfg;
	cfg.problem.n_rows = 200;
	cfg.problem.n_cols = 6;
	cfg.distribution = DistributionChoice::parse("uniform");
	cfg.samples = SampleRule::parse("6");
	cfg.n_trials = 30;
	const auto rep = run_experiment(cfg);
	for (const auto& t : rep.trials) {
		if (t.status != TrialStatus::Ok) {
			CHECK(t.status == TrialStatus::SketchRankDeficient);
			CHECK_FALSE(t.eps_accurate);
		}
	}
	CHECK(rep.summary.failed_trials <= rep.summary.n_trials);
}

TEST_CASE("config validation") {
	TrialConfig cfg = small_config();
	cfg.n_trials = 0;
	CHECK_THROWS_AS(run_experiment(cfg), Error);
	cfg = small_config();
	cfg.threads = 0;
	CHECK_THROWS_AS(run_experiment(cfg), Error);
}

TEST_CASE("presets") {
	CHECK(rate_threshold(0.8, 200) == doctest::Approx(0.8 - 3 * std::sqrt(0.16 / 200)).epsilon(1e-15));
	CHECK(rate_threshold(1.0, 10) == 1.0);
	CHECK(preset_names().size() == 6);
	const auto res = run_preset("consistent-zero-residual", 2);
	CHECK(res.passed);
	CHECK(res.name == "consistent-zero-residual");
	CHECK_THROWS_AS(run_preset("no-such-preset"), Error);
}
