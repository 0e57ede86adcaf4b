// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "oracles.hpp"

#include "sketchls/diagnostics.hpp"
#include "sketchls/leverage.hpp"
#include "sketchls/matrix_io.hpp"
#include "sketchls/presets.hpp"
#include "sketchls/problem.hpp"
#include "sketchls/solver.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace sketchls;

namespace {

struct Outcome {
	bool passed = true;
	std::string detail;
};

struct Criterion {
	int id;
	std::string name;
	double time_limit_s;
	std::function<Outcome()> check;
};

std::size_t worker_threads() { return std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8); }

std::string num(double v) {
	std::ostringstream os;
	os.precision(6);
	os << v;
	return os.str();
}

/// Random probability vector with every entry positive and an exactly representable normalization.
SamplingDistribution positive_distribution(std::size_t n, RngStream& rng) {
	std::vector<double> w(n);
	for (auto& x : w) x = 0.05 + rng.uniform01();
	const double total = std::accumulate(w.begin(), w.end(), 0.0);
	for (auto& x : w) x /= total;
	w[0] += 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
	return SamplingDistribution(w);
}

/// Squared row norms of a, normalized.
SamplingDistribution row_norm_distribution(const Eigen::MatrixXd& a) {
	const Eigen::VectorXd norms = a.rowwise().squaredNorm();
	std::vector<double> w(static_cast<std::size_t>(a.rows()));
	for (Eigen::Index i = 0; i < a.rows(); ++i) w[static_cast<std::size_t>(i)] = norms(i) / norms.sum();
	w[0] += 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
	return SamplingDistribution(w);
}

Outcome leverage_axioms() {
	Outcome out;
	double worst_sum = 0.0, worst_hat = 0.0;
	const ProblemKind kinds[] = {ProblemKind::GaussianIncoherent, ProblemKind::SpikedCoherent,
	                             ProblemKind::Consistent};
	for (std::uint64_t i = 0; i < 50; ++i) {
		ProblemSpec spec;
		spec.kind = kinds[i % 3];
		spec.n_rows = 100 + 38 * i;  // up to 1962
		spec.n_cols = 1 + i % 20;
		spec.coherence_target = 0.5 + 0.01 * static_cast<double>(i % 40);
		spec.seed = 1000 + i;
		const Problem p = generate_problem(spec);
		const auto lev = leverage_scores(p.a);
		const double n = static_cast<double>(spec.n_rows), r = static_cast<double>(spec.n_cols);
		const double sum = std::accumulate(lev.scores().begin(), lev.scores().end(), 0.0);
		worst_sum = std::max(worst_sum, std::abs(sum - r));
		for (double l : lev.scores()) out.passed = out.passed && l >= 0.0 && l <= 1.0 + 1e-12;
		out.passed = out.passed && lev.coherence() >= r / n - 1e-12 && lev.coherence() <= 1.0 + 1e-12;
		if (spec.n_rows <= 600) {
			const auto hat = oracle::hat_diagonal(p.a.eigen());
			for (std::size_t k = 0; k < hat.size(); ++k)
				worst_hat = std::max(worst_hat, std::abs(hat[k] - lev.scores()[k]));
		}
	}
	out.passed = out.passed && worst_sum <= 1e-8 && worst_hat <= 1e-8;
	out.detail = "instances=50 max|sum-r|=" + num(worst_sum) + " max|l-hat_oracle|=" + num(worst_hat);
	return out;
}

Outcome unbiased_norm() {
	Outcome out;
	double worst_z = 0.0;
	const int plans = 100000;
	for (std::uint64_t pair = 0; pair < 10; ++pair) {
		RngStream setup(2000 + pair, 0);
		const std::size_t n = 2 + pair % 9;
		const std::size_t s = 1 + pair % 5;
		const auto p = positive_distribution(n, setup);
		std::vector<double> x(n);
		for (auto& v : x) v = setup.normal();
		const double target = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
		double sum = 0.0, sum_sq = 0.0;
		RngStream rng(2000 + pair, 1);
		for (int t = 0; t < plans; ++t) {
			const double v = sketched_norm_sq(build_sketch(p, s, rng), x);
			sum += v;
			sum_sq += v * v;
		}
		const double mean = sum / plans;
		const double se = std::sqrt((sum_sq - plans * mean * mean) / (plans - 1) / plans);
		const double z = std::abs(mean - target) / se;
		worst_z = std::max(worst_z, z);
		out.passed = out.passed && z <= 5.0;
	}
	out.detail = "pairs=10 plans=1e5 max_z=" + num(worst_z) + " limit=5";
	return out;
}

Outcome matmul_variance() {
	Outcome out;
	double worst = 0.0;
	const int trials = 10000;
	for (std::uint64_t pair = 0; pair < 5; ++pair) {
		RngStream setup(3000 + pair, 0);
		Eigen::MatrixXd a = oracle::gaussian(40, 3, setup);
		a.row(0) *= 6.0;  // uneven row norms so the blends differ
		const Eigen::MatrixXd b = oracle::gaussian(40, 2, setup);
		const Eigen::MatrixXd exact = a.transpose() * b;
		const auto base = row_norm_distribution(a);
		const DenseMatrix ad(a), bd(b);
		for (double alpha : {0.0, 0.5, 0.9}) {
			const double beta = 1.0 - alpha;
			const auto p = blended_distribution(base, alpha);
			for (std::size_t s : {10u, 100u}) {
				RngStream rng(3000 + pair, 1 + static_cast<std::uint64_t>(alpha * 10) * 1000 + s);
				double err = 0.0;
				for (int t = 0; t < trials; ++t) err += (approx_matmul(ad, bd, p, s, rng).eigen() - exact).squaredNorm();
				err /= trials;
				const double bound = a.squaredNorm() * b.squaredNorm() / (beta * static_cast<double>(s));
				worst = std::max(worst, err / bound);
				out.passed = out.passed && err <= 1.1 * bound;
			}
		}
	}

	// a = [1; 1], b = [1; -1], uniform p, s = 1: both outcomes enumerated.
	const Eigen::MatrixXd a2 = (Eigen::MatrixXd(2, 1) << 1, 1).finished();
	const Eigen::MatrixXd b2 = (Eigen::MatrixXd(2, 1) << 1, -1).finished();
	double enumerated = 0.0;
	for (std::size_t k = 0; k < 2; ++k) {
		const SketchPlan plan(2, {k}, {0.5}, {}, 0);
		const double est = (apply_sketch(plan, a2).transpose() * apply_sketch(plan, b2))(0, 0);
		enumerated += 0.5 * (est - 0.0) * (est - 0.0);
	}
	const bool exact_case = std::abs(enumerated - 4.0) <= 4.0 * 1e-14;
	out.passed = out.passed && exact_case;
	out.detail = "pairs=5 betas={1,0.5,0.1} s={10,100} max_err/bound=" + num(worst) +
	             " limit=1.1 enumerated_err2=" + num(enumerated);
	return out;
}

Outcome from_preset(const std::string& name) {
	const PresetResult res = run_preset(name, worker_threads());
	return {res.passed, name + ": " + res.detail};
}

Outcome sample_formula() {
	const double c = 144.0 / std::pow(1.0 - 1.0 / std::sqrt(2.0), 2);
	const auto s1 = required_samples(10, 1.0, AccuracyTarget(1e-6, 0.1));
	const auto s2 = required_samples(10, 1.0, AccuracyTarget(0.01, 0.1));
	const auto s3 = required_samples(5, 1.0, AccuracyTarget(0.1, 0.2));
	Outcome out;
	out.passed = std::abs(sample_size_constant() - c) <= 1e-12 * c && s1 == 100000000u && s2 == 77302u && s3 == 27016u;
	out.detail = "C=" + format_double(sample_size_constant()) + " s=" + std::to_string(s1) + "," + std::to_string(s2) +
	             "," + std::to_string(s3);
	return out;
}

Outcome oracle_equivalence() {
	Outcome out;
	double worst_apply = 0.0, worst_norm = 0.0, worst_sc = 0.0, worst_ne = 0.0;
	for (std::uint64_t i = 0; i < 200; ++i) {
		RngStream rng(4000 + i, 0);
		const Eigen::Index n = 2 + static_cast<Eigen::Index>(i % 15);
		const Eigen::Index r = 1 + static_cast<Eigen::Index>(i % std::min<std::uint64_t>(3, n - 1));
		const std::size_t s = 1 + i % 20;
		const auto p = positive_distribution(static_cast<std::size_t>(n), rng);
		const auto plan = build_sketch(p, s, rng);
		const Eigen::MatrixXd dense = oracle::dense_sketch(plan);

		const Eigen::MatrixXd m = oracle::gaussian(n, 3, rng);
		worst_apply = std::max(worst_apply, (apply_sketch(plan, m) - dense * m).cwiseAbs().maxCoeff() /
		                                        std::max(1.0, (dense * m).cwiseAbs().maxCoeff()));

		std::vector<double> x(static_cast<std::size_t>(n));
		for (auto& v : x) v = rng.normal();
		const Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
		const double dn = (dense * xv).squaredNorm();
		worst_norm = std::max(worst_norm, std::abs(sketched_norm_sq(plan, x) - dn) / std::max(1.0, dn));

		const Eigen::MatrixXd a = oracle::gaussian(n, r, rng);
		const Eigen::MatrixXd b = oracle::gaussian(n, 2, rng);
		const LstsqSolution exact = exact_lstsq(DenseMatrix(a), DenseMatrix(b));
		const OrthonormalBasis q = orthonormal_basis(DenseMatrix(a));
		const auto rep = check_structural(plan, q, exact.b_perp, 0.5, exact.residual_sq);
		const Eigen::MatrixXd sq = dense * q.q().eigen();
		const double sc1 = static_cast<Eigen::Index>(s) >= r ? oracle::smallest_sigma_sq(sq) : 0.0;
		const double sc2 = (sq.transpose() * (dense * exact.b_perp.eigen())).squaredNorm();
		worst_sc = std::max({worst_sc, std::abs(rep.sc1_value - sc1) / std::max(1.0, sc1),
		                     std::abs(rep.sc2_value - sc2) / std::max(1.0, sc2)});
	}
	for (std::uint64_t i = 0; i < 50; ++i) {
		RngStream rng(5000 + i, 0);
		const Eigen::Index n = 20 + static_cast<Eigen::Index>(10 * i);
		const Eigen::Index r = 1 + static_cast<Eigen::Index>(i % 8);
		const Eigen::MatrixXd a = oracle::gaussian(n, r, rng);
		const Eigen::MatrixXd b = oracle::gaussian(n, 1 + static_cast<Eigen::Index>(i % 3), rng);
		const LstsqSolution exact = exact_lstsq(DenseMatrix(a), DenseMatrix(b));
		worst_ne = std::max(worst_ne, oracle::rel_diff(exact.x_opt.eigen(), oracle::normal_equations(a, b)));
	}
	out.passed = worst_apply <= 1e-12 && worst_norm <= 1e-12 && worst_sc <= 1e-12 && worst_ne <= 1e-8;
	out.detail = "plans=200 apply=" + num(worst_apply) + " norm=" + num(worst_norm) + " sc=" + num(worst_sc) +
	             " lstsq_rel=" + num(worst_ne);
	return out;
}

std::string csv_without_wall_time(const std::filesystem::path& path) {
	std::ifstream in(path);
	std::string out, line;
	while (std::getline(in, line))
		if (line.rfind("# wall_time_s=", 0) != 0) out += line + '\n';
	return out;
}

Outcome cli_reproducibility() {
	Outcome out;
	const auto dir = std::filesystem::temp_directory_path() / ("sketchls_accept_" + std::to_string(::getpid()));
	std::filesystem::create_directories(dir);
	const std::vector<std::string> setups = {
	    "--kind gaussian-incoherent --rows 2000 --cols 5 --samples 200 --trials 64",
	    "--kind spiked-coherent --rows 1500 --cols 4 --coherence 0.95 --dist uniform --samples xR:30 --trials 64",
	    "--kind consistent --rows 800 --cols 3 --dist blended:0.3 --samples auto --max-samples 500 --trials 48",
	};
	std::size_t compared = 0;
	for (std::size_t k = 0; k < setups.size(); ++k) {
		std::string reference;
		for (int threads : {1, 4, 3, 1}) {
			const auto csv = dir / ("run_" + std::to_string(k) + "_" + std::to_string(threads) + ".csv");
			const std::string cmd = std::string("\"") + SKETCHLS_CLI_PATH + "\" bench " + setups[k] +
			                        " --seed 2024 --threads " + std::to_string(threads) + " --out \"" +
			                        csv.string() + "\" 2>/dev/null";
			const int status = std::system(cmd.c_str());
			if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
				out.passed = false;
				out.detail = "bench failed: " + cmd;
				std::filesystem::remove_all(dir);
				return out;
			}
			const std::string body = csv_without_wall_time(csv);
			if (reference.empty()) reference = body;
			else out.passed = out.passed && body == reference && !body.empty();
			++compared;
		}
	}
	std::filesystem::remove_all(dir);
	out.detail = "configs=3 runs=" + std::to_string(compared) + " threads={1,4,3,1} byte-identical=" +
	             (out.passed ? "yes" : "no");
	return out;
}

} // namespace

int main() {
	const std::vector<Criterion> criteria = {
	    {1, "leverage-axioms", 10, leverage_axioms},
	    {2, "sketch-unbiasedness", 30, unbiased_norm},
	    {3, "matmul-variance-bound", 60, matmul_variance},
	    {4, "deterministic-implication", 120, [] { return from_preset("implication-sweep"); }},
	    {5, "sc2-sample-count-rate", 120, [] { return from_preset("sc2-markov-rate"); }},
	    {6, "main-theorem-end-to-end", 300, [] { return from_preset("main-theorem-desk"); }},
	    {7, "sample-size-arithmetic", 10, sample_formula},
	    {8, "oracle-equivalence", 60, oracle_equivalence},
	    {9, "cli-reproducibility", 120, cli_reproducibility},
	};

	int failures = 0;
	for (const auto& c : criteria) {
		const auto start = std::chrono::steady_clock::now();
		Outcome o;
		try {
			o = c.check();
		} catch (const std::exception& e) {
			o = {false, std::string("exception: ") + e.what()};
		}
		const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		const bool in_time = secs <= c.time_limit_s;
		const bool ok = o.passed && in_time;
		failures += !ok;
		std::printf("[%s] %d %-26s %s (%.2fs, limit %.0fs%s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
		            o.detail.c_str(), secs, c.time_limit_s, in_time ? "" : ", too slow");
		std::fflush(stdout);
	}
	std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
	return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
