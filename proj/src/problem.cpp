#include "sketchls/problem.hpp"

#include "sketchls/matrix_io.hpp"
#include "sketchls/rng.hpp"

#include <cmath>

namespace sketchls {

std::string_view to_string(ProblemKind kind) noexcept {
	switch (kind) {
	case ProblemKind::GaussianIncoherent: return "gaussian-incoherent";
	case ProblemKind::SpikedCoherent: return "spiked-coherent";
	case ProblemKind::Consistent: return "consistent";
	case ProblemKind::CustomFile: return "custom-file";
	}
	return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
	if (name == "gaussian-incoherent") return ProblemKind::GaussianIncoherent;
	if (name == "spiked-coherent") return ProblemKind::SpikedCoherent;
	if (name == "consistent") return ProblemKind::Consistent;
	if (name == "custom-file") return ProblemKind::CustomFile;
	throw Error(ErrorCode::InvalidParameter, "unknown problem kind '" + std::string(name) + "'");
}

void ProblemSpec::validate() const {
	if (kind == ProblemKind::CustomFile) {
		if (a_path.empty() || b_path.empty())
			throw Error(ErrorCode::InvalidParameter, "custom-file problems need both matrix paths");
		return;
	}
	if (n_cols < 1 || n_rows <= n_cols)
		throw Error(ErrorCode::InvalidParameter, "need N > r >= 1");
	if (rhs_cols < 1) throw Error(ErrorCode::InvalidParameter, "need at least one right-hand side");
	if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
		throw Error(ErrorCode::InvalidParameter, "noise_scale must be a finite nonnegative number");
	if (kind == ProblemKind::SpikedCoherent) {
		const double floor = static_cast<double>(n_cols) / static_cast<double>(n_rows);
		if (!(coherence_target >= floor && coherence_target < 1.0))
			throw Error(ErrorCode::InvalidParameter, "coherence_target must lie in [r/N, 1)");
	}
}

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
	Eigen::MatrixXd m(rows, cols);
	for (Eigen::Index j = 0; j < cols; ++j)
		for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
	return m;
}

// Rescales row `row` so that its leverage becomes `target`. With M the Gram
// matrix of the other rows and h = g^T M^{-1} g, scaling g by t gives leverage
// t^2 h / (1 + t^2 h); solve for t^2.
void plant_leverage(Eigen::MatrixXd& a, Eigen::Index row, double target) {
	const Eigen::RowVectorXd g = a.row(row);
	const Eigen::MatrixXd gram = a.transpose() * a - g.transpose() * g;
	const double h = g * gram.ldlt().solve(g.transpose());
	if (!(h > 0.0)) return;
	const double t2 = target / ((1.0 - target) * h);
	a.row(row) *= std::sqrt(t2);
}

} // namespace

Problem generate_problem(const ProblemSpec& spec) {
	spec.validate();
	if (spec.kind == ProblemKind::CustomFile) {
		DenseMatrix a = read_matrix(spec.a_path);
		DenseMatrix b = read_matrix(spec.b_path);
		if (a.rows() != b.rows())
			throw Error(ErrorCode::DimensionError, "custom A and B have different row counts");
		orthonormal_basis(a);  // full-rank check
		return Problem{std::move(a), std::move(b), ProblemMeta{}};
	}

	const auto n = static_cast<Eigen::Index>(spec.n_rows);
	const auto r = static_cast<Eigen::Index>(spec.n_cols);
	const auto k = static_cast<Eigen::Index>(spec.rhs_cols);
	for (std::size_t attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
		RngStream rng(spec.seed, kProblemStreamBase + attempt);
		Eigen::MatrixXd a = gaussian(n, r, rng);
		ProblemMeta meta;
		meta.attempts = attempt + 1;
		if (spec.kind == ProblemKind::SpikedCoherent) {
			plant_leverage(a, 0, spec.coherence_target);
			meta.planted_row = 0;
		}
		DenseMatrix a_mat(a);
		try {
			orthonormal_basis(a_mat);
		} catch (const Error& e) {
			if (e.code() == ErrorCode::RankDeficient) continue;
			throw;
		}
		const Eigen::MatrixXd x_star = gaussian(r, k, rng);
		Eigen::MatrixXd b = a * x_star;
		if (spec.kind != ProblemKind::Consistent && spec.noise_scale > 0.0)
			b += spec.noise_scale * gaussian(n, k, rng);
		return Problem{std::move(a_mat), DenseMatrix(std::move(b)), meta};
	}
	throw Error(ErrorCode::GenerationFailed, "could not generate a full-rank design matrix after " +
	                                             std::to_string(kMaxGenerationAttempts) + " attempts");
}

} // namespace sketchls
