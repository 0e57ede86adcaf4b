#pragma once

#include "sketchls/error.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace sketchls {

/// Column-major real matrix with at least one row and one column and only
/// finite entries. Thin value wrapper over Eigen::MatrixXd; the invariants are
/// checked once at construction so downstream code can use eigen() freely.
class DenseMatrix {
public:
	DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);
	explicit DenseMatrix(Eigen::MatrixXd m);

	static DenseMatrix zeros(std::size_t rows, std::size_t cols);
	static DenseMatrix identity(std::size_t n);
	/// Row-wise literal, convenient for small fixed inputs.
	static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

	std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
	std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }
	double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

	const Eigen::MatrixXd& eigen() const noexcept { return m_; }
	std::vector<double> column_major() const;

	double frobenius_norm_sq() const { return m_.squaredNorm(); }

	friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
		return a.m_.rows() == b.m_.rows() && a.m_.cols() == b.m_.cols() && a.m_ == b.m_;
	}

private:
	Eigen::MatrixXd m_;
};

/// Orthonormal basis of col(A). q().rows() = N, q().cols() = source_rank.
class OrthonormalBasis {
public:
	explicit OrthonormalBasis(DenseMatrix q);

	const DenseMatrix& q() const noexcept { return q_; }
	std::size_t source_rank() const noexcept { return q_.cols(); }

private:
	DenseMatrix q_;
};

struct LstsqSolution {
	DenseMatrix x_opt;
	double residual_sq;
	DenseMatrix b_perp;
};

struct SpectralSummary {
	double sigma_min;
	double sigma_max;
	double kappa; // +inf when sigma_min == 0
};

/// Full-rank threshold: sigma_min(A) must exceed rank_tol * sigma_max(A).
inline constexpr double kRankTolerance = 1e-10;

OrthonormalBasis orthonormal_basis(const DenseMatrix& a);
LstsqSolution exact_lstsq(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix b_perp(const DenseMatrix& a, const DenseMatrix& b);
SpectralSummary spectral_extremes(const DenseMatrix& a);

namespace detail {

// Eigen-level helpers shared by the modules; inputs are assumed finite.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);
bool is_rank_deficient(const Eigen::VectorXd& sigma);
// Throws `code` (RankDeficient or SketchRankDeficient) when m is not full column rank.
Eigen::MatrixXd full_rank_lstsq(const Eigen::MatrixXd& m, const Eigen::MatrixXd& rhs, ErrorCode code);

} // namespace detail

} // namespace sketchls
