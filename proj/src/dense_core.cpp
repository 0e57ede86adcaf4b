#include "sketchls/dense_core.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sketchls {

namespace {

void require_shape(Eigen::Index rows, Eigen::Index cols) {
	if (rows <= 0 || cols <= 0)
		throw Error(ErrorCode::DimensionError,
		            "matrix must have positive dimensions, got " + std::to_string(rows) + "x" +
		                std::to_string(cols));
}

void require_finite(const Eigen::MatrixXd& m) {
	if (!m.allFinite())
		throw Error(ErrorCode::NonFiniteValue, "matrix contains NaN or Inf");
}

void require_tall(const DenseMatrix& a) {
	if (a.rows() < a.cols())
		throw Error(ErrorCode::DimensionError,
		            "expected rows >= cols, got " + std::to_string(a.rows()) + "x" +
		                std::to_string(a.cols()));
}

void require_same_rows(const DenseMatrix& a, const DenseMatrix& b) {
	if (a.rows() != b.rows())
		throw Error(ErrorCode::DimensionError,
		            "row mismatch: " + std::to_string(a.rows()) + " vs " + std::to_string(b.rows()));
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major) {
	require_shape(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
	if (column_major.size() != rows * cols)
		throw Error(ErrorCode::DimensionError,
		            "data length " + std::to_string(column_major.size()) + " != rows*cols");
	m_ = Eigen::Map<const Eigen::MatrixXd>(column_major.data(), static_cast<Eigen::Index>(rows),
	                                       static_cast<Eigen::Index>(cols));
	require_finite(m_);
}

DenseMatrix::DenseMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
	require_shape(m_.rows(), m_.cols());
	require_finite(m_);
}

DenseMatrix DenseMatrix::zeros(std::size_t rows, std::size_t cols) {
	return DenseMatrix(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
	return DenseMatrix(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
	const std::size_t n_rows = rows.size();
	const std::size_t n_cols = n_rows ? rows.begin()->size() : 0;
	require_shape(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
	Eigen::MatrixXd m(n_rows, n_cols);
	Eigen::Index i = 0;
	for (const auto& row : rows) {
		if (row.size() != n_cols)
			throw Error(ErrorCode::DimensionError, "ragged row literal");
		Eigen::Index j = 0;
		for (double v : row) m(i, j++) = v;
		++i;
	}
	return DenseMatrix(std::move(m));
}

std::vector<double> DenseMatrix::column_major() const {
	return std::vector<double>(m_.data(), m_.data() + m_.size());
}

OrthonormalBasis::OrthonormalBasis(DenseMatrix q) : q_(std::move(q)) {
	if (q_.cols() > q_.rows())
		throw Error(ErrorCode::DimensionError, "orthonormal basis cannot have more columns than rows");
	const Eigen::MatrixXd gram = q_.eigen().transpose() * q_.eigen();
	const double defect =
	    (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
	if (defect > 1e-10)
		throw Error(ErrorCode::InvalidParameter,
		            "columns are not orthonormal (max |Q^T Q - I| = " + std::to_string(defect) + ")");
}

namespace detail {

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
	// Tall inputs go through QR first so the SVD only sees the small triangular factor.
	if (m.rows() > 2 * m.cols()) {
		Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
		const Eigen::MatrixXd r =
		    qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
		return Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
	}
	return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

bool is_rank_deficient(const Eigen::VectorXd& sigma) {
	if (sigma.size() == 0) return true;
	const double smax = sigma.maxCoeff();
	const double smin = sigma.minCoeff();
	return !(smax > 0.0) || smin <= kRankTolerance * smax;
}

Eigen::MatrixXd full_rank_lstsq(const Eigen::MatrixXd& m, const Eigen::MatrixXd& rhs, ErrorCode code) {
	if (m.rows() < m.cols())
		throw Error(code, "system has fewer rows (" + std::to_string(m.rows()) + ") than unknowns (" +
		                      std::to_string(m.cols()) + ")");
	Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
	const Eigen::MatrixXd r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
	if (is_rank_deficient(Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues()))
		throw Error(code, "matrix is not full column rank");
	return qr.solve(rhs);
}

} // namespace detail

OrthonormalBasis orthonormal_basis(const DenseMatrix& a) {
	require_tall(a);
	const Eigen::MatrixXd& m = a.eigen();
	Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
	const Eigen::MatrixXd r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
	if (detail::is_rank_deficient(Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues()))
		throw Error(ErrorCode::RankDeficient, "matrix is not full column rank");
	Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
	return OrthonormalBasis(DenseMatrix(std::move(q)));
}

LstsqSolution exact_lstsq(const DenseMatrix& a, const DenseMatrix& b) {
	require_tall(a);
	require_same_rows(a, b);
	Eigen::MatrixXd x = detail::full_rank_lstsq(a.eigen(), b.eigen(), ErrorCode::RankDeficient);
	Eigen::MatrixXd perp = b.eigen() - a.eigen() * x;
	const double r2 = perp.squaredNorm();
	return LstsqSolution{DenseMatrix(std::move(x)), r2, DenseMatrix(std::move(perp))};
}

DenseMatrix b_perp(const DenseMatrix& a, const DenseMatrix& b) {
	return exact_lstsq(a, b).b_perp;
}

SpectralSummary spectral_extremes(const DenseMatrix& a) {
	const Eigen::VectorXd sigma = detail::singular_values(a.eigen());
	const double smax = sigma.maxCoeff();
	const double smin = sigma.minCoeff();
	const double kappa = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
	return SpectralSummary{smin, smax, kappa};
}

} // namespace sketchls
