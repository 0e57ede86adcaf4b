#include "sketchls/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace sketchls {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
	throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

std::string lower(std::string s) {
	std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
	return s;
}

bool blank(const std::string& s) {
	return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

template <class T>
bool parse_number(std::string_view tok, T& out) {
	const char* first = tok.data();
	const char* last = tok.data() + tok.size();
	if (first != last && *first == '+') ++first;
	auto [ptr, ec] = std::from_chars(first, last, out);
	return ec == std::errc() && ptr == last;
}

} // namespace

std::string format_double(double v) {
	if (std::isnan(v)) return "nan";
	if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
	std::array<char, 64> buf{};
	auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
	return std::string(buf.data(), ptr);
}

DenseMatrix read_matrix(std::istream& in) {
	std::string line;
	std::size_t line_no = 0;

	if (!std::getline(in, line)) parse_fail(1, "empty file");
	++line_no;
	{
		std::istringstream hs(line);
		std::string banner, object, format, field, symmetry, extra;
		hs >> banner >> object >> format >> field >> symmetry;
		if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "array" ||
		    lower(field) != "real" || lower(symmetry) != "general" || (hs >> extra))
			parse_fail(line_no, "expected header '%%MatrixMarket matrix array real general'");
	}

	std::size_t rows = 0, cols = 0;
	bool have_size = false;
	std::vector<double> values;
	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (blank(line) || line.front() == '%') continue;
		std::istringstream ls(line);
		std::string tok;
		if (!have_size) {
			std::string r, c;
			if (!(ls >> r >> c) || (ls >> tok) || !parse_number(r, rows) || !parse_number(c, cols) || rows == 0 ||
			    cols == 0)
				parse_fail(line_no, "expected two positive integers 'rows cols'");
			have_size = true;
			values.reserve(rows * cols);
			continue;
		}
		while (ls >> tok) {
			double v = 0.0;
			if (!parse_number(tok, v)) parse_fail(line_no, "invalid number '" + tok + "'");
			if (!std::isfinite(v)) parse_fail(line_no, "non-finite value '" + tok + "'");
			if (values.size() == rows * cols) parse_fail(line_no, "more values than rows*cols");
			values.push_back(v);
		}
	}
	if (!have_size) parse_fail(line_no + 1, "missing size line");
	if (values.size() != rows * cols)
		parse_fail(line_no + 1, "expected " + std::to_string(rows * cols) + " values, found " +
		                            std::to_string(values.size()));
	return DenseMatrix(rows, cols, std::move(values));
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
	std::ifstream in(path);
	if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
	return read_matrix(in);
}

void write_matrix(std::ostream& out, const DenseMatrix& m) {
	out << "%%MatrixMarket matrix array real general\n";
	out << m.rows() << ' ' << m.cols() << '\n';
	std::array<char, 64> buf{};
	const Eigen::MatrixXd& e = m.eigen();
	for (Eigen::Index k = 0; k < e.size(); ++k) {
		auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), e.data()[k],
		                               std::chars_format::scientific, 16);
		out.write(buf.data(), ptr - buf.data());
		out.put('\n');
	}
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
	std::ofstream out(path);
	if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
	write_matrix(out, m);
	if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

} // namespace sketchls
