#pragma once

#include "sketchls/dense_core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sketchls {

enum class ProblemKind { GaussianIncoherent, SpikedCoherent, Consistent, CustomFile };

std::string_view to_string(ProblemKind kind) noexcept;
ProblemKind parse_problem_kind(std::string_view name);

struct ProblemSpec {
	ProblemKind kind = ProblemKind::GaussianIncoherent;
	std::size_t n_rows = 1000;
	std::size_t n_cols = 5;
	std::size_t rhs_cols = 2;
	double noise_scale = 1.0;
	double coherence_target = 0.9;  // spiked-coherent only
	std::uint64_t seed = 1;
	std::string a_path;  // custom-file only
	std::string b_path;

	/// Throws InvalidParameter unless N > r >= 1, n >= 1 and the kind-specific fields are sane.
	void validate() const;
};

struct ProblemMeta {
	std::size_t attempts = 1;                // generation attempts until A was full rank
	std::optional<std::size_t> planted_row;  // spiked-coherent: index of the high-leverage row
};

struct Problem {
	DenseMatrix a;
	DenseMatrix b;
	ProblemMeta meta;
};

/// Stream indices at and above this value are reserved for problem generation.
inline constexpr std::uint64_t kProblemStreamBase = 0x8000000000000000ull;
inline constexpr std::size_t kMaxGenerationAttempts = 8;

/// gaussian-incoherent: A i.i.d. N(0,1), B = A X* + noise G.
/// spiked-coherent: as above, then row 0 of A is rescaled so its leverage equals coherence_target.
/// consistent: B = A X* exactly.
/// custom-file: A and B read from Matrix Market files.
Problem generate_problem(const ProblemSpec& spec);

} // namespace sketchls
