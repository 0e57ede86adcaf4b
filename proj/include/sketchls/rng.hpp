#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace sketchls {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 64-bit seed is the key; stream_index fills the upper two counter
/// words and a 64-bit block counter the lower two, so every
/// (seed, stream_index) pair addresses a disjoint slice of the counter space.
/// Each block yields two 64-bit outputs: (x1 << 32 | x0), then (x3 << 32 | x2).
///
/// Satisfies UniformRandomBitGenerator. Normal deviates use Box-Muller
/// rather than std::normal_distribution so draws are identical across
/// standard libraries.
class RngStream {
public:
	using result_type = std::uint64_t;
	using Block = std::array<std::uint32_t, 4>;

	static constexpr std::string_view algorithm_id = "philox4x32-10";

	RngStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
		: seed_(seed), stream_index_(stream_index) {}

	static constexpr result_type min() noexcept { return 0; }
	static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

	result_type operator()() noexcept;

	/// Uniform on [0, 1) with 53 random bits.
	double uniform01() noexcept;
	/// Standard normal.
	double normal() noexcept;

	std::uint64_t seed() const noexcept { return seed_; }
	std::uint64_t stream_index() const noexcept { return stream_index_; }
	/// Number of 64-bit words consumed so far.
	std::uint64_t position() const noexcept { return 2 * block_counter_ - (have_second_word_ ? 1 : 0); }

	/// Raw Philox4x32-10 bijection, exposed for known-answer tests.
	static Block philox(Block counter, std::array<std::uint32_t, 2> key) noexcept;

private:
	std::uint64_t seed_;
	std::uint64_t stream_index_;
	std::uint64_t block_counter_ = 0;
	bool have_second_word_ = false;
	std::uint64_t second_word_ = 0;
	bool have_spare_normal_ = false;
	double spare_normal_ = 0.0;
};

} // namespace sketchls
