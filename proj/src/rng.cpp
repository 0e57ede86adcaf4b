#include "sketchls/rng.hpp"

#include <cmath>
#include <numbers>

namespace sketchls {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
	const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
	hi = static_cast<std::uint32_t>(p >> 32);
	lo = static_cast<std::uint32_t>(p);
}

} // namespace

RngStream::Block RngStream::philox(Block ctr, std::array<std::uint32_t, 2> key) noexcept {
	for (int round = 0; round < 10; ++round) {
		if (round > 0) {
			key[0] += kWeyl0;
			key[1] += kWeyl1;
		}
		std::uint32_t hi0, lo0, hi1, lo1;
		mulhilo(kMul0, ctr[0], hi0, lo0);
		mulhilo(kMul1, ctr[2], hi1, lo1);
		ctr = Block{hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
	}
	return ctr;
}

RngStream::result_type RngStream::operator()() noexcept {
	if (have_second_word_) {
		have_second_word_ = false;
		return second_word_;
	}
	const Block ctr{static_cast<std::uint32_t>(block_counter_), static_cast<std::uint32_t>(block_counter_ >> 32),
	                static_cast<std::uint32_t>(stream_index_), static_cast<std::uint32_t>(stream_index_ >> 32)};
	const Block out = philox(ctr, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
	++block_counter_;
	second_word_ = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
	have_second_word_ = true;
	return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double RngStream::uniform01() noexcept {
	return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
	if (have_spare_normal_) {
		have_spare_normal_ = false;
		return spare_normal_;
	}
	// u1 in (0, 1] keeps the log finite.
	const double u1 = static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
	const double u2 = uniform01();
	const double radius = std::sqrt(-2.0 * std::log(u1));
	const double angle = 2.0 * std::numbers::pi * u2;
	spare_normal_ = radius * std::sin(angle);
	have_spare_normal_ = true;
	return radius * std::cos(angle);
}

} // namespace sketchls
