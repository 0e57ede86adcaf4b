#include "sketchls/error.hpp"

namespace sketchls {

std::string_view to_string(ErrorCode code) noexcept {
	switch (code) {
	case ErrorCode::DimensionError: return "DimensionError";
	case ErrorCode::RankDeficient: return "RankDeficient";
	case ErrorCode::SketchRankDeficient: return "SketchRankDeficient";
	case ErrorCode::UnsupportedRow: return "UnsupportedRow";
	case ErrorCode::InvalidSampleCount: return "InvalidSampleCount";
	case ErrorCode::InvalidParameter: return "InvalidParameter";
	case ErrorCode::NonFiniteValue: return "NonFiniteValue";
	case ErrorCode::GenerationFailed: return "GenerationFailed";
	case ErrorCode::ParseError: return "ParseError";
	case ErrorCode::IoError: return "IoError";
	}
	return "Unknown";
}

} // namespace sketchls
