#include "sketchls/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <string>

namespace sketchls {

namespace {

std::string_view trim(std::string_view s) {
	const auto first = s.find_first_not_of(" \t\r");
	if (first == std::string_view::npos) return {};
	const auto last = s.find_last_not_of(" \t\r");
	return s.substr(first, last - first + 1);
}

template <class T>
T number(std::string_view key, std::string_view value) {
	T out{};
	auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
	if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
		throw Error(ErrorCode::InvalidParameter,
		            "invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
	return out;
}

} // namespace

void apply_setting(TrialConfig& cfg, std::string_view key, std::string_view value) {
	ProblemSpec& p = cfg.problem;
	if (key == "kind") p.kind = parse_problem_kind(value);
	else if (key == "rows") p.n_rows = number<std::size_t>(key, value);
	else if (key == "cols") p.n_cols = number<std::size_t>(key, value);
	else if (key == "rhs") p.rhs_cols = number<std::size_t>(key, value);
	else if (key == "noise") p.noise_scale = number<double>(key, value);
	else if (key == "coherence") p.coherence_target = number<double>(key, value);
	else if (key == "problem_seed") p.seed = number<std::uint64_t>(key, value);
	else if (key == "a_file") p.a_path = std::string(value);
	else if (key == "b_file") p.b_path = std::string(value);
	else if (key == "dist") cfg.distribution = DistributionChoice::parse(value);
	else if (key == "samples") cfg.samples = SampleRule::parse(value);
	else if (key == "epsilon") cfg.target = AccuracyTarget(number<double>(key, value), cfg.target.delta());
	else if (key == "delta") cfg.target = AccuracyTarget(cfg.target.epsilon(), number<double>(key, value));
	else if (key == "trials") cfg.n_trials = number<std::size_t>(key, value);
	else if (key == "seed") cfg.master_seed = number<std::uint64_t>(key, value);
	else if (key == "threads") cfg.threads = number<std::size_t>(key, value);
	else if (key == "max_samples") cfg.max_samples = number<std::uint64_t>(key, value);
	else throw Error(ErrorCode::InvalidParameter, "unknown key '" + std::string(key) + "'");
}

TrialConfig parse_config(std::istream& in, TrialConfig cfg) {
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		std::string_view view = line;
		if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
		view = trim(view);
		if (view.empty()) continue;
		const auto eq = view.find('=');
		if (eq == std::string_view::npos)
			throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
		try {
			apply_setting(cfg, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
		} catch (const Error& e) {
			throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
		}
	}
	return cfg;
}

TrialConfig load_config(const std::filesystem::path& path, TrialConfig base) {
	std::ifstream in(path);
	if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
	return parse_config(in, std::move(base));
}

} // namespace sketchls
