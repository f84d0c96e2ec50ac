#include "cycpuf/cyclic.hpp"

#include <algorithm>

#include "cycpuf/rng.hpp"

namespace cycpuf {

void FeedbackConfig::validate(int challenge_width, int response_width) const
{
	std::vector<char> driven(challenge_width, 0);
	for (const auto &t : taps) {
		if (t.resp_idx < 0 || t.resp_idx >= response_width)
			throw ConfigError("FeedbackConfig: resp_idx out of range");
		if (t.ch_idx < 0 || t.ch_idx >= challenge_width)
			throw ConfigError("FeedbackConfig: ch_idx out of range");
		if (t.target_pos < 0 || t.target_pos >= challenge_width)
			throw ConfigError("FeedbackConfig: target_pos out of range");
		if (driven[t.target_pos])
			throw ConfigError("FeedbackConfig: duplicate driver for challenge position " +
					  std::to_string(t.target_pos));
		driven[t.target_pos] = 1;
	}
}

FeedbackConfig FeedbackConfig::sample(int challenge_width, int response_width, int count, std::uint64_t seed)
{
	if (count < 0 || count > challenge_width)
		throw ConfigError("FeedbackConfig::sample: count must be in [0, challenge_width]");
	Rng rng(seed);
	// Partial Fisher-Yates picks `count` distinct target positions.
	std::vector<int> positions(challenge_width);
	for (int i = 0; i < challenge_width; ++i)
		positions[i] = i;
	FeedbackConfig fb;
	for (int i = 0; i < count; ++i) {
		std::size_t j = i + static_cast<std::size_t>(rng.next_below(challenge_width - i));
		std::swap(positions[i], positions[j]);
		FeedbackTap tap;
		tap.target_pos = positions[i];
		tap.resp_idx = static_cast<int>(rng.next_below(response_width));
		tap.ch_idx = static_cast<int>(rng.next_below(challenge_width));
		fb.taps.push_back(tap);
	}
	fb.validate(challenge_width, response_width);
	return fb;
}

nlohmann::json feedback_to_json(const FeedbackConfig &fb)
{
	nlohmann::json taps = nlohmann::json::array();
	for (const auto &t : fb.taps)
		taps.push_back({{"resp", t.resp_idx}, {"ch", t.ch_idx}, {"pos", t.target_pos}});
	return nlohmann::json{{"taps", std::move(taps)}};
}

FeedbackConfig feedback_from_json(const nlohmann::json &j)
{
	FeedbackConfig fb;
	for (const auto &t : j.at("taps"))
		fb.taps.push_back({t.at("resp").get<int>(), t.at("ch").get<int>(), t.at("pos").get<int>()});
	return fb;
}

Challenge effective_challenge(const Challenge &ext, const ResponseVector &prev_resp, const FeedbackConfig &fb)
{
	Challenge result = ext;
	for (const auto &t : fb.taps) {
		if (static_cast<std::size_t>(t.ch_idx) >= ext.size() || static_cast<std::size_t>(t.target_pos) >= ext.size())
			throw ConfigError("effective_challenge: tap challenge index out of range");
		if (static_cast<std::size_t>(t.resp_idx) >= prev_resp.size())
			throw ConfigError("effective_challenge: tap response index out of range");
		result.set(t.target_pos, ext[t.ch_idx] ^ prev_resp[t.resp_idx]);
	}
	return result;
}

Trajectory simulate_trajectory(const PufInstance &inst, const FeedbackConfig &fb, const Challenge &ext, int cycles,
			       const EnvCondition &env, std::optional<std::uint64_t> noise_seed)
{
	if (cycles < 1)
		throw UsageError("simulate_trajectory: cycles must be >= 1");
	fb.validate(inst.challenge_width, inst.response_width);

	Trajectory traj;
	traj.challenge = ext;
	traj.responses.reserve(cycles);

	ResponseVector prev(inst.response_width); // power-on feedback state: all zeros
	for (int i = 1; i <= cycles; ++i) {
		Challenge eff = effective_challenge(ext, prev, fb);
		std::optional<std::uint64_t> cycle_seed;
		if (noise_seed)
			cycle_seed = Rng::mix(*noise_seed, static_cast<std::uint64_t>(i));
		prev = eval_acyclic(inst, eff, env, cycle_seed);
		traj.responses.push_back(prev);
	}
	return traj;
}

ResponseMode classify_mode(const Trajectory &traj)
{
	const auto &r = traj.responses;
	for (std::size_t j = 1; j < r.size(); ++j) {
		for (std::size_t i = 0; i < j; ++i) {
			if (r[j] == r[i]) {
				ResponseMode mode;
				mode.period = static_cast<int>(j - i);
				mode.transient_len = static_cast<int>(i);
				if (mode.period == 1)
					mode.kind = (i == 0) ? ResponseMode::Kind::Binary : ResponseMode::Kind::SteadyState;
				else
					mode.kind = ResponseMode::Kind::Oscillating;
				return mode;
			}
		}
	}
	return ResponseMode{ResponseMode::Kind::PseudoRandom, 0, 0};
}

std::string to_string(const ResponseMode &mode)
{
	switch (mode.kind) {
	case ResponseMode::Kind::Binary:
		return "binary";
	case ResponseMode::Kind::SteadyState:
		return "steady_state(transient=" + std::to_string(mode.transient_len) + ")";
	case ResponseMode::Kind::Oscillating:
		return "oscillating(transient=" + std::to_string(mode.transient_len) +
		       ",period=" + std::to_string(mode.period) + ")";
	case ResponseMode::Kind::PseudoRandom:
		return "pseudo_random";
	}
	return "?";
}

Crm collect_crm(const PufInstance &inst, const FeedbackConfig &fb, const Challenge &ext, int cycles, const EnvCondition &env)
{
	Trajectory traj = simulate_trajectory(inst, fb, ext, cycles, env, std::nullopt);
	Crm crm;
	crm.challenge = ext;
	crm.cycles = cycles;
	crm.mode = classify_mode(traj);
	for (const auto &resp : traj.responses)
		if (std::find(crm.response_set.begin(), crm.response_set.end(), resp) == crm.response_set.end())
			crm.response_set.push_back(resp);
	return crm;
}

namespace {

nlohmann::json mode_to_json(const ResponseMode &mode)
{
	nlohmann::json j;
	switch (mode.kind) {
	case ResponseMode::Kind::Binary:
		j["kind"] = "binary";
		break;
	case ResponseMode::Kind::SteadyState:
		j["kind"] = "steady_state";
		j["transient_len"] = mode.transient_len;
		break;
	case ResponseMode::Kind::Oscillating:
		j["kind"] = "oscillating";
		j["transient_len"] = mode.transient_len;
		j["period"] = mode.period;
		break;
	case ResponseMode::Kind::PseudoRandom:
		j["kind"] = "pseudo_random";
		break;
	}
	return j;
}

} // namespace

nlohmann::json trajectory_to_json(const Trajectory &traj)
{
	nlohmann::json responses = nlohmann::json::array();
	for (const auto &r : traj.responses)
		responses.push_back(r.to_string());
	return nlohmann::json{{"challenge", traj.challenge.to_string()},
			      {"cycles", traj.cycles()},
			      {"responses", std::move(responses)}};
}

nlohmann::json crm_to_json(const Crm &crm)
{
	nlohmann::json responses = nlohmann::json::array();
	for (const auto &r : crm.response_set)
		responses.push_back(r.to_string());
	return nlohmann::json{{"challenge", crm.challenge.to_string()},
			      {"cycles", crm.cycles},
			      {"mode", mode_to_json(crm.mode)},
			      {"responses", std::move(responses)}};
}

} // namespace cycpuf
