#include "cycpuf/faults.hpp"

#include <algorithm>

#include "cycpuf/rng.hpp"

namespace cycpuf {

std::string to_string(const FaultSite &site)
{
	switch (site.kind) {
	case FaultSite::Kind::ResponseBit:
		return "response_bit[" + std::to_string(site.index) + "]";
	case FaultSite::Kind::FeedbackXorOutput:
		return "feedback_xor[" + std::to_string(site.index) + "]";
	case FaultSite::Kind::EffectiveChallengeBit:
		return "effective_challenge[" + std::to_string(site.index) + "]";
	}
	return "?";
}

std::string to_string(FaultKind kind)
{
	switch (kind) {
	case FaultKind::StuckAt0:
		return "stuck_at_0";
	case FaultKind::StuckAt1:
		return "stuck_at_1";
	case FaultKind::BitFlip:
		return "bit_flip";
	}
	return "?";
}

namespace {

FaultKind fault_kind_from_string(const std::string &s)
{
	if (s == "stuck_at_0")
		return FaultKind::StuckAt0;
	if (s == "stuck_at_1")
		return FaultKind::StuckAt1;
	if (s == "bit_flip")
		return FaultKind::BitFlip;
	throw ConfigError("unknown fault kind \"" + s + "\"");
}

FaultSite::Kind site_kind_from_string(const std::string &s)
{
	if (s == "response_bit")
		return FaultSite::Kind::ResponseBit;
	if (s == "feedback_xor")
		return FaultSite::Kind::FeedbackXorOutput;
	if (s == "effective_challenge")
		return FaultSite::Kind::EffectiveChallengeBit;
	throw ConfigError("unknown fault site kind \"" + s + "\"");
}

std::string site_kind_to_string(FaultSite::Kind k)
{
	switch (k) {
	case FaultSite::Kind::ResponseBit:
		return "response_bit";
	case FaultSite::Kind::FeedbackXorOutput:
		return "feedback_xor";
	case FaultSite::Kind::EffectiveChallengeBit:
		return "effective_challenge";
	}
	return "?";
}

} // namespace

void FaultSpec::validate(const PufInstance &inst, const FeedbackConfig &fb) const
{
	std::vector<FaultSite> seen;
	for (const auto &f : faults) {
		int limit = 0;
		switch (f.site.kind) {
		case FaultSite::Kind::ResponseBit:
			limit = inst.response_width;
			break;
		case FaultSite::Kind::FeedbackXorOutput:
			limit = static_cast<int>(fb.size());
			break;
		case FaultSite::Kind::EffectiveChallengeBit:
			limit = inst.challenge_width;
			break;
		}
		if (f.site.index < 0 || f.site.index >= limit)
			throw ConfigError("FaultSpec: site " + to_string(f.site) + " out of range");
		if (std::find(seen.begin(), seen.end(), f.site) != seen.end())
			throw ConfigError("FaultSpec: duplicate fault at " + to_string(f.site));
		seen.push_back(f.site);
	}
}

FaultSpec sample_fault_spec(const PufInstance &inst, const FeedbackConfig &fb, int count, std::uint64_t seed)
{
	std::vector<FaultSite> sites;
	for (int i = 0; i < inst.response_width; ++i)
		sites.push_back({FaultSite::Kind::ResponseBit, i});
	for (int i = 0; i < static_cast<int>(fb.size()); ++i)
		sites.push_back({FaultSite::Kind::FeedbackXorOutput, i});
	for (int i = 0; i < inst.challenge_width; ++i)
		sites.push_back({FaultSite::Kind::EffectiveChallengeBit, i});

	if (count < 0 || count > static_cast<int>(sites.size()))
		throw ConfigError("sample_fault_spec: count exceeds available sites (" + std::to_string(sites.size()) + ")");

	Rng rng(seed);
	FaultSpec spec;
	for (int i = 0; i < count; ++i) {
		std::size_t j = i + static_cast<std::size_t>(rng.next_below(sites.size() - i));
		std::swap(sites[i], sites[j]);
		FaultKind kind = static_cast<FaultKind>(rng.next_below(3));
		spec.faults.push_back({sites[i], kind});
	}
	spec.validate(inst, fb);
	return spec;
}

nlohmann::json fault_spec_to_json(const FaultSpec &spec)
{
	nlohmann::json faults = nlohmann::json::array();
	for (const auto &f : spec.faults)
		faults.push_back({{"site", site_kind_to_string(f.site.kind)}, {"index", f.site.index}, {"kind", to_string(f.kind)}});
	return nlohmann::json{{"faults", std::move(faults)}};
}

FaultSpec fault_spec_from_json(const nlohmann::json &j)
{
	FaultSpec spec;
	for (const auto &f : j.at("faults")) {
		Fault fault;
		fault.site.kind = site_kind_from_string(f.at("site").get<std::string>());
		fault.site.index = f.at("index").get<int>();
		fault.kind = fault_kind_from_string(f.at("kind").get<std::string>());
		spec.faults.push_back(fault);
	}
	return spec;
}

FaultyCyclicPuf::FaultyCyclicPuf(PufInstance inst, FeedbackConfig fb, FaultSpec spec)
    : inst_(std::move(inst)), fb_(std::move(fb)), spec_(std::move(spec))
{
	fb_.validate(inst_.challenge_width, inst_.response_width);
	spec_.validate(inst_, fb_);
}

Trajectory FaultyCyclicPuf::simulate(const Challenge &ext, int cycles, const EnvCondition &env,
				     std::optional<std::uint64_t> noise_seed) const
{
	if (cycles < 1)
		throw UsageError("FaultyCyclicPuf::simulate: cycles must be >= 1");
	if (static_cast<int>(ext.size()) != inst_.challenge_width)
		throw UsageError("FaultyCyclicPuf::simulate: challenge width mismatch");

	Trajectory traj;
	traj.challenge = ext;
	traj.responses.reserve(cycles);

	ResponseVector prev(inst_.response_width);
	for (int i = 1; i <= cycles; ++i) {
		// Feedback XOR outputs, with taps' faults applied before they
		// reach the challenge inputs.
		Challenge eff = ext;
		for (std::size_t t = 0; t < fb_.taps.size(); ++t) {
			const FeedbackTap &tap = fb_.taps[t];
			int x = ext[tap.ch_idx] ^ prev[tap.resp_idx];
			for (const auto &f : spec_.faults)
				if (f.site.kind == FaultSite::Kind::FeedbackXorOutput && f.site.index == static_cast<int>(t))
					x = apply_fault(x, f.kind);
			eff.set(tap.target_pos, x);
		}
		for (const auto &f : spec_.faults)
			if (f.site.kind == FaultSite::Kind::EffectiveChallengeBit)
				eff.set(f.site.index, apply_fault(eff[f.site.index], f.kind));

		std::optional<std::uint64_t> cycle_seed;
		if (noise_seed)
			cycle_seed = Rng::mix(*noise_seed, static_cast<std::uint64_t>(i));
		ResponseVector resp = eval_acyclic(inst_, eff, env, cycle_seed);
		// Response faults corrupt both the emitted row and the value
		// fed back on the next cycle.
		for (const auto &f : spec_.faults)
			if (f.site.kind == FaultSite::Kind::ResponseBit)
				resp.set(f.site.index, apply_fault(resp[f.site.index], f.kind));

		traj.responses.push_back(resp);
		prev = resp;
	}
	return traj;
}

} // namespace cycpuf
