#include <doctest.h>

#include <map>

#include "cycpuf/cyclic.hpp"
#include "cycpuf/rng.hpp"

using namespace cycpuf;

namespace {

Trajectory make_traj(const std::vector<std::string> &bits)
{
	Trajectory t;
	t.challenge = Challenge::from_string("0");
	for (const auto &s : bits)
		t.responses.push_back(ResponseVector::from_string(s));
	return t;
}

} // namespace

TEST_CASE("effective_challenge XOR wiring")
{
	SUBCASE("no taps passes the external challenge through")
	{
		Challenge ext = Challenge::from_string("1011");
		CHECK(effective_challenge(ext, ResponseVector(2), FeedbackConfig{}) == ext);
	}
	SUBCASE("all-zero previous response copies the source bits")
	{
		Challenge ext = Challenge::from_string("1010");
		FeedbackConfig fb{{{0, 0, 2}, {1, 3, 0}}};
		Challenge eff = effective_challenge(ext, ResponseVector(2), fb);
		CHECK(eff[2] == ext[0]);
		CHECK(eff[0] == ext[3]);
		CHECK(eff[1] == ext[1]);
		CHECK(eff[3] == ext[3]);
	}
	SUBCASE("pinned bit order: MSB-first, index 0 leftmost")
	{
		// ext = 1010, tap routes resp 0 XOR ch 0 into position 3;
		// prev response 1xxx: position 3 becomes 1 XOR 1 = 0.
		Challenge ext = Challenge::from_string("1010");
		FeedbackConfig fb{{{0, 0, 3}}};
		ResponseVector prev = ResponseVector::from_string("1000");
		CHECK(effective_challenge(ext, prev, fb).to_string() == "1010");
		// flip the fed-back response bit: position 3 becomes 1 XOR 0 = 1
		CHECK(effective_challenge(ext, ResponseVector::from_string("0000"), fb).to_string() == "1011");
	}
	SUBCASE("out-of-range taps are configuration errors")
	{
		Challenge ext = Challenge::from_string("1010");
		CHECK_THROWS_AS(effective_challenge(ext, ResponseVector(1), FeedbackConfig{{{0, 0, 7}}}), ConfigError);
		CHECK_THROWS_AS(effective_challenge(ext, ResponseVector(1), FeedbackConfig{{{3, 0, 1}}}), ConfigError);
	}
}

TEST_CASE("feedback config validation")
{
	FeedbackConfig dup{{{0, 0, 1}, {0, 2, 1}}};
	CHECK_THROWS_AS(dup.validate(4, 1), ConfigError); // two drivers, one position
	CHECK_THROWS_AS(FeedbackConfig::sample(4, 1, 5, 1), ConfigError);
	FeedbackConfig ok = FeedbackConfig::sample(8, 2, 8, 9);
	CHECK(ok.size() == 8);
}

TEST_CASE("empty feedback reduces to the acyclic PUF")
{
	VariationModel vm;
	PufInstance inst = sample_instance(PufCategory::Butterfly, 8, 3, vm, 1, 2);
	for (std::uint64_t v = 0; v < 256; ++v) {
		Challenge ch = Challenge::from_uint(v, 8);
		Trajectory traj = simulate_trajectory(inst, FeedbackConfig{}, ch, 6);
		ResponseVector acyclic = eval_acyclic(inst, ch);
		for (const auto &r : traj.responses)
			CHECK(r == acyclic);
		CHECK(classify_mode(traj).kind == ResponseMode::Kind::Binary);
	}
}

TEST_CASE("a rigged single-stage loop alternates with period 2")
{
	// response equals the driven challenge bit: straight pair favors the
	// bottom rail (bit 0), crossed pair favors the top rail (bit 1)
	PufInstance inst;
	inst.category = PufCategory::Arbiter;
	inst.challenge_width = 1;
	inst.response_width = 1;
	ArbiterParams p;
	p.chains = {{{2.0, 1.0, 1.0, 2.0}}}; // ts, tc, bs, bc
	inst.params = p;
	CHECK(eval_acyclic(inst, Challenge::from_string("0"))[0] == 0);
	CHECK(eval_acyclic(inst, Challenge::from_string("1"))[0] == 1);

	FeedbackConfig fb{{{0, 0, 0}}};
	Trajectory traj = simulate_trajectory(inst, fb, Challenge::from_string("1"), 6);
	// power-on 0: cycle 1 sees 1^0=1, then the response feeds back
	std::vector<int> expect = {1, 0, 1, 0, 1, 0};
	for (int i = 0; i < 6; ++i)
		CHECK(traj.responses[i][0] == expect[i]);
	ResponseMode mode = classify_mode(traj);
	CHECK(mode.kind == ResponseMode::Kind::Oscillating);
	CHECK(mode.period == 2);
	CHECK(mode.transient_len == 0);
}

TEST_CASE("classifier labels the four modes")
{
	CHECK(classify_mode(make_traj({"0110", "0110", "0110", "0110"})) ==
	      ResponseMode{ResponseMode::Kind::Binary, 0, 1});
	CHECK(classify_mode(make_traj({"0001", "0010", "0100", "0100", "0100"})) ==
	      ResponseMode{ResponseMode::Kind::SteadyState, 2, 1});
	CHECK(classify_mode(make_traj({"0001", "0010", "0001", "0010", "0001"})) ==
	      ResponseMode{ResponseMode::Kind::Oscillating, 0, 2});
	// 8-bit, 20 distinct vectors: no recurrence in the window
	std::vector<std::string> distinct;
	for (std::uint64_t v = 0; v < 20; ++v)
		distinct.push_back(BitVec::from_uint(v * 3 + 1, 8).to_string());
	CHECK(classify_mode(make_traj(distinct)).kind == ResponseMode::Kind::PseudoRandom);
}

TEST_CASE("classification replays: transient plus cycle reproduces the trajectory")
{
	VariationModel vm;
	Rng rng(31337);
	for (int trial = 0; trial < 30; ++trial) {
		PufInstance inst = sample_instance(PufCategory::Arbiter, 6, 3, vm, 1000 + trial, 2000 + trial);
		FeedbackConfig fb = FeedbackConfig::sample(6, 3, 1 + trial % 6, 3000 + trial);
		Challenge ch(6);
		for (int b = 0; b < 6; ++b)
			ch.set(b, static_cast<int>(rng.next_u64() & 1u));
		Trajectory traj = simulate_trajectory(inst, fb, ch, 40);
		ResponseMode mode = classify_mode(traj);
		if (mode.kind == ResponseMode::Kind::PseudoRandom)
			continue;
		// preperiod + period never exceeds the response state space
		CHECK(mode.transient_len + mode.period <= 1 << 3);
		for (int i = mode.transient_len; i + mode.period < traj.cycles(); ++i)
			CHECK(traj.responses[i] == traj.responses[i + mode.period]);
	}
}

TEST_CASE("collect_crm gathers distinct responses in first-appearance order")
{
	PufInstance inst;
	inst.category = PufCategory::Arbiter;
	inst.challenge_width = 1;
	inst.response_width = 1;
	ArbiterParams p;
	p.chains = {{{2.0, 1.0, 1.0, 2.0}}};
	inst.params = p;

	SUBCASE("binary trajectory yields a single response")
	{
		Crm crm = collect_crm(inst, FeedbackConfig{}, Challenge::from_string("1"), 8);
		CHECK(crm.mode.kind == ResponseMode::Kind::Binary);
		CHECK(crm.response_set.size() == 1);
	}
	SUBCASE("period-2 oscillation yields exactly two")
	{
		FeedbackConfig fb{{{0, 0, 0}}};
		Crm crm = collect_crm(inst, fb, Challenge::from_string("1"), 8);
		CHECK(crm.mode.kind == ResponseMode::Kind::Oscillating);
		REQUIRE(crm.response_set.size() == 2);
		CHECK(crm.response_set[0].to_string() == "1");
		CHECK(crm.response_set[1].to_string() == "0");
	}
}

TEST_CASE("seeded 64-bit cyclic arbiter mode histogram (regression)")
{
	PufInstance inst = sample_instance(PufCategory::Arbiter, 64, 1, VariationModel{}, 101, 202);
	FeedbackConfig fb = FeedbackConfig::sample(64, 1, 4, 303);
	Rng rng(404);
	std::map<ResponseMode::Kind, int> hist;
	for (int c = 0; c < 1000; ++c) {
		Challenge ch(64);
		for (int b = 0; b < 64; ++b)
			ch.set(b, static_cast<int>(rng.next_u64() & 1u));
		hist[collect_crm(inst, fb, ch, 64).mode.kind]++;
	}
	CHECK(hist.size() >= 2); // at least two distinct modes show up
	CHECK(hist[ResponseMode::Kind::Binary] == 832);
	CHECK(hist[ResponseMode::Kind::Oscillating] == 168);
}

TEST_CASE("trajectory determinism and JSON shape")
{
	VariationModel vm;
	PufInstance inst = sample_instance(PufCategory::RingOscillator, 6, 2, vm, 5, 6);
	FeedbackConfig fb = FeedbackConfig::sample(6, 2, 3, 7);
	Challenge ch = Challenge::from_string("110010");

	Trajectory a = simulate_trajectory(inst, fb, ch, 16, EnvCondition{}, 909);
	Trajectory b = simulate_trajectory(inst, fb, ch, 16, EnvCondition{}, 909);
	CHECK(a.responses == b.responses);

	Crm crm = collect_crm(inst, fb, ch, 16);
	nlohmann::json j = crm_to_json(crm);
	CHECK(j.at("challenge") == "110010");
	CHECK(j.at("cycles") == 16);
	CHECK(j.at("mode").contains("kind"));
	CHECK(j.at("responses").size() == crm.response_set.size());
}
