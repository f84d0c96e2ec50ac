#include <doctest.h>

#include <cmath>

#include "cycpuf/metrics.hpp"
#include "cycpuf/puf.hpp"
#include "cycpuf/rng.hpp"

#include "../support/arbiter_linear_oracle.hpp"

using namespace cycpuf;

namespace {

/// 1-stage arbiter with hand-picked delays; challenge bit 0 selects the
/// straight pair, 1 the crossed pair.
PufInstance one_stage_arbiter(double ts, double tc, double bs, double bc)
{
	PufInstance inst;
	inst.category = PufCategory::Arbiter;
	inst.challenge_width = 1;
	inst.response_width = 1;
	inst.instance_id = "handmade";
	ArbiterParams p;
	p.chains = {{{ts, tc, bs, bc}}};
	inst.params = p;
	return inst;
}

} // namespace

TEST_CASE("sampling is deterministic in seeds")
{
	VariationModel vm;
	PufInstance a = sample_instance(PufCategory::Arbiter, 4, 4, vm, 11, 22);
	PufInstance b = sample_instance(PufCategory::Arbiter, 4, 4, vm, 11, 22);
	const auto &pa = std::get<ArbiterParams>(a.params);
	const auto &pb = std::get<ArbiterParams>(b.params);
	for (int bit = 0; bit < 4; ++bit)
		for (int k = 0; k < 4; ++k) {
			CHECK(pa.chains[bit][k].top_straight == pb.chains[bit][k].top_straight);
			CHECK(pa.chains[bit][k].top_cross == pb.chains[bit][k].top_cross);
			CHECK(pa.chains[bit][k].bottom_straight == pb.chains[bit][k].bottom_straight);
			CHECK(pa.chains[bit][k].bottom_cross == pb.chains[bit][k].bottom_cross);
		}
}

TEST_CASE("zero variance collapses a lot onto identical instances")
{
	VariationModel vm{1.0, 0.0, 0.0, 0.0};
	PufInstance a = sample_instance(PufCategory::Arbiter, 4, 4, vm, 7, 1);
	PufInstance b = sample_instance(PufCategory::Arbiter, 4, 4, vm, 7, 2);
	for (std::uint64_t v = 0; v < 16; ++v) {
		Challenge ch = Challenge::from_uint(v, 4);
		CHECK(eval_acyclic(a, ch) == eval_acyclic(b, ch));
	}
	// and the delays themselves are exactly mu
	const auto &pa = std::get<ArbiterParams>(a.params);
	CHECK(pa.chains[0][0].top_straight == 1.0);
}

TEST_CASE("dominant systematic bias makes instances agree")
{
	// brute-force population check: 10 instances, 1000 challenges
	VariationModel vm{1.0, 0.005, 0.5, 0.005};
	std::vector<PufInstance> lot;
	for (int i = 0; i < 10; ++i)
		lot.push_back(sample_instance(PufCategory::Arbiter, 64, 1, vm, 99, 1000 + i));
	Rng rng(4242);
	long long agree = 0, total = 0;
	for (int c = 0; c < 1000; ++c) {
		Challenge ch(64);
		for (int b = 0; b < 64; ++b)
			ch.set(b, static_cast<int>(rng.next_u64() & 1u));
		std::vector<int> bits;
		for (const auto &inst : lot)
			bits.push_back(eval_acyclic(inst, ch)[0]);
		for (std::size_t i = 0; i < bits.size(); ++i)
			for (std::size_t j = i + 1; j < bits.size(); ++j) {
				agree += bits[i] == bits[j];
				++total;
			}
	}
	double pct = 100.0 * static_cast<double>(agree) / static_cast<double>(total);
	CHECK(pct > 80.0);
}

TEST_CASE("arbiter race basics")
{
	SUBCASE("strictly faster top path wins")
	{
		PufInstance inst = one_stage_arbiter(1.0, 1.0, 2.0, 2.0);
		CHECK(eval_acyclic(inst, Challenge::from_string("0"))[0] == 1);
		CHECK(eval_acyclic(inst, Challenge::from_string("1"))[0] == 1);
	}
	SUBCASE("exact tie resolves to 0")
	{
		PufInstance inst = one_stage_arbiter(1.5, 1.5, 1.5, 1.5);
		CHECK(eval_acyclic(inst, Challenge::from_string("0"))[0] == 0);
		CHECK(eval_acyclic(inst, Challenge::from_string("1"))[0] == 0);
	}
	SUBCASE("challenge width must match")
	{
		PufInstance inst = one_stage_arbiter(1.0, 1.0, 2.0, 2.0);
		CHECK_THROWS_AS(eval_acyclic(inst, Challenge::from_string("01")), UsageError);
	}
}

TEST_CASE("ring oscillator compares periods")
{
	PufInstance inst;
	inst.category = PufCategory::RingOscillator;
	inst.challenge_width = 2;
	inst.response_width = 1;
	RingOscillatorParams p;
	// ring A selected delays {1.0, 1.0}; ring B {1.0, 1.1} under sel=0
	p.ring_a = {{{1.0, 9.0}, {1.0, 9.0}}};
	p.ring_b = {{{1.0, 9.0}, {1.1, 9.0}}};
	inst.params = p;
	CHECK(eval_acyclic(inst, Challenge::from_string("00"))[0] == 1); // period 4.0 < 4.2
}

TEST_CASE("structural race equals the additive linear model on all challenges")
{
	// n_c = 4, exhaustive over 16 challenges, several instances
	VariationModel vm{1.0, 0.08, 0.02, 0.0};
	for (std::uint64_t seed = 1; seed <= 5; ++seed) {
		PufInstance inst = sample_instance(PufCategory::Arbiter, 4, 2, vm, seed, seed * 17);
		const auto &params = std::get<ArbiterParams>(inst.params);
		for (std::uint64_t v = 0; v < 16; ++v) {
			Challenge ch = Challenge::from_uint(v, 4);
			ResponseVector r = eval_acyclic(inst, ch);
			for (int bit = 0; bit < 2; ++bit)
				CHECK(r[bit] == cycpuf::testing::arbiter_linear_response(params, bit, ch));
		}
	}
}

TEST_CASE("noiseless responses are scale invariant")
{
	VariationModel vm;
	for (auto category : {PufCategory::Arbiter, PufCategory::RingOscillator, PufCategory::Butterfly}) {
		PufInstance inst = sample_instance(category, 6, 3, vm, 3, 4);
		Rng rng(77);
		for (int c = 0; c < 50; ++c) {
			Challenge ch(6);
			for (int b = 0; b < 6; ++b)
				ch.set(b, static_cast<int>(rng.next_u64() & 1u));
			ResponseVector nominal = eval_acyclic(inst, ch);
			for (double scale : {0.25, 0.5, 2.0, 10.0})
				CHECK(eval_acyclic(inst, ch, EnvCondition{scale, "x"}) == nominal);
		}
	}
}

TEST_CASE("bit-flip rate is monotone in jitter")
{
	PufInstance base = sample_instance(PufCategory::Arbiter, 8, 1, VariationModel{1.0, 0.05, 0.0, 0.0}, 5, 6);
	Challenge ch = Challenge::from_string("10011010");
	ResponseVector ref = eval_acyclic(base, ch);

	double rates[3];
	double sigmas[3] = {0.002, 0.01, 0.05};
	for (int s = 0; s < 3; ++s) {
		PufInstance inst = base;
		inst.variation.jitter_sigma = sigmas[s];
		int flips = 0;
		for (int i = 0; i < 10000; ++i)
			flips += eval_acyclic(inst, ch, EnvCondition{}, Rng::mix(1234, i))[0] != ref[0];
		rates[s] = flips / 10000.0;
	}
	CHECK(rates[0] <= rates[1]);
	CHECK(rates[1] <= rates[2]);
}

TEST_CASE("identical seeds give identical evaluations, noise included")
{
	VariationModel vm;
	PufInstance inst = sample_instance(PufCategory::Butterfly, 16, 4, vm, 8, 9);
	Challenge ch = Challenge::from_uint(0xBEEF, 16);
	CHECK(eval_acyclic(inst, ch, EnvCondition{}, 555) == eval_acyclic(inst, ch, EnvCondition{}, 555));
	CHECK(eval_acyclic(inst, ch) == eval_acyclic(inst, ch));
}

TEST_CASE("instance JSON round trip preserves parameters and behavior")
{
	VariationModel vm{1.0, 0.07, 0.11, 0.003};
	for (auto category : {PufCategory::Arbiter, PufCategory::RingOscillator, PufCategory::Butterfly}) {
		PufInstance inst = sample_instance(category, 5, 3, vm, 21, 22);
		nlohmann::json j = instance_to_json(inst);
		PufInstance back = instance_from_json(j);
		CHECK(back.instance_id == inst.instance_id);
		CHECK(instance_to_json(back).dump() == j.dump()); // byte-identical re-serialization
		for (std::uint64_t v = 0; v < 32; ++v) {
			Challenge ch = Challenge::from_uint(v, 5);
			CHECK(eval_acyclic(back, ch) == eval_acyclic(inst, ch));
			CHECK(eval_acyclic(back, ch, EnvCondition{}, v) == eval_acyclic(inst, ch, EnvCondition{}, v));
		}
	}
}

TEST_CASE("bad construction parameters are configuration errors")
{
	VariationModel vm;
	CHECK_THROWS_AS(sample_instance(PufCategory::Arbiter, 0, 1, vm, 1, 2), ConfigError);
	CHECK_THROWS_AS(sample_instance(PufCategory::Arbiter, 1, 0, vm, 1, 2), ConfigError);
	VariationModel bad_mu;
	bad_mu.mu = 0.0;
	CHECK_THROWS_AS(sample_instance(PufCategory::Arbiter, 4, 1, bad_mu, 1, 2), ConfigError);
	VariationModel bad_sigma;
	bad_sigma.sigma_random = -0.1;
	CHECK_THROWS_AS(sample_instance(PufCategory::Arbiter, 4, 1, bad_sigma, 1, 2), ConfigError);
}
