#include <doctest.h>

#include <string>

#include "cycpuf/rtlgen.hpp"

using namespace cycpuf;

namespace {

int count_occurrences(const std::string &text, const std::string &needle)
{
	int n = 0;
	std::size_t pos = 0;
	while ((pos = text.find(needle, pos)) != std::string::npos) {
		++n;
		pos += needle.size();
	}
	return n;
}

RtlConfig cyclic_cfg(PufCategory cat, int nc, int n, int taps)
{
	RtlConfig cfg;
	cfg.category = cat;
	cfg.challenge_width = nc;
	cfg.response_width = n;
	FeedbackConfig fb;
	for (int t = 0; t < taps; ++t)
		fb.taps.push_back({t % n, t % nc, (t + 1) % nc});
	cfg.feedback = fb;
	return cfg;
}

} // namespace

TEST_CASE("emission is deterministic")
{
	RtlConfig cfg = cyclic_cfg(PufCategory::Arbiter, 4, 4, 4);
	CHECK(emit_verilog(cfg) == emit_verilog(cfg));
}

TEST_CASE("arbiter structure counts")
{
	RtlConfig cfg;
	cfg.category = PufCategory::Arbiter;
	cfg.challenge_width = 6;
	cfg.response_width = 3;
	std::string v = emit_verilog(cfg);
	CHECK(count_occurrences(v, "apuf_stage s_") == 6 * 3); // mux pairs = n * n_c
	CHECK(count_occurrences(v, "apuf_arbiter arb_") == 3);
	CHECK(count_occurrences(v, "xor fb_gate_") == 0); // acyclic: no feedback
	CHECK(v.find("input  wire clk") == std::string::npos);
}

TEST_CASE("cyclic wrapper carries one xor per tap and drives the right positions")
{
	RtlConfig cfg = cyclic_cfg(PufCategory::Arbiter, 8, 2, 4);
	std::string v = emit_verilog(cfg);
	CHECK(count_occurrences(v, "xor fb_gate_") == 4);
	CHECK(count_occurrences(v, "assign eff_challenge[") == 8); // every position assigned once
	CHECK(v.find("input  wire clk") != std::string::npos);
	CHECK(v.find("always @(posedge clk) resp_q <= core_response;") != std::string::npos);
}

TEST_CASE("port contract")
{
	for (auto cat : {PufCategory::Arbiter, PufCategory::RingOscillator, PufCategory::Butterfly}) {
		RtlConfig acyclic;
		acyclic.category = cat;
		acyclic.challenge_width = 4;
		acyclic.response_width = 4;
		std::string v = emit_verilog(acyclic);
		CHECK(v.find("input  wire [3:0] challenge") != std::string::npos);
		CHECK(v.find("input  wire enable") != std::string::npos);
		CHECK(v.find("output wire [3:0] response") != std::string::npos);

		std::string vc = emit_verilog(cyclic_cfg(cat, 4, 4, 2));
		CHECK(vc.find("input  wire clk") != std::string::npos);
	}
}

TEST_CASE("ring oscillator emits two rings and a comparator per bit")
{
	RtlConfig cfg;
	cfg.category = PufCategory::RingOscillator;
	cfg.challenge_width = 4;
	cfg.response_width = 2;
	std::string v = emit_verilog(cfg);
	CHECK(count_occurrences(v, "ro_stage ra_") == 8);
	CHECK(count_occurrences(v, "ro_stage rb_") == 8);
	CHECK(count_occurrences(v, "nand gate_") == 4); // one enable gate per ring
	CHECK(count_occurrences(v, " > cnt_b_") == 2);
}

TEST_CASE("butterfly emits a settle loop per bit")
{
	RtlConfig cfg;
	cfg.category = PufCategory::Butterfly;
	cfg.challenge_width = 5;
	cfg.response_width = 3;
	std::string v = emit_verilog(cfg);
	CHECK(count_occurrences(v, "bpuf_path p_") == 15);
	CHECK(count_occurrences(v, "assign qa_") == 3);
}

TEST_CASE("dont_touch attributes are optional")
{
	RtlConfig cfg;
	cfg.category = PufCategory::Arbiter;
	cfg.challenge_width = 2;
	cfg.response_width = 1;
	CHECK(emit_verilog(cfg).find("dont_touch") != std::string::npos);
	cfg.keep_attributes = false;
	CHECK(emit_verilog(cfg).find("dont_touch") == std::string::npos);
}

TEST_CASE("testbench applies each challenge")
{
	RtlConfig cfg = cyclic_cfg(PufCategory::Butterfly, 4, 2, 2);
	std::vector<Challenge> challenges = {Challenge::from_string("1010"), Challenge::from_string("0001")};
	std::string tb = emit_testbench(cfg, challenges, 6);
	CHECK(count_occurrences(tb, "challenge = 4'b") == 2);
	CHECK(count_occurrences(tb, "repeat (6)") == 2);
	CHECK(tb.find("$finish") != std::string::npos);
	CHECK(emit_testbench(cfg, challenges, 6) == tb);

	// stimulus-free bench still elaborates
	std::string empty = emit_testbench(cfg, {}, 4);
	CHECK(empty.find("challenge = 4'b") == std::string::npos);
	CHECK(empty.find("$finish") != std::string::npos);

	CHECK_THROWS_AS(emit_testbench(cfg, {Challenge::from_string("10")}, 4), UsageError);
}

TEST_CASE("invalid configs are rejected")
{
	RtlConfig cfg;
	cfg.challenge_width = 0;
	CHECK_THROWS_AS(emit_verilog(cfg), ConfigError);
	RtlConfig bad_taps = cyclic_cfg(PufCategory::Arbiter, 4, 1, 2);
	bad_taps.feedback->taps.push_back({5, 0, 3});
	CHECK_THROWS_AS(emit_verilog(bad_taps), ConfigError);
}
