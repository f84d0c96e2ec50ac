#include "cycpuf/rtlgen.hpp"

#include <sstream>

namespace cycpuf {

void RtlConfig::validate() const
{
	if (challenge_width < 1 || response_width < 1)
		throw ConfigError("RtlConfig: widths must be >= 1");
	if (feedback)
		feedback->validate(challenge_width, response_width);
}

std::string RtlConfig::effective_module_name() const
{
	if (!module_name.empty())
		return module_name;
	std::string base;
	switch (category) {
	case PufCategory::Arbiter:
		base = "apuf";
		break;
	case PufCategory::RingOscillator:
		base = "ropuf";
		break;
	case PufCategory::Butterfly:
		base = "bpuf";
		break;
	}
	if (feedback)
		base = "cyc" + base;
	return base + "_" + std::to_string(challenge_width) + "x" + std::to_string(response_width);
}

namespace {

struct Emitter {
	std::ostringstream out;
	std::string attr; // "(* dont_touch = \"true\" *) " or ""

	explicit Emitter(bool keep) : attr(keep ? "(* dont_touch = \"true\" *) " : "") {}
};

void emit_apuf_cells(Emitter &e)
{
	e.out << "// Challenge-controlled switch stage: sel crosses the two racing rails.\n"
	      << "module apuf_stage (\n"
	      << "    input  wire top_in,\n"
	      << "    input  wire bottom_in,\n"
	      << "    input  wire sel,\n"
	      << "    output wire top_out,\n"
	      << "    output wire bottom_out\n"
	      << ");\n"
	      << "  " << e.attr << "assign top_out    = sel ? bottom_in : top_in;\n"
	      << "  " << e.attr << "assign bottom_out = sel ? top_in    : bottom_in;\n"
	      << "endmodule\n\n"
	      << "// Latch raced by the two path endpoints; top arriving first yields 1.\n"
	      << "module apuf_arbiter (\n"
	      << "    input  wire top,\n"
	      << "    input  wire bottom,\n"
	      << "    output reg  q\n"
	      << ");\n"
	      << "  always @(posedge top) q <= ~bottom;\n"
	      << "endmodule\n\n";
}

void emit_apuf_core(Emitter &e, const RtlConfig &cfg, const std::string &name)
{
	const int nc = cfg.challenge_width, n = cfg.response_width;
	e.out << "module " << name << " (\n"
	      << "    input  wire [" << nc - 1 << ":0] challenge,\n"
	      << "    input  wire enable,\n"
	      << "    output wire [" << n - 1 << ":0] response\n"
	      << ");\n";
	for (int bit = 0; bit < n; ++bit) {
		e.out << "  // response bit " << bit << "\n";
		e.out << "  wire [" << nc << ":0] top_" << bit << ";\n";
		e.out << "  wire [" << nc << ":0] bot_" << bit << ";\n";
		e.out << "  assign top_" << bit << "[0] = enable;\n";
		e.out << "  assign bot_" << bit << "[0] = enable;\n";
		for (int k = 0; k < nc; ++k) {
			e.out << "  apuf_stage s_" << bit << "_" << k << " (.top_in(top_" << bit << "[" << k
			      << "]), .bottom_in(bot_" << bit << "[" << k << "]), .sel(challenge[" << k
			      << "]), .top_out(top_" << bit << "[" << k + 1 << "]), .bottom_out(bot_" << bit << "["
			      << k + 1 << "]));\n";
		}
		e.out << "  apuf_arbiter arb_" << bit << " (.top(top_" << bit << "[" << nc << "]), .bottom(bot_" << bit
		      << "[" << nc << "]), .q(response[" << bit << "]));\n";
	}
	e.out << "endmodule\n";
}

void emit_ropuf_cells(Emitter &e)
{
	e.out << "// Challenge-selected inverter pair; both candidates stay in the netlist.\n"
	      << "module ro_stage (\n"
	      << "    input  wire in,\n"
	      << "    input  wire sel,\n"
	      << "    output wire out\n"
	      << ");\n"
	      << "  wire via_a, via_b;\n"
	      << "  " << e.attr << "not inv_a (via_a, in);\n"
	      << "  " << e.attr << "not inv_b (via_b, in);\n"
	      << "  assign out = sel ? via_b : via_a;\n"
	      << "endmodule\n\n";
}

void emit_ropuf_ring(Emitter &e, const RtlConfig &cfg, int bit, char ring)
{
	const int nc = cfg.challenge_width;
	const std::string w = std::string("ring_") + ring + "_" + std::to_string(bit);
	e.out << "  wire [" << nc << ":0] " << w << ";\n";
	for (int k = 0; k < nc; ++k)
		e.out << "  ro_stage r" << ring << "_" << bit << "_" << k << " (.in(" << w << "[" << k << "]), .sel(challenge["
		      << k << "]), .out(" << w << "[" << k + 1 << "]));\n";
	// Close the loop with a NAND for the enable gate; pad to an odd
	// total inversion count so the ring oscillates.
	if (nc % 2 == 1) {
		e.out << "  wire " << w << "_pad;\n";
		e.out << "  " << e.attr << "not pad_" << ring << "_" << bit << " (" << w << "_pad, " << w << "[" << nc << "]);\n";
		e.out << "  " << e.attr << "nand gate_" << ring << "_" << bit << " (" << w << "[0], enable, " << w << "_pad);\n";
	} else {
		e.out << "  " << e.attr << "nand gate_" << ring << "_" << bit << " (" << w << "[0], enable, " << w << "[" << nc
		      << "]);\n";
	}
}

void emit_ropuf_core(Emitter &e, const RtlConfig &cfg, const std::string &name)
{
	const int nc = cfg.challenge_width, n = cfg.response_width;
	e.out << "module " << name << " (\n"
	      << "    input  wire [" << nc - 1 << ":0] challenge,\n"
	      << "    input  wire enable,\n"
	      << "    output wire [" << n - 1 << ":0] response\n"
	      << ");\n";
	for (int bit = 0; bit < n; ++bit) {
		e.out << "  // response bit " << bit << ": ring pair + counters + comparator\n";
		emit_ropuf_ring(e, cfg, bit, 'a');
		emit_ropuf_ring(e, cfg, bit, 'b');
		e.out << "  reg [15:0] cnt_a_" << bit << " = 16'd0;\n";
		e.out << "  reg [15:0] cnt_b_" << bit << " = 16'd0;\n";
		e.out << "  always @(posedge ring_a_" << bit << "[" << nc << "]) if (enable) cnt_a_" << bit << " <= cnt_a_"
		      << bit << " + 16'd1;\n";
		e.out << "  always @(posedge ring_b_" << bit << "[" << nc << "]) if (enable) cnt_b_" << bit << " <= cnt_b_"
		      << bit << " + 16'd1;\n";
		e.out << "  assign response[" << bit << "] = (cnt_a_" << bit << " > cnt_b_" << bit << ");\n";
	}
	e.out << "endmodule\n";
}

void emit_bpuf_cells(Emitter &e)
{
	e.out << "// Challenge-steered segment in the settle loop.\n"
	      << "module bpuf_path (\n"
	      << "    input  wire in,\n"
	      << "    input  wire sel,\n"
	      << "    output wire out\n"
	      << ");\n"
	      << "  wire seg_a, seg_b;\n"
	      << "  " << e.attr << "buf buf_a (seg_a, in);\n"
	      << "  " << e.attr << "buf buf_b (seg_b, in);\n"
	      << "  assign out = sel ? seg_b : seg_a;\n"
	      << "endmodule\n\n";
}

void emit_bpuf_core(Emitter &e, const RtlConfig &cfg, const std::string &name)
{
	const int nc = cfg.challenge_width, n = cfg.response_width;
	e.out << "module " << name << " (\n"
	      << "    input  wire [" << nc - 1 << ":0] challenge,\n"
	      << "    input  wire enable,\n"
	      << "    output wire [" << n - 1 << ":0] response\n"
	      << ");\n";
	for (int bit = 0; bit < n; ++bit) {
		e.out << "  // response bit " << bit << ": cross-coupled settle loop, excited while enable is high\n";
		e.out << "  wire qa_" << bit << ", qb_" << bit << ";\n";
		e.out << "  wire [" << nc << ":0] loop_" << bit << ";\n";
		e.out << "  assign loop_" << bit << "[0] = qb_" << bit << ";\n";
		for (int k = 0; k < nc; ++k)
			e.out << "  bpuf_path p_" << bit << "_" << k << " (.in(loop_" << bit << "[" << k << "]), .sel(challenge["
			      << k << "]), .out(loop_" << bit << "[" << k + 1 << "]));\n";
		e.out << "  " << e.attr << "assign qa_" << bit << " = enable ? 1'b1 : ~loop_" << bit << "[" << nc << "];\n";
		e.out << "  " << e.attr << "assign qb_" << bit << " = enable ? 1'b0 : ~qa_" << bit << ";\n";
		e.out << "  assign response[" << bit << "] = qa_" << bit << ";\n";
	}
	e.out << "endmodule\n";
}

void emit_cyclic_wrapper(Emitter &e, const RtlConfig &cfg, const std::string &name, const std::string &core_name)
{
	const int nc = cfg.challenge_width, n = cfg.response_width;
	const FeedbackConfig &fb = *cfg.feedback;
	e.out << "// Cyclic wrapper: feedback XOR taps drive selected challenge inputs;\n"
	      << "// the fed-back response is registered once per clock.\n"
	      << "module " << name << " (\n"
	      << "    input  wire [" << nc - 1 << ":0] challenge,\n"
	      << "    input  wire enable,\n"
	      << "    input  wire clk,\n"
	      << "    output wire [" << n - 1 << ":0] response\n"
	      << ");\n"
	      << "  wire [" << nc - 1 << ":0] eff_challenge;\n"
	      << "  wire [" << n - 1 << ":0] core_response;\n"
	      << "  reg  [" << n - 1 << ":0] resp_q = " << n << "'d0;\n";
	std::vector<int> driver(nc, -1);
	for (std::size_t t = 0; t < fb.taps.size(); ++t)
		driver[fb.taps[t].target_pos] = static_cast<int>(t);
	for (std::size_t t = 0; t < fb.taps.size(); ++t) {
		const FeedbackTap &tap = fb.taps[t];
		e.out << "  wire fb_xor_" << t << ";\n";
		e.out << "  xor fb_gate_" << t << " (fb_xor_" << t << ", challenge[" << tap.ch_idx << "], resp_q[" << tap.resp_idx
		      << "]);\n";
	}
	for (int pos = 0; pos < nc; ++pos) {
		if (driver[pos] >= 0)
			e.out << "  assign eff_challenge[" << pos << "] = fb_xor_" << driver[pos] << ";\n";
		else
			e.out << "  assign eff_challenge[" << pos << "] = challenge[" << pos << "];\n";
	}
	e.out << "  " << core_name << " core (.challenge(eff_challenge), .enable(enable), .response(core_response));\n"
	      << "  always @(posedge clk) resp_q <= core_response;\n"
	      << "  assign response = core_response;\n"
	      << "endmodule\n";
}

} // namespace

std::string emit_verilog(const RtlConfig &cfg)
{
	cfg.validate();
	Emitter e(cfg.keep_attributes);
	const std::string name = cfg.effective_module_name();
	const bool cyclic = cfg.feedback.has_value();
	const std::string core_name = cyclic ? name + "_core" : name;

	e.out << "// " << name << ": ";
	switch (cfg.category) {
	case PufCategory::Arbiter:
		e.out << "arbiter PUF";
		break;
	case PufCategory::RingOscillator:
		e.out << "ring-oscillator PUF";
		break;
	case PufCategory::Butterfly:
		e.out << "butterfly PUF";
		break;
	}
	e.out << ", " << cfg.challenge_width << "-bit challenge, " << cfg.response_width << "-bit response";
	if (cyclic)
		e.out << ", " << cfg.feedback->size() << " feedback taps";
	e.out << "\n// generated by cycpuf emit-verilog\n\n";

	switch (cfg.category) {
	case PufCategory::Arbiter:
		emit_apuf_cells(e);
		emit_apuf_core(e, cfg, core_name);
		break;
	case PufCategory::RingOscillator:
		emit_ropuf_cells(e);
		emit_ropuf_core(e, cfg, core_name);
		break;
	case PufCategory::Butterfly:
		emit_bpuf_cells(e);
		emit_bpuf_core(e, cfg, core_name);
		break;
	}
	if (cyclic) {
		e.out << "\n";
		emit_cyclic_wrapper(e, cfg, name, core_name);
	}
	return e.out.str();
}

std::string emit_testbench(const RtlConfig &cfg, const std::vector<Challenge> &challenges, int cycles)
{
	cfg.validate();
	if (cycles < 1)
		throw UsageError("emit_testbench: cycles must be >= 1");
	for (const auto &ch : challenges)
		if (static_cast<int>(ch.size()) != cfg.challenge_width)
			throw UsageError("emit_testbench: challenge width mismatch");

	const std::string name = cfg.effective_module_name();
	const bool cyclic = cfg.feedback.has_value();
	const int nc = cfg.challenge_width, n = cfg.response_width;

	std::ostringstream out;
	out << "`timescale 1ns/1ps\n"
	    << "module " << name << "_tb;\n"
	    << "  reg [" << nc - 1 << ":0] challenge;\n"
	    << "  reg enable;\n";
	if (cyclic)
		out << "  reg clk;\n";
	out << "  wire [" << n - 1 << ":0] response;\n\n"
	    << "  " << name << " dut (.challenge(challenge), .enable(enable)" << (cyclic ? ", .clk(clk)" : "")
	    << ", .response(response));\n\n";
	if (cyclic)
		out << "  initial clk = 1'b0;\n"
		    << "  always #5 clk = ~clk;\n\n";
	out << "  initial begin\n"
	    << "    enable = 1'b0;\n"
	    << "    challenge = " << nc << "'d0;\n"
	    << "    #20;\n";
	for (const auto &ch : challenges) {
		out << "    // challenge " << ch.to_string() << "\n"
		    << "    challenge = " << nc << "'b" << ch.to_string() << ";\n"
		    << "    enable = 1'b1;\n";
		if (cyclic)
			out << "    repeat (" << cycles << ") begin\n"
			    << "      @(posedge clk); #1;\n"
			    << "      $display(\"%b %b\", challenge, response);\n"
			    << "    end\n";
		else
			out << "    repeat (" << cycles << ") begin\n"
			    << "      #10;\n"
			    << "      $display(\"%b %b\", challenge, response);\n"
			    << "    end\n";
		out << "    enable = 1'b0;\n"
		    << "    #20;\n";
	}
	out << "    $finish;\n"
	    << "  end\n"
	    << "endmodule\n";
	return out.str();
}

} // namespace cycpuf
