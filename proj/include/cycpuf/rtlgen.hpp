#ifndef CYCPUF_RTLGEN_HPP
#define CYCPUF_RTLGEN_HPP

#include <optional>
#include <string>
#include <vector>

#include "cycpuf/cyclic.hpp"
#include "cycpuf/puf.hpp"

namespace cycpuf {

/**
 * @brief Shape of an emitted Verilog PUF.
 *
 * The generated netlist encodes the circuit structure (symmetric racing
 * paths, rings, settle loops, feedback XOR taps) but of course not the
 * silicon randomness; its responses are not expected to match the
 * behavioral simulator. keep_attributes adds dont_touch markers so
 * synthesis preserves the nominally redundant symmetric paths.
 */
struct RtlConfig {
	PufCategory category = PufCategory::Arbiter;
	int challenge_width = 4;
	int response_width = 4;
	std::optional<FeedbackConfig> feedback; // engaged => cyclic form
	std::string module_name;                // default derived from category/form
	bool keep_attributes = true;

	void validate() const;
	std::string effective_module_name() const;
};

/// Deterministic structural Verilog-2001 text for the configured PUF.
std::string emit_verilog(const RtlConfig &cfg);

/// Self-contained testbench applying each challenge for `cycles` clock
/// cycles (or settle steps for acyclic forms) and dumping the response.
std::string emit_testbench(const RtlConfig &cfg, const std::vector<Challenge> &challenges, int cycles = 8);

} // namespace cycpuf

#endif
