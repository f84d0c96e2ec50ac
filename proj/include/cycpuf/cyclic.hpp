#ifndef CYCPUF_CYCLIC_HPP
#define CYCPUF_CYCLIC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cycpuf/puf.hpp"

namespace cycpuf {

/// One feedback path: response bit resp_idx is XOR'd with external
/// challenge bit ch_idx and drives challenge position target_pos.
struct FeedbackTap {
	int resp_idx;
	int ch_idx;
	int target_pos;
};

struct FeedbackConfig {
	std::vector<FeedbackTap> taps;

	bool empty() const { return taps.empty(); }
	std::size_t size() const { return taps.size(); }

	/// Checks index ranges and that no two taps drive the same position.
	void validate(int challenge_width, int response_width) const;

	/// Uniform random taps: distinct target positions, independent
	/// response/challenge sources.
	static FeedbackConfig sample(int challenge_width, int response_width, int count, std::uint64_t seed);
};

nlohmann::json feedback_to_json(const FeedbackConfig &fb);
FeedbackConfig feedback_from_json(const nlohmann::json &j);

/**
 * @brief XOR-feedback rewiring of the external challenge.
 *
 * result[target_pos] = ext[ch_idx] ^ prev_resp[resp_idx] per tap; every
 * undriven position passes ext through unchanged.
 */
Challenge effective_challenge(const Challenge &ext, const ResponseVector &prev_resp, const FeedbackConfig &fb);

/// Response sequence under one held challenge.
struct Trajectory {
	Challenge challenge;
	std::vector<ResponseVector> responses;

	int cycles() const { return static_cast<int>(responses.size()); }
};

struct ResponseMode {
	enum class Kind { Binary, SteadyState, Oscillating, PseudoRandom };
	Kind kind = Kind::Binary;
	int transient_len = 0; // cycles before the recurring part
	int period = 0;        // 1 for fixed points, >= 2 for oscillation, 0 if none found

	bool operator==(const ResponseMode &) const = default;
};

std::string to_string(const ResponseMode &mode);

/// Challenge-response mode: one challenge paired with the set of distinct
/// response vectors it produced, labeled by trajectory behavior.
struct Crm {
	Challenge challenge;
	ResponseMode mode;
	std::vector<ResponseVector> response_set; // in order of first appearance
	int cycles = 0;                           // observation window
};

/**
 * @brief Iterate the cyclic PUF as a synchronous discrete-time system.
 *
 * Cycle 1 evaluates on the effective challenge formed from the all-zero
 * power-on response; cycle i>1 feeds back the registered response of
 * cycle i-1. With a noise_seed, each cycle uses an independent derived
 * jitter stream.
 */
Trajectory simulate_trajectory(const PufInstance &inst, const FeedbackConfig &fb, const Challenge &ext, int cycles,
			       const EnvCondition &env = EnvCondition{},
			       std::optional<std::uint64_t> noise_seed = std::nullopt);

/**
 * @brief Label a noiseless trajectory by its first state recurrence.
 *
 * Finds the first cycle j whose response equals an earlier cycle i; the
 * pair gives period j-i and transient i-1. Constant-from-the-start is
 * Binary, later fixed points are SteadyState, period >= 2 is Oscillating,
 * and no recurrence within the window is PseudoRandom.
 */
ResponseMode classify_mode(const Trajectory &traj);

Crm collect_crm(const PufInstance &inst, const FeedbackConfig &fb, const Challenge &ext, int cycles,
		const EnvCondition &env = EnvCondition{});

nlohmann::json trajectory_to_json(const Trajectory &traj);
nlohmann::json crm_to_json(const Crm &crm);

} // namespace cycpuf

#endif
