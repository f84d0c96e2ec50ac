#ifndef CYCPUF_PUF_HPP
#define CYCPUF_PUF_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cycpuf/bitvec.hpp"

namespace cycpuf {

enum class PufCategory { Arbiter, RingOscillator, Butterfly };

std::string to_string(PufCategory c);
PufCategory category_from_string(const std::string &s);

/**
 * @brief Knobs of the process-variation model.
 *
 * mu is the nominal delay; sigma_systematic is drawn once per design lot
 * (shared by every instance sampled with the same lot_seed) and models
 * layout bias, sigma_random is drawn once per instance, jitter_sigma
 * scales the per-evaluation Gaussian noise. All in nominal-delay units.
 */
struct VariationModel {
	double mu = 1.0;
	double sigma_random = 0.05;
	double sigma_systematic = 0.0;
	double jitter_sigma = 0.005;

	void validate() const;
};

struct EnvCondition {
	double delay_scale = 1.0;
	std::string label = "nominal";

	void validate() const;
};

inline EnvCondition nominal_env() { return EnvCondition{}; }

/// One arbiter switch stage: straight and crossed delays for both rails.
struct ArbiterStage {
	double top_straight;
	double top_cross;
	double bottom_straight;
	double bottom_cross;
};

struct ArbiterParams {
	// chains[bit][stage]
	std::vector<std::vector<ArbiterStage>> chains;
};

struct RingOscillatorParams {
	struct Stage {
		double inv0; // inverter picked when the challenge bit is 0
		double inv1;
	};
	// ring_a[bit][stage], ring_b[bit][stage]
	std::vector<std::vector<Stage>> ring_a;
	std::vector<std::vector<Stage>> ring_b;
};

struct ButterflyParams {
	// weights[bit] has challenge_width+1 mismatch coefficients in the
	// parity feature basis; each is the difference of two sampled delays.
	std::vector<std::vector<double>> weights;
	double meta_sigma = 0.0; // settling-noise std-dev, fixed at sampling
};

/**
 * @brief One simulated chip. Immutable after sampling.
 *
 * Re-sampling with identical (category, dimensions, variation, lot_seed,
 * instance_seed) reproduces bit-identical parameters.
 */
struct PufInstance {
	PufCategory category = PufCategory::Arbiter;
	int challenge_width = 0;
	int response_width = 0;
	std::string instance_id;
	std::uint64_t lot_seed = 0;
	std::uint64_t instance_seed = 0;
	VariationModel variation;
	std::variant<ArbiterParams, RingOscillatorParams, ButterflyParams> params;
};

PufInstance sample_instance(PufCategory category, int challenge_width, int response_width, const VariationModel &vm,
			    std::uint64_t lot_seed, std::uint64_t instance_seed, std::string instance_id = "");

/**
 * @brief Evaluate the acyclic core once.
 *
 * Pure function of its arguments. With no noise_seed the evaluation is
 * fully deterministic; with one, Gaussian jitter of std jitter_sigma*mu is
 * added to each path/ring total (butterfly: to the settle sum) before the
 * comparison. Exact ties resolve to 0.
 */
ResponseVector eval_acyclic(const PufInstance &inst, const Challenge &ch, const EnvCondition &env = EnvCondition{},
			    std::optional<std::uint64_t> noise_seed = std::nullopt);

nlohmann::json instance_to_json(const PufInstance &inst);
PufInstance instance_from_json(const nlohmann::json &j);

} // namespace cycpuf

#endif
