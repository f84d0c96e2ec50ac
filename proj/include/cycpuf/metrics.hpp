#ifndef CYCPUF_METRICS_HPP
#define CYCPUF_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cycpuf/cyclic.hpp"
#include "cycpuf/puf.hpp"

namespace cycpuf {

int hamming_distance(const ResponseVector &r1, const ResponseVector &r2);
int hamming_weight(const ResponseVector &r);

/**
 * @brief Normalized inter-chip Hamming distance for one challenge.
 *
 * (2 / k(k-1)) * sum_{i<j} HD(R_i, R_j)/n * 100, k = responses.size().
 * Ideal is 50%.
 */
double uniqueness(const std::vector<ResponseVector> &responses);

/// Per-challenge uniqueness averaged over a challenge set;
/// responses[challenge][instance].
double uniqueness_over_challenges(const std::vector<std::vector<ResponseVector>> &responses);

/**
 * @brief 100 minus the normalized intra-chip Hamming distance.
 *
 * reference is the response at standard conditions; samples are re-reads
 * under varied conditions. 100% means perfectly stable.
 */
double reliability(const ResponseVector &reference, const std::vector<ResponseVector> &samples);

/// Mean normalized Hamming weight of a response set, in percent.
double uniformity(const std::vector<ResponseVector> &responses);

/**
 * @brief Average-bit-value collapse of a trajectory into one vector.
 *
 * Bit j is 1 iff its mean over the trajectory's cycles is >= 0.5 (the tie
 * at exactly one half rounds up). A constant trajectory maps to itself,
 * so acyclic behavior is a fixed point of this reduction.
 */
ResponseVector abv_response(const Trajectory &traj);

struct MetricConfig {
	int k = 10;  // PUF instances
	int m = 256; // challenges per instance
	int s = 8;   // condition samples for reliability
	int c = 64;  // cycles per held challenge

	void validate() const;
};

struct MetricReport {
	double uniqueness_pct = 0.0;
	double uniformity_pct = 0.0;
	double reliability_pct = 0.0;
	std::vector<double> per_challenge_uniqueness; // size m
	std::vector<double> per_instance_uniformity;  // size k
	std::vector<double> per_instance_reliability; // size k

	nlohmann::json to_json() const;
};

/// 8 conditions spanning delay scales 0.90..1.10 around nominal.
std::vector<EnvCondition> default_env_sweep();

/**
 * @brief Full functional-metric suite over ABV-collapsed responses.
 *
 * Each (instance, challenge) pair is held for cfg.c cycles; uniqueness
 * and uniformity are computed on the nominal noiseless ABV vectors, and
 * reliability compares them against ABV vectors re-collected under every
 * sweep condition with jitter on. With empty feedback the suite equals
 * the plain acyclic metrics.
 */
MetricReport cyclic_metric_suite(const std::vector<PufInstance> &instances, const FeedbackConfig &fb,
				 const std::vector<Challenge> &challenges, const MetricConfig &cfg,
				 const std::vector<EnvCondition> &env_sweep, std::uint64_t noise_seed_base);

} // namespace cycpuf

#endif
