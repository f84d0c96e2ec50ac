#ifndef CYCPUF_DATASET_HPP
#define CYCPUF_DATASET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cycpuf/cyclic.hpp"
#include "cycpuf/faults.hpp"
#include "cycpuf/puf.hpp"

namespace cycpuf {

/// One CRP (or CRP-equivalent) observation.
struct CrpRow {
	std::string instance_id;
	Challenge challenge; // external challenge
	BitVec response;
	int cycle_index = 1; // 1-based; acyclic rows are always 1
	bool faulty = false;
};

/**
 * @brief Everything needed to regenerate a dataset from scratch:
 * instance seeds and dimensions, wiring, fault spec, generation budget
 * and the split seed.
 */
struct DatasetMeta {
	PufCategory category = PufCategory::Arbiter;
	bool cyclic = false;
	int challenge_width = 0;
	int response_width = 0;
	std::string instance_id;
	std::uint64_t lot_seed = 0;
	std::uint64_t instance_seed = 0;
	VariationModel variation;
	FeedbackConfig feedback;        // empty for acyclic
	std::optional<FaultSpec> fault; // engaged only for faulty datasets
	int num_challenges = 0;
	int cycles = 1;
	std::uint64_t challenge_seed = 0;
	EnvCondition env;
	std::optional<std::uint64_t> split_seed;

	nlohmann::json to_json() const;
	static DatasetMeta from_json(const nlohmann::json &j);
};

struct CrpDataset {
	std::vector<CrpRow> rows;
	DatasetMeta meta;
	std::vector<std::size_t> train_idx;
	std::vector<std::size_t> test_idx;

	bool has_split() const { return !train_idx.empty() || !test_idx.empty(); }
};

/**
 * @brief Noiseless CRPs over distinct uniform-random challenges.
 *
 * Rejects num_challenges > 2^challenge_width (distinct sampling would be
 * infeasible). One row per challenge, cycle_index 1.
 */
CrpDataset generate_acyclic(const PufInstance &inst, int num_challenges, std::uint64_t challenge_seed,
			    const EnvCondition &env = EnvCondition{});

/**
 * @brief CRP-equivalents of the cyclic PUF: one row per cycle of each
 * held challenge's noiseless trajectory.
 *
 * Duplicate (challenge, response) rows are kept on purpose; their
 * multiplicity carries the mode statistics. With a fault spec the
 * trajectories come from the faulty wrapper and rows are marked faulty.
 */
CrpDataset generate_cyclic(const PufInstance &inst, const FeedbackConfig &fb, int num_challenges, int cycles,
			   std::uint64_t challenge_seed, const EnvCondition &env = EnvCondition{},
			   const FaultSpec *fault = nullptr);

/**
 * @brief Seeded 80/20 split, grouped by external challenge.
 *
 * All cycles of a challenge land on the same side, so CRP-equivalents
 * never leak a held-out challenge into training. The boundary is the
 * challenge count whose row total is closest to 80%; both sides stay
 * non-empty.
 */
void split_80_20(CrpDataset &ds, std::uint64_t seed);

/// Regenerate the dataset described by a meta block (including its split).
CrpDataset replay_dataset(const DatasetMeta &meta);

/// CSV with fixed columns instance_id,challenge,response,cycle_index,faulty.
/// ".gz" paths are gzip-compressed. The meta (with split) goes to
/// "<path>.meta.json".
void write_csv(const CrpDataset &ds, const std::string &path);
CrpDataset read_csv(const std::string &path);

/// JSON-lines alternative, same sidecar convention.
void write_jsonl(const CrpDataset &ds, const std::string &path);
CrpDataset read_jsonl(const std::string &path);

} // namespace cycpuf

#endif
