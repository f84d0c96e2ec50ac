#ifndef CYCPUF_EXPERIMENT_HPP
#define CYCPUF_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cycpuf/attack.hpp"
#include "cycpuf/metrics.hpp"

namespace cycpuf {

/**
 * @brief Modeling-attack benchmark over the nine design cells:
 * {APUF, ROPUF, BPUF} x {acyclic, cyclic, faulty cyclic}.
 *
 * All cells share the training-row budget; cyclic cells trade challenge
 * count for per-challenge cycles. Every random draw derives from `seed`,
 * so a config replays byte-identically.
 */
struct Table1Config {
	int challenge_width = 64;
	std::size_t train_rows = 50000;
	int cycles = 64;
	int taps_arbiter = 4;
	int taps_ring = 16;
	int taps_butterfly = 12;
	int faults_arbiter = 2;
	int faults_ring = 11;
	int faults_butterfly = 7;
	// The attack picks the strongest basis it knows per target: parity
	// linearizes arbiter-style races, raw bits linearize ring sums.
	FeatureMapKind map_arbiter = FeatureMapKind::Parity;
	FeatureMapKind map_ring = FeatureMapKind::RawPlusParity;
	FeatureMapKind map_butterfly = FeatureMapKind::Parity;
	VariationModel variation;
	TrainConfig train;
	std::uint64_t seed = 1;
	int jobs = 1;

	nlohmann::json to_json() const;
	static Table1Config from_json(const nlohmann::json &j);
};

struct Table1Row {
	std::string design;
	int challenge_size = 0;
	std::size_t train_rows = 0;
	double accuracy_pct = 0.0;
	// Faulty cells also report the model against the fault-free cyclic
	// test rows.
	std::optional<double> accuracy_on_clean_pct;
};

std::vector<Table1Row> run_table1(const Table1Config &cfg);
std::string table1_to_text(const std::vector<Table1Row> &rows);
nlohmann::json table1_to_json(const Table1Config &cfg, const std::vector<Table1Row> &rows);

/**
 * @brief Functional-metric comparison of acyclic vs cyclic designs on
 * weak (small challenge/response) PUF populations.
 *
 * Arbiter and butterfly lots default to strong systematic bias — the
 * regime where FPGA implementations show poor acyclic uniqueness — while
 * ring-oscillator lots stay mostly random.
 */
struct Table2Config {
	int challenge_width = 4;
	int response_width = 4;
	MetricConfig metrics; // k, m, s, c
	// Weak-PUF feedback counts; the strong-PUF counts don't fit a 4-bit
	// challenge. Taps use the rotation wiring (resp t -> position t+1,
	// XOR'd with challenge bit t). The arbiter lot carries heavy shared
	// bias, the regime where acyclic uniqueness collapses.
	int taps_arbiter = 3;
	int taps_ring = 4;
	int taps_butterfly = 2;
	VariationModel vm_arbiter{1.0, 0.12, 0.30, 0.005};
	VariationModel vm_ring{1.0, 0.05, 0.0, 0.005};
	VariationModel vm_butterfly{1.0, 0.05, 0.0, 0.005};
	std::uint64_t seed = 1;

	nlohmann::json to_json() const;
	static Table2Config from_json(const nlohmann::json &j);
};

struct Table2Row {
	std::string design;
	MetricReport report;
};

std::vector<Table2Row> run_table2(const Table2Config &cfg);
std::string table2_to_text(const std::vector<Table2Row> &rows);
nlohmann::json table2_to_json(const Table2Config &cfg, const std::vector<Table2Row> &rows);

} // namespace cycpuf

#endif
