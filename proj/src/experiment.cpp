#include "cycpuf/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <future>

#include "cycpuf/rng.hpp"

namespace cycpuf {

namespace {

struct CategorySpec {
	PufCategory category;
	const char *acyclic_name;
	const char *cyclic_name;
	const char *faulty_name;
};

constexpr CategorySpec kCategories[] = {
	{PufCategory::Arbiter, "APUF", "CycAPUF", "Faulty CycAPUF"},
	{PufCategory::RingOscillator, "ROPUF", "CycROPUF", "Faulty CycROPUF"},
	{PufCategory::Butterfly, "BPUF", "CycBPUF", "Faulty CycBPUF"},
};

int taps_for(const Table1Config &cfg, PufCategory cat)
{
	switch (cat) {
	case PufCategory::Arbiter:
		return cfg.taps_arbiter;
	case PufCategory::RingOscillator:
		return cfg.taps_ring;
	case PufCategory::Butterfly:
		return cfg.taps_butterfly;
	}
	return 0;
}

int faults_for(const Table1Config &cfg, PufCategory cat)
{
	switch (cat) {
	case PufCategory::Arbiter:
		return cfg.faults_arbiter;
	case PufCategory::RingOscillator:
		return cfg.faults_ring;
	case PufCategory::Butterfly:
		return cfg.faults_butterfly;
	}
	return 0;
}

FeatureMapKind map_for(const Table1Config &cfg, PufCategory cat)
{
	switch (cat) {
	case PufCategory::Arbiter:
		return cfg.map_arbiter;
	case PufCategory::RingOscillator:
		return cfg.map_ring;
	case PufCategory::Butterfly:
		return cfg.map_butterfly;
	}
	return FeatureMapKind::Parity;
}

/// Three rows (acyclic, cyclic, faulty cyclic) for one category.
std::vector<Table1Row> run_category(const Table1Config &cfg, const CategorySpec &spec, int cat_idx)
{
	const std::uint64_t base = Rng::mix(cfg.seed, 0x1000 + cat_idx);
	const std::uint64_t lot_seed = Rng::mix(base, 1);
	const std::uint64_t instance_seed = Rng::mix(base, 2);

	PufInstance inst = sample_instance(spec.category, cfg.challenge_width, 1, cfg.variation, lot_seed, instance_seed);
	TrainConfig train_cfg = cfg.train;
	train_cfg.map = map_for(cfg, spec.category);
	train_cfg.seed = Rng::mix(base, 3);

	std::vector<Table1Row> rows;

	// acyclic: one row per distinct challenge
	{
		int nch = std::max(5, static_cast<int>(std::llround(static_cast<double>(cfg.train_rows) / 0.8)));
		CrpDataset ds = generate_acyclic(inst, nch, Rng::mix(base, 4));
		split_80_20(ds, Rng::mix(base, 5));
		AttackModel model = train(ds, train_cfg);
		AttackReport rep = evaluate(model, ds);
		rows.push_back({spec.acyclic_name, cfg.challenge_width, rep.train_rows, rep.test_accuracy_pct, std::nullopt});
	}

	// cyclic: same row budget, each held challenge contributes `cycles` rows
	FeedbackConfig fb = FeedbackConfig::sample(cfg.challenge_width, 1, taps_for(cfg, spec.category), Rng::mix(base, 6));
	CrpDataset cyclic_ds;
	{
		int nch = std::max(5, static_cast<int>(std::llround(static_cast<double>(cfg.train_rows) /
								    (0.8 * static_cast<double>(cfg.cycles)))));
		cyclic_ds = generate_cyclic(inst, fb, nch, cfg.cycles, Rng::mix(base, 7));
		split_80_20(cyclic_ds, Rng::mix(base, 8));
		AttackModel model = train(cyclic_ds, train_cfg);
		AttackReport rep = evaluate(model, cyclic_ds);
		rows.push_back({spec.cyclic_name, cfg.challenge_width, rep.train_rows, rep.test_accuracy_pct, std::nullopt});
	}

	// faulty cyclic: same wiring with injected faults; the model is also
	// scored against the fault-free cyclic test rows
	{
		FaultSpec spec_f = sample_fault_spec(inst, fb, faults_for(cfg, spec.category), Rng::mix(base, 9));
		int nch = std::max(5, static_cast<int>(std::llround(static_cast<double>(cfg.train_rows) /
								    (0.8 * static_cast<double>(cfg.cycles)))));
		CrpDataset ds = generate_cyclic(inst, fb, nch, cfg.cycles, Rng::mix(base, 10), EnvCondition{}, &spec_f);
		split_80_20(ds, Rng::mix(base, 11));
		AttackModel model = train(ds, train_cfg);
		AttackReport rep = evaluate(model, ds);
		AttackReport on_clean = evaluate(model, cyclic_ds);
		rows.push_back({spec.faulty_name, cfg.challenge_width, rep.train_rows, rep.test_accuracy_pct,
				on_clean.test_accuracy_pct});
	}
	return rows;
}

} // namespace

std::vector<Table1Row> run_table1(const Table1Config &cfg)
{
	if (cfg.train_rows < 5)
		throw ConfigError("run_table1: train_rows too small");
	cfg.variation.validate();

	std::vector<Table1Row> rows;
	if (cfg.jobs > 1) {
		std::vector<std::future<std::vector<Table1Row>>> futures;
		for (int c = 0; c < 3; ++c)
			futures.push_back(std::async(std::launch::async, run_category, std::cref(cfg),
						     std::cref(kCategories[c]), c));
		for (auto &f : futures) {
			auto part = f.get();
			rows.insert(rows.end(), part.begin(), part.end());
		}
	} else {
		for (int c = 0; c < 3; ++c) {
			auto part = run_category(cfg, kCategories[c], c);
			rows.insert(rows.end(), part.begin(), part.end());
		}
	}
	return rows;
}

std::string table1_to_text(const std::vector<Table1Row> &rows)
{
	char line[160];
	std::string out;
	std::snprintf(line, sizeof(line), "%-18s %-15s %-20s %-15s\n", "PUF Design", "Challenge Size",
		      "# of Training CRPs", "Model Accuracy");
	out += line;
	out += std::string(70, '-') + "\n";
	for (const auto &r : rows) {
		std::snprintf(line, sizeof(line), "%-18s %-15d %-20zu %.2f%%\n", r.design.c_str(), r.challenge_size,
			      r.train_rows, r.accuracy_pct);
		out += line;
	}
	return out;
}

nlohmann::json table1_to_json(const Table1Config &cfg, const std::vector<Table1Row> &rows)
{
	nlohmann::json jrows = nlohmann::json::array();
	for (const auto &r : rows) {
		nlohmann::json jr{{"design", r.design},
				  {"challenge_size", r.challenge_size},
				  {"train_rows", r.train_rows},
				  {"accuracy_pct", r.accuracy_pct}};
		if (r.accuracy_on_clean_pct)
			jr["accuracy_on_clean_pct"] = *r.accuracy_on_clean_pct;
		jrows.push_back(std::move(jr));
	}
	return nlohmann::json{{"config", cfg.to_json()}, {"rows", std::move(jrows)}};
}

nlohmann::json Table1Config::to_json() const
{
	return nlohmann::json{{"challenge_width", challenge_width},
			      {"train_rows", train_rows},
			      {"cycles", cycles},
			      {"taps", {{"arbiter", taps_arbiter}, {"ring_oscillator", taps_ring}, {"butterfly", taps_butterfly}}},
			      {"faults",
			       {{"arbiter", faults_arbiter}, {"ring_oscillator", faults_ring}, {"butterfly", faults_butterfly}}},
			      {"feature_maps",
			       {{"arbiter", to_string(map_arbiter)},
				{"ring_oscillator", to_string(map_ring)},
				{"butterfly", to_string(map_butterfly)}}},
			      {"variation",
			       {{"mu", variation.mu},
				{"sigma_random", variation.sigma_random},
				{"sigma_systematic", variation.sigma_systematic},
				{"jitter_sigma", variation.jitter_sigma}}},
			      {"train",
			       {{"model", to_string(train.kind)},
				{"learning_rate", train.learning_rate},
				{"epochs", train.epochs},
				{"batch_size", train.batch_size},
				{"hidden", train.hidden}}},
			      {"seed", seed},
			      {"jobs", jobs}};
}

Table1Config Table1Config::from_json(const nlohmann::json &j)
{
	Table1Config cfg;
	cfg.challenge_width = j.at("challenge_width").get<int>();
	cfg.train_rows = j.at("train_rows").get<std::size_t>();
	cfg.cycles = j.at("cycles").get<int>();
	cfg.taps_arbiter = j.at("taps").at("arbiter").get<int>();
	cfg.taps_ring = j.at("taps").at("ring_oscillator").get<int>();
	cfg.taps_butterfly = j.at("taps").at("butterfly").get<int>();
	cfg.faults_arbiter = j.at("faults").at("arbiter").get<int>();
	cfg.faults_ring = j.at("faults").at("ring_oscillator").get<int>();
	cfg.faults_butterfly = j.at("faults").at("butterfly").get<int>();
	cfg.map_arbiter = feature_map_from_string(j.at("feature_maps").at("arbiter").get<std::string>());
	cfg.map_ring = feature_map_from_string(j.at("feature_maps").at("ring_oscillator").get<std::string>());
	cfg.map_butterfly = feature_map_from_string(j.at("feature_maps").at("butterfly").get<std::string>());
	const auto &vm = j.at("variation");
	cfg.variation.mu = vm.at("mu").get<double>();
	cfg.variation.sigma_random = vm.at("sigma_random").get<double>();
	cfg.variation.sigma_systematic = vm.at("sigma_systematic").get<double>();
	cfg.variation.jitter_sigma = vm.at("jitter_sigma").get<double>();
	const auto &tr = j.at("train");
	cfg.train.kind = model_kind_from_string(tr.at("model").get<std::string>());
	cfg.train.learning_rate = tr.at("learning_rate").get<double>();
	cfg.train.epochs = tr.at("epochs").get<int>();
	cfg.train.batch_size = tr.at("batch_size").get<int>();
	cfg.train.hidden = tr.at("hidden").get<int>();
	cfg.seed = j.at("seed").get<std::uint64_t>();
	cfg.jobs = j.at("jobs").get<int>();
	return cfg;
}

namespace {

std::vector<Challenge> sample_challenges_with_replacement(int width, int count, std::uint64_t seed)
{
	// With replacement: the metric suite averages per challenge, so a
	// repeat just reweights; small challenge spaces stay legal.
	Rng rng(seed);
	std::vector<Challenge> out;
	out.reserve(count);
	for (int i = 0; i < count; ++i) {
		Challenge ch(width);
		for (int b = 0; b < width; ++b)
			ch.set(b, static_cast<int>(rng.next_u64() & 1u));
		out.push_back(std::move(ch));
	}
	return out;
}

const VariationModel &vm_for(const Table2Config &cfg, PufCategory cat)
{
	switch (cat) {
	case PufCategory::Arbiter:
		return cfg.vm_arbiter;
	case PufCategory::RingOscillator:
		return cfg.vm_ring;
	case PufCategory::Butterfly:
		return cfg.vm_butterfly;
	}
	return cfg.vm_arbiter;
}

} // namespace

std::vector<Table2Row> run_table2(const Table2Config &cfg)
{
	cfg.metrics.validate();
	for (int taps : {cfg.taps_arbiter, cfg.taps_ring, cfg.taps_butterfly})
		if (taps < 0 || taps > cfg.challenge_width)
			throw ConfigError("run_table2: taps must be in [0, challenge_width]");

	std::vector<EnvCondition> sweep = default_env_sweep();
	if (static_cast<int>(sweep.size()) != cfg.metrics.s)
		throw ConfigError("run_table2: MetricConfig.s must match the default sweep size " +
				  std::to_string(sweep.size()));

	std::vector<Table2Row> rows;
	for (int c = 0; c < 3; ++c) {
		const CategorySpec &spec = kCategories[c];
		const std::uint64_t base = Rng::mix(cfg.seed, 0x2000 + c);
		const VariationModel &vm = vm_for(cfg, spec.category);

		std::vector<PufInstance> lot;
		for (int i = 0; i < cfg.metrics.k; ++i)
			lot.push_back(sample_instance(spec.category, cfg.challenge_width, cfg.response_width, vm,
						      Rng::mix(base, 1), Rng::mix(base, 100 + i)));

		auto challenges =
			sample_challenges_with_replacement(cfg.challenge_width, cfg.metrics.m, Rng::mix(base, 2));
		int taps = spec.category == PufCategory::Arbiter	  ? cfg.taps_arbiter
			   : spec.category == PufCategory::RingOscillator ? cfg.taps_ring
									  : cfg.taps_butterfly;
		// Rotation wiring: response bit t feeds challenge position t+1.
		FeedbackConfig fb;
		for (int t = 0; t < taps; ++t)
			fb.taps.push_back({t % cfg.response_width, t % cfg.challenge_width, (t + 1) % cfg.challenge_width});
		fb.validate(cfg.challenge_width, cfg.response_width);

		MetricConfig acyclic_cfg = cfg.metrics;
		acyclic_cfg.c = 1; // ABV of a single-cycle trajectory is the response itself
		rows.push_back({spec.acyclic_name,
				cyclic_metric_suite(lot, FeedbackConfig{}, challenges, acyclic_cfg, sweep, Rng::mix(base, 4))});
		rows.push_back({spec.cyclic_name,
				cyclic_metric_suite(lot, fb, challenges, cfg.metrics, sweep, Rng::mix(base, 5))});
	}
	return rows;
}

std::string table2_to_text(const std::vector<Table2Row> &rows)
{
	char line[160];
	std::string out;
	std::snprintf(line, sizeof(line), "%-12s %-12s %-12s %-12s\n", "PUF Design", "Uniqueness", "Uniformity",
		      "Reliability");
	out += line;
	out += std::string(50, '-') + "\n";
	for (const auto &r : rows) {
		std::snprintf(line, sizeof(line), "%-12s %-12.2f %-12.2f %-12.2f\n", r.design.c_str(),
			      r.report.uniqueness_pct, r.report.uniformity_pct, r.report.reliability_pct);
		out += line;
	}
	return out;
}

nlohmann::json table2_to_json(const Table2Config &cfg, const std::vector<Table2Row> &rows)
{
	nlohmann::json jrows = nlohmann::json::array();
	for (const auto &r : rows)
		jrows.push_back({{"design", r.design},
				 {"uniqueness_pct", r.report.uniqueness_pct},
				 {"uniformity_pct", r.report.uniformity_pct},
				 {"reliability_pct", r.report.reliability_pct}});
	return nlohmann::json{{"config", cfg.to_json()}, {"rows", std::move(jrows)}};
}

namespace {

nlohmann::json vm_to_json(const VariationModel &vm)
{
	return nlohmann::json{{"mu", vm.mu},
			      {"sigma_random", vm.sigma_random},
			      {"sigma_systematic", vm.sigma_systematic},
			      {"jitter_sigma", vm.jitter_sigma}};
}

VariationModel vm_from_json(const nlohmann::json &j)
{
	VariationModel vm;
	vm.mu = j.at("mu").get<double>();
	vm.sigma_random = j.at("sigma_random").get<double>();
	vm.sigma_systematic = j.at("sigma_systematic").get<double>();
	vm.jitter_sigma = j.at("jitter_sigma").get<double>();
	return vm;
}

} // namespace

nlohmann::json Table2Config::to_json() const
{
	return nlohmann::json{
		{"challenge_width", challenge_width},
		{"response_width", response_width},
		{"metrics", {{"k", metrics.k}, {"m", metrics.m}, {"s", metrics.s}, {"c", metrics.c}}},
		{"taps", {{"arbiter", taps_arbiter}, {"ring_oscillator", taps_ring}, {"butterfly", taps_butterfly}}},
		{"vm_arbiter", vm_to_json(vm_arbiter)},
		{"vm_ring", vm_to_json(vm_ring)},
		{"vm_butterfly", vm_to_json(vm_butterfly)},
		{"seed", seed}};
}

Table2Config Table2Config::from_json(const nlohmann::json &j)
{
	Table2Config cfg;
	cfg.challenge_width = j.at("challenge_width").get<int>();
	cfg.response_width = j.at("response_width").get<int>();
	cfg.metrics.k = j.at("metrics").at("k").get<int>();
	cfg.metrics.m = j.at("metrics").at("m").get<int>();
	cfg.metrics.s = j.at("metrics").at("s").get<int>();
	cfg.metrics.c = j.at("metrics").at("c").get<int>();
	cfg.taps_arbiter = j.at("taps").at("arbiter").get<int>();
	cfg.taps_ring = j.at("taps").at("ring_oscillator").get<int>();
	cfg.taps_butterfly = j.at("taps").at("butterfly").get<int>();
	cfg.vm_arbiter = vm_from_json(j.at("vm_arbiter"));
	cfg.vm_ring = vm_from_json(j.at("vm_ring"));
	cfg.vm_butterfly = vm_from_json(j.at("vm_butterfly"));
	cfg.seed = j.at("seed").get<std::uint64_t>();
	return cfg;
}

} // namespace cycpuf
