// cycpuf: command-line front end for the cyclic-PUF simulation toolkit.
// Progress and diagnostics go to stderr; data goes to stdout or files.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cycpuf/attack.hpp"
#include "cycpuf/cyclic.hpp"
#include "cycpuf/dataset.hpp"
#include "cycpuf/experiment.hpp"
#include "cycpuf/faults.hpp"
#include "cycpuf/io.hpp"
#include "cycpuf/metrics.hpp"
#include "cycpuf/puf.hpp"
#include "cycpuf/rng.hpp"
#include "cycpuf/rtlgen.hpp"

using nlohmann::json;
using namespace cycpuf;

namespace {

struct InstanceFlags {
	std::string category = "apuf";
	int nc = 64;
	int n = 1;
	double mu = 1.0;
	double sigma_random = 0.05;
	double sigma_systematic = 0.0;
	double jitter = 0.005;
	std::uint64_t lot_seed = 1;
	std::uint64_t instance_seed = 1;
	std::string id;
	std::string instance_file; // load instead of sampling when set
};

void add_instance_flags(CLI::App *cmd, InstanceFlags &f)
{
	cmd->add_option("--instance", f.instance_file, "Load instance from JSON instead of sampling");
	cmd->add_option("--category", f.category, "PUF category: apuf | ropuf | bpuf")->capture_default_str();
	cmd->add_option("--nc", f.nc, "Challenge width in bits")->capture_default_str();
	cmd->add_option("--n", f.n, "Response width in bits")->capture_default_str();
	cmd->add_option("--mu", f.mu, "Nominal delay")->capture_default_str();
	cmd->add_option("--sigma-random", f.sigma_random, "Per-instance delay std-dev")->capture_default_str();
	cmd->add_option("--sigma-systematic", f.sigma_systematic, "Per-lot shared delay std-dev")->capture_default_str();
	cmd->add_option("--jitter", f.jitter, "Per-evaluation noise std-dev (relative to mu)")->capture_default_str();
	cmd->add_option("--lot-seed", f.lot_seed, "Lot (systematic variation) seed")->capture_default_str();
	cmd->add_option("--instance-seed", f.instance_seed, "Instance (random variation) seed")->capture_default_str();
	cmd->add_option("--id", f.id, "Instance identifier");
}

PufInstance make_instance(const InstanceFlags &f)
{
	if (!f.instance_file.empty())
		return instance_from_json(json::parse(read_file(f.instance_file)));
	VariationModel vm{f.mu, f.sigma_random, f.sigma_systematic, f.jitter};
	return sample_instance(category_from_string(f.category), f.nc, f.n, vm, f.lot_seed, f.instance_seed, f.id);
}

struct TapsFlags {
	std::string list;                   // "resp:ch:pos,resp:ch:pos,..."
	int count = 0;
	std::uint64_t seed = 1;
	bool count_given = false;
};

void add_taps_flags(CLI::App *cmd, TapsFlags &f)
{
	cmd->add_option("--taps", f.list, "Explicit feedback taps as resp:ch:pos[,resp:ch:pos...]");
	cmd->add_option("--taps-count", f.count, "Number of random feedback taps")->each([&f](const std::string &) {
		f.count_given = true;
	});
	cmd->add_option("--taps-seed", f.seed, "Seed for random taps")->capture_default_str();
}

FeedbackConfig make_feedback(const TapsFlags &f, const PufInstance &inst)
{
	if (!f.list.empty()) {
		FeedbackConfig fb;
		std::size_t start = 0;
		const std::string &s = f.list;
		while (start < s.size()) {
			std::size_t end = s.find(',', start);
			if (end == std::string::npos)
				end = s.size();
			std::string triple = s.substr(start, end - start);
			int r, c, p;
			if (std::sscanf(triple.c_str(), "%d:%d:%d", &r, &c, &p) != 3)
				throw UsageError("bad tap triple \"" + triple + "\" (want resp:ch:pos)");
			fb.taps.push_back({r, c, p});
			start = end + 1;
		}
		fb.validate(inst.challenge_width, inst.response_width);
		return fb;
	}
	if (f.count_given)
		return FeedbackConfig::sample(inst.challenge_width, inst.response_width, f.count, f.seed);
	return FeedbackConfig{};
}

void write_or_print(const std::string &content, const std::string &path)
{
	if (path.empty())
		std::fwrite(content.data(), 1, content.size(), stdout);
	else
		write_file_atomic(path, content);
}

// ---------------------------------------------------------------- gen

struct GenArgs {
	InstanceFlags inst;
	TapsFlags taps;
	std::string instance_out;
	std::string dataset_out;
	int crps = 0;
	bool cyclic = false;
	int cycles = 64;
	std::uint64_t challenge_seed = 1;
	std::uint64_t split_seed = 0;
	bool split_given = false;
	int fault_count = 0;
	std::uint64_t fault_seed = 1;
	std::string fault_file;
	double env_scale = 1.0;
	std::string env_label = "nominal";
	bool jsonl = false;
};

int run_gen(const GenArgs &a)
{
	PufInstance inst = make_instance(a.inst);
	if (!a.instance_out.empty())
		write_file_atomic(a.instance_out, instance_to_json(inst).dump(2) + "\n");

	if (a.crps > 0) {
		if (a.dataset_out.empty())
			throw UsageError("gen: --crps requires --out");
		EnvCondition env{a.env_scale, a.env_label};
		FeedbackConfig fb = make_feedback(a.taps, inst);
		bool cyclic = a.cyclic || !fb.empty();

		std::optional<FaultSpec> fault;
		if (!a.fault_file.empty())
			fault = fault_spec_from_json(json::parse(read_file(a.fault_file)));
		else if (a.fault_count > 0)
			fault = sample_fault_spec(inst, fb, a.fault_count, a.fault_seed);

		CrpDataset ds;
		if (cyclic)
			ds = generate_cyclic(inst, fb, a.crps, a.cycles, a.challenge_seed, env, fault ? &*fault : nullptr);
		else {
			if (fault)
				throw UsageError("gen: fault injection needs a cyclic dataset (--cyclic)");
			ds = generate_acyclic(inst, a.crps, a.challenge_seed, env);
		}
		if (a.split_given)
			split_80_20(ds, a.split_seed);
		if (a.jsonl)
			write_jsonl(ds, a.dataset_out);
		else
			write_csv(ds, a.dataset_out);
		std::fprintf(stderr, "wrote %zu rows to %s\n", ds.rows.size(), a.dataset_out.c_str());
	} else if (a.instance_out.empty()) {
		std::fputs((instance_to_json(inst).dump(2) + "\n").c_str(), stdout);
	}
	return 0;
}

// ----------------------------------------------------------- simulate

struct SimulateArgs {
	InstanceFlags inst;
	TapsFlags taps;
	std::string challenge;
	int cycles = 8;
	double env_scale = 1.0;
	std::uint64_t noise_seed = 0;
	bool noise_given = false;
	bool json = false;
};

int run_simulate(const SimulateArgs &a)
{
	PufInstance inst = make_instance(a.inst);
	FeedbackConfig fb = make_feedback(a.taps, inst);
	Challenge ext = Challenge::from_string(a.challenge);
	EnvCondition env{a.env_scale, "cli"};
	std::optional<std::uint64_t> noise;
	if (a.noise_given)
		noise = a.noise_seed;
	Trajectory traj = simulate_trajectory(inst, fb, ext, a.cycles, env, noise);
	std::string out;
	if (a.json) {
		out = trajectory_to_json(traj).dump() + "\n";
	} else {
		for (const auto &r : traj.responses) {
			out += r.to_string();
			out += '\n';
		}
	}
	std::fwrite(out.data(), 1, out.size(), stdout);
	return 0;
}

// ------------------------------------------------------------ collect

struct CollectArgs {
	InstanceFlags inst;
	TapsFlags taps;
	std::vector<std::string> challenges;
	int num_challenges = 0;
	std::uint64_t challenge_seed = 1;
	int cycles = 64;
	std::string out;
};

int run_collect(const CollectArgs &a)
{
	PufInstance inst = make_instance(a.inst);
	FeedbackConfig fb = make_feedback(a.taps, inst);

	std::vector<Challenge> challenges;
	for (const auto &s : a.challenges)
		challenges.push_back(Challenge::from_string(s));
	if (a.num_challenges > 0) {
		Rng rng(a.challenge_seed);
		for (int i = 0; i < a.num_challenges; ++i) {
			Challenge ch(inst.challenge_width);
			for (int b = 0; b < inst.challenge_width; ++b)
				ch.set(b, static_cast<int>(rng.next_u64() & 1u));
			challenges.push_back(std::move(ch));
		}
	}
	if (challenges.empty())
		throw UsageError("collect: no challenges given (--challenge or --num-challenges)");

	std::string out;
	for (const auto &ch : challenges) {
		Crm crm = collect_crm(inst, fb, ch, a.cycles);
		out += crm_to_json(crm).dump();
		out += '\n';
	}
	write_or_print(out, a.out);
	return 0;
}

// ------------------------------------------------------------ metrics

void require_fields(const json &j, const std::vector<std::string> &fields, const std::string &where)
{
	for (const auto &f : fields)
		if (!j.contains(f))
			throw ConfigError("config: missing \"" + f + "\" in " + where);
}

int run_metrics(const std::string &config_path, const std::string &out_dir)
{
	json cfg = json::parse(read_file(config_path));
	if (cfg.contains("config") && cfg.contains("report"))
		cfg = cfg.at("config"); // accept a previously emitted report for replay
	require_fields(cfg,
		       {"category", "challenge_width", "response_width", "variation", "metrics", "lot_seed",
			"instance_seed_base", "challenge_seed", "noise_seed"},
		       "metrics config");
	require_fields(cfg.at("variation"), {"mu", "sigma_random", "sigma_systematic", "jitter_sigma"}, "variation");
	require_fields(cfg.at("metrics"), {"k", "m", "s", "c"}, "metrics");

	PufCategory category = category_from_string(cfg.at("category").get<std::string>());
	int nc = cfg.at("challenge_width").get<int>();
	int n = cfg.at("response_width").get<int>();
	VariationModel vm{cfg.at("variation").at("mu").get<double>(),
			  cfg.at("variation").at("sigma_random").get<double>(),
			  cfg.at("variation").at("sigma_systematic").get<double>(),
			  cfg.at("variation").at("jitter_sigma").get<double>()};
	MetricConfig mc{cfg.at("metrics").at("k").get<int>(), cfg.at("metrics").at("m").get<int>(),
			cfg.at("metrics").at("s").get<int>(), cfg.at("metrics").at("c").get<int>()};
	mc.validate();
	vm.validate();

	FeedbackConfig fb;
	if (cfg.contains("taps") && !cfg.at("taps").is_null()) {
		const json &taps = cfg.at("taps");
		if (taps.contains("list"))
			fb = feedback_from_json(json{{"taps", taps.at("list")}});
		else {
			require_fields(taps, {"count", "seed"}, "taps");
			fb = FeedbackConfig::sample(nc, n, taps.at("count").get<int>(), taps.at("seed").get<std::uint64_t>());
		}
		fb.validate(nc, n);
	}

	std::vector<PufInstance> lot;
	std::uint64_t lot_seed = cfg.at("lot_seed").get<std::uint64_t>();
	std::uint64_t inst_base = cfg.at("instance_seed_base").get<std::uint64_t>();
	for (int i = 0; i < mc.k; ++i)
		lot.push_back(sample_instance(category, nc, n, vm, lot_seed, Rng::mix(inst_base, i)));

	Rng chall_rng(cfg.at("challenge_seed").get<std::uint64_t>());
	std::vector<Challenge> challenges;
	for (int i = 0; i < mc.m; ++i) {
		Challenge ch(nc);
		for (int b = 0; b < nc; ++b)
			ch.set(b, static_cast<int>(chall_rng.next_u64() & 1u));
		challenges.push_back(std::move(ch));
	}

	auto sweep = default_env_sweep();
	if (static_cast<int>(sweep.size()) != mc.s)
		throw ConfigError("config: metrics.s must equal the default sweep size " + std::to_string(sweep.size()));

	std::uint64_t noise_seed = cfg.at("noise_seed").get<std::uint64_t>();
	MetricReport report = cyclic_metric_suite(lot, fb, challenges, mc, sweep, noise_seed);

	char text[256];
	std::snprintf(text, sizeof(text), "%-12s %-12s %-12s %-12s\n%s%-12s %-12.2f %-12.2f %-12.2f\n", "PUF Design",
		      "Uniqueness", "Uniformity", "Reliability", std::string(50, '-').c_str(),
		      (std::string(fb.empty() ? "" : "Cyc") + to_string(category)).c_str(), report.uniqueness_pct,
		      report.uniformity_pct, report.reliability_pct);

	json out{{"config", cfg}, {"report", report.to_json()}};
	if (out_dir.empty()) {
		std::fputs((out.dump(2) + "\n").c_str(), stdout);
	} else {
		std::filesystem::create_directories(out_dir);
		write_file_atomic(out_dir + "/metrics.json", out.dump(2) + "\n");
		write_file_atomic(out_dir + "/metrics.txt", text);
	}
	std::fputs(text, stderr);
	return 0;
}

// ------------------------------------------------------------- attack

struct AttackArgs {
	std::string dataset;
	std::string map = "parity";
	std::string model = "lr";
	double learning_rate = 0.05;
	int epochs = 50;
	int batch = 256;
	int hidden = 64;
	std::uint64_t seed = 1;
	std::string out;
	std::string model_out;
};

int run_attack(const AttackArgs &a)
{
	CrpDataset ds = is_gz_path(a.dataset) || a.dataset.ends_with(".csv") ? read_csv(a.dataset) : read_jsonl(a.dataset);
	TrainConfig cfg;
	cfg.kind = model_kind_from_string(a.model);
	cfg.map = feature_map_from_string(a.map);
	cfg.learning_rate = a.learning_rate;
	cfg.epochs = a.epochs;
	cfg.batch_size = a.batch;
	cfg.hidden = a.hidden;
	cfg.seed = a.seed;

	AttackModel model = train(ds, cfg);
	AttackReport report = evaluate(model, ds);
	std::fprintf(stderr, "train rows %zu, test rows %zu, accuracy %.2f%%\n", report.train_rows, report.test_rows,
		     report.test_accuracy_pct);

	json out{{"dataset", a.dataset},
		 {"model", model.to_json()["train_meta"]},
		 {"feature_map", a.map},
		 {"kind", a.model},
		 {"report", report.to_json()}};
	write_or_print(out.dump(2) + "\n", a.out);
	if (!a.model_out.empty())
		write_file_atomic(a.model_out, model.to_json().dump(2) + "\n");
	return 0;
}

// ------------------------------------------------------------- inject

struct InjectArgs {
	InstanceFlags inst;
	TapsFlags taps;
	int count = 1;
	std::uint64_t seed = 1;
	std::string out;
};

int run_inject(const InjectArgs &a)
{
	PufInstance inst = make_instance(a.inst);
	FeedbackConfig fb = make_feedback(a.taps, inst);
	FaultSpec spec = sample_fault_spec(inst, fb, a.count, a.seed);
	for (const auto &f : spec.faults)
		std::fprintf(stderr, "fault: %s at %s\n", to_string(f.kind).c_str(), to_string(f.site).c_str());
	write_or_print(fault_spec_to_json(spec).dump(2) + "\n", a.out);
	return 0;
}

// ------------------------------------------------------- emit-verilog

struct EmitArgs {
	std::string category = "apuf";
	int nc = 4;
	int n = 4;
	TapsFlags taps;
	std::string module_name;
	bool no_keep = false;
	std::string out;
	std::string testbench;
	std::vector<std::string> tb_challenges;
	int tb_cycles = 8;
};

int run_emit(const EmitArgs &a)
{
	RtlConfig cfg;
	cfg.category = category_from_string(a.category);
	cfg.challenge_width = a.nc;
	cfg.response_width = a.n;
	cfg.module_name = a.module_name;
	cfg.keep_attributes = !a.no_keep;
	if (!a.taps.list.empty() || a.taps.count_given) {
		PufInstance shape; // only widths matter for tap validation
		shape.challenge_width = a.nc;
		shape.response_width = a.n;
		cfg.feedback = make_feedback(a.taps, shape);
	}
	write_or_print(emit_verilog(cfg), a.out);
	if (!a.testbench.empty()) {
		std::vector<Challenge> challenges;
		for (const auto &s : a.tb_challenges)
			challenges.push_back(Challenge::from_string(s));
		write_file_atomic(a.testbench, emit_testbench(cfg, challenges, a.tb_cycles));
	}
	return 0;
}

// ------------------------------------------------------------- tables

struct Table1Args {
	std::string config;
	std::string out_dir;
	int nc = 64;
	std::size_t train_rows = 50000;
	int cycles = 64;
	std::uint64_t seed = 1;
	int jobs = 1;
};

int run_table1_cmd(const Table1Args &a)
{
	Table1Config cfg;
	if (!a.config.empty()) {
		json j = json::parse(read_file(a.config));
		cfg = Table1Config::from_json(j.contains("config") ? j.at("config") : j);
	} else {
		cfg.challenge_width = a.nc;
		cfg.train_rows = a.train_rows;
		cfg.cycles = a.cycles;
		cfg.seed = a.seed;
		cfg.jobs = a.jobs;
	}
	std::fprintf(stderr, "running table1: nc=%d train_rows=%zu cycles=%d seed=%llu\n", cfg.challenge_width,
		     cfg.train_rows, cfg.cycles, static_cast<unsigned long long>(cfg.seed));
	auto rows = run_table1(cfg);
	std::string text = table1_to_text(rows);
	std::fputs(text.c_str(), stdout);
	if (!a.out_dir.empty()) {
		std::filesystem::create_directories(a.out_dir);
		write_file_atomic(a.out_dir + "/table1.json", table1_to_json(cfg, rows).dump(2) + "\n");
		write_file_atomic(a.out_dir + "/table1.txt", text);
	}
	return 0;
}

struct Table2Args {
	std::string config;
	std::string out_dir;
	int nc = 4;
	int n = 4;
	int k = 10;
	int m = 256;
	int cycles = 64;
	int taps_apuf = 3;
	int taps_ropuf = 4;
	int taps_bpuf = 2;
	std::uint64_t seed = 1;
};

int run_table2_cmd(const Table2Args &a)
{
	Table2Config cfg;
	if (!a.config.empty()) {
		json j = json::parse(read_file(a.config));
		cfg = Table2Config::from_json(j.contains("config") ? j.at("config") : j);
	} else {
		cfg.challenge_width = a.nc;
		cfg.response_width = a.n;
		cfg.metrics.k = a.k;
		cfg.metrics.m = a.m;
		cfg.metrics.c = a.cycles;
		cfg.taps_arbiter = a.taps_apuf;
		cfg.taps_ring = a.taps_ropuf;
		cfg.taps_butterfly = a.taps_bpuf;
		cfg.seed = a.seed;
	}
	auto rows = run_table2(cfg);
	std::string text = table2_to_text(rows);
	std::fputs(text.c_str(), stdout);
	if (!a.out_dir.empty()) {
		std::filesystem::create_directories(a.out_dir);
		write_file_atomic(a.out_dir + "/table2.json", table2_to_json(cfg, rows).dump(2) + "\n");
		write_file_atomic(a.out_dir + "/table2.txt", text);
	}
	return 0;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"cycpuf: simulation and evaluation toolkit for cyclic delay-based PUFs"};
	app.require_subcommand(1);

	GenArgs gen;
	auto *cmd_gen = app.add_subcommand("gen", "Sample a PUF instance and optionally generate a CRP dataset");
	add_instance_flags(cmd_gen, gen.inst);
	add_taps_flags(cmd_gen, gen.taps);
	cmd_gen->add_option("--instance-out", gen.instance_out, "Write instance parameters to this JSON file");
	cmd_gen->add_option("--out", gen.dataset_out, "Dataset output path (.csv/.jsonl, .gz ok)");
	cmd_gen->add_option("--crps", gen.crps, "Number of distinct challenges to draw");
	cmd_gen->add_flag("--cyclic", gen.cyclic, "Generate CRP-equivalents from cyclic trajectories");
	cmd_gen->add_option("--cycles", gen.cycles, "Cycles per held challenge")->capture_default_str();
	cmd_gen->add_option("--challenge-seed", gen.challenge_seed, "Challenge sampling seed")->capture_default_str();
	cmd_gen->add_option("--split-seed", gen.split_seed, "80/20 split seed (no split when absent)")
		->each([&gen](const std::string &) { gen.split_given = true; });
	cmd_gen->add_option("--fault-count", gen.fault_count, "Sample this many faults into the cyclic PUF");
	cmd_gen->add_option("--fault-seed", gen.fault_seed, "Fault sampling seed")->capture_default_str();
	cmd_gen->add_option("--faults", gen.fault_file, "Load a fault spec JSON instead of sampling");
	cmd_gen->add_option("--env-scale", gen.env_scale, "Delay scale of the generation condition")->capture_default_str();
	cmd_gen->add_option("--env-label", gen.env_label, "Condition label")->capture_default_str();
	cmd_gen->add_flag("--jsonl", gen.jsonl, "Write JSON-lines instead of CSV");

	SimulateArgs sim;
	auto *cmd_sim = app.add_subcommand("simulate", "Iterate a held challenge and print the response per cycle");
	add_instance_flags(cmd_sim, sim.inst);
	add_taps_flags(cmd_sim, sim.taps);
	cmd_sim->add_option("--challenge", sim.challenge, "Challenge bitstring (MSB first)")->required();
	cmd_sim->add_option("--cycles", sim.cycles, "Cycles to simulate")->capture_default_str();
	cmd_sim->add_option("--env-scale", sim.env_scale, "Delay scale")->capture_default_str();
	cmd_sim->add_option("--noise-seed", sim.noise_seed, "Enable evaluation jitter with this seed")
		->each([&sim](const std::string &) { sim.noise_given = true; });
	cmd_sim->add_flag("--json", sim.json, "Emit the trajectory as a JSON line instead of raw bitstrings");

	CollectArgs col;
	auto *cmd_col = app.add_subcommand("collect", "Classify challenge-response modes and dump CRMs as JSON lines");
	add_instance_flags(cmd_col, col.inst);
	add_taps_flags(cmd_col, col.taps);
	cmd_col->add_option("--challenge", col.challenges, "Challenge bitstring (repeatable)");
	cmd_col->add_option("--num-challenges", col.num_challenges, "Draw this many random challenges");
	cmd_col->add_option("--challenge-seed", col.challenge_seed, "Random challenge seed")->capture_default_str();
	cmd_col->add_option("--cycles", col.cycles, "Observation window")->capture_default_str();
	cmd_col->add_option("--out", col.out, "Output path (stdout when absent)");

	std::string metrics_config, metrics_out_dir;
	auto *cmd_met = app.add_subcommand("metrics", "Run the functional-metric suite from a JSON config");
	cmd_met->add_option("--config", metrics_config, "Experiment config JSON")->required();
	cmd_met->add_option("--out-dir", metrics_out_dir, "Write metrics.json/metrics.txt here (stdout when absent)");

	AttackArgs att;
	auto *cmd_att = app.add_subcommand("attack", "Train and evaluate a modeling attack on a dataset");
	cmd_att->add_option("--dataset", att.dataset, "CRP dataset (.csv or .jsonl, sidecar meta required)")->required();
	cmd_att->add_option("--map", att.map, "Feature map: parity | raw | raw+parity")->capture_default_str();
	cmd_att->add_option("--model", att.model, "Model: lr | mlp")->capture_default_str();
	cmd_att->add_option("--lr", att.learning_rate, "Learning rate")->capture_default_str();
	cmd_att->add_option("--epochs", att.epochs, "Training epochs")->capture_default_str();
	cmd_att->add_option("--batch", att.batch, "Mini-batch size")->capture_default_str();
	cmd_att->add_option("--hidden", att.hidden, "MLP hidden units")->capture_default_str();
	cmd_att->add_option("--seed", att.seed, "Training seed")->capture_default_str();
	cmd_att->add_option("--out", att.out, "Report JSON path (stdout when absent)");
	cmd_att->add_option("--model-out", att.model_out, "Write trained model JSON here");

	InjectArgs inj;
	auto *cmd_inj = app.add_subcommand("inject", "Sample a fault spec for a PUF + feedback wiring");
	add_instance_flags(cmd_inj, inj.inst);
	add_taps_flags(cmd_inj, inj.taps);
	cmd_inj->add_option("--count", inj.count, "Number of faults")->capture_default_str();
	cmd_inj->add_option("--seed", inj.seed, "Fault site/kind seed")->capture_default_str();
	cmd_inj->add_option("--out", inj.out, "Fault spec JSON path (stdout when absent)");

	EmitArgs emit;
	auto *cmd_emit = app.add_subcommand("emit-verilog", "Emit structural Verilog for a PUF configuration");
	cmd_emit->add_option("--category", emit.category, "apuf | ropuf | bpuf")->capture_default_str();
	cmd_emit->add_option("--nc", emit.nc, "Challenge width")->capture_default_str();
	cmd_emit->add_option("--n", emit.n, "Response width")->capture_default_str();
	add_taps_flags(cmd_emit, emit.taps);
	cmd_emit->add_option("--module-name", emit.module_name, "Override the module name");
	cmd_emit->add_flag("--no-keep", emit.no_keep, "Omit dont_touch attributes");
	cmd_emit->add_option("-o,--out", emit.out, "Verilog output path (stdout when absent)");
	cmd_emit->add_option("--testbench", emit.testbench, "Also emit a testbench to this path");
	cmd_emit->add_option("--tb-challenge", emit.tb_challenges, "Testbench challenge (repeatable)");
	cmd_emit->add_option("--tb-cycles", emit.tb_cycles, "Cycles per testbench challenge")->capture_default_str();

	Table1Args t1;
	auto *cmd_t1 = app.add_subcommand("table1", "Modeling-attack benchmark across all nine design cells");
	cmd_t1->add_option("--config", t1.config, "Load a full experiment config JSON (ignores other flags)");
	cmd_t1->add_option("--out-dir", t1.out_dir, "Write table1.json/table1.txt here");
	cmd_t1->add_option("--nc", t1.nc, "Challenge width")->capture_default_str();
	cmd_t1->add_option("--train-rows", t1.train_rows, "Training rows per cell")->capture_default_str();
	cmd_t1->add_option("--cycles", t1.cycles, "Cycles per held challenge")->capture_default_str();
	cmd_t1->add_option("--seed", t1.seed, "Master seed")->capture_default_str();
	cmd_t1->add_option("--jobs", t1.jobs, "Run category pipelines in parallel")->capture_default_str();

	Table2Args t2;
	auto *cmd_t2 = app.add_subcommand("table2", "Functional-metric comparison of acyclic vs cyclic designs");
	cmd_t2->add_option("--config", t2.config, "Load a full experiment config JSON (ignores other flags)");
	cmd_t2->add_option("--out-dir", t2.out_dir, "Write table2.json/table2.txt here");
	cmd_t2->add_option("--nc", t2.nc, "Challenge width")->capture_default_str();
	cmd_t2->add_option("--n", t2.n, "Response width")->capture_default_str();
	cmd_t2->add_option("--k", t2.k, "Instances per lot")->capture_default_str();
	cmd_t2->add_option("--m", t2.m, "Challenges per instance")->capture_default_str();
	cmd_t2->add_option("--cycles", t2.cycles, "Cycles per held challenge")->capture_default_str();
	cmd_t2->add_option("--taps-apuf", t2.taps_apuf, "Feedback taps for the cyclic arbiter")->capture_default_str();
	cmd_t2->add_option("--taps-ropuf", t2.taps_ropuf, "Feedback taps for the cyclic ring oscillator")->capture_default_str();
	cmd_t2->add_option("--taps-bpuf", t2.taps_bpuf, "Feedback taps for the cyclic butterfly")->capture_default_str();
	cmd_t2->add_option("--seed", t2.seed, "Master seed")->capture_default_str();

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	} catch (const CLI::CallForAllHelp &e) {
		return app.exit(e);
	} catch (const CLI::ParseError &e) {
		app.exit(e);
		return 2;
	}

	try {
		if (cmd_gen->parsed())
			return run_gen(gen);
		if (cmd_sim->parsed())
			return run_simulate(sim);
		if (cmd_col->parsed())
			return run_collect(col);
		if (cmd_met->parsed())
			return run_metrics(metrics_config, metrics_out_dir);
		if (cmd_att->parsed())
			return run_attack(att);
		if (cmd_inj->parsed())
			return run_inject(inj);
		if (cmd_emit->parsed())
			return run_emit(emit);
		if (cmd_t1->parsed())
			return run_table1_cmd(t1);
		if (cmd_t2->parsed())
			return run_table2_cmd(t2);
	} catch (const UsageError &e) {
		std::fprintf(stderr, "usage error: %s\n", e.what());
		return 2;
	} catch (const ConfigError &e) {
		std::fprintf(stderr, "config error: %s\n", e.what());
		return 3;
	} catch (const IoError &e) {
		std::fprintf(stderr, "io error: %s\n", e.what());
		return 4;
	} catch (const nlohmann::json::exception &e) {
		std::fprintf(stderr, "config error: %s\n", e.what());
		return 3;
	} catch (const std::exception &e) {
		std::fprintf(stderr, "error: %s\n", e.what());
		return 1;
	}
	return 0;
}
