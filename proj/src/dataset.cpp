#include "cycpuf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <unordered_map>
#include <unordered_set>

#include "cycpuf/io.hpp"
#include "cycpuf/rng.hpp"

namespace cycpuf {

namespace {

std::vector<Challenge> sample_distinct_challenges(int width, int count, std::uint64_t seed)
{
	if (count < 1)
		throw ConfigError("dataset generation: num_challenges must be >= 1");
	// Capacity check only matters when 2^width fits in 64 bits.
	if (width < 63) {
		std::uint64_t capacity = 1ull << width;
		if (static_cast<std::uint64_t>(count) > capacity)
			throw ConfigError("dataset generation: " + std::to_string(count) + " distinct challenges infeasible at width " +
					  std::to_string(width));
	}

	Rng rng(seed);
	std::vector<Challenge> out;
	out.reserve(count);

	if (width <= 24 && static_cast<std::uint64_t>(count) * 2 >= (1ull << width)) {
		// Dense request: partial Fisher-Yates over the enumerated space.
		std::uint64_t capacity = 1ull << width;
		std::vector<std::uint64_t> space(capacity);
		for (std::uint64_t v = 0; v < capacity; ++v)
			space[v] = v;
		for (int i = 0; i < count; ++i) {
			std::uint64_t j = i + rng.next_below(capacity - i);
			std::swap(space[i], space[j]);
			out.push_back(Challenge::from_uint(space[i], width));
		}
		return out;
	}

	std::unordered_set<std::string> seen;
	while (static_cast<int>(out.size()) < count) {
		Challenge ch(width);
		for (int b = 0; b < width; ++b)
			ch.set(b, static_cast<int>(rng.next_u64() & 1u));
		auto [it, fresh] = seen.insert(ch.to_string());
		if (fresh)
			out.push_back(std::move(ch));
	}
	return out;
}

} // namespace

CrpDataset generate_acyclic(const PufInstance &inst, int num_challenges, std::uint64_t challenge_seed, const EnvCondition &env)
{
	CrpDataset ds;
	ds.meta.category = inst.category;
	ds.meta.cyclic = false;
	ds.meta.challenge_width = inst.challenge_width;
	ds.meta.response_width = inst.response_width;
	ds.meta.instance_id = inst.instance_id;
	ds.meta.lot_seed = inst.lot_seed;
	ds.meta.instance_seed = inst.instance_seed;
	ds.meta.variation = inst.variation;
	ds.meta.num_challenges = num_challenges;
	ds.meta.cycles = 1;
	ds.meta.challenge_seed = challenge_seed;
	ds.meta.env = env;

	auto challenges = sample_distinct_challenges(inst.challenge_width, num_challenges, challenge_seed);
	ds.rows.reserve(num_challenges);
	for (auto &ch : challenges) {
		CrpRow row;
		row.instance_id = inst.instance_id;
		row.response = eval_acyclic(inst, ch, env, std::nullopt);
		row.challenge = std::move(ch);
		row.cycle_index = 1;
		row.faulty = false;
		ds.rows.push_back(std::move(row));
	}
	return ds;
}

CrpDataset generate_cyclic(const PufInstance &inst, const FeedbackConfig &fb, int num_challenges, int cycles,
			   std::uint64_t challenge_seed, const EnvCondition &env, const FaultSpec *fault)
{
	if (cycles < 1)
		throw ConfigError("generate_cyclic: cycles must be >= 1");
	fb.validate(inst.challenge_width, inst.response_width);

	CrpDataset ds;
	ds.meta.category = inst.category;
	ds.meta.cyclic = true;
	ds.meta.challenge_width = inst.challenge_width;
	ds.meta.response_width = inst.response_width;
	ds.meta.instance_id = inst.instance_id;
	ds.meta.lot_seed = inst.lot_seed;
	ds.meta.instance_seed = inst.instance_seed;
	ds.meta.variation = inst.variation;
	ds.meta.feedback = fb;
	ds.meta.num_challenges = num_challenges;
	ds.meta.cycles = cycles;
	ds.meta.challenge_seed = challenge_seed;
	ds.meta.env = env;

	std::optional<FaultyCyclicPuf> faulty;
	if (fault && !fault->empty()) {
		ds.meta.fault = *fault;
		faulty.emplace(inst, fb, *fault);
	}

	auto challenges = sample_distinct_challenges(inst.challenge_width, num_challenges, challenge_seed);
	ds.rows.reserve(static_cast<std::size_t>(num_challenges) * cycles);
	for (const auto &ch : challenges) {
		Trajectory traj = faulty ? faulty->simulate(ch, cycles, env) : simulate_trajectory(inst, fb, ch, cycles, env);
		for (int i = 0; i < cycles; ++i) {
			CrpRow row;
			row.instance_id = inst.instance_id;
			row.challenge = ch;
			row.response = traj.responses[i];
			row.cycle_index = i + 1;
			row.faulty = static_cast<bool>(faulty);
			ds.rows.push_back(std::move(row));
		}
	}
	return ds;
}

void split_80_20(CrpDataset &ds, std::uint64_t seed)
{
	if (ds.rows.size() < 5)
		throw UsageError("split_80_20: needs at least 5 rows");

	// Group row indices by external challenge, first-appearance order.
	std::vector<std::vector<std::size_t>> groups;
	{
		std::unordered_map<std::string, std::size_t> index_of;
		for (std::size_t r = 0; r < ds.rows.size(); ++r) {
			const std::string key = ds.rows[r].challenge.to_string();
			auto [it, fresh] = index_of.try_emplace(key, groups.size());
			if (fresh)
				groups.emplace_back();
			groups[it->second].push_back(r);
		}
	}
	if (groups.size() < 2)
		throw UsageError("split_80_20: needs at least 2 distinct challenges");

	Rng rng(seed);
	for (std::size_t i = groups.size(); i-- > 1;)
		std::swap(groups[i], groups[rng.next_below(i + 1)]);

	// Take shuffled groups while they bring the train row count closer
	// to 80%; never let either side go empty.
	const double target = 0.8 * static_cast<double>(ds.rows.size());
	std::size_t taken_rows = 0, taken_groups = 0;
	for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
		double with = static_cast<double>(taken_rows + groups[g].size());
		if (taken_groups > 0 && std::abs(with - target) >= std::abs(static_cast<double>(taken_rows) - target))
			break;
		taken_rows += groups[g].size();
		++taken_groups;
	}

	ds.train_idx.clear();
	ds.test_idx.clear();
	for (std::size_t g = 0; g < groups.size(); ++g) {
		auto &side = g < taken_groups ? ds.train_idx : ds.test_idx;
		side.insert(side.end(), groups[g].begin(), groups[g].end());
	}
	std::sort(ds.train_idx.begin(), ds.train_idx.end());
	std::sort(ds.test_idx.begin(), ds.test_idx.end());
	ds.meta.split_seed = seed;
}

CrpDataset replay_dataset(const DatasetMeta &meta)
{
	PufInstance inst = sample_instance(meta.category, meta.challenge_width, meta.response_width, meta.variation,
					   meta.lot_seed, meta.instance_seed, meta.instance_id);
	CrpDataset ds;
	if (meta.cyclic)
		ds = generate_cyclic(inst, meta.feedback, meta.num_challenges, meta.cycles, meta.challenge_seed, meta.env,
				     meta.fault ? &*meta.fault : nullptr);
	else
		ds = generate_acyclic(inst, meta.num_challenges, meta.challenge_seed, meta.env);
	if (meta.split_seed)
		split_80_20(ds, *meta.split_seed);
	return ds;
}

nlohmann::json DatasetMeta::to_json() const
{
	nlohmann::json j;
	j["category"] = to_string(category);
	j["cyclic"] = cyclic;
	j["challenge_width"] = challenge_width;
	j["response_width"] = response_width;
	j["instance_id"] = instance_id;
	j["lot_seed"] = lot_seed;
	j["instance_seed"] = instance_seed;
	j["variation"] = {{"mu", variation.mu},
			  {"sigma_random", variation.sigma_random},
			  {"sigma_systematic", variation.sigma_systematic},
			  {"jitter_sigma", variation.jitter_sigma}};
	j["feedback"] = feedback_to_json(feedback);
	j["fault"] = fault ? fault_spec_to_json(*fault) : nlohmann::json(nullptr);
	j["num_challenges"] = num_challenges;
	j["cycles"] = cycles;
	j["challenge_seed"] = challenge_seed;
	j["env"] = {{"delay_scale", env.delay_scale}, {"label", env.label}};
	j["split_seed"] = split_seed ? nlohmann::json(*split_seed) : nlohmann::json(nullptr);
	return j;
}

DatasetMeta DatasetMeta::from_json(const nlohmann::json &j)
{
	DatasetMeta meta;
	meta.category = category_from_string(j.at("category").get<std::string>());
	meta.cyclic = j.at("cyclic").get<bool>();
	meta.challenge_width = j.at("challenge_width").get<int>();
	meta.response_width = j.at("response_width").get<int>();
	meta.instance_id = j.at("instance_id").get<std::string>();
	meta.lot_seed = j.at("lot_seed").get<std::uint64_t>();
	meta.instance_seed = j.at("instance_seed").get<std::uint64_t>();
	const auto &vm = j.at("variation");
	meta.variation.mu = vm.at("mu").get<double>();
	meta.variation.sigma_random = vm.at("sigma_random").get<double>();
	meta.variation.sigma_systematic = vm.at("sigma_systematic").get<double>();
	meta.variation.jitter_sigma = vm.at("jitter_sigma").get<double>();
	meta.feedback = feedback_from_json(j.at("feedback"));
	if (!j.at("fault").is_null())
		meta.fault = fault_spec_from_json(j.at("fault"));
	meta.num_challenges = j.at("num_challenges").get<int>();
	meta.cycles = j.at("cycles").get<int>();
	meta.challenge_seed = j.at("challenge_seed").get<std::uint64_t>();
	meta.env.delay_scale = j.at("env").at("delay_scale").get<double>();
	meta.env.label = j.at("env").at("label").get<std::string>();
	if (!j.at("split_seed").is_null())
		meta.split_seed = j.at("split_seed").get<std::uint64_t>();
	return meta;
}

namespace {

const char *kCsvHeader = "instance_id,challenge,response,cycle_index,faulty";

std::string meta_path_for(const std::string &path) { return path + ".meta.json"; }

void write_meta_sidecar(const CrpDataset &ds, const std::string &path)
{
	write_file_atomic(meta_path_for(path), ds.meta.to_json().dump(2) + "\n");
}

/// Re-derives the split recorded in the sidecar so readers see the same
/// partition the writer had.
void restore_split(CrpDataset &ds)
{
	if (ds.meta.split_seed) {
		std::uint64_t seed = *ds.meta.split_seed;
		split_80_20(ds, seed);
	}
}

void load_meta_sidecar(CrpDataset &ds, const std::string &path)
{
	const std::string mp = meta_path_for(path);
	std::error_code ec;
	if (!std::filesystem::exists(mp, ec))
		return; // bare data file; caller must split before training
	ds.meta = DatasetMeta::from_json(nlohmann::json::parse(read_file(mp)));
	restore_split(ds);
}

std::vector<std::string> split_fields(const std::string &line)
{
	std::vector<std::string> fields;
	std::size_t start = 0;
	while (true) {
		std::size_t comma = line.find(',', start);
		if (comma == std::string::npos) {
			fields.push_back(line.substr(start));
			break;
		}
		fields.push_back(line.substr(start, comma - start));
		start = comma + 1;
	}
	return fields;
}

} // namespace

void write_csv(const CrpDataset &ds, const std::string &path)
{
	std::string out;
	out.reserve(ds.rows.size() * 32 + 64);
	out += kCsvHeader;
	out += '\n';
	for (const auto &row : ds.rows) {
		out += row.instance_id;
		out += ',';
		out += row.challenge.to_string();
		out += ',';
		out += row.response.to_string();
		out += ',';
		out += std::to_string(row.cycle_index);
		out += ',';
		out += row.faulty ? '1' : '0';
		out += '\n';
	}
	write_file_atomic(path, out);
	write_meta_sidecar(ds, path);
}

CrpDataset read_csv(const std::string &path)
{
	auto lines = split_lines(read_file(path));
	if (lines.empty() || lines[0] != kCsvHeader)
		throw IoError("bad CSV header in " + path);

	CrpDataset ds;
	ds.rows.reserve(lines.size() - 1);
	for (std::size_t i = 1; i < lines.size(); ++i) {
		if (lines[i].empty())
			continue;
		auto fields = split_fields(lines[i]);
		if (fields.size() != 5)
			throw IoError(path + ":" + std::to_string(i + 1) + ": expected 5 fields");
		CrpRow row;
		row.instance_id = fields[0];
		row.challenge = Challenge::from_string(fields[1]);
		row.response = BitVec::from_string(fields[2]);
		row.cycle_index = std::stoi(fields[3]);
		row.faulty = fields[4] == "1";
		ds.rows.push_back(std::move(row));
	}
	load_meta_sidecar(ds, path);
	return ds;
}

void write_jsonl(const CrpDataset &ds, const std::string &path)
{
	std::string out;
	for (const auto &row : ds.rows) {
		nlohmann::json j{{"instance_id", row.instance_id},
				 {"challenge", row.challenge.to_string()},
				 {"response", row.response.to_string()},
				 {"cycle_index", row.cycle_index},
				 {"faulty", row.faulty}};
		out += j.dump();
		out += '\n';
	}
	write_file_atomic(path, out);
	write_meta_sidecar(ds, path);
}

CrpDataset read_jsonl(const std::string &path)
{
	CrpDataset ds;
	for (const auto &line : split_lines(read_file(path))) {
		if (line.empty())
			continue;
		nlohmann::json j = nlohmann::json::parse(line);
		CrpRow row;
		row.instance_id = j.at("instance_id").get<std::string>();
		row.challenge = Challenge::from_string(j.at("challenge").get<std::string>());
		row.response = BitVec::from_string(j.at("response").get<std::string>());
		row.cycle_index = j.at("cycle_index").get<int>();
		row.faulty = j.at("faulty").get<bool>();
		ds.rows.push_back(std::move(row));
	}
	load_meta_sidecar(ds, path);
	return ds;
}

} // namespace cycpuf
