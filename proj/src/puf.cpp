#include "cycpuf/puf.hpp"

#include <algorithm>
#include <cmath>

#include "cycpuf/features.hpp"
#include "cycpuf/rng.hpp"

namespace cycpuf {

std::string to_string(PufCategory c)
{
	switch (c) {
	case PufCategory::Arbiter:
		return "arbiter";
	case PufCategory::RingOscillator:
		return "ring_oscillator";
	case PufCategory::Butterfly:
		return "butterfly";
	}
	return "?";
}

PufCategory category_from_string(const std::string &s)
{
	if (s == "arbiter" || s == "apuf")
		return PufCategory::Arbiter;
	if (s == "ring_oscillator" || s == "ropuf")
		return PufCategory::RingOscillator;
	if (s == "butterfly" || s == "bpuf")
		return PufCategory::Butterfly;
	throw ConfigError("unknown PUF category \"" + s + "\"");
}

void VariationModel::validate() const
{
	if (!(mu > 0.0))
		throw ConfigError("VariationModel: mu must be > 0");
	if (sigma_random < 0.0 || sigma_systematic < 0.0 || jitter_sigma < 0.0)
		throw ConfigError("VariationModel: sigmas must be >= 0");
}

void EnvCondition::validate() const
{
	if (!(delay_scale > 0.0))
		throw ConfigError("EnvCondition: delay_scale must be > 0");
}

namespace {

/// Draws one delay-like parameter. Both streams advance exactly once per
/// parameter so that zero-variance components stay aligned across lots
/// and instances.
double draw_delay(const VariationModel &vm, Rng &lot_rng, Rng &inst_rng)
{
	double d = vm.mu + vm.sigma_systematic * lot_rng.next_gaussian() + vm.sigma_random * inst_rng.next_gaussian();
	return std::max(d, 0.01 * vm.mu); // floor keeps delays physical
}

} // namespace

PufInstance sample_instance(PufCategory category, int challenge_width, int response_width, const VariationModel &vm,
			    std::uint64_t lot_seed, std::uint64_t instance_seed, std::string instance_id)
{
	if (challenge_width < 1 || response_width < 1)
		throw ConfigError("sample_instance: widths must be >= 1");
	vm.validate();

	PufInstance inst;
	inst.category = category;
	inst.challenge_width = challenge_width;
	inst.response_width = response_width;
	inst.lot_seed = lot_seed;
	inst.instance_seed = instance_seed;
	inst.variation = vm;
	inst.instance_id = instance_id.empty()
				   ? to_string(category) + "-" + std::to_string(lot_seed) + "-" + std::to_string(instance_seed)
				   : std::move(instance_id);

	Rng lot_rng(lot_seed);
	Rng inst_rng(instance_seed);

	switch (category) {
	case PufCategory::Arbiter: {
		ArbiterParams p;
		p.chains.resize(response_width);
		for (auto &chain : p.chains) {
			chain.resize(challenge_width);
			for (auto &st : chain) {
				st.top_straight = draw_delay(vm, lot_rng, inst_rng);
				st.top_cross = draw_delay(vm, lot_rng, inst_rng);
				st.bottom_straight = draw_delay(vm, lot_rng, inst_rng);
				st.bottom_cross = draw_delay(vm, lot_rng, inst_rng);
			}
		}
		inst.params = std::move(p);
		break;
	}
	case PufCategory::RingOscillator: {
		RingOscillatorParams p;
		p.ring_a.resize(response_width);
		p.ring_b.resize(response_width);
		for (int bit = 0; bit < response_width; ++bit) {
			p.ring_a[bit].resize(challenge_width);
			for (auto &st : p.ring_a[bit]) {
				st.inv0 = draw_delay(vm, lot_rng, inst_rng);
				st.inv1 = draw_delay(vm, lot_rng, inst_rng);
			}
			p.ring_b[bit].resize(challenge_width);
			for (auto &st : p.ring_b[bit]) {
				st.inv0 = draw_delay(vm, lot_rng, inst_rng);
				st.inv1 = draw_delay(vm, lot_rng, inst_rng);
			}
		}
		inst.params = std::move(p);
		break;
	}
	case PufCategory::Butterfly: {
		// Each mismatch coefficient is the difference of two delay
		// draws, so it is zero-mean unless the lot bias pushes the
		// pair apart. Settling noise matches the jitter scale.
		ButterflyParams p;
		p.weights.resize(response_width);
		for (auto &w : p.weights) {
			w.resize(challenge_width + 1);
			for (auto &coeff : w) {
				double pos = draw_delay(vm, lot_rng, inst_rng);
				double neg = draw_delay(vm, lot_rng, inst_rng);
				coeff = pos - neg;
			}
		}
		p.meta_sigma = vm.jitter_sigma * vm.mu;
		inst.params = std::move(p);
		break;
	}
	}
	return inst;
}

namespace {

int arbiter_bit(const ArbiterParams &p, int bit, const Challenge &ch, double scale, double jitter, Rng *noise)
{
	const auto &chain = p.chains[bit];
	double top = 0.0, bottom = 0.0;
	for (std::size_t k = 0; k < chain.size(); ++k) {
		const ArbiterStage &st = chain[k];
		if (ch[k] == 0) {
			top += st.top_straight;
			bottom += st.bottom_straight;
		} else {
			// crossed: the rails swap; the cross delay is named
			// after the output rail it lands on
			double t = bottom + st.top_cross;
			double b = top + st.bottom_cross;
			top = t;
			bottom = b;
		}
	}
	top *= scale;
	bottom *= scale;
	if (noise) {
		top += jitter * noise->next_gaussian();
		bottom += jitter * noise->next_gaussian();
	}
	return top < bottom ? 1 : 0;
}

int ring_oscillator_bit(const RingOscillatorParams &p, int bit, const Challenge &ch, double scale, double jitter, Rng *noise)
{
	double sum_a = 0.0, sum_b = 0.0;
	const auto &ra = p.ring_a[bit];
	const auto &rb = p.ring_b[bit];
	for (std::size_t k = 0; k < ra.size(); ++k) {
		sum_a += ch[k] ? ra[k].inv1 : ra[k].inv0;
		sum_b += ch[k] ? rb[k].inv1 : rb[k].inv0;
	}
	double period_a = 2.0 * sum_a * scale;
	double period_b = 2.0 * sum_b * scale;
	if (noise) {
		period_a += jitter * noise->next_gaussian();
		period_b += jitter * noise->next_gaussian();
	}
	// freq(a) > freq(b) iff period(a) < period(b)
	return period_a < period_b ? 1 : 0;
}

int butterfly_bit(const ButterflyParams &p, int bit, const std::vector<double> &phi, double scale, Rng *noise)
{
	const auto &w = p.weights[bit];
	double d = 0.0;
	for (std::size_t k = 0; k < w.size(); ++k)
		d += w[k] * phi[k];
	d *= scale;
	if (noise)
		d += p.meta_sigma * noise->next_gaussian();
	return d > 0.0 ? 1 : 0;
}

} // namespace

ResponseVector eval_acyclic(const PufInstance &inst, const Challenge &ch, const EnvCondition &env,
			    std::optional<std::uint64_t> noise_seed)
{
	if (static_cast<int>(ch.size()) != inst.challenge_width)
		throw UsageError("eval_acyclic: challenge width " + std::to_string(ch.size()) + " != instance width " +
				 std::to_string(inst.challenge_width));
	env.validate();

	std::optional<Rng> noise;
	if (noise_seed)
		noise.emplace(*noise_seed);
	Rng *np = noise ? &*noise : nullptr;
	const double jitter = inst.variation.jitter_sigma * inst.variation.mu;

	ResponseVector resp(inst.response_width);
	if (const auto *ap = std::get_if<ArbiterParams>(&inst.params)) {
		for (int bit = 0; bit < inst.response_width; ++bit)
			resp.set(bit, arbiter_bit(*ap, bit, ch, env.delay_scale, jitter, np));
	} else if (const auto *rp = std::get_if<RingOscillatorParams>(&inst.params)) {
		for (int bit = 0; bit < inst.response_width; ++bit)
			resp.set(bit, ring_oscillator_bit(*rp, bit, ch, env.delay_scale, jitter, np));
	} else {
		const auto &bp = std::get<ButterflyParams>(inst.params);
		std::vector<double> phi;
		parity_features(ch, phi);
		for (int bit = 0; bit < inst.response_width; ++bit)
			resp.set(bit, butterfly_bit(bp, bit, phi, env.delay_scale, np));
	}
	return resp;
}

namespace {

using nlohmann::json;

json variation_to_json(const VariationModel &vm)
{
	return json{{"mu", vm.mu},
		    {"sigma_random", vm.sigma_random},
		    {"sigma_systematic", vm.sigma_systematic},
		    {"jitter_sigma", vm.jitter_sigma}};
}

VariationModel variation_from_json(const json &j)
{
	VariationModel vm;
	vm.mu = j.at("mu").get<double>();
	vm.sigma_random = j.at("sigma_random").get<double>();
	vm.sigma_systematic = j.at("sigma_systematic").get<double>();
	vm.jitter_sigma = j.at("jitter_sigma").get<double>();
	vm.validate();
	return vm;
}

} // namespace

nlohmann::json instance_to_json(const PufInstance &inst)
{
	json j;
	j["category"] = to_string(inst.category);
	j["challenge_width"] = inst.challenge_width;
	j["response_width"] = inst.response_width;
	j["instance_id"] = inst.instance_id;
	j["lot_seed"] = inst.lot_seed;
	j["instance_seed"] = inst.instance_seed;
	j["variation"] = variation_to_json(inst.variation);

	json params;
	if (const auto *ap = std::get_if<ArbiterParams>(&inst.params)) {
		json chains = json::array();
		for (const auto &chain : ap->chains) {
			json stages = json::array();
			for (const auto &st : chain)
				stages.push_back({st.top_straight, st.top_cross, st.bottom_straight, st.bottom_cross});
			chains.push_back(std::move(stages));
		}
		params["chains"] = std::move(chains);
	} else if (const auto *rp = std::get_if<RingOscillatorParams>(&inst.params)) {
		auto dump_ring = [](const std::vector<std::vector<RingOscillatorParams::Stage>> &ring) {
			json bits = json::array();
			for (const auto &stages : ring) {
				json arr = json::array();
				for (const auto &st : stages)
					arr.push_back({st.inv0, st.inv1});
				bits.push_back(std::move(arr));
			}
			return bits;
		};
		params["ring_a"] = dump_ring(rp->ring_a);
		params["ring_b"] = dump_ring(rp->ring_b);
	} else {
		const auto &bp = std::get<ButterflyParams>(inst.params);
		params["weights"] = bp.weights;
		params["meta_sigma"] = bp.meta_sigma;
	}
	j["params"] = std::move(params);
	return j;
}

PufInstance instance_from_json(const nlohmann::json &j)
{
	PufInstance inst;
	inst.category = category_from_string(j.at("category").get<std::string>());
	inst.challenge_width = j.at("challenge_width").get<int>();
	inst.response_width = j.at("response_width").get<int>();
	inst.instance_id = j.at("instance_id").get<std::string>();
	inst.lot_seed = j.at("lot_seed").get<std::uint64_t>();
	inst.instance_seed = j.at("instance_seed").get<std::uint64_t>();
	inst.variation = variation_from_json(j.at("variation"));
	if (inst.challenge_width < 1 || inst.response_width < 1)
		throw ConfigError("instance_from_json: widths must be >= 1");

	const json &params = j.at("params");
	auto expect_rows = [&](std::size_t got, const char *what) {
		if (got != static_cast<std::size_t>(inst.response_width))
			throw ConfigError(std::string("instance_from_json: ") + what + " rows != response_width");
	};
	switch (inst.category) {
	case PufCategory::Arbiter: {
		ArbiterParams p;
		const json &chains = params.at("chains");
		expect_rows(chains.size(), "chains");
		for (const auto &stages : chains) {
			std::vector<ArbiterStage> chain;
			if (stages.size() != static_cast<std::size_t>(inst.challenge_width))
				throw ConfigError("instance_from_json: stage count != challenge_width");
			for (const auto &st : stages) {
				if (!st.is_array() || st.size() != 4)
					throw ConfigError("instance_from_json: arbiter stage needs 4 delays");
				chain.push_back({st[0].get<double>(), st[1].get<double>(), st[2].get<double>(), st[3].get<double>()});
			}
			p.chains.push_back(std::move(chain));
		}
		inst.params = std::move(p);
		break;
	}
	case PufCategory::RingOscillator: {
		RingOscillatorParams p;
		auto load_ring = [&](const json &ring) {
			std::vector<std::vector<RingOscillatorParams::Stage>> out;
			expect_rows(ring.size(), "ring");
			for (const auto &stages : ring) {
				std::vector<RingOscillatorParams::Stage> row;
				if (stages.size() != static_cast<std::size_t>(inst.challenge_width))
					throw ConfigError("instance_from_json: ring stage count != challenge_width");
				for (const auto &st : stages) {
					if (!st.is_array() || st.size() != 2)
						throw ConfigError("instance_from_json: ring stage needs 2 delays");
					row.push_back({st[0].get<double>(), st[1].get<double>()});
				}
				out.push_back(std::move(row));
			}
			return out;
		};
		p.ring_a = load_ring(params.at("ring_a"));
		p.ring_b = load_ring(params.at("ring_b"));
		inst.params = std::move(p);
		break;
	}
	case PufCategory::Butterfly: {
		ButterflyParams p;
		p.weights = params.at("weights").get<std::vector<std::vector<double>>>();
		expect_rows(p.weights.size(), "weights");
		for (const auto &w : p.weights)
			if (w.size() != static_cast<std::size_t>(inst.challenge_width) + 1)
				throw ConfigError("instance_from_json: weight vector must have challenge_width+1 entries");
		p.meta_sigma = params.at("meta_sigma").get<double>();
		inst.params = std::move(p);
		break;
	}
	}
	return inst;
}

} // namespace cycpuf
