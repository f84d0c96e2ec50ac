#include "cycpuf/metrics.hpp"

#include <cstdio>

#include "cycpuf/rng.hpp"

namespace cycpuf {

int hamming_distance(const ResponseVector &r1, const ResponseVector &r2)
{
	if (r1.size() != r2.size())
		throw UsageError("hamming_distance: width mismatch");
	int hd = 0;
	for (std::size_t i = 0; i < r1.size(); ++i)
		hd += r1[i] ^ r2[i];
	return hd;
}

int hamming_weight(const ResponseVector &r)
{
	int hw = 0;
	for (std::size_t i = 0; i < r.size(); ++i)
		hw += r[i];
	return hw;
}

double uniqueness(const std::vector<ResponseVector> &responses)
{
	const std::size_t k = responses.size();
	if (k < 2)
		throw UsageError("uniqueness: needs at least 2 instances");
	const std::size_t n = responses[0].size();
	long long total = 0;
	for (std::size_t i = 0; i < k; ++i)
		for (std::size_t j = i + 1; j < k; ++j)
			total += hamming_distance(responses[i], responses[j]);
	return 2.0 / (static_cast<double>(k) * (k - 1)) * static_cast<double>(total) / static_cast<double>(n) * 100.0;
}

double uniqueness_over_challenges(const std::vector<std::vector<ResponseVector>> &responses)
{
	if (responses.empty())
		throw UsageError("uniqueness_over_challenges: empty challenge set");
	double sum = 0.0;
	for (const auto &per_instance : responses)
		sum += uniqueness(per_instance);
	return sum / static_cast<double>(responses.size());
}

double reliability(const ResponseVector &reference, const std::vector<ResponseVector> &samples)
{
	if (samples.empty())
		throw UsageError("reliability: needs at least 1 sample");
	const double n = static_cast<double>(reference.size());
	double sum = 0.0;
	for (const auto &s : samples)
		sum += hamming_distance(reference, s) / n;
	return (1.0 - sum / static_cast<double>(samples.size())) * 100.0;
}

double uniformity(const std::vector<ResponseVector> &responses)
{
	if (responses.empty())
		throw UsageError("uniformity: needs at least 1 response");
	double sum = 0.0;
	for (const auto &r : responses)
		sum += static_cast<double>(hamming_weight(r)) / static_cast<double>(r.size());
	return sum / static_cast<double>(responses.size()) * 100.0;
}

ResponseVector abv_response(const Trajectory &traj)
{
	const int c = traj.cycles();
	if (c < 1)
		throw UsageError("abv_response: empty trajectory");
	const std::size_t n = traj.responses[0].size();
	ResponseVector out(n);
	for (std::size_t j = 0; j < n; ++j) {
		int ones = 0;
		for (const auto &r : traj.responses)
			ones += r[j];
		out.set(j, 2 * ones >= c ? 1 : 0); // mean >= 0.5, exact in integers
	}
	return out;
}

void MetricConfig::validate() const
{
	if (k < 2)
		throw ConfigError("MetricConfig: k must be >= 2 for uniqueness");
	if (m < 1 || s < 1 || c < 1)
		throw ConfigError("MetricConfig: m, s, c must be >= 1");
}

std::vector<EnvCondition> default_env_sweep()
{
	std::vector<EnvCondition> sweep;
	const double scales[] = {0.90, 0.925, 0.95, 0.975, 1.025, 1.05, 1.075, 1.10};
	char label[32];
	for (int i = 0; i < 8; ++i) {
		std::snprintf(label, sizeof(label), "scale_%.3f", scales[i]);
		sweep.push_back({scales[i], label});
	}
	return sweep;
}

MetricReport cyclic_metric_suite(const std::vector<PufInstance> &instances, const FeedbackConfig &fb,
				 const std::vector<Challenge> &challenges, const MetricConfig &cfg,
				 const std::vector<EnvCondition> &env_sweep, std::uint64_t noise_seed_base)
{
	cfg.validate();
	if (static_cast<int>(instances.size()) != cfg.k)
		throw UsageError("cyclic_metric_suite: instance count != cfg.k");
	if (static_cast<int>(challenges.size()) != cfg.m)
		throw UsageError("cyclic_metric_suite: challenge count != cfg.m");
	if (static_cast<int>(env_sweep.size()) != cfg.s)
		throw UsageError("cyclic_metric_suite: sweep size != cfg.s");

	const std::size_t k = instances.size();
	const std::size_t m = challenges.size();

	// Nominal, noiseless ABV response per (challenge, instance).
	std::vector<std::vector<ResponseVector>> abv(m, std::vector<ResponseVector>(k));
	const EnvCondition nominal{};
	for (std::size_t i = 0; i < k; ++i)
		for (std::size_t ch = 0; ch < m; ++ch)
			abv[ch][i] = abv_response(simulate_trajectory(instances[i], fb, challenges[ch], cfg.c, nominal));

	MetricReport report;

	report.per_challenge_uniqueness.reserve(m);
	for (std::size_t ch = 0; ch < m; ++ch)
		report.per_challenge_uniqueness.push_back(uniqueness(abv[ch]));
	report.uniqueness_pct = uniqueness_over_challenges(abv);

	report.per_instance_uniformity.reserve(k);
	double uniformity_sum = 0.0;
	for (std::size_t i = 0; i < k; ++i) {
		std::vector<ResponseVector> own;
		own.reserve(m);
		for (std::size_t ch = 0; ch < m; ++ch)
			own.push_back(abv[ch][i]);
		double u = uniformity(own);
		report.per_instance_uniformity.push_back(u);
		uniformity_sum += u;
	}
	report.uniformity_pct = uniformity_sum / static_cast<double>(k);

	// Reliability: re-collect the ABV vector under each sweep condition
	// with per-sample jitter streams, against the nominal reference.
	report.per_instance_reliability.reserve(k);
	double reliability_sum = 0.0;
	for (std::size_t i = 0; i < k; ++i) {
		double inst_sum = 0.0;
		for (std::size_t ch = 0; ch < m; ++ch) {
			std::vector<ResponseVector> samples;
			samples.reserve(env_sweep.size());
			for (std::size_t e = 0; e < env_sweep.size(); ++e) {
				std::uint64_t seed = Rng::mix(noise_seed_base, (i * m + ch) * env_sweep.size() + e);
				samples.push_back(
					abv_response(simulate_trajectory(instances[i], fb, challenges[ch], cfg.c, env_sweep[e], seed)));
			}
			inst_sum += reliability(abv[ch][i], samples);
		}
		double r = inst_sum / static_cast<double>(m);
		report.per_instance_reliability.push_back(r);
		reliability_sum += r;
	}
	report.reliability_pct = reliability_sum / static_cast<double>(k);

	return report;
}

nlohmann::json MetricReport::to_json() const
{
	return nlohmann::json{{"uniqueness_pct", uniqueness_pct},
			      {"uniformity_pct", uniformity_pct},
			      {"reliability_pct", reliability_pct},
			      {"per_challenge_uniqueness", per_challenge_uniqueness},
			      {"per_instance_uniformity", per_instance_uniformity},
			      {"per_instance_reliability", per_instance_reliability}};
}

} // namespace cycpuf
