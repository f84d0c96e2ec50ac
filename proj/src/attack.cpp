#include "cycpuf/attack.hpp"

#include <algorithm>
#include <cmath>

#include "cycpuf/features.hpp"
#include "cycpuf/rng.hpp"

namespace cycpuf {

std::string to_string(FeatureMapKind map)
{
	switch (map) {
	case FeatureMapKind::Parity:
		return "parity";
	case FeatureMapKind::RawBits:
		return "raw";
	case FeatureMapKind::RawPlusParity:
		return "raw+parity";
	}
	return "?";
}

FeatureMapKind feature_map_from_string(const std::string &s)
{
	if (s == "parity")
		return FeatureMapKind::Parity;
	if (s == "raw")
		return FeatureMapKind::RawBits;
	if (s == "raw+parity" || s == "raw_plus_parity")
		return FeatureMapKind::RawPlusParity;
	throw ConfigError("unknown feature map \"" + s + "\"");
}

std::string to_string(ModelKind kind)
{
	return kind == ModelKind::LogisticRegression ? "lr" : "mlp";
}

ModelKind model_kind_from_string(const std::string &s)
{
	if (s == "lr" || s == "logistic")
		return ModelKind::LogisticRegression;
	if (s == "mlp")
		return ModelKind::Mlp;
	throw ConfigError("unknown model kind \"" + s + "\"");
}

int feature_dim(FeatureMapKind map, int challenge_width)
{
	switch (map) {
	case FeatureMapKind::Parity:
		return challenge_width + 1;
	case FeatureMapKind::RawBits:
		return challenge_width;
	case FeatureMapKind::RawPlusParity:
		return 2 * challenge_width + 1;
	}
	return 0;
}

void featurize(const Challenge &ch, FeatureMapKind map, std::vector<double> &out)
{
	const int nc = static_cast<int>(ch.size());
	switch (map) {
	case FeatureMapKind::Parity:
		parity_features(ch, out);
		break;
	case FeatureMapKind::RawBits:
		out.resize(nc);
		for (int i = 0; i < nc; ++i)
			out[i] = ch[i] ? 1.0 : -1.0;
		break;
	case FeatureMapKind::RawPlusParity: {
		out.resize(2 * nc + 1);
		for (int i = 0; i < nc; ++i)
			out[i] = ch[i] ? 1.0 : -1.0;
		std::vector<double> phi;
		parity_features(ch, phi);
		std::copy(phi.begin(), phi.end(), out.begin() + nc);
		break;
	}
	}
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// -(y log p + (1-y) log(1-p)) written in the numerically safe log1p form.
inline double logistic_loss(double z, int y)
{
	// log(1 + e^-|z|) + max(0, -z*sign) folded by case
	if (z >= 0)
		return std::log1p(std::exp(-z)) + (y ? 0.0 : z);
	return std::log1p(std::exp(z)) + (y ? -z : 0.0);
}

struct MlpScratch {
	std::vector<double> h;  // tanh activations
	std::vector<double> da; // pre-activation gradients
};

double mlp_forward(const AttackModel &m, const std::vector<double> &x, MlpScratch &s)
{
	const int H = m.hidden;
	const int D = static_cast<int>(x.size());
	s.h.resize(H);
	for (int u = 0; u < H; ++u) {
		double a = m.b1[u];
		const double *row = &m.w1[static_cast<std::size_t>(u) * D];
		for (int d = 0; d < D; ++d)
			a += row[d] * x[d];
		s.h[u] = std::tanh(a);
	}
	double z = m.b2;
	for (int u = 0; u < H; ++u)
		z += m.w2[u] * s.h[u];
	return z;
}

} // namespace

double AttackModel::predict_score(const std::vector<double> &features) const
{
	if (kind == ModelKind::LogisticRegression) {
		double z = b;
		for (std::size_t i = 0; i < w.size(); ++i)
			z += w[i] * features[i];
		return sigmoid(z);
	}
	MlpScratch s;
	return sigmoid(mlp_forward(*this, features, s));
}

int AttackModel::predict(const Challenge &ch) const
{
	std::vector<double> x;
	featurize(ch, map, x);
	return predict_score(x) >= 0.5 ? 1 : 0;
}

AttackModel train(const CrpDataset &ds, const TrainConfig &cfg)
{
	if (ds.rows.empty())
		throw UsageError("train: empty dataset");
	if (ds.rows[0].response.size() != 1)
		throw UsageError("train: attack targets single-bit responses");
	if (!ds.has_split() || ds.train_idx.empty())
		throw UsageError("train: dataset has no train split");
	if (cfg.epochs < 1 || cfg.batch_size < 1 || !(cfg.learning_rate > 0.0))
		throw ConfigError("train: bad hyperparameters");

	const int nc = static_cast<int>(ds.rows[ds.train_idx[0]].challenge.size());
	const int D = feature_dim(cfg.map, nc);

	AttackModel model;
	model.kind = cfg.kind;
	model.map = cfg.map;
	model.challenge_width = nc;
	model.meta.epochs = cfg.epochs;
	model.meta.learning_rate = cfg.learning_rate;
	model.meta.seed = cfg.seed;

	Rng rng(cfg.seed);
	if (cfg.kind == ModelKind::LogisticRegression) {
		model.w.assign(D, 0.0);
		model.b = 0.0;
	} else {
		if (cfg.hidden < 1)
			throw ConfigError("train: MLP needs hidden >= 1");
		model.hidden = cfg.hidden;
		model.w1.resize(static_cast<std::size_t>(cfg.hidden) * D);
		for (auto &v : model.w1)
			v = 0.1 * rng.next_gaussian();
		model.b1.assign(cfg.hidden, 0.0);
		model.w2.resize(cfg.hidden);
		for (auto &v : model.w2)
			v = 0.1 * rng.next_gaussian();
		model.b2 = 0.0;
	}

	std::vector<std::size_t> order(ds.train_idx);
	std::vector<double> x(D);
	MlpScratch scratch;

	// accumulators reused across batches
	std::vector<double> gw, gw1, gb1, gw2;
	double epoch_loss = 0.0;

	for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
		for (std::size_t i = order.size(); i-- > 1;)
			std::swap(order[i], order[rng.next_below(i + 1)]);

		epoch_loss = 0.0;
		for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
			const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
			const double inv = 1.0 / static_cast<double>(stop - start);

			if (cfg.kind == ModelKind::LogisticRegression) {
				gw.assign(D, 0.0);
				double gb = 0.0;
				for (std::size_t r = start; r < stop; ++r) {
					const CrpRow &row = ds.rows[order[r]];
					featurize(row.challenge, cfg.map, x);
					int y = row.response[0];
					double z = model.b;
					for (int d = 0; d < D; ++d)
						z += model.w[d] * x[d];
					epoch_loss += logistic_loss(z, y);
					double dz = sigmoid(z) - y;
					for (int d = 0; d < D; ++d)
						gw[d] += dz * x[d];
					gb += dz;
				}
				for (int d = 0; d < D; ++d)
					model.w[d] -= cfg.learning_rate * gw[d] * inv;
				model.b -= cfg.learning_rate * gb * inv;
			} else {
				const int H = model.hidden;
				gw1.assign(static_cast<std::size_t>(H) * D, 0.0);
				gb1.assign(H, 0.0);
				gw2.assign(H, 0.0);
				double gb2 = 0.0;
				for (std::size_t r = start; r < stop; ++r) {
					const CrpRow &row = ds.rows[order[r]];
					featurize(row.challenge, cfg.map, x);
					int y = row.response[0];
					double z = mlp_forward(model, x, scratch);
					epoch_loss += logistic_loss(z, y);
					double dz = sigmoid(z) - y;
					for (int u = 0; u < H; ++u) {
						double h = scratch.h[u];
						gw2[u] += dz * h;
						double da = dz * model.w2[u] * (1.0 - h * h);
						double *grow = &gw1[static_cast<std::size_t>(u) * D];
						for (int d = 0; d < D; ++d)
							grow[d] += da * x[d];
						gb1[u] += da;
					}
					gb2 += dz;
				}
				for (std::size_t i = 0; i < model.w1.size(); ++i)
					model.w1[i] -= cfg.learning_rate * gw1[i] * inv;
				for (int u = 0; u < H; ++u) {
					model.b1[u] -= cfg.learning_rate * gb1[u] * inv;
					model.w2[u] -= cfg.learning_rate * gw2[u] * inv;
				}
				model.b2 -= cfg.learning_rate * gb2 * inv;
			}
		}
	}
	model.meta.final_train_loss = epoch_loss / static_cast<double>(order.size());
	return model;
}

AttackReport evaluate(const AttackModel &model, const CrpDataset &ds)
{
	if (!ds.has_split() || ds.test_idx.empty())
		throw UsageError("evaluate: dataset has no test split");

	AttackReport report;
	report.train_rows = ds.train_idx.size();
	report.test_rows = ds.test_idx.size();

	std::vector<double> x;
	for (std::size_t idx : ds.test_idx) {
		const CrpRow &row = ds.rows[idx];
		featurize(row.challenge, model.map, x);
		int pred = model.predict_score(x) >= 0.5 ? 1 : 0;
		int y = row.response[0];
		if (pred == 1 && y == 1)
			++report.tp;
		else if (pred == 0 && y == 0)
			++report.tn;
		else if (pred == 1)
			++report.fp;
		else
			++report.fn;
	}
	report.test_accuracy_pct =
		100.0 * static_cast<double>(report.tp + report.tn) / static_cast<double>(report.test_rows);
	return report;
}

std::vector<double> flatten(const AttackModel &m)
{
	std::vector<double> p;
	if (m.kind == ModelKind::LogisticRegression) {
		p = m.w;
		p.push_back(m.b);
	} else {
		p = m.w1;
		p.insert(p.end(), m.b1.begin(), m.b1.end());
		p.insert(p.end(), m.w2.begin(), m.w2.end());
		p.push_back(m.b2);
	}
	return p;
}

void unflatten(AttackModel &m, const std::vector<double> &p)
{
	if (m.kind == ModelKind::LogisticRegression) {
		std::copy(p.begin(), p.end() - 1, m.w.begin());
		m.b = p.back();
	} else {
		auto it = p.begin();
		std::copy(it, it + m.w1.size(), m.w1.begin());
		it += m.w1.size();
		std::copy(it, it + m.b1.size(), m.b1.begin());
		it += m.b1.size();
		std::copy(it, it + m.w2.size(), m.w2.begin());
		it += m.w2.size();
		m.b2 = *it;
	}
}

double batch_loss(const AttackModel &model, const std::vector<std::vector<double>> &features, const std::vector<int> &labels)
{
	double loss = 0.0;
	MlpScratch s;
	for (std::size_t r = 0; r < features.size(); ++r) {
		double z;
		if (model.kind == ModelKind::LogisticRegression) {
			z = model.b;
			for (std::size_t d = 0; d < model.w.size(); ++d)
				z += model.w[d] * features[r][d];
		} else {
			z = mlp_forward(model, features[r], s);
		}
		loss += logistic_loss(z, labels[r]);
	}
	return loss / static_cast<double>(features.size());
}

std::vector<double> batch_gradient(const AttackModel &model, const std::vector<std::vector<double>> &features,
				   const std::vector<int> &labels)
{
	const double inv = 1.0 / static_cast<double>(features.size());
	MlpScratch s;
	if (model.kind == ModelKind::LogisticRegression) {
		const std::size_t D = model.w.size();
		std::vector<double> g(D + 1, 0.0);
		for (std::size_t r = 0; r < features.size(); ++r) {
			double z = model.b;
			for (std::size_t d = 0; d < D; ++d)
				z += model.w[d] * features[r][d];
			double dz = sigmoid(z) - labels[r];
			for (std::size_t d = 0; d < D; ++d)
				g[d] += dz * features[r][d];
			g[D] += dz;
		}
		for (auto &v : g)
			v *= inv;
		return g;
	}
	const int H = model.hidden;
	const std::size_t D = model.w1.size() / H;
	std::vector<double> g(model.w1.size() + model.b1.size() + model.w2.size() + 1, 0.0);
	double *gw1 = g.data();
	double *gb1 = gw1 + model.w1.size();
	double *gw2 = gb1 + model.b1.size();
	double *gb2 = gw2 + model.w2.size();
	for (std::size_t r = 0; r < features.size(); ++r) {
		double z = mlp_forward(model, features[r], s);
		double dz = sigmoid(z) - labels[r];
		for (int u = 0; u < H; ++u) {
			double h = s.h[u];
			gw2[u] += dz * h;
			double da = dz * model.w2[u] * (1.0 - h * h);
			for (std::size_t d = 0; d < D; ++d)
				gw1[u * D + d] += da * features[r][d];
			gb1[u] += da;
		}
		*gb2 += dz;
	}
	for (auto &v : g)
		v *= inv;
	return g;
}

nlohmann::json AttackModel::to_json() const
{
	nlohmann::json j{{"kind", to_string(kind)},
			 {"feature_map", to_string(map)},
			 {"challenge_width", challenge_width},
			 {"train_meta",
			  {{"epochs", meta.epochs},
			   {"learning_rate", meta.learning_rate},
			   {"seed", meta.seed},
			   {"final_train_loss", meta.final_train_loss}}}};
	if (kind == ModelKind::LogisticRegression) {
		j["w"] = w;
		j["b"] = b;
	} else {
		j["hidden"] = hidden;
		j["w1"] = w1;
		j["b1"] = b1;
		j["w2"] = w2;
		j["b2"] = b2;
	}
	return j;
}

nlohmann::json AttackReport::to_json() const
{
	return nlohmann::json{{"train_rows", train_rows},
			      {"test_rows", test_rows},
			      {"test_accuracy_pct", test_accuracy_pct},
			      {"confusion", {{"tp", tp}, {"tn", tn}, {"fp", fp}, {"fn", fn}}}};
}

} // namespace cycpuf
