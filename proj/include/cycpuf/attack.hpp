#ifndef CYCPUF_ATTACK_HPP
#define CYCPUF_ATTACK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cycpuf/dataset.hpp"

namespace cycpuf {

enum class FeatureMapKind { Parity, RawBits, RawPlusParity };

std::string to_string(FeatureMapKind map);
FeatureMapKind feature_map_from_string(const std::string &s);

int feature_dim(FeatureMapKind map, int challenge_width);

/// Fill `out` (resized to feature_dim) with +/-1 features of the challenge.
void featurize(const Challenge &ch, FeatureMapKind map, std::vector<double> &out);

enum class ModelKind { LogisticRegression, Mlp };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string &s);

struct TrainConfig {
	ModelKind kind = ModelKind::LogisticRegression;
	FeatureMapKind map = FeatureMapKind::Parity;
	double learning_rate = 0.05;
	int epochs = 50;
	int batch_size = 256;
	int hidden = 64; // MLP only
	std::uint64_t seed = 1;
};

/**
 * @brief Trained predictor for single-bit responses.
 *
 * Logistic regression: p = sigmoid(w.x + b). MLP: one tanh hidden layer,
 * sigmoid output. Weights are plain vectors so models serialize and
 * gradient-check easily.
 */
struct AttackModel {
	ModelKind kind = ModelKind::LogisticRegression;
	FeatureMapKind map = FeatureMapKind::Parity;
	int challenge_width = 0;
	int hidden = 0;

	std::vector<double> w; // LR weights [dim]
	double b = 0.0;
	std::vector<double> w1; // MLP input->hidden, row-major [hidden][dim]
	std::vector<double> b1;
	std::vector<double> w2; // hidden->output
	double b2 = 0.0;

	struct Meta {
		int epochs = 0;
		double learning_rate = 0.0;
		std::uint64_t seed = 0;
		double final_train_loss = 0.0;
	} meta;

	/// P(response = 1) for a feature vector.
	double predict_score(const std::vector<double> &features) const;
	int predict(const Challenge &ch) const;

	nlohmann::json to_json() const;
};

/// Trains on the dataset's train split only. Requires 1-bit responses.
AttackModel train(const CrpDataset &ds, const TrainConfig &cfg);

struct AttackReport {
	std::size_t train_rows = 0;
	std::size_t test_rows = 0;
	double test_accuracy_pct = 0.0;
	// confusion counts over the test split
	long long tp = 0, tn = 0, fp = 0, fn = 0;

	nlohmann::json to_json() const;
};

/**
 * @brief Accuracy over the test split, scored per row.
 *
 * A challenge with several CRP-equivalent rows is scored once per row, so
 * a response set the single-valued model cannot collapse counts against
 * it.
 */
AttackReport evaluate(const AttackModel &model, const CrpDataset &ds);

/// Batch logistic loss and its analytic gradient, exposed for gradient
/// checking; `params` is the flattened parameter vector (see flatten()).
double batch_loss(const AttackModel &model, const std::vector<std::vector<double>> &features, const std::vector<int> &labels);
std::vector<double> flatten(const AttackModel &model);
void unflatten(AttackModel &model, const std::vector<double> &params);
std::vector<double> batch_gradient(const AttackModel &model, const std::vector<std::vector<double>> &features,
				   const std::vector<int> &labels);

} // namespace cycpuf

#endif
