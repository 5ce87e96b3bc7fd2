#pragma once

#include <string>
#include <utility>
#include <vector>

#include "replikit/common.hpp"

namespace replikit {

enum class Weighting { balanced, uniform };

struct TrainConfig {
  double C = 1.0;          // inverse regularization strength
  double tol = 1e-8;       // gradient-norm stopping threshold
  int max_iter = 1000;
  Weighting weighting = Weighting::balanced;
};

struct TrainMeta {
  int iterations = 0;
  double final_gradient_norm = 0.0;
  double objective = 0.0;
};

// Weight vector and bias over raw (unstandardized) features. The
// standardization applied during fit is folded into (weights, bias), so
// predict_proba takes features as-is.
struct LogisticModel {
  Vec weights;
  double bias = 0.0;
  int d = 0;
  TrainMeta train_meta;
};

// Inverse-class-frequency balancing w_k = n / (2 n_k): both classes carry
// equal total mass. Throws InputError on single-class input.
std::pair<double, double> class_weights(const std::vector<int>& y);  // (w_pos, w_neg)

// J = 0.5 ||w||^2 + C * sum_i s_i * log(1 + exp(-t_i (w.x_i + b))),
// t_i in {-1,+1}, bias unpenalized. Stable up to |w.x+b| ~ 700.
double objective(const Vec& w, double b, const Matrix& X, const std::vector<int>& y,
                 const Vec& sample_weights, double C);

// (dJ/dw, dJ/db) = (w + C sum s_i (sigma_i - y_i) x_i, C sum s_i (sigma_i - y_i))
std::pair<Vec, double> gradient(const Vec& w, double b, const Matrix& X,
                                const std::vector<int>& y, const Vec& sample_weights,
                                double C);

// Minimizes `objective` over per-column standardized features (weighted
// mean/variance; constant columns pass through unscaled) until the gradient
// norm drops to config.tol, then folds the standardization into the stored
// parameters. Deterministic: starts at zero, no randomness.
LogisticModel fit(const Matrix& X, const std::vector<int>& y, const TrainConfig& config = {});

// Same with explicit per-sample weights, overriding config.weighting.
LogisticModel fit_weighted(const Matrix& X, const std::vector<int>& y,
                           const Vec& sample_weights, const TrainConfig& config = {});

// Overflow-safe sigma(w.x + b), clamped strictly inside (0, 1).
double predict_proba(const LogisticModel& model, const Vec& x);

double sigmoid(double z);

// Flat JSON {d, weights[], bias, train_meta{}}; floats printed with 17
// significant digits so round-trips are bit-faithful.
void save_model(const LogisticModel& model, const std::string& path);
LogisticModel load_model(const std::string& path);
std::string model_to_json(const LogisticModel& model);

}  // namespace replikit
