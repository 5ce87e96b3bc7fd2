#include "replikit/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "replikit/io.hpp"

namespace replikit {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

void check_dims(const Vec& w, const Matrix& X, const std::vector<int>& y,
                const Vec& sample_weights) {
  const std::size_t n = X.size();
  if (y.size() != n) throw InputError("labels/rows mismatch");
  if (sample_weights.size() != n) throw InputError("sample weights/rows mismatch");
  for (const auto& row : X) {
    if (row.size() != w.size()) throw InputError("feature dimension mismatch");
  }
}

}  // namespace

std::pair<double, double> class_weights(const std::vector<int>& y) {
  const double n = static_cast<double>(y.size());
  const double n_pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  const double n_neg = n - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) {
    throw InputError("class weights need both classes present");
  }
  return {n / (2.0 * n_pos), n / (2.0 * n_neg)};
}

double objective(const Vec& w, double b, const Matrix& X, const std::vector<int>& y,
                 const Vec& sample_weights, double C) {
  check_dims(w, X, y, sample_weights);
  double penalty = 0.0;
  for (double wj : w) penalty += wj * wj;
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double z = b;
    for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X[i][j];
    const double margin = (y[i] == 1 ? z : -z);
    loss += sample_weights[i] * softplus(-margin);
  }
  return 0.5 * penalty + C * loss;
}

std::pair<Vec, double> gradient(const Vec& w, double b, const Matrix& X,
                                const std::vector<int>& y, const Vec& sample_weights,
                                double C) {
  check_dims(w, X, y, sample_weights);
  Vec dw = w;
  double db = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double z = b;
    for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X[i][j];
    const double residual = C * sample_weights[i] * (sigmoid(z) - y[i]);
    for (std::size_t j = 0; j < w.size(); ++j) dw[j] += residual * X[i][j];
    db += residual;
  }
  return {std::move(dw), db};
}

namespace {

struct Standardizer {
  Vec mean;
  Vec scale;
};

// Weighted per-column mean/stddev; constant columns pass through unscaled.
Standardizer standardize(Matrix& X, const Vec& s) {
  const std::size_t n = X.size();
  const std::size_t d = X[0].size();
  Standardizer st{Vec(d, 0.0), Vec(d, 1.0)};
  double total = 0.0;
  for (double si : s) total += si;
  for (std::size_t j = 0; j < d; ++j) {
    double lo = X[0][j], hi = X[0][j];
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, X[i][j]);
      hi = std::max(hi, X[i][j]);
      mean += s[i] * X[i][j];
    }
    if (lo == hi) continue;
    mean /= total;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = X[i][j] - mean;
      var += s[i] * c * c;
    }
    var /= total;
    if (var <= 0.0) continue;
    st.mean[j] = mean;
    st.scale[j] = std::sqrt(var);
    for (std::size_t i = 0; i < n; ++i) X[i][j] = (X[i][j] - mean) / st.scale[j];
  }
  return st;
}

double norm2(const Vec& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double dot(const Vec& a, const Vec& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

// Objective and gradient over the flattened parameter vector [w..., b].
struct Problem {
  const Matrix& X;
  const std::vector<int>& y;
  const Vec& s;
  double C;

  double eval(const Vec& p, Vec& grad) const {
    const std::size_t d = p.size() - 1;
    const double b = p[d];
    double value = 0.0;
    for (std::size_t j = 0; j < d; ++j) value += p[j] * p[j];
    value *= 0.5;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
      double z = b;
      for (std::size_t j = 0; j < d; ++j) z += p[j] * X[i][j];
      const double margin = (y[i] == 1 ? z : -z);
      value += C * s[i] * softplus(-margin);
      const double residual = C * s[i] * (sigmoid(z) - y[i]);
      for (std::size_t j = 0; j < d; ++j) grad[j] += residual * X[i][j];
      grad[d] += residual;
    }
    for (std::size_t j = 0; j < d; ++j) grad[j] += p[j];
    return value;
  }
};

struct Solution {
  Vec p;
  int iterations;
  double gradient_norm;
  double objective;
};

// L-BFGS with Armijo backtracking. Callers rely only on the stopping
// criterion (gradient norm <= tol), not on the path taken to reach it.
Solution minimize(const Problem& problem, std::size_t dim, double tol, int max_iter) {
  constexpr std::size_t kMemory = 10;
  constexpr double kArmijo = 1e-4;

  Vec p(dim, 0.0);
  Vec grad(dim, 0.0);
  double value = problem.eval(p, grad);
  double gnorm = norm2(grad);

  std::deque<Vec> s_hist, y_hist;
  std::deque<double> rho_hist;

  int iter = 0;
  while (gnorm > tol) {
    if (iter >= max_iter) {
      throw std::runtime_error("fit did not converge within " + std::to_string(max_iter) +
                               " iterations (gradient norm " + fmt17(gnorm) + ")");
    }
    // Two-loop recursion for the search direction.
    Vec dir = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], dir);
      for (std::size_t j = 0; j < dim; ++j) dir[j] -= alpha[k] * y_hist[k][j];
    }
    if (!s_hist.empty()) {
      const double gamma =
          dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& x : dir) x *= gamma;
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], dir);
      for (std::size_t j = 0; j < dim; ++j) dir[j] += (alpha[k] - beta) * s_hist[k][j];
    }
    for (double& x : dir) x = -x;

    double slope = dot(grad, dir);
    if (!(slope < 0.0)) {
      // Fall back to steepest descent if curvature info is unusable.
      for (std::size_t j = 0; j < dim; ++j) dir[j] = -grad[j];
      slope = -gnorm * gnorm;
    }

    double step = 1.0;
    Vec p_next(dim), grad_next(dim);
    double value_next = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j < dim; ++j) p_next[j] = p[j] + step * dir[j];
      value_next = problem.eval(p_next, grad_next);
      if (value_next < value + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // The objective is flat to machine precision here, which caps how far
      // an Armijo search can descend. The quasi-Newton direction still
      // contracts the gradient, so switch to gradient-norm decrease until
      // the stopping threshold is reachable.
      step = 1.0;
      for (int ls = 0; ls < 60; ++ls) {
        for (std::size_t j = 0; j < dim; ++j) p_next[j] = p[j] + step * dir[j];
        value_next = problem.eval(p_next, grad_next);
        if (norm2(grad_next) < gnorm) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
    }
    if (!accepted) {
      // Gradient-norm descent can still fail along a direction built from
      // stale curvature pairs: for small steps ||g|| moves like g'Hd, whose
      // sign the pairs do not control. Along -g that derivative is -g'Hg,
      // strictly negative away from the optimum, so restart from there.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      step = 1.0;
      for (int ls = 0; ls < 60; ++ls) {
        for (std::size_t j = 0; j < dim; ++j) p_next[j] = p[j] - step * grad[j];
        value_next = problem.eval(p_next, grad_next);
        if (norm2(grad_next) < gnorm) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
    }
    if (!accepted) {
      if (gnorm <= tol) break;
      throw std::runtime_error("line search failed (gradient norm " + fmt17(gnorm) + ")");
    }

    Vec s_k(dim), y_k(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      s_k[j] = p_next[j] - p[j];
      y_k[j] = grad_next[j] - grad[j];
    }
    const double ys = dot(y_k, s_k);
    if (ys > 1e-10 * norm2(y_k) * norm2(s_k)) {
      if (s_hist.size() == kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s_k));
      y_hist.push_back(std::move(y_k));
      rho_hist.push_back(1.0 / ys);
    }

    p.swap(p_next);
    grad.swap(grad_next);
    value = value_next;
    gnorm = norm2(grad);
    ++iter;
  }
  return {std::move(p), iter, gnorm, value};
}

}  // namespace

LogisticModel fit_weighted(const Matrix& X, const std::vector<int>& y,
                           const Vec& sample_weights, const TrainConfig& config) {
  const std::size_t n = X.size();
  if (n < 2) throw InputError("fit needs at least 2 samples");
  if (y.size() != n) throw InputError("labels/rows mismatch");
  if (sample_weights.size() != n) throw InputError("sample weights/rows mismatch");
  const std::size_t d = X[0].size();
  if (d == 0) throw InputError("fit needs at least one feature");
  for (std::size_t i = 0; i < n; ++i) {
    if (X[i].size() != d) throw InputError("ragged feature matrix");
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(X[i][j])) {
        throw InputError("non-finite feature value at row " + std::to_string(i) +
                         ", column " + std::to_string(j));
      }
    }
    if (!(sample_weights[i] > 0.0)) throw InputError("sample weights must be positive");
    if (y[i] != 0 && y[i] != 1) throw InputError("labels must be 0 or 1");
  }
  const auto n_pos = std::count(y.begin(), y.end(), 1);
  if (n_pos == 0 || static_cast<std::size_t>(n_pos) == n) {
    throw InputError("fit needs both classes present");
  }
  if (!(config.C > 0.0) || !(config.tol > 0.0) || config.max_iter <= 0) {
    throw InputError("invalid train config");
  }

  Matrix Z = X;
  const Standardizer st = standardize(Z, sample_weights);

  const Problem problem{Z, y, sample_weights, config.C};
  Solution sol = minimize(problem, d + 1, config.tol, config.max_iter);

  LogisticModel model;
  model.d = static_cast<int>(d);
  model.weights.resize(d);
  double shift = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    model.weights[j] = sol.p[j] / st.scale[j];
    shift += sol.p[j] * st.mean[j] / st.scale[j];
  }
  model.bias = sol.p[d] - shift;
  model.train_meta = {sol.iterations, sol.gradient_norm, sol.objective};
  return model;
}

LogisticModel fit(const Matrix& X, const std::vector<int>& y, const TrainConfig& config) {
  Vec weights(X.size(), 1.0);
  if (config.weighting == Weighting::balanced) {
    const auto [w_pos, w_neg] = class_weights(y);
    for (std::size_t i = 0; i < X.size(); ++i) {
      weights[i] = (y[i] == 1 ? w_pos : w_neg);
    }
  }
  return fit_weighted(X, y, weights, config);
}

double predict_proba(const LogisticModel& model, const Vec& x) {
  if (x.size() != static_cast<std::size_t>(model.d)) {
    throw InputError("predict: feature dimension " + std::to_string(x.size()) +
                     " does not match model dimension " + std::to_string(model.d));
  }
  double z = model.bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += model.weights[j] * x[j];
  const double p = sigmoid(z);
  const double lo = std::numeric_limits<double>::min();
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(p, lo, hi);
}

std::string model_to_json(const LogisticModel& model) {
  std::ostringstream out;
  out << "{\"d\":" << model.d << ",\"weights\":[";
  for (std::size_t j = 0; j < model.weights.size(); ++j) {
    if (j) out << ',';
    out << fmt17(model.weights[j]);
  }
  out << "],\"bias\":" << fmt17(model.bias) << ",\"train_meta\":{\"iterations\":"
      << model.train_meta.iterations << ",\"final_gradient_norm\":"
      << fmt17(model.train_meta.final_gradient_norm) << ",\"objective\":"
      << fmt17(model.train_meta.objective) << "}}\n";
  return out.str();
}

void save_model(const LogisticModel& model, const std::string& path) {
  atomic_write(path, model_to_json(model));
}

LogisticModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file: " + path);
  nlohmann::json obj;
  try {
    in >> obj;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  LogisticModel model;
  try {
    model.d = obj.at("d").get<int>();
    model.weights = obj.at("weights").get<Vec>();
    model.bias = obj.at("bias").get<double>();
    const auto& meta = obj.at("train_meta");
    model.train_meta.iterations = meta.at("iterations").get<int>();
    model.train_meta.final_gradient_norm = meta.at("final_gradient_norm").get<double>();
    model.train_meta.objective = meta.at("objective").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  if (model.weights.size() != static_cast<std::size_t>(model.d)) {
    throw InputError(path + ": weights length does not match d");
  }
  return model;
}

}  // namespace replikit
