#include "replikit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace replikit {

namespace {

void require_both_classes(const std::vector<int>& labels) {
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos == 0 || static_cast<std::size_t>(pos) == labels.size()) {
    throw InputError("both classes must be present");
  }
}

std::vector<std::size_t> descending_order(const Vec& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

// Per distinct score, descending: cumulative positives/negatives at and
// above that threshold.
struct Group {
  double threshold;
  long long tp;
  long long fp;
};

std::vector<Group> sweep(const Vec& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw InputError("scores/labels mismatch");
  require_both_classes(labels);
  const auto order = descending_order(scores);
  std::vector<Group> groups;
  long long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = scores[order[i]];
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == t) {
      if (labels[order[j]] == 1) ++tp;
      else ++fp;
      ++j;
    }
    groups.push_back({t, tp, fp});
    i = j;
  }
  return groups;
}

}  // namespace

FoldAssignment stratified_kfold(const std::vector<int>& y, int k, std::uint64_t seed) {
  const std::size_t n = y.size();
  if (k < 2) throw InputError("k must be at least 2");
  if (static_cast<std::size_t>(k) > n) throw InputError("k exceeds sample count");
  std::vector<std::size_t> class0, class1;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] == 1) class1.push_back(i);
    else if (y[i] == 0) class0.push_back(i);
    else throw InputError("labels must be 0 or 1");
  }
  if (class0.empty() || class1.empty()) throw InputError("both classes must be present");

  std::mt19937_64 rng(seed);
  auto shuffle = [&rng](std::vector<std::size_t>& v) {
    // Explicit Fisher-Yates: identical draws everywhere, unlike std::shuffle.
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[rng() % i]);
    }
  };
  shuffle(class0);
  shuffle(class1);

  FoldAssignment folds{k, std::vector<int>(n, -1), seed};
  std::size_t position = 0;
  for (const auto* cls : {&class0, &class1}) {
    for (std::size_t idx : *cls) {
      folds.fold_of[idx] = static_cast<int>(position % static_cast<std::size_t>(k));
      ++position;
    }
  }
  return folds;
}

std::vector<CurvePoint> roc_curve(const Vec& scores, const std::vector<int>& labels) {
  const auto groups = sweep(scores, labels);
  const double P = static_cast<double>(groups.back().tp);
  const double N = static_cast<double>(groups.back().fp);
  std::vector<CurvePoint> points;
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  for (const auto& g : groups) {
    points.push_back({g.threshold, g.fp / N, g.tp / P});
  }
  return points;
}

double auroc(const Vec& scores, const std::vector<int>& labels) {
  const auto groups = sweep(scores, labels);
  const long long P = groups.back().tp;
  const long long N = groups.back().fp;
  // Half-units: 2 per (pos above neg) pair, 1 per tied pair.
  long long units = 0;
  long long prev_tp = 0, prev_fp = 0;
  for (const auto& g : groups) {
    const long long pos_in = g.tp - prev_tp;
    const long long neg_in = g.fp - prev_fp;
    units += 2 * prev_tp * neg_in + pos_in * neg_in;
    prev_tp = g.tp;
    prev_fp = g.fp;
  }
  const double pair_auc = static_cast<double>(units) / (2.0 * static_cast<double>(P) *
                                                        static_cast<double>(N));
  const auto curve = roc_curve(scores, labels);
  double trapezoid = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    trapezoid += (curve[i].x - curve[i - 1].x) * (curve[i].y + curve[i - 1].y) / 2.0;
  }
  if (std::fabs(pair_auc - trapezoid) > 1e-12) {
    throw std::logic_error("auroc routes disagree: pair=" + std::to_string(pair_auc) +
                           " trapezoid=" + std::to_string(trapezoid));
  }
  return pair_auc;
}

std::vector<CurvePoint> pr_curve(const Vec& scores, const std::vector<int>& labels) {
  const auto groups = sweep(scores, labels);
  const double P = static_cast<double>(groups.back().tp);
  std::vector<CurvePoint> points;
  const double top_precision =
      static_cast<double>(groups.front().tp) /
      static_cast<double>(groups.front().tp + groups.front().fp);
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, top_precision});
  for (const auto& g : groups) {
    const double recall = g.tp / P;
    const double precision = static_cast<double>(g.tp) / static_cast<double>(g.tp + g.fp);
    points.push_back({g.threshold, recall, precision});
  }
  return points;
}

double auprc(const Vec& scores, const std::vector<int>& labels) {
  const auto points = pr_curve(scores, labels);
  double area = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].x - prev_recall) * points[i].y;
    prev_recall = points[i].x;
  }
  return area;
}

LogisticModel fit_fold(const LabeledDataset& dataset, const FoldAssignment& folds,
                       int fold, const TrainConfig& config) {
  Matrix X_train;
  std::vector<int> y_train;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (folds.fold_of[i] != fold) {
      X_train.push_back(dataset.X[i]);
      y_train.push_back(dataset.y[i]);
    }
  }
  return fit(X_train, y_train, config);
}

EvalReport cross_validate(const LabeledDataset& dataset, int k, const TrainConfig& config,
                          std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (dataset.X.size() != n || dataset.y.size() != n) {
    throw InputError("inconsistent dataset");
  }
  const auto folds = stratified_kfold(dataset.y, k, seed);

  Vec scores(n, 0.0);
  for (int fold = 0; fold < k; ++fold) {
    LogisticModel model;
    try {
      model = fit_fold(dataset, folds, fold, config);
    } catch (const InputError& e) {
      throw InputError("fold " + std::to_string(fold) + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("fold " + std::to_string(fold) + ": " + e.what());
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (folds.fold_of[i] == fold) scores[i] = predict_proba(model, dataset.X[i]);
    }
  }

  EvalReport report;
  report.task = dataset.task;
  report.k = k;
  report.seed = seed;
  report.scores = std::move(scores);
  report.labels = dataset.y;
  report.roc = roc_curve(report.scores, report.labels);
  report.pr = pr_curve(report.scores, report.labels);
  report.auroc = auroc(report.scores, report.labels);
  report.auprc = auprc(report.scores, report.labels);
  report.n = n;
  report.n_pos = dataset.positives();
  report.chance_auprc = static_cast<double>(report.n_pos) / static_cast<double>(n);
  return report;
}

}  // namespace replikit
