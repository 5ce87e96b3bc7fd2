#pragma once

#include <cstdint>
#include <vector>

#include "replikit/corpus.hpp"
#include "replikit/model.hpp"

namespace replikit {

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of;  // record index -> fold id in [0, k)
  std::uint64_t seed = 0;
};

// Within each class, indices are shuffled (Fisher-Yates over a seeded
// mt19937_64) and dealt round-robin; the dealing position carries across
// classes so total fold sizes stay within one of each other too.
FoldAssignment stratified_kfold(const std::vector<int>& y, int k, std::uint64_t seed);

struct CurvePoint {
  double threshold = 0.0;
  double x = 0.0;  // ROC: false-positive rate; PR: recall
  double y = 0.0;  // ROC: true-positive rate; PR: precision
};

struct EvalReport {
  Task task = Task::identify;
  int k = 0;
  std::uint64_t seed = 0;
  Vec scores;               // pooled out-of-fold probabilities, record order
  std::vector<int> labels;
  std::vector<CurvePoint> roc;
  std::vector<CurvePoint> pr;
  double auroc = 0.0;
  double auprc = 0.0;
  double chance_auprc = 0.0;  // positive prevalence
  std::size_t n = 0;
  std::size_t n_pos = 0;
};

// Mann-Whitney statistic P(score+ > score-) + 0.5 P(tie), computed by exact
// pair counting and cross-checked against the trapezoidal area under the
// tie-aware ROC curve (the two must agree within 1e-12).
double auroc(const Vec& scores, const std::vector<int>& labels);

// Thresholds at each distinct score, descending; tied scores collapse into
// one point; the (0,0) endpoint is prepended at threshold +inf and the last
// threshold lands on (1,1).
std::vector<CurvePoint> roc_curve(const Vec& scores, const std::vector<int>& labels);

// Recall/precision at each distinct descending threshold, anchored at
// recall 0 with the precision of the top-scored block.
std::vector<CurvePoint> pr_curve(const Vec& scores, const std::vector<int>& labels);

// Step-wise (right-continuous) area sum (R_i - R_{i-1}) * P_i.
double auprc(const Vec& scores, const std::vector<int>& labels);

// Trains on every fold but `fold`. This is the exact training path
// cross_validate uses, exposed so leakage checks can replay it.
LogisticModel fit_fold(const LabeledDataset& dataset, const FoldAssignment& folds,
                       int fold, const TrainConfig& config);

// k-fold CV with pooled out-of-fold scoring: one score per record, curves
// and AUCs computed once over the pool.
EvalReport cross_validate(const LabeledDataset& dataset, int k, const TrainConfig& config,
                          std::uint64_t seed);

}  // namespace replikit
