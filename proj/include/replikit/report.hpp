#pragma once

#include <string>

#include "replikit/eval.hpp"

namespace replikit {

// One-line JSON {task, k, seed, auroc, auprc, chance_auprc, n, n_pos};
// this is also what `evaluate` prints on stdout.
std::string summary_json_line(const EvalReport& report);

void write_summary_json(const EvalReport& report, const std::string& path);

// kind,threshold,x,y rows for both curves (kind = roc|pr).
void write_curves_csv(const EvalReport& report, const std::string& path);

// id,label,score per record, record order. Feeds the `report` subcommand.
void write_scores_csv(const EvalReport& report, const std::vector<std::string>& ids,
                      const std::string& path);

// Static plots; the red line marks chance (diagonal for ROC, prevalence for PR).
void write_roc_svg(const EvalReport& report, const std::string& path);
void write_pr_svg(const EvalReport& report, const std::string& path);

}  // namespace replikit
