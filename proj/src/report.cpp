#include "replikit/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "replikit/io.hpp"

namespace replikit {

std::string summary_json_line(const EvalReport& report) {
  std::ostringstream out;
  out << "{\"task\":\"" << to_string(report.task) << "\",\"k\":" << report.k
      << ",\"seed\":" << report.seed << ",\"auroc\":" << fmt17(report.auroc)
      << ",\"auprc\":" << fmt17(report.auprc)
      << ",\"chance_auprc\":" << fmt17(report.chance_auprc) << ",\"n\":" << report.n
      << ",\"n_pos\":" << report.n_pos << "}";
  return out.str();
}

void write_summary_json(const EvalReport& report, const std::string& path) {
  atomic_write(path, summary_json_line(report) + "\n");
}

namespace {

std::string csv_threshold(double t) {
  if (std::isinf(t)) return "inf";
  return fmt17(t);
}

void append_curve(std::ostringstream& out, const char* kind,
                  const std::vector<CurvePoint>& curve) {
  for (const auto& point : curve) {
    out << kind << ',' << csv_threshold(point.threshold) << ',' << fmt17(point.x) << ','
        << fmt17(point.y) << '\n';
  }
}

}  // namespace

void write_curves_csv(const EvalReport& report, const std::string& path) {
  std::ostringstream out;
  out << "kind,threshold,x,y\n";
  append_curve(out, "roc", report.roc);
  append_curve(out, "pr", report.pr);
  atomic_write(path, out.str());
}

void write_scores_csv(const EvalReport& report, const std::vector<std::string>& ids,
                      const std::string& path) {
  if (ids.size() != report.n) throw InputError("ids/scores mismatch");
  std::ostringstream out;
  out << "id,label,score\n";
  for (std::size_t i = 0; i < report.n; ++i) {
    out << ids[i] << ',' << report.labels[i] << ',' << fmt17(report.scores[i]) << '\n';
  }
  atomic_write(path, out.str());
}

namespace {

// Fixed 520x520 canvas with a 420x420 plot area.
constexpr double kLeft = 70.0;
constexpr double kTop = 50.0;
constexpr double kSize = 420.0;

double px(double x) { return kLeft + x * kSize; }
double py(double y) { return kTop + (1.0 - y) * kSize; }

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void svg_header(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"520\" "
         "viewBox=\"0 0 520 520\">\n"
      << "<rect width=\"520\" height=\"520\" fill=\"white\"/>\n"
      << "<text x=\"260\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" << title << "</text>\n";
  // frame and ticks
  out << "<rect x=\"" << coord(kLeft) << "\" y=\"" << coord(kTop) << "\" width=\""
      << coord(kSize) << "\" height=\"" << coord(kSize)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double v = 0.0; v <= 1.0001; v += 0.25) {
    out << "<text x=\"" << coord(px(v)) << "\" y=\"" << coord(kTop + kSize + 22.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << coord(v) << "</text>\n";
    out << "<text x=\"" << coord(kLeft - 10.0) << "\" y=\"" << coord(py(v) + 4.0)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << coord(v) << "</text>\n";
    out << "<line x1=\"" << coord(px(v)) << "\" y1=\"" << coord(kTop + kSize)
        << "\" x2=\"" << coord(px(v)) << "\" y2=\"" << coord(kTop + kSize + 5.0)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << coord(kLeft - 5.0) << "\" y1=\"" << coord(py(v)) << "\" x2=\""
        << coord(kLeft) << "\" y2=\"" << coord(py(v)) << "\" stroke=\"black\"/>\n";
  }
}

void svg_axis_labels(std::ostringstream& out, const std::string& x_label,
                     const std::string& y_label) {
  out << "<text x=\"" << coord(kLeft + kSize / 2.0) << "\" y=\"505\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << coord(kTop + kSize / 2.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " << coord(kTop + kSize / 2.0) << ")\">"
      << y_label << "</text>\n";
}

void svg_polyline(std::ostringstream& out, const std::vector<CurvePoint>& curve) {
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.8\" points=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (i) out << ' ';
    out << coord(px(curve[i].x)) << ',' << coord(py(curve[i].y));
  }
  out << "\"/>\n";
}

std::string auc_text(const char* name, double auc) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s (AUC = %.3f)", name, auc);
  return buf;
}

}  // namespace

void write_roc_svg(const EvalReport& report, const std::string& path) {
  std::ostringstream out;
  svg_header(out, to_string(report.task) + ": " + auc_text("ROC", report.auroc));
  out << "<line x1=\"" << coord(px(0.0)) << "\" y1=\"" << coord(py(0.0)) << "\" x2=\""
      << coord(px(1.0)) << "\" y2=\"" << coord(py(1.0))
      << "\" stroke=\"red\" stroke-dasharray=\"6 4\"/>\n";
  svg_polyline(out, report.roc);
  svg_axis_labels(out, "False positive rate", "True positive rate");
  out << "</svg>\n";
  atomic_write(path, out.str());
}

void write_pr_svg(const EvalReport& report, const std::string& path) {
  std::ostringstream out;
  char chance[64];
  std::snprintf(chance, sizeof(chance), ", chance = %.3f", report.chance_auprc);
  svg_header(out, to_string(report.task) + ": " + auc_text("PR", report.auprc) + chance);
  out << "<line x1=\"" << coord(px(0.0)) << "\" y1=\"" << coord(py(report.chance_auprc))
      << "\" x2=\"" << coord(px(1.0)) << "\" y2=\"" << coord(py(report.chance_auprc))
      << "\" stroke=\"red\" stroke-dasharray=\"6 4\"/>\n";
  svg_polyline(out, report.pr);
  svg_axis_labels(out, "Recall", "Precision");
  out << "</svg>\n";
  atomic_write(path, out.str());
}

}  // namespace replikit
