#pragma once

#include <iosfwd>
#include <string>

#include "mousedyn/experiment.hpp"

namespace mousedyn {

// Base file name, e.g. "report_b_knn_pc" or "report_a_rf".
std::string report_stem(const EvalReport& report);

void write_report_json(std::ostream& out, const EvalReport& report);
// Throws DataError on schema violations.
EvalReport read_report_json(std::istream& in);

// user,acc_pct,auc_pct,far,frr,hter,eer_roc rows plus Avg; "n/a" when undefined.
void write_report_csv(std::ostream& out, const EvalReport& report);

// threshold,fpr,tpr
void write_roc_csv(std::ostream& out, const RocCurve& curve);

// Plain-text table for the terminal.
void print_report_table(std::ostream& out, const EvalReport& report);

struct RocPlotSeries {
  std::string label;
  RocCurve curve;
  double auc = 0.0;
};

// Standalone SVG with axes, diagonal reference and AUC legend.
std::string render_roc_svg(const std::string& title, const std::vector<RocPlotSeries>& series);

}  // namespace mousedyn
