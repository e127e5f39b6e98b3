#include "mousedyn/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mousedyn/error.hpp"

namespace mousedyn {
namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kFormat = "mousedyn-report";
constexpr int kVersion = 1;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw DataError(std::string("report field '") + key + "' is not a number");
  return v.get<double>();
}

std::string fixed(const std::optional<double>& v, int digits, double scale = 1.0) {
  if (!v) return "n/a";
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", digits, *v * scale);
  return buf.data();
}

std::string action_tag(const EvalReport& r) {
  if (!r.action) return "all";
  std::string s(to_string(*r.action));
  for (auto& c : s) c = static_cast<char>(c - 'A' + 'a');
  return s;
}

json rates_json(const std::optional<double>& acc, const std::optional<double>& auc_v,
                const std::optional<double>& far, const std::optional<double>& frr,
                const std::optional<double>& hter, const std::optional<double>& er) {
  json j;
  j["acc"] = opt(acc);
  j["auc"] = opt(auc_v);
  j["far"] = opt(far);
  j["frr"] = opt(frr);
  j["hter"] = opt(hter);
  j["eer_roc"] = opt(er);
  return j;
}

}  // namespace

std::string report_stem(const EvalReport& report) {
  std::string stem = "report_" + std::string(to_string(report.scenario)) + "_" +
                     std::string(to_string(report.model));
  if (report.action) stem += "_" + action_tag(report);
  return stem;
}

void write_report_json(std::ostream& out, const EvalReport& report) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["scenario"] = to_string(report.scenario);
  j["model"] = to_string(report.model);
  j["action"] = action_tag(report);
  j["seed"] = report.seed;
  j["users"] = json::array();
  for (const auto& u : report.users) {
    json row;
    row["user_id"] = u.user_id;
    row["n_train"] = u.n_train;
    row["n_test"] = u.n_test;
    row["confusion"] = {{"tp", u.cm.tp}, {"tn", u.cm.tn}, {"fp", u.cm.fp}, {"fn", u.cm.fn}};
    row.update(rates_json(u.acc, u.auc, u.far, u.frr, u.hter, u.eer_roc));
    json thresholds = json::array(), fpr = json::array(), tpr = json::array();
    for (const auto& p : u.roc.points) {
      thresholds.push_back(std::isinf(p.threshold) ? json(nullptr) : json(p.threshold));
      fpr.push_back(p.fpr);
      tpr.push_back(p.tpr);
    }
    row["roc"] = {{"threshold", thresholds}, {"fpr", fpr}, {"tpr", tpr}};
    j["users"].push_back(std::move(row));
  }
  const auto& a = report.average;
  j["average"] = rates_json(a.acc, a.auc, a.far, a.frr, a.hter, a.eer_roc);
  j["warnings"] = report.warnings;
  out << j.dump(2) << '\n';
}

EvalReport read_report_json(std::istream& in) {
  try {
    const auto j = json::parse(in);
    if (j.at("format") != kFormat) throw DataError("report schema error: not a mousedyn report");
    if (j.at("version") != kVersion) throw DataError("report schema error: unsupported version");
    EvalReport r;
    r.scenario = parse_scenario(j.at("scenario").get<std::string>());
    r.model = parse_model_kind(j.at("model").get<std::string>());
    const auto action = j.at("action").get<std::string>();
    if (action != "all") r.action = parse_action_kind(action);
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& row : j.at("users")) {
      UserRow u;
      u.user_id = row.at("user_id").get<std::string>();
      u.n_train = row.at("n_train").get<std::size_t>();
      u.n_test = row.at("n_test").get<std::size_t>();
      const auto& cm = row.at("confusion");
      u.cm = {cm.at("tp").get<std::size_t>(), cm.at("tn").get<std::size_t>(),
              cm.at("fp").get<std::size_t>(), cm.at("fn").get<std::size_t>()};
      u.acc = opt_from(row, "acc");
      u.auc = opt_from(row, "auc");
      u.far = opt_from(row, "far");
      u.frr = opt_from(row, "frr");
      u.hter = opt_from(row, "hter");
      u.eer_roc = opt_from(row, "eer_roc");
      const auto& roc = row.at("roc");
      const auto& th = roc.at("threshold");
      const auto& fpr = roc.at("fpr");
      const auto& tpr = roc.at("tpr");
      if (th.size() != fpr.size() || fpr.size() != tpr.size()) {
        throw DataError("report schema error: ROC arrays differ in length for user " + u.user_id);
      }
      for (std::size_t i = 0; i < fpr.size(); ++i) {
        const double t = th[i].is_null() ? std::numeric_limits<double>::infinity() : th[i].get<double>();
        u.roc.points.push_back({t, fpr[i].get<double>(), tpr[i].get<double>()});
      }
      r.users.push_back(std::move(u));
    }
    const auto& avg = j.at("average");
    r.average = {opt_from(avg, "acc"), opt_from(avg, "auc"), opt_from(avg, "far"),
                 opt_from(avg, "frr"), opt_from(avg, "hter"), opt_from(avg, "eer_roc")};
    if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report schema error: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("report schema error: ") + e.what());
  }
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "user,acc_pct,auc_pct,far,frr,hter,eer_roc\n";
  for (const auto& u : report.users) {
    out << u.user_id << ',' << fixed(u.acc, 1, 100.0) << ',' << fixed(u.auc, 1, 100.0) << ','
        << fixed(u.far, 3) << ',' << fixed(u.frr, 3) << ',' << fixed(u.hter, 3) << ','
        << fixed(u.eer_roc, 3) << '\n';
  }
  const auto& a = report.average;
  out << "Avg," << fixed(a.acc, 1, 100.0) << ',' << fixed(a.auc, 1, 100.0) << ',' << fixed(a.far, 3)
      << ',' << fixed(a.frr, 3) << ',' << fixed(a.hter, 3) << ',' << fixed(a.eer_roc, 3) << '\n';
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "threshold,fpr,tpr\n";
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : curve.points) {
    if (std::isinf(p.threshold)) out << "inf"; else out << p.threshold;
    out << ',' << p.fpr << ',' << p.tpr << '\n';
  }
  out.precision(old_precision);
}

void print_report_table(std::ostream& out, const EvalReport& report) {
  out << "scenario " << to_string(report.scenario) << ", model " << to_string(report.model)
      << ", action " << action_tag(report) << ", seed " << report.seed << '\n';
  std::array<char, 160> line{};
  auto row = [&](const std::string& user, const auto& acc, const auto& auc_v, const auto& far,
                 const auto& frr, const auto& hter, const auto& er) {
    std::snprintf(line.data(), line.size(), "%-8s %7s %7s %7s %7s %9s %9s\n", user.c_str(),
                  fixed(acc, 1, 100.0).c_str(), fixed(auc_v, 1, 100.0).c_str(), fixed(far, 3).c_str(),
                  fixed(frr, 3).c_str(), fixed(hter, 3).c_str(), fixed(er, 3).c_str());
    out << line.data();
  };
  std::snprintf(line.data(), line.size(), "%-8s %7s %7s %7s %7s %9s %9s\n", "User", "ACC%", "AUC%",
                "FAR", "FRR", "HTER", "EER(roc)");
  out << line.data();
  for (const auto& u : report.users) row(u.user_id, u.acc, u.auc, u.far, u.frr, u.hter, u.eer_roc);
  const auto& a = report.average;
  row("Avg", a.acc, a.auc, a.far, a.frr, a.hter, a.eer_roc);
}

std::string render_roc_svg(const std::string& title, const std::vector<RocPlotSeries>& series) {
  constexpr double W = 560, H = 520, left = 70, top = 50, size = 400;
  static constexpr std::array<const char*, 10> palette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  auto px = [&](double fpr) { return left + fpr * size; };
  auto py = [&](double tpr) { return top + (1.0 - tpr) * size; };
  auto num = [](double v) {
    std::array<char, 32> b{};
    std::snprintf(b.data(), b.size(), "%.2f", v);
    return std::string(b.data());
  };
  auto escape = [](const std::string& s) {
    std::string o;
    for (const char c : s) {
      switch (c) {
        case '&': o += "&amp;"; break;
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '"': o += "&quot;"; break;
        default: o += c;
      }
    }
    return o;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(title) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << size << "\" height=\"" << size
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = i / 5.0;
    svg << "<line x1=\"" << num(px(v)) << "\" y1=\"" << top + size << "\" x2=\"" << num(px(v))
        << "\" y2=\"" << top + size + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(px(v)) << "\" y=\"" << top + size + 20
        << "\" text-anchor=\"middle\" font-size=\"12\">" << num(v).substr(0, 3) << "</text>\n";
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << num(py(v)) << "\" x2=\"" << left << "\" y2=\""
        << num(py(v)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << num(py(v) + 4)
        << "\" text-anchor=\"end\" font-size=\"12\">" << num(v).substr(0, 3) << "</text>\n";
  }
  svg << "<text x=\"" << left + size / 2 << "\" y=\"" << top + size + 42
      << "\" text-anchor=\"middle\" font-size=\"14\">False Positive Rate</text>\n";
  svg << "<text x=\"18\" y=\"" << top + size / 2 << "\" text-anchor=\"middle\" font-size=\"14\" "
      << "transform=\"rotate(-90 18 " << top + size / 2 << ")\">True Positive Rate</text>\n";
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(1)
      << "\" stroke=\"#999\" stroke-dasharray=\"6 4\"/>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto* color = palette[s % palette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : series[s].curve.points) svg << num(px(p.fpr)) << ',' << num(py(p.tpr)) << ' ';
    svg << "\"/>\n";
    std::array<char, 32> auc_text{};
    std::snprintf(auc_text.data(), auc_text.size(), "%.3f", series[s].auc);
    const double ly = top + size - 12.0 - 16.0 * static_cast<double>(series.size() - 1 - s);
    svg << "<text x=\"" << left + size - 8 << "\" y=\"" << num(ly)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">"
        << escape(series[s].label) << " AUC=" << auc_text.data() << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mousedyn
