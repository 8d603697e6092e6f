#include "ordersum/eval.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ordersum/error.hpp"
#include "ordersum/rouge.hpp"

namespace ordersum {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<TokenSequence> candidate_tokens(const Document& doc,
                                            std::span<const std::size_t> indices, bool stemming) {
  std::vector<TokenSequence> out;
  out.reserve(indices.size());
  for (std::size_t index : indices) {
    if (index >= doc.size()) throw Error("sentence index out of range in document " + doc.id);
    out.push_back(normalize(doc.sentences[index].text, stemming));
  }
  return out;
}

const Document& lookup(const DatasetSplit& split, const std::string& id) {
  const Document* doc = split.find(id);
  if (!doc) throw Error("output id " + id + " is not in split " + split.name);
  return *doc;
}

ordered_json row_to_json(const EvalRow& row) {
  return {{"r1", row.r1}, {"r2", row.r2}, {"rl_full", row.rl_full}, {"rl_norm", row.rl_norm},
          {"count", row.count}};
}

}  // namespace

EvalRow evaluate(std::string system, std::span<const SummaryResult> outputs,
                 const DatasetSplit& split, bool stemming) {
  if (outputs.empty()) throw Error("nothing to evaluate");
  EvalRow row;
  row.system = std::move(system);
  for (const auto& output : outputs) {
    const Document& doc = lookup(split, output.document_id);
    const auto reference = normalize_all(doc.reference, stemming);
    const auto candidate = candidate_tokens(doc, output.chosen.indices, stemming);
    const RougeReport report = rouge_report(reference, candidate);
    row.r1 += report.r1.f1;
    row.r2 += report.r2.f1;
    row.rl_full += report.rl_full.f1;
    row.rl_norm += report.rl_norm.f1;
  }
  row.count = outputs.size();
  const auto count = static_cast<double>(row.count);
  row.r1 /= count;
  row.r2 /= count;
  row.rl_full /= count;
  row.rl_norm /= count;
  return row;
}

double spearman(std::span<const std::size_t> order_a, std::span<const std::size_t> order_b) {
  const std::size_t m = order_a.size();
  if (m < 2) throw Error("spearman needs at least two ranked items");
  if (order_b.size() != m) throw Error("spearman orders have different lengths");
  std::map<std::size_t, std::size_t> rank_a;
  for (std::size_t i = 0; i < m; ++i) rank_a.emplace(order_a[i], i);
  if (rank_a.size() != m) throw Error("spearman order contains duplicates");
  double sum_sq = 0.0;
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < m; ++i) {
    auto it = rank_a.find(order_b[i]);
    if (it == rank_a.end() || !seen.insert(order_b[i]).second) {
      throw Error("spearman orders cover different index sets");
    }
    const double diff = static_cast<double>(it->second) - static_cast<double>(i);
    sum_sq += diff * diff;
  }
  const auto md = static_cast<double>(m);
  return 1.0 - 6.0 * sum_sq / (md * (md * md - 1.0));
}

OrderAnalysis analyze_order(std::span<const SummaryResult> outputs, const ProbabilityMap& probs,
                            const DatasetSplit& split, bool stemming) {
  if (outputs.empty()) throw Error("nothing to evaluate");
  OrderAnalysis analysis;
  double rho_sum = 0.0;
  for (const auto& output : outputs) {
    const Document& doc = lookup(split, output.document_id);
    auto p = probs.find(output.document_id);
    if (p == probs.end()) throw Error("no probabilities for document " + output.document_id);
    const CandidateSummary reordered = reorder_by_extractor(output, p->second);
    const auto reference = normalize_all(doc.reference, stemming);
    analysis.rl_model +=
        rouge_l_full(reference, candidate_tokens(doc, output.chosen.indices, stemming)).f1;
    analysis.rl_ext += rouge_l_full(reference, candidate_tokens(doc, reordered.indices, stemming)).f1;
    if (output.chosen.size() >= 2) {
      const double rho = spearman(output.chosen.indices, reordered.indices);
      analysis.correlation.per_document_rhos.push_back(rho);
      rho_sum += rho;
      ++analysis.correlation.count;
    } else {
      ++analysis.correlation.excluded;
    }
  }
  const auto count = static_cast<double>(outputs.size());
  analysis.rl_model /= count;
  analysis.rl_ext /= count;
  if (analysis.correlation.count > 0) {
    analysis.correlation.rho = rho_sum / static_cast<double>(analysis.correlation.count);
  }
  return analysis;
}

void emit_curves(const TrainState& state, std::ostream& out) {
  if (state.metrics_log.empty()) throw Error("no validation points to write");
  out << "step,r1,r2,rl_full\n";
  out << std::setprecision(9);
  for (const auto& record : state.metrics_log) {
    out << record.step << ',' << record.r1 << ',' << record.r2 << ',' << record.rl_full << '\n';
  }
}

void emit_curves(const TrainState& state, const std::string& path) {
  if (state.metrics_log.empty()) throw Error("no validation points to write");
  std::ofstream out(path);
  if (!out) throw Error("cannot write curves to " + path);
  emit_curves(state, out);
}

std::vector<ValidationRecord> read_curves(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "step,r1,r2,rl_full") throw Error("unexpected curve header");
  std::vector<ValidationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    ValidationRecord record;
    char comma = 0;
    if (!(fields >> record.step >> comma >> record.r1 >> comma >> record.r2 >> comma >> record.rl_full)) {
      throw Error("malformed curve row: " + line);
    }
    out.push_back(record);
  }
  return out;
}

void write_curves_svg(const TrainState& state, std::ostream& out) {
  if (state.metrics_log.empty()) throw Error("no validation points to plot");
  constexpr double kWidth = 640;
  constexpr double kHeight = 360;
  constexpr double kLeft = 56;
  constexpr double kRight = 16;
  constexpr double kTop = 24;
  constexpr double kBottom = 40;
  const auto& log = state.metrics_log;

  double lo = 1.0;
  double hi = 0.0;
  for (const auto& r : log) {
    lo = std::min({lo, r.r1, r.r2, r.rl_full});
    hi = std::max({hi, r.r1, r.r2, r.rl_full});
  }
  if (hi - lo < 1e-9) {
    lo -= 0.05;
    hi += 0.05;
  }
  const double first = static_cast<double>(log.front().step);
  const double last = static_cast<double>(log.back().step);
  const double span_x = last > first ? last - first : 1.0;
  auto x = [&](std::size_t step) {
    return kLeft + (static_cast<double>(step) - first) / span_x * (kWidth - kLeft - kRight);
  };
  auto y = [&](double v) { return kTop + (hi - v) / (hi - lo) * (kHeight - kTop - kBottom); };

  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
      << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = lo + (hi - lo) * tick / 4.0;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y(v) + 4 << "\" text-anchor=\"end\">"
        << std::setprecision(3) << v << std::setprecision(2) << "</text>\n";
  }
  out << "<text x=\"" << kLeft << "\" y=\"" << kHeight - 12 << "\">step " << log.front().step
      << "</text>\n";
  out << "<text x=\"" << kWidth - kRight << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"end\">step " << log.back().step << "</text>\n";

  struct Series {
    const char* name;
    const char* color;
    double ValidationRecord::*field;
  };
  const Series series[] = {{"ROUGE-1", "#1f77b4", &ValidationRecord::r1},
                           {"ROUGE-2", "#ff7f0e", &ValidationRecord::r2},
                           {"ROUGE-L", "#2ca02c", &ValidationRecord::rl_full}};
  int legend = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : log) out << x(r.step) << ',' << y(r.*(s.field)) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << kLeft + 10 + 90 * legend << "\" y=\"" << kTop - 8 << "\" fill=\"" << s.color
        << "\">" << s.name << "</text>\n";
    ++legend;
  }
  out << "</svg>\n";
}

std::string eval_report_json(std::span<const EvalRow> rows, const std::optional<OrderAnalysis>& analysis) {
  ordered_json report;
  ordered_json systems = ordered_json::object();
  for (const auto& row : rows) systems[row.system] = row_to_json(row);
  report["systems"] = std::move(systems);
  if (analysis) {
    ordered_json order;
    order["rl_model"] = analysis->rl_model;
    order["rl_ext"] = analysis->rl_ext;
    order["mean_rho"] = analysis->correlation.rho ? ordered_json(*analysis->correlation.rho) : ordered_json(nullptr);
    order["rho_count"] = analysis->correlation.count;
    order["rho_excluded"] = analysis->correlation.excluded;
    report["order_analysis"] = std::move(order);
  }
  return report.dump(2);
}

std::vector<EvalRow> parse_eval_report(const std::string& text) {
  try {
    const ordered_json report = ordered_json::parse(text);
    std::vector<EvalRow> rows;
    for (const auto& [name, value] : report.at("systems").items()) {
      EvalRow row;
      row.system = name;
      row.r1 = value.at("r1").get<double>();
      row.r2 = value.at("r2").get<double>();
      row.rl_full = value.at("rl_full").get<double>();
      row.rl_norm = value.at("rl_norm").get<double>();
      row.count = value.at("count").get<std::size_t>();
      rows.push_back(std::move(row));
    }
    return rows;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed evaluation report: ") + e.what());
  }
}

}  // namespace ordersum
