#include <algorithm>
#include <iomanip>
#include <sstream>

#include "dmnprompt/eval.hpp"
#include "json.hpp"

namespace dmnprompt::eval {

using json = nlohmann::ordered_json;

__extension__ typedef unsigned __int128 uint128_t;

ConfusionCounts confusion(const std::vector<LabelRecord>& records) {
  if (records.empty()) throw EvalError(EvalErrorKind::empty_input, "no label records");
  ConfusionCounts c;
  for (const auto& r : records) {
    if (r.predicted_violation) {
      ++(r.gold_violation ? c.tp : c.fp);
    } else {
      ++(r.gold_violation ? c.fn : c.tn);
    }
  }
  return c;
}

std::string format_half_up(const Ratio& r, int digits) {
  uint128_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  uint128_t scaled = (static_cast<uint128_t>(r.num) * scale * 2 + r.den) / (static_cast<uint128_t>(r.den) * 2);
  auto whole = static_cast<std::uint64_t>(scaled / scale);
  auto frac = static_cast<std::uint64_t>(scaled % scale);
  std::string out = std::to_string(whole);
  if (digits > 0) {
    std::string f = std::to_string(frac);
    out += "." + std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
  }
  return out;
}

MetricsReport metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw std::invalid_argument("metrics need at least one record");
  MetricsReport m;
  m.counts = c;
  if (c.tp + c.fp > 0) m.precision = Ratio{c.tp, c.tp + c.fp};
  if (c.tp + c.fn > 0) m.recall = Ratio{c.tp, c.tp + c.fn};
  // 2PR/(P+R) reduces to 2tp/(2tp+fp+fn); at tp = 0 both P and R are 0 and F1 is taken as 0.
  if (m.precision && m.recall) m.f1 = Ratio{2 * c.tp, 2 * c.tp + c.fp + c.fn};
  m.accuracy = Ratio{c.tp + c.tn, c.total()};
  return m;
}

std::vector<RuleAccuracyRow> per_rule_report(const std::vector<LabelRecord>& records) {
  if (records.empty()) throw EvalError(EvalErrorKind::empty_input, "no label records");
  std::vector<RuleAccuracyRow> rows;
  RuleAccuracyRow overall{"overall", 0, 0, {}};
  for (const auto& r : records) {
    if (!r.feedback_correct) {
      throw EvalError(EvalErrorKind::missing_feedback_labels,
                      "case '" + r.case_id + "', rule '" + r.rule_name + "' has no feedback_correct label");
    }
    auto it = std::find_if(rows.begin(), rows.end(), [&](const RuleAccuracyRow& row) { return row.rule_name == r.rule_name; });
    if (it == rows.end()) {
      rows.push_back({r.rule_name, 0, 0, {}});
      it = rows.end() - 1;
    }
    ++it->n;
    ++overall.n;
    if (*r.feedback_correct) {
      ++it->correct_feedback_count;
      ++overall.correct_feedback_count;
    }
  }
  rows.push_back(overall);
  for (auto& row : rows) row.accuracy = Ratio{row.correct_feedback_count, row.n};
  return rows;
}

namespace {

std::string opt(const std::optional<Ratio>& r) { return r ? format_half_up(*r) : "null"; }

json ratio_json(const std::optional<Ratio>& r) { return r ? json(r->value()) : json(nullptr); }

std::string percent(const Ratio& r) {
  std::string s = format_half_up(Ratio{r.num * 100, r.den}, 1);
  return s + "%";
}

}  // namespace

std::string render_metrics_text(const MetricsReport& m) {
  std::ostringstream os;
  const auto& c = m.counts;
  os << "records    " << c.total() << '\n';
  os << "tp         " << c.tp << '\n';
  os << "fp         " << c.fp << '\n';
  os << "fn         " << c.fn << '\n';
  os << "tn         " << c.tn << '\n';
  os << "precision  " << opt(m.precision) << '\n';
  os << "recall     " << opt(m.recall) << '\n';
  os << "f1         " << opt(m.f1) << '\n';
  os << "accuracy   " << format_half_up(m.accuracy) << '\n';
  return os.str();
}

std::string render_per_rule_text(const std::vector<RuleAccuracyRow>& rows) {
  std::size_t width = 4;
  for (const auto& r : rows) width = std::max(width, r.rule_name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width)) << "rule" << "  " << std::right << std::setw(5) << "n"
     << "  " << std::setw(7) << "correct" << "  " << std::setw(8) << "accuracy" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(width)) << r.rule_name << "  " << std::right << std::setw(5) << r.n
       << "  " << std::setw(7) << r.correct_feedback_count << "  " << std::setw(8) << percent(r.accuracy) << '\n';
  }
  return os.str();
}

std::string render_metrics_json(const MetricsReport& m, const std::vector<RuleAccuracyRow>* per_rule) {
  json j = {{"tp", m.counts.tp},
            {"fp", m.counts.fp},
            {"fn", m.counts.fn},
            {"tn", m.counts.tn},
            {"precision", ratio_json(m.precision)},
            {"recall", ratio_json(m.recall)},
            {"f1", ratio_json(m.f1)},
            {"accuracy", m.accuracy.value()}};
  if (per_rule != nullptr) {
    json rows = json::array();
    for (const auto& r : *per_rule) {
      rows.push_back({{"rule", r.rule_name},
                      {"n", r.n},
                      {"correct_feedback_count", r.correct_feedback_count},
                      {"accuracy", r.accuracy.value()}});
    }
    j["per_rule"] = rows;
  }
  return j.dump(2) + "\n";
}

}  // namespace dmnprompt::eval
