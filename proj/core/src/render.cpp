#include <algorithm>
#include <sstream>

#include "dmnprompt/dmn.hpp"
#include "dmnprompt/feel.hpp"
#include "dmnprompt/xml.hpp"

namespace dmnprompt::dmn {

std::string_view to_string(RenderStyle style) noexcept {
  return style == RenderStyle::raw_xml ? "raw_xml" : "compact_text";
}

std::optional<RenderStyle> render_style_from_string(std::string_view text) noexcept {
  if (text == "compact_text" || text == "compact") return RenderStyle::compact_text;
  if (text == "raw_xml" || text == "xml") return RenderStyle::raw_xml;
  return std::nullopt;
}

namespace {

std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  std::size_t w = display_width(s);
  if (w < width) out.append(width - w, ' ');
  return out;
}

std::string canonical_cell(const std::string& source, ValueType type) {
  try {
    return feel::parse_unary_test(source, type).to_feel();
  } catch (const feel::FeelError&) {
    return source;
  }
}

std::string canonical_output(const std::string& source, ValueType type) {
  try {
    return feel::parse_literal(source, type).to_feel();
  } catch (const feel::FeelError&) {
    return source;
  }
}

void render_table(std::ostringstream& os, const DecisionTable& t) {
  os << "  Decision table: " << t.name << " (hit policy " << to_string(t.hit_policy) << ")\n";

  const std::size_t n_in = t.input_clauses.size();
  const std::size_t n_out = t.output_clauses.size();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  for (const auto& c : t.input_clauses) header.push_back(c.label);
  for (const auto& c : t.output_clauses) header.push_back(c.name);
  rows.push_back(header);
  for (const auto& r : t.rules) {
    std::vector<std::string> row;
    for (std::size_t c = 0; c < n_in; ++c) {
      row.push_back(c < r.input_entries.size() ? canonical_cell(r.input_entries[c], t.input_clauses[c].value_type)
                                               : "?");
    }
    for (std::size_t c = 0; c < n_out; ++c) {
      row.push_back(c < r.output_entries.size()
                        ? canonical_output(r.output_entries[c], t.output_clauses[c].value_type)
                        : "?");
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(n_in + n_out, 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], display_width(row[c]));
  }
  const std::string number_width(std::to_string(t.rules.size()).size() + 1, ' ');

  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string line = "    ";
    if (i == 0) {
      line += number_width;
    } else {
      std::string num = std::to_string(i) + ":";
      line += pad(num, number_width.size());
    }
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      line += c == n_in ? " || " : " | ";
      line += pad(rows[i][c], width[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
  if (t.rules.empty()) os << "    (no rules)\n";
}

void render_literal(std::ostringstream& os, const LiteralExpressionDecision* lit) {
  if (lit == nullptr) {
    os << "  Literal expression: (none)\n";
    return;
  }
  os << "  Literal expression: " << lit->name << '\n';
  std::istringstream lines(lit->expression_text);
  std::string line;
  while (std::getline(lines, line)) os << "    " << line << '\n';
}

std::string render_compact(const DecisionModel& model) {
  std::ostringstream os;
  os << "DMN model: " << model.name << '\n';
  os << "Decision rules: " << model.tables.size() << '\n';

  std::vector<std::string> used_inputs;
  for (std::size_t i = 0; i < model.tables.size(); ++i) {
    const auto& t = model.tables[i];
    const LiteralExpressionDecision* lit = nullptr;
    std::vector<const InputDataElement*> inputs;
    for (const auto& e : model.requirements) {
      if (e.kind != RequirementKind::information) continue;
      if (e.source == t.id && lit == nullptr) lit = model.find_literal(e.target);
      if (e.target == t.id) {
        if (const auto* in = model.find_input(e.source)) {
          inputs.push_back(in);
          used_inputs.push_back(in->id);
        }
      }
    }

    os << '\n' << "Rule " << (i + 1) << ": " << rule_name_for(model, t) << '\n';
    os << "  Inputs:\n";
    if (inputs.empty()) os << "    (none)\n";
    for (const auto* in : inputs) os << "    - " << in->name << " (" << to_string(in->value_type) << ")\n";
    render_table(os, t);
    render_literal(os, lit);
  }

  bool header = false;
  for (const auto& in : model.input_data) {
    if (std::find(used_inputs.begin(), used_inputs.end(), in.id) != used_inputs.end()) continue;
    if (!header) {
      os << "\nOther input data:\n";
      header = true;
    }
    os << "  - " << in.name << " (" << to_string(in.value_type) << ")\n";
  }
  return os.str();
}

class XmlWriter {
 public:
  void open(std::string_view name, std::initializer_list<std::pair<std::string_view, std::string>> attrs,
            bool empty = false) {
    indent();
    os_ << '<' << name;
    for (const auto& [k, v] : attrs) os_ << ' ' << k << "=\"" << xml::escape_attribute(v) << '"';
    if (empty) {
      os_ << " />\n";
      return;
    }
    os_ << ">\n";
    ++depth_;
  }
  void close(std::string_view name) {
    --depth_;
    indent();
    os_ << "</" << name << ">\n";
  }
  void text_element(std::string_view text) {
    indent();
    os_ << "<text>" << xml::escape_text(text) << "</text>\n";
  }
  void raw(std::string_view s) { os_ << s; }
  std::string str() const { return os_.str(); }

 private:
  void indent() {
    for (int i = 0; i < depth_; ++i) os_ << "  ";
  }
  std::ostringstream os_;
  int depth_ = 0;
};

void write_requirements(XmlWriter& w, const DecisionModel& model, const std::string& decision_id) {
  std::size_t n = 0;
  for (const auto& e : model.requirements) {
    if (e.kind != RequirementKind::information || e.target != decision_id) continue;
    ++n;
    w.open("informationRequirement", {{"id", decision_id + "_ir" + std::to_string(n)}});
    const char* ref = model.find_input(e.source) ? "requiredInput" : "requiredDecision";
    w.open(ref, {{"href", "#" + e.source}}, true);
    w.close("informationRequirement");
  }
}

std::string render_xml(const DecisionModel& model) {
  XmlWriter w;
  w.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  w.open("definitions", {{"xmlns", std::string(kDmn13Namespace)},
                         {"id", model.id},
                         {"name", model.name},
                         {"namespace", model.target_namespace}});

  for (const auto& in : model.input_data) {
    w.open("inputData", {{"id", in.id}, {"name", in.name}});
    w.open("variable", {{"name", in.name}, {"typeRef", std::string(type_ref_for(in.value_type))}}, true);
    w.close("inputData");
  }

  for (const auto& t : model.tables) {
    w.open("decision", {{"id", t.id}, {"name", t.name}});
    write_requirements(w, model, t.id);
    w.open("decisionTable", {{"id", t.id + "_table"}, {"hitPolicy", std::string(to_string(t.hit_policy))}});
    for (std::size_t c = 0; c < t.input_clauses.size(); ++c) {
      const auto& ic = t.input_clauses[c];
      const std::string cid = t.id + "_input_" + std::to_string(c + 1);
      w.open("input", {{"id", cid}, {"label", ic.label}});
      w.open("inputExpression", {{"id", cid + "_expr"}, {"typeRef", std::string(type_ref_for(ic.value_type))}});
      w.text_element(ic.expression);
      w.close("inputExpression");
      w.close("input");
    }
    for (std::size_t c = 0; c < t.output_clauses.size(); ++c) {
      const auto& oc = t.output_clauses[c];
      w.open("output",
             {{"id", t.id + "_output_" + std::to_string(c + 1)},
              {"name", oc.name},
              {"typeRef", std::string(type_ref_for(oc.value_type))}},
             true);
    }
    for (std::size_t r = 0; r < t.rules.size(); ++r) {
      const auto& rule = t.rules[r];
      const std::string rid = t.id + "_rule_" + std::to_string(r + 1);
      w.open("rule", {{"id", rid}});
      for (std::size_t c = 0; c < rule.input_entries.size(); ++c) {
        w.open("inputEntry", {{"id", rid + "_in_" + std::to_string(c + 1)}});
        w.text_element(rule.input_entries[c]);
        w.close("inputEntry");
      }
      for (std::size_t c = 0; c < rule.output_entries.size(); ++c) {
        w.open("outputEntry", {{"id", rid + "_out_" + std::to_string(c + 1)}});
        w.text_element(rule.output_entries[c]);
        w.close("outputEntry");
      }
      w.close("rule");
    }
    w.close("decisionTable");
    w.close("decision");
  }

  for (const auto& l : model.literals) {
    w.open("decision", {{"id", l.id}, {"name", l.name}});
    w.open("variable", {{"name", l.name}, {"typeRef", "string"}}, true);
    write_requirements(w, model, l.id);
    w.open("literalExpression", {{"id", l.id + "_expr"}});
    w.text_element(l.expression_text);
    w.close("literalExpression");
    w.close("decision");
  }

  for (const auto& a : model.annotations) {
    w.open("textAnnotation", {{"id", a.id}});
    w.text_element(a.text);
    w.close("textAnnotation");
  }

  std::size_t n = 0;
  for (const auto& e : model.requirements) {
    if (e.kind != RequirementKind::association) continue;
    ++n;
    w.open("association", {{"id", "association_" + std::to_string(n)}});
    w.open("sourceRef", {{"href", "#" + e.source}}, true);
    w.open("targetRef", {{"href", "#" + e.target}}, true);
    w.close("association");
  }
  w.close("definitions");
  return w.str();
}

}  // namespace

std::string render_table_block(const DecisionTable& table) {
  std::ostringstream os;
  render_table(os, table);
  return os.str();
}

std::string render_canonical(const DecisionModel& model, RenderStyle style) {
  return style == RenderStyle::raw_xml ? render_xml(model) : render_compact(model);
}

}  // namespace dmnprompt::dmn
