#include <algorithm>
#include <map>
#include <set>

#include "dmnprompt/dmn.hpp"
#include "dmnprompt/feel.hpp"
#include "dmnprompt/io.hpp"
#include "dmnprompt/xml.hpp"

namespace dmnprompt::dmn {

std::string_view to_string(HitPolicy policy) noexcept { return policy == HitPolicy::unique ? "UNIQUE" : "FIRST"; }

std::string_view to_string(DmnErrorKind kind) noexcept {
  switch (kind) {
    case DmnErrorKind::malformed_xml:
      return "MalformedXml";
    case DmnErrorKind::unsupported_namespace:
      return "UnsupportedNamespace";
    case DmnErrorKind::missing_required_attribute:
      return "MissingRequiredAttribute";
    case DmnErrorKind::duplicate_id:
      return "DuplicateId";
    case DmnErrorKind::orphan_table:
      return "OrphanTable";
    case DmnErrorKind::ambiguous_literal:
      return "AmbiguousLiteral";
  }
  return "DmnError";
}

const InputDataElement* DecisionModel::find_input(std::string_view id) const {
  for (const auto& e : input_data) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const DecisionTable* DecisionModel::find_table(std::string_view id) const {
  for (const auto& e : tables) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const LiteralExpressionDecision* DecisionModel::find_literal(std::string_view id) const {
  for (const auto& e : literals) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

bool DecisionModel::has_element(std::string_view id) const {
  if (find_input(id) || find_table(id) || find_literal(id)) return true;
  return std::any_of(annotations.begin(), annotations.end(), [&](const Annotation& a) { return a.id == id; });
}

namespace {

using xml::Element;

bool is_dmn_namespace(std::string_view ns) {
  return ns == kDmn13Namespace || ns == kDmn12Namespace || ns == kDmn11Namespace;
}

std::string href_target(const Element& ref, std::vector<std::string>& warnings) {
  auto href = ref.attr("href");
  if (!href) {
    throw DmnError(DmnErrorKind::missing_required_attribute,
                   "line " + std::to_string(ref.line) + ": <" + ref.name + "> lacks href");
  }
  auto hash = href->find('#');
  if (hash == std::string::npos) return xml::trim(*href);
  if (hash != 0) warnings.push_back("external reference '" + *href + "' is not supported; using local id");
  return xml::trim(href->substr(hash + 1));
}

std::string required_attr(const Element& e, std::string_view attr) {
  auto v = e.attr(attr);
  if (!v || xml::trim(*v).empty()) {
    throw DmnError(DmnErrorKind::missing_required_attribute,
                   "line " + std::to_string(e.line) + ": <" + e.name + "> lacks required attribute '" +
                       std::string(attr) + "'");
  }
  return *v;
}

struct PendingDecision {
  std::string id;
  std::vector<std::string> required;  // ids this decision information-requires, in document order
  bool is_table = false;
  std::size_t index = 0;  // into tables or literals
};

class DmnReader {
 public:
  ParsedModel read(std::string_view document) {
    Element root;
    try {
      root = xml::parse(document);
    } catch (const xml::XmlError& e) {
      throw DmnError(DmnErrorKind::malformed_xml, e.what());
    }
    if (root.name != "definitions" || !is_dmn_namespace(root.ns)) {
      throw DmnError(DmnErrorKind::unsupported_namespace,
                     "root element {" + root.ns + "}" + root.name + " is not a DMN 1.1-1.3 <definitions>");
    }
    if (root.ns != kDmn13Namespace) {
      warn("DMN namespace '" + root.ns + "' is read as DMN 1.3");
    }
    dmn_ns_ = root.ns;

    out_.model.id = root.attr("id").value_or("");
    out_.model.name = root.attr("name").value_or("");
    out_.model.target_namespace = root.attr("namespace").value_or("");

    for (const auto& child : root.children) {
      if (child.ns != dmn_ns_) continue;  // DMNDI and vendor extensions
      if (child.name == "inputData") {
        read_input_data(child);
      } else if (child.name == "decision") {
        read_decision(child);
      } else if (child.name == "textAnnotation") {
        read_annotation(child);
      } else if (child.name == "association") {
        read_association(child);
      } else if (child.name == "description" || child.name == "extensionElements") {
        continue;
      } else {
        if (auto id = child.attr("id")) skipped_.insert(*id);
        warn("unsupported element <" + child.name + "> at line " + std::to_string(child.line) + " skipped");
      }
    }

    check_unique_ids();
    resolve_types();
    assemble_requirements();
    return std::move(out_);
  }

 private:
  void warn(std::string message) { out_.warnings.push_back(std::move(message)); }

  void read_input_data(const Element& e) {
    InputDataElement in;
    in.id = required_attr(e, "id");
    in.name = required_attr(e, "name");
    bool declared = false;
    if (const Element* var = e.child("variable")) {
      if (auto tr = var->attr("typeRef")) {
        if (auto t = value_type_from_type_ref(*tr)) {
          in.value_type = *t;
          declared = true;
        } else {
          warn("inputData '" + in.id + "': unsupported typeRef '" + *tr + "' read as text");
          declared = true;
        }
      }
    }
    input_declared_.push_back(declared);
    out_.model.input_data.push_back(std::move(in));
  }

  void read_decision(const Element& e) {
    PendingDecision pd;
    pd.id = required_attr(e, "id");
    std::string name = required_attr(e, "name");

    const Element* table = e.child("decisionTable");
    const Element* literal = e.child("literalExpression");
    if (table == nullptr && literal == nullptr) {
      skipped_.insert(pd.id);
      warn("decision '" + pd.id + "' has no decision table or literal expression; skipped");
      all_ids_.push_back(pd.id);
      return;
    }

    for (const auto& c : e.children) {
      if (c.ns != dmn_ns_) continue;
      if (c.name == "informationRequirement") {
        for (const auto& ref : c.children) {
          if (ref.name == "requiredInput" || ref.name == "requiredDecision") {
            pd.required.push_back(href_target(ref, out_.warnings));
          }
        }
      } else if (c.name == "knowledgeRequirement" || c.name == "authorityRequirement") {
        warn("decision '" + pd.id + "': <" + c.name + "> is not supported; ignored");
      }
    }

    if (table != nullptr) {
      pd.is_table = true;
      pd.index = out_.model.tables.size();
      out_.model.tables.push_back(read_table(*table, pd.id, name));
    } else {
      pd.index = out_.model.literals.size();
      LiteralExpressionDecision lit;
      lit.id = pd.id;
      lit.name = name;
      lit.expression_text = literal->child_text("text").value_or("");
      try {
        lit.referenced_variables = feel::parse_literal_expression(lit.expression_text).referenced_variables();
      } catch (const feel::FeelError&) {
        // reported by validate()
      }
      out_.model.literals.push_back(std::move(lit));
    }
    all_ids_.push_back(pd.id);
    decisions_.push_back(std::move(pd));
  }

  DecisionTable read_table(const Element& e, const std::string& id, const std::string& name) {
    DecisionTable t;
    t.id = id;
    t.name = name;
    if (auto hp = e.attr("hitPolicy")) {
      if (*hp == "UNIQUE") {
        t.hit_policy = HitPolicy::unique;
      } else if (*hp != "FIRST") {
        warn("decision table '" + id + "': hit policy " + *hp + " is not supported; using FIRST");
      }
    }
    if (e.attr("aggregation")) warn("decision table '" + id + "': aggregation is not supported; ignored");

    std::vector<bool> input_declared;
    std::vector<bool> output_declared;
    for (const auto& c : e.children) {
      if (c.ns != dmn_ns_) continue;
      if (c.name == "input") {
        InputClause ic;
        const Element* expr = c.child("inputExpression");
        ic.expression = expr ? expr->child_text("text").value_or("") : "";
        ic.label = c.attr("label").value_or(ic.expression);
        bool declared = false;
        if (expr) {
          if (auto tr = expr->attr("typeRef")) {
            if (auto vt = value_type_from_type_ref(*tr)) {
              ic.value_type = *vt;
              declared = true;
            }
          }
        }
        input_declared.push_back(declared);
        t.input_clauses.push_back(std::move(ic));
      } else if (c.name == "output") {
        OutputClause oc;
        oc.name = c.attr("name").value_or(c.attr("label").value_or(""));
        bool declared = false;
        if (auto tr = c.attr("typeRef")) {
          if (auto vt = value_type_from_type_ref(*tr)) {
            oc.value_type = *vt;
            declared = true;
          }
        }
        output_declared.push_back(declared);
        t.output_clauses.push_back(std::move(oc));
      } else if (c.name == "rule") {
        TableRule r;
        for (const auto& entry : c.children) {
          if (entry.name == "inputEntry") {
            std::string text = entry.child_text("text").value_or("");
            r.input_entries.push_back(text.empty() ? "-" : text);
          } else if (entry.name == "outputEntry") {
            r.output_entries.push_back(entry.child_text("text").value_or(""));
          }
        }
        t.rules.push_back(std::move(r));
      }
    }
    table_input_declared_.push_back(std::move(input_declared));
    table_output_declared_.push_back(std::move(output_declared));
    return t;
  }

  void read_annotation(const Element& e) {
    Annotation a;
    a.id = required_attr(e, "id");
    a.text = e.child_text("text").value_or("");
    all_ids_.push_back(a.id);
    out_.model.annotations.push_back(std::move(a));
  }

  void read_association(const Element& e) {
    const Element* src = e.child("sourceRef");
    const Element* dst = e.child("targetRef");
    if (src == nullptr || dst == nullptr) {
      throw DmnError(DmnErrorKind::missing_required_attribute,
                     "line " + std::to_string(e.line) + ": <association> needs sourceRef and targetRef");
    }
    associations_.push_back({href_target(*src, out_.warnings), href_target(*dst, out_.warnings),
                             RequirementKind::association});
  }

  void check_unique_ids() {
    std::vector<std::string> ids = all_ids_;
    for (const auto& in : out_.model.input_data) ids.push_back(in.id);
    std::sort(ids.begin(), ids.end());
    auto dup = std::adjacent_find(ids.begin(), ids.end());
    if (dup != ids.end()) throw DmnError(DmnErrorKind::duplicate_id, "duplicate element id '" + *dup + "'");
  }

  // Column types: declared typeRef, else the input data's declared type,
  // else number when every non-wildcard cell is numeric.
  void resolve_types() {
    auto& model = out_.model;
    auto column_numeric = [&](const DecisionTable& t, std::size_t col) {
      bool any = false;
      for (const auto& r : t.rules) {
        if (col >= r.input_entries.size()) continue;
        const std::string& cell = r.input_entries[col];
        if (xml::trim(cell) == "-") continue;
        if (!feel::is_numeric_cell(cell)) return false;
        any = true;
      }
      return any;
    };

    for (std::size_t ti = 0; ti < model.tables.size(); ++ti) {
      auto& t = model.tables[ti];
      for (std::size_t c = 0; c < t.input_clauses.size(); ++c) {
        if (table_input_declared_[ti][c]) continue;
        auto& clause = t.input_clauses[c];
        bool resolved = false;
        for (std::size_t i = 0; i < model.input_data.size(); ++i) {
          if (model.input_data[i].name == clause.expression && input_declared_[i]) {
            clause.value_type = model.input_data[i].value_type;
            resolved = true;
          }
        }
        if (!resolved && column_numeric(t, c)) clause.value_type = ValueType::number;
      }
      for (std::size_t c = 0; c < t.output_clauses.size(); ++c) {
        if (table_output_declared_[ti][c]) continue;
        bool all_numbers = !t.rules.empty();
        bool all_bools = !t.rules.empty();
        for (const auto& r : t.rules) {
          if (c >= r.output_entries.size()) continue;
          const std::string cell = xml::trim(r.output_entries[c]);
          all_numbers = all_numbers && Decimal::try_parse(cell).has_value();
          all_bools = all_bools && (cell == "true" || cell == "false");
        }
        if (all_numbers) t.output_clauses[c].value_type = ValueType::number;
        if (all_bools) t.output_clauses[c].value_type = ValueType::boolean;
      }
    }

    for (std::size_t i = 0; i < model.input_data.size(); ++i) {
      if (input_declared_[i]) continue;
      auto& in = model.input_data[i];
      bool used = false;
      bool numeric = true;
      for (const auto& t : model.tables) {
        for (const auto& clause : t.input_clauses) {
          if (clause.expression != in.name) continue;
          used = true;
          numeric = numeric && clause.value_type == ValueType::number;
        }
      }
      if (used && numeric) in.value_type = ValueType::number;
    }
  }

  void assemble_requirements() {
    auto& reqs = out_.model.requirements;
    auto keep = [&](const std::string& a, const std::string& b) {
      if (skipped_.count(a) || skipped_.count(b)) {
        warn("requirement " + a + " -> " + b + " references an unsupported element; dropped");
        return false;
      }
      return true;
    };
    for (bool tables_pass : {true, false}) {
      for (const auto& d : decisions_) {
        if (d.is_table != tables_pass) continue;
        for (const auto& src : d.required) {
          if (keep(src, d.id)) reqs.push_back({src, d.id, RequirementKind::information});
        }
      }
    }
    for (auto& a : associations_) {
      if (!keep(a.source, a.target)) continue;
      for (auto& ann : out_.model.annotations) {
        if (ann.id == a.source) ann.attached_to.push_back(a.target);
        if (ann.id == a.target) ann.attached_to.push_back(a.source);
      }
      reqs.push_back(a);
    }
    // decisions_ were collected in document order; tables and literals keep
    // their own relative order, which is what the writer reproduces.
  }

  ParsedModel out_;
  std::string dmn_ns_;
  std::vector<PendingDecision> decisions_;
  std::vector<RequirementEdge> associations_;
  std::vector<std::string> all_ids_;
  std::set<std::string> skipped_;
  std::vector<bool> input_declared_;
  std::vector<std::vector<bool>> table_input_declared_;
  std::vector<std::vector<bool>> table_output_declared_;
};

}  // namespace

ParsedModel parse_dmn(std::string_view document) { return DmnReader().read(document); }

ParsedModel load_dmn_file(const std::string& path) { return parse_dmn(read_file(path)); }

}  // namespace dmnprompt::dmn
