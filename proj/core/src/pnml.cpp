#include <algorithm>
#include <charconv>
#include <set>

#include "dmnprompt/io.hpp"
#include "dmnprompt/pnml.hpp"
#include "dmnprompt/xml.hpp"

namespace dmnprompt::pnml {

std::string_view to_string(TransitionKind kind) noexcept {
  switch (kind) {
    case TransitionKind::task: return "task";
    case TransitionKind::xor_split: return "xor_split";
    case TransitionKind::xor_join: return "xor_join";
    case TransitionKind::and_split: return "and_split";
    case TransitionKind::and_join: return "and_join";
    case TransitionKind::plain: return "plain";
  }
  return "?";
}

std::string_view to_string(PnmlErrorKind kind) noexcept {
  switch (kind) {
    case PnmlErrorKind::malformed_xml: return "MalformedXml";
    case PnmlErrorKind::non_bipartite_arc: return "NonBipartiteArc";
    case PnmlErrorKind::dangling_arc: return "DanglingArc";
    case PnmlErrorKind::duplicate_id: return "DuplicateId";
  }
  return "?";
}

std::optional<TransitionKind> kind_from_woped_operator(int type) noexcept {
  switch (type) {
    case 101: return TransitionKind::and_split;
    case 102: return TransitionKind::and_join;
    case 104: return TransitionKind::xor_split;
    case 105: return TransitionKind::xor_join;
    case 106: return TransitionKind::xor_split;  // xor split-join
    case 107: return TransitionKind::and_split;  // and split-join
    case 108: return TransitionKind::xor_split;  // and join, xor split
    case 109: return TransitionKind::and_split;  // xor join, and split
    default: return std::nullopt;
  }
}

const Place* PetriNet::find_place(std::string_view id) const {
  auto it = std::find_if(places.begin(), places.end(), [&](const Place& p) { return p.id == id; });
  return it == places.end() ? nullptr : &*it;
}

const Transition* PetriNet::find_transition(std::string_view id) const {
  auto it = std::find_if(transitions.begin(), transitions.end(), [&](const Transition& t) { return t.id == id; });
  return it == transitions.end() ? nullptr : &*it;
}

void check_net(const PetriNet& net) {
  std::set<std::string, std::less<>> places;
  std::set<std::string, std::less<>> transitions;
  for (const auto& p : net.places) {
    if (!places.insert(p.id).second) throw PnmlError(PnmlErrorKind::duplicate_id, "duplicate id '" + p.id + "'");
  }
  for (const auto& t : net.transitions) {
    if (places.count(t.id) != 0 || !transitions.insert(t.id).second) {
      throw PnmlError(PnmlErrorKind::duplicate_id, "duplicate id '" + t.id + "'");
    }
  }
  for (const auto& a : net.arcs) {
    const bool sp = places.count(a.source) != 0;
    const bool st = transitions.count(a.source) != 0;
    const bool tp = places.count(a.target) != 0;
    const bool tt = transitions.count(a.target) != 0;
    if (!(sp || st) || !(tp || tt)) {
      throw PnmlError(PnmlErrorKind::dangling_arc, "arc " + a.source + " -> " + a.target + " has an unknown endpoint '" +
                                                       (!(sp || st) ? a.source : a.target) + "'");
    }
    if (sp == tp) {
      throw PnmlError(PnmlErrorKind::non_bipartite_arc, "arc " + a.source + " -> " + a.target + " connects two " +
                                                            (sp ? "places" : "transitions"));
    }
  }
}

namespace {

std::string name_of(const xml::Element& e) {
  if (const auto* n = e.child("name")) {
    if (auto t = n->child_text("text")) return *t;
    return xml::trim(n->text);
  }
  return "";
}

struct RawTransition {
  Transition t;
  std::optional<std::string> operator_id;
};

class PnmlReader {
 public:
  ParsedNet read(std::string_view document) {
    xml::Element root;
    try {
      root = xml::parse(document);
    } catch (const xml::XmlError& e) {
      throw PnmlError(PnmlErrorKind::malformed_xml, e.what());
    }
    if (root.name != "pnml") {
      throw PnmlError(PnmlErrorKind::malformed_xml, "root element is <" + root.name + ">, expected <pnml>");
    }
    auto nets = root.children_named("net");
    if (nets.empty()) throw PnmlError(PnmlErrorKind::malformed_xml, "document contains no <net>");
    if (nets.size() > 1) warn("document contains " + std::to_string(nets.size()) + " nets; only the first is read");

    read_container(*nets.front());
    merge_operators();
    check_net(out_.net);
    return std::move(out_);
  }

 private:
  void warn(std::string message) { out_.warnings.push_back(std::move(message)); }

  void read_container(const xml::Element& container) {
    for (const auto& c : container.children) {
      if (c.name == "place") {
        read_place(c);
      } else if (c.name == "transition") {
        read_transition(c);
      } else if (c.name == "arc") {
        read_arc(c);
      } else if (c.name == "page") {
        read_container(c);
      } else if (c.name == "toolspecific") {
        check_tool(c);
      } else if (c.name != "name" && c.name != "graphics") {
        warn("line " + std::to_string(c.line) + ": skipped unsupported element <" + c.name + ">");
      }
    }
  }

  void check_tool(const xml::Element& e) {
    auto tool = e.attr("tool").value_or("");
    if (tool != "WoPeD") warn("line " + std::to_string(e.line) + ": skipped tool-specific data for '" + tool + "'");
  }

  std::string required_id(const xml::Element& e) {
    auto id = e.attr("id");
    if (!id || id->empty()) {
      throw PnmlError(PnmlErrorKind::malformed_xml,
                      "line " + std::to_string(e.line) + ": <" + e.name + "> has no id attribute");
    }
    return *id;
  }

  void read_place(const xml::Element& e) {
    Place p{required_id(e), name_of(e)};
    if (const auto* m = e.child("initialMarking")) {
      std::string text = m->child_text("text").value_or(xml::trim(m->text));
      int tokens = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), tokens);
      if (ec != std::errc() || ptr != text.data() + text.size() || tokens < 0) {
        warn("line " + std::to_string(m->line) + ": ignored initial marking '" + text + "' of place '" + p.id + "'");
      } else if (tokens > 0) {
        out_.net.initial_marking[p.id] = tokens;
      }
    }
    for (const auto& c : e.children) {
      if (c.name == "toolspecific") check_tool(c);
    }
    out_.net.places.push_back(std::move(p));
  }

  void read_transition(const xml::Element& e) {
    RawTransition raw;
    raw.t.id = required_id(e);
    raw.t.label = name_of(e);
    for (const auto* tool : e.children_named("toolspecific")) {
      if (tool->attr("tool").value_or("") != "WoPeD") {
        check_tool(*tool);
        continue;
      }
      if (const auto* op = tool->child("operator")) {
        int type = 0;
        std::string code = op->attr("type").value_or("");
        std::from_chars(code.data(), code.data() + code.size(), type);
        if (auto kind = kind_from_woped_operator(type)) {
          raw.t.kind = *kind;
          raw.operator_id = op->attr("id").value_or(raw.t.id);
        } else {
          warn("line " + std::to_string(op->line) + ": unknown WoPeD operator type '" + code + "' on '" + raw.t.id +
               "'; treated as a task");
        }
      }
      if (const auto* res = tool->child("transitionResource")) {
        auto role = res->attr("roleName");
        if (!role || xml::trim(*role).empty()) role = res->attr("organizationalUnitName");
        if (role && !xml::trim(*role).empty()) raw.t.resource = xml::trim(*role);
      }
    }
    if (raw.t.label.empty() && !raw.operator_id) raw.t.kind = TransitionKind::plain;
    raw_transitions_.push_back(std::move(raw));
  }

  void read_arc(const xml::Element& e) {
    auto source = e.attr("source");
    auto target = e.attr("target");
    if (!source || !target) {
      throw PnmlError(PnmlErrorKind::malformed_xml,
                      "line " + std::to_string(e.line) + ": <arc> needs source and target attributes");
    }
    out_.net.arcs.push_back({*source, *target});
  }

  void merge_operators() {
    std::map<std::string, std::string> redirect;
    std::map<std::string, std::size_t> merged;
    std::vector<RawTransition> sorted = raw_transitions_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const RawTransition& a, const RawTransition& b) { return a.t.id < b.t.id; });
    std::set<std::string> operator_groups;
    for (const auto& r : sorted) {
      if (!r.operator_id) continue;
      auto count = std::count_if(sorted.begin(), sorted.end(),
                                 [&](const RawTransition& o) { return o.operator_id == r.operator_id; });
      if (count > 1) operator_groups.insert(*r.operator_id);
    }

    for (const auto& raw : raw_transitions_) {
      if (!raw.operator_id || operator_groups.count(*raw.operator_id) == 0) {
        out_.net.transitions.push_back(raw.t);
        continue;
      }
      redirect[raw.t.id] = *raw.operator_id;
      auto [it, inserted] = merged.try_emplace(*raw.operator_id, out_.net.transitions.size());
      if (inserted) {
        Transition t = raw.t;
        t.id = *raw.operator_id;
        for (const auto& r : sorted) {
          if (r.operator_id != raw.operator_id) continue;
          if (t.label.empty()) t.label = r.t.label;
          if (!t.resource) t.resource = r.t.resource;
        }
        out_.net.transitions.push_back(std::move(t));
      }
    }
    if (redirect.empty()) return;

    for (auto& a : out_.net.arcs) {
      if (auto it = redirect.find(a.source); it != redirect.end()) a.source = it->second;
      if (auto it = redirect.find(a.target); it != redirect.end()) a.target = it->second;
    }
    // Places that only link parts of the same operator are internal to it.
    std::set<std::string> internal;
    for (const auto& p : out_.net.places) {
      std::set<std::string> touching;
      bool in = false;
      bool out = false;
      for (const auto& a : out_.net.arcs) {
        if (a.target == p.id) {
          touching.insert(a.source);
          in = true;
        }
        if (a.source == p.id) {
          touching.insert(a.target);
          out = true;
        }
      }
      if (in && out && touching.size() == 1 && merged.count(*touching.begin()) != 0) internal.insert(p.id);
    }
    std::erase_if(out_.net.places, [&](const Place& p) { return internal.count(p.id) != 0; });
    std::erase_if(out_.net.arcs, [&](const Arc& a) { return internal.count(a.source) != 0 || internal.count(a.target) != 0; });
    for (const auto& id : internal) out_.net.initial_marking.erase(id);

    std::set<std::pair<std::string, std::string>> seen;
    std::erase_if(out_.net.arcs, [&](const Arc& a) { return !seen.insert({a.source, a.target}).second; });
  }

  ParsedNet out_;
  std::vector<RawTransition> raw_transitions_;
};

}  // namespace

ParsedNet parse_pnml(std::string_view document) { return PnmlReader().read(document); }

ParsedNet load_pnml_file(const std::string& path) { return parse_pnml(read_file(path)); }

}  // namespace dmnprompt::pnml
