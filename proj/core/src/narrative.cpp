#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "dmnprompt/pnml.hpp"

namespace dmnprompt::pnml {

std::string NetNarrative::to_text() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i > 0) os << '\n';
    os << sections[i].heading << ":\n";
    for (const auto& s : sections[i].sentences) os << "- " << s << '\n';
  }
  return os.str();
}

namespace {

std::string quoted(const std::string& s) { return "'" + s + "'"; }

std::string join(const std::vector<std::string>& items, std::string_view last_sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? std::string(last_sep) : std::string(", ");
    out += items[i];
  }
  return out;
}

class Narrator {
 public:
  explicit Narrator(const PetriNet& net) : net_(net) {
    for (const auto& t : net.transitions) transitions_[t.id] = &t;
    for (const auto& p : net.places) places_[p.id] = &p;
    for (const auto& a : net.arcs) {
      if (transitions_.count(a.source) != 0) {
        t_out_[a.source].insert(a.target);
        p_in_[a.target].insert(a.source);
      } else {
        p_out_[a.source].insert(a.target);
        t_in_[a.target].insert(a.source);
      }
    }
    for (const auto& [tid, outs] : t_out_) {
      for (const auto& p : outs) {
        for (const auto& u : p_out_[p]) succ_[tid].insert(u);
      }
    }
  }

  NetNarrative narrate() {
    NetNarrative n;
    auto components = find_components();
    if (components.size() > 1) {
      n.warnings.push_back("the net has " + std::to_string(components.size()) +
                           " disconnected parts; each is narrated separately");
    }

    std::vector<std::string> topo;
    std::vector<std::vector<std::string>> component_orders;
    for (const auto& comp : components) {
      component_orders.push_back(order_component(comp));
      topo.insert(topo.end(), component_orders.back().begin(), component_orders.back().end());
    }

    Section tasks{"Tasks", {}};
    for (const auto& id : topo) {
      const Transition& t = *transitions_.at(id);
      if (t.kind == TransitionKind::plain) {
        n.warnings.push_back("transition '" + t.id + "' has no label; narrated by its id");
      }
      std::string s = (t.kind == TransitionKind::plain ? "Unlabeled transition " : "Task ") + quoted(display(id));
      s += t.resource ? " is performed by role " + quoted(*t.resource) + "." : " has no assigned role.";
      tasks.sentences.push_back(std::move(s));
    }
    if (tasks.sentences.empty()) tasks.sentences.push_back("The net contains no tasks.");
    n.sections.push_back(std::move(tasks));

    for (std::size_t c = 0; c < components.size(); ++c) {
      Section flow{components.size() > 1 ? "Control flow (part " + std::to_string(c + 1) + ")" : "Control flow", {}};
      narrate_flow(components[c], component_orders[c], flow.sentences);
      if (flow.sentences.empty()) flow.sentences.push_back("There is no control flow between tasks.");
      n.sections.push_back(std::move(flow));
    }

    n.sections.push_back(resources(topo));
    return n;
  }

 private:
  std::string display(const std::string& tid) const {
    const Transition& t = *transitions_.at(tid);
    return t.label.empty() ? t.id : t.label;
  }

  std::string place_display(const std::string& pid) const {
    const Place& p = *places_.at(pid);
    return p.name.empty() ? p.id : p.name;
  }

  std::vector<std::string> names(const std::vector<std::string>& tids) const {
    std::vector<std::string> out;
    for (const auto& t : tids) out.push_back(quoted(display(t)));
    return out;
  }

  struct Component {
    std::set<std::string> transitions;
    std::set<std::string> places;
  };

  std::vector<Component> find_components() const {
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& a : net_.arcs) {
      adj[a.source].insert(a.target);
      adj[a.target].insert(a.source);
    }
    std::set<std::string> all;
    for (const auto& [id, _] : transitions_) all.insert(id);
    for (const auto& [id, _] : places_) all.insert(id);

    std::set<std::string> seen;
    std::vector<Component> out;
    for (const auto& start : all) {
      if (seen.count(start) != 0) continue;
      Component comp;
      std::vector<std::string> stack{start};
      seen.insert(start);
      while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        (transitions_.count(cur) != 0 ? comp.transitions : comp.places).insert(cur);
        for (const auto& nb : adj[cur]) {
          if (seen.insert(nb).second) stack.push_back(nb);
        }
      }
      if (comp.transitions.empty()) continue;  // isolated places say nothing about the process
      out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end(), [](const Component& a, const Component& b) {
      return *a.transitions.begin() < *b.transitions.begin();
    });
    return out;
  }

  std::vector<std::string> entry_transitions(const Component& comp) const {
    std::set<std::string> out;
    for (const auto& p : comp.places) {
      if (net_.initial_marking.count(p) != 0) {
        for (const auto& t : map_at(p_out_, p)) out.insert(t);
      }
    }
    if (out.empty()) {
      for (const auto& p : comp.places) {
        if (map_at(p_in_, p).empty()) {
          for (const auto& t : map_at(p_out_, p)) out.insert(t);
        }
      }
    }
    return {out.begin(), out.end()};
  }

  static const std::set<std::string>& map_at(const std::map<std::string, std::set<std::string>>& m,
                                             const std::string& key) {
    static const std::set<std::string> empty;
    auto it = m.find(key);
    return it == m.end() ? empty : it->second;
  }

  // DFS from the entry transitions (then any unvisited one) marks back-arcs;
  // Kahn's algorithm over the remaining edges gives the order, ties by id.
  std::vector<std::string> order_component(const Component& comp) {
    std::map<std::string, int> state;
    std::function<void(const std::string&)> dfs = [&](const std::string& t) {
      state[t] = 1;
      for (const auto& u : map_at(succ_, t)) {
        if (state[u] == 1) {
          back_arcs_.insert({t, u});
        } else if (state[u] == 0) {
          dfs(u);
        }
      }
      state[t] = 2;
    };
    for (const auto& t : entry_transitions(comp)) {
      if (state[t] == 0) dfs(t);
    }
    for (const auto& t : comp.transitions) {
      if (state[t] == 0) dfs(t);
    }

    std::map<std::string, int> indegree;
    for (const auto& t : comp.transitions) indegree[t] = 0;
    for (const auto& t : comp.transitions) {
      for (const auto& u : map_at(succ_, t)) {
        if (back_arcs_.count({t, u}) == 0) ++indegree[u];
      }
    }
    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& [t, d] : indegree) {
      if (d == 0) ready.push(t);
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
      std::string t = ready.top();
      ready.pop();
      order.push_back(t);
      for (const auto& u : map_at(succ_, t)) {
        if (back_arcs_.count({t, u}) != 0) continue;
        if (--indegree[u] == 0) ready.push(u);
      }
    }
    return order;
  }

  std::vector<std::string> forward_preds(const std::string& u) const {
    std::vector<std::string> out;
    for (const auto& p : map_at(t_in_, u)) {
      for (const auto& t : map_at(p_in_, p)) {
        if (back_arcs_.count({t, u}) == 0 && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
      }
    }
    sort_by_position(out);
    return out;
  }

  void sort_by_position(std::vector<std::string>& tids) const {
    std::sort(tids.begin(), tids.end(), [&](const std::string& a, const std::string& b) {
      return position_.at(a) < position_.at(b);
    });
  }

  bool is_join(const std::string& u) const {
    const Transition& t = *transitions_.at(u);
    return t.kind == TransitionKind::and_join || t.kind == TransitionKind::xor_join || map_at(t_in_, u).size() > 1;
  }

  void narrate_flow(const Component& comp, const std::vector<std::string>& order, std::vector<std::string>& out) {
    for (std::size_t i = 0; i < order.size(); ++i) position_[order[i]] = i;

    auto entries = entry_transitions(comp);
    sort_by_position(entries);
    if (!entries.empty()) out.push_back("The process starts with " + join(names(entries), " or ") + ".");

    for (const auto& t : order) {
      const Transition& tr = *transitions_.at(t);

      if (is_join(t)) {
        auto preds = forward_preds(t);
        if (preds.size() > 1) {
          bool exclusive = tr.kind == TransitionKind::xor_join ||
                           (tr.kind != TransitionKind::and_join && map_at(t_in_, t).size() == 1);
          out.push_back(quoted(display(t)) +
                        (exclusive ? " follows as soon as one of " + join(names(preds), " or ") + " has completed."
                                   : " starts only after " + join(names(preds), " and ") + " have all completed."));
        } else if (preds.size() == 1) {
          out.push_back(quoted(display(t)) + " follows " + quoted(display(preds.front())) + ".");
        }
      }

      std::vector<std::string> next;
      std::vector<std::string> loops;
      for (const auto& u : map_at(succ_, t)) {
        (back_arcs_.count({t, u}) != 0 ? loops : next).push_back(u);
      }
      sort_by_position(next);
      std::sort(loops.begin(), loops.end());

      const auto& outs = map_at(t_out_, t);
      bool parallel = tr.kind == TransitionKind::and_split ||
                      (tr.kind != TransitionKind::xor_split && outs.size() > 1);
      if (next.size() > 1) {
        out.push_back("After " + quoted(display(t)) + ", " +
                      (parallel ? join(names(next), " and ") + " occur in parallel."
                                : "exactly one of " + join(names(next), " or ") + " is performed."));
      } else if (next.size() == 1 && !is_join(next.front())) {
        out.push_back(quoted(display(next.front())) + " follows " + quoted(display(t)) + ".");
      }
      for (const auto& u : loops) {
        out.push_back("After " + quoted(display(t)) + ", the process may return to " + quoted(display(u)) +
                      ", so the steps from " + quoted(display(u)) + " to " + quoted(display(t)) + " may repeat.");
      }

      std::vector<std::string> ends;
      for (const auto& p : outs) {
        if (map_at(p_out_, p).empty()) ends.push_back(p);
      }
      if (!ends.empty()) {
        std::vector<std::string> place_names;
        for (const auto& p : ends) place_names.push_back(quoted(place_display(p)));
        out.push_back("The process ends after " + quoted(display(t)) + " in " + join(place_names, " and ") + ".");
      }
    }
  }

  Section resources(const std::vector<std::string>& topo) const {
    Section s{"Resources", {}};
    std::map<std::string, std::vector<std::string>> by_role;
    std::vector<std::string> unassigned;
    for (const auto& id : topo) {
      const Transition& t = *transitions_.at(id);
      if (t.resource) {
        by_role[*t.resource].push_back(quoted(display(id)));
      } else if (t.kind == TransitionKind::task || !t.label.empty()) {
        unassigned.push_back(quoted(display(id)));
      }
    }
    for (const auto& [role, tasks] : by_role) {
      s.sentences.push_back("Role " + quoted(role) + " performs " + join(tasks, " and ") + ".");
    }
    if (by_role.empty()) s.sentences.push_back("No roles are assigned.");
    if (!by_role.empty() && !unassigned.empty()) {
      s.sentences.push_back("No role is assigned to " + join(unassigned, " and ") + ".");
    }
    return s;
  }

  const PetriNet& net_;
  std::map<std::string, const Transition*> transitions_;
  std::map<std::string, const Place*> places_;
  std::map<std::string, std::set<std::string>> t_out_;  // transition -> output places
  std::map<std::string, std::set<std::string>> t_in_;   // transition -> input places
  std::map<std::string, std::set<std::string>> p_out_;  // place -> consuming transitions
  std::map<std::string, std::set<std::string>> p_in_;   // place -> producing transitions
  std::map<std::string, std::set<std::string>> succ_;   // transition -> transition
  std::set<std::pair<std::string, std::string>> back_arcs_;
  std::map<std::string, std::size_t> position_;
};

}  // namespace

NetNarrative net_to_text(const PetriNet& net) {
  check_net(net);
  return Narrator(net).narrate();
}

}  // namespace dmnprompt::pnml
