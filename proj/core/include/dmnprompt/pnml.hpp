#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Petri nets in PNML (WoPeD dialect) and their narration as plain English.
namespace dmnprompt::pnml {

enum class TransitionKind { task, xor_split, xor_join, and_split, and_join, plain };

std::string_view to_string(TransitionKind kind) noexcept;

/// WoPeD operator type code to kind; combined split/join codes map to their
/// split side. Unknown codes yield nullopt.
std::optional<TransitionKind> kind_from_woped_operator(int type) noexcept;

struct Place {
  std::string id;
  std::string name;
  friend bool operator==(const Place&, const Place&) = default;
};

struct Transition {
  std::string id;
  std::string label;
  TransitionKind kind = TransitionKind::task;
  std::optional<std::string> resource;
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Arc {
  std::string source;
  std::string target;
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct PetriNet {
  std::vector<Place> places;
  std::vector<Transition> transitions;
  std::vector<Arc> arcs;
  std::map<std::string, int> initial_marking;  // place id -> tokens

  [[nodiscard]] const Place* find_place(std::string_view id) const;
  [[nodiscard]] const Transition* find_transition(std::string_view id) const;
};

enum class PnmlErrorKind { malformed_xml, non_bipartite_arc, dangling_arc, duplicate_id };

std::string_view to_string(PnmlErrorKind kind) noexcept;

class PnmlError : public std::runtime_error {
 public:
  PnmlError(PnmlErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] PnmlErrorKind kind() const noexcept { return kind_; }

 private:
  PnmlErrorKind kind_;
};

struct ParsedNet {
  PetriNet net;
  std::vector<std::string> warnings;
};

/// Reads places, transitions, arcs and initial marking. WoPeD operators
/// exported as several transitions sharing one operator id are merged back
/// into a single transition. Throws PnmlError.
ParsedNet parse_pnml(std::string_view document);
ParsedNet load_pnml_file(const std::string& path);

/// Checks bipartiteness, unique ids and arc endpoints. Throws PnmlError.
void check_net(const PetriNet& net);

struct Section {
  std::string heading;
  std::vector<std::string> sentences;
  friend bool operator==(const Section&, const Section&) = default;
};

struct NetNarrative {
  std::vector<Section> sections;
  std::vector<std::string> warnings;

  /// Headings followed by "- sentence" lines, sections separated by a blank line.
  [[nodiscard]] std::string to_text() const;
};

/// Sections: "Tasks", "Control flow" (one per connected component when the
/// net is disconnected) and "Resources". Throws PnmlError on an invalid net.
NetNarrative net_to_text(const PetriNet& net);

}  // namespace dmnprompt::pnml
