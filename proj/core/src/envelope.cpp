#include <map>

#include "dmnprompt/pipeline.hpp"

namespace dmnprompt::pipeline {

std::string_view to_string(ParseStatus status) noexcept {
  switch (status) {
    case ParseStatus::ok: return "ok";
    case ParseStatus::missing: return "missing";
    case ParseStatus::malformed: return "malformed";
  }
  return "?";
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

struct Block {
  std::string name;
  std::string message;
  bool terminated = false;
};

std::vector<Block> scan_blocks(std::string_view raw) {
  std::vector<Block> blocks;
  std::size_t pos = raw.find(kRuleOpen);
  while (pos != std::string_view::npos) {
    std::size_t name_start = pos + kRuleOpen.size();
    std::size_t next_open = raw.find(kRuleOpen, name_start);
    std::size_t name_end = raw.find(kRuleClose, name_start);
    if (name_end == std::string_view::npos || (next_open != std::string_view::npos && name_end > next_open)) {
      pos = next_open;
      continue;
    }
    Block b;
    b.name = std::string(raw.substr(name_start, name_end - name_start));
    std::size_t body_start = name_end + kRuleClose.size();
    std::size_t end = raw.find(kEnd, body_start);
    next_open = raw.find(kRuleOpen, body_start);
    if (end != std::string_view::npos && (next_open == std::string_view::npos || end < next_open)) {
      b.message = std::string(trim_view(raw.substr(body_start, end - body_start)));
      b.terminated = true;
      pos = raw.find(kRuleOpen, end + kEnd.size());
    } else {
      std::size_t stop = next_open == std::string_view::npos ? raw.size() : next_open;
      b.message = std::string(trim_view(raw.substr(body_start, stop - body_start)));
      pos = next_open;
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

}  // namespace

std::string normalize_rule_name(std::string_view name) {
  std::string out;
  bool pending_space = false;
  for (char c : trim_view(name)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return out;
}

std::vector<OutcomeEntry> parse_llm_output(std::string_view raw, const std::vector<std::string>& rule_names) {
  std::vector<OutcomeEntry> out;
  out.reserve(rule_names.size());
  for (const auto& n : rule_names) out.push_back({n, "", ParseStatus::missing});
  if (trim_view(raw).empty()) return out;

  std::vector<Block> blocks = scan_blocks(raw);
  if (blocks.empty()) {
    for (auto& e : out) e.parse_status = ParseStatus::malformed;
    return out;
  }

  std::map<std::string, std::vector<std::size_t>> slots;
  for (std::size_t i = 0; i < rule_names.size(); ++i) slots[normalize_rule_name(rule_names[i])].push_back(i);
  std::map<std::string, std::size_t> seen;

  for (const auto& b : blocks) {
    auto it = slots.find(normalize_rule_name(b.name));
    if (it == slots.end()) continue;
    std::size_t& k = seen[it->first];
    if (k < it->second.size()) {
      auto& e = out[it->second[k]];
      e.message = b.message;
      e.parse_status = b.terminated ? ParseStatus::ok : ParseStatus::malformed;
    } else {
      out[it->second.back()].parse_status = ParseStatus::malformed;
    }
    ++k;
  }
  return out;
}

std::vector<OutcomeEntry> parse_llm_output(std::string_view raw, const std::vector<dmn::Triple>& triples) {
  std::vector<std::string> names;
  names.reserve(triples.size());
  for (const auto& t : triples) names.push_back(t.rule_name);
  return parse_llm_output(raw, names);
}

std::string format_envelope(const std::vector<std::pair<std::string, std::string>>& messages) {
  std::string out;
  for (const auto& [name, message] : messages) {
    out.append(kRuleOpen).append(" ").append(name).append(kRuleClose).append(" ");
    out.append(message).append(" ").append(kEnd).append("\n");
  }
  return out;
}

}  // namespace dmnprompt::pipeline
