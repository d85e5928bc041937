#include <sstream>
#include <stdexcept>

#include "dmnprompt/prompt.hpp"

namespace dmnprompt::prompt {

std::string_view to_string(PromptVariant variant) noexcept {
  return variant == PromptVariant::cot_baseline ? "cot_baseline" : "dmn_guided";
}

std::optional<PromptVariant> variant_from_string(std::string_view text) noexcept {
  if (text == "dmn" || text == "dmn_guided") return PromptVariant::dmn_guided;
  if (text == "cot" || text == "cot_baseline") return PromptVariant::cot_baseline;
  return std::nullopt;
}

namespace {

void ensure_newline(std::string& s) {
  if (s.empty() || s.back() != '\n') s += '\n';
}

std::string indent(std::string_view text, std::string_view prefix) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty()) out.append(prefix).append(line);
    out += '\n';
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::string render_examples(const std::vector<FewShotExample>& examples) {
  std::ostringstream os;
  os << "Worked examples for C2. They show how interval bounds and exact text matching are evaluated:\n";
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& e = examples[i];
    os << '\n' << "Example " << (i + 1) << " (" << e.title << "):\n";
    os << indent(dmn::render_table_block(e.table), "  ");
    os << "  Input: " << e.input_description << '\n';
    os << "  Reasoning: " << e.expected_reasoning << '\n';
    os << "  Answer: row " << e.expected_row << " matches, output \"" << e.expected_answer << "\"\n";
  }
  return os.str();
}

}  // namespace

PromptBuilder::PromptBuilder(TemplateSet templates, std::vector<FewShotExample> examples)
    : templates_(std::move(templates)), examples_(std::move(examples)) {}

std::string PromptBuilder::build_part_a(const dmn::DecisionModel& model, std::string_view input_text,
                                        const PromptOptions& options) const {
  if (input_text.empty()) throw std::invalid_argument("input text is empty");

  const std::string& preamble = options.custom_preamble && !options.custom_preamble->empty()
                                    ? *options.custom_preamble
                                    : templates_.part_a_preamble;
  std::string rendering = dmn::render_canonical(model, options.render_style);
  ensure_newline(rendering);
  std::string text(input_text);
  ensure_newline(text);

  std::string out;
  out += "Template version: " + templates_.version + "\n";
  out += preamble;
  out += "\n\n--- BEGIN DMN MODEL (" + std::string(dmn::to_string(options.render_style)) + ") ---\n";
  out += rendering;
  out += "--- END DMN MODEL ---\n\n--- BEGIN INPUT TEXT ---\n";
  out += text;
  out += "--- END INPUT TEXT ---";
  return out;
}

std::string PromptBuilder::build_part_b() const { return templates_.part_b; }

std::string PromptBuilder::build_part_c(const PromptOptions& options) const {
  const std::string& tmpl = templates_.part_c;
  std::size_t at = tmpl.find(kFewShotMarker);
  if (at == std::string::npos) return tmpl;

  std::size_t line_start = tmpl.rfind('\n', at);
  line_start = line_start == std::string::npos ? 0 : line_start + 1;
  std::size_t line_end = tmpl.find('\n', at);
  line_end = line_end == std::string::npos ? tmpl.size() : line_end + 1;

  std::string replacement;
  if (options.include_few_shot && !examples_.empty()) replacement = render_examples(examples_) + "\n";
  return tmpl.substr(0, line_start) + replacement + tmpl.substr(line_end);
}

std::string PromptBuilder::build_part_d() const { return templates_.part_d; }

PromptBundle PromptBuilder::build_dmn_guided(const dmn::DecisionModel& model, std::string_view input_text,
                                             const PromptOptions& options) const {
  PromptBundle b;
  b.variant = PromptVariant::dmn_guided;
  b.template_version = templates_.version;
  b.part_a = build_part_a(model, input_text, options);
  b.part_b = build_part_b();
  b.part_c = build_part_c(options);
  b.part_d = build_part_d();
  if (options.include_few_shot) {
    for (const auto& e : examples_) b.few_shot_examples.push_back(e.summary());
  }
  const std::string* parts[] = {&b.part_a, &b.part_b, &b.part_c, &b.part_d};
  for (std::size_t i = 0; i < 4; ++i) {
    if (i > 0) b.assembled += "\n\n";
    b.assembled.append(kPartHeaders[i]).append("\n").append(*parts[i]);
  }
  b.assembled += '\n';
  return b;
}

PromptBundle PromptBuilder::build_cot_baseline(const dmn::DecisionModel& model, std::string_view input_text,
                                               const PromptOptions& options) const {
  PromptBundle b;
  b.variant = PromptVariant::cot_baseline;
  b.template_version = templates_.version;
  b.part_a = build_part_a(model, input_text, options);
  b.part_c = templates_.cot;
  b.part_d = build_part_d();
  b.assembled = b.part_a + "\n\n" + b.part_c + "\n\n" + b.part_d + "\n";
  return b;
}

PromptBundle PromptBuilder::build(PromptVariant variant, const dmn::DecisionModel& model, std::string_view input_text,
                                  const PromptOptions& options) const {
  return variant == PromptVariant::cot_baseline ? build_cot_baseline(model, input_text, options)
                                                : build_dmn_guided(model, input_text, options);
}

std::optional<std::array<std::string, 4>> split_assembled(std::string_view assembled) {
  std::string first = std::string(kPartHeaders[0]) + "\n";
  if (assembled.substr(0, first.size()) != first) return std::nullopt;
  if (assembled.empty() || assembled.back() != '\n') return std::nullopt;
  std::string_view rest = assembled.substr(first.size(), assembled.size() - first.size() - 1);

  std::array<std::string, 4> parts;
  for (std::size_t i = 3; i >= 1; --i) {
    std::string sep = "\n\n" + std::string(kPartHeaders[i]) + "\n";
    std::size_t at = rest.rfind(sep);
    if (at == std::string_view::npos) return std::nullopt;
    parts[i] = std::string(rest.substr(at + sep.size()));
    rest = rest.substr(0, at);
  }
  parts[0] = std::string(rest);
  return parts;
}

}  // namespace dmnprompt::prompt
