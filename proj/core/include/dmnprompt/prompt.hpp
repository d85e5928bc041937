#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmnprompt/dmn.hpp"
#include "dmnprompt/value.hpp"

namespace dmnprompt::prompt {

enum class PromptVariant { dmn_guided, cot_baseline };

std::string_view to_string(PromptVariant variant) noexcept;
std::optional<PromptVariant> variant_from_string(std::string_view text) noexcept;

/// Separator lines between the four parts of a DMN-guided prompt.
inline constexpr std::array<std::string_view, 4> kPartHeaders = {
    "=== PART A ===", "=== PART B ===", "=== PART C ===", "=== PART D ==="};

/// Marker replaced by the worked examples inside the Part C template.
inline constexpr std::string_view kFewShotMarker = "{{FEW_SHOT_EXAMPLES}}";

/// Wording of every fixed prompt part. The built-in set is compiled from
/// core/templates; a directory with the same file names overrides it.
struct TemplateSet {
  std::string version;
  std::string part_a_preamble;
  std::string part_b;
  std::string part_c;
  std::string part_d;
  std::string cot;

  static const TemplateSet& builtin();

  /// Reads VERSION, part_a_preamble.txt, part_b.txt, part_c.txt, part_d.txt
  /// and cot.txt; missing files fall back to the built-in text. Throws
  /// IoError, or std::invalid_argument when a template contains a part header.
  static TemplateSet load_directory(const std::string& dir);
};

struct FewShotSummary {
  std::string input_description;
  std::string expected_reasoning;
  std::string expected_answer;
  friend bool operator==(const FewShotSummary&, const FewShotSummary&) = default;
};

/// A worked example shown to the model in step C2. The table and context
/// are kept so the stated answer can be checked against the engine.
struct FewShotExample {
  std::string title;
  dmn::DecisionTable table;
  EvaluationContext context;
  std::string input_description;
  std::string expected_reasoning;
  std::string expected_answer;  // output value, display form
  std::size_t expected_row = 0;  // 1-based

  [[nodiscard]] FewShotSummary summary() const { return {input_description, expected_reasoning, expected_answer}; }
};

const std::vector<FewShotExample>& builtin_few_shot_examples();

/// Evaluates every example with the decision engine. Returns one message per
/// example whose stated row or answer disagrees; empty when all agree.
std::vector<std::string> verify_few_shot_examples(const std::vector<FewShotExample>& examples);

struct PromptOptions {
  dmn::RenderStyle render_style = dmn::RenderStyle::compact_text;
  bool include_few_shot = true;
  std::optional<std::string> custom_preamble;
};

struct PromptBundle {
  std::string part_a;
  std::string part_b;
  std::string part_c;
  std::string part_d;
  std::string assembled;
  PromptVariant variant = PromptVariant::dmn_guided;
  std::vector<FewShotSummary> few_shot_examples;
  std::string template_version;
};

class PromptBuilder {
 public:
  PromptBuilder() : PromptBuilder(TemplateSet::builtin()) {}
  explicit PromptBuilder(TemplateSet templates, std::vector<FewShotExample> examples = builtin_few_shot_examples());

  /// Context: template version, preamble, model rendering and the verbatim
  /// input text between labelled delimiters. Throws std::invalid_argument on
  /// empty input text.
  [[nodiscard]] std::string build_part_a(const dmn::DecisionModel& model, std::string_view input_text,
                                         const PromptOptions& options) const;
  [[nodiscard]] std::string build_part_b() const;
  [[nodiscard]] std::string build_part_c(const PromptOptions& options) const;
  [[nodiscard]] std::string build_part_d() const;

  [[nodiscard]] PromptBundle build_dmn_guided(const dmn::DecisionModel& model, std::string_view input_text,
                                              const PromptOptions& options) const;
  [[nodiscard]] PromptBundle build_cot_baseline(const dmn::DecisionModel& model, std::string_view input_text,
                                                const PromptOptions& options) const;
  [[nodiscard]] PromptBundle build(PromptVariant variant, const dmn::DecisionModel& model,
                                   std::string_view input_text, const PromptOptions& options) const;

  [[nodiscard]] const TemplateSet& templates() const noexcept { return templates_; }
  [[nodiscard]] const std::vector<FewShotExample>& examples() const noexcept { return examples_; }

 private:
  TemplateSet templates_;
  std::vector<FewShotExample> examples_;
};

/// Splits a DMN-guided assembled prompt back into its parts A-D.
std::optional<std::array<std::string, 4>> split_assembled(std::string_view assembled);

}  // namespace dmnprompt::prompt
