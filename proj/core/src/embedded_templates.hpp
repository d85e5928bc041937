#pragma once

#include <string_view>

namespace dmnprompt::prompt::detail {

struct EmbeddedTemplates {
  std::string_view version;
  std::string_view part_a_preamble;
  std::string_view part_b;
  std::string_view part_c;
  std::string_view part_d;
  std::string_view cot;
};

const EmbeddedTemplates& embedded_templates();

}  // namespace dmnprompt::prompt::detail
