#include <filesystem>
#include <stdexcept>

#include "dmnprompt/io.hpp"
#include "dmnprompt/prompt.hpp"
#include "dmnprompt/xml.hpp"
#include "embedded_templates.hpp"

namespace dmnprompt::prompt {

namespace {

std::string strip_trailing_newlines(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

void reject_headers(const std::string& file, const std::string& text) {
  for (auto header : kPartHeaders) {
    if (text.find(header) != std::string::npos) {
      throw std::invalid_argument("template " + file + " must not contain the part header '" + std::string(header) +
                                  "'");
    }
  }
}

}  // namespace

const TemplateSet& TemplateSet::builtin() {
  static const TemplateSet set = [] {
    const auto& e = detail::embedded_templates();
    return TemplateSet{xml::trim(e.version),
                       strip_trailing_newlines(e.part_a_preamble),
                       strip_trailing_newlines(e.part_b),
                       strip_trailing_newlines(e.part_c),
                       strip_trailing_newlines(e.part_d),
                       strip_trailing_newlines(e.cot)};
  }();
  return set;
}

TemplateSet TemplateSet::load_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("template directory '" + dir + "' does not exist");

  TemplateSet set = builtin();
  bool any = false;
  auto load = [&](const char* file, std::string& slot) {
    fs::path p = fs::path(dir) / file;
    if (!fs::exists(p)) return;
    slot = strip_trailing_newlines(read_file(p.string()));
    reject_headers(file, slot);
    any = true;
  };
  load("part_a_preamble.txt", set.part_a_preamble);
  load("part_b.txt", set.part_b);
  load("part_c.txt", set.part_c);
  load("part_d.txt", set.part_d);
  load("cot.txt", set.cot);

  fs::path version = fs::path(dir) / "VERSION";
  if (fs::exists(version)) {
    set.version = xml::trim(read_file(version.string()));
  } else if (any) {
    set.version = builtin().version + "+custom";
  }
  return set;
}

}  // namespace dmnprompt::prompt
