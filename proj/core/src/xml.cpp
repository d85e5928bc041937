#include "dmnprompt/xml.hpp"

#include <expat.h>

#include <memory>

namespace dmnprompt::xml {

namespace {

constexpr char kNsSeparator = '\x1f';

void split_name(const XML_Char* raw, std::string& ns, std::string& local) {
  std::string_view full(raw);
  auto pos = full.find(kNsSeparator);
  if (pos == std::string_view::npos) {
    ns.clear();
    local.assign(full);
  } else {
    ns.assign(full.substr(0, pos));
    local.assign(full.substr(pos + 1));
  }
}

struct BuildState {
  XML_Parser parser = nullptr;
  std::vector<Element*> stack;
  Element root;
  bool have_root = false;
};

void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto* st = static_cast<BuildState*>(user);
  Element* target = nullptr;
  if (st->stack.empty()) {
    st->have_root = true;
    target = &st->root;
  } else {
    st->stack.back()->children.emplace_back();
    target = &st->stack.back()->children.back();
  }
  split_name(name, target->ns, target->name);
  target->line = static_cast<long>(XML_GetCurrentLineNumber(st->parser));
  for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
    Attribute a;
    split_name(attrs[i], a.ns, a.name);
    a.value = attrs[i + 1];
    target->attributes.push_back(std::move(a));
  }
  st->stack.push_back(target);
}

void on_end(void* user, const XML_Char* /*name*/) {
  auto* st = static_cast<BuildState*>(user);
  st->stack.pop_back();
}

void on_text(void* user, const XML_Char* s, int len) {
  auto* st = static_cast<BuildState*>(user);
  if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

}  // namespace

std::optional<std::string> Element::attr(std::string_view local) const {
  for (const auto& a : attributes) {
    if (a.ns.empty() && a.name == local) return a.value;
  }
  return std::nullopt;
}

const Element* Element::child(std::string_view local) const {
  for (const auto& c : children) {
    if (c.name == local) return &c;
  }
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view local) const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c.name == local) out.push_back(&c);
  }
  return out;
}

std::optional<std::string> Element::child_text(std::string_view local) const {
  const Element* c = child(local);
  if (c == nullptr) return std::nullopt;
  return trim(c->text);
}

Element parse(std::string_view document) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreateNS("UTF-8", kNsSeparator));
  if (!parser) throw XmlError("cannot allocate XML parser", 0);

  BuildState st;
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);

  if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) == XML_STATUS_ERROR) {
    long line = static_cast<long>(XML_GetCurrentLineNumber(parser.get()));
    throw XmlError("line " + std::to_string(line) + ": " + XML_ErrorString(XML_GetErrorCode(parser.get())), line);
  }
  if (!st.have_root) throw XmlError("document has no root element", 0);
  return std::move(st.root);
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '\r':
        out += "&#13;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string escape_attribute(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\n':
        out += "&#10;";
        break;
      case '\t':
        out += "&#9;";
        break;
      case '\r':
        out += "&#13;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string trim(std::string_view text) {
  const char* ws = " \t\r\n";
  auto b = text.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = text.find_last_not_of(ws);
  return std::string(text.substr(b, e - b + 1));
}

}  // namespace dmnprompt::xml
