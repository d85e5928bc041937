// Writes a replay transcript whose responses are the rules engine's own
// answers, so replayed runs can be checked for oracle agreement.
//
// Case lines may carry two extra fields:
//   "fixture_response": text used verbatim instead of the engine's answer
//   "fixture_skip": true leaves the case out of the transcript
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dmnprompt/dmn.hpp"
#include "dmnprompt/engine.hpp"
#include "dmnprompt/io.hpp"
#include "dmnprompt/llm.hpp"
#include "dmnprompt/pipeline.hpp"
#include "json.hpp"

using namespace dmnprompt;

int main(int argc, char** argv) {
  CLI::App app{"Generate a replay transcript from the rules engine"};
  std::string dmn_path, cases_path, out_path, model = "fixture-model", variant = "dmn", created_at = "2025-01-01T00:00:00Z";
  std::string temperature = "0";
  bool per_rule = false;
  app.add_option("dmn", dmn_path)->required();
  app.add_option("cases", cases_path)->required();
  app.add_option("--out", out_path)->required();
  app.add_option("--model", model)->capture_default_str();
  app.add_option("--variant", variant)->capture_default_str();
  app.add_option("--temperature", temperature)->capture_default_str();
  app.add_option("--created-at", created_at)->capture_default_str();
  app.add_flag("--per-rule-calls", per_rule);
  CLI11_PARSE(app, argc, argv);

  try {
    auto model_doc = dmn::load_dmn_file(dmn_path).model;
    auto triples = dmn::extract_triples(model_doc);
    auto cases = pipeline::load_cases(cases_path);
    std::vector<nlohmann::json> raw;
    {
      std::istringstream lines(read_file(cases_path));
      std::string line;
      while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) raw.push_back(nlohmann::json::parse(line));
      }
    }
    pipeline::RunOptions options;
    options.variant = *prompt::variant_from_string(variant);
    options.per_rule_calls = per_rule;
    const Decimal temp = Decimal::parse(temperature);

    std::string out;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      if (raw[i].value("fixture_skip", false)) continue;
      auto prompts = pipeline::prompts_for_case(model_doc, cases[i], options);
      std::vector<std::string> responses;
      if (raw[i].contains("fixture_response")) {
        responses.assign(prompts.size(), raw[i]["fixture_response"].get<std::string>());
      } else {
        if (!cases[i].structured_ctx) throw std::invalid_argument("case " + cases[i].case_id + " has no ctx");
        auto outcomes = feel::evaluate_triples(triples, *cases[i].structured_ctx);
        std::vector<std::pair<std::string, std::string>> messages;
        for (const auto& o : outcomes) messages.emplace_back(o.rule_name, o.message.value_or(""));
        if (per_rule) {
          for (const auto& m : messages) responses.push_back(pipeline::format_envelope({m}));
        } else {
          responses.push_back(pipeline::format_envelope(messages));
        }
      }
      for (std::size_t k = 0; k < prompts.size(); ++k) {
        llm::TranscriptRecord rec;
        rec.fingerprint = llm::fingerprint(prompts[k], model, temp);
        rec.backend = llm::BackendKind::replay;
        rec.model = model;
        rec.prompt = prompts[k];
        rec.response = responses[k];
        rec.created_at = created_at;
        out += llm::to_jsonl_line(rec) + "\n";
      }
    }
    write_file_atomic(out_path, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
