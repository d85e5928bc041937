#include <algorithm>
#include <atomic>
#include <ctime>
#include <set>
#include <sstream>
#include <thread>

#include "dmnprompt/log.hpp"
#include "dmnprompt/pipeline.hpp"
#include "json.hpp"

namespace dmnprompt::pipeline {

using json = nlohmann::ordered_json;

namespace {

std::string now_rfc3339() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<bool> compare_with_oracle(const std::vector<OutcomeEntry>& llm, const std::vector<feel::RuleOutcome>& oracle) {
  std::vector<bool> agree;
  agree.reserve(llm.size());
  for (std::size_t i = 0; i < llm.size(); ++i) {
    bool same = i < oracle.size() && oracle[i].ok() && llm[i].parse_status == ParseStatus::ok &&
                oracle[i].message && *oracle[i].message == llm[i].message;
    agree.push_back(same);
  }
  return agree;
}

CaseError describe(const std::exception& e) {
  if (const auto* l = dynamic_cast<const llm::LlmError*>(&e)) return {std::string(llm::to_string(l->kind())), e.what()};
  if (const auto* d = dynamic_cast<const dmn::DmnError*>(&e)) return {std::string(dmn::to_string(d->kind())), e.what()};
  if (const auto* f = dynamic_cast<const feel::FeelError*>(&e)) return {std::string(feel::to_string(f->kind())), e.what()};
  if (dynamic_cast<const IoError*>(&e) != nullptr) return {"IoError", e.what()};
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) return {"InvalidInput", e.what()};
  return {"Error", e.what()};
}

}  // namespace

std::vector<std::string> prompts_for_case(const dmn::DecisionModel& model, const CaseInput& input,
                                          const RunOptions& options, const prompt::PromptBuilder& builder) {
  std::vector<std::string> prompts;
  if (!options.per_rule_calls) {
    prompts.push_back(builder.build(options.variant, model, input.input_text, options.prompt_options).assembled);
    return prompts;
  }
  for (const auto& t : dmn::extract_triples(model)) {
    auto sub = dmn::submodel_for(model, t);
    prompts.push_back(builder.build(options.variant, sub, input.input_text, options.prompt_options).assembled);
  }
  return prompts;
}

CaseResult run_case(const dmn::DecisionModel& model, const CaseInput& input, const RunOptions& options,
                    llm::Gateway& gateway, const prompt::PromptBuilder& builder) {
  const auto triples = dmn::extract_triples(model);
  CaseResult result;
  result.case_id = input.case_id;
  result.variant = options.variant;

  const auto prompts = prompts_for_case(model, input, options, builder);
  if (!options.per_rule_calls) {
    result.raw_response = gateway.complete(prompts.front());
    result.outcomes = parse_llm_output(result.raw_response, triples);
  } else {
    for (std::size_t i = 0; i < triples.size(); ++i) {
      std::string reply = gateway.complete(prompts[i]);
      if (i > 0) result.raw_response += "\n";
      result.raw_response += reply;
      result.outcomes.push_back(parse_llm_output(reply, std::vector<std::string>{triples[i].rule_name}).front());
    }
  }

  if (input.structured_ctx) {
    result.oracle_outcomes = feel::evaluate_triples(triples, *input.structured_ctx);
    result.agreement = compare_with_oracle(result.outcomes, *result.oracle_outcomes);
  }
  return result;
}

BatchResult run_batch(const dmn::DecisionModel& model, const std::vector<CaseInput>& cases, const RunOptions& options,
                      llm::Gateway& gateway, const prompt::PromptBuilder& builder) {
  std::set<std::string> ids;
  for (const auto& c : cases) {
    if (!ids.insert(c.case_id).second) throw std::invalid_argument("duplicate case_id '" + c.case_id + "'");
  }

  BatchResult batch;
  batch.manifest.started_at = now_rfc3339();
  batch.manifest.template_version = builder.templates().version;
  batch.manifest.options = options;
  batch.manifest.backend = gateway.config();
  batch.manifest.model_name = model.name;
  batch.manifest.model_hash = llm::sha256_hex(dmn::render_canonical(model, dmn::RenderStyle::raw_xml));
  batch.manifest.case_count = cases.size();

  std::vector<std::string> rule_names;
  try {
    for (const auto& t : dmn::extract_triples(model)) rule_names.push_back(t.rule_name);
  } catch (const dmn::DmnError&) {
    // every case reports the extraction error itself
  }

  batch.results.resize(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cases.size(); i = next.fetch_add(1)) {
      try {
        batch.results[i] = run_case(model, cases[i], options, gateway, builder);
      } catch (const std::exception& e) {
        CaseResult failed;
        failed.case_id = cases[i].case_id;
        failed.variant = options.variant;
        for (const auto& n : rule_names) failed.outcomes.push_back({n, "", ParseStatus::missing});
        failed.error = describe(e);
        log::warning("case '" + cases[i].case_id + "': " + e.what());
        batch.results[i] = std::move(failed);
      }
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, options.parallelism)), cases.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  if (n_threads > 0) worker();
  for (auto& t : threads) t.join();

  batch.manifest.error_count = static_cast<std::size_t>(
      std::count_if(batch.results.begin(), batch.results.end(), [](const CaseResult& r) { return r.error.has_value(); }));
  batch.manifest.finished_at = now_rfc3339();
  return batch;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json value_to_json(const Value& v) {
  if (v.is_text()) return v.as_text();
  if (v.is_boolean()) return v.as_boolean();
  const Decimal& d = v.as_number();
  if (d.is_integer() && d > Decimal(INT64_MIN) && d < Decimal(INT64_MAX)) {
    return static_cast<std::int64_t>(d.units() / static_cast<int128_t>(1'000'000'000'000'000'000LL));
  }
  return d.to_double();
}

Value value_from_json(const json& j, const std::string& name) {
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) {
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      return Value(Decimal::parse(std::to_string(j.get<std::uint64_t>())));
    }
    return Value(Decimal(j.get<std::int64_t>()));
  }
  if (j.is_number_float()) return Value(Decimal::from_double(j.get<double>()));
  throw std::invalid_argument("value of '" + name + "' must be a number, string or boolean");
}

EvaluationContext context_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("context must be a JSON object");
  EvaluationContext ctx;
  for (const auto& [k, v] : j.items()) {
    try {
      ctx.bind(k, value_from_json(v, k));
    } catch (const std::out_of_range& e) {
      throw std::invalid_argument("value of '" + k + "' is out of range");
    }
  }
  return ctx;
}

std::string get_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw std::invalid_argument(std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

template <typename Fn>
auto parse_jsonl(std::string_view text, const std::string& source, Fn&& per_line) {
  std::vector<decltype(per_line(json()))> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      out.push_back(per_line(json::parse(line)));
    } catch (const json::exception& e) {
      throw FormatError(source, line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw FormatError(source, line_no, e.what());
    }
  }
  return out;
}

json outcome_to_json(const feel::RuleOutcome& o) {
  json j;
  j["rule_name"] = o.rule_name;
  j["matched_rule_index"] = o.matched_rule_index ? json(*o.matched_rule_index) : json(nullptr);
  j["table_output"] = o.table_output ? value_to_json(*o.table_output) : json(nullptr);
  j["message"] = o.message ? json(*o.message) : json(nullptr);
  j["error"] = o.error ? json{{"kind", feel::to_string(o.error->kind)}, {"detail", o.error->detail}} : json(nullptr);
  return j;
}

feel::RuleOutcome outcome_from_json(const json& j) {
  feel::RuleOutcome o;
  o.rule_name = get_string(j, "rule_name");
  if (j.contains("matched_rule_index") && !j["matched_rule_index"].is_null()) {
    o.matched_rule_index = j["matched_rule_index"].get<std::size_t>();
  }
  if (j.contains("table_output") && !j["table_output"].is_null()) {
    o.table_output = value_from_json(j["table_output"], "table_output");
  }
  if (j.contains("message") && !j["message"].is_null()) o.message = j["message"].get<std::string>();
  if (j.contains("error") && !j["error"].is_null()) {
    std::string kind = get_string(j["error"], "kind");
    feel::ErrorKind parsed = feel::ErrorKind::syntax_error;
    for (auto k : {feel::ErrorKind::syntax_error, feel::ErrorKind::type_mismatch, feel::ErrorKind::unsupported_construct,
                   feel::ErrorKind::no_match, feel::ErrorKind::uniqueness_violation,
                   feel::ErrorKind::unbound_variable}) {
      if (feel::to_string(k) == kind) parsed = k;
    }
    o.error = feel::EvalFailure{parsed, get_string(j["error"], "detail")};
  }
  return o;
}

}  // namespace

EvaluationContext parse_context_json(std::string_view json_text) {
  try {
    return context_from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed context JSON: ") + e.what());
  }
}

std::vector<CaseInput> parse_cases_jsonl(std::string_view text, const std::string& source) {
  std::set<std::string> ids;
  auto cases = parse_jsonl(text, source, [&](const json& j) {
    if (!j.is_object()) throw std::invalid_argument("case is not a JSON object");
    CaseInput c;
    c.case_id = get_string(j, "case_id");
    c.input_text = get_string(j, "input_text");
    if (j.contains("ctx") && !j["ctx"].is_null()) c.structured_ctx = context_from_json(j["ctx"]);
    if (!ids.insert(c.case_id).second) throw std::invalid_argument("duplicate case_id '" + c.case_id + "'");
    return c;
  });
  return cases;
}

std::vector<CaseInput> load_cases(const std::string& path) { return parse_cases_jsonl(read_file(path), path); }

std::string to_jsonl_line(const CaseResult& r) {
  json j;
  j["case_id"] = r.case_id;
  j["variant"] = prompt::to_string(r.variant);
  j["raw_response"] = r.raw_response;
  j["outcomes"] = json::array();
  for (const auto& o : r.outcomes) {
    j["outcomes"].push_back({{"rule_name", o.rule_name}, {"message", o.message}, {"parse_status", to_string(o.parse_status)}});
  }
  if (r.oracle_outcomes) {
    j["oracle_outcomes"] = json::array();
    for (const auto& o : *r.oracle_outcomes) j["oracle_outcomes"].push_back(outcome_to_json(o));
  } else {
    j["oracle_outcomes"] = nullptr;
  }
  j["agreement"] = r.agreement ? json(*r.agreement) : json(nullptr);
  j["error"] = r.error ? json{{"kind", r.error->kind}, {"message", r.error->message}} : json(nullptr);
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::vector<CaseResult> parse_results_jsonl(std::string_view text, const std::string& source) {
  return parse_jsonl(text, source, [](const json& j) {
    if (!j.is_object()) throw std::invalid_argument("result is not a JSON object");
    CaseResult r;
    r.case_id = get_string(j, "case_id");
    auto variant = prompt::variant_from_string(get_string(j, "variant"));
    if (!variant) throw std::invalid_argument("unknown variant");
    r.variant = *variant;
    r.raw_response = get_string(j, "raw_response");
    if (!j.contains("outcomes") || !j["outcomes"].is_array()) throw std::invalid_argument("'outcomes' must be an array");
    for (const auto& o : j["outcomes"]) {
      OutcomeEntry e;
      e.rule_name = get_string(o, "rule_name");
      e.message = get_string(o, "message");
      std::string status = get_string(o, "parse_status");
      if (status == "ok") {
        e.parse_status = ParseStatus::ok;
      } else if (status == "missing") {
        e.parse_status = ParseStatus::missing;
      } else if (status == "malformed") {
        e.parse_status = ParseStatus::malformed;
      } else {
        throw std::invalid_argument("unknown parse_status '" + status + "'");
      }
      r.outcomes.push_back(std::move(e));
    }
    if (j.contains("oracle_outcomes") && j["oracle_outcomes"].is_array()) {
      r.oracle_outcomes.emplace();
      for (const auto& o : j["oracle_outcomes"]) r.oracle_outcomes->push_back(outcome_from_json(o));
    }
    if (j.contains("agreement") && j["agreement"].is_array()) r.agreement = j["agreement"].get<std::vector<bool>>();
    if (j.contains("error") && j["error"].is_object()) {
      r.error = CaseError{get_string(j["error"], "kind"), get_string(j["error"], "message")};
    }
    return r;
  });
}

std::vector<CaseResult> load_results(const std::string& path) { return parse_results_jsonl(read_file(path), path); }

std::string manifest_to_json(const RunManifest& m) {
  const auto& b = m.backend;
  json backend = {{"kind", llm::to_string(b.kind)},
                  {"endpoint_url", b.kind == llm::BackendKind::replay ? "" : b.effective_endpoint()},
                  {"model_name", b.model_name},
                  {"api_key_env_var", b.effective_key_env_var()},
                  {"api_key", "<redacted>"},
                  {"temperature", b.temperature.to_string()},
                  {"max_output_tokens", b.max_output_tokens},
                  {"timeout_seconds", b.timeout_seconds},
                  {"max_retries", b.max_retries},
                  {"max_in_flight", b.max_in_flight},
                  {"transcript_path", b.transcript_path},
                  {"record", b.record}};
  json j = {{"template_version", m.template_version},
            {"variant", prompt::to_string(m.options.variant)},
            {"render_style", dmn::to_string(m.options.prompt_options.render_style)},
            {"include_few_shot", m.options.prompt_options.include_few_shot},
            {"custom_preamble", m.options.prompt_options.custom_preamble.has_value()},
            {"per_rule_calls", m.options.per_rule_calls},
            {"parallelism", m.options.parallelism},
            {"backend", backend},
            {"model_name", m.model_name},
            {"model_hash", m.model_hash},
            {"case_count", m.case_count},
            {"error_count", m.error_count},
            {"started_at", m.started_at},
            {"finished_at", m.finished_at}};
  return j.dump(2) + "\n";
}

}  // namespace dmnprompt::pipeline
