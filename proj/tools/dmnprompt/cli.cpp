#include "cli.hpp"

#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "dmnprompt/dmn.hpp"
#include "dmnprompt/engine.hpp"
#include "dmnprompt/eval.hpp"
#include "dmnprompt/io.hpp"
#include "dmnprompt/llm.hpp"
#include "dmnprompt/log.hpp"
#include "dmnprompt/pipeline.hpp"
#include "dmnprompt/pnml.hpp"
#include "dmnprompt/prompt.hpp"
#include "dmnprompt/xml.hpp"
#include "json.hpp"

namespace dmnprompt::cli {

namespace {

using json = nlohmann::json;

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

class Exit : public std::runtime_error {
 public:
  Exit(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  [[nodiscard]] int code() const noexcept { return code_; }

 private:
  int code_;
};

int exit_code_for(const std::exception& e) {
  if (const auto* x = dynamic_cast<const Exit*>(&e)) return x->code();
  if (dynamic_cast<const llm::LlmError*>(&e) != nullptr) return kBackendFailure;
  if (const auto* d = dynamic_cast<const dmn::DmnError*>(&e)) {
    switch (d->kind()) {
      case dmn::DmnErrorKind::orphan_table:
      case dmn::DmnErrorKind::ambiguous_literal: return kDomainFailure;
      default: return kInputFailure;
    }
  }
  if (dynamic_cast<const feel::FeelError*>(&e) != nullptr) return kDomainFailure;
  if (const auto* v = dynamic_cast<const eval::EvalError*>(&e)) {
    return v->kind() == eval::EvalErrorKind::schema_error ? kInputFailure : kDomainFailure;
  }
  if (dynamic_cast<const pnml::PnmlError*>(&e) != nullptr) return kInputFailure;
  if (dynamic_cast<const IoError*>(&e) != nullptr) return kInputFailure;
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) return kInputFailure;
  return kDomainFailure;
}

std::string error_label(const std::exception& e) {
  if (const auto* d = dynamic_cast<const dmn::DmnError*>(&e)) return std::string(dmn::to_string(d->kind()));
  if (const auto* f = dynamic_cast<const feel::FeelError*>(&e)) return std::string(feel::to_string(f->kind()));
  if (const auto* v = dynamic_cast<const eval::EvalError*>(&e)) return std::string(eval::to_string(v->kind()));
  if (const auto* p = dynamic_cast<const pnml::PnmlError*>(&e)) return std::string(pnml::to_string(p->kind()));
  if (dynamic_cast<const llm::LlmError*>(&e) != nullptr) return "";  // message already carries the kind
  if (dynamic_cast<const IoError*>(&e) != nullptr) return "IoError";
  return "";
}

std::string read_text(const std::string& path, std::istream& in) {
  if (path != "-") return read_file(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

dmn::DecisionModel load_model(const std::string& path) {
  auto parsed = dmn::load_dmn_file(path);
  for (const auto& w : parsed.warnings) log::warning(path + ": " + w);
  return std::move(parsed.model);
}

void require_valid(const dmn::DecisionModel& model, Io& io) {
  auto violations = dmn::validate(model);
  if (violations.empty()) return;
  for (const auto& v : violations) {
    io.err << dmn::to_string(v.kind) << " [" << v.element_id << "]: " << v.message << '\n';
  }
  throw Exit(kDomainFailure, "the DMN model has " + std::to_string(violations.size()) + " violation(s)");
}

void write_output(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << contents;
  } else {
    write_file_atomic(path, contents);
  }
}

// Config file values apply to options the command line left unset.
class ConfigBinder {
 public:
  void bind(CLI::App* sub, CLI::Option* opt, std::string key, std::function<void(const json&)> set) {
    entries_.push_back({sub, opt, std::move(key), std::move(set)});
  }

  template <typename T>
  void bind_value(CLI::App* sub, CLI::Option* opt, std::string key, T& var) {
    bind(sub, opt, std::move(key), [&var](const json& j) {
      if constexpr (std::is_same_v<T, std::string>) {
        var = j.is_string() ? j.get<std::string>() : j.dump();
      } else {
        var = j.get<T>();
      }
    });
  }

  void apply(const json& config) const {
    for (const auto& e : entries_) {
      if (!e.sub->parsed() || e.opt->count() > 0) continue;
      const json* value = nullptr;
      if (config.contains(e.key)) value = &config[e.key];
      auto scoped = config.find(e.sub->get_name());
      if (scoped != config.end() && scoped->is_object() && scoped->contains(e.key)) value = &(*scoped)[e.key];
      if (value == nullptr) continue;
      try {
        e.set(*value);
      } catch (const json::exception&) {
        throw Exit(kInputFailure, "config key '" + e.key + "' has the wrong type");
      }
    }
  }

 private:
  struct Entry {
    CLI::App* sub;
    CLI::Option* opt;
    std::string key;
    std::function<void(const json&)> set;
  };
  std::vector<Entry> entries_;
};

struct PromptFlags {
  std::string variant = "dmn";
  std::string style = "compact_text";
  bool no_few_shot = false;
  std::string templates_dir;
  std::string preamble_path;
};

void add_prompt_flags(CLI::App* sub, PromptFlags& f, ConfigBinder& binder) {
  binder.bind_value(sub, sub->add_option("--variant", f.variant, "Prompt variant: dmn or cot")->capture_default_str(),
                    "variant", f.variant);
  binder.bind_value(sub,
                    sub->add_option("--style", f.style, "Model rendering: compact_text or raw_xml")->capture_default_str(),
                    "style", f.style);
  binder.bind(sub, sub->add_flag("--no-few-shot", f.no_few_shot, "Leave the worked examples out of Part C"),
              "few_shot", [&f](const json& j) { f.no_few_shot = !j.get<bool>(); });
  binder.bind_value(sub, sub->add_option("--templates", f.templates_dir, "Directory overriding the prompt templates"),
                    "templates", f.templates_dir);
  binder.bind_value(sub, sub->add_option("--preamble", f.preamble_path, "File replacing the Part A preamble"),
                    "preamble", f.preamble_path);
}

struct ResolvedPrompt {
  prompt::PromptVariant variant;
  prompt::PromptOptions options;
  prompt::PromptBuilder builder;
};

ResolvedPrompt resolve_prompt(const PromptFlags& f) {
  auto variant = prompt::variant_from_string(f.variant);
  if (!variant) throw Exit(kInputFailure, "unknown variant '" + f.variant + "' (expected dmn or cot)");
  auto style = dmn::render_style_from_string(f.style);
  if (!style) throw Exit(kInputFailure, "unknown style '" + f.style + "' (expected compact_text or raw_xml)");
  prompt::PromptOptions options;
  options.render_style = *style;
  options.include_few_shot = !f.no_few_shot;
  if (!f.preamble_path.empty()) options.custom_preamble = xml::trim(read_file(f.preamble_path));
  prompt::TemplateSet templates =
      f.templates_dir.empty() ? prompt::TemplateSet::builtin() : prompt::TemplateSet::load_directory(f.templates_dir);
  return {*variant, options, prompt::PromptBuilder(std::move(templates))};
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, Io& io) {
  auto model = load_model(path);
  auto violations = dmn::validate(model);
  for (const auto& v : violations) {
    io.out << dmn::to_string(v.kind) << " [" << v.element_id << "]: " << v.message << '\n';
  }
  if (!violations.empty()) {
    io.err << path << ": " << violations.size() << " violation(s)\n";
    return kDomainFailure;
  }
  io.out << path << ": valid (" << model.tables.size() << " decision table(s), " << model.literals.size()
         << " literal expression(s))\n";
  return kOk;
}

int cmd_triples(const std::string& path, const std::string& format, Io& io) {
  auto model = load_model(path);
  std::vector<std::string> warnings;
  auto triples = dmn::extract_triples(model, &warnings);
  for (const auto& w : warnings) log::warning(w);

  if (format == "json") {
    json arr = json::array();
    for (const auto& t : triples) {
      json inputs = json::array();
      for (const auto& in : t.inputs) inputs.push_back({{"name", in.name}, {"type", to_string(in.value_type)}});
      arr.push_back({{"rule_name", t.rule_name},
                     {"inputs", inputs},
                     {"decision_table", {{"name", t.table.name}, {"rules", t.table.rules.size()}}},
                     {"literal_expression", {{"name", t.literal.name}, {"text", t.literal.expression_text}}}});
    }
    io.out << arr.dump(2) << '\n';
    return kOk;
  }
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    if (i > 0) io.out << '\n';
    io.out << "Rule: " << t.rule_name << '\n';
    io.out << "  Inputs:";
    for (std::size_t k = 0; k < t.inputs.size(); ++k) {
      io.out << (k == 0 ? " " : ", ") << t.inputs[k].name << " (" << to_string(t.inputs[k].value_type) << ")";
    }
    if (t.inputs.empty()) io.out << " (none)";
    io.out << '\n';
    io.out << dmn::render_table_block(t.table);
    io.out << "  Literal expression: " << t.literal.name << '\n';
    std::istringstream lines(t.literal.expression_text);
    std::string line;
    while (std::getline(lines, line)) io.out << "    " << line << '\n';
  }
  return kOk;
}

int cmd_eval(const std::string& path, const std::string& ctx_arg, Io& io) {
  auto model = load_model(path);
  require_valid(model, io);
  std::string ctx_text = ctx_arg;
  if (!ctx_text.empty() && ctx_text.front() == '@') ctx_text = read_text(ctx_text.substr(1), io.in);
  EvaluationContext ctx = pipeline::parse_context_json(ctx_text);

  auto outcomes = feel::evaluate_model(model, ctx);
  int code = kOk;
  for (const auto& o : outcomes) {
    if (o.ok()) {
      io.out << o.rule_name << ": " << *o.message << "  (row " << *o.matched_rule_index << ", "
             << o.table_output->to_feel() << ")\n";
    } else {
      io.out << o.rule_name << ": " << feel::to_string(o.error->kind) << ": " << o.error->detail << '\n';
      code = kDomainFailure;
    }
  }
  return code;
}

int cmd_prompt(const std::string& dmn_path, const std::string& text_path, const PromptFlags& flags,
               const std::string& out_path, Io& io) {
  auto model = load_model(dmn_path);
  require_valid(model, io);
  auto resolved = resolve_prompt(flags);
  std::string text = read_text(text_path, io.in);
  if (xml::trim(text).empty()) throw Exit(kInputFailure, "input text '" + text_path + "' is empty");
  auto bundle = resolved.builder.build(resolved.variant, model, text, resolved.options);
  write_output(out_path, bundle.assembled, io.out);
  return kOk;
}

struct RunFlags {
  PromptFlags prompt;
  std::string backend = "openai";
  std::string model;
  std::string endpoint;
  std::string api_key_env;
  std::string temperature = "0";
  int max_tokens = 1024;
  int timeout = 60;
  int retries = 3;
  int parallel = 4;
  std::string record_path;
  std::string replay_path;
  std::string out_path;
  std::string manifest_path;
  bool per_rule_calls = false;
};

int cmd_run(const std::string& dmn_path, const std::string& cases_path, const RunFlags& f, Io& io) {
  auto model = load_model(dmn_path);
  require_valid(model, io);
  dmn::extract_triples(model);
  auto resolved = resolve_prompt(f.prompt);
  auto cases = pipeline::load_cases(cases_path);

  llm::BackendConfig config;
  if (!f.replay_path.empty()) {
    config.kind = llm::BackendKind::replay;
    config.transcript_path = f.replay_path;
    if (!f.record_path.empty()) throw Exit(kInputFailure, "--record and --replay are mutually exclusive");
  } else {
    auto kind = llm::backend_kind_from_string(f.backend);
    if (!kind) throw Exit(kInputFailure, "unknown backend '" + f.backend + "'");
    if (*kind == llm::BackendKind::replay) throw Exit(kInputFailure, "the replay backend needs --replay PATH");
    config.kind = *kind;
    if (!f.record_path.empty()) {
      config.transcript_path = f.record_path;
      config.record = true;
    }
  }
  if (f.model.empty()) throw Exit(kInputFailure, "--model is required");
  config.model_name = f.model;
  config.endpoint_url = f.endpoint;
  config.api_key_env_var = f.api_key_env;
  auto temperature = Decimal::try_parse(f.temperature);
  if (!temperature) throw Exit(kInputFailure, "invalid temperature '" + f.temperature + "'");
  config.temperature = *temperature;
  config.max_output_tokens = f.max_tokens;
  config.timeout_seconds = f.timeout;
  config.max_retries = f.retries;
  config.max_in_flight = f.parallel;
  config.check();

  if (config.kind != llm::BackendKind::replay) {
    const std::string var = config.effective_key_env_var();
    const char* key = std::getenv(var.c_str());
    if (key == nullptr || *key == '\0') {
      throw llm::LlmError(llm::LlmErrorKind::auth_error, "environment variable " + var + " is not set");
    }
  }
  if (config.kind == llm::BackendKind::replay && !std::filesystem::exists(config.transcript_path)) {
    throw IoError("transcript '" + config.transcript_path + "' does not exist");
  }

  llm::Gateway gateway(config);
  pipeline::RunOptions options;
  options.variant = resolved.variant;
  options.prompt_options = resolved.options;
  options.per_rule_calls = f.per_rule_calls;
  options.parallelism = f.parallel;
  auto batch = pipeline::run_batch(model, cases, options, gateway, resolved.builder);

  std::string lines;
  for (const auto& r : batch.results) lines += pipeline::to_jsonl_line(r) + "\n";
  write_output(f.out_path, lines, io.out);
  std::string manifest_path = f.manifest_path;
  if (manifest_path.empty() && !f.out_path.empty() && f.out_path != "-") manifest_path = f.out_path + ".manifest.json";
  if (!manifest_path.empty()) write_file_atomic(manifest_path, pipeline::manifest_to_json(batch.manifest));

  std::size_t backend_errors = 0;
  for (const auto& r : batch.results) {
    if (!r.error) continue;
    io.err << "case " << r.case_id << ": " << r.error->message << '\n';
    for (auto k : {llm::LlmErrorKind::auth_error, llm::LlmErrorKind::rate_limited, llm::LlmErrorKind::timeout,
                   llm::LlmErrorKind::protocol_error, llm::LlmErrorKind::replay_miss, llm::LlmErrorKind::unavailable}) {
      if (r.error->kind == llm::to_string(k)) ++backend_errors;
    }
  }
  io.err << batch.results.size() << " case(s), " << batch.manifest.error_count << " error(s)\n";
  if (backend_errors > 0) return kBackendFailure;
  return batch.manifest.error_count > 0 ? kDomainFailure : kOk;
}

enum class Answer { yes, no, skip, quit, eof };

Answer ask(Io& io, const std::string& question) {
  for (;;) {
    io.out << question << " [y/n, s to skip, q to quit] " << std::flush;
    std::string line;
    if (!std::getline(io.in, line)) {
      io.out << '\n';
      return Answer::eof;
    }
    std::string a = xml::trim(line);
    for (auto& c : a) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (a == "y" || a == "yes") return Answer::yes;
    if (a == "n" || a == "no") return Answer::no;
    if (a == "s" || a == "skip") return Answer::skip;
    if (a == "q" || a == "quit") return Answer::quit;
    io.out << "Please answer y or n.\n";
  }
}

int cmd_review(const std::string& results_path, const std::string& labels_path, Io& io) {
  auto results = pipeline::load_results(results_path);
  std::set<std::pair<std::string, std::string>> done;
  if (std::filesystem::exists(labels_path)) {
    for (const auto& r : eval::load_labels(labels_path)) done.insert({r.case_id, r.rule_name});
  }

  std::size_t total = 0;
  for (const auto& r : results) total += r.outcomes.size();
  std::size_t index = 0;
  std::size_t labeled = 0;
  std::size_t skipped = 0;
  for (const auto& r : results) {
    for (std::size_t k = 0; k < r.outcomes.size(); ++k) {
      const auto& o = r.outcomes[k];
      ++index;
      if (done.count({r.case_id, o.rule_name}) != 0) continue;

      io.out << "\n[" << index << "/" << total << "] case " << r.case_id << ", rule '" << o.rule_name << "'\n";
      if (o.parse_status == pipeline::ParseStatus::ok) {
        io.out << "Feedback: " << o.message << '\n';
      } else {
        io.out << "Feedback: (" << pipeline::to_string(o.parse_status) << ")"
               << (o.message.empty() ? "" : " " + o.message) << '\n';
      }
      if (r.error) io.out << "Run error: " << r.error->message << '\n';
      if (r.oracle_outcomes && k < r.oracle_outcomes->size() && (*r.oracle_outcomes)[k].message) {
        io.out << "Rules engine: " << *(*r.oracle_outcomes)[k].message << '\n';
      }

      Answer flags = ask(io, "Does the feedback flag a problem?");
      Answer correct = Answer::skip;
      if (flags == Answer::yes || flags == Answer::no) correct = ask(io, "Is the feedback correct?");
      for (Answer a : {flags, correct}) {
        if (a == Answer::quit || a == Answer::eof) {
          io.err << "review stopped: " << labeled << " label(s) written, rerun to resume\n";
          return kOk;
        }
      }
      if (flags == Answer::skip || correct == Answer::skip) {
        ++skipped;
        continue;
      }
      eval::LabelRecord rec;
      rec.case_id = r.case_id;
      rec.rule_name = o.rule_name;
      rec.predicted_violation = flags == Answer::yes;
      rec.feedback_correct = correct == Answer::yes;
      rec.gold_violation = *rec.feedback_correct ? rec.predicted_violation : !rec.predicted_violation;
      append_to_file(labels_path, eval::to_jsonl_line(rec) + "\n");
      done.insert({r.case_id, o.rule_name});
      ++labeled;
    }
  }
  io.err << "review finished: " << labeled << " label(s) written, " << skipped << " skipped\n";
  return kOk;
}

int cmd_metrics(const std::string& labels_path, bool per_rule, const std::string& format, Io& io) {
  if (format != "text" && format != "json") throw Exit(kInputFailure, "unknown format '" + format + "'");
  auto records = eval::load_labels(labels_path);
  auto report = eval::metrics(eval::confusion(records));
  std::optional<std::vector<eval::RuleAccuracyRow>> rows;
  if (per_rule) rows = eval::per_rule_report(records);
  if (format == "json") {
    io.out << eval::render_metrics_json(report, rows ? &*rows : nullptr);
  } else {
    io.out << eval::render_metrics_text(report);
    if (rows) io.out << '\n' << eval::render_per_rule_text(*rows);
  }
  return kOk;
}

int cmd_pnml2text(const std::string& path, const std::string& out_path, Io& io) {
  auto parsed = pnml::load_pnml_file(path);
  for (const auto& w : parsed.warnings) log::warning(path + ": " + w);
  auto narrative = pnml::net_to_text(parsed.net);
  for (const auto& w : narrative.warnings) log::warning(path + ": " + w);
  write_output(out_path, narrative.to_text(), io.out);
  return kOk;
}

std::optional<json> load_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      continue;
    }
    try {
      json j = json::parse(read_file(path));
      if (!j.is_object()) throw Exit(kInputFailure, "config file '" + path + "' must hold a JSON object");
      return j;
    } catch (const json::exception& e) {
      throw Exit(kInputFailure, "config file '" + path + "': " + e.what());
    }
  }
  return std::nullopt;
}

int dispatch(const std::vector<std::string>& args, Io& io) {
  CLI::App app{"Turns DMN decision models into LLM prompts, runs them and scores the feedback.", "dmnprompt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dmnprompt 1.0.0");
  std::string config_path;
  int verbosity = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON file with default option values");
  app.add_flag("-v,--verbose", verbosity, "More log output (repeatable)");
  app.add_flag("-q,--quiet", quiet, "Only log errors");
  ConfigBinder binder;

  std::string dmn_path;
  auto* validate = app.add_subcommand("validate", "Check a DMN model against the supported subset");
  validate->add_option("dmn", dmn_path, "DMN file")->required();

  std::string triples_format = "text";
  auto* triples = app.add_subcommand("triples", "Print the rule dictionary extracted from a DMN model");
  triples->add_option("dmn", dmn_path, "DMN file")->required();
  triples->add_option("--format", triples_format, "text or json")->capture_default_str();

  std::string ctx;
  auto* evalc = app.add_subcommand("eval", "Evaluate a DMN model locally with the rules engine");
  evalc->add_option("dmn", dmn_path, "DMN file")->required();
  evalc->add_option("--ctx", ctx, "Input values as a JSON object, or @file")->required();

  PromptFlags prompt_flags;
  std::string text_path;
  std::string prompt_out;
  auto* promptc = app.add_subcommand("prompt", "Print the assembled prompt for an input text");
  promptc->add_option("dmn", dmn_path, "DMN file")->required();
  promptc->add_option("input", text_path, "Input text file, - for stdin")->required();
  promptc->add_option("--out", prompt_out, "Write the prompt to this file");
  add_prompt_flags(promptc, prompt_flags, binder);

  RunFlags run_flags;
  std::string cases_path;
  auto* run = app.add_subcommand("run", "Evaluate cases through an LLM backend");
  run->add_option("dmn", dmn_path, "DMN file")->required();
  run->add_option("cases", cases_path, "Cases JSONL file")->required();
  add_prompt_flags(run, run_flags.prompt, binder);
  binder.bind_value(run, run->add_option("--backend", run_flags.backend, "openai or gemini")->capture_default_str(),
                    "backend", run_flags.backend);
  binder.bind_value(run, run->add_option("--model", run_flags.model, "Model name"), "model", run_flags.model);
  binder.bind_value(run, run->add_option("--endpoint", run_flags.endpoint, "Base URL of the API"), "endpoint",
                    run_flags.endpoint);
  binder.bind_value(run, run->add_option("--api-key-env", run_flags.api_key_env, "Environment variable holding the key"),
                    "api_key_env", run_flags.api_key_env);
  binder.bind_value(run, run->add_option("--temperature", run_flags.temperature)->capture_default_str(), "temperature",
                    run_flags.temperature);
  binder.bind_value(run, run->add_option("--max-tokens", run_flags.max_tokens)->capture_default_str(), "max_tokens",
                    run_flags.max_tokens);
  binder.bind_value(run, run->add_option("--timeout", run_flags.timeout, "Seconds per attempt")->capture_default_str(),
                    "timeout", run_flags.timeout);
  binder.bind_value(run, run->add_option("--retries", run_flags.retries)->capture_default_str(), "retries",
                    run_flags.retries);
  binder.bind_value(run, run->add_option("--parallel", run_flags.parallel, "Cases in flight")->capture_default_str(),
                    "parallel", run_flags.parallel);
  auto* record_opt = run->add_option("--record", run_flags.record_path, "Append every live exchange to this transcript");
  auto* replay_opt = run->add_option("--replay", run_flags.replay_path, "Answer from this transcript, no network");
  record_opt->excludes(replay_opt);
  binder.bind_value(run, record_opt, "record", run_flags.record_path);
  binder.bind_value(run, replay_opt, "replay", run_flags.replay_path);
  run->add_option("--out", run_flags.out_path, "Results JSONL (default stdout)");
  run->add_option("--manifest", run_flags.manifest_path, "Run manifest JSON (default <out>.manifest.json)");
  binder.bind(run, run->add_flag("--per-rule-calls", run_flags.per_rule_calls, "One LLM call per rule"),
              "per_rule_calls", [&](const json& j) { run_flags.per_rule_calls = j.get<bool>(); });

  std::string results_path;
  std::string labels_path;
  auto* review = app.add_subcommand("review", "Label each generated feedback interactively");
  review->add_option("results", results_path, "Results JSONL from run")->required();
  review->add_option("labels", labels_path, "Labels JSONL to append to")->required();

  bool per_rule = false;
  std::string metrics_format = "text";
  auto* metricsc = app.add_subcommand("metrics", "Precision, recall, F1 and accuracy from labels");
  metricsc->add_option("labels", labels_path, "Labels JSONL")->required();
  metricsc->add_flag("--per-rule", per_rule, "Add per-rule feedback accuracy");
  binder.bind_value(metricsc, metricsc->add_option("--format", metrics_format, "text or json")->capture_default_str(),
                    "format", metrics_format);

  std::string pnml_path;
  std::string narrative_out;
  auto* pnml2text = app.add_subcommand("pnml2text", "Describe a Petri net (PNML) in plain English");
  pnml2text->add_option("pnml", pnml_path, "PNML file")->required();
  pnml2text->add_option("--out", narrative_out, "Write the narrative to this file");

  std::vector<const char*> argv{"dmnprompt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, io.out, io.err);
    return code == 0 ? kOk : kInputFailure;
  }

  if (quiet) {
    log::set_level(log::Level::error);
  } else if (verbosity >= 2) {
    log::set_level(log::Level::debug);
  } else if (verbosity == 1) {
    log::set_level(log::Level::info);
  }
  if (auto config = load_config(args)) binder.apply(*config);

  if (validate->parsed()) return cmd_validate(dmn_path, io);
  if (triples->parsed()) return cmd_triples(dmn_path, triples_format, io);
  if (evalc->parsed()) return cmd_eval(dmn_path, ctx, io);
  if (promptc->parsed()) return cmd_prompt(dmn_path, text_path, prompt_flags, prompt_out, io);
  if (run->parsed()) return cmd_run(dmn_path, cases_path, run_flags, io);
  if (review->parsed()) return cmd_review(results_path, labels_path, io);
  if (metricsc->parsed()) return cmd_metrics(labels_path, per_rule, metrics_format, io);
  if (pnml2text->parsed()) return cmd_pnml2text(pnml_path, narrative_out, io);
  return kInputFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Io io{in, out, err};
  const log::Level saved_level = log::level();
  log::Sink saved_sink = log::set_sink([&err](log::Level level, std::string_view message) {
    err << log::to_string(level) << ": " << message << '\n';
  });

  int code = kOk;
  try {
    code = dispatch(args, io);
  } catch (const std::exception& e) {
    std::string label = error_label(e);
    err << "error: " << (label.empty() ? "" : label + ": ") << e.what() << '\n';
    code = exit_code_for(e);
  }
  log::set_sink(std::move(saved_sink));
  log::set_level(saved_level);
  return code;
}

}  // namespace dmnprompt::cli
