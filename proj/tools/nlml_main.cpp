// Copyright 2026 The NLML Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line frontend: parse text to NLML, validate, transform, answer
// grammar questions, and store/retrieve classified records.
//
// Exit codes: 0 success, 1 domain error (no parse, unsupported transform,
// missing key), 2 usage or lexicon errors.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlml/nlml.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct CliConfig {
  std::string lexicon_path = "lexicon/en-demo.lex";
  std::string store_path = "nlml.db";
  std::string format = "nlml";  // nlml | tree | json-lines
  bool all_results = false;
  bool with_text = false;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

std::string read_stdin() {
  std::ostringstream out;
  out << std::cin.rdbuf();
  return out.str();
}

std::string join_args(const std::vector<std::string>& words) {
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

nlml::Lexicon load_lexicon_checked(const CliConfig& config) {
  return nlml::load_lexicon(config.lexicon_path);
}

// Input starting with '<' is NLML; anything else is raw text to parse.
nlml::Document input_to_document(const std::string& input, const nlml::Lexicon& lex) {
  std::string trimmed = input;
  std::size_t b = trimmed.find_first_not_of(" \t\r\n");
  if (b != std::string::npos && trimmed[b] == '<')
    return nlml::canonicalize(nlml::deserialize(trimmed));
  nlml::TokenStream tokens = nlml::tokenize(input);
  nlml::Analyses analyses = nlml::classify_expression(tokens, lex);
  if (analyses.results.empty())
    throw nlml::NoParseError(analyses.furthest,
                             analyses.furthest < tokens.size()
                                 ? tokens[analyses.furthest].text
                                 : std::string());
  return analyses.results.front().document;
}

int cmd_parse(const CliConfig& config, const std::string& text) {
  nlml::Lexicon lex = load_lexicon_checked(config);
  nlml::TokenStream tokens = nlml::tokenize(text);
  nlml::Analyses analyses = nlml::classify_expression(tokens, lex);
  if (analyses.results.empty()) {
    std::string tok =
        analyses.furthest < tokens.size() ? tokens[analyses.furthest].text : "<end>";
    std::cerr << "no parse: furthest token index " << analyses.furthest << " ('" << tok
              << "')\n";
    return kExitDomain;
  }
  std::size_t count = config.all_results ? analyses.results.size() : 1;
  for (std::size_t i = 0; i < count; ++i) {
    const nlml::ParseResult& r = analyses.results[i];
    if (config.format == "tree") {
      std::cout << nlml::render_tree(r.document);
    } else if (config.format == "json-lines") {
      nlohmann::json j;
      j["mood"] = r.document.mood();
      j["penalty"] = r.penalty;
      j["probability"] = r.probability;
      j["rule"] = r.rule;
      j["nlml"] = nlml::serialize(r.document);
      std::cout << j.dump() << "\n";
    } else if (config.all_results) {
      std::cout << "penalty=" << r.penalty << " probability=" << r.probability << " "
                << nlml::serialize(r.document) << "\n";
    } else {
      std::cout << nlml::serialize(r.document) << "\n";
    }
  }
  return kExitOk;
}

int cmd_validate(const CliConfig& config, const std::string& input) {
  (void)config;
  nlml::Document doc = nlml::canonicalize(nlml::deserialize(input));
  std::vector<nlml::Violation> violations = nlml::validate(doc);
  for (const nlml::Violation& v : violations)
    std::cout << v.where << ": " << v.message << "\n";
  if (violations.empty()) {
    std::cout << "valid\n";
    return kExitOk;
  }
  return kExitDomain;
}

int cmd_transform(const CliConfig& config, const std::string& op, const std::string& input) {
  nlml::Lexicon lex = load_lexicon_checked(config);
  nlml::Document doc = input_to_document(input, lex);
  nlml::SentenceModel model = nlml::build_model(doc);
  nlml::SentenceModel result;
  if (op == "negate")
    result = nlml::negate(model, lex);
  else if (op == "to-question")
    result = nlml::transform_mood(model, nlml::Mood::question, lex);
  else if (op == "to-statement")
    result = nlml::transform_mood(model, nlml::Mood::statement, lex);
  else {
    std::cerr << "unknown transform: " << op << "\n";
    return kExitUsage;
  }
  std::string text = nlml::render_text(result);
  nlml::TokenStream tokens = nlml::tokenize(text);
  nlml::Analyses analyses = nlml::classify_expression(tokens, lex);
  if (analyses.results.empty()) {
    std::cerr << "transformed text did not re-parse: " << text << "\n";
    return kExitDomain;
  }
  std::cout << nlml::serialize(analyses.results.front().document) << "\n";
  if (config.with_text) std::cout << text << "\n";
  return kExitOk;
}

int cmd_answer(const CliConfig& config, const std::string& query, std::size_t part_index,
               const std::string& input) {
  nlml::Lexicon lex = load_lexicon_checked(config);
  auto q = nlml::answer_query_from_string(query);
  if (!q) {
    std::cerr << "unknown query: " << query << "\n";
    return kExitUsage;
  }
  nlml::Document doc = input_to_document(input, lex);
  nlml::SentenceModel model = nlml::build_model(doc);
  std::optional<std::string> result = nlml::answer(model, *q, part_index);
  if (!result) {
    std::cout << "(absent)\n";
    return kExitOk;
  }
  std::cout << *result << "\n";
  return kExitOk;
}

int cmd_db_put(const CliConfig& config, const std::string& input) {
  nlml::Lexicon lex = load_lexicon_checked(config);
  nlml::Document doc = input_to_document(input, lex);
  nlml::Store store(config.store_path);
  std::uint64_t key = store.put(doc);
  std::cout << key << "\n";
  return kExitOk;
}

int cmd_db_get(const CliConfig& config, std::uint64_t key) {
  nlml::Store store(config.store_path);
  nlml::DbRecord rec = store.get(key);
  std::cout << rec.nlml << "\n";
  return kExitOk;
}

int cmd_db_query(const CliConfig& config, const std::string& cls_text) {
  auto cls = nlml::db_class_from_string(cls_text);
  if (!cls) {
    std::cerr << "unknown class: " << cls_text << " (expected fact|question|relation)\n";
    return kExitUsage;
  }
  nlml::Store store(config.store_path);
  for (const nlml::DbRecord& rec : store.query(*cls))
    std::cout << rec.key << "\t" << nlml::to_string(rec.db_class) << "\t" << rec.created_at
              << "\t" << rec.nlml << "\n";
  return kExitOk;
}

int cmd_db_rebuild(const CliConfig& config, const std::vector<std::uint64_t>& keys) {
  nlml::Store store(config.store_path);
  std::vector<std::uint64_t> selected = keys;
  if (selected.empty())
    for (const nlml::DbRecord& rec : store.all()) selected.push_back(rec.key);
  std::vector<nlml::SentenceModel> models = store.rebuild(selected);
  for (std::size_t i = 0; i < models.size(); ++i)
    std::cout << selected[i] << "\t" << nlml::to_string(models[i].mood) << "\t"
              << nlml::render_text(models[i]) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig config;
  config.lexicon_path = env_or("NLML_LEXICON", config.lexicon_path);
  config.store_path = env_or("NLML_STORE", config.store_path);

  CLI::App app{"NLML toolkit: parse a defined subset of English into nested-tag markup, "
               "transform it, answer grammar questions, and store analyses"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all");
  app.add_option("--lexicon", config.lexicon_path, "lexicon file path");
  app.add_option("--store", config.store_path, "store file path");
  app.add_option("--format", config.format, "output format: nlml | tree | json-lines")
      ->check(CLI::IsMember({"nlml", "tree", "json-lines"}));
  app.add_flag("--all", config.all_results, "print all ranked analyses");
  app.add_flag("--text", config.with_text, "also print rendered text after transforms");

  std::vector<std::string> words;
  CLI::App* parse_cmd = app.add_subcommand("parse", "parse text and print NLML");
  parse_cmd->add_option("text", words, "text to parse (stdin when omitted)");

  std::string validate_input;
  CLI::App* validate_cmd = app.add_subcommand("validate", "validate an NLML string");
  validate_cmd->add_option("nlml", validate_input, "NLML string (stdin when omitted)");

  std::string transform_op;
  std::vector<std::string> transform_words;
  CLI::App* transform_cmd =
      app.add_subcommand("transform", "negate | to-question | to-statement");
  transform_cmd->add_option("op", transform_op, "transformation")->required();
  transform_cmd->add_option("input", transform_words, "text or NLML (stdin when omitted)");

  std::string answer_query;
  std::size_t answer_index = 0;
  std::vector<std::string> answer_words;
  CLI::App* answer_cmd = app.add_subcommand("answer", "answer a grammar question");
  answer_cmd->add_option("query", answer_query,
                         "subject | verb_word | object | tense | mood | complexity | subordinator")
      ->required();
  answer_cmd->add_option("part", answer_index, "simple-sentence index")->required();
  answer_cmd->add_option("input", answer_words, "text or NLML (stdin when omitted)");

  CLI::App* db_cmd = app.add_subcommand("db", "classified persistent store");
  db_cmd->require_subcommand(1);
  std::vector<std::string> put_words;
  CLI::App* put_cmd = db_cmd->add_subcommand("put", "store an analysis, print its key");
  put_cmd->add_option("input", put_words, "text or NLML (stdin when omitted)");
  std::uint64_t get_key = 0;
  CLI::App* get_cmd = db_cmd->add_subcommand("get", "print a stored NLML string");
  get_cmd->add_option("key", get_key, "record key")->required();
  std::string query_class;
  CLI::App* query_cmd = db_cmd->add_subcommand("query", "list records of one class");
  query_cmd->add_option("class", query_class, "fact | question | relation")->required();
  std::vector<std::uint64_t> rebuild_keys;
  CLI::App* rebuild_cmd = db_cmd->add_subcommand("rebuild", "rebuild models from records");
  rebuild_cmd->add_option("keys", rebuild_keys, "record keys (all when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (parse_cmd->parsed()) {
      std::string text = words.empty() ? read_stdin() : join_args(words);
      return cmd_parse(config, text);
    }
    if (validate_cmd->parsed()) {
      std::string input = validate_input.empty() ? read_stdin() : validate_input;
      return cmd_validate(config, input);
    }
    if (transform_cmd->parsed()) {
      std::string input =
          transform_words.empty() ? read_stdin() : join_args(transform_words);
      return cmd_transform(config, transform_op, input);
    }
    if (answer_cmd->parsed()) {
      std::string input = answer_words.empty() ? read_stdin() : join_args(answer_words);
      return cmd_answer(config, answer_query, answer_index, input);
    }
    if (db_cmd->parsed()) {
      if (put_cmd->parsed()) {
        std::string input = put_words.empty() ? read_stdin() : join_args(put_words);
        return cmd_db_put(config, input);
      }
      if (get_cmd->parsed()) return cmd_db_get(config, get_key);
      if (query_cmd->parsed()) return cmd_db_query(config, query_class);
      if (rebuild_cmd->parsed()) return cmd_db_rebuild(config, rebuild_keys);
    }
  } catch (const nlml::LexiconError& e) {
    std::cerr << "lexicon error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlml::TokenizeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const nlml::NoParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitDomain;
  } catch (const nlml::MarkupError& e) {
    std::cerr << "markup error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const nlml::ModelError& e) {
    std::cerr << e.what() << "\n";
    return kExitDomain;
  } catch (const nlml::StoreError& e) {
    std::cerr << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
