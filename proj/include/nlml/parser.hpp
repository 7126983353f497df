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
// Recursive-descent parser from token streams to ranked NLML analyses.
// Alternatives are ordered (earlier is preferred), penalties are additive,
// and the sentence moods cut off the phrase-level rules (max-matching).

#ifndef NLML_PARSER_HPP
#define NLML_PARSER_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlml/affix.hpp"
#include "nlml/lexicon.hpp"
#include "nlml/markup.hpp"
#include "nlml/tokenizer.hpp"

namespace nlml {

enum class Mood : uint8_t {
  statement,
  question,
  order,
  full_exclamation,
  np,
  adj,
  about,
  circumstances,
  what_terse_exclamation,
  how_terse_exclamation,
  subcircum,
};

inline std::string_view to_string(Mood m) {
  switch (m) {
    case Mood::statement: return "statement";
    case Mood::question: return "question";
    case Mood::order: return "order";
    case Mood::full_exclamation: return "full exclamation";
    case Mood::np: return "np";
    case Mood::adj: return "adj";
    case Mood::about: return "about";
    case Mood::circumstances: return "circumstances";
    case Mood::what_terse_exclamation: return "what terse exclamation";
    case Mood::how_terse_exclamation: return "how terse exclamation";
    case Mood::subcircum: return "subcircum";
  }
  return "?";
}

inline std::optional<Mood> mood_from_string(std::string_view s) {
  for (int i = 0; i <= int(Mood::subcircum); ++i) {
    Mood m = static_cast<Mood>(i);
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

enum class Complexity : uint8_t { simple, complex, compound, compound_complex };

inline std::string_view to_string(Complexity c) {
  switch (c) {
    case Complexity::simple: return "simple";
    case Complexity::complex: return "complex";
    case Complexity::compound: return "compound";
    case Complexity::compound_complex: return "compound complex";
  }
  return "?";
}

inline std::optional<Complexity> complexity_from_string(std::string_view s) {
  for (int i = 0; i <= int(Complexity::compound_complex); ++i) {
    Complexity c = static_cast<Complexity>(i);
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

// One candidate analysis. Penalty 0 readings come from the sentence rules;
// the bare-phrase rules carry 10 and the subordinate-fragment rule 12, and
// a noun-clause real subject adds 10 inside a sentence reading.
struct ParseResult {
  Document document;
  int penalty = 0;
  double probability = 1.0;
  int rule = 0;  // expression rule number, 1..16
};

struct Analyses {
  std::vector<ParseResult> results;
  std::size_t furthest = 0;  // highest token index any attempt reached
};

struct Fragment {
  std::vector<Node> nodes;
  int penalty = 0;
  double probability = 1.0;
};

class NoParseError : public std::runtime_error {
 public:
  NoParseError(std::size_t furthest, std::string token)
      : std::runtime_error("no parse (furthest token index " + std::to_string(furthest) +
                           (token.empty() ? "" : ": '" + token + "'") + ")"),
        furthest_(furthest) {}
  std::size_t furthest() const { return furthest_; }

 private:
  std::size_t furthest_;
};

class PositionViolation : public std::runtime_error {
 public:
  explicit PositionViolation(const std::string& word)
      : std::runtime_error("adjective '" + word + "' is not licensed in this position") {}
};

class UnknownAttachment : public std::runtime_error {
 public:
  explicit UnknownAttachment(const std::string& verb)
      : std::runtime_error("verb '" + verb + "' licenses none of the parsed complements") {}
};

enum class AdjPosition : uint8_t { attribute, predicate };
enum class CircPosition : uint8_t { pre, mid, post };

namespace detail {

inline constexpr std::size_t kMaxAlternatives = 16;
inline constexpr int kMaxDepth = 220;

template <typename T>
struct Alt {
  T value;
  std::size_t next;
  int penalty = 0;
  double prob = 1.0;
};

template <typename T>
using Alts = std::vector<Alt<T>>;

template <typename T>
void cap(Alts<T>& alts) {
  if (alts.size() > kMaxAlternatives) alts.resize(kMaxAlternatives);
}

inline const std::map<std::string, std::string, std::less<>>& neg_contractions() {
  static const std::map<std::string, std::string, std::less<>> m = {
      {"don't", "do"},     {"doesn't", "does"}, {"didn't", "did"},  {"can't", "can"},
      {"won't", "will"},   {"isn't", "is"},     {"aren't", "are"},  {"wasn't", "was"},
      {"weren't", "were"}, {"hasn't", "has"},   {"haven't", "have"}, {"hadn't", "had"},
      {"shouldn't", "should"}, {"couldn't", "could"}, {"mustn't", "must"},
  };
  return m;
}

inline std::string display_word(std::string_view w) {
  return w == "i" ? std::string("I") : std::string(w);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(const TokenStream& tokens, const Lexicon& lexicon)
      : ts_(tokens), lex_(lexicon) {}

  // Expression rules #1..#16. Rules #1-#4 are the sentence moods; when any
  // of them yields a result the phrase rules are not attempted.
  Analyses classify() {
    furthest_ = 0;
    std::vector<ParseResult> out;
    collect(out, 1, rule_statement());
    collect(out, 2, rule_question());
    collect(out, 3, rule_order());
    collect(out, 4, rule_full_exclamation());
    if (out.empty()) {
      collect(out, 5, rule_about("how"));
      collect(out, 6, rule_about("what"));
      collect(out, 7, rule_what_terse());
      collect(out, 8, rule_how_terse());
      collect(out, 9, rule_query_np());
      collect(out, 10, rule_query_adverb());
      collect(out, 11, rule_mid_circumstances());
      collect(out, 12, rule_bare_np());
      collect(out, 13, rule_np_with_relative());
      collect(out, 14, rule_attribute_adjectives());
      collect(out, 15, rule_predicative_adjective());
      collect(out, 16, rule_subcircum());
    }
    std::stable_sort(out.begin(), out.end(), [](const ParseResult& a, const ParseResult& b) {
      if (a.penalty != b.penalty) return a.penalty < b.penalty;
      if (a.probability != b.probability) return a.probability > b.probability;
      return a.rule < b.rule;
    });
    // Drop duplicate documents, keeping the best-ranked occurrence.
    std::vector<ParseResult> unique;
    std::set<std::string> seen;
    for (ParseResult& r : out) {
      std::string key = serialize(r.document);
      if (seen.insert(std::move(key)).second) unique.push_back(std::move(r));
      if (unique.size() >= 8) break;
    }
    return Analyses{std::move(unique), furthest_};
  }

  std::size_t furthest() const { return furthest_; }
  bool saw_verb_head() const { return saw_verb_head_; }

  // --- individual expression rules, each requiring full consumption ---

  detail::Alts<Document> rule_statement() {
    return finish_docs(statement_body(0, Mood::statement), {"."});
  }

  detail::Alts<Document> rule_question() {
    return finish_docs(question_body(0), {"?"});
  }

  detail::Alts<Document> rule_order() {
    // Rule #3 allows a trailing "please" before the bang.
    detail::Alts<Document> out;
    for (auto& alt : order_body(0)) {
      std::size_t p = alt.next;
      if (word_at(p) == "please") ++p;
      if (auto end = finish(p, {"!", "."}))
        out.push_back({std::move(alt.value), *end, alt.penalty, alt.prob});
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Document> rule_full_exclamation() {
    return finish_docs(full_exclamation_body(0), {"!"});
  }

  detail::Alts<Document> rule_about(std::string_view lead) {
    detail::Alts<Document> out;
    if (word_at(0) != lead || word_at(1) != "about") return out;
    NpOpts opts;
    opts.required_case = CaseSet::of(Case::dat);
    for (auto& np : noun_phrase(2, opts)) {
      if (auto end = finish(np.next, {"?"})) {
        Document doc;
        doc.roots.push_back(Node::leaf("mood", "about"));
        for (Node& n : np.value.nodes) doc.roots.push_back(std::move(n));
        out.push_back({std::move(doc), *end, np.penalty, np.prob});
      }
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Document> rule_what_terse() {
    detail::Alts<Document> out;
    if (word_at(0) != "what") return out;
    NpOpts opts;
    opts.required_case = CaseSet::of(Case::nom);
    for (auto& np : noun_phrase(1, opts)) {
      if (auto end = finish(np.next, {"!"})) {
        Document doc;
        doc.roots.push_back(Node::leaf("mood", "what terse exclamation"));
        for (Node& n : np.value.nodes) doc.roots.push_back(std::move(n));
        out.push_back({std::move(doc), *end, np.penalty, np.prob});
      }
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Document> rule_how_terse() {
    detail::Alts<Document> out;
    if (word_at(0) != "how") return out;
    for (auto& adj : adjective_part(1, AdjPosition::predicate)) {
      if (auto end = finish(adj.next, {"!"})) {
        Document doc;
        doc.roots.push_back(Node::leaf("mood", "how terse exclamation"));
        doc.roots.push_back(std::move(adj.value));
        out.push_back({std::move(doc), *end, adj.penalty, adj.prob});
      }
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Document> rule_query_np() {
    detail::Alts<Document> out;
    NpOpts opts;
    opts.allow_query = true;
    opts.query_only = true;
    for (auto& np : noun_phrase(0, opts)) {
      if (auto end = finish(np.next, {"?", "."})) {
        Document doc;
        doc.roots.push_back(Node::leaf("mood", "np"));
        for (Node& n : np.value.nodes) doc.roots.push_back(std::move(n));
        out.push_back({std::move(doc), *end, np.penalty, np.prob});
      }
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Document> rule_query_adverb() {
    detail::Alts<Document> out;
    for (const LexEntry* e : entries_at(0)) {
      if (e->category != Category::query_adverb) continue;
      if (auto end = finish(1, {"?", "."})) {
        Document doc;
        doc.roots.push_back(Node::leaf("mood", "circumstances"));
        doc.roots.push_back(make_adv_circum(*e, word_at(0)));
        out.push_back({std::move(doc), *end, 0, e->probability});
      }
    }
    return out;
  }

  detail::Alts<Document> rule_mid_circumstances() {
    detail::Alts<Document> out;
    for (auto& circ : circumstance(0, CircPosition::mid)) {
      std::vector<Node> nodes{std::move(circ.value)};
      extend_circ_rule(out, std::move(nodes), circ.next, circ.penalty, circ.prob);
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Document> rule_bare_np() {
    detail::Alts<Document> out;
    NpOpts opts;
    opts.allow_rel = false;
    for (auto& np : noun_phrase(0, opts)) {
      if (auto end = finish(np.next, {"."})) {
        Document doc;
        doc.roots.push_back(Node::leaf("mood", "np"));
        for (Node& n : np.value.nodes) doc.roots.push_back(std::move(n));
        out.push_back({std::move(doc), *end, np.penalty + 10, np.prob});
      }
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Document> rule_np_with_relative() {
    detail::Alts<Document> out;
    NpOpts opts;
    opts.allow_rel = false;
    for (auto& np : noun_phrase(0, opts)) {
      for (auto& rel : relative_clause(np.next, np.value.affixes.number)) {
        if (auto end = finish(rel.next, {"."})) {
          NpFrag frag = np.value;
          attach_postmod(frag, rel.value);
          Document doc;
          doc.roots.push_back(Node::leaf("mood", "np"));
          for (Node& n : frag.nodes) doc.roots.push_back(std::move(n));
          out.push_back(
              {std::move(doc), *end, np.penalty + rel.penalty + 10, np.prob * rel.prob});
        }
      }
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Document> rule_attribute_adjectives() {
    detail::Alts<Document> out;
    std::vector<Node> nodes;
    std::size_t p = 0;
    double prob = 1.0;
    while (true) {
      auto alts = adjective_part(p, AdjPosition::attribute);
      if (alts.empty()) break;
      nodes.push_back(alts.front().value);
      prob *= alts.front().prob;
      p = alts.front().next;
      if (auto end = finish(p, {".", "!"})) {
        Document doc;
        doc.roots.push_back(Node::leaf("mood", "adj"));
        for (const Node& n : nodes) doc.roots.push_back(n);
        out.push_back({std::move(doc), *end, 10, prob});
      }
    }
    return out;
  }

  detail::Alts<Document> rule_predicative_adjective() {
    detail::Alts<Document> out;
    for (auto& adj : adjective_part(0, AdjPosition::predicate)) {
      if (auto end = finish(adj.next, {".", "!"})) {
        Document doc;
        doc.roots.push_back(Node::leaf("mood", "adj"));
        doc.roots.push_back(std::move(adj.value));
        out.push_back({std::move(doc), *end, 10, adj.prob});
      }
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Document> rule_subcircum() {
    detail::Alts<Document> out;
    for (auto& sub : subordinator_head(0)) {
      for (auto& body : simple_statement(sub.next, SimpleOpts{})) {
        if (auto end = finish(body.next, {"."})) {
          Document doc;
          doc.roots.push_back(Node::leaf("mood", "subcircum"));
          doc.roots.push_back(Node::leaf("subordinator", sub.value));
          for (Node& n : body.value.nodes) doc.roots.push_back(std::move(n));
          out.push_back({std::move(doc), *end, 12 + body.penalty, sub.prob * body.prob});
        }
      }
    }
    detail::cap(out);
    return out;
  }

  // --- fragment entry points used by the free-function wrappers ---

  struct NpOpts {
    bool allow_query = false;
    bool query_only = false;
    bool allow_rel = true;
    bool allow_pp = true;
    bool allow_coord = true;
    CaseSet required_case = CaseSet::full();
  };

  struct NpFrag {
    std::vector<Node> nodes;  // <noun> or <part>/<part_connector> sequence
    AffixValue affixes;
    bool query = false;
    std::string query_word;
  };

  enum class GapMode : uint8_t { none, omit, place };

  struct VpOpts {
    GapMode gap = GapMode::none;
    std::vector<Node> gap_nodes;  // query NP to place at its role (GapMode::place)
    bool prefer_io_gap = false;
    bool imperative = false;
    bool allow_multipart = true;
  };

  struct VpFrag {
    Node node;  // a <verb_phrase> element
    bool passive = false;
    bool gap_used = false;
  };

  struct SimpleFrag {
    std::vector<Node> nodes;  // pre-circ*, [subject], verb_phrase
    bool passive = false;
  };

  detail::Alts<NpFrag> noun_phrase(std::size_t pos, const NpOpts& opts);
  detail::Alts<Node> relative_clause(std::size_t pos, NumberSet head_number);
  detail::Alts<Node> noun_clause(std::size_t pos, bool allow_bare_finite);
  detail::Alts<Node> adjective_part(std::size_t pos, AdjPosition position);
  detail::Alts<Node> predicate_phrase(std::size_t pos);
  detail::Alts<Node> prep_phrase(std::size_t pos, const std::set<std::string>* allowed = nullptr);
  detail::Alts<Node> circumstance(std::size_t pos, CircPosition position);
  detail::Alts<VpFrag> finite_verb_phrase(std::size_t pos, const AffixValue& subject,
                                          const VpOpts& opts);
  struct SimpleOpts {
    VpOpts vp;
    bool allow_pre_circs = true;
    bool allow_clause_subject = true;
    bool allow_there_be = true;
  };
  detail::Alts<SimpleFrag> simple_statement(std::size_t pos, const SimpleOpts& opts);

 private:
  // ----- token helpers -----

  std::string_view word_at(std::size_t p) {
    if (p >= ts_.size()) return {};
    furthest_ = std::max(furthest_, p);
    return ts_[p].text;
  }

  std::vector<const LexEntry*> entries_at(std::size_t p) {
    if (p >= ts_.size()) return {};
    furthest_ = std::max(furthest_, p);
    return lex_.lookup(ts_[p].text);
  }

  bool has_category(std::size_t p, Category c) {
    for (const LexEntry* e : entries_at(p))
      if (e->category == c) return true;
    return false;
  }

  const LexEntry* entry_of(std::size_t p, Category c) {
    for (const LexEntry* e : entries_at(p))
      if (e->category == c) return e;
    return nullptr;
  }

  // Consumes one optional final punctuation token; succeeds only when the
  // whole stream is then exhausted.
  std::optional<std::size_t> finish(std::size_t p, const std::vector<std::string_view>& ok) {
    if (p == ts_.size()) return p;
    if (p + 1 == ts_.size())
      for (std::string_view s : ok)
        if (word_at(p) == s) return p + 1;
    return std::nullopt;
  }

  detail::Alts<Document> finish_docs(detail::Alts<Document> body,
                                     const std::vector<std::string_view>& ok) {
    detail::Alts<Document> out;
    for (auto& alt : body)
      if (auto end = finish(alt.next, ok))
        out.push_back({std::move(alt.value), *end, alt.penalty, alt.prob});
    detail::cap(out);
    return out;
  }

  void collect(std::vector<ParseResult>& out, int rule, detail::Alts<Document> alts) {
    for (auto& a : alts) out.push_back(ParseResult{std::move(a.value), a.penalty, a.prob, rule});
  }

  struct DepthGuard {
    explicit DepthGuard(Parser* p) : p_(p) { ++p_->depth_; }
    ~DepthGuard() { --p_->depth_; }
    bool ok() const { return p_->depth_ < detail::kMaxDepth; }
    Parser* p_;
  };

  // ----- emission helpers -----

  static Node word_node(std::string_view w) {
    return Node::leaf("word", detail::display_word(w));
  }

  static void add_affix_leaves(Node& noun, const AffixValue& a) {
    noun.children.push_back(Node::leaf("numb", set_text(a.number)));
    noun.children.push_back(Node::leaf("pers", set_text(a.person)));
    noun.children.push_back(Node::leaf("case", set_text(a.case_)));
  }

  Node make_adv_node(const LexEntry& head, std::string_view text) {
    Node adv = Node::elem("adv");
    AdvType t = head.adv_type.value_or(AdvType::way);
    adv.children.push_back(Node::leaf("type", std::string(to_string(t))));
    adv.children.push_back(Node::leaf("word", detail::display_word(text)));
    return adv;
  }

  Node make_adv_circum(const LexEntry& head, std::string_view text) {
    Node c = Node::elem("circum");
    c.children.push_back(Node::leaf("circum_type", "adv"));
    c.children.push_back(make_adv_node(head, text));
    return c;
  }

  static void set_case_text(std::vector<Node>& np_nodes, CaseSet c) {
    for (Node& n : np_nodes) {
      Node* noun = &n;
      if (n.tag == "part" && !n.children.empty()) noun = &n.children.front();
      for (Node& ch : noun->children)
        if (ch.tag == "case") ch.children = {Node::txt(set_text(c))};
    }
  }

  static void attach_postmod(NpFrag& frag, Node postmod) {
    if (frag.nodes.empty()) return;
    // Attach to the last part's noun element.
    Node* target = nullptr;
    for (Node& n : frag.nodes)
      if (n.tag == "noun" || n.tag == "part") target = &n;
    if (!target) return;
    if (target->tag == "part" && !target->children.empty())
      target = &target->children.front();
    target->children.push_back(std::move(postmod));
  }

  struct VpBuild {
    std::string verb_type = "verb";
    std::string tense_text;
    bool finite = true;
    NumberSet numb;
    PersonSet pers;
    std::vector<std::string> verb_words;
    std::optional<std::string> kernel_tense;
    std::vector<Node> complements;
    std::vector<Node> mid_circs;
    std::vector<Node> post_circs;
    bool passive = false;
    bool gap_used = false;
  };

  struct AttachOut {
    std::string particle;
    std::vector<Node> nodes;
    bool gap_used = false;
  };

  // Verb-phrase children: verb_type, tense, agreement, verb words, kernel
  // form, complements, then circumstances. Mid circumstances precede the
  // empty <circum></circum> marker; post circumstances follow it.
  static Node build_vp_node(const VpBuild& b, std::string tag = "verb_phrase") {
    Node vp = Node::elem(std::move(tag));
    vp.children.push_back(Node::leaf("verb_type", b.verb_type));
    vp.children.push_back(Node::leaf("tense", b.tense_text));
    if (b.finite) {
      vp.children.push_back(Node::leaf("numb", set_text(b.numb)));
      vp.children.push_back(Node::leaf("pers", set_text(b.pers)));
    }
    for (const std::string& w : b.verb_words)
      vp.children.push_back(Node::leaf("verb_word", w));
    if (b.kernel_tense) vp.children.push_back(Node::leaf("kernel_tense", *b.kernel_tense));
    for (const Node& n : b.complements) vp.children.push_back(n);
    for (const Node& n : b.mid_circs) vp.children.push_back(n);
    vp.children.push_back(Node::elem("circum"));
    for (const Node& n : b.post_circs) vp.children.push_back(n);
    return vp;
  }

  // ----- noun phrases -----

  struct PartFrag {
    Node node;  // <noun>
    AffixValue affixes;
    bool query = false;
    std::string query_word;
  };

  detail::Alts<PartFrag> noun_part(std::size_t pos, const NpOpts& opts) {
    DepthGuard guard(this);
    detail::Alts<PartFrag> out;
    if (!guard.ok()) return out;

    struct Lead {
      std::vector<Node> nodes;
      std::size_t next;
      AffixValue constraint;
      double prob;
      bool has_det;
    };
    std::vector<Lead> leads;
    leads.push_back({{}, pos, AffixValue{}, 1.0, false});
    // Collect determiner/premodifier prefixes; each prefix length is an
    // alternative so a demonstrative can still be its own kernel.
    for (std::size_t guard_len = 0; guard_len < 8; ++guard_len) {
      Lead cur = leads.back();
      std::size_t p = cur.next;
      bool extended = false;
      for (const LexEntry* e : entries_at(p)) {
        if ((e->category == Category::article || e->category == Category::demonstrative) &&
            !cur.has_det && cur.nodes.empty()) {
          Lead next = cur;
          next.nodes.push_back(word_node(word_at(p)));
          next.constraint.number = next.constraint.number.intersect(e->affixes.number);
          next.prob *= e->probability;
          next.next = p + 1;
          next.has_det = true;
          if (!next.constraint.number.empty()) {
            leads.push_back(next);
            extended = true;
          }
          break;
        }
        if ((e->category == Category::adjective_attr ||
             e->category == Category::adjective_normal) &&
            !cur.nodes.empty()) {
          Grade g = e->affixes.grade.single() ? e->affixes.grade.values()[0] : Grade::absolute;
          if (g == Grade::predicative) continue;
          Node adj = Node::elem("adj");
          adj.children.push_back(Node::leaf("grade", std::string(to_string(g))));
          adj.children.push_back(Node::leaf("word", detail::display_word(word_at(p))));
          Lead next = cur;
          next.nodes.push_back(std::move(adj));
          next.prob *= e->probability;
          next.next = p + 1;
          leads.push_back(next);
          extended = true;
          break;
        }
        if (e->category == Category::noun && !cur.nodes.empty() &&
            has_category(p + 1, Category::noun)) {
          // Attributive noun premodifier ("girl friend").
          Lead next = cur;
          next.nodes.push_back(word_node(word_at(p)));
          next.prob *= e->probability;
          next.next = p + 1;
          leads.push_back(next);
          extended = true;
          break;
        }
        if (e->category == Category::number_word && !cur.nodes.empty() &&
            has_category(p + 1, Category::noun)) {
          Lead next = cur;
          next.nodes.push_back(word_node(word_at(p)));
          next.constraint.number = next.constraint.number.intersect(e->affixes.number);
          next.prob *= e->probability;
          next.next = p + 1;
          if (!next.constraint.number.empty()) {
            leads.push_back(next);
            extended = true;
          }
          break;
        }
      }
      if (!extended) break;
    }

    // Longest premodifier chain first.
    for (auto it = leads.rbegin(); it != leads.rend(); ++it) {
      const Lead& lead = *it;
      std::size_t p = lead.next;
      for (const LexEntry* e : entries_at(p)) {
        std::string kernel_type;
        bool is_query = false;
        if (e->category == Category::noun)
          kernel_type = "noun";
        else if (e->category == Category::perspronoun && lead.nodes.empty())
          kernel_type = "perspronoun";
        else if (e->category == Category::number_word)
          kernel_type = "number";
        else if (e->category == Category::demonstrative && lead.nodes.empty())
          kernel_type = "noun";
        else if (e->category == Category::query_pronoun && opts.allow_query &&
                 lead.nodes.empty()) {
          kernel_type = "querypronoun";
          is_query = true;
        } else
          continue;
        if (opts.query_only && !is_query) continue;
        AffixValue affixes = e->affixes;
        affixes.number = affixes.number.intersect(lead.constraint.number);
        affixes.case_ = affixes.case_.intersect(opts.required_case);
        affixes.tense = TenseSet::full();
        affixes.grade = GradeSet::full();
        if (affixes.number.empty() || affixes.case_.empty()) continue;

        Node noun = Node::elem("noun");
        noun.children.push_back(Node::leaf("type", kernel_type));
        for (const Node& n : lead.nodes) noun.children.push_back(n);
        noun.children.push_back(word_node(word_at(p)));
        add_affix_leaves(noun, affixes);

        PartFrag base{std::move(noun), affixes, is_query, std::string(word_at(p))};
        emit_with_postmods(out, std::move(base), p + 1, lead.prob * e->probability, opts);
        if (out.size() >= detail::kMaxAlternatives) return out;
      }
    }

    // Query determiner + noun kernel ("which book", "what book").
    if (opts.allow_query) {
      const LexEntry* q = entry_of(pos, Category::query_pronoun);
      if (q) {
        for (const LexEntry* e : entries_at(pos + 1)) {
          if (e->category != Category::noun) continue;
          AffixValue affixes = e->affixes;
          affixes.case_ = affixes.case_.intersect(opts.required_case);
          affixes.tense = TenseSet::full();
          affixes.grade = GradeSet::full();
          if (affixes.case_.empty()) continue;
          Node noun = Node::elem("noun");
          noun.children.push_back(Node::leaf("type", "noun"));
          noun.children.push_back(word_node(word_at(pos)));
          noun.children.push_back(word_node(word_at(pos + 1)));
          add_affix_leaves(noun, affixes);
          PartFrag base{std::move(noun), affixes, true, std::string(word_at(pos))};
          emit_with_postmods(out, std::move(base), pos + 2, q->probability * e->probability,
                             opts);
        }
      }
    }
    detail::cap(out);
    return out;
  }

  void emit_with_postmods(detail::Alts<PartFrag>& out, PartFrag base, std::size_t p,
                          double prob, const NpOpts& opts) {
    // Longest attachment first: prepositional phrases, then an optional
    // relative clause.
    struct State {
      PartFrag frag;
      std::size_t next;
      double prob;
      int penalty;
    };
    std::vector<State> states{{base, p, prob, 0}};
    const Node* kernel_type = base.node.find("type");
    bool open_kernel =
        kernel_type && kernel_type->inner_text() != "perspronoun" && !base.query;
    if (opts.allow_pp && open_kernel) {
      for (int i = 0; i < 3; ++i) {
        State cur = states.back();
        auto pps = prep_phrase(cur.next);
        if (pps.empty()) break;
        State next = cur;
        next.frag.node.children.push_back(pps.front().value);
        next.next = pps.front().next;
        next.prob *= pps.front().prob;
        next.penalty += pps.front().penalty;
        states.push_back(std::move(next));
      }
    }
    for (auto it = states.rbegin(); it != states.rend(); ++it) {
      if (opts.allow_rel && open_kernel) {
        for (auto& rel : relative_clause(it->next, it->frag.affixes.number)) {
          State with = *it;
          with.frag.node.children.push_back(rel.value);
          out.push_back({with.frag, rel.next, with.penalty + rel.penalty, with.prob * rel.prob});
        }
      }
      out.push_back({it->frag, it->next, it->penalty, it->prob});
    }
  }

 public:
  // Coordinated noun phrase: parts joined by connectors; emits <part>
  // wrappers only when more than one part is present, with the connector
  // after all parts. "both"/"neither" resolve number and person; otherwise
  // coordination takes plural with the lowest person.
  detail::Alts<NpFrag> noun_phrase_impl(std::size_t pos, const NpOpts& opts) {
    DepthGuard guard(this);
    detail::Alts<NpFrag> out;
    if (!guard.ok()) return out;

    auto as_np = [](const PartFrag& p) {
      NpFrag f;
      f.nodes = {p.node};
      f.affixes = p.affixes;
      f.query = p.query;
      f.query_word = p.query_word;
      return f;
    };

    std::string_view lead = word_at(pos);
    bool correl = opts.allow_coord && (lead == "both" || lead == "neither") &&
                  has_category(pos, Category::conjunction);
    if (correl) {
      std::string_view mate = lead == "both" ? "and" : "nor";
      for (auto& a : noun_part(pos + 1, opts)) {
        if (word_at(a.next) != mate) continue;
        for (auto& b : noun_part(a.next + 1, opts)) {
          NpFrag f;
          f.nodes.push_back(Node::elem("part", {a.value.node}));
          f.nodes.push_back(Node::elem("part", {b.value.node}));
          f.nodes.push_back(
              Node::leaf("part_connector", lead == "both" ? "both_and" : "neither_nor"));
          f.affixes = coord_affixes(lead == "both" ? "both_and" : "neither_nor",
                                    {a.value.affixes, b.value.affixes});
          if (f.affixes.case_.intersect(opts.required_case).empty()) continue;
          f.affixes.case_ = f.affixes.case_.intersect(opts.required_case);
          out.push_back({std::move(f), b.next, a.penalty + b.penalty, a.prob * b.prob});
        }
      }
      detail::cap(out);
      return out;
    }

    for (auto& first : noun_part(pos, opts)) {
      // Plain coordination "A and B" (kept to two or more parts with a
      // final and/or connector).
      if (opts.allow_coord && !first.value.query &&
          (word_at(first.next) == "and" || word_at(first.next) == "or") &&
          has_category(first.next, Category::conjunction)) {
        std::string conn(word_at(first.next));
        for (auto& second : noun_part(first.next + 1, opts)) {
          if (second.value.query) continue;
          NpFrag f;
          f.nodes.push_back(Node::elem("part", {first.value.node}));
          f.nodes.push_back(Node::elem("part", {second.value.node}));
          f.nodes.push_back(Node::leaf("part_connector", conn));
          f.affixes = coord_affixes(conn, {first.value.affixes, second.value.affixes});
          if (f.affixes.case_.intersect(opts.required_case).empty()) continue;
          f.affixes.case_ = f.affixes.case_.intersect(opts.required_case);
          out.push_back(
              {std::move(f), second.next, first.penalty + second.penalty,
               first.prob * second.prob});
        }
      }
      out.push_back({as_np(first.value), first.next, first.penalty, first.prob});
    }
    detail::cap(out);
    return out;
  }

 private:
  static AffixValue coord_affixes(std::string_view connector,
                                  std::initializer_list<AffixValue> parts) {
    AffixValue out;
    const AffixValue* last = nullptr;
    for (const AffixValue& p : parts) last = &p;
    if (connector == "neither_nor" || connector == "or") {
      out = *last;  // agreement with the nearer part
      return out;
    }
    // and / both_and: plural, lowest person, intersected case
    out.number = NumberSet::of(Number::plur);
    Person lowest = Person::third;
    CaseSet cs = CaseSet::full();
    for (const AffixValue& p : parts) {
      if (p.person.contains(Person::first)) lowest = Person::first;
      else if (p.person.contains(Person::second) && lowest != Person::first)
        lowest = Person::second;
      cs = cs.intersect(p.case_);
    }
    out.person = PersonSet::of(lowest);
    out.case_ = cs.empty() ? CaseSet::full() : cs;
    return out;
  }

  // ----- subordinate clauses -----

  detail::Alts<std::string> subordinator_head(std::size_t pos) {
    detail::Alts<std::string> out;
    const LexEntry* e = entry_of(pos, Category::subordinator);
    if (!e) return out;
    // "when ever" style two-token subordinators join into one label.
    if (word_at(pos + 1) == "ever" &&
        (word_at(pos) == "when" || word_at(pos) == "where" || word_at(pos) == "how")) {
      out.push_back({std::string(word_at(pos)) + "ever", pos + 2, 0, e->probability});
      return out;
    }
    out.push_back({std::string(word_at(pos)), pos + 1, 0, e->probability});
    return out;
  }

  struct SubClause {
    std::string subordinator;
    Node sub;  // <sub> wrapping the clause body
  };

  detail::Alts<SubClause> sub_clause(std::size_t pos) {
    DepthGuard guard(this);
    detail::Alts<SubClause> out;
    if (!guard.ok()) return out;
    for (auto& head : subordinator_head(pos)) {
      SimpleOpts opts;
      opts.allow_clause_subject = false;
      for (auto& body : simple_statement(head.next, opts)) {
        // "whether S or not" carries the discontinuous subordinator.
        std::string label = head.value;
        std::size_t next = body.next;
        if (label == "whether" && word_at(next) == "or" && word_at(next + 1) == "not") {
          label = "whether or not";
          next += 2;
        }
        Node sub = Node::elem("sub", body.value.nodes);
        out.push_back({SubClause{label, std::move(sub)}, next, head.penalty + body.penalty,
                       head.prob * body.prob});
      }
    }
    detail::cap(out);
    return out;
  }

  // ----- sentence bodies -----

  struct SentenceBody {
    Complexity complexity = Complexity::simple;
    std::optional<SubClause> sub;
    bool sub_trailing = false;
    std::vector<SimpleFrag> parts;
    std::string connector;  // and / or / but / yet / either_or / neither_nor
  };

  Document assemble_sentence(Mood mood, const SentenceBody& b) {
    Document doc;
    doc.roots.push_back(Node::leaf("mood", std::string(to_string(mood))));
    doc.roots.push_back(Node::leaf("complexity", std::string(to_string(b.complexity))));
    bool passive = false;
    for (const SimpleFrag& p : b.parts) passive = passive || p.passive;
    if (passive) doc.roots.push_back(Node::leaf("voice", "passive"));
    auto emit_sub = [&] {
      doc.roots.push_back(Node::leaf("subordinator", b.sub->subordinator));
      doc.roots.push_back(b.sub->sub);
    };
    if (b.sub && !b.sub_trailing) emit_sub();
    if (b.complexity == Complexity::simple || b.complexity == Complexity::complex) {
      for (const Node& n : b.parts.front().nodes) doc.roots.push_back(n);
    } else {
      std::string wrapper =
          b.complexity == Complexity::compound ? "simple_sentence" : "complete_sentence";
      for (const SimpleFrag& p : b.parts) doc.roots.push_back(Node::elem(wrapper, p.nodes));
      doc.roots.push_back(Node::leaf("sentence_connector", b.connector));
    }
    if (b.sub && b.sub_trailing) emit_sub();
    return doc;
  }

  using PartParser = detail::Alts<SimpleFrag> (Parser::*)(std::size_t);

  detail::Alts<SimpleFrag> statement_part(std::size_t pos) {
    return simple_statement(pos, SimpleOpts{});
  }

  detail::Alts<SimpleFrag> order_part(std::size_t pos) { return simple_order(pos); }

  detail::Alts<SimpleFrag> question_part(std::size_t pos) { return simple_question(pos); }

  struct ListBody {
    std::vector<SimpleFrag> parts;
    std::string connector;
  };

  // P ("," P)* [","] (and|or) P  — the final part carries the conjunction.
  detail::Alts<ListBody> and_or_list(std::size_t pos, PartParser part) {
    DepthGuard guard(this);
    detail::Alts<ListBody> out;
    if (!guard.ok()) return out;
    struct Pending {
      std::vector<SimpleFrag> parts;
      std::size_t next;
      int penalty;
      double prob;
    };
    std::vector<Pending> frontier;
    for (auto& first : (this->*part)(pos))
      frontier.push_back({{first.value}, first.next, first.penalty, first.prob});
    for (int depth = 0; depth < 8 && !frontier.empty(); ++depth) {
      std::vector<Pending> next_frontier;
      for (Pending& cur : frontier) {
        std::size_t p = cur.next;
        bool comma = word_at(p) == ",";
        std::size_t q = comma ? p + 1 : p;
        std::string_view conn = word_at(q);
        if ((conn == "and" || conn == "or") && has_category(q, Category::conjunction)) {
          for (auto& last : (this->*part)(q + 1)) {
            ListBody body{cur.parts, std::string(conn)};
            body.parts.push_back(last.value);
            out.push_back({std::move(body), last.next, cur.penalty + last.penalty,
                           cur.prob * last.prob});
          }
        }
        if (comma) {
          for (auto& mid : (this->*part)(p + 1)) {
            Pending n = cur;
            n.parts.push_back(mid.value);
            n.next = mid.next;
            n.penalty += mid.penalty;
            n.prob *= mid.prob;
            next_frontier.push_back(std::move(n));
          }
        }
      }
      frontier = std::move(next_frontier);
      if (frontier.size() > detail::kMaxAlternatives) frontier.resize(detail::kMaxAlternatives);
    }
    detail::cap(out);
    return out;
  }

  // "but"-style pairs plus the correlative either/neither forms; the second
  // conjunct of "neither ... nor" is aux-inverted.
  detail::Alts<ListBody> two_simple(std::size_t pos, PartParser part, bool allow_but,
                                    bool allow_correl) {
    DepthGuard guard(this);
    detail::Alts<ListBody> out;
    if (!guard.ok()) return out;
    if (allow_correl && word_at(pos) == "neither" && has_category(pos, Category::conjunction)) {
      for (auto& a : (this->*part)(pos + 1)) {
        std::size_t p = a.next;
        if (word_at(p) == ",") ++p;
        if (word_at(p) != "nor") continue;
        for (auto& b : inverted_clause(p + 1, GapMode::none, {}, false)) {
          ListBody body{{a.value, b.value}, "neither_nor"};
          out.push_back({std::move(body), b.next, a.penalty + b.penalty, a.prob * b.prob});
        }
      }
    }
    if (allow_correl && word_at(pos) == "either" && has_category(pos, Category::conjunction)) {
      for (auto& a : (this->*part)(pos + 1)) {
        std::size_t p = a.next;
        if (word_at(p) == ",") ++p;
        if (word_at(p) != "or") continue;
        for (auto& b : (this->*part)(p + 1)) {
          ListBody body{{a.value, b.value}, "either_or"};
          out.push_back({std::move(body), b.next, a.penalty + b.penalty, a.prob * b.prob});
        }
      }
    }
    if (allow_but) {
      for (auto& a : (this->*part)(pos)) {
        if (word_at(a.next) != ",") continue;
        std::string_view conn = word_at(a.next + 1);
        if (conn != "but" && conn != "yet") continue;
        if (!has_category(a.next + 1, Category::conjunction)) continue;
        for (auto& b : (this->*part)(a.next + 2)) {
          ListBody body{{a.value, b.value}, std::string(conn)};
          out.push_back({std::move(body), b.next, a.penalty + b.penalty, a.prob * b.prob});
        }
      }
    }
    detail::cap(out);
    return out;
  }

  // Statement / order bodies share the max-matching ladder:
  // compound complex, compound, complex, simple.
  detail::Alts<Document> statement_body(std::size_t pos, Mood mood) {
    PartParser part =
        mood == Mood::order ? &Parser::order_part : &Parser::statement_part;
    std::vector<std::string_view> final_punct;
    if (mood == Mood::order)
      final_punct = {"!", "."};
    else
      final_punct = {"."};

    auto complete = [&](detail::Alts<Document>& docs, const SentenceBody& body,
                        std::size_t next, int pen, double prob) {
      std::size_t p = next;
      if (mood == Mood::order && word_at(p) == "please") ++p;
      if (finish(p, final_punct))
        docs.push_back({assemble_sentence(mood, body), next, pen, prob});
    };

    // compound complex: subordinate clause + and-or list
    detail::Alts<Document> docs;
    for (auto& sub : sub_clause(pos)) {
      std::size_t p = sub.next;
      if (word_at(p) == ",") ++p;
      for (auto& list : and_or_list(p, part)) {
        SentenceBody body;
        body.complexity = Complexity::compound_complex;
        body.sub = sub.value;
        body.parts = list.value.parts;
        body.connector = list.value.connector;
        complete(docs, body, list.next, sub.penalty + list.penalty, sub.prob * list.prob);
      }
    }
    if (!docs.empty()) return docs;

    // compound
    for (auto& list : and_or_list(pos, part)) {
      SentenceBody body;
      body.complexity = Complexity::compound;
      body.parts = list.value.parts;
      body.connector = list.value.connector;
      complete(docs, body, list.next, list.penalty, list.prob);
    }
    for (auto& pair : two_simple(pos, part, true, true)) {
      SentenceBody body;
      body.complexity = Complexity::compound;
      body.parts = pair.value.parts;
      body.connector = pair.value.connector;
      complete(docs, body, pair.next, pair.penalty, pair.prob);
    }
    if (!docs.empty()) return docs;

    // complex: leading or trailing subordinate clause
    for (auto& sub : sub_clause(pos)) {
      std::size_t p = sub.next;
      if (word_at(p) == ",") ++p;
      for (auto& main : (this->*part)(p)) {
        SentenceBody body;
        body.complexity = Complexity::complex;
        body.sub = sub.value;
        body.parts = {main.value};
        complete(docs, body, main.next, sub.penalty + main.penalty, sub.prob * main.prob);
      }
    }
    for (auto& main : (this->*part)(pos)) {
      std::size_t p = main.next;
      if (word_at(p) == ",") ++p;
      for (auto& sub : sub_clause(p)) {
        SentenceBody body;
        body.complexity = Complexity::complex;
        body.sub = sub.value;
        body.sub_trailing = true;
        body.parts = {main.value};
        complete(docs, body, sub.next, main.penalty + sub.penalty, main.prob * sub.prob);
      }
    }
    if (!docs.empty()) return docs;

    // simple
    for (auto& main : (this->*part)(pos)) {
      SentenceBody body;
      body.complexity = Complexity::simple;
      body.parts = {main.value};
      complete(docs, body, main.next, main.penalty, main.prob);
    }
    return docs;
  }

  // Questions ladder: compound (and-or only), complex, simple.
  detail::Alts<Document> question_body(std::size_t pos) {
    auto complete = [&](detail::Alts<Document>& docs, const SentenceBody& body,
                        std::size_t next, int pen, double prob) {
      if (finish(next, {"?"}))
        docs.push_back({assemble_sentence(Mood::question, body), next, pen, prob});
    };

    detail::Alts<Document> docs;
    for (auto& list : and_or_list(pos, &Parser::question_part)) {
      SentenceBody body;
      body.complexity = Complexity::compound;
      body.parts = list.value.parts;
      body.connector = list.value.connector;
      complete(docs, body, list.next, list.penalty, list.prob);
    }
    if (!docs.empty()) return docs;

    for (auto& sub : sub_clause(pos)) {
      std::size_t p = sub.next;
      if (word_at(p) == ",") ++p;
      for (auto& main : simple_question(p)) {
        SentenceBody body;
        body.complexity = Complexity::complex;
        body.sub = sub.value;
        body.parts = {main.value};
        complete(docs, body, main.next, sub.penalty + main.penalty, sub.prob * main.prob);
      }
    }
    for (auto& main : simple_question(pos)) {
      std::size_t p = main.next;
      if (word_at(p) == ",") ++p;
      for (auto& sub : sub_clause(p)) {
        SentenceBody body;
        body.complexity = Complexity::complex;
        body.sub = sub.value;
        body.sub_trailing = true;
        body.parts = {main.value};
        complete(docs, body, sub.next, main.penalty + sub.penalty, main.prob * sub.prob);
      }
    }
    if (!docs.empty()) return docs;

    for (auto& main : simple_question(pos)) {
      SentenceBody body;
      body.complexity = Complexity::simple;
      body.parts = {main.value};
      complete(docs, body, main.next, main.penalty, main.prob);
    }
    return docs;
  }

  detail::Alts<Document> order_body(std::size_t pos) {
    return statement_body(pos, Mood::order);
  }

  // ----- simple sentences -----

 public:
  detail::Alts<SimpleFrag> simple_statement_impl(std::size_t pos, const SimpleOpts& opts) {
    DepthGuard guard(this);
    detail::Alts<SimpleFrag> out;
    if (!guard.ok()) return out;

    struct Pre {
      std::vector<Node> circs;
      std::size_t next;
      double prob;
      int penalty;
    };
    std::vector<Pre> pres{{std::vector<Node>{}, pos, 1.0, 0}};
    if (opts.allow_pre_circs) {
      for (int i = 0; i < 3; ++i) {
        Pre cur = pres.back();
        auto circs = circumstance(cur.next, CircPosition::pre);
        if (circs.empty()) break;
        Pre next = cur;
        next.circs.push_back(circs.front().value);
        next.next = circs.front().next;
        next.prob *= circs.front().prob;
        next.penalty += circs.front().penalty;
        pres.push_back(std::move(next));
      }
    }

    for (auto it = pres.rbegin(); it != pres.rend(); ++it) {
      const Pre& pre = *it;
      std::size_t p = pre.next;

      // There-be: "there" as virtual subject, real subject as nominal
      // predicate of the verb phrase.
      if (opts.allow_there_be && opts.vp.gap == GapMode::none && word_at(p) == "there") {
        for (const LexEntry* be : entries_at(p + 1)) {
          if (be->category != Category::be) continue;
          if (!(be->affixes.tense.contains(Tense::present) ||
                be->affixes.tense.contains(Tense::past)))
            continue;
          bool negated = false;
          std::string be_word(word_at(p + 1));
          std::size_t q = p + 2;
          if (auto found = detail::neg_contractions().find(be_word);
              found != detail::neg_contractions().end()) {
            negated = true;
            be_word = found->second + " not";
          } else if (word_at(q) == "not") {
            negated = true;
            be_word += " not";
            ++q;
          }
          NpOpts np_opts;
          np_opts.allow_pp = false;
          np_opts.allow_rel = false;
          np_opts.required_case = CaseSet::of(Case::nom);
          for (auto& real : noun_phrase(q, np_opts)) {
            auto unified = unify(be->affixes, real.value.affixes);
            if (!unified) continue;
            VpBuild b;
            b.verb_type = "be";
            b.tense_text = be->affixes.tense.contains(Tense::present) ? "present" : "past";
            b.numb = unified->number;
            b.pers = unified->person;
            b.verb_words = {be_word};
            Node pred = Node::elem("predicate");
            pred.children.push_back(Node::leaf("predicate_type", "np"));
            for (const Node& n : real.value.nodes) pred.children.push_back(n);
            b.complements.push_back(std::move(pred));
            for (auto& posts : post_circumstances(real.next)) {
              VpBuild full = b;
              full.post_circs = posts.value;
              SimpleFrag frag;
              frag.nodes = pre.circs;
              Node subj = Node::elem("subject");
              subj.children.push_back(Node::elem("noun", {word_node("there")}));
              frag.nodes.push_back(std::move(subj));
              frag.nodes.push_back(build_vp_node(full));
              out.push_back({std::move(frag), posts.next,
                             pre.penalty + real.penalty + posts.penalty,
                             pre.prob * be->probability * real.prob * posts.prob});
            }
          }
        }
      }

      // Ordinary subject + verb phrase with agreement.
      NpOpts np_opts;
      np_opts.required_case = CaseSet::of(Case::nom);
      for (auto& subj : noun_phrase(p, np_opts)) {
        for (auto& vp : finite_verb_phrase(subj.next, subj.value.affixes, opts.vp)) {
          SimpleFrag frag;
          frag.nodes = pre.circs;
          Node s = Node::elem("subject");
          for (const Node& n : subj.value.nodes) s.children.push_back(n);
          frag.nodes.push_back(std::move(s));
          frag.nodes.push_back(vp.value.node);
          frag.passive = vp.value.passive;
          out.push_back({std::move(frag), vp.next, pre.penalty + subj.penalty + vp.penalty,
                         pre.prob * subj.prob * vp.prob});
        }
      }

      // Noun clause as real subject (dispreferred: penalty 10).
      if (opts.allow_clause_subject) {
        for (auto& clause : noun_clause(p, false)) {
          AffixValue clause_affixes;
          clause_affixes.number = NumberSet::of(Number::sing);
          clause_affixes.person = PersonSet::of(Person::third);
          for (auto& vp : finite_verb_phrase(clause.next, clause_affixes, opts.vp)) {
            SimpleFrag frag;
            frag.nodes = pre.circs;
            Node s = Node::elem("subject");
            s.children.push_back(clause.value);
            frag.nodes.push_back(std::move(s));
            frag.nodes.push_back(vp.value.node);
            frag.passive = vp.value.passive;
            out.push_back({std::move(frag), vp.next,
                           pre.penalty + clause.penalty + vp.penalty + 10,
                           pre.prob * clause.prob * vp.prob});
          }
        }
      }
      if (!out.empty()) break;  // shorter pre-circumstance splits only as fallback
    }
    detail::cap(out);
    return out;
  }

 private:
  detail::Alts<SimpleFrag> simple_order(std::size_t pos) {
    DepthGuard guard(this);
    detail::Alts<SimpleFrag> out;
    if (!guard.ok()) return out;
    std::size_t p = pos;
    if (word_at(p) == "please") ++p;
    VpOpts opts;
    opts.imperative = true;
    AffixValue subj;
    subj.person = PersonSet::of(Person::second);
    for (auto& vp : finite_verb_phrase(p, subj, opts)) {
      SimpleFrag frag;
      frag.nodes.push_back(vp.value.node);
      frag.passive = vp.value.passive;
      out.push_back({std::move(frag), vp.next, vp.penalty, vp.prob});
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<SimpleFrag> simple_question(std::size_t pos) {
    DepthGuard guard(this);
    detail::Alts<SimpleFrag> out;
    if (!guard.ok()) return out;

    // Query noun phrase first: object gap or subject reading.
    NpOpts qopts;
    qopts.allow_query = true;
    qopts.query_only = true;
    for (auto& qnp : noun_phrase(pos, qopts)) {
      bool prefer_io = qnp.value.query_word == "who" || qnp.value.query_word == "whom";
      // gap reading: the fronted phrase fills an object role
      if (qnp.value.affixes.case_.contains(Case::dat)) {
        std::vector<Node> placed = qnp.value.nodes;
        set_case_text(placed, CaseSet::of(Case::dat));
        for (auto& inv : inverted_clause(qnp.next, GapMode::place, placed, prefer_io))
          out.push_back({inv.value, inv.next, qnp.penalty + inv.penalty, qnp.prob * inv.prob});
      }
      // subject reading: "Who is coming ...?"
      if (qnp.value.affixes.case_.contains(Case::nom)) {
        AffixValue subj = qnp.value.affixes;
        subj.case_ = CaseSet::of(Case::nom);
        for (auto& vp : finite_verb_phrase(qnp.next, subj, VpOpts{})) {
          SimpleFrag frag;
          Node s = Node::elem("subject");
          std::vector<Node> nodes = qnp.value.nodes;
          set_case_text(nodes, CaseSet::of(Case::nom));
          for (Node& n : nodes) s.children.push_back(std::move(n));
          frag.nodes.push_back(std::move(s));
          frag.nodes.push_back(vp.value.node);
          frag.passive = vp.value.passive;
          out.push_back({std::move(frag), vp.next, qnp.penalty + vp.penalty,
                         qnp.prob * vp.prob});
        }
      }
    }

    // Query adverb + inverted clause ("How can the room be cleaned ...?").
    if (const LexEntry* adv = entry_of(pos, Category::query_adverb)) {
      for (auto& inv : inverted_clause(pos + 1, GapMode::none, {}, false)) {
        SimpleFrag frag = inv.value;
        // The queried circumstance joins the verb phrase's post list.
        if (!frag.nodes.empty() && frag.nodes.back().tag == "verb_phrase")
          frag.nodes.back().children.push_back(make_adv_circum(*adv, word_at(pos)));
        out.push_back({std::move(frag), inv.next, inv.penalty, inv.prob * adv->probability});
      }
    }

    // Yes/no question: bare inverted clause.
    for (auto& inv : inverted_clause(pos, GapMode::none, {}, false))
      out.push_back({inv.value, inv.next, inv.penalty, inv.prob});

    detail::cap(out);
    return out;
  }

  // ----- full exclamations -----

  detail::Alts<Document> full_exclamation_body(std::size_t pos) {
    DepthGuard guard(this);
    detail::Alts<Document> out;
    if (!guard.ok()) return out;
    auto push_doc = [&](SimpleFrag frag, std::size_t next, int pen, double prob) {
      SentenceBody body;
      body.complexity = Complexity::simple;
      body.parts = {std::move(frag)};
      out.push_back({assemble_sentence(Mood::full_exclamation, body), next, pen, prob});
    };

    if (word_at(pos) == "what") {
      NpOpts opts;
      for (auto& np : noun_phrase(pos + 1, opts)) {
        // Emphasized noun predicate: "What a rainy day it is!"
        NpOpts subj_opts;
        subj_opts.required_case = CaseSet::of(Case::nom);
        for (auto& subj : noun_phrase(np.next, subj_opts)) {
          for (auto& vp : be_with_predicate(subj.next, subj.value.affixes, np.value)) {
            SimpleFrag frag;
            Node s = Node::elem("subject");
            for (const Node& n : subj.value.nodes) s.children.push_back(n);
            frag.nodes.push_back(std::move(s));
            frag.nodes.push_back(vp.value.node);
            push_doc(std::move(frag), vp.next, np.penalty + subj.penalty + vp.penalty,
                     np.prob * subj.prob * vp.prob);
          }
        }
        // Emphasized subject: "What a good book has been lost by him!"
        if (np.value.affixes.case_.contains(Case::nom)) {
          AffixValue subj_affixes = np.value.affixes;
          subj_affixes.case_ = CaseSet::of(Case::nom);
          for (auto& vp : finite_verb_phrase(np.next, subj_affixes, VpOpts{})) {
            SimpleFrag frag;
            Node s = Node::elem("subject");
            std::vector<Node> nodes = np.value.nodes;
            set_case_text(nodes, CaseSet::of(Case::nom));
            for (Node& n : nodes) s.children.push_back(std::move(n));
            frag.nodes.push_back(std::move(s));
            frag.nodes.push_back(vp.value.node);
            frag.passive = vp.value.passive;
            push_doc(std::move(frag), vp.next, np.penalty + vp.penalty, np.prob * vp.prob);
          }
        }
      }
    }

    if (word_at(pos) == "how") {
      // Emphasized adjective predicate: "How beautiful she is!"
      for (auto& adj : adjective_part(pos + 1, AdjPosition::predicate)) {
        NpOpts subj_opts;
        subj_opts.required_case = CaseSet::of(Case::nom);
        for (auto& subj : noun_phrase(adj.next, subj_opts)) {
          for (const LexEntry* be : entries_at(subj.next)) {
            if (be->category != Category::be) continue;
            if (!(be->affixes.tense.contains(Tense::present) ||
                  be->affixes.tense.contains(Tense::past)))
              continue;
            auto unified = unify(be->affixes, subj.value.affixes);
            if (!unified) continue;
            VpBuild b;
            b.verb_type = "be";
            b.tense_text = be->affixes.tense.contains(Tense::present) ? "present" : "past";
            b.numb = unified->number;
            b.pers = unified->person;
            b.verb_words = {std::string(word_at(subj.next))};
            Node pred = Node::elem("predicate");
            pred.children.push_back(Node::leaf("predicate_type", "adj"));
            pred.children.push_back(adj.value);
            b.complements.push_back(std::move(pred));
            SimpleFrag frag;
            Node s = Node::elem("subject");
            for (const Node& n : subj.value.nodes) s.children.push_back(n);
            frag.nodes.push_back(std::move(s));
            frag.nodes.push_back(build_vp_node(b));
            push_doc(std::move(frag), subj.next + 1, adj.penalty + subj.penalty,
                     adj.prob * subj.prob * be->probability);
          }
        }
      }
      // Emphasized adverb: "How completely the room is cleaned!"
      for (const LexEntry* adv : entries_at(pos + 1)) {
        if (adv->category != Category::adverb) continue;
        NpOpts subj_opts;
        subj_opts.required_case = CaseSet::of(Case::nom);
        for (auto& subj : noun_phrase(pos + 2, subj_opts)) {
          for (auto& vp : finite_verb_phrase(subj.next, subj.value.affixes, VpOpts{})) {
            SimpleFrag frag;
            Node s = Node::elem("subject");
            for (const Node& n : subj.value.nodes) s.children.push_back(n);
            frag.nodes.push_back(std::move(s));
            Node vp_node = vp.value.node;
            vp_node.children.push_back(make_adv_circum(*adv, word_at(pos + 1)));
            frag.nodes.push_back(std::move(vp_node));
            frag.passive = vp.value.passive;
            push_doc(std::move(frag), vp.next, subj.penalty + vp.penalty,
                     adv->probability * subj.prob * vp.prob);
          }
        }
      }
    }
    detail::cap(out);
    return out;
  }

  // "be" + parsed-ahead noun predicate, used by the what-exclamation.
  detail::Alts<VpFrag> be_with_predicate(std::size_t pos, const AffixValue& subj,
                                         const NpFrag& predicate_np) {
    detail::Alts<VpFrag> out;
    for (const LexEntry* be : entries_at(pos)) {
      if (be->category != Category::be) continue;
      if (!(be->affixes.tense.contains(Tense::present) ||
            be->affixes.tense.contains(Tense::past)))
        continue;
      auto unified = unify(be->affixes, subj);
      if (!unified) continue;
      VpBuild b;
      b.verb_type = "be";
      b.tense_text = be->affixes.tense.contains(Tense::present) ? "present" : "past";
      b.numb = unified->number;
      b.pers = unified->person;
      b.verb_words = {std::string(word_at(pos))};
      Node pred = Node::elem("predicate");
      pred.children.push_back(Node::leaf("predicate_type", "np"));
      std::vector<Node> nodes = predicate_np.nodes;
      set_case_text(nodes, CaseSet::of(Case::nom));
      for (Node& n : nodes) pred.children.push_back(std::move(n));
      b.complements.push_back(std::move(pred));
      out.push_back({VpFrag{build_vp_node(b), false, false}, pos + 1, 0, be->probability});
    }
    return out;
  }

  // ----- inverted clauses (questions, "nor do I go") -----

  detail::Alts<SimpleFrag> inverted_clause(std::size_t pos, GapMode gap,
                                           std::vector<Node> gap_nodes, bool prefer_io) {
    DepthGuard guard(this);
    detail::Alts<SimpleFrag> out;
    if (!guard.ok()) return out;
    for (const LexEntry* aux : entries_at(pos)) {
      bool is_be = aux->category == Category::be &&
                   (aux->affixes.tense.contains(Tense::present) ||
                    aux->affixes.tense.contains(Tense::past));
      bool is_aux = aux->category == Category::modal;
      if (!is_be && !is_aux) continue;
      bool negated = false;
      std::string aux_word(word_at(pos));
      if (auto found = detail::neg_contractions().find(aux_word);
          found != detail::neg_contractions().end()) {
        negated = true;
        aux_word = found->second + " not";
      }
      NpOpts subj_opts;
      subj_opts.required_case = CaseSet::of(Case::nom);
      for (auto& subj : noun_phrase(pos + 1, subj_opts)) {
        auto unified = unify(aux->affixes, subj.value.affixes);
        if (!unified) continue;
        std::size_t q = subj.next;
        bool neg_here = negated;
        std::string head_word = aux_word;
        if (!neg_here && word_at(q) == "not") {
          neg_here = true;
          head_word += " not";
          ++q;
        }
        VpOpts vp_opts;
        vp_opts.gap = gap;
        vp_opts.gap_nodes = gap_nodes;
        vp_opts.prefer_io_gap = prefer_io;
        detail::Alts<VpBuild> tails;
        if (is_be)
          tails = tail_be(*aux, q, vp_opts);
        else if (aux->lemma == "do")
          tails = tail_do(*aux, q, vp_opts);
        else if (aux->lemma == "have")
          tails = tail_have(*aux, q, vp_opts);
        else
          tails = tail_modal(*aux, q, vp_opts);
        for (auto& tail : tails) {
          if (gap != GapMode::none && !tail.value.gap_used) continue;
          VpBuild b = tail.value;
          b.numb = unified->number;
          b.pers = unified->person;
          b.verb_words.insert(b.verb_words.begin(), head_word);
          SimpleFrag frag;
          Node s = Node::elem("subject");
          for (const Node& n : subj.value.nodes) s.children.push_back(n);
          frag.nodes.push_back(std::move(s));
          frag.nodes.push_back(build_vp_node(b));
          frag.passive = b.passive;
          out.push_back({std::move(frag), tail.next, subj.penalty + tail.penalty,
                         aux->probability * subj.prob * tail.prob});
        }
      }
    }
    detail::cap(out);
    return out;
  }

  // ----- verb phrases -----

 public:
  detail::Alts<VpFrag> finite_verb_phrase_impl(std::size_t pos, const AffixValue& subject,
                                               const VpOpts& opts) {
    DepthGuard guard(this);
    detail::Alts<VpFrag> out;
    if (!guard.ok()) return out;

    detail::Alts<VpFrag> singles = single_verb_phrase(pos, subject, opts);
    if (opts.allow_multipart && opts.gap == GapMode::none) {
      for (auto& first : singles) {
        std::string_view conn = word_at(first.next);
        if ((conn != "and" && conn != "or" && conn != "but") ||
            !has_category(first.next, Category::conjunction))
          continue;
        VpOpts rest = opts;
        rest.allow_multipart = false;
        for (auto& second : single_verb_phrase(first.next + 1, subject, rest)) {
          Node vp = Node::elem("verb_phrase");
          Node p1 = first.value.node;
          p1.tag = "verb_phrase_part";
          Node p2 = second.value.node;
          p2.tag = "verb_phrase_part";
          vp.children.push_back(std::move(p1));
          vp.children.push_back(Node::leaf("verb_phrase_connector", std::string(conn)));
          vp.children.push_back(std::move(p2));
          out.push_back({VpFrag{std::move(vp), first.value.passive || second.value.passive,
                                false},
                         second.next, first.penalty + second.penalty,
                         first.prob * second.prob});
        }
      }
    }
    for (auto& s : singles) out.push_back(std::move(s));
    detail::cap(out);
    return out;
  }

 private:
  detail::Alts<VpFrag> single_verb_phrase(std::size_t pos, const AffixValue& subject,
                                          const VpOpts& opts) {
    detail::Alts<VpFrag> out;

    struct Mid {
      std::vector<Node> circs;
      std::size_t next;
      double prob;
    };
    std::vector<Mid> mids{{std::vector<Node>{}, pos, 1.0}};
    for (int i = 0; i < 2; ++i) {
      Mid cur = mids.back();
      const LexEntry* adv = mid_adverb_at(cur.next);
      if (!adv) break;
      Mid next = cur;
      next.circs.push_back(make_adv_circum(*adv, word_at(cur.next)));
      next.next = cur.next + 1;
      next.prob *= adv->probability;
      mids.push_back(std::move(next));
    }

    for (auto it = mids.rbegin(); it != mids.rend(); ++it) {
      const Mid& mid = *it;
      std::size_t p = mid.next;
      for (const LexEntry* head : entries_at(p)) {
        // imperative: base-form lexical kernels only
        if (opts.imperative) {
          if (head->category != Category::verb || !is_base_form(*head)) continue;
          saw_verb_head_ = true;
          for (auto& att : attachments(*head, p + 1, opts)) {
            emit_active_vp(out, subject, *head, std::string(word_at(p)), att, mid.circs,
                           "present", false, opts);
          }
          continue;
        }
        bool neg = false;
        std::string head_word(word_at(p));
        std::size_t q = p + 1;
        if (auto found = detail::neg_contractions().find(head_word);
            found != detail::neg_contractions().end()) {
          neg = true;
          head_word = found->second + " not";
        } else if ((head->category == Category::modal ||
                    head->category == Category::be) &&
                   word_at(q) == "not") {
          neg = true;
          head_word += " not";
          ++q;
        }
        if (head->category == Category::verb &&
            (head->affixes.tense.contains(Tense::present) ||
             head->affixes.tense.contains(Tense::past)) &&
            !neg) {
          auto unified = unify(head->affixes, subject);
          if (!unified) continue;
          saw_verb_head_ = true;
          for (auto& att : attachments(*head, q, opts)) {
            emit_active_vp(out, *unified, *head, head_word, att, mid.circs,
                           std::string(to_string(head->affixes.tense.contains(Tense::present)
                                                     ? Tense::present
                                                     : Tense::past)),
                           true, opts);
          }
        } else if (head->category == Category::be &&
                   (head->affixes.tense.contains(Tense::present) ||
                    head->affixes.tense.contains(Tense::past))) {
          auto unified = unify(head->affixes, subject);
          if (!unified) continue;
          saw_verb_head_ = true;
          for (auto& tail : tail_be(*head, q, opts))
            finish_vp(out, *unified, head_word, tail, mid.circs, head->probability, opts);
        } else if (head->category == Category::modal) {
          auto unified = unify(head->affixes, subject);
          if (!unified) continue;
          saw_verb_head_ = true;
          detail::Alts<VpBuild> tails;
          if (head->lemma == "do")
            tails = tail_do(*head, q, opts);
          else if (head->lemma == "have")
            tails = tail_have(*head, q, opts);
          else
            tails = tail_modal(*head, q, opts);
          for (auto& tail : tails)
            finish_vp(out, *unified, head_word, tail, mid.circs, head->probability, opts);
        }
      }
      if (!out.empty()) break;  // greedy mid-adverb attachment
    }
    detail::cap(out);
    return out;
  }

  const LexEntry* mid_adverb_at(std::size_t p) {
    for (const LexEntry* e : entries_at(p))
      if (e->category == Category::adverb && e->adv_type != AdvType::degree) return e;
    return nullptr;
  }

  static bool is_base_form(const LexEntry& e) {
    return e.affixes.tense.contains(Tense::present) && e.affixes.person.contains(Person::first);
  }

  void emit_active_vp(detail::Alts<VpFrag>& out, const AffixValue& agreed, const LexEntry& verb,
                      const std::string& head_word, detail::Alt<AttachOut>& att,
                      const std::vector<Node>& mid_circs, std::string tense_text,
                      bool is_lexical, const VpOpts& opts) {
    if (opts.gap != GapMode::none && !att.value.gap_used) return;
    for (auto& posts : post_circumstances(att.next)) {
      VpBuild b;
      b.tense_text = tense_text;
      b.numb = agreed.number;
      b.pers = agreed.person;
      std::string w = head_word;
      if (!att.value.particle.empty()) w += " " + att.value.particle;
      b.verb_words = {w};
      b.complements = att.value.nodes;
      b.mid_circs = mid_circs;
      b.post_circs = posts.value;
      b.gap_used = att.value.gap_used;
      (void)is_lexical;
      out.push_back({VpFrag{build_vp_node(b), false, b.gap_used}, posts.next,
                     att.penalty + posts.penalty,
                     verb.probability * att.prob * posts.prob});
    }
  }

  void finish_vp(detail::Alts<VpFrag>& out, const AffixValue& agreed,
                 const std::string& head_word, detail::Alt<VpBuild>& tail,
                 const std::vector<Node>& mid_circs, double head_prob, const VpOpts& opts) {
    if (opts.gap != GapMode::none && !tail.value.gap_used) return;
    VpBuild b = tail.value;
    b.numb = agreed.number;
    b.pers = agreed.person;
    b.verb_words.insert(b.verb_words.begin(), head_word);
    std::vector<Node> mids = mid_circs;
    for (const Node& n : b.mid_circs) mids.push_back(n);
    b.mid_circs = std::move(mids);
    out.push_back({VpFrag{build_vp_node(b), b.passive, b.gap_used}, tail.next, tail.penalty,
                   head_prob * tail.prob});
  }

  // Continuation after a finite "be": progressive, passive, or predicate.
  // A successful progressive or passive suppresses the be+predicate
  // reading of the same participle (max-matching).
  detail::Alts<VpBuild> tail_be(const LexEntry& be, std::size_t pos, const VpOpts& opts) {
    detail::Alts<VpBuild> out;
    bool present = be.affixes.tense.contains(Tense::present);

    std::vector<Node> mid_circs;
    std::size_t p = pos;
    if (const LexEntry* adv = mid_adverb_at(p)) {
      mid_circs.push_back(make_adv_circum(*adv, word_at(p)));
      ++p;
    }

    for (const LexEntry* kernel : entries_at(p)) {
      if (kernel->category != Category::verb) continue;
      if (kernel->affixes.tense.contains(Tense::present_participle)) {
        for (auto& att : attachments(*kernel, p + 1, opts)) {
          for (auto& posts : post_circumstances(att.next)) {
            VpBuild b;
            b.tense_text = present ? "present progressive" : "past progressive";
            std::string w(word_at(p));
            if (!att.value.particle.empty()) w += " " + att.value.particle;
            b.verb_words = {w};
            b.kernel_tense = "present participle";
            b.complements = att.value.nodes;
            b.mid_circs = mid_circs;
            b.post_circs = posts.value;
            b.gap_used = att.value.gap_used;
            out.push_back({std::move(b), posts.next, att.penalty + posts.penalty,
                           kernel->probability * att.prob * posts.prob});
          }
        }
      }
      if (kernel->affixes.tense.contains(Tense::past_participle)) {
        for (auto& att : passive_attachments(*kernel, p + 1, opts)) {
          for (auto& posts : post_circumstances(att.next)) {
            VpBuild b;
            b.tense_text = present ? "present" : "past";
            std::string w(word_at(p));
            if (!att.value.particle.empty()) w += " " + att.value.particle;
            b.verb_words = {w};
            b.kernel_tense = "past participle";
            b.complements = att.value.nodes;
            b.mid_circs = mid_circs;
            b.post_circs = posts.value;
            b.passive = true;
            b.gap_used = att.value.gap_used;
            out.push_back({std::move(b), posts.next, att.penalty + posts.penalty,
                           kernel->probability * att.prob * posts.prob});
          }
        }
      }
    }
    if (!out.empty()) return out;

    if (opts.gap == GapMode::none) {
      for (auto& pred : predicate_phrase(p)) {
        for (auto& posts : post_circumstances(pred.next)) {
          VpBuild b;
          b.verb_type = "be";
          b.tense_text = present ? "present" : "past";
          b.complements = {pred.value};
          b.mid_circs = mid_circs;
          b.post_circs = posts.value;
          out.push_back({std::move(b), posts.next, pred.penalty + posts.penalty,
                         pred.prob * posts.prob});
        }
      }
    }
    return out;
  }

  detail::Alts<VpBuild> tail_modal(const LexEntry& modal, std::size_t pos, const VpOpts& opts) {
    (void)modal;
    detail::Alts<VpBuild> out;
    std::vector<Node> mid_circs;
    std::size_t p = pos;
    if (const LexEntry* adv = mid_adverb_at(p)) {
      mid_circs.push_back(make_adv_circum(*adv, word_at(p)));
      ++p;
    }
    // modal + be + past participle (passive) or + predicate
    for (const LexEntry* be : entries_at(p)) {
      if (be->category != Category::be || !be->affixes.tense.contains(Tense::infinitive))
        continue;
      bool saw_passive = false;
      for (const LexEntry* kernel : entries_at(p + 1)) {
        if (kernel->category != Category::verb ||
            !kernel->affixes.tense.contains(Tense::past_participle))
          continue;
        for (auto& att : passive_attachments(*kernel, p + 2, opts)) {
          for (auto& posts : post_circumstances(att.next)) {
            VpBuild b;
            b.tense_text = "modal";
            b.verb_words = {"be", std::string(word_at(p + 1))};
            b.kernel_tense = "past participle";
            b.complements = att.value.nodes;
            b.mid_circs = mid_circs;
            b.post_circs = posts.value;
            b.passive = true;
            b.gap_used = att.value.gap_used;
            saw_passive = true;
            out.push_back({std::move(b), posts.next, att.penalty + posts.penalty,
                           kernel->probability * att.prob * posts.prob});
          }
        }
      }
      if (!saw_passive && opts.gap == GapMode::none) {
        for (auto& pred : predicate_phrase(p + 1)) {
          for (auto& posts : post_circumstances(pred.next)) {
            VpBuild b;
            b.verb_type = "be";
            b.tense_text = "modal";
            b.verb_words = {"be"};
            b.kernel_tense = "infi";
            b.complements = {pred.value};
            b.mid_circs = mid_circs;
            b.post_circs = posts.value;
            out.push_back({std::move(b), posts.next, pred.penalty + posts.penalty,
                           pred.prob * posts.prob});
          }
        }
      }
    }
    // modal + infinitive kernel
    for (const LexEntry* kernel : entries_at(p)) {
      if (kernel->category != Category::verb || !is_base_form(*kernel)) continue;
      for (auto& att : attachments(*kernel, p + 1, opts)) {
        for (auto& posts : post_circumstances(att.next)) {
          VpBuild b;
          b.tense_text = "modal";
          std::string w(word_at(p));
          if (!att.value.particle.empty()) w += " " + att.value.particle;
          b.verb_words = {w};
          b.kernel_tense = "infi";
          b.complements = att.value.nodes;
          b.mid_circs = mid_circs;
          b.post_circs = posts.value;
          b.gap_used = att.value.gap_used;
          out.push_back({std::move(b), posts.next, att.penalty + posts.penalty,
                         kernel->probability * att.prob * posts.prob});
        }
      }
    }
    return out;
  }

  detail::Alts<VpBuild> tail_do(const LexEntry& do_form, std::size_t pos, const VpOpts& opts) {
    detail::Alts<VpBuild> out;
    std::vector<Node> mid_circs;
    std::size_t p = pos;
    if (const LexEntry* adv = mid_adverb_at(p)) {
      mid_circs.push_back(make_adv_circum(*adv, word_at(p)));
      ++p;
    }
    bool present = do_form.affixes.tense.contains(Tense::present);
    for (const LexEntry* kernel : entries_at(p)) {
      if (kernel->category != Category::verb || !is_base_form(*kernel)) continue;
      for (auto& att : attachments(*kernel, p + 1, opts)) {
        for (auto& posts : post_circumstances(att.next)) {
          VpBuild b;
          b.tense_text = present ? "present" : "past";
          std::string w(word_at(p));
          if (!att.value.particle.empty()) w += " " + att.value.particle;
          b.verb_words = {w};
          b.kernel_tense = "infi";
          b.complements = att.value.nodes;
          b.mid_circs = mid_circs;
          b.post_circs = posts.value;
          b.gap_used = att.value.gap_used;
          out.push_back({std::move(b), posts.next, att.penalty + posts.penalty,
                         kernel->probability * att.prob * posts.prob});
        }
      }
    }
    return out;
  }

  detail::Alts<VpBuild> tail_have(const LexEntry& have_form, std::size_t pos,
                                  const VpOpts& opts) {
    (void)have_form;
    detail::Alts<VpBuild> out;
    std::vector<Node> mid_circs;
    std::size_t p = pos;
    if (const LexEntry* adv = mid_adverb_at(p)) {
      mid_circs.push_back(make_adv_circum(*adv, word_at(p)));
      ++p;
    }
    // have + been + past participle: perfect passive
    for (const LexEntry* been : entries_at(p)) {
      if (been->category != Category::be ||
          !been->affixes.tense.contains(Tense::past_participle))
        continue;
      for (const LexEntry* kernel : entries_at(p + 1)) {
        if (kernel->category != Category::verb ||
            !kernel->affixes.tense.contains(Tense::past_participle))
          continue;
        for (auto& att : passive_attachments(*kernel, p + 2, opts)) {
          for (auto& posts : post_circumstances(att.next)) {
            VpBuild b;
            b.tense_text = "perfect";
            b.verb_words = {std::string(word_at(p)), std::string(word_at(p + 1))};
            b.kernel_tense = "past participle";
            b.complements = att.value.nodes;
            b.mid_circs = mid_circs;
            b.post_circs = posts.value;
            b.passive = true;
            b.gap_used = att.value.gap_used;
            out.push_back({std::move(b), posts.next, att.penalty + posts.penalty,
                           kernel->probability * att.prob * posts.prob});
          }
        }
      }
    }
    // have + past participle: perfect active
    for (const LexEntry* kernel : entries_at(p)) {
      if (kernel->category != Category::verb ||
          !kernel->affixes.tense.contains(Tense::past_participle))
        continue;
      for (auto& att : attachments(*kernel, p + 1, opts)) {
        for (auto& posts : post_circumstances(att.next)) {
          VpBuild b;
          b.tense_text = "perfect";
          std::string w(word_at(p));
          if (!att.value.particle.empty()) w += " " + att.value.particle;
          b.verb_words = {w};
          b.kernel_tense = "past participle";
          b.complements = att.value.nodes;
          b.mid_circs = mid_circs;
          b.post_circs = posts.value;
          b.gap_used = att.value.gap_used;
          out.push_back({std::move(b), posts.next, att.penalty + posts.penalty,
                         kernel->probability * att.prob * posts.prob});
        }
      }
    }
    return out;
  }

  // ----- complements -----

  detail::Alts<AttachOut> attachments(const LexEntry& verb, std::size_t pos,
                                      const VpOpts& opts) {
    DepthGuard guard(this);
    detail::Alts<AttachOut> out;
    if (!guard.ok()) return out;

    struct Start {
      std::string particle;
      std::size_t next;
    };
    std::vector<Start> starts;
    if (verb.frame.particles.count(std::string(word_at(pos))) &&
        has_category(pos, Category::particle))
      starts.push_back({std::string(word_at(pos)), pos + 1});
    starts.push_back({"", pos});

    NpOpts obj_opts;
    obj_opts.required_case = CaseSet::of(Case::dat);

    for (const Start& start : starts) {
      std::size_t p = start.next;
      auto push = [&](std::vector<Node> nodes, std::size_t next, int pen, double prob,
                      bool gap_used) {
        out.push_back(
            {AttachOut{start.particle, std::move(nodes), gap_used}, next, pen, prob});
      };

      if (verb.frame.allows(Attachment::bitrans)) {
        for (auto& io : noun_phrase(p, obj_opts)) {
          if (io.value.query) continue;
          // indirect object + direct object (noun phrase or noun clause)
          for (auto& don : noun_phrase(io.next, obj_opts)) {
            if (don.value.query) continue;
            std::vector<Node> nodes;
            nodes.push_back(Node::elem("indirect_object", io.value.nodes));
            nodes.push_back(Node::elem("direct_object", don.value.nodes));
            push(std::move(nodes), don.next, io.penalty + don.penalty, io.prob * don.prob,
                 false);
          }
          for (auto& clause : noun_clause(io.next, false)) {
            std::vector<Node> nodes;
            nodes.push_back(Node::elem("indirect_object", io.value.nodes));
            nodes.push_back(Node::elem("direct_object", {clause.value}));
            push(std::move(nodes), clause.next, io.penalty + clause.penalty,
                 io.prob * clause.prob, false);
          }
        }
        if (opts.gap != GapMode::none) {
          // one overt object, the other comes from the gap
          auto gap_io = [&](detail::Alts<AttachOut>& sink) {
            for (auto& don : noun_phrase(p, obj_opts)) {
              if (don.value.query) continue;
              std::vector<Node> nodes;
              if (opts.gap == GapMode::place)
                nodes.push_back(Node::elem("indirect_object", opts.gap_nodes));
              nodes.push_back(Node::elem("direct_object", don.value.nodes));
              sink.push_back({AttachOut{start.particle, std::move(nodes), true}, don.next,
                              don.penalty, don.prob});
            }
          };
          auto gap_do = [&](detail::Alts<AttachOut>& sink) {
            for (auto& io : noun_phrase(p, obj_opts)) {
              if (io.value.query) continue;
              std::vector<Node> nodes;
              nodes.push_back(Node::elem("indirect_object", io.value.nodes));
              if (opts.gap == GapMode::place)
                nodes.push_back(Node::elem("direct_object", opts.gap_nodes));
              sink.push_back({AttachOut{start.particle, std::move(nodes), true}, io.next,
                              io.penalty, io.prob});
            }
            // bare gap: "What did you give?"
            std::vector<Node> nodes;
            if (opts.gap == GapMode::place)
              nodes.push_back(Node::elem("direct_object", opts.gap_nodes));
            sink.push_back({AttachOut{start.particle, std::move(nodes), true}, p, 0, 1.0});
          };
          if (opts.prefer_io_gap) {
            gap_io(out);
            gap_do(out);
          } else {
            gap_do(out);
            gap_io(out);
          }
        }
      }

      if (verb.frame.allows(Attachment::obj_bare_inf)) {
        for (auto& obj : noun_phrase(p, obj_opts)) {
          if (obj.value.query) continue;
          for (auto& clause : nonfinite_clause(obj.next, Tense::infinitive, false)) {
            std::vector<Node> nodes;
            nodes.push_back(Node::elem("direct_object", obj.value.nodes));
            nodes.push_back(Node::elem("noun_clause", {clause.value}));
            push(std::move(nodes), clause.next, obj.penalty + clause.penalty,
                 obj.prob * clause.prob, false);
          }
        }
      }

      if (verb.frame.allows(Attachment::obj_pastpart)) {
        for (auto& obj : noun_phrase(p, obj_opts)) {
          if (obj.value.query) continue;
          for (auto& clause : nonfinite_clause(obj.next, Tense::past_participle, true)) {
            std::vector<Node> nodes;
            nodes.push_back(Node::elem("direct_object", obj.value.nodes));
            nodes.push_back(Node::elem("noun_clause", {clause.value}));
            push(std::move(nodes), clause.next, obj.penalty + clause.penalty,
                 obj.prob * clause.prob, false);
          }
        }
      }

      if (verb.frame.allows(Attachment::part_obj) && !start.particle.empty()) {
        for (auto& obj : noun_phrase(p, obj_opts)) {
          if (obj.value.query) continue;
          std::vector<Node> nodes;
          nodes.push_back(Node::elem("direct_object", obj.value.nodes));
          push(std::move(nodes), obj.next, obj.penalty, obj.prob, false);
        }
      }

      if (verb.frame.allows(Attachment::part_prep) && !verb.frame.complement_preps.empty()) {
        for (auto& pp : prep_phrase(p, &verb.frame.complement_preps)) {
          std::vector<Node> nodes{pp.value};
          push(std::move(nodes), pp.next, pp.penalty, pp.prob, false);
        }
      }

      if (verb.frame.allows(Attachment::trans)) {
        if (opts.gap == GapMode::none) {
          for (auto& obj : noun_phrase(p, obj_opts)) {
            if (obj.value.query) continue;
            std::vector<Node> nodes;
            nodes.push_back(Node::elem("direct_object", obj.value.nodes));
            push(std::move(nodes), obj.next, obj.penalty, obj.prob, false);
          }
          for (auto& clause : noun_clause(p, true)) {
            std::vector<Node> nodes;
            nodes.push_back(Node::elem("direct_object", {clause.value}));
            push(std::move(nodes), clause.next, clause.penalty, clause.prob, false);
          }
        } else {
          std::vector<Node> nodes;
          if (opts.gap == GapMode::place)
            nodes.push_back(Node::elem("direct_object", opts.gap_nodes));
          push(std::move(nodes), p, 0, 1.0, true);
        }
      }

      if (verb.frame.allows(Attachment::inf_clause)) {
        for (auto& clause : nonfinite_clause(p, Tense::infinitive, true)) {
          std::vector<Node> nodes;
          nodes.push_back(Node::elem("noun_clause", {clause.value}));
          push(std::move(nodes), clause.next, clause.penalty, clause.prob, false);
        }
      }

      if (verb.frame.allows(Attachment::intr)) push({}, p, 0, 1.0, false);
    }
    detail::cap(out);
    return out;
  }

  // Complements that survive passivization: the unpromoted object of a
  // bitransitive, a raised to-infinitive, then the agent by-phrase.
  detail::Alts<AttachOut> passive_attachments(const LexEntry& verb, std::size_t pos,
                                              const VpOpts& opts) {
    DepthGuard guard(this);
    detail::Alts<AttachOut> out;
    if (!guard.ok()) return out;
    (void)opts;
    struct Stage {
      std::vector<Node> nodes;
      std::size_t next;
      double prob;
      int penalty;
    };
    std::vector<Stage> stages{{std::vector<Node>{}, pos, 1.0, 0}};

    if (verb.frame.allows(Attachment::bitrans)) {
      NpOpts obj_opts;
      obj_opts.required_case = CaseSet::of(Case::dat);
      std::vector<Stage> more;
      for (const Stage& s : stages)
        for (auto& io : noun_phrase(s.next, obj_opts)) {
          if (io.value.query) continue;
          Stage n = s;
          n.nodes.push_back(Node::elem("indirect_object", io.value.nodes));
          n.next = io.next;
          n.prob *= io.prob;
          n.penalty += io.penalty;
          more.push_back(std::move(n));
        }
      for (Stage& s : more) stages.insert(stages.begin(), std::move(s));
    }
    if (verb.frame.allows(Attachment::obj_bare_inf)) {
      std::vector<Stage> more;
      for (const Stage& s : stages)
        for (auto& clause : nonfinite_clause(s.next, Tense::infinitive, true)) {
          Stage n = s;
          n.nodes.push_back(Node::elem("noun_clause", {clause.value}));
          n.next = clause.next;
          n.prob *= clause.prob;
          n.penalty += clause.penalty;
          more.push_back(std::move(n));
        }
      for (Stage& s : more) stages.insert(stages.begin(), std::move(s));
    }
    // agent
    std::vector<Stage> with_agent;
    static const std::set<std::string> kBy = {"by"};
    for (const Stage& s : stages)
      for (auto& pp : prep_phrase(s.next, &kBy)) {
        Stage n = s;
        n.nodes.push_back(pp.value);
        n.next = pp.next;
        n.prob *= pp.prob;
        n.penalty += pp.penalty;
        with_agent.push_back(std::move(n));
      }
    for (const Stage& s : with_agent)
      out.push_back({AttachOut{"", s.nodes, false}, s.next, s.penalty, s.prob});
    for (const Stage& s : stages)
      out.push_back({AttachOut{"", s.nodes, false}, s.next, s.penalty, s.prob});
    detail::cap(out);
    return out;
  }

  // ----- non-finite clauses -----

  // A verb-phrase clause without a subject: to-infinitive or bare
  // infinitive, gerund, or past participle. The past-participle form may
  // be a single word only as a verb complement, not as a relative clause.
  detail::Alts<Node> nonfinite_clause(std::size_t pos, Tense form, bool to_marker_expected) {
    DepthGuard guard(this);
    detail::Alts<Node> out;
    if (!guard.ok()) return out;
    std::size_t p = pos;
    bool negated = false;
    if (word_at(p) == "not" && form != Tense::past_participle) {
      negated = true;
      ++p;
    }
    std::string marker;
    if (form == Tense::infinitive) {
      if (word_at(p) == "to") {
        marker = "to";
        ++p;
      } else if (to_marker_expected) {
        return out;
      }
    }
    for (const LexEntry* kernel : entries_at(p)) {
      if (kernel->category != Category::verb) continue;
      bool match = false;
      if (form == Tense::infinitive)
        match = is_base_form(*kernel);
      else
        match = kernel->affixes.tense.contains(form);
      if (!match) continue;
      VpOpts opts;
      auto atts = form == Tense::past_participle ? passive_attachments(*kernel, p + 1, opts)
                                                 : attachments(*kernel, p + 1, opts);
      for (auto& att : atts) {
        for (auto& posts : post_circumstances(att.next)) {
          VpBuild b;
          b.finite = false;
          b.tense_text = std::string(to_string(form));
          std::string w;
          if (negated) w += "not ";
          if (!marker.empty()) w += marker + " ";
          w += std::string(word_at(p));
          if (!att.value.particle.empty()) w += " " + att.value.particle;
          b.verb_words = {w};
          b.complements = att.value.nodes;
          b.post_circs = posts.value;
          out.push_back({build_vp_node(b), posts.next, att.penalty + posts.penalty,
                         kernel->probability * att.prob * posts.prob});
        }
      }
    }
    detail::cap(out);
    return out;
  }

  detail::Alts<Node> gerund_clause(std::size_t pos) {
    DepthGuard guard(this);
    detail::Alts<Node> out;
    if (!guard.ok()) return out;
    std::size_t p = pos;
    std::optional<std::string> possessive;
    // possessive gerund: "his doing the job"
    static const std::set<std::string> kPossessives = {"my",  "your", "his", "her",
                                                       "its", "our",  "their"};
    if (entry_of(p, Category::article) && kPossessives.count(std::string(word_at(p)))) {
      possessive = std::string(word_at(p));
      ++p;
    }
    bool negated = false;
    if (word_at(p) == "not") {
      negated = true;
      ++p;
    }
    for (const LexEntry* kernel : entries_at(p)) {
      if (kernel->category != Category::verb ||
          !kernel->affixes.tense.contains(Tense::present_participle))
        continue;
      VpOpts opts;
      for (auto& att : attachments(*kernel, p + 1, opts)) {
        for (auto& posts : post_circumstances(att.next)) {
          VpBuild b;
          b.finite = false;
          b.tense_text = "present participle";
          std::string w;
          if (negated) w += "not ";
          w += std::string(word_at(p));
          if (!att.value.particle.empty()) w += " " + att.value.particle;
          b.verb_words = {w};
          b.complements = att.value.nodes;
          b.post_circs = posts.value;
          Node clause = Node::elem("noun_clause");
          if (possessive) clause.children.push_back(word_node(*possessive));
          clause.children.push_back(build_vp_node(b));
          out.push_back({std::move(clause), posts.next, att.penalty + posts.penalty,
                         kernel->probability * att.prob * posts.prob});
        }
      }
    }
    detail::cap(out);
    return out;
  }

  // ----- noun clauses -----

 public:
  detail::Alts<Node> noun_clause_impl(std::size_t pos, bool allow_bare_finite) {
    DepthGuard guard(this);
    detail::Alts<Node> out;
    if (!guard.ok()) return out;

    auto finite_body = [&](std::size_t p, GapMode gap, std::vector<Node> gap_nodes,
                           bool prefer_io) {
      SimpleOpts opts;
      opts.allow_pre_circs = false;
      opts.allow_clause_subject = false;
      opts.vp.gap = gap;
      opts.vp.gap_nodes = std::move(gap_nodes);
      opts.vp.prefer_io_gap = prefer_io;
      return simple_statement(p, opts);
    };

    std::string_view lead = word_at(pos);

    if (lead == "that" || lead == "whether" ||
        (lead == "if" && has_category(pos, Category::subordinator))) {
      for (auto& body : finite_body(pos + 1, GapMode::none, {}, false)) {
        Node clause = Node::elem("noun_clause");
        clause.children.push_back(word_node(lead));
        for (const Node& n : body.value.nodes) clause.children.push_back(n);
        out.push_back({std::move(clause), body.next, body.penalty, body.prob});
      }
    }

    // Query noun clause: "what he is now saying", "why you say that".
    if (const LexEntry* q = entry_of(pos, Category::query_pronoun)) {
      // query infinitive clause: "what to do"
      for (auto& inf : nonfinite_clause(pos + 1, Tense::infinitive, true)) {
        Node clause = Node::elem("noun_clause");
        clause.children.push_back(word_node(lead));
        clause.children.push_back(inf.value);
        out.push_back({std::move(clause), inf.next, inf.penalty, inf.prob * q->probability});
      }
      for (auto& body : finite_body(pos + 1, GapMode::omit, {}, false)) {
        Node clause = Node::elem("noun_clause");
        clause.children.push_back(word_node(lead));
        for (const Node& n : body.value.nodes) clause.children.push_back(n);
        out.push_back(
            {std::move(clause), body.next, body.penalty, body.prob * q->probability});
      }
      // subject reading: "who comes today" (no gap inside)
      AffixValue subj = q->affixes;
      for (auto& vp : finite_verb_phrase(pos + 1, subj, VpOpts{})) {
        Node clause = Node::elem("noun_clause");
        clause.children.push_back(word_node(lead));
        clause.children.push_back(vp.value.node);
        out.push_back({std::move(clause), vp.next, vp.penalty, vp.prob * q->probability});
      }
    }
    if (const LexEntry* q = entry_of(pos, Category::query_adverb)) {
      for (auto& inf : nonfinite_clause(pos + 1, Tense::infinitive, true)) {
        Node clause = Node::elem("noun_clause");
        clause.children.push_back(word_node(lead));
        clause.children.push_back(inf.value);
        out.push_back({std::move(clause), inf.next, inf.penalty, inf.prob * q->probability});
      }
      for (auto& body : finite_body(pos + 1, GapMode::none, {}, false)) {
        Node clause = Node::elem("noun_clause");
        clause.children.push_back(word_node(lead));
        for (const Node& n : body.value.nodes) clause.children.push_back(n);
        out.push_back(
            {std::move(clause), body.next, body.penalty, body.prob * q->probability});
      }
    }

    // gerund clause (with possessive and negative variants)
    for (auto& g : gerund_clause(pos)) out.push_back(std::move(g));

    // infinitive clause (with negative variant)
    for (auto& inf : nonfinite_clause(pos, Tense::infinitive, true)) {
      Node clause = Node::elem("noun_clause", {inf.value});
      out.push_back({std::move(clause), inf.next, inf.penalty, inf.prob});
    }

    // bare finite clause ("I know he will come tomorrow")
    if (allow_bare_finite) {
      for (auto& body : finite_body(pos, GapMode::none, {}, false)) {
        Node clause = Node::elem("noun_clause", body.value.nodes);
        out.push_back({std::move(clause), body.next, body.penalty, body.prob});
      }
    }
    detail::cap(out);
    return out;
  }

  // ----- relative clauses -----

  detail::Alts<Node> relative_clause_impl(std::size_t pos, NumberSet head_number) {
    DepthGuard guard(this);
    detail::Alts<Node> out;
    if (!guard.ok()) return out;

    std::string_view lead = word_at(pos);
    bool rel_pronoun = (lead == "who" || lead == "whom" || lead == "which" || lead == "that") &&
                       pos < ts_.size();

    auto body_opts = [&](GapMode gap) {
      SimpleOpts opts;
      opts.allow_pre_circs = false;
      opts.allow_clause_subject = false;
      opts.allow_there_be = false;
      opts.vp.gap = gap;
      return opts;
    };

    if (rel_pronoun) {
      // subject gap: relative pronoun + verb phrase agreeing with the head
      AffixValue head;
      head.number = head_number;
      head.person = PersonSet::of(Person::third);
      for (auto& vp : finite_verb_phrase(pos + 1, head, VpOpts{})) {
        Node rel = Node::elem("relative_clause");
        rel.children.push_back(word_node(lead));
        rel.children.push_back(vp.value.node);
        out.push_back({std::move(rel), vp.next, vp.penalty, vp.prob});
      }
      // object gap with overt pronoun
      for (auto& body : simple_statement(pos + 1, body_opts(GapMode::omit))) {
        Node rel = Node::elem("relative_clause");
        rel.children.push_back(word_node(lead));
        for (const Node& n : body.value.nodes) rel.children.push_back(n);
        out.push_back({std::move(rel), body.next, body.penalty, body.prob});
      }
    }

    // bare full form with an object gap: "the book you give me today"
    for (auto& body : simple_statement(pos, body_opts(GapMode::omit))) {
      Node rel = Node::elem("relative_clause", body.value.nodes);
      out.push_back({std::move(rel), body.next, body.penalty, body.prob});
    }

    // terse forms: participle or infinitive clause, at least two tokens
    for (Tense form : {Tense::past_participle, Tense::present_participle}) {
      detail::Alts<Node> clauses =
          form == Tense::present_participle ? gerund_vp_only(pos) : nonfinite_clause(pos, form, true);
      for (auto& c : clauses) {
        if (c.next < pos + 2) continue;
        Node rel = Node::elem("relative_clause", {c.value});
        out.push_back({std::move(rel), c.next, c.penalty, c.prob});
      }
    }
    for (auto& c : nonfinite_clause(pos, Tense::infinitive, true)) {
      if (c.next < pos + 2) continue;
      Node rel = Node::elem("relative_clause", {c.value});
      out.push_back({std::move(rel), c.next, c.penalty, c.prob});
    }
    detail::cap(out);
    return out;
  }

 private:
  // Plain participle verb phrase (no possessive marker) for terse relatives.
  detail::Alts<Node> gerund_vp_only(std::size_t pos) {
    detail::Alts<Node> out;
    for (const LexEntry* kernel : entries_at(pos)) {
      if (kernel->category != Category::verb ||
          !kernel->affixes.tense.contains(Tense::present_participle))
        continue;
      VpOpts opts;
      for (auto& att : attachments(*kernel, pos + 1, opts)) {
        for (auto& posts : post_circumstances(att.next)) {
          VpBuild b;
          b.finite = false;
          b.tense_text = "present participle";
          std::string w(word_at(pos));
          if (!att.value.particle.empty()) w += " " + att.value.particle;
          b.verb_words = {w};
          b.complements = att.value.nodes;
          b.post_circs = posts.value;
          out.push_back({build_vp_node(b), posts.next, att.penalty + posts.penalty,
                         kernel->probability * att.prob * posts.prob});
        }
      }
    }
    return out;
  }

  // ----- predicates -----

 public:
  detail::Alts<Node> predicate_phrase_impl(std::size_t pos) {
    DepthGuard guard(this);
    detail::Alts<Node> out;
    if (!guard.ok()) return out;
    auto wrap = [](std::string_view type, std::vector<Node> payload) {
      Node pred = Node::elem("predicate");
      pred.children.push_back(Node::leaf("predicate_type", std::string(type)));
      for (Node& n : payload) pred.children.push_back(std::move(n));
      return pred;
    };
    NpOpts np_opts;
    np_opts.required_case = CaseSet::of(Case::nom);
    for (auto& np : noun_phrase(pos, np_opts))
      out.push_back({wrap("np", np.value.nodes), np.next, np.penalty, np.prob});
    for (auto& adj : predicate_adjective_phrase(pos))
      out.push_back({wrap("adj", adj.value), adj.next, adj.penalty, adj.prob});
    for (auto& pp : prep_phrase(pos))
      out.push_back({wrap("prep", {pp.value}), pp.next, pp.penalty, pp.prob});
    for (auto& clause : noun_clause(pos, false))
      out.push_back({wrap("clause", {clause.value}), clause.next, clause.penalty, clause.prob});
    detail::cap(out);
    return out;
  }

 private:
  // Predicate adjective phrase: one or more parts with connectors.
  detail::Alts<std::vector<Node>> predicate_adjective_phrase(std::size_t pos) {
    detail::Alts<std::vector<Node>> out;
    for (auto& first : adjective_part(pos, AdjPosition::predicate)) {
      std::string_view conn = word_at(first.next);
      if ((conn == "and" || conn == "or" || conn == "but") &&
          has_category(first.next, Category::conjunction)) {
        for (auto& second : adjective_part(first.next + 1, AdjPosition::predicate)) {
          std::vector<Node> nodes;
          nodes.push_back(Node::elem("part", {first.value}));
          nodes.push_back(Node::elem("part", {second.value}));
          nodes.push_back(Node::leaf("part_connector", std::string(conn)));
          out.push_back({std::move(nodes), second.next, first.penalty + second.penalty,
                         first.prob * second.prob});
        }
      }
      out.push_back({{first.value}, first.next, first.penalty, first.prob});
    }
    detail::cap(out);
    return out;
  }

  // ----- adjective and adverb phrases -----

  struct DegreeLead {
    std::string words;       // joined degree words, e.g. "so"
    std::string result_key;  // so / too / as, for result constructions
    std::size_t next;
    double prob;
  };

  std::vector<DegreeLead> degree_leads(std::size_t pos) {
    std::vector<DegreeLead> out{{"", "", pos, 1.0}};
    std::string_view w = word_at(pos);
    for (const LexEntry* e : entries_at(pos)) {
      if (e->category == Category::adverb && e->adv_type == AdvType::degree &&
          (w == "so" || w == "too" || w == "very" || w == "as")) {
        out.push_back({std::string(w), std::string(w == "very" ? "" : w), pos + 1,
                       e->probability});
        break;
      }
    }
    return out;
  }

  // Optional complements of a graded word: "than" + NP/statement, or a
  // result construction ("so ... that ...", "too ... to ...", "as ... as ...").
  struct GradeComplement {
    std::vector<Node> nodes;
    std::size_t next;
    double prob;
    int penalty;
  };

  std::vector<GradeComplement> grade_complements(std::size_t pos, Grade grade,
                                                 std::string_view result_key) {
    std::vector<GradeComplement> out;
    if (grade == Grade::comparative && word_at(pos) == "than") {
      NpOpts opts;
      for (auto& np : noun_phrase(pos + 1, opts)) {
        for (const Node& n : np.value.nodes)
          out.push_back({{n}, np.next, np.prob, np.penalty});
        break;
      }
      SimpleOpts sopts;
      sopts.allow_pre_circs = false;
      sopts.allow_clause_subject = false;
      for (auto& body : simple_statement(pos + 1, sopts)) {
        Node clause = Node::elem("noun_clause", body.value.nodes);
        out.push_back({{clause}, body.next, body.prob, body.penalty});
        break;
      }
    }
    if (result_key == "so" && word_at(pos) == "that") {
      SimpleOpts sopts;
      sopts.allow_pre_circs = false;
      sopts.allow_clause_subject = false;
      for (auto& body : simple_statement(pos + 1, sopts)) {
        Node clause = Node::elem("noun_clause");
        clause.children.push_back(word_node("that"));
        for (const Node& n : body.value.nodes) clause.children.push_back(n);
        out.push_back({{clause}, body.next, body.prob, body.penalty});
      }
    }
    if ((result_key == "so" || result_key == "as") && word_at(pos) == "as") {
      NpOpts opts;
      for (auto& np : noun_phrase(pos + 1, opts)) {
        for (const Node& n : np.value.nodes)
          out.push_back({{n}, np.next, np.prob, np.penalty});
        break;
      }
    }
    if (result_key == "too") {
      for (auto& inf : nonfinite_clause(pos, Tense::infinitive, true)) {
        Node clause = Node::elem("noun_clause", {inf.value});
        out.push_back({{clause}, inf.next, inf.prob, inf.penalty});
      }
    }
    out.push_back({{}, pos, 1.0, 0});
    return out;
  }

 public:
  detail::Alts<Node> adjective_part_impl(std::size_t pos, AdjPosition position) {
    DepthGuard guard(this);
    detail::Alts<Node> out;
    if (!guard.ok()) return out;
    for (const DegreeLead& lead : degree_leads(pos)) {
      std::size_t p = lead.next;
      for (const LexEntry* e : entries_at(p)) {
        bool adjective = e->category == Category::adjective_attr ||
                         e->category == Category::adjective_pred ||
                         e->category == Category::adjective_normal;
        bool participle = e->category == Category::verb &&
                          (e->affixes.tense.contains(Tense::past_participle) ||
                           e->affixes.tense.contains(Tense::present_participle));
        if (!adjective && !(participle && position == AdjPosition::attribute)) continue;
        if (position == AdjPosition::attribute && e->category == Category::adjective_pred)
          continue;
        if (position == AdjPosition::predicate && e->category == Category::adjective_attr)
          continue;
        Grade lexical =
            e->affixes.grade.single() ? e->affixes.grade.values()[0] : Grade::absolute;
        Grade grade = lexical;
        if (position == AdjPosition::predicate && lexical == Grade::absolute)
          grade = Grade::predicative;
        for (auto& comp :
             grade_complements(p + 1, lexical, lead.result_key)) {
          Node adj = Node::elem("adj");
          adj.children.push_back(Node::leaf("grade", std::string(to_string(grade))));
          std::string w = lead.words.empty() ? std::string(word_at(p))
                                             : lead.words + " " + std::string(word_at(p));
          adj.children.push_back(Node::leaf("word", detail::display_word(w)));
          for (const Node& n : comp.nodes) adj.children.push_back(n);
          out.push_back({std::move(adj), comp.next, comp.penalty,
                         lead.prob * e->probability * comp.prob});
        }
      }
    }
    detail::cap(out);
    return out;
  }

 private:
  // Adverb phrase with optional degree lead and complements; the head may
  // be a plain adverb or a one-syllable adjective doubling as one.
  detail::Alts<Node> adverb_phrase(std::size_t pos, bool allow_complements) {
    detail::Alts<Node> out;
    for (const DegreeLead& lead : degree_leads(pos)) {
      std::size_t p = lead.next;
      for (const LexEntry* e : entries_at(p)) {
        if (e->category != Category::adverb) continue;
        if (e->adv_type == AdvType::degree && lead.words.empty() && word_at(p) != "much")
          continue;  // bare "so"/"very" is not a circumstance by itself
        Grade lexical =
            e->affixes.grade.single() ? e->affixes.grade.values()[0] : Grade::absolute;
        std::vector<GradeComplement> comps =
            allow_complements ? grade_complements(p + 1, lexical, lead.result_key)
                              : std::vector<GradeComplement>{{{}, p + 1, 1.0, 0}};
        for (auto& comp : comps) {
          Node adv = Node::elem("adv");
          AdvType t = e->adv_type.value_or(AdvType::way);
          adv.children.push_back(Node::leaf("type", std::string(to_string(t))));
          std::string w = lead.words.empty() ? std::string(word_at(p))
                                             : lead.words + " " + std::string(word_at(p));
          adv.children.push_back(Node::leaf("word", w));
          for (const Node& n : comp.nodes) adv.children.push_back(n);
          out.push_back({std::move(adv), comp.next, comp.penalty,
                         lead.prob * e->probability * comp.prob});
        }
      }
    }
    detail::cap(out);
    return out;
  }

  // ----- circumstances -----

 public:
  detail::Alts<Node> circumstance_impl(std::size_t pos, CircPosition position) {
    DepthGuard guard(this);
    detail::Alts<Node> out;
    if (!guard.ok()) return out;
    auto wrap = [](std::string_view type, Node payload) {
      Node c = Node::elem("circum");
      c.children.push_back(Node::leaf("circum_type", std::string(type)));
      c.children.push_back(std::move(payload));
      return c;
    };
    bool complements = position == CircPosition::post;
    for (auto& adv : adverb_phrase(pos, complements))
      out.push_back({wrap("adv", adv.value), adv.next, adv.penalty, adv.prob});
    for (auto& pp : prep_phrase(pos))
      out.push_back({wrap("prep", pp.value), pp.next, pp.penalty, pp.prob});
    if (position != CircPosition::mid) {
      for (Tense form : {Tense::present_participle, Tense::past_participle}) {
        detail::Alts<Node> clauses = form == Tense::present_participle
                                         ? gerund_vp_only(pos)
                                         : nonfinite_clause(pos, form, true);
        for (auto& c : clauses) {
          if (c.next < pos + 2) continue;
          out.push_back({wrap("participle", c.value), c.next, c.penalty, c.prob});
        }
      }
    }
    detail::cap(out);
    return out;
  }

 private:
  detail::Alts<std::vector<Node>> post_circumstances(std::size_t pos) {
    DepthGuard guard(this);
    detail::Alts<std::vector<Node>> out;
    if (!guard.ok()) {
      out.push_back({{}, pos, 0, 1.0});
      return out;
    }
    struct Stage {
      std::vector<Node> circs;
      std::size_t next;
      double prob;
      int penalty;
    };
    std::vector<Stage> stages{{std::vector<Node>{}, pos, 1.0, 0}};
    for (int i = 0; i < 3; ++i) {
      const Stage cur = stages.back();
      auto circs = circumstance(cur.next, CircPosition::post);
      if (circs.empty()) break;
      Stage next = cur;
      next.circs.push_back(circs.front().value);
      next.next = circs.front().next;
      next.prob *= circs.front().prob;
      next.penalty += circs.front().penalty;
      stages.push_back(std::move(next));
    }
    for (auto it = stages.rbegin(); it != stages.rend(); ++it)
      out.push_back({it->circs, it->next, it->penalty, it->prob});
    return out;
  }

  // ----- prepositional phrases -----

 public:
  detail::Alts<Node> prep_phrase_impl(std::size_t pos, const std::set<std::string>* allowed) {
    DepthGuard guard(this);
    detail::Alts<Node> out;
    if (!guard.ok()) return out;

    const LexEntry* prep = nullptr;
    std::string prep_text;
    std::size_t after = pos;
    // fixed two-word prepositions first ("out of")
    if (pos + 1 < ts_.size()) {
      std::string joined = std::string(word_at(pos)) + " " + std::string(word_at(pos + 1));
      for (const LexEntry* e : lex_.lookup(joined))
        if (e->category == Category::preposition) {
          prep = e;
          prep_text = joined;
          after = pos + 2;
          break;
        }
    }
    if (!prep) {
      prep = entry_of(pos, Category::preposition);
      prep_text = std::string(word_at(pos));
      after = pos + 1;
    }
    if (!prep) return out;
    if (allowed && !allowed->count(prep_text)) return out;

    NpOpts np_opts;
    np_opts.required_case = CaseSet::of(Case::dat);
    for (auto& np : noun_phrase(after, np_opts)) {
      Node pp = Node::elem("prep_phrase");
      pp.children.push_back(Node::leaf("prep", prep_text));
      for (const Node& n : np.value.nodes) pp.children.push_back(n);
      out.push_back({std::move(pp), np.next, np.penalty, np.prob * prep->probability});
    }
    // gerund or query-infinitive object
    for (auto& g : gerund_clause(after)) {
      Node pp = Node::elem("prep_phrase");
      pp.children.push_back(Node::leaf("prep", prep_text));
      pp.children.push_back(g.value);
      out.push_back({std::move(pp), g.next, g.penalty, g.prob * prep->probability});
    }
    if (has_category(after, Category::query_pronoun) ||
        has_category(after, Category::query_adverb)) {
      for (auto& clause : noun_clause(after, false)) {
        Node pp = Node::elem("prep_phrase");
        pp.children.push_back(Node::leaf("prep", prep_text));
        pp.children.push_back(clause.value);
        out.push_back({std::move(pp), clause.next, clause.penalty,
                       clause.prob * prep->probability});
      }
    }
    detail::cap(out);
    return out;
  }

 private:
  void extend_circ_rule(detail::Alts<Document>& out, std::vector<Node> nodes, std::size_t p,
                        int pen, double prob) {
    if (auto end = finish(p, {"."})) {
      Document doc;
      doc.roots.push_back(Node::leaf("mood", "circumstances"));
      for (const Node& n : nodes) doc.roots.push_back(n);
      out.push_back({std::move(doc), *end, pen + 10, prob});
    }
    for (auto& more : circumstance(p, CircPosition::mid)) {
      std::vector<Node> next = nodes;
      next.push_back(more.value);
      extend_circ_rule(out, std::move(next), more.next, pen + more.penalty, prob * more.prob);
      break;
    }
  }

  const TokenStream& ts_;
  const Lexicon& lex_;
  std::size_t furthest_ = 0;
  int depth_ = 0;
  bool saw_verb_head_ = false;
};

// Out-of-line definitions for the members declared above; kept separate so
// the public surface reads compactly.
inline detail::Alts<Parser::NpFrag> Parser::noun_phrase(std::size_t pos, const NpOpts& opts) {
  return noun_phrase_impl(pos, opts);
}
inline detail::Alts<Node> Parser::relative_clause(std::size_t pos, NumberSet head_number) {
  return relative_clause_impl(pos, head_number);
}
inline detail::Alts<Node> Parser::noun_clause(std::size_t pos, bool allow_bare_finite) {
  return noun_clause_impl(pos, allow_bare_finite);
}
inline detail::Alts<Node> Parser::adjective_part(std::size_t pos, AdjPosition position) {
  return adjective_part_impl(pos, position);
}
inline detail::Alts<Node> Parser::predicate_phrase(std::size_t pos) {
  return predicate_phrase_impl(pos);
}
inline detail::Alts<Node> Parser::prep_phrase(std::size_t pos,
                                              const std::set<std::string>* allowed) {
  return prep_phrase_impl(pos, allowed);
}
inline detail::Alts<Node> Parser::circumstance(std::size_t pos, CircPosition position) {
  return circumstance_impl(pos, position);
}
inline detail::Alts<Parser::VpFrag> Parser::finite_verb_phrase(std::size_t pos,
                                                               const AffixValue& subject,
                                                               const VpOpts& opts) {
  return finite_verb_phrase_impl(pos, subject, opts);
}
inline detail::Alts<Parser::SimpleFrag> Parser::simple_statement(std::size_t pos,
                                                                 const SimpleOpts& opts) {
  return simple_statement_impl(pos, opts);
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

inline Analyses classify_expression(const TokenStream& tokens, const Lexicon& lexicon) {
  if (tokens.empty()) throw NoParseError(0, "");
  Parser parser(tokens, lexicon);
  return parser.classify();
}

namespace detail {

inline NoParseError make_no_parse(const TokenStream& ts, std::size_t furthest) {
  std::string tok = furthest < ts.size() ? ts[furthest].text : "";
  return NoParseError(furthest, tok);
}

inline ParseResult take_rule(const TokenStream& ts, const Lexicon& lex,
                             detail::Alts<Document> (Parser::*rule)(), Mood mood) {
  Parser parser(ts, lex);
  auto alts = (parser.*rule)();
  if (alts.empty()) throw make_no_parse(ts, parser.furthest());
  (void)mood;
  std::stable_sort(alts.begin(), alts.end(), [](const auto& a, const auto& b) {
    if (a.penalty != b.penalty) return a.penalty < b.penalty;
    return a.prob > b.prob;
  });
  return ParseResult{std::move(alts.front().value), alts.front().penalty, alts.front().prob, 0};
}

}  // namespace detail

inline ParseResult parse_statement(const TokenStream& ts, const Lexicon& lex) {
  return detail::take_rule(ts, lex, &Parser::rule_statement, Mood::statement);
}

inline ParseResult parse_question(const TokenStream& ts, const Lexicon& lex) {
  return detail::take_rule(ts, lex, &Parser::rule_question, Mood::question);
}

inline ParseResult parse_order(const TokenStream& ts, const Lexicon& lex) {
  return detail::take_rule(ts, lex, &Parser::rule_order, Mood::order);
}

inline ParseResult parse_exclamation(const TokenStream& ts, const Lexicon& lex) {
  return detail::take_rule(ts, lex, &Parser::rule_full_exclamation, Mood::full_exclamation);
}

// Simple declarative only: mood statement, complexity simple.
inline ParseResult parse_simple_sentence(const TokenStream& ts, const Lexicon& lex) {
  ParseResult r = parse_statement(ts, lex);
  const Node* c = r.document.find("complexity");
  if (!c || c->inner_text() != "simple") throw NoParseError(0, "(not a simple sentence)");
  return r;
}

inline Fragment parse_verb_phrase(const TokenStream& ts, const Lexicon& lex,
                                  const AffixValue& subject_affixes) {
  Parser parser(ts, lex);
  auto alts = parser.finite_verb_phrase(0, subject_affixes, Parser::VpOpts{});
  for (auto& a : alts)
    if (a.next == ts.size()) return Fragment{{std::move(a.value.node)}, a.penalty, a.prob};
  if (parser.saw_verb_head() && parser.furthest() > 0)
    throw UnknownAttachment(ts.empty() ? "" : ts[0].text);
  throw detail::make_no_parse(ts, parser.furthest());
}

inline Fragment parse_noun_phrase(const TokenStream& ts, const Lexicon& lex) {
  Parser parser(ts, lex);
  Parser::NpOpts opts;
  auto alts = parser.noun_phrase(0, opts);
  for (auto& a : alts)
    if (a.next == ts.size()) return Fragment{std::move(a.value.nodes), a.penalty, a.prob};
  throw detail::make_no_parse(ts, parser.furthest());
}

// Absence is an empty fragment, not an error.
inline Fragment parse_relative_clause(const TokenStream& ts, const Lexicon& lex,
                                      NumberSet head_number) {
  if (ts.empty()) return Fragment{};
  Parser parser(ts, lex);
  auto alts = parser.relative_clause(0, head_number);
  for (auto& a : alts)
    if (a.next == ts.size()) return Fragment{{std::move(a.value)}, a.penalty, a.prob};
  throw detail::make_no_parse(ts, parser.furthest());
}

inline Fragment parse_noun_clause(const TokenStream& ts, const Lexicon& lex) {
  Parser parser(ts, lex);
  auto alts = parser.noun_clause(0, true);
  for (auto& a : alts)
    if (a.next == ts.size()) return Fragment{{std::move(a.value)}, a.penalty, a.prob};
  throw detail::make_no_parse(ts, parser.furthest());
}

inline Fragment parse_adjective_phrase(const TokenStream& ts, const Lexicon& lex,
                                       AdjPosition position) {
  Parser parser(ts, lex);
  auto alts = parser.adjective_part(0, position);
  for (auto& a : alts)
    if (a.next == ts.size()) return Fragment{{std::move(a.value)}, a.penalty, a.prob};
  // Position-only failure: the word is an adjective, just not here.
  if (ts.size() == 1) {
    for (const LexEntry* e : lex.lookup(ts[0].text)) {
      if (position == AdjPosition::attribute && e->category == Category::adjective_pred)
        throw PositionViolation(ts[0].text);
      if (position == AdjPosition::predicate && e->category == Category::adjective_attr)
        throw PositionViolation(ts[0].text);
    }
  }
  throw detail::make_no_parse(ts, parser.furthest());
}

inline Fragment parse_circumstance(const TokenStream& ts, const Lexicon& lex,
                                   CircPosition position) {
  if (ts.empty()) return Fragment{{Node::elem("circum")}, 0, 1.0};
  Parser parser(ts, lex);
  auto alts = parser.circumstance(0, position);
  for (auto& a : alts)
    if (a.next == ts.size()) return Fragment{{std::move(a.value)}, a.penalty, a.prob};
  throw detail::make_no_parse(ts, parser.furthest());
}

inline Fragment parse_prep_phrase(const TokenStream& ts, const Lexicon& lex) {
  Parser parser(ts, lex);
  auto alts = parser.prep_phrase(0);
  for (auto& a : alts)
    if (a.next == ts.size()) return Fragment{{std::move(a.value)}, a.penalty, a.prob};
  throw detail::make_no_parse(ts, parser.furthest());
}

inline Fragment parse_predicate(const TokenStream& ts, const Lexicon& lex) {
  Parser parser(ts, lex);
  auto alts = parser.predicate_phrase(0);
  for (auto& a : alts)
    if (a.next == ts.size()) return Fragment{{std::move(a.value)}, a.penalty, a.prob};
  throw detail::make_no_parse(ts, parser.furthest());
}

}  // namespace nlml

#endif  // NLML_PARSER_HPP
