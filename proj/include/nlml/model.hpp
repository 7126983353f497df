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
// The sentence object graph built from NLML documents, with grammar-question
// answering, negation, yes/no mood transformation, and text regeneration.

#ifndef NLML_MODEL_HPP
#define NLML_MODEL_HPP

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlml/lexicon.hpp"
#include "nlml/markup.hpp"
#include "nlml/parser.hpp"

namespace nlml {

class ModelError : public std::runtime_error {
 public:
  ModelError(std::string kind, std::string detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

inline ModelError not_a_sentence(std::string_view mood) {
  return ModelError("NotASentence", "mood '" + std::string(mood) + "' is not a sentence mood");
}
inline ModelError missing_tag(std::string_view tag, std::string_view context) {
  return ModelError("MissingTag", std::string(tag) + " in " + std::string(context));
}
inline ModelError unsupported_mood(std::string_view detail) {
  return ModelError("UnsupportedMood", std::string(detail));
}
inline ModelError unsupported_complexity(std::string_view detail) {
  return ModelError("UnsupportedComplexity", std::string(detail));
}
inline ModelError index_out_of_range(std::size_t index, std::size_t size) {
  return ModelError("IndexOutOfRange", "part " + std::to_string(index) + " of " +
                                           std::to_string(size));
}

// ---------------------------------------------------------------------------
// Model types
// ---------------------------------------------------------------------------

struct NounPartModel {
  std::string kernel_type;        // noun | perspronoun | querypronoun | number
  std::vector<Node> lead;         // <word> and <adj> premodifiers, surface order
  std::string kernel;
  std::string numb, pers, case_;  // serialized affix sets
  std::vector<Node> postmods;     // prep_phrase / relative_clause nodes

  bool operator==(const NounPartModel&) const = default;
};

struct NounPhraseModel {
  std::vector<NounPartModel> parts;
  std::string connector;  // empty | and | or | both_and | neither_nor

  bool operator==(const NounPhraseModel&) const = default;
};

enum class ComplementKind : uint8_t {
  indirect_object,
  direct_object,
  predicate,
  prep_phrase,
  clause,
};

struct Complement {
  ComplementKind kind;
  Node node;  // the complement element as emitted
  bool operator==(const Complement&) const = default;
};

struct VerbPhraseModel {
  std::string verb_type;  // "verb" | "be"
  std::string tense;      // display string
  std::string numb, pers;
  std::vector<std::string> verb_words;
  std::optional<std::string> kernel_tense;
  bool negated = false;
  bool passive = false;
  std::vector<Complement> complements;      // in emitted order
  std::vector<Node> mid_circumstances;      // before the empty circum marker
  std::vector<Node> post_circumstances;

  bool operator==(const VerbPhraseModel&) const = default;
};

enum class SubjectKind : uint8_t { none, there, np, clause };

struct SimpleSentenceModel {
  std::vector<Node> pre_circumstances;
  SubjectKind subject_kind = SubjectKind::none;
  NounPhraseModel subject;  // when subject_kind == np
  Node subject_clause;      // when subject_kind == clause
  std::vector<VerbPhraseModel> verb_phrases;
  std::vector<std::string> vp_connectors;

  bool operator==(const SimpleSentenceModel&) const = default;
};

struct SentenceModel;

struct SubordinateModel {
  std::string subordinator;
  std::shared_ptr<const SentenceModel> clause;
  bool trailing = false;

  bool operator==(const SubordinateModel& o) const;
};

struct SentenceModel {
  Mood mood = Mood::statement;
  Complexity complexity = Complexity::simple;
  bool passive = false;
  std::optional<SubordinateModel> subordinate;
  std::vector<SimpleSentenceModel> parts;
  std::vector<std::string> connectors;  // between consecutive parts; "," admitted

  bool operator==(const SentenceModel&) const = default;
};

inline bool SubordinateModel::operator==(const SubordinateModel& o) const {
  if (subordinator != o.subordinator || trailing != o.trailing) return false;
  if (!clause || !o.clause) return clause == o.clause;
  return *clause == *o.clause;
}

// ---------------------------------------------------------------------------
// Building the model from a document
// ---------------------------------------------------------------------------

namespace model_detail {

inline bool is_be_word(std::string_view w) {
  return w == "be" || w == "been" || w == "am" || w == "is" || w == "are" || w == "was" ||
         w == "were" || w == "being";
}

inline std::string strip_not(std::string_view w) {
  std::string s(w);
  std::size_t p = s.rfind(" not");
  if (p != std::string::npos && p + 4 == s.size()) s.resize(p);
  return s;
}

inline bool contains_not(std::string_view w) {
  return w == "not" || w.size() >= 4 && (w.substr(0, 4) == "not " ||
                                         w.substr(w.size() - 4) == " not" ||
                                         w.find(" not ") != std::string_view::npos);
}

inline VerbPhraseModel build_vp(const Node& vp_node) {
  VerbPhraseModel vp;
  bool seen_circ_marker = false;
  for (const Node& c : vp_node.children) {
    if (c.tag == "verb_type")
      vp.verb_type = c.inner_text();
    else if (c.tag == "tense")
      vp.tense = c.inner_text();
    else if (c.tag == "numb")
      vp.numb = c.inner_text();
    else if (c.tag == "pers")
      vp.pers = c.inner_text();
    else if (c.tag == "verb_word")
      vp.verb_words.push_back(c.inner_text());
    else if (c.tag == "kernel_tense")
      vp.kernel_tense = c.inner_text();
    else if (c.tag == "indirect_object")
      vp.complements.push_back({ComplementKind::indirect_object, c});
    else if (c.tag == "direct_object")
      vp.complements.push_back({ComplementKind::direct_object, c});
    else if (c.tag == "predicate")
      vp.complements.push_back({ComplementKind::predicate, c});
    else if (c.tag == "prep_phrase")
      vp.complements.push_back({ComplementKind::prep_phrase, c});
    else if (c.tag == "noun_clause")
      vp.complements.push_back({ComplementKind::clause, c});
    else if (c.tag == "circum") {
      if (c.children.empty())
        seen_circ_marker = true;
      else if (seen_circ_marker)
        vp.post_circumstances.push_back(c);
      else
        vp.mid_circumstances.push_back(c);
    } else
      throw missing_tag(c.tag, "verb_phrase");
  }
  if (vp.verb_words.empty()) throw missing_tag("verb_word", "verb_phrase");
  if (!seen_circ_marker) {
    // tolerate documents without the marker: everything was post
    vp.post_circumstances = std::move(vp.mid_circumstances);
    vp.mid_circumstances.clear();
  }
  for (const std::string& w : vp.verb_words)
    if (contains_not(w)) vp.negated = true;
  if (vp.kernel_tense == "past participle" && vp.verb_words.size() >= 2)
    vp.passive = is_be_word(strip_not(vp.verb_words[vp.verb_words.size() - 2]));
  return vp;
}

inline NounPartModel build_noun_part(const Node& noun) {
  NounPartModel part;
  std::vector<std::string> words;
  std::vector<Node> lead;
  bool affixes_seen = false;
  for (const Node& c : noun.children) {
    if (c.tag == "type")
      part.kernel_type = c.inner_text();
    else if (c.tag == "word" && !affixes_seen)
      lead.push_back(c);
    else if (c.tag == "adj" && !affixes_seen)
      lead.push_back(c);
    else if (c.tag == "numb") {
      part.numb = c.inner_text();
      affixes_seen = true;
    } else if (c.tag == "pers") {
      part.pers = c.inner_text();
      affixes_seen = true;
    } else if (c.tag == "case") {
      part.case_ = c.inner_text();
      affixes_seen = true;
    } else if (c.tag == "prep_phrase" || c.tag == "relative_clause")
      part.postmods.push_back(c);
    else
      throw missing_tag(c.tag, "noun");
  }
  // last plain word before the affixes is the kernel
  for (auto it = lead.rbegin(); it != lead.rend(); ++it)
    if (it->tag == "word") {
      part.kernel = it->inner_text();
      lead.erase(std::next(it).base());
      break;
    }
  if (part.kernel.empty()) throw missing_tag("word", "noun");
  part.lead = std::move(lead);
  return part;
}

inline NounPhraseModel build_np(const std::vector<Node>& nodes) {
  NounPhraseModel np;
  for (const Node& n : nodes) {
    if (n.tag == "noun")
      np.parts.push_back(build_noun_part(n));
    else if (n.tag == "part") {
      const Node* noun = n.find("noun");
      if (!noun) throw missing_tag("noun", "part");
      np.parts.push_back(build_noun_part(*noun));
    } else if (n.tag == "part_connector")
      np.connector = n.inner_text();
    else if (n.tag == "noun_clause")
      continue;  // handled by the caller
    else
      throw missing_tag(n.tag, "noun phrase");
  }
  if (np.parts.empty()) throw missing_tag("noun", "noun phrase");
  return np;
}

inline SimpleSentenceModel build_simple(const std::vector<Node>& nodes) {
  SimpleSentenceModel s;
  std::size_t i = 0;
  while (i < nodes.size() && nodes[i].tag == "circum") {
    s.pre_circumstances.push_back(nodes[i]);
    ++i;
  }
  if (i < nodes.size() && nodes[i].tag == "subject") {
    const Node& subj = nodes[i];
    if (subj.children.size() == 1 && subj.children[0].tag == "noun_clause") {
      s.subject_kind = SubjectKind::clause;
      s.subject_clause = subj.children[0];
    } else if (subj.children.size() == 1 && subj.children[0].tag == "noun" &&
               subj.children[0].children.size() == 1 &&
               subj.children[0].children[0].tag == "word" &&
               subj.children[0].children[0].inner_text() == "there") {
      s.subject_kind = SubjectKind::there;
    } else {
      s.subject_kind = SubjectKind::np;
      s.subject = build_np(subj.children);
    }
    ++i;
  }
  if (i >= nodes.size() || nodes[i].tag != "verb_phrase")
    throw missing_tag("verb_phrase", "simple sentence");
  const Node& vp = nodes[i];
  bool multipart = vp.find("verb_phrase_part") != nullptr;
  if (multipart) {
    for (const Node& c : vp.children) {
      if (c.tag == "verb_phrase_part")
        s.verb_phrases.push_back(build_vp(c));
      else if (c.tag == "verb_phrase_connector")
        s.vp_connectors.push_back(c.inner_text());
      else
        throw missing_tag(c.tag, "verb_phrase parts");
    }
  } else {
    s.verb_phrases.push_back(build_vp(vp));
  }
  ++i;
  if (i != nodes.size()) throw missing_tag(nodes[i].tag, "simple sentence tail");
  if (s.verb_phrases.empty()) throw missing_tag("verb_phrase", "simple sentence");
  return s;
}

}  // namespace model_detail

// Total mapping from a sentence-mood document to the object graph; every
// element is consumed by exactly one model field.
inline SentenceModel build_model(const Document& doc) {
  SentenceModel m;
  const std::vector<Node>& roots = doc.roots;
  std::size_t i = 0;
  if (roots.empty() || roots[0].tag != "mood") throw missing_tag("mood", "document");
  auto mood = mood_from_string(roots[0].inner_text());
  if (!mood) throw not_a_sentence(roots[0].inner_text());
  m.mood = *mood;
  if (m.mood != Mood::statement && m.mood != Mood::question && m.mood != Mood::order &&
      m.mood != Mood::full_exclamation && m.mood != Mood::subcircum)
    throw not_a_sentence(to_string(m.mood));
  ++i;

  if (m.mood == Mood::subcircum) {
    m.complexity = Complexity::simple;
    if (i >= roots.size() || roots[i].tag != "subordinator")
      throw missing_tag("subordinator", "subcircum document");
    m.subordinate = SubordinateModel{roots[i].inner_text(), nullptr, false};
    ++i;
    std::vector<Node> rest(roots.begin() + long(i), roots.end());
    m.parts.push_back(model_detail::build_simple(rest));
    return m;
  }

  if (i >= roots.size() || roots[i].tag != "complexity")
    throw missing_tag("complexity", "document");
  auto cx = complexity_from_string(roots[i].inner_text());
  if (!cx) throw missing_tag("complexity", "unknown value " + roots[i].inner_text());
  m.complexity = *cx;
  ++i;

  if (i < roots.size() && roots[i].tag == "voice") {
    m.passive = roots[i].inner_text() == "passive";
    ++i;
  }

  auto read_sub = [&](bool trailing) {
    std::string label = roots[i].inner_text();
    ++i;
    if (i >= roots.size() || roots[i].tag != "sub") throw missing_tag("sub", "document");
    auto clause = std::make_shared<SentenceModel>();
    clause->mood = Mood::statement;
    clause->complexity = Complexity::simple;
    clause->parts.push_back(model_detail::build_simple(roots[i].children));
    m.subordinate = SubordinateModel{std::move(label), std::move(clause), trailing};
    ++i;
  };

  if (i < roots.size() && roots[i].tag == "subordinator") read_sub(false);

  if (m.complexity == Complexity::simple || m.complexity == Complexity::complex) {
    std::vector<Node> body;
    while (i < roots.size() && roots[i].tag != "subordinator") body.push_back(roots[i++]);
    m.parts.push_back(model_detail::build_simple(body));
  } else {
    std::string connector;
    while (i < roots.size()) {
      const Node& n = roots[i];
      if (n.tag == "complete_sentence" || n.tag == "simple_sentence") {
        m.parts.push_back(model_detail::build_simple(n.children));
        ++i;
      } else if (n.tag == "sentence_connector") {
        connector = n.inner_text();
        ++i;
      } else
        break;
    }
    if (m.parts.size() < 2) throw missing_tag("complete_sentence", "compound document");
    if (connector.empty()) throw missing_tag("sentence_connector", "compound document");
    for (std::size_t k = 2; k < m.parts.size(); ++k) m.connectors.push_back(",");
    m.connectors.push_back(connector);
  }

  if (i < roots.size() && roots[i].tag == "subordinator") read_sub(true);
  if (i != roots.size()) throw missing_tag(roots[i].tag, "document tail");

  if ((m.complexity == Complexity::complex || m.complexity == Complexity::compound_complex) &&
      !m.subordinate)
    throw missing_tag("subordinator", "complex document");
  return m;
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

namespace model_detail {

inline void node_tokens(const Node& n, std::vector<std::string>& out);

inline void vp_tokens(const VerbPhraseModel& vp, std::vector<std::string>& out,
                      const Node* skip_circ = nullptr) {
  auto words_from = [&](const std::string& w) {
    std::string cur;
    for (char ch : w) {
      if (ch == ' ') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else
        cur += ch;
    }
    if (!cur.empty()) out.push_back(cur);
  };
  if (vp.verb_words.size() == 1) {
    for (const Node& c : vp.mid_circumstances) node_tokens(c, out);
    words_from(vp.verb_words[0]);
  } else {
    words_from(vp.verb_words[0]);
    for (const Node& c : vp.mid_circumstances) node_tokens(c, out);
    for (std::size_t i = 1; i < vp.verb_words.size(); ++i) words_from(vp.verb_words[i]);
  }
  for (const Complement& c : vp.complements) node_tokens(c.node, out);
  for (const Node& c : vp.post_circumstances) {
    if (skip_circ && c == *skip_circ) continue;
    node_tokens(c, out);
  }
}

inline void node_tokens(const Node& n, std::vector<std::string>& out) {
  static const std::set<std::string, std::less<>> kMeta = {
      "type", "numb", "pers", "case",  "tense",       "verb_type",
      "grade", "mood", "voice", "circum_type", "predicate_type", "kernel_tense", "complexity"};
  if (n.is_text()) return;
  if (kMeta.count(n.tag)) return;
  if (n.tag == "verb_phrase" || n.tag == "verb_phrase_part") {
    vp_tokens(build_vp(n), out);
    return;
  }
  if (n.tag == "word" || n.tag == "verb_word" || n.tag == "prep" ||
      n.tag == "sentence_connector" || n.tag == "part_connector" || n.tag == "subordinator") {
    std::string text = n.inner_text();
    std::string cur;
    for (char ch : text) {
      if (ch == ' ') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else
        cur += ch;
    }
    if (!cur.empty()) out.push_back(cur);
    return;
  }
  for (const Node& c : n.children) node_tokens(c, out);
}

inline std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    bool punct = t.size() == 1 && (t[0] == '.' || t[0] == '?' || t[0] == '!' || t[0] == ',');
    if (!out.empty()) out += ' ';
    (void)punct;
    out += t;
  }
  return out;
}

inline std::string phrase_text(const Node& n) {
  std::vector<std::string> tokens;
  node_tokens(n, tokens);
  return join_tokens(tokens);
}

inline bool np_part_is_query(const NounPartModel& p) {
  static const std::set<std::string> kQuery = {"what", "who", "whom", "which"};
  if (p.kernel_type == "querypronoun") return true;
  if (!p.lead.empty() && p.lead.front().tag == "word" &&
      kQuery.count(fold(p.lead.front().inner_text())))
    return true;
  return false;
}

inline bool np_is_query(const NounPhraseModel& np) {
  return !np.parts.empty() && np_part_is_query(np.parts.front());
}

inline void np_tokens(const NounPhraseModel& np, std::vector<std::string>& out) {
  auto part_tokens = [&](const NounPartModel& p) {
    for (const Node& n : p.lead) node_tokens(n, out);
    out.push_back(p.kernel);
    for (const Node& n : p.postmods) node_tokens(n, out);
  };
  if (np.parts.size() == 1) {
    part_tokens(np.parts[0]);
    return;
  }
  bool correl = np.connector == "both_and" || np.connector == "neither_nor";
  std::string first_word = np.connector == "both_and" ? "both" : "neither";
  std::string second_word = np.connector == "both_and" ? "and" : "nor";
  if (correl) out.push_back(first_word);
  for (std::size_t i = 0; i < np.parts.size(); ++i) {
    if (i > 0) {
      if (correl)
        out.push_back(second_word);
      else if (i + 1 == np.parts.size())
        out.push_back(np.connector);
      else
        out.push_back(",");
    }
    part_tokens(np.parts[i]);
  }
}

inline const Complement* find_complement(const VerbPhraseModel& vp, ComplementKind kind) {
  for (const Complement& c : vp.complements)
    if (c.kind == kind) return &c;
  return nullptr;
}

// The fronted element of a question, when any: a query-initial object or a
// query-adverb circumstance.
struct QueryFocus {
  const Complement* complement = nullptr;
  const Node* circ = nullptr;
};

inline QueryFocus find_query_focus(const VerbPhraseModel& vp) {
  static const std::set<std::string> kQueryAdv = {"why", "when", "where", "how"};
  static const std::set<std::string> kQuery = {"what", "who", "whom", "which"};
  for (const Complement& c : vp.complements) {
    if (c.kind != ComplementKind::direct_object && c.kind != ComplementKind::indirect_object)
      continue;
    const Node* noun = c.node.find("noun");
    if (!noun) continue;
    const Node* w = noun->find("word");
    if (w && kQuery.count(fold(w->inner_text()))) return {&c, nullptr};
  }
  for (const Node& circ : vp.post_circumstances) {
    const Node* adv = circ.find("adv");
    if (!adv) continue;
    const Node* w = adv->find("word");
    if (w && kQueryAdv.count(fold(w->inner_text()))) return {nullptr, &circ};
  }
  return {};
}

inline void simple_tokens(const SimpleSentenceModel& s, Mood mood,
                          std::vector<std::string>& out, bool invert_always = false);

inline void subject_tokens(const SimpleSentenceModel& s, std::vector<std::string>& out) {
  switch (s.subject_kind) {
    case SubjectKind::none: break;
    case SubjectKind::there: out.push_back("there"); break;
    case SubjectKind::np: np_tokens(s.subject, out); break;
    case SubjectKind::clause: node_tokens(s.subject_clause, out); break;
  }
}

inline void aux_fronted_tokens(const SimpleSentenceModel& s, std::vector<std::string>& out,
                               const Complement* skip_complement, const Node* skip_circ) {
  // first aux word(s) + subject + the rest of the verb phrase
  const VerbPhraseModel& vp = s.verb_phrases.front();
  std::string first = vp.verb_words.front();
  std::string aux = first, not_part;
  if (std::size_t sp = first.find(' '); sp != std::string::npos) {
    aux = first.substr(0, sp);
    not_part = first.substr(sp + 1);
  }
  out.push_back(aux);
  subject_tokens(s, out);
  if (!not_part.empty()) out.push_back(not_part);
  for (const Node& c : vp.mid_circumstances) node_tokens(c, out);
  for (std::size_t i = 1; i < vp.verb_words.size(); ++i) {
    std::string cur;
    for (char ch : vp.verb_words[i]) {
      if (ch == ' ') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else
        cur += ch;
    }
    if (!cur.empty()) out.push_back(cur);
  }
  for (const Complement& c : vp.complements) {
    if (skip_complement && &c == skip_complement) continue;
    node_tokens(c.node, out);
  }
  for (const Node& c : vp.post_circumstances) {
    if (skip_circ && &c == skip_circ) continue;
    node_tokens(c, out);
  }
}

inline void simple_tokens(const SimpleSentenceModel& s, Mood mood,
                          std::vector<std::string>& out, bool invert_always) {
  for (const Node& c : s.pre_circumstances) node_tokens(c, out);
  if (s.verb_phrases.empty()) return;
  const VerbPhraseModel& vp = s.verb_phrases.front();

  bool question = mood == Mood::question;
  bool subject_is_query = s.subject_kind == SubjectKind::np && np_is_query(s.subject);
  QueryFocus focus = question ? find_query_focus(vp) : QueryFocus{};

  if ((question && !subject_is_query) || invert_always) {
    if (focus.complement) {
      node_tokens(focus.complement->node, out);
      aux_fronted_tokens(s, out, focus.complement, nullptr);
    } else if (focus.circ) {
      const Node* adv = focus.circ->find("adv");
      const Node* w = adv ? adv->find("word") : nullptr;
      if (w) out.push_back(w->inner_text());
      aux_fronted_tokens(s, out, nullptr, focus.circ);
    } else {
      aux_fronted_tokens(s, out, nullptr, nullptr);
    }
    return;
  }

  subject_tokens(s, out);
  for (std::size_t i = 0; i < s.verb_phrases.size(); ++i) {
    if (i > 0)
      out.push_back(i - 1 < s.vp_connectors.size() ? s.vp_connectors[i - 1] : std::string("and"));
    vp_tokens(s.verb_phrases[i], out);
  }
}

// What/how exclamations front the emphasized element again.
inline void exclamation_tokens(const SimpleSentenceModel& s, std::vector<std::string>& out) {
  const VerbPhraseModel& vp = s.verb_phrases.front();
  if (const Complement* pred = find_complement(vp, ComplementKind::predicate)) {
    const Node* type = pred->node.find("predicate_type");
    std::string t = type ? type->inner_text() : "";
    if (t == "np") {
      out.push_back("what");
      for (const Node& c : pred->node.children)
        if (c.tag != "predicate_type") node_tokens(c, out);
      subject_tokens(s, out);
      std::string cur;
      for (char ch : vp.verb_words.front()) {
        if (ch == ' ') {
          if (!cur.empty()) out.push_back(cur);
          cur.clear();
        } else
          cur += ch;
      }
      if (!cur.empty()) out.push_back(cur);
      for (const Node& c : vp.post_circumstances) node_tokens(c, out);
      return;
    }
    if (t == "adj") {
      out.push_back("how");
      for (const Node& c : pred->node.children)
        if (c.tag != "predicate_type") node_tokens(c, out);
      subject_tokens(s, out);
      out.push_back(vp.verb_words.front());
      for (const Node& c : vp.post_circumstances) node_tokens(c, out);
      return;
    }
  }
  // adverb emphasis: front the last adverb circumstance
  const Node* front_circ = nullptr;
  for (const Node& c : vp.post_circumstances)
    if (c.find("adv")) front_circ = &c;
  if (front_circ) {
    out.push_back("how");
    node_tokens(*front_circ, out);
    subject_tokens(s, out);
    VerbPhraseModel rest = vp;
    rest.post_circumstances.clear();
    for (const Node& c : vp.post_circumstances)
      if (&c != front_circ) rest.post_circumstances.push_back(c);
    vp_tokens(rest, out);
    return;
  }
  // subject emphasis: "What a good book has been lost by him!"
  out.push_back("what");
  subject_tokens(s, out);
  vp_tokens(vp, out);
}

}  // namespace model_detail

// Regenerates a surface string: words in model order, single spaces,
// mood-appropriate final punctuation.
inline std::string render_text(const SentenceModel& m) {
  std::vector<std::string> tokens;
  using namespace model_detail;

  if (m.mood == Mood::subcircum) {
    if (m.subordinate) tokens.push_back(m.subordinate->subordinator);
    simple_tokens(m.parts.front(), Mood::statement, tokens);
  } else {
    if (m.subordinate && !m.subordinate->trailing) {
      tokens.push_back(m.subordinate->subordinator);
      simple_tokens(m.subordinate->clause->parts.front(), Mood::statement, tokens);
      tokens.push_back(",");
    }
    bool correl = !m.connectors.empty() &&
                  (m.connectors.front() == "neither_nor" || m.connectors.front() == "either_or");
    if (correl) tokens.push_back(m.connectors.front() == "neither_nor" ? "neither" : "either");
    for (std::size_t i = 0; i < m.parts.size(); ++i) {
      if (i > 0) {
        const std::string& conn = i - 1 < m.connectors.size() ? m.connectors[i - 1] : std::string(",");
        if (conn == ",")
          tokens.push_back(",");
        else if (conn == "neither_nor") {
          tokens.push_back(",");
          tokens.push_back("nor");
        } else if (conn == "either_or") {
          tokens.push_back("or");
        } else {
          tokens.push_back(",");
          tokens.push_back(conn);
        }
      }
      bool invert = i > 0 && !m.connectors.empty() && m.connectors[i - 1] == "neither_nor";
      if (m.mood == Mood::full_exclamation)
        exclamation_tokens(m.parts[i], tokens);
      else
        simple_tokens(m.parts[i], m.mood, tokens, invert);
    }
    if (m.subordinate && m.subordinate->trailing) {
      tokens.push_back(m.subordinate->subordinator);
      simple_tokens(m.subordinate->clause->parts.front(), Mood::statement, tokens);
    }
  }

  switch (m.mood) {
    case Mood::question: tokens.push_back("?"); break;
    case Mood::order:
    case Mood::full_exclamation: tokens.push_back("!"); break;
    default: tokens.push_back("."); break;
  }

  std::string out = model_detail::join_tokens(tokens);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') {
      c = char(c - 'a' + 'A');
      break;
    }
    if (c >= 'A' && c <= 'Z') break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grammar-question answering
// ---------------------------------------------------------------------------

enum class AnswerQuery : uint8_t {
  subject,
  verb_word,
  object,
  tense,
  mood,
  complexity,
  subordinator,
};

inline std::optional<AnswerQuery> answer_query_from_string(std::string_view s) {
  if (s == "subject") return AnswerQuery::subject;
  if (s == "verb_word" || s == "verb-word" || s == "verb") return AnswerQuery::verb_word;
  if (s == "object") return AnswerQuery::object;
  if (s == "tense") return AnswerQuery::tense;
  if (s == "mood") return AnswerQuery::mood;
  if (s == "complexity") return AnswerQuery::complexity;
  if (s == "subordinator") return AnswerQuery::subordinator;
  return std::nullopt;
}

// Surface text of the requested element of the indexed simple sentence;
// absent when the element does not exist (e.g. subject of an order).
inline std::optional<std::string> answer(const SentenceModel& m, AnswerQuery query,
                                         std::size_t part_index = 0) {
  using namespace model_detail;
  if (query == AnswerQuery::mood) return std::string(to_string(m.mood));
  if (query == AnswerQuery::complexity) return std::string(to_string(m.complexity));
  if (query == AnswerQuery::subordinator) {
    if (!m.subordinate) return std::nullopt;
    return m.subordinate->subordinator;
  }
  if (part_index >= m.parts.size()) throw index_out_of_range(part_index, m.parts.size());
  const SimpleSentenceModel& part = m.parts[part_index];
  switch (query) {
    case AnswerQuery::subject: {
      if (part.subject_kind == SubjectKind::none) return std::nullopt;
      std::vector<std::string> tokens;
      subject_tokens(part, tokens);
      return join_tokens(tokens);
    }
    case AnswerQuery::verb_word: {
      if (part.verb_phrases.empty()) return std::nullopt;
      return part.verb_phrases.front().verb_words.back();
    }
    case AnswerQuery::object: {
      if (part.verb_phrases.empty()) return std::nullopt;
      const Complement* dob =
          find_complement(part.verb_phrases.front(), ComplementKind::direct_object);
      if (!dob) return std::nullopt;
      return phrase_text(dob->node);
    }
    case AnswerQuery::tense: {
      if (part.verb_phrases.empty()) return std::nullopt;
      return part.verb_phrases.front().tense;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Transformations
// ---------------------------------------------------------------------------

namespace model_detail {

inline NumberSet parse_number_set(std::string_view text) {
  NumberSet out(uint16_t(0));
  if (text.find("sing") != std::string_view::npos) out = out.unite(NumberSet::of(Number::sing));
  if (text.find("plur") != std::string_view::npos) out = out.unite(NumberSet::of(Number::plur));
  return out.empty() ? NumberSet::full() : out;
}

inline PersonSet parse_person_set(std::string_view text) {
  PersonSet out(uint16_t(0));
  if (text.find("first") != std::string_view::npos) out = out.unite(PersonSet::of(Person::first));
  if (text.find("second") != std::string_view::npos)
    out = out.unite(PersonSet::of(Person::second));
  if (text.find("third") != std::string_view::npos) out = out.unite(PersonSet::of(Person::third));
  return out.empty() ? PersonSet::full() : out;
}

// do / does / did selection by tense and agreement.
inline std::string find_do_form(const Lexicon& lex, bool past, NumberSet numb, PersonSet pers) {
  for (const LexEntry* e : lex.by_category(Category::modal)) {
    if (e->lemma != "do") continue;
    if (e->surface.find('\'') != std::string::npos) continue;  // skip contractions
    if (past && !e->affixes.tense.contains(Tense::past)) continue;
    if (!past && !e->affixes.tense.contains(Tense::present)) continue;
    if (e->affixes.number.intersect(numb).empty()) continue;
    if (e->affixes.person.intersect(pers).empty()) continue;
    return e->surface;
  }
  return past ? "did" : "do";
}

inline const LexEntry* entry_for_inflected(const Lexicon& lex, std::string_view surface) {
  for (const LexEntry* e : lex.lookup(surface))
    if (e->category == Category::verb) return e;
  return nullptr;
}

// Base form of a lexical verb, via its lemma.
inline std::string base_form(const Lexicon& lex, std::string_view surface) {
  const LexEntry* inflected = entry_for_inflected(lex, surface);
  std::string lemma = inflected ? inflected->lemma : std::string(surface);
  for (const LexEntry* e : lex.by_category(Category::verb)) {
    if (e->lemma != lemma) continue;
    if (e->affixes.tense.contains(Tense::present) && e->affixes.person.contains(Person::first))
      return e->surface;
  }
  return lemma;
}

// Finite form of a base verb under the given tense and agreement.
inline std::string inflect(const Lexicon& lex, std::string_view base, bool past,
                           NumberSet numb, PersonSet pers) {
  const LexEntry* base_entry = entry_for_inflected(lex, base);
  std::string lemma = base_entry ? base_entry->lemma : std::string(base);
  for (const LexEntry* e : lex.by_category(Category::verb)) {
    if (e->lemma != lemma) continue;
    if (past && !e->affixes.tense.contains(Tense::past)) continue;
    if (!past) {
      if (!e->affixes.tense.contains(Tense::present)) continue;
      if (e->affixes.number.intersect(numb).empty()) continue;
      if (e->affixes.person.intersect(pers).empty()) continue;
    }
    return e->surface;
  }
  return std::string(base);
}

inline bool is_do_support(const VerbPhraseModel& vp) {
  if (vp.verb_words.size() < 2) return false;
  if (vp.kernel_tense != "infi") return false;
  if (vp.tense != "present" && vp.tense != "past") return false;
  std::string aux = strip_not(vp.verb_words.front());
  return aux == "do" || aux == "does" || aux == "did";
}

inline void toggle_negation(VerbPhraseModel& vp, const Lexicon& lex) {
  NumberSet numb = parse_number_set(vp.numb);
  PersonSet pers = parse_person_set(vp.pers);
  if (vp.negated) {
    if (is_do_support(vp)) {
      // drop the auxiliary and restore the finite kernel
      bool past = vp.tense == "past";
      std::string kernel = vp.verb_words.back();
      std::string particle;
      if (std::size_t sp = kernel.find(' '); sp != std::string::npos) {
        particle = kernel.substr(sp);
        kernel = kernel.substr(0, sp);
      }
      std::string finite = inflect(lex, kernel, past, numb, pers);
      vp.verb_words = {finite + particle};
      vp.kernel_tense.reset();
    } else {
      vp.verb_words.front() = strip_not(vp.verb_words.front());
    }
    vp.negated = false;
    return;
  }
  if (vp.verb_words.size() >= 2 || vp.verb_type == "be") {
    vp.verb_words.front() += " not";
  } else {
    // do-support for a plain lexical verb
    bool past = vp.tense == "past";
    std::string word = vp.verb_words.front();
    std::string particle;
    if (std::size_t sp = word.find(' '); sp != std::string::npos) {
      particle = word.substr(sp);
      word = word.substr(0, sp);
    }
    std::string base = base_form(lex, word);
    std::string do_form = find_do_form(lex, past, numb, pers);
    vp.verb_words = {do_form + " not", base + particle};
    vp.kernel_tense = "infi";
  }
  vp.negated = true;
}

}  // namespace model_detail

// Toggles negation of every top-level verb phrase of every part. Modal,
// be, and other auxiliary forms insert or remove "not" after the first
// auxiliary; plain lexical forms use do-support with agreement preserved.
inline SentenceModel negate(const SentenceModel& model, const Lexicon& lex) {
  if (model.mood != Mood::statement) throw unsupported_mood("negation expects a statement");
  SentenceModel out = model;
  for (SimpleSentenceModel& part : out.parts)
    for (VerbPhraseModel& vp : part.verb_phrases) model_detail::toggle_negation(vp, lex);
  return out;
}

// Yes/no mood transformation between statement and question; auxiliary
// fronting happens at rendering, the model keeps canonical order and only
// guarantees an auxiliary exists.
inline SentenceModel transform_mood(const SentenceModel& model, Mood target,
                                    const Lexicon& lex) {
  if (target != Mood::statement && target != Mood::question)
    throw unsupported_mood("target must be statement or question");
  if (model.mood != Mood::statement && model.mood != Mood::question)
    throw unsupported_mood("source must be a statement or question");
  if (model.complexity != Complexity::simple || model.parts.size() != 1)
    throw unsupported_complexity("only simple single-part sentences transform");
  SentenceModel out = model;
  if (model.mood == target) return out;
  VerbPhraseModel& vp = out.parts.front().verb_phrases.front();
  NumberSet numb = model_detail::parse_number_set(vp.numb);
  PersonSet pers = model_detail::parse_person_set(vp.pers);
  if (target == Mood::question) {
    if (vp.verb_words.size() == 1 && vp.verb_type != "be") {
      bool past = vp.tense == "past";
      std::string word = vp.verb_words.front();
      std::string particle;
      if (std::size_t sp = word.find(' '); sp != std::string::npos) {
        particle = word.substr(sp);
        word = word.substr(0, sp);
      }
      std::string base = model_detail::base_form(lex, word);
      std::string do_form = model_detail::find_do_form(lex, past, numb, pers);
      vp.verb_words = {do_form, base + particle};
      vp.kernel_tense = "infi";
    }
    out.mood = Mood::question;
  } else {
    if (model_detail::is_do_support(vp) && !vp.negated) {
      bool past = vp.tense == "past";
      std::string kernel = vp.verb_words.back();
      std::string particle;
      if (std::size_t sp = kernel.find(' '); sp != std::string::npos) {
        particle = kernel.substr(sp);
        kernel = kernel.substr(0, sp);
      }
      vp.verb_words = {model_detail::inflect(lex, kernel, past, numb, pers) + particle};
      vp.kernel_tense.reset();
    }
    out.mood = Mood::statement;
  }
  return out;
}

}  // namespace nlml

#endif  // NLML_MODEL_HPP
