#pragma once

// Small treebanks with learnable tag and head patterns: every word belongs to
// one tag, and each tag attaches by a fixed rule.

#include <random>
#include <string>
#include <vector>

#include "kath/conllu.hpp"

namespace kath::test {

inline Treebank synthetic_corpus(std::size_t sentences, std::uint64_t seed) {
  static const std::vector<std::string> dets = {"ὁ", "ἡ", "τὸ", "τοῦ", "τῆς", "τῶν"};
  static const std::vector<std::string> nouns = {"ὑπουργός", "βουλή", "νόμος", "ἐπιτροπή",
                                                 "πρόεδρος", "κυβέρνησις", "δῆμος", "ἐρώτησις"};
  static const std::vector<std::string> adjs = {"ἐθνικός", "δημόσιος", "νέος", "ἀρμόδιος"};
  static const std::vector<std::string> verbs = {"ἐρωτᾷ", "ἀπαντᾷ", "ψηφίζει", "ζητεῖ", "ἐγκρίνει"};
  static const std::vector<std::string> adps = {"ἐπί", "διά", "κατά", "μετά"};

  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<std::string>& from) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
  };
  auto coin = [&] { return std::bernoulli_distribution(0.5)(rng); };

  Treebank tb;
  for (std::size_t k = 0; k < sentences; ++k) {
    Sentence s;
    s.set_sent_id("syn-" + std::to_string(k + 1));
    auto add = [&](const std::string& form, const std::string& upos, const std::string& rel) {
      Token t;
      t.id = static_cast<int>(s.tokens.size()) + 1;
      t.form = form;
      t.lemma = form;
      t.upos = upos;
      t.deprel = rel;
      s.tokens.push_back(t);
      return t.id;
    };
    // Noun phrase: DET (ADJ) NOUN; returns the noun position.
    auto noun_phrase = [&](const std::string& rel) {
      const int det = add(pick(dets), "DET", "det");
      int adj = 0;
      if (coin()) adj = add(pick(adjs), "ADJ", "amod");
      const int noun = add(pick(nouns), "NOUN", rel);
      s.tokens[det - 1].head = noun;
      if (adj) s.tokens[adj - 1].head = noun;
      return noun;
    };

    const int subj = noun_phrase("nsubj");
    const int verb = add(pick(verbs), "VERB", "root");
    s.tokens[verb - 1].head = 0;
    s.tokens[subj - 1].head = verb;
    const int obj = noun_phrase("obj");
    s.tokens[obj - 1].head = verb;
    if (coin()) {
      const int adp = add(pick(adps), "ADP", "case");
      const int obl = noun_phrase("obl");
      s.tokens[adp - 1].head = obl;
      s.tokens[obl - 1].head = verb;
    }
    const int punct = add(coin() ? "." : "·", "PUNCT", "punct");
    s.tokens[punct - 1].head = verb;

    std::string text;
    for (const auto& t : s.tokens) text += (text.empty() ? "" : " ") + t.form;
    s.set_text(text);
    tb.sentences.push_back(std::move(s));
  }
  return tb;
}

}  // namespace kath::test
