#include <gtest/gtest.h>

#include <random>

#include "kath/conllu.hpp"
#include "kath/error.hpp"
#include "kath/reconstruct.hpp"

namespace kath {
namespace {

using Lines = std::vector<std::string>;

TEST(Dehyphenate, Examples) {
  const auto r = dehyphenate({"παρα-", "δείγματος χάριν"});
  EXPECT_EQ(r.value, Lines{"παραδείγματος χάριν"});
  EXPECT_EQ(r.report.hyphens_removed, 1u);
  ASSERT_EQ(r.report.audit.size(), 1u);
  EXPECT_EQ(r.report.audit[0].line, 1u);

  EXPECT_EQ(dehyphenate({"abc", "", "-def"}).value, (Lines{"abc", "", "-def"}));
  EXPECT_EQ(dehyphenate({"abc-", "", "def"}).value, (Lines{"abc-", "", "def"}));
  EXPECT_EQ(dehyphenate({"1974-", "1977"}).value, (Lines{"1974-", "1977"}));
  EXPECT_EQ(dehyphenate({"1974-", "1977"}).report.hyphens_removed, 0u);
}

TEST(Dehyphenate, UnicodeHyphens) {
  EXPECT_EQ(dehyphenate({"Βου‐", "λής"}).value, Lines{"Βουλής"});
  EXPECT_EQ(dehyphenate({"Βου­", "λής"}).value, Lines{"Βουλής"});
  EXPECT_EQ(dehyphenate({"Βου–", "λής"}).value, (Lines{"Βου–", "λής"}));
}

TEST(Dehyphenate, GapLimitsChains) {
  // With the default gap one word may span one line break.
  const auto one = dehyphenate({"α-", "β-", "γ"});
  EXPECT_EQ(one.value, (Lines{"α-", "β-", "γ"}));
  ReconstructionConfig cfg;
  cfg.max_join_gap = 2;
  const auto two = dehyphenate({"α-", "β-", "γ"}, cfg);
  EXPECT_EQ(two.value, Lines{"αβγ"});
  EXPECT_EQ(two.report.hyphens_removed, 2u);
}

TEST(JoinSplitWords, Examples) {
  const Lines in{"η Βου λής συνήλθε"};
  const auto none = join_split_words(in, {}, nullptr);
  EXPECT_EQ(none.value, in);
  EXPECT_EQ(none.report.joins_performed, 0u);

  const Lexicon lex{"Βουλής"};
  const auto joined = join_split_words({"Βου λής"}, {}, &lex);
  EXPECT_EQ(joined.value, Lines{"Βουλής"});
  EXPECT_EQ(joined.report.joins_performed, 1u);

  const Lexicon blocked{"Βουλής", "Βου"};
  EXPECT_EQ(join_split_words({"Βου λής"}, {}, &blocked).value, Lines{"Βου λής"});
}

TEST(JoinSplitWords, KeepsSurroundingPunctuation) {
  const Lexicon lex{"Βουλής"};
  EXPECT_EQ(join_split_words({"(Βου λής)."}, {}, &lex).value, Lines{"(Βουλής)."});
  EXPECT_EQ(join_split_words({"της Βου λής ."}, {}, &lex).value, Lines{"της Βουλής ."});
  EXPECT_EQ(join_split_words({"Βου  λής"}, {}, &lex).value, Lines{"Βου  λής"});
}

TEST(BoundaryPunct, Examples) {
  EXPECT_EQ(normalize_boundary_punct("τέλος .. Αρχή").value, "τέλος. Αρχή");
  EXPECT_EQ(normalize_boundary_punct("").value, "");
  const auto r = normalize_boundary_punct("α ;β");
  EXPECT_EQ(r.value, "α; β");
  EXPECT_EQ(r.report.boundary_fixes, r.report.audit.size());
  EXPECT_EQ(normalize_boundary_punct("Ἀθῆναι· ἡ").value, "Ἀθῆναι· ἡ");
  EXPECT_EQ(normalize_boundary_punct("3.14").value, "3.14");
}

TEST(FlagLong, Thresholds) {
  Treebank tb;
  for (int n = 1; n <= 3; ++n) {
    Sentence s;
    s.set_sent_id("s" + std::to_string(n));
    for (int i = 1; i <= n; ++i) {
      Token t;
      t.id = i;
      t.form = "x";
      s.tokens.push_back(t);
    }
    tb.sentences.push_back(s);
  }
  ReconstructionConfig cfg;
  EXPECT_TRUE(flag_long_sentences(tb, cfg).empty());
  cfg.enum_split_threshold = 1;
  EXPECT_EQ(flag_long_sentences(tb, cfg), (std::vector<std::string>{"s2", "s3"}));

  Treebank big;
  big.sentences.push_back(tb.sentences[0]);
  big.sentences[0].tokens.resize(121, tb.sentences[0].tokens[0]);
  EXPECT_EQ(flag_long_sentences(big, {}).size(), 1u);
  big.sentences[0].tokens.resize(120);
  EXPECT_TRUE(flag_long_sentences(big, {}).empty());
}

TEST(Config, ThresholdMustBePositive) {
  ReconstructionConfig cfg;
  cfg.enum_split_threshold = 0;
  EXPECT_THROW(cfg.check(), Error);
}

// Random text over an alphabet that exercises every rule.
Lines random_lines(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {"α", "β", "Γ", "ά", "x", "1", " ", " ", "-",
                                                  "‐", ".", ";", "·", "!", "?", "ω"};
  std::uniform_int_distribution<int> nlines(0, 6);
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  Lines out(static_cast<std::size_t>(nlines(rng)));
  for (auto& line : out) {
    const int n = len(rng);
    for (int i = 0; i < n; ++i) line += pieces[pick(rng)];
  }
  return out;
}

TEST(Properties, IdempotenceAndConservation) {
  std::mt19937 rng(7);
  const Lexicon lex{"αβ", "Γω", "xα"};
  for (int iter = 0; iter < 2000; ++iter) {
    const Lines in = random_lines(rng);

    const auto d1 = dehyphenate(in);
    EXPECT_EQ(dehyphenate(d1.value).value, d1.value) << ::testing::PrintToString(in);
    // Conservation: only the hyphen and the line break go at each merge point.
    std::string joined_in;
    for (const auto& l : in) joined_in += l;
    std::string joined_out;
    for (const auto& l : d1.value) joined_out += l;
    EXPECT_EQ(joined_in.size() - joined_out.size(),
              [&] {
                std::size_t removed = 0;
                for (const auto& e : d1.report.audit) removed += e.before.size() - 1 - e.after.size();
                return removed;
              }());
    EXPECT_EQ(d1.report.hyphens_removed, d1.report.count(ReconstructionRule::kDehyphenate));

    const auto j1 = join_split_words(in, {}, &lex);
    EXPECT_EQ(join_split_words(j1.value, {}, &lex).value, j1.value);
    EXPECT_EQ(j1.report.joins_performed, j1.report.audit.size());

    for (const auto& line : in) {
      const auto p1 = normalize_boundary_punct(line);
      EXPECT_EQ(normalize_boundary_punct(p1.value).value, p1.value) << line;
      EXPECT_EQ(p1.report.boundary_fixes, p1.report.audit.size());
    }
  }
}

TEST(Properties, AuditEntriesDescribeLocalRewrites) {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    const Lines in = random_lines(rng);
    for (const auto& e : dehyphenate(in).report.audit) {
      const std::size_t nl = e.before.find('\n');
      ASSERT_NE(nl, std::string::npos);
      std::string left = e.before.substr(0, nl);
      // The left fragment minus its hyphen, then the right fragment.
      while (!left.empty() && e.after.compare(0, left.size(), left) != 0) left.pop_back();
      EXPECT_EQ(left + e.before.substr(nl + 1), e.after);
    }
    for (const auto& line : in) {
      for (const auto& e : normalize_boundary_punct(line).report.audit) {
        EXPECT_NE(e.before, e.after);
        EXPECT_EQ(e.line, 1u);
      }
    }
  }
}

}  // namespace
}  // namespace kath
