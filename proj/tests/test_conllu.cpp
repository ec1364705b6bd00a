#include <gtest/gtest.h>

#include <algorithm>

#include "kath/conllu.hpp"
#include "kath/error.hpp"
#include "kath/io.hpp"
#include "kath/schema.hpp"
#include "kath/validate.hpp"
#include "test_support.hpp"

namespace kath {
namespace {

using test::data_path;

std::vector<IssueCode> codes(const std::vector<ValidationIssue>& issues) {
  std::vector<IssueCode> out;
  for (const auto& i : issues) out.push_back(i.code);
  return out;
}

bool has(const std::vector<ValidationIssue>& issues, IssueCode code, Severity severity) {
  return std::any_of(issues.begin(), issues.end(), [&](const ValidationIssue& i) {
    return i.code == code && i.severity == severity;
  });
}

Sentence sentence_with_heads(std::vector<int> heads) {
  Sentence s;
  s.set_sent_id("s");
  for (std::size_t i = 0; i < heads.size(); ++i) {
    Token t;
    t.id = static_cast<int>(i + 1);
    t.form = "w" + std::to_string(i + 1);
    t.upos = "NOUN";
    t.head = heads[i];
    t.deprel = heads[i] == 0 ? "root" : "dep";
    s.tokens.push_back(t);
  }
  return s;
}

class RoundTrip : public ::testing::TestWithParam<const char*> {};

TEST_P(RoundTrip, SerializeParseIsByteIdentical) {
  const std::string text = read_file(data_path(GetParam()));
  EXPECT_EQ(serialize_treebank(parse_treebank(text, Strictness::kStrict)), text);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, RoundTrip,
                         ::testing::Values("roundtrip_mwt.conllu", "roundtrip_empty_feats.conllu",
                                           "roundtrip_greek.conllu", "clean.conllu",
                                           "cycle.conllu", "multi_root.conllu"));

TEST(Conllu, ParsesFields) {
  const Treebank tb = read_treebank(data_path("roundtrip_mwt.conllu"));
  ASSERT_EQ(tb.size(), 2u);
  const Sentence& s = tb.sentences[0];
  EXPECT_EQ(s.sent_id, "mwt-1");
  EXPECT_EQ(s.text, "Στο σπίτι.");
  ASSERT_EQ(s.tokens.size(), 4u);
  ASSERT_EQ(s.passthrough.size(), 1u);
  EXPECT_EQ(s.passthrough[0].before_token, 0u);
  EXPECT_EQ(s.tokens[1].feats.size(), 3u);
  EXPECT_EQ(s.tokens[1].feats[0].key, "Case");
  EXPECT_EQ(s.tokens[2].head, 0);
  EXPECT_EQ(s.tokens[2].misc[0].key, "SpaceAfter");
  // Empty node after the single token.
  EXPECT_EQ(tb.sentences[1].passthrough[0].before_token, 1u);
}

TEST(Conllu, OriginComment) {
  const Treebank tb = read_treebank(data_path("roundtrip_empty_feats.conllu"));
  EXPECT_EQ(tb.sentences[0].origin, Origin::kBatch);
  Sentence s = tb.sentences[0];
  s.set_origin(Origin::kRetry);
  EXPECT_NE(serialize_sentence(s).find("# origin = retry\n"), std::string::npos);
  s.set_origin(Origin::kUnknown);
  EXPECT_EQ(serialize_sentence(s).find("# origin"), std::string::npos);
}

TEST(Conllu, SettersAddCommentLines) {
  Sentence s = sentence_with_heads({0});
  s.set_text("w1");
  const std::string out = serialize_sentence(s);
  EXPECT_EQ(out.rfind("# sent_id = s\n# text = w1\n1\tw1\t", 0), 0u);
}

TEST(Conllu, Attributes) {
  EXPECT_TRUE(parse_attributes("_").empty());
  EXPECT_EQ(format_attributes({}), "_");
  AttributeList a = parse_attributes("Number=Sing|Case=Nom|Foreign");
  ASSERT_EQ(a.size(), 3u);
  EXPECT_FALSE(a[2].value.has_value());
  EXPECT_EQ(format_attributes(a), "Number=Sing|Case=Nom|Foreign");
  EXPECT_EQ(format_attributes(sorted_attributes(a)), "Case=Nom|Foreign|Number=Sing");
  set_attribute(a, "Case", "Gen");
  EXPECT_EQ(format_attributes(a), "Number=Sing|Case=Gen|Foreign");
}

TEST(Conllu, FieldCountStrictThrowsLenientRecords) {
  const std::string text = "# sent_id = a\n1\tx\tx\tNOUN\t_\t_\t0\troot\t_\t_\n2\ty\ty\n\n";
  try {
    parse_treebank(text, Strictness::kStrict);
    FAIL() << "expected BAD_FIELD_COUNT";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadFieldCount);
  }
  const Treebank tb = parse_treebank(text, Strictness::kLenient);
  ASSERT_EQ(tb.size(), 1u);
  EXPECT_EQ(tb.sentences[0].tokens.size(), 1u);
  ASSERT_EQ(tb.parse_issues.size(), 1u);
  EXPECT_EQ(tb.parse_issues[0].code, IssueCode::kBadFieldCount);
}

TEST(Conllu, InvalidUtf8Throws) {
  const std::string text = "1\t\xC3\x28\tx\tNOUN\t_\t_\t0\troot\t_\t_\n\n";
  try {
    parse_treebank(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidUtf8);
  }
}

TEST(Conllu, CrlfAndMissingFinalBlankLine) {
  const Treebank tb = parse_treebank(std::string("1\tx\tx\tNOUN\t_\t_\t0\troot\t_\t_\r\n"));
  ASSERT_EQ(tb.size(), 1u);
  EXPECT_EQ(tb.sentences[0].tokens[0].misc.size(), 0u);
}

TEST(Validate, CleanFixtureHasNoIssues) {
  const Treebank tb = read_treebank(data_path("clean.conllu"));
  EXPECT_TRUE(validate_treebank(tb, Strictness::kStrict, AnnotationSchema::ud_v2_default()).empty());
}

TEST(Validate, StructuralCodesStrictAndLenient) {
  struct Case {
    const char* file;
    IssueCode code;
  };
  for (const Case& c : {Case{"cycle.conllu", IssueCode::kCycle},
                        Case{"multi_root.conllu", IssueCode::kMultiRoot},
                        Case{"no_root.conllu", IssueCode::kNoRoot},
                        Case{"head_out_of_range.conllu", IssueCode::kHeadOutOfRange}}) {
    const Treebank tb = read_treebank(data_path(c.file));
    const auto strict = validate_treebank(tb, Strictness::kStrict, AnnotationSchema::ud_v2_default());
    EXPECT_TRUE(has(strict, c.code, Severity::kError)) << c.file;
    const auto lenient =
        validate_treebank(tb, Strictness::kLenient, AnnotationSchema::ud_v2_default());
    const Severity expected =
        c.code == IssueCode::kHeadOutOfRange ? Severity::kError : Severity::kWarning;
    EXPECT_TRUE(has(lenient, c.code, expected)) << c.file;
  }
}

TEST(Validate, MultiRootPointsAtSecondRoot) {
  const auto issues = validate_sentence(sentence_with_heads({0, 1, 0}), Strictness::kStrict);
  ASSERT_EQ(codes(issues), std::vector<IssueCode>{IssueCode::kMultiRoot});
  EXPECT_EQ(issues[0].token_id, 3);
}

TEST(Validate, SelfLoopIsCycle) {
  const auto issues = validate_sentence(sentence_with_heads({0, 2}), Strictness::kStrict);
  EXPECT_TRUE(has(issues, IssueCode::kCycle, Severity::kError));
}

TEST(Validate, NonprojectiveIsAlwaysWarning) {
  // 1 -> 3 crosses 2 -> 4.
  const auto s = sentence_with_heads({3, 4, 0, 3});
  for (Strictness p : {Strictness::kStrict, Strictness::kLenient}) {
    const auto issues = validate_sentence(s, p);
    ASSERT_EQ(codes(issues), std::vector<IssueCode>{IssueCode::kNonprojectiveInfo});
    EXPECT_EQ(issues[0].severity, Severity::kWarning);
    EXPECT_FALSE(has_errors(issues));
  }
}

TEST(Validate, LabelsAgainstSchema) {
  Sentence s = sentence_with_heads({0, 1});
  s.tokens[0].upos = "NOUNISH";
  s.tokens[1].deprel = "nsubj:pass";
  const auto strict = validate_sentence(s, Strictness::kStrict);
  EXPECT_TRUE(has(strict, IssueCode::kBadUpos, Severity::kError));
  EXPECT_TRUE(has(strict, IssueCode::kBadDeprel, Severity::kError));
  EXPECT_FALSE(has_errors(validate_sentence(s, Strictness::kLenient)));

  AnnotationSchema schema = AnnotationSchema::ud_v2_default();
  schema.deprel_set.insert("nsubj:pass");
  schema.upos_set.insert("NOUNISH");
  EXPECT_TRUE(validate_sentence(s, Strictness::kStrict, schema).empty());
}

TEST(Validate, DuplicateSentId) {
  Treebank tb;
  tb.sentences = {sentence_with_heads({0}), sentence_with_heads({0})};
  const auto issues = validate_treebank(tb, Strictness::kLenient, AnnotationSchema::ud_v2_default());
  EXPECT_EQ(codes(issues), std::vector<IssueCode>{IssueCode::kDuplicateSentId});
}

TEST(Validate, MissingHeadIsOutOfRange) {
  const auto issues = validate_sentence(sentence_with_heads({0, kMissingHead}), Strictness::kLenient);
  EXPECT_TRUE(has(issues, IssueCode::kHeadOutOfRange, Severity::kError));
}

TEST(Schema, ParsesShippedConfig) {
  const AnnotationSchema s = load_schema(std::string(KATH_TEST_DATA) + "/../../configs/annotation_schema.yaml");
  EXPECT_EQ(s.deprel_set.size(), 37u);
  EXPECT_EQ(s.upos_set.size(), 17u);
  ASSERT_NE(s.sidecar("orthographic_source"), nullptr);
  EXPECT_TRUE(s.sidecar("orthographic_source")->accepts("polytonic"));
  EXPECT_FALSE(s.sidecar("orthographic_source")->accepts("handwritten"));
  EXPECT_EQ(s.sidecar("nope"), nullptr);
}

TEST(Schema, Errors) {
  auto code_of = [](const std::string& doc) {
    try {
      parse_schema(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code_of("upos: [NOUN]\n"), ErrorCode::kEmptyLabelSet);
  EXPECT_EQ(code_of("deprel: []\n"), ErrorCode::kEmptyLabelSet);
  EXPECT_EQ(code_of("deprel: [root\n"), ErrorCode::kSchemaParseError);
  EXPECT_EQ(code_of("deprel: [root]\nsidecar_fields:\n  - {name: a, free_text: true}\n"
                    "  - {name: a, free_text: true}\n"),
            ErrorCode::kSchemaParseError);
  const AnnotationSchema ok = parse_schema("deprel: [root, dep]\n");
  EXPECT_EQ(ok.deprel_set.size(), 2u);
  EXPECT_EQ(ok.upos_set.size(), 17u);
}

}  // namespace
}  // namespace kath
