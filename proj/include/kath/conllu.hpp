#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kath {

// One FEATS or MISC item. Items written without '=' keep value == nullopt
// so they serialize back unchanged.
struct Attribute {
  std::string key;
  std::optional<std::string> value;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

using AttributeList = std::vector<Attribute>;

// "_" and "" parse to an empty list.
AttributeList parse_attributes(std::string_view column);
// Empty list formats as "_".
std::string format_attributes(const AttributeList& attrs);
// Keeps insertion order; replaces the value if the key exists.
void set_attribute(AttributeList& attrs, std::string key, std::string value);
AttributeList sorted_attributes(AttributeList attrs);

inline constexpr int kMissingHead = -1;

struct Token {
  int id = 0;
  std::string form;
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  AttributeList feats;
  int head = kMissingHead;  // "_" in the HEAD column
  std::string deprel = "_";
  std::string deps = "_";
  AttributeList misc;

  friend bool operator==(const Token&, const Token&) = default;
};

enum class Origin { kBatch, kRetry, kUnknown };

std::string_view to_string(Origin origin);
Origin parse_origin(std::string_view text);

// Multiword-token ranges ("n-m") and empty nodes ("n.m") are kept verbatim and
// re-emitted before the token at index `before_token`.
struct PassThroughRow {
  std::size_t before_token = 0;
  std::string line;

  friend bool operator==(const PassThroughRow&, const PassThroughRow&) = default;
};

struct Sentence {
  std::string sent_id;
  std::string text;
  Origin origin = Origin::kUnknown;
  std::vector<Token> tokens;
  std::vector<PassThroughRow> passthrough;
  // Raw comment lines, '#' included, in file order.
  std::vector<std::string> comments;

  std::size_t size() const { return tokens.size(); }

  // These keep the mirrored comment line in sync with the field.
  void set_sent_id(std::string id);
  void set_text(std::string value);
  void set_origin(Origin value);

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

enum class Strictness { kStrict, kLenient };

enum class IssueCode {
  kCycle,
  kMultiRoot,
  kNoRoot,
  kHeadOutOfRange,
  kBadUpos,
  kBadDeprel,
  kBadFieldCount,
  kDuplicateSentId,
  kNonprojectiveInfo,
};

enum class Severity { kError, kWarning };

std::string_view to_string(IssueCode code);
std::string_view to_string(Severity severity);
std::string_view to_string(Strictness strictness);

// Strict: every structural and label code is an error. Lenient: only
// HEAD_OUT_OF_RANGE and BAD_FIELD_COUNT are errors. NONPROJECTIVE_INFO is
// always a warning.
Severity severity_for(IssueCode code, Strictness profile);

struct ValidationIssue {
  std::string sent_id;
  std::optional<int> token_id;
  IssueCode code = IssueCode::kBadFieldCount;
  Severity severity = Severity::kError;
  std::string message;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct Treebank {
  std::vector<Sentence> sentences;
  std::string source_path;
  // Rows dropped by a lenient parse.
  std::vector<ValidationIssue> parse_issues;

  std::size_t size() const { return sentences.size(); }
  std::size_t token_count() const;
};

// Reads CoNLL-U. Strict parsing throws Error(kBadFieldCount) on the first
// malformed row; lenient parsing skips it and records a parse issue. Invalid
// UTF-8 always throws Error(kInvalidUtf8).
Treebank parse_treebank(std::istream& in,
                        Strictness profile = Strictness::kLenient);
Treebank parse_treebank(std::string_view text,
                        Strictness profile = Strictness::kLenient);
Treebank read_treebank(const std::string& path,
                       Strictness profile = Strictness::kLenient);

std::string serialize_sentence(const Sentence& sentence);
// Each sentence is followed by one blank line; LF line endings.
std::string serialize_treebank(const Treebank& treebank);
void write_treebank(const std::string& path, const Treebank& treebank);

}  // namespace kath
