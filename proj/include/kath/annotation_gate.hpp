#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kath/conllu.hpp"
#include "kath/schema.hpp"

namespace kath {

// Rejection reasons carried in the retry queue and dead-letter file.
namespace reason {
inline constexpr std::string_view kJsonParse = "JSON_PARSE";
inline constexpr std::string_view kBadRecord = "BAD_RECORD";
inline constexpr std::string_view kBadSidecar = "BAD_SIDECAR";
inline constexpr std::string_view kDuplicate = "DUPLICATE";
}  // namespace reason

struct RetryEntry {
  std::string sent_id;
  std::string reason;
  std::uint32_t attempt_count = 0;  // failed replacements so far

  friend bool operator==(const RetryEntry&, const RetryEntry&) = default;
};

struct IngestState {
  std::size_t next_offset = 0;
  std::vector<std::string> admitted;
  std::vector<RetryEntry> retry_queue;
  std::vector<RetryEntry> dead_letter;
  std::uint32_t max_attempts = 3;

  // Throws Error(kStateCorrupt) when the invariants fail.
  void check() const;

  std::string to_json() const;
  static IngestState from_json(std::string_view text);

  friend bool operator==(const IngestState&, const IngestState&) = default;
};

// A missing file yields a fresh state.
IngestState load_state(const std::string& path, std::uint32_t max_attempts = 3);
// Atomic: write-new then rename-over.
void save_state(const std::string& path, const IngestState& state);

// Strips code-fence lines, trims outside the outermost brackets, and drops
// trailing commas before '}' or ']'. Nothing else.
std::string recover_json(std::string_view text);

// Record: {"sent_id", "text"?, "tokens": [{"id"?, "form", "lemma", "upos",
// "feats", "head", "deprel", "sidecar"?: {name: value}}]}. Sidecars land in
// MISC as "Kath:<name>=<value>".
struct RecordCheck {
  Sentence sentence;
  std::string reason;  // empty when admissible
  std::string detail;
};
RecordCheck check_record(std::string_view line, const AnnotationSchema& schema);

// Inverse of the record mapping; used to produce batches from CoNLL-U.
std::string sentence_to_record(const Sentence& sentence);

struct Rejection {
  std::size_t offset = 0;
  std::string sent_id;
  std::string reason;
  std::string detail;
};

struct IngestResult {
  std::vector<Sentence> admitted;
  IngestState state;
  // Everything not admitted in this call, queued or not.
  std::vector<Rejection> rejected;
};

// Processes records[state.next_offset..]. Failing records go to the retry
// queue; repeats of admitted sent_ids are rejected as DUPLICATE.
IngestResult ingest_batch(std::span<const std::string> records, const AnnotationSchema& schema,
                          IngestState state);

struct DeadLetter {
  std::string sent_id;
  std::string record;
  std::vector<std::string> failure_reasons;

  // The record object with a "failure_reasons" field added.
  std::string to_json_line() const;
};

struct RetryResult {
  std::vector<Sentence> admitted;
  IngestState state;
  std::vector<Rejection> failed;
  std::vector<DeadLetter> dead_lettered;
};

// A replacement targets its "replaces" field, else its sent_id. Every target
// must be queued, otherwise Error(kUnknownRetryId) is thrown before any change.
RetryResult process_retries(std::span<const std::string> replacements,
                            const AnnotationSchema& schema, IngestState state);

}  // namespace kath
