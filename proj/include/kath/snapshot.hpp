#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kath/conllu.hpp"
#include "kath/schema.hpp"

namespace kath {

std::string sha256_hex(std::string_view bytes);

struct SnapshotManifest {
  std::size_t total_sentences = 0;
  std::size_t batch_origin = 0;
  std::size_t retry_origin = 0;
  std::size_t unknown_origin = 0;
  std::string content_sha256;
  std::vector<std::string> created_from;
  std::string tool_version;

  // Counts add up and the digest matches `snapshot_bytes`.
  bool verify(std::string_view snapshot_bytes) const;

  std::string to_json() const;
  static SnapshotManifest from_json(std::string_view text);
};

struct FreezeRejection {
  std::string sent_id;
  std::vector<ValidationIssue> issues;
};

struct FreezeResult {
  Treebank snapshot;
  SnapshotManifest manifest;
  // Sentences that failed validation (VALIDATION_REJECT); not in `snapshot`.
  std::vector<FreezeRejection> rejected;
};

// Concatenates batches in order, replaces same-id sentences with retries in
// place, and admits only sentences without errors at `profile`. Untagged
// batch sentences are tagged batch; retries are tagged retry.
// Throws Error(kUnmatchedRetry) if a retry id has no batch counterpart.
FreezeResult freeze(const std::vector<Treebank>& batches, const Treebank& retries,
                    Strictness profile, const AnnotationSchema& schema);

// splitmix64 step; all arithmetic mod 2^64.
struct SplitMix64Step {
  std::uint64_t state;
  std::uint64_t value;
};
SplitMix64Step splitmix64_next(std::uint64_t state);

// Exact decimal fraction; "0.2" parses to 2/10.
struct TestFraction {
  std::uint64_t numerator = 1;
  std::uint64_t denominator = 5;

  static TestFraction parse(std::string_view decimal);
  double value() const;
  std::string to_string() const;
};

struct SplitManifest {
  std::uint64_t seed = 42;
  TestFraction test_fraction;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::string membership_sha256;

  std::string to_json() const;
  static SplitManifest from_json(std::string_view text);
};

// sha256("train\n" + ids joined by '\n' + "\ntest\n" + ids joined by '\n').
std::string membership_digest(const std::vector<std::string>& train_ids,
                              const std::vector<std::string>& test_ids);

// |train| = floor((1 - f) * n). The shuffle is Fisher-Yates from i = n-1 down
// to 1 with j = splitmix64 value mod (i+1); the first n - |train| shuffled
// positions are the test set. Both lists come back in document order.
SplitManifest deterministic_split(const Treebank& tb, std::uint64_t seed,
                                  TestFraction test_fraction);

// Selects sentences named in `ids`, in document order of `tb`.
Treebank select_sentences(const Treebank& tb, const std::vector<std::string>& ids);

}  // namespace kath
