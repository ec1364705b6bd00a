#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kath/conllu.hpp"

namespace kath {

struct ReconstructionConfig {
  std::vector<std::string> hyphen_chars = {"-", "‐", "­"};
  // Line breaks a single hyphenated word may span.
  int max_join_gap = 1;
  int enum_split_threshold = 120;
  std::vector<std::string> boundary_punct = {".", ";", "·", "!", "?"};

  // Throws Error(kPrecondition) on a non-positive threshold or gap.
  void check() const;
};

enum class ReconstructionRule { kDehyphenate, kSplitWordJoin, kBoundaryPunct };

std::string_view to_string(ReconstructionRule rule);

struct AuditEntry {
  ReconstructionRule rule = ReconstructionRule::kDehyphenate;
  std::size_t line = 0;  // 1-based, in the input of the operation
  std::string before;
  std::string after;
};

struct ReconstructionReport {
  std::size_t joins_performed = 0;
  std::size_t hyphens_removed = 0;
  std::size_t boundary_fixes = 0;
  std::size_t long_sentences_flagged = 0;
  std::vector<AuditEntry> audit;

  void record(AuditEntry entry);
  void merge(const ReconstructionReport& other);
  // Recounts from the audit trail.
  std::size_t count(ReconstructionRule rule) const;
};

using Lexicon = std::unordered_set<std::string>;

template <typename T>
struct Reconstructed {
  T value;
  ReconstructionReport report;
};

// Joins a line ending in a hyphen char with the following line when that line
// starts with a letter. Blank lines always block the join.
Reconstructed<std::vector<std::string>> dehyphenate(
    const std::vector<std::string>& lines, const ReconstructionConfig& cfg = {});

// Joins "A B" into "AB" when the lexicon has AB but neither A nor B.
// A null lexicon makes this the identity.
Reconstructed<std::vector<std::string>> join_split_words(
    const std::vector<std::string>& lines, const ReconstructionConfig& cfg,
    const Lexicon* lexicon);

Reconstructed<std::string> normalize_boundary_punct(
    std::string_view text, const ReconstructionConfig& cfg = {});

std::vector<std::string> flag_long_sentences(const Treebank& tb,
                                             const ReconstructionConfig& cfg = {});

Lexicon load_lexicon(const std::string& path);

}  // namespace kath
