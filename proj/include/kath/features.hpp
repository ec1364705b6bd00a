#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kath/conllu.hpp"

namespace kath {

inline constexpr int kDefaultHashBits = 20;

using FeatureIndex = std::uint32_t;

std::uint64_t fnv1a64(std::string_view bytes);

// FNV-1a 64 over "template_id=value", reduced mod 2^hash_bits.
FeatureIndex hash_feature(std::string_view template_id, std::string_view value,
                          int hash_bits = kDefaultHashBits);

// Binary feature set: strictly increasing indices, each with weight 1.
class FeatureVector {
 public:
  FeatureVector() = default;
  static FeatureVector from_unsorted(std::vector<FeatureIndex> indices);

  std::span<const FeatureIndex> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(FeatureIndex index) const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<FeatureIndex> indices_;
};

FeatureVector hash_features(const std::vector<std::string>& features,
                            int hash_bits = kDefaultHashBits);

// "+1", "-2", "+4..7", "-16+", or "ROOT" for head 0.
std::string distance_bucket(int dep, int head);

// Templates for tagging position `i` (1-based). Only prev_tags[0..i-2] are read.
std::vector<std::string> tag_feature_strings(const Sentence& s, int i,
                                             std::span<const std::string> prev_tags);
FeatureVector extract_tag_features(const Sentence& s, int i,
                                   std::span<const std::string> prev_tags,
                                   int hash_bits = kDefaultHashBits);

// Templates for the arc head -> dep; head 0 is the artificial root.
// tags[k-1] is the UPOS of token k. Throws Error(kPrecondition) on bad positions.
std::vector<std::string> arc_feature_strings(const Sentence& s, int dep, int head,
                                             std::span<const std::string> tags);
FeatureVector extract_arc_features(const Sentence& s, int dep, int head,
                                   std::span<const std::string> tags,
                                   int hash_bits = kDefaultHashBits);

}  // namespace kath
