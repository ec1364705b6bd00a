#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kath/conllu.hpp"
#include "kath/features.hpp"
#include "kath/linear_model.hpp"

namespace kath {

struct ParserConfig {
  int window = 16;
  int hash_bits = kDefaultHashBits;
  int epochs = 10;
  double lr0 = 0.1;
  double decay = 1e-4;
  double l2 = 1e-6;
  std::uint64_t seed = 42;
  // Sentences with structural errors at this profile are left out of training.
  Strictness admit = Strictness::kLenient;

  void check() const;
};

// Greedy baseline: UPOS tagger, arc scorer (single row, softmax across the
// candidate heads of one dependent) and DEPREL labeler. All three share the
// hash dimension 2^hash_bits.
struct ParserModel {
  ParserConfig config;
  LinearModel<float> tagger;
  LinearModel<float> arc_scorer;
  LinearModel<float> labeler;
};

// Candidate heads at inference: 0, then every h within `window` of dep.
std::vector<int> candidate_heads(int dep, int n, int window);

// Deterministic single-threaded SGD, sentences in file order.
// Throws Error(kEmptyTrainingSet) or Error(kNoValidSentences).
ParserModel train(const Treebank& train_tb, const ParserConfig& config);

// Greedy tags, then per-dependent argmax head, then label. The result may
// violate tree constraints.
Sentence predict_sentence(const ParserModel& model, const Sentence& sentence);
Treebank predict_treebank(const ParserModel& model, const Treebank& tb);

// Softmax over candidate_heads(dep, n, window) given tags.
Eigen::VectorXd head_distribution(const ParserModel& model, const Sentence& sentence, int dep,
                                  const std::vector<std::string>& tags);

// Keeps the first root and hangs other roots under it; breaks each cycle by
// attaching its lowest-position member to the root. Labels are untouched.
Sentence repair_tree(Sentence sentence);

// Binary container: "KTHB", version, config block, then per component the
// class list and little-endian float32 weight rows.
inline constexpr std::uint32_t kModelFormatVersion = 1;
std::string serialize_model(const ParserModel& model);
ParserModel deserialize_model(std::string_view bytes);
void save_model(const std::string& path, const ParserModel& model);
ParserModel load_model(const std::string& path);

}  // namespace kath
