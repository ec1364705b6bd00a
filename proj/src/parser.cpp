#include "kath/parser.hpp"

#include <algorithm>
#include <set>

#include "kath/error.hpp"
#include "kath/validate.hpp"

namespace kath {

namespace {

using Trainer = SgdTrainer<float>;

bool admissible(const Sentence& s, Strictness profile) {
  if (s.tokens.empty()) return false;
  // The label inventory is learned from the data, so only structure counts.
  for (const auto& issue : validate_sentence(s, profile)) {
    if (issue.severity != Severity::kError) continue;
    if (issue.code == IssueCode::kBadUpos || issue.code == IssueCode::kBadDeprel) continue;
    return false;
  }
  return true;
}

Eigen::Index class_index(const std::vector<std::string>& labels, const std::string& label) {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  return static_cast<Eigen::Index>(it - labels.begin());
}

std::vector<std::string> upos_of(const Sentence& s) {
  std::vector<std::string> tags;
  tags.reserve(s.tokens.size());
  for (const auto& t : s.tokens) tags.push_back(t.upos);
  return tags;
}

std::vector<FeatureVector> candidate_features(const Sentence& s, int dep,
                                              const std::vector<int>& heads,
                                              const std::vector<std::string>& tags,
                                              int hash_bits) {
  std::vector<FeatureVector> out;
  out.reserve(heads.size());
  for (int h : heads) out.push_back(extract_arc_features(s, dep, h, tags, hash_bits));
  return out;
}

}  // namespace

void ParserConfig::check() const {
  if (window < 1) throw Error(ErrorCode::kPrecondition, "window must be >= 1");
  if (hash_bits < 1 || hash_bits > 30) {
    throw Error(ErrorCode::kPrecondition, "hash_bits must lie in 1..30");
  }
  if (epochs < 0) throw Error(ErrorCode::kPrecondition, "epochs must be >= 0");
  if (!(lr0 > 0.0) || decay < 0.0 || l2 < 0.0) {
    throw Error(ErrorCode::kPrecondition, "invalid learning schedule");
  }
}

std::vector<int> candidate_heads(int dep, int n, int window) {
  std::vector<int> heads{0};
  for (int h = std::max(1, dep - window); h <= std::min(n, dep + window); ++h) {
    if (h != dep) heads.push_back(h);
  }
  return heads;
}

ParserModel train(const Treebank& train_tb, const ParserConfig& config) {
  config.check();
  if (train_tb.sentences.empty()) {
    throw Error(ErrorCode::kEmptyTrainingSet, "training treebank has no sentences");
  }
  std::vector<const Sentence*> corpus;
  for (const auto& s : train_tb.sentences) {
    if (admissible(s, config.admit)) corpus.push_back(&s);
  }
  if (corpus.empty()) {
    throw Error(ErrorCode::kNoValidSentences,
                "no sentence passes " + std::string(to_string(config.admit)) + " validation");
  }

  std::set<std::string> upos_set;
  std::set<std::string> deprel_set;
  for (const Sentence* s : corpus) {
    for (const auto& t : s->tokens) {
      upos_set.insert(t.upos);
      deprel_set.insert(t.deprel);
    }
  }
  const Eigen::Index dim = Eigen::Index{1} << config.hash_bits;

  ParserModel model;
  model.config = config;
  model.tagger = LinearModel<float>({upos_set.begin(), upos_set.end()}, dim);
  model.arc_scorer = LinearModel<float>({"arc"}, dim);
  model.labeler = LinearModel<float>({deprel_set.begin(), deprel_set.end()}, dim);

  const Trainer::Schedule schedule{config.lr0, config.decay, config.l2};
  Trainer tagger(model.tagger, schedule);
  Trainer arcs(model.arc_scorer, schedule);
  Trainer labeler(model.labeler, schedule);
  const int bits = config.hash_bits;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (const Sentence* sp : corpus) {
      const Sentence& s = *sp;
      const int n = static_cast<int>(s.tokens.size());
      const std::vector<std::string> tags = upos_of(s);

      for (int i = 1; i <= n; ++i) {
        const FeatureVector fv = extract_tag_features(s, i, tags, bits);
        const Eigen::Index gold = class_index(model.tagger.class_labels, tags[i - 1]);
        tagger.update(fv, cross_entropy_score_gradient(tagger.scores(fv), gold));
      }

      for (int dep = 1; dep <= n; ++dep) {
        const int gold_head = s.tokens[dep - 1].head;
        std::vector<int> heads = candidate_heads(dep, n, config.window);
        if (std::find(heads.begin(), heads.end(), gold_head) == heads.end()) {
          heads.insert(std::upper_bound(heads.begin() + 1, heads.end(), gold_head), gold_head);
        }
        const auto gold = static_cast<Eigen::Index>(
            std::find(heads.begin(), heads.end(), gold_head) - heads.begin());
        const auto fvs = candidate_features(s, dep, heads, tags, bits);
        arcs.update_candidates(fvs, cross_entropy_score_gradient(arcs.candidate_scores(fvs), gold));

        const FeatureVector lf = extract_arc_features(s, dep, gold_head, tags, bits);
        const Eigen::Index gold_label =
            class_index(model.labeler.class_labels, s.tokens[dep - 1].deprel);
        labeler.update(lf, cross_entropy_score_gradient(labeler.scores(lf), gold_label));
      }
    }
  }
  tagger.finish();
  arcs.finish();
  labeler.finish();

  for (auto* m : {&model.tagger, &model.arc_scorer, &model.labeler}) {
    m->trained_epochs = static_cast<std::uint32_t>(config.epochs);
    m->seed = config.seed;
  }
  return model;
}

Eigen::VectorXd head_distribution(const ParserModel& model, const Sentence& s, int dep,
                                  const std::vector<std::string>& tags) {
  const int n = static_cast<int>(s.tokens.size());
  const auto heads = candidate_heads(dep, n, model.config.window);
  const auto fvs = candidate_features(s, dep, heads, tags, model.config.hash_bits);
  return softmax(candidate_scores(model.arc_scorer, std::span<const FeatureVector>(fvs)));
}

Sentence predict_sentence(const ParserModel& model, const Sentence& sentence) {
  Sentence out = sentence;
  const int n = static_cast<int>(out.tokens.size());
  const int bits = model.config.hash_bits;

  std::vector<std::string> tags;
  tags.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const FeatureVector fv = extract_tag_features(out, i, tags, bits);
    tags.push_back(model.tagger.class_labels[static_cast<std::size_t>(
        argmax(model.tagger.scores(fv)))]);
  }

  for (int dep = 1; dep <= n; ++dep) {
    const auto heads = candidate_heads(dep, n, model.config.window);
    const auto fvs = candidate_features(out, dep, heads, tags, bits);
    const int head = heads[static_cast<std::size_t>(
        argmax(candidate_scores(model.arc_scorer, std::span<const FeatureVector>(fvs))))];
    const FeatureVector lf = extract_arc_features(out, dep, head, tags, bits);
    Token& t = out.tokens[dep - 1];
    t.upos = tags[dep - 1];
    t.head = head;
    t.deprel = model.labeler.class_labels[static_cast<std::size_t>(
        argmax(model.labeler.scores(lf)))];
  }
  return out;
}

Treebank predict_treebank(const ParserModel& model, const Treebank& tb) {
  Treebank out;
  out.source_path = tb.source_path;
  out.sentences.reserve(tb.sentences.size());
  for (const auto& s : tb.sentences) out.sentences.push_back(predict_sentence(model, s));
  return out;
}

Sentence repair_tree(Sentence s) {
  const int n = static_cast<int>(s.tokens.size());
  if (n == 0) return s;
  auto head = [&](int pos) -> int& { return s.tokens[pos - 1].head; };

  int root = 0;
  for (int i = 1; i <= n; ++i) {
    if (head(i) == 0) {
      root = i;
      break;
    }
  }
  // Heads pointing outside the sentence or at themselves.
  for (int i = 1; i <= n; ++i) {
    if (head(i) < 0 || head(i) > n || head(i) == i) {
      if (root == 0) {
        root = i;
        head(i) = 0;
      } else {
        head(i) = root;
      }
    }
  }
  for (int i = 1; i <= n; ++i) {
    if (i != root && head(i) == 0) head(i) = root;
  }

  // Any walk of more than n steps is caught in a cycle.
  for (int start = 1; start <= n; ++start) {
    int v = start;
    int steps = 0;
    while (v != 0 && steps <= n) {
      v = head(v);
      ++steps;
    }
    if (v == 0) continue;
    // v now lies on the cycle; collect it and detach its lowest member.
    int lowest = v;
    for (int u = head(v); u != v; u = head(u)) lowest = std::min(lowest, u);
    if (root == 0) {
      root = lowest;
      head(lowest) = 0;
    } else {
      head(lowest) = root;
    }
  }
  return s;
}

}  // namespace kath
