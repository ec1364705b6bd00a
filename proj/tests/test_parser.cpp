#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "kath/error.hpp"
#include "kath/features.hpp"
#include "kath/linear_model.hpp"
#include "kath/metrics.hpp"
#include "kath/parser.hpp"
#include "kath/validate.hpp"
#include "synthetic.hpp"

namespace kath {
namespace {

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

Sentence forms(std::vector<std::string> words) {
  Sentence s;
  s.set_sent_id("f");
  for (std::size_t i = 0; i < words.size(); ++i) {
    Token t;
    t.id = static_cast<int>(i + 1);
    t.form = words[i];
    s.tokens.push_back(t);
  }
  return s;
}

Sentence with_heads(const std::vector<int>& heads) {
  Sentence s = forms(std::vector<std::string>(heads.size(), "x"));
  for (std::size_t i = 0; i < heads.size(); ++i) {
    s.tokens[i].upos = "NOUN";
    s.tokens[i].head = heads[i];
    s.tokens[i].deprel = heads[i] == 0 ? "root" : "dep";
  }
  return s;
}

std::vector<int> heads_of(const Sentence& s) {
  std::vector<int> out;
  for (const auto& t : s.tokens) out.push_back(t.head);
  return out;
}

TEST(Hashing, FnvReferenceValues) {
  // Reference values from an independent FNV-1a implementation.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("w0="), 6867477167920732061ull);
  EXPECT_EQ(hash_feature("w0", ""), 350109u);
  EXPECT_EQ(hash_feature("hf", "<ROOT>"), 701544u);
  EXPECT_EQ(hash_feature("w0", "λόγος"), hash_feature("w0", "λόγος"));
  std::mt19937 rng(1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(hash_feature("x", std::to_string(rng())), 1u << 20);
  }
}

TEST(Features, VectorIsSortedUnique) {
  const FeatureVector fv = FeatureVector::from_unsorted({5, 1, 5, 3});
  EXPECT_EQ(std::vector<FeatureIndex>(fv.indices().begin(), fv.indices().end()),
            (std::vector<FeatureIndex>{1, 3, 5}));
  EXPECT_TRUE(fv.contains(3));
  EXPECT_FALSE(fv.contains(4));
}

TEST(Features, TagTemplates) {
  const Sentence s = forms({"Ἡ", "ΒΟΥΛΗ", "1976", "."});
  const std::vector<std::string> prev = {"DET", "NOUN", "NUM"};
  const auto first = tag_feature_strings(s, 1, prev);
  EXPECT_TRUE(contains(first, "w-1=<BOS>"));
  EXPECT_TRUE(contains(first, "w-2=<BOS>"));
  EXPECT_TRUE(contains(first, "w0=Ἡ"));
  EXPECT_TRUE(contains(first, "lw0=ἡ"));
  EXPECT_TRUE(contains(tag_feature_strings(s, 2, prev), "caps=1"));
  const auto num = tag_feature_strings(s, 3, prev);
  EXPECT_TRUE(contains(num, "dig=1"));
  EXPECT_TRUE(contains(num, "t-1=NOUN"));
  EXPECT_TRUE(contains(num, "t-2,t-1=DET|NOUN"));
  const auto last = tag_feature_strings(s, 4, prev);
  EXPECT_TRUE(contains(last, "punct=1"));
  EXPECT_TRUE(contains(last, "w+1=<EOS>"));
  EXPECT_EQ(extract_tag_features(s, 3, prev), extract_tag_features(s, 3, prev));
}

TEST(Features, ArcTemplates) {
  const Sentence s = forms({"ὁ", "νόμος", ",", "ψηφίζεται"});
  const std::vector<std::string> tags = {"DET", "NOUN", "PUNCT", "VERB"};
  const auto root = arc_feature_strings(s, 4, 0, tags);
  EXPECT_TRUE(contains(root, "hf=<ROOT>"));
  EXPECT_TRUE(contains(root, "dist=ROOT"));
  EXPECT_TRUE(contains(arc_feature_strings(s, 3, 2, tags), "dist=-1"));
  const auto left = arc_feature_strings(s, 2, 4, tags);
  const auto right = arc_feature_strings(s, 4, 2, tags);
  EXPECT_TRUE(contains(left, "dir=R"));
  EXPECT_TRUE(contains(right, "dir=L"));
  EXPECT_TRUE(contains(left, "punct=1"));
  EXPECT_THROW(arc_feature_strings(s, 2, 2, tags), Error);
  EXPECT_THROW(arc_feature_strings(s, 5, 0, tags), Error);
}

TEST(Features, DistanceBuckets) {
  EXPECT_EQ(distance_bucket(3, 2), "-1");
  EXPECT_EQ(distance_bucket(1, 3), "+2");
  EXPECT_EQ(distance_bucket(1, 4), "+3");
  EXPECT_EQ(distance_bucket(1, 6), "+4..7");
  EXPECT_EQ(distance_bucket(1, 9), "+8..15");
  EXPECT_EQ(distance_bucket(20, 1), "-16+");
  EXPECT_EQ(distance_bucket(5, 0), "ROOT");
}

// Central differences on a 3-class, 5-feature model.
TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  LinearModel<double> m({"a", "b", "c"}, 5);
  for (Eigen::Index c = 0; c < 3; ++c) {
    m.bias(c) = normal(rng);
    for (Eigen::Index j = 0; j < 5; ++j) m.weights(c, j) = normal(rng);
  }
  const FeatureVector fv = FeatureVector::from_unsorted({0, 2, 3});
  const double h = 1e-5;
  for (Eigen::Index gold = 0; gold < 3; ++gold) {
    const LossGradient<double> g = cross_entropy_gradient(m, fv, gold);
    auto loss = [&] { return cross_entropy(m.scores(fv), gold); };
    auto check = [&](double& param, double analytic) {
      const double saved = param;
      param = saved + h;
      const double up = loss();
      param = saved - h;
      const double down = loss();
      param = saved;
      const double numeric = (up - down) / (2 * h);
      const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      EXPECT_LT(std::abs(analytic - numeric) / scale, 1e-6) << analytic << " vs " << numeric;
    };
    for (Eigen::Index c = 0; c < 3; ++c) {
      check(m.bias(c), g.bias(c));
      for (Eigen::Index j = 0; j < 5; ++j) {
        if (fv.contains(static_cast<FeatureIndex>(j))) check(m.weights(c, j), g.weights(c, j));
        else EXPECT_EQ(g.weights(c, j), 0.0);
      }
    }
  }
}

TEST(Gradient, CandidateSoftmaxMatchesFiniteDifferences) {
  LinearModel<double> m({"arc"}, 6);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index j = 0; j < 6; ++j) m.weights(0, j) = normal(rng);
  const std::vector<FeatureVector> cands = {FeatureVector::from_unsorted({0, 1}),
                                            FeatureVector::from_unsorted({1, 4}),
                                            FeatureVector::from_unsorted({2, 3, 5})};
  const std::span<const FeatureVector> span(cands);
  const LossGradient<double> g = candidate_cross_entropy_gradient(m, span, 1);
  const double h = 1e-5;
  for (Eigen::Index j = 0; j < 6; ++j) {
    const double saved = m.weights(0, j);
    m.weights(0, j) = saved + h;
    const double up = cross_entropy(candidate_scores(m, span), 1);
    m.weights(0, j) = saved - h;
    const double down = cross_entropy(candidate_scores(m, span), 1);
    m.weights(0, j) = saved;
    const double numeric = (up - down) / (2 * h);
    const double scale = std::max({std::abs(g.weights(0, j)), std::abs(numeric), 1e-8});
    EXPECT_LT(std::abs(g.weights(0, j) - numeric) / scale, 1e-6);
  }
  EXPECT_NEAR(softmax(candidate_scores(m, span)).sum(), 1.0, 1e-12);
}

// The lazy-scale trainer must agree with a dense update w <- (1 - lr*l2) w - lr*g.
TEST(Sgd, LazyScaleMatchesDenseUpdate) {
  LinearModel<double> lazy({"a", "b"}, 4);
  LinearModel<double> dense({"a", "b"}, 4);
  SgdTrainer<double>::Schedule schedule{0.5, 0.1, 0.05};
  SgdTrainer<double> trainer(lazy, schedule);
  const std::vector<std::pair<FeatureVector, Eigen::Index>> data = {
      {FeatureVector::from_unsorted({0, 1}), 0},
      {FeatureVector::from_unsorted({1, 2}), 1},
      {FeatureVector::from_unsorted({3}), 0}};
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < 5; ++epoch) {
    for (const auto& [fv, gold] : data) {
      const Eigen::VectorXd g_lazy = cross_entropy_score_gradient(trainer.scores(fv), gold);
      trainer.update(fv, g_lazy);

      const double lr = schedule.lr0 / (1.0 + schedule.decay * static_cast<double>(t++));
      const Eigen::VectorXd g = cross_entropy_score_gradient(dense.scores(fv), gold);
      dense.weights *= 1.0 - lr * schedule.l2;
      for (FeatureIndex idx : fv.indices()) dense.weights.col(idx) -= lr * g;
      dense.bias -= lr * g;
    }
  }
  trainer.finish();
  EXPECT_LT((lazy.weights - dense.weights).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((lazy.bias - dense.bias).cwiseAbs().maxCoeff(), 1e-12);
}

ParserConfig small_config(int epochs) {
  ParserConfig c;
  c.hash_bits = 16;
  c.epochs = epochs;
  return c;
}

TEST(Train, Errors) {
  try {
    train(Treebank{}, small_config(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyTrainingSet);
  }
  Treebank bad;
  bad.sentences.push_back(with_heads({0, 7}));
  try {
    train(bad, small_config(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoValidSentences);
  }
}

TEST(Train, ZeroEpochsTiesToFirstClassAndRoot) {
  const Treebank tb = test::synthetic_corpus(3, 1);
  const ParserModel m = train(tb, small_config(0));
  EXPECT_EQ(m.tagger.weights.cwiseAbs().maxCoeff(), 0.0f);
  const Sentence p = predict_sentence(m, tb.sentences[0]);
  for (const auto& t : p.tokens) {
    EXPECT_EQ(t.upos, m.tagger.class_labels[0]);
    EXPECT_EQ(t.head, 0);
    EXPECT_EQ(t.deprel, m.labeler.class_labels[0]);
  }
}

TEST(Train, OverfitsOneSentence) {
  Treebank tb = test::synthetic_corpus(1, 8);
  const ParserModel m = train(tb, small_config(20));
  const Sentence p = predict_sentence(m, tb.sentences[0]);
  for (std::size_t i = 0; i < p.tokens.size(); ++i) {
    EXPECT_EQ(p.tokens[i].upos, tb.sentences[0].tokens[i].upos);
    EXPECT_EQ(p.tokens[i].head, tb.sentences[0].tokens[i].head);
  }
}

TEST(Train, DeterministicAndSerializable) {
  const Treebank tb = test::synthetic_corpus(10, 2);
  const ParserModel a = train(tb, small_config(3));
  const ParserModel b = train(tb, small_config(3));
  const std::string bytes = serialize_model(a);
  EXPECT_EQ(bytes, serialize_model(b));
  const ParserModel back = deserialize_model(bytes);
  EXPECT_EQ(serialize_model(back), bytes);
  EXPECT_EQ(serialize_treebank(predict_treebank(back, tb)), serialize_treebank(predict_treebank(a, tb)));
}

TEST(ModelFile, RejectsCorruption) {
  const ParserModel m = train(test::synthetic_corpus(2, 3), small_config(1));
  const std::string bytes = serialize_model(m);
  auto code_of = [](const std::string& b) {
    try {
      deserialize_model(b);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(code_of(bad_magic), ErrorCode::kBadModelFile);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_EQ(code_of(bad_version), ErrorCode::kBadModelFile);
  EXPECT_EQ(code_of(bytes.substr(0, bytes.size() - 3)), ErrorCode::kBadModelFile);
  EXPECT_EQ(code_of(bytes + "x"), ErrorCode::kBadModelFile);
}

TEST(Predict, HeadsStayInWindowAndDistributionSums) {
  const Treebank tb = test::synthetic_corpus(5, 4);
  ParserConfig c = small_config(2);
  c.window = 2;
  const ParserModel m = train(tb, c);
  for (const auto& s : tb.sentences) {
    const Sentence p = predict_sentence(m, s);
    std::vector<std::string> tags;
    for (const auto& t : p.tokens) tags.push_back(t.upos);
    for (const auto& t : p.tokens) {
      EXPECT_TRUE(t.head == 0 || std::abs(t.head - t.id) <= 2);
      EXPECT_NEAR(head_distribution(m, p, t.id, tags).sum(), 1.0, 1e-9);
    }
  }
}

TEST(Repair, Examples) {
  EXPECT_EQ(heads_of(repair_tree(with_heads({0, 0, 1}))), (std::vector<int>{0, 1, 1}));
  EXPECT_EQ(heads_of(repair_tree(with_heads({2, 1}))), (std::vector<int>{0, 1}));
  const Sentence ok = with_heads({2, 0, 2});
  EXPECT_EQ(repair_tree(ok), ok);
  Sentence labelled = with_heads({0, 0});
  labelled.tokens[1].deprel = "conj";
  EXPECT_EQ(repair_tree(labelled).tokens[1].deprel, "conj");
}

TEST(Repair, RandomHeadsBecomeStrictTrees) {
  std::mt19937_64 rng(12);
  for (int iter = 0; iter < 2000; ++iter) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    std::vector<int> heads(static_cast<std::size_t>(n));
    for (auto& h : heads) h = std::uniform_int_distribution<int>(-1, n + 1)(rng);
    const Sentence r = repair_tree(with_heads(heads));
    EXPECT_TRUE(is_well_formed_tree(r));
    for (const auto& issue : validate_sentence(r, Strictness::kStrict)) {
      EXPECT_EQ(issue.severity, Severity::kWarning) << to_string(issue.code);
    }
  }
}

TEST(Train, LearnsSyntheticCorpus) {
  const Treebank tb = test::synthetic_corpus(50, 42);
  const ParserModel m = train(tb, small_config(20));
  const EvalReport r = evaluate(tb, predict_treebank(m, tb));
  EXPECT_GE(r.upos_accuracy, 0.95);
  EXPECT_GE(r.uas, 0.90);
}

}  // namespace
}  // namespace kath
