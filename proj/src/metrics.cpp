#include "kath/metrics.hpp"

#include <nlohmann/json.hpp>

#include "kath/error.hpp"

namespace kath {

using nlohmann::json;

namespace {

std::string label_of(const std::string& deprel, const EvalOptions& opts) {
  if (!opts.universal_deprel) return deprel;
  return deprel.substr(0, deprel.find(':'));
}

bool scored(const Token& gold, const EvalOptions& opts) {
  return !(opts.exclude_punct && gold.upos == "PUNCT");
}

struct Counts {
  std::size_t tokens = 0;
  std::size_t upos = 0;
  std::size_t heads = 0;
  std::size_t labeled = 0;
  std::map<std::string, std::size_t> gold_support;
  std::map<std::string, std::size_t> predicted;
  std::map<std::string, std::size_t> true_positive;
};

Counts count(const Treebank& gold, const Treebank& pred, const EvalOptions& opts) {
  check_alignment(gold, pred);
  Counts c;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const auto& gs = gold.sentences[s].tokens;
    const auto& ps = pred.sentences[s].tokens;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (!scored(gs[i], opts)) continue;
      ++c.tokens;
      const bool head_ok = gs[i].head == ps[i].head;
      const std::string gl = label_of(gs[i].deprel, opts);
      const std::string pl = label_of(ps[i].deprel, opts);
      if (gs[i].upos == ps[i].upos) ++c.upos;
      if (head_ok) ++c.heads;
      if (head_ok && gl == pl) ++c.labeled;
      ++c.gold_support[gl];
      ++c.predicted[pl];
      if (gl == pl) ++c.true_positive[gl];
    }
  }
  return c;
}

WeightedF1 weighted_f1(const Counts& c) {
  WeightedF1 out;
  std::map<std::string, LabelScore>& per_label = out.per_label;
  for (const auto& [label, n] : c.gold_support) per_label[label].gold_support = n;
  for (const auto& [label, n] : c.predicted) per_label[label].predicted = n;
  for (const auto& [label, n] : c.true_positive) per_label[label].true_positive = n;
  double weighted_sum = 0.0;  // sum of support * F1; exact when every F1 is 1
  for (auto& [label, score] : per_label) {
    const auto tp = static_cast<double>(score.true_positive);
    score.precision = score.predicted ? tp / static_cast<double>(score.predicted) : 0.0;
    score.recall = score.gold_support ? tp / static_cast<double>(score.gold_support) : 0.0;
    // 2PR/(P+R) simplifies to 2tp/(gold+pred); 0 when tp == 0.
    score.f1 = score.true_positive
                   ? 2.0 * tp / static_cast<double>(score.gold_support + score.predicted)
                   : 0.0;
    weighted_sum += static_cast<double>(score.gold_support) * score.f1;
  }
  if (c.tokens) out.value = weighted_sum / static_cast<double>(c.tokens);
  return out;
}

json metric_json(const MetricDelta& d) {
  return {{"baseline", d.baseline},
          {"candidate", d.candidate},
          {"absolute", d.absolute},
          {"relative", d.relative ? json(*d.relative) : json(nullptr)}};
}

MetricDelta delta(double baseline, double candidate) {
  MetricDelta d{baseline, candidate, candidate - baseline, std::nullopt};
  if (baseline > 0.0) d.relative = d.absolute / baseline;
  return d;
}

}  // namespace

void check_alignment(const Treebank& gold, const Treebank& pred) {
  auto mismatch = [](const std::string& what) { return Error(ErrorCode::kAlignmentMismatch, what); };
  const std::size_t n = std::min(gold.sentences.size(), pred.sentences.size());
  for (std::size_t s = 0; s < n; ++s) {
    const Sentence& g = gold.sentences[s];
    const Sentence& p = pred.sentences[s];
    const std::string where = "sentence " + std::to_string(s + 1) + " ('" + g.sent_id + "')";
    if (g.sent_id != p.sent_id) {
      throw mismatch(where + ": predicted sent_id is '" + p.sent_id + "'");
    }
    if (g.tokens.size() != p.tokens.size()) {
      throw mismatch(where + ": " + std::to_string(g.tokens.size()) + " gold tokens vs " +
                     std::to_string(p.tokens.size()) + " predicted");
    }
    for (std::size_t i = 0; i < g.tokens.size(); ++i) {
      if (g.tokens[i].form != p.tokens[i].form) {
        throw mismatch(where + ", token " + std::to_string(i + 1) + ": FORM '" +
                       g.tokens[i].form + "' vs '" + p.tokens[i].form + "'");
      }
    }
  }
  if (gold.sentences.size() != pred.sentences.size()) {
    throw mismatch("sentence " + std::to_string(n + 1) + ": " +
                   std::to_string(gold.sentences.size()) + " gold sentences vs " +
                   std::to_string(pred.sentences.size()) + " predicted");
  }
}

Ratio upos_accuracy(const Treebank& gold, const Treebank& pred, const EvalOptions& opts) {
  const Counts c = count(gold, pred, opts);
  return {c.upos, c.tokens};
}

Ratio uas(const Treebank& gold, const Treebank& pred, const EvalOptions& opts) {
  const Counts c = count(gold, pred, opts);
  return {c.heads, c.tokens};
}

Ratio las(const Treebank& gold, const Treebank& pred, const EvalOptions& opts) {
  const Counts c = count(gold, pred, opts);
  return {c.labeled, c.tokens};
}

WeightedF1 deprel_weighted_f1(const Treebank& gold, const Treebank& pred,
                              const EvalOptions& opts) {
  return weighted_f1(count(gold, pred, opts));
}

EvalReport evaluate(const Treebank& gold, const Treebank& pred, const EvalOptions& opts) {
  const Counts c = count(gold, pred, opts);
  if (c.tokens == 0) throw Error(ErrorCode::kEmptyEvaluation, "no tokens to score");
  EvalReport r;
  r.token_count = c.tokens;
  r.sentence_count = gold.sentences.size();
  r.upos_accuracy = Ratio{c.upos, c.tokens}.value();
  r.uas = Ratio{c.heads, c.tokens}.value();
  r.las = Ratio{c.labeled, c.tokens}.value();
  auto f1 = weighted_f1(c);
  r.deprel_weighted_f1 = f1.value;
  r.per_label = std::move(f1.per_label);
  return r;
}

std::string EvalReport::to_json() const {
  json labels = json::object();
  for (const auto& [label, s] : per_label) {
    labels[label] = {{"precision", s.precision},       {"recall", s.recall},
                     {"f1", s.f1},                     {"gold_support", s.gold_support},
                     {"predicted", s.predicted},       {"true_positive", s.true_positive}};
  }
  json j = {{"upos", upos_accuracy}, {"deprel_f1", deprel_weighted_f1},
            {"uas", uas},            {"las", las},
            {"tokens", token_count}, {"sentences", sentence_count},
            {"per_label", labels}};
  return j.dump(2) + "\n";
}

EvalReport EvalReport::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    EvalReport r;
    r.upos_accuracy = j.at("upos").get<double>();
    r.deprel_weighted_f1 = j.at("deprel_f1").get<double>();
    r.uas = j.at("uas").get<double>();
    r.las = j.at("las").get<double>();
    r.token_count = j.value("tokens", std::size_t{0});
    r.sentence_count = j.value("sentences", std::size_t{0});
    if (j.contains("per_label")) {
      for (const auto& [label, s] : j.at("per_label").items()) {
        LabelScore score;
        score.precision = s.at("precision").get<double>();
        score.recall = s.at("recall").get<double>();
        score.f1 = s.at("f1").get<double>();
        score.gold_support = s.at("gold_support").get<std::size_t>();
        score.predicted = s.value("predicted", std::size_t{0});
        score.true_positive = s.value("true_positive", std::size_t{0});
        r.per_label.emplace(label, score);
      }
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("bad report: ") + e.what());
  }
}

ReportDelta diff_reports(const EvalReport& a, const EvalReport& b) {
  return {delta(a.upos_accuracy, b.upos_accuracy),
          delta(a.deprel_weighted_f1, b.deprel_weighted_f1), delta(a.uas, b.uas),
          delta(a.las, b.las)};
}

std::string ReportDelta::to_json() const {
  json j = {{"upos", metric_json(upos)},
            {"deprel_f1", metric_json(deprel_f1)},
            {"uas", metric_json(uas)},
            {"las", metric_json(las)}};
  return j.dump(2) + "\n";
}

}  // namespace kath
