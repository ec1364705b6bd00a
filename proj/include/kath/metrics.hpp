#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "kath/conllu.hpp"

namespace kath {

// A count ratio kept exact; value() is the double the reports carry.
struct Ratio {
  std::size_t numerator = 0;
  std::size_t denominator = 0;

  double value() const {
    return denominator == 0 ? 0.0
                            : static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

struct LabelScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold_support = 0;
  std::size_t predicted = 0;
  std::size_t true_positive = 0;
};

struct EvalOptions {
  // Compare DEPREL only up to the first ':'.
  bool universal_deprel = false;
  // Drop tokens whose gold UPOS is PUNCT from every metric.
  bool exclude_punct = false;
};

struct EvalReport {
  double upos_accuracy = 0.0;
  double deprel_weighted_f1 = 0.0;
  double uas = 0.0;
  double las = 0.0;
  std::size_t token_count = 0;
  std::size_t sentence_count = 0;
  std::map<std::string, LabelScore> per_label;

  // Keys: upos, deprel_f1, uas, las, tokens, sentences, per_label.
  std::string to_json() const;
  static EvalReport from_json(std::string_view text);
};

// Throws Error(kAlignmentMismatch) naming the first offending sentence and
// token when sentence ids, token counts or FORMs differ.
void check_alignment(const Treebank& gold, const Treebank& pred);

Ratio upos_accuracy(const Treebank& gold, const Treebank& pred, const EvalOptions& opts = {});
Ratio uas(const Treebank& gold, const Treebank& pred, const EvalOptions& opts = {});
Ratio las(const Treebank& gold, const Treebank& pred, const EvalOptions& opts = {});

struct WeightedF1 {
  double value = 0.0;
  std::map<std::string, LabelScore> per_label;
};

// Label-only classification F1 (heads ignored), weighted by gold support.
WeightedF1 deprel_weighted_f1(const Treebank& gold, const Treebank& pred,
                              const EvalOptions& opts = {});

// All four metrics from one pass. Throws Error(kEmptyEvaluation) when no
// token is scored.
EvalReport evaluate(const Treebank& gold, const Treebank& pred, const EvalOptions& opts = {});

struct MetricDelta {
  double baseline = 0.0;
  double candidate = 0.0;
  double absolute = 0.0;
  std::optional<double> relative;  // nullopt when the baseline is 0
};

struct ReportDelta {
  MetricDelta upos;
  MetricDelta deprel_f1;
  MetricDelta uas;
  MetricDelta las;

  std::string to_json() const;
};

// candidate - baseline, per metric.
ReportDelta diff_reports(const EvalReport& baseline, const EvalReport& candidate);

}  // namespace kath
