#include "kath/validate.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_set>

namespace kath {

namespace {

struct Structure {
  std::vector<int> out_of_range;           // 1-based positions
  std::vector<int> roots;                  // 1-based positions
  std::vector<std::vector<int>> cycles;    // members, ascending
};

Structure analyze(const Sentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  Structure out;
  std::vector<int> head(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    head[i] = s.tokens[i - 1].head;
    if (head[i] < 0 || head[i] > n) out.out_of_range.push_back(i);
    if (head[i] == 0) out.roots.push_back(i);
  }

  // 0 = unvisited, 1 = on the current walk, 2 = resolved.
  std::vector<int> mark(n + 1, 0);
  for (int start = 1; start <= n; ++start) {
    if (mark[start]) continue;
    std::vector<int> path;
    int v = start;
    while (v >= 1 && v <= n && mark[v] == 0) {
      mark[v] = 1;
      path.push_back(v);
      v = head[v];
    }
    if (v >= 1 && v <= n && mark[v] == 1) {
      auto it = std::find(path.begin(), path.end(), v);
      std::vector<int> members(it, path.end());
      std::sort(members.begin(), members.end());
      out.cycles.push_back(std::move(members));
    }
    for (int p : path) mark[p] = 2;
  }
  std::sort(out.cycles.begin(), out.cycles.end());
  return out;
}

bool descends_from(const std::vector<int>& head, int node, int ancestor) {
  const int n = static_cast<int>(head.size()) - 1;
  for (int steps = 0; node != 0 && steps <= n; ++steps) {
    if (node == ancestor) return true;
    node = head[node];
  }
  return ancestor == 0;
}

// First dependent whose arc spans a token not dominated by its head.
std::optional<int> first_nonprojective(const Sentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  std::vector<int> head(n + 1, 0);
  for (int i = 1; i <= n; ++i) head[i] = s.tokens[i - 1].head;
  for (int d = 1; d <= n; ++d) {
    const int h = head[d];
    const int lo = std::min(h, d);
    const int hi = std::max(h, d);
    for (int k = lo + 1; k < hi; ++k) {
      if (!descends_from(head, k, h)) return d;
    }
  }
  return std::nullopt;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

bool is_well_formed_tree(const Sentence& s) {
  if (s.tokens.empty()) return false;
  const Structure st = analyze(s);
  return st.out_of_range.empty() && st.roots.size() == 1 && st.cycles.empty();
}

std::vector<ValidationIssue> validate_sentence(const Sentence& s,
                                               Strictness profile,
                                               const AnnotationSchema& schema) {
  std::vector<ValidationIssue> issues;
  auto add = [&](IssueCode code, std::optional<int> token, std::string message) {
    issues.push_back({s.sent_id, token, code, severity_for(code, profile),
                      std::move(message)});
  };

  const Structure st = analyze(s);
  for (int i : st.out_of_range) {
    add(IssueCode::kHeadOutOfRange, i,
        "head " + std::to_string(s.tokens[i - 1].head) + " outside 0.." +
            std::to_string(s.tokens.size()));
  }
  if (!s.tokens.empty() && st.roots.empty()) {
    add(IssueCode::kNoRoot, std::nullopt, "no token attached to 0");
  }
  if (st.roots.size() > 1) {
    add(IssueCode::kMultiRoot, st.roots[1],
        "tokens " + join_ids(st.roots) + " are all attached to 0");
  }
  for (const auto& cycle : st.cycles) {
    add(IssueCode::kCycle, cycle.front(), "cycle through tokens " + join_ids(cycle));
  }
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    const int pos = static_cast<int>(i) + 1;
    if (!schema.upos_set.contains(t.upos)) {
      add(IssueCode::kBadUpos, pos, "UPOS '" + t.upos + "' not in schema");
    }
    if (!schema.deprel_set.contains(t.deprel)) {
      add(IssueCode::kBadDeprel, pos, "DEPREL '" + t.deprel + "' not in schema");
    }
  }
  if (is_well_formed_tree(s)) {
    if (auto d = first_nonprojective(s)) {
      add(IssueCode::kNonprojectiveInfo, *d, "non-projective arc");
    }
  }
  return issues;
}

std::vector<ValidationIssue> validate_treebank(const Treebank& tb,
                                               Strictness profile,
                                               const AnnotationSchema& schema) {
  std::vector<ValidationIssue> issues;
  for (auto issue : tb.parse_issues) {
    issue.severity = severity_for(issue.code, profile);
    issues.push_back(std::move(issue));
  }
  std::unordered_set<std::string> seen;
  for (const auto& s : tb.sentences) {
    auto sentence_issues = validate_sentence(s, profile, schema);
    issues.insert(issues.end(), std::make_move_iterator(sentence_issues.begin()),
                  std::make_move_iterator(sentence_issues.end()));
    if (!s.sent_id.empty() && !seen.insert(s.sent_id).second) {
      issues.push_back({s.sent_id, std::nullopt, IssueCode::kDuplicateSentId,
                        severity_for(IssueCode::kDuplicateSentId, profile),
                        "sent_id '" + s.sent_id + "' already used"});
    }
  }
  return issues;
}

bool has_errors(const std::vector<ValidationIssue>& issues) {
  return std::any_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
    return i.severity == Severity::kError;
  });
}

}  // namespace kath
