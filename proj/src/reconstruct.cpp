#include "kath/reconstruct.hpp"

#include <algorithm>

#include "kath/error.hpp"
#include "kath/io.hpp"
#include "kath/unicode.hpp"

namespace kath {

namespace {

bool is_space(char32_t cp) { return cp == ' ' || cp == '\t'; }

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

bool has_space(std::string_view line) {
  return line.find_first_of(" \t") != std::string_view::npos;
}

// Byte width of the trailing hyphen char, 0 when the line has none.
// Width of a line-break hyphen ending `line`; the hyphen must follow a letter.
std::size_t trailing_hyphen(std::string_view line, const ReconstructionConfig& cfg) {
  for (const auto& h : cfg.hyphen_chars) {
    if (h.empty() || line.size() <= h.size() || !line.ends_with(h)) continue;
    auto before = utf8::last(line.substr(0, line.size() - h.size()));
    return before && utf8::is_letter(*before) ? h.size() : 0;
  }
  return 0;
}

bool starts_with_letter(std::string_view line) {
  auto cp = utf8::first(line);
  return cp && utf8::is_letter(*cp);
}

std::string_view last_word(std::string_view line) {
  const std::size_t sp = line.find_last_of(" \t");
  return sp == std::string_view::npos ? line : line.substr(sp + 1);
}

std::string_view first_word(std::string_view line) {
  return line.substr(0, line.find_first_of(" \t"));
}

bool letters_only(const std::vector<char32_t>& cps, std::size_t lo, std::size_t hi) {
  if (lo >= hi) return false;
  for (std::size_t i = lo; i < hi; ++i) {
    if (!utf8::is_letter(cps[i])) return false;
  }
  return true;
}

// Left fragment: optional leading non-letters, then letters only.
std::optional<std::string> left_core(std::string_view word) {
  const auto cps = utf8::code_points(word);
  std::size_t lo = 0;
  while (lo < cps.size() && !utf8::is_letter(cps[lo])) ++lo;
  if (!letters_only(cps, lo, cps.size())) return std::nullopt;
  return utf8::encode({cps.begin() + static_cast<std::ptrdiff_t>(lo), cps.end()});
}

// Right fragment: letters only, then optional trailing non-letters.
std::optional<std::string> right_core(std::string_view word) {
  const auto cps = utf8::code_points(word);
  std::size_t hi = cps.size();
  while (hi > 0 && !utf8::is_letter(cps[hi - 1])) --hi;
  if (!letters_only(cps, 0, hi)) return std::nullopt;
  return utf8::encode({cps.begin(), cps.begin() + static_cast<std::ptrdiff_t>(hi)});
}

}  // namespace

void ReconstructionConfig::check() const {
  if (enum_split_threshold <= 0) {
    throw Error(ErrorCode::kPrecondition, "enum_split_threshold must be > 0");
  }
  if (max_join_gap <= 0) {
    throw Error(ErrorCode::kPrecondition, "max_join_gap must be > 0");
  }
}

std::string_view to_string(ReconstructionRule rule) {
  switch (rule) {
    case ReconstructionRule::kDehyphenate: return "dehyphenate";
    case ReconstructionRule::kSplitWordJoin: return "split_word_join";
    case ReconstructionRule::kBoundaryPunct: return "boundary_punct";
  }
  return "unknown";
}

void ReconstructionReport::record(AuditEntry entry) {
  switch (entry.rule) {
    case ReconstructionRule::kDehyphenate: ++hyphens_removed; break;
    case ReconstructionRule::kSplitWordJoin: ++joins_performed; break;
    case ReconstructionRule::kBoundaryPunct: ++boundary_fixes; break;
  }
  audit.push_back(std::move(entry));
}

void ReconstructionReport::merge(const ReconstructionReport& other) {
  for (const auto& e : other.audit) record(e);
  long_sentences_flagged += other.long_sentences_flagged;
}

std::size_t ReconstructionReport::count(ReconstructionRule rule) const {
  return static_cast<std::size_t>(std::count_if(
      audit.begin(), audit.end(), [&](const AuditEntry& e) { return e.rule == rule; }));
}

Reconstructed<std::vector<std::string>> dehyphenate(
    const std::vector<std::string>& lines, const ReconstructionConfig& cfg) {
  cfg.check();
  Reconstructed<std::vector<std::string>> out;
  const std::size_t n = lines.size();

  auto mergeable = [&](std::size_t i) {
    return i + 1 < n && trailing_hyphen(lines[i], cfg) > 0 &&
           !is_blank(lines[i + 1]) && starts_with_letter(lines[i + 1]);
  };

  std::size_t i = 0;
  while (i < n) {
    std::string current = lines[i];
    std::size_t at = i;  // line whose end `current` currently carries
    while (mergeable(at)) {
      // Lines at+1..last are the continuation of one word.
      std::size_t last = at + 1;
      int breaks = 1;
      while (!has_space(lines[last]) && mergeable(last)) {
        ++last;
        ++breaks;
      }
      if (breaks > cfg.max_join_gap) {
        out.value.push_back(std::move(current));
        for (std::size_t k = at + 1; k < last; ++k) out.value.push_back(lines[k]);
        current = lines[last];
        at = last;
        continue;
      }
      for (std::size_t k = at; k < last; ++k) {
        const std::string_view tail = k == at ? std::string_view(current) : lines[k];
        const std::size_t width = trailing_hyphen(tail, cfg);
        const std::string_view fragment = last_word(tail);
        const std::string_view next = first_word(lines[k + 1]);
        std::string joined(fragment.substr(0, fragment.size() - width));
        joined += next;
        out.report.record({ReconstructionRule::kDehyphenate, k + 1,
                           std::string(fragment) + "\n" + std::string(next), joined});
      }
      for (std::size_t k = at; k < last; ++k) {
        current.resize(current.size() - trailing_hyphen(current, cfg));
        current += lines[k + 1];
      }
      at = last;
    }
    out.value.push_back(std::move(current));
    i = at + 1;
  }
  return out;
}

Reconstructed<std::vector<std::string>> join_split_words(
    const std::vector<std::string>& lines, const ReconstructionConfig& cfg,
    const Lexicon* lexicon) {
  cfg.check();
  Reconstructed<std::vector<std::string>> out;
  if (lexicon == nullptr) {
    out.value = lines;
    return out;
  }
  for (std::size_t line_no = 0; line_no < lines.size(); ++line_no) {
    const std::string& line = lines[line_no];
    // Alternating runs: words and the whitespace between them.
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const bool space = line[pos] == ' ' || line[pos] == '\t';
      std::size_t end = pos;
      while (end < line.size() && ((line[end] == ' ' || line[end] == '\t') == space)) ++end;
      parts.push_back(line.substr(pos, end - pos));
      pos = end;
    }
    auto is_word = [](const std::string& p) { return p[0] != ' ' && p[0] != '\t'; };

    for (std::size_t k = 0; k + 2 < parts.size(); ++k) {
      if (!is_word(parts[k]) || parts[k + 1] != " " || !is_word(parts[k + 2])) continue;
      auto a = left_core(parts[k]);
      auto b = right_core(parts[k + 2]);
      if (!a || !b || b->empty()) continue;
      if (!lexicon->contains(*a + *b) || lexicon->contains(*a) || lexicon->contains(*b)) {
        continue;
      }
      std::string joined = parts[k] + parts[k + 2];
      out.report.record({ReconstructionRule::kSplitWordJoin, line_no + 1,
                         parts[k] + " " + parts[k + 2], joined});
      parts[k] = std::move(joined);
      parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(k) + 1,
                  parts.begin() + static_cast<std::ptrdiff_t>(k) + 3);
    }
    std::string rebuilt;
    for (const auto& p : parts) rebuilt += p;
    out.value.push_back(std::move(rebuilt));
  }
  return out;
}

Reconstructed<std::string> normalize_boundary_punct(std::string_view text,
                                                    const ReconstructionConfig& cfg) {
  std::vector<char32_t> boundary;
  for (const auto& p : cfg.boundary_punct) {
    if (auto cp = utf8::first(p)) boundary.push_back(*cp);
  }
  auto is_boundary = [&](char32_t cp) {
    return std::find(boundary.begin(), boundary.end(), cp) != boundary.end();
  };

  Reconstructed<std::string> out;
  std::vector<char32_t> cps = utf8::code_points(text);
  auto line_of = [&](std::size_t idx) {
    return static_cast<std::size_t>(
               std::count(cps.begin(), cps.begin() + static_cast<std::ptrdiff_t>(idx), U'\n')) +
           1;
  };
  auto fix = [&](std::size_t idx, std::vector<char32_t> before, std::vector<char32_t> after) {
    out.report.record({ReconstructionRule::kBoundaryPunct, line_of(idx),
                       utf8::encode(before), utf8::encode(after)});
  };

  // Whitespace immediately before a boundary mark.
  {
    std::vector<char32_t> next;
    std::size_t i = 0;
    while (i < cps.size()) {
      if (is_space(cps[i])) {
        std::size_t j = i;
        while (j < cps.size() && is_space(cps[j])) ++j;
        if (j < cps.size() && is_boundary(cps[j])) {
          fix(i, {cps.begin() + static_cast<std::ptrdiff_t>(i),
                  cps.begin() + static_cast<std::ptrdiff_t>(j) + 1},
              {cps[j]});
          i = j;
          continue;
        }
      }
      next.push_back(cps[i++]);
    }
    cps = std::move(next);
  }
  // Runs of one repeated boundary mark.
  {
    std::vector<char32_t> next;
    std::size_t i = 0;
    while (i < cps.size()) {
      std::size_t j = i + 1;
      if (is_boundary(cps[i])) {
        while (j < cps.size() && cps[j] == cps[i]) ++j;
        if (j - i > 1) {
          fix(i, std::vector<char32_t>(j - i, cps[i]), {cps[i]});
        }
      }
      next.push_back(cps[i]);
      i = is_boundary(cps[i]) ? j : i + 1;
    }
    cps = std::move(next);
  }
  // Exactly one space between a boundary mark and a following letter.
  {
    std::vector<char32_t> next;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      next.push_back(cps[i]);
      if (!is_boundary(cps[i])) continue;
      std::size_t j = i + 1;
      while (j < cps.size() && is_space(cps[j])) ++j;
      if (j >= cps.size() || !utf8::is_letter(cps[j])) continue;
      if (j - i - 1 == 1 && cps[i + 1] == U' ') continue;
      std::vector<char32_t> before(cps.begin() + static_cast<std::ptrdiff_t>(i),
                                   cps.begin() + static_cast<std::ptrdiff_t>(j));
      fix(i, before, {cps[i], U' '});
      next.push_back(U' ');
      i = j - 1;
    }
    cps = std::move(next);
  }
  out.value = utf8::encode(cps);
  return out;
}

std::vector<std::string> flag_long_sentences(const Treebank& tb,
                                             const ReconstructionConfig& cfg) {
  cfg.check();
  std::vector<std::string> ids;
  for (const auto& s : tb.sentences) {
    if (s.tokens.size() > static_cast<std::size_t>(cfg.enum_split_threshold)) {
      ids.push_back(s.sent_id);
    }
  }
  return ids;
}

Lexicon load_lexicon(const std::string& path) {
  Lexicon lexicon;
  for (auto& line : read_lines(path)) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    lexicon.insert(line.substr(start));
  }
  return lexicon;
}

}  // namespace kath
