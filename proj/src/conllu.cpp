#include "kath/conllu.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <sstream>

#include "kath/error.hpp"
#include "kath/io.hpp"
#include "kath/unicode.hpp"

namespace kath {

namespace {

constexpr std::size_t kColumns = 10;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

// "# key = value" → (key, value). Comments without '=' yield nullopt.
std::optional<std::pair<std::string, std::string>> comment_entry(
    std::string_view line) {
  if (line.empty() || line.front() != '#') return std::nullopt;
  line.remove_prefix(1);
  const std::size_t eq = line.find('=');
  if (eq == std::string_view::npos) return std::nullopt;
  return std::pair{std::string(trim(line.substr(0, eq))),
                   std::string(trim(line.substr(eq + 1)))};
}

void set_comment(std::vector<std::string>& comments, std::string_view key,
                 std::string_view value) {
  std::string line = "# ";
  line += key;
  line += " = ";
  line += value;
  for (auto& existing : comments) {
    auto entry = comment_entry(existing);
    if (entry && entry->first == key) {
      existing = std::move(line);
      return;
    }
  }
  comments.push_back(std::move(line));
}

void erase_comment(std::vector<std::string>& comments, std::string_view key) {
  std::erase_if(comments, [&](const std::string& line) {
    auto entry = comment_entry(line);
    return entry && entry->first == key;
  });
}

class Reader {
 public:
  explicit Reader(Strictness profile) : profile_(profile) {}

  void line(std::string_view raw, std::size_t line_no) {
    if (!utf8::is_valid(raw)) {
      throw Error(ErrorCode::kInvalidUtf8,
                  "line " + std::to_string(line_no) + " is not valid UTF-8");
    }
    if (trim(raw).empty()) {
      flush();
      return;
    }
    open_ = true;
    if (raw.front() == '#') {
      comment(raw);
      return;
    }
    row(raw, line_no);
  }

  Treebank finish() {
    flush();
    return std::move(treebank_);
  }

 private:
  void comment(std::string_view raw) {
    current_.comments.emplace_back(raw);
    if (auto entry = comment_entry(raw)) {
      if (entry->first == "sent_id") {
        current_.sent_id = entry->second;
      } else if (entry->first == "text") {
        current_.text = entry->second;
      } else if (entry->first == "origin") {
        current_.origin = parse_origin(entry->second);
      }
    }
  }

  void row(std::string_view raw, std::size_t line_no) {
    const auto cols = split_tabs(raw);
    if (cols.size() != kColumns) {
      reject(line_no, "expected 10 tab-separated columns, found " +
                          std::to_string(cols.size()));
      return;
    }
    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos ||
        id.find('.') != std::string_view::npos) {
      current_.passthrough.push_back({current_.tokens.size(), std::string(raw)});
      return;
    }
    auto token_id = parse_int(id);
    std::optional<int> head =
        cols[6] == "_" ? std::optional<int>(kMissingHead) : parse_int(cols[6]);
    if (!token_id || *token_id < 1 || !head || *head < kMissingHead) {
      reject(line_no, "malformed ID or HEAD column");
      return;
    }
    Token token;
    token.id = *token_id;
    token.form = std::string(cols[1]);
    token.lemma = std::string(cols[2]);
    token.upos = std::string(cols[3]);
    token.xpos = std::string(cols[4]);
    token.feats = parse_attributes(cols[5]);
    token.head = *head;
    token.deprel = std::string(cols[7]);
    token.deps = std::string(cols[8]);
    token.misc = parse_attributes(cols[9]);
    current_.tokens.push_back(std::move(token));
  }

  void reject(std::size_t line_no, std::string why) {
    std::string message = "line " + std::to_string(line_no) + ": " + why;
    if (profile_ == Strictness::kStrict) {
      throw Error(ErrorCode::kBadFieldCount, message);
    }
    treebank_.parse_issues.push_back({current_.sent_id, std::nullopt,
                                      IssueCode::kBadFieldCount,
                                      Severity::kError, std::move(message)});
  }

  void flush() {
    if (open_) treebank_.sentences.push_back(std::move(current_));
    current_ = Sentence{};
    open_ = false;
  }

  Strictness profile_;
  Treebank treebank_;
  Sentence current_;
  bool open_ = false;
};

void write_row(std::string& out, const Token& t) {
  out += std::to_string(t.id);
  out += '\t';
  out += t.form;
  out += '\t';
  out += t.lemma;
  out += '\t';
  out += t.upos;
  out += '\t';
  out += t.xpos;
  out += '\t';
  out += format_attributes(t.feats);
  out += '\t';
  out += t.head == kMissingHead ? std::string("_") : std::to_string(t.head);
  out += '\t';
  out += t.deprel;
  out += '\t';
  out += t.deps;
  out += '\t';
  out += format_attributes(t.misc);
  out += '\n';
}

}  // namespace

AttributeList parse_attributes(std::string_view column) {
  AttributeList attrs;
  if (column.empty() || column == "_") return attrs;
  std::size_t start = 0;
  while (start <= column.size()) {
    std::size_t bar = column.find('|', start);
    if (bar == std::string_view::npos) bar = column.size();
    const std::string_view item = column.substr(start, bar - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      attrs.push_back({std::string(item), std::nullopt});
    } else {
      attrs.push_back({std::string(item.substr(0, eq)),
                       std::string(item.substr(eq + 1))});
    }
    start = bar + 1;
  }
  return attrs;
}

std::string format_attributes(const AttributeList& attrs) {
  if (attrs.empty()) return "_";
  std::string out;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) out += '|';
    out += attrs[i].key;
    if (attrs[i].value) {
      out += '=';
      out += *attrs[i].value;
    }
  }
  return out;
}

void set_attribute(AttributeList& attrs, std::string key, std::string value) {
  for (auto& a : attrs) {
    if (a.key == key) {
      a.value = std::move(value);
      return;
    }
  }
  attrs.push_back({std::move(key), std::move(value)});
}

AttributeList sorted_attributes(AttributeList attrs) {
  std::stable_sort(attrs.begin(), attrs.end(),
                   [](const Attribute& a, const Attribute& b) { return a.key < b.key; });
  return attrs;
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::kBatch: return "batch";
    case Origin::kRetry: return "retry";
    case Origin::kUnknown: return "unknown";
  }
  return "unknown";
}

Origin parse_origin(std::string_view text) {
  if (text == "batch") return Origin::kBatch;
  if (text == "retry") return Origin::kRetry;
  return Origin::kUnknown;
}

void Sentence::set_sent_id(std::string id) {
  set_comment(comments, "sent_id", id);
  sent_id = std::move(id);
}

void Sentence::set_text(std::string value) {
  set_comment(comments, "text", value);
  text = std::move(value);
}

void Sentence::set_origin(Origin value) {
  if (value == Origin::kUnknown) {
    erase_comment(comments, "origin");
  } else {
    set_comment(comments, "origin", to_string(value));
  }
  origin = value;
}

std::string_view to_string(IssueCode code) {
  switch (code) {
    case IssueCode::kCycle: return "CYCLE";
    case IssueCode::kMultiRoot: return "MULTI_ROOT";
    case IssueCode::kNoRoot: return "NO_ROOT";
    case IssueCode::kHeadOutOfRange: return "HEAD_OUT_OF_RANGE";
    case IssueCode::kBadUpos: return "BAD_UPOS";
    case IssueCode::kBadDeprel: return "BAD_DEPREL";
    case IssueCode::kBadFieldCount: return "BAD_FIELD_COUNT";
    case IssueCode::kDuplicateSentId: return "DUPLICATE_SENT_ID";
    case IssueCode::kNonprojectiveInfo: return "NONPROJECTIVE_INFO";
  }
  return "UNKNOWN";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::kError ? "error" : "warning";
}

std::string_view to_string(Strictness strictness) {
  return strictness == Strictness::kStrict ? "strict" : "lenient";
}

Severity severity_for(IssueCode code, Strictness profile) {
  if (code == IssueCode::kNonprojectiveInfo) return Severity::kWarning;
  if (profile == Strictness::kStrict) return Severity::kError;
  return code == IssueCode::kHeadOutOfRange || code == IssueCode::kBadFieldCount
             ? Severity::kError
             : Severity::kWarning;
}

std::size_t Treebank::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

Treebank parse_treebank(std::istream& in, Strictness profile) {
  Reader reader(profile);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    reader.line(line, line_no);
  }
  return reader.finish();
}

Treebank parse_treebank(std::string_view text, Strictness profile) {
  std::istringstream in{std::string(text)};
  return parse_treebank(in, profile);
}

Treebank read_treebank(const std::string& path, Strictness profile) {
  Treebank tb = parse_treebank(std::string_view(read_file(path)), profile);
  tb.source_path = path;
  return tb;
}

std::string serialize_sentence(const Sentence& s) {
  std::string out;
  for (const auto& c : s.comments) {
    out += c;
    out += '\n';
  }
  std::size_t next_pass = 0;
  for (std::size_t i = 0; i <= s.tokens.size(); ++i) {
    while (next_pass < s.passthrough.size() &&
           s.passthrough[next_pass].before_token <= i) {
      out += s.passthrough[next_pass].line;
      out += '\n';
      ++next_pass;
    }
    if (i < s.tokens.size()) write_row(out, s.tokens[i]);
  }
  out += '\n';
  return out;
}

std::string serialize_treebank(const Treebank& treebank) {
  std::string out;
  for (const auto& s : treebank.sentences) out += serialize_sentence(s);
  return out;
}

void write_treebank(const std::string& path, const Treebank& treebank) {
  write_file_atomic(path, serialize_treebank(treebank));
}

}  // namespace kath
