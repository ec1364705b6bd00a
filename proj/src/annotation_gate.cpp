#include "kath/annotation_gate.hpp"

#include <algorithm>
#include <filesystem>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "kath/error.hpp"
#include "kath/io.hpp"
#include "kath/validate.hpp"

namespace kath {

using nlohmann::json;

namespace {

constexpr std::string_view kSidecarPrefix = "Kath:";

std::string offset_id(std::size_t offset) { return "offset:" + std::to_string(offset); }

bool is_offset_id(std::string_view id) { return id.starts_with("offset:"); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<RetryEntry>::iterator find_entry(std::vector<RetryEntry>& entries,
                                             std::string_view id) {
  return std::find_if(entries.begin(), entries.end(),
                      [&](const RetryEntry& e) { return e.sent_id == id; });
}

bool contains(const std::vector<std::string>& ids, std::string_view id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

struct RecordError {
  std::string reason;
  std::string detail;
};

std::string feats_text(const json& j) {
  if (j.is_null()) return "_";
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object()) {
    AttributeList attrs;
    for (const auto& [k, v] : j.items()) {
      if (!v.is_string()) throw RecordError{std::string(reason::kBadRecord), "feature values must be strings"};
      attrs.push_back({k, v.get<std::string>()});
    }
    return format_attributes(sorted_attributes(std::move(attrs)));
  }
  throw RecordError{std::string(reason::kBadRecord), "feats must be a string, object or null"};
}

std::string required_string(const json& tok, const char* key) {
  if (!tok.contains(key) || !tok.at(key).is_string()) {
    throw RecordError{std::string(reason::kBadRecord), std::string("token field '") + key + "' missing"};
  }
  return tok.at(key).get<std::string>();
}

Sentence to_sentence(const json& rec, const AnnotationSchema& schema) {
  if (!rec.is_object()) throw RecordError{std::string(reason::kBadRecord), "record is not an object"};
  if (!rec.contains("sent_id") || !rec.at("sent_id").is_string() ||
      rec.at("sent_id").get<std::string>().empty()) {
    throw RecordError{std::string(reason::kBadRecord), "sent_id missing"};
  }
  Sentence s;
  s.set_sent_id(rec.at("sent_id").get<std::string>());
  if (rec.contains("text") && rec.at("text").is_string()) s.set_text(rec.at("text").get<std::string>());
  if (!rec.contains("tokens") || !rec.at("tokens").is_array() || rec.at("tokens").empty()) {
    throw RecordError{std::string(reason::kBadRecord), "tokens missing or empty"};
  }
  int position = 0;
  for (const auto& tok : rec.at("tokens")) {
    ++position;
    if (!tok.is_object()) throw RecordError{std::string(reason::kBadRecord), "token is not an object"};
    Token t;
    t.id = position;
    if (tok.contains("id") && (!tok.at("id").is_number_integer() || tok.at("id").get<int>() != position)) {
      throw RecordError{std::string(reason::kBadRecord), "token ids must be 1..n in order"};
    }
    t.form = required_string(tok, "form");
    if (t.form.empty() || t.form.find_first_of("\t\n\r") != std::string::npos) {
      throw RecordError{std::string(reason::kBadRecord), "FORM empty or contains tab/newline"};
    }
    t.lemma = tok.contains("lemma") && tok.at("lemma").is_string() ? tok.at("lemma").get<std::string>() : "_";
    t.upos = required_string(tok, "upos");
    t.feats = parse_attributes(feats_text(tok.contains("feats") ? tok.at("feats") : json()));
    if (!tok.contains("head") || !tok.at("head").is_number_integer()) {
      throw RecordError{std::string(reason::kBadRecord), "token head missing"};
    }
    t.head = tok.at("head").get<int>();
    t.deprel = required_string(tok, "deprel");
    for (const auto* field : {&t.lemma, &t.upos, &t.deprel}) {
      if (field->find_first_of("\t\n\r") != std::string::npos) {
        throw RecordError{std::string(reason::kBadRecord), "field contains tab/newline"};
      }
    }
    if (tok.contains("sidecar")) {
      const json& sc = tok.at("sidecar");
      if (!sc.is_object()) throw RecordError{std::string(reason::kBadSidecar), "sidecar must be an object"};
      AttributeList misc;
      for (const auto& [name, value] : sc.items()) {
        const SidecarField* field = schema.sidecar(name);
        if (!field) throw RecordError{std::string(reason::kBadSidecar), "unknown sidecar '" + name + "'"};
        if (!value.is_string() || !field->accepts(value.get<std::string>())) {
          throw RecordError{std::string(reason::kBadSidecar), "bad value for sidecar '" + name + "'"};
        }
        const std::string v = value.get<std::string>();
        if (v.find_first_of("|\t\n") != std::string::npos) {
          throw RecordError{std::string(reason::kBadSidecar), "sidecar value contains a separator"};
        }
        misc.push_back({std::string(kSidecarPrefix) + name, v});
      }
      t.misc = sorted_attributes(std::move(misc));
    }
    s.tokens.push_back(std::move(t));
  }
  return s;
}

// First schema or structural failure under the lenient profile.
std::optional<RecordError> admission_failure(const Sentence& s, const AnnotationSchema& schema) {
  for (const auto& t : s.tokens) {
    if (!schema.upos_set.contains(t.upos)) {
      return RecordError{std::string(to_string(IssueCode::kBadUpos)), "UPOS '" + t.upos + "'"};
    }
    if (!schema.deprel_set.contains(t.deprel)) {
      return RecordError{std::string(to_string(IssueCode::kBadDeprel)), "DEPREL '" + t.deprel + "'"};
    }
  }
  for (const auto& issue : validate_sentence(s, Strictness::kLenient, schema)) {
    if (issue.severity == Severity::kError) {
      return RecordError{std::string(to_string(issue.code)), issue.message};
    }
  }
  return std::nullopt;
}

void scan_string(std::string_view text, std::size_t& i) {
  // text[i] is the opening quote; leaves i on the closing quote.
  for (++i; i < text.size(); ++i) {
    if (text[i] == '\\') {
      ++i;
    } else if (text[i] == '"') {
      return;
    }
  }
}

}  // namespace

void IngestState::check() const {
  auto corrupt = [](const std::string& why) { return Error(ErrorCode::kStateCorrupt, why); };
  std::unordered_set<std::string> admitted_ids(admitted.begin(), admitted.end());
  if (admitted_ids.size() != admitted.size()) throw corrupt("admitted list has repeated ids");
  std::unordered_set<std::string> queued;
  for (const auto& e : retry_queue) {
    if (!queued.insert(e.sent_id).second) throw corrupt("retry queue repeats '" + e.sent_id + "'");
    if (admitted_ids.contains(e.sent_id)) {
      throw corrupt("'" + e.sent_id + "' is both admitted and queued");
    }
  }
  if (next_offset < admitted.size()) throw corrupt("next_offset below admitted count");
  if (max_attempts == 0) throw corrupt("max_attempts must be positive");
}

std::string IngestState::to_json() const {
  auto entries = [](const std::vector<RetryEntry>& list) {
    json out = json::array();
    for (const auto& e : list) {
      out.push_back({{"sent_id", e.sent_id}, {"reason", e.reason}, {"attempt_count", e.attempt_count}});
    }
    return out;
  };
  json j = {{"next_offset", next_offset},
            {"admitted", admitted},
            {"retry_queue", entries(retry_queue)},
            {"dead_letter", entries(dead_letter)},
            {"max_attempts", max_attempts}};
  return j.dump(2) + "\n";
}

IngestState IngestState::from_json(std::string_view text) {
  IngestState s;
  try {
    const json j = json::parse(text);
    auto entries = [](const json& list) {
      std::vector<RetryEntry> out;
      for (const auto& e : list) {
        out.push_back({e.at("sent_id").get<std::string>(), e.at("reason").get<std::string>(),
                       e.at("attempt_count").get<std::uint32_t>()});
      }
      return out;
    };
    s.next_offset = j.at("next_offset").get<std::size_t>();
    s.admitted = j.at("admitted").get<std::vector<std::string>>();
    s.retry_queue = entries(j.at("retry_queue"));
    s.dead_letter = entries(j.value("dead_letter", json::array()));
    s.max_attempts = j.at("max_attempts").get<std::uint32_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kStateCorrupt, e.what());
  }
  s.check();
  return s;
}

IngestState load_state(const std::string& path, std::uint32_t max_attempts) {
  if (!std::filesystem::exists(path)) {
    IngestState fresh;
    fresh.max_attempts = max_attempts;
    return fresh;
  }
  return IngestState::from_json(read_file(path));
}

void save_state(const std::string& path, const IngestState& state) {
  state.check();
  write_file_atomic(path, state.to_json());
}

std::string recover_json(std::string_view text) {
  // Code-fence lines at either end.
  std::vector<std::string> lines = split_lines(text);
  while (!lines.empty() && trim(lines.front()).empty()) lines.erase(lines.begin());
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (!lines.empty() && trim(lines.front()).starts_with("```")) lines.erase(lines.begin());
  if (!lines.empty() && trim(lines.back()).starts_with("```")) lines.pop_back();
  std::string body;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) body += '\n';
    body += lines[i];
  }

  // Outermost brackets.
  const std::size_t open = body.find_first_of("{[");
  const std::size_t close = body.find_last_of("}]");
  if (open != std::string::npos && close != std::string::npos && open < close) {
    body = body.substr(open, close - open + 1);
  }

  // Trailing commas, skipping string contents.
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '"') {
      const std::size_t start = i;
      scan_string(body, i);
      out.append(body, start, std::min(i, body.size() - 1) - start + 1);
      continue;
    }
    if (c == ',') {
      std::size_t j = i + 1;
      while (j < body.size() && std::isspace(static_cast<unsigned char>(body[j]))) ++j;
      if (j < body.size() && (body[j] == '}' || body[j] == ']')) continue;
    }
    out.push_back(c);
  }
  return out;
}

RecordCheck check_record(std::string_view line, const AnnotationSchema& schema) {
  RecordCheck out;
  json rec;
  try {
    rec = json::parse(recover_json(line));
  } catch (const json::exception& e) {
    out.reason = reason::kJsonParse;
    out.detail = e.what();
    return out;
  }
  try {
    out.sentence = to_sentence(rec, schema);
  } catch (const RecordError& e) {
    if (rec.is_object() && rec.contains("sent_id") && rec.at("sent_id").is_string()) {
      out.sentence.sent_id = rec.at("sent_id").get<std::string>();
    }
    out.reason = e.reason;
    out.detail = e.detail;
    return out;
  }
  if (auto failure = admission_failure(out.sentence, schema)) {
    out.reason = failure->reason;
    out.detail = failure->detail;
  }
  return out;
}

std::string sentence_to_record(const Sentence& s) {
  json tokens = json::array();
  for (const auto& t : s.tokens) {
    json tok = {{"id", t.id},         {"form", t.form},
                {"lemma", t.lemma},   {"upos", t.upos},
                {"feats", format_attributes(t.feats)},
                {"head", t.head},     {"deprel", t.deprel}};
    json sidecar = json::object();
    for (const auto& a : t.misc) {
      if (a.key.starts_with(kSidecarPrefix) && a.value) {
        sidecar[a.key.substr(kSidecarPrefix.size())] = *a.value;
      }
    }
    if (!sidecar.empty()) tok["sidecar"] = sidecar;
    tokens.push_back(std::move(tok));
  }
  json rec = {{"sent_id", s.sent_id}, {"tokens", tokens}};
  if (!s.text.empty()) rec["text"] = s.text;
  return rec.dump();
}

IngestResult ingest_batch(std::span<const std::string> records, const AnnotationSchema& schema,
                          IngestState state) {
  state.check();
  IngestResult result;
  for (std::size_t k = state.next_offset; k < records.size(); ++k) {
    state.next_offset = k + 1;
    if (trim(records[k]).empty()) continue;

    RecordCheck check = check_record(records[k], schema);
    const std::string id =
        check.sentence.sent_id.empty() ? offset_id(k) : check.sentence.sent_id;
    if (contains(state.admitted, id)) {
      result.rejected.push_back({k, id, std::string(reason::kDuplicate), "sent_id already admitted"});
      continue;
    }
    if (!check.reason.empty()) {
      auto it = find_entry(state.retry_queue, id);
      if (it == state.retry_queue.end()) {
        state.retry_queue.push_back({id, check.reason, 0});
      } else {
        it->reason = check.reason;
      }
      result.rejected.push_back({k, id, check.reason, check.detail});
      continue;
    }
    std::erase_if(state.retry_queue, [&](const RetryEntry& e) { return e.sent_id == id; });
    check.sentence.set_origin(Origin::kBatch);
    state.admitted.push_back(id);
    result.admitted.push_back(std::move(check.sentence));
  }
  result.state = std::move(state);
  return result;
}

std::string DeadLetter::to_json_line() const {
  json out;
  try {
    out = json::parse(recover_json(record));
  } catch (const json::exception&) {
  }
  if (!out.is_object()) out = {{"sent_id", sent_id}, {"raw", record}};
  out["failure_reasons"] = failure_reasons;
  return out.dump();
}

RetryResult process_retries(std::span<const std::string> replacements,
                            const AnnotationSchema& schema, IngestState state) {
  state.check();
  std::vector<std::string> targets;
  for (const auto& line : replacements) {
    json rec;
    try {
      rec = json::parse(recover_json(line));
    } catch (const json::exception&) {
      throw Error(ErrorCode::kUnknownRetryId, "replacement is not parseable JSON: " + line.substr(0, 80));
    }
    std::string target;
    for (const char* key : {"replaces", "sent_id"}) {
      if (rec.is_object() && rec.contains(key) && rec.at(key).is_string()) {
        target = rec.at(key).get<std::string>();
        break;
      }
    }
    if (target.empty() || find_entry(state.retry_queue, target) == state.retry_queue.end()) {
      throw Error(ErrorCode::kUnknownRetryId,
                  "'" + target + "' is not in the retry queue");
    }
    targets.push_back(std::move(target));
  }

  RetryResult result;
  for (std::size_t k = 0; k < replacements.size(); ++k) {
    const std::string& target = targets[k];
    auto entry = find_entry(state.retry_queue, target);
    if (entry == state.retry_queue.end()) {
      result.failed.push_back({k, target, std::string(reason::kDuplicate), "already resolved in this run"});
      continue;
    }
    RecordCheck check = check_record(replacements[k], schema);
    const std::string& id = check.sentence.sent_id;
    if (check.reason.empty() && !is_offset_id(target) && id != target) {
      check.reason = reason::kBadRecord;
      check.detail = "replacement sent_id '" + id + "' does not match '" + target + "'";
    }
    if (check.reason.empty() && contains(state.admitted, id)) {
      check.reason = reason::kDuplicate;
      check.detail = "sent_id already admitted";
    }
    if (check.reason.empty()) {
      state.retry_queue.erase(entry);
      check.sentence.set_origin(Origin::kRetry);
      state.admitted.push_back(id);
      result.admitted.push_back(std::move(check.sentence));
      continue;
    }
    ++entry->attempt_count;
    const std::string queued_reason = entry->reason;
    entry->reason = check.reason;
    result.failed.push_back({k, target, check.reason, check.detail});
    if (entry->attempt_count >= state.max_attempts) {
      result.dead_lettered.push_back({target, replacements[k], {queued_reason, check.reason}});
      state.dead_letter.push_back(*entry);
      state.retry_queue.erase(entry);
    }
  }
  result.state = std::move(state);
  return result;
}

}  // namespace kath
