#include "kath/snapshot.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "kath/error.hpp"
#include "kath/validate.hpp"

namespace kath {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

bool SnapshotManifest::verify(std::string_view snapshot_bytes) const {
  return total_sentences == batch_origin + retry_origin + unknown_origin &&
         sha256_hex(snapshot_bytes) == content_sha256;
}

std::string SnapshotManifest::to_json() const {
  json j = {
      {"total_sentences", total_sentences},
      {"batch_origin", batch_origin},
      {"retry_origin", retry_origin},
      {"unknown_origin", unknown_origin},
      {"content_sha256", content_sha256},
      {"created_from", created_from},
      {"tool_version", tool_version},
  };
  return j.dump(2) + "\n";
}

SnapshotManifest SnapshotManifest::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    SnapshotManifest m;
    m.total_sentences = j.at("total_sentences").get<std::size_t>();
    m.batch_origin = j.at("batch_origin").get<std::size_t>();
    m.retry_origin = j.at("retry_origin").get<std::size_t>();
    m.unknown_origin = j.value("unknown_origin", std::size_t{0});
    m.content_sha256 = j.at("content_sha256").get<std::string>();
    m.created_from = j.value("created_from", std::vector<std::string>{});
    m.tool_version = j.value("tool_version", std::string{});
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("bad snapshot manifest: ") + e.what());
  }
}

FreezeResult freeze(const std::vector<Treebank>& batches, const Treebank& retries,
                    Strictness profile, const AnnotationSchema& schema) {
  std::vector<Sentence> merged;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<FreezeRejection> duplicates;
  FreezeResult result;

  for (const auto& batch : batches) {
    for (const auto& s : batch.sentences) {
      if (index.contains(s.sent_id)) {
        duplicates.push_back(
            {s.sent_id,
             {{s.sent_id, std::nullopt, IssueCode::kDuplicateSentId, Severity::kError,
               "sent_id repeated across batches"}}});
        continue;
      }
      index.emplace(s.sent_id, merged.size());
      merged.push_back(s);
      if (merged.back().origin == Origin::kUnknown) merged.back().set_origin(Origin::kBatch);
    }
    if (!batch.source_path.empty()) result.manifest.created_from.push_back(batch.source_path);
  }

  for (const auto& r : retries.sentences) {
    auto it = index.find(r.sent_id);
    if (it == index.end()) {
      throw Error(ErrorCode::kUnmatchedRetry,
                  "retry sentence '" + r.sent_id + "' has no batch counterpart");
    }
    merged[it->second] = r;
    merged[it->second].set_origin(Origin::kRetry);
  }
  if (!retries.source_path.empty()) result.manifest.created_from.push_back(retries.source_path);

  for (auto& s : merged) {
    auto issues = validate_sentence(s, profile, schema);
    if (has_errors(issues)) {
      std::erase_if(issues, [](const ValidationIssue& i) { return i.severity != Severity::kError; });
      result.rejected.push_back({s.sent_id, std::move(issues)});
      continue;
    }
    switch (s.origin) {
      case Origin::kBatch: ++result.manifest.batch_origin; break;
      case Origin::kRetry: ++result.manifest.retry_origin; break;
      case Origin::kUnknown: ++result.manifest.unknown_origin; break;
    }
    result.snapshot.sentences.push_back(std::move(s));
  }
  result.rejected.insert(result.rejected.end(), duplicates.begin(), duplicates.end());

  result.manifest.total_sentences = result.snapshot.sentences.size();
  result.manifest.content_sha256 = sha256_hex(serialize_treebank(result.snapshot));
  result.manifest.tool_version = KATH_VERSION;
  return result;
}

SplitMix64Step splitmix64_next(std::uint64_t state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return {state, z ^ (z >> 31)};
}

TestFraction TestFraction::parse(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorCode::kPrecondition,
                 "test fraction must be a decimal or a/b strictly between 0 and 1, got '" +
                     std::string(text) + "'");
  };
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  TestFraction f;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!digits(num) || !digits(den) || num.size() > 18 || den.size() > 18) throw fail();
    f.numerator = std::stoull(std::string(num));
    f.denominator = std::stoull(std::string(den));
  } else {
    const auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!digits(whole) || (dot != std::string_view::npos && !digits(frac)) || frac.size() > 18) {
      throw fail();
    }
    while (!frac.empty() && frac.back() == '0') frac.remove_suffix(1);
    f.denominator = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) f.denominator *= 10;
    f.numerator = std::stoull(std::string(whole) + std::string(frac.empty() ? "" : frac));
  }
  if (f.denominator == 0 || f.numerator == 0 || f.numerator >= f.denominator) throw fail();
  return f;
}

double TestFraction::value() const {
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::string TestFraction::to_string() const {
  return std::to_string(numerator) + "/" + std::to_string(denominator);
}

std::string membership_digest(const std::vector<std::string>& train_ids,
                              const std::vector<std::string>& test_ids) {
  std::string buffer = "train\n";
  for (std::size_t i = 0; i < train_ids.size(); ++i) {
    if (i) buffer += '\n';
    buffer += train_ids[i];
  }
  buffer += "\ntest\n";
  for (std::size_t i = 0; i < test_ids.size(); ++i) {
    if (i) buffer += '\n';
    buffer += test_ids[i];
  }
  return sha256_hex(buffer);
}

SplitManifest deterministic_split(const Treebank& tb, std::uint64_t seed,
                                  TestFraction fraction) {
  const std::size_t n = tb.sentences.size();
  if (n < 2) throw Error(ErrorCode::kPrecondition, "split needs at least 2 sentences");
  if (fraction.numerator == 0 || fraction.numerator >= fraction.denominator) {
    throw Error(ErrorCode::kPrecondition, "test fraction must lie in (0, 1)");
  }
  std::unordered_set<std::string> seen;
  for (const auto& s : tb.sentences) {
    if (!seen.insert(s.sent_id).second) {
      throw Error(ErrorCode::kPrecondition, "duplicate sent_id '" + s.sent_id + "'");
    }
  }

  // floor((1 - f) * n) in exact integer arithmetic.
  const auto wide = static_cast<unsigned __int128>(fraction.denominator - fraction.numerator) * n;
  const auto n_train = static_cast<std::size_t>(wide / fraction.denominator);
  const std::size_t n_test = n - n_train;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t state = seed;
  for (std::size_t i = n - 1; i >= 1; --i) {
    const auto step = splitmix64_next(state);
    state = step.state;
    const std::size_t j = static_cast<std::size_t>(step.value % (static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());

  SplitManifest m;
  m.seed = seed;
  m.test_fraction = fraction;
  for (auto i : train) m.train_ids.push_back(tb.sentences[i].sent_id);
  for (auto i : test) m.test_ids.push_back(tb.sentences[i].sent_id);
  m.membership_sha256 = membership_digest(m.train_ids, m.test_ids);
  return m;
}

std::string SplitManifest::to_json() const {
  json j = {
      {"seed", seed},
      {"test_fraction", test_fraction.value()},
      {"train_ids", train_ids},
      {"test_ids", test_ids},
      {"membership_sha256", membership_sha256},
  };
  return j.dump(2) + "\n";
}

SplitManifest SplitManifest::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    SplitManifest m;
    m.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("test_fraction")) {
      const auto& f = j.at("test_fraction");
      m.test_fraction = TestFraction::parse(f.is_string() ? f.get<std::string>() : f.dump());
    }
    m.train_ids = j.at("train_ids").get<std::vector<std::string>>();
    m.test_ids = j.at("test_ids").get<std::vector<std::string>>();
    m.membership_sha256 = j.contains("membership_sha256")
                              ? j.at("membership_sha256").get<std::string>()
                              : membership_digest(m.train_ids, m.test_ids);
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("bad split manifest: ") + e.what());
  }
}

Treebank select_sentences(const Treebank& tb, const std::vector<std::string>& ids) {
  std::unordered_set<std::string> wanted(ids.begin(), ids.end());
  Treebank out;
  out.source_path = tb.source_path;
  for (const auto& s : tb.sentences) {
    if (wanted.contains(s.sent_id)) out.sentences.push_back(s);
  }
  return out;
}

}  // namespace kath
