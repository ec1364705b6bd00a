#include "kath/features.hpp"

#include <algorithm>
#include <cstdlib>

#include "kath/error.hpp"
#include "kath/unicode.hpp"

namespace kath {

namespace {

constexpr std::string_view kBos = "<BOS>";
constexpr std::string_view kEos = "<EOS>";
constexpr std::string_view kRoot = "<ROOT>";

bool all_punct(std::string_view form) {
  const auto cps = utf8::code_points(form);
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), utf8::is_punct);
}

std::string form_at(const Sentence& s, int pos) {
  if (pos < 1) return std::string(kBos);
  if (pos > static_cast<int>(s.tokens.size())) return std::string(kEos);
  return s.tokens[pos - 1].form;
}

std::string tag_at(std::span<const std::string> tags, int pos) {
  if (pos < 1) return std::string(kBos);
  if (pos > static_cast<int>(tags.size())) return std::string(kEos);
  return tags[pos - 1];
}

std::string feature(std::string_view name, std::string_view value) {
  std::string out(name);
  out += '=';
  out += value;
  return out;
}

std::string join(std::initializer_list<std::string_view> parts) {
  std::string out;
  bool first = true;
  for (auto p : parts) {
    if (!first) out += '|';
    out += p;
    first = false;
  }
  return out;
}

std::string punct_bucket(int count) {
  return count >= 3 ? "3+" : std::to_string(count);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

FeatureIndex hash_feature(std::string_view template_id, std::string_view value,
                          int hash_bits) {
  return static_cast<FeatureIndex>(fnv1a64(feature(template_id, value)) &
                                   ((std::uint64_t{1} << hash_bits) - 1));
}

FeatureVector FeatureVector::from_unsorted(std::vector<FeatureIndex> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  FeatureVector fv;
  fv.indices_ = std::move(indices);
  return fv;
}

bool FeatureVector::contains(FeatureIndex index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

FeatureVector hash_features(const std::vector<std::string>& features, int hash_bits) {
  std::vector<FeatureIndex> raw;
  raw.reserve(features.size());
  const std::uint64_t mask = (std::uint64_t{1} << hash_bits) - 1;
  for (const auto& f : features) raw.push_back(static_cast<FeatureIndex>(fnv1a64(f) & mask));
  return FeatureVector::from_unsorted(std::move(raw));
}

std::string distance_bucket(int dep, int head) {
  if (head == 0) return "ROOT";
  const int d = head - dep;
  const int a = std::abs(d);
  const char* sign = d < 0 ? "-" : "+";
  std::string mag;
  if (a <= 3) {
    mag = std::to_string(a);
  } else if (a <= 7) {
    mag = "4..7";
  } else if (a <= 15) {
    mag = "8..15";
  } else {
    mag = "16+";
  }
  return sign + mag;
}

std::vector<std::string> tag_feature_strings(const Sentence& s, int i,
                                             std::span<const std::string> prev_tags) {
  const std::string& form = s.tokens.at(static_cast<std::size_t>(i - 1)).form;
  const std::string lower = utf8::lower(form);
  const auto cps = utf8::code_points(lower);

  std::vector<std::string> f;
  f.reserve(24);
  f.push_back(feature("w0", form));
  f.push_back(feature("lw0", lower));
  for (std::size_t k = 1; k <= 4 && k <= cps.size(); ++k) {
    f.push_back(feature("p" + std::to_string(k),
                        utf8::encode({cps.begin(), cps.begin() + static_cast<std::ptrdiff_t>(k)})));
    f.push_back(feature("s" + std::to_string(k),
                        utf8::encode({cps.end() - static_cast<std::ptrdiff_t>(k), cps.end()})));
  }
  const auto raw = utf8::code_points(form);
  if (std::any_of(raw.begin(), raw.end(), utf8::is_digit)) f.push_back("dig=1");
  if (all_punct(form)) f.push_back("punct=1");
  const bool has_letter = std::any_of(raw.begin(), raw.end(), utf8::is_letter);
  const bool no_lower = std::none_of(raw.begin(), raw.end(), [](char32_t cp) {
    return utf8::is_letter(cp) && !utf8::is_upper(cp);
  });
  if (has_letter && no_lower) f.push_back("caps=1");

  f.push_back(feature("w-1", form_at(s, i - 1)));
  f.push_back(feature("w+1", form_at(s, i + 1)));
  f.push_back(feature("w-2", form_at(s, i - 2)));
  f.push_back(feature("w+2", form_at(s, i + 2)));

  auto prev = [&](int pos) { return pos < 1 ? std::string(kBos) : prev_tags[pos - 1]; };
  const std::string t1 = prev(i - 1);
  const std::string t2 = prev(i - 2);
  f.push_back(feature("t-1", t1));
  f.push_back(feature("t-2,t-1", join({t2, t1})));
  return f;
}

FeatureVector extract_tag_features(const Sentence& s, int i,
                                   std::span<const std::string> prev_tags, int hash_bits) {
  return hash_features(tag_feature_strings(s, i, prev_tags), hash_bits);
}

std::vector<std::string> arc_feature_strings(const Sentence& s, int dep, int head,
                                             std::span<const std::string> tags) {
  const int n = static_cast<int>(s.tokens.size());
  if (dep < 1 || dep > n || head < 0 || head > n || head == dep ||
      static_cast<int>(tags.size()) < n) {
    throw Error(ErrorCode::kPrecondition, "arc (" + std::to_string(head) + " -> " +
                                              std::to_string(dep) + ") outside sentence");
  }
  const std::string df = s.tokens[dep - 1].form;
  const std::string dt = tags[dep - 1];
  const std::string hf = head == 0 ? std::string(kRoot) : s.tokens[head - 1].form;
  const std::string ht = head == 0 ? std::string(kRoot) : tags[head - 1];
  const std::string dist = distance_bucket(dep, head);
  const std::string dir = head == 0 ? "ROOT" : (head < dep ? "L" : "R");

  int between = 0;
  for (int k = std::min(head, dep) + 1; k < std::max(head, dep); ++k) {
    if (all_punct(s.tokens[k - 1].form)) ++between;
  }
  const std::string punct = punct_bucket(between);

  auto neighbour_tag = [&](int pos) {
    if (pos == 0) return std::string(kRoot);
    return tag_at(tags.first(static_cast<std::size_t>(n)), pos);
  };
  const std::string h_prev = head == 0 ? std::string(kBos) : neighbour_tag(head - 1);
  const std::string h_next = head == 0 ? std::string(kBos) : neighbour_tag(head + 1);
  const std::string d_prev = neighbour_tag(dep - 1);
  const std::string d_next = neighbour_tag(dep + 1);

  return {
      feature("df", df),
      feature("dt", dt),
      feature("hf", hf),
      feature("ht", ht),
      feature("dt,ht", join({dt, ht})),
      feature("df,hf", join({df, hf})),
      feature("df,ht", join({df, ht})),
      feature("dt,hf", join({dt, hf})),
      feature("dist", dist),
      feature("dir", dir),
      feature("punct", punct),
      feature("dt,dist", join({dt, dist})),
      feature("ht,dist", join({ht, dist})),
      feature("dt,ht,dist", join({dt, ht, dist})),
      feature("dt,ht,dir", join({dt, ht, dir})),
      feature("dt,ht,punct", join({dt, ht, punct})),
      feature("dt,ht,h-1t", join({dt, ht, h_prev})),
      feature("dt,ht,h+1t", join({dt, ht, h_next})),
      feature("d-1t,dt,ht", join({d_prev, dt, ht})),
      feature("dt,d+1t,ht", join({dt, d_next, ht})),
  };
}

FeatureVector extract_arc_features(const Sentence& s, int dep, int head,
                                   std::span<const std::string> tags, int hash_bits) {
  return hash_features(arc_feature_strings(s, dep, head, tags), hash_bits);
}

}  // namespace kath
