#include "kath/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "kath/annotation_gate.hpp"
#include "kath/conllu.hpp"
#include "kath/error.hpp"
#include "kath/io.hpp"
#include "kath/metrics.hpp"
#include "kath/parser.hpp"
#include "kath/reconstruct.hpp"
#include "kath/schema.hpp"
#include "kath/snapshot.hpp"
#include "kath/validate.hpp"

namespace kath::cli {

namespace {

using nlohmann::json;

void configure_logging() {
  spdlog::set_pattern("%l: %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("KATH_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

// Failures caused by the environment rather than the data.
bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
    case ErrorCode::kPrecondition:
    case ErrorCode::kBadModelFile:
    case ErrorCode::kStateCorrupt:
    case ErrorCode::kSchemaParseError:
    case ErrorCode::kEmptyLabelSet:
      return true;
    default:
      return false;
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

void append(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for appending");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

AnnotationSchema schema_or_default(const std::string& path) {
  return path.empty() ? AnnotationSchema::ud_v2_default() : load_schema(path);
}

Strictness profile_of(bool strict) { return strict ? Strictness::kStrict : Strictness::kLenient; }

json issue_json(const ValidationIssue& issue) {
  json j = {{"sent_id", issue.sent_id},
            {"code", to_string(issue.code)},
            {"severity", to_string(issue.severity)},
            {"message", issue.message}};
  j["token_id"] = issue.token_id ? json(*issue.token_id) : json(nullptr);
  return j;
}

json rejection_json(const Rejection& r) {
  return {{"offset", r.offset}, {"sent_id", r.sent_id}, {"reason", r.reason}, {"detail", r.detail}};
}

std::string treebank_text(const std::vector<Sentence>& sentences) {
  Treebank tb;
  tb.sentences = sentences;
  return serialize_treebank(tb);
}

// validate ------------------------------------------------------------------

struct ValidateArgs {
  std::string file;
  bool strict = false;
  bool lenient = false;
  std::string schema;
  std::string report_out;
};

int do_validate(const ValidateArgs& a) {
  const Strictness profile = profile_of(a.strict);
  const Treebank tb = read_treebank(a.file, Strictness::kLenient);
  const auto issues = validate_treebank(tb, profile, schema_or_default(a.schema));
  std::size_t errors = 0;
  json list = json::array();
  for (const auto& issue : issues) {
    if (issue.severity == Severity::kError) ++errors;
    list.push_back(issue_json(issue));
  }
  const json report = {{"file", a.file},
                       {"profile", to_string(profile)},
                       {"sentences", tb.size()},
                       {"errors", errors},
                       {"warnings", issues.size() - errors},
                       {"issues", list}};
  emit(report.dump(2) + "\n", a.report_out);
  return errors > 0 ? kValidationFailed : kOk;
}

// reconstruct ---------------------------------------------------------------

struct ReconstructArgs {
  std::string input;
  std::string out;
  std::string lexicon;
  std::string report_out;
  std::string flag_long;
  bool no_dehyphenate = false;
  bool no_join = false;
  bool no_punct = false;
  int threshold = 120;
  int max_join_gap = 1;
};

int do_reconstruct(const ReconstructArgs& a) {
  ReconstructionConfig cfg;
  cfg.enum_split_threshold = a.threshold;
  cfg.max_join_gap = a.max_join_gap;
  cfg.check();

  std::vector<std::string> lines = read_lines(a.input);
  ReconstructionReport report;
  if (!a.no_dehyphenate) {
    auto r = dehyphenate(lines, cfg);
    lines = std::move(r.value);
    report.merge(r.report);
  }
  std::optional<Lexicon> lexicon;
  if (!a.lexicon.empty()) lexicon = load_lexicon(a.lexicon);
  if (!a.no_join && lexicon) {
    auto r = join_split_words(lines, cfg, &*lexicon);
    lines = std::move(r.value);
    report.merge(r.report);
  }
  if (!a.no_punct) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      auto r = normalize_boundary_punct(lines[i], cfg);
      for (auto& entry : r.report.audit) entry.line = i + 1;
      lines[i] = std::move(r.value);
      report.merge(r.report);
    }
  }
  std::vector<std::string> flagged;
  if (!a.flag_long.empty()) {
    flagged = flag_long_sentences(read_treebank(a.flag_long), cfg);
    report.long_sentences_flagged = flagged.size();
  }

  std::string text;
  for (const auto& line : lines) text += line + "\n";
  emit(text, a.out);

  json audit = json::array();
  for (const auto& e : report.audit) {
    audit.push_back({{"rule", to_string(e.rule)}, {"line", e.line}, {"before", e.before}, {"after", e.after}});
  }
  const json summary = {{"joins_performed", report.joins_performed},
                        {"hyphens_removed", report.hyphens_removed},
                        {"boundary_fixes", report.boundary_fixes},
                        {"long_sentences_flagged", report.long_sentences_flagged},
                        {"long_sentence_ids", flagged},
                        {"audit", audit}};
  if (!a.report_out.empty()) {
    write_file_atomic(a.report_out, summary.dump(2) + "\n");
  } else if (!a.out.empty()) {
    std::cout << summary.dump(2) << "\n";
  }
  return kOk;
}

// ingest / retry ------------------------------------------------------------

struct IngestArgs {
  std::string batch;
  std::string state;
  std::string schema;
  std::string out;
  std::string dead_letter;
  unsigned max_attempts = 3;
};

json state_summary(const IngestState& s) {
  return {{"next_offset", s.next_offset},
          {"admitted", s.admitted.size()},
          {"queued", s.retry_queue.size()},
          {"dead_letter", s.dead_letter.size()}};
}

int do_ingest(const IngestArgs& a) {
  const AnnotationSchema schema = schema_or_default(a.schema);
  const IngestState state = load_state(a.state, a.max_attempts);
  const std::vector<std::string> records = read_lines(a.batch);
  IngestResult r = ingest_batch(records, schema, state);
  // Output first: a crash before the state write re-ingests from the old
  // offset, and the duplicate check keeps admitted ids unique in the state.
  if (!a.out.empty() && !r.admitted.empty()) append(a.out, treebank_text(r.admitted));
  save_state(a.state, r.state);
  json rejected = json::array();
  for (const auto& rej : r.rejected) rejected.push_back(rejection_json(rej));
  const json report = {{"admitted", r.admitted.size()},
                       {"rejected", rejected},
                       {"state", state_summary(r.state)}};
  std::cout << report.dump(2) << "\n";
  if (a.out.empty()) std::cout << treebank_text(r.admitted);
  return kOk;
}

int do_retry(const IngestArgs& a) {
  const AnnotationSchema schema = schema_or_default(a.schema);
  const IngestState state = load_state(a.state, a.max_attempts);
  const std::vector<std::string> lines = read_lines(a.batch);
  std::vector<std::string> replacements;
  for (const auto& line : lines) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) replacements.push_back(line);
  }
  RetryResult r = process_retries(replacements, schema, state);
  if (!a.out.empty() && !r.admitted.empty()) append(a.out, treebank_text(r.admitted));
  if (!a.dead_letter.empty() && !r.dead_lettered.empty()) {
    std::string text;
    for (const auto& d : r.dead_lettered) text += d.to_json_line() + "\n";
    append(a.dead_letter, text);
  }
  save_state(a.state, r.state);
  json failed = json::array();
  for (const auto& f : r.failed) failed.push_back(rejection_json(f));
  json dead = json::array();
  for (const auto& d : r.dead_lettered) dead.push_back(d.sent_id);
  const json report = {{"admitted", r.admitted.size()},
                       {"failed", failed},
                       {"dead_lettered", dead},
                       {"state", state_summary(r.state)}};
  std::cout << report.dump(2) << "\n";
  if (a.out.empty()) std::cout << treebank_text(r.admitted);
  return kOk;
}

// freeze / split ------------------------------------------------------------

struct FreezeArgs {
  std::vector<std::string> batches;
  std::string retries;
  std::string out;
  std::string manifest_out;
  std::string schema;
  bool strict = false;
};

int do_freeze(const FreezeArgs& a) {
  std::vector<Treebank> batches;
  for (const auto& path : a.batches) batches.push_back(read_treebank(path));
  Treebank retries;
  if (!a.retries.empty()) retries = read_treebank(a.retries);
  FreezeResult r = freeze(batches, retries, profile_of(a.strict), schema_or_default(a.schema));
  r.manifest.created_from = a.batches;
  if (!a.retries.empty()) r.manifest.created_from.push_back(a.retries);
  const std::string snapshot = serialize_treebank(r.snapshot);
  emit(snapshot, a.out);
  const std::string manifest = r.manifest.to_json();
  if (!a.manifest_out.empty()) {
    write_file_atomic(a.manifest_out, manifest);
  } else if (!a.out.empty()) {
    std::cout << manifest;
  }
  for (const auto& rej : r.rejected) {
    for (const auto& issue : rej.issues) {
      spdlog::error("VALIDATION_REJECT {}: {} {}", rej.sent_id, to_string(issue.code), issue.message);
    }
  }
  return r.rejected.empty() ? kOk : kValidationFailed;
}

struct SplitArgs {
  std::string file;
  std::uint64_t seed = 42;
  std::string test_fraction = "0.2";
  std::string out;
  std::string train_out;
  std::string test_out;
};

int do_split(const SplitArgs& a) {
  const Treebank tb = read_treebank(a.file);
  const SplitManifest m = deterministic_split(tb, a.seed, TestFraction::parse(a.test_fraction));
  emit(m.to_json(), a.out);
  if (!a.train_out.empty()) write_treebank(a.train_out, select_sentences(tb, m.train_ids));
  if (!a.test_out.empty()) write_treebank(a.test_out, select_sentences(tb, m.test_ids));
  return kOk;
}

// train / parse -------------------------------------------------------------

struct TrainArgs {
  std::string train;
  std::string model_out;
  ParserConfig config;
  bool strict = false;
};

int do_train(TrainArgs a) {
  a.config.admit = profile_of(a.strict);
  const Treebank tb = read_treebank(a.train);
  const ParserModel model = train(tb, a.config);
  save_model(a.model_out, model);
  spdlog::info("trained on {} sentences, {} epochs", tb.size(), a.config.epochs);
  return kOk;
}

struct ParseArgs {
  std::string model;
  std::string in;
  std::string out;
  bool repair = false;
};

int do_parse(const ParseArgs& a) {
  const ParserModel model = load_model(a.model);
  Treebank tb = predict_treebank(model, read_treebank(a.in));
  if (a.repair) {
    for (auto& s : tb.sentences) s = repair_tree(std::move(s));
  }
  emit(serialize_treebank(tb), a.out);
  return kOk;
}

// score / diff --------------------------------------------------------------

struct ScoreArgs {
  std::string gold;
  std::string pred;
  std::string report_out;
  EvalOptions options;
};

int do_score(const ScoreArgs& a) {
  const EvalReport r = evaluate(read_treebank(a.gold), read_treebank(a.pred), a.options);
  emit(r.to_json(), a.report_out);
  return kOk;
}

struct DiffArgs {
  std::string a;
  std::string b;
  std::string report_out;
};

int do_diff(const DiffArgs& d) {
  const EvalReport baseline = EvalReport::from_json(read_file(d.a));
  const EvalReport candidate = EvalReport::from_json(read_file(d.b));
  emit(diff_reports(baseline, candidate).to_json(), d.report_out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  configure_logging();
  CLI::App app{"Reproducible treebank pipeline for historical Greek text", "kath"};
  app.set_version_flag("--version", KATH_VERSION);
  app.require_subcommand(1);

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a CoNLL-U file");
  validate->add_option("file", va.file, "CoNLL-U file")->required()->check(CLI::ExistingFile);
  auto* strict_flag = validate->add_flag("--strict", va.strict, "Strict profile");
  validate->add_flag("--lenient", va.lenient, "Lenient profile (default)")->excludes(strict_flag);
  validate->add_option("--schema", va.schema, "Annotation schema YAML")->check(CLI::ExistingFile);
  validate->add_option("--report-out", va.report_out, "Write the issue report here");

  ReconstructArgs ra;
  auto* reconstruct = app.add_subcommand("reconstruct", "Repair OCR text");
  reconstruct->add_option("input", ra.input, "UTF-8 text file")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--out", ra.out, "Reconstructed text");
  reconstruct->add_option("--lexicon", ra.lexicon, "One word per line")->check(CLI::ExistingFile);
  reconstruct->add_option("--report-out", ra.report_out, "Audit report JSON");
  reconstruct->add_option("--flag-long", ra.flag_long, "CoNLL-U file to scan for long sentences")
      ->check(CLI::ExistingFile);
  reconstruct->add_option("--threshold", ra.threshold, "Long-sentence token threshold");
  reconstruct->add_option("--max-join-gap", ra.max_join_gap, "Line breaks one word may span");
  reconstruct->add_flag("--no-dehyphenate", ra.no_dehyphenate);
  reconstruct->add_flag("--no-join", ra.no_join);
  reconstruct->add_flag("--no-punct", ra.no_punct);

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "Admit annotation records from a JSONL batch");
  ingest->add_option("batch", ia.batch, "JSONL batch")->required()->check(CLI::ExistingFile);
  ingest->add_option("--state", ia.state, "Ingestion state file")->required();
  ingest->add_option("--schema", ia.schema, "Annotation schema YAML")->check(CLI::ExistingFile);
  ingest->add_option("--out", ia.out, "Append admitted sentences here");
  ingest->add_option("--max-attempts", ia.max_attempts, "Retries before dead-lettering")
      ->check(CLI::PositiveNumber);

  IngestArgs ta;
  auto* retry = app.add_subcommand("retry", "Process replacements for queued records");
  retry->add_option("replacements", ta.batch, "JSONL replacements")->required()->check(CLI::ExistingFile);
  retry->add_option("--state", ta.state, "Ingestion state file")->required()->check(CLI::ExistingFile);
  retry->add_option("--schema", ta.schema, "Annotation schema YAML")->check(CLI::ExistingFile);
  retry->add_option("--out", ta.out, "Append admitted sentences here");
  retry->add_option("--dead-letter", ta.dead_letter, "Append dead-lettered records here");

  FreezeArgs fa;
  auto* freeze_cmd = app.add_subcommand("freeze", "Freeze batches and retries into a snapshot");
  freeze_cmd->add_option("--batches", fa.batches, "Batch CoNLL-U files, in order")
      ->required()->check(CLI::ExistingFile);
  freeze_cmd->add_option("--retries", fa.retries, "Retry CoNLL-U file")->check(CLI::ExistingFile);
  freeze_cmd->add_option("--out", fa.out, "Snapshot CoNLL-U");
  freeze_cmd->add_option("--manifest-out", fa.manifest_out, "Snapshot manifest JSON");
  freeze_cmd->add_option("--schema", fa.schema, "Annotation schema YAML")->check(CLI::ExistingFile);
  freeze_cmd->add_flag("--strict", fa.strict, "Admit only strictly valid sentences");

  SplitArgs sa;
  auto* split = app.add_subcommand("split", "Deterministic train/test split");
  split->add_option("file", sa.file, "Snapshot CoNLL-U")->required()->check(CLI::ExistingFile);
  split->add_option("--seed", sa.seed, "Shuffle seed");
  split->add_option("--test-fraction", sa.test_fraction, "Decimal or a/b in (0, 1)");
  split->add_option("--out", sa.out, "Split manifest JSON");
  split->add_option("--train-out", sa.train_out, "Train CoNLL-U");
  split->add_option("--test-out", sa.test_out, "Test CoNLL-U");

  TrainArgs tra;
  auto* train_cmd = app.add_subcommand("train", "Train the baseline parser");
  train_cmd->add_option("--train", tra.train, "Training CoNLL-U")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--model-out", tra.model_out, "Model file")->required();
  train_cmd->add_option("--epochs", tra.config.epochs, "Passes over the data");
  train_cmd->add_option("--window", tra.config.window, "Head candidate window");
  train_cmd->add_option("--hash-bits", tra.config.hash_bits, "Feature space is 2^bits");
  train_cmd->add_option("--seed", tra.config.seed, "Recorded in the model");
  train_cmd->add_option("--lr", tra.config.lr0, "Initial learning rate");
  train_cmd->add_option("--l2", tra.config.l2, "L2 strength");
  train_cmd->add_flag("--strict", tra.strict, "Train only on strictly valid sentences");

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "Tag and parse with a trained model");
  parse->add_option("--model", pa.model, "Model file")->required()->check(CLI::ExistingFile);
  parse->add_option("--in", pa.in, "Input CoNLL-U")->required()->check(CLI::ExistingFile);
  parse->add_option("--out", pa.out, "Predicted CoNLL-U");
  parse->add_flag("--repair-tree", pa.repair, "Force single-rooted acyclic output");

  ScoreArgs sca;
  auto* score = app.add_subcommand("score", "UPOS, weighted DEPREL F1, UAS and LAS");
  score->add_option("--gold", sca.gold, "Gold CoNLL-U")->required()->check(CLI::ExistingFile);
  score->add_option("--pred", sca.pred, "Predicted CoNLL-U")->required()->check(CLI::ExistingFile);
  score->add_option("--report-out", sca.report_out, "Report JSON");
  score->add_flag("--universal-only", sca.options.universal_deprel, "Strip DEPREL subtypes");
  score->add_flag("--exclude-punct", sca.options.exclude_punct, "Skip PUNCT tokens");

  DiffArgs da;
  auto* diff = app.add_subcommand("diff", "Compare two score reports");
  diff->add_option("--a", da.a, "Baseline report")->required()->check(CLI::ExistingFile);
  diff->add_option("--b", da.b, "Candidate report")->required()->check(CLI::ExistingFile);
  diff->add_option("--report-out", da.report_out, "Delta JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (validate->parsed()) return do_validate(va);
    if (reconstruct->parsed()) return do_reconstruct(ra);
    if (ingest->parsed()) return do_ingest(ia);
    if (retry->parsed()) return do_retry(ta);
    if (freeze_cmd->parsed()) return do_freeze(fa);
    if (split->parsed()) return do_split(sa);
    if (train_cmd->parsed()) return do_train(tra);
    if (parse->parsed()) return do_parse(pa);
    if (score->parsed()) return do_score(sca);
    if (diff->parsed()) return do_diff(da);
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.code()), e.what());
    return is_usage_error(e.code()) ? kUsageError : kValidationFailed;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kUsageError;
  }
  return kUsageError;
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace kath::cli
