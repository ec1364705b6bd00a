#include "kath/schema.hpp"

#include <algorithm>

#include <yaml-cpp/yaml.h>

#include "kath/error.hpp"
#include "kath/io.hpp"

namespace kath {

namespace {

std::set<std::string, std::less<>> label_set(const YAML::Node& node,
                                             const char* key) {
  if (!node.IsSequence()) {
    throw Error(ErrorCode::kSchemaParseError,
                std::string(key) + " must be a list of labels");
  }
  std::set<std::string, std::less<>> out;
  for (const auto& item : node) {
    if (!item.IsScalar()) {
      throw Error(ErrorCode::kSchemaParseError,
                  std::string(key) + " entries must be strings");
    }
    out.insert(item.as<std::string>());
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyLabelSet, std::string(key) + " is empty");
  }
  return out;
}

}  // namespace

bool SidecarField::accepts(std::string_view value) const {
  if (free_text) return true;
  return std::find(allowed_values.begin(), allowed_values.end(), value) !=
         allowed_values.end();
}

const SidecarField* AnnotationSchema::sidecar(std::string_view name) const {
  for (const auto& field : sidecar_fields) {
    if (field.name == name) return &field;
  }
  return nullptr;
}

const std::vector<std::string>& ud_v2_upos_tags() {
  static const std::vector<std::string> tags = {
      "ADJ", "ADP", "ADV", "AUX",  "CCONJ", "DET",  "INTJ", "NOUN", "NUM",
      "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
  return tags;
}

const std::vector<std::string>& ud_v2_relations() {
  static const std::vector<std::string> rels = {
      "acl",      "advcl",    "advmod", "amod",      "appos",  "aux",
      "case",     "cc",       "ccomp",  "clf",       "compound", "conj",
      "cop",      "csubj",    "dep",    "det",       "discourse", "dislocated",
      "expl",     "fixed",    "flat",   "goeswith",  "iobj",   "list",
      "mark",     "nmod",     "nsubj",  "nummod",    "obj",    "obl",
      "orphan",   "parataxis", "punct", "reparandum", "root",  "vocative",
      "xcomp"};
  return rels;
}

AnnotationSchema AnnotationSchema::ud_v2_default() {
  AnnotationSchema schema;
  schema.schema_version = "ud-v2";
  schema.upos_set.insert(ud_v2_upos_tags().begin(), ud_v2_upos_tags().end());
  schema.deprel_set.insert(ud_v2_relations().begin(), ud_v2_relations().end());
  return schema;
}

AnnotationSchema parse_schema(std::string_view document) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(document));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kSchemaParseError, e.what());
  }
  if (!root.IsMap()) {
    throw Error(ErrorCode::kSchemaParseError, "schema must be a mapping");
  }

  AnnotationSchema schema;
  try {
    if (auto version = root["schema_version"]) {
      schema.schema_version = version.as<std::string>();
    }
    if (auto upos = root["upos"]) {
      schema.upos_set = label_set(upos, "upos");
    } else {
      schema.upos_set.insert(ud_v2_upos_tags().begin(), ud_v2_upos_tags().end());
    }
    auto deprel = root["deprel"];
    if (!deprel || deprel.IsNull()) {
      throw Error(ErrorCode::kEmptyLabelSet, "deprel list missing");
    }
    schema.deprel_set = label_set(deprel, "deprel");

    if (auto sidecars = root["sidecar_fields"]) {
      if (!sidecars.IsSequence()) {
        throw Error(ErrorCode::kSchemaParseError, "sidecar_fields must be a list");
      }
      for (const auto& node : sidecars) {
        SidecarField field;
        if (!node["name"]) {
          throw Error(ErrorCode::kSchemaParseError, "sidecar field without name");
        }
        field.name = node["name"].as<std::string>();
        if (schema.sidecar(field.name)) {
          throw Error(ErrorCode::kSchemaParseError,
                      "duplicate sidecar field " + field.name);
        }
        field.free_text = node["free_text"] && node["free_text"].as<bool>();
        if (auto values = node["values"]) {
          for (const auto& v : values) field.allowed_values.push_back(v.as<std::string>());
        }
        if (!field.free_text && field.allowed_values.empty()) {
          throw Error(ErrorCode::kSchemaParseError,
                      "sidecar field " + field.name + " has no values and is not free_text");
        }
        schema.sidecar_fields.push_back(std::move(field));
      }
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kSchemaParseError, e.what());
  }
  return schema;
}

AnnotationSchema load_schema(const std::string& path) {
  return parse_schema(read_file(path));
}

}  // namespace kath
