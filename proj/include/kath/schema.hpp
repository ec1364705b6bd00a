#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kath {

struct SidecarField {
  std::string name;
  std::vector<std::string> allowed_values;
  bool free_text = false;

  bool accepts(std::string_view value) const;
};

struct AnnotationSchema {
  std::string schema_version;
  std::set<std::string, std::less<>> upos_set;
  std::set<std::string, std::less<>> deprel_set;
  std::vector<SidecarField> sidecar_fields;

  const SidecarField* sidecar(std::string_view name) const;

  // 17 UPOS tags and 37 universal relations of UD v2, no sidecars.
  static AnnotationSchema ud_v2_default();
};

const std::vector<std::string>& ud_v2_upos_tags();
const std::vector<std::string>& ud_v2_relations();

// Schema document (YAML):
//   schema_version: "1.0"
//   upos: [ADJ, ...]            # optional, defaults to the UD v2 tags
//   deprel: [acl, ...]          # required, non-empty
//   sidecar_fields:
//     - name: archaic_lexeme_class
//       values: [dative, infinitive]
//     - name: note
//       free_text: true
// Throws Error(kSchemaParseError) or Error(kEmptyLabelSet).
AnnotationSchema parse_schema(std::string_view document);
AnnotationSchema load_schema(const std::string& path);

}  // namespace kath
