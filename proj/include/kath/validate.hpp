#pragma once

#include <vector>

#include "kath/conllu.hpp"
#include "kath/schema.hpp"

namespace kath {

// Tree checks use token positions 1..n; heads must point into 0..n.
// UPOS and DEPREL are checked against `schema` (UD v2 defaults when omitted).
std::vector<ValidationIssue> validate_sentence(
    const Sentence& sentence, Strictness profile,
    const AnnotationSchema& schema = AnnotationSchema::ud_v2_default());

// Per-sentence issues, rows dropped by a lenient parse, and repeated sent_ids.
std::vector<ValidationIssue> validate_treebank(const Treebank& treebank,
                                               Strictness profile,
                                               const AnnotationSchema& schema);

bool has_errors(const std::vector<ValidationIssue>& issues);

// Single root, no cycles, all heads in range.
bool is_well_formed_tree(const Sentence& sentence);

}  // namespace kath
