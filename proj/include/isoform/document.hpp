#ifndef ISOFORM_DOCUMENT_HPP_
#define ISOFORM_DOCUMENT_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "isoform/semigroup_set.hpp"
#include "isoform/similarity.hpp"
#include "isoform/structure.hpp"

namespace isoform {

using json = nlohmann::json;

// On-disk generator/matrix file. Complex numbers are [re, im] pairs,
// matrices row-major, format_version 1 throughout.
struct MatrixFileDocument {
  int dim = 0;
  std::string label;
  std::vector<std::pair<std::string, ComplexMatrix>> matrices;
  std::map<std::string, double> tolerance_overrides;  // eq_tol, spec_tol, ...
  long closure_cap_override = 0;                      // 0 = none
};

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& where);

MatrixFileDocument read_matrix_file(const std::string& path);
json matrix_file_to_json(const MatrixFileDocument& doc);

GeneratorInput to_generator_input(const MatrixFileDocument& doc);

// Applies the document's overrides on top of cfg (flags given on the
// command line take precedence and are applied afterwards by the caller).
ToleranceConfig apply_overrides(const MatrixFileDocument& doc,
                                ToleranceConfig cfg);

json tolerances_to_json(const ToleranceConfig& cfg);

json closure_document(const SemigroupSet& s, const ToleranceConfig& cfg,
                      const std::string& label, double elapsed_ms);

struct AnalysisBundle {
  const SemigroupSet* set = nullptr;
  const IrreducibilityResult* irreducible = nullptr;
  const ConditionIiVerdict* cond_ii = nullptr;
  const ConditionIiiVerdict* cond_iii = nullptr;
  const std::vector<FoundIdempotent>* idempotents = nullptr;
  const SimilarityResult* similarity = nullptr;  // optional
  double elapsed_ms = 0.0;
};

json analysis_document(const AnalysisBundle& bundle, const ToleranceConfig& cfg,
                       const std::string& label);

// Serializes to path via temp file + rename; "-" writes to stdout.
void write_document(const json& doc, const std::string& path);

}  // namespace isoform

#endif  // ISOFORM_DOCUMENT_HPP_
