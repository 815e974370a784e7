#ifndef ISOFORM_SEMIGROUP_SET_HPP_
#define ISOFORM_SEMIGROUP_SET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "isoform/complex_matrix.hpp"
#include "isoform/tolerance.hpp"

namespace isoform {

struct GeneratorInput {
  int dim = 0;
  std::vector<ComplexMatrix> generators;
  std::string label;

  void validate() const;
};

// Canonical comparison: entries quantized to a grid of pitch
// eq_tol / (4 n), compared row-major, real before imaginary; ties broken
// on the raw bits so the order is total.
double canonical_pitch(int dim, double eq_tol);
std::vector<std::int64_t> quantize_key(const ComplexMatrix& m, double pitch);
bool canonical_less(const ComplexMatrix& a, const ComplexMatrix& b,
                    double pitch);

// Deduplicated finite set of matrices approximating a closed semigroup.
// Elements are kept in canonical order; the set is immutable once built.
class SemigroupSet {
 public:
  SemigroupSet() = default;

  // Canonically sorts, merges duplicates (within eq_tol via the quantized
  // grid plus a sorted-adjacent check), and indexes the elements.
  static SemigroupSet from_elements(int dim, std::vector<ComplexMatrix> elements,
                                    const ToleranceConfig& cfg, bool saturated,
                                    int max_word_length);

  int dim() const { return dim_; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains_zero() const { return contains_zero_; }
  bool saturated() const { return saturated_; }
  int max_word_length() const { return max_word_length_; }
  double eq_tol() const { return eq_tol_; }

  // Index of an element within tol of m, if any. Grid lookup first, then a
  // linear scan with Frobenius fast paths.
  std::optional<std::size_t> find_within(const ComplexMatrix& m,
                                         double tol) const;

 private:
  int dim_ = 0;
  std::vector<ComplexMatrix> elements_;
  bool contains_zero_ = false;
  bool saturated_ = false;
  int max_word_length_ = 0;
  double eq_tol_ = 0.0;
  double pitch_ = 0.0;
  std::unordered_map<std::string, std::vector<std::size_t>> grid_;
};

// Hashable grid-cell token for a quantized key.
std::string key_token(const std::vector<std::int64_t>& key);

}  // namespace isoform

#endif  // ISOFORM_SEMIGROUP_SET_HPP_
