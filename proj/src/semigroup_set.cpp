#include "isoform/semigroup_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "isoform/error.hpp"
#include "isoform/numeric.hpp"

namespace isoform {

void GeneratorInput::validate() const {
  if (generators.empty())
    throw_error(ErrorKind::parse, "generator list is empty");
  if (dim <= 0) throw_error(ErrorKind::parse, "dimension must be positive");
  for (const auto& g : generators) {
    if (!g.is_square() || g.dim() != dim)
      throw_error(ErrorKind::parse, "generators must all be " +
                                        std::to_string(dim) + "x" +
                                        std::to_string(dim));
    if (!g.all_finite())
      throw_error(ErrorKind::parse, "generator has non-finite entries");
  }
}

double canonical_pitch(int dim, double eq_tol) {
  return eq_tol / (4.0 * std::max(1, dim));
}

namespace {
std::int64_t quantize(double x, double pitch) {
  const double v = x / pitch;
  // Saturate far outside any realistic corpus scale; llround on out-of-range
  // values is undefined.
  if (!(v > -9.0e18)) return -9000000000000000000LL;
  if (!(v < 9.0e18)) return 9000000000000000000LL;
  return std::llround(v);
}
}  // namespace

std::vector<std::int64_t> quantize_key(const ComplexMatrix& m, double pitch) {
  std::vector<std::int64_t> key;
  key.reserve(2 * m.data().size());
  for (const cd& z : m.data()) {
    key.push_back(quantize(z.real(), pitch));
    key.push_back(quantize(z.imag(), pitch));
  }
  return key;
}

bool canonical_less(const ComplexMatrix& a, const ComplexMatrix& b,
                    double pitch) {
  // Descending lexicographic on the quantized entries: the matrix-unit
  // closure lists as {E11, E12, E21, E22, 0}.
  const auto ka = quantize_key(a, pitch), kb = quantize_key(b, pitch);
  if (ka != kb) return ka > kb;
  // Same grid cell: order by raw entries so the relation stays total.
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (da[i].real() != db[i].real()) return da[i].real() > db[i].real();
    if (da[i].imag() != db[i].imag()) return da[i].imag() > db[i].imag();
  }
  return false;
}

std::string key_token(const std::vector<std::int64_t>& key) {
  std::string s(key.size() * sizeof(std::int64_t), '\0');
  std::memcpy(s.data(), key.data(), s.size());
  return s;
}

SemigroupSet SemigroupSet::from_elements(int dim,
                                         std::vector<ComplexMatrix> elements,
                                         const ToleranceConfig& cfg,
                                         bool saturated, int max_word_length) {
  SemigroupSet s;
  s.dim_ = dim;
  s.eq_tol_ = cfg.eq_tol;
  s.pitch_ = canonical_pitch(dim, cfg.eq_tol);
  s.saturated_ = saturated;
  s.max_word_length_ = max_word_length;

  std::sort(elements.begin(), elements.end(),
            [&](const ComplexMatrix& a, const ComplexMatrix& b) {
              return canonical_less(a, b, s.pitch_);
            });
  for (auto& e : elements) {
    if (!s.elements_.empty() &&
        op_norm_leq(e - s.elements_.back(), cfg.eq_tol))
      continue;
    s.elements_.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < s.elements_.size(); ++i) {
    s.grid_[key_token(quantize_key(s.elements_[i], s.pitch_))].push_back(i);
    if (op_norm_leq(s.elements_[i], cfg.rank_tol)) s.contains_zero_ = true;
  }
  return s;
}

std::optional<std::size_t> SemigroupSet::find_within(const ComplexMatrix& m,
                                                     double tol) const {
  if (m.rows() != dim_ || m.cols() != dim_) return std::nullopt;
  const auto it = grid_.find(key_token(quantize_key(m, pitch_)));
  if (it != grid_.end()) {
    for (std::size_t idx : it->second)
      if (op_norm_leq(m - elements_[idx], tol)) return idx;
  }
  for (std::size_t idx = 0; idx < elements_.size(); ++idx)
    if (op_norm_leq(m - elements_[idx], tol)) return idx;
  return std::nullopt;
}

}  // namespace isoform
