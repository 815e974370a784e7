#include "isoform/closure.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <utility>

#include "isoform/error.hpp"
#include "isoform/numeric.hpp"
#include "isoform/schur.hpp"

namespace isoform {

namespace {

// Mutable accumulator behind closure(): canonical grid dedup over a
// growing element list. A recomputed word can drift across a cell
// boundary in a few coordinates, so the lookup also probes the adjacent
// cell of every boundary-margin coordinate before declaring novelty.
class Accumulator {
 public:
  Accumulator(int dim, const ToleranceConfig& cfg)
      : dim_(dim), cfg_(cfg), pitch_(canonical_pitch(dim, cfg.eq_tol)) {}

  // Returns the index of the stored representative, or nullopt when the
  // candidate was new but the cap is full (or the product overflowed).
  std::optional<std::size_t> admit(ComplexMatrix m, int word_length) {
    if (!m.all_finite()) {
      capped_ = true;
      return std::nullopt;
    }
    if (op_norm_leq(m, cfg_.rank_tol)) m = ComplexMatrix::zero(dim_);
    const auto key = quantize_key(m, pitch_);
    if (const auto idx = find_match(m, key)) return idx;
    if (elements_.size() >= cfg_.closure_cap) {
      capped_ = true;
      return std::nullopt;
    }
    const std::size_t idx = elements_.size();
    elements_.push_back(std::move(m));
    lengths_.push_back(word_length);
    grid_[key_token(key)].push_back(idx);
    return idx;
  }

 private:
  std::optional<std::size_t> find_match(
      const ComplexMatrix& m, const std::vector<std::int64_t>& key) const {
    if (const auto idx = probe_cell(m, key)) return idx;
    // Single-coordinate neighbor cells for boundary-margin coordinates.
    constexpr double kMargin = 0.05;
    const auto& vals = m.data();
    std::vector<std::int64_t> neighbor = key;
    int probes = 0;
    for (std::size_t c = 0; c < key.size() && probes < 8; ++c) {
      const double v = (c % 2 == 0 ? vals[c / 2].real() : vals[c / 2].imag());
      const double frac = v / pitch_ - static_cast<double>(key[c]);
      if (std::abs(frac) < 0.5 - kMargin) continue;
      ++probes;
      neighbor[c] = key[c] + (frac > 0 ? 1 : -1);
      if (const auto idx = probe_cell(m, neighbor)) return idx;
      neighbor[c] = key[c];
    }
    return std::nullopt;
  }

  std::optional<std::size_t> probe_cell(
      const ComplexMatrix& m, const std::vector<std::int64_t>& key) const {
    const auto it = grid_.find(key_token(key));
    if (it == grid_.end()) return std::nullopt;
    for (std::size_t idx : it->second)
      if (op_norm_leq(m - elements_[idx], cfg_.eq_tol)) return idx;
    return std::nullopt;
  }

 public:

  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool capped() const { return capped_; }
  int max_word_length() const {
    int m = 0;
    for (int l : lengths_) m = std::max(m, l);
    return m;
  }

 private:
  int dim_;
  ToleranceConfig cfg_;
  double pitch_;
  bool capped_ = false;
  std::vector<ComplexMatrix> elements_;
  std::vector<int> lengths_;
  std::unordered_map<std::string, std::vector<std::size_t>> grid_;
};

// Two-sided saturation of the accumulator against a frontier of fresh
// indices; used after word saturation to absorb adjoined limit points.
bool resaturate(Accumulator& acc, std::vector<std::size_t> frontier) {
  bool complete = true;
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    const std::size_t existing = acc.size();
    for (std::size_t f : frontier) {
      for (std::size_t e = 0; e < existing; ++e) {
        for (int side = 0; side < 2; ++side) {
          const ComplexMatrix p = side == 0
                                      ? acc.elements()[f] * acc.elements()[e]
                                      : acc.elements()[e] * acc.elements()[f];
          const std::size_t before = acc.size();
          const auto idx = acc.admit(p, 0);
          if (!idx.has_value()) {
            complete = false;
          } else if (*idx >= before) {
            next.push_back(*idx);
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return complete;
}

}  // namespace

SemigroupSet closure(const GeneratorInput& gens, const ToleranceConfig& cfg) {
  gens.validate();
  cfg.validate();
  const int n = gens.dim;
  Accumulator acc(n, cfg);

  std::vector<std::size_t> frontier;
  for (const auto& g : gens.generators) {
    const std::size_t before = acc.size();
    const auto idx = acc.admit(g, 1);
    if (idx.has_value() && *idx >= before) frontier.push_back(*idx);
  }
  const std::size_t n_gens = acc.size();

  bool saturated = !acc.capped();
  int generation = 1;
  while (!frontier.empty()) {
    ++generation;
    std::vector<std::size_t> next;
    for (std::size_t f : frontier) {
      for (std::size_t g = 0; g < n_gens; ++g) {
        const ComplexMatrix p = acc.elements()[f] * acc.elements()[g];
        const std::size_t before = acc.size();
        const auto idx = acc.admit(p, generation);
        if (!idx.has_value()) {
          saturated = false;
        } else if (*idx >= before) {
          next.push_back(*idx);
        }
      }
    }
    if (!saturated) break;
    frontier = std::move(next);
  }

  // Norm-closure surrogate: adjoin near-idempotent power limits. Elements
  // whose powers escape the bound (defective unimodular spectrum) have no
  // limit points and are skipped.
  std::vector<ComplexMatrix> limits;
  const std::size_t scanned = acc.size();
  for (std::size_t i = 0; i < scanned; ++i) {
    const ComplexMatrix& t = acc.elements()[i];
    if (!t.all_finite() || op_norm_leq(t, cfg.rank_tol)) continue;
    if (spectral_radius(t) > 1.0 + cfg.spec_tol) continue;
    LimitPointOptions opts;
    opts.include_zero = false;
    try {
      for (auto& p : detect_limit_points(t, cfg, opts))
        limits.push_back(std::move(p));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::hypothesis) throw;
    }
  }
  std::vector<std::size_t> fresh;
  for (auto& p : limits) {
    const std::size_t before = acc.size();
    const auto idx = acc.admit(std::move(p), 0);
    if (!idx.has_value())
      saturated = false;
    else if (*idx >= before)
      fresh.push_back(*idx);
  }
  if (!fresh.empty())
    if (!resaturate(acc, std::move(fresh))) saturated = false;

  return SemigroupSet::from_elements(n, acc.elements(), cfg, saturated,
                                     acc.max_word_length());
}

std::vector<ComplexMatrix> detect_limit_points(const ComplexMatrix& t,
                                               const ToleranceConfig& cfg,
                                               const LimitPointOptions& opts) {
  validate_matrix(t, "detect_limit_points");
  const int n = t.dim();
  const double r = spectral_radius(t);
  if (r > 1.0 + cfg.spec_tol)
    throw_error(ErrorKind::precondition,
                "detect_limit_points: spectral radius exceeds 1 + spec_tol");

  if (r < 1.0 - cfg.spec_tol) {
    std::vector<ComplexMatrix> out;
    if (opts.include_zero) out.push_back(ComplexMatrix::zero(n));
    return out;
  }

  const double bound =
      opts.norm_bound > 0.0 ? opts.norm_bound : 64.0 * std::max(1.0, op_norm(t));
  const double cand_tol =
      opts.candidate_tol > 0.0 ? opts.candidate_tol : 10.0 * cfg.eq_tol;
  const double guard = 2.0 * bound * std::sqrt(static_cast<double>(n));

  std::vector<ComplexMatrix> candidates;
  auto consider = [&](const ComplexMatrix& x) {
    if (x.frobenius_norm() > guard)
      throw_error(ErrorKind::hypothesis,
                  "detect_limit_points: powers exceed twice the norm bound");
    if (op_norm_leq(x * x - x, cand_tol)) candidates.push_back(x);
  };

  ComplexMatrix p = t;
  consider(p);
  const int linear = 4 * n;
  for (int j = 2; j <= linear; ++j) {
    p = p * t;
    consider(p);
  }
  const long budget = 64L * n * n;
  for (long e = 2L * linear; e <= budget; e *= 2) {
    p = p * p;
    consider(p);
  }

  std::vector<ComplexMatrix> out;
  for (ComplexMatrix x : candidates) {
    if (opts.polish) {
      for (int it = 0; it < 40; ++it) {
        const ComplexMatrix x2 = x * x;
        if (op_norm_leq(x2 - x, 0.1 * cfg.eq_tol)) break;
        x = 3.0 * x2 - 2.0 * (x2 * x);
        if (x.frobenius_norm() > guard) break;
      }
    }
    if (!op_norm_leq(x * x - x, 10.0 * cfg.eq_tol)) continue;
    if (!opts.include_zero && op_norm_leq(x, cfg.rank_tol)) continue;
    bool dup = false;
    for (const auto& y : out)
      if (op_norm_leq(x - y, cfg.eq_tol)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(x));
  }
  return out;
}

std::optional<ComplexMatrix> product_probe(const ComplexMatrix& a,
                                           const SemigroupSet& s,
                                           const ComplexMatrix& b,
                                           const ToleranceConfig& cfg) {
  for (const auto& t : s.elements()) {
    const ComplexMatrix p = a * (t * b);
    if (!op_norm_leq(p, cfg.rank_tol)) return t;
  }
  return std::nullopt;
}

SemigroupSet ideal(const SemigroupSet& s, const ComplexMatrix& t,
                   const ToleranceConfig& cfg) {
  if (!s.find_within(t, cfg.eq_tol).has_value())
    throw_error(ErrorKind::precondition, "ideal: t is not an element of s");
  const std::size_t m = s.size() + 1;
  if (m * m > std::size_t(4) << 20)
    throw_error(ErrorKind::invalid_argument, "ideal: set too large");

  std::vector<ComplexMatrix> factors = s.elements();
  factors.push_back(ComplexMatrix::identity(s.dim()));
  GeneratorInput gens;
  gens.dim = s.dim();
  gens.label = "ideal";
  for (const auto& a : factors) {
    const ComplexMatrix at = a * t;
    for (const auto& b : factors) gens.generators.push_back(at * b);
  }
  return closure(gens, cfg);
}

}  // namespace isoform
