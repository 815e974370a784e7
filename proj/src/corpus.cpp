#include "isoform/corpus.hpp"

#include <cmath>
#include <numbers>

#include "isoform/error.hpp"
#include "isoform/numeric.hpp"

namespace isoform {

namespace {

std::vector<ComplexMatrix> cyclic_group(int order) {
  std::vector<ComplexMatrix> g;
  for (int j = 0; j < order; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / order;
    ComplexMatrix u(1, 1);
    u(0, 0) = std::polar(1.0, theta);
    g.push_back(std::move(u));
  }
  return g;
}

std::vector<ComplexMatrix> signed_perm2() {
  std::vector<ComplexMatrix> g;
  for (int p = 0; p < 2; ++p)
    for (int sa = 0; sa < 2; ++sa)
      for (int sb = 0; sb < 2; ++sb) {
        ComplexMatrix u(2, 2);
        const double a = sa ? -1.0 : 1.0;
        const double b = sb ? -1.0 : 1.0;
        if (p == 0) {
          u(0, 0) = a;
          u(1, 1) = b;
        } else {
          u(0, 1) = a;
          u(1, 0) = b;
        }
        g.push_back(std::move(u));
      }
  return g;
}

std::vector<ComplexMatrix> quaternion8() {
  const cd i(0.0, 1.0);
  const ComplexMatrix one = ComplexMatrix::identity(2);
  ComplexMatrix qi(2, 2), qj(2, 2), qk(2, 2);
  qi(0, 0) = i;
  qi(1, 1) = -i;
  qj(0, 1) = 1.0;
  qj(1, 0) = -1.0;
  qk(0, 1) = i;
  qk(1, 0) = i;
  std::vector<ComplexMatrix> g;
  for (const ComplexMatrix& u : {one, qi, qj, qk}) {
    g.push_back(u);
    g.push_back(-1.0 * u);
  }
  return g;
}

void check_group_sample(const std::vector<ComplexMatrix>& u,
                        const ToleranceConfig& cfg) {
  if (u.empty())
    throw_error(ErrorKind::precondition, "group sample is empty");
  const int k = u.front().dim();
  bool has_identity = false;
  for (const auto& g : u)
    if (within(g, ComplexMatrix::identity(k), cfg.eq_tol)) has_identity = true;
  if (!has_identity)
    throw_error(ErrorKind::precondition, "group sample does not contain I");
  for (const auto& a : u)
    for (const auto& b : u) {
      const ComplexMatrix p = a * b;
      bool found = false;
      for (const auto& c : u)
        if (within(p, c, cfg.eq_tol)) {
          found = true;
          break;
        }
      if (!found)
        throw_error(ErrorKind::precondition,
                    "group sample is not product-closed");
    }
}

void emit_partial_patterns(int m, int col, std::vector<int>& image,
                           std::vector<char>& row_used,
                           const std::vector<ComplexMatrix>& u,
                           std::vector<ComplexMatrix>& out) {
  if (col == m) {
    // image[c] = target row or -1. Fill blocks with every U combination.
    std::vector<int> cols;
    for (int c = 0; c < m; ++c)
      if (image[c] >= 0) cols.push_back(c);
    const int k = u.front().dim();
    std::vector<std::size_t> pick(cols.size(), 0);
    for (;;) {
      ComplexMatrix t(m * k, m * k);
      for (std::size_t idx = 0; idx < cols.size(); ++idx)
        t.set_block(image[cols[idx]] * k, cols[idx] * k, u[pick[idx]]);
      out.push_back(std::move(t));
      std::size_t d = 0;
      while (d < pick.size()) {
        if (++pick[d] < u.size()) break;
        pick[d] = 0;
        ++d;
      }
      if (d == pick.size()) break;
    }
    return;
  }
  image[col] = -1;
  emit_partial_patterns(m, col + 1, image, row_used, u, out);
  for (int r = 0; r < m; ++r) {
    if (row_used[r]) continue;
    image[col] = r;
    row_used[r] = 1;
    emit_partial_patterns(m, col + 1, image, row_used, u, out);
    row_used[r] = 0;
  }
  image[col] = -1;
}

}  // namespace

std::vector<std::string> corpus_group_names() {
  return {"trivial", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "sp2", "q8"};
}

std::vector<ComplexMatrix> corpus_group(const std::string& name) {
  if (name == "trivial") return cyclic_group(1);
  if (name.size() == 2 && name[0] == 'c' && name[1] >= '2' && name[1] <= '8')
    return cyclic_group(name[1] - '0');
  if (name == "sp2") return signed_perm2();
  if (name == "q8") return quaternion8();
  throw_error(ErrorKind::parse, "unknown corpus group: " + name);
}

int corpus_group_block_size(const std::string& name) {
  return corpus_group(name).front().dim();
}

SemigroupSet build_s0(int m, const std::vector<ComplexMatrix>& u,
                      const ToleranceConfig& cfg) {
  check_group_sample(u, cfg);
  const int k = u.front().dim();
  std::vector<ComplexMatrix> elements;
  elements.push_back(ComplexMatrix::zero(m * k));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (const auto& g : u) elements.push_back(block_embed(m, i, j, g));
  return SemigroupSet::from_elements(m * k, std::move(elements), cfg, true, 1);
}

SemigroupSet build_s1(int m, const std::vector<ComplexMatrix>& u,
                      const ToleranceConfig& cfg) {
  check_group_sample(u, cfg);
  const int k = u.front().dim();
  std::vector<ComplexMatrix> elements;
  std::vector<int> image(m, -1);
  std::vector<char> row_used(m, 0);
  emit_partial_patterns(m, 0, image, row_used, u, elements);
  return SemigroupSet::from_elements(m * k, std::move(elements), cfg, true, 1);
}

SemigroupSet conjugate_set(const SemigroupSet& s, const ComplexMatrix& m,
                           const ToleranceConfig& cfg) {
  const ComplexMatrix minv = inverse(m, cfg);
  std::vector<ComplexMatrix> elements;
  elements.reserve(s.size());
  for (const auto& t : s.elements()) elements.push_back(m * t * minv);
  return SemigroupSet::from_elements(s.dim(), std::move(elements), cfg,
                                     s.saturated(), s.max_word_length());
}

GeneratorInput build_example_26(double t, int depth) {
  if (!(t > 0.0))
    throw_error(ErrorKind::invalid_argument, "build_example_26: t must be > 0");
  GeneratorInput gens;
  gens.dim = 2;
  gens.label = "example26_t" + std::to_string(t);
  for (int p = 1; p <= depth + 1; ++p) {
    const cd z = std::polar(1.0, p * t);
    ComplexMatrix a(2, 2), b(2, 2);
    a(0, 0) = z;
    a(1, 0) = z;
    b(0, 1) = z;
    b(1, 1) = z;
    gens.generators.push_back(std::move(a));
    gens.generators.push_back(std::move(b));
  }
  return gens;
}

GeneratorInput s0_generators(int m, const std::string& group) {
  const std::vector<ComplexMatrix> u = corpus_group(group);
  const int k = u.front().dim();
  GeneratorInput gens;
  gens.dim = m * k;
  gens.label = "s0_m" + std::to_string(m) + "_" + group;
  const ComplexMatrix eye = ComplexMatrix::identity(k);
  if (m == 1) {
    for (const auto& g : u) gens.generators.push_back(g);
    gens.generators.push_back(ComplexMatrix::zero(k));
    return gens;
  }
  for (int i = 0; i + 1 < m; ++i) {
    gens.generators.push_back(block_embed(m, i, i + 1, eye));
    gens.generators.push_back(block_embed(m, i + 1, i, eye));
  }
  for (const auto& g : u) gens.generators.push_back(block_embed(m, 0, 0, g));
  return gens;
}

GeneratorInput s1_generators(int m, const std::string& group) {
  const std::vector<ComplexMatrix> u = corpus_group(group);
  const int k = u.front().dim();
  GeneratorInput gens;
  gens.dim = m * k;
  gens.label = "s1_m" + std::to_string(m) + "_" + group;
  if (m == 1) {
    for (const auto& g : u) gens.generators.push_back(g);
    gens.generators.push_back(ComplexMatrix::zero(k));
    return gens;
  }
  const ComplexMatrix eye = ComplexMatrix::identity(k);
  // Cycle and swap generate the permutation blocks; the leading diagonal
  // idempotents of each rank cut out the partial patterns; the group
  // elements seed the blocks.
  ComplexMatrix cycle(m * k, m * k);
  for (int i = 0; i < m; ++i) cycle.set_block(((i + 1) % m) * k, i * k, eye);
  gens.generators.push_back(std::move(cycle));
  if (m > 2) {
    ComplexMatrix swap01(m * k, m * k);
    swap01.set_block(k, 0, eye);
    swap01.set_block(0, k, eye);
    for (int i = 2; i < m; ++i) swap01.set_block(i * k, i * k, eye);
    gens.generators.push_back(std::move(swap01));
  }
  for (int r = 1; r < m; ++r) {
    ComplexMatrix cut(m * k, m * k);
    for (int i = 0; i < r; ++i) cut.set_block(i * k, i * k, eye);
    gens.generators.push_back(std::move(cut));
  }
  for (const auto& g : u) {
    ComplexMatrix d(m * k, m * k);
    d.set_block(0, 0, g);
    for (int i = 1; i < m; ++i) d.set_block(i * k, i * k, eye);
    gens.generators.push_back(std::move(d));
  }
  return gens;
}

std::uint64_t Rng::next() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

ComplexMatrix random_unitary(int n, Rng& rng) {
  ComplexMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cd(rng.gauss(), rng.gauss());
  return orthonormal_range_basis(g, n);
}

ComplexMatrix random_conjugator(int n, std::uint64_t seed) {
  Rng rng(seed);
  const ComplexMatrix u1 = random_unitary(n, rng);
  const ComplexMatrix u2 = random_unitary(n, rng);
  ComplexMatrix d(n, n);
  const double lo = std::log(0.25), hi = std::log(4.0);
  for (int i = 0; i < n; ++i)
    d(i, i) = std::exp(lo + (hi - lo) * rng.uniform());
  return u1 * d * u2;
}

}  // namespace isoform
