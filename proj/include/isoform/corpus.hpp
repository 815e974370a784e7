#ifndef ISOFORM_CORPUS_HPP_
#define ISOFORM_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "isoform/semigroup_set.hpp"

namespace isoform {

// Finite unitary groups used as corpus blocks; product closure is exact.
//   trivial, c2..c8   cyclic phase groups, 1 x 1
//   sp2               signed 2 x 2 permutation matrices, order 8
//   q8                quaternion unit group as 2 x 2 matrices, order 8
std::vector<std::string> corpus_group_names();
std::vector<ComplexMatrix> corpus_group(const std::string& name);
int corpus_group_block_size(const std::string& name);

// S0(U): all E_ij (x) U plus the zero matrix.
SemigroupSet build_s0(int m, const std::vector<ComplexMatrix>& u,
                      const ToleranceConfig& cfg);

// S1(U): partial-permutation block patterns with blocks from U, plus zero.
SemigroupSet build_s1(int m, const std::vector<ComplexMatrix>& u,
                      const ToleranceConfig& cfg);

// {M T M^-1 : T in s}, re-deduplicated canonically.
SemigroupSet conjugate_set(const SemigroupSet& s, const ComplexMatrix& m,
                           const ToleranceConfig& cfg);

// Example semigroup on two 2 x 2 column patterns with phase e^{it}; the
// closure of these generators is not norm closed for irrational t/(2 pi).
// depth pre-expands words up to that length into the generator list.
GeneratorInput build_example_26(double t, int depth);

// Small generating sets whose closure is the full S0/S1 instance; these are
// what gen-corpus writes to generator files.
GeneratorInput s0_generators(int m, const std::string& group);
GeneratorInput s1_generators(int m, const std::string& group);

// Deterministic portable RNG helpers (identical streams on any platform).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next();
  double uniform();          // [0, 1)
  double gauss();            // standard normal, Box-Muller
 private:
  std::uint64_t state_;
};

ComplexMatrix random_unitary(int n, Rng& rng);

// U1 * diag(s) * U2 with scales log-uniform in [1/4, 4]; condition <= 16.
ComplexMatrix random_conjugator(int n, std::uint64_t seed);

}  // namespace isoform

#endif  // ISOFORM_CORPUS_HPP_
