// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Thresholds are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "isoform/closure.hpp"
#include "isoform/corpus.hpp"
#include "isoform/document.hpp"
#include "isoform/numeric.hpp"
#include "isoform/similarity.hpp"
#include "isoform/structure.hpp"
#include "isoform/verify.hpp"
#include "support/oracles.hpp"

using namespace isoform;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion
            << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Instance {
  int m;
  std::string group;
};

const std::vector<Instance> kSandwichInstances = {
    {1, "c2"}, {1, "c4"}, {1, "c8"}, {1, "sp2"}, {1, "q8"},
    {2, "c2"}, {2, "c4"}, {2, "c8"}, {2, "sp2"}, {2, "q8"},
    {3, "c2"}, {3, "c4"}, {3, "c8"}, {3, "sp2"}, {3, "q8"},
};

// Criterion 1: S0(U) <= S1 instance <= S1(U) with minimal rank k, under
// 5 seconds per instance.
void criterion_1() {
  const ToleranceConfig cfg;
  bool pass = true;
  std::ostringstream detail;
  double slowest = 0.0;
  for (const auto& inst : kSandwichInstances) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto u = corpus_group(inst.group);
    const int k = u.front().dim();
    const SemigroupSet s = build_s1(inst.m, u, cfg);
    const VerificationReport rep = verify_sandwich(s, inst.m, k, u, cfg);
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    if (!rep.all_ok() || rep.minimal_rank != k || dt >= 5.0) {
      pass = false;
      detail << " m=" << inst.m << "," << inst.group << " failed;";
    }
  }
  std::ostringstream d;
  d << kSandwichInstances.size() << " instances, slowest "
    << slowest << " s" << detail.str();
  report(1, "sandwich reproduction on S1 corpus", pass, d.str());
}

// Criterion 2: conditions (ii) and (iii) hold on each instance with
// c1, c2 within 1e-9 of 1.
void criterion_2() {
  const ToleranceConfig cfg;
  bool pass = true;
  std::ostringstream detail;
  for (const auto& inst : kSandwichInstances) {
    const auto u = corpus_group(inst.group);
    const SemigroupSet s = build_s1(inst.m, u, cfg);
    const auto ii = check_condition_ii(s, cfg);
    const auto iii = check_condition_iii(s, cfg);
    const bool ok = ii.verdict && iii.verdict &&
                    std::abs(iii.c1 - 1.0) <= 1e-9 &&
                    std::abs(iii.c2 - 1.0) <= 1e-9;
    if (!ok) {
      pass = false;
      detail << " m=" << inst.m << "," << inst.group << " c1=" << iii.c1
             << " c2=" << iii.c2 << ";";
    }
  }
  report(2, "conditions (ii) and (iii) with unit norm bounds", pass,
         detail.str());
}

// Criterion 3: 50 seeded conjugations; build_similarity succeeds, all
// transformed elements are partial isometries at 1e-7, (m, k) recovered.
void criterion_3() {
  const ToleranceConfig cfg;
  const std::vector<Instance> configs = {
      {1, "c4"}, {2, "trivial"}, {2, "c2"}, {2, "c4"}, {2, "sp2"},
      {2, "q8"}, {3, "trivial"}, {3, "c2"}, {3, "c4"}, {3, "q8"},
  };
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  int count = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance& inst = configs[seed % configs.size()];
    const auto u = corpus_group(inst.group);
    const int k = u.front().dim();
    const int n = inst.m * k;
    const SemigroupSet s1 = build_s1(inst.m, u, cfg);
    const ComplexMatrix m = random_conjugator(n, seed);
    const SemigroupSet twisted = conjugate_set(s1, m, cfg);
    try {
      const SimilarityResult r = build_similarity(twisted, cfg);
      bool ok = r.block_count == inst.m && r.block_size == k;
      for (const auto& t : r.transformed.elements())
        ok = ok && is_partial_isometry(t, cfg).residual <= 1e-7;
      if (!ok) {
        pass = false;
        detail << " seed " << seed << " m=" << inst.m << "," << inst.group
               << " verification failed;";
      }
    } catch (const Error& e) {
      pass = false;
      detail << " seed " << seed << ": " << e.what() << ";";
    }
    ++count;
  }
  const double dt = seconds_since(t0);
  if (dt >= 30.0) pass = false;
  std::ostringstream d;
  d << count << " conjugated instances in " << dt << " s" << detail.str();
  report(3, "constructive similarity on conjugated corpus", pass, d.str());
}

// Criterion 4: the two-column-pattern example semigroup: unit norms
// sqrt(2), spectra in {0} u T, limit idempotents found with the exact
// noncommuting witness pair.
void criterion_4() {
  ToleranceConfig cfg;
  cfg.eq_tol = 1e-6;
  cfg.closure_cap = 2000;
  bool pass = true;
  std::ostringstream detail;
  const SemigroupSet s = closure(build_example_26(1.0, 0), cfg);

  for (const auto& t : s.elements())
    if (std::abs(op_norm(t) - std::sqrt(2.0)) > 1e-9) {
      pass = false;
      detail << " norm deviates;";
      break;
    }

  const auto ii = check_condition_ii(s, cfg);
  if (!ii.spectra_ok) {
    pass = false;
    detail << " spectra leave {0} u T;";
  }

  const ComplexMatrix k1({{1.0, 0.0}, {1.0, 0.0}});
  const ComplexMatrix k2({{0.0, 1.0}, {0.0, 1.0}});
  if (!s.find_within(k1, 1e-3).has_value() ||
      !s.find_within(k2, 1e-3).has_value()) {
    pass = false;
    detail << " closure misses the limit points at 1e-3;";
  }

  const auto idems = find_idempotents(s, cfg);
  std::vector<ComplexMatrix> mats;
  bool all_derived = !idems.empty();
  for (const auto& f : idems) {
    mats.push_back(f.matrix);
    all_derived = all_derived && f.closure_derived;
  }
  const auto cc = idempotents_commute(mats, cfg);
  bool witness_exact = false;
  if (cc.witness.has_value()) {
    witness_exact = (op_norm_leq(cc.witness->first - k1, 1e-6) &&
                     op_norm_leq(cc.witness->second - k2, 1e-6)) ||
                    (op_norm_leq(cc.witness->first - k2, 1e-6) &&
                     op_norm_leq(cc.witness->second - k1, 1e-6));
  }
  if (cc.commute || !witness_exact || !all_derived) {
    pass = false;
    detail << " closure-derived idempotent pair not reproduced;";
  }
  report(4, "norm-closure example reproduction", pass, detail.str());
}

// Criterion 5: unitarization across all corpus groups (orders 2 to 8) and
// conjugation seeds; identity similarity on already-unitary samples.
void criterion_5() {
  const ToleranceConfig cfg;
  bool pass = true;
  std::ostringstream detail;
  for (const std::string name :
       {"c2", "c3", "c4", "c5", "c6", "c7", "c8", "sp2", "q8"}) {
    const auto u = corpus_group(name);
    const int k = u.front().dim();
    const ComplexMatrix eye = ComplexMatrix::identity(k);

    const UnitarizationResult plain = unitarize_group(u, cfg);
    if (op_norm(plain.similarity - eye) > 1e-12) {
      pass = false;
      detail << " " << name << " unitary sample moved;";
    }

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ComplexMatrix m = random_conjugator(k, seed * 31 + 7);
      const ComplexMatrix minv = inverse(m, cfg);
      std::vector<ComplexMatrix> sample;
      for (const auto& g : u) sample.push_back(m * g * minv);
      try {
        const UnitarizationResult r = unitarize_group(sample, cfg);
        for (const auto& img : r.group_sample)
          if (op_norm(img.adjoint() * img - eye) > 1e-9) {
            pass = false;
            detail << " " << name << " seed " << seed << " residual;";
            break;
          }
      } catch (const Error& e) {
        pass = false;
        detail << " " << name << " seed " << seed << ": " << e.what() << ";";
      }
    }
  }
  {
    const UnitarizationResult triv =
        unitarize_group({ComplexMatrix::identity(1)}, cfg);
    if (op_norm(triv.similarity - ComplexMatrix::identity(1)) > 1e-12) {
      pass = false;
      detail << " trivial group moved;";
    }
  }
  report(5, "unitarization of corpus groups under conjugation", pass,
         detail.str());
}

// Criterion 6: Burnside test vs the brute-force invariant-subspace oracle
// on 200 seeded generator sets at n in {2, 3}.
void criterion_6() {
  ToleranceConfig cfg;
  cfg.closure_cap = 300;
  int agree = 0, total = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed * 7919);
    const int n = 2 + static_cast<int>(seed % 2);
    const int kind = static_cast<int>(seed % 4);
    GeneratorInput g;
    g.dim = n;
    const int count = kind == 2 ? 1 : 2;
    for (int c = 0; c < count; ++c) {
      ComplexMatrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (kind != 0 || j >= i) m(i, j) = cd(rng.gauss(), rng.gauss());
      g.generators.push_back(std::move(m));
    }
    if (kind == 0) {
      const ComplexMatrix v = random_conjugator(n, seed + 1000);
      const ComplexMatrix vinv = inverse(v, cfg);
      for (auto& m : g.generators) m = v * m * vinv;
    }
    const SemigroupSet s = closure(g, cfg);
    const bool lib = is_irreducible(s, cfg).irreducible;
    const bool oracle = testsupport::oracle_irreducible(g.generators, cfg);
    ++total;
    if (lib == oracle) {
      ++agree;
    } else {
      detail << " seed " << seed << " lib=" << lib << " oracle=" << oracle
             << ";";
    }
  }
  std::ostringstream d;
  d << agree << "/" << total << " agreements" << detail.str();
  report(6, "irreducibility oracle equivalence", agree == total, d.str());
}

// Criterion 7: power-limit idempotents for 100 seeded matrices with
// spectrum in {0} u T and bounded powers.
void criterion_7() {
  const ToleranceConfig cfg;
  bool pass = true;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed * 104729);
    const int n = 2 + static_cast<int>(seed % 4);       // 2..5
    const int u = 1 + static_cast<int>(rng.next() % n); // 1..n
    const int orders[] = {1, 2, 3, 4, 6};
    const int q = orders[rng.next() % 5];
    ComplexMatrix core(n, n);
    for (int i = 0; i < u; ++i) {
      const int a = static_cast<int>(rng.next() % q);
      core(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * a / q);
    }
    for (int i = u; i < n; ++i)
      for (int j = i + 1; j < n; ++j) core(i, j) = cd(rng.gauss(), rng.gauss());
    const ComplexMatrix v = random_conjugator(n, seed * 17 + 3);
    const ComplexMatrix t = v * core * inverse(v, cfg);
    try {
      const auto limits = detect_limit_points(t, cfg);
      bool found = false;
      for (const auto& p : limits) {
        if (op_norm(p * p - p) > 1e-8) {
          pass = false;
          detail << " seed " << seed << " residual;";
        }
        if (rank_numeric(p, cfg) == u) found = true;
      }
      if (!found) {
        pass = false;
        detail << " seed " << seed << " missing rank-" << u << " limit;";
      }
    } catch (const Error& e) {
      pass = false;
      detail << " seed " << seed << ": " << e.what() << ";";
    }
  }
  report(7, "power-limit idempotent extraction", pass, detail.str());
}

// Criterion 8: analyze output is byte-identical (modulo timings) across
// thread counts, over a corpus of generator files.
void criterion_8() {
  namespace fs = std::filesystem;
  const char* cli = std::getenv("ISOFORM_CLI");
  if (cli == nullptr) {
    report(8, "analysis determinism across thread counts", false,
           "ISOFORM_CLI not set");
    return;
  }
  const fs::path dir =
      fs::temp_directory_path() / ("isoform_acc_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool pass = true;
  std::ostringstream detail;

  const std::vector<std::string> gen_cmds = {
      "gen-corpus --kind s0 --m 2 --group trivial",
      "gen-corpus --kind s1 --m 2 --group c4",
      "gen-corpus --kind s1 --m 3 --group c2",
      "gen-corpus --kind conjugated-s1 --m 2 --group c4 --seed 7",
      "gen-corpus --kind conjugated-s1 --m 2 --group q8 --seed 3",
      "gen-corpus --kind example26 --t 1",
  };
  auto slurp_no_timings = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    json j = json::parse(ss.str());
    j.erase("timings");
    return j.dump();
  };
  int idx = 0;
  for (const auto& gen_cmd : gen_cmds) {
    const fs::path gen = dir / ("gen" + std::to_string(idx) + ".json");
    const fs::path out1 = dir / ("a" + std::to_string(idx) + ".json");
    const fs::path outn = dir / ("b" + std::to_string(idx) + ".json");
    std::string extra;
    if (gen_cmd.find("example26") != std::string::npos)
      extra = " --cap 500 --eq-tol 1e-6";
    const std::string base = std::string(cli) + " " + gen_cmd + " -o " +
                             gen.string();
    if (std::system((base + " >/dev/null 2>&1").c_str()) != 0) {
      pass = false;
      detail << " gen " << idx << " failed;";
      ++idx;
      continue;
    }
    const std::string run1 = "SEMIGROUP_ISOFORM_THREADS=1 " + std::string(cli) +
                             " analyze -i " + gen.string() + extra + " -o " +
                             out1.string() + " >/dev/null 2>&1";
    const std::string runn = "SEMIGROUP_ISOFORM_THREADS=8 " + std::string(cli) +
                             " analyze -i " + gen.string() + extra + " -o " +
                             outn.string() + " >/dev/null 2>&1";
    if (std::system(run1.c_str()) != 0 || std::system(runn.c_str()) != 0) {
      pass = false;
      detail << " analyze " << idx << " failed;";
      ++idx;
      continue;
    }
    if (slurp_no_timings(out1) != slurp_no_timings(outn)) {
      pass = false;
      detail << " corpus file " << idx << " differs across thread counts;";
    }
    ++idx;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  report(8, "analysis determinism across thread counts", pass, detail.str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::cout << (g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED")
            << " (" << seconds_since(t0) << " s total)" << std::endl;
  return g_failures == 0 ? 0 : 1;
}
