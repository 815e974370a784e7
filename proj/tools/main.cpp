// Command-line front end: closure | analyze | similarize | gen-corpus.
// Documents are JSON (format_version 1), written atomically. Exit codes:
// 0 success, 2 parse, 3 numeric convergence, 4 construction failed,
// 5 hypothesis inconsistency.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "isoform/closure.hpp"
#include "isoform/corpus.hpp"
#include "isoform/document.hpp"
#include "isoform/error.hpp"
#include "isoform/numeric.hpp"
#include "isoform/similarity.hpp"
#include "isoform/structure.hpp"

namespace {

using namespace isoform;

struct CommonOpts {
  std::string input;
  std::string output = "-";
  double eq_tol = 0.0;
  double spec_tol = 0.0;
  double rank_tol = 0.0;
  long cap = 0;
  bool eq_set = false, spec_set = false, rank_set = false, cap_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input) {
  if (needs_input)
    cmd->add_option("--input,-i", o.input, "input matrix file")->required();
  cmd->add_option("--output,-o", o.output, "output path ('-' for stdout)");
  cmd->add_option("--eq-tol", o.eq_tol, "matrix-equality tolerance")
      ->each([&](const std::string&) { o.eq_set = true; });
  cmd->add_option("--spec-tol", o.spec_tol, "eigenvalue-modulus tolerance")
      ->each([&](const std::string&) { o.spec_set = true; });
  cmd->add_option("--rank-tol", o.rank_tol, "singular-value tolerance")
      ->each([&](const std::string&) { o.rank_set = true; });
  cmd->add_option("--cap", o.cap, "closure element cap")
      ->each([&](const std::string&) { o.cap_set = true; });
}

ToleranceConfig effective_config(const CommonOpts& o,
                                 const MatrixFileDocument& doc) {
  ToleranceConfig cfg;
  cfg = apply_overrides(doc, cfg);
  if (o.eq_set) cfg.eq_tol = o.eq_tol;
  if (o.spec_set) cfg.spec_tol = o.spec_tol;
  if (o.rank_set) cfg.rank_tol = o.rank_tol;
  if (o.cap_set) cfg.closure_cap = static_cast<std::size_t>(o.cap);
  cfg.validate();
  return cfg;
}

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

int run_closure(const CommonOpts& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const MatrixFileDocument doc = read_matrix_file(o.input);
  const ToleranceConfig cfg = effective_config(o, doc);
  const SemigroupSet s = closure(to_generator_input(doc), cfg);
  write_document(closure_document(s, cfg, doc.label, ms_since(t0)), o.output);
  return 0;
}

int run_analysis(const CommonOpts& o, bool with_similarity) {
  const auto t0 = std::chrono::steady_clock::now();
  const MatrixFileDocument doc = read_matrix_file(o.input);
  const ToleranceConfig cfg = effective_config(o, doc);
  const SemigroupSet s = closure(to_generator_input(doc), cfg);

  const IrreducibilityResult irr = is_irreducible(s, cfg);
  const ConditionIiVerdict ii = check_condition_ii(s, cfg);
  const ConditionIiiVerdict iii = check_condition_iii(s, cfg);
  const std::vector<FoundIdempotent> idems = find_idempotents(s, cfg);

  AnalysisBundle bundle;
  bundle.set = &s;
  bundle.irreducible = &irr;
  bundle.cond_ii = &ii;
  bundle.cond_iii = &iii;
  bundle.idempotents = &idems;

  if (!with_similarity) {
    bundle.elapsed_ms = ms_since(t0);
    write_document(analysis_document(bundle, cfg, doc.label), o.output);
    return 0;
  }

  if (!ii.verdict)
    throw_error(ErrorKind::precondition,
                "similarize: precondition failed: condition (ii) does not "
                "hold on the sampled closure (spectra_ok=" +
                    std::string(ii.spectra_ok ? "true" : "false") +
                    ", idempotents_commute=" +
                    std::string(ii.idempotents_commute ? "true" : "false") +
                    ")");
  if (!irr.irreducible)
    throw_error(ErrorKind::precondition,
                "similarize: precondition failed: set is reducible "
                "(span dimension " +
                    std::to_string(irr.span_dimension) + ")");

  const SimilarityResult sim = build_similarity(s, cfg);
  bundle.similarity = &sim;
  bundle.elapsed_ms = ms_since(t0);
  write_document(analysis_document(bundle, cfg, doc.label), o.output);
  if (!sim.verification.all_ok()) {
    std::cerr << "similarize: construction verification failed (worst "
                 "partial-isometry residual "
              << sim.verification.worst_pi_residual << " on element "
              << sim.verification.worst_pi_index << ")\n";
    return 4;
  }
  return 0;
}

int run_gen_corpus(const std::string& kind, int m, const std::string& group,
                   double t, int depth, std::uint64_t seed,
                   const std::string& output) {
  MatrixFileDocument doc;
  GeneratorInput gens;
  if (kind == "s0") {
    gens = s0_generators(m, group);
  } else if (kind == "s1") {
    gens = s1_generators(m, group);
  } else if (kind == "example26") {
    gens = build_example_26(t, depth);
  } else if (kind == "conjugated-s1") {
    gens = s1_generators(m, group);
    const ComplexMatrix conj = random_conjugator(gens.dim, seed);
    const ComplexMatrix conj_inv = LuSolver(conj).inverse();
    for (auto& g : gens.generators) g = conj * g * conj_inv;
    gens.label += "_conj_seed" + std::to_string(seed);
  } else {
    throw_error(ErrorKind::parse, "gen-corpus: unknown kind: " + kind);
  }
  doc.dim = gens.dim;
  doc.label = gens.label;
  for (std::size_t i = 0; i < gens.generators.size(); ++i)
    doc.matrices.emplace_back("g" + std::to_string(i),
                              std::move(gens.generators[i]));
  write_document(matrix_file_to_json(doc), output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite matrix-semigroup analysis: closures, partial-isometry "
               "similarity, block structure"};
  app.require_subcommand(1);

  CommonOpts closure_opts, analyze_opts, simil_opts;
  auto* cmd_closure = app.add_subcommand("closure", "compute the closure set");
  add_common(cmd_closure, closure_opts, true);
  auto* cmd_analyze =
      app.add_subcommand("analyze", "closure + irreducibility + conditions");
  add_common(cmd_analyze, analyze_opts, true);
  auto* cmd_similarize = app.add_subcommand(
      "similarize", "construct the similarity to partial isometries");
  add_common(cmd_similarize, simil_opts, true);

  std::string kind, group = "trivial", gen_output = "-";
  int m = 2, depth = 0;
  double t_param = 1.0;
  std::uint64_t seed = 1;
  auto* cmd_gen = app.add_subcommand("gen-corpus", "write a corpus instance");
  cmd_gen->add_option("--kind", kind, "s0 | s1 | example26 | conjugated-s1")
      ->required();
  cmd_gen->add_option("--m", m, "block count");
  cmd_gen->add_option("--group", group, "corpus group name");
  cmd_gen->add_option("--t", t_param, "phase parameter for example26");
  cmd_gen->add_option("--depth", depth, "pre-expanded word depth");
  cmd_gen->add_option("--seed", seed, "conjugation seed");
  cmd_gen->add_option("--output,-o", gen_output, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (cmd_closure->parsed()) return run_closure(closure_opts);
    if (cmd_analyze->parsed()) return run_analysis(analyze_opts, false);
    if (cmd_similarize->parsed()) return run_analysis(simil_opts, true);
    if (cmd_gen->parsed())
      return run_gen_corpus(kind, m, group, t_param, depth, seed, gen_output);
  } catch (const isoform::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
