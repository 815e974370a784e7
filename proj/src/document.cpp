#include "isoform/document.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "isoform/error.hpp"

namespace isoform {

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw_error(ErrorKind::parse, where + ": matrix must be a nonempty array");
  const int rows = static_cast<int>(j.size());
  const int cols = j[0].is_array() ? static_cast<int>(j[0].size()) : 0;
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw_error(ErrorKind::parse, where + ": ragged matrix rows");
    for (int c = 0; c < cols; ++c) {
      const json& cell = j[i][c];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number())
        throw_error(ErrorKind::parse,
                    where + ": entries must be [re, im] number pairs");
      m(i, c) = cd(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  if (!m.all_finite())
    throw_error(ErrorKind::parse, where + ": non-finite entries");
  return m;
}

MatrixFileDocument read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw_error(ErrorKind::parse, "cannot open input file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw_error(ErrorKind::parse, "parse error in " + path + " at byte " +
                                      std::to_string(e.byte) + ": " + e.what());
  }
  MatrixFileDocument doc;
  if (!j.is_object()) throw_error(ErrorKind::parse, path + ": not an object");
  if (j.value("format_version", 0) != 1)
    throw_error(ErrorKind::parse, path + ": unsupported format_version");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw_error(ErrorKind::parse, path + ": missing integer dim");
  doc.dim = j["dim"].get<int>();
  doc.label = j.value("label", std::string());
  if (!j.contains("matrices") || !j["matrices"].is_array() ||
      j["matrices"].empty())
    throw_error(ErrorKind::parse, path + ": missing nonempty matrices array");
  int idx = 0;
  for (const json& entry : j["matrices"]) {
    std::string name = "m" + std::to_string(idx);
    const json* payload = &entry;
    if (entry.is_object()) {
      name = entry.value("name", name);
      if (!entry.contains("entries"))
        throw_error(ErrorKind::parse, path + ": matrix object without entries");
      payload = &entry["entries"];
    }
    ComplexMatrix m = matrix_from_json(*payload, path + ":" + name);
    if (m.rows() != doc.dim || m.cols() != doc.dim)
      throw_error(ErrorKind::parse,
                  path + ":" + name + ": matrix is not dim x dim");
    doc.matrices.emplace_back(std::move(name), std::move(m));
    ++idx;
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    for (const char* keyname : {"eq_tol", "spec_tol", "rank_tol"})
      if (t.contains(keyname))
        doc.tolerance_overrides[keyname] = t[keyname].get<double>();
    if (t.contains("closure_cap"))
      doc.closure_cap_override = t["closure_cap"].get<long>();
  }
  return doc;
}

json matrix_file_to_json(const MatrixFileDocument& doc) {
  json j;
  j["format_version"] = 1;
  j["kind"] = "generators";
  j["dim"] = doc.dim;
  j["label"] = doc.label;
  json mats = json::array();
  for (const auto& [name, m] : doc.matrices) {
    json entry;
    entry["name"] = name;
    entry["entries"] = matrix_to_json(m);
    mats.push_back(std::move(entry));
  }
  j["matrices"] = std::move(mats);
  return j;
}

GeneratorInput to_generator_input(const MatrixFileDocument& doc) {
  GeneratorInput gens;
  gens.dim = doc.dim;
  gens.label = doc.label;
  for (const auto& [name, m] : doc.matrices) gens.generators.push_back(m);
  gens.validate();
  return gens;
}

ToleranceConfig apply_overrides(const MatrixFileDocument& doc,
                                ToleranceConfig cfg) {
  for (const auto& [key, value] : doc.tolerance_overrides) {
    if (key == "eq_tol") cfg.eq_tol = value;
    if (key == "spec_tol") cfg.spec_tol = value;
    if (key == "rank_tol") cfg.rank_tol = value;
  }
  if (doc.closure_cap_override > 0)
    cfg.closure_cap = static_cast<std::size_t>(doc.closure_cap_override);
  return cfg;
}

json tolerances_to_json(const ToleranceConfig& cfg) {
  json t;
  t["eq_tol"] = cfg.eq_tol;
  t["spec_tol"] = cfg.spec_tol;
  t["rank_tol"] = cfg.rank_tol;
  t["closure_cap"] = cfg.closure_cap;
  return t;
}

namespace {

json set_summary(const SemigroupSet& s) {
  json c;
  c["size"] = s.size();
  c["saturated"] = s.saturated();
  c["max_word_length"] = s.max_word_length();
  c["contains_zero"] = s.contains_zero();
  return c;
}

}  // namespace

json closure_document(const SemigroupSet& s, const ToleranceConfig& cfg,
                      const std::string& label, double elapsed_ms) {
  json j;
  j["format_version"] = 1;
  j["kind"] = "closure";
  j["label"] = label;
  j["dim"] = s.dim();
  j["tolerances"] = tolerances_to_json(cfg);
  j["closure"] = set_summary(s);
  json elems = json::array();
  for (const auto& e : s.elements()) elems.push_back(matrix_to_json(e));
  j["elements"] = std::move(elems);
  j["timings"] = {{"total_ms", elapsed_ms}};
  return j;
}

json analysis_document(const AnalysisBundle& bundle, const ToleranceConfig& cfg,
                       const std::string& label) {
  const SemigroupSet& s = *bundle.set;
  json j;
  j["format_version"] = 1;
  j["kind"] = bundle.similarity ? "similarity" : "analysis";
  j["label"] = label;
  j["dim"] = s.dim();
  j["tolerances"] = tolerances_to_json(cfg);
  j["closure"] = set_summary(s);
  j["at_sampled_closure"] = !s.saturated();

  {
    const IrreducibilityResult& ir = *bundle.irreducible;
    json r;
    r["verdict"] = ir.irreducible;
    r["span_dimension"] = ir.span_dimension;
    if (ir.witness.has_value()) {
      r["witness"] = {{"vectors", matrix_to_json(*ir.witness)},
                      {"verified", ir.witness_verified},
                      {"residual", ir.witness_residual}};
    } else {
      r["witness"] = nullptr;
    }
    j["irreducible"] = std::move(r);
  }
  {
    const ConditionIiVerdict& ii = *bundle.cond_ii;
    json r;
    r["verdict"] = ii.verdict;
    r["spectra_ok"] = ii.spectra_ok;
    r["idempotents_commute"] = ii.idempotents_commute;
    if (ii.offending_element.has_value()) {
      r["offending_element"] = *ii.offending_element;
      r["offending_eigenvalue"] = {ii.offending_eigenvalue->real(),
                                   ii.offending_eigenvalue->imag()};
    }
    if (ii.commute_witness.has_value())
      r["commute_witness"] = {matrix_to_json(ii.commute_witness->first),
                              matrix_to_json(ii.commute_witness->second)};
    j["condition_ii"] = std::move(r);
  }
  {
    const ConditionIiiVerdict& iii = *bundle.cond_iii;
    json r;
    r["verdict"] = iii.verdict;
    r["c1"] = iii.c1;
    r["c2"] = iii.c2;
    r["idempotents_commute"] = iii.idempotents_commute;
    r["norms_divergent"] = iii.norms_divergent;
    j["condition_iii"] = std::move(r);
  }
  {
    json r;
    r["count"] = bundle.idempotents->size();
    int derived = 0;
    json items = json::array();
    for (const auto& f : *bundle.idempotents) {
      if (f.closure_derived) ++derived;
      items.push_back({{"closure_derived", f.closure_derived},
                       {"entries", matrix_to_json(f.matrix)}});
    }
    r["closure_derived_count"] = derived;
    r["items"] = std::move(items);
    j["idempotents"] = std::move(r);
  }
  if (bundle.similarity != nullptr) {
    const SimilarityResult& sim = *bundle.similarity;
    json r;
    r["m"] = sim.block_count;
    r["k"] = sim.block_size;
    r["s_sim"] = matrix_to_json(sim.similarity);
    json us = json::array();
    for (const auto& u : sim.unitary_group_sample)
      us.push_back(matrix_to_json(u));
    r["unitary_group_sample"] = std::move(us);
    r["stage_factors"] = {
        {"orthonormalize", matrix_to_json(sim.stage_orthonormalize)},
        {"block_unitarize", matrix_to_json(sim.stage_block_unitarize)},
        {"linking", matrix_to_json(sim.stage_linking)}};
    const VerificationReport& v = sim.verification;
    r["verification"] = {{"all_partial_isometries", v.all_partial_isometries},
                         {"worst_residual", v.worst_pi_residual},
                         {"worst_element", v.worst_pi_index},
                         {"sandwich_lower", v.sandwich_lower},
                         {"sandwich_upper", v.sandwich_upper},
                         {"minimal_rank", v.minimal_rank},
                         {"minimal_rank_matches_k", v.minimal_rank_matches_k}};
    j["similarity"] = std::move(r);
  }
  j["timings"] = {{"total_ms", bundle.elapsed_ms}};
  return j;
}

void write_document(const json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw_error(ErrorKind::parse, "cannot open output file: " + tmp.string());
    out << text;
    if (!out)
      throw_error(ErrorKind::parse, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec)
    throw_error(ErrorKind::parse,
                "atomic rename failed: " + ec.message() + " -> " + path);
}

}  // namespace isoform
