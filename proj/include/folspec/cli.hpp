#pragma once

// Command-line driver. run() is the whole program minus argv handling so the
// tests can call it in-process.
//
// Exit status: 0 success or Inconclusive, 1 invalid model / NotVaisman (the
// JSON "reason" field tells which), 2 I/O and usage errors.

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "folspec/adiabatic.hpp"
#include "folspec/engine.hpp"
#include "folspec/model.hpp"
#include "folspec/predictor.hpp"
#include "folspec/suspension.hpp"

namespace folspec::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

/// I/O and usage problems; always exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string builtin;
  std::string model_path;
  std::string table_path;
  std::string output_path;
  std::string n = "1";
  std::string modes = "2";
  std::string max_page;
  std::string format = "table";
  std::string tolerance;
  std::string backend;
  std::string betti;
  bool quasi_regular = false;
  std::string h = "1,0.5,0.25,0.125";
  std::string degree;
  std::string diophantine_height;
};

using AnyComplex = std::variant<BigradedComplex<ExactRational>, BigradedComplex<ApproxReal>>;

// ---------------------------------------------------------------- parsing helpers

inline double parse_number(const std::string& text, const std::string& flag) {
  try {
    return parse_real(text);
  } catch (const std::exception&) {
    throw UsageError(flag + ": '" + text + "' is not a number");
  }
}

inline int parse_count(const std::string& text, const std::string& flag) {
  const double x = parse_number(text, flag);
  if (x != std::floor(x) || std::fabs(x) > 1e9) throw UsageError(flag + ": '" + text + "' is not an integer");
  return static_cast<int>(x);
}

inline std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) xs.push_back(parse_number(item, flag));
  if (xs.empty()) throw UsageError(flag + ": empty list");
  return xs;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline ModelSpec builtin_spec(const RunConfig& cfg) {
  if (cfg.builtin == "kodaira") return kodaira_spec();
  if (cfg.builtin == "suspension") {
    const int n = parse_count(cfg.n, "--n");
    const int modes = parse_count(cfg.modes, "--modes");
    if (n < 1 || n > 4) throw UsageError("--n must be between 1 and 4");
    if (modes < 1) throw UsageError("--modes must be >= 1");
    return suspension_spec(n, modes);
  }
  throw UsageError("unknown builtin '" + cfg.builtin + "' (expected kodaira|suspension)");
}

inline ModelSpec load_spec(const RunConfig& cfg) {
  const bool has_builtin = !cfg.builtin.empty();
  const bool has_file = !cfg.model_path.empty();
  if (has_builtin == has_file) throw UsageError("give exactly one of --builtin or --model");
  if (has_builtin) return builtin_spec(cfg);
  return model_spec_from_json(read_json_file(cfg.model_path));
}

/// Builds without the d^2 check, honouring --backend and --tolerance.
inline AnyComplex build_any(const ModelSpec& spec, const RunConfig& cfg) {
  ScalarKind kind = spec.scalar;
  if (!cfg.backend.empty()) {
    try {
      kind = parse_scalar_kind(cfg.backend);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--backend: ") + e.what());
    }
  }
  if (kind == ScalarKind::ExactRational) return build_unchecked(spec, ExactRational{});
  ApproxReal be;
  if (!cfg.tolerance.empty()) {
    be.rank_tolerance = parse_number(cfg.tolerance, "--tolerance");
    if (!(be.rank_tolerance > 0.0)) throw UsageError("--tolerance must be positive");
  }
  return build_unchecked(spec, be);
}

inline bool json_output(const RunConfig& cfg) {
  if (cfg.format == "json") return true;
  if (cfg.format == "table" || cfg.format == "csv") return false;
  throw UsageError("--format must be table, json or csv");
}

template <class Range>
std::string join(const Range& xs, const char* sep = ",") {
  std::ostringstream os;
  bool first = true;
  for (const auto& x : xs) {
    os << (first ? "" : sep) << x;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- output helpers

inline void print_page(std::ostream& out, const PageTable& t) {
  out << "E_" << t.page() << (t.stabilized() ? "  (stabilized)" : "") << "\n";
  out << "      ";
  for (int v = 0; v <= t.p(); ++v) out << std::setw(6) << ("v=" + std::to_string(v));
  out << "\n";
  for (int u = 0; u <= t.q(); ++u) {
    out << std::setw(6) << ("u=" + std::to_string(u));
    for (int v = 0; v <= t.p(); ++v) out << std::setw(6) << t.dim(u, v);
    out << "\n";
  }
}

inline nlohmann::ordered_json report_json(const ValidationReport& r) {
  nlohmann::ordered_json j;
  j["valid"] = r.valid();
  if (!r.valid()) j["reason"] = "invalid_complex";
  auto fails = nlohmann::ordered_json::array();
  for (const auto& f : r.failures) {
    nlohmann::ordered_json fj;
    fj["cell"] = {f.cell.u, f.cell.v};
    fj["relation"] = f.relation;
    fj["name"] = relation_name(f.relation);
    fj["max_residual"] = f.max_residual;
    fails.push_back(std::move(fj));
  }
  j["failures"] = std::move(fails);
  auto cells = nlohmann::ordered_json::array();
  for (auto c : r.failing_cells()) cells.push_back({c.u, c.v});
  j["failing_cells"] = std::move(cells);
  return j;
}

/// Reports an invalid complex; returns the exit status.
inline int report_invalid(const ValidationReport& r, const RunConfig& cfg, std::ostream& out) {
  if (json_output(cfg)) {
    out << report_json(r).dump(2) << "\n";
  } else {
    out << r.describe();
  }
  return kFailure;
}

// ---------------------------------------------------------------- commands

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  ModelSpec spec;
  try {
    spec = load_spec(cfg);
  } catch (const ModelError& e) {
    if (json_output(cfg)) {
      nlohmann::ordered_json j{{"valid", false}, {"reason", "invalid_model"}, {"error", e.what()}};
      out << j.dump(2) << "\n";
    } else {
      out << "invalid: " << e.what() << "\n";
    }
    return kFailure;
  }
  std::optional<AnyComplex> any;
  try {
    any.emplace(build_any(spec, cfg));
  } catch (const ModelError& e) {
    out << (json_output(cfg) ? nlohmann::ordered_json{{"valid", false}, {"reason", "invalid_model"}, {"error", e.what()}}.dump(2)
                             : std::string("invalid: ") + e.what())
        << "\n";
    return kFailure;
  }
  return std::visit(
      [&](const auto& c) {
        const auto r = validate(c);
        if (json_output(cfg)) {
          auto j = report_json(r);
          j["total_dim"] = c.total_dim();
          out << j.dump(2) << "\n";
        } else {
          out << r.describe();
          if (r.valid()) out << "total dimension " << c.total_dim() << "\n";
        }
        return r.valid() ? kOk : kFailure;
      },
      *any);
}

inline int cmd_pages(const RunConfig& cfg, std::ostream& out) {
  const auto spec = load_spec(cfg);
  const auto any = build_any(spec, cfg);
  return std::visit(
      [&](const auto& c) {
        const auto report = validate(c);
        if (!report.valid()) return report_invalid(report, cfg, out);
        const int k_stop = stabilization_page(c);
        const int k_max = cfg.max_page.empty() ? k_stop : parse_count(cfg.max_page, "--max-page");
        if (k_max < 0 || k_max > k_stop) {
          throw UsageError("--max-page must lie in 0.." + std::to_string(k_stop) + " for this model");
        }
        const auto pages = page_dims_iterated(c, k_max);
        const auto check = e_infinity_check(c);
        std::vector<long> euler;
        for (const auto& t : pages) euler.push_back(t.euler_characteristic());
        if (json_output(cfg)) {
          nlohmann::ordered_json j;
          auto pj = nlohmann::ordered_json::array();
          for (const auto& t : pages) pj.push_back(to_json(t));
          j["pages"] = std::move(pj);
          j["euler"] = euler;
          j["e_infinity_degree_sums"] = check.degree_sums;
          j["total_cohomology"] = check.betti;
          j["converged"] = check.matched;
          out << j.dump(2) << "\n";
        } else {
          for (const auto& t : pages) {
            print_page(out, t);
            out << "\n";
          }
          out << "euler per page: " << join(euler, " ") << "\n";
          out << "E_inf degree sums (" << join(check.degree_sums) << ") vs total cohomology (" << join(check.betti)
              << "): " << (check.matched ? "match" : "MISMATCH") << "\n";
        }
        return kOk;
      },
      any);
}

inline BettiVector parse_betti(const RunConfig& cfg) {
  if (cfg.betti.empty()) throw UsageError("predict needs --betti");
  const auto& text = cfg.betti;
  try {
    if (text.front() == '{') return betti_from_json(nlohmann::json::parse(text));
    if (text.size() > 5 && text.substr(text.size() - 5) == ".json") return betti_from_json(read_json_file(text));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("--betti: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--betti: ") + e.what());
  }
  BettiVector bv;
  bv.n = parse_count(cfg.n, "--n");
  for (double x : parse_number_list(text, "--betti")) {
    if (x != std::floor(x)) throw UsageError("--betti entries must be integers");
    bv.b.push_back(static_cast<long>(x));
  }
  return bv;
}

inline int cmd_predict(const RunConfig& cfg, std::ostream& out) {
  const auto bv = parse_betti(cfg);
  try {
    check_betti_shape(bv);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--betti: ") + e.what());
  }
  const auto warnings = betti_warnings(bv);
  nlohmann::ordered_json j;
  j["n"] = bv.n;
  j["b"] = bv.b;
  j["euler_characteristic"] = bv.euler_characteristic();
  j["warnings"] = warnings;
  BasicBettiVector e;
  try {
    e = basic_betti_from_betti(bv);
  } catch (const NotVaismanCompatible& ex) {
    j["reason"] = "not_vaisman_compatible";
    j["error"] = ex.what();
    if (json_output(cfg)) {
      out << j.dump(2) << "\n";
    } else {
      for (const auto& w : warnings) out << "warning: " << w << "\n";
      out << "rejected: not Vaisman-compatible: " << ex.what() << "\n";
    }
    return kFailure;
  }
  const auto pred = predict_e2(e, cfg.quasi_regular);
  j["e"] = e.e;
  j["prediction"] = to_json(pred);
  if (json_output(cfg)) {
    out << j.dump(2) << "\n";
  } else {
    for (const auto& w : warnings) out << "warning: " << w << "\n";
    out << "basic Betti numbers e = (" << join(e.e) << ")\n";
    out << "E_2 prediction (" << to_string(pred.mode) << "), rows v, columns u\n";
    for (std::size_t v = 0; v < pred.rows.size(); ++v)
      out << "  v=" << v << (v == 1 && pred.mode == PredictionMode::LowerBound ? " >= " : "  : ") << "("
          << join(pred.rows[v]) << ")\n";
  }
  return kOk;
}

inline int emit_obstruction(const ObstructionReport& r, const PageTable& t, const RunConfig& cfg, std::ostream& out) {
  if (json_output(cfg)) {
    auto j = to_json(r);
    j["table"] = to_json(t);
    out << j.dump(2) << "\n";
  } else {
    print_page(out, t);
    out << "verdict: " << to_string(r.verdict) << "\n";
    for (const auto& c : r.clauses)
      out << "  clause " << c.id << " [" << c.statement << "]: " << (c.violated ? "violated" : "holds")
          << " (observed " << c.observed << ")\n";
    for (const auto& b : r.bound_violations)
      out << "  lower bound violated at u=" << b.u << ": dim E_2^{u,1} = " << b.leafwise_one << " < "
          << 2 * b.leafwise_zero << "\n";
  }
  return r.verdict == Verdict::NotVaisman ? kFailure : kOk;
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.table_path.empty()) {
    if (!cfg.builtin.empty() || !cfg.model_path.empty()) throw UsageError("give either --table or a model, not both");
    PageTable t;
    try {
      t = page_table_from_json(read_json_file(cfg.table_path));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError("--table: " + std::string(e.what()));
    }
    ObstructionReport r;
    try {
      r = vaisman_obstruction(t, t.q());
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--table: ") + e.what());
    }
    return emit_obstruction(r, t, cfg, out);
  }
  const auto spec = load_spec(cfg);
  const auto any = build_any(spec, cfg);
  return std::visit(
      [&](const auto& c) {
        const auto report = validate(c);
        if (!report.valid()) return report_invalid(report, cfg, out);
        const auto t = page_dims_iterated(c, 2).back();
        ObstructionReport r;
        try {
          r = vaisman_obstruction(t, c.q());
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("model cannot be checked: ") + e.what());
        }
        return emit_obstruction(r, t, cfg, out);
      },
      any);
}

inline int cmd_adiabatic(const RunConfig& cfg, std::ostream& out) {
  const auto spec = load_spec(cfg);
  const auto any = build_any(spec, cfg);
  const auto hs = parse_number_list(cfg.h, "--h");
  for (double h : hs)
    if (!(h > 0.0)) throw UsageError("--h values must be positive");
  return std::visit(
      [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, BigradedComplex<ExactRational>>) {
          throw UnsupportedBackend("adiabatic spectra need the float backend; rerun with --backend float");
          return kUsage;
        } else {
          const auto report = validate(c);
          if (!report.valid()) return report_invalid(report, cfg, out);
          std::vector<int> degrees;
          if (cfg.degree.empty()) {
            for (int r = 0; r <= c.max_degree(); ++r) degrees.push_back(r);
          } else {
            const int r = parse_count(cfg.degree, "--degree");
            if (r < 0 || r > c.max_degree()) throw UsageError("--degree out of range 0.." + std::to_string(c.max_degree()));
            degrees.push_back(r);
          }
          const auto e2 = page_dims_iterated(c, 2).back().degree_sums();
          std::vector<AdiabaticSweep> sweeps;
          for (int r : degrees) sweeps.push_back(adiabatic_sweep(c, hs, r));
          if (cfg.format == "csv") {
            out << "degree,h,index,eigenvalue\n";
            for (const auto& s : sweeps)
              for (std::size_t i = 0; i < s.h.size(); ++i)
                for (std::size_t j = 0; j < s.spectra[i].size(); ++j)
                  out << s.degree << "," << format_scalar(s.h[i]) << "," << j << "," << format_scalar(s.spectra[i][j])
                      << "\n";
          } else if (json_output(cfg)) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& s : sweeps) {
              nlohmann::ordered_json j;
              j["degree"] = s.degree;
              j["h"] = s.h;
              j["spectra"] = s.spectra;
              j["kernel_dims"] = s.kernel_dims;
              j["min_eigenvalue"] = s.min_eigenvalue;
              j["decaying_branches"] = s.decaying_branches();
              j["e2_degree_sum"] = e2[static_cast<std::size_t>(s.degree)];
              arr.push_back(std::move(j));
            }
            out << nlohmann::ordered_json{{"degrees", arr}}.dump(2) << "\n";
          } else {
            out << "h = " << join(hs, " ") << "\n";
            for (const auto& s : sweeps) {
              out << "degree " << s.degree << ": kernel dims " << join(s.kernel_dims, " ") << "; branches decaying >= h^2: "
                  << s.decaying_branches() << "; sum of E_2 over u+v=" << s.degree << ": "
                  << e2[static_cast<std::size_t>(s.degree)] << "; min eigenvalue " << s.min_eigenvalue << "\n";
            }
          }
          return kOk;
        }
      },
      any);
}

inline int cmd_emit(const RunConfig& cfg, std::ostream& out) {
  if (cfg.builtin.empty()) throw UsageError("emit needs --builtin");
  const auto spec = builtin_spec(cfg);
  const std::string text = to_json(spec).dump(2) + "\n";
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    out << text;
    return kOk;
  }
  std::ofstream f(cfg.output_path);
  if (!f) throw UsageError("cannot write '" + cfg.output_path + "'");
  f << text;
  f.flush();
  if (!f) throw UsageError("write to '" + cfg.output_path + "' failed");
  return kOk;
}

/// Largest height whose half-space scan stays within a few million vectors.
inline int default_height(std::size_t dim) {
  int h = 1;
  while (h < 50 && std::pow(2.0 * (h + 1) + 1.0, static_cast<double>(dim)) / 2.0 <= 2e6) ++h;
  return h;
}

inline int cmd_matrix_a(const RunConfig& cfg, std::ostream& out) {
  const int n = parse_count(cfg.n, "--n");
  if (n < 1 || n > 6) throw UsageError("--n must be between 1 and 6");
  const auto a = build_matrix_A(n);
  const auto s = eigen_analysis(a);
  const auto intervals = eigenvalue_intervals(a, s);
  const std::size_t dim = a.diagonal.size();
  const int height = cfg.diophantine_height.empty() ? default_height(dim)
                                                    : parse_count(cfg.diophantine_height, "--diophantine-height");
  std::vector<DiophantineReport> probes;
  try {
    for (const auto& v : s.eigenvectors) probes.push_back(diophantine_probe(v, height));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--diophantine-height: ") + e.what());
  }
  if (json_output(cfg)) {
    nlohmann::ordered_json j;
    j["n"] = n;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < dim; ++i) {
      auto row = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < dim; ++k) row.push_back(a.entries(i, k).get_str());
      rows.push_back(std::move(row));
    }
    j["A"] = std::move(rows);
    j["determinant"] = a.determinant.get_str();
    j["eigenvalues"] = s.eigenvalues;
    j["mu"] = s.mu;
    j["eigenvalue_product"] = s.eigenvalue_product;
    j["lambda"] = s.lambda;
    auto iv = nlohmann::ordered_json::array();
    for (const auto& i : intervals)
      iv.push_back({{"lower", i.lower}, {"upper", std::isinf(i.upper) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(i.upper)},
                    {"count", i.count}});
    j["intervals"] = std::move(iv);
    auto pj = nlohmann::ordered_json::array();
    for (const auto& p : probes)
      pj.push_back({{"height", p.height}, {"min_delta1", p.min_delta1}, {"min_delta2", p.min_delta2},
                    {"argmin_delta1", p.argmin_delta1}, {"argmin_delta2", p.argmin_delta2}});
    j["diophantine"] = std::move(pj);
    out << j.dump(2) << "\n";
  } else {
    out << "A (n=" << n << "):\n";
    for (std::size_t i = 0; i < dim; ++i) {
      out << " ";
      for (std::size_t k = 0; k < dim; ++k) out << " " << a.entries(i, k).get_str();
      out << "\n";
    }
    out << "det A = " << a.determinant.get_str() << "\n";
    out << std::setprecision(12);
    out << "eigenvalues: " << join(s.eigenvalues, " ") << "\n";
    out << "product of eigenvalues: " << s.eigenvalue_product << "\n";
    out << "lambda (two largest): " << s.lambda << "\n";
    for (const auto& i : intervals) out << "interval (" << i.lower << ", " << i.upper << "): " << i.count << " eigenvalue(s)\n";
    for (std::size_t i = 0; i < probes.size(); ++i)
      out << "diophantine v" << i + 1 << " (H=" << probes[i].height << "): min |<m,v>||m| = " << probes[i].min_delta1
          << ", min |<m,v>||m|^2 = " << probes[i].min_delta2 << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- entry point

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral sequences of foliated bigraded complexes", "folspec"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto model_opts = [&cfg](CLI::App* sub) {
    sub->add_option("--builtin", cfg.builtin, "builtin model: kodaira|suspension");
    sub->add_option("--model", cfg.model_path, "ModelSpec JSON file");
    sub->add_option("--n", cfg.n, "suspension half transverse dimension");
    sub->add_option("--modes", cfg.modes, "Fourier modes for the suspension model");
    sub->add_option("--backend", cfg.backend, "override scalar backend: rational|float");
    sub->add_option("--tolerance", cfg.tolerance, "rank tolerance for the float backend");
    sub->add_option("--format", cfg.format, "table|json");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check d^2 = 0 on a model");
  model_opts(validate_cmd);
  validate_cmd->add_option("path", cfg.model_path, "ModelSpec JSON file");

  auto* pages_cmd = app.add_subcommand("pages", "page tables E_0..E_k");
  model_opts(pages_cmd);
  pages_cmd->add_option("--max-page", cfg.max_page, "last page to print (default: stabilization page)");

  auto* predict_cmd = app.add_subcommand("predict", "E_2 prediction from Betti numbers");
  predict_cmd->add_option("--n", cfg.n, "complex dimension parameter (real dimension 2n+2)");
  predict_cmd->add_option("--betti", cfg.betti, "b_0,...,b_{2n+2}, inline JSON, or a .json file");
  predict_cmd->add_flag("--quasi-regular", cfg.quasi_regular, "predict equality instead of a lower bound");
  predict_cmd->add_option("--format", cfg.format, "table|json");

  auto* check_cmd = app.add_subcommand("check", "obstruction verdict on E_2");
  model_opts(check_cmd);
  check_cmd->add_option("--table", cfg.table_path, "E_2 page table JSON");

  auto* adiabatic_cmd = app.add_subcommand("adiabatic", "spectra of the rescaled Laplacian");
  adiabatic_cmd->set_help_flag("--help", "print this help and exit");  // frees -h for --h
  model_opts(adiabatic_cmd);
  adiabatic_cmd->add_option("--h", cfg.h, "comma-separated h values");
  adiabatic_cmd->add_option("--degree", cfg.degree, "total degree (default: all)");

  auto* emit_cmd = app.add_subcommand("emit", "write a builtin ModelSpec as JSON");
  emit_cmd->add_option("--builtin", cfg.builtin, "kodaira|suspension")->required();
  emit_cmd->add_option("--n", cfg.n, "suspension half transverse dimension");
  emit_cmd->add_option("--modes", cfg.modes, "Fourier modes");
  emit_cmd->add_option("path", cfg.output_path, "output file (default stdout)");

  auto* matrix_cmd = app.add_subcommand("matrix-a", "the integer matrix A, its spectrum and a diophantine probe");
  matrix_cmd->add_option("--n", cfg.n, "half transverse dimension");
  matrix_cmd->add_option("--diophantine-height", cfg.diophantine_height, "max |m_i| in the probe");
  matrix_cmd->add_option("--format", cfg.format, "table|json");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(cfg, out);
    if (*pages_cmd) return cmd_pages(cfg, out);
    if (*predict_cmd) return cmd_predict(cfg, out);
    if (*check_cmd) return cmd_check(cfg, out);
    if (*adiabatic_cmd) return cmd_adiabatic(cfg, out);
    if (*emit_cmd) return cmd_emit(cfg, out);
    if (*matrix_cmd) return cmd_matrix_a(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedBackend& e) {
    err << "error: unsupported backend: " << e.what() << "\n";
    return kUsage;
  } catch (const ModelError& e) {
    err << "error: invalid model: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace folspec::cli
