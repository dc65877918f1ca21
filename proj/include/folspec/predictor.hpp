#pragma once

// Dimension predictions for E_2 of the canonical foliation from Betti data,
// and the obstruction check on computed E_2 tables.

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "folspec/page_table.hpp"

namespace folspec {

class NotVaismanCompatible : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// b_0..b_{2n+2} of a manifold of real dimension 2n+2.
struct BettiVector {
  int n = 0;
  std::vector<long> b;

  long at(int j) const {
    if (j < 0 || j >= static_cast<int>(b.size())) return 0;
    return b[static_cast<std::size_t>(j)];
  }
  long euler_characteristic() const {
    long chi = 0;
    for (std::size_t j = 0; j < b.size(); ++j) chi += (j % 2 == 0 ? 1 : -1) * b[j];
    return chi;
  }
};

/// e_0..e_{2n}: basic Betti numbers of the transverse structure.
struct BasicBettiVector {
  std::vector<long> e;
};

inline void check_betti_shape(const BettiVector& bv) {
  if (bv.n < 1) throw std::invalid_argument("n must be >= 1");
  if (bv.b.size() != static_cast<std::size_t>(2 * bv.n + 3)) {
    throw std::invalid_argument("expected " + std::to_string(2 * bv.n + 3) + " Betti numbers for n = " +
                                std::to_string(bv.n) + ", got " + std::to_string(bv.b.size()));
  }
  for (long x : bv.b)
    if (x < 0) throw std::invalid_argument("Betti numbers must be nonnegative");
}

inline std::vector<std::string> betti_warnings(const BettiVector& bv) {
  std::vector<std::string> w;
  if (bv.at(0) != 1) w.push_back("b_0 = " + std::to_string(bv.at(0)) + " != 1: manifold not connected");
  const int top = 2 * bv.n + 2;
  for (int r = 0; r <= top / 2; ++r)
    if (bv.at(r) != bv.at(top - r)) {
      w.push_back("Poincare duality fails: b_" + std::to_string(r) + " != b_" + std::to_string(top - r));
    }
  if (bv.at(1) < 1) w.push_back("b_1 = 0: not Vaisman-candidate");
  return w;
}

/// e_u = (-1)^u sum_{i=0}^{floor(u/2)} (floor(u/2) - i + 1) (b_{2i} - b_{2i - (-1)^u})
/// for u <= n, mirrored for u > n. Rejects e_0 != 1 or any negative e_u.
inline BasicBettiVector basic_betti_from_betti(const BettiVector& bv) {
  check_betti_shape(bv);
  const int n = bv.n;
  BasicBettiVector out;
  out.e.assign(static_cast<std::size_t>(2 * n + 1), 0);
  for (int u = 0; u <= n; ++u) {
    const int half = u / 2;
    const int step = u % 2 == 0 ? 1 : -1;  // (-1)^u
    long s = 0;
    for (int i = 0; i <= half; ++i) s += (half - i + 1) * (bv.at(2 * i) - bv.at(2 * i - step));
    out.e[static_cast<std::size_t>(u)] = step * s;
  }
  for (int u = n + 1; u <= 2 * n; ++u) out.e[static_cast<std::size_t>(u)] = out.e[static_cast<std::size_t>(2 * n - u)];
  if (out.e[0] != 1) throw NotVaismanCompatible("e_0 = " + std::to_string(out.e[0]) + " != 1");
  for (std::size_t u = 0; u < out.e.size(); ++u)
    if (out.e[u] < 0) throw NotVaismanCompatible("e_" + std::to_string(u) + " = " + std::to_string(out.e[u]) + " < 0");
  return out;
}

enum class PredictionMode { LowerBound, QuasiRegularEquality };

inline const char* to_string(PredictionMode m) {
  return m == PredictionMode::LowerBound ? "lower_bound" : "quasi_regular_equality";
}

/// rows[v][u] for v = 0, 1, 2. Row 1 is exact under quasi-regularity and a
/// lower bound otherwise.
struct E2Prediction {
  std::vector<std::vector<long>> rows;
  PredictionMode mode = PredictionMode::LowerBound;

  long euler_characteristic() const {
    long chi = 0;
    for (std::size_t v = 0; v < rows.size(); ++v)
      for (std::size_t u = 0; u < rows[v].size(); ++u) chi += ((u + v) % 2 == 0 ? 1 : -1) * rows[v][u];
    return chi;
  }
};

inline E2Prediction predict_e2(const BasicBettiVector& e, bool quasi_regular) {
  if (e.e.empty() || e.e.size() % 2 == 0) throw std::invalid_argument("basic Betti vector must have odd length 2n+1");
  E2Prediction p;
  p.mode = quasi_regular ? PredictionMode::QuasiRegularEquality : PredictionMode::LowerBound;
  std::vector<long> doubled;
  for (long x : e.e) doubled.push_back(2 * x);
  p.rows = {e.e, doubled, e.e};
  return p;
}

enum class Verdict { NotVaisman, Inconclusive };

inline const char* to_string(Verdict v) { return v == Verdict::NotVaisman ? "NotVaisman" : "Inconclusive"; }

struct ObstructionClause {
  std::string id;
  std::string statement;
  bool violated = false;
  long observed = 0;
};

/// dim E_2^{u,1} < 2 dim E_2^{u,0}.
struct BoundViolation {
  int u = 0;
  long leafwise_one = 0;
  long leafwise_zero = 0;
};

struct ObstructionReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<ObstructionClause> clauses;
  std::vector<BoundViolation> bound_violations;

  std::vector<std::string> violated_clause_ids() const {
    std::vector<std::string> ids;
    for (const auto& c : clauses)
      if (c.violated) ids.push_back(c.id);
    return ids;
  }
};

inline constexpr const char* kTopBasicClause = "top_basic_vanishes";
inline constexpr const char* kLeafwiseClause = "leafwise_degree_one_below_two";

/// Clause 1: dim E_2^{q,0} = 0. Clause 2: dim E_2^{0,1} < 2. Each, and each
/// lower-bound violation, yields NotVaisman.
inline ObstructionReport vaisman_obstruction(const PageTable& table, int q) {
  if (table.page() != 2) throw std::invalid_argument("obstruction check needs the E_2 page, got E_" + std::to_string(table.page()));
  if (q < 2 || q % 2 != 0) throw std::invalid_argument("transverse dimension must be even and positive, got " + std::to_string(q));
  if (table.q() < q || table.p() < 1) {
    throw std::invalid_argument("table does not cover cells (" + std::to_string(q) + ",0) and (0,1)");
  }
  ObstructionReport r;
  const long top = static_cast<long>(table.dim(q, 0));
  const long leaf = static_cast<long>(table.dim(0, 1));
  r.clauses.push_back({kTopBasicClause, "dim E_2^{" + std::to_string(q) + ",0} = 0", top == 0, top});
  r.clauses.push_back({kLeafwiseClause, "dim E_2^{0,1} < 2", leaf < 2, leaf});
  for (int u = 0; u <= q; ++u) {
    const long one = static_cast<long>(table.dim(u, 1));
    const long zero = static_cast<long>(table.dim(u, 0));
    if (one < 2 * zero) r.bound_violations.push_back({u, one, zero});
  }
  const bool any = !r.violated_clause_ids().empty() || !r.bound_violations.empty();
  r.verdict = any ? Verdict::NotVaisman : Verdict::Inconclusive;
  return r;
}

// ---------------------------------------------------------------- JSON

inline BettiVector betti_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("b")) throw std::invalid_argument("Betti JSON must be {\"n\": int, \"b\": [...]}");
  BettiVector bv;
  bv.n = j.at("n").get<int>();
  bv.b = j.at("b").get<std::vector<long>>();
  return bv;
}

inline nlohmann::ordered_json to_json(const E2Prediction& p) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(p.mode);
  j["rows"] = p.rows;
  j["euler_characteristic"] = p.euler_characteristic();
  return j;
}

inline nlohmann::ordered_json to_json(const ObstructionReport& r) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(r.verdict);
  if (r.verdict == Verdict::NotVaisman) j["reason"] = "obstruction";
  auto clauses = nlohmann::ordered_json::array();
  for (const auto& c : r.clauses) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["statement"] = c.statement;
    cj["observed"] = c.observed;
    cj["violated"] = c.violated;
    clauses.push_back(std::move(cj));
  }
  j["clauses"] = std::move(clauses);
  auto bounds = nlohmann::ordered_json::array();
  for (const auto& b : r.bound_violations) {
    nlohmann::ordered_json bj;
    bj["u"] = b.u;
    bj["dim_E2_u1"] = b.leafwise_one;
    bj["twice_dim_E2_u0"] = 2 * b.leafwise_zero;
    bounds.push_back(std::move(bj));
  }
  j["bound_violations"] = std::move(bounds);
  return j;
}

}  // namespace folspec
