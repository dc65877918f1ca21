#pragma once

// Declarative model descriptions and the Chevalley-Eilenberg style builder:
// wedge monomials in degree-one generators, d extended as a derivation with
// Koszul signs, optionally tensored with a truncated Fourier layer in t.

#include "json.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "folspec/complex.hpp"
#include "folspec/engine.hpp"
#include "folspec/fourier.hpp"

namespace folspec {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratorSpec {
  std::string name;
  Bidegree bidegree;
};

struct TermSpec {
  std::string coeff;  // exact text, e.g. "-1", "3/2", "2.19722457"
  std::vector<std::string> monomial;
};

struct DifferentialSpec {
  std::string on;
  std::vector<TermSpec> value;
};

/// Name of the transverse generator carrying the circle coordinate t.
inline constexpr const char* kCircleGenerator = "alpha0";

struct ModelSpec {
  ScalarKind scalar = ScalarKind::ExactRational;
  int p = 0;
  int q = 0;
  std::vector<GeneratorSpec> generators;
  std::vector<DifferentialSpec> differentials;
  std::optional<int> fourier_modes;
};

// ---------------------------------------------------------------- JSON

inline nlohmann::ordered_json to_json(const ModelSpec& s) {
  nlohmann::ordered_json j;
  j["scalar"] = std::string(to_string(s.scalar));
  j["p"] = s.p;
  j["q"] = s.q;
  auto gens = nlohmann::ordered_json::array();
  for (const auto& g : s.generators) {
    nlohmann::ordered_json gj;
    gj["name"] = g.name;
    gj["bidegree"] = {g.bidegree.u, g.bidegree.v};
    gens.push_back(std::move(gj));
  }
  j["generators"] = std::move(gens);
  auto diffs = nlohmann::ordered_json::array();
  for (const auto& d : s.differentials) {
    nlohmann::ordered_json dj;
    dj["on"] = d.on;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& t : d.value) {
      nlohmann::ordered_json tj;
      tj["coeff"] = t.coeff;
      tj["monomial"] = t.monomial;
      terms.push_back(std::move(tj));
    }
    dj["value"] = std::move(terms);
    diffs.push_back(std::move(dj));
  }
  j["differentials"] = std::move(diffs);
  if (s.fourier_modes) j["fourier_modes"] = *s.fourier_modes;
  return j;
}

inline ModelSpec model_spec_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& msg) -> ModelError { return ModelError("ModelSpec: " + msg); };
  if (!j.is_object()) throw fail("top level must be an object");
  for (const char* key : {"scalar", "p", "q", "generators"})
    if (!j.contains(key)) throw fail(std::string("missing \"") + key + "\"");
  ModelSpec s;
  try {
    s.scalar = parse_scalar_kind(j.at("scalar").get<std::string>());
    s.p = j.at("p").get<int>();
    s.q = j.at("q").get<int>();
    for (const auto& g : j.at("generators")) {
      const auto& bd = g.at("bidegree");
      if (!bd.is_array() || bd.size() != 2) throw fail("bidegree must be [u, v]");
      s.generators.push_back({g.at("name").get<std::string>(), {bd[0].get<int>(), bd[1].get<int>()}});
    }
    if (j.contains("differentials")) {
      for (const auto& d : j.at("differentials")) {
        DifferentialSpec ds;
        ds.on = d.at("on").get<std::string>();
        for (const auto& t : d.at("value")) {
          if (!t.at("coeff").is_string()) throw fail("coefficients must be strings (got " + t.at("coeff").dump() + ")");
          ds.value.push_back({t.at("coeff").get<std::string>(), t.at("monomial").get<std::vector<std::string>>()});
        }
        s.differentials.push_back(std::move(ds));
      }
    }
    if (j.contains("fourier_modes") && !j.at("fourier_modes").is_null()) s.fourier_modes = j.at("fourier_modes").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  } catch (const std::invalid_argument& e) {
    throw fail(e.what());
  }
  return s;
}

// ---------------------------------------------------------------- builder

namespace detail {

/// Sorts a sequence of distinct degree-one generators, returning the sign of
/// the permutation, or 0 when a generator repeats.
inline int sort_with_sign(std::vector<int>& seq) {
  int sign = 1;
  for (std::size_t i = 1; i < seq.size(); ++i)
    for (std::size_t j = i; j > 0 && seq[j - 1] >= seq[j]; --j) {
      if (seq[j - 1] == seq[j]) return 0;
      std::swap(seq[j - 1], seq[j]);
      sign = -sign;
    }
  return sign;
}

struct Monomial {
  std::vector<int> gens;  // ascending generator indices
  Bidegree bidegree;
};

}  // namespace detail

/// Structural checks shared by every backend. Returns generator indices by name.
inline std::map<std::string, int> check_model_spec(const ModelSpec& s) {
  if (s.p < 0 || s.q < 0) throw ModelError("p and q must be nonnegative");
  std::map<std::string, int> index;
  int transverse = 0, leafwise = 0;
  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    const auto& g = s.generators[i];
    if (g.name.empty()) throw ModelError("generator names must be nonempty");
    if (!index.emplace(g.name, static_cast<int>(i)).second) throw ModelError("duplicate generator '" + g.name + "'");
    if (g.bidegree == Bidegree{1, 0}) {
      ++transverse;
    } else if (g.bidegree == Bidegree{0, 1}) {
      ++leafwise;
    } else {
      throw ModelError("generator '" + g.name + "' has bidegree " + to_string(g.bidegree) +
                       "; generators must be transverse (1,0) or leafwise (0,1)");
    }
  }
  if (transverse > s.q) throw ModelError("more transverse generators than q = " + std::to_string(s.q));
  if (leafwise > s.p) throw ModelError("more leafwise generators than p = " + std::to_string(s.p));

  std::set<std::string> seen;
  for (const auto& d : s.differentials) {
    auto it = index.find(d.on);
    if (it == index.end()) throw ModelError("differential on unknown generator '" + d.on + "'");
    if (!seen.insert(d.on).second) throw ModelError("differential of '" + d.on + "' given twice");
    const Bidegree src = s.generators[static_cast<std::size_t>(it->second)].bidegree;
    for (const auto& t : d.value) {
      Bidegree bd{0, 0};
      int prev = -1;
      for (const auto& name : t.monomial) {
        auto g = index.find(name);
        if (g == index.end()) throw ModelError("monomial in d(" + d.on + ") uses unknown generator '" + name + "'");
        if (g->second <= prev) throw ModelError("monomial in d(" + d.on + ") is not strictly ascending");
        prev = g->second;
        bd = bd + s.generators[static_cast<std::size_t>(g->second)].bidegree;
      }
      const Bidegree shift{bd.u - src.u, bd.v - src.v};
      if (shift != Bidegree{0, 1} && shift != Bidegree{1, 0} && shift != Bidegree{2, -1}) {
        throw ModelError("term of d(" + d.on + ") has bidegree shift " + to_string(shift) +
                         "; allowed shifts are (0,1), (1,0), (2,-1)");
      }
    }
  }
  if (s.fourier_modes) {
    if (*s.fourier_modes < 0) throw ModelError("fourier_modes must be nonnegative");
    auto it = index.find(kCircleGenerator);
    if (it == index.end()) throw ModelError("a Fourier layer needs a generator named 'alpha0'");
    if (s.generators[static_cast<std::size_t>(it->second)].bidegree != Bidegree{1, 0})
      throw ModelError("'alpha0' must be transverse");
  }
  return index;
}

/// Builds the complex without checking d^2 = 0. The scalar field of `spec`
/// is ignored in favour of B.
template <Backend B>
BigradedComplex<B> build_unchecked(const ModelSpec& spec, B backend) {
  using S = scalar_t<B>;
  const auto index = check_model_spec(spec);
  const int ngen = static_cast<int>(spec.generators.size());
  const int nmodes = spec.fourier_modes.value_or(0);
  const std::size_t mode_count = static_cast<std::size_t>(2 * nmodes + 1);
  if (spec.fourier_modes && B::kind == ScalarKind::ExactRational) {
    throw UnsupportedBackend("a Fourier layer carries 2*pi*m coefficients and needs the float backend");
  }
  if (ngen > 24) throw ModelError("too many generators for a dense exterior algebra");

  // generator differentials as (coefficient, ascending index list)
  std::vector<std::vector<std::pair<S, std::vector<int>>>> dgen(static_cast<std::size_t>(ngen));
  for (const auto& d : spec.differentials) {
    auto& terms = dgen[static_cast<std::size_t>(index.at(d.on))];
    for (const auto& t : d.value) {
      std::vector<int> mono;
      for (const auto& name : t.monomial) mono.push_back(index.at(name));
      S coeff;
      try {
        coeff = parse_scalar<B>(t.coeff);
      } catch (const std::invalid_argument& e) {
        throw ModelError("bad coefficient in d(" + d.on + "): " + e.what());
      }
      terms.emplace_back(coeff, mono);
    }
  }

  ComplexData<S> data;
  data.q = spec.q;
  data.p = spec.p;
  const auto ncells = static_cast<std::size_t>((spec.q + 1) * (spec.p + 1));
  data.labels.resize(ncells);
  std::vector<std::vector<detail::Monomial>> cells(ncells);
  for (unsigned mask = 0; mask < (1u << ngen); ++mask) {
    detail::Monomial m;
    for (int g = 0; g < ngen; ++g)
      if (mask & (1u << g)) {
        m.gens.push_back(g);
        m.bidegree = m.bidegree + spec.generators[static_cast<std::size_t>(g)].bidegree;
      }
    cells[data.cell_index(m.bidegree)].push_back(std::move(m));
  }
  std::map<std::vector<int>, std::size_t> position;  // monomial -> index inside its cell
  for (auto& cell : cells) {
    std::sort(cell.begin(), cell.end(), [](const auto& a, const auto& b) { return a.gens < b.gens; });
    for (std::size_t i = 0; i < cell.size(); ++i) position[cell[i].gens] = i;
  }
  for (std::size_t ci = 0; ci < ncells; ++ci)
    for (const auto& m : cells[ci]) {
      std::string label;
      for (int g : m.gens) label += (label.empty() ? "" : "^") + spec.generators[static_cast<std::size_t>(g)].name;
      if (label.empty()) label = "1";
      for (std::size_t mode = 0; mode < mode_count; ++mode) {
        if (!spec.fourier_modes) {
          data.labels[ci].push_back(label);
        } else if (mode == 0) {
          data.labels[ci].push_back(label);
        } else {
          data.labels[ci].push_back(label == "1" ? FourierElement::basis_label(mode)
                                                 : label + "*" + FourierElement::basis_label(mode));
        }
      }
    }

  for (auto comp : all_components) data.components[static_cast<int>(comp)].resize(ncells);
  for (int u = 0; u <= spec.q; ++u)
    for (int v = 0; v <= spec.p; ++v) {
      const Bidegree s{u, v};
      for (auto comp : all_components) {
        const Bidegree t = s + shift_of(comp);
        data.components[static_cast<int>(comp)][data.cell_index(s)] =
            Matrix<S>(data.cell_dim(t), data.cell_dim(s));
      }
    }

  auto add = [&](const detail::Monomial& src, std::size_t src_mode, const std::vector<int>& target_gens,
                 std::size_t target_mode, const S& coeff) {
    Bidegree tb{0, 0};
    for (int g : target_gens) tb = tb + spec.generators[static_cast<std::size_t>(g)].bidegree;
    const Bidegree shift{tb.u - src.bidegree.u, tb.v - src.bidegree.v};
    Component comp;
    if (shift == shift_of(Component::D01)) {
      comp = Component::D01;
    } else if (shift == shift_of(Component::D10)) {
      comp = Component::D10;
    } else if (shift == shift_of(Component::D2m1)) {
      comp = Component::D2m1;
    } else {
      throw ModelError("internal: derived term with shift " + to_string(shift));
    }
    auto& m = data.components[static_cast<int>(comp)][data.cell_index(src.bidegree)];
    const std::size_t row = position.at(target_gens) * mode_count + target_mode;
    const std::size_t col = position.at(src.gens) * mode_count + src_mode;
    m(row, col) += coeff;
  };

  const int circle = spec.fourier_modes ? index.at(kCircleGenerator) : -1;
  for (const auto& cell : cells)
    for (const auto& mono : cell)
      for (std::size_t mode = 0; mode < mode_count; ++mode) {
        // f * d(monomial), Koszul sign (-1)^j for the j-th factor
        for (std::size_t j = 0; j < mono.gens.size(); ++j)
          for (const auto& [coeff, image] : dgen[static_cast<std::size_t>(mono.gens[j])]) {
            std::vector<int> seq(mono.gens.begin(), mono.gens.begin() + static_cast<long>(j));
            seq.insert(seq.end(), image.begin(), image.end());
            seq.insert(seq.end(), mono.gens.begin() + static_cast<long>(j) + 1, mono.gens.end());
            const int sign = detail::sort_with_sign(seq) * (j % 2 == 0 ? 1 : -1);
            if (sign == 0) continue;
            add(mono, mode, seq, mode, sign > 0 ? S(coeff) : S(-coeff));
          }
        // (d/dt f) alpha0 ^ monomial
        if (circle >= 0 && mode > 0) {
          std::vector<int> seq{circle};
          seq.insert(seq.end(), mono.gens.begin(), mono.gens.end());
          const int sign = detail::sort_with_sign(seq);
          if (sign == 0) continue;
          if constexpr (B::kind == ScalarKind::ApproxReal) {
            const std::size_t m = (mode + 1) / 2;
            const double w = 2.0 * std::numbers::pi * static_cast<double>(m);
            // d/dt cos_m = -w sin_m ; d/dt sin_m = w cos_m
            if (mode % 2 == 1) {
              add(mono, mode, seq, mode + 1, -w * sign);
            } else {
              add(mono, mode, seq, mode - 1, w * sign);
            }
          }
        }
      }
  return BigradedComplex<B>(backend, std::move(data));
}

/// Builds and checks d^2 = 0; throws InvalidComplex listing failing cells.
template <Backend B>
BigradedComplex<B> build_from_presentation(const ModelSpec& spec, B backend) {
  auto c = build_unchecked(spec, backend);
  require_valid(c);
  return c;
}

/// Test model: de3 = -e1^e2 with e1, e2 transverse and e3, e4 leafwise.
inline ModelSpec kodaira_spec() {
  ModelSpec s;
  s.scalar = ScalarKind::ExactRational;
  s.p = 2;
  s.q = 2;
  s.generators = {{"e1", {1, 0}}, {"e2", {1, 0}}, {"e3", {0, 1}}, {"e4", {0, 1}}};
  s.differentials = {{"e3", {{"-1", {"e1", "e2"}}}}};
  return s;
}

inline BigradedComplex<ExactRational> build_kodaira_model() {
  return build_from_presentation(kodaira_spec(), ExactRational{});
}

}  // namespace folspec
