#pragma once

#include "json.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "folspec/complex.hpp"

namespace folspec {

/// dim E_k^{u,v} for 0 <= u <= q, 0 <= v <= p. Cells outside that box read as 0.
class PageTable {
 public:
  PageTable() = default;
  PageTable(int page, int q, int p)
      : page_(page), q_(q), p_(p), dims_(static_cast<std::size_t>((q + 1) * (p + 1)), 0) {
    if (q < 0 || p < 0) throw DimensionError("PageTable: negative q or p");
  }

  int page() const noexcept { return page_; }
  int q() const noexcept { return q_; }
  int p() const noexcept { return p_; }
  bool stabilized() const noexcept { return stabilized_; }
  void set_stabilized(bool s) noexcept { stabilized_ = s; }

  bool in_range(int u, int v) const noexcept { return u >= 0 && u <= q_ && v >= 0 && v <= p_; }

  std::size_t dim(int u, int v) const { return in_range(u, v) ? dims_[index(u, v)] : 0; }
  std::size_t dim(Bidegree b) const { return dim(b.u, b.v); }

  void set(int u, int v, std::size_t value) {
    if (!in_range(u, v)) throw DimensionError("PageTable: cell (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    dims_[index(u, v)] = value;
  }

  bool same_dims(const PageTable& o) const { return q_ == o.q_ && p_ == o.p_ && dims_ == o.dims_; }

  /// Sum over u+v = r.
  std::vector<std::size_t> degree_sums() const {
    std::vector<std::size_t> s(static_cast<std::size_t>(q_ + p_ + 1), 0);
    for (int u = 0; u <= q_; ++u)
      for (int v = 0; v <= p_; ++v) s[static_cast<std::size_t>(u + v)] += dim(u, v);
    return s;
  }

  long euler_characteristic() const {
    long chi = 0;
    for (int u = 0; u <= q_; ++u)
      for (int v = 0; v <= p_; ++v) chi += ((u + v) % 2 == 0 ? 1 : -1) * static_cast<long>(dim(u, v));
    return chi;
  }

  std::vector<std::size_t> row(int v) const {
    std::vector<std::size_t> r;
    for (int u = 0; u <= q_; ++u) r.push_back(dim(u, v));
    return r;
  }

 private:
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(u * (p_ + 1) + v); }

  int page_ = 0;
  int q_ = 0;
  int p_ = 0;
  bool stabilized_ = false;
  std::vector<std::size_t> dims_;
};

inline nlohmann::ordered_json to_json(const PageTable& t) {
  nlohmann::ordered_json j;
  j["page"] = t.page();
  j["q"] = t.q();
  j["p"] = t.p();
  auto dims = nlohmann::ordered_json::array();
  for (int u = 0; u <= t.q(); ++u)
    for (int v = 0; v <= t.p(); ++v) dims.push_back({u, v, t.dim(u, v)});
  j["dims"] = std::move(dims);
  j["stabilized"] = t.stabilized();
  return j;
}

/// Reads {"page", "q", "p", "dims": [[u,v,dim],...], "stabilized"?}. Cells not
/// listed are zero.
inline PageTable page_table_from_json(const nlohmann::json& j) {
  for (const char* key : {"page", "q", "p", "dims"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("page table JSON lacks \"") + key + "\"");
  PageTable t(j.at("page").get<int>(), j.at("q").get<int>(), j.at("p").get<int>());
  for (const auto& entry : j.at("dims")) {
    if (!entry.is_array() || entry.size() != 3) throw std::invalid_argument("page table dims entries must be [u,v,dim]");
    const long d = entry[2].get<long>();
    if (d < 0) throw std::invalid_argument("page table dims must be nonnegative");
    t.set(entry[0].get<int>(), entry[1].get<int>(), static_cast<std::size_t>(d));
  }
  t.set_stabilized(j.value("stabilized", false));
  return t;
}

}  // namespace folspec
