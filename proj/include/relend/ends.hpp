#pragma once

// Ends of the coset graph: components outside a ball, the capacity N(r) and
// a stabilization-based estimate of the number of ends.

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relend/coset_graph.hpp"

namespace relend {

struct Component {
  std::vector<int> vertices;  // indices into the graph
  bool touches_sphere = false;
};

namespace detail {

// Components of the subgraph induced on lo <= |v| <= R.
inline std::vector<Component> components_in_shell(const CosetGraph& g, int lo, int R) {
  if (R > g.radius()) throw Error(ErrorKind::InsufficientRadius, "probe radius exceeds built radius");
  std::vector<int> comp(g.size(), -1);
  std::vector<Component> out;
  for (std::size_t start = 0; start < g.size(); ++start) {
    const int n = g.norm_at(static_cast<int>(start));
    if (n < lo || n > R || comp[start] >= 0) continue;
    Component c;
    const int id = static_cast<int>(out.size());
    comp[start] = id;
    std::deque<int> q{static_cast<int>(start)};
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      c.vertices.push_back(u);
      if (g.norm_at(u) == R) c.touches_sphere = true;
      for (const auto& e : g.edges_at(u)) {
        const int m = g.norm_at(e.target);
        if (m < lo || m > R || comp[static_cast<std::size_t>(e.target)] >= 0) continue;
        comp[static_cast<std::size_t>(e.target)] = id;
        q.push_back(e.target);
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline int count_touching(const std::vector<Component>& cs) {
  return static_cast<int>(std::count_if(cs.begin(), cs.end(), [](const Component& c) { return c.touches_sphere; }));
}

}  // namespace detail

/// Components left in ball(R) after deleting the open ball of radius r, i.e.
/// the vertices of norm < r. Removing the base alone (r = 1) from the free
/// group tree leaves one branch per generator.
inline std::vector<Component> components_outside_ball(const CosetGraph& g, int r, int R) {
  if (r < 0 || r >= R) throw Error(ErrorKind::Config, "components_outside_ball needs 0 <= r < R");
  return detail::components_in_shell(g, r, R);
}

struct EndsRow {
  int r = 0;
  int R = 0;
  int components = 0;
  int sphere_touching = 0;
  bool stabilized = false;  // same touching count at R + 1
};

struct EndsEstimate {
  enum class Kind { Exact, AtLeast, Inconclusive };
  Kind kind = Kind::Inconclusive;
  int k = 0;

  bool operator==(const EndsEstimate&) const = default;

  std::string str() const {
    switch (kind) {
      case Kind::Exact: return "exact " + std::to_string(k);
      case Kind::AtLeast: return ">= " + std::to_string(k);
      case Kind::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
  }
};

struct EndsReport {
  std::vector<EndsRow> rows;
  EndsEstimate estimate;
  int r_max = 0;
  int margin = 0;
};

inline EndsEstimate classify_rows(const std::vector<EndsRow>& rows) {
  EndsEstimate est;
  if (rows.empty()) return est;
  const std::size_t top = (rows.size() + 1) / 2;
  const int k = rows.back().sphere_touching;
  bool flat = true;
  for (std::size_t i = rows.size() - top; i < rows.size(); ++i)
    flat = flat && rows[i].stabilized && rows[i].sphere_touching == k;
  if (flat) return {EndsEstimate::Kind::Exact, k};
  bool monotone = true;
  bool grows = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    monotone = monotone && rows[i].sphere_touching >= rows[i - 1].sphere_touching;
    grows = grows || rows[i].sphere_touching > rows[i - 1].sphere_touching;
  }
  if (monotone && grows) return {EndsEstimate::Kind::AtLeast, k};
  return est;
}

/// Rows for r = 1..r_max probed at R = r + margin, read off a given ball.
inline EndsReport estimate_ends(const CosetGraph& g, int r_max, int margin) {
  if (margin < 2) throw Error(ErrorKind::Config, "estimate_ends needs margin >= 2");
  if (r_max < 1) throw Error(ErrorKind::Config, "estimate_ends needs r_max >= 1");
  if (g.radius() < r_max + margin + 1) throw Error(ErrorKind::InsufficientRadius, "ball too small for ends probe");
  EndsReport rep;
  rep.r_max = r_max;
  rep.margin = margin;
  for (int r = 1; r <= r_max; ++r) {
    EndsRow row;
    row.r = r;
    row.R = r + margin;
    const auto cs = components_outside_ball(g, r, row.R);
    row.components = static_cast<int>(cs.size());
    row.sphere_touching = detail::count_touching(cs);
    row.stabilized = detail::count_touching(components_outside_ball(g, r, row.R + 1)) == row.sphere_touching;
    rep.rows.push_back(row);
  }
  rep.estimate = classify_rows(rep.rows);
  return rep;
}

inline EndsReport estimate_ends(const Group& G, int r_max, int margin) {
  return estimate_ends(CosetGraph(G, r_max + margin + 1), r_max, margin);
}

struct CapacityEntry {
  int N = 0;
  int R = 0;  // probe radius at which the value was confirmed
};

/// N(r): the largest norm in ball(R) outside the unique sphere-touching
/// component of ball(R) minus the closed ball(r), confirmed at two successive R.
inline CapacityEntry capacity(const CosetGraph& g, int r, int R_max) {
  if (r < 0) throw Error(ErrorKind::Config, "capacity needs r >= 0");
  if (R_max > g.radius()) throw Error(ErrorKind::InsufficientRadius, "capacity probe exceeds built radius");
  std::optional<int> prev;
  int last_touching = -1;
  for (int R = r + 1; R <= R_max; ++R) {
    const auto cs = detail::components_in_shell(g, r + 1, R);
    last_touching = detail::count_touching(cs);
    if (last_touching != 1) {
      prev.reset();
      continue;
    }
    std::vector<char> unbounded(g.size(), 0);
    for (const auto& c : cs)
      if (c.touches_sphere)
        for (int v : c.vertices) unbounded[static_cast<std::size_t>(v)] = 1;
    int N = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.norm_at(static_cast<int>(i)) <= R && !unbounded[i]) N = std::max(N, g.norm_at(static_cast<int>(i)));
    if (prev && *prev == N) return {N, R};
    prev = N;
  }
  if (last_touching != 1)
    throw Error(ErrorKind::NotOneEnded, std::to_string(last_touching) + " sphere-touching components at r = " +
                                            std::to_string(r));
  throw Error(ErrorKind::NoStabilization, "capacity N(" + std::to_string(r) + ") up to R = " + std::to_string(R_max));
}

inline CapacityEntry capacity(const Group& G, int r, std::optional<int> R_max = std::nullopt) {
  const int top = R_max.value_or(r + 10);
  return capacity(CosetGraph(G, top), r, top);
}

class CapacityTable {
 public:
  void set(int r, CapacityEntry e) { entries_[r] = e; }
  std::optional<CapacityEntry> get(int r) const {
    auto it = entries_.find(r);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<int, CapacityEntry>& entries() const { return entries_; }

 private:
  std::map<int, CapacityEntry> entries_;
};

struct QuotientCheck {
  EndsReport coset;
  EndsReport quotient;
  bool agree = false;
};

namespace detail {

// Group whose Cayley graph carries the same ends as the coset graph.
inline GroupSpec ends_model(const GroupSpec& spec) {
  using F = GroupSpec::Family;
  switch (spec.family) {
    case F::zd: {
      std::vector<bool> in_k(static_cast<std::size_t>(spec.d), false);
      for (int c : spec.k_coords) in_k.at(static_cast<std::size_t>(c)) = true;
      return GroupSpec::zd(static_cast<int>(std::count(in_k.begin(), in_k.end(), false)));
    }
    case F::free:
    case F::cyclic: return spec;
    case F::direct_product: return GroupSpec::direct_product(ends_model(*spec.left), ends_model(*spec.right));
    case F::bs: break;
  }
  throw Error(ErrorKind::UnsupportedFamily, "no quotient model: K is neither normal with known quotient nor finite");
}

}  // namespace detail

/// Compares the coset graph ends estimate with the Cayley graph of G/K
/// (K normal) or of G itself (K finite).
inline QuotientCheck cross_check_quotient(const GroupSpec& spec, int r_max = 4, int margin = 4) {
  const GroupSpec model = detail::ends_model(spec);
  QuotientCheck out;
  out.coset = estimate_ends(Group(spec), r_max, margin);
  out.quotient = estimate_ends(Group(model), r_max, margin);
  out.agree = out.coset.estimate == out.quotient.estimate;
  return out;
}

}  // namespace relend
