#pragma once

// Boundary cocycles of almost-invariant subsets of G/K, the sign cocycle into
// Z/2 they induce, and a bounded search for a finite set whose coboundary
// matches. Patterns over X = {+1, -1} use symbol 0 for +1 (the fixed point).

#include <algorithm>
#include <functional>
#include <set>

#include "relend/coset_graph.hpp"
#include "relend/shift.hpp"

namespace relend {

using CosetSet = std::set<CosetId>;

struct AlmostInvariantSet {
  std::string name;
  std::function<bool(const CosetId&)> contains;
};

/// Cosets whose representative has nonnegative exponent sum in the first generator outside K.
inline AlmostInvariantSet halfline_set(const Group& G) {
  int axis = -1;
  const auto& k = G.subgroup_letters();
  for (int gen = 0; gen < G.num_gens() && axis < 0; ++gen)
    if (std::find(k.begin(), k.end(), make_letter(gen, false)) == k.end()) axis = gen;
  return {"halfline", [axis](const CosetId& v) {
            long long sum = 0;
            for (const auto& syl : v.rep.syllables())
              if (syl.gen == axis) sum += syl.exp;
            return sum >= 0;
          }};
}

/// Cosets whose representative word begins with the letter.
inline AlmostInvariantSet prefix_set(const Group& G, Letter s) {
  return {"prefix:" + G.letter_name(s), [s](const CosetId& v) {
            const auto w = v.rep.letters();
            return !w.empty() && w.front() == s;
          }};
}

/// Cosets whose representative word ends with the letter.
inline AlmostInvariantSet suffix_set(const Group& G, Letter s) {
  return {"suffix:" + G.letter_name(s), [s](const CosetId& v) {
            const auto w = v.rep.letters();
            return !w.empty() && w.back() == s;
          }};
}

inline AlmostInvariantSet finite_set(const Group& G, const std::vector<Element>& elems) {
  CosetSet cells;
  std::string name = "finite:";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    cells.insert(coset_of(G, elems[i]));
    name += (i ? "," : "") + G.format(elems[i]);
  }
  return {name, [cells](const CosetId& v) { return cells.count(v) != 0; }};
}

/// Parses "halfline", "prefix:<letter>", "suffix:<letter>" or "finite:<w1>,<w2>,...".
inline AlmostInvariantSet parse_set(const Group& G, const std::string& text) {
  auto letter_after = [&](std::size_t pos) {
    auto l = G.parse_letter(text.substr(pos));
    if (!l) throw Error(ErrorKind::Config, "unknown letter in set: " + text);
    return *l;
  };
  if (text == "halfline") return halfline_set(G);
  if (text.rfind("prefix:", 0) == 0) return prefix_set(G, letter_after(7));
  if (text.rfind("suffix:", 0) == 0) return suffix_set(G, letter_after(7));
  if (text.rfind("finite:", 0) == 0) {
    std::vector<Element> elems;
    std::string rest = text.substr(7);
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto comma = rest.find(',', start);
      const auto tok = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      try {
        elems.push_back(G.parse(tok));
      } catch (const Error&) {
        throw Error(ErrorKind::Config, "bad word in set: " + tok);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return finite_set(G, elems);
  }
  throw Error(ErrorKind::Config, "unknown set: " + text);
}

inline CosetSet translate_set(const Group& G, const Element& g, const CosetSet& S) {
  CosetSet out;
  for (const auto& v : S) out.insert(translate(G, g, v));
  return out;
}

inline void symmetric_difference_into(CosetSet& acc, const CosetSet& S) {
  for (const auto& v : S) {
    auto it = acc.find(v);
    if (it == acc.end())
      acc.insert(v);
    else
      acc.erase(it);
  }
}

/// (A Δ gA) ∩ ball(R). Throws NoStabilization unless the set has no vertex of norm R,
/// i.e. the answers at R - 1 and R agree.
inline CosetSet boundary_set(const CosetGraph& graph, const AlmostInvariantSet& A, const Element& g) {
  const Group& G = graph.group();
  const Element gi = G.inv(g);
  CosetSet out;
  for (int i = 0; i < static_cast<int>(graph.size()); ++i) {
    const CosetId& v = graph.vertex(i);
    if (A.contains(v) == A.contains(translate(G, gi, v))) continue;
    if (graph.norm_at(i) == graph.radius())
      throw Error(ErrorKind::NoStabilization,
                  A.name + " Δ " + G.format(g) + " reaches the sphere of radius " + std::to_string(graph.radius()));
    out.insert(v);
  }
  return out;
}

inline CosetSet boundary_cocycle(const Group& G, const AlmostInvariantSet& A, const Element& g, int R) {
  return boundary_set(CosetGraph(G, R), A, g);
}

class FiniteSubsetCocycle {
 public:
  FiniteSubsetCocycle(const Group& G, AlmostInvariantSet A, int R) : G_(G), A_(std::move(A)), radius_(R) {
    CosetGraph graph(G_, R);
    for (Letter s = 0; s < G_.num_letters(); ++s) values_.push_back(boundary_set(graph, A_, G_.letter(s)));
  }

  const Group& group() const { return G_; }
  const AlmostInvariantSet& set() const { return A_; }
  int radius() const { return radius_; }
  const CosetSet& on_letter(Letter s) const { return values_[static_cast<std::size_t>(s)]; }

  /// c(s1 ... sn) = c(s1) Δ s1 c(s2) Δ s1 s2 c(s3) ...
  CosetSet value(const Element& g) const {
    CosetSet out;
    Element prefix = G_.identity();
    for (Letter s : g.letters()) {
      symmetric_difference_into(out, translate_set(G_, prefix, on_letter(s)));
      prefix = G_.mul(prefix, G_.letter(s));
    }
    return out;
  }

  /// c'(g, y) = product of y over c(g^-1), as +1 or -1.
  int sign(const Element& g, const Pattern& y) const {
    int out = 1;
    for (const auto& v : value(G_.inv(g)))
      if (y.get(v, 0) != 0) out = -out;
    return out;
  }

 private:
  Group G_;
  AlmostInvariantSet A_;
  int radius_;
  std::vector<CosetSet> values_;
};

inline Alphabet sign_alphabet(const Group& G) {
  return Alphabet({"+1", "-1"}, 0, std::vector<std::vector<int>>(static_cast<std::size_t>(G.num_gens())));
}

/// Checks c'(g1 g2, y) = c'(g1, g2 y) c'(g2, y).
inline bool sign_cocycle_identity(const FiniteSubsetCocycle& c, const Element& g1, const Element& g2, const Pattern& y) {
  const Group& G = c.group();
  const Alphabet X = sign_alphabet(G);
  return c.sign(G.mul(g1, g2), y) == c.sign(g1, act(G, X, g2, y)) * c.sign(g2, y);
}

struct SearchResult {
  int radius = 0;
  std::size_t variables = 0;    // |ball(R)|
  std::size_t constraints = 0;
  std::size_t components = 0;
  std::size_t free_components = 0;
  std::optional<CosetSet> witness;  // minimal B with c(s) = B Δ sB, if any
  std::string conflict;             // why no B exists

  bool found() const { return witness.has_value(); }
};

/// Looks for B ⊆ ball(R) with B Δ sB = c(s) for every letter s. Each constraint
/// b_v + b_{s^-1 v} = [v in c(s)] couples two cells, so the cells split into
/// components fixed up to a global flip; components touching the outside of
/// ball(R) are pinned to b = 0. Throws SearchSpaceTooLarge if more than `cap`
/// components stay free.
inline SearchResult bounded_coboundary_search(const FiniteSubsetCocycle& c, int R, int cap = 22) {
  if (R < 0) throw Error(ErrorKind::Config, "radius must be >= 0");
  const Group& G = c.group();
  const CosetGraph graph(G, R + 2);
  SearchResult res;
  res.radius = R;

  for (Letter s = 0; s < G.num_letters(); ++s)
    for (const auto& v : c.on_letter(s)) {
      auto n = graph.norm(v);
      if (!n || *n > R + 1) {
        res.conflict = "c(" + G.letter_name(s) + ") contains " + G.format(v.rep) + " outside ball(R+1)";
        return res;
      }
    }

  // Node ids: cells of ball(R) keep their graph index; one extra node stands for "outside", pinned to 0.
  const int n = static_cast<int>(graph.size());
  const int outside = n;
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n + 1));
  auto node = [&](const CosetId& v) {
    auto i = graph.index_of(v);
    return i && graph.norm_at(*i) <= R ? *i : outside;
  };
  for (int i = 0; i < n; ++i) {
    if (graph.norm_at(i) > R + 1) continue;
    if (graph.norm_at(i) <= R) ++res.variables;
    const CosetId& v = graph.vertex(i);
    for (Letter s = 0; s < G.num_letters(); ++s) {
      const int a = node(v);
      const int b = node(translate(G, G.letter(inverse_letter(s)), v));
      const int rhs = c.on_letter(s).count(v) ? 1 : 0;
      ++res.constraints;
      if (a == b) {
        if (rhs) {
          res.conflict = "cell " + G.format(v.rep) + " would have to differ from itself under " + G.letter_name(s);
          return res;
        }
        continue;
      }
      adj[static_cast<std::size_t>(a)].push_back({b, rhs});
      adj[static_cast<std::size_t>(b)].push_back({a, rhs});
    }
  }

  std::vector<int> value(static_cast<std::size_t>(n + 1), -1);
  auto propagate = [&](int root) -> bool {
    value[static_cast<std::size_t>(root)] = 0;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (auto [w, rhs] : adj[static_cast<std::size_t>(u)]) {
        const int want = value[static_cast<std::size_t>(u)] ^ rhs;
        int& got = value[static_cast<std::size_t>(w)];
        if (got < 0) {
          got = want;
          stack.push_back(w);
        } else if (got != want) {
          const auto name = [&](int x) { return x == outside ? std::string("outside") : G.format(graph.vertex(x).rep); };
          res.conflict = "parity conflict at " + name(w) + " reached from " + name(u);
          return false;
        }
      }
    }
    return true;
  };

  ++res.components;
  if (!propagate(outside)) return res;
  for (int i = 0; i < n; ++i) {
    if (graph.norm_at(i) > R || value[static_cast<std::size_t>(i)] >= 0) continue;
    ++res.components;
    ++res.free_components;
    if (static_cast<int>(res.free_components) > cap)
      throw Error(ErrorKind::SearchSpaceTooLarge, "more than " + std::to_string(cap) + " free components");
    if (!propagate(i)) return res;
  }

  CosetSet B;
  for (int i = 0; i < n; ++i)
    if (graph.norm_at(i) <= R && value[static_cast<std::size_t>(i)] == 1) B.insert(graph.vertex(i));
  res.witness = std::move(B);
  return res;
}

struct RhoReport {
  std::vector<int> rho;  // forced value per generator, from c'(s, fixed point)
  bool rho_trivial = true;
  SearchResult search;
  std::string verdict;
};

/// At the fixed point y = +1 any trivialization c'(g, y) = b(gy)^-1 rho(g) b(y) forces
/// rho(g) = c'(g, +1) = +1; combined with the search verdict.
inline RhoReport rho_forcing_check(const FiniteSubsetCocycle& c, int R, int cap = 22) {
  RhoReport rep;
  const Group& G = c.group();
  for (int gen = 0; gen < G.num_gens(); ++gen) {
    rep.rho.push_back(c.sign(G.letter(make_letter(gen, false)), Pattern{}));
    rep.rho_trivial = rep.rho_trivial && rep.rho.back() == 1;
  }
  rep.search = bounded_coboundary_search(c, R, cap);
  rep.verdict = rep.search.found() ? "trivial (witness B found)"
                                   : "non-coboundary up to radius " + std::to_string(R);
  return rep;
}

inline std::string format_coset_set(const Group& G, const CosetSet& S) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : S) {
    out += (first ? "" : ", ") + G.format(v.rep);
    first = false;
  }
  return out + "}";
}

}  // namespace relend
