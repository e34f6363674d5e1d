#pragma once

// Cosets gK, the delta cocycle and commensuration witnesses.

#include <optional>
#include <vector>

#include "relend/group.hpp"

namespace relend {

/// The left coset gK, identified by its canonical representative.
struct CosetId {
  Element rep;

  auto operator<=>(const CosetId&) const = default;
  bool operator==(const CosetId&) const = default;
};

struct CosetIdHash {
  std::size_t operator()(const CosetId& c) const noexcept { return ElementHash{}(c.rep); }
};

inline CosetId coset_of(const Group& G, const Element& g) { return CosetId{G.coset_rep(g)}; }

inline CosetId base_coset() { return CosetId{}; }

/// g . vK
inline CosetId translate(const Group& G, const Element& g, const CosetId& v) {
  return coset_of(G, G.mul(g, v.rep));
}

/// delta(g, sK) = rep(g s K)^-1 g rep(sK), an element of K.
inline Element delta(const Group& G, const Element& g, const CosetId& s) {
  const Element target = G.coset_rep(G.mul(g, s.rep));
  Element d = G.mul(G.inv(target), g, s.rep);
  if (!G.in_subgroup(d)) throw Error(ErrorKind::Internal, "delta left K: " + G.format(d));
  return d;
}

struct Witness {
  Letter s = 0;
  std::vector<Element> F;
};

inline Witness witness(const Group& G, Letter s) {
  if (s < 0 || s >= G.num_letters()) throw Error(ErrorKind::UnsupportedFamily, "no witness rule for letter");
  return Witness{s, G.witness_set(s)};
}

/// Checks k s in F_s K for every k in the T-ball of radius R.
inline bool verify_witness(const Group& G, const Witness& w, int R) {
  const Element s = G.letter(w.s);
  std::vector<CosetId> targets;
  for (const auto& f : w.F) targets.push_back(coset_of(G, f));
  for (const auto& k : word_ball(G, R, G.subgroup_letters())) {
    const CosetId c = coset_of(G, G.mul(k.element, s));
    if (std::find(targets.begin(), targets.end(), c) == targets.end()) return false;
  }
  return true;
}

/// Every f in F_s lies in K s. Together with verify_witness this makes the
/// coset graph neighbourhoods exact.
inline bool witness_is_tight(const Group& G, const Witness& w) {
  const Element s_inv = G.inv(G.letter(w.s));
  return std::all_of(w.F.begin(), w.F.end(), [&](const Element& f) { return G.in_subgroup(G.mul(f, s_inv)); });
}

/// First g (shortlex) in the R-ball with g outside F K F'^-1, or nullopt.
/// The identity is skipped so empty F, F' give a nontrivial element.
inline std::optional<Element> find_separated_element(const Group& G, const std::vector<Element>& F,
                                                     const std::vector<Element>& Fp, int R) {
  std::vector<Element> f_inv;
  for (const auto& f : F) f_inv.push_back(G.inv(f));
  for (const auto& entry : word_ball(G, R)) {
    const Element& g = entry.element;
    if (g.is_identity()) continue;
    bool hit = false;
    for (const auto& fi : f_inv) {
      for (const auto& fp : Fp) {
        if (G.in_subgroup(G.mul(fi, g, fp))) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    if (!hit) return g;
  }
  return std::nullopt;
}

}  // namespace relend
