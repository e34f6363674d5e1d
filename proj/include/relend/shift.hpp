#pragma once

// Finite-support configurations in X^(G/K) and the coinduced G-action.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "relend/coset_graph.hpp"

namespace relend {

using Symbol = int;

/// A finite alphabet with a K-action given by one permutation per generator
/// of K. alpha(k) composes the generator permutations along k's normal form.
class Alphabet {
 public:
  Alphabet(std::vector<std::string> symbols, Symbol x0, std::vector<std::vector<int>> perms)
      : symbols_(std::move(symbols)), x0_(x0), perms_(std::move(perms)) {
    const int n = size();
    if (n < 1) throw Error(ErrorKind::Config, "alphabet must be nonempty");
    if (x0 < 0 || x0 >= n) throw Error(ErrorKind::Config, "x0 is not a symbol");
    for (auto& p : perms_) {
      if (p.empty()) {
        p.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
      }
      if (static_cast<int>(p.size()) != n) throw Error(ErrorKind::Config, "permutation has wrong length");
      std::vector<int> sorted = p;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < n; ++i)
        if (sorted[static_cast<std::size_t>(i)] != i) throw Error(ErrorKind::Config, "alpha entry is not a permutation");
    }
    for (const auto& p : perms_) {
      std::vector<int> pos(static_cast<std::size_t>(n));
      std::vector<std::vector<int>> cyc;
      std::vector<int> which(static_cast<std::size_t>(n), -1);
      for (int i = 0; i < n; ++i) {
        if (which[static_cast<std::size_t>(i)] >= 0) continue;
        std::vector<int> c;
        for (int j = i; which[static_cast<std::size_t>(j)] < 0; j = p[static_cast<std::size_t>(j)]) {
          which[static_cast<std::size_t>(j)] = static_cast<int>(cyc.size());
          pos[static_cast<std::size_t>(j)] = static_cast<int>(c.size());
          c.push_back(j);
        }
        cyc.push_back(std::move(c));
      }
      cycles_.push_back(std::move(cyc));
      cycle_of_.push_back(std::move(which));
      pos_.push_back(std::move(pos));
    }
  }

  /// Trivial action of K on the given number of symbols, x0 = 0.
  static Alphabet trivial(const Group& G, int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return Alphabet(std::move(names), 0, std::vector<std::vector<int>>(static_cast<std::size_t>(G.num_gens())));
  }

  int size() const { return static_cast<int>(symbols_.size()); }
  Symbol x0() const { return x0_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& name(Symbol x) const { return symbols_.at(static_cast<std::size_t>(x)); }
  const std::vector<std::vector<int>>& perms() const { return perms_; }

  std::optional<Symbol> parse(const std::string& s) const {
    auto it = std::find(symbols_.begin(), symbols_.end(), s);
    if (it == symbols_.end()) return std::nullopt;
    return static_cast<Symbol>(it - symbols_.begin());
  }

  bool gen_is_trivial(int gen) const {
    const auto& p = perms_.at(static_cast<std::size_t>(gen));
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != static_cast<int>(i)) return false;
    return true;
  }

  /// perm(gen)^exp applied to x.
  Symbol apply_power(int gen, std::int64_t exp, Symbol x) const {
    const auto g = static_cast<std::size_t>(gen);
    const auto& c = cycles_[g][static_cast<std::size_t>(cycle_of_[g][static_cast<std::size_t>(x)])];
    const auto len = static_cast<std::int64_t>(c.size());
    std::int64_t i = (pos_[g][static_cast<std::size_t>(x)] + exp) % len;
    if (i < 0) i += len;
    return c[static_cast<std::size_t>(i)];
  }

  /// alpha(k) as a permutation vector.
  std::vector<int> alpha(const Element& k) const {
    std::vector<int> out(static_cast<std::size_t>(size()));
    for (int x = 0; x < size(); ++x) out[static_cast<std::size_t>(x)] = apply(k, x);
    return out;
  }

  Symbol apply(const Element& k, Symbol x) const {
    const auto& syl = k.syllables();
    for (auto it = syl.rbegin(); it != syl.rend(); ++it) x = apply_power(it->gen, it->exp, x);
    return x;
  }

 private:
  std::vector<std::string> symbols_;
  Symbol x0_;
  std::vector<std::vector<int>> perms_;
  std::vector<std::vector<std::vector<int>>> cycles_;
  std::vector<std::vector<int>> cycle_of_;
  std::vector<std::vector<int>> pos_;
};

/// Checks that every generator permutation of a non-K generator is trivial
/// and that x0 is fixed by every K generator.
inline bool alphabet_is_valid(const Group& G, const Alphabet& X) {
  if (static_cast<int>(X.perms().size()) != G.num_gens()) return false;
  for (int gen = 0; gen < G.num_gens(); ++gen) {
    const bool in_k = std::find(G.subgroup_letters().begin(), G.subgroup_letters().end(), make_letter(gen, false)) !=
                      G.subgroup_letters().end();
    if (!in_k && !X.gen_is_trivial(gen)) return false;
    if (X.apply_power(gen, 1, X.x0()) != X.x0()) return false;
  }
  return true;
}

/// alpha(k1 k2) = alpha(k1) alpha(k2) and alpha(k) x0 = x0 over the K-ball of radius R.
inline bool verify_alphabet_homomorphism(const Group& G, const Alphabet& X, int R) {
  const auto ball = word_ball(G, R, G.subgroup_letters());
  for (const auto& a : ball) {
    if (X.apply(a.element, X.x0()) != X.x0()) return false;
    for (const auto& b : ball) {
      const Element ab = G.mul(a.element, b.element);
      for (Symbol x = 0; x < X.size(); ++x)
        if (X.apply(ab, x) != X.apply(a.element, X.apply(b.element, x))) return false;
    }
  }
  return true;
}

/// Configuration equal to x0 away from a finite support. Entries equal to
/// x0 are never stored.
class Pattern {
 public:
  Pattern() = default;

  Symbol get(const CosetId& v, Symbol x0) const {
    auto it = entries_.find(v);
    return it == entries_.end() ? x0 : it->second;
  }

  void set(const CosetId& v, Symbol x, Symbol x0) {
    if (x == x0) entries_.erase(v);
    else entries_[v] = x;
  }

  const std::map<CosetId, Symbol>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  bool operator==(const Pattern&) const = default;
  auto operator<=>(const Pattern&) const = default;

 private:
  std::map<CosetId, Symbol> entries_;
};

/// (g y)_{g u} = alpha(delta(g, u)) y_u.
inline Pattern act(const Group& G, const Alphabet& X, const Element& g, const Pattern& y) {
  if (g.is_identity()) return y;
  Pattern out;
  for (const auto& [u, x] : y.entries()) {
    const Element gu = G.mul(g, u.rep);
    const CosetId target{G.coset_rep(gu)};
    const Element d = G.mul(G.inv(target.rep), gu);
    out.set(target, X.apply(d, x), X.x0());
  }
  return out;
}

/// Largest norm over the support; the empty pattern has norm 0.
inline int pattern_norm(const CosetGraph& g, const Pattern& y) {
  int out = 0;
  for (const auto& [v, x] : y.entries()) {
    auto n = g.norm(v);
    if (!n) throw Error(ErrorKind::InsufficientRadius, "pattern support leaves the built ball");
    out = std::max(out, *n);
  }
  return out;
}

inline Pattern restrict(const Pattern& y, const std::set<CosetId>& region, Symbol x0) {
  Pattern out;
  for (const auto& [v, x] : y.entries())
    if (region.count(v)) out.set(v, x, x0);
  return out;
}

inline Pattern restrict(const Pattern& y, const std::vector<CosetId>& region, Symbol x0) {
  return restrict(y, std::set<CosetId>(region.begin(), region.end()), x0);
}

/// alpha(delta(s, K)) x = alpha(delta(t, K)) x whenever sK = tK, for s, t in the R-ball.
inline bool verify_coinduced_fixed_point(const Group& G, const Alphabet& X, Symbol x, int R = 3) {
  std::map<CosetId, Symbol> seen;
  for (const auto& e : word_ball(G, R)) {
    const CosetId c = coset_of(G, e.element);
    const Symbol v = X.apply(delta(G, e.element, base_coset()), x);
    auto [it, fresh] = seen.emplace(c, v);
    if (!fresh && it->second != v) return false;
  }
  return true;
}

}  // namespace relend
