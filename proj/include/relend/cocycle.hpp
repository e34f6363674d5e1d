#pragma once

// Continuous cocycles c: G x Y -> H given as block codes: c(s, y) reads y on
// the window ball(L) around the base coset. Evaluation on a word follows the
// cocycle identity c(st, y) = c(s, t y) c(t, y).

#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>

#include "relend/shift.hpp"

namespace relend {

/// Interns elements of H so products and inverses are cached by id.
class HArith {
 public:
  explicit HArith(Group H) : H_(std::move(H)) { id(H_.identity()); }

  const Group& group() const { return H_; }
  static constexpr int identity() { return 0; }

  int id(const Element& h) {
    auto it = ids_.find(h);
    if (it != ids_.end()) return it->second;
    const int n = static_cast<int>(elems_.size());
    ids_.emplace(h, n);
    elems_.push_back(h);
    inv_.push_back(-1);
    return n;
  }

  const Element& element(int i) const { return elems_[static_cast<std::size_t>(i)]; }

  int mul(int a, int b) {
    if (a == 0) return b;
    if (b == 0) return a;
    if (a < kSmall && b < kSmall) {
      int& slot = small_[static_cast<std::size_t>(a * kSmall + b)];
      if (slot < 0) slot = mul_slow(a, b);
      return slot;
    }
    return mul_slow(a, b);
  }

  int inv(int a) {
    if (inv_[static_cast<std::size_t>(a)] < 0) {
      const int r = id(H_.inv(elems_[static_cast<std::size_t>(a)]));
      inv_[static_cast<std::size_t>(a)] = r;
      inv_[static_cast<std::size_t>(r)] = a;
    }
    return inv_[static_cast<std::size_t>(a)];
  }

 private:
  static constexpr int kSmall = 32;

  int mul_slow(int a, int b) {
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    auto it = mul_.find(key);
    if (it != mul_.end()) return it->second;
    const int r = id(H_.mul(elems_[static_cast<std::size_t>(a)], elems_[static_cast<std::size_t>(b)]));
    mul_.emplace(key, r);
    return r;
  }

  Group H_;
  std::vector<int> small_ = std::vector<int>(kSmall * kSmall, -1);
  std::vector<Element> elems_;
  std::unordered_map<Element, int, ElementHash> ids_;
  std::unordered_map<std::uint64_t, int> mul_;
  std::vector<int> inv_;
};

/// Data a planted cocycle was built from: c(s, y) = b0(s y)^-1 phi0(s) b0(y).
struct PlantedData {
  int b0_window = 0;
  std::vector<CosetId> b0_cells;
  std::vector<Element> b0_table;  // indexed like window patterns over b0_cells
  std::vector<Element> phi0;      // one entry per generator of G
};

/// Dense index of the restriction of y to the given sorted cells:
/// sum of y(cell_j) |X|^j.
inline std::uint64_t dense_index(const Pattern& y, const std::vector<CosetId>& cells, const Alphabet& X) {
  std::uint64_t idx = 0;
  std::uint64_t mult = 1;
  const auto n = static_cast<std::uint64_t>(X.size());
  for (const auto& c : cells) {
    idx += static_cast<std::uint64_t>(y.get(c, X.x0())) * mult;
    mult *= n;
  }
  return idx;
}

inline Pattern pattern_from_index(std::uint64_t idx, const std::vector<CosetId>& cells, const Alphabet& X) {
  Pattern y;
  const auto n = static_cast<std::uint64_t>(X.size());
  for (const auto& c : cells) {
    y.set(c, static_cast<Symbol>(idx % n), X.x0());
    idx /= n;
  }
  return y;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

class CocycleSpec {
 public:
  enum class Derivation { Explicit, Planted, Obstruction };

  /// tables[s][i] is c(s, y) for the i-th window pattern; one table per letter of S.
  CocycleSpec(Group G, Alphabet X, Group H, int L, std::vector<std::vector<Element>> tables)
      : G_(std::move(G)), X_(std::move(X)), H_(std::move(H)), L_(L), tables_(std::move(tables)) {
    if (L_ < 0) throw Error(ErrorKind::Config, "window must be >= 0");
    cells_ = CosetGraph(G_, L_).ball(L_, base_coset());
    const std::uint64_t n = checked_pow(static_cast<std::uint64_t>(X_.size()), cells_.size(), kMaxTable);
    if (n > kMaxTable) throw Error(ErrorKind::Config, "window pattern space too large for a table");
    patterns_ = n;
    if (static_cast<int>(tables_.size()) != G_.num_letters())
      throw Error(ErrorKind::Config, "need one table per generator letter");
    for (const auto& t : tables_)
      if (t.size() != patterns_) throw Error(ErrorKind::Config, "table is not total over window patterns");
  }

  static constexpr std::uint64_t kMaxTable = std::uint64_t{1} << 22;

  const Group& group() const { return G_; }
  const Alphabet& alphabet() const { return X_; }
  const Group& target() const { return H_; }
  int window() const { return L_; }
  const std::vector<CosetId>& cells() const { return cells_; }
  std::uint64_t window_patterns() const { return patterns_; }
  const std::vector<Element>& table(Letter s) const { return tables_.at(static_cast<std::size_t>(s)); }

  Derivation derivation() const { return derivation_; }
  const std::optional<PlantedData>& planted() const { return planted_; }
  void set_derivation(Derivation d) { derivation_ = d; }
  void set_planted(PlantedData p) {
    derivation_ = Derivation::Planted;
    planted_ = std::move(p);
  }

  void set_entry(Letter s, std::uint64_t idx, Element h) { tables_.at(static_cast<std::size_t>(s)).at(idx) = std::move(h); }

  std::uint64_t window_index(const Pattern& y) const { return dense_index(y, cells_, X_); }
  Pattern window_pattern(std::uint64_t idx) const { return pattern_from_index(idx, cells_, X_); }

  /// Canonical key: "word=symbol" per cell, joined by ';'.
  std::string key(std::uint64_t idx) const {
    std::string out;
    const auto n = static_cast<std::uint64_t>(X_.size());
    for (const auto& c : cells_) {
      if (!out.empty()) out += ';';
      out += G_.format(c.rep) + "=" + X_.name(static_cast<Symbol>(idx % n));
      idx /= n;
    }
    return out;
  }

  std::optional<std::uint64_t> parse_key(const std::string& key) const {
    std::vector<std::pair<CosetId, Symbol>> parts;
    std::istringstream in(key);
    std::string item;
    while (std::getline(in, item, ';')) {
      const auto eq = item.rfind('=');
      if (eq == std::string::npos) return std::nullopt;
      auto sym = X_.parse(item.substr(eq + 1));
      if (!sym) return std::nullopt;
      parts.emplace_back(coset_of(G_, G_.parse(item.substr(0, eq))), *sym);
    }
    if (parts.size() != cells_.size()) return std::nullopt;
    Pattern y;
    for (const auto& [c, s] : parts) {
      if (std::find(cells_.begin(), cells_.end(), c) == cells_.end()) return std::nullopt;
      y.set(c, s, X_.x0());
    }
    return window_index(y);
  }

  Element lookup(Letter s, const Pattern& y) const { return table(s)[window_index(y)]; }

 private:
  Group G_;
  Alphabet X_;
  Group H_;
  int L_;
  std::vector<std::vector<Element>> tables_;
  std::vector<CosetId> cells_;
  std::uint64_t patterns_ = 0;
  Derivation derivation_ = Derivation::Explicit;
  std::optional<PlantedData> planted_;
};

/// c(w1 ... wm, y) = c(w1, w2...wm y) ... c(wm, y), read along the given word.
inline Element evaluate_word(const CocycleSpec& c, const std::vector<Letter>& word, const Pattern& y) {
  const Group& G = c.group();
  const Group& H = c.target();
  Element result = H.identity();
  Pattern z = y;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    result = H.mul(c.lookup(*it, z), result);
    z = act(G, c.alphabet(), G.letter(*it), z);
  }
  return result;
}

/// c(g, y) along the normal form of g.
inline Element evaluate(const CocycleSpec& c, const Element& g, const Pattern& y) {
  return evaluate_word(c, g.letters(), y);
}

/// Cells of G/K addressed by a dense configuration.
class Frame {
 public:
  Frame() = default;
  explicit Frame(std::vector<CosetId> cells) {
    for (auto& c : cells) add(std::move(c));
  }

  int find(const CosetId& c) const {
    auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
  }

  int add(CosetId c) {
    auto it = index_.find(c);
    if (it != index_.end()) return it->second;
    const int i = static_cast<int>(cells_.size());
    index_.emplace(c, i);
    cells_.push_back(std::move(c));
    return i;
  }

  const std::vector<CosetId>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  std::vector<Symbol> dense(const Pattern& y, Symbol x0) const {
    std::vector<Symbol> out(cells_.size(), x0);
    for (std::size_t i = 0; i < cells_.size(); ++i) out[i] = y.get(cells_[i], x0);
    return out;
  }

  Pattern pattern(const std::vector<Symbol>& dense, Symbol x0) const {
    Pattern y;
    for (std::size_t i = 0; i < cells_.size(); ++i) y.set(cells_[i], dense[i], x0);
    return y;
  }

 private:
  std::vector<CosetId> cells_;
  std::unordered_map<CosetId, int, CosetIdHash> index_;
};

/// The tables of c as ids of `arith`, one vector per letter.
inline std::vector<std::vector<int>> intern_tables(const CocycleSpec& c, HArith& arith) {
  std::vector<std::vector<int>> out;
  for (Letter s = 0; s < c.group().num_letters(); ++s) {
    std::vector<int> t;
    t.reserve(c.table(s).size());
    for (const auto& h : c.table(s)) t.push_back(arith.id(h));
    out.push_back(std::move(t));
  }
  return out;
}

/// A word whose cocycle value on configurations over a fixed frame has been
/// reduced to table reads: factor i reads cell u of y through alpha(delta(h, u)).
class CompiledWord {
 public:
  /// With grow set, cells the word reads are appended to the frame; otherwise
  /// cells outside the frame are read as x0.
  /// `ids` holds the tables as H ids, see intern_tables.
  CompiledWord(const CocycleSpec& c, const std::vector<std::vector<int>>& ids, std::vector<Letter> word, Frame& frame,
               bool grow)
      : word_(std::move(word)), x0_(c.alphabet().x0()), base_(static_cast<std::uint64_t>(c.alphabet().size())) {
    const Group& G = c.group();
    const Alphabet& X = c.alphabet();
    Element h = G.identity();  // suffix w_{i+1} ... w_m
    factors_.resize(word_.size());
    for (std::size_t k = word_.size(); k-- > 0;) {
      Factor& f = factors_[k];
      f.table = &ids.at(static_cast<std::size_t>(word_[k]));
      const Element h_inv = G.inv(h);
      for (const auto& cell : c.cells()) {
        const CosetId u = coset_of(G, G.mul(h_inv, cell.rep));
        int src = grow ? frame.add(u) : frame.find(u);
        const Element d = G.mul(G.inv(cell.rep), h, u.rep);
        f.src.push_back(src);
        f.perm.push_back(perm_id(X.alpha(d)));
      }
      h = G.mul(G.letter(word_[k]), h);
    }
  }

  const std::vector<Letter>& word() const { return word_; }

  int evaluate(const std::vector<Symbol>& dense, HArith& arith) const {
    int acc = HArith::identity();
    for (const auto& f : factors_) {
      std::uint64_t idx = 0;
      std::uint64_t mult = 1;
      for (std::size_t j = 0; j < f.src.size(); ++j) {
        const Symbol x = f.src[j] < 0 ? x0_ : perms_[static_cast<std::size_t>(f.perm[j])]
                                                    [static_cast<std::size_t>(dense[static_cast<std::size_t>(f.src[j])])];
        idx += static_cast<std::uint64_t>(x) * mult;
        mult *= base_;
      }
      acc = arith.mul(acc, (*f.table)[idx]);
    }
    return acc;
  }

 private:
  struct Factor {
    const std::vector<int>* table = nullptr;
    std::vector<int> src;
    std::vector<int> perm;
  };

  int perm_id(std::vector<int> p) {
    auto it = std::find(perms_.begin(), perms_.end(), p);
    if (it != perms_.end()) return static_cast<int>(it - perms_.begin());
    perms_.push_back(std::move(p));
    return static_cast<int>(perms_.size() - 1);
  }

  std::vector<Letter> word_;
  Symbol x0_;
  std::uint64_t base_;
  std::vector<Factor> factors_;
  std::vector<std::vector<int>> perms_;
};

struct RelationViolation {
  std::vector<Letter> relator;
  Pattern pattern;
  Element value;
};

struct RelationReport {
  std::size_t relators_checked = 0;
  std::size_t patterns_checked = 0;
  bool exhaustive = true;  // every relator's dependency space was enumerated
  std::size_t violation_count = 0;
  std::vector<RelationViolation> violations;  // the first few only

  bool ok() const { return violation_count == 0; }
};

/// Evaluates every defining relator and every s s^-1 along the word. Small
/// dependency spaces are enumerated completely, larger ones sampled.
inline RelationReport verify_relations(const CocycleSpec& c, int sample, std::uint64_t seed = 1,
                                       std::uint64_t exhaustive_cap = std::uint64_t{1} << 16) {
  const Group& G = c.group();
  const Alphabet& X = c.alphabet();
  HArith arith(c.target());
  const auto ids = intern_tables(c, arith);
  std::mt19937_64 rng(seed);
  RelationReport rep;
  auto relators = G.relators();
  for (auto& r : G.inverse_pair_relators()) relators.push_back(std::move(r));
  for (const auto& r : relators) {
    Frame frame;
    CompiledWord w(c, ids, r, frame, true);
    ++rep.relators_checked;
    const std::uint64_t space = checked_pow(static_cast<std::uint64_t>(X.size()), frame.size(), exhaustive_cap);
    std::vector<Symbol> dense(frame.size(), X.x0());
    auto check = [&] {
      ++rep.patterns_checked;
      const int v = w.evaluate(dense, arith);
      if (v == HArith::identity()) return;
      ++rep.violation_count;
      if (rep.violations.size() < 16) rep.violations.push_back({r, frame.pattern(dense, X.x0()), arith.element(v)});
    };
    if (space <= exhaustive_cap) {
      for (std::uint64_t idx = 0; idx < space; ++idx) {
        std::uint64_t t = idx;
        for (auto& s : dense) {
          s = static_cast<Symbol>(t % static_cast<std::uint64_t>(X.size()));
          t /= static_cast<std::uint64_t>(X.size());
        }
        check();
      }
    } else {
      rep.exhaustive = false;
      for (int i = 0; i < sample; ++i) {
        for (auto& s : dense) s = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(X.size()));
        check();
      }
    }
  }
  return rep;
}

struct EdgeWitness {
  Element y;  // in K
  Letter s = 0;
  Element x;  // in K, with rep(v) x^-1 = rep(u) y s
};

/// Scans the K-ball of radius R for y with rep(u) y s in vK.
inline std::optional<EdgeWitness> edge_witness(const Group& G, const CosetId& u, const CosetId& v, Letter s, int R) {
  const Element sl = G.letter(s);
  for (const auto& k : word_ball(G, R, G.subgroup_letters())) {
    const Element g = G.mul(u.rep, k.element, sl);
    if (coset_of(G, g) != v) continue;
    return EdgeWitness{k.element, s, G.inv(G.mul(G.inv(v.rep), g))};
  }
  return std::nullopt;
}

/// The word x_{n-1}^-1 s_{n-1}^-1 y_{n-1}^-1 ... x_0^-1 s_0^-1 y_0^-1, which
/// spells g_n^-1 g_0 along the path with K-elements written in T.
inline std::vector<Letter> path_word(const Group& G, const Path& p, int R) {
  std::vector<Letter> word;
  for (std::size_t i = p.length(); i-- > 0;) {
    auto w = edge_witness(G, p.vertices[i], p.vertices[i + 1], p.labels[i], R);
    if (!w) throw Error(ErrorKind::NotFound, "no edge witness within K-radius " + std::to_string(R));
    for (Letter l : G.inv(w->x).letters()) word.push_back(l);
    word.push_back(inverse_letter(w->s));
    for (Letter l : G.inv(w->y).letters()) word.push_back(l);
  }
  return word;
}

/// c(g_n^-1, y) c(g_0^-1, y)^-1 computed as a product of factors along the path.
inline Element path_difference(const CocycleSpec& c, const Path& p, const Pattern& y, int R = 8) {
  const Group& G = c.group();
  if (p.length() == 0) return c.target().identity();
  const Element g0_inv = G.inv(p.vertices.front().rep);
  return evaluate_word(c, path_word(G, p, R), act(G, c.alphabet(), g0_inv, y));
}

/// path_difference agrees on y and z. Meant for y, z agreeing near the path.
inline bool locality_check(const CocycleSpec& c, const Path& p, const Pattern& y, const Pattern& z, int R = 8) {
  return path_difference(c, p, y, R) == path_difference(c, p, z, R);
}

namespace detail {

inline Element random_h(std::mt19937_64& rng, const Group& H) {
  if (H.spec().family == GroupSpec::Family::cyclic) {
    const auto e = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(H.spec().order));
    return H.normalize(std::vector<Syllable>{{0, e}});
  }
  if (H.num_gens() == 0) return H.identity();
  std::vector<Letter> w(rng() % 3);
  for (auto& l : w) l = static_cast<Letter>(rng() % static_cast<std::uint64_t>(H.num_letters()));
  return H.from_letters(w);
}

inline Element phi_of_word(const Group& H, const std::vector<Element>& phi, const std::vector<Letter>& word) {
  Element out = H.identity();
  for (Letter l : word) {
    const Element& e = phi[static_cast<std::size_t>(gen_of(l))];
    out = H.mul(out, is_inverse_letter(l) ? H.inv(e) : e);
  }
  return out;
}

}  // namespace detail

/// Random homomorphism G -> H given on generators: redrawn until the
/// relators vanish, trivial if 64 draws fail.
inline std::vector<Element> random_homomorphism(std::mt19937_64& rng, const Group& G, const Group& H) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Element> phi;
    for (int g = 0; g < G.num_gens(); ++g) phi.push_back(detail::random_h(rng, H));
    bool ok = true;
    for (const auto& r : G.relators()) ok = ok && detail::phi_of_word(H, phi, r).is_identity();
    if (ok) return phi;
  }
  return std::vector<Element>(static_cast<std::size_t>(G.num_gens()), H.identity());
}

inline Element planted_b0(const PlantedData& p, const Alphabet& X, const Pattern& y) {
  return p.b0_table[dense_index(y, p.b0_cells, X)];
}

/// c(s, y) = b0(s y)^-1 phi0(s) b0(y) with random b0 on ball(b0_window) and
/// random phi0. The resulting window is b0_window + 1, since b0(s y) reads y
/// on s^-1 ball(b0_window).
inline CocycleSpec plant(const Group& G, const Alphabet& X, const Group& H, int b0_window, std::uint64_t seed) {
  if (b0_window < 0) throw Error(ErrorKind::Config, "b0 window must be >= 0");
  std::mt19937_64 rng(seed);
  PlantedData p;
  p.b0_window = b0_window;
  p.b0_cells = CosetGraph(G, b0_window).ball(b0_window, base_coset());
  const std::uint64_t n = checked_pow(static_cast<std::uint64_t>(X.size()), p.b0_cells.size(), CocycleSpec::kMaxTable);
  if (n > CocycleSpec::kMaxTable) throw Error(ErrorKind::Config, "b0 window pattern space too large");
  for (std::uint64_t i = 0; i < n; ++i) p.b0_table.push_back(detail::random_h(rng, H));
  p.phi0 = random_homomorphism(rng, G, H);

  const int L = b0_window + 1;
  const auto cells = CosetGraph(G, L).ball(L, base_coset());
  const std::uint64_t m = checked_pow(static_cast<std::uint64_t>(X.size()), cells.size(), CocycleSpec::kMaxTable);
  if (m > CocycleSpec::kMaxTable) throw Error(ErrorKind::Config, "planted window pattern space too large");
  std::vector<std::vector<Element>> tables(static_cast<std::size_t>(G.num_letters()));
  for (std::uint64_t i = 0; i < m; ++i) {
    const Pattern y = pattern_from_index(i, cells, X);
    const Element by = planted_b0(p, X, y);
    for (Letter s = 0; s < G.num_letters(); ++s) {
      const Element& ph = p.phi0[static_cast<std::size_t>(gen_of(s))];
      const Element phs = is_inverse_letter(s) ? H.inv(ph) : ph;
      const Element bsy = planted_b0(p, X, act(G, X, G.letter(s), y));
      tables[static_cast<std::size_t>(s)].push_back(H.mul(H.inv(bsy), phs, by));
    }
  }
  CocycleSpec c(G, X, H, L, std::move(tables));
  c.set_planted(std::move(p));
  return c;
}

/// Cocycle with c(s, y) = phi(s) for a homomorphism given on generators.
inline CocycleSpec constant_cocycle(const Group& G, const Alphabet& X, const Group& H, const std::vector<Element>& phi,
                                    int L = 0) {
  const auto cells = CosetGraph(G, L).ball(L, base_coset());
  const std::uint64_t m = checked_pow(static_cast<std::uint64_t>(X.size()), cells.size(), CocycleSpec::kMaxTable);
  std::vector<std::vector<Element>> tables;
  for (Letter s = 0; s < G.num_letters(); ++s) {
    const Element& ph = phi.at(static_cast<std::size_t>(gen_of(s)));
    tables.emplace_back(m, is_inverse_letter(s) ? H.inv(ph) : ph);
  }
  return CocycleSpec(G, X, H, L, std::move(tables));
}

}  // namespace relend
