#pragma once

// Finitely generated groups with a distinguished subgroup K, given by
// built-in families with hand-written normal forms:
//
//   zd(d, k_coords)   Z^d, K spanned by the listed coordinate axes
//   free(rank)        free group, K trivial
//   bs(m, n)          Baumslag-Solitar <x, t | t^-1 x^m t = x^n>, K = <x>
//   cyclic(n)         Z/n, K trivial (mostly used as a cocycle target)
//   direct_product    G1 x G2 with K = K1 x K2
//
// Elements are run-length encoded normal-form words. The generating list S
// is ordered g0, g0^-1, g1, g1^-1, ...; a Letter indexes into S.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "relend/error.hpp"

namespace relend {

using Letter = int;

constexpr int gen_of(Letter l) { return l >> 1; }
constexpr bool is_inverse_letter(Letter l) { return (l & 1) != 0; }
constexpr Letter inverse_letter(Letter l) { return l ^ 1; }
constexpr Letter make_letter(int gen, bool inverse) { return 2 * gen + (inverse ? 1 : 0); }

struct Syllable {
  int gen = 0;
  std::int64_t exp = 0;

  auto operator<=>(const Syllable&) const = default;
};

class Element {
 public:
  Element() = default;
  explicit Element(std::vector<Syllable> syllables) : syl_(std::move(syllables)) {}

  const std::vector<Syllable>& syllables() const { return syl_; }
  bool is_identity() const { return syl_.empty(); }

  /// Length of the normal-form word.
  std::int64_t length() const {
    std::int64_t n = 0;
    for (const auto& s : syl_) n += s.exp < 0 ? -s.exp : s.exp;
    return n;
  }

  std::vector<Letter> letters() const {
    std::vector<Letter> out;
    for (const auto& s : syl_) {
      const Letter l = make_letter(s.gen, s.exp < 0);
      for (std::int64_t i = 0; i < (s.exp < 0 ? -s.exp : s.exp); ++i) out.push_back(l);
    }
    return out;
  }

  auto operator<=>(const Element&) const = default;
  bool operator==(const Element&) const = default;

 private:
  std::vector<Syllable> syl_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& s : e.syllables()) {
      h ^= std::hash<std::int64_t>{}(s.exp * 1315423911ll + s.gen) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Descriptor of a group pair (G, K), as read from configuration.
struct GroupSpec {
  enum class Family { zd, free, bs, cyclic, direct_product };

  Family family = Family::zd;
  int d = 0;
  std::vector<int> k_coords;
  int rank = 0;
  int m = 1;
  int n = 2;
  int order = 2;
  std::shared_ptr<const GroupSpec> left;
  std::shared_ptr<const GroupSpec> right;

  static GroupSpec zd(int d, std::vector<int> k_coords = {}) {
    GroupSpec s;
    s.family = Family::zd;
    s.d = d;
    s.k_coords = std::move(k_coords);
    return s;
  }
  static GroupSpec free(int rank) {
    GroupSpec s;
    s.family = Family::free;
    s.rank = rank;
    return s;
  }
  static GroupSpec bs(int m, int n) {
    GroupSpec s;
    s.family = Family::bs;
    s.m = m;
    s.n = n;
    return s;
  }
  static GroupSpec cyclic(int order) {
    GroupSpec s;
    s.family = Family::cyclic;
    s.order = order;
    return s;
  }
  static GroupSpec direct_product(GroupSpec a, GroupSpec b) {
    GroupSpec s;
    s.family = Family::direct_product;
    s.left = std::make_shared<const GroupSpec>(std::move(a));
    s.right = std::make_shared<const GroupSpec>(std::move(b));
    return s;
  }
};

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

class GroupImpl {
 public:
  virtual ~GroupImpl() = default;

  virtual int num_gens() const = 0;
  virtual std::string default_name(int gen) const = 0;
  virtual Element normalize(std::span<const Syllable> word) const = 0;
  virtual bool in_subgroup(const Element& g) const = 0;
  virtual Element coset_rep(const Element& g) const = 0;
  virtual bool is_subgroup_gen(int gen) const = 0;
  virtual bool subgroup_is_normal() const = 0;
  virtual bool subgroup_is_finite() const = 0;
  virtual std::vector<Element> witness(Letter s) const = 0;
  virtual std::vector<std::vector<Letter>> relators() const = 0;
};

class ZdImpl final : public GroupImpl {
 public:
  ZdImpl(int d, std::vector<int> k) : d_(d), in_k_(static_cast<std::size_t>(d), false) {
    if (d < 0 || d > 26) throw Error(ErrorKind::Config, "zd: d must lie in 0..26");
    for (int c : k) {
      if (c < 0 || c >= d) throw Error(ErrorKind::Config, "zd: k_coords entry out of range");
      in_k_[static_cast<std::size_t>(c)] = true;
    }
  }

  int num_gens() const override { return d_; }
  std::string default_name(int gen) const override { return std::string(1, static_cast<char>('a' + gen)); }

  Element normalize(std::span<const Syllable> word) const override {
    std::vector<std::int64_t> coord(static_cast<std::size_t>(d_), 0);
    for (const auto& s : word) coord[static_cast<std::size_t>(s.gen)] += s.exp;
    std::vector<Syllable> out;
    for (int i = 0; i < d_; ++i)
      if (coord[static_cast<std::size_t>(i)] != 0) out.push_back({i, coord[static_cast<std::size_t>(i)]});
    return Element(std::move(out));
  }

  bool in_subgroup(const Element& g) const override {
    return std::all_of(g.syllables().begin(), g.syllables().end(),
                       [&](const Syllable& s) { return in_k_[static_cast<std::size_t>(s.gen)]; });
  }

  Element coset_rep(const Element& g) const override {
    std::vector<Syllable> out;
    for (const auto& s : g.syllables())
      if (!in_k_[static_cast<std::size_t>(s.gen)]) out.push_back(s);
    return Element(std::move(out));
  }

  bool is_subgroup_gen(int gen) const override { return in_k_[static_cast<std::size_t>(gen)]; }
  bool subgroup_is_normal() const override { return true; }
  bool subgroup_is_finite() const override {
    return std::none_of(in_k_.begin(), in_k_.end(), [](bool b) { return b; });
  }

  std::vector<Element> witness(Letter s) const override {
    if (in_k_[static_cast<std::size_t>(gen_of(s))]) return {Element{}};
    return {Element({{gen_of(s), is_inverse_letter(s) ? -1 : 1}})};
  }

  std::vector<std::vector<Letter>> relators() const override {
    std::vector<std::vector<Letter>> out;
    for (int i = 0; i < d_; ++i)
      for (int j = i + 1; j < d_; ++j)
        out.push_back({make_letter(i, false), make_letter(j, false), make_letter(i, true), make_letter(j, true)});
    return out;
  }

 private:
  int d_;
  std::vector<bool> in_k_;
};

class FreeImpl final : public GroupImpl {
 public:
  explicit FreeImpl(int rank) : rank_(rank) {
    if (rank < 0 || rank > 26) throw Error(ErrorKind::Config, "free: rank must lie in 0..26");
  }

  int num_gens() const override { return rank_; }
  std::string default_name(int gen) const override { return std::string(1, static_cast<char>('a' + gen)); }

  Element normalize(std::span<const Syllable> word) const override {
    std::vector<Syllable> out;
    for (const auto& s : word) {
      if (s.exp == 0) continue;
      if (!out.empty() && out.back().gen == s.gen) {
        out.back().exp += s.exp;
        if (out.back().exp == 0) out.pop_back();
      } else {
        out.push_back(s);
      }
    }
    return Element(std::move(out));
  }

  bool in_subgroup(const Element& g) const override { return g.is_identity(); }
  Element coset_rep(const Element& g) const override { return g; }
  bool is_subgroup_gen(int) const override { return false; }
  bool subgroup_is_normal() const override { return true; }
  bool subgroup_is_finite() const override { return true; }

  std::vector<Element> witness(Letter s) const override {
    return {Element({{gen_of(s), is_inverse_letter(s) ? -1 : 1}})};
  }

  std::vector<std::vector<Letter>> relators() const override { return {}; }

 private:
  int rank_;
};

class CyclicImpl final : public GroupImpl {
 public:
  explicit CyclicImpl(int order) : order_(order) {
    if (order < 1) throw Error(ErrorKind::Config, "cyclic: order must be >= 1");
  }

  int num_gens() const override { return 1; }
  std::string default_name(int) const override { return "a"; }

  Element normalize(std::span<const Syllable> word) const override {
    std::int64_t e = 0;
    for (const auto& s : word) e = (e + s.exp % order_) % order_;
    if (e < 0) e += order_;
    if (e == 0) return Element{};
    return Element({{0, e}});
  }

  bool in_subgroup(const Element& g) const override { return g.is_identity(); }
  Element coset_rep(const Element& g) const override { return g; }
  bool is_subgroup_gen(int) const override { return false; }
  bool subgroup_is_normal() const override { return true; }
  bool subgroup_is_finite() const override { return true; }

  std::vector<Element> witness(Letter s) const override {
    return {normalize(std::vector<Syllable>{{0, is_inverse_letter(s) ? -1 : 1}})};
  }

  std::vector<std::vector<Letter>> relators() const override {
    return {std::vector<Letter>(static_cast<std::size_t>(order_), make_letter(0, false))};
  }

 private:
  int order_;
};

// Britton normal form with right transversals: x^r before t has 0 <= r < m,
// x^r before t^-1 has 0 <= r < n, and the trailing x-power is arbitrary.
class BsImpl final : public GroupImpl {
 public:
  static constexpr int kX = 0;
  static constexpr int kT = 1;

  BsImpl(int m, int n) : m_(m), n_(n) {
    if (m < 1 || n < 1) throw Error(ErrorKind::Config, "bs: m and n must be positive");
  }

  int num_gens() const override { return 2; }
  std::string default_name(int gen) const override { return gen == kX ? "x" : "t"; }

  Element normalize(std::span<const Syllable> word) const override {
    State st;
    for (const auto& s : word) {
      if (s.gen == kX) {
        st.tail += s.exp;
      } else {
        const int eps = s.exp > 0 ? 1 : -1;
        for (std::int64_t i = 0; i < (s.exp > 0 ? s.exp : -s.exp); ++i) push_t(st, eps);
      }
    }
    std::vector<Syllable> out;
    for (const auto& [r, eps] : st.stack) {
      if (r != 0) out.push_back({kX, r});
      if (!out.empty() && out.back().gen == kT && (out.back().exp > 0) == (eps > 0))
        out.back().exp += eps;
      else
        out.push_back({kT, eps});
    }
    if (st.tail != 0) out.push_back({kX, st.tail});
    return Element(std::move(out));
  }

  bool in_subgroup(const Element& g) const override {
    return std::all_of(g.syllables().begin(), g.syllables().end(),
                       [](const Syllable& s) { return s.gen == kX; });
  }

  Element coset_rep(const Element& g) const override {
    auto syl = g.syllables();
    if (!syl.empty() && syl.back().gen == kX) syl.pop_back();
    return Element(std::move(syl));
  }

  bool is_subgroup_gen(int gen) const override { return gen == kX; }
  bool subgroup_is_normal() const override { return false; }
  bool subgroup_is_finite() const override { return false; }

  std::vector<Element> witness(Letter s) const override {
    if (gen_of(s) == kX) return {Element{}};
    const bool inv = is_inverse_letter(s);
    const int count = inv ? n_ : m_;
    std::vector<Element> out;
    for (int r = 0; r < count; ++r) {
      std::vector<Syllable> w;
      if (r != 0) w.push_back({kX, r});
      w.push_back({kT, inv ? -1 : 1});
      out.push_back(normalize(w));
    }
    return out;
  }

  std::vector<std::vector<Letter>> relators() const override {
    std::vector<Letter> r;
    r.push_back(make_letter(kT, true));
    for (int i = 0; i < m_; ++i) r.push_back(make_letter(kX, false));
    r.push_back(make_letter(kT, false));
    for (int i = 0; i < n_; ++i) r.push_back(make_letter(kX, true));
    return {r};
  }

 private:
  struct State {
    std::vector<std::pair<std::int64_t, int>> stack;
    std::int64_t tail = 0;
  };

  void push_t(State& st, int eps) const {
    const std::int64_t mod = eps > 0 ? m_ : n_;
    const std::int64_t other = eps > 0 ? n_ : m_;
    const std::int64_t q = floor_div(st.tail, mod);
    const std::int64_t r = st.tail - q * mod;
    if (r == 0 && !st.stack.empty() && st.stack.back().second == -eps) {
      st.tail = st.stack.back().first + other * q;
      st.stack.pop_back();
    } else {
      st.stack.emplace_back(r, eps);
      st.tail = other * q;
    }
  }

  int m_;
  int n_;
};

class ProductImpl final : public GroupImpl {
 public:
  ProductImpl(std::shared_ptr<const GroupImpl> a, std::shared_ptr<const GroupImpl> b)
      : a_(std::move(a)), b_(std::move(b)), split_(a_->num_gens()) {}

  int num_gens() const override { return a_->num_gens() + b_->num_gens(); }

  std::string default_name(int gen) const override {
    return gen < split_ ? a_->default_name(gen) : b_->default_name(gen - split_);
  }

  Element normalize(std::span<const Syllable> word) const override {
    std::vector<Syllable> wa, wb;
    for (const auto& s : word) {
      if (s.gen < split_) wa.push_back(s);
      else wb.push_back({s.gen - split_, s.exp});
    }
    return join(a_->normalize(wa), b_->normalize(wb));
  }

  bool in_subgroup(const Element& g) const override {
    auto [ga, gb] = split(g);
    return a_->in_subgroup(ga) && b_->in_subgroup(gb);
  }

  Element coset_rep(const Element& g) const override {
    auto [ga, gb] = split(g);
    return join(a_->coset_rep(ga), b_->coset_rep(gb));
  }

  bool is_subgroup_gen(int gen) const override {
    return gen < split_ ? a_->is_subgroup_gen(gen) : b_->is_subgroup_gen(gen - split_);
  }
  bool subgroup_is_normal() const override { return a_->subgroup_is_normal() && b_->subgroup_is_normal(); }
  bool subgroup_is_finite() const override { return a_->subgroup_is_finite() && b_->subgroup_is_finite(); }

  std::vector<Element> witness(Letter s) const override {
    std::vector<Element> out;
    if (gen_of(s) < split_) {
      for (auto& f : a_->witness(s)) out.push_back(join(f, Element{}));
    } else {
      for (auto& f : b_->witness(s - 2 * split_)) out.push_back(join(Element{}, f));
    }
    return out;
  }

  std::vector<std::vector<Letter>> relators() const override {
    auto out = a_->relators();
    for (auto r : b_->relators()) {
      for (auto& l : r) l += 2 * split_;
      out.push_back(std::move(r));
    }
    for (int i = 0; i < split_; ++i)
      for (int j = split_; j < num_gens(); ++j)
        out.push_back({make_letter(i, false), make_letter(j, false), make_letter(i, true), make_letter(j, true)});
    return out;
  }

 private:
  std::pair<Element, Element> split(const Element& g) const {
    std::vector<Syllable> wa, wb;
    for (const auto& s : g.syllables()) {
      if (s.gen < split_) wa.push_back(s);
      else wb.push_back({s.gen - split_, s.exp});
    }
    return {Element(std::move(wa)), Element(std::move(wb))};
  }

  Element join(const Element& a, const Element& b) const {
    auto out = a.syllables();
    for (const auto& s : b.syllables()) out.push_back({s.gen + split_, s.exp});
    return Element(std::move(out));
  }

  std::shared_ptr<const GroupImpl> a_;
  std::shared_ptr<const GroupImpl> b_;
  int split_;
};

inline std::shared_ptr<const GroupImpl> make_impl(const GroupSpec& spec) {
  using F = GroupSpec::Family;
  switch (spec.family) {
    case F::zd: return std::make_shared<ZdImpl>(spec.d, spec.k_coords);
    case F::free: return std::make_shared<FreeImpl>(spec.rank);
    case F::bs: return std::make_shared<BsImpl>(spec.m, spec.n);
    case F::cyclic: return std::make_shared<CyclicImpl>(spec.order);
    case F::direct_product:
      if (!spec.left || !spec.right) throw Error(ErrorKind::Config, "direct_product needs two factors");
      return std::make_shared<ProductImpl>(make_impl(*spec.left), make_impl(*spec.right));
  }
  throw Error(ErrorKind::Config, "unknown group family");
}

}  // namespace detail

/// A group pair (G, K). Cheap to copy; all state is immutable and shared.
class Group {
 public:
  explicit Group(GroupSpec spec) : spec_(std::make_shared<const GroupSpec>(std::move(spec))) {
    impl_ = detail::make_impl(*spec_);
    const int g = impl_->num_gens();
    for (int i = 0; i < g; ++i) names_.push_back(impl_->default_name(i));
    // Direct products of families with overlapping names get suffixed names.
    std::vector<std::string> sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      for (int i = 0; i < g; ++i) names_[static_cast<std::size_t>(i)] += std::to_string(i);
    }
    for (int i = 0; i < g; ++i) {
      if (impl_->is_subgroup_gen(i)) {
        subgroup_letters_.push_back(make_letter(i, false));
        subgroup_letters_.push_back(make_letter(i, true));
      }
    }
  }

  const GroupSpec& spec() const { return *spec_; }
  int num_gens() const { return impl_->num_gens(); }
  int num_letters() const { return 2 * num_gens(); }

  const std::string& gen_name(int gen) const { return names_.at(static_cast<std::size_t>(gen)); }

  std::string letter_name(Letter l) const {
    std::string s = gen_name(gen_of(l));
    if (is_inverse_letter(l)) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
  }

  std::optional<Letter> parse_letter(std::string_view tok) const {
    for (Letter l = 0; l < num_letters(); ++l)
      if (letter_name(l) == tok) return l;
    return std::nullopt;
  }

  std::vector<Letter> all_letters() const {
    std::vector<Letter> out(static_cast<std::size_t>(num_letters()));
    for (Letter l = 0; l < num_letters(); ++l) out[static_cast<std::size_t>(l)] = l;
    return out;
  }

  /// T: the letters generating K, in S order.
  const std::vector<Letter>& subgroup_letters() const { return subgroup_letters_; }

  Element identity() const { return Element{}; }

  Element normalize(std::span<const Syllable> word) const { return impl_->normalize(word); }

  Element letter(Letter l) const {
    const Syllable s{gen_of(l), is_inverse_letter(l) ? -1 : 1};
    return impl_->normalize(std::span<const Syllable>(&s, 1));
  }

  Element from_letters(std::span<const Letter> word) const {
    std::vector<Syllable> syl;
    syl.reserve(word.size());
    for (Letter l : word) syl.push_back({gen_of(l), is_inverse_letter(l) ? -1 : 1});
    return impl_->normalize(syl);
  }

  Element mul(const Element& a, const Element& b) const {
    if (b.is_identity()) return a;
    if (a.is_identity()) return b;
    std::vector<Syllable> w = a.syllables();
    w.insert(w.end(), b.syllables().begin(), b.syllables().end());
    return impl_->normalize(w);
  }

  Element mul(const Element& a, const Element& b, const Element& c) const { return mul(mul(a, b), c); }

  Element inv(const Element& a) const {
    std::vector<Syllable> w(a.syllables().rbegin(), a.syllables().rend());
    for (auto& s : w) s.exp = -s.exp;
    return impl_->normalize(w);
  }

  bool in_subgroup(const Element& g) const { return impl_->in_subgroup(g); }
  Element coset_rep(const Element& g) const { return impl_->coset_rep(g); }
  bool subgroup_is_normal() const { return impl_->subgroup_is_normal(); }
  bool subgroup_is_finite() const { return impl_->subgroup_is_finite(); }

  /// Family-supplied finite F_s with K s contained in F_s K; every f in F_s lies in K s.
  std::vector<Element> witness_set(Letter s) const { return impl_->witness(s); }

  /// Defining relators of the family presentation.
  std::vector<std::vector<Letter>> relators() const { return impl_->relators(); }

  /// The trivial relators s s^-1 and s^-1 s for every generator.
  std::vector<std::vector<Letter>> inverse_pair_relators() const {
    std::vector<std::vector<Letter>> out;
    for (int g = 0; g < num_gens(); ++g) {
      out.push_back({make_letter(g, false), make_letter(g, true)});
      out.push_back({make_letter(g, true), make_letter(g, false)});
    }
    return out;
  }

  /// Space separated letters, "1" for the identity.
  std::string format(const Element& g) const { return format_letters(g.letters()); }

  std::string format_letters(std::span<const Letter> word) const {
    if (word.empty()) return "1";
    std::string out;
    for (Letter l : word) {
      if (!out.empty()) out += ' ';
      out += letter_name(l);
    }
    return out;
  }

  std::vector<Letter> parse_letters(std::string_view text) const {
    std::vector<Letter> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      if (tok == "1") continue;
      auto l = parse_letter(tok);
      if (!l) throw Error(ErrorKind::Config, "unknown generator letter '" + tok + "'");
      out.push_back(*l);
    }
    return out;
  }

  Element parse(std::string_view text) const { return from_letters(parse_letters(text)); }

 private:
  std::shared_ptr<const GroupSpec> spec_;
  std::shared_ptr<const detail::GroupImpl> impl_;
  std::vector<std::string> names_;
  std::vector<Letter> subgroup_letters_;
};

struct BallEntry {
  Element element;
  int length = 0;
};

/// Elements of word length <= radius over the given letters, in shortlex order
/// of their shortlex-least spelling.
inline std::vector<BallEntry> word_ball(const Group& g, int radius, std::span<const Letter> letters) {
  std::vector<BallEntry> out;
  std::unordered_set<Element, ElementHash> seen;
  out.push_back({g.identity(), 0});
  seen.insert(g.identity());
  std::vector<Element> gens;
  for (Letter l : letters) gens.push_back(g.letter(l));
  for (std::size_t head = 0; head < out.size(); ++head) {
    if (out[head].length >= radius) continue;
    for (const auto& s : gens) {
      Element next = g.mul(out[head].element, s);
      if (seen.insert(next).second) out.push_back({std::move(next), out[head].length + 1});
    }
  }
  return out;
}

inline std::vector<BallEntry> word_ball(const Group& g, int radius) {
  const auto letters = g.all_letters();
  return word_ball(g, radius, letters);
}

}  // namespace relend
