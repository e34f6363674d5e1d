#pragma once

// Trivializing a cocycle over a one-ended pair: phi(g) = c(g, 0), and the
// transfer b(y) = c(g, y)^-1 phi(g) for any g with |gK| and |g^-1 K| beyond
// N(||y|| + L). Then c(g, y) = b(g y) phi(g) b(y)^-1.

#include <chrono>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <unordered_set>

#include "relend/cocycle.hpp"
#include "relend/ends.hpp"

namespace relend {

class Trivializer {
 public:
  explicit Trivializer(const CocycleSpec& c) : c_(c), G_(c.group()), H_(c.target()) {}

  const CocycleSpec& cocycle() const { return c_; }

  /// A ball of at least the given radius; grows and is rebuilt on demand.
  const CosetGraph& graph(int radius) {
    if (!graph_ || graph_->radius() < radius) {
      const int next = std::max(radius, graph_ ? graph_->radius() + 4 : radius);
      if (next > kMaxRadius) throw Error(ErrorKind::InsufficientRadius, "coset ball beyond radius " + std::to_string(kMaxRadius));
      graph_ = std::make_unique<CosetGraph>(G_, next);
    }
    return *graph_;
  }

  int norm_of(const CosetId& v) {
    for (int r = graph(0).radius();; r = graph_->radius() + 1) {
      if (auto n = graph(r).norm(v)) return *n;
    }
  }

  int norm_of(const Pattern& y) {
    int out = 0;
    for (const auto& [v, x] : y.entries()) out = std::max(out, norm_of(v));
    return out;
  }

  Element phi(const Element& g) const { return evaluate(c_, g, Pattern{}); }

  /// N(r), probing up to r + 10.
  int capacity_at(int r) {
    if (auto e = capacity_.get(r)) return e->N;
    const CapacityEntry e = capacity(graph(r + 10), r, r + 10);
    capacity_.set(r, e);
    return e.N;
  }

  const CapacityTable& capacity_table() const { return capacity_; }

  /// Shortlex-first g in the word ball of radius R with |gK| > n and |g^-1 K| > n.
  std::optional<Element> choose_far_element(int n, int R) {
    auto found = far_elements(n, R, 1);
    if (found.empty()) return std::nullopt;
    return found.front();
  }

  /// The first `count` qualifying elements in shortlex order.
  std::vector<Element> far_elements(int n, int R, std::size_t count) {
    const CosetGraph& g = graph(std::max(n, 0));
    auto far = [&](const Element& e) {
      auto a = g.norm(coset_of(G_, e));
      auto b = g.norm(coset_of(G_, G_.inv(e)));
      return (!a || *a > n) && (!b || *b > n);
    };
    std::vector<Element> out;
    std::vector<std::pair<Element, int>> queue{{G_.identity(), 0}};
    std::unordered_set<Element, ElementHash> seen{G_.identity()};
    for (std::size_t head = 0; head < queue.size() && out.size() < count; ++head) {
      const auto [e, len] = queue[head];
      if (far(e)) out.push_back(e);
      if (len >= R) continue;
      for (Letter s = 0; s < G_.num_letters(); ++s) {
        Element next = G_.mul(e, G_.letter(s));
        if (seen.insert(next).second) queue.emplace_back(std::move(next), len + 1);
      }
    }
    return out;
  }

  /// Far element for threshold n, cached.
  const Element& far_element(int n) {
    auto it = far_cache_.find(n);
    if (it != far_cache_.end()) return it->second;
    auto g = choose_far_element(n, 2 * n + 4);
    if (!g) throw Error(ErrorKind::NotFound, "no element with |gK|, |g^-1 K| > " + std::to_string(n));
    return far_cache_.emplace(n, std::move(*g)).first->second;
  }

  const std::map<int, Element>& far_cache() const { return far_cache_; }

  int threshold_for(const Pattern& y) { return capacity_at(norm_of(y) + c_.window()); }

  /// b(y) = c(g_y, y)^-1 phi(g_y).
  Element transfer(const Pattern& y) { return transfer_with(far_element(threshold_for(y)), y); }

  Element transfer_with(const Element& g, const Pattern& y) const {
    return H_.mul(H_.inv(evaluate(c_, g, y)), phi(g));
  }

  /// Several distinct qualifying elements give the same transfer value. A
  /// threshold override below N(||y|| + L) serves as a negative control.
  bool verify_choice_independence(const Pattern& y, int trials, std::optional<int> threshold = std::nullopt) {
    const int n = threshold.value_or(threshold_for(y));
    const auto gs = far_elements(n, 2 * n + 6, static_cast<std::size_t>(trials));
    if (static_cast<int>(gs.size()) < std::min(trials, 2))
      throw Error(ErrorKind::InsufficientRadius, "fewer than two far elements found");
    const Element b = transfer(y);
    return std::all_of(gs.begin(), gs.end(), [&](const Element& g) { return transfer_with(g, y) == b; });
  }

  /// c(g, y) = b(g y) phi(g) b(y)^-1, checked directly and through an
  /// auxiliary g~ far from both 1 and g.
  bool verify_cohomology(const Element& g, const Pattern& y) {
    const Pattern gy = act(G_, c_.alphabet(), g, y);
    const Element by = transfer(y);
    const Element bgy = transfer(gy);
    const Element lhs = evaluate(c_, g, y);
    if (lhs != H_.mul(bgy, phi(g), H_.inv(by))) return false;

    const int n1 = threshold_for(y);
    const int n2 = threshold_for(gy);
    const int n = std::max(n1, n2) + norm_of(coset_of(G_, g)) + norm_of(coset_of(G_, G_.inv(g)));
    const CosetGraph& graph_n = graph(n);
    auto beyond = [&](const Element& e, int t) {
      auto a = graph_n.norm(coset_of(G_, e));
      return !a || *a > t;
    };
    const Element g_inv = G_.inv(g);
    std::optional<Element> tilde;
    std::vector<std::pair<Element, int>> queue{{G_.identity(), 0}};
    std::unordered_set<Element, ElementHash> seen{G_.identity()};
    for (std::size_t head = 0; head < queue.size() && !tilde; ++head) {
      const auto [e, len] = queue[head];
      if (beyond(e, n1) && beyond(G_.inv(e), n1) && beyond(G_.mul(e, g_inv), n2) && beyond(G_.mul(g, G_.inv(e)), n2))
        tilde = e;
      if (len >= 2 * n + 4) continue;
      for (Letter s = 0; s < G_.num_letters(); ++s) {
        Element next = G_.mul(e, G_.letter(s));
        if (seen.insert(next).second) queue.emplace_back(std::move(next), len + 1);
      }
    }
    if (!tilde) throw Error(ErrorKind::NotFound, "no auxiliary element for the cohomology check");
    const Element tg = G_.mul(*tilde, g_inv);
    const Element by_t = transfer_with(*tilde, y);
    const Element bgy_t = transfer_with(tg, gy);
    return by_t == by && bgy_t == bgy;
  }

  /// Transfer values agree on random pairs that agree on B(3L).
  bool verify_locality_3L(int trials, std::mt19937_64& rng) {
    const int L = c_.window();
    const auto inner = graph(3 * L + 2).ball(3 * L, base_coset());
    const std::set<CosetId> inner_set(inner.begin(), inner.end());
    const auto outer = graph(3 * L + 2).ball(3 * L + 2, base_coset());
    const Alphabet& X = c_.alphabet();
    for (int t = 0; t < trials; ++t) {
      Pattern y, y2;
      for (const auto& v : outer) {
        const auto a = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(X.size()));
        y.set(v, a, X.x0());
        y2.set(v, inner_set.count(v) ? a : static_cast<Symbol>(rng() % static_cast<std::uint64_t>(X.size())), X.x0());
      }
      const Element b = transfer(y);
      if (transfer(y2) != b) return false;
      if (transfer(restrict(y, inner_set, X.x0())) != b) return false;
    }
    return true;
  }

  static constexpr int kMaxRadius = 64;

 private:
  const CocycleSpec& c_;
  Group G_;
  Group H_;
  std::unique_ptr<CosetGraph> graph_;
  CapacityTable capacity_;
  std::map<int, Element> far_cache_;
};

struct TrivializeOptions {
  int r_max = 5;
  int margin = 5;
  int relation_samples = 200;
  int sweep_cases = 200;
  int sweep_word_length = 4;
  int sweep_pattern_norm = 3;
  int far_trials = 5;
  int choice_patterns = 10;
  int locality_pairs = 20;
  std::uint64_t store_cap = std::uint64_t{1} << 16;
  std::uint64_t stream_cap = std::uint64_t{1} << 26;
  int sampled_patterns = 20000;
  std::uint64_t seed = 1;
  std::function<void(const std::string&)> on_stage;  // called as each stage starts
};

struct TransferTable {
  enum class Mode { Stored, Streamed, Sampled };

  int L = 0;
  std::vector<Element> phi;          // per generator of G
  std::vector<CosetId> frame;        // B(3L), sorted
  std::map<std::uint64_t, Element> b_entries;  // dense index over frame; filled in Stored mode
  Mode mode = Mode::Stored;
  std::uint64_t patterns_total = 0;
  std::uint64_t patterns_evaluated = 0;
  std::map<int, Element> far_elements;  // threshold -> g_y
  CapacityTable capacity;
};

struct TrivializeReport {
  std::string ends;
  bool fixed_point = false;
  bool alphabet_action = false;
  RelationReport relations;
  bool phi_homomorphism = false;
  bool b_trivial_at_zero = false;
  std::optional<bool> planted_offset_constant;  // b0(y) b(y) equals b0(0)
  std::uint64_t planted_offset_failures = 0;
  int sweep_cases = 0;
  int sweep_failures = 0;
  int tilde_failures = 0;
  int table_failures = 0;
  bool choice_independence = false;
  bool locality_3L = false;
  double seconds = 0;

  bool ok() const {
    return fixed_point && alphabet_action && relations.ok() && phi_homomorphism && b_trivial_at_zero &&
           planted_offset_constant.value_or(true) && sweep_failures == 0 && tilde_failures == 0 &&
           table_failures == 0 && choice_independence && locality_3L;
  }
};

struct TrivializeResult {
  TransferTable table;
  TrivializeReport report;
};

namespace detail {

inline const char* mode_name(TransferTable::Mode m) {
  switch (m) {
    case TransferTable::Mode::Stored: return "stored";
    case TransferTable::Mode::Streamed: return "streamed";
    case TransferTable::Mode::Sampled: return "sampled";
  }
  return "?";
}

}  // namespace detail

/// Runs every step of the trivialization and the checks around it.
/// Throws NotOneEnded before any transfer work on pairs that are not one-ended.
inline TrivializeResult trivialize(const CocycleSpec& c, const TrivializeOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const Group& G = c.group();
  const Group& H = c.target();
  const Alphabet& X = c.alphabet();
  TrivializeResult out;
  TrivializeReport& rep = out.report;
  TransferTable& tab = out.table;
  auto stage = [&](const char* name) {
    if (opt.on_stage) opt.on_stage(name);
  };

  stage("ends");
  const EndsReport ends = estimate_ends(G, opt.r_max, opt.margin);
  rep.ends = ends.estimate.str();
  if (!(ends.estimate.kind == EndsEstimate::Kind::Exact && ends.estimate.k == 1))
    throw Error(ErrorKind::NotOneEnded, "ends estimate is " + rep.ends);

  stage("alphabet");
  rep.alphabet_action = alphabet_is_valid(G, X) && verify_alphabet_homomorphism(G, X, 3);
  rep.fixed_point = verify_coinduced_fixed_point(G, X, X.x0(), 3);
  if (!rep.alphabet_action || !rep.fixed_point) throw Error(ErrorKind::Config, "alphabet is not a K-action fixing x0");

  stage("relations");
  rep.relations = verify_relations(c, opt.relation_samples, opt.seed);
  if (!rep.relations.ok())
    throw Error(ErrorKind::NotACocycle, std::to_string(rep.relations.violation_count) + " relator evaluations differ from 1");

  stage("phi");
  Trivializer tz(c);
  const int L = c.window();
  tab.L = L;
  for (int gen = 0; gen < G.num_gens(); ++gen) tab.phi.push_back(tz.phi(G.letter(make_letter(gen, false))));
  rep.phi_homomorphism = true;
  for (const auto& r : G.relators()) rep.phi_homomorphism = rep.phi_homomorphism && tz.phi(G.from_letters(r)).is_identity();
  {
    // phi(g1 g2) = phi(g1) phi(g2) on short elements.
    const auto ball = word_ball(G, 2);
    for (const auto& a : ball)
      for (const auto& b : ball)
        rep.phi_homomorphism = rep.phi_homomorphism && tz.phi(G.mul(a.element, b.element)) ==
                                                           H.mul(tz.phi(a.element), tz.phi(b.element));
  }
  stage("transfer");
  rep.b_trivial_at_zero = tz.transfer(Pattern{}).is_identity();

  // Tabulate b over B(3L). Every pattern there has norm <= 3L.
  tab.frame = tz.graph(3 * L).ball(3 * L, base_coset());
  Frame frame(tab.frame);
  std::vector<int> cell_norm;
  for (const auto& v : tab.frame) cell_norm.push_back(*tz.graph(3 * L).norm(v));
  HArith arith(H);
  const auto ids = intern_tables(c, arith);
  std::vector<std::unique_ptr<CompiledWord>> by_norm;
  std::vector<int> phi_ids;
  for (int n = 0; n <= 3 * L; ++n) {
    const Element& g = tz.far_element(tz.capacity_at(n + L));
    by_norm.push_back(std::make_unique<CompiledWord>(c, ids, g.letters(), frame, false));
    phi_ids.push_back(arith.id(tz.phi(g)));
  }
  const auto& planted = c.planted();
  std::vector<int> b0_pos;
  int b0_zero = 0;
  if (planted) {
    for (const auto& v : planted->b0_cells) b0_pos.push_back(frame.find(v));
    b0_zero = arith.id(planted->b0_table[0]);
    rep.planted_offset_constant = true;
  }
  std::vector<int> b0_ids;
  if (planted)
    for (const auto& h : planted->b0_table) b0_ids.push_back(arith.id(h));

  const std::uint64_t nsym = static_cast<std::uint64_t>(X.size());
  auto b_of_dense = [&](const std::vector<Symbol>& dense) {
    int norm = 0;
    for (std::size_t i = 0; i < dense.size(); ++i)
      if (dense[i] != X.x0()) norm = std::max(norm, cell_norm[i]);
    return arith.mul(arith.inv(by_norm[static_cast<std::size_t>(norm)]->evaluate(dense, arith)),
                     phi_ids[static_cast<std::size_t>(norm)]);
  };
  auto check_planted = [&](const std::vector<Symbol>& dense, int b) {
    if (!planted) return;
    std::uint64_t idx = 0, mult = 1;
    for (int p : b0_pos) {
      idx += static_cast<std::uint64_t>(dense[static_cast<std::size_t>(p)]) * mult;
      mult *= nsym;
    }
    if (arith.mul(b0_ids[idx], b) != b0_zero) {
      ++rep.planted_offset_failures;
      rep.planted_offset_constant = false;
    }
  };

  tab.patterns_total = checked_pow(nsym, tab.frame.size(), std::numeric_limits<std::uint64_t>::max() / 2);
  std::vector<Symbol> dense(tab.frame.size(), 0);
  if (tab.patterns_total <= opt.stream_cap) {
    tab.mode = tab.patterns_total <= opt.store_cap ? TransferTable::Mode::Stored : TransferTable::Mode::Streamed;
    for (std::uint64_t idx = 0; idx < tab.patterns_total; ++idx) {
      const int b = b_of_dense(dense);
      check_planted(dense, b);
      if (tab.mode == TransferTable::Mode::Stored) tab.b_entries.emplace(idx, arith.element(b));
      for (auto& s : dense) {  // odometer step
        if (++s < X.size()) break;
        s = 0;
      }
    }
    tab.patterns_evaluated = tab.patterns_total;
  } else {
    tab.mode = TransferTable::Mode::Sampled;
    std::mt19937_64 rng(opt.seed);
    for (int i = 0; i < opt.sampled_patterns; ++i) {
      for (auto& s : dense) s = static_cast<Symbol>(rng() % nsym);
      check_planted(dense, b_of_dense(dense));
    }
    tab.patterns_evaluated = static_cast<std::uint64_t>(opt.sampled_patterns);
  }

  // Extended b: b(y) := b(restriction of y to B(3L)).
  auto extended_b = [&](const Pattern& y) -> Element {
    const Pattern bar = restrict(y, tab.frame, X.x0());
    if (tab.mode == TransferTable::Mode::Stored) return tab.b_entries.at(dense_index(bar, tab.frame, X));
    return arith.element(b_of_dense(frame.dense(bar, X.x0())));
  };

  std::mt19937_64 rng(opt.seed ^ 0x5eedu);
  const auto pattern_cells = tz.graph(opt.sweep_pattern_norm).ball(opt.sweep_pattern_norm, base_coset());
  auto random_pattern = [&] {
    Pattern y;
    for (const auto& v : pattern_cells)
      if (rng() % 2 == 0) y.set(v, static_cast<Symbol>(rng() % nsym), X.x0());
    return y;
  };
  auto random_element = [&] {
    std::vector<Letter> w(rng() % static_cast<std::uint64_t>(opt.sweep_word_length + 1));
    for (auto& l : w) l = static_cast<Letter>(rng() % static_cast<std::uint64_t>(G.num_letters()));
    return G.from_letters(w);
  };

  stage("sweep");
  for (int i = 0; i < opt.sweep_cases; ++i) {
    const Element g = random_element();
    const Pattern y = random_pattern();
    const Pattern gy = act(G, X, g, y);
    ++rep.sweep_cases;
    const Element lhs = evaluate(c, g, y);
    const Element ph = tz.phi(g);
    if (lhs != H.mul(extended_b(gy), ph, H.inv(extended_b(y)))) ++rep.sweep_failures;
    if (extended_b(y) != tz.transfer(y) || extended_b(gy) != tz.transfer(gy)) ++rep.table_failures;
    if (!tz.verify_cohomology(g, y)) ++rep.sweep_failures;
    // Truncation at B(|g^-1 K| + 3L) leaves c(g, .) and the transfer terms unchanged.
    const int reach = tz.norm_of(coset_of(G, G.inv(g))) + 3 * L;
    const Pattern tilde = restrict(y, tz.graph(reach).ball(reach, base_coset()), X.x0());
    const Pattern g_tilde = act(G, X, g, tilde);
    if (evaluate(c, g, tilde) != lhs ||
        lhs != H.mul(extended_b(g_tilde), ph, H.inv(extended_b(tilde))) || extended_b(g_tilde) != extended_b(gy))
      ++rep.tilde_failures;
  }

  stage("choice");
  rep.choice_independence = true;
  for (int i = 0; i < opt.choice_patterns; ++i)
    rep.choice_independence = rep.choice_independence && tz.verify_choice_independence(i == 0 ? Pattern{} : random_pattern(), opt.far_trials);
  stage("locality");
  rep.locality_3L = tz.verify_locality_3L(opt.locality_pairs, rng);

  tab.far_elements = tz.far_cache();
  tab.capacity = tz.capacity_table();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline std::string format_report(const CocycleSpec& c, const TrivializeResult& r) {
  const Group& G = c.group();
  const Group& H = c.target();
  const auto& rep = r.report;
  const auto& tab = r.table;
  std::ostringstream os;
  auto yes = [](bool b) { return b ? "pass" : "FAIL"; };
  os << "ends estimate: " << rep.ends << "\n";
  os << "alphabet action: " << yes(rep.alphabet_action) << "\n";
  os << "fixed point x0: " << yes(rep.fixed_point) << "\n";
  os << "relations: " << yes(rep.relations.ok()) << " (" << rep.relations.relators_checked << " relators, "
     << rep.relations.patterns_checked << " patterns, " << (rep.relations.exhaustive ? "exhaustive" : "sampled") << ")\n";
  os << "window L: " << tab.L << "\n";
  for (int gen = 0; gen < G.num_gens(); ++gen)
    os << "phi(" << G.gen_name(gen) << ") = " << H.format(tab.phi[static_cast<std::size_t>(gen)]) << "\n";
  os << "phi homomorphism: " << yes(rep.phi_homomorphism) << "\n";
  for (const auto& [rr, e] : tab.capacity.entries()) os << "N(" << rr << ") = " << e.N << " (R = " << e.R << ")\n";
  for (const auto& [n, g] : tab.far_elements) os << "g for threshold " << n << ": " << G.format(g) << "\n";
  os << "b(0) = 1: " << yes(rep.b_trivial_at_zero) << "\n";
  os << "B(3L) patterns: " << tab.patterns_evaluated << " of " << tab.patterns_total << " (" << detail::mode_name(tab.mode)
     << ")\n";
  if (rep.planted_offset_constant)
    os << "planted offset b0(y) b(y) constant: " << yes(*rep.planted_offset_constant) << " ("
       << rep.planted_offset_failures << " failures)\n";
  os << "sweep: " << rep.sweep_cases << " cases, " << rep.sweep_failures << " identity failures, " << rep.tilde_failures
     << " truncation failures, " << rep.table_failures << " table mismatches\n";
  os << "choice independence: " << yes(rep.choice_independence) << "\n";
  os << "locality through B(3L): " << yes(rep.locality_3L) << "\n";
  os << "verdict: " << (rep.ok() ? "pass" : "FAIL") << "\n";
  return os.str();
}

}  // namespace relend
