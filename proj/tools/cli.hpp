#pragma once

// Command dispatch for the relend binary. Exit codes: 0 when every check
// passes, 1 when a mathematical check fails, 2 on configuration errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "relend/config.hpp"
#include "relend/ends.hpp"
#include "relend/obstructor.hpp"
#include "relend/trivializer.hpp"

namespace relend::cli {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

struct Options {
  std::string config;
  int radius = -1;
  int rmax = 5;
  int margin = 5;
  std::uint64_t seed = 1;
  std::string out;
  std::string csv;
  std::string report;
  bool plant = false;
  int b0_window = 0;
  int cap = 22;
  std::string cocycle;
  std::string cocycle_out;
  std::string set = "halfline";
};

namespace detail {

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw Error(ErrorKind::Config, "cannot write " + path);
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

struct Loaded {
  config::RunConfig cfg;
  Group G;
  Alphabet X;
};

inline Loaded load(const Options& o) {
  if (o.config.empty()) throw Error(ErrorKind::Config, "--config is required");
  auto cfg = config::run_config_from_json(config::load_file(o.config));
  Group G(cfg.group);
  Alphabet X = config::run_alphabet(cfg, G);
  return {std::move(cfg), std::move(G), std::move(X)};
}

inline CocycleSpec load_cocycle(const Options& o, const Loaded& l) {
  if (o.plant == !o.cocycle.empty()) throw Error(ErrorKind::Config, "give exactly one of --plant and --cocycle");
  if (o.plant) {
    if (o.b0_window < 0) throw Error(ErrorKind::Config, "--b0-window must be >= 0");
    return plant(l.G, l.X, Group(l.cfg.H), o.b0_window, o.seed);
  }
  return config::cocycle_from_json(l.G, l.X, config::load_file(o.cocycle), l.cfg.H);
}

inline int graph(const Options& o, std::ostream& out) {
  const auto l = load(o);
  const int R = o.radius < 0 ? 3 : o.radius;
  const CosetGraph g(l.G, R);
  std::size_t edges = 0;
  for (int i = 0; i < static_cast<int>(g.size()); ++i) edges += g.edges_at(i).size();
  out << "group: " << config::group_to_json(l.G.spec()).dump() << "\n";
  out << "radius: " << R << "\nvertices: " << g.size() << "\nedges: " << edges << "\n";
  if (!o.out.empty()) {
    std::ostringstream dot;
    dot << "digraph coset_graph {\n";
    for (int i = 0; i < static_cast<int>(g.size()); ++i)
      dot << "  v" << i << " [label=\"" << l.G.format(g.vertex(i).rep) << "\"];\n";
    for (int i = 0; i < static_cast<int>(g.size()); ++i)
      for (const auto& e : g.edges_at(i))
        dot << "  v" << i << " -> v" << e.target << " [label=\"" << l.G.letter_name(e.label) << "\"];\n";
    dot << "}\n";
    write_file(o.out, dot.str());
  }
  if (!o.csv.empty()) {
    std::ostringstream csv;
    csv << "vertex,norm,degree\n";
    for (int i = 0; i < static_cast<int>(g.size()); ++i)
      csv << csv_quote(l.G.format(g.vertex(i).rep)) << "," << g.norm_at(i) << "," << g.full_degree_at(i) << "\n";
    write_file(o.csv, csv.str());
  }
  return kOk;
}

inline int ends(const Options& o, std::ostream& out) {
  const auto l = load(o);
  const CosetGraph g(l.G, o.rmax + o.margin + 1);
  const auto rep = estimate_ends(g, o.rmax, o.margin);
  std::ostringstream csv;
  csv << "r,R,components,sphere_touching,N_r\n";
  out << "group: " << config::group_to_json(l.G.spec()).dump() << "\n";
  out << "estimate: " << rep.estimate.str() << "\n";
  for (const auto& row : rep.rows) {
    std::string n;
    try {
      n = std::to_string(capacity(g, row.r, g.radius()).N);
    } catch (const Error&) {
    }
    csv << row.r << "," << row.R << "," << row.components << "," << row.sphere_touching << "," << n << "\n";
    out << "r=" << row.r << " R=" << row.R << " components=" << row.components
        << " sphere_touching=" << row.sphere_touching << " N_r=" << (n.empty() ? "-" : n) << "\n";
  }
  if (!o.csv.empty()) write_file(o.csv, csv.str());
  return kOk;
}

inline int verify(const Options& o, std::ostream& out) {
  const auto l = load(o);
  const auto c = load_cocycle(o, l);
  if (!o.cocycle_out.empty()) write_file(o.cocycle_out, config::cocycle_to_json(c).dump(2) + "\n");
  const bool fixed = verify_coinduced_fixed_point(l.G, l.X, l.X.x0());
  const bool hom = verify_alphabet_homomorphism(l.G, l.X, 4);
  const auto rel = verify_relations(c, 200, o.seed);
  std::ostringstream rep;
  rep << "seed: " << o.seed << "\n";
  rep << "alphabet action: " << (hom ? "pass" : "FAIL") << "\n";
  rep << "fixed point x0: " << (fixed ? "pass" : "FAIL") << "\n";
  rep << "relations: " << (rel.ok() ? "pass" : "FAIL") << " (" << rel.relators_checked << " relators, "
      << rel.patterns_checked << " patterns, " << (rel.exhaustive ? "exhaustive" : "sampled") << ", "
      << rel.violation_count << " violations)\n";
  for (const auto& v : rel.violations)
    rep << "  violation: " << l.G.format_letters(v.relator) << " at " << config::pattern_to_json(l.G, l.X, v.pattern).dump()
        << " gives " << c.target().format(v.value) << "\n";
  const bool ok = fixed && hom && rel.ok();
  rep << "verdict: " << (ok ? "pass" : "FAIL") << "\n";
  out << rep.str();
  if (!o.report.empty()) write_file(o.report, rep.str());
  return ok ? kOk : kCheckFailed;
}

inline int trivialize_cmd(const Options& o, std::ostream& out) {
  const auto l = load(o);
  const auto c = load_cocycle(o, l);
  if (!o.cocycle_out.empty()) write_file(o.cocycle_out, config::cocycle_to_json(c).dump(2) + "\n");
  TrivializeOptions opt;
  opt.r_max = o.rmax;
  opt.margin = o.margin;
  opt.seed = o.seed;
  const auto r = trivialize(c, opt);
  const std::string rep = "seed: " + std::to_string(o.seed) + "\n" + format_report(c, r);
  out << rep;
  if (!o.report.empty()) write_file(o.report, rep);
  if (!o.out.empty()) write_file(o.out, config::transfer_to_json(c, r).dump(2) + "\n");
  return r.report.ok() ? kOk : kCheckFailed;
}

inline int obstruct(const Options& o, std::ostream& out) {
  const auto l = load(o);
  const Group& G = l.G;
  const int R = o.radius < 0 ? 10 : o.radius;
  const FiniteSubsetCocycle c(G, parse_set(G, o.set), R + 2);
  std::ostringstream rep;
  rep << "seed: " << o.seed << "\nset: " << c.set().name << "\n";
  int reach = 0;
  const CosetGraph probe(G, R + 2);
  for (Letter s = 0; s < G.num_letters(); ++s) {
    rep << "c(" << G.letter_name(s) << ") = " << format_coset_set(G, c.on_letter(s)) << "\n";
    for (const auto& v : c.on_letter(s)) reach = std::max(reach, *probe.norm(v));
  }

  std::mt19937_64 rng(o.seed);
  auto random_element = [&](int max_len) {
    std::vector<Letter> w(rng() % static_cast<std::uint64_t>(max_len + 1));
    for (auto& s : w) s = static_cast<Letter>(rng() % static_cast<std::uint64_t>(G.num_letters()));
    return G.from_letters(w);
  };
  const CosetGraph pattern_ball(G, 3);
  int identity_failures = 0;
  for (int i = 0; i < 500; ++i) {
    const Element g1 = random_element(4);
    const Element g2 = random_element(4);
    Pattern y;
    for (const auto& v : pattern_ball.vertices())
      if (rng() % 2) y.set(v, 1, 0);
    identity_failures += sign_cocycle_identity(c, g1, g2, y) ? 0 : 1;
  }
  const CosetGraph direct(G, 4 + reach + 1);
  int equivariance_failures = 0;
  for (int i = 0; i < 100; ++i) {
    const Element g = random_element(4);
    equivariance_failures += c.value(g) == boundary_set(direct, c.set(), g) ? 0 : 1;
  }
  rep << "sign cocycle identity: " << 500 - identity_failures << " of 500 triples\n";
  rep << "word product vs direct boundary: " << 100 - equivariance_failures << " of 100 elements\n";

  const auto rho = rho_forcing_check(c, R, o.cap);
  rep << "rho at fixed point:";
  for (int gen = 0; gen < G.num_gens(); ++gen) rep << " " << G.gen_name(gen) << "=" << rho.rho[static_cast<std::size_t>(gen)];
  rep << "\n";
  const auto& s = rho.search;
  rep << "search radius " << s.radius << ": " << s.variables << " cells, " << s.constraints << " constraints, "
      << s.components << " components (" << s.free_components << " free)\n";
  if (s.found())
    rep << "witness B = " << format_coset_set(G, *s.witness) << "\n";
  else
    rep << "no witness: " << s.conflict << "\n";
  rep << "verdict: " << rho.verdict << "\n";
  out << rep.str();
  if (!o.report.empty()) write_file(o.report, rep.str());
  const bool ok = identity_failures == 0 && equivariance_failures == 0 && rho.rho_trivial;
  return ok ? kOk : kCheckFailed;
}

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config:
    case ErrorKind::UnsupportedFamily:
      return kConfigError;
    default:
      return kCheckFailed;
  }
}

}  // namespace detail

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"relend: relative ends, coset graphs and cocycles over shifts"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "group or run config (JSON)")->required();
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--report", o.report, "plain-text report path");
  };
  auto cocycle_source = [&](CLI::App* sub) {
    sub->add_option("--cocycle", o.cocycle, "cocycle table (JSON)");
    sub->add_flag("--plant", o.plant, "plant a random trivial cocycle");
    sub->add_option("--b0-window", o.b0_window, "window of the planted b0");
    sub->add_option("--cocycle-out", o.cocycle_out, "write the cocycle used (JSON)");
  };
  auto* graph = app.add_subcommand("graph", "build a coset ball");
  common(graph);
  graph->add_option("--radius", o.radius, "ball radius (default 3)");
  graph->add_option("--out", o.out, "DOT output");
  graph->add_option("--csv", o.csv, "vertex,norm,degree rows");
  auto* ends = app.add_subcommand("ends", "estimate the number of ends");
  common(ends);
  ends->add_option("--rmax", o.rmax, "largest deleted radius");
  ends->add_option("--margin", o.margin, "probe radius minus r");
  ends->add_option("--csv", o.csv, "r,R,components,sphere_touching,N_r rows");
  auto* triv = app.add_subcommand("trivialize", "trivialize a cocycle over a one-ended pair");
  common(triv);
  cocycle_source(triv);
  triv->add_option("--rmax", o.rmax, "largest radius for the ends check");
  triv->add_option("--margin", o.margin, "probe margin for the ends check");
  triv->add_option("--out", o.out, "transfer table (JSON)");
  auto* obs = app.add_subcommand("obstruct", "boundary cocycle of an almost-invariant set");
  common(obs);
  obs->add_option("--set", o.set, "halfline | prefix:<l> | suffix:<l> | finite:<w1>,<w2>");
  obs->add_option("--radius", o.radius, "search radius (default 10)");
  obs->add_option("--cap", o.cap, "largest number of free components");
  auto* ver = app.add_subcommand("verify", "check the cocycle relations");
  common(ver);
  cocycle_source(ver);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (o.radius < -1 || o.rmax < 1 || o.margin < 2 || o.cap < 0)
      throw Error(ErrorKind::Config, "radii must be positive and margin >= 2");
    if (graph->parsed()) return detail::graph(o, out);
    if (ends->parsed()) return detail::ends(o, out);
    if (triv->parsed()) return detail::trivialize_cmd(o, out);
    if (obs->parsed()) return detail::obstruct(o, out);
    return detail::verify(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::exit_code(e.kind());
  }
}

}  // namespace relend::cli
