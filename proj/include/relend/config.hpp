#pragma once

// JSON forms of group specs, alphabets, patterns, cocycle tables and
// transfer tables.
//
//   group:    {"family":"zd","d":3,"k_coords":[0]}, {"family":"free","rank":2,"k":"trivial"},
//             {"family":"bs","m":1,"n":2}, {"family":"cyclic","order":2},
//             {"family":"direct_product","factors":[g1, g2]}
//   alphabet: {"symbols":["0","1"],"x0":"0","alpha":{"x":[0,1]}}
//   pattern:  [["a b", "1"], ["B", "1"]]
//   cocycle:  {"window":1,"H":{...},"tables":{"a":[["1=0;a=1;...","h-word"],...],...}}

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relend/cocycle.hpp"
#include "relend/trivializer.hpp"

namespace relend::config {

using json = nlohmann::ordered_json;

namespace detail {

inline const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(ErrorKind::Config, std::string("missing field: ") + name);
  return j.at(name);
}

template <class T>
T get(const json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("bad field ") + name + ": " + e.what());
  }
}

inline Element parse_element(const Group& G, const std::string& word) {
  try {
    return G.parse(word);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, "bad word '" + word + "': " + e.what());
  }
}

}  // namespace detail

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, path + ": " + e.what());
  }
}

inline GroupSpec group_from_json(const json& j) {
  const auto family = detail::get<std::string>(j, "family");
  if (family == "zd") {
    const int d = detail::get<int>(j, "d");
    std::vector<int> k;
    if (j.contains("k_coords")) k = detail::get<std::vector<int>>(j, "k_coords");
    if (d < 0) throw Error(ErrorKind::Config, "zd needs d >= 0");
    for (int c : k)
      if (c < 0 || c >= d) throw Error(ErrorKind::Config, "k_coords out of range");
    return GroupSpec::zd(d, k);
  }
  if (family == "free") {
    if (j.contains("k") && detail::get<std::string>(j, "k") != "trivial")
      throw Error(ErrorKind::UnsupportedFamily, "free groups support only k = trivial");
    const int r = detail::get<int>(j, "rank");
    if (r < 0) throw Error(ErrorKind::Config, "free needs rank >= 0");
    return GroupSpec::free(r);
  }
  if (family == "bs") {
    const int m = detail::get<int>(j, "m");
    const int n = detail::get<int>(j, "n");
    if (m != 1 || n < 1) throw Error(ErrorKind::UnsupportedFamily, "bs supports m = 1, n >= 1");
    return GroupSpec::bs(m, n);
  }
  if (family == "cyclic") {
    const int order = detail::get<int>(j, "order");
    if (order < 1) throw Error(ErrorKind::Config, "cyclic needs order >= 1");
    return GroupSpec::cyclic(order);
  }
  if (family == "direct_product") {
    const auto& f = detail::field(j, "factors");
    if (!f.is_array() || f.size() != 2) throw Error(ErrorKind::Config, "direct_product needs two factors");
    return GroupSpec::direct_product(group_from_json(f[0]), group_from_json(f[1]));
  }
  throw Error(ErrorKind::UnsupportedFamily, "unknown family: " + family);
}

inline json group_to_json(const GroupSpec& s) {
  using F = GroupSpec::Family;
  switch (s.family) {
    case F::zd: return {{"family", "zd"}, {"d", s.d}, {"k_coords", s.k_coords}};
    case F::free: return {{"family", "free"}, {"rank", s.rank}, {"k", "trivial"}};
    case F::bs: return {{"family", "bs"}, {"m", s.m}, {"n", s.n}};
    case F::cyclic: return {{"family", "cyclic"}, {"order", s.order}};
    case F::direct_product: return {{"family", "direct_product"}, {"factors", {group_to_json(*s.left), group_to_json(*s.right)}}};
  }
  return {};
}

inline Alphabet alphabet_from_json(const Group& G, const json& j) {
  const auto symbols = detail::get<std::vector<std::string>>(j, "symbols");
  if (symbols.empty()) throw Error(ErrorKind::Config, "alphabet must be nonempty");
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i] == name) return static_cast<Symbol>(i);
    throw Error(ErrorKind::Config, "unknown symbol: " + name);
  };
  const Symbol x0 = j.contains("x0") ? index_of(detail::get<std::string>(j, "x0")) : 0;
  std::vector<std::vector<int>> perms(static_cast<std::size_t>(G.num_gens()));
  if (j.contains("alpha")) {
    const auto& alpha = detail::field(j, "alpha");
    if (!alpha.is_object()) throw Error(ErrorKind::Config, "alpha must be an object");
    for (const auto& [name, perm] : alpha.items()) {
      auto l = G.parse_letter(name);
      if (!l || is_inverse_letter(*l)) throw Error(ErrorKind::Config, "alpha key is not a generator: " + name);
      try {
        perms[static_cast<std::size_t>(gen_of(*l))] = perm.get<std::vector<int>>();
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, "bad permutation for " + name);
      }
    }
  }
  Alphabet X(symbols, x0, perms);
  if (!alphabet_is_valid(G, X)) throw Error(ErrorKind::Config, "alphabet is not a K-action fixing x0");
  return X;
}

inline json alphabet_to_json(const Group& G, const Alphabet& X) {
  json alpha = json::object();
  for (int gen = 0; gen < G.num_gens(); ++gen)
    if (!X.gen_is_trivial(gen)) alpha[G.gen_name(gen)] = X.perms()[static_cast<std::size_t>(gen)];
  return {{"symbols", X.symbols()}, {"x0", X.name(X.x0())}, {"alpha", alpha}};
}

inline Pattern pattern_from_json(const Group& G, const Alphabet& X, const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Config, "pattern must be a list of [word, symbol] pairs");
  Pattern y;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw Error(ErrorKind::Config, "pattern entry must be [word, symbol]");
    auto s = X.parse(e[1].get<std::string>());
    if (!s) throw Error(ErrorKind::Config, "unknown symbol: " + e[1].get<std::string>());
    y.set(coset_of(G, detail::parse_element(G, e[0].get<std::string>())), *s, X.x0());
  }
  return y;
}

inline json pattern_to_json(const Group& G, const Alphabet& X, const Pattern& y) {
  json out = json::array();
  for (const auto& [v, s] : y.entries()) out.push_back({G.format(v.rep), X.name(s)});
  return out;
}

/// "word=sym;word=sym;..." over the given cells, in their order.
inline std::string cells_key(const Group& G, const Alphabet& X, const std::vector<CosetId>& cells, std::uint64_t idx) {
  const Pattern y = pattern_from_index(idx, cells, X);
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ';';
    out += G.format(c.rep) + "=" + X.name(y.get(c, X.x0()));
  }
  return out;
}

inline std::uint64_t parse_cells_key(const Group& G, const Alphabet& X, const std::vector<CosetId>& cells,
                                     const std::string& key) {
  Pattern y;
  std::size_t seen = 0;
  std::istringstream in(key);
  std::string item;
  while (std::getline(in, item, ';')) {
    const auto eq = item.rfind('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, "bad pattern key: " + key);
    const auto v = coset_of(G, detail::parse_element(G, item.substr(0, eq)));
    if (std::find(cells.begin(), cells.end(), v) == cells.end())
      throw Error(ErrorKind::Config, "pattern key cell outside window: " + item);
    auto s = X.parse(item.substr(eq + 1));
    if (!s) throw Error(ErrorKind::Config, "bad symbol in pattern key: " + item);
    y.set(v, *s, X.x0());
    ++seen;
  }
  if (seen != cells.size()) throw Error(ErrorKind::Config, "pattern key does not cover the window: " + key);
  return dense_index(y, cells, X);
}

inline json cocycle_to_json(const CocycleSpec& c) {
  const Group& G = c.group();
  const Group& H = c.target();
  const Alphabet& X = c.alphabet();
  json tables = json::object();
  for (Letter s = 0; s < G.num_letters(); ++s) {
    json rows = json::array();
    for (std::uint64_t i = 0; i < c.window_patterns(); ++i) rows.push_back({c.key(i), H.format(c.table(s)[i])});
    tables[G.letter_name(s)] = rows;
  }
  json out = {{"window", c.window()}, {"H", group_to_json(H.spec())}, {"tables", tables}};
  if (const auto& p = c.planted()) {
    json b0 = json::array();
    for (std::uint64_t i = 0; i < p->b0_table.size(); ++i)
      b0.push_back({cells_key(G, X, p->b0_cells, i), H.format(p->b0_table[i])});
    json phi0 = json::object();
    for (int gen = 0; gen < G.num_gens(); ++gen) phi0[G.gen_name(gen)] = H.format(p->phi0[static_cast<std::size_t>(gen)]);
    out["planted"] = {{"b0_window", p->b0_window}, {"b0", b0}, {"phi0", phi0}};
  }
  return out;
}

/// H defaults to the one given by the caller if the file has none.
inline CocycleSpec cocycle_from_json(const Group& G, const Alphabet& X, const json& j, const GroupSpec& default_h) {
  const int L = detail::get<int>(j, "window");
  const Group H(j.contains("H") ? group_from_json(j.at("H")) : default_h);
  const auto cells = CosetGraph(G, std::max(L, 0)).ball(std::max(L, 0), base_coset());
  const std::uint64_t m = checked_pow(static_cast<std::uint64_t>(X.size()), cells.size(), CocycleSpec::kMaxTable);
  if (L < 0 || m > CocycleSpec::kMaxTable) throw Error(ErrorKind::Config, "window out of range");
  const auto& tj = detail::field(j, "tables");
  std::vector<std::vector<Element>> tables(static_cast<std::size_t>(G.num_letters()));
  for (Letter s = 0; s < G.num_letters(); ++s) {
    const auto name = G.letter_name(s);
    if (!tj.contains(name)) throw Error(ErrorKind::Config, "no table for letter " + name);
    std::vector<std::optional<Element>> rows(m);
    for (const auto& row : tj.at(name)) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_string() || !row[1].is_string())
        throw Error(ErrorKind::Config, "table row must be [pattern-key, h-word]");
      const auto idx = parse_cells_key(G, X, cells, row[0].get<std::string>());
      rows[idx] = detail::parse_element(H, row[1].get<std::string>());
    }
    for (auto& r : rows) {
      if (!r) throw Error(ErrorKind::Config, "table for " + name + " is not total");
      tables[static_cast<std::size_t>(s)].push_back(std::move(*r));
    }
  }
  CocycleSpec c(G, X, H, L, std::move(tables));
  if (j.contains("planted")) {
    const auto& pj = j.at("planted");
    PlantedData p;
    p.b0_window = detail::get<int>(pj, "b0_window");
    p.b0_cells = CosetGraph(G, p.b0_window).ball(p.b0_window, base_coset());
    const std::uint64_t n = checked_pow(static_cast<std::uint64_t>(X.size()), p.b0_cells.size(), CocycleSpec::kMaxTable);
    std::vector<std::optional<Element>> b0(n);
    for (const auto& row : detail::field(pj, "b0")) {
      if (!row.is_array() || row.size() != 2) throw Error(ErrorKind::Config, "b0 row must be [pattern-key, h-word]");
      b0[parse_cells_key(G, X, p.b0_cells, row[0].get<std::string>())] =
          detail::parse_element(H, row[1].get<std::string>());
    }
    for (auto& e : b0) {
      if (!e) throw Error(ErrorKind::Config, "b0 table is not total");
      p.b0_table.push_back(std::move(*e));
    }
    const auto& phi = detail::field(pj, "phi0");
    for (int gen = 0; gen < G.num_gens(); ++gen)
      p.phi0.push_back(detail::parse_element(H, detail::get<std::string>(phi, G.gen_name(gen).c_str())));
    c.set_planted(std::move(p));
  }
  return c;
}

inline json transfer_to_json(const CocycleSpec& c, const TrivializeResult& r) {
  const Group& G = c.group();
  const Group& H = c.target();
  const auto& t = r.table;
  json phi = json::object();
  for (int gen = 0; gen < G.num_gens(); ++gen) phi[G.gen_name(gen)] = H.format(t.phi[static_cast<std::size_t>(gen)]);
  json b = json::object();
  for (const auto& [idx, h] : t.b_entries) b[cells_key(G, c.alphabet(), t.frame, idx)] = H.format(h);
  json frame = json::array();
  for (const auto& v : t.frame) frame.push_back(G.format(v.rep));
  return {{"window", t.L},
          {"frame", frame},
          {"mode", relend::detail::mode_name(t.mode)},
          {"patterns_total", t.patterns_total},
          {"patterns_evaluated", t.patterns_evaluated},
          {"phi", phi},
          {"b", b},
          {"ok", r.report.ok()}};
}

/// A run config: a bare group spec, or {"group":..., "alphabet":..., "H":...}.
struct RunConfig {
  GroupSpec group;
  std::optional<json> alphabet;
  GroupSpec H = GroupSpec::cyclic(2);
};

inline RunConfig run_config_from_json(const json& j) {
  RunConfig cfg;
  if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  if (j.contains("family")) {
    cfg.group = group_from_json(j);
    return cfg;
  }
  cfg.group = group_from_json(detail::field(j, "group"));
  if (j.contains("alphabet")) cfg.alphabet = j.at("alphabet");
  if (j.contains("H")) cfg.H = group_from_json(j.at("H"));
  return cfg;
}

inline Alphabet run_alphabet(const RunConfig& cfg, const Group& G) {
  return cfg.alphabet ? alphabet_from_json(G, *cfg.alphabet) : Alphabet::trivial(G, 2);
}

}  // namespace relend::config
