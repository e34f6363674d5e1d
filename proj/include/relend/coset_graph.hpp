#pragma once

// Finite balls of the coset graph: vertices are cosets gK, and gK has an
// s-labelled edge to g f K for every f in the witness set F_s.

#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "relend/kernel.hpp"

namespace relend {

struct Edge {
  int target = 0;
  Letter label = 0;
};

struct Path {
  std::vector<CosetId> vertices;
  std::vector<Letter> labels;  // labels[i] joins vertices[i] and vertices[i+1]

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

class CosetGraph {
 public:
  CosetGraph(Group G, int radius) : G_(std::move(G)), radius_(radius) {
    if (radius < 0) throw Error(ErrorKind::Config, "radius must be >= 0");
    for (Letter s = 0; s < G_.num_letters(); ++s) witnesses_.push_back(G_.witness_set(s));
    build();
  }

  const Group& group() const { return G_; }
  int radius() const { return radius_; }
  std::size_t size() const { return vertices_.size(); }

  /// Vertices in BFS order; index 0 is the base coset K.
  const std::vector<CosetId>& vertices() const { return vertices_; }
  const CosetId& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  int norm_at(int i) const { return norm_[static_cast<std::size_t>(i)]; }
  int parent_at(int i) const { return parent_[static_cast<std::size_t>(i)]; }
  const std::vector<Edge>& edges_at(int i) const { return adj_[static_cast<std::size_t>(i)]; }

  /// Degree in the whole coset graph, counting edges that leave the ball.
  int full_degree_at(int i) const { return full_degree_[static_cast<std::size_t>(i)]; }

  std::optional<int> index_of(const CosetId& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const CosetId& v) const { return index_.count(v) != 0; }

  /// |vK|, or nullopt when the coset lies beyond the built radius.
  std::optional<int> norm(const CosetId& v) const {
    auto i = index_of(v);
    if (!i) return std::nullopt;
    return norm_at(*i);
  }

  int require_index(const CosetId& v) const {
    auto i = index_of(v);
    if (!i) throw Error(ErrorKind::VertexOutsideBall, G_.format(v.rep));
    return *i;
  }

  /// Distance inside the graph, or nullopt if the ball cannot certify it.
  std::optional<int> distance(const CosetId& u, const CosetId& v) const {
    const int iu = require_index(u);
    const int iv = require_index(v);
    if (iu == iv) return 0;
    const auto dist = bfs_from(iu, -1);
    const int d = dist[static_cast<std::size_t>(iv)];
    if (d < 0) return std::nullopt;
    // Every vertex on a true geodesic has norm <= (|u| + |v| + d) / 2.
    if (norm_at(iu) + norm_at(iv) + d <= 2 * radius_) return d;
    return std::nullopt;
  }

  /// Closed ball of radius r around v.
  std::vector<CosetId> ball(int r, const CosetId& v) const {
    const int iv = require_index(v);
    if (norm_at(iv) + r > radius_)
      throw Error(ErrorKind::InsufficientRadius, "ball of radius " + std::to_string(r) + " needs R >= " +
                                                     std::to_string(norm_at(iv) + r));
    const auto dist = bfs_from(iv, r);
    std::vector<CosetId> out;
    for (std::size_t i = 0; i < dist.size(); ++i)
      if (dist[i] >= 0) out.push_back(vertices_[i]);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<CosetId> neighborhood(int r, const std::vector<CosetId>& T) const {
    std::vector<CosetId> out = T;
    for (const auto& t : T) {
      auto b = ball(r, t);
      out.insert(out.end(), b.begin(), b.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  Path geodesic_to(const CosetId& v) const {
    int i = require_index(v);
    std::vector<int> chain;
    while (i >= 0) {
      chain.push_back(i);
      i = parent_at(i);
    }
    std::reverse(chain.begin(), chain.end());
    return path_of(chain);
  }

  /// Path gamma(-r), ..., gamma(r) with gamma(0) = K, isometric to an
  /// interval; every pairwise distance is checked before returning.
  Path two_sided_geodesic(int r) const {
    if (r < 0 || 2 * r > radius_)
      throw Error(ErrorKind::InsufficientRadius, "two-sided geodesic of half-length " + std::to_string(r));
    std::optional<int> far;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (norm_[i] == 2 * r) {
        far = static_cast<int>(i);
        break;
      }
    }
    if (!far) throw Error(ErrorKind::InsufficientRadius, "no vertex of norm " + std::to_string(2 * r));
    const Path half = geodesic_to(vertex(*far));
    const Element gr_inv = G_.inv(half.vertices[static_cast<std::size_t>(r)].rep);
    std::vector<int> chain;
    for (int n = -r; n <= r; ++n) {
      const CosetId c = coset_of(G_, G_.mul(gr_inv, half.vertices[static_cast<std::size_t>(n + r)].rep));
      chain.push_back(require_index(c));
    }
    Path p = path_of(chain);
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
      for (std::size_t j = i + 1; j < p.vertices.size(); ++j) {
        auto d = distance(p.vertices[i], p.vertices[j]);
        if (!d || *d != static_cast<int>(j - i)) throw Error(ErrorKind::Internal, "two-sided path is not geodesic");
      }
    }
    return p;
  }

  /// Vertices at distance <= r from any vertex in `from`, as a mask over indices.
  std::vector<char> neighborhood_mask(const std::vector<int>& from, int r) const {
    std::vector<int> dist(vertices_.size(), -1);
    std::deque<int> q;
    for (int i : from) {
      if (dist[static_cast<std::size_t>(i)] < 0) {
        dist[static_cast<std::size_t>(i)] = 0;
        q.push_back(i);
      }
    }
    walk(dist, q, r);
    std::vector<char> mask(vertices_.size(), 0);
    for (std::size_t i = 0; i < dist.size(); ++i) mask[i] = dist[i] >= 0 ? 1 : 0;
    return mask;
  }

 private:
  std::vector<CosetId> neighbours_of(const CosetId& v, Letter s) const {
    std::vector<CosetId> out;
    for (const auto& f : witnesses_[static_cast<std::size_t>(s)]) {
      CosetId c = coset_of(G_, G_.mul(v.rep, f));
      if (c != v && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
    return out;
  }

  void build() {
    add_vertex(base_coset(), 0, -1);
    for (std::size_t head = 0; head < vertices_.size(); ++head) {
      if (norm_[head] >= radius_) continue;
      for (Letter s = 0; s < G_.num_letters(); ++s) {
        for (auto& c : neighbours_of(vertices_[head], s)) {
          if (!index_.count(c)) add_vertex(std::move(c), norm_[head] + 1, static_cast<int>(head));
        }
      }
    }
    adj_.assign(vertices_.size(), {});
    full_degree_.assign(vertices_.size(), 0);
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      for (Letter s = 0; s < G_.num_letters(); ++s) {
        for (const auto& c : neighbours_of(vertices_[i], s)) {
          ++full_degree_[i];
          auto it = index_.find(c);
          if (it != index_.end()) adj_[i].push_back({it->second, s});
        }
      }
    }
  }

  void add_vertex(CosetId c, int norm, int parent) {
    index_.emplace(c, static_cast<int>(vertices_.size()));
    vertices_.push_back(std::move(c));
    norm_.push_back(norm);
    parent_.push_back(parent);
  }

  void walk(std::vector<int>& dist, std::deque<int>& q, int limit) const {
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      const int du = dist[static_cast<std::size_t>(u)];
      if (limit >= 0 && du >= limit) continue;
      for (const auto& e : adj_[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(e.target)] < 0) {
          dist[static_cast<std::size_t>(e.target)] = du + 1;
          q.push_back(e.target);
        }
      }
    }
  }

  std::vector<int> bfs_from(int start, int limit) const {
    std::vector<int> dist(vertices_.size(), -1);
    std::deque<int> q{start};
    dist[static_cast<std::size_t>(start)] = 0;
    walk(dist, q, limit);
    return dist;
  }

  Path path_of(const std::vector<int>& chain) const {
    Path p;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      p.vertices.push_back(vertex(chain[k]));
      if (k == 0) continue;
      const auto& edges = adj_[static_cast<std::size_t>(chain[k - 1])];
      auto it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.target == chain[k]; });
      if (it == edges.end()) throw Error(ErrorKind::Internal, "path vertices are not adjacent");
      p.labels.push_back(it->label);
    }
    return p;
  }

  Group G_;
  int radius_;
  std::vector<std::vector<Element>> witnesses_;
  std::vector<CosetId> vertices_;
  std::unordered_map<CosetId, int, CosetIdHash> index_;
  std::vector<int> norm_;
  std::vector<int> parent_;
  std::vector<std::vector<Edge>> adj_;
  std::vector<int> full_degree_;
};

inline CosetGraph build_ball(const Group& G, int R) { return CosetGraph(G, R); }

}  // namespace relend
