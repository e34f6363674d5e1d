#pragma once

// Flood fill over explicitly enumerated l1 balls of Z^d, independent of the
// coset graph code.

#include <cstdlib>
#include <deque>
#include <map>
#include <vector>

namespace oracle {

using Point = std::vector<int>;

inline int l1(const Point& p) {
  int s = 0;
  for (int c : p) s += std::abs(c);
  return s;
}

inline std::vector<Point> lattice_ball(int d, int R) {
  std::vector<Point> out;
  Point p(static_cast<std::size_t>(d), -R);
  while (true) {
    if (l1(p) <= R) out.push_back(p);
    std::size_t i = 0;
    while (i < p.size() && p[i] == R) p[i++] = -R;
    if (i == p.size()) break;
    ++p[i];
  }
  return out;
}

struct Shell {
  int components = 0;
  int touching = 0;
  int max_norm_off_unbounded = 0;  // over all of ball(R), only meaningful when touching == 1
};

// Components of lo <= |p| <= R.
inline Shell shell(int d, int lo, int R) {
  const auto pts = lattice_ball(d, R);
  std::map<Point, int> comp;
  for (const auto& p : pts)
    if (l1(p) >= lo) comp[p] = -1;
  Shell s;
  std::vector<bool> touch;
  for (auto& [p0, c0] : comp) {
    if (c0 >= 0) continue;
    const int id = s.components++;
    touch.push_back(false);
    std::deque<Point> q{p0};
    comp[p0] = id;
    while (!q.empty()) {
      Point p = q.front();
      q.pop_front();
      if (l1(p) == R) touch[static_cast<std::size_t>(id)] = true;
      for (std::size_t i = 0; i < p.size(); ++i)
        for (int dlt : {-1, 1}) {
          Point n = p;
          n[i] += dlt;
          auto it = comp.find(n);
          if (it != comp.end() && it->second < 0) {
            it->second = id;
            q.push_back(n);
          }
        }
    }
  }
  int unbounded = -1;
  for (std::size_t i = 0; i < touch.size(); ++i)
    if (touch[i]) {
      ++s.touching;
      unbounded = static_cast<int>(i);
    }
  for (const auto& p : pts) {
    auto it = comp.find(p);
    if (it == comp.end() || it->second != unbounded) s.max_norm_off_unbounded = std::max(s.max_norm_off_unbounded, l1(p));
  }
  return s;
}

}  // namespace oracle
