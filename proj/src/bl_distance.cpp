#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "landscape/rmt.hpp"

namespace landscape {

namespace {

struct Support {
  double lo;
  double hi;
};

Support support_of(const Measure& m) {
  if (const auto* d = std::get_if<DiscreteMeasure>(&m)) {
    if (d->atoms.empty() || d->atoms.size() != d->weights.size())
      throw std::invalid_argument("bl_distance: empty or malformed discrete measure");
    const auto [lo, hi] = std::minmax_element(d->atoms.begin(), d->atoms.end());
    return {*lo, *hi};
  }
  const auto& s = std::get<SemicircleLaw>(m);
  if (!(s.radius > 0.0)) throw std::invalid_argument("bl_distance: semicircle radius must be positive");
  return {s.center - s.radius, s.center + s.radius};
}

// Appends (position, signed mass) pairs.
void discretize(const Measure& m, double sign, double h, std::vector<std::pair<double, double>>& out) {
  if (const auto* d = std::get_if<DiscreteMeasure>(&m)) {
    for (std::size_t i = 0; i < d->atoms.size(); ++i) out.emplace_back(d->atoms[i], sign * d->weights[i]);
    return;
  }
  const auto& s = std::get<SemicircleLaw>(m);
  const double lo = s.center - s.radius;
  const auto nb = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * s.radius / h)));
  const double w = 2.0 * s.radius / static_cast<double>(nb);
  double prev = 0.0;
  for (std::size_t j = 0; j < nb; ++j) {
    const double right = j + 1 == nb ? 1.0 : s.cdf(lo + w * static_cast<double>(j + 1));
    out.emplace_back(lo + w * (static_cast<double>(j) + 0.5), sign * (right - prev));
    prev = right;
  }
}

struct Vertex {
  double x;
  double v;
};

// Maximizes sum c_i f_i subject to |f_i| <= 1 and |f_{i+1} - f_i| <= x_{i+1} - x_i.
// The running value function over f is concave piecewise linear on [-1, 1];
// each step is a window-max (dilation) by the grid gap followed by a linear tilt.
double solve_dual(const std::vector<double>& x, const std::vector<double>& c) {
  std::vector<Vertex> cur{{-1.0, -c[0]}, {1.0, c[0]}};
  std::vector<Vertex> next;
  next.reserve(64);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double h = x[i] - x[i - 1];
    std::size_t js = 0;
    for (std::size_t j = 1; j < cur.size(); ++j)
      if (cur[j].v > cur[js].v) js = j;
    next.clear();
    // Left branch shifted by -h, clipped at -1.
    {
      std::size_t j = 0;
      while (j <= js && cur[j].x - h < -1.0) ++j;
      if (j > js) {
        next.push_back({-1.0, cur[js].v});
      } else {
        if (j > 0) {
          const Vertex& a = cur[j - 1];
          const Vertex& b = cur[j];
          const double xa = a.x - h;
          const double xb = b.x - h;
          const double t = (-1.0 - xa) / (xb - xa);
          next.push_back({-1.0, a.v + t * (b.v - a.v)});
        }
        for (; j <= js; ++j) next.push_back({cur[j].x - h, cur[j].v});
      }
    }
    // Right branch shifted by +h, clipped at +1.
    {
      std::size_t j = js;
      std::size_t last = cur.size() - 1;
      while (last > js && cur[last].x + h > 1.0) --last;
      if (cur[js].x + h >= 1.0) {
        next.push_back({1.0, cur[js].v});
      } else {
        for (j = js; j <= last; ++j) next.push_back({cur[j].x + h, cur[j].v});
        if (last + 1 < cur.size()) {
          const Vertex& a = cur[last];
          const Vertex& b = cur[last + 1];
          const double xa = a.x + h;
          const double xb = b.x + h;
          const double t = (1.0 - xa) / (xb - xa);
          next.push_back({1.0, a.v + t * (b.v - a.v)});
        } else if (next.back().x < 1.0) {
          next.push_back({1.0, cur[last].v});
        }
      }
    }
    // Tilt, and drop coincident or collinear vertices.
    cur.clear();
    for (const Vertex& p : next) {
      const Vertex q{p.x, p.v + c[i] * p.x};
      if (!cur.empty() && q.x - cur.back().x <= 1e-15) {
        cur.back().v = std::max(cur.back().v, q.v);
        continue;
      }
      if (cur.size() >= 2) {
        const Vertex& a = cur[cur.size() - 2];
        const Vertex& b = cur.back();
        const double s1 = (b.v - a.v) / (b.x - a.x);
        const double s2 = (q.v - b.v) / (q.x - b.x);
        if (std::abs(s1 - s2) <= 1e-13 * (1.0 + std::abs(s1))) cur.pop_back();
      }
      cur.push_back(q);
    }
  }
  double best = cur.front().v;
  for (const Vertex& p : cur) best = std::max(best, p.v);
  return best;
}

}  // namespace

double bl_distance(const Measure& a, const Measure& b, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("bl_distance: resolution must be positive");
  const Support sa = support_of(a);
  const Support sb = support_of(b);
  const double span = std::max(sa.hi, sb.hi) - std::min(sa.lo, sb.lo);
  const double h = resolution * (span > 0.0 ? span : 1.0);
  std::vector<std::pair<double, double>> pts;
  discretize(a, 1.0, h, pts);
  discretize(b, -1.0, h, pts);
  std::sort(pts.begin(), pts.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
  std::vector<double> x;
  std::vector<double> c;
  for (const auto& [pos, mass] : pts) {
    if (!x.empty() && pos == x.back()) {
      c.back() += mass;
    } else {
      x.push_back(pos);
      c.push_back(mass);
    }
  }
  return std::max(0.0, solve_dual(x, c));
}

}  // namespace landscape
