// Copyright 2026 The Cheaptalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Convex hulls in the two-player payoff plane.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cheaptalk/equilibria.hpp"
#include "cheaptalk/game.hpp"

namespace cheaptalk {

template <Scalar T>
struct Point2 {
  T x = 0;
  T y = 0;
  friend bool operator<(const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
  friend bool operator==(const Point2& a, const Point2& b) {
    return a.x == b.x && a.y == b.y;
  }
};

// Orientation of (a, b, c): > 0 counter-clockwise, < 0 clockwise.
template <Scalar T>
T Cross(const Point2<T>& a, const Point2<T>& b, const Point2<T>& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Half-plane a*x + b*y <= c.
template <Scalar T>
struct HalfPlane {
  T a = 0;
  T b = 0;
  T c = 0;
};

template <Scalar T>
class PayoffHull {
 public:
  PayoffHull() = default;

  // Monotone chain. Vertices come out counter-clockwise starting from the
  // lexicographically smallest point, with collinear points removed.
  explicit PayoffHull(std::vector<Point2<T>> points) {
    if (points.empty()) throw std::invalid_argument("hull of no points");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) {
      vertices_ = std::move(points);
      return;
    }
    std::vector<Point2<T>> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
      while (k >= 2 && Cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
      hull[k++] = p;
    }
    for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
      while (k >= lower && Cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
      hull[k++] = points[i];
    }
    hull.resize(k - 1);
    vertices_ = std::move(hull);
  }

  const std::vector<Point2<T>>& vertices() const { return vertices_; }
  bool IsPoint() const { return vertices_.size() == 1; }
  bool IsSegment() const { return vertices_.size() == 2; }

  // Edge half-planes of a proper polygon; empty for point and segment hulls.
  std::vector<HalfPlane<T>> HalfPlanes() const {
    std::vector<HalfPlane<T>> planes;
    if (vertices_.size() < 3) return planes;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const auto& p = vertices_[i];
      const auto& q = vertices_[(i + 1) % vertices_.size()];
      // Interior lies to the left of p->q: cross(p, q, z) >= 0.
      HalfPlane<T> h;
      h.a = q.y - p.y;
      h.b = p.x - q.x;
      h.c = h.a * p.x + h.b * p.y;
      planes.push_back(h);
    }
    return planes;
  }

  bool Contains(const Point2<T>& z) const {
    auto nonneg = [](const T& v) {
      if constexpr (kIsExact<T>) {
        return v >= 0;
      } else {
        return v >= -kFloatTolerance;
      }
    };
    if (vertices_.size() == 1) {
      if constexpr (kIsExact<T>) {
        return z == vertices_[0];
      } else {
        return std::abs(z.x - vertices_[0].x) <= kFloatTolerance &&
               std::abs(z.y - vertices_[0].y) <= kFloatTolerance;
      }
    }
    if (vertices_.size() == 2) {
      const auto& a = vertices_[0];
      const auto& b = vertices_[1];
      T cross = Cross(a, b, z);
      if (!nonneg(cross) || !nonneg(T(-cross))) return false;
      T dot = (z.x - a.x) * (b.x - a.x) + (z.y - a.y) * (b.y - a.y);
      T len = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
      return nonneg(dot) && nonneg(T(len - dot));
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (!nonneg(Cross(vertices_[i], vertices_[(i + 1) % vertices_.size()], z))) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Point2<T>> vertices_;
};

// Convex hull of the payoff vectors of a two-player Nash list.
template <Scalar T>
PayoffHull<T> NashPayoffHull(const NashList<T>& nash) {
  if (nash.equilibria.empty()) throw std::invalid_argument("empty nash list");
  std::vector<Point2<T>> points;
  for (const auto& eq : nash.equilibria) {
    if (eq.payoffs.size() != 2) {
      throw std::invalid_argument("payoff hull needs two-player payoffs");
    }
    points.push_back({eq.payoffs[0], eq.payoffs[1]});
  }
  return PayoffHull<T>(std::move(points));
}

template <Scalar T>
PayoffHull<T> NashPayoffHull(const NormalFormGame<T>& game,
                             const NashList<T>& nash) {
  if (game.player_count() != 2) {
    throw GameError("payoff hull needs a two-player game");
  }
  return NashPayoffHull(nash);
}

template <Scalar T>
bool HullContains(const PayoffHull<T>& hull, const PayoffVector<T>& point) {
  if (point.size() != 2) {
    throw std::invalid_argument("dimension mismatch: hull is two-dimensional");
  }
  return hull.Contains({point[0], point[1]});
}

}  // namespace cheaptalk
