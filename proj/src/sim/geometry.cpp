#include "zkpos/sim/geometry.hpp"

#include <optional>

#include <boost/multiprecision/integer.hpp>

namespace zkpos::sim {

namespace {

void check_dims(const SpatialPoint& a, const SpatialPoint& b) {
  if (a.size() != b.size()) throw GeometryError("dimension mismatch");
}

bool is_perfect_square(const BigInt& v, BigInt& root) {
  if (v < 0) return false;
  root = boost::multiprecision::sqrt(v);
  return root * root == v;
}

/// Row-reduces `m` in place; returns the rank. Columns [0, cols) are pivoted.
std::size_t row_reduce(std::vector<std::vector<Rational>>& m, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    const Rational inv = 1 / m[rank][c];
    for (auto& x : m[rank]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const Rational factor = m[r][c];
      for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] -= factor * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Barycentric solve of p against the chosen vertices. Returns true if p is a
/// convex combination with a unique coefficient vector.
bool in_simplex(const SpatialPoint& p, std::span<const SpatialPoint> vertices, std::span<const std::size_t> pick) {
  const std::size_t d = p.size();
  const std::size_t m = pick.size();
  std::vector<std::vector<Rational>> a(d + 1, std::vector<Rational>(m + 1));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < m; ++c) a[r][c] = vertices[pick[c]][r];
    a[r][m] = p[r];
  }
  for (std::size_t c = 0; c < m; ++c) a[d][c] = 1;
  a[d][m] = 1;
  const std::size_t rank = row_reduce(a, m);
  if (rank < m) return false;
  // Inconsistent rows have zero coefficients with a nonzero right-hand side.
  for (std::size_t r = rank; r < a.size(); ++r) {
    if (a[r][m] != 0) return false;
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (a[r][m] < 0) return false;
  }
  return true;
}

bool search_subsets(const SpatialPoint& p, std::span<const SpatialPoint> vertices, std::vector<std::size_t>& pick,
                    std::size_t start, std::size_t size) {
  if (pick.size() == size) return in_simplex(p, vertices, pick);
  for (std::size_t i = start; i < vertices.size(); ++i) {
    pick.push_back(i);
    if (search_subsets(p, vertices, pick, i + 1, size)) return true;
    pick.pop_back();
  }
  return false;
}

}  // namespace

Rational squared_distance(const SpatialPoint& a, const SpatialPoint& b) {
  check_dims(a, b);
  Rational sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Rational diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

bool on_ray(const SpatialPoint& p, const SpatialPoint& a, const SpatialPoint& b) {
  check_dims(a, b);
  check_dims(p, a);
  // p - a = t (b - a) for one t >= 0.
  std::optional<Rational> t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Rational dp = p[i] - a[i], db = b[i] - a[i];
    if (db == 0) {
      if (dp != 0) return false;
      continue;
    }
    const Rational ti = dp / db;
    if (t && *t != ti) return false;
    t = ti;
  }
  return t && *t >= 0;
}

TravelTime distance(const SpatialPoint& a, const SpatialPoint& b) {
  const Rational q = squared_distance(a, b);
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  BigInt rn, rd;
  if (is_perfect_square(num, rn) && is_perfect_square(den, rd)) {
    return {Time::from_raw(round_to_fixed(rn, rd)), true};
  }
  // sqrt(num/den) * 2^F = sqrt(num * 2^(2F) / den); take the integer square
  // root of the floor and decide the rounding by an exact comparison.
  const BigInt scaled = num << (2 * Time::kFracBits);
  const BigInt s = boost::multiprecision::sqrt(BigInt(scaled / den));
  // Round up iff (s + 1/2)^2 < num * 2^(2F) / den, i.e. (2s+1)^2 * den < 4 * scaled.
  // Equality would need a rational square root, handled above.
  const BigInt lhs = (2 * s + 1) * (2 * s + 1) * den;
  const BigInt rhs = 4 * scaled;
  BigInt rounded = lhs < rhs ? BigInt(s + 1) : s;
  return {Time::from_raw(round_to_fixed(rounded, BigInt(1) << Time::kFracBits)), false};
}

Time arrival_time(Time send_time, const SpatialPoint& from, const SpatialPoint& to) {
  return send_time + distance(from, to).value;
}

bool in_convex_hull(const SpatialPoint& p, std::span<const SpatialPoint> vertices) {
  if (vertices.empty()) throw GeometryError("in_convex_hull: no vertices");
  for (const auto& v : vertices) check_dims(p, v);
  std::vector<std::size_t> pick;
  const std::size_t max_size = std::min(vertices.size(), p.size() + 1);
  for (std::size_t size = 1; size <= max_size; ++size) {
    pick.clear();
    if (search_subsets(p, vertices, pick, 0, size)) return true;
  }
  return false;
}

bool affinely_independent(std::span<const SpatialPoint> points) {
  if (points.empty()) return false;
  const std::size_t d = points[0].size();
  if (points.size() > d + 1) return false;
  std::vector<std::vector<Rational>> m;
  for (std::size_t i = 1; i < points.size(); ++i) {
    check_dims(points[0], points[i]);
    std::vector<Rational> row(d);
    for (std::size_t k = 0; k < d; ++k) row[k] = points[i][k] - points[0][k];
    m.push_back(std::move(row));
  }
  return row_reduce(m, d) == points.size() - 1;
}

std::vector<SpatialPoint> enclosing_simplex(std::span<const SpacetimePoint> S, const Rational& margin) {
  if (S.empty()) throw GeometryError("enclosing_simplex: empty point set");
  if (margin <= 0) throw GeometryError("enclosing_simplex: margin must be positive");
  const std::size_t d = S[0].L.size();
  SpatialPoint lo = S[0].L, hi = S[0].L;
  for (const auto& p : S) {
    if (p.L.size() != d) throw GeometryError("dimension mismatch");
    for (std::size_t k = 0; k < d; ++k) {
      if (p.L[k] < lo[k]) lo[k] = p.L[k];
      if (p.L[k] > hi[k]) hi[k] = p.L[k];
    }
  }
  if (d == 1) return {{lo[0] - margin}, {hi[0] + margin}};
  // Corner simplex: legs along the axes from corner = lo - margin, far face
  // x'_1 + ... + x'_d = A in corner-relative coordinates. The farthest point
  // of the original box has coordinate sum s = sum(extent + margin) >= d*margin;
  // A = 2s leaves it s / sqrt(d) >= margin from the far face.
  SpatialPoint corner(d);
  Rational s = 0;
  for (std::size_t k = 0; k < d; ++k) {
    corner[k] = lo[k] - margin;
    s += hi[k] - lo[k] + margin;
  }
  const Rational leg = 2 * s;
  std::vector<SpatialPoint> out{corner};
  for (std::size_t k = 0; k < d; ++k) {
    SpatialPoint v = corner;
    v[k] += leg;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace zkpos::sim
