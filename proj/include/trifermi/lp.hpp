#pragma once

// Small dense linear programming: two-phase simplex with Bland's rule,
// vertex enumeration by active sets, and the witness constraint systems.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "trifermi/errors.hpp"
#include "trifermi/witnesses.hpp"

namespace trifermi {

/// normal . x <= offset
struct Halfspace {
  std::vector<double> normal;
  double offset = 0.0;
  std::string tag;
};

struct LinearProgram {
  std::vector<double> objective;
  std::vector<Halfspace> halfspaces;
  std::vector<std::optional<std::pair<double, double>>> bounds;  // per-variable, optional
};

struct LpSolution {
  std::vector<double> point;
  double value = 0.0;
};

struct Polytope {
  std::vector<Halfspace> halfspaces;
  std::vector<std::vector<double>> vertices;
};

inline constexpr double kLpTol = 1e-9;

namespace detail {

inline std::size_t common_dimension(const std::vector<Halfspace>& hs) {
  if (hs.empty()) throw InvalidInput("constraint system is empty");
  const std::size_t d = hs.front().normal.size();
  for (const auto& h : hs)
    if (h.normal.size() != d) throw InvalidInput("halfspaces differ in dimension");
  return d;
}

/// Dense tableau for min c.y subject to A y = b, y >= 0 (b >= 0 after sign fix).
class Tableau {
 public:
  Tableau(std::vector<std::vector<double>> a, std::vector<double> b) : m_(a.size()), n_(a.empty() ? 0 : a[0].size()) {
    for (std::size_t i = 0; i < m_; ++i)
      if (b[i] < 0) {
        for (auto& v : a[i]) v = -v;
        b[i] = -b[i];
      }
    // Columns: n_ structural, then m_ artificials.
    t_.assign(m_, std::vector<double>(n_ + m_ + 1, 0.0));
    for (std::size_t i = 0; i < m_; ++i) {
      std::copy(a[i].begin(), a[i].end(), t_[i].begin());
      t_[i][n_ + i] = 1.0;
      t_[i].back() = b[i];
    }
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
    allowed_.assign(n_ + m_, true);
  }

  /// Phase one; returns false when infeasible.
  bool phase_one() {
    std::vector<double> cost(n_ + m_, 0.0);
    for (std::size_t j = n_; j < n_ + m_; ++j) cost[j] = 1.0;
    if (!run(cost)) throw std::logic_error("phase one cannot be unbounded");
    if (objective(cost) > 1e-8) return false;
    // Drive artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < m_;) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(t_[i][j]) > kLpTol) {
          col = j;
          break;
        }
      if (col == n_) {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        --m_;
        continue;
      }
      pivot(i, col);
      ++i;
    }
    for (std::size_t j = n_; j < allowed_.size(); ++j) allowed_[j] = false;
    return true;
  }

  /// Phase two with the caller's cost over the structural columns; false when unbounded.
  bool phase_two(const std::vector<double>& c) {
    std::vector<double> cost(n_ + allowed_.size() - n_, 0.0);
    std::copy(c.begin(), c.end(), cost.begin());
    return run(cost);
  }

  std::vector<double> solution() const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) y[basis_[i]] = t_[i].back();
    return y;
  }

 private:
  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (std::size_t i = 0; i < m_; ++i) v += cost[basis_[i]] * t_[i].back();
    return v;
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_[i][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < t_[i].size(); ++j) t_[i][j] -= f * t_[r][j];
    }
    basis_[r] = c;
  }

  // Bland's rule: lowest-index improving column, lowest-index leaving basis variable on ties.
  bool run(const std::vector<double>& cost) {
    const std::size_t cols = t_.empty() ? 0 : t_[0].size() - 1;
    for (int guard = 0; guard < 100000; ++guard) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!allowed_[j]) continue;
        double rc = cost[j];
        for (std::size_t i = 0; i < m_; ++i) rc -= cost[basis_[i]] * t_[i][j];
        if (rc < -kLpTol) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= kLpTol) continue;
        const double ratio = t_[i].back() / t_[i][enter];
        if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    throw std::logic_error("simplex iteration limit reached");
  }

  std::size_t m_, n_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
};

inline std::vector<Halfspace> with_bounds(const LinearProgram& lp) {
  std::vector<Halfspace> hs = lp.halfspaces;
  const std::size_t d = lp.objective.size();
  for (std::size_t i = 0; i < lp.bounds.size() && i < d; ++i) {
    if (!lp.bounds[i]) continue;
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    hs.push_back({e, lp.bounds[i]->second, "upper bound"});
    e[i] = -1.0;
    hs.push_back({e, -lp.bounds[i]->first, "lower bound"});
  }
  return hs;
}

/// Free-variable LP min c.x, A x <= b via x = x+ - x- and slacks.
inline LpSolution solve_inequality_form(const std::vector<double>& c, const std::vector<Halfspace>& hs) {
  const std::size_t d = c.size();
  const std::size_t m = hs.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(2 * d + m, 0.0));
  std::vector<double> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      a[i][j] = hs[i].normal[j];
      a[i][d + j] = -hs[i].normal[j];
    }
    a[i][2 * d + i] = 1.0;
    b[i] = hs[i].offset;
  }
  Tableau t(std::move(a), std::move(b));
  if (!t.phase_one()) throw LpError(LpError::Kind::Infeasible, "linear program is infeasible");
  std::vector<double> cost(2 * d + m, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    cost[j] = c[j];
    cost[d + j] = -c[j];
  }
  if (!t.phase_two(cost)) throw LpError(LpError::Kind::Unbounded, "linear program is unbounded");
  const auto y = t.solution();
  LpSolution s;
  s.point.resize(d);
  for (std::size_t j = 0; j < d; ++j) s.point[j] = y[j] - y[d + j];
  for (std::size_t j = 0; j < d; ++j) s.value += c[j] * s.point[j];
  return s;
}

/// Gaussian elimination with partial pivoting; nullopt when rank deficient.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (std::abs(a[p][k]) < 1e-12) return std::nullopt;
    std::swap(a[p], a[k]);
    std::swap(b[p], b[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

inline bool satisfies(const std::vector<Halfspace>& hs, const std::vector<double>& x, double tol = kLpTol) {
  for (const auto& h : hs)
    if (detail::dot(h.normal, x) > h.offset + tol) return false;
  return true;
}

/// True when some nonzero direction d has normal . d <= 0 for every row.
inline bool is_unbounded_region(const std::vector<Halfspace>& hs) {
  const std::size_t d = detail::common_dimension(hs);
  std::vector<Halfspace> cone;
  for (const auto& h : hs) cone.push_back({h.normal, 0.0, h.tag});
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    cone.push_back({e, 1.0, "box"});
    e[i] = -1.0;
    cone.push_back({e, 1.0, "box"});
  }
  for (std::size_t i = 0; i < d; ++i)
    for (double sgn : {-1.0, 1.0}) {
      std::vector<double> c(d, 0.0);
      c[i] = sgn;
      if (detail::solve_inequality_form(c, cone).value < -1e-9) return true;
    }
  return false;
}

/// All vertices by exhaustive active sets (dimension <= 4 in practice).
inline Polytope enumerate_vertices(const std::vector<Halfspace>& hs) {
  const std::size_t d = detail::common_dimension(hs);
  if (d == 0 || d > 6) throw InvalidInput("vertex enumeration supports dimensions 1..6");
  if (is_unbounded_region(hs)) throw InvalidInput("region is unbounded");
  Polytope poly{hs, {}};
  const std::size_t m = hs.size();
  if (m < d) return poly;
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < d; ++i) idx[i] = i;
  while (true) {
    std::vector<std::vector<double>> a(d);
    std::vector<double> b(d);
    for (std::size_t i = 0; i < d; ++i) {
      a[i] = hs[idx[i]].normal;
      b[i] = hs[idx[i]].offset;
    }
    if (auto x = detail::solve_square(a, b); x && satisfies(hs, *x)) {
      const bool dup = std::any_of(poly.vertices.begin(), poly.vertices.end(), [&](const auto& v) {
        for (std::size_t k = 0; k < d; ++k)
          if (std::abs(v[k] - (*x)[k]) > 1e-8) return false;
        return true;
      });
      if (!dup) poly.vertices.push_back(*x);
    }
    // next combination
    std::size_t k = d;
    while (k > 0 && idx[k - 1] == m - d + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  for (auto& v : poly.vertices)
    for (auto& x : v)
      if (std::abs(x) < 1e-13) x = 0.0;
  std::sort(poly.vertices.begin(), poly.vertices.end());
  return poly;
}

/// Simplex with Bland's rule; for bounded regions of dimension <= 4 the optimum
/// is cross-checked against the enumerated vertices.
inline LpSolution simplex_minimize(const LinearProgram& lp) {
  const auto hs = detail::with_bounds(lp);
  if (detail::common_dimension(hs) != lp.objective.size()) throw InvalidInput("objective and rows differ in dimension");
  auto sol = detail::solve_inequality_form(lp.objective, hs);
  if (lp.objective.size() <= 4 && !is_unbounded_region(hs)) {
    const auto poly = enumerate_vertices(hs);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : poly.vertices) best = std::min(best, detail::dot(lp.objective, v));
    if (std::abs(best - sol.value) > 1e-7 * std::max(1.0, std::abs(best)))
      throw std::logic_error("simplex optimum disagrees with vertex enumeration");
  }
  return sol;
}

/// Linear feasibility: p = sum l_i v_i with l >= 0, sum l = 1.
inline bool in_convex_hull(const std::vector<double>& p, const std::vector<std::vector<double>>& vertices) {
  const std::size_t d = p.size(), n = vertices.size();
  if (n == 0) return false;
  std::vector<std::vector<double>> a(d + 1, std::vector<double>(n, 0.0));
  std::vector<double> b(d + 1);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < n; ++j) a[k][j] = vertices[j][k];
    b[k] = p[k];
  }
  for (std::size_t j = 0; j < n; ++j) a[d][j] = 1.0;
  b[d] = 1.0;
  detail::Tableau t(std::move(a), std::move(b));
  return t.phase_one();
}

// ---- feasible regions over expectation values -------------------------------

enum class RegionSystem { GhzProjector, SpinChain, StabilizerB, StabilizerW };

inline std::optional<RegionSystem> region_system_from_name(const std::string& s) {
  if (s == "eq41" || s == "ghz-projector") return RegionSystem::GhzProjector;
  if (s == "eq28" || s == "spin-chain") return RegionSystem::SpinChain;
  if (s == "eq50" || s == "stabilizer-b") return RegionSystem::StabilizerB;
  if (s == "eq53" || s == "stabilizer-w") return RegionSystem::StabilizerW;
  return std::nullopt;
}

namespace detail {

inline void add_box(std::vector<Halfspace>& hs, std::size_t d, std::size_t i, double lo, double hi, const std::string& name) {
  std::vector<double> e(d, 0.0);
  e[i] = 1.0;
  hs.push_back({e, hi, name + "<=" + std::to_string(hi)});
  e[i] = -1.0;
  hs.push_back({e, -lo, name + ">=" + std::to_string(lo)});
}

inline std::vector<Halfspace> stabilizer_region(double consistent_bound, const std::string& prefix) {
  std::vector<Halfspace> hs;
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2) {
      const double s1 = i1 ? -1.0 : 1.0, s2 = i2 ? -1.0 : 1.0;
      hs.push_back({{s1, s2, s1 * s2}, consistent_bound, prefix + "/consistent" + std::to_string(i1) + std::to_string(i2)});
    }
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2) {
      const double s1 = i1 ? -1.0 : 1.0, s2 = i2 ? -1.0 : 1.0;
      hs.push_back({{s1, s2, -s1 * s2}, 1.0, prefix + "/flipped" + std::to_string(i1) + std::to_string(i2)});
    }
  return hs;
}

}  // namespace detail

/// Halfspaces over the expectation values (P1..P4), (P12, P13, P23) or (S1, S2, S12).
inline std::vector<Halfspace> region_halfspaces(RegionSystem sys) {
  std::vector<Halfspace> hs;
  switch (sys) {
    case RegionSystem::GhzProjector: {
      for (std::size_t i = 0; i < 3; ++i) detail::add_box(hs, 4, i, 0.0, 3.0, "P" + std::to_string(i + 1));
      detail::add_box(hs, 4, 3, 0.0, 2.0, "P4");
      hs.push_back({{1, 1, 1, 2}, 15.0 / 4.0, "P1+P2+P3+2P4<=15/4"});
      hs.push_back({{-1, -1, -1, -2}, 0.0, "P1+P2+P3+2P4>=0"});
      return hs;
    }
    case RegionSystem::SpinChain: {
      const char* names[] = {"P12", "P13", "P23"};
      for (std::size_t i = 0; i < 3; ++i) detail::add_box(hs, 3, i, -3.0, 1.0, names[i]);
      const double bound = 1.0 + std::sqrt(8.0);
      hs.push_back({{-1, -1, 1}, bound, "-P12-P13+P23"});
      hs.push_back({{-1, 1, -1}, bound, "-P12+P13-P23"});
      hs.push_back({{1, -1, -1}, bound, "P12-P13-P23"});
      return hs;
    }
    case RegionSystem::StabilizerB:
      return detail::stabilizer_region(std::sqrt(2.0), "stab-B");
    case RegionSystem::StabilizerW:
      return detail::stabilizer_region(kStabGhzConstant, "stab-W");
  }
  return hs;
}

inline Polytope region_polytope(RegionSystem sys) { return enumerate_vertices(region_halfspaces(sys)); }

/// Rows w0 + w . v >= 0 for each vertex v, stored as halfspaces over the
/// witness parameters (w0, w...).
inline std::vector<Halfspace> rows_from_vertices(const Polytope& poly, const std::string& prefix) {
  std::vector<Halfspace> rows;
  int n = 0;
  for (const auto& v : poly.vertices) {
    std::vector<double> normal{-1.0};
    for (double x : v) normal.push_back(-x);
    rows.push_back({normal, 0.0, prefix + "/v" + std::to_string(++n)});
  }
  return rows;
}

// ---- transcribed parameter constraint tables --------------------------------

namespace detail {

/// Row coeffs . params >= 0 as a halfspace.
inline Halfspace ge_zero(std::vector<double> coeffs, std::string tag) {
  for (auto& c : coeffs) c = -c;
  return {std::move(coeffs), 0.0, std::move(tag)};
}

inline std::string row_tag(const std::string& table, int row) {
  std::ostringstream os;
  os << table << "/r" << std::setw(2) << std::setfill('0') << row;
  return os.str();
}

}  // namespace detail

/// 14 rows over (a0, a12, a13, a23).
inline std::vector<Halfspace> spin_chain_w_table() {
  const double s = 3.0 - std::sqrt(8.0);
  const double t = -5.0 + std::sqrt(8.0);
  const std::vector<std::vector<double>> rows{
      {1, s, -3, 1},  {1, -3, s, 1},  {1, -3, -3, t}, {1, s, 1, -3},  {1, -3, 1, s},
      {1, -3, t, -3}, {1, 1, -3, s},  {1, 1, s, -3},  {1, t, -3, -3}, {1, 1, 1, 1},
      {1, 1, 1, -3},  {1, -3, 1, 1},  {1, 1, -3, 1},  {1, -3, -3, -3},
  };
  std::vector<Halfspace> out;
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(detail::ge_zero(rows[i], detail::row_tag("spin-chain-W", int(i) + 1)));
  return out;
}

/// 14 rows over the rescaled projector parameters (a0, a1', a2', a3', a4').
/// Row 9 is printed as "a0+3a1+3a2/ >= 0"; it is completed to 3a2/4 like
/// its neighbours.
inline std::vector<Halfspace> ghz_projector_table() {
  const std::vector<std::vector<double>> rows{
      {1, 0, 0, 0, 0},       {1, 3, 0, 0, 0},        {1, 0, 3, 0, 0},        {1, 0, 0, 3, 0},
      {1, 0, 0, 0, 15.0 / 8}, {1, 3, 0, 0, 3.0 / 8},  {1, 0, 3, 0, 3.0 / 8},  {1, 0, 0, 3, 3.0 / 8},
      {1, 3, 0.75, 0, 0},    {1, 3, 0, 0.75, 0},     {1, 0, 3, 0.75, 0},     {1, 0.75, 3, 0, 0},
      {1, 0.75, 0, 3, 0},    {1, 0, 0.75, 3, 0},
  };
  std::vector<Halfspace> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto tag = detail::row_tag("ghz-projector", int(i) + 1);
    if (i == 8) tag += "(completed)";
    out.push_back(detail::ge_zero(rows[i], tag));
  }
  return out;
}

/// 20 printed rows over (b0, b1, b2, b12); rows 13 and 14 are printed identically.
inline std::vector<Halfspace> stabilizer_w_table() {
  const double r = std::sqrt(2.0);
  const double h = (1.0 - r) / 2.0;
  const double k = (-1.0 + r) / 2.0;
  const std::vector<std::vector<double>> rows{
      {1, r, r, -r},  {1, r, -r, r},  {1, -r, r, r},  {1, -r, -r, -r}, {1, 1, -1, -1},
      {1, -1, -1, 1}, {1, -1, 1, -1}, {1, 1, 1, 1},   {1, r, h, k},    {1, r, k, h},
      {1, k, r, h},   {1, h, r, k},   {1, k, h, r},   {1, k, h, r},    {1, h, h, -r},
      {1, k, k, -r},  {1, h, -r, h},  {1, k, -r, k},  {1, -r, h, h},   {1, -r, k, k},
  };
  std::vector<Halfspace> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto tag = detail::row_tag("stabilizer-W", int(i) + 1);
    if (i == 13) tag += "(duplicate-of-r13)";
    out.push_back(detail::ge_zero(rows[i], tag));
  }
  return out;
}

/// 20 rows over (b0, b1, b2, b12).
inline std::vector<Halfspace> stabilizer_ghz_table() {
  const double g = kStabGhzConstant;
  const double e = 0.99;
  const std::vector<std::vector<double>> rows{
      {1, g, g, -g},  {1, g, -g, g},  {1, -g, g, g},  {1, -g, -g, -g}, {1, 1, -1, -1},
      {1, -1, -1, 1}, {1, -1, 1, -1}, {1, 1, 1, 1},   {1, g, -e, e},   {1, g, e, -e},
      {1, e, g, -e},  {1, -e, g, e},  {1, e, -e, g},  {1, -e, e, g},   {1, -e, -e, -g},
      {1, e, e, -g},  {1, -e, -g, -e}, {1, e, -g, e}, {1, -g, -e, -e}, {1, -g, e, e},
  };
  std::vector<Halfspace> out;
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(detail::ge_zero(rows[i], detail::row_tag("stabilizer-GHZ", int(i) + 1)));
  return out;
}

inline std::vector<Halfspace> constraint_set(WitnessFamily family, ClassTarget target) {
  if ((family == WitnessFamily::SpinChainParam || family == WitnessFamily::SpinChainGen) && target == ClassTarget::W_EW)
    return spin_chain_w_table();
  if (family == WitnessFamily::GhzProjector && target == ClassTarget::GHZ_EW) return ghz_projector_table();
  if (family == WitnessFamily::Stabilizer && target == ClassTarget::W_EW) return stabilizer_w_table();
  if (family == WitnessFamily::Stabilizer && target == ClassTarget::GHZ_EW) return stabilizer_ghz_table();
  throw InvalidInput("no constraint set for this family/target pair");
}

/// Parameters in the coordinates used by the constraint tables.
inline std::vector<double> table_coordinates(const WitnessSpec& w) {
  require_params(w);
  const auto& p = w.params;
  switch (w.family) {
    case WitnessFamily::SpinChainGen:
      return {p[0], 1.0, 0.0, 1.0};
    case WitnessFamily::GhzProjector: {
      const auto h = ghz_projector_hat_params(p[0], p[1], p[2], p[3], p[4]);
      return {h.begin(), h.end()};
    }
    default:
      return p;
  }
}

struct RowCheck {
  std::string tag;
  double value = 0.0;  // coeffs . params, must be >= 0
  bool pass = false;
};

struct ValidationReport {
  std::vector<RowCheck> rows;
  bool rows_ok = true;
  std::vector<double> eigenvalues;
  bool has_negative_eigenvalue = false;
  bool constant_nonnegative = true;
  bool valid = false;
};

inline ValidationReport validate_witness(const WitnessSpec& w) {
  ValidationReport rep;
  const auto x = table_coordinates(w);
  for (const auto& h : constraint_set(w.family, w.target)) {
    const double v = h.offset - detail::dot(h.normal, x);
    const bool pass = v >= -1e-12;
    rep.rows.push_back({h.tag, v, pass});
    rep.rows_ok = rep.rows_ok && pass;
  }
  rep.eigenvalues = family_eigenvalues(w);
  if (w.family == WitnessFamily::GhzProjector) {
    rep.constant_nonnegative = rep.eigenvalues[0] >= -1e-9;
    rep.has_negative_eigenvalue =
        std::any_of(rep.eigenvalues.begin() + 1, rep.eigenvalues.end(), [](double e) { return e < kDetectionThreshold; });
  } else {
    rep.has_negative_eigenvalue =
        std::any_of(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](double e) { return e < kDetectionThreshold; });
  }
  rep.valid = rep.rows_ok && rep.has_negative_eigenvalue && rep.constant_nonnegative;
  return rep;
}

/// The four operators I - ((-1)^i1 S1 + (-1)^i2 S2 - (-1)^(i1+i2) S12).
inline std::vector<WitnessSpec> stabilizer_positive_patterns() {
  std::vector<WitnessSpec> out;
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2) {
      const double s1 = i1 ? -1.0 : 1.0, s2 = i2 ? -1.0 : 1.0;
      out.push_back({WitnessFamily::Stabilizer, {1.0, -s1, -s2, s1 * s2}, ClassTarget::W_EW,
                     "positive" + std::to_string(i1) + std::to_string(i2)});
    }
  return out;
}

// ---- sampled bounds ---------------------------------------------------------

struct NamedCombo {
  std::string name;
  ComplexMatrix op;
};

/// -P12-P13+P23 style combinations and the eight stabilizer sign patterns.
inline std::vector<NamedCombo> named_combos() {
  std::vector<NamedCombo> out;
  out.push_back({"-P12-P13+P23", w_spin(0, -1, -1, 1)});
  out.push_back({"-P12+P13-P23", w_spin(0, -1, 1, -1)});
  out.push_back({"P12-P13-P23", w_spin(0, 1, -1, -1)});
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2) {
      const double s1 = i1 ? -1.0 : 1.0, s2 = i2 ? -1.0 : 1.0;
      auto sign = [](double s) { return s > 0 ? std::string("+") : std::string("-"); };
      out.push_back({sign(s1) + "S1" + sign(s2) + "S2" + sign(s1 * s2) + "S12", stab_ew(0, s1, s2, s1 * s2)});
      out.push_back({sign(s1) + "S1" + sign(s2) + "S2" + sign(-s1 * s2) + "S12", stab_ew(0, s1, s2, -s1 * s2)});
    }
  return out;
}

inline std::optional<ComplexMatrix> combo_by_name(const std::string& name) {
  for (auto& c : named_combos())
    if (c.name == name) return c.op;
  return std::nullopt;
}

struct BoundReport {
  double empirical_max = 0.0;
  double claimed = 0.0;
  bool never_exceeds = true;  // hard verdict
  double gap = 0.0;           // claimed - empirical_max, advisory
};

inline BoundReport verify_bound(const ComplexMatrix& combo, StateFamily family, double claimed, std::size_t samples,
                                std::uint64_t seed) {
  const auto m = maximize_expectation(combo, family, samples, seed);
  return {m.value, claimed, m.value <= claimed + 1e-6, claimed - m.value};
}

// ---- table dump / load ------------------------------------------------------

/// One row per line: coefficients, offset, tag (whitespace separated).
inline void dump_table(std::ostream& os, const std::vector<Halfspace>& rows) {
  os << std::setprecision(17);
  for (const auto& r : rows) {
    for (double c : r.normal) os << c << ' ';
    os << r.offset << ' ' << (r.tag.empty() ? "-" : r.tag) << '\n';
  }
}

inline std::vector<Halfspace> load_table(std::istream& is) {
  std::vector<Halfspace> rows;
  std::string line;
  std::size_t dim = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.size() < 3) throw InvalidInput("table row needs coefficients, offset and tag");
    std::vector<double> nums;
    for (std::size_t i = 0; i + 1 < tok.size(); ++i) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(tok[i], &used));
        if (used != tok[i].size()) throw InvalidInput("bad number '" + tok[i] + "'");
      } catch (const std::logic_error&) {
        throw InvalidInput("bad number '" + tok[i] + "'");
      }
    }
    Halfspace h;
    h.offset = nums.back();
    nums.pop_back();
    h.normal = std::move(nums);
    h.tag = tok.back();
    if (dim == 0) dim = h.normal.size();
    if (h.normal.size() != dim) throw InvalidInput("table rows differ in dimension");
    rows.push_back(std::move(h));
  }
  return rows;
}

}  // namespace trifermi
