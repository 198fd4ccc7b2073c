#pragma once

// Three-fermion reduced density matrix of the noninteracting Fermi gas:
// Slater factors, the (a, b, c) coefficients, rho3, validity, PPT, negativity.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trifermi/linalg.hpp"

namespace trifermi {

struct OneD {
  double kf_x = 0.0;
  double kf_r = 0.0;
};

struct TwoD {
  double kf_r = 0.0;
  double theta = 0.0;
};

using GeometryConfig = std::variant<OneD, TwoD>;

/// k_F times the pair distances (1-2, 1-3, 2-3).
struct PairSeparations {
  double x12 = 0.0;
  double x13 = 0.0;
  double x23 = 0.0;
};

inline PairSeparations separations(const GeometryConfig& g) {
  return std::visit(
      [](const auto& geo) -> PairSeparations {
        using T = std::decay_t<decltype(geo)>;
        if constexpr (std::is_same_v<T, OneD>) {
          if (!(geo.kf_x >= 0.0) || !(geo.kf_r >= 0.0)) throw InvalidInput("1-d distances must be nonnegative");
          return {geo.kf_x, geo.kf_r, std::abs(geo.kf_r - geo.kf_x)};
        } else {
          if (!(geo.kf_r >= 0.0)) throw InvalidInput("2-d radius must be nonnegative");
          if (!(geo.theta >= 0.0 && geo.theta < 2 * std::numbers::pi))
            throw InvalidInput("2-d angle must lie in [0, 2pi)");
          // |.| keeps the cos/sin separations nonnegative past theta = pi.
          return {std::abs(geo.kf_r * std::cos(0.5 * geo.theta)), geo.kf_r,
                  std::abs(geo.kf_r * std::sin(0.5 * geo.theta))};
        }
      },
      g);
}

/// 1 - f(x), accurate for small x where 1 - f cancels.
inline double slater_complement(double x) {
  if (!(x >= 0.0)) throw InvalidInput("slater_complement needs x >= 0");
  if (x > 2.0) return 1.0 - 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
  // sum_{n>=2} (-1)^n 6n x^(2n-2) / (2n+1)!
  const double x2 = x * x;
  double power = x2;      // x^(2n-2) at n = 2
  double fact = 120.0;    // (2n+1)! at n = 2
  double sum = 0.0;
  for (int n = 2; n < 40; ++n) {
    const double term = 6.0 * n * power / fact;
    sum += (n % 2 == 0) ? term : -term;
    if (term < 1e-18 * std::abs(sum)) break;
    power *= x2;
    fact *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
  }
  return sum;
}

/// f(x) = 3 (sin x - x cos x) / x^3, f(0) = 1.
inline double slater_factor(double x) {
  if (!(x >= 0.0)) throw InvalidInput("slater_factor needs x >= 0");
  if (x <= 2.0) return 1.0 - slater_complement(x);
  return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

/// Spherical Bessel j1(x) = (sin x - x cos x) / x^2.
inline double spherical_j1(double x) {
  if (x < 1e-4) return x / 3.0;
  return (std::sin(x) - x * std::cos(x)) / (x * x);
}

struct EntanglementRadius {
  double kf_re = 0.0;                 // smallest root of f^2 = 1/2
  std::optional<double> j1_root;      // smallest root of j1^2 = 1/2, if any
  double j1_max = 0.0;                // max of j1 on the scanned range
  double j1_argmax = 0.0;
};

namespace detail {

template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline EntanglementRadius entanglement_radius() {
  EntanglementRadius out;
  // f decreases monotonically from 1 to 3/pi^2 on [0, pi].
  auto h = [](double x) {
    const double f = slater_factor(x);
    return f * f - 0.5;
  };
  out.kf_re = detail::bisect(h, 0.0, std::numbers::pi, 1e-12);

  constexpr double step = 1e-3;
  for (double x = 0.0; x <= 20.0; x += step) {
    const double j = std::abs(spherical_j1(x));
    if (j > out.j1_max) {
      out.j1_max = j;
      out.j1_argmax = x;
    }
    if (!out.j1_root && j * j >= 0.5) {
      auto hj = [](double y) {
        const double v = spherical_j1(y);
        return v * v - 0.5;
      };
      out.j1_root = detail::bisect(hj, x - step, x, 1e-12);
    }
  }
  return out;
}

struct NifgCoefficients {
  double a = 0.0;  // p12
  double b = 0.0;  // p13
  double c = 0.0;  // p23
  double eta = 0.125;

  static NifgCoefficients from_triple(double a, double b, double c) { return {a, b, c, (1.0 - a - b - c) / 8.0}; }
};

struct SlaterFactors {
  double f12 = 0.0, f13 = 0.0, f23 = 0.0;
};

inline SlaterFactors slater_factors(const GeometryConfig& g) {
  const auto s = separations(g);
  return {slater_factor(s.x12), slater_factor(s.x13), slater_factor(s.x23)};
}

/// p_ij in terms of g = 1 - f. The f-form loses about 1e-4 absolute accuracy
/// near coincidence; this form is algebraically identical.
inline NifgCoefficients coefficients_from_complements(double g12, double g13, double g23) {
  const double e1 = g12 + g13 + g23;
  const double e2 = g12 * g13 + g12 * g23 + g13 * g23;
  const double e3 = g12 * g13 * g23;
  const double sq = g12 * g12 + g13 * g13 + g23 * g23;
  const double d = -e1 + sq - e2 + e3;
  if (std::abs(d) < 1e-12) throw CoincidentParticles("p_ij denominator vanishes (coincident particles)");
  const double common = e2 - e3;
  const double n12 = g12 - g13 - g23 - g12 * g12 + common;
  const double n13 = g13 - g12 - g23 - g13 * g13 + common;
  const double n23 = g23 - g12 - g13 - g23 * g23 + common;
  return NifgCoefficients::from_triple(n12 / d, n13 / d, n23 / d);
}

/// Straight transcription in terms of f; kept as a reference evaluation.
inline NifgCoefficients coefficients_from_factors(double f12, double f13, double f23) {
  const double prod = f12 * f13 * f23;
  const double d = -2.0 + f12 * f12 + f13 * f13 + f23 * f23 - prod;
  if (std::abs(d) < 1e-12) throw CoincidentParticles("p_ij denominator vanishes (coincident particles)");
  return NifgCoefficients::from_triple((-f12 * f12 + prod) / d, (-f13 * f13 + prod) / d, (-f23 * f23 + prod) / d);
}

inline NifgCoefficients coefficients_from_geometry(const GeometryConfig& g) {
  const auto s = separations(g);
  if (s.x12 == 0.0 || s.x13 == 0.0 || s.x23 == 0.0)
    throw CoincidentParticles("two fermions share a position");
  return coefficients_from_complements(slater_complement(s.x12), slater_complement(s.x13),
                                       slater_complement(s.x23));
}

/// The explicit 8x8 matrix, entry by entry.
inline ComplexMatrix rho3_explicit(const NifgCoefficients& k) {
  const double e = k.eta;
  ComplexMatrix m(8, 8);
  m(0, 0) = e;
  m(7, 7) = e;
  m(1, 1) = m(6, 6) = e + (k.b + k.c) / 4.0;
  m(2, 2) = m(5, 5) = e + (k.a + k.c) / 4.0;
  m(3, 3) = m(4, 4) = e + (k.a + k.b) / 4.0;
  m(1, 2) = m(2, 1) = -k.c / 4.0;
  m(1, 4) = m(4, 1) = -k.b / 4.0;
  m(2, 4) = m(4, 2) = -k.a / 4.0;
  m(3, 5) = m(5, 3) = -k.a / 4.0;
  m(3, 6) = m(6, 3) = -k.b / 4.0;
  m(5, 6) = m(6, 5) = -k.c / 4.0;
  return m;
}

/// I/8 - (a/8) P12 - (b/8) P13 - (c/8) P23.
inline ComplexMatrix rho3_pauli(const NifgCoefficients& k) {
  ComplexMatrix m = ComplexMatrix::identity(8) * (1.0 / 8.0);
  m -= (k.a / 8.0) * spin_product(1, 2);
  m -= (k.b / 8.0) * spin_product(1, 3);
  m -= (k.c / 8.0) * spin_product(2, 3);
  return m;
}

inline constexpr double kPsdSlack = 1e-10;

/// Pauli form, cross-checked against the explicit form and for positivity.
inline ComplexMatrix build_rho3(const NifgCoefficients& k) {
  ComplexMatrix rho = rho3_pauli(k);
  if (max_abs_diff(rho, rho3_explicit(k)) > 1e-14)
    throw std::logic_error("rho3: Pauli and explicit forms disagree");
  if (min_eigenvalue(rho) < -kPsdSlack) throw InvalidInput("coefficient triple gives a non-positive rho3");
  return rho;
}

/// Closed-form spectrum, ascending: eta (x4) and the two doubly degenerate branches.
inline std::vector<double> rho3_eigenvalues(const NifgCoefficients& k) {
  const double q = k.a * k.a + k.b * k.b + k.c * k.c - k.a * k.b - k.b * k.c - k.a * k.c;
  const double r = 0.25 * std::sqrt(std::max(0.0, q));
  const double base = 0.125 + (k.a + k.b + k.c) / 8.0;
  std::vector<double> ev{k.eta, k.eta, k.eta, k.eta, base - r, base - r, base + r, base + r};
  std::sort(ev.begin(), ev.end());
  return ev;
}

struct ValidityReport {
  bool valid = true;
  std::vector<std::string> failed;
};

inline ValidityReport validity(const NifgCoefficients& k) {
  constexpr double slack = 1e-12;
  ValidityReport rep;
  const double q = k.a * k.a + k.b * k.b + k.c * k.c - k.a * k.b - k.b * k.c - k.a * k.c;
  const double base = 0.125 + (k.a + k.b + k.c) / 8.0;
  const double r = 0.25 * std::sqrt(std::max(0.0, q));
  if (base - r < -slack || base + r < -slack) rep.failed.emplace_back("branch eigenvalues 1/8 + (a+b+c)/8 +- sqrt(q)/4 >= 0");
  if (q < -slack) rep.failed.emplace_back("a^2+b^2+c^2 >= ab+bc+ac");
  if (k.eta < -slack) rep.failed.emplace_back("eta >= 0");
  rep.valid = rep.failed.empty();
  return rep;
}

/// Spectrum of rho3^{T_party}: (1-m)/8 (x4) and (1+m)/8 +- sqrt(q)/4 (x2).
struct PptForm {
  double m = 0.0;
  double q = 0.0;
};

inline PptForm ppt_form(const NifgCoefficients& k, int party) {
  require_party(party);
  const double a = k.a, b = k.b, c = k.c;
  const double sq = a * a + b * b + c * c;
  switch (party) {
    case 1:
      return {-a - b + c, sq + a * c + b * c - a * b};
    case 2:
      return {-a + b - c, sq - a * c + b * c + a * b};
    default:
      return {a - b - c, sq + a * c - b * c + a * b};
  }
}

/// Closed-form test for rho3^{T_party} >= 0. The slack 8e-10 mirrors the
/// spectral threshold -1e-10 on eigenvalues that carry a 1/8.
inline bool ppt_condition(const NifgCoefficients& k, int party) {
  constexpr double slack = 8.0 * kPsdSlack;
  const auto [m, q] = ppt_form(k, party);
  if (q < -slack) return false;
  const double root = std::sqrt(std::max(0.0, q));
  return 2.0 * root - 1.0 <= m + slack && m <= 1.0 + slack;
}

inline bool ppt_spectral(const NifgCoefficients& k, int party) {
  return min_eigenvalue(partial_transpose(rho3_pauli(k), party)) >= -kPsdSlack;
}

/// (||rho^{T_party}||_1 - 1) / 2.
inline double negativity(const NifgCoefficients& k, int party) {
  const double n = 0.5 * (trace_norm(partial_transpose(rho3_pauli(k), party)) - 1.0);
  return std::max(0.0, n);
}

}  // namespace trifermi
