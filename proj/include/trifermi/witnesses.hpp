#pragma once

// Witness operators (spin-chain, projector, stabilizer), their traces against
// rho3, rotation searches and the classification verdict.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trifermi/nifg.hpp"
#include "trifermi/states.hpp"

namespace trifermi {

inline const double kSqrt2 = std::sqrt(2.0);
inline const double kSqrt5 = std::sqrt(5.0);
inline const double kSqrt8 = std::sqrt(8.0);
inline constexpr double kStabGhzConstant = 2.98;
inline constexpr double kDetectionThreshold = -1e-9;

// ---- spin-chain family ------------------------------------------------------

inline ComplexMatrix w_spin(double a0, double a12, double a13, double a23) {
  ComplexMatrix w = a0 * ComplexMatrix::identity(8);
  w += a12 * spin_product(1, 2);
  w += a13 * spin_product(1, 3);
  w += a23 * spin_product(2, 3);
  return w;
}

/// c0 I + P12 + P23.
inline ComplexMatrix w_one(double c0) { return w_spin(c0, 1.0, 0.0, 1.0); }

inline ComplexMatrix w_gen() { return w_one(1.0 + kSqrt5); }

/// E1 = a0 + sum a, E2,3 = a0 - sum a -+ 2 sqrt(Q).
inline std::array<double, 3> spin_eigenvalues(double a0, double a12, double a13, double a23) {
  const double q = a12 * a12 + a13 * a13 + a23 * a23 - a12 * a13 - a12 * a23 - a13 * a23;
  const double r = 2.0 * std::sqrt(std::max(0.0, q));
  const double s = a12 + a13 + a23;
  return {a0 + s, a0 - s - r, a0 - s + r};
}

/// Tr(w_spin rho3) = a0 - 3 (a12 a + a13 b + a23 c).
inline double trace_w_spin(const NifgCoefficients& k, double a0, double a12, double a13, double a23) {
  return a0 - 3.0 * (a12 * k.a + a13 * k.b + a23 * k.c);
}

inline double trace_w_gen(const NifgCoefficients& k) { return 1.0 + kSqrt5 - 3.0 * (k.a + k.c); }

inline double trace_w_spin0(const NifgCoefficients& k) { return 1.0 + kSqrt8 - 3.0 * (k.a + k.b - k.c); }

// ---- projector family -------------------------------------------------------

inline ComplexMatrix singlet_sum() { return singlet_projector(1, 2) + singlet_projector(1, 3) + singlet_projector(2, 3); }

inline ComplexMatrix ghz_projector_ew(double a0, double a1, double a2, double a3, double a4) {
  const auto basis = w_basis_states();
  ComplexMatrix w = a0 * ComplexMatrix::identity(8);
  w += a1 * singlet_sum();
  w += a2 * basis.w1.projector();
  w += a3 * basis.w2.projector();
  w += a4 * basis.ghz_singlet.projector();
  return w;
}

/// Coefficients against P1 = 2 sum singlets, P2 = 3|W1><W1|, P3 = 3|W2><W2|, P4 = 2|GHZ-><GHZ-|.
inline std::array<double, 5> ghz_projector_hat_params(double a0, double a1, double a2, double a3, double a4) {
  return {a0, a1 / 2.0, a2 / 3.0, a3 / 3.0, a4 / 2.0};
}

/// a0, a0 + 3a1', a0 + 3a2', a0 + 3a3', a0 + 2a4' in the rescaled basis.
inline std::array<double, 5> ghz_projector_eigenvalues(double a0, double a1, double a2, double a3, double a4) {
  const auto h = ghz_projector_hat_params(a0, a1, a2, a3, a4);
  return {h[0], h[0] + 3.0 * h[1], h[0] + 3.0 * h[2], h[0] + 3.0 * h[3], h[0] + 2.0 * h[4]};
}

inline ComplexMatrix ghz_d0() { return ghz_projector_ew(15.0 / 4.0, -2.0, -3.0, -3.0, -4.0); }

/// Tr(0W_GHZ^d rho3). rho3 is eta on the symmetric quartet and
/// (1 - 4 eta)/4 per state on the rest, which gives 3/4 + 2 eta.
inline double trace_ghz0(const NifgCoefficients& k) { return 0.75 + 2.0 * k.eta; }

// ---- stabilizer family ------------------------------------------------------

struct Stabilizers {
  ComplexMatrix s1;   // X X X
  ComplexMatrix s2;   // Z Z I
  ComplexMatrix s12;  // S1 S2
};

inline Stabilizers stabilizers() {
  Stabilizers s{kron(pauli::X(), pauli::X(), pauli::X()), kron(pauli::Z(), pauli::Z(), pauli::I()), ComplexMatrix(8, 8)};
  s.s12 = s.s1 * s.s2;
  return s;
}

inline ComplexMatrix stab_ew(double b0, double b1, double b2, double b12) {
  const auto s = stabilizers();
  ComplexMatrix w = b0 * ComplexMatrix::identity(8);
  w += b1 * s.s1;
  w += b2 * s.s2;
  w += b12 * s.s12;
  return w;
}

/// b0 + (-1)^i1 b1 + (-1)^i2 b2 + (-1)^(i1+i2) b12, each with multiplicity 2.
inline std::array<double, 4> stab_eigenvalues(double b0, double b1, double b2, double b12) {
  std::array<double, 4> ev{};
  int n = 0;
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i2 = 0; i2 < 2; ++i2) {
      const double s1 = i1 ? -1.0 : 1.0;
      const double s2 = i2 ? -1.0 : 1.0;
      ev[n++] = b0 + s1 * b1 + s2 * b2 + s1 * s2 * b12;
    }
  return ev;
}

/// Only Z Z I has a nonzero trace against rho3: <S2> = -a.
inline double trace_stab(const NifgCoefficients& k, double b0, double b1, double b2, double b12) {
  (void)b1;
  (void)b12;
  return b0 - b2 * k.a;
}

inline double stabilizer_combination(const NifgCoefficients& k) { return -k.a; }

inline double trace_stab_w0(const NifgCoefficients& k) { return trace_stab(k, kSqrt2, 1, 1, -1); }
inline double trace_stab_ghz0(const NifgCoefficients& k) { return trace_stab(k, kStabGhzConstant, 1, 1, -1); }

// ---- rotations --------------------------------------------------------------

inline void require_unit_pair(cplx alpha, cplx beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw InvalidInput("rotation needs |alpha|^2 + |beta|^2 = 1");
}

/// [[beta*, alpha], [-alpha*, beta]] applied to all three parties.
inline ComplexMatrix same_rotation(cplx alpha, cplx beta) {
  require_unit_pair(alpha, beta);
  const ComplexMatrix u{{std::conj(beta), alpha}, {-std::conj(alpha), beta}};
  return kron(u, u, u);
}

inline ComplexMatrix rotated_rho3(const NifgCoefficients& k, cplx alpha, cplx beta) {
  const ComplexMatrix u = same_rotation(alpha, beta);
  return u * rho3_pauli(k) * u.adjoint();
}

// rho3 is built from I and sigma.sigma terms, both invariant under u(x)u(x)u,
// so the rotated traces reduce to the plain ones.

inline double rotated_trace_w_gen(const NifgCoefficients& k, cplx alpha, cplx beta) {
  require_unit_pair(alpha, beta);
  return trace_w_gen(k);
}

inline double rotated_trace_w_spin0(const NifgCoefficients& k, cplx alpha, cplx beta) {
  require_unit_pair(alpha, beta);
  return trace_w_spin0(k);
}

inline double rotated_trace_ghz0(const NifgCoefficients& k, cplx alpha, cplx beta) {
  require_unit_pair(alpha, beta);
  return trace_ghz0(k);
}

/// alpha = cos t, beta = sin t e^{i phi}.
inline std::pair<cplx, cplx> rotation_pair(double t, double phi) {
  return {cplx(std::cos(t), 0.0), std::polar(std::sin(t), phi)};
}

struct RotationOptimum {
  double value = 0.0;
  double t = 0.0;
  double phi = 0.0;
};

/// Nelder-Mead on a 2-d objective; stops when the simplex spread in value
/// falls below tol.
inline RotationOptimum nelder_mead_2d(const std::function<double(double, double)>& f, double t0, double phi0,
                                      double step, double tol = 1e-10, int max_iter = 2000) {
  struct P {
    double x, y, v;
  };
  std::array<P, 3> s{P{t0, phi0, f(t0, phi0)}, P{t0 + step, phi0, f(t0 + step, phi0)},
                     P{t0, phi0 + step, f(t0, phi0 + step)}};
  auto order = [&] { std::sort(s.begin(), s.end(), [](const P& a, const P& b) { return a.v < b.v; }); };
  for (int it = 0; it < max_iter; ++it) {
    order();
    if (std::abs(s[2].v - s[0].v) < tol && std::hypot(s[2].x - s[0].x, s[2].y - s[0].y) < 1e-9) break;
    const double cx = 0.5 * (s[0].x + s[1].x), cy = 0.5 * (s[0].y + s[1].y);
    auto at = [&](double k) {
      const double x = cx + k * (s[2].x - cx), y = cy + k * (s[2].y - cy);
      return P{x, y, f(x, y)};
    };
    const P r = at(-1.0);
    if (r.v < s[0].v) {
      const P e = at(-2.0);
      s[2] = e.v < r.v ? e : r;
    } else if (r.v < s[1].v) {
      s[2] = r;
    } else {
      const P c = r.v < s[2].v ? at(-0.5) : at(0.5);
      if (c.v < std::min(r.v, s[2].v)) {
        s[2] = c;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
          s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
          s[i].v = f(s[i].x, s[i].y);
        }
      }
    }
  }
  order();
  return {s[0].v, s[0].x, s[0].y};
}

/// Minimum of f(alpha, beta) over the same-rotation family: a 128 x 128 grid
/// over t in [0, pi/2], phi in [0, 2pi), then Nelder-Mead from the best cell.
inline RotationOptimum minimize_over_rotations(const std::function<double(cplx, cplx)>& f, int grid = 128) {
  auto g = [&](double t, double phi) {
    const auto [a, b] = rotation_pair(t, phi);
    return f(a, b);
  };
  RotationOptimum best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (int i = 0; i < grid; ++i) {
    const double t = 0.5 * std::numbers::pi * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / grid;
      const double v = g(t, phi);
      if (v < best.value) best = {v, t, phi};
    }
  }
  const auto polished = nelder_mead_2d(g, best.t, best.phi, 0.5 * std::numbers::pi / grid);
  return polished.value < best.value ? polished : best;
}

// ---- witness specs ----------------------------------------------------------

enum class WitnessFamily { SpinChainGen, SpinChainParam, GhzProjector, Stabilizer };
enum class ClassTarget { W_EW, GHZ_EW };

struct WitnessSpec {
  WitnessFamily family = WitnessFamily::SpinChainParam;
  std::vector<double> params;
  ClassTarget target = ClassTarget::W_EW;
  std::string name;
};

inline std::size_t param_count(WitnessFamily f) {
  switch (f) {
    case WitnessFamily::SpinChainGen:
      return 1;
    case WitnessFamily::SpinChainParam:
      return 4;
    case WitnessFamily::GhzProjector:
      return 5;
    case WitnessFamily::Stabilizer:
      return 4;
  }
  return 0;
}

inline void require_params(const WitnessSpec& w) {
  if (w.params.size() != param_count(w.family))
    throw InvalidInput("witness '" + w.name + "' expects " + std::to_string(param_count(w.family)) + " parameters, got " +
                       std::to_string(w.params.size()));
}

inline ComplexMatrix witness_operator(const WitnessSpec& w) {
  require_params(w);
  const auto& p = w.params;
  switch (w.family) {
    case WitnessFamily::SpinChainGen:
      return w_one(p[0]);
    case WitnessFamily::SpinChainParam:
      return w_spin(p[0], p[1], p[2], p[3]);
    case WitnessFamily::GhzProjector:
      return ghz_projector_ew(p[0], p[1], p[2], p[3], p[4]);
    case WitnessFamily::Stabilizer:
      return stab_ew(p[0], p[1], p[2], p[3]);
  }
  throw InvalidInput("unknown witness family");
}

/// The family's closed-form eigenvalue list.
inline std::vector<double> family_eigenvalues(const WitnessSpec& w) {
  require_params(w);
  const auto& p = w.params;
  switch (w.family) {
    case WitnessFamily::SpinChainGen: {
      const auto e = spin_eigenvalues(p[0], 1.0, 0.0, 1.0);
      return {e.begin(), e.end()};
    }
    case WitnessFamily::SpinChainParam: {
      const auto e = spin_eigenvalues(p[0], p[1], p[2], p[3]);
      return {e.begin(), e.end()};
    }
    case WitnessFamily::GhzProjector: {
      const auto e = ghz_projector_eigenvalues(p[0], p[1], p[2], p[3], p[4]);
      return {e.begin(), e.end()};
    }
    case WitnessFamily::Stabilizer: {
      const auto e = stab_eigenvalues(p[0], p[1], p[2], p[3]);
      return {e.begin(), e.end()};
    }
  }
  return {};
}

/// Closed-form Tr(W rho3).
inline double trace_against_rho3(const WitnessSpec& w, const NifgCoefficients& k) {
  require_params(w);
  const auto& p = w.params;
  switch (w.family) {
    case WitnessFamily::SpinChainGen:
      return trace_w_spin(k, p[0], 1.0, 0.0, 1.0);
    case WitnessFamily::SpinChainParam:
      return trace_w_spin(k, p[0], p[1], p[2], p[3]);
    case WitnessFamily::GhzProjector: {
      // Each projector is eta on the symmetric quartet; the singlet sum
      // averages to 3(1 - 4 eta)/2.
      return p[0] + p[1] * 1.5 * (1.0 - 4.0 * k.eta) + (p[2] + p[3] + p[4]) * k.eta;
    }
    case WitnessFamily::Stabilizer:
      return trace_stab(k, p[0], p[1], p[2], p[3]);
  }
  return 0.0;
}

namespace canonical {

inline WitnessSpec w_gen() { return {WitnessFamily::SpinChainGen, {1.0 + kSqrt5}, ClassTarget::W_EW, "wgen"}; }
inline WitnessSpec w_spin0() { return {WitnessFamily::SpinChainParam, {1.0 + kSqrt8, 1, 1, -1}, ClassTarget::W_EW, "wsp0"}; }
inline WitnessSpec ghz_d0() {
  return {WitnessFamily::GhzProjector, {15.0 / 4.0, -2, -3, -3, -4}, ClassTarget::GHZ_EW, "ghzd0"};
}
inline WitnessSpec stab_w0() { return {WitnessFamily::Stabilizer, {kSqrt2, 1, 1, -1}, ClassTarget::W_EW, "stabw0"}; }
inline WitnessSpec stab_ghz0() {
  return {WitnessFamily::Stabilizer, {kStabGhzConstant, 1, 1, -1}, ClassTarget::GHZ_EW, "stabghz0"};
}

inline std::vector<WitnessSpec> all() { return {w_gen(), w_spin0(), ghz_d0(), stab_w0(), stab_ghz0()}; }

inline std::optional<WitnessSpec> by_name(const std::string& name) {
  for (auto& w : all())
    if (w.name == name) return w;
  return std::nullopt;
}

}  // namespace canonical

// ---- classification ---------------------------------------------------------

enum class DetectedClass { None, GenuineTripartite_WminusB, GhzMinusW_candidate };

inline const char* to_string(DetectedClass d) {
  switch (d) {
    case DetectedClass::None:
      return "none";
    case DetectedClass::GenuineTripartite_WminusB:
      return "W\\B";
    case DetectedClass::GhzMinusW_candidate:
      return "GHZ\\W-candidate";
  }
  return "?";
}

struct WitnessReading {
  std::string name;
  ClassTarget target = ClassTarget::W_EW;
  double value = 0.0;
};

struct Verdict {
  DetectedClass detected_class = DetectedClass::None;
  double witness_value = 0.0;
  std::array<bool, 3> ppt_flags{};
  bool ppt_entangled = false;
  std::vector<WitnessReading> readings;
};

namespace detail {

inline Verdict verdict_from(std::vector<WitnessReading> readings, std::array<bool, 3> ppt) {
  Verdict v;
  v.readings = std::move(readings);
  v.ppt_flags = ppt;
  v.witness_value = std::numeric_limits<double>::infinity();
  bool w_hit = false, ghz_hit = false;
  for (const auto& r : v.readings) {
    v.witness_value = std::min(v.witness_value, r.value);
    if (r.value < kDetectionThreshold) (r.target == ClassTarget::GHZ_EW ? ghz_hit : w_hit) = true;
  }
  if (ghz_hit)
    v.detected_class = DetectedClass::GhzMinusW_candidate;
  else if (w_hit)
    v.detected_class = DetectedClass::GenuineTripartite_WminusB;
  v.ppt_entangled = v.detected_class != DetectedClass::None && (ppt[0] || ppt[1] || ppt[2]);
  return v;
}

}  // namespace detail

inline std::vector<WitnessSpec> select_witnesses(const std::vector<std::string>& names) {
  if (names.empty()) return canonical::all();
  std::vector<WitnessSpec> out;
  for (const auto& n : names) {
    auto w = canonical::by_name(n);
    if (!w) throw InvalidInput("unknown witness '" + n + "' (expected wgen, wsp0, ghzd0, stabw0, stabghz0)");
    out.push_back(*w);
  }
  return out;
}

/// Verdict for rho3(k) over the selected canonical witnesses.
inline Verdict classify(const NifgCoefficients& k, const std::vector<WitnessSpec>& selection = canonical::all()) {
  if (!validity(k).valid) throw InvalidInput("classify needs a valid coefficient triple");
  std::vector<WitnessReading> readings;
  for (const auto& w : selection) readings.push_back({w.name, w.target, trace_against_rho3(w, k)});
  return detail::verdict_from(std::move(readings), {ppt_condition(k, 1), ppt_condition(k, 2), ppt_condition(k, 3)});
}

/// Verdict for an arbitrary density matrix, evaluated by matrix traces and
/// spectral PPT tests.
inline Verdict classify_state(const ComplexMatrix& rho, const std::vector<WitnessSpec>& selection = canonical::all()) {
  std::vector<WitnessReading> readings;
  for (const auto& w : selection) readings.push_back({w.name, w.target, expectation(witness_operator(w), rho)});
  std::array<bool, 3> ppt{};
  for (int p = 1; p <= 3; ++p) ppt[p - 1] = min_eigenvalue(partial_transpose(rho, p)) >= -kPsdSlack;
  return detail::verdict_from(std::move(readings), ppt);
}

// ---- purity bound -----------------------------------------------------------

/// Tr(U|W1><W1|U^dag rho3) through the rotated vector.
inline double rotated_w1_overlap(const ComplexMatrix& rho, cplx alpha, cplx beta) {
  const auto v = matvec(same_rotation(alpha, beta), w_basis_states().w1.span());
  return expectation(rho, std::span<const cplx>(v));
}

struct PurityBound {
  double max_value = -std::numeric_limits<double>::infinity();
  double t = 0.0;
  double phi = 0.0;
};

/// Largest sampled Tr(rho'_W rho3) over same-rotations, refined by Nelder-Mead.
inline PurityBound purity_bound_check(const NifgCoefficients& k, std::size_t samples, std::uint64_t seed) {
  const ComplexMatrix rho = build_rho3(k);
  auto f = [&](double t, double phi) {
    const auto [a, b] = rotation_pair(t, phi);
    return rotated_w1_overlap(rho, a, b);
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PurityBound best;
  for (std::size_t i = 0; i < samples; ++i) {
    // |alpha|^2 uniform on [0, 1] matches the Haar measure on SU(2).
    const double t = std::acos(std::sqrt(unit(rng)));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const double v = f(t, phi);
    if (v > best.max_value) best = {v, t, phi};
  }
  if (samples > 0) {
    const auto refined = nelder_mead_2d([&](double t, double phi) { return -f(t, phi); }, best.t, best.phi, 0.05);
    if (-refined.value > best.max_value) best = {-refined.value, refined.t, refined.phi};
  }
  return best;
}

}  // namespace trifermi
