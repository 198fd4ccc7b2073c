#pragma once

// Three-qubit pure-state families (product, biseparable, W, GHZ), local
// unitary machinery, and seeded samplers over the B and W convex sets.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "trifermi/linalg.hpp"

namespace trifermi {

/// Amplitudes A_ijk indexed by the basis label 4i + 2j + k.
struct PureState {
  std::array<cplx, 8> amplitudes{};

  cplx operator[](unsigned label) const { return amplitudes[label]; }
  cplx& operator[](unsigned label) { return amplitudes[label]; }

  std::span<const cplx> span() const { return amplitudes; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& z : amplitudes) s += std::norm(z);
    return s;
  }

  ComplexMatrix projector() const { return trifermi::projector(span()); }

  static PureState basis(unsigned label) {
    PureState s;
    s.amplitudes[label] = 1.0;
    return s;
  }

  static PureState from(std::span<const cplx> v) {
    if (v.size() != 8) throw InvalidInput("PureState needs 8 amplitudes");
    PureState s;
    std::copy(v.begin(), v.end(), s.amplitudes.begin());
    return s;
  }
};

inline cplx overlap(const PureState& a, const PureState& b) { return inner(a.span(), b.span()); }

inline PureState normalized(PureState s) {
  const double n = std::sqrt(s.norm_squared());
  if (n == 0.0) throw InvalidInput("cannot normalize the zero vector");
  for (auto& z : s.amplitudes) z /= n;
  return s;
}

struct WParams {
  std::array<double, 4> lambda{};
};

struct GhzParams {
  std::array<double, 5> lambda{};
  double theta = 0.0;
};

/// One (alpha, beta) pair per party; |0> -> alpha|0> + beta|1>, |1> -> beta*|0> - alpha*|1>.
struct LocalSU2 {
  struct Pair {
    cplx alpha = 1.0;
    cplx beta = 0.0;
  };
  std::array<Pair, 3> party{};

  static LocalSU2 identity() { return {}; }
};

namespace detail {

inline void require_unit_lambdas(std::span<const double> lambda) {
  double s = 0.0;
  for (double l : lambda) {
    if (l < 0.0) throw InvalidInput("lambda coefficients must be nonnegative");
    s += l * l;
  }
  if (std::abs(s - 1.0) > 1e-12) throw InvalidInput("lambda coefficients must have unit norm");
}

inline void require_unitary_pairs(const LocalSU2& u) {
  for (const auto& p : u.party)
    if (std::abs(std::norm(p.alpha) + std::norm(p.beta) - 1.0) > 1e-12)
      throw InvalidInput("local SU(2) pair violates |alpha|^2 + |beta|^2 = 1");
}

}  // namespace detail

/// Single-party map whose columns are the images of |0> and |1>.
inline ComplexMatrix local_map(cplx alpha, cplx beta) {
  return {{alpha, std::conj(beta)}, {beta, -std::conj(alpha)}};
}

inline ComplexMatrix local_unitary(const LocalSU2& u) {
  detail::require_unitary_pairs(u);
  return kron(local_map(u.party[0].alpha, u.party[0].beta), local_map(u.party[1].alpha, u.party[1].beta),
              local_map(u.party[2].alpha, u.party[2].beta));
}

/// |Psi^-_ij><Psi^-_ij| (x) I on the remaining party.
inline ComplexMatrix singlet_projector(int i, int j) {
  require_party(i);
  require_party(j);
  if (i == j) throw InvalidInput("singlet_projector needs two distinct parties");
  const unsigned bi = party_bit(i);
  const unsigned bj = party_bit(j);
  ComplexMatrix p(8, 8);
  // Singlet support: labels where bits i and j differ. The amplitude is
  // +1/sqrt2 when the lower-numbered party holds 0.
  const unsigned lo = party_bit(std::min(i, j));
  for (unsigned r = 0; r < 8; ++r) {
    if (((r & bi) != 0) == ((r & bj) != 0)) continue;
    for (unsigned c = 0; c < 8; ++c) {
      if (((c & bi) != 0) == ((c & bj) != 0)) continue;
      if ((r & ~(bi | bj)) != (c & ~(bi | bj))) continue;
      const double sr = (r & lo) ? -1.0 : 1.0;
      const double sc = (c & lo) ? -1.0 : 1.0;
      p(r, c) = 0.5 * sr * sc;
    }
  }
  return p;
}

struct WBasis {
  PureState w1;           // (|001> + |010> + |100>)/sqrt3
  PureState w2;           // (|011> + |110> + |101>)/sqrt3
  PureState ghz_singlet;  // (|000> - |111>)/sqrt2
};

inline WBasis w_basis_states() {
  const double r3 = 1.0 / std::sqrt(3.0);
  const double r2 = 1.0 / std::sqrt(2.0);
  WBasis b;
  b.w1[0b001] = b.w1[0b010] = b.w1[0b100] = r3;
  b.w2[0b011] = b.w2[0b110] = b.w2[0b101] = r3;
  b.ghz_singlet[0b000] = r2;
  b.ghz_singlet[0b111] = -r2;
  return b;
}

/// Locally rotated generic W vector, written out amplitude by amplitude.
inline PureState generic_w(const WParams& p, const LocalSU2& u) {
  detail::require_unit_lambdas(p.lambda);
  detail::require_unitary_pairs(u);
  const auto [l0, l1, l2, l3] = p.lambda;
  const cplx a1 = u.party[0].alpha, b1 = u.party[0].beta;
  const cplx a2 = u.party[1].alpha, b2 = u.party[1].beta;
  const cplx a3 = u.party[2].alpha, b3 = u.party[2].beta;
  const cplx a1c = std::conj(a1), b1c = std::conj(b1);
  const cplx a2c = std::conj(a2), b2c = std::conj(b2);
  const cplx a3c = std::conj(a3), b3c = std::conj(b3);

  PureState s;
  s[0b000] = l0 * a1 * a2 * a3 + l1 * b1c * a2 * a3 + l2 * b1c * a2 * b3c + l3 * b1c * b2c * a3;
  s[0b001] = l0 * a1 * a2 * b3 + l1 * b1c * a2 * b3 - l2 * b1c * a2 * a3c + l3 * b1c * b2c * b3;
  s[0b010] = l0 * a1 * b2 * a3 + l1 * b1c * b2 * a3 + l2 * b1c * b2 * b3c - l3 * b1c * a2c * a3;
  s[0b011] = l0 * a1 * b2 * b3 + l1 * b1c * b2 * b3 - l2 * b1c * b2 * a3c - l3 * b1c * a2c * b3;
  s[0b100] = l0 * b1 * a2 * a3 - l1 * a1c * a2 * a3 - l2 * a1c * a2 * b3c - l3 * a1c * b2c * a3;
  s[0b101] = l0 * b1 * a2 * b3 - l1 * a1c * a2 * b3 + l2 * a1c * a2 * a3c - l3 * a1c * b2c * b3;
  s[0b110] = l0 * b1 * b2 * a3 - l1 * a1c * b2 * a3 - l2 * a1c * b2 * b3c + l3 * a1c * a2c * a3;
  s[0b111] = l0 * b1 * b2 * b3 - l1 * a1c * b2 * b3 + l2 * a1c * b2 * a3c + l3 * a1c * a2c * b3;
  return s;
}

inline PureState generic_ghz(const GhzParams& p, const LocalSU2& u) {
  detail::require_unit_lambdas(p.lambda);
  if (p.theta < 0.0 || p.theta > std::numbers::pi) throw InvalidInput("GHZ phase theta must lie in [0, pi]");
  PureState canonical;
  canonical[0b000] = p.lambda[0];
  canonical[0b100] = p.lambda[1] * std::polar(1.0, p.theta);
  canonical[0b101] = p.lambda[2];
  canonical[0b110] = p.lambda[3];
  canonical[0b111] = p.lambda[4];
  return PureState::from(matvec(local_unitary(u), canonical.span()));
}

/// Single qubit (party `alone`) times a two-qubit state on the other parties,
/// which are taken in ascending order.
inline PureState biseparable_state(int alone, std::array<cplx, 2> qubit, std::array<cplx, 4> pair) {
  require_party(alone);
  const unsigned ba = party_bit(alone);
  std::array<unsigned, 2> others{};
  int n = 0;
  for (int p = 1; p <= 3; ++p)
    if (p != alone) others[n++] = party_bit(p);
  PureState s;
  for (unsigned label = 0; label < 8; ++label) {
    const unsigned q = (label & ba) ? 1 : 0;
    const unsigned hi = (label & others[0]) ? 1 : 0;
    const unsigned lo = (label & others[1]) ? 1 : 0;
    s[label] = qubit[q] * pair[2 * hi + lo];
  }
  return s;
}

inline PureState product_state(std::array<cplx, 2> q1, std::array<cplx, 2> q2, std::array<cplx, 2> q3) {
  return biseparable_state(1, q1, {q2[0] * q3[0], q2[0] * q3[1], q2[1] * q3[0], q2[1] * q3[1]});
}

/// Expectation values of the spin products, stabilizers and the rescaled
/// projectors (2 x singlet sum, 3|W1><W1|, 3|W2><W2|, 2|GHZ-><GHZ-|),
/// evaluated directly from the amplitudes.
struct AmplitudeExpectations {
  double p12 = 0, p13 = 0, p23 = 0;
  double s1 = 0, s2 = 0, s12 = 0;
  double proj1 = 0, proj2 = 0, proj3 = 0, proj4 = 0;
};

inline AmplitudeExpectations amplitude_expectations(const PureState& s) {
  auto n = [&](unsigned l) { return std::norm(s[l]); };
  auto re = [&](unsigned x, unsigned y) { return (s[x] * std::conj(s[y])).real(); };
  AmplitudeExpectations e;
  e.p12 = n(0) + n(1) - n(2) - n(3) - n(4) - n(5) + n(6) + n(7) + 4.0 * (re(0b010, 0b100) + re(0b011, 0b101));
  e.p23 = n(0) - n(1) - n(2) + n(3) + n(4) - n(5) - n(6) + n(7) + 4.0 * (re(0b001, 0b010) + re(0b101, 0b110));
  e.p13 = n(0) - n(1) + n(2) - n(3) - n(4) + n(5) - n(6) + n(7) + 4.0 * (re(0b001, 0b100) + re(0b011, 0b110));
  e.s1 = 2.0 * (re(0b000, 0b111) + re(0b001, 0b110) + re(0b010, 0b101) + re(0b011, 0b100));
  e.s2 = n(0) + n(1) - n(2) - n(3) - n(4) - n(5) + n(6) + n(7);
  e.s12 = 2.0 * (re(0b000, 0b111) + re(0b001, 0b110) - re(0b010, 0b101) - re(0b011, 0b100));
  e.proj1 = std::norm(s[0b010] - s[0b100]) + std::norm(s[0b011] - s[0b101]) + std::norm(s[0b001] - s[0b100]) +
            std::norm(s[0b011] - s[0b110]) + std::norm(s[0b001] - s[0b010]) + std::norm(s[0b101] - s[0b110]);
  e.proj2 = std::norm(s[0b001] + s[0b010] + s[0b100]);
  e.proj3 = std::norm(s[0b011] + s[0b110] + s[0b101]);
  e.proj4 = std::norm(s[0b000] - s[0b111]);
  return e;
}

enum class StateFamily { Biseparable, W, All };

/// Seeded source for random states. One instance owns one stream.
class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double gaussian() { return normal_(rng_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Haar-uniform SU(2) column: uniform phases, polar angle uniform in cos.
  LocalSU2::Pair haar_pair() {
    const double cos_theta = uniform(-1.0, 1.0);
    const double half = 0.5 * std::acos(cos_theta);
    return {std::polar(std::cos(half), uniform(0.0, 2 * std::numbers::pi)),
            std::polar(std::sin(half), uniform(0.0, 2 * std::numbers::pi))};
  }

  LocalSU2 haar_local() { return {{haar_pair(), haar_pair(), haar_pair()}}; }

  std::array<cplx, 2> qubit() {
    const auto p = haar_pair();
    return {p.alpha, p.beta};
  }

  std::array<cplx, 4> two_qubit() {
    std::array<cplx, 4> v{};
    double s = 0.0;
    for (auto& z : v) {
      z = {gaussian(), gaussian()};
      s += std::norm(z);
    }
    for (auto& z : v) z /= std::sqrt(s);
    return v;
  }

  PureState product() { return product_state(qubit(), qubit(), qubit()); }

  PureState biseparable(int alone) { return biseparable_state(alone, qubit(), two_qubit()); }

  WParams w_params() {
    WParams p;
    double s = 0.0;
    for (auto& l : p.lambda) {
      l = std::abs(gaussian());
      s += l * l;
    }
    for (auto& l : p.lambda) l /= std::sqrt(s);
    return p;
  }

  PureState w_vector() { return generic_w(w_params(), haar_local()); }

  /// Symmetric Dirichlet(1) weights.
  std::vector<double> dirichlet(int n) {
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& x : w) {
      x = -std::log(1.0 - uniform());
      s += x;
    }
    for (auto& x : w) x /= s;
    return w;
  }

  /// Mixture of 2..6 pure terms, each a product state or a state entangled
  /// across one of the splits 1-23, 2-13, 3-12.
  ComplexMatrix sample_biseparable() {
    const int terms = uniform_int(2, 6);
    const auto w = dirichlet(terms);
    ComplexMatrix rho(8, 8);
    for (int t = 0; t < terms; ++t) {
      const int kind = uniform_int(0, 3);
      const PureState s = kind == 0 ? product() : biseparable(kind);
      rho += w[t] * s.projector();
    }
    return rho;
  }

  /// Mixture whose first term is a generic W vector; the rest are drawn
  /// from product, biseparable and W vectors.
  ComplexMatrix sample_w_mixed() {
    const int terms = uniform_int(2, 6);
    const auto w = dirichlet(terms);
    ComplexMatrix rho = w[0] * w_vector().projector();
    for (int t = 1; t < terms; ++t) {
      const int kind = uniform_int(0, 4);
      const PureState s = kind == 0 ? product() : kind == 4 ? w_vector() : biseparable(kind);
      rho += w[t] * s.projector();
    }
    return rho;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Real-coordinate chart onto a family of pure states.
struct StateChart {
  std::size_t dim = 0;
  std::function<PureState(std::span<const double>)> build;
  std::function<std::vector<double>(StateSampler&)> draw;
};

namespace detail {

inline std::array<cplx, 2> qubit_from(double theta, double phi) {
  return {std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi)};
}

}  // namespace detail

/// Party `alone` as (theta, phi) plus eight raw reals for the other pair.
inline StateChart biseparable_chart(int alone) {
  require_party(alone);
  StateChart c;
  c.dim = 10;
  c.build = [alone](std::span<const double> x) {
    std::array<cplx, 4> pair{cplx(x[2], x[3]), cplx(x[4], x[5]), cplx(x[6], x[7]), cplx(x[8], x[9])};
    double s = 0.0;
    for (auto& z : pair) s += std::norm(z);
    if (s == 0.0) pair[0] = 1.0, s = 1.0;
    for (auto& z : pair) z /= std::sqrt(s);
    return biseparable_state(alone, detail::qubit_from(x[0], x[1]), pair);
  };
  c.draw = [](StateSampler& rng) {
    std::vector<double> x(10);
    x[0] = std::acos(rng.uniform(-1.0, 1.0));
    x[1] = rng.uniform(0.0, 2 * std::numbers::pi);
    for (int i = 2; i < 10; ++i) x[i] = rng.gaussian();
    return x;
  };
  return c;
}

/// Three hyperspherical angles for lambda plus (theta, phi_alpha, phi_beta) per party.
inline StateChart w_chart() {
  StateChart c;
  c.dim = 12;
  c.build = [](std::span<const double> x) {
    WParams p;
    const double s0 = std::sin(x[0]), s1 = std::sin(x[1]);
    p.lambda = {std::abs(std::cos(x[0])), std::abs(s0 * std::cos(x[1])), std::abs(s0 * s1 * std::cos(x[2])),
                std::abs(s0 * s1 * std::sin(x[2]))};
    double norm = 0.0;
    for (double l : p.lambda) norm += l * l;
    for (double& l : p.lambda) l /= std::sqrt(norm);
    LocalSU2 u;
    for (int k = 0; k < 3; ++k) {
      const double t = x[3 + 3 * k];
      u.party[k] = {std::polar(std::cos(0.5 * t), x[4 + 3 * k]), std::polar(std::sin(0.5 * t), x[5 + 3 * k])};
    }
    return generic_w(p, u);
  };
  c.draw = [](StateSampler& rng) {
    const WParams p = rng.w_params();
    std::vector<double> x(12);
    const auto& l = p.lambda;
    x[0] = std::acos(std::clamp(l[0], 0.0, 1.0));
    const double r1 = std::sqrt(std::max(0.0, 1.0 - l[0] * l[0]));
    x[1] = r1 > 0 ? std::acos(std::clamp(l[1] / r1, -1.0, 1.0)) : 0.0;
    x[2] = std::atan2(l[3], l[2]);
    for (int k = 0; k < 3; ++k) {
      x[3 + 3 * k] = std::acos(rng.uniform(-1.0, 1.0));
      x[4 + 3 * k] = rng.uniform(0.0, 2 * std::numbers::pi);
      x[5 + 3 * k] = rng.uniform(0.0, 2 * std::numbers::pi);
    }
    return x;
  };
  return c;
}

/// Coordinate-wise golden-section ascent; every coordinate is searched on a
/// window around its current value that shrinks as the passes proceed.
inline double golden_section_ascent(const std::function<double(std::span<const double>)>& f, std::vector<double>& x,
                                    int iterations = 200, double initial_half_width = 1.0) {
  constexpr double inv_phi = 0.6180339887498949;
  double best = f(x);
  const std::size_t dim = x.size();
  for (int it = 0; it < iterations; ++it) {
    const std::size_t k = static_cast<std::size_t>(it) % dim;
    const double pass = static_cast<double>(it / static_cast<int>(dim));
    const double h = initial_half_width * std::pow(0.7, pass);
    std::vector<double> y = x;
    auto eval = [&](double v) {
      y[k] = v;
      return f(y);
    };
    double lo = x[k] - h, hi = x[k] + h;
    double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
    double fc = eval(c), fd = eval(d);
    for (int g = 0; g < 40; ++g) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - inv_phi * (hi - lo);
        fc = eval(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + inv_phi * (hi - lo);
        fd = eval(d);
      }
    }
    const double cand = 0.5 * (lo + hi);
    const double fcand = eval(cand);
    if (fcand > best) {
      best = fcand;
      x[k] = cand;
    }
  }
  return best;
}

struct SampledMax {
  double value = -std::numeric_limits<double>::infinity();
  PureState state;
};

/// Monte-Carlo maximum of a real functional over a chart, followed by
/// golden-section refinement from the best sample.
inline SampledMax maximize_over_chart(const std::function<double(const PureState&)>& objective, const StateChart& chart,
                                      std::size_t samples, StateSampler& rng, int refine_iterations = 200) {
  std::vector<double> best_x;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    auto x = chart.draw(rng);
    const double v = objective(chart.build(x));
    if (v > best) {
      best = v;
      best_x = std::move(x);
    }
  }
  SampledMax out;
  if (best_x.empty()) return out;
  auto f = [&](std::span<const double> x) { return objective(chart.build(x)); };
  out.value = golden_section_ascent(f, best_x, refine_iterations);
  out.state = chart.build(best_x);
  return out;
}

/// Maximum of <psi|op|psi> over the pure states generating the chosen set.
/// B: biseparable vectors over all three splits (product states included).
/// W: B plus generic W vectors. All: the largest eigenvalue.
inline SampledMax maximize_expectation(const ComplexMatrix& op, StateFamily family, std::size_t samples,
                                       std::uint64_t seed, int refine_iterations = 200) {
  SampledMax best;
  if (family == StateFamily::All) {
    const auto spec = hermitian_eigs(op);
    best.value = spec.max();
    best.state = PureState::from(spec.vector(spec.eigenvalues.size() - 1));
    return best;
  }
  StateSampler rng(seed);
  auto objective = [&op](const PureState& s) { return expectation(op, s.span()); };
  std::vector<StateChart> charts{biseparable_chart(1), biseparable_chart(2), biseparable_chart(3)};
  if (family == StateFamily::W) charts.push_back(w_chart());
  const std::size_t per_chart = (samples + charts.size() - 1) / charts.size();
  for (const auto& chart : charts) {
    auto m = maximize_over_chart(objective, chart, per_chart, rng, refine_iterations);
    if (m.value > best.value) best = m;
  }
  return best;
}

}  // namespace trifermi
