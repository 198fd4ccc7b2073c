// Acceptance runner: one PASS/FAIL line per criterion, detail lines indented.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "trifermi/trifermi.hpp"

using namespace trifermi;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGrid = 200;

struct GridPoint {
  GeometryConfig geo;
  NifgCoefficients k;
};

// 1-d: kf_r = 5i/200, kf_x = kf_r j/201. 2-d: kf_r = 5i/200, theta = 2pi(j - 1/2)/200.
std::vector<GridPoint> build_grid() {
  std::vector<GridPoint> g;
  g.reserve(2 * kGrid * kGrid);
  for (int i = 1; i <= kGrid; ++i) {
    const double r = 5.0 * i / kGrid;
    for (int j = 1; j <= kGrid; ++j) {
      const OneD o{r * j / (kGrid + 1), r};
      g.push_back({o, coefficients_from_geometry(o)});
    }
  }
  for (int i = 1; i <= kGrid; ++i) {
    const double r = 5.0 * i / kGrid;
    for (int j = 1; j <= kGrid; ++j) {
      const TwoD t{r, 2 * kPi * (j - 0.5) / kGrid};
      g.push_back({t, coefficients_from_geometry(t)});
    }
  }
  return g;
}

std::string describe(const GeometryConfig& g) {
  char buf[96];
  if (const auto* o = std::get_if<OneD>(&g))
    std::snprintf(buf, sizeof buf, "1d kf_r=%.4f kf_x=%.4f", o->kf_r, o->kf_x);
  else {
    const auto& t = std::get<TwoD>(g);
    std::snprintf(buf, sizeof buf, "2d kf_r=%.4f theta=%.4f", t.kf_r, t.theta);
  }
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---- 1 ----------------------------------------------------------------------

Outcome identity_of_forms(const std::vector<GridPoint>& grid) {
  Outcome o;
  double max_diff = 0, max_trace_err = 0, min_eig = 1;
  std::string worst;
  for (const auto& p : grid) {
    const auto pauli = rho3_pauli(p.k);
    max_diff = std::max(max_diff, max_abs_diff(rho3_explicit(p.k), pauli));
    max_trace_err = std::max(max_trace_err, std::abs(pauli.trace().real() - 1.0));
    const double m = min_eigenvalue(pauli);
    if (m < min_eig) {
      min_eig = m;
      worst = describe(p.geo);
    }
  }
  o.pass = max_diff <= 1e-14 && max_trace_err <= 1e-12 && min_eig >= -1e-10;
  o.summary = fmt("max|explicit-pauli|=%.3g trace_err=%.3g min_eig=%.3g over %zu points", max_diff, max_trace_err,
                  min_eig, grid.size());
  o.details.push_back("min eigenvalue at " + worst);
  return o;
}

// ---- 2 ----------------------------------------------------------------------

Outcome ghz_non_detection(const std::vector<GridPoint>& grid) {
  Outcome o;
  const auto w = ghz_d0();
  double dev_stated = 0, dev_derived = 0;
  for (const auto& p : grid) {
    const double tr = expectation(w, rho3_pauli(p.k));
    dev_stated = std::max(dev_stated, std::abs(tr - (0.5 + 2 * p.k.eta)));
    dev_derived = std::max(dev_derived, std::abs(tr - (0.75 + 2 * p.k.eta)));
  }
  double min_closed = std::numeric_limits<double>::infinity();
  std::string at;
  for (const auto& p : grid) {
    const auto r = minimize_over_rotations([&](cplx a, cplx b) { return rotated_trace_ghz0(p.k, a, b); });
    if (r.value < min_closed) {
      min_closed = r.value;
      at = describe(p.geo);
    }
  }
  // Matrix path on every 200th point: Tr(W U rho3 U^dag) minimized over the same-rotation family.
  double min_matrix = std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < grid.size(); i += 200, ++checked) {
    const auto rho = rho3_pauli(grid[i].k);
    const auto r = minimize_over_rotations(
        [&](cplx a, cplx b) {
          const auto u = same_rotation(a, b);
          return expectation(w, u * rho * u.adjoint());
        },
        16);
    min_matrix = std::min(min_matrix, r.value);
  }
  const bool identity_ok = dev_stated <= 1e-12;
  const bool rotated_ok = min_closed >= -1e-9 && min_matrix >= -1e-9;
  o.pass = identity_ok && rotated_ok;
  o.summary = fmt("identity Tr=1/2+2eta: max dev %.3g (%s); rotated min %.6g closed, %.6g matrix (%s)", dev_stated,
                  identity_ok ? "ok" : "violated", min_closed, min_matrix, rotated_ok ? "ok" : "violated");
  o.details.push_back(fmt("Tr against 3/4+2eta: max dev %.3g", dev_derived));
  o.details.push_back(fmt("rotated minimum at %s; matrix path checked on %zu points", at.c_str(), checked));
  return o;
}

// ---- 3 ----------------------------------------------------------------------

Outcome wb_window() {
  Outcome o;
  ScanRequest req;
  req.family = GeometryFamily::OneD;
  req.primary = {0.005, 0.095, 0.005};
  req.secondary = {0.1, 0.1, 1.0};
  req.witnesses = {"wgen"};
  req.rotation = true;
  req.threads = 1;
  const auto res = run_scan(req);
  bool all_negative = true;
  std::size_t in_range = 0;
  for (const auto& r : res.rows) {
    if (r.skipped || r.primary < 0.01 - 1e-12 || r.primary > 0.09 + 1e-12) continue;
    ++in_range;
    all_negative = all_negative && r.traces_min[0] < 0.0;
  }
  const auto& win = res.summary.detected;
  // Zero crossings of 1 + sqrt5 - 3(a + c) along kf_x, located by bisection.
  auto f = [](double x) { return trace_w_gen(coefficients_from_geometry(OneD{x, 0.1})); };
  auto cross = [&](double lo, double hi) {
    for (int i = 0; i < 80; ++i) {
      const double m = 0.5 * (lo + hi);
      ((f(m) < 0) == (f(lo) < 0) ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
  };
  const double left = cross(0.001, 0.05), right = cross(0.05, 0.099);
  const bool endpoints_ok = win.any && std::abs(win.primary_min - 0.01) <= 0.005 + 1e-12 &&
                            std::abs(win.primary_max - 0.09) <= 0.005 + 1e-12;
  o.pass = all_negative && in_range == 17 && endpoints_ok;
  o.summary = fmt("negative at %s of %zu samples in [0.01,0.09]; detected window [%.3f, %.3f]",
                  all_negative ? "all" : "not all", in_range, win.primary_min, win.primary_max);
  o.details.push_back(fmt("zero crossings of the minimized trace: kf_x = %.6f and %.6f", left, right));
  return o;
}

// ---- 4 ----------------------------------------------------------------------

Outcome no_entanglement_region() {
  Outcome o;
  double min_p = std::numeric_limits<double>::infinity();
  std::string at;
  std::size_t rows = 0, negative = 0;
  for (int i = 0; i <= 5; ++i) {
    const double r = 4.5 + 0.1 * i;
    ScanRequest req;
    req.family = GeometryFamily::OneD;
    req.secondary = {r, r, 1.0};
    req.primary = {0.1, r - 0.05, 0.1};
    req.rotation = false;
    req.threads = 1;
    const auto res = run_scan(req);
    for (const auto& row : res.rows) {
      if (row.skipped) continue;
      ++rows;
      const double m = std::min({row.a, row.b, row.c});
      negative += m < -1e-12;
      if (m < min_p) {
        min_p = m;
        at = fmt("kf_r=%.2f kf_x=%.2f (a=%.3g b=%.3g c=%.3g)", row.kf_r, row.primary, row.a, row.b, row.c);
      }
    }
  }
  // Finer sweep to locate the most negative coefficient.
  double fine_min = std::numeric_limits<double>::infinity();
  std::string fine_at;
  for (int i = 0; i <= 50; ++i) {
    const double r = 4.5 + 0.01 * i;
    for (int j = 1; j < 500; ++j) {
      const double x = r * j / 500;
      const auto k = coefficients_from_geometry(OneD{x, r});
      const double m = std::min({k.a, k.b, k.c});
      if (m < fine_min) {
        fine_min = m;
        fine_at = fmt("kf_r=%.2f kf_x=%.4f", r, x);
      }
    }
  }
  o.pass = negative == 0;
  o.summary = fmt("min p over %zu grid rows = %.4g at %s; %zu rows below -1e-12", rows, min_p, at.c_str(), negative);
  o.details.push_back(fmt("fine sweep (kf_r step 0.01, 499 kf_x per kf_r): min p = %.4g at %s", fine_min,
                          fine_at.c_str()));
  return o;
}

// ---- 5 ----------------------------------------------------------------------

Outcome vertex_list() {
  Outcome o;
  const std::vector<std::vector<double>> expected{
      {0, 0, 0, 0},     {3, 0, 0, 0},     {3, 0, 0, 0.375}, {3, 0, 0.75, 0}, {3, 0.75, 0, 0},
      {0, 3, 0, 0},     {0, 3, 0, 0.375}, {0, 3, 0.75, 0},  {0.75, 3, 0, 0}, {0, 0, 3, 0},
      {0, 0, 3, 0.375}, {0, 0.75, 3, 0},  {0.75, 0, 3, 0},  {0, 0, 0, 1.875}};
  const auto poly = region_polytope(RegionSystem::GhzProjector);
  std::size_t matched = 0;
  double worst = 0;
  for (const auto& e : expected) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : poly.vertices) {
      double d = 0;
      for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(v[k] - e[k]));
      best = std::min(best, d);
    }
    worst = std::max(worst, best);
    matched += best <= 1e-8;
  }
  o.pass = poly.vertices.size() == expected.size() && matched == expected.size();
  o.summary = fmt("%zu vertices enumerated, %zu of %zu listed vertices matched (max coordinate error %.2g)",
                  poly.vertices.size(), matched, expected.size(), worst);
  return o;
}

// ---- 6 ----------------------------------------------------------------------

Outcome canonical_validation() {
  Outcome o;
  bool all_valid = true;
  std::string line;
  for (const auto& w : {canonical::w_spin0(), canonical::ghz_d0(), canonical::stab_w0(), canonical::stab_ghz0()}) {
    const auto rep = validate_witness(w);
    all_valid = all_valid && rep.valid;
    line += w.name + (rep.valid ? "=valid " : "=invalid ");
    if (!rep.valid) {
      std::string failed;
      for (const auto& r : rep.rows)
        if (!r.pass) failed += fmt(" %s(%.4g)", r.tag.c_str(), r.value);
      o.details.push_back(w.name + ": rows_ok=" + (rep.rows_ok ? "1" : "0") +
                          " negative_eigenvalue=" + (rep.has_negative_eigenvalue ? "1" : "0") +
                          (failed.empty() ? "" : " failing rows:" + failed));
    }
  }
  bool patterns_ok = true;
  std::string pats;
  for (const auto& p : stabilizer_positive_patterns()) {
    const auto rep = validate_witness(p);
    const double m = hermitian_eigs(witness_operator(p)).min();
    const bool ok = !rep.has_negative_eigenvalue && m >= -1e-10;
    patterns_ok = patterns_ok && ok;
    pats += fmt(" %s:min_eig=%.3g", p.name.c_str(), m);
  }
  o.pass = all_valid && patterns_ok;
  o.summary = line + "| sign patterns fail the gate: " + (patterns_ok ? "yes" : "no");
  o.details.push_back("sign patterns" + pats);
  return o;
}

// ---- 7 ----------------------------------------------------------------------

Outcome sampled_bounds() {
  Outcome o;
  constexpr std::size_t samples = 100000;
  bool ok = true;
  std::uint64_t seed = 1000;
  auto check = [&](const std::string& name, StateFamily fam, double bound) {
    const auto op = combo_by_name(name);
    const auto rep = verify_bound(*op, fam, bound, samples, seed++);
    ok = ok && rep.never_exceeds;
    const char* fname = fam == StateFamily::Biseparable ? "B" : fam == StateFamily::W ? "W" : "all";
    o.details.push_back(fmt("%-14s %-3s max=%.9f bound=%.9f %s", name.c_str(), fname, rep.empirical_max, bound,
                            rep.never_exceeds ? "ok" : "EXCEEDED"));
  };
  const double spin_bound = 1 + std::sqrt(8.0);
  for (const char* n : {"-P12-P13+P23", "-P12+P13-P23", "P12-P13-P23"}) check(n, StateFamily::Biseparable, spin_bound);
  std::vector<std::string> consistent, flipped;
  for (const auto& c : named_combos()) {
    if (c.name.find('P') != std::string::npos) continue;
    // consistent: sign of S12 equals the product of the S1, S2 signs
    const bool s1 = c.name[0] == '+', s2 = c.name[3] == '+', s12 = c.name[6] == '+';
    ((s1 == s2) == s12 ? consistent : flipped).push_back(c.name);
  }
  for (const auto& n : consistent) check(n, StateFamily::Biseparable, std::sqrt(2.0));
  for (const auto& n : flipped) check(n, StateFamily::Biseparable, 1.0);
  for (const auto& n : consistent) check(n, StateFamily::W, kStabGhzConstant);
  for (const auto& n : flipped) check(n, StateFamily::W, 1.0);
  bool spectral_ok = true;
  for (const char* n : {"-P12-P13+P23", "-P12+P13-P23", "P12-P13-P23"}) {
    const double m = maximize_expectation(*combo_by_name(n), StateFamily::All, 0, 0).value;
    spectral_ok = spectral_ok && std::abs(m - 5.0) <= 1e-10;
    o.details.push_back(fmt("%-14s all spectral max=%.12f", n, m));
  }
  o.pass = ok && spectral_ok;
  o.summary = fmt("hard sides %s; spectral maxima %s (10^5 refined samples per combination)",
                  ok ? "hold" : "exceeded", spectral_ok ? "equal 5" : "differ from 5");
  return o;
}

// ---- 8 ----------------------------------------------------------------------

Outcome stabilizer_identity_and_ppt(const std::vector<GridPoint>& grid) {
  Outcome o;
  const auto st = stabilizers();
  const auto combo = st.s1 + st.s2 - st.s12;
  double dev_stated = 0, dev_derived = 0;
  for (const auto& p : grid) {
    const double v = expectation(combo, rho3_pauli(p.k));
    dev_stated = std::max(dev_stated, std::abs(v - 2 * p.k.a));
    dev_derived = std::max(dev_derived, std::abs(v + p.k.a));
  }
  ScanRequest req;
  req.family = GeometryFamily::TwoD;
  req.secondary = {3.0, 4.0, 0.25};
  req.primary = {kPi / 512, kPi, kPi / 256};
  req.witnesses = {"stabw0"};
  req.threads = 1;
  const auto res = run_scan(req);
  std::size_t hits = 0, negative = 0, ppt3 = 0;
  double min_trace = std::numeric_limits<double>::infinity();
  for (const auto& r : res.rows) {
    if (r.skipped) continue;
    min_trace = std::min(min_trace, r.traces_min[0]);
    const bool neg = r.traces_min[0] < -1e-9;
    const bool pt = r.ppt[2] && r.negativity[2] <= 1e-10;
    negative += neg;
    ppt3 += pt;
    hits += neg && pt;
  }
  const bool identity_ok = dev_stated <= 1e-12;
  o.pass = identity_ok && hits > 0;
  o.summary = fmt("<S1+S2-S12> = 2a: max dev %.3g (%s); PPT3 rows with negative stabilizer-W trace: %zu", dev_stated,
                  identity_ok ? "ok" : "violated", hits);
  o.details.push_back(fmt("<S1+S2-S12> = -a: max dev %.3g", dev_derived));
  o.details.push_back(fmt("2-d scan %zu rows: %zu negative traces (min %.6g), %zu with ppt3 and zero negativity",
                          res.rows.size(), negative, min_trace, ppt3));
  return o;
}

// ---- 9 ----------------------------------------------------------------------

Outcome purity_bound(const std::vector<GridPoint>& grid) {
  Outcome o;
  // Closed form on the whole grid: Tr(U|W1><W1|U^dag rho3) = eta for every same-rotation U.
  double max_eta = 0;
  std::string at;
  for (const auto& p : grid)
    if (p.k.eta > max_eta) {
      max_eta = p.k.eta;
      at = describe(p.geo);
    }
  // Matrix path with 10^5 sampled rotations and refinement on a subset.
  double max_matrix = 0, max_gap = 0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < grid.size(); i += 4000, ++checked) {
    const auto b = purity_bound_check(grid[i].k, 100000, 77 + i);
    max_matrix = std::max(max_matrix, b.max_value);
    max_gap = std::max(max_gap, std::abs(b.max_value - grid[i].k.eta));
  }
  o.pass = max_eta < 1 - 1e-6 && max_matrix < 1 - 1e-6;
  o.summary = fmt("max over grid %.6g (closed form), %.6g (matrix path, %zu points x 10^5 rotations)", max_eta,
                  max_matrix, checked);
  o.details.push_back("largest value at " + at);
  o.details.push_back(fmt("matrix path vs closed form: max |diff| %.3g", max_gap));
  return o;
}

// ---- 10 ---------------------------------------------------------------------

Outcome appendix_oracles() {
  Outcome o;
  StateSampler rng(31337);
  const auto st = stabilizers();
  const auto b = w_basis_states();
  const ComplexMatrix p1 = 2.0 * singlet_sum();
  const ComplexMatrix p12 = spin_product(1, 2), p13 = spin_product(1, 3), p23 = spin_product(2, 3);
  double amp = 0, pij = 0, si = 0, pi = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto wp = rng.w_params();
    const auto u = rng.haar_local();
    const auto s = generic_w(wp, u);
    PureState canon;
    canon[0b000] = wp.lambda[0];
    canon[0b100] = wp.lambda[1];
    canon[0b101] = wp.lambda[2];
    canon[0b110] = wp.lambda[3];
    const auto ref = matvec(local_unitary(u), canon.span());
    for (unsigned l = 0; l < 8; ++l) amp = std::max(amp, std::abs(s[l] - ref[l]));
    const auto e = amplitude_expectations(s);
    const auto v = s.span();
    pij = std::max({pij, std::abs(e.p12 - expectation(p12, v)), std::abs(e.p13 - expectation(p13, v)),
                    std::abs(e.p23 - expectation(p23, v))});
    si = std::max({si, std::abs(e.s1 - expectation(st.s1, v)), std::abs(e.s2 - expectation(st.s2, v)),
                   std::abs(e.s12 - expectation(st.s12, v))});
    pi = std::max({pi, std::abs(e.proj1 - expectation(p1, v)), std::abs(e.proj2 - 3 * std::norm(overlap(b.w1, s))),
                   std::abs(e.proj3 - 3 * std::norm(overlap(b.w2, s))),
                   std::abs(e.proj4 - 2 * std::norm(overlap(b.ghz_singlet, s)))});
  }
  o.pass = amp <= 1e-10 && pij <= 1e-10 && si <= 1e-10 && pi <= 1e-10;
  o.summary = fmt("10^4 draws: A_ijk %.2g, P_ij %.2g, S_i %.2g, P_i %.2g (max abs error)", amp, pij, si, pi);
  return o;
}

// ---- 11 ---------------------------------------------------------------------

Outcome determinism() {
  Outcome o;
  ScanRequest req;
  req.family = GeometryFamily::TwoD;
  req.secondary = {3.0, 4.0, 0.25};
  req.primary = {0.0, 2 * kPi - 0.1, 0.1};
  req.seed = 42;
  auto csv = [&](unsigned threads) {
    req.threads = threads;
    const auto res = run_scan(req);
    std::ostringstream os;
    emit_csv(os, req.family, res.witness_names, res.rows);
    return os.str();
  };
  const auto a = csv(1), b = csv(1), c = csv(3);
  const auto path = std::filesystem::temp_directory_path() / "trifermi_acceptance_determinism.csv";
  const auto res = run_scan(req);
  emit_csv_file(path.string(), req.family, res.witness_names, res.rows);
  std::ifstream in(path, std::ios::binary);
  std::stringstream file;
  file << in.rdbuf();
  std::filesystem::remove(path);
  o.pass = !a.empty() && a == b && a == c && a == file.str();
  o.summary = fmt("%zu bytes; rerun identical: %s; 3 threads identical: %s; file identical: %s", a.size(),
                  a == b ? "yes" : "no", a == c ? "yes" : "no", a == file.str() ? "yes" : "no");
  return o;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failed = 0;
  auto report = [&](int id, const char* name, double limit_s, const std::function<Outcome()>& fn) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    bool in_time = limit_s <= 0 || secs <= limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %s  %s: %s [%.1f s%s]\n", id, pass ? "PASS" : "FAIL", name, o.summary.c_str(), secs,
                in_time ? "" : fmt(", limit %.0f s exceeded", limit_s).c_str());
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
  };

  const auto t0 = clock::now();
  const auto grid = build_grid();
  const double grid_s = std::chrono::duration<double>(clock::now() - t0).count();
  std::printf("grid: %zu points (1-d and 2-d, 200 x 200 each), built in %.2f s\n", grid.size(), grid_s);

  report(1, "identity of forms", 10, [&] { return identity_of_forms(grid); });
  report(2, "GHZ non-detection", 120, [&] { return ghz_non_detection(grid); });
  report(3, "W\\B detection window", 0, wb_window);
  report(4, "no-entanglement region", 0, no_entanglement_region);
  report(5, "vertex list", 0, vertex_list);
  report(6, "canonical witness validation", 0, canonical_validation);
  report(7, "sampled bounds", 300, sampled_bounds);
  report(8, "stabilizer identity and PPT-W region", 0, [&] { return stabilizer_identity_and_ppt(grid); });
  report(9, "purity bound", 0, [&] { return purity_bound(grid); });
  report(10, "closed-form oracle equivalence", 0, appendix_oracles);
  report(11, "determinism", 0, determinism);

  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
