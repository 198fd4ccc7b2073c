#pragma once

// Geometry sweeps producing one row per grid point, with window summaries
// and CSV emission.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "trifermi/nifg.hpp"
#include "trifermi/witnesses.hpp"

namespace trifermi {

enum class GeometryFamily { OneD, TwoD };

/// Inclusive range start, start + step, ... <= stop (with a small tolerance).
struct AxisRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::size_t count() const {
    if (!(step > 0.0)) throw InvalidInput("scan step must be positive");
    if (stop < start) throw InvalidInput("scan range is empty");
    return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  }
  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

struct ScanRequest {
  GeometryFamily family = GeometryFamily::OneD;
  AxisRange primary;    // kf_x (1-d) or theta (2-d)
  AxisRange secondary;  // kf_r
  std::vector<std::string> witnesses;  // empty: all canonical witnesses
  bool rotation = true;
  std::uint64_t seed = 0;
  std::string output_path;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ScanRow {
  double kf_r = 0.0;
  double primary = 0.0;
  bool skipped = false;
  double f12 = 0.0, f13 = 0.0, f23 = 0.0;
  double a = 0.0, b = 0.0, c = 0.0, eta = 0.0;
  std::vector<double> traces;       // per selected witness
  std::vector<double> traces_min;   // rotation-minimized (equal to traces when rotation is off)
  DetectedClass verdict = DetectedClass::None;
  double witness_value = 0.0;
  std::array<bool, 3> ppt{};
  bool ppt_entangled = false;
  std::array<double, 3> negativity{};
};

struct Window {
  bool any = false;
  double primary_min = std::numeric_limits<double>::infinity();
  double primary_max = -std::numeric_limits<double>::infinity();
  double kf_r_min = std::numeric_limits<double>::infinity();
  double kf_r_max = -std::numeric_limits<double>::infinity();

  void add(const ScanRow& r) {
    any = true;
    primary_min = std::min(primary_min, r.primary);
    primary_max = std::max(primary_max, r.primary);
    kf_r_min = std::min(kf_r_min, r.kf_r);
    kf_r_max = std::max(kf_r_max, r.kf_r);
  }
};

struct ScanSummary {
  std::size_t rows = 0;
  std::size_t skipped = 0;
  Window detected;
  std::array<Window, 3> ppt;
  Window all_p_nonnegative;
  Window ppt_entangled;
};

struct ScanResult {
  std::vector<std::string> witness_names;
  std::vector<ScanRow> rows;
  ScanSummary summary;
};

inline GeometryConfig geometry_at(GeometryFamily fam, double kf_r, double primary) {
  if (fam == GeometryFamily::OneD) return OneD{primary, kf_r};
  return TwoD{kf_r, primary};
}

/// One grid point. A pure function of the point and the witness selection.
inline ScanRow evaluate_point(GeometryFamily fam, double kf_r, double primary, const std::vector<WitnessSpec>& ws,
                              bool rotation) {
  ScanRow row;
  row.kf_r = kf_r;
  row.primary = primary;
  NifgCoefficients k;
  try {
    const auto g = geometry_at(fam, kf_r, primary);
    k = coefficients_from_geometry(g);
    const auto f = slater_factors(g);
    row.f12 = f.f12;
    row.f13 = f.f13;
    row.f23 = f.f23;
  } catch (const CoincidentParticles&) {
    row.skipped = true;
    return row;
  }
  row.a = k.a;
  row.b = k.b;
  row.c = k.c;
  row.eta = k.eta;
  for (const auto& w : ws) {
    row.traces.push_back(trace_against_rho3(w, k));
    if (rotation) {
      // rho3 is fixed by u (x) u (x) u, so a coarse grid already sees the minimum.
      const auto opt = minimize_over_rotations(
          [&](cplx al, cplx be) {
            require_unit_pair(al, be);
            return trace_against_rho3(w, k);
          },
          16);
      row.traces_min.push_back(opt.value);
    } else {
      row.traces_min.push_back(row.traces.back());
    }
  }
  std::vector<WitnessReading> readings;
  for (std::size_t i = 0; i < ws.size(); ++i) readings.push_back({ws[i].name, ws[i].target, row.traces_min[i]});
  const auto v = detail::verdict_from(std::move(readings), {ppt_condition(k, 1), ppt_condition(k, 2), ppt_condition(k, 3)});
  row.verdict = v.detected_class;
  row.witness_value = v.witness_value;
  row.ppt = v.ppt_flags;
  row.ppt_entangled = v.ppt_entangled;
  for (int p = 1; p <= 3; ++p) row.negativity[p - 1] = negativity(k, p);
  return row;
}

inline ScanResult run_scan(const ScanRequest& req) {
  const std::size_t np = req.primary.count();
  const std::size_t ns = req.secondary.count();
  if (np * ns > 1'000'000) throw InvalidInput("scan exceeds 10^6 grid points");
  ScanResult res;
  const auto ws = select_witnesses(req.witnesses);
  for (const auto& w : ws) res.witness_names.push_back(w.name);
  res.rows.resize(np * ns);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < res.rows.size(); i = next++) {
      const std::size_t is = i / np, ip = i % np;
      res.rows[i] = evaluate_point(req.family, req.secondary.at(is), req.primary.at(ip), ws, req.rotation);
    }
  };
  unsigned nt = req.threads ? req.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, res.rows.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  auto& s = res.summary;
  s.rows = res.rows.size();
  for (const auto& r : res.rows) {
    if (r.skipped) {
      ++s.skipped;
      continue;
    }
    if (r.verdict != DetectedClass::None) s.detected.add(r);
    for (int p = 0; p < 3; ++p)
      if (r.ppt[p]) s.ppt[p].add(r);
    if (r.a >= -1e-12 && r.b >= -1e-12 && r.c >= -1e-12) s.all_p_nonnegative.add(r);
    if (r.ppt_entangled) s.ppt_entangled.add(r);
  }
  return res;
}

// ---- CSV --------------------------------------------------------------------

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", x);
  return buf;
}

inline const char* verdict_token(DetectedClass d) {
  switch (d) {
    case DetectedClass::None:
      return "none";
    case DetectedClass::GenuineTripartite_WminusB:
      return "WminusB";
    case DetectedClass::GhzMinusW_candidate:
      return "GHZminusW_candidate";
  }
  return "none";
}

inline DetectedClass verdict_from_token(const std::string& s) {
  if (s == "none") return DetectedClass::None;
  if (s == "WminusB") return DetectedClass::GenuineTripartite_WminusB;
  if (s == "GHZminusW_candidate") return DetectedClass::GhzMinusW_candidate;
  throw InvalidInput("unknown verdict token '" + s + "'");
}

inline std::vector<std::string> csv_header(GeometryFamily fam, const std::vector<std::string>& witness_names) {
  std::vector<std::string> h{"kf_r", fam == GeometryFamily::OneD ? "kf_x" : "theta", "skipped", "f12", "f13", "f23",
                             "a",    "b",                                        "c",       "eta"};
  for (const auto& n : witness_names) h.push_back("tr_" + n);
  for (const auto& n : witness_names) h.push_back("trmin_" + n);
  for (const char* n : {"verdict", "witness_value", "ppt1", "ppt2", "ppt3", "ppt_entangled", "neg1", "neg2", "neg3"})
    h.emplace_back(n);
  return h;
}

/// Header plus one line per row; skipped rows leave the physics cells empty.
inline void emit_csv(std::ostream& os, GeometryFamily fam, const std::vector<std::string>& witness_names,
                     const std::vector<ScanRow>& rows) {
  const auto header = csv_header(fam, witness_names);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    std::vector<std::string> cells{format_number(r.kf_r), format_number(r.primary), r.skipped ? "1" : "0"};
    if (r.skipped) {
      cells.resize(header.size());
    } else {
      for (double v : {r.f12, r.f13, r.f23, r.a, r.b, r.c, r.eta}) cells.push_back(format_number(v));
      for (double v : r.traces) cells.push_back(format_number(v));
      for (double v : r.traces_min) cells.push_back(format_number(v));
      cells.emplace_back(verdict_token(r.verdict));
      cells.push_back(format_number(r.witness_value));
      for (bool p : r.ppt) cells.emplace_back(p ? "1" : "0");
      cells.emplace_back(r.ppt_entangled ? "1" : "0");
      for (double v : r.negativity) cells.push_back(format_number(v));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }
}

/// Relative paths resolve against $TRIFERMI_OUTPUT_DIR when it is set.
inline std::filesystem::path resolve_output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative())
    if (const char* dir = std::getenv("TRIFERMI_OUTPUT_DIR"); dir && *dir) return std::filesystem::path(dir) / p;
  return p;
}

inline void emit_csv_file(const std::string& path, GeometryFamily fam, const std::vector<std::string>& witness_names,
                          const std::vector<ScanRow>& rows) {
  const auto p = resolve_output_path(path);
  std::ofstream os(p, std::ios::binary);
  if (!os) throw InvalidInput("cannot write '" + p.string() + "'");
  emit_csv(os, fam, witness_names, rows);
  if (!os) throw InvalidInput("write to '" + p.string() + "' failed");
}

struct ParsedCsv {
  GeometryFamily family = GeometryFamily::OneD;
  std::vector<std::string> witness_names;
  std::vector<ScanRow> rows;
};

inline ParsedCsv parse_csv(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  ParsedCsv out;
  std::string line;
  if (!std::getline(is, line)) throw InvalidInput("CSV is empty");
  const auto header = split(line);
  if (header.size() < 19) throw InvalidInput("CSV header is too short");
  out.family = header[1] == "kf_x" ? GeometryFamily::OneD : GeometryFamily::TwoD;
  const std::size_t nw = (header.size() - 19) / 2;
  for (std::size_t i = 0; i < nw; ++i) out.witness_names.push_back(header[10 + i].substr(3));
  if (csv_header(out.family, out.witness_names) != header) throw InvalidInput("unrecognized CSV header");
  auto num = [](const std::string& s) { return std::stod(s); };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    cells.resize(header.size());
    ScanRow r;
    r.kf_r = num(cells[0]);
    r.primary = num(cells[1]);
    r.skipped = cells[2] == "1";
    if (!r.skipped) {
      std::size_t i = 3;
      for (double* d : {&r.f12, &r.f13, &r.f23, &r.a, &r.b, &r.c, &r.eta}) *d = num(cells[i++]);
      for (std::size_t w = 0; w < nw; ++w) r.traces.push_back(num(cells[i++]));
      for (std::size_t w = 0; w < nw; ++w) r.traces_min.push_back(num(cells[i++]));
      r.verdict = verdict_from_token(cells[i++]);
      r.witness_value = num(cells[i++]);
      for (auto& p : r.ppt) p = cells[i++] == "1";
      r.ppt_entangled = cells[i++] == "1";
      for (auto& n : r.negativity) n = num(cells[i++]);
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

}  // namespace trifermi
