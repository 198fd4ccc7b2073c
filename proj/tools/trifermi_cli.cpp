// Command-line front end. Exit status: 0 success, 2 invalid input,
// 3 infeasible or unbounded linear program.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trifermi/trifermi.hpp"

namespace {

using namespace trifermi;

constexpr int kExitInvalid = 2;
constexpr int kExitLp = 3;

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw InvalidInput(what + ": '" + tok + "' is not a number");
    }
  }
  if (out.empty()) throw InvalidInput(what + " is empty");
  return out;
}

AxisRange parse_range(const std::string& s, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) v.push_back(parse_list(tok, what).at(0));
  if (v.size() == 1) return {v[0], v[0], 1.0};
  if (v.size() != 3) throw InvalidInput(what + " must be start:stop:step or a single value");
  AxisRange r{v[0], v[1], v[2]};
  r.count();
  return r;
}

std::string num(double x) { return format_number(x); }

struct GeometryArgs {
  std::string geom = "1d";
  std::optional<double> kfr, kfx, theta;
  std::string triple;

  void attach(CLI::App* app) {
    app->add_option("--geom", geom, "1d or 2d")->check(CLI::IsMember({"1d", "2d"}));
    app->add_option("--kfr", kfr, "k_F r");
    app->add_option("--kfx", kfx, "k_F x (1d)");
    app->add_option("--theta", theta, "angle in radians (2d)");
    app->add_option("--triple", triple, "coefficients a,b,c instead of a geometry");
  }

  bool has_geometry() const { return kfr.has_value(); }

  GeometryConfig geometry() const {
    if (!kfr) throw InvalidInput("--kfr is required");
    if (geom == "1d") {
      if (!kfx) throw InvalidInput("--kfx is required for 1d");
      return OneD{*kfx, *kfr};
    }
    if (!theta) throw InvalidInput("--theta is required for 2d");
    return TwoD{*kfr, *theta};
  }

  NifgCoefficients coefficients() const {
    if (!triple.empty()) return triple_from(triple);
    return coefficients_from_geometry(geometry());
  }

  static NifgCoefficients triple_from(const std::string& s) {
    const auto v = parse_list(s, "triple");
    if (v.size() != 3) throw InvalidInput("triple needs exactly three values a,b,c");
    return NifgCoefficients::from_triple(v[0], v[1], v[2]);
  }
};

void print_coefficients(const NifgCoefficients& k) {
  std::cout << "a = " << num(k.a) << "\nb = " << num(k.b) << "\nc = " << num(k.c) << "\neta = " << num(k.eta) << '\n';
}

int cmd_rho(const GeometryArgs& g) {
  const auto k = g.coefficients();
  if (g.triple.empty()) {
    const auto f = slater_factors(g.geometry());
    std::cout << "f12 = " << num(f.f12) << "\nf13 = " << num(f.f13) << "\nf23 = " << num(f.f23) << '\n';
  }
  print_coefficients(k);
  const auto rep = validity(k);
  std::cout << "valid = " << (rep.valid ? "true" : "false") << '\n';
  for (const auto& f : rep.failed) std::cout << "  failed: " << f << '\n';
  std::cout << "eigenvalues =";
  for (double e : rho3_eigenvalues(k)) std::cout << ' ' << num(e);
  std::cout << '\n';
  for (int p = 1; p <= 3; ++p)
    std::cout << "ppt" << p << " = " << (ppt_condition(k, p) ? "true" : "false") << "  negativity" << p << " = "
              << num(negativity(k, p)) << '\n';
  return 0;
}

WitnessFamily family_from(const std::string& s) {
  if (s == "spin-gen" || s == "gen") return WitnessFamily::SpinChainGen;
  if (s == "spin" || s == "spin-chain") return WitnessFamily::SpinChainParam;
  if (s == "ghz-projector" || s == "projector") return WitnessFamily::GhzProjector;
  if (s == "stabilizer" || s == "stab") return WitnessFamily::Stabilizer;
  throw InvalidInput("unknown family '" + s + "' (spin-gen, spin, ghz-projector, stabilizer)");
}

ClassTarget target_from(const std::string& s, WitnessFamily f) {
  if (s.empty()) return f == WitnessFamily::GhzProjector ? ClassTarget::GHZ_EW : ClassTarget::W_EW;
  if (s == "W") return ClassTarget::W_EW;
  if (s == "GHZ") return ClassTarget::GHZ_EW;
  throw InvalidInput("target must be W or GHZ");
}

WitnessSpec spec_from(const std::string& family, const std::string& params, const std::string& target) {
  WitnessSpec w;
  w.family = family_from(family);
  w.params = parse_list(params, "params");
  w.target = target_from(target, w.family);
  w.name = family;
  require_params(w);
  return w;
}

int cmd_witness_eval(const WitnessSpec& w, const std::vector<std::string>& rho_from, const GeometryArgs& g) {
  NifgCoefficients k;
  const std::string mode = rho_from.empty() ? "geometry" : rho_from[0];
  if (mode == "triple") {
    const std::string t = rho_from.size() > 1 ? rho_from[1] : g.triple;
    if (t.empty()) throw InvalidInput("--rho-from triple needs a,b,c");
    k = GeometryArgs::triple_from(t);
  } else if (mode == "geometry") {
    k = coefficients_from_geometry(g.geometry());
  } else {
    throw InvalidInput("--rho-from must be geometry or triple");
  }
  print_coefficients(k);
  const bool valid = validity(k).valid;
  const double closed = trace_against_rho3(w, k);
  const double matrix = expectation(witness_operator(w), rho3_pauli(k));
  std::cout << "valid = " << (valid ? "true" : "false") << '\n';
  std::cout << "trace = " << num(closed) << '\n';
  std::cout << "trace_matrix = " << num(matrix) << '\n';
  const auto v = detail::verdict_from({{w.name, w.target, closed}},
                                      {ppt_condition(k, 1), ppt_condition(k, 2), ppt_condition(k, 3)});
  std::cout << "verdict = " << to_string(v.detected_class) << '\n';
  return 0;
}

int cmd_witness_validate(const WitnessSpec& w) {
  const auto rep = validate_witness(w);
  for (const auto& r : rep.rows) std::cout << (r.pass ? "ok   " : "FAIL ") << r.tag << "  " << num(r.value) << '\n';
  std::cout << "eigenvalues =";
  for (double e : rep.eigenvalues) std::cout << ' ' << num(e);
  std::cout << "\nrows_ok = " << (rep.rows_ok ? "true" : "false")
            << "\nnegative_eigenvalue = " << (rep.has_negative_eigenvalue ? "true" : "false");
  if (w.family == WitnessFamily::GhzProjector)
    std::cout << "\nconstant_nonnegative = " << (rep.constant_nonnegative ? "true" : "false");
  std::cout << "\nvalid = " << (rep.valid ? "true" : "false") << '\n';
  return 0;
}

RegionSystem system_from(const std::string& s) {
  auto sys = region_system_from_name(s);
  if (!sys) throw InvalidInput("unknown system '" + s + "' (eq41, eq28, eq50, eq53)");
  return *sys;
}

int cmd_lp_vertices(const std::string& system) {
  for (const auto& v : region_polytope(system_from(system)).vertices) {
    for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? " " : "") << num(v[i]);
    std::cout << '\n';
  }
  return 0;
}

std::vector<Halfspace> table_by_name(const std::string& name) {
  if (name == "spin-chain-W") return spin_chain_w_table();
  if (name == "ghz-projector") return ghz_projector_table();
  if (name == "stabilizer-W") return stabilizer_w_table();
  if (name == "stabilizer-GHZ") return stabilizer_ghz_table();
  throw InvalidInput("unknown table '" + name + "' (spin-chain-W, ghz-projector, stabilizer-W, stabilizer-GHZ)");
}

int cmd_lp_minimize(const std::string& system, const std::string& table_file, const std::string& objective) {
  std::vector<Halfspace> hs;
  if (!table_file.empty()) {
    std::ifstream is(table_file);
    if (!is) throw InvalidInput("cannot read '" + table_file + "'");
    hs = load_table(is);
  } else {
    hs = region_halfspaces(system_from(system));
  }
  LinearProgram lp{parse_list(objective, "objective"), hs, {}};
  const auto sol = simplex_minimize(lp);
  std::cout << "value = " << num(sol.value) << "\npoint =";
  for (double x : sol.point) std::cout << ' ' << num(x);
  std::cout << '\n';
  return 0;
}

double default_claim(const std::string& combo, StateFamily fam) {
  if (combo.find('P') != std::string::npos) return fam == StateFamily::All ? 5.0 : 1.0 + std::sqrt(8.0);
  // Consistent sign patterns have (sign S1)(sign S2) = sign S12.
  int minus = 0;
  for (char ch : combo)
    if (ch == '-') ++minus;
  const bool consistent = minus % 2 == 0;
  if (!consistent) return 1.0;
  if (fam == StateFamily::Biseparable) return std::sqrt(2.0);
  if (fam == StateFamily::W) return kStabGhzConstant;
  return 3.0;
}

int cmd_bounds(const std::string& combo, const std::string& family, std::size_t samples, std::uint64_t seed,
               std::optional<double> claimed) {
  const auto op = combo_by_name(combo);
  if (!op) {
    std::string names;
    for (const auto& c : named_combos()) names += " " + c.name;
    throw InvalidInput("unknown combo '" + combo + "'; known:" + names);
  }
  StateFamily fam;
  if (family == "B")
    fam = StateFamily::Biseparable;
  else if (family == "W")
    fam = StateFamily::W;
  else if (family == "all")
    fam = StateFamily::All;
  else
    throw InvalidInput("family must be B, W or all");
  const double claim = claimed.value_or(default_claim(combo, fam));
  const auto rep = verify_bound(*op, fam, claim, samples, seed);
  std::cout << "combo = " << combo << "\nfamily = " << family << "\nempirical_max = " << num(rep.empirical_max)
            << "\nclaimed = " << num(rep.claimed) << "\ngap = " << num(rep.gap)
            << "\nnever_exceeds = " << (rep.never_exceeds ? "true" : "false") << '\n';
  return 0;
}

void print_window(const char* label, const Window& w) {
  std::cout << label << ": ";
  if (!w.any) {
    std::cout << "none\n";
    return;
  }
  std::cout << "primary [" << num(w.primary_min) << ", " << num(w.primary_max) << "]  kf_r [" << num(w.kf_r_min) << ", "
            << num(w.kf_r_max) << "]\n";
}

int cmd_scan(ScanRequest req, const std::string& witnesses) {
  if (!witnesses.empty()) {
    std::stringstream ss(witnesses);
    for (std::string t; std::getline(ss, t, ',');) req.witnesses.push_back(t);
  }
  const auto res = run_scan(req);
  if (!req.output_path.empty()) {
    emit_csv_file(req.output_path, req.family, res.witness_names, res.rows);
  } else {
    emit_csv(std::cout, req.family, res.witness_names, res.rows);
    return 0;
  }
  const auto& s = res.summary;
  std::cout << "rows = " << s.rows << "\nskipped = " << s.skipped << '\n';
  print_window("detected", s.detected);
  print_window("ppt1", s.ppt[0]);
  print_window("ppt2", s.ppt[1]);
  print_window("ppt3", s.ppt[2]);
  print_window("all_p_nonnegative", s.all_p_nonnegative);
  print_window("ppt_entangled", s.ppt_entangled);
  return 0;
}

int cmd_purity(const GeometryArgs& g, std::size_t samples, std::uint64_t seed) {
  const auto k = g.coefficients();
  const auto pb = purity_bound_check(k, samples, seed);
  print_coefficients(k);
  std::cout << "max_trace = " << num(pb.max_value) << "\nt = " << num(pb.t) << "\nphi = " << num(pb.phi)
            << "\nbelow_one = " << (pb.max_value < 1.0 - 1e-6 ? "true" : "false") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-fermion reduced density matrix and entanglement witness toolkit"};
  app.require_subcommand(1);

  GeometryArgs rho_geo;
  auto* rho = app.add_subcommand("rho", "coefficients, spectrum and PPT flags of rho3");
  rho_geo.attach(rho);

  auto* witness = app.add_subcommand("witness", "witness evaluation and validation");
  witness->require_subcommand(1);
  std::string w_family, w_params, w_target;
  std::vector<std::string> rho_from;
  GeometryArgs w_geo;
  auto* w_eval = witness->add_subcommand("eval", "trace of a witness against rho3");
  w_eval->add_option("--family", w_family)->required();
  w_eval->add_option("--params", w_params)->required();
  w_eval->add_option("--target", w_target, "W or GHZ");
  w_eval->add_option("--rho-from", rho_from, "geometry | triple a,b,c")->expected(1, 2);
  w_geo.attach(w_eval);
  auto* w_val = witness->add_subcommand("validate", "constraint rows and eigenvalue gate");
  w_val->add_option("--family", w_family)->required();
  w_val->add_option("--params", w_params)->required();
  w_val->add_option("--target", w_target, "W or GHZ");

  auto* lp = app.add_subcommand("lp", "feasible regions and linear programs");
  lp->require_subcommand(1);
  std::string lp_system, lp_table_file, lp_objective, lp_table_name;
  auto* lp_vert = lp->add_subcommand("vertices", "vertices of a feasible region");
  lp_vert->add_option("--system", lp_system, "eq41 | eq28 | eq50 | eq53")->required();
  auto* lp_min = lp->add_subcommand("minimize", "minimize a linear objective");
  lp_min->add_option("--system", lp_system);
  lp_min->add_option("--table", lp_table_file, "halfspace file: coefficients offset tag per line");
  lp_min->add_option("--objective", lp_objective)->required();
  auto* lp_tab = lp->add_subcommand("table", "dump a parameter constraint table");
  lp_tab->add_option("--name", lp_table_name)->required();

  auto* bounds = app.add_subcommand("bounds", "sampled bounds over state families");
  bounds->require_subcommand(1);
  std::string b_combo, b_family = "B";
  std::size_t b_samples = 100000;
  std::uint64_t b_seed = 1;
  std::optional<double> b_claimed;
  auto* b_verify = bounds->add_subcommand("verify", "empirical maximum versus claimed bound");
  b_verify->add_option("--combo", b_combo)->required();
  b_verify->add_option("--family", b_family, "B | W | all");
  b_verify->add_option("--samples", b_samples);
  b_verify->add_option("--seed", b_seed);
  b_verify->add_option("--claimed", b_claimed);

  ScanRequest req;
  std::string s_geom = "1d", s_kfr, s_primary, s_witnesses;
  bool s_no_rotation = false;
  auto* scan = app.add_subcommand("scan", "geometry sweep to CSV");
  scan->add_option("--geom", s_geom)->check(CLI::IsMember({"1d", "2d"}));
  scan->add_option("--kfr", s_kfr, "start:stop:step")->required();
  scan->add_option("--primary", s_primary, "kf_x (1d) or theta (2d) as start:stop:step")->required();
  scan->add_option("--witnesses", s_witnesses, "comma list of wgen,wsp0,ghzd0,stabw0,stabghz0");
  scan->add_flag("--no-rotation", s_no_rotation);
  scan->add_option("--seed", req.seed);
  scan->add_option("--out", req.output_path, "CSV path (stdout when omitted)");
  scan->add_option("--threads", req.threads);

  GeometryArgs p_geo;
  std::size_t p_samples = 100000;
  std::uint64_t p_seed = 1;
  auto* purity = app.add_subcommand("purity", "max Tr(rho'_W rho3) over same-rotations");
  p_geo.attach(purity);
  purity->add_option("--samples", p_samples);
  purity->add_option("--seed", p_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    if (rho->parsed()) return cmd_rho(rho_geo);
    if (w_eval->parsed()) return cmd_witness_eval(spec_from(w_family, w_params, w_target), rho_from, w_geo);
    if (w_val->parsed()) return cmd_witness_validate(spec_from(w_family, w_params, w_target));
    if (lp_vert->parsed()) return cmd_lp_vertices(lp_system);
    if (lp_min->parsed()) {
      if (lp_system.empty() == lp_table_file.empty()) throw InvalidInput("give exactly one of --system or --table");
      return cmd_lp_minimize(lp_system, lp_table_file, lp_objective);
    }
    if (lp_tab->parsed()) {
      dump_table(std::cout, table_by_name(lp_table_name));
      return 0;
    }
    if (b_verify->parsed()) return cmd_bounds(b_combo, b_family, b_samples, b_seed, b_claimed);
    if (scan->parsed()) {
      req.family = s_geom == "1d" ? GeometryFamily::OneD : GeometryFamily::TwoD;
      req.secondary = parse_range(s_kfr, "--kfr");
      req.primary = parse_range(s_primary, "--primary");
      req.rotation = !s_no_rotation;
      return cmd_scan(req, s_witnesses);
    }
    if (purity->parsed()) return cmd_purity(p_geo, p_samples, p_seed);
  } catch (const LpError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitLp;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
