// coarse-teich: command-line front end.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <boost/crc.hpp>

#include "ct/calibration.hpp"
#include "ct/config.hpp"
#include "ct/errors.hpp"
#include "ct/experiments.hpp"
#include "ct/io.hpp"
#include "ct/metrics.hpp"
#include "ct/nielsen.hpp"
#include "ct/projection.hpp"

using namespace ct;

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

Config load(const Globals& g) {
  Config cfg = g.config_path.empty() ? Config{} : load_config(g.config_path);
  if (g.seed) cfg.seed = *g.seed;
  cfg.validate();
  return cfg;
}

std::string crc_hex(const std::string& text) {
  boost::crc_32_type crc;
  crc.process_bytes(text.data(), text.size());
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", unsigned(crc.checksum()));
  return buf;
}

std::optional<Calibration> try_calibration(const Config& cfg) {
  try {
    return load_calibration(calibration_path(cfg));
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

class Report {
 public:
  Report(std::string command, const Config& cfg)
      : start_(std::chrono::steady_clock::now()), cal_(try_calibration(cfg)) {
    j_["command"] = std::move(command);
    inputs_ = to_json(cfg).dump();
  }
  void input(const json& v) { inputs_ += v.dump(); }
  json& outputs() { return j_["outputs"]; }
  const std::optional<Calibration>& calibration() const { return cal_; }

  void emit(std::ostream& os) {
    j_["inputs_digest"] = crc_hex(inputs_);
    if (cal_) {
      j_["calibration_digest"] = digest(*cal_);
      j_["calibration"] = to_json(*cal_);
    } else {
      j_["calibration_digest"] = nullptr;
      j_["calibration"] = nullptr;
    }
    j_["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    os << j_.dump(2) << "\n";
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::optional<Calibration> cal_;
  json j_ = json::object();
  std::string inputs_;
};

SubsurfaceRef parse_subsurface(const std::string& text) {
  if (text == "whole") return SubsurfaceRef::whole();
  if (text.rfind("slot", 0) == 0 && text.find(':') == std::string::npos) {
    const std::string idx = text.substr(4);
    if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad subsurface: " + text);
    return SubsurfaceRef::slot_of(std::stoi(idx));
  }
  return SubsurfaceRef::annulus(parse_curve(text));
}

json projection_json(const ProjectionValue& v) {
  if (auto* s = std::get_if<SlotProjection>(&v))
    return {{"base", to_string(s->base)}, {"trans", to_string(s->trans)}};
  if (auto* h = std::get_if<HoroPoint>(&v)) return {{"x", h->x}, {"level", h->level}};
  json out = json::array();
  for (const auto& c : std::get<BaseSet>(v)) out.push_back(to_string(c));
  return out;
}

void check_subsurface(const SubsurfaceRef& y, const AugMarking& m) {
  const int k = int(m.slots.size());
  const int i = y.kind == SubsurfaceRef::Kind::slot ? y.slot : y.curve.index;
  if (y.kind != SubsurfaceRef::Kind::whole && (i < 0 || i >= k))
    throw ModelMismatch("subsurface index out of range for k = " + std::to_string(k));
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

SearchOptions search_options(const Report& r) {
  SearchOptions opt;
  if (r.calibration()) opt.comparability = r.calibration()->comparability;
  return opt;
}

// --- dist -------------------------------------------------------------------

int cmd_dist(const Globals& g, const std::string& a_path, const std::string& b_path,
             bool oracle, int cap) {
  const Config cfg = load(g);
  const AugMarking a = load_marking(a_path), b = load_marking(b_path);
  require_same_surface(a, b);
  Report r("dist", cfg);
  r.input(to_json(a));
  r.input(to_json(b));
  auto& out = r.outputs();
  out["formula_distance_T"] = formula_distance_T(a, b, cfg.th);
  out["formula_distance_WP"] = formula_distance_WP(a, b, cfg.th);
  out["terms"] = to_json(formula_terms(a, b, cfg.th.K));
  if (oracle) {
    const int c = cap > 0 ? cap : cfg.bfs_cap;
    auto d = bfs_distance(a, b, c);
    out["bfs_cap"] = c;
    out["bfs_distance"] = d ? json(*d) : json(nullptr);
  }
  r.emit(std::cout);
  return 0;
}

// --- project ----------------------------------------------------------------

int cmd_project(const Globals& g, const std::string& m_path, const std::string& y_text,
                const std::string& to_path, const std::string& phi_path) {
  const Config cfg = load(g);
  const AugMarking m = load_marking(m_path);
  Report r("project", cfg);
  r.input(to_json(m));
  auto& out = r.outputs();
  if (!y_text.empty()) {
    const SubsurfaceRef y = parse_subsurface(y_text);
    check_subsurface(y, m);
    out["subsurface"] = to_string(y);
    out["projection"] = projection_json(project(y, m));
    if (!to_path.empty()) {
      const AugMarking b = load_marking(to_path);
      require_same_surface(m, b);
      r.input(to_json(b));
      out["to"] = projection_json(project(y, b));
      out["distance"] = proj_distance(y, m, b);
    }
  }
  if (!phi_path.empty()) {
    const Simplex s = simplex_from_json(read_json_file(phi_path));
    validate(s, int(m.slots.size()));
    r.input(to_json(s));
    out["simplex"] = to_json(s);
    out["in_Q"] = q_membership(s, m);
    out["phi"] = to_json(phi(s, m));
  }
  if (y_text.empty() && phi_path.empty())
    throw ParseError("project needs --y or --phi");
  r.emit(std::cout);
  return 0;
}

// --- fix-search -------------------------------------------------------------

int cmd_fix_search(const Globals& g, const std::string& m_path, const std::string& trace_path,
                   bool sweep, int k, int instances, const std::string& csv_path) {
  const Config cfg = load(g);
  if (sweep) {
    Report r("fix-search --sweep", cfg);
    std::ostringstream csv;
    csv << "k,instance,magnitude,final_distance,fixed,stages\n";
    const int k_lo = k > 0 ? k : 2, k_hi = k > 0 ? k : 4;
    json per_k = json::array();
    for (int kk = k_lo; kk <= k_hi; ++kk) {
      const auto rows = magnitude_sweep(kk, instances, cfg.seed, cfg.th);
      std::size_t fixed = 0;
      for (const auto& row : rows) {
        csv << row.k << ',' << row.instance << ',' << row.magnitude << ','
            << row.final_distance << ',' << (row.fixed ? 1 : 0) << ',' << row.stages << '\n';
        if (row.fixed) ++fixed;
      }
      per_k.push_back({{"k", kk},
                       {"instances", rows.size()},
                       {"fixed", fixed},
                       {"worst_ratio", worst_sweep_ratio(rows)}});
    }
    write_or_print(csv_path, csv.str());
    r.outputs()["sweep"] = per_k;
    r.emit(csv_path.empty() || csv_path == "-" ? std::cerr : std::cout);
    return 0;
  }

  const AugMarking mu = load_marking(m_path);
  Report r("fix-search", cfg);
  r.input(to_json(mu));
  const auto cert = certify(mu, cfg.th);
  if (cert.diameter > cfg.th.R) {
    r.outputs()["error"] = "input is not almost-fixed";
    r.outputs()["certificate"] = to_json(cert);
    r.emit(std::cout);
    return int(ExitCode::precondition);
  }
  auto [x, trace] = fixed_point_search(mu, cfg.th, search_options(r));
  const json tj = to_json(trace);
  if (!trace_path.empty()) write_text_file(trace_path, tj.dump(2) + "\n");
  std::int64_t bound = trace.initial_distance;
  for (const auto& s : trace.stages) bound = std::max(bound, s.distance);
  auto& out = r.outputs();
  out["fixed"] = to_json(x);
  out["trace"] = tj;
  out["final_distance"] = trace.final_distance;
  out["bound"] = bound;
  r.emit(std::cout);
  std::cerr << "final_distance " << trace.final_distance << " <= " << bound << "\n";
  return 0;
}

// --- barycenter -------------------------------------------------------------

int cmd_barycenter(const Globals& g, const std::string& m_path, bool sweep, int k,
                   int instances, const std::string& csv_path) {
  const Config cfg = load(g);
  if (sweep) {
    Report r("barycenter --sweep", cfg);
    const int kk = k > 0 ? k : cfg.k;
    const auto rows = barycenter_sweep(kk, instances, cfg.seed, cfg.th);
    std::ostringstream csv;
    csv << "k,displacement,distance\n";
    for (const auto& row : rows) csv << row.k << ',' << row.displacement << ',' << row.distance << '\n';
    write_or_print(csv_path, csv.str());
    const auto f = barycenter_fit(rows);
    auto& out = r.outputs();
    out["k"] = kk;
    out["instances"] = rows.size();
    out["slope"] = f.slope;
    out["intercept"] = f.intercept;
    if (r.calibration()) {
      out["slope_ok"] = f.slope <= r.calibration()->K_tilde;
      out["intercept_ok"] = f.intercept <= r.calibration()->C_tilde;
    }
    r.emit(csv_path.empty() || csv_path == "-" ? std::cerr : std::cout);
    return 0;
  }

  const AugMarking sigma = load_marking(m_path);
  Report r("barycenter", cfg);
  r.input(to_json(sigma));
  const AugMarking x = coarse_barycenter(sigma, cfg.th, search_options(r));
  const std::int64_t disp = formula_distance_T(sigma, act(1, sigma), cfg.th);
  const std::int64_t dist = formula_distance_T(sigma, x, cfg.th);
  auto& out = r.outputs();
  out["fixed"] = to_json(x);
  out["displacement"] = disp;
  out["distance"] = dist;
  out["ratio"] = double(dist) / double(std::max<std::int64_t>(1, disp));
  if (r.calibration())
    out["ratio_bound"] = r.calibration()->K_tilde + std::max(0.0, r.calibration()->C_tilde);
  r.emit(std::cout);
  return 0;
}

// --- nonqc ------------------------------------------------------------------

int cmd_nonqc(const Globals& g, std::vector<double> ds, const std::string& csv_path) {
  Config cfg = load(g);
  if (!ds.empty()) {
    cfg.d_grid = ds;
    cfg.validate();
  }
  Report r("nonqc", cfg);
  const auto sweep = nonqc_sweep(cfg);
  std::ostringstream csv;
  csv << "d," << nonqc_csv({}).substr(0, nonqc_csv({}).find('\n') + 1);
  for (const auto& run : sweep.runs) {
    std::istringstream body(nonqc_csv(run.rows));
    std::string line;
    std::getline(body, line);
    while (std::getline(body, line)) csv << run.d << ',' << line << '\n';
  }
  write_or_print(csv_path, csv.str());

  bool pass = true;
  json runs = json::array();
  const auto& cal = r.calibration();
  for (const auto& run : sweep.runs) {
    json o{{"d", run.d},
           {"start", run.start},
           {"end", run.end},
           {"midpoint", run.midpoint},
           {"peak_t", run.peak_t}};
    const bool peak_ok = run.peak_t >= 0.8 * run.d && run.peak_t <= 1.2 * run.d;
    o["peak_ok"] = peak_ok;
    pass = pass && peak_ok;
    if (cal) {
      const bool ends_ok = run.start <= cal->E0 && run.end <= cal->E0;
      const bool mid_ok = run.midpoint >= cal->c1 * run.d - cal->c2;
      o["endpoints_ok"] = ends_ok;
      o["midpoint_ok"] = mid_ok;
      pass = pass && ends_ok && mid_ok;
    }
    runs.push_back(o);
  }
  auto& out = r.outputs();
  out["runs"] = runs;
  out["farey_rate"] = farey_progress_rate();
  if (sweep.runs.size() >= 2) {
    const double ratio = sweep.midpoint_fit.slope / farey_progress_rate();
    out["midpoint_slope"] = sweep.midpoint_fit.slope;
    out["slope_ratio"] = ratio;
    const bool slope_ok = ratio >= 0.5 && ratio <= 2.0;
    out["slope_ok"] = slope_ok;
    pass = pass && slope_ok;
  }
  out["pass"] = pass;
  r.emit(csv_path.empty() || csv_path == "-" ? std::cerr : std::cout);
  return pass ? 0 : 1;
}

// --- calibrate --------------------------------------------------------------

int cmd_calibrate(const Globals& g, const std::string& out_path, bool check_only) {
  const Config cfg = load(g);
  const std::string path = out_path.empty() ? calibration_path(cfg) : out_path;
  Report r("calibrate", cfg);
  const Calibration fresh = calibrate(cfg);
  auto& out = r.outputs();
  out["path"] = path;
  out["fitted"] = to_json(fresh);
  out["fitted_digest"] = digest(fresh);
  int code = 0;
  if (check_only) {
    const Calibration pinned = load_calibration(path);
    const auto drift = calibration_drift(pinned, fresh);
    out["drift"] = drift;
    out["within_tolerance"] = drift.empty();
    code = drift.empty() ? 0 : 1;
  } else {
    save_calibration(path, fresh);
    out["written"] = true;
  }
  r.emit(std::cout);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse-teich: coarse Teichmüller geometry of symmetric surfaces"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "Config JSON")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");

  std::string a, b, y, to, phi_path, trace, csv, out;
  bool oracle = false, sweep = false, check_only = false;
  int cap = 0, k = 0, instances = 28;
  std::vector<double> ds;

  auto* dist = app.add_subcommand("dist", "Formula distances between two markings");
  dist->add_option("a", a)->required();
  dist->add_option("b", b)->required();
  dist->add_flag("--oracle", oracle, "Also run the exact move-graph search");
  dist->add_option("--cap", cap, "Search radius for --oracle (default: config bfs_cap)");

  auto* proj = app.add_subcommand("project", "Subsurface projection or phi of a marking");
  proj->add_option("marking", a)->required();
  proj->add_option("--y", y, "whole | slot<i> | glue<j> | slot<i>:p/q");
  proj->add_option("--to", to, "Second marking; adds the projection distance");
  proj->add_option("--phi", phi_path, "Simplex JSON (array of curves)");

  auto* fix = app.add_subcommand("fix-search", "Fixed point near an almost-fixed marking");
  fix->add_option("marking", a);
  fix->add_option("--trace", trace, "Write the reduction trace JSON here");
  fix->add_flag("--sweep", sweep, "Magnitude sweep instead of a single input");
  fix->add_option("--k", k, "Sweep only this k");
  fix->add_option("--instances", instances, "Instances per k in the sweep");
  fix->add_option("--csv", csv, "Sweep CSV path (default: stdout)");

  auto* bary = app.add_subcommand("barycenter", "Coarse barycenter of a marking");
  bary->add_option("marking", a);
  bary->add_flag("--sweep", sweep, "Regression sweep instead of a single input");
  bary->add_option("--k", k, "Surface for the sweep (default: config k)");
  bary->add_option("--instances", instances, "Instances in the sweep");
  bary->add_option("--csv", csv, "Sweep CSV path (default: stdout)");

  auto* nonqc = app.add_subcommand("nonqc", "Flat-surface sweep");
  nonqc->add_option("--d", ds, "d values (default: config grid)");
  nonqc->add_option("--csv", csv, "CSV path (default: stdout)");

  auto* cal = app.add_subcommand("calibrate", "Fit and write the calibration file");
  cal->add_option("--out", out, "Output path (default: resolved calibration path)");
  cal->add_flag("--check", check_only, "Compare against the existing file without writing");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count()) g.seed = seed;

  try {
    if (dist->parsed()) return cmd_dist(g, a, b, oracle, cap);
    if (proj->parsed()) return cmd_project(g, a, y, to, phi_path);
    if (fix->parsed()) {
      if (!sweep && a.empty()) throw ParseError("fix-search needs a marking or --sweep");
      return cmd_fix_search(g, a, trace, sweep, k, instances, csv);
    }
    if (bary->parsed()) {
      if (!sweep && a.empty()) throw ParseError("barycenter needs a marking or --sweep");
      return cmd_barycenter(g, a, sweep, k, sweep && instances == 28 ? 300 : instances, csv);
    }
    if (nonqc->parsed()) return cmd_nonqc(g, ds, csv);
    if (cal->parsed()) return cmd_calibrate(g, out, check_only);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return int(ExitCode::internal);
  }
  return 0;
}
