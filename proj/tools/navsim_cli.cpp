#include "navsim_cli.hpp"

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace navsim {

namespace sn = strapnav;
namespace pt = boost::property_tree;
using Mp = boost::multiprecision::cpp_bin_float_50;

namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

std::string normalize(std::string s) {
  std::string r;
  for (char c : s) {
    if (c == '_' || c == '-' || std::isspace(static_cast<unsigned char>(c))) continue;
    r += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return r;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario",
       {"kind", "lat_deg", "lon_deg", "h0_m", "ve0_mps", "a_mps2", "omega_rad_s", "duration_s",
        "dt_s", "substeps"}},
      {"algorithms", {"pairs"}},
      {"output", {"csv", "ranking", "plot_svg", "plot"}},
      {"earth", {"omega_e_rad_s", "gravity", "constant_g_mps2"}},
  };
  return keys;
}

template <typename T>
T get_value(const pt::ptree& section, const std::string& sec, const std::string& key) {
  try {
    return section.get<T>(key);
  } catch (const pt::ptree_error&) {
    throw ConfigError(fmt::format("[{}] {}: cannot parse '{}'", sec, key,
                                  section.get<std::string>(key, "")));
  }
}

template <typename T>
void maybe_set(const pt::ptree& root, const std::string& sec, const std::string& key, T& target) {
  const auto section = root.get_child_optional(sec);
  if (!section || !section->count(key)) return;
  target = get_value<T>(*section, sec, key);
}

/// Writes through a temporary stream so a failed open surfaces as a config error.
template <typename Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  fn(f);
  f.flush();
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

std::string pair_name(sn::VelAlg v, sn::PosAlg p) {
  if (static_cast<int>(v) == static_cast<int>(p)) return std::string(sn::to_string(v));
  return fmt::format("{}/{}", sn::to_string(v), sn::to_string(p));
}

sn::Scenario<Mp> to_mp(const sn::Scenario<double>& s) {
  sn::Scenario<Mp> m;
  m.kind = s.kind;
  m.lat0 = s.lat0;
  m.lon0 = s.lon0;
  m.h0 = s.h0;
  m.ve0 = s.ve0;
  m.accel_amp = s.accel_amp;
  m.accel_freq = s.accel_freq;
  m.T = s.T;
  m.duration = s.duration;
  m.substeps = s.substeps;
  return m;
}

sn::EarthModel<Mp> to_mp(const sn::EarthModel<double>& e) {
  sn::EarthModel<Mp> m;
  m.omega_e = e.omega_e;
  m.gravity = e.gravity;
  m.constant_g = e.constant_g;
  return m;
}

// Published magnitudes for the two reference flights, with their bands.
struct Band {
  std::string name;
  double value;
  double reference;
  double rel_tol;
};

std::vector<Band> reference_bands(const sn::Scenario<double>& s,
                                  const sn::AssumptionResiduals& r) {
  const auto a = sn::Scenario<double>::const_east_default();
  const auto b = sn::Scenario<double>::sine_east_default();
  auto same_flight = [](const sn::Scenario<double>& x, const sn::Scenario<double>& y) {
    auto close = [](double p, double q) { return std::abs(p - q) <= 1e-12 * std::max(1.0, std::abs(q)); };
    return x.kind == y.kind && close(x.lat0, y.lat0) && close(x.h0, y.h0) &&
           close(x.ve0, y.ve0) &&
           (x.kind == sn::ScenarioKind::ConstEast ||
            (close(x.accel_amp, y.accel_amp) && close(x.accel_freq, y.accel_freq)));
  };
  if (same_flight(s, a)) {
    return {{"|w_in|", r.max.w_in_norm, 1.6e-4, 0.05},
            {"|w_ib x f|", r.max.w_ib_cross_f, 0.0014, 0.10}};
  }
  if (same_flight(s, b)) {
    return {{"max |w_in|", r.max.w_in_norm, 2.2e-4, 0.05},
            {"max |f_dot|", r.max.f_dot_norm, 0.63, 0.05}};
  }
  return {};
}

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<double> dt;
  std::optional<double> duration;
  bool plot = false;
};

CliConfig resolve(const CommonOptions& o) {
  CliConfig cfg = load_config(o.config);
  if (o.dt) cfg.scenario.T = *o.dt;
  if (o.duration) cfg.scenario.duration = *o.duration;
  try {
    cfg.scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (o.plot) cfg.plot = true;
  return cfg;
}

std::vector<sn::RunConfig<double>> run_configs(const CliConfig& cfg) {
  std::vector<sn::RunConfig<double>> out;
  for (const auto& p : cfg.algorithms) {
    sn::RunConfig<double> rc;
    rc.scenario = cfg.scenario;
    rc.vel_alg = p.vel;
    rc.pos_alg = p.pos;
    out.push_back(rc);
  }
  return out;
}

int cmd_run(const CommonOptions& o, std::ostream& out) {
  const CliConfig cfg = resolve(o);
  if (cfg.algorithms.empty()) throw ConfigError("algorithm list is empty");
  const auto rc = run_configs(cfg).front();
  const sn::RunResult r = sn::run(cfg.earth, rc);
  const std::string path = o.out.empty() ? cfg.csv_path : o.out;
  write_file(path, [&](std::ostream& f) { write_error_csv(f, r); });
  fmt::print(out, "{}: {} epochs, max horizontal position error {:.6e} m -> {}\n",
             pair_name(r.vel_alg, r.pos_alg), r.records.size(), r.summary.max_horiz_pos_err, path);
  if (cfg.plot) {
    const std::string svg = o.out.empty() ? cfg.plot_path : replace_extension(o.out, ".svg");
    write_file(svg, [&](std::ostream& f) { write_error_svg(f, {r}); });
  }
  return kOk;
}

int cmd_compare(const CommonOptions& o, std::ostream& out) {
  const CliConfig cfg = resolve(o);
  if (cfg.algorithms.empty()) throw ConfigError("algorithm list is empty");
  const auto cfgs = run_configs(cfg);
  const auto results = sn::run_all(cfg.earth, cfgs, thread_budget(cfgs.size()));
  const auto rows = sn::rank_results(results);
  const std::string path = o.out.empty() ? cfg.ranking_path : o.out;
  write_file(path, [&](std::ostream& f) { write_ranking_csv(f, rows); });
  fmt::print(out, "{:<4} {:<16} {:>22} {:>22}\n", "rank", "algorithm", "max horiz pos err (m)",
             "max horiz vel err (m/s)");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    fmt::print(out, "{:<4} {:<16} {:>22.6e} {:>22.6e}\n", i + 1,
               pair_name(rows[i].vel_alg, rows[i].pos_alg), rows[i].summary.max_horiz_pos_err,
               rows[i].summary.max_horiz_vel_err);
  }
  if (cfg.plot) {
    const std::string svg = o.out.empty() ? cfg.plot_path : replace_extension(o.out, ".svg");
    write_file(svg, [&](std::ostream& f) { write_error_svg(f, results); });
  }
  return kOk;
}

int cmd_oracle_check(const CommonOptions& o, std::ostream& out) {
  sn::Scenario<double> s = sn::Scenario<double>::const_east_default();
  sn::EarthModel<double> e = sn::EarthModel<double>::wgs84();
  if (!o.config.empty()) {
    const CliConfig cfg = resolve(o);
    s = cfg.scenario;
    e = cfg.earth;
  }
  const auto checks = sn::oracle_suite(to_mp(e), to_mp(s));
  bool ok = true;
  fmt::print(out, "{:<18} {:>5} {:>16} {:>16}  {}\n", "closed form", "order", "|deviation|",
             "|leading term|", "result");
  for (const auto& c : checks) {
    ok = ok && c.pass;
    fmt::print(out, "{:<18} {:>5} {:>16.6e} {:>16.6e}  {}\n", c.label,
               c.order == 0 ? std::string("exact") : fmt::format("T^{}", c.order),
               c.deviation_norm, c.oracle_norm, c.pass ? "PASS" : "FAIL");
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_residuals(const CommonOptions& o, std::ostream& out) {
  const CliConfig cfg = resolve(o);
  const auto r = sn::assumption_residuals(cfg.earth, cfg.scenario);
  if (!o.out.empty()) write_file(o.out, [&](std::ostream& f) { write_residuals_csv(f, r); });
  fmt::print(out, "max |w_in|                 {:.6e} rad/s\n", r.max.w_in_norm);
  fmt::print(out, "max |(w x)^2 - (w_dot x)|  {:.6e} rad^2/s^2\n", r.max.const_c);
  fmt::print(out, "max |w_ib x f + f_dot|     {:.6e} m/s^3\n", r.max.ramp_u);
  fmt::print(out, "max |w_ib x f|             {:.6e} m/s^3\n", r.max.w_ib_cross_f);
  fmt::print(out, "max |f_dot|                {:.6e} m/s^3\n", r.max.f_dot_norm);
  bool ok = true;
  for (const auto& b : reference_bands(cfg.scenario, r)) {
    const bool pass = std::abs(b.value - b.reference) <= b.rel_tol * b.reference;
    ok = ok && pass;
    fmt::print(out, "{:<12} {:.4e} vs {:.4g} +/- {:.0f}%  {}\n", b.name, b.value, b.reference,
               b.rel_tol * 100, pass ? "PASS" : "FAIL");
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

AlgorithmPair parse_algorithm_pair(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  const std::string v = trim(t.substr(0, slash));
  const std::string p = slash == std::string::npos ? v : trim(t.substr(slash + 1));
  const auto va = sn::parse_vel_alg(v);
  const auto pa = sn::parse_pos_alg(p);
  if (!va || !pa) throw ConfigError("unknown algorithm '" + t + "'");
  return {*va, *pa};
}

CliConfig parse_config(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  const auto& allowed = allowed_keys();
  for (const auto& [name, section] : root) {
    const auto it = allowed.find(name);
    if (it == allowed.end()) {
      throw ConfigError(section.empty() ? "key outside any section: " + name
                                        : "unknown section [" + name + "]");
    }
    for (const auto& kv : section) {
      if (!it->second.count(kv.first)) {
        throw ConfigError("unknown key '" + kv.first + "' in [" + name + "]");
      }
    }
  }

  CliConfig cfg;
  std::string kind = "const_east";
  maybe_set(root, "scenario", "kind", kind);
  if (normalize(kind) == "consteast") {
    cfg.scenario = sn::Scenario<double>::const_east_default();
  } else if (normalize(kind) == "sineeast") {
    cfg.scenario = sn::Scenario<double>::sine_east_default();
  } else {
    throw ConfigError("[scenario] kind must be const_east or sine_east, got '" + kind + "'");
  }
  auto& s = cfg.scenario;
  double lat_deg = s.lat0 / kDeg;
  double lon_deg = s.lon0 / kDeg;
  maybe_set(root, "scenario", "lat_deg", lat_deg);
  maybe_set(root, "scenario", "lon_deg", lon_deg);
  // Keep the exact default radians unless a value was given.
  if (root.get_child_optional("scenario.lat_deg")) s.lat0 = lat_deg * kDeg;
  if (root.get_child_optional("scenario.lon_deg")) s.lon0 = lon_deg * kDeg;
  maybe_set(root, "scenario", "h0_m", s.h0);
  maybe_set(root, "scenario", "ve0_mps", s.ve0);
  maybe_set(root, "scenario", "a_mps2", s.accel_amp);
  maybe_set(root, "scenario", "omega_rad_s", s.accel_freq);
  maybe_set(root, "scenario", "duration_s", s.duration);
  maybe_set(root, "scenario", "dt_s", s.T);
  maybe_set(root, "scenario", "substeps", s.substeps);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (const auto list = root.get_optional<std::string>("algorithms.pairs")) {
    std::stringstream ss(*list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (trim(item).empty()) continue;
      cfg.algorithms.push_back(parse_algorithm_pair(item));
    }
  } else {
    for (std::size_t i = 0; i < sn::kAllVelAlgs.size(); ++i) {
      cfg.algorithms.push_back({sn::kAllVelAlgs[i], sn::kAllPosAlgs[i]});
    }
  }

  maybe_set(root, "output", "csv", cfg.csv_path);
  maybe_set(root, "output", "ranking", cfg.ranking_path);
  maybe_set(root, "output", "plot_svg", cfg.plot_path);
  maybe_set(root, "output", "plot", cfg.plot);

  maybe_set(root, "earth", "omega_e_rad_s", cfg.earth.omega_e);
  maybe_set(root, "earth", "constant_g_mps2", cfg.earth.constant_g);
  std::string gravity = "somigliana";
  maybe_set(root, "earth", "gravity", gravity);
  if (normalize(gravity) == "somigliana") {
    cfg.earth.gravity = sn::GravityModel::Somigliana;
  } else if (normalize(gravity) == "constant") {
    cfg.earth.gravity = sn::GravityModel::Constant;
  } else {
    throw ConfigError("[earth] gravity must be somigliana or constant, got '" + gravity + "'");
  }
  if (!cfg.earth.valid()) throw ConfigError("[earth] parameters out of range");
  return cfg;
}

CliConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config '" + path + "'");
  try {
    return parse_config(f);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_error_csv(std::ostream& out, const sn::RunResult& r) {
  fmt::print(out, "t_s,verr_n_mps,verr_u_mps,verr_e_mps,perr_n_m,perr_u_m,perr_e_m,perr_horiz_m\n");
  fmt::memory_buffer buf;
  for (const auto& e : r.records) {
    fmt::format_to(std::back_inserter(buf),
                   "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n", e.t,
                   e.v_err.x(), e.v_err.y(), e.v_err.z(), e.p_err.x(), e.p_err.y(), e.p_err.z(),
                   e.p_err_horiz);
    if (buf.size() > (1u << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_ranking_csv(std::ostream& out, const std::vector<sn::RankingRow>& rows) {
  fmt::print(out,
             "rank,velocity,position,max_horiz_pos_err_m,final_horiz_pos_err_m,"
             "max_horiz_vel_err_mps,max_abs_vert_vel_err_mps\n");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& s = rows[i].summary;
    fmt::print(out, "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n", i + 1,
               sn::to_string(rows[i].vel_alg), sn::to_string(rows[i].pos_alg),
               s.max_horiz_pos_err, s.final_horiz_pos_err, s.max_horiz_vel_err,
               s.max_abs_vert_vel_err);
  }
}

void write_residuals_csv(std::ostream& out, const sn::AssumptionResiduals& r) {
  fmt::print(out, "t_s,w_in_norm_rps,const_c_residual,ramp_u_residual,w_ib_cross_f,f_dot_norm\n");
  for (const auto& s : r.series) {
    fmt::print(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n", s.t, s.w_in_norm,
               s.const_c, s.ramp_u, s.w_ib_cross_f, s.f_dot_norm);
  }
}

// Log-scale horizontal position error against time, one polyline per run.
// Each polyline keeps the per-bucket maximum so peaks survive decimation.
void write_error_svg(std::ostream& out, const std::vector<sn::RunResult>& results) {
  constexpr double W = 900, H = 500, L = 80, R = 170, Tm = 30, B = 50;
  constexpr double kFloor = 1e-20;  // stands in for exact zero on the log axis
  constexpr std::size_t kBuckets = 1500;
  static const std::array<const char*, 6> colors{"#1f77b4", "#d62728", "#2ca02c",
                                                 "#ff7f0e", "#9467bd", "#8c564b"};
  double t_max = 0, e_min = 1e300, e_max = 0;
  for (const auto& r : results) {
    for (const auto& e : r.records) {
      t_max = std::max(t_max, e.t);
      const double v = std::max(e.p_err_horiz, kFloor);
      e_min = std::min(e_min, v);
      e_max = std::max(e_max, v);
    }
  }
  if (t_max <= 0) t_max = 1;
  if (e_max <= 0) e_max = 1;
  const double lo = std::floor(std::log10(std::min(e_min, e_max)));
  const double hi = std::max(lo + 1, std::ceil(std::log10(e_max)));
  auto px = [&](double t) { return L + (W - L - R) * t / t_max; };
  auto py = [&](double e) {
    return Tm + (H - Tm - B) * (hi - std::log10(std::max(e, kFloor))) / (hi - lo);
  };

  fmt::print(out,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
             "font-family=\"sans-serif\" font-size=\"12\">\n",
             W, H);
  fmt::print(out, "<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", W, H);
  fmt::print(out,
             "<rect x=\"{:.0f}\" y=\"{:.0f}\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"none\" "
             "stroke=\"black\"/>\n",
             L, Tm, W - L - R, H - Tm - B);
  const int decades = static_cast<int>(hi - lo);
  const int label_step = std::max(1, decades / 10);
  for (int d = 0; d <= decades; d += label_step) {
    const double y = py(std::pow(10.0, lo + d));
    fmt::print(out, "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n",
               L, y, W - R, y);
    fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">1e{}</text>\n", L - 6,
               y + 4, static_cast<int>(lo) + d);
  }
  for (int i = 0; i <= 4; ++i) {
    const double t = t_max * i / 4;
    fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.0f}</text>\n", px(t),
               H - B + 18, t);
  }
  fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">time (s)</text>\n",
             L + (W - L - R) / 2, H - 10);
  fmt::print(out,
             "<text x=\"16\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1f})\">"
             "horizontal position error (m)</text>\n",
             Tm + (H - Tm - B) / 2, Tm + (H - Tm - B) / 2);

  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& recs = results[k].records;
    const char* color = colors[k % colors.size()];
    fmt::print(out, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"", color);
    const std::size_t per = std::max<std::size_t>(1, (recs.size() + kBuckets - 1) / kBuckets);
    for (std::size_t i = 0; i < recs.size(); i += per) {
      std::size_t best = i;
      for (std::size_t j = i; j < std::min(recs.size(), i + per); ++j) {
        if (recs[j].p_err_horiz > recs[best].p_err_horiz) best = j;
      }
      fmt::print(out, "{:.2f},{:.2f} ", px(recs[best].t), py(recs[best].p_err_horiz));
    }
    fmt::print(out, "\"/>\n");
    const double ly = Tm + 16 + 18 * static_cast<double>(k);
    fmt::print(out, "<line x1=\"{:.0f}\" y1=\"{:.1f}\" x2=\"{:.0f}\" y2=\"{:.1f}\" stroke=\"{}\" "
                    "stroke-width=\"2\"/>\n",
               W - R + 12, ly, W - R + 36, ly, color);
    fmt::print(out, "<text x=\"{:.0f}\" y=\"{:.1f}\">{}</text>\n", W - R + 42, ly + 4,
               pair_name(results[k].vel_alg, results[k].pos_alg));
  }
  fmt::print(out, "</svg>\n");
}

unsigned thread_budget(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NAVSIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw ConfigError(std::string("NAVSIM_THREADS must be a positive integer, got '") + env + "'");
    }
    n = static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strapdown navigation algorithm simulator", "navsim"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto add_common = [&](CLI::App* sub, bool config_required, bool with_overrides, bool with_plot) {
    auto* c = sub->add_option("--config", opts.config, "scenario INI file");
    if (config_required) c->required();
    sub->add_option("--out", opts.out, "output path (overrides the config)");
    if (with_overrides) {
      sub->add_option("--dt", opts.dt, "update interval override (s)")->check(CLI::PositiveNumber);
      sub->add_option("--duration", opts.duration, "duration override (s)")
          ->check(CLI::NonNegativeNumber);
    }
    if (with_plot) sub->add_flag("--plot", opts.plot, "also write an SVG error plot");
  };
  auto* run = app.add_subcommand("run", "run the first configured algorithm pair, write CSV");
  add_common(run, true, true, true);
  auto* cmp = app.add_subcommand("compare", "run every configured pair and rank them");
  add_common(cmp, true, true, true);
  auto* orc = app.add_subcommand("oracle-check", "compare one-step errors with closed forms");
  orc->add_option("--config", opts.config, "scenario INI file (defaults to scenario A)");
  auto* res = app.add_subcommand("residuals", "assumption residuals along the truth trajectory");
  add_common(res, true, true, false);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    if (*run) return cmd_run(opts, out);
    if (*cmp) return cmd_compare(opts, out);
    if (*orc) return cmd_oracle_check(opts, out);
    if (*res) return cmd_residuals(opts, out);
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const sn::NumericalAbort& e) {
    fmt::print(err, "{}\n", e.what());
    return kNumericalAbort;
  }
  return kConfigError;
}

}  // namespace navsim
