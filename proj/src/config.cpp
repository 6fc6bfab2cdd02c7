#include "ltbm/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ltbm/errors.hpp"
#include "ltbm/expr.hpp"

namespace ltbm {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& why) {
  fail(ErrorCode::Config, key + ": " + why);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = [] {
    std::set<std::string> st = {"catalog", "n", "N", "psi", "weight_slope", "weight_form", "chart_lo", "chart_hi"};
    for (int i = 0; i < kMaxDim; ++i)
      for (int j = i; j < kMaxDim; ++j) st.insert("g" + std::to_string(i) + std::to_string(j));
    return std::map<std::string, std::set<std::string>>{
        {"spacetime", st},
        {"numerics",
         {"fd_step", "richardson", "ode_tolerance", "voxel_fraction", "random_pairs", "matched_resolution",
          "theta_pairs", "containment_points", "seed", "threads", "tolerance", "samples"}},
        {"task",
         {"x0", "v0", "y", "K", "epsilon", "lambda", "delta", "t", "q", "theta", "region_b", "shift", "mu", "nu",
          "box_lo", "box_hi", "rapidity", "scan_points", "lambda_levels"}},
    };
  }();
  return keys;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string s = boost::trim_copy(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) config_error(key, "not a number: '" + text + "'");
  return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& text) {
  const std::string s = boost::trim_copy(text);
  Int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) config_error(key, "not an integer: '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string s = boost::to_lower_copy(boost::trim_copy(text));
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  config_error(key, "not a boolean: '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(", \t"), boost::token_compress_on);
  std::vector<double> out;
  for (const auto& p : parts)
    if (!p.empty()) out.push_back(to_double(key, p));
  if (out.empty()) config_error(key, "empty list");
  return out;
}

Vec to_vec(const std::string& key, const std::string& text, int n) {
  const std::vector<double> xs = to_list(key, text);
  if (static_cast<int>(xs.size()) != n)
    config_error(key, "expected " + std::to_string(n) + " components, got " + std::to_string(xs.size()));
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = xs[static_cast<std::size_t>(i)];
  return v;
}

std::vector<Vec> to_atoms(const std::string& key, const std::string& text, int n) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(";"));
  std::vector<Vec> out;
  for (const auto& p : parts)
    if (!boost::trim_copy(p).empty()) out.push_back(to_vec(key, p, n));
  return out;
}

void apply_catalog(SpacetimeConfig& sc, const pt::ptree& sec) {
  const std::string& name = sc.catalog;
  const auto has = [&](const char* k) { return sec.find(k) != sec.not_found(); };
  for (const auto& kv : sec)
    if (kv.first == "n" || kv.first == "psi" || kv.first[0] == 'g')
      config_error("spacetime." + kv.first, "not allowed together with a catalog entry");

  int n = 0;
  double lo = -4.0, hi = 4.0;
  std::string psi = "0";
  if (name == "minkowski2" || name == "minkowski3") {
    n = name.back() - '0';
  } else if (name == "weighted_minkowski2" || name == "weighted_minkowski3") {
    n = name.back() - '0';
    const double c = has("weight_slope") ? to_double("spacetime.weight_slope", sec.get<std::string>("weight_slope")) : 1.0;
    const std::string form = sec.get<std::string>("weight_form", "linear");
    std::ostringstream os;
    os.precision(17);
    if (form == "linear") os << c << "*x0";
    else if (form == "quadratic") os << c << "*x0^2";
    else config_error("spacetime.weight_form", "expected linear or quadratic, got '" + form + "'");
    psi = os.str();
    if (!has("N")) config_error("spacetime.N", "required for a weighted catalog entry (must exceed " + std::to_string(n) + ")");
  } else if (name == "warped2") {
    n = 2;
    lo = -2.0;
    hi = 2.0;
  } else {
    config_error("spacetime.catalog", "unknown entry '" + name + "'");
  }
  if (name.rfind("weighted", 0) != 0 && (has("weight_slope") || has("weight_form")))
    config_error("spacetime.weight_slope", "only weighted catalog entries take a weight");

  sc.n = n;
  sc.psi = psi;
  sc.metric.assign(static_cast<std::size_t>(n * n), "0");
  for (int i = 0; i < n; ++i)
    sc.metric[static_cast<std::size_t>(i * n + i)] = i == 0 ? "1" : (name == "warped2" ? "-exp(2*x0)" : "-1");
  sc.N = has("N") ? to_double("spacetime.N", sec.get<std::string>("N")) : n;
  if (psi != "0" && !(sc.N > n)) config_error("spacetime.N", "must exceed n = " + std::to_string(n) + " for a nonzero weight");
  sc.lo.assign(static_cast<std::size_t>(n), lo);
  sc.hi.assign(static_cast<std::size_t>(n), hi);
}

void apply_explicit(SpacetimeConfig& sc, const pt::ptree& sec) {
  if (sec.find("n") == sec.not_found()) config_error("spacetime.n", "required without a catalog entry");
  const int n = to_int<int>("spacetime.n", sec.get<std::string>("n"));
  if (n < 2 || n > kMaxDim) config_error("spacetime.n", "must lie in [2, " + std::to_string(kMaxDim) + "]");
  if (sec.find("weight_slope") != sec.not_found() || sec.find("weight_form") != sec.not_found())
    config_error("spacetime.weight_slope", "only weighted catalog entries take a weight");
  sc.n = n;
  sc.metric.assign(static_cast<std::size_t>(n * n), "0");
  for (const auto& kv : sec) {
    if (kv.first.size() != 3 || kv.first[0] != 'g') continue;
    const int i = kv.first[1] - '0', j = kv.first[2] - '0';
    if (i >= n || j >= n) config_error("spacetime." + kv.first, "index exceeds n");
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const std::string key = "g" + std::to_string(i) + std::to_string(j);
      const auto it = sec.find(key);
      if (it == sec.not_found()) {
        if (i == j) config_error("spacetime." + key, "diagonal component required");
        continue;
      }
      sc.metric[static_cast<std::size_t>(i * n + j)] = it->second.data();
      sc.metric[static_cast<std::size_t>(j * n + i)] = it->second.data();
    }
  sc.psi = sec.get<std::string>("psi", "0");
  sc.N = sec.find("N") != sec.not_found() ? to_double("spacetime.N", sec.get<std::string>("N")) : n;
  for (const char* k : {"chart_lo", "chart_hi"})
    if (sec.find(k) == sec.not_found()) config_error(std::string("spacetime.") + k, "required without a catalog entry");
}

void read_chart(SpacetimeConfig& sc, const pt::ptree& sec) {
  for (const char* k : {"chart_lo", "chart_hi"}) {
    const auto it = sec.find(k);
    if (it == sec.not_found()) continue;
    const std::string key = std::string("spacetime.") + k;
    std::vector<double> xs = to_list(key, it->second.data());
    if (xs.size() == 1) xs.assign(static_cast<std::size_t>(sc.n), xs[0]);
    if (static_cast<int>(xs.size()) != sc.n) config_error(key, "expected 1 or n values");
    (std::string(k) == "chart_lo" ? sc.lo : sc.hi) = xs;
  }
  for (int i = 0; i < sc.n; ++i)
    if (!(sc.lo[static_cast<std::size_t>(i)] < sc.hi[static_cast<std::size_t>(i)]))
      config_error("spacetime.chart_lo", "lower bound must be below upper bound");
}

WeightedSpacetime build_spacetime(const SpacetimeConfig& sc, const NumericsConfig& nc) {
  const int n = sc.n;
  std::vector<Expr> g(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const std::string key = "spacetime.g" + std::to_string(i) + std::to_string(j);
      try {
        g[static_cast<std::size_t>(i * n + j)] = parse_expr(sc.metric[static_cast<std::size_t>(i * n + j)], n);
      } catch (const Error& e) {
        config_error(key, e.what());
      }
      g[static_cast<std::size_t>(j * n + i)] = g[static_cast<std::size_t>(i * n + j)];
    }
  Expr psi;
  try {
    psi = parse_expr(sc.psi, n);
  } catch (const Error& e) {
    config_error("spacetime.psi", e.what());
  }
  FiniteDifferenceSettings fd;
  fd.step = nc.fd_step;
  fd.richardson = nc.richardson;
  try {
    return WeightedSpacetime::create(n, std::move(g), std::move(psi), sc.N, ChartDomain{sc.lo, sc.hi}, fd);
  } catch (const Error& e) {
    config_error("spacetime", std::string(error_code_name(e.code())) + ": " + e.what());
  }
}

void read_numerics(NumericsConfig& nc, const pt::ptree& sec) {
  for (const auto& [k, v] : sec) {
    const std::string key = "numerics." + k;
    const std::string& s = v.data();
    if (k == "fd_step") nc.fd_step = to_double(key, s);
    else if (k == "richardson") nc.richardson = to_bool(key, s);
    else if (k == "ode_tolerance") nc.ode_tolerance = to_double(key, s);
    else if (k == "voxel_fraction") nc.voxel_fraction = to_double(key, s);
    else if (k == "random_pairs") nc.random_pairs = to_int<std::size_t>(key, s);
    else if (k == "matched_resolution") nc.matched_resolution = to_int<int>(key, s);
    else if (k == "theta_pairs") nc.theta_pairs = to_int<std::size_t>(key, s);
    else if (k == "containment_points") nc.containment_points = to_int<std::size_t>(key, s);
    else if (k == "seed") nc.seed = to_int<std::uint64_t>(key, s);
    else if (k == "threads") nc.threads = to_int<int>(key, s);
    else if (k == "tolerance") nc.tolerance = to_double(key, s);
    else if (k == "samples") nc.samples = to_int<int>(key, s);
  }
  if (!(nc.fd_step > 0.0)) config_error("numerics.fd_step", "must be positive");
  if (!(nc.ode_tolerance > 0.0)) config_error("numerics.ode_tolerance", "must be positive");
  if (!(nc.voxel_fraction > 0.0 && nc.voxel_fraction <= 1.0)) config_error("numerics.voxel_fraction", "must lie in (0, 1]");
  if (nc.threads < 1) config_error("numerics.threads", "must be at least 1");
  if (nc.tolerance < 0.0) config_error("numerics.tolerance", "must be non-negative");
  if (nc.samples < 2) config_error("numerics.samples", "must be at least 2");
}

void read_task(TaskConfig& tc, const pt::ptree& sec, const WeightedSpacetime& st) {
  const int n = st.dim();
  for (const auto& [k, v] : sec) {
    const std::string key = "task." + k;
    const std::string& s = v.data();
    if (k == "x0") tc.x0 = to_vec(key, s, n);
    else if (k == "v0") tc.v0 = to_vec(key, s, n);
    else if (k == "y") tc.y = to_vec(key, s, n);
    else if (k == "K") tc.K = to_double(key, s);
    else if (k == "epsilon") tc.epsilon = to_double(key, s);
    else if (k == "lambda") tc.lambda = to_double(key, s);
    else if (k == "delta") tc.delta = to_double(key, s);
    else if (k == "t") tc.t = to_list(key, s);
    else if (k == "q") tc.q = to_double(key, s);
    else if (k == "theta") tc.theta = to_list(key, s);
    else if (k == "region_b") tc.region_b = boost::trim_copy(s);
    else if (k == "shift") tc.shift = to_vec(key, s, n);
    else if (k == "mu") tc.mu = to_atoms(key, s, n);
    else if (k == "nu") tc.nu = to_atoms(key, s, n);
    else if (k == "box_lo") tc.box_lo = to_vec(key, s, n);
    else if (k == "box_hi") tc.box_hi = to_vec(key, s, n);
    else if (k == "rapidity") tc.rapidity = to_double(key, s);
    else if (k == "scan_points") tc.scan_points = to_int<std::size_t>(key, s);
    else if (k == "lambda_levels") tc.lambda_levels = to_int<int>(key, s);
  }
  const auto in_chart = [&](const char* k, const Vec& x) {
    if (x.size() > 0 && !st.chart().contains(as_span(x))) config_error(std::string("task.") + k, "outside the chart");
  };
  in_chart("x0", tc.x0);
  in_chart("y", tc.y);
  for (const Vec& a : tc.mu) in_chart("mu", a);
  for (const Vec& a : tc.nu) in_chart("nu", a);
  if (!(tc.lambda > 0.0)) config_error("task.lambda", "must be positive");
  if (tc.delta < 0.0) config_error("task.delta", "must be non-negative");
  if (tc.epsilon < 0.0) config_error("task.epsilon", "must be non-negative");
  if (!(tc.q > 0.0 && tc.q < 1.0)) config_error("task.q", "must lie in (0, 1)");
  for (double t : tc.t)
    if (!(t >= 0.0 && t <= 1.0)) config_error("task.t", "values must lie in [0, 1]");
  for (double th : tc.theta)
    if (!(th >= 0.0)) config_error("task.theta", "values must be non-negative");
  if (tc.region_b != "transport" && tc.region_b != "shift")
    config_error("task.region_b", "expected transport or shift, got '" + tc.region_b + "'");
  if (tc.region_b == "shift" && tc.shift.size() == 0) config_error("task.shift", "required when region_b = shift");
  if (tc.box_lo.size() != tc.box_hi.size()) config_error("task.box_lo", "box_lo and box_hi go together");
  if (!(tc.rapidity >= 0.0)) config_error("task.rapidity", "must be non-negative");
  if (tc.lambda_levels < 1) config_error("task.lambda_levels", "must be at least 1");
}

}  // namespace

PipelineOptions RunConfig::pipeline() const {
  PipelineOptions o;
  o.voxel_fraction = numerics.voxel_fraction;
  o.random_pairs = numerics.random_pairs;
  o.matched_resolution = numerics.matched_resolution;
  o.theta_pairs = numerics.theta_pairs;
  o.seed = numerics.seed;
  o.threads = numerics.threads;
  o.tolerance = numerics.tolerance;
  o.containment_points = numerics.containment_points;
  return o;
}

LogOptions RunConfig::log_options() const {
  LogOptions o;
  o.ode.rtol = numerics.ode_tolerance;
  o.ode.atol = numerics.ode_tolerance;
  return o;
}

std::vector<std::string> catalog_names() {
  return {"minkowski2", "minkowski3", "weighted_minkowski2", "weighted_minkowski3", "warped2"};
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::Config, origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (body.empty()) config_error(section, "key outside any section");
      config_error(section, "unknown section");
    }
    for (const auto& kv : body)
      if (!it->second.count(kv.first)) config_error(section + "." + kv.first, "unknown key");
  }
  const auto spacetime = tree.get_child_optional("spacetime");
  if (!spacetime) config_error("spacetime", "section required");

  RunConfig cfg;
  cfg.origin = origin;
  if (const auto num = tree.get_child_optional("numerics")) read_numerics(cfg.numerics, *num);
  auto& sc = cfg.spacetime;
  sc.catalog = spacetime->get<std::string>("catalog", "");
  if (!sc.catalog.empty()) apply_catalog(sc, *spacetime);
  else apply_explicit(sc, *spacetime);
  read_chart(sc, *spacetime);
  cfg.st = build_spacetime(sc, cfg.numerics);
  const pt::ptree empty;
  const auto task = tree.get_child_optional("task");
  read_task(cfg.task, task ? *task : empty, cfg.st);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Config, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace ltbm
