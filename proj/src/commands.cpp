#include "ltbm/commands.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "ltbm/coupling.hpp"
#include "ltbm/distortion.hpp"
#include "ltbm/errors.hpp"
#include "ltbm/geodesics.hpp"
#include "ltbm/regions.hpp"
#include "ltbm/tbm.hpp"

namespace ltbm {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (!s.empty() && s.find_first_of(" \t=\"\\") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string joined(const Vec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s.empty() ? "-" : s;
}

class Record {
 public:
  explicit Record(const std::string& type) { line_ << "record=" << type; }
  Record& operator()(const char* key, double v) { return raw(key, num(v)); }
  Record& operator()(const char* key, std::size_t v) { return raw(key, std::to_string(v)); }
  Record& operator()(const char* key, int v) { return raw(key, std::to_string(v)); }
  Record& operator()(const char* key, bool v) { return raw(key, v ? "true" : "false"); }
  Record& operator()(const char* key, const char* v) { return raw(key, quoted(v)); }
  Record& operator()(const char* key, const std::string& v) { return raw(key, quoted(v)); }
  Record& operator()(const char* key, const ExtendedReal& v) { return raw(key, v.infinite ? "inf" : num(v.value)); }
  Record& operator()(const char* key, const Vec& v) { return raw(key, joined(v)); }
  Record& operator()(const char* key, const Mat& m) {
    std::string s;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) s += (i || j ? "," : "") + num(m(i, j));
    return raw(key, s);
  }
  void write(std::ostream& os) const { os << line_.str() << '\n'; }

 private:
  Record& raw(const char* key, const std::string& v) {
    line_ << ' ' << key << '=' << v;
    return *this;
  }
  std::ostringstream line_;
};

Vec base_point(const RunConfig& cfg) {
  if (cfg.task.x0.size() > 0) return cfg.task.x0;
  const auto& c = cfg.st.chart();
  Vec x(cfg.st.dim());
  for (int a = 0; a < x.size(); ++a)
    x[a] = 0.5 * (c.lo[static_cast<std::size_t>(a)] + c.hi[static_cast<std::size_t>(a)]);
  return x;
}

// Default direction: the unit future time leg of the coordinate frame.
Vec base_direction(const RunConfig& cfg, const Vec& x) {
  if (cfg.task.v0.size() > 0) return cfg.task.v0;
  return orthonormal_frame(metric_at(cfg.st, as_span(x)), Vec::Unit(cfg.st.dim(), 0)).col(0);
}

Vec require(const Vec& v, const char* what) {
  if (v.size() == 0) fail(ErrorCode::InvalidArgument, std::string("task.") + what + " is required");
  return v;
}

void tbm_fields(Record& r, const TbmCheckResult& c) {
  r("t", c.t)("theta", c.theta)("theta_resolution", c.theta_resolution)("dual_samples", c.dual_samples)(
      "measure_A", c.measure_A)("measure_B", c.measure_B)("measure_G", c.measure_G)("lhs", c.lhs)("rhs", c.rhs)(
      "margin", c.margin)("uncertainty", c.uncertainty)("tolerance", c.tolerance)("pairs_used", c.pairs_used)(
      "pairs_skipped", c.pairs_skipped)("verdict", to_string(c.verdict));
}

int cmd_curvature(const RunConfig& cfg, std::ostream& rec, std::ostream& sum) {
  const Vec x = base_point(cfg);
  const CurvatureReport cr = curvature_report(cfg.st, as_span(x));
  const double scalar = (cr.metric.inverse() * cr.ricci).trace();
  Record("curvature")("x", x)("metric", cr.metric)("ricci", cr.ricci)("scalar", scalar)("be_ricci", cr.be_ricci)(
      "density", measure_density(cfg.st, as_span(x)))("step", cr.step)
      .write(rec);
  sum << "curvature at " << joined(x) << ": scalar " << num(scalar) << ", max |Ric| "
      << num(cr.ricci.cwiseAbs().maxCoeff()) << "\n";
  if (cfg.task.v0.size() > 0) {
    const Vec& v = cfg.task.v0;
    const double ric = v.dot(cr.ricci * v), be = bakry_emery_ricci(cfg.st, as_span(x), v);
    Record("curvature_direction")("v", v)("ricci", ric)("be_ricci", be).write(rec);
    sum << "  along v: Ric " << num(ric) << ", Bakry-Emery " << num(be) << "\n";
  }
  return kExitOk;
}

int cmd_geodesic(const RunConfig& cfg, std::ostream& rec, std::ostream& sum) {
  const Vec x = base_point(cfg);
  const Vec v = require(cfg.task.v0, "v0");
  std::vector<double> ts;
  const int m = cfg.numerics.samples;
  for (int k = 0; k < m; ++k) ts.push_back(static_cast<double>(k) / (m - 1));
  const GeodesicSolution sol = solve_geodesic(cfg.st, TangentPoint{x, v}, ts, cfg.log_options().ode);
  for (std::size_t k = 0; k < sol.t.size(); ++k)
    Record("geodesic_point")("k", k)("t", sol.t[k])("x", sol.x[k])("v", sol.v[k]).write(rec);
  const CausalClass cc = causal_type(cfg.st, TangentPoint{x, v});
  const double res = geodesic_residual(cfg.st, sol);
  Record("geodesic")("x0", x)("v0", v)("samples", sol.t.size())("end", sol.x.back())("residual", res)(
      "character", to_string(cc.character))("orientation", to_string(cc.orientation))
      .write(rec);
  sum << "geodesic: " << to_string(cc.character) << ", endpoint " << joined(sol.x.back()) << ", residual "
      << num(res) << "\n";
  return kExitOk;
}

int cmd_separation(const RunConfig& cfg, std::ostream& rec, std::ostream& sum) {
  const Vec x = base_point(cfg);
  const Vec y = require(cfg.task.y, "y");
  const LogOptions lo = cfg.log_options();
  const Vec w = log_map(cfg.st, x, y, lo);
  const SeparationValue s = separation_from_log(cfg.st, x, w);
  Record r("separation");
  r("x", x)("y", y)("log", w)("character", to_string(s.character));
  r("value", s.minus_infinity ? -std::numeric_limits<double>::infinity() : s.value);
  r("positive_part", s.positive_part()).write(rec);
  sum << "separation: " << (s.minus_infinity ? std::string("-inf") : num(s.value)) << " ("
      << to_string(s.character) << ")\n";
  return kExitOk;
}

int cmd_distortion_table(const RunConfig& cfg, std::ostream& rec, std::ostream& sum) {
  const double K = cfg.task.K, N = cfg.st.synthetic_dim();
  const int m = cfg.numerics.samples;
  std::size_t infinite = 0;
  for (double theta : cfg.task.theta)
    for (int k = 0; k < m; ++k) {
      const double t = static_cast<double>(k) / (m - 1);
      const ExtendedReal s = sigma(K / N, t, theta), tt = tau(K, N, t, theta);
      infinite += s.infinite || tt.infinite;
      Record("distortion")("K", K)("N", N)("theta", theta)("t", t)("sigma", s)("tau", tt).write(rec);
    }
  sum << "distortion table: " << cfg.task.theta.size() * static_cast<std::size_t>(m) << " rows, " << infinite
      << " infinite\n";
  return kExitOk;
}

int cmd_check_ode(const RunConfig& cfg, std::ostream& rec, std::ostream& sum) {
  const Vec x = base_point(cfg);
  const TransportField tf = build_transport_field(cfg.st, x, base_direction(cfg, x));
  const auto& t = cfg.task;
  const DistortionOdeReport r = check_distortion_ode(cfg.st, tf, t.lambda, t.K, t.epsilon, cfg.numerics.samples);
  for (std::size_t k = 0; k < r.t.size(); ++k)
    Record("ode_sample")("t", r.t[k])("D", r.D[k])("Ddd", r.Ddd[k])("residual", r.residual[k])(
        "error_term", r.error_term[k])("error_term_rebuilt", r.error_term_rebuilt[k])
        .write(rec);
  Record("ode")("x0", tf.x0)("v0", tf.v0)("alpha", tf.alpha)("lambda", r.lambda)("K", r.K)("epsilon", r.epsilon)(
      "be_ricci", r.be_ricci)("min_residual", r.min_residual)("tolerance", r.tolerance)("holds", r.holds)(
      "sup_error_term", r.sup_error_term)("error_at_zero", r.error_at_zero)("rebuild_discrepancy",
                                                                             r.rebuild_discrepancy)
      .write(rec);
  sum << "distortion ODE at lambda " << num(r.lambda) << ": " << (r.holds ? "holds" : "fails") << ", min residual "
      << num(r.min_residual) << ", sup |error term| " << num(r.sup_error_term) << "\n";
  return kExitOk;
}

int cmd_check_tbm(const RunConfig& cfg, std::ostream& rec, std::ostream& sum) {
  const Vec x = base_point(cfg);
  const Vec v = base_direction(cfg, x);
  const auto& t = cfg.task;
  const double delta = cfg.effective_delta();
  const RegionSpec A = eigen_cube(cfg.st, x, v, delta);
  RegionSpec B;
  if (t.region_b == "shift") {
    const Vec s = t.shift;
    B = map_region(A, [s](const Vec& p) { return Vec(p + s); }, "A + shift");
  } else {
    const TransportField tf = build_transport_field(cfg.st, x, v);
    const WeightedSpacetime& st = cfg.st;
    const double lambda = t.lambda;
    B = map_region(A, [&st, tf, lambda](const Vec& p) { return transport_map(st, tf, p, lambda); }, "T_lambda(A)");
  }
  const auto results = check_tbm(cfg.st, A, B, t.K, t.t, t.q, cfg.pipeline());
  for (const auto& c : results) {
    Record r("tbm");
    r("lambda", t.lambda)("delta", delta)("K", t.K)("N", cfg.st.synthetic_dim())("q", t.q);
    tbm_fields(r, c);
    r.write(rec);
    sum << "TBM at t=" << num(c.t) << ": " << to_string(c.verdict) << " (lhs " << num(c.lhs) << ", rhs "
        << num(c.rhs) << ", uncertainty " << num(c.uncertainty) << ")\n";
  }
  return kExitOk;
}

int cmd_counterexample(const RunConfig& cfg, std::ostream& rec, std::ostream& sum) {
  const auto& t = cfg.task;
  SearchBox box;
  box.lo = t.box_lo;
  box.hi = t.box_hi;
  box.rapidity = t.rapidity;
  box.points = t.scan_points;
  const CounterexampleReport r = find_counterexample(cfg.st, t.K, box, t.epsilon, cfg.pipeline(), t.lambda_levels);
  for (std::size_t j = 0; j < r.attempts.size(); ++j) {
    const double lambda = 0.2 * std::ldexp(1.0, -static_cast<int>(j));
    Record a("counterexample_attempt");
    a("level", j)("lambda", lambda)("delta", lambda * lambda * lambda);
    tbm_fields(a, r.attempts[j]);
    a.write(rec);
  }
  Record("counterexample")("state", to_string(r.state))("K", t.K)("N", cfg.st.synthetic_dim())(
      "epsilon_floor", t.epsilon)("scanned", r.scanned)("min_be_ricci", r.min_be_ricci)("x0", r.x0)("v0", r.v0)(
      "candidate_be_ricci", r.candidate_be_ricci)("lambda", r.lambda)("delta", r.delta)("best_margin", r.best_margin)(
      "lhs", r.result ? r.result->lhs : 0.0)("rhs", r.result ? r.result->rhs : 0.0)(
      "uncertainty", r.result ? r.result->uncertainty : 0.0)("note", r.note)
      .write(rec);
  sum << "counterexample: " << to_string(r.state);
  if (r.result)
    sum << " at lambda " << num(r.lambda) << " (lhs " << num(r.result->lhs) << " < rhs " << num(r.result->rhs)
        << ")";
  sum << "; min Bakry-Emery-Ricci over " << r.scanned << " scanned directions " << num(r.min_be_ricci) << "\n";
  switch (r.state) {
    case CounterexampleReport::State::Certified: return kExitOk;
    case CounterexampleReport::State::None: return kExitNone;
    default: return kExitInconclusive;
  }
}

int cmd_lw_distance(const RunConfig& cfg, std::ostream& rec, std::ostream& sum) {
  const CouplingProblem cp = lw_distance_discrete(cfg.st, cfg.task.mu, cfg.task.nu, cfg.task.q);
  const auto m = static_cast<Eigen::Index>(cp.mu.size());
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      Record("coupling_pair")("i", static_cast<int>(i))("j", static_cast<int>(j))("ell", cp.ell(i, j)).write(rec);
  std::string perm;
  for (std::size_t i = 0; i < cp.coupling.size(); ++i) perm += (i ? "," : "") + std::to_string(cp.coupling[i]);
  Record("coupling")("m", static_cast<int>(m))("q", cp.q)("minus_infinity", cp.minus_infinity)(
      "value", cp.minus_infinity ? -std::numeric_limits<double>::infinity() : cp.value)(
      "objective", cp.minus_infinity ? -std::numeric_limits<double>::infinity() : cp.objective)(
      "assignment", perm.empty() ? std::string("-") : perm)
      .write(rec);
  sum << "l_q over " << m << " atoms: " << (cp.minus_infinity ? std::string("-inf") : num(cp.value)) << "\n";
  return kExitOk;
}

using Handler = std::function<int(const RunConfig&, std::ostream&, std::ostream&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"curvature", cmd_curvature},          {"geodesic", cmd_geodesic},
      {"separation", cmd_separation},        {"distortion-table", cmd_distortion_table},
      {"check-ode", cmd_check_ode},          {"check-tbm", cmd_check_tbm},
      {"counterexample", cmd_counterexample}, {"lw-distance", cmd_lw_distance},
  };
  return h;
}

}  // namespace

std::vector<std::string> command_names() {
  return {"curvature", "geodesic", "separation", "distortion-table",
          "check-ode", "check-tbm", "counterexample", "lw-distance"};
}

void write_error_record(std::ostream& records, const std::string& command, const std::string& code,
                        const std::string& message) {
  Record("error")("command", command)("code", code)("message", message).write(records);
}

int run_command(const RunConfig& cfg, const std::string& command, std::ostream& records, std::ostream& summary,
                ErrorCode* error) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) {
    write_error_record(records, command, "Usage", "unknown command");
    summary << "unknown command '" << command << "'\n";
    return kExitUsage;
  }
  // Records are buffered so a failing command leaves only its error record.
  std::ostringstream buf;
  try {
    const int status = it->second(cfg, buf, summary);
    records << buf.str();
    return status;
  } catch (const Error& e) {
    write_error_record(records, command, std::string(error_code_name(e.code())), e.what());
    summary << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    if (error) *error = e.code();
    return kExitModuleError;
  }
}

}  // namespace ltbm
