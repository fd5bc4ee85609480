#include "rpolar/report_json.hpp"

#include <charconv>
#include <cmath>

#include "rpolar/error.hpp"

namespace rpolar {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

namespace {

// NaN is not representable in JSON.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json to_json(const Mat3& m) {
  json out = json::array();
  for (double x : m.a) out.push_back(x);
  return out;
}

json to_json(const Quaternion& q) {
  return json::array({number_or_null(q.w), number_or_null(q.x), number_or_null(q.y), number_or_null(q.z)});
}

json to_json(const AxisAngle& aa) { return {{"angle", aa.angle}, {"axis", to_json(aa.axis)}}; }

json to_json(const MaterialParams& p) {
  return {{"mu", p.mu()},
          {"muc", p.muc()},
          {"regime", std::string(to_string(p.regime()))},
          {"lambda_scale", optional_number(p.lambda_scale())},
          {"rho", optional_number(p.rho())},
          {"zeta", optional_number(p.zeta())}};
}

json to_json(const RelaxedRotations& r, const MaterialParams& p) {
  const Decomposition& dec = r.decomposition;
  const double s12 = dec.sigma[0] + dec.sigma[1];
  const auto rho = p.rho();
  auto rotation = [&](const Mat3& R) {
    return json{{"matrix", to_json(R)},
                {"axis_angle", to_json(axis_angle(R))},
                {"relative_to_polar", to_json(axis_angle(transpose_times(dec.Rp, R)))},
                {"el_residual", el_residual_matrix(R, dec.F, p)}};
  };
  return {{"F", to_json(dec.F)},
          {"sigma", to_json(dec.sigma)},
          {"params", to_json(p)},
          {"domain", std::string(to_string(r.domain_tag))},
          {"beta_hat", r.beta_hat},
          {"u_mmp", 0.5 * s12},
          {"s_mmp", 0.5 * s12 - 1.0},
          {"s12_minus_rho", rho ? json(s12 - *rho) : json(nullptr)},
          {"reduced_energy", r.reduced_energy},
          {"axis", to_json(r.axis)},
          {"coincide", r.coincide},
          {"degenerate_axis", r.degenerate_axis},
          {"polar", {{"matrix", to_json(dec.Rp)}, {"el_residual", el_residual_matrix(dec.Rp, dec.F, p)}}},
          {"r_plus", rotation(r.r_plus)},
          {"r_minus", rotation(r.r_minus)}};
}

json to_json(const CaseRecord& rec) {
  return {{"case_index", rec.case_index},
          {"seed", rec.seed},
          {"F", to_json(rec.F)},
          {"domain", std::string(to_string(rec.domain_tag))},
          {"W_red", rec.W_red},
          {"min_sampled_energy", rec.min_sampled_energy},
          {"energy_gap", rec.energy_gap},
          {"argmin", to_json(rec.argmin)},
          {"nearest_frobenius", rec.nearest_frobenius},
          {"nearest_geodesic_angle", rec.nearest_geodesic_angle},
          {"pass", rec.pass}};
}

json to_json(const ValidationReport& report) {
  const ValidationConfig& c = report.config;
  const ValidationAggregates& a = report.aggregates;
  json records = json::array();
  for (const CaseRecord& rec : report.records) records.push_back(to_json(rec));
  // Worker count is deliberately absent: reports must not depend on it.
  return {{"params", to_json(MaterialParams(c.mu, c.muc))},
          {"config",
           {{"cases_classical", c.n_classical},
            {"cases_nonclassical", c.n_nonclassical},
            {"samples", c.n_samples},
            {"seed", c.seed},
            {"tol", c.tol},
            {"enforce_frobenius", c.enforce_frobenius},
            {"shared_samples", c.shared_samples},
            {"angle_threshold", c.angle_threshold}}},
          {"aggregates",
           {{"n_cases", a.n_cases},
            {"n_samples", a.n_samples},
            {"max_gap", number_or_null(a.max_gap)},
            {"min_gap", number_or_null(a.min_gap)},
            {"mean_gap", number_or_null(a.mean_gap)},
            {"max_nearest_angle", a.max_nearest_angle},
            {"failures", a.failures},
            {"n_nonclassical_cases", a.n_nonclassical_cases},
            {"nonclassical_within_angle", a.nonclassical_within_angle},
            {"f_draws", a.f_draws},
            {"f_draws_nonclassical", a.f_draws_nonclassical},
            {"nonclassical_domain_empty", a.nonclassical_domain_empty}}},
          {"records", std::move(records)}};
}

Mat3 mat3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 9) throw Error(ErrorCode::InvalidArgument, "matrix must be nine numbers");
  Mat3 m;
  for (std::size_t i = 0; i < 9; ++i) m.a[i] = j[i].get<double>();
  return m;
}

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::InvalidArgument, "vector must be three numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json ResultEnvelope::to_json() const {
  json out{{"tool", kToolName}, {"version", kToolVersion}, {"command", command}};
  if (seed) out["seed"] = *seed;
  out["payload"] = payload;
  if (timing_ms) out["timing_ms"] = *timing_ms;
  return out;
}

}  // namespace rpolar
