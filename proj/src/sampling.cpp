#include "rpolar/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "rpolar/error.hpp"

namespace rpolar {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

std::optional<Quaternion> propose_in_ball(Rng& rng) {
  const Quaternion q{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                     rng.uniform(-1.0, 1.0)};
  const double n2 = q.norm_squared();
  if (n2 > 1.0 || n2 == 0.0) return std::nullopt;
  return q;
}

UnitQuaternion sample_unit_quaternion(Rng& rng) {
  for (;;) {
    if (auto q = propose_in_ball(rng)) return UnitQuaternion(*q);
  }
}

Mat3 sample_rotation(Rng& rng) { return quat_to_rotation(sample_unit_quaternion(rng).value()); }

double f_sampling_half_width(const MaterialParams& p) {
  const auto rho = p.rho();
  return rho ? 0.5 * *rho : 2.0;
}

Mat3 sample_F(Rng& rng, const MaterialParams& p, DomainTag want) {
  if (want == DomainTag::Boundary) throw Error(ErrorCode::InvalidArgument, "cannot sample the boundary");
  if (want == DomainTag::NonClassical && p.classical())
    throw Error(ErrorCode::ClassicalRegime, "non-classical domain is empty for muc >= mu");
  const double h = f_sampling_half_width(p);
  for (long attempt = 0; attempt < kMaxFRejections; ++attempt) {
    Mat3 F;
    for (double& c : F.a) c = rng.uniform(-h, h);
    if (!(F.det() > kDetEpsilon)) continue;
    const Decomposition dec = svd_ordered(F);
    if (dec.degenerate[0] || dec.degenerate[1]) continue;
    if (classify_sigma(dec.sigma, p) == want) return F;
  }
  throw Error(ErrorCode::ExhaustedAttempts, "no admissible F after 1e6 draws");
}

namespace {

// W(R; F) for R known to be a rotation; skips the orthogonality check of
// energy() in the sampling loop.
inline double fast_energy(const Mat3& R, const Mat3& F, double mu, double muc) {
  const Mat3 Ub = transpose_times(R, F);
  const double e00 = Ub(0, 0) - 1.0, e11 = Ub(1, 1) - 1.0, e22 = Ub(2, 2) - 1.0;
  const double s01 = 0.5 * (Ub(0, 1) + Ub(1, 0)), s02 = 0.5 * (Ub(0, 2) + Ub(2, 0)),
               s12 = 0.5 * (Ub(1, 2) + Ub(2, 1));
  const double k01 = 0.5 * (Ub(0, 1) - Ub(1, 0)), k02 = 0.5 * (Ub(0, 2) - Ub(2, 0)),
               k12 = 0.5 * (Ub(1, 2) - Ub(2, 1));
  const double sym = e00 * e00 + e11 * e11 + e22 * e22 + 2.0 * (s01 * s01 + s02 * s02 + s12 * s12);
  const double skew = 2.0 * (k01 * k01 + k02 * k02 + k12 * k12);
  return mu * sym + muc * skew;
}

template <typename NextQuaternion>
CaseRecord validate_with(const Mat3& F, const MaterialParams& p, long n_samples, double tol, bool enforce_frobenius,
                         NextQuaternion&& next) {
  const RelaxedRotations relaxed = relaxed_polar(F, p);

  double best = std::numeric_limits<double>::infinity();
  Quaternion best_q;
  for (long i = 0; i < n_samples; ++i) {
    const Quaternion q = next(i);
    const double e = fast_energy(quat_to_rotation(q), F, p.mu(), p.muc());
    if (e < best) {
      best = e;
      best_q = q;
    }
  }

  CaseRecord rec;
  rec.F = F;
  rec.domain_tag = relaxed.domain_tag;
  rec.W_red = relaxed.reduced_energy;
  rec.min_sampled_energy = best;
  rec.energy_gap = best - relaxed.reduced_energy;
  rec.argmin = quat_to_rotation(best_q);
  rec.nearest_frobenius =
      std::min(frobenius_distance(rec.argmin, relaxed.r_plus), frobenius_distance(rec.argmin, relaxed.r_minus));
  rec.nearest_geodesic_angle =
      std::min(geodesic_angle(rec.argmin, relaxed.r_plus), geodesic_angle(rec.argmin, relaxed.r_minus));
  rec.pass = rec.energy_gap >= -kLowerBoundSlack && (!enforce_frobenius || rec.nearest_frobenius < tol);
  return rec;
}

}  // namespace

CaseRecord validate_case(const Mat3& F, const MaterialParams& p, long n_samples, double tol, Rng& rng,
                         bool enforce_frobenius) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
  CaseRecord rec = validate_with(F, p, n_samples, tol, enforce_frobenius,
                                 [&](long) { return sample_unit_quaternion(rng).value(); });
  rec.seed = rng.seed();
  return rec;
}

CaseRecord validate_case(const Mat3& F, const MaterialParams& p, std::span<const Quaternion> samples, double tol,
                         bool enforce_frobenius) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "sample set is empty");
  return validate_with(F, p, static_cast<long>(samples.size()), tol, enforce_frobenius,
                       [&](long i) { return samples[static_cast<std::size_t>(i)]; });
}

ValidationConfig paper_scale(ValidationConfig base) {
  base.n_samples = kPaperScaleSamples;
  base.n_classical = kPaperScaleCases;
  base.n_nonclassical = kPaperScaleCases;
  base.enforce_frobenius = true;
  base.tol = 1e-4;
  return base;
}

ValidationReport run_validation(const ValidationConfig& config) {
  if (config.n_classical < 1 || config.n_nonclassical < 1)
    throw Error(ErrorCode::InvalidArgument, "case counts must be at least 1");
  if (config.n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
  const MaterialParams p(config.mu, config.muc);

  ValidationReport report;
  report.config = config;
  ValidationAggregates& agg = report.aggregates;
  agg.nonclassical_domain_empty = p.classical();

  // Case set: the first admissible draws of each domain from one stream.
  std::vector<Mat3> cases;
  {
    Rng rng(derive_seed(config.seed, kFStream));
    const double h = f_sampling_half_width(p);
    const std::size_t want_c = static_cast<std::size_t>(config.n_classical);
    const std::size_t want_nc = p.classical() ? 0 : static_cast<std::size_t>(config.n_nonclassical);
    std::vector<Mat3> classical, nonclassical;
    long draws_since_progress = 0;
    while (classical.size() < want_c || nonclassical.size() < want_nc) {
      if (++draws_since_progress > kMaxFRejections)
        throw Error(ErrorCode::ExhaustedAttempts, "case set could not be filled");
      Mat3 F;
      for (double& c : F.a) c = rng.uniform(-h, h);
      if (!(F.det() > kDetEpsilon)) continue;
      const Decomposition dec = svd_ordered(F);
      if (dec.degenerate[0] || dec.degenerate[1]) continue;
      ++agg.f_draws;
      const DomainTag tag = classify_sigma(dec.sigma, p);
      if (tag == DomainTag::NonClassical) ++agg.f_draws_nonclassical;
      if (tag == DomainTag::Classical && classical.size() < want_c) {
        classical.push_back(F);
        draws_since_progress = 0;
      } else if (tag == DomainTag::NonClassical && nonclassical.size() < want_nc) {
        nonclassical.push_back(F);
        draws_since_progress = 0;
      }
    }
    cases = std::move(classical);
    cases.insert(cases.end(), nonclassical.begin(), nonclassical.end());
  }

  std::vector<Quaternion> shared;
  if (config.shared_samples) {
    Rng rng(derive_seed(config.seed, kSharedStream));
    shared.reserve(static_cast<std::size_t>(config.n_samples));
    for (long i = 0; i < config.n_samples; ++i) shared.push_back(sample_unit_quaternion(rng).value());
  }

  report.records.resize(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cases.size(); i = next.fetch_add(1)) {
      CaseRecord rec;
      const std::uint64_t seed = derive_seed(config.seed, i);
      if (config.shared_samples) {
        rec = validate_case(cases[i], p, std::span<const Quaternion>(shared), config.tol, config.enforce_frobenius);
        rec.seed = derive_seed(config.seed, kSharedStream);
      } else {
        Rng rng(seed);
        rec = validate_case(cases[i], p, config.n_samples, config.tol, rng, config.enforce_frobenius);
      }
      rec.case_index = i;
      report.records[i] = rec;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(cases.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  agg.n_cases = report.records.size();
  agg.n_samples = config.n_samples;
  agg.min_gap = std::numeric_limits<double>::infinity();
  agg.max_gap = -std::numeric_limits<double>::infinity();
  double gap_sum = 0.0;
  std::size_t within = 0;
  for (const CaseRecord& rec : report.records) {
    agg.max_gap = std::max(agg.max_gap, rec.energy_gap);
    agg.min_gap = std::min(agg.min_gap, rec.energy_gap);
    gap_sum += rec.energy_gap;
    agg.max_nearest_angle = std::max(agg.max_nearest_angle, rec.nearest_geodesic_angle);
    if (!rec.pass) ++agg.failures;
    if (rec.domain_tag == DomainTag::NonClassical) {
      ++agg.n_nonclassical_cases;
      if (rec.nearest_geodesic_angle < config.angle_threshold) ++within;
    }
  }
  agg.mean_gap = gap_sum / static_cast<double>(agg.n_cases);
  agg.nonclassical_within_angle =
      agg.n_nonclassical_cases == 0 ? 1.0
                                    : static_cast<double>(within) / static_cast<double>(agg.n_nonclassical_cases);
  return report;
}

}  // namespace rpolar
