#include "lcf/driver/matpoint.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "lcf/error.hpp"

namespace lcf::driver {

namespace {

using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec5 = Eigen::Matrix<double, 5, 1>;

constexpr int kMaxLateralIterations = 25;
constexpr int kMaxSplits = 10;

}  // namespace

UniaxialStressPoint::UniaxialStressPoint(MaterialParams params, ReturnMapOptions opts)
    : params_(std::move(params)), opts_(opts) {
  params_.validate();
  plastic_ = PlasticState::virgin(params_.plasticity);
  tangent_ = params_.plasticity.elastic.stiffness();
}

double UniaxialStressPoint::axial_tangent() const {
  const Mat5 jll = tangent_.bottomRightCorner<5, 5>();
  return tangent_(0, 0) - (tangent_.block<1, 5>(0, 1) * jll.partialPivLu().solve(tangent_.block<5, 1>(1, 0)))(0, 0);
}

bool UniaxialStressPoint::try_advance(double axial_strain, PointSample& out) {
  Vec6 eps = to_strain_voigt(strain_);
  const double d_axial = axial_strain - eps[0];
  {
    const Mat5 jll = tangent_.bottomRightCorner<5, 5>();
    eps.tail<5>() -= jll.partialPivLu().solve(tangent_.block<5, 1>(1, 0) * d_axial);
  }
  eps[0] = axial_strain;

  const double scale = std::max(params_.plasticity.iso.sigma0, 1.0);
  const double tol = 1e-10 * scale;
  for (int it = 0; it < kMaxLateralIterations; ++it) {
    PointResponse r;
    try {
      r = evaluate_point(plastic_, damage_, from_strain_voigt(eps), params_, std::nullopt, opts_);
    } catch (const ConvergenceError&) {
      return false;
    }
    const Vec6 sig = to_stress_voigt(r.sigma);
    const double res = sig.tail<5>().cwiseAbs().maxCoeff();
    if (res <= tol) {
      plastic_ = r.plastic.state;
      damage_ = r.damage;
      strain_ = from_strain_voigt(eps);
      sigma_ = r.sigma;
      tangent_ = r.tangent;
      out.axial_strain = axial_strain;
      out.stress = sig[0];
      out.stress_eff = r.plastic.sigma_eff.c[0];
      out.k = plastic_.k;
      out.d_i = damage_.d_i;
      out.d_u = damage_.d_u;
      out.dgamma = r.plastic.dgamma;
      out.phi = yield_function(r.plastic.sigma_eff, plastic_.total_backstress(), plastic_.k, params_.plasticity.iso);
      out.trace_eps_p = trace(plastic_.eps_p);
      out.lateral_residual = res;
      return true;
    }
    const Mat5 jll = r.tangent.bottomRightCorner<5, 5>();
    const Vec5 dx = jll.partialPivLu().solve(sig.tail<5>());
    if (!dx.allFinite()) return false;
    eps.tail<5>() -= dx;
  }
  return false;
}

PointSample UniaxialStressPoint::advance(double axial_strain) {
  if (!std::isfinite(axial_strain)) throw ContractViolation("axial strain must be finite");
  PointSample s;
  if (try_advance(axial_strain, s)) return s;
  // Split the increment; each half commits on success.
  const double start = strain_.c[0];
  std::vector<std::pair<double, int>> todo{{axial_strain, 0}};
  double reached = start;
  while (!todo.empty()) {
    const auto [target, depth] = todo.back();
    if (try_advance(target, s)) {
      reached = target;
      todo.pop_back();
      continue;
    }
    if (depth >= kMaxSplits)
      throw ConvergenceError("uniaxial point did not converge at axial strain " + std::to_string(target),
                             s.lateral_residual);
    todo.push_back({0.5 * (reached + target), depth + 1});
  }
  return s;
}

MatpointHistory run_matpoint(const MaterialParams& params, const CycleProtocol& protocol,
                             const MatpointOptions& opts) {
  CycleProtocol p = protocol;
  if (opts.max_cycles > 0) p.cycles = std::min(p.cycles, opts.max_cycles);
  const auto points = strain_history(p);
  const double hi = p.max_strain();
  const double lo = p.min_strain();
  const double probe = hi - 0.1 * (hi - lo);

  UniaxialStressPoint point(params, opts.return_map);
  MatpointHistory h;
  h.rows.reserve(points.size());
  double slope = std::numeric_limits<double>::quiet_NaN();
  CycleSummary current;
  double peak_strain = 0.0;
  bool probed = false;
  int step = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    if (pt.cycle != current.cycle) {
      current = CycleSummary{};
      current.cycle = pt.cycle;
      probed = false;
    }
    PointSample s;
    try {
      s = point.advance(pt.strain);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("cycle " + std::to_string(pt.cycle) + ", step " + std::to_string(step + 1) + ": " + e.what(),
                             e.last_residual());
    }
    const bool last_of_branch = i + 1 == points.size() || points[i + 1].branch != pt.branch;
    if (pt.branch == Branch::loading && last_of_branch) {
      current.peak_stress = s.stress;
      peak_strain = s.axial_strain;
    }
    if (pt.branch == Branch::unloading && !probed && pt.strain <= probe) {
      slope = (current.peak_stress - s.stress) / (peak_strain - s.axial_strain);
      current.unloading_slope = slope;
      probed = true;
    }
    if (pt.branch == Branch::unloading && last_of_branch) current.min_stress = s.stress;
    h.rows.push_back({++step, pt.cycle, pt.time, s, slope});
    if (i + 1 == points.size() || points[i + 1].cycle != pt.cycle) {
      current.k = s.k;
      current.d_i = s.d_i;
      current.d_u = s.d_u;
      h.cycles.push_back(current);
    }
  }
  return h;
}

Table MatpointHistory::rows_table() const {
  Table t;
  t.columns = {"step", "cycle", "time", "strain", "stress", "stress_eff", "k", "d_i", "d_u", "unloading_slope"};
  for (const auto& r : rows)
    t.add_row({double(r.step), double(r.cycle), r.time, r.sample.axial_strain, r.sample.stress, r.sample.stress_eff,
               r.sample.k, r.sample.d_i, r.sample.d_u, r.unloading_slope});
  return t;
}

Table MatpointHistory::cycles_table() const {
  Table t;
  t.columns = {"cycle", "peak_stress", "min_stress", "unloading_slope", "k", "d_i", "d_u"};
  for (const auto& c : cycles)
    t.add_row({double(c.cycle), c.peak_stress, c.min_stress, c.unloading_slope, c.k, c.d_i, c.d_u});
  return t;
}

}  // namespace lcf::driver
