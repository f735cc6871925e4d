#include "lcf/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lcf/error.hpp"

namespace lcf {

namespace {

const double kSqrt32 = std::sqrt(1.5);

void screen_inputs(const PlasticState& state, const SymTensor3& strain_new, const PlasticityParams& params) {
  if (!strain_new.all_finite()) throw ContractViolation("strain contains NaN or Inf");
  if (!state.strain.all_finite() || !state.eps_p.all_finite() || !std::isfinite(state.k))
    throw ContractViolation("plastic state contains NaN or Inf");
  if (state.k < 0.0) throw ContractViolation("plastic internal variable must be >= 0");
  if (state.backstresses.size() != params.kinematic.size())
    throw ContractViolation("backstress count does not match the Chaboche set size");
  for (const auto& b : state.backstresses)
    if (!b.all_finite()) throw ContractViolation("backstress contains NaN or Inf");
}

struct Residual {
  double r = 0.0;
  double dr = 0.0;
  SymTensor3 eta;     // relative-stress direction carrier, parallel to the converged flow normal
  SymTensor3 deta;    // d eta / d dgamma
  double eta_norm = 0.0;
};

/// Scalar consistency residual of the backward-Euler update at plastic
/// multiplier increment `dg`.
Residual consistency(double dg, const SymTensor3& s_trial, const PlasticState& old, const PlasticityParams& p) {
  const double G = p.elastic.shear();
  Residual out;
  out.eta = s_trial;
  double lin = 3.0 * G;
  double dlin = 3.0 * G;
  for (std::size_t i = 0; i < p.kinematic.size(); ++i) {
    const auto& c = p.kinematic[i];
    const double f = 1.0 / (1.0 + c.b * dg);
    out.eta -= old.backstresses[i] * f;
    out.deta += old.backstresses[i] * (c.b * f * f);
    lin += c.h * f;
    dlin += c.h * f * f;
  }
  out.eta_norm = norm(out.eta);
  const double k = old.k + dg;
  out.r = kSqrt32 * out.eta_norm - lin * dg - yield_stress(p.iso, k);
  const double proj = out.eta_norm > 0.0 ? contract(out.eta, out.deta) / out.eta_norm : 0.0;
  out.dr = kSqrt32 * proj - dlin - yield_stress_slope(p.iso, k);
  return out;
}

UpdateResult elastic_result(const PlasticState& state, const SymTensor3& strain_new, const PlasticityParams& p) {
  UpdateResult res;
  res.state = state;
  res.state.strain = strain_new;
  res.sigma_eff = elastic_stress(p.elastic, strain_new - state.eps_p);
  res.tangent = p.elastic.stiffness();
  return res;
}

/// Single backward-Euler step; returns false when Newton fails.
bool return_map(const PlasticState& state, const SymTensor3& strain_new, const PlasticityParams& p,
                const ReturnMapOptions& opts, UpdateResult& res, double& last_residual) {
  const double G = p.elastic.shear();
  const double K = p.elastic.bulk();
  const double tol_abs = opts.tol * p.iso.sigma0;

  const SymTensor3 sigma_trial = elastic_stress(p.elastic, strain_new - state.eps_p);
  const double phi_trial = yield_function(sigma_trial, state.total_backstress(), state.k, p.iso);
  if (phi_trial <= tol_abs) {
    res = elastic_result(state, strain_new, p);
    return true;
  }

  const SymTensor3 s_trial = dev(sigma_trial);
  double bound = norm(s_trial);
  for (const auto& b : state.backstresses) bound += norm(b);
  double lo = 0.0;
  double hi = kSqrt32 * bound / (3.0 * G);

  double dg = 0.0;
  Residual rr;
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    rr = consistency(dg, s_trial, state, p);
    last_residual = rr.r;
    if (std::abs(rr.r) <= tol_abs) {
      converged = true;
      break;
    }
    if (rr.r > 0.0)
      lo = dg;
    else
      hi = dg;
    double next = dg - rr.r / rr.dr;
    if (!(rr.dr < 0.0) || !(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    dg = next;
  }
  if (!converged) return false;
  // One extra Newton step puts the residual well inside the tolerance, so
  // re-evaluating the yield function on the stored state stays admissible.
  if (rr.r != 0.0 && rr.dr < 0.0) {
    const double next = dg - rr.r / rr.dr;
    if (next > 0.0) {
      const Residual polished = consistency(next, s_trial, state, p);
      if (std::abs(polished.r) < std::abs(rr.r)) {
        dg = next;
        rr = polished;
      }
    }
  }

  const SymTensor3 nhat = dev(rr.eta / rr.eta_norm);
  const SymTensor3 flow = kSqrt32 * nhat;  // N = 3/2 xi / q

  res.state = state;
  res.state.strain = strain_new;
  res.state.eps_p = state.eps_p + dg * flow;
  res.state.k = state.k + dg;
  for (std::size_t i = 0; i < p.kinematic.size(); ++i) {
    const auto& c = p.kinematic[i];
    res.state.backstresses[i] = (state.backstresses[i] + (2.0 / 3.0) * c.h * dg * flow) / (1.0 + c.b * dg);
  }
  res.sigma_eff = sigma_trial - (2.0 * G * dg) * flow;
  res.dgamma = dg;
  res.iterations = it + 1;

  // Consistent tangent, one engineering-strain column at a time.
  const double sqrt6G = std::sqrt(6.0) * G;
  for (int j = 0; j < 6; ++j) {
    Vec6 unit = Vec6::Zero();
    unit[j] = 1.0;
    const SymTensor3 deps = from_strain_voigt(unit);
    const SymTensor3 ds_trial = 2.0 * G * dev(deps);
    const double ddg = -kSqrt32 * contract(nhat, ds_trial) / rr.dr;
    const SymTensor3 deta = ds_trial + ddg * rr.deta;
    const SymTensor3 dnhat = (deta - contract(nhat, deta) * nhat) / rr.eta_norm;
    const SymTensor3 ds = ds_trial - sqrt6G * (ddg * nhat + dg * dnhat);
    res.tangent.col(j) = to_stress_voigt(ds + (K * trace(deps)) * SymTensor3::identity());
  }
  return true;
}

UpdateResult integrate_recursive(const PlasticState& state, const SymTensor3& strain_new, const PlasticityParams& p,
                                 const ReturnMapOptions& opts, int depth) {
  UpdateResult res;
  double last_residual = 0.0;
  if (return_map(state, strain_new, p, opts, res, last_residual)) return res;
  if (depth >= opts.max_bisections) {
    std::ostringstream msg;
    msg << "return mapping did not converge in " << opts.max_iter << " iterations after " << depth
        << " bisections (last residual " << last_residual << " MPa)";
    throw ConvergenceError(msg.str(), last_residual);
  }
  const SymTensor3 mid = 0.5 * (state.strain + strain_new);
  UpdateResult first = integrate_recursive(state, mid, p, opts, depth + 1);
  UpdateResult second = integrate_recursive(first.state, strain_new, p, opts, depth + 1);
  // The returned tangent belongs to the last sub-increment.
  second.dgamma += first.dgamma;
  second.iterations += first.iterations;
  second.substeps += first.substeps;
  return second;
}

/// Continuum plastic modulus 3G + H' + sum(h_k - b_k N:beta_k) at the current state.
double plastic_modulus(const SymTensor3& flow, const PlasticState& s, const PlasticityParams& p) {
  double m = 3.0 * p.elastic.shear() + yield_stress_slope(p.iso, s.k);
  for (std::size_t i = 0; i < p.kinematic.size(); ++i)
    m += p.kinematic[i].h - p.kinematic[i].b * contract(flow, s.backstresses[i]);
  return m;
}

SymTensor3 flow_normal(const SymTensor3& sigma, const PlasticState& s) {
  const SymTensor3 xi = dev(sigma) - s.total_backstress();
  return dev(xi * (1.5 / std::max(von_mises(xi), 1e-300)));
}

void apply_plastic_increment(PlasticState& s, const SymTensor3& flow, double dg, const PlasticityParams& p) {
  s.eps_p += dg * flow;
  s.k += dg;
  for (std::size_t i = 0; i < p.kinematic.size(); ++i) {
    const auto& c = p.kinematic[i];
    s.backstresses[i] += ((2.0 / 3.0) * c.h * dg) * flow - (dg * c.b) * s.backstresses[i];
  }
}

}  // namespace

void ElasticConstants::validate() const {
  if (!(E > 0.0)) throw ContractViolation("Young's modulus must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw ContractViolation("Poisson's ratio must lie in (-1, 0.5)");
}

void PlasticityParams::validate() const {
  elastic.validate();
  iso.validate();
  lcf::validate(kinematic);
}

PlasticState PlasticState::virgin(const PlasticityParams& params) {
  PlasticState s;
  s.backstresses.assign(params.kinematic.size(), SymTensor3::zero());
  return s;
}

SymTensor3 PlasticState::total_backstress() const {
  SymTensor3 sum;
  for (const auto& b : backstresses) sum += b;
  return sum;
}

SymTensor3 elastic_stress(const ElasticConstants& el, const SymTensor3& elastic_strain) {
  return (el.bulk() * trace(elastic_strain)) * SymTensor3::identity() + (2.0 * el.shear()) * dev(elastic_strain);
}

double yield_function(const SymTensor3& sigma_eff, const SymTensor3& beta_total, double k,
                      const IsotropicHardening& iso) {
  return von_mises(sigma_eff - beta_total) - yield_stress(iso, k);
}

UpdateResult integrate(const PlasticState& state, const SymTensor3& strain_new, const PlasticityParams& params,
                       const ReturnMapOptions& opts) {
  if (!(opts.tol > 0.0)) throw ContractViolation("return-mapping tolerance must be positive");
  screen_inputs(state, strain_new, params);
  return integrate_recursive(state, strain_new, params, opts, 0);
}

UpdateResult substep_integrate(const PlasticState& state, const SymTensor3& strain_new,
                               const PlasticityParams& params, int n_sub) {
  if (n_sub < 1) throw ContractViolation("substep count must be >= 1");
  screen_inputs(state, strain_new, params);

  const double tol_abs = 1e-10 * params.iso.sigma0;
  const SymTensor3 start = state.strain;
  const SymTensor3 delta = strain_new - start;

  UpdateResult res;
  res.state = state;
  res.substeps = n_sub;
  PlasticState& s = res.state;
  bool plastic = false;

  for (int i = 1; i <= n_sub; ++i) {
    const SymTensor3 eps_prev = s.strain;
    const SymTensor3 eps_next = (i == n_sub) ? strain_new : start + (static_cast<double>(i) / n_sub) * delta;
    const SymTensor3 sigma_trial = elastic_stress(params.elastic, eps_next - s.eps_p);
    const SymTensor3 beta = s.total_backstress();
    if (yield_function(sigma_trial, beta, s.k, params.iso) <= tol_abs) {
      s.strain = eps_next;
      continue;
    }
    plastic = true;

    // Elastic fraction of the sub-increment: q(alpha) = sigma_y solved as a quadratic.
    const SymTensor3 sigma_prev = elastic_stress(params.elastic, eps_prev - s.eps_p);
    const SymTensor3 xi0 = dev(sigma_prev) - beta;
    const SymTensor3 dxi = dev(sigma_trial) - dev(sigma_prev);
    const double sy = yield_stress(params.iso, s.k);
    double alpha = 0.0;
    if (yield_function(sigma_prev, beta, s.k, params.iso) < 0.0) {
      const double qa = 1.5 * contract(dxi, dxi);
      const double qb = 3.0 * contract(xi0, dxi);
      const double qc = 1.5 * contract(xi0, xi0) - sy * sy;
      alpha = std::clamp((-qb + std::sqrt(std::max(qb * qb - 4.0 * qa * qc, 0.0))) / (2.0 * qa), 0.0, 1.0);
    }
    const SymTensor3 eps_yield = eps_prev + alpha * (eps_next - eps_prev);
    const SymTensor3 sigma_yield = elastic_stress(params.elastic, eps_yield - s.eps_p);

    // Forward Euler on the flow rule and the Armstrong-Frederick laws.
    const SymTensor3 flow = flow_normal(sigma_yield, s);
    const SymTensor3 dsig_el = elastic_stress(params.elastic, eps_next - eps_yield);
    const double dg = std::max(contract(flow, dsig_el) / plastic_modulus(flow, s, params), 0.0);
    apply_plastic_increment(s, flow, dg, params);
    res.dgamma += dg;
    s.strain = eps_next;

    // Drift correction: extra plastic flow along the current normal keeps
    // sigma = C:(eps - eps_p) while returning to the yield surface.
    for (int corr = 0; corr < 4; ++corr) {
      const SymTensor3 sigma = elastic_stress(params.elastic, s.strain - s.eps_p);
      const double phi = yield_function(sigma, s.total_backstress(), s.k, params.iso);
      if (phi <= tol_abs) break;
      const SymTensor3 n = flow_normal(sigma, s);
      const double ddg = phi / plastic_modulus(n, s, params);
      apply_plastic_increment(s, n, ddg, params);
      res.dgamma += ddg;
    }
  }

  res.sigma_eff = elastic_stress(params.elastic, s.strain - s.eps_p);
  const Mat6 C = params.elastic.stiffness();
  res.tangent = C;
  if (plastic) {
    const SymTensor3 n = flow_normal(res.sigma_eff, s);
    const Vec6 cn = C * to_strain_voigt(n);
    res.tangent -= (cn * cn.transpose()) / plastic_modulus(n, s, params);
  }
  return res;
}

}  // namespace lcf
