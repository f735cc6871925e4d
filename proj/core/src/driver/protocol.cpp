#include "lcf/driver/protocol.hpp"

#include <cmath>

#include "lcf/error.hpp"

namespace lcf::driver {

void CycleProtocol::validate() const {
  if (!(amplitude > 0.0)) throw ContractViolation("protocol amplitude must be positive");
  if (!(ratio < 1.0)) throw ContractViolation("protocol ratio R must be < 1");
  if (cycles < 1) throw ContractViolation("protocol needs at least one cycle");
  if (points_per_quarter < 4) throw ContractViolation("points per quarter-cycle must be >= 4");
  if (!(strain_rate >= 0.0)) throw ContractViolation("strain rate must be >= 0");
}

double CycleProtocol::max_strain() const { return 2.0 * amplitude / (1.0 - ratio); }
double CycleProtocol::min_strain() const { return ratio * max_strain(); }

double frequency_from_rate(double rate, double amplitude) {
  if (!(amplitude > 0.0)) throw ContractViolation("frequency needs a positive strain amplitude");
  return rate / (4.0 * amplitude);
}

std::vector<ProtocolPoint> strain_history(const CycleProtocol& p) {
  p.validate();
  const int n = p.points_per_quarter;
  const double hi = p.max_strain();
  const double lo = p.min_strain();
  std::vector<ProtocolPoint> out;
  out.reserve(static_cast<std::size_t>(4 * n * p.cycles));
  double t = 0.0;
  double prev = 0.0;
  const auto push = [&](int cycle, Branch b, double eps) {
    if (p.strain_rate > 0.0) t += std::abs(eps - prev) / p.strain_rate;
    prev = eps;
    out.push_back({cycle, b, eps, t});
  };
  for (int c = 1; c <= p.cycles; ++c) {
    for (int i = 1; i <= n; ++i) push(c, Branch::loading, hi * i / n);
    for (int i = 1; i <= 2 * n; ++i) push(c, Branch::unloading, i == 2 * n ? lo : hi + (lo - hi) * i / (2 * n));
    for (int i = 1; i <= n; ++i) push(c, Branch::reloading, i == n ? 0.0 : lo - lo * i / n);
  }
  return out;
}

double cycle_mean_strain(const std::vector<ProtocolPoint>& history, int cycle) {
  double area = 0.0;
  double duration = 0.0;
  double eps0 = 0.0;
  double t0 = 0.0;
  bool started = false;
  for (const auto& pt : history) {
    if (pt.cycle < cycle) {
      eps0 = pt.strain;
      t0 = pt.time;
      continue;
    }
    if (pt.cycle > cycle) break;
    started = true;
    const double dt = pt.time - t0;
    area += 0.5 * (pt.strain + eps0) * dt;
    duration += dt;
    eps0 = pt.strain;
    t0 = pt.time;
  }
  if (!started || duration <= 0.0) throw ContractViolation("cycle not present in history");
  return area / duration;
}

}  // namespace lcf::driver
