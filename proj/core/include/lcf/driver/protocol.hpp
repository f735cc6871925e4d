#pragma once

#include <vector>

namespace lcf::driver {

/// Triangular strain-controlled cycling between eps_max and eps_min = R eps_max,
/// with eps_max - eps_min = 2 * amplitude. Each cycle runs 0 -> max -> min -> 0.
struct CycleProtocol {
  double amplitude = 0.015;
  double ratio = -1.0;
  int cycles = 1;
  int points_per_quarter = 20;
  double strain_rate = 0.004;  // 1/s

  void validate() const;
  double max_strain() const;
  double min_strain() const;
};

/// Test frequency from strain rate and amplitude, rate = 4 f amplitude.
double frequency_from_rate(double rate, double amplitude);

enum class Branch { loading, unloading, reloading };

struct ProtocolPoint {
  int cycle = 0;  // 1-based
  Branch branch = Branch::loading;
  double strain = 0.0;
  double time = 0.0;  // s
};

std::vector<ProtocolPoint> strain_history(const CycleProtocol& protocol);

/// Time-averaged strain of one cycle (trapezoidal).
double cycle_mean_strain(const std::vector<ProtocolPoint>& history, int cycle);

}  // namespace lcf::driver
