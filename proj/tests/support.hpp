#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>

#include "kaonlab/params.hpp"

namespace kaonlab::test {

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

inline bool complex_close(std::complex<double> a, std::complex<double> b, double tol) {
  return std::abs(a - b) <= tol;
}

/// Constants drawn from the region allowed by validate().
inline KaonPhysics random_physics(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  KaonPhysics p;
  p.tau_s = 1e-10 * (0.5 + unit(rng));
  p.tau_l = p.tau_s * (2.0 + 1000.0 * unit(rng));
  p.delta_m = (0.05 + 2.0 * unit(rng)) / p.tau_s;
  p.epsilon = std::polar(0.05 * unit(rng), 2.0 * 3.141592653589793 * unit(rng));
  p.gamma_k1_to_2pi = p.gamma_s() * (0.1 + 0.9 * unit(rng));
  p.gamma_k2_to_3pi = p.gamma_l() * (0.1 + 0.9 * unit(rng));
  p.gamma_semileptonic = p.gamma_l() * (0.1 + 0.4 * unit(rng));
  return p;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("kaonlab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace kaonlab::test
