#pragma once

// Synthetic regression tables with known structure.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "specsel/spectra/feature_table.hpp"

namespace synth {

inline specsel::FeatureTable make_table(std::size_t n, std::size_t d) {
  specsel::FeatureTable t;
  t.values = specsel::Matrix(n, d);
  t.target.assign(n, 0.0);
  t.target_name = "biomass";
  for (std::size_t j = 0; j < d; ++j) t.feature_names.push_back("f" + std::to_string(j));
  return t;
}

inline specsel::FeatureTable random_table(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto t = make_table(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) t.values(i, j) = g(rng);
    t.target[i] = g(rng);
  }
  return t;
}

/// Single informative column `planted` with y = sin(3 a) + 0.01 noise; the
/// remaining columns are independent uniform noise.
inline specsel::FeatureTable single_planted(std::size_t n, std::size_t d, std::size_t planted,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g;
  auto t = make_table(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) t.values(i, j) = u(rng);
    t.target[i] = std::sin(3.0 * t.values(i, planted)) + 0.01 * g(rng);
  }
  return t;
}

/// Three informative columns (0, 1, 2) with a nonlinear target plus N(0, 0.1)
/// noise; columns 3.. are pure noise.
inline specsel::FeatureTable three_planted(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g;
  auto t = make_table(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) t.values(i, j) = u(rng);
    const double a = t.values(i, 0), b = t.values(i, 1), c = t.values(i, 2);
    t.target[i] = std::sin(2.5 * a) + 1.5 * b * b + std::cos(2.0 * c) + 0.1 * g(rng);
  }
  return t;
}

/// 10 informative columns, then 26 redundant or noise columns: 16 noisy
/// copies of informative columns (i mod 10) and 10 pure-noise columns.
inline specsel::FeatureTable redundant(std::size_t n, std::uint64_t seed, double copy_noise = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g;
  auto t = make_table(n, 36);
  for (std::size_t i = 0; i < n; ++i) {
    double y = 0;
    for (std::size_t j = 0; j < 10; ++j) {
      t.values(i, j) = u(rng);
      const double v = t.values(i, j);
      y += (j % 2 == 0) ? std::sin(2.0 * v) : v * v;
    }
    for (std::size_t j = 10; j < 26; ++j) t.values(i, j) = t.values(i, (j - 10) % 10) + copy_noise * g(rng);
    for (std::size_t j = 26; j < 36; ++j) t.values(i, j) = u(rng);
    t.target[i] = y + 0.1 * g(rng);
  }
  return t;
}

/// Nonlinear target on 5 columns where a linear model captures little.
inline specsel::FeatureTable nonlinear(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g;
  auto t = make_table(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) t.values(i, j) = u(rng);
    const double a = t.values(i, 0), b = t.values(i, 1), c = t.values(i, 2);
    t.target[i] = std::sin(3.0 * a) + b * b + a * c + 0.1 * g(rng);
  }
  return t;
}

/// Feature CSV with a leading sample_id column; numbers round-trip exactly.
inline std::string to_csv(const specsel::FeatureTable& t) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = "sample_id";
  for (const auto& f : t.feature_names) out += "," + f;
  out += "," + t.target_name + "\n";
  for (std::size_t i = 0; i < t.n(); ++i) {
    out += "s" + std::to_string(i);
    for (std::size_t j = 0; j < t.d(); ++j) out += "," + num(t.values(i, j));
    out += "," + num(t.target[i]) + "\n";
  }
  return out;
}

/// Reflectance CSV on the standard 400-996.2 nm grid. Reflectance is a smooth
/// random curve per sample; the target grows with the red-edge contrast.
inline std::string reflectance_csv(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t bands = 272;
  std::string out = "sample_id";
  char buf[32];
  for (std::size_t b = 0; b < bands; ++b) {
    std::snprintf(buf, sizeof buf, ",b%.1f", 400.0 + 2.2 * static_cast<double>(b));
    out += buf;
  }
  out += ",biomass\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double vigor = u(rng);
    const double base = 0.03 + 0.05 * u(rng);
    out += "p" + std::to_string(i);
    for (std::size_t b = 0; b < bands; ++b) {
      const double w = 400.0 + 2.2 * static_cast<double>(b);
      const double edge = 1.0 / (1.0 + std::exp(-(w - 715.0) / 12.0));
      const double green = 0.04 * std::exp(-std::pow((w - 550.0) / 30.0, 2.0));
      const double r = base + green + vigor * 0.45 * edge + 0.005 * u(rng);
      std::snprintf(buf, sizeof buf, ",%.6f", r);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.6f\n", 2.0 + 5.0 * vigor + 0.2 * u(rng));
    out += buf;
  }
  return out;
}

}  // namespace synth
