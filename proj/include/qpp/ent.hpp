#pragma once

// Byte-stream randomness statistics in the style of the classic ENT tool:
// entropy, chi-square (with exact p-value), arithmetic mean, Monte Carlo pi
// and lag-1 serial correlation.

#include <cmath>
#include <cstdint>
#include <array>
#include <optional>
#include <span>
#include <string>

#include "qpp/bytes.hpp"

namespace qpp::ent {

inline std::array<uint64_t, 256> histogram(std::span<const uint8_t> data) {
  std::array<uint64_t, 256> h{};
  for (uint8_t b : data) ++h[b];
  return h;
}

inline double entropy(std::span<const uint8_t> data) {
  if (data.empty()) throw ParamError("entropy: empty input");
  auto h = histogram(data);
  double total = static_cast<double>(data.size());
  double e = 0.0;
  for (uint64_t c : h) {
    if (c == 0) continue;
    double p = c / total;
    e -= p * std::log2(p);
  }
  return e;
}

inline double chi_square(std::span<const uint8_t> data) {
  if (data.empty()) throw ParamError("chi_square: empty input");
  auto h = histogram(data);
  double expected = data.size() / 256.0;
  double chi2 = 0.0;
  for (uint64_t c : h) {
    double d = c - expected;
    chi2 += d * d / expected;
  }
  return chi2;
}

namespace detail {

// Regularized upper incomplete gamma Q(a, x): series for x < a + 1,
// continued fraction (modified Lentz) otherwise. Absolute error well below
// 1e-6 over the chi-square range used here.
inline double gamma_q(double a, double x) {
  if (x < 0 || a <= 0) throw ParamError("gamma_q: invalid arguments");
  if (x == 0) return 1.0;
  const double eps = 1e-15;
  const double tiny = 1e-300;
  double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (log_prefix < -700) return x > a ? 0.0 : 1.0;
  double prefix = std::exp(log_prefix);
  if (x < a + 1) {
    // P(a,x) series
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 10000; ++i) {
      ap += 1;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * eps) break;
    }
    return 1.0 - prefix * sum;
  }
  // Q(a,x) continued fraction
  double b = x + 1 - a;
  double c = 1 / tiny;
  double d = 1 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) break;
  }
  return prefix * h;
}

}  // namespace detail

inline double chi_square_p_value(double chi2, unsigned dof = 255) {
  if (chi2 < 0) throw ParamError("chi_square_p_value: chi2 < 0");
  if (dof < 1) throw ParamError("chi_square_p_value: dof < 1");
  return detail::gamma_q(dof / 2.0, chi2 / 2.0);
}

inline double mean(std::span<const uint8_t> data) {
  if (data.empty()) throw ParamError("mean: empty input");
  uint64_t sum = 0;
  for (uint8_t b : data) sum += b;
  return static_cast<double>(sum) / data.size();
}

// Non-overlapping 6-byte groups form 24-bit (X, Y); inside the quarter
// circle iff X^2 + Y^2 <= (2^24 - 1)^2.
inline double monte_carlo_pi(std::span<const uint8_t> data) {
  if (data.size() < 6) throw ParamError("monte_carlo_pi: need at least 6 bytes");
  constexpr uint64_t kMax = (1ull << 24) - 1;
  constexpr uint64_t kRadiusSq = kMax * kMax;
  uint64_t inside = 0;
  uint64_t total = 0;
  for (size_t i = 0; i + 6 <= data.size(); i += 6) {
    uint64_t x = static_cast<uint64_t>(data[i]) << 16 |
                 static_cast<uint64_t>(data[i + 1]) << 8 | data[i + 2];
    uint64_t y = static_cast<uint64_t>(data[i + 3]) << 16 |
                 static_cast<uint64_t>(data[i + 4]) << 8 | data[i + 5];
    if (x * x + y * y <= kRadiusSq) ++inside;
    ++total;
  }
  return 4.0 * inside / total;
}

// Lag-1 Pearson correlation with wraparound (last byte pairs with first).
// Throws on zero variance (all bytes equal).
inline double serial_correlation(std::span<const uint8_t> data) {
  if (data.size() < 2) throw ParamError("serial_correlation: need at least 2 bytes");
  double n = static_cast<double>(data.size());
  double sum = 0, sum_sq = 0, sum_prod = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    double a = data[i];
    double b = data[(i + 1) % data.size()];
    sum += a;
    sum_sq += a * a;
    sum_prod += a * b;
  }
  double numerator = n * sum_prod - sum * sum;
  double denominator = n * sum_sq - sum * sum;
  if (denominator == 0) throw ParamError("serial_correlation: zero variance");
  return numerator / denominator;
}

struct EntReport {
  uint64_t byte_count = 0;
  double entropy = 0;
  double chi_square = 0;
  double p_value = 0;
  double mean = 0;
  std::optional<double> monte_carlo_pi;
  std::string monte_carlo_pi_reason;  // set when absent
  std::optional<double> serial_correlation;
  std::string serial_correlation_reason;
};

inline EntReport analyze(std::span<const uint8_t> data) {
  if (data.empty()) throw ParamError("analyze: empty input");
  EntReport r;
  r.byte_count = data.size();
  r.entropy = entropy(data);
  r.chi_square = chi_square(data);
  r.p_value = chi_square_p_value(r.chi_square);
  r.mean = mean(data);
  if (data.size() >= 6) {
    r.monte_carlo_pi = monte_carlo_pi(data);
  } else {
    r.monte_carlo_pi_reason = "insufficient data";
  }
  try {
    r.serial_correlation = serial_correlation(data);
  } catch (const ParamError&) {
    r.serial_correlation_reason =
        data.size() < 2 ? "insufficient data" : "undefined (zero variance)";
  }
  return r;
}

inline EntReport analyze(const Bytes& data) {
  return analyze(std::span<const uint8_t>(data.data(), data.size()));
}

}  // namespace qpp::ent
