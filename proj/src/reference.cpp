#include "eigcorr/reference.hpp"

#include "eigcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eigcorr {

ExactEigenpair analytic_reference(int j, int k, double diffusion, double weight) {
  if (j < 1 || k < 1) {
    throw InvalidArgument("analytic_reference: mode indices must be >= 1");
  }
  if (!(diffusion > 0.0) || !(weight > 0.0)) {
    throw InvalidArgument("analytic_reference: coefficients must be positive");
  }
  constexpr double pi = std::numbers::pi;
  const double amp = 2.0 / std::sqrt(weight);
  const double fj = j * pi;
  const double fk = k * pi;
  ExactEigenpair ref;
  ref.lambda = diffusion / weight * (j * j + k * k) * pi * pi;
  ref.u = [=](Point p) { return amp * std::sin(fj * p.x) * std::sin(fk * p.y); };
  ref.grad = [=](Point p) {
    return std::array<double, 2>{amp * fj * std::cos(fj * p.x) * std::sin(fk * p.y),
                                 amp * fk * std::sin(fj * p.x) * std::cos(fk * p.y)};
  };
  ref.label = "analytic (" + std::to_string(j) + "," + std::to_string(k) + ")";
  return ref;
}

namespace {

std::vector<std::pair<int, int>> modes_up_to(int count) {
  // All modes with j^2 + k^2 <= r^2 for r large enough to hold `count` of them.
  int r = 2;
  std::vector<std::pair<int, int>> modes;
  while (true) {
    modes.clear();
    for (int j = 1; j <= r; ++j) {
      for (int k = 1; k <= r; ++k) {
        if (j * j + k * k <= r * r) {
          modes.emplace_back(j, k);
        }
      }
    }
    if (static_cast<int>(modes.size()) >= count + 8) {
      break;
    }
    r *= 2;
  }
  std::sort(modes.begin(), modes.end(), [](auto a, auto b) {
    const int sa = a.first * a.first + a.second * a.second;
    const int sb = b.first * b.first + b.second * b.second;
    return sa != sb ? sa < sb : a.first < b.first;
  });
  return modes;
}

} // namespace

std::pair<int, int> unit_square_mode(int index) {
  if (index < 1) {
    throw InvalidArgument("unit_square_mode: index must be >= 1");
  }
  return modes_up_to(index)[static_cast<std::size_t>(index - 1)];
}

int unit_square_multiplicity(int index) {
  const auto modes = modes_up_to(index);
  const auto [j, k] = modes[static_cast<std::size_t>(index - 1)];
  const int s = j * j + k * k;
  return static_cast<int>(std::count_if(modes.begin(), modes.end(), [s](auto m) {
    return m.first * m.first + m.second * m.second == s;
  }));
}

ExactEigenpair unit_square_reference(int index, double diffusion, double weight) {
  const auto [j, k] = unit_square_mode(index);
  ExactEigenpair ref = analytic_reference(j, k, diffusion, weight);
  if (unit_square_multiplicity(index) > 1) {
    ref.u = nullptr;
    ref.grad = nullptr;
  }
  return ref;
}

std::vector<RateEstimate> estimate_rates(std::span<const double> errors,
                                         std::span<const double> sizes) {
  if (errors.size() != sizes.size() || errors.size() < 2) {
    throw InvalidArgument("estimate_rates: need two or more errors with matching sizes");
  }
  for (double s : sizes) {
    if (!(s > 0.0)) {
      throw InvalidArgument("estimate_rates: sizes must be positive");
    }
  }
  std::vector<RateEstimate> rates;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    RateEstimate r;
    if (!(errors[k - 1] > 0.0) || !(errors[k] > 0.0)) {
      r.saturated = true;
    } else {
      r.slope = std::log(errors[k - 1] / errors[k]) / std::log(sizes[k - 1] / sizes[k]);
    }
    rates.push_back(r);
  }
  return rates;
}

} // namespace eigcorr
