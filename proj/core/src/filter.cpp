// Copyright 2026 The SessionForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sessionforge/error.hpp"
#include "sessionforge/filter.hpp"

namespace sessionforge::dsp {

namespace {

using cd = std::complex<double>;

// Coefficients of prod (1 - r z^-1), highest power of z^-1 last.
std::vector<cd> poly_from_roots(const std::vector<cd>& roots) {
  std::vector<cd> c{1.0};
  for (const cd& r : roots) {
    std::vector<cd> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace

FilterSpec design_butterworth_lowpass(int order, double cutoff, double sample_rate) {
  if (order < 1) throw Error(module_name::kDsp, "InvalidOrder", "order must be >= 1");
  if (!(sample_rate > 0.0) || !(cutoff > 0.0) || !(cutoff < sample_rate / 2.0)) {
    throw Error(module_name::kDsp, "InvalidCutoff",
                "need 0 < cutoff < sample_rate / 2 (cutoff " + std::to_string(cutoff) +
                    " Hz, sample rate " + std::to_string(sample_rate) + " Hz)");
  }
  const double pi = std::numbers::pi;
  const double fs2 = 2.0 * sample_rate;
  const double warped = fs2 * std::tan(pi * cutoff / sample_rate);

  std::vector<cd> z_poles;
  z_poles.reserve(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    const double theta = pi * (2.0 * k + order + 1) / (2.0 * order);
    const cd s = warped * std::polar(1.0, theta);
    z_poles.push_back((fs2 + s) / (fs2 - s));
  }
  const auto a_c = poly_from_roots(z_poles);
  const auto b_c = poly_from_roots(std::vector<cd>(static_cast<std::size_t>(order), cd(-1.0)));

  FilterSpec spec;
  spec.order = order;
  spec.cutoff = cutoff;
  spec.sample_rate = sample_rate;
  spec.a.resize(a_c.size());
  spec.b.resize(b_c.size());
  double a_sum = 0.0;
  double b_sum = 0.0;
  for (std::size_t i = 0; i < a_c.size(); ++i) {
    spec.a[i] = a_c[i].real();
    spec.b[i] = b_c[i].real();
    a_sum += spec.a[i];
    b_sum += spec.b[i];
  }
  // Unit gain at DC.
  const double gain = a_sum / b_sum;
  for (double& v : spec.b) v *= gain;
  return spec;
}

std::complex<double> frequency_response(const FilterSpec& spec, double frequency) {
  const double w = 2.0 * std::numbers::pi * frequency / spec.sample_rate;
  cd num = 0.0;
  cd den = 0.0;
  for (std::size_t k = 0; k < spec.b.size(); ++k) num += spec.b[k] * std::polar(1.0, -w * k);
  for (std::size_t k = 0; k < spec.a.size(); ++k) den += spec.a[k] * std::polar(1.0, -w * k);
  return num / den;
}

std::vector<double> step_initial_state(const FilterSpec& spec) {
  const std::size_t n = spec.a.size() - 1;
  double a_sum = 0.0;
  double b_sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    a_sum += spec.a[i];
    b_sum += spec.b[i];
  }
  const double dc = b_sum / a_sum;
  // z_i = sum_{j > i} (b_j - a_j * dc), from the steady-state recursion.
  std::vector<double> z(n, 0.0);
  double acc = 0.0;
  for (std::size_t j = n; j >= 1; --j) {
    acc += spec.b[j] - spec.a[j] * dc;
    z[j - 1] = acc;
  }
  return z;
}

std::vector<double> lfilter(const FilterSpec& spec, std::span<const double> x,
                            std::span<const double> initial_state) {
  const std::size_t n = spec.a.size() - 1;
  std::vector<double> z(n, 0.0);
  if (!initial_state.empty()) z.assign(initial_state.begin(), initial_state.end());
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double out = spec.b[0] * x[i] + (n > 0 ? z[0] : 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      z[j] = spec.b[j + 1] * x[i] - spec.a[j + 1] * out + z[j + 1];
    }
    if (n > 0) z[n - 1] = spec.b[n] * x[i] - spec.a[n] * out;
    y[i] = out;
  }
  return y;
}

namespace {

// Forward pass then backward pass over an already padded signal, each pass
// started from the steady state of its first input sample.
std::vector<double> forward_backward(const FilterSpec& spec, std::vector<double> ext,
                                     const std::vector<double>& zi) {
  std::vector<double> state(zi.size());
  for (std::size_t i = 0; i < zi.size(); ++i) state[i] = zi[i] * ext.front();
  auto forward = lfilter(spec, ext, state);
  std::reverse(forward.begin(), forward.end());
  for (std::size_t i = 0; i < zi.size(); ++i) state[i] = zi[i] * forward.front();
  auto backward = lfilter(spec, forward, state);
  std::reverse(backward.begin(), backward.end());
  return backward;
}

}  // namespace

std::vector<double> filtfilt(const FilterSpec& spec, std::span<const double> x) {
  const std::size_t len = x.size();
  if (len <= static_cast<std::size_t>(3 * spec.order)) {
    throw Error(module_name::kDsp, "SignalTooShort",
                std::to_string(len) + " samples; need more than " +
                    std::to_string(3 * spec.order));
  }
  const std::size_t pad = std::min<std::size_t>(filtfilt_padding(spec.order), len - 1);

  std::vector<double> ext;
  ext.reserve(len + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[len - 1] - x[len - 1 - i]);

  // Mean of the forward-backward and backward-forward orders.
  const auto zi = step_initial_state(spec);
  const auto fb = forward_backward(spec, ext, zi);
  std::reverse(ext.begin(), ext.end());
  auto bf = forward_backward(spec, std::move(ext), zi);
  std::reverse(bf.begin(), bf.end());

  std::vector<double> y(len);
  for (std::size_t i = 0; i < len; ++i) y[i] = 0.5 * (fb[pad + i] + bf[pad + i]);
  return y;
}

}  // namespace sessionforge::dsp
