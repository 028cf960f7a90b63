// Copyright 2026 The optbench Authors.
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

#pragma once

// Straight-line reference recurrences for the update rules. Written from the
// rule definitions only; shares no code with the library.

#include <cmath>
#include <cstdint>
#include <vector>

namespace optbench::reference {

enum class Rule { heavy_ball, nesterov, adam, lars, lamb };

struct Hyper {
  double mu = 0.9;
  double b1 = 0.9;
  double b2 = 0.999;
  double eps = 1e-6;
  bool correct = true;
  double trust = 1.0;
  bool decoupled = false;
  double lambda = 0.0;
  bool excluded = false;  // group tag is in exclude_tags
};

struct Slots {
  std::vector<double> v, m, s;
  explicit Slots(std::size_t n = 0) : v(n, 0.0), m(n, 0.0), s(n, 0.0) {}
};

inline double norm(const std::vector<double>& x) {
  double acc = 0.0;
  for (double e : x) acc += e * e;
  return std::sqrt(acc);
}

/// One step of `rule` at 1-based step index `t`.
inline void step(Rule rule, const Hyper& h, std::vector<double>& th, const std::vector<double>& grad, Slots& st,
                 double eta, std::int64_t t) {
  const std::size_t n = th.size();
  const double lam_l2 = (!h.decoupled && !h.excluded) ? h.lambda : 0.0;
  const double lam_wd = (h.decoupled && !h.excluded) ? h.lambda : 0.0;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = grad[i] + lam_l2 * th[i];

  if (rule == Rule::heavy_ball || rule == Rule::nesterov) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = h.mu * st.v[i] + g[i];
      const double dir = rule == Rule::heavy_ball ? v : h.mu * v + g[i];
      th[i] = th[i] - eta * dir - eta * lam_wd * th[i];
      st.v[i] = v;
    }
    return;
  }
  if (rule == Rule::lars) {
    double r = 1.0;
    const double wn = norm(th);
    const double gn = norm(g);
    if (!h.excluded && wn > 0.0 && gn > 0.0) r = h.trust * wn / gn;
    for (std::size_t i = 0; i < n; ++i) {
      st.v[i] = h.mu * st.v[i] + r * eta * g[i];
      th[i] = th[i] - st.v[i] - eta * lam_wd * th[i];
    }
    return;
  }
  // Adam family.
  const double c1 = h.correct ? 1.0 - std::pow(h.b1, double(t)) : 1.0;
  const double c2 = h.correct ? 1.0 - std::pow(h.b2, double(t)) : 1.0;
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    st.m[i] = h.b1 * st.m[i] + (1.0 - h.b1) * g[i];
    st.s[i] = h.b2 * st.s[i] + (1.0 - h.b2) * g[i] * g[i];
    const double mh = st.m[i] / c1;
    const double sh = st.s[i] / c2;
    u[i] = mh / (std::sqrt(sh) + h.eps) + lam_wd * th[i];
  }
  double ratio = 1.0;
  if (rule == Rule::lamb && !h.excluded) {
    const double wn = norm(th);
    const double un = norm(u);
    if (wn > 0.0 && un > 0.0) ratio = wn / un;
  }
  for (std::size_t i = 0; i < n; ++i) th[i] = th[i] - eta * ratio * u[i];
}

}  // namespace optbench::reference
