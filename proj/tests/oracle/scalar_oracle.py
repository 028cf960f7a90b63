# Copyright 2026 The optbench Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Scalar reference values frozen into the C++ tests.

Uses exact rationals or 50-digit mpmath; shares no code with the library.
Run: python3 tests/oracle/scalar_oracle.py
"""
from fractions import Fraction as F

import mpmath

mpmath.mp.dps = 50


def heavy_ball(mu, eta, theta, v, g):
    v = mu * v + g
    return theta - eta * v, v


def nesterov(mu, eta, theta, v, g):
    v = mu * v + g
    return theta - eta * (mu * v + g), v


def adam_base_step1(b1, b2, g, corrected):
    m = (1 - b1) * g
    s = (1 - b2) * g * g
    if corrected:
        m = m / (1 - b1)
        s = s / (1 - b2)
    return m / mpmath.sqrt(s)


def lars(theta, g, trust, mu, eta):
    wn = mpmath.sqrt(sum(x * x for x in theta))
    gn = mpmath.sqrt(sum(x * x for x in g))
    r = trust * wn / gn
    v = [r * eta * x for x in g]
    return [t - dv for t, dv in zip(theta, v)], r


def lamb_step1(theta, g, b1, b2, eta):
    u = [adam_base_step1(b1, b2, x, True) if x != 0 else mpmath.mpf(0) for x in g]
    wn = mpmath.sqrt(sum(x * x for x in theta))
    un = mpmath.sqrt(sum(x * x for x in u))
    ratio = wn / un
    return [t - eta * ratio * x for t, x in zip(theta, u)], u, ratio


def legacy_bert(eta, tw, total, t):
    if t < tw:
        return eta * F(t, tw)
    return eta * (1 - F(t, total))


def poly(eta_init, eta_peak, eta_final, pw, pd, tw, total, t):
    if t <= tw:
        return eta_init + (eta_peak - eta_init) * F(t, tw) ** pw
    return eta_final + (eta_peak - eta_final) * (1 - F(t - tw, total - tw)) ** pd


def main():
    print("heavy_ball mu=.9 eta=.1 g=1:", heavy_ball(F(9, 10), F(1, 10), 0, 0, 1))
    print("nesterov   mu=.9 eta=.1 g=1:", nesterov(F(9, 10), F(1, 10), 0, 0, 1))
    unc = adam_base_step1(mpmath.mpf("0.9"), mpmath.mpf("0.999"), 1, False)
    cor = adam_base_step1(mpmath.mpf("0.9"), mpmath.mpf("0.999"), 1, True)
    print("adam uncorrected base:", mpmath.nstr(unc, 20), "ratio:", mpmath.nstr(unc / cor, 20))
    print("lars (3,4) g=(0,2):", lars([3, 4], [0, 2], 1, 0, mpmath.mpf("0.1")))
    th, u, ratio = lamb_step1([1, 0], [0, 2], mpmath.mpf("0.9"), mpmath.mpf("0.999"), mpmath.mpf("0.01"))
    print("lamb u:", u, "ratio:", ratio, "theta':", th)

    eta, tw, total = F(59415, 10**8), 3125, 14063
    left = eta * F(tw - 1, tw) + (eta * F(tw, tw) - eta * F(tw - 1, tw))
    at = legacy_bert(eta, tw, total, tw)
    print("legacy value at t_warmup:", float(at), "left limit:", float(left), "gap:", float(left - at))
    print("legacy gap eta*tw/T:", repr(float(eta * F(tw, total))))

    b = (F(0), F(705, 100), F(6, 10**6), 2, 2, 706, 2512)
    print("reference poly t=353:", float(poly(*b, 353)), "t=706:", float(poly(*b, 706)))


if __name__ == "__main__":
    main()
