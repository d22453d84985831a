#!/usr/bin/env python3
# Copyright 2026 The fockbell Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reference vectors for the C++ suite, computed with mpmath and numpy.

Usage: python3 generate_vectors.py > ../data/reference_vectors.json
"""

import itertools
import json
import math

import mpmath as mp
import numpy as np

mp.mp.dps = 40
SQ2 = mp.sqrt(2)
HBAR = mp.mpf("1.054571817e-34")
KB = mp.mpf("1.380649e-23")


def bell_max(p0, r0):
    return 2 * SQ2 * (1 - p0) * (1 - r0) / (1 - p0 * r0)


def thermal_pmf(mean, k):
    mean = mp.mpf(mean)
    return mean**k / (1 + mean) ** (k + 1)


def poisson_pmf(mean, k):
    mean = mp.mpf(mean)
    return mean**k * mp.e ** (-mean) / mp.factorial(k)


def f(x):
    return float(x)


# Dense four-mode model (A1, A2, B1, B2), independent of the C++ code.
def index(occ, c):
    i = 0
    for o in occ:
        i = i * (c + 1) + o
    return i


def singlet_vector(n, m, c):
    v = np.zeros((c + 1) ** 4)
    v[index((n, 0, 0, m), c)] += 1 / math.sqrt(2)
    v[index((0, n, m, 0), c)] -= 1 / math.sqrt(2)
    return v / np.linalg.norm(v)


def rho_out(p, r, c):
    p0, r0 = p[0], r[0]
    norm = 1 / (1 - p0 * r0)
    d = (c + 1) ** 4
    rho = np.zeros((d, d))
    for n in range(c + 1):
        for m in range(c + 1):
            if n == 0 and m == 0:
                continue
            w = norm * p[n] * r[m]
            if w == 0:
                continue
            v = singlet_vector(n, m, c)
            rho += w * np.outer(v, v)
    return rho


def partial_transpose_b(rho, c):
    k = c + 1
    t = rho.reshape([k] * 8)
    # axes: row A1 A2 B1 B2, col A1 A2 B1 B2; swap row/col of B1, B2
    t = t.transpose(0, 1, 6, 7, 4, 5, 2, 3)
    return t.reshape(rho.shape)


def phi(m, n, c):
    v = np.zeros((c + 1) ** 4)
    v[index((0, m, 0, n), c)] = 1 / math.sqrt(2)
    v[index((m, 0, n, 0), c)] = 1 / math.sqrt(2)
    return v


def entropy(rho):
    ev = np.linalg.eigvalsh(rho)
    ev = ev[ev > 1e-15]
    return float(-(ev * np.log(ev)).sum())


def reduce_a(rho, c):
    k = c + 1
    t = rho.reshape([k * k, k * k, k * k, k * k])
    return np.einsum("ibjb->ij", t)


def support(rho):
    keep = np.where(np.abs(rho).sum(axis=1) > 0)[0]
    return rho[np.ix_(keep, keep)]


def conditional_entropy(mean, c, kind="thermal"):
    pmf = thermal_pmf if kind == "thermal" else poisson_pmf
    p = [f(pmf(mean, k)) for k in range(c + 1)]
    rho = rho_out(p, p, c)
    rho /= np.trace(rho)
    s_total = entropy(support(rho))
    s_a = entropy(support(reduce_a(rho, c)))
    return s_a - s_total


def main():
    out = {}

    out["thermal_mean1_weights"] = [f(thermal_pmf(1, k)) for k in range(3)]
    out["poisson_mean1_weights"] = [f(poisson_pmf(1, k)) for k in range(3)]

    beta_3000 = HBAR * mp.mpf("2.5e15") / (KB * 3000)
    out["mean_n_3000K"] = f(1 / mp.expm1(beta_3000))
    out["p0_3000K"] = f(1 - mp.exp(-beta_3000))

    beta_star = mp.log((SQ2 + 1) / 2)
    out["beta_star"] = f(beta_star)
    out["mean_star_thermal"] = f(2 * (SQ2 + 1))
    out["p0_star"] = f((SQ2 - 1) / (SQ2 + 1))
    out["mean_star_pseudo"] = f(mp.findroot(
        lambda x: bell_max(mp.e ** (-x), mp.e ** (-x)) - 2, 1.7))
    out["mean_star_pseudo_log"] = f(mp.log((SQ2 + 1) / (SQ2 - 1)))
    out["border_asymptote"] = f(1 / (SQ2 - 1))
    out["t_min_visible"] = f(HBAR * mp.mpf("2.5e15") / (KB * beta_star))
    out["t_min_infrared"] = f(HBAR * mp.mpf("5e13") / (KB * beta_star))

    out["bell_max_half"] = f(bell_max(mp.mpf("0.5"), mp.mpf("0.5")))
    out["bell_max_pseudo_mean1"] = f(bell_max(mp.e**-1, mp.e**-1))
    out["bell_max_three_modes"] = f(bell_max(mp.mpf("0.125"), mp.mpf("0.125")))
    out["bell_max_beta10"] = f(2 * SQ2 / (2 * mp.e**10 - 1))
    out["mixed_list_p0"] = f(mp.mpf(2) / 3 * mp.e**-1)

    out["outcome_pi8"] = f(mp.cos(mp.pi / 8) ** 2 / 2)

    # Witness at cutoff 3, thermal <n> = 1 on both sides.
    c = 3
    p = [f(thermal_pmf(1, k)) for k in range(c + 1)]
    pt = partial_transpose_b(rho_out(p, p, c), c)
    wit = {}
    for m, n in itertools.product(range(1, c + 1), repeat=2):
        v = phi(m, n, c)
        wit[f"{m},{n}"] = float(v @ pt @ v)
    out["witness_thermal1_cutoff3"] = wit
    out["witness_thermal1_cutoff3_min_eig"] = float(np.linalg.eigvalsh(pt).min())

    out["cond_entropy_thermal02_cutoff6"] = conditional_entropy(0.2, 6)
    out["cond_entropy_thermal1_cutoff8"] = conditional_entropy(1.0, 8)

    print(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
