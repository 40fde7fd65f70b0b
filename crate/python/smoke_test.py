#!/usr/bin/env python3
"""Smoke test for the rrange extension module.

Build the module first (see python/build_module.sh or the README), then run
    python3 python/smoke_test.py
"""

import math
import sys

import rrange


def close(a, b, tol=1e-6):
    return abs(a - b) <= tol


def main():
    failures = []

    def check(name, ok):
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures.append(name)

    # kron of 2x2 identities is the 4x4 identity
    i2 = [[1.0, 0.0], [0.0, 1.0]]
    z2 = [[0.0, 0.0], [0.0, 0.0]]
    out = rrange.kron(i2, z2, i2, z2)
    ok = all(
        close(out["re"][i][j], 1.0 if i == j else 0.0, 1e-12)
        and close(out["im"][i][j], 0.0, 1e-12)
        for i in range(4)
        for j in range(4)
    )
    check("kron identity", ok)

    # numerical radius of the Jordan block is 1/2
    r = rrange.radius([[0.0, 1.0], [0.0, 0.0]], z2)
    check("radius of Jordan block", close(r, 0.5, 1e-9))

    # eigenvalues come back ascending
    vals = rrange.eigvalsh([[3.0, 0.0], [0.0, 1.0]], z2)
    check("eigvalsh sorted", vals == [1.0, 3.0])

    # product range of X_{1,1} equals the closed form [-2, 2]
    xre = [
        [2.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, -1.0, 0.0],
        [1.0, 0.0, 0.0, -2.0],
    ]
    xim = [[0.0] * 4 for _ in range(4)]
    res = rrange.pnr(xre, xim, [2, 2], seed=0, restarts=12)
    lo_exact, hi_exact = rrange.xts_exact(1.0, 1.0)
    check(
        "pnr of X_{1,1} matches closed form",
        close(res["lo"], lo_exact) and close(res["hi"], hi_exact),
    )

    # k = 2 range is the full spectral interval
    kr = rrange.k_range(xre, xim, [2, 2], 2, seed=0, restarts=8)
    ev = rrange.eigvalsh(xre, xim)
    check("k-range at k = min(K,M)", close(kr["lo"], ev[0], 1e-9) and close(kr["hi"], ev[-1], 1e-9))

    # sampled Minkowski power hits the analytic wrap-around distance
    phi = 3.0 * math.pi / 5.0
    got = rrange.minkowski_power_min_modulus(phi, 7)
    check("minkowski power min modulus", close(got, math.cos(phi / 2.0) ** 7, 1e-9))

    # Werner-Holevo channel at p = 0 is completely depolarizing: 1 bit
    check("Werner-Holevo MOE at p=0", close(rrange.moe_werner_holevo(0.0, restarts=8), 1.0, 1e-8))

    # transposition map: SWAP/2 Choi is not 2-positive but product-positive
    swap_re = [
        [0.5, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.5, 0.0],
        [0.0, 0.5, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.5],
    ]
    swap_im = [[0.0] * 4 for _ in range(4)]
    check(
        "transposition map hierarchy",
        rrange.positivity(swap_re, swap_im, [2, 2], 1) == "no-violation-found"
        and rrange.positivity(swap_re, swap_im, [2, 2], 2) == "violated",
    )

    # GHZ_3 carries one bit of geometric entanglement
    a = 1.0 / math.sqrt(2.0)
    ghz = [(a, 0.0)] + [(0.0, 0.0)] * 6 + [(a, 0.0)]
    e = rrange.geometric_entanglement(ghz, [2, 2, 2], restarts=10)
    check("GHZ geometric entanglement", close(e, 1.0, 1e-7))

    # uniform-weight fidelity LP returns exactly 1/N^2
    bound = rrange.fidelity_lp([[0.25, 0.25], [0.25, 0.25]], [0.5, 0.5])
    check("fidelity LP uniform weights", close(bound, 0.25, 1e-10))

    # the diagonal gate family: (pi, pi/2) is distinguishable, (0, 0) is not
    d1, t, s = rrange.discriminate_v(math.pi, math.pi / 2.0)
    d0, _, _ = rrange.discriminate_v(0.0, 0.0)
    check("discrimination verdicts", d1 and not d0 and t is not None and s is not None)

    # HS-measure sample is a valid density matrix
    rho = rrange.hs_density(4, seed=7)
    tr = sum(rho["re"][i][i] for i in range(4))
    check("HS sample trace", close(tr, 1.0, 1e-10))

    if failures:
        print(f"\n{len(failures)} smoke checks failed: {failures}")
        return 1
    print("\nall smoke checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
