#!/usr/bin/env python3
# The central estimate in action: tables of v_r(b_k) against the guaranteed
# floor ceil((k+1)/2) for several maps, primes and residue-field shapes.

from padicdyn import (INFINITY, RationalSelfMap, run_pipeline,
                      mahler_coefficients, analyticity_margins,
                      analyticity_exponent)

SUITE = [
    ("x^2+1 at p=3", 1, ["x1^2 + 1"], 3),
    ("x^2+1 at p=5 (center in F_25)", 1, ["x1^2 + 1"], 5),
    ("x^2   at p=5", 1, ["x1^2"], 5),
    ("x^3   at p=7", 1, ["x1^3"], 7),
    ("(x^2+y, y^2+x) at p=5", 2, ["x1^2 + x2", "x2^2 + x1"], 5),
]

K = 20

for label, n, nums, p in SUITE:
    pipe = run_pipeline(RationalSelfMap.from_texts(n, nums), prime=p)
    phi = pipe.nbhd.iterated_local_map(pipe.nbhd.affine_order)
    omega = tuple(pipe.ctx.one() for _ in range(n))
    interp = mahler_coefficients(phi, omega, K)
    l_an = analyticity_exponent(pipe.ctx)
    rep = analyticity_margins(interp, l_an)
    print(f"\n{label}: k={pipe.bound.period_k},"
          f" l_ord={pipe.bound.affine_order}, l_an={l_an},"
          f" N={pipe.bound.bound}")
    print("  k : v_r(b_k)  floor  margin at l_an")
    margins = {k: m for k, m, _ in rep.margins}
    for k in range(1, K + 1):
        v = min(interp.valuation(i + 1, k) for i in range(n))
        vtxt = "inf" if v is INFINITY else f"{v}"
        m = margins[k]
        mtxt = "inf" if m is INFINITY else f"{m}"
        print(f"  {k:2d} : {vtxt:>8}  {(k + 2) // 2:5d}  {mtxt}")
    print(f"  certified analytic on p^{l_an} Z_p: {rep.certified}"
          f" (slope {rep.slope})")
