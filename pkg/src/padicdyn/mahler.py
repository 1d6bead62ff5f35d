"""Mahler-series interpolation of orbits and its analyticity bookkeeping.

For a self-map Phi of O^n that is the identity mod r with the coefficient
divisibility inherited from the normalized local series, the orbit
j -> Phi^j(omega) extends to a continuous map from Z_p, given coordinatewise
by g_i(z) = omega_i + sum_k b_ik * binomial(z, k). The coefficients are the
finite differences of the orbit at 0; their valuations obey
v_r(b_ik) >= ceil((k+1)/2), which is verified on every computed coefficient
and treated as a build-breaking diagnostic if it ever fails.

Analyticity: the series is analytic on p^l Z_p once the slope
1/(2e) - 1/((p-1) p^l) is positive; the least such l is the analyticity
exponent. Margins are reported in exact rational arithmetic, both from the
slope form and from the constant C_k = p^(l + nested-floor sum) / k! that
controls binomial(p^l z, k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (InternalInconsistencyError, PrecisionError,
                     TheoryViolationError)
from .padics import (INFINITY, binomial_eval, factorial_valuation,
                     int_binomial)


def orbit(phi, omega, count, rational_shadow=None):
    """omega, Phi(omega), ..., Phi^count(omega) at working precision.

    ``phi`` is any callable on coordinate vectors; an IteratedMap is used
    through its ``orbit`` method so the whole run costs one digit of
    precision rather than one per step. When ``rational_shadow`` is given as
    (exact_step_function, exact_start), a parallel exact-rational orbit is
    computed and cross-checked against the p-adic one.
    """
    omega = tuple(omega)
    if hasattr(phi, "orbit"):
        pts = [tuple(v) for v in phi.orbit(omega, count)]
    else:
        pts = [omega]
        cur = omega
        for _ in range(count):
            cur = tuple(phi(cur))
            pts.append(cur)
    for j, pt in enumerate(pts):
        for i, c in enumerate(pt):
            if c.prec <= 0:
                raise PrecisionError(
                    f"precision collapsed at orbit index {j},"
                    f" coordinate {i + 1}")
    if rational_shadow is not None:
        step, start = rational_shadow
        exact = [tuple(Fraction(x) for x in start)]
        for _ in range(count):
            exact.append(tuple(step(exact[-1])))
        ctx = pts[0][0].ctx
        for j, (pvec, evec) in enumerate(zip(pts, exact)):
            for i, (pc, ec) in enumerate(zip(pvec, evec)):
                if pc != ctx.from_rational(ec, pc.prec):
                    raise InternalInconsistencyError(
                        f"exact and p-adic orbits disagree at index {j},"
                        f" coordinate {i + 1}")
    return pts


@dataclass(frozen=True)
class MahlerInterpolation:
    """Center, truncation order, per-coordinate coefficients b_ik and their
    valuation profile."""

    ctx: object
    omega: tuple
    k_max: int
    coeffs: tuple          # coeffs[i][k-1] = b_ik, 1 <= k <= k_max
    valuations: tuple      # v_r(b_ik), INFINITY for zero-to-precision
    orbit_points: tuple

    @property
    def n(self):
        return len(self.omega)

    @property
    def analyticity(self):
        """The exponent l_an of the smallest certified-analytic disc
        p^l Z_p for this context."""
        return analyticity_exponent(self.ctx)

    def valuation(self, i, k):
        """v_r(b_ik), both indexes 1-based."""
        return self.valuations[i - 1][k - 1]

    def coefficient_bound(self, k):
        """The guaranteed lower bound ceil((k+1)/2) on v_r(b_ik)."""
        return (k + 2) // 2

    def tail_valuation(self):
        """Guaranteed v_r of the discarded tail when evaluating on Z_p."""
        return (self.k_max + 3) // 2

    def is_constant_to_precision(self):
        return all(v is INFINITY for row in self.valuations for v in row)

    def min_valuation_row(self):
        """Per-k minimum of v_r(b_ik) over the coordinates i."""
        return [min(self.valuations[i][k] for i in range(self.n))
                for k in range(self.k_max)]


def mahler_coefficients(phi, omega, k_max, orbit_points=None):
    """Interpolation coefficients b_ik as finite differences of the orbit.

    b_ik = sum_{j=0..k} (-1)^(k-j) C(k,j) (Phi^j(omega))_i with exact integer
    binomials. Raises TheoryViolationError if any coefficient violates
    v_r >= ceil((k+1)/2) -- this must never fire for maps built through the
    neighborhood pipeline -- and PrecisionError when the working precision
    cannot resolve valuations that large.
    """
    pts = orbit_points if orbit_points is not None else orbit(phi, omega,
                                                              k_max)
    if len(pts) < k_max + 1:
        raise ValueError("need k_max + 1 orbit points")
    omega = tuple(pts[0])
    ctx = omega[0].ctx
    n = len(omega)

    min_prec = min(c.prec for pt in pts for c in pt)
    needed = (k_max + 2) // 2
    if ctx.e * min_prec <= needed:
        raise PrecisionError(
            f"precision {min_prec} cannot resolve valuations up to {needed};"
            " reduce k_max or raise precision")

    # Pascal rows once, as plain ints
    binom = [[1]]
    for k in range(1, k_max + 1):
        prev = binom[-1]
        binom.append([1] + [prev[j - 1] + prev[j]
                            for j in range(1, k)] + [1])

    coeffs = []
    valuations = []
    for i in range(n):
        row = []
        vals = []
        for k in range(1, k_max + 1):
            acc = None
            for j in range(k + 1):
                term = pts[j][i] * ((-1) ** (k - j) * binom[k][j])
                acc = term if acc is None else acc + term
            v = acc.valuation()
            bound = (k + 2) // 2
            if v is not INFINITY and v < bound:
                raise TheoryViolationError(
                    f"theory violation: v_r(b_{i + 1},{k}) = {v} <"
                    f" {bound}")
            row.append(acc)
            vals.append(v)
        coeffs.append(tuple(row))
        valuations.append(tuple(vals))
    return MahlerInterpolation(ctx=ctx, omega=omega, k_max=k_max,
                               coeffs=tuple(coeffs),
                               valuations=tuple(valuations),
                               orbit_points=tuple(tuple(p) for p in pts))


def analyticity_exponent(ctx):
    """Least l >= 0 with (p-1) p^l > 2e, making the Mahler tail converge as a
    power series on p^l Z_p."""
    p, e = ctx.p, ctx.e
    l = 0
    while (p - 1) * p ** l <= 2 * e:
        l += 1
    return l


@dataclass(frozen=True)
class MahlerValue:
    values: tuple
    tail_valuation: int


def evaluate(interp, z):
    """Partial Mahler sum at z in Z_p, with the guaranteed tail valuation.

    An int z is evaluated with exact integer binomials (no precision loss);
    a PadicElement z must lie in the base subring and pays v_p(k!) digits per
    term. For 0 <= z <= k_max the partial sum reproduces the orbit point
    exactly, since binomial(z, k) vanishes for k > z.
    """
    ctx = interp.ctx
    if isinstance(z, int):
        weights = [int_binomial(z, k) for k in range(1, interp.k_max + 1)]
        values = []
        for i in range(interp.n):
            acc = interp.omega[i]
            for k, w in enumerate(weights, start=1):
                if w:
                    acc = acc + interp.coeffs[i][k - 1] * w
            values.append(acc)
        return MahlerValue(tuple(values), interp.tail_valuation())
    if not z.in_base_subring():
        raise ValueError("Mahler evaluation requires z in Z_p")
    weights = [binomial_eval(z, k) for k in range(1, interp.k_max + 1)]
    values = []
    for i in range(interp.n):
        acc = interp.omega[i]
        for k, w in enumerate(weights, start=1):
            acc = acc + interp.coeffs[i][k - 1] * w
        values.append(acc)
    return MahlerValue(tuple(values), interp.tail_valuation())


@dataclass(frozen=True)
class AnalyticityReport:
    """Exact margin table for convergence of the rescaled series on p^l Z_p.

    ``margins`` rows are (k, slope_margin, ck_margin); a margin is the r-adic
    valuation of the k-th rescaled term's bound, INFINITY when every b_ik is
    zero to precision. ``certified`` requires a positive slope, nonnegative
    margins and growth across the computed range.
    """

    l: int
    slope: Fraction
    slope_positive: bool
    margins: tuple
    margins_nonnegative: bool
    eventually_increasing: bool
    certified: bool


def _nested_floor_sum(k, p, l):
    total = 0
    t = k - 1
    for _ in range(l):
        t = t // p
        total += t
    return total


def analyticity_margins(interp, l):
    """Margin report for analyticity on p^l Z_p.

    slope margin:  v_r(b_k) + e*(k(p^l - 1)/((p-1) p^l) - v_p(k!))
    C_k margin:    v_r(b_k) + e*(l + nested-floor sum - v_p(k!))
    computed with exact rational arithmetic from the valuation profile.
    """
    ctx = interp.ctx
    p, e = ctx.p, ctx.e
    slope = Fraction(1, 2 * e) - Fraction(1, (p - 1) * p ** l)
    exponent = Fraction(p ** l - 1, (p - 1) * p ** l)
    rows = []
    finite = []
    for k in range(1, interp.k_max + 1):
        v = min(interp.valuations[i][k - 1] for i in range(interp.n))
        if v is INFINITY:
            rows.append((k, INFINITY, INFINITY))
            continue
        vfact = factorial_valuation(k, p)
        main = Fraction(v) + e * (k * exponent - vfact)
        ck = Fraction(v) + e * (l + _nested_floor_sum(k, p, l) - vfact)
        rows.append((k, main, ck))
        finite.append(main)
    nonneg = all(m >= 0 for m in finite)
    if len(finite) < 4:
        increasing = True
    else:
        third = max(1, len(finite) // 3)
        increasing = min(finite[-third:]) > min(finite[:third])
    certified = slope > 0 and nonneg and increasing
    return AnalyticityReport(l=l, slope=slope, slope_positive=slope > 0,
                             margins=tuple(rows),
                             margins_nonnegative=nonneg,
                             eventually_increasing=increasing,
                             certified=certified)
