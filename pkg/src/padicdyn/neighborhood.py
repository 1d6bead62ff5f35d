"""Good primes, Hensel lifts, and the invariant p-adic neighborhood.

Given a purely periodic point of the reduced map with a clear orbit, the
center is lifted to O^n, the k-th iterate of the map is expanded locally as
series H with constant term divisible by the uniformizer r, and the
rescaling F(t) = H(r t)/r turns the residue-ball at the center into O^n with
the iterate acting by integral power series. The reduction of F mod r is an
invertible affine map; its order is the second factor of the period bound.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .dynamics import CLEAR, locus_check, reduce_map
from .errors import (DivisibilityError, IndeterminacyError, NoGoodPrimeError,
                     OrbitNotClearError, OrderCapError, RamificationLeakError,
                     ResidueMismatchError, UnsupportedExtensionError)
from .finitefields import is_prime, mat_det, mat_eq, mat_identity, mat_mul, \
    mat_vec
from .padics import PadicContext, PadicElement
from .series import expand_at, series_compose

FALLBACK_NOTE = ("analyticity fallback required: p <= 2(e+1), interpolation"
                 " will only be analytic on a smaller disc")


@dataclass(frozen=True)
class GoodPrimeReport:
    """Outcome of the prime scan: the chosen prime, the requested
    ramification e, the residue degree d (filled once a periodic point is
    found), whether the smaller-disc fallback applies, and the reasons each
    smaller prime was passed over."""

    p: int
    e: int = 1
    d: int = 1
    fallback: bool = False
    rejections: dict = None
    scan_range: tuple = None

    def with_residue_degree(self, d):
        return replace(self, d=d)


def _prime_hard_reason(f, p):
    """None if p passes the reduction checks, else a short reason."""
    from .errors import PadicDynError
    for c in f.coefficients():
        if c.denominator % p == 0:
            return f"coefficient {c} is not {p}-integral"
    try:
        ctx = PadicContext(p, precision=1)
        reduce_map(f, ctx)
    except PadicDynError as exc:  # bad reduction / indeterminate / inseparable
        return str(exc)
    return None


def prime_is_preferred(p, e):
    return p > 2 * (e + 1)


def validate_prime(f, p, e=1):
    """(ok, reason, fallback) for an explicitly requested prime."""
    if p == 2:
        return False, "p must be odd", False
    reason = _prime_hard_reason(f, p)
    if reason is not None:
        return False, reason, False
    return True, None, not prime_is_preferred(p, e)


def choose_good_prime(f, scan_range=(3, 200), e=1):
    """Smallest odd prime in range with p-integral coefficients, nonzero
    reduced denominators and separable reduction; primes failing only the
    p > 2(e+1) preference are used as a fallback when nothing better exists.
    """
    f.check_dominant()
    lo, hi = scan_range
    rejections = {}
    fallback_candidate = None
    p = max(3, lo)
    if p % 2 == 0:
        p += 1
    chosen = None
    while p <= hi:
        if is_prime(p):
            reason = _prime_hard_reason(f, p)
            if reason is not None:
                rejections[p] = reason
            elif not prime_is_preferred(p, e):
                rejections[p] = FALLBACK_NOTE
                if fallback_candidate is None:
                    fallback_candidate = p
            else:
                chosen = p
                break
        p += 2
    if chosen is not None:
        return GoodPrimeReport(p=chosen, e=e, fallback=False,
                               rejections=rejections, scan_range=scan_range)
    if fallback_candidate is not None:
        rejections.pop(fallback_candidate, None)
        return GoodPrimeReport(p=fallback_candidate, e=e, fallback=True,
                               rejections=rejections, scan_range=scan_range)
    raise NoGoodPrimeError(
        f"no usable prime in {scan_range}; rejections: {rejections}")


def context_for_record(p, record, e=1, precision=64, eis_poly=None):
    """Build the lifting context whose residue field is the record's field.

    The search base field must be F_p itself (map coefficients are rational);
    towers over a larger base would need an embedding choice and are
    rejected.
    """
    if record.m == 1:
        if record.field.base is not None:
            raise UnsupportedExtensionError(
                "search base field is already an extension; tower lifts are"
                " not supported")
        unram = [0, 1]
    else:
        if record.field.base is None or record.field.base.base is not None:
            raise UnsupportedExtensionError(
                "periodic point lives in a tower over a non-prime base;"
                " unsupported")
        base = record.field.base
        unram = [base.index_of(c) for c in record.field.modulus] + [1]
    if eis_poly is None and e > 1:
        eis_poly = [-p] + [0] * (e - 1) + [1]
    return PadicContext(p, unram_poly=unram, eis_poly=eis_poly,
                        precision=precision)


def hensel_lift(record, ctx, convention="teichmuller"):
    """Lift the finite-field periodic point into O^n.

    The context's residue field must equal the record's field. On affine
    space every coordinate-wise lift reduces correctly; the default is the
    multiplicative (Teichmuller) lift, with the naive digit lift behind the
    ``convention`` flag.
    """
    if ctx.residue_field != record.field:
        raise ResidueMismatchError(
            "context residue field does not contain the point's field in a"
            " matching presentation")
    lifts = []
    for c in record.point:
        res = ctx.residue_field.coerce(c)
        if convention == "teichmuller":
            lifts.append(ctx.teichmuller_lift(res))
        elif convention == "naive":
            lifts.append(ctx.naive_lift(res))
        else:
            raise ValueError(f"unknown lift convention {convention!r}")
    return tuple(lifts)


def map_eval_padic(f, point, ctx=None):
    """Evaluate a RationalSelfMap at a vector of PadicElements exactly (to
    precision). Denominators must be units."""
    from .series import poly_eval
    if ctx is None:
        ctx = point[0].ctx
    out = []
    for num, den in zip(f.numerators, f.denominators):
        dval = poly_eval(den, point, ctx)
        if dval.valuation() != 0:
            raise IndeterminacyError(
                "denominator is not a unit along the orbit")
        out.append(poly_eval(num, point, ctx) * dval.inverse())
    return tuple(out)


class PadicNeighborhood:
    """The residue ball at a lifted periodic center, with local data.

    t-coordinates identify the ball with O^n via z = y + r t. ``H`` expands
    the k-th map iterate at the center (constant = f^k(y) - y, divisible by
    r); ``F`` is the rescaled series H(r t)/r with integral coefficients whose
    index-K coefficient is divisible by r^(|K|-1).
    """

    def __init__(self, ctx, f, period_k, center, orbit_points, H, F,
                 affine_order, cap, fbar, record=None, lift_convention=None):
        self.ctx = ctx
        self.map = f
        self.period_k = period_k
        self.center = tuple(center)
        self.orbit_points = tuple(orbit_points)
        self.H = tuple(H)
        self.F = tuple(F)
        self.affine_order = affine_order
        self.cap = cap
        self.fbar = fbar
        self.record = record
        self.lift_convention = lift_convention
        self.n = f.n
        self.center_residue = tuple(ctx.residue(y) for y in center)

    # -- coordinates ---------------------------------------------------------

    def from_local(self, tvec):
        r = self.ctx.uniformizer()
        return tuple(y + r * t for y, t in zip(self.center, tvec))

    def to_local(self, zvec):
        out = []
        for y, z in zip(self.center, zvec):
            diff = z - y
            if diff.valuation() < 1:
                raise ValueError("point is not in the neighborhood")
            out.append(diff.divide_uniformizer())
        return tuple(out)

    def membership(self, point):
        """True iff every coordinate is congruent to the center's mod r.

        Accepts PadicElements or exact rationals; a non-p-integral rational
        coordinate simply makes the point a non-member.
        """
        if len(point) != self.n:
            raise ValueError("point dimension mismatch")
        for w, y, res in zip(point, self.center, self.center_residue):
            if isinstance(w, PadicElement):
                if (w - y).valuation() < 1:
                    return False
            else:
                w = Fraction(w)
                if w.denominator % self.ctx.p == 0:
                    return False
                r0 = (w.numerator
                      * pow(w.denominator, -1, self.ctx.p)) % self.ctx.p
                if self.ctx.residue_field.from_int(r0) != res:
                    return False
        return True

    def apply_fk(self, zvec, times=1):
        """Exact p-adic application of f^(k*times) to an ambient point."""
        for _ in range(self.period_k * times):
            zvec = map_eval_padic(self.map, zvec, self.ctx)
        return zvec

    def iterated_local_map(self, multiplier=1):
        return IteratedMap(self, multiplier)

    def random_member(self, rng):
        u = [self.ctx.random_element(rng) for _ in range(self.n)]
        return self.from_local(u)

    def affine_parts(self):
        """(L, c) of the reduction of F mod r: L the linear coefficients,
        c the constant terms, entries in the residue field."""
        ctx = self.ctx
        fld = ctx.residue_field
        n = self.n
        L = []
        c = []
        for i in range(n):
            coeffs = self.F[i].coeffs
            row = []
            for j in range(n):
                idx = tuple(1 if t == j else 0 for t in range(n))
                row.append(ctx.residue(coeffs[idx]) if idx in coeffs
                           else fld.zero())
            L.append(row)
            zero_idx = (0,) * n
            c.append(ctx.residue(coeffs[zero_idx]) if zero_idx in coeffs
                     else fld.zero())
        return L, c

    def summary(self):
        return {
            "k": self.period_k,
            "affine_order": self.affine_order,
            "divisibility_degree": self.cap,
            "center_digits": [[str(c) for layer in y.layers for c in layer]
                              for y in self.center],
        }

    def __repr__(self):
        return (f"PadicNeighborhood(p={self.ctx.p}, n={self.n},"
                f" k={self.period_k}, l={self.affine_order})")


class IteratedMap:
    """t -> local coordinates of f^(k*multiplier) applied exactly.

    ``orbit`` iterates in ambient coordinates first and converts each point
    once, so the whole orbit loses a single digit of precision instead of one
    per step.
    """

    def __init__(self, nbhd, multiplier=1):
        self.nbhd = nbhd
        self.multiplier = multiplier
        self.steps = nbhd.period_k * multiplier

    def __call__(self, tvec):
        z = self.nbhd.from_local(tvec)
        for _ in range(self.steps):
            z = map_eval_padic(self.nbhd.map, z, self.nbhd.ctx)
        return self.nbhd.to_local(z)

    def orbit(self, t0, count):
        z = self.nbhd.from_local(t0)
        out = [self.nbhd.to_local(z)]
        for _ in range(count):
            for _ in range(self.steps):
                z = map_eval_padic(self.nbhd.map, z, self.nbhd.ctx)
            out.append(self.nbhd.to_local(z))
        return out


def build_neighborhood(f, k, center, ctx, cap=8, fbar=None, record=None,
                       lift_convention=None):
    """Expand f^k at the lifted center and normalize.

    Checks performed: the orbit of the center stays clear of the
    indeterminacy and ramification loci mod r; the constant terms of H have
    v_r >= 1; every F coefficient at index K with 1 <= |K| <= cap has
    v_r >= |K| - 1 (violation aborts: it signals a bug or a bad prime); and
    the reduction of F mod r is an invertible affine map.
    """
    if fbar is None:
        fbar = reduce_map(f, ctx)
    n = f.n
    y = tuple(center)
    orbit_points = [y]
    local_steps = []
    cur = y
    for _ in range(k):
        res_pt = tuple(ctx.residue(z) for z in cur)
        if locus_check(fbar, res_pt) != CLEAR:
            raise OrbitNotClearError(
                "orbit of the center hits the indeterminacy or ramification"
                " locus mod r")
        expansions = [expand_at((num, den), cur, cap, ctx)
                      for num, den in zip(f.numerators, f.denominators)]
        nxt = tuple(s.constant_term() for s in expansions)
        local_steps.append([s.without_constant() for s in expansions])
        cur = nxt
        orbit_points.append(cur)

    comp = local_steps[0]
    for j in range(1, k):
        comp = [series_compose(local_steps[j][i], comp) for i in range(n)]

    H = []
    for i in range(n):
        const = orbit_points[k][i] - y[i]
        v = const.valuation()
        if v < 1:
            raise OrbitNotClearError(
                f"f^k does not fix the center mod r (constant valuation {v})")
        H.append(comp[i].with_constant(const))

    r = ctx.uniformizer()
    rpow = {0: ctx.one()}

    def rpower(s):
        if s not in rpow:
            rpow[s] = rpower(s - 1) * r
        return rpow[s]

    F = []
    for i in range(n):
        coeffs = {}
        for idx, c in H[i].coeffs.items():
            deg = sum(idx)
            if deg == 0:
                coeffs[idx] = c.divide_uniformizer()
            else:
                coeffs[idx] = c * rpower(deg - 1)
        series = type(H[i])(ctx, n, cap, coeffs)
        for idx, c in series.coeffs.items():
            deg = sum(idx)
            need = max(deg - 1, 0)
            if c.valuation() < need:
                raise DivisibilityError(
                    f"F_{i + 1} coefficient at {idx} has v_r ="
                    f" {c.valuation()} < {need}")
        F.append(series)

    nbhd = PadicNeighborhood(ctx, f, k, y, orbit_points[:k], H, F,
                             affine_order=None, cap=cap, fbar=fbar,
                             record=record, lift_convention=lift_convention)
    nbhd.affine_order = reduced_affine_order(nbhd)
    return nbhd


def reduced_affine_order(nbhd, verify_samples=0, rng=None):
    """Order of the reduction of F mod r as an affine map of F_q^n.

    Iterates symbolically as pairs (L^j, sum L^i c); capped by the affine
    group order times q, which any element order divides. Optionally
    verifies F^order(z) = z mod r on random samples via exact iteration.
    """
    ctx = nbhd.ctx
    fld = ctx.residue_field
    n = nbhd.n
    L, c = nbhd.affine_parts()
    if mat_det(fld, L).is_zero():
        raise RamificationLeakError(
            "linear part of the reduced map is singular")
    qn = fld.order ** n
    cap = qn * fld.order
    for i in range(n):
        cap *= qn - fld.order ** i
    ident = mat_identity(fld, n)
    zero_vec = [fld.zero()] * n
    M, v = L, c
    order = None
    for j in range(1, cap + 1):
        if mat_eq(M, ident) and v == zero_vec:
            order = j
            break
        M = mat_mul(L, M)
        v = [a + b for a, b in zip(mat_vec(L, v), c)]
    if order is None:
        raise OrderCapError("affine order iteration exceeded the group"
                            " order cap")
    if verify_samples:
        phi = nbhd.iterated_local_map(order)
        for _ in range(verify_samples):
            z = [ctx.random_element(rng) for _ in range(n)]
            image = phi(z)
            for a, b in zip(image, z):
                if (a - b).valuation() < 1:
                    raise RamificationLeakError(
                        "F^order is not the identity mod r on a sample")
    return order
