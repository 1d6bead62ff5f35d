"""Exact arithmetic in Z_p and in a two-layer extension ring at fixed precision.

The ring is built as an unramified layer W = Z_p[b]/(unram_poly) followed by
an Eisenstein layer O = W[r]/(eis_poly). Elements store d*e integer
coordinates modulo p^prec on the basis b^i * r^j, together with their own
absolute precision tag ``prec`` (p-adic digits valid on every coordinate).
Operations never silently lose precision: only uniformizer/factorial
divisions reduce the tag, by exactly the amount divided out.

The uniformizer valuation v_r is first class: v_r(p) = e, v_r(r) = 1, and a
query on an element whose retained digits all vanish returns INFINITY, the
"indistinguishable from zero at this precision" flag. Exact equality of
nonzero quantities is therefore never decided p-adically; certification
paths use rational arithmetic for that.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (BadReductionError, ContextMismatchError, NonUnitError,
                     PrecisionError)
from .finitefields import FFElement, FiniteField, is_prime

INFINITY = float("inf")

DEFAULT_PRECISION = 64

# Residue-field elements are finite-field elements of ctx.residue_field;
# PadicContext.residue() returns them. The alias names the role.
ResidueElement = FFElement


def _vp(n, p):
    """p-adic valuation of an integer; INFINITY for 0."""
    if n == 0:
        return INFINITY
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicContext:
    """Prime, extension tower and working precision for one ring O.

    unram_poly: monic integer polynomial, irreducible mod p (degree d; the
        trivial layer is [0, 1], i.e. x).
    eis_poly: monic Eisenstein polynomial over the unramified layer, entries
        int or length-d coordinate lists (degree e; the trivial layer is
        x - p, i.e. [-p, 1]).
    """

    def __init__(self, p, unram_poly=None, eis_poly=None,
                 precision=DEFAULT_PRECISION):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if precision < 1:
            raise ValueError("precision must be positive")
        self.p = p
        self.precision = precision
        self.pmod = p ** precision

        if unram_poly is None:
            unram_poly = [0, 1]
        unram_poly = [int(c) for c in unram_poly]
        if len(unram_poly) < 2 or unram_poly[-1] != 1:
            raise ValueError("unram_poly must be monic of degree >= 1")
        self.unram_poly = tuple(unram_poly)
        self.d = len(unram_poly) - 1
        self.q = p ** self.d

        fp = FiniteField(p)
        if self.d == 1:
            self.residue_field = fp
        else:
            low = [fp.from_int(c) for c in unram_poly[:-1]]
            try:
                self.residue_field = FiniteField(p, modulus=low, base=fp)
            except ValueError as exc:
                raise ValueError(f"unram_poly not irreducible mod {p}: {exc}")

        if eis_poly is None:
            eis_poly = [-p, 1]
        raw = [self._w_raw_input(c) for c in eis_poly]
        if len(raw) < 2:
            raise ValueError("eis_poly must have degree >= 1")
        if raw[-1] != tuple([1] + [0] * (self.d - 1)):
            raise ValueError("eis_poly must be monic with unit leading"
                             " coefficient 1")
        self.e = len(raw) - 1
        low_raw = raw[:-1]
        # Eisenstein criterion on the raw integers, before reduction: the
        # leading coefficient is a unit, lower ones have positive valuation
        # and the constant has valuation exactly 1.
        for c in low_raw:
            if self._raw_wval(c) < 1:
                raise ValueError("eis_poly lower coefficients must have"
                                 " positive p-valuation")
        if self._raw_wval(low_raw[0]) != 1:
            raise ValueError("eis_poly constant coefficient must have"
                             " p-valuation exactly 1")
        self.eis_low = tuple(tuple(x % self.pmod for x in c)
                             for c in low_raw)
        self.eis_low_raw = tuple(low_raw)
        self.ramification_degree = self.e  # v_r(p) = e
        self._unif_cache = None

    # -- W-layer helpers: tuples of d ints mod p^prec ------------------------

    def _w_raw_input(self, c):
        if isinstance(c, int):
            coords = [c] + [0] * (self.d - 1)
        else:
            coords = [int(x) for x in c]
            if len(coords) > self.d:
                raise ValueError("eis_poly coefficient has too many"
                                 " coordinates")
            coords += [0] * (self.d - len(coords))
        return tuple(coords)

    def _raw_wval(self, coords):
        return min((_vp(x, self.p) for x in coords), default=INFINITY)

    def _wzero(self):
        return (0,) * self.d

    def _wadd(self, a, b, mod):
        return tuple((x + y) % mod for x, y in zip(a, b))

    def _wsub(self, a, b, mod):
        return tuple((x - y) % mod for x, y in zip(a, b))

    def _wneg(self, a, mod):
        return tuple((-x) % mod for x in a)

    def _wscale(self, a, k, mod):
        return tuple((x * k) % mod for x in a)

    def _wmul(self, a, b, mod):
        d = self.d
        if d == 1:
            return ((a[0] * b[0]) % mod,)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % mod
        g = self.unram_poly
        for i in range(2 * d - 2, d - 1, -1):
            c = prod[i]
            if c == 0:
                continue
            prod[i] = 0
            for j in range(d):
                prod[i - d + j] = (prod[i - d + j] - c * g[j]) % mod
        return tuple(prod[:d])

    def _wval(self, a):
        """min p-valuation over coordinates; INFINITY when all vanish."""
        best = INFINITY
        for x in a:
            v = _vp(x, self.p)
            if v < best:
                best = v
                if best == 0:
                    break
        return best

    # -- element constructors ------------------------------------------------

    def _make(self, layers, prec):
        return PadicElement(self, tuple(layers), prec)

    def zero(self, prec=None):
        prec = self.precision if prec is None else prec
        return self._make([self._wzero()] * self.e, prec)

    def one(self, prec=None):
        return self.from_int(1, prec)

    def from_int(self, k, prec=None):
        prec = self.precision if prec is None else prec
        mod = self.p ** prec
        layers = [self._wzero()] * self.e
        layers[0] = tuple([k % mod] + [0] * (self.d - 1))
        return self._make(layers, prec)

    def from_rational(self, x, prec=None):
        """Embed a Fraction/int; the denominator must be a p-unit."""
        x = Fraction(x)
        prec = self.precision if prec is None else prec
        mod = self.p ** prec
        if x.denominator % self.p == 0:
            raise BadReductionError(
                f"{x} is not {self.p}-integral (bad-reduction coefficient)")
        val = (x.numerator * pow(x.denominator, -1, mod)) % mod
        layers = [self._wzero()] * self.e
        layers[0] = tuple([val] + [0] * (self.d - 1))
        return self._make(layers, prec)

    def from_coords(self, coords, prec=None):
        """Element from d*e integers, ordered layer by layer (r-degree major)."""
        prec = self.precision if prec is None else prec
        mod = self.p ** prec
        coords = list(coords)
        if len(coords) != self.d * self.e:
            raise ValueError(f"expected {self.d * self.e} coordinates")
        layers = [tuple(c % mod for c in coords[j * self.d:(j + 1) * self.d])
                  for j in range(self.e)]
        return self._make(layers, prec)

    def unram_generator(self):
        """The root b of unram_poly (zero when the layer is trivial, x)."""
        layers = [self._wzero()] * self.e
        if self.d > 1:
            layers[0] = tuple([0, 1] + [0] * (self.d - 2))
        else:
            # root of the degree-1 polynomial x + c0
            layers[0] = ((-self.unram_poly[0]) % self.pmod,)
        return self._make(layers, self.precision)

    def uniformizer(self):
        if self.e == 1:
            neg_c0 = self._wneg(self.eis_low[0], self.pmod)
            return self._make([neg_c0], self.precision)
        layers = [self._wzero()] * self.e
        layers[1] = tuple([1] + [0] * (self.d - 1))
        return self._make(layers, self.precision)

    def random_element(self, rng, prec=None):
        prec = self.precision if prec is None else prec
        mod = self.p ** prec
        return self.from_coords(
            [rng.randrange(mod) for _ in range(self.d * self.e)], prec)

    def _uniformizer_division_data(self):
        """(u0^{-1}, r^(e-1) + g) at full precision, from the raw Eisenstein
        data: r * (r^(e-1) + g) = -a0 = -p*u0, so x/r =
        -x * (r^(e-1) + g) * u0^{-1} / p."""
        if self._unif_cache is None:
            zero = self._wzero()
            e = self.e
            u0_raw = tuple(x // self.p for x in self.eis_low_raw[0])
            u0 = self._make(
                [tuple(x % self.pmod for x in u0_raw)] + [zero] * (e - 1),
                self.precision)
            layers = [zero] * e
            layers[e - 1] = tuple([1] + [0] * (self.d - 1))
            w = self._make(layers, self.precision)  # r^(e-1)
            g_layers = [zero] * e
            for j in range(1, e):
                g_layers[j - 1] = self.eis_low[j]
            w = w + self._make(g_layers, self.precision)
            self._unif_cache = (u0.inverse(), w)
        return self._unif_cache

    # -- residue field -------------------------------------------------------

    def residue(self, a):
        """Image of a in F_q = O / (r); a ring homomorphism."""
        a = self.coerce(a)
        coords = [c % self.p for c in a.layers[0]]
        return self.residue_from_coords(coords)

    def residue_from_coords(self, coords):
        fld = self.residue_field
        if self.d == 1:
            return fld.from_int(coords[0])
        fp = fld.base
        return FFElement(fld, tuple(fp.from_int(c) for c in coords))

    def naive_lift(self, res):
        """Coordinate lift of a residue element (digits copied verbatim)."""
        res = self.residue_field.coerce(res)
        coords = res.abs_coords()
        layers = [self._wzero()] * self.e
        layers[0] = tuple(int(c if isinstance(c, int) else c.rep)
                          for c in coords)
        return self._make(layers, self.precision)

    def teichmuller_lift(self, res):
        """The multiplicative lift: the unique root of x^q = x over res.

        Zero lifts to zero; units lift to roots of unity of order dividing
        q - 1. Computed by iterating the q-power map to stability.
        """
        res = self.residue_field.coerce(res)
        x = self.naive_lift(res)
        if res.is_zero():
            return x
        for _ in range(self.e * self.precision + 4):
            nxt = x ** self.q
            if nxt.layers == x.layers:
                return nxt
            x = nxt
        raise PrecisionError("Teichmuller iteration failed to stabilize")

    def coerce(self, x):
        if isinstance(x, PadicElement):
            if x.ctx != self:
                raise ContextMismatchError("mixed p-adic contexts")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into O_p")

    def __eq__(self, other):
        return (isinstance(other, PadicContext)
                and self.p == other.p
                and self.unram_poly == other.unram_poly
                and self.eis_low == other.eis_low
                and self.precision == other.precision)

    def __hash__(self):
        return hash((self.p, self.unram_poly, self.eis_low, self.precision))

    def __repr__(self):
        return (f"PadicContext(p={self.p}, d={self.d}, e={self.e},"
                f" precision={self.precision})")


class PadicElement:
    """Immutable ring element; ``layers[j][i]`` is the b^i r^j coordinate."""

    __slots__ = ("ctx", "layers", "prec")

    def __init__(self, ctx, layers, prec):
        self.ctx = ctx
        self.layers = layers
        self.prec = prec

    # -- arithmetic -----------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.coerce(other)
        elif not isinstance(other, PadicElement):
            return None, None, None
        elif other.ctx != self.ctx:
            raise ContextMismatchError("mixed p-adic contexts")
        prec = min(self.prec, other.prec)
        return other, prec, self.ctx.p ** prec

    def _tighten(self, prec, mod):
        if prec == self.prec:
            return self.layers
        return tuple(tuple(c % mod for c in layer) for layer in self.layers)

    def __add__(self, other):
        o, prec, mod = self._pair(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        a = self._tighten(prec, mod)
        b = o._tighten(prec, mod)
        return ctx._make([ctx._wadd(x, y, mod) for x, y in zip(a, b)], prec)

    __radd__ = __add__

    def __sub__(self, other):
        o, prec, mod = self._pair(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        a = self._tighten(prec, mod)
        b = o._tighten(prec, mod)
        return ctx._make([ctx._wsub(x, y, mod) for x, y in zip(a, b)], prec)

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        ctx = self.ctx
        mod = ctx.p ** self.prec
        return ctx._make([ctx._wneg(x, mod) for x in self.layers], self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            ctx = self.ctx
            mod = ctx.p ** self.prec
            return ctx._make([ctx._wscale(x, other, mod) for x in self.layers],
                             self.prec)
        o, prec, mod = self._pair(other)
        if o is None:
            return NotImplemented
        ctx = self.ctx
        a = self._tighten(prec, mod)
        b = o._tighten(prec, mod)
        e = ctx.e
        if e == 1:
            return ctx._make([ctx._wmul(a[0], b[0], mod)], prec)
        zero = ctx._wzero()
        prod = [zero] * (2 * e - 1)
        for i, x in enumerate(a):
            if x == zero:
                continue
            for j, y in enumerate(b):
                prod[i + j] = ctx._wadd(prod[i + j], ctx._wmul(x, y, mod), mod)
        low = ctx.eis_low
        for i in range(2 * e - 2, e - 1, -1):
            c = prod[i]
            if c == zero:
                continue
            prod[i] = zero
            for j in range(e):
                prod[i - e + j] = ctx._wsub(prod[i - e + j],
                                            ctx._wmul(c, low[j], mod), mod)
        return ctx._make(prod[:e], prec)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ctx.one(self.prec)
        powed = self
        while k:
            if k & 1:
                result = result * powed
            powed = powed * powed
            k >>= 1
        return result

    # -- valuation and predicates ----------------------------------------------

    def valuation(self):
        """v_r, or INFINITY when every retained digit vanishes.

        v_r(sum_j c_j r^j) = min_j (e * v_p-layer(c_j) + j); exact because the
        candidate valuations are pairwise distinct mod e.
        """
        ctx = self.ctx
        best = INFINITY
        for j, layer in enumerate(self.layers):
            w = ctx._wval(layer)
            if w is INFINITY:
                continue
            v = ctx.e * w + j
            if v < best:
                best = v
        return best

    def is_zero_to_precision(self):
        return self.valuation() is INFINITY

    def is_unit(self):
        return self.valuation() == 0

    def in_base_subring(self):
        """True when the element lies in Z_p (to stored precision)."""
        zero = self.ctx._wzero()
        if any(layer != zero for layer in self.layers[1:]):
            return False
        return all(c == 0 for c in self.layers[0][1:])

    def base_int(self):
        """The Z_p representative as an integer mod p^prec (requires
        in_base_subring)."""
        if not self.in_base_subring():
            raise ValueError("element is not in the base subring Z_p")
        return self.layers[0][0]

    def residue(self):
        return self.ctx.residue(self)

    # -- division -----------------------------------------------------------

    def inverse(self):
        """Multiplicative inverse of a unit, exact to stored precision."""
        if self.valuation() != 0:
            raise NonUnitError("division by non-unit")
        ctx = self.ctx
        res_inv = self.residue().inverse()
        x = ctx.naive_lift(res_inv)
        if x.prec > self.prec:
            mod = ctx.p ** self.prec
            x = ctx._make(x._tighten(self.prec, mod), self.prec)
        two = ctx.from_int(2, self.prec)
        # Newton: correct r-digits double every step
        steps = max(1, (ctx.e * self.prec).bit_length() + 1)
        for _ in range(steps):
            x = x * (two - self * x)
        return x

    def divide_exact_p(self, s):
        """Divide by p^s; every coordinate must carry the factor. Costs s
        digits of precision."""
        if s == 0:
            return self
        if s >= self.prec:
            raise PrecisionError("division by p^%d exhausts precision" % s)
        ps = self.ctx.p ** s
        new_layers = []
        for layer in self.layers:
            row = []
            for c in layer:
                if c % ps:
                    raise ValueError("element is not divisible by p^%d" % s)
                row.append(c // ps)
            new_layers.append(tuple(row))
        return self.ctx._make(new_layers, self.prec - s)

    def divide_uniformizer(self):
        """Divide by r (requires v_r >= 1). Costs one digit of precision."""
        ctx = self.ctx
        if self.valuation() < 1:
            raise NonUnitError("element is a unit; cannot divide by r exactly")
        if self.prec <= 1:
            raise PrecisionError("division by r exhausts precision")
        e = ctx.e
        zero = ctx._wzero()
        # tail: coordinates of r, r^2, ... shift down one slot
        tail_layers = list(self.layers[1:]) + [zero]
        tail = ctx._make(tail_layers, self.prec)
        c0 = self.layers[0]
        if c0 == zero:
            part = ctx.zero(self.prec - 1)
        else:
            u0_inv, w = ctx._uniformizer_division_data()
            c0_elem = ctx._make([c0] + [zero] * (e - 1), self.prec)
            z = c0_elem * w * u0_inv
            part = -z.divide_exact_p(1)
        return tail + part

    # -- misc -----------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.coerce(other)
        if not isinstance(other, PadicElement):
            return NotImplemented
        if other.ctx != self.ctx:
            return False
        prec = min(self.prec, other.prec)
        mod = self.ctx.p ** prec
        return self._tighten(prec, mod) == other._tighten(prec, mod)

    __hash__ = None

    def __repr__(self):
        v = self.valuation()
        flat = [c for layer in self.layers for c in layer]
        digits = [c % self.ctx.p ** 4 for c in flat]
        return (f"<O_p {digits}+O(p^4)... v_r={v} prec={self.prec}"
                f" p={self.ctx.p}>")


# -- integer-combinatorics helpers -------------------------------------------

def digit_sum(k, p):
    s = 0
    while k:
        k, rem = divmod(k, p)
        s += rem
    return s


def factorial_valuation(k, p):
    """v_p(k!) by Legendre's formula (k - digit sum)/(p - 1)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return (k - digit_sum(k, p)) // (p - 1)


def int_binomial(z, k):
    """binomial(z, k) for any integer z (falling factorial over k!)."""
    num = 1
    for j in range(k):
        num *= z - j
    den = 1
    for j in range(2, k + 1):
        den *= j
    return num // den


def binomial_eval(z, k):
    """binomial(z, k) = z(z-1)...(z-k+1)/k! for z in the base subring Z_p.

    Integer-valued on Z_p, so the division by k! is exact; it costs
    v_p(k!) digits of precision.
    """
    ctx = z.ctx
    if not z.in_base_subring():
        raise ValueError("Mahler variable must lie in Z_p")
    if k == 0:
        return ctx.one(z.prec)
    num = z
    for j in range(1, k):
        num = num * (z - j)
    s = factorial_valuation(k, ctx.p)
    if s >= num.prec:
        raise PrecisionError(
            f"v_p({k}!) = {s} exhausts precision {num.prec}")
    kfact_unit = 1
    for j in range(2, k + 1):
        kfact_unit *= j
    kfact_unit //= ctx.p ** s
    result = num * ctx.from_int(kfact_unit, num.prec).inverse()
    return result.divide_exact_p(s)
