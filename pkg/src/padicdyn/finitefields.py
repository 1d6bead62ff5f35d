"""Exact finite-field arithmetic as explicit coefficient towers.

A field is either F_p (``base is None``) or a quotient F_B[x]/(m(x)) over a
smaller field B. Elements are immutable wrappers around an int (prime field)
or a tuple of base-field elements. Everything is index-driven and
deterministic: element enumeration order and the irreducible-modulus search
are reproducible, which downstream certificates rely on.
"""

from __future__ import annotations

from .errors import FieldMismatchError


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class FiniteField:
    """F_p when ``base`` is None, else F_base[x]/(x^m + c_{m-1}x^{m-1}+...+c_0).

    ``modulus`` holds the low coefficients (c_0, ..., c_{m-1}) of the monic
    modulus as elements of the base field.
    """

    def __init__(self, p, modulus=None, base=None, validate=True):
        if base is None:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if modulus is not None:
                raise ValueError("prime field takes no modulus")
            self.p = p
            self.base = None
            self.modulus = None
            self.degree = 1
            self.absolute_degree = 1
            self.order = p
        else:
            if p != base.p:
                raise ValueError("characteristic mismatch")
            mod = tuple(base.coerce(c) for c in modulus)
            if not mod:
                raise ValueError("modulus must have degree >= 1")
            self.p = p
            self.base = base
            self.modulus = mod
            self.degree = len(mod)
            self.absolute_degree = base.absolute_degree * len(mod)
            self.order = base.order ** len(mod)
        self._sig = self._signature()
        self._zero = self._wrap_int(0)
        self._one = self._wrap_int(1)
        if self.base is not None and validate:
            full = list(self.modulus) + [self.base.one()]
            if not is_irreducible(self.base, full):
                raise ValueError("modulus is reducible")

    def _signature(self):
        if self.base is None:
            return (self.p,)
        return (self.p, self.base._sig,
                tuple(self.base.index_of(c) for c in self.modulus))

    def _wrap_int(self, k):
        if self.base is None:
            return FFElement(self, k % self.p)
        rep = [self.base.from_int(k)] + [self.base.zero()] * (self.degree - 1)
        return FFElement(self, tuple(rep))

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def from_int(self, k):
        return self._wrap_int(k)

    def coerce(self, x):
        if isinstance(x, FFElement):
            if x.field != self:
                raise FieldMismatchError("element from a different field")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {type(x).__name__}")

    def embed(self, x):
        """Embed an element of the immediate base field (or an int)."""
        if isinstance(x, int) or self.base is None:
            return self.coerce(x)
        x = self.base.coerce(x)
        rep = (x,) + tuple(self.base.zero() for _ in range(self.degree - 1))
        return FFElement(self, rep)

    def element_from_index(self, i):
        if not 0 <= i < self.order:
            raise ValueError("index out of range")
        if self.base is None:
            return FFElement(self, i)
        digits = []
        for _ in range(self.degree):
            i, r = divmod(i, self.base.order)
            digits.append(self.base.element_from_index(r))
        return FFElement(self, tuple(digits))

    def index_of(self, x):
        x = self.coerce(x)
        if self.base is None:
            return x.rep
        idx = 0
        for c in reversed(x.rep):
            idx = idx * self.base.order + self.base.index_of(c)
        return idx

    def elements(self):
        for i in range(self.order):
            yield self.element_from_index(i)

    def extension(self, m):
        """Degree-m extension with the smallest-index irreducible modulus."""
        if m == 1:
            return self
        low = find_irreducible(self, m)
        return FiniteField(self.p, modulus=low, base=self, validate=False)

    def modulus_indexes(self):
        """Low-coefficient indexes of the modulus (None for a prime field)."""
        if self.base is None:
            return None
        return [self.base.index_of(c) for c in self.modulus]

    # -- raw rep arithmetic -------------------------------------------------

    def _radd(self, x, y):
        if self.base is None:
            return (x + y) % self.p
        return tuple(a + b for a, b in zip(x, y))

    def _rsub(self, x, y):
        if self.base is None:
            return (x - y) % self.p
        return tuple(a - b for a, b in zip(x, y))

    def _rneg(self, x):
        if self.base is None:
            return (-x) % self.p
        return tuple(-a for a in x)

    def _rmul(self, x, y):
        if self.base is None:
            return (x * y) % self.p
        base, m = self.base, self.degree
        zero = base.zero()
        prod = [zero] * (2 * m - 1)
        for i, a in enumerate(x):
            if a.is_zero():
                continue
            for j, b in enumerate(y):
                prod[i + j] = prod[i + j] + a * b
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i]
            if c.is_zero():
                continue
            prod[i] = zero
            for j, mj in enumerate(self.modulus):
                prod[i - m + j] = prod[i - m + j] - c * mj
        return tuple(prod[:m])

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._sig == other._sig

    def __hash__(self):
        return hash(self._sig)

    def __repr__(self):
        if self.base is None:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.absolute_degree})"


class FFElement:
    __slots__ = ("field", "rep")

    def __init__(self, field, rep):
        self.field = field
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise FieldMismatchError("mixed finite fields")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._radd(self.rep, o.rep))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._rsub(self.rep, o.rep))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._rsub(o.rep, self.rep))

    def __neg__(self):
        return FFElement(self.field, self.field._rneg(self.rep))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FFElement(self.field, self.field._rmul(self.rep, o.rep))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        powed = self
        while k:
            if k & 1:
                result = result * powed
            powed = powed * powed
            k >>= 1
        return result

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.field.order - 2)

    def is_zero(self):
        if self.field.base is None:
            return self.rep == 0
        return all(c.is_zero() for c in self.rep)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.rep == o.rep

    def __hash__(self):
        return hash((self.field._sig, self.field.index_of(self)))

    def __repr__(self):
        return f"ff({self.field.index_of(self)};q={self.field.order})"

    def abs_coords(self):
        """Coefficients over F_p, flattened low-to-high (length = abs degree)."""
        if self.field.base is None:
            return [self.rep]
        out = []
        for c in self.rep:
            out.extend(c.abs_coords())
        return out


# -- univariate polynomials over a field (dense low-to-high lists) ----------

def upoly_trim(cs):
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def upoly_sub(field, a, b):
    n = max(len(a), len(b))
    zero = field.zero()
    out = [(a[i] if i < len(a) else zero) - (b[i] if i < len(b) else zero)
           for i in range(n)]
    return upoly_trim(out)


def upoly_mul(field, a, b):
    if not a or not b:
        return []
    zero = field.zero()
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return upoly_trim(out)


def upoly_mod(field, a, f):
    # f monic
    a = list(a)
    m = len(f) - 1
    while len(a) > m:
        c = a.pop()
        if c.is_zero():
            continue
        for j in range(m):
            a[len(a) - m + j] = a[len(a) - m + j] - c * f[j]
    return upoly_trim(a)


def upoly_mulmod(field, a, b, f):
    return upoly_mod(field, upoly_mul(field, a, b), f)


def upoly_powmod(field, a, k, f):
    result = [field.one()]
    a = upoly_mod(field, list(a), f)
    while k:
        if k & 1:
            result = upoly_mulmod(field, result, a, f)
        a = upoly_mulmod(field, a, a, f)
        k >>= 1
    return result


def upoly_gcd(field, a, b):
    a, b = list(a), list(b)
    while b:
        lead_inv = b[-1].inverse()
        bm = [c * lead_inv for c in b]
        a = upoly_mod(field, a, bm)
        a, b = b, a
    if a:
        lead_inv = a[-1].inverse()
        a = [c * lead_inv for c in a]
    return a


def is_irreducible(field, f):
    """Rabin test for a monic polynomial f (full coefficient list) over field."""
    m = len(f) - 1
    if m < 1 or f[-1] != field.one():
        raise ValueError("expected a monic polynomial of degree >= 1")
    if m == 1:
        return True
    if f[0].is_zero():  # divisible by x
        return False
    q = field.order
    x = [field.zero(), field.one()]
    # frob[i] = x^(q^i) mod f, for the i we need
    needed = {m // ell for ell in _prime_factors(m)}
    needed.add(m)
    frob = x
    powers = {}
    for i in range(1, m + 1):
        frob = upoly_powmod(field, frob, q, f)
        if i in needed:
            powers[i] = frob
    if upoly_sub(field, powers[m], x):
        return False
    for ell in _prime_factors(m):
        g = upoly_gcd(field, upoly_sub(field, powers[m // ell], x), f)
        if len(g) - 1 >= 1:
            return False
    return True


def find_irreducible(field, m):
    """Smallest-index monic irreducible of degree m; returns low coefficients."""
    q = field.order
    one = field.one()
    for idx in range(q ** m):
        digits = []
        i = idx
        for _ in range(m):
            i, r = divmod(i, q)
            digits.append(field.element_from_index(r))
        if is_irreducible(field, digits + [one]):
            return tuple(digits)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


# -- small dense matrices of field elements ---------------------------------

def mat_identity(field, n):
    return [[field.one() if i == j else field.zero() for j in range(n)]
            for i in range(n)]


def mat_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    return [[_dot(A[i], [B[t][j] for t in range(k)]) for j in range(m)]
            for i in range(n)]


def mat_vec(A, v):
    return [_dot(row, v) for row in A]


def _dot(xs, ys):
    acc = None
    for x, y in zip(xs, ys):
        term = x * y
        acc = term if acc is None else acc + term
    return acc


def mat_det(field, A):
    n = len(A)
    if n == 1:
        return A[0][0]
    det = field.zero()
    sign = field.one()
    for j in range(n):
        minor = [[A[i][t] for t in range(n) if t != j] for i in range(1, n)]
        det = det + sign * A[0][j] * mat_det(field, minor)
        sign = -sign
    return det


def mat_eq(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))
