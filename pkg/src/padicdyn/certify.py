"""End-to-end pipeline: period bounds, witness classification and replayable
non-preperiodicity certificates.

The logic that makes a certificate sound: any preperiodic point of the
invariant neighborhood satisfies f^N(w) = w for N = k * l * p^l_an (finite
period k of the reduced point, order l of the reduced affine map, analyticity
exponent l_an). Equality is always decided in exact rational arithmetic, so a
verified inequality f^N(w) != w proves w has an infinite orbit no matter what
precision the p-adic side used.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

# Certificates carry exact iterate values as digit strings; those integers
# routinely exceed CPython's conversion guard for untrusted input.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

from . import __version__
from .dynamics import PeriodicPointRecord, find_periodic_point, reduce_map, \
    verify_record
from .errors import (CertificateFormatError, IndeterminacyError,
                     InternalInconsistencyError, SearchBudgetError,
                     UnsupportedExtensionError)
from .finitefields import FiniteField, FFElement
from .mahler import INFINITY, analyticity_exponent, mahler_coefficients
from .neighborhood import (GoodPrimeReport, build_neighborhood,
                           choose_good_prime, context_for_record, hensel_lift,
                           validate_prime)
from .padics import PadicContext
from .polynomials import RationalSelfMap

CERT_FORMAT = "padicdyn-certificate"

PERIODIC = "periodic"
NON_PREPERIODIC = "non_preperiodic"
OUTSIDE = "outside_neighborhood"


@dataclass(frozen=True)
class PeriodBound:
    """N = k * affine_order * p^analyticity_exponent."""

    period_k: int
    affine_order: int
    analyticity_exponent: int
    bound: int


def period_bound(nbhd):
    ctx = nbhd.ctx
    l_an = analyticity_exponent(ctx)
    n = nbhd.period_k * nbhd.affine_order * ctx.p ** l_an
    return PeriodBound(period_k=nbhd.period_k,
                       affine_order=nbhd.affine_order,
                       analyticity_exponent=l_an,
                       bound=n)


@dataclass(frozen=True)
class ClassifyResult:
    kind: str
    period: int = None
    iterate: tuple = None             # f^N(omega) when non-preperiodic
    differs_at: int = None            # 1-based coordinate
    difference_valuation: int = None  # v_r of the differing coordinate


def rational_vr(x, ctx):
    """v_r of a nonzero rational number inside the context's fraction field."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of exact zero requested")
    p = ctx.p
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return ctx.e * v


def classify(nbhd, bound, omega):
    """periodic / non_preperiodic / outside_neighborhood for an exact
    rational point.

    Members are iterated exactly; the first return to omega gives the
    minimal period (which necessarily divides N). If f^N(omega) != omega the
    point is not preperiodic, by the contrapositive of the bounded-period
    property; the differing coordinate and its r-adic valuation are recorded.
    """
    omega = tuple(Fraction(w) for w in omega)
    if not nbhd.membership(omega):
        return ClassifyResult(kind=OUTSIDE)
    f = nbhd.map
    z = list(omega)
    for t in range(1, bound.bound + 1):
        try:
            z = f.eval_fraction(z)
        except IndeterminacyError as exc:
            raise InternalInconsistencyError(
                "exact iterate left the locus where the map is defined,"
                " impossible for a member: " + str(exc))
        for w in z:
            if w.denominator % nbhd.ctx.p == 0:
                raise InternalInconsistencyError(
                    "exact iterate left the p-integral locus while the"
                    " p-adic orbit stays integral")
        if tuple(z) == omega:
            return ClassifyResult(kind=PERIODIC, period=t)
    for i, (a, b) in enumerate(zip(z, omega)):
        if a != b:
            return ClassifyResult(
                kind=NON_PREPERIODIC, iterate=tuple(z), differs_at=i + 1,
                difference_valuation=rational_vr(a - b, nbhd.ctx))
    raise InternalInconsistencyError("iterate equals omega but the periodic"
                                     " scan missed it")


def witness_candidates(nbhd):
    """Deterministic scan order: omega = naive-lift + p * v over integer
    offset vectors v in shells of increasing max-norm, lexicographic within
    a shell."""
    ctx = nbhd.ctx
    if ctx.d != 1:
        raise UnsupportedExtensionError(
            "rational witness search needs an F_p-rational periodic point"
            " (residue degree 1)")
    base = [res.rep for res in nbhd.center_residue]
    p = ctx.p
    shell = 0
    while True:
        for v in itertools.product(range(-shell, shell + 1),
                                   repeat=nbhd.n):
            if shell and max(abs(a) for a in v) != shell:
                continue
            yield tuple(Fraction(b + p * a) for b, a in zip(base, v))
        shell += 1


def find_witness(nbhd, bound, search_budget=200, kmax=32):
    """Scan rational members in canonical order and certify the first
    non-preperiodic one.

    Raises SearchBudgetError when the budget runs out; if every classified
    point was periodic with one common period dividing N, the error flags
    "finite-order suspected".
    """
    periods = []
    scanned = 0
    for omega in witness_candidates(nbhd):
        if scanned >= search_budget:
            break
        scanned += 1
        result = classify(nbhd, bound, omega)
        if result.kind == PERIODIC:
            periods.append(result.period)
            continue
        if result.kind == NON_PREPERIODIC:
            return make_certificate(nbhd, bound, omega, result, kmax=kmax)
    finite_order = (bool(periods) and len(periods) == scanned
                    and len(set(periods)) == 1
                    and bound.bound % periods[0] == 0)
    msg = (f"no witness within budget {search_budget}"
           + ("; finite-order suspected" if finite_order else ""))
    raise SearchBudgetError(msg, periods=periods,
                            finite_order_suspected=finite_order,
                            scanned=scanned)


# -- pipeline facade ----------------------------------------------------------

@dataclass
class PipelineResult:
    map: RationalSelfMap
    prime_report: GoodPrimeReport
    ctx: PadicContext
    record: PeriodicPointRecord
    nbhd: object
    bound: PeriodBound


def run_pipeline(f, prime="auto", e=1, precision=64, degree=8, m_max=6,
                 lift="teichmuller", prime_scan=(3, 200)):
    """Map -> good prime -> periodic point -> lift -> neighborhood -> bound."""
    f.check_dominant()
    if prime == "auto" or prime is None:
        report = choose_good_prime(f, prime_scan, e=e)
    else:
        ok, reason, fallback = validate_prime(f, int(prime), e=e)
        if not ok:
            raise ValueError(f"prime {prime} rejected: {reason}")
        report = GoodPrimeReport(p=int(prime), e=e, fallback=fallback,
                                 rejections={}, scan_range=None)
    base_ctx = PadicContext(report.p, precision=1)
    fbar = reduce_map(f, base_ctx)
    record = find_periodic_point(fbar, m_max=m_max)
    ctx = context_for_record(report.p, record, e=e, precision=precision)
    report = report.with_residue_degree(ctx.d)
    fbar_full = reduce_map(f, ctx)
    center = hensel_lift(record, ctx, convention=lift)
    nbhd = build_neighborhood(f, record.period, center, ctx, cap=degree,
                              fbar=fbar_full, record=record,
                              lift_convention=lift)
    bound = period_bound(nbhd)
    return PipelineResult(map=f, prime_report=report, ctx=ctx, record=record,
                          nbhd=nbhd, bound=bound)


# -- certificates -------------------------------------------------------------

def _canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _digest(data):
    body = {k: v for k, v in data.items() if k != "digest"}
    return hashlib.sha256(_canonical_json(body).encode()).hexdigest()


def _center_digits(nbhd):
    return [[str(c) for layer in y.layers for c in layer]
            for y in nbhd.center]


def _mahler_profile(nbhd, bound, omega, kmax):
    """Valuation profile of the interpolation of psi = Phi^(p^l_an) at the
    witness's local coordinates."""
    ctx = nbhd.ctx
    mult = bound.affine_order * ctx.p ** bound.analyticity_exponent
    psi = nbhd.iterated_local_map(mult)
    t0 = nbhd.to_local(tuple(ctx.from_rational(w) for w in omega))
    interp = mahler_coefficients(psi, t0, kmax)
    table = [["inf" if v is INFINITY else int(v) for v in row]
             for row in interp.valuations]
    return {"k_max": kmax, "valuations": table}, interp


class Certificate:
    """Replayable proof object; ``data`` is the JSON-serializable payload."""

    def __init__(self, data):
        self.data = data

    def json_text(self):
        return json.dumps(self.data, sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json_text(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"bad certificate JSON: {exc}")
        if not isinstance(data, dict):
            raise CertificateFormatError("certificate must be a JSON object")
        return cls(data)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.json_text())

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_text(fh.read())

    def __eq__(self, other):
        return isinstance(other, Certificate) and self.data == other.data


def make_certificate(nbhd, bound, omega, result, kmax=32):
    ctx = nbhd.ctx
    f = nbhd.map
    record = nbhd.record
    if record is None:
        raise ValueError("neighborhood carries no periodic point record")
    profile, _ = _mahler_profile(nbhd, bound, omega, kmax)
    from .polynomials import poly_text
    data = {
        "format": CERT_FORMAT,
        "version": __version__,
        "map": {
            "n": f.n,
            "numerators": [poly_text(p) for p in f.numerators],
            "denominators": [poly_text(p) for p in f.denominators],
        },
        "map_hash": f.map_hash(),
        "context": {
            "p": ctx.p,
            "d": ctx.d,
            "e": ctx.e,
            "precision": ctx.precision,
            "unram_poly": list(ctx.unram_poly),
            "eis_poly": [list(c) for c in ctx.eis_low_raw] + [[1] + [0] * (ctx.d - 1)],
        },
        "reduction": {
            "m": record.m,
            "field_modulus": record.field_modulus_indexes(),
            "point": record.point_coords(),
            "period": record.period,
            "orbit": [[elt.abs_coords() for elt in pt]
                      for pt in record.orbit],
            "enumeration_index": record.enumeration_index,
        },
        "neighborhood": {
            "lift_convention": nbhd.lift_convention,
            "center_digits": _center_digits(nbhd),
            "k": nbhd.period_k,
            "affine_order": nbhd.affine_order,
            "divisibility_degree": nbhd.cap,
        },
        "period_bound": {
            "k": bound.period_k,
            "affine_order": bound.affine_order,
            "analyticity_exponent": bound.analyticity_exponent,
            "bound": bound.bound,
            "formula": "bound = k * affine_order * p^analyticity_exponent",
        },
        "witness": [str(Fraction(w)) for w in omega],
        "payload": {
            "iterate": [str(w) for w in result.iterate],
            "differs_at": result.differs_at,
            "difference_valuation": result.difference_valuation,
        },
        "mahler_profile": profile,
    }
    data["digest"] = _digest(data)
    return Certificate(data)


# -- verification -------------------------------------------------------------

class VerificationReport:
    def __init__(self):
        self.stages = []

    def add(self, name, ok, detail=""):
        self.stages.append((name, bool(ok), "" if ok else detail))
        return ok

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.stages)

    def failures(self):
        return [(name, detail) for name, ok, detail in self.stages if not ok]

    def __bool__(self):
        return self.ok

    def __repr__(self):
        status = "valid" if self.ok else "INVALID"
        return f"<VerificationReport {status}, {len(self.stages)} stages>"


def _rebuild_record(data, p):
    red = data["reduction"]
    m = red["m"]
    fp = FiniteField(p)
    if red["field_modulus"] is None:
        fld = fp
        if m != 1:
            raise CertificateFormatError("missing field modulus for m > 1")

        def mk_point(coords):
            return tuple(fp.from_int(c[0]) for c in coords)
    else:
        low = [fp.from_int(c) for c in red["field_modulus"]]
        fld = FiniteField(p, modulus=low, base=fp)

        def mk_point(coords):
            return tuple(FFElement(fld, tuple(fp.from_int(a) for a in cs))
                         for cs in coords)
    point = mk_point(red["point"])
    orbit = tuple(mk_point(cs) for cs in red["orbit"])
    return PeriodicPointRecord(
        m=m, field=fld, point=point, period=red["period"], orbit=orbit,
        orbit_clear=True, cycle_jacobian_invertible=True,
        enumeration_index=red["enumeration_index"], visited={})


def verify_certificate(cert):
    """Independently replay every stage of a certificate.

    Returns a VerificationReport (truthy iff valid) naming each failed stage.
    Equality checks on the witness payload use exact rational arithmetic
    only.
    """
    rep = VerificationReport()
    data = cert.data

    try:
        if not rep.add("digest", data.get("digest") == _digest(data),
                       "integrity digest mismatch"):
            return rep
        fmt_ok = (data.get("format") == CERT_FORMAT
                  and data.get("version") == __version__)
        if not rep.add("format", fmt_ok, "unknown format or version"):
            return rep

        mp = data["map"]
        f = RationalSelfMap.from_texts(mp["n"], mp["numerators"],
                                       mp["denominators"])
        rep.add("map_hash", f.map_hash() == data["map_hash"],
                "map hash mismatch")

        cctx = data["context"]
        p = cctx["p"]
        ok, reason, _fallback = validate_prime(f, p, e=cctx["e"])
        rep.add("prime", ok, reason or "")

        ctx = PadicContext(p, unram_poly=cctx["unram_poly"],
                           eis_poly=cctx["eis_poly"],
                           precision=cctx["precision"])
        rep.add("context", ctx.d == cctx["d"] and ctx.e == cctx["e"],
                "context parameters inconsistent")

        record = _rebuild_record(data, p)
        base_ctx = PadicContext(p, precision=1)
        fbar = reduce_map(f, base_ctx)
        point_ok = verify_record(fbar, record)
        idx = 0
        for c in reversed(record.point):
            idx = idx * record.field.order + record.field.index_of(c)
        point_ok = point_ok and idx == record.enumeration_index
        rep.add("periodic_point", point_ok,
                "periodic point failed re-verification")
        if not point_ok:
            return rep

        nb = data["neighborhood"]
        center = hensel_lift(record, ctx, convention=nb["lift_convention"])
        rebuilt = build_neighborhood(
            f, record.period, center, ctx, cap=nb["divisibility_degree"],
            record=record, lift_convention=nb["lift_convention"])
        rep.add("center",
                _center_digits(rebuilt) == nb["center_digits"],
                "re-lifted center differs")
        rep.add("neighborhood",
                rebuilt.period_k == nb["k"]
                and rebuilt.affine_order == nb["affine_order"],
                "k or affine order mismatch")

        pb = data["period_bound"]
        l_an = analyticity_exponent(ctx)
        rep.add("analyticity_exponent", l_an == pb["analyticity_exponent"],
                "analyticity exponent mismatch")
        n_expected = pb["k"] * pb["affine_order"] * p ** pb["analyticity_exponent"]
        rep.add("period_bound",
                pb["k"] == rebuilt.period_k
                and pb["affine_order"] == rebuilt.affine_order
                and pb["bound"] == n_expected
                and pb.get("formula") ==
                "bound = k * affine_order * p^analyticity_exponent",
                "period bound factors do not reproduce")

        omega = [Fraction(w) for w in data["witness"]]
        rep.add("membership", rebuilt.membership(omega),
                "witness is not in the neighborhood")

        payload = data["payload"]
        iterate = f.iterate_fraction(omega, pb["bound"])
        recorded = [Fraction(w) for w in payload["iterate"]]
        it_ok = iterate == recorded
        differs = None
        for i, (a, b) in enumerate(zip(iterate, omega)):
            if a != b:
                differs = i + 1
                break
        it_ok = it_ok and differs is not None
        it_ok = it_ok and differs == payload["differs_at"]
        if it_ok:
            dv = rational_vr(iterate[differs - 1] - omega[differs - 1], ctx)
            it_ok = dv == payload["difference_valuation"]
        rep.add("iterate", it_ok,
                "exact f^N(witness) does not reproduce the payload"
                " inequality")

        bound = PeriodBound(period_k=pb["k"], affine_order=pb["affine_order"],
                            analyticity_exponent=pb["analyticity_exponent"],
                            bound=pb["bound"])
        prof = data["mahler_profile"]
        recomputed, _ = _mahler_profile(rebuilt, bound, omega,
                                        prof["k_max"])
        rep.add("mahler_profile", recomputed == prof,
                "interpolation valuation profile does not reproduce")
    except Exception as exc:  # any replay blow-up invalidates the certificate
        rep.add("replay", False, f"{type(exc).__name__}: {exc}")
    return rep


# -- an independent growth oracle for tests and sanity checks -----------------

def height_growth_oracle(f, omega, steps=12):
    """Heuristic exact-height cross-check: 'periodic' on an exact return,
    'escaping' when heights grow monotonically through the tail, else
    'inconclusive'. Heights are max(|numerator|, |denominator|) over
    coordinates."""
    omega = tuple(Fraction(w) for w in omega)

    def height(pt):
        return max(max(abs(w.numerator), w.denominator) for w in pt)

    z = omega
    heights = [height(z)]
    for _ in range(steps):
        z = tuple(f.eval_fraction(z))
        if z == omega:
            return "periodic"
        heights.append(height(z))
    tail = heights[len(heights) // 2:]
    if all(a < b for a, b in zip(tail, tail[1:])) and tail[-1] > heights[0]:
        return "escaping"
    return "inconclusive"
