"""Transfer matrices between summation methods and their three boundedness properties.

For an invertible lower-triangular ``A`` and any ``B`` the transfer matrix is
the unique ``C`` with ``CA = B``, i.e. ``C = B A^{-1}``.  The properties
checked on ``C`` are

* ``*C``  : row absolute sums are bounded (``C`` is bounded on l-infinity),
* ``*2C`` : ``*C`` and every column tends to 0 (``C`` maps c0 into c0),
* ``*3C`` : row absolute sums tend to 0 (``C`` is compact from l-infinity to c0).

Known families get closed-form transfer matrices and analytic verdicts;
everything else is decided numerically with :mod:`summat.evidence`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import evidence as ev
from .catalog import PowerWeightSpec, make_delta, partial_sum_table
from .core import TriangularMatrix, multiply, row_abs_sum, solve_row
from .errors import ChainError, SingularMatrixError
from .evidence import FAILS, HOLDS, INCONCLUSIVE, Evidence, Thresholds
from .scalar import EXACT, Field, require_same

STAR_C, STAR_2C, STAR_3C = "*C", "*2C", "*3C"
PROPERTIES = (STAR_C, STAR_2C, STAR_3C)

DEFAULT_DEPTH = 4096


@dataclass
class TransferMatrix:
    """``C`` with ``C A = B``, plus how it was obtained.

    ``analytic`` maps a property name to ``(status, rationale)`` when a closed
    argument settles it; ``rowsum`` is a closed form for row absolute sums
    (0-based row index) when one is known.
    """

    C: TriangularMatrix
    A: TriangularMatrix
    B: TriangularMatrix
    provenance: str
    analytic: dict = field(default_factory=dict)
    rowsum: Optional[Callable[[int], float]] = None

    @property
    def source(self) -> tuple[str, str]:
        return (self.A.name, self.B.name)


@dataclass
class PropertyVerdict:
    pair: tuple[str, str]
    property: str
    status: str
    sup: Optional[float] = None
    growth_exponent: Optional[float] = None
    witness_rows: list = field(default_factory=list)
    probe_depth: int = 0
    tol: float = ev.DEFAULT.tol
    provenance: str = "numeric"
    numeric_status: Optional[str] = None
    columns_checked: list = field(default_factory=list)
    rationale: str = ""
    evidence: Optional[Evidence] = None

    def to_json(self) -> dict:
        return {
            "pair": {"A": self.pair[0], "B": self.pair[1]},
            "property": self.property,
            "status": self.status,
            "sup": ev._clean(self.sup),
            "growth_exponent": ev._clean(self.growth_exponent),
            "probe_depth": self.probe_depth,
            "tol": self.tol,
            "witness_rows": list(self.witness_rows),
            "provenance": self.provenance,
            "numeric_status": self.numeric_status,
            "columns_checked": list(self.columns_checked),
            "rationale": self.rationale,
        }


# -- closed-form families ----------------------------------------------------


def _power_exponent(M: TriangularMatrix) -> Optional[float]:
    fam = M.family
    if fam == ("id",):
        return None
    if len(fam) == 2 and fam[0] == "Mp":
        return float(fam[1])
    return None


def _trusted(tag) -> bool:
    if isinstance(tag, tuple):
        return all(_trusted(t) for t in tag)
    return tag not in ("opaque", "dense")


def closed_form_rowsum(p: float, q: float, n: int) -> float:
    """Row absolute sum of ``M_q M_p^{-1}`` at row ``n`` (1-based, ``n >= 1``).

    Equals 1 when ``q <= p`` and ``2 n^(q-p) S(n,p)/S(n,q) - 1`` otherwise.
    """
    if n < 1:
        raise ValueError("row index is 1-based here; need n >= 1")
    if q <= p:
        return 1.0
    sp = partial_sum_table(PowerWeightSpec(float(p)))
    sq = partial_sum_table(PowerWeightSpec(float(q)))
    log_val = (q - p) * math.log(n) + sp.log(n) - sq.log(n)
    return 2.0 * math.exp(log_val) - 1.0


def _mp_mq_transfer(p: float, q: float, backend: Field) -> TriangularMatrix:
    """``M_q M_p^{-1}``: below the diagonal ``S(k+1,p)/S(n+1,q) ((k+1)^(q-p) - (k+2)^(q-p))``,
    on it ``S(n+1,p)/S(n+1,q) (n+1)^(q-p)``."""
    sp = partial_sum_table(PowerWeightSpec(float(p)), backend)
    sq = partial_sum_table(PowerWeightSpec(float(q)), backend)
    d = q - p

    if backend is EXACT:
        di = int(d)

        def row(n):
            s_q = sq.value(n + 1)
            vals = [sp.value(k + 1) / s_q * (Fraction(k + 1) ** di - Fraction(k + 2) ** di)
                    for k in range(n)]
            vals.append(sp.value(n + 1) / s_q * Fraction(n + 1) ** di)
            return backend.array(vals)
    else:

        def row(n):
            i = np.arange(1, n + 2, dtype=float)
            s_p = sp.prefix(n + 1)
            s_q = sq.value(n + 1)
            out = np.empty(n + 1)
            out[:n] = s_p[:n] / s_q * (i[:n] ** d - (i[:n] + 1.0) ** d)
            out[n] = s_p[n] / s_q * (n + 1.0) ** d
            return out

    return TriangularMatrix(
        row=row, backend=backend, name=f"M{_fmt(q)}*inv(M{_fmt(p)})",
        family=("transfer", ("Mp", float(p)), ("Mp", float(q))),
        diagonal_nonzero=True,
    )


def _fmt(p: float) -> str:
    return str(int(p)) if float(p).is_integer() else repr(float(p))


def classify_mp_mq_analytic(p: float, q: float) -> dict:
    """Analytic verdicts for the pair ``(M_p, M_q)``: property -> (status, rationale)."""
    if q <= p:
        c = (HOLDS, "q <= p: transfer rows are nonnegative and sum to 1")
    elif p > -1:
        c = (HOLDS, "-1 < p < q: row sums 2 n^(q-p) S(n,p)/S(n,q) - 1 tend to 2(q+1)/(p+1) - 1")
    elif p == -1:
        c = (FAILS, "p = -1 < q: row sums grow like log n")
    elif q > -1:
        c = (FAILS, "p < -1 < q: row sums grow like n^(-(p+1)) times a constant")
    elif q == -1:
        c = (FAILS, "p < q = -1: row sums grow like n^(q-p) / log n")
    else:
        c = (FAILS, "p < q < -1: row sums grow like n^(q-p)")
    if c[0] == FAILS:
        c2 = (FAILS, "requires *C")
    elif p == q:
        c2 = (HOLDS, "transfer matrix is the identity")
    elif q >= -1:
        c2 = (HOLDS, "columns carry the factor 1/S(n,q), which tends to 0 for q >= -1")
    else:
        c2 = (FAILS, "S(n,q) converges for q < -1, so columns tend to nonzero limits")
    c3 = (FAILS, "row sums are at least 1 (the rows sum to 1)")
    return {STAR_C: c, STAR_2C: c2, STAR_3C: c3}


def _id_delta_transfer(backend: Field) -> TriangularMatrix:
    """``(M_{-1} Delta) M_0^{-1}`` from its closed form (1-based ``n``, ``H_n = S(n,-1)``):
    ``1/H_n`` on the diagonal, ``(2-n)/(n H_n)`` just below, ``2/((i+1)(i+2) H_n)`` further left."""
    table = partial_sum_table(PowerWeightSpec(-1.0), backend)

    if backend is EXACT:

        def row(n0):
            n = n0 + 1
            h = table.value(n)
            r = backend.zeros(n)
            r[n0] = 1 / h
            if n0 >= 1:
                r[n0 - 1] = Fraction(2 - n, n) / h
            for k in range(n0 - 1):
                i = k + 1
                r[k] = Fraction(2, (i + 1) * (i + 2)) / h
            return r
    else:

        def row(n0):
            n = n0 + 1
            h = table.value(n)
            r = np.zeros(n)
            i = np.arange(1, n - 1, dtype=float)
            r[: n - 2] = 2.0 / ((i + 1.0) * (i + 2.0) * h)
            if n0 >= 1:
                r[n0 - 1] = (2.0 - n) / (n * h)
            r[n0] = 1.0 / h
            return r

    return TriangularMatrix(row=row, backend=backend, name="M-1*delta*inv(cesaro)",
                            family=("transfer", ("Mp", 0.0), ("product", ("Mp", -1.0), ("delta",))))


def id_delta_rowsum(n: int) -> float:
    """Row absolute sum of the transfer above at 1-based row ``n``: ``(3 - 4/n)/H_n`` for ``n >= 2``."""
    h = partial_sum_table(PowerWeightSpec(-1.0)).value(n)
    return 1.0 if n == 1 else (3.0 - 4.0 / n) / h


def _is_mp(M: TriangularMatrix) -> bool:
    return len(M.family) == 2 and M.family[0] == "Mp"


def _probability_column_analytic(B: TriangularMatrix) -> Optional[tuple[str, str]]:
    """Closed answer to 'do the columns of B tend to 0' for catalog means."""
    fam = B.family
    if fam == ("id",):
        return HOLDS, "identity columns are eventually zero"
    if _is_mp(B):
        p = fam[1]
        if p >= -1:
            return HOLDS, f"columns carry 1/S(n,{_fmt(p)}), which tends to 0"
        return FAILS, f"S(n,{_fmt(p)}) converges, so columns tend to nonzero limits"
    if fam == ("Mexp",):
        return HOLDS, "columns carry 1/S(n,exp), which tends to 0"
    return None


def transfer(A: TriangularMatrix, B: TriangularMatrix) -> TransferMatrix:
    """The unique ``C`` with ``C A = B``.

    Closed forms are used for ``(M_p, M_q)``, ``(id, B)``, ``(A, id)`` when
    ``A`` has a closed inverse, ``A == B``, and ``(M_0, M_{-1} Delta)``.
    Otherwise ``C = B A^{-1}`` via a closed inverse of ``A`` if attached, or
    row by row by back substitution (``c_n A = b_n``).
    """
    backend = require_same(A.backend, B.backend)
    if A.diagonal_nonzero is False:
        bad = next(n for n in range(1 << 20) if A.entry(n, n) == 0)
        raise SingularMatrixError(bad, A.name)

    p, q = _power_exponent(A), _power_exponent(B)
    if _is_mp(A) and _is_mp(B) and (backend is not EXACT or float(q - p).is_integer()):
        C = _mp_mq_transfer(p, q, backend)
        rows = lambda n: closed_form_rowsum(p, q, n + 1)
        return TransferMatrix(C, A, B, "closed-form:Mp-Mq", classify_mp_mq_analytic(p, q), rows)

    if A is B or (A.family == B.family and _trusted(A.family)):
        from .core import identity_like
        analytic = {
            STAR_C: (HOLDS, "A = B, so C is the identity"),
            STAR_2C: (HOLDS, "A = B, so C is the identity, whose columns are eventually zero"),
            STAR_3C: (FAILS, "A = B, so C is the identity, whose rows have absolute sum 1"),
        }
        return TransferMatrix(identity_like(backend), A, B, "closed-form:same", analytic, lambda n: 1.0)

    if A.family == ("id",):
        analytic = {}
        if B.is_probability:
            analytic[STAR_C] = (HOLDS, "C = B is a probability matrix; row sums are 1")
            analytic[STAR_3C] = (FAILS, "C = B is a probability matrix; row sums are 1")
            col = _probability_column_analytic(B)
            if col is not None:
                analytic[STAR_2C] = col
        return TransferMatrix(B, A, B, "closed-form:id", analytic)

    if B.family == ("id",) and A.has_closed_inverse:
        analytic = {}
        if _is_mp(A):
            why = f"row sums 1 + 2 S(n-1,p)/n^p are unbounded for p = {_fmt(p)}"
            analytic = {STAR_C: (FAILS, why), STAR_2C: (FAILS, "requires *C"), STAR_3C: (FAILS, why)}
        elif A.family == ("Mexp",):
            analytic = {
                STAR_C: (HOLDS, "row sums 1 + 2 S(n-1,exp)/e^n stay below 1 + 2/(e-1)"),
                STAR_2C: (HOLDS, "the inverse is bidiagonal, so each column is eventually zero"),
                STAR_3C: (FAILS, "row sums are at least 1"),
            }
        return TransferMatrix(A.closed_inverse, A, B, "closed-inverse", analytic)

    if A.family == ("Mp", 0.0) and B.family == ("product", ("Mp", -1.0), ("delta",)):
        C = _id_delta_transfer(backend)
        analytic = {
            STAR_C: (HOLDS, "row sums (3 - 4/n)/H_n are bounded"),
            STAR_2C: (HOLDS, "row sums tend to 0, hence so do the columns"),
            STAR_3C: (HOLDS, "row sums (3 - 4/n)/H_n tend to 0"),
        }
        return TransferMatrix(C, A, B, "closed-form:M0-(M-1*delta)", analytic,
                              lambda n: id_delta_rowsum(n + 1))

    if A.has_closed_inverse:
        C = multiply(B, A.closed_inverse)
        return TransferMatrix(C.with_name(f"{B.name}*inv({A.name})"), A, B, "closed-inverse")

    def row(n):
        return solve_row(A, B.row(n))

    C = TriangularMatrix(row=row, backend=backend, name=f"{B.name}*inv({A.name})",
                         family=("transfer", A.family, B.family))
    return TransferMatrix(C, A, B, "blockwise")


# -- numeric property checks -------------------------------------------------


def _unpack(C) -> tuple[TriangularMatrix, Optional[TransferMatrix]]:
    if isinstance(C, TransferMatrix):
        return C.C, C
    return C, None


def _pair_of(C: TriangularMatrix, tm: Optional[TransferMatrix]) -> tuple[str, str]:
    return tm.source if tm is not None else (C.name, "")


def rowsum_profile(C: TriangularMatrix, N: int, ratio: float = ev.DEFAULT.ratio) -> tuple[list[int], list[float]]:
    grid = ev.geometric_grid(N, ratio)
    return grid, [float(row_abs_sum(C, n)) for n in grid]


def _verdict(prop, C, tm, N, th, e: Evidence, numeric: str, columns=()) -> PropertyVerdict:
    status, provenance, why = numeric, "numeric", e.note
    if tm is not None and prop in tm.analytic:
        status, why = tm.analytic[prop]
        provenance = tm.provenance
    return PropertyVerdict(
        pair=_pair_of(C, tm), property=prop, status=status, sup=e.sup,
        growth_exponent=e.slope, witness_rows=[e.witness] if e.witness is not None else [],
        probe_depth=N, tol=th.tol, provenance=provenance, numeric_status=numeric,
        columns_checked=list(columns), rationale=why, evidence=e,
    )


def _thresholds(tol: Optional[float], thresholds: Optional[Thresholds]) -> Thresholds:
    th = thresholds or ev.DEFAULT
    if tol is not None and tol != th.tol:
        th = Thresholds(**{**th.__dict__, "tol": tol})
    return th


def _check_n(N: int) -> None:
    if N < 16:
        raise ValueError(f"probe depth must be >= 16, got {N}")


def check_star_C(C, N: int = DEFAULT_DEPTH, tol: Optional[float] = None,
                 thresholds: Optional[Thresholds] = None) -> PropertyVerdict:
    """Bounded row absolute sums."""
    _check_n(N)
    th = _thresholds(tol, thresholds)
    M, tm = _unpack(C)
    ns, sums = rowsum_profile(M, N, th.ratio)
    e = ev.bounded_verdict(ns, sums, th)
    return _verdict(STAR_C, M, tm, N, th, e, e.status)


def _column_columns(N: int) -> list[int]:
    return list(range(int(math.ceil(math.log2(N))) + 1))


def check_star_2C(C, N: int = DEFAULT_DEPTH, tol: Optional[float] = None,
                  thresholds: Optional[Thresholds] = None) -> PropertyVerdict:
    """``*C`` plus vanishing columns ``0 .. ceil(log2 N)``."""
    _check_n(N)
    th = _thresholds(tol, thresholds)
    M, tm = _unpack(C)
    grid = ev.geometric_grid(N, th.ratio)
    rows = {n: M.row(n) for n in grid}
    sums = [float(np.sum(np.abs(np.asarray(rows[n], dtype=float)))) for n in grid]
    base = ev.bounded_verdict(grid, sums, th)
    cols = _column_columns(N)
    col_status = []
    for k in cols:
        ns = [n for n in grid if n >= k]
        vals = [abs(float(rows[n][k])) for n in ns]
        col_status.append(ev.decay_verdict(ns, vals, th).status)
    numeric = ev.combine([base.status] + col_status)
    base.extra["column_status"] = dict(zip(cols, col_status))
    return _verdict(STAR_2C, M, tm, N, th, base, numeric, cols)


def check_star_3C(C, N: int = DEFAULT_DEPTH, tol: Optional[float] = None,
                  thresholds: Optional[Thresholds] = None) -> PropertyVerdict:
    """Row absolute sums tending to 0."""
    _check_n(N)
    th = _thresholds(tol, thresholds)
    M, tm = _unpack(C)
    ns, sums = rowsum_profile(M, N, th.ratio)
    e = ev.decay_verdict(ns, sums, th)
    return _verdict(STAR_3C, M, tm, N, th, e, e.status)


CHECKS = {STAR_C: check_star_C, STAR_2C: check_star_2C, STAR_3C: check_star_3C}


def check_all(C, N: int = DEFAULT_DEPTH, tol: Optional[float] = None,
              thresholds: Optional[Thresholds] = None) -> dict:
    return {prop: CHECKS[prop](C, N, tol, thresholds) for prop in PROPERTIES}


@dataclass
class PairClassification:
    p: float
    q: float
    star_C: PropertyVerdict
    star_2C: PropertyVerdict
    rationale: str
    contradictions: list = field(default_factory=list)


def classify_pair_mp_mq(p: float, q: float, N: int = 256) -> PairClassification:
    """Analytic ``*C``/``*2C`` verdicts for ``(M_p, M_q)``, cross-checked numerically at depth ``N``.

    A contradiction is recorded when the numeric verdict is conclusive and
    disagrees with the analytic one.
    """
    tm = transfer(_mp(p), _mp(q))
    vc = check_star_C(tm, N)
    v2 = check_star_2C(tm, N)
    contradictions = [v.property for v in (vc, v2)
                      if v.numeric_status in (HOLDS, FAILS) and v.numeric_status != v.status]
    rationale = f"*C: {vc.rationale}; *2C: {v2.rationale}"
    return PairClassification(p, q, vc, v2, rationale, contradictions)


def _mp(p: float) -> TriangularMatrix:
    from .catalog import make_power_weighted
    return make_power_weighted(float(p))


# -- operator view and witnesses --------------------------------------------


@dataclass
class OperatorView:
    linf_norm_estimate: float
    c0_maps_into_c0: PropertyVerdict
    compact_majorant: list
    majorant_evidence: Evidence
    rows: list

    def to_json(self) -> dict:
        return {
            "linf_norm_estimate": ev._clean(self.linf_norm_estimate),
            "c0_maps_into_c0_evidence": self.c0_maps_into_c0.to_json(),
            "compact_majorant": [ev._clean(x) for x in self.compact_majorant],
            "majorant_decay": self.majorant_evidence.to_json(),
            "rows": self.rows,
        }


def operator_view(C, N: int = DEFAULT_DEPTH, tol: Optional[float] = None) -> OperatorView:
    """Sup-norm estimate, c0-into-c0 evidence and the row-sum majorant of ``C``.

    The norm estimate is the largest probed row absolute sum; on truncations
    it is attained by a witness sequence, so it is exact for the rows probed.
    """
    _check_n(N)
    th = _thresholds(tol, None)
    M, tm = _unpack(C)
    ns, sums = rowsum_profile(M, N, th.ratio)
    return OperatorView(
        linf_norm_estimate=max(sums),
        c0_maps_into_c0=check_star_2C(C, N, th.tol),
        compact_majorant=sums,
        majorant_evidence=ev.decay_verdict(ns, sums, th),
        rows=ns,
    )


@dataclass
class WitnessSequence:
    """Signs of row ``n`` of ``C``, padded with zeros to length ``N``."""

    n: int
    values: np.ndarray


def witness_sequence(C, n: int, N: int) -> WitnessSequence:
    M, _ = _unpack(C)
    if not 0 <= n < N:
        raise ValueError(f"need 0 <= n < N, got n={n}, N={N}")
    z = M.backend.zeros(N)
    for i, c in enumerate(M.row(n)):
        if c > 0:
            z[i] = M.backend.one
        elif c < 0:
            z[i] = -M.backend.one
    return WitnessSequence(n, z)


# -- composition -------------------------------------------------------------


def compose_verdicts(ab: dict, bd: dict) -> dict:
    """Properties of ``(A, D)`` implied by those of ``(A, B)`` and ``(B, D)``.

    The transfer matrix of ``(A, D)`` is the product of the other two, so:
    *C with *C gives *C; *2C with *2C gives *2C; *C or *3C followed by *3C
    gives *3C; *3C followed by *2C gives *3C.  A rule only fires when all its
    inputs hold; the result is otherwise ``inconclusive`` (never ``fails``).
    """
    pairs = {v.pair for v in ab.values()} | set()
    pairs_bd = {v.pair for v in bd.values()}
    if len(pairs) != 1 or len(pairs_bd) != 1:
        raise ChainError("each verdict set must describe a single pair")
    (a, b), (b2, d) = next(iter(pairs)), next(iter(pairs_bd))
    if b != b2:
        raise ChainError(f"pairs ({a}, {b}) and ({b2}, {d}) do not chain")

    def st(vs, prop):
        v = vs.get(prop)
        return v.status if v is not None else INCONCLUSIVE

    def rule(*needs):
        return HOLDS if all(s == HOLDS for s in needs) else INCONCLUSIVE

    out_c = rule(st(ab, STAR_C), st(bd, STAR_C))
    out_2c = rule(st(ab, STAR_2C), st(bd, STAR_2C))
    via_c = rule(st(ab, STAR_C), st(bd, STAR_3C))
    via_3c = rule(st(ab, STAR_3C), st(bd, STAR_3C))
    via_2c = rule(st(ab, STAR_3C), st(bd, STAR_2C))
    out_3c = HOLDS if HOLDS in (via_c, via_3c, via_2c) else INCONCLUSIVE
    result = {}
    for prop, status in ((STAR_C, out_c), (STAR_2C, out_2c), (STAR_3C, out_3c)):
        result[prop] = PropertyVerdict(pair=(a, d), property=prop, status=status,
                                       provenance="composition",
                                       rationale=f"composed from ({a},{b}) and ({b},{d})")
    return result


# -- combined pair conditions ------------------------------------------------


@dataclass
class CompositeVerdict:
    name: str
    status: str
    sub_checks: dict

    def to_json(self) -> dict:
        subs = {}
        for key, v in self.sub_checks.items():
            subs[key] = v.to_json()
        return {"check": self.name, "status": self.status, "sub_checks": subs}


@dataclass
class ColumnVerdict:
    """Verdict on ``lim_n b[n, 0] = 0``."""

    status: str
    provenance: str
    rationale: str
    evidence: Evidence

    def to_json(self) -> dict:
        return {"status": self.status, "provenance": self.provenance,
                "rationale": self.rationale, "evidence": self.evidence.to_json()}


def first_column_vanishes(B: TriangularMatrix, N: int = DEFAULT_DEPTH,
                          tol: Optional[float] = None) -> ColumnVerdict:
    th = _thresholds(tol, None)
    grid = ev.geometric_grid(N, th.ratio)
    e = ev.decay_verdict(grid, [abs(float(B.entry(n, 0))) for n in grid], th)
    analytic = _probability_column_analytic(B)
    if analytic is not None:
        return ColumnVerdict(analytic[0], "closed-form", analytic[1], e)
    return ColumnVerdict(e.status, "numeric", e.note, e)


def be_property_check(A: TriangularMatrix, B: TriangularMatrix, N: int = DEFAULT_DEPTH,
                      tol: Optional[float] = None) -> CompositeVerdict:
    """``lim b[n,0] = 0``, ``(A, B)`` has ``*C``, and ``(A, B Delta)`` has ``*3C``."""
    delta = make_delta(B.backend)
    col = first_column_vanishes(B, N, tol)
    vc = check_star_C(transfer(A, B), N, tol)
    v3 = check_star_3C(transfer(A, multiply(B, delta)), N, tol)
    subs = {"lim_b_n0": col, "A,B:*C": vc, "A,B*delta:*3C": v3}
    return CompositeVerdict("BE", ev.combine([col.status, vc.status, v3.status]), subs)


def ergodic_transfer_check(A: TriangularMatrix, B: TriangularMatrix, N: int = DEFAULT_DEPTH,
                           tol: Optional[float] = None) -> CompositeVerdict:
    """``lim b[n,0] = 0``, ``(A, B)`` has ``*C``, and ``(Delta A, B Delta)`` has ``*2C``."""
    delta = make_delta(require_same(A.backend, B.backend))
    col = first_column_vanishes(B, N, tol)
    vc = check_star_C(transfer(A, B), N, tol)
    v2 = check_star_2C(transfer(multiply(delta, A), multiply(B, delta)), N, tol)
    subs = {"lim_b_n0": col, "A,B:*C": vc, "delta*A,B*delta:*2C": v2}
    return CompositeVerdict("ergodic-transfer", ev.combine([col.status, vc.status, v2.status]), subs)
