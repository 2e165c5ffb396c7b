"""Difference multisets and exact verifiers for DS, PDS, SEDF, GSEDF, BGSEDF.

Differences are always taken first-minus-second: ``delta(A, B)[g]`` counts
pairs ``(a, b)`` with ``a - b == g``.  Verifiers never trust claimed
parameters; they recompute everything from the sets.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateSet,
    GroupMismatch,
    NotADs,
    NotAPartition,
    NotAPds,
    NotSymmetric,
    SedfError,
    ZeroInSet,
)
from .groups import ElementSet, Group

# pair counts above this go through the FFT route
DIRECT_PAIR_LIMIT = 1 << 20
_CHUNK = 1 << 20


# --- difference counting ---------------------------------------------------


def _direct_counts(group: Group, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact pair enumeration for count vectors ``a`` and ``b``."""
    n = group.n
    asup = np.flatnonzero(a)
    bsup = np.flatnonzero(b)
    out = np.zeros(n, dtype=np.int64)
    if asup.size == 0 or bsup.size == 0:
        return out
    unit = bool((a[asup] == 1).all() and (b[bsup] == 1).all())
    rows = max(1, _CHUNK // bsup.size)
    for start in range(0, asup.size, rows):
        chunk = asup[start:start + rows]
        diffs = group.sub_vec(chunk[:, None], bsup[None, :]).ravel()
        if unit:
            out += np.bincount(diffs, minlength=n)
        else:
            w = (a[chunk][:, None] * b[bsup][None, :]).ravel()
            out += np.bincount(diffs, weights=w.astype(np.float64), minlength=n).astype(np.int64)
    return out


def _fft_counts(group: Group, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Group-ring correlation via FFT over Z_n or (Z_p)^m.

    Returns None when rounding cannot be trusted; callers fall back to the
    direct route.
    """
    shape = (group.n,) if group.kind == "cyclic" or group.m == 1 else (group.p,) * group.m
    fa = np.fft.rfftn(a.reshape(shape).astype(np.float64))
    fb = np.fft.rfftn(b.reshape(shape).astype(np.float64))
    raw = np.fft.irfftn(fa * np.conj(fb), s=shape, axes=tuple(range(len(shape)))).ravel()
    out = np.rint(raw)
    if np.abs(raw - out).max() > 0.1 or out.min() < 0:
        return None
    out = out.astype(np.int64)
    if int(out.sum()) != int(a.sum()) * int(b.sum()):
        return None
    return out


def difference_counts(group: Group, a: np.ndarray, b: np.ndarray, method: str = "auto") -> np.ndarray:
    """Coefficients of ``a * b^(-1)`` in Z[G] for nonnegative count vectors."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if method == "direct":
        return _direct_counts(group, a, b)
    if method == "auto" and np.count_nonzero(a) * np.count_nonzero(b) <= DIRECT_PAIR_LIMIT:
        return _direct_counts(group, a, b)
    out = _fft_counts(group, a, b)
    if out is None:
        if method == "fft":
            raise SedfError("FFT rounding residual too large")
        return _direct_counts(group, a, b)
    return out


@dataclass(eq=False)
class DiffMultiset:
    """Nonnegative element of Z[G]: one count per group element."""

    group: Group
    counts: np.ndarray

    def __getitem__(self, g: int) -> int:
        return int(self.counts[g])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __add__(self, other: "DiffMultiset") -> "DiffMultiset":
        if other.group != self.group:
            raise GroupMismatch("cannot add multisets over different groups")
        return DiffMultiset(self.group, self.counts + other.counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffMultiset):
            return NotImplemented
        return self.group == other.group and bool(np.array_equal(self.counts, other.counts))

    def off_zero(self) -> np.ndarray:
        return self.counts[1:]

    def as_dict(self) -> dict[int, int]:
        return {int(g): int(c) for g, c in enumerate(self.counts) if c}


def delta(A: ElementSet, B: ElementSet, method: str = "auto") -> DiffMultiset:
    """The multiset ``{a - b : a in A, b in B}``."""
    if A.group != B.group:
        raise GroupMismatch(f"{A.group.name()} vs {B.group.name()}")
    counts = difference_counts(A.group, A.mask.astype(np.int64), B.mask.astype(np.int64), method)
    return DiffMultiset(A.group, counts)


# --- parameter records ------------------------------------------------------


@dataclass(frozen=True)
class DsParams:
    n: int
    k: int
    lam: int

    def astuple(self) -> tuple:
        return (self.n, self.k, self.lam)


@dataclass(frozen=True)
class PdsParams:
    n: int
    k: int
    lam: int
    mu: int

    def astuple(self) -> tuple:
        return (self.n, self.k, self.lam, self.mu)


@dataclass(frozen=True)
class SedfParams:
    n: int
    m: int
    k: int
    lam: int

    def astuple(self) -> tuple:
        return (self.n, self.m, self.k, self.lam)


@dataclass(frozen=True)
class GsedfParams:
    n: int
    m: int
    ks: tuple
    lams: tuple

    def astuple(self) -> tuple:
        return (self.n, self.m, self.ks, self.lams)


@dataclass(frozen=True)
class BgsedfParams:
    n: int
    m: int
    ks: tuple
    bounds: tuple

    def astuple(self) -> tuple:
        return (self.n, self.m, self.ks, self.bounds)


# --- families ---------------------------------------------------------------


@dataclass
class Family:
    group: Group
    sets: list[ElementSet]
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [f"A{i + 1}" for i in range(len(self.sets))]
        if len(self.labels) != len(self.sets):
            raise SedfError("one label per set is required")
        for s in self.sets:
            if s.group != self.group:
                raise GroupMismatch("family sets must share the family's group")
            if s.k == 0:
                raise SedfError("family sets must be nonempty")

    @classmethod
    def of(cls, group: Group, sets: Sequence, labels: Sequence[str] | None = None) -> "Family":
        built = [s if isinstance(s, ElementSet) else ElementSet.of(group, s) for s in sets]
        return cls(group, built, list(labels) if labels else [])

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(s.k for s in self.sets)

    def union(self) -> ElementSet:
        mask = np.zeros(self.group.n, dtype=bool)
        for s in self.sets:
            mask |= s.mask
        return ElementSet(self.group, mask)

    def first_overlap(self) -> tuple[int, int, int] | None:
        """``(i, j, x)`` for the first shared element, or None if disjoint."""
        seen = np.full(self.group.n, -1, dtype=np.int64)
        for j, s in enumerate(self.sets):
            els = s.elements
            hit = seen[els] >= 0
            if hit.any():
                x = int(els[np.argmax(hit)])
                return int(seen[x]), j, x
            seen[els] = j
        return None

    def external(self, i: int) -> DiffMultiset:
        """``sum_{j != i} delta(A_i, A_j)``."""
        others = np.zeros(self.group.n, dtype=np.int64)
        for j, s in enumerate(self.sets):
            if j != i:
                others += s.mask
        counts = difference_counts(self.group, self.sets[i].mask.astype(np.int64), others)
        return DiffMultiset(self.group, counts)


@dataclass
class FamilyReport:
    """Outcome of a family verifier.

    ``achieved[i]`` is the largest coefficient of ``sum_{j!=i} delta(A_i, A_j)``
    off zero and ``zero_coeffs[i]`` its coefficient at 0.
    """

    kind: str
    ok: bool
    n: int
    m: int
    ks: tuple
    params: object | None = None
    achieved: tuple = ()
    minimum: tuple = ()
    zero_coeffs: tuple = ()
    reason: str | None = None
    counterexample: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


# --- single-set verifiers ---------------------------------------------------


def verify_ds(D: ElementSet) -> DsParams | None:
    """Return ``(n, k, lambda)`` when D is a difference set."""
    if D.k < 1:
        raise DegenerateSet("empty set")
    counts = delta(D, D).counts
    off = counts[1:]
    if off.size and not (off == off[0]).all():
        return None
    return DsParams(D.group.n, D.k, int(off[0]) if off.size else 0)


def verify_pds(D: ElementSet) -> PdsParams | None:
    """Return ``(n, k, lambda, mu)`` when D (with 0 not in D) is a partial difference set.

    When ``G - D - {0}`` is empty mu is vacuous and reported as 0.
    """
    if 0 in D:
        raise ZeroInSet("a PDS may not contain 0")
    if D.k < 1:
        raise DegenerateSet("empty set")
    counts = delta(D, D).counts
    on = counts[D.mask]
    rest_mask = ~D.mask
    rest_mask[0] = False
    off = counts[rest_mask]
    if not (on == on[0]).all():
        return None
    if off.size and not (off == off[0]).all():
        return None
    return PdsParams(D.group.n, D.k, int(on[0]), int(off[0]) if off.size else 0)


# --- family verifiers ------------------------------------------------------


def _base_report(kind: str, F: Family) -> FamilyReport:
    return FamilyReport(kind=kind, ok=False, n=F.group.n, m=F.m, ks=F.ks)


def _accumulate(F: Family, rep: FamilyReport) -> list[np.ndarray]:
    exts = [F.external(i).counts for i in range(F.m)]
    rep.achieved = tuple(int(c[1:].max()) if c.size > 1 else 0 for c in exts)
    rep.minimum = tuple(int(c[1:].min()) if c.size > 1 else 0 for c in exts)
    rep.zero_coeffs = tuple(int(c[0]) for c in exts)
    return exts


def verify_gsedf(F: Family) -> FamilyReport:
    rep = _base_report("GSEDF", F)
    if F.m < 2:
        rep.reason = "a family needs m >= 2"
        return rep
    overlap = F.first_overlap()
    if overlap is not None:
        i, j, x = overlap
        rep.reason = f"sets {F.labels[i]} and {F.labels[j]} share element {x}"
        rep.counterexample = {"index": j, "element": x}
        return rep
    exts = _accumulate(F, rep)
    total = sum(F.ks)
    lams = []
    for i, c in enumerate(exts):
        off = c[1:]
        if (off == off[0]).all():
            lams.append(int(off[0]))
            continue
        forced = Fraction(F.ks[i] * (total - F.ks[i]), F.group.n - 1)
        target = int(forced) if forced.denominator == 1 else int(off[0])
        bad = int(np.argmax(off != target)) + 1
        rep.reason = f"{F.labels[i]}: coefficient {int(c[bad])} at element {bad} is not flat"
        rep.counterexample = {"index": i, "element": bad, "count": int(c[bad])}
        return rep
    rep.ok = True
    rep.params = GsedfParams(F.group.n, F.m, F.ks, tuple(lams))
    return rep


def verify_sedf(F: Family) -> FamilyReport:
    rep = verify_gsedf(F)
    rep.kind = "SEDF"
    if not rep.ok:
        return rep
    g = rep.params
    if len(set(g.ks)) != 1:
        rep.ok, rep.params = False, None
        rep.reason = f"set sizes differ: {list(g.ks)}"
        return rep
    if len(set(g.lams)) != 1:
        rep.ok, rep.params = False, None
        rep.reason = f"multiplicities differ: {list(g.lams)}"
        return rep
    rep.params = SedfParams(g.n, g.m, g.ks[0], g.lams[0])
    return rep


def verify_bgsedf(F: Family, bounds: Sequence[int] | None = None) -> FamilyReport:
    """Check ``sum_{j!=i} delta(A_i, A_j) <= bounds[i] (G - {0})`` coefficientwise.

    Without ``bounds`` the tightest valid bounds (the achieved maxima) are
    reported and the check is only that every coefficient at 0 vanishes.
    """
    rep = _base_report("BGSEDF", F)
    if F.m < 2:
        rep.reason = "a family needs m >= 2"
        return rep
    exts = _accumulate(F, rep)
    if bounds is None:
        bounds = rep.achieved
    bounds = tuple(int(b) for b in bounds)
    if len(bounds) != F.m:
        raise SedfError(f"expected {F.m} bounds, got {len(bounds)}")
    for i, c in enumerate(exts):
        if c[0] != 0:
            rep.reason = f"{F.labels[i]}: coefficient {int(c[0])} at 0 (sets overlap)"
            rep.counterexample = {"index": i, "element": 0, "count": int(c[0])}
            return rep
        if rep.achieved[i] > bounds[i]:
            bad = int(np.argmax(c[1:] > bounds[i])) + 1
            rep.reason = f"{F.labels[i]}: coefficient {int(c[bad])} at element {bad} exceeds {bounds[i]}"
            rep.counterexample = {"index": i, "element": bad, "count": int(c[bad])}
            return rep
    rep.ok = True
    rep.params = BgsedfParams(F.group.n, F.m, F.ks, bounds)
    return rep


# --- complements ------------------------------------------------------------


@dataclass(frozen=True)
class Complement:
    set: ElementSet
    predicted: object
    verified: object

    @property
    def agrees(self) -> bool:
        return self.predicted == self.verified

    def __iter__(self):
        return iter((self.set, self.predicted, self.verified))


def complement_ds(D: ElementSet) -> Complement:
    """``G - D`` with parameters ``(n, n-k, n-2k+lambda)``, re-verified."""
    params = verify_ds(D)
    if params is None:
        raise NotADs(f"{D!r} is not a difference set")
    n, k, lam = params.astuple()
    if k == n:
        raise DegenerateSet("complement of the whole group is empty")
    comp = D.complement()
    return Complement(comp, DsParams(n, n - k, n - 2 * k + lam), verify_ds(comp))


def complement_pds(D: ElementSet) -> Complement:
    """``G - D - {0}`` with parameters ``(n, n-k-1, n-2k+mu-2, n-2k+lambda)``."""
    params = verify_pds(D)
    if params is None:
        raise NotAPds(f"{D!r} is not a partial difference set")
    if not D.is_symmetric():
        raise NotSymmetric("complement rule needs -D == D")
    n, k, lam, mu = params.astuple()
    comp = D.complement().without_zero()
    if comp.k == 0:
        raise DegenerateSet("complement is empty")
    return Complement(comp, PdsParams(n, n - k - 1, n - 2 * k + mu - 2, n - 2 * k + lam), verify_pds(comp))


# --- partition equivalences --------------------------------------------------


@dataclass
class PartitionReport:
    case: str  # "partition-of-G" or "partition-of-G-minus-0"
    gsedf: FamilyReport
    per_set: list  # DsParams / PdsParams / None per set
    sets_ok: bool
    translation_ok: bool
    agree: bool
    detail: str = ""


def check_partition_characterisation(F: Family) -> PartitionReport:
    """Evaluate both sides of the DS / PDS characterisations independently.

    A partition of G is a GSEDF iff every part is an ``(n, k_i, k_i - lambda_i)``
    difference set.  A partition of ``G - {0}`` is a GSEDF iff every part is an
    ``(n, k_i, k_i - lambda_i - 1, k_i - lambda_i)`` partial difference set.
    """
    if F.m < 2:
        raise NotAPartition("need at least two parts")
    if F.first_overlap() is not None:
        raise NotAPartition("parts overlap")
    union = F.union()
    if union.k == F.group.n:
        case = "partition-of-G"
    elif union.k == F.group.n - 1 and 0 not in union:
        case = "partition-of-G-minus-0"
    else:
        raise NotAPartition("family covers neither G nor G - {0}")

    rep = verify_gsedf(F)
    per_set = []
    translation_ok = True
    details = []
    if case == "partition-of-G":
        for s in F.sets:
            per_set.append(verify_ds(s))
        sets_ok = all(p is not None for p in per_set)
        if sets_ok and rep.ok:
            for i, p in enumerate(per_set):
                if rep.params.lams[i] != p.k - p.lam:
                    translation_ok = False
                    details.append(f"{F.labels[i]}: lambda {rep.params.lams[i]} != k - lambda' {p.k - p.lam}")
    else:
        for s in F.sets:
            per_set.append(verify_pds(s))
        sets_ok = all(p is not None and p.lam == p.mu - 1 for p in per_set)
        if sets_ok and rep.ok:
            for i, p in enumerate(per_set):
                lam = rep.params.lams[i]
                if p.lam != p.k - lam - 1 or p.mu != p.k - lam:
                    translation_ok = False
                    details.append(f"{F.labels[i]}: (lambda', mu') = ({p.lam}, {p.mu}) vs lambda {lam}")
    agree = (rep.ok == sets_ok) and translation_ok
    return PartitionReport(case, rep, per_set, sets_ok, translation_ok, agree, "; ".join(details))


# --- feasibility and classification ------------------------------------------


def feasibility(n: int, m: int, k) -> int | tuple[int, ...] | None:
    """Forced lambda (or lambda vector) from the counting identities, if integral.

    For an int ``k``: ``(m-1) k^2 = lambda (n-1)``.  For a sequence of sizes:
    ``k_i (K - k_i) = lambda_i (n-1)`` with ``K = sum k_i`` (``m`` must equal
    the number of sizes).
    """
    if n < 2 or m < 2:
        return None
    if isinstance(k, int):
        if k < 1:
            return None
        lam, r = divmod((m - 1) * k * k, n - 1)
        return lam if r == 0 else None
    ks = [int(x) for x in k]
    if len(ks) != m or min(ks) < 1:
        return None
    total = sum(ks)
    lams = []
    for ki in ks:
        lam, r = divmod(ki * (total - ki), n - 1)
        if r:
            return None
        lams.append(lam)
    return tuple(lams)


class PdsType(enum.Enum):
    PALEY_TYPE_I = "PaleyTypeI"
    TYPE_243 = "Type243"
    OTHER = "Other"


def classify_pds_type(params: PdsParams) -> PdsType:
    """Which branch of the ``lambda = mu - 1`` symmetric PDS classification applies."""
    n, k, lam, mu = params.astuple()
    if lam != mu - 1:
        return PdsType.OTHER
    if (n, k, lam, mu) == (243, 22, 1, 2):
        return PdsType.TYPE_243
    if n % 4 == 1 and 2 * k == n - 1 and 4 * lam == n - 5 and 4 * mu == n - 1:
        return PdsType.PALEY_TYPE_I
    return PdsType.OTHER
