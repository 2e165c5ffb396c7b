"""Catalog of cyclotomic and structural constructions.

Every builder returns a :class:`Construction`: one or more families plus the
parameters each is claimed to have.  :func:`verify_construction` recomputes
everything and reports claimed-vs-computed differences without aborting.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Sequence

from . import numtheory as nt
from .cyclotomy import CyclotomicSystem, build_cyclotomy
from .designs import (
    Family,
    classify_pds_type,
    verify_bgsedf,
    verify_ds,
    verify_gsedf,
    verify_pds,
    verify_sedf,
)
from .errors import ConditionNotMet, NotADs, NotAPds, NotDisjoint, NotSubsetOfClass
from .groups import ElementSet, Group, field as make_field

# octic examples above this order only verify with deep=True
DEEP_THRESHOLD = 20000


@dataclass
class Claim:
    kind: str  # DS, PDS, SEDF, GSEDF or BGSEDF
    family: str
    params: tuple | None
    index: int | None = None  # set index for DS / PDS claims
    note: str = ""


@dataclass
class Construction:
    recipe: str
    group: Group
    families: dict[str, Family]
    claims: list[Claim]
    options: dict = field(default_factory=dict)
    deep_only: bool = False

    @property
    def family(self) -> Family:
        """The first (primary) family."""
        return next(iter(self.families.values()))


@dataclass
class ClaimResult:
    claim: Claim
    ok: bool  # the object really is of the claimed kind
    computed: tuple | None
    mismatch: bool  # claimed parameters differ from computed ones
    reason: str | None = None
    extra: dict = field(default_factory=dict)


@dataclass
class ConstructionReport:
    construction: Construction
    results: list[ClaimResult]
    skipped: bool = False

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def mismatches(self) -> list[ClaimResult]:
        return [r for r in self.results if r.mismatch]


# --- side conditions -----------------------------------------------------------


def _square_root(x) -> int | None:
    if isinstance(x, Fraction):
        if x.denominator != 1:
            return None
        x = int(x)
    if x < 0 or not nt.is_square(x):
        return None
    return isqrt(x)


def _quadratic_witness(q: int, offset: int, coeff: int) -> int | None:
    """t >= 0 with ``q == offset + coeff * t^2``."""
    rest = q - offset
    if rest < 0 or rest % coeff:
        return None
    return _square_root(rest // coeff)


def paley_condition(q: int) -> dict | None:
    return {} if nt.prime_power(q) and q % 4 == 1 else None


def quadratic_gsedf_condition(q: int) -> dict | None:
    return {} if nt.prime_power(q) and q % 4 == 3 else None


def quartic_sedf_condition(q: int) -> dict | None:
    t = _quadratic_witness(q, 1, 16)
    return {"t": t} if t and nt.prime_power(q) else None


def quartic_residue_condition(q: int) -> dict | None:
    t = _quadratic_witness(q, 1, 4)
    return {"t": t} if t and t % 2 and nt.prime_power(q) else None


def quartic_plus_zero_condition(q: int) -> dict | None:
    t = _quadratic_witness(q, 9, 4)
    return {"t": t} if t and t % 2 and nt.prime_power(q) else None


def sextic_condition(q: int) -> dict | None:
    t = _quadratic_witness(q, 1, 108)
    return {"t": t} if t and nt.prime_power(q) else None


def octic_residue_condition(q: int) -> dict | None:
    y = _quadratic_witness(q, 9, 64)
    b = _quadratic_witness(q, 1, 8)
    if y is None or b is None or y % 2 == 0 or not nt.prime_power(q):
        return None
    return {"y": y, "b": b}


def octic_plus_zero_condition(q: int) -> dict | None:
    y = _quadratic_witness(q, 441, 64)
    b = _quadratic_witness(q, 49, 8)
    if y is None or b is None or not nt.prime_power(q):
        return None
    return {"y": y, "b": b}


def semiprimitive_condition(q: int) -> dict | None:
    pm = nt.prime_power(q)
    if pm is None or pm[1] % 2:
        return None
    return {"p": pm[0], "l": pm[1] // 2, "e": isqrt(q) + 1}


def _require(cond: dict | None, what: str, q: int) -> dict:
    if cond is None:
        raise ConditionNotMet(f"q={q} does not satisfy {what}")
    return cond


# --- helpers --------------------------------------------------------------------


def _classes(q: int, e: int) -> CyclotomicSystem:
    return build_cyclotomy(make_field(q), e)


def _frac(num: int, den: int):
    x = Fraction(num, den)
    return int(x) if x.denominator == 1 else x


def _gsedf_tuple(n, ks, lams) -> tuple:
    return (n, len(ks), tuple(ks), tuple(lams))


# --- builders --------------------------------------------------------------------


def paley_sedf(q: int) -> Construction:
    """The two quadratic classes of F_q, q = 1 (mod 4)."""
    _require(paley_condition(q), "q = 1 (mod 4)", q)
    sys = _classes(q, 2)
    fam = Family(sys.field, list(sys.classes), ["C0", "C1"])
    claim = Claim("SEDF", "pair", (q, 2, (q - 1) // 2, _frac(q - 1, 4)))
    return Construction("paley_sedf", sys.field, {"pair": fam}, [claim], {"q": q})


def quadratic_gsedf(q: int, which: int = 0) -> Construction:
    """``{C_w, C_{1-w} + {0}}`` for q = 3 (mod 4)."""
    _require(quadratic_gsedf_condition(q), "q = 3 (mod 4)", q)
    if which not in (0, 1):
        raise ConditionNotMet("which must be 0 or 1")
    sys = _classes(q, 2)
    a, b = sys.classes[which], sys.classes[1 - which].with_zero()
    fam = Family(sys.field, [a, b], [f"C{which}", f"C{1 - which}+{{0}}"])
    lam = _frac(q + 1, 4)
    claim = Claim("GSEDF", "pair", _gsedf_tuple(q, [(q - 1) // 2, (q + 1) // 2], [lam, lam]))
    return Construction("quadratic_gsedf", sys.field, {"pair": fam}, [claim], {"q": q, "which": which})


def quartic_sedf(q: int, pair: int = 0) -> Construction:
    """``{C_0, C_2}`` (or ``{C_1, C_3}``) of order 4 for q = 1 + 16 t^2."""
    _require(quartic_sedf_condition(q), "q = 1 + 16t^2", q)
    if pair not in (0, 1):
        raise ConditionNotMet("pair must be 0 or 1")
    sys = _classes(q, 4)
    fam = Family(sys.field, [sys.classes[pair], sys.classes[pair + 2]], [f"C{pair}", f"C{pair + 2}"])
    claim = Claim("SEDF", "pair", (q, 2, (q - 1) // 4, _frac(q - 1, 16)))
    return Construction("quartic_sedf", sys.field, {"pair": fam}, [claim], {"q": q, "pair": pair})


def quartic_ds_gsedf(q: int, variant: str = "residue", index: int = 0) -> Construction:
    """Biquadratic residue difference sets and the GSEDFs they induce.

    ``residue`` (q = 1 + 4t^2, t odd): C_i is a DS; emits ``{C_i, F_q - C_i}``
    and the five-part partition ``{C_0, .., C_3, {0}}``.  ``residue_plus_zero``
    (q = 9 + 4t^2, t odd): C_i + {0} is a DS; emits it with its complement.
    """
    index %= 4
    if variant == "residue":
        _require(quartic_residue_condition(q), "q = 1 + 4t^2 with t odd", q)
        sys = _classes(q, 4)
        ci = sys.classes[index]
        pair = Family(sys.field, [ci, ci.complement()], [f"C{index}", f"F-C{index}"])
        zero = ElementSet.of(sys.field, [0])
        parts = Family(sys.field, list(sys.classes) + [zero], ["C0", "C1", "C2", "C3", "{0}"])
        k = (q - 1) // 4
        lam = _frac(3 * q + 1, 16)
        stated = _frac(3 * q - 3, 16)
        claims = [
            Claim("DS", "pair", (q, k, _frac(q - 5, 16)), index=0),
            Claim("GSEDF", "pair", _gsedf_tuple(q, [k, (3 * q + 1) // 4], [lam, lam])),
            Claim("GSEDF", "partition", _gsedf_tuple(q, [k] * 4 + [1], [stated] * 4 + [1]),
                  note="stated lambda_i = (3q-3)/16 on the class slots; verification reports the true value"),
        ]
        fams = {"pair": pair, "partition": parts}
    elif variant == "residue_plus_zero":
        _require(quartic_plus_zero_condition(q), "q = 9 + 4t^2 with t odd", q)
        sys = _classes(q, 4)
        d = sys.classes[index].with_zero()
        pair = Family(sys.field, [d, d.complement()], [f"C{index}+{{0}}", f"F-C{index}-{{0}}"])
        lam = _frac(3 * q + 9, 16)
        claims = [
            Claim("DS", "pair", (q, (q + 3) // 4, _frac(q + 3, 16)), index=0),
            Claim("GSEDF", "pair", _gsedf_tuple(q, [(q + 3) // 4, (3 * q - 3) // 4], [lam, lam])),
        ]
        fams = {"pair": pair}
    else:
        raise ConditionNotMet(f"unknown variant {variant!r}")
    return Construction("quartic_ds_gsedf", sys.field, fams, claims,
                        {"q": q, "variant": variant, "index": index})


def sextic_sedf(q: int, pair: int = 0) -> Construction:
    """``{C_i, C_{i+3}}`` of order 6 for q = 1 + 108 t^2."""
    _require(sextic_condition(q), "q = 1 + 108t^2", q)
    if pair not in (0, 1, 2):
        raise ConditionNotMet("pair must be 0, 1 or 2")
    sys = _classes(q, 6)
    fam = Family(sys.field, [sys.classes[pair], sys.classes[pair + 3]], [f"C{pair}", f"C{pair + 3}"])
    claim = Claim("SEDF", "pair", (q, 2, (q - 1) // 6, _frac(q - 1, 36)))
    return Construction("sextic_sedf", sys.field, {"pair": fam}, [claim], {"q": q, "pair": pair})


def octic_constructions(q: int, variant: str = "residue", index: int = 0) -> Construction:
    """Octic residue difference sets and the GSEDFs they induce.

    ``residue``: q = 9 + 64y^2 = 1 + 8b^2 with y odd.  ``residue_plus_zero``:
    q = 441 + 64y^2 = 49 + 8b^2.
    """
    index %= 8
    if variant == "residue":
        _require(octic_residue_condition(q), "q = 9 + 64y^2 = 1 + 8b^2 with y odd", q)
        sys = _classes(q, 8)
        ci = sys.classes[index]
        pair = Family(sys.field, [ci, ci.complement()], [f"C{index}", f"F-C{index}"])
        zero = ElementSet.of(sys.field, [0])
        parts = Family(sys.field, list(sys.classes) + [zero], [f"C{i}" for i in range(8)] + ["{0}"])
        k = (q - 1) // 8
        lam = _frac(7 * q + 1, 64)
        claims = [
            Claim("DS", "pair", (q, k, _frac(q - 9, 64)), index=0),
            Claim("GSEDF", "pair", _gsedf_tuple(q, [k, (7 * q + 1) // 8], [lam, lam])),
            Claim("GSEDF", "partition", _gsedf_tuple(q, [k] * 8 + [1], [lam] * 8 + [1])),
        ]
        fams = {"pair": pair, "partition": parts}
    elif variant == "residue_plus_zero":
        _require(octic_plus_zero_condition(q), "q = 441 + 64y^2 = 49 + 8b^2", q)
        sys = _classes(q, 8)
        d = sys.classes[index].with_zero()
        pair = Family(sys.field, [d, d.complement()], [f"C{index}+{{0}}", f"F-C{index}-{{0}}"])
        lam = _frac(7 * (q + 7), 64)
        claims = [
            Claim("DS", "pair", (q, (q + 7) // 8, _frac(q + 7, 64)), index=0),
            Claim("GSEDF", "pair", _gsedf_tuple(q, [(q + 7) // 8, 7 * (q - 1) // 8], [lam, lam])),
        ]
        fams = {"pair": pair}
    else:
        raise ConditionNotMet(f"unknown variant {variant!r}")
    return Construction("octic_constructions", sys.field, fams, claims,
                        {"q": q, "variant": variant, "index": index},
                        deep_only=q > DEEP_THRESHOLD)


def order11_sedf_243() -> Construction:
    """The eleven order-11 classes of F_{3^5}: an SEDF whose parts are PDSs."""
    sys = _classes(243, 11)
    fam = Family(sys.field, list(sys.classes), [f"C{i}" for i in range(11)])
    claims = [Claim("SEDF", "classes", (243, 11, 22, 20))]
    claims += [Claim("PDS", "classes", (243, 22, 1, 2), index=i) for i in range(11)]
    return Construction("order11_sedf_243", sys.field, {"classes": fam}, claims, {"q": 243})


def _pick_subset(sys: CyclotomicSystem, i: int, spec) -> ElementSet:
    """``spec``: None for the whole class, an int k for its k smallest elements,
    or explicit elements (which must lie in the class)."""
    cls = sys.classes[i]
    if spec is None:
        return cls
    if isinstance(spec, int):
        if not 1 <= spec <= cls.k:
            raise NotSubsetOfClass(f"cannot take {spec} elements of C{i} (size {cls.k})")
        return ElementSet.of(sys.field, cls.tolist()[:spec])
    s = ElementSet.of(sys.field, spec)
    if s.k == 0:
        raise NotSubsetOfClass("subset must be nonempty")
    if not s.issubset(cls):
        bad = [x for x in s if x not in cls]
        raise NotSubsetOfClass(f"{bad[0]} is not in C{i}")
    return s


def semiprimitive_bgsedf(q: int, i: int = 0, j: int = 1, s_i=None, s_j=None,
                         with_zero: bool = False) -> Construction:
    """Subsets of two distinct classes of order sqrt(q)+1 give a (1,1)-BGSEDF."""
    cond = _require(semiprimitive_condition(q), "q = p^(2l)", q)
    e = cond["e"]
    i, j = i % e, j % e
    if i == j:
        raise ConditionNotMet("class indices must differ")
    sys = _classes(q, e)
    a = _pick_subset(sys, i, s_i)
    b = _pick_subset(sys, j, s_j)
    label = f"S{i}"
    if with_zero:
        a, label = a.with_zero(), f"S{i}+{{0}}"
    fam = Family(sys.field, [a, b], [label, f"S{j}"])
    claim = Claim("BGSEDF", "pair", (q, 2, (a.k, b.k), (1, 1)))
    return Construction("semiprimitive_bgsedf", sys.field, {"pair": fam}, [claim],
                        {"q": q, "e": e, "i": i, "j": j, "with_zero": with_zero})


def singleton_gsedf_extension(group: Group, sets: Sequence[ElementSet],
                              labels: Sequence[str] | None = None) -> Construction:
    """Pad disjoint difference sets with every leftover element as a singleton."""
    sets = list(sets)
    labels = list(labels) if labels else [f"A{i + 1}" for i in range(len(sets))]
    lams = []
    used = ElementSet.empty(group)
    for s, lab in zip(sets, labels):
        if not s.isdisjoint(used):
            raise NotDisjoint(f"{lab} overlaps an earlier set")
        used = used | s
        params = verify_ds(s)
        if params is None:
            raise NotADs(f"{lab} is not a difference set")
        lams.append(params.k - params.lam)
    rest = used.complement().tolist()
    all_sets = sets + [ElementSet.of(group, [g]) for g in rest]
    all_labels = labels + [f"{{{g}}}" for g in rest]
    fam = Family(group, all_sets, all_labels)
    ks = [s.k for s in sets] + [1] * len(rest)
    claim = Claim("GSEDF", "padded", _gsedf_tuple(group.n, ks, lams + [1] * len(rest)))
    return Construction("singleton_gsedf_extension", group, {"padded": fam}, [claim])


def pds_pair_gsedf(D: ElementSet, label: str = "D") -> Construction:
    """``{D, G - D - {0}}`` for a symmetric PDS with lambda = mu - 1."""
    if 0 in D:
        raise ConditionNotMet("D must not contain 0")
    params = verify_pds(D)
    if params is None:
        raise NotAPds(f"{label} is not a partial difference set")
    n, k, lam, mu = params.astuple()
    if lam != mu - 1:
        raise ConditionNotMet(f"need lambda = mu - 1, got ({lam}, {mu})")
    if not D.is_symmetric():
        raise ConditionNotMet(f"{label} is not closed under negation")
    comp = D.complement().without_zero()
    fam = Family(D.group, [D, comp], [label, f"G-{label}-{{0}}"])
    t = k - lam - 1
    claims = [
        Claim("PDS", "pair", params.astuple(), index=0),
        Claim("GSEDF", "pair", _gsedf_tuple(n, [k, n - k - 1], [t, t])),
    ]
    return Construction("pds_pair_gsedf", D.group, {"pair": fam}, claims)


# --- verification --------------------------------------------------------------


def _computed_tuple(kind: str, params) -> tuple | None:
    return None if params is None else params.astuple()


def verify_claim(c: Construction, claim: Claim) -> ClaimResult:
    fam = c.families[claim.family]
    if claim.kind in ("DS", "PDS"):
        s = fam.sets[claim.index]
        params = verify_ds(s) if claim.kind == "DS" else verify_pds(s)
        computed = _computed_tuple(claim.kind, params)
        extra = {}
        if claim.kind == "PDS" and params is not None:
            extra["pds_type"] = classify_pds_type(params).value
        ok = params is not None
        reason = None if ok else f"{fam.labels[claim.index]} is not a {claim.kind}"
        mismatch = ok and claim.params is not None and tuple(claim.params) != computed
        return ClaimResult(claim, ok, computed, mismatch, reason, extra)

    if claim.kind == "SEDF":
        rep = verify_sedf(fam)
    elif claim.kind == "GSEDF":
        rep = verify_gsedf(fam)
    elif claim.kind == "BGSEDF":
        bounds = claim.params[3] if claim.params is not None else None
        rep = verify_bgsedf(fam, bounds)
    else:
        raise ValueError(f"unknown claim kind {claim.kind!r}")
    computed = _computed_tuple(claim.kind, rep.params)
    extra = {"achieved": list(rep.achieved)}
    mismatch = False
    if rep.ok and claim.params is not None:
        if claim.kind == "BGSEDF":
            mismatch = tuple(claim.params[:3]) != computed[:3]
        else:
            mismatch = tuple(claim.params) != computed
    return ClaimResult(claim, rep.ok, computed, mismatch, rep.reason, extra)


def verify_construction(c: Construction, deep: bool = False) -> ConstructionReport:
    if c.deep_only and not deep:
        return ConstructionReport(c, [], skipped=True)
    return ConstructionReport(c, [verify_claim(c, cl) for cl in c.claims])


# --- catalog ----------------------------------------------------------------------


@dataclass(frozen=True)
class Recipe:
    name: str
    condition: str
    applicable: Callable[[int], dict | None]
    builder: Callable[..., Construction]
    options: tuple[str, ...] = ()


def _singleton_by_classes(q: int, e: int = 4, with_zero: bool = False) -> Construction:
    sys = _classes(q, e)
    sets = [c.with_zero() if with_zero and i == 0 else c for i, c in enumerate(sys.classes)]
    labels = [f"C{i}" + ("+{0}" if with_zero and i == 0 else "") for i in range(e)]
    c = singleton_gsedf_extension(sys.field, sets, labels)
    c.options = {"q": q, "e": e}
    return c


def _pds_pair_by_class(q: int, e: int = 2, index: int = 0) -> Construction:
    sys = _classes(q, e)
    c = pds_pair_gsedf(sys.classes[index % e], f"C{index % e}")
    c.options = {"q": q, "e": e, "index": index % e}
    return c


def _any_field(q: int) -> dict | None:
    return {} if nt.prime_power(q) else None


CATALOG: dict[str, Recipe] = {r.name: r for r in [
    Recipe("paley_sedf", "q = 1 (mod 4)", paley_condition, paley_sedf),
    Recipe("quadratic_gsedf", "q = 3 (mod 4)", quadratic_gsedf_condition, quadratic_gsedf, ("which",)),
    Recipe("quartic_sedf", "q = 1 + 16t^2", quartic_sedf_condition, quartic_sedf, ("pair",)),
    Recipe("quartic_ds_gsedf", "residue: q = 1 + 4t^2, t odd; residue_plus_zero: q = 9 + 4t^2, t odd",
           lambda q: quartic_residue_condition(q) or quartic_plus_zero_condition(q),
           quartic_ds_gsedf, ("variant", "index")),
    Recipe("sextic_sedf", "q = 1 + 108t^2", sextic_condition, sextic_sedf, ("pair",)),
    Recipe("octic_constructions",
           "residue: q = 9 + 64y^2 = 1 + 8b^2, y odd; residue_plus_zero: q = 441 + 64y^2 = 49 + 8b^2",
           lambda q: octic_residue_condition(q) or octic_plus_zero_condition(q),
           octic_constructions, ("variant", "index")),
    Recipe("order11_sedf_243", "q = 243 only", lambda q: {} if q == 243 else None,
           lambda q=243: order11_sedf_243() if q == 243 else _require(None, "q = 243", q)),
    Recipe("semiprimitive_bgsedf", "q = p^(2l), classes of order sqrt(q)+1", semiprimitive_condition,
           semiprimitive_bgsedf, ("i", "j", "s_i", "s_j", "with_zero")),
    Recipe("singleton_gsedf_extension", "cyclotomic classes of order e that are difference sets",
           _any_field, _singleton_by_classes, ("e", "with_zero")),
    Recipe("pds_pair_gsedf", "a class of order e that is a symmetric PDS with lambda = mu - 1",
           _any_field, _pds_pair_by_class, ("e", "index")),
]}


def build(recipe: str, q: int, **options) -> Construction:
    try:
        r = CATALOG[recipe]
    except KeyError:
        raise ConditionNotMet(f"unknown recipe {recipe!r}") from None
    opts = {k: v for k, v in options.items() if v is not None and k in r.options}
    return r.builder(q, **opts)


def applicable_recipes(q: int) -> list[str]:
    return [name for name, r in CATALOG.items() if r.applicable(q) is not None]
