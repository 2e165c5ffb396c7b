"""Finite abelian groups: cyclic Z_n and the additive group of F_{p^m}.

Elements are plain integers in ``[0, n)``.  For a field the element
``a_0 + a_1 x + ... + a_{m-1} x^{m-1}`` is encoded as ``sum a_i p^i``, so the
identity is always 0 and a subset is a flat boolean mask of length n.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import numtheory as nt
from .errors import (
    GroupMismatch,
    NotAField,
    NotPrime,
    NotPrimitive,
    OrderTooLarge,
    ReducibleModulus,
    SedfError,
    ZeroInverse,
)

DEFAULT_ORDER_CAP = 2**20


def order_cap() -> int:
    """Largest group order accepted; ``SEDF_ORDER_CAP`` overrides the default."""
    raw = os.environ.get("SEDF_ORDER_CAP")
    return int(raw) if raw else DEFAULT_ORDER_CAP


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # "cyclic" or "field"
    n: int | None = None
    p: int | None = None
    m: int | None = None
    modulus: tuple[int, ...] | None = None

    @classmethod
    def cyclic(cls, n: int) -> "GroupSpec":
        return cls("cyclic", n=n)

    @classmethod
    def field(cls, p: int, m: int = 1, modulus: Sequence[int] | None = None) -> "GroupSpec":
        return cls("field", p=p, m=m, modulus=None if modulus is None else tuple(modulus))

    @classmethod
    def from_dict(cls, d: dict) -> "GroupSpec":
        kind = d.get("kind")
        if kind == "cyclic":
            return cls.cyclic(int(d["n"]))
        if kind == "field":
            mod = d.get("modulus")
            return cls.field(int(d["p"]), int(d.get("m", 1)), mod)
        raise SedfError(f"unknown group kind {kind!r}")

    @property
    def order(self) -> int:
        return self.n if self.kind == "cyclic" else self.p**self.m


class Group:
    """Immutable table-backed group.  Build through :func:`build_group`."""

    def __init__(self, spec: GroupSpec, modulus=None, theta=None, antilog=None):
        self.spec = spec
        self.kind = spec.kind
        self.n = spec.order
        self.p = spec.p
        self.m = spec.m
        self.modulus = modulus
        self.theta = theta
        self.antilog = antilog
        if antilog is not None:
            log = np.full(self.n, -1, dtype=np.int64)
            log[antilog] = np.arange(self.n - 1, dtype=np.int64)
            self.log = log
        else:
            self.log = None
        if self.kind == "field" and self.m > 1 and self.p != 2:
            pw = self.p ** np.arange(self.m, dtype=np.int64)
            self._weights = pw
            self._digits = (np.arange(self.n, dtype=np.int64)[:, None] // pw) % self.p
        else:
            self._weights = None
            self._digits = None
        self._neg = self.sub_vec(0, np.arange(self.n, dtype=np.int64))
        for arr in (self.antilog, self.log, self._neg, self._digits):
            if arr is not None:
                arr.setflags(write=False)

    # -- identity / description ---------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind == "field"

    @property
    def order(self) -> int:
        return self.n

    def descriptor(self) -> dict:
        if self.kind == "cyclic":
            return {"kind": "cyclic", "n": self.n}
        return {"kind": "field", "p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def name(self) -> str:
        if self.kind == "cyclic":
            return f"Z_{self.n}"
        return f"F_{self.p}" if self.m == 1 else f"F_{self.p}^{self.m}"

    def __repr__(self) -> str:
        return f"Group({self.name()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Group):
            return NotImplemented
        return self.descriptor() == other.descriptor() and self.theta == other.theta

    def __hash__(self) -> int:
        return hash((self.kind, self.n, self.modulus, self.theta))

    def elements(self) -> range:
        return range(self.n)

    def _check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.n:
            raise SedfError(f"{a} is not an element of {self.name()}")
        return a

    # -- additive structure ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        a, b = self._check(a), self._check(b)
        if self.kind == "cyclic" or self.m == 1:
            return (a + b) % self.n
        if self.p == 2:
            return a ^ b
        return int(((self._digits[a] + self._digits[b]) % self.p) @ self._weights)

    def neg(self, a: int) -> int:
        return int(self._neg[self._check(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def add_vec(self, xs: np.ndarray, b) -> np.ndarray:
        """Elementwise ``x + b``; ``b`` may be a scalar or a broadcastable array."""
        xs = np.asarray(xs, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.kind == "cyclic" or self.m == 1:
            return (xs + b) % self.n
        if self.p == 2:
            return xs ^ b
        return ((self._digits[xs] + self._digits[b]) % self.p) @ self._weights

    def sub_vec(self, a, ys: np.ndarray) -> np.ndarray:
        """Elementwise ``a - y``; ``a`` may be a scalar or a broadcastable array."""
        ys = np.asarray(ys, dtype=np.int64)
        a = np.asarray(a, dtype=np.int64)
        if self.kind == "cyclic" or self.m == 1:
            return (a - ys) % self.n
        if self.p == 2:
            return a ^ ys
        return ((self._digits[a] - self._digits[ys]) % self.p) @ self._weights

    def neg_vec(self, xs: np.ndarray) -> np.ndarray:
        return self._neg[np.asarray(xs, dtype=np.int64)]

    def subtraction_table(self) -> list[list[int]]:
        """``table[a][b] == a - b`` as nested lists (for small search groups)."""
        all_ = np.arange(self.n, dtype=np.int64)
        return [self.sub_vec(a, all_).tolist() for a in range(self.n)]

    # -- multiplicative structure (fields only) -------------------------------

    def _need_field(self) -> None:
        if self.kind != "field":
            raise NotAField(f"{self.name()} has no multiplication")

    def mul(self, a: int, b: int) -> int:
        self._need_field()
        a, b = self._check(a), self._check(b)
        if a == 0 or b == 0:
            return 0
        return int(self.antilog[(self.log[a] + self.log[b]) % (self.n - 1)])

    def inv(self, a: int) -> int:
        self._need_field()
        a = self._check(a)
        if a == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return int(self.antilog[(-self.log[a]) % (self.n - 1)])

    def power(self, a: int, e: int) -> int:
        self._need_field()
        a = self._check(a)
        if a == 0:
            if e < 0:
                raise ZeroInverse("0 has no multiplicative inverse")
            return 0 if e else 1
        return int(self.antilog[(self.log[a] * e) % (self.n - 1)])

    def mul_vec(self, xs: np.ndarray, b: int) -> np.ndarray:
        self._need_field()
        xs = np.asarray(xs, dtype=np.int64)
        if b == 0:
            return np.zeros_like(xs)
        out = self.antilog[(self.log[xs] + self.log[b]) % (self.n - 1)]
        return np.where(xs == 0, 0, out)

    def mult_order(self, a: int) -> int:
        self._need_field()
        a = self._check(a)
        if a == 0:
            raise ZeroInverse("0 has no multiplicative order")
        return (self.n - 1) // np.gcd(int(self.log[a]), self.n - 1)

    def poly(self, a: int) -> list[int]:
        """Coefficient list (low degree first) of a field element."""
        return nt.int_to_poly(self._check(a), self.p, self.m)


def _poly_order_is_full(c: int, p: int, m: int, modulus: list[int]) -> bool:
    q1 = p**m - 1
    a = nt.int_to_poly(c, p, m)
    if not nt.poly_trim(a):
        return False
    if nt.poly_powmod(a, q1, modulus, p) != [1]:
        return False
    return all(nt.poly_powmod(a, q1 // r, modulus, p) != [1] for r, _ in nt.factorize(q1))


def _antilog_table(p: int, m: int, modulus: list[int], theta: int) -> np.ndarray:
    q = p**m
    if m == 1:
        out = [1] * (q - 1)
        for i in range(1, q - 1):
            out[i] = out[i - 1] * theta % p
        return np.array(out, dtype=np.int64)
    # multiplication by theta is F_p-linear; tabulate it for every element at once
    t = nt.int_to_poly(theta, p, m)
    cols = [nt.int_to_poly(nt.poly_to_int(nt.poly_mulmod(t, [0] * j + [1], modulus, p), p), p, m)
            for j in range(m)]
    mat = np.array(cols, dtype=np.int64)  # row j = theta * x^j
    weights = p ** np.arange(m, dtype=np.int64)
    allx = np.arange(q, dtype=np.int64)
    digits = (allx[:, None] // weights) % p
    times_theta = ((digits @ mat) % p) @ weights
    step = times_theta.tolist()
    out = [1] * (q - 1)
    x = 1
    for i in range(1, q - 1):
        x = step[x]
        out[i] = x
    return np.array(out, dtype=np.int64)


def build_group(
    spec: GroupSpec,
    modulus_override: Sequence[int] | None = None,
    theta_override: int | None = None,
) -> Group:
    """Validate ``spec`` and build its tables.

    Fields default to the first monic irreducible modulus in encoding order
    and to the smallest primitive element; both may be overridden.
    """
    cap = order_cap()
    if spec.kind == "cyclic":
        if spec.n is None or spec.n < 2:
            raise SedfError("cyclic group needs n >= 2")
        if spec.n > cap:
            raise OrderTooLarge(f"order {spec.n} exceeds cap {cap}")
        return Group(spec)
    if spec.kind != "field":
        raise SedfError(f"unknown group kind {spec.kind!r}")

    p, m = spec.p, spec.m
    if p is None or not nt.is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m is None or m < 1:
        raise SedfError("extension degree must be >= 1")
    q = p**m
    if q > cap:
        raise OrderTooLarge(f"order {q} exceeds cap {cap}")

    modulus = modulus_override if modulus_override is not None else spec.modulus
    if modulus is None:
        modulus = nt.canonical_modulus(p, m)
    else:
        modulus = [int(c) for c in modulus]
        if len(modulus) != m + 1 or modulus[-1] != 1 or any(not 0 <= c < p for c in modulus):
            raise ReducibleModulus(f"modulus {modulus} is not monic of degree {m} over F_{p}")
        if not nt.is_irreducible(modulus, p):
            raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")

    if q == 2:
        theta = 1
    elif theta_override is not None:
        theta = int(theta_override)
        if not 0 < theta < q or not _poly_order_is_full(theta, p, m, modulus):
            raise NotPrimitive(f"{theta} does not generate F_{q}^*")
    else:
        theta = next(c for c in range(1, q) if _poly_order_is_full(c, p, m, modulus))

    full = GroupSpec.field(p, m, modulus)
    return Group(full, modulus=tuple(modulus), theta=theta,
                 antilog=_antilog_table(p, m, modulus, theta))


def field(q: int) -> Group:
    """Canonical F_q for a prime power ``q``."""
    pm = nt.prime_power(q)
    if pm is None:
        raise NotPrime(f"{q} is not a prime power")
    return build_group(GroupSpec.field(*pm))


def cyclic(n: int) -> Group:
    return build_group(GroupSpec.cyclic(n))


def parse_group(text: str) -> Group:
    """Parse ``Z13``, ``F9``, ``F3^5``, or a JSON descriptor."""
    import json

    text = text.strip()
    if text.startswith("{"):
        return build_group(GroupSpec.from_dict(json.loads(text)))
    head, body = text[:1].upper(), text[1:].lstrip("_:")
    if head == "Z":
        return cyclic(int(body))
    if head == "F":
        if "^" in body:
            p, m = body.split("^")
            return build_group(GroupSpec.field(int(p), int(m)))
        return field(int(body))
    raise SedfError(f"cannot parse group {text!r}")


class ElementSet:
    """A subset of a group, stored as a boolean mask of length n."""

    __slots__ = ("group", "mask", "k")

    def __init__(self, group: Group, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (group.n,):
            raise SedfError("mask length does not match group order")
        mask = mask.copy()
        mask.setflags(write=False)
        self.group = group
        self.mask = mask
        self.k = int(mask.sum())

    @classmethod
    def of(cls, group: Group, elements: Iterable[int]) -> "ElementSet":
        els = np.fromiter((int(x) for x in elements), dtype=np.int64)
        if els.size and (els.min() < 0 or els.max() >= group.n):
            raise SedfError(f"element out of range for {group.name()}")
        mask = np.zeros(group.n, dtype=bool)
        mask[els] = True
        return cls(group, mask)

    @classmethod
    def whole(cls, group: Group) -> "ElementSet":
        return cls(group, np.ones(group.n, dtype=bool))

    @classmethod
    def empty(cls, group: Group) -> "ElementSet":
        return cls(group, np.zeros(group.n, dtype=bool))

    @property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def tolist(self) -> list[int]:
        return self.elements.tolist()

    def __len__(self) -> int:
        return self.k

    def __iter__(self) -> Iterator[int]:
        return iter(self.tolist())

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.group.n and bool(self.mask[x])

    def _same(self, other: "ElementSet") -> None:
        if other.group is not self.group and other.group != self.group:
            raise GroupMismatch(f"{self.group.name()} vs {other.group.name()}")

    def __or__(self, other: "ElementSet") -> "ElementSet":
        self._same(other)
        return ElementSet(self.group, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        self._same(other)
        return ElementSet(self.group, self.mask & other.mask)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        self._same(other)
        return ElementSet(self.group, self.mask & ~other.mask)

    def complement(self) -> "ElementSet":
        return ElementSet(self.group, ~self.mask)

    def with_zero(self) -> "ElementSet":
        mask = self.mask.copy()
        mask[0] = True
        return ElementSet(self.group, mask)

    def without_zero(self) -> "ElementSet":
        mask = self.mask.copy()
        mask[0] = False
        return ElementSet(self.group, mask)

    def translate(self, t: int) -> "ElementSet":
        return ElementSet.of(self.group, self.group.add_vec(self.elements, t))

    def negate(self) -> "ElementSet":
        return ElementSet.of(self.group, self.group.neg_vec(self.elements))

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.mask, self.negate().mask))

    def isdisjoint(self, other: "ElementSet") -> bool:
        self._same(other)
        return not bool((self.mask & other.mask).any())

    def issubset(self, other: "ElementSet") -> bool:
        self._same(other)
        return not bool((self.mask & ~other.mask).any())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.group == other.group and bool(np.array_equal(self.mask, other.mask))

    def __hash__(self) -> int:
        return hash((self.group.n, self.mask.tobytes()))

    def __repr__(self) -> str:
        els = self.tolist()
        shown = ", ".join(map(str, els[:12])) + (", ..." if len(els) > 12 else "")
        return f"ElementSet({self.group.name()}, k={self.k}, {{{shown}}})"
