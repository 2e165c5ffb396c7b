"""Cyclotomic classes and cyclotomic numbers of order e over F_q."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import numtheory as nt
from .designs import DiffMultiset, delta
from .errors import NotAField, NotSemiprimitive, OddDegree, OrderDoesNotDivide
from .groups import ElementSet, Group


@dataclass(eq=False)
class CyclotomicSystem:
    """Order-e classes ``C_l = theta^l <theta^e>`` of F_q^* and their number table.

    ``class_of[x]`` is ``log(x) mod e`` for nonzero x and -1 at 0.
    """

    field: Group
    e: int
    f: int
    class_of: np.ndarray
    classes: list[ElementSet]
    numbers: np.ndarray = dc_field(repr=False)

    @property
    def q(self) -> int:
        return self.field.n

    def cls(self, i: int) -> ElementSet:
        return self.classes[i % self.e]

    def number(self, i: int, j: int) -> int:
        return int(self.numbers[i % self.e, j % self.e])

    def class_of_minus_one(self) -> int:
        return int(self.class_of[self.field.neg(1)])


def build_cyclotomy(field: Group, e: int) -> CyclotomicSystem:
    if not field.is_field:
        raise NotAField(f"{field.name()} is not a field")
    q = field.n
    if e < 2 or (q - 1) % e:
        raise OrderDoesNotDivide(f"e={e} must be >= 2 and divide q-1={q - 1}")
    class_of = np.where(np.arange(q) == 0, -1, field.log % e)
    class_of.setflags(write=False)
    classes = [ElementSet(field, class_of == lam) for lam in range(e)]
    # (i, j) counts x in C_i with x + 1 in C_j
    xs = np.arange(1, q, dtype=np.int64)
    ys = field.add_vec(xs, 1)
    keep = ys != 0
    numbers = np.zeros((e, e), dtype=np.int64)
    np.add.at(numbers, (class_of[xs[keep]], class_of[ys[keep]]), 1)
    numbers.setflags(write=False)
    return CyclotomicSystem(field, e, (q - 1) // e, class_of, classes, numbers)


def cyclotomic_number(sys: CyclotomicSystem, i: int, j: int) -> int:
    """``#{x in C_i : 1 + x in C_j}`` by direct enumeration of C_i."""
    xs = sys.cls(i).elements
    ys = sys.field.add_vec(xs, 1)
    ys = ys[ys != 0]
    return int(np.count_nonzero(sys.class_of[ys] == j % sys.e))


def is_semiprimitive(p: int, e: int) -> bool:
    """True when ``p^t == -1 (mod e)`` for some t."""
    if e == 2:
        return p % 2 == 1
    if np.gcd(p, e) != 1:
        return False
    x = 1
    for _ in range(e):
        x = x * p % e
        if x == e - 1:
            return True
    return False


def semiprimitive_eta(p: int, m: int, e: int) -> int:
    if not is_semiprimitive(p, e):
        raise NotSemiprimitive(f"no power of {p} is -1 mod {e}")
    if (p**m - 1) % e:
        raise OrderDoesNotDivide(f"{e} does not divide {p}^{m}-1")
    if m % 2:
        raise OddDegree(f"semiprimitive closed form needs even degree, got m={m}")
    root = p ** (m // 2)
    for s in (root, -root):
        if (s - 1) % e == 0:
            return (s - 1) // e
    raise AssertionError("no sign of sqrt(q) is 1 mod e")


def semiprimitive_numbers(p: int, m: int, e: int) -> np.ndarray:
    """Closed-form e x e cyclotomic number table in the semiprimitive case."""
    eta = semiprimitive_eta(p, m, e)
    table = np.full((e, e), eta * eta, dtype=np.int64)
    table[0, :] = eta * eta + eta
    table[:, 0] = eta * eta + eta
    np.fill_diagonal(table, eta * eta + eta)
    table[0, 0] = eta * eta - (e - 3) * eta - 1
    return table


def delta_classes(sys: CyclotomicSystem, i: int, j: int) -> DiffMultiset:
    """``delta(C_i, C_j)`` assembled from cyclotomic numbers, no pair enumeration.

    The coefficient of g in C_l is ``(j - l, i - l)``; at 0 it is f when i == j.
    """
    e = sys.e
    lam = sys.class_of
    nz = lam >= 0
    counts = np.zeros(sys.q, dtype=np.int64)
    counts[nz] = sys.numbers[(j - lam[nz]) % e, (i - lam[nz]) % e]
    if (i - j) % e == 0:
        counts[0] = sys.f
    return DiffMultiset(sys.field, counts)


@dataclass
class IdentityCheck:
    name: str
    ok: bool
    checked: int
    counterexample: dict | None = None


@dataclass
class AuditReport:
    q: int
    e: int
    checks: list[IdentityCheck]
    # alternative statements of an identity that the brute-force table contradicts
    refuted: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def audit_identities(sys: CyclotomicSystem) -> AuditReport:
    """Check the standard cyclotomic-number identities against brute force.

    1. (i,j) = (-i, j-i) and (i,j) = (p i, p j)
    2. -1 lies in C_{e/2} when p is odd and f is odd, otherwise in C_0
    3. (i,j) = (j,i) if -1 in C_0, else (j+e/2, i+e/2)
    4. row i sums to f - 1 if -1 in C_i, else f (every x in C_i except
       x = -1 has 1 + x in some class).  The swapped branch assignment is
       recorded in ``refuted`` whenever the table contradicts it.
    5. delta(C_i, C_j) expands through cyclotomic numbers
    """
    e, f, p = sys.e, sys.f, sys.field.p
    T = sys.numbers
    checks = []
    refuted: list[str] = []

    def first_failure(name, pairs, pred):
        count = 0
        for i, j in pairs:
            count += 1
            bad = pred(i, j)
            if bad is not None:
                return IdentityCheck(name, False, count, bad)
        return IdentityCheck(name, True, count)

    pairs = [(i, j) for i in range(e) for j in range(e)]

    def sym1(i, j):
        a, b, c = int(T[i, j]), int(T[-i % e, (j - i) % e]), int(T[p * i % e, p * j % e])
        if a != b:
            return {"i": i, "j": j, "value": a, "(-i,j-i)": b}
        if a != c:
            return {"i": i, "j": j, "value": a, "(pi,pj)": c}
        return None

    checks.append(first_failure("symmetries", pairs, sym1))

    minus_one = sys.class_of_minus_one()
    expected = e // 2 if (p >= 3 and f % 2 == 1) else 0
    checks.append(IdentityCheck(
        "class_of_minus_one", minus_one == expected, 1,
        None if minus_one == expected else {"class": minus_one, "expected": expected}))

    def sym3(i, j):
        if minus_one == 0:
            other = int(T[j, i])
        elif e % 2 == 0:
            other = int(T[(j + e // 2) % e, (i + e // 2) % e])
        else:
            return None
        if int(T[i, j]) != other:
            return {"i": i, "j": j, "value": int(T[i, j]), "partner": other}
        return None

    checks.append(first_failure("transpose_rule", pairs, sym3))

    def rowsum(i, _):
        want = f - 1 if minus_one == i else f
        got = int(T[i].sum())
        return None if got == want else {"row": i, "sum": got, "expected": want}

    checks.append(first_failure("row_sums", [(i, 0) for i in range(e)], rowsum))
    swapped = [f if minus_one == i else f - 1 for i in range(e)]
    if T.sum(axis=1).tolist() != swapped:
        refuted.append("row sums: 'f if -1 in C_i, f-1 otherwise' is refuted")

    def expansion(i, j):
        lhs = delta_classes(sys, i, j)
        rhs = delta(sys.classes[i], sys.classes[j])
        if lhs == rhs:
            return None
        g = int(np.argmax(lhs.counts != rhs.counts))
        return {"i": i, "j": j, "element": g, "expansion": lhs[g], "direct": rhs[g]}

    checks.append(first_failure("class_difference_expansion", pairs, expansion))
    return AuditReport(sys.q, e, checks, refuted)


def semiprimitive_orders(q: int) -> list[int]:
    """Divisors e >= 2 of q-1 for which the closed form applies."""
    p, m = nt.prime_power(q)
    if m % 2:
        return []
    return [e for e in nt.divisors(q - 1) if e >= 2 and is_semiprimitive(p, e)]
