"""Diophantine scans and exhaustive searches on small groups."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import constructions as cons
from . import numtheory as nt
from .cyclotomy import build_cyclotomy
from .designs import (
    Family,
    PdsParams,
    PdsType,
    classify_pds_type,
    feasibility,
    verify_ds,
    verify_pds,
    verify_sedf,
)
from .errors import SedfError
from .groups import ElementSet, Group, GroupSpec, build_group

EXHAUSTIVE_MAX_ORDER = 64

SCAN_KINDS: dict[str, Callable[[int], dict | None]] = {
    "paley": cons.paley_condition,
    "quadratic_gsedf": cons.quadratic_gsedf_condition,
    "quartic_sedf": cons.quartic_sedf_condition,
    "quartic_residue": cons.quartic_residue_condition,
    "quartic_residue_plus_zero": cons.quartic_plus_zero_condition,
    "sextic": cons.sextic_condition,
    "octic1": cons.octic_residue_condition,
    "octic2": cons.octic_plus_zero_condition,
    "semiprimitive": cons.semiprimitive_condition,
}


def scan_diophantine(kind: str, q_max: int) -> list[tuple[int, dict]]:
    """All prime powers ``q <= q_max`` meeting a recipe's side condition, with witnesses."""
    try:
        cond = SCAN_KINDS[kind]
    except KeyError:
        raise SedfError(f"unknown scan kind {kind!r}; choose from {sorted(SCAN_KINDS)}") from None
    out = []
    for q in range(2, q_max + 1):
        w = cond(q)
        if w is not None:
            out.append((q, w))
    return out


# --- canonical forms ---------------------------------------------------------------

FamilyKey = tuple[tuple[int, ...], ...]


def canonical_family(sets: list[list[int]], sub: list[list[int]]) -> FamilyKey:
    """Lexicographically least translate, sets ordered by their least element.

    ``sub[a][b]`` is ``a - b``.  Only translates that move a member of the
    union to 0 can be least, so those are the only ones tried.
    """
    best = None
    for s in sets:
        for u in s:
            cand = tuple(sorted(tuple(sorted(sub[a][u] for a in t)) for t in sets))
            if best is None or cand < best:
                best = cand
    return best


# --- exhaustive SEDF search ---------------------------------------------------------


@dataclass
class SearchConfig:
    group: Group
    m: int
    k: int
    budget: int = 10**7  # nodes per top-level branch
    workers: int = 1


@dataclass
class SearchResult:
    config: SearchConfig
    lam: int | None
    families: list[FamilyKey]
    nodes: int
    exhaustive: bool
    branches: int = 0

    def family_objects(self) -> list[Family]:
        return [Family.of(self.config.group, list(f)) for f in self.families]


class _Budget(Exception):
    pass


def _search_branch(sub: list[list[int]], n: int, m: int, k: int, lam: int,
                   second: int | None, budget: int) -> tuple[list[FamilyKey], int, bool]:
    """DFS over families whose first set starts ``{0, second, ...}``."""
    sets: list[list[int]] = [[] for _ in range(m)]
    cnt = [[0] * n for _ in range(m)]
    used = [False] * n
    found: set[FamilyKey] = set()
    nodes = 0

    def place(s: int, x: int) -> bool:
        """Add x to set s; on overflow undo and return False."""
        cs = cnt[s]
        sx = sub[x]
        touched = []
        ok = True
        for j in range(m):
            if j == s or not sets[j]:
                continue
            cj = cnt[j]
            for a in sets[j]:
                g = sx[a]
                h = sub[a][x]
                cs[g] += 1
                cj[h] += 1
                touched.append((j, g, h))
                if cs[g] > lam or cj[h] > lam:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            for j, g, h in touched:
                cs[g] -= 1
                cnt[j][h] -= 1
            return False
        sets[s].append(x)
        used[x] = True
        return True

    def remove(s: int) -> None:
        x = sets[s].pop()
        used[x] = False
        cs = cnt[s]
        sx = sub[x]
        for j in range(m):
            if j == s:
                continue
            cj = cnt[j]
            for a in sets[j]:
                cs[sx[a]] -= 1
                cj[sub[a][x]] -= 1

    def coverable(s: int) -> bool:
        """Can the elements still free cover every deficit of the finished sets?

        Later elements of set s exceed its last element; later sets' elements
        exceed the least element of set s.
        """
        cur = sets[s]
        thr = cur[-1] if s == m - 1 else cur[0]
        for j in range(s):
            cj = cnt[j]
            aj = sets[j]
            for g in range(1, n):
                d = lam - cj[g]
                if d:
                    c = 0
                    for a in aj:
                        x = sub[a][g]
                        if x > thr and not used[x]:
                            c += 1
                    if c < d:
                        return False
        return True

    def leaf() -> None:
        key = tuple(tuple(s) for s in sets)
        if canonical_family([list(s) for s in sets], sub) == key:
            found.add(key)

    def extend(s: int) -> None:
        nonlocal nodes
        cur = sets[s]
        if len(cur) == k:
            if s + 1 == m:
                leaf()
                return
            start_set(s + 1)
            return
        need = k - len(cur)
        lo = cur[-1] + 1
        for x in range(lo, n - need + 1):
            if used[x]:
                continue
            nodes += 1
            if nodes > budget:
                raise _Budget
            if place(s, x):
                if s == 0 or coverable(s):
                    extend(s)
                remove(s)

    def start_set(s: int) -> None:
        nonlocal nodes
        lo = sets[s - 1][0] + 1
        for x in range(lo, n):
            if used[x]:
                continue
            # every later set also needs a larger least element
            if sum(1 for y in range(x, n) if not used[y]) < k * (m - s):
                break
            nodes += 1
            if nodes > budget:
                raise _Budget
            if place(s, x):
                if s == 0 or coverable(s):
                    extend(s)
                remove(s)

    complete = True
    try:
        place(0, 0)
        if k == 1:
            extend(0)
        elif second is not None:
            nodes += 1
            place(0, second)
            extend(0)
    except _Budget:
        complete = False
    return sorted(found), nodes, complete


def _branch_task(args):
    desc, m, k, lam, second, budget = args
    group = build_group(GroupSpec.from_dict(desc))
    return _search_branch(group.subtraction_table(), group.n, m, k, lam, second, budget)


def exhaustive_sedf(cfg: SearchConfig) -> SearchResult:
    """Every (n, m, k, lambda)-SEDF in the group up to translation.

    Families come back as canonical translates (first set contains 0, sets
    ordered by least element).  The budget caps nodes per top-level branch
    (choice of the first set's second element); exhausting it marks the
    result non-exhaustive.
    """
    g, m, k = cfg.group, cfg.m, cfg.k
    lam = feasibility(g.n, m, k)
    if lam is None or m * k > g.n or k < 1:
        return SearchResult(cfg, lam, [], 0, True)
    seconds: list[int | None] = [None] if k == 1 else list(range(1, g.n - k + 2))
    tasks = [(g.descriptor(), m, k, lam, s, cfg.budget) for s in seconds]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            outs = list(ex.map(_branch_task, tasks))
    else:
        sub = g.subtraction_table()
        outs = [_search_branch(sub, g.n, m, k, lam, s, cfg.budget) for s in seconds]
    families = sorted({f for fams, _, _ in outs for f in fams})
    nodes = sum(n for _, n, _ in outs)
    complete = all(c for _, _, c in outs) and g.n <= EXHAUSTIVE_MAX_ORDER
    for f in families:
        if not verify_sedf(Family.of(g, list(f))).ok:
            raise AssertionError(f"search emitted a non-SEDF {f}")
    return SearchResult(cfg, lam, families, nodes, complete, len(tasks))


def feasible_sedf_parameters(n_max: int, m: int, k_min: int = 2) -> list[tuple[int, int, int]]:
    """``(n, k, lambda)`` with integral lambda and ``m k <= n <= n_max``."""
    out = []
    for n in range(2, n_max + 1):
        for k in range(k_min, n // m + 1):
            lam = feasibility(n, m, k)
            if lam is not None:
                out.append((n, k, lam))
    return out


def groups_of_order(n: int) -> list[Group]:
    """Z_n, plus the additive group of F_n when n is a proper prime power."""
    out = [build_group(GroupSpec.cyclic(n))]
    pm = nt.prime_power(n)
    if pm and pm[1] > 1:
        out.append(build_group(GroupSpec.field(*pm)))
    return out


# --- census of DS / PDS ---------------------------------------------------------------


@dataclass
class CensusEntry:
    set: ElementSet
    params: object
    pds_type: PdsType | None = None


@dataclass
class Census:
    group: Group
    mode: str
    entries: list[CensusEntry]
    exhaustive: bool
    nodes: int = 0
    flagged: list[CensusEntry] = field(default_factory=list)


def _ds_search(sub, n: int, k: int, lam: int, budget: int):
    """Difference sets of size k containing 0, elements increasing (translation reps)."""
    cnt = [0] * n
    cur = [0]
    found = []
    nodes = 0

    def add(x):
        touched = []
        for a in cur:
            g, h = sub[x][a], sub[a][x]
            cnt[g] += 1
            cnt[h] += 1
            touched.append((g, h))
            if cnt[g] > lam or cnt[h] > lam:
                for g2, h2 in touched:
                    cnt[g2] -= 1
                    cnt[h2] -= 1
                return False
        cur.append(x)
        return True

    def drop():
        x = cur.pop()
        for a in cur:
            cnt[sub[x][a]] -= 1
            cnt[sub[a][x]] -= 1

    def rec():
        nonlocal nodes
        if len(cur) == k:
            found.append(list(cur))
            return
        need = k - len(cur)
        for x in range(cur[-1] + 1, n - need + 1):
            nodes += 1
            if nodes > budget:
                raise _Budget
            if add(x):
                rec()
                drop()

    complete = True
    try:
        rec()
    except _Budget:
        complete = False
    return found, nodes, complete


def ds_census(group: Group, k_max: int | None = None, budget: int = 10**7) -> Census:
    """Nontrivial difference sets (2 <= k <= n/2) up to translation."""
    n = group.n
    if n > EXHAUSTIVE_MAX_ORDER:
        raise SedfError(f"exhaustive census limited to n <= {EXHAUSTIVE_MAX_ORDER}")
    sub = group.subtraction_table()
    entries, total, complete = [], 0, True
    top = n // 2 if k_max is None else min(k_max, n // 2)
    for k in range(2, top + 1):
        lam, r = divmod(k * (k - 1), n - 1)
        if r:
            continue
        found, nodes, ok = _ds_search(sub, n, k, lam, budget)
        total += nodes
        complete &= ok
        keys = {canonical_family([s], sub) for s in found}
        for key in sorted(keys):
            s = ElementSet.of(group, key[0])
            entries.append(CensusEntry(s, verify_ds(s)))
    return Census(group, "ds", entries, complete, total)


def _symmetric_orbits(group: Group) -> list[tuple[int, ...]]:
    seen, orbits = set(), []
    for x in range(1, group.n):
        if x in seen:
            continue
        orb = tuple(sorted({x, group.neg(x)}))
        seen.update(orb)
        orbits.append(orb)
    return orbits


def pds_census(group: Group, mode: str = "exhaustive", e: int | None = None,
               budget: int = 10**7) -> Census:
    """PDS with lambda = mu - 1, -D = D, 0 not in D and k < n/2, classified.

    ``exhaustive`` enumerates unions of {x, -x} orbits (n <= 64);
    ``classes`` tests the cyclotomic classes of order e of a field.
    Anything classified as Other is collected in ``flagged``.
    """
    entries: list[CensusEntry] = []
    nodes = 0
    complete = True
    if mode == "classes":
        if e is None:
            raise SedfError("classes mode needs e")
        sys = build_cyclotomy(group, e)
        cands = [c for c in sys.classes if 2 * c.k < group.n and c.is_symmetric()]
        for c in cands:
            nodes += 1
            p = verify_pds(c)
            if p is not None and p.lam == p.mu - 1:
                entries.append(CensusEntry(c, p))
        complete = False
    elif mode == "exhaustive":
        n = group.n
        if n > EXHAUSTIVE_MAX_ORDER:
            raise SedfError(f"exhaustive census limited to n <= {EXHAUSTIVE_MAX_ORDER}")
        orbits = _symmetric_orbits(group)
        sub = group.subtraction_table()
        for k in range(1, (n + 1) // 2):
            if 2 * k >= n or (k * k) % (n - 1):
                continue
            mu = k * k // (n - 1)
            found, used, ok = _orbit_search(orbits, sub, n, k, mu, budget)
            nodes += used
            complete &= ok
            for els in found:
                s = ElementSet.of(group, els)
                p = verify_pds(s)
                if p is not None and p.lam == p.mu - 1:
                    entries.append(CensusEntry(s, p))
    else:
        raise SedfError(f"unknown census mode {mode!r}")
    flagged = []
    for ent in entries:
        ent.pds_type = classify_pds_type(ent.params)
        if ent.pds_type is PdsType.OTHER:
            flagged.append(ent)
    return Census(group, mode, entries, complete, nodes, flagged)


def _orbit_search(orbits, sub, n: int, k: int, mu: int, budget: int):
    """Unions of inverse orbits of total size k whose internal differences stay <= mu."""
    cap = max(mu, mu - 1)
    cnt = [0] * n
    cur: list[int] = []
    found = []
    nodes = 0
    sizes = [len(o) for o in orbits]
    suffix = list(itertools.accumulate(reversed(sizes)))[::-1] + [0]

    def add(orb):
        touched = []
        for x in orb:
            for a in cur:
                g, h = sub[x][a], sub[a][x]
                cnt[g] += 1
                cnt[h] += 1
                touched.append((g, h))
            cur.append(x)
        if any(cnt[g] > cap or cnt[h] > cap for g, h in touched):
            undo(orb, touched)
            return None
        return touched

    def undo(orb, touched):
        for _ in orb:
            cur.pop()
        for g, h in touched:
            cnt[g] -= 1
            cnt[h] -= 1

    def rec(i: int, size: int):
        nonlocal nodes
        if size == k:
            found.append(sorted(cur))
            return
        if i == len(orbits) or size + suffix[i] < k:
            return
        nodes += 1
        if nodes > budget:
            raise _Budget
        if size + sizes[i] <= k:
            touched = add(orbits[i])
            if touched is not None:
                rec(i + 1, size + sizes[i])
                undo(orbits[i], touched)
        rec(i + 1, size)

    complete = True
    try:
        rec(0, 0)
    except _Budget:
        complete = False
    return found, nodes, complete
