"""Forbidden-set combinatorics: Schur, S, Riesz, alternating-sum, gap and block sets.

All sets here are infinite in general, so every enumeration is taken inside an
explicit window and reported with an `exact` flag telling whether the listing
is provably complete there.  Two independent routes to the Schur set are kept
deliberately separate: `schur_set` walks admissible sign vectors through their
partial-sum conditions, `schur_set_via_gaps` enumerates the gap representation
m = k_i - Σ n_j' Δk_j'; their agreement is a tested identity, not shared code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import Vec, as_vec, vec_add, vec_scale, vec_sub

S_SET_CAP = 16        # 3^J sign-vector enumeration
RIESZ_CAP = 14        # 3^|K'| signed-sum enumeration
ALT_SUM_CAP = 20      # 2^J index subsequences
DFS_NODE_CAP = 4_000_000


class CapExceeded(ValueError):
    pass


class UndecidableWindow(ValueError):
    pass


@dataclass(frozen=True)
class Enumeration:
    """Ordered sequence of distinct frequencies; order is data, never derived."""

    entries: tuple

    def __init__(self, entries):
        vs = tuple(as_vec(e) for e in entries)
        if vs:
            d = len(vs[0])
            if any(len(v) != d for v in vs):
                raise ValueError("mixed dimensions in enumeration")
        if len(set(vs)) != len(vs):
            raise ValueError("enumeration entries must be distinct")
        object.__setattr__(self, "entries", vs)

    @property
    def J(self) -> int:
        return len(self.entries)

    @property
    def dim(self) -> int:
        return len(self.entries[0]) if self.entries else 1

    def scalars(self) -> list[int]:
        if self.dim != 1:
            raise ValueError("scalar view requires dim 1")
        return [v[0] for v in self.entries]

    def is_increasing(self) -> bool:
        ks = self.scalars()
        return all(b > a for a, b in zip(ks, ks[1:]))

    def gaps(self) -> list[int]:
        ks = self.scalars()
        return [b - a for a, b in zip(ks, ks[1:])]

    def to_json(self) -> dict:
        ks = [v[0] if len(v) == 1 else list(v) for v in self.entries]
        return {"k": ks}


@dataclass(frozen=True)
class Window:
    """Componentwise closed interval [lo, hi] of frequencies."""

    lo: Vec
    hi: Vec

    def __init__(self, lo, hi):
        lo, hi = as_vec(lo), as_vec(hi)
        if len(lo) != len(hi):
            raise ValueError("window bound dimensions disagree")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError("window needs lo <= hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, m) -> bool:
        v = as_vec(m)
        if len(v) != self.dim:
            raise ValueError(f"frequency {v} has wrong dimension for window {self.to_json()}")
        return all(a <= c <= b for a, c, b in zip(self.lo, v, self.hi))

    def to_json(self) -> list:
        if self.dim == 1:
            return [self.lo[0], self.hi[0]]
        return [list(self.lo), list(self.hi)]


@dataclass(frozen=True)
class SetReport:
    """Sorted members found inside a window plus a completeness flag."""

    members: tuple
    exact: bool

    def __init__(self, members, exact):
        vs = sorted({as_vec(m) for m in members})
        object.__setattr__(self, "members", tuple(vs))
        object.__setattr__(self, "exact", bool(exact))

    def as_set(self) -> set:
        return set(self.members)

    def scalars(self) -> list[int]:
        return [v[0] for v in self.members]

    def to_json(self) -> dict:
        ms = [v[0] if len(v) == 1 else list(v) for v in self.members]
        return {"members": ms, "exact": self.exact}


# ---------------------------------------------------------------------------
# sign-vector conditions
# ---------------------------------------------------------------------------

def admissible_signs(eps) -> bool:
    """The four partial-sum conditions on a coefficient vector.

    Full sum 1; all partial sums nonnegative; all partial sums after the
    first positive one strictly positive; some partial sum greater than 1.
    """
    s = 0
    seen_positive = False
    exceeded = False
    for e in eps:
        s += e
        if s < 0:
            return False
        if seen_positive and s <= 0:
            return False
        if s > 0:
            seen_positive = True
        if s > 1:
            exceeded = True
    return s == 1 and exceeded


# ---------------------------------------------------------------------------
# semigroup reachability (vectorized over a value range)
# ---------------------------------------------------------------------------

def _closure(reach: np.ndarray, g: int) -> np.ndarray:
    """reach ∪ (reach + g) ∪ (reach + 2g) ∪ ... inside the array range."""
    n = reach.size
    if g <= 0:
        raise ValueError("closure needs a positive generator")
    if g >= n:
        return reach
    pad = (-n) % g
    r = np.concatenate([reach, np.zeros(pad, bool)]) if pad else reach.copy()
    r = r.reshape(-1, g)
    np.logical_or.accumulate(r, axis=0, out=r)
    return r.reshape(-1)[:n]


def _nonneg_combos(gens, cap: int) -> np.ndarray:
    """Boolean table of Σ n_i g_i over nonnegative integers n, on [0, cap]."""
    reach = np.zeros(max(cap, 0) + 1, bool)
    if cap < 0:
        return reach
    reach[0] = True
    for g in sorted(set(gens)):
        reach = _closure(reach, g)
    return reach


# ---------------------------------------------------------------------------
# Schur set, two routes
# ---------------------------------------------------------------------------

def required_coeff_bound(e: Enumeration, w: Window) -> int:
    """Coefficient magnitude provably sufficient for exact windowed search.

    For a strictly increasing enumeration every admissible representation has
    gap coefficients at most (max k - lo)/min Δk, hence sign-vector entries at
    most one more than that.
    """
    ks = e.scalars()
    gaps = e.gaps()
    if not gaps:
        return 1
    return 1 + (max(ks) - w.lo[0]) // min(gaps)


def _schur_increasing_dp(ks: list[int], lo: int, hi: int) -> list[int]:
    # Walk the partial sums s_1..s_{J-1} through their admissible phases and
    # track the accumulated T = Σ s_j Δk_j, since the value is k_J - T.
    # Phase "pre": before the first positive partial sum (all zero, T = 0).
    # Phase p1: positive so far but pinned at exactly 1 (nonnegative + not
    # yet exceeded forces s = 1 there).  Phase p2: some partial sum exceeded
    # 1; from then on any s_j >= 1 is admissible.  Membership requires ending
    # in p2 with s_J = 1, which contributes nothing to T.
    J = len(ks)
    tmax = ks[-1] - lo
    if J < 2 or tmax < 0:
        return []
    gaps = [b - a for a, b in zip(ks, ks[1:])]
    p1 = np.zeros(tmax + 1, bool)
    p2 = np.zeros(tmax + 1, bool)
    for g in gaps:
        new1 = np.zeros(tmax + 1, bool)
        new2 = np.zeros(tmax + 1, bool)
        if g <= tmax:
            new1[g] = True                      # pre -> p1 (s_j = 1)
            new1[g:] |= p1[:-g]                 # p1 -> p1 (s_j = 1)
            if 2 * g <= tmax:
                start = np.zeros(tmax + 1, bool)
                start[2 * g] = True
                new2 |= _closure(start, g)      # pre -> p2 (s_j >= 2)
                shifted = np.zeros(tmax + 1, bool)
                shifted[2 * g:] = p1[: tmax + 1 - 2 * g]
                new2 |= _closure(shifted, g)    # p1 -> p2 (s_j >= 2)
            shifted = np.zeros(tmax + 1, bool)
            shifted[g:] = p2[:-g]
            new2 |= _closure(shifted, g)        # p2 -> p2 (s_j >= 1)
        p1, p2 = new1, new2
    vals = np.nonzero(p2)[0]
    ms = ks[-1] - vals
    return [int(m) for m in ms[(ms >= lo) & (ms <= hi)]]


def _schur_bounded_dfs(e: Enumeration, w: Window, bound: int) -> list:
    """Honest search over sign vectors with |ε_j| <= bound."""
    vs = e.entries
    J = len(vs)
    d = e.dim
    sum_tail = [tuple(0 for _ in range(d))] * (J + 1)
    for j in range(J - 1, -1, -1):
        sum_tail[j] = vec_add(sum_tail[j + 1], tuple(abs(c) for c in vs[j]))
    out = set()
    nodes = 0

    def rec(j, s, seen_pos, exceeded, val):
        nonlocal nodes
        nodes += 1
        if nodes > DFS_NODE_CAP:
            raise CapExceeded("sign-vector search exceeded the node cap")
        if j == J:
            if s == 1 and exceeded and w.contains(val):
                out.add(val)
            return
        # partial sums can drop by at most `bound` per remaining step
        remaining = J - j
        slack = vec_scale(bound, sum_tail[j])
        if any(v - sl > hi or v + sl < lo for v, sl, lo, hi in zip(val, slack, w.lo, w.hi)):
            return
        for epsv in range(-bound, bound + 1):
            s2 = s + epsv
            if s2 < 0 or (seen_pos and s2 <= 0):
                continue
            if s2 > 1 + bound * (remaining - 1):
                continue  # cannot come back down to a full sum of 1
            if s2 < 1 - bound * (remaining - 1):
                continue
            rec(
                j + 1,
                s2,
                seen_pos or s2 > 0,
                exceeded or s2 > 1,
                vec_add(val, vec_scale(epsv, vs[j])),
            )

    rec(0, 0, False, False, tuple(0 for _ in range(d)))
    return sorted(out)


def schur_set(e: Enumeration, w: Window, coeff_bound: int | None = None) -> SetReport:
    """Window slice of the Schur set of an enumeration.

    Members are the values Σ ε_j k_j over integer sign vectors satisfying the
    four partial-sum conditions.  For strictly increasing integer enumerations
    the walk over partial-sum states is complete and the report is exact; any
    other shape falls back to a bounded |ε| <= coeff_bound search and the
    report is marked inexact.
    """
    if e.J == 0:
        return SetReport([], True)
    increasing = e.dim == 1 and e.J >= 1 and e.is_increasing()
    if increasing:
        needed = required_coeff_bound(e, w)
        if coeff_bound is None or coeff_bound >= needed:
            members = _schur_increasing_dp(e.scalars(), w.lo[0], w.hi[0])
            return SetReport(members, True)
    bound = coeff_bound if coeff_bound is not None else 4
    return SetReport(_schur_bounded_dfs(e, w, bound), False)


def schur_set_via_gaps(e: Enumeration, w: Window) -> SetReport:
    """Schur set through the gap representation m = k_i - Σ_{j'>=i} n_j' Δk_j'.

    Requires a strictly increasing integer enumeration; positive gaps bound
    the coefficients, so the windowed listing is exact.
    """
    if e.J == 0:
        return SetReport([], True)
    if e.dim != 1 or not e.is_increasing():
        raise ValueError("gap representation requires increasing enumeration")
    ks = e.scalars()
    gaps = e.gaps()
    lo, hi = w.lo[0], w.hi[0]
    out: set[int] = set()
    for i in range(1, len(ks)):
        cap = ks[i - 1] - lo
        if cap < 0:
            continue
        reach = _nonneg_combos(gaps[i - 1 :], cap)
        vals = np.nonzero(reach)[0]
        vals = vals[vals > 0]  # coefficients not all zero
        ms = ks[i - 1] - vals
        out.update(int(m) for m in ms[(ms >= lo) & (ms <= hi)])
    return SetReport(sorted(out), True)


# ---------------------------------------------------------------------------
# S set, Riesz support, alternating sums
# ---------------------------------------------------------------------------

def s_set(e: Enumeration, cap: int = S_SET_CAP) -> SetReport:
    """Values Σ ε_j k_j over ε in {-1,0,1}^J meeting the partial-sum conditions."""
    if e.J > cap:
        raise CapExceeded(f"J={e.J} exceeds the 3^J cap {cap}")
    out = set()
    d = e.dim

    def rec(j, s, seen_pos, exceeded, val):
        if j == e.J:
            if s == 1 and exceeded:
                out.add(val)
            return
        for epsv in (-1, 0, 1):
            s2 = s + epsv
            if s2 < 0 or (seen_pos and s2 <= 0):
                continue
            rec(j + 1, s2, seen_pos or s2 > 0, exceeded or s2 > 1,
                vec_add(val, vec_scale(epsv, e.entries[j])))

    rec(0, 0, False, False, tuple(0 for _ in range(d)))
    return SetReport(sorted(out), True)


def s_set_with_signs(e: Enumeration, cap: int = S_SET_CAP) -> dict:
    """Map member -> the admissible sign vectors producing it."""
    if e.J > cap:
        raise CapExceeded(f"J={e.J} exceeds the 3^J cap {cap}")
    out: dict[Vec, list[tuple[int, ...]]] = {}

    def rec(j, s, seen_pos, exceeded, val, eps):
        if j == e.J:
            if s == 1 and exceeded:
                out.setdefault(val, []).append(tuple(eps))
            return
        for epsv in (-1, 0, 1):
            s2 = s + epsv
            if s2 < 0 or (seen_pos and s2 <= 0):
                continue
            eps.append(epsv)
            rec(j + 1, s2, seen_pos or s2 > 0, exceeded or s2 > 1,
                vec_add(val, vec_scale(epsv, e.entries[j])), eps)
            eps.pop()

    rec(0, 0, False, False, tuple(0 for _ in range(e.dim)), [])
    return out


def riesz_support(K, cap: int = RIESZ_CAP) -> SetReport:
    """All signed {-1,0,1} combinations of K \\ {0}; always contains 0."""
    pts = sorted({as_vec(g) for g in K})
    d = len(pts[0]) if pts else 1
    zero = tuple(0 for _ in range(d))
    kprime = [g for g in pts if g != zero]
    if len(kprime) > cap:
        raise CapExceeded(f"|K'|={len(kprime)} exceeds the 3^n cap {cap}")
    vals = {zero}
    for g in kprime:
        vals = {vec_add(v, vec_scale(s, g)) for v in vals for s in (-1, 0, 1)}
    return SetReport(sorted(vals), True)


def alt_sum_set(e: Enumeration, cap: int = ALT_SUM_CAP) -> SetReport:
    """Alternating sums k_{j1} - k_{j2} + ... over increasing index subsequences
    of odd length at least 3."""
    if e.J > cap:
        raise CapExceeded(f"J={e.J} exceeds the 2^J cap {cap}")
    out = set()
    d = e.dim
    zero = tuple(0 for _ in range(d))

    def rec(j, length, val):
        if length >= 3 and length % 2 == 1:
            out.add(val)
        if j == e.J:
            return
        for nxt in range(j, e.J):
            sign = 1 if length % 2 == 0 else -1
            rec(nxt + 1, length + 1, vec_add(val, vec_scale(sign, e.entries[nxt])))

    rec(0, 0, zero)
    return SetReport(sorted(out), True)


# ---------------------------------------------------------------------------
# the block sets G_{j+1} and D_j (dim 1, increasing)
# ---------------------------------------------------------------------------

def _require_increasing(e: Enumeration):
    if e.dim != 1 or not e.is_increasing():
        raise ValueError("gap representation requires increasing enumeration")


def g_set(j: int, e: Enumeration, w: Window) -> SetReport:
    """The set G_{j+1}: values k_i - Σ_{j'=i}^{J-1} n_j' Δk_j' inside the window,
    with 1 <= i <= min(j+1, J-1) and some n_j' nonzero when i = j+1."""
    _require_increasing(e)
    J = e.J
    if not 1 <= j < J:
        raise ValueError(f"index j={j} out of range 1..{J - 1}")
    ks = e.scalars()
    gaps = e.gaps()
    lo, hi = w.lo[0], w.hi[0]
    out: set[int] = set()
    for i in range(1, min(j + 1, J - 1) + 1):
        cap = ks[i - 1] - lo
        if cap < 0:
            continue
        reach = _nonneg_combos(gaps[i - 1 :], cap)
        vals = np.nonzero(reach)[0]
        if i == j + 1:
            vals = vals[vals > 0]
        ms = ks[i - 1] - vals
        out.update(int(m) for m in ms[(ms >= lo) & (ms <= hi)])
    return SetReport(sorted(out), True)


def g_set_first_form(j: int, e: Enumeration, w: Window) -> SetReport:
    """The narrower description of G_{j+1} preceding the uniform election:
    i > 1 terms as in g_set, plus i = 1 terms restricted to n_1 = 0 with the
    indices j' >= j+1 of nonzero coefficients forming a gap-free block
    containing j+1 (or no such indices at all)."""
    _require_increasing(e)
    J = e.J
    if not 1 <= j < J:
        raise ValueError(f"index j={j} out of range 1..{J - 1}")
    ks = e.scalars()
    gaps = e.gaps()
    lo, hi = w.lo[0], w.hi[0]
    out: set[int] = set()
    for i in range(2, min(j + 1, J - 1) + 1):
        cap = ks[i - 1] - lo
        if cap < 0:
            continue
        reach = _nonneg_combos(gaps[i - 1 :], cap)
        vals = np.nonzero(reach)[0]
        if i == j + 1:
            vals = vals[vals > 0]
        ms = ks[i - 1] - vals
        out.update(int(m) for m in ms[(ms >= lo) & (ms <= hi)])
    # i = 1, n_1 = 0; nonzero indices among j' >= j+1 form a block [j+1, b]
    if w.contains((ks[0],)):
        out.add(ks[0])  # the empty-index case
    cap = ks[0] - lo
    if cap >= 0:
        # indices 2..j may be anything nonnegative only when they are absent
        # from the j' >= j+1 block rule; here j' runs over 2..J-1 with the
        # block constraint on j' >= j+1 and freedom below j+1.
        free = gaps[1:j]  # j' = 2..j
        for b in range(j + 1, J):
            base = sum(gaps[j : b])  # one each of Δk_{j+1}..Δk_b
            if base > cap:
                break
            reach = _nonneg_combos(free + gaps[j : b], cap - base)
            vals = np.nonzero(reach)[0] + base
            ms = ks[0] - vals
            out.update(int(m) for m in ms[(ms >= lo) & (ms <= hi)])
        # no j' >= j+1 present: free combos of Δk_2..Δk_j alone
        if free:
            reach = _nonneg_combos(free, cap)
            vals = np.nonzero(reach)[0]
            ms = ks[0] - vals
            out.update(int(m) for m in ms[(ms >= lo) & (ms <= hi)])
    return SetReport(sorted(out), True)


def d_set(j: int, e: Enumeration, w: Window) -> SetReport:
    """The set D_j: values -Σ n_j' Δk_j' with n >= 0, some n > 0, where the
    nonzero indices at or below j form a gap-free block ending at j, or are
    absent entirely (then all mass sits strictly above j).  D_J is empty.

    This is the windowed translate G_{j+1} - k_{j+1}; the agreement with
    `g_set` is a tested identity.
    """
    _require_increasing(e)
    J = e.J
    if not 1 <= j <= J:
        raise ValueError(f"index j={j} out of range 1..{J}")
    if j == J:
        return SetReport([], True)
    ks = e.scalars()
    gaps = e.gaps()
    lo, hi = w.lo[0], w.hi[0]
    cap = -lo
    out: set[int] = set()
    if cap >= 0:
        for i in range(1, j + 1):  # block [i, j], each coefficient >= 1 there
            base = sum(gaps[i - 1 : j])
            if base > cap:
                continue
            reach = _nonneg_combos(gaps[i - 1 :], cap - base)
            vals = np.nonzero(reach)[0] + base
            ms = -vals
            out.update(int(m) for m in ms[(ms >= lo) & (ms <= hi)])
        if j + 1 <= J - 1:  # no index <= j used; some index above j nonzero
            reach = _nonneg_combos(gaps[j:], cap)
            vals = np.nonzero(reach)[0]
            vals = vals[vals > 0]
            ms = -vals
            out.update(int(m) for m in ms[(ms >= lo) & (ms <= hi)])
    return SetReport(sorted(out), True)


def d_set_remark_form(j: int, e: Enumeration, w: Window) -> SetReport:
    """The looser remark-style description of D_j: the nonzero indices strictly
    below j form a gap-free block containing j-1 (or none), with no condition
    at j itself.  Kept for comparison; contains `d_set` but can be strictly
    larger, and then fails the translate identity with G_{j+1}."""
    _require_increasing(e)
    J = e.J
    if not 1 <= j <= J:
        raise ValueError(f"index j={j} out of range 1..{J}")
    if j == J:
        return SetReport([], True)
    ks = e.scalars()
    gaps = e.gaps()
    lo, hi = w.lo[0], w.hi[0]
    cap = -lo
    out: set[int] = set()
    if cap >= 0:
        for i in range(1, j):  # block [i, j-1] nonempty
            base = sum(gaps[i - 1 : j - 1])
            if base > cap:
                continue
            reach = _nonneg_combos(gaps[i - 1 :], cap - base)
            vals = np.nonzero(reach)[0] + base
            vals = vals[vals > 0]
            ms = -vals
            out.update(int(m) for m in ms[(ms >= lo) & (ms <= hi)])
        # empty block below j: indices j..J-1 free
        reach = _nonneg_combos(gaps[j - 1 :], cap)
        vals = np.nonzero(reach)[0]
        vals = vals[vals > 0]
        ms = -vals
        out.update(int(m) for m in ms[(ms >= lo) & (ms <= hi)])
    return SetReport(sorted(out), True)


def preorder_less(j: int, m, n, e: Enumeration, w: Window) -> bool:
    """m <*_j n, that is m - n ∈ D_j.  Values outside the window with a
    nonnegative difference are decidable (D_j is strictly negative); a
    difference below the window cannot be decided and raises."""
    diff = vec_sub(as_vec(m), as_vec(n))[0]
    if w.lo[0] <= diff <= w.hi[0]:
        return diff in {v[0] for v in d_set(j, e, w).members}
    if diff >= 0:
        return False
    raise UndecidableWindow("undecidable within window")


def parse_problem_json(d: dict):
    """Parse the shared wire format {"k": ..., "window": ..., "cone": ...}.

    Returns (enumeration, window or None, cone order or None); frequencies
    may be integers or integer vectors.
    """
    from .cones import ConeOrder

    ks = d["k"]
    entries = [tuple(x) if isinstance(x, (list, tuple)) else int(x) for x in ks]
    e = Enumeration(entries)
    w = None
    if "window" in d and d["window"] is not None:
        lo, hi = d["window"]
        w = Window(tuple(lo) if isinstance(lo, (list, tuple)) else lo,
                   tuple(hi) if isinstance(hi, (list, tuple)) else hi)
    cone = ConeOrder.from_json(d["cone"]) if d.get("cone") else None
    return e, w, cone


def check_inclusion_s_in_schur_riesz(e: Enumeration, w: Window):
    """S((k_j)) ⊂ Schur((k_j)) ∩ Riesz(K) inside the window; returns
    (holds, witnesses)."""
    s_members = {v for v in s_set(e).members if w.contains(v)}
    if not s_members:
        return True, []
    schur = schur_set(e, w)
    riesz = riesz_support(e.entries)
    good = schur.as_set() & riesz.as_set()
    witnesses = sorted(v for v in s_members if v not in good)
    return not witnesses, witnesses
