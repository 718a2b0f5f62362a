"""Groebner bases over F_p and the dimension oracle built on them.

Two reducers share the pair bookkeeping (Gebauer-Moeller criteria): an
F4-style one that reduces a batch of S-pairs by dense row echelon form, and
the classic one-pair-at-a-time Buchberger loop. They are cross-checked in the
tests; ``buchberger`` uses the batched reducer by default.
"""

import heapq
from itertools import combinations

import numpy as np

from .kernels import rref_mod_p
from .wpoly import GradedPoly

DEFAULT_BUDGET = 400000
EMPTY = "empty"


class BudgetExceeded(RuntimeError):
    """The Groebner computation ran out of its step budget (result: inconclusive)."""


class MonomialOrder:
    """Graded reverse lexicographic (default) or lexicographic order.

    ``perm`` lists variable indices from largest to smallest variable.
    """

    __slots__ = ("kind", "perm", "n")

    def __init__(self, n, kind="grevlex", perm=None):
        if kind not in ("grevlex", "lex"):
            raise ValueError("unknown order %r" % kind)
        perm = tuple(range(n)) if perm is None else tuple(perm)
        if sorted(perm) != list(range(n)):
            raise ValueError("perm must be a permutation of range(n)")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "n", n)

    def __setattr__(self, key, value):
        raise AttributeError("MonomialOrder is immutable")

    def key(self, e):
        if self.kind == "lex":
            return tuple(e[i] for i in self.perm)
        return (sum(e),) + tuple(-e[i] for i in reversed(self.perm))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.perm, self.n) == (other.kind, other.perm, other.n)

    def __hash__(self):
        return hash((self.kind, self.perm, self.n))

    def __repr__(self):
        return "MonomialOrder(%s, %r)" % (self.kind, self.perm)


class GroebnerBasis:
    """A Groebner basis (list of monic GradedPoly, decreasing leading monomials)."""

    def __init__(self, generators, order, reduced=True, space=None, p=None):
        self.generators = list(generators)
        self.order = order
        self.reduced = reduced
        self.space = self.generators[0].space if self.generators else space
        self.p = self.generators[0].p if self.generators else p
        self._lms = [leading_monomial(g, order) for g in self.generators]

    @property
    def leading_monomials(self):
        return list(self._lms)

    def is_unit(self):
        return any(not any(m) for m in self._lms)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return "GroebnerBasis(%d generators, %r)" % (len(self.generators), self.order)


def leading_monomial(f, order):
    if isinstance(f, GradedPoly):
        f = f.terms
    return max(f, key=order.key)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _disjoint(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _monic(f, lm, p):
    inv = pow(f[lm], p - 2, p)
    return {e: c * inv % p for e, c in f.items()}


class _PairSet:
    """Gebauer-Moeller pair bookkeeping shared by both reducers."""

    def __init__(self):
        self.polys = []
        self.lms = []
        self.active = []
        self.pairs = []  # (i, j, lcm)

    def add(self, f, lm):
        h = len(self.polys)
        self.polys.append(f)
        self.lms.append(lm)
        lmh = lm
        cands = [(g, _lcm(self.lms[g], lmh)) for g in self.active]
        keep = []
        for idx, (g, l) in enumerate(cands):
            if _disjoint(self.lms[g], lmh):
                keep.append((g, l))
                continue
            others = cands[idx + 1:] + keep
            if not any(_divides(l2, l) for (_g2, l2) in others if l2 != l or _g2 != g):
                keep.append((g, l))
        new_pairs = [(g, h, l) for (g, l) in keep if not _disjoint(self.lms[g], lmh)]
        survivors = []
        for (i, j, l) in self.pairs:
            if (_divides(lmh, l) and _lcm(self.lms[i], lmh) != l and _lcm(self.lms[j], lmh) != l):
                continue
            survivors.append((i, j, l))
        self.pairs = survivors + new_pairs
        self.active = [g for g in self.active if not _divides(lmh, self.lms[g])] + [h]


def _reduce_sparse(f, basis_polys, basis_lms, order, p):
    """Full reduction of dict polynomial f by monic polynomials."""
    key = order.key
    f = dict(f)
    rem = {}
    heap = [tuple(-k for k in key(m)) + (m,) for m in f]
    heapq.heapify(heap)
    while heap:
        item = heapq.heappop(heap)
        m = item[-1]
        c = f.get(m)
        if not c:
            continue
        for g, lg in zip(basis_polys, basis_lms):
            if _divides(lg, m):
                mult = tuple(x - y for x, y in zip(m, lg))
                for e, v in g.items():
                    ee = tuple(a + b for a, b in zip(e, mult))
                    old = f.get(ee)
                    nv = ((old or 0) - c * v) % p
                    if nv:
                        if old is None:
                            heapq.heappush(heap, tuple(-k for k in key(ee)) + (ee,))
                        f[ee] = nv
                    elif old is not None:
                        del f[ee]
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def _f4_round(ps, selected, order, p, budget_state):
    key = order.key
    rows = set()
    for (i, j, l) in selected:
        rows.add((tuple(a - b for a, b in zip(l, ps.lms[i])), i))
        rows.add((tuple(a - b for a, b in zip(l, ps.lms[j])), j))
    rows = list(rows)
    monos = set()
    for mult, i in rows:
        for e in ps.polys[i]:
            monos.add(tuple(a + b for a, b in zip(e, mult)))
    row_lms = {tuple(a + b for a, b in zip(ps.lms[i], mult)) for mult, i in rows}
    done = set(row_lms)
    todo = [m for m in monos if m not in done]
    active_lms = [(g, ps.lms[g]) for g in ps.active]
    while todo:
        m = todo.pop()
        if m in done:
            continue
        done.add(m)
        for g, lg in active_lms:
            if _divides(lg, m):
                mult = tuple(a - b for a, b in zip(m, lg))
                rows.append((mult, g))
                for e in ps.polys[g]:
                    ee = tuple(a + b for a, b in zip(e, mult))
                    if ee not in monos:
                        monos.add(ee)
                        todo.append(ee)
                break
    budget_state[0] -= len(rows)
    if budget_state[0] < 0:
        raise BudgetExceeded("Groebner step budget exhausted")
    cols = sorted(monos, key=key, reverse=True)
    col_index = {m: k for k, m in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, (mult, i) in enumerate(rows):
        for e, c in ps.polys[i].items():
            mat[r, col_index[tuple(a + b for a, b in zip(e, mult))]] = c
    all_row_lms = {tuple(a + b for a, b in zip(ps.lms[i], mult)) for mult, i in rows}
    red, pivots = rref_mod_p(mat, p)
    out = []
    for r, pc in enumerate(pivots):
        lm = cols[pc]
        if lm in all_row_lms:
            continue
        row = red[r]
        nz = np.nonzero(row)[0]
        out.append(({cols[k]: int(row[k]) for k in nz}, lm))
    return out


def _classic_round(ps, pair, order, p, budget_state):
    i, j, l = pair
    budget_state[0] -= 1
    if budget_state[0] < 0:
        raise BudgetExceeded("Groebner step budget exhausted")
    mi = tuple(a - b for a, b in zip(l, ps.lms[i]))
    mj = tuple(a - b for a, b in zip(l, ps.lms[j]))
    s = {}
    for e, c in ps.polys[i].items():
        s[tuple(a + b for a, b in zip(e, mi))] = c
    for e, c in ps.polys[j].items():
        ee = tuple(a + b for a, b in zip(e, mj))
        v = (s.get(ee, 0) - c) % p
        if v:
            s[ee] = v
        else:
            s.pop(ee, None)
    act = ps.active
    r = _reduce_sparse(s, [ps.polys[g] for g in act], [ps.lms[g] for g in act], order, p)
    if not r:
        return []
    lm = leading_monomial(r, order)
    return [(_monic(r, lm, p), lm)]


def _check_gens(gens):
    gens = [g for g in gens]
    if not gens:
        raise ValueError("empty generator list")
    p = gens[0].p
    if not p:
        raise ValueError("Groebner bases are computed over F_p only")
    for g in gens:
        if g.p != p:
            raise ValueError("field mismatch")
        if g.space.weights != gens[0].space.weights:
            raise ValueError("generators live in different rings")
    return gens, p


def buchberger(gens, order=None, budget=DEFAULT_BUDGET, method="f4"):
    """Reduced Groebner basis of the ideal generated by ``gens`` over F_p.

    Raises BudgetExceeded when more than ``budget`` reduction rows (F4) or
    S-pairs (classic) are needed.
    """
    gens, p = _check_gens(gens)
    space = gens[0].space
    if order is None:
        order = MonomialOrder(space.n)
    ps = _PairSet()
    budget_state = [budget]
    start = [g.terms for g in gens if g.terms]
    if not start:
        return GroebnerBasis([], order, space=space, p=p)
    # seed with inter-reduced input to keep the first matrices small
    for f in sorted(start, key=lambda f: order.key(leading_monomial(f, order))):
        act = ps.active
        r = _reduce_sparse(f, [ps.polys[g] for g in act], [ps.lms[g] for g in act], order, p)
        if r:
            lm = leading_monomial(r, order)
            ps.add(_monic(r, lm, p), lm)
    while ps.pairs:
        if method == "f4":
            dmin = min(sum(l) for (_i, _j, l) in ps.pairs)
            selected = [pr for pr in ps.pairs if sum(pr[2]) == dmin]
            ps.pairs = [pr for pr in ps.pairs if sum(pr[2]) != dmin]
            new = _f4_round(ps, selected, order, p, budget_state)
        elif method == "classic":
            k = min(range(len(ps.pairs)), key=lambda t: order.key(ps.pairs[t][2]))
            pair = ps.pairs.pop(k)
            new = _classic_round(ps, pair, order, p, budget_state)
        else:
            raise ValueError("unknown method %r" % method)
        for f, lm in sorted(new, key=lambda t: order.key(t[1])):
            if any(_divides(ps.lms[g], lm) for g in ps.active):
                act = ps.active
                f = _reduce_sparse(f, [ps.polys[g] for g in act], [ps.lms[g] for g in act], order, p)
                if not f:
                    continue
                lm = leading_monomial(f, order)
                f = _monic(f, lm, p)
            ps.add(f, lm)
    return _reduced_basis(ps, order, p, space)


def _reduced_basis(ps, order, p, space):
    idx = [g for g in ps.active]
    # minimal basis
    minimal = []
    for g in idx:
        if not any(h != g and _divides(ps.lms[h], ps.lms[g]) and (ps.lms[h] != ps.lms[g] or h < g) for h in idx):
            minimal.append(g)
    out = []
    for g in minimal:
        others = [h for h in minimal if h != g]
        lm = ps.lms[g]
        f = dict(ps.polys[g])
        c = f.pop(lm)
        tail = _reduce_sparse(f, [ps.polys[h] for h in others], [ps.lms[h] for h in others], order, p)
        tail[lm] = c
        out.append((lm, _monic(tail, lm, p)))
    out.sort(key=lambda t: order.key(t[0]), reverse=True)
    return GroebnerBasis([GradedPoly(space, f, p, _clean=True) for _lm, f in out], order, reduced=True)


def normal_form(f, gb):
    """Remainder of f modulo the Groebner basis gb."""
    if f.p != gb.p:
        raise ValueError("field mismatch")
    if f.space.weights != gb.space.weights:
        raise ValueError("ring mismatch")
    r = _reduce_sparse(f.terms, [g.terms for g in gb.generators], gb.leading_monomials, gb.order, gb.p)
    return GradedPoly(f.space, r, f.p, _clean=True)


def s_polynomial(f, g, order):
    p = f.p
    lf, lg = leading_monomial(f, order), leading_monomial(g, order)
    l = _lcm(lf, lg)
    a = f.mul_monomial(tuple(x - y for x, y in zip(l, lf)), pow(f.terms[lf], p - 2, p))
    b = g.mul_monomial(tuple(x - y for x, y in zip(l, lg)), pow(g.terms[lg], p - 2, p))
    return a - b


def is_groebner(gb):
    """Every S-polynomial of basis pairs reduces to zero."""
    for f, g in combinations(gb.generators, 2):
        if not normal_form(s_polynomial(f, g, gb.order), gb).is_zero():
            return False
    return True


def affine_dimension(gb):
    """Krull dimension of V(I) in affine n-space from the leading-term staircase.

    Returns EMPTY for the unit ideal.
    """
    lms = gb.leading_monomials
    n = gb.order.n
    if any(not any(m) for m in lms):
        return EMPTY
    if not lms:
        return n
    supports = [frozenset(i for i, v in enumerate(m) if v) for m in lms]
    for size in range(n, -1, -1):
        for u in combinations(range(n), size):
            us = set(u)
            if not any(s <= us for s in supports):
                return size
    return 0


def standard_monomial_count(gb):
    """Number of standard monomials (vector space dimension of the quotient).

    Only defined for zero-dimensional ideals; raises ValueError otherwise.
    """
    lms = gb.leading_monomials
    n = gb.order.n
    if any(not any(m) for m in lms):
        return 0
    bounds = []
    for i in range(n):
        pure = [m[i] for m in lms if m[i] and all(v == 0 for j, v in enumerate(m) if j != i)]
        if not pure:
            raise ValueError("ideal is not zero-dimensional")
        bounds.append(min(pure))
    count = 0

    def rec(i, e):
        nonlocal count
        if i == n:
            if not any(_divides(m, e) for m in lms):
                count += 1
            return
        for k in range(bounds[i]):
            rec(i + 1, e + (k,))

    rec(0, ())
    return count


def cone_dimension(polys, budget=DEFAULT_BUDGET):
    """Affine dimension of V(polys); convenience wrapper."""
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        return None
    return affine_dimension(buchberger(polys, budget=budget))
