"""Finite fields F_p[s]/(h) and zero-dimensional system solving over F_p.

Points whose coordinates are not rational are represented in the residue
field of an irreducible factor, one representative per Galois orbit.
"""

import random
from fractions import Fraction
from math import gcd

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (gf_add, gf_diff, gf_factor_sqf, gf_gcd, gf_gcdex, gf_mul,
                                     gf_neg, gf_rem, gf_sub)

from .ideal import (EMPTY, MonomialOrder, affine_dimension, buchberger, leading_monomial,
                    standard_monomial_count)
from .wpoly import GradedPoly, WeightSystem


class PositiveDimensional(ValueError):
    """The system has infinitely many solutions."""


class NonReduced(ValueError):
    """The system has a multiple solution (degenerate member)."""


def _ints(f):
    return tuple(int(c) for c in f)


def _strip(f):
    f = list(f)
    while f and f[0] == 0:
        f.pop(0)
    return f


class ExtField:
    """The field F_p[s]/(h) for a monic irreducible h (dense, highest first)."""

    def __init__(self, p, modulus=None):
        self.p = p
        if modulus is None:
            modulus = [1, 0]
        modulus = [int(c) % p for c in modulus]
        lc = modulus[0]
        inv = pow(lc, p - 2, p)
        self.modulus = tuple(c * inv % p for c in modulus)
        self.degree = len(self.modulus) - 1

    def __eq__(self, other):
        return isinstance(other, ExtField) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return "GF(%d^%d)" % (self.p, self.degree)

    def elem(self, f):
        return _ints(gf_rem(_strip(f), list(self.modulus), self.p, ZZ))

    def from_int(self, c):
        c = int(c) % self.p
        return (c,) if c else ()

    def gen(self):
        return self.elem([1, 0])

    zero = ()

    def one(self):
        return (1,)

    def is_zero(self, a):
        return not a

    def add(self, a, b):
        return _ints(gf_add(list(a), list(b), self.p, ZZ))

    def sub(self, a, b):
        return _ints(gf_sub(list(a), list(b), self.p, ZZ))

    def neg(self, a):
        return _ints(gf_neg(list(a), self.p, ZZ))

    def mul(self, a, b):
        if not a or not b:
            return ()
        return _ints(gf_rem(gf_mul(list(a), list(b), self.p, ZZ), list(self.modulus), self.p, ZZ))

    def pow(self, a, k):
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        s, _t, h = gf_gcdex(list(a), list(self.modulus), self.p, ZZ)
        # h is a nonzero constant since the modulus is irreducible
        c = pow(int(h[-1]), self.p - 2, self.p)
        return self.mul(tuple(s), (c,))

    def scalar(self, a):
        """The F_p value of a, or None when a is not in the prime field."""
        if not a:
            return 0
        if len(a) == 1:
            return int(a[0])
        return None

    def eval_terms(self, terms, point):
        pw = {}
        total = ()
        for e, c in terms.items():
            v = self.from_int(c)
            for i, k in enumerate(e):
                if k:
                    if not point[i]:
                        v = ()
                        break
                    key = (i, k)
                    if key not in pw:
                        pw[key] = self.pow(point[i], k)
                    v = self.mul(v, pw[key])
            if v:
                total = self.add(total, v)
        return total

    def rank(self, rows):
        """Rank of a matrix with entries in this field."""
        m = [list(r) for r in rows]
        if not m:
            return 0
        nrows, ncols = len(m), len(m[0])
        rank = 0
        for col in range(ncols):
            piv = next((i for i in range(rank, nrows) if m[i][col]), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            inv = self.inv(m[rank][col])
            m[rank] = [self.mul(x, inv) for x in m[rank]]
            for i in range(nrows):
                if i != rank and m[i][col]:
                    f = m[i][col]
                    m[i] = [self.sub(x, self.mul(f, y)) for x, y in zip(m[i], m[rank])]
            rank += 1
        return rank


def univariate_dense(f, var):
    """Dense coefficient list (highest first) of a polynomial in one variable."""
    deg = max(e[var] for e in f.terms) if f.terms else 0
    out = [0] * (deg + 1)
    for e, c in f.terms.items():
        out[deg - e[var]] = c
    return out


def _eval_dense_at(K, coeffs, s):
    acc = ()
    for c in coeffs:
        acc = K.add(K.mul(acc, s), K.from_int(c))
    return acc


def affine_solutions(polys, p, budget=None, rng=None, attempts=6):
    """All solutions of a zero-dimensional affine system over the algebraic closure.

    Returns a list of ``(K, point)`` with one representative point per Galois
    orbit; ``K.degree`` is the orbit size. Raises PositiveDimensional or
    NonReduced.
    """
    polys = [f for f in polys if f.terms]
    if not polys:
        raise PositiveDimensional("no equations")
    space = polys[0].space
    n = space.n
    kw = {} if budget is None else {"budget": budget}
    if n == 0 or all(not f.variables() for f in polys):
        if any(f.terms for f in polys):
            return []
        return [(ExtField(p), ())]
    gb = buchberger(polys, **kw)
    dim = affine_dimension(gb)
    if dim == EMPTY:
        return []
    if dim > 0:
        raise PositiveDimensional("solution set has dimension %d" % dim)
    count = standard_monomial_count(gb)
    rng = rng or random.Random(0)
    last = n - 1
    lex = MonomialOrder(n, "lex")
    best = None
    for attempt in range(attempts):
        cs = [0] * last if attempt == 0 else [rng.randrange(p) for _ in range(last)]
        if any(cs):
            # old x_last = new x_last - sum c_i x_i
            xl = GradedPoly.var(space, last, p)
            for i, c in enumerate(cs):
                xl = xl - GradedPoly.var(space, i, p).scale(c)
            work = [f.substitute({last: xl}) for f in gb.generators]
        else:
            work = list(gb.generators)
        lgb = buchberger(work, lex, **kw)
        gens = lgb.generators
        uni = [g for g in gens if all(i == last for i in g.variables())]
        if len(uni) != 1:
            continue
        h = univariate_dense(uni[0], last)
        deg = len(h) - 1
        best = max(best or 0, deg)
        if deg != count or len(gens) != n:
            continue
        shape = {}
        ok = True
        for g in gens:
            if g is uni[0]:
                continue
            lm = leading_monomial(g, lex)
            lead_var = [i for i, v in enumerate(lm) if v]
            if len(lead_var) != 1 or lm[lead_var[0]] != 1 or lead_var[0] == last:
                ok = False
                break
            i = lead_var[0]
            tail = g - GradedPoly.var(space, i, p)
            if any(j != last for j in tail.variables()):
                ok = False
                break
            shape[i] = univariate_dense(-tail, last)
        if not ok or len(shape) != last:
            continue
        hh = [int(c) for c in h]
        if len(gf_gcd(hh, gf_diff(hh, p, ZZ), p, ZZ)) > 1:
            raise NonReduced("repeated root in the eliminant")
        _lc, factors = gf_factor_sqf(hh, p, ZZ)
        out = []
        for fac in factors:
            K = ExtField(p, fac)
            s = K.gen() if K.degree > 1 else K.from_int(-fac[1] * pow(fac[0], p - 2, p))
            pt = [None] * n
            for i in range(last):
                pt[i] = _eval_dense_at(K, shape[i], s)
            xl_old = s
            for i, c in enumerate(cs):
                if c:
                    xl_old = K.sub(xl_old, K.mul(K.from_int(c), pt[i]))
            pt[last] = xl_old
            out.append((K, tuple(pt)))
        return out
    if best is not None and best < count:
        raise NonReduced("system has %d solutions with multiplicity but only %d distinct" % (count, best))
    raise NonReduced("could not bring the system into shape position")


class StratumPoint:
    """A Galois orbit of points of X on a coordinate stratum."""

    def __init__(self, field, coords, stabilizer, count, chart):
        self.field = field
        self.coords = coords
        self.stabilizer = stabilizer
        self.count = count
        self.chart = chart

    def nonzero(self):
        return [i for i, c in enumerate(self.coords) if c]

    def is_rational(self):
        return self.field.degree == 1

    def rational_coords(self):
        return [self.field.scalar(c) for c in self.coords]

    def __repr__(self):
        return "StratumPoint(chart=%d, stab=%d, count=%s, field=%r)" % (
            self.chart, self.stabilizer, self.count, self.field)


def weighted_points(polys, coords, p, budget=None, rng=None):
    """Points of V(polys) inside the coordinate stratum spanned by ``coords``.

    All coordinates outside ``coords`` are set to zero. The stratum is covered
    by the cells {x_c0 != 0}, {x_c0 = 0, x_c1 != 0}, ...; each cell is solved
    in the affine chart x_ck = 1. Returns StratumPoint objects whose ``count``
    (a Fraction) is the number of projective points they stand for.
    """
    space = polys[0].space
    coords = list(coords)
    out = []
    for j, k in enumerate(coords):
        free = coords[j + 1:]
        sub = WeightSystem([space.weights[i] for i in free] or [1], [space.names[i] for i in free] or ["_"])
        eqs = []
        for f in polys:
            t = {}
            for e, c in f.terms.items():
                if any(e[i] for i in range(space.n) if i not in free and i != k):
                    continue
                ee = tuple(e[i] for i in free) if free else (0,)
                t[ee] = (t.get(ee, 0) + c) % p
            eqs.append(GradedPoly(sub, {e: c for e, c in t.items() if c}, p, _clean=True))
        if not free:
            eqs_c = [f for f in eqs if f.terms]
            sols = [] if eqs_c else [(ExtField(p), ())]
        else:
            sols = affine_solutions(eqs, p, budget=budget, rng=rng)
        ak = space.weights[k]
        for K, pt in sols:
            full = [K.zero] * space.n
            full[k] = K.one()
            for i, v in zip(free, pt):
                full[i] = v
            g = ak
            for i, v in enumerate(full):
                if v:
                    g = gcd(g, space.weights[i])
            orbit = ak // g
            out.append(StratumPoint(K, tuple(full), g, Fraction(K.degree, orbit), j))
    return out
