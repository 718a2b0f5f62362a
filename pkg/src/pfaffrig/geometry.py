"""Singular points of codimension-three weighted subvarieties.

Points are typed from the Jacobian of the defining equations evaluated at
the point: the stabilizer mu_r acts on every coordinate with weight a_i mod r
and the Jacobian splits into blocks by residue class, so the tangent weights
of the quotient singularity can be read off class by class.
"""

import random
from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import gcd

from .solve import ExtField, NonReduced, PositiveDimensional, weighted_points

CODIM = 3


class NotQuasiSmooth(ValueError):
    pass


class BasketMismatch(ValueError):
    pass


def canonical_type(r, residues):
    """Normalize tangent residues to (r, a) with 1/r(1, a, r - a), a <= r - a.

    Returns None when the residues are not of terminal shape.
    """
    res = [b % r for b in residues]
    if len(res) != 3 or r < 2:
        return None
    for i in range(3):
        u = res[i]
        if gcd(u, r) != 1:
            continue
        inv = pow(u, -1, r)
        rest = sorted((res[j] * inv) % r for j in range(3) if j != i)
        if rest[0] and rest[0] + rest[1] == r and gcd(rest[0], r) == 1:
            a = min(rest)
            return (r, a)
    return None


class QuotientPoint:
    """A cyclic quotient singular point 1/r(1, a, r - a) of X."""

    def __init__(self, location, r, tangent_indices, tangent_weights, eliminated=(),
                 field=None, coords=None, count=Fraction(1)):
        self.location = location
        self.r = r
        self.tangent_indices = tuple(tangent_indices)
        self.tangent_weights = tuple(tangent_weights)
        self.eliminated = list(eliminated)
        self.field = field
        self.coords = coords
        self.count = Fraction(count)
        self.type = canonical_type(r, self.tangent_weights)

    @property
    def local_weights(self):
        return tuple(w % self.r for w in self.tangent_weights)

    @property
    def a(self):
        return None if self.type is None else self.type[1]

    @property
    def is_terminal(self):
        return self.type is not None

    @property
    def rational(self):
        return self.field is None or self.field.degree == 1

    @property
    def label(self):
        if self.type is None:
            return "1/%d%s" % (self.r, self.local_weights)
        r, a = self.type
        return "1/%d(1,%d,%d)" % (r, a, r - a)

    def __repr__(self):
        return "QuotientPoint(%s at %s, weights=%s, count=%s)" % (
            self.label, self.location, self.tangent_weights, self.count)


class Basket:
    def __init__(self, items=None):
        self.items = Counter()
        for k, v in dict(items or {}).items():
            if v:
                self.items[tuple(k)] = v

    def add(self, r, a, mult=1):
        self.items[(r, a)] += mult

    def __eq__(self, other):
        if isinstance(other, Basket):
            other = other.items
        return +self.items == +Counter(other)

    def __iter__(self):
        return iter(sorted(self.items.items()))

    def total(self):
        return sum(self.items.values())

    def labels(self):
        out = []
        for (r, a), m in sorted(self.items.items()):
            lab = "1/%d(1,%d,%d)" % (r, a, r - a)
            out.append(lab if m == 1 else "%d x %s" % (m, lab))
        return out

    def __repr__(self):
        return "Basket(%s)" % ", ".join(self.labels())


def wellformed_check(space):
    w = space.weights if hasattr(space, "weights") else tuple(space)
    for sub in combinations(w, len(w) - 1):
        g = 0
        for a in sub:
            g = gcd(g, a)
        if g != 1:
            return False
    return True


def _pure_power(f, k):
    n = f.space.n
    for e in f.terms:
        if e[k] and all(e[i] == 0 for i in range(n) if i != k):
            return e
    return None


def vertex_membership(X, k):
    """True iff the coordinate point p_{x_k} lies on X."""
    return all(_pure_power(f, k) is None for f in X)


def _vertex_candidates(X, k):
    """(i, j, l) with x_k^l x_i appearing in equation j."""
    space = X[0].space
    out = []
    for j, f in enumerate(X):
        for e in f.terms:
            if e[k] and sum(e) == e[k] + 1:
                i = next(t for t in range(space.n) if t != k and e[t])
                out.append((i, j, e[k]))
    return out


def _match(cands, columns):
    """Bipartite matching of the given columns to equations."""
    adj = {}
    for i, j, l in cands:
        if i in columns:
            adj.setdefault(i, []).append((j, l))
    owner = {}

    def augment(i, seen):
        for j, l in adj.get(i, ()):
            if j in seen:
                continue
            seen.add(j)
            if j not in owner or augment(owner[j][0], seen):
                owner[j] = (i, l)
                return True
        return False

    for i in columns:
        if not augment(i, set()):
            return None
    return sorted((i, j, l) for j, (i, l) in owner.items())


def jacobian_at(X, K, point):
    space = X[0].space
    rows = []
    for f in X:
        rows.append([K.eval_terms(f.differentiate(i).terms, point) for i in range(space.n)])
    return rows


def _type_from_jacobian(X, K, point, r, anchor):
    """Tangent coordinates and eliminated columns at a point with stabilizer mu_r.

    Within each residue class the eliminated coordinates are chosen greedily
    from the largest weight down; in class zero the anchor coordinate itself
    carries the Euler direction.
    """
    space = X[0].space
    J = jacobian_at(X, K, point)
    classes = {}
    for i, a in enumerate(space.weights):
        classes.setdefault(a % r, []).append(i)
    tangent, eliminated = [], []
    total_rank = 0
    for c, cols in sorted(classes.items()):
        order = sorted(cols, key=lambda i: (-space.weights[i], i))
        chosen = []
        rank = 0
        for i in order:
            trial = chosen + [i]
            rk = K.rank([[row[t] for t in trial] for row in J])
            if rk > rank:
                chosen.append(i)
                rank = rk
        total_rank += rank
        eliminated += chosen
        rest = [i for i in cols if i not in chosen]
        if c == 0:
            if anchor in rest:
                rest.remove(anchor)
            else:
                rest.remove(min(rest, key=lambda i: (space.weights[i], i)))
        tangent += rest
    return sorted(tangent), sorted(eliminated), total_rank


def quasismooth_at_vertex(X, k):
    """Type the vertex p_{x_k} of X; raises NotQuasiSmooth with a diagnostic."""
    space = X[0].space
    if not vertex_membership(X, k):
        raise ValueError("vertex p_%s does not lie on X" % space.names[k])
    r = space.weights[k]
    K = ExtField(X[0].p)
    point = tuple(K.one() if i == k else K.zero for i in range(space.n))
    tangent, elim, rank = _type_from_jacobian(X, K, point, r, k)
    cands = _vertex_candidates(X, k)
    if rank < CODIM:
        have = sorted({space.names[i] for i, _j, _l in cands})
        missing = [space.names[i] for i in range(space.n) if i != k and space.names[i] not in have]
        raise NotQuasiSmooth("not quasi-smooth at p_%s: Jacobian rank %d < %d; no monomial %s^l*v for v in %s"
                             % (space.names[k], rank, CODIM, space.names[k], missing))
    matching = _match(cands, elim) or []
    return QuotientPoint(k, r, tangent, [space.weights[i] for i in tangent],
                         eliminated=matching, field=K, coords=point)


def singular_strata(space):
    """For each r > 1, the coordinates whose weight is divisible by r."""
    rs = sorted({d for a in space.weights for d in range(2, a + 1) if a % d == 0})
    return [(r, [i for i, a in enumerate(space.weights) if a % r == 0]) for r in rs]


def stratum_singularities(X, stratum, r=None, budget=None, rng=None):
    """Quotient points of X in the coordinate stratum spanned by ``stratum``.

    Only points whose stabilizer is exactly ``r`` (default: gcd of the stratum
    weights) are returned. Points over extension fields are typed over that
    field; ``QuotientPoint.rational`` tells whether an extension was needed.
    Raises NonReduced for a degenerate member.
    """
    space = X[0].space
    p = X[0].p
    stratum = list(stratum)
    if r is None:
        r = 0
        for i in stratum:
            r = gcd(r, space.weights[i])
    rng = rng or random.Random(0)
    try:
        pts = weighted_points(X, stratum, p, budget=budget, rng=rng)
    except PositiveDimensional as exc:
        raise NotQuasiSmooth("X meets the stratum %s in a curve" % [space.names[i] for i in stratum]) from exc
    out = []
    for sp in pts:
        if sp.stabilizer != r:
            continue
        anchor = stratum[sp.chart]
        tangent, elim, rank = _type_from_jacobian(X, sp.field, sp.coords, r, anchor)
        if rank < CODIM:
            raise NotQuasiSmooth("not quasi-smooth at a point of the stratum %s"
                                 % [space.names[i] for i in stratum])
        nz = sp.nonzero()
        loc = anchor if nz == [anchor] else ("stratum", tuple(space.names[i] for i in stratum))
        out.append(QuotientPoint(loc, r, tangent, [space.weights[i] for i in tangent],
                                 field=sp.field, coords=sp.coords, count=sp.count))
    return out


def singular_points(X, budget=None, rng=None):
    space = X[0].space
    out = []
    for r, stratum in singular_strata(space):
        out += stratum_singularities(X, stratum, r, budget=budget, rng=rng)
    return out


def classify_type_I(p, A3):
    """'TypeI' iff the integer tangent weights are (1, b, a - b) and A^3 > 1/(a b (a - b))."""
    r = p.r
    w = sorted(p.tangent_weights)
    A3 = Fraction(A3)
    if len(w) == 3 and w[0] == 1 and w[1] + w[2] == r and w[1] > 0:
        if A3 > Fraction(1, r * w[1] * w[2]):
            return "TypeI"
    return "NotTypeI"


def basket(X, expected=None, budget=None, rng=None):
    """Basket of a member; compares against ``expected`` (a Basket or dict) when given."""
    acc = Counter()
    for pt in singular_points(X, budget=budget, rng=rng):
        if not pt.is_terminal:
            raise NotQuasiSmooth("non-terminal quotient point %r" % pt)
        acc[pt.type] += pt.count
    b = Basket()
    for (r, a), c in sorted(acc.items()):
        if c.denominator != 1:
            raise ValueError("fractional point count %s for 1/%d(1,%d,%d)" % (c, r, a, r - a))
        b.add(r, a, int(c))
    if expected is not None and not (b == expected):
        raise BasketMismatch("basket %r differs from the catalog basket %r" % (b, Basket(expected)))
    return b


def family_basket(spec, seed=1, p=10007, budget=None):
    from .pfaffian import compute_pfaffians, sample_member
    X = compute_pfaffians(sample_member(spec, seed, p))
    return basket(X, expected=spec.basket, budget=budget, rng=random.Random(seed))


__all__ = ["QuotientPoint", "Basket", "NotQuasiSmooth", "BasketMismatch", "NonReduced", "canonical_type",
           "wellformed_check", "vertex_membership", "quasismooth_at_vertex", "stratum_singularities",
           "singular_points", "classify_type_I", "basket", "family_basket", "singular_strata"]
