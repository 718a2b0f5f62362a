"""Kawamata blowups of terminal quotient points embedded at a coordinate vertex.

Weights live on all coordinates; the centre coordinate x_k carries weight 0
and every polynomial is read in the chart x_k = 1.
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import gcd

from .wpoly import FractionalWeight, GradedPoly, GradingError


class KBLFailure(ValueError):
    pass


class BlowupData:
    """Intersection numbers of the Kawamata blowup of a 1/r(1,a,r-a) point."""

    def __init__(self, r, a, A3):
        if not (1 <= a <= r - 1) or gcd(a, r) != 1:
            raise ValueError("not a terminal type 1/%d(1,%d,%d)" % (r, a, r - a))
        self.r = r
        self.a = a
        self.A3 = Fraction(A3)

    @property
    def E3(self):
        return Fraction(self.r * self.r, self.a * (self.r - self.a))

    @property
    def discrepancy(self):
        return Fraction(1, self.r)

    @property
    def B(self):
        return DivisorClass(1, -self.discrepancy)

    @property
    def B3(self):
        return triple_product(self.B, self.B, self.B, self)

    def new_points(self):
        """Quotient points of Y lying on E: 1/a(1,r-a,-1) and 1/(r-a)(1,a,-1)."""
        out = []
        for s, t in ((self.a, self.r - self.a), (self.r - self.a, self.a)):
            if s > 1:
                out.append((s, (1, t % s, (-1) % s)))
        return out

    def __repr__(self):
        return "BlowupData(1/%d(1,%d,%d), A3=%s)" % (self.r, self.a, self.r - self.a, self.A3)


class DivisorClass:
    """lam * phi^*A + mu * E."""

    __slots__ = ("lam", "mu")

    def __init__(self, lam, mu):
        self.lam = Fraction(lam)
        self.mu = Fraction(mu)

    @classmethod
    def from_BE(cls, b, e, r):
        return cls(b, Fraction(-b, r) + e)

    def to_BE(self, r):
        return self.lam, self.mu + self.lam / r

    @classmethod
    def from_section(cls, degree, order):
        """Class of the proper transform of a section of degree d vanishing to order >= o."""
        return cls(degree, -Fraction(order))

    def __add__(self, other):
        return DivisorClass(self.lam + other.lam, self.mu + other.mu)

    def scale(self, c):
        return DivisorClass(self.lam * c, self.mu * c)

    def __eq__(self, other):
        return isinstance(other, DivisorClass) and (self.lam, self.mu) == (other.lam, other.mu)

    def __hash__(self):
        return hash((self.lam, self.mu))

    def __repr__(self):
        return "DivisorClass(%s, %s)" % (self.lam, self.mu)


def triple_product(D1, D2, D3, data):
    """(phi^*A)^2.E = phi^*A.E^2 = 0, so only the pure terms survive."""
    return D1.lam * D2.lam * D3.lam * data.A3 + D1.mu * D2.mu * D3.mu * data.E3


class AdmissibleWeight:
    """1/r (b_i) on the coordinates other than the centre x_k."""

    def __init__(self, space, k, r, numerators):
        nums = list(numerators)
        if len(nums) == space.n - 1:
            nums.insert(k, 0)
        nums[k] = 0
        self.space = space
        self.k = k
        self.r = r
        self.fw = FractionalWeight(nums, r)

    @property
    def numerators(self):
        return self.fw.numerators

    def b(self, i):
        return self.fw.numerators[self.space.index(i)]

    def order(self, i):
        return Fraction(self.b(i), self.r)

    def others(self):
        return [i for i in range(self.space.n) if i != self.k]

    def as_tuple(self):
        return tuple(self.fw.numerators[i] for i in self.others())

    def is_admissible(self):
        a = self.space.weights
        return all(self.b(i) > 0 and (self.b(i) - a[i]) % self.r == 0 for i in self.others())

    def bumped(self, i, step=None):
        nums = list(self.fw.numerators)
        nums[self.space.index(i)] += self.r if step is None else step
        return AdmissibleWeight(self.space, self.k, self.r, nums)

    def __eq__(self, other):
        return isinstance(other, AdmissibleWeight) and (self.k, self.fw) == (other.k, other.fw)

    def __repr__(self):
        names = [self.space.names[i] for i in self.others()]
        return "1/%d(%s) over (%s)" % (self.r, ",".join(map(str, self.as_tuple())), ",".join(names))


def residue(a, r):
    """Representative of a mod r in (0, r]."""
    return (a - 1) % r + 1


def initial_weight(space, k, r=None):
    r = r or space.weights[k]
    return AdmissibleWeight(space, k, r, [residue(a, r) for a in space.weights])


def weight_from_tuple(space, k, r, values):
    return AdmissibleWeight(space, k, r, list(values))


def chart(f, k):
    return f.dehomogenize(k)


def lowest_parts(X, w):
    """[(F_j^w, weight)] in the chart x_k = 1."""
    return [chart(f, w.k).lowest_weight_part(w.fw) for f in X]


def poly_order(f, w):
    """Lower bound for ord_E(f): the least w-weight of its monomials."""
    return chart(f, w.k).lowest_weight_part(w.fw)[1]


def _linear_monomials(part, k):
    """Coordinates i with the pure monomial x_i present in a chart polynomial."""
    out = {}
    for e, c in part.terms.items():
        nz = [i for i, v in enumerate(e) if v and i != k]
        if len(nz) == 1 and e[nz[0]] == 1:
            out[nz[0]] = c
    return out


class KBLResult:
    def __init__(self, ok, matching=(), tangent=(), reason=""):
        self.ok = ok
        self.matching = list(matching)
        self.tangent = list(tangent)
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "KBLResult(%s, matching=%s, tangent=%s%s)" % (
            self.ok, self.matching, self.tangent, ", " + self.reason if self.reason else "")


def kbl_check(X, w, a, codim=3):
    """Kawamata blowup condition for the weight w at the vertex p_{x_k}.

    Looks for ``codim`` coordinates x_i, each appearing as a linear monomial in
    the lowest part of a distinct equation, such that the remaining three
    coordinates keep their initial weights and these are {1, a, r - a}.
    Returns a KBLResult with matching [(equation index, coordinate index)].
    """
    space = w.space
    r = w.r
    k = w.k
    parts = lowest_parts(X, w)
    lin = [_linear_monomials(part, k) for part, _wt in parts]
    want = sorted([1, a, r - a])
    others = w.others()
    for elim in combinations(others, codim):
        tangent = [i for i in others if i not in elim]
        tb = [w.b(i) for i in tangent]
        if sorted(tb) != want:
            continue
        if any(w.b(i) != residue(space.weights[i], r) for i in tangent):
            continue
        for eqs in permutations(range(len(X)), codim):
            if all(i in lin[j] for i, j in zip(elim, eqs)):
                return KBLResult(True, sorted(zip(eqs, elim)), tangent)
    return KBLResult(False, reason="no matching of eliminated coordinates for %r" % w)


def bump_weight(X, w, cap=None):
    """Raise b_i by r while some lowest part F_j^w is a single monomial x_i.

    Every step keeps the weight a valid lower bound for ord_E. Stops after
    ``cap`` rounds (default: largest equation degree over r).
    """
    if cap is None:
        cap = max(f.degree for f in X) // w.r + 1
    for _ in range(cap):
        changed = False
        for part, _wt in lowest_parts(X, w):
            if len(part.terms) == 1:
                lin = _linear_monomials(part, w.k)
                if lin:
                    (i,) = lin
                    w = w.bumped(i)
                    changed = True
                    break
        if not changed:
            return w
    return w


def ord_lower_bound(X, k, i, r=None, w=None):
    w = bump_weight(X, w or initial_weight(X[0].space, k, r))
    return w.order(i)


def eliminate_terms(F, pivot, centre, power=None, max_rounds=40):
    """Make x_centre^m x_pivot the only x_centre^m-divisible term of F.

    Returns (new F, [substitution dicts in order of application]).
    """
    space = F.space
    i1 = space.index(pivot)
    i0 = space.index(centre)
    if power is None:
        power = (F.degree - space.weights[i1]) // space.weights[i0]
    m = power
    piv = tuple(m if t == i0 else (1 if t == i1 else 0) for t in range(space.n))
    if piv not in F.terms:
        raise ValueError("pivot monomial %s^%d*%s is absent (alpha = 0)"
                         % (space.names[i0], m, space.names[i1]))
    record = []
    for _ in range(max_rounds):
        alpha = F.terms[piv]
        h = {}
        for e, c in F.terms.items():
            if e != piv and e[i0] >= m:
                ee = list(e)
                ee[i0] -= m
                h[tuple(ee)] = c
        if not h:
            return F, record
        hp = GradedPoly(space, h, F.p, _clean=True).scale(_inv(alpha, F.p))
        sub = {i1: GradedPoly.var(space, i1, F.p) - hp}
        F = F.substitute(sub)
        record.append(sub)
        if piv not in F.terms:
            raise ValueError("pivot cancelled during elimination")
    raise ValueError("elimination did not terminate")


def _inv(c, p):
    return pow(c, p - 2, p) if p else Fraction(1) / c


def clean_lowest_part(X, w, j, pivot, keep=None):
    """Substitution making F_j^w = alpha*x_pivot (+ terms divisible by ``keep``)."""
    space = w.space
    i = space.index(pivot)
    part, wt = lowest_parts(X, w)[j]
    e_piv = tuple(1 if t == i else 0 for t in range(space.n))
    if e_piv not in part.terms:
        raise ValueError("%s does not appear linearly in the lowest part" % space.names[i])
    alpha = part.terms[e_piv]
    kk = None if keep is None else space.index(keep)
    rest = {e: c for e, c in part.terms.items() if e != e_piv and (kk is None or not e[kk])}
    if not rest:
        return {}
    h = GradedPoly(space, rest, part.p, _clean=True)
    try:
        h = h.homogenize(w.k, space.weights[i])
    except GradingError as exc:
        raise ValueError("lowest part cannot be absorbed into %s" % space.names[i]) from exc
    return {i: GradedPoly.var(space, i, part.p) - h.scale(_inv(alpha, part.p))}


def linear_change(space, target, coeffs, p):
    """Substitution making sum c_i x_i (equal weights) into x_target.

    ``coeffs`` maps coordinate index to coefficient.
    """
    t = space.index(target)
    coeffs = {space.index(i): c % p for i, c in coeffs.items() if c % p}
    if not coeffs:
        raise ValueError("linear form is zero")
    if t not in coeffs:
        # swap the target with a coordinate that does occur
        s = min(coeffs)
        swap = {t: GradedPoly.var(space, s, p), s: GradedPoly.var(space, t, p)}
        return [swap] + linear_change(space, t, {(t if i == s else i): c for i, c in coeffs.items()}, p)
    ct = coeffs[t]
    expr = GradedPoly.var(space, t, p)
    for i, c in coeffs.items():
        if i != t:
            expr = expr - GradedPoly.var(space, i, p).scale(c)
    return [{t: expr.scale(_inv(ct, p))}]


def move_to_vertex(space, coords, k, p):
    """Substitution sending a rational point with x_k != 0 to the vertex p_{x_k}.

    Only coordinates whose weight is a multiple of a_k may be nonzero at the point.
    """
    k = space.index(k)
    ck = coords[k] % p
    if not ck:
        raise ValueError("point does not lie in the chart of %s" % space.names[k])
    ak = space.weights[k]
    sub = {}
    for j, c in enumerate(coords):
        c %= p
        if j == k or not c:
            continue
        if space.weights[j] % ak:
            raise ValueError("coordinate %s cannot be moved to p_%s" % (space.names[j], space.names[k]))
        q = space.weights[j] // ak
        lam = c * _inv(pow(ck, q, p), p) % p
        sub[j] = GradedPoly.var(space, j, p) + GradedPoly.var(space, k, p) ** q * lam
    return sub


def special_polynomial(F, w, min_power=None):
    """Split F = x_k^m g + rest along its lowest w-weight part.

    g is the lowest part divided by the largest power x_k^m dividing it. Returns
    (g, ord bound for g) where the bound is the least w-weight of the rest,
    valid on X because F vanishes there.
    """
    k = w.k
    space = w.space
    low = min(w.fw.of(e) for e in F.terms)
    part = {e: c for e, c in F.terms.items() if w.fw.of(e) == low}
    m = min(e[k] for e in part)
    if min_power is not None:
        m = min(m, min_power)
    g = {}
    for e, c in part.items():
        ee = list(e)
        ee[k] -= m
        g[tuple(ee)] = c
    g = GradedPoly(space, g, F.p, _clean=True)
    rest = {e: c for e, c in F.terms.items() if w.fw.of(e) != low}
    bound = min(w.fw.of(e) for e in rest) if rest else None
    return g, bound


class ExceptionalDivisor:
    """E inside P(b) as the locus of lowest parts of the matched equations."""

    def __init__(self, w, equations, weights, ci_degrees, matching, new_points):
        self.w = w
        self.equations = equations
        self.weights = weights
        self.ci_degrees = ci_degrees
        self.matching = matching
        self.new_points = new_points

    def __repr__(self):
        return "ExceptionalDivisor(CI %s in P%s)" % (tuple(self.ci_degrees), tuple(self.weights))


def exceptional_data(X, w, a, A3=None):
    res = kbl_check(X, w, a)
    if not res:
        raise KBLFailure(res.reason)
    parts = lowest_parts(X, w)
    eqs, degs = [], []
    for j, _i in res.matching:
        part, wt = parts[j]
        eqs.append(part)
        degs.append(int(wt * w.r))
    data = BlowupData(w.r, a, A3 or 1)
    return ExceptionalDivisor(w, eqs, w.as_tuple(), degs, res.matching, data.new_points())


__all__ = ["BlowupData", "DivisorClass", "AdmissibleWeight", "KBLResult", "KBLFailure", "triple_product",
           "initial_weight", "weight_from_tuple", "kbl_check", "bump_weight", "ord_lower_bound",
           "eliminate_terms", "clean_lowest_part", "linear_change", "move_to_vertex", "special_polynomial",
           "lowest_parts", "poly_order", "exceptional_data", "ExceptionalDivisor", "residue"]
