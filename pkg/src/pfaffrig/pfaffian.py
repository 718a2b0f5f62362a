"""Graded 5x5 skew matrices, their Pfaffians, the family catalog and sampling."""

import random
from collections import Counter
from fractions import Fraction
from itertools import combinations

from .wpoly import GradedPoly, WeightSystem

PAIRS = tuple(combinations(range(1, 6), 2))

# Row relations sum_j SYZYGY_SIGNS[j] * m_ij * Pf(delete j) = 0 (m_ii = 0,
# m_ji = -m_ij). Derived once by symbolic expansion; frozen in the tests.
SYZYGY_SIGNS = {1: 1, 2: -1, 3: 1, 4: -1, 5: 1}


def half_degrees(entry_degrees):
    """Solve e_ij = q_i + q_j for q_1..q_5 (as Fractions); None if inconsistent."""
    e = {tuple(sorted(k)): v for k, v in entry_degrees.items()}
    q = {}
    for i in range(1, 6):
        j, k = [t for t in range(1, 6) if t != i][:2]
        q[i] = Fraction(e[tuple(sorted((i, j)))] + e[tuple(sorted((i, k)))] - e[tuple(sorted((j, k)))], 2)
    for (i, j), v in e.items():
        if q[i] + q[j] != v:
            return None
    return tuple(q[i] for i in range(1, 6))


def pfaffian_degrees(entry_degrees):
    """deg F_i = sum of the half-degrees q_j over j != 6 - i."""
    q = half_degrees(entry_degrees)
    if q is None:
        raise ValueError("entry degrees admit no half-degree system")
    total = sum(q)
    out = []
    for i in range(1, 6):
        d = total - q[6 - i - 1]
        if d.denominator != 1:
            raise ValueError("non-integral Pfaffian degree")
        out.append(int(d))
    return tuple(out)


class SyzygyMatrix:
    """A 5x5 skew matrix given by its upper-triangle entries m_ij (1 <= i < j <= 5)."""

    def __init__(self, space, entries, entry_degrees=None, p=0, check=True):
        self.space = space
        self.p = p
        ent = {}
        for (i, j) in PAIRS:
            v = entries.get((i, j), 0)
            if not isinstance(v, GradedPoly):
                v = GradedPoly.constant(space, v, p)
            ent[(i, j)] = v
        self.entries = ent
        if entry_degrees is None:
            entry_degrees = {}
            for k, v in ent.items():
                if v.degree is None:
                    raise ValueError("entry m%d%d has no well-defined degree" % k)
                entry_degrees[k] = v.degree
        self.entry_degrees = {k: int(entry_degrees[k]) for k in PAIRS}
        if check:
            self.validate()

    def validate(self):
        for k, v in self.entries.items():
            if v.terms and (v.degree is None or v.degree != self.entry_degrees[k]):
                raise ValueError("entry m%d%d is not homogeneous of degree %d" % (k + (self.entry_degrees[k],)))
        if half_degrees(self.entry_degrees) is None:
            raise ValueError("entry degrees are not of the form q_i + q_j")

    def m(self, i, j):
        if i == j:
            return GradedPoly.zero(self.space, self.p)
        if i < j:
            return self.entries[(i, j)]
        return -self.entries[(j, i)]

    def map_entries(self, fn):
        return SyzygyMatrix(self.space, {k: fn(v) for k, v in self.entries.items()},
                            self.entry_degrees, self.p, check=False)

    def substitute(self, assignments):
        """Apply a coordinate change to every entry."""
        return self.map_entries(lambda f: f.substitute(assignments))

    def with_entry(self, key, value):
        ent = dict(self.entries)
        ent[key] = value
        return SyzygyMatrix(self.space, ent, self.entry_degrees, self.p, check=False)

    def __eq__(self, other):
        return (isinstance(other, SyzygyMatrix) and self.space == other.space and self.p == other.p
                and self.entries == other.entries and self.entry_degrees == other.entry_degrees)


def pfaffian_deleting(M, k):
    """Pfaffian of the 4x4 block of M with row/column k removed."""
    i1, i2, i3, i4 = [t for t in range(1, 6) if t != k]
    return M.m(i1, i2) * M.m(i3, i4) - M.m(i1, i3) * M.m(i2, i4) + M.m(i1, i4) * M.m(i2, i3)


def compute_pfaffians(M):
    """F_1..F_5 with F_i the Pfaffian deleting index 6 - i."""
    out = [pfaffian_deleting(M, 6 - i) for i in range(1, 6)]
    degs = pfaffian_degrees(M.entry_degrees)
    for f, d in zip(out, degs):
        if f.terms and f.degree != d:
            raise ValueError("Pfaffian degree inconsistency")
    return out


def syzygy_identity_check(M, F):
    """Check the five row relations among the Pfaffians."""
    pf = {6 - i: F[i - 1] for i in range(1, 6)}  # Pf(delete j) = F_{6-j}
    for i in range(1, 6):
        acc = GradedPoly.zero(M.space, M.p)
        for j in range(1, 6):
            if j != i:
                term = M.m(i, j) * pf[j]
                acc = acc + term if SYZYGY_SIGNS[j] > 0 else acc - term
        if acc.terms:
            return False
    return True


class CentreEntry:
    """One row of the summary table: a singularity type and its verdict."""

    def __init__(self, r, a, multiplicity, verdict, conditions=()):
        self.r = r
        self.a = a
        self.multiplicity = multiplicity
        self.verdict = verdict
        self.conditions = tuple(conditions)

    @property
    def label(self):
        return "1/%d(1,%d,%d)" % (self.r, self.a, self.r - self.a)

    def __repr__(self):
        return "CentreEntry(%s x%d, %s, %s)" % (self.label, self.multiplicity, self.verdict, self.conditions)


class FamilySpec:
    def __init__(self, fid, space, entry_degrees, A3, basket, centres, entry_names=None, type_II1=None):
        self.id = fid
        self.space = space
        self.entry_degrees = dict(entry_degrees)
        self.pfaffian_degrees = pfaffian_degrees(self.entry_degrees)
        self.A3 = Fraction(A3)
        self.basket = Counter(basket)
        self.sigma = sum(space.weights) - 1
        self.centres = list(centres)
        self.entry_names = entry_names or {}
        # asserted, not computed: there is no intrinsic test for Type II_1
        self.type_II1 = type_II1
        if sum(self.pfaffian_degrees) != 2 * self.sigma:
            raise ValueError("sum of Pfaffian degrees must equal 2 * sigma")

    @property
    def rigid(self):
        return all(c.verdict != "link" for c in self.centres)

    @property
    def half_degrees(self):
        return half_degrees(self.entry_degrees)

    def centre(self, r, a):
        for c in self.centres:
            if (c.r, c.a) == (r, a):
                return c
        raise KeyError("no centre 1/%d(1,%d,%d) in %s" % (r, a, r - a, self.id))

    def __repr__(self):
        return "FamilySpec(%s, %r)" % (self.id, self.space)


def _entries(rows):
    """Upper-triangle degrees listed row by row."""
    flat = [d for row in rows for d in row]
    return dict(zip(PAIRS, flat))


def _names(rows):
    flat = [s for row in rows for s in row]
    return dict(zip(PAIRS, flat))


def _build_catalog():
    ex, qi, link = "excluded", "Q.I.", "link"
    fams = []
    fams.append(FamilySpec(
        "deg42", WeightSystem([1, 5, 6, 7, 8, 9, 10], "x y z t u v w".split()),
        _entries([[6, 7, 8, 9], [8, 9, 10], [10, 11], [12]]), Fraction(1, 42),
        {(2, 1): 1, (3, 1): 1, (5, 1): 1, (5, 2): 1, (7, 1): 1},
        [CentreEntry(2, 1, 1, ex), CentreEntry(3, 1, 1, ex), CentreEntry(5, 1, 1, ex, ["cd:deg42-5"]),
         CentreEntry(5, 2, 1, ex), CentreEntry(7, 1, 1, ex)],
        _names([["a6", "a7", "a8", "a9"], ["b8", "b9", "b10"], ["c10", "c11"], ["d12"]])))
    fams.append(FamilySpec(
        "deg30", WeightSystem([1, 5, 5, 6, 7, 8, 9], "x y0 y1 z t u v".split()),
        _entries([[5, 6, 7, 8], [7, 8, 9], [9, 10], [11]]), Fraction(1, 30),
        {(5, 1): 1, (5, 2): 2, (6, 1): 1},
        [CentreEntry(5, 1, 1, ex, ["cd:deg30-5"]), CentreEntry(5, 2, 2, ex), CentreEntry(6, 1, 1, ex)],
        _names([["a5", "a6", "a7", "a8"], ["b7", "b8", "b9"], ["c9", "c10"], ["d11"]])))
    fams.append(FamilySpec(
        "deg20", WeightSystem([1, 4, 5, 5, 6, 7, 8], "x y z0 z1 t u v".split()),
        _entries([[4, 5, 6, 7], [6, 7, 8], [8, 9], [10]]), Fraction(1, 20),
        {(2, 1): 1, (4, 1): 1, (5, 1): 2, (5, 2): 1},
        [CentreEntry(2, 1, 1, ex), CentreEntry(4, 1, 1, ex, ["cd:deg20-4"]), CentreEntry(5, 1, 2, ex),
         CentreEntry(5, 2, 1, qi)],
        _names([["a4", "a5", "a6", "a7"], ["b6", "b7", "b8"], ["c8", "c9"], ["d10"]])))
    fams.append(FamilySpec(
        "deg12", WeightSystem([1, 3, 4, 5, 5, 6, 7], "x y z t0 t1 u v".split()),
        _entries([[3, 4, 5, 6], [5, 6, 7], [7, 8], [9]]), Fraction(1, 12),
        {(3, 1): 2, (4, 1): 1, (5, 1): 1, (5, 2): 1},
        [CentreEntry(3, 1, 2, ex, ["cd:deg12-3"]), CentreEntry(4, 1, 1, ex, ["cd:deg12-4"]),
         CentreEntry(5, 1, 1, qi), CentreEntry(5, 2, 1, link, ["cd:deg12-5link"])],
        _names([["a3", "a4", "a5", "a6"], ["b5", "b6", "b7"], ["c7", "c8"], ["d9"]]), type_II1=(5, 2)))
    fams.append(FamilySpec(
        "deg4", WeightSystem([1, 2, 3, 3, 4, 4, 5], "x y z0 z1 t0 t1 u".split()),
        _entries([[2, 3, 3, 4], [4, 4, 5], [5, 6], [6]]), Fraction(1, 4),
        {(2, 1): 3, (3, 1): 3, (4, 1): 1},
        [CentreEntry(2, 1, 3, ex, ["cd:deg4-2"]), CentreEntry(3, 1, 3, qi, ["cd:deg4-3"]),
         CentreEntry(4, 1, 1, link, ["cd:deg4-3", "cd:deg4-4"])],
        _names([["a2", "a3", "a3'", "a4"], ["b4", "b4'", "b5"], ["c5", "c6"], ["d6"]]), type_II1=(4, 1)))
    return {f.id: f for f in fams}


_CATALOG = _build_catalog()


def family_catalog():
    return list(_CATALOG.values())


def get_family(fid):
    fid = fid.strip()
    if fid in _CATALOG:
        return _CATALOG[fid]
    alias = {"1/42": "deg42", "1/30": "deg30", "1/20": "deg20", "1/12": "deg12", "1/4": "deg4"}
    if fid in alias:
        return _CATALOG[alias[fid]]
    raise KeyError("unknown family %r" % fid)


def random_form(space, d, rng, p, support=None):
    """Dense random homogeneous polynomial of degree d with nonzero coefficients."""
    monos = space.monomials(d)
    if support is not None:
        monos = [e for e in monos if all(e[i] == 0 for i in range(space.n) if i not in support)]
    return GradedPoly(space, {e: rng.randrange(1, p) for e in monos}, p, _clean=True)


def member_rng(fid, seed, p, salt=""):
    return random.Random("%s|%d|%d|%s" % (fid, seed, p, salt))


def sample_member(spec, seed, p, salt="", pinned=None):
    """Reproducible random member of a family over F_p.

    ``pinned`` optionally maps (entry, exponent) to a coefficient that
    overrides the random draw (0 removes the monomial).
    """
    if p <= max(spec.space.weights):
        raise ValueError("prime must exceed the largest weight")
    rng = member_rng(spec.id, seed, p, salt)
    entries = {}
    for k in PAIRS:
        entries[k] = random_form(spec.space, spec.entry_degrees[k], rng, p)
    if pinned:
        for (k, e), c in pinned.items():
            f = entries[k]
            t = dict(f.terms)
            if c % p:
                t[tuple(e)] = c % p
            else:
                t.pop(tuple(e), None)
            entries[k] = GradedPoly(spec.space, t, p, _clean=True)
    return SyzygyMatrix(spec.space, entries, spec.entry_degrees, p)


def symbolic_matrix(spec):
    """Matrix over Q whose entries are fresh indeterminates named as in the tables.

    The ambient ring gains one weighted variable per entry, so the Pfaffians
    read exactly like the displayed formulas.
    """
    names = [spec.entry_names[k].replace("'", "p") for k in PAIRS]
    degs = [spec.entry_degrees[k] for k in PAIRS]
    space = WeightSystem(degs, names)
    ent = {k: GradedPoly.var(space, i) for i, k in enumerate(PAIRS)}
    return SyzygyMatrix(space, ent, spec.entry_degrees)
