"""Exclusion certificates for the centres of each family.

Each centre of the catalog has a script: how to put a sampled member into
the normal form around the point, which weight to blow up with, and which
criterion to apply. Numbers entering the verdict (orders of vanishing, degrees,
complete-intersection degrees) are recomputed from the member.
"""

import re
from fractions import Fraction

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd

from . import blowup as bl
from .geometry import canonical_type, singular_points, vertex_membership
from .ideal import EMPTY, BudgetExceeded, DEFAULT_BUDGET, cone_dimension
from .pfaffian import compute_pfaffians, get_family, sample_member
from .solve import NonReduced, PositiveDimensional, weighted_points
from .wpoly import GradedPoly, WeightSystem

EXCLUDED, QI, LINK, INCONCLUSIVE, NOT_EXCLUDED = "excluded", "Q.I.", "link", "inconclusive", "not excluded"
VERDICT_OF_CATALOG = {"excluded": EXCLUDED, "Q.I.": QI, "link": LINK}
DEFAULT_PRIME = 10007


class CertificateError(ValueError):
    pass


def frac_str(q):
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator)


_FRAC = re.compile(r"^-?\d+/\d+$")


def _enc(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, Fraction):
        return frac_str(v)
    if isinstance(v, (list, tuple)):
        return [_enc(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _enc(x) for k, x in v.items()}
    if isinstance(v, bl.DivisorClass):
        return [frac_str(v.lam), frac_str(v.mu)]
    raise TypeError("cannot serialize %r" % (v,))


def _dec(v):
    if isinstance(v, str) and _FRAC.match(v):
        return Fraction(v)
    if isinstance(v, list):
        return [_dec(x) for x in v]
    if isinstance(v, dict):
        return {k: _dec(x) for k, x in v.items()}
    return v


class Certificate:
    def __init__(self, family, centre, method, payload, conditions=None, verdict=None, metadata=None):
        self.family = family
        self.centre = centre
        self.method = method
        self.payload = dict(payload)
        self.conditions = dict(conditions or {})
        self.metadata = dict(metadata or {})
        self.verdict = verdict if verdict is not None else evaluate_verdict(self)

    def to_dict(self):
        return {"family": self.family, "centre": self.centre, "method": self.method,
                "payload": _enc(self.payload), "conditions": dict(sorted(self.conditions.items())),
                "verdict": self.verdict, "metadata": _enc(self.metadata)}

    @classmethod
    def from_dict(cls, d, check=True):
        c = cls(d["family"], d["centre"], d["method"], _dec(d["payload"]), d.get("conditions"),
                d["verdict"], _dec(d.get("metadata", {})))
        if check:
            v = evaluate_verdict(c)
            if v != c.verdict:
                raise CertificateError("%s %s: payload implies %r but the certificate says %r"
                                       % (c.family, c.centre, v, c.verdict))
        return c

    def __repr__(self):
        return "Certificate(%s, %s, %s -> %s)" % (self.family, self.centre, self.method, self.verdict)


def _checks_ok(pl, keys):
    return all(pl.get(k) is True for k in keys)


def evaluate_verdict(cert):
    """Recompute the verdict from the payload alone."""
    pl = cert.payload
    m = cert.method
    cond_ok = all(v is True for v in cert.conditions.values())
    if m == "curve-degree":
        return EXCLUDED if Fraction(pl["A3"]) <= 1 else NOT_EXCLUDED
    if m == "isolate-smooth":
        A3, l = Fraction(pl["A3"]), Fraction(pl["l"])
        if pl["branch"] == "lemma":
            return EXCLUDED if l <= 4 / A3 else INCONCLUSIVE
        return EXCLUDED if l < 4 / A3 and pl.get("vertex_absent") is True else INCONCLUSIVE
    if m == "excltc":
        data = bl.BlowupData(int(pl["r"]), int(pl["a"]), pl["A3"])
        L = nef_from_isolating(data.r, list(zip(pl["iso_degrees"], pl["ord_bounds"])))
        if L is None:
            return INCONCLUSIVE
        L = bl.DivisorClass(*pl["L"]) if bl.DivisorClass(*pl["L"]) == L else None
        if L is None:
            raise CertificateError("stored L is not the class derived from the isolating set")
        prod = bl.triple_product(L, data.B, data.B, data)
        if prod != pl["product"] or Fraction(pl["E3"]) != data.E3:
            raise CertificateError("stored intersection numbers do not match")
        ok = cond_ok and _checks_ok(pl, ["isolating"]) and pl.get("kbl") in (True, None)
        return EXCLUDED if ok and prod <= 0 else INCONCLUSIVE
    if m == "exclbadC":
        data = bl.BlowupData(int(pl["r"]), int(pl["a"]), pl["A3"])
        (a, d), (b, e) = pl["S"], pl["T"]
        S = bl.DivisorClass.from_BE(a, d, data.r)
        T = bl.DivisorClass.from_BE(b, e, data.r)
        prod = bl.triple_product(T, S, T, data)
        if prod != pl["product"]:
            raise CertificateError("stored (T.S.T) does not match")
        ineq = a > 0 and b > 0 and 0 <= e <= Fraction(b, data.r) and a * e - b * d >= 0
        ok = cond_ok and ineq and _checks_ok(pl, ["gamma_curve", "finite_on_E", "kbl"])
        return EXCLUDED if ok and prod <= 0 else INCONCLUSIVE
    if m == "quadratic-involution":
        data = bl.BlowupData(int(pl["r"]), int(pl["a"]), pl["A3"])
        H3 = Fraction(1)
        for q in pl["projection_weights"]:
            H3 /= q
        if data.B3 != pl["B3"] or H3 != pl["H3"]:
            raise CertificateError("stored degrees do not match")
        ratio = double_cover_check(data.B3, H3)
        ok = cond_ok and ratio == 2 and _checks_ok(pl, ["kbl", "indeterminacy_empty", "fibre_isolated"])
        return QI if ok else INCONCLUSIVE
    if m == "link-exists":
        mE = multisection_degree(pl["E_ci"], pl["E_weights"], pl["cuts"])
        mE2 = multisection_degree(pl["E2_ci"], pl["E2_weights"], pl["cuts"])
        gamma, obstructed = link_obstruction_check((mE, mE, mE2))
        if (mE, mE2, gamma) != (pl["mult_E"], pl["mult_E2"], pl["gamma"]):
            raise CertificateError("stored multisection data do not match")
        ok = cond_ok and obstructed and _checks_ok(pl, ["kbl", "kbl2", "rho_defined", "eta_defined"])
        return LINK if ok else INCONCLUSIVE
    raise CertificateError("unknown method %r" % m)


# ---------------------------------------------------------------- criteria

def exclude_curves(A3, family=""):
    return Certificate(family, "curves", "curve-degree", {"A3": Fraction(A3)})


def exclude_smooth_points(spec, X=None):
    w = sorted(spec.space.weights)
    A3 = spec.A3
    l = w[5] * w[6]
    if l <= 4 / A3:
        return Certificate(spec.id, "nonsingular points", "isolate-smooth",
                           {"A3": A3, "l": l, "branch": "lemma", "a5a6": l})
    # projection branch: p_u is off X and the degree-12 forms isolate
    absent = None
    if X is not None:
        top = spec.space.weights.index(w[6])
        absent = not vertex_membership(X, top)
    return Certificate(spec.id, "nonsingular points", "isolate-smooth",
                       {"A3": A3, "l": 12, "branch": "projection", "a5a6": l, "vertex_absent": absent})


def verify_isolating_set(X, polys, budget=DEFAULT_BUDGET):
    """True / False / "inconclusive" from the dimension of the affine cone."""
    try:
        d = cone_dimension(list(X) + list(polys), budget=budget)
    except BudgetExceeded:
        return "inconclusive"
    if d is EMPTY or d <= 1:
        return True
    return "inconclusive" if d == 2 else False


def nef_from_isolating(r, items):
    """L = B + cE from (degree, ord bound) pairs, scaled by the degree attaining c.

    Returns None when some section vanishes to order above degree/r.
    """
    best = None
    for b, o in items:
        b, o = Fraction(b), Fraction(o)
        e = b / r - o
        if e < 0:
            return None
        c = e / b
        if best is None or c > best[0] or (c == best[0] and b < best[1]):
            best = (c, b)
    c, b = best
    if c > Fraction(1, r):
        return None
    return bl.DivisorClass(b, b * (c - Fraction(1, r)))


def criterion_excltc(L, data):
    prod = bl.triple_product(L, data.B, data.B, data)
    return prod, prod <= 0


def criterion_exclbadC(S_BE, T_BE, data):
    (a, d), (b, e) = S_BE, T_BE
    S = bl.DivisorClass.from_BE(a, d, data.r)
    T = bl.DivisorClass.from_BE(b, e, data.r)
    ineq = a > 0 and b > 0 and 0 <= e <= Fraction(b, data.r) and a * e - b * d >= 0
    prod = bl.triple_product(T, S, T, data)
    return prod, ineq and prod <= 0


def multisection_degree(ci_degrees, weights, cuts):
    num = Fraction(1)
    for d in list(ci_degrees) + list(cuts):
        num *= Fraction(d)
    for b in weights:
        num /= Fraction(b)
    return num


def double_cover_check(B3, H3):
    ratio = Fraction(B3) / Fraction(H3)
    if ratio.denominator != 1:
        raise ValueError("(B^3)/(H^3) = %s is not an integer" % ratio)
    return int(ratio)


def link_obstruction_check(sections, beta=1):
    """From s_image = -beta*s_E + gamma*s_E2 solve gamma; obstruction iff gamma is not an integer."""
    s_img, s_E, s_E2 = (Fraction(s) for s in sections)
    gamma = (s_img + beta * s_E) / s_E2
    return gamma, gamma.denominator != 1


# ------------------------------------------------------- member handling

def parse_monomial(space, s):
    e = [0] * space.n
    for factor in s.replace(" ", "").split("*"):
        if not factor or factor == "1":
            continue
        name, _, k = factor.partition("^")
        e[space.index(name)] += int(k or 1)
    return tuple(e)


def coef(f, space, mono):
    return f.terms.get(parse_monomial(space, mono), 0)


def _invariant(space, coords, p):
    k = next(i for i, c in enumerate(coords) if c)
    ak = space.weights[k]
    return tuple(pow(c, ak, p) * pow(pow(coords[k], space.weights[j], p), p - 2, p) % p
                 for j, c in enumerate(coords))


class Member:
    """A sampled member together with its rational quotient points by type."""

    def __init__(self, spec, seed, p, salt="", M=None, budget=DEFAULT_BUDGET):
        self.spec = spec
        self.seed = seed
        self.p = p
        self.salt = salt
        self.budget = budget
        self.M = M if M is not None else sample_member(spec, seed, p, salt)
        self.X = compute_pfaffians(self.M)
        self._points = None

    @property
    def points(self):
        """{(r, a): [rational coordinate lists]} and counts over the closure."""
        if self._points is None:
            rat, total = {}, {}
            seen = set()
            for q in singular_points(self.X, budget=self.budget):
                total[q.type] = total.get(q.type, 0) + q.count
                if q.rational:
                    c = [q.field.scalar(v) for v in q.coords]
                    key = (q.type, _invariant(self.spec.space, c, self.p))
                    if key not in seen:
                        seen.add(key)
                        rat.setdefault(q.type, []).append(c)
            for v in rat.values():
                v.sort()
            self._points = (rat, total)
        return self._points

    def rational_points(self, r, a):
        return self.points[0].get((r, a), [])

    def all_rational(self, types):
        rat, total = self.points
        return all(len(rat.get(t, [])) == total.get(t, 0) for t in types)

    def metadata(self):
        return {"seed": self.seed, "prime": self.p, "salt": self.salt}


class Local:
    """A member in coordinates adapted to one centre p = p_{x_k}."""

    def __init__(self, member, M, k):
        self.member = member
        self.space = member.spec.space
        self.p = member.p
        self.M = M
        self.X = compute_pfaffians(M)
        self.k = self.space.index(k) if k is not None else None

    def apply(self, subs):
        M = self.M
        for s in subs:
            if s:
                M = M.substitute(s)
        return Local(self.member, M, self.k)

    def F(self, j):
        return self.X[j - 1]

    def var(self, name):
        return GradedPoly.var(self.space, name, self.p)

    def entry(self, i, j):
        return self.M.m(i, j)

    def coef(self, j, mono):
        return coef(self.F(j), self.space, mono)

    def weight(self, w=None):
        return bl.bump_weight(self.X, w or bl.initial_weight(self.space, self.k))

    def eliminate(self, j, pivot, centre=None, power=None):
        centre = self.space.names[self.k] if centre is None else centre
        _newF, record = bl.eliminate_terms(self.F(j), pivot, centre, power)
        return self.apply(record)

    def zeroed(self, zeros):
        M = self.M
        for key, mono in zeros:
            f = M.m(*key)
            t = dict(f.terms)
            t.pop(parse_monomial(self.space, mono), None)
            M = M.with_entry(key, GradedPoly(self.space, t, self.p, _clean=True))
        return Local(self.member, M, self.k)


class NonRational(ValueError):
    pass


def localize(member, r, a, index, anchor, M=None):
    """Move the index-th rational point of type (r, a) to the vertex of ``anchor``."""
    space = member.spec.space
    pts = member.rational_points(r, a)
    if index > len(pts):
        raise NonRational("point 1/%d(1,%d,%d)#%d is not defined over F_p" % (r, a, r - a, index))
    c = list(pts[index - 1])
    M = M if M is not None else member.M
    k = space.index(anchor)
    subs = []
    if c[k] % member.p == 0:
        other = next(i for i, v in enumerate(c) if v and space.weights[i] == space.weights[k])
        subs.append({k: GradedPoly.var(space, other, member.p), other: GradedPoly.var(space, k, member.p)})
        c[k], c[other] = c[other], c[k]
    subs.append(bl.move_to_vertex(space, c, k, member.p))
    for s in subs:
        if s:
            M = M.substitute(s)
    return Local(member, M, anchor), c


def _dim(polys, budget):
    try:
        return cone_dimension(polys, budget=budget)
    except BudgetExceeded:
        return "budget"


def _empty_in_P(polys, budget):
    d = _dim(polys, budget)
    return d is EMPTY or (d != "budget" and d <= 0)


def _finite_in_P(polys, budget):
    d = _dim(polys, budget)
    return d is EMPTY or (d != "budget" and d <= 1)


def _low(loc, w, f):
    return bl.chart(f, w.k).lowest_weight_part(w.fw)[0]


# ------------------------------------------------------ generality conditions

def _binary_coeffs(f, space, a, b):
    """Coefficients of a binary form in x_a, x_b (equal weights), highest power of x_a first."""
    ia, ib = space.index(a), space.index(b)
    d = None
    out = {}
    for e, c in f.terms.items():
        if any(v for i, v in enumerate(e) if i not in (ia, ib)):
            raise ValueError("not a binary form in %s, %s" % (a, b))
        d = e[ia] + e[ib]
        out[e[ia]] = c
    if d is None:
        return []
    return [out.get(i, 0) for i in range(d, -1, -1)]


def _common_root(forms, p):
    """Do binary forms (coefficient lists, x_a-power descending) share a root in P^1?"""
    forms = [[c % p for c in f] for f in forms]
    if any(not any(f) for f in forms):
        return True
    # root at (1:0): every leading coefficient zero
    if all(f[0] == 0 for f in forms):
        return True
    g = None
    for f in forms:
        # dehomogenize x_b = 1: polynomial in x_a, dense highest first
        u = list(f)
        while u and u[0] == 0:
            u.pop(0)
        g = u if g is None else gf_gcd(g, u, p, ZZ)
    return len(g) > 1


def _proportional(u, v, p):
    return (u[0] * v[1] - u[1] * v[0]) % p == 0


def _restrict_forms(f, space, keep):
    """Restriction to the coordinates in ``keep``."""
    return f.restrict_zero([i for i in range(space.n) if space.names[i] not in keep])


def _y_part(f, space, y, k, exact=True):
    """Coefficient of y^k in f; with ``exact`` every term must carry y^k."""
    iy = space.index(y)
    t = {}
    for e, c in f.terms.items():
        if e[iy] == k:
            ee = list(e)
            ee[iy] = 0
            t[tuple(ee)] = c
        elif exact and e[iy] < k and any(e):
            raise ValueError("restriction is not divisible by %s^%d" % (y, k))
    return GradedPoly(space, t, f.p, _clean=True)


def cond_deg42_5(loc):
    c1, c2 = loc.coef(2, "z^2*y"), loc.coef(2, "t*y^2")
    d1, d2 = loc.coef(4, "t*z^2"), loc.coef(4, "t^2*y")
    p = loc.p
    det = (c2 * d1 - c1 * d2) % p
    return bool(c1 % p) and bool(det), {"gamma": c1, "coef_ty2": c2, "delta": d1, "epsilon": d2, "det": det}


def cond_deg30_5(loc):
    d = loc.coef(4, "z^2*y1") % loc.p
    return bool(d), {"delta": d}


def cond_deg20_4(loc):
    sp, p = loc.space, loc.p
    l0, l1 = loc.coef(2, "y^2*z0"), loc.coef(2, "y^2*z1")
    d10 = loc.entry(4, 5)
    q = [coef(d10, sp, "z0^2"), coef(d10, sp, "z0*z1"), coef(d10, sp, "z1^2")]
    if not (l0 % p or l1 % p):
        return False, {"linear_form": [l0, l1], "q": q, "res": 0}
    # root of l0 z0 + l1 z1 is (l1 : -l0)
    res = (q[0] * l1 * l1 - q[1] * l1 * l0 + q[2] * l0 * l0) % p
    return bool(res), {"linear_form": [l0, l1], "q": q, "res": res}


def cond_deg12_3(loc):
    sp, p = loc.space, loc.p
    eta = loc.coef(2, "z^2*y") % p
    a3y = coef(loc.entry(1, 2), sp, "y") % p
    l1 = [coef(loc.entry(1, 4), sp, "t0"), coef(loc.entry(1, 4), sp, "t1")]
    l2 = [coef(loc.entry(2, 3), sp, "t0"), coef(loc.entry(2, 3), sp, "t1")]
    f2 = [loc.coef(2, "y^2*t0"), loc.coef(2, "y^2*t1")]
    f3 = [loc.coef(3, "z*y*t0"), loc.coef(3, "z*y*t1")]
    ok = bool(eta) and bool(a3y) and not _proportional(f2, l1, p) and not _proportional(f3, l2, p)
    return ok, {"coef_z2y": eta, "y_in_a3": a3y, "F2_form": f2, "lin_a5": l1, "F3_form": f3, "lin_b5": l2}


def cond_deg12_4(loc):
    sp, p = loc.space, loc.p
    za4 = coef(loc.entry(1, 3), sp, "z") % p
    l2 = [coef(loc.entry(2, 3), sp, "t0"), coef(loc.entry(2, 3), sp, "t1")]
    f4 = [loc.coef(4, "z^2*t0"), loc.coef(4, "z^2*t1")]
    ok = bool(za4) and not _proportional(f4, l2, p)
    return ok, {"z_in_a4": za4, "F4_form": f4, "lin_b5": l2}


def cond_deg4_2(loc):
    sp, p = loc.space, loc.p
    keep = ("y", "z0", "z1")
    forms = []
    for j, k in ((2, 1), (3, 1), (5, 2)):
        f = _y_part(_restrict_forms(loc.F(j), sp, keep), sp, "y", k)
        forms.append(_binary_coeffs(f, sp, "z0", "z1"))
    ya2 = coef(loc.entry(1, 2), sp, "y") % p
    common = _common_root(forms, p)
    return bool(ya2) and not common, {"forms": forms, "y_in_a2": ya2, "common_root": common}


def cond_deg4_3(member_M, p):
    """Intrinsic: uses restrictions to (x = y = u = 0) of the matrix entries."""
    sp = member_M.space
    keep = ("z0", "z1", "t0", "t1")
    bar = lambda i, j: _restrict_forms(member_M.m(i, j), sp, keep)
    a3, a3p, a4 = bar(1, 3), bar(1, 4), bar(1, 5)
    b4, b4p, c6, d6 = bar(2, 3), bar(2, 4), bar(3, 5), bar(4, 5)
    m0, m1 = coef(a4, sp, "t0") % p, coef(a4, sp, "t1") % p
    if not (m0 or m1):
        return False, {"a4_bar": [0, 0]}
    # t* = (m1 : -m0)
    tstar = {"t0": m1, "t1": (-m0) % p}

    def at_t(f):
        return f.substitute({sp.index(n): v for n, v in tstar.items()})

    ell = a3p * at_t(b4) - a3 * at_t(b4p)
    cubic = a3 * d6 - a3p * c6
    lf = _binary_coeffs(ell, sp, "z0", "z1")
    cf = _binary_coeffs(cubic, sp, "z0", "z1")
    common = _common_root([lf, cf], p)
    return not common, {"t_star": [m1, (-m0) % p], "linear_form": lf, "cubic": cf}


def _two_points(loc, w, a, keep, lin_pivots, third, budget):
    """Count distinct points of (a_lin = b_lin = F^w_third = 0) on E (link conditions).

    The first two matched equations are cleaned so that their lowest parts read
    pivot + keep * (coefficient); the coefficients of ``keep`` and the third
    lowest part are then solved in P(b).
    """
    sp = loc.space
    for j, piv in lin_pivots:
        loc = loc.apply([bl.clean_lowest_part(loc.X, w, j - 1, piv, keep=keep)])
    ik = sp.index(keep)
    polys = []
    for j, _piv in lin_pivots:
        low = _low(loc, w, loc.F(j))
        polys.append(low)
        polys.append(_y_part(low, sp, keep, 1, exact=False))
    polys.append(_low(loc, w, loc.F(third)))
    # work in P(b) over the six chart coordinates
    others = [i for i in range(sp.n) if i != w.k]
    wsp = WeightSystem([w.b(i) for i in others], [sp.names[i] for i in others])
    conv = []
    for f in polys:
        conv.append(GradedPoly(wsp, {tuple(e[i] for i in others): c for e, c in f.terms.items()}, loc.p,
                               _clean=True))
    try:
        pts = weighted_points(conv, list(range(len(others))), loc.p, budget=budget)
    except (PositiveDimensional, NonReduced) as exc:
        return False, {"reason": str(exc)}
    n = sum(q.count for q in pts)
    return n == 2, {"points": n, "keep": sp.names[ik]}


CONDITION_CENTRES = {
    "cd:deg42-5": ("deg42", (5, 1)), "cd:deg30-5": ("deg30", (5, 1)), "cd:deg20-4": ("deg20", (4, 1)),
    "cd:deg12-3": ("deg12", (3, 1)), "cd:deg12-4": ("deg12", (4, 1)), "cd:deg12-5link": ("deg12", (5, 2)),
    "cd:deg4-2": ("deg4", (2, 1)), "cd:deg4-3": ("deg4", (3, 1)), "cd:deg4-4": ("deg4", (4, 1)),
}

# the single coefficient each condition names, as (matrix entry, monomial)
NAMED_COEFFICIENTS = {
    "cd:deg42-5": ((3, 5), "z*y"),
    "cd:deg30-5": ((4, 5), "z*y1"),
    "cd:deg12-4": ((1, 3), "z"),
    "cd:deg12-3": ((1, 2), "y"),
    "cd:deg4-2": ((1, 2), "y"),
}


class ConditionResult:
    def __init__(self, cid, passed, witness, member_meta):
        self.id = cid
        self.passed = passed
        self.witness = witness
        self.metadata = member_meta

    def to_dict(self):
        return {"condition": self.id, "result": "pass" if self.passed else "fail",
                "witness": _enc(self.witness), "metadata": _enc(self.metadata)}

    def __repr__(self):
        return "ConditionResult(%s, %s)" % (self.id, "pass" if self.passed else "fail")


# ------------------------------------------------------------ the scripts

def _base_payload(spec, r, a, w=None):
    data = bl.BlowupData(r, a, spec.A3)
    pl = {"r": r, "a": a, "A3": spec.A3, "E3": data.E3}
    if w is not None:
        pl["weight"] = repr(w)
        pl["weight_numerators"] = list(w.as_tuple())
    return data, pl


def _excltc(spec, r, a, X, iso, budget, w=None, kbl=None):
    """iso: [(name, poly, degree, ord bound)]."""
    data, pl = _base_payload(spec, r, a, w)
    polys = [f for _n, f, _d, _o in iso]
    pl["isolating_set"] = [n for n, _f, _d, _o in iso]
    pl["iso_degrees"] = [d for _n, _f, d, _o in iso]
    pl["ord_bounds"] = [Fraction(o) for _n, _f, _d, o in iso]
    pl["isolating"] = verify_isolating_set(X, polys, budget)
    pl["kbl"] = kbl
    L = nef_from_isolating(r, list(zip(pl["iso_degrees"], pl["ord_bounds"])))
    if L is None:
        pl["L"] = [0, 0]
        pl["product"] = 0
        return pl
    prod, _ok = criterion_excltc(L, data)
    pl["L"] = [L.lam, L.mu]
    pl["product"] = prod
    pl["A_part"] = L.lam * data.A3
    pl["E_part"] = -L.mu * data.E3 / (r * r)
    return pl


def _vertex_iso(loc, w, names):
    return [(n, loc.var(n), loc.space.weights[loc.space.index(n)], w.order(n)) for n in names]


def _exclbadC(spec, r, a, loc, w, S_name, T_name, budget, kbl):
    data, pl = _base_payload(spec, r, a, w)
    sp = loc.space
    out = []
    for n in (S_name, T_name):
        deg = sp.weights[sp.index(n)]
        cls = bl.DivisorClass.from_section(deg, w.order(n))
        b, e = cls.to_BE(r)
        out.append([b, e])
    pl["S_section"], pl["T_section"] = S_name, T_name
    pl["S"], pl["T"] = out
    prod, _ok = criterion_exclbadC(out[0], out[1], data)
    pl["product"] = prod
    S = bl.DivisorClass.from_BE(*out[0], r)
    T = bl.DivisorClass.from_BE(*out[1], r)
    pl["A_part"] = T.lam * S.lam * T.lam * data.A3
    pl["E_part"] = -T.mu * S.mu * T.mu * data.E3
    d = _dim(loc.X + [loc.var(S_name), loc.var(T_name)], budget)
    pl["gamma_curve"] = d == 2
    pl["gamma_irreducible"] = "paper-asserted"
    ed = bl.exceptional_data(loc.X, w, a, spec.A3) if kbl else None
    pl["kbl"] = bool(kbl)
    if ed is not None:
        extra = [_low(loc, w, loc.var(S_name)), _low(loc, w, loc.var(T_name)), loc.var(w.k)]
        pl["finite_on_E"] = _finite_in_P(ed.equations + extra, budget)
    else:
        pl["finite_on_E"] = False
    return pl


def _qi(spec, r, a, loc, w, proj, budget):
    data, pl = _base_payload(spec, r, a, w)
    sp = loc.space
    res = bl.kbl_check(loc.X, w, a)
    pl["kbl"] = bool(res)
    pl["projection"] = list(proj)
    pl["projection_weights"] = [sp.weights[sp.index(n)] for n in proj]
    H3 = Fraction(1)
    for q in pl["projection_weights"]:
        H3 /= q
    pl["B3"], pl["H3"] = data.B3, H3
    pl["ratio"] = data.B3 / H3
    if res:
        ed = bl.exceptional_data(loc.X, w, a, spec.A3)
        pl["E_ci"] = ed.ci_degrees
        pl["indeterminacy_empty"] = _empty_in_P(ed.equations + [loc.var(w.k)] + [loc.var(n) for n in proj], budget)
    else:
        pl["indeterminacy_empty"] = False
    d = _dim(loc.X + [loc.var(n) for n in proj], budget)
    pl["fibre_isolated"] = d is EMPTY or (d != "budget" and d <= 1)
    return pl


def _e_data(loc, w, a, spec, eta, budget):
    res = bl.kbl_check(loc.X, w, a)
    if not res:
        return None, False
    ed = bl.exceptional_data(loc.X, w, a, spec.A3)
    ok = _empty_in_P(ed.equations + [loc.var(w.k)] + [loc.var(n) for n in eta], budget)
    return ed, ok


class CentreRun:
    """Context passed to a centre script."""

    def __init__(self, spec, member, r, a, index, budget, zeros=None):
        self.spec = spec
        self.member = member
        self.r = r
        self.a = a
        self.index = index
        self.budget = budget
        self.zeros = zeros or {}
        self.conditions = {}
        self.witnesses = {}

    def local(self, anchor, r=None, a=None, index=None, M=None):
        loc, _c = localize(self.member, r or self.r, a or self.a, index or self.index, anchor, M)
        return loc

    def condition(self, cid, loc, fn):
        if cid in self.zeros:
            loc = loc.zeroed(self.zeros[cid])
        ok, wit = fn(loc)
        self.conditions[cid] = bool(ok)
        self.witnesses[cid] = wit
        return loc if cid not in self.zeros else None


def _s_deg42_2(cr):
    X = cr.member.X
    iso = [(n, GradedPoly.var(cr.spec.space, n, cr.member.p), d, Fraction(1, 2))
           for n, d in (("x", 1), ("y", 5), ("t", 7), ("v", 9))]
    return "excltc", _excltc(cr.spec, 2, 1, X, iso, cr.budget)


def _s_deg42_3(cr):
    X = cr.member.X
    sp = cr.spec.space
    iso = [(n, GradedPoly.var(sp, n, cr.member.p), sp.weights[sp.index(n)],
            Fraction(bl.residue(sp.weights[sp.index(n)], 3), 3)) for n in ("x", "y", "t", "u")]
    return "excltc", _excltc(cr.spec, 3, 1, X, iso, cr.budget)


def _s_deg42_7(cr):
    loc = Local(cr.member, cr.member.M, "t")
    w = loc.weight()
    kbl = bool(bl.kbl_check(loc.X, w, 1))
    return "excltc", _excltc(cr.spec, 7, 1, loc.X, _vertex_iso(loc, w, "x y z".split()), cr.budget, w, kbl)


def _s_deg42_51(cr):
    loc = cr.local("y")
    cr.condition("cd:deg42-5", loc, cond_deg42_5)
    if "cd:deg42-5" in cr.zeros:
        loc = loc.zeroed(cr.zeros["cd:deg42-5"])
    w = loc.weight()
    kbl = bool(bl.kbl_check(loc.X, w, 1))
    g, og = bl.special_polynomial(loc.F(2), w)
    iso = _vertex_iso(loc, w, ["x", "w"]) + [("g", g, g.degree, og)]
    return "excltc", _excltc(cr.spec, 5, 1, loc.X, iso, cr.budget, w, kbl)


def _s_deg42_52(cr):
    loc = cr.local("y").eliminate(1, "z")
    w = loc.weight()
    kbl = bl.kbl_check(loc.X, w, 2)
    return "exclbadC", _exclbadC(cr.spec, 5, 2, loc, w, "x", "z", cr.budget, kbl)


def _s_deg30_6(cr):
    loc = Local(cr.member, cr.member.M, "z")
    w = loc.weight()
    kbl = bool(bl.kbl_check(loc.X, w, 1))
    return "excltc", _excltc(cr.spec, 6, 1, loc.X, _vertex_iso(loc, w, ["x", "y0", "y1"]), cr.budget, w, kbl)


def _s_deg30_51(cr):
    loc = cr.local("y1")
    cr.condition("cd:deg30-5", loc, cond_deg30_5)
    if "cd:deg30-5" in cr.zeros:
        loc = loc.zeroed(cr.zeros["cd:deg30-5"])
    w = loc.weight()
    kbl = bl.kbl_check(loc.X, w, 1)
    return "exclbadC", _exclbadC(cr.spec, 5, 1, loc, w, "x", "y0", cr.budget, kbl)


def _s_deg30_52(cr):
    return deg30_52_branch(cr, cr.local("y1"))


def deg30_52_branch(cr, loc):
    """Case split on y1^2 z in F3 at a 1/5(1,2,3) point moved to p_y1."""
    if loc.coef(3, "y1^2*z") % loc.p:
        loc = loc.eliminate(3, "z")
        w = loc.weight()
        kbl = bool(bl.kbl_check(loc.X, w, 2))
        pl = _excltc(cr.spec, 5, 2, loc.X, _vertex_iso(loc, w, ["x", "y0", "z"]), cr.budget, w, kbl)
        pl["case"] = "y1^2*z in F3"
        return "excltc", pl
    w = loc.weight()
    kbl = bl.kbl_check(loc.X, w, 2)
    pl = _exclbadC(cr.spec, 5, 2, loc, w, "x", "y0", cr.budget, kbl)
    pl["case"] = "y1^2*z not in F3"
    return "exclbadC", pl


def _s_deg20_2(cr):
    sp = cr.spec.space
    iso = [(n, GradedPoly.var(sp, n, cr.member.p), sp.weights[sp.index(n)], Fraction(1, 2))
           for n in ("x", "z0", "z1", "u")]
    return "excltc", _excltc(cr.spec, 2, 1, cr.member.X, iso, cr.budget)


def _s_deg20_51(cr):
    loc = cr.local("z1")
    w = loc.weight()
    kbl = bool(bl.kbl_check(loc.X, w, 1))
    return "excltc", _excltc(cr.spec, 5, 1, loc.X, _vertex_iso(loc, w, ["x", "y", "z0"]), cr.budget, w, kbl)


def _normal_deg20_4(loc):
    sub = bl.linear_change(loc.space, "z1", {"z0": loc.coef(2, "y^2*z0"), "z1": loc.coef(2, "y^2*z1")}, loc.p)
    return loc.apply(sub).eliminate(2, "z1")


def _s_deg20_4(cr):
    loc = cr.local("y")
    cr.condition("cd:deg20-4", loc, cond_deg20_4)
    if "cd:deg20-4" in cr.zeros:
        loc = loc.zeroed(cr.zeros["cd:deg20-4"])
    return deg20_4_branch(cr, _normal_deg20_4(loc))


def deg20_4_branch(cr, loc):
    """Case split on alpha for a normalized member at the 1/4 point p_y."""
    w = loc.weight()
    kbl = bl.kbl_check(loc.X, w, 1)
    alpha = loc.coef(2, "v*z0") % loc.p
    if alpha:
        pl = _exclbadC(cr.spec, 4, 1, loc, w, "x", "z1", cr.budget, kbl)
        pl["case"] = "alpha != 0"
        return "exclbadC", pl
    s, os_ = bl.special_polynomial(loc.F(3), w)
    iso = _vertex_iso(loc, w, ["x", "z1"]) + [("s", s, s.degree, os_)]
    pl = _excltc(cr.spec, 4, 1, loc.X, iso, cr.budget, w, bool(kbl))
    pl["case"] = "alpha = 0"
    return "excltc", pl


def _s_deg20_52(cr):
    loc = cr.local("z1").eliminate(5, "t")
    w = loc.weight()
    return "quadratic-involution", _qi(cr.spec, 5, 2, loc, w, ["x", "y", "z0", "t"], cr.budget)


def _s_deg12_4(cr):
    loc = Local(cr.member, cr.member.M, "z")
    cr.condition("cd:deg12-4", loc, cond_deg12_4)
    if "cd:deg12-4" in cr.zeros:
        loc = loc.zeroed(cr.zeros["cd:deg12-4"])
    sub = bl.linear_change(loc.space, "t0", {"t0": loc.coef(4, "z^2*t0"), "t1": loc.coef(4, "z^2*t1")}, loc.p)
    loc = loc.apply(sub).eliminate(4, "t0")
    w = loc.weight()
    kbl = bool(bl.kbl_check(loc.X, w, 1))
    return "excltc", _excltc(cr.spec, 4, 1, loc.X, _vertex_iso(loc, w, ["x", "y", "t0"]), cr.budget, w, kbl)


def _s_deg12_3(cr):
    loc = cr.local("y").eliminate(1, "v")
    cr.condition("cd:deg12-3", loc, cond_deg12_3)
    if "cd:deg12-3" in cr.zeros:
        loc = loc.zeroed(cr.zeros["cd:deg12-3"])
    w = loc.weight()
    kbl = bool(bl.kbl_check(loc.X, w, 1))
    return "excltc", _excltc(cr.spec, 3, 1, loc.X, _vertex_iso(loc, w, ["x", "u", "v"]), cr.budget, w, kbl)


def _s_deg12_51(cr):
    loc = cr.local("t1")
    w = loc.weight()
    return "quadratic-involution", _qi(cr.spec, 5, 1, loc, w, ["x", "y", "z", "t0"], cr.budget)


def _link(cr, loc, w, a, loc2, w2, a2, cuts, eta, rho, cid, pivots, keep, third):
    spec = cr.spec
    data, pl = _base_payload(spec, cr.r, a, w)
    ed, eta_ok = _e_data(loc, w, a, spec, eta, cr.budget)
    ed2, eta2_ok = _e_data(loc2, w2, a2, spec, eta, cr.budget)
    pl["kbl"], pl["kbl2"] = ed is not None, ed2 is not None
    pl["cuts"] = list(cuts)
    if ed is None or ed2 is None:
        pl.update({"E_ci": [], "E_weights": [], "E2_ci": [], "E2_weights": []})
        pl["mult_E"] = pl["mult_E2"] = pl["gamma"] = 0
        return pl
    pl["E_ci"], pl["E_weights"] = ed.ci_degrees, list(ed.weights)
    pl["E2_ci"], pl["E2_weights"] = ed2.ci_degrees, list(ed2.weights)
    pl["weight2"] = repr(w2)
    pl["mult_E"] = multisection_degree(ed.ci_degrees, ed.weights, cuts)
    pl["mult_E2"] = multisection_degree(ed2.ci_degrees, ed2.weights, cuts)
    pl["gamma"], _obs = link_obstruction_check((pl["mult_E"], pl["mult_E"], pl["mult_E2"]))
    pl["eta_defined"] = eta_ok and eta2_ok
    pl["rho_defined"] = _empty_in_P(ed.equations + [loc.var(w.k)] + [loc.var(n) for n in rho], cr.budget)
    pl["B3_Y"] = data.B3
    cloc = loc.zeroed(cr.zeros[cid]) if cid in cr.zeros else loc
    ok, wit = _two_points(cloc, w, a, keep, pivots, third, cr.budget)
    cr.conditions[cid] = ok
    cr.witnesses[cid] = wit
    return pl


def _s_deg12_52(cr):
    loc = cr.local("t1")
    w0 = bl.initial_weight(loc.space, loc.k)
    loc = loc.apply([bl.clean_lowest_part(loc.X, w0, 1, "u")])
    w = loc.weight()
    # E' only needs the 1/5(1,1,4) point at a vertex of its own
    loc2 = cr.local("t0", 5, 1, 1)
    w2 = loc2.weight()
    return "link-exists", _link(cr, loc, w, 2, loc2, w2, 1, (3, 4), ["x", "y", "z"], ["x", "y", "z", "t0", "u"],
                                "cd:deg12-5link", [(1, "t0"), (2, "u")], "v", 5)


def _s_deg4_2(cr):
    loc = cr.local("y").eliminate(1, "u")
    cr.condition("cd:deg4-2", loc, cond_deg4_2)
    if "cd:deg4-2" in cr.zeros:
        loc = loc.zeroed(cr.zeros["cd:deg4-2"])
    w = loc.weight()
    kbl = bool(bl.kbl_check(loc.X, w, 1))
    return "excltc", _excltc(cr.spec, 2, 1, loc.X, _vertex_iso(loc, w, ["x", "t0", "t1", "u"]), cr.budget, w, kbl)


def _deg4_3_local(cr, index):
    loc = cr.local("z1", 3, 1, index)
    w0 = bl.initial_weight(loc.space, loc.k)
    loc = loc.apply([bl.clean_lowest_part(loc.X, w0, 0, "t1")])
    return loc, loc.weight()


def _deg4_3_condition(cr):
    M = cr.member.M
    if "cd:deg4-3" in cr.zeros:
        M = Local(cr.member, M, None).zeroed(cr.zeros["cd:deg4-3"]).M
    ok, wit = cond_deg4_3(M, cr.member.p)
    cr.conditions["cd:deg4-3"] = ok
    cr.witnesses["cd:deg4-3"] = wit


def _s_deg4_3(cr):
    _deg4_3_condition(cr)
    loc, w = _deg4_3_local(cr, cr.index)
    return "quadratic-involution", _qi(cr.spec, 3, 1, loc, w, ["x", "y", "z0", "t1"], cr.budget)


def _s_deg4_4(cr):
    _deg4_3_condition(cr)
    loc = cr.local("t1")
    w = loc.weight()
    loc2, w2 = _deg4_3_local(cr, 1)
    return "link-exists", _link(cr, loc, w, 1, loc2, w2, 1, (2, 3), ["x", "y", "z0"], ["x", "y", "z0", "z1", "t0"],
                                "cd:deg4-4", [(1, "z1"), (2, "t0")], "u", 5)


SCRIPTS = {
    ("deg42", 2, 1): (_s_deg42_2, False), ("deg42", 3, 1): (_s_deg42_3, False),
    ("deg42", 7, 1): (_s_deg42_7, False), ("deg42", 5, 1): (_s_deg42_51, True),
    ("deg42", 5, 2): (_s_deg42_52, True),
    ("deg30", 6, 1): (_s_deg30_6, False), ("deg30", 5, 1): (_s_deg30_51, True),
    ("deg30", 5, 2): (_s_deg30_52, True),
    ("deg20", 2, 1): (_s_deg20_2, False), ("deg20", 5, 1): (_s_deg20_51, True),
    ("deg20", 4, 1): (_s_deg20_4, True), ("deg20", 5, 2): (_s_deg20_52, True),
    ("deg12", 4, 1): (_s_deg12_4, False), ("deg12", 3, 1): (_s_deg12_3, True),
    ("deg12", 5, 1): (_s_deg12_51, True), ("deg12", 5, 2): (_s_deg12_52, True),
    ("deg4", 2, 1): (_s_deg4_2, True), ("deg4", 3, 1): (_s_deg4_3, True), ("deg4", 4, 1): (_s_deg4_4, True),
}


# ------------------------------------------------------------- driver

def centre_id(r, a, k):
    return "%d/(1,%d,%d)#%d" % (r, a, r - a, k)


_ID = re.compile(r"^\s*(?:1/(\d+)|(\d+)/)\s*(?:\(([\d,\s]+)\))?\s*(?:#(\d+))?\s*$")


def parse_centre(spec, text):
    """Accepts "5/(1,2,3)#2", "1/5(1,2,3)#2", "1/7" (unique type with that index)."""
    m = _ID.match(text)
    if not m:
        raise ValueError("bad centre id %r (expected r/(b1,b2,b3)#k)" % text)
    r = int(m.group(1) or m.group(2))
    k = int(m.group(4) or 1)
    if m.group(3):
        t = canonical_type(r, [int(v) for v in m.group(3).split(",")])
        if t is None:
            raise ValueError("%r is not a terminal type" % text)
        a = t[1]
    else:
        cands = [c.a for c in spec.centres if c.r == r]
        if len(cands) != 1:
            raise ValueError("centre %r is ambiguous or absent in %s" % (text, spec.id))
        a = cands[0]
    entry = spec.centre(r, a)
    if not 1 <= k <= entry.multiplicity:
        raise ValueError("index #%d out of range for %s (multiplicity %d)" % (k, entry.label, entry.multiplicity))
    return r, a, k


def needs_rational(spec):
    return [(r, a) for (fid, r, a), (_fn, rat) in SCRIPTS.items() if fid == spec.id and rat]


def select_member(spec, seed=1, p=DEFAULT_PRIME, budget=DEFAULT_BUDGET, max_tries=400):
    """First salted member whose moved centres are all defined over F_p."""
    types = needs_rational(spec)
    for t in range(max_tries):
        salt = "" if t == 0 else "r%d" % t
        mem = Member(spec, seed, p, salt, budget=budget)
        if mem.all_rational(types):
            return mem
    raise NonRational("no member with rational centres after %d samples" % max_tries)


def certify_centre(spec, member, r, a, k, budget=DEFAULT_BUDGET, zeros=None):
    fn, _rat = SCRIPTS[(spec.id, r, a)]
    cr = CentreRun(spec, member, r, a, k, budget, zeros)
    cid = centre_id(r, a, k)
    meta = member.metadata()
    try:
        method, pl = fn(cr)
    except (NonRational, ValueError, BudgetExceeded) as exc:
        return Certificate(spec.id, cid, "excltc", {"r": r, "a": a, "A3": spec.A3, "error": str(exc),
                                                    "iso_degrees": [], "ord_bounds": [], "L": [0, 0],
                                                    "product": 0, "E3": bl.BlowupData(r, a, 1).E3},
                           cr.conditions, INCONCLUSIVE, meta)
    meta = dict(meta)
    if cr.witnesses:
        meta["condition_witness"] = cr.witnesses
    return Certificate(spec.id, cid, method, pl, cr.conditions, metadata=meta)


def certify_family(spec, seed=1, prime=DEFAULT_PRIME, budget=DEFAULT_BUDGET, zeros=None, member=None):
    if isinstance(spec, str):
        spec = get_family(spec)
    member = member or select_member(spec, seed, prime, budget)
    certs = [exclude_curves(spec.A3, spec.id), exclude_smooth_points(spec, member.X)]
    for c in spec.centres:
        for k in range(1, c.multiplicity + 1):
            certs.append(certify_centre(spec, member, c.r, c.a, k, budget, zeros))
    return certs


def family_verdicts(certs):
    """{centre label: verdict} merged over indices (all copies must agree)."""
    out = {}
    for c in certs:
        if c.centre in ("curves", "nonsingular points"):
            continue
        label = c.centre.split("#")[0]
        prev = out.get(label)
        out[label] = c.verdict if prev in (None, c.verdict) else INCONCLUSIVE
    return out


def expected_verdicts(spec):
    return {"%d/(1,%d,%d)" % (c.r, c.a, c.r - c.a): VERDICT_OF_CATALOG[c.verdict] for c in spec.centres}


def check_generality_condition(cid, member, index=1, budget=DEFAULT_BUDGET, zero=None):
    """Evaluate one condition on a member after the normalizations it requires.

    ``zero`` is a list of (matrix entry, monomial) set to zero in the
    normalized member before evaluation (negative controls); ``True`` zeroes the
    coefficient the condition names.
    """
    fid, (r, a) = CONDITION_CENTRES[cid]
    spec = member.spec
    if spec.id != fid:
        raise ValueError("%s concerns family %s, not %s" % (cid, fid, spec.id))
    if zero is True:
        if cid not in NAMED_COEFFICIENTS:
            raise ValueError("%s names no single coefficient" % cid)
        zero = [NAMED_COEFFICIENTS[cid]]
    zeros = {cid: list(zero)} if zero else None
    if (fid, r, a) in SCRIPTS:
        fn, _rat = SCRIPTS[(fid, r, a)]
        cr = CentreRun(spec, member, r, a, index, budget, zeros)
        fn(cr)
        return ConditionResult(cid, cr.conditions[cid], cr.witnesses[cid], member.metadata())
    raise KeyError(cid)


def certificates_to_json(certs, metadata=None):
    import json
    doc = {"metadata": _enc(metadata or {}),
           "certificates": [c.to_dict() for c in sorted(certs, key=lambda c: (c.family, c.centre))]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def certificates_from_json(text, check=True):
    import json
    doc = json.loads(text)
    return [Certificate.from_dict(d, check) for d in doc.get("certificates", [])]


__all__ = ["Certificate", "CertificateError", "ConditionResult", "Member", "Local", "exclude_curves",
           "exclude_smooth_points", "verify_isolating_set", "nef_from_isolating", "criterion_excltc",
           "criterion_exclbadC", "multisection_degree", "double_cover_check", "link_obstruction_check",
           "check_generality_condition", "certify_family", "certify_centre", "select_member", "parse_centre",
           "centre_id", "family_verdicts", "expected_verdicts", "certificates_to_json", "certificates_from_json",
           "evaluate_verdict", "CentreRun", "localize", "deg30_52_branch", "deg20_4_branch", "SCRIPTS", "CONDITION_CENTRES", "NAMED_COEFFICIENTS", "DEFAULT_PRIME"]
