"""Sparse polynomials over Q or F_p, graded by a weight system."""

import ast
from fractions import Fraction


class WeightSystem:
    """Ambient weighted projective space: coordinate weights and names."""

    __slots__ = ("weights", "names", "_index")

    def __init__(self, weights, names=None):
        weights = tuple(int(a) for a in weights)
        if not weights or any(a < 1 for a in weights):
            raise ValueError("weights must be positive integers")
        if names is None:
            names = tuple("x%d" % i for i in range(len(weights)))
        names = tuple(str(s) for s in names)
        if len(names) != len(weights):
            raise ValueError("need one name per weight")
        if len(set(names)) != len(names):
            raise ValueError("coordinate names must be distinct")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(names)})

    def __setattr__(self, key, value):
        raise AttributeError("WeightSystem is immutable")

    @property
    def n(self):
        return len(self.weights)

    def index(self, name):
        if isinstance(name, int):
            return name
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("unknown coordinate %r" % name) from None

    def degree(self, exp):
        return sum(e * a for e, a in zip(exp, self.weights))

    def sub(self, indices):
        """Weight system on a subset of the coordinates (in the given order)."""
        return WeightSystem([self.weights[i] for i in indices], [self.names[i] for i in indices])

    def monomials(self, d):
        """All exponent vectors of weighted degree d."""
        out = []
        n = self.n
        w = self.weights

        def rec(i, rem, acc):
            if i == n - 1:
                if rem % w[i] == 0:
                    out.append(tuple(acc) + (rem // w[i],))
                return
            for e in range(rem // w[i] + 1):
                acc.append(e)
                rec(i + 1, rem - e * w[i], acc)
                acc.pop()

        if d < 0:
            return []
        rec(0, d, [])
        return out

    def __eq__(self, other):
        return isinstance(other, WeightSystem) and self.weights == other.weights and self.names == other.names

    def __hash__(self):
        return hash((self.weights, self.names))

    def __repr__(self):
        return "P(%s)" % ",".join("%d_%s" % (a, s) for a, s in zip(self.weights, self.names))


class FractionalWeight:
    """A weight 1/r (b_0, ..., b_{n-1}) on the coordinates."""

    __slots__ = ("numerators", "denominator")

    def __init__(self, numerators, denominator=1):
        nums = tuple(int(b) for b in numerators)
        if denominator < 1:
            raise ValueError("denominator must be positive")
        if any(b < 0 for b in nums):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "numerators", nums)
        object.__setattr__(self, "denominator", int(denominator))

    def __setattr__(self, key, value):
        raise AttributeError("FractionalWeight is immutable")

    def of(self, exp):
        return Fraction(sum(e * b for e, b in zip(exp, self.numerators)), self.denominator)

    def bumped(self, i, step=None):
        nums = list(self.numerators)
        nums[i] += self.denominator if step is None else step
        return FractionalWeight(nums, self.denominator)

    def __eq__(self, other):
        return (isinstance(other, FractionalWeight) and self.numerators == other.numerators
                and self.denominator == other.denominator)

    def __hash__(self):
        return hash((self.numerators, self.denominator))

    def __repr__(self):
        return "1/%d(%s)" % (self.denominator, ",".join(map(str, self.numerators)))


class ParseError(ValueError):
    pass


class GradingError(ValueError):
    pass


def _coerce(c, p):
    """Bring a scalar into the coefficient field (p = 0 means Q)."""
    if p:
        if isinstance(c, Fraction):
            if c.denominator % p == 0:
                raise ZeroDivisionError("denominator divisible by p")
            return c.numerator * pow(c.denominator, p - 2, p) % p
        return int(c) % p
    return Fraction(c)


class GradedPoly:
    """Immutable sparse polynomial.

    ``terms`` maps exponent tuples to nonzero coefficients; ``p`` is the
    field characteristic (0 for Q).
    """

    __slots__ = ("space", "terms", "p", "_deg")

    def __init__(self, space, terms=None, p=0, _clean=False):
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "p", int(p))
        if terms is None:
            terms = {}
        if not _clean:
            n = space.n
            clean = {}
            for e, c in terms.items():
                e = tuple(int(v) for v in e)
                if len(e) != n or any(v < 0 for v in e):
                    raise ValueError("bad exponent vector %r" % (e,))
                c = _coerce(c, p)
                if c:
                    clean[e] = (clean.get(e, 0) + c) % p if p else clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
            terms = clean
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_deg", False)

    def __setattr__(self, key, value):
        raise AttributeError("GradedPoly is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, space, p=0):
        return cls(space, {}, p, _clean=True)

    @classmethod
    def constant(cls, space, c, p=0):
        return cls(space, {(0,) * space.n: c}, p)

    @classmethod
    def var(cls, space, i, p=0):
        i = space.index(i)
        e = [0] * space.n
        e[i] = 1
        return cls(space, {tuple(e): 1}, p, _clean=True)

    @classmethod
    def monomial(cls, space, exp, c=1, p=0):
        return cls(space, {tuple(exp): c}, p)

    def _new(self, terms):
        return GradedPoly(self.space, terms, self.p, _clean=True)

    # -- basic queries --------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degrees(self):
        return {self.space.degree(e) for e in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    @property
    def degree(self):
        """Weighted degree if homogeneous and nonzero, else None."""
        if self._deg is False:
            ds = self.degrees()
            object.__setattr__(self, "_deg", ds.pop() if len(ds) == 1 else None)
        return self._deg

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), 0)

    def contains(self, mono):
        """Monomial membership: the coefficient of ``mono`` is nonzero."""
        if isinstance(mono, GradedPoly):
            if len(mono.terms) != 1:
                raise ValueError("expected a monomial")
            (mono,) = mono.terms
        return tuple(mono) in self.terms

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, v in enumerate(e) if v)
        return sorted(used)

    def with_field(self, p):
        """Reduce Q coefficients modulo p (or reinterpret)."""
        return GradedPoly(self.space, dict(self.terms), p)

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if isinstance(other, GradedPoly):
            if other.p != self.p:
                raise ValueError("field mismatch: %d vs %d" % (self.p, other.p))
            if other.space.weights != self.space.weights:
                raise ValueError("weight system mismatch")
            return other
        return GradedPoly.constant(self.space, other, self.p)

    def __add__(self, other):
        other = self._check(other)
        p = self.p
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if p:
                v %= p
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return self._new({e: (-c) % p if p else -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c):
        c = _coerce(c, self.p)
        if not c:
            return self._new({})
        p = self.p
        return self._new({e: (v * c) % p if p else v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, GradedPoly):
            return self.scale(other)
        other = self._check(other)
        p = self.p
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        if p:
            t = {e: c % p for e, c in t.items() if c % p}
        else:
            t = {e: c for e, c in t.items() if c}
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = GradedPoly.constant(self.space, 1, self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, exp, c=1):
        p = self.p
        t = {}
        for e, v in self.terms.items():
            w = v * c
            if p:
                w %= p
            if w:
                t[tuple(a + b for a, b in zip(e, exp))] = w
        return self._new(t)

    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return self.p == other.p and self.space.weights == other.space.weights and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == GradedPoly.constant(self.space, other, self.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.space.weights, frozenset(self.terms.items())))

    # -- calculus and maps ------------------------------------------------
    def differentiate(self, i):
        i = self.space.index(i)
        p = self.p
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                v = c * e[i]
                if p:
                    v %= p
                if v:
                    ee = list(e)
                    ee[i] -= 1
                    t[tuple(ee)] = v
        return self._new(t)

    def substitute(self, assignments, strict=False):
        """Simultaneous substitution {coordinate: GradedPoly or scalar}."""
        space = self.space
        subs = {}
        for k, v in assignments.items():
            i = space.index(k)
            if not isinstance(v, GradedPoly):
                v = GradedPoly.constant(space, v, self.p)
            v = self._check(v)
            if strict and v and (v.degree is None or v.degree != space.weights[i]):
                raise GradingError("substitution for %s is not homogeneous of degree %d"
                                   % (space.names[i], space.weights[i]))
            subs[i] = v
        if not subs:
            return self
        power_cache = {}

        def pw(i, k):
            key = (i, k)
            if key not in power_cache:
                power_cache[key] = subs[i] ** k
            return power_cache[key]

        p = self.p
        acc = {}
        # group terms by the part of the exponent that is substituted
        groups = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in sorted(subs))
            rest = tuple(0 if i in subs else v for i, v in enumerate(e))
            groups.setdefault(key, {})[rest] = c
        keys_idx = sorted(subs)
        for key, rest_terms in groups.items():
            factor = GradedPoly.constant(space, 1, p)
            for i, k in zip(keys_idx, key):
                if k:
                    factor = factor * pw(i, k)
            for re, rc in rest_terms.items():
                for fe, fc in factor.terms.items():
                    e = tuple(a + b for a, b in zip(re, fe))
                    acc[e] = acc.get(e, 0) + rc * fc
        if p:
            acc = {e: c % p for e, c in acc.items() if c % p}
        else:
            acc = {e: c for e, c in acc.items() if c}
        return self._new(acc)

    def restrict_zero(self, indices):
        """Set the listed coordinates to zero (the restriction F|_Pi)."""
        idx = [self.space.index(i) for i in indices]
        return self._new({e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)})

    def dehomogenize(self, k):
        """Set coordinate k to 1, keeping the exponent slot (as zero)."""
        k = self.space.index(k)
        p = self.p
        t = {}
        for e, c in self.terms.items():
            ee = e[:k] + (0,) + e[k + 1:]
            v = t.get(ee, 0) + c
            t[ee] = v % p if p else v
        return self._new({e: c for e, c in t.items() if c})

    def homogenize(self, k, d):
        """Inverse of dehomogenize: pad each term with powers of x_k to degree d."""
        k = self.space.index(k)
        a = self.space.weights[k]
        t = {}
        for e, c in self.terms.items():
            gap = d - self.space.degree(e)
            if gap < 0 or gap % a:
                raise GradingError("cannot homogenize term to degree %d" % d)
            ee = list(e)
            ee[k] += gap // a
            t[tuple(ee)] = c
        return self._new(t)

    def weight_parts(self, w):
        """Split by w-weight: {weight: GradedPoly}."""
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(w.of(e), {})[e] = c
        return {k: self._new(v) for k, v in parts.items()}

    def lowest_weight_part(self, w):
        if not self.terms:
            raise ValueError("lowest weight part of the zero polynomial")
        low = min(w.of(e) for e in self.terms)
        return self._new({e: c for e, c in self.terms.items() if w.of(e) == low}), low

    def evaluate(self, point, field=None):
        """Evaluate at a point.

        Coordinates are scalars of this polynomial's field, or elements of an
        extension ``field`` (see ``pfaffrig.solve.ExtField``).
        """
        if len(point) != self.space.n:
            raise ValueError("point has wrong length")
        if field is not None:
            if field.p != self.p:
                raise ValueError("field mismatch")
            return field.eval_terms(self.terms, point)
        p = self.p
        if p:
            if any(isinstance(x, Fraction) and x.denominator != 1 for x in point):
                raise ValueError("field mismatch: rational point for a mod-p polynomial")
            pt = [int(x) % p for x in point]
            total = 0
            for e, c in self.terms.items():
                v = c
                for x, k in zip(pt, e):
                    if k:
                        v = v * pow(x, k, p) % p
                total += v
            return total % p
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    # -- printing ---------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-self.space.degree(t[0]), tuple(-v for v in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.space.names
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(names[i] if k == 1 else "%s^%d" % (names[i], k) for i, k in enumerate(e) if k)
            if self.p and c > self.p // 2:
                c = c - self.p
            neg = c < 0
            c = -c if neg else c
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            else:
                s = "%s*%s" % (c, mono)
            out.append(("- " if neg else "+ ") + s)
        text = " ".join(out)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return "GradedPoly(%s)" % self


_ALLOWED_BIN = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_and_grade(text, space, p=0):
    """Parse ``text`` (``+ - * ^``, integer/rational literals) into a GradedPoly."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError("malformed expression %r: %s" % (text, exc.msg)) from None

    def const(v):
        return GradedPoly.constant(space, v, p)

    def walk(node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ParseError("unsupported literal %r" % (node.value,))
            return const(node.value)
        if isinstance(node, ast.Name):
            if node.id not in space.names:
                raise ParseError("unknown variable %r" % node.id)
            return GradedPoly.var(space, node.id, p)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BIN):
            if isinstance(node.op, ast.Pow):
                base = walk(node.left)
                ex = node.right
                if not (isinstance(ex, ast.Constant) and isinstance(ex.value, int)
                        and not isinstance(ex.value, bool) and ex.value >= 0):
                    raise ParseError("exponent must be a non-negative integer literal")
                return base ** ex.value
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if right.variables() or len(right.terms) != 1:
                raise ParseError("division only by nonzero constants")
            c = right.coefficient((0,) * space.n)
            inv = pow(int(c), p - 2, p) if p else 1 / Fraction(c)
            return left.scale(inv)
        raise ParseError("unsupported syntax in %r" % text)

    return walk(tree.body)
