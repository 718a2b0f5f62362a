"""Hilbert series of the Pfaffian format and the anticanonical degree."""

from fractions import Fraction

CONE_DIM = 4


class HilbertData:
    """Numerator N(t) (coefficient list, index = exponent) over prod(1 - t^a_i)."""

    def __init__(self, numerator, weights, sigma):
        self.numerator = list(numerator)
        self.weights = tuple(weights)
        self.sigma = sigma

    def is_antipalindromic(self):
        N = self.numerator + [0] * (self.sigma + 1 - len(self.numerator))
        return all(N[self.sigma - k] == -N[k] for k in range(self.sigma + 1))

    def vanishing_order_at_one(self):
        N = list(self.numerator)
        order = 0
        while any(N) and sum(N) == 0:
            N = divide_by_one_minus_t(N)
            order += 1
        return order

    def __repr__(self):
        terms = ["%+d*t^%d" % (c, k) for k, c in enumerate(self.numerator) if c]
        return "HilbertData(N = %s)" % " ".join(terms)


def hilbert_numerator(spec_or_degrees, weights=None):
    """N(t) = 1 - sum t^d_i + sum t^(sigma - d_i) - t^sigma."""
    if weights is None:
        spec = spec_or_degrees
        degrees, weights = spec.pfaffian_degrees, spec.space.weights
    else:
        degrees = spec_or_degrees
    sigma = sum(weights) - 1
    N = [0] * (sigma + 1)
    N[0] += 1
    for d in degrees:
        N[d] -= 1
        N[sigma - d] += 1
    N[sigma] -= 1
    return HilbertData(N, weights, sigma)


def divide_by_one_minus_t(N):
    """Exact quotient of N(t) by (1 - t); raises if N(1) != 0."""
    if sum(N) != 0:
        raise ValueError("polynomial does not vanish at t = 1")
    # N = (1 - t) Q  =>  Q_k = Q_{k-1} + N_k
    Q = []
    acc = 0
    for c in N[:-1]:
        acc += c
        Q.append(acc)
    while Q and Q[-1] == 0:
        Q.pop()
    return Q


def series_expand(h, n):
    """Coefficients of N(t)/prod(1 - t^a_i) up to t^n."""
    s = [0] * (n + 1)
    for k, c in enumerate(h.numerator[:n + 1]):
        s[k] = c
    for a in h.weights:
        # multiply by 1/(1 - t^a)
        for k in range(a, n + 1):
            s[k] += s[k - a]
    return s


def anticanonical_degree(h):
    """A^3 = Q(1)/prod(a_i) with N = (1 - t)^(n - 3) Q, n + 1 = number of weights."""
    drop = len(h.weights) - CONE_DIM
    Q = list(h.numerator)
    for _ in range(drop):
        if sum(Q) != 0:
            raise ValueError("numerator vanishes at t = 1 to order < %d: malformed spec" % drop)
        Q = divide_by_one_minus_t(Q)
    prod = 1
    for a in h.weights:
        prod *= a
    return Fraction(sum(Q), prod)


def asymptotic_ratio(h, m):
    """h^0(m) / (A^3 m^3 / 6)."""
    A3 = anticanonical_degree(h)
    return Fraction(series_expand(h, m)[m]) / (A3 * Fraction(m) ** 3 / 6)
