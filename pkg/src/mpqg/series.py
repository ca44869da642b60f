"""Exact arithmetic in the truncated Laurent ring Q[hbar]/(hbar^(N+1)).

Every scalar in the engine is a Laurent polynomial in the formal variable
hbar with exact rational coefficients, truncated above a per-value
*effective order* and bounded below by a global valuation floor ``-vmax``.
The effective order is tracked through arithmetic so that divisions by
hbar (which destroy the top coefficients) are visible to the caller: a
value of order N has reliable coefficients for all exponents <= N.
"""

from fractions import Fraction


class SeriesError(ArithmeticError):
    pass


class NonPositiveValuation(SeriesError):
    """exp() argument has a term of hbar-exponent <= 0."""


class ValuationUnderflow(SeriesError):
    """An exponent dropped below the Laurent floor -vmax."""


class PrecisionError(SeriesError):
    """A comparison was requested beyond the effective order."""


# Effective order used for exact embedded rationals.  Large enough that it
# never truncates anything; small enough that order arithmetic stays fast.
EXACT_ORDER = 1 << 30

_ZERO = Fraction(0)


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("expected an exact rational, got %r" % (x,))


class TruncLaurent:
    """A truncated Laurent polynomial in hbar over Q.

    coeffs : dict mapping integer exponent -> nonzero Fraction
    order  : largest exponent with a reliable coefficient
    vmax   : exponents below -vmax are illegal
    """

    __slots__ = ("coeffs", "order", "vmax")

    @classmethod
    def _raw(cls, coeffs, order, vmax):
        """Internal constructor: entries are already exact Fractions,
        nonzero, and within the exponent window."""
        self = object.__new__(cls)
        self.coeffs = coeffs
        self.order = order
        self.vmax = vmax
        return self

    def __init__(self, coeffs, order=EXACT_ORDER, vmax=2):
        clean = {}
        for e, c in coeffs.items():
            c = _as_fraction(c)
            if c == 0 or e > order:
                continue
            if e < -vmax:
                raise ValuationUnderflow(
                    "exponent %d below Laurent floor -%d" % (e, vmax))
            clean[e] = c
        self.coeffs = clean
        self.order = order
        self.vmax = vmax

    # -- constructors ------------------------------------------------

    @classmethod
    def const(cls, a, order=EXACT_ORDER, vmax=2):
        return cls({0: _as_fraction(a)}, order, vmax)

    @classmethod
    def zero(cls, order=EXACT_ORDER, vmax=2):
        return cls({}, order, vmax)

    @classmethod
    def one(cls, order=EXACT_ORDER, vmax=2):
        return cls({0: Fraction(1)}, order, vmax)

    @classmethod
    def hbar(cls, order, vmax=2):
        return cls({1: Fraction(1)}, order, vmax)

    # -- structure ---------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def valuation(self):
        """Lowest stored exponent; None for the zero value."""
        return min(self.coeffs) if self.coeffs else None

    def constant(self):
        return self.coeffs.get(0, _ZERO)

    def coeff(self, e):
        return self.coeffs.get(e, _ZERO)

    def nonneg(self):
        """True when no negative hbar power is present."""
        return all(e >= 0 for e in self.coeffs)

    def is_unit(self):
        return self.constant() != 0

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        out = {e: c for e, c in self.coeffs.items() if e <= order}
        for e, c in other.coeffs.items():
            if e > order:
                continue
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return TruncLaurent._raw(out, order, min(self.vmax, other.vmax))

    __radd__ = __add__

    def __neg__(self):
        return TruncLaurent._raw({e: -c for e, c in self.coeffs.items()},
                                 self.order, self.vmax)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        v1 = self.valuation()
        v2 = other.valuation()
        # error(f)*g is O(h^(N1+1+val g)) and symmetrically; min rule.
        o1 = self.order + (v2 if v2 is not None else EXACT_ORDER)
        o2 = other.order + (v1 if v1 is not None else EXACT_ORDER)
        order = min(o1, o2, EXACT_ORDER)
        vmax = min(self.vmax, other.vmax)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e > order:
                    continue
                if e < -vmax:
                    raise ValuationUnderflow(
                        "exponent %d below Laurent floor -%d" % (e, vmax))
                s = out.get(e, _ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return TruncLaurent._raw(out, order, vmax)

    __rmul__ = __mul__

    def _coerce(self, x):
        if isinstance(x, TruncLaurent):
            return x
        return TruncLaurent.const(x, vmax=self.vmax)

    def scaled(self, a):
        a = _as_fraction(a)
        if a == 0:
            return TruncLaurent._raw({}, self.order, self.vmax)
        return TruncLaurent._raw({e: a * c for e, c in self.coeffs.items()},
                                 self.order, self.vmax)

    def shifted(self, k):
        """Multiply by hbar^k (k may be negative, within the floor)."""
        return TruncLaurent({e + k: c for e, c in self.coeffs.items()},
                            self.order + k, self.vmax)

    def truncated(self, n):
        """Forget coefficients above exponent n (lowers the order)."""
        if n >= self.order:
            return self
        return TruncLaurent._raw(
            {e: c for e, c in self.coeffs.items() if e <= n}, n, self.vmax)

    def inverse(self):
        """Multiplicative inverse, factoring out the valuation.

        Negative powers appear when valuation > 0; the Laurent floor
        catches illegal uses.
        """
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("inverse of zero series")
        u = self.shifted(-v)        # unit part, order self.order - v
        c0 = u.constant()
        rest = TruncLaurent({e: c for e, c in u.coeffs.items() if e != 0},
                            u.order, u.vmax)
        # u = c0 (1 + rest/c0); the geometric series terminates because the
        # powers of the tail climb in valuation past the effective order
        acc = TruncLaurent.one(u.order, u.vmax)
        term = TruncLaurent.one(u.order, u.vmax)
        x = rest.scaled(Fraction(-1, 1) / c0)
        while True:
            term = (term * x).truncated(u.order)
            if term.is_zero():
                break
            acc = acc + term
        inv_u = acc.truncated(u.order).scaled(Fraction(1, 1) / c0)
        return inv_u.shifted(-v)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    # -- comparisons -------------------------------------------------

    def eq_at(self, other, n):
        """Exact equality of all coefficients with exponent <= n."""
        other = self._coerce(other)
        if self.order < n or other.order < n:
            raise PrecisionError(
                "comparison at order %d exceeds effective orders (%d, %d)"
                % (n, self.order, other.order))
        for e in set(self.coeffs) | set(other.coeffs):
            if e <= n and self.coeffs.get(e, _ZERO) != other.coeffs.get(e, _ZERO):
                return False
        return True

    def is_zero_at(self, n):
        if self.order < n:
            raise PrecisionError(
                "zero test at order %d exceeds effective order %d"
                % (n, self.order))
        return all(e > n for e in self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append("%s*h" % c)
            else:
                parts.append("%s*h^%d" % (c, e))
        return " + ".join(parts)

    # -- serialization ----------------------------------------------

    def to_json(self):
        return {
            "vmax": self.vmax,
            "N": self.order if self.order < EXACT_ORDER else "exact",
            "terms": {str(e): str(self.coeffs[e]) for e in sorted(self.coeffs)},
        }

    @classmethod
    def from_json(cls, obj, vmax=2):
        order = obj.get("N", "exact")
        if order == "exact":
            order = EXACT_ORDER
        return cls({int(e): Fraction(c) for e, c in obj["terms"].items()},
                   order, obj.get("vmax", vmax))


def ts_exp(f):
    """exp(f) = sum f^n/n!, requiring valuation(f) >= 1.

    The sum terminates because each power raises the valuation.
    """
    if not isinstance(f, TruncLaurent):
        raise TypeError("ts_exp expects a TruncLaurent")
    v = f.valuation()
    if v is not None and v <= 0:
        raise NonPositiveValuation(
            "exp argument must have hbar-valuation >= 1")
    if f.order >= EXACT_ORDER and not f.is_zero():
        raise PrecisionError("exp of an untruncated nonconstant series")
    acc = TruncLaurent.one(f.order, f.vmax)
    term = TruncLaurent.one(f.order, f.vmax)
    n = 0
    while True:
        n += 1
        term = (term * f).scaled(Fraction(1, n)).truncated(f.order)
        if term.is_zero():
            break
        acc = acc + term
    return acc.truncated(f.order)


def ts_div_h(f, k=1):
    """Divide by hbar^k; the top k orders of information are lost."""
    if k < 0:
        raise ValueError("k must be a positive integer")
    return f.shifted(-k)


def qint(n, d, order, vmax=2):
    """The balanced q-integer [n] in q_d = exp(d*hbar).

    Computed by the polynomial sum q_d^(1-n) + q_d^(3-n) + ... + q_d^(n-1),
    so no series division occurs.  [0] = 1 by convention.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return TruncLaurent.one(order, vmax)
    h = TruncLaurent.hbar(order, vmax)
    acc = TruncLaurent.zero(order, vmax)
    for s in range(n):
        acc = acc + ts_exp(h.scaled((2 * s - n + 1) * d))
    return acc


class IndexOutOfRange(SeriesError):
    pass


def _qbinom_poly(n, k):
    """Gaussian binomial as a dict {power of q: int}, balanced convention.

    Pascal recursion [n,k] = q^k [n-1,k] + q^(k-n) [n-1,k-1]; all powers
    stay integral.
    """
    if not 0 <= k <= n:
        raise IndexOutOfRange("need 0 <= k <= n")
    row = {0: {0: 1}}          # [m, j] for current m, keyed by j
    for m in range(1, n + 1):
        new = {}
        for j in range(0, min(m, k) + 1):
            acc = {}
            if j <= m - 1 and j in row:
                for p, c in row[j].items():
                    acc[p + j] = acc.get(p + j, 0) + c
            if j - 1 >= 0 and (j - 1) in row:
                for p, c in row[j - 1].items():
                    acc[p + j - m] = acc.get(p + j - m, 0) + c
            new[j] = {p: c for p, c in acc.items() if c}
        row = new
    return row[k]


def qbinom(n, k, d, order, vmax=2):
    """Gaussian binomial [n over k] in q_d = exp(d*hbar)."""
    poly = _qbinom_poly(n, k)
    h = TruncLaurent.hbar(order, vmax)
    acc = TruncLaurent.zero(order, vmax)
    for p, c in poly.items():
        acc = acc + ts_exp(h.scaled(p * d)).scaled(c)
    return acc
