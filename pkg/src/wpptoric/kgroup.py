"""The rational Grothendieck ring of a weighted projective plane.

For weights (a, b, c) the ring is Q[g, 1/g] modulo the principal ideal
generated by P(g) = (1 - g^a)(1 - g^b)(1 - g^c), where g is the class
of the tautological line bundle O(-1).  Since P has constant term 1, g
is already invertible in Q[g]/(P), so every class has a unique
representative of degree < a + b + c.  Equality of classes is equality
of those coefficient vectors.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import InvalidInputError
from .exact_arith import poly_divmod, poly_mod, poly_mul, poly_trim
from .partitions import chart_spec, color_count


@dataclass(frozen=True)
class WppParams:
    """Weights of the stack, with their gcd/lcm bookkeeping."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise InvalidInputError("weights must be positive integers")

    @property
    def d(self):
        return gcd(self.a, self.b, self.c)

    @property
    def d12(self):
        return gcd(self.a, self.b)

    @property
    def d13(self):
        return gcd(self.a, self.c)

    @property
    def d23(self):
        return gcd(self.b, self.c)

    @property
    def m(self):
        return lcm(self.a, self.b, self.c)

    @property
    def degree(self):
        return self.a + self.b + self.c

    def hat(self, i):
        """Weight attached to chart i: 1 -> a, 2 -> b, 3 -> c."""
        return {1: self.a, 2: self.b, 3: self.c}[i]

    def weights(self):
        return (self.a, self.b, self.c)


@lru_cache(maxsize=None)
def relation_poly(params):
    """(1 - x^a)(1 - x^b)(1 - x^c) as an integer coefficient tuple."""
    out = [1]
    for w in params.weights():
        factor = [0] * (w + 1)
        factor[0], factor[w] = 1, -1
        out = poly_mul(out, factor)
    return tuple(out)


@lru_cache(maxsize=None)
def _g_inverse(params):
    """Canonical representative of 1/g.

    P(g) = 1 + g*Q(g) vanishes in the quotient, so 1/g = -Q(g); the
    constant term of P being 1 is what makes this work.
    """
    rel = relation_poly(params)
    assert rel[0] == 1
    return _reduce(params, [-c for c in rel[1:]])


def _scalar(value):
    """Prefer plain ints for integral values; Fraction otherwise."""
    f = Fraction(value)
    return int(f) if f.denominator == 1 else f


def _reduce(params, coeffs):
    rem = poly_mod(list(coeffs), list(relation_poly(params)))
    deg = params.degree
    return tuple(_scalar(rem[i]) if i < len(rem) else 0 for i in range(deg))


class KClass:
    """A class in the rational K-group, by its canonical representative."""

    __slots__ = ("params", "coeffs")

    def __init__(self, params, coeffs, reduce=True):
        if reduce:
            coeffs = _reduce(params, coeffs)
        self.params = params
        self.coeffs = tuple(coeffs)

    def _check(self, other):
        if self.params != other.params:
            raise InvalidInputError("K-classes live over different weights")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = kclass_scalar(self.params, other)
        self._check(other)
        return KClass(
            self.params,
            tuple(x + y for x, y in zip(self.coeffs, other.coeffs)),
            reduce=False,
        )

    __radd__ = __add__

    def __neg__(self):
        return KClass(self.params, tuple(-x for x in self.coeffs), reduce=False)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = kclass_scalar(self.params, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return KClass(
                self.params,
                tuple(_scalar(x * other) for x in self.coeffs),
                reduce=False,
            )
        self._check(other)
        return KClass(self.params, poly_mul(list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, KClass)
            and self.params == other.params
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.params, self.coeffs))

    def to_triples(self):
        """Serialize as ordered (exponent, numerator, denominator) triples."""
        return [
            (e, c.numerator, c.denominator)
            for e, c in enumerate(self.coeffs)
            if c != 0
        ]

    def __repr__(self):
        terms = " + ".join(f"{c}*g^{e}" for e, c in enumerate(self.coeffs) if c != 0)
        return f"KClass[{terms or '0'}]"


def kclass_scalar(params, value):
    coeffs = [_scalar(value)] + [0] * (params.degree - 1)
    return KClass(params, coeffs, reduce=False)


def kclass_from_poly(params, coeffs):
    return KClass(params, coeffs)


@lru_cache(maxsize=None)
def g_power(params, e):
    """Canonical representative of g^e for any integer e."""
    if e >= 0:
        return KClass(params, [0] * e + [1])
    return g_power(params, e + 1) * KClass(params, _g_inverse(params), reduce=False)


def kclass_from_laurent(params, terms):
    """Class of a finite Laurent polynomial {exponent: coefficient} in g."""
    out = kclass_scalar(params, 0)
    for e, coeff in terms.items():
        out = out + g_power(params, e) * _scalar(coeff)
    return out


@lru_cache(maxsize=None)
def structure_sheaf_point(params, i, j=0):
    """Class of the chart-i fixed point's structure sheaf, twisted by g^j.

    Reduction of (1-g^a)(1-g^b)(1-g^c)/(1-g^hat(i)) * g^j; the division
    is exact in Q[g].
    """
    if i not in (1, 2, 3):
        raise InvalidInputError("chart index must be 1, 2 or 3")
    w = params.hat(i)
    denom = [0] * (w + 1)
    denom[0], denom[w] = 1, -1
    quo, rem = poly_divmod(list(relation_poly(params)), denom)
    assert not rem
    return KClass(params, quo) * g_power(params, j)


def line_bundle_class(params, A, B, C):
    """Class of the equivariant line bundle labelled (A, B, C): g^(A+B+C)."""
    return g_power(params, A + B + C)


@lru_cache(maxsize=None)
def _rank1_chart_deficit(params, chart, offset, lam):
    """Sum of twisted point classes cut out by one chart's partition."""
    total = kclass_scalar(params, 0)
    counts = color_count(lam, chart_spec(params, chart, offset))
    for color, count in enumerate(counts):
        if count:
            total = total + count * structure_sheaf_point(params, chart, color)
    return total


def rank1_class(params, A, B, C, lam1, lam2, lam3):
    """Class of the rank-1 torsion-free sheaf with reflexive hull (A, B, C).

    The hull contributes g^(A+B+C); each partition box contributes a
    point class twisted by the box's fine weight, which the coloring at
    offset A+B+C records directly.  (Grouping by colors relative to the
    hull generator and twisting the whole sum by g^(A+B+C) instead gives
    the same classes, since a twisted point class only depends on its
    exponent modulo the chart weight.)
    """
    offset = A + B + C
    total = line_bundle_class(params, A, B, C)
    for chart, lam in ((1, lam1), (2, lam2), (3, lam3)):
        total = total - _rank1_chart_deficit(params, chart, offset % params.hat(chart), lam)
    return total


@lru_cache(maxsize=None)
def _one_minus_g_product(params, e1, e2):
    one = kclass_scalar(params, 1)
    return (one - g_power(params, e1)) * (one - g_power(params, e2))


def rank2_typeI_class(params, datum):
    """Class of a rank-2 bundle with one box summand per chart.

    `datum` carries integers A1, A2, A3, widths D1, D2, D3 with
    b | D1, c | D2, a | D3, and normalized points p1, p2, p3.
    """
    a, b, c = params.weights()
    if datum.D1 % b or datum.D2 % c or datum.D3 % a:
        raise InvalidInputError("widths must satisfy b | D1, c | D2, a | D3")
    total = kclass_scalar(params, 1) + g_power(params, datum.D1 + datum.D2 + datum.D3)
    pairs = (
        (datum.D1, datum.D2, datum.p1 == datum.p2),
        (datum.D2, datum.D3, datum.p2 == datum.p3),
        (datum.D3, datum.D1, datum.p3 == datum.p1),
    )
    for di, dj, coincide in pairs:
        if coincide:
            continue
        total = total - _one_minus_g_product(params, di, dj)
    return total * g_power(params, datum.A1 + datum.A2 + datum.A3)


def verify_relations(params):
    """Check the identification rows among twisted point classes.

    For every shift t the three full-cycle sums with step d agree, and
    the pairwise sums with steps d12, d23, d13 agree; all of them reduce
    to honest equalities of canonical representatives.
    """
    a, b, c = params.weights()

    def cycle(chart, modulus, step, shift):
        out = kclass_scalar(params, 0)
        for i in range(modulus // step):
            out = out + structure_sheaf_point(params, chart, i * step + shift)
        return out

    d, d12, d13, d23 = params.d, params.d12, params.d13, params.d23
    for t in range(d):
        s1, s2, s3 = cycle(1, a, d, t), cycle(2, b, d, t), cycle(3, c, d, t)
        if not (s1 == s2 == s3):
            return False
    for t in range(d12):
        if cycle(1, a, d12, t) != cycle(2, b, d12, t):
            return False
    for t in range(d23):
        if cycle(2, b, d23, t) != cycle(3, c, d23, t):
            return False
    for t in range(d13):
        if cycle(1, a, d13, t) != cycle(3, c, d13, t):
            return False
    return True
