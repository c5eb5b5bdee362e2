"""Inertia-stack sectors and the orbifold Chern character.

The connected components of the inertia stack are indexed by rationals
f in [0, 1): the 2-dimensional ones by multiples of 1/d, the
1-dimensional ones by multiples of 1/d_ij not already counted, and the
0-dimensional ones by multiples of 1/hat(i) not counted before.  On a
sector the tautological class g acts as the root of unity e^(-2 pi i f)
times exp(-x) truncated at the sector dimension; extending that map
multiplicatively gives a ring map from the K-group to the direct sum of
truncated cohomologies with cyclotomic coefficients, and the map is an
isomorphism, so exact coefficientwise comparison of the images is a
complete equality test.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError
from .exact_arith import Cyclotomic, zeta_pow

KIND_RANK = {"2dim": 0, "1dim": 1, "0dim": 2}


@dataclass(frozen=True)
class Sector:
    f: Fraction
    kind: str  # "2dim" | "1dim" | "0dim"
    which: tuple  # () | (i, j) with i < j | (i,)

    @property
    def dim(self):
        return 2 - KIND_RANK[self.kind]

    def sort_key(self):
        return (self.f, KIND_RANK[self.kind], self.which)


def sectors(params):
    """Canonically ordered sectors of the inertia stack.

    >>> from wpptoric.kgroup import WppParams
    >>> [ (str(s.f), s.kind) for s in sectors(WppParams(1, 1, 2)) ]
    [('0', '2dim'), ('1/2', '0dim')]
    """
    d = params.d
    two = {Fraction(l, d) for l in range(d)}
    pair_gcds = {(1, 2): params.d12, (1, 3): params.d13, (2, 3): params.d23}
    one = {}
    for pair, dij in pair_gcds.items():
        one[pair] = {Fraction(l, dij) for l in range(dij)} - two
    chart_pairs = {1: ((1, 2), (1, 3)), 2: ((1, 2), (2, 3)), 3: ((1, 3), (2, 3))}
    zero = {}
    for i in (1, 2, 3):
        used = set(two)
        for pair in chart_pairs[i]:
            used |= one[pair]
        zero[i] = {Fraction(l, params.hat(i)) for l in range(params.hat(i))} - used
    out = [Sector(f, "2dim", ()) for f in two]
    for pair, fs in one.items():
        out.extend(Sector(f, "1dim", pair) for f in fs)
    for i, fs in zero.items():
        out.extend(Sector(f, "0dim", (i,)) for f in fs)
    return tuple(sorted(out, key=Sector.sort_key))


def _root(params, f, exponent=1):
    """e^(-2 pi i f exponent) embedded in the order-lcm(a,b,c) field."""
    m = params.m
    return zeta_pow(f.denominator, -f.numerator * exponent).embed(m)


def _tpoly_mul(p, q, length):
    out = [Cyclotomic.from_rational(0) for _ in range(length)]
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            if i + j < length:
                out[i + j] = out[i + j] + a * b
    return out


class ChernVector:
    """Per-sector truncated polynomials in the sector hyperplane class.

    Entries are tuples of cyclotomic coefficients in ascending degree
    (length dim+1), all embedded in the order-lcm(a,b,c) field so that
    equality is plain coefficient comparison.  Codegree k of a sector of
    dimension n is the degree n-k coefficient.
    """

    __slots__ = ("params", "entries")

    def __init__(self, params, entries):
        m = params.m
        self.params = params
        fixed = {}
        for sector, coeffs in entries.items():
            if len(coeffs) != sector.dim + 1:
                raise InvalidInputError("sector entry length must be dim + 1")
            fixed[sector] = tuple(c.embed(m) if isinstance(c, Cyclotomic)
                                  else Cyclotomic.from_rational(c).embed(m)
                                  for c in coeffs)
        self.entries = fixed

    def sector_list(self):
        return tuple(sorted(self.entries, key=Sector.sort_key))

    def codegree(self, sector, k):
        return self.entries[sector][sector.dim - k]

    def __eq__(self, other):
        if not isinstance(other, ChernVector) or self.params != other.params:
            return False
        if set(self.entries) != set(other.entries):
            return False
        for sector, coeffs in self.entries.items():
            theirs = other.entries[sector]
            if any(a != b for a, b in zip(coeffs, theirs)):
                return False
        return True

    __hash__ = None

    def to_records(self):
        records = []
        for sector in self.sector_list():
            coeffs = [
                [c.order, [[x.numerator, x.denominator] for x in c.coeffs]]
                for c in self.entries[sector]
            ]
            records.append({
                "f": [sector.f.numerator, sector.f.denominator],
                "kind": sector.kind,
                "which": list(sector.which),
                "coeffs": coeffs,
            })
        return records

    def __repr__(self):
        parts = [f"{s.f}:{s.kind}" for s in self.sector_list()]
        return f"ChernVector({', '.join(parts)})"


from functools import lru_cache


@lru_cache(maxsize=None)
def _g_image_powers(params):
    """Per sector, the truncated powers of the image of g up to g^(a+b+c-1)."""
    table = {}
    for sector in sectors(params):
        length = sector.dim + 1
        omega = _root(params, sector.f)
        image_g = [omega * c for c in (1, -1, Fraction(1, 2))[:length]]
        powers = [[Cyclotomic.from_rational(1)] + [Cyclotomic.from_rational(0)] * (length - 1)]
        for _ in range(params.degree - 1):
            powers.append(_tpoly_mul(powers[-1], image_g, length))
        table[sector] = tuple(tuple(p) for p in powers)
    return table


def tch_of_kclass(kclass):
    """Orbifold Chern character of a K-class, sector by sector.

    Sends g to e^(-2 pi i f) (1 - x + x^2/2), truncated at the sector
    dimension, and extends multiplicatively over the canonical
    representative.
    """
    params = kclass.params
    table = _g_image_powers(params)
    entries = {}
    for sector in sectors(params):
        length = sector.dim + 1
        powers = table[sector]
        acc = [Cyclotomic.from_rational(0) for _ in range(length)]
        for j, coeff in enumerate(kclass.coeffs):
            if coeff == 0:
                continue
            for i in range(length):
                acc[i] = acc[i] + coeff * powers[j][i]
        entries[sector] = acc
    return ChernVector(params, entries)


def tch_rank2_closed_form(params, datum):
    """Closed-form orbifold Chern character of a rank-2 type-I bundle.

    Requires positive widths, mutually distinct points, the divisibility
    b | D1, c | D2, a | D3 and the normalization A1 = A2 = 0; the whole
    character is then a function of A = A3 and the widths.
    """
    a, b, c = params.weights()
    if datum.D1 % b or datum.D2 % c or datum.D3 % a:
        raise InvalidInputError("widths must satisfy b | D1, c | D2, a | D3")
    if min(datum.D1, datum.D2, datum.D3) <= 0:
        raise InvalidInputError("closed form needs strictly positive widths")
    if datum.p1 == datum.p2 or datum.p2 == datum.p3 or datum.p3 == datum.p1:
        raise InvalidInputError("closed form needs mutually distinct points")
    if datum.A1 != 0 or datum.A2 != 0:
        raise InvalidInputError("closed form is stated for A1 = A2 = 0")
    A = datum.A3
    D = (datum.D1, datum.D2, datum.D3)
    sum_d = sum(D)
    sum_d2 = sum(x * x for x in D)
    # sector pair -> (index of D_j twist, D_i, D_k) per the cyclic display
    pair_roles = {(1, 2): (1, 0, 2), (2, 3): (2, 1, 0), (1, 3): (0, 2, 1)}
    entries = {}
    for sector in sectors(params):
        omega_a = _root(params, sector.f, A)
        if sector.kind == "2dim":
            entries[sector] = (
                2 * omega_a,
                -(2 * A + sum_d) * omega_a,
                (Fraction(A * A) + sum_d * A + Fraction(sum_d2, 2)) * omega_a,
            )
        elif sector.kind == "1dim":
            j_idx, i_idx, k_idx = pair_roles[sector.which]
            twist = _root(params, sector.f, D[j_idx])
            const = (1 + twist) * omega_a
            linear = -((1 + twist) * A + D[i_idx] + twist * D[j_idx] + D[k_idx]) * omega_a
            entries[sector] = (const, linear)
        else:
            (i,) = sector.which
            di = D[i - 1]
            dnext = D[i % 3]
            entries[sector] = ((_root(params, sector.f, di) + _root(params, sector.f, dnext)) * omega_a,)
    return ChernVector(params, entries)
