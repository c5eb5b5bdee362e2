"""Window-truncated toric sheaf data on the three charts, with gluing.

A toric sheaf on one chart is a lattice-indexed family of fine-graded
vector spaces; here a family is stored as a finite window of multisets
of fine weights, one multiset per box summand and lattice point.  The
charts use the conventions

    chart 1: box (i/b, j/c), fine group Z_a, weight steps (b, c),
    chart 2: box (j/c, k/a), fine group Z_b, weight steps (c, a),
    chart 3: box (k/a, i/b), fine group Z_c, weight steps (a, b).

The gluing verifier compares, along each pairwise chart overlap and for
every line index, two doubly-graded dimension multisets obtained from
the one-directional limits of the families, with the character twists
the overlap demands.  Subspace moduli (which line sits where) enter
only through the dimension patterns; that is a faithful shadow of the
gluing equivalence for the rank <= 2 families generated here.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InsufficientWindowError, InvalidInputError
from .kgroup import g_power, kclass_scalar, line_bundle_class
from .partitions import Partition


def chart_data(params, chart):
    """(den1, den2, fine modulus, step1, step2) of a chart."""
    a, b, c = params.weights()
    if chart == 1:
        return (b, c, a, b, c)
    if chart == 2:
        return (c, a, b, c, a)
    if chart == 3:
        return (a, b, c, a, b)
    raise InvalidInputError("chart must be 1, 2 or 3")


@dataclass(frozen=True)
class Window:
    l1min: int
    l1max: int
    l2min: int
    l2max: int

    def __post_init__(self):
        if self.l1min > self.l1max or self.l2min > self.l2max:
            raise InvalidInputError("empty window")

    def contains(self, other):
        return (
            self.l1min <= other.l1min and self.l1max >= other.l1max
            and self.l2min <= other.l2min and self.l2max >= other.l2max
        )

    @staticmethod
    def symmetric(halfwidth):
        return Window(-halfwidth, halfwidth, -halfwidth, halfwidth)


def normalize_point(point):
    """Scale a nonzero pair so its first nonzero coordinate is 1."""
    x, y = Fraction(point[0]), Fraction(point[1])
    if x != 0:
        return (Fraction(1), y / x)
    if y != 0:
        return (Fraction(0), Fraction(1))
    raise InvalidInputError("a point of the projective line cannot be (0, 0)")


@dataclass(frozen=True)
class Rank1Sheaf:
    """Reflexive hull label (A, B, C) and one cokernel partition per chart."""

    A: int
    B: int
    C: int
    lam1: Partition = Partition()
    lam2: Partition = Partition()
    lam3: Partition = Partition()


@dataclass(frozen=True)
class TypeIBundle:
    """Rank-2 bundle datum: twists, strip widths, one point per chart pair."""

    A1: int
    A2: int
    A3: int
    D1: int
    D2: int
    D3: int
    p1: tuple = (Fraction(1), Fraction(0))
    p2: tuple = (Fraction(0), Fraction(1))
    p3: tuple = (Fraction(1), Fraction(1))

    def __post_init__(self):
        if min(self.D1, self.D2, self.D3) < 0:
            raise InvalidInputError("widths must be nonnegative")
        for name in ("p1", "p2", "p3"):
            object.__setattr__(self, name, normalize_point(getattr(self, name)))

    def validate(self, params):
        if self.D1 % params.b or self.D2 % params.c or self.D3 % params.a:
            raise InvalidInputError("widths must satisfy b | D1, c | D2, a | D3")
        return self


def minimal_halfwidth(params, sheaf):
    """Smallest symmetric window halfwidth that stabilizes the family."""
    if isinstance(sheaf, Rank1Sheaf):
        extent = 0
        for lam in (sheaf.lam1, sheaf.lam2, sheaf.lam3):
            if lam.rows:
                extent = max(extent, lam.rows[0], len(lam.rows))
        return max(abs(sheaf.A), abs(sheaf.B), abs(sheaf.C)) + extent + 2
    sheaf.validate(params)
    return (
        max(abs(sheaf.A1), abs(sheaf.A2), abs(sheaf.A3))
        + sheaf.D1 + sheaf.D2 + sheaf.D3 + 2
    )


class TruncatedSFamily:
    """One chart's family on a window: (box, l1, l2) -> fine-weight multiset."""

    __slots__ = ("params", "chart", "window", "dims")

    def __init__(self, params, chart, window, dims):
        self.params = params
        self.chart = chart
        self.window = window
        self.dims = {key: tuple(sorted(val)) for key, val in dims.items() if val}

    def weights_at(self, box, l1, l2):
        return self.dims.get((box, l1, l2), ())

    def dim_at(self, box, l1, l2):
        return len(self.weights_at(box, l1, l2))

    def nonzero_boxes(self):
        return sorted({key[0] for key in self.dims})

    def limit_weights(self, box, direction, coord):
        """Fine weights of the family at +infinity along a direction.

        Weights shift by the chart step along the direction, so the
        stabilized multiset is reported extrapolated back to index 0;
        the last two window slices must agree after extrapolation, else
        the window is too small to contain the limit.
        """
        _, _, mod, step1, step2 = chart_data(self.params, self.chart)
        if direction == 1:
            edge, step = self.window.l1max, step1
            cell = lambda l: (box, l, coord)
        else:
            edge, step = self.window.l2max, step2
            cell = lambda l: (box, coord, l)
        last = Counter((w - edge * step) % mod for w in self.dims.get(cell(edge), ()))
        prev = Counter(
            (w - (edge - 1) * step) % mod for w in self.dims.get(cell(edge - 1), ())
        )
        if last != prev:
            raise InsufficientWindowError(
                f"chart {self.chart} box {box} not stabilized along "
                f"direction {direction} at cross index {coord}"
            )
        return last


def _box_split(value, den):
    """value = residue + den * index with residue in [0, den)."""
    residue = value % den
    return residue, (value - residue) // den


def _staircase_cells(corner, lam, window):
    """Cells of a rank-1 staircase with the partition cut from the corner."""
    cut = set(lam.boxes())
    c1, c2 = corner
    for l1 in range(max(window.l1min, c1), window.l1max + 1):
        for l2 in range(max(window.l2min, c2), window.l2max + 1):
            if (l1 - c1, l2 - c2) not in cut:
                yield (l1, l2)


def _rank1_chart_layout(params, sheaf, chart):
    """Box, lattice corner and partition of one chart of a rank-1 sheaf."""
    A, B, C = sheaf.A, sheaf.B, sheaf.C
    a, b, c = params.weights()
    i, I = _box_split(A, b)
    j, J = _box_split(B, c)
    k, K = _box_split(C, a)
    if chart == 1:
        return (i, j), (I, J), sheaf.lam1
    if chart == 2:
        return (j, k), (J, K), sheaf.lam2
    return (k, i), (K, I), sheaf.lam3


def rank1_sfamily(params, sheaf, chart, window=None, fine_shift=0):
    """Family of a rank-1 torsion-free sheaf on one chart.

    The staircase of the labelled line bundle with the chart partition
    removed from its corner; fine weights walk away from the corner
    weight A+B+C by the chart steps.  `fine_shift` twists every fine
    weight (used to probe that gluing pins the fine grading down).
    """
    needed = Window.symmetric(minimal_halfwidth(params, sheaf))
    if window is None:
        window = needed
    elif not window.contains(needed):
        raise InvalidInputError(f"window too small; need {needed}")
    box, corner, lam = _rank1_chart_layout(params, sheaf, chart)
    _, _, mod, step1, step2 = chart_data(params, chart)
    offset = sheaf.A + sheaf.B + sheaf.C + fine_shift
    dims = {}
    for l1, l2 in _staircase_cells(corner, lam, window):
        w = (offset + (l1 - corner[0]) * step1 + (l2 - corner[1]) * step2) % mod
        dims[(box, l1, l2)] = (w,)
    return TruncatedSFamily(params, chart, window, dims)


def _typeI_chart_layout(params, datum, chart):
    """Box, corner, lattice widths and the corner-region point pair."""
    a, b, c = params.weights()
    i, I = _box_split(datum.A1, b)
    j, J = _box_split(datum.A2, c)
    k, K = _box_split(datum.A3, a)
    if chart == 1:
        return (i, j), (I, J), (datum.D1 // b, datum.D2 // c), (datum.p1, datum.p2)
    if chart == 2:
        return (j, k), (J, K), (datum.D2 // c, datum.D3 // a), (datum.p2, datum.p3)
    return (k, i), (K, I), (datum.D3 // a, datum.D1 // b), (datum.p3, datum.p1)


def typeI_sfamily(params, datum, chart, window=None, fine_shift=0):
    """Family of a rank-2 type-I bundle on one chart.

    Dimension pattern of two nested staircases: 0 below the lower
    corner, 2 past both widths, 1 on the two one-sided strips, and on
    the corner rectangle 1 exactly when the two strip points coincide.
    Both summands share one fine weight at every lattice point.
    """
    datum.validate(params)
    needed = Window.symmetric(minimal_halfwidth(params, datum))
    if window is None:
        window = needed
    elif not window.contains(needed):
        raise InvalidInputError(f"window too small; need {needed}")
    box, corner, (w1, w2), (pt1, pt2) = _typeI_chart_layout(params, datum, chart)
    _, _, mod, step1, step2 = chart_data(params, chart)
    offset = datum.A1 + datum.A2 + datum.A3 + fine_shift
    dims = {}
    for l1 in range(max(window.l1min, corner[0]), window.l1max + 1):
        for l2 in range(max(window.l2min, corner[1]), window.l2max + 1):
            u, v = l1 - corner[0], l2 - corner[1]
            if u >= w1 and v >= w2:
                dim = 2
            elif u >= w1 or v >= w2:
                dim = 1
            else:
                dim = 1 if pt1 == pt2 else 0
            if dim:
                w = (offset + u * step1 + v * step2) % mod
                dims[(box, l1, l2)] = (w,) * dim
    return TruncatedSFamily(params, chart, window, dims)


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------

def _overlap_profile(fam, direction, coord, outer, fixed_slot, ranges, twists):
    """Doubly-graded dimension multiset of one side of a gluing equation."""
    profile = Counter()
    for i in range(ranges):
        box = (i, outer) if fixed_slot == 2 else (outer, i)
        limit = fam.limit_weights(box, direction, coord)
        for l, mult in limit.items():
            profile[twists(i, l)] += mult
    return profile


def check_gluing(params, f1, f2, f3, collect_diagnostics=True):
    """Verify the three overlap conditions on a triple of chart families.

    For every overlap line index, both sides are computed as multisets
    of doubly-graded dimensions (the two finite cyclic gradings of the
    overlap), including the character twists; the verdict is their
    equality for all indices the windows cover past stabilization.
    Returns (ok, diagnostics).
    """
    a, b, c = params.weights()
    diagnostics = []
    equations = (
        # (name, left family, left dir, left outer range/den, left twist,
        #        right family, right dir, right twist, step factor)
        ("12", f1, b, lambda i, l: ((l - i) % a, i % b),
               f2, a, lambda i, l, j, ell: ((i + j + ell * c) % a, (l - i - j - ell * c) % b),
               c),
        ("23", f2, c, lambda i, l: ((l - i) % b, i % c),
               f3, b, lambda i, l, j, ell: ((i + j + ell * a) % b, (l - i - j - ell * a) % c),
               a),
        ("31", f3, a, lambda i, l: (i % a, (l - i) % c),
               f1, c, lambda i, l, j, ell: ((l - i - j - ell * b) % a, (i + j + ell * b) % c),
               b),
    )
    ok = True
    for name, left, lrange, ltwist, right, rrange, rtwist, jrange in equations:
        lo = max(left.window.l2min, right.window.l1min)
        hi = min(left.window.l2max, right.window.l1max)
        if lo > hi:
            raise InsufficientWindowError(f"no overlap range for equation {name}")
        for j in range(jrange):
            for ell in range(lo, hi + 1):
                lhs = _overlap_profile(left, 1, ell, j, 2, lrange, ltwist)
                rhs = _overlap_profile(
                    right, 2, ell, j, 1, rrange,
                    lambda i, l: rtwist(i, l, j, ell),
                )
                if lhs != rhs:
                    ok = False
                    if collect_diagnostics and len(diagnostics) < 8:
                        diagnostics.append({
                            "equation": name,
                            "outer": j,
                            "line": ell,
                            "lhs": sorted(lhs.items()),
                            "rhs": sorted(rhs.items()),
                        })
    return ok, diagnostics


# ---------------------------------------------------------------------------
# coherence / torsion-freeness / reflexivity
# ---------------------------------------------------------------------------

def coherence_check(fam):
    """Finite window shadow of coherence.

    All multisets are finite by construction; the window's negative
    edges must be empty (weight spaces vanish far down) and both
    positive directions must have stabilized.
    """
    w = fam.window
    for (box, l1, l2) in fam.dims:
        if l1 == w.l1min or l2 == w.l2min:
            return False
    try:
        for box in fam.nonzero_boxes():
            for l2 in range(w.l2min, w.l2max + 1):
                fam.limit_weights(box, 1, l2)
            for l1 in range(w.l1min, w.l1max + 1):
                fam.limit_weights(box, 2, l1)
    except InsufficientWindowError:
        return False
    return True


def torsion_free_check(fam):
    """Multiplication maps are injective: weight multisets nest, shifted."""
    if not coherence_check(fam):
        return False
    _, _, mod, step1, step2 = chart_data(fam.params, fam.chart)
    w = fam.window
    for (box, l1, l2), weights in fam.dims.items():
        for dl1, dl2, step in ((1, 0, step1), (0, 1, step2)):
            if l1 + dl1 > w.l1max or l2 + dl2 > w.l2max:
                continue
            shifted = Counter((x + step) % mod for x in weights)
            target = Counter(fam.weights_at(box, l1 + dl1, l2 + dl2))
            if any(mult > target.get(key, 0) for key, mult in shifted.items()):
                return False
    return True


def reflexive_check(fam):
    """Intersection-of-filtrations dimension pattern, for rank <= 2.

    With v and w the limiting dimensions of the row and column through
    a lattice point and r the box rank, the cell dimension must be
    min(v, w) when either filtration is full, and max(0, v + w - r)
    otherwise, except that two transverse-or-equal lines (v = w = 1,
    r = 2) may meet in dimension 0 or 1.
    """
    if not torsion_free_check(fam):
        return False
    w = fam.window
    inner = Window(w.l1min + 1, w.l1max - 1, w.l2min + 1, w.l2max - 1)
    for box in fam.nonzero_boxes():
        col = {
            l1: sum(fam.limit_weights(box, 2, l1).values())
            for l1 in range(inner.l1min, inner.l1max + 1)
        }
        row = {
            l2: sum(fam.limit_weights(box, 1, l2).values())
            for l2 in range(inner.l2min, inner.l2max + 1)
        }
        rank = max(col.values(), default=0)
        if rank > 2:
            raise InvalidInputError("reflexivity test implemented for rank <= 2")
        for l1 in range(inner.l1min, inner.l1max + 1):
            for l2 in range(inner.l2min, inner.l2max + 1):
                v, u = col[l1], row[l2]
                dim = fam.dim_at(box, l1, l2)
                if v == rank or u == rank:
                    if dim != min(v, u):
                        return False
                elif rank == 2 and v == 1 and u == 1:
                    if dim not in (0, 1):
                        return False
                elif dim != max(0, v + u - rank):
                    return False
    return True


# ---------------------------------------------------------------------------
# devissage oracle for K-classes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _point_class(params, chart, twist):
    """(1 - g^w')(1 - g^w'') g^twist built from the two other weights.

    Deliberately not the division route the closed formulas use.
    """
    weights = {1: (params.b, params.c), 2: (params.a, params.c), 3: (params.a, params.b)}
    w1, w2 = weights[chart]
    one = kclass_scalar(params, 1)
    return (one - g_power(params, w1)) * (one - g_power(params, w2)) * g_power(params, twist)


@lru_cache(maxsize=None)
def _devissage_chart_deficit(params, chart, offset, lam):
    """Per-cell sum of twisted point classes over one chart's partition."""
    _, _, mod, step1, step2 = chart_data(params, chart)
    total = kclass_scalar(params, 0)
    for l1, l2 in lam.boxes():
        twist = (offset + l1 * step1 + l2 * step2) % mod
        total = total + _point_class(params, chart, twist)
    return total


def kclass_by_devissage(params, sheaf):
    """K-class by peeling weight spaces into twisted point classes.

    Walks the lattice cells where the family differs from its reflexive
    envelope, one cell at a time, and subtracts a twisted point class
    per cell; no per-color counting and no closed formula is used.
    """
    if isinstance(sheaf, Rank1Sheaf):
        total = line_bundle_class(params, sheaf.A, sheaf.B, sheaf.C)
        offset = sheaf.A + sheaf.B + sheaf.C
        for chart in (1, 2, 3):
            _, _, mod, _, _ = chart_data(params, chart)
            _, _, lam = _rank1_chart_layout(params, sheaf, chart)
            total = total - _devissage_chart_deficit(params, chart, offset % mod, lam)
        return total
    datum = sheaf.validate(params)
    total = line_bundle_class(params, datum.A1, datum.A2, datum.A3)
    total = total + line_bundle_class(
        params, datum.A1 + datum.D1, datum.A2 + datum.D2, datum.A3 + datum.D3
    )
    offset = datum.A1 + datum.A2 + datum.A3
    for chart in (1, 2, 3):
        _, _, mod, step1, step2 = chart_data(params, chart)
        _, _, (w1, w2), (pt1, pt2) = _typeI_chart_layout(params, datum, chart)
        if pt1 == pt2:
            continue
        for u in range(w1):
            for v in range(w2):
                twist = (offset + u * step1 + v * step2) % mod
                total = total - _point_class(params, chart, twist)
    return total
