"""Acceptance suite: one test per criterion, printing one verdict line each.

Every tolerance is exact (rational or cyclotomic equality); there are no
floating-point comparisons anywhere.
"""

import sys
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import lcm

import pytest

from wpptoric.hilbert import (
    GeneratingSheafSpec,
    chi_oracle,
    hilb_fit_oracle,
    hilb_top,
    rank2_constant_term,
)
from wpptoric.inertia import tch_of_kclass, tch_rank2_closed_form
from wpptoric.kgroup import (
    WppParams,
    rank1_class,
    rank2_typeI_class,
    verify_relations,
)
from wpptoric.partitions import (
    Partition,
    balanced_rhs,
    balanced_spec,
    colored_series,
    color_zero_specialization,
    eta_inv_pow,
    g_series,
    one_cc_closed_form,
    partitions_of_size,
    reference_113_report,
    specialize,
    theta3,
    total_count_specialization,
)
from wpptoric.rank2 import (
    STANDARD_POINTS,
    h_vb_specialized,
    is_mu_stable,
    slope_oracle_stability,
)
from wpptoric.sheaf_model import (
    Rank1Sheaf,
    TypeIBundle,
    check_gluing,
    kclass_by_devissage,
    rank1_sfamily,
)

PT1, PT2, PT3 = STANDARD_POINTS


def report(num, ok, detail=""):
    tail = f" - {detail}" if detail else ""
    print(f"ACCEPTANCE {num:02d}: {'PASS' if ok else 'FAIL'}{tail}", file=sys.__stdout__)
    assert ok, f"criterion {num} failed: {detail}"


def note(text):
    print(f"    {text}", file=sys.__stdout__)


@lru_cache(maxsize=None)
def _small_lcm_weights():
    out = []
    for a in range(1, 21):
        for b in range(1, 21):
            for c in range(1, 21):
                if lcm(a, b, c) <= 20:
                    out.append((a, b, c))
    return tuple(out)


@lru_cache(maxsize=None)
def _trr_grid_results():
    formula_matches = vanishing_holds = True
    for weights in _small_lcm_weights():
        params = WppParams(*weights)
        for r in range(-15, 16):
            quad, lin, _ = hilb_fit_oracle(params, r)
            top = hilb_top(params, r)
            if (quad, lin) != (top.quad, top.lin):
                formula_matches = False
            if r % params.d:
                if (top.quad, top.lin) != (0, 0):
                    vanishing_holds = False
                if any(chi_oracle(params, r + params.m * t) for t in range(6)):
                    vanishing_holds = False
    return formula_matches, vanishing_holds


def test_criterion_01_trr_vs_monomial_oracle():
    formula_matches, _ = _trr_grid_results()
    count = len(_small_lcm_weights())
    report(1, formula_matches,
           f"closed form == oracle fit on {count} weight triples x r in [-15,15]")


def test_criterion_02_vanishing():
    _, vanishing_holds = _trr_grid_results()
    report(2, vanishing_holds, "d does not divide r forces zero formula and zero counts")


def test_criterion_03_plane_series():
    params = WppParams(1, 1, 1)
    series = g_series(params, 0, 10)
    merged = total_count_specialization(series)
    expected = eta_inv_pow(3, 10)
    report(3, merged.coeffs == expected.coeffs,
           "plane count equals the cubed partition function through order 10")


def test_criterion_04_112_series():
    params = WppParams(1, 1, 2)
    # color-0 tracking folds the stacky chart; partitions with at most 8
    # zero-colored boxes have at most 18 boxes (measured, k=2 balanced),
    # so source order 8 + 18 = 26 makes orders <= 8 exact
    series = g_series(params, 0, 26)
    lhs = color_zero_specialization(series)
    rhs = theta3(8) * eta_inv_pow(4, 8)
    ok = all(lhs.coefficient((e,)) == rhs.coefficient((e,)) for e in range(9))
    prefix = [lhs.coefficient((e,)) for e in range(3)]
    report(4, ok and prefix == [1, 6, 22],
           f"color-0 count equals theta3/eta^4 through order 8; starts {prefix}")


def test_criterion_05_balanced_identity():
    ok = True
    for k in (2, 3):
        brute = colored_series(balanced_spec(k), 8)
        if brute != balanced_rhs(k, 8):
            ok = False
    report(5, ok, "balanced closed formula matches enumeration for k=2,3, order 8")


def test_criterion_06_one_cc_closed_form():
    ok = True
    literal_differs = False
    for c in (2, 3):
        params = WppParams(1, c, c)
        g = g_series(params, 0, 6)
        assign = {"p0": {f"r{l}": 1 for l in range(c)}}
        for l in range(c):
            assign[f"q{l}"] = f"r{l}"
            assign[f"r{l}"] = f"r{l}"
        brute = specialize(g, assign, result_vars=tuple(f"r{l}" for l in range(c)))
        corrected = one_cc_closed_form(c, 6, leading_power=3)
        literal = one_cc_closed_form(c, 6, leading_power=1)
        if brute != corrected:
            ok = False
        if brute != literal:
            literal_differs = True
    report(6, ok and literal_differs,
           "enumeration equals the closed product with the full-cycle factor cubed")
    note("the reference display prints that factor to the first power only;")
    note("at c=1 the display would contradict the plane count, and brute force")
    note("fixes the exponent to 3 (equivalently: inner product up to c-1)")


def test_criterion_07_113_report():
    report_data = reference_113_report(4)
    statuses = [v["status"] for v in report_data["verdicts"]]
    ok = statuses[:6] == ["ok"] * 6 and statuses[6] == "invalid-variable"
    corrected = ({"r0": 1, "r1": 2, "r2": 1}, 3) in report_data["unmatched_brute_terms"]
    for v in report_data["verdicts"]:
        note(f"reference term {v['term'][0]} x{v['term'][1]}: {v['status']}")
    note("brute force gives 3*r0*r1^2*r2 where the reference prints r3")
    report(7, ok and corrected,
           "order-4 expansion emitted; the out-of-range color index is flagged")


def _partition_triples(max_total):
    for total in range(max_total + 1):
        for s1 in range(total + 1):
            for s2 in range(total - s1 + 1):
                s3 = total - s1 - s2
                for l1 in partitions_of_size(s1):
                    for l2 in partitions_of_size(s2):
                        for l3 in partitions_of_size(s3):
                            yield l1, l2, l3


def test_criterion_08_kclass_consistency():
    triples = list(_partition_triples(6))
    rank1_ok = True
    for weights in product((1, 2, 3), repeat=3):
        params = WppParams(*weights)
        for A, B, C in product((-3, 0, 2), repeat=3):
            for l1, l2, l3 in triples:
                sheaf = Rank1Sheaf(A, B, C, l1, l2, l3)
                if kclass_by_devissage(params, sheaf) != rank1_class(params, A, B, C, l1, l2, l3):
                    rank1_ok = False
    rank2_ok = True
    patterns = ((PT1, PT2, PT3), (PT1, PT1, PT3), (PT1, PT2, PT1), (PT3, PT2, PT2),
                (PT2, PT2, PT2))
    for weights in product((1, 2, 3), repeat=3):
        params = WppParams(*weights)
        a, b, c = params.weights()
        for A in ((0, 0, 0), (-1, 2, 0), (1, 1, 1)):
            for d1 in range(0, 7, b):
                for d2 in range(0, 7, c):
                    for d3 in range(0, 7, a):
                        for pts in patterns:
                            datum = TypeIBundle(*A, d1, d2, d3, *pts)
                            if kclass_by_devissage(params, datum) != rank2_typeI_class(params, datum):
                                rank2_ok = False
    relations_ok = all(
        verify_relations(WppParams(*w)) for w in product(range(1, 7), repeat=3)
    )
    report(8, rank1_ok and rank2_ok and relations_ok,
           "devissage == closed forms (ranks 1, 2); point-class relations hold to weight 6")


def test_criterion_09_chern_consistency():
    ok = True
    for weights in product((1, 2, 3, 4), repeat=3):
        params = WppParams(*weights)
        a, b, c = params.weights()
        for d1 in range(b, 9, b):
            for d2 in range(c, 9, c):
                for d3 in range(a, 9, a):
                    for A in (-2, -1, 0, 1, 3):
                        datum = TypeIBundle(0, 0, A, d1, d2, d3, PT1, PT2, PT3)
                        direct = tch_of_kclass(rank2_typeI_class(params, datum))
                        closed = tch_rank2_closed_form(params, datum)
                        if direct != closed:
                            ok = False
    report(9, ok, "character of the K-class equals the closed form on weights <= 4, widths <= 8")


def test_criterion_10_stability_oracle():
    ok = True
    for weights in product((1, 2, 3, 4), repeat=3):
        params = WppParams(*weights)
        a, b, c = params.weights()
        specs = (GeneratingSheafSpec(params.m), GeneratingSheafSpec(2 * params.m))
        for d1 in range(0, 9, b):
            for d2 in range(0, 9, c):
                for d3 in range(0, 9, a):
                    for pts in ((PT1, PT2, PT3), (PT1, PT1, PT3)):
                        datum = TypeIBundle(0, 1, -1, d1, d2, d3, *pts)
                        expected = is_mu_stable(params, datum)
                        for spec in specs:
                            if slope_oracle_stability(params, spec, datum) != expected:
                                ok = False
    report(10, ok, "classifier == slope oracle on weights <= 4, widths <= 8, E in {m, 2m}")


def test_criterion_11_integrality():
    ok = True
    checked = 0
    for weights in ((1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)):
        params = WppParams(*weights)
        spec = GeneratingSheafSpec(params.m if params.m % 2 == 0 else 2 * params.m)
        a, b, c = params.weights()
        for c1 in range(-3, 4):
            for lam in range(params.d):
                for d1 in range(b, 21, b):
                    for d2 in range(c, 21 - d1, c):
                        for d3 in range(a, 21 - d1 - d2, a):
                            if (c1 + d1 + d2 + d3) % 2:
                                continue
                            A = -(c1 + d1 + d2 + d3) // 2
                            if (A - lam) % params.d:
                                continue
                            value = rank2_constant_term(params, spec, c1, lam, d1, d2, d3)
                            checked += 1
                            if value.denominator != 1:
                                ok = False
    report(11, ok, f"constant term integral on {checked} admissible data, widths sum <= 20")


def test_criterion_12_222_vs_plane():
    spec2 = GeneratingSheafSpec(2)
    spec1 = GeneratingSheafSpec(1)
    ok = True
    for half in (0, -2, 2):
        big = h_vb_specialized(WppParams(2, 2, 2), spec2, 2 * half, 0, 14)
        small = h_vb_specialized(WppParams(1, 1, 1), spec1, 0, 0, 7)
        shift = max(e for (e,) in big.coeffs) - max(e for (e,) in small.coeffs)
        if big != small.shift_exponents(shift):
            ok = False
    report(12, ok, "gerbe series equals plane c1=0 series after a uniform shift, widths to 14")


def test_criterion_13_gluing_uniqueness():
    ok = True
    for weights in ((1, 1, 2), (2, 2, 2)):
        params = WppParams(*weights)
        a, b, c = params.weights()
        sheaf = Rank1Sheaf(1, 0, 1, lam3=Partition((2,)))
        passing = []
        for shifts in product(range(a), range(b), range(c)):
            fams = [
                rank1_sfamily(params, sheaf, chart, fine_shift=shifts[chart - 1])
                for chart in (1, 2, 3)
            ]
            ok_shift, _ = check_gluing(params, *fams)
            if ok_shift:
                passing.append(shifts)
        if passing != [(0, 0, 0)]:
            ok = False
    report(13, ok, "exactly one fine-weight assignment glues on the two stacky examples")
