"""Acceptance criteria, one printed PASS/FAIL line each.

Timing limits use the best of three runs after a warm-up call.
"""

import random
import time
from fractions import Fraction
from math import factorial

import pytest

from conftest import golden_b4
from hermite_gregory.catalog import h1_mask
from hermite_gregory.cli import bundled_scheme, run_command
from hermite_gregory.combinatorics import gregory, stirling_second
from hermite_gregory.factorize import factorize_gregory, gregory_chain
from hermite_gregory.masks import (
    HermiteSequence,
    MatrixMask,
    apply_subdivision,
    contractivity_certificate,
    iterate_mask,
    operator_norm,
)
from hermite_gregory.polyalg import (
    Polynomial,
    forward_difference,
    iterated_difference_closed_form,
    pq_sequence,
)
from hermite_gregory.spectral import check_reproduction, solve_spectral, subdivide_at
from hermite_gregory.stencil import apply_stencil, eigenspace, gregory_operator
from test_masks import brute_force_norm

F = Fraction
THETA = F(1, 32)
RESULTS: list[str] = []


def timed(fn, repeat=3):
    fn()
    best, value = None, None
    for _ in range(repeat):
        start = time.perf_counter()
        value = fn()
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return value, best


def report(number, ok, detail, elapsed, limit):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"criterion {number}: {status} | {detail} | {elapsed * 1e3:.2f} ms (limit {limit * 1e3:g} ms)"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert within, line


def test_criterion_1_gregory_table():
    expected = [F(x) for x in ("1", "1/2", "-1/12", "1/24", "-19/720", "3/160", "-863/60480")]
    values, elapsed = timed(lambda: [gregory(n) for n in range(7)])
    report(1, values == expected, f"G_0..G_6 = {', '.join(map(str, values))}", elapsed, 1e-3)


def test_criterion_2_stirling_gregory_identity():
    def check():
        return [
            n
            for n in range(31)
            if sum(stirling_second(n, j) * factorial(j) * gregory(j) for j in range(n + 1)) != F(1, n + 1)
        ]

    bad, elapsed = timed(check)
    report(2, not bad, f"identity exact for n=0..30, violations {bad}", elapsed, 1e-2)


def test_criterion_3_spectral_solver():
    def check():
        out = []
        for theta, omega in ((F(1, 16), F(-1, 10)), (THETA, F(0))):
            res = solve_spectral(h1_mask(theta, omega), 3)
            out.append(res.ok and all(res.polynomials[k] == Polynomial.monomial(k, F(1, factorial(k))) for k in range(4)))
        quartic = solve_spectral(h1_mask(THETA, F(-1, 10)), 4)
        out.append(quartic.ok and quartic.polynomials[4] == Polynomial([F(1, 360), 0, 0, 0, F(1, 24)]))
        fail = solve_spectral(h1_mask(F(1, 16), F(-1, 10)), 4)
        out.append(fail.failure_order == 4 and fail.witness is not None)
        return out, fail.witness

    (checks, witness), elapsed = timed(check)
    report(3, all(checks), f"checks {checks}, theta=1/16 witness {witness.label} residual {witness.residual}", elapsed, 1.0)


def test_criterion_4_golden_factorization():
    def check():
        out = []
        for omega in (F(0), F(-1, 10), F(-3, 25)):
            mask = factorize_gregory(h1_mask(THETA, omega), 4).mask
            out.append(all(mask[j] == golden_b4(omega)[j] for j in range(-4, 3)) and mask == golden_b4(omega))
            lo, hi = mask.support
            out.append(-4 <= lo and hi == 2 and (omega == 0 or lo == -4))
        return out

    checks, elapsed = timed(check)
    report(4, all(checks), f"seven matrices and support [-4,2] at omega in 0, -1/10, -3/25: {checks}", elapsed, 1.0)


CONTRACTIVITY_POINTS = [(F(-51, 500), 6), (F(-24, 250), 6), (F(-3, 25), 10), (F(-11, 125), 10)]


def test_criterion_5_contractivity():
    def check():
        out = []
        for omega, power in CONTRACTIVITY_POINTS:
            half = factorize_gregory(h1_mask(THETA, omega), 4).contraction_mask(F(1, 2))
            norm = operator_norm(iterate_mask(half, power))
            out.append((omega, power, norm, norm < 1))
        return out

    rows, elapsed = timed(check, repeat=1)
    detail = "; ".join(f"omega={w} N={n} norm={float(v):.6f} {'<1' if ok else '>=1'}" for w, n, v, ok in rows)
    report(5, all(ok for *_, ok in rows), detail, elapsed, 60.0)


def test_criterion_6_non_equivalence():
    def check():
        mask = h1_mask(THETA, F(-1, 10))
        return solve_spectral(mask, 4).ok, check_reproduction(mask, 4)

    (spectral_ok, reproduces), elapsed = timed(check)
    report(6, spectral_ok and not reproduces, f"spectral order 4 {spectral_ok}, reproduces degree 4 {reproduces}", elapsed, 1.0)


def test_criterion_7_chain_equals_gregory():
    def check():
        mask = h1_mask(THETA, F(-1, 10))
        chain = gregory_chain(mask, 4)
        out = []
        for n in range(1, 5):
            same = chain[n] == factorize_gregory(mask, n).mask_taylor_normalized
            basis = eigenspace(chain[n])
            out.append((n, same, basis, basis == [(1, gregory(n))]))
        return out

    rows, elapsed = timed(check)
    detail = "; ".join(
        f"n={n} equal={same} fixed vectors={[tuple(map(str, v)) for v in basis]}" for n, same, basis, _ in rows
    )
    report(7, all(same and eig for _, same, _, eig in rows), detail, elapsed, 5.0)


def random_fraction(rng, bound=3, den=4):
    return F(rng.randint(-bound * den, bound * den), rng.randint(1, den))


def random_mask(rng):
    m = rng.choice((2, 3, 4))
    mats = tuple(
        tuple(tuple(random_fraction(rng) for _ in range(2)) for _ in range(2)) for _ in range(rng.randint(1, 6))
    )
    return MatrixMask(rng.randint(-3, 3), mats, m)


def random_data(rng, length=8):
    return HermiteSequence(
        rng.randint(-4, 4), tuple((random_fraction(rng), random_fraction(rng)) for _ in range(rng.randint(1, length)))
    )


def test_criterion_8a_norm_oracle():
    rng = random.Random(8001)
    masks = [random_mask(rng) for _ in range(200)]
    bad, elapsed = timed(lambda: [m for m in masks if operator_norm(m) != brute_force_norm(m)], repeat=1)
    report("8a", not bad, f"closed-form norm equals sign-pattern sup on 200 masks, mismatches {len(bad)}", elapsed, 30.0)


def test_criterion_8b_iterated_difference():
    rng = random.Random(8002)
    cases = []
    for _ in range(200):
        p = Polynomial([random_fraction(rng, 20, 12) for _ in range(rng.randint(0, 11))])
        cases.append((p, rng.randint(1, 12)))
    bad, elapsed = timed(
        lambda: [c for c in cases if iterated_difference_closed_form(*c) != forward_difference(*c)], repeat=1
    )
    report("8b", not bad, f"Stirling closed form equals iterated differences on 200 polynomials, mismatches {len(bad)}", elapsed, 30.0)


def test_criterion_8c_intertwining():
    rng = random.Random(8003)
    mask = h1_mask(THETA, F(-1, 10))
    data = [random_data(rng) for _ in range(100)]

    def check():
        bad = 0
        for n in range(1, 4):
            b = factorize_gregory(mask, n).mask
            g = gregory_operator(n)
            for c in data:
                lhs = apply_stencil(g, apply_subdivision(mask, c))
                rhs = apply_subdivision(b, apply_stencil(g, c)).scaled(F(1, 2**n))
                bad += lhs != rhs
        return bad

    bad, elapsed = timed(check, repeat=1)
    report("8c", bad == 0, f"G S_A = 2^-n S_B G on 100 sequences for n=1..3, mismatches {bad}", elapsed, 30.0)


def test_criterion_8d_eigen_relation():
    def check():
        mask = h1_mask(THETA, F(-1, 10))
        polys = solve_spectral(mask, 4).polynomials
        chain = gregory_chain(mask, 3)
        results = []
        for n in range(1, 4):
            for k in range(0, 4 - n):
                p, q = pq_sequence(polys, n, k)
                f = lambda i, p=p, q=q: (p(i), q(i))
                s = F(1, 2**k)
                results.append(all(subdivide_at(chain[n], f, j) == (s * p(j), s * q(j)) for j in range(-12, 13)))
        return results

    results, elapsed = timed(check, repeat=1)
    report("8d", all(results), f"eigen-relation for {len(results)} valid (n,k) pairs: {results}", elapsed, 30.0)


def test_criterion_9_refine_reproduction(tmp_path):
    scheme = str(bundled_scheme("h1.scheme"))
    params = ["--param", "theta=1/32", "--param", "omega=-1/10"]

    def check():
        out = []
        for degree in range(4):
            f = Polynomial.monomial(degree)
            df = Polynomial([c * i for i, c in enumerate(f.coeffs)][1:])
            data = tmp_path / f"d{degree}.csv"
            data.write_text("j,f,df\n" + "".join(f"{j},{f(j)},{df(j)}\n" for j in range(-8, 9)))
            for levels in range(1, 4):
                target = tmp_path / f"o{degree}_{levels}.csv"
                status, _ = run_command(
                    ["refine", scheme, *params, "--levels", str(levels), "--data", str(data), "--out", str(target), "--exact"]
                )
                rows = [tuple(F(v) for v in line.split(",")) for line in target.read_text().splitlines()[1:]]
                out.append(status == 0 and bool(rows) and all((y, dy) == (f(x), df(x)) for x, y, dy in rows))
        return out

    results, elapsed = timed(check, repeat=1)
    report(9, all(results), f"refine reproduces degrees 0..3 exactly at levels 1..3 ({sum(results)}/{len(results)})", elapsed, 30.0)
