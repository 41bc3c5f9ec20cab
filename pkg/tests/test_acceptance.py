"""End-to-end acceptance gate.

One test per shipped guarantee; each prints a single verdict line
(visible with `pytest -s` or on failure) and enforces its runtime
budget.  Randomized criteria use fixed seeds so reruns are identical.
"""

import itertools
import json
import math
import random
import time
from fractions import Fraction

from zqlab.harness import ExperimentConfig, run
from zqlab.measures import (
    SignVector,
    correlation_exact,
    correlation_oracle,
    pattern_counts,
    sign_pattern_count,
    symbol_counts,
)
from zqlab.numtheory import euler_phi, factorize, is_prime, poly_is_squarefree
from zqlab.predictions import (
    DeviationBudget,
    characteristic_pattern_main_term,
    gap_mod_pattern_main_term,
    gap_mod_symbol_main_term,
    gap_threshold_balance_point,
    gap_threshold_pattern_main_term,
    gap_threshold_symbol_main_term,
    predicted_cardinality,
    sign_pattern_main_term,
)
from zqlab.sequences import (
    derive_characteristic,
    derive_gap_mod,
    derive_gap_threshold,
)
from zqlab.subsets import (
    ConstructionSpec,
    ResidueSet,
    construct,
    fermat_quotient_power_residue_set,
    fermat_quotient_primitive_root_set,
    index_range_set,
    power_residue_set,
    quadratic_residue_set,
)


def odd_primes_up_to(n):
    return [p for p in range(3, n + 1, 2) if is_prime(p)]


def finish(name, ok, t0, limit, detail):
    elapsed = time.perf_counter() - t0
    print(f"{'PASS' if ok else 'FAIL'}  {name}  [{elapsed:.2f}s < {limit}s]  {detail}")
    assert ok, f"{name}: {detail}"
    assert elapsed < limit, f"{name} overran its {limit}s budget ({elapsed:.2f}s)"


def test_criterion_01_fermat_quotient_cardinalities():
    t0 = time.perf_counter()
    checked = 0
    ok = True
    for p in odd_primes_up_to(101):
        divisors = factorize(p - 1).divisors()
        for d in divisors:
            r = fermat_quotient_power_residue_set(p, d)
            ok &= r.cardinality == (p - 1) ** 2 // d
            checked += 1
        pr = fermat_quotient_primitive_root_set(p)
        ok &= pr.cardinality == (p - 1) * euler_phi(factorize(p - 1))
        checked += 1
    finish(
        "criterion 1: exact Fermat-quotient cardinalities",
        ok, t0, 10, f"{checked} set sizes checked",
    )


def test_criterion_02_root_count_cardinality_bound():
    t0 = time.perf_counter()
    rng = random.Random(20260814)
    violations = 0
    checked = 0
    for p in odd_primes_up_to(499):
        divisors = factorize(p - 1).divisors()
        for _ in range(50):
            deg = rng.randint(2, 4)
            while True:
                f = tuple(rng.randrange(p) for _ in range(deg)) + (
                    rng.randrange(1, p),
                )
                if poly_is_squarefree(f, p):
                    break
            for d in divisors:
                spec = ConstructionSpec("power_residues", {"p": p, "d": d, "f": f})
                pred = predicted_cardinality(spec)
                dev = abs(Fraction(construct(spec).cardinality) - pred.main)
                if not pred.budget.allows(dev):
                    violations += 1
                checked += 1
    finish(
        "criterion 2: root-count cardinality bound (exact constant)",
        violations == 0, t0, 60, f"{checked} (p, f, d) cases, {violations} violations",
    )


def test_criterion_03_degree_one_exactness():
    t0 = time.perf_counter()
    ok = True
    checked = 0
    for p in odd_primes_up_to(2003):
        for d in factorize(p - 1).divisors():
            ok &= power_residue_set(p, d, (0, 1)).cardinality == (p - 1) // d
            checked += 1
    finish(
        "criterion 3: degree-1 power residue sizes exact",
        ok, t0, 5, f"{checked} (p, d) pairs",
    )


def test_criterion_04_window_counts_conserve_and_meet_lemma_bound():
    t0 = time.perf_counter()
    rng = random.Random(4)
    conservation_ok = True
    bound_ok = True
    for _ in range(100):
        q = rng.randint(8, 64)
        T = rng.randint(1, q - 1)
        r = ResidueSet(q, tuple(sorted(rng.sample(range(q), T))))
        sv = SignVector.from_set(r)
        corr = [correlation_exact(r, k).value for k in range(1, 5)]
        for s in range(1, 5):
            cmax = max(corr[:s])
            allowance = 2 * 2**s * cmax
            total = 0
            for pattern in itertools.product((-1, 1), repeat=s):
                count = sign_pattern_count(sv, pattern)
                total += count
                dev = abs(count - sign_pattern_main_term(pattern, T, q))
                bound_ok &= dev <= allowance
            conservation_ok &= total == q - s + 1
    finish(
        "criterion 4: window-signature conservation + correlation-bounded deviation",
        conservation_ok and bound_ok, t0, 120,
        f"100 random subsets, all signatures s <= 4 "
        f"(conservation {'ok' if conservation_ok else 'BROKEN'}, "
        f"bound {'ok' if bound_ok else 'BROKEN'})",
    )


def test_criterion_05_oracle_equivalence_and_trivial_bound():
    t0 = time.perf_counter()
    rng = random.Random(5)
    ok = True
    for _ in range(200):
        q = rng.randint(4, 32)
        T = rng.randint(1, q - 1)
        r = ResidueSet(q, tuple(sorted(rng.sample(range(q), T))))
        for k in (1, 2, 3):
            fast = correlation_exact(r, k).value
            ok &= fast == correlation_oracle(r, k).value
            ok &= fast <= min(T, q - T)
    finish(
        "criterion 5: exact correlation equals oracle, trivial bound holds",
        ok, t0, 60, "200 random subsets x k in {1,2,3}",
    )


def test_criterion_06_membership_pattern_distribution():
    t0 = time.perf_counter()
    ok = True
    worst = 0.0
    for p in (10007, 100003):
        r = quadratic_residue_set(p)
        T = r.cardinality
        seq = derive_characteristic(r)
        for ell in range(1, 5):
            counts = pattern_counts(seq, ell)
            budget = DeviationBudget(
                "4*2^l*sqrt(p)*log(p)", True, Fraction(4 * 2**ell), p, 1, p
            )
            for pattern in itertools.product((0, 1), repeat=ell):
                dev = abs(
                    counts.get(pattern, 0)
                    - characteristic_pattern_main_term(pattern, T, p)
                )
                ok &= budget.allows(dev)
                worst = max(worst, float(dev) / budget.bound())
    finish(
        "criterion 6: membership pattern counts near main term",
        ok, t0, 30, f"p in {{10007, 100003}}, l <= 4; worst dev/budget = {worst:.3f}",
    )


def test_criterion_07_threshold_gap_balance():
    t0 = time.perf_counter()
    ok = True
    for p in (10007, 100003):
        r = quadratic_residue_set(p)
        counts = symbol_counts(derive_gap_threshold(r, 2))
        dev = abs(counts.get(1, 0) - Fraction(r.cardinality, 2))
        budget = DeviationBudget("4*sqrt(p)*log(p)", True, Fraction(4), p, 1, p)
        ok &= budget.allows(dev)
    finish(
        "criterion 7: threshold gaps balanced at density 1/2",
        ok, t0, 5, "p in {10007, 100003}, m=2",
    )


def test_criterion_08_gap_parity_imbalance():
    t0 = time.perf_counter()
    ok = True
    for p in (10007, 100003):
        r = quadratic_residue_set(p)
        T = r.cardinality
        counts = symbol_counts(derive_gap_mod(r, 2))
        budget = DeviationBudget("6*sqrt(p)*log(p)", True, Fraction(6), p, 1, p)
        ok &= budget.allows(abs(counts.get(1, 0) - Fraction(2, 3) * T))
        ok &= budget.allows(abs(counts.get(2, 0) - Fraction(1, 3) * T))
    finish(
        "criterion 8: gap parities split 2/3 vs 1/3",
        ok, t0, 5, "p in {10007, 100003}, M=2",
    )


def test_criterion_09_tunable_balance_point():
    t0 = time.perf_counter()
    p = 100003
    ok = True
    sizes = []
    for m in (2, 3, 4):
        target = gap_threshold_balance_point(m).size_for(p)
        sizes.append(target)
        r = index_range_set(p, (0, 1), 0, target)
        counts = symbol_counts(derive_gap_threshold(r, m))
        dev = Fraction(abs(counts.get(1, 0) - counts.get(0, 0)))
        budget = DeviationBudget(
            "8*2^m*sqrt(p)*log(p)^2", True, Fraction(8 * 2**m), p, 2, p
        )
        ok &= budget.allows(dev)
    assert sizes == [50002, 29290, 20631]
    finish(
        "criterion 9: tuned window sizes balance the threshold gaps",
        ok, t0, 30, f"p=100003, m in {{2,3,4}}, window sizes {sizes}",
    )


def test_criterion_10_normalization_identities():
    t0 = time.perf_counter()
    ok = True
    for T, q in ((1, 10), (5, 11), (500, 1001)):
        for M in (2, 3, 5):
            ok &= sum(gap_mod_symbol_main_term(u, T, q, M) for u in range(1, M + 1)) == T
            for ell in (1, 2, 3):
                ok &= (
                    sum(
                        gap_mod_pattern_main_term(pat, T, q, M)
                        for pat in itertools.product(range(1, M + 1), repeat=ell)
                    )
                    == T
                )
        for m in (2, 3, 5):
            for ell in (1, 2, 3):
                ok &= (
                    sum(
                        gap_threshold_pattern_main_term(pat, T, q, m)
                        for pat in itertools.product((0, 1), repeat=ell)
                    )
                    == T
                )
        for ell in (1, 2, 3):
            ok &= (
                sum(
                    characteristic_pattern_main_term(pat, T, q)
                    for pat in itertools.product((0, 1), repeat=ell)
                )
                == q
            )
    finish(
        "criterion 10: main-term sums collapse exactly",
        ok, t0, 1, "(T,q) x (M,m) x l grid, exact rationals",
    )


def test_criterion_11_verify_reports_are_deterministic():
    t0 = time.perf_counter()
    config = ExperimentConfig.from_dict(
        {
            "construction": {"kind": "quadratic_residues", "params": {"p": 563}},
            "derivations": [
                {"kind": "gap_mod", "M": 2},
                {"kind": "gap_threshold", "m": 2},
                {"kind": "characteristic"},
            ],
            "analyses": [
                {"kind": "cardinality"},
                {
                    "kind": "balance",
                    "sequence": "gap_mod",
                    "budget": {"constant": 6, "shape": "sqrt_log"},
                },
                {
                    "kind": "patterns",
                    "sequence": "characteristic",
                    "length": 2,
                    "budget": {"constant": 16, "shape": "sqrt_log"},
                },
                {
                    "kind": "sign_patterns",
                    "window": 2,
                    "budget": {"constant": 2, "shape": "lemma"},
                },
                {"kind": "correlation", "k": 2},
                {"kind": "correlation_sampled", "k": 3, "samples": 64},
            ],
            "seed": 2026,
        }
    )

    def scrub(obj):
        if isinstance(obj, dict):
            return {
                k: scrub(v) for k, v in obj.items() if k not in ("seconds", "timing")
            }
        if isinstance(obj, list):
            return [scrub(v) for v in obj]
        return obj

    def report_bytes(workers):
        report = run(config, workers=workers)
        assert report.status == "PASS"
        return json.dumps(scrub(report.body), sort_keys=True, indent=2).encode()

    first = report_bytes(1)
    second = report_bytes(1)
    parallel = report_bytes(8)
    ok = first == second == parallel
    finish(
        "criterion 11: verify reports byte-identical across runs and workers",
        ok, t0, 60, f"{len(first)} report bytes, workers 1/1/8",
    )
