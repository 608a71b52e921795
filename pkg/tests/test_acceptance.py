"""Acceptance criteria at their stated sizes and tolerances.

Each test records one ``PASS``/``FAIL`` line; the lines are printed as they
happen and again in the terminal summary.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from wallwave.catalog import GROUP_NAMES, NONSYMMORPHIC, check_compatibility, get_group
from wallwave.verify import REPORT_ONLY, discrepancy_report, random_elements, rng_for, run_suite

SEED = 20240
FIXTURE = Path(__file__).parent / "fixtures" / "nonsymmorphic_report.json"
THEOREM_GROUPS = [g for g in GROUP_NAMES if g not in NONSYMMORPHIC] + ["pg", "pmg2"]
LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    LINES.append(line)
    print(line)


def _component(report, name):
    return report["components"][name]


def test_1_exact_group_algebra():
    t0 = time.perf_counter()
    reports = [run_suite("axioms", g, SEED, n=10_000) for g in GROUP_NAMES]
    elapsed = time.perf_counter() - t0
    names = ("associativity", "inverse", "factorization", "decomposition")
    worst = max(_component(r, c)["max_residual"] for r in reports for c in names)
    fewest = min(_component(r, c)["cases"] for r in reports for c in names)
    ok = worst == 0 and fewest >= 10_000 and elapsed <= 30
    record(1, "exact group algebra, 17 groups", ok,
           f"violations={worst:g}, min cases={fewest}, {elapsed:.1f}s of 30s")
    assert worst == 0
    assert fewest >= 10_000
    assert elapsed <= 30


def test_2_compatibility():
    d3 = [g for g in GROUP_NAMES if not check_compatibility(get_group(g), 3)]
    d2 = sorted(g for g in GROUP_NAMES if not check_compatibility(get_group(g), 2))
    ok = not d3 and d2 == sorted(["pg", "pmg2", "pgg2", "p4mg"])
    record(2, "compatibility for d=3 and d=2", ok, f"d=3 failures={d3}, d=2 failures={d2}")
    assert not d3
    assert d2 == sorted(["pg", "pmg2", "pgg2", "p4mg"])


def test_3_induced_representations():
    worst = {"support_permutation": 0.0, "unitarity": 0.0, "homomorphism": 0.0,
             "left_translation": 0.0, "branch_oracle": 0.0}
    for g in GROUP_NAMES:
        r = run_suite("induced", g, SEED, n=1_000)
        for name in worst:
            if name == "branch_oracle" and g not in THEOREM_GROUPS:
                continue
            c = _component(r, name)
            assert c["cases"] >= 1_000
            worst[name] = max(worst[name], c["max_residual"])
    ok = (worst["support_permutation"] == 0 and worst["unitarity"] <= 1e-12
          and worst["homomorphism"] <= 1e-10 and worst["left_translation"] <= 1e-12
          and worst["branch_oracle"] <= 1e-12)
    record(3, "induced representations", ok, ", ".join(f"{k}={v:.2e}" for k, v in worst.items()))
    assert worst["support_permutation"] == 0
    assert worst["unitarity"] <= 1e-12
    assert worst["homomorphism"] <= 1e-10
    assert worst["left_translation"] <= 1e-12
    assert worst["branch_oracle"] <= 1e-12


def test_4_orbits():
    rt = 0.0
    labels = disjoint = 0
    for g in GROUP_NAMES:
        r = run_suite("orbits", g, SEED, n=10_000)
        assert _component(r, "round_trip")["cases"] >= 10_000
        rt = max(rt, _component(r, "round_trip")["max_residual"])
        labels += _component(r, "round_trip_labels")["max_residual"]
        disjoint += _component(r, "disjointness")["max_residual"]
    ok = rt <= 1e-10 and labels == 0 and disjoint == 0
    record(4, "orbit canonicalization and disjointness", ok,
           f"round trip={rt:.2e}, label misses={labels:g}, overlaps={disjoint:g}")
    assert rt <= 1e-10
    assert labels == 0
    assert disjoint == 0


def test_5_function_space():
    names = ("V_homomorphism", "dilation_translation", "fourier_conjugation")
    worst = dict.fromkeys(names, 0.0)
    for g in GROUP_NAMES:
        r = run_suite("functions", g, SEED, n=1_000)
        for name in names:
            assert _component(r, name)["cases"] >= 1_000
            worst[name] = max(worst[name], _component(r, name)["max_residual"])
    ok = all(v <= 1e-10 for v in worst.values())
    record(5, "V, D3/R commutation, Fourier conjugation", ok,
           ", ".join(f"{k}={v:.2e}" for k, v in worst.items()))
    assert ok


def _kinds(gd, elements):
    out = set()
    for g in elements:
        zero = g.x.a == 0 and g.x.b == 0
        if zero and g.L.is_identity and g.ell != 0:
            out.add("dilation")
        if zero and g.ell == 0 and not g.L.is_identity:
            out.add("rotation")
        if g.L.is_reflection:
            out.add("glide")
    return out


def test_6_main_theorem():
    t0 = time.perf_counter()
    worst = 0.0
    fewest = math.inf
    for g in THEOREM_GROUPS:
        gd = get_group(g)
        # the same draw the suite makes first
        elems = random_elements(gd, rng_for(SEED, "intertwine", gd.name), 20)
        # each kind is required wherever the group has one: p1 has no point
        # rotation at all and the rotation groups have no reflection
        expected = {"dilation"}
        if any(not L.is_identity for L in gd.d0):
            expected.add("rotation")
        if any(L.is_reflection for L in gd.point_group):
            expected.add("glide")
        assert len(elems) >= 20
        assert expected <= _kinds(gd, elems)
        r = run_suite("intertwine", g, SEED)
        c = _component(r, "intertwining")
        fewest = min(fewest, c["cases"])
        worst = max(worst, c["max_residual"])
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and fewest >= 1_000 and elapsed <= 300
    record(6, "intertwining of the fiber map, 15 groups", ok,
           f"residual={worst:.2e}, min cases={fewest}, {elapsed:.1f}s of 300s")
    assert worst <= 1e-9
    assert fewest >= 1_000
    assert elapsed <= 300


def test_7_rho_unitarity():
    worst = 0.0
    for g in GROUP_NAMES:
        c = _component(run_suite("rho", g, SEED, n=10), "norm")
        assert c["cases"] == 10
        worst = max(worst, c["max_residual"])
    record(7, "quadrature norm of the fiber map", worst <= 1e-6, f"max |error|={worst:.2e}")
    assert worst <= 1e-6


def test_8_report_only_groups():
    stored = json.loads(FIXTURE.read_text())
    fresh = discrepancy_report(stored["seed"])
    ok = set(stored["groups"]) == set(REPORT_ONLY) == set(fresh["groups"])
    parts = []
    for g in REPORT_ONLY:
        for key in ("branch_oracle", "intertwining", "fiber_action"):
            assert set(stored["groups"][g][key]) == set(fresh["groups"][g][key])
            v = fresh["groups"][g][key]["max_residual"]
            assert np.isfinite(v) and fresh["groups"][g][key]["cases"] > 0
            parts.append(f"{g}.{key}={v:.2e}")
    record(8, "report-only discrepancy for pgg2/p4mg (not asserted)", ok, ", ".join(parts))
    assert ok
