"""Seeded verification suites and the combined report.

Each suite returns a dict ``{suite, group, cases, max_residual, pass,
components}``. A component is one family of checks with its own tolerance;
``asserted`` is false for checks that are only reported (the closed-form
branch phases and the fiber intertwining on pgg2 and p4mg, whose two
offset-carrying reflection classes fall outside the single-glide pattern the
closed forms were written for). ``max_residual`` and ``pass`` cover asserted
components only.
"""

from __future__ import annotations

import math
import zlib
from collections.abc import Callable, Sequence

import numpy as np

from .catalog import (
    FROZEN_OFFSETS,
    FROZEN_THETA1,
    GROUP_NAMES,
    NONSYMMORPHIC,
    GroupData,
    PointElement,
    check_compatibility,
    generate_offsets,
    get_group,
)
from .group_core import (
    WaveletElement,
    decompose,
    factor,
    identity,
    invert,
    is_valid,
    multiply,
    section_gamma,
)
from .induced import (
    FinSuppVector,
    sigma_apply,
    sigma_branch_oracle,
    sigma_phase,
    u_omega_apply,
)
from .orbits import Boundary, CanonicalForm, CrossSection, build_cross_section, canonicalize
from .scalar import LatticeVector, TriadicHalf
from .wavelet_rep import (
    GaussianPacket,
    PacketSum,
    apply_D3,
    apply_R,
    apply_V,
    apply_Vhat,
    apply_Vtilde,
    conjugated_Vhat,
    fourier,
    inverse_fourier,
    norm,
    rho_fiber,
    rho_norm_sq,
    verify_intertwining,
)

__all__ = [
    "SUITES",
    "REPORT_ONLY",
    "discrepancy_report",
    "UnknownSuite",
    "rng_for",
    "random_element",
    "random_elements",
    "random_omega_in_X",
    "random_vector",
    "random_packet",
    "run_suite",
    "run_verify",
]

# groups whose branch-formula checks are reported but not asserted
REPORT_ONLY = ("pgg2", "p4mg")


class UnknownSuite(ValueError):
    pass


def rng_for(seed: int, suite: str, group: str) -> np.random.Generator:
    """Independent, order-free stream per (seed, suite, group)."""
    key = [seed & 0xFFFFFFFF, zlib.crc32(suite.encode()), zlib.crc32(group.encode())]
    return np.random.default_rng(np.random.SeedSequence(key))


# -- random inputs -----------------------------------------------------------

def _rand_q(rng, pow3: int) -> TriadicHalf:
    return TriadicHalf(int(rng.integers(-4 * 3**pow3, 4 * 3**pow3 + 1)), pow3)


def random_element(gd: GroupData, rng, kind: str = "general", max_level: int = 3,
                   max_ell: int = 3) -> WaveletElement:
    """A valid element of ``gd``'s dilated group.

    ``kind`` is ``general``, ``dilation`` (``[0, id]`` with a nonzero level),
    ``rotation`` (a pure point element at level 0, falling back to the group's
    nontrivial non-reflection, or any non-identity element if there is none)
    or ``glide`` (a reflection with translation along its axis).
    """
    pg = gd.point_group
    if kind == "dilation":
        ell = int(rng.choice([e for e in range(-max_ell, max_ell + 1) if e]))
        return WaveletElement(LatticeVector(), gd.identity, ell)
    if kind == "rotation":
        rots = [L for L in pg if not L.is_reflection and not L.is_identity and gd.in_d0(L)]
        if not rots:
            rots = [L for L in gd.d0 if not L.is_identity] or [gd.identity]
        L = rots[int(rng.integers(len(rots)))]
        return WaveletElement(LatticeVector(), L, 0)
    if kind == "glide":
        refls = [L for L in pg if L.is_reflection]
        if not refls:
            return random_element(gd, rng, "general", max_level, max_ell)
        L = refls[int(rng.integers(len(refls)))]
        # a translation fixed by L, so the element is a glide along L's axis
        lam = int(rng.integers(0, max_level + 1))
        k = int(rng.integers(1, 4)) * int(rng.choice([-1, 1]))
        fixed = _axis_vector(L)
        x = (gd.offsets[L] + fixed * k).scale3(-lam)
        return WaveletElement(x, L, int(rng.integers(-max_ell, max_ell + 1)))
    L = pg[int(rng.integers(len(pg)))]
    lam = int(rng.integers(0, max_level + 1))
    n = LatticeVector(_rand_q(rng, 0), _rand_q(rng, 0))
    x = (gd.offsets[L] + n).scale3(-lam)
    return WaveletElement(x, L, int(rng.integers(-max_ell, max_ell + 1)))


def _axis_vector(L: PointElement) -> LatticeVector:
    """A nonzero integer vector fixed by the lattice matrix of a reflection."""
    (a, b), (c, d) = L.mat_lat
    # kernel of (mat - I), which has rank one for a reflection
    r0 = (a - 1, b)
    r1 = (c, d - 1)
    row = r0 if r0 != (0, 0) else r1
    v = (-row[1], row[0])
    g = math.gcd(*v)
    return LatticeVector(v[0] // g, v[1] // g)


def random_elements(gd: GroupData, rng, n: int) -> list[WaveletElement]:
    """``n`` elements, at least one each of the dilation, rotation and glide kinds."""
    kinds = ["dilation", "rotation", "glide"] + ["general"] * max(0, n - 3)
    return [random_element(gd, rng, k) for k in kinds[:n]]


def random_omega_in_X(cs: CrossSection, rng, margin: float = 1e-3) -> np.ndarray:
    r = rng.uniform(cs.r_min, cs.r_max)
    th = rng.uniform(cs.theta1 + margin, cs.theta2 - margin)
    return np.array([r * math.cos(th), r * math.sin(th)])


def random_vector(gd: GroupData, rng, size: int = 3, max_m: int = 3) -> FinSuppVector:
    pg = gd.point_group
    entries = []
    for _ in range(size):
        L = pg[int(rng.integers(len(pg)))]
        m = int(rng.integers(-max_m, max_m + 1))
        entries.append(((L, m), complex(rng.normal(), rng.normal())))
    return FinSuppVector(entries)


def random_packet(rng, terms: int = 1, spread: float = 1.0) -> PacketSum:
    out = []
    for _ in range(terms):
        A = rng.normal(size=(2, 2)) * 0.5
        P = A @ A.T + 0.5 * np.eye(2)
        out.append(GaussianPacket(complex(rng.normal(), rng.normal()),
                                  rng.normal(size=2) * spread, P,
                                  rng.normal(size=2) * spread))
    return PacketSum(out)


def _sample_points(rng, n: int, scale: float = 2.0) -> np.ndarray:
    return rng.normal(size=(n, 2)) * scale


# -- report plumbing ---------------------------------------------------------

class _Report:
    def __init__(self, suite: str, gd: GroupData, tol: float | None):
        self.suite = suite
        self.gd = gd
        self.tol = tol
        self.cases = 0
        self.components: dict[str, dict] = {}

    def add(self, name: str, residual: float, default_tol: float, cases: int,
            asserted: bool = True, exact: bool = False):
        tol = 0.0 if exact else (default_tol if self.tol is None else self.tol)
        c = self.components.setdefault(name, {"max_residual": 0.0, "tol": tol,
                                              "asserted": asserted, "cases": 0})
        c["max_residual"] = max(c["max_residual"], float(residual))
        c["cases"] += cases
        self.cases += cases

    def finish(self) -> dict:
        for c in self.components.values():
            c["pass"] = bool(c["max_residual"] <= c["tol"])
        asserted = [c for c in self.components.values() if c["asserted"]]
        return {
            "suite": self.suite,
            "group": self.gd.name,
            "cases": self.cases,
            "max_residual": max((c["max_residual"] for c in asserted), default=0.0),
            "pass": all(c["pass"] for c in asserted),
            "components": self.components,
        }


# -- suites ------------------------------------------------------------------

def suite_axioms(gd: GroupData, rng, tol=None, n: int = 10_000) -> dict:
    """Associativity, inverses, factorization and unique section decomposition, exactly."""
    rep = _Report("axioms", gd, tol)
    e = identity(gd)
    els = [random_element(gd, rng) for _ in range(3 * n)]
    bad = sum(multiply(multiply(a, b), c) != multiply(a, multiply(b, c))
              for a, b, c in zip(els[0::3], els[1::3], els[2::3]))
    rep.add("associativity", bad, 0, n, exact=True)

    bad = 0
    for g in els[:n]:
        gi = invert(g)
        bad += multiply(g, gi) != e or multiply(gi, g) != e or multiply(g, e) != g \
            or not is_valid(gd, gi)
    rep.add("inverse", bad, 0, n, exact=True)

    bad = 0
    for g in els[:n]:
        d, t = factor(g)
        ok = (multiply(d, t) == g and d.x.is_zero() and d.L.is_identity and t.ell == 0
              and is_valid(gd, t))
        bad += not ok
    rep.add("factorization", bad, 0, n, exact=True)

    bad = 0
    for g in els[:n]:
        (L, ell), nn = decompose(gd, g)
        ok = (multiply(section_gamma(gd, L, ell), nn) == g and nn.ell == 0
              and nn.L.is_identity and not (nn.x.a.half or nn.x.b.half)
              and (L, ell) == (g.L, g.ell))
        bad += not ok
    rep.add("decomposition", bad, 0, n, exact=True)
    return rep.finish()


def suite_catalog(gd: GroupData, rng, tol=None, n: int = 2_000) -> dict:
    """Static catalog data: compatibility, cocycle, frozen tables, orthogonality, sector tiling."""
    rep = _Report("catalog", gd, tol)
    expect2 = gd.name not in NONSYMMORPHIC
    bad = (not check_compatibility(gd, 3)) + (check_compatibility(gd, 2) != expect2)
    rep.add("compatibility", bad, 0, 2, exact=True)

    bad = 0
    for L in gd.point_group:
        for M in gd.point_group:
            lhs = gd.offsets[L * M]
            rhs = (gd.offsets[L].transform(M.inv_lat) + gd.offsets[M]).reduce()
            bad += lhs != rhs
    rep.add("cocycle", bad, 0, len(gd.point_group) ** 2, exact=True)

    regen = generate_offsets(gd.name)
    frozen = FROZEN_OFFSETS.get(gd.name, {})
    bad = 0
    for L in gd.point_group:
        want = LatticeVector(*frozen.get(L.name, (0, 0)))
        bad += regen.get(L.mat_lat) != want
    bad += len(regen) != len(gd.point_group)
    rep.add("offsets_regenerated", bad, 0, len(gd.point_group), exact=True)

    orth = max(float(np.abs(np.array(L.cart) @ np.array(L.cart).T - np.eye(2)).max())
               for L in gd.point_group)
    rep.add("orthogonality", orth, 1e-12, len(gd.point_group))

    # no mirror axis crosses the open sector, and its D-images are disjoint and cover
    theta_err = abs(math.degrees(gd.theta[0]) - FROZEN_THETA1[gd.name])
    cs = build_cross_section(gd)
    bad = 0
    for _ in range(n):
        th = rng.uniform(0, 2 * math.pi)
        w = np.array([math.cos(th), math.sin(th)])
        hits = sum(cs.contains(np.array(L.cart).T @ w * 1.5) for L in gd.point_group)
        if not isinstance(canonicalize(cs, w), Boundary):
            bad += hits != 1
    rep.add("sector_tiling", bad, 0, n, exact=True)
    rep.add("theta_frozen", theta_err, 1e-9, 1)
    return rep.finish()


def _in_X(cs: CrossSection, pts: np.ndarray) -> np.ndarray:
    r = np.hypot(pts[:, 0], pts[:, 1])
    psi = np.mod(np.arctan2(pts[:, 1], pts[:, 0]) - cs.theta1, 2 * math.pi)
    return (r >= cs.r_min) & (r < cs.r_max) & (psi > 0) & (psi < cs.width)


def suite_orbits(gd: GroupData, rng, tol=None, n: int = 10_000) -> dict:
    """Round trip through canonical forms, disjointness and covering of the copies ``3^l L X``."""
    rep = _Report("orbits", gd, tol)
    cs = build_cross_section(gd)
    pg = gd.point_group

    worst = 0.0
    bad = 0
    for _ in range(n):
        wp = random_omega_in_X(cs, rng, margin=1e-6)
        L = pg[int(rng.integers(len(pg)))]
        ell = int(rng.integers(-5, 6))
        cf = canonicalize(cs, (3.0 ** ell) * (np.array(L.cart) @ wp))
        if not isinstance(cf, CanonicalForm) or cf.L != L or cf.ell != ell:
            bad += 1
            continue
        worst = max(worst, float(np.abs(cf.omega_prime - wp).max()))
    rep.add("round_trip", worst, 1e-10, n)
    rep.add("round_trip_labels", bad, 0, n, exact=True)

    pts = np.array([random_omega_in_X(cs, rng, margin=0.0) for _ in range(n)])
    hits = 0
    for L in pg:
        C = np.array(L.cart)
        for ell in range(-3, 4):
            if L.is_identity and ell == 0:
                continue
            hits += int(_in_X(cs, (3.0 ** ell) * pts @ C.T).sum())
    rep.add("disjointness", hits, 0, n, exact=True)

    fixed = sum(int((np.abs(pts @ np.array(M.cart).T - pts).max(axis=1) < 1e-9).sum())
                for M in pg if not M.is_identity)
    rep.add("trivial_stabilizers", fixed, 0, n, exact=True)

    boundary = 0
    back = 0.0
    for _ in range(n):
        w = rng.normal(size=2) * 3.0 ** rng.uniform(-3, 3)
        cf = canonicalize(cs, w)
        if isinstance(cf, CanonicalForm):
            img = (3.0 ** cf.ell) * (np.array(cf.L.cart) @ cf.omega_prime)
            back = max(back, float(np.abs(img - w).max() / np.abs(w).max()))
            boundary += not cs.contains(cf.omega_prime)
        else:
            boundary += 1
    rep.add("covering", boundary, 0, n, exact=True)
    rep.add("reconstruction", back, 1e-12, n)
    return rep.finish()


def suite_induced(gd: GroupData, rng, tol=None, n: int = 1_000) -> dict:
    """Unitarity, homomorphism, agreement with left translation and with the branch phases."""
    rep = _Report("induced", gd, tol)
    report_only = gd.name in REPORT_ONLY
    unit = hom = ind = branch = 0.0
    perm = 0
    for _ in range(n):
        g = random_element(gd, rng)
        h = random_element(gd, rng)
        w = rng.normal(size=2) * 2.0
        f = random_vector(gd, rng)
        sg = sigma_apply(gd, w, g, f)
        # the index map (K, k) -> (L K, k + l) must be a bijection of supports
        perm += set(sg) != {(g.L * K, k + g.ell) for K, k in f}
        unit = max(unit, abs(sg.norm_sq() - f.norm_sq()) / f.norm_sq())
        lhs = sigma_apply(gd, w, g, sigma_apply(gd, w, h, f))
        hom = max(hom, lhs.max_diff(sigma_apply(gd, w, multiply(g, h), f)))
        ind = max(ind, sg.max_diff(u_omega_apply(gd, w, g, f)))
        for K, k in f:
            M, m = g.L * K, k + g.ell
            branch = max(branch, abs(sigma_phase(gd, w, g, M, m)
                                     - sigma_branch_oracle(gd, w, g, M, m)))
    rep.add("support_permutation", perm, 0, n, exact=True)
    rep.add("unitarity", unit, 1e-12, n)
    rep.add("homomorphism", hom, 1e-10, n)
    rep.add("left_translation", ind, 1e-12, n)
    rep.add("branch_oracle", branch, 1e-12, n, asserted=not report_only)
    return rep.finish()


def _intertwine_plan(gd: GroupData, n_elements: int, min_cases: int, js: Sequence[int]) -> int:
    per_omega = n_elements * len(gd.point_group) * len(js)
    return max(1, math.ceil(min_cases / per_omega))


def suite_intertwine(gd: GroupData, rng, tol=None, n_elements: int = 20,
                     min_cases: int = 1_000, js: Sequence[int] = range(-2, 3)) -> dict:
    """Fiberwise residual of the fiber map against the induced representations."""
    rep = _Report("intertwine", gd, tol)
    report_only = gd.name in REPORT_ONLY
    cs = build_cross_section(gd)
    per_elem = _intertwine_plan(gd, n_elements, min_cases, js)
    branches = {"1": 0.0, "2": 0.0, "3": 0.0}
    for g in random_elements(gd, rng, n_elements):
        phi = random_packet(rng, terms=2, spread=0.7)
        omegas = [random_omega_in_X(cs, rng) for _ in range(per_elem)]
        r = verify_intertwining(gd, cs, g, phi, omegas, js)
        rep.add("intertwining", r["max_residual"], 1e-9, r["cases"], asserted=not report_only)
        for b, v in r["per_branch"].items():
            branches[b] = max(branches[b], v)
    out = rep.finish()
    out["per_branch"] = branches
    return out


def suite_functions(gd: GroupData, rng, tol=None, n: int = 1_000) -> dict:
    """Packet-side identities checked pointwise."""
    rep = _Report("functions", gd, tol)
    hom = comm = conj = 0.0
    for _ in range(n):
        g = random_element(gd, rng, max_ell=2)
        h = random_element(gd, rng, max_ell=2)
        p = random_packet(rng)
        y = _sample_points(rng, 8)
        a = apply_V(gd, g, apply_V(gd, h, p))
        b = apply_V(gd, multiply(g, h), p)
        hom = max(hom, float(np.abs(a(y) - b(y)).max()))

        M = gd.point_group[int(rng.integers(len(gd.point_group)))]
        yv = rng.normal(size=2) * 2.0
        a = apply_D3(apply_R(gd, yv, M, p))
        b = apply_R(gd, yv / 3.0, M, apply_D3(p))
        comm = max(comm, float(np.abs(a(y) - b(y)).max()))

        hp = fourier(p)
        a = fourier(apply_V(gd, g, inverse_fourier(hp)))
        b = apply_Vhat(gd, g, hp)
        conj = max(conj, float(np.abs(a(y) - b(y)).max()))
    rep.add("V_homomorphism", hom, 1e-10, n)
    rep.add("dilation_translation", comm, 1e-10, n)
    rep.add("fourier_conjugation", conj, 1e-10, n)
    return rep.finish()


def suite_rho(gd: GroupData, rng, tol=None, n: int = 10, n_fiber: int = 50) -> dict:
    """Norm preservation of the fiber map and the fiberwise action against its branch formula."""
    rep = _Report("rho", gd, tol)
    cs = build_cross_section(gd)
    worst = 0.0
    for _ in range(n):
        phi = random_packet(rng, terms=2, spread=0.7)
        worst = max(worst, abs(math.sqrt(rho_norm_sq(gd, cs, phi)) - norm(phi)))
    rep.add("norm", worst, 1e-6, n)

    worst = 0.0
    cases = 0
    for _ in range(n_fiber):
        g = random_element(gd, rng, max_ell=2)
        phi = random_packet(rng, spread=0.7)
        F = rho_fiber(gd, cs, phi)
        a = apply_Vtilde(gd, cs, g, F)
        b = conjugated_Vhat(gd, cs, g, F)
        w = random_omega_in_X(cs, rng)
        for M in gd.point_group:
            for j in range(-1, 2):
                worst = max(worst, abs(a(w, M, j) - b(w, M, j)))
                cases += 1
    rep.add("fiber_action", worst, 1e-10, cases, asserted=gd.name not in REPORT_ONLY)
    return rep.finish()


SUITES: dict[str, Callable[..., dict]] = {
    "axioms": suite_axioms,
    "catalog": suite_catalog,
    "orbits": suite_orbits,
    "induced": suite_induced,
    "intertwine": suite_intertwine,
    "functions": suite_functions,
    "rho": suite_rho,
}


def run_suite(suite: str, group: str, seed: int = 0, tol: float | None = None, **sizes) -> dict:
    if suite not in SUITES:
        raise UnknownSuite(suite)
    gd = get_group(group)
    return SUITES[suite](gd, rng_for(seed, suite, gd.name), tol, **sizes)


def run_verify(suites: Sequence[str], groups: Sequence[str] | str = "all", seed: int = 0,
               tol: float | None = None, **sizes) -> tuple[list[dict], int]:
    """Run every (suite, group) pair; return the reports and the exit status."""
    for s in suites:
        if s not in SUITES:
            raise UnknownSuite(s)
    names = list(GROUP_NAMES) if groups == "all" else [get_group(g).name for g in groups]
    reports = [run_suite(s, g, seed, tol, **sizes) for s in suites for g in names]
    return reports, 0 if all(r["pass"] for r in reports) else 1


def discrepancy_report(seed: int = 0) -> dict:
    """Residuals of the report-only groups, per suite component; nothing is asserted."""
    out = {"seed": seed, "groups": {}}
    for name in REPORT_ONLY:
        induced = run_suite("induced", name, seed)
        inter = run_suite("intertwine", name, seed)
        rho = run_suite("rho", name, seed)
        out["groups"][name] = {
            "branch_oracle": {k: induced["components"]["branch_oracle"][k] for k in ("max_residual", "cases")},
            "intertwining": {"max_residual": inter["components"]["intertwining"]["max_residual"],
                             "cases": inter["components"]["intertwining"]["cases"],
                             "per_branch": inter["per_branch"]},
            "fiber_action": {k: rho["components"]["fiber_action"][k] for k in ("max_residual", "cases")},
        }
    return out

