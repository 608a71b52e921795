"""The wavelet representation on Gaussian packets and its fiber decomposition.

A packet is ``y -> c exp(-pi (y-a)^T P (y-a) + 2 pi i <b, y>)``. Affine
substitutions, dilations and the Fourier transform

    F(g)(omega) = int g(x) exp(-2 pi i <x, omega>) dx

all map packets to packets, so every operator below acts by a closed-form
parameter update and every identity can be checked pointwise.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .catalog import GroupData, PointElement
from .group_core import WaveletElement
from .induced import FinSuppVector, branch_of, sigma_apply, twist_eval
from .orbits import CanonicalForm, CrossSection, canonicalize

__all__ = [
    "OmegaOutsideX",
    "GaussianPacket",
    "PacketSum",
    "standard_packet",
    "packet_eval",
    "inner",
    "norm",
    "apply_R",
    "apply_affine",
    "apply_D3",
    "apply_V",
    "fourier",
    "inverse_fourier",
    "apply_Vhat",
    "FiberFunction",
    "rho_eval",
    "rho_fiber",
    "rho_inverse_eval",
    "apply_Vtilde",
    "conjugated_Vhat",
    "verify_intertwining",
    "j_range",
    "rho_norm_sq",
    "mc_inner",
    "fourier_quadrature",
]

TWO_PI = 2 * math.pi


class OmegaOutsideX(ValueError):
    pass


@dataclass(frozen=True)
class GaussianPacket:
    amp: complex
    center: np.ndarray
    quad: np.ndarray
    freq: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.quad, dtype=float)
        if not np.allclose(P, P.T, rtol=0, atol=1e-12 * max(1.0, np.abs(P).max())):
            raise ValueError("quadratic form must be symmetric")
        if np.linalg.eigvalsh(P).min() <= 0:
            raise ValueError("quadratic form must be positive definite")
        object.__setattr__(self, "amp", complex(self.amp))
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        object.__setattr__(self, "quad", 0.5 * (P + P.T))
        object.__setattr__(self, "freq", np.asarray(self.freq, dtype=float))

    def params(self) -> list[float | complex]:
        """``c, a1, a2, p11, p12, p22, b1, b2`` as used on the command line."""
        P = self.quad
        return [self.amp, *self.center, P[0, 0], P[0, 1], P[1, 1], *self.freq]

    @classmethod
    def from_params(cls, params: Sequence) -> GaussianPacket:
        c, a1, a2, p11, p12, p22, b1, b2 = params
        return cls(complex(c), np.array([a1, a2], float),
                   np.array([[p11, p12], [p12, p22]], float), np.array([b1, b2], float))

    def __call__(self, y) -> np.ndarray | complex:
        y = np.asarray(y, dtype=float)
        d = y - self.center
        q = np.einsum("...i,ij,...j->...", d, self.quad, d)
        return self.amp * np.exp(-math.pi * q + TWO_PI * 1j * (y @ self.freq))


class PacketSum(tuple):
    """A finite linear combination of Gaussian packets."""

    def __new__(cls, packets: Iterable[GaussianPacket] = ()):
        return super().__new__(cls, tuple(packets))

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape[:-1], dtype=complex)
        for p in self:
            out = out + p(y)
        return out if out.shape else complex(out)

    def __add__(self, other: PacketSum) -> PacketSum:
        return PacketSum(tuple(self) + tuple(other))

    def scaled(self, k: complex) -> PacketSum:
        return PacketSum(GaussianPacket(p.amp * k, p.center, p.quad, p.freq) for p in self)


def _as_sum(p) -> PacketSum:
    if isinstance(p, PacketSum):
        return p
    if isinstance(p, GaussianPacket):
        return PacketSum([p])
    return PacketSum(p)


def standard_packet() -> PacketSum:
    return PacketSum([GaussianPacket(1.0, np.zeros(2), np.eye(2), np.zeros(2))])


def packet_eval(p, y) -> complex | np.ndarray:
    return _as_sum(p)(y)


def _pair(p: GaussianPacket, q: GaussianPacket) -> complex:
    # completed square around the joint centre m; every real term is a
    # nonnegative quadratic, so nothing cancels for sharply dilated packets
    A = p.quad + q.quad
    m = np.linalg.solve(A, p.quad @ p.center + q.quad @ q.center)
    d = p.center - q.center
    beta = p.freq - q.freq
    decay = d @ p.quad @ np.linalg.solve(A, q.quad @ d) + beta @ np.linalg.solve(A, beta)
    phase = cmath.exp(TWO_PI * 1j * float(beta @ m))
    return p.amp * q.amp.conjugate() * phase * math.exp(-math.pi * decay) / math.sqrt(np.linalg.det(A))


def inner(p, q) -> complex:
    """``int p(y) conj(q(y)) dy`` in closed form."""
    return complex(sum(_pair(a, b) for a in _as_sum(p) for b in _as_sum(q)))


def norm(p) -> float:
    return math.sqrt(max(inner(p, p).real, 0.0))


# -- operators ---------------------------------------------------------------

def apply_affine(p, x_cart, L_cart) -> PacketSum:
    """``R[x, L] g(y) = g(L^-1 y - x)`` for Cartesian ``x`` and orthogonal ``L``."""
    x = np.asarray(x_cart, dtype=float)
    Lc = np.asarray(L_cart, dtype=float)
    out = []
    for q in _as_sum(p):
        out.append(GaussianPacket(q.amp * cmath.exp(-TWO_PI * 1j * float(q.freq @ x)),
                                  Lc @ (x + q.center), Lc @ q.quad @ Lc.T, Lc @ q.freq))
    return PacketSum(out)


def apply_R(gd: GroupData, x, L: PointElement, p) -> PacketSum:
    """Natural representation of the affine element ``[x, L]`` (lattice ``x``)."""
    x_cart = gd.cartesian(x) if not isinstance(x, np.ndarray) else x
    return apply_affine(p, x_cart, L.cart)


def apply_D3(p, power: int = 1) -> PacketSum:
    """``D_3^k g(y) = 3^k g(3^k y)``."""
    s = 3.0 ** power
    return PacketSum(GaussianPacket(q.amp * s, q.center / s, q.quad * s * s, q.freq * s)
                     for q in _as_sum(p))


def apply_V(gd: GroupData, g: WaveletElement, p) -> PacketSum:
    """``V([x, L], l) = R[x, L] D_3^l``."""
    return apply_R(gd, g.x, g.L, apply_D3(p, g.ell))


def fourier(p) -> PacketSum:
    out = []
    for q in _as_sum(p):
        c = q.amp * cmath.exp(TWO_PI * 1j * float(q.center @ q.freq)) / math.sqrt(np.linalg.det(q.quad))
        out.append(GaussianPacket(c, q.freq.copy(), np.linalg.inv(q.quad), -q.center))
    return PacketSum(out)


def inverse_fourier(p) -> PacketSum:
    out = []
    for q in fourier(p):
        out.append(GaussianPacket(q.amp, -q.center, q.quad, -q.freq))
    return PacketSum(out)


def apply_Vhat(gd: GroupData, g: WaveletElement, h) -> PacketSum:
    """``3^-l exp(-2 pi i <x, L^-1 w>) h(3^-l L^-1 w)`` on frequency-side packets."""
    s = 3.0 ** g.ell
    Lc = np.array(g.L.cart)
    Lx = Lc @ gd.cartesian(g.x)
    return PacketSum(GaussianPacket(q.amp / s, s * (Lc @ q.center), (Lc @ q.quad @ Lc.T) / (s * s),
                                    (Lc @ q.freq) / s - Lx)
                     for q in _as_sum(h))


# -- the fiber picture -------------------------------------------------------

class FiberFunction:
    """A function ``(omega, M, j) -> complex`` on ``X x D x Z``."""

    def __init__(self, gd: GroupData, cs: CrossSection,
                 entry: Callable[[np.ndarray, PointElement, int], complex]):
        self.gd = gd
        self.cs = cs
        self._entry = entry

    def __call__(self, omega, M: PointElement, j: int) -> complex:
        return complex(self._entry(np.asarray(omega, dtype=float), M, j))

    def fiber(self, omega, js: Iterable[int]) -> FinSuppVector:
        """The fiber at ``omega`` restricted to ``D x js``."""
        w = np.asarray(omega, dtype=float)
        return FinSuppVector(((M, j), self(w, M, j)) for j in js for M in self.gd.point_group)


def _check_in_X(cs: CrossSection, omega) -> None:
    if not cs.contains(omega):
        raise OmegaOutsideX(f"{list(omega)} is not in the cross-section of {cs.group.name}")


def rho_eval(gd: GroupData, cs: CrossSection, phi, omega, M: PointElement, j: int) -> complex:
    """``3^j c(omega, M) phi(3^j M omega)``."""
    _check_in_X(cs, omega)
    w = np.asarray(omega, dtype=float)
    pt = (3.0 ** j) * (np.array(M.cart) @ w)
    return (3.0 ** j) * twist_eval(gd, w, M) * complex(_as_sum(phi)(pt))


def rho_fiber(gd: GroupData, cs: CrossSection, phi) -> FiberFunction:
    phi = _as_sum(phi)
    return FiberFunction(gd, cs, lambda w, M, j: rho_eval(gd, cs, phi, w, M, j))


def rho_inverse_eval(gd: GroupData, cs: CrossSection, F: FiberFunction, xi) -> complex:
    """Invert the fiber map at ``xi``: the one surviving summand, or 0 off X's orbits."""
    cf = canonicalize(cs, xi)
    if not isinstance(cf, CanonicalForm):
        return 0j
    w = cf.omega_prime
    return (3.0 ** (-cf.ell)) * twist_eval(gd, w, cf.L).conjugate() * F(w, cf.L, cf.ell)


def _vtilde_phase(gd: GroupData, g: WaveletElement, w: np.ndarray, M: PointElement, j: int) -> complex:
    p = gd.dual(w)
    src = gd.dual_act(g.L.inverse * M, p)
    phase = cmath.exp(-TWO_PI * 1j * gd.turns(g.x.scale3(j), src))
    b = branch_of(gd, g.L, M)
    if b > 1:
        zw = gd.turns(gd.z, p, period=2)
        phase *= cmath.exp((-1j if b == 2 else 1j) * math.pi * zw)
    return phase


def apply_Vtilde(gd: GroupData, cs: CrossSection, g: WaveletElement, F: FiberFunction) -> FiberFunction:
    """Branch formula: the entry at ``(omega, M, j)`` pulls from ``(omega, L^-1 M, j - l)``."""
    Linv = g.L.inverse

    def entry(w, M, j):
        return _vtilde_phase(gd, g, w, M, j) * F(w, Linv * M, j - g.ell)

    return FiberFunction(gd, cs, entry)


def conjugated_Vhat(gd: GroupData, cs: CrossSection, g: WaveletElement, F: FiberFunction) -> FiberFunction:
    """``rho Vhat(g) rho^-1`` evaluated pointwise through the frequency plane."""
    s = 3.0 ** g.ell
    Lc = np.array(g.L.cart)
    x_cart = gd.cartesian(g.x)

    def vhat_of_rhoinv(xi):
        pre = Lc.T @ xi
        return (cmath.exp(-TWO_PI * 1j * float(x_cart @ pre)) / s
                * rho_inverse_eval(gd, cs, F, pre / s))

    def entry(w, M, j):
        xi = (3.0 ** j) * (np.array(M.cart) @ w)
        return (3.0 ** j) * twist_eval(gd, w, M) * vhat_of_rhoinv(xi)

    return FiberFunction(gd, cs, entry)


def verify_intertwining(gd: GroupData, cs: CrossSection, g: WaveletElement, phi,
                        omegas: Iterable, js: Sequence[int] = range(-2, 3)) -> dict:
    """Residual of ``rho(Vhat(g) phi)`` against ``sigma_omega(g)`` on the fibers of ``rho phi``.

    For each ``omega`` the fiber of ``rho phi`` is built on ``D x`` a window
    wide enough to contain every source index, so ``sigma_apply`` sees the
    exact entries it needs and no truncation enters.
    """
    phi = _as_sum(phi)
    left_phi = apply_Vhat(gd, g, phi)
    lo, hi = min(js) - abs(g.ell), max(js) + abs(g.ell)
    window = range(lo, hi + 1)
    per_branch = {1: 0.0, 2: 0.0, 3: 0.0}
    cases = 0
    for w in omegas:
        w = np.asarray(w, dtype=float)
        fib = FinSuppVector(((M, j), rho_eval(gd, cs, phi, w, M, j))
                            for j in window for M in gd.point_group)
        right = sigma_apply(gd, w, g, fib)
        for j in js:
            for M in gd.point_group:
                lhs = rho_eval(gd, cs, left_phi, w, M, j)
                res = abs(lhs - right.get((M, j)))
                b = branch_of(gd, g.L, M)
                per_branch[b] = max(per_branch[b], res)
                cases += 1
    return {"group": gd.name, "cases": cases, "max_residual": max(per_branch.values()),
            "per_branch": {str(k): v for k, v in per_branch.items()}}


# -- quadrature --------------------------------------------------------------

def _decay_radius(phi: PacketSum, rel: float = 1e-12) -> float:
    R = 0.0
    for q in phi:
        lam = float(np.linalg.eigvalsh(q.quad).min())
        # |q| falls below rel * |amp| outside this radius
        R = max(R, float(np.linalg.norm(q.center)) + math.sqrt(math.log(1.0 / rel) / (math.pi * lam)))
    return R


def j_range(phi, cs: CrossSection, tol: float = 1e-14) -> range:
    """Dilation levels whose annuli carry more than ``tol`` of ``|phi|^2``."""
    phi = _as_sum(phi)
    R = _decay_radius(phi)
    j_hi = max(0, math.ceil(math.log(R / cs.r_min, 3)))
    sup2 = sum(abs(q.amp) for q in phi) ** 2
    # everything below level j sits in the disc of radius 3^j * r_max
    j_lo = 0
    while math.pi * (3.0 ** j_lo * cs.r_max) ** 2 * sup2 > tol:
        j_lo -= 1
    return range(j_lo, j_hi + 1)


def _polar_grid(cs: CrossSection, n_r: int, n_theta: int):
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * (cs.r_max - cs.r_min) * xr + 0.5 * (cs.r_max + cs.r_min)
    wr = 0.5 * (cs.r_max - cs.r_min) * wr
    dth = cs.width / n_theta
    th = cs.theta1 + dth * (np.arange(n_theta) + 0.5)
    R, TH = np.meshgrid(r, th, indexing="ij")
    pts = np.stack([R * np.cos(TH), R * np.sin(TH)], axis=-1).reshape(-1, 2)
    wts = (wr[:, None] * r[:, None] * dth * np.ones(n_theta)[None, :]).reshape(-1)
    return pts, wts


def rho_norm_sq(gd: GroupData, cs: CrossSection, phi, n_r: int = 64, n_theta: int = 64,
                js: Iterable[int] | None = None) -> float:
    """``sum_{M, j} int_X |rho phi(omega, M, j)|^2 d omega`` by product quadrature.

    Gauss-Legendre in the radius, midpoint in the angle. Summing over the
    whole point group before integrating makes the angular integrand smooth
    and periodic (or even at mirror edges), where the midpoint rule converges
    spectrally.
    """
    phi = _as_sum(phi)
    pts, wts = _polar_grid(cs, n_r, n_theta)
    if js is None:
        js = j_range(phi, cs)
    total = 0.0
    for M in gd.point_group:
        rot = pts @ np.array(M.cart).T
        for j in js:
            s = 3.0 ** j
            # |c| = 1, so the twist drops out of the modulus
            vals = phi(s * rot)
            total += float((s * s) * np.sum(wts * np.abs(vals) ** 2))
    return total


def mc_inner(p, q, n: int = 10**6, seed: int = 0) -> tuple[complex, float]:
    """Monte-Carlo estimate of ``<p, q>`` and its standard error.

    Samples from a Gaussian proposal that covers every packet of ``p`` and ``q``.
    """
    p, q = _as_sum(p), _as_sum(q)
    allp = list(p) + list(q)
    mean = np.mean([a.center for a in allp], axis=0)
    spread = max(float(np.linalg.norm(a.center - mean)) for a in allp)
    lam = min(float(np.linalg.eigvalsh(a.quad).min()) for a in allp)
    sd = math.sqrt(1.0 / (2 * math.pi * lam)) + spread
    rng = np.random.default_rng(seed)
    y = mean + sd * rng.standard_normal((n, 2))
    dens = np.exp(-0.5 * np.sum(((y - mean) / sd) ** 2, axis=1)) / (2 * math.pi * sd * sd)
    vals = p(y) * np.conj(q(y)) / dens
    return complex(vals.mean()), float(np.abs(vals).std() / math.sqrt(n))


def fourier_quadrature(p, omega, half_width: float = 8.0, n: int = 257) -> complex:
    """Direct trapezoid quadrature of the Fourier integral at one frequency."""
    p = _as_sum(p)
    lo = [float(q.center[i]) for q in p for i in range(2)]
    c = np.mean(np.reshape(lo, (-1, 2)), axis=0)
    t = np.linspace(-half_width, half_width, n)
    h = t[1] - t[0]
    X, Y = np.meshgrid(t + c[0], t + c[1], indexing="ij")
    pts = np.stack([X, Y], axis=-1)
    w = np.asarray(omega, dtype=float)
    vals = p(pts) * np.exp(-TWO_PI * 1j * (pts @ w))
    return complex(vals.sum() * h * h)
