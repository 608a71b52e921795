"""SVG pictures of lattices, frequency orbits and the cross-section.

Figures are drawn with matplotlib's SVG backend; each element a test may
look for carries an SVG id (``lattice-point-*``, ``glide-axis-*``,
``orbit-point-*``, ``cross-section``, ``copy-*``).
"""

from __future__ import annotations

import io
import math

import matplotlib

matplotlib.use("svg")

import numpy as np  # noqa: E402
from matplotlib.backends.backend_svg import FigureCanvasSVG  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Wedge  # noqa: E402

from .catalog import GroupData  # noqa: E402
from .orbits import build_cross_section, orbit_points  # noqa: E402

__all__ = ["render", "render_lattice", "render_orbits", "render_cross_section",
           "render_residuals", "KINDS"]

KINDS = ("lattice", "orbits", "cross-section")

_RC = {"svg.hashsalt": "wallwave", "svg.fonttype": "none"}


def _figure(title: str):
    fig = Figure(figsize=(5, 5))
    FigureCanvasSVG(fig)
    ax = fig.add_subplot()
    ax.set_aspect("equal")
    ax.set_title(title)
    return fig, ax


def _to_svg(fig) -> str:
    buf = io.StringIO()
    with matplotlib.rc_context(_RC):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def render_lattice(gd: GroupData, extent: int = 2) -> str:
    """Lattice points, the basis, and glide axes for nonsymmorphic groups."""
    fig, ax = _figure(f"{gd.name} lattice")
    B = gd.basis
    k = 0
    for i in range(-extent, extent + 1):
        for j in range(-extent, extent + 1):
            p = B @ np.array([i, j], dtype=float)
            ax.plot(p[0], p[1], "o", color="0.2", ms=4, gid=f"lattice-point-{k}")
            k += 1
    for col, name in ((0, "u"), (1, "v")):
        ax.arrow(0, 0, B[0, col], B[1, col], width=0.02, length_includes_head=True,
                 color="C0", gid=f"basis-{name}")
    if gd.z is not None:
        _glide_axes(gd, ax, extent)
    lim = (extent + 0.5) * float(np.abs(B).sum(axis=1).max())
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    return _to_svg(fig)


def _glide_axes(gd: GroupData, ax, extent: int) -> None:
    """Dashed axes of the glide reflections through a few lattice translates."""
    half_z = gd.cartesian(gd.z) / 2
    k = 0
    for L in gd.point_group:
        if gd.in_d0(L) or not L.is_reflection:
            continue
        C = np.array(L.cart)
        a = 0.5 * math.atan2(C[1, 0], C[0, 0])
        d = np.array([math.cos(a), math.sin(a)])
        # y -> L(y + t) slides along the axis points p with (L - I) p = -L t_perp
        t = gd.cartesian(gd.offsets[L])
        perp = t - (t @ d) * d
        base = -np.linalg.lstsq(C - np.eye(2), C @ perp, rcond=None)[0]
        for s in range(-extent, extent + 1):
            shift = s * gd.basis[:, 0] if abs(d @ gd.basis[:, 0]) < 0.99 else s * gd.basis[:, 1]
            p = base + shift
            seg = np.array([p - 3 * extent * d, p + 3 * extent * d])
            ax.plot(seg[:, 0], seg[:, 1], "--", color="C3", lw=1, gid=f"glide-axis-{k}")
            mid = p + 0.5 * (half_z @ d) * d
            ax.arrow(mid[0], mid[1], 0.25 * d[0], 0.25 * d[1], width=0.03,
                     length_includes_head=True, color="C3", gid=f"glide-marker-{k}")
            k += 1


def render_orbits(gd: GroupData, omega, ells=range(-1, 2)) -> str:
    """The points ``3^l L omega`` for every point element and level."""
    fig, ax = _figure(f"{gd.name} orbit of ({omega[0]:g}, {omega[1]:g})")
    pts = orbit_points(gd, omega, ells)
    for k, (L, ell, p) in enumerate(pts):
        ax.plot(p[0], p[1], "o", color=f"C{(ell - min(ells)) % 10}", ms=5,
                gid=f"orbit-point-{k}")
    lim = 1.1 * max(float(np.abs(p).max()) for _, _, p in pts)
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    return _to_svg(fig)


def render_cross_section(gd: GroupData, ells=range(-1, 2)) -> str:
    """X itself and its copies ``3^l L X``; X is drawn on top."""
    cs = build_cross_section(gd)
    fig, ax = _figure(f"{gd.name} cross-section")
    t1, t2 = math.degrees(cs.theta1), math.degrees(cs.theta2)
    for ell in ells:
        s = 3.0 ** ell
        for L in gd.point_group:
            if ell == 0 and L.is_identity:
                continue
            C = np.array(L.cart)
            rot = math.degrees(math.atan2(C[1, 0], C[0, 0]))
            if L.is_reflection:
                # a reflection reverses orientation: image sector is [rot - t2, rot - t1]
                a1, a2 = rot - t2, rot - t1
            else:
                a1, a2 = rot + t1, rot + t2
            ax.add_patch(Wedge((0, 0), s * cs.r_max, a1, a2, width=s * (cs.r_max - cs.r_min),
                               fc="C0", alpha=0.15, ec="C0", lw=0.5,
                               gid=f"copy-{L.name}-{ell}"))
    ax.add_patch(Wedge((0, 0), cs.r_max, t1, t2, width=cs.r_max - cs.r_min,
                       fc="C1", alpha=0.7, ec="k", lw=1, gid="cross-section"))
    lim = 1.05 * cs.r_max * 3.0 ** max(ells)
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    return _to_svg(fig)


def render_residuals(reports: list[dict]) -> str:
    """Log-scale bars of every component's maximum residual, one panel per suite."""
    suites = sorted({r["suite"] for r in reports})
    fig = Figure(figsize=(7, 2.2 * len(suites) + 0.5))
    FigureCanvasSVG(fig)
    axes = fig.subplots(len(suites), 1, squeeze=False)[:, 0]
    for ax, suite in zip(axes, suites):
        rows = [r for r in reports if r["suite"] == suite]
        names = sorted({c for r in rows for c in r["components"]})
        width = 0.8 / max(1, len(names))
        for i, name in enumerate(names):
            xs, ys = [], []
            for k, r in enumerate(rows):
                c = r["components"].get(name)
                if c is not None:
                    xs.append(k + i * width)
                    # exact checks count violations; show zeros at the floor
                    ys.append(max(c["max_residual"], 1e-17))
            ax.bar(xs, ys, width, label=name, gid=f"bars-{suite}-{name}")
        ax.set_yscale("log")
        ax.set_xticks([k + 0.4 - width / 2 for k in range(len(rows))],
                      [r["group"] for r in rows], rotation=60, fontsize=7)
        ax.set_title(suite, fontsize=9)
        ax.legend(fontsize=6, loc="upper right")
    fig.tight_layout()
    return _to_svg(fig)


def render(kind: str, gd: GroupData, **params) -> str:
    if kind == "lattice":
        return render_lattice(gd, **params)
    if kind == "orbits":
        return render_orbits(gd, **params)
    if kind == "cross-section":
        return render_cross_section(gd, **params)
    raise ValueError(f"unknown render kind {kind!r}; expected one of {KINDS}")
