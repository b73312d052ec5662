"""Matplotlib renderings of gauge tables, trajectories, collapse certificates,
and density probes. Import is headless-safe (Agg backend)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .equibaire import CollapseCertificate, GaugeEstimate
from .sphere import SpherePoint, chordal_distance


def _save(fig, out_dir: str, name: str) -> str:
    path = os.path.join(out_dir, name)
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
    return path


def render_gauge(g: GaugeEstimate, out_dir: str, name: str = "gauge.png") -> str:
    """Log-log S(x, r) against r with the fitted linear reference C' * r."""
    r = np.asarray(g.radii)
    s = np.asarray(g.s_values)
    fig, ax = plt.subplots(figsize=(5.4, 4.0))
    ax.loglog(r, s, "o-", color="#1f6fb2", label="sampled S(x, r)")
    ax.loglog(r, g.c_prime * r, "--", color="#777777", label=f"C' r,  C' = {g.c_prime:.4g}")
    ax.set_xlabel("radius r (chordal)")
    ax.set_ylabel("gauge S(x, r)")
    ax.set_title("Equicontinuity gauge")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return _save(fig, out_dir, name)


def render_trajectory(
    points: list[SpherePoint],
    labels: np.ndarray,
    limit: SpherePoint | None,
    out_dir: str,
    name: str = "trajectory.png",
    x_label: str = "step n",
) -> str:
    """Two panels: chordal distance to the limit per step (log scale), and the
    finite part of the path in the affine plane."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.6, 4.0))
    if limit is not None:
        dists = [chordal_distance(p, limit) for p in points]
        positive = [max(d, 1e-18) for d in dists]
        ax1.semilogy(labels, positive, ".-", color="#b2451f")
        ax1.set_ylabel("chordal distance to limit")
    else:
        ax1.plot(labels, [0 for _ in points], ".-", color="#b2451f")
        ax1.set_ylabel("(no limit point)")
    ax1.set_xlabel(x_label)
    ax1.grid(True, alpha=0.3)

    finite = [p.to_affine() for p in points if not p.is_infinity]
    if finite:
        xs = [z.real for z in finite]
        ys = [z.imag for z in finite]
        ax2.plot(xs, ys, ".-", color="#1f6fb2", alpha=0.8)
        ax2.plot(xs[0], ys[0], "o", color="#2a9d2a", label="start")
        ax2.plot(xs[-1], ys[-1], "s", color="#b2451f", label="end")
        ax2.legend()
    ax2.set_xlabel("Re z")
    ax2.set_ylabel("Im z")
    ax2.set_title("affine-plane path (finite points)")
    ax2.grid(True, alpha=0.3)
    ax2.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    return _save(fig, out_dir, name)


def render_collapse(c: CollapseCertificate, out_dir: str, name: str = "collapse.png") -> str:
    """Image diameters of the candidate ball over the probed times."""
    fig, ax = plt.subplots(figsize=(5.4, 4.0))
    ax.loglog(c.times, [max(d, 1e-18) for d in c.diameters], "o-", color="#b2451f")
    ax.axhline(c.diameters[-1], color="#777777", linestyle=":", alpha=0.7)
    ax.set_xlabel("flow time t")
    ax.set_ylabel("image diameter of the ball")
    ax.set_title("Collapse of an open ball under the flow")
    ax.grid(True, which="both", alpha=0.3)
    return _save(fig, out_dir, name)


def render_density(density: dict, out_dir: str, name: str = "density.png") -> str:
    """Per-probe density errors of the approximating sequence."""
    errors = density["per_probe"]
    fig, ax = plt.subplots(figsize=(5.4, 4.0))
    ax.bar(range(len(errors)), [max(e, 0.0) for e in errors], color="#1f6fb2")
    ax.axhline(density["max_error"], color="#b2451f", linestyle="--",
               label=f"max = {density['max_error']:.3g}")
    ax.set_xlabel("probe index")
    ax.set_ylabel("sup-chordal distance to nearest member")
    ax.set_title("Density of the approximating sequence")
    ax.legend()
    ax.grid(True, axis="y", alpha=0.3)
    return _save(fig, out_dir, name)
