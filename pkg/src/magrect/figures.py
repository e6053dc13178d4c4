"""Figure rendering for the report paths; file output only (Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_nu_curve", "render_scan_margins"]


def render_nu_curve(points, path) -> None:
    """Plot nu(beta) between its quadratic bound and the linear asymptote."""
    betas = [p.beta for p in points]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(betas, [p.nu for p in points], "k-", lw=1.8, label=r"$\nu(\beta)$")
    ax.plot(betas, [p.upper_check for p in points], "b--", lw=1.2,
            label=r"$\pi^2 + c\,\beta^2$")
    ax.plot(betas, [p.asymptote for p in points], "r:", lw=1.2,
            label=r"$|\beta|$")
    ax.set_xlabel(r"$\beta$")
    ax.set_ylabel("lowest eigenvalue")
    ax.legend(loc="upper left")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_scan_margins(records, path) -> None:
    """Plot the margin lambda(a) - lambda(1) against a, one line per field."""
    by_field = {}
    for r in records:
        by_field.setdefault(r.B, []).append(r)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for B, recs in sorted(by_field.items()):
        recs = sorted(recs, key=lambda r: r.a)
        ax.plot([r.a for r in recs], [r.margin for r in recs],
                marker=".", lw=1.2, label=f"B = {B:g}")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("aspect parameter a")
    ax.set_ylabel(r"$\lambda(a) - \lambda(1)$")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
