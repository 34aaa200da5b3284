"""Matplotlib rendering of verification reports to image files.

Figures are an optional view over the same data the text and JSON
reports carry; nothing here affects verification outcomes.
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = [
    "render_family_figure",
    "render_suite_figure",
]


def render_family_figure(report, directory):
    """Bar chart of required exponent versus observed minimum valuation
    per depth alpha.  Returns the written path."""
    cells = [c for c in report.cells if c.passed is not None]
    if not cells:
        return None
    alphas = [c.alpha for c in cells]
    required = []
    observed = []
    prime = None
    for c in cells:
        # modulus is prime^e; recover e by factoring out the prime
        m, e = c.modulus, 0
        for p in (2, 3, 5, 7, 11, 13):
            if m % p == 0:
                prime = p
                break
        while m % prime == 0:
            m //= prime
            e += 1
        required.append(e)
        observed.append(c.min_valuation if c.min_valuation is not None else e)
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    width = 0.38
    xs = range(len(alphas))
    ax.bar([x - width / 2 for x in xs], required, width, label="required exponent")
    ax.bar([x + width / 2 for x in xs], observed, width, label="observed min valuation")
    ax.set_xticks(list(xs))
    ax.set_xticklabels([str(a) for a in alphas])
    ax.set_xlabel("depth alpha")
    ax.set_ylabel(f"{prime}-adic valuation")
    status = "pass" if report.passed else ("partial" if report.partial else "FAIL")
    ax.set_title(f"{report.family} ({status})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(directory, f"family-{report.family}.png")
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def _ladder_figure(payload, directory):
    rows = payload.get("valuations", [])
    if not rows:
        return None
    alphas = [r["alpha"] for r in rows]
    observed = [r["valuation"] for r in rows]
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.plot(alphas, alphas, "k--", label="required (alpha)")
    ax.plot(alphas, observed, "o-", label="observed min valuation")
    ax.set_xlabel("ladder index alpha")
    ax.set_ylabel("5-adic valuation")
    ax.set_title("ladder valuations")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(directory, "suite-ladder.png")
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def _hrr_figure(payload, directory):
    rows = payload.get("evaluations", [])
    if not rows:
        return None
    ns = [r["n"] for r in rows]
    residuals = [max(r["residual"], 1e-60) for r in rows]
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.semilogy(ns, residuals, ".", label="rounding residual")
    ax.axhline(1e-3, color="red", linestyle="--", linewidth=1, label="1e-3 target")
    ax.set_xlabel("n")
    ax.set_ylabel("|raw - rounded|")
    ax.set_title("Rademacher-series residuals")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(directory, "suite-hrr.png")
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def _valuations_figure(payload, directory):
    cells = []
    for parity_block in payload.get("patterns", []):
        for cell in parity_block.get("cells", []):
            cells.append((parity_block["parity"], cell))
    if not cells:
        return None
    fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.5), sharey=True)
    for parity, ax in zip((0, 1), axes):
        xs = [c["m"] for p, c in cells if p == parity]
        ys = [c["r"] for p, c in cells if p == parity]
        slack = [
            (c["observed"] - c["required"]) if c["observed"] is not None else 0
            for p, c in cells if p == parity
        ]
        sc = ax.scatter(xs, ys, c=slack, cmap="viridis", s=14)
        ax.set_xlabel("m (input power)")
        ax.set_title(f"parity {parity}")
        fig.colorbar(sc, ax=ax, label="valuation slack")
    axes[0].set_ylabel("r (output power)")
    fig.suptitle("U5 power-table 5-adic slack")
    fig.tight_layout()
    path = os.path.join(directory, "suite-valuations.png")
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


_SUITE_RENDERERS = {
    "ladder": _ladder_figure,
    "hrr": _hrr_figure,
    "valuations": _valuations_figure,
}


def render_suite_figure(suite, payload, directory):
    """Render the figure for a suite report when one is meaningful;
    returns the path or None."""
    renderer = _SUITE_RENDERERS.get(suite)
    if renderer is None:
        return None
    return renderer(payload, directory)
