"""Pictures of the (alpha, s)-slice and of cohomology tables.

This is the only module that leaves exact arithmetic: walls are level sets
``s = k / alpha^2 - 1/6`` sampled on a rational alpha grid and converted to
floats for drawing.  SVG numbers carry 12 significant digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import fmt, frac
from .fano import FanoThreefold
from .stability import in_quiver_region
from .wall_engine import WallSet


@dataclass(frozen=True)
class Bounds:
    alpha_min: Fraction = Fraction(1, 10)
    alpha_max: Fraction = Fraction(2)
    s_max: Fraction = Fraction(2)
    samples: int = 80

    def alphas(self) -> list[Fraction]:
        step = (self.alpha_max - self.alpha_min) / self.samples
        return [self.alpha_min + j * step for j in range(self.samples + 1)]


def default_bounds(X: FanoThreefold) -> Bounds:
    if X.index == 3:
        return Bounds(Fraction(1, 20), Fraction(1), Fraction(3))
    return Bounds()


def level_curve(k: Fraction, bounds: Bounds) -> list[tuple[Fraction, Fraction]]:
    """Points of ``(s + 1/6) alpha^2 = k`` inside the window."""
    pts = []
    for a in bounds.alphas():
        s = k / (a * a) - Fraction(1, 6)
        if 0 <= s <= bounds.s_max:
            pts.append((a, s))
    return pts


def region_outline(X: FanoThreefold, bounds: Bounds, s_steps: int = 120) -> list[tuple[Fraction, Fraction]]:
    """Closed outline of the quiver region, traced column by column on the grid."""
    lows, highs = [], []
    ds = bounds.s_max / s_steps
    for a in bounds.alphas():
        inside = [j * ds for j in range(1, s_steps + 1) if in_quiver_region(X, a * a, j * ds)]
        if inside:
            lows.append((a, inside[0]))
            highs.append((a, inside[-1]))
    return highs + lows[::-1]


def _num(x) -> str:
    return format(float(x), ".12g")


def render_walls_svg(wallset: WallSet, bounds: Bounds | None = None, overlay_region: bool = True,
                     width: int = 480, height: int = 360) -> str:
    X = wallset.X
    b = bounds or default_bounds(X)
    pad = 40
    ax0, ax1 = float(b.alpha_min), float(b.alpha_max)
    sy = float(b.s_max)

    def px(a, s):
        x = pad + (float(a) - ax0) / (ax1 - ax0) * (width - 2 * pad)
        y = height - pad - float(s) / sy * (height - 2 * pad)
        return f"{_num(x)},{_num(y)}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>walls for {X.label}, R={fmt(wallset.R)}, D={fmt(wallset.D)}</title>',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width - pad}" y="{height - pad + 20}" font-size="12">alpha</text>',
        f'<text x="{pad - 30}" y="{pad - 10}" font-size="12">s</text>',
    ]
    if overlay_region and (X.degree, X.index) in ((1, 4), (2, 3)):
        poly = region_outline(X, b)
        if poly:
            pts = " ".join(px(a, s) for a, s in poly)
            out.append(f'<polygon class="quiver-region" points="{pts}" fill="#cfe3f7" stroke="#4a7fb5"/>')
    curves = [(w.k, "wall", "#c0392b") for w in wallset.walls] + [(wallset.k_U, "U-boundary", "#2c3e50")]
    for k, kind, colour in curves:
        pts = level_curve(k, b)
        if len(pts) < 2:
            continue
        dash = ' stroke-dasharray="6,4"' if kind == "U-boundary" else ""
        out.append(f'<polyline class="{kind}" data-k="{fmt(k)}" fill="none" stroke="{colour}"{dash} '
                   f'points="{" ".join(px(a, s) for a, s in pts)}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_walls(wallset: WallSet, path: str, bounds: Bounds | None = None, overlay_region: bool = True):
    """Write the slice picture with matplotlib (format taken from the file suffix)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    X = wallset.X
    b = bounds or default_bounds(X)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if overlay_region and (X.degree, X.index) in ((1, 4), (2, 3)):
        poly = region_outline(X, b)
        if poly:
            ax.fill([float(a) for a, _ in poly], [float(s) for _, s in poly], color="#cfe3f7",
                    label="quiver region")
    for w in wallset.walls:
        pts = level_curve(w.k, b)
        ax.plot([float(a) for a, _ in pts], [float(s) for _, s in pts], color="#c0392b",
                label=f"wall k={fmt(w.k)}")
    pts = level_curve(wallset.k_U, b)
    ax.plot([float(a) for a, _ in pts], [float(s) for _, s in pts], "--", color="#2c3e50",
            label=f"U boundary k={fmt(wallset.k_U)}")
    ax.set_xlim(float(b.alpha_min), float(b.alpha_max))
    ax.set_ylim(0, float(b.s_max))
    ax.set_xlabel("alpha")
    ax.set_ylabel("s")
    ax.set_title(f"{X.label}: R={fmt(wallset.R)}, D={fmt(wallset.D)}")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)


def plot_table(table, path: str, title: str = ""):
    """Cohomology table as an annotated grid."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = table.rows()
    fig, ax = plt.subplots(figsize=(1 + 0.6 * len(table.ts), 1 + 0.5 * len(rows)))
    data = [[table.get(i, t) or 0 for t in table.ts] for i in rows]
    ax.imshow(data, cmap="Blues", aspect="auto")
    for r, i in enumerate(rows):
        for c, t in enumerate(table.ts):
            v = table.get(i, t)
            ax.text(c, r, "*" if v is None else str(v), ha="center", va="center", fontsize=9)
    ax.set_xticks(range(len(table.ts)), [str(t) for t in table.ts])
    ax.set_yticks(range(len(rows)), [f"h^{i}" for i in rows])
    ax.set_xlabel("t")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def parse_bounds(text: str | None, X: FanoThreefold) -> Bounds:
    """``"amin,amax,smax"`` in exact rationals."""
    if not text:
        return default_bounds(X)
    parts = [frac(p) for p in text.split(",")]
    if len(parts) != 3 or not (0 < parts[0] < parts[1]) or parts[2] <= 0:
        raise ValueError("bounds are 'alpha_min,alpha_max,s_max' with 0 < alpha_min < alpha_max and s_max > 0")
    return Bounds(parts[0], parts[1], parts[2])
