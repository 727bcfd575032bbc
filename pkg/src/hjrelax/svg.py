"""Dependency-free SVG line plots of PL functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .pl import PLFunction


@dataclass(frozen=True)
class Curve:
    f: PLFunction
    label: str
    color: str = "#000000"
    width: float = 1.5
    dash: str = ""


def _window(curves: Sequence[Curve], pad: Fraction = Fraction(1)) -> tuple[Fraction, Fraction]:
    xs = [x for c in curves for x in c.f.xs]
    return min(xs) - pad, max(xs) + pad


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def render(curves: Sequence[Curve], *, width: int = 640, height: int = 420, title: str = "") -> str:
    """One polyline per curve over a window slightly wider than all breakpoints."""
    lo, hi = _window(curves)
    samples = []
    for c in curves:
        xs = sorted({lo, hi} | {x for x in c.f.xs if lo < x < hi})
        samples.append([(x, c.f(x)) for x in xs])
    ys = [y for s in samples for _, y in s]
    ymin, ymax = min(ys), max(ys)
    if ymin == ymax:
        ymin, ymax = ymin - 1, ymax + 1
    margin = 40

    def sx(x) -> float:
        return margin + float((x - lo) / (hi - lo)) * (width - 2 * margin)

    def sy(y) -> float:
        return height - margin - float((y - ymin) / (ymax - ymin)) * (height - 2 * margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{width // 2}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{title}</text>')
    if lo < 0 < hi:
        out.append(f'<line x1="{_fmt(sx(0))}" y1="{margin}" x2="{_fmt(sx(0))}" y2="{height - margin}" stroke="#cccccc"/>')
    if ymin < 0 < ymax:
        out.append(f'<line x1="{margin}" y1="{_fmt(sy(0))}" x2="{width - margin}" y2="{_fmt(sy(0))}" stroke="#cccccc"/>')
    for c, pts in zip(curves, samples):
        d = " ".join(("M" if i == 0 else "L") + f"{_fmt(sx(x))},{_fmt(sy(y))}" for i, (x, y) in enumerate(pts))
        dash = f' stroke-dasharray="{c.dash}"' if c.dash else ""
        out.append(f'<path d="{d}" fill="none" stroke="{c.color}" stroke-width="{c.width}"{dash}/>')
    for i, c in enumerate(curves):
        y = margin + 16 * i
        out.append(
            f'<line x1="{width - 150}" y1="{y}" x2="{width - 120}" y2="{y}" stroke="{c.color}" '
            f'stroke-width="{c.width}"' + (f' stroke-dasharray="{c.dash}"' if c.dash else "") + "/>"
        )
        out.append(f'<text x="{width - 112}" y="{y + 4}" font-family="sans-serif" font-size="12">{c.label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def relaxation_figure(H: PLFunction, F0: PLFunction, R: PLFunction) -> str:
    """``H`` solid, ``F0`` dashed, the relaxed function highlighted."""
    return render(
        [
            Curve(R, "relaxed F0", color="#d62728", width=4.0),
            Curve(H, "H", color="#000000", width=1.5),
            Curve(F0, "F0", color="#1f77b4", width=1.5, dash="6,4"),
        ],
        title="H, F0 and its relaxation",
    )
