"""Self-contained SVG emission for the experiment drivers.

Only what the reports need: boxplot panels, polyline curve panels and
trajectory bundles, with plain linear axes.  Each data series carries
an ``id`` attribute so output stays machine-checkable.
"""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

_PANEL_W = 360
_PANEL_H = 300
_MARGIN = 48

_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


class _Panel:
    """One axis-aligned plotting area with data-coordinate mapping."""

    def __init__(self, x0: float, title: str, xlim, ylim, xlabel="", ylabel=""):
        self.ox = x0 + _MARGIN
        self.oy = _MARGIN
        self.w = _PANEL_W - 2 * _MARGIN
        self.h = _PANEL_H - 2 * _MARGIN
        self.xlim = xlim
        self.ylim = ylim
        self.parts: list[str] = []
        self.parts.append(
            f'<text x="{self.ox + self.w / 2:.1f}" y="{self.oy - 16}" '
            f'text-anchor="middle" font-size="13">{escape(title)}</text>'
        )
        self.parts.append(
            f'<rect x="{self.ox}" y="{self.oy}" width="{self.w}" height="{self.h}" '
            'fill="none" stroke="#333" stroke-width="1"/>'
        )
        for frac in (0.0, 0.5, 1.0):
            yv = ylim[0] + frac * (ylim[1] - ylim[0])
            ypix = self._y(yv)
            self.parts.append(
                f'<text x="{self.ox - 6}" y="{ypix + 4:.1f}" text-anchor="end" '
                f'font-size="10">{yv:.2g}</text>'
            )
            xv = xlim[0] + frac * (xlim[1] - xlim[0])
            xpix = self._x(xv)
            self.parts.append(
                f'<text x="{xpix:.1f}" y="{self.oy + self.h + 14}" text-anchor="middle" '
                f'font-size="10">{xv:.3g}</text>'
            )
        if xlabel:
            self.parts.append(
                f'<text x="{self.ox + self.w / 2:.1f}" y="{self.oy + self.h + 30}" '
                f'text-anchor="middle" font-size="11">{escape(xlabel)}</text>'
            )
        if ylabel:
            self.parts.append(
                f'<text x="{self.ox - 34}" y="{self.oy + self.h / 2:.1f}" font-size="11" '
                f'transform="rotate(-90 {self.ox - 34} {self.oy + self.h / 2:.1f})" '
                f'text-anchor="middle">{escape(ylabel)}</text>'
            )

    def _x(self, v: float) -> float:
        lo, hi = self.xlim
        span = hi - lo if hi > lo else 1.0
        return self.ox + (v - lo) / span * self.w

    def _y(self, v: float) -> float:
        lo, hi = self.ylim
        span = hi - lo if hi > lo else 1.0
        return self.oy + self.h - (v - lo) / span * self.h

    def polyline(self, xs, ys, color: str, series_id: str, width=1.5, opacity=1.0):
        pts = " ".join(f"{self._x(x):.2f},{self._y(y):.2f}" for x, y in zip(xs, ys))
        self.parts.append(
            f'<polyline id="{escape(series_id)}" points="{pts}" fill="none" '
            f'stroke="{color}" stroke-width="{width}" stroke-opacity="{opacity}"/>'
        )

    def box(self, x_center: float, stats: dict, color: str, series_id: str, label: str):
        half = 0.3
        x0, x1 = self._x(x_center - half), self._x(x_center + half)
        xc = self._x(x_center)
        yq1, yq3 = self._y(stats["q1"]), self._y(stats["q3"])
        ymed = self._y(stats["median"])
        ylo, yhi = self._y(stats["whisker_lo"]), self._y(stats["whisker_hi"])
        g = [f'<g id="{escape(series_id)}">']
        g.append(f'<line x1="{xc:.1f}" y1="{ylo:.1f}" x2="{xc:.1f}" y2="{yq1:.1f}" '
                 f'stroke="{color}"/>')
        g.append(f'<line x1="{xc:.1f}" y1="{yq3:.1f}" x2="{xc:.1f}" y2="{yhi:.1f}" '
                 f'stroke="{color}"/>')
        g.append(f'<rect x="{x0:.1f}" y="{yq3:.1f}" width="{x1 - x0:.1f}" '
                 f'height="{abs(yq1 - yq3):.1f}" fill="{color}" fill-opacity="0.25" '
                 f'stroke="{color}"/>')
        g.append(f'<line x1="{x0:.1f}" y1="{ymed:.1f}" x2="{x1:.1f}" y2="{ymed:.1f}" '
                 f'stroke="{color}" stroke-width="2"/>')
        g.append(f'<text x="{xc:.1f}" y="{self.oy + self.h + 26}" text-anchor="middle" '
                 f'font-size="9">{escape(label)}</text>')
        g.append("</g>")
        self.parts.append("".join(g))

    def svg(self) -> str:
        return "".join(self.parts)


def _document(panels: list[_Panel], width: int, height: int) -> str:
    body = "".join(p.svg() for p in panels)
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f"{body}\n</svg>\n"
    )


def fdr_boxplot_svg(aggregates: dict, variants, title="") -> str:
    """Two panels of per-variant boxplots: false then true discovery fraction."""
    panels = []
    for i, (key, name) in enumerate((("fdp_box", "FDP"), ("tdp_box", "TDP"))):
        panel = _Panel(i * _PANEL_W, f"{title} {name}".strip(),
                       xlim=(-0.5, len(variants) - 0.5), ylim=(0.0, 1.0), ylabel=name)
        for j, variant in enumerate(variants):
            panel.box(j, aggregates[variant][key], _SERIES_COLORS[j % len(_SERIES_COLORS)],
                      series_id=f"box-{name.lower()}-{variant}", label=variant)
        panels.append(panel)
    return _document(panels, 2 * _PANEL_W, _PANEL_H)


def curves_svg(series: dict, xlabel: str, ylabel: str, title="") -> str:
    """One panel, one identified polyline per named series."""
    xs_all = [x for s in series.values() for x in s[0]]
    ys_all = [y for s in series.values() for y in s[1]]
    xlim = (min(xs_all), max(xs_all))
    ylim = (min(0.0, min(ys_all)), max(1.0, max(ys_all)))
    panel = _Panel(0, title, xlim=xlim, ylim=ylim, xlabel=xlabel, ylabel=ylabel)
    for i, (name, (xs, ys)) in enumerate(series.items()):
        panel.polyline(xs, ys, _SERIES_COLORS[i % len(_SERIES_COLORS)],
                       series_id=f"series-{name}")
    return _document([panel], _PANEL_W, _PANEL_H)


def posthoc_svg(per_variant: dict, true_curve, t_max: int, max_trajectories=25) -> str:
    """A panel per variant: bound trajectories in grey, truth in red."""
    panels = []
    ts = list(range(1, t_max + 1))
    for i, (variant, trajectories) in enumerate(per_variant.items()):
        panel = _Panel(i * _PANEL_W, variant, xlim=(1, t_max), ylim=(0.0, 1.0),
                       xlabel="t", ylabel="bound")
        for j, traj in enumerate(trajectories[:max_trajectories]):
            panel.polyline(ts, traj, "#888888", series_id=f"traj-{variant}-{j}",
                           width=0.8, opacity=0.5)
        panel.polyline(ts, true_curve, "#d62728", series_id=f"truth-{variant}", width=2.0)
        panels.append(panel)
    return _document(panels, len(per_variant) * _PANEL_W, _PANEL_H)


def risk_svg(by_estimator: dict, title="estimation risk") -> str:
    """Risk versus sample size, one series per (estimator, budget) pair."""
    series = {}
    for name, entry in by_estimator.items():
        by_k: dict[int, list] = {}
        for n, k, risk in zip(entry["n"], entry["k"], entry["risk"]):
            by_k.setdefault(k, []).append((n, risk))
        for k, pts in by_k.items():
            pts.sort()
            series[f"{name}-k{k}"] = ([p[0] for p in pts], [p[1] for p in pts])
    return curves_svg(series, xlabel="n", ylabel="mean abs error", title=title)


def write_svg(text: str, path) -> Path:
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path
