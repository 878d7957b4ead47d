"""Self-contained SVG bar charts of per-class average precision."""

from __future__ import annotations

import json
from html import escape
from pathlib import Path

from .errors import IoFailure, MalformedFile, MissingSection
from .risk_grid import RiskGridConfig, risk_weight

_BAR = 40.0
_GAP = 10.0
_LEFT = 50.0
_TOP = 40.0
_PLOT_H = 200.0


def _risk_color(weight: float) -> str:
    # weight 1 -> red (high risk), weight 0 -> green
    r = int(round(220 * weight + 60 * (1 - weight)))
    g = int(round(60 * weight + 190 * (1 - weight)))
    return f"#{r:02x}{g:02x}50"


def per_class_svg(report: dict) -> str:
    per_class = report.get("per_class")
    if not per_class:
        raise MissingSection("report has no per_class section")
    task = report.get("task", "?")
    n = len(per_class)
    width = _LEFT + n * (_BAR + _GAP) + _GAP
    height = _TOP + _PLOT_H + 40.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<text x="{_LEFT:.1f}" y="20.0" font-size="14" font-family="sans-serif">'
        f"{escape(str(report.get('model', '')))} / {escape(task)}: per-class AP</text>",
    ]
    if task == "risk":
        grid_cfg = report.get("config_echo", {}).get("grid", {})
        grid = RiskGridConfig(**grid_cfg) if grid_cfg else RiskGridConfig(n_regions=n)
        for i in range(n):
            x = _LEFT + _GAP / 2 + i * (_BAR + _GAP)
            color = _risk_color(risk_weight(i + 1, grid))
            parts.append(
                f'<rect class="risk-bg" x="{x:.1f}" y="{_TOP:.1f}" width="{_BAR + _GAP:.1f}" '
                f'height="{_PLOT_H:.1f}" fill="{color}" fill-opacity="0.25"/>'
            )
    base_y = _TOP + _PLOT_H
    parts.append(
        f'<line x1="{_LEFT:.1f}" y1="{base_y:.1f}" x2="{width - _GAP / 2:.1f}" y2="{base_y:.1f}" stroke="black"/>'
    )
    for tick in (0.0, 0.5, 1.0):
        y = base_y - tick * _PLOT_H
        parts.append(
            f'<text x="{_LEFT - 8:.1f}" y="{y + 4:.1f}" font-size="10" text-anchor="end" '
            f'font-family="sans-serif">{tick:.1f}</text>'
        )
    for i, entry in enumerate(per_class):
        x = _LEFT + _GAP + i * (_BAR + _GAP)
        name = escape(str(entry.get("name", entry.get("class", i))))
        ap = entry.get("AP")
        if ap is not None:
            h = float(ap) * _PLOT_H
            parts.append(
                f'<rect class="bar" x="{x:.1f}" y="{base_y - h:.1f}" width="{_BAR:.1f}" '
                f'height="{h:.1f}" fill="#3b6ea8"><title>{name}: {float(ap):.3f}</title></rect>'
            )
        label = "n/a" if ap is None else f"{float(ap):.2f}"
        parts.append(
            f'<text x="{x + _BAR / 2:.1f}" y="{base_y + 14:.1f}" font-size="10" text-anchor="middle" '
            f'font-family="sans-serif">{name}</text>'
        )
        parts.append(
            f'<text x="{x + _BAR / 2:.1f}" y="{base_y + 28:.1f}" font-size="9" text-anchor="middle" '
            f'font-family="sans-serif">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_reports(report_paths: list[str | Path], out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    written = []
    for path in report_paths:
        try:
            report = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoFailure(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise MalformedFile(f"{path}: {exc}") from exc
        svg = per_class_svg(report)
        target = out_dir / f"{report.get('model', 'model')}_{report.get('task', 'task')}_per_class_ap.svg"
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            target.write_text(svg, encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot write {target}: {exc}") from exc
        written.append(target)
    return written
