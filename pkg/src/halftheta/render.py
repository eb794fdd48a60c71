"""SVG output for instances and their graphs, plus matplotlib report figures."""

from __future__ import annotations

from xml.sax.saxutils import escape

# drawing order, bottom to top
LAYER_STYLE = {
    "vis": ("#c8c8c8", 0.8),
    "theta6": ("#1f6fb4", 1.6),
    "g9": ("#2a9d4b", 1.6),
    "g6": ("#d2461e", 2.2),
}
CONSTRAINT_STYLE = ("#000000", 4.5)


def _viewport(points, size, margin):
    if not points:
        return lambda p: (0.0, 0.0)
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) for p in points]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0) or 1.0
    k = (size - 2 * margin) / span

    def to_view(p):
        # flip y so the picture reads like the plane
        return margin + (float(p[0]) - x0) * k, size - margin - (float(p[1]) - y0) * k
    return to_view


def svg_document(inst, layers=None, size: int = 600, margin: int = 30, labels: bool = True) -> str:
    """SVG 1.1 text; ``layers`` maps layer name to a GeoGraph."""
    layers = layers or {}
    unknown = set(layers) - set(LAYER_STYLE)
    if unknown:
        raise ValueError(f"unknown layer(s): {sorted(unknown)}")
    view = _viewport(inst.points, size, margin)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
    ]

    def line(u, v, color, width, cls):
        (x1, y1), (x2, y2) = view(inst.points[u]), view(inst.points[v])
        out.append(f'<line class="{cls}" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   f'stroke="{color}" stroke-width="{width}" stroke-linecap="round"/>')

    for name in LAYER_STYLE:
        if name not in layers:
            continue
        color, width = LAYER_STYLE[name]
        out.append(f'<g id="layer-{name}">')
        for u, v in layers[name].sorted_edges():
            line(u, v, color, width, f"edge {name}")
        out.append("</g>")

    out.append('<g id="constraints">')
    for u, v in sorted(inst.constraints):
        line(u, v, *CONSTRAINT_STYLE, "constraint")
    out.append("</g>")

    out.append('<g id="vertices">')
    for i, p in enumerate(inst.points):
        x, y = view(p)
        out.append(f'<circle class="vertex" cx="{x:.2f}" cy="{y:.2f}" r="3.5" fill="#222222"/>')
        if labels:
            out.append(f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" font-family="sans-serif" '
                       f'font-size="11" fill="#222222">{escape(str(i))}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(inst, layers, path, **kwargs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg_document(inst, layers, **kwargs))


# --- matplotlib figures -------------------------------------------------------

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_instance(inst, layers, path, title: str = "") -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 6))
    pts = [(float(p.x), float(p.y)) for p in inst.points]
    for name in LAYER_STYLE:
        if name not in layers:
            continue
        color, width = LAYER_STYLE[name]
        for k, (u, v) in enumerate(layers[name].sorted_edges()):
            ax.plot([pts[u][0], pts[v][0]], [pts[u][1], pts[v][1]], color=color, lw=width,
                    label=name if k == 0 else None, zorder=1)
    for u, v in sorted(inst.constraints):
        ax.plot([pts[u][0], pts[v][0]], [pts[u][1], pts[v][1]], color="k", lw=3.5, zorder=2)
    if pts:
        ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=14, color="#222222", zorder=3)
        for i, (x, y) in enumerate(pts):
            ax.annotate(str(i), (x, y), xytext=(3, 3), textcoords="offset points", fontsize=7)
    ax.set_aspect("equal")
    if layers:
        ax.legend(loc="best", fontsize=8)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_campaign(records, path) -> None:
    """Observed spanning ratios and degree margins across a campaign."""
    plt = _pyplot()
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    series = [("ratio_theta6_vis", 2.0), ("ratio_g9_vis", 6.0), ("ratio_g6_vis", 6.0)]
    ax = axes[0]
    for name, _ in series:
        vals = [r["ratios"][name] for r in records if name in r.get("ratios", {})]
        ax.hist([v for v in vals if v != "inf"], bins=30, alpha=0.55, label=name)
    for _, bound in series[:2]:
        ax.axvline(bound, color="k", ls="--", lw=0.8)
    ax.set_xlabel("max stretch over Vis edges")
    ax.set_ylabel("instances")
    ax.legend(fontsize=8)

    ax = axes[1]
    for key, bound in (("g9", 9), ("g6", 6)):
        margins = [r["graphs"][key]["min_degree_margin"] for r in records if "graphs" in r]
        ax.hist([bound - m for m in margins], bins=range(0, bound + 2), alpha=0.55,
                label=f"{key} (bound c+{bound})", align="left")
    ax.set_xlabel("max over v of deg(v) - c(v)")
    ax.legend(fontsize=8)

    ax = axes[2]
    ns = [r["n"] for r in records if "seconds" in r]
    ts = [sum(r["seconds"].values()) for r in records if "seconds" in r]
    ax.scatter(ns, ts, s=8)
    ax.set_xlabel("n")
    ax.set_ylabel("seconds (build + verify)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
