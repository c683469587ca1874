"""Standalone plot scripts.

The emitted scripts use only the Python standard library: they read a
``t,value`` CSV next to them and write an SVG line plot.
"""
from __future__ import annotations

_TEMPLATE = '''"""Render {csv} as {svg}. Run from this directory: python {script}"""
import csv

W, H, PAD = 640, 400, 50

rows = [r for r in open("{csv}") if not r.startswith("#")]
data = [(float(r["t"]), float(r["value"])) for r in csv.DictReader(rows)]
ts = [d[0] for d in data]
vs = [d[1] for d in data]
t0, t1 = min(ts), max(ts)
v0, v1 = min(vs), max(vs)
if v1 == v0:
    v0, v1 = v0 - 0.5, v1 + 0.5
if t1 == t0:
    t1 = t0 + 1.0


def sx(t):
    return PAD + (t - t0) / (t1 - t0) * (W - 2 * PAD)


def sy(v):
    return H - PAD - (v - v0) / (v1 - v0) * (H - 2 * PAD)


pts = " ".join("%.2f,%.2f" % (sx(t), sy(v)) for t, v in data)
svg = [
    '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">' % (W, H),
    '<rect width="100%" height="100%" fill="white"/>',
    '<rect x="%d" y="%d" width="%d" height="%d" fill="none" stroke="black"/>'
    % (PAD, PAD, W - 2 * PAD, H - 2 * PAD),
    '<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="%s"/>' % pts,
    '<text x="%d" y="%d" text-anchor="middle">t / pi</text>' % (W / 2, H - 10),
    '<text x="%d" y="%d" text-anchor="middle">{title}</text>' % (W / 2, 25),
    '<text x="%d" y="%d" font-size="11">%.4g</text>' % (2, PAD + 4, v1),
    '<text x="%d" y="%d" font-size="11">%.4g</text>' % (2, H - PAD + 4, v0),
    '<text x="%d" y="%d" font-size="11" text-anchor="middle">%.4g</text>' % (PAD, H - PAD + 16, t0),
    '<text x="%d" y="%d" font-size="11" text-anchor="middle">%.4g</text>'
    % (W - PAD, H - PAD + 16, t1),
    "</svg>",
]
with open("{svg}", "w") as fh:
    fh.write("\\n".join(svg) + "\\n")
'''


def plot_script(csv_name: str, svg_name: str, title: str) -> str:
    """Source of a script that turns ``csv_name`` into ``svg_name``."""
    script = "plot_" + csv_name.rsplit(".", 1)[0] + ".py"
    return _TEMPLATE.format(csv=csv_name, svg=svg_name, title=title, script=script)
