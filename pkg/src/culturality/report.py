"""Cohort scoring, ranking and the HDI-colored cluster map.

The transculturality score of an attribute vector is its importance-weighted
mean level. The survey's published aggregate row is shown next to it in
reports, labeled as published, but is never used or recomputed.

The cluster map places one glyph per agent on the canvas anti-diagonal: the
highest scores sit toward the upper-left corner, the lowest toward the
lower-right. Glyph color is the HDI bin of the agent's society and glyph
radius is proportional to the size of the agent's cluster.
"""

from __future__ import annotations

import csv
import io
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import _toml
from .errors import ConfigError, DimensionMismatch, MissingHdi, ZeroWeightSum
from .similarity import Clustering
from .survey import AttributeSchema, SurveyTable, cohort_vector

CANVAS = (800, 800)
# Fraction of the canvas spanned by scores; the rest is margin.
SPAN = 0.8
JITTER = 0.03
MAX_RADIUS = 0.04


def score_transculturality(attributes, schema: AttributeSchema | Sequence[float]) -> float:
    """Weighted mean attribute level, in [0, 1] for attributes in [0, 1].

    ``schema`` may also be a bare weight vector.
    """
    w = schema.weights if isinstance(schema, AttributeSchema) else np.asarray(schema, dtype=float)
    a = np.asarray(attributes, dtype=float)
    if a.shape != w.shape:
        raise DimensionMismatch(f"{a.size} attributes but {w.size} weights")
    total = math.fsum(w.tolist())
    if not total > 0:
        raise ZeroWeightSum("weights sum to zero")
    return math.fsum((w * a).tolist()) / total


def rank_cohorts(table: SurveyTable) -> list[tuple[str, str, float]]:
    """Cohorts by descending score; ties by society id, then gender."""
    rows = [
        (c.society, c.gender, score_transculturality(cohort_vector(table, c.society, c.gender), table.schema))
        for c in table.cohorts
    ]
    return sorted(rows, key=lambda r: (-r[2], r[0], r[1]))


def ranking_csv(table: SurveyTable, path=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "society", "gender", "score", "aggregate_as_published"])
    for i, (society, gender, score) in enumerate(rank_cohorts(table), 1):
        published = table.stored_aggregate.get((society, gender))
        w.writerow([i, society, gender, repr(score), "" if published is None else repr(published)])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


@dataclass(frozen=True)
class HdiConfig:
    """Society HDI values and a color ramp of (lower threshold, color) bins."""

    hdi: Mapping[str, float]
    ramp: tuple[tuple[float, str], ...]
    labels: Mapping[str, str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "ramp", tuple((float(t), str(c)) for t, c in self.ramp))
        for s, v in self.hdi.items():
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"HDI for {s!r} must lie in [0, 1], got {v}")
        if not self.ramp:
            raise ConfigError("color ramp is empty")
        th = [t for t, _ in self.ramp]
        if any(b <= a for a, b in zip(th, th[1:])):
            raise ConfigError("ramp thresholds must be strictly increasing")

    def bin(self, society: str) -> int:
        if society not in self.hdi:
            raise MissingHdi(society)
        v = self.hdi[society]
        idx = 0
        for i, (t, _) in enumerate(self.ramp):
            if v >= t:
                idx = i
        return idx

    def color(self, society: str) -> str:
        return self.ramp[self.bin(society)][1]

    def label(self, society: str) -> str:
        return (self.labels or {}).get(society, society)


def quantile_ramp(hdi: Mapping[str, float], colors: Sequence[str]) -> tuple[tuple[float, str], ...]:
    """One bin per quantile of the HDI values, split at midpoints between them."""
    values = np.sort(np.array(list(hdi.values()), dtype=float))
    cuts = np.quantile(values, np.linspace(0, 1, len(colors) + 1)[1:-1])
    th = [0.0]
    for c in cuts:
        above = values[values > c]
        below = values[values <= c]
        t = (below.max() + above.min()) / 2 if above.size and below.size else c
        th.append(float(t))
    return tuple(zip(th, colors))


def load_hdi(path=None) -> HdiConfig:
    raw = _toml.read(path, "hdi.toml")
    socs = raw.get("societies", {})
    hdi, labels = {}, {}
    for name, spec in socs.items():
        if not isinstance(spec, dict) or "hdi" not in spec:
            raise ConfigError(f"society {name!r} needs an hdi value")
        hdi[name] = float(spec["hdi"])
        labels[name] = str(spec.get("label", name))
    ramp = raw.get("ramp")
    if ramp is None:
        raise ConfigError("HDI config needs a [[ramp]] list")
    return HdiConfig(hdi, tuple((b["threshold"], b["color"]) for b in ramp), labels)


@dataclass(frozen=True)
class Glyph:
    x: float
    y: float
    radius: float
    color: str
    cluster: int
    score: float
    agent: int


@dataclass(frozen=True)
class ClusterMap:
    glyphs: tuple[Glyph, ...]
    width: float
    height: float


def layout(scores, width=CANVAS[0], height=CANVAS[1], seed=0) -> tuple[np.ndarray, np.ndarray]:
    """Anti-diagonal placement: x and y both grow as the normalized score falls.

    Scores are min-max normalized over the agents (all equal maps to 1). The
    seeded jitter moves glyphs along the perpendicular diagonal only, so
    ``x + y`` stays strictly decreasing in score.
    """
    s = np.asarray(scores, dtype=float)
    lo, hi = s.min(), s.max()
    norm = np.ones_like(s) if hi == lo else (s - lo) / (hi - lo)
    rng = np.random.default_rng(seed)
    j = rng.uniform(-JITTER, JITTER, size=s.size)
    pad = (1 - SPAN) / 2
    x = (pad + (1 - norm) * SPAN + j) * width
    y = (pad + (1 - norm) * SPAN - j) * height
    return x, y


def render_cluster_map(
    clustering: Clustering,
    scores,
    societies: Sequence[str],
    hdi: HdiConfig,
    width: float = CANVAS[0],
    height: float = CANVAS[1],
    seed: int = 0,
    title: str = "Culturality clusters",
) -> tuple[ClusterMap, str]:
    """Place agents on the canvas and render the map as an SVG 1.1 document."""
    scores = np.asarray(scores, dtype=float)
    n = len(clustering.assignments)
    if scores.shape != (n,) or len(societies) != n:
        raise DimensionMismatch(f"need {n} scores and societies, got {scores.size} and {len(societies)}")
    colors = [hdi.color(s) for s in societies]
    sizes = clustering.sizes
    r_max = MAX_RADIUS * min(width, height)
    x, y = layout(scores, width, height, seed)
    glyphs = tuple(
        Glyph(
            float(x[i]),
            float(y[i]),
            float(r_max * sizes[clustering.assignments[i]] / sizes.max()),
            colors[i],
            int(clustering.assignments[i]),
            float(scores[i]),
            i,
        )
        for i in range(n)
    )
    cmap = ClusterMap(glyphs, float(width), float(height))
    return cmap, to_svg(cmap, hdi, societies, clustering, title)


def _num(v: float) -> str:
    return f"{v:.2f}"


def to_svg(cmap: ClusterMap, hdi: HdiConfig, societies, clustering: Clustering, title: str) -> str:
    svg = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "version": "1.1",
            "width": _num(cmap.width),
            "height": _num(cmap.height),
            "viewBox": f"0 0 {_num(cmap.width)} {_num(cmap.height)}",
        },
    )
    ET.SubElement(svg, "title").text = title
    ET.SubElement(svg, "rect", {"width": "100%", "height": "100%", "fill": "white"})
    medoids = set(int(m) for m in clustering.medoids)
    layer = ET.SubElement(svg, "g", {"id": "glyphs", "fill-opacity": "0.6"})
    # large glyphs first so small clusters stay visible
    for g in sorted(cmap.glyphs, key=lambda g: (-g.radius, g.agent)):
        c = ET.SubElement(
            layer,
            "circle",
            {
                "cx": _num(g.x),
                "cy": _num(g.y),
                "r": _num(g.radius),
                "fill": g.color,
                "stroke": "black" if g.agent in medoids else "none",
                "class": f"cluster-{g.cluster}",
            },
        )
        ET.SubElement(c, "title").text = (
            f"agent {g.agent} | {hdi.label(societies[g.agent])} | cluster {g.cluster} | score {g.score:.3f}"
        )
    legend = ET.SubElement(svg, "g", {"id": "legend", "font-family": "sans-serif", "font-size": "12"})
    seen = []
    for s in societies:
        if s not in seen:
            seen.append(s)
    for row, s in enumerate(sorted(seen, key=lambda s: (hdi.bin(s), s))):
        y = cmap.height - 20 - 18 * row
        ET.SubElement(legend, "rect", {"x": "12", "y": _num(y - 10), "width": "12", "height": "12", "fill": hdi.color(s)})
        t = ET.SubElement(legend, "text", {"x": "30", "y": _num(y)})
        t.text = f"{hdi.label(s)} (HDI {hdi.hdi[s]:.3f})"
    note = ET.SubElement(svg, "text", {"x": "12", "y": "20", "font-family": "sans-serif", "font-size": "12"})
    note.text = "upper left: higher transculturality"
    ET.indent(svg)
    body = ET.tostring(svg, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"
