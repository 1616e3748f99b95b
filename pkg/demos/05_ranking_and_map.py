"""Rank cohorts by transculturality and draw the HDI-colored cluster map.

The map puts higher-scoring agents toward the upper left, sizes each glyph by
its cluster and colors it by the society's HDI bin.
"""
import sys
from pathlib import Path

from culturality import (
    SimConfig,
    cluster_kmedoids,
    load_hdi,
    load_survey,
    rank_cohorts,
    render_cluster_map,
    run,
    similarity_matrix,
    synthesize_population,
)

table = load_survey()
for i, (society, gender, score) in enumerate(rank_cohorts(table), 1):
    print(f"{i}. {society} {gender}  {score:.4f}")

hdi = load_hdi()
pop = synthesize_population(table, 150, seed=42)
result = run(pop, SimConfig(steps=50, seed=42))
cl = cluster_kmedoids(similarity_matrix(pop, pop.schema.weights), 4, seed=42)
cmap, svg = render_cluster_map(cl, result.final, pop.societies, hdi, seed=42)

out = Path(sys.argv[1] if len(sys.argv) > 1 else "cluster_map.svg")
out.write_text(svg, encoding="utf-8")
print(f"{len(cmap.glyphs)} glyphs, colors {sorted({g.color for g in cmap.glyphs})} -> {out}")
