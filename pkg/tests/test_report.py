import csv
import xml.etree.ElementTree as ET
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOLDEN
from culturality.errors import ConfigError, MissingHdi, ZeroWeightSum
from culturality.report import (
    HdiConfig,
    layout,
    load_hdi,
    quantile_ramp,
    rank_cohorts,
    ranking_csv,
    render_cluster_map,
    score_transculturality,
)
from culturality.sim import synthesize_population
from culturality.similarity import Clustering, cluster_kmedoids, similarity_matrix
from culturality.survey import CohortObservation, SurveyTable, cohort_vector

SVG_NS = "{http://www.w3.org/2000/svg}"


def column_score_oracle(column):
    """Mean of raw CSV percentages for one column, straight from the file."""
    path = resources.files("culturality") / "data" / "table1.csv"
    rows = list(csv.reader(path.read_text(encoding="utf-8").splitlines()))[3:-1]
    return sum(float(r[column].rstrip("%")) for r in rows) / (100 * len(rows))


def test_score_extremes(schema):
    assert score_transculturality(np.zeros(28), schema) == 0.0
    assert score_transculturality(np.ones(28), schema) == 1.0


def test_score_sample1_female(table):
    v = cohort_vector(table, "Sample 1", "F")
    # sum of the 28 S1-F percentages is 1387, so 1387 / 2800
    assert score_transculturality(v, table.schema) == pytest.approx(1387 / 2800, abs=1e-15)
    assert round(score_transculturality(v, table.schema), 3) == 0.495


def test_score_zero_weights():
    with pytest.raises(ZeroWeightSum):
        score_transculturality([0.5, 0.5], [0.0, 0.0])


@settings(max_examples=200)
@given(
    st.lists(st.floats(0, 0.99), min_size=5, max_size=5),
    st.lists(st.floats(0.01, 5), min_size=5, max_size=5),
    st.integers(0, 4),
    st.floats(1e-6, 0.01),
    st.floats(0.01, 100),
)
def test_score_monotone_and_scale_free(a, w, i, bump, c):
    a = np.array(a)
    w = np.array(w)
    b = a.copy()
    b[i] += bump
    assert score_transculturality(b, w) > score_transculturality(a, w)
    assert score_transculturality(a, c * w) == pytest.approx(score_transculturality(a, w), abs=1e-12)


def test_ranking_golden(table):
    assert ranking_csv(table) == (GOLDEN / "ranking_table1.csv").read_text()


def test_ranking_matches_column_oracle(table):
    columns = {key: j + 1 for j, key in enumerate(table.keys)}
    for society, gender, score in rank_cohorts(table):
        assert score == pytest.approx(column_score_oracle(columns[(society, gender)]), abs=1e-15)
    scores = [r[2] for r in rank_cohorts(table)]
    assert scores == sorted(scores, reverse=True)


def test_ranking_shows_published_row_separately(table):
    rows = list(csv.DictReader(ranking_csv(table).splitlines()))
    assert [float(r["aggregate_as_published"]) for r in rows] == [
        table.stored_aggregate[(r["society"], r["gender"])] for r in rows
    ]


def _cohort(schema, society, gender, value):
    return CohortObservation(society, gender, 1, {n: value for n in schema.names})


def test_ranking_dominance_and_ties(schema):
    t = SurveyTable(
        schema,
        (
            _cohort(schema, "B", "M", 40.0),
            _cohort(schema, "A", "M", 40.0),
            _cohort(schema, "A", "F", 40.0),
            _cohort(schema, "C", "F", 90.0),
        ),
    )
    assert [(s, g) for s, g, _ in rank_cohorts(t)] == [("C", "F"), ("A", "F"), ("A", "M"), ("B", "M")]


def test_ranking_weight_scaling(table, schema):
    scaled = SurveyTable(schema.with_weights(7.5 * schema.weights), table.cohorts, table.stored_aggregate)
    assert [r[:2] for r in rank_cohorts(scaled)] == [r[:2] for r in rank_cohorts(table)]


def test_ranking_total_order(table):
    ranked = rank_cohorts(table)
    keys = [(-s, soc, g) for soc, g, s in ranked]
    assert len(set(keys)) == len(keys)
    assert keys == sorted(keys)


def test_default_hdi_config():
    hdi = load_hdi()
    assert set(hdi.hdi) == {"Sample 1", "Sample 2", "Sample 3", "Sample 4"}
    bins = {hdi.bin(s) for s in hdi.hdi}
    assert bins == {0, 1, 2, 3}
    assert hdi.label("Sample 2") == "Macau"


def test_quantile_ramp_reproduces_default():
    hdi = load_hdi()
    ramp = quantile_ramp(hdi.hdi, [c for _, c in hdi.ramp])
    np.testing.assert_allclose([t for t, _ in ramp], [t for t, _ in hdi.ramp], atol=1e-12)


def test_hdi_validation():
    with pytest.raises(ConfigError):
        HdiConfig({"a": 1.2}, ((0.0, "red"),))
    with pytest.raises(ConfigError):
        HdiConfig({"a": 0.5}, ((0.5, "red"), (0.4, "blue")))
    with pytest.raises(MissingHdi):
        HdiConfig({"a": 0.5}, ((0.0, "red"),)).color("b")


def _clustering(n, k=1):
    labels = np.arange(n) % k
    medoids = np.array([int(np.flatnonzero(labels == c)[0]) for c in range(k)])
    return Clustering(k, labels, medoids, 0.0)


def _hdi():
    return HdiConfig({"A": 0.6, "B": 0.9}, ((0.0, "#111111"), (0.75, "#999999")))


def test_single_agent_upper_left():
    cmap, _ = render_cluster_map(_clustering(1), [0.4], ["A"], _hdi())
    g = cmap.glyphs[0]
    assert g.x < 0.15 * cmap.width and g.y < 0.15 * cmap.height


def test_two_agents_monotone_placement():
    cmap, _ = render_cluster_map(_clustering(2), [0.9, 0.1], ["A", "B"], _hdi())
    hi, lo = cmap.glyphs
    assert hi.x < lo.x and hi.y < lo.y


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=40), st.integers(0, 1000))
def test_layout_inside_canvas_and_diagonal_monotone(scores, seed):
    n = len(scores)
    cmap, _ = render_cluster_map(_clustering(n, min(3, n)), scores, ["A"] * n, _hdi(), seed=seed)
    for g in cmap.glyphs:
        assert g.radius > 0
        assert g.radius <= g.x <= cmap.width - g.radius
        assert g.radius <= g.y <= cmap.height - g.radius
    x, y = layout(scores, seed=seed)
    order = np.argsort(scores, kind="stable")
    diag = (x + y)[order]
    s = np.asarray(scores)[order]
    for i in range(n - 1):
        assert diag[i + 1] <= diag[i] + 1e-9
        if s[i + 1] - s[i] > 1e-9 * (s[-1] - s[0]):
            assert diag[i + 1] < diag[i]


def test_radius_proportional_to_cluster_size():
    cl = Clustering(2, np.array([0, 0, 0, 1]), np.array([0, 3]), 0.0)
    cmap, _ = render_cluster_map(cl, [0.1, 0.2, 0.3, 0.4], ["A"] * 4, _hdi())
    assert cmap.glyphs[0].radius == pytest.approx(3 * cmap.glyphs[3].radius)


def test_missing_hdi():
    with pytest.raises(MissingHdi):
        render_cluster_map(_clustering(2), [0.1, 0.2], ["A", "Z"], _hdi())


def test_svg_well_formed_and_stable():
    cl = _clustering(6, 2)
    scores = np.linspace(0, 1, 6)
    _, svg1 = render_cluster_map(cl, scores, ["A", "B"] * 3, _hdi(), seed=3)
    _, svg2 = render_cluster_map(cl, scores, ["A", "B"] * 3, _hdi(), seed=3)
    assert svg1 == svg2
    root = ET.fromstring(svg1.encode())
    assert root.tag == SVG_NS + "svg"
    assert root.get("version") == "1.1"
    assert len(root.findall(f".//{SVG_NS}circle")) == 6


def test_four_societies_four_colors(table):
    pop = synthesize_population(table, 150, seed=42)
    S = similarity_matrix(pop, pop.schema.weights)
    cl = cluster_kmedoids(S, 4, seed=42)
    scores = [a.v0 for a in pop]
    cmap, svg = render_cluster_map(cl, scores, pop.societies, load_hdi(), seed=42)
    assert len({g.color for g in cmap.glyphs}) == 4
    assert len({g.cluster for g in cmap.glyphs}) == 4
    ET.fromstring(svg.encode())
