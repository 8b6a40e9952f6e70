"""Exhaustive configuration catalogue and score-bound coverage."""

from __future__ import annotations

import pytest

from totalext import configurations
from totalext.discharging import POOR_SHAPE_CATALOGUE

from catalogue import generate_instances, local_degree_sum_ok


@pytest.fixture(scope="module")
def classified():
    rows = []
    for inst in generate_instances():
        (report,) = configurations(inst.embedding, inst.subgraph, inst.params)
        rows.append((inst, report, local_degree_sum_ok(inst, report.config_vertices)))
    return rows


def test_catalogue_has_twelve_shapes():
    assert len(POOR_SHAPE_CATALOGUE) == 12
    assert len({sig for sig in POOR_SHAPE_CATALOGUE}) == 12


def test_filtered_variants_fail_the_side_condition(classified):
    filtered = [row for row in classified if row[0].kind == "filtered"]
    assert filtered
    assert all(not ok for _, _, ok in filtered)


def test_poor_instances_cover_catalogue_exactly(classified):
    observed = set()
    for inst, report, ok in classified:
        if inst.kind != "poor":
            continue
        assert ok, inst.signature
        assert report.poor, inst.signature
        assert report.shape_id is not None, inst.signature
        observed.add((len(report.clique), report.marked_signature))
    assert observed == set(POOR_SHAPE_CATALOGUE)


def test_no_poor_configuration_escapes_the_catalogue(classified):
    for inst, report, ok in classified:
        if ok and report.poor:
            assert report.shape_id is not None, (inst.kind, inst.signature)


def test_score_table(classified):
    seen_poor = seen_rich = 0
    for inst, report, ok in classified:
        if not ok:
            continue
        assert report.score <= 6, inst.signature
        if report.poor:
            seen_poor += 1
            cap = 0 if len(report.clique) == 1 else (5 if len(report.clique) == 2 else 6)
            assert report.score <= cap, (inst.signature, report.score)
        else:
            seen_rich += 1
    assert seen_poor >= 12 and seen_rich >= 10
