"""Selection engine: leaf scaling/ranking, AND/OR combination, evaluation."""

from __future__ import annotations

import random

import pytest

from rrtselect import (
    EmptyLeafError,
    NoFeasibleServiceError,
    Offer,
    OfferKind,
    ServiceDescriptor,
    combine_and,
    combine_or,
    eligible_candidates,
    evaluate,
    rank_leaf,
    reference_evaluate,
    report_to_json,
    scale_leaf,
)
from rrtselect.rrt import (
    OfferRequirement,
    QualityRequirement,
    RrtEdge,
    RrtInternal,
    RrtLeaf,
    RrtOp,
)
from randgen import random_services, random_tree

KW = frozenset({"travel"})


def svc(sid, price, offers=(), **qos):
    qos = {"price": float(price), **{k: float(v) for k, v in qos.items()}}
    return ServiceDescriptor(sid, sid.upper(), KW, qos, tuple(offers))


class TestEligibleCandidates:
    def test_quality_leaf_pairs_values_in_candidate_order(self):
        services = [svc("s1", 100), svc("s2", 200)]
        assert eligible_candidates(QualityRequirement("price"), services) == [("s1", 100.0), ("s2", 200.0)]

    def test_offer_leaf_uses_best_profit_and_excludes_nonadvertisers(self):
        services = [
            svc("s1", 1000, [Offer(OfferKind.DO, percentage=15.0)]),
            svc("s2", 500),
        ]
        assert eligible_candidates(OfferRequirement(OfferKind.DO), services) == [("s1", 150.0)]

    def test_no_matching_offers_anywhere(self):
        services = [svc("s1", 100), svc("s2", 200)]
        assert eligible_candidates(OfferRequirement(OfferKind.LCO), services) == []

    def test_missing_property_excludes_not_zero_scores(self):
        services = [svc("s1", 100, reputation=4.0), svc("s2", 200)]
        assert eligible_candidates(QualityRequirement("reputation"), services) == [("s1", 4.0)]

    def test_multiple_offers_of_same_kind_take_maximum(self):
        services = [
            svc("s1", 1000, [Offer(OfferKind.DO, percentage=5.0), Offer(OfferKind.DO, percentage=20.0)]),
        ]
        assert eligible_candidates(OfferRequirement(OfferKind.DO), services) == [("s1", 200.0)]


class TestScaleLeaf:
    def test_lower_better_property_is_flipped(self):
        values = [("s1", 100.0), ("s2", 200.0), ("s3", 300.0)]
        assert scale_leaf(QualityRequirement("price"), values) == {"s1": 1.0, "s2": 0.5, "s3": 0.0}

    def test_degenerate_equal_values_all_get_one(self):
        values = [("s1", 4.0), ("s2", 4.0)]
        assert scale_leaf(QualityRequirement("reputation"), values) == {"s1": 1.0, "s2": 1.0}

    def test_offer_profit_is_higher_better(self):
        values = [("s1", 150.0), ("s2", 50.0)]
        assert scale_leaf(OfferRequirement(OfferKind.DO), values) == {"s1": 1.0, "s2": 0.0}

    def test_empty_leaf_raises(self):
        with pytest.raises(EmptyLeafError):
            scale_leaf(QualityRequirement("price"), [])

    def test_range_is_unit_interval(self):
        rng = random.Random(301)
        for _ in range(200):
            values = [(f"s{i}", rng.uniform(-1000, 1000)) for i in range(rng.randint(1, 20))]
            normalized = scale_leaf(QualityRequirement("reputation"), values)
            assert all(0.0 <= v <= 1.0 for v in normalized.values())


class TestRankLeaf:
    def test_multiplies_by_edge_weight(self):
        assert rank_leaf({"s1": 1.0, "s2": 0.5}, 0.4) == {"s1": 0.4, "s2": 0.2}

    def test_identity_weight(self):
        table = {"s1": 0.3, "s2": 0.9}
        assert rank_leaf(table, 1.0) == table

    def test_zero_preserved(self):
        assert rank_leaf({"s1": 0.0}, 0.7) == {"s1": 0.0}


class TestCombineAnd:
    def test_intersection_and_weighted_sum(self):
        result = combine_and([{"s1": 0.4, "s2": 0.2}, {"s1": 0.3}], 0.5)
        assert set(result) == {"s1"}
        assert result["s1"] == pytest.approx(0.35, abs=1e-12)

    def test_disjoint_children_give_empty_table(self):
        assert combine_and([{"s1": 0.4}, {"s2": 0.3}], 0.5) == {}

    def test_identity_weight_pure_sum(self):
        result = combine_and([{"s1": 0.25}, {"s1": 0.5}], 1.0)
        assert result["s1"] == pytest.approx(0.75, abs=1e-12)

    def test_requires_two_children(self):
        with pytest.raises(ValueError):
            combine_and([{"s1": 0.4}], 0.5)


class TestCombineOr:
    def test_union_with_weighting(self):
        result = combine_or([{"s1": 0.4}, {"s2": 0.7}], 0.5)
        assert result == {"s1": pytest.approx(0.2), "s2": pytest.approx(0.35)}

    def test_duplicate_service_keeps_maximum(self):
        assert combine_or([{"s1": 0.4}, {"s1": 0.6}], 1.0) == {"s1": 0.6}

    def test_all_children_empty(self):
        assert combine_or([{}, {}], 0.9) == {}

    def test_or_with_itself_is_idempotent(self):
        table = {"s1": 0.4, "s2": 0.1}
        assert combine_or([table, table], 1.0) == table


class TestEvaluate:
    def test_single_leaf_single_candidate_scores_one(self):
        report = evaluate(RrtLeaf(QualityRequirement("price")), [svc("s1", 100)], "travel")
        assert report.best == "s1"
        assert report.ranked == (("s1", 1.0),)

    def test_canonical_instance_matches_golden(self, canonical_tree, canonical_services, golden_report):
        report = evaluate(canonical_tree, canonical_services, "travel")
        assert report.best == "s1"
        assert report_to_json(report).encode() == golden_report

    def test_and_filters_out_service_missing_offer_kind(self):
        tree = RrtInternal(RrtOp.AND, (
            RrtEdge(0.5, RrtLeaf(QualityRequirement("price"))),
            RrtEdge(0.5, RrtLeaf(OfferRequirement(OfferKind.LCO))),
        ))
        services = [
            svc("s1", 100, [Offer(OfferKind.LCO, price=50.0, period_hours=24.0)]),
            svc("s2", 80),
        ]
        report = evaluate(tree, services, "travel")
        assert [sid for sid, _ in report.ranked] == ["s1"]

    def test_no_feasible_service_on_disjoint_and(self):
        tree = RrtInternal(RrtOp.AND, (
            RrtEdge(0.5, RrtLeaf(OfferRequirement(OfferKind.CO))),
            RrtEdge(0.5, RrtLeaf(OfferRequirement(OfferKind.SO))),
        ))
        services = [
            svc("s1", 100, [Offer(OfferKind.CO, price=10.0)]),
            svc("s2", 100, [Offer(OfferKind.SO, price=10.0)]),
        ]
        with pytest.raises(NoFeasibleServiceError) as err:
            evaluate(tree, services, "travel")
        assert err.value.node == "0"

    def test_no_feasible_service_on_empty_candidates(self):
        with pytest.raises(NoFeasibleServiceError):
            evaluate(RrtLeaf(QualityRequirement("price")), [], "travel")

    def test_ties_break_by_service_id(self):
        report = evaluate(RrtLeaf(QualityRequirement("price")), [svc("b", 100), svc("a", 100)], "travel")
        assert report.ranked == (("a", 1.0), ("b", 1.0))
        assert report.best == "a"

    def test_trace_paths_cover_all_nodes(self, canonical_tree, canonical_services):
        report = evaluate(canonical_tree, canonical_services, "travel")
        assert set(report.trace) == {"0", "0.0", "0.0.0", "0.0.1", "0.1", "0.1.0", "0.1.1"}

    def test_root_weight_scales_scores_not_order(self, canonical_tree, canonical_services):
        base = evaluate(canonical_tree, canonical_services, "travel")
        scaled = evaluate(canonical_tree, canonical_services, "travel", root_weight=3.0)
        assert [sid for sid, _ in base.ranked] == [sid for sid, _ in scaled.ranked]
        for (_, a), (_, b) in zip(base.ranked, scaled.ranked):
            assert b == pytest.approx(3.0 * a, rel=1e-12)

    def test_determinism_byte_identical_reports(self, canonical_tree, canonical_services):
        a = evaluate(canonical_tree, canonical_services, "travel")
        b = evaluate(canonical_tree, canonical_services, "travel")
        assert report_to_json(a) == report_to_json(b)

    def test_leaf_scores_bounded_by_edge_weight(self):
        rng = random.Random(302)
        for _ in range(50):
            tree = random_tree(rng, max_depth=3)
            services = random_services(rng, rng.randint(2, 8))
            try:
                report = evaluate(tree, services, "task")
            except NoFeasibleServiceError:
                continue
            _check_score_bounds(tree, report.trace, "0", 1.0)


def _check_score_bounds(node, trace, path, weight):
    table = trace[path]
    if isinstance(node, RrtLeaf):
        for score in table.values():
            assert 0.0 <= score <= weight + 1e-12
        return
    for i, edge in enumerate(node.children):
        _check_score_bounds(edge.child, trace, f"{path}.{i}", edge.weight)


class TestOracleEquivalence:
    def test_reference_matches_engine_on_random_instances(self):
        rng = random.Random(303)
        for _ in range(60):
            tree = random_tree(rng, max_depth=4, max_fanout=4)
            services = random_services(rng, rng.randint(1, 8))
            try:
                engine_report = evaluate(tree, services, "task")
            except NoFeasibleServiceError:
                with pytest.raises(NoFeasibleServiceError):
                    reference_evaluate(tree, services, "task")
                continue
            oracle_report = reference_evaluate(tree, services, "task")
            assert engine_report.ranked == oracle_report.ranked
            assert engine_report.trace == oracle_report.trace

    def test_single_leaf_instance_matches_exactly(self):
        services = [svc("s1", 100), svc("s2", 300), svc("s3", 220)]
        leaf = RrtLeaf(QualityRequirement("price"))
        assert evaluate(leaf, services, "t").ranked == reference_evaluate(leaf, services, "t").ranked

    def test_reference_produces_the_golden_file(self, canonical_tree, canonical_services, golden_report):
        report = reference_evaluate(canonical_tree, canonical_services, "travel")
        assert report_to_json(report).encode() == golden_report
