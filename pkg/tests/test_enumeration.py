"""
4가 그래프 열거와 부피 오라클 단위 테스트

카탈로그 개수, Hurwitz 수로의 F 재구성, 셀 부피(곱 공식 / Ehrhart),
오라클과 재귀식 값의 일치를 검증합니다.
"""

from fractions import Fraction

import pytest


class TestEnumerate:
    """열거 테스트"""

    @pytest.mark.parametrize("signature", [(0, 1, 2), (0, 2, 1)])
    def test_pants_single_entry(self, signature):
        from enumeration import enumerate_graphs
        catalog = enumerate_graphs(*signature)
        assert len(catalog) == 1
        assert catalog.entries[0].aut_order == 1
        assert catalog.entries[0].graph.signature == signature

    def test_entries_valid_and_distinct(self):
        from enumeration import enumerate_graphs
        from ribbon_core import canonical_key, is_four_valent, validate_graph
        catalog = enumerate_graphs(0, 2, 2)
        assert len(catalog) >= 1
        keys = {canonical_key(e.graph) for e in catalog}
        assert len(keys) == len(catalog)
        for entry in catalog:
            assert validate_graph(entry.graph.graph) == []
            assert is_four_valent(entry.graph.graph)
            assert entry.graph.signature == (0, 2, 2)

    def test_torus_weight(self):
        from enumeration import enumerate_graphs
        catalog = enumerate_graphs(1, 1, 1)
        assert catalog.weight_sum() == Fraction(1, 4)

    def test_unstable_rejected(self):
        from enumeration import enumerate_graphs
        from errors import UnstableType
        with pytest.raises(UnstableType):
            enumerate_graphs(0, 1, 1)

    def test_dict_round_trip(self):
        from enumeration import GraphCatalog, enumerate_graphs
        from ribbon_core import canonical_key
        catalog = enumerate_graphs(0, 2, 2)
        again = GraphCatalog.from_dict(catalog.to_dict())
        assert again.type == (0, 2, 2)
        assert [canonical_key(e.graph) for e in again] == [canonical_key(e.graph) for e in catalog]
        assert [e.aut_order for e in again] == [e.aut_order for e in catalog]

    @pytest.mark.slow
    def test_process_pool_matches_serial(self):
        from enumeration import enumerate_graphs
        from ribbon_core import canonical_key
        serial = enumerate_graphs(0, 3, 1)
        pooled = enumerate_graphs(0, 3, 1, threads=2)
        assert [canonical_key(e.graph) for e in serial] == [canonical_key(e.graph) for e in pooled]

    @pytest.mark.parametrize("signature", [
        (0, 2, 2),
        (1, 1, 1),
        pytest.param((0, 3, 1), marks=pytest.mark.slow),
        pytest.param((0, 1, 3), marks=pytest.mark.slow),
    ])
    def test_backtracking_matches_exhaustive(self, signature):
        """가지치기 탐색 결과가 전수 대입 결과와 같음"""
        from itertools import permutations

        from enumeration import _search_branch, _vertex_rotation
        from ribbon_core import RibbonGraph, validate_graph

        g, n_plus, n_minus = signature
        vertex_count = 2 * g - 2 + n_plus + n_minus
        n = 4 * vertex_count
        s0 = _vertex_rotation(vertex_count)
        for first in range(1, n, 2):
            expected = set()
            odds = [d for d in range(1, n, 2) if d != first]
            for images in permutations(odds):
                s1 = [0] * n
                s1[0], s1[first] = first, 0
                for e, o in zip(range(2, n, 2), images):
                    s1[e], s1[o] = o, e
                rg = RibbonGraph(s0, tuple(s1))
                if len(rg.faces) != n_plus + n_minus:
                    continue
                if sum(1 for f in rg.faces if f[0] % 2 == 0) != n_plus:
                    continue
                if not validate_graph(rg):
                    expected.add(tuple(s1))
            found = _search_branch((vertex_count, first, n_plus, n_minus))
            assert len(found) == len(set(found))
            assert set(found) == expected

    def test_three_vertex_count(self):
        from enumeration import enumerate_graphs
        assert len(enumerate_graphs(0, 3, 2)) == 44

    @pytest.mark.slow
    def test_four_vertex_within_bound(self):
        """V=4 유형도 탁상 규모 시간 안에 열거"""
        import time

        from enumeration import enumerate_graphs
        start = time.perf_counter()
        catalog = enumerate_graphs(0, 4, 2)
        elapsed = time.perf_counter() - start
        assert len(catalog) == 558
        assert elapsed < 60


class TestHurwitz:
    """Hurwitz 수 테스트"""

    def test_torus_count(self):
        from enumeration import hurwitz_count
        assert hurwitz_count(1, [4]) == Fraction(1, 4)

    def test_reconstruct_sphere(self):
        from enumeration import hurwitz_table
        from volumes import f_polynomial
        assert hurwitz_table(0, 3).reconstruct(0, 3) == f_polynomial(0, 3)

    def test_reconstruct_torus(self):
        from enumeration import hurwitz_table
        from volumes import f_polynomial
        assert hurwitz_table(1, 1).reconstruct(1, 1) == f_polynomial(1, 1)

    def test_bad_profile(self):
        from enumeration import hurwitz_count
        from errors import ProfileMismatch
        with pytest.raises(ProfileMismatch):
            hurwitz_count(0, [1, 2])

    def test_wrong_catalog_type(self):
        from enumeration import enumerate_graphs, hurwitz_table
        from errors import ProfileMismatch
        with pytest.raises(ProfileMismatch):
            hurwitz_table(0, 2, enumerate_graphs(0, 1, 2))


class TestCellVolumes:
    """셀 부피 테스트"""

    def test_product_formula(self, g11_graph):
        from enumeration import CatalogEntry, cell_volume_one_negative, cell_volume_one_negative_symbolic
        entry = CatalogEntry(g11_graph, 4)
        assert cell_volume_one_negative(entry, [6]) == 36
        assert cell_volume_one_negative_symbolic(entry).pretty() == "1/6·L1^3"

    def test_product_formula_needs_one_negative(self, h_graph):
        from enumeration import CatalogEntry, cell_volume_one_negative
        from errors import RibbonError
        with pytest.raises(RibbonError):
            cell_volume_one_negative(CatalogEntry(h_graph, 1), [1, 1])

    def test_count_integer_metrics(self, q_graph):
        from enumeration import count_integer_metrics
        lengths = {q_graph.positive_faces[0]: 5}
        for f, value in zip(q_graph.negative_faces, (2, 3)):
            lengths[f] = value
        targets = [lengths[f] for f in range(3)]
        assert count_integer_metrics(q_graph, targets) == 1

        lengths[q_graph.positive_faces[0]] = 6
        assert count_integer_metrics(q_graph, [lengths[f] for f in range(3)]) == 0

    def test_cell_dimension(self, q_graph, g11_graph):
        from enumeration import cell_dimension
        assert cell_dimension(q_graph) == 0
        assert cell_dimension(g11_graph) == 3

    def test_ehrhart_pant(self, q_graph):
        from enumeration import CatalogEntry, cell_volume_ehrhart
        assert cell_volume_ehrhart(CatalogEntry(q_graph, 1), [4], [2, 2]) == 1

    def test_non_integral_rejected(self, q_graph):
        from enumeration import CatalogEntry, cell_volume_ehrhart
        from errors import NonIntegralInput
        with pytest.raises(NonIntegralInput):
            cell_volume_ehrhart(CatalogEntry(q_graph, 1), [Fraction(7, 2)], [2, Fraction(3, 2)])


class TestOracle:
    """오라클과 재귀식 일치 테스트"""

    def test_torus_product(self):
        from enumeration import volume_oracle
        assert volume_oracle(1, 1, 1, [6], [6]) == 9

    def test_pant_ehrhart(self):
        from enumeration import volume_oracle
        assert volume_oracle(0, 1, 2, [4], [1, 3]) == 1

    @pytest.mark.slow
    def test_two_two_matches_recursion(self):
        from enumeration import volume_oracle
        from volumes import make_point, z_evaluate
        assert volume_oracle(0, 2, 2, [3, 3], [2, 4]) == 4
        assert z_evaluate(0, 2, 2, make_point([3, 3], [2, 4])) == 4

    def test_residue_rejected(self):
        from enumeration import volume_oracle
        from errors import NonIntegralInput
        with pytest.raises(NonIntegralInput):
            volume_oracle(0, 1, 2, [4], [1, 2])
