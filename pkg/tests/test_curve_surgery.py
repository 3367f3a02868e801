"""
허용 곡선과 절단 단위 테스트

곡선 단어, x/y 벡터, 절단, ξ_v⁺/Γ_v⁺, 비순환 분해, 유계 바지,
K_R/Ĥ_R/W_R 차원, Ω, 해밀토니안 항등식을 G11/H/Q 그래프로 검증합니다.
"""

import random
from fractions import Fraction

import pytest

from curve_surgery import MINUS, PLUS


class TestCurveWords:
    """곡선 단어와 좌표 벡터 테스트"""

    def test_g11_word_vectors(self, g11_graph):
        from curve_surgery import curve_vectors, make_word
        word = make_word(g11_graph, [0, 5], [MINUS, PLUS])
        data = curve_vectors(g11_graph, [word])
        assert data.x == (1, -1, 0, 0)
        assert data.y == (1, 1, 0, 0)
        assert data.simple

    def test_invalid_step_rejected(self, g11_graph):
        from curve_surgery import make_word
        from errors import InvalidStep
        with pytest.raises(InvalidStep):
            make_word(g11_graph, [0, 5], [PLUS, PLUS])

    def test_negative_dart_rejected(self, g11_graph):
        from curve_surgery import make_word
        from errors import InvalidStep
        with pytest.raises(InvalidStep):
            make_word(g11_graph, [1], [PLUS])

    def test_word_from_tags(self, g11_graph):
        from curve_surgery import word_from_tags
        word = word_from_tags(g11_graph, 2, [MINUS, PLUS])
        assert word.darts == (2, 7)

    def test_peripheral_word(self, g11_graph):
        from curve_surgery import word_from_tags
        positive_face = g11_graph.graph.faces[g11_graph.positive_faces[0]]
        word = word_from_tags(g11_graph, 0, [PLUS] * len(positive_face))
        assert word.is_peripheral()

    def test_non_primitive_not_simple(self, g11_graph):
        from curve_surgery import curve_vectors, make_word
        word = make_word(g11_graph, [0, 5, 0, 5], [MINUS, PLUS, MINUS, PLUS])
        assert not word.is_primitive()
        assert not curve_vectors(g11_graph, [word]).simple

    def test_curve_length(self, g11_graph):
        from curve_surgery import curve_length, gamma_plus
        from ribbon_core import make_metric
        m = make_metric(g11_graph.graph, [1, 2, 3, 4])
        assert curve_length(g11_graph, m, gamma_plus(g11_graph, 0)) == 10


class TestVertexVectors:
    """ξ_v⁺와 Γ_v⁺ 테스트"""

    def test_xi_plus_g11(self, g11_graph):
        from curve_surgery import xi_plus
        assert xi_plus(g11_graph, 0) == (1, -1, 1, -1)

    def test_xi_plus_sum_zero(self, g11_graph, h_graph):
        from curve_surgery import xi_plus
        for og in (g11_graph, h_graph):
            total = [sum(v) for v in zip(*(xi_plus(og, v) for v in range(len(og.graph.vertices))))]
            assert all(t == 0 for t in total)

    def test_xi_minus_is_negated(self, g11_graph):
        """방향을 뒤집으면 ξ_v⁻ = -ξ_v⁺"""
        from curve_surgery import xi_plus
        for v in (0, 1):
            assert xi_plus(g11_graph.reversed(), v) == tuple(-a for a in xi_plus(g11_graph, v))

    def test_gamma_plus_g11(self, g11_graph):
        from curve_surgery import gamma_plus
        gamma = gamma_plus(g11_graph, 0)
        assert len(gamma.components) == 2
        assert gamma.x == (1, -1, 1, -1)
        assert gamma.y == (1, 1, 1, 1)
        assert gamma.simple

    def test_opposite_vertices_opposite_twist(self, g11_graph):
        """두 꼭짓점의 Γ⁺는 x 부호만 반대"""
        from curve_surgery import gamma_plus
        u, v = gamma_plus(g11_graph, 0), gamma_plus(g11_graph, 1)
        assert tuple(-a for a in u.x) == v.x
        assert u.y == v.y

    def test_single_vertex_rejected(self, q_graph):
        from curve_surgery import gamma_plus
        from errors import SingleVertex
        with pytest.raises(SingleVertex):
            gamma_plus(q_graph, 0)


class TestCutAlong:
    """절단 테스트"""

    def test_g11_two_pants(self, g11_graph, unit_g11_metric):
        from curve_surgery import cut_along, gamma_plus
        from stable_graphs import EDGE, LEG, validate_stable
        cut = cut_along(g11_graph, unit_g11_metric, gamma_plus(g11_graph, 0))
        assert len(cut.pieces) == 2
        assert validate_stable(cut.stable) == []

        u_piece = next(p for p in cut.pieces if 0 in p.darts)
        assert len(u_piece.graph.graph.vertices) == 1
        legs = [s for s in u_piece.slots if s.kind == LEG]
        curves = [s for s in u_piece.slots if s.kind == EDGE]
        assert [(s.sign, s.label) for s in legs] == [(1, 1)]
        assert sorted(s.sign for s in curves) == [-1, -1]

    def test_cut_preserves_lengths(self, g11_graph, unit_g11_metric):
        from curve_surgery import cut_along, gamma_plus
        from ribbon_core import boundary_lengths
        from stable_graphs import LEG
        cut = cut_along(g11_graph, unit_g11_metric, gamma_plus(g11_graph, 0))
        for piece in cut.pieces:
            lengths = boundary_lengths(piece.graph, piece.metric).lengths
            for slot, length in zip(piece.slots, lengths):
                assert length == (4 if slot.kind == LEG else 2)

    def test_empty_cut_single_piece(self, q_graph):
        from curve_surgery import curve_vectors, cut_along
        from ribbon_core import unit_metric
        cut = cut_along(q_graph, unit_metric(q_graph.graph), curve_vectors(q_graph, []))
        assert len(cut.pieces) == 1
        assert cut.stable.edges == ()

    def test_duplicate_components_rejected(self, g11_graph, unit_g11_metric):
        from curve_surgery import curve_vectors, cut_along, make_word
        from errors import NotAdmissible
        word = make_word(g11_graph, [0, 5], [MINUS, PLUS])
        data = curve_vectors(g11_graph, [word, word])
        with pytest.raises(NotAdmissible):
            cut_along(g11_graph, unit_g11_metric, data)


class TestDecomposition:
    """비순환 분해와 유계 바지 테스트"""

    def test_g11_order_uv(self, g11_graph):
        from curve_surgery import acyclic_decompose
        from stable_graphs import is_acyclic
        dec = acyclic_decompose(g11_graph, [0, 1])
        assert is_acyclic(dec.stable) == (True, [0, 1])
        assert len(dec.stable.edges) == 2
        assert all(dec.stable.edge_direction(k) == (0, 1) for k in range(2))
        assert all(len(p.graph.graph.vertices) == 1 for p in dec.pieces)
        assert 0 in dec.pieces[0].darts

    def test_order_vu_puts_v_first(self, g11_graph):
        from curve_surgery import acyclic_decompose
        dec = acyclic_decompose(g11_graph, [1, 0])
        assert 4 in dec.pieces[0].darts

    def test_unique_under_relabel(self, h_graph):
        from curve_surgery import acyclic_decompose
        from ribbon_core import relabel
        from stable_graphs import structure_key
        rng = random.Random(11)
        base = acyclic_decompose(h_graph, [0, 1])
        for _ in range(3):
            perm = list(range(h_graph.n_darts))
            rng.shuffle(perm)
            moved = relabel(h_graph, perm)
            order = [moved.graph.vertex_of[perm[h_graph.graph.vertices[v][0]]] for v in (0, 1)]
            assert structure_key(acyclic_decompose(moved, order).stable) == structure_key(base.stable)

    def test_minimal_graph_single_component(self, q_graph):
        from curve_surgery import acyclic_decompose
        dec = acyclic_decompose(q_graph)
        assert len(dec.pieces) == 1
        assert dec.curves.is_empty

    def test_bad_order_rejected(self, g11_graph):
        from curve_surgery import acyclic_decompose
        from errors import RibbonError
        with pytest.raises(RibbonError):
            acyclic_decompose(g11_graph, [0, 0])

    def test_g11_pant_type(self, g11_graph):
        from curve_surgery import bounded_pants_classify
        pant = bounded_pants_classify(g11_graph, 0)
        assert pant.kind == 3
        assert pant.positive_labels == (1,)
        assert pant.curves == 2

    def test_h_pants_count(self, h_graph):
        from curve_surgery import bounded_pants_classify
        kinds = [bounded_pants_classify(h_graph, v).kind for v in range(2)]
        assert len(kinds) == 2
        assert all(k in (1, 2, 3, 4) for k in kinds)


class TestLinearAlgebra:
    """K_R, Ĥ_R, W_R, Ω 테스트"""

    def test_pant_irreducible(self, q_graph):
        from curve_surgery import is_irreducible, linear_data
        assert linear_data(q_graph).dims["K"] == 0
        assert is_irreducible(q_graph)

    def test_minimal(self, q_graph, g11_graph):
        from curve_surgery import is_irreducible, is_minimal
        assert is_minimal(q_graph)
        assert not is_minimal(g11_graph)
        assert not is_irreducible(g11_graph)

    def test_g11_dims(self, g11_graph):
        from curve_surgery import linear_data
        assert linear_data(g11_graph).dims == {"T": 4, "dl": 1, "K": 3, "H_hat": 1, "W": 5}

    def test_g11_kernel_is_hat(self, g11_graph):
        from curve_surgery import pairing
        data = pairing(g11_graph)
        assert data.kernel_is_hat
        assert [tuple(abs(v) for v in k) for k in data.kernel] == [(1, 1, 1, 1)]
        assert data.variants_agree

    def test_x_and_y_of_z(self, g11_graph):
        from curve_surgery import linear_data, x_of_z, y_of_z
        for z in linear_data(g11_graph).w_basis:
            assert len(x_of_z(g11_graph, z)) == 4
            assert len(y_of_z(g11_graph, z)) == 4

    def test_hamiltonian_gamma(self, g11_graph, h_graph):
        from curve_surgery import gamma_plus, hamiltonian_check
        for og in (g11_graph, h_graph):
            for v in range(2):
                assert hamiltonian_check(og, gamma_plus(og, v))

    def test_hamiltonian_random_curves(self, g11_graph):
        from curve_surgery import hamiltonian_check, random_admissible_curves
        curves = random_admissible_curves(g11_graph, 5, random.Random(3))
        assert curves
        for c in curves:
            assert hamiltonian_check(g11_graph, c)

    def test_hamiltonian_at_metric(self, g11_graph, unit_g11_metric):
        """메트릭 m에서의 길이 차로 잰 dl도 Ω(x, ·)와 일치"""
        from curve_surgery import gamma_plus, hamiltonian_check, linear_data
        lin = linear_data(g11_graph)
        skewed = (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 7))
        for v in range(2):
            gamma = gamma_plus(g11_graph, v)
            assert hamiltonian_check(g11_graph, gamma, lin, m=unit_g11_metric)
            assert hamiltonian_check(g11_graph, gamma, lin, m=skewed)

    def test_hamiltonian_rejects_bad_metric(self, g11_graph):
        from curve_surgery import gamma_plus, hamiltonian_check
        from errors import RibbonError
        with pytest.raises(RibbonError):
            hamiltonian_check(g11_graph, gamma_plus(g11_graph, 0), m=(1, 1, 1))
        with pytest.raises(RibbonError):
            hamiltonian_check(g11_graph, gamma_plus(g11_graph, 0), m=(1, 0, 1, 1))

    def test_hamiltonian_requires_simple(self, g11_graph):
        from curve_surgery import curve_vectors, hamiltonian_check, make_word
        from errors import NotSimple
        word = make_word(g11_graph, [0, 5, 0, 5], [MINUS, PLUS, MINUS, PLUS])
        with pytest.raises(NotSimple):
            hamiltonian_check(g11_graph, curve_vectors(g11_graph, [word]))


class TestCurveJson:
    """곡선 직렬화 테스트"""

    def test_round_trip(self, g11_graph):
        from curve_surgery import curves_from_dict, curves_to_dict, gamma_plus
        gamma = gamma_plus(g11_graph, 0)
        again = curves_from_dict(g11_graph, curves_to_dict(gamma))
        assert again.x == gamma.x and again.y == gamma.y

    def test_weight_serialized_as_fraction(self, g11_graph):
        from curve_surgery import curve_vectors, curves_to_dict, make_word
        word = make_word(g11_graph, [0, 5], [MINUS, PLUS], Fraction(3, 2))
        data = curves_to_dict(curve_vectors(g11_graph, [word]))
        assert data["components"][0]["weight"] == "3/2"
