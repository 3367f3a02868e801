"""
부피 항등식 검사 단위 테스트

발견 사항 보고서, 개별 항등식 검사, 깊이별 전체 실행,
자르기-붙이기 급수 보고서를 검증합니다.
"""

import json
from fractions import Fraction

import pytest


class TestIdentityReport:
    """발견 사항 보고서 테스트"""

    def test_counts_and_failures(self):
        from volume_identities import IdentityReport
        report = IdentityReport()
        report.add("string", (0, 3, 1), True)
        report.add("string", (0, 4, 1), False, "차이 L1")
        report.add("dilaton", (1, 2, 1), True)
        assert report.counts() == {"string": (1, 1), "dilaton": (1, 0)}
        assert not report.passed
        assert [f.type for f in report.failures] == [(0, 4, 1)]

    def test_ndjson_lines(self, tmp_path):
        from volume_identities import IdentityReport
        report = IdentityReport()
        report.add("symmetry", (0, 3, 1), True, witness={"L_plus": ["1/1"]})
        report.add("nonnegativity", (0, 2, 2), False, "음수 부피 -1/1")
        path = tmp_path / "findings.ndjson"
        report.write(path)

        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2
        first = json.loads(lines[0])
        assert first["check"] == "symmetry"
        assert first["type"] == [0, 3, 1]
        assert first["witness"] == {"L_plus": ["1/1"]}

    def test_empty_report_passes(self):
        from volume_identities import IdentityReport
        report = IdentityReport()
        assert report.passed
        assert report.to_ndjson() == ""


class TestStableTypes:
    """깊이별 유형 목록 테스트"""

    def test_depth_one(self):
        from volume_identities import stable_types
        assert sorted(stable_types(1)) == [(0, 1, 2), (0, 2, 1)]

    def test_depth_two_includes_torus(self):
        from volume_identities import stable_types
        types = stable_types(2)
        assert (1, 1, 1) in types
        assert (0, 2, 2) in types
        assert all(2 * g - 2 + p + m <= 2 for g, p, m in types)


class TestIndividualChecks:
    """개별 항등식 테스트"""

    def _report(self):
        from volume_identities import IdentityReport
        return IdentityReport()

    def test_string_and_dilaton(self):
        from volume_identities import check_dilaton, check_string_symbolic
        report = self._report()
        check_string_symbolic(report, 0, 3)
        check_string_symbolic(report, 1, 1)
        check_dilaton(report, 0, 3)
        check_dilaton(report, 1, 1)
        assert report.passed
        assert len(report.findings) == 4

    def test_sphere_dual_and_closed_form(self):
        from volume_identities import check_sphere_dual
        report = self._report()
        check_sphere_dual(report, 4)
        assert report.passed
        assert set(report.counts()) == {"sphere_dual", "sphere_closed_form"}

    def test_one_positive(self):
        from volume_identities import check_one_positive
        report = self._report()
        check_one_positive(report, 4)
        assert report.passed

    def test_time_inversion(self):
        from volume_identities import check_time_inversion
        from volumes import make_point
        report = self._report()
        check_time_inversion(report, 0, 2, 2, make_point([3, 1], [2, 2]))
        check_time_inversion(report, 0, 1, 3, make_point([7], [1, 2, 4]))
        assert report.passed

    def test_homogeneity(self):
        from volume_identities import check_homogeneity
        from volumes import make_point
        report = self._report()
        check_homogeneity(report, 0, 2, 2, make_point([3, 1], [2, 2]), Fraction(3, 2))
        assert report.passed
        assert report.findings[0].witness["t"] == "3/2"

    def test_evaluator_agreement(self):
        from volume_identities import check_evaluator_agreement
        from volumes import make_point
        report = self._report()
        check_evaluator_agreement(report, 1, 1, make_point([6], [6]))
        assert report.passed

    def test_symmetry_and_coefficients(self):
        from volume_identities import check_coefficients, check_symmetry
        report = self._report()
        check_symmetry(report, 1, 2)
        check_coefficients(report, 1, 2)
        assert report.passed

    def test_sign_class_symmetry(self):
        """같은 부호 경계 길이를 섞어도 Z가 그대로"""
        import random

        from volume_identities import check_sign_class_symmetry
        from volumes import make_point, random_point
        report = self._report()
        rng = random.Random(11)
        check_sign_class_symmetry(report, 0, 2, 2, make_point([5, 1], [2, 4]), rng)
        for signature in [(0, 3, 1), (0, 1, 3), (0, 2, 3), (1, 1, 1)]:
            g, n_plus, n_minus = signature
            check_sign_class_symmetry(report, g, n_plus, n_minus, random_point(n_plus, n_minus, rng), rng)
        assert report.passed
        assert report.counts()["sign_symmetry"] == (5, 0)
        assert "shuffled" in report.findings[0].witness

    def test_string_pointwise(self):
        from volume_identities import check_string_pointwise
        from volumes import make_point
        report = self._report()
        check_string_pointwise(report, 0, 1, 2, make_point([5], [2, 3]))
        assert report.passed

    def test_continuity(self):
        from volume_identities import check_continuity
        report = self._report()
        check_continuity(report)
        assert report.passed


class TestIdentityChecks:
    """깊이별 전체 실행 테스트"""

    def test_depth_two(self):
        from volume_identities import identity_checks
        report = identity_checks(2, samples=1, seed=3)
        assert report.passed
        counts = report.counts()
        for check in ("time_inversion", "homogeneity", "evaluator_agreement", "continuity"):
            assert counts[check][0] >= 1

    def test_seed_is_deterministic(self):
        from volume_identities import identity_checks
        a = identity_checks(1, samples=2, seed=9).to_ndjson()
        b = identity_checks(1, samples=2, seed=9).to_ndjson()
        assert a == b

    @pytest.mark.slow
    def test_depth_three(self):
        from volume_identities import identity_checks
        assert identity_checks(3, samples=1).passed

    @pytest.mark.slow
    def test_depth_four(self):
        from volume_identities import identity_checks
        report = identity_checks(4, samples=1)
        assert report.passed
        assert any(2 * g - 2 + p + m == 4 for g, p, m in {f.type for f in report.findings})
        assert report.counts()["sign_symmetry"][0] >= 1


class TestCutAndJoin:
    """자르기-붙이기 급수 테스트"""

    def test_series_built_from_table(self):
        from volume_identities import phi_series
        result = phi_series(2)
        assert result.cutoff == 2
        assert result.join_shift == 3
        assert result.psi != 0

    def test_residual_lines_format(self):
        from volume_identities import CutJoinReport
        report = CutJoinReport(2, 3, 0, {"t0·t1": Fraction(-1, 2)})
        assert not report.vanishes
        assert report.residual_lines() == ["t0·t1: -1/2"]

    def test_monomial_text(self):
        from volume_identities import _monomial_text
        assert _monomial_text((2, 0, 1)) == "t0^2·t2"
        assert _monomial_text((0, 0)) == "1"
