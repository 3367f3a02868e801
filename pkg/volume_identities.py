"""
부피 항등식 검사

F_{g,n}, Z_{g,n⁺,n⁻}가 만족해야 하는 항등식들을 깊이 2g-2+n⁺+n⁻ ≤ D 범위에서
정확히 검사하고, 결과를 NDJSON 발견 사항(finding) 목록으로 보고합니다.
위반은 예외가 아니라 데이터입니다.

검사 항목:
    string, dilaton, time_inversion, sphere_dual, sphere_closed_form,
    one_positive, coefficients, evaluator_agreement, homogeneity,
    symmetry, sign_symmetry, continuity, nonnegativity
"""

import json
import logging
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial
from pathlib import Path
from typing import Callable, Sequence

import sympy as sp

from volumes import (
    BoundaryPoint,
    CoefficientTable,
    coefficient_recursion,
    coefficient_table,
    f_polynomial,
    is_stable,
    length_names,
    random_point,
    rational_text,
    z_degree,
    z_evaluate,
)

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 3


# ============================================
# 발견 사항
# ============================================
@dataclass
class Finding:
    check: str
    type: tuple
    passed: bool
    detail: str = ""
    witness: dict = field(default_factory=dict)

    def to_json(self) -> str:
        data = asdict(self)
        data["type"] = list(self.type)
        return json.dumps(data, ensure_ascii=False)


@dataclass
class IdentityReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def failures(self) -> list[Finding]:
        return [f for f in self.findings if not f.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def add(self, check: str, type_, passed: bool, detail: str = "", witness: dict | None = None):
        self.findings.append(Finding(check, tuple(type_), bool(passed), detail, witness or {}))
        if not passed:
            logger.warning(f"항등식 위반: {check} {type_} {detail}")

    def counts(self) -> dict:
        result = {}
        for f in self.findings:
            ok, bad = result.get(f.check, (0, 0))
            result[f.check] = (ok + f.passed, bad + (not f.passed))
        return result

    def to_ndjson(self) -> str:
        return "\n".join(f.to_json() for f in self.findings) + ("\n" if self.findings else "")

    def write(self, path: str | Path):
        Path(path).write_text(self.to_ndjson(), encoding="utf-8")


def _point_witness(point: BoundaryPoint) -> dict:
    return {
        "L_plus": [rational_text(v) for v in point.L_plus],
        "L_minus": [rational_text(v) for v in point.L_minus],
    }


def stable_types(depth: int) -> list[tuple[int, int, int]]:
    """2g-2+n⁺+n⁻ ≤ depth 인 안정 유형"""
    result = []
    for g in range(depth // 2 + 2):
        for n_plus in range(1, depth + 3):
            for n_minus in range(1, depth + 3):
                if is_stable(g, n_plus, n_minus) and 2 * g - 2 + n_plus + n_minus <= depth:
                    result.append((g, n_plus, n_minus))
    return result


# ============================================
# 보조: 벽 근처 일변수 보간
# ============================================
def _signed_sums(values_plus: Sequence[Fraction], values_minus: Sequence[Fraction]) -> set:
    sums = set()
    for a in product((0, 1), repeat=len(values_plus)):
        for b in product((0, 1), repeat=len(values_minus)):
            sums.add(
                sum((v for v, s in zip(values_plus, a) if s), Fraction(0))
                - sum((v for v, s in zip(values_minus, b) if s), Fraction(0))
            )
    return sums


def _safe_radius(point: BoundaryPoint, rate: int) -> Fraction:
    nonzero = [abs(s) for s in _signed_sums(point.L_plus, point.L_minus) if s]
    return min(nonzero) / (2 * rate) if nonzero else Fraction(1, 2)


def _extrapolate(func: Callable[[Fraction], Fraction], a: Fraction, b: Fraction, degree: int, at: Fraction):
    """(a, b) 내부 degree+1 점 보간 + 2점 검증 후 at 에서의 값 (검증 실패 시 None)"""
    X = sp.Symbol("t")
    steps = degree + 3
    nodes = [a + (b - a) * Fraction(k, steps) for k in range(1, degree + 2)]
    pts = [(sp.Rational(str(v)), sp.Rational(str(func(v)))) for v in nodes]
    poly = sp.interpolate(pts, X) if len(pts) > 1 else pts[0][1]
    for v in (a + (b - a) * Fraction(degree + 2, steps), a + (b - a) * Fraction(1, 2 * steps)):
        if sp.Rational(sp.sympify(poly).subs(X, sp.Rational(str(v)))) != sp.Rational(str(func(v))):
            return None
    value = sp.Rational(sp.sympify(poly).subs(X, sp.Rational(str(at))))
    return Fraction(int(value.p), int(value.q))


# ============================================
# 개별 검사
# ============================================
def check_string_symbolic(report: IdentityReport, g: int, n: int):
    """F_{g,n+1}(0, L) = (ΣL) F_{g,n}(L)"""
    Ls = sp.symbols(list(length_names(n + 1)))
    upper = f_polynomial(g, n + 1).to_expr().subs(Ls[0], 0)
    lower_vars = sp.symbols(list(length_names(n)))
    lower = f_polynomial(g, n).to_expr().xreplace(dict(zip(lower_vars, Ls[1:])))
    diff = sp.expand(upper - sum(Ls[1:]) * lower)
    report.add("string", (g, n + 1, 1), diff == 0, "" if diff == 0 else f"차이 {diff}")


def check_string_pointwise(report: IdentityReport, g: int, n_plus: int, n_minus: int, point: BoundaryPoint):
    """Z_{g,n⁺+1,n⁻}(0, L⁺ | L⁻) = (Σ L⁻) Z_{g,n⁺,n⁻}(L⁺ | L⁻)

    길이 0은 원뿔 밖이므로 (ε, L⁺ | L⁻ + ε e_1)에서 ε → 0 으로 외삽합니다.
    """
    expected = sum(point.L_minus) * z_evaluate(g, n_plus, n_minus, point)
    radius = _safe_radius(point, 2)

    def along(eps: Fraction) -> Fraction:
        lm = (point.L_minus[0] + eps,) + point.L_minus[1:]
        return z_evaluate(g, n_plus + 1, n_minus, BoundaryPoint((eps,) + point.L_plus, lm))

    value = _extrapolate(along, Fraction(0), radius, z_degree(g, n_plus + 1, n_minus), Fraction(0))
    ok = value is not None and value == expected
    report.add(
        "string",
        (g, n_plus + 1, n_minus),
        ok,
        "" if ok else f"외삽값 {value} ≠ {expected}",
        _point_witness(point),
    )


def check_dilaton(report: IdentityReport, g: int, n: int):
    """∂F_{g,n+1}/∂L_1 (0, L) = (2g+n-1) F_{g,n}(L)"""
    Ls = sp.symbols(list(length_names(n + 1)))
    upper = sp.diff(f_polynomial(g, n + 1).to_expr(), Ls[0]).subs(Ls[0], 0)
    lower_vars = sp.symbols(list(length_names(n)))
    lower = f_polynomial(g, n).to_expr().xreplace(dict(zip(lower_vars, Ls[1:])))
    diff = sp.expand(upper - (2 * g + n - 1) * lower)
    report.add("dilaton", (g, n + 1, 1), diff == 0, "" if diff == 0 else f"차이 {diff}")


def check_time_inversion(report: IdentityReport, g: int, n_plus: int, n_minus: int, point: BoundaryPoint):
    left = z_evaluate(g, n_plus, n_minus, point)
    right = z_evaluate(g, n_minus, n_plus, point.swapped())
    report.add(
        "time_inversion",
        (g, n_plus, n_minus),
        left == right,
        "" if left == right else f"{left} ≠ {right}",
        _point_witness(point),
    )


def check_sphere_dual(report: IdentityReport, n: int):
    """(n-1) F_{0,n} = Σ_{i<j} (L_i+L_j) F_{0,n-1}(L_i+L_j, 나머지) 와 F_{0,n} = (ΣL)^{n-2}"""
    Ls = sp.symbols(list(length_names(n)))
    lower_vars = sp.symbols(list(length_names(n - 1)))
    lower = f_polynomial(0, n - 1).to_expr() if n >= 3 else sp.Integer(0)
    rhs = sp.Integer(0)
    for i, j in combinations(range(n), 2):
        rest = [Ls[k] for k in range(n) if k not in (i, j)]
        rhs += (Ls[i] + Ls[j]) * lower.xreplace(dict(zip(lower_vars, [Ls[i] + Ls[j]] + rest)))
    F = f_polynomial(0, n).to_expr()
    diff = sp.expand((n - 1) * F - rhs)
    report.add("sphere_dual", (0, n, 1), diff == 0, "" if diff == 0 else f"차이 {diff}")
    closed = sp.expand(F - sum(Ls) ** (n - 2))
    report.add("sphere_closed_form", (0, n, 1), closed == 0, "" if closed == 0 else f"차이 {closed}")


def check_one_positive(report: IdentityReport, n: int):
    """양의 경계 하나인 구면:
    (n-1)F_{0,n}(L) = Σ_j (|L|-L_j) F_{0,n-1}(L∖j) + ½ Σ_{K⊔M, |K|,|M|≥2} |L_K||L_M| F(L_K) F(L_M)
    """
    Ls = sp.symbols(list(length_names(n)))
    total = sum(Ls)

    def F(k: int, values):
        expr = f_polynomial(0, k).to_expr()
        return expr.xreplace(dict(zip(sp.symbols(list(length_names(k))), values)))

    rhs = sp.Integer(0)
    for j in range(n):
        rest = [Ls[k] for k in range(n) if k != j]
        rhs += (total - Ls[j]) * F(n - 1, rest)
    for mask in product((0, 1), repeat=n):
        K = [Ls[k] for k in range(n) if mask[k] == 0]
        M = [Ls[k] for k in range(n) if mask[k] == 1]
        if len(K) >= 2 and len(M) >= 2:
            rhs += sp.Rational(1, 2) * sum(K) * sum(M) * F(len(K), K) * F(len(M), M)
    diff = sp.expand((n - 1) * f_polynomial(0, n).to_expr() - rhs)
    report.add("one_positive", (0, 1, n), diff == 0, "" if diff == 0 else f"차이 {diff}")


def check_coefficients(report: IdentityReport, g: int, n: int):
    try:
        coefficient_recursion(g, n, check=True)
        report.add("coefficients", (g, n, 1), True)
    except RuntimeError as e:
        report.add("coefficients", (g, n, 1), False, str(e))


def check_evaluator_agreement(report: IdentityReport, g: int, n: int, point: BoundaryPoint):
    poly_value = f_polynomial(g, n)(*point.L_plus)
    z_value = z_evaluate(g, n, 1, point)
    report.add(
        "evaluator_agreement",
        (g, n, 1),
        poly_value == z_value,
        "" if poly_value == z_value else f"F={poly_value}, Z={z_value}",
        _point_witness(point),
    )


def check_homogeneity(report: IdentityReport, g: int, n_plus: int, n_minus: int, point: BoundaryPoint, t: Fraction):
    degree = z_degree(g, n_plus, n_minus)
    left = z_evaluate(g, n_plus, n_minus, point.scaled(t))
    right = t**degree * z_evaluate(g, n_plus, n_minus, point)
    witness = _point_witness(point)
    witness["t"] = rational_text(t)
    report.add(
        "homogeneity",
        (g, n_plus, n_minus),
        left == right,
        "" if left == right else f"Z(tL)={left} ≠ t^{degree}Z(L)={right}",
        witness,
    )


def check_symmetry(report: IdentityReport, g: int, n: int):
    """F_{g,n}가 변수 치환에 대해 불변"""
    poly = f_polynomial(g, n)
    base = poly.as_dict()
    ok = True
    for perm in permutations(range(n)):
        moved = {tuple(e[perm[k]] for k in range(n)): c for e, c in base.items()}
        if moved != base:
            ok = False
            break
    report.add("symmetry", (g, n, 1), ok)


def check_sign_class_symmetry(
    report: IdentityReport, g: int, n_plus: int, n_minus: int, point: BoundaryPoint, rng: random.Random
):
    """같은 부호 경계끼리 길이를 섞어도 Z 값이 같음"""
    plus, minus = list(point.L_plus), list(point.L_minus)
    rng.shuffle(plus)
    rng.shuffle(minus)
    shuffled = BoundaryPoint(tuple(plus), tuple(minus))
    left = z_evaluate(g, n_plus, n_minus, point)
    right = z_evaluate(g, n_plus, n_minus, shuffled)
    witness = _point_witness(point)
    witness["shuffled"] = _point_witness(shuffled)
    report.add(
        "sign_symmetry",
        (g, n_plus, n_minus),
        left == right,
        "" if left == right else f"{left} ≠ {right}",
        witness,
    )


def check_nonnegativity(report: IdentityReport, g: int, n_plus: int, n_minus: int, point: BoundaryPoint):
    value = z_evaluate(g, n_plus, n_minus, point)
    report.add(
        "nonnegativity",
        (g, n_plus, n_minus),
        value >= 0,
        "" if value >= 0 else f"음수 부피 {value}",
        _point_witness(point),
    )


def check_continuity(report: IdentityReport, wall_point: BoundaryPoint | None = None):
    """(0,2,2)에서 벽 L1⁺ = L1⁻ 양쪽의 다항식 조각이 벽에서 일치"""
    wall_point = wall_point or BoundaryPoint((Fraction(5), Fraction(3)), (Fraction(5), Fraction(3)))
    radius = _safe_radius(wall_point, 1)
    degree = z_degree(0, 2, 2)
    base = wall_point

    def along(t: Fraction) -> Fraction:
        lp = (base.L_plus[0] + t,) + base.L_plus[1:]
        lm = (base.L_minus[0],) + (base.L_minus[1] + t,)
        return z_evaluate(0, 2, 2, BoundaryPoint(lp, lm))

    left = _extrapolate(along, -radius, Fraction(0), degree, Fraction(0))
    right = _extrapolate(along, Fraction(0), radius, degree, Fraction(0))
    at_wall = along(Fraction(0))
    ok = left is not None and left == right == at_wall
    report.add(
        "continuity",
        (0, 2, 2),
        ok,
        "" if ok else f"왼쪽 {left}, 오른쪽 {right}, 벽 {at_wall}",
        _point_witness(wall_point),
    )


# ============================================
# 전체 실행
# ============================================
def identity_checks(depth: int, samples: int = DEFAULT_SAMPLES, seed: int = 20240601) -> IdentityReport:
    """깊이 depth 이하의 모든 유형에 대해 항등식 검사

    Args:
        depth: 2g-2+n⁺+n⁻ 상한
        samples: 점별 검사에서 유형마다 뽑는 무작위 점 개수
        seed: 무작위 점 시드

    Returns:
        IdentityReport (위반은 failures 에 기록)
    """
    rng = random.Random(seed)
    report = IdentityReport()
    types = stable_types(depth)
    logger.info(f"항등식 검사: 깊이 {depth}, 유형 {len(types)}개, 유형당 {samples}점")

    for g, n_plus, n_minus in types:
        if n_minus == 1:
            n = n_plus
            check_coefficients(report, g, n)
            check_symmetry(report, g, n)
            if is_stable(g, n + 1, 1) and 2 * g - 1 + n + 1 <= depth:
                check_string_symbolic(report, g, n)
                check_dilaton(report, g, n)
            if g == 0 and n >= 3:
                check_sphere_dual(report, n)
                check_one_positive(report, n)

        for _ in range(samples):
            point = random_point(n_plus, n_minus, rng)
            check_time_inversion(report, g, n_plus, n_minus, point)
            check_homogeneity(report, g, n_plus, n_minus, point, Fraction(rng.randint(2, 5), rng.randint(1, 3)))
            check_nonnegativity(report, g, n_plus, n_minus, point)
            check_sign_class_symmetry(report, g, n_plus, n_minus, point, rng)
            if n_minus == 1:
                check_evaluator_agreement(report, g, n_plus, point)
            elif 2 * g - 1 + n_plus + n_minus <= depth:
                check_string_pointwise(report, g, n_plus, n_minus, point)

    if depth >= 2:
        check_continuity(report)
    return report


# ============================================
# 자르기-붙이기 급수
# ============================================
@dataclass
class CutJoinReport:
    cutoff: int
    join_shift: int
    psi: object
    residual: dict

    @property
    def vanishes(self) -> bool:
        return not self.residual

    def residual_lines(self) -> list[str]:
        return [f"{monomial}: {rational_text(c)}" for monomial, c in sorted(self.residual.items())]


def _monomial_text(exp: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(exp):
        if e == 1:
            parts.append(f"t{i}")
        elif e > 1:
            parts.append(f"t{i}^{e}")
    return "·".join(parts) or "1"


def phi_series(cutoff: int, table: CoefficientTable | None = None, join_shift: int = 3) -> CutJoinReport:
    """계수표로 ψ = Σ (1/n!) Σ_α c(α) Π α_k! t_{α_k} 를 만들고 자르기-붙이기 잔차 계산

    Σ_i (i+1) t_i ∂_i ψ
        = Σ_{a,b} (a+b) t_a t_b ∂_{a+b-1} ψ
        + Σ_{a,b} (a+1)(b+1) t_{a+b+join_shift} ∂_a ∂_b ψ + t_0²

    잔차는 지수 합 |α| ≤ cutoff 인 단항식으로 자릅니다.
    """
    if table is None:
        table = coefficient_table(cutoff)
    size = cutoff + max(join_shift, 0) + 4
    t = sp.symbols(f"t0:{size}")

    psi = sp.Integer(0)
    for (g, n, alpha), c in table.entries.items():
        if sum(alpha) > cutoff:
            continue
        mult = {}
        for a in alpha:
            mult[a] = mult.get(a, 0) + 1
        weight = sp.Integer(1)
        for a in alpha:
            weight *= factorial(a) * t[a]
        for m in mult.values():
            weight /= factorial(m)
        psi += sp.Rational(c.numerator, c.denominator) * weight

    lhs = sum((i + 1) * t[i] * sp.diff(psi, t[i]) for i in range(size))
    rhs = t[0] ** 2
    for a in range(size):
        for b in range(size):
            k = a + b - 1
            if 0 <= k < size:
                rhs += (a + b) * t[a] * t[b] * sp.diff(psi, t[k])
            j = a + b + join_shift
            if 0 <= j < size:
                rhs += (a + 1) * (b + 1) * t[j] * sp.diff(psi, t[a], t[b])

    residual = {}
    difference = sp.expand(lhs - rhs)
    if difference != 0:
        for exp, coeff in sp.Poly(difference, *t).terms():
            if sum(i * e for i, e in enumerate(exp)) <= cutoff and coeff != 0:
                value = sp.Rational(coeff)
                residual[_monomial_text(exp)] = Fraction(int(value.p), int(value.q))
    if residual:
        logger.warning(f"자르기-붙이기 잔차 (shift {join_shift:+d}): 0이 아닌 계수 {len(residual)}개")
    return CutJoinReport(cutoff, join_shift, psi, residual)
