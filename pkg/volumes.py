"""
부피 다항식과 재귀식

경계 길이 변수에 대한 정확한 유리 계수 다항식(RationalPoly)과
두 가지 재귀 평가기를 제공합니다.

- f_polynomial(g, n): 음의 경계가 하나인 부피 F_{g,n}(L) (기호 계산)
- z_evaluate(g, n⁺, n⁻, P): 일반 부피 Z_{g,n⁺,n⁻}(L⁺ | L⁻) (점별 정확 계산)
- coefficient_recursion(g, n): F_{g,n}의 단항식 계수 c(α)

모든 계산은 sympy 유리수/Fraction으로 정확하게 수행합니다.
"""

import json
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, factorial
from typing import Sequence

import sympy as sp

from errors import ResidueViolation, RibbonError, UnstableType

logger = logging.getLogger(__name__)

# 구간 보간 검증 실패 시 최대 이분 깊이
MAX_BISECT_DEPTH = 12


# ============================================
# 유리 계수 다항식
# ============================================
@dataclass(frozen=True)
class RationalPoly:
    """라벨이 붙은 변수에 대한 유리 계수 다항식

    terms는 (지수 벡터, 계수) 쌍을 지수 내림차순으로 담으며 0 계수는 없습니다.
    """

    variables: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    @classmethod
    def from_expr(cls, expr, variables: Sequence[str]) -> "RationalPoly":
        symbols = sp.symbols(list(variables)) if variables else []
        poly = sp.Poly(sp.expand(expr), *symbols) if symbols else None
        if poly is None:
            value = Fraction(str(sp.Rational(expr)))
            return cls((), (((), value),) if value else ())
        items = []
        for exp, coeff in poly.terms():
            coeff = sp.Rational(coeff)
            if coeff:
                items.append((tuple(int(e) for e in exp), Fraction(int(coeff.p), int(coeff.q))))
        return cls.from_terms(variables, dict(items))

    @classmethod
    def from_terms(cls, variables: Sequence[str], terms: dict) -> "RationalPoly":
        items = sorted(
            ((tuple(e), Fraction(c)) for e, c in terms.items() if c),
            key=lambda t: (sum(t[0]), t[0]),
            reverse=True,
        )
        return cls(tuple(variables), tuple(items))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def to_expr(self):
        symbols = sp.symbols(list(self.variables)) if self.variables else []
        expr = sp.Integer(0)
        for exp, coeff in self.terms:
            monomial = sp.Rational(coeff.numerator, coeff.denominator)
            for s, e in zip(symbols, exp):
                monomial *= s**e
            expr += monomial
        return expr

    def __call__(self, *values) -> Fraction:
        if len(values) != len(self.variables):
            raise ValueError(f"변수 {len(self.variables)}개에 값 {len(values)}개가 주어졌습니다")
        values = [Fraction(v) for v in values]
        total = Fraction(0)
        for exp, coeff in self.terms:
            term = coeff
            for v, e in zip(values, exp):
                term *= v**e
            total += term
        return total

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        return RationalPoly.from_expr(self.to_expr() + other.to_expr(), self._joint(other))

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return RationalPoly.from_expr(self.to_expr() - other.to_expr(), self._joint(other))

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        return RationalPoly.from_expr(self.to_expr() * other.to_expr(), self._joint(other))

    def _joint(self, other: "RationalPoly") -> tuple[str, ...]:
        names = list(self.variables)
        names.extend(v for v in other.variables if v not in names)
        return tuple(names)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self.as_dict().get(tuple(exponent), Fraction(0))

    def pretty(self) -> str:
        """사람이 읽는 형태: "L1 + L2 + L3", "1/24·L1^3" """
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.terms:
            factors = []
            for name, e in zip(self.variables, exp):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            magnitude = abs(coeff)
            text = "·".join(factors)
            if not factors:
                text = _fraction_text(magnitude)
            elif magnitude != 1:
                text = f"{_fraction_text(magnitude)}·{text}"
            if not parts:
                parts.append(f"-{text}" if coeff < 0 else text)
            else:
                parts.append(f"- {text}" if coeff < 0 else f"+ {text}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {
            "vars": list(self.variables),
            "terms": [
                {"exp": list(e), "num": c.numerator, "den": c.denominator} for e, c in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RationalPoly":
        terms = {tuple(t["exp"]): Fraction(t["num"], t["den"]) for t in data.get("terms", [])}
        return cls.from_terms(data.get("vars", []), terms)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def _fraction_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_text(value) -> str:
    """정수도 "num/den" 형태로 출력 (예: 3 → "3/1")"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rationals(text: str) -> tuple[Fraction, ...]:
    """"3,1/2,4" 형태의 목록을 Fraction 튜플로

    Raises:
        RibbonError: 유리수로 해석할 수 없는 항목
    """
    values = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        try:
            values.append(Fraction(part))
        except (ValueError, ZeroDivisionError) as e:
            raise RibbonError(f"유리수로 읽을 수 없습니다: {part!r}") from e
    return tuple(values)


def length_names(n: int) -> tuple[str, ...]:
    return tuple(f"L{i}" for i in range(1, n + 1))


# ============================================
# 유형과 경계 점
# ============================================
def is_stable(g: int, n_plus: int, n_minus: int) -> bool:
    return g >= 0 and n_plus >= 1 and n_minus >= 1 and 2 * g - 2 + n_plus + n_minus > 0


def z_degree(g: int, n_plus: int, n_minus: int) -> int:
    """Z_{g,n⁺,n⁻}의 동차 차수 4g-3+n⁺+n⁻"""
    return 4 * g - 3 + n_plus + n_minus


def require_stable(g: int, n_plus: int, n_minus: int):
    if not is_stable(g, n_plus, n_minus):
        raise UnstableType(f"(g={g}, n⁺={n_plus}, n⁻={n_minus})는 안정 유형이 아닙니다")


@dataclass(frozen=True)
class BoundaryPoint:
    """양/음 경계 길이 (Σ L⁺ = Σ L⁻)"""

    L_plus: tuple[Fraction, ...]
    L_minus: tuple[Fraction, ...]

    def scaled(self, t) -> "BoundaryPoint":
        t = Fraction(t)
        return BoundaryPoint(tuple(t * v for v in self.L_plus), tuple(t * v for v in self.L_minus))

    def swapped(self) -> "BoundaryPoint":
        """시간 반전: 양/음 경계 교환"""
        return BoundaryPoint(self.L_minus, self.L_plus)


def make_point(L_plus: Sequence, L_minus: Sequence) -> BoundaryPoint:
    """경계 점 생성

    Raises:
        RibbonError: 길이가 0 이하
        ResidueViolation: Σ L⁺ ≠ Σ L⁻
    """
    lp = tuple(Fraction(v) for v in L_plus)
    lm = tuple(Fraction(v) for v in L_minus)
    if any(v <= 0 for v in lp + lm):
        raise RibbonError("경계 길이는 모두 양수여야 합니다")
    if sum(lp) != sum(lm):
        raise ResidueViolation(f"Σ L⁺ = {sum(lp)} 와 Σ L⁻ = {sum(lm)} 가 다릅니다")
    return BoundaryPoint(lp, lm)


def random_point(n_plus: int, n_minus: int, rng: random.Random, bound: int = 12) -> BoundaryPoint:
    """잔여 조건을 만족하는 무작위 양의 유리 경계 점"""
    while True:
        lp = [Fraction(rng.randint(1, bound * 4), rng.randint(1, 4)) for _ in range(n_plus)]
        lm = [Fraction(rng.randint(1, bound * 4), rng.randint(1, 4)) for _ in range(n_minus - 1)]
        last = sum(lp) - sum(lm)
        if last > 0:
            return BoundaryPoint(tuple(lp), tuple(lm) + (last,))


# ============================================
# F_{g,n}: 음의 경계 하나 (기호 재귀)
# ============================================
@lru_cache(maxsize=None)
def _f_expr(g: int, n: int):
    if g < 0 or n < 1 or (g, n) == (0, 1):
        return sp.Integer(0)
    if (g, n) == (0, 2):
        return sp.Integer(1)

    Ls = sp.symbols(list(length_names(n)))
    x = sp.Symbol("x")
    total = sp.Integer(0)

    if n >= 2:
        lower = _f_expr(g, n - 1)
        lower_vars = sp.symbols(list(length_names(n - 1)))
        for i, j in combinations(range(n), 2):
            rest = [Ls[k] for k in range(n) if k not in (i, j)]
            merged = Ls[i] + Ls[j]
            values = [merged] + rest
            total += merged * lower.xreplace(dict(zip(lower_vars, values)))

    if g >= 1:
        upper = _f_expr(g - 1, n + 1)
        upper_vars = sp.symbols(list(length_names(n + 1)))
        for i in range(n):
            rest = [Ls[k] for k in range(n) if k != i]
            values = [x, Ls[i] - x] + rest
            integrand = upper.xreplace(dict(zip(upper_vars, values))) * x * (Ls[i] - x)
            total += sp.Rational(1, 2) * sp.integrate(sp.expand(integrand), (x, 0, Ls[i]))

    return sp.expand(total / (2 * g - 1 + n))


@lru_cache(maxsize=None)
def f_polynomial(g: int, n: int) -> RationalPoly:
    """F_{g,n}(L_1..L_n): 음의 경계가 길이 ΣL 하나인 부피 다항식

    Raises:
        UnstableType: g < 0, n < 1 또는 (g, n) = (0, 1)
    """
    if g < 0 or n < 1 or (g, n) == (0, 1):
        raise UnstableType(f"F_{{{g},{n}}}는 정의되지 않습니다")
    poly = RationalPoly.from_expr(_f_expr(g, n), length_names(n))
    expected = 4 * g - 2 + n
    if not poly.is_homogeneous() or poly.degree() != expected:
        raise RuntimeError(f"F_{{{g},{n}}}가 {expected}차 동차식이 아닙니다")
    logger.debug(f"F_{{{g},{n}}} 계산 완료: 항 {len(poly.terms)}개")
    return poly


# ============================================
# 계수 재귀식 c(α)
# ============================================
@lru_cache(maxsize=None)
def _coefficient(g: int, alpha: tuple[int, ...]) -> Fraction:
    n = len(alpha)
    if g < 0 or n < 1 or (g, n) == (0, 1) or any(a < 0 for a in alpha):
        return Fraction(0)
    if sum(alpha) != 4 * g - 2 + n:
        return Fraction(0)
    if (g, n) == (0, 2):
        return Fraction(1)

    total = Fraction(0)
    for i, j in combinations(range(n), 2):
        merged = alpha[i] + alpha[j] - 1
        if merged < 0:
            continue
        rest = tuple(alpha[k] for k in range(n) if k not in (i, j))
        weight = comb(alpha[i] + alpha[j], alpha[i])
        # ½Σ_{i≠j} = Σ_{i<j}
        total += weight * _coefficient(g, _key((merged,) + rest))

    for i in range(n):
        rest = tuple(alpha[k] for k in range(n) if k != i)
        for x1 in range(alpha[i] - 2):
            x2 = alpha[i] - 3 - x1
            weight = Fraction(factorial(x1 + 1) * factorial(x2 + 1), factorial(alpha[i]))
            total += Fraction(1, 2) * weight * _coefficient(g - 1, _key((x1, x2) + rest))

    return total / (2 * g - 1 + n)


def _key(values) -> tuple:
    return tuple(sorted(values, reverse=True))


def partitions_of(total: int, parts: int) -> list[tuple[int, ...]]:
    """total을 parts개의 음이 아닌 정수로 나눈 내림차순 튜플 전부"""
    result = []

    def extend(prefix, remaining, slots, cap):
        if slots == 0:
            if remaining == 0:
                result.append(tuple(prefix))
            return
        for v in range(min(remaining, cap), -1, -1):
            extend(prefix + [v], remaining - v, slots - 1, v)

    extend([], total, parts, total)
    return result


@dataclass
class CoefficientTable:
    """(g, n, α 내림차순) → c(α)"""

    entries: dict

    def get(self, g: int, alpha: Sequence[int]) -> Fraction:
        alpha = _key(alpha)
        return self.entries.get((g, len(alpha), alpha), Fraction(0))

    def for_type(self, g: int, n: int) -> dict:
        return {a: c for (gg, nn, a), c in self.entries.items() if (gg, nn) == (g, n)}

    def merge(self, other: "CoefficientTable") -> "CoefficientTable":
        return CoefficientTable({**self.entries, **other.entries})

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        return {
            "entries": [
                {"g": g, "alpha": list(a), "c": rational_text(c)}
                for (g, _, a), c in sorted(self.entries.items())
            ]
        }


def coefficient_recursion(g: int, n: int, check: bool = True) -> CoefficientTable:
    """c(α) 재귀식으로 F_{g,n}의 계수표 생성

    check=True이면 f_polynomial의 계수 추출과 일치하는지 교차 확인합니다.

    Raises:
        UnstableType: (g, n)이 정의되지 않는 유형
        RuntimeError: 다항식 계수와 불일치
    """
    if g < 0 or n < 1 or (g, n) == (0, 1):
        raise UnstableType(f"c(α)는 (g={g}, n={n})에서 정의되지 않습니다")
    entries = {}
    for alpha in partitions_of(4 * g - 2 + n, n):
        value = _coefficient(g, alpha)
        if value:
            entries[(g, n, alpha)] = value
    table = CoefficientTable(entries)

    if check:
        poly = f_polynomial(g, n)
        for alpha in partitions_of(4 * g - 2 + n, n):
            if poly.coefficient(alpha) != table.get(g, alpha):
                raise RuntimeError(
                    f"c{alpha} = {table.get(g, alpha)} 가 F_{{{g},{n}}} 계수 "
                    f"{poly.coefficient(alpha)} 와 다릅니다"
                )
    return table


def coefficient_table(max_degree: int, check: bool = True) -> CoefficientTable:
    """|α| = 4g-2+n ≤ max_degree 인 모든 유형의 계수표"""
    table = CoefficientTable({})
    for g in range(max_degree // 4 + 2):
        for n in range(1, max_degree + 3):
            if (g, n) == (0, 1) or 4 * g - 2 + n > max_degree:
                continue
            table = table.merge(coefficient_recursion(g, n, check=check))
    return table


# ============================================
# Z_{g,n⁺,n⁻}: 일반 부피 (점별 재귀)
# ============================================
@lru_cache(maxsize=None)
def _z(g: int, lp: tuple, lm: tuple) -> Fraction:
    n_plus, n_minus = len(lp), len(lm)
    if not is_stable(g, n_plus, n_minus) or any(v <= 0 for v in lp + lm):
        return Fraction(0)
    if g == 0 and (n_plus, n_minus) in ((2, 1), (1, 2)):
        return Fraction(1)

    total = Fraction(0)

    # 양의 경계 하나 + 음의 경계 하나를 두른 바지
    for i, a in enumerate(lp):
        rest = lp[:i] + lp[i + 1:]
        for j, b in enumerate(lm):
            if a > b:
                total += (a - b) * _z(g, _key(rest + (a - b,)), lm[:j] + lm[j + 1:])

    # 양의 경계 둘을 두른 바지
    for i, j in combinations(range(n_plus), 2):
        merged = lp[i] + lp[j]
        rest = tuple(lp[k] for k in range(n_plus) if k not in (i, j))
        total += merged * _z(g, _key(rest + (merged,)), lm)

    for i, a in enumerate(lp):
        rest = lp[:i] + lp[i + 1:]
        # 비분리 곡선 둘 (종수 감소)
        if g >= 1:
            total += Fraction(1, 2) * _integrate_split(g - 1, a, rest, lm)
        # 분리 곡선 둘
        for g1 in range(g + 1):
            for side_p in product((0, 1), repeat=len(rest)):
                I = tuple(v for v, s in zip(rest, side_p) if s == 0)
                J = tuple(v for v, s in zip(rest, side_p) if s == 1)
                for side_m in product((0, 1), repeat=n_minus):
                    K = tuple(v for v, s in zip(lm, side_m) if s == 0)
                    M = tuple(v for v, s in zip(lm, side_m) if s == 1)
                    if not K or not M:
                        continue
                    x1, x2 = sum(K) - sum(I), sum(M) - sum(J)
                    if x1 <= 0 or x2 <= 0:
                        continue
                    left = _z(g1, _key(I + (x1,)), K)
                    if not left:
                        continue
                    right = _z(g - g1, _key(J + (x2,)), M)
                    total += Fraction(1, 2) * x1 * x2 * left * right

    return total / (2 * g - 2 + n_plus + n_minus)


def _integrate_split(g: int, length: Fraction, rest: tuple, lm: tuple) -> Fraction:
    """∫₀^L Z_{g}(x, L-x, rest | L⁻) x(L-x) dx 를 방 벽으로 나누어 정확히 계산"""
    n_plus, n_minus = len(rest) + 2, len(lm)
    if not is_stable(g, n_plus, n_minus):
        return Fraction(0)

    walls = {Fraction(0), length}
    for b_mask in product((0, 1), repeat=n_minus):
        b_sum = sum((v for v, s in zip(lm, b_mask) if s), Fraction(0))
        for a_mask in product((0, 1), repeat=len(rest)):
            s = b_sum - sum((v for v, t in zip(rest, a_mask) if t), Fraction(0))
            for x in (s, length - s):
                if 0 < x < length:
                    walls.add(x)
    walls = sorted(walls)

    degree = z_degree(g, n_plus, n_minus) + 2

    def integrand(x: Fraction) -> Fraction:
        return _z(g, _key(rest + (x, length - x)), lm) * x * (length - x)

    total = Fraction(0)
    for a, b in zip(walls, walls[1:]):
        total += _interval_integral(integrand, a, b, degree, 0)
    return total


def _interval_integral(func, a: Fraction, b: Fraction, degree: int, depth: int) -> Fraction:
    """구간 (a, b) 내부 점에서 degree차 보간 후 추가 2점으로 검증하고 적분"""
    X = sp.Symbol("x")
    steps = degree + 2
    nodes = [a + (b - a) * Fraction(k, steps) for k in range(1, degree + 2)]
    points = [(sp.Rational(v.numerator, v.denominator), _sym(func(v))) for v in nodes]
    poly = sp.interpolate(points, X) if len(points) > 1 else points[0][1]

    checks = [a + (b - a) * Fraction(2 * k + 1, 2 * steps) for k in (0, degree)]
    for v in checks:
        if sp.Rational(sp.sympify(poly).subs(X, _sym(v))) != _sym(func(v)):
            if depth >= MAX_BISECT_DEPTH:
                raise RuntimeError(f"구간 [{a}, {b}]에서 다항식 보간이 검증되지 않습니다")
            logger.debug(f"보간 불일치, 구간 이분: [{a}, {b}] (깊이 {depth})")
            mid = (a + b) / 2
            return _interval_integral(func, a, mid, degree, depth + 1) + _interval_integral(
                func, mid, b, degree, depth + 1
            )

    value = sp.Rational(sp.integrate(poly, (X, _sym(a), _sym(b))))
    return Fraction(int(value.p), int(value.q))


def _sym(v: Fraction):
    return sp.Rational(v.numerator, v.denominator)


def z_evaluate(g: int, n_plus: int, n_minus: int, point: BoundaryPoint) -> Fraction:
    """Z_{g,n⁺,n⁻}(L⁺ | L⁻)를 재귀식으로 정확히 계산

    Raises:
        UnstableType: 안정하지 않은 유형
        ResidueViolation: Σ L⁺ ≠ Σ L⁻
        RibbonError: 길이 개수 불일치 또는 0 이하의 길이
    """
    require_stable(g, n_plus, n_minus)
    if len(point.L_plus) != n_plus or len(point.L_minus) != n_minus:
        raise RibbonError(
            f"경계 길이 개수 ({len(point.L_plus)}, {len(point.L_minus)})가 "
            f"유형 ({n_plus}, {n_minus})와 맞지 않습니다"
        )
    point = make_point(point.L_plus, point.L_minus)
    return _z(g, _key(point.L_plus), _key(point.L_minus))


def clear_caches():
    """메모 테이블 초기화 (테스트용)"""
    for cached in (_f_expr, f_polynomial, _coefficient, _z):
        cached.cache_clear()
