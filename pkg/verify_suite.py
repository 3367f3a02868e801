"""
검증 스위트

기저 부피 → 닫힌 형태 → 오라클 비교 → 곡선/분해 검사 → 항등식 → 자르기-붙이기
순서로 전체 검증 파이프라인을 실행합니다. 각 단계의 결과는 발견 사항(finding)으로
기록되고, 로그 파일과 NDJSON 보고서가 남습니다.
"""

import logging
import os
import random
import time
from datetime import datetime
from fractions import Fraction
from itertools import permutations, product
from pathlib import Path

from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from catalog_cache import cached_catalog
from curve_surgery import (
    acyclic_decompose,
    bounded_pants_classify,
    gamma_plus,
    hamiltonian_check,
    linear_data,
    pairing,
    random_admissible_curves,
)
from enumeration import hurwitz_table, volume_oracle
from ribbon_core import is_four_valent, relabel, topology, unit_metric
from stable_graphs import is_acyclic, structure_key
from volume_identities import IdentityReport, identity_checks, phi_series
from volumes import BoundaryPoint, f_polynomial, random_point, z_evaluate

load_dotenv()

console = Console()

# ============================================
# 디렉토리 및 설정
# ============================================
LOGS_DIR = Path(os.getenv("RIBBON_LOG_DIR", "logs"))
DEFAULT_SEED = int(os.getenv("RIBBON_SEED", "20240601"))

# 오라클 비교 대상 유형
ORACLE_TYPES = [(0, 2, 1), (0, 1, 2), (0, 2, 2), (0, 3, 1), (0, 1, 3), (1, 1, 1)]

# 곡선/분해 검사 대상 유형
CURVE_TYPES = ORACLE_TYPES + [(1, 2, 1)]

# 닫힌 형태: (g, n) → L ↦ 값
CLOSED_FORMS = {
    (0, 2): lambda L: Fraction(1),
    (0, 3): lambda L: sum(L),
    (0, 4): lambda L: sum(L) ** 2,
    (1, 1): lambda L: L[0] ** 3 / 24,
}

MIN_RANDOM_CURVES = 20

# 항등식 검사 깊이 상한 (기본 검증 깊이)
IDENTITY_DEPTH = 4


def _setup_logger(log_path: Path) -> logging.Logger:
    """파일 + 콘솔 로거 설정

    Args:
        log_path: 로그 파일 경로

    Returns:
        설정된 Logger 인스턴스
    """
    logger = logging.getLogger("verify_suite")
    logger.setLevel(logging.DEBUG)
    logger.handlers.clear()

    # 파일 핸들러
    file_handler = logging.FileHandler(log_path, encoding="utf-8")
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(
        logging.Formatter("%(asctime)s [%(levelname)s] %(message)s")
    )
    logger.addHandler(file_handler)

    # 콘솔 핸들러 (Rich)
    console_handler = RichHandler(
        console=console,
        show_path=False,
        rich_tracebacks=True,
    )
    console_handler.setLevel(logging.INFO)
    logger.addHandler(console_handler)

    return logger


def _within_depth(type_, depth: int) -> bool:
    g, n_plus, n_minus = type_
    return 2 * g - 2 + n_plus + n_minus <= depth


def _integral_points(n_plus: int, n_minus: int, max_entry: int):
    """성분이 max_entry 이하인 잔여 조건 만족 정수 점"""
    for lp in product(range(1, max_entry + 1), repeat=n_plus):
        for head in product(range(1, max_entry + 1), repeat=n_minus - 1):
            last = sum(lp) - sum(head)
            if 1 <= last <= max_entry:
                yield BoundaryPoint(
                    tuple(Fraction(v) for v in lp), tuple(Fraction(v) for v in head + (last,))
                )


# ============================================
# 파이프라인 단계별 함수
# ============================================
def step_base_volumes(report: IdentityReport, logger: logging.Logger) -> bool:
    """1단계: Z_{0,2,1} = Z_{0,1,2} = 1 (재귀식과 오라클)

    Returns:
        성공 여부
    """
    try:
        for type_, point in [
            ((0, 2, 1), BoundaryPoint((Fraction(3), Fraction(5)), (Fraction(8),))),
            ((0, 1, 2), BoundaryPoint((Fraction(7),), (Fraction(2), Fraction(5)))),
        ]:
            value = z_evaluate(*type_, point)
            oracle = volume_oracle(*type_, point.L_plus, point.L_minus, cached_catalog(*type_))
            ok = value == oracle == 1
            report.add("base_volume", type_, ok, f"재귀 {value}, 오라클 {oracle}")
        logger.info("기저 부피 확인 완료")
        return all(f.passed for f in report.findings if f.check == "base_volume")
    except Exception as e:
        logger.error(f"기저 부피 확인 실패: {e}")
        return False


def step_closed_forms(report: IdentityReport, logger: logging.Logger, rng: random.Random) -> bool:
    """2단계: F_{0,2}, F_{0,3}, F_{0,4}, F_{1,1} 닫힌 형태를 네 가지 방법으로 확인"""
    try:
        for (g, n), closed in CLOSED_FORMS.items():
            poly = f_polynomial(g, n)
            type_ = (g, n, 1)

            for _ in range(10):
                point = random_point(n, 1, rng)
                expected = closed(point.L_plus)
                report.add("closed_form_poly", type_, poly(*point.L_plus) == expected)
                report.add("closed_form_z", type_, z_evaluate(g, n, 1, point) == expected)

            catalog = cached_catalog(g, n, 1)
            for _ in range(5):
                lp = tuple(Fraction(rng.randint(1, 9)) for _ in range(n))
                oracle = volume_oracle(g, n, 1, lp, (sum(lp),), catalog)
                report.add("closed_form_oracle", type_, oracle == closed(lp), f"L⁺={lp}, 오라클 {oracle}")

            rebuilt = hurwitz_table(g, n, catalog).reconstruct(g, n)
            report.add("closed_form_hurwitz", type_, rebuilt == poly, rebuilt.pretty())
        logger.info("닫힌 형태 확인 완료")
        return all(f.passed for f in report.findings if f.check.startswith("closed_form"))
    except Exception as e:
        logger.error(f"닫힌 형태 확인 실패: {e}")
        return False


def step_oracle(report: IdentityReport, logger: logging.Logger, depth: int, max_entry: int, rng: random.Random) -> bool:
    """3단계: z_evaluate = volume_oracle (정수 점 전수)"""
    try:
        for type_ in ORACLE_TYPES + [(1, 2, 1)]:
            if not _within_depth(type_, depth):
                continue
            catalog = cached_catalog(*type_)
            if type_ == (1, 2, 1):
                points = []
                for _ in range(3):
                    lp = (Fraction(rng.randint(1, max_entry)), Fraction(rng.randint(1, max_entry)))
                    points.append(BoundaryPoint(lp, (sum(lp),)))
            else:
                points = list(_integral_points(type_[1], type_[2], max_entry))
            mismatches = 0
            for point in points:
                value = z_evaluate(*type_, point)
                oracle = volume_oracle(*type_, point.L_plus, point.L_minus, catalog)
                if value != oracle:
                    mismatches += 1
                    report.add(
                        "oracle",
                        type_,
                        False,
                        f"재귀 {value} ≠ 오라클 {oracle}",
                        {"L_plus": [str(v) for v in point.L_plus], "L_minus": [str(v) for v in point.L_minus]},
                    )
            if not mismatches:
                report.add("oracle", type_, True, f"{len(points)}개 점 일치")
            logger.info(f"오라클 비교 {type_}: {len(points)}개 점, 불일치 {mismatches}개")
        return all(f.passed for f in report.findings if f.check == "oracle")
    except Exception as e:
        logger.error(f"오라클 비교 실패: {e}")
        return False


def step_curves(report: IdentityReport, logger: logging.Logger, depth: int, rng: random.Random) -> bool:
    """4단계: 바지 개수, 비순환 분해, 선형 차원, 해밀토니안 항등식"""
    try:
        random_curves = 0
        for type_ in CURVE_TYPES:
            if not _within_depth(type_, depth):
                continue
            g, n_plus, n_minus = type_
            n = n_plus + n_minus
            for entry in cached_catalog(*type_):
                og = entry.graph
                V = len(og.graph.vertices)
                ok = is_four_valent(og.graph) and topology(og.graph).genus == g
                report.add("catalog_entry", type_, ok)

                lin = linear_data(og)
                dims_ok = (
                    lin.rank_dl == n - 1
                    and len(lin.kernel_basis) == 4 * g - 3 + n
                    and len(lin.hat_basis) == V - 1
                    and len(lin.w_basis) == len(og.graph.edges) + 1
                )
                pair = pairing(og, lin)
                report.add("linear_dims", type_, dims_ok and pair.kernel_is_hat, str(lin.dims))
                report.add("pairing_variants", type_, pair.variants_agree)

                if V >= 2:
                    pants = [bounded_pants_classify(og, v) for v in range(V)]
                    report.add("bounded_pants", type_, len(pants) == 2 * g - 2 + n, str([p.kind for p in pants]))
                    for v in range(V):
                        ok = hamiltonian_check(og, gamma_plus(og, v), lin, m=unit_metric(og.graph))
                        report.add("hamiltonian_gamma", type_, ok)

                for order in permutations(range(V)):
                    dec = acyclic_decompose(og, list(order))
                    acyclic, _ = is_acyclic(dec.stable)
                    minimal = all(len(p.graph.graph.vertices) == 1 for p in dec.pieces)
                    perm = list(range(og.n_darts))
                    rng.shuffle(perm)
                    moved = relabel(og, perm)
                    moved_order = [moved.graph.vertex_of[perm[og.graph.vertices[v][0]]] for v in order]
                    again = acyclic_decompose(moved, moved_order)
                    unique = structure_key(again.stable) == structure_key(dec.stable)
                    report.add("acyclic_decomposition", type_, acyclic and minimal and unique, str(order))

                for curve in random_admissible_curves(og, 3, rng):
                    random_curves += 1
                    report.add("hamiltonian_random", type_, hamiltonian_check(og, curve, lin))

        report.add("hamiltonian_random_count", (), random_curves >= MIN_RANDOM_CURVES, f"{random_curves}개")
        logger.info(f"곡선 검사 완료 (무작위 곡선 {random_curves}개)")
        checks = {
            "catalog_entry",
            "linear_dims",
            "pairing_variants",
            "bounded_pants",
            "hamiltonian_gamma",
            "acyclic_decomposition",
            "hamiltonian_random",
        }
        return all(f.passed for f in report.findings if f.check in checks)
    except Exception as e:
        logger.error(f"곡선 검사 실패: {e}")
        return False


def step_identities(report: IdentityReport, logger: logging.Logger, depth: int, seed: int) -> bool:
    """5단계: 항등식 검사 (깊이 4 이하)"""
    try:
        identities = identity_checks(min(depth, IDENTITY_DEPTH), seed=seed)
        report.findings.extend(identities.findings)
        logger.info(f"항등식 검사: {len(identities.findings)}건, 위반 {len(identities.failures)}건")
        return identities.passed
    except Exception as e:
        logger.error(f"항등식 검사 실패: {e}")
        return False


def step_cut_and_join(report: IdentityReport, logger: logging.Logger) -> bool:
    """6단계: 자르기-붙이기 잔차 보고 (|μ| ≤ 6)

    잔차는 발견 사항으로만 기록하며 단계 실패로 보지 않습니다.
    """
    try:
        for shift in (3, -3):
            result = phi_series(6, join_shift=shift)
            report.add(
                "cut_and_join",
                (shift,),
                result.vanishes,
                "; ".join(result.residual_lines()[:10]),
            )
            logger.info(f"자르기-붙이기 (shift {shift:+d}): 잔차 항 {len(result.residual)}개")
        return True
    except Exception as e:
        logger.error(f"자르기-붙이기 계산 실패: {e}")
        return False


# ============================================
# 통합 파이프라인
# ============================================
STEPS = [
    {"name": "기저 부피", "icon": "🧱"},
    {"name": "닫힌 형태", "icon": "📐"},
    {"name": "오라클 비교", "icon": "🔍"},
    {"name": "곡선과 분해", "icon": "✂️"},
    {"name": "항등식", "icon": "🧮"},
    {"name": "자르기-붙이기", "icon": "🔗"},
    {"name": "완료", "icon": "✅"},
]


def run_verification(depth: int = IDENTITY_DEPTH, seed: int = DEFAULT_SEED, max_entry: int = 8) -> bool:
    """전체 검증 파이프라인 실행

    Args:
        depth: 2g-2+n⁺+n⁻ 상한
        seed: 무작위 점/곡선 시드
        max_entry: 오라클 비교 정수 점의 성분 상한

    Returns:
        모든 필수 검사 통과 여부
    """
    start_time = time.time()
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")

    LOGS_DIR.mkdir(parents=True, exist_ok=True)
    log_path = LOGS_DIR / f"verify_{timestamp}.log"
    findings_path = LOGS_DIR / f"findings_{timestamp}.ndjson"
    logger = _setup_logger(log_path)
    rng = random.Random(seed)
    report = IdentityReport()

    console.print()
    console.print(Panel(
        f"[bold]깊이:[/bold] {depth}\n"
        f"[bold]시드:[/bold] {seed}\n"
        f"[bold]시작:[/bold] {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n"
        f"[bold]로그:[/bold] {log_path}",
        title="[bold magenta]🧪 리본 그래프 부피 검증[/bold magenta]",
        border_style="magenta",
    ))
    console.print()
    logger.info(f"=== 검증 시작 (깊이 {depth}) ===")

    failed_steps = []
    current_step = 0
    with Progress(
        SpinnerColumn(),
        TextColumn("[bold blue]{task.description}[/bold blue]"),
        TimeElapsedColumn(),
        console=console,
    ) as progress:
        task = progress.add_task("검증 진행 중...", total=len(STEPS))

        runners = [
            lambda: step_base_volumes(report, logger),
            lambda: step_closed_forms(report, logger, rng),
            lambda: step_oracle(report, logger, depth, max_entry, rng),
            lambda: step_curves(report, logger, depth, rng),
            lambda: step_identities(report, logger, depth, seed),
            lambda: step_cut_and_join(report, logger),
        ]
        try:
            for current_step, runner in enumerate(runners):
                step = STEPS[current_step]
                progress.update(task, description=f"{step['icon']} {step['name']}")
                if not runner():
                    failed_steps.append(step["name"])
                    console.print(f"[red]❌ 실패: {step['name']}[/red]")
                progress.advance(task)

            progress.update(task, description=f"{STEPS[-1]['icon']} {STEPS[-1]['name']}")
            progress.advance(task)

        except KeyboardInterrupt:
            logger.warning("사용자에 의해 중단됨")
            console.print("\n[yellow]사용자에 의해 중단되었습니다.[/yellow]")
            report.write(findings_path)
            raise
        except Exception as e:
            logger.error(f"예상치 못한 오류: {e}", exc_info=True)
            failed_steps.append(STEPS[current_step]["name"])

    report.write(findings_path)
    _print_summary(start_time, logger, report, failed_steps)
    console.print(f"\n[dim]로그 파일: {log_path}[/dim]")
    console.print(f"[dim]발견 사항: {findings_path}[/dim]\n")
    if failed_steps:
        logger.error(f"검증 실패 단계: {', '.join(failed_steps)}")
    else:
        logger.info("=== 검증 정상 완료 ===")
    return not failed_steps


def _print_summary(start_time: float, logger: logging.Logger, report: IdentityReport, failed_steps: list[str]):
    """검증 결과 요약 출력

    Args:
        start_time: 시작 시간
        logger: 로거
        report: 발견 사항 모음
        failed_steps: 실패한 단계명 목록
    """
    elapsed = time.time() - start_time
    minutes, seconds = divmod(int(elapsed), 60)

    table = Table(title="검증 결과 요약")
    table.add_column("항목", style="cyan")
    table.add_column("값", justify="right", style="bold")

    if failed_steps:
        table.add_row("상태", f"[red]실패 ({', '.join(failed_steps)})[/red]")
    else:
        table.add_row("상태", "[green]성공[/green]")
    table.add_row("소요 시간", f"{minutes}분 {seconds}초")

    for check, (ok, bad) in sorted(report.counts().items()):
        value = f"{ok}" if not bad else f"{ok} / [red]{bad} 위반[/red]"
        table.add_row(check, value)

    console.print()
    console.print(table)

    status = "실패" if failed_steps else "성공"
    logger.info(f"결과: {status} / 소요 시간: {minutes}분 {seconds}초 / 발견 사항 {len(report.findings)}건")
