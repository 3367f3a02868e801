"""
리본 그래프 부피 계산 CLI

부피 다항식(fpoly), 점별 부피(zeval), 그래프 열거(enumerate), 비순환 분해(decompose),
Hurwitz 수(hurwitz), 쌍대 형식(pairing), 항등식 검사(identities), 전체 검증(verify)을
하나의 click 그룹으로 묶습니다.

종료 코드:
    0 성공 / 1 내부 오류 / 2 입력 오류 / 3 검증 실패 / 130 사용자 중단
"""

import functools
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from catalog_cache import cached_catalog
from curve_surgery import acyclic_decompose, curves_to_dict, linear_data, pairing
from enumeration import enumerate_graphs, hurwitz_table
from errors import RibbonError
from ribbon_core import load_graph
from stable_graphs import is_acyclic, stable_to_dict, to_dot
from volume_identities import identity_checks, phi_series
from volumes import BoundaryPoint, f_polynomial, parse_rationals, rational_text, z_evaluate

load_dotenv()

console = Console(stderr=True)
logger = logging.getLogger("ribbon_cli")

DEFAULT_THREADS = int(os.getenv("RIBBON_THREADS", "1"))
DEFAULT_SEED = int(os.getenv("RIBBON_SEED", "20240601"))

EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_VERIFY = 3
EXIT_INTERRUPT = 130


def _guarded(func):
    """RibbonError → 2, KeyboardInterrupt → 130, 그 외 예외 → 1"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except RibbonError as e:
            console.print(f"[red]입력 오류 ({type(e).__name__}): {e}[/red]")
            sys.exit(EXIT_INPUT)
        except KeyboardInterrupt:
            console.print("\n[yellow]사용자에 의해 중단되었습니다.[/yellow]")
            sys.exit(EXIT_INTERRUPT)
        except Exception as e:
            logger.error(f"예상치 못한 오류: {e}", exc_info=True)
            sys.exit(EXIT_INTERNAL)

    return wrapper


def _emit(data: dict, output: str | None):
    """JSON을 파일 또는 stdout으로 출력"""
    text = json.dumps(data, ensure_ascii=False, indent=2)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
        console.print(f"[green]저장 완료: {output}[/green]")
    else:
        click.echo(text)


def _parse_order(og, text: str | None) -> list[int] | None:
    """'u,v' (꼭짓점 이름) 또는 '1,0' (인덱스) 형식의 꼭짓점 순서"""
    if not text:
        return None
    names = [part.strip() for part in text.split(",") if part.strip()]
    order = []
    for name in names:
        if name in og.vertex_names:
            order.append(og.vertex_names.index(name))
        elif name.isdigit():
            order.append(int(name))
        else:
            raise RibbonError(f"알 수 없는 꼭짓점: {name}")
    return order


# ============================================
# CLI 그룹
# ============================================
@click.group()
@click.option("--verbose", "-v", is_flag=True, default=False, help="DEBUG 로그 출력")
def cli(verbose: bool):
    """방향 리본 그래프 모듈라이 공간 부피 계산 도구"""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False, rich_tracebacks=True)],
        force=True,
    )


@cli.command()
@click.argument("g", type=int)
@click.argument("n", type=int)
@click.option("--output", "-o", default=None, type=str, help="다항식 JSON 저장 경로")
@_guarded
def fpoly(g: int, n: int, output: str | None):
    """음의 경계 하나인 부피 다항식 F_{g,n}

    \b
    사용 예시:
        python cli.py fpoly 0 3            # L1 + L2 + L3
        python cli.py fpoly 1 1 -o f11.json
    """
    poly = f_polynomial(g, n)
    click.echo(poly.pretty())
    if output:
        Path(output).write_text(poly.to_json() + "\n", encoding="utf-8")
        console.print(f"[green]저장 완료: {output}[/green]")


@cli.command()
@click.argument("g", type=int)
@click.argument("n_plus", type=int)
@click.argument("n_minus", type=int)
@click.option("--Lplus", "l_plus", required=True, help="양의 경계 길이 (예: 3,1 또는 5/2,1)")
@click.option("--Lminus", "l_minus", required=True, help="음의 경계 길이")
@_guarded
def zeval(g: int, n_plus: int, n_minus: int, l_plus: str, l_minus: str):
    """Z_{g,n⁺,n⁻}(L⁺ | L⁻)를 정확한 유리수 num/den으로 출력

    \b
    사용 예시:
        python cli.py zeval 0 2 2 --Lplus 3,1 --Lminus 2,2   # 3/1
        python cli.py zeval 1 1 1 --Lplus 6 --Lminus 6       # 9/1
    """
    point = BoundaryPoint(parse_rationals(l_plus), parse_rationals(l_minus))
    click.echo(rational_text(z_evaluate(g, n_plus, n_minus, point)))


@cli.command(name="enumerate")
@click.argument("g", type=int)
@click.argument("n_plus", type=int)
@click.argument("n_minus", type=int)
@click.option("--threads", default=DEFAULT_THREADS, type=int, help="열거 프로세스 수")
@click.option("--no-cache", is_flag=True, default=False, help="캐시를 쓰지 않고 다시 열거")
@click.option("--output", "-o", default=None, type=str, help="카탈로그 JSON 저장 경로")
@_guarded
def enumerate_cmd(g: int, n_plus: int, n_minus: int, threads: int, no_cache: bool, output: str | None):
    """유형 (g, n⁺, n⁻)의 4가 방향 리본 그래프 카탈로그

    \b
    사용 예시:
        python cli.py enumerate 0 1 2                 # 항목 1개
        python cli.py enumerate 1 1 1 --threads 4 -o cat.json
    """
    if threads < 1:
        raise RibbonError("--threads는 1 이상이어야 합니다")
    if no_cache:
        catalog = enumerate_graphs(g, n_plus, n_minus, threads=threads, progress=True)
    else:
        catalog = cached_catalog(g, n_plus, n_minus, threads=threads, progress=True)
    console.print(f"[cyan]유형 {(g, n_plus, n_minus)}: {len(catalog)}개, Σ1/|Aut| = {catalog.weight_sum()}[/cyan]")
    _emit(catalog.to_dict(), output)


@cli.command()
@click.argument("graph_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--order", default=None, help="꼭짓점 순서 (이름 또는 인덱스, 예: u,v)")
@click.option("--format", "fmt", type=click.Choice(["dot", "json"]), default="dot", help="출력 형식")
@click.option("--output", "-o", default=None, type=str, help="저장 경로")
@_guarded
def decompose(graph_path: str, order: str | None, fmt: str, output: str | None):
    """그래프 JSON을 꼭짓점 순서에 맞게 비순환 분해

    \b
    사용 예시:
        python cli.py decompose g11.json --order u,v
        python cli.py decompose g11.json --format json -o dec.json
    """
    og, metric = load_graph(graph_path)
    dec = acyclic_decompose(og, _parse_order(og, order), metric)
    acyclic, topo = is_acyclic(dec.stable)
    if not acyclic:
        raise RuntimeError("분해 결과 안정 그래프가 비순환이 아닙니다")

    if fmt == "json":
        _emit(
            {
                "curves": curves_to_dict(dec.curves),
                "stable_graph": stable_to_dict(dec.stable),
                "topological_order": topo,
            },
            output,
        )
        return

    name = Path(graph_path).stem.replace("-", "_")
    text = to_dot(dec.stable, name if name.isidentifier() else "StableGraph")
    if output:
        Path(output).write_text(text, encoding="utf-8")
        console.print(f"[green]저장 완료: {output}[/green]")
    else:
        click.echo(text, nl=False)


@cli.command()
@click.argument("g", type=int)
@click.argument("n", type=int)
@click.option("--json-output", "as_json", is_flag=True, default=False, help="JSON 형식으로 출력")
@_guarded
def hurwitz(g: int, n: int, as_json: bool):
    """음의 경계 하나 카탈로그에서 Hurwitz 수 h̃_g(α)와 F_{g,n} 재구성

    \b
    사용 예시:
        python cli.py hurwitz 0 3
        python cli.py hurwitz 1 1 --json-output
    """
    table = hurwitz_table(g, n, cached_catalog(g, n, 1))
    rebuilt = table.reconstruct(g, n)
    matches = rebuilt == f_polynomial(g, n)

    if as_json:
        data = table.to_dict()
        data["reconstructed"] = rebuilt.to_dict()
        data["matches_recursion"] = matches
        click.echo(json.dumps(data, ensure_ascii=False, indent=2))
        return

    view = Table(title=f"Hurwitz 수 (g={g}, n={n})")
    view.add_column("α", style="cyan")
    view.add_column("h̃", justify="right", style="bold")
    for (gg, alpha), count in sorted(table.entries.items()):
        view.add_row(str(alpha), rational_text(count))
    console.print(view)
    console.print(f"재구성: {rebuilt.pretty()}")
    status = "[green]재귀식과 일치[/green]" if matches else "[red]재귀식과 불일치[/red]"
    console.print(status)
    if not matches:
        sys.exit(EXIT_VERIFY)


@cli.command(name="pairing")
@click.argument("graph_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--json-output", "as_json", is_flag=True, default=False, help="JSON 형식으로 출력")
@_guarded
def pairing_cmd(graph_path: str, as_json: bool):
    """T/K/Ĥ/W 차원과 Ω|K 행렬 출력

    \b
    사용 예시:
        python cli.py pairing g11.json
    """
    og, _ = load_graph(graph_path)
    lin = linear_data(og)
    data = pairing(og, lin)
    omega_k = [[rational_text(Fraction(str(v))) for v in data.omega_k.row(i)] for i in range(data.omega_k.rows)]

    if as_json:
        click.echo(json.dumps(
            {
                "dims": lin.dims,
                "omega_K": omega_k,
                "kernel": [list(v) for v in data.kernel],
                "kernel_is_hat": data.kernel_is_hat,
                "nondegenerate": data.nondegenerate,
                "variants_agree": data.variants_agree,
            },
            ensure_ascii=False,
            indent=2,
        ))
        return

    view = Table(title=f"선형 자료: {Path(graph_path).name}")
    view.add_column("항목", style="cyan")
    view.add_column("값", justify="right", style="bold")
    for key, value in lin.dims.items():
        view.add_row(f"dim {key}", str(value))
    view.add_row("ker Ω|K = Ĥ", str(data.kernel_is_hat))
    view.add_row("비퇴화", str(data.nondegenerate))
    view.add_row("좌표 공식 일치", str(data.variants_agree))
    console.print(view)
    for row in omega_k:
        click.echo(" ".join(f"{v:>6}" for v in row))


@cli.command()
@click.option("--depth", default=4, type=int, help="2g-2+n⁺+n⁻ 상한")
@click.option("--samples", default=3, type=int, help="유형당 무작위 점 개수")
@click.option("--seed", default=DEFAULT_SEED, type=int, help="무작위 시드")
@click.option("--cut-join", "cutoff", default=0, type=int, help="자르기-붙이기 잔차를 계산할 |μ| 상한 (0이면 생략)")
@click.option("--output", "-o", default=None, type=str, help="발견 사항 NDJSON 저장 경로")
@_guarded
def identities(depth: int, samples: int, seed: int, cutoff: int, output: str | None):
    """문자열/딜라톤/시간 반전/연속성 등 항등식 검사

    \b
    사용 예시:
        python cli.py identities --depth 3
        python cli.py identities --depth 4 --cut-join 6 -o findings.ndjson
    """
    report = identity_checks(depth, samples=samples, seed=seed)

    view = Table(title=f"항등식 검사 (깊이 {depth})")
    view.add_column("검사", style="cyan")
    view.add_column("통과", justify="right", style="green")
    view.add_column("위반", justify="right", style="red")
    for check, (ok, bad) in sorted(report.counts().items()):
        view.add_row(check, str(ok), str(bad))
    console.print(view)

    if cutoff:
        result = phi_series(cutoff)
        if result.vanishes:
            console.print(f"[green]자르기-붙이기 잔차 0 (|μ| ≤ {cutoff})[/green]")
        else:
            console.print(f"[yellow]자르기-붙이기 잔차 항 {len(result.residual)}개[/yellow]")
            for line in result.residual_lines():
                click.echo(line)

    if output:
        report.write(output)
        console.print(f"[green]저장 완료: {output}[/green]")
    if not report.passed:
        sys.exit(EXIT_VERIFY)


@cli.command()
@click.option("--depth", default=4, type=int, help="2g-2+n⁺+n⁻ 상한")
@click.option("--seed", default=DEFAULT_SEED, type=int, help="무작위 시드")
@click.option("--max-entry", default=8, type=int, help="오라클 비교 정수 점의 성분 상한")
def verify(depth: int, seed: int, max_entry: int):
    """전체 검증 파이프라인 (로그와 발견 사항 NDJSON 기록)

    \b
    사용 예시:
        python cli.py verify --depth 3
        python cli.py verify --depth 2 --max-entry 5
    """
    from verify_suite import run_verification

    try:
        ok = run_verification(depth=depth, seed=seed, max_entry=max_entry)
    except KeyboardInterrupt:
        sys.exit(EXIT_INTERRUPT)
    if not ok:
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":
    cli()
