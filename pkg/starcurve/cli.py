# -*- coding: utf-8 -*-
"""
Командная строка starcurve.

    starcurve cusps 72
    starcurve genus 147 [--star]
    starcurve heegner 40 --disc -160
    starcurve lift 100
    starcurve exceptional 450 | --max 500 [--minimal] | --family
    starcurve integrality 441 21 [--signs FILE] [--exhaustive-roots]
    starcurve lfunc --p 2 [--q 1701 | --find-threshold]
    starcurve report 40 147 --table table1
    starcurve verify-tables [--only table1]

Глобальные флаги: --data-dir, --log-level (до подкоманды), --json, --csv (до или после неё).
Коды выхода: 0 - успех, 1 - расхождение с эталоном, 2 - ошибка ввода.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional, Sequence

from colorama import Fore, Style, just_fix_windows_console
from loguru import logger

from . import analytic, catalog, cusps, exceptional, genus, heegner, report, volcano
from .batch import run_levels
from .config import get_settings, setup_logging
from .cyclo_integrality import CONVENTIONS, combined_integrality
from .errors import InvalidInputError, StarcurveError, VerificationError

GREEN, YELLOW, RED, RESET = Fore.GREEN, Fore.YELLOW, Fore.RED, Style.RESET_ALL
TABLES = ("table1", "table4")
CHECKS = TABLES + ("integrality", "family", "accounting")


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(text)


# --- подкоманды -----------------------------------------------------------------

def cmd_cusps(args) -> int:
    N = args.level
    reps = cusps.cusp_representatives(N)
    classes = cusps.star_cusp_orbits(N)
    rational = cusps.rational_star_cusps(N)
    payload = {
        "level": N,
        "cusps": [{"cusp": str(c), "width": c.width} for c in reps],
        "star_classes": [{"members": [str(c) for c in k.members], "rational": k.rational, "field": k.field_label}
                         for k in classes],
        "rational": len(rational),
    }
    lines = [f"X₀({N}): каспов {len(reps)}, классов на X₀({N})* {len(classes)}, рациональных {len(rational)}"]
    for k in classes:
        mark = "Q" if k.rational else k.field_label
        lines.append(f"  {k}  [{mark}]")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_genus(args) -> int:
    if args.star:
        g = genus.genus_star(args.level)
        _emit(args, {"level": args.level, "genus_star": g}, f"g(X₀({args.level})*) = {g}")
        return 0
    d = genus.genus_data(args.level)
    payload = {
        "level": d.N, "mu": d.mu, "nu2": d.nu2, "nu3": d.nu3, "nu_inf": d.nu_inf,
        "genus": d.genus, "genus_star": d.genus_star,
        "fixed_points": {str(q): v for q, v in sorted(d.fixed_points.items())},
    }
    fixes = ", ".join(f"w_{q}: {v}" for q, v in sorted(d.fixed_points.items()))
    text = (f"N={d.N}: μ={d.mu} ν₂={d.nu2} ν₃={d.nu3} ν∞={d.nu_inf}  g={d.genus}  g*={d.genus_star}\n"
            f"  неподвижные точки: {fixes or '-'}")
    _emit(args, payload, text)
    return 0


def cmd_heegner(args) -> int:
    N = args.level
    if args.disc is None:
        discs = heegner.rational_heegner_report(N)
        _emit(args, {"level": N, "heegner": discs}, f"N={N}: {', '.join(map(str, discs)) or '-'}")
        return 0
    orbits = heegner.star_rational_orbits(N, args.disc)
    payload = {
        "level": N,
        "discriminant": args.disc,
        "orbits": [{"members": [str(t) for t in o.members], "rational": o.star_rational,
                    "stabilizer": list(o.stabilizer)} for o in orbits],
    }
    lines = [f"N={N}, D={args.disc}: W-орбит {len(orbits)}"]
    for o in orbits:
        lines.append(f"  {'Q ' if o.star_rational else '  '}{o.members[0]}  (|орбита|={len(o.members)}, стаб. {list(o.stabilizer)})")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_lift(args) -> int:
    entries = volcano.cm_lift_report(args.level)
    payload = {
        "level": args.level,
        "lifts": [{"D": e.D, "D0": e.D0, "d": e.d, "M": e.M,
                   "certificate": [[s.ell, s.direction, s.disc_after] for s in e.certificate]} for e in entries],
    }
    lines = [f"N={args.level}: подъёмов {len(entries)}"]
    for e in entries:
        path = " ".join(f"{s.direction[0]}{s.ell}" for s in e.certificate)
        lines.append(f"  {e.D} -> {e.D0} через X₀({e.M})*, d={e.d}  [{path}]")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_exceptional(args) -> int:
    cap = args.cap or exceptional.DEFAULT_CAP
    if args.family:
        fam = exceptional.minimal_exceptional_family(cap)
        adj = exceptional.adjusted_family(fam)
        _emit(args, {"L0": fam, "L1": adj}, f"ℒ₀ = {fam}\nℒ₁ = {adj}")
        return 0
    if args.minimal:
        fam = exceptional.minimal_exceptional_family(cap)
        _emit(args, {"max": cap, "L0": fam}, f"ℒ₀ (Ñ ≤ {cap}) = {fam}")
        return 0
    if args.level is None:
        if args.cap is None:
            raise InvalidInputError("нужен уровень, --max, --minimal или --family")
        levels = exceptional.exceptional_levels(args.cap)
        _emit(args, {"max": args.cap, "levels": levels}, f"исключительных Ñ ≤ {args.cap}: {len(levels)}\n{levels}")
        return 0
    cls = exceptional.is_exceptional_level(args.level)
    text = f"N={cls.level}: {'исключительный' if cls.exceptional else 'не исключительный'}"
    if cls.witness:
        text += f" ({cls.witness})"
    if cls.shape:
        text += f", форма ({cls.shape}) {cls.shape_params}"
    _emit(args, cls.as_dict(), text)
    return 0


def cmd_integrality(args) -> int:
    N, M = args.N, args.M
    if args.signs and args.remote:
        raise InvalidInputError("--signs и --remote несовместимы")
    if args.signs:
        records = catalog.read_sign_file(args.signs, N, M)
    elif args.remote:
        records = catalog.fetch_signs(M, N=N, settings=get_settings(data_dir=args.data_dir))
    else:
        records = catalog.load_signs(N, M)
    if not records:
        raise InvalidInputError(f"нет векторов знаков для ({N}, {M})")
    convention = "exhaustive" if args.exhaustive_roots else args.convention
    m, mp, reports = combined_integrality(N, M, [r.sign_vector() for r in records], convention)
    payload = {"N": N, "M": M, "convention": convention, "m": m, "m_prime": mp,
               "reports": [r.as_dict() for r in reports]}
    lines = [f"N={N} M={M}: m = {m}, m' = {mp}"]
    for r in reports:
        lines.append(f"  {r.signs_label or '-'}: m = {r.m}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_lfunc(args) -> int:
    primes = [args.p] if args.p else list(analytic.EXCEPTIONAL_PRIMES)
    if args.q is not None:
        if not args.p:
            raise InvalidInputError("--q требует --p")
        if args.find_threshold:
            raise InvalidInputError("--q и --find-threshold несовместимы")
        b = analytic.error_bound(args.p, args.q, high_precision=args.high_precision)
        text = (f"p={b.p} q={b.q}: {b.leading:.6f} + 2π·({b.weil_block:.6f} + {b.f1:.6f} + {b.f2:.6f}) "
                f"= {b.total:.9f}")
        _emit(args, b.as_dict(), text)
        return 0
    results = [analytic.threshold(p) for p in primes]
    lines = []
    for r in results:
        color = GREEN if r.within_published else RED
        lines.append(f"{color}p={r.p:<3} q₀={r.q0:<5} (граница {r.published_threshold}), "
                     f"оценка {r.total_at_q0:.6f}, монотонность: {'да' if r.decreasing_certified else 'нет'}{RESET}")
    _emit(args, [r.as_dict() for r in results], "\n".join(lines))
    return 0


def _golden_map(name: Optional[str]) -> Dict[int, catalog.GoldenRow]:
    if not name:
        return {}
    return {g.level: g for g in catalog.load_golden_table(name)}


def cmd_report(args) -> int:
    golden = _golden_map(args.table)
    levels = args.levels or sorted(golden)
    if not levels:
        raise InvalidInputError("нужны уровни или --table")
    rows = run_levels(levels, args.jobs, golden)
    if args.json:
        print(report.rows_to_json(rows))
    elif args.csv:
        sys.stdout.write(report.rows_to_csv(rows))
    else:
        for r in rows:
            print(r)
    return 0


def _status(ok: bool, title: str, details: Sequence[str] = ()) -> None:
    tag = f"{GREEN}PASS{RESET}" if ok else f"{RED}FAIL{RESET}"
    print(f"[{tag}] {title}")
    for d in details:
        print(f"    {d}")


def _verify_table(name: str, jobs: Optional[int]) -> List[str]:
    golden = catalog.load_golden_table(name)
    rows = run_levels([g.level for g in golden], jobs, {g.level: g for g in golden})
    return [str(m) for m in report.golden_compare(rows, golden)]


def _verify_integrality() -> List[str]:
    problems = []
    for row in catalog.load_integrality_table():
        chk = report.integrality_check(row)
        if not chk.ok:
            problems.append(f"({row.N}, {row.M}): m={chk.m}, m'={chk.m_prime}; ожидалось "
                            f"m={row.expected_m}, m'={row.expected_m_prime}")
        elif row.flags:
            print(f"    {YELLOW}({row.N}, {row.M}) помечено {row.flags}: {row.note}{RESET}")
    return problems


def _verify_family() -> List[str]:
    lists = catalog.load_exceptional_lists()
    fam = exceptional.minimal_exceptional_family()
    adj = exceptional.adjusted_family(fam)
    problems = []
    for name, got in (("L0", fam), ("L1", adj)):
        want = set(lists[name])
        if set(got) != want:
            problems.append(f"{name}: лишние {sorted(set(got) - want)}, недостающие {sorted(want - set(got))}")
    return problems


def _verify_accounting(jobs: Optional[int] = None) -> List[str]:
    """Баланс точек по вычисленным строкам: остаток ≥ 0 и ненулевой только там, где есть исключительные точки."""
    problems = []
    residuals = catalog.load_exceptional_points()["residuals"]
    for name in TABLES:
        golden = catalog.load_golden_table(name)
        for lvl in report.golden_accounting(golden):
            problems.append(f"{name}: баланс точек не сходится на N={lvl}")
        by_level = {g.level: g for g in golden}
        rows = run_levels(list(by_level), jobs, fn=lambda N: report.level_report(N, by_level[N], strict=False))
        for r in rows:
            got = r.exceptional_residual or 0
            want = residuals.get(r.level, 0)
            if got < 0:
                problems.append(f"{name}: N={r.level}: отрицательный остаток {got}")
            elif got != want:
                problems.append(f"{name}: N={r.level}: остаток {got}, ожидался {want}")
    return problems


def cmd_verify_tables(args) -> int:
    checks = [args.only] if args.only else list(CHECKS)
    failed = []
    for check in checks:
        if check in TABLES:
            problems = _verify_table(check, args.jobs)
        elif check == "integrality":
            problems = _verify_integrality()
        elif check == "family":
            problems = _verify_family()
        else:
            problems = _verify_accounting(args.jobs)
        _status(not problems, check, problems)
        if problems:
            failed.append(check)
    if failed:
        raise VerificationError(f"расхождения: {', '.join(failed)}")
    return 0


# --- разбор аргументов ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starcurve", description="Рациональные точки на X₀(N)*")
    parser.add_argument("--json", action="store_true", help="вывод в JSON")
    parser.add_argument("--csv", action="store_true", help="вывод в CSV (для report)")
    parser.add_argument("--data-dir", default=None, help="каталог встроенных данных")
    parser.add_argument("--log-level", default=None, help="уровень логирования loguru")
    # те же флаги после подкоманды; SUPPRESS не затирает значение, заданное до неё
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="вывод в JSON")
    fmt.add_argument("--csv", action="store_true", default=argparse.SUPPRESS, help="вывод в CSV (для report)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cusps", parents=[fmt], help="каспы и рациональные классы на X₀(N)*")
    p.add_argument("level", type=int)
    p.set_defaults(func=cmd_cusps)

    p = sub.add_parser("genus", parents=[fmt], help="род X₀(N) и X₀(N)*")
    p.add_argument("level", type=int)
    p.add_argument("--star", action="store_true", help="только род X₀(N)*")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("heegner", parents=[fmt], help="рациональные точки Хегнера")
    p.add_argument("level", type=int)
    p.add_argument("--disc", type=int, default=None, help="разобрать один дискриминант по орбитам")
    p.set_defaults(func=cmd_heegner)

    p = sub.add_parser("lift", parents=[fmt], help="CM-подъёмы с уровней M ‖ N")
    p.add_argument("level", type=int)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("exceptional", parents=[fmt], help="исключительные уровни")
    p.add_argument("level", type=int, nargs="?")
    p.add_argument("--family", action="store_true", help="построить ℒ₀ и ℒ₁")
    p.add_argument("--max", "--cap", dest="cap", type=int, default=None, metavar="B",
                   help=f"граница перебора Ñ ≤ B (по умолчанию {exceptional.DEFAULT_CAP})")
    p.add_argument("--minimal", action="store_true", help="только минимальное семейство ℒ₀")
    p.set_defaults(func=cmd_exceptional)

    p = sub.add_parser("integrality", parents=[fmt], help="множители m_{N,M} и m'_{N,M}")
    p.add_argument("N", type=int)
    p.add_argument("M", type=int)
    p.add_argument("--convention", choices=CONVENTIONS, default="coherent")
    p.add_argument("--exhaustive-roots", action="store_true", help="НОК по всем выборам первообразных корней")
    p.add_argument("--signs", default=None, metavar="FILE", help="TSV со строками `N M q sign`")
    p.add_argument("--remote", action="store_true", help="знаки из удалённого каталога")
    p.set_defaults(func=cmd_integrality)

    p = sub.add_parser("lfunc", parents=[fmt], help="оценка ошибки для ненулевого L-значения")
    p.add_argument("--p", type=int, choices=analytic.EXCEPTIONAL_PRIMES, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--find-threshold", action="store_true", help="найти q₀ (по умолчанию без --q)")
    p.add_argument("--high-precision", action="store_true")
    p.set_defaults(func=cmd_lfunc)

    p = sub.add_parser("report", parents=[fmt], help="строки таблиц по уровням")
    p.add_argument("levels", type=int, nargs="*")
    p.add_argument("--table", choices=TABLES, default=None, help="взять q_points из эталона")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify-tables", parents=[fmt], help="сверка со встроенными эталонами")
    p.add_argument("--only", choices=CHECKS, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_verify_tables)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    just_fix_windows_console()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = get_settings(data_dir=args.data_dir, log_level=args.log_level)
        setup_logging(settings.log_level)
        if args.data_dir:
            os.environ["STARCURVE_DATA_DIR"] = str(settings.data_dir)
        return args.func(args)
    except StarcurveError as e:
        logger.debug("{}: {}", type(e).__name__, e)
        print(f"{RED}ошибка: {e}{RESET}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
