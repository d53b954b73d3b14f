"""Command-line front end.

    monolith-forge <verb> [<family>] [flags]

Verbs: ``list``, ``verify``, ``construct``, ``suite``.  Families:
``quantum-plane``, ``weyl``, ``ore``, ``down-up``.  The parameter flags
``--q``, ``--eta``, ``--kappa`` accept a rational literal ("2", "-1/3")
or the token "t" for the symbolic variable.  Runs are seeded: repeating
the same argv reproduces the structured report byte for byte, apart
from the timestamp.

Exit codes: 0 all checks passed, 1 at least one check failed, 2
configuration error, 3 the ideal truncation failed to stabilize.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .algebra import (
    AlgebraError,
    InvalidParameter,
    PolyParseError,
    UnsupportedFamily,
    verify_du_formulas,
    verify_normal_element,
    verify_presentation_consistency,
)
from .constructions import (
    DOWN_UP,
    FAMILY_DEFAULTS,
    ORE,
    QUANTUM_PLANE,
    WEYL,
    ConstructionError,
    MuZero,
    build_monolith,
    check_assumptions,
    down_up_duality_check,
    down_up_socle_comparison,
    e101_identity_check,
    filtration_checks,
    make_spec,
    ore_e1_identity,
    ore_submodule_classification,
    weyl_closed_form_check,
)
from .modules import NoStabilization, ProbeConfig
from .reports import FAIL, INFO, UNSTABLE, CheckReport, RunReport
from .scalars import ScalarParseError

CLI_FAMILIES = ("quantum-plane", "weyl", "ore", "down-up")


class SinkUnwritable(Exception):
    """The report destination cannot be opened for writing."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monolith-forge",
        description="exact truncated checks for monolithic module "
                    "constructions over solvable-type algebras",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--q", help='deformation parameter, rational or "t"')
    flags.add_argument("--eta", help='down-up parameter, rational or "t"')
    flags.add_argument("--kappa", help="down-up lowest weight, rational")
    flags.add_argument("--r", type=int, help="Ore twist exponent d(a) = a^r")
    flags.add_argument("--degree", type=int, default=8,
                       help="weight cap D (default 8)")
    flags.add_argument("--slack-cap", type=int, default=None,
                       help="limit on truncation slack growth")
    flags.add_argument("--m-max", type=int, default=3,
                       help="chain depth for w^m probes (default 3)")
    flags.add_argument("--probes", type=int, default=12,
                       help="random probes per check (default 12)")
    flags.add_argument("--coeff-bound", type=int, default=5,
                       help="probe coefficient bound (default 5)")
    flags.add_argument("--margin", type=int, default=None,
                       help="weight margin for probe placement")
    flags.add_argument("--seed", type=int, default=2024,
                       help="root seed for all probe streams")
    flags.add_argument("--json", metavar="PATH", default=None,
                       help="also write the structured report to PATH")
    flags.add_argument("--quiet", action="store_true",
                       help="suppress the text report on stdout")

    sub.add_parser("list", parents=[flags],
                   help="families and their default parameters")
    for verb, blurb in (
        ("verify", "assumption and identity checks for one family"),
        ("construct", "monolith assembly with essentiality probes"),
    ):
        p = sub.add_parser(verb, parents=[flags], help=blurb)
        p.add_argument("family", choices=CLI_FAMILIES)
    sub.add_parser("suite", parents=[flags],
                   help="verify + construct across all four families")
    return parser


def probe_config(args) -> ProbeConfig:
    return ProbeConfig(seed=args.seed, probes=args.probes,
                       coefficient_bound=args.coeff_bound,
                       margin=args.margin)


def spec_options(family: str, args) -> dict:
    fam = family.replace("-", "_")
    kw = dict(FAMILY_DEFAULTS[fam])
    if fam in (QUANTUM_PLANE, WEYL) and args.q is not None:
        kw["parameter"] = args.q
    if fam == ORE and args.r is not None:
        kw["r"] = args.r
    if fam == DOWN_UP:
        if args.eta is not None:
            kw["parameter"] = args.eta
        if args.kappa is not None:
            kw["kappa"] = args.kappa
    return kw


def verify_family(family: str, args, cfg: ProbeConfig) -> list:
    """check_assumptions plus the family's own identity oracles."""
    kw = spec_options(family, args)
    spec = make_spec(family, **kw)
    pres = spec.presentation
    D, m_max = args.degree, args.m_max
    checks = list(check_assumptions(spec, D, m_max, cfg,
                                    slack_cap=args.slack_cap).reports)
    checks.append(e101_identity_check(spec, m_max, cfg, D,
                                      slack_cap=args.slack_cap))
    if family == "weyl":
        checks.append(weyl_closed_form_check(kw["parameter"], D,
                                             slack_cap=args.slack_cap))
    elif family == "ore":
        checks.append(ore_e1_identity(kw["r"], m_max))
        checks.append(ore_submodule_classification(kw["r"], D, cfg))
    elif family == "down-up":
        checks.append(verify_du_formulas(pres, m_max, strict=False))
        checks.append(filtration_checks(kw["parameter"], D,
                                        slack_cap=args.slack_cap))
        checks.append(down_up_duality_check(kw["parameter"]))
    return checks


def construct_family(family: str, args, cfg: ProbeConfig) -> list:
    kw = spec_options(family, args)
    spec = make_spec(family, **kw)
    result = build_monolith(spec, args.degree, cfg,
                            slack_cap=args.slack_cap)
    checks = list(result.reports)
    if family == "down-up":
        checks.append(down_up_socle_comparison(kw["parameter"], kw["kappa"],
                                               args.degree,
                                               slack_cap=args.slack_cap))
    return checks


def list_families(args, cfg: ProbeConfig) -> list:
    checks = []
    for cli_name in CLI_FAMILIES:
        fam = cli_name.replace("-", "_")
        kw = FAMILY_DEFAULTS[fam]
        checks.append(CheckReport(
            f"family:{cli_name}", INFO,
            parameters={k: str(v) for k, v in kw.items()},
            notes=[f"defaults: {', '.join(f'{k}={v}' for k, v in kw.items())}"],
        ))
    return checks


def run_verb(args, cfg: ProbeConfig) -> list:
    if args.verb == "list":
        return list_families(args, cfg)
    if args.verb == "verify":
        return verify_family(args.family, args, cfg)
    if args.verb == "construct":
        return construct_family(args.family, args, cfg)
    checks = []
    for family in CLI_FAMILIES:
        checks.extend(verify_family(family, args, cfg))
        checks.extend(construct_family(family, args, cfg))
    return checks


def configuration_echo(args) -> dict:
    echo = {"verb": args.verb}
    if getattr(args, "family", None):
        echo["family"] = args.family
    for key in ("q", "eta", "kappa", "r", "degree", "slack_cap", "m_max",
                "probes", "coeff_bound", "margin", "seed"):
        val = getattr(args, key)
        if val is not None:
            echo[key] = val
    return echo


def emit_report(report: RunReport, format: str, sink) -> None:
    """Write the report; sink is a stream or a path, "-" meaning stdout."""
    text = report.to_json() if format == "json" else report.to_text()
    if hasattr(sink, "write"):
        sink.write(text + "\n")
        return
    if sink == "-":
        sys.stdout.write(text + "\n")
        return
    try:
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    except OSError as exc:
        raise SinkUnwritable(f"cannot write report to {sink}: {exc}") from exc


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = probe_config(args)
    try:
        checks = run_verb(args, cfg)
    except (MuZero, InvalidParameter, UnsupportedFamily, PolyParseError,
            ScalarParseError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NoStabilization as exc:
        checks = [CheckReport("ideal_truncation", UNSTABLE,
                              witnesses=[str(exc)],
                              notes=["raise --slack-cap or lower --degree"])]
    except (ConstructionError, AlgebraError) as exc:
        checks = [CheckReport(type(exc).__name__, FAIL, witnesses=[str(exc)])]

    report = RunReport(__version__, configuration_echo(args), checks)
    try:
        if not args.quiet:
            emit_report(report, "text", sys.stdout)
        if args.json:
            emit_report(report, "json", args.json)
    except SinkUnwritable as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if report.overall == UNSTABLE:
        return 3
    return 0 if report.overall == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
