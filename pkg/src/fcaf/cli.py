"""``fcaf`` command line.

Exit codes: 0 success (all axioms satisfied), 1 some axiom violated,
2 parse error, 3 invalid profile, 4 rule incompatible with the setting,
5 some axiom inconclusive, 6 crisp search outside the impossibility
(informational).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .aggregate import parse_rule
from .axioms import CHECKERS, K_ALLOCATION, OUTPUT_VALIDITY, Sampled, run_suite
from .characterize import Unequal, check_weight_equality, fit_wam, recover_weight_matrix
from .crisp import enumerate_valid_cafs, impossibility_holds, is_dictatorial
from .documents import (
    ParseError,
    classification_to_dict,
    dump_json,
    format_value,
    load_profile,
    matrix_to_list,
    profile_to_dict,
    setting_to_dict,
)
from .errors import (
    BudgetExceeded,
    EvenExponent,
    FcafError,
    InvalidClassification,
    LengthMismatch,
    PreconditionFailed,
    SettingError,
    WrongSetting,
)
from .model import STANDARD, STAR, Setting
from .sample import STRATEGIES, SamplerConfig, sample_profile

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_MISMATCH = 4
EXIT_INCONCLUSIVE = 5
EXIT_OUTSIDE = 6


class RuleError(Exception):
    pass


def _setting(args) -> Setting:
    try:
        n, m, p = (int(v) for v in args.setting.split(","))
    except ValueError:
        raise ParseError(f"--setting expects n,m,p, got {args.setting!r}") from None
    variant = STAR if args.star else STANDARD
    return Setting(n, m, p, Fraction(args.scale), variant)


def _rule(rule: str, setting: Setting):
    try:
        return parse_rule(rule, setting)
    except (WrongSetting, LengthMismatch, EvenExponent, ValueError) as e:
        raise RuleError(str(e)) from None


def _emit(args, doc: dict, text: str):
    if args.format == "json":
        out = dump_json(doc)
    else:
        out = text
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _fmt_matrix(c) -> str:
    return "\n".join("  " + "  ".join(format_value(v) for v in row) for row in np.asarray(c, dtype=object))


def cmd_validate(args) -> int:
    profile, _ = load_profile(args.input)
    doc = {"tool_version": __version__, "valid": True, "setting": setting_to_dict(profile.setting)}
    _emit(args, doc, f"valid profile: n={profile.n}, m={profile.setting.m}, p={profile.setting.p}")
    return EXIT_OK


def cmd_aggregate(args) -> int:
    profile, labels = load_profile(args.input)
    agg = _rule(args.rule, profile.setting)
    out = agg(profile)
    doc = classification_to_dict(out, profile.setting, agg.descriptor, labels)
    if args.output:
        dump_json(doc, args.output)
        print(f"wrote {args.output}")
    else:
        print(dump_json(doc) if args.format == "json" else _fmt_matrix(out))
    return EXIT_OK


def _source_and_setting(args):
    if args.input:
        profile, _ = load_profile(args.input)
        return [profile], profile.setting
    return Sampled(args.trials, args.seed), _setting(args)


def cmd_check(args) -> int:
    source, setting = _source_and_setting(args)
    agg = _rule(args.rule, setting)
    names = list(CHECKERS) if args.axioms == "all" else [a.strip() for a in args.axioms.split(",")]
    for name in names:
        if name not in CHECKERS:
            raise RuleError(f"unknown axiom {name!r}; choose from {', '.join(CHECKERS)}")
    if K_ALLOCATION in names and not setting.square and args.axioms != "all":
        raise RuleError("k-allocation needs m = p")
    reports = run_suite(agg, names, source)
    doc = {
        "tool_version": __version__,
        "rule": agg.descriptor,
        "seed": args.seed,
        "setting": setting_to_dict(setting),
        "reports": [r.to_dict() for r in reports],
    }
    _emit(args, doc, "\n".join(r.summary() for r in reports))
    if any(r.violated for r in reports):
        return EXIT_VIOLATED
    if any(r.inconclusive for r in reports):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _fit_doc(report) -> dict:
    return {
        "weights": [str(w) for w in report.weights],
        "max_residual": format_value(report.max_residual),
        "is_wam": report.is_wam,
        "degenerate": report.degenerate,
        "method": report.method,
        "in_linear_regime": report.in_linear_regime,
        "witness": None if report.witness is None else profile_to_dict(report.witness),
        "unconstrained_weights": report.unconstrained_weights,
        "notes": report.notes,
    }


def _fit_text(report) -> str:
    lines = [
        f"fitted weights: {report.weights} ({report.method})",
        f"max residual: {float(report.max_residual):.6g}",
        f"is WAM: {report.is_wam}" + ("  [degenerate]" if report.degenerate else ""),
    ]
    lines += [f"note: {n}" for n in report.notes]
    return "\n".join(lines)


def cmd_recover(args) -> int:
    setting = _setting(args)
    agg = _rule(args.rule, setting)
    doc = {"tool_version": __version__, "rule": agg.descriptor, "seed": args.seed,
           "setting": setting_to_dict(setting)}
    text = []
    try:
        try:
            wm = recover_weight_matrix(agg)
        except PreconditionFailed as e:
            if e.report.axiom != OUTPUT_VALIDITY:
                raise
            doc["probe_outputs_valid"] = False
            text.append("probe outputs are not valid classifications; reading weights anyway")
            wm = recover_weight_matrix(agg, check_validity=False)
        verdict = check_weight_equality(wm)
        doc["weight_matrix"] = matrix_to_list(wm.w)
        text.append("weight matrix (voters x categories):\n" + _fmt_matrix(wm.w))
        if isinstance(verdict, Unequal):
            doc["equality"] = {"equal": False, "categories": list(verdict.categories),
                               "voter": verdict.voter, "values": [format_value(v) for v in verdict.values]}
            text.append(f"categories {verdict.categories} disagree on voter {verdict.voter}: "
                        f"{', '.join(format_value(v) for v in verdict.values)}")
        else:
            doc["equality"] = {"equal": True, "weights": [str(w) for w in verdict]}
            text.append(f"all categories share weights {verdict}")
    except FcafError as e:
        doc["recovery_error"] = str(e)
        text.append(f"probe recovery failed: {e}")
    fit = fit_wam(agg, Sampled(args.trials, args.seed))
    doc["fit"] = _fit_doc(fit)
    text.append(_fit_text(fit))
    _emit(args, doc, "\n".join(text))
    return EXIT_OK


def cmd_fit(args) -> int:
    setting = _setting(args)
    agg = _rule(args.rule, setting)
    fit = fit_wam(agg, Sampled(args.trials, args.seed))
    doc = {"tool_version": __version__, "rule": agg.descriptor, "seed": args.seed,
           "setting": setting_to_dict(setting), "fit": _fit_doc(fit)}
    _emit(args, doc, _fit_text(fit))
    return EXIT_OK


def cmd_sample(args) -> int:
    setting = _setting(args)
    profile = sample_profile(SamplerConfig(setting, args.seed, args.strategy))
    doc = profile_to_dict(profile)
    doc["tool_version"] = __version__
    doc["seed"] = args.seed
    if args.output:
        dump_json(doc, args.output)
        print(f"wrote {args.output}")
    else:
        print(dump_json(doc))
    return EXIT_OK


def cmd_crisp_verify(args) -> int:
    survivors = enumerate_valid_cafs(args.n, args.m, args.p, budget=args.budget)
    dictators = [is_dictatorial(c) for c in survivors]
    holds = impossibility_holds(survivors, dictators, args.n)
    in_hypotheses = args.m >= args.p >= 3
    doc = {
        "tool_version": __version__,
        "setting": {"n": args.n, "m": args.m, "p": args.p},
        "survivors": len(survivors),
        "dictatorial": sum(d is not None for d in dictators),
        "impossibility_holds": holds,
        "tables": [{"tables": [list(t) for t in c.tables], "dictator": d}
                   for c, d in zip(survivors, dictators)],
    }
    n_dict = doc["dictatorial"]
    noun = "survivor" if len(survivors) == 1 else "survivors"
    lines = [f"{len(survivors)} {noun}, {n_dict} dictatorial"
             + (", both dictatorial" if holds and args.n == 2 else "")]
    for c, d in zip(survivors, dictators):
        tag = f"dictator voter {d}" if d is not None else "not dictatorial"
        lines.append(f"  {tag}: {[list(t) for t in c.tables]}")
    if not in_hypotheses:
        lines.append("note: outside m >= p >= 3")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if holds else EXIT_OUTSIDE


def _add_setting(sp, required=True):
    sp.add_argument("--setting", required=required, help="n,m,p")
    sp.add_argument("--scale", default="1", help="row sum s (star variant)")
    sp.add_argument("--star", action="store_true", help="use the scale-s star variant")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fcaf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--output")

    sp = sub.add_parser("validate", help="validate a profile document")
    sp.add_argument("input")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("aggregate", help="aggregate a profile document")
    sp.add_argument("input")
    sp.add_argument("--rule", required=True, help="wam:w1,...,wn | mean | oddh:q")
    common(sp)
    sp.set_defaults(func=cmd_aggregate)

    sp = sub.add_parser("check", help="run axiom checkers")
    sp.add_argument("--input", help="profile document (otherwise sampled)")
    _add_setting(sp, required=False)
    sp.add_argument("--rule", required=True)
    sp.add_argument("--axioms", default="all")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_check)

    for name, func in (("recover", cmd_recover), ("fit", cmd_fit)):
        sp = sub.add_parser(name, help=f"{name} WAM weights of a rule")
        _add_setting(sp)
        sp.add_argument("--rule", required=True)
        sp.add_argument("--trials", type=int, default=50)
        sp.add_argument("--seed", type=int, default=0)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("sample", help="draw a random valid profile")
    _add_setting(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--strategy", choices=STRATEGIES, default="birkhoff")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("crisp-verify", help="exhaustive crisp impossibility check")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10**9)
    common(sp)
    sp.set_defaults(func=cmd_crisp_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check" and not args.input and not args.setting:
        print("error: check needs --input or --setting", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except (ParseError, SettingError, json.JSONDecodeError, OSError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidClassification as e:
        print(f"invalid profile: {e}", file=sys.stderr)
        return EXIT_INVALID
    except RuleError as e:
        print(f"rule/setting mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except BudgetExceeded as e:
        print(str(e), file=sys.stderr)
        return EXIT_OUTSIDE


if __name__ == "__main__":
    sys.exit(main())
