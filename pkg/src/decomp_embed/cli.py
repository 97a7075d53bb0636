"""Command-line front end.

Every subcommand prints a single JSON document on stdout.  Output is
compact and byte-stable for fixed inputs; ``--pretty`` switches to an
indented rendering of the same document.

Exit codes: a ``decide`` run maps its outcome to 0 (Embeds),
1 (DoesNotEmbed) or 2 (Undetermined); ``check-sequence`` and
``verify-family`` use 0/1 for pass/fail.  Bad usage exits 64, malformed
documents 65, unsupported weights 70, and a disagreement between the
symbolic route and the numeric oracle exits 10.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .covering import certify_constants, check_moderate, enumerate_window, neighbors, norm_surrogate_check
from .embedding import decide
from .errors import (
    DecompEmbedError,
    InexactExponent,
    InvalidParams,
    MissingTightnessWitness,
    OracleDisagreement,
    SchemaError,
)
from .exponents import INF, ExtExponent, compound
from .families import FAMILY_NAMES, covering_from_json, get_family
from .seqspace import decide_sequence_embedding, expweight_from_json, truncated_oracle
from .weights import build_weight

EX_OK = 0
EX_ORACLE = 10
EX_USAGE = 64
EX_SCHEMA = 65
EX_WEIGHT = 70

_OUTCOME_EXIT = {"Embeds": 0, "DoesNotEmbed": 1, "Undetermined": 2}


def _exponent(text: str) -> ExtExponent:
    low = text.strip().lower()
    if low in {"inf", "infinity"}:
        return INF
    if "." in low or "e" in low:
        # decimal input goes through the capped-denominator float path
        return ExtExponent.from_float(float(low))
    return ExtExponent(low)


def _json_arg(text: str, what: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{what} is not valid JSON: {exc}") from exc


def _weight_arg(text: str, what: str):
    doc = _json_arg(text, what)
    try:
        return expweight_from_json(doc)
    except ValueError as exc:
        raise SchemaError(f"{what}: {exc}") from exc


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return float(value)
    return value


def _emit(doc: object, pretty: bool) -> None:
    if pretty:
        text = json.dumps(doc, indent=2)
    else:
        text = json.dumps(doc, separators=(",", ":"))
    sys.stdout.write(text + "\n")


def _cmd_decide(args: argparse.Namespace) -> int:
    params = _json_arg(args.params, "--params")
    verdict = decide(
        args.family,
        params,
        p=args.p,
        q=args.q,
        r=args.r,
        k=args.k,
        target=args.target,
        refine=args.refine,
        oracle_check=args.oracle_check,
    )
    _emit(verdict.to_json(), args.pretty)
    return _OUTCOME_EXIT[verdict.outcome.value]


def _cmd_inspect_covering(args: argparse.Namespace) -> int:
    cov = covering_from_json(_json_arg(args.covering, "--covering"))
    window = enumerate_window(cov, args.radius)
    doc = {
        "label": cov.label,
        "dimension": cov.dimension,
        "radius": args.radius,
        "window_size": len(window),
        "constants": certify_constants(cov, args.radius),
    }
    if args.index is not None:
        try:
            idx = tuple(int(tok) for tok in args.index.split(","))
        except ValueError as exc:
            raise InvalidParams(f"--index must be a comma-separated integer tuple: {exc}")
        doc["neighbors"] = sorted(list(j) for j in neighbors(cov, idx, args.radius))
    _emit(_jsonable(doc), args.pretty)
    return EX_OK


def _cmd_check_sequence(args: argparse.Namespace) -> int:
    u = _weight_arg(args.u, "--u")
    v = _weight_arg(args.v, "--v")
    embeds = decide_sequence_embedding(u, v, args.r, args.s) == "Embeds"
    doc = {"embeds": embeds, "exponent": compound(args.s, args.r).to_json()}
    if args.oracle:
        doc["oracle"] = truncated_oracle(u.quotient(v), compound(args.s, args.r)).to_json()
    _emit(doc, args.pretty)
    return EX_OK if embeds else 1


def _cmd_verify_family(args: argparse.Namespace) -> int:
    fam = get_family(args.family)
    params = fam.parse_params(_json_arg(args.params, "--params"))
    cov = fam.covering(params)
    constants = certify_constants(cov, args.radius)
    # moderateness probe: the canonical order-0 weight between p = 1 and
    # t = 2; the k = 0 form is purely geometric, so the estimate settles
    # inside small windows
    probe = build_weight(cov, "u_kpq", k=0, p=ExtExponent(1), t=ExtExponent(2))
    moderate = check_moderate(cov, probe.evaluate, (args.radius, args.radius + 2))
    try:
        surrogate = norm_surrogate_check(cov, args.radius)
    except MissingTightnessWitness:
        surrogate = None
    checks = {
        "constants_finite": math.isfinite(constants["C_hat"]),
        "moderate_ok": bool(moderate["ok"]),
        "surrogate_bounded": surrogate is None
        or (surrogate["min_ratio"] > 0.0 and math.isfinite(surrogate["max_ratio"])),
    }
    doc = {
        "family": fam.name,
        "label": cov.label,
        "radius": args.radius,
        "constants": constants,
        "moderate": moderate,
        "surrogate": surrogate,
        "checks": checks,
        "ok": all(checks.values()),
    }
    _emit(_jsonable(doc), args.pretty)
    return EX_OK if doc["ok"] else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decomp-embed",
        description="decide decomposition-space embeddings into smoothness targets",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser(
        "decide",
        parents=[common],
        help="decide one embedding question for a built-in family",
    )
    d.add_argument("--family", required=True, choices=list(FAMILY_NAMES))
    d.add_argument("--params", default="{}", help="family parameters as JSON")
    d.add_argument("--target", default="sobolev", choices=["sobolev", "cb", "bv"])
    d.add_argument("-p", type=_exponent, required=True, metavar="P")
    d.add_argument("-q", type=_exponent, default=None, metavar="Q",
                   help="integrability of the sobolev target")
    d.add_argument("-r", type=_exponent, required=True, metavar="R")
    d.add_argument("-k", type=int, default=0, metavar="K", help="smoothness order")
    d.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True,
                   help="apply family-specific sharpenings")
    d.add_argument("--oracle-check", action="store_true",
                   help="replay every summability call on the numeric oracle")
    d.set_defaults(func=_cmd_decide)

    i = sub.add_parser(
        "inspect-covering",
        parents=[common],
        help="window size, structure constants and neighbors of a covering",
    )
    i.add_argument("--covering", required=True,
                   help='JSON: {"family":...,"params":...} or {"custom":...}')
    i.add_argument("--radius", type=int, default=4)
    i.add_argument("--index", default=None, help="comma-separated index tuple")
    i.set_defaults(func=_cmd_inspect_covering)

    c = sub.add_parser(
        "check-sequence",
        parents=[common],
        help="decide a weighted sequence-space embedding l^r_v -> l^s_u",
    )
    c.add_argument("--u", required=True, help="target weight as JSON")
    c.add_argument("--v", required=True, help="source weight as JSON")
    c.add_argument("-r", type=_exponent, required=True, metavar="R")
    c.add_argument("-s", type=_exponent, required=True, metavar="S")
    c.add_argument("--oracle", action="store_true",
                   help="attach the truncated-sum classification of u/v")
    c.set_defaults(func=_cmd_check_sequence)

    v = sub.add_parser(
        "verify-family",
        parents=[common],
        help="run the covering diagnostics for a built-in family",
    )
    v.add_argument("--family", required=True, choices=list(FAMILY_NAMES))
    v.add_argument("--params", default="{}", help="family parameters as JSON")
    v.add_argument("--radius", type=int, default=4)
    v.set_defaults(func=_cmd_verify_family)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EX_OK if not exc.code else EX_USAGE
        return args.func(args)
    except OracleDisagreement as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EX_ORACLE
    except (InvalidParams, InexactExponent) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EX_USAGE
    except SchemaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EX_SCHEMA
    except DecompEmbedError as exc:
        # UnsupportedWeight and the remaining operational limits
        sys.stderr.write(f"error: {exc}\n")
        return EX_WEIGHT


if __name__ == "__main__":
    sys.exit(main())
