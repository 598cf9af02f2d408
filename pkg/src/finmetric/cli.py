"""Command-line entry point: ``finmetric <command> ...``.

Exit status: 0 success, 1 negative or inconclusive result, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from . import corpus
from . import io as fio
from .gh import SizeLimitExceeded, gh_bounds, gh_convergence_certificate, gh_exact
from .groups import (
    AffineFamily,
    FiniteMetricGroup,
    GroupError,
    NotHomomorphism,
    check_hom,
    group_inductive_limit,
    group_quotient_metric,
    hat_lemma_check,
    hat_metric,
    is_bi_invariant,
    left_invariant_floor,
)
from .isometry import AlphaSpec, alpha_derivative, iso_height, iso_orbits, is_iso_rigid, isometry_group
from .metric import FiniteMetricSpace, MetricError
from .orders import common_superspace, decide, uniform_compactness
from .systems import (
    DirectSystemPrefix,
    GrowthWitness,
    InverseSystemPrefix,
    LimitRefused,
    derivative_tower_system,
    direct_limit_approx,
    inverse_limit_approx,
    inverse_limit_exists,
)


class UsageError(Exception):
    pass


def _unwrap(obj):
    # accept this tool's own output files as input
    if isinstance(obj, dict) and "result" in obj and "command" in obj:
        return obj["result"]
    return obj


def _space(path):
    return fio.space_from_json(_unwrap(fio.load(path)))


def _matrix(path):
    obj = fio.load(path)
    return obj["dist"] if isinstance(obj, dict) else obj


def _alpha(arg: str | None) -> AlphaSpec:
    if arg is None or arg in fio.ALPHA_SCHEMA["properties"]["variant"]["enum"]:
        return AlphaSpec(arg or "iso")
    text = arg.strip()
    obj = json.loads(text) if text.startswith("{") else fio.load(arg)
    return fio.alpha_from_json(obj)


# ---------------------------------------------------------------------------
# commands; each returns (exit code, payload)
# ---------------------------------------------------------------------------


def cmd_validate(a):
    X = _space(a.inp)
    return 0, {"valid": True, "n": X.n, "diameter": fio.q(X.diameter), "space": fio.space_to_json(X)}


def cmd_isogroup(a):
    G = isometry_group(_space(a.inp))
    return 0, fio.group_elements_to_json(G)


def cmd_orbits(a):
    return 0, fio.orbits_to_json(iso_orbits(isometry_group(_space(a.inp))))


def cmd_derive(a):
    X = _space(a.inp)
    return 0, fio.derivative_to_json(alpha_derivative(X, _alpha(a.alpha)))


def cmd_iht(a):
    X = _space(a.inp)
    res = iso_height(X)
    out = fio.iht_to_json(res)
    out["rigid"] = is_iso_rigid(X)
    return 0, out


def cmd_gh(a):
    if a.certify:
        if not a.seq:
            raise UsageError("--certify needs --seq with at least two spaces")
        spaces = [_space(p) for p in a.seq]
        cert = gh_convergence_certificate(spaces, a.tol, window=a.window, size_limit=a.size_limit)
        if a.csv:
            with open(a.csv, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["m", "n", "upper_bound"])
                for m, n, b in cert.pair_bounds:
                    w.writerow([m, n, fio.q(b)])
        return (0 if cert.certified else 1), fio.certificate_to_json(cert)
    if not (a.inp and a.other):
        raise UsageError("gh needs --in and --with (or --certify --seq ...)")
    X, Y = _space(a.inp), _space(a.other)
    if a.bounds:
        return 0, fio.estimate_to_json(gh_bounds(X, Y))
    try:
        return 0, fio.estimate_to_json(gh_exact(X, Y, a.size_limit))
    except SizeLimitExceeded as err:
        raise UsageError(str(err)) from None


def cmd_order(a):
    Y, X = _space(a.src), _space(a.dst)
    v = decide(a.rel, X, Y)
    return (0 if v.holds else 1), fio.verdict_to_json(v)


def cmd_compactness(a):
    family = [_space(p) for p in a.inp]
    return 0, fio.compactness_to_json(uniform_compactness(family, a.eps))


def cmd_superspace(a):
    family = [_space(p) for p in a.inp]
    sup = common_superspace(family)
    return 0, {
        "space": fio.space_to_json(sup.space),
        "r": None if sup.r is None else fio.q(sup.r),
        "embeddings": [list(e.image) for e in sup.embeddings],
        "verdicts": [[fio.verdict_to_json(v) for v in trio] for trio in sup.verdicts],
    }


def _group(a):
    if a.name:
        if a.name == "s3":
            return corpus.s3_dn(a.n)
        if a.name == "s3_discrete":
            return corpus.s3_discrete()
        if a.name == "z2":
            return corpus.cyclic_group(2)
        if a.name == "circle":
            return corpus.circle_discrete(a.m, a.n)
        raise UsageError(f"unknown group name {a.name!r}")
    if not a.inp:
        raise UsageError("give --in group.json or --name")
    return fio.group_from_json(_unwrap(fio.load(a.inp)))


def cmd_group(a):
    op = a.op
    if op == "limit":
        name = a.name or "s3"
        if name == "s3":
            res = group_inductive_limit(corpus.S3_LABELS, corpus.s3_table(), corpus.s3_family())
        elif name == "z2":
            fam = AffineFamily(corpus.discrete_matrix(2), corpus.discrete_matrix(2))
            res = group_inductive_limit(["0", "1"], corpus.cyclic_table(2), fam)
        else:
            raise UsageError("group limit knows the families 's3' and 'z2'")
        trace = {}
        for k, v in res.trace.items():
            trace[k] = [[fio.q(x) for x in row] for row in v] if k in ("hat_limit", "constraint", "floor") else v
        out = {"status": res.status, "trace": trace}
        if res.result is not None:
            out.update(fio.quotient_to_json(res.result))
            out["trivial"] = res.result.quotient.n == 1
        return (0 if res.status == "exact" else 1), out
    G = _group(a)
    if op == "hat":
        H = hat_metric(G)
        return 0, {"bi_invariant": is_bi_invariant(G), "hat": fio.group_to_json(H.group)}
    if op == "check-hom":
        if not a.target or a.image is None:
            raise UsageError("check-hom needs --target and --image")
        H = fio.group_from_json(_unwrap(fio.load(a.target)))
        try:
            hom = check_hom([int(t) for t in a.image.split(",")], G, H)
        except NotHomomorphism as err:
            return 1, {"homomorphism": False, "witness": [err.g1, err.g2], "reason": str(err)}
        out = {"homomorphism": True, "non_expansive": hom.non_expansive, "surjective": hom.surjective}
        if hom.non_expansive and hom.surjective:
            out["hat_lemma"] = hat_lemma_check(hom)
        return 0, out
    if op == "floor":
        c = _matrix(a.constraint) if a.constraint else G.metric.dist
        return 0, {"floor": [[fio.q(x) for x in row] for row in left_invariant_floor(G, c).dist]}
    if op == "quotient":
        p = _matrix(a.p) if a.p else G.metric.dist
        return 0, fio.quotient_to_json(group_quotient_metric(G, p))
    raise UsageError(f"unknown group operation {op!r}")  # pragma: no cover - argparse restricts choices


def _system(a):
    if a.name:
        if a.name == "discrete_segment":
            return corpus.discrete_segment_system(a.n)
        if a.name == "tower":
            return derivative_tower_system(_space(a.inp) if a.inp else corpus.path(4))
        raise UsageError(f"unknown system name {a.name!r}")
    if not a.inp:
        raise UsageError("give --in system.json or --name")
    return fio.system_from_json(_unwrap(fio.load(a.inp)))


def _growth(a):
    if a.growth:
        eps, _, offset = a.growth.partition(":")
        off = int(offset or 1)
        return GrowthWitness(eps, lambda n, off=off: n + off)
    if a.name == "discrete_segment":
        return GrowthWitness("1/2", lambda n: n + 1)
    return None


def cmd_system(a):
    P = _system(a)
    if a.op == "validate":
        out = fio.system_to_json(P)
        out["valid"] = True
        return 0, out
    if a.op == "limit":
        if isinstance(P, DirectSystemPrefix):
            L = direct_limit_approx(P, a.tol, window=a.window)
        else:
            verdict = inverse_limit_exists(P, a.eps or ["1/2"], _growth(a))
            try:
                L = inverse_limit_approx(P, a.tol, window=a.window, verdict=verdict)
            except LimitRefused as exc:
                return 1, {"status": "refused", "reason": str(exc)}
        return (0 if L.status != "inconclusive" else 1), fio.limit_to_json(L)
    if a.op == "exists":
        if isinstance(P, DirectSystemPrefix):
            raise UsageError("exists applies to inverse systems")
        v = inverse_limit_exists(P, a.eps or ["1/2"], _growth(a))
        return (0 if v.exists else 1), fio.exists_to_json(v)
    raise UsageError(f"unknown system operation {a.op!r}")  # pragma: no cover


def _parse_param(text: str):
    key, sep, value = text.partition("=")
    if not sep:
        raise UsageError(f"--param expects key=value, got {text!r}")
    try:
        return key, int(value)
    except ValueError:
        return key, value


def cmd_example(a):
    params = dict(_parse_param(p) for p in a.param or [])
    if a.seed is not None and a.name == "random_space":
        params.setdefault("seed", a.seed)
    obj = corpus.build_example(a.name, **params)
    return 0, _serialise(obj)


def _serialise(obj):
    if isinstance(obj, FiniteMetricSpace):
        return {"kind": "space", **fio.space_to_json(obj)}
    if isinstance(obj, FiniteMetricGroup):
        return {"kind": "group", **fio.group_to_json(obj)}
    if isinstance(obj, (DirectSystemPrefix, InverseSystemPrefix)):
        return fio.system_to_json(obj)
    if isinstance(obj, dict):
        return {k: _serialise(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_serialise(v) for v in obj]
    return obj


COMMANDS = {
    "validate": cmd_validate,
    "isogroup": cmd_isogroup,
    "orbits": cmd_orbits,
    "derive": cmd_derive,
    "iht": cmd_iht,
    "gh": cmd_gh,
    "order": cmd_order,
    "compactness": cmd_compactness,
    "superspace": cmd_superspace,
    "group": cmd_group,
    "system": cmd_system,
    "example": cmd_example,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--seed", type=int, default=None)

    p = _Parser(prog="finmetric", description="Finite metric spaces, GH distances, orders and metric groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("validate", "isogroup", "orbits", "iht"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--in", dest="inp", required=True)

    s = sub.add_parser("derive", parents=[common])
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--alpha", default=None, help="variant name, inline JSON, or a JSON file")

    s = sub.add_parser("gh", parents=[common])
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--bounds", action="store_true")
    mode.add_argument("--certify", action="store_true")
    s.add_argument("--in", dest="inp")
    s.add_argument("--with", dest="other")
    s.add_argument("--seq", nargs="+")
    s.add_argument("--tol", default="1/10")
    s.add_argument("--window", type=int, default=3)
    s.add_argument("--size-limit", type=int, default=None)
    s.add_argument("--csv", default=None)

    s = sub.add_parser("order", parents=[common])
    s.add_argument("--rel", choices=["preceq", "preceq_s", "preceq_i"], required=True)
    s.add_argument("--from", dest="src", required=True, help="the larger space Y")
    s.add_argument("--to", dest="dst", required=True, help="the space X tested against Y")

    s = sub.add_parser("compactness", parents=[common])
    s.add_argument("--in", dest="inp", nargs="+", required=True)
    s.add_argument("--eps", nargs="+", required=True)

    s = sub.add_parser("superspace", parents=[common])
    s.add_argument("--in", dest="inp", nargs="+", required=True)

    s = sub.add_parser("group", parents=[common])
    s.add_argument("op", choices=["hat", "check-hom", "floor", "quotient", "limit"])
    s.add_argument("--in", dest="inp")
    s.add_argument("--name")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--m", type=int, default=6)
    s.add_argument("--target")
    s.add_argument("--image", help="comma-separated target indices")
    s.add_argument("--constraint")
    s.add_argument("--p")

    s = sub.add_parser("system", parents=[common])
    s.add_argument("op", choices=["validate", "limit", "exists"])
    s.add_argument("--in", dest="inp")
    s.add_argument("--name", choices=["discrete_segment", "tower"])
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--tol", default="1/10")
    s.add_argument("--window", type=int, default=3)
    s.add_argument("--eps", nargs="+")
    s.add_argument("--growth", help="EPS:OFFSET, claiming dense sets of member n need n+OFFSET points")

    s = sub.add_parser("example", parents=[common])
    s.add_argument("--name", required=True)
    s.add_argument("--param", action="append", help="key=value, repeatable")
    return p


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _is_matrix(v):
    return isinstance(v, list) and v and all(isinstance(r, list) and all(not isinstance(x, (list, dict)) for x in r) for r in v)


def render_table(payload, indent: str = "") -> str:
    lines = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            if isinstance(v, dict):
                lines.append(f"{indent}{k}:")
                lines.append(render_table(v, indent + "  "))
            elif _is_matrix(v):
                lines.append(f"{indent}{k}:")
                rows = [[str(x) for x in r] for r in v]
                width = max((len(x) for r in rows for x in r), default=1)
                lines.extend(indent + "  " + " ".join(x.rjust(width) for x in r) for r in rows)
            else:
                lines.append(f"{indent}{k}: {json.dumps(v)}")
    else:
        lines.append(indent + json.dumps(payload))
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        code, payload = COMMANDS[args.command](args)
    except (UsageError, MetricError, GroupError, fio.SchemaError, FileNotFoundError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    if args.format == "table":
        print(render_table(payload), file=out)
    else:
        print(fio.dumps({"command": args.command, "result": payload}), file=out)
    return code


def main():  # pragma: no cover
    sys.exit(run())
