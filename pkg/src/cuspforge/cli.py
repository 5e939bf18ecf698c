"""Command-line front end: structured JSON on stdout, exit 2 on bad input.

Commands: genus, cusps, orbits, verdict (x1 | x0), survey (x1),
eta (series | div), certify (x1-20).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .arith import full_units, pm_one, subgroup_generated
from .criteria import survey_x1, x0_verdict, x1_verdict
from .cusps import GAMMA0, GAMMA1, atlas, atlas_delta
from .errors import BadFlag, DomainError, UnknownCommand
from .etaq import EtaQuotient, certify_x1_20, divisor, eta_series, quotient_series
from .genus import genus_delta
from .symmetry import cusp_orbits_x1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadFlag(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="cuspforge", description=__doc__)
    sub = p.add_subparsers(dest="command")

    def add_delta_flags(sp):
        grp = sp.add_mutually_exclusive_group()
        grp.add_argument("--gamma1", action="store_true", help="Delta = {+-1} (default)")
        grp.add_argument("--gamma0", action="store_true", help="Delta = all units")
        grp.add_argument("--delta", help="comma-separated generators of Delta")

    sp = sub.add_parser("genus", description="Genus profile of X_Delta(N).")
    sp.add_argument("--level", type=int, required=True)
    add_delta_flags(sp)

    sp = sub.add_parser("cusps", description="Cusp atlas with widths.")
    sp.add_argument("--level", type=int, required=True)
    add_delta_flags(sp)

    sp = sub.add_parser("orbits", description="Cusp orbits of X_1(N) under [a], W_Q.")
    sp.add_argument("--level", type=int, required=True)

    sp = sub.add_parser("verdict", description="Weierstrass verdict for irregular cusps.")
    sp.add_argument("curve", choices=["x1", "x0"])
    sp.add_argument("--level", type=int, help="N (x1 only)")
    sp.add_argument("--d", type=int, help="divisor invariant of the cusps (x1 only)")
    sp.add_argument("--p", type=int, help="prime p (x0 only)")
    sp.add_argument("--m", type=int, help="M with N = p^2 M (x0 only)")

    sp = sub.add_parser("survey", description="Verdicts for all levels up to a bound.")
    sp.add_argument("curve", choices=["x1"])
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--format", choices=["json", "tsv"], default="json")
    sp.add_argument("--jobs", type=int, default=None)

    sp = sub.add_parser("eta", description="Eta-block series and quotient divisors.")
    sp.add_argument("what", choices=["series", "div"])
    sp.add_argument("--level", type=int, help="N (series)")
    sp.add_argument("--r", type=int, help="residue r (series)")
    sp.add_argument("--terms", type=int, default=None)
    sp.add_argument("--spec", help="JSON file with {level, exponents} (div)")

    sp = sub.add_parser("certify", description="Recompute a stored certificate.")
    sp.add_argument("target", choices=["x1-20"])

    return p


def _delta_for(args, n: int):
    if args.gamma0:
        return full_units(n), GAMMA0
    if args.delta:
        gens = tuple(int(t) for t in args.delta.split(",") if t.strip())
        return subgroup_generated(n, gens), "delta"
    return pm_one(n), GAMMA1


def _require(args, names):
    for name in names:
        if getattr(args, name) is None:
            raise BadFlag(f"--{name} is required here")


def _dispatch(args) -> tuple[dict, dict, str | None]:
    """Returns (params, result, raw_text); raw_text bypasses the envelope."""
    cmd = args.command
    if cmd == "genus":
        delta, tag = _delta_for(args, args.level)
        profile = genus_delta(args.level, delta)
        return {"level": args.level, "group": tag}, profile.to_json(), None

    if cmd == "cusps":
        delta, tag = _delta_for(args, args.level)
        params = {"level": args.level, "group": tag}
        if tag == GAMMA0:
            return params, {"cusps": atlas(args.level, GAMMA0).to_json()}, None
        if tag == GAMMA1:
            return params, {"cusps": atlas(args.level, GAMMA1).to_json()}, None
        orbits = atlas_delta(args.level, delta)
        return (
            params,
            {
                "delta": list(delta.elements),
                "cusps": [
                    {
                        "representative": o.representative.key(),
                        "members": [c.key() for c in o.members],
                        "orbit_size": o.orbit_size,
                    }
                    for o in orbits
                ],
            },
            None,
        )

    if cmd == "orbits":
        return {"level": args.level}, cusp_orbits_x1(args.level).to_json(), None

    if cmd == "verdict":
        if args.curve == "x1":
            _require(args, ["level", "d"])
            v = x1_verdict(args.level, args.d)
            return (
                {"curve": "x1", "level": args.level, "d": args.d},
                {"N": args.level, "d": args.d, **v.to_json()},
                None,
            )
        _require(args, ["p", "m"])
        v = x0_verdict(args.p, args.m)
        return (
            {"curve": "x0", "p": args.p, "m": args.m},
            {"p": args.p, "M": args.m, "N": args.p * args.p * args.m, **v.to_json()},
            None,
        )

    if cmd == "survey":
        report = survey_x1(args.max, jobs=args.jobs)
        params = {"curve": "x1", "max": args.max}
        if args.format == "tsv":
            return params, {}, report.to_tsv()
        return params, report.to_json(), None

    if cmd == "eta":
        if args.what == "series":
            _require(args, ["level", "r"])
            series = eta_series(args.level, args.r, args.terms)
            return (
                {"what": "series", "level": args.level, "r": args.r},
                series.to_json(),
                None,
            )
        _require(args, ["spec"])
        with open(args.spec) as fh:
            spec = json.load(fh)
        quot = EtaQuotient.make(int(spec["level"]), spec["exponents"])
        div = divisor(quot)
        series = quotient_series(quot, args.terms)
        return (
            {"what": "div", "spec": os.path.basename(args.spec)},
            {
                "quotient": quot.to_json(),
                "leading_exponent": str(series.leading_exponent()),
                "divisor": div.to_json(),
            },
            None,
        )

    if cmd == "certify":
        gapseq, verdict = certify_x1_20()
        return (
            {"target": "x1-20"},
            {
                "genus": gapseq.genus,
                "gaps": list(gapseq.gaps),
                "weight": gapseq.weight,
                "verdict": verdict.to_json(),
            },
            None,
        )

    raise UnknownCommand("no command given; see --help")


def run(argv, stdout=None) -> int:
    out = stdout or sys.stdout
    try:
        args = _build_parser().parse_args(argv)
        params, result, raw = _dispatch(args)
    except (DomainError, BadFlag) as exc:
        json.dump(
            {"error": {"type": type(exc).__name__, "message": str(exc)}},
            out,
            indent=2,
        )
        out.write("\n")
        return 2
    except SystemExit as exc:  # argparse -h
        return int(exc.code or 0)
    except Exception as exc:  # invariant violation: report, never traceback
        json.dump(
            {"error": {"type": type(exc).__name__, "message": str(exc)}},
            out,
            indent=2,
        )
        out.write("\n")
        return 1
    if raw is not None:
        out.write(raw)
        return 0
    envelope = {
        "command": args.command,
        "params": params,
        "result": result,
        "version": __version__,
    }
    json.dump(envelope, out, indent=2)
    out.write("\n")
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
