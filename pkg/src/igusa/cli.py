"""Command line entry point: ``igusa <command> [options]``.

Exit status is 0 on success, 2 when a verdict reports unmet hypotheses and
1 on errors.
"""

import argparse
import sys

from igusa.errors import IgusaError
from igusa.pipeline import COCYCLE_CHECKS, Requests, run_pipeline
from igusa.scenarios import FAMILIES, build_scenario, load_scenario
from igusa.symbolic import LPolynomial
from igusa.zeta_engine import DEFAULT_DEPTH

COMMANDS = ("zeta", "laurent", "verdict", "identities", "cocycle")


def _common(parser):
    parser.add_argument("--scenario", choices=[f for f in FAMILIES if f != "custom"], default="tate")
    parser.add_argument("--scenario-file", help="JSON scenario (overrides --scenario)")
    parser.add_argument("--n", type=int, default=1)
    parser.add_argument("--p", type=int, default=2)
    parser.add_argument("--twist", type=int, default=None, help="measure |f|^twist dx")
    parser.add_argument("--a", type=int, default=None, help="exponent of the monomial family")
    parser.add_argument("--chi", default="auto", help='character, e.g. "(u:1,u:0,u:-1)"')
    parser.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    parser.add_argument("--budget", type=int, default=10**7)
    parser.add_argument("--ansatz", choices=("auto", "spec"), default="spec",
                        help="spec uses the family's pinned denominator when there is one")
    parser.add_argument("--level", type=int, nargs=2, default=(1, 1), metavar=("M", "N"),
                        help="test-function basis: indicators of p^N-cosets inside p^-M R^n")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--timing", action="store_true", help="include wall-clock timings")


def build_parser():
    parser = argparse.ArgumentParser(prog="igusa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("zeta", help="zeta integral of the scenario's test function")
    _common(p)
    p = sub.add_parser("laurent", help="Laurent expansion at an integer point")
    _common(p)
    p.add_argument("--at", type=int, action="append", default=None)
    p.add_argument("--terms", type=int, default=3)
    p = sub.add_parser("verdict", help="pole bound and extendability verdict")
    _common(p)
    p = sub.add_parser("identities", help="equivariance and Laurent coefficient identities")
    _common(p)
    p.add_argument("--check", action="append", choices=("igu-inv", "equivariance", "generalized-order",
                                                       "independence", "bound-replay"))
    p.add_argument("--g", action="append", help="Lambda vector such as 1,0,-1 or an element like (pI,I)")
    p = sub.add_parser("cocycle", help="residue cocycle checks")
    _common(p)
    p.add_argument("--check", action="append", choices=COCYCLE_CHECKS)
    p.add_argument("--g", action="append", help="Lambda vector such as 1,0,-1 or an element like (pI,I)")
    return parser


def _scenario(args):
    if args.scenario_file:
        return load_scenario(args.scenario_file)
    return build_scenario(
        args.scenario, n=args.n, p=args.p, twist=args.twist, chi=args.chi, depth=args.depth,
        budget=args.budget, a=args.a, ansatz="auto" if args.ansatz == "auto" else None,
    )


def _requests(args):
    req = Requests(basis_level=tuple(args.level), timing=args.timing)
    if args.command == "laurent":
        req.laurent = tuple(args.at or [0])
        req.terms = args.terms
    elif args.command == "verdict":
        req.verdict = True
    elif args.command == "identities":
        req.identities = tuple(args.check or ["igu-inv"])
    elif args.command == "cocycle":
        req.cocycle = tuple(args.check or ["identity"])
    if getattr(args, "g", None):
        req.g = tuple(_parse_g(g) for g in args.g)
    return req


def _parse_g(text):
    body = text.strip().strip("()[]")
    try:
        return tuple(int(x) for x in body.split(","))
    except ValueError:
        return text.strip()


def _lp(data):
    return str(LPolynomial.from_json(data))


def render_text(report):
    """A human summary of a report."""
    data = report.to_json()
    sc = data["scenario"]
    lines = [f"scenario: {sc['family']} n={sc['n']} p={sc['p']} twist={sc['measure_twist']} chi={sc['chi']}"]
    z = data.get("zeta")
    if z:
        lines.append(f"Z = {z['human']}  [{z['provenance']}]")
        lines.append(f"pole order at s=0: {z['pole_order_at_0']}")
        if "igusa_relation" in z:
            lines.append(f"igusa relation: {z['igusa_relation']}")
    for entry in data.get("laurent", []):
        s = entry["series"]
        terms = ", ".join(f"u^{s['leading'] + j}: {_lp(c)}" for j, c in enumerate(s["coeffs"]))
        lines.append(f"at s={entry['s0']}: pole order {entry['pole_order']}; {terms}")
    v = data.get("verdict")
    if v:
        extra = f" ({v['reason']})" if v["reason"] else ""
        lines.append(f"verdict: {v['conclusion']}{extra}; ell_chi={v['ell_chi']}, "
                     f"observed={v['observed_pole_order']}")
    for name, res in sorted(data.get("identities", {}).items()):
        lines.append(f"identity {name}: {'holds' if res['holds'] else 'FAILS'}")
    for name, res in sorted(data.get("cocycle", {}).items()):
        lines.append(f"cocycle {name}: {res['result']}")
    for name, err in sorted(data["errors"].items()):
        lines.append(f"error in {name}: {err['type']}: {err['message']}")
    for name, secs in sorted((data.get("timing") or {}).items()):
        lines.append(f"time {name}: {secs:.3f}s")
    return "\n".join(lines)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        scenario = _scenario(args)
    except (IgusaError, OSError, ValueError) as exc:
        print(f"igusa: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report = run_pipeline(scenario, _requests(args))
    print(report.dumps() if args.format == "json" else render_text(report))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
