"""Command-line front end: coeffs, verify, cusps, sturm, scan."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .eta import EtaQuotient, fmt_rational, holomorphy_certificate
from .generators import SERIES_IDS, generate
from .modular import gamma0_index, gamma1_index, sieve_group_index
from .series import PrecisionError, read_csv, write_csv
from .sturm import (
    BOUND_POLICIES,
    POLICY_ALIASES,
    PRESETS,
    CongruenceClaim,
    UnsupportedClaimError,
    plan_claim,
    scan_progressions,
    sturm_bound,
    verify_claim,
)

EXIT_PASS, EXIT_VIOLATED, EXIT_USAGE, EXIT_INCOMPLETE = 0, 1, 2, 3


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational 'num/den': {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mocktheta", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="dump coefficients as CSV")
    p.add_argument("--series", choices=SERIES_IDS, required=True)
    p.add_argument("--count", type=_positive, required=True)
    p.add_argument("--mod", type=int, default=0, help="reduce modulo this integer (0 = exact)")
    p.add_argument("--out", type=Path, help="CSV path (default stdout)")

    p = sub.add_parser("verify", help="verify a congruence claim and emit a certificate")
    p.add_argument("--claim", choices=sorted(PRESETS))
    p.add_argument("--series", choices=SERIES_IDS)
    p.add_argument("--p", type=int)
    p.add_argument("--A", type=int)
    p.add_argument("--B", type=_int_list, help="comma-separated residues")
    p.add_argument("--bound", default="max",
                   help=f"one of {', '.join(BOUND_POLICIES)} or an explicit integer bound")
    p.add_argument("--coeffs-csv", type=Path, help="check a previously dumped series instead of generating")
    p.add_argument("--skip-ledger", action="store_true", help="coefficients only; certificate stays incomplete")
    p.add_argument("--json", action="store_true", help="print the certificate JSON to stdout")
    p.add_argument("--out", type=Path, help="write the certificate JSON here")
    p.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable output")
    p.add_argument("--figure", type=Path, help="residue heat map (PNG/PDF/SVG)")
    p.add_argument("--ledger-figure", type=Path, help="cusp margin scatter")
    p.add_argument("--threads", type=_positive, default=1)

    p = sub.add_parser("cusps", help="cusp-by-cusp holomorphy ledger")
    p.add_argument("--family", choices=("cesaro", "omega"), required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--eta", default="", help="eta quotient 'delta:r,...'")
    p.add_argument("--level", type=_positive, required=True)
    p.add_argument("--group", choices=("gamma0", "gamma1"), required=True)
    p.add_argument("--residues", type=_int_list,
                   help="sieved residues mod m (default: the preset with this family and m)")
    p.add_argument("--json", type=Path, help="write the ledger JSON here")
    p.add_argument("--figure", type=Path)
    p.add_argument("--threads", type=_positive, default=1)

    p = sub.add_parser("sturm", help="exact Sturm bound ceil(weight*index/24)")
    p.add_argument("--weight", type=_rational, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--index", type=_rational)
    g.add_argument("--gamma0", type=_positive, metavar="N", help="use the index of Gamma_0(N)")
    g.add_argument("--gamma1", type=_positive, metavar="N", help="use the index of Gamma_1(N)")
    g.add_argument("--sieve", type=_positive, metavar="M", help="use the sieve-group index for m")

    p = sub.add_parser("scan", help="search progressions with vanishing coefficients (heuristic)")
    p.add_argument("--series", choices=SERIES_IDS, required=True)
    p.add_argument("--count", type=_positive, required=True)
    p.add_argument("--pmax", type=_positive, required=True)
    p.add_argument("--amax", type=_positive, required=True)
    p.add_argument("--json", type=Path)
    return ap


# -- commands -------------------------------------------------------------------------

def cmd_coeffs(args) -> int:
    if args.mod < 0:
        raise ValueError("--mod must be >= 0")
    s = generate(args.series, args.count, args.mod)
    if args.out is None:
        write_csv(s, sys.stdout)
    else:
        write_csv(s, args.out)
    return EXIT_PASS


def _claim_from_args(args) -> CongruenceClaim:
    triple = (args.series, args.p, args.A, args.B)
    if args.claim:
        if any(v is not None for v in triple):
            raise ValueError("--claim excludes --series/--p/--A/--B")
        return PRESETS[args.claim]
    if any(v is None for v in triple):
        raise ValueError("give --claim or all of --series, --p, --A, --B")
    return CongruenceClaim(args.series, args.p, args.A, args.B)


def cmd_verify(args) -> int:
    claim = _claim_from_args(args)
    if args.bound in BOUND_POLICIES or args.bound in POLICY_ALIASES:
        policy, explicit = args.bound, None
    else:
        try:
            policy, explicit = "max", int(args.bound)
        except ValueError:
            raise ValueError(f"--bound must be one of {BOUND_POLICIES} or an integer") from None
        if explicit < 0:
            raise ValueError("--bound must be nonnegative")
    coeffs = read_csv(args.coeffs_csv) if args.coeffs_csv else None
    cert = verify_claim(claim, policy=policy, threads=args.threads, coefficients=coeffs,
                        ledger=not args.skip_ledger, bound=explicit)
    text = cert.to_json(include_timings=not args.no_timings)
    if args.out:
        args.out.write_text(text + "\n")
    if args.json:
        print(text)
    else:
        ledger = cert.ledger
        rows = [
            ("claim", str(claim)),
            ("sturmBound", f"{cert.sturm_bound} ({cert.provenance})"),
            ("rawLimit", cert.raw_limit),
            ("coefficientsChecked", cert.coefficients_checked),
            ("firstFailure", cert.first_failure),
            ("residueDisjoint", cert.residue_disjoint),
            ("cusps", None if ledger is None else len(ledger.entries)),
            ("negativeMargins", None if ledger is None else len(ledger.failures)),
            ("minMargin", None if ledger is None or ledger.min_margin is None else fmt_rational(ledger.min_margin)),
            ("pass", cert.passed),
        ]
        for k, v in rows:
            print(f"{k}\t{v}")
    if args.figure:
        from .report import plot_residues

        src = coeffs if coeffs is not None else generate(claim.series_id, min(cert.raw_limit, 4000) + 1, claim.p)
        plot_residues(src, claim.p, claim.A, claim.residues, args.figure, limit=min(cert.raw_limit, 4000))
    if args.ledger_figure and cert.ledger is not None:
        from .report import plot_cusp_margins

        plot_cusp_margins(cert.ledger, args.ledger_figure)
    return cert.exit_code()


def _default_residues(family: str, m: int) -> tuple[int, ...]:
    for claim in PRESETS.values():
        if claim.series_id != family:
            continue
        plan = plan_claim(claim)
        if plan.sieve_modulus == m:
            return plan.embedded_residues
    raise ValueError(f"no preset for {family} with m={m}; pass --residues")


def cmd_cusps(args) -> int:
    Q = EtaQuotient.parse(args.eta, args.level)
    residues = args.residues if args.residues is not None else _default_residues(args.family, args.m)
    cert = holomorphy_certificate(args.family, args.m, Q, args.group, args.level,
                                  residues=residues, threads=args.threads)
    print("cusp\twidth\tpoleBound\tetaOrder\tmargin\tworstShift\tcomponent")
    for e in cert.entries:
        d = e.as_dict()
        print("\t".join(str(d[k]) for k in ("cusp", "width", "poleBound", "etaOrder", "margin", "worstShift", "component")))
    mm = cert.min_margin
    print(f"# cusps={len(cert.entries)} negative={len(cert.failures)} "
          f"minMargin={None if mm is None else fmt_rational(mm)} pass={cert.passed}")
    if args.json:
        payload = {
            "family": cert.family, "m": cert.m, "residues": list(cert.residues),
            "etaQuotient": str(Q), "group": cert.group, "level": cert.level,
            "pass": cert.passed, "entries": [e.as_dict() for e in cert.entries],
        }
        args.json.write_text(json.dumps(payload, indent=2) + "\n")
    if args.figure:
        from .report import plot_cusp_margins

        plot_cusp_margins(cert, args.figure)
    return EXIT_PASS if cert.passed else EXIT_INCOMPLETE


def cmd_sturm(args) -> int:
    if args.index is not None:
        index = args.index
    elif args.gamma0:
        index = gamma0_index(args.gamma0)
    elif args.gamma1:
        index = gamma1_index(args.gamma1)
    else:
        index = sieve_group_index(args.sieve)
    print(sturm_bound(args.weight, index))
    return EXIT_PASS


def cmd_scan(args) -> int:
    found = scan_progressions(args.series, args.count, args.pmax, args.amax)
    print("series\tp\tA\tB\tchecked\tverified")
    for c in found:
        print(f"{c.series_id}\t{c.p}\t{c.A}\t{c.B}\t{c.checked}\t{c.verified}")
    if args.json:
        args.json.write_text(json.dumps([c.as_dict() for c in found], indent=2) + "\n")
    return EXIT_PASS


COMMANDS = {"coeffs": cmd_coeffs, "verify": cmd_verify, "cusps": cmd_cusps,
            "sturm": cmd_sturm, "scan": cmd_scan}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, UnsupportedClaimError, PrecisionError) as exc:
        print(f"mocktheta {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"mocktheta {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
