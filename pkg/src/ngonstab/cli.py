"""Command-line interface.

Subcommands mirror the library layers: `reduce` emits the block-diagonal
reduced Hessian, `classify` the per-mode stability report of an n-gon,
`beta` one beta-system spectrum, `sweep` a CSV stability chart over a
(beta, e) grid, `certify` the checkpoint certificate and clearance,
`region` a membership query against the certified region, and `operator`
a Galerkin positivity scan.

Exit codes: 0 success/certified, 2 numeric-domain refusal (eccentricity
beyond the integration cap), 3 certification failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import beta_certifier, linsys, operator_positivity, reduction, spectrum
from .configuration import build_ngon
from .errors import CertificationError, NearSingularError

EXIT_OK = 0
EXIT_REFUSED = 2
EXIT_CERT_FAILED = 3
EXIT_USAGE = 64

OFFBLOCK_GATE = 1e-10


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_range(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"range must be START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise _UsageError(f"bad number in range {text!r}") from exc
    if step <= 0:
        raise _UsageError("range step must be positive")
    values = []
    i = 0
    while True:
        x = start + i * step
        if x > stop + 1e-9 * step:
            break
        values.append(x)
        i += 1
    return values


def _build_parser() -> _Parser:
    parser = _Parser(prog="ngonstab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="block-diagonal reduced Hessian of the n-gon")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("classify", help="per-mode stability report of the n-gon")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--e", type=float, required=True)
    p.add_argument("--tol", type=float, default=linsys.DEFAULT_TOL)

    p = sub.add_parser("beta", help="spectrum of one beta-system monodromy")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--e", type=float, required=True)
    p.add_argument("--tol", type=float, default=linsys.DEFAULT_TOL)

    p = sub.add_parser("sweep", help="CSV stability chart over a (beta, e) grid")
    p.add_argument("--beta", required=True, metavar="A:B:STEP")
    p.add_argument("--e", required=True, metavar="A:B:STEP")
    p.add_argument("--out", required=True)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("certify", help="verify checkpoints and emit the region certificate")
    p.add_argument("--segment", type=float, default=None,
                   help="also require [0, SEGMENT) x [0, 1) to be covered")
    p.add_argument("--checkpoints", default=None,
                   help="JSON file with [{beta0, e0}, ...] overriding the default ladder")
    p.add_argument("--tol", type=float, default=linsys.DEFAULT_TOL)

    p = sub.add_parser("region", help="membership of (beta, e) in the certified region")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--e", type=float, required=True)
    p.add_argument("--checkpoints", default=None)

    p = sub.add_parser("operator", help="Galerkin positivity scan")
    p.add_argument("--kind", choices=("scalar", "planar", "block"), required=True)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--e", type=float, required=True)
    p.add_argument("--omega-count", type=int, default=operator_positivity.OMEGA_COUNT_DEFAULT)
    p.add_argument("--modes", type=int, default=operator_positivity.N_MODES_DEFAULT)
    return parser


def _load_checkpoints(path: str | None) -> beta_certifier.RegionCertificate:
    if path is None:
        return beta_certifier.default_certificate()
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if isinstance(raw, dict):
        raw = raw["checkpoints"]
    cps = [beta_certifier.Checkpoint(float(c["beta0"]), float(c["e0"])) for c in raw]
    return beta_certifier.RegionCertificate(checkpoints=cps)


def _cmd_reduce(args) -> int:
    config = build_ngon(args.n)
    basis = reduction.build_basis(config)
    reduced = reduction.reduce_hessian(config, basis)
    payload = {"n": args.n, **reduction.reduced_blocks_json(reduced)}
    _emit(payload, args.out)
    return EXIT_OK if reduced.offblock_residual <= OFFBLOCK_GATE else EXIT_CERT_FAILED


def _cmd_classify(args) -> int:
    report = spectrum.classify_ngon(args.n, args.e, args.tol)
    _emit(spectrum.report_json(report), None)
    return EXIT_OK


def _cmd_beta(args) -> int:
    sp = beta_certifier.beta_monodromy(args.beta, args.e, args.tol)
    payload = {"beta": args.beta, "e": args.e, **spectrum.spectrum_json(sp)}
    _emit(payload, None)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    betas = _parse_range(args.beta)
    es = _parse_range(args.e)
    cells = [(b, e) for b in betas for e in es]

    def one(cell):
        b, e = cell
        sp = beta_certifier.beta_monodromy(b, e, args.tol)
        return sp.classification, sp.unit_margin

    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(one, cells))
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("beta,e,class,margin\n")
        for (b, e), (label, margin) in zip(cells, results):
            fh.write(f"{_fmt(b)},{_fmt(e)},{label},{_fmt(margin)}\n")
    return EXIT_OK


def _cmd_certify(args) -> int:
    cert = _load_checkpoints(args.checkpoints)
    beta_certifier.verify_checkpoints(cert, args.tol)
    clearance = beta_certifier.segment_clearance(cert)
    _emit(beta_certifier.certificate_json(cert), None)
    if args.segment is not None and not args.segment < clearance:
        print(
            f"segment {args.segment} not covered: clearance {_fmt(clearance)}",
            file=sys.stderr,
        )
        return EXIT_CERT_FAILED
    return EXIT_OK


def _cmd_region(args) -> int:
    cert = _load_checkpoints(args.checkpoints)
    member, witness = beta_certifier.region_membership(cert, args.beta, args.e)
    payload = {
        "beta": args.beta,
        "e": args.e,
        "member": member,
        "witness": None
        if witness is None
        else {
            "beta0": witness.beta0,
            "e0": witness.e0,
            "region": witness.region,
            "bound": witness.bound,
        },
    }
    _emit(payload, None)
    return EXIT_OK


def _cmd_operator(args) -> int:
    if args.kind == "scalar":
        if args.delta is None:
            raise _UsageError("--kind scalar needs --delta")
        kind = operator_positivity.ScalarOperator(args.delta)
    elif args.kind == "planar":
        if args.beta is None:
            raise _UsageError("--kind planar needs --beta")
        kind = operator_positivity.PlanarOperator(args.beta)
    else:
        if args.n is None or args.l is None:
            raise _UsageError("--kind block needs --n and --l")
        kind = operator_positivity.BlockOperator(args.n, args.l)
    report = operator_positivity.positivity_scan(
        kind, args.e, omega_count=args.omega_count, n_modes=args.modes
    )
    _emit(operator_positivity.report_json(report), None)
    return EXIT_OK


_COMMANDS = {
    "reduce": _cmd_reduce,
    "classify": _cmd_classify,
    "beta": _cmd_beta,
    "sweep": _cmd_sweep,
    "certify": _cmd_certify,
    "region": _cmd_region,
    "operator": _cmd_operator,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NearSingularError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT_FAILED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())
