"""Command-line driver: JSON in, JSON out."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import brauer, coker, dominance, gallery, io, reduction
from .field import FieldSpec
from .gradedform import GradedSymMatrix, discriminant, smoothness

EXIT_ERROR = 3
EQUIV_CODES = {brauer.Verdict.PROBABLY_EQUAL: 0, brauer.Verdict.NOT_EQUAL: 1, brauer.Verdict.INCONCLUSIVE: 2}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors must not collide with verdict codes
        _fail("UsageError", message)


def _fail(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    raise SystemExit(EXIT_ERROR)


def _read(path: str | None) -> dict:
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid JSON in {path or 'stdin'}: {exc}") from exc


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _ints(text: str | None) -> tuple[int, ...]:
    if text is None or text.strip() == "":
        return ()
    return tuple(int(t) for t in text.split(","))


def _field(text: str) -> FieldSpec:
    if text.upper() in ("QQ", "Q", "RATIONAL"):
        return FieldSpec(None)
    return FieldSpec(int(text))


def _matrix(path: str | None) -> GradedSymMatrix:
    return io.matrix_from_json(_read(path))


def cmd_discriminant(args) -> int:
    q = _matrix(args.input)
    curve = smoothness(discriminant(q), seed=args.seed)
    _emit(io.curve_to_json(curve))
    return 0


def cmd_classify(args) -> int:
    q = _matrix(args.input)
    _emit(io.profile_to_json(coker.classify(q, require_smooth=args.require_smooth, seed=args.seed)))
    return 0


def cmd_residue(args) -> int:
    q = _matrix(args.input)
    _emit(io.square_class_to_json(brauer.residue_along_curve(q, args.line, seed=args.seed)))
    return 0


def _square_class(path: str, line: str, seed: int) -> brauer.SquareClass:
    doc = _read(path)
    if doc.get("type") == "square-class":
        return io.square_class_from_json(doc)
    return brauer.residue_along_curve(io.matrix_from_json(doc), line, seed=seed)


def cmd_equiv(args) -> int:
    s1 = _square_class(args.a, args.line, args.seed)
    s2 = _square_class(args.b, args.line, args.seed)
    primes = _ints(args.primes) or brauer.DEFAULT_PRIMES
    v = brauer.square_class_equal(s1, s2, trials=args.trials, primes=primes, seed=args.seed)
    _emit(io.report_to_json({"equivalence": v.to_json()}))
    return EQUIV_CODES[v.verdict]


def cmd_reduce(args) -> int:
    q = _matrix(args.input)
    N, cols = io.polymatrix_from_json(_read(args.isotropic))
    iso = reduction.verify_isotropic(q, N, seed=args.seed, col_degrees=cols)
    _emit(io.matrix_to_json(reduction.reduce(q, iso, seed=args.seed)))
    return 0


def cmd_extend(args) -> int:
    q = _matrix(args.input)
    bdeg = _ints(args.bdeg)
    if args.rho:
        rho, _ = io.polymatrix_from_json(_read(args.rho))
        adeg = _ints(args.adeg)
    else:
        import random
        adeg, rho = reduction.random_rho(q, bdeg, random.Random(args.seed))
    ext = reduction.extend_hyperbolic_full(q, adeg, bdeg, rho)
    doc = io.matrix_to_json(ext.form)
    if args.isotropic_out:
        with open(args.isotropic_out, "w") as fh:
            json.dump(io.polymatrix_to_json(ext.isotropic, ext.isotropic_degrees), fh, indent=2, sort_keys=True)
    _emit(doc)
    return 0


def cmd_isotropic(args) -> int:
    q = _matrix(args.input)
    res = reduction.find_isotropic(q, args.rank, args.ansatz, max_tries=args.tries, seed=args.seed)
    if res is None:
        _emit(io.report_to_json({"isotropic": None}))
        return 1
    _emit(io.polymatrix_to_json(res.N, res.col_degrees))
    return 0


def cmd_dominance(args) -> int:
    inst = dominance.DominanceInstance(args.r, args.l, args.k, args.p, args.seed)
    _emit(io.report_to_json({"dominance": dominance.dominance_check(inst, rational=args.rational).to_json()}))
    return 0


def cmd_dominance_table(args) -> int:
    report = dominance.dominance_table(p=args.p, seeds=_ints(args.seeds) or (0, 1, 2), rational=args.rational)
    if args.text:
        sys.stdout.write(dominance.format_table(report) + "\n")
    else:
        _emit(io.report_to_json({"dominance_table": report}))
    return 0


def cmd_gallery(args) -> int:
    field = _field(args.field)
    name = args.recipe
    if name == "halfperiod":
        obj = gallery.halfperiod_pattern(args.d, args.k, field, args.seed)
    elif name == "even-theta":
        obj = gallery.even_theta_pattern(args.d, args.k, field, args.seed)
    elif name == "odd-theta":
        obj = gallery.odd_theta_pattern(args.d, args.k, field, args.seed)
    elif name == "hpt":
        obj = gallery.hpt_form(field)
    elif name == "nodal-gm":
        chain = gallery.nodal_gm_chain(args.seed, field)
        if args.part == "N3":
            obj = chain.N3
        elif args.part == "N4":
            obj = chain.N4
        else:
            _emit(io.report_to_json({"nodal_gm": chain.to_json()}))
            return 0
    elif name == "ansatz":
        _emit(io.report_to_json({"ansatz": [r.to_json() for r in gallery.ansatz_solutions()]}))
        return 0
    elif name == "patterns":
        _emit(io.report_to_json({"pattern": gallery.cor12_patterns(args.d, args.kind, args.k).to_json()}))
        return 0
    else:
        raise CliError(f"unknown recipe {name!r}; known: {', '.join(sorted(RECIPE_NAMES))}")
    _emit(io.matrix_to_json(obj))
    return 0


def cmd_psi(args) -> int:
    field = _field(args.field)
    t = field(args.t)
    if args.input:
        doc = _read(args.input)
        parts = {k: io.polymatrix_from_json(doc[k])[0] for k in ("A", "M", "eta", "theta", "J")}
        phi = io.polymatrix_from_json(doc["phi"])[0] if "phi" in doc else None
        q = reduction.degeneration_family(parts["A"], parts["M"], parts["eta"], parts["theta"], parts["J"],
                                          parts["A"].field(args.t), phi, doc.get("degrees"), doc.get("twist"))
    else:
        inp = reduction.random_psi_inputs(args.g, args.h, field, args.seed)
        q = reduction.degeneration_family(inp.A, inp.M, inp.eta, inp.theta, inp.J, t, inp.phi,
                                          inp.degrees, inp.twist)
    _emit(io.matrix_to_json(q))
    return 0


RECIPE_NAMES = set(gallery.RECIPES) | {"ansatz", "patterns"}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quadbundle", description="Quadric bundles over P^2 from symmetric polynomial matrices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("discriminant", help="discriminant curve and smoothness verdict")
    s.add_argument("input", nargs="?")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_discriminant)

    s = sub.add_parser("classify", help="cokernel profile")
    s.add_argument("input", nargs="?")
    s.add_argument("--require-smooth", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("residue", help="residue square class along the discriminant")
    s.add_argument("input", nargs="?")
    s.add_argument("--line", default="z")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_residue)

    s = sub.add_parser("equiv", help="compare residues (exit 0 equal, 1 not equal, 2 inconclusive)")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--trials", type=int, default=32)
    s.add_argument("--primes", default="")
    s.add_argument("--line", default="z")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("reduce", help="quadric reduction along an isotropic embedding")
    s.add_argument("input", nargs="?")
    s.add_argument("--isotropic", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("extend", help="hyperbolic extension")
    s.add_argument("input", nargs="?")
    s.add_argument("--rho")
    s.add_argument("--adeg")
    s.add_argument("--bdeg", required=True)
    s.add_argument("--isotropic-out")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("isotropic", help="best-effort isotropic search")
    s.add_argument("input", nargs="?")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--ansatz", default="Linearize", choices=[a.value for a in reduction.Ansatz])
    s.add_argument("--tries", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_isotropic)

    s = sub.add_parser("dominance", help="Jacobian rank certificate")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", type=int, default=32003)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rational", action="store_true")
    s.set_defaults(func=cmd_dominance)

    s = sub.add_parser("dominance-table", help="the standard grid of dominance checks")
    s.add_argument("--p", type=int, default=32003)
    s.add_argument("--seeds", default="0,1,2")
    s.add_argument("--rational", action="store_true")
    s.add_argument("--text", action="store_true")
    s.set_defaults(func=cmd_dominance_table)

    s = sub.add_parser("gallery", help="named constructions")
    s.add_argument("--recipe", required=True)
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--kind", default="halfperiod")
    s.add_argument("--part", default="chain", choices=["chain", "N3", "N4"])
    s.add_argument("--field", default="32003")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_gallery)

    s = sub.add_parser("psi-family", help="the degeneration family at a parameter value")
    s.add_argument("input", nargs="?")
    s.add_argument("--t", required=True)
    s.add_argument("--g", type=int, default=6)
    s.add_argument("--h", type=int, default=2)
    s.add_argument("--field", default="32003")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_psi)
    return p


LIST_OPTIONS = ("--adeg", "--bdeg", "--seeds", "--primes")


def _join_list_options(argv: Sequence[str]) -> list[str]:
    # "--bdeg -1,-1" would otherwise be read as an unknown flag
    out, it = [], iter(argv)
    for tok in it:
        if tok in LIST_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_list_options(argv))
    try:
        return args.func(args)
    except (CliError, ValueError, KeyError, ZeroDivisionError) as exc:
        _fail(type(exc).__name__, str(exc))
    return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
