"""Command line entry point.

Exit codes: 0 when the verdict is positive, 1 when the mathematics says no,
2 when the input or the invocation is broken.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, catalog
from .bns import BnsError, Character, brown_classify, sweep
from .cancel import c_prime, max_piece
from .hnn import (
    FixedWordStream,
    HnnError,
    genericity_experiment,
    is_immersion,
    periodic_conjugacy_search,
    prefix_exponent_scan,
)
from .npc import NotSquareError, build_link, npc_check
from .presentation import (
    AT,
    Presentation,
    PresentationError,
    abelianization,
    build_r_l,
    expand_to_at,
    t_rewrite,
)
from .squarify import (
    DEFAULT_LEAF_BUDGET,
    ParityError,
    TemplateError,
    apply_schedule,
    general_squarify_search,
    prop31_squarify,
    prop31_template_violation,
    verify_substitutions,
)
from .word import Alphabet, Endomorphism, WordSyntaxError, cyclic_reduce

SCHEMA = "sqhnn.report/1"

PRESENTATIONS = {
    "l8": lambda: catalog.r_l_group(8),
    "torus": catalog.torus,
    "bs12": catalog.baumslag_solitar_12,
    "sapir-torus": catalog.sapir_torus,
    "phi-torus": catalog.phi_torus,
}
ENDOMORPHISMS = {"sapir": catalog.sapir, "phi": catalog.phi}

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input and output plumbing


def _source_text(args, kind: str, presets: dict) -> tuple[str, object]:
    given = [x for x in (args.text, args.file, args.preset) if x is not None]
    if len(given) != 1:
        raise UsageError(f"give exactly one {kind}: inline text, --file or --preset")
    if args.preset is not None:
        return "preset", presets[args.preset]()
    if args.file is not None:
        try:
            return "file", Path(args.file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    return "inline", args.text


def _presentation(args) -> Presentation:
    how, obj = _source_text(args, "presentation", PRESENTATIONS)
    return obj if how == "preset" else Presentation.parse(obj)


def _endomorphism(args) -> Endomorphism:
    how, obj = _source_text(args, "endomorphism", ENDOMORPHISMS)
    return obj if how == "preset" else Endomorphism.parse(obj)


def _config(args) -> dict:
    skip = {"func", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args, result: dict, text: str) -> None:
    if args.format == "json":
        doc = {
            "schema": SCHEMA,
            "tool_version": __version__,
            "command": args.command,
            "config": _config(args),
            "result": result,
        }
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _infer_alphabet(text: str) -> Alphabet:
    names: list[str] = []
    for m in re.finditer(r"[A-Za-z][A-Za-z0-9_]*", text):
        n = m.group(0)
        if n != "e" and n not in names:
            names.append(n)
    return Alphabet(tuple(names) or ("a",))


# ---------------------------------------------------------------------------
# subcommands


def cmd_reduce(args) -> int:
    alphabet = Alphabet(tuple(args.gens.split(","))) if args.gens else _infer_alphabet(args.word)
    w = alphabet.word(args.word)
    core, conj = cyclic_reduce(w)
    res = {
        "reduced": alphabet.format(w),
        "length": len(w),
        "cyclic_core": alphabet.format(core.core),
        "conjugator": alphabet.format(conj),
    }
    _emit(args, res, f"{res['reduced']}\ncyclically reduced: {res['cyclic_core']}")
    return EXIT_OK


def cmd_betti(args) -> int:
    p = _presentation(args)
    ab = abelianization(p)
    tors = " ".join(f"Z/{d}" for d in ab.torsion)
    _emit(args, ab.to_dict(), f"betti {ab.betti}" + (f", torsion {tors}" if tors else ""))
    return EXIT_OK


def cmd_rewrite(args) -> int:
    rw = t_rewrite(_presentation(args), stable=args.stable)
    _emit(args, rw.to_dict(), f"l = {rw.l}\n{rw.format()}")
    return EXIT_OK


def _read_schedule(path: str) -> list[list[int]]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not JSON ({exc.msg})") from None
    cuts = doc.get("cuts") if isinstance(doc, dict) else doc
    if not isinstance(cuts, list) or not all(
        isinstance(c, list) and all(isinstance(x, int) for x in c) for c in cuts
    ):
        raise UsageError(f"{path}: expected a list of cut-position lists")
    return cuts


def cmd_squarify(args) -> int:
    p = _presentation(args)
    sq = None
    method = args.method
    if args.schedule:
        sq, method = apply_schedule(p, _read_schedule(args.schedule)), "schedule"
    elif method in ("auto", "prop31") and p.rank == 2 and len(p.relators) == 1:
        try:
            rw = t_rewrite(p)
        except PresentationError:
            rw = None
            if method == "prop31":
                raise
        if rw is not None:
            if prop31_template_violation(rw) is None:
                sq, method = prop31_squarify(rw), "prop31"
            elif method == "prop31":
                prop31_squarify(rw)  # raises the template error
    elif method == "prop31":
        raise UsageError("prop31 needs a 2-generator 1-relator presentation")
    stats: dict = {}
    if sq is None:
        method = "search"
        try:
            sq = general_squarify_search(p, args.budget, stats)
        except ParityError as exc:
            _emit(args, {"method": method, "found": False, "parity": str(exc)}, f"no: {exc}")
            return EXIT_NO
    if sq is None:
        res = {"method": method, "found": False, "search": stats}
        _emit(args, res, f"no square presentation found ({stats.get('leaves', 0)} schedules)")
        return EXIT_NO
    rep = npc_check(sq.presentation)
    res = {
        "method": method,
        "found": True,
        "square": sq.to_dict(),
        "npc": rep.to_dict(),
        "verified": verify_substitutions(sq),
        "search": stats,
    }
    text = (
        f"{sq.presentation.format()}\n"
        f"{sq.n_generators} generators, {sq.n_relators} relators, "
        f"npc {'pass' if rep.passed else 'fail'}"
    )
    _emit(args, res, text)
    return EXIT_OK if rep.passed else EXIT_NO


def cmd_npc_check(args) -> int:
    p = _presentation(args)
    rep = npc_check(p)
    if args.dot:
        Path(args.dot).write_text(build_link(p).to_dot())
    g = rep.to_dict()["girth"]
    lines = [f"{'pass' if rep.passed else 'fail'} (girth {g})"]
    for v in rep.violations:
        lines.append(f"  {v['kind']}: " + json.dumps({k: x for k, x in v.items() if k != 'kind'}))
    _emit(args, rep.to_dict(), "\n".join(lines))
    return EXIT_OK if rep.passed else EXIT_NO


def cmd_pieces(args) -> int:
    p = _presentation(args)
    lam = Fraction(args.lam)
    rep = max_piece(p)
    ok = c_prime(p, lam, rep)
    res = rep.to_dict(p.alphabet)
    res.update(
        {
            "lambda": str(lam),
            "c_prime": ok,
            "c_prime_1_6": c_prime(p, Fraction(1, 6), rep),
            "c_prime_1_7": c_prime(p, Fraction(1, 7), rep),
        }
    )
    pairs = zip(rep.per_relator, rep.relator_lengths)
    lines = [f"max piece {rep.max_piece}"]
    lines += [f"  relator {i}: {m} / {n}" for i, (m, n) in enumerate(pairs)]
    for label, key in (("1/6", "c_prime_1_6"), ("1/7", "c_prime_1_7")):
        lines.append(f"C'({label}) {'holds' if res[key] else 'fails'}")
    if lam not in (Fraction(1, 6), Fraction(1, 7)):
        lines.append(f"C'({lam}) {'holds' if ok else 'fails'}")
    _emit(args, res, "\n".join(lines))
    return EXIT_OK if ok else EXIT_NO


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        x, y = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"expected a pair like 1,-1, got {text!r}") from None
    return x, y


def cmd_bns(args) -> int:
    p = _presentation(args)
    if (args.chi is None) == (args.sweep is None):
        raise UsageError("give exactly one of --chi or --sweep")
    if args.chi is not None:
        rows = [brown_classify(p, Character.of(*_parse_pair(args.chi)))]
    else:
        rows = sweep(p, args.sweep)
    res = {"rays": [r.to_dict() for r in rows]}
    text = "\n".join(f"{str(r.character.values):>10}  {r.pair_verdict.value}" for r in rows)
    _emit(args, res, text or "no valid rays")
    return EXIT_OK


def cmd_immersion(args) -> int:
    f = _endomorphism(args)
    rep = is_immersion(f)
    d = rep.to_dict(f.domain)
    text = "immersion" if rep else f"not an immersion: {' '.join(d['failure'])} cancels"
    _emit(args, d, text)
    return EXIT_OK if rep else EXIT_NO


def cmd_periodic_search(args) -> int:
    f = _endomorphism(args)
    stats: dict = {}
    wit = periodic_conjugacy_search(f, args.max_len, args.max_iter, stats)
    res = {
        "witness": wit.to_dict(f.domain) if wit else None,
        "bounds": {"max_len": args.max_len, "max_iter": args.max_iter},
        "stats": stats,
    }
    if wit is None:
        text = f"no witness with |w| <= {args.max_len}, i <= {args.max_iter}"
    else:
        d = wit.to_dict(f.domain)
        text = f"witness: w = {d['w']}, i = {d['i']}, j = {d['j']}"
    _emit(args, res, text)
    return EXIT_OK if wit is None else EXIT_NO


def cmd_prefix_scan(args) -> int:
    f = _endomorphism(args)
    stream = FixedWordStream(f, args.seed_letter)
    rep = prefix_exponent_scan(stream, args.letters, args.gen)
    res = rep.to_dict(f.domain)
    res["prefix"] = f.domain.format(stream.prefix(min(args.letters, 20)))
    text = (
        f"prefix: {res['prefix']}{' ...' if args.letters > 20 else ''}\n"
        f"{args.gen}-exponent over {args.letters} prefixes: min {rep.min}, max {rep.max}, "
        f"zero at {rep.zeros[:10] if rep.zeros else 'none'}"
    )
    _emit(args, res, text)
    return EXIT_OK if not rep.zeros else EXIT_NO


def cmd_generic(args) -> int:
    res = genericity_experiment(args.k, args.n, args.trials, args.seed)
    if args.csv:
        Path(args.csv).write_text(res.to_csv())
    if args.format == "csv":
        sys.stdout.write(res.to_csv())
        return EXIT_OK
    d = res.to_dict()
    text = (
        f"k={res.k} n={res.n} trials={res.trials} seed={res.seed}\n"
        f"C'(1/6): {res.count_cprime16}/{res.trials}  C'(1/7): {res.count_cprime17}/{res.trials}\n"
        f"piece comparison exceeded by >2 in {res.piece_bound_violations} trials"
    )
    _emit(args, d, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# the flagship replay


class StageFailure(Exception):
    def __init__(self, stage: str, msg: str):
        self.stage = stage
        super().__init__(f"{stage}: {msg}")


def _expect(stage: str, cond: bool, msg: str) -> None:
    if not cond:
        raise StageFailure(stage, msg)


def _paper_stages(l: int, relator_text: str | None):
    """Yield ``(stage, summary)`` pairs; raises :class:`StageFailure`."""
    built = expand_to_at(build_r_l(l))
    if relator_text is not None:
        r = Presentation.parse(relator_text).relators[0] if "|" in relator_text else AT.word(relator_text)
        _expect("relator", r == built, "relator does not match r_l expanded over a, t")
    else:
        r = built
    if l == 8:
        _expect("relator", len(r) == 116, f"length {len(r)}, expected 116")
        _expect("relator", r == AT.word(catalog.L8_RELATOR), "differs from the reference relator")
    yield "relator", f"length {len(r)}"

    p = Presentation(AT, [r])
    rep = max_piece(p)
    if l == 8:
        _expect("pieces", rep.max_piece == 17, f"max piece {rep.max_piece}, expected 17")
        _expect("pieces", c_prime(p, Fraction(1, 6), rep), "C'(1/6) fails")
    yield "pieces", f"max piece {rep.max_piece} / {len(r)}, C'(1/6) {c_prime(p, Fraction(1, 6), rep)}"

    ab = abelianization(p)
    _expect("betti", ab.betti == 2 and not ab.torsion, f"abelianization {ab.to_dict()}")
    yield "betti", "Z^2"

    rw = t_rewrite(p)
    _expect("rewrite", rw.l == l and rw.w == build_r_l(l), f"rewrite gave l = {rw.l}")
    yield "rewrite", f"l = {rw.l}, {len(rw.w)} letters"

    sq = prop31_squarify(rw)
    n = len(rw.w) // 2
    _expect(
        "squarify",
        sq.n_generators == l + n and sq.n_relators == l + n - 1,
        f"{sq.n_generators} generators, {sq.n_relators} relators",
    )
    _expect("squarify", verify_substitutions(sq), "substitutions do not recover the relator")
    yield "squarify", f"{sq.n_generators} generators, {sq.n_relators} relators"

    npc = npc_check(sq.presentation)
    _expect("npc", npc.passed and npc.consistent, f"violations {npc.violations[:3]}")
    yield "npc", f"pass, girth {npc.to_dict()['girth']}"

    rays = sweep(p, 5)
    if l == 8:
        for c in rays:
            key = c.character.ray_key()
            if key in ((1, 0), (0, 1)):
                continue
            want = "strictly_ascending" if key in ((1, 1), (1, -1)) else "fibered"
            _expect("bns", c.pair_verdict.value == want, f"ray {key} is {c.pair_verdict.value}")
    counts: dict[str, int] = {}
    for c in rays:
        counts[c.pair_verdict.value] = counts.get(c.pair_verdict.value, 0) + 1
    yield "bns", ", ".join(f"{v} {k}" for k, v in sorted(counts.items()))

    f = catalog.phi()
    _expect("immersion", bool(is_immersion(f)), "phi is not an immersion")
    yield "immersion", "phi is an immersion"

    torus = catalog.phi_torus()
    sq2 = general_squarify_search(torus)
    _expect("torus-squarify", sq2 is not None, "no square presentation found")
    npc2 = npc_check(sq2.presentation)
    _expect("torus-squarify", npc2.passed, "square presentation is not NPC")
    yield "torus-squarify", f"{sq2.n_generators} generators, {sq2.n_relators} relators, npc pass"

    wit = periodic_conjugacy_search(f, 6, 2)
    _expect("periodic", wit is None, f"witness {wit}")
    yield "periodic", "no witness with |w| <= 6, i <= 2"

    scan = prefix_exponent_scan(FixedWordStream(f, "a"), 5**6, "a")
    _expect("prefix-scan", not scan.zeros, f"zero a-exponent at {scan.zeros[:5]}")
    yield "prefix-scan", f"no zero a-exponent prefix up to {5 ** 6}"


def cmd_paper(args) -> int:
    if args.l < 2 or args.l % 2:
        raise UsageError("--l must be even and at least 2")
    rel = None
    if args.relator_file:
        try:
            rel = Path(args.relator_file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.relator_file}: {exc.strerror}") from None
    stages = []
    failure = None
    try:
        for name, summary in _paper_stages(args.l, rel):
            stages.append({"stage": name, "ok": True, "summary": summary})
    except StageFailure as exc:
        failure = exc
        stages.append({"stage": exc.stage, "ok": False, "summary": str(exc)})
    width = max(len(s["stage"]) for s in stages)
    text = "\n".join(
        f"{s['stage']:<{width}}  {'ok  ' if s['ok'] else 'FAIL'}  {s['summary']}" for s in stages
    )
    _emit(args, {"stages": stages, "pass": failure is None}, text)
    return EXIT_OK if failure is None else EXIT_NO


# ---------------------------------------------------------------------------
# parser


def _add_input(sp, kind: str, presets: dict) -> None:
    sp.add_argument("text", nargs="?", help=f"{kind} given inline")
    sp.add_argument("--file", help=f"read the {kind} from a file")
    sp.add_argument("--preset", choices=sorted(presets), help=f"a built-in {kind}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqhnn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("reduce", parents=[fmt], help="freely and cyclically reduce a word")
    sp.add_argument("word")
    sp.add_argument("--gens", help="comma separated generator names (default: in order of use)")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("betti", parents=[fmt], help="abelianization")
    _add_input(sp, "presentation", PRESENTATIONS)
    sp.set_defaults(func=cmd_betti)

    sp = sub.add_parser("rewrite", parents=[fmt], help="rewrite over a_i = t^i a t^-i")
    _add_input(sp, "presentation", PRESENTATIONS)
    sp.add_argument("--stable", help="generator to eliminate")
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("squarify", parents=[fmt], help="find a length-4 presentation")
    _add_input(sp, "presentation", PRESENTATIONS)
    sp.add_argument("--method", choices=("auto", "prop31", "search"), default="auto")
    sp.add_argument("--budget", type=int, default=DEFAULT_LEAF_BUDGET, help="schedules to try")
    sp.add_argument("--schedule", help="JSON file with cut positions per relator to replay")
    sp.set_defaults(func=cmd_squarify)

    sp = sub.add_parser("npc-check", parents=[fmt], help="link condition for square presentations")
    _add_input(sp, "presentation", PRESENTATIONS)
    sp.add_argument("--dot", help="write the vertex link as graphviz")
    sp.set_defaults(func=cmd_npc_check)

    sp = sub.add_parser("pieces", parents=[fmt], help="longest piece and C'(lambda)")
    _add_input(sp, "presentation", PRESENTATIONS)
    sp.add_argument("--lambda", dest="lam", default="1/6")
    sp.set_defaults(func=cmd_pieces)

    sp = sub.add_parser("bns", parents=[fmt], help="Brown's criterion on character rays")
    _add_input(sp, "presentation", PRESENTATIONS)
    sp.add_argument("--chi", help="character as chi(x),chi(y) in generator order")
    sp.add_argument("--sweep", type=int, help="all primitive rays with coordinates in [-N, N]")
    sp.set_defaults(func=cmd_bns)

    sp = sub.add_parser("immersion", parents=[fmt], help="immersion test")
    _add_input(sp, "endomorphism", ENDOMORPHISMS)
    sp.set_defaults(func=cmd_immersion)

    sp = sub.add_parser("periodic-search", parents=[fmt], help="bounded periodic conjugacy search")
    _add_input(sp, "endomorphism", ENDOMORPHISMS)
    sp.add_argument("--max-len", type=int, default=6)
    sp.add_argument("--max-iter", type=int, default=2)
    sp.set_defaults(func=cmd_periodic_search)

    sp = sub.add_parser("prefix-scan", parents=[fmt], help="exponent sums along a fixed word")
    _add_input(sp, "endomorphism", ENDOMORPHISMS)
    sp.add_argument("--letters", type=int, default=5**6)
    sp.add_argument("--gen", default="a")
    sp.add_argument("--seed-letter", default="a")
    sp.set_defaults(func=cmd_prefix_scan)

    gfmt = argparse.ArgumentParser(add_help=False)
    gfmt.add_argument("--format", choices=("text", "json", "csv"), default="text")
    gfmt.add_argument("--json", dest="format", action="store_const", const="json")
    sp = sub.add_parser("generic", parents=[gfmt], help="random endomorphism statistics")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--csv", help="also write the per-trial CSV here")
    sp.set_defaults(func=cmd_generic)

    sp = sub.add_parser("paper", parents=[fmt], help="replay the flagship computations")
    sp.add_argument("--l", type=int, default=8)
    sp.add_argument("--relator-file", help="relator over a, t to use instead of the built one")
    sp.set_defaults(func=cmd_paper)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, WordSyntaxError, PresentationError, NotSquareError, TemplateError,
            ParityError, HnnError, BnsError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"sqhnn {args.command}: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
