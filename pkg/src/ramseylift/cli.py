"""Command-line front end.

One verb per construction: word algebra, structure validation and
embedding enumeration, the four encodings with their maps and witnesses,
spectrum checks and completion, arrow decisions, the factorization
harness, the transfer pipeline, and the pinned end-to-end fixture.

Exit codes: 0 success, 1 domain error, 2 budget refusal.  All output is
deterministic for a fixed seed; wall-clock timings are only emitted when
--timings is passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import fixtures
from . import graph_encoding as GE
from . import metric_encoding as ME
from . import poset_encoding as PE
from . import ultrametric_encoding as UE
from . import words as W
from .errors import BudgetError, DomainError, RamseyLiftError
from .harness import pa_harness, transfer_demo
from .oracle import (
    ArrowInstance,
    Budget,
    Coloring,
    StructureCategory,
    WordCategory,
    check_coloring,
    decide_arrow,
    decide_gr,
)
from .structures import (
    Ball,
    check_embedding,
    enumerate_embeddings,
    format_rational,
    from_json,
    identity_embedding,
    parse_rational,
    to_json,
    validate_structure,
)

STRUCT_KINDS = ("graph", "poset", "ultrametric", "metric")


# ---------------------------------------------------------------------------
# input helpers


def _alphabet(spec: str) -> W.Alphabet:
    return W.Alphabet(spec.split(","))


def _word_source(value: str, alphabet: W.Alphabet, m=None) -> W.ParameterWord:
    """Read a word from a file path, or parse the value itself as word text."""
    path = Path(value)
    if path.is_file():
        try:
            return W.parse(path.read_text(), alphabet, m)
        except DomainError as exc:
            raise type(exc)(f"{path}: {exc}") from None
    return W.parse(value, alphabet, m)


def _structure(path: str):
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise DomainError(f"structure file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return from_json(data)


def _rationals(spec: str) -> list:
    return [parse_rational(tok) for tok in spec.split(",") if tok != ""]


def _int_list(spec: str) -> list[int]:
    return [int(tok) for tok in spec.split(",") if tok != ""]


def _json_arg(spec: str):
    try:
        return json.loads(spec)
    except json.JSONDecodeError as exc:
        raise DomainError(f"bad inline JSON: {exc.msg}") from None


def _render(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, Ball):
        return {"points": sorted(value.points), "radius_index": value.radius_index}
    if isinstance(value, tuple):
        return [_render(v) for v in value]
    return value


# ---------------------------------------------------------------------------
# output


class Reporter:
    def __init__(self, args):
        self.format = args.format
        self.timings = args.timings
        self.started = time.monotonic()

    def emit(self, payload: dict, text_lines) -> None:
        if self.timings:
            payload = dict(payload)
            payload["wall_time_ms"] = int((time.monotonic() - self.started) * 1000)
        if self.format == "json":
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            for line in text_lines:
                print(line)

    def fail(self, exc: RamseyLiftError) -> int:
        code = 2 if isinstance(exc, BudgetError) else 1
        payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if self.format == "json":
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return code


def _budget(args) -> Budget:
    return Budget(max_hom=args.budget_hom, max_colorings=args.budget_colorings)


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_word_validate(args, rep):
    alphabet = _alphabet(args.alphabet)
    word = _word_source(args.word, alphabet, args.m)
    payload = {"word": word.text(), "n": word.n, "m": word.m, "valid": True}
    rep.emit(payload, [f"valid: n={word.n} m={word.m}", word.text()])


def cmd_word_compose(args, rep):
    alphabet = _alphabet(args.alphabet)
    u = _word_source(args.u, alphabet)
    v = _word_source(args.v, alphabet)
    out = W.compose(u, v)
    rep.emit({"word": out.text(), "n": out.n, "m": out.m}, [out.text()])


def cmd_word_enumerate(args, rep):
    alphabet = _alphabet(args.alphabet)
    words = [w.text() for w in W.enumerate_words(alphabet, args.n, args.m, args.limit)]
    rep.emit(
        {"count": len(words), "words": words},
        [f"count: {len(words)}"] + words,
    )


def cmd_structure_validate(args, rep):
    s = _structure(args.file)
    report = validate_structure(s)
    rep.emit(
        {"valid": True, "report": report, "structure": to_json(s)},
        [f"valid {report['kind']} with {report['size']} elements"],
    )


def cmd_structure_embeddings(args, rep):
    src = _structure(args.source)
    tgt = _structure(args.target)
    budget = _budget(args)
    found = []
    for e in enumerate_embeddings(src, tgt):
        found.append([[a, b] for a, b in e.mapping])
        if len(found) > budget.max_hom:
            raise BudgetError(f"more than {budget.max_hom} embeddings")
    rep.emit(
        {"count": len(found), "embeddings": found},
        [f"count: {len(found)}"] + [" ".join(f"{a}->{b}" for a, b in e) for e in found],
    )


def cmd_encode(args, rep):
    s = _structure(args.file)
    if s.kind != args.kind:
        raise DomainError(f"expected a {args.kind} file, got {s.kind}")
    if args.kind == "graph":
        enc = GE.encode_graph(s)
        payload = {
            "object": enc.object,
            "edge_order": [sorted(e) for e in enc.edge_order],
        }
        lines = [f"object: {enc.object}"] + [
            f"e_{i + 1}: {sorted(e)}" for i, e in enumerate(enc.edge_order)
        ]
    elif args.kind == "poset":
        enc = PE.encode_poset(s)
        payload = {
            "object": enc.object,
            "downsets": [sorted(d) for d in enc.downsets],
        }
        lines = [f"object: {enc.object}"] + [
            f"D_{i + 1}: {sorted(d)}" for i, d in enumerate(enc.downsets)
        ]
    elif args.kind == "ultrametric":
        bp = UE.encode_ultrametric(s)
        elems = bp.poset.universe
        index = {b: i + 1 for i, b in enumerate(elems)}
        payload = {
            "balls": [
                {"index": index[b], "points": sorted(b.points), "radius_index": b.radius_index}
                for b in elems
            ],
            "leq": sorted([index[a], index[b]] for a, b in bp.poset.strict_pairs()),
        }
        lines = [f"balls: {len(elems)}"] + [
            f"B_{index[b]}: points={sorted(b.points)} radius_index={b.radius_index}"
            for b in elems
        ]
    else:
        poset = ME.encode_metric(s)
        elems = poset.universe
        index = {e: i + 1 for i, e in enumerate(elems)}
        payload = {
            "elements": [[x, i] for (x, i) in elems],
            "leq": sorted([index[a], index[b]] for a, b in poset.strict_pairs()),
        }
        lines = [f"elements: {len(elems)}"] + [f"L_{index[e]}: {e}" for e in elems]
    rep.emit(payload, lines)


def _embedding_from_pairs(pairs, src, tgt):
    return check_embedding({a: b for a, b in pairs}, src, tgt)


def _ball_poset_embedding(bp, poset, map_arg):
    """Interpret [[ball index, element], ...] (1-based, in ball order)."""
    elems = bp.poset.universe
    mapping = {}
    for idx, target in map_arg:
        if not 1 <= idx <= len(elems):
            raise DomainError(f"ball index {idx} out of range 1..{len(elems)}")
        mapping[elems[idx - 1]] = target
    return check_embedding(mapping, bp.poset, poset)


def _level_poset_embedding(level_poset, poset, map_arg):
    """Interpret [[[point, level], element], ...]."""
    mapping = {}
    for entry, target in map_arg:
        mapping[(entry[0], entry[1])] = target
    return check_embedding(mapping, level_poset, poset)


def cmd_phi(args, rep):
    s = _structure(args.structure)
    if s.kind != args.kind:
        raise DomainError(f"expected a {args.kind} file, got {s.kind}")
    if args.kind in ("graph", "poset"):
        alphabet = _alphabet(args.alphabet)
        u = _word_source(args.word, alphabet)
        images = GE.phi_graph(s, u) if args.kind == "graph" else PE.phi_poset(s, u)
        payload = {"images": [[v, sorted(img)] for v, img in images.items()]}
        lines = [f"{v}: {' '.join(map(str, sorted(img)))}" for v, img in images.items()]
    else:
        if args.kind == "ultrametric":
            encoded = UE.encode_ultrametric(s)
            inner = encoded.poset
        else:
            inner = ME.encode_metric(s)
        if args.poset is None:
            poset, u = inner, identity_embedding(inner)
        else:
            poset = _structure(args.poset)
            if poset.kind != "poset":
                raise DomainError("phi target must be a poset file")
            if args.map is None:
                raise DomainError("--map is required when --poset is given")
            map_arg = _json_arg(args.map)
            if args.kind == "ultrametric":
                u = _ball_poset_embedding(encoded, poset, map_arg)
            else:
                u = _level_poset_embedding(inner, poset, map_arg)
        images = (
            UE.phi_ultra(s, poset, u)
            if args.kind == "ultrametric"
            else ME.phi_metric(s, poset, u)
        )
        payload = {"images": [[x, _render(img)] for x, img in images.items()]}
        lines = [f"{x}: {_render(img)}" for x, img in images.items()]
    rep.emit(payload, lines)


def cmd_witness(args, rep):
    big = _structure(args.structure)
    small = _structure(args.sub)
    if big.kind != args.kind or small.kind != args.kind:
        raise DomainError(f"both structures must be of kind {args.kind}")
    f = _embedding_from_pairs(_json_arg(args.map), small, big)
    if args.kind in ("graph", "poset"):
        alphabet = _alphabet(args.alphabet)
        u = _word_source(args.word, alphabet)
        h = (
            GE.witness_graph(big, small, f, u)
            if args.kind == "graph"
            else PE.witness_poset(big, small, f, u)
        )
        rep.emit({"witness": h.text(), "n": h.n, "m": h.m}, [h.text()])
    else:
        v = (
            UE.witness_ultra(big, small, f)
            if args.kind == "ultrametric"
            else ME.witness_metric(big, small, f)
        )
        pairs = [[_render(a), _render(b)] for a, b in v.mapping]
        rep.emit(
            {"witness": pairs},
            [f"{_render(a)} -> {_render(b)}" for a, b in v.mapping],
        )


def cmd_pa_check(args, rep):
    if (args.D is None) != (args.E is None):
        raise DomainError("supply both --D and --E, or neither")
    D = _structure(args.D) if args.D else None
    E = _structure(args.E) if args.E else None
    report = pa_harness(args.kind, D, E, trials=args.trials, seed=args.seed)
    payload = report.to_json()
    lines = [
        f"selector: {report.selector}",
        f"trials: {len(report.trials)}",
        f"failures: {len(report.failures)}",
        f"all_passed: {str(report.all_passed).lower()}",
    ] + [f"  failed {t.index} (seed {t.trial_seed}): {t.error}" for t in report.failures]
    rep.emit(payload, lines)
    return 0 if report.all_passed else 1


def cmd_spectrum_check(args, rep):
    values = _rationals(args.values)
    tight = ME.is_tight(values)
    rep.emit(
        {"values": [format_rational(v) for v in values], "tight": tight},
        [f"tight: {str(tight).lower()}"],
    )


def cmd_spectrum_tighten(args, rep):
    values = _rationals(args.values)
    spec = ME.tight_complete(values)
    text = ",".join(format_rational(v) for v in spec.values)
    rep.emit(
        {"values": [format_rational(v) for v in spec.values], "tight": spec.tight},
        [text],
    )


def _arrow_instance(args):
    cat = StructureCategory(args.kind)
    return ArrowInstance(cat, _structure(args.A), _structure(args.B), _structure(args.C), args.k)


def cmd_arrow_decide(args, rep):
    inst = _arrow_instance(args)
    verdict = decide_arrow(inst, _budget(args), threads=args.threads)
    payload = {
        "instance": {"kind": args.kind, "k": args.k},
        "seed": args.seed,
        "threads": args.threads,
        **verdict.to_json(inst.category),
    }
    lines = [
        f"verdict: {'holds' if verdict.holds else 'fails'}",
        "counts: " + " ".join(f"{k}={v}" for k, v in verdict.counts.items()),
    ]
    if verdict.bad_coloring is not None:
        lines.append("bad_coloring: " + ",".join(map(str, verdict.bad_coloring.colors)))
    rep.emit(payload, lines)


def cmd_arrow_check_coloring(args, rep):
    inst = _arrow_instance(args)
    colors = _int_list(args.coloring)
    verdict, detail = check_coloring(inst, Coloring(tuple(colors), args.k), _budget(args))
    payload = {
        "instance": {"kind": args.kind, "k": args.k},
        **verdict.to_json(inst.category),
        "candidates": detail,
    }
    lines = [f"monochromatic: {'yes' if verdict.holds else 'no'}"]
    if verdict.holds:
        lines.append(f"witness_color: {verdict.witness_color}")
    lines += [
        f"  candidate {i}: colors {d['colors_met']}" for i, d in enumerate(detail)
    ]
    rep.emit(payload, lines)
    return 0


def cmd_arrow_gr(args, rep):
    alphabet = _alphabet(args.alphabet)
    verdict = decide_gr(alphabet, args.n, args.m, args.ell, args.k, _budget(args))
    payload = {
        "instance": {"alphabet": list(alphabet.letters), "n": args.n, "m": args.m,
                     "ell": args.ell, "k": args.k},
        **verdict.to_json(WordCategory(alphabet)),
    }
    lines = [
        f"verdict: {'holds' if verdict.holds else 'fails'}",
        "counts: " + " ".join(f"{k}={v}" for k, v in verdict.counts.items()),
    ]
    if verdict.bad_coloring is not None:
        lines.append("bad_coloring: " + ",".join(map(str, verdict.bad_coloring.colors)))
    rep.emit(payload, lines)


def cmd_transfer_demo(args, rep):
    D = _structure(args.D)
    E = _structure(args.E)
    C = None
    if args.C is not None:
        if args.kind in ("graph", "poset"):
            C = int(args.C)
        else:
            C = _structure(args.C)
    coloring = _int_list(args.coloring) if args.coloring else None
    report = transfer_demo(
        args.kind, D, E, args.k,
        budget=_budget(args), seed=args.seed, C=C, coloring=coloring,
        threads=args.threads,
    )
    payload = report.to_json()
    lines = [
        f"premise: {json.dumps(report.premise['object'])}",
        f"coloring: {','.join(map(str, report.coloring))}",
        f"pulled_back: {','.join(map(str, report.pulled_back))}",
        f"monochromatic: index={report.mono_index} color={report.mono_color}",
        f"composites: {len(report.composites)}",
        f"verified: {str(report.verified).lower()}",
    ]
    rep.emit(payload, lines)
    return 0 if report.verified else 1


def cmd_fixture(args, rep):
    checks = fixtures.run_fixture(corrupt=args.corrupt)
    bad = [c for c in checks if not c.ok]
    payload = {
        "checks": [c.to_json() for c in checks],
        "total": len(checks),
        "mismatches": len(bad),
        "ok": not bad,
    }
    lines = [f"{c.name}: {'ok' if c.ok else 'MISMATCH'}" for c in checks]
    if bad:
        first = bad[0]
        lines.append(
            f"first mismatch at {first.name}: expected {_render(first.expected)}, "
            f"got {_render(first.actual)}"
        )
    else:
        lines.append(f"all {len(checks)} values match")
    rep.emit(payload, lines)
    return 1 if bad else 0


# ---------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="output format (default text)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for all randomized steps (default 0)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for coloring search (default 1, reproducible)")
    p.add_argument("--budget-hom", type=int, default=10_000,
                   help="largest hom set the oracle will enumerate")
    p.add_argument("--budget-colorings", type=int, default=2_000_000,
                   help="largest number of colorings the oracle will exhaust")
    p.add_argument("--timings", action="store_true",
                   help="include wall_time_ms in JSON output (breaks byte determinism)")


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="ramseylift",
        description="parameter words, ordered-structure encodings, and arrow decisions",
    )
    sub = root.add_subparsers(dest="command", required=True)

    word = sub.add_parser("word", help="parameter word operations").add_subparsers(
        dest="sub", required=True
    )
    p = word.add_parser("validate")
    p.add_argument("--alphabet", required=True)
    p.add_argument("--word", required=True, help="file path or literal token text")
    p.add_argument("--m", type=int, default=None)
    _add_common(p)
    p.set_defaults(handler=cmd_word_validate)
    p = word.add_parser("compose")
    p.add_argument("--alphabet", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_word_compose)
    p = word.add_parser("enumerate")
    p.add_argument("--alphabet", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--limit", type=int, default=10_000)
    _add_common(p)
    p.set_defaults(handler=cmd_word_enumerate)

    structure = sub.add_parser("structure", help="structure files").add_subparsers(
        dest="sub", required=True
    )
    p = structure.add_parser("validate")
    p.add_argument("--file", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_structure_validate)
    p = structure.add_parser("embeddings")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_structure_embeddings)

    p = sub.add_parser("encode", help="encode a structure")
    p.add_argument("kind", choices=STRUCT_KINDS)
    p.add_argument("--file", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_encode)

    p = sub.add_parser("phi", help="decode a base morphism into an embedding")
    p.add_argument("kind", choices=STRUCT_KINDS)
    p.add_argument("--structure", required=True)
    p.add_argument("--word", help="base word (graph/poset kinds)")
    p.add_argument("--alphabet", default="0")
    p.add_argument("--poset", help="target poset file (ultrametric/metric kinds)")
    p.add_argument("--map", help="embedding of the encoded poset into --poset, as JSON")
    _add_common(p)
    p.set_defaults(handler=cmd_phi)

    p = sub.add_parser("witness", help="factorizing morphism for an embedding")
    p.add_argument("kind", choices=STRUCT_KINDS)
    p.add_argument("--structure", required=True, help="the big structure D")
    p.add_argument("--sub", required=True, help="the small structure E")
    p.add_argument("--map", required=True, help="embedding of E into D as JSON pairs")
    p.add_argument("--word", help="base word u (graph/poset kinds)")
    p.add_argument("--alphabet", default="0")
    _add_common(p)
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("pa-check", help="randomized factorization suite")
    p.add_argument("kind", choices=STRUCT_KINDS)
    p.add_argument("--D", help="structure file for D")
    p.add_argument("--E", help="structure file for E")
    p.add_argument("--trials", type=int, default=200)
    _add_common(p)
    p.set_defaults(handler=cmd_pa_check)

    spectrum = sub.add_parser("spectrum", help="tight spectra").add_subparsers(
        dest="sub", required=True
    )
    p = spectrum.add_parser("check")
    p.add_argument("--values", required=True, help="comma separated rationals")
    _add_common(p)
    p.set_defaults(handler=cmd_spectrum_check)
    p = spectrum.add_parser("tighten")
    p.add_argument("--values", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_spectrum_tighten)

    arrow = sub.add_parser("arrow", help="arrow relation oracle").add_subparsers(
        dest="sub", required=True
    )
    p = arrow.add_parser("decide")
    p.add_argument("--kind", choices=STRUCT_KINDS, required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--C", required=True)
    p.add_argument("-k", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_arrow_decide)
    p = arrow.add_parser("check-coloring")
    p.add_argument("--kind", choices=STRUCT_KINDS, required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--C", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--coloring", required=True, help="comma separated colors 1..k")
    _add_common(p)
    p.set_defaults(handler=cmd_arrow_check_coloring)
    p = arrow.add_parser("gr")
    p.add_argument("--alphabet", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_arrow_gr)

    p = sub.add_parser("transfer-demo", help="run the transfer pipeline end to end")
    p.add_argument("kind", choices=STRUCT_KINDS)
    p.add_argument("--D", required=True)
    p.add_argument("--E", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--C", help="base object: an integer (graph/poset) or poset file")
    p.add_argument("--coloring", help="explicit coloring of hom(E, G(C))")
    _add_common(p)
    p.set_defaults(handler=cmd_transfer_demo)

    fixture = sub.add_parser("fixture", help="pinned end-to-end example")
    fixture.add_argument("which", choices=("paper-example",))
    fixture.add_argument("--corrupt", help="perturb one expected value (negative control)")
    _add_common(fixture)
    fixture.set_defaults(handler=cmd_fixture)

    return root


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    rep = Reporter(args)
    try:
        result = args.handler(args, rep)
    except RamseyLiftError as exc:
        return rep.fail(exc)
    return result or 0


if __name__ == "__main__":
    sys.exit(main())
