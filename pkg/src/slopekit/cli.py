"""Command line driver.

Subcommands: abelianize, alexander, scan, cover-b1, invariants, density.
JSON is the canonical machine format; text is a stable human rendering of
the same data, and the density certificate is also available as CSV.
Output is byte-identical across runs for identical inputs.  Expected errors
are emitted to stderr as a single JSON object carrying the originating
module, with a nonzero exit status.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from io import StringIO
from typing import Mapping, Sequence

from . import density as density_mod
from . import surface_invariants as surfaces
from .covers import AbelianEpimorphism, subgroup_b1
from .errors import SlopekitError
from .group_core import (
    GroupPresentation,
    LaurentPolynomial,
    Word,
    abelianization,
    alexander_matrix,
    free_abelianization,
)
from .jumping_loci import (
    TorsionCharacter,
    evaluate_alexander_matrix,
    hironaka_b1,
    scan_jumping_loci,
)

CARTWRIGHT_STEGER = "cartwright-steger"


class PresentationParseError(SlopekitError):
    """A presentation file failed to parse; the message carries the line."""


# ---------------------------------------------------------------------------
# Presentation ingestion


def _letters_from_tokens(
    tokens: Sequence[str], letter_to_index: Mapping[str, int], where: str
) -> list[int]:
    letters = []
    for tok in tokens:
        if len(tok) != 1 or not tok.isalpha():
            raise PresentationParseError(f"{where}: invalid token {tok!r}")
        idx = letter_to_index.get(tok.lower())
        if idx is None:
            raise PresentationParseError(f"{where}: unknown letter {tok!r}")
        letters.append(-idx if tok.isupper() else idx)
    return letters


def _generator_table(names: Sequence[str], where: str) -> dict[str, int]:
    table: dict[str, int] = {}
    for name in names:
        if len(name) != 1 or not name.isalpha() or not name.islower():
            raise PresentationParseError(
                f"{where}: generator names must be single lowercase letters, got {name!r}"
            )
        if name in table:
            raise PresentationParseError(f"{where}: duplicate generator {name!r}")
        table[name] = len(table) + 1
    return table


def parse_presentation(source: str) -> GroupPresentation:
    """Parse the line-based presentation format.

    One ``generators: a b c`` line followed by ``relator: a b A B`` lines;
    uppercase letters denote inverses, letters map to indices in declaration
    order.  Blank lines and ``#`` comments are skipped.
    """
    table: dict[str, int] | None = None
    relators: list[Word] = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"line {lineno}"
        if line.startswith("generators:"):
            if table is not None:
                raise PresentationParseError(f"{where}: duplicate generators line")
            table = _generator_table(line[len("generators:"):].split(), where)
        elif line.startswith("relator:"):
            if table is None:
                raise PresentationParseError(f"{where}: relator before the generators line")
            word = Word(tuple(_letters_from_tokens(line[len("relator:"):].split(), table, where)))
            if not word.letters:
                raise PresentationParseError(f"{where}: relator reduces to the empty word")
            relators.append(word)
        else:
            raise PresentationParseError(
                f"{where}: expected 'generators:' or 'relator:', got {line!r}"
            )
    if table is None:
        raise PresentationParseError("missing generators line")
    return GroupPresentation(len(table), tuple(relators))


def presentation_from_json_dict(data: Mapping) -> GroupPresentation:
    """JSON mirror of the text format: generator name list + relator token lists."""
    try:
        names = list(data["generators"])
        raw_relators = list(data["relators"])
    except (KeyError, TypeError) as exc:
        raise PresentationParseError(f"presentation JSON needs generators and relators: {exc}")
    table = _generator_table(names, "generators")
    relators = []
    for i, rel in enumerate(raw_relators):
        tokens = rel.split() if isinstance(rel, str) else list(rel)
        where = f"relator {i + 1}"
        word = Word(tuple(_letters_from_tokens(tokens, table, where)))
        if not word.letters:
            raise PresentationParseError(f"{where}: relator reduces to the empty word")
        relators.append(word)
    return GroupPresentation(len(table), tuple(relators))


def load_presentation(path: str) -> GroupPresentation:
    with open(path, "r", encoding="utf-8") as handle:
        source = handle.read()
    if source.lstrip().startswith("{"):
        return presentation_from_json_dict(json.loads(source))
    return parse_presentation(source)


# ---------------------------------------------------------------------------
# Small flag parsers


def _parse_weights(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise SlopekitError(f"bad --weights {text!r}: {exc}")


def _parse_char(text: str) -> TorsionCharacter:
    try:
        mod_part, _, exp_part = text.partition(":")
        modulus = int(mod_part)
        exponents = tuple(int(tok) for tok in exp_part.split(",")) if exp_part else ()
        return TorsionCharacter(modulus, exponents)
    except ValueError as exc:
        raise SlopekitError(f"bad --char {text!r} (want m:k1,k2,...): {exc}")


def _parse_target(text: str) -> density_mod.TargetSlope:
    try:
        p_part, _, q_part = text.partition("/")
        return density_mod.TargetSlope(int(p_part), int(q_part))
    except ValueError as exc:
        raise SlopekitError(f"bad --target {text!r} (want p/q): {exc}")


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SlopekitError(f"bad rational {text!r}: {exc}")


def _thread_cap() -> int | None:
    raw = os.environ.get("SLOPEKIT_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise SlopekitError(f"SLOPEKIT_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise SlopekitError("SLOPEKIT_THREADS must be >= 1")
    return value


# ---------------------------------------------------------------------------
# Config


@dataclass
class RunConfig:
    """Validated invocation: one subcommand plus exactly the flags it needs."""

    subcommand: str
    input: str | None = None
    max_order: int | None = None
    cyclic: int | None = None
    weights: tuple[int, ...] | None = None
    epimorphism_path: str | None = None
    d: int | None = None
    k: int | None = None
    target: density_mod.TargetSlope | None = None
    epsilon: Fraction | None = None
    max_denominator: int | None = None
    exponent: int = 1
    char: str | None = None
    fmt: str = "text"
    out: str | None = None
    plot: str | None = None
    threads: int | None = None


def _emit(config: RunConfig, payload: str) -> None:
    if config.out:
        with open(config.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _laurent_json(poly: LaurentPolynomial) -> list[dict]:
    return [
        {"exponents": list(exps), "coefficient": coeff}
        for exps, coeff in poly.sorted_terms()
    ]


# ---------------------------------------------------------------------------
# Subcommand implementations


def _cmd_abelianize(config: RunConfig) -> int:
    structure = abelianization(load_presentation(config.input))
    if config.fmt == "json":
        payload = _json_text(
            {"free_rank": structure.free_rank, "torsion": list(structure.torsion_coefficients)}
        )
    else:
        torsion = " ".join(map(str, structure.torsion_coefficients)) or "(none)"
        payload = f"free rank: {structure.free_rank}\ntorsion: {torsion}\n"
    _emit(config, payload)
    return 0


def _cmd_alexander(config: RunConfig, character: TorsionCharacter | None) -> int:
    presentation = load_presentation(config.input)
    if character is not None:
        rows = evaluate_alexander_matrix(presentation, character)
        if config.fmt == "json":
            payload = _json_text(
                {
                    "rows": len(rows),
                    "cols": presentation.generator_count,
                    "character": character.to_json_dict(),
                    "entries": [[x.to_json() for x in row] for row in rows],
                }
            )
        else:
            body = "\n".join("[" + ", ".join(str(x) for x in row) + "]" for row in rows)
            payload = (
                f"character: order {character.order}, exponents {list(character.exponents)}\n"
                + (body + "\n" if rows else "(no relators)\n")
            )
    else:
        matrix = alexander_matrix(presentation)
        variables = free_abelianization(presentation).rank
        if config.fmt == "json":
            payload = _json_text(
                {
                    "rows": len(matrix),
                    "cols": presentation.generator_count,
                    "variables": variables,
                    "entries": [[_laurent_json(p) for p in row] for row in matrix],
                }
            )
        else:
            body = "\n".join("[" + ", ".join(str(p) for p in row) + "]" for row in matrix)
            payload = f"variables: {variables}\n" + (body + "\n" if matrix else "(no relators)\n")
    _emit(config, payload)
    return 0


def _cmd_scan(config: RunConfig) -> int:
    presentation = load_presentation(config.input)
    report = scan_jumping_loci(presentation, config.max_order, max_workers=config.threads)
    if config.fmt == "json":
        payload = _json_text(report.to_json_dict())
    else:
        lines = [
            f"scan bound: {report.scan_bound}",
            f"b1: {report.b1}",
            f"exponent: {report.exponent}",
            f"nontrivial entries: {len(report.entries)}",
        ]
        for entry in report.entries:
            lines.append(
                f"  order {entry.character.order} exponents "
                f"{list(entry.character.exponents)}: depth {entry.depth}"
            )
        payload = "\n".join(lines) + "\n"
    _emit(config, payload)
    return 0


def _build_epimorphism(config: RunConfig, rank: int) -> AbelianEpimorphism:
    if config.epimorphism_path:
        with open(config.epimorphism_path, "r", encoding="utf-8") as handle:
            return AbelianEpimorphism.from_json_dict(json.load(handle), source_rank=rank)
    weights = config.weights
    if weights is None:
        weights = tuple([0] * rank)
    if len(weights) != rank:
        raise SlopekitError(
            f"--weights needs {rank} entries (the free rank of H1), got {len(weights)}"
        )
    return AbelianEpimorphism.cyclic(config.cyclic, weights)


def _cmd_cover_b1(config: RunConfig) -> int:
    presentation = load_presentation(config.input)
    fa = free_abelianization(presentation)
    alpha = _build_epimorphism(config, fa.rank)
    bound = config.max_order if config.max_order is not None else alpha.exponent
    report = scan_jumping_loci(presentation, bound, max_workers=config.threads)
    hironaka = hironaka_b1(fa.rank, report, alpha)
    schreier = subgroup_b1(presentation, alpha)
    agree = hironaka.b1 == schreier
    result = {
        "hironaka_b1": hironaka.b1,
        "reidemeister_schreier_b1": schreier,
        "agree": agree,
        "scan_bound": bound,
        "deck_exponent": alpha.exponent,
        "warning": hironaka.warning,
        "contributions": [e.to_json_dict() for e in hironaka.contributions],
    }
    if config.fmt == "json":
        payload = _json_text(result)
    else:
        lines = [
            f"hironaka b1: {hironaka.b1}",
            f"reidemeister-schreier b1: {schreier}",
            f"routes agree: {'yes' if agree else 'NO'}",
        ]
        if hironaka.warning:
            lines.append(f"warning: {hironaka.warning}")
        payload = "\n".join(lines) + "\n"
    _emit(config, payload)
    if not agree:
        if report.scan_bound is not None and report.scan_bound < alpha.exponent:
            reason = (
                f"the scan bound {report.scan_bound} is below the deck group exponent "
                f"{alpha.exponent}, so the jumping-locus route may have missed characters"
            )
        else:
            reason = (
                "the scan bound covers the deck group exponent, so this mismatch "
                "indicates a bug"
            )
        _fail("cover-b1", f"routes disagree ({hironaka.b1} vs {schreier}): {reason}")
        return 1
    return 0


def _require_builtin_profile(config: RunConfig) -> None:
    name = config.input or CARTWRIGHT_STEGER
    if name != CARTWRIGHT_STEGER:
        raise SlopekitError(
            f"the numeric pipeline only knows the built-in profile "
            f"{CARTWRIGHT_STEGER!r}, got {name!r}"
        )


def _cmd_invariants(config: RunConfig) -> int:
    _require_builtin_profile(config)
    params = surfaces.FamilyParams(config.d, config.k)
    surface = surfaces.family_invariants(params)
    value = surfaces.slope(surface)
    ok = surfaces.check_geography(surface)
    if config.fmt == "json":
        data = surface.to_json_dict()
        data.update(
            {"d": params.d, "k": params.k, "slope": f"{value.numerator}/{value.denominator}",
             "geography_ok": ok}
        )
        payload = _json_text(data)
    else:
        payload = (
            f"K2={surface.K2} chi={surface.chi} q={surface.q} pg={surface.pg}\n"
            f"slope: {value.numerator}/{value.denominator}\n"
            f"geography (2chi <= K2 <= 9chi): {'yes' if ok else 'NO'}\n"
        )
    _emit(config, payload)
    return 0


def _cmd_density(config: RunConfig) -> int:
    _require_builtin_profile(config)
    _, fibration = surfaces.cartwright_steger_profile()
    if config.target is not None:
        entries = (
            density_mod.convergence_report(
                config.target, config.exponent, fibration.fiber_genus, config.epsilon
            ),
        )
        epsilon = config.epsilon
    else:
        certificate = density_mod.density_certificate(
            config.epsilon, config.exponent, fibration.fiber_genus, config.max_denominator
        )
        entries = certificate.entries
        epsilon = certificate.epsilon

    def entry_json(entry: density_mod.ConvergenceReport) -> dict:
        return {
            "p": entry.target.p,
            "q": entry.target.q,
            "target": f"{entry.target.value.numerator}/{entry.target.value.denominator}",
            "e": entry.params.cover_exponent or 1,
            "n": entry.n,
            "d": entry.params.d,
            "k": entry.params.k,
            "slope": f"{entry.achieved.numerator}/{entry.achieved.denominator}",
            "gap": f"{entry.gap.numerator}/{entry.gap.denominator}",
        }

    if config.fmt == "json":
        payload = _json_text(
            {"epsilon": f"{epsilon.numerator}/{epsilon.denominator}",
             "entries": [entry_json(e) for e in entries]}
        )
    elif config.fmt == "text":
        lines = [f"epsilon: {epsilon}", f"entries: {len(entries)}"]
        for entry in entries:
            lines.append(
                f"  target {entry.target.value} (p/q={entry.target.p}/{entry.target.q}) "
                f"n={entry.n} d={entry.params.d} k={entry.params.k} "
                f"slope={entry.achieved} gap={entry.gap}"
            )
        payload = "\n".join(lines) + "\n"
    else:
        buffer = StringIO()
        density_mod.write_certificate_csv(entries, buffer)
        payload = buffer.getvalue()
    _emit(config, payload)

    if config.plot:
        with open(config.plot, "w", encoding="utf-8") as handle:
            density_mod.write_slope_svg(entries, handle)
    return 0


# ---------------------------------------------------------------------------
# Driver


def _fail(module: str, message: str, kind: str = "SlopekitError") -> None:
    sys.stderr.write(_json_text({"error": message, "module": module, "type": kind}))


def _provenance(exc: BaseException) -> str:
    module = type(exc).__module__.rsplit(".", 1)[-1]
    return "cli" if module == "__main__" else module


def run(config: RunConfig) -> int:
    """Dispatch a validated config; returns the process exit status."""
    try:
        if config.subcommand == "abelianize":
            return _cmd_abelianize(config)
        if config.subcommand == "alexander":
            character = _parse_char(config.char) if config.char else None
            return _cmd_alexander(config, character)
        if config.subcommand == "scan":
            return _cmd_scan(config)
        if config.subcommand == "cover-b1":
            return _cmd_cover_b1(config)
        if config.subcommand == "invariants":
            return _cmd_invariants(config)
        if config.subcommand == "density":
            return _cmd_density(config)
        raise SlopekitError(f"unknown subcommand {config.subcommand!r}")
    except SlopekitError as exc:
        _fail(_provenance(exc), str(exc), type(exc).__name__)
        return 1
    except FileNotFoundError as exc:
        _fail("cli", str(exc), "FileNotFoundError")
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slopekit",
        description="Exact Betti numbers of abelian covers and slope-dense surface families.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser, formats: tuple[str, ...], default_fmt: str) -> None:
        p.add_argument("--format", choices=formats, default=default_fmt, dest="fmt")
        p.add_argument("--out", default=None)

    p_ab = sub.add_parser("abelianize", help="H1 of a presented group")
    p_ab.add_argument("--input", required=True)
    add_common(p_ab, ("text", "json"), "text")

    p_al = sub.add_parser("alexander", help="Alexander matrix, symbolic or at a character")
    p_al.add_argument("--input", required=True)
    p_al.add_argument("--char", default=None, help="torsion character m:k1,k2,...")
    add_common(p_al, ("text", "json"), "text")

    p_sc = sub.add_parser("scan", help="scan the jumping loci up to a character order")
    p_sc.add_argument("--input", required=True)
    p_sc.add_argument("--max-order", type=int, required=True, dest="max_order")
    add_common(p_sc, ("text", "json"), "text")

    p_cb = sub.add_parser("cover-b1", help="b1 of an abelian cover, both routes")
    p_cb.add_argument("--input", required=True)
    p_cb.add_argument("--cyclic", type=int, default=None)
    p_cb.add_argument("--weights", default=None)
    p_cb.add_argument("--epimorphism", default=None, dest="epimorphism_path",
                      help="path to an epimorphism JSON file")
    p_cb.add_argument("--max-order", type=int, default=None, dest="max_order",
                      help="scan bound; defaults to the deck group exponent")
    add_common(p_cb, ("text", "json"), "text")

    p_in = sub.add_parser("invariants", help="invariants and slope of one family member")
    p_in.add_argument("--input", default=CARTWRIGHT_STEGER)
    p_in.add_argument("--d", type=int, required=True)
    p_in.add_argument("--k", type=int, required=True)
    add_common(p_in, ("text", "json"), "text")

    p_de = sub.add_parser("density", help="density certificate or single-target convergence")
    p_de.add_argument("--input", default=CARTWRIGHT_STEGER)
    p_de.add_argument("--epsilon", required=True)
    p_de.add_argument("--max-denominator", type=int, default=None, dest="max_denominator")
    p_de.add_argument("--target", default=None, help="target fraction p/q")
    p_de.add_argument("--exponent", type=int, default=1,
                      help="exponent e constraining the cover orders (default 1)")
    p_de.add_argument("--plot", default=None, help="write an SVG scatter of (n, slope)")
    add_common(p_de, ("csv", "json", "text"), "csv")

    return parser


def config_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    config = RunConfig(subcommand=args.subcommand)
    config.fmt = getattr(args, "fmt", "text")
    config.out = getattr(args, "out", None)
    config.input = getattr(args, "input", None)
    config.max_order = getattr(args, "max_order", None)
    config.threads = _thread_cap()
    if args.subcommand == "alexander":
        config.char = args.char
    if args.subcommand == "scan" and config.max_order < 1:
        parser.error("--max-order must be >= 1")
    if args.subcommand == "cover-b1":
        config.cyclic = args.cyclic
        config.weights = _parse_weights(args.weights) if args.weights is not None else None
        config.epimorphism_path = args.epimorphism_path
        if config.epimorphism_path is None and config.cyclic is None:
            parser.error("cover-b1 needs --cyclic (with --weights) or --epimorphism")
    if args.subcommand == "invariants":
        config.d, config.k = args.d, args.k
    if args.subcommand == "density":
        config.epsilon = _parse_fraction(args.epsilon)
        config.max_denominator = args.max_denominator
        config.target = _parse_target(args.target) if args.target else None
        config.exponent = args.exponent
        config.plot = args.plot
        if config.target is None and config.max_denominator is None:
            parser.error("density needs --max-denominator or --target")
    return config


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args, parser)
    except SlopekitError as exc:
        _fail(_provenance(exc), str(exc), type(exc).__name__)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
