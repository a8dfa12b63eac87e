"""Command-line front end.

Every command returns a JSON-serialisable report; ``--format text`` renders
it as short human-readable lines using algebra labels.  Exit status is 0 on
success, 1 when a property violation was found and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import catalog
from .algebra import FiniteResiduatedLattice, validate_algebra
from .documents import dumps, load_json, load_model, resolve_algebra
from .errors import AlgebraViolation, FormulaSyntaxError, LocalityError
from .gaifman import distinguish, encode_distance, prenex, relativize, theta
from .games import k_equivalent
from .generators import hanf_pairs, random_models
from .hanf import GeneratedPair, hanf_check, swap_check
from .isotypes import build_isotype
from .metric import GaifmanMetric, parse_metric, same_sphere_type, sphere, sphere_type_index, strict_bottom, threshold_ge
from .queries import (GeneratedModel, Query, builtin_query, definable_query, test_gaifman_local,
                      test_hanf_local)
from .semantics import Evaluator, Model, standard_expansion
from .syntax import Signature, dag_size, parse

FORMAT_ENV = "RLOCALITY_FORMAT"

OK, VIOLATION, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    """Bad command-line input that is not a library error."""


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    metric: str | None = None
    bounds: dict[str, int] = field(default_factory=dict)
    seed: int | None = None
    output_format: str = "text"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.output_format not in ("text", "json"):
            raise InputError(f"unknown output format {self.output_format!r}")
        for name, value in self.bounds.items():
            if value is not None and value < 0:
                raise InputError(f"bound {name} must be non-negative")


@dataclass
class Report:
    status: int
    document: dict
    lines: list[str]

    def render(self, output_format: str) -> str:
        if output_format == "json":
            return dumps({"status": self.status, **self.document})
        return "\n".join(self.lines) + "\n"


# -- helpers ---------------------------------------------------------------------


def _model(cfg: RunConfig, i: int = 0, algebra: FiniteResiduatedLattice | None = None) -> Model:
    if len(cfg.inputs) <= i:
        raise InputError("missing model input")
    return load_model(cfg.inputs[i], algebra)


def _elements(m: Model, text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok.isdigit():
            out.append(int(tok))
        elif m.names and tok in m.names:
            out.append(m.names.index(tok))
        else:
            raise InputError(f"unknown element {tok!r}")
        if not 0 <= out[-1] < m.domain_size:
            raise InputError(f"element {tok!r} lies outside the domain")
    return tuple(out)


def _names(m: Model, tup) -> str:
    return "(" + ", ".join(m.element_name(d) for d in tup) + ")"


def _metric(cfg: RunConfig, m: Model) -> GaifmanMetric:
    return strict_bottom(m.algebra) if cfg.metric is None else parse_metric(cfg.metric, m.algebra)


def _signature(text: str) -> Signature:
    rels, consts = {}, []
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, arity = part.partition(":")
        if sep:
            rels[name] = int(arity)
        else:
            consts.append(name)
    return Signature.of(constants=consts, **rels)


def _env(m: Model, text: str | None) -> dict[str, int]:
    env = {}
    for part in filter(None, (p.strip() for p in (text or "").split(","))):
        var, sep, val = part.partition("=")
        if not sep:
            raise InputError(f"cannot read assignment {part!r}")
        env[var.strip()] = _elements(m, val)[0]
    return env


# -- commands --------------------------------------------------------------------


def cmd_validate_algebra(cfg: RunConfig) -> Report:
    src = cfg.inputs[0] if cfg.inputs else None
    if src is None:
        raise InputError("missing algebra input")
    if os.path.exists(src):
        doc = load_json(src)
        if "builtin" not in doc:
            try:
                A = validate_algebra(doc["labels"], doc["unit"], doc["meet"], doc["join"],
                                     doc["fuse"], doc["lres"], doc["rres"])
            except AlgebraViolation as exc:
                return Report(VIOLATION, {"valid": False, "law": exc.law, "message": str(exc),
                                          "witness": list(exc.witness)},
                              [f"invalid: {exc}"])
            except KeyError as exc:
                raise InputError(f"algebra document is missing key {exc.args[0]!r}") from None
        else:
            A = resolve_algebra(doc, Path(src).parent)
    else:
        A = resolve_algebra(src)
    fl = A.flags
    lab = lambda i: None if i is None else A.label(i)  # noqa: E731
    flags = {"chain": fl.is_chain, "bot": lab(fl.bot), "top": lab(fl.top),
             "co_atom": lab(fl.co_atom), "well_connected": fl.well_connected,
             "zero_divisors": fl.has_zero_divisors,
             "designated": sorted(A.label(a) for a in fl.up_set_of_unit)}
    lines = [f"valid residuated lattice with {A.carrier_size} elements",
             f"labels: {' '.join(A.labels)}", f"unit: {A.label(A.unit)}"]
    lines += [f"{k}: {v}" for k, v in flags.items()]
    return Report(OK, {"valid": True, "labels": list(A.labels), "unit": A.label(A.unit),
                       "flags": flags}, lines)


def cmd_eval(cfg: RunConfig) -> Report:
    m = _model(cfg)
    f = parse(cfg.options["formula"], m.sig, m.algebra)
    env = _env(m, cfg.options.get("env"))
    v = Evaluator(standard_expansion(m)).value(f, env)
    A = m.algebra
    doc = {"formula": str(f), "value": A.label(v), "models": A.is_designated(v)}
    return Report(OK, doc, [f"value: {A.label(v)}", f"models: {str(A.is_designated(v)).lower()}"])


def cmd_equiv(cfg: RunConfig) -> Report:
    m = _model(cfg)
    n = _model(cfg, 1, m.algebra)
    k = cfg.bounds["k"]
    anchor = (_elements(m, cfg.options.get("anchor_m")), _elements(n, cfg.options.get("anchor_n")))
    verdict = k_equivalent(m, n, k, anchor)
    doc = verdict.to_document()
    if not cfg.options.get("system"):
        doc.pop("system", None)
    return Report(OK, doc, [f"{k}-equivalent: {str(verdict.result).lower()}"])


def cmd_isotype(cfg: RunConfig) -> Report:
    m = _model(cfg)
    anchor = _elements(m, cfg.options.get("anchor"))
    t = build_isotype(m, anchor, cfg.bounds["k"], cfg.bounds.get("node_cap") or 2_000_000)
    doc = {"k": t.k, "anchor": list(anchor), "variables": t.variables,
           "quantifier_depth": t.formula.qd, "dag_size": dag_size(t.formula),
           "formula": str(t.formula)}
    lines = [f"quantifier depth: {t.formula.qd}", f"dag size: {dag_size(t.formula)}", str(t.formula)]
    return Report(OK, doc, lines)


def cmd_spheres(cfg: RunConfig) -> Report:
    first = _model(cfg)
    models = [first] + [_model(cfg, i, first.algebra) for i in range(1, len(cfg.inputs))]
    metric = _metric(cfg, first)
    idx = sphere_type_index(models, metric, cfg.bounds["r"], cfg.bounds.get("arity") or 1)
    lines = [f"metric: {metric.describe(first.algebra)}", f"sphere types: {len(idx.representatives)}"]
    for cid, (mi, tup) in enumerate(idx.representatives):
        counts = " ".join(str(c) for c in idx.counts[cid])
        lines.append(f"type {cid}: center {_names(models[mi], tup)} of model {mi}, "
                     f"size {idx.sizes[cid]}, counts {counts}")
    doc = idx.to_document()
    doc["metric"] = metric.describe(first.algebra)
    return Report(OK, doc, lines)


def cmd_hanf(cfg: RunConfig) -> Report:
    m = _model(cfg)
    n = _model(cfg, 1, m.algebra)
    metric = None if cfg.metric is None else parse_metric(cfg.metric, m.algebra)
    rep = hanf_check(m, n, cfg.bounds["k"], metric, cfg.options.get("override", False))
    lines = [f"metric: {rep.metric}", f"radii: {' '.join(map(str, rep.radii))}", f"e: {rep.e}"]
    lines += [f"r={row.radius} type {row.type_id}: {row.counts[0]} vs {row.counts[1]} ({row.verdict})"
              for row in rep.rows]
    lines += [f"note: {note}" for note in rep.notes]
    lines.append(f"premise: {str(rep.premise).lower()}")
    return Report(OK, rep.to_document(), lines)


def cmd_swap(cfg: RunConfig) -> Report:
    m = _model(cfg)
    n = _model(cfg, 1, m.algebra)
    metric = None if cfg.metric is None else parse_metric(cfg.metric, m.algebra)
    anchor = (_elements(m, cfg.options.get("anchor_m")), _elements(n, cfg.options.get("anchor_n")))
    ok = swap_check(m, n, cfg.bounds["r"], anchor, metric, cfg.options.get("override", False))
    return Report(OK, {"radius": cfg.bounds["r"], "related": ok},
                  [f"swap-related at radius {cfg.bounds['r']}: {str(ok).lower()}"])


def _signature_from(cfg: RunConfig) -> tuple[Signature, FiniteResiduatedLattice | None]:
    if cfg.inputs:
        m = _model(cfg)
        return m.sig, m.algebra
    if cfg.options.get("signature") is None:
        raise InputError("give a model or --signature")
    A = resolve_algebra(cfg.options["algebra"]) if cfg.options.get("algebra") else None
    return _signature(cfg.options["signature"]), A


def cmd_theta(cfg: RunConfig) -> Report:
    sig, _ = _signature_from(cfg)
    f = theta(sig, cfg.bounds["r"])
    text = "none" if f is None else str(f)
    return Report(OK, {"radius": cfg.bounds["r"], "formula": None if f is None else text}, [text])


def cmd_relativize(cfg: RunConfig) -> Report:
    sig, A = _signature_from(cfg)
    if A is None:
        raise InputError("relativization needs an algebra (model or --algebra)")
    f = parse(cfg.options["formula"], sig, A)
    metric = strict_bottom(A) if cfg.metric is None else parse_metric(cfg.metric, A)
    enc = encode_distance(A, metric, sig)
    anchor = [v for v in (cfg.options.get("anchor") or "").split(",") if v]
    if not anchor:
        anchor = list(f.free_order)
    out = relativize(f, cfg.bounds["r"], anchor, enc)
    doc = {"prenex": str(prenex(f)), "relativized": str(out), "anchor": anchor,
           "metric": metric.describe(A)}
    return Report(OK, doc, [f"prenex: {doc['prenex']}", f"relativized: {doc['relativized']}"])


def cmd_distinguish(cfg: RunConfig) -> Report:
    m = _model(cfg)
    n = _model(cfg, 1, m.algebra)
    metric = None if cfg.metric is None else parse_metric(cfg.metric, m.algebra)
    res = distinguish(m, n, cfg.bounds["r"], cfg.bounds["q"], cfg.bounds.get("scatter") or 2, metric,
                      cfg.options.get("vocabulary", "types"))
    if res.found is None:
        lines = ["distinguishing sentence: none"]
    else:
        d = res.found
        lines = [f"distinguishing sentence: {d.sentence}",
                 f"radius {d.radius}, rank {d.rank}, scatter {d.scatter}",
                 f"first models it: {str(d.holds_in_first).lower()}",
                 f"second models it: {str(d.holds_in_second).lower()}"]
    return Report(OK, res.to_document(), lines)


def _query(cfg: RunConfig, m: Model) -> Query:
    name = cfg.options.get("query")
    if name:
        base, _, t = name.partition(":")
        return builtin_query(base, t or None)
    if not cfg.options.get("formula"):
        raise InputError("give --query or --formula")
    f = parse(cfg.options["formula"], m.sig, m.algebra)
    return definable_query(f, cfg.options.get("mode") or "models")


def cmd_query(cfg: RunConfig) -> Report:
    m = _model(cfg)
    q = _query(cfg, m)
    answers = sorted(q.answers(m))
    doc = {"query": q.name, "arity": q.arity}
    if q.arity == 0:
        doc["value"] = q.value(m)
        lines = [f"{q.name}: {q.value(m)}"]
    else:
        doc["answers"] = [list(t) for t in answers]
        lines = [f"{q.name}: {len(answers)} tuples"] + [_names(m, t) for t in answers]
    status = OK
    test = cfg.options.get("locality")
    if test:
        if cfg.seed is None:
            raise InputError("randomized locality tests need --seed")
        r, trials = cfg.bounds["r"], cfg.bounds.get("trials") or 20
        if test == "hanf":
            rep = test_hanf_local(q, r, hanf_pairs(m.algebra, cfg.seed, 1), trials)
        else:
            metric = _metric(cfg, m)
            rep = test_gaifman_local(q, r, random_models(m.algebra, cfg.seed, sig=m.sig), trials, metric)
        doc["locality"] = rep.to_document()
        lines.append(f"{test} locality at radius {r}: {len(rep.violations)} violations "
                     f"in {rep.comparisons} comparisons")
        if rep.violations:
            status = VIOLATION
    return Report(status, doc, lines)


# -- reproductions -----------------------------------------------------------------


def repro_two_point(cfg: RunConfig) -> Report:
    pair = catalog.two_point_asymmetry()
    A, m, n = pair.algebra, pair.m, pair.n
    vm = Evaluator(m).value(pair.sentence)
    vn = Evaluator(n).value(pair.sentence)
    game = k_equivalent(m, n, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        modelling = hanf_check(m, n, 2, GaifmanMetric("models"), override=True)
    strict = hanf_check(m, n, 2)
    doc = {"algebra": "goedel:3", "sentence": str(pair.sentence),
           "value_first": A.label(vm), "value_second": A.label(vn),
           "two_equivalent": game.result,
           "hanf_premise": {"models": modelling.premise, strict.metric: strict.premise}}
    lines = [f"sentence: {pair.sentence}",
             f"value in M: {A.label(vm)}", f"value in N: {A.label(vn)}",
             f"2-equivalent: {str(game.result).lower()}",
             f"Hanf premise under models: {str(modelling.premise).lower()}",
             f"Hanf premise under {strict.metric}: {str(strict.premise).lower()}"]
    status = OK if (A.label(vm), A.label(vn), game.result, modelling.premise) == ("1", "0", False, True) else VIOLATION
    return Report(status, doc, lines)


def repro_single_point(cfg: RunConfig) -> Report:
    pair = catalog.single_point_pair()
    A, m, n = pair.algebra, pair.m, pair.n
    vm = Evaluator(m).value(pair.sentence)
    vn = Evaluator(n).value(pair.sentence)
    game = k_equivalent(m, n, 0, ((0,), (0,)))
    with_types = distinguish(m, n, 2, 2)
    plain = distinguish(m, n, 2, 2, vocabulary="plain")
    fmt = lambda res: "none" if res.found is None else str(res.found.sentence)  # noqa: E731
    doc = {"algebra": "goedel:5", "sentence": str(pair.sentence),
           "value_first": A.label(vm), "value_second": A.label(vn),
           "zero_equivalent_at_s": game.result,
           "distinguish": {"with_truth_constants": with_types.to_document(),
                           "without_truth_constants": plain.to_document()}}
    lines = [f"sentence: {pair.sentence}",
             f"value in M: {A.label(vm)}", f"value in N: {A.label(vn)}",
             f"0-equivalent at (s, s): {str(game.result).lower()}",
             f"distinguish with truth constants: {fmt(with_types)}",
             f"distinguish without truth constants: {fmt(plain)}"]
    expected = (A.label(vm), A.label(vn), game.result) == ("3/4", "1/2", False)
    return Report(OK if expected else VIOLATION, doc, lines)


def repro_connectivity(cfg: RunConfig) -> Report:
    pair = catalog.cycle_pair(4)
    q = builtin_query("bot_connectivity")
    related = swap_check(pair.m, pair.n, 1)
    rep = test_hanf_local(q, 1, [GeneratedPair(pair.m, pair.n, 0, "8-cycle vs two 4-cycles")], 1)
    doc = {"value_first": q.value(pair.m), "value_second": q.value(pair.n),
           "swap_related_radius_1": related, "certificate": rep.to_document()}
    lines = ["M: cycle of length 8, N: two cycles of length 4 (unit weights)",
             f"bot-connected M: {q.value(pair.m)}", f"bot-connected N: {q.value(pair.n)}",
             f"swap-related at radius 1: {str(related).lower()}",
             f"violations of Hanf locality at radius 1: {len(rep.violations)}"]
    expected = (q.value(pair.m), q.value(pair.n), related, rep.ok) == (1, 0, True, False)
    return Report(OK if expected else VIOLATION, doc, lines)


def repro_transitive_closure(cfg: RunConfig) -> Report:
    m, (a, b) = catalog.threshold_chain(1)
    t = "1/2"
    A = m.algebra
    q = builtin_query("t_transitive_closure", t)
    metric = threshold_ge(A.index(t))
    iso = same_sphere_type(sphere(m, metric, (a, b), 1), sphere(m, metric, (b, a), 1))
    rep = test_gaifman_local(q, 1, [GeneratedModel(m, 0, "directed chain of length 8")], 1, metric)
    doc = {"threshold": t, "positions": [a, b], "forward": q.holds(m, (a, b)),
           "backward": q.holds(m, (b, a)), "pointed_spheres_isomorphic": iso,
           "certificate": rep.to_document()}
    lines = [f"M: directed chain of length 8 with edges at {t}",
             f"pair: positions {a} and {b} (zero-based)",
             f"forward pair in closure: {str(doc['forward']).lower()}",
             f"backward pair in closure: {str(doc['backward']).lower()}",
             f"radius-1 pointed spheres isomorphic: {str(iso).lower()}",
             f"violations of Gaifman locality at radius 1: {len(rep.violations)}"]
    expected = (doc["forward"], doc["backward"], iso, rep.ok) == (True, False, True, False)
    return Report(OK if expected else VIOLATION, doc, lines)


REPRODUCTIONS: dict[str, Callable[[RunConfig], Report]] = {
    "two-point-asymmetry": repro_two_point,
    "single-point-monadic": repro_single_point,
    "cycle-connectivity": repro_connectivity,
    "chain-transitive-closure": repro_transitive_closure,
}


def cmd_repro(cfg: RunConfig) -> Report:
    name = cfg.options["example"]
    if name not in REPRODUCTIONS:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(REPRODUCTIONS)}")
    rep = REPRODUCTIONS[name](cfg)
    rep.document = {"example": name, **rep.document}
    return rep


COMMANDS: dict[str, Callable[[RunConfig], Report]] = {
    "validate-algebra": cmd_validate_algebra,
    "eval": cmd_eval,
    "equiv": cmd_equiv,
    "isotype": cmd_isotype,
    "spheres": cmd_spheres,
    "hanf": cmd_hanf,
    "swap": cmd_swap,
    "theta": cmd_theta,
    "relativize": cmd_relativize,
    "distinguish": cmd_distinguish,
    "query": cmd_query,
    "repro": cmd_repro,
}


def run(cfg: RunConfig) -> Report:
    """Dispatch ``cfg`` and map library errors to exit status 2."""
    try:
        return COMMANDS[cfg.command](cfg)
    except FormulaSyntaxError as exc:
        text = cfg.options.get("formula", "")
        lines = [f"error: {exc}"]
        if text and exc.position is not None:
            lines += [f"  {text}", "  " + " " * exc.position + "^"]
        return Report(INPUT_ERROR, {"error": type(exc).__name__, "message": str(exc),
                                    "position": exc.position}, lines)
    except (LocalityError, InputError, OSError, ValueError, json.JSONDecodeError) as exc:
        return Report(INPUT_ERROR, {"error": type(exc).__name__, "message": str(exc)},
                      [f"error: {exc}"])


# -- argument parsing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rlocality", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "json"), default=None,
                   help=f"output format (default from ${FORMAT_ENV}, else text)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, models: int = 0) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        if models == 1:
            sp.add_argument("--model", required=True, help="model JSON file")
        elif models == 2:
            sp.add_argument("--m", required=True, help="first model JSON file")
            sp.add_argument("--n", required=True, help="second model JSON file")
        return sp

    sp = add("validate-algebra", "validate operation tables and report flags")
    sp.add_argument("algebra", help="JSON file or built-in reference such as goedel:3")

    sp = add("eval", "value of a formula in the standard expansion", 1)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--env", help="assignments such as x=0,y=t")

    sp = add("equiv", "k-round game equivalence", 2)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--anchor-m")
    sp.add_argument("--anchor-n")
    sp.add_argument("--system", action="store_true", help="include the back-and-forth system")

    sp = add("isotype", "k-isomorphism-type formula", 1)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--anchor")
    sp.add_argument("--node-cap", type=int)

    sp = sub.add_parser("spheres", help="classify sphere types")
    sp.add_argument("--model", action="append", required=True, help="model file (repeatable)")
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--arity", type=int, default=1)
    sp.add_argument("--metric")

    sp = add("hanf", "check the Hanf premise", 2)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--metric")
    sp.add_argument("--override", action="store_true", help="allow out-of-contract metrics")

    sp = add("swap", "equal sphere-type counts around anchors", 2)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--anchor-m")
    sp.add_argument("--anchor-n")
    sp.add_argument("--metric")
    sp.add_argument("--override", action="store_true")

    for name, text in (("theta", "path formula of a radius"), ("relativize", "relativize a formula")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--model")
        sp.add_argument("--signature", help="e.g. E:2,P:1,c (constants have no arity)")
        sp.add_argument("--algebra", help="algebra reference when no model is given")
        sp.add_argument("--radius", type=int, required=True)
        if name == "relativize":
            sp.add_argument("--formula", required=True)
            sp.add_argument("--anchor", help="comma-separated anchor variables")
            sp.add_argument("--metric")

    sp = add("distinguish", "search for a separating basic local sentence", 2)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--scatter", type=int, default=2)
    sp.add_argument("--metric")
    sp.add_argument("--vocabulary", choices=("types", "plain"), default="types")

    sp = add("query", "evaluate a query and optionally test its locality", 1)
    sp.add_argument("--query", help="bot_connectivity or t_transitive_closure:LABEL")
    sp.add_argument("--formula")
    sp.add_argument("--mode", help="models, ge:LABEL or gt:LABEL")
    sp.add_argument("--locality", choices=("hanf", "gaifman"))
    sp.add_argument("--radius", type=int, default=1)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--metric")
    sp.add_argument("--seed", type=int)

    sp = sub.add_parser("repro", help="reproduce a worked example")
    sp.add_argument("example", choices=sorted(REPRODUCTIONS))
    sp.add_argument("--seed", type=int)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    command = d.pop("command")
    fmt = d.pop("format") or os.environ.get(FORMAT_ENV) or "text"
    inputs: list[str] = []
    for key in ("model", "m", "n"):
        v = d.pop(key, None)
        if isinstance(v, list):
            inputs += v
        elif v:
            inputs.append(v)
    if command == "validate-algebra":
        inputs.append(d.pop("algebra"))
    bounds = {}
    for key, dest in (("k", "k"), ("radius", "r"), ("rank", "q"), ("scatter", "scatter"),
                      ("arity", "arity"), ("node_cap", "node_cap"), ("trials", "trials")):
        if key in d:
            bounds[dest] = d.pop(key)
    metric = d.pop("metric", None)
    seed = d.pop("seed", None)
    return RunConfig(command, inputs, metric, bounds, seed, fmt, d)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    rep = run(cfg)
    out = sys.stdout if rep.status != INPUT_ERROR or cfg.output_format == "json" else sys.stderr
    out.write(rep.render(cfg.output_format))
    return rep.status


if __name__ == "__main__":
    sys.exit(main())
