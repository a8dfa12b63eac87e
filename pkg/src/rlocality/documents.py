"""JSON documents for algebras, models and reports."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import FiniteResiduatedLattice, algebra_from_document
from .errors import ModelError
from .semantics import Model, make_model
from .syntax import Signature


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def resolve_algebra(spec: Any, base: Path | None = None) -> FiniteResiduatedLattice:
    """An inline algebra document, a built-in reference such as
    ``{"builtin": "goedel", "n": 3}``, the short string ``"goedel:3"`` or a
    path to a JSON file holding one of these."""
    if isinstance(spec, dict):
        return algebra_from_document(spec)
    if isinstance(spec, str):
        name, sep, n = spec.partition(":")
        if sep and n.isdigit():
            return algebra_from_document({"builtin": name, "n": int(n)})
        if spec in ("boolean", "bool", "B2"):
            return algebra_from_document({"builtin": "boolean"})
        path = Path(spec)
        if base is not None and not path.is_absolute():
            path = base / path
        return resolve_algebra(load_json(path), path.parent)
    raise ModelError(f"cannot read algebra reference {spec!r}")


def _element(value: Any, names: list[str] | None) -> int:
    if isinstance(value, int):
        return value
    if names and value in names:
        return names.index(value)
    raise ModelError(f"unknown domain element {value!r}")


def model_from_document(doc: dict, algebra: FiniteResiduatedLattice | None = None,
                        base: Path | None = None) -> Model:
    """Read a model document.

    Relations are either flat value lists in lexicographic tuple order or
    ``{"default": LABEL, "tuples": [[arg, ..., LABEL], ...]}``.  Arguments and
    constant values may be element indices or element names.
    """
    try:
        if algebra is None:
            algebra = resolve_algebra(doc["algebra"], base)
        sig = Signature.from_document(doc["signature"])
        names = doc.get("names")
        size = doc.get("domain_size", len(names) if names else None)
        if size is None:
            raise ModelError("model document needs domain_size or names")
        rels = {}
        for rel, spec in doc.get("relations", {}).items():
            if isinstance(spec, dict):
                table = {}
                for row in spec.get("tuples", []):
                    *args, val = row
                    table[tuple(_element(a, names) for a in args)] = val
                if spec.get("default") is not None:
                    default = algebra.index(spec["default"])
                    rels[rel] = lambda args, t=table, d=default: t.get(tuple(args), d)
                else:
                    rels[rel] = table
            else:
                rels[rel] = list(spec)
        consts = {c: _element(v, names) for c, v in doc.get("constants", {}).items()}
        return make_model(algebra, sig, size, rels, consts, doc.get("eq_gap"), names=names)
    except KeyError as exc:
        raise ModelError(f"model document is missing key {exc.args[0]!r}") from None


def load_model(path: str | Path, algebra: FiniteResiduatedLattice | None = None) -> Model:
    path = Path(path)
    return model_from_document(load_json(path), algebra, path.parent)


def load_algebra(path: str | Path) -> FiniteResiduatedLattice:
    return resolve_algebra(str(path))
