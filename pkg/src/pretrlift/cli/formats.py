"""JSON file formats for categories, complexes and functor artifacts.

Every loader raises :class:`FormatError` with a line and column pointing into
the source text; every dumper produces sorted, indented, UTF-8 JSON so reruns
are byte-identical.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Mapping

from ..beilinson_geometry import BeilinsonCategory, product_category
from ..completions import CompletionError, Pretr, Twisted
from ..core_algebra import QQ, Field
from ..dg_kernel import Morphism, format_scalar
from ..presentations import (
    Arrow,
    KunnethProduct,
    PresentationError,
    QuiverPresentation,
    build_dg_quiver_category,
    build_path_category,
    format_path,
    parse_combination,
)


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


@dataclass
class Source:
    """Parsed JSON together with its text, for error locations."""

    data: Any
    text: str = ""

    def locate(self, needle: str) -> tuple:
        """Line and column of the first quoted occurrence of ``needle``."""
        pos = self.text.find(json.dumps(needle, ensure_ascii=False))
        if pos < 0:
            return 1, 1
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def fail(self, message: str, needle: str | None = None):
        line, column = self.locate(needle) if needle else (1, 1)
        raise FormatError(message, line, column)


def parse_text(text: str) -> Source:
    try:
        return Source(json.loads(text), text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno) from None


def load(path: str) -> Source:
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# categories


def format_combination(combo: Mapping) -> str:
    parts = []
    for path in sorted(combo, key=lambda p: (len(p), p)):
        text, negative = format_scalar(combo[path])
        label = format_path(path)
        body = label if text == "1" else f"{text}*{label}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts) if parts else "0"


def presentation_to_data(p: QuiverPresentation) -> dict:
    return {
        "name": p.name,
        "vertices": list(p.vertices),
        "arrows": [{"name": a.name, "src": a.src, "dst": a.dst, "deg": a.deg} for a in p.arrows],
        "relations": [format_combination(r) for r in p.relations],
        "differentials": {k: format_combination(v) for k, v in p.differentials.items()},
    }


def presentation_from_data(src: Source, data: Mapping | None = None, field: Field = QQ) -> QuiverPresentation:
    data = src.data if data is None else data
    if not isinstance(data, dict) or "vertices" not in data:
        src.fail("a presentation needs a 'vertices' list")
    arrows = []
    for a in data.get("arrows", []):
        try:
            arrows.append(Arrow(a["name"], a["src"], a["dst"], int(a.get("deg", 0))))
        except (KeyError, TypeError):
            src.fail(f"arrow entry {a!r} needs name, src and dst")
    relations, differentials = [], {}
    for r in data.get("relations", []):
        try:
            relations.append(parse_combination(r, field))
        except PresentationError as exc:
            src.fail(str(exc), r)
    for name, expr in data.get("differentials", {}).items():
        try:
            differentials[name] = parse_combination(expr, field)
        except PresentationError as exc:
            src.fail(str(exc), expr)
    return QuiverPresentation(list(data["vertices"]), arrows, relations, differentials, name=data.get("name", "quiver"))


def category_from_data(src: Source, data: Mapping | None = None, field: Field = QQ):
    """A category from a presentation, ``{"beilinson": n}`` or ``{"product": {...}}``."""
    data = src.data if data is None else data
    if isinstance(data, dict) and "beilinson" in data:
        spec = data["beilinson"]
        n, window = (spec, None) if isinstance(spec, int) else (spec["n"], spec.get("window"))
        return BeilinsonCategory(n, window, field)
    if isinstance(data, dict) and "product" in data:
        spec = data["product"]
        return product_category(spec["a"], spec["b"], bool(spec.get("hat", False)), field)
    p = presentation_from_data(src, data, field)
    try:
        if p.differentials or any(a.deg for a in p.arrows):
            return build_dg_quiver_category(p, field)
        return build_path_category(p, field)
    except PresentationError as exc:
        needle = _offending_string(str(exc), data)
        src.fail(str(exc), needle)


def category_to_data(C) -> dict:
    if isinstance(C, BeilinsonCategory):
        return {"beilinson": {"n": C.n, "window": C.window}}
    if isinstance(C, KunnethProduct) and isinstance(C.A, BeilinsonCategory):
        return {"product": {"a": C.A.n, "b": C.B.n, "hat": C.hat}}
    return presentation_to_data(C.presentation)


def _offending_string(message: str, data: Mapping):
    """Best guess at the JSON string an error message refers to."""
    for r in data.get("relations", []):
        for path in re.findall(r"[\w*]+", r):
            if path in message:
                return r
    for a in data.get("arrows", []):
        if isinstance(a, dict) and a.get("name") and a["name"] in message:
            return a["name"]
    return None


# ---------------------------------------------------------------------------
# complexes and hull morphisms


def parse_expression(C, text: str, source, target, src: Source | None = None) -> Morphism:
    try:
        return C.path(text, source, target)
    except (PresentationError, ValueError, KeyError) as exc:
        if src is not None:
            src.fail(f"bad expression {text!r}: {exc}", text)
        raise


def complex_to_data(hull: Pretr, X: Twisted) -> dict:
    summands = hull.summands(X)
    ents = hull.entries(X.q)
    q = [["0"] * len(summands) for _ in summands]
    for (j, i), m in ents.items():
        q[j][i] = hull.ground.format_morphism(m)
    return {"summands": [{"object": A, "shift": t} for A, t in summands], "q": q}


def complex_from_data(hull: Pretr, src: Source, data: Mapping | None = None) -> Twisted:
    data = src.data if data is None else data
    if isinstance(data, str):
        return hull.embed_object(data)
    try:
        summands = [(s["object"], int(s["shift"])) for s in data["summands"]]
    except (KeyError, TypeError):
        src.fail("a complex needs 'summands' with 'object' and 'shift'")
    objects = set(hull.ground.test_objects())
    for A, _ in summands:
        if A not in objects:
            src.fail(f"unknown object {A!r}", A)
    rows = data.get("q", [])
    if rows and (len(rows) != len(summands) or any(len(r) != len(summands) for r in rows)):
        src.fail("'q' must be a square matrix matching the summands")
    entries = {}
    for j, row in enumerate(rows):
        for i, text in enumerate(row):
            if text.strip() == "0":
                continue
            entries[(j, i)] = parse_expression(hull.ground, text, summands[i][0], summands[j][0], src)
    try:
        return hull.complex(summands, entries)
    except CompletionError as exc:
        src.fail(str(exc))


def hull_morphism_to_data(hull: Pretr, m: Morphism) -> dict:
    return {f"{j},{i}": hull.ground.format_morphism(e) for (j, i), e in sorted(hull.entries(m).items())}


def hull_morphism_from_data(hull: Pretr, X: Twisted, Y: Twisted, degree: int, value, src: Source) -> Morphism:
    if isinstance(value, str):
        value = {"0,0": value}
    xs, ys = hull.summands(X), hull.summands(Y)
    entries = {}
    for pos, text in value.items():
        try:
            j, i = (int(t) for t in pos.split(","))
            target, source = ys[j], xs[i]
        except (ValueError, IndexError):
            src.fail(f"bad matrix position {pos!r}", pos)
        if text.strip() == "0":
            continue
        e = parse_expression(hull.ground, text, source[0], target[0], src)
        expected = degree - source[1] + target[1]
        if e.degree != expected:
            src.fail(f"entry {pos} has degree {e.degree}, expected {expected}", text)
        entries[(j, i)] = e
    return hull.from_entries(X, Y, degree, entries)
