"""Command-line entry point.

Exit codes: 0 when every check passes, 1 on a mathematical failure, 2 on a
usage or parse error.  All output goes through one :class:`Writer`.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from ..ainf_engine import TableFunctor, check_relation_suite
from ..completions import CompletionError, Pretr, check_maurer_cartan, cone_objects
from ..core_algebra import field_from_spec
from ..dg_kernel import check_dg_axioms
from ..homology_lab import QuiverLiftError, quiver_functor_lift
from ..lift_engine import LiftError, f_sharp
from ..presentations import PathCategory, PresentationError, format_path, parse_combination
from . import formats
from .formats import FormatError, Source
from .scenarios import SCENARIOS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Writer:
    """Collects output and emits it in one piece."""

    fmt: str = "text"
    lines: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    def line(self, text: str) -> None:
        self.lines.append(text)

    def flush(self, stream) -> None:
        if self.fmt == "json":
            stream.write(formats.dumps(self.payload))
        else:
            stream.write("".join(line + "\n" for line in self.lines))


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# ---------------------------------------------------------------------------


def cmd_check(args, out: Writer) -> int:
    fld = field_from_spec(args.field)
    C = formats.category_from_data(formats.load(args.category), field=fld)
    report = check_dg_axioms(C, depth=args.depth)
    out.payload = {"command": "check", "report": report.to_dict()}
    out.line(f"{_status(report.ok)} dg axioms on {C.name} (depth {args.depth})")
    for clause, n in sorted(report.checked.items()):
        out.line(f"  {clause}: {n} checked")
    for v in report.violations:
        out.line(f"  violation: {v.describe()}")
    return EXIT_OK if report.ok else EXIT_FAIL


def _path_tuple(text: str) -> tuple:
    combo = parse_combination(text)
    if len(combo) != 1:
        raise UsageError(f"{text!r} is not a single path")
    return next(iter(combo))


def _pair_key(text: str) -> tuple:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")) or body.count(",") != 1:
        raise UsageError(f"expected an arrow pair like (gamma,beta), got {text!r}")
    left, right = body[1:-1].split(",")
    return _path_tuple(left), _path_tuple(right)


def _pin_value(text: str):
    text = text.strip()
    return json.loads(text) if text.startswith("{") else text


def _load_table_input(args, fld):
    Q = formats.category_from_data(formats.load(args.category), field=fld)
    if not isinstance(Q, PathCategory):
        raise UsageError("lifting needs a quiver presentation as the source")
    spec = formats.load(args.functor)
    data = spec.data
    target = Q if "target" not in data else formats.category_from_data(spec, data["target"], fld)
    hull = Pretr(target)
    objects = {}
    for v in Q.test_objects():
        if v not in data.get("objects", {}):
            spec.fail(f"no image given for object {v!r}")
        objects[v] = formats.complex_from_data(hull, spec, data["objects"][v])
    arrows = {}
    for name, arrow in Q.arrows.items():
        if name not in data.get("f1", {}):
            spec.fail(f"no image given for arrow {name!r}")
        arrows[name] = formats.hull_morphism_from_data(
            hull, objects[arrow.src], objects[arrow.dst], 0, data["f1"][name], spec)
    reps = {}
    for text, value in data.get("representatives", {}).items():
        key = _path_tuple(text)
        src_v, dst_v = Q.path_endpoints(key)
        reps[key] = formats.hull_morphism_from_data(hull, objects[src_v], objects[dst_v], 0, value, spec)
    pin_texts = dict(data.get("pins", {}))
    for flag in args.pin_homotopy or []:
        if "=" not in flag:
            raise UsageError(f"--pin-homotopy expects <pair>=<element>, got {flag!r}")
        pair, value = flag.split("=", 1)
        pin_texts[pair] = _pin_value(value)
    pins = {}
    for pair, value in pin_texts.items():
        ka, kb = _pair_key(pair)
        src_v, dst_v = Q.path_endpoints(kb)[0], Q.path_endpoints(ka)[1]
        pins[(ka, kb)] = formats.hull_morphism_from_data(hull, objects[src_v], objects[dst_v], -1, value,
                                                         Source(value, json.dumps(value)))
    return Q, hull, objects, arrows, reps, pins, data.get("name", "lift")


def functor_artifact(Q, hull: Pretr, lift, fld_spec: str, sharp_check=None) -> dict:
    F = lift.functor
    f1, f2 = {}, {}
    for (X, Y, key), m in F.tables.get(1, {}).items():
        f1[format_path(key)] = formats.hull_morphism_to_data(hull, m)
    for ((_, _, ka), (_, _, kb)), m in F.tables.get(2, {}).items():
        f2[f"({format_path(ka)},{format_path(kb)})"] = formats.hull_morphism_to_data(hull, m)
    art = {
        "kind": "ainf-functor",
        "name": F.name,
        "field": fld_spec,
        "source": formats.category_to_data(Q),
        "target": formats.category_to_data(hull.ground),
        "objects": {v: formats.complex_to_data(hull, X) for v, X in sorted(F.objects.items())},
        "f1": f1,
        "f2": f2,
        "notes": list(lift.notes),
        "certificate": lift.certificate.to_dict(),
    }
    if sharp_check is not None:
        art["sharp_check"] = sharp_check
    return art


def functor_from_artifact(src: Source, fld):
    data = src.data
    if not isinstance(data, dict) or data.get("kind") != "ainf-functor":
        src.fail("not a functor artifact")
    Q = formats.category_from_data(src, data["source"], fld)
    target = formats.category_from_data(src, data["target"], fld)
    hull = Pretr(target)
    objects = {v: formats.complex_from_data(hull, src, d) for v, d in data["objects"].items()}
    f1 = {}
    for text, value in data.get("f1", {}).items():
        key = _path_tuple(text)
        s, t = Q.path_endpoints(key)
        f1[(s, t, key)] = formats.hull_morphism_from_data(hull, objects[s], objects[t], 0, value, src)
    f2 = {}
    for text, value in data.get("f2", {}).items():
        ka, kb = _pair_key(text)
        (sb, tb), (sa, ta) = Q.path_endpoints(kb), Q.path_endpoints(ka)
        f2[((sa, ta, ka), (sb, tb, kb))] = formats.hull_morphism_from_data(hull, objects[sb], objects[ta], -1,
                                                                            value, src)
    F = TableFunctor(Q, hull, objects, {1: f1, 2: f2}, name=data.get("name", "functor"))
    F.support_bound = 2 if f2 else 1
    return Q, hull, F


def _sharp_check(F, source_hull: Pretr) -> dict:
    sharp = f_sharp(F, source_hull)
    rows = {}
    for X in cone_objects(source_hull, limit=4):
        Y = sharp.obj(X)
        ok_mc, _ = check_maurer_cartan(sharp.target.sums, Y.q)
        label = formats.dumps(formats.complex_to_data(source_hull, X)).replace("\n", "").replace(" ", "")
        rows[label] = {"one_sided": sharp.target.is_one_sided(Y), "maurer_cartan": ok_mc}
    return rows


def cmd_lift(args, out: Writer) -> int:
    fld = field_from_spec(args.field)
    Q, hull, objects, arrows, reps, pins, name = _load_table_input(args, fld)
    try:
        lift = quiver_functor_lift(Q, hull, objects, arrows, pins=pins, representatives=reps, name=name)
    except QuiverLiftError as exc:
        out.payload = {"command": "lift", "ok": False, "error": str(exc)}
        out.line(f"FAIL lift refused: {exc}")
        return EXIT_FAIL
    sharp = _sharp_check(lift.functor, Pretr(Q)) if args.sharp else None
    art = functor_artifact(Q, hull, lift, args.field, sharp)
    ok = lift.certificate.ok and all(r["one_sided"] and r["maurer_cartan"] for r in (sharp or {}).values())
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(formats.dumps(art))
    out.payload = {"command": "lift", "ok": ok, "artifact": art}
    out.line(f"{_status(ok)} lift {name}: relation residual zero on {art['certificate']['checked']}")
    for note in lift.notes:
        out.line(f"  note: {note}")
    for pair, h in sorted(art["f2"].items()):
        out.line(f"  f2{pair} = {h}")
    if sharp is not None:
        out.line(f"  sharp lift checked on {len(sharp)} cones")
    if args.output:
        out.line(f"  artifact written to {args.output}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_apply(args, out: Writer) -> int:
    fld = field_from_spec(args.field)
    Q, hull, F = functor_from_artifact(formats.load(args.artifact), fld)
    guard = check_relation_suite(F, Q.test_objects(), max_length=3)
    if not guard.ok:
        out.payload = {"command": "apply", "ok": False, "certificate": guard.to_dict()}
        out.line("FAIL artifact does not satisfy the functor relation")
        return EXIT_FAIL
    source_hull = Pretr(Q)
    X = formats.complex_from_data(source_hull, formats.load(args.complex))
    Y = f_sharp(F, source_hull).obj(X)
    ok_mc, residual = check_maurer_cartan(hull.sums, Y.q)
    one_sided = hull.is_one_sided(Y)
    data = formats.complex_to_data(hull, Y)
    ok = ok_mc and one_sided
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(formats.dumps(data))
    out.payload = {"command": "apply", "ok": ok, "complex": data,
                   "maurer_cartan": ok_mc, "one_sided": one_sided}
    out.line(f"{_status(ok)} image complex: one-sided {one_sided}, Maurer-Cartan {ok_mc}")
    out.line("  summands: " + ", ".join(f"{s['object']}[{s['shift']}]" for s in data["summands"]))
    for j, row in enumerate(data["q"]):
        for i, e in enumerate(row):
            if e != "0":
                out.line(f"  q[{j},{i}] = {e}")
    if not ok_mc:
        out.line(f"  residual: {residual}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scenario(args, out: Writer) -> int:
    if args.name not in SCENARIOS:
        raise UsageError(f"unknown scenario {args.name!r}; choose from {', '.join(SCENARIOS)}")
    res = SCENARIOS[args.name](field_from_spec(args.field))
    out.payload = {"command": "scenario", "result": res.to_dict()}
    out.line(f"{_status(res.ok)} scenario {res.name}")
    for c in res.checks:
        out.line(f"  {_status(c.ok)} {c.tag}: {c.detail}")
    return EXIT_OK if res.ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q or fp:<p>")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--depth", type=int, default=3, help="axiom check depth (1-3)")

    parser = argparse.ArgumentParser(prog="pretrlift", description="Lifts of A∞-functors to pretriangulated hulls.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="run the dg axiom suite on a category file")
    p.add_argument("category")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("lift", parents=[common], help="lift an H⁰ functor table to an A∞-functor")
    p.add_argument("category")
    p.add_argument("functor")
    p.add_argument("--sharp", action="store_true", help="also check the lift to twisted complexes on cones")
    p.add_argument("--pin-homotopy", action="append", metavar="PAIR=ELEMENT")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_lift)

    p = sub.add_parser("apply", parents=[common], help="apply the lifted functor to a complex")
    p.add_argument("artifact")
    p.add_argument("complex")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_apply)

    p = sub.add_parser("scenario", parents=[common], help="run a bundled worked computation")
    p.add_argument("name", help=", ".join(SCENARIOS))
    p.set_defaults(run=cmd_scenario)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = Writer(args.format)
    try:
        if args.depth < 1:
            raise UsageError("--depth must be at least 1")
        field_from_spec(args.field)
        code = args.run(args, out)
    except FormatError as exc:
        stderr.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except (LiftError, CompletionError, AssertionError) as exc:
        stderr.write(f"failure: {exc}\n")
        return EXIT_FAIL
    except (UsageError, PresentationError, ValueError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    out.flush(stdout)
    return code
