"""Command-line front end.

Exit status: 0 success/verified, 1 verdict mismatch, 2 usage or descriptor
error, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from sharparc import constructions as C
from sharparc.autsearch import DEFAULT_NODE_BUDGET, automorphism_generators
from sharparc.digraph import Digraph, LeveledDigraph, preserves_arcs
from sharparc.errors import ResourceLimitError, SharpArcError
from sharparc.tfaut import (dihedral_theta_group, is_psi_arc_transitive, is_psi_stable,
                            is_stable, is_tf_pair, theta_tf_pairs)
from sharparc.transitivity import (fiber_stabilizer_triviality, growth_ball,
                                   profile_from_group)

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "SHARPARC_OUTPUT_DIR"

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class DescriptorError(SharpArcError, ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# ---------------------------------------------------------------- descriptors

def parse_delta(text) -> Digraph:
    """``theta:N``, ``complete:D``, ``cycle:N``, ``loops:V``, ``path:L``, a
    ``{"n":..,"arcs":..}`` mapping, or ``file:PATH`` to such JSON."""
    if isinstance(text, dict):
        return Digraph.from_json(text)
    if not isinstance(text, str) or ":" not in text:
        raise DescriptorError("delta", f"cannot parse {text!r}")
    kind, _, arg = text.partition(":")
    if kind == "file":
        return Digraph.from_json(json.loads(Path(arg).read_text()))
    builders = {"theta": C.theta_cycle, "complete": C.complete_digraph,
                "cycle": C.directed_cycle, "loops": C.complete_with_loops,
                "path": C.directed_path}
    if kind not in builders:
        raise DescriptorError("delta", f"unknown base digraph kind {kind!r}")
    try:
        return builders[kind](int(arg))
    except ValueError as exc:
        raise DescriptorError("delta", str(exc)) from None


@dataclass
class Built:
    graph: Digraph
    leveled: Optional[LeveledDigraph] = None
    spec: object = None


def _need(desc: dict, key: str, family: str):
    if key not in desc or desc[key] is None:
        raise DescriptorError(f"{family}.{key}", "missing required field")
    return desc[key]


def construct(desc: dict) -> Built:
    """Build the digraph a construction descriptor names."""
    family = desc.get("family")
    if family is None:
        raise DescriptorError("family", "missing required field")
    family = family.replace("-", "_")
    try:
        if family == "theta":
            return Built(C.theta_cycle(_need(desc, "n", family)))
        if family == "complete":
            return Built(C.complete_digraph(_need(desc, "d", family)))
        if family == "cycle":
            return Built(C.directed_cycle(_need(desc, "n", family)))
        if family in ("cdc", "cdhc"):
            delta = parse_delta(_need(desc, "delta", family))
            return Built(C.cdc(delta) if family == "cdc" else C.cdhc(delta))
        if family == "z_quotient":
            delta = parse_delta(_need(desc, "delta", family))
            spec = C.z_quotient(delta, _need(desc, "k", family), _need(desc, "q", family))
            return Built(spec.graph, spec.leveled, spec)
        if family == "z_window":
            delta = parse_delta(_need(desc, "delta", family))
            spec = C.z_window(delta, _need(desc, "k", family),
                              _need(desc, "lo", family), _need(desc, "hi", family))
            return Built(spec.graph, spec.leveled, spec)
        if family == "shift_register":
            delta = parse_delta(_need(desc, "delta", family))
            lev = C.shift_register_quotient(delta, _need(desc, "k", family),
                                            _need(desc, "q", family))
            return Built(lev.graph, lev)
        if family == "praeger":
            lev = C.praeger_tuple_graph(_need(desc, "r", family), _need(desc, "v", family),
                                        _need(desc, "m", family))
            return Built(lev.graph, lev)
        if family == "diestel_leader":
            prod = C.diestel_leader_window(_need(desc, "p", family), _need(desc, "tree_q", family),
                                           _need(desc, "depth", family))
            if desc.get("delta") is not None:
                window = C.z_window(parse_delta(desc["delta"]), _need(desc, "k", family),
                                    0, desc["depth"])
                prod = C.fibre_product(prod.leveled, window.leveled)
            return Built(prod.graph, prod.leveled, prod)
    except DescriptorError:
        raise
    except SharpArcError as exc:
        raise DescriptorError(family, str(exc)) from None
    raise DescriptorError("family", f"unknown family {desc['family']!r}")


def descriptor_from_args(args) -> dict:
    if args.descriptor:
        return json.loads(Path(args.descriptor).read_text())
    if not args.family:
        raise DescriptorError("family", "give --family or --descriptor")
    desc = {"family": args.family}
    for key in ("n", "d", "delta", "k", "q", "lo", "hi", "r", "v", "m", "p", "tree_q", "depth"):
        value = getattr(args, key, None)
        if value is not None:
            desc[key] = value
    return desc


def graph_payload(built: Built, desc: dict) -> dict:
    payload = {"schema": SCHEMA_VERSION, "descriptor": _jsonable_descriptor(desc)}
    payload.update(built.graph.to_json())
    if built.leveled is not None:
        payload["levels"] = list(built.leveled.levels)
        payload["modulus"] = built.leveled.modulus
    return payload


def _jsonable_descriptor(desc: dict) -> dict:
    out = dict(desc)
    if isinstance(out.get("delta"), Digraph):
        out["delta"] = out["delta"].to_json()
    return out


# ---------------------------------------------------------------- output

def dumps(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def emit(text: str, output: Optional[str]):
    """Write to stdout, or atomically to ``output``."""
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    if not path.is_absolute() and os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------- verify presets

@dataclass(frozen=True)
class TheoremPreset:
    name: str
    description: str
    run: Callable[[argparse.Namespace], tuple[dict, dict]]


def _sharpness_report(graph: Digraph, expected_sharp: int, budget: int, extra=None):
    group = automorphism_generators(graph, budget)
    profile = profile_from_group(graph, group, expected_sharp + 1)
    observed = {"sharp_k": profile.sharp_k, "sharp": profile.verdicts["sharp"]}
    if extra:
        observed.update(extra(group))
    report = {"vertices": graph.vertex_count, "arcs": len(graph.arcs),
              "profile": profile.to_json()}
    return report, observed


def _preset_sharp_theta(args):
    n, k, q = args.n, args.k, args.q
    if q % (k * n):
        raise DescriptorError("q", f"q={q} must be divisible by k*n={k * n}")
    spec = C.z_quotient(C.theta_cycle(n), k, q)
    report, observed = _sharpness_report(spec.graph, k, args.budget)
    return report, observed


def _preset_sharp_complete(args):
    d, k, q = args.d, args.k, args.q
    if q % k or q // k <= 1:
        raise DescriptorError("q", f"q={q} must be l*k with l > 1 (k={k})")
    spec = C.z_quotient(C.complete_digraph(d + 1), k, q)

    def stab(group):
        return {"fiber_stabilizer_trivial": fiber_stabilizer_triviality(spec.leveled, group, 0)}

    return _sharpness_report(spec.graph, k, args.budget, stab)


def _preset_praeger(args):
    r, v, m = args.r, args.v, args.m
    if r <= m:
        raise DescriptorError("r", f"r={r} must exceed m={m}")
    lev = C.praeger_tuple_graph(r, v, m)
    return _sharpness_report(lev.graph, r - m, args.budget)


def _preset_theta_iso(args):
    delta = parse_delta(args.delta)
    spec = C.z_quotient(delta, args.k, args.q)
    theta = C.theta_isomorphism(spec)
    image = {(theta(u), theta(v)) for u, v in spec.graph.arcs}
    model = C.shift_register_quotient(delta, args.k, args.q).graph
    observed = {"involution": (theta * theta).is_identity(),
                "arc_sets_match": image == set(model.arc_set)}
    return {"vertices": spec.vertex_count, "arcs": len(spec.graph.arcs)}, observed


def _preset_tf_dihedral(args):
    n = args.n
    delta = C.theta_cycle(n)
    H = dihedral_theta_group(n)
    pairs_ok = all(is_tf_pair(delta, p.first, p.second) for p in theta_tf_pairs(n))
    observed = {"pairs": pairs_ok, "psi_stable": is_psi_stable(delta, H),
                "psi_arc_transitive": is_psi_arc_transitive(delta, H)}
    return {"group_order": len(H), "psi_order": H.psi_order()}, observed


def _preset_stable(args):
    delta = parse_delta(args.delta)
    return {"vertices": delta.vertex_count}, {"stable": is_stable(delta)}


def _preset_lifted(args):
    delta = parse_delta(args.delta)
    spec = C.z_quotient(delta, args.k, args.q)
    group = automorphism_generators(delta, args.budget)
    s = C.shift_automorphism(spec)
    ok = preserves_arcs(spec.graph, s.images)
    conj = True
    for g in group.generators:
        lifts = [C.coordinate_automorphism(spec, g, j) for j in range(spec.k)]
        ok = ok and all(preserves_arcs(spec.graph, x.images) for x in lifts)
        conj = conj and all(lifts[j].conjugate(s) == lifts[j + 1] for j in range(spec.k - 1))
    return {"vertices": spec.vertex_count, "delta_generators": len(group.generators)}, \
        {"arc_preserving": ok, "conjugation": conj}


PRESETS: dict[str, tuple[TheoremPreset, dict]] = {}


def _register(name, description, run, expected):
    PRESETS[name] = (TheoremPreset(name, description, run), expected)


_register("sharp-theta",
          "finite quotients of the loop-cycle construction are sharply k-arc-transitive "
          "(needs k*n | q)",
          _preset_sharp_theta, {"sharp": True, "sharp_k": "k"})
_register("sharp-complete",
          "finite quotients over the complete digraph on d+1 vertices are sharply "
          "k-arc-transitive with valency d (q = l*k, l > 1)",
          _preset_sharp_complete,
          {"sharp": True, "sharp_k": "k", "fiber_stabilizer_trivial": True})
_register("praeger", "Praeger's C_r(v, m) is sharply (r-m)-arc-transitive for r > m",
          _preset_praeger, {"sharp": True, "sharp_k": "r-m"})
_register("theta-iso",
          "coordinate reversal is an involutive isomorphism onto the shift-register model",
          _preset_theta_iso, {"involution": True, "arc_sets_match": True})
_register("tf-dihedral",
          "the dihedral group on the loop-cycle is psi-stable and psi-arc-transitive",
          _preset_tf_dihedral, {"pairs": True, "psi_stable": True, "psi_arc_transitive": True})
_register("stable", "complete digraphs are stable", _preset_stable, {"stable": True})
_register("lifted",
          "shift and coordinate lifts are automorphisms; the shift conjugates "
          "coordinate j to j+1",
          _preset_lifted, {"arc_preserving": True, "conjugation": True})


def _resolve_expected(expected: dict, args) -> dict:
    out = {}
    for key, value in expected.items():
        if value == "k":
            value = args.k
        elif value == "r-m":
            value = args.r - args.m
        out[key] = value
    return out


# ---------------------------------------------------------------- commands

def cmd_build(args) -> int:
    desc = descriptor_from_args(args)
    built = construct(desc)
    if args.dot:
        emit(built.graph.to_dot(merge_antiparallel=args.merge_antiparallel), args.output)
    else:
        emit(dumps(graph_payload(built, desc)), args.output)
    return EXIT_OK


def cmd_profile(args) -> int:
    desc = descriptor_from_args(args)
    built = construct(desc)
    group = automorphism_generators(built.graph, args.budget)
    profile = profile_from_group(built.graph, group, args.k_max)
    payload = {"schema": SCHEMA_VERSION, "descriptor": desc,
               "vertices": built.graph.vertex_count}
    payload.update(profile.to_json())
    if args.group:
        payload["generators"] = group.to_json()
    emit(dumps(payload), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.preset == "descriptor":
        desc = descriptor_from_args(args)
        if args.expect_sharp is None:
            raise DescriptorError("expect_sharp", "descriptor verification needs --expect-sharp")
        built = construct(desc)
        report, observed = _sharpness_report(built.graph, args.expect_sharp, args.budget)
        expected = {"sharp": True, "sharp_k": args.expect_sharp}
        description = "custom descriptor"
    else:
        preset, expected = PRESETS[args.preset]
        for key in _PRESET_PARAMS[args.preset]:
            if getattr(args, key) is None:
                raise DescriptorError(f"{args.preset}.{key}", "missing required parameter")
        report, observed = preset.run(args)
        expected = _resolve_expected(expected, args)
        description = preset.description
    diff = {key: {"expected": value, "observed": observed.get(key)}
            for key, value in expected.items() if observed.get(key) != value}
    payload = {"schema": SCHEMA_VERSION, "preset": args.preset, "description": description,
               "status": "PASS" if not diff else "FAIL", "observed": observed,
               "expected": expected, "report": report}
    if diff:
        payload["diff"] = diff
    emit(dumps(payload), args.output)
    return EXIT_OK if not diff else EXIT_MISMATCH


_PRESET_PARAMS = {
    "sharp-theta": ("n", "k", "q"),
    "sharp-complete": ("d", "k", "q"),
    "praeger": ("r", "v", "m"),
    "theta-iso": ("delta", "k", "q"),
    "tf-dihedral": ("n",),
    "stable": ("delta",),
    "lifted": ("delta", "k", "q"),
}


def cmd_growth(args) -> int:
    seq = growth_ball(args.k, args.n)
    if args.json:
        payload = {"schema": SCHEMA_VERSION}
        payload.update(seq.to_json())
        emit(dumps(payload), args.output)
    else:
        emit(seq.to_csv(), args.output)
    return EXIT_OK


def cmd_presets(args) -> int:
    payload = {"schema": SCHEMA_VERSION,
               "presets": [{"name": name, "description": preset.description,
                            "parameters": list(_PRESET_PARAMS[name]), "expected": expected}
                           for name, (preset, expected) in PRESETS.items()]}
    emit(dumps(payload), args.output)
    return EXIT_OK


def _add_family_args(p):
    p.add_argument("--family", help="construction family (theta, complete, cycle, cdc, "
                   "cdhc, z-quotient, z-window, shift-register, praeger, diestel-leader)")
    p.add_argument("--descriptor", help="JSON construction descriptor file")
    p.add_argument("--delta", help="base digraph, e.g. theta:3, complete:3, file:g.json")
    p.add_argument("-n", type=int)
    p.add_argument("-d", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("-q", type=int)
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.add_argument("-r", type=int)
    p.add_argument("-v", type=int)
    p.add_argument("-m", type=int)
    p.add_argument("-p", type=int, help="out-valency of the out-tree (diestel-leader)")
    p.add_argument("--tree-q", type=int, dest="tree_q",
                   help="in-valency of the in-tree (diestel-leader)")
    p.add_argument("--depth", type=int, help="tree depth (diestel-leader)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharparc",
                                     description="Build and verify sharply k-arc-transitive digraphs.")
    parser.add_argument("-o", "--output", help="write output here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a construction and print it")
    _add_family_args(p)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--dot", action="store_true", help="Graphviz output")
    p.add_argument("--merge-antiparallel", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("profile", help="k-arc orbit counts under the full automorphism group")
    _add_family_args(p)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--group", action="store_true", help="include generators")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("verify", help="run a theorem preset and compare with its claim")
    p.add_argument("preset", choices=sorted(PRESETS) + ["descriptor"])
    _add_family_args(p)
    p.add_argument("--expect-sharp", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("growth", help="ball sizes of the infinite loop-line construction")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-n", type=int, required=True, help="largest radius")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true", help="CSV output (default)")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("presets", help="list verification presets")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"sharparc: resource limit: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SharpArcError, ValueError, OSError) as exc:
        print(f"sharparc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
