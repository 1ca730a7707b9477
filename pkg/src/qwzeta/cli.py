"""Command-line front end.

Exit codes: 0 success, 2 I/O or parse failure, 3 domain or precondition
failure, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError, NonUnitaryError, ParseError, QWZetaError
from .graph import build_symmetric_digraph, load_graph
from .spectral import spectrum_report
from .unitarity import GWParams, SatoParams, check_unitarity, construct_gw, construct_sato
from .walk import (
    delta_state,
    grover_transition,
    observe,
    trajectory,
    transition_from_weights,
    uniform_state,
)
from .zeta import (
    DEFAULT_ORDER,
    default_t_samples,
    ihara_residuals,
    load_weights,
    make_weights,
    weights_to_dict,
    zeta_euler,
    zeta_exponential,
    zeta_hashimoto,
)

log = logging.getLogger("qwzeta")

METHODS = ("exponential", "euler", "hashimoto", "ihara")


@dataclass
class RunConfig:
    command: str
    graph_path: str
    weight_path: Optional[str] = None
    preset: Optional[str] = None
    params: dict = field(default_factory=dict)
    order: int = DEFAULT_ORDER
    steps: int = 10
    start: str = "uniform"
    t_samples: Optional[list] = None
    n_max: int = 720
    tol: float = 1e-8
    check_tol: float = 1e-9
    max_paths: int = 2_000_000
    methods: tuple = METHODS
    output_format: str = "json"
    out: Optional[str] = None

    def __post_init__(self):
        for name in ("order", "n_max", "max_paths"):
            if getattr(self, name) <= 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.steps < 0:
            raise InputError("--steps must be non-negative")
        for name in ("tol", "check_tol"):
            value = getattr(self, name)
            if not 0 < value <= 1e-2:
                raise InputError(f"--{name.replace('_', '-')} must lie in (0, 1e-2]")
        if self.output_format not in ("json", "csv"):
            raise InputError("--format must be json or csv")


# --------------------------------------------------------------------------
# output helpers


def fmt(x: float) -> float:
    """Round to 15 significant digits; ``repr`` then prints the shortest form."""
    x = float(x)
    if not math.isfinite(x):
        return x
    y = float(f"{x:.15g}")
    return 0.0 if y == 0 else y


def cfmt(z) -> list:
    z = complex(z)
    return [fmt(z.real), fmt(z.imag)]


_LEAF_LIST = re.compile(r"\[\n\s*([^\[\]{}]*?)\n\s*\]")


def dumps(doc) -> str:
    """Indented JSON with innermost lists kept on one line."""
    text = json.dumps(doc, indent=2, allow_nan=True)
    text = _LEAF_LIST.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",\n")) + "]", text)
    return text + "\n"


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(cfg: RunConfig):
    g = load_graph(cfg.graph_path)
    d = build_symmetric_digraph(g)
    if cfg.weight_path:
        w = load_weights(cfg.weight_path, d)
    else:
        w = make_weights(d, cfg.preset or "ihara", cfg.params)
    return g, d, w


def _graph_doc(g):
    return {"n_vertices": g.n_vertices, "n_edges": g.n_edges, "simple": g.is_simple(),
            "connected": g.is_connected()}


# --------------------------------------------------------------------------
# commands


def cmd_zeta(cfg: RunConfig) -> dict:
    g, d, w = _load(cfg)
    series = {}
    if "exponential" in cfg.methods:
        series["exponential"] = zeta_exponential(d, w, cfg.order, max_paths=cfg.max_paths)
    if "euler" in cfg.methods:
        series["euler"] = zeta_euler(d, w, cfg.order, max_paths=cfg.max_paths)
    if "hashimoto" in cfg.methods:
        series["hashimoto"] = zeta_hashimoto(d, w, cfg.order)
    names = list(series)
    deviations = {
        f"{a}-{b}": fmt(series[a].max_deviation(series[b]))
        for i, a in enumerate(names)
        for b in names[i + 1 :]
    }
    doc = {
        "graph": _graph_doc(g),
        "preset": w.preset,
        "order": cfg.order,
        "series": {k: [cfmt(c) for c in s.coeffs] for k, s in series.items()},
        "deviations": deviations,
    }
    if "ihara" in cfg.methods:
        ts = default_t_samples() if cfg.t_samples is None else np.asarray(cfg.t_samples, dtype=complex)
        res = ihara_residuals(d, w, ts)
        doc["ihara"] = {
            "t": [cfmt(t) for t in ts],
            "relative_residuals": [fmt(r) for r in res],
            "max_residual": fmt(np.max(res, initial=0.0)),
        }
    return doc


def _transition(cfg, d, w):
    if w.preset == "grover":
        return grover_transition(d, exact=True)
    return transition_from_weights(d, w, tol=cfg.check_tol)


def _initial_state(cfg, d):
    if cfg.start == "uniform":
        return uniform_state(d)
    try:
        arc = int(cfg.start)
    except ValueError:
        raise InputError(f"--start must be 'uniform' or an arc index, got {cfg.start!r}") from None
    return delta_state(d, arc)


def cmd_walk(cfg: RunConfig) -> dict:
    g, d, w = _load(cfg)
    u = _transition(cfg, d, w)
    probs = []
    final = None
    worst_sum = 0.0
    for s in trajectory(u, _initial_state(cfg, d), cfg.steps):
        p = observe(d, s)
        worst_sum = max(worst_sum, abs(p.sum() - 1))
        probs.append(p)
        final = s
    norm_residual = abs(final.norm - 1)
    log.info("final norm residual %.3e, worst probability-sum residual %.3e", norm_residual, worst_sum)
    return {
        "graph": _graph_doc(g),
        "provenance": u.provenance,
        "steps": cfg.steps,
        "probabilities": [[fmt(x) for x in p] for p in probs],
        "norm_residual": fmt(norm_residual),
        "probability_sum_residual": fmt(worst_sum),
        "amplitudes": [cfmt(z) for z in final.amplitudes],
    }


def walk_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "vertex", "probability"])
    for t, p in enumerate(doc["probabilities"]):
        for v, x in enumerate(p):
            writer.writerow([t, v, repr(x)])
    return buf.getvalue()


def cmd_spectrum(cfg: RunConfig) -> dict:
    g, d, w = _load(cfg)
    u = _transition(cfg, d, w)
    grover = u.provenance == "grover"
    rep = spectrum_report(
        u.entries, exact_u=u.exact, graph=g if grover else None,
        n_max=cfg.n_max, tol=cfg.tol, konno_sato=grover,
    )
    order = np.lexsort((np.round(rep.eigenvalues.imag, 12), np.round(rep.eigenvalues.real, 12)))
    doc = {
        "graph": _graph_doc(g),
        "provenance": u.provenance,
        "eigenvalues": [cfmt(z) for z in rep.eigenvalues[order]],
        "char_poly": [cfmt(c) for c in rep.char_poly.coeffs],
        "char_poly_exact": None if rep.char_poly.exact is None else [str(c) for c in rep.char_poly.exact],
        "unit_modulus_residual": fmt(rep.unit_modulus_residual),
        "konno_sato": None,
        "periodicity": _periodicity_doc(rep.periodicity),
    }
    if rep.konno_sato is not None:
        ks = rep.konno_sato
        doc["konno_sato"] = {
            "hypothesis_ok": ks.hypothesis_ok,
            "warnings": ks.warnings,
            "trivial_pair_exponent": ks.exponent,
            "t_spectrum": [fmt(x) for x in ks.t_spectrum],
            "quadratic_factors": [[fmt(c) for c in q] for _, q in ks.quadratic_factors],
            "residual": fmt(ks.residual),
            "float_residual": fmt(ks.float_residual),
            "exact": ks.exact,
            "passed": ks.passed,
        }
    return doc


def _periodicity_doc(per):
    doc = per.to_dict()
    if doc["power_residual"] is not None:
        doc["power_residual"] = fmt(doc["power_residual"])
    return doc


def _violation_docs(violations):
    return [{k: (fmt(x) if k == "residual" else x) for k, x in v.to_dict().items()} for v in violations]


def _verdict_doc(v):
    return {
        "unitary": v.unitary,
        "family": v.family,
        "violations": _violation_docs(v.violations),
        "direct": {"unitary": v.direct_unitary, "residual": fmt(v.direct_residual)},
        "agrees": v.agrees,
    }


def cmd_unitarity(cfg: RunConfig) -> dict:
    g, d, w = _load(cfg)
    return _verdict_doc(check_unitarity(d, w, tol=cfg.check_tol))


def _float_list(text, n, name):
    vals = [float(x) for x in str(text).split(",")]
    if len(vals) == 1:
        return np.full(n, vals[0])
    if len(vals) != n:
        raise InputError(f"{name} needs 1 or {n} values, got {len(vals)}")
    return np.array(vals)


def cmd_construct(cfg: RunConfig, args) -> dict:
    g = load_graph(cfg.graph_path)
    d = build_symmetric_digraph(g)
    if args.sato:
        zero = np.zeros(d.n_vertices, dtype=bool)
        if args.zero:
            zero[[int(v) for v in args.zero.split(",")]] = True
        w = construct_sato(d, SatoParams(_float_list(args.phase, d.n_vertices, "--phase"), zero))
    else:
        if args.radius == "grover":
            radius = GWParams.grover(d).radius
        else:
            radius = _float_list(args.radius, d.n_vertices, "--radius")
        ups = np.exp(1j * _float_list(args.upsilon_phase, d.n_arcs, "--upsilon-phase"))
        alpha = _float_list(args.deg1_phase, d.n_arcs, "--deg1-phase")
        w = construct_gw(d, GWParams(radius, ups, alpha))
    doc = weights_to_dict(w)
    doc["tau"] = [cfmt(z) for z in w.tau]
    doc["upsilon"] = [cfmt(z) for z in w.upsilon]
    return doc


# --------------------------------------------------------------------------
# argument parsing


def _params(args):
    params = {}
    for item in args.param or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--param expects key=value, got {item!r}")
        params[key] = complex(value) if "j" in value else float(value)
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwzeta", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, weights=True):
        p.add_argument("--graph", required=True, help="edge-list file")
        if weights:
            p.add_argument("--weights", help="weight JSON file")
            p.add_argument("--preset", choices=["ihara", "bartholdi", "mizuno_sato", "sato", "grover"])
            p.add_argument("--param", action="append", help="preset parameter key=value (e.g. q=3)")
        p.add_argument("--out", help="write to this path instead of stdout")
        p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("zeta", help="zeta series by every expression, with cross-checks")
    common(p)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--t", dest="t_samples", help="comma-separated complex sample points")
    p.add_argument("--max-paths", type=int, default=2_000_000)

    p = sub.add_parser("walk", help="evolve a walk and tabulate vertex probabilities")
    common(p)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--start", default="uniform", help="'uniform' or an arc index")
    p.add_argument("--format", dest="output_format", default="csv", choices=["csv", "json"])
    p.add_argument("--amplitudes", help="also write final amplitudes as JSON here")
    p.add_argument("--check-tol", type=float, default=1e-9)

    p = sub.add_parser("spectrum", help="eigenvalues, Konno-Sato data and periodicity")
    common(p)
    p.add_argument("--n-max", type=int, default=720)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--check-tol", type=float, default=1e-9)

    p = sub.add_parser("unitarity", help="check weights against the unitarity conditions")
    common(p)
    p.add_argument("--check-tol", type=float, default=1e-9)

    p = sub.add_parser("construct", help="write a unitary weight file")
    common(p, weights=False)
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--sato", action="store_true")
    kind.add_argument("--gw", action="store_true")
    p.add_argument("--phase", default="0", help="Sato phase per vertex (one value or comma list)")
    p.add_argument("--zero", help="comma list of vertices with tau = 0")
    p.add_argument("--radius", default="grover", help="GW radius per vertex, or 'grover'")
    p.add_argument("--upsilon-phase", default="0", help="GW upsilon phase per arc")
    p.add_argument("--deg1-phase", default="0", help="phase of tau - upsilon at degree-1 tails")
    return parser


def _config(args) -> RunConfig:
    ts = None
    if getattr(args, "t_samples", None):
        ts = [complex(x) for x in args.t_samples.split(",")]
    methods = tuple(getattr(args, "methods", ",".join(METHODS)).split(","))
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise InputError(f"unknown methods {sorted(unknown)}")
    return RunConfig(
        command=args.command,
        graph_path=args.graph,
        weight_path=getattr(args, "weights", None),
        preset=getattr(args, "preset", None),
        params=_params(args) if hasattr(args, "param") else {},
        order=getattr(args, "order", DEFAULT_ORDER),
        steps=getattr(args, "steps", 10),
        start=getattr(args, "start", "uniform"),
        t_samples=ts,
        n_max=getattr(args, "n_max", 720),
        tol=getattr(args, "tol", 1e-8),
        check_tol=getattr(args, "check_tol", 1e-9),
        max_paths=getattr(args, "max_paths", 2_000_000),
        methods=methods,
        output_format=getattr(args, "output_format", "json"),
        out=args.out,
    )


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = _config(args)
        if args.command == "zeta":
            _emit(cfg, dumps(cmd_zeta(cfg)))
        elif args.command == "walk":
            if cfg.preset is None and cfg.weight_path is None:
                cfg.preset = "grover"
            doc = cmd_walk(cfg)
            if args.amplitudes:
                with open(args.amplitudes, "w", encoding="utf-8") as fh:
                    fh.write(dumps({"amplitudes": doc["amplitudes"], "norm_residual": doc["norm_residual"]}))
            if cfg.output_format == "csv":
                sys.stderr.write(f"norm_residual={doc['norm_residual']!r}\n")
                _emit(cfg, walk_csv(doc))
            else:
                _emit(cfg, dumps(doc))
        elif args.command == "spectrum":
            if cfg.preset is None and cfg.weight_path is None:
                cfg.preset = "grover"
            _emit(cfg, dumps(cmd_spectrum(cfg)))
        elif args.command == "unitarity":
            _emit(cfg, dumps(cmd_unitarity(cfg)))
        elif args.command == "construct":
            _emit(cfg, dumps(cmd_construct(cfg, args)))
    except NonUnitaryError as exc:
        sys.stderr.write(f"qwzeta: {exc}\n")
        sys.stderr.write(dumps({"unitary": False, "violations": _violation_docs(exc.violations)}))
        return exc.exit_code
    except FileNotFoundError as exc:
        sys.stderr.write(f"qwzeta: no such file: {exc.filename}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"qwzeta: {exc.filename}: {exc.strerror}\n")
        return 2
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"qwzeta: invalid JSON: {exc}\n")
        return ParseError.exit_code
    except QWZetaError as exc:
        sys.stderr.write(f"qwzeta: {exc}\n")
        return exc.exit_code
    except ValueError as exc:
        sys.stderr.write(f"qwzeta: {exc}\n")
        return 3
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
