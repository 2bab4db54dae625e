"""Command-line front end.

    trfqa run    --problem maxcut --generate-regular 16 --seed 0 \\
                 --dt 0.04 --layers 400 --rescale sine --a 2 --tf 16 --out r.csv
    trfqa sweep  --problem annni --L 8 --kappa 0.5 --g 0.5 --dt 0.01 --layers 1000 \\
                 --variant identity --variant sine:2:10 --variant sine:3:10 --out results/
    trfqa oracle --problem maxcut --graph k3.edges
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import engine, oracle
from .engine import RunConfig, Trajectory
from .hamiltonians import (
    AnnniParams,
    Graph,
    annni_hamiltonian,
    driver_hamiltonian,
    dump_graph,
    load_graph,
    maxcut_hamiltonian,
    random_regular_graph,
)
from .rescaling import Family, RescaleSpec

log = logging.getLogger("trfqa")

CSV_HEADER = "layer,beta,A,J,fdot,success_prob"
EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_ENGINE = 0, 2, 1, 3


@dataclass
class CliConfig:
    command: str
    problem: str
    graph_path: Optional[Path] = None
    generate_regular: Optional[int] = None
    seed: int = 0
    save_graph: Optional[Path] = None
    L: Optional[int] = None
    kappa: float = 0.0
    g: float = 0.0
    dt: Optional[float] = None
    layers: Optional[int] = None
    rescales: list[RescaleSpec] = field(default_factory=list)
    out: Optional[Path] = None
    jobs: int = 1


def _positive_float(name):
    def conv(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be numeric, got {text!r}") from None
        if not math.isfinite(value) or value <= 0:
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {text}")
        return value
    return conv


def _positive_int(name):
    def conv(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}") from None
        if value < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1, got {text}")
        return value
    return conv


def _finite_float(name):
    def conv(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be numeric, got {text!r}") from None
        if not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"{name} must be finite")
        return value
    return conv


def _variant(text: str) -> RescaleSpec:
    """``identity`` or ``FAMILY:A:TF`` (e.g. ``sine:2:16``)."""
    parts = text.split(":")
    try:
        family = Family.parse(parts[0])
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown rescale family {parts[0]!r}") from None
    if family is Family.IDENTITY:
        if len(parts) > 1:
            raise argparse.ArgumentTypeError("identity variant takes no parameters")
        return RescaleSpec.identity()
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"variant {text!r} must look like FAMILY:A:TF")
    a = _positive_float("a")(parts[1])
    tf = _positive_float("tf")(parts[2])
    return RescaleSpec(family, a, tf)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trfqa", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_args(p):
        p.add_argument("--problem", choices=("maxcut", "annni"), required=True)
        p.add_argument("--graph", type=Path, help="edge-list file (maxcut)")
        p.add_argument("--generate-regular", type=_positive_int("--generate-regular"),
                       metavar="V", help="seeded random 3-regular graph on V vertices (maxcut)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--save-graph", type=Path, help="write the instance graph to this path")
        p.add_argument("--L", type=_positive_int("--L"), help="ANNNI chain length")
        p.add_argument("--kappa", type=_finite_float("--kappa"), default=0.0)
        p.add_argument("--g", type=_finite_float("--g"), default=0.0)

    def loop_args(p):
        p.add_argument("--dt", type=_positive_float("--dt"), required=True)
        p.add_argument("--layers", type=_positive_int("--layers"), required=True)

    run_p = sub.add_parser("run", help="single feedback run")
    problem_args(run_p)
    loop_args(run_p)
    run_p.add_argument("--rescale", default="identity",
                       choices=("identity", "sine", "poly", "polynomial"))
    run_p.add_argument("--a", type=_positive_float("--a"))
    run_p.add_argument("--tf", type=_positive_float("--tf"))
    run_p.add_argument("--out", type=Path, required=True, help="trajectory CSV path")

    sweep_p = sub.add_parser("sweep", help="several rescalings on one instance")
    problem_args(sweep_p)
    loop_args(sweep_p)
    sweep_p.add_argument("--variant", type=_variant, action="append", required=True,
                         help="identity or FAMILY:A:TF; repeatable")
    sweep_p.add_argument("--jobs", type=_positive_int("--jobs"), default=1)
    sweep_p.add_argument("--out", type=Path, required=True, help="output directory")

    oracle_p = sub.add_parser("oracle", help="exact reference values for an instance")
    problem_args(oracle_p)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> CliConfig:
    """Parse and cross-validate; usage errors exit with status 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)

    if ns.problem == "maxcut":
        if (ns.graph is None) == (ns.generate_regular is None):
            parser.error("maxcut needs exactly one of --graph or --generate-regular")
    elif ns.L is None:
        parser.error("annni needs --L")
    elif ns.L < 4:
        parser.error("--L must be >= 4 for the ANNNI chain")

    rescales = []
    if ns.command == "run":
        family = Family.parse(ns.rescale)
        if family is Family.IDENTITY:
            rescales = [RescaleSpec.identity()]
        else:
            for flag, value in (("--a", ns.a), ("--tf", ns.tf)):
                if value is None:
                    parser.error(f"--rescale {ns.rescale} requires {flag}")
            rescales = [RescaleSpec(family, ns.a, ns.tf)]
    elif ns.command == "sweep":
        rescales = list(ns.variant)

    if ns.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    return CliConfig(
        command=ns.command,
        problem=ns.problem,
        graph_path=ns.graph,
        generate_regular=ns.generate_regular,
        seed=ns.seed,
        save_graph=ns.save_graph,
        L=ns.L,
        kappa=ns.kappa,
        g=ns.g,
        dt=getattr(ns, "dt", None),
        layers=getattr(ns, "layers", None),
        rescales=rescales,
        out=getattr(ns, "out", None),
        jobs=getattr(ns, "jobs", 1),
    )


@dataclass
class Instance:
    problem: object
    num_qubits: int
    graph: Optional[Graph] = None
    solutions: Optional[frozenset[int]] = None
    max_cut: Optional[float] = None
    ground_energy: Optional[float] = None


def build_instance(cfg: CliConfig) -> Instance:
    if cfg.problem == "maxcut":
        if cfg.graph_path is not None:
            graph = load_graph(cfg.graph_path.read_text(encoding="utf-8"))
        else:
            graph = random_regular_graph(cfg.generate_regular, cfg.seed)
        if cfg.save_graph is not None:
            atomic_write(cfg.save_graph, dump_graph(graph))
        inst = Instance(maxcut_hamiltonian(graph), graph.num_vertices, graph)
        if graph.num_vertices <= oracle.MAXCUT_VERTEX_CAP:
            sol = oracle.brute_force_maxcut(graph)
            inst.solutions = sol.argmax_bitstrings
            inst.max_cut = sol.max_value
            inst.ground_energy = -sol.max_value
        return inst
    params = AnnniParams(cfg.L, cfg.kappa, cfg.g)
    inst = Instance(annni_hamiltonian(params), cfg.L)
    if cfg.L <= oracle.GROUND_ENERGY_QUBIT_CAP:
        inst.ground_energy = oracle.ground_energy(inst.problem)
    return inst


def atomic_write(path: Path, text: str) -> None:
    """Write via a sibling temp file and rename, so no partial file is left."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def trajectory_csv(tr: Trajectory) -> str:
    rows = [CSV_HEADER]
    for r in tr.records:
        rows.append(",".join([str(r.k), _fmt(r.beta), _fmt(r.A), _fmt(r.J), _fmt(r.fdot),
                              _fmt(r.success_prob)]))
    return "\n".join(rows) + "\n"


def summary_text(cfg: CliConfig, inst: Instance, rescale: RescaleSpec, tr: Trajectory,
                 wall_time: float) -> str:
    gap = None
    if inst.ground_energy is not None and tr.records:
        gap = tr.final_J - inst.ground_energy
    items = [
        ("status", "ok" if tr.completed else "truncated"),
        ("failure", tr.failure or ""),
        ("layers_completed", len(tr)),
        ("final_J", _fmt(tr.final_J if tr.records else None)),
        ("ground_energy", _fmt(inst.ground_energy)),
        ("gap", _fmt(gap)),
        ("final_success_prob", _fmt(tr.final_success)),
        ("max_cut", _fmt(inst.max_cut)),
        ("num_solutions", "" if inst.solutions is None else len(inst.solutions)),
        ("wall_time_s", f"{wall_time:.3f}"),
        ("problem", cfg.problem),
        ("num_qubits", inst.num_qubits),
        ("graph", "" if cfg.graph_path is None else str(cfg.graph_path)),
        ("generate_regular", "" if cfg.generate_regular is None else cfg.generate_regular),
        ("seed", cfg.seed),
        ("L", "" if cfg.L is None else cfg.L),
        ("kappa", cfg.kappa if cfg.problem == "annni" else ""),
        ("g", cfg.g if cfg.problem == "annni" else ""),
        ("dt", cfg.dt),
        ("layers", cfg.layers),
        ("rescale", rescale.family.value),
        ("a", rescale.a if rescale.family is not Family.IDENTITY else ""),
        ("tf", rescale.t_f if rescale.family is not Family.IDENTITY else ""),
    ]
    return "".join(f"{k}={v}\n" for k, v in items)


def _write_outputs(csv_path: Path, cfg, inst, rescale, tr, wall) -> None:
    atomic_write(csv_path, trajectory_csv(tr))
    summary = csv_path.with_name(csv_path.name + ".summary")
    atomic_write(summary, summary_text(cfg, inst, rescale, tr, wall))


def _run_config(cfg: CliConfig, inst: Instance, rescale: RescaleSpec) -> RunConfig:
    return RunConfig(
        problem=inst.problem,
        driver=driver_hamiltonian(inst.num_qubits),
        dt=cfg.dt,
        layers=cfg.layers,
        rescale=rescale,
        solutions=inst.solutions,
        ground_energy=inst.ground_energy,
    )


def _oracle_report(cfg: CliConfig, inst: Instance) -> int:
    if cfg.problem == "maxcut":
        if inst.solutions is None:
            print(f"graph too large for brute force (> {oracle.MAXCUT_VERTEX_CAP} vertices)",
                  file=sys.stderr)
            return EXIT_ENGINE
        V = inst.num_qubits
        print(f"max_cut={inst.max_cut:g}")
        print(f"num_solutions={len(inst.solutions)}")
        print("solutions=" + " ".join(format(b, f"0{V}b") for b in sorted(inst.solutions)))
        print(f"ground_energy={inst.ground_energy!r}")
    else:
        if inst.ground_energy is None:
            print(f"chain too long for dense diagonalisation (> {oracle.GROUND_ENERGY_QUBIT_CAP})",
                  file=sys.stderr)
            return EXIT_ENGINE
        print(f"ground_energy={inst.ground_energy!r}")
    return EXIT_OK


def execute(cfg: CliConfig) -> int:
    """Build the instance, run, write CSV + summary. Returns an exit status."""
    try:
        inst = build_instance(cfg)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    if cfg.command == "oracle":
        return _oracle_report(cfg, inst)

    if cfg.command == "run":
        rescale = cfg.rescales[0]
        t0 = time.perf_counter()
        try:
            tr = engine.run(_run_config(cfg, inst, rescale))
        except (ArithmeticError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ENGINE
        wall = time.perf_counter() - t0
        try:
            _write_outputs(cfg.out, cfg, inst, rescale, tr, wall)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_IO
        if not tr.completed:
            print(f"error: {tr.failure}", file=sys.stderr)
            return EXIT_ENGINE
        return EXIT_OK

    # sweep
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
        configs = [_run_config(cfg, inst, r) for r in cfg.rescales]
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    t0 = time.perf_counter()
    results = engine.sweep(configs, jobs=cfg.jobs)
    wall = time.perf_counter() - t0
    status = EXIT_OK
    for i, (rescale, res) in enumerate(zip(cfg.rescales, results)):
        name = f"{i:02d}_{rescale.label}.csv"
        if isinstance(res, Exception):
            print(f"error: variant {rescale.label}: {res}", file=sys.stderr)
            status = EXIT_ENGINE
            continue
        try:
            _write_outputs(cfg.out / name, cfg, inst, rescale, res, wall)
        except OSError as exc:
            print(f"error: cannot write {name}: {exc}", file=sys.stderr)
            return EXIT_IO
        if not res.completed:
            print(f"error: variant {rescale.label}: {res.failure}", file=sys.stderr)
            status = EXIT_ENGINE
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    return execute(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
