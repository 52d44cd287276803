"""Command line interface.

Subcommands mirror the library modules: ``kernel`` and ``bound`` for the
integer linear algebra, ``fiber`` for enumeration and connectivity,
``saturate`` for generating sets, ``sample`` for random walks, and
``model`` to emit the bundled instances.

Conventions shared by all subcommands:

- stdout carries a short human-readable summary (or the report JSON with
  ``--format json``); files written under ``--out`` carry machine formats.
- every run produces a report with the echoed command, a hash of the
  inputs, seeds, wall time, and a deterministic result payload.
- exit codes: 0 success, 2 parse or configuration error, 3 work budget
  exceeded, 4 fiber finiteness not certified.
- commands that draw random numbers refuse to run without an explicit
  ``--seed``; ``--seed auto`` picks one and records it in the report.
- the environment variable FIBERWALK_BUDGET, when set, overrides the
  ``--budget`` flag.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from .binomial import (
    norm_bound,
    reduce_generating_set,
    saturation_generators,
    scientific_string,
)
from .errors import (
    BudgetExceededError,
    DependentBasisError,
    FinitenessError,
    MatrixParseError,
)
from .fiber import (
    FiberSpec,
    components_csv,
    connected_components,
    connecting_radius,
    enumerate_fiber,
    fiber_graph,
)
from .intlin import IntMatrix, MoveBasis, kernel_basis
from .models import (
    ModelInstance,
    bad_basis_family,
    no_three_factor,
    second_difference_family,
    simple_example,
)
from .sampler import (
    ChainConfig,
    TargetWeight,
    chi_square_statistic,
    component_hits,
    empirical_distribution,
    poisson_tail_probability,
    run_walk,
    tv_distance,
)
from .vectors import as_vector

_BUDGET_ENV = "FIBERWALK_BUDGET"
_DEFAULT_BUDGET = 10_000_000


def _parse_vector(text: str) -> tuple[int, ...]:
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError("empty vector")
    return tuple(int(p) for p in parts)


def _read_matrix(path: str) -> IntMatrix:
    raw = Path(path).read_text(encoding="utf-8")
    if raw.lstrip().startswith("{"):
        return IntMatrix.from_json_dict(json.loads(raw))
    return IntMatrix.from_text(raw)


def _effective_budget(args) -> int:
    env = os.environ.get(_BUDGET_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{_BUDGET_ENV} must be an integer, got {env!r}") from None
    return args.budget


class _Report:
    """Accumulates the run report; payload must stay deterministic."""

    def __init__(self, argv: list[str]):
        self.command = list(argv)
        self.started = time.perf_counter()
        self.hasher = hashlib.sha256()
        self.seeds: list[int] = []
        self.payload: dict = {}

    def hash_file(self, path: str) -> None:
        self.hasher.update(Path(path).read_bytes())

    def hash_params(self, **params) -> None:
        self.hasher.update(json.dumps(params, sort_keys=True, default=str).encode())

    def finish(self) -> dict:
        return {
            "command": self.command,
            "inputs_hash": self.hasher.hexdigest(),
            "seeds": self.seeds,
            "wall_time_s": round(time.perf_counter() - self.started, 6),
            "payload": self.payload,
        }


def _emit(args, report: _Report, human_lines: list[str]) -> None:
    doc = report.finish()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _write_out(args, name: str, content: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(content, encoding="utf-8")


# --- subcommands ---------------------------------------------------------


def _cmd_kernel(args, report: _Report) -> int:
    report.hash_file(args.matrix)
    matrix = _read_matrix(args.matrix)
    basis = kernel_basis(matrix)
    report.payload = {
        "rows": matrix.rows,
        "cols": matrix.cols,
        "kernel_rank": len(basis),
        "beta": basis.beta,
        "basis": [list(v) for v in basis.vectors],
    }
    lines = [f"kernel rank {len(basis)}, beta {basis.beta}"]
    lines += ["  " + " ".join(str(x) for x in v) for v in basis.vectors]
    if basis.vectors:
        _write_out(args, "basis.txt", basis.to_matrix().to_text())
    _emit(args, report, lines)
    return 0


def _cmd_bound(args, report: _Report) -> int:
    if args.matrix:
        report.hash_file(args.matrix)
        basis = kernel_basis(_read_matrix(args.matrix))
        n, beta = len(basis), basis.beta
    elif args.basis:
        report.hash_file(args.basis)
        basis = MoveBasis.from_matrix(_read_matrix(args.basis))
        n, beta = len(basis), basis.beta
    else:
        if args.moves is None or args.beta is None:
            raise ValueError("need either --matrix, --basis, or both --moves and --beta")
        n, beta = args.moves, args.beta
    report.hash_params(n=n, beta=beta)
    value = norm_bound(n, beta)
    rendered = scientific_string(value)
    report.payload = {
        "moves": n,
        "beta": beta,
        "bound": str(value),
        "bound_scientific": rendered,
    }
    _emit(args, report, [f"combination length bound for n={n}, beta={beta}:",
                         f"  {value}", f"  about {rendered}"])
    return 0


def _moves_basis(args, matrix: IntMatrix) -> MoveBasis:
    if args.moves:
        return MoveBasis.from_matrix(_read_matrix(args.moves))
    return kernel_basis(matrix)


def _cmd_fiber(args, report: _Report) -> int:
    report.hash_file(args.matrix)
    if args.moves:
        report.hash_file(args.moves)
    matrix = _read_matrix(args.matrix)
    base_point = _parse_vector(args.base_point)
    report.hash_params(base_point=base_point, weight=args.weight, radius_max=args.radius_max)
    weight = _parse_vector(args.weight) if args.weight else None
    spec = FiberSpec.build(matrix, base_point, weight)
    fiber = enumerate_fiber(spec)
    basis = _moves_basis(args, matrix)
    graph = fiber_graph(fiber, basis.vectors)
    comps = connected_components(graph)
    try:
        radius = connecting_radius(fiber, basis, args.radius_max)
        radius_note = None
    except DependentBasisError as exc:
        radius = None
        radius_note = f"moves are dependent ({exc.witness}); no radius computed"
    report.payload = {
        "size": fiber.size,
        "component_sizes": [len(c) for c in comps],
        "component_representatives": [list(fiber.elements[c[0]]) for c in comps],
        "connecting_radius": radius,
        "radius_max": args.radius_max,
        "radius_note": radius_note,
    }
    lines = [
        f"fiber size {fiber.size}, {len(comps)} component(s) "
        f"{[len(c) for c in comps]} under {len(basis)} move(s)",
        f"connecting radius: {radius if radius is not None else f'not found up to {args.radius_max}'}",
    ]
    if radius_note:
        lines.append(radius_note)
    _write_out(args, "fiber.json", json.dumps(fiber.to_json_dict(), sort_keys=True) + "\n")
    _write_out(args, "components.csv", components_csv(graph))
    _emit(args, report, lines)
    return 0


def _cmd_saturate(args, report: _Report) -> int:
    if args.matrix:
        report.hash_file(args.matrix)
        basis = kernel_basis(_read_matrix(args.matrix))
    elif args.basis:
        report.hash_file(args.basis)
        basis = MoveBasis.from_matrix(_read_matrix(args.basis))
    else:
        raise ValueError("need --matrix or --basis")
    budget = _effective_budget(args)
    report.hash_params(cap=args.cap, budget=budget, reduce=args.reduce)
    result = saturation_generators(basis, cap=args.cap, budget=budget)
    payload = result.to_json_dict()
    reduced = None
    if args.reduce is not None:
        reduced = reduce_generating_set(result.binomials, basis, args.reduce)
        payload["reduced"] = [b.to_json_dict() for b in reduced]
    report.payload = payload
    lines = [
        f"{len(result.binomials)} generator(s) at cap {result.cap_used} "
        f"(theoretical bound {scientific_string(result.theoretical_bound)})"
    ]
    for b in result.binomials:
        lines.append(f"  +{list(b.plus)} -{list(b.minus)}")
    if reduced is not None:
        lines.append(f"reduced to {len(reduced)} generator(s) at search bound {args.reduce}")
    _write_out(args, "saturation.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _emit(args, report, lines)
    return 0


def _model_instance(args) -> ModelInstance:
    name = args.model
    if name == "simple":
        return simple_example()
    if name == "bad-basis":
        if args.param is None:
            raise ValueError("bad-basis needs --param N")
        return bad_basis_family(args.param)
    if name == "second-difference":
        if args.param is None:
            raise ValueError("second-difference needs --param N")
        return second_difference_family(args.param)
    if name == "no-three-factor":
        if not args.levels or len(args.levels) != 3:
            raise ValueError("no-three-factor needs --levels I J K")
        return no_three_factor(*args.levels)
    raise ValueError(f"unknown model {name!r}")


def _cmd_model(args, report: _Report) -> int:
    instance = _model_instance(args)
    report.hash_params(model=args.model, param=args.param, levels=args.levels)
    report.payload = {
        "name": instance.name,
        "rows": instance.matrix.rows,
        "cols": instance.matrix.cols,
        "moves": len(instance.basis),
        "beta": instance.basis.beta,
        "base_point": list(instance.base_point),
        "notes": list(instance.notes),
    }
    lines = [f"{instance.name}: matrix {instance.matrix.rows} x {instance.matrix.cols}, "
             f"{len(instance.basis)} move(s), beta {instance.basis.beta}"]
    lines += [f"  {note}" for note in instance.notes]
    _write_out(args, "matrix.txt", instance.matrix.to_text())
    if instance.basis.vectors:
        _write_out(args, "basis.txt", instance.basis.to_matrix().to_text())
    _emit(args, report, lines)
    return 0


def _resolve_seed(args, report: _Report) -> int:
    if args.seed == "auto":
        seed = int.from_bytes(os.urandom(8), "big")
    else:
        try:
            seed = int(args.seed)
        except ValueError:
            raise ValueError(f"--seed must be an integer or 'auto', got {args.seed!r}") from None
    report.seeds.append(seed)
    return seed


def _trace_csv(trace, comp_of) -> str:
    lines = ["step,state_index,accepted,component_id"]
    for step, state in enumerate(trace.states):
        acc = "" if step == 0 else ("1" if trace.accepted[step - 1] else "0")
        lines.append(f"{step},{state},{acc},{comp_of[state]}")
    return "\n".join(lines) + "\n"


def _cmd_sample(args, report: _Report) -> int:
    if args.model:
        instance = _model_instance(args)
        matrix, basis, base_point = instance.matrix, instance.basis, instance.base_point
        report.hash_params(model=args.model, param=args.param, levels=args.levels)
    elif args.matrix:
        report.hash_file(args.matrix)
        matrix = _read_matrix(args.matrix)
        if args.base_point is None:
            raise ValueError("--matrix sampling needs --base-point")
        base_point = _parse_vector(args.base_point)
        if args.moves:
            report.hash_file(args.moves)
            basis = MoveBasis.from_matrix(_read_matrix(args.moves))
        else:
            basis = kernel_basis(matrix)
    else:
        raise ValueError("need --model or --matrix")
    if len(basis) < 1:
        raise ValueError("the move basis is empty; nothing to sample")

    seed = _resolve_seed(args, report)
    target = TargetWeight(args.target)
    start = _parse_vector(args.start) if args.start else None
    lam = args.lam
    if lam is None and args.algorithm in ("poisson", "truncated-poisson"):
        lam = 1.0
    p = args.p
    if p is None and args.algorithm == "geometric":
        p = 0.5
    if args.truncate is None and args.algorithm in ("truncated-poisson",
                                                    "bounded-excursion"):
        raise ValueError(f"{args.algorithm} needs --truncate N")
    report.hash_params(
        algorithm=args.algorithm,
        steps=args.steps,
        target=args.target,
        lam=lam,
        p=p,
        truncate=args.truncate,
        start=args.start,
        chains=args.chains,
    )

    spec = FiberSpec.build(matrix, base_point)
    fiber = enumerate_fiber(spec)
    graph = fiber_graph(fiber, basis.vectors)
    comps = connected_components(graph)
    comp_of = {}
    for ci, comp in enumerate(comps):
        for idx in comp:
            comp_of[idx] = ci

    chains = []
    lines = [
        f"fiber size {fiber.size}, {len(comps)} component(s); "
        f"algorithm {args.algorithm}, {args.steps} step(s), seed {seed}"
    ]
    for stream in range(args.chains):
        config = ChainConfig(
            algorithm=args.algorithm,
            steps=args.steps,
            seed=seed,
            stream=stream,
            target=target,
            poisson_mean=lam,
            geometric_p=p,
            step_bound=args.truncate,
        )
        trace = run_walk(fiber, basis, start, config)
        freq = empirical_distribution(trace, fiber)
        tv = tv_distance(freq, target, fiber)
        chi, dof = chi_square_statistic(trace, target, fiber)
        hits = component_hits(trace, comps)
        diag = {
            "stream": stream,
            "seed": seed,
            "algorithm": args.algorithm,
            "steps": args.steps,
            "acceptance_rate": round(trace.stats.acceptance_rate, 6),
            "tv_distance": round(tv, 6),
            "chi_square": round(chi, 6),
            "chi_square_dof": dof,
            "component_first_hits": list(hits),
            "connectivity_oriented": trace.connectivity_oriented,
        }
        if args.algorithm == "truncated-poisson":
            diag["poisson_tail_probability"] = poisson_tail_probability(
                lam, args.truncate
            )
        chains.append(diag)
        _write_out(args, f"trace_{stream}.csv", _trace_csv(trace, comp_of))
        if args.format == "json":
            trace_doc = {
                "seed": seed,
                "stream": stream,
                "states": list(trace.states),
                "accepted": [bool(a) for a in trace.accepted],
                "component_ids": [comp_of[s] for s in trace.states],
            }
            _write_out(args, f"trace_{stream}.json",
                       json.dumps(trace_doc, sort_keys=True) + "\n")
        lines.append(
            f"  stream {stream}: acceptance {diag['acceptance_rate']:.3f}, "
            f"tv {diag['tv_distance']:.4f}, hits {diag['component_first_hits']}"
        )
    report.payload = {
        "fiber_size": fiber.size,
        "component_sizes": [len(c) for c in comps],
        "chains": chains,
    }
    _write_out(args, "diagnostics.json",
               json.dumps(report.payload, indent=2, sort_keys=True) + "\n")
    _emit(args, report, lines)
    return 0


# --- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiberwalk",
        description="Exact fiber enumeration, saturation generators, and fiber walks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--out", metavar="DIR", default=None,
                       help="directory for machine-readable outputs")

    p = sub.add_parser("kernel", help="integral kernel basis of a matrix")
    p.add_argument("matrix", help="matrix file (text or JSON format)")
    common(p)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("bound", help="combination length bound n(2 n beta)^(n-1)")
    p.add_argument("--moves", type=int, default=None, help="number of basis moves")
    p.add_argument("--beta", type=int, default=None, help="largest absolute entry")
    p.add_argument("--matrix", default=None, help="derive the basis from this matrix")
    p.add_argument("--basis", default=None, help="basis file, one move per row")
    common(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("fiber", help="enumerate a fiber and analyze connectivity")
    p.add_argument("--matrix", required=True)
    p.add_argument("--base-point", required=True, help="for example '2 2 2 2'")
    p.add_argument("--moves", default=None, help="basis file; default: kernel basis")
    p.add_argument("--weight", default=None, help="explicit positivity certificate")
    p.add_argument("--radius-max", type=int, default=64)
    common(p)
    p.set_defaults(func=_cmd_fiber)

    p = sub.add_parser("saturate", help="saturation generators from a move basis")
    p.add_argument("--matrix", default=None, help="use the kernel basis of this matrix")
    p.add_argument("--basis", default=None, help="basis file, one move per row")
    p.add_argument("--cap", type=int, default=None, help="multiplicity L1 cap")
    p.add_argument("--budget", type=int, default=_DEFAULT_BUDGET,
                   help=f"enumeration budget (env {_BUDGET_ENV} overrides)")
    p.add_argument("--reduce", type=int, default=None, metavar="BOUND",
                   help="also greedily reduce with this connectivity search bound")
    common(p)
    p.set_defaults(func=_cmd_saturate)

    p = sub.add_parser("sample", help="run a random walk on a fiber")
    p.add_argument("--model", default=None,
                   choices=("simple", "bad-basis", "second-difference", "no-three-factor"))
    p.add_argument("--param", type=int, default=None, help="family parameter for --model")
    p.add_argument("--levels", type=int, nargs=3, default=None, metavar=("I", "J", "K"))
    p.add_argument("--matrix", default=None)
    p.add_argument("--base-point", default=None)
    p.add_argument("--moves", default=None)
    p.add_argument("--algorithm", required=True,
                   choices=("naive", "poisson", "truncated-poisson", "geometric",
                            "bounded-excursion"))
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", required=True,
                   help="integer seed, or 'auto' to pick and record one")
    p.add_argument("--chains", type=int, default=1,
                   help="number of chains (RNG streams) to run")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="Poisson mean for poisson walks")
    p.add_argument("--p", type=float, default=None, help="geometric success probability")
    p.add_argument("--truncate", type=int, default=None, metavar="N",
                   help="multiplicity bound / excursion budget")
    p.add_argument("--target", choices=("uniform", "hypergeometric"), default="uniform")
    p.add_argument("--start", default=None, help="start point; default: the base point")
    common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("model", help="emit a bundled model instance")
    p.add_argument("model", choices=("simple", "bad-basis", "second-difference",
                                     "no-three-factor"))
    p.add_argument("--param", type=int, default=None)
    p.add_argument("--levels", type=int, nargs=3, default=None, metavar=("I", "J", "K"))
    common(p)
    p.set_defaults(func=_cmd_model)

    return parser


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    report = _Report(argv)
    try:
        return args.func(args, report)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FinitenessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (MatrixParseError, DependentBasisError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
