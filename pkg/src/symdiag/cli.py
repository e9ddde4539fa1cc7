"""Command-line front end: synth, verify, rewrite, tables, simulate, sequences."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import circuit as cir
from . import hamsim, io, resources, rewrite, sequences
from .angles import SymmetryViolation
from .synthesis import ALG1, SYNTHESIZERS, synthesize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_SYMMETRY = 4
EXIT_NONCONVERGENCE = 5


class UsageError(Exception):
    pass


def _sidecar(path: Path, suffix: str) -> Path:
    return path.with_name(path.name + suffix)


def _theta_source(args) -> str:
    if args.generator and args.theta:
        raise UsageError("give either --theta or --generator, not both")
    source = args.generator or args.theta
    if not source:
        raise UsageError("a phase vector is required (--theta FILE|SPEC or --generator SPEC)")
    return source


def cmd_synth(args) -> int:
    source = _theta_source(args)
    theta = io.load_theta(source)
    try:
        result = synthesize(theta, args.method, depth_pass=args.depth_pass)
    except SymmetryViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SYMMETRY
    out = Path(args.out)
    out.write_text(cir.dumps(result.circuit))
    if args.qasm:
        Path(args.qasm).write_text(cir.to_qasm(result.circuit))
    report = dataclasses.asdict(result.report)
    _sidecar(out, ".report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    io.RunConfig(
        "synth",
        inputs={"theta": source},
        outputs={"circuit": str(out), "qasm": args.qasm},
        parameters={"method": args.method, "depth_pass": args.depth_pass},
    ).write(_sidecar(out, ".run.json"))
    print(f"method={args.method} width={theta.width} cnot={report['cnot']} rz={report['rz']} depth={report['depth']}")
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = cir.loads(Path(args.circuit).read_text())
    theta = io.load_theta(args.theta)
    try:
        diag = cir.extract_diagonal(circuit)
    except cir.NotDiagonal as exc:
        print(f"FAIL: circuit is not diagonal ({exc})")
        return EXIT_VERIFY
    if diag.size != theta.values.size:
        print(f"FAIL: circuit width {circuit.width} does not match phase vector width {theta.width}")
        return EXIT_VERIFY
    err = cir.max_phase_error(diag, np.exp(1j * theta.values))
    ok = err < args.tol
    print(f"{'PASS' if ok else 'FAIL'}: max phase error {err:.3e} (tol {args.tol:g})")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_rewrite(args) -> int:
    circuit = cir.loads(Path(args.input).read_text())
    out_circuit = rewrite.apply_rules(circuit, max_passes=args.max_passes)
    out = Path(args.out)
    out.write_text(cir.dumps(out_circuit))
    io.RunConfig(
        "rewrite",
        inputs={"circuit": args.input},
        outputs={"circuit": str(out)},
        parameters={"max_passes": args.max_passes},
    ).write(_sidecar(out, ".run.json"))
    before, after = cir.gate_counts(circuit), cir.gate_counts(out_circuit)
    print(f"cnot {before[0]} -> {after[0]}, rz {before[1]} -> {after[1]}, depth {cir.schedule_depth(out_circuit)}")
    return EXIT_OK


def _tables(which: str) -> dict[str, resources.Table]:
    if which in ("t2", "t3"):
        return resources.table_hamsim_one_particle()
    if which in ("t4", "t5"):
        return resources.table_hamsim_two_particle()
    if which == "t6":
        return {"t6": resources.table_symmetric()}
    return resources.all_tables()


def cmd_tables(args) -> int:
    tables = _tables(args.which)
    names = sorted(tables) if args.which == "all" else [args.which]
    text = "\n".join(tables[name].to_csv() for name in names)
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        io.RunConfig("tables", outputs={"csv": str(out)}, parameters={"which": args.which}).write(
            _sidecar(out, ".run.json")
        )
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sequences(args) -> int:
    if args.kind == "gc":
        seq = sequences.gray_code(args.m)
    elif args.kind == "hgc":
        seq = sequences.half_gray_code(args.m)
    elif args.kind == "cc":
        seq = sequences.control_codes(args.m)
    else:
        width = args.width if args.width is not None else args.m + 1
        seq = sequences.rai(args.m, width)
    for entry in seq:
        print(entry)
    return EXIT_OK


PRESETS = {"eckart": hamsim.EckartSetup, "lih": hamsim.LiHSetup}


def _setup_from(preset: str, config: dict[str, str]):
    cls = PRESETS[preset]
    fields = {f.name: f.type for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in config.items():
        if key not in fields:
            raise UsageError(f"unknown {preset} parameter {key!r}; known: {', '.join(fields)}")
        kwargs[key] = int(value) if fields[key] == "int" else float(value)
    return cls(**kwargs)


def cmd_simulate(args) -> int:
    config = io.read_config(args.config) if args.config else {}
    setup = _setup_from(args.preset, config)
    try:
        record = hamsim.run_setup(setup, reference=not args.no_reference)
    except hamsim.NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = "x,density" if args.preset == "eckart" else "x,density_marginal_sum"
    for t, dens in zip(record.times, record.densities):
        with open(out / f"density_t{t:.2f}.csv", "w", newline="") as fh:
            fh.write(f"# t={t:.2f}\n{header}\n")
            w = csv.writer(fh, lineterminator="\n")
            for x, d in zip(record.grid.x.tolist(), dens.tolist()):
                w.writerow([repr(x), repr(d)])
    with open(out / "infidelity.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "infidelity", "norm"])
        for t, inf, nrm in zip(record.times, record.infidelities, record.norms):
            w.writerow([f"{t:.2f}", repr(inf), repr(nrm)])
    with open(out / "resources.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "width", "cnot", "rz", "depth", "formula_cnot", "formula_depth_bound"])
        if record.synthesis is not None:
            r = record.synthesis.report
            w.writerow([record.synthesis.method, record.synthesis.circuit.width, r.cnot, r.rz, r.depth,
                        r.formula_cnot, r.formula_depth_bound])
    io.RunConfig(
        "simulate",
        inputs={"config": args.config},
        outputs={"dir": str(out)},
        parameters={"preset": args.preset, **dataclasses.asdict(setup)},
        tolerances={"reference": 1e-10},
    ).write(out / "run_config.json")
    print(f"{len(record.times)} snapshots; final infidelity {record.infidelities[-1]:.3e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symdiag",
        description="Synthesis and verification of diagonal unitaries over {CNOT, Rz}.",
        epilog=io.GENERATOR_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a circuit", epilog=io.GENERATOR_HELP)
    p.add_argument("--method", choices=sorted(SYNTHESIZERS), default=ALG1)
    p.add_argument("--theta", help="CSV file (one phase per line), generator config file or generator spec")
    p.add_argument("--generator", help="generator spec, e.g. interaction:n=2,L=30,lambda2=0.6,dt=0.1")
    p.add_argument("--depth-pass", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--qasm")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="compare a circuit with a phase vector")
    p.add_argument("--circuit", required=True)
    p.add_argument("--theta", required=True, help="CSV file, generator config file or generator spec")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rewrite", help="peephole-optimize a circuit")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-passes", type=int, default=100)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("tables", help="resource tables as CSV")
    p.add_argument("--which", choices=["t2", "t3", "t4", "t5", "t6", "all"], default="all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("simulate", help="Trotter simulation presets")
    p.add_argument("--preset", choices=sorted(PRESETS), required=True)
    p.add_argument("--config", help="key=value file overriding preset parameters")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--no-reference", action="store_true", help="skip the Lanczos reference")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sequences", help="print a code sequence, one entry per line")
    p.add_argument("--kind", choices=["gc", "hgc", "cc", "rai"], required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--width", type=int, help="register width for rai (default m+1)")
    p.set_defaults(func=cmd_sequences)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
