"""Command-line front end: ``qgauss {uniform,gaussian,diffuse,brownian,validate}``.

Every run writes its data files plus ``<command>_manifest.json`` into
``--out-dir``. Exit codes: 0 success, 1 usage error, 2 runtime or
degenerate-input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import brownian, diffusion, stats
from .gaussian import DegenerateSourceError, UniformSource, gaussian_stream
from .qrng import ConfigError, QrngConfig, QuantumRandomGenerator
from .statevector import CapacityError

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def derived_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent generator for auxiliary stream ``stream`` of a run seeded with ``seed``."""
    return np.random.default_rng([stream, seed])


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits, got {value}")
    return value


def _common(p):
    p.add_argument("--seed", type=_seed, default=0, help="64-bit seed (default 0)")
    p.add_argument("--out-dir", default=".", help="directory for outputs (default .)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="sample dump format")


def _quantum_flags(p, stage2_default, use_rot_default):
    g = p.add_argument_group("quantum generator")
    g.add_argument("--qubits", type=_positive_int, default=4,
                   help="stage-1 qubits N; without rotations, the width of the sampled circuit")
    g.add_argument("--stage2-qubits", type=_positive_int, default=stage2_default,
                   help="stage-2 qubits M (must exceed N with --use-rot)")
    g.add_argument("--use-rot", action=argparse.BooleanOptionalAction, default=use_rot_default,
                   help="rotate stage-2 qubits by stage-1 angles")
    g.add_argument("--axis", choices=("x", "y", "z", "u"), default="y", help="stage-2 rotation gate")
    g.add_argument("--fixed-angles", action="store_true",
                   help="draw stage-1 angles once per run instead of per shot")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgauss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("uniform", help="sample uniform variates from the quantum cascade")
    _common(p)
    _quantum_flags(p, stage2_default=None, use_rot_default=False)
    p.add_argument("--count", type=_positive_int, default=1000)
    p.add_argument("--index", action="store_true", help="emit raw binary indices instead of [0,1] values")

    p = sub.add_parser("gaussian", help="sample standard normal variates")
    _common(p)
    _quantum_flags(p, stage2_default=6, use_rot_default=True)
    p.add_argument("--count", type=_positive_int, default=2000)
    p.add_argument("--source", choices=("quantum", "classical"), default="quantum")
    p.add_argument("--method", choices=("marsaglia", "box-muller", "clt"), default="marsaglia")
    p.add_argument("--clt-n", type=_positive_int, default=12, help="uniforms per CLT-sum variate")
    p.add_argument("--bins", type=_positive_int, default=50, help="histogram bins for the plot JSON")

    p = sub.add_parser("diffuse", help="forward-diffuse a PGM image with Gaussian noise")
    _common(p)
    _quantum_flags(p, stage2_default=6, use_rot_default=True)
    p.add_argument("--image", required=True, help="input binary PGM (P5, 8-bit)")
    p.add_argument("--t", type=int, required=True, help="target step index in [0, steps-1]")
    p.add_argument("--steps", type=_positive_int, default=1000, help="schedule length T")
    p.add_argument("--beta-start", type=float, default=1e-4)
    p.add_argument("--beta-end", type=float, default=0.02)
    p.add_argument("--iterate", action="store_true", help="apply every step instead of the closed-form jump")
    p.add_argument("--source", choices=("quantum", "classical"), default="quantum")

    p = sub.add_parser("brownian", help="simulate a Brownian path and check it for drift")
    _common(p)
    _quantum_flags(p, stage2_default=9, use_rot_default=True)
    p.add_argument("--steps", type=_positive_int, default=10_000)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--bias", type=float, default=0.0, help="mean added to every Gaussian increment")
    p.add_argument("--threshold", type=float, default=brownian.DRIFT_THRESHOLD)
    p.add_argument("--source", choices=("quantum", "classical"), default="quantum")

    p = sub.add_parser("validate", help="run the statistical battery on two samples")
    _common(p)
    _quantum_flags(p, stage2_default=6, use_rot_default=True)
    p.add_argument("--count", type=_positive_int, default=2000)
    p.add_argument("--file-a", help="first sample (CSV one value per line, or JSON array)")
    p.add_argument("--file-b", help="second sample")
    p.add_argument("--bins", type=_positive_int, default=stats.DEFAULT_BINS)
    p.add_argument("--permutations", type=_positive_int, default=stats.DEFAULT_PERMUTATIONS)
    return parser


def qrng_config(args, is_index=False) -> QrngConfig:
    """Resolve the quantum flags.

    With rotations, ``--qubits`` is stage 1 and ``--stage2-qubits`` the output
    circuit. Without, a single Hadamard circuit is sampled whose width is
    ``--stage2-qubits`` if given, else ``--qubits``.
    """
    if args.use_rot:
        if args.stage2_qubits is None:
            raise UsageError("--use-rot requires --stage2-qubits M with M > --qubits")
        if args.stage2_qubits <= args.qubits:
            raise UsageError(
                f"--stage2-qubits ({args.stage2_qubits}) must exceed --qubits ({args.qubits}) with --use-rot"
            )
        n1, m = args.qubits, args.stage2_qubits
    else:
        m = args.stage2_qubits if args.stage2_qubits is not None else args.qubits
        n1 = args.qubits
    try:
        return QrngConfig(
            n_qubits_stage1=n1,
            n_qubits_stage2=m,
            use_rot=args.use_rot,
            is_index=is_index,
            rotation_axis=args.axis,
            seed=args.seed,
            redraw_angles=not args.fixed_angles,
        )
    except ConfigError as exc:
        raise UsageError(str(exc)) from None


def _source(args, config) -> UniformSource:
    if args.source == "quantum":
        return UniformSource.quantum(config)
    return UniformSource.classical(args.seed)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_samples(path, values, fmt) -> None:
    values = np.asarray(values)
    if fmt == "json":
        data = values.tolist()
        with open(path, "w") as fh:
            json.dump(data, fh)
            fh.write("\n")
    else:
        with open(path, "w") as fh:
            fh.writelines(_fmt(v) + "\n" for v in values)


def read_samples(path) -> np.ndarray:
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".json") or text.lstrip().startswith("["):
        return np.asarray(json.loads(text), dtype=np.float64).ravel()
    rows = [line.strip() for line in text.splitlines()]
    return np.asarray([float(r.split(",")[0]) for r in rows if r], dtype=np.float64)


def _write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest(args, config, outputs) -> str:
    resolved = {k: v for k, v in vars(args).items() if k != "command"}
    if config is not None:
        resolved["qrng"] = config.to_dict()
    path = os.path.join(args.out_dir, f"{args.command}_manifest.json")
    _write_json(
        path,
        {
            "command": args.command,
            "config": resolved,
            "seed": args.seed,
            "output_paths": outputs,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        },
    )
    return path


_NEGATABLE = {"use_rot"}


def manifest_argv(manifest: dict) -> list[str]:
    """Rebuild the command line recorded in a run manifest."""
    argv = [manifest["command"]]
    for key, value in manifest["config"].items():
        if key == "qrng" or value is None:
            continue
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
            elif key in _NEGATABLE:
                argv.append("--no-" + flag[2:])
        else:
            argv += [flag, str(value)]
    return argv


def _ext(args):
    return "json" if args.format == "json" else "csv"


def cmd_uniform(args):
    config = qrng_config(args, is_index=args.index)
    gen = QuantumRandomGenerator(config)
    values = gen.uniform(args.count)
    path = os.path.join(args.out_dir, f"uniform.{_ext(args)}")
    write_samples(path, values, args.format)
    return [path], config


def cmd_gaussian(args):
    config = qrng_config(args) if args.source == "quantum" else None
    values = gaussian_stream(_source(args, config), args.count, args.method, args.clt_n)
    path = os.path.join(args.out_dir, f"gaussian.{_ext(args)}")
    write_samples(path, values, args.format)
    counts, edges = np.histogram(values, bins=args.bins)
    hist_path = os.path.join(args.out_dir, "gaussian_hist.json")
    _write_json(hist_path, {"bin_edges": edges.tolist(), "counts": counts.tolist()})
    return [path, hist_path], config


def cmd_diffuse(args):
    if not 0 <= args.t < args.steps:
        raise UsageError(f"--t must lie in [0, {args.steps - 1}], got {args.t}")
    if not 0 < args.beta_start < 1 or not 0 < args.beta_end < 1:
        raise UsageError("--beta-start and --beta-end must lie in (0, 1)")
    config = qrng_config(args) if args.source == "quantum" else None
    x0 = diffusion.to_unit_range(diffusion.read_pgm(args.image))
    schedule = diffusion.linear_schedule(args.steps, args.beta_start, args.beta_end)
    source = _source(args, config)

    def noise(n):
        return gaussian_stream(source, n)

    if args.iterate:
        xt = diffusion.iterate_forward(x0, schedule, args.t, noise)
    else:
        xt = diffusion.forward_to_t(x0, schedule, args.t, noise(x0.size))
    pgm_path = os.path.join(args.out_dir, "diffuse.pgm")
    diffusion.write_pgm(pgm_path, diffusion.from_unit_range(xt))
    csv_path = os.path.join(args.out_dir, "diffuse.csv")
    with open(csv_path, "w") as fh:
        for row in xt:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return [pgm_path, csv_path], config


def cmd_brownian(args):
    if not (args.dt > 0 and np.isfinite(args.dt)):
        raise UsageError(f"--dt must be positive, got {args.dt}")
    config = qrng_config(args) if args.source == "quantum" else None
    z = gaussian_stream(_source(args, config), args.steps)
    path = brownian.simulate_path(z, args.dt, args.bias)
    report = brownian.fidelity_check(path, args.threshold)
    if args.format == "json":
        path_file = os.path.join(args.out_dir, "brownian_path.json")
        _write_json(path_file, {"time": path.times.tolist(), "value": path.values.tolist()})
    else:
        path_file = os.path.join(args.out_dir, "brownian_path.csv")
        path.to_csv(path_file)
    report_file = os.path.join(args.out_dir, "brownian_fidelity.json")
    _write_json(report_file, report.to_dict())
    return [path_file, report_file], config


def cmd_validate(args):
    config = None
    if args.file_a or args.file_b:
        if not (args.file_a and args.file_b):
            raise UsageError("--file-a and --file-b must be given together")
        a = read_samples(args.file_a)
        b = read_samples(args.file_b)
    else:
        config = qrng_config(args)
        a = gaussian_stream(UniformSource.quantum(config), args.count)
        b = derived_rng(args.seed, 1).standard_normal(args.count)
    report = stats.full_battery(a, b, seed=args.seed, n_bins=args.bins, n_permutations=args.permutations)
    path = os.path.join(args.out_dir, "validate_report.json")
    _write_json(path, report.to_dict())
    return [path], config


COMMANDS = {
    "uniform": cmd_uniform,
    "gaussian": cmd_gaussian,
    "diffuse": cmd_diffuse,
    "brownian": cmd_brownian,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        os.makedirs(args.out_dir, exist_ok=True)
        outputs, config = COMMANDS[args.command](args)
        _manifest(args, config, outputs)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateSourceError, stats.DegenerateInputError, diffusion.PGMError, CapacityError,
            OSError, ValueError) as exc:
        print(f"qgauss {getattr(args, 'command', '')}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
