"""Command-line experiment runner.

Every subcommand accepts ``--config FILE`` with ``key = value`` lines (keys
are the long flag names, lists comma-separated); explicit flags win over the
file, and the file wins over the subcommand defaults.
"""

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from .bench import ExperimentSpec, run_scenario, run_validation
from .errors import FluidMimoError
from .pso import SwarmConfig
from .sca import ScaConfig

log = logging.getLogger("fluidmimo")

# per-subcommand defaults; "common" applies to all
_DEFAULTS = {
    "common": dict(
        n=[6], m=None, aperture=[2.0], dmin=0.3, snr_db=[30.0], solver="pso", seed=[0],
        samples=200, eval_samples=1500, out=None, swarm_size=20, pso_iterations=60,
        w_max=0.9, w_min=0.4, c1=1.5, c2=1.5, sca_iterations=50, eta0=0.02,
        max_outer=12, tolerance=1e-3, trials=50, schemes=None,
        spacing_start=0.1, spacing_stop=1.0, spacing_step=0.005,
    ),
    "optimize": dict(),
    "spacing-curve": dict(n=[2], snr_db=[10.0, 20.0, 30.0], eval_samples=3000,
                          schemes=["iid", "fpa"]),
    "sweep-snr": dict(snr_db=[0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
                      schemes=["iid", "ao_pso", "ao_sca", "tx_only", "random_best", "fpa"]),
    "sweep-aperture": dict(aperture=[1.5, 2.0, 2.5, 3.0, 3.5], snr_db=[20.0],
                           schemes=["iid", "ao_pso", "fpa"]),
    "sweep-n": dict(n=[2, 3, 4, 5, 6, 7, 8], aperture=[3.0], snr_db=[20.0],
                    schemes=["iid", "ao_pso", "fpa"]),
    "convergence": dict(snr_db=[20.0], eval_samples=1000, swarm_size=15, pso_iterations=40,
                        schemes=["ao_pso", "ao_sca"]),
}

_LIST_KEYS = {"n": int, "aperture": float, "snr_db": float, "seed": int, "schemes": str}
_SCALAR_TYPES = {
    "m": int, "dmin": float, "solver": str, "samples": int, "eval_samples": int, "out": str,
    "swarm_size": int, "pso_iterations": int, "w_max": float, "w_min": float, "c1": float,
    "c2": float, "sca_iterations": int, "eta0": float, "max_outer": int, "tolerance": float,
    "trials": int, "spacing_start": float, "spacing_stop": float, "spacing_step": float,
}


def _list_of(kind):
    def parse(text):
        if isinstance(text, list):
            return [kind(v) for v in text]
        return [kind(v.strip()) for v in str(text).split(",") if v.strip()]

    return parse


def read_config(path):
    """Parse a ``key = value`` file into a dict keyed by option dest names."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FluidMimoError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            try:
                if key in _LIST_KEYS:
                    values[key] = _list_of(_LIST_KEYS[key])(value)
                elif key in _SCALAR_TYPES:
                    values[key] = _SCALAR_TYPES[key](value)
                else:
                    raise FluidMimoError(f"{path}:{lineno}: unknown key {key!r}")
            except ValueError as exc:
                raise FluidMimoError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from None
    return values


def _add_common(p):
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--n", type=_list_of(int), help="TX element count(s)")
    p.add_argument("--m", type=int, help="RX element count (default: same as N)")
    p.add_argument("--aperture", type=_list_of(float), help="aperture(s) in wavelengths")
    p.add_argument("--dmin", type=float, help="minimum spacing in wavelengths")
    p.add_argument("--snr-db", dest="snr_db", type=_list_of(float),
                   help="per-stream SNR 10*log10(P/(N sigma^2)), comma list")
    p.add_argument("--solver", choices=("pso", "sca"))
    p.add_argument("--seed", type=_list_of(int), help="seed(s), comma list")
    p.add_argument("--samples", type=int, help="MC samples per optimization iteration")
    p.add_argument("--eval-samples", dest="eval_samples", type=int,
                   help="MC samples for final evaluation")
    p.add_argument("--schemes", type=_list_of(str))
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--swarm-size", dest="swarm_size", type=int)
    p.add_argument("--pso-iterations", dest="pso_iterations", type=int)
    p.add_argument("--w-max", dest="w_max", type=float)
    p.add_argument("--w-min", dest="w_min", type=float)
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)
    p.add_argument("--sca-iterations", dest="sca_iterations", type=int)
    p.add_argument("--eta0", type=float)
    p.add_argument("--max-outer", dest="max_outer", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--trials", type=int, help="random placements for random_best")
    p.add_argument("--spacing-start", dest="spacing_start", type=float)
    p.add_argument("--spacing-stop", dest="spacing_stop", type=float)
    p.add_argument("--spacing-step", dest="spacing_step", type=float)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fluidmimo", description="Fluid-MIMO antenna position optimization benchmarks"
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _DEFAULTS:
        if name == "common":
            continue
        _add_common(sub.add_parser(name, help=f"run the {name} scenario"))
    val = sub.add_parser("validate", help="channel-oracle, gradient and Wishart checks")
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--paths", type=int, default=5000)
    val.add_argument("--draws", type=int, default=2000)
    val.add_argument("--gradient-configs", dest="gradient_configs", type=int, default=50)
    return parser


def resolve_options(args):
    """Merge builtin defaults, the config file and explicit flags."""
    merged = dict(_DEFAULTS["common"])
    merged.update(_DEFAULTS[args.command])
    if args.config:
        merged.update(read_config(args.config))
    for key in merged:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def spec_from_options(command, opts):
    spacings = ()
    if command == "spacing-curve":
        count = int(round((opts["spacing_stop"] - opts["spacing_start"]) / opts["spacing_step"]))
        spacings = tuple(float(v) for v in
                         np.round(opts["spacing_start"] + opts["spacing_step"] * np.arange(count + 1), 10))
    schemes = opts["schemes"]
    if schemes is None:
        schemes = ["iid", "fpa", f"ao_{opts['solver']}"]
    return ExperimentSpec(
        scenario=command,
        snr_db=tuple(opts["snr_db"]),
        apertures=tuple(opts["aperture"]),
        n_values=tuple(opts["n"]),
        m=opts["m"],
        spacings=spacings,
        schemes=tuple(schemes),
        seeds=tuple(opts["seed"]),
        d_min=opts["dmin"],
        samples=opts["samples"],
        eval_samples=opts["eval_samples"],
        solver=opts["solver"],
        swarm=SwarmConfig(opts["swarm_size"], opts["pso_iterations"], opts["w_max"],
                          opts["w_min"], opts["c1"], opts["c2"]),
        sca=ScaConfig(opts["sca_iterations"], opts["eta0"]),
        max_outer=opts["max_outer"],
        tolerance=opts["tolerance"],
        random_trials=opts["trials"],
        output=opts["out"],
    )


def _print_rows(rows, stream):
    stream.write("scheme       N  M  aperture  snr_db  capacity  stderr   det_RT    det_RR\n")
    for row in rows:
        stream.write(
            f"{row.scheme:<12} {row.N:<2} {row.M:<2} {row.aperture:<9.4g} {row.gamma_db:<7g} "
            f"{row.capacity_mean:<9.4f} {row.capacity_stderr:<8.4f} {row.det_RT:<9.4g} "
            f"{row.det_RR:.4g}\n"
        )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "validate":
            results = run_validation(args.seed, args.paths, args.draws, args.gradient_configs)
            for res in results:
                print(f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.detail}")
            return 0 if all(r.passed for r in results) else 1
        spec = spec_from_options(args.command, resolve_options(args))
        log.info("running %s", spec)
        rows = run_scenario(spec)
    except (FluidMimoError, OSError) as exc:
        print(f"fluidmimo: error: {exc}", file=sys.stderr)
        return 2
    if spec.output is None:
        _print_rows(rows, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
