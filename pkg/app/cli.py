"""Command-line front end: ``python -m app.cli <verb> [--config file.json] [flags]``.

JSON and CSV payloads go to stdout, logs to stderr. Exit codes: 0 success,
1 usage or input error, 2 numerical failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from app.config import get_settings
from app.errors import KrylovLabError
from app.schemas.blockenc import Lemma1Request
from app.schemas.bounds import BoundParams
from app.schemas.experiment import ExperimentConfig, MomentsRequest
from app.schemas.moments import MomentSeq
from app.services.blockenc_service import blockenc_service
from app.services.bounds_service import bounds_service
from app.services.experiment_service import experiment_service
from app.services.krylov_service import krylov_service

logger = logging.getLogger("app.cli")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _load_config(path: Optional[str]) -> dict[str, Any]:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {path}: {e}")
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return data


def _overlay(base: dict[str, Any], **flags: Any) -> dict[str, Any]:
    merged = dict(base)
    merged.update({key: value for key, value in flags.items() if value is not None})
    return merged


def _model_from(args: argparse.Namespace, base: dict[str, Any]) -> dict[str, Any]:
    data = dict(base)
    if args.hamiltonian:
        data["model"] = args.hamiltonian
    else:
        lattice = data.get("model") if isinstance(data.get("model"), dict) else {}
        lattice = _overlay(
            lattice, rows=args.rows, cols=args.cols, j1=args.j1, j2=args.j2, boundary=args.boundary
        )
        if lattice:
            data["model"] = lattice
    if args.basis_index is not None:
        data["initial_state"] = {"basis_index": args.basis_index}
    return data


def _emit(payload: Any):
    if hasattr(payload, "model_dump_json"):
        sys.stdout.write(payload.model_dump_json(indent=2) + "\n")
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def cmd_model(args, base):
    cfg = ExperimentConfig.model_validate(_model_from(args, base))
    _emit(experiment_service.model_summary(cfg.model, cfg.initial_state))


def cmd_moments(args, base):
    data = _overlay(_model_from(args, base), d_max=args.d, eta=args.eta, seed=args.seed)
    _emit(experiment_service.run_moments(MomentsRequest.model_validate(data)))


def cmd_krylov(args, base):
    if args.moments:
        moments = MomentSeq.model_validate_json(Path(args.moments).read_text())
    else:
        data = _overlay(_model_from(args, base), d_max=args.d, eta=args.eta, seed=args.seed)
        moments = experiment_service.run_moments(MomentsRequest.model_validate(data))
    eta = moments.noise.eta if moments.noise else 0.0
    epsilon = args.epsilon
    if epsilon is None:
        epsilon = base.get("epsilon") or krylov_service.pick_threshold(eta, args.family or "spin")
    pair = krylov_service.assemble(moments)
    _emit(krylov_service.solve_thresholded(pair, epsilon))


def cmd_lemma1(args, base):
    data = _overlay(
        base, qubits=args.qubits, terms=args.terms, seed=args.seed, kmax=args.kmax, samples=args.samples
    )
    _emit(blockenc_service.verify_lemma1(Lemma1Request.model_validate(data)))


def cmd_bounds(args, base):
    data = _overlay(
        base,
        d=args.d,
        gamma0=args.gamma0,
        gamma=args.gamma,
        delta=args.delta,
        epsilon=args.epsilon,
        eps_total=args.eps_total,
        eta=args.eta,
        eta_s=args.eta_s,
        eta_h=args.eta_h,
        alpha=args.alpha,
        gap=args.gap,
        target_error=args.target_error,
    )
    _emit(bounds_service.bound_report(BoundParams.model_validate(data)))


def cmd_gatecount(args, base):
    data = _overlay(base, n=args.n, t=args.t, scheme=args.scheme, d=args.d)
    if "n" not in data or "t" not in data:
        args.parser.error("-n and -t are required")
    scheme = data.get("scheme", "binary_index")
    _emit(bounds_service.gate_costs(int(data["n"]), int(data["t"]), scheme, data.get("d")))


def _experiment_config(args, base) -> ExperimentConfig:
    data = _overlay(
        _model_from(args, base),
        d_max=args.d_max,
        trials=args.trials,
        seed=args.seed,
        output=args.output,
        noise_rates=args.eta,
        threshold_family=args.family,
        threshold_constant_override=args.threshold_constant,
    )
    return ExperimentConfig.model_validate(data)


def cmd_fig2(args, base):
    cfg = _experiment_config(args, base)
    result = experiment_service.run_fig2(cfg, workers=args.workers)
    if not cfg.output:
        sys.stdout.write(result.csv)


def cmd_fig3(args, base):
    cfg = _experiment_config(args, base)
    text = experiment_service.run_fig3(cfg, workers=args.workers)
    if not cfg.output:
        sys.stdout.write(text)


def _add_model_flags(p: argparse.ArgumentParser):
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--j1", type=float)
    p.add_argument("--j2", type=float)
    p.add_argument("--boundary", choices=["open", "periodic"])
    p.add_argument("--hamiltonian", help="Pauli-sum text file, one '<coeff> <pauli-string>' per line")
    p.add_argument("--basis-index", type=int, help="start from this computational basis state")


def build_parser() -> argparse.ArgumentParser:
    parser = Parser(prog="app.cli", description="Chebyshev Krylov lab")
    common = Parser(add_help=False)
    common.add_argument("--config", help="JSON file with defaults for this verb")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=Parser)

    p = verbs.add_parser("model", parents=[common], help="summarize a lattice or Hamiltonian file")
    _add_model_flags(p)
    p.set_defaults(func=cmd_model)

    p = verbs.add_parser("moments", parents=[common], help="Chebyshev moments as JSON")
    _add_model_flags(p)
    p.add_argument("--d", type=int, help="Krylov dimension (2D moments)")
    p.add_argument("--eta", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_moments)

    p = verbs.add_parser("krylov", parents=[common], help="thresholded ground-energy estimate")
    _add_model_flags(p)
    p.add_argument("--moments", help="MomentSeq JSON produced by the moments verb")
    p.add_argument("--d", type=int)
    p.add_argument("--eta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--family", choices=["spin", "molecule"])
    p.set_defaults(func=cmd_krylov)

    p = verbs.add_parser("verify", help="numerical certification checks")
    checks = p.add_subparsers(dest="check", required=True, parser_class=Parser)
    q = checks.add_parser("lemma1", parents=[common], help="block-encoded Chebyshev identity")
    q.add_argument("--qubits", type=int)
    q.add_argument("--terms", type=int)
    q.add_argument("--seed", type=int)
    q.add_argument("--kmax", type=int)
    q.add_argument("--samples", type=int)
    q.set_defaults(func=cmd_lemma1)

    p = verbs.add_parser("bounds", parents=[common], help="evaluate error bounds")
    p.add_argument("--d", type=int)
    p.add_argument("--gamma0", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--eps-total", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--eta-s", type=float)
    p.add_argument("--eta-h", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--gap", type=float)
    p.add_argument("--target-error", type=float)
    p.set_defaults(func=cmd_bounds)

    p = verbs.add_parser("gatecount", parents=[common], help="gate and qubit counts")
    p.add_argument("--scheme", choices=["binary_index", "symplectic"])
    p.add_argument("-n", type=int)
    p.add_argument("-t", type=int)
    p.add_argument("--d", type=int)
    p.set_defaults(func=cmd_gatecount, parser=p)

    for verb, func in (("fig2", cmd_fig2), ("fig3", cmd_fig3)):
        p = verbs.add_parser(verb, parents=[common], help=f"{verb} noise sweep as CSV")
        _add_model_flags(p)
        p.add_argument("--d-max", type=int)
        p.add_argument("--eta", type=float, nargs="+")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--family", choices=["spin", "molecule"])
        p.add_argument("--threshold-constant", type=float)
        p.add_argument("--output")
        p.add_argument("--workers", type=int)
        p.set_defaults(func=func)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    settings = get_settings()
    logging.basicConfig(
        stream=sys.stderr,
        level=settings.log_level.upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args = build_parser().parse_args(argv)
        logger.debug(f"[CLI] {args.verb}")
        args.func(args, _load_config(args.config))
    except UsageError as e:
        print(e, file=sys.stderr)
        return 1
    except ValidationError as e:
        print(f"invalid configuration:\n{e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except KrylovLabError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
