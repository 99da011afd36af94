"""Command-line driver: simulation presets, shot ingestion, table dumps.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
contract violation. All outputs are deterministic functions of the
resolved configuration and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bayes import (
    DirichletState,
    MixtureBlowupError,
    StrongCouplingError,
    ZeroProbabilityOutcomeError,
    RULES,
    run_updates,
)
from .channel import (
    CompatibleSet,
    ContradictionError,
    ImpossibleOutcomeError,
    compatible_set,
    pauli_labels,
)
from .gadget import maximal_stack, outcome_table, singled_index_table
from .metrics import convergence_curve
from .pauli import CliffordGate, PauliOperator
from .sim import (
    DegeneratePerturbationError,
    NoiseModel,
    RandomSingleLayers,
    run_experiment,
    perturb_channel,
    sample_prior_means,
)


class ConfigError(ValueError):
    """Invalid configuration; exits with code 2."""


class DataError(ValueError):
    """Malformed input data; exits with code 3."""


_NUMERIC_ERRORS = (
    MixtureBlowupError,
    StrongCouplingError,
    ZeroProbabilityOutcomeError,
    ContradictionError,
    ImpossibleOutcomeError,
    DegeneratePerturbationError,
)

GATE_REGISTRY = {
    "cnot": ("cx 0 1", 2),
    "cx": ("cx 0 1", 2),
    "h": ("h 0", 1),
    "s": ("s 0", 1),
    "x": ("x 0", 1),
    "z": ("z 0", 1),
    "id": ("id", 1),
}

PRESETS = {
    "fig4": {
        "gate": "cnot", "stack": "maximal", "noise_p": 0.0, "shots": 10000,
        "alpha0": 2000.0, "delta": 0.02, "prior": "sample",
        "rule": "exact_maximal", "seed": 0, "stride": 100,
    },
    "fig6": {
        "gate": "cnot", "stack": "random_single", "noise_p": 0.0, "shots": 1000,
        "alpha0": 2000.0, "delta": 0.02, "prior": "sample",
        "rule": "first_order", "seed": 0, "stride": 100,
    },
    "fig7": {
        "gate": "cnot", "stack": "maximal", "noise_p": 0.01, "shots": 10000,
        "alpha0": 2000.0, "delta": 0.02, "prior": "sample",
        "rule": "exact_maximal", "seed": 0, "stride": 100,
    },
    "fig9": {
        "gate": "cnot", "stack": "maximal", "noise_p": [0.0, 0.01, 0.02, 0.05],
        "shots": 20000, "alpha0": 2000.0, "delta": 0.02, "prior": "sample",
        "rule": "exact_maximal", "seed": 0, "stride": 200,
    },
}

_CONFIG_KEYS = {"gate", "stack", "noise_p", "shots", "alpha0", "delta",
                "prior", "rule", "seed", "stride"}


def gate_from_name(name: str) -> CliffordGate:
    """Look up a registered gate name, or parse a circuit string."""
    key = name.strip().lower()
    if key in GATE_REGISTRY:
        circuit, n_q = GATE_REGISTRY[key]
        return CliffordGate.from_circuit(circuit, n_q)
    if any(ch in key for ch in "; "):
        qubits = [int(t) for t in key.replace(";", " ").split() if t.isdigit()]
        if not qubits:
            raise ConfigError(f"circuit string {name!r} names no qubits")
        try:
            return CliffordGate.from_circuit(key, max(qubits) + 1)
        except ValueError as exc:
            raise ConfigError(f"bad circuit string {name!r}: {exc}") from exc
    raise ConfigError(
        f"unknown gate {name!r}; known: {sorted(GATE_REGISTRY)} or a circuit string"
    )


def resolve_config(preset: str | None, config_path: str | None,
                   seed: int | None, rule: str | None) -> dict:
    """Merge preset defaults, config file contents, and flag overrides."""
    config: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; known: {sorted(PRESETS)}")
        config.update(PRESETS[preset])
    if config_path is not None:
        try:
            loaded = json.loads(Path(config_path).read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {config_path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{config_path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"{config_path}: top level must be an object")
        unknown = set(loaded) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"{config_path}: unknown keys {sorted(unknown)}")
        config.update(loaded)
    if seed is not None:
        config["seed"] = seed
    if rule is not None:
        config["rule"] = rule
    validate_config(config)
    return config


def validate_config(config: dict) -> None:
    for key in ("gate", "stack", "shots", "alpha0", "rule", "seed"):
        if key not in config:
            raise ConfigError(f"config key {key!r} is required")
    if config["stack"] not in ("maximal", "random_single"):
        raise ConfigError(f"stack must be 'maximal' or 'random_single', got {config['stack']!r}")
    if config["rule"] not in RULES:
        raise ConfigError(f"rule must be one of {RULES}, got {config['rule']!r}")
    if config["rule"] == "exact_maximal" and config["stack"] != "maximal":
        raise ConfigError("rule 'exact_maximal' requires stack 'maximal'")
    shots = config["shots"]
    if not isinstance(shots, int) or shots < 1:
        raise ConfigError(f"shots must be a positive integer, got {shots!r}")
    alpha0 = config["alpha0"]
    if not isinstance(alpha0, (int, float)) or alpha0 <= 0:
        raise ConfigError(f"alpha0 must be positive, got {alpha0!r}")
    if config["rule"] == "first_order" and shots >= alpha0:
        raise ConfigError(
            f"rule 'first_order' is valid only for shots < alpha0 ({shots} >= {alpha0})"
        )
    delta = config.get("delta", 0.0)
    if not isinstance(delta, (int, float)) or delta < 0:
        raise ConfigError(f"delta must be nonnegative, got {delta!r}")
    noise = config.get("noise_p", 0.0)
    p_values = noise if isinstance(noise, list) else [noise]
    for p in p_values:
        if not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
            raise ConfigError(f"noise_p entries must lie in [0, 1], got {p!r}")
    prior = config.get("prior", "sample")
    if prior != "sample" and not isinstance(prior, dict):
        raise ConfigError("prior must be 'sample' or an inline {label: rate} object")
    gate_from_name(config["gate"])


# -- serialization helpers ----------------------------------------------


def _dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _estimates_obj(trace) -> dict:
    labels = _labels_for(len(trace.final_means))
    return {
        "alpha0_eff": float(trace.alpha0_eff),
        "rule": trace.rule,
        "means": {lab: float(v) for lab, v in zip(labels, trace.final_means)},
        "variances": {lab: float(v) for lab, v in zip(labels, trace.final_variances)},
    }


def _labels_for(k: int) -> list[str]:
    n_q = round(np.log(k) / np.log(4))
    return pauli_labels(n_q)


def _record_to_json(record) -> str:
    obj = {"step": record.step, "outcomes": list(record.outcomes)}
    if record.truth is not None:
        obj["truth"] = record.truth
    if record.layers is not None:
        obj["layers"] = list(record.layers)
    return json.dumps(obj, sort_keys=True)


def _sets_from_records(gate: CliffordGate, stack_mode: str, records) -> list[CompatibleSet]:
    """Compatible set per shot record, per the declared stack mode."""
    sets: list[CompatibleSet] = []
    if stack_mode == "maximal":
        stack = maximal_stack(gate)
        table = {pat: CompatibleSet(gate.n_q, (i,))
                 for pat, i in singled_index_table(stack).items()}
        want = 2 * gate.n_q
        for rec in records:
            if len(rec.outcomes) != want:
                raise DataError(
                    f"step {rec.step}: expected {want} outcomes for the maximal stack, "
                    f"got {len(rec.outcomes)}"
                )
            sets.append(table[tuple(rec.outcomes)])
    else:
        for rec in records:
            if not rec.layers:
                raise DataError(
                    f"step {rec.step}: random_single records must carry a 'layers' field"
                )
            if len(rec.layers) != len(rec.outcomes):
                raise DataError(
                    f"step {rec.step}: {len(rec.layers)} layers vs "
                    f"{len(rec.outcomes)} outcomes"
                )
            rights = [PauliOperator.from_string(s) for s in rec.layers]
            sets.append(compatible_set(rights, list(rec.outcomes)))
    return sets


# -- simulate ------------------------------------------------------------


def cmd_simulate(args) -> int:
    config = resolve_config(args.preset, args.config, args.seed, args.rule)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    gate = gate_from_name(config["gate"])
    k = 4**gate.n_q
    labels = pauli_labels(gate.n_q)
    master = np.random.default_rng(config["seed"])

    prior_spec = config.get("prior", "sample")
    if prior_spec == "sample":
        prior_means = sample_prior_means(k, master)
    else:
        rates = np.zeros(k)
        for lab, value in prior_spec.items():
            if lab not in labels:
                raise ConfigError(f"prior: unknown Pauli label {lab!r}")
            rates[labels.index(lab)] = float(value)
        total = rates.sum()
        if total <= 0:
            raise ConfigError("prior rates must have positive total weight")
        prior_means = rates / total
    delta = float(config.get("delta", 0.0))
    phys = perturb_channel(prior_means, delta, master)
    alpha0 = float(config["alpha0"])
    prior = DirichletState.from_means(prior_means, alpha0)

    noise_spec = config.get("noise_p", 0.0)
    p_values = list(noise_spec) if isinstance(noise_spec, list) else [noise_spec]
    shots = config["shots"]
    stride = int(config.get("stride", max(1, shots // 100)))

    _dump_json(out_dir / "config.resolved.json", config)
    _dump_json(out_dir / "prior.json",
               {"alpha0": alpha0, "means": {lab: float(v) for lab, v in zip(labels, prior_means)}})
    _dump_json(out_dir / "channel.json", phys.to_json_dict())

    for p in p_values:
        run_seed = int(master.integers(2**63))
        run_dir = out_dir if len(p_values) == 1 else out_dir / f"p{p:g}"
        run_dir.mkdir(parents=True, exist_ok=True)
        source = (maximal_stack(gate) if config["stack"] == "maximal"
                  else RandomSingleLayers(gate))
        records = run_experiment(phys, source, NoiseModel.uniform(float(p)), shots, run_seed)
        sets = _sets_from_records(gate, config["stack"], records)
        trace = run_updates(prior, sets, config["rule"], noise_p=float(p),
                            record_every=stride)

        with open(run_dir / "shots.jsonl", "w") as fh:
            for rec in records:
                fh.write(_record_to_json(rec) + "\n")
        _dump_json(run_dir / "estimates.json", _estimates_obj(trace))

        curve_name = "curve.csv" if len(p_values) == 1 else f"curve_p{p:g}.csv"
        points = convergence_curve(trace, phys, stride=stride)
        with open(out_dir / curve_name, "w") as fh:
            fh.write("n,tvd,rule,p,seed\n")
            for pt in points:
                fh.write(f"{pt.n},{pt.tvd!r},{pt.rule},{p:g},{config['seed']}\n")

        stddev = np.sqrt(trace.final_variances)
        with open(run_dir / "histogram.csv", "w") as fh:
            fh.write("label,prior,updated,physical,stddev\n")
            for i, lab in enumerate(labels):
                fh.write(
                    f"{lab},{float(prior_means[i])!r},{float(trace.final_means[i])!r},"
                    f"{float(phys.rates[i])!r},{float(stddev[i])!r}\n"
                )
        if args.emit_every:
            for step, means in zip(trace.steps, trace.means_at):
                if step and step % args.emit_every == 0:
                    print(json.dumps(
                        {"step": step, "p": p,
                         "means": {lab: float(v) for lab, v in zip(labels, means)}},
                        sort_keys=True))
    return 0


# -- update (external shot ingestion) ------------------------------------


def _parse_shot_line(line: str, lineno: int):
    from .sim import ShotRecord

    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataError(f"shots line {lineno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict) or "outcomes" not in obj:
        raise DataError(f"shots line {lineno}: missing 'outcomes'")
    outcomes = obj["outcomes"]
    if (not isinstance(outcomes, list)
            or not all(m in (1, -1) for m in outcomes)):
        raise DataError(f"shots line {lineno}: outcomes must be a list of +-1")
    layers = obj.get("layers")
    if layers is not None and not isinstance(layers, list):
        raise DataError(f"shots line {lineno}: layers must be a list of Pauli strings")
    return ShotRecord(
        step=int(obj.get("step", lineno - 1)),
        outcomes=tuple(int(m) for m in outcomes),
        truth=obj.get("truth"),
        layers=tuple(layers) if layers is not None else None,
    )


def cmd_update(args) -> int:
    try:
        prior_obj = json.loads(Path(args.prior).read_text())
    except FileNotFoundError:
        raise ConfigError(f"prior file not found: {args.prior}")
    except json.JSONDecodeError as exc:
        raise DataError(f"{args.prior}:{exc.lineno}: invalid JSON: {exc.msg}")
    if "means" not in prior_obj:
        raise DataError(f"{args.prior}: missing 'means'")
    gate = gate_from_name(args.gate)
    labels = pauli_labels(gate.n_q)
    means = np.zeros(len(labels))
    for lab, value in prior_obj["means"].items():
        if lab not in labels:
            raise DataError(f"{args.prior}: unknown Pauli label {lab!r}")
        means[labels.index(lab)] = float(value)
    alpha0 = float(args.alpha0 if args.alpha0 is not None else prior_obj.get("alpha0", 2000.0))
    if alpha0 <= 0:
        raise ConfigError("alpha0 must be positive")
    if args.stack not in ("maximal", "random_single"):
        raise ConfigError("stack must be 'maximal' or 'random_single'")
    if args.rule not in RULES:
        raise ConfigError(f"rule must be one of {RULES}")
    if args.rule == "exact_maximal" and args.stack != "maximal":
        raise ConfigError("rule 'exact_maximal' requires stack 'maximal'")
    if abs(means.sum() - 1.0) > 1e-9:
        raise DataError(f"{args.prior}: means sum to {means.sum():.12g}, expected 1")
    prior = DirichletState.from_means(means, alpha0)

    stream = sys.stdin if args.shots == "-" else open(args.shots)
    records = []
    try:
        for lineno, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                records.append(_parse_shot_line(line, lineno))
            except DataError as exc:
                if args.on_error == "skip":
                    print(f"warning: skipped record: {exc}", file=sys.stderr)
                else:
                    raise
    finally:
        if stream is not sys.stdin:
            stream.close()

    if args.rule == "first_order" and len(records) >= alpha0:
        raise ConfigError(
            f"rule 'first_order' is valid only for n < alpha0 "
            f"({len(records)} >= {alpha0})"
        )
    sets = _sets_from_records(gate, args.stack, records)
    if records:
        trace = run_updates(prior, sets, args.rule, noise_p=args.noise_p,
                            record_every=args.emit_every or max(1, len(records) // 100))
    else:
        trace = run_updates(prior, [], args.rule)

    if args.emit_every:
        for step, m in zip(trace.steps, trace.means_at):
            if step and step % args.emit_every == 0 and step != trace.steps[-1]:
                print(json.dumps(
                    {"step": step,
                     "means": {lab: float(v) for lab, v in zip(labels, m)}},
                    sort_keys=True))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _dump_json(out_dir / "estimates.json", _estimates_obj(trace))
    return 0


# -- tables ---------------------------------------------------------------


def _pattern_sort_key(pattern):
    return tuple(0 if m == 1 else 1 for m in pattern)


def tables_text(gate_name: str, stack_mode: str) -> str:
    """CSV dump of outcome tables (maximal) or all single layers."""
    gate = gate_from_name(gate_name)
    labels = pauli_labels(gate.n_q)
    lines = []
    if stack_mode == "maximal":
        stack = maximal_stack(gate)
        names = []
        for layer in stack.layers:
            r = layer.r
            qubit = next(s for s in range(gate.n_q) if r.x[s] or r.z[s])
            letter = "X" if r.x[qubit] else "Z"
            names.append(f"m[{letter}{qubit + 1}]")
        lines.append(",".join(names) + ",errors")
        table = outcome_table(stack)
        for pattern in sorted(table, key=_pattern_sort_key):
            members = " ".join(labels[i] for i in table[pattern].indices)
            bits = ",".join("+1" if m == 1 else "-1" for m in pattern)
            lines.append(f"{bits},{members}")
    elif stack_mode == "single":
        from .gadget import single_layer_stack

        lines.append("r,l,set[+1],set[-1]")
        for index in range(1, 4**gate.n_q):
            r = PauliOperator.from_index(index, gate.n_q)
            stack = single_layer_stack(gate, r)
            table = outcome_table(stack)
            plus = " ".join(labels[i] for i in table[(1,)].indices)
            minus = " ".join(labels[i] for i in table[(-1,)].indices)
            lines.append(f"{r.to_string()},{stack.layers[0].l.to_string()},{plus},{minus}")
    else:
        raise ConfigError(f"stack must be 'maximal' or 'single', got {stack_mode!r}")
    return "\n".join(lines) + "\n"


def cmd_tables(args) -> int:
    text = tables_text(args.gate, args.stack)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paulidrift",
        description="Flag-gadget simulation and Bayesian Pauli-channel adaptation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a simulated adaptation experiment")
    sim.add_argument("--preset", choices=sorted(PRESETS), default=None)
    sim.add_argument("--config", default=None, help="JSON config path")
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--rule", choices=RULES, default=None)
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--emit-every", type=int, default=0,
                     help="print intermediate estimates every K shots")
    sim.set_defaults(func=cmd_simulate)

    upd = sub.add_parser("update", help="update estimates from a shot stream")
    upd.add_argument("--prior", required=True, help="prior JSON (alpha0 + means)")
    upd.add_argument("--shots", required=True, help="shots JSONL path, or - for stdin")
    upd.add_argument("--gate", required=True)
    upd.add_argument("--stack", required=True, choices=["maximal", "random_single"])
    upd.add_argument("--rule", required=True, choices=RULES)
    upd.add_argument("--alpha0", type=float, default=None)
    upd.add_argument("--noise-p", type=float, default=0.0)
    upd.add_argument("--emit-every", type=int, default=0)
    upd.add_argument("--on-error", choices=["abort", "skip"], default="abort")
    upd.add_argument("--out", required=True)
    upd.set_defaults(func=cmd_update)

    tab = sub.add_parser("tables", help="dump gadget outcome tables as CSV")
    tab.add_argument("--gate", required=True)
    tab.add_argument("--stack", required=True, choices=["maximal", "single"])
    tab.add_argument("--out", default=None)
    tab.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except _NUMERIC_ERRORS as exc:
        print(f"numeric contract violation: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
