"""Command-line front end.

Subcommands:
    run <circuit-file>            propagate a circuit, dump the tensor CSV
    repeater <config-file>        evaluate a repeater scenario, print JSON
    reproduce <target> [--out]    emit a figure/table dataset (+ PNG)
    verify [--suite ...]          run built-in verification suites

Exit codes: 0 success, 1 validation error or failed verification,
2 resource cap exceeded.  The environment variable EPT_DENSE_CAP overrides
the dense-table size cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import channels, circuits, entanglement, figures, repeater
from .errors import BruteForceCapExceeded, CapExceeded, ConfigError, ParseError, PauliPropError

_CONFIG_KEYS = {
    "D", "N", "f_T", "f_G", "f_M", "f_S",
    "code.n", "code.d", "k_max", "f_abs", "f_C", "gamma",
}


def parse_scenario_config(text: str) -> repeater.RepeaterScenario:
    """Flat key-value scenario file: 'key = value' lines, '#' comments."""
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise ConfigError(f"line {line_no}: expected 'key = value', got {raw!r}")
            key, val = parts
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {line_no}: duplicate key {key!r}")
        values[key] = val

    def need_int(key):
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
        try:
            return int(values[key])
        except ValueError:
            raise ConfigError(f"key {key!r} must be an integer, got {values[key]!r}") from None

    def opt_float(key, default=0.0):
        if key not in values:
            return default
        try:
            return float(values[key])
        except ValueError:
            raise ConfigError(f"key {key!r} must be a number, got {values[key]!r}") from None

    D = need_int("D")
    N = need_int("N")
    rates = {name: opt_float(name) for name in ("f_T", "f_G", "f_M", "f_S")}
    encoding = None
    if ("code.n" in values) != ("code.d" in values):
        raise ConfigError("code.n and code.d must be given together")
    if "code.n" in values:
        k_max = int(values["k_max"]) if "k_max" in values else None
        if "f_abs" in values:
            f_abs = opt_float("f_abs")
        elif "f_C" in values or "gamma" in values:
            f_abs = repeater.absorption_probability(opt_float("f_C"), opt_float("gamma"))
        else:
            f_abs = 0.0
        try:
            encoding = repeater.Encoding(need_int("code.n"), need_int("code.d"), k_max, f_abs)
        except PauliPropError as exc:
            raise ConfigError(str(exc)) from exc
    elif {"k_max", "f_abs", "f_C", "gamma"} & values.keys():
        raise ConfigError("loss/abortion keys require code.n and code.d")
    try:
        return repeater.RepeaterScenario(D=D, N=N, encoding=encoding, **rates)
    except PauliPropError as exc:
        raise ConfigError(str(exc)) from exc


def scenario_summary(scenario: repeater.RepeaterScenario) -> tuple[dict, repeater.CosetStatistics]:
    stats = repeater.final_statistics(scenario)
    state = entanglement.BellDiagonalState.from_cosets(stats)
    enc = scenario.encoding
    p_distr = None
    if enc is not None and enc.k_max is not None:
        try:
            p_distr = repeater.distribution_probability(scenario)
        except BruteForceCapExceeded:
            print("note: P_distr enumeration infeasible for this size; omitted", file=sys.stderr)
    summary = {
        "D": scenario.D,
        "N": scenario.N,
        "encoded": enc is not None,
        "code": None if enc is None else {"n": enc.n, "d": enc.d},
        "k_max": None if enc is None else enc.k_max,
        "f_abs": None if enc is None else enc.f_abs,
        "fidelity": entanglement.fidelity(state),
        "log_negativity": entanglement.log_negativity(state),
        "p00": stats.p00,
        "P_distr": p_distr,
    }
    return summary, stats


def _cosets_csv_lines(stats: repeater.CosetStatistics):
    yield "r,s,probability"
    for r in range(stats.D):
        for s in range(stats.D):
            yield f"{r},{s},{stats.table[r, s]:.17g}"


# -- verification suites -----------------------------------------------------------

def _verify_oracle(report) -> bool:
    from . import clifford, ept
    from .pauli import PauliLabel, to_matrix

    rng = np.random.default_rng(2024)
    ok = True
    for D, n in ((2, 2), (3, 2), (5, 1), (2, 3)):
        worst = 0.0
        for _ in range(5):
            tensor = ept.ErrorProbabilityTensor.identity(D, n)
            ops = []
            for _ in range(6):
                kind = rng.choice(["F", "M", "CX", "CZ", "DEP", "DEPX", "DEPZ"])
                q = int(rng.integers(n))
                if kind in ("CX", "CZ") and n == 1:
                    kind = "F"
                if kind == "F":
                    ops.append(("gate", clifford.fourier(q)))
                elif kind == "M":
                    units = [l for l in range(1, D) if np.gcd(l, D) == 1]
                    ops.append(("gate", clifford.multiply(int(rng.choice(units)), q)))
                elif kind in ("CX", "CZ"):
                    t = int(rng.choice([i for i in range(n) if i != q]))
                    maker = clifford.cx if kind == "CX" else clifford.cz
                    ops.append(("gate", maker(q, t, power=int(rng.integers(1, D)))))
                else:
                    f = float(rng.random() * 0.5)
                    if kind == "DEP":
                        ops.append(("chan", channels.embed(channels.depolarizing(f, D, 1), n, [q])))
                    else:
                        axis = channels.Axis.X_ONLY if kind == "DEPX" else channels.Axis.Z_ONLY
                        ops.append(("chan", channels.embed(channels.axis_depolarizing(f, axis, D), n, [q])))
            unitaries = []
            ideal = np.eye(D ** n, dtype=complex)
            for what, op in ops:
                if what == "gate":
                    tensor = tensor.apply_clifford(clifford.automorphism_of(op, n, D))
                    u = clifford.gate_unitary(op, n, D)
                    unitaries.append(("gate", u))
                    ideal = u @ ideal
                else:
                    tensor = tensor.apply_channel(op)
                    unitaries.append(("chan", op))
            for _ in range(4):
                rho = channels.random_density_matrix(D ** n, rng)
                direct = rho
                for what, op in unitaries:
                    if what == "gate":
                        direct = op @ direct @ op.conj().T
                    else:
                        acc = np.zeros_like(direct)
                        for key, p in op.support_items():
                            m = to_matrix(PauliLabel.from_vector(key, D))
                            acc += p * (m @ direct @ m.conj().T)
                        direct = acc
                # errors pushed to the end: noisy circuit == accumulated error
                # channel after the ideal circuit
                pushed = tensor.channel_action(ideal @ rho @ ideal.conj().T)
                worst = max(worst, float(np.max(np.abs(pushed - direct))))
        good = worst < 1e-10
        ok &= good
        report(f"oracle D={D} n={n}: max deviation {worst:.2e}", good)
    return ok


def _verify_uniform_mixture(report) -> bool:
    ok = True
    for D, n in ((2, 1), (2, 2), (3, 1), (3, 2), (5, 1)):
        good = channels.verify_depolarizing_discretization(D, n, trials=5)
        ok &= good
        report(f"uniform Pauli mixture D={D} n={n}", good)
    return ok


_TABLE2_EXPECTED = {
    0: (1, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    1: (1, 26, 13, 0, 0, 0, 0, 0, 0, 0),
    2: (1, 26, 325, 312, 78, 0, 0, 0, 0, 0),
    3: (1, 26, 325, 2600, 3510, 1716, 286, 0, 0, 0),
    4: (1, 26, 325, 2600, 14950, 24596, 17446, 5720, 715, 0),
}


def _verify_table2(report) -> bool:
    ok = True
    for k_max, expected in _TABLE2_EXPECTED.items():
        alpha = repeater.count_accepted_configurations(2, 13, k_max)
        good = tuple(int(v) for v in alpha[:10]) == expected and not alpha[10:].any()
        ok &= good
        report(f"accepted-configuration counts k_max={k_max}", good)
    return ok


_SUITES = {
    "oracle": _verify_oracle,
    "appendixB": _verify_uniform_mixture,
    "table2": _verify_table2,
}


# -- entry point --------------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pauliprop",
        description="Pauli error statistics in qudit Clifford circuits and repeater lines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="propagate a circuit file and dump the tensor")
    p_run.add_argument("circuit", help="path to the circuit file")
    p_run.add_argument("--out", help="write CSV here instead of stdout")

    p_rep = sub.add_parser("repeater", help="evaluate a repeater scenario config")
    p_rep.add_argument("config", help="path to the key-value config file")
    p_rep.add_argument("--out", help="directory for summary.json and cosets.csv")

    p_repro = sub.add_parser("reproduce", help="emit a figure/table dataset")
    p_repro.add_argument("target", choices=figures.TARGETS)
    p_repro.add_argument("--out", help="CSV output path (PNG lands next to it)")
    p_repro.add_argument("--no-plot", action="store_true", help="skip the PNG rendering")

    p_codes = sub.add_parser("code-table", help="list polynomial code parameters as CSV")
    p_codes.add_argument("--max-dimension", type=int, default=23,
                         help="largest prime dimension to list (default 23)")

    p_verify = sub.add_parser("verify", help="run built-in verification suites")
    p_verify.add_argument("--suite", choices=sorted(_SUITES) + ["all"], default="all")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 2
    except PauliPropError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.command == "run":
        program = circuits.parse_circuit(Path(args.circuit).read_text())
        result = circuits.run_program(program)
        for qudit, flips in result.measurements:
            dist = ",".join(f"{p:.17g}" for p in flips)
            print(f"measured q{qudit}: flip distribution {dist}", file=sys.stderr)
        lines = "\n".join(circuits.csv_lines(result, program.D)) + "\n"
        if args.out:
            Path(args.out).write_text(lines)
        else:
            sys.stdout.write(lines)
        return 0

    if args.command == "repeater":
        scenario = parse_scenario_config(Path(args.config).read_text())
        summary, stats = scenario_summary(scenario)
        text = json.dumps(summary, indent=2, sort_keys=True)
        print(text)
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / "summary.json").write_text(text + "\n")
            (out / "cosets.csv").write_text("\n".join(_cosets_csv_lines(stats)) + "\n")
        return 0

    if args.command == "reproduce":
        if args.target == "fig6":
            print("note: fig6 sweeps about 3500 grid points; expect a short wait",
                  file=sys.stderr)
        header, rows = figures.build_dataset(args.target)
        if args.out:
            path = Path(args.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w") as stream:
                figures.write_csv(header, rows, stream)
            if args.target.startswith("fig") and not args.no_plot:
                png = path.with_suffix(".png")
                figures.render(args.target, header, rows, str(png))
                print(f"wrote {path} and {png}", file=sys.stderr)
        else:
            figures.write_csv(header, rows, sys.stdout)
        return 0

    if args.command == "code-table":
        from .modarith import is_prime
        from .qpcode import QuantumPolynomialCode
        print("D,d,n,correctable_weight")
        for D in range(2, args.max_dimension + 1):
            if not is_prime(D):
                continue
            for d in range(1, (D + 1) // 2 + 1):
                code = QuantumPolynomialCode(D, d)
                print(f"{D},{d},{code.n},{code.correctable_weight}")
        return 0

    if args.command == "verify":
        failures = 0

        def report(label: str, good: bool):
            nonlocal failures
            print(f"{'PASS' if good else 'FAIL'}  {label}")
            if not good:
                failures += 1

        names = sorted(_SUITES) if args.suite == "all" else [args.suite]
        for name in names:
            _SUITES[name](report)
        return 0 if failures == 0 else 1

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
