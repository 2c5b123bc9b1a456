"""Command-line front end emitting CSV or JSON tables."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import asymqcm, cvclone, pcqcm, qkd, uqcm, verify
from .qmath import bloch_vector, fidelity_pure, haar_state, orthogonal_qubit, qubit, reduced_state

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2
THREADS_ENV = "CLONEKIT_THREADS"
MACHINES = ("werner", "buzek-hillery", "asymmetric", "phase-covariant",
            "phase-covariant-ancilla", "measure-prepare")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]]
    extra: dict[str, Any] = field(default_factory=dict)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.12g" % v
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return float("%.12g" % v) if math.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def render(table: Table, fmt: str, config: dict) -> str:
    if fmt == "json":
        doc = {
            "config": config,
            "columns": table.columns,
            "rows": [[_json_value(v) for v in r] for r in table.rows],
            **{k: _json_value(v) for k, v in table.extra.items()},
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
    for k, v in table.extra.items():
        buf.write(f"# {k}: {json.dumps(_json_value(v), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def pool_size() -> int:
    raw = os.environ.get(THREADS_ENV)
    default = os.cpu_count() or 1
    if raw is None:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return min(n, default)


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Order-preserving map over a thread pool sized by the environment."""
    n = min(pool_size(), max(1, len(items)))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def _require(cond: bool, msg: str):
    if not cond:
        raise UsageError(msg)


# --- commands ------------------------------------------------------------

def cmd_fidelity_table(a) -> Table:
    _require(a.N_max >= 1, "--N-max must be >= 1")
    _require(a.M_max >= a.N_max, "--M-max must be >= --N-max")
    _require(all(d >= 2 for d in a.d), "every --d must be >= 2")
    cells = [(N, M, d) for d in a.d for N in range(1, a.N_max + 1) for M in range(N, a.M_max + 1)]

    def row(c):
        N, M, d = c
        return [N, M, d, uqcm.fidelity_formula(N, M, d), uqcm.shrinking_eta(N, M, d),
                uqcm.trivial_amplify_fidelity(N, M, d)]

    return Table(["N", "M", "d", "fidelity", "eta", "trivial_fidelity"], parallel_map(row, cells))


def _input_state(a):
    if a.random_state:
        return haar_state(a.d if a.machine in ("werner", "asymmetric") else 2, np.random.default_rng(a.seed))
    if a.machine in ("phase-covariant", "phase-covariant-ancilla"):
        return pcqcm.EquatorState(a.phi).ket
    _require(a.d == 2, "qudit inputs (--d > 2) need --random-state")
    return qubit(a.theta, a.phi)


def cmd_clone(a) -> Table:
    _require(a.d >= 2, "--d must be >= 2")
    if a.machine != "werner":
        _require((a.N, a.M) == (1, 2), f"{a.machine} is a 1 -> 2 machine; --N/--M apply to werner only")
    psi = _input_state(a)
    cols = ["output", "target", "fidelity", "bloch_x", "bloch_y", "bloch_z"]
    rows = []
    extra: dict[str, Any] = {}

    def add(label, rho, target="psi", ref=psi):
        b = bloch_vector(rho) if rho.dims == (2,) else (math.nan,) * 3
        rows.append([label, target, fidelity_pure(rho, ref), *b])

    m = a.machine
    if m == "werner":
        _require(a.M > a.N >= 1, "need M > N >= 1")
        _require(a.d ** a.M <= uqcm.MAX_WERNER_DIM, f"d^M must be <= {uqcm.MAX_WERNER_DIM}")
        rep = uqcm.werner_clone(psi, a.N, a.M)
        for k, rho in enumerate(rep.clone_states):
            add(f"clone{k}", rho)
        extra = {"shrinking_factor": rep.shrinking_factor, "global_fidelity": rep.global_fidelity,
                 "formula_fidelity": uqcm.fidelity_formula(a.N, a.M, a.d)}
    elif m == "buzek-hillery":
        A, B, M = uqcm.buzek_hillery(psi)
        add("clone0", A)
        add("clone1", B)
        add("anticlone", M, "psi_perp", orthogonal_qubit(psi))
    elif m == "asymmetric":
        _require(0 <= a.b <= 1, "--b must lie in [0, 1]")
        p = asymqcm.AsymParams.from_b(a.d, a.b)
        out = asymqcm.asym_output_state(psi, p)
        add("clone0", reduced_state(out, [0]))
        add("clone1", reduced_state(out, [1]))
        fa, fb = asymqcm.asym_fidelities(p)
        extra = {"formula_fidelities": [fa, fb], "a": p.a, "b": p.b}
    elif m in ("phase-covariant", "phase-covariant-ancilla"):
        _require(0 <= a.eta <= math.pi / 2, "--eta must lie in [0, pi/2]")
        clones = pcqcm.ng_clone(a.phi, a.eta) if m == "phase-covariant" \
            else pcqcm.pc_ancilla_clone(a.phi, a.eta)[:2]
        for k, rho in enumerate(clones):
            add(f"clone{k}", rho)
        extra = {"formula_fidelities": list(pcqcm.equator_fidelities(a.eta))}
    elif m == "measure-prepare":
        _require(psi.dims == (2,), "measure-prepare is defined for qubits")
        _require(a.samples is None or a.samples >= 1, "--samples must be >= 1")
        rng = np.random.default_rng(a.seed)
        rho = uqcm.measure_prepare_state(psi, samples=a.samples, rng=rng)
        add("clone0", rho)
        add("clone1", rho)
    return Table(cols, rows, extra)


def cmd_qkd_sweep(a) -> Table:
    _require(a.points >= 2, "--points must be >= 2")
    attack = qkd.bb84_no_ancilla if a.no_ancilla else qkd.bb84_with_ancilla
    etas = list(np.linspace(0, math.pi / 2, a.points))

    def row(eta):
        o = attack(float(eta))
        return [eta, o.disturbance, o.I_AB, o.I_AE, o.I_BE, o.chi_AE, o.chi_BE,
                qkd.key_rate(o, "incoherent"), qkd.key_rate(o, "collective")]

    rows = parallel_map(row, etas)
    crit = {"incoherent": qkd.critical_disturbance("incoherent"),
            "collective": qkd.critical_disturbance("collective")}
    for r in rows:
        r.extend([crit["incoherent"], crit["collective"]])
    cols = ["eta", "D", "I_AB", "I_AE", "I_BE", "chi_AE", "chi_BE", "R_incoh", "R_coll",
            "Dc_incoh", "Dc_coll"]
    return Table(cols, rows, {"critical": crit})


def cmd_cv_network(a) -> Table:
    _require(a.M > a.N >= 1, "need M > N >= 1")
    _require(math.isfinite(a.squeeze), "--squeeze must be finite")
    if a.squeeze:
        inp = cvclone.squeezed(a.x, a.p, a.squeeze)
        run = cvclone.squeezed_clone(a.N, a.M, cvclone.copies(inp, a.N), a.squeeze,
                                     matched=not a.unmatched)
    else:
        inp = cvclone.coherent(a.x, a.p)
        run = cvclone.clone_network(a.N, a.M, cvclone.copies(inp, a.N))
    var0 = cvclone.VACUUM_VAR
    bound_noise, bound_fid = cvclone.sgc_bound(a.N, a.M)
    rows = []
    for k in range(a.M + 1):
        label = f"clone{k}" if k < a.M else "anticlone"
        mode = run.output.mode(k)
        vx, vp = mode.variances(0)
        fid = cvclone.gaussian_overlap(mode, inp) if k < a.M else math.nan
        rows.append([label, *mode.mean, vx, vp, vx - var0, vp - var0, fid, bound_noise, bound_fid])
    cols = ["mode", "mean_x", "mean_p", "var_x", "var_p", "added_x", "added_p", "fidelity",
            "bound_added_noise", "bound_fidelity"]
    return Table(cols, rows)


def cmd_verify(a) -> Table:
    results = parallel_map(lambda c: c(), list(verify.CHECKS))
    rows = [[r.name, r.passed, r.detail] for r in results]
    passed = sum(r.passed for r in results)
    return Table(["check", "passed", "detail"], rows, {"summary": {"passed": passed, "total": len(rows)}})


COMMANDS = {
    "fidelity-table": cmd_fidelity_table,
    "clone": cmd_clone,
    "qkd-sweep": cmd_qkd_sweep,
    "cv-network": cmd_cv_network,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None, help="Monte-Carlo sample count")

    p = _Parser(prog="clonekit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("fidelity-table", parents=[common], help="optimal N -> M fidelity grid")
    s.add_argument("--N-max", type=int, default=3)
    s.add_argument("--M-max", type=int, default=5)
    s.add_argument("--d", type=int, nargs="+", default=[2, 3])

    s = sub.add_parser("clone", parents=[common], help="run one cloning machine")
    s.add_argument("--machine", choices=MACHINES, default="buzek-hillery")
    s.add_argument("--N", type=int, default=1)
    s.add_argument("--M", type=int, default=2)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--theta", type=float, default=0.0)
    s.add_argument("--phi", type=float, default=0.0)
    s.add_argument("--b", type=float, default=math.sqrt(1 / 3))
    s.add_argument("--eta", type=float, default=math.pi / 4)
    s.add_argument("--random-state", action="store_true", help="Haar-random input from --seed")

    s = sub.add_parser("qkd-sweep", parents=[common], help="BB84 rates over the cloner angle")
    s.add_argument("--points", type=int, default=21)
    s.add_argument("--no-ancilla", action="store_true")

    s = sub.add_parser("cv-network", parents=[common], help="Gaussian N -> M cloning network")
    s.add_argument("--N", type=int, default=1)
    s.add_argument("--M", type=int, default=2)
    s.add_argument("--x", type=float, default=1.0)
    s.add_argument("--p", type=float, default=-0.5)
    s.add_argument("--squeeze", type=float, default=0.0)
    s.add_argument("--unmatched", action="store_true")

    sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    return p


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "output"}
    return {k: cfg[k] for k in sorted(cfg)}


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
        table = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"clonekit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, MemoryError) as e:
        print(f"clonekit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    text = render(table, args.format, _config(args))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and not all(r[1] for r in table.rows):
        return EXIT_VERIFY
    return EXIT_OK
