"""Command-line harness: ``python -m ia_dof <subcommand> ...``.

Every option can also come from a flat JSON file given with ``--config``;
explicit flags override the file. The seed falls back to ``IA_DOF_SEED``.
Exit status is 0 when all requested checks pass, 1 when some check fails
and 2 for an invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds, experiments, infeasibility
from .channel import ChannelSet, generate
from .schemes import IA_N2, TDM, ZF_N1, Scheme
from .topology import Topology
from .verify import SNR_POINTS, evaluate, sum_rate

DEFAULTS = {
    "K": 4, "N": 2, "M": 2, "n_slots": "auto", "scheme": "auto", "variant": "auto",
    "seed": None, "trials": 10, "snr_lo": SNR_POINTS[0], "snr_hi": SNR_POINTS[1],
    "tol": 0.05, "jobs": 1, "out": None, "format": "csv",
    "Kmax": 9, "Nmax": 7, "Kmin": 2,
    "Ks": [3, 4, 5, 6], "Ms": [1, 2, 3, 4], "Ns": [1, 2], "schemes": ["auto"],
    "tx": None, "rx": None, "channel": None, "scheme_file": None, "dump": None,
    "gnuplot": None, "threshold": 1e-6,
}


class ConfigError(ValueError):
    pass


def _int_list(s: str) -> list:
    return [int(x) for x in s.split(",") if x]


def _str_list(s: str) -> list:
    return [x for x in s.split(",") if x]


def _add(p, *names, **kw):
    kw.setdefault("default", None)
    p.add_argument(*names, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ia_dof", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, topo=True, trials=False):
        _add(p, "--config", dest="config", help="flat JSON config file")
        _add(p, "--seed", type=int)
        _add(p, "--out", help="output path (stdout if omitted)")
        if topo:
            _add(p, "--K", type=int, dest="K")
            _add(p, "--N", type=int, dest="N")
            _add(p, "--M", type=int, dest="M")
        if trials:
            _add(p, "--trials", type=int)
            _add(p, "--snr-lo", type=float, dest="snr_lo")
            _add(p, "--snr-hi", type=float, dest="snr_hi")
            _add(p, "--tol", type=float)
            _add(p, "--jobs", type=int)

    p = sub.add_parser("gen", help="draw a channel set and dump it")
    common(p)
    _add(p, "--n-slots", dest="n_slots")

    p = sub.add_parser("bound", help="pairwise upper bound for one topology")
    common(p)
    _add(p, "--tx", type=_int_list, help="comma-separated transmit antennas")
    _add(p, "--rx", type=_int_list, help="comma-separated receive antennas")

    p = sub.add_parser("table", help="UB/LB classification grid")
    common(p, topo=False)
    _add(p, "--M", type=int, dest="M")
    _add(p, "--Kmax", type=int, dest="Kmax")
    _add(p, "--Nmax", type=int, dest="Nmax")
    _add(p, "--format", choices=["csv", "text"])

    p = sub.add_parser("table1", help="achievability table for N=1,2")
    common(p, topo=False, trials=True)
    _add(p, "--Ks", type=_int_list, dest="Ks")
    _add(p, "--Ms", type=_int_list, dest="Ms")
    _add(p, "--Ns", type=_int_list, dest="Ns")

    p = sub.add_parser("scheme", help="seeded trials of one construction")
    common(p, trials=True)
    _add(p, "--scheme", choices=["auto", TDM, ZF_N1, IA_N2])
    _add(p, "--variant")
    _add(p, "--dump", help="write channel and scheme of trial 0 under this stem")

    p = sub.add_parser("verify", help="audit a dumped scheme against a dumped channel")
    common(p, topo=False)
    _add(p, "--channel", help="channel dump stem")
    _add(p, "--scheme-file", dest="scheme_file")
    _add(p, "--snr-lo", type=float, dest="snr_lo")
    _add(p, "--snr-hi", type=float, dest="snr_hi")
    _add(p, "--gnuplot", help="write sum rate vs SNR data for plotting")

    p = sub.add_parser("sweep", help="per-trial rows over a parameter grid")
    common(p, topo=False, trials=True)
    _add(p, "--Ks", type=_int_list, dest="Ks")
    _add(p, "--Ns", type=_int_list, dest="Ns")
    _add(p, "--Ms", type=_int_list, dest="Ms")
    _add(p, "--schemes", type=_str_list)

    p = sub.add_parser("infeasible", help="common-eigenvector test for N=3")
    common(p)
    _add(p, "--trials", type=int)
    _add(p, "--n-slots", dest="n_slots")
    _add(p, "--threshold", type=float)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags, then env seed."""
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config must be a flat JSON object")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, val in vars(args).items():
        if key in DEFAULTS and val is not None:
            cfg[key] = val
    if cfg["seed"] is None:
        env = os.environ.get("IA_DOF_SEED")
        try:
            cfg["seed"] = int(env) if env not in (None, "") else 0
        except ValueError as exc:
            raise ConfigError(f"IA_DOF_SEED must be an integer, got {env!r}") from exc
    if cfg["snr_hi"] <= cfg["snr_lo"] or cfg["snr_lo"] < 1e3:
        raise ConfigError("need snr_hi > snr_lo >= 1e3")
    return cfg


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_bytes(text.encode())
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _auto_scheme(N: int) -> str:
    if N == 1:
        return ZF_N1
    if N == 2:
        return IA_N2
    raise ConfigError(f"no finite-slot construction for N={N}")


def _failing(rows, tol):
    return [r for r in rows
            if not r["decodable"] or not experiments.slope_ok(r["slope"], r["dof_analytic"], tol)]


def _report_failures(rows, keys) -> None:
    for r in rows:
        sys.stderr.write("FAIL " + " ".join(f"{k}={r[k]}" for k in keys) + "\n")


def cmd_gen(cfg) -> int:
    n = 1 if cfg["n_slots"] in ("auto", None) else int(cfg["n_slots"])
    t = Topology(cfg["K"], cfg["N"], cfg["M"], n)
    c = generate(t, cfg["seed"])
    if cfg["out"]:
        c.save(cfg["out"])
    sys.stdout.write(_json(c.metadata()))
    return 0


def cmd_bound(cfg) -> int:
    t = Topology(cfg["K"], cfg["N"], cfg["M"])
    profile = None
    if cfg["tx"] or cfg["rx"]:
        tx = tuple(cfg["tx"] or [cfg["M"]] * t.K)
        rx = tuple(cfg["rx"] or [cfg["M"]] * t.K)
        profile = bounds.AntennaProfile(tx, rx)
    rep = bounds.pairwise_upper_bound(t, profile)
    _emit(_json(rep.to_dict()), cfg["out"])
    return 0


TABLE_FIELDS = ["K", "N", "ub_num", "ub_den", "lb_times_2", "marker", "nrs_class", "build"]


def table_rows(Kmax: int, Nmax: int, M: int) -> list:
    rows = []
    for K, N, rep in bounds.classification_grid(Kmax, Nmax, M):
        if rep is None:
            rows.append({"K": K, "N": N, "marker": bounds.INVALID})
            continue
        rows.append({"K": K, "N": N, "ub_num": rep.ub_num, "ub_den": rep.ub_den,
                     "lb_times_2": int(2 * rep.lb), "marker": rep.marker,
                     "nrs_class": rep.nrs_class})
    return rows


def cmd_table(cfg) -> int:
    M = cfg["M"]
    if cfg["format"] == "text":
        _emit(bounds.render_grid(bounds.classification_grid(cfg["Kmax"], cfg["Nmax"], M)), cfg["out"])
    else:
        _emit(experiments.to_csv(table_rows(cfg["Kmax"], cfg["Nmax"], M), TABLE_FIELDS), cfg["out"])
    return 0


def cmd_table1(cfg) -> int:
    rows = experiments.table1(cfg["Ks"], cfg["Ms"], cfg["Ns"], cfg["trials"], cfg["seed"],
                              cfg["tol"], cfg["snr_lo"], cfg["snr_hi"], cfg["jobs"])
    _emit(experiments.to_csv(rows, experiments.TABLE1_FIELDS), cfg["out"])
    bad = [r for r in rows if r["status"] != "PASS"]
    _report_failures(bad, ["N", "K", "M", "method", "variant", "muxg_claimed", "nrs_claimed"])
    return 1 if bad else 0


def cmd_scheme(cfg) -> int:
    scheme = cfg["scheme"] if cfg["scheme"] != "auto" else _auto_scheme(cfg["N"])
    Topology(cfg["K"], cfg["N"], cfg["M"])
    specs = [experiments.TrialSpec(cfg["K"], cfg["N"], cfg["M"], scheme, cfg["variant"],
                                   cfg["seed"], tr, cfg["snr_lo"], cfg["snr_hi"])
             for tr in range(cfg["trials"])]
    rows = experiments.run_trials(specs, cfg["jobs"])
    _emit(experiments.to_csv(rows, experiments.TRIAL_FIELDS), cfg["out"])
    if cfg["dump"]:
        _dump_trial(cfg, scheme)
    bad = _failing(rows, cfg["tol"])
    _report_failures(bad, ["seed", "trial", "K", "N", "M", "scheme", "variant"])
    return 1 if bad else 0


def _dump_trial(cfg, scheme: str) -> None:
    from .schemes import build, required_slots

    variant = experiments.resolve_variant(scheme, cfg["variant"], cfg["M"])
    t = Topology(cfg["K"], cfg["N"], cfg["M"], required_slots(scheme, variant, cfg["M"]))
    c = generate(t, cfg["seed"], 0)
    s = build(t, c, scheme, variant)
    stem = Path(cfg["dump"])
    c.save(stem.with_name(stem.name + ".channel"))
    stem.with_name(stem.name + ".scheme.json").write_text(_json(s.to_dict()))


def cmd_verify(cfg) -> int:
    if not cfg["channel"] or not cfg["scheme_file"]:
        raise ConfigError("verify needs --channel and --scheme-file")
    c = ChannelSet.load(cfg["channel"])
    s = Scheme.from_dict(json.loads(Path(cfg["scheme_file"]).read_text()))
    t = c.topology
    rep = evaluate(t, c, s, cfg["snr_lo"], cfg["snr_hi"])
    _emit(_json(rep.to_dict()), cfg["out"])
    if cfg["gnuplot"] and rep.all_decodable:
        lines = ["# snr_db sum_rate_bits_per_slot"]
        for db in np.arange(0.0, 81.0, 5.0):
            lines.append(f"{db:.1f} {sum_rate(t, c, s, 10 ** (db / 10)):.12g}")
        Path(cfg["gnuplot"]).write_text("\n".join(lines) + "\n")
    return 0 if rep.all_decodable else 1


def cmd_sweep(cfg) -> int:
    specs = []
    for N in cfg["Ns"]:
        for K in cfg["Ks"]:
            if N > K - 1:
                continue
            for M in cfg["Ms"]:
                for name in cfg["schemes"]:
                    if name == "auto":
                        if N > 2 or (N == 2 and K < 3):
                            continue
                        name = _auto_scheme(N)
                    if (name == ZF_N1 and N != 1) or (name == IA_N2 and (N != 2 or K < 3)) \
                            or (name == TDM and N > 2):
                        continue
                    specs.extend(experiments.TrialSpec(K, N, M, name, "auto", cfg["seed"], tr,
                                                       cfg["snr_lo"], cfg["snr_hi"])
                                 for tr in range(cfg["trials"]))
    rows = experiments.run_trials(specs, cfg["jobs"])
    _emit(experiments.to_csv(rows, experiments.TRIAL_FIELDS), cfg["out"])
    bad = _failing(rows, cfg["tol"])
    _report_failures(bad, ["seed", "trial", "K", "N", "M", "scheme", "variant"])
    return 1 if bad else 0


def cmd_infeasible(cfg) -> int:
    n = 1 if cfg["n_slots"] in ("auto", None) else int(cfg["n_slots"])
    t = Topology(cfg["K"], 3, cfg["M"], n)
    rep = infeasibility.common_eigvec_test(t, cfg["trials"], cfg["seed"])
    out = rep.to_dict()
    out.update({"K": t.K, "N": 3, "M": t.M, "n_slots": n, "seed": cfg["seed"],
                "threshold": cfg["threshold"], "build": experiments.BUILD_ID})
    _emit(_json(out), cfg["out"])
    return 0 if rep.min_cross_angle > cfg["threshold"] else 1


COMMANDS = {
    "gen": cmd_gen, "bound": cmd_bound, "table": cmd_table, "table1": cmd_table1,
    "scheme": cmd_scheme, "verify": cmd_verify, "sweep": cmd_sweep, "infeasible": cmd_infeasible,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (ConfigError, ValueError, TypeError) as exc:
        sys.stderr.write(f"ia_dof {args.command}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
