"""Command-line front end: config parsing, dispatch, CSV output.

Commands mirror the library surface: single campaigns, densification
sweeps, named parameter sweeps, per-link rate curves, the closed-form
versus Monte Carlo validation suite, and synthetic topology generation.
Every CSV carries a comment header with the effective config, its hash,
and the master seed, so any run can be reproduced from its output alone.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import (ConfigError, RunConfig, build_topology, config_sha256,
                     parse_config, provenance_lines)
from .experiments import (cm_ratio_of, densification_sweep, per_link_rate_curves,
                          resolve_dr_override, run_campaign, sweep)
from .outage import run_validation
from .topology import generate_topology, save_coordinates, scale_topology

CAMPAIGN_COLUMNS = ("cm_ratio", "d_r_km", "epsilon_bar", "halfwidth95",
                    "epsilon_bar_no_hop", "halfwidth95_no_hop",
                    "code_rate_bpcu", "throughput_bpcu", "ase_bpcu_km2",
                    "n_trials", "mean_interferers", "mean_denied")
DENSIFY_COLUMNS = ("cm_ratio", "d_r_km", "epsilon_bar", "halfwidth95",
                   "epsilon_bar_no_hop", "halfwidth95_no_hop",
                   "code_rate_bpcu", "throughput_bpcu", "ase_bpcu_km2",
                   "n_trials")
SWEEP_COLUMNS = ("axis", "value") + DENSIFY_COLUMNS
LINKS_COLUMNS = ("link", "mobile_index", "beta_db", "code_rate_bpcu",
                 "epsilon")
VALIDATE_COLUMNS = ("profile", "n_interferers", "m0", "gamma0",
                    "eps_closed_form", "eps_monte_carlo", "stderr",
                    "abs_diff", "within_4_stderr")


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _csv_text(header_lines, columns, rows) -> str:
    out = [f"# {line}" if not line.startswith("#") else line
           for line in header_lines]
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(_fmt(row[c]) for c in columns))
    return "\n".join(out) + "\n"


def _header(command, cfg: RunConfig, seed, extra=None):
    lines = [f"fhuplink {command}"]
    for key, val in (extra or {}).items():
        lines.append(f"{key} = {val}")
    lines.append(f"seed = {seed}")
    lines.append(f"config_sha256 = {config_sha256(cfg)}")
    lines.append("config:")
    lines.extend(f"  {ln}" for ln in provenance_lines(cfg))
    return lines


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_config(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else RunConfig()
    updates = {}
    env_seed = os.environ.get("FHUPLINK_SEED")
    env_threads = os.environ.get("FHUPLINK_THREADS")
    if env_seed is not None:
        updates["seed"] = int(env_seed)
    if env_threads is not None:
        updates["threads"] = int(env_threads)
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "threads", None) is not None:
        updates["threads"] = args.threads
    if getattr(args, "trials", None) is not None:
        updates["trials"] = args.trials
    return cfg.replace(**updates) if updates else cfg


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _add_run_options(p, trials=True):
    p.add_argument("--config", help="run-config file (defaults when omitted)")
    p.add_argument("--seed", type=int, help="master seed override")
    p.add_argument("--threads", type=int, help="worker process count")
    if trials:
        p.add_argument("--trials", type=int, help="trials per campaign point")
    p.add_argument("--out", help="output CSV path (stdout when omitted)")


def cmd_campaign(args) -> int:
    cfg = _load_config(args)
    topo = build_topology(cfg)
    extra = {}
    if args.cm is not None:
        base_cm = cm_ratio_of(topo, cfg.density_per_km2)
        topo = scale_topology(topo, (base_cm / args.cm) ** 0.5)
        extra["cm"] = _fmt(args.cm)
    cm = cm_ratio_of(topo, cfg.density_per_km2)
    override = resolve_dr_override(cfg, cm, sweep_default="realized")
    stats, records = run_campaign(topo, cfg, d_r_override=override)
    row = {
        "cm_ratio": cm, "d_r_km": stats.mean_d_r,
        "epsilon_bar": stats.epsilon_bar, "halfwidth95": stats.halfwidth95,
        "epsilon_bar_no_hop": stats.epsilon_bar_no_hop,
        "halfwidth95_no_hop": stats.halfwidth95_no_hop,
        "code_rate_bpcu": stats.code_rate,
        "throughput_bpcu": stats.throughput, "ase_bpcu_km2": stats.ase,
        "n_trials": stats.n_trials,
        "mean_interferers": stats.mean_interferers,
        "mean_denied": stats.mean_denied,
    }
    _emit(_csv_text(_header("campaign", cfg, cfg.seed, extra),
                    CAMPAIGN_COLUMNS, [row]), args.out)
    return 0


def cmd_densify(args) -> int:
    cfg = _load_config(args)
    ratios = _float_list(args.ratios) if args.ratios else None
    topo = build_topology(cfg)
    rows = densification_sweep(topo, cfg, ratios)
    extra = {"ratios": ",".join(_fmt(r) for r in (ratios or cfg.cm_ratios))}
    _emit(_csv_text(_header("densify", cfg, cfg.seed, extra),
                    DENSIFY_COLUMNS, rows), args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    values = _float_list(args.values) if args.axis != "preset" \
        else [v.strip() for v in args.values.split(",") if v.strip()]
    ratios = _float_list(args.ratios) if args.ratios else None
    rows = sweep(cfg, args.axis, values, ratios=ratios)
    extra = {"axis": args.axis, "values": args.values}
    _emit(_csv_text(_header("sweep", cfg, cfg.seed, extra),
                    SWEEP_COLUMNS, rows), args.out)
    return 0


def cmd_links(args) -> int:
    cfg = _load_config(args)
    topo = build_topology(cfg)
    if args.cm is not None:
        base_cm = cm_ratio_of(topo, cfg.density_per_km2)
        topo = scale_topology(topo, (base_cm / args.cm) ** 0.5)
    beta_grid = _float_list(args.beta_db)
    rows = per_link_rate_curves(topo, cfg, args.links, beta_grid)
    extra = {"links": args.links, "beta_db": args.beta_db}
    if args.cm is not None:
        extra["cm"] = _fmt(args.cm)
    _emit(_csv_text(_header("links", cfg, cfg.seed, extra),
                    LINKS_COLUMNS, rows), args.out)
    return 0


def cmd_validate(args) -> int:
    cfg = _load_config(args)
    records, all_ok = run_validation(args.profiles, args.samples, cfg.seed,
                                     beta=cfg.beta_linear)
    n_ok = sum(r["within_4_stderr"] for r in records)
    for r in records:
        status = "ok" if r["within_4_stderr"] else "FAIL"
        print(f"profile {r['profile']:3d}: n={r['n_interferers']:2d} "
              f"m0={r['m0']} gamma0={r['gamma0']:.3e} "
              f"closed={r['eps_closed_form']:.6f} "
              f"mc={r['eps_monte_carlo']:.6f} se={r['stderr']:.2e} "
              f"{status}")
    print(f"{n_ok}/{len(records)} within 4 standard errors")
    if args.out:
        _emit(_csv_text(_header("validate", cfg, cfg.seed,
                                {"profiles": args.profiles,
                                 "samples": args.samples}),
                        VALIDATE_COLUMNS, records), args.out)
    return 0 if all_ok else 1


def cmd_gen_topo(args) -> int:
    rng = np.random.default_rng(args.seed)
    topo = generate_topology(args.kind, args.count, args.extent, rng)
    save_coordinates(args.out, topo.bs_xy,
                     comment=(f"fhuplink gen-topo kind={args.kind} "
                              f"count={args.count} extent={args.extent} "
                              f"seed={args.seed}"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fhuplink",
        description="Frequency-hopping mmWave uplink outage/ASE simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("campaign", help="average outage over one topology")
    _add_run_options(p)
    p.add_argument("--cm", type=float,
                   help="rescale the topology to this BS-per-mobile ratio")
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("densify", help="sweep the BS-per-mobile ratio")
    _add_run_options(p)
    p.add_argument("--ratios", help="comma-separated C/M ratios")
    p.set_defaults(func=cmd_densify)

    p = sub.add_parser("sweep", help="sweep a named parameter")
    _add_run_options(p)
    p.add_argument("--axis", required=True, help="config parameter to sweep")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--ratios", help="comma-separated C/M ratios")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("links", help="per-uplink outage vs code rate")
    _add_run_options(p, trials=False)
    p.add_argument("--links", type=int, default=8,
                   help="number of sampled uplinks")
    p.add_argument("--beta-db", default="-3,0,3,6,9", dest="beta_db",
                   help="comma-separated SINR thresholds in dB")
    p.add_argument("--cm", type=float,
                   help="rescale the topology to this BS-per-mobile ratio")
    p.set_defaults(func=cmd_links)

    p = sub.add_parser("validate",
                       help="closed form vs Monte Carlo agreement report")
    _add_run_options(p, trials=False)
    p.add_argument("--profiles", type=int, default=50)
    p.add_argument("--samples", type=int, default=100000)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen-topo", help="write a synthetic BS coordinate file")
    p.add_argument("--kind", default="uniform-random",
                   choices=["uniform-random", "grid"])
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--extent", type=float, required=True,
                   help="square side in km")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_topo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError, RuntimeError) as exc:
        print(f"fhuplink {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
