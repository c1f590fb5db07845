"""Command-line front end: compute bound tables, run simulations, verify.

Commands
--------
bound-exp     exponential-level upper bounds over the (n, B) grid
bound-power   moment-level upper bounds (rows with B < e are SKIP markers)
bound-lower   single-observation and limiting-tail lower bounds
mc            Monte Carlo tail estimates only
verify        bounds + simulation + PASS/FAIL per cell (exit 1 on any FAIL)
sweep         one unified table: all families plus simulation columns
gls           norm and tail of a chosen generator family against the law

Output is CSV (columns fixed, floats at 15 significant digits, ``inf``
for infinities, absent fields empty) or an aligned-column pretty table.
Configuration may come from flags or a flat key=value file via
``--config``; flags win on conflict.  The ``SELFNORM_THREADS``
environment variable caps simulation worker threads.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

from . import bounds as bd
from . import gls as gl
from . import mc as mcmod
from .distributions import parse_distribution

__all__ = ["ConfigError", "RunConfig", "build_config", "main", "run"]

CSV_COLUMNS = ("dist", "n", "B", "family", "value", "optimizer",
               "theta_or_p_star", "n_star", "mc_point", "mc_ci_lo",
               "mc_ci_hi", "status")

COMMANDS = ("bound-exp", "bound-power", "bound-lower", "sweep", "mc",
            "verify", "gls")

_DEFAULTS = {
    "n": "1,4,16,64",
    "B": "0.25,0.5,1,1.5,2,e,3,5,10,20,50",
    "n-sup": None,
    "trials": "100000",
    "seed": "1",
    "kr": str(bd.DEFAULT_KR),
    "chunk-size": "8192",
    "confidence": "0.999",
    "output": None,
    "format": "csv",
    "family": None,
    "dist": None,
}


class ConfigError(ValueError):
    """Bad configuration; reported with the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class RunConfig:
    command: str
    distribution: str
    n_grid: list[int]
    B_grid: list[float]
    n_sup_range: tuple[int, int] | None
    trials: int
    seed: int
    kr_constant: float
    chunk_size: int
    confidence: float
    output_path: str | None
    format: str
    family: str | None = None


# -- parsing -------------------------------------------------------------------


def _parse_float(key: str, token: str) -> float:
    token = token.strip()
    if token == "e":
        return math.e
    try:
        return float(token)
    except ValueError:
        raise ConfigError(key, f"cannot parse {token!r} as a real") from None


def _parse_grid(key: str, text: str, integer: bool = False) -> list:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise ConfigError(key, "grid is empty")
    if integer:
        try:
            vals = [int(t) for t in items]
        except ValueError:
            raise ConfigError(key, f"cannot parse {text!r} as integers") from None
        if any(v < 1 for v in vals):
            raise ConfigError(key, "entries must be positive")
        return vals
    return [_parse_float(key, t) for t in items]


def _read_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError("config", f"line {lineno}: expected key=value, "
                                                f"got {line!r}")
                key, _, value = line.partition("=")
                out[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path!r}: {exc}") from None
    unknown = set(out) - set(_DEFAULTS)
    if unknown:
        raise ConfigError("config", f"unknown keys {sorted(unknown)}")
    return out


def build_config(command: str, flags: dict) -> RunConfig:
    """Merge flags over config-file values over built-in defaults."""
    file_vals = _read_config_file(flags["config"]) if flags.get("config") else {}

    def get(key: str):
        if flags.get(key.replace("-", "_")) is not None:
            return flags[key.replace("-", "_")]
        if key in file_vals:
            return file_vals[key]
        return _DEFAULTS[key]

    dist = get("dist")
    if not dist:
        raise ConfigError("dist", "a distribution spec is required")
    n_sup = None
    raw_sup = get("n-sup")
    if raw_sup:
        parts = str(raw_sup).split(":")
        if len(parts) != 2:
            raise ConfigError("n-sup", f"expected lo:hi, got {raw_sup!r}")
        lo, hi = (_parse_grid("n-sup", p, integer=True)[0] for p in parts)
        if lo > hi:
            raise ConfigError("n-sup", f"lo > hi in {raw_sup!r}")
        n_sup = (lo, hi)
    try:
        trials = int(get("trials"))
        seed = int(get("seed"))
        chunk = int(get("chunk-size"))
        kr = float(get("kr"))
        conf = float(get("confidence"))
    except ValueError as exc:
        raise ConfigError("trials/seed/chunk-size/kr/confidence", str(exc)) from None
    if trials < 1 and command in ("mc", "verify", "sweep"):
        raise ConfigError("trials", "must be >= 1 for simulation commands")
    fmt = get("format")
    if fmt not in ("csv", "pretty"):
        raise ConfigError("format", f"unknown format {fmt!r}")
    return RunConfig(
        command=command,
        distribution=str(dist),
        n_grid=_parse_grid("n", str(get("n")), integer=True),
        B_grid=_parse_grid("B", str(get("B"))),
        n_sup_range=n_sup,
        trials=trials,
        seed=seed,
        kr_constant=kr,
        chunk_size=max(1, chunk),
        confidence=conf,
        output_path=get("output"),
        format=fmt,
        family=get("family"),
    )


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfnorm",
        description="Tail bounds for self-normalized sums, verified by simulation.")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("--dist", help="rademacher | gaussian | uniform:a=<real> | "
                                      "discrete:v1:p1,... | empirical:<path>")
        p.add_argument("--n", help="comma-separated sample sizes")
        p.add_argument("--B", help="comma-separated thresholds ('e' allowed)")
        p.add_argument("--n-sup", dest="n_sup",
                       help="lo:hi range for sup-over-n rows")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--kr", type=float, help="Rosenthal constant")
        p.add_argument("--chunk-size", dest="chunk_size", type=int)
        p.add_argument("--confidence", type=float)
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "pretty"))
        p.add_argument("--config", help="flat key=value config file")
        if cmd == "gls":
            p.add_argument("--family",
                           help="psi:degenerate:r=<r> | psi:power:m=<m> | "
                                "phi:power:m=<m> | phi:natural")
    return parser


# -- formatting ----------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.15g}"
    return str(v)


def _point_row(dist_name: str, n_label: str, family: str, pt: bd.BoundPoint,
               est=None, status: str = "", margin=None, tightness=None) -> dict:
    opt = pt.optimizer
    return {
        "dist": dist_name,
        "n": n_label,
        "B": pt.B,
        "family": family,
        "value": pt.value,
        "optimizer": opt.get("objective"),
        "theta_or_p_star": opt.get("theta_star", opt.get("p_star")),
        "n_star": opt.get("n_star"),
        "mc_point": est.point if est else None,
        "mc_ci_lo": est.ci_lo if est else None,
        "mc_ci_hi": est.ci_hi if est else None,
        "status": status,
        "margin": margin,
        "tightness": tightness,
    }


def _skip_row(dist_name: str, n_label: str, family: str, B: float) -> dict:
    row = _point_row(dist_name, n_label, family, bd.BoundPoint(B, math.nan))
    row["value"] = None
    row["status"] = "SKIP"
    return row


def _write_csv(rows: list[dict]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _write_pretty(rows: list[dict]) -> str:
    cols = CSV_COLUMNS + ("margin", "tightness")
    table = [[_fmt(row.get(c)) for c in cols] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in table)) if table else len(c)
              for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    for r in table:
        out.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(out) + "\n"


# -- command bodies ------------------------------------------------------------


def _sorted_B(config: RunConfig) -> list[float]:
    return sorted(config.B_grid)


def _bound_rows(config: RunConfig, dist, families: tuple[str, ...],
                with_skip: bool = True) -> list[dict]:
    rows = []
    for n in sorted(set(config.n_grid)):
        if bd.EXP_LEVEL in families:
            for pt in bd.exp_curve(dist, n, config.B_grid).points:
                rows.append(_point_row(dist.name, str(n), bd.EXP_LEVEL, pt))
        if bd.POWER_LEVEL in families:
            for B in _sorted_B(config):
                if B < math.e:
                    if with_skip:
                        rows.append(_skip_row(dist.name, str(n), bd.POWER_LEVEL, B))
                    continue
                pt = bd._power_tail_point(dist, n, B, config.kr_constant)
                rows.append(_point_row(dist.name, str(n), bd.POWER_LEVEL, pt))
    if config.n_sup_range is not None:
        label = _sup_label(config.n_sup_range)
        if bd.EXP_LEVEL in families:
            for pt in bd.exp_sup_curve(dist, config.n_sup_range,
                                       config.B_grid).points:
                rows.append(_point_row(dist.name, label, bd.EXP_LEVEL, pt))
        if bd.POWER_LEVEL in families:
            for pt in bd.power_sup_curve(dist, config.n_sup_range, config.B_grid,
                                         config.kr_constant).points:
                rows.append(_point_row(dist.name, label, bd.POWER_LEVEL, pt))
    return rows


def _sup_label(n_range: tuple[int, int]) -> str:
    return f"sup({n_range[0]}..{n_range[1]})"


def _lower_rows(config: RunConfig, dist) -> list[dict]:
    rows = []
    for pt in bd.lower_q1_curve(dist, config.B_grid).points:
        rows.append(_point_row(dist.name, "1", bd.LOWER_Q1, pt))
    for pt in bd.lower_clt_curve(config.B_grid).points:
        rows.append(_point_row(dist.name, "1", bd.LOWER_CLT, pt))
    return rows


def _mc_rows(config: RunConfig, dist) -> list[dict]:
    rows = []
    for n in sorted(set(config.n_grid)):
        cfg = mcmod.MCConfig(n, config.trials, config.seed, config.chunk_size,
                             config.confidence)
        for est in mcmod.empirical_tail(dist, cfg, _sorted_B(config)):
            row = _point_row(dist.name, str(n), "MC", bd.BoundPoint(est.B, math.nan),
                             est=est)
            row["value"] = None
            rows.append(row)
    return rows


def _verification_curves(config: RunConfig, dist) -> list[bd.BoundCurve]:
    curves = [bd.exp_curve(dist, n, config.B_grid)
              for n in sorted(set(config.n_grid))]
    curves += [bd.power_curve(dist, n, config.B_grid, config.kr_constant)
               for n in sorted(set(config.n_grid))]
    if config.n_sup_range is not None:
        curves.append(bd.exp_sup_curve(dist, config.n_sup_range, config.B_grid))
        curves.append(bd.power_sup_curve(dist, config.n_sup_range, config.B_grid,
                                         config.kr_constant))
    if 1 in config.n_grid:
        curves.append(bd.lower_q1_curve(dist, config.B_grid))
        curves.append(bd.lower_clt_curve(config.B_grid))
    return curves


def _verify_rows(config: RunConfig, dist) -> tuple[list[dict], bool]:
    curves = _verification_curves(config, dist)
    cfg = mcmod.MCConfig(max(config.n_grid), config.trials, config.seed,
                         config.chunk_size, config.confidence)
    report = mcmod.verify_bounds(dist, config.n_grid, config.B_grid, cfg, curves)
    rows = []
    for r in report.rows:
        rows.append(_point_row(r.dist, r.n_label, r.family, r.point, est=r.estimate,
                               status=r.status, margin=r.margin,
                               tightness=r.tightness))
    for n in sorted(set(config.n_grid)):
        for B in _sorted_B(config):
            if B < math.e:
                rows.append(_skip_row(dist.name, str(n), bd.POWER_LEVEL, B))
    return rows, report.all_pass


def _parse_family_param(family: str, tag: str) -> float:
    prefix, _, raw = family.rpartition("=")
    if not prefix.endswith(tag):
        raise ConfigError("family", f"expected '{tag}=<real>' in {family!r}")
    try:
        return float(raw)
    except ValueError:
        raise ConfigError("family", f"bad value {raw!r} in {family!r}") from None


def _gls_rows(config: RunConfig, dist) -> list[dict]:
    family = config.family
    if not family:
        raise ConfigError("family", "the gls command needs --family")
    rows = []
    if family.startswith("psi:"):
        if family.startswith("psi:degenerate:"):
            psi = gl.degenerate_psi(_parse_family_param(family, "r"))
        elif family.startswith("psi:power:"):
            psi = gl.power_psi(_parse_family_param(family, "m"))
        else:
            raise ConfigError("family", f"unknown generator {family!r}")
        norm = gl.gls_norm(dist.lp_norm, psi)
        rows.append({"dist": dist.name, "family": "GlsNorm", "value": norm,
                     "status": ""})
        for B in _sorted_B(config):
            value = gl.gls_tail_bound(psi, norm, B)
            rows.append({"dist": dist.name, "B": B, "family": "GlsTail",
                         "value": value, "status": ""})
        return rows
    if family.startswith("phi:"):
        if family.startswith("phi:power:"):
            phi = gl.power_phi(_parse_family_param(family, "m"))
        elif family == "phi:natural":
            phi = gl.natural_phi(dist)
        else:
            raise ConfigError("family", f"unknown majorant {family!r}")
        norm = gl.bphi_norm(lambda lam: dist.log_mgf2(lam, 0.0), phi)
        rows.append({"dist": dist.name, "family": "BphiNorm", "value": norm,
                     "status": ""})
        for B in _sorted_B(config):
            value = gl.bphi_tail_bound(phi, norm, B)
            rows.append({"dist": dist.name, "B": B, "family": "BphiTail",
                         "value": value, "status": ""})
        return rows
    raise ConfigError("family", f"unknown family {family!r}")


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        dist = parse_distribution(config.distribution)
    except ValueError as exc:
        raise ConfigError("dist", str(exc)) from None

    if config.command == "sweep" and config.n_sup_range is None:
        config.n_sup_range = (1, 4096)

    all_pass = True
    if config.command == "bound-exp":
        rows = _bound_rows(config, dist, (bd.EXP_LEVEL,))
    elif config.command == "bound-power":
        rows = _bound_rows(config, dist, (bd.POWER_LEVEL,))
    elif config.command == "bound-lower":
        rows = _lower_rows(config, dist)
    elif config.command == "mc":
        rows = _mc_rows(config, dist)
    elif config.command in ("verify", "sweep"):
        rows, all_pass = _verify_rows(config, dist)
    elif config.command == "gls":
        rows = _gls_rows(config, dist)
    else:
        raise ConfigError("command", f"unknown command {config.command!r}")

    text = _write_csv(rows) if config.format == "csv" else _write_pretty(rows)
    if config.output_path:
        with open(config.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if config.command == "verify" and not all_pass:
        return 1
    return 0


def main(argv: list[str] | None = None) -> None:
    parser = _make_parser()
    ns = parser.parse_args(argv)
    flags = vars(ns)
    command = flags.pop("command")
    try:
        config = build_config(command, flags)
        status = run(config)
    except ConfigError as exc:
        print(f"selfnorm: configuration error: {exc}", file=sys.stderr)
        sys.exit(2)
    sys.exit(status)


if __name__ == "__main__":
    main()
