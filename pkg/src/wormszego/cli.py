"""Command-line front end.

Exit status: 0 on success, 1 when a verification or sweep reports a failing
check, 2 on a usage error (bad flag, bad config, parameter out of range).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, kernel, szego, verify
from .domain import HALF_PI, ApproachParams, BoundaryPoint, Component, DomainParams, InteriorPoint, validate_params
from .errors import WormError
from .grid import GridSpec, read_field_csv, read_frequency_csv, write_field_csv

DEFAULTS = {
    "beta": math.pi,
    "L": 20.0,
    "Nx": 4096,
    "Nj": 64,
    "tol": 1e-10,
    "seed": 0,
    "p_list": [1.5, 2.0, 3.0],
    "output_dir": ".",
    "y": 0.0,
    "s": 0.0,
}


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


@dataclass(frozen=True)
class RunConfig:
    params: DomainParams
    grid: GridSpec
    tol: float
    seed: int
    p_list: tuple[float, ...]
    output_dir: Path
    y: float = 0.0
    s: float = 0.0
    raw: dict = field(default_factory=dict, compare=False)


def _fmt(v: float) -> str:
    return repr(float(v))


# --- parsing -------------------------------------------------------------------------

def _p_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("configuration (flags override --config)")
    g.add_argument("--config", help="JSON file with keys " + ", ".join(DEFAULTS))
    g.add_argument("--beta", type=float)
    g.add_argument("--L", type=float, help="half-length of the x window")
    g.add_argument("--Nx", type=int, help="x samples (power of two)")
    g.add_argument("--Nj", type=int, help="modes run over -Nj..Nj")
    g.add_argument("--tol", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--p-list", type=_p_list, dest="p_list")
    g.add_argument("--output-dir", dest="output_dir")


def _boundary_inputs(p: argparse.ArgumentParser) -> None:
    for k in range(1, 5):
        p.add_argument(f"--phi{k}", help=f"CSV x,gamma,re,im for component E{k} (zero if omitted)")
    p.add_argument("--y", type=float, help="Im z1 of the interior slice")
    p.add_argument("--s", type=float, help="log|z2|^2 of the interior slice")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wormszego", description="Szegő projection on the worm domain D'_beta")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("kernel-eval", help="sum the Szegő kernel series with certified tail bounds")
    _common(p)
    p.add_argument("--w", required=True, help="interior point 'Re z1,Im z1,s[,gamma]'")
    p.add_argument("--zeta", required=True, help="boundary point 'E1..E4,x[,gamma]'")
    p.add_argument("--out", help="CSV file (default: standard output)")

    p = sub.add_parser("project", help="interior slice S_{y,s} of boundary data")
    _common(p)
    _boundary_inputs(p)

    p = sub.add_parser("boundary-project", help="boundary Szegő projector of boundary data")
    _common(p)
    _boundary_inputs(p)

    p = sub.add_parser("synthesize", help="Paley-Wiener boundary values from mode profiles")
    _common(p)
    p.add_argument("--g", required=True, help="CSV xi,j,re,im of the profiles g_j")

    p = sub.add_parser("verify", help="run invariant suites and emit a JSON report")
    _common(p)
    p.add_argument("--suite", default="all", help="one of: all, " + ", ".join(verify.SUITES))
    p.add_argument("--out", help="JSON file (default: standard output)")

    p = sub.add_parser("sweep", help="run one check across a range of beta")
    _common(p)
    p.add_argument("--beta-range", required=True, help="start:stop:count")
    p.add_argument("--check", required=True,
                   help="a suite name, a check name, or an alias (" + ", ".join(CHECK_ALIASES) + ")")
    p.add_argument("--no-plots", action="store_true")

    p = sub.add_parser("convergence", help="convergence and growth tables along the approach paths")
    _common(p)
    p.add_argument("--path", choices=("product", "coupled", "both"), default="both")
    p.add_argument("--k-min", type=int, default=2, help="first dyadic exponent")
    p.add_argument("--k-max", type=int, default=20, help="last dyadic exponent")
    p.add_argument("--growth-steps", type=int, default=5, help="(t, s) samples per axis; 0 skips")
    p.add_argument("--no-plots", action="store_true")
    return ap


def _load_config(args: argparse.Namespace) -> RunConfig:
    raw = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError("--config", str(e))
        if not isinstance(loaded, dict):
            raise UsageError("--config", "top level must be a JSON object")
        unknown = sorted(set(loaded) - set(DEFAULTS))
        if unknown:
            raise UsageError("--config", f"unknown keys {unknown}")
        raw.update(loaded)
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            raw[key] = v
    flag = lambda k: "--" + k.replace("_", "-") if k in ("p_list", "output_dir") else "--" + k  # noqa: E731
    try:
        params = validate_params(float(raw["beta"]))
    except (WormError, TypeError, ValueError) as e:
        raise UsageError("--beta", str(e))
    try:
        grid = GridSpec(float(raw["L"]), int(raw["Nx"]), int(raw["Nj"]))
    except (TypeError, ValueError) as e:
        key = "L" if "L " in str(e) else "Nx" if "Nx" in str(e) else "Nj"
        raise UsageError(flag(key), str(e))
    try:
        tol = float(raw["tol"])
    except (TypeError, ValueError):
        raise UsageError("--tol", f"not a number: {raw['tol']!r}")
    if not (tol > 0 and math.isfinite(tol)):
        raise UsageError("--tol", f"must be positive, got {raw['tol']!r}")
    p_list = tuple(float(p) for p in raw["p_list"])
    for p in p_list:
        if not (1.0 < p < math.inf):
            raise UsageError("--p-list", f"p must lie in (1, inf), got {p!r}")
    return RunConfig(params, grid, tol, int(raw["seed"]), p_list, Path(raw["output_dir"]),
                     float(raw["y"]), float(raw["s"]), raw)


def _floats(text: str, flag: str, n_min: int, n_max: int) -> list[str]:
    parts = [t.strip() for t in text.split(",")]
    if not (n_min <= len(parts) <= n_max):
        raise UsageError(flag, f"expected {n_min} to {n_max} comma-separated values, got {text!r}")
    return parts


def _parse_w(text: str) -> InteriorPoint:
    parts = _floats(text, "--w", 3, 4)
    try:
        v = [float(t) for t in parts]
    except ValueError:
        raise UsageError("--w", f"non-numeric entry in {text!r}")
    return InteriorPoint(complex(v[0], v[1]), v[2], v[3] if len(v) > 3 else 0.0)


def _parse_zeta(text: str) -> BoundaryPoint:
    parts = _floats(text, "--zeta", 2, 3)
    name = parts[0].upper()
    if name.isdigit() and 1 <= int(name) <= 4:
        name = f"E{name}"
    if name not in Component.__members__:
        raise UsageError("--zeta", f"component must be E1..E4, got {parts[0]!r}")
    try:
        x = float(parts[1])
        gamma = float(parts[2]) if len(parts) > 2 else 0.0
    except ValueError:
        raise UsageError("--zeta", f"non-numeric entry in {text!r}")
    return BoundaryPoint(Component[name], x, gamma)


def _read_boundary(args, cfg: RunConfig) -> szego.BoundaryData:
    comps = []
    for k in range(1, 5):
        path = getattr(args, f"phi{k}")
        if path is None:
            comps.append(cfg.grid.zeros())
            continue
        try:
            comps.append(read_field_csv(path, cfg.grid))
        except (OSError, ValueError, WormError) as e:
            raise UsageError(f"--phi{k}", str(e))
    if all(getattr(args, f"phi{k}") is None for k in range(1, 5)):
        raise UsageError("--phi1", "at least one of --phi1..--phi4 is required")
    return szego.BoundaryData(*comps)


def _outdir(cfg: RunConfig) -> Path:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    return cfg.output_dir


# --- commands ------------------------------------------------------------------------

def cmd_kernel_eval(args, cfg: RunConfig) -> int:
    w = _parse_w(args.w)
    zeta = _parse_zeta(args.zeta)
    try:
        w.validate(cfg.params)
    except WormError as e:
        raise UsageError("--w", str(e))
    res = kernel.szego_kernel(cfg.params, w, zeta, tol=cfg.tol, keep_terms=True)
    lines = ["j,re_kj,im_kj,partial_sum_re,partial_sum_im,tail_bound"]
    for t in res.terms:
        lines.append(",".join([str(t.j), _fmt(t.kj.real), _fmt(t.kj.imag), _fmt(t.partial_sum.real),
                               _fmt(t.partial_sum.imag), _fmt(t.tail_bound)]))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"value={_fmt(res.value.real)}{'+' if res.value.imag >= 0 else '-'}{_fmt(abs(res.value.imag))}j "
          f"modes={res.j_min}..{res.j_max} certified_error={_fmt(res.tail_bound)}", file=sys.stderr)
    return 0


def _slice(args, cfg: RunConfig) -> tuple[float, float]:
    y = cfg.y if args.y is None else args.y
    s = cfg.s if args.s is None else args.s
    if not cfg.params.contains(y, s):
        raise UsageError("--y", f"(y, s) = ({y!r}, {s!r}) is not inside D'_beta")
    return y, s


def cmd_project(args, cfg: RunConfig) -> int:
    y, s = _slice(args, cfg)
    phi = _read_boundary(args, cfg)
    out = _outdir(cfg) / "interior.csv"
    write_field_csv(out, szego.project_interior(cfg.params, phi, y, s))
    print(out)
    return 0


def _write_boundary(phi: szego.BoundaryData, cfg: RunConfig) -> None:
    d = _outdir(cfg)
    for k, f in enumerate(phi.components, start=1):
        write_field_csv(d / f"phi{k}.csv", f)
        print(d / f"phi{k}.csv")


def cmd_boundary_project(args, cfg: RunConfig) -> int:
    _write_boundary(szego.boundary_szego(cfg.params, _read_boundary(args, cfg)), cfg)
    return 0


def cmd_synthesize(args, cfg: RunConfig) -> int:
    try:
        F = read_frequency_csv(args.g, cfg.grid)
    except (OSError, ValueError, WormError) as e:
        raise UsageError("--g", str(e))
    g = {int(j): F.mode(int(j)) for j in cfg.grid.modes if np.any(F.mode(int(j)) != 0)}
    _write_boundary(szego.pw_worm_synthesize(cfg.params, szego.ModeCoefficients(g), cfg.grid), cfg)
    return 0


def _report(cfg: RunConfig, suite: str, records: list[dict]) -> dict:
    return {
        "beta": cfg.params.beta,
        "grid": {"L": cfg.grid.L, "Nx": cfg.grid.Nx, "Nj": cfg.grid.Nj},
        "seed": cfg.seed,
        "suite": suite,
        "all_passed": verify.all_passed(records),
        "checks": records,
    }


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise UsageError("--suite", f"unknown suite {args.suite!r}; choose all or one of {list(verify.SUITES)}")
    ctx = verify.Context(cfg.params, cfg.grid, cfg.seed, cfg.tol)
    records = verify.run_suite(args.suite, ctx)
    text = json.dumps(_report(cfg, args.suite, records), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if verify.all_passed(records) else 1


CHECK_ALIASES = {
    "idempotence": ("projector", ("projector.symbol_idempotent", "projector.idempotent")),
    "self-adjointness": ("projector", ("projector.symbol_hermitian", "projector.self_adjoint")),
    "factorization": ("factorization", None),
    "commutation": ("sobolev", None),
}


def _resolve_check(name: str) -> tuple[str, tuple[str, ...] | None]:
    if name in CHECK_ALIASES:
        return CHECK_ALIASES[name]
    if name == "all" or name in verify.SUITES:
        return name, None
    suite = name.split(".", 1)[0]
    if "." in name and suite in verify.SUITES:
        return suite, (name,)
    raise UsageError("--check", f"unknown check {name!r}")


def _beta_range(text: str) -> list[float]:
    parts = text.split(":")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError):
        raise UsageError("--beta-range", f"expected start:stop:count, got {text!r}")
    if len(parts) != 3 or n < 1:
        raise UsageError("--beta-range", f"expected start:stop:count with count >= 1, got {text!r}")
    betas = [float(b) for b in np.linspace(lo, hi, n)]
    for b in betas:
        if not b > HALF_PI:
            raise UsageError("--beta-range", f"every beta must exceed pi/2, got {b!r}")
    return betas


def cmd_sweep(args, cfg: RunConfig) -> int:
    suite, names = _resolve_check(args.check)
    betas = _beta_range(args.beta_range)
    rows = []
    for b in betas:
        ctx = verify.Context(validate_params(b), cfg.grid, cfg.seed, cfg.tol)
        recs = verify.run_suite(suite, ctx)
        if names is not None:
            recs = [r for r in recs if r["check_name"] in names]
            if not recs:
                raise UsageError("--check", f"no check named {args.check!r}")
        rows.extend((b, r) for r in recs)
    d = _outdir(cfg)
    header = "beta,check_name,status,measured,tolerance"
    lines = [header] + [f"{_fmt(b)},{r['check_name']},{r['status']},{_fmt(r['measured'])},{_fmt(r['tolerance'])}"
                        for b, r in rows]
    (d / "sweep.csv").write_text("\n".join(lines) + "\n")
    sys.stdout.write("\n".join(lines) + "\n")
    if not args.no_plots:
        from .plotting import plot_sweep
        for check in dict.fromkeys(r["check_name"] for _, r in rows):
            sel = [(b, r) for b, r in rows if r["check_name"] == check]
            plot_sweep([b for b, _ in sel], [r["measured"] for _, r in sel], sel[0][1]["tolerance"],
                       check=check, path=d / f"sweep_{check}.png")
    return 0 if all(r["status"] == "pass" for _, r in rows) else 1


def cmd_convergence(args, cfg: RunConfig) -> int:
    if args.k_min > args.k_max:
        raise UsageError("--k-min", "must not exceed --k-max")
    if args.growth_steps < 0:
        raise UsageError("--growth-steps", "must be non-negative")
    p = cfg.params
    phi = analysis.random_band_limited(cfg.grid, cfg.seed, 0, components=(0,))
    phi = phi * (1.0 / analysis.lp_boundary_norm(phi, 2))
    d = _outdir(cfg)
    ks = range(args.k_min, args.k_max + 1)
    plots = []
    if args.path in ("product", "both"):
        deltas = [2.0**-k for k in ks if 2.0**-k < min(HALF_PI, p.half_strip)]
        for q in cfg.p_list:
            prof = analysis.convergence_profile(p, phi, "product_path", q, deltas)
            name = f"convergence_product_p{q:g}"
            _write_pairs(d / f"{name}.csv", "delta,distance", prof)
            plots.append((prof, "delta", f"L^{q:g} distance", f"product path, beta={p.beta:g}", name))
    if args.path in ("coupled", "both"):
        ts = [p.beta - 2.0**-k for k in ks if 2.0**-k <= p.beta]
        prof = analysis.convergence_profile(p, phi, "coupled_path", 2.0, ts)
        gaps = [(p.beta - t, v) for t, v in prof]
        _write_pairs(d / "convergence_coupled.csv", "t,distance", prof)
        plots.append((gaps, "beta - t", "sup distance", f"coupled path, beta={p.beta:g}", "convergence_coupled"))
    growth = []
    if args.growth_steps:
        n = args.growth_steps
        ts = [HALF_PI * i / (n + 1) for i in range(n + 1)]
        ss = [p.half_strip * i / (n + 1) for i in range(n + 1)]
        aps = [ApproachParams(t, s) for t in ts for s in ss]
        field_eval = lambda y, s: szego.project_interior(p, phi, y, s)  # noqa: E731
        for q in cfg.p_list:
            gp = analysis.hp_growth(p, field_eval, q, aps)
            lines = ["t,s,value"] + [f"{_fmt(t)},{_fmt(s)},{_fmt(v)}" for t, s, v in gp.samples]
            (d / f"growth_p{q:g}.csv").write_text("\n".join(lines) + "\n")
            growth.append((q, gp))
    if not args.no_plots:
        from .plotting import plot_convergence, plot_growth
        for prof, xl, yl, title, name in plots:
            pts = [(x, v) for x, v in prof if v > 0]
            plot_convergence([x for x, _ in pts], [v for _, v in pts], xlabel=xl, ylabel=yl, title=title,
                             path=d / f"{name}.png")
        for q, gp in growth:
            plot_growth(gp.samples, title=f"growth functional, p={q:g}", path=d / f"growth_p{q:g}.png")
    for f in sorted(d.glob("convergence_*.csv")) + sorted(d.glob("growth_*.csv")):
        print(f)
    return 0


def _write_pairs(path: Path, header: str, pairs) -> None:
    path.write_text("\n".join([header] + [f"{_fmt(a)},{_fmt(b)}" for a, b in pairs]) + "\n")


COMMANDS = {
    "kernel-eval": cmd_kernel_eval,
    "project": cmd_project,
    "boundary-project": cmd_boundary_project,
    "synthesize": cmd_synthesize,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "convergence": cmd_convergence,
}


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2
    try:
        cfg = _load_config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as e:
        print(f"wormszego {args.command}: error: {e}", file=sys.stderr)
        return 2
    except WormError as e:
        print(f"wormszego {args.command}: error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
