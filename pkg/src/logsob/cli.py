"""``logsob`` command-line front end.

Every subcommand is driven by a :class:`RunConfig`, which can come from flags
or from a JSON file (``--config``) and is embedded in every artifact written.
Exit codes: 0 success, 1 acceptance failure, 2 invalid parameters,
3 violated invariant, 4 unwritable output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import io
from .acceptance import Settings, verify_all
from .errors import InvariantError, ParameterError
from .experiments import (ExperimentReport, counterexample_suite, embedding_constant,
                          frac_embedding_constant, gradient_log_bound, immersion_monotonicity,
                          indicator_scaling, interpolation_constant, local_diff_decay,
                          truncated_immersion_check, weak_embedding_constant)
from .grid import AnalyticFunction, Domain, lp_norm, sample
from .maximal import (constant_witness, frac_functional, hajlasz_check, holder_pair_ratio,
                      lipschitz_witness, lusin_functional, lusin_pair_ratio, make_pairs, phi_star)
from .quadrature import FOURIER_KERNEL_RADIUS, LOG_KERNEL_RADIUS
from .seminorms import (SeminormParams, default_scheme, frac_inner_radius, frac_outer_radius,
                        truncated_q_seminorm, w_seminorm, w_tail_bound, w_tail_exact, x_seminorm)
from .spectral import moment_rows, moment_scheme, spectral_x_norm, spectrum_rows

EXPERIMENTS = ("indicator-scaling", "embedding", "weak-embedding", "frac-embedding", "interpolation",
               "immersion", "truncated-immersion", "gradient-bound", "local-diff", "counterexample")
SUBCOMMANDS = ("seminorm", "spectral", "kernel-moment", "lusin", "phistar", "hajlasz", "experiment",
               "verify-all")

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_INVARIANT, EXIT_IO = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    """Everything needed to replay a run."""

    subcommand: str
    function: dict | None = None                   # {"kind": ..., "params": {...}}
    domain: dict = field(default_factory=dict)     # d, L, n (missing = subcommand default)
    scheme: dict = field(default_factory=dict)     # r_min, n_r, n_theta (None = default)
    params: dict = field(default_factory=dict)     # gamma, p, s, q
    seed: int = 0
    output_dir: str = "logsob-out"
    threads: int = 1
    options: dict = field(default_factory=dict)    # subcommand-specific extras

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ParameterError(f"unknown subcommand {self.subcommand!r}", "known subcommand")
        if not (isinstance(self.threads, int) and self.threads >= 1):
            raise ParameterError("threads must be a positive integer", "threads >= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        extra = set(data) - set(known)
        if extra:
            raise ParameterError(f"unknown config keys: {sorted(extra)}", "known config keys")
        return cls(**known)

    def to_json(self) -> str:
        return io.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    # -- typed views --------------------------------------------------------

    def dom(self, n: int = 1024, L: float = 1.0) -> Domain:
        return Domain(int(self.domain.get("d", 1)), float(self.domain.get("L", L)),
                      int(self.domain.get("n", n)))

    def analytic(self, default: AnalyticFunction | None = None) -> AnalyticFunction:
        if self.function is None:
            if default is None:
                raise ParameterError("a function spec is required", "function given")
            return default
        return AnalyticFunction.from_dict(self.function)

    def seminorm_params(self, **defaults) -> SeminormParams:
        merged = {**defaults, **{k: v for k, v in self.params.items() if v is not None}}
        return SeminormParams.from_dict(merged)

    def radial_scheme(self, dom: Domain, R: float, r_min: float | None = None):
        sc = self.scheme
        return default_scheme(dom, R=R, r_min=sc.get("r_min") or r_min,
                              n_r=int(sc.get("n_r") or 128), n_theta=sc.get("n_theta"))


# ---------------------------------------------------------------------------
# subcommand runners: each returns (report dict, {csv name: (header, rows)})


def _scheme_dict(s):
    return s.to_dict()


def run_seminorm(cfg: RunConfig):
    dom = cfg.dom()
    f = sample(cfg.analytic(), dom)
    kind = cfg.options.get("kind", "x")
    out = {"kind": kind, "lp_norm": None}
    if kind == "x":
        P = cfg.seminorm_params(gamma=0.5, p=1.0)
        sc = cfg.radial_scheme(dom, LOG_KERNEL_RADIUS)
        v = x_seminorm(f, P, sc, allow_gamma_zero=bool(cfg.options.get("allow_gamma_zero")),
                       threads=cfg.threads)
        out.update(value=v, value_p=v ** P.p, scheme=_scheme_dict(sc), tail_bound=None)
        if P.gamma == 0:
            out["note"] = "gamma = 0 is outside the defining range gamma > 0"
    elif kind == "w":
        P = cfg.seminorm_params(s=0.5, p=1.0)
        sc = cfg.radial_scheme(dom, frac_outer_radius(dom), frac_inner_radius(dom))
        v = w_seminorm(f, P, sc, threads=cfg.threads)
        out.update(value=v, value_p=v ** P.p, scheme=_scheme_dict(sc),
                   tail_bound=w_tail_bound(f, P, sc.R), tail_exact=w_tail_exact(f, P, sc.R))
    elif kind == "truncated":
        P = cfg.seminorm_params(p=1.0, q=1.0)
        sc = cfg.radial_scheme(dom, LOG_KERNEL_RADIUS)
        v = truncated_q_seminorm(f, P, sc, threads=cfg.threads)
        out.update(value=v, scheme=_scheme_dict(sc), tail_bound=None)
    else:
        raise ParameterError(f"unknown seminorm kind {kind!r}", "kind in {x, w, truncated}")
    out["params"] = P.to_dict()
    out["lp_norm"] = lp_norm(f, P.p)
    return out, {}


def run_spectral(cfg: RunConfig):
    f = sample(cfg.analytic(), cfg.dom())
    gamma = cfg.seminorm_params(gamma=0.5).gamma
    pad = int(cfg.options.get("pad", 2))
    out = {"gamma": gamma, "pad": pad, "l2_sq": lp_norm(f, 2) ** 2,
           "spectral_x_norm_sq": spectral_x_norm(f, gamma, pad)}
    header = [*(f"xi_{i + 1}" for i in range(f.domain.d)), "power", "log_weight"]
    return out, {"spectrum": (header, list(spectrum_rows(f, gamma, pad)))}


def run_kernel_moment(cfg: RunConfig):
    gamma = cfg.seminorm_params(gamma=0.5).gamma
    xi = cfg.options.get("xi") or [0.1, 0.5, 1, 5, 10, 20, 100, 1000, 10000]
    xi = [float(x) for x in xi]
    R = float(cfg.options.get("radius", FOURIER_KERNEL_RADIUS))
    sc = moment_scheme(max(xi), 1, R)
    rows = moment_rows(xi, gamma, sc)
    out = {"gamma": gamma, "radius": R, "scheme": sc.to_dict(), "values": [r[1] for r in rows], "xi": xi}
    return out, {"kernel_moment": (["xi_abs", "I", "I_over_xi2", "I_over_log2gamma"], rows)}


def _profile_rows(pf):
    return (["x_" + str(i + 1) for i in range(pf.domain.d)] + ["value"], list(pf.as_sampled().csv_rows()))


def run_lusin(cfg: RunConfig):
    dom = cfg.dom()
    f = sample(cfg.analytic(), dom)
    pairs = make_pairs(dom, int(cfg.options.get("n_pairs", 10_000)), cfg.seed)
    kind = cfg.options.get("kind", "lusin")
    if kind == "lusin":
        P = cfg.seminorm_params(gamma=0.5, p=1.0)
        sc = cfg.radial_scheme(dom, LOG_KERNEL_RADIUS)
        pf = lusin_functional(f, P, sc)
        r = lusin_pair_ratio(f, P, sc, pairs, pf)
    elif kind == "holder":
        P = cfg.seminorm_params(s=0.5, p=1.0)
        sc = cfg.radial_scheme(dom, frac_outer_radius(dom), frac_inner_radius(dom))
        pf = frac_functional(f, P, sc)
        r = holder_pair_ratio(f, P, sc, pairs, pf)
    else:
        raise ParameterError(f"unknown lusin kind {kind!r}", "kind in {lusin, holder}")
    out = {"kind": kind, "params": P.to_dict(), "scheme": sc.to_dict(), "pairs": pairs.to_dict(),
           "ratio": r.ratio, "skipped": r.skipped, "violations": r.violations, "used": r.used,
           "functional_lp_norm": pf.lp_norm(P.p)}
    return out, {"profile": _profile_rows(pf)}


def run_phistar(cfg: RunConfig):
    f = sample(cfg.analytic(), cfg.dom())
    P = cfg.seminorm_params(s=1.0, q=1.0, p=1.0)
    pf = phi_star(f, P.s, P.q)
    out = {"params": P.to_dict(), "lp_norm": pf.lp_norm(P.p), "max": float(np.max(pf.values))}
    return out, {"profile": _profile_rows(pf)}


def run_hajlasz(cfg: RunConfig):
    dom = cfg.dom()
    f = sample(cfg.analytic(), dom)
    s = cfg.seminorm_params(s=1.0).s
    if "witness_K" in cfg.options:
        w = lipschitz_witness(dom, float(cfg.options["witness_K"]))
    else:
        w = constant_witness(dom, float(cfg.options.get("witness_const", 1.0)))
    pairs = make_pairs(dom, int(cfg.options.get("n_pairs", 10_000)), cfg.seed)
    r = hajlasz_check(f, w, s, pairs)
    return {"s": s, "ratio": r.ratio, "certified": r.violations == 0 and r.ratio <= 1.0,
            "skipped": r.skipped, "violations": r.violations, "used": r.used, "clamped": r.clamped,
            "pairs": pairs.to_dict()}, {}


def _experiment(cfg: RunConfig) -> ExperimentReport:
    name = cfg.options.get("name")
    dom = cfg.dom()
    gauss = AnalyticFunction("gaussian", {"sigma": 0.25})
    if name == "indicator-scaling":
        P = cfg.seminorm_params(gamma=0.5, p=1.0)
        r_list = cfg.options.get("r_list") or (1 / 16, 1 / 32, 1 / 64, 1 / 128)
        dom = cfg.dom(n=4096)
        return indicator_scaling(P.gamma, P.p, r_list, d=dom.d, n=dom.n, L=dom.L, threads=cfg.threads)
    if name in ("embedding", "weak-embedding"):
        P = cfg.seminorm_params(gamma=0.5, p=2.0)
        default = gauss if name == "embedding" else AnalyticFunction(
            "truncated_power", {"alpha": 1.0 / P.p, "cap": 16.0, "radius": 0.5})
        fn = embedding_constant if name == "embedding" else weak_embedding_constant
        return fn(cfg.analytic(default), P.gamma, P.p, dom=dom, refine=True)
    if name == "frac-embedding":
        P = cfg.seminorm_params(s=0.25, p=2.0)
        return frac_embedding_constant(cfg.analytic(gauss), P.s, P.p, dom=dom, refine=True)
    if name == "interpolation":
        P = cfg.seminorm_params(gamma=0.5, s=0.5, p=2.0)
        return interpolation_constant(cfg.analytic(AnalyticFunction("trig_poly", {"seed": 0, "degree": 16})),
                                      P.gamma, P.s, P.p, dom=dom, refine=True)
    if name == "immersion":
        P = cfg.seminorm_params(s=0.5, p=2.0)
        gl = cfg.options.get("gamma_list") or [0.25, 0.5, 1.0]
        return immersion_monotonicity(cfg.analytic(gauss), gl, P.s, P.p, dom=dom)
    if name == "truncated-immersion":
        P = cfg.seminorm_params(s=1.0, p=1.0, q=1.0)
        g = cfg.analytic(gauss)
        K = float(np.max(np.sqrt(np.sum(g.gradient(dom.points()) ** 2, axis=-1))))
        w = lipschitz_witness(dom, float(cfg.options.get("witness_K", K)))
        return truncated_immersion_check(g, w, P.s, P.p, P.q, dom=dom,
                                         pairs=make_pairs(dom, seed=cfg.seed))
    if name == "gradient-bound":
        P = cfg.seminorm_params(p=1.0)
        return gradient_log_bound(cfg.analytic(gauss), dom, P.p, pairs=make_pairs(dom, seed=cfg.seed))
    if name == "local-diff":
        P = cfg.seminorm_params(p=1.0)
        r_list = cfg.options.get("r_list") or (1 / 4, 1 / 8, 1 / 16, 1 / 32, 1 / 64)
        return local_diff_decay(cfg.analytic(gauss), P.p, r_list, d=dom.d, L=dom.L, seed=cfg.seed)
    if name == "counterexample":
        P = cfg.seminorm_params(p=1.0)
        M_list = cfg.options.get("M_list") or (2, 4, 8, 16, 32)
        dom = cfg.dom(n=2048, L=2.0)
        return counterexample_suite(M_list, P.p, n=dom.n, L=dom.L)
    raise ParameterError(f"unknown experiment {name!r}", f"experiment in {{{', '.join(EXPERIMENTS)}}}")


def run_experiment(cfg: RunConfig):
    rep = _experiment(cfg)
    rep.seed = cfg.seed
    csvs = {stem: (p["header"], p["rows"]) for stem, p in rep.plots.items()}
    return rep.to_dict(), csvs


RUNNERS = {"seminorm": run_seminorm, "spectral": run_spectral, "kernel-moment": run_kernel_moment,
           "lusin": run_lusin, "phistar": run_phistar, "hajlasz": run_hajlasz, "experiment": run_experiment}


def _stem(cfg: RunConfig) -> str:
    if cfg.subcommand == "experiment":
        return str(cfg.options.get("name"))
    return cfg.subcommand


def run(cfg: RunConfig, stamp: bool = False, svg: bool = False, echo=print) -> int:
    """Execute ``cfg`` and write its artifacts; returns the exit status."""
    outdir = Path(cfg.output_dir)
    if cfg.subcommand == "verify-all":
        n = cfg.options.get("n_override")
        summary = verify_all(Settings(None if n is None else int(n), cfg.seed, cfg.threads), outdir, echo=echo)
        echo(summary.table())
        return EXIT_OK if summary.ok else EXIT_FAIL
    report, csvs = RUNNERS[cfg.subcommand](cfg)
    report = dict(report)
    report["config"] = cfg.to_dict()
    report.setdefault("schema_version", 1)
    report["timestamp"] = datetime.now(timezone.utc).isoformat() if stamp else None
    stem = _stem(cfg)
    for name, (header, rows) in csvs.items():
        io.write_csv(outdir / f"{stem}.{name}.csv", header, rows)
        if svg and len(header) >= 2 and rows:
            xs = [r[0] for r in rows]
            series = {h: [r[i] for r in rows] for i, h in enumerate(header[1:], start=1)}
            io.atomic_write_text(outdir / f"{stem}.{name}.svg", io.svg_lines(xs, series, title=f"{stem} {name}"))
    text = io.dumps(_sanitize(report))
    io.atomic_write_text(outdir / f"{stem}.json", text)
    echo(text.rstrip())
    return EXIT_OK


def _sanitize(obj):
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    return obj


# ---------------------------------------------------------------------------
# argument parsing


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not valid JSON: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logsob", description="Log-order Sobolev seminorm toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON RunConfig; flags given explicitly override it")
    common.add_argument("--out", dest="output_dir", help=f"output directory (env {io.OUTPUT_DIR_ENV})")
    common.add_argument("--threads", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--stamp", action="store_true", help="record a wall-clock timestamp in the report")
    common.add_argument("--svg", action="store_true", help="also write SVG line plots")
    common.add_argument("--function", help="function kind, e.g. gaussian, indicator_ball")
    common.add_argument("--fparams", type=_json_arg, help='function parameters as JSON, e.g. \'{"r": 0.25}\'')
    common.add_argument("--d", type=int)
    common.add_argument("--L", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--r-min", type=float)
    common.add_argument("--n-r", type=int)
    common.add_argument("--n-theta", type=int)
    for name in ("gamma", "p", "s", "q"):
        common.add_argument(f"--{name}", type=float)
    sub = ap.add_subparsers(dest="subcommand", required=True)
    sp = sub.add_parser("seminorm", parents=[common], help="X, W or truncated seminorm")
    sp.add_argument("--kind", choices=("x", "w", "truncated"))
    sp.add_argument("--allow-gamma-zero", action="store_true")
    sp = sub.add_parser("spectral", parents=[common], help="Fourier-side norm and spectrum CSV")
    sp.add_argument("--pad", type=int)
    sp = sub.add_parser("kernel-moment", parents=[common], help="kernel moments I(xi)")
    sp.add_argument("--xi", type=float, nargs="+")
    sp.add_argument("--radius", type=float)
    sp = sub.add_parser("lusin", parents=[common], help="Lusin / Hölder pair ratios and profiles")
    sp.add_argument("--kind", choices=("lusin", "holder"))
    sp.add_argument("--n-pairs", type=int)
    sub.add_parser("phistar", parents=[common], help="Phi* profile and norm")
    sp = sub.add_parser("hajlasz", parents=[common], help="certify a constant witness on pairs")
    sp.add_argument("--witness-const", type=float)
    sp.add_argument("--witness-K", type=float)
    sp.add_argument("--n-pairs", type=int)
    sp = sub.add_parser("experiment", parents=[common], help="run a named experiment")
    sp.add_argument("name", choices=EXPERIMENTS)
    sp = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    sp.add_argument("--n-override", type=int)
    return ap


_OPTION_KEYS = ("kind", "allow_gamma_zero", "pad", "xi", "radius", "n_pairs", "witness_const",
                "witness_K", "name", "n_override")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    base = RunConfig.from_json(ns.config.read_text()).to_dict() if ns.config else {}
    base["subcommand"] = ns.subcommand
    if ns.function:
        base["function"] = {"kind": ns.function, "params": ns.fparams or {}}
    elif ns.fparams is not None and base.get("function"):
        base["function"]["params"] = ns.fparams
    dom = dict(base.get("domain") or {})
    for k in ("d", "L", "n"):
        if getattr(ns, k) is not None:
            dom[k] = getattr(ns, k)
    base["domain"] = dom
    scheme = dict(base.get("scheme") or {})
    for k in ("r_min", "n_r", "n_theta"):
        if getattr(ns, k) is not None:
            scheme[k] = getattr(ns, k)
    base["scheme"] = scheme
    params = dict(base.get("params") or {})
    for k in ("gamma", "p", "s", "q"):
        if getattr(ns, k) is not None:
            params[k] = getattr(ns, k)
    base["params"] = params
    opts = dict(base.get("options") or {})
    for k in _OPTION_KEYS:
        v = getattr(ns, k, None)
        if v not in (None, False):
            opts[k] = v
    base["options"] = opts
    for k in ("seed", "threads", "output_dir"):
        if getattr(ns, k) is not None:
            base[k] = getattr(ns, k)
    if not ns.output_dir:
        base["output_dir"] = str(io.output_dir(base.get("output_dir", "logsob-out")))
    return RunConfig.from_dict(base)


def _fail(code: int, kind: str, message: str, precondition: str | None = None) -> int:
    print(io.dumps({"error": kind, "message": message, "precondition": precondition}).rstrip())
    return code


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg, stamp=ns.stamp, svg=ns.svg)
    except ParameterError as exc:
        return _fail(EXIT_PARAM, "invalid_parameter", str(exc), exc.precondition)
    except InvariantError as exc:
        return _fail(EXIT_INVARIANT, "invariant_violated", str(exc))
    except (KeyError, TypeError, ValueError) as exc:
        return _fail(EXIT_PARAM, "invalid_config", repr(exc))
    except OSError as exc:
        return _fail(EXIT_IO, "output_error", str(exc))


if __name__ == "__main__":
    sys.exit(main())
