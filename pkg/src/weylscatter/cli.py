"""Command-line front end.

Every subcommand validates its whole configuration before touching the
output directory, so a configuration error (exit 1) leaves no files.
Exit 2 means some grid points failed and were recorded in the manifest.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import engine, krein, schatten, stationary, weyl
from .errors import ConfigurationError, ExclusionSetHit, WeylScatterError
from .models import MODEL_IDS, make_model, normalize_id, parse_complex

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2

# flags that may also come from the run-spec file, with built-in defaults
DEFAULTS = {
    "model": None,
    "radius": None,
    "alpha": None,
    "v0": None,
    "rigging": None,
    "lambda": None,
    "modes": 16,
    "strategy": "direct",
    "tol": engine.UNITARITY_TOL,
    "basis": "channel",
    "z": None,
    "entity": None,
    "bound_exponent": None,
    "slack": schatten.DEFAULT_SLACK,
    "size": None,
    "probes": 16,
    "seed": 0,
    "step": None,
    "length": 200.0,
    "band_edge": False,
    "out": ".",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def fmt(x):
    """Fixed 17-significant-digit float formatting."""
    return "%.17g" % float(x)


def parse_grid(text):
    """``min:max:count`` (inclusive, uniform), a comma list, or one number."""
    s = str(text).strip()
    try:
        if ":" in s:
            parts = s.split(":")
            if len(parts) != 3:
                raise ValueError
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1 or (count == 1 and lo != hi):
                raise ValueError
            if count == 1:
                return [lo]
            return [lo + i * (hi - lo) / (count - 1) for i in range(count)]
        vals = [float(p) for p in s.split(",") if p]
    except ValueError:
        raise ConfigurationError(f"bad grid {text!r}; use min:max:count or a comma list") from None
    if not vals or not all(np.isfinite(vals)):
        raise ConfigurationError(f"bad grid {text!r}")
    return vals


def parse_alpha(value):
    """Number, comma list (per mode), list, or dict of Fourier coefficients."""
    if value is None or isinstance(value, (int, float, list, dict)):
        return value
    s = str(value).strip()
    if "," in s:
        return s.split(",")  # entries are validated by the model
    c = parse_complex(s)
    if c.imag != 0:
        raise ConfigurationError(f"alpha must be real, got {value!r}")
    return c.real


def parse_points(value):
    """One or more complex points ``a+bi``, comma separated or a list."""
    if value is None:
        return None
    items = value if isinstance(value, list) else str(value).split(",")
    return [parse_complex(v) for v in items]


def _add_common(p):
    p.add_argument("--spec", help="JSON run-spec; flags override its entries")
    p.add_argument("--model", help="model id: " + ", ".join(MODEL_IDS))
    p.add_argument("--radius", type=float)
    p.add_argument("--alpha", help="number, comma list per mode, or (spec file) Fourier dict")
    p.add_argument("--v0", type=float)
    p.add_argument("--rigging", choices=("laplace", "identity", "dtn"))
    p.add_argument("--modes", type=int, help="max |m| on the circle, max l on the sphere")
    p.add_argument("--out", help="output directory")


def build_parser():
    parser = _Parser(prog="weylscatter", description="Scattering matrices from Weyl functions.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    for name in ("smatrix", "eigenphases"):
        p = sub.add_parser(name)
        _add_common(p)
        p.add_argument("--lambda", dest="lambda", help="min:max:count")
        p.add_argument("--strategy", choices=("direct", "extrapolate"))
        p.add_argument("--tol", type=float)
        if name == "smatrix":
            p.add_argument("--basis", choices=("channel", "modes"),
                           help="channel basis of ran Im M, or the full mode space")

    p = sub.add_parser("krein-check")
    _add_common(p)
    p.add_argument("--z", help="a+bi[,c+di,...]")
    p.add_argument("--size", type=int, help="chain sites")
    p.add_argument("--probes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--step", type=float, help="finite-difference step (delta_line)")
    p.add_argument("--length", type=float, help="finite-difference interval length")

    p = sub.add_parser("sv-decay")
    _add_common(p)
    p.add_argument("--entity", choices=schatten.ENTITIES)
    p.add_argument("--z", help="a+bi")
    p.add_argument("--bound-exponent", dest="bound_exponent", type=float)
    p.add_argument("--slack", type=float)

    p = sub.add_parser("stationary-check")
    _add_common(p)
    p.add_argument("--lambda", dest="lambda", help="min:max:count or comma list")
    p.add_argument("--size", type=int)
    p.add_argument("--band-edge", dest="band_edge", action="store_true", default=None)

    p = sub.add_parser("nevanlinna-audit")
    _add_common(p)
    p.add_argument("--z", help="a+bi[,c+di,...]")
    return parser


def resolve(args):
    """Merge run-spec file, flags and defaults into one dict."""
    spec = {}
    if getattr(args, "spec", None):
        try:
            spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ConfigurationError(f"cannot read run-spec {args.spec}: {exc}") from None
        if not isinstance(spec, dict):
            raise ConfigurationError("run-spec must be a JSON object")
        spec = {k.replace("-", "_"): v for k, v in spec.items()}
        unknown = set(spec) - set(DEFAULTS) - {"command"}
        if unknown:
            raise ConfigurationError(f"unknown run-spec keys {sorted(unknown)}")
    cfg = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        cfg[key] = flag if flag is not None else spec.get(key, default)
    if cfg["model"] is None:
        raise ConfigurationError("--model is required")
    cfg["model"] = normalize_id(cfg["model"])
    return cfg


def _model(cfg):
    params = {"radius": cfg["radius"], "alpha": parse_alpha(cfg["alpha"]),
              "v0": cfg["v0"], "rigging": cfg["rigging"]}
    model = make_model(cfg["model"], **params)
    modes = int(cfg["modes"])
    if modes < 0:
        raise ConfigurationError("--modes must be >= 0")
    trunc = model.truncation(modes)
    if model.robin and hasattr(model, "alpha_matrix"):
        model.alpha_matrix(trunc)  # per-mode length checks happen here
    return model, trunc


def _label(lab):
    if isinstance(lab, tuple):
        return ":".join(str(v) for v in lab)
    return str(lab)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(type(obj).__name__)


def dump_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


class Output:
    """Collects files in memory; `flush` writes them only at the end."""

    def __init__(self, directory):
        self.dir = Path(directory)
        self.files = {}

    def csv(self, name, header, rows):
        lines = [",".join(header)]
        lines.extend(",".join(r) for r in rows)
        self.files[name] = "\n".join(lines) + "\n"

    def json(self, name, obj):
        self.files[name] = dump_json(obj)

    def flush(self):
        self.dir.mkdir(parents=True, exist_ok=True)
        for name, text in self.files.items():
            with open(self.dir / name, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)


def _manifest(command, cfg, model, trunc, extra):
    m = {
        "tool": "weylscatter",
        "version": __version__,
        "command": command,
        "model": model.params(),
        "truncation": {"size": trunc.n, "modes": [_label(x) for x in trunc.mode_labels]},
        "tolerances": {
            "unitarity": cfg["tol"],
            "rank_rtol": weyl.RANK_RTOL,
            "rank_abs_floor": weyl.RANK_ABS_FLOOR,
            "rank_ambiguity_factor": weyl.AMBIGUITY_FACTOR,
            "nevanlinna": weyl.NEVANLINNA_TOL,
            "phase_tie": engine.PHASE_TIE_TOL,
        },
        "defaults": {
            "eps_schedule": vars_schedule(weyl.EpsSchedule()),
            "lambda_grid": "inclusive uniform, lambda_i = min + i*(max-min)/(count-1)",
            "float_format": "%.17g",
        },
    }
    assumptions = []
    if model.params().get("v0"):
        assumptions.append("v0 != 0: the coupled operator is assumed to have no embedded "
                           "eigenvalues (not verified)")
    m["assumptions"] = assumptions
    m.update(extra)
    return m


def vars_schedule(s):
    return {"eps0": s.eps0, "levels": s.levels, "ratio": s.ratio}


def _sweep(cfg, model, trunc):
    if cfg["lambda"] is None:
        raise ConfigurationError("--lambda is required (min:max:count)")
    grid = parse_grid(cfg["lambda"])
    if cfg["strategy"] not in ("direct", "extrapolate"):
        raise ConfigurationError(f"unknown strategy {cfg['strategy']!r}")
    return grid, engine.smatrix_sweep(model, grid, trunc, cfg["strategy"], float(cfg["tol"]))


def _point_records(results):
    points, failures, hits = [], [], []
    for i, r in enumerate(results):
        if isinstance(r, engine.PointFailure):
            rec = {"index": i, "lambda": r.lam, "error": r.error, "message": r.message}
            failures.append(rec)
            if r.error == ExclusionSetHit.__name__:
                hits.append(r.lam)
        else:
            points.append({"index": i, "lambda": r.lam, "rank": r.rank,
                           "unitarity_defect": r.unitarity_defect, "cond": r.cond,
                           "flagged": r.flagged, "rank_ambiguous": list(r.rank_ambiguous)})
    return points, failures, hits


def cmd_smatrix(cfg, out):
    model, trunc = _model(cfg)
    if cfg["basis"] not in ("channel", "modes"):
        raise ConfigurationError(f"unknown basis {cfg['basis']!r}")
    grid, results = _sweep(cfg, model, trunc)
    rows = []
    for r in results:
        if isinstance(r, engine.PointFailure):
            continue
        if cfg["basis"] == "modes":
            mat = r.mode_space()
            labels = [_label(x) for x in trunc.mode_labels]
        else:
            mat = r.S
            labels = [str(j) for j in range(r.rank)]
        for a, la in enumerate(labels):
            for b, lb in enumerate(labels):
                rows.append((fmt(r.lam), la, lb, fmt(mat[a, b].real), fmt(mat[a, b].imag)))
    out.csv("smatrix.csv", ("lambda", "row_label", "col_label", "re", "im"), rows)
    points, failures, hits = _point_records(results)
    out.json("manifest.json", _manifest("smatrix", cfg, model, trunc, {
        "strategy": cfg["strategy"], "basis": cfg["basis"], "lambda": cfg["lambda"],
        "points": points, "failures": failures, "exclusion_hits": hits}))
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_eigenphases(cfg, out):
    model, trunc = _model(cfg)
    grid, results = _sweep(cfg, model, trunc)
    good = [r for r in results if not isinstance(r, engine.PointFailure)]
    bad = [r for r in good if r.unitarity_defect > r.tol]
    rows = [(fmt(e.lam), str(e.channel), fmt(e.phase))
            for e in engine.eigenphase_report([r for r in good if r not in bad])]
    out.csv("eigenphases.csv", ("lambda", "channel", "phase_rad"), rows)
    points, failures, hits = _point_records(results)
    failures += [{"lambda": r.lam, "error": "NonUnitarySample",
                  "message": f"unitarity defect {r.unitarity_defect:.3e}"} for r in bad]
    out.json("manifest.json", _manifest("eigenphases", cfg, model, trunc, {
        "strategy": cfg["strategy"], "lambda": cfg["lambda"], "points": points,
        "failures": failures, "exclusion_hits": hits}))
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_krein_check(cfg, out):
    model, trunc = _model(cfg)
    zs = parse_points(cfg["z"]) or [0.5 + 0.5j]
    if any(z.imag == 0 for z in zs):
        raise ConfigurationError("krein-check needs non-real z")
    if model.kind == "jacobi_halfline":
        system = krein.ChainSystem(model, int(cfg["size"] or 2000))
        disc = {"kind": "truncated_chain", "size": system.size}
    elif model.kind == "delta_line":
        step = float(cfg["step"] or 0.01)
        system = krein.FiniteDifferenceLine(model, float(cfg["length"]), step)
        disc = {"kind": "finite_difference", "step": step, "length": float(cfg["length"])}
    else:
        raise ConfigurationError(f"krein-check supports jacobi_halfline and delta_line, not {model.kind}")
    rows, failures = [], []
    for z in zs:
        try:
            res = krein.krein_residual(model, z, system=system, n_probes=int(cfg["probes"]),
                                       seed=int(cfg["seed"]))
        except WeylScatterError as exc:
            failures.append({"z": z, "error": type(exc).__name__, "message": str(exc)})
            continue
        rows.append((fmt(z.real), fmt(z.imag), fmt(res)))
    out.csv("krein.csv", ("z_re", "z_im", "residual"), rows)
    out.json("manifest.json", _manifest("krein-check", cfg, model, trunc, {
        "discretization": disc, "probes": int(cfg["probes"]), "seed": int(cfg["seed"]),
        "failures": failures}))
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_sv_decay(cfg, out):
    model, trunc = _model(cfg)
    entity = cfg["entity"] or "im_weyl"
    if entity not in schatten.ENTITIES:
        raise ConfigurationError(f"unknown entity {entity!r}")
    zs = parse_points(cfg["z"]) or [1j]
    if len(zs) != 1:
        raise ConfigurationError("sv-decay takes a single z")
    rep = schatten.sv_decay(entity, model, zs[0], int(cfg["modes"]), cfg["bound_exponent"],
                            float(cfg["slack"]))
    out.csv("sv_decay.csv", ("j", "s_j"), [(str(j), fmt(s)) for j, s in zip(rep.j, rep.s)])
    out.json("sv_decay_verdict.json", rep.verdict())
    out.json("manifest.json", _manifest("sv-decay", cfg, model, trunc, {"verdict": rep.verdict()}))
    return EXIT_OK


def cmd_stationary_check(cfg, out):
    model, trunc = _model(cfg)
    if model.kind != "jacobi_halfline":
        raise ConfigurationError("stationary-check is implemented for jacobi_halfline only")
    grid = parse_grid(cfg["lambda"] or "-1.5,-0.5,0,0.5,1.5")
    size = int(cfg["size"] or stationary.DEFAULT_SIZE)
    rows, table, failures = [], [], []
    for lam in grid:
        try:
            rep = stationary.three_route(model, lam, size=size)
        except WeylScatterError as exc:
            failures.append({"lambda": lam, "error": type(exc).__name__, "message": str(exc)})
            continue
        for route in sorted(rep["routes"]):
            v = rep["routes"][route]
            rows.append((fmt(lam), route, fmt(v.real), fmt(v.imag)))
        table.append({"lambda": lam, "pairwise": rep["pairwise"],
                      "max_pairwise": rep["max_pairwise"], "z_residual": rep["z_residual"]})
    report = {"points": table, "failures": failures,
              "max_pairwise": max((t["max_pairwise"] for t in table), default=None),
              "max_z_residual": max((t["z_residual"] for t in table), default=None)}
    if cfg["band_edge"]:
        report["band_edge"] = stationary.band_edge_report(model, size=size)
    out.csv("stationary.csv", ("lambda", "route", "entry_re", "entry_im"), rows)
    out.json("stationary_pairwise.json", report)
    out.json("manifest.json", _manifest("stationary-check", cfg, model, trunc, {
        "size": size, "eps_schedule": vars_schedule(stationary.STATIONARY_SCHEDULE),
        "failures": failures}))
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_nevanlinna_audit(cfg, out):
    model, trunc = _model(cfg)
    zs = parse_points(cfg["z"]) or [complex(x, y) for x in (0.5, 2.0) for y in (0.1, 1.0)]
    if any(z.imag <= 0 for z in zs):
        raise ConfigurationError("audit points need Im z > 0")
    sizes = None
    if len(trunc.mode_labels) > 1:
        sizes = sorted({model.truncation(k) for k in (max(1, int(cfg["modes"]) // 2), int(cfg["modes"]))},
                       key=lambda t: t.n)
    rep = weyl.nevanlinna_audit(model, zs, trunc, sizes)
    out.json("audit.json", rep.as_dict())
    out.json("manifest.json", _manifest("nevanlinna-audit", cfg, model, trunc, {}))
    return EXIT_OK if rep.strict else EXIT_PARTIAL


COMMANDS = {
    "smatrix": cmd_smatrix,
    "eigenphases": cmd_eigenphases,
    "krein-check": cmd_krein_check,
    "sv-decay": cmd_sv_decay,
    "stationary-check": cmd_stationary_check,
    "nevanlinna-audit": cmd_nevanlinna_audit,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise ConfigurationError("a subcommand is required: " + ", ".join(COMMANDS))
        cfg = resolve(args)
        out = Output(cfg["out"])
        code = COMMANDS[args.command](cfg, out)
    except ConfigurationError as exc:
        print(f"weylscatter: configuration error: {exc}".replace("\n", " "), file=sys.stderr)
        return EXIT_CONFIG
    except WeylScatterError as exc:
        print(f"weylscatter: {type(exc).__name__}: {exc}".replace("\n", " "), file=sys.stderr)
        return EXIT_PARTIAL
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
