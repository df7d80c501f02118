"""Command-line front end.

    maglap spectrum       --field constant:2 --lambda 30
    maglap riesz          --field constant:0 --lambda 30 --sigma 1.5
    maglap check-theorem  --field blowup:1,0.5 --sigma 1.5 --lambda 5:100:8
    maglap check-classical --field power:3,1 --sigma 1.5,2 --lambda 10,20
    maglap threshold      --field constant:1.9
    maglap sweep          --field constant:1 --field power:3,1 --sigma 1.5,2 --lambda 5:100:5
    maglap constants      --sigma 1.5 --d 1

Exit codes: 0 every verdict holds, 1 some bound is violated, 2 usage or
input error, 3 numerical failure or an inconclusive verdict.
"""
import argparse
import configparser
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field as dc_field

import numpy as np

from .bounds import semiclassical_constant
from .discretize import DEFAULT_GRID, build_operator, discretize, write_matrix_csv
from .errors import DomainError, InfiniteFluxError, InvalidFieldError
from .field import parse_field_spec
from .spectral import _map, magnetic_spectrum, riesz_mean, spectrum_csv, spectrum_json
from .verify import Verdict, check_classical, check_theorem, threshold_bound

COMMANDS = ("spectrum", "riesz", "check-theorem", "check-classical", "threshold", "sweep",
            "constants")
MIN_CLI_GRID = 16
EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2, 3

THEOREM_COLUMNS = ("sigma", "lambda", "branch", "outer", "inner", "middle", "l", "ltilde",
                   "rhs", "lhs", "margin")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    fields: list = dc_field(default_factory=list)
    r0: float = 1.0
    sigmas: list = dc_field(default_factory=list)
    lambdas: list = dc_field(default_factory=list)
    grid: int = DEFAULT_GRID
    fmt: str = "csv"
    output: str = None
    threads: int = 1
    dump_matrix: str = None
    mode: int = 0
    both_branches: bool = False
    dims: tuple = (1, 2)

    @property
    def field_specs(self):
        return [f.descriptor for f in self.fields]


def fmt_float(x):
    return "%.17g" % x


def parse_floats(text, what):
    try:
        values = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError("malformed %s list %r" % (what, text)) from None
    if not values or not all(math.isfinite(v) for v in values):
        raise UsageError("malformed %s list %r" % (what, text))
    return values


def parse_lambdas(text, spacing="geometric"):
    """A comma list, or ``start:stop:count`` spaced geometrically (default) or linearly."""
    text = str(text).strip()
    if ":" not in text:
        values = parse_floats(text, "lambda")
    else:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("lambda range must be start:stop:count, got %r" % text)
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError("malformed lambda range %r" % text) from None
        if count < 1 or stop < start:
            raise UsageError("lambda range needs count >= 1 and stop >= start")
        if count == 1:
            values = [start]
        elif spacing == "linear":
            values = [float(v) for v in np.linspace(start, stop, count)]
        else:
            if start <= 0:
                raise UsageError("a geometric lambda range needs start > 0")
            values = [float(v) for v in np.geomspace(start, stop, count)]
            values[0], values[-1] = start, stop
    if any(v < 0 for v in values):
        raise UsageError("lambda must be non-negative")
    return values


def _parser():
    p = argparse.ArgumentParser(prog="maglap", description="Eigenvalue moments of the magnetic "
                                "Dirichlet Laplacian on a disk with a radial field.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="INI file with [field], [run] and [output] sections")
    p.add_argument("--field", action="append", help="constant:B0, power:c,p, blowup:c,gamma "
                   "or table:path.csv (repeatable for sweep)")
    p.add_argument("--r0", type=float)
    p.add_argument("--sigma", help="comma-separated list")
    p.add_argument("--lambda", dest="lam", help="comma list or start:stop:count")
    p.add_argument("--spacing", choices=("geometric", "linear"))
    p.add_argument("--grid", type=int, help="radial grid size N (>= %d)" % MIN_CLI_GRID)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"))
    p.add_argument("--output", help="output path (default stdout)")
    p.add_argument("--threads", type=int)
    p.add_argument("--dump-matrix", help="spectrum: write the radial matrix of --mode as CSV")
    p.add_argument("--mode", type=int, help="angular mode for --dump-matrix (default 0)")
    p.add_argument("--both-branches", action="store_true", default=None,
                   help="check-theorem/sweep: also report both branch totals")
    p.add_argument("--d", type=int, choices=(1, 2), help="constants: dimension")
    return p


def _read_config(path):
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError("cannot read config %s: %s" % (path, exc)) from None
    out = {}
    keys = {
        "field": {"spec": "field", "field": "field", "r0": "r0"},
        "run": {"sigma": "sigma", "lambda": "lam", "spacing": "spacing", "grid": "grid",
                "threads": "threads", "both_branches": "both_branches",
                "both-branches": "both_branches", "mode": "mode", "d": "d"},
        "output": {"format": "fmt", "path": "output", "output": "output",
                   "dump_matrix": "dump_matrix", "dump-matrix": "dump_matrix"},
    }
    for section in cp.sections():
        if section not in keys:
            raise UsageError("unknown config section [%s]" % section)
        for key, value in cp.items(section):
            if key not in keys[section]:
                raise UsageError("unknown key %r in [%s]" % (key, section))
            out[keys[section][key]] = value
    return out


def _threads(flag, config_value):
    # flag > MAGLAP_THREADS > config file > 1
    if flag is not None:
        value = flag
    elif os.environ.get("MAGLAP_THREADS"):
        try:
            value = int(os.environ["MAGLAP_THREADS"])
        except ValueError:
            raise UsageError("MAGLAP_THREADS must be an integer") from None
    elif config_value is not None:
        value = int(config_value)
    else:
        value = 1
    if value < 1:
        raise UsageError("thread count must be >= 1")
    return value


def _config_from(ns):
    conf = _read_config(ns.config) if ns.config else {}

    def pick(name, default=None):
        value = getattr(ns, name)
        if value is not None:
            return value
        return conf.get(name, default)

    try:
        r0 = float(pick("r0", 1.0))
        grid = int(pick("grid", DEFAULT_GRID))
        threads = _threads(ns.threads, conf.get("threads"))
        mode = int(pick("mode", 0))
        d = pick("d")
        d = int(d) if d is not None else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    both = pick("both_branches", False)
    if isinstance(both, str):
        both = both.strip().lower() in ("1", "true", "yes", "on")
    fmt = pick("fmt", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError("format must be csv or json")
    spacing = pick("spacing", "geometric")
    if spacing not in ("geometric", "linear"):
        raise UsageError("spacing must be geometric or linear")
    if not (r0 > 0 and math.isfinite(r0)):
        raise UsageError("r0 must be positive")
    if grid < MIN_CLI_GRID:
        raise UsageError("grid must be >= %d" % MIN_CLI_GRID)
    if d is not None and d not in (1, 2):
        raise UsageError("d must be 1 or 2")

    field_texts = ns.field if ns.field else ([conf["field"]] if "field" in conf else [])
    fields = []
    for text in field_texts:
        try:
            fields.append(parse_field_spec(text, r0))
        except (DomainError, InvalidFieldError, OSError, ValueError) as exc:
            raise UsageError("field %r: %s" % (text, exc)) from None

    cmd = ns.command
    sigma_text = pick("sigma")
    lam_text = pick("lam")
    sigmas = parse_floats(sigma_text, "sigma") if sigma_text is not None else []
    lambdas = parse_lambdas(lam_text, spacing) if lam_text is not None else []
    if any(s < 0 for s in sigmas):
        raise UsageError("sigma must be non-negative")

    if cmd != "constants":
        if not fields:
            raise UsageError("%s needs --field" % cmd)
        if len(fields) > 1 and cmd != "sweep":
            raise UsageError("only sweep accepts several --field options")
    if cmd in ("spectrum", "riesz", "check-theorem", "check-classical", "sweep") and not lambdas:
        raise UsageError("%s needs --lambda" % cmd)
    if cmd in ("riesz", "check-theorem", "check-classical", "sweep", "constants") and not sigmas:
        raise UsageError("%s needs --sigma" % cmd)
    if cmd in ("check-theorem", "sweep") and min(sigmas) < 1.5:
        raise UsageError("%s needs sigma >= 3/2" % cmd)
    return RunConfig(
        command=cmd,
        fields=fields,
        r0=r0,
        sigmas=sigmas,
        lambdas=lambdas,
        grid=grid,
        fmt=fmt,
        output=pick("output"),
        threads=threads,
        dump_matrix=pick("dump_matrix"),
        mode=mode,
        both_branches=bool(both),
        dims=(d,) if d is not None else (1, 2),
    )


def parse_args(argv=None):
    """Parse ``argv`` into a :class:`RunConfig`; raises :class:`UsageError` on bad input."""
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            raise
        raise UsageError("invalid command line") from None
    return _config_from(ns)


def _csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt_float(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _theorem_rows(report, both, with_field=False):
    b = report.breakdown
    row = [report.sigma, report.lam, b.branch.value, b.outer_half, b.inner_half, b.middle,
           b.l_half, b.ltilde_half, b.rhs_total, report.lhs, report.margin,
           report.numerical_error_estimate, report.verdict.value]
    if both:
        row += [b.rhs_noninteger, b.rhs_integer, b.rhs_noninteger - report.lhs,
                b.rhs_integer - report.lhs]
    return ([report.field] if with_field else []) + row


def _theorem_header(both, with_field=False):
    head = list(THEOREM_COLUMNS) + ["error", "verdict"]
    if both:
        head += ["rhs_noninteger", "rhs_integer", "margin_noninteger", "margin_integer"]
    return (["field"] if with_field else []) + head


def _verdict_code(verdicts):
    verdicts = list(verdicts)
    if any(v is Verdict.VIOLATED for v in verdicts):
        return EXIT_VIOLATED
    if any(v is Verdict.HOLDS_WITHIN_ERROR for v in verdicts):
        return EXIT_FAILURE
    return EXIT_OK


def _cmd_spectrum(cfg):
    field = cfg.fields[0]
    spectra = [magnetic_spectrum(field, lam, cfg.grid, workers=cfg.threads) for lam in cfg.lambdas]
    if cfg.dump_matrix:
        T = discretize(build_operator("magnetic", field, cfg.mode), cfg.grid)
        with open(cfg.dump_matrix, "w", newline="") as fh:
            write_matrix_csv(T, fh)
    if cfg.fmt == "json":
        body = [spectrum_json(s) for s in spectra]
        return _json(body[0] if len(body) == 1 else body), EXIT_OK
    if len(spectra) == 1:
        return spectrum_csv(spectra[0]), EXIT_OK
    rows = []
    for s in spectra:
        for line in spectrum_csv(s).splitlines()[1:]:
            rows.append(fmt_float(s.threshold) + "," + line)
    return "lambda,mode,index,eigenvalue\n" + "".join(r + "\n" for r in rows), EXIT_OK


def _cmd_riesz(cfg):
    field = cfg.fields[0]
    spectra = _map(lambda lam: magnetic_spectrum(field, lam, cfg.grid, workers=1),
                   cfg.lambdas, cfg.threads)
    rows = [(s, lam, riesz_mean(sp, lam, s)) for s in cfg.sigmas
            for lam, sp in zip(cfg.lambdas, spectra)]
    if cfg.fmt == "json":
        return _json([{"sigma": s, "lambda": lam, "riesz": v} for s, lam, v in rows]), EXIT_OK
    return _csv(("sigma", "lambda", "riesz"), rows), EXIT_OK


def _cmd_check_theorem(cfg, fields, with_field):
    reports = []
    for field in fields:
        for sigma in cfg.sigmas:
            reports.extend(check_theorem(field, sigma, cfg.lambdas, cfg.grid, cfg.threads))
    code = _verdict_code(r.verdict for r in reports)
    if cfg.fmt == "json":
        return _json([r.to_dict() for r in reports]), code
    rows = [_theorem_rows(r, cfg.both_branches, with_field) for r in reports]
    return _csv(_theorem_header(cfg.both_branches, with_field), rows), code


def _cmd_check_classical(cfg):
    field = cfg.fields[0]
    points = [(s, lam) for s in cfg.sigmas for lam in cfg.lambdas]
    reports = _map(lambda p: check_classical(field, p[0], p[1], cfg.grid), points, cfg.threads)
    code = EXIT_OK if all(r.holds for r in reports) else EXIT_VIOLATED
    if cfg.fmt == "json":
        return _json([r.to_dict() for r in reports]), code
    header = ("sigma", "lambda", "lhs", "berezin", "laptev", "lambda1", "lambda1_zero_field",
              "inf_B", "berezin_holds", "diamagnetic_holds", "form_holds")
    rows = [(r.sigma, r.lam, r.lhs, r.berezin,
             "" if r.laptev_reference is None else r.laptev_reference, r.lambda1,
             r.lambda1_zero_field, r.inf_B,
             ("true" if r.berezin_holds else "false") if r.berezin_asserted else "",
             str(r.diamagnetic_holds).lower(), str(r.form_holds).lower()) for r in reports]
    return _csv(header, rows), code


def _cmd_threshold(cfg):
    report = threshold_bound(cfg.fields[0], cfg.grid)
    code = EXIT_OK if report.holds else EXIT_VIOLATED
    if cfg.fmt == "json":
        return _json(report.to_dict()), code
    header = ("lambda1", "outer", "inner", "l", "ltilde", "threshold", "margin", "error", "holds")
    row = (report.lambda1, report.outer, report.inner, report.l, report.ltilde,
           report.threshold, report.margin, report.error, str(report.holds).lower())
    return _csv(header, [row]), code


def _cmd_constants(cfg):
    rows = [(s, d, semiclassical_constant(s, d)) for s in cfg.sigmas for d in cfg.dims]
    if cfg.fmt == "json":
        return _json([{"sigma": s, "d": d, "value": v} for s, d, v in rows]), EXIT_OK
    return _csv(("sigma", "d", "value"), rows), EXIT_OK


def run(cfg):
    """Execute ``cfg``; returns ``(text, exit_code)``."""
    cmd = cfg.command
    if cmd == "spectrum":
        return _cmd_spectrum(cfg)
    if cmd == "riesz":
        return _cmd_riesz(cfg)
    if cmd == "check-theorem":
        return _cmd_check_theorem(cfg, cfg.fields, with_field=False)
    if cmd == "sweep":
        return _cmd_check_theorem(cfg, cfg.fields, with_field=True)
    if cmd == "check-classical":
        return _cmd_check_classical(cfg)
    if cmd == "threshold":
        return _cmd_threshold(cfg)
    return _cmd_constants(cfg)


def main(argv=None):
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print("maglap: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        text, code = run(cfg)
    except (DomainError, InvalidFieldError, InfiniteFluxError) as exc:
        print("maglap: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # numerical failure
        print("maglap: failure: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_FAILURE
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
