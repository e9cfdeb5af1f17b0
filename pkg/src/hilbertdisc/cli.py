"""Command-line entry point: constants, norm, apply, boundedness, identities, potential.

Exit status is 0 when every reported row passes, 1 on a numerical failure
and 2 on a usage error.  JSON output is byte-identical for identical
configuration and seed; wall times are only included with --timings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, fields, replace
from typing import Callable

import numpy as np

from . import measures as M
from . import operators as O
from . import seminorms as S
from . import series as P
from .quadrature import SupSearchConfig, interval_rule

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
LAMBDA_DEGREE = 1 << 20


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str = "constants"
    tol_quad: float = 1e-2
    tol_sup: float = 2e-2
    nodes: int = O.DEFAULT_RULE_SIZE
    degree: int = P.DEFAULT_DEGREE
    emit: str = "json"
    out: str | None = None
    seed: int = 0
    timings: bool = False

    def __post_init__(self):
        if not (self.tol_quad > 0 and self.tol_sup > 0):
            raise UsageError("tolerances must be positive")
        if self.degree < 16:
            raise UsageError("truncation degree must be at least 16")
        if self.nodes < 2:
            raise UsageError("node count must be at least 2")
        if self.emit not in ("json", "csv"):
            raise UsageError("--emit must be json or csv")

    def to_dict(self) -> dict:
        return asdict(self)


_CONFIG_KEYS = {f.name for f in fields(RunConfig)} - {"command"}


def load_config(path: str | None, overrides: dict, command: str) -> RunConfig:
    base: dict = {}
    if path:
        try:
            with open(path) as fh:
                base = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed config JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        unknown = set(base) - _CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    base.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(command=command, **base)


# ---------------------------------------------------------------------------
# report rows
# ---------------------------------------------------------------------------

@dataclass
class Row:
    name: str
    computed: float
    reference: float
    tolerance: float
    anchor: str
    provenance: str
    abs_error: float = math.nan
    passed: bool = False
    wall_time: float = 0.0
    note: str = ""

    def finish(self) -> "Row":
        self.abs_error = abs(self.computed - self.reference)
        self.passed = bool(self.abs_error <= self.tolerance)
        return self

    def to_dict(self, timings: bool) -> dict:
        d = {
            "name": self.name,
            "computed": self.computed,
            "reference": self.reference,
            "abs_error": self.abs_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "anchor": self.anchor,
            "provenance": self.provenance,
        }
        if self.note:
            d["note"] = self.note
        if timings:
            d["wall_time"] = self.wall_time
        return d


def _run_row(name: str, reference: float, tolerance: float, anchor: str, provenance: str,
             compute: Callable[[], float | tuple]) -> Row:
    t0 = time.perf_counter()
    note = ""
    try:
        out = compute()
        if isinstance(out, tuple):
            value, note = out
        else:
            value = out
        value = float(value)
    except (ValueError, FloatingPointError, ZeroDivisionError) as exc:
        value, note = math.nan, f"{type(exc).__name__}: {exc}"
    row = Row(name, value, float(reference), float(tolerance), anchor, provenance, note=note)
    row.wall_time = time.perf_counter() - t0
    row.finish()
    if not math.isfinite(value):
        row.passed = False
    return row


def _sup_note(rep: S.SeminormReport) -> str:
    s = rep.sup_part
    return f"sup={s.value!r} argmax={s.argmax!r} converged={s.converged} error_estimate={s.error_estimate!r}"


def constants_rows(cfg: RunConfig) -> list[Row]:
    pi = math.pi
    bmoa_log = pi / math.sqrt(2.0)
    deg = cfg.degree
    rows = []

    def norm_row(f, fn=S.bmoa_norm):
        def run():
            rep = fn(f)
            return rep.norm_value, _sup_note(rep)
        return run

    rows.append(_run_row(
        "bmoa_norm_hilbert_one", 1.0 + bmoa_log, cfg.tol_sup,
        "BMOA norm of H(1) = sum z^n/(n+1) equals 1 + pi/sqrt(2)", "closed form 1 + pi/sqrt(2)",
        norm_row(P.hilbert_one_tailed(deg))))
    rows.append(_run_row(
        "bmoa_norm_log", bmoa_log, cfg.tol_sup,
        "BMOA norm of log(1/(1-z)) equals pi/sqrt(2)", "closed form pi/sqrt(2)",
        norm_row(P.log_tailed(deg))))
    rows.append(_run_row(
        "garsia_log_at_zero", pi ** 2 / 6.0, 1e-6,
        "Garsia functional of log(1/(1-z)) at a = 0 equals sum 1/n^2", "Parseval, pi^2/6",
        lambda: S.garsia_functional(P.log_tailed(deg), 0.0)))
    log_big = P.log_series(LAMBDA_DEGREE)
    rows.append(_run_row(
        "lambda_norm_log", 1.0, 1e-6,
        "Lambda(2,1/2) norm of log(1/(1-z)); the profile is 1 - r^(2N)", "closed form 1",
        lambda: S.lambda_norm(log_big, 2.0)))
    rows.append(_run_row(
        "lambda_norm_hilbert_one", 2.0, cfg.tol_sup,
        "Lambda(2,1/2) norm of H(1) equals 1 + norm of log(1/(1-z))", "closed form 2",
        lambda: S.lambda_norm(O.hilbert_coeff(P.monomial(0), LAMBDA_DEGREE), 2.0)))
    delta0 = M.unit_atom()
    rows.append(_run_row(
        "formula_unit_atom", pi ** 2 / 2.0, cfg.tol_quad,
        "int 4|1-z^2|^-2 U dA for the unit atom at 0 equals 4 sum over odd n of 1/n^2",
        "coefficient sum, pi^2/2",
        lambda: S.log_norm_sq_formula(delta0)))
    rows.append(_run_row(
        "hilbert_norm_hinf_unit_atom", 1.0 + bmoa_log, cfg.tol_quad,
        "operator norm of H from H-infinity into M(D_mu) for the unit atom at 0 matches the BMOA value",
        "closed form 1 + pi/sqrt(2)",
        lambda: S.hilbert_norm_hinf_mdmu(delta0)))
    rows.append(_run_row(
        "mdmu_norm_log_unit_atom", bmoa_log, cfg.tol_sup,
        "M(D_mu) norm of log(1/(1-z)) for the unit atom at 0 equals the BMOA norm", "closed form pi/sqrt(2)",
        norm_row(P.log_tailed(deg), lambda f: S.mdmu_norm(f, delta0))))
    qp = M.qp_measure(0.5)
    formula = 1.0 + math.sqrt(S.log_norm_sq_formula(qp))
    rows.append(_run_row(
        "qp_half_cross_path", formula, 0.02 * formula,
        "1 + sqrt(norm formula) for the Q_p measure with p = 1/2 agrees with 1 + M(D_mu) norm of log "
        "within 2 percent", "independent path: wedge quadrature of the norm formula",
        norm_row(P.log_tailed(deg), lambda f: _shift_norm(S.mdmu_norm(f, qp)))))
    return rows


def _shift_norm(rep: S.SeminormReport) -> S.SeminormReport:
    return replace(rep, norm_value=1.0 + rep.norm_value)


def identities_rows(cfg: RunConfig) -> list[Row]:
    rng = np.random.default_rng(cfg.seed)
    rule = interval_rule(cfg.nodes)
    rows = []
    for n in (0, 1, 5, 25):
        rows.append(_run_row(
            f"shift_relation_n{n}", 0.0, 1e-15,
            f"C(e_{n}) = S^{n} H(e_{n}) coefficientwise", "exact algebraic relation",
            lambda n=n: O.shift_relation_residual(n, 200)))

    polys = [P.TaylorPolynomial(rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1))
             for d in rng.integers(0, 31, size=10)]
    probes = [complex(z) for z in 0.9 * np.sqrt(rng.uniform(size=20)) * np.exp(2j * np.pi * rng.uniform(size=20))]

    def dual():
        worst = 0.0
        for f in polys:
            h = O.hilbert_coeff(f, 400)
            for z in probes:
                ref = P.evaluate(h, z)
                worst = max(worst, abs(ref - O.hilbert_integral(f, z, rule)) / max(1.0, abs(ref)))
        return worst

    def derivative():
        worst = 0.0
        for f in polys:
            dh = P.differentiate(O.hilbert_coeff(f, 400))
            for z in probes:
                ref = P.evaluate(dh, z)
                worst = max(worst, abs(ref - O.hilbert_derivative(f, z, rule)) / max(1.0, abs(ref)))
        return worst

    rows.append(_run_row("dual_representation", 0.0, 1e-10,
                         "coefficient and integral forms of H agree", "series oracle", dual))
    rows.append(_run_row("derivative_identity", 0.0, 1e-9,
                         "H(f)' = b/(1-z) with b the arc-averaged factor", "series oracle", derivative))

    grid = [complex(x, y) for x in np.linspace(-0.99, 0.99, 20) for y in np.linspace(-0.99, 0.99, 20)
            if x * x + y * y < 0.99 ** 2]
    for label, f in (("one", P.constant(1.0)), ("sigma_0.3", P.mobius_series(0.3, 256)),
                     ("sigma_0.7i", P.mobius_series(0.7j, 256))):
        def excess(f=f):
            return max(0.0, max(abs(O.bounded_factor(f, z, rule)) for z in grid) - 1.0)
        rows.append(_run_row(f"bounded_factor_{label}", 0.0, 1e-6,
                             f"|b| <= sup|f| = 1 on the probe grid for f = {label}", "H-infinity bound", excess))

    def lp_battery():
        worst = 0.0
        for _ in range(20):
            d = int(rng.integers(1, 9))
            f = P.TaylorPolynomial(rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1))
            k = int(rng.integers(1, 6))
            pts = 0.9 * np.sqrt(rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k))
            mu = M.AtomicMeasure(tuple(complex(p) for p in pts), tuple(float(m) for m in rng.uniform(0.1, 1.0, size=k)))
            worst = max(worst, S.lp_identity_residual(f, mu))
        return worst

    rows.append(_run_row("lp_identity", 0.0, 1e-5,
                         "sum of Garsia functionals against atoms equals int |f'|^2 U_mu dA",
                         "exact left side", lp_battery))
    return rows


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def _read_text(arg: str) -> str:
    if arg.startswith("@"):
        try:
            with open(arg[1:]) as fh:
                return fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {arg[1:]}: {exc}") from exc
    return arg


def parse_measure(arg: str) -> M.Measure:
    text = _read_text(arg)
    try:
        return M.measure_from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad measure: {exc}") from exc


NAMED_FUNCTIONS = {
    "hilbert-one": P.hilbert_one_tailed,
    "cesaro-one": P.hilbert_one_tailed,  # C(1) and H(1) share the coefficients 1/(n+1)
    "log": P.log_tailed,
}


def parse_function(arg: str, degree: int, tailed: bool = True):
    if arg in NAMED_FUNCTIONS:
        f = NAMED_FUNCTIONS[arg](degree)
        return f if tailed else f.truncate(degree)
    text = _read_text(arg)
    try:
        return P.function_from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad function: {exc}") from exc


def parse_polynomial(arg: str) -> P.TaylorPolynomial:
    f = parse_function(arg, 16)
    if isinstance(f, P.TailedSeries):
        raise UsageError("a polynomial coefficient array is required here")
    return f


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _clean(v):
    """Non-finite floats become strings so the JSON stays standard."""
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


def _emit(payload: dict, table: list[dict], cfg: RunConfig) -> None:
    payload, table = _clean(payload), _clean(table)
    if cfg.emit == "json":
        text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
    else:
        buf = io.StringIO()
        if table:
            keys = list(table[0])
            for r in table[1:]:
                keys += [k for k in r if k not in keys]
            w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for r in table:
                w.writerow({k: _csv_cell(v) for k, v in r.items()})
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(v):
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v)
    return v


def _rows_payload(title: str, rows: list[Row], cfg: RunConfig) -> tuple[dict, list[dict], int]:
    table = [r.to_dict(cfg.timings) for r in rows]
    ok = all(r.passed for r in rows)
    payload = {"report": title, "config": _config_view(cfg), "rows": table, "all_pass": ok}
    return payload, table, EXIT_OK if ok else EXIT_FAIL


def _config_view(cfg: RunConfig) -> dict:
    d = cfg.to_dict()
    d.pop("out")
    d.pop("timings")
    return d


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_constants(cfg: RunConfig, args) -> int:
    payload, table, code = _rows_payload("constants", constants_rows(cfg), cfg)
    _emit(payload, table, cfg)
    return code


def cmd_identities(cfg: RunConfig, args) -> int:
    payload, table, code = _rows_payload("identities", identities_rows(cfg), cfg)
    _emit(payload, table, cfg)
    return code


def cmd_norm(cfg: RunConfig, args) -> int:
    space = args.space
    if space == "lambda":
        f = parse_function(args.function, LAMBDA_DEGREE if args.function in NAMED_FUNCTIONS else 16, tailed=False)
        if isinstance(f, P.TailedSeries):
            f = f.truncate(LAMBDA_DEGREE)
        p = args.p if args.p is not None else 2.0
        t0 = time.perf_counter()
        value = S.lambda_norm(f, p)
        result = {"space": "lambda", "p": p, "norm_value": value, "point_evaluation_part": abs(f.coeffs[0]),
                  "method": "integral-means"}
        wall = time.perf_counter() - t0
    else:
        f = parse_function(args.function, cfg.degree)
        sup_cfg = SupSearchConfig(tolerance=min(1e-3, cfg.tol_sup))
        t0 = time.perf_counter()
        if space == "bmoa":
            rep = S.bmoa_norm(f, sup_cfg)
        elif space == "qp":
            if args.p is None:
                raise UsageError("--p is required for the Q_p norm")
            rep = S.qp_norm(f, args.p, sup_cfg)
        else:
            if args.measure is None:
                raise UsageError("--measure is required for the M(D_mu) norm")
            mu = parse_measure(args.measure)
            fast = M.as_radial(mu) is not None and S._nonnegative_coefficients(f)
            rep = S.mdmu_norm(f, mu, replace(sup_cfg, restrict_to_real_axis=fast), form=args.form)
        wall = time.perf_counter() - t0
        result = {"space": space, **rep.to_dict()}
        if args.p is not None:
            result["p"] = args.p
    if cfg.timings:
        result["wall_time"] = wall
    value = result["norm_value"]
    ok = math.isfinite(value)
    _emit({"report": "norm", "config": _config_view(cfg), "result": result}, [_flatten(result)], cfg)
    return EXIT_OK if ok else EXIT_FAIL


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flatten(v, prefix + k + "."))
        else:
            out[prefix + k] = v
    return out


def cmd_apply(cfg: RunConfig, args) -> int:
    f = parse_polynomial(args.input)
    n_out = args.n_out if args.n_out is not None else f.degree + cfg.degree
    if n_out < 0:
        raise UsageError("--n-out must be nonnegative")
    g = O.hilbert_coeff(f, n_out) if args.operator == "hilbert" else O.cesaro_coeff(f, n_out)
    check = None
    if args.operator == "hilbert":
        # the integral form must agree at seeded probe points inside |z| <= 0.9
        rng = np.random.default_rng(cfg.seed)
        rule = interval_rule(cfg.nodes)
        zs = 0.9 * np.sqrt(rng.uniform(size=8)) * np.exp(2j * np.pi * rng.uniform(size=8))
        # 600 coefficients reach rounding level for |z| <= 0.9
        full = O.hilbert_coeff(f, max(n_out, 600))
        check = max(abs(P.evaluate(full, complex(z)) - O.hilbert_integral(f, complex(z), rule))
                    / max(1.0, abs(P.evaluate(full, complex(z)))) for z in zs)
    if cfg.emit == "json":
        text = g.to_json() + "\n"
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit({}, [{"n": i, "re": float(c.real), "im": float(c.imag)} for i, c in enumerate(g.coeffs)], cfg)
    if check is not None and not check <= 1e-10:
        print(f"integral form disagrees with the coefficient form: {check:.3e}; raise --nodes", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_boundedness(cfg: RunConfig, args) -> int:
    mu = parse_measure(args.measure)
    t0 = time.perf_counter()
    report = M.boundedness_check(mu)
    d = report.to_dict()
    if cfg.timings:
        d["wall_time"] = time.perf_counter() - t0
    table = [{**r, "verdict": report.verdict} for r in d["rows"]]
    _emit({"report": "boundedness", "config": _config_view(cfg), "measure": mu.to_dict(), **d}, table, cfg)
    return EXIT_OK


def cmd_potential(cfg: RunConfig, args) -> int:
    mu = parse_measure(args.measure)
    rad = M.as_radial(mu)
    radii = args.r if args.r else [0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999]
    rows = []
    for r in radii:
        if not 0.0 <= r < 1.0:
            raise UsageError("radii must lie in [0, 1)")
        row = {"r": r}
        if rad is not None and r > 0.0:
            row["u_radial"] = M.potential_u_radial(rad, r)
            row["v_radial"] = M.potential_v_radial(rad, r)
        if args.two_d or rad is None:
            row["u_2d"] = float(M.potential_u(mu, complex(r)))
            row["v_2d"] = float(M.potential_v(mu, complex(r)))
        rows.append(row)
    ok = all(math.isfinite(v) for row in rows for v in row.values())
    total = M.total_moment(mu)
    _emit({"report": "potential", "config": _config_view(cfg), "measure": mu.to_dict(),
           "total_moment": total, "rows": rows}, rows, cfg)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "constants": cmd_constants,
    "identities": cmd_identities,
    "norm": cmd_norm,
    "apply": cmd_apply,
    "boundedness": cmd_boundedness,
    "potential": cmd_potential,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--tol-quad", type=float, help="tolerance for quadrature rows")
    common.add_argument("--tol-sup", type=float, help="tolerance for sup-search rows")
    common.add_argument("--nodes", type=int, help="Gauss nodes for integral forms")
    common.add_argument("--degree", type=int, help="head degree of truncated series")
    common.add_argument("--emit", choices=("json", "csv"))
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, help="seed for random probe sets")
    common.add_argument("--timings", action="store_true", default=None, help="include wall times")

    parser = argparse.ArgumentParser(prog="hilbertdisc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="reference constants table")
    sub.add_parser("identities", parents=[common], help="algebraic and integral identity residuals")
    p = sub.add_parser("norm", parents=[common], help="BMOA, Q_p, M(D_mu) or Lambda(p,1/p) norm")
    p.add_argument("--space", choices=("bmoa", "qp", "mdmu", "lambda"), required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--measure", help="measure JSON, or @path")
    p.add_argument("--function", required=True,
                   help="hilbert-one, cesaro-one, log, or coefficient JSON / @path")
    p.add_argument("--form", choices=("u", "v"), default="u")
    p = sub.add_parser("apply", parents=[common], help="apply H or C to a polynomial")
    p.add_argument("--operator", choices=("hilbert", "cesaro"), required=True)
    p.add_argument("--input", required=True, help="coefficient JSON, or @path")
    p.add_argument("--n-out", type=int)
    p = sub.add_parser("boundedness", parents=[common], help="boundedness verdict for a measure")
    p.add_argument("--measure", required=True)
    p = sub.add_parser("potential", parents=[common], help="U and V potentials of a measure")
    p.add_argument("--measure", required=True)
    p.add_argument("--r", type=float, nargs="*")
    p.add_argument("--two-d", action="store_true", help="also evaluate the two-dimensional quadrature")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {k: getattr(args, k) for k in _CONFIG_KEYS}
    try:
        cfg = load_config(args.config, overrides, args.command)
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FloatingPointError, ZeroDivisionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
