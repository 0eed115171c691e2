"""Command-line interface.

Exit codes: 0 pass, 1 numeric tolerance breach, 2 invalid input,
3 a published constant disagrees with the package's own oracle.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import extremal, fekete, skcore, subcheck
from .errors import SKError
from .reports import BoundReport
from .series import MAX_ORDER, NormalizedSeries, TruncatedSeries, koebe

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DISCREPANCY = 0, 1, 2, 3

CHECKS = (
    "admissibility",
    "log-energy",
    "per-coeff",
    "de-branges",
    "fek-lemma",
    "fekete",
    "q-class",
    "strong-order",
    "starlike-order",
    "half-bound",
    "dilog",
)

DEFAULTS = {
    "alpha": "1",
    "order": 64,
    "radius": None,
    "radii": "0.5,0.9,0.99",
    "samples": 2048,
    "tol": None,
    "format": "json",
    "output": None,
    "n": None,
    "terms": 10_000,
    "k": 1,
    "mu": None,
    "x": "-0.3333333333333333,0.1111111111111111",
    "oracle": False,
    "witness": False,
    "n_t": 31,
    "n_theta": 192,
    "series": None,
    "majorant": None,
}


class InputError(Exception):
    pass


# parsing helpers ------------------------------------------------------------


def parse_alpha_grid(text: str) -> list[float]:
    """``"a"`` or ``"start:stop:step"`` with inclusive endpoints."""
    text = str(text).strip()
    if ":" not in text:
        return [float(text)]
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"alpha grid must be start:stop:step, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise InputError("alpha grid step must be positive")
    n = int(math.floor((stop - start) / step + 1e-12)) + 1
    values = [start + i * step for i in range(max(n, 0))]
    return [round(v, 12) for v in values if v <= stop + 1e-12]


_COMPLEX_RE = re.compile(r"^([+-]?)(\d*\.?\d*(?:[eE][+-]?\d+)?)?i$")


def parse_complex(text: str) -> complex:
    """Accepts ``2``, ``0.5``, ``i``, ``-i``, ``1+i``, ``1-2.5i``."""
    s = str(text).strip().replace(" ", "")
    s = s.replace("I", "i").replace("j", "i").replace("J", "i")
    if s.endswith("i"):
        # insert an explicit 1 for bare i after a sign or at the start
        s = re.sub(r"(^|[+-])i$", r"\g<1>1i", s)
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"cannot parse complex number {text!r}") from exc


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"cannot parse number list {text!r}") from exc


def read_config(path: str) -> dict:
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def load_series(path: str, normalized: bool = True) -> TruncatedSeries:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read series file: {exc}") from exc
    s = TruncatedSeries.from_json(text)
    return NormalizedSeries(s.coeffs) if normalized else s


# output -----------------------------------------------------------------------


def _csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow({k: _cell(v) for k, v in row.items()})
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return v


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _alphas(args) -> list[float]:
    values = parse_alpha_grid(args.alpha)
    for a in values:
        skcore.AlphaParam(a)
    return values


def _one_alpha(args) -> float:
    values = _alphas(args)
    if len(values) != 1:
        raise InputError("this command takes a single alpha")
    return values[0]


def _radii(args) -> list[float]:
    radii = [float(args.radius)] if args.radius is not None else parse_floats(args.radii)
    for r in radii:
        if not 0 < r < 1:
            raise InputError(f"radius must lie in (0, 1), got {r}")
    return radii


def _order(args) -> int:
    order = int(args.order)
    if not 1 <= order <= MAX_ORDER:
        raise InputError(f"order must lie in [1, {MAX_ORDER}]")
    return order


def _report_exit(reports: list[BoundReport]) -> int:
    if any(not r.passed and not r.discrepancy for r in reports):
        return EXIT_FAIL
    if any(r.discrepancy for r in reports):
        return EXIT_DISCREPANCY
    return EXIT_OK


def _emit_reports(args, check: str, reports: list[BoundReport], extra: dict | None = None) -> int:
    code = _report_exit(reports)
    if args.format == "csv":
        rows = [
            {
                "claim": r.claim,
                "measured": float(r.measured),
                "bound": float(r.bound),
                "margin": float(r.margin),
                "pass": r.passed,
                "discrepancy": r.discrepancy,
            }
            for r in reports
        ]
        _emit(args, _csv(rows, ["claim", "measured", "bound", "margin", "pass", "discrepancy"]))
    else:
        doc = {"check": check, "exit_code": code, "reports": [r.to_dict() for r in reports]}
        if extra:
            doc.update(extra)
        _emit(args, _dump(doc))
    return code


# commands ---------------------------------------------------------------------


def cmd_coeffs(args) -> int:
    tol = args.tol if args.tol is not None else 1e-10
    n_max = int(args.n) if args.n is not None else _order(args)
    if n_max < 1:
        raise InputError("-n must be at least 1")
    rows = []
    for a in _alphas(args):
        rec = skcore.q_alpha_recurrence(a, n_max)
        for n in range(1, n_max + 1):
            closed = skcore.q_alpha_coeff(a, n)
            rows.append({"alpha": a, "n": n, "closed_form": closed, "recurrence": rec[n], "diff": abs(closed - rec[n])})
    if args.format == "csv":
        _emit(args, _csv(rows, ["alpha", "n", "closed_form", "recurrence", "diff"]))
    else:
        _emit(args, _dump(rows))
    return EXIT_FAIL if any(r["diff"] > tol for r in rows) else EXIT_OK


def cmd_curve(args) -> int:
    a = _one_alpha(args)
    radii = _radii(args)
    if len(radii) != 1:
        raise InputError("curve takes a single --radius")
    samples = int(args.samples)
    if samples < 16:
        raise InputError("need at least 16 samples")
    curve = skcore.boundary_curve(a, radii[0], samples)
    _emit(args, skcore.curve_to_csv(curve) if args.format == "csv" else skcore.curve_to_json(curve) + "\n")
    return EXIT_OK


def cmd_orders(args) -> int:
    rows = []
    for a in _alphas(args):
        b = skcore.order_bounds(a)
        rows.append(
            {
                "alpha": a,
                "starlike_order": b.starlike_order,
                "q_order": b.q_order,
                "strong_order": b.strong_order,
                "p_b_re_lower": skcore.p_b_re_lower(-a / 3),
            }
        )
    fields = ["alpha", "starlike_order", "q_order", "strong_order", "p_b_re_lower"]
    _emit(args, _csv(rows, fields) if args.format == "csv" else _dump(rows))
    return EXIT_OK


def cmd_extremal(args) -> int:
    a = _one_alpha(args)
    phi = extremal.extremal_series(a, _order(args))
    if args.format == "csv":
        rows = [{"n": n, "re": c.real, "im": c.imag} for n, c in enumerate(phi.coeffs)]
        _emit(args, _csv(rows, ["n", "re", "im"]))
    else:
        _emit(args, json.dumps(phi.to_dict()) + "\n")
    return EXIT_OK


def cmd_logcoeffs(args) -> int:
    if args.series:
        f = load_series(args.series)
    else:
        f = extremal.extremal_series(_one_alpha(args), _order(args))
    lc = extremal.log_coeffs(f)
    if args.format == "csv":
        rows = [{"n": n, "re": g.real, "im": g.imag} for n, g in enumerate(lc.gammas, 1)]
        _emit(args, _csv(rows, ["n", "re", "im"]))
    else:
        _emit(args, json.dumps(lc.to_dict()) + "\n")
    return EXIT_OK


def _grid_spec(args) -> fekete.GridSpec:
    return fekete.GridSpec(n_t=int(args.n_t), n_theta=int(args.n_theta))


def cmd_verify(args) -> int:
    check = args.check
    reports: list[BoundReport] = []
    extra = None
    if check == "admissibility":
        for a in _alphas(args):
            reports.append(skcore.admissibility_check(a, tol=args.tol or 1e-12))
    elif check == "log-energy":
        for a in _alphas(args):
            reports.append(extremal.verify_log_energy(a, int(args.terms), args.tol or 1e-6))
    elif check == "per-coeff":
        for a in _alphas(args):
            phi = extremal.extremal_series(a, _order(args))
            r = extremal.per_coeff_bound_check(phi, a, _order(args) - 1, args.tol or 1e-12)
            # the extremal function is a member, so a violation indicts the printed bound
            reports.append(_as_discrepancy(r))
    elif check == "de-branges":
        k = int(args.k)
        sources = {"koebe": koebe(k + 1)}
        for a in _alphas(args):
            sources[f"phi_{a!r}"] = extremal.extremal_series(a, k + 1)
        for form in ("milin", "printed"):
            for name, f in sources.items():
                r = extremal.de_branges_partial_check(extremal.log_coeffs(f, k), k, form, args.tol or 1e-9)
                reports.append(_with_source(r, name))
    elif check == "fek-lemma":
        for mu in _mus(args):
            reports.append(fekete.fek_lemma_check(mu, _grid_spec(args), args.tol or 1e-3))
    elif check == "fekete":
        results = []
        for a in _alphas(args):
            for mu in _mus(args):
                if args.oracle:
                    res = fekete.brute_force_max(a, int(args.k), mu, _grid_spec(args))
                    results.append(res)
                    reports.append(_sharpness_report(res))
                else:
                    reports.append(_formula_report(a, int(args.k), mu, args.tol or 1e-12))
        if results:
            if args.format == "csv":
                # the comparison table carries both bound variants side by side
                _emit(args, fekete.comparison_csv(results))
                return _report_exit(reports)
            extra = {"comparison": fekete.comparison_rows(results)}
    elif check == "q-class":
        for a in _alphas(args):
            reports.append(subcheck.q_class_check(a, _radii(args), MAX_ORDER, int(args.samples)))
    elif check == "strong-order":
        r_eval = float(args.radius) if args.radius is not None else 0.999
        for a in _alphas(args):
            reports.append(_strong_order_report(a, r_eval, args.tol or 1e-6))
    elif check == "starlike-order":
        for a in _alphas(args):
            low = skcore.min_real_part(a, 0.999, 4096)
            bound = skcore.starlike_order(a)
            reports.append(
                BoundReport(
                    claim=f"Re q_alpha > starlike order (alpha={a})",
                    measured=low,
                    bound=bound,
                    margin=low - bound,
                    passed=low > bound,
                )
            )
    elif check == "half-bound":
        readings = subcheck.half_bound_readings_check(_radii(args), MAX_ORDER, int(args.samples))
        for name, rep in readings.items():
            low = min(d["min_re"] for d in rep.details)
            reports.append(
                BoundReport(
                    claim=f"Re f/z > 1/2 under hypothesis {name}",
                    measured=low,
                    bound=0.5,
                    margin=low - 0.5,
                    passed=rep.passed,
                    witness=rep.worst_witness,
                    discrepancy=not rep.passed,
                )
            )
    elif check == "dilog":
        xs = [parse_complex(x).real for x in str(args.x).split(",")]
        for x in xs:
            d = extremal.dilog(x)
            redo = extremal.dilog(x, terms=10 * d.terms_used) if d.terms_used else d
            diff = abs(redo.value - d.value)
            reports.append(
                BoundReport(
                    claim=f"Li2({x!r}) partial sum within its tail bound",
                    measured=d.value,
                    bound=d.tail_bound,
                    margin=d.tail_bound - diff,
                    passed=diff <= d.tail_bound,
                    details={"terms": d.terms_used, "recomputed": redo.value},
                )
            )
    else:  # argparse restricts choices
        raise InputError(f"unknown check {check!r}")
    return _emit_reports(args, check, reports, extra)


def _mus(args) -> list[complex]:
    return [parse_complex(m) for m in str(args.mu).split(",")]


def _as_discrepancy(r: BoundReport) -> BoundReport:
    return BoundReport(**{**r.__dict__, "discrepancy": not r.passed})


def _with_source(r: BoundReport, source: str) -> BoundReport:
    return BoundReport(**{**r.__dict__, "claim": f"{r.claim} [{source}]", "details": {**r.details, "source": source}})


def _sharpness_report(res: fekete.SharpnessResult) -> BoundReport:
    return BoundReport(
        claim=f"|b_2k+1 - mu b_k+1^2| sharp bound (alpha={res.alpha}, k={res.k}, mu={fekete._fmt_complex(res.mu)})",
        measured=res.oracle_max,
        bound=res.bound_derived,
        margin=res.bound_derived - res.oracle_max,
        passed=res.passed,
        witness=res.argmax_witness.to_dict(),
        discrepancy=res.passed and res.discrepancy,
        details={"bound_printed": res.bound_printed, "samples": res.samples, "printed_consistent": res.printed_consistent},
    )


def _formula_report(a: float, k: int, mu: complex, tol: float) -> BoundReport:
    derived = fekete.fs_bound(a, k, mu, "derived")
    printed = fekete.fs_bound(a, k, mu, "printed")
    point = fekete.sharp_witness_point(a, k, mu)
    attained = fekete.functional_value(a, k, mu, point)
    return BoundReport(
        claim=f"derived vs printed Fekete-Szego bound (alpha={a}, k={k}, mu={fekete._fmt_complex(mu)})",
        measured=attained,
        bound=derived,
        margin=derived - attained,
        passed=abs(attained - derived) <= max(tol, 1e-12),
        witness=point.to_dict(),
        discrepancy=abs(printed - derived) > max(tol, 1e-12),
        details={"bound_printed": printed},
    )


def _strong_order_report(a: float, r: float, tol: float) -> BoundReport:
    closed = skcore.strongly_starlike_order(a) if a > -1 else 1.0
    num, theta = skcore.numeric_strong_order(a, r)
    return BoundReport(
        claim=f"numeric strong order at r={r} <= closed form (alpha={a})",
        measured=num,
        bound=closed,
        margin=closed - num,
        passed=num <= closed + tol,
        witness={"theta": theta, "radius": r},
        tolerance=tol,
    )


def cmd_fekete(args) -> int:
    results = []
    rows = []
    for a in _alphas(args):
        for mu in _mus(args):
            if args.oracle:
                results.append(fekete.brute_force_max(a, int(args.k), mu, _grid_spec(args)))
            else:
                rows.append(
                    {
                        "alpha": a,
                        "k": int(args.k),
                        "mu": fekete._fmt_complex(mu),
                        "bound_derived": fekete.fs_bound(a, int(args.k), mu, "derived"),
                        "bound_printed": fekete.fs_bound(a, int(args.k), mu, "printed"),
                    }
                )
    if results:
        if args.format == "csv":
            _emit(args, fekete.comparison_csv(results))
        else:
            _emit(args, _dump([r.to_dict() for r in results]))
        if any(not r.passed for r in results):
            return EXIT_FAIL
        return EXIT_DISCREPANCY if any(r.discrepancy for r in results) else EXIT_OK
    fields = ["alpha", "k", "mu", "bound_derived", "bound_printed"]
    _emit(args, _csv(rows, fields) if args.format == "csv" else _dump(rows))
    return EXIT_OK


def _membership_output(args, rep: subcheck.MembershipReport) -> None:
    doc = rep.to_dict()
    if not args.witness:
        doc.pop("worst_witness")
    if args.format == "csv":
        rows = [{"radius": r, "contained": c} for r, c in zip(rep.radii_tested, rep.contained)]
        text = _csv(rows, ["radius", "contained"])
        if args.witness and rep.worst_witness:
            w = rep.worst_witness
            text += f"# witness radius={w.get('radius')!r} theta={w.get('theta')!r} value={w.get('value')!r}\n"
        _emit(args, text)
    else:
        _emit(args, _dump(doc))


def cmd_member(args) -> int:
    if not args.series:
        raise InputError("member needs --series FILE")
    f = load_series(args.series)
    rep = subcheck.membership_sk(f, _one_alpha(args), _radii(args), int(args.samples), args.tol or 1e-9)
    _membership_output(args, rep)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_subcheck(args) -> int:
    if not args.series:
        raise InputError("subcheck needs --series FILE")
    f = load_series(args.series, normalized=False)
    if args.majorant:
        g = load_series(args.majorant, normalized=False)
    else:
        g = skcore.q_alpha_series(_one_alpha(args), f.order)
    rep = subcheck.subordination_check(f, g, _radii(args), int(args.samples), args.tol or 1e-9)
    _membership_output(args, rep)
    return EXIT_OK if rep.passed else EXIT_FAIL


# parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", default=None, help="alpha value or start:stop:step grid")
    common.add_argument("--order", type=int, default=None, help="series truncation order")
    common.add_argument("--radius", type=float, default=None)
    common.add_argument("--radii", default=None, help="comma-separated radii")
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("-o", "--output", default=None)
    common.add_argument("--config", default=None, help="key=value file mirroring the flags")

    parser = argparse.ArgumentParser(prog="skalpha", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="B_n table, closed form vs recurrence")
    p.add_argument("-n", type=int)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("curve", parents=[common], help="boundary samples of q_alpha(|z|=r)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("orders", parents=[common], help="order constants")
    p.set_defaults(func=cmd_orders)

    p = sub.add_parser("extremal", parents=[common], help="coefficients of the extremal function")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("logcoeffs", parents=[common], help="logarithmic coefficients")
    p.add_argument("--series", default=None)
    p.set_defaults(func=cmd_logcoeffs)

    p = sub.add_parser("verify", parents=[common], help="run a named verification")
    p.add_argument("check", choices=CHECKS)
    p.add_argument("--terms", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--mu", help="complex, comma-separated, e.g. 0,0.5,1+i")
    p.add_argument("--x", help="comma-separated real arguments")
    p.add_argument("--oracle", action="store_true", default=None)
    p.add_argument("--n-t", type=int)
    p.add_argument("--n-theta", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fekete", parents=[common], help="Fekete-Szego bound table")
    p.add_argument("--k", type=int)
    p.add_argument("--mu", help="complex, comma-separated, e.g. 0,0.5,1+i")
    p.add_argument("--oracle", action="store_true", default=None)
    p.add_argument("--n-t", type=int)
    p.add_argument("--n-theta", type=int)
    p.set_defaults(func=cmd_fekete)

    p = sub.add_parser("member", parents=[common], help="membership of a series file in the class")
    p.add_argument("--series", default=None)
    p.add_argument("--witness", action="store_true", default=None)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("subcheck", parents=[common], help="subordination f < g on sampled disks")
    p.add_argument("--series", default=None)
    p.add_argument("--majorant", default=None)
    p.add_argument("--witness", action="store_true", default=None)
    p.set_defaults(func=cmd_subcheck)
    return parser


def _merge_config(args) -> None:
    cfg = read_config(args.config) if args.config else {}
    for key, value in cfg.items():
        if key not in DEFAULTS:
            raise InputError(f"unknown config key {key!r}")
        if getattr(args, key, None) is None:
            setattr(args, key, _coerce(key, value))
    if args.format is None and args.output and args.output.lower().endswith(".csv"):
        args.format = "csv"
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    if args.mu is None:
        args.mu = "0,0.5,1,2,i" if args.command == "fekete" else "0"
    if args.format not in ("json", "csv"):
        raise InputError(f"format must be json or csv, got {args.format!r}")


def _coerce(key: str, value: str):
    if key in ("order", "samples", "terms", "k", "n", "n_t", "n_theta"):
        return int(value)
    if key in ("radius", "tol"):
        return float(value)
    if key in ("oracle", "witness"):
        return value.lower() in ("1", "true", "yes")
    return value


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse takes "-1:1:0.5" for an option; bind it to the preceding flag
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--alpha", "--mu", "--x") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_INPUT
    try:
        _merge_config(args)
        return args.func(args)
    except (InputError, SKError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
