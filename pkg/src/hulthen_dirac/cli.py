"""Command-line front end.

Subcommands: spectrum, table1, wavefunction, pt, verify.
Exit codes: 0 success, 1 empty result, 2 usage or parameter error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .model import ModelParams
from . import spectrum as sp
from . import verify
from . import wavefn as wf

_PARAM_FLAGS = ("beta", "q", "m0", "V0", "S0", "V1", "V2")


def _add_param_args(ap: argparse.ArgumentParser):
    ap.add_argument("--params", help="JSON file with model parameters")
    for name in _PARAM_FLAGS:
        ap.add_argument(f"--{name}", type=float, default=None)
    ap.add_argument("--component", type=int, choices=(1, 2), default=None)


def _load_params(args) -> ModelParams:
    data = {"beta": 1.0, "q": 1.0, "m0": 1.0, "V0": 0.0, "S0": 0.0,
            "V1": 0.0, "V2": 0.0, "component": 1}
    if args.params:
        with open(args.params) as fh:
            file_data = json.load(fh)
        unknown = set(file_data) - set(data)
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        data.update(file_data)
    for name in _PARAM_FLAGS:
        v = getattr(args, name)
        if v is not None:
            data[name] = v
    if args.component is not None:
        data["component"] = args.component
    return ModelParams.from_json(json.dumps(data))


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_spectrum(args) -> int:
    p = _load_params(args)
    rep = sp.solve_levels(p, args.nmax)
    _emit(rep.to_csv() if args.format == "csv" else rep.to_json(), args.out)
    return 0 if rep.levels else 1


def cmd_table1(args) -> int:
    reports = verify.run_suite("table1")
    primary = [r for r in reports if not r.check_name.startswith("table1-diag")]
    diagnostics = [r for r in reports if r.check_name.startswith("table1-diag")]
    for r in primary:
        r.passed = r.abs_dev <= args.tolerance or (
            not math.isnan(r.analytic) and abs(r.analytic - r.oracle) <= args.tolerance)
    if args.json:
        _emit(json.dumps({"comparison": [json.loads(r.to_json_line()) for r in primary],
                          "diagnostics": [json.loads(r.to_json_line())
                                          for r in diagnostics]}, indent=2),
              args.out)
    else:
        lines = [verify.format_table(primary)]
        if diagnostics:
            lines.append("")
            lines.append("alternate coefficient readings (diagnostic):")
            lines.append(verify.format_table(diagnostics))
        _emit("\n".join(lines), args.out)
    return 0 if all(r.passed for r in primary) else 1


def cmd_wavefunction(args) -> int:
    p = _load_params(args)
    if p.q == 0:
        if args.energy is None:
            raise ValueError("the q = 0 exponential family needs --energy")
        wave = wf.exponential_wave(p, args.energy, args.n)
        s = np.linspace(1e-3, 6.0 / max(1.0, abs(wave.arg_scale)), args.points)
        _emit(wf.export_csv(wave, s), args.out)
        sidecar = {"s_exponent": wave.s_exponent, "exp_coeff": wave.exp_coeff,
                   "laguerre_order": wave.lag_order, "arg_scale": wave.arg_scale}
    else:
        if args.energy is not None:
            spec = wf.wave_from_energy(p, args.energy, args.n)
            spec.norm_numeric = wf.normalization_numeric(spec)
        else:
            rep = sp.solve_levels(p, args.n)
            match = [lv for lv in rep.levels if lv.n == args.n]
            if not match:
                sys.stderr.write("no bound level at the requested n\n")
                return 1
            spec = wf.assemble(p, match[0])
        s = np.linspace(1e-4, 1 - 1e-4, args.points)
        _emit(wf.export_csv(spec, s), args.out)
        sidecar = {"alpha_prime": float(np.real(spec.alpha_prime)),
                   "beta_prime": float(np.real(spec.beta_prime)),
                   "norm": spec.norm_numeric}
    sidecar_path = (args.out or "wavefunction.csv") + ".json"
    if args.out:
        with open(sidecar_path, "w") as fh:
            json.dump(sidecar, fh, indent=2)
    else:
        sys.stdout.write(json.dumps(sidecar) + "\n")
    return 0


def cmd_pt(args) -> int:
    p = _load_params(args)
    variant = args.variant.replace("-", "_")
    components = [p.component] if args.component is not None else [1, 2]
    lams = [+1, -1] if args.lam == "both" else [int(args.lam)]
    all_levels = []
    reports = []
    for comp in components:
        rep = sp.solve_pt(p.with_component(comp), args.nmax, variant=variant)
        rep.levels = [lv for lv in rep.levels if lv.lam in lams]
        reports.append(rep)
        all_levels.extend(rep.levels)
    if args.format == "json":
        payload = [json.loads(r.to_json()) for r in reports]
        _emit(json.dumps(payload, indent=2), args.out)
    else:
        lines = ["component,n,lambda,sheet,re_E,im_E,residual,is_real,paired"]
        for lv in all_levels:
            e = complex(lv.E)
            lines.append(f"{lv.component},{lv.n},{lv.lam},{lv.sheet},"
                         f"{e.real!r},{e.imag!r},{lv.residual!r},"
                         f"{lv.is_real},{lv.paired}")
        _emit("\n".join(lines), args.out)
    return 0 if all_levels else 1


def cmd_verify(args) -> int:
    reports = verify.run_suite(args.suite)
    _emit(verify.format_table(reports), args.out)
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hulthen-dirac",
        description="Bound-state spectra and spinor components for a (1+1)D "
                    "Dirac Hamiltonian with screened-exponential couplings")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", help="solve real bound levels")
    _add_param_args(s)
    s.add_argument("--nmax", type=int, default=4)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out")
    s.set_defaults(func=cmd_spectrum)

    t = sub.add_parser("table1", help="compare against the published table")
    t.add_argument("--tolerance", type=float, default=1e-2)
    t.add_argument("--json", action="store_true")
    t.add_argument("--out")
    t.set_defaults(func=cmd_table1)

    w = sub.add_parser("wavefunction", help="sample a level's wave function")
    _add_param_args(w)
    w.add_argument("--n", type=int, default=0)
    w.add_argument("--energy", type=float, default=None,
                   help="externally supplied energy (required for q = 0)")
    w.add_argument("--points", type=int, default=400)
    w.add_argument("--out")
    w.set_defaults(func=cmd_wavefunction)

    c = sub.add_parser("pt", help="complex PT-symmetric levels")
    _add_param_args(c)
    c.add_argument("--nmax", type=int, default=1)
    c.add_argument("--variant", choices=("imag-beta", "all-imag"),
                   default="imag-beta")
    c.add_argument("--lambda", dest="lam", choices=("+1", "-1", "both"),
                   default="both")
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--out")
    c.set_defaults(func=cmd_pt)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
