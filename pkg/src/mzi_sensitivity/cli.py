"""Command-line front end.

Subcommands: ``report``, ``sweep``, ``oracle-check`` and ``table1``.
Exit codes: 0 ok, 2 usage, 3 domain error, 4 I/O error, 5 oracle mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import evaluation, fock_oracle, qfi
from .errors import DomainError, SeparabilityError, SingularFisherError, TruncationError
from .qfi import BeamSplitterConfig, Theory
from .states import CssMode, Family, InputStateSpec, analytic_moments, validate

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO, EXIT_ORACLE = 0, 2, 3, 4, 5
ORACLE_RTOL = 1e-8
DEV_FLOOR = 1e-4
TAU_GRID = (0.0, math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3)
THETA_GRID = (0.0, math.pi / 4, -math.pi / 4, math.pi / 2, -math.pi / 2, math.pi)


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, str):
        return x
    return f"{float(x):.16e}"


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


# -- argument parsing -------------------------------------------------------


def _state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", required=True, choices=[f.value for f in Family])
    p.add_argument("--alpha", type=_complex, default=0j)
    p.add_argument("--beta", type=_complex, default=0j)
    p.add_argument("--xi", type=_complex, default=0j)
    p.add_argument("--xi-prime", type=_complex, default=0j)
    p.add_argument("--zeta", type=_complex, default=0j)
    p.add_argument("--kappa", type=int, default=0)
    p.add_argument("--css-mode", choices=[m.value for m in CssMode],
                   default=CssMode.ASYMPTOTIC.value)
    p.add_argument("--na", type=float, default=None,
                   help="mean photon number of mode a (overrides --alpha, or --xi for two-svs)")


def _bs_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--tau", type=float, default=None, help="splitting angle in radians")
    g.add_argument("--tau-as-transmission", type=float, default=None, metavar="T",
                   help="transmission ratio T, mapped to tau = 2 arccos(sqrt(T))")
    p.add_argument("--theta", type=float, default=None,
                   help="beam-splitter phase in radians (default: phase matched)")


def _common(p: argparse.ArgumentParser, formats=("text", "json")) -> None:
    p.add_argument("--upsilon", type=int, default=1)
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", default="-")
    p.add_argument("--gain-alt", action="store_true",
                   help="use the standard deviation instead of the variance in the gain")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mzi-sensitivity", description=__doc__)
    parser.add_argument("--config", help="flat key=value file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="sensitivity report for one input state")
    _state_args(p)
    _bs_args(p)
    _common(p)

    p = sub.add_parser("sweep", help="tabulate bounds over a parameter grid")
    _state_args(p)
    _bs_args(p)
    _common(p, formats=("csv", "json"))
    p.add_argument("--param", required=True, choices=evaluation.SWEEP_PARAMS)
    p.add_argument("--range", required=True, dest="grid_range", metavar="START:STOP:STEPS")
    p.add_argument("--theory", choices=tuple(evaluation.THEORIES), default="both")

    p = sub.add_parser("oracle-check", help="compare closed forms with the Fock oracle")
    _state_args(p)
    p.add_argument("--cutoff", type=int, default=None)

    p = sub.add_parser("table1", help="the six reference rows at (n_a, n_b)")
    p.add_argument("--na", type=float, required=True)
    p.add_argument("--nb", type=float, required=True)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--output", default="-")
    return parser


def read_config(path: str) -> list[str]:
    """Turn a key=value file into flag tokens placed ahead of the real flags."""
    tokens = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            if value.lower() in ("true", "yes", "on"):
                tokens.append(flag)
            elif value.lower() in ("false", "no", "off"):
                continue
            else:
                tokens += [flag, value]
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    argv = list(argv)
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
            del argv[i:i + 2]
            break
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            del argv[i]
            break
    if path is None:
        return argv
    try:
        extra = read_config(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    # subcommand first, then config flags, then command-line flags (last wins)
    for i, tok in enumerate(argv):
        if not tok.startswith("-"):
            return argv[: i + 1] + extra + argv[i + 1:]
    return argv + extra


def spec_from_args(args) -> InputStateSpec:
    fam = Family(args.state)
    alpha, xi = args.alpha, args.xi
    if args.na is not None:
        if args.na < 0:
            raise DomainError("--na must be non-negative")
        if fam is Family.TWO_SVS:
            xi = complex(math.asinh(math.sqrt(args.na)))
        else:
            alpha = complex(math.sqrt(args.na))
    spec = InputStateSpec(
        family=fam, alpha=alpha, beta=args.beta, xi=xi, xi_prime=args.xi_prime,
        zeta=args.zeta, kappa=args.kappa, css_mode=CssMode(args.css_mode),
    )
    return validate(spec)


def _tau(args) -> float | None:
    if getattr(args, "tau_as_transmission", None) is not None:
        return BeamSplitterConfig.from_transmission(args.tau_as_transmission).tau
    return args.tau


# -- output -----------------------------------------------------------------


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError:
        if os.path.exists(path):
            os.remove(path)
        raise


def render_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


def render_json(rows: list[dict], columns: list[str]) -> str:
    def clean(v):
        if isinstance(v, float) and math.isnan(v):
            return None
        return v

    return json.dumps([{c: clean(r[c]) for c in columns} for r in rows], indent=1) + "\n"


def render_text(pairs: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k:<{width}}  {fmt(v) if isinstance(v, float) else v}\n"
                   for k, v in pairs)


def _theta_text(choice: qfi.ThetaChoice) -> str:
    if choice.is_any:
        return "any"
    return f"{fmt(choice.angle)} (solutions {', '.join(fmt(s) for s in choice.solutions)})"


# -- subcommands ------------------------------------------------------------


def cmd_report(args) -> int:
    spec = spec_from_args(args)
    m = analytic_moments(spec)
    ups = args.upsilon
    out: dict[str, object] = {
        "state": spec.family.value,
        "n_a": m.n_a, "n_b": m.n_b, "var_a": m.var_a, "var_b": m.var_b,
        "a_sq_re": m.a_sq.real, "a_sq_im": m.a_sq.imag,
        "b_sq_re": m.b_sq.real, "b_sq_im": m.b_sq.imag,
        "cross_nn": m.cross_nn, "mean_N": m.mean_N, "mean_N_sq": m.mean_N_sq,
        "separable": m.separable,
    }
    row = evaluation.evaluate_row(m, math.nan, (Theory.TWO_PARAM, Theory.SINGLE_PARAM),
                                  ups, gain_alt=args.gain_alt)
    out["frak_G"] = row["frak_G"]
    out["four_var_Jz"] = row["four_var_Jz"]
    out["frak_F_max"] = row["frak_F_max"]
    for t in (Theory.TWO_PARAM, Theory.SINGLE_PARAM):
        rep = qfi.optimal(m, t)
        out[f"tau_opt_{t.value}"] = rep.tau_choice.value
        out[f"theta_opt_{t.value}"] = _theta_text(rep.theta_choice)
        out[f"F_max_{t.value}"] = rep.max_effective_qfi
        out[f"V_opt_{t.value}"] = rep.bound_variance / ups
        out[f"gain_opt_{t.value}"] = row[f"gain_{t.value}"]
    tau = _tau(args)
    if tau is not None:
        bs = evaluation.configured_bs(m, tau, args.theta)
        q = qfi.qfi_matrix_any(m, bs)
        out.update(tau=bs.tau, theta=bs.theta, transmission=bs.transmission,
                   F_ss=q.f_ss, F_sd=q.f_sd, F_dd=q.f_dd)
        for t in (Theory.TWO_PARAM, Theory.SINGLE_PARAM):
            try:
                v = evaluation.bound_at(m, t, ups, bs.tau, bs.theta)
            except SingularFisherError:
                v = math.inf
            out[f"V_{t.value}"] = v
            out[f"gain_{t.value}"] = (qfi.gain(v, ups, m.mean_N, args.gain_alt)
                                      if math.isfinite(v) else -math.inf)
    lim = qfi.sensitivity_limits(m)
    out.update(snl=lim.snl, hl=lim.hl, hofmann=lim.hofmann)
    if args.format == "json":
        text = json.dumps({k: (None if isinstance(v, float) and not math.isfinite(v) else v)
                           for k, v in out.items()}, indent=1) + "\n"
    else:
        text = render_text(list(out.items()))
    _write(text, args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        start, stop, steps = evaluation.parse_range(args.grid_range)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    spec = spec_from_args(args)
    theories = evaluation.THEORIES[args.theory]
    values = evaluation.grid(start, stop, steps)
    rows = evaluation.sweep(spec, args.param, values, theories, args.upsilon,
                            n_a=args.na, tau=_tau(args), theta=args.theta,
                            gain_alt=args.gain_alt)
    cols = evaluation.sweep_columns(theories)
    text = render_csv(rows, cols) if args.format == "csv" else render_json(rows, cols)
    _write(text, args.output)
    return EXIT_OK


def qfi_deviation(analytic: qfi.QfiMatrix, numeric: qfi.QfiMatrix) -> float:
    """Largest element-wise relative deviation.

    Entries that vanish analytically (F_sd at τ = π/2, or F_dd at an
    anti-matched phase) carry only round-off, so the denominator is floored
    at ``DEV_FLOOR`` times the largest matrix element.
    """
    scale = max(abs(analytic.f_ss), abs(analytic.f_dd), 1e-300)
    dev = 0.0
    for x, y in ((numeric.f_ss, analytic.f_ss), (numeric.f_sd, analytic.f_sd),
                 (numeric.f_dd, analytic.f_dd)):
        dev = max(dev, abs(x - y) / max(abs(y), DEV_FLOOR * scale))
    return dev


def oracle_check(spec: InputStateSpec, cutoff: int | None = None):
    """Worst deviation between the closed forms and the oracle over the τ/ϑ grid.

    Returns ``(worst, worst_config, state, lines)``.
    """
    m = analytic_moments(spec)
    state = fock_oracle.build_fock_state(spec, cutoff)
    lines = []
    worst, where = 0.0, None
    for tau in TAU_GRID:
        for theta in THETA_GRID:
            bs = BeamSplitterConfig(tau, theta)
            dev = qfi_deviation(qfi.qfi_matrix_any(m, bs),
                                fock_oracle.qfi_matrix_numeric(state, bs))
            lines.append((tau, theta, dev))
            if dev > worst or where is None:
                worst, where = dev, (tau, theta)
    return worst, where, state, lines


def cmd_oracle_check(args) -> int:
    spec = spec_from_args(args)
    try:
        worst, where, state, lines = oracle_check(spec, args.cutoff)
    except TruncationError as exc:
        print(f"FAIL truncation: {exc}")
        return _fail(EXIT_ORACLE, "truncation", str(exc))
    print(f"state {spec.family.value}  cutoff {state.cutoff}  tail_mass {state.tail_mass:.3e}")
    print(f"{'tau':>12} {'theta':>12} {'max_rel_dev':>12}")
    for tau, theta, dev in lines:
        print(f"{tau:12.6f} {theta:12.6f} {dev:12.3e}")
    if worst < ORACLE_RTOL:
        print(f"PASS max dev {worst:.3e} < {ORACLE_RTOL:g}")
        return EXIT_OK
    print(f"FAIL max dev {worst:.3e} at tau={where[0]:.6f} theta={where[1]:.6f}")
    return _fail(EXIT_ORACLE, "oracle-mismatch",
                 f"max dev {worst:.3e} at tau={where[0]}, theta={where[1]}")


def cmd_table1(args) -> int:
    if args.na <= 0 or args.nb < 0:
        raise DomainError("table1 needs n_a > 0 and n_b >= 0")
    cols = ["state", "n_a", "n_b", "frak_G", "four_var_Jz", "frak_F", "tau_opt", "theta_opt"]
    rows = []
    for r in qfi.table1(args.na, args.nb):
        rows.append({
            "state": r.family.value, "n_a": r.n_a, "n_b": r.n_b,
            "frak_G": math.nan if r.frak_g is None else r.frak_g,
            "four_var_Jz": r.four_var_jz, "frak_F": r.frak_f,
            "tau_opt": r.tau_opt.value,
            "theta_opt": "any" if r.theta_opt.is_any else fmt(r.theta_opt.angle),
        })
    if args.format == "csv":
        text = render_csv(rows, cols)
    elif args.format == "json":
        text = render_json(rows, cols)
    else:
        width = [max(len(c), 12) for c in cols]
        text = "  ".join(c.ljust(w) for c, w in zip(cols, width)) + "\n"
        for r in rows:
            cells = [f"{r[c]:.6g}" if isinstance(r[c], float) else str(r[c]) for c in cols]
            text += "  ".join(s.ljust(w) for s, w in zip(cells, width)) + "\n"
    _write(text, args.output)
    return EXIT_OK


COMMANDS = {"report": cmd_report, "sweep": cmd_sweep,
            "oracle-check": cmd_oracle_check, "table1": cmd_table1}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        argv = _expand_config(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _fail(EXIT_USAGE, "usage", str(exc))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _fail(EXIT_USAGE, "usage", str(exc))
    except (DomainError, SeparabilityError, SingularFisherError, OverflowError) as exc:
        return _fail(EXIT_DOMAIN, "domain", str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, "io", str(exc))


if __name__ == "__main__":
    sys.exit(main())
