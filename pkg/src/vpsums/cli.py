"""Command-line surface: kernel / worstcase / asymptotic / convergence / verify.

Exit codes: 0 success, 1 usage error, 2 numeric accuracy failure,
3 verification failure.  Flags override a line-oriented key=value config
file (--config), which makes sweep configs committable and re-runnable.
"""
import argparse
import json
import math
import sys

import numpy as np

from vpsums import asymptotics
from vpsums.errors import AccuracyError, ConvergenceError, DomainError
from vpsums.kernels import KernelSpec, TailKernelSpec, kernel_evaluator, tail_kernel_evaluator
from vpsums.moduli import parse_omega_spec
from vpsums.report import SweepSpec, run_convergence, run_verify, write_csv, write_json
from vpsums.sequences import parse_sequence_spec
from vpsums.worstcase import normalized_bounds_check, worstcase_Homega_lp, worstcase_Us


class _Parser(argparse.ArgumentParser):
    # spec'd exit codes: usage errors are 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _read_config(path):
    conf = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            conf[key.strip().replace("-", "_")] = val.strip()
    return conf


def _apply_config(args, parser):
    """Fill options the user left at their parser default from the config file."""
    if not getattr(args, "config", None):
        return args
    conf = _read_config(args.config)
    subparser = parser._vpsums_subparsers[args.command]
    for action in subparser._actions:
        key = action.dest
        if key in ("help", "config") or key not in conf:
            continue
        if getattr(args, key) != action.default:
            continue  # flag given explicitly wins
        raw = conf[key]
        if action.type is not None:
            value = action.type(raw)
        elif isinstance(action.default, bool) or isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes")
        else:
            value = raw
        setattr(args, key, value)
    return args


def _sanitize(obj):
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        obj = float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    parser = _Parser(prog="vpsums", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, n_required=True):
        p.add_argument("--config", help="key=value config file; flags override it")
        p.add_argument("--seq", help="sequence spec, e.g. geometric:q=0.5")
        p.add_argument("--beta", type=float, default=0.0)
        p.add_argument("--n", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--out", help="output path (default stdout)")

    k = sub.add_parser("kernel", help="evaluate a kernel on a uniform grid (CSV t,value)")
    k.add_argument("action", choices=["eval"])
    common(k)
    k.add_argument("--grid", type=int, default=1024)
    k.add_argument("--tol", type=float, default=1e-12)
    k.add_argument("--kind", choices=["tail", "generating", "residual"], default=None,
                   help="default: tail when --n/--p given, generating otherwise")
    k.add_argument("--format", choices=["csv", "json"], default="csv")

    w = sub.add_parser("worstcase", help="exact worst-case deviation (JSON)")
    common(w)
    w.add_argument("--s", type=float, help="class exponent in [1, inf]")
    w.add_argument("--omega", help="modulus spec, e.g. power:alpha=0.5")
    w.add_argument("--tol", type=float, default=1e-9)
    w.add_argument("--lp-grid", dest="lp_grid", type=int)
    w.add_argument("--bounds-check", action="store_true",
                   help="include the normalized two-sided envelope report (geometric only)")
    w.add_argument("--format", choices=["json", "csv"], default="json")

    a = sub.add_parser("asymptotic", help="asymptotic main term / envelope report (JSON)")
    a.add_argument("--theorem", choices=["1", "2", "3", "cor1", "cor2"], required=True)
    common(a)
    a.add_argument("--s", type=float)
    a.add_argument("--omega", help="modulus spec")
    a.add_argument("--tol", type=float, default=1e-10)
    a.add_argument("--lp-grid", dest="lp_grid", type=int)
    a.add_argument("--with-exact", dest="with_exact", action="store_true")
    a.add_argument("--format", choices=["json", "csv"], default="json")

    c = sub.add_parser("convergence", help="ratio-to-one sweep (CSV and optional SVG)")
    c.add_argument("--config", help="key=value config file; flags override it")
    c.add_argument("--seq", help="sequence spec")
    c.add_argument("--n0", type=_int_list, help="comma list of n-p+1 values")
    c.add_argument("--p", type=_int_list, help="comma list of p values")
    c.add_argument("--q", type=_float_list, default=[], help="optional comma list of q overrides")
    c.add_argument("--beta", type=float, default=0.0)
    c.add_argument("--s", type=float)
    c.add_argument("--omega", help="modulus spec")
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--lp-grid", dest="lp_grid", type=int)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", help="CSV output path (default stdout)")
    c.add_argument("--svg", help="SVG ratio-curve output path")
    c.add_argument("--format", choices=["csv", "json"], default="csv")

    v = sub.add_parser("verify", help="identity/invariant battery (exit 3 on failure)")
    v.add_argument("--config", help="key=value config file; flags override it")
    v.add_argument("--only", help="run a single named check")
    v.add_argument("--perturb", type=float, default=0.0,
                   help="test hook: bias the elliptic-identity lhs to confirm sensitivity")
    v.add_argument("--out", help="write the report here instead of stdout")

    parser._vpsums_subparsers = {"kernel": k, "worstcase": w, "asymptotic": a,
                                 "convergence": c, "verify": v}
    return parser


def _require(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_"), None) is None]
    if missing:
        raise DomainError(f"missing required option(s): {', '.join('--' + n for n in missing)}")


def _cmd_kernel(args):
    _require(args, "seq")
    seq = parse_sequence_spec(args.seq)
    kind = args.kind or ("tail" if args.n is not None or args.p is not None else "generating")
    if kind in ("tail", "residual"):
        _require(args, "n", "p")
        spec = TailKernelSpec(seq, args.n, args.p, args.beta)
        if kind == "tail":
            evaluator = tail_kernel_evaluator(spec, tol=args.tol)
        else:
            from vpsums.kernels import residual_kernel_evaluator
            evaluator = residual_kernel_evaluator(spec, tol=args.tol)
    else:
        evaluator = kernel_evaluator(KernelSpec(seq, args.beta), tol=args.tol)
    t = np.arange(args.grid) * (2.0 * math.pi / args.grid)
    values = evaluator(t)
    if args.format == "json":
        text = write_json(None, {"kind": kind, "seq": seq.label(), "beta": args.beta,
                                 "n": args.n, "p": args.p,
                                 "t": t.tolist(), "value": values.tolist()})
    else:
        text = write_csv(None, ["t", "value"], list(zip(t.tolist(), values.tolist())))
    _emit(text, args.out)
    return 0


def _cmd_worstcase(args):
    _require(args, "seq", "n", "p")
    if (args.s is None) == (args.omega is None):
        raise DomainError("specify exactly one of --s / --omega")
    seq = parse_sequence_spec(args.seq)
    if args.s is not None:
        result = worstcase_Us(seq, args.n, args.p, args.beta, args.s, tol=args.tol)
    else:
        omega = parse_omega_spec(args.omega)
        result = worstcase_Homega_lp(seq, args.n, args.p, args.beta, omega, lp_grid=args.lp_grid)
    payload = {
        "value": result.value,
        "method": result.method,
        "error_estimate": result.error_estimate,
        "normalized_value": result.normalized_value,
        "params": result.instance,
    }
    if args.bounds_check:
        rep = normalized_bounds_check(
            seq, args.n, args.p, args.beta, s=args.s,
            omega=parse_omega_spec(args.omega) if args.omega else None,
            lp_grid=args.lp_grid)
        payload["bounds_check"] = rep.__dict__
    _emit(_render_record(payload, args.format), args.out)
    return 0


def _render_record(payload, fmt):
    if fmt == "csv":
        flat = dict(payload.pop("params", {}))
        flat.update({k: v for k, v in payload.items() if not isinstance(v, dict)})
        keys = sorted(flat)
        return write_csv(None, keys, [[flat[k] for k in keys]])
    return write_json(None, _sanitize(payload))


def _cmd_asymptotic(args):
    _require(args, "seq", "n", "p")
    if (args.s is None) == (args.omega is None):
        raise DomainError("specify exactly one of --s / --omega")
    seq = parse_sequence_spec(args.seq)
    omega = parse_omega_spec(args.omega) if args.omega else None
    kw = dict(tol=args.tol)
    if args.theorem == "1":
        rep = asymptotics.thm1_transfer(seq, args.n, args.p, args.beta, s=args.s, omega=omega,
                                        lp_grid=args.lp_grid)
    elif args.theorem == "2":
        _require(args, "s")
        rep = asymptotics.thm2_report(seq, args.n, args.p, args.beta, args.s,
                                      with_exact=args.with_exact, **kw)
    elif args.theorem == "3":
        _require(args, "omega")
        rep = asymptotics.thm3_report(seq, args.n, args.p, args.beta, omega,
                                      with_exact=args.with_exact, lp_grid=args.lp_grid)
    else:
        rep = asymptotics.corollary_eval(seq, args.n, args.p, args.beta, s=args.s, omega=omega,
                                         with_exact=args.with_exact, lp_grid=args.lp_grid, **kw)
    payload = {
        "theorem": args.theorem,
        "main_term": rep.main_term,
        "remainder_envelope": rep.remainder_envelope,
        "exact_value": rep.exact_value,
        "ratio": rep.ratio,
        "params": rep.params,
    }
    _emit(_render_record(payload, args.format), args.out)
    return 0


def _cmd_convergence(args):
    _require(args, "seq", "n0", "p")
    if (args.s is None) == (args.omega is None):
        raise DomainError("specify exactly one of --s / --omega")
    sweep = SweepSpec(
        seq_spec=args.seq, n0_values=args.n0, p_values=args.p, q_values=args.q,
        beta=args.beta, s=args.s, omega_spec=args.omega, tol=args.tol,
        lp_grid=args.lp_grid, jobs=args.jobs, out=args.out, svg=args.svg,
    )
    rows, text = run_convergence(sweep)
    if args.format == "json":
        text = write_json(sweep.out, _sanitize(rows))
    if not args.out:
        sys.stdout.write(text)
    failed = [r for r in rows if str(r.get("status", "")).startswith("error")]
    return 2 if failed else 0


def _cmd_verify(args):
    ok, lines = run_verify(only=args.only, perturb=args.perturb)
    text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if ok else 3


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "kernel": _cmd_kernel,
        "worstcase": _cmd_worstcase,
        "asymptotic": _cmd_asymptotic,
        "convergence": _cmd_convergence,
        "verify": _cmd_verify,
    }
    try:
        args = _apply_config(args, parser)
        return handlers[args.command](args)
    except DomainError as exc:
        print(f"vpsums: usage error: {exc}", file=sys.stderr)
        return 1
    except (AccuracyError, ConvergenceError) as exc:
        print(f"vpsums: accuracy failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
