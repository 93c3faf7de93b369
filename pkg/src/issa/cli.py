"""Command-line entry point.

Subcommands: generate synthetic data, run the main optimizer, run a
baseline, execute a bound-validation check, or summarize traces.  Exit
codes: 0 success, 1 usage error, 2 numeric divergence, 3 I/O error.
"""

import argparse
import csv
import sys

import numpy as np

from . import baselines, data, validation
from .estimator import DivergenceError
from .objectives import scale_to_unit_hessian
from .optimizer import RunConfig, run
from .traces import TraceFile, read_trace, write_trace

EXIT_USAGE = 1
EXIT_DIVERGED = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser():
    parser = _Parser(prog="issa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic ridge dataset")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--truncation", type=float, default=data.DEFAULT_TRUNCATION)
    gen.add_argument("--out", required=True)

    runp = sub.add_parser("run", help="run the stochastic second-order optimizer")
    _add_problem_args(runp)
    runp.add_argument("--variant", choices=("practical", "theoretical", "online"),
                      default="practical")
    runp.add_argument("--tau", type=int, default=5)
    runp.add_argument("--step-mode", choices=("theorem1", "fixed"), default="fixed")
    runp.add_argument("--c", type=float, default=1.0)
    runp.add_argument("--iters", type=int, default=1000)
    runp.add_argument("--grad-tol", type=float, default=1e-10)
    runp.add_argument("--seed", type=int, default=0)
    runp.add_argument("--truncate-cap", type=int, default=None)
    runp.add_argument("--grad-batch", type=int, default=None)
    runp.add_argument("--grad-growth", type=float, default=1.0)
    runp.add_argument("--grad-seed", type=int, default=None)
    runp.add_argument("--trace", default=None)

    base = sub.add_parser("baseline", help="run a reference optimizer")
    _add_problem_args(base)
    base.add_argument("--algo", choices=("gd", "lissa", "lbfgs", "bfgs"), required=True)
    base.add_argument("--step", type=float, default=1.0)
    base.add_argument("--lissa-s1", type=int, default=1)
    base.add_argument("--lissa-s2", type=int, default=20)
    base.add_argument("--lbfgs-mem", type=int, default=5)
    base.add_argument("--iters", type=int, default=1000)
    base.add_argument("--grad-tol", type=float, default=1e-10)
    base.add_argument("--seed", type=int, default=0)
    base.add_argument("--trace", default=None)

    val = sub.add_parser("validate", help="check a theoretical bound empirically")
    val.add_argument("--check", required=True, choices=(
        "first-moment", "second-moment", "contraction", "quad-regime", "approx-bound"))
    val.add_argument("--alpha", type=float, default=0.3)
    val.add_argument("--m", type=int, default=30)
    val.add_argument("--trials", type=int, default=5000)
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--n", type=int, default=200)
    val.add_argument("--d", type=int, default=10)
    val.add_argument("--tau", type=int, default=5)
    val.add_argument("--steps", type=int, default=10)
    val.add_argument("--out", default=None)

    cmp = sub.add_parser("compare", help="summarize traces into one CSV")
    cmp.add_argument("--traces", required=True,
                     help="comma-separated trace paths")
    cmp.add_argument("--threshold", type=float, default=1e-8,
                     help="suboptimality level for the iterations-to column")
    cmp.add_argument("--out", required=True)
    return parser


def _add_problem_args(p):
    p.add_argument("--objective", choices=("ridge", "logistic"), default="ridge")
    p.add_argument("--data", default=None, help="libsvm dataset path")
    p.add_argument("--synthetic", default=None, metavar="N,D,SEED",
                   help="generate a synthetic ridge problem instead of loading")
    p.add_argument("--lambda", dest="lam", type=float, default=1e-2)


def _load_objective(args, parser):
    if (args.data is None) == (args.synthetic is None):
        parser.error("exactly one of --data or --synthetic is required")
    if args.synthetic is not None:
        if args.objective != "ridge":
            parser.error("--synthetic generates ridge problems only")
        try:
            n, d, seed = (int(v) for v in args.synthetic.split(","))
        except ValueError:
            parser.error("--synthetic expects N,D,SEED")
        problem = data.generate_synthetic(data.DatasetSpec(n=n, d=d, seed=seed,
                                                           lam=args.lam))
    elif args.objective == "ridge":
        problem = data.load_libsvm_ridge(args.data, args.lam)
    else:
        problem = data.load_libsvm(args.data, args.lam)
    return scale_to_unit_hessian(problem)


def _emit_trace(path, rows, meta):
    if path is None:
        return
    write_trace(path, TraceFile(meta=meta, rows=rows))


def _cmd_generate(args):
    problem = data.generate_synthetic(
        data.DatasetSpec(n=args.n, d=args.d, seed=args.seed,
                         truncation=args.truncation))
    data.write_libsvm(args.out, problem.Z, problem.y)
    print(f"wrote {args.n}x{args.d} synthetic dataset to {args.out}")
    return 0


def _cmd_run(args, parser):
    obj = _load_objective(args, parser)
    config = RunConfig(
        variant=args.variant,
        tau=args.tau,
        step_mode=args.step_mode,
        c_fixed=args.c,
        max_iters=args.iters,
        grad_tol=args.grad_tol,
        seed=args.seed,
        truncate_cap=args.truncate_cap,
        grad_batch0=args.grad_batch,
        grad_growth=args.grad_growth,
        grad_seed=args.grad_seed,
    )
    rows = run(config, obj)
    last = rows[-1]
    print(f"iters={last.iter} fx={last.fx:.6e} grad_norm={last.grad_norm:.6e}")
    _emit_trace(args.trace, rows, _run_meta(obj, seed=args.seed, variant=args.variant,
                                            tau=args.tau))
    return 0


def _cmd_baseline(args, parser):
    obj = _load_objective(args, parser)
    if args.algo == "gd":
        rows = baselines.gd_run(obj, step=args.step, iters=args.iters,
                                grad_tol=args.grad_tol)
    elif args.algo == "lissa":
        cfg = baselines.LissaConfig(s1=args.lissa_s1, s2=args.lissa_s2,
                                    step=args.step)
        rows = baselines.lissa_run(obj, cfg=cfg, iters=args.iters, seed=args.seed,
                                   grad_tol=args.grad_tol)
    elif args.algo == "lbfgs":
        rows = baselines.lbfgs_run(obj, mem=args.lbfgs_mem, iters=args.iters,
                                   grad_tol=args.grad_tol)
    else:
        rows = baselines.bfgs_run(obj, iters=args.iters, grad_tol=args.grad_tol)
    last = rows[-1]
    print(f"{args.algo}: iters={last.iter} fx={last.fx:.6e} "
          f"grad_norm={last.grad_norm:.6e}")
    _emit_trace(args.trace, rows, _run_meta(obj, seed=args.seed, variant=args.algo,
                                            tau=0))
    return 0


def _run_meta(obj, **kw):
    meta = {"kind": obj.kind, "s": f"{obj.s:.17g}", "alpha": f"{obj.alpha:.17g}",
            "beta": f"{obj.beta:.17g}"}
    meta.update({k: str(v) for k, v in kw.items()})
    return meta


def _print_report(rep):
    status = "PASS" if rep.passed else "FAIL"
    print(f"{rep.quantity}: empirical={rep.empirical:.6g} bound={rep.bound:.6g} "
          f"stderr={rep.stderr:.3g} trials={rep.trials} m={rep.m} "
          f"alpha={rep.alpha:.4g} -> {status}")


def _cmd_validate(args):
    ok = True
    if args.check == "first-moment":
        cap = validation.first_moment_spectrum_cap(args.alpha)
        H = data.random_spd(args.d, args.alpha, cap, args.seed)
        rep = validation.check_first_moment(H, args.m, args.alpha)
        _print_report(rep)
        ok = rep.passed
    elif args.check == "second-moment":
        problem = data.ridge_with_alpha(args.n, args.d, args.alpha, args.seed)
        obj = scale_to_unit_hessian(problem)
        rep = validation.check_second_moment(obj, args.m, args.trials, args.seed)
        _print_report(rep)
        ok = rep.passed
    elif args.check == "approx-bound":
        cap = validation.first_moment_spectrum_cap(args.alpha)
        H = data.random_spd(args.d, args.alpha, min(1.0, max(args.alpha, cap)),
                            args.seed)
        E = validation.expected_estimator(H, args.m)
        Hinv = np.linalg.inv(H)
        lhs = float(np.linalg.norm(E - Hinv, 2))
        bound = validation.approx_error_bound(args.alpha, args.m)
        ok = lhs <= bound
        print(f"approx_bound: |E[R]-H^-1|={lhs:.6g} bound={bound:.6g} "
              f"-> {'PASS' if ok else 'FAIL'}")
    elif args.check == "contraction":
        problem = data.ridge_with_alpha(args.n, args.d, args.alpha, args.seed)
        obj = scale_to_unit_hessian(problem)
        x0 = np.ones(obj.d)
        reports = validation.check_contraction(obj, x0, args.tau, args.steps,
                                               args.trials, args.seed)
        for rep in reports:
            print(f"k={rep.k} m={rep.m} mean_decrease={rep.lhs:.6g} "
                  f"mu*subopt={rep.rhs:.6g} stderr={rep.stderr:.3g} "
                  f"-> {'PASS' if rep.passed else 'FAIL'}")
        ok = all(r.passed for r in reports)
    else:
        problem = data.ridge_with_alpha(args.n, args.d, max(args.alpha, 0.9),
                                        args.seed)
        obj = scale_to_unit_hessian(problem)
        lo, hi = validation.quad_regime_window(obj.alpha, obj.beta, args.tau)
        print(f"window at m={args.tau}: [{lo:.6g}, {hi:.6g}]")
        if lo > hi:
            print("window empty; nothing to check")
            return 0
        g_target = 0.5 * (lo + hi)
        x0 = _x0_with_grad_norm(obj, g_target)
        reports = validation.check_quadratic_regime(obj, x0, args.tau, args.trials,
                                                    args.seed, steps=args.steps)
        for rep in reports:
            print(f"k={rep.k} m={rep.m} E|g+|={rep.lhs:.6g} 4(b/a^2)|g|^2={rep.rhs:.6g}"
                  f" stderr={rep.stderr:.3g} -> {'PASS' if rep.passed else 'FAIL'}")
        print(f"steps in regime: {len(reports)}")
        ok = bool(reports) and all(r.passed for r in reports)
    return 0 if ok else EXIT_DIVERGED


def _x0_with_grad_norm(obj, target):
    """Scale a displacement from the minimizer so |grad F(x0)| == target."""
    from . import linalg

    H = obj.full_hessian()
    b = obj.problem.Z.T @ obj.problem.y / obj.n / obj.s
    x_star = linalg.solve_spd(H, b)
    direction = np.ones(obj.d)
    g = obj.full_gradient(x_star + direction)
    scale = target / float(np.linalg.norm(g))
    return x_star + scale * direction


def _cmd_compare(args):
    paths = [p for p in args.traces.split(",") if p]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trace", "iters", "final_fx", "final_grad_norm",
                         "final_subopt", f"iters_to_{args.threshold:g}"])
        for path in paths:
            tf = read_trace(path)
            last = tf.rows[-1]
            hit = ""
            for r in tf.rows:
                if r.subopt is not None and r.subopt <= args.threshold:
                    hit = r.iter
                    break
            writer.writerow([path, last.iter, f"{last.fx:.17g}",
                             f"{last.grad_norm:.17g}",
                             "NA" if last.subopt is None else f"{last.subopt:.17g}",
                             hit if hit != "" else "NA"])
    print(f"wrote summary for {len(paths)} traces to {args.out}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            code = _cmd_generate(args)
        elif args.command == "run":
            code = _cmd_run(args, parser)
        elif args.command == "baseline":
            code = _cmd_baseline(args, parser)
        elif args.command == "validate":
            code = _cmd_validate(args)
        else:
            code = _cmd_compare(args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
