"""Command-line entry point.

Subcommands: params, verify, precondition, mc, plot, oracle.  Exit status 0
means every requested check passed; 1 means a check failed.  Usage problems
exit 2, input parsing 3, domain validation 4, shape/compatibility 5,
resource limits 6, anything unexpected 7.  Reports carry "schema": "1".
"""

from __future__ import annotations

import argparse
import json
import math
import secrets
import sys
from fractions import Fraction

from . import errors
from .analysis import plot_data, verify_all, verify_row
from .experiments import (check_binomial_bound, exhaustive_dense_lemma,
                          random_subspace_report, run_trials, weight_gate)
from .fields import Field, field_from_order
from .params import compare_with_paper, derive_params, row_anchors
from .preconditioner import generate, plan
from .sparsemat import rank, read_sms, stack, write_sms

SCHEMA = "1"

USAGE_EXIT = 2
PARSE_EXIT = 3
DOMAIN_EXIT = 4
SHAPE_EXIT = 5
RESOURCE_EXIT = 6
INTERNAL_EXIT = 7

_ERROR_EXITS = (
    ((errors.ParseError, errors.ValueOutOfRange), PARSE_EXIT),
    ((errors.NotPrime, errors.NotPrimePower, errors.BadEpsilon,
      errors.ReducibleModulus, errors.ZeroInverse, errors.EmptySubset,
      errors.DomainError, errors.NBelow18, errors.FieldTooSmallForN,
      errors.PreconditionUnmet, errors.KTooSmall, errors.WrongPath), DOMAIN_EXIT),
    ((errors.ShapeMismatch, errors.FieldMismatch, errors.BadShape,
      errors.RankDeficientInput), SHAPE_EXIT),
    ((errors.FieldTooLarge, errors.KTooLarge, errors.TooLarge,
      errors.SpaceTooLarge, errors.GenerationFailed), RESOURCE_EXIT),
)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="spfq",
                                  description="sparse preconditioning over GF(q): "
                                              "constants, certificates, generation, "
                                              "and measurement")
    sub = top.add_subparsers(dest="command", required=True)

    def add_field_args(p):
        p.add_argument("--q", type=int, help="field order (prime power)")
        p.add_argument("--p", type=int, help="characteristic (with --e)")
        p.add_argument("--e", type=int, default=1, help="extension degree")
        p.add_argument("--modulus",
                       help="comma-separated modulus digits, constant term first")

    pp = sub.add_parser("params", help="derive the constant bundle")
    pp.add_argument("--q", type=int)
    pp.add_argument("--all", action="store_true", help="all sixteen table rows")
    pp.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10))
    pp.add_argument("--compare-paper", action="store_true")
    pp.add_argument("--format", choices=("json", "text"), default="text")

    pv = sub.add_parser("verify", help="run the certificate suite")
    pv.add_argument("--q", type=int)
    pv.add_argument("--all", action="store_true",
                    help="all rows plus the asymptotic suite")
    pv.add_argument("--grid-points", type=int, default=10_000)
    pv.add_argument("--format", choices=("json", "text"), default="text")

    pc = sub.add_parser("precondition", help="read SMS, append rows, write SMS")
    add_field_args(pc)
    pc.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10))
    pc.add_argument("--seed", type=int)
    pc.add_argument("--in", dest="infile", required=True,
                    help="input SMS path, or - for stdin")
    pc.add_argument("--out", dest="outfile", required=True,
                    help="output SMS path, or - for stdout")
    pc.add_argument("--no-rank-check", action="store_true",
                    help="skip the full-row-rank precheck on the input (unsafe)")

    pm = sub.add_parser("mc", help="Monte Carlo success and sparsity measurement")
    pm.add_argument("--q", type=int, required=True)
    pm.add_argument("--n", type=int, required=True)
    pm.add_argument("--m", type=int, required=True)
    pm.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10))
    pm.add_argument("--trials", type=int, default=1000)
    pm.add_argument("--seed", type=int)
    pm.add_argument("--out", help="per-trial CSV log path")
    pm.add_argument("--no-fig", action="store_true")
    pm.add_argument("--format", choices=("json", "text"), default="text")

    pl = sub.add_parser("plot", help="gap-curve samples as CSV (and a figure)")
    pl.add_argument("--q", type=int, required=True)
    pl.add_argument("--c4", type=_fraction, help="override the table constant")
    pl.add_argument("--beta0", type=_fraction, help="override the table constant")
    pl.add_argument("--grid-points", type=int, default=512)
    pl.add_argument("--out", help="CSV path (figure lands next to it)")
    pl.add_argument("--no-fig", action="store_true")
    pl.add_argument("--format", choices=("csv", "json"), default="csv")

    po = sub.add_parser("oracle", help="exhaustive checks on tiny instances")
    po.add_argument("--trials", type=int, default=200,
                    help="random subspaces for the enumerator propositions")
    po.add_argument("--seed", type=int)
    po.add_argument("--format", choices=("json", "text"), default="text")
    return top


def _resolve_field(args) -> Field:
    if args.q is not None:
        if args.p is not None:
            raise errors.BadShape("give either --q or --p/--e, not both")
        return field_from_order(args.q)
    if args.p is None:
        raise errors.BadShape("a field is required: --q or --p/--e")
    modulus = None
    if args.modulus:
        modulus = [int(t) for t in args.modulus.split(",")]
    return Field(args.p, args.e, modulus)


def _seed_or_fresh(seed) -> int:
    return secrets.randbits(48) if seed is None else seed


def _emit(obj, fmt: str, out=None):
    if fmt == "json":
        out = sys.stdout if out is None else out
        json.dump(obj, out, indent=2)
        out.write("\n")


# -- subcommands -------------------------------------------------------------------


def _cmd_params(args) -> int:
    qs = row_anchors() if args.all else [args.q]
    if qs == [None]:
        raise errors.BadShape("params needs --q or --all")
    reports = []
    for q in qs:
        params = derive_params(q, args.epsilon)
        entry = {"schema": SCHEMA, **params.to_dict()}
        if args.compare_paper:
            entry["comparison"] = compare_with_paper(params)
        reports.append(entry)
    payload = reports if args.all else reports[0]
    if args.format == "json":
        _emit(payload, "json")
        return 0
    for entry in reports:
        line = (f"q={entry['q']}: c4={_rat(entry['c4'])} beta0={_rat(entry['beta0'])} "
                f"c2={entry['c2']} ell={entry['ell']} delta={entry['delta']} "
                f"k_min={entry['k_min']} sigma={_rat(entry['sigma'])} "
                f"tau={entry['tau']} upsilon={entry['upsilon']}")
        print(line)
        if args.compare_paper:
            comp = entry["comparison"]
            if comp["confirmed"]:
                print(f"  published row {comp['row']}: confirmed")
            else:
                for d in comp["discrepancies"]:
                    print(f"  published row {comp['row']}: {d['field']} differs "
                          f"(ours {d['ours']}, published {d['paper']})")
            for note in comp["notes"]:
                print(f"  note: {note}")
    return 0


def _rat(v) -> str:
    if isinstance(v, list):
        return f"{v[0]}/{v[1]}"
    return str(v)


def _cmd_verify(args) -> int:
    if args.all:
        res = verify_all(grid_points=args.grid_points)
        rows = res["rows"] + [res["asymptotic"]]
        overall = res["overall"]
    else:
        if args.q is None:
            raise errors.BadShape("verify needs --q or --all")
        rep = verify_row(args.q, grid_points=args.grid_points)
        rows, overall = [rep], rep.overall
    if args.format == "json":
        _emit({"schema": SCHEMA, "overall": overall,
               "reports": [r.to_dict() for r in rows]}, "json")
    else:
        for rep in rows:
            status = "pass" if rep.overall else "FAIL"
            print(f"[{status}] {rep.name}: {len(rep.checks)} checks")
            for c in rep.checks:
                if c.passed is not True:
                    tag = "INCONCLUSIVE" if c.passed is None else "FAIL"
                    print(f"    {tag}: {c.label} (need {c.requirement}, "
                          f"got {c.value:.6g})")
            for a in rep.anomalies:
                print(f"    note: {a}")
        print(f"overall: {'pass' if overall else 'FAIL'}")
    return 0 if overall else 1


def _cmd_precondition(args) -> int:
    field = _resolve_field(args)
    seed = _seed_or_fresh(args.seed)
    if args.infile == "-":
        A = read_sms(sys.stdin.read(), field)
    else:
        with open(args.infile, "r", encoding="ascii") as fh:
            A = read_sms(fh, field)
    n, m = A.cols, A.rows
    if m > n:
        raise errors.BadShape(f"input has more rows ({m}) than columns ({n})")
    if not args.no_rank_check and rank(A) != m:
        raise errors.RankDeficientInput(f"input rank is below its row count {m}")
    p = plan(field.q, n, m, args.epsilon)
    gen = generate(p, seed, field)
    B = stack(A, gen.rows)
    text = write_sms(B)
    if args.outfile == "-":
        sys.stdout.write(text)
    else:
        with open(args.outfile, "w", encoding="ascii") as fh:
            fh.write(text)
    sidecar = {"schema": SCHEMA, "path": p.path, "k": p.k, "z": p.z, "seed": seed,
               "row_weights": list(gen.per_row_weights),
               "rows_out": B.rows, "cols": B.cols,
               "params": p.params.to_dict(), "note": p.note}
    sidecar_text = json.dumps(sidecar, indent=2) + "\n"
    if args.outfile != "-":
        with open(args.outfile + ".json", "w", encoding="ascii") as fh:
            fh.write(sidecar_text)
        sys.stdout.write(sidecar_text)
    else:
        sys.stderr.write(sidecar_text)
    return 0


def _cmd_mc(args) -> int:
    seed = _seed_or_fresh(args.seed)
    log = open(args.out, "w", encoding="ascii") if args.out else None
    try:
        stats = run_trials(args.q, args.n, args.m, args.epsilon,
                           args.trials, seed, log=log)
    finally:
        if log:
            log.close()
    eps = float(args.epsilon)
    rate_gate = (1 - eps) - 3 * math.sqrt(eps * (1 - eps) / args.trials)
    bound = weight_gate(args.q, args.n, args.m, args.epsilon)
    se = stats.std_added_nonzeros / math.sqrt(args.trials)
    gates = {
        "success_rate_gate": rate_gate,
        "success_rate_ok": stats.success_rate >= rate_gate,
        "weight_bound": bound,
        "weight_slack": 3 * se,
        "weight_ok": stats.mean_added_nonzeros <= bound + 3 * se,
    }
    ok = gates["success_rate_ok"] and gates["weight_ok"]
    payload = {"schema": SCHEMA, **stats.to_dict(), "gates": gates, "ok": ok}
    if args.format == "json":
        _emit(payload, "json")
    else:
        print(f"trials={stats.trials} successes={stats.successes} "
              f"rate={stats.success_rate:.4f} ci95=({stats.ci95[0]:.4f},"
              f"{stats.ci95[1]:.4f})")
        print(f"mean added nnz={stats.mean_added_nonzeros:.1f} "
              f"max={stats.max_added_nonzeros} bound={bound:.1f}")
        print(f"seed={seed} wall={stats.wall_time:.1f}s -> "
              f"{'pass' if ok else 'FAIL'}")
    if args.out and not args.no_fig:
        _render_mc_figure(args.out, stats, bound)
    return 0 if ok else 1


def _cmd_plot(args) -> int:
    if args.c4 is None or args.beta0 is None:
        from .params import find_row
        row = find_row(args.q)
        c4 = args.c4 if args.c4 is not None else row.c4
        beta0 = args.beta0 if args.beta0 is not None else row.beta0
    else:
        c4, beta0 = args.c4, args.beta0
    samples = plot_data(args.q, c4, beta0, args.grid_points)
    if args.format == "json":
        payload = {"schema": SCHEMA, "q": args.q,
                   "c4": [c4.numerator, c4.denominator],
                   "beta0": [beta0.numerator, beta0.denominator],
                   "samples": samples}
        out_text = json.dumps(payload, indent=2) + "\n"
    else:
        out_text = "beta,gap\n" + "".join(f"{b!r},{g!r}\n" for b, g in samples)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(out_text)
        if not args.no_fig:
            _render_gap_figure(args.out, args.q, c4, beta0, samples)
    else:
        sys.stdout.write(out_text)
    return 0


def _cmd_oracle(args) -> int:
    seed = _seed_or_fresh(args.seed)
    subspaces = random_subspace_report(args.trials, seed)
    binom = check_binomial_bound(100)
    dense_cases = []
    for (q, n, ell) in ((2, 2, 0), (2, 2, 2), (3, 1, 1), (3, 2, 1)):
        exact, bound = exhaustive_dense_lemma(q, n, ell)
        dense_cases.append({
            "q": q, "n": n, "ell": ell,
            "exact": [exact.numerator, exact.denominator],
            "bound": [bound.numerator, bound.denominator],
            "ok": exact <= bound})
    ok = subspaces["ok"] and binom["ok"] and all(c["ok"] for c in dense_cases)
    payload = {"schema": SCHEMA, "seed": seed, "subspaces": subspaces,
               "binomial": binom, "dense_lemma": dense_cases, "ok": ok}
    if args.format == "json":
        _emit(payload, "json")
    else:
        print(f"enumerator propositions on {subspaces['count']} subspaces: "
              f"{'pass' if subspaces['ok'] else 'FAIL'}")
        print(f"binomial bound up to k=100: "
              f"{'pass' if binom['ok'] else 'FAIL'} "
              f"(worst ratio {binom['worst_ratio']:.3g} at {binom['worst_at']})")
        for c in dense_cases:
            print(f"rank-deficiency census q={c['q']} n={c['n']} ell={c['ell']}: exact "
                  f"{c['exact'][0]}/{c['exact'][1]} <= bound "
                  f"{c['bound'][0]}/{c['bound'][1]}: "
                  f"{'pass' if c['ok'] else 'FAIL'}")
        print(f"seed={seed} -> {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


# -- figures (matplotlib is imported only when actually rendering) --------------------


def _render_gap_figure(csv_path: str, q: int, c4, beta0, samples) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    betas = [b for b, _ in samples]
    gaps = [g for _, g in samples]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(betas, gaps, lw=1.2)
    ax.axhline(0.0, color="gray", lw=0.6)
    ax.set_xlabel("beta")
    ax.set_ylabel("gap")
    ax.set_title(f"q={q}, c4={c4}, beta0={beta0}")
    fig.tight_layout()
    fig.savefig(_fig_path(csv_path), dpi=150)
    plt.close(fig)


def _render_mc_figure(csv_path: str, stats, bound: float) -> None:
    import csv

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    added = []
    with open(csv_path, newline="", encoding="ascii") as fh:
        for rec in csv.DictReader(fh):
            added.append(int(rec["added_nnz"]))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(added, bins=40)
    ax.axvline(bound, color="red", lw=1.0, label="expected-weight bound")
    ax.set_xlabel("added nonzeros")
    ax.set_ylabel("trials")
    cfg = stats.config
    ax.set_title(f"q={cfg['q']} n={cfg['n']} m={cfg['m']}: "
                 f"rate={stats.success_rate:.3f}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(_fig_path(csv_path), dpi=150)
    plt.close(fig)


def _fig_path(csv_path: str) -> str:
    stem = csv_path[:-4] if csv_path.endswith(".csv") else csv_path
    return stem + ".png"


_COMMANDS = {
    "params": _cmd_params,
    "verify": _cmd_verify,
    "precondition": _cmd_precondition,
    "mc": _cmd_mc,
    "plot": _cmd_plot,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return USAGE_EXIT if ex.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except Exception as ex:  # map to documented exit codes
        for classes, code in _ERROR_EXITS:
            if isinstance(ex, classes):
                print(f"error: {ex}", file=sys.stderr)
                return code
        if isinstance(ex, (OSError, ValueError)):
            print(f"error: {ex}", file=sys.stderr)
            return USAGE_EXIT
        print(f"internal error: {ex!r}", file=sys.stderr)
        return INTERNAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
