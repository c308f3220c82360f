"""Command line front end.

Subcommands: check, fourier, stability, verify, lowdeg, learn, release.
Every CSV output starts with `#` comment lines echoing the tool version,
the full configuration (seed included), and the tolerances in force, so
a result file is self-describing.  Exit codes: 0 success, 1 property
violation, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from ._bits import format_subset
from .cube import (
    SUBMODULARITY_TOL,
    function_from_dict,
    is_nonnegative,
    is_submodular_lattice,
    supermodular_square,
)
from .dist import ProductDistribution
from .dp_release import (
    Database,
    evaluate_release,
    release,
    verify_privacy_accounting,
)
from .fourier import transform
from .learn import (
    NoiseSpec,
    empirical_opt,
    eval_l1_error,
    generate_dataset,
    l1_poly_regression,
)
from .lowdeg import check_folklore_lemma, degree_for_accuracy
from .noise import DEFAULT_RHO_GRID, SLACK_TOL, bound_constant, stability_from_expansion
from .sweeps import (
    FOLKLORE_RHO_GRID,
    GENERATOR_FAMILIES,
    Instance,
    fmt_cell,
    generate_suite,
    lowdeg_sweep,
    pointwise_sweep,
    stability_sweep,
)


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}")


def _load_function(path: str):
    try:
        return function_from_dict(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad function spec {path}: {exc}")


def _load_dist(path: str) -> ProductDistribution:
    try:
        return ProductDistribution.from_dict(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad distribution spec {path}: {exc}")


def _parse_rho_grid(text: str | None, default) -> list[float]:
    if text is None:
        grid = [float(r) for r in default]
    elif ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("grid range must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise UsageError("grid step must be positive")
        grid = list(np.round(np.arange(start, stop + step / 2, step), 10))
    else:
        grid = [float(t) for t in text.split(",") if t.strip()]
    if not grid:
        raise UsageError("empty rho grid")
    for r in grid:
        if not 0.0 <= r <= 1.0:
            raise UsageError(f"rho {r} outside [0, 1]")
    return [float(r) for r in grid]


def _parse_sizes(text: str) -> list[int]:
    if ":" in text:
        lo, hi = (int(p) for p in text.split(":"))
        sizes = list(range(lo, hi + 1))
    else:
        sizes = [int(t) for t in text.split(",") if t.strip()]
    if not sizes:
        raise UsageError("empty size list")
    return sizes


def _echo_lines(command: str, params: dict) -> list[str]:
    body = " ".join(f"{k}={params[k]}" for k in sorted(params))
    return [
        f"# tool=submodstab {__version__}",
        f"# command={command} {body}",
        f"# tolerances slack={SLACK_TOL!r} submodularity={SUBMODULARITY_TOL!r}",
    ]


def _emit(lines: list[str], path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    f = _load_function(args.function)
    nn = is_nonnegative(f)
    sm = is_submodular_lattice(f)
    print(f"non-negative: {'ok' if nn else 'FAIL'}")
    if not nn:
        print(f"  witness mask={nn.witness} value={nn.violation!r}")
    print(f"submodular: {'ok' if sm else 'FAIL'}")
    if not sm:
        s, t = sm.witness
        print(
            f"  witness S={format_subset(s)} T={format_subset(t)} "
            f"excess={sm.violation!r}"
        )
    return 0 if (nn and sm) else 1


def cmd_fourier(args) -> int:
    f = _load_function(args.function)
    dist = _load_dist(args.dist)
    if f.n != dist.n:
        raise UsageError("function and distribution dimensions differ")
    e = transform(f, dist)
    lines = _echo_lines(
        "fourier", {"function": args.function, "dist": args.dist, "seed": "none"}
    )
    lines.append("mask,subset,coefficient")
    for mask, c in enumerate(e.coeffs):
        lines.append(f"{mask},{format_subset(mask)},{fmt_cell(c)}")
    _emit(lines, args.output)
    return 0


def cmd_stability(args) -> int:
    f = _load_function(args.function)
    dist = _load_dist(args.dist)
    if f.n != dist.n:
        raise UsageError("function and distribution dimensions differ")
    grid = _parse_rho_grid(args.rho_grid, DEFAULT_RHO_GRID)
    e = transform(f, dist)
    norm2sq = e.total_mass()
    pmin = dist.p_min
    lines = _echo_lines(
        "stability",
        {
            "function": args.function,
            "dist": args.dist,
            "rho_grid": args.rho_grid or "default",
            "seed": "none",
        },
    )
    lines.append("rho,stab,bound,slack,norm2sq,pmin")
    worst = math.inf
    for rho in grid:
        stab = stability_from_expansion(e, rho)
        bound = bound_constant(rho, pmin) * norm2sq
        slack = stab - bound
        worst = min(worst, slack)
        lines.append(
            ",".join(fmt_cell(x) for x in (rho, stab, bound, slack, norm2sq, pmin))
        )
    _emit(lines, args.output)
    return 0 if worst >= -SLACK_TOL else 1


def cmd_lowdeg(args) -> int:
    f = _load_function(args.function)
    dist = _load_dist(args.dist)
    if f.n != dist.n:
        raise UsageError("function and distribution dimensions differ")
    grid = _parse_rho_grid(args.rho_grid, FOLKLORE_RHO_GRID)
    if any(r >= 1.0 for r in grid):
        raise UsageError("truncation degree needs rho < 1")
    lines = _echo_lines(
        "lowdeg",
        {
            "function": args.function,
            "dist": args.dist,
            "rho_grid": args.rho_grid or "default",
            "seed": "none",
        },
    )
    lines.append("rho,gamma,d,error,bound,slack")
    ok = True
    for rho in grid:
        rep = check_folklore_lemma(f, rho, dist)
        ok = ok and rep.ok
        slack = rep.bound - rep.error
        lines.append(
            ",".join(
                fmt_cell(x)
                for x in (rho, rep.gamma, rep.degree, rep.error, rep.bound, slack)
            )
        )
    _emit(lines, args.output)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    sizes = _parse_sizes(args.sizes)
    families = [t for t in args.families.split(",") if t]
    for fam in families:
        if fam not in GENERATOR_FAMILIES:
            raise UsageError(f"unknown family {fam!r}")
    instances = generate_suite(
        args.count, sizes, args.seed, uniform=args.uniform, families=families
    )
    if args.negative_control:
        n = 4
        instances.append(
            Instance(
                len(instances),
                "supermodular_square",
                supermodular_square(n),
                ProductDistribution.uniform(n),
            )
        )
    if args.suite == "stability":
        grid = _parse_rho_grid(args.rho_grid, DEFAULT_RHO_GRID)
        result = stability_sweep(instances, grid)
    elif args.suite == "pointwise":
        grid = _parse_rho_grid(args.rho_grid, DEFAULT_RHO_GRID)
        result = pointwise_sweep(instances, grid)
    else:
        grid = _parse_rho_grid(args.rho_grid, FOLKLORE_RHO_GRID)
        if any(r >= 1.0 for r in grid):
            raise UsageError("truncation degree needs rho < 1")
        result = lowdeg_sweep(instances, grid)
    lines = _echo_lines(
        "verify",
        {
            "suite": args.suite,
            "count": args.count,
            "sizes": args.sizes,
            "families": args.families,
            "uniform": args.uniform,
            "negative_control": args.negative_control,
            "rho_grid": args.rho_grid or "default",
            "seed": args.seed,
        },
    )
    lines.append(result.header)
    lines.extend(row.csv() for row in result.rows)
    lines.append(f"# min_slack={fmt_cell(result.min_slack)} ok={result.ok}")
    if result.norm_ratios:
        finite = [r for r in result.norm_ratios if math.isfinite(r)]
        if finite:
            lines.append(
                f"# norm_ratio_max={fmt_cell(max(finite))} "
                f"norm_ratio_mean={fmt_cell(sum(finite) / len(finite))}"
            )
    _emit(lines, args.output)
    return 0 if result.ok else 1


def cmd_learn(args) -> int:
    f = _load_function(args.function)
    dist = _load_dist(args.dist)
    if f.n != dist.n:
        raise UsageError("function and distribution dimensions differ")
    noise = NoiseSpec.parse(args.noise)
    if args.degree is not None:
        degree = args.degree
        eps = float("nan")
    elif args.eps is not None:
        eps = args.eps
        _, degree = degree_for_accuracy(eps, dist.p_min)
        degree = min(degree, dist.n)
    else:
        raise UsageError("need --degree or --eps")
    if not 0 <= degree <= dist.n:
        raise UsageError("degree out of range")
    lines = _echo_lines(
        "learn",
        {
            "function": args.function,
            "dist": args.dist,
            "degree": degree,
            "eps": eps,
            "m": args.m,
            "test_m": args.test_m,
            "noise": args.noise,
            "clamp": args.clamp,
            "trials": args.trials,
            "seed": args.seed,
        },
    )
    lines.append("trial,seed,train_l1,test_l1,opt_pool,eps,degree,m")
    for trial in range(args.trials):
        seed = args.seed + trial
        rng = np.random.default_rng(seed)
        train = generate_dataset(f, dist, args.m, noise, rng)
        test = generate_dataset(f, dist, args.test_m, noise, rng)
        try:
            h, train_l1 = l1_poly_regression(train, degree, clamp=args.clamp)
        except ValueError as exc:
            raise UsageError(str(exc))
        test_l1 = eval_l1_error(h, test)
        opt = empirical_opt(test, [f])
        lines.append(
            ",".join(
                fmt_cell(x)
                for x in (trial, seed, train_l1, test_l1, opt, eps, degree, args.m)
            )
        )
    _emit(lines, args.output)
    return 0


def cmd_release(args) -> int:
    spec = _load_json(args.database)
    try:
        db = Database(np.asarray(spec["items"]), int(spec["d"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad database spec {args.database}: {exc}")
    eps = float(args.eps)
    if eps <= 0:
        raise UsageError("eps must be positive (inf allowed)")
    rng = np.random.default_rng(args.seed)
    structure = release(db, args.alpha, eps, rng)
    accounting = verify_privacy_accounting(structure.log, eps)
    beta = evaluate_release(structure, db)
    echo = _echo_lines(
        "release",
        {
            "database": args.database,
            "d": db.d,
            "n_db": db.n_db,
            "eps": eps,
            "alpha": args.alpha,
            "seed": args.seed,
            "size_bound": structure.size_bound,
            "size_ok": structure.size_ok,
        },
    )
    if args.coeffs_output:
        coeff_lines = list(echo)
        coeff_lines.append("mask,subset,coefficient")
        for mask, c in zip(structure.poly.masks, structure.poly.coeffs):
            coeff_lines.append(f"{mask},{format_subset(int(mask))},{fmt_cell(c)}")
        _emit(coeff_lines, args.coeffs_output)
    lines = list(echo)
    lines.append("alpha,beta,eps_spent,degree,queries")
    lines.append(
        ",".join(
            fmt_cell(x)
            for x in (
                args.alpha,
                beta,
                accounting.eps_spent,
                structure.degree,
                structure.queries,
            )
        )
    )
    _emit(lines, args.output)
    return 0 if accounting.ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="submodstab",
        description="Verification and learning experiments for non-negative "
        "submodular functions on the boolean cube.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="non-negativity and submodularity check")
    p.add_argument("function", help="function spec JSON")
    p.set_defaults(func=cmd_check)

    def io_args(p, dist=True):
        p.add_argument("--function", required=True, help="function spec JSON")
        if dist:
            p.add_argument("--dist", required=True, help="distribution spec JSON")
        p.add_argument("-o", "--output", default=None, help="output CSV path")

    p = sub.add_parser("fourier", help="dump the orthonormal expansion")
    io_args(p)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("stability", help="noise stability vs the lower bound")
    io_args(p)
    p.add_argument("--rho-grid", default=None, help="a:b:step or comma list")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("lowdeg", help="truncation error vs the stability bound")
    io_args(p)
    p.add_argument("--rho-grid", default=None, help="a:b:step or comma list")
    p.set_defaults(func=cmd_lowdeg)

    p = sub.add_parser("verify", help="batch sweeps over generated instances")
    p.add_argument(
        "--suite", required=True, choices=("pointwise", "stability", "lowdeg")
    )
    p.add_argument("--count", type=int, default=100, help="instances to generate")
    p.add_argument("--sizes", default="2:8", help="ground-set sizes, lo:hi or list")
    p.add_argument(
        "--families", default=",".join(GENERATOR_FAMILIES), help="comma list"
    )
    p.add_argument("--uniform", action="store_true", help="uniform distribution only")
    p.add_argument(
        "--negative-control",
        action="store_true",
        help="append a supermodular instance that must violate the bound",
    )
    p.add_argument("--rho-grid", default=None, help="a:b:step or comma list")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("learn", help="L1 polynomial regression trials")
    io_args(p)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--eps", type=float, default=None, help="derive degree from eps")
    p.add_argument("--m", type=int, default=5000, help="training samples")
    p.add_argument("--test-m", type=int, default=2000, help="held-out samples")
    p.add_argument("--noise", default="none", help="none|additive:b|adversarial:eta")
    p.add_argument("--clamp", action="store_true", help="clamp outputs to label range")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("release", help="private disjunction counting-query release")
    p.add_argument("--database", required=True, help='JSON {"d": int, "items": [...]}')
    p.add_argument("--eps", required=True, help="privacy budget (inf allowed)")
    p.add_argument("--alpha", type=float, required=True, help="target accuracy")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coeffs-output", default=None, help="coefficient CSV path")
    p.add_argument("-o", "--output", default=None, help="report CSV path")
    p.set_defaults(func=cmd_release)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
