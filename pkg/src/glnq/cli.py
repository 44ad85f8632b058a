"""Command-line entry point: ``glnq <command> [options]``.

Reports go to stdout and are deterministic for fixed inputs and cache state;
timing goes to stderr.  Exit status: 0 success, 2 property violated, 1 error.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field

from . import config
from .errors import GlnqError

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


@dataclass
class JobSpec:
    command: str
    n: int | None = None
    q: int | None = None
    sigma: tuple = ()
    tau: tuple = ()
    flag: object = None
    paths: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    budget: int | None = None
    cache: str | None = None
    machine: bool = False


class Report:
    """Ordered key/value lines; plain text or key=value."""

    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: list[str] = []

    def kv(self, key: str, value) -> None:
        self.lines.append(f"{key}={value}" if self.machine else f"{key}: {value}")

    def text(self, line: str) -> None:
        self.lines.append(line)

    def __str__(self):
        return "\n".join(self.lines)


# ---------------------------------------------------------------------------
# parsing helpers


def _partition_arg(text: str | None) -> tuple:
    from .qcombinat import parse_partition

    return parse_partition(text or "-")


def _load_set(path: str):
    from .gfq import read_matrix_set

    _, _, mats = read_matrix_set(path)
    return mats


def _parse_matrix(text: str, q: int):
    """Rows separated by '/' or ';', entries as base-q digits (no separators) or commas."""
    from .gfq import DIGITS, FqMatrix, field_of_order

    rows = []
    for part in text.replace(";", "/").split("/"):
        part = part.strip()
        if "," in part:
            rows.append([int(x) for x in part.split(",")])
        else:
            rows.append([DIGITS.index(ch) for ch in part.lower()])
    return FqMatrix.from_rows(field_of_order(q), rows)


def _validate_job(job: JobSpec) -> None:
    from .flags import validate_pair
    from .gfq import prime_power

    if job.q is not None:
        prime_power(job.q)
    if job.n is not None and job.q is not None and (job.sigma or job.tau):
        validate_pair(job.sigma, job.tau, job.n, job.q, strict=False)


# ---------------------------------------------------------------------------
# commands


def _cmd_classes(job, rep):
    from .classes import class_sizes, enumerate_lambda, format_lambda, type_of_lambda
    from .qcombinat import format_pair

    labels = enumerate_lambda(job.n, job.q)
    sizes = class_sizes(job.n, job.q)
    rep.kv("group", f"GL({job.n},{job.q})")
    rep.kv("classes", len(labels))
    for i, lm in enumerate(labels):
        rep.text(f"{i}\t{format_lambda(lm)}\t{sizes[lm]}\t{format_pair(type_of_lambda(lm))}")
    return EXIT_OK


def _cmd_jordan_type(job, rep):
    from .classes import format_lambda, jordan_type, type_of_lambda
    from .qcombinat import format_pair

    g = _parse_matrix(job.options["matrix"], job.q)
    lm = jordan_type(g)
    rep.kv("label", format_lambda(lm))
    rep.kv("type", format_pair(type_of_lambda(lm)))
    return EXIT_OK


def _cmd_flag_count(job, rep):
    from .flags import enumerate_flags, flag_count, spec_for_type
    from .qcombinat import format_pair

    c = flag_count(job.sigma, job.tau, job.n, job.q)
    rep.kv("type", format_pair((job.sigma, job.tau)))
    rep.kv("flag_count", c)
    if job.options.get("enumerate"):
        m = sum(1 for _ in enumerate_flags(spec_for_type(job.sigma, job.tau), job.q, job.budget))
        rep.kv("enumerated", m)
        return EXIT_OK if m == c else EXIT_VIOLATION
    return EXIT_OK


def _flag_of(job, n):
    from .flags import parse_flagspec, spec_for_type

    if job.flag:
        return parse_flagspec(job.flag)
    if job.sigma or job.tau:
        return spec_for_type(job.sigma, job.tau)
    raise GlnqError("give --flag 'rho=... I=...' or --sigma/--tau")


def _cmd_verify_transitive(job, rep):
    from .flags import transitivity_constant

    Y = _load_set(job.paths["file"])
    alpha = _flag_of(job, Y[0].rows)
    r = transitivity_constant(Y, alpha, budget=job.budget)
    rep.kv("size", len(Y))
    rep.kv("flags", str(alpha))
    rep.kv("r", r if r is not None else "none")
    return EXIT_OK if r is not None else EXIT_VIOLATION


def _cmd_verify_design(job, rep):
    from .distributions import _design_spec, is_t_design_dual
    from .flags import transitivity_constant

    Y = _load_set(job.paths["file"])
    n, t = Y[0].rows, job.options["t"]
    r = transitivity_constant(Y, _design_spec(n, t), budget=job.budget)
    rep.kv("size", len(Y))
    rep.kv("t", t)
    rep.kv("r", r if r is not None else "none")
    ok = r is not None
    if 2 * t <= n:
        dual = is_t_design_dual(Y, t)
        rep.kv("dual_route", "design" if dual else "not a design")
        if dual != ok:
            raise GlnqError("design routes disagree")
    rep.kv("design", "yes" if ok else "no")
    return EXIT_OK if ok else EXIT_VIOLATION


def _cmd_verify_clique(job, rep):
    from .distributions import is_clique

    Y = _load_set(job.paths["file"])
    route = job.options.get("route") or "inner"
    ok = is_clique(Y, job.sigma, job.tau, route=route)
    rep.kv("size", len(Y))
    rep.kv("route", route)
    rep.kv("clique", "yes" if ok else "no")
    return EXIT_OK if ok else EXIT_VIOLATION


def _cmd_distance_dist(job, rep):
    from .distributions import distance_distribution

    D = distance_distribution(_load_set(job.paths["file"]))
    rep.text(D.report())
    return EXIT_OK


def _cmd_predicted_dist(job, rep):
    from .distributions import predicted_distance_distribution

    D = predicted_distance_distribution(job.n, job.q, job.options["size"], job.options["t"])
    rep.text(D.report())
    return EXIT_OK


def _cmd_w_vector(job, rep):
    from .distributions import fixed_space_tally, w_vector

    w = w_vector(job.n, job.q)
    rep.kv("w", " ".join(map(str, w)))
    if job.options.get("check"):
        tally = fixed_space_tally(job.n, job.q, job.budget)
        rep.kv("tally", " ".join(map(str, tally)))
        return EXIT_OK if tally == w else EXIT_VIOLATION
    return EXIT_OK


def _write_or_print(mats, out, rep):
    from .gfq import write_matrix_set

    rep.kv("size", len(mats))
    if out:
        write_matrix_set(out, mats)
        rep.kv("written", out)
    else:
        rep.text("\n".join(m.digits() for m in mats))


def _cmd_construct(job, rep):
    from . import constructions as C

    kind = job.options["kind"]
    out = job.paths.get("out")
    if kind == "singer":
        _write_or_print(C.singer_cycle(job.n, job.q, job.budget), out, rep)
    elif kind == "gammal1":
        _write_or_print(C.gamma_l1(job.n, job.q, job.budget), out, rep)
    elif kind == "recursive":
        Y, Z = _load_set(job.paths["y"]), _load_set(job.paths["z"])
        D = C.load_design(job.paths["design"], job.options["t"])
        _write_or_print(C.recursive_design(Y, Z, D, job.options["t"], budget=job.budget), out, rep)
    elif kind == "mrd":
        d = job.options["d"]
        code = C.mrd_code(job.n, d, job.q)
        inv = C.invertible_subcode(code, job.budget)
        N = C.mrd_invertible_count(job.n, d, job.q)
        rep.kv("code_dimension", code.dimension)
        rep.kv("rank_profile", " ".join(map(str, C.code_rank_profile(code, job.budget))))
        rep.kv("predicted_invertible", N)
        _write_or_print(inv, out, rep)
        return EXIT_OK if len(inv) == N else EXIT_VIOLATION
    else:
        raise GlnqError(f"unknown construction {kind!r}")
    return EXIT_OK


def _cmd_char_table(job, rep):
    from .spectra import character_table

    T = character_table(job.n, job.q, job.cache, budget=job.budget)
    rep.kv("group", f"GL({job.n},{job.q})")
    rep.kv("classes", len(T.labels))
    rep.kv("exponent", T.exponent)
    rep.kv("prime", T.prime)
    rep.kv("degrees", " ".join(map(str, T.degrees)))
    ok = sum(d * d for d in T.degrees) == T.order
    rep.kv("sum_deg_squared", "ok" if ok else "FAIL")
    if job.options.get("check"):
        orth = T.check_orthogonality()
        rep.kv("orthogonality", "ok" if orth else "FAIL")
        ok = ok and orth
    return EXIT_OK if ok else EXIT_VIOLATION


def _cmd_lp_bound(job, rep):
    from .distributions import clique_design_bounds
    from .qcombinat import format_pair
    from .spectra import lp_clique_bound

    b = lp_clique_bound(job.n, job.q, job.sigma, job.tau, compute=True, cache=job.cache)
    upper, _ = clique_design_bounds(job.sigma, job.tau, job.n, job.q)
    rep.kv("type", format_pair((job.sigma, job.tau)))
    rep.kv("lp_bound", b.rounded())
    rep.kv("lp_value", b.value if b.value.denominator == 1 else f"{float(b.value):.12f}")
    rep.kv("error_bound", f"{float(b.error):.3e}")
    rep.kv("design_bound", upper)
    return EXIT_OK


def _cmd_asc_identities(job, rep):
    from .qcombinat import asc_inversion, asc_moment_identity, asc_poly, format_poly, u_from_falling

    q, top = job.q, job.options.get("max_k") or 8
    ok = True
    for k in range(min(top, 3) + 1):
        rep.kv(f"U{k}", format_poly(asc_poly(k, q)))
    for j in range(top + 1):
        ok &= asc_moment_identity(j, q)
        ok &= u_from_falling(j, q) == asc_poly(j, q)
        for l in range(top + 1):
            ok &= asc_inversion(j, l, q) == (1 if j == l else 0)
    rep.kv("identities", "ok" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VIOLATION


COMMANDS = {
    "classes": _cmd_classes,
    "jordan-type": _cmd_jordan_type,
    "flag-count": _cmd_flag_count,
    "verify-transitive": _cmd_verify_transitive,
    "verify-design": _cmd_verify_design,
    "verify-clique": _cmd_verify_clique,
    "distance-dist": _cmd_distance_dist,
    "predicted-dist": _cmd_predicted_dist,
    "w-vector": _cmd_w_vector,
    "construct": _cmd_construct,
    "char-table": _cmd_char_table,
    "lp-bound": _cmd_lp_bound,
    "asc-identities": _cmd_asc_identities,
}


def run(job: JobSpec) -> tuple[int, str]:
    """Dispatch one job; returns (exit status, report text)."""
    rep = Report(job.machine)
    _validate_job(job)
    status = COMMANDS[job.command](job, rep)
    return status, str(rep)


# ---------------------------------------------------------------------------
# argparse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, help="maximum items any enumeration may touch")
    common.add_argument("--cache", help=f"character table cache directory (env {config.CACHE_ENV})")
    common.add_argument("--threads", type=int, default=1, help="worker cap (computation is single-threaded)")
    common.add_argument("--machine", action="store_true", help="key=value report lines")

    p = _Parser(prog="glnq", description="Transitive sets, designs and cliques in GL(n, q).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def group(sp, need_n=True):
        if need_n:
            sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)

    def typ(sp, required=False):
        sp.add_argument("--sigma", required=required, help="partition, e.g. 2,1,1 ('-' for empty)")
        sp.add_argument("--tau", help="partition ('-' or omitted for empty)")

    sp = sub.add_parser("classes", parents=[common], help="list conjugacy classes")
    group(sp)
    sp = sub.add_parser("jordan-type", parents=[common], help="class label of a matrix")
    group(sp, need_n=False)
    sp.add_argument("--matrix", required=True, help="rows separated by '/', e.g. 110/010/001")
    sp = sub.add_parser("flag-count", parents=[common], help="number of flags of a type")
    group(sp)
    typ(sp)
    sp.add_argument("--enumerate", action="store_true", help="also count by enumeration")
    sp = sub.add_parser("verify-transitive", parents=[common], help="transitivity constant on flags")
    sp.add_argument("--file", required=True)
    sp.add_argument("--flag", help="flag spec 'rho=1,2 I=1'")
    typ(sp)
    sp = sub.add_parser("verify-design", parents=[common], help="t-design check")
    sp.add_argument("--file", required=True)
    sp.add_argument("--t", type=int, required=True)
    sp = sub.add_parser("verify-clique", parents=[common], help="clique check")
    sp.add_argument("--file", required=True)
    typ(sp, required=True)
    sp.add_argument("--route", choices=["inner", "direct"], default="inner")
    sp = sub.add_parser("distance-dist", parents=[common], help="rank distance distribution and its dual")
    sp.add_argument("--file", required=True)
    sp = sub.add_parser("predicted-dist", parents=[common], help="distance distribution forced on a design")
    group(sp)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp = sub.add_parser("w-vector", parents=[common], help="fixed-space dimension counts")
    group(sp)
    sp.add_argument("--check", action="store_true", help="compare with an enumeration tally")
    sp = sub.add_parser("construct", parents=[common], help="build a fixture")
    sp.add_argument("kind", choices=["singer", "gammal1", "recursive", "mrd"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--q", type=int)
    sp.add_argument("--d", type=int, help="minimum rank distance (mrd)")
    sp.add_argument("--t", type=int, default=1, help="design strength (recursive)")
    sp.add_argument("--y", help="matrix set on the k-space (recursive)")
    sp.add_argument("--z", help="matrix set on the complement (recursive)")
    sp.add_argument("--design", help="subspace design file (recursive)")
    sp.add_argument("--out", help="write the matrix set here instead of stdout")
    sp = sub.add_parser("char-table", parents=[common], help="character table (cached)")
    group(sp)
    sp.add_argument("--check", action="store_true", help="verify row orthogonality exactly")
    sp = sub.add_parser("lp-bound", parents=[common], help="linear programming bound for cliques")
    group(sp)
    typ(sp, required=True)
    sp = sub.add_parser("asc-identities", parents=[common], help="Al-Salam-Carlitz identity checks")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--max-k", type=int, default=8)
    return p


def _job_from_args(a) -> JobSpec:
    job = JobSpec(a.command, budget=a.budget, cache=a.cache, machine=a.machine)
    job.n, job.q = getattr(a, "n", None), getattr(a, "q", None)
    job.sigma = _partition_arg(getattr(a, "sigma", None))
    job.tau = _partition_arg(getattr(a, "tau", None))
    job.flag = getattr(a, "flag", None)
    for key in ("file", "y", "z", "design", "out"):
        if getattr(a, key, None):
            job.paths[key] = getattr(a, key)
    for key in ("matrix", "t", "size", "route", "check", "enumerate", "kind", "d", "max_k"):
        if getattr(a, key, None) is not None:
            job.options[key] = getattr(a, key)
    if job.command == "construct":
        kind = job.options["kind"]
        need = {"singer": ("n", "q"), "gammal1": ("n", "q"), "mrd": ("n", "q", "d"), "recursive": ("y", "z", "design")}
        missing = [k for k in need[kind] if getattr(a, k, None) is None]
        if missing:
            raise GlnqError(f"construct {kind} needs --" + ", --".join(missing))
    return job


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        job = _job_from_args(args)
        status, text = run(job)
    except (GlnqError, OSError) as exc:
        print(f"glnq: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if text:
        print(text)
    print(f"elapsed {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
