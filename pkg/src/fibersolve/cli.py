"""File-based command line front end.

Commands work on a project base name with 4ti2-shaped side files:
`base.mat` (constraint matrix, lattice = its kernel) or `base.lat`
(lattice basis rows) as the lattice source, plus optional `base.cost`,
`base.rhs`, `base.zsol` (fiber right-hand side), `base.feas` (point to
reduce), `base.sign` (0 = sign-free coordinate, nonzero = nonnegative).
Outputs go to `base.mar`, `base.gro`, `base.nf`, `base.min`; rows are
sorted lexicographically so identical runs produce identical bytes.

Exit codes: 0 success, 2 infeasible/unbounded verdicts, 1 usage or parse
errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import oracle as desk
from .bridge import IntegerInfeasible, IpInstance, NotRewritable, extend_solution, \
    fiber_to_ip, ip_to_fiber
from .core import FiberProblem, Lattice, TermOrder, dot
from .drivers import feasible_point, markov_basis, minimize
from .engine import TruncationOracle, complete, normal_form, reduce_basis
from .intlinalg import IntMatrix, kernel_lattice
from .ratlp import cost_compatible


class ParseError(ValueError):
    """Input file rejected; message carries file name and line number."""


def parse_matrix(text: str, name: str = "<input>") -> IntMatrix:
    """Parse 'rows cols' header plus whitespace-separated integer entries."""
    tokens: list[tuple[int, str]] = []
    for ln, line in enumerate(text.splitlines(), 1):
        for tok in line.split():
            tokens.append((ln, tok))

    def as_int(item):
        ln, tok = item
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"{name}: line {ln}: expected an integer, got {tok!r}") from None

    if len(tokens) < 2:
        raise ParseError(f"{name}: line 1: expected a 'rows cols' header")
    nrows, ncols = as_int(tokens[0]), as_int(tokens[1])
    if nrows < 0 or ncols < 0:
        raise ParseError(f"{name}: line {tokens[0][0]}: dimensions must be nonnegative")
    body = tokens[2:]
    need = nrows * ncols
    if len(body) < need:
        at = tokens[-1][0]
        raise ParseError(f"{name}: line {at}: truncated matrix "
                         f"({len(body)} of {need} entries)")
    if len(body) > need:
        at = body[need][0]
        raise ParseError(f"{name}: line {at}: extra data after {need} entries")
    vals = [as_int(t) for t in body]
    rows = tuple(tuple(vals[r * ncols:(r + 1) * ncols]) for r in range(nrows))
    return IntMatrix(rows, ncols=ncols)


def write_vectors(vectors, path, width: int | None = None) -> None:
    """Write vectors as a sorted matrix file (parse_matrix round-trips it)."""
    rows = sorted(tuple(int(v) for v in row) for row in vectors)
    if rows:
        width = len(rows[0])
    elif width is None:
        width = 0
    lines = [f"{len(rows)} {width}"]
    lines.extend(" ".join(str(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n")


def _read_side_files(base: str) -> dict[str, IntMatrix]:
    files = {}
    for ext in ("mat", "lat", "cost", "rhs", "zsol", "feas", "sign"):
        p = Path(f"{base}.{ext}")
        if p.exists():
            files[ext] = parse_matrix(p.read_text(), name=p.name)
    return files


def _single_row(files, ext: str, name: str):
    m = files.get(ext)
    if m is None:
        return None
    if m.nrows != 1:
        raise ParseError(f"{name}: expected a single row, found {m.nrows}")
    return m.rows[0]


class _Problem:
    """Resolved lattice-fiber problem plus the originating IP, if any."""

    def __init__(self, fp: FiberProblem, inst: IpInstance | None):
        self.fp = fp
        self.inst = inst

    @property
    def lattice(self):
        return self.fp.lattice

    @property
    def nu(self):
        return self.fp.nu

    def project_point(self, x):
        """Map a full-space point to fiber coordinates when IP-sourced."""
        if self.inst is None:
            return tuple(int(v) for v in x)
        freeset = set(self.inst.free)
        return tuple(int(v) for j, v in enumerate(x) if j not in freeset)

    def full_point(self, x):
        """Map a fiber point back to the full space when IP-sourced."""
        if self.inst is None:
            return tuple(int(v) for v in x)
        return extend_solution(self.inst, x)


def _resolve(base: str, files) -> _Problem:
    mat, lat = files.get("mat"), files.get("lat")
    if (mat is None) == (lat is None):
        raise ParseError(f"{base}: provide exactly one of {base}.mat / {base}.lat")
    cost = _single_row(files, "cost", f"{base}.cost")
    if lat is not None:
        if "sign" in files or "rhs" in files:
            raise ParseError(f"{base}: .sign/.rhs apply to .mat problems only")
        nu = _single_row(files, "zsol", f"{base}.zsol")
        if nu is not None and len(nu) != lat.ncols:
            raise ParseError(f"{base}.zsol: expected {lat.ncols} entries")
        if cost is not None and len(cost) != lat.ncols:
            raise ParseError(f"{base}.cost: expected {lat.ncols} entries")
        return _Problem(FiberProblem(Lattice(lat.rows, n=lat.ncols), nu, cost=cost), None)

    sign = _single_row(files, "sign", f"{base}.sign")
    if sign is not None and len(sign) != mat.ncols:
        raise ParseError(f"{base}.sign: expected {mat.ncols} entries")
    free = tuple(j for j, s in enumerate(sign) if s == 0) if sign is not None else ()
    if cost is not None and len(cost) != mat.ncols:
        raise ParseError(f"{base}.cost: expected {mat.ncols} entries")
    rhs = _single_row(files, "rhs", f"{base}.rhs")
    zsol = _single_row(files, "zsol", f"{base}.zsol")
    if rhs is None and zsol is None:
        if free:
            raise ParseError(f"{base}: a sign mask needs {base}.rhs or {base}.zsol")
        lattice = Lattice(kernel_lattice(mat), n=mat.ncols)
        return _Problem(FiberProblem(lattice, None, cost=cost), None)
    if zsol is not None:
        if len(zsol) != mat.ncols:
            raise ParseError(f"{base}.zsol: expected {mat.ncols} entries")
        b = tuple(dot(row, zsol) for row in mat.rows)
    else:
        if len(rhs) != mat.nrows:
            raise ParseError(f"{base}.rhs: expected {mat.nrows} entries")
        b = rhs
    inst = IpInstance(mat, b, free=free, cost=cost)
    return _Problem(ip_to_fiber(inst), inst)


def _require_nu(prob: _Problem, what: str) -> tuple[int, ...]:
    if prob.nu is None:
        raise ParseError(f"{what} needs a fiber right-hand side (.zsol or .rhs)")
    return prob.nu


def _order_for(prob: _Problem, args) -> TermOrder:
    if prob.fp.cost is not None:
        return TermOrder(args.order, weight=prob.fp.cost)
    return TermOrder(args.order)


def _trunc_kwargs(args):
    return {"witness_count": args.cone_witnesses,
            "pair_criterion": args.pair_criterion == "on"}


def _compute_groebner(prob: _Problem, args):
    trunc = args.truncate
    nu = _require_nu(prob, f"--truncate {trunc}") if trunc != "none" else prob.nu
    order = _order_for(prob, args)
    if prob.fp.cost is not None and not cost_compatible(prob.lattice.basis, prob.fp.cost):
        return None, None
    kw = _trunc_kwargs(args)
    mar = markov_basis(prob.lattice, nu, trunc, **kw)
    orc = None
    if trunc != "none":
        orc = TruncationOracle(prob.lattice, nu, trunc, witness_count=args.cone_witnesses)
    gb = complete(mar, order, orc, pair_criterion=kw["pair_criterion"])
    return reduce_basis(gb, order), order


def _verify(prob: _Problem, kind: str, payload) -> str | None:
    """Cross-check a result against the brute-force oracle; None = passed."""
    try:
        if kind == "markov" and prob.nu is not None:
            if not desk.is_markov_basis(payload, prob.lattice, prob.nu, cap=2000):
                return "markov basis does not connect the target fiber"
        elif kind == "feasible":
            pts = desk.enumerate_fiber(prob.lattice, prob.nu, cap=2000)
            point, feasible = payload
            if feasible != bool(pts):
                return "feasibility verdict disagrees with enumeration"
            if point is not None and point not in pts:
                return "returned point is not in the fiber"
        elif kind == "nf":
            gb, order, point = payload
            if desk.brute_min(prob.lattice, prob.nu, order) != point:
                return "normal form is not the fiber minimum"
        elif kind == "minimize":
            point, objective = payload
            pts = desk.enumerate_fiber(prob.lattice, prob.nu, cap=2000)
            best = min(pts, key=lambda p: prob.fp.objective(p))
            if prob.fp.objective(best) != objective:
                return "objective disagrees with exhaustive minimum"
    except desk.TooLarge:
        print("oracle: skipped (fiber too large to enumerate)")
        return None
    return None


def _cmd_markov(args) -> int:
    files = _read_side_files(args.base)
    prob = _resolve(args.base, files)
    nu = _require_nu(prob, f"--truncate {args.truncate}") if args.truncate != "none" else prob.nu
    result = markov_basis(prob.lattice, nu, args.truncate, **_trunc_kwargs(args))
    out = f"{args.base}.mar"
    write_vectors(result, out, width=prob.lattice.n)
    print(f"markov: {len(result)} vectors -> {out}")
    if args.oracle_verify:
        bad = _verify(prob, "markov", result)
        if bad:
            print(f"oracle: MISMATCH: {bad}")
            return 1
        print("oracle: ok")
    return 0


def _cmd_groebner(args) -> int:
    files = _read_side_files(args.base)
    prob = _resolve(args.base, files)
    red, order = _compute_groebner(prob, args)
    if red is None:
        print("UNBOUNDED: cost is not bounded below on the lattice cone")
        return 2
    out = f"{args.base}.gro"
    write_vectors(red, out, width=prob.lattice.n)
    print(f"groebner: {len(red)} vectors -> {out}")
    return 0


def _cmd_normalform(args) -> int:
    files = _read_side_files(args.base)
    prob = _resolve(args.base, files)
    feas = _single_row(files, "feas", f"{args.base}.feas")
    if feas is None:
        raise ParseError(f"normalform needs {args.base}.feas")
    point = prob.project_point(feas)
    if len(point) != prob.lattice.n:
        raise ParseError(f"{args.base}.feas: wrong dimension")
    red, order = _compute_groebner(prob, args)
    if red is None:
        print("UNBOUNDED: cost is not bounded below on the lattice cone")
        return 2
    nf = normal_form(point, red, order)
    out = f"{args.base}.nf"
    write_vectors([nf], out)
    print(f"normalform: {' '.join(map(str, nf))} -> {out}")
    if args.oracle_verify and prob.nu is not None:
        bad = _verify(prob, "nf", (red, order, nf))
        if bad:
            print(f"oracle: MISMATCH: {bad}")
            return 1
        print("oracle: ok")
    return 0


def _cmd_feasible(args) -> int:
    files = _read_side_files(args.base)
    prob = _resolve(args.base, files)
    nu = _require_nu(prob, "feasible")
    point = feasible_point(prob.lattice, nu, truncate=args.truncate,
                           witness_count=args.cone_witnesses)
    if args.oracle_verify:
        bad = _verify(prob, "feasible", (point, point is not None))
        if bad:
            print(f"oracle: MISMATCH: {bad}")
            return 1
    if point is None:
        print("INFEASIBLE")
        return 2
    print(f"FEASIBLE: {' '.join(map(str, prob.full_point(point)))}")
    return 0


_STRATEGIES = {"full-gb": "full-gb", "group-relax": "group-relax",
               "bounded-reform": "bounded"}


def _cmd_minimize(args) -> int:
    files = _read_side_files(args.base)
    prob = _resolve(args.base, files)
    nu = _require_nu(prob, "minimize")
    if prob.fp.cost is None:
        raise ParseError(f"minimize needs {args.base}.cost")
    res = minimize(prob.lattice, nu, prob.fp.cost,
                   strategy=_STRATEGIES[args.strategy], truncate=args.truncate,
                   upper_bound=args.upper_bound,
                   witness_count=args.cone_witnesses,
                   pair_criterion=args.pair_criterion == "on")
    if res.status == "infeasible":
        print("INFEASIBLE")
        return 2
    if res.status == "unbounded":
        print("UNBOUNDED")
        return 2
    value = prob.fp.objective(res.point)
    if args.oracle_verify:
        bad = _verify(prob, "minimize", (res.point, value))
        if bad:
            print(f"oracle: MISMATCH: {bad}")
            return 1
    out = f"{args.base}.min"
    write_vectors([prob.full_point(res.point)], out)
    print(f"minimize: objective {value} -> {out}")
    return 0


def _cmd_convert(args) -> int:
    files = _read_side_files(args.base)
    prob = _resolve(args.base, files)
    base = args.base
    if prob.inst is not None or "mat" in files:
        write_vectors(prob.lattice.basis, f"{base}.lat", width=prob.lattice.n)
        written = [f"{base}.lat"]
        if prob.nu is not None:
            write_vectors([prob.nu], f"{base}.zsol")
            written.append(f"{base}.zsol")
        print(f"convert: kernel lattice of {base}.mat -> {', '.join(written)}")
        return 0
    nu = _require_nu(prob, "convert")
    inst = fiber_to_ip(prob.fp)
    write_vectors(inst.a.rows, f"{base}.mat", width=inst.a.ncols)
    write_vectors([inst.b], f"{base}.rhs")
    mask = [0 if j in set(inst.free) else 1 for j in range(inst.a.ncols)]
    write_vectors([mask], f"{base}.sign")
    print(f"convert: integer program form -> {base}.mat, {base}.rhs, {base}.sign")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="fibersolve",
                description="Exact Markov/Groebner solvers over lattice fibers")
    sub = p.add_subparsers(dest="command", required=True)
    commands = {
        "markov": _cmd_markov,
        "groebner": _cmd_groebner,
        "normalform": _cmd_normalform,
        "feasible": _cmd_feasible,
        "minimize": _cmd_minimize,
        "convert": _cmd_convert,
    }
    for name, fn in commands.items():
        sp = sub.add_parser(name)
        sp.set_defaults(func=fn)
        sp.add_argument("base", help="project base name (reads base.mat/base.lat etc.)")
        sp.add_argument("--truncate", choices=("none", "cone", "lp", "ip"), default="none")
        sp.add_argument("--order", choices=("lex", "degrevlex"), default="degrevlex")
        sp.add_argument("--cone-witnesses", type=int, default=1, metavar="N")
        sp.add_argument("--pair-criterion", choices=("on", "off"), default="on")
        sp.add_argument("--oracle-verify", action="store_true", help=argparse.SUPPRESS)
        if name == "minimize":
            sp.add_argument("--strategy", choices=tuple(_STRATEGIES), default="group-relax")
            sp.add_argument("--upper-bound", type=int, default=None, metavar="K")
    return p


def run_command(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except IntegerInfeasible as e:
        print(f"INTEGER-INFEASIBLE: {e}")
        return 2
    except NotRewritable as e:
        print(f"NO-OPTIMUM: {e}")
        return 2
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
