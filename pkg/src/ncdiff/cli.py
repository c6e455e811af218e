"""ncdiff command line.

Reports go to stdout, diagnostics to stderr.  Exit status: 0 when every
requested check passes, 1 when a check fails (the report carries a
witness), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .algebra_core import Algebra, AlgebraError, PRESETS, mult_op_spans, preset, validate
from .exact_linalg import DimensionError, IntegerLattice, RationalMatrix, to_fraction
from .filtration_engine import (
    Filtration,
    FiltrationError,
    check_left_stability,
    check_multiplicative,
    commutative_filtration,
    iterated_ad_space,
    iterated_ad_test,
    noncommutative_filtration,
    operator_order,
)
from .free_nc import (
    FreeAlgebra,
    FreeAlgebraError,
    check_multimorphism,
    check_uniqueness,
    codiagonal,
    codiagonal_kernel_check,
    derivation_from_generators,
    hs_check,
    hs_from_derivation,
    multimorphism_example11,
)
from .poly_diffops import PolyOpError, ad_mult, is_naive, parse_operator, parse_poly, to_naive
from .principal_parts import PrincipalPartsError, build, induced_operators

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class SpecError(ValueError):
    pass


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# spec parsing
# ---------------------------------------------------------------------------


def _load_json(text: str, where: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines() or [""]
        line = lines[exc.lineno - 1] if exc.lineno - 1 < len(lines) else ""
        raise SpecError(f"{where}: {exc.msg} at line {exc.lineno} column {exc.colno}\n"
                        f"  {line}\n  {' ' * (exc.colno - 1)}^") from None


def parse_spec(source: str) -> dict:
    """Spec JSON from a file path or inline text (anything starting with '{')."""
    text = source.strip()
    if text.startswith("{"):
        raw = _load_json(text, "inline spec")
    else:
        path = Path(source)
        try:
            raw = _load_json(path.read_text(), str(path))
        except OSError as exc:
            raise SpecError(f"cannot read spec {source!r}: {exc.strerror}") from None
    if not isinstance(raw, dict):
        raise SpecError("spec must be a JSON object")
    return raw


def _rat(x) -> Fraction:
    try:
        return to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SpecError(f"not a rational number: {x!r}") from None


def build_algebra(spec: dict) -> tuple[Algebra, dict]:
    """The algebra and the fully resolved spec that reproduces it."""
    scalars = spec.get("scalars", "Q")
    if scalars not in ("Q", "Z"):
        raise SpecError(f"field 'scalars' must be \"Q\" or \"Z\", got {scalars!r}")
    if "preset" in spec:
        name = spec["preset"]
        params = spec.get("params", [])
        if name not in PRESETS:
            raise SpecError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}")
        try:
            A = preset(name, params, scalars)
        except AlgebraError as exc:
            raise SpecError(str(exc)) from None
        return A, {"preset": name, "params": params, "scalars": scalars}
    for key in ("dim", "unit", "structure_constants"):
        if key not in spec:
            raise SpecError(f"explicit spec is missing the required field {key!r}")
    dim = spec["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise SpecError(f"field 'dim' must be a positive integer, got {dim!r}")
    labels = spec.get("labels", [f"e{i}" for i in range(dim)])
    unit = [_rat(c) for c in spec["unit"]]
    triples = []
    for n, entry in enumerate(spec["structure_constants"]):
        if not isinstance(entry, list) or len(entry) not in (4, 5):
            raise SpecError(f"structure_constants[{n}] must be [i, j, k, num] or [i, j, k, num, den]")
        i, j, k = entry[:3]
        if not all(isinstance(t, int) and 0 <= t < dim for t in (i, j, k)):
            raise SpecError(f"structure_constants[{n}] has an index outside 0..{dim - 1}")
        den = entry[4] if len(entry) == 5 else 1
        if den == 0:
            raise SpecError(f"structure_constants[{n}] has a zero denominator")
        c = _rat(entry[3]) / den
        if scalars == "Z" and c.denominator != 1:
            raise SpecError(f"structure_constants[{n}] = {c} is not an integer (scalars Z)")
        triples.append((i, j, k, c))
    try:
        A = Algebra.from_sparse(dim, labels, unit, triples, scalars, spec.get("name", "custom"))
    except AlgebraError as exc:
        raise SpecError(str(exc)) from None
    resolved = {
        "dim": dim,
        "labels": list(A.basis_labels),
        "unit": [_q(c) for c in A.unit],
        "scalars": scalars,
        "structure_constants": [[i, j, k, c.numerator, c.denominator]
                                for i, j, k, c in sorted(triples) if c],
    }
    return A, resolved


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------


def _q(x) -> str:
    x = to_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _vec(v) -> list[str]:
    return [_q(x) for x in v]


def _level_basis(level) -> list[list[str]]:
    return [_vec(b) for b in level.basis]


def _matrix_rows(M: RationalMatrix) -> list[list[str]]:
    return [_vec(r) for r in M.to_rows()]


def parse_operator_matrix(text: str, d: int) -> RationalMatrix:
    """JSON list of rows, or a flat row-major list of d*d entries."""
    raw = _load_json(text, "--op")
    if not isinstance(raw, list):
        raise UsageError("--op must be a JSON list")
    if raw and all(isinstance(r, list) for r in raw):
        if len(raw) != d or any(len(r) != d for r in raw):
            raise UsageError(f"--op must be a {d}x{d} matrix")
        return RationalMatrix.from_rows([[_rat(x) for x in r] for r in raw])
    if len(raw) != d * d:
        raise UsageError(f"--op needs {d * d} entries, got {len(raw)}")
    return RationalMatrix.from_flat(d, [_rat(x) for x in raw])


# ---------------------------------------------------------------------------
# engine helpers
# ---------------------------------------------------------------------------


def _resolve_mode(A: Algebra, mode: Optional[str]) -> str:
    if mode is None:
        return "comm" if A.commutative else "nc"
    if mode == "comm" and not A.commutative:
        raise UsageError("--mode comm needs a commutative algebra; use --mode nc")
    return mode


def _filtration(A: Algebra, mode: str, nmax: Optional[int]) -> Filtration:
    if mode == "comm":
        return commutative_filtration(A, nmax)
    return noncommutative_filtration(A, nmax)


def _filtration_result(F: Filtration, with_bases: bool) -> dict:
    levels = []
    for n, level in enumerate(F.levels):
        row = {"n": n, "dim": level.dim}
        if F.primed_levels:
            row["primed_dim"] = F.primed_levels[n].dim
        if F.integral:
            row["index_in_saturation"] = level.index_in_saturation()
        if with_bases:
            row["basis"] = _level_basis(level)
        levels.append(row)
    dims = F.dims()
    return {
        "mode": F.mode,
        "integral": F.integral,
        "n_max": F.n_max,
        "ambient_dim": F.algebra.dim ** 2,
        "stabilized_at": F.stabilized_at,
        "nondecreasing": all(a <= b for a, b in zip(dims, dims[1:])),
        "levels": levels,
    }


# ---------------------------------------------------------------------------
# commands: each returns (result dict, passed)
# ---------------------------------------------------------------------------


def cmd_validate(A: Algebra, args) -> tuple[dict, bool]:
    violations = validate(A)
    return {"violations": [v.to_dict() for v in violations]}, not violations


def cmd_filtration(A: Algebra, args) -> tuple[dict, bool]:
    F = _filtration(A, _resolve_mode(A, args.mode), args.nmax)
    res = _filtration_result(F, args.bases)
    return res, res["nondecreasing"]


def cmd_order(A: Algebra, args) -> tuple[dict, bool]:
    D = parse_operator_matrix(args.op, A.dim)
    F = _filtration(A, _resolve_mode(A, args.mode), args.nmax)
    n = operator_order(F, D)
    return {"mode": F.mode, "n_max": F.n_max, "operator": _matrix_rows(D),
            "order": n if n is not None else "exceeds n_max"}, True


def cmd_ad_test(A: Algebra, args) -> tuple[dict, bool]:
    D = parse_operator_matrix(args.op, A.dim)
    ok = iterated_ad_test(A, D, args.n)
    return {"n": args.n, "operator": _matrix_rows(D), "annihilated": ok}, ok


def cmd_principal_parts(A: Algebra, args) -> tuple[dict, bool]:
    P = build(A, args.n)
    problems = P.check_invariants()
    ind = induced_operators(A, args.n, with_hom_dim=True)
    level = commutative_filtration(A, args.n).levels[args.n]
    if isinstance(level, IntegerLattice):
        level = level.rational_span()
    agrees = ind.operators == level
    res = {
        "n": args.n,
        "ideal_dim": P.ideal.dim,
        "quotient_dim": P.quotient_dim,
        "hom_dim": ind.hom_dim,
        "operator_dim": ind.operators.dim,
        "injective": ind.injective,
        "matches_filtration_level": agrees,
        "invariant_problems": problems,
        "j_n": _matrix_rows(P.j_n),
    }
    return res, not problems and agrees


def _comparison_levels(A: Algebra, nmax: Optional[int]) -> dict[str, list]:
    nmax = A.dim + 1 if nmax is None else nmax
    defs: dict[str, list] = {}
    defs["noncommutative"] = list(noncommutative_filtration(A, nmax).levels)
    if A.commutative:
        defs["recursion"] = list(commutative_filtration(A, nmax).levels)
        if A.scalar_mode == "Q":
            defs["iterated_ad"] = [iterated_ad_space(A, n) for n in range(nmax + 1)]
            defs["principal_parts"] = [induced_operators(A, n) for n in range(nmax + 1)]
    return defs


def cmd_compare(A: Algebra, args) -> tuple[dict, bool]:
    defs = _comparison_levels(A, args.nmax)
    names = sorted(defs)
    pairs = []
    ok = True
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            x, y = names[a], names[b]
            eq = [defs[x][n] == defs[y][n] for n in range(len(defs[x]))]
            first_bad = next((n for n, e in enumerate(eq) if not e), None)
            ok = ok and first_bad is None
            pairs.append({"a": x, "b": y, "equal": first_bad is None, "first_difference": first_bad})
    res = {
        "definitions": names,
        "dims": {name: [lvl.dim for lvl in defs[name]] for name in names},
        "pairs": pairs,
    }
    if A.scalar_mode == "Z" and A.commutative:
        res["note"] = "iterated_ad and principal_parts are computed over Q and skipped in Z mode"
    return res, ok


def cmd_multiplicative(A: Algebra, args) -> tuple[dict, bool]:
    mode = _resolve_mode(A, args.mode)
    nmax = args.nmax if args.nmax is not None else args.rmax
    if args.rmax > nmax:
        raise UsageError("--rmax cannot exceed --nmax")
    F = _filtration(A, mode, nmax)
    checks = []
    ok = True
    for total in range(args.rmax + 1):
        for r in range(total + 1):
            c = check_multiplicative(F, r, total - r)
            row = {"r": r, "s": total - r, "passed": c.passed}
            if not c.passed:
                row["witness"] = _matrix_rows(c.witness)
            checks.append(row)
            ok = ok and c.passed
    res = {"mode": F.mode, "n_max": F.n_max, "rmax": args.rmax, "checks": checks,
           "left_stable": check_left_stability(F)}
    ok = ok and all(res["left_stable"])
    if F.primed_levels and not F.integral:
        R = mult_op_spans(A)[1]
        res["primed_zero_is_right_mult"] = F.primed_levels[0] == R
        ok = ok and res["primed_zero_is_right_mult"]
    return res, ok


def cmd_poly(args) -> tuple[dict, bool]:
    D = parse_operator(args.op, args.vars, args.scalars)
    res: dict[str, Any] = {"operator": str(D), "order": D.order()}
    naive = is_naive(D) if args.scalars == "Z" else True
    if args.scalars == "Z":
        res["naive"] = naive
    if naive:
        res["naive_form"] = {f"dX^{i}*dY^{j}": str(p) for (i, j), p in sorted(to_naive(D).items())}
    if args.compose:
        E = parse_operator(args.compose, args.vars, args.scalars)
        res["composition"] = str(D @ E)
    if args.apply:
        res["applied"] = str(D(parse_poly(args.apply, args.vars, args.scalars)))
    if args.ad:
        f = parse_poly(args.ad, args.vars, args.scalars)
        C = ad_mult(D, f)
        res["ad"] = {"operator": str(C), "order": C.order()}
    return res, True


def _alphabet(text: str) -> tuple[str, ...]:
    out = tuple(s.strip() for s in text.split(",") if s.strip())
    if not out:
        raise UsageError("empty alphabet")
    return out


def cmd_free(args) -> tuple[dict, bool]:
    alpha = _alphabet(args.alphabet)
    res: dict[str, Any] = {"alphabet": list(alpha), "degree": args.degree}
    ok = True
    if args.check in ("codiagonal", "all"):
        rep = codiagonal_kernel_check(alpha, args.degree)
        uniq = check_uniqueness(codiagonal(alpha, args.degree))
        res["codiagonal"] = {"passed": rep.passed, **rep.details, "uniqueness": uniq.passed}
        ok = ok and rep.passed and uniq.passed
    if args.check in ("multimorphism", "all"):
        ys = _alphabet(args.y_letters)
        S = FreeAlgebra(alpha, args.degree)
        missing = [y for y in ys if y not in alpha]
        if missing:
            raise UsageError(f"Y-letters {missing} are not in the alphabet")
        assignment = {y: S.parse(z) for y, z in zip(ys, _alphabet(args.z or ",".join(ys)))}
        if len(assignment) != len(ys):
            raise UsageError("--z needs one image per Y-letter")
        phi = multimorphism_example11(args.r, assignment, S)
        arities = tuple(int(a) for a in args.arities.split(","))
        rep = check_multimorphism(phi, args.samples, args.seed, arities)
        res["multimorphism"] = {"r": args.r, "arities": list(arities), "samples": args.samples,
                                "passed": rep.passed, "checked": rep.checked, "counterexample": rep.witness}
        ok = ok and rep.passed
    return res, ok


def _parse_derivation(F: FreeAlgebra, text: str) -> dict:
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise UsageError(f"derivation entries look like x=y, got {part!r}")
        g, img = part.split("=", 1)
        g = g.strip()
        if g not in F.alphabet:
            raise UsageError(f"{g!r} is not a generator")
        out[g] = F.parse(img)
    return out


def cmd_hs_check(args) -> tuple[dict, bool]:
    F = FreeAlgebra(_alphabet(args.alphabet), args.degree)
    d = derivation_from_generators(F, _parse_derivation(F, args.derivation))
    seq = hs_from_derivation(d, args.N)
    rep = hs_check(seq)
    res: dict[str, Any] = {"alphabet": list(F.alphabet), "degree": F.max_degree,
                           "N": args.N, "derivation": args.derivation,
                           "hs_check": {"passed": rep.passed, "checked": rep.checked, "witness": rep.witness}}
    ok = rep.passed
    if args.with_filtration:
        top = min(args.N, args.nmax if args.nmax is not None else args.N)
        Fl = noncommutative_filtration(F.to_algebra(), top)
        orders = [operator_order(Fl, seq[n].matrix()) for n in range(top + 1)]
        inside = [o is not None and o <= n for n, o in enumerate(orders)]
        res["filtration"] = {"n_max": top, "orders": orders, "in_level": inside}
        ok = ok and all(inside)
    return res, ok


def cmd_report(A: Algebra, args) -> tuple[dict, bool]:
    violations = validate(A)
    res: dict[str, Any] = {"violations": [v.to_dict() for v in violations]}
    if violations:
        return res, False
    mode = _resolve_mode(A, args.mode)
    F = _filtration(A, mode, args.nmax)
    res["filtration"] = _filtration_result(F, args.bases)
    mult = []
    ok = True
    for total in range(F.n_max + 1):
        for r in range(total + 1):
            c = check_multiplicative(F, r, total - r)
            mult.append({"r": r, "s": total - r, "passed": c.passed})
            ok = ok and c.passed
    res["multiplicative"] = mult
    if A.commutative:
        cmp_res, cmp_ok = cmd_compare(A, args)
        res["compare"] = cmp_res
        ok = ok and cmp_ok
    return res, ok


ALGEBRA_COMMANDS = {
    "validate": cmd_validate,
    "filtration": cmd_filtration,
    "order": cmd_order,
    "ad-test": cmd_ad_test,
    "principal-parts": cmd_principal_parts,
    "compare": cmd_compare,
    "multiplicative": cmd_multiplicative,
    "report": cmd_report,
}
STANDALONE_COMMANDS = {"poly": cmd_poly, "free": cmd_free, "hs-check": cmd_hs_check}


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------


def emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _emit_csv(report)
    return _emit_table(report)


def _rows_for_csv(result: dict) -> Optional[list[dict]]:
    for key in ("levels", "checks", "pairs"):
        if isinstance(result.get(key), list):
            return result[key]
    if isinstance(result.get("filtration"), dict):
        return result["filtration"]["levels"]
    return None


def _emit_csv(report: dict) -> str:
    buf = io.StringIO()
    rows = _rows_for_csv(report["result"])
    w = csv.writer(buf, lineterminator="\n")
    if rows:
        keys = [k for k in rows[0] if k not in ("basis", "witness")]
        w.writerow(keys)
        for row in rows:
            w.writerow([_cell(row.get(k)) for k in keys])
    else:
        w.writerow(["key", "value"])
        for k, v in sorted(_flatten(report["result"]).items()):
            w.writerow([k, v])
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    return str(v)


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v, sort_keys=True)
        else:
            out[key] = _cell(v)
    return out


def _emit_table(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    alg = report.get("algebra")
    if alg:
        lines.append(f"algebra: {alg['name'] or 'custom'}  dim={alg['dim']}  "
                     f"commutative={str(alg['commutative']).lower()}  scalars={alg['scalars']}")
    res = report["result"]
    filt = res if "levels" in res else res.get("filtration")
    if isinstance(filt, dict) and "levels" in filt:
        lines.append(f"mode: {filt['mode']}  n_max={filt['n_max']}  ambient={filt['ambient_dim']}")
        primed = "primed_dim" in filt["levels"][0] if filt["levels"] else False
        lines.append("  n  dim" + ("  primed" if primed else ""))
        for row in filt["levels"]:
            lines.append(f"{row['n']:>3}  {row['dim']:>3}" + (f"  {row['primed_dim']:>6}" if primed else ""))
        st = filt["stabilized_at"]
        lines.append(f"stabilized at level {st}" if st is not None else "no stabilization detected up to n_max")
    rest = {k: v for k, v in res.items() if k != "levels" and not (k == "filtration" and "levels" in v)}
    for k, v in sorted(_flatten(rest).items()):
        if k in ("mode", "n_max", "ambient_dim", "stabilized_at", "integral", "nondecreasing"):
            continue
        lines.append(f"{k}: {v}")
    lines.append("result: " + ("PASS" if report["passed"] else "FAIL"))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table",
                        help="output format (default: table)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default: 0)")
    common.add_argument("--nmax", type=_nonneg, default=None,
                        help="top filtration level (default: dim + 1, or as documented per command)")
    common.add_argument("--timing", action="store_true",
                        help="add wall-clock seconds to the report (breaks byte-identical output)")

    alg = _Parser(add_help=False)
    alg.add_argument("--spec", required=True,
                     help="algebra spec: JSON file path or inline JSON such as '{\"preset\":\"dual_numbers\"}'")
    alg.add_argument("--mode", choices=("comm", "nc"), default=None,
                     help="filtration recursion (default: comm for commutative algebras, else nc)")

    p = _Parser(prog="ncdiff", description="Exact filtrations of differential operators on finite-dimensional algebras.")
    p.add_argument("--version", action="version", version=f"ncdiff {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common, alg], help="check associativity and unit laws")
    s = sub.add_parser("filtration", parents=[common, alg], help="levels of the operator filtration")
    s.add_argument("--bases", action="store_true", help="include canonical bases of each level")
    s = sub.add_parser("order", parents=[common, alg], help="least level containing an operator")
    s.add_argument("--op", required=True, help="operator as JSON rows (column j = image of e_j) or a flat list")
    s = sub.add_parser("ad-test", parents=[common, alg], help="iterated commutator criterion (commutative)")
    s.add_argument("--op", required=True, help="operator as JSON rows or a flat list")
    s.add_argument("--n", type=_nonneg, required=True, help="test ad^(n+1) D = 0")
    s = sub.add_parser("principal-parts", parents=[common, alg], help="P^n and its induced operators")
    s.add_argument("--n", type=_nonneg, required=True)
    sub.add_parser("compare", parents=[common, alg], help="compare every applicable definition level by level")
    s = sub.add_parser("multiplicative", parents=[common, alg], help="check D_r D_s inside D_(r+s)")
    s.add_argument("--rmax", type=_nonneg, default=4, help="check all r + s <= rmax (default: 4; --nmax defaults to rmax)")
    s = sub.add_parser("report", parents=[common, alg], help="validation, filtration, multiplicativity and comparison")
    s.add_argument("--bases", action="store_true")

    s = sub.add_parser("poly", parents=[common], help="divided-power operators on k[X] or k[X,Y]")
    s.add_argument("--op", required=True, help="e.g. 'X^2*tX^2 + 3*dY'")
    s.add_argument("--vars", type=int, choices=(1, 2), default=2)
    s.add_argument("--scalars", choices=("Q", "Z"), default="Q")
    s.add_argument("--apply", help="polynomial to apply the operator to")
    s.add_argument("--compose", help="second operator; reports op * compose")
    s.add_argument("--ad", help="polynomial f; reports op*f - f*op")

    s = sub.add_parser("free", parents=[common], help="free products, codiagonal and multimorphisms")
    s.add_argument("--alphabet", default="x,y")
    s.add_argument("--degree", type=_nonneg, default=3)
    s.add_argument("--check", choices=("codiagonal", "multimorphism", "all"), default="all")
    s.add_argument("--y-letters", default="y", help="letters treated as Y-variables (default: y)")
    s.add_argument("--z", default=None, help="comma-separated images of the Y-letters (default: themselves)")
    s.add_argument("--r", type=_nonneg, default=1)
    s.add_argument("--samples", type=_nonneg, default=100)
    s.add_argument("--arities", default="1,2")

    s = sub.add_parser("hs-check", parents=[common], help="Hasse-Schmidt sequence of a derivation")
    s.add_argument("--alphabet", default="x,y")
    s.add_argument("--degree", type=_nonneg, default=3)
    s.add_argument("--derivation", default="x=y", help="generator images, e.g. 'x=y,y=0'")
    s.add_argument("--N", type=_nonneg, default=2)
    s.add_argument("--with-filtration", action="store_true", help="also check partial_n in D_n")
    return p


def run(argv: Sequence[str]) -> tuple[dict, int]:
    args = build_parser().parse_args(list(argv))
    report: dict[str, Any] = {"command": args.command, "argv": list(argv), "seed": args.seed,
                              "version": __version__}
    start = time.perf_counter()
    if args.command in ALGEBRA_COMMANDS:
        A, resolved = build_algebra(parse_spec(args.spec))
        report["spec"] = resolved
        report["algebra"] = A.summary()
        if args.command not in ("validate", "report"):
            violations = validate(A)
            if violations:
                lines = "\n".join(f"  {v.kind} {list(v.indices)}: {v.detail}" for v in violations)
                raise SpecError(f"spec does not define a valid algebra:\n{lines}")
        result, passed = ALGEBRA_COMMANDS[args.command](A, args)
    else:
        report["spec"] = None
        result, passed = STANDALONE_COMMANDS[args.command](args)
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    report["result"] = result
    report["passed"] = passed
    return report, EXIT_OK if passed else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    fmt = "table"
    if "--format" in argv:
        i = list(argv).index("--format")
        if i + 1 < len(argv):
            fmt = argv[i + 1]
    try:
        report, code = run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (UsageError, SpecError, PolyOpError, FreeAlgebraError, DimensionError) as exc:
        print(f"ncdiff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlgebraError, FiltrationError, PrincipalPartsError) as exc:
        print(f"ncdiff: error in {argv[0] if argv else '?'}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(emit(report, fmt if fmt in ("table", "json", "csv") else "table"))
    return code


if __name__ == "__main__":
    sys.exit(main())
