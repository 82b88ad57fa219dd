"""Command-line front end: ``weylzeta <subcommand> ...``.

Output is JSON on stdout (or LaTeX text with ``--latex``).  Failures go to
stderr as ``{"error": code, "message": ...}`` with exit code 2 for bad input,
3 for computations that cannot be completed and 4 when ``verify`` finds a
failing check.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import ComputationError, InputError, SlowConvergence, VariableMismatch, WeylZetaError
from .exact import format_rational, parse_rational

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE, EXIT_VERIFY = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# ---------------------------------------------------------------------------
# flag parsing


def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"expected a comma-separated integer list, got {text!r}") from None


def _real_list(text: str) -> list:
    out = []
    for t in text.split(","):
        t = t.strip()
        if not t:
            continue
        try:
            out.append(int(t))
        except ValueError:
            try:
                out.append(float(t))
            except ValueError:
                raise InputError(f"bad exponent {t!r}") from None
    return out


def _rational_list(text: str) -> List[Fraction]:
    try:
        return [parse_rational(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"expected comma-separated rationals like 1/2,0, got {text!r}") from None


def _twist_list(text: str) -> list:
    out = []
    for t in text.split(","):
        t = t.strip()
        if not t:
            continue
        try:
            out.append(parse_rational(t))
        except (ValueError, ZeroDivisionError):
            try:
                out.append(complex(t.replace("i", "j")))
            except ValueError:
                raise InputError(f"bad twist coordinate {t!r}") from None
    return out


def _coweight(rs, text: Optional[str]):
    """``None``, ``lambdaJ`` (the J-th fundamental coweight) or a rational list."""
    from .roots import fundamental_coweights

    if text is None:
        return None
    t = text.strip().lower().replace("^vee", "").replace("_", "")
    if t.startswith("lambda"):
        j = int(t[6:]) - 1
        cow = fundamental_coweights(rs)
        if not 0 <= j < rs.rank:
            raise InputError(f"{rs.name} has no coweight {text!r}")
        return cow[j]
    vals = _rational_list(text)
    if len(vals) != rs.rank:
        raise VariableMismatch(f"{rs.name} twist needs {rs.rank} coordinates, got {len(vals)}")
    return tuple(vals)


def _system(args):
    """Root system and lattice from ``--group`` or ``--type``/``--lattice``."""
    from .roots import get_lattice, group_registry, parse_type

    if getattr(args, "group", None):
        return group_registry(args.group)
    if getattr(args, "type", None):
        rs = parse_type(args.type)
        return rs, get_lattice(rs, args.lattice or "P")
    raise InputError("give --group or --type")


def _check_len(rs, values, what="exponent list"):
    if len(values) != rs.n_positive:
        raise VariableMismatch(f"{rs.name} {what} needs {rs.n_positive} entries (see `weylzeta info {rs.name}`)")


# ---------------------------------------------------------------------------
# output helpers


def _numeric_json(res, dps: int) -> dict:
    out = res.to_json()
    if dps > 15:
        import mpmath

        v = res.value
        if isinstance(v, (mpmath.mpf, mpmath.mpc)) or hasattr(v, "real"):
            re, im = mpmath.re(v), mpmath.im(v)
            out["value"] = mpmath.nstr(re, dps) if im == 0 else [mpmath.nstr(re, dps), mpmath.nstr(im, dps)]
    return out


def _symbolic_out(value, args, extra: Optional[dict] = None):
    if args.latex:
        return value.latex()
    out = {"value": value.to_json(), "text": str(value)}
    if extra:
        out.update(extra)
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_info(args):
    from .roots import (
        fundamental_coweights,
        group_registry,
        intermediate_lattices,
        minuscule_indices,
        parse_type,
        witten_normalization,
    )

    try:
        rs = parse_type(args.name)
        selected = None
    except InputError:
        rs, selected = group_registry(args.name)
    lattices = []
    for L in intermediate_lattices(rs):
        lattices.append(
            {
                "name": L.name,
                "index_P_over_L": L.index_P_over_L,
                "index_L_over_Q": L.index_L_over_Q,
                "generators": [list(g) for g in L.generators],
                "congruences": [c.to_json() for c in L.congruences],
                "congruences_text": [str(c) for c in L.congruences],
            }
        )
    out = {
        "type": rs.name,
        "rank": rs.rank,
        "n_positive": rs.n_positive,
        "weyl_order": rs.weyl_order,
        "cartan": [list(r) for r in rs.cartan],
        "positive_coroots": [list(c) for c in rs.positive_coroots],
        "positive_roots": [list(c) for c in rs.positive_roots],
        "length_classes": list(rs.length_class),
        "fundamental_weights": [[format_rational(x) for x in w] for w in rs.fw_in_root_basis],
        "fundamental_coweights": [[format_rational(x) for x in w] for w in fundamental_coweights(rs)],
        "minuscule": [f"lambda{j + 1}" for j in minuscule_indices(rs)],
        "witten_K": witten_normalization(rs),
        "lattices": lattices,
    }
    if selected is not None:
        out["group"] = args.name
        out["lattice"] = selected.name
    return out


def cmd_pfun(args):
    from .bernoulli_p import p_function, p_function_lattice
    from .roots import get_lattice, parse_type

    rs = parse_type(args.type)
    k = _int_list(args.k)
    _check_len(rs, k)
    y = _coweight(rs, args.y) if args.y else tuple(Fraction(0) for _ in range(rs.rank))
    if args.lattice:
        p = p_function_lattice(rs, get_lattice(rs, args.lattice), k, y)
    else:
        p = p_function(rs, k, y)
    return {"p": format_rational(p)}


def cmd_volume(args):
    from .bernoulli_p import volume_value_from_exponents

    rs, L = _system(args)
    s = _int_list(args.k)
    _check_len(rs, s)
    v = volume_value_from_exponents(rs, L, s, _coweight(rs, args.nu))
    if args.latex:
        from .symbolic import SymbolicValue

        return SymbolicValue.monomial(v.q, pi=v.kappa).latex()
    return v.to_json()


def cmd_numeric(args):
    from .numeric import zeta_numeric

    rs, L = _system(args)
    s = _real_list(args.s)
    _check_len(rs, s)
    y = None
    if args.y:
        y = _twist_list(args.y) if not args.y.lower().startswith("lambda") else _coweight(rs, args.y)
    res = zeta_numeric(rs, L, s, y, tol=args.tol, dps=args.precision, threads=args.threads)
    return _numeric_json(res, args.precision)


def cmd_relation(args):
    from .relations import psp2_relation, t41_relation

    if args.family == "pu3":
        rel = t41_relation(args.p, args.q, args.s)
    else:
        if args.r is None:
            raise InputError("psp2 relations need --r")
        rel = psp2_relation(args.p, args.s, args.q, args.r)
    if args.latex:
        return rel.rhs.latex()
    out = rel.to_json()
    if not args.no_check:
        try:
            resid, bound = rel.numeric_residual(args.tol)
        except SlowConvergence as exc:
            raise SlowConvergence(f"{exc}; loosen --tol or pass --no-check") from exc
        out["residual"] = abs(resid)
        out["residual_bound"] = bound
    return out


def cmd_parity(args):
    from .numeric import eval_symbolic
    from .relations import psp2_parity_reduce, pu3_parity_reduce

    if args.family == "pu3":
        if len(args.args) != 3:
            raise InputError("parity pu3 takes three exponents")
        v = pu3_parity_reduce(*args.args)
        return _symbolic_out(v, args, {"numeric": eval_symbolic(v).real})
    if len(args.args) != 4:
        raise InputError("parity psp2 takes four exponents")
    res = psp2_parity_reduce(*args.args, tol=args.tol)
    if args.latex:
        if res.value is None:
            raise ComputationError("no closed form: some T-sums are not in the fixture table")
        return res.value.latex()
    return res.to_json()


def cmd_witten(args):
    from .numeric import witten_zeta_numeric

    s = float(args.s) if not str(args.s).isdigit() else int(args.s)
    res = witten_zeta_numeric(args.group, s, tol=args.tol, dps=args.precision)
    return _numeric_json(res, args.precision)


def cmd_verify(args):
    from .verify import CRITERIA, run_checks, summarize

    results = run_checks(args.criterion or None)
    summary = summarize(results)
    failed = not all(summary.values())
    if args.json:
        payload = {
            "checks": [r.to_json() for r in results],
            "criteria": {str(c): ok for c, ok in sorted(summary.items())},
            "ok": not failed,
        }
        return payload, (EXIT_VERIFY if failed else EXIT_OK)
    lines = []
    for r in results:
        lines.append(f"[{'PASS' if r.ok else 'FAIL'}] {r.criterion}  {r.name:<44} {r.detail}")
    lines.append("")
    for c, ok in sorted(summary.items()):
        lines.append(f"criterion {c} ({CRITERIA[c]}): {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines), (EXIT_VERIFY if failed else EXIT_OK)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--latex", action="store_true", help="render symbolic results as LaTeX")
    common.add_argument("--precision", type=int, default=15, help="numeric working precision in digits")
    common.add_argument("--threads", type=int, default=0, help="accepted for compatibility; evaluation is single-threaded")

    p = _Parser(prog="weylzeta", description="Zeta functions of root systems: exact values, relations, numerics.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("info", parents=[common], help="root system data and lattices")
    s.add_argument("name", help="type such as A2, C2 or a group such as PU3")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("pfun", parents=[common], help="exact generalized Bernoulli function")
    s.add_argument("--type", required=True)
    s.add_argument("--k", required=True, help="exponents in positive-root order")
    s.add_argument("--y", help="twist in simple-coroot coordinates, or lambdaJ")
    s.add_argument("--lattice", help="average over this lattice (P, Q, L1)")
    s.set_defaults(func=cmd_pfun)

    s = sub.add_parser("volume", parents=[common], help="exact value at even exponents")
    s.add_argument("--group")
    s.add_argument("--type")
    s.add_argument("--lattice")
    s.add_argument("--k", required=True, help="even zeta exponents in positive-root order")
    s.add_argument("--nu", help="minuscule coweight twist: lambdaJ or rational list")
    s.set_defaults(func=cmd_volume)

    s = sub.add_parser("numeric", parents=[common], help="truncated lattice sum with a tail bound")
    s.add_argument("--group")
    s.add_argument("--type")
    s.add_argument("--lattice")
    s.add_argument("--s", required=True, help="exponents in positive-root order")
    s.add_argument("--y", help="twist: rationals, complex numbers or lambdaJ")
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_numeric)

    s = sub.add_parser("relation", parents=[common], help="functional relation at integer points")
    s.add_argument("family", choices=["pu3", "psp2"])
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--r", type=int)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--no-check", action="store_true", help="skip the numeric residual")
    s.set_defaults(func=cmd_relation)

    s = sub.add_parser("parity", parents=[common], help="odd-weight closed forms")
    s.add_argument("family", choices=["pu3", "psp2"])
    s.add_argument("args", type=int, nargs="+")
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_parity)

    s = sub.add_parser("witten", parents=[common], help="Witten normalization K^s zeta(s,...,s)")
    s.add_argument("--group", required=True)
    s.add_argument("--s", required=True)
    s.add_argument("--tol", type=float, default=1e-10)
    s.set_defaults(func=cmd_witten)

    s = sub.add_parser("verify", parents=[common], help="run the regression table")
    s.add_argument("--criterion", type=int, action="append", help="restrict to one criterion (repeatable)")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)
    return p


def _emit_error(exc: Exception, code: str) -> None:
    print(json.dumps({"error": code, "message": str(exc)}), file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
    except InputError as exc:
        _emit_error(exc, exc.code)
        return EXIT_INPUT
    except ComputationError as exc:
        _emit_error(exc, exc.code)
        return EXIT_COMPUTE
    except WeylZetaError as exc:
        _emit_error(exc, exc.code)
        return EXIT_COMPUTE
    except (ValueError, ZeroDivisionError) as exc:
        _emit_error(exc, "input_error")
        return EXIT_INPUT
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    if isinstance(result, str):
        print(result)
    else:
        print(json.dumps(result, indent=None if args.command != "info" else 2))
    return code


if __name__ == "__main__":
    sys.exit(main())
