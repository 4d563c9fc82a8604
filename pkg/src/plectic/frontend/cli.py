"""Command-line surface.

Exit codes: 0 all checks passed, 1 a verification failed (with a report on
stdout), 2 usage or input-syntax errors (message on stderr).
"""

from __future__ import annotations

import argparse
import os
import sys

from ..catalog import by_key
from ..errors import (
    DegenerateError,
    DegreeMismatchError,
    DegreeMixError,
    FormSyntaxError,
    InvalidInput,
    NotClosedError,
)
from ..homotopy import (
    gen_jacobi_residual,
    hamiltonian_element,
    form_element,
    l_k,
    leibniz_axiom_residuals,
    leibniz_bracket,
)
from ..plectic import HamiltonianForm, ham_bracket, hamiltonian_vf, validate_plectic
from .parser import parse_form
from .render import render_form
from .suite import run_suite


class _Usage(Exception):
    pass


class _Fail(Exception):
    pass


def _add_structure_flags(sub):
    sub.add_argument("--catalog", help="catalog key, e.g. volume:2 or multiphase:2:3")
    sub.add_argument("--omega", help="structure form expression (with --dim and --n)")
    sub.add_argument("--dim", type=int, help="chart dimension for --omega")
    sub.add_argument("--n", type=int, help="structure degree minus one for --omega")


def _structure(args):
    if args.catalog:
        return by_key(args.catalog)
    if not (args.omega and args.dim and args.n):
        raise _Usage("give --catalog KEY, or --omega EXPR with --dim and --n")
    omega = parse_form(args.omega, args.dim)
    try:
        return validate_plectic(omega, args.n)
    except DegreeMismatchError as e:
        raise _Fail(f"rejected: {e}")
    except NotClosedError as e:
        raise _Fail(f"rejected: structure form is not closed; d(omega) = {render_form(e.residual)}")
    except DegenerateError as e:
        raise _Fail(f"rejected: structure form is degenerate; kernel witness {render_form(e.witness)}")


def _parse_on(structure, text):
    return parse_form(text, structure.chart_dim)


def _hamiltonian(structure, text):
    alpha = _parse_on(structure, text)
    out = hamiltonian_vf(structure, alpha)
    if not isinstance(out, HamiltonianForm):
        detail = f": {out.detail}" if out.detail else ""
        raise _Fail(f"not Hamiltonian ({out.reason}){detail}")
    return out


def _read_elems(structure, path):
    try:
        lines = [ln.strip() for ln in open(path, encoding="utf-8")]
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e}")
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("degrees:"):
        raise _Usage(f'{path}: first line must be "degrees: d1,...,dm"')
    try:
        degrees = [int(tok) for tok in lines[0][len("degrees:"):].replace(",", " ").split()]
    except ValueError:
        raise _Usage(f"{path}: bad degrees line {lines[0]!r}")
    exprs = lines[1:]
    if len(exprs) != len(degrees):
        raise _Usage(f"{path}: {len(degrees)} degrees but {len(exprs)} expressions")
    elems = []
    for slot, text in zip(degrees, exprs):
        if slot == 0:
            elems.append(hamiltonian_element(structure, _hamiltonian(structure, text)))
        else:
            try:
                elems.append(form_element(structure, slot, _parse_on(structure, text)))
            except InvalidInput as e:
                raise _Usage(f"{path}: {e}")
    return elems


def _element_by_degree(structure, text):
    payload = _parse_on(structure, text)
    slot = structure.n - 1 - payload.degree
    if payload.is_zero:
        slot = 0
    if not 0 <= slot <= structure.n - 1:
        raise _Usage(f"degree {payload.degree} does not sit in the complex (n = {structure.n})")
    if slot == 0:
        return hamiltonian_element(structure, _hamiltonian(structure, text))
    return form_element(structure, slot, payload)


def _cmd_check(args):
    structure = _structure(args)
    tag = structure.key or render_form(structure.omega)
    print(f"ok: {tag} is {structure.n}-plectic on a {structure.chart_dim}-dimensional chart")
    return 0


def _cmd_ham(args):
    structure = _structure(args)
    hf = _hamiltonian(structure, args.alpha)
    print(render_form(hf.vf))
    return 0


def _cmd_bracket(args):
    structure = _structure(args)
    a = _hamiltonian(structure, args.alpha)
    b = _hamiltonian(structure, args.beta)
    print(render_form(ham_bracket(structure, a, b).alpha))
    return 0


def _cmd_lk(args):
    structure = _structure(args)
    elems = _read_elems(structure, args.elems)
    try:
        out = l_k(structure, args.k, elems)
    except InvalidInput as e:
        raise _Usage(str(e))
    if out is None:
        print("0")
    else:
        print(f"slot {out.degree}: {render_form(out.form)}")
    return 0


def _cmd_jacobi(args):
    structure = _structure(args)
    elems = _read_elems(structure, args.elems)
    try:
        rep = gen_jacobi_residual(structure, args.m, elems)
    except InvalidInput as e:
        raise _Usage(str(e))
    if rep.residual is None:
        print("residual: 0")
        return 0
    print(f"residual: slot {rep.residual.degree}: {render_form(rep.residual.form)}")
    for i, j, sigma, sign, contribution in rep.trace:
        if contribution is None:
            continue
        val = f"slot {contribution.degree}: {render_form(contribution.form)}"
        print(f"  i={i} j={j} sigma={sigma.images} sign={sign:+d} value={val}")
    return 1


def _cmd_leibniz(args):
    structure = _structure(args)
    a = _element_by_degree(structure, args.a)
    b = _element_by_degree(structure, args.b)
    c = _element_by_degree(structure, args.c) if args.c else b
    ab = leibniz_bracket(structure, a, b)
    print("bracket:", "0" if ab is None else f"slot {ab.degree}: {render_form(ab.form)}")
    rep = leibniz_axiom_residuals(structure, a, b, c)
    ok = True
    for name, res in [("derivation", rep.derivation), ("jacobi", rep.jacobi), ("skew_defect", rep.skew_defect)]:
        if res is None or res.is_zero:
            print(f"{name}: ok")
        else:
            ok = False
            print(f"{name}: residual slot {res.degree}: {render_form(res.form)}")
    return 0 if ok else 1


def _cmd_suite(args):
    structure = _structure(args)
    seed = args.seed
    if seed is None:
        raw = os.environ.get("PLECTIC_SEED", "0")
        try:
            seed = int(raw)
        except ValueError:
            raise _Usage(f"PLECTIC_SEED={raw!r} is not an integer")
    report = run_suite(structure, trials=args.trials, seed=seed, max_deg=args.max_deg)
    text = report.to_json()
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
        state = "ok" if report.passed else f"{len(report.failures)} failures"
        print(f"{report.structure}: {report.trials} trials, {state}, report written to {args.json}")
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="plectic",
        description="Exact checks for higher Poisson-style brackets on polynomial charts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a structure form")
    _add_structure_flags(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("ham", help="solve for the vector field of a form")
    _add_structure_flags(p)
    p.add_argument("--alpha", required=True, help="candidate form expression")
    p.set_defaults(func=_cmd_ham)

    p = sub.add_parser("bracket", help="semi-bracket of two forms")
    _add_structure_flags(p)
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.set_defaults(func=_cmd_bracket)

    p = sub.add_parser("lk", help="evaluate the k-ary bracket on elements from a file")
    _add_structure_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--elems", required=True, help='file: "degrees: d1,...,dm" then one expression per line')
    p.set_defaults(func=_cmd_lk)

    p = sub.add_parser("jacobi", help="generalized Jacobi residual, with trace on failure")
    _add_structure_flags(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--elems", required=True)
    p.set_defaults(func=_cmd_jacobi)

    p = sub.add_parser("leibniz", help="Leibniz bracket and axiom residuals")
    _add_structure_flags(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--c", help="third element; defaults to --b")
    p.set_defaults(func=_cmd_leibniz)

    p = sub.add_parser("suite", help="seeded random property suite with a JSON report")
    _add_structure_flags(p)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=None, help="defaults to PLECTIC_SEED or 0")
    p.add_argument("--max-deg", type=int, default=2, dest="max_deg")
    p.add_argument("--json", help="write the report here instead of stdout")
    p.set_defaults(func=_cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        return args.func(args)
    except _Usage as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except _Fail as e:
        print(e)
        return 1
    except FormSyntaxError as e:
        print(f"syntax error at offset {e.offset}: {e}", file=sys.stderr)
        return 2
    except (DegreeMixError, IndexError, InvalidInput) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
