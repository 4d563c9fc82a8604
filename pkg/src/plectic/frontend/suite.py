"""Random-form property suite with a stable, CI-diffable JSON report.

One seeded run exercises every identity the package exports: flow
preservation, semi-bracket laws, the Jacobi defect, the contraction
expansion, the generalized Jacobi residuals, the Leibniz axioms, the
Cartan layer, primitives, and the parser round trip.  The report is
deterministic for a fixed (structure, trials, seed, max_deg): timing is
kept on the dataclass but never serialized, so identical runs produce
byte-identical JSON.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass

from ..cartan import (
    exterior_derivative,
    interior_product,
    lie_derivative,
    poincare_primitive,
    schouten_bracket,
    vf_bracket,
)
from ..exterior import wedge
from ..homotopy import gen_jacobi_residual, l_k, leibniz_axiom_residuals
from ..plectic import (
    HamiltonianForm,
    PlecticStructure,
    d_contraction_identity,
    ham_bracket,
    hamiltonian_vf,
    jacobi_defect,
    structure_lie_derivative,
)
from .generator import (
    random_closed_form,
    random_element,
    random_form,
    random_hamiltonian,
    random_multivector,
)
from .parser import parse_form
from .render import render_form

__all__ = ["VerificationReport", "run_suite"]


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one suite run; ``failures`` empty iff everything passed."""

    structure: str
    suite: str
    trials: int
    seed: int
    failures: tuple[tuple[str, tuple[str, ...], str], ...]
    elapsed_ms: int

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        payload = {
            "structure": self.structure,
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "failures": [
                {"identity": name, "inputs": list(inputs), "residual": residual}
                for name, inputs, residual in self.failures
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _res(form) -> str | None:
    if form is None:
        return None
    if hasattr(form, "form"):
        form = form.form
    return None if form.is_zero else render_form(form)


def _sum_elems(*elems):
    total = None
    for e in elems:
        if e is None:
            continue
        total = e if total is None else total + e
    return total


def _trial(structure: PlecticStructure, rng: random.Random, max_deg: int):
    m, n = structure.chart_dim, structure.n
    draw = lambda: random_hamiltonian(rng, structure, max_deg, require_field=True)
    ralpha = lambda h: render_form(h.alpha)

    a, b, c = draw(), draw(), draw()
    yield "flow_preserves_structure", [ralpha(a)], _res(structure_lie_derivative(structure, a))
    yield (
        "semi_bracket_skew",
        [ralpha(a), ralpha(b)],
        _res(ham_bracket(structure, a, b).alpha + ham_bracket(structure, b, a).alpha),
    )

    ab = ham_bracket(structure, a, b)
    resolved = hamiltonian_vf(structure, ab.alpha)
    if isinstance(resolved, HamiltonianForm):
        yield (
            "bracket_field_is_commutator",
            [ralpha(a), ralpha(b)],
            _res(resolved.vf - vf_bracket(a.vf, b.vf)),
        )
    else:
        yield "bracket_field_is_commutator", [ralpha(a), ralpha(b)], f"not Hamiltonian: {resolved.reason}"

    der = lie_derivative(a.vf, b.alpha) - ab.alpha - exterior_derivative(interior_product(a.vf, b.alpha))
    yield "derivation_lemma", [ralpha(a), ralpha(b)], _res(der)

    lhs, rhs = jacobi_defect(structure, a, b, c)
    yield "jacobi_defect_matches", [ralpha(a), ralpha(b), ralpha(c)], _res(lhs - rhs)

    for k in range(2, 5):
        fields = [draw() for _ in range(k)]
        lhs, rhs = d_contraction_identity(structure, [h.vf for h in fields])
        yield f"d_contraction_m{k}", [ralpha(h) for h in fields], _res(lhs - rhs)

    for k in range(1, n + 3):
        # alternate all-slot-0 tuples (where nonzero terms must cancel) with
        # free slot mixes (where most terms are structurally zero)
        if rng.random() < 0.5:
            elems = [random_element(rng, structure, max_deg, slot=0, require_field=True) for _ in range(k)]
        else:
            elems = [random_element(rng, structure, max_deg) for _ in range(k)]
        rep = gen_jacobi_residual(structure, k, elems)
        yield (
            f"gen_jacobi_m{k}",
            [f"slot{e.degree}: {render_form(e.form)}" for e in elems],
            _res(rep.residual),
        )

    ea = random_element(rng, structure, max_deg, slot=0, require_field=True)
    eb = random_element(rng, structure, max_deg)
    ec = random_element(rng, structure, max_deg)
    rep = leibniz_axiom_residuals(structure, ea, eb, ec)
    labels = [f"slot{e.degree}: {render_form(e.form)}" for e in (ea, eb, ec)]
    yield "leibniz_derivation", labels, _res(rep.derivation)
    yield "leibniz_jacobi", labels, _res(rep.jacobi)
    yield "leibniz_skew_defect", labels, _res(rep.skew_defect)

    k = min(n + 1, 3)
    elems = [random_element(rng, structure, max_deg, slot=0, require_field=True) for _ in range(k)]
    swapped = [elems[1], elems[0], *elems[2:]]
    anti = _sum_elems(l_k(structure, k, elems), l_k(structure, k, swapped))
    yield f"l{k}_antisymmetry", [render_form(e.form) for e in elems], _res(anti)

    f0 = random_form(rng, m, rng.randint(0, max(m - 2, 0)), max_deg)
    yield "dd_zero", [render_form(f0)], _res(exterior_derivative(exterior_derivative(f0)))

    p, q = rng.randint(1, 2), rng.randint(1, 2)
    u = random_multivector(rng, m, p, max_deg)
    v = random_multivector(rng, m, q, max_deg)
    gamma = random_form(rng, m, rng.randint(min(p + q - 1, m), m), max_deg)
    first = lie_derivative(u, interior_product(v, gamma))
    if ((p - 1) * q) % 2:
        first = -first
    comm = interior_product(schouten_bracket(u, v), gamma) - (
        first - interior_product(v, lie_derivative(u, gamma))
    )
    labels = [render_form(u), render_form(v), render_form(gamma)]
    yield "commutator_contraction", labels, _res(comm)

    flip = schouten_bracket(v, u)
    if ((p - 1) * (q - 1)) % 2 == 0:
        anti_s = schouten_bracket(u, v) + flip
    else:
        anti_s = schouten_bracket(u, v) - flip
    yield "schouten_antisymmetry", [render_form(u), render_form(v)], _res(anti_s)

    w = random_multivector(rng, m, rng.randint(1, 2), max_deg)
    tail = wedge(v, schouten_bracket(u, w))
    if ((p - 1) * q) % 2:
        tail = -tail
    leib = schouten_bracket(u, wedge(v, w)) - wedge(schouten_bracket(u, v), w) - tail
    yield "schouten_leibniz", [render_form(u), render_form(v), render_form(w)], _res(leib)

    for d in range(1, min(m, 3) + 1):
        gamma = random_closed_form(rng, m, d, max_deg)
        beta = poincare_primitive(gamma)
        yield f"poincare_round_trip_deg{d}", [render_form(gamma)], _res(exterior_derivative(beta) - gamma)

    f = random_form(rng, m, rng.randint(0, m), max_deg)
    text = render_form(f)
    back = parse_form(text, m, kind="form")
    yield "parse_render_round_trip", [text], None if back == f else _res(back - f) or "degree mismatch"


def run_suite(structure: PlecticStructure, trials: int, seed: int, max_deg: int = 2) -> VerificationReport:
    """Run every identity check ``trials`` times with a dedicated RNG."""
    rng = random.Random(seed)
    failures: list[tuple[str, tuple[str, ...], str]] = []
    t0 = time.perf_counter()
    for _ in range(trials):
        for name, inputs, residual in _trial(structure, rng, max_deg):
            if residual is not None:
                failures.append((name, tuple(inputs), residual))
    elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return VerificationReport(
        structure=structure.key or render_form(structure.omega),
        suite="identities",
        trials=trials,
        seed=seed,
        failures=tuple(failures),
        elapsed_ms=elapsed_ms,
    )
