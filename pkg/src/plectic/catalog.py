"""Ready-made validated structures on coordinate charts.

Every constructor returns a PlecticStructure that has passed full
validation.  String keys ("symplectic:2", "multiphase:2:3", ...) address
the same constructors from the command line.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .cartan import exterior_derivative
from .errors import InvalidInput
from .exterior import Form, wedge
from .plectic import PlecticStructure, validate_plectic
from .scalarfield import RationalFn

__all__ = [
    "make_symplectic",
    "make_volume",
    "make_multiphase",
    "make_cartan3",
    "make_hyperkahler_flat",
    "by_key",
    "CATALOG_KEYS",
]


def make_symplectic(k: int) -> PlecticStructure:
    """R^{2k} with omega = sum_i dx_i ^ dx_{k+i}; the classical phase space."""
    if k < 1:
        raise InvalidInput(f"need k >= 1, got {k}")
    m = 2 * k
    omega = Form(m, 2, [((i, k + i), 1) for i in range(1, k + 1)])
    return validate_plectic(omega, 1, key=f"symplectic:{k}")


def make_volume(n: int) -> PlecticStructure:
    """R^{n+1} with the standard volume form dx_1 ^ ... ^ dx_{n+1}."""
    if n < 1:
        raise InvalidInput(f"need n >= 1, got {n}")
    m = n + 1
    omega = Form.basis(m, tuple(range(1, m + 1)), 1)
    return validate_plectic(omega, n, key=f"volume:{n}")


def make_multiphase(n: int, k: int) -> PlecticStructure:
    """The multi-phase chart over R^k: coordinates x_1..x_k plus one momentum
    p_I per n-element index set I of {1..k} (lexicographic), carrying

        theta = sum_I p_I dx_I,      omega = -d(theta).

    For n = 1 this is make_symplectic(k) up to coordinate labels.
    """
    if n < 1 or k < 1:
        raise InvalidInput(f"need n, k >= 1, got {n}, {k}")
    if n > k:
        raise InvalidInput(f"no {n}-element subsets of 1..{k}")
    subsets = list(itertools.combinations(range(1, k + 1), n))
    m = k + len(subsets)
    theta = Form.zero(m, n)
    for pos, idx in enumerate(subsets):
        p = Form.function(m, _coordinate_fn(m, k + 1 + pos))
        theta = theta + wedge(p, Form.basis(m, idx, 1))
    omega = -exterior_derivative(theta)
    return validate_plectic(omega, n, key=f"multiphase:{n}:{k}")


def _coordinate_fn(m: int, i: int) -> RationalFn:
    return RationalFn.coordinate(m, i)


_EPSILON3 = {
    (1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
    (1, 3, 2): -1, (3, 2, 1): -1, (2, 1, 3): -1,
}


def make_cartan3() -> PlecticStructure:
    """The invariant 3-form of the compact 3-dimensional Lie algebra with
    structure constants epsilon_{abc}, modeled at the identity on R^3.

    nu(x, y, z) = <x, [y, z]> with the trace pairing of the defining
    representation scaled to the smallest positive-definite integer matrix
    (<e_a, e_b> = delta_{ab}).  Full antisymmetry of nu is checked before
    the coefficient is read off.
    """
    # tr of products of the spin-1/2 generators: -(1/2) delta; scale by -2.
    pairing = [[Fraction(-2) * _trace_pair(a, b) for b in range(1, 4)] for a in range(1, 4)]
    nu = {}
    for x, y, z in itertools.product(range(1, 4), repeat=3):
        total = Fraction(0)
        for w in range(1, 4):
            c = _EPSILON3.get((y, z, w), 0)
            if c:
                total += c * pairing[x - 1][w - 1]
        nu[(x, y, z)] = total
    for x, y, z in itertools.product(range(1, 4), repeat=3):
        if nu[(x, y, z)] != -nu[(y, x, z)] or nu[(x, y, z)] != -nu[(x, z, y)]:
            raise RuntimeError("structure constants failed antisymmetry")
    c = nu[(1, 2, 3)]
    if c == 0:
        raise RuntimeError("degenerate invariant 3-form")
    omega = Form.basis(3, (1, 2, 3), c)
    return validate_plectic(omega, 2, key="cartan3")


def _trace_pair(a: int, b: int) -> Fraction:
    # tr(A_a A_b) for A_i = -(i/2) sigma_i: the Pauli products give
    # tr(A_a A_b) = -(1/2) delta_{ab}.
    return Fraction(-1, 2) if a == b else Fraction(0)


def make_hyperkahler_flat() -> PlecticStructure:
    """Flat R^4 with the sum of squares of the three Kahler 2-forms:

        theta_1 = dx1^dx2 + dx3^dx4,
        theta_2 = dx1^dx3 - dx2^dx4,
        theta_3 = dx1^dx4 + dx2^dx3,
        omega   = sum_i theta_i ^ theta_i = 6 dx1^dx2^dx3^dx4.
    """
    thetas = kahler_triple()
    omega = Form.zero(4, 4)
    for t in thetas:
        omega = omega + wedge(t, t)
    return validate_plectic(omega, 3, key="hyperkahler")


def kahler_triple() -> tuple[Form, Form, Form]:
    """The three flat Kahler forms on R^4 used by make_hyperkahler_flat."""
    t1 = Form(4, 2, [((1, 2), 1), ((3, 4), 1)])
    t2 = Form(4, 2, [((1, 3), 1), ((2, 4), -1)])
    t3 = Form(4, 2, [((1, 4), 1), ((2, 3), 1)])
    return t1, t2, t3


CATALOG_KEYS = ("symplectic:<k>", "volume:<n>", "multiphase:<n>:<k>", "cartan3", "hyperkahler")


def by_key(key: str) -> PlecticStructure:
    """Look up a catalog structure by its string key."""
    parts = key.split(":")
    try:
        if parts[0] == "symplectic" and len(parts) == 2:
            return make_symplectic(int(parts[1]))
        if parts[0] == "volume" and len(parts) == 2:
            return make_volume(int(parts[1]))
        if parts[0] == "multiphase" and len(parts) == 3:
            return make_multiphase(int(parts[1]), int(parts[2]))
        if parts[0] == "cartan3" and len(parts) == 1:
            return make_cartan3()
        if parts[0] == "hyperkahler" and len(parts) == 1:
            return make_hyperkahler_flat()
    except ValueError as exc:
        raise InvalidInput(f"bad catalog key {key!r}: {exc}") from exc
    raise InvalidInput(f"unknown catalog key {key!r}; known: {', '.join(CATALOG_KEYS)}")
