"""Reference configurations used by the classifier, the moduli discretization
and the test suite: the odd-dimensional Heisenberg-type family and the
product model with a 2-contact structure.
"""

from __future__ import annotations

from fractions import Fraction

from .cealg import LieAlgebra
from .exterior import ComplexKForm, Endo, KForm
from .structures import CCYStructure, check_ccy, check_contact


def heisenberg_algebra(n: int) -> LieAlgebra:
    """The 2n+1 dimensional algebra with d(e^{2n+1}) = sum e^{2k-1} ^ e^{2k}."""
    dim = 2 * n + 1
    top = KForm(dim, 2, {(2 * k - 1, 2 * k): Fraction(1) for k in range(1, n + 1)})
    return LieAlgebra([KForm.zero(dim, 2) for _ in range(dim - 1)] + [top])


def heisenberg_ccy_data(n: int):
    """Algebra, contact form, J and complex volume form for the standard
    contact Calabi-Yau structure on the Heisenberg-type nilmanifold.
    """
    alg = heisenberg_algebra(n)
    dim = alg.dim
    alpha = KForm.monomial(dim, (dim,), 2)
    J = Endo.from_pairs(dim, [(2 * k - 1, 2 * k) for k in range(1, n + 1)])
    epsilon = ComplexKForm.from_real(KForm.scalar(dim, 1))
    for k in range(1, n + 1):
        factor = ComplexKForm(
            KForm.monomial(dim, (2 * k - 1,)), KForm.monomial(dim, (2 * k,))
        )
        epsilon = epsilon.wedge(factor)
    return alg, alpha, J, epsilon


def heisenberg_ccy(n: int) -> CCYStructure:
    """The verified contact Calabi-Yau structure of the Heisenberg-type family."""
    alg, alpha, J, epsilon = heisenberg_ccy_data(n)
    return check_ccy(check_contact(alg, alpha), J, epsilon)


def kodaira_thurston_data():
    """Invariant model of the 2-contact Calabi-Yau structure on the product
    of the 3-dimensional Heisenberg nilmanifold with a circle.

    In the invariant coframe a1..a4 (a3 dual to the center, a4 the circle
    direction) the two contact forms are 2*a3 and 2*a3 + 2*a4, with equal
    differentials 2*a1^a2.
    """
    alg = LieAlgebra(
        [
            KForm.zero(4, 2),
            KForm.zero(4, 2),
            KForm.monomial(4, (1, 2)),
            KForm.zero(4, 2),
        ]
    )
    alpha1 = KForm.monomial(4, (3,), 2)
    alpha2 = KForm(4, 1, {(3,): Fraction(2), (4,): Fraction(2)})
    J = Endo.from_pairs(4, [(1, 2)])
    epsilon = ComplexKForm(KForm.monomial(4, (1,)), KForm.monomial(4, (2,)))
    return alg, [alpha1, alpha2], J, epsilon


# Exact unit rotations (cos, sin) from Pythagorean triples, used to build
# rational rotation families of volume forms.
PYTHAGOREAN_ROTATIONS = (
    (Fraction(1), Fraction(0)),
    (Fraction(4, 5), Fraction(3, 5)),
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
)
