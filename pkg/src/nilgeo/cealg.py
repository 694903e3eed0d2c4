"""Chevalley-Eilenberg calculus on a finite-dimensional Lie algebra.

The algebra is described by the differential on degree-1 generators (the
structure constants in dual form); the bracket is recovered from the standard
convention d(gamma)(X, Y) = -gamma([X, Y]). Cohomology ranks (Betti numbers),
exactness tests with explicit primitives, and Lie derivatives of invariant
forms are all computed exactly.

Betti numbers of the associated compact nilmanifold are identified with the
cohomology of this complex (the Nomizu identification); the engine only ever
works at the algebra level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import linalg
from .errors import InputError
from .exterior import ComplexKForm, KForm, Vector, contract, pullback


class JacobiError(InputError):
    """The proposed differential does not square to zero (Jacobi fails)."""


class LieAlgebra:
    """Lie algebra given by the images of degree-1 generators under d.

    `d1[k]` is the degree-2 form d(e^{k+1}). The derived brackets satisfy
    [X_i, X_j] = -sum_k d1[k](X_i, X_j) X_k. Construction verifies d on each
    generator squares to zero unless check=False.
    """

    __slots__ = ("dim", "d1", "_brackets")

    def __init__(self, d1, check: bool = True):
        d1 = list(d1)
        dim = len(d1)
        for k, form in enumerate(d1, start=1):
            if not isinstance(form, KForm) or form.dim != dim or form.degree != 2:
                raise InputError(f"d(e{k}) must be a degree-2 form on dimension {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "d1", tuple(d1))
        table = {}
        for i in range(1, dim + 1):
            for j in range(i + 1, dim + 1):
                table[(i, j)] = Vector([-form.coefficient((i, j)) for form in d1])
        object.__setattr__(self, "_brackets", table)
        if check:
            for k, form in enumerate(d1, start=1):
                dd = self.d(form)
                if not dd.is_zero:
                    raise JacobiError(f"d(d(e{k})) = {dd} != 0; Jacobi identity fails")

    def __setattr__(self, *_):
        raise AttributeError("LieAlgebra is immutable")

    @classmethod
    def abelian(cls, dim: int) -> LieAlgebra:
        return cls([KForm.zero(dim, 2) for _ in range(dim)], check=False)

    def basis_vector(self, index: int) -> Vector:
        return Vector.basis(self.dim, index)

    def bracket_basis(self, i: int, j: int) -> Vector:
        """[X_i, X_j] for 1-based basis indices."""
        if i == j:
            return Vector.zero(self.dim)
        if i < j:
            return self._brackets[(i, j)]
        return -self._brackets[(j, i)]

    def bracket(self, u: Vector, v: Vector) -> Vector:
        out = Vector.zero(self.dim)
        for i in range(1, self.dim + 1):
            if not u[i - 1]:
                continue
            for j in range(1, self.dim + 1):
                c = u[i - 1] * v[j - 1]
                if c:
                    out = out + c * self.bracket_basis(i, j)
        return out

    def d(self, form):
        """Chevalley-Eilenberg differential, extended as a graded derivation."""
        if isinstance(form, ComplexKForm):
            return ComplexKForm(self.d(form.re), self.d(form.im))
        if form.dim != self.dim:
            raise InputError("ce differential: dimension mismatch")
        out = KForm.zero(self.dim, form.degree + 1)
        for idx, c in form.terms.items():
            for pos, k in enumerate(idx):
                piece = KForm.monomial(self.dim, idx[:pos], 1)
                piece = piece.wedge(self.d1[k - 1])
                piece = piece.wedge(KForm.monomial(self.dim, idx[pos + 1 :], 1))
                sign = -1 if pos % 2 else 1
                out = out + (sign * c) * piece
        return out

    def is_nilpotent(self) -> bool:
        """Lower central series terminates at zero."""
        current = [Vector.basis(self.dim, i) for i in range(1, self.dim + 1)]
        for _ in range(self.dim + 1):
            nxt = []
            for i in range(1, self.dim + 1):
                for v in current:
                    w = self.bracket(Vector.basis(self.dim, i), v)
                    if not w.is_zero:
                        nxt.append(w)
            if not nxt:
                return True
            basis = linalg.rref([list(v.coeffs) for v in nxt])[0]
            current = [Vector(row) for row in basis if any(row)]
        return False

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.d1 == other.d1

    __hash__ = None

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, d={[str(f) for f in self.d1]})"


def ce_differential(form, alg: LieAlgebra):
    return alg.d(form)


def basis_tuples(dim: int, degree: int) -> list[tuple[int, ...]]:
    """Lexicographic basis of Lambda^degree; fixed so matrices are reproducible."""
    return list(combinations(range(1, dim + 1), degree))


def d_matrix(alg: LieAlgebra, degree: int) -> list[list[Fraction]]:
    """Matrix of d: Lambda^degree -> Lambda^{degree+1} in the lexicographic bases."""
    dom = basis_tuples(alg.dim, degree)
    cod = basis_tuples(alg.dim, degree + 1)
    cod_pos = {idx: r for r, idx in enumerate(cod)}
    rows = [[Fraction(0)] * len(dom) for _ in cod]
    for c, idx in enumerate(dom):
        image = alg.d(KForm.monomial(alg.dim, idx, 1))
        for jdx, val in image.terms.items():
            rows[cod_pos[jdx]][c] = val
    return rows


@dataclass(frozen=True)
class BettiTable:
    """Cohomology ranks b_0..b_n of the Chevalley-Eilenberg complex."""

    numbers: tuple[int, ...]

    def __iter__(self):
        return iter(self.numbers)

    def __getitem__(self, k: int) -> int:
        return self.numbers[k]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.numbers))

    def is_poincare_dual(self) -> bool:
        return self.numbers == tuple(reversed(self.numbers))

    def __str__(self) -> str:
        return "(" + ", ".join(str(b) for b in self.numbers) + ")"


def betti_numbers(alg: LieAlgebra) -> BettiTable:
    """b_k = dim ker(d on Lambda^k) - rank(d on Lambda^{k-1}), all ranks exact."""
    n = alg.dim
    numbers = []
    rank_prev = 0
    for k in range(n + 1):
        dim_k = len(basis_tuples(n, k))
        rank_k = linalg.rank(d_matrix(alg, k)) if k < n else 0
        numbers.append(dim_k - rank_k - rank_prev)
        rank_prev = rank_k
    return BettiTable(tuple(numbers))


def is_exact(form: KForm, alg: LieAlgebra) -> KForm | None:
    """If form = d(b) is solvable, return one primitive b; otherwise None.

    The input must be closed.
    """
    if not alg.d(form).is_zero:
        raise InputError("is_exact: input form is not closed")
    k = form.degree
    if form.is_zero:
        return KForm.zero(alg.dim, max(k - 1, 0))
    if k == 0:
        return None
    dom = basis_tuples(alg.dim, k - 1)
    cod = basis_tuples(alg.dim, k)
    matrix = d_matrix(alg, k - 1)
    rhs = [form.coefficient(idx) for idx in cod]
    sol = linalg.solve(matrix, rhs)
    if sol is None:
        return None
    return KForm(alg.dim, k - 1, {idx: c for idx, c in zip(dom, sol)})


def lie_derivative(v: Vector, form, alg: LieAlgebra):
    """Cartan formula L_v = d iota_v + iota_v d for invariant forms, constant v."""
    if isinstance(form, ComplexKForm):
        return ComplexKForm(lie_derivative(v, form.re, alg), lie_derivative(v, form.im, alg))
    if form.degree == 0:
        return KForm.zero(alg.dim, 0)
    return alg.d(contract(v, form)) + contract(v, alg.d(form))


def change_of_basis(alg: LieAlgebra, p_columns) -> LieAlgebra:
    """Rewrite the algebra in the frame whose vectors are the columns of P.

    The new coframe element f^k is the old form sum_i (P^{-1})_{k i} e^i; its
    differential is computed in the old coordinates and pulled back along the
    new frame.
    """
    cols = [Vector(col) for col in p_columns]
    n = alg.dim
    if len(cols) != n:
        raise InputError("change_of_basis: need a full frame")
    pmat = [[cols[j][i] for j in range(n)] for i in range(n)]
    pinv = linalg.inverse(pmat)
    new_d1 = []
    for k in range(n):
        old = KForm.zero(n, 2)
        for i in range(n):
            if pinv[k][i]:
                old = old + pinv[k][i] * alg.d1[i]
        new_d1.append(pullback(old, cols))
    return LieAlgebra(new_d1)
