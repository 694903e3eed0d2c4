"""Left-invariant Riemannian geometry, all exact.

Levi-Civita connection via the Koszul formula for left-invariant metrics,
Riemann / Ricci / scalar curvature, the alpha-Einstein decomposition, and the
transverse connection with its transverse Ricci tensor (computed both from
the curvature definition and from the Ricci identity, as a cross-check).

Sign conventions, pinned so the curvature of the standard contact Calabi-Yau
examples comes out with lambda = -2:

    R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
    Ric(X, Y) = trace(Z -> R(Z, X) Y)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .cealg import LieAlgebra
from .errors import CheckError, InputError
from .exterior import KForm, Metric, Vector
from .structures import induced_metric, xi_basis


class NotAlphaEinsteinError(CheckError):
    """Ric is not of the form lambda g + nu alpha (x) alpha."""


@dataclass(frozen=True)
class Connection:
    """Christoffel table for invariant fields: gamma[i][j] = nabla_{X_{i+1}} X_{j+1}."""

    alg: LieAlgebra
    metric: Metric
    gamma: tuple

    def nabla_basis(self, i: int, j: int) -> Vector:
        return self.gamma[i - 1][j - 1]

    def nabla(self, u: Vector, w: Vector) -> Vector:
        """nabla_u w for invariant fields, bilinear over constants."""
        n = self.alg.dim
        out = Vector.zero(n)
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                c = u[i] * w[j]
                if c:
                    out = out + c * self.gamma[i][j]
        return out


def levi_civita(alg: LieAlgebra, g: Metric) -> Connection:
    """Koszul formula: 2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).

    The result is verified to be torsion-free and metric-compatible before it
    is returned (an internal consistency guard, not a user-facing check).
    """
    n = alg.dim
    if g.dim != n:
        raise InputError("metric dimension mismatch")
    if not g.is_positive_definite():
        raise InputError("levi_civita: metric is not positive definite")
    ginv = g.inverse_matrix()
    basis = [Vector.basis(n, i) for i in range(1, n + 1)]
    bk = [[alg.bracket_basis(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    gamma = []
    for i in range(n):
        row = []
        for j in range(n):
            rhs = []
            for k in range(n):
                val = (
                    g.bilinear(bk[i][j], basis[k])
                    - g.bilinear(bk[j][k], basis[i])
                    + g.bilinear(bk[k][i], basis[j])
                )
                rhs.append(val / 2)
            row.append(
                Vector(
                    [
                        sum((ginv[p][k] * rhs[k] for k in range(n)), Fraction(0))
                        for p in range(n)
                    ]
                )
            )
        gamma.append(tuple(row))
    conn = Connection(alg=alg, metric=g, gamma=tuple(gamma))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            torsion = conn.nabla_basis(i, j) - conn.nabla_basis(j, i) - bk[i - 1][j - 1]
            if not torsion.is_zero:
                raise ArithmeticError(f"Koszul connection has torsion at ({i},{j})")
            for k in range(1, n + 1):
                compat = g.bilinear(conn.nabla_basis(i, j), basis[k - 1]) + g.bilinear(
                    basis[j - 1], conn.nabla_basis(i, k)
                )
                if compat != 0:
                    raise ArithmeticError(f"connection not metric at ({i},{j},{k})")
    return conn


def riemann(conn: Connection, x: Vector, y: Vector, z: Vector) -> Vector:
    """R(X, Y)Z for invariant fields."""
    alg = conn.alg
    return (
        conn.nabla(x, conn.nabla(y, z))
        - conn.nabla(y, conn.nabla(x, z))
        - conn.nabla(alg.bracket(x, y), z)
    )


@dataclass(frozen=True)
class CurvatureReport:
    ricci: tuple
    scalar: Fraction
    lam: Fraction | None = None
    nu: Fraction | None = None

    def ricci_entry(self, i: int, j: int) -> Fraction:
        return self.ricci[i - 1][j - 1]


def ricci_scalar(alg: LieAlgebra, g: Metric) -> CurvatureReport:
    """Ricci tensor and scalar curvature by exact contraction."""
    conn = levi_civita(alg, g)
    n = alg.dim
    gamma = conn.gamma

    def nabla_dir(k: int, w: Vector) -> Vector:
        out = Vector.zero(n)
        for m in range(n):
            if w[m]:
                out = out + w[m] * gamma[k][m]
        return out

    def nabla_bracket(k: int, i: int, j: int) -> Vector:
        br = alg.bracket_basis(k + 1, i + 1)
        out = Vector.zero(n)
        for m in range(n):
            if br[m]:
                out = out + br[m] * gamma[m][j]
        return out

    ric = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            total = Fraction(0)
            for k in range(n):
                # component k of R(X_k, X_i) X_j
                curv = (
                    nabla_dir(k, gamma[i][j])
                    - nabla_dir(i, gamma[k][j])
                    - nabla_bracket(k, i, j)
                )
                total += curv[k]
            ric[i][j] = total
            ric[j][i] = total
    ginv = g.inverse_matrix()
    scalar = sum(
        (ginv[i][j] * ric[i][j] for i in range(n) for j in range(n)), Fraction(0)
    )
    return CurvatureReport(ricci=tuple(tuple(r) for r in ric), scalar=scalar)


def check_alpha_einstein(report: CurvatureReport, g: Metric, alpha: KForm):
    """Solve Ric = lambda g + nu alpha (x) alpha exactly.

    Returns (lambda, nu); raises NotAlphaEinsteinError with the first nonzero
    residual entry when no constants satisfy the identity.
    """
    n = g.dim
    cov = [alpha.coefficient((j,)) for j in range(1, n + 1)]
    rows, rhs = [], []
    for i in range(n):
        for j in range(i, n):
            rows.append([g.matrix[i][j], cov[i] * cov[j]])
            rhs.append(report.ricci[i][j])
    sol = linalg.solve(rows, rhs)
    if sol is not None:
        lam, nu = sol
        for i in range(n):
            for j in range(n):
                residual = report.ricci[i][j] - lam * g.matrix[i][j] - nu * cov[i] * cov[j]
                if residual:
                    sol = None
                    break
            if sol is None:
                break
    if sol is None:
        witness = {
            "ricci": str([[str(x) for x in row] for row in report.ricci]),
            "note": "no constants (lambda, nu) reproduce Ric exactly",
        }
        raise NotAlphaEinsteinError("alpha_einstein", "structure is not alpha-Einstein", witness)
    return sol[0], sol[1]


@dataclass(frozen=True)
class TransverseReport:
    """Transverse Ricci data on the contact distribution.

    ric_t is computed from the curvature-definition formula of the transverse
    connection; ric_t_identity from Ric + 2g. Both are matrices over the
    supplied frame of the distribution, and agree exactly for a verified
    structure (a mismatch raises ArithmeticError, signalling a convention bug).
    """

    frame: tuple
    ric_t: tuple
    ric_t_identity: tuple
    rho_t: tuple
    parallel_j: bool
    parallel_g_j: bool
    parallel_d_alpha: bool
    torsion_matches_bracket: bool

    @property
    def is_zero(self) -> bool:
        return all(not x for row in self.ric_t for x in row)


def transverse_ricci(structure, g: Metric | None = None) -> TransverseReport:
    """Transverse connection and transverse Ricci tensor of a verified structure.

    Accepts anything carrying a verified contact structure, J and g_J (a
    CCYStructure or a passing SasakianCheck). The orthonormal-frame sum in the
    defining formula is replaced by an inverse-metric contraction over an
    arbitrary exact frame of the contact distribution, which avoids irrational
    Gram-Schmidt factors. Also verifies the parallelism identities of the
    transverse connection and the Ricci identity Ric^T = Ric + 2g on the
    distribution.
    """
    contact = structure.contact
    alg = contact.alg
    if g is None:
        g = getattr(structure, "metric", None)
        if g is None:
            g = induced_metric(structure.g_j, contact.alpha)
    conn = levi_civita(alg, g)
    alpha, reeb, J = contact.alpha, contact.reeb, structure.J
    n = alg.dim
    frame = xi_basis(alg, [alpha])
    m = len(frame)

    def alpha_of(v: Vector) -> Fraction:
        return sum(
            (alpha.coefficient((j,)) * v[j - 1] for j in range(1, n + 1)), Fraction(0)
        )

    def project(v: Vector) -> Vector:
        return v - alpha_of(v) * reeb

    def nabla_xi(z: Vector, y: Vector) -> Vector:
        # case split of the transverse connection, extended linearly:
        # tangential part acts through the projected Levi-Civita derivative,
        # the Reeb part through the bracket.
        zt = project(z)
        out = project(conn.nabla(zt, y))
        a = alpha_of(z)
        if a:
            out = out + a * alg.bracket(reeb, y)
        return out

    basis = [Vector.basis(n, i) for i in range(1, n + 1)]

    # curvature-definition path, orthonormal sum as inverse-metric contraction
    gram = [[g.bilinear(u, v) for v in frame] for u in frame]
    gram_inv = linalg.inverse(gram)
    ric_t = [[Fraction(0)] * m for _ in range(m)]
    for xi_i, x in enumerate(frame):
        for yi, y in enumerate(frame):
            total = Fraction(0)
            for a in range(m):
                for b in range(m):
                    w = gram_inv[a][b]
                    if not w:
                        continue
                    fa, fb = frame[a], frame[b]
                    term = (
                        nabla_xi(x, nabla_xi(fa, fb))
                        - nabla_xi(fa, nabla_xi(x, fb))
                        - nabla_xi(alg.bracket(x, fa), fb)
                    )
                    total += w * g.bilinear(term, y)
            ric_t[xi_i][yi] = total

    full = ricci_scalar(alg, g)
    ric_t_id = [
        [
            sum(
                (
                    full.ricci[p][q] * x[p] * y[q]
                    for p in range(n)
                    for q in range(n)
                ),
                Fraction(0),
            )
            + 2 * g.bilinear(x, y)
            for y in frame
        ]
        for x in frame
    ]
    if ric_t != ric_t_id:
        raise ArithmeticError(
            "transverse Ricci computations disagree: "
            f"definition {ric_t} vs identity {ric_t_id}"
        )

    rho_t = [
        [
            sum(
                (
                    ric_t[a][yi] * c
                    for a, c in enumerate(_coords_in_frame(J.apply(x), frame))
                ),
                Fraction(0),
            )
            for yi in range(m)
        ]
        for x in frame
    ]

    parallel_j = all(
        (nabla_xi(z, J.apply(y)) - J.apply(nabla_xi(z, y))).is_zero
        for z in basis
        for y in frame
    )
    g_j = structure.g_j
    parallel_g_j = all(
        g_j.bilinear(nabla_xi(z, x), y) + g_j.bilinear(x, nabla_xi(z, y)) == 0
        for z in basis
        for x in frame
        for y in frame
    )
    dalpha = alg.d(alpha)

    def dalpha_eval(u: Vector, v: Vector) -> Fraction:
        return sum(
            (
                c * (u[p - 1] * v[q - 1] - u[q - 1] * v[p - 1])
                for (p, q), c in dalpha.terms.items()
            ),
            Fraction(0),
        )

    parallel_d_alpha = all(
        dalpha_eval(nabla_xi(z, x), y) + dalpha_eval(x, nabla_xi(z, y)) == 0
        for z in basis
        for x in frame
        for y in frame
    )
    torsion_ok = all(
        (nabla_xi(x, y) - nabla_xi(y, x) - project(alg.bracket(x, y))).is_zero
        for x in frame
        for y in frame
    )
    return TransverseReport(
        frame=tuple(frame),
        ric_t=tuple(tuple(r) for r in ric_t),
        ric_t_identity=tuple(tuple(r) for r in ric_t_id),
        rho_t=tuple(tuple(r) for r in rho_t),
        parallel_j=parallel_j,
        parallel_g_j=parallel_g_j,
        parallel_d_alpha=parallel_d_alpha,
        torsion_matches_bracket=torsion_ok,
    )


def _coords_in_frame(v: Vector, frame) -> list[Fraction]:
    """Coordinates of v in the span of the frame (exact solve)."""
    cols = [[f[i] for f in frame] for i in range(v.dim)]
    sol = linalg.solve(cols, list(v.coeffs))
    if sol is None:
        raise InputError("vector does not lie in the span of the frame")
    return sol
