"""Verification of invariant contact, Sasakian, contact Calabi-Yau, Hypo and
r-contact structures on a Lie algebra.

Constructive checks (check_contact, check_calibrated_complex, check_ccy)
return the verified structure and raise a CheckError subclass with an exact
witness on failure. Verdict-style checks (check_sasakian, check_hypo,
check_r_contact_ccy) return a result object whose clauses record every
verified condition with exact witnesses for failures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial

from . import linalg
from .cealg import LieAlgebra, lie_derivative
from .errors import CheckError, InputError
from .exterior import ComplexKForm, Endo, KForm, Metric, Vector, contract


class NotContactError(CheckError):
    """The 1-form fails the contact volume condition."""


class NotCalibratedError(CheckError):
    """J fails one of the calibrated-complex-structure axioms."""


class NotSasakianError(CheckError):
    """The Nijenhuis condition for a Sasakian structure fails."""


class CCYError(CheckError):
    """A contact Calabi-Yau clause fails."""


@dataclass(frozen=True)
class Clause:
    """One verified condition with an exact witness for failures."""

    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": dict(self.detail)}


@dataclass(frozen=True)
class ContactStructure:
    alg: LieAlgebra
    alpha: KForm
    reeb: Vector
    kappa: KForm

    @property
    def n(self) -> int:
        return (self.alg.dim - 1) // 2

    @property
    def dim(self) -> int:
        return self.alg.dim


def check_contact(alg: LieAlgebra, alpha: KForm) -> ContactStructure:
    """Verify the volume condition exactly and solve for the Reeb field."""
    dim = alg.dim
    if dim % 2 == 0:
        raise InputError(f"contact structures need odd dimension, got {dim}")
    if alpha.dim != dim or alpha.degree != 1:
        raise InputError("alpha must be a degree-1 form on the algebra")
    n = (dim - 1) // 2
    dalpha = alg.d(alpha)
    volume = alpha.wedge(dalpha.power(n))
    if volume.is_zero:
        raise NotContactError(
            "contact.volume",
            f"alpha ^ (d alpha)^{n} = 0",
            {"alpha": str(alpha), "d_alpha": str(dalpha)},
        )
    # Reeb field: alpha(R) = 1 and iota_R d(alpha) = 0, a full-rank linear system.
    rows = [[alpha.coefficient((j,)) for j in range(1, dim + 1)]]
    rhs = [Fraction(1)]
    for k in range(1, dim + 1):
        row = []
        for j in range(1, dim + 1):
            if j == k:
                row.append(Fraction(0))
            elif j < k:
                row.append(dalpha.coefficient((j, k)))
            else:
                row.append(-dalpha.coefficient((k, j)))
        # row j: coefficient of R_j in (iota_R d alpha)(X_k) = d alpha(R, X_k)
        rows.append(row)
        rhs.append(Fraction(0))
    if linalg.rank(rows) != dim:
        raise NotContactError(
            "contact.reeb",
            "Reeb system is rank deficient",
            {"alpha": str(alpha)},
        )
    sol = linalg.solve(rows, rhs)
    if sol is None:
        raise NotContactError("contact.reeb", "Reeb system inconsistent", {"alpha": str(alpha)})
    reeb = Vector(sol)
    kappa = dalpha * Fraction(1, 2)
    return ContactStructure(alg=alg, alpha=alpha, reeb=reeb, kappa=kappa)


def xi_basis(alg: LieAlgebra, alphas) -> list[Vector]:
    """Exact basis of the intersection of the kernels of the given 1-forms."""
    rows = [[a.coefficient((j,)) for j in range(1, alg.dim + 1)] for a in alphas]
    return [Vector(v) for v in linalg.nullspace(rows, alg.dim)]


def _check_calibration(alg, kappa, alphas, reebs, J) -> Metric:
    """Shared calibration verification for contact (r=1) and r-contact cases."""
    dim = alg.dim
    for idx, reeb in enumerate(reebs, start=1):
        jr = J.apply(reeb)
        if not jr.is_zero:
            raise NotCalibratedError(
                "calibrated.J_reeb",
                f"J(R_{idx}) != 0",
                {"reeb": str(reeb), "J_reeb": str(jr)},
            )
    expected = -Endo.identity(dim)
    for alpha, reeb in zip(alphas, reebs):
        cov = [alpha.coefficient((j,)) for j in range(1, dim + 1)]
        expected = expected + Endo.rank_one(cov, reeb)
    j2 = J.compose(J)
    if j2 != expected:
        bad = next(
            (i, j)
            for i in range(dim)
            for j in range(dim)
            if j2.matrix[i][j] != expected.matrix[i][j]
        )
        raise NotCalibratedError(
            "calibrated.J_square",
            "J^2 != -I + sum alpha_i (x) R_i",
            {
                "entry": f"({bad[0] + 1},{bad[1] + 1})",
                "J^2": str(j2.matrix[bad[0]][bad[1]]),
                "expected": str(expected.matrix[bad[0]][bad[1]]),
            },
        )
    # g_J(X, Y) = kappa(X, JY) as a degenerate bilinear form on the whole algebra
    basis = [Vector.basis(dim, i) for i in range(1, dim + 1)]
    g_rows = [
        [
            sum(
                (
                    kappa.coefficient((p, q)) * (u[p - 1] * jv[q - 1] - u[q - 1] * jv[p - 1])
                    for (p, q) in kappa.terms
                ),
                Fraction(0),
            )
            for jv in (J.apply(v) for v in basis)
        ]
        for u in basis
    ]
    for i in range(dim):
        for j in range(i):
            if g_rows[i][j] != g_rows[j][i]:
                raise NotCalibratedError(
                    "calibrated.symmetric",
                    "kappa(., J.) is not symmetric",
                    {
                        "pair": f"(X{j + 1},X{i + 1})",
                        "g(Xi,Xj)": str(g_rows[i][j]),
                        "g(Xj,Xi)": str(g_rows[j][i]),
                    },
                )
    g_j = Metric(g_rows)
    xi = xi_basis(alg, alphas)
    gram = g_j.restrict(xi)
    for k in range(1, len(xi) + 1):
        minor = [row[:k] for row in gram[:k]]
        if linalg.det(minor) <= 0:
            witness = xi[k - 1]
            raise NotCalibratedError(
                "calibrated.positive",
                "g_J is not positive definite on the contact distribution",
                {
                    "witness_vector": str(witness),
                    "leading_minor": str(linalg.det(minor)),
                    "g(v,v)": str(g_j.bilinear(witness, witness)),
                },
            )
    # J-invariance on xi: g_J(J u, J v) = g_J(u, v)
    for u in xi:
        for v in xi:
            lhs = g_j.bilinear(J.apply(u), J.apply(v))
            rhs = g_j.bilinear(u, v)
            if lhs != rhs:
                raise NotCalibratedError(
                    "calibrated.J_invariant",
                    "g_J(J., J.) != g_J(., .) on the contact distribution",
                    {"u": str(u), "v": str(v), "lhs": str(lhs), "rhs": str(rhs)},
                )
    return g_j


def check_calibrated_complex(contact: ContactStructure, J: Endo) -> Metric:
    """Verify J(R)=0, J^2 = -I + alpha (x) R and that kappa(., J.) is a
    J-invariant positive inner product on the contact distribution.

    Returns g_J as a degenerate bilinear form on the whole algebra.
    """
    return _check_calibration(
        contact.alg, contact.kappa, [contact.alpha], [contact.reeb], J
    )


class NijenhuisTensor:
    """Exact Nijenhuis tensor of J; evaluated on basis pairs at construction."""

    def __init__(self, J: Endo, alg: LieAlgebra):
        self.J = J
        self.alg = alg
        self.dim = alg.dim
        table = {}
        for i in range(1, self.dim + 1):
            for j in range(i + 1, self.dim + 1):
                table[(i, j)] = self._compute(Vector.basis(self.dim, i), Vector.basis(self.dim, j))
        self.table = table

    def _compute(self, x: Vector, y: Vector) -> Vector:
        J, br = self.J, self.alg.bracket
        jx, jy = J.apply(x), J.apply(y)
        return (
            br(jx, jy)
            - J.apply(br(x, jy))
            - J.apply(br(y, jx))
            + J.apply(J.apply(br(x, y)))
        )

    def __call__(self, x: Vector, y: Vector) -> Vector:
        out = Vector.zero(self.dim)
        for i in range(1, self.dim + 1):
            for j in range(1, self.dim + 1):
                c = x[i - 1] * y[j - 1]
                if not c or i == j:
                    continue
                base = self.table[(i, j)] if i < j else -1 * self.table[(j, i)]
                out = out + c * base
        return out


def nijenhuis_tensor(J: Endo, alg: LieAlgebra) -> NijenhuisTensor:
    return NijenhuisTensor(J, alg)


@dataclass(frozen=True)
class SasakianCheck:
    ok: bool
    contact: ContactStructure
    J: Endo
    g_j: Metric
    failures: tuple = ()

    def first_failure(self) -> dict | None:
        return self.failures[0] if self.failures else None


def check_sasakian(contact: ContactStructure, J: Endo) -> SasakianCheck:
    """Verify N_J = -d(alpha) (x) R on all basis pairs, exactly.

    Requires the calibration axioms; a calibration failure raises
    NotCalibratedError before any Nijenhuis evaluation.
    """
    g_j = check_calibrated_complex(contact, J)
    nij = nijenhuis_tensor(J, contact.alg)
    dalpha = contact.alg.d(contact.alpha)
    failures = []
    for i in range(1, contact.dim + 1):
        for j in range(i + 1, contact.dim + 1):
            lhs = nij.table[(i, j)]
            scale = dalpha.coefficient((i, j))
            rhs = -scale * contact.reeb
            if lhs != rhs:
                failures.append(
                    {
                        "pair": f"(X{i},X{j})",
                        "nijenhuis": str(lhs),
                        "required": str(rhs),
                    }
                )
    return SasakianCheck(
        ok=not failures, contact=contact, J=J, g_j=g_j, failures=tuple(failures)
    )


def volume_constant(n: int) -> tuple[Fraction, Fraction]:
    """The complex normalization constant (-1)^{n(n+1)/2} (2i)^n as (re, im)."""
    re, im = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}[n % 4]
    s = (-1) ** ((n * (n + 1) // 2) % 2) * 2**n
    return Fraction(s * re), Fraction(s * im)


@dataclass(frozen=True)
class CCYStructure:
    """A verified contact Calabi-Yau triple with its induced metric data."""

    contact: ContactStructure
    J: Endo
    epsilon: ComplexKForm
    g_j: Metric
    metric: Metric

    @property
    def alg(self) -> LieAlgebra:
        return self.contact.alg

    @property
    def n(self) -> int:
        return self.contact.n

    @property
    def dim(self) -> int:
        return self.contact.dim

    def xi_frame(self) -> list[Vector]:
        return xi_basis(self.alg, [self.contact.alpha])


def induced_metric(g_j: Metric, alpha: KForm) -> Metric:
    """The Riemannian metric g_J + alpha (x) alpha of a calibrated structure."""
    dim = g_j.dim
    cov = [alpha.coefficient((j,)) for j in range(1, dim + 1)]
    rows = [
        [g_j.matrix[i][j] + cov[i] * cov[j] for j in range(dim)] for i in range(dim)
    ]
    return Metric(rows)


def _proportionality(lhs: ComplexKForm, rhs: ComplexKForm) -> Fraction | None:
    """If rhs = t * lhs for a single rational t on every coefficient, return t."""
    ratio: Fraction | None = None
    for part_l, part_r in ((lhs.re, rhs.re), (lhs.im, rhs.im)):
        keys = set(part_l.terms) | set(part_r.terms)
        for key in keys:
            a, b = part_l.coefficient(key), part_r.coefficient(key)
            if not a:
                if b:
                    return None
                continue
            t = b / a
            if ratio is None:
                ratio = t
            elif ratio != t:
                return None
    return ratio


def _check_epsilon_clauses(
    alg, kappa, alphas, reebs, J, epsilon, n, strict_def31, check_lie=True
) -> None:
    """Basic / type-(n,0) / closedness / normalization clauses for epsilon."""
    if not isinstance(epsilon, ComplexKForm):
        epsilon = ComplexKForm.from_real(epsilon)
    if epsilon.dim != alg.dim or epsilon.degree != n:
        raise InputError(f"epsilon must be a complex degree-{n} form")
    # (a) basic with respect to every Reeb field
    for idx, reeb in enumerate(reebs, start=1):
        cont = contract(reeb, epsilon)
        if not cont.is_zero:
            raise CCYError(
                "ccy.basic",
                f"iota_R{idx} epsilon != 0",
                {"contraction": str(cont)},
            )
        if check_lie:
            lie = lie_derivative(reeb, epsilon, alg)
            if not lie.is_zero:
                raise CCYError(
                    "ccy.basic",
                    f"Lie derivative of epsilon along R{idx} != 0",
                    {"lie_derivative": str(lie)},
                )
    # (b) type (n,0): iota_{Jv} epsilon = i iota_v epsilon for every basis v,
    # plus kappa-orthogonality epsilon ^ kappa = 0.
    for i in range(1, alg.dim + 1):
        v = Vector.basis(alg.dim, i)
        lhs = contract(J.apply(v), epsilon)
        rhs = contract(v, epsilon).scale(0, 1)
        if lhs != rhs:
            raise CCYError(
                "ccy.type",
                f"iota_(J X{i}) epsilon != i * iota_(X{i}) epsilon",
                {"lhs": str(lhs), "rhs": str(rhs)},
            )
    eps_kappa = epsilon.wedge(kappa)
    if not eps_kappa.is_zero:
        raise CCYError(
            "ccy.type", "epsilon ^ kappa != 0", {"product": str(eps_kappa)}
        )
    # (c) closedness
    deps = alg.d(epsilon)
    if not deps.is_zero:
        raise CCYError("ccy.closed", "d epsilon != 0", {"d_epsilon": str(deps)})
    # (d) normalization
    c_re, c_im = volume_constant(n)
    top = kappa.power(n)
    if not strict_def31:
        top = top * Fraction(1, factorial(n))
    rhs_form = ComplexKForm(c_re * top, c_im * top)
    lhs_form = epsilon.wedge(epsilon.conjugate())
    if lhs_form != rhs_form:
        witness = {
            "lhs (epsilon ^ conj)": str(lhs_form),
            "rhs (required)": str(rhs_form),
            "mode": "strict Def" if strict_def31 else "with 1/n!",
        }
        ratio = _proportionality(lhs_form, rhs_form)
        if ratio is not None:
            witness["ratio_rhs_over_lhs"] = str(ratio)
        raise CCYError("ccy.normalization", "volume normalization fails", witness)


def check_ccy(
    contact: ContactStructure,
    J: Endo,
    epsilon: ComplexKForm,
    strict_def31: bool = False,
) -> CCYStructure:
    """Full contact Calabi-Yau verification.

    Clauses: epsilon basic, type (n,0), closed, and the exact volume
    normalization with constant (-1)^{n(n+1)/2} (2i)^n. The default
    normalization carries the 1/n! factor (the convention under which the
    standard nilpotent examples close up exactly); strict_def31 drops it.
    Preconditions (calibration, Sasakian) are verified first and raise their
    own errors.
    """
    sasakian = check_sasakian(contact, J)
    if not sasakian.ok:
        raise NotSasakianError(
            "sasakian.nijenhuis",
            "N_J != -d(alpha) (x) R",
            sasakian.first_failure() or {},
        )
    _check_epsilon_clauses(
        contact.alg,
        contact.kappa,
        [contact.alpha],
        [contact.reeb],
        J,
        epsilon,
        contact.n,
        strict_def31,
    )
    eps = epsilon if isinstance(epsilon, ComplexKForm) else ComplexKForm.from_real(epsilon)
    return CCYStructure(
        contact=contact,
        J=J,
        epsilon=eps,
        g_j=sasakian.g_j,
        metric=induced_metric(sasakian.g_j, contact.alpha),
    )


@dataclass(frozen=True)
class HypoStructure:
    alpha: KForm
    omega1: KForm
    omega2: KForm
    omega3: KForm


@dataclass(frozen=True)
class HypoCheck:
    ok: bool
    clauses: tuple
    structure: HypoStructure | None = None

    def failing(self) -> list[Clause]:
        return [c for c in self.clauses if not c.ok]


def check_hypo(alpha, omega1, omega2, omega3, alg: LieAlgebra) -> HypoCheck:
    """Hypo conditions on a 5-dimensional algebra.

    Condition 1 and the closedness condition 3 are verified exactly. The
    pointwise compatibility condition 2 involves an orientation-dependent
    inequality; it is verified in the weakened exact form: the pairwise
    wedge products vanish and the three squares agree and are nonzero with
    v ^ alpha != 0 (which is condition 1), and the check is flagged as
    weakened in the resulting clause list.
    """
    if alg.dim != 5:
        raise InputError("Hypo structures are 5-dimensional")
    omegas = [omega1, omega2, omega3]
    clauses = []
    ok_products = True
    detail: dict = {}
    for (a, wa), (b, wb) in combinations(enumerate(omegas, start=1), 2):
        prod = wa.wedge(wb)
        if not prod.is_zero:
            ok_products = False
            detail[f"omega{a}^omega{b}"] = str(prod)
    squares = [w.wedge(w) for w in omegas]
    v = squares[0]
    if squares[1] != v or squares[2] != v:
        ok_products = False
        detail["squares"] = ", ".join(str(s) for s in squares)
    if v.is_zero:
        ok_products = False
        detail["v"] = "0"
    v_alpha = v.wedge(alpha)
    if v_alpha.is_zero:
        ok_products = False
        detail["v^alpha"] = "0"
    clauses.append(Clause("hypo.1.products", ok_products, detail))
    clauses.append(
        Clause(
            "hypo.2.compatibility",
            ok_products,
            {"note": "verified in weakened exact form (wedge orthogonality and equal squares)"},
        )
    )
    closed_detail: dict = {}
    ok_closed = True
    d_omega1 = alg.d(omega1)
    if not d_omega1.is_zero:
        ok_closed = False
        closed_detail["d(omega1)"] = str(d_omega1)
    for name, w in (("omega2", omega2), ("omega3", omega3)):
        dw = alg.d(w.wedge(alpha))
        if not dw.is_zero:
            ok_closed = False
            closed_detail[f"d({name}^alpha)"] = str(dw)
    clauses.append(Clause("hypo.3.closedness", ok_closed, closed_detail))
    ok = ok_products and ok_closed
    structure = HypoStructure(alpha, omega1, omega2, omega3) if ok else None
    return HypoCheck(ok=ok, clauses=tuple(clauses), structure=structure)


@dataclass(frozen=True)
class RContactStructure:
    alg: LieAlgebra
    alphas: tuple
    reebs: tuple
    kappa: KForm
    J: Endo
    epsilon: ComplexKForm

    @property
    def r(self) -> int:
        return len(self.alphas)

    @property
    def n(self) -> int:
        return (self.alg.dim - self.r) // 2


@dataclass(frozen=True)
class RContactCheck:
    ok: bool
    clauses: tuple
    structure: RContactStructure | None = None

    def failing(self) -> list[Clause]:
        return [c for c in self.clauses if not c.ok]


def _solve_reeb_family(alg, alphas, dalpha) -> list[Vector] | None:
    dim = alg.dim
    reebs = []
    for j in range(len(alphas)):
        rows = [[a.coefficient((q,)) for q in range(1, dim + 1)] for a in alphas]
        rhs = [Fraction(int(i == j)) for i in range(len(alphas))]
        for k in range(1, dim + 1):
            row = []
            for q in range(1, dim + 1):
                if q == k:
                    row.append(Fraction(0))
                elif q < k:
                    row.append(dalpha.coefficient((q, k)))
                else:
                    row.append(-dalpha.coefficient((k, q)))
            rows.append(row)
            rhs.append(Fraction(0))
        if linalg.rank(rows) != dim:
            return None
        sol = linalg.solve(rows, rhs)
        if sol is None:
            return None
        reebs.append(Vector(sol))
    return reebs


def check_r_contact_ccy(
    alg: LieAlgebra, alphas, J: Endo, epsilon, strict_def31: bool = False
) -> RContactCheck:
    """Verify an r-contact Calabi-Yau structure clause by clause.

    For r = 1 this delegates to the full contact Calabi-Yau chain so both
    paths always give the same verdict.
    """
    alphas = list(alphas)
    r = len(alphas)
    if r == 0:
        raise InputError("need at least one 1-form")
    if (alg.dim - r) % 2 or alg.dim - r <= 0:
        raise InputError(f"dimension {alg.dim} is not 2n + {r}")
    n = (alg.dim - r) // 2
    if r == 1:
        try:
            contact = check_contact(alg, alphas[0])
            ccy = check_ccy(contact, J, epsilon, strict_def31)
        except CheckError as exc:
            return RContactCheck(
                ok=False, clauses=(Clause(exc.check, False, exc.witness),)
            )
        structure = RContactStructure(
            alg=alg,
            alphas=(contact.alpha,),
            reebs=(contact.reeb,),
            kappa=contact.kappa,
            J=J,
            epsilon=ccy.epsilon,
        )
        return RContactCheck(
            ok=True, clauses=(Clause("ccy.delegated", True, {}),), structure=structure
        )

    clauses = []

    def fail(name: str, detail: dict) -> RContactCheck:
        clauses.append(Clause(name, False, detail))
        return RContactCheck(ok=False, clauses=tuple(clauses))

    dalpha = alg.d(alphas[0])
    for idx, a in enumerate(alphas[1:], start=2):
        da = alg.d(a)
        if da != dalpha:
            return fail(
                "rccy.equal_differentials",
                {"d(alpha1)": str(dalpha), f"d(alpha{idx})": str(da)},
            )
    clauses.append(Clause("rccy.equal_differentials", True, {}))

    volume = alphas[0]
    for a in alphas[1:]:
        volume = volume.wedge(a)
    volume = volume.wedge(dalpha.power(n))
    if volume.is_zero:
        return fail("rccy.volume", {"alpha1^...^alphar^(dalpha)^n": "0"})
    clauses.append(Clause("rccy.volume", True, {"volume_form": str(volume)}))

    reebs = _solve_reeb_family(alg, alphas, dalpha)
    if reebs is None:
        return fail("rccy.reeb_family", {"note": "no unique Reeb family"})
    clauses.append(
        Clause("rccy.reeb_family", True, {f"R{i + 1}": str(v) for i, v in enumerate(reebs)})
    )

    kappa = dalpha * Fraction(1, 2)
    try:
        _check_calibration(alg, kappa, alphas, reebs, J)
    except NotCalibratedError as exc:
        return fail(exc.check, exc.witness)
    clauses.append(Clause("rccy.calibrated", True, {}))

    try:
        _check_epsilon_clauses(
            alg, kappa, alphas, reebs, J, epsilon, n, strict_def31, check_lie=False
        )
    except CCYError as exc:
        return fail(exc.check, exc.witness)
    clauses.append(Clause("rccy.epsilon", True, {}))

    eps = epsilon if isinstance(epsilon, ComplexKForm) else ComplexKForm.from_real(epsilon)
    structure = RContactStructure(
        alg=alg,
        alphas=tuple(alphas),
        reebs=tuple(reebs),
        kappa=kappa,
        J=J,
        epsilon=eps,
    )
    return RContactCheck(ok=True, clauses=tuple(clauses), structure=structure)
