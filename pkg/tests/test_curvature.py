from fractions import Fraction as Q

import pytest

from nilgeo.algdsl import parse_algebra, parse_form
from nilgeo.cealg import LieAlgebra
from nilgeo.curvature import (
    NotAlphaEinsteinError,
    check_alpha_einstein,
    levi_civita,
    ricci_scalar,
    riemann,
    transverse_ricci,
)
from nilgeo.errors import InputError
from nilgeo.exterior import Metric, Vector
from nilgeo.models import heisenberg_ccy

H3 = parse_algebra("(0,0,12)")
G_CCY = Metric.diagonal([1, 1, 4])


def test_koszul_heisenberg_values():
    conn = levi_civita(H3, G_CCY)
    assert conn.nabla_basis(1, 2) == Q(-1, 2) * Vector.basis(3, 3)
    assert conn.nabla_basis(1, 1).is_zero
    assert conn.nabla_basis(2, 1) == Q(1, 2) * Vector.basis(3, 3)
    assert conn.nabla_basis(1, 3) == 2 * Vector.basis(3, 2)
    assert conn.nabla_basis(2, 3) == -2 * Vector.basis(3, 1)


def test_koszul_abelian_flat():
    conn = levi_civita(LieAlgebra.abelian(4), Metric.diagonal([2, 1, 3, 5]))
    assert all(
        conn.nabla_basis(i, j).is_zero for i in range(1, 5) for j in range(1, 5)
    )


def test_koszul_rejects_degenerate_metric():
    with pytest.raises(InputError):
        levi_civita(H3, Metric.diagonal([1, 1, 0]))


def test_ricci_heisenberg_ccy_metric():
    report = ricci_scalar(H3, G_CCY)
    assert [str(report.ricci[i][i]) for i in range(3)] == ["-2", "-2", "8"]
    assert all(report.ricci[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    assert report.scalar == -2


def test_ricci_five_dim():
    alg = parse_algebra("(0,0,0,0,12+34)")
    report = ricci_scalar(alg, Metric.diagonal([1, 1, 1, 1, 4]))
    assert [str(report.ricci[i][i]) for i in range(5)] == ["-2", "-2", "-2", "-2", "16"]
    assert report.scalar == -4


def test_ricci_abelian_flat():
    report = ricci_scalar(LieAlgebra.abelian(3), Metric.diagonal([1, 2, 3]))
    assert all(not x for row in report.ricci for x in row)
    assert report.scalar == 0


def test_alpha_einstein_constants():
    lam, nu = check_alpha_einstein(ricci_scalar(H3, G_CCY), G_CCY, parse_form("2*e3", 3))
    assert (lam, nu) == (-2, 4)
    alg5 = parse_algebra("(0,0,0,0,12+34)")
    g5 = Metric.diagonal([1, 1, 1, 1, 4])
    lam5, nu5 = check_alpha_einstein(ricci_scalar(alg5, g5), g5, parse_form("2*e5", 5))
    assert (lam5, nu5) == (-2, 6)


def test_alpha_einstein_unit_round_heisenberg():
    g = Metric.identity(3)
    lam, nu = check_alpha_einstein(ricci_scalar(H3, g), g, parse_form("e3", 3))
    assert (lam, nu) == (Q(-1, 2), 1)


def test_not_alpha_einstein_with_wrong_direction():
    # Ric of the reference metric is alpha-Einstein only along e3
    with pytest.raises(NotAlphaEinsteinError):
        check_alpha_einstein(ricci_scalar(H3, G_CCY), G_CCY, parse_form("e1", 3))


def test_riemann_first_bianchi_on_reference():
    conn = levi_civita(H3, G_CCY)
    basis = [Vector.basis(3, i) for i in range(1, 4)]
    for x in basis:
        for y in basis:
            for z in basis:
                total = (
                    riemann(conn, x, y, z)
                    + riemann(conn, y, z, x)
                    + riemann(conn, z, x, y)
                )
                assert total.is_zero


def test_transverse_ricci_vanishes_on_ccy():
    for n in (1, 2, 3):
        structure = heisenberg_ccy(n)
        report = transverse_ricci(structure)
        assert report.is_zero
        assert report.ric_t == report.ric_t_identity
        assert all(not x for row in report.rho_t for x in row)


def test_transverse_ricci_accepts_sasakian_result():
    from nilgeo.algdsl import parse_endo
    from nilgeo.structures import check_contact, check_sasakian

    sasakian = check_sasakian(
        check_contact(H3, parse_form("2*e3", 3)), parse_endo("pairs:(1,2)", 3)
    )
    report = transverse_ricci(sasakian)
    assert report.is_zero
    assert report.ric_t == transverse_ricci(heisenberg_ccy(1)).ric_t


def test_transverse_parallelism_suite():
    report = transverse_ricci(heisenberg_ccy(2))
    assert report.parallel_j
    assert report.parallel_g_j
    assert report.parallel_d_alpha
    assert report.torsion_matches_bracket


def test_transverse_consistency_identity_value():
    # Ric^T = Ric + 2g on the distribution: -2 + 2*1 = 0 entrywise
    structure = heisenberg_ccy(1)
    full = ricci_scalar(structure.alg, structure.metric)
    for v in structure.xi_frame():
        ric_vv = sum(
            full.ricci[i][j] * v[i] * v[j] for i in range(3) for j in range(3)
        )
        assert ric_vv + 2 * structure.metric.bilinear(v, v) == 0
