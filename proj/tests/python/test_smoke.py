import math

import numpy as np
import pytest

import eigcorr

LAMBDA1 = 2.0 * math.pi**2


def test_mesh_arrays():
    xy, tri = eigcorr.unit_square_mesh(4)
    assert xy.shape == (25, 2)
    assert tri.shape == (32, 3)
    xy2, tri2 = eigcorr.unit_square_mesh(4, refinements=1)
    assert xy2.shape[0] == 81 and tri2.shape[0] == 128


def test_pencil_csr():
    p = eigcorr.laplace_pencil(4, order=1)
    a = p["stiffness"]
    assert a["shape"] == (9, 9)
    assert a["indptr"][-1] == len(a["data"]) == len(a["indices"])


def test_smallest_eigenvalue_above_exact():
    lam = eigcorr.smallest_eigenvalues(8, order=1, k=3)
    assert lam[0] > LAMBDA1
    assert lam[0] < 1.1 * LAMBDA1
    assert lam[0] < lam[1] <= lam[2]


def test_multilevel_matches_direct_accuracy():
    lam, u, trace = eigcorr.multi_level_solve("multigrid", m=4, levels=3)
    direct = eigcorr.smallest_eigenvalues(64, order=1, k=1)[0]
    assert isinstance(u, np.ndarray) and u.ndim == 1
    assert [r["stage"] for r in trace] == ["coarse", "correction", "final"]
    assert abs(lam - LAMBDA1) <= 2.0 * abs(direct - LAMBDA1)


def test_two_grid_equals_two_level_correction():
    a = eigcorr.two_grid_solve("multigrid", m=4, levels=2)[0]
    b = eigcorr.multi_level_solve("multigrid", m=4, levels=2)[0]
    assert a == pytest.approx(b, rel=1e-12)


def test_run_rows():
    rows = eigcorr.run_direct(m=[4, 8, 16])
    assert len(rows) == 3
    assert rows[0]["rate_lambda"] is None
    assert rows[2]["rate_lambda"] == pytest.approx(2.0, abs=0.05)


def test_analytic_and_expansion():
    assert eigcorr.analytic_eigenvalue(1, 1) == pytest.approx(LAMBDA1)
    n = eigcorr.laplace_pencil(4, order=1)["mass"]["shape"][0]
    assert eigcorr.rayleigh_expansion_residual(4, 1, np.ones(n)) < 1e-9 * LAMBDA1


def test_errors_map_to_exceptions():
    with pytest.raises(eigcorr.UnsupportedLadder):
        eigcorr.multi_level_solve("multigrid", m=3, levels=2)
    with pytest.raises(eigcorr.Error):
        eigcorr.run_multilevel(way="multispace", levels=4, order=1)
