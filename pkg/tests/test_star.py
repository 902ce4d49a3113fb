import math

import numpy as np
import pytest

from qgraph_entropy.entropy import symmetrized
from qgraph_entropy.errors import DimensionMismatch
from qgraph_entropy.evolution import EigenRecord, evolution_matrix, find_spectrum, verify_vertex_conditions
from qgraph_entropy.scattering import equi_transmitting_matrix, neumann_matrix
from qgraph_entropy.star import (AColumn, edge_function, entropy_shift_check, lift_amplitudes, star_graph,
                                 star_reduced_unitary, star_spectrum)

LENGTHS = [1.0, 1.3, 1.7, 1.1]
ORDERS = (0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, math.inf)


def test_two_edge_star_is_an_interval():
    cols = star_spectrum([1.0, 1.0], neumann_matrix(2), 0.1, 10.0)
    assert np.allclose([c.kappa for c in cols], np.arange(1, 7) * math.pi / 2, atol=1e-8)


def test_reduced_unitary_is_unitary():
    m = star_reduced_unitary(LENGTHS, equi_transmitting_matrix(4), 2.7)
    assert np.abs(m.conj().T @ m - np.eye(4)).max() < 1e-13
    with pytest.raises(DimensionMismatch):
        star_reduced_unitary(LENGTHS[:3], equi_transmitting_matrix(4), 1.0)


@pytest.mark.parametrize("center", [neumann_matrix(4), equi_transmitting_matrix(4)])
def test_reduced_matches_full(center):
    cols = star_spectrum(LENGTHS, center, 0.1, 15.0)
    g, conds = star_graph(LENGTHS, center)
    full = find_spectrum(g, conds, 0.1, 15.0)
    assert len(cols) == len(full.records)
    assert np.allclose([c.kappa for c in cols], full.kappas, atol=1e-8)
    for col in cols:
        a = lift_amplitudes(col)
        u = evolution_matrix(g, conds, col.kappa).matrix
        assert np.linalg.norm(u @ a - a) < 1e-10
        assert verify_vertex_conditions(g, conds, EigenRecord(col.kappa, a, 0.0, 1))


def test_lift_is_unit_and_edge_function_meets_neumann_end():
    col = star_spectrum(LENGTHS, neumann_matrix(4), 0.1, 5.0)[3]
    a = lift_amplitudes(col)
    assert np.linalg.norm(a) == pytest.approx(1.0)
    # derivative of A cos(k (x - L)) vanishes at the pendant end x = L
    h = 1e-6
    for e, L in enumerate(LENGTHS):
        d = (edge_function(col, e, L) - edge_function(col, e, L - h)) / h
        assert abs(d) < 1e-5
    # continuity at the Neumann center
    centre = [edge_function(col, e, 0.0) for e in range(4)]
    assert np.allclose(centre, centre[0], atol=1e-9)


@pytest.mark.parametrize("center", [neumann_matrix(4), equi_transmitting_matrix(4)])
def test_shift_identities(center):
    for col in star_spectrum(LENGTHS, center, 0.1, 12.0):
        for a in ORDERS:
            assert entropy_shift_check(col, a, "renyi")[2] <= 1e-12
            if 0 < a < math.inf:
                assert entropy_shift_check(col, a, "tsallis")[2] <= 1e-12
        for s in (0.0, 0.5, 1.0):
            assert entropy_shift_check(col, s, "renyi", symmetrize=True)[2] <= 1e-12


def test_shift_check_errors():
    col = AColumn(np.array([0.6, 0.8]), 1.0, np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        entropy_shift_check(col, 0.5, "tsallis", symmetrize=True)
    with pytest.raises(ValueError):
        entropy_shift_check(col, 0.5, "gibbs")


def test_equi_column_bound():
    E = 6
    for col in star_spectrum(np.linspace(1, 2, E), equi_transmitting_matrix(E), 0.1, 15.0):
        for s in (0.0, 0.25, 0.5, 0.75, 1.0):
            assert symmetrized(col.weights, s) >= 0.5 * math.log(E - 1) - 1e-9
