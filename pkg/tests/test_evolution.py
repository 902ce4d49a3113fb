import math
import warnings

import numpy as np
import pytest
from scipy.stats import unitary_group

from qgraph_entropy.errors import NotAnEigenvalue, WindowTooCoarse
from qgraph_entropy.evolution import (EigenRecord, default_grid_step, eigenvector_at, evolution_family,
                                      evolution_matrix, find_spectrum, fix_phase, max_entry_modulus_power,
                                      null_vector, riesz_inequality_check, scan_roots, secular_gap,
                                      verify_vertex_conditions)
from qgraph_entropy.graph import build_metric_graph, star_metric_graph
from qgraph_entropy.scattering import build_conditions, star_conditions


def _vertex_matrix(g, k):
    # Neumann secular matrix in vertex form: nonsingular iff k is not an eigenvalue
    m = np.zeros((g.V, g.V))
    for i, j, L in g.edges:
        c, s = math.cos(k * L), math.sin(k * L)
        m[i, i] -= c / s
        m[j, j] -= c / s
        m[i, j] += 1 / s
        m[j, i] += 1 / s
    return m


def test_interval_spectrum():
    g = star_metric_graph(1, [1.7])
    scan = find_spectrum(g, "neumann", 0.1, 10 * math.pi / 1.7 + 0.5)
    kappas = scan.kappas[:10]
    assert np.allclose(kappas, np.arange(1, 11) * math.pi / 1.7, atol=1e-8)
    a = scan.records[0].a
    assert np.allclose(np.abs(a), 1 / math.sqrt(2))


def test_evolution_matrix_structure(equi_star):
    g, conds = equi_star
    k = 2.3
    u = evolution_matrix(g, conds, k)
    assert u.unitarity_residual() < 1e-12
    m = u.matrix
    for b in range(g.B):
        for c in range(g.B):
            if g.bond_terminus[c] != g.bond_origin[b]:
                assert m[b, c] == 0
    # bond lengths enter as column phases
    s = build_conditions(g, conds)
    v = 0
    out, inc = g.outgoing(v), g.incoming(v)
    expect = s[v].matrix * np.exp(1j * k * g.bond_length[inc])[None, :]
    assert np.allclose(m[np.ix_(out, inc)], expect)


def test_kappa_must_be_positive(tadpole):
    g, conds = tadpole
    with pytest.raises(ValueError):
        evolution_matrix(g, conds, 0.0)


def test_spectrum_matches_vertex_oracle(tadpole):
    g, conds = tadpole
    scan = find_spectrum(g, conds, 0.2, 20.0)
    assert len(scan.records) > 10
    for rec in scan.records:
        m = _vertex_matrix(g, rec.kappa)
        sv = np.linalg.svd(m, compute_uv=False)
        assert sv[-1] / sv[0] < 1e-7
        assert verify_vertex_conditions(g, conds, rec)


def test_no_missing_roots_against_vertex_oracle(tadpole):
    g, conds = tadpole
    ks = np.linspace(0.3, 12.0, 200001)
    # sign changes of det of the vertex matrix, excluding poles where some sin(kL) vanishes
    dets = np.array([np.linalg.det(_vertex_matrix(g, k)) for k in ks])
    lengths = [L for *_, L in g.edges]
    poles = [n * math.pi / L for L in lengths for n in range(1, 10)]
    oracle = []
    for i in np.nonzero(np.sign(dets[:-1]) != np.sign(dets[1:]))[0]:
        k = 0.5 * (ks[i] + ks[i + 1])
        if min(abs(k - p) for p in poles) > 1e-3:
            oracle.append(k)
    found = find_spectrum(g, conds, 0.3, 12.0).kappas
    for k in oracle:
        assert np.min(np.abs(found - k)) < 1e-4


def test_degenerate_circle():
    # tadpole with equal lengths is a circle of length 3: k = 2 pi n / 3, doubly degenerate
    g = build_metric_graph([(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
    scan = find_spectrum(g, "neumann", 0.5, 10.0)
    expected = 2 * math.pi * np.arange(1, 5) / 3
    assert np.allclose(scan.kappas, expected, atol=1e-8)
    assert all(r.multiplicity == 2 and not r.simple for r in scan.records)
    assert scan.simple_records() == []


def test_secular_gap_zero_at_root(neumann_star):
    g, conds = neumann_star
    rec = find_spectrum(g, conds, 0.1, 5.0).records[3]
    assert secular_gap(g, conds, rec.kappa) < 1e-10
    assert secular_gap(g, conds, rec.kappa + 0.05) > 1e-4


def test_null_vector_rejects_non_eigenvalue(neumann_star):
    g, conds = neumann_star
    with pytest.raises(NotAnEigenvalue):
        eigenvector_at(g, conds, 0.377)


def test_fix_phase():
    a = np.array([1e-9, 0.6j, -0.8])
    b = fix_phase(a)
    assert b[1].real > 0 and abs(b[1].imag) < 1e-15
    assert np.allclose(np.abs(a), np.abs(b))


def test_record_is_read_only():
    rec = EigenRecord(1.0, np.array([0.6, 0.8j]), 0.0, 1)
    assert rec.simple and np.allclose(rec.weights, [0.36, 0.64])
    with pytest.raises(ValueError):
        rec.a[0] = 1.0


def test_default_grid_step():
    assert default_grid_step(2.0) == pytest.approx(math.pi / 16)


def test_window_too_coarse_warning_and_recovery():
    # two nearly equal edge lengths give close pairs; a wide grid merges them
    g = star_metric_graph(3, [1.0, 1.001, 1.6])
    conds = star_conditions(g, "neumann")
    fine = find_spectrum(g, conds, 0.1, 15.0, grid_step=0.001)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        coarse = find_spectrum(g, conds, 0.1, 15.0, grid_step=0.3)
    assert any(issubclass(w.category, WindowTooCoarse) for w in caught)
    assert coarse.warnings
    # merged points are still resolved
    assert len(coarse.kappas) == len(fine.kappas)
    assert np.allclose(coarse.kappas, fine.kappas, atol=1e-8)


@pytest.mark.parametrize("seed", range(8))
def test_default_grid_finds_every_point(seed):
    rng = np.random.default_rng(seed)
    E = int(rng.integers(2, 7))
    g = star_metric_graph(E, rng.uniform(1, 2, E))
    conds = star_conditions(g, "neumann")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WindowTooCoarse)
        coarse = find_spectrum(g, conds, 0.1, 20.0).kappas
        fine = find_spectrum(g, conds, 0.1, 20.0, grid_step=0.002).kappas
    assert len(coarse) == len(fine)
    assert np.allclose(coarse, fine, atol=1e-8)
    # eigenphase bookkeeping agrees with the smooth Weyl term within the vertex count
    assert abs(len(coarse) - g.total_length * (20.0 - 0.1) / math.pi) <= g.V


def test_scan_rejects_bad_window(neumann_star):
    fam = evolution_family(*neumann_star)
    with pytest.raises(ValueError):
        scan_roots(fam, 2.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        scan_roots(fam, 1.0, 2.0, 0.0)


def test_power_modulus(k5_equi):
    g, conds = k5_equi
    assert max_entry_modulus_power(g, conds, 1.3, 1) == pytest.approx(1 / math.sqrt(3))
    assert max_entry_modulus_power(g, conds, 1.3, 2) <= 1 + 1e-12


@pytest.mark.parametrize("q", [1.0, 1.25, 1.5, 2.0])
def test_riesz_inequality(q, rng):
    for B in (2, 5, 12):
        u = unitary_group.rvs(B, random_state=rng)
        a = rng.standard_normal(B) + 1j * rng.standard_normal(B)
        assert riesz_inequality_check(u, a, q) >= -1e-12


def test_riesz_near_q_one_does_not_overflow():
    # q close to 1 makes the conjugate exponent huge
    u = np.eye(3, dtype=complex)
    a = np.array([30.0, 2.0, 1.0], dtype=complex)
    with np.errstate(over="raise"):
        margin = riesz_inequality_check(u, a, 1.0 + 1e-9)
    assert math.isfinite(margin) and margin >= -1e-12
