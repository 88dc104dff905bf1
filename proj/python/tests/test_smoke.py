import numpy as np
import pytest

import thetalab

TAU = np.diag([1j, 1.3j, 0.7j])
COEFFS = [0.9 + 0.1j, 1.1 - 0.2j, 0.8 + 0.3j]


def test_genus_one_value():
    v = thetalab.theta(np.array([0j]), np.array([[1j]]), [0])
    assert abs(v - 1.086434811213308) < 1e-14


def test_odd_characteristic_vanishes():
    assert abs(thetalab.theta(np.array([0j]), np.array([[1j]]), [1], [1])) < 1e-12


def test_bad_tau_raises():
    with pytest.raises(thetalab.ThetalabError, match="NonPositiveDefinite"):
        thetalab.theta(np.zeros(1, dtype=complex), np.array([[-1j]]), [0])


def test_invariants():
    assert thetalab.numerical_invariants([1, 2, 2]) == (6, 3, 24)


def test_base_points_count():
    pts = thetalab.base_points(TAU, COEFFS)
    assert len(pts) == 16
    assert all(p.shape == (3,) for p in pts)


def test_canonical_image_is_lattice_invariant():
    z = thetalab.sample_surface_point(TAU, COEFFS, 4)
    shifted = z + np.array([2, 0, 0]) + TAU[:, 1]
    d = thetalab.chordal_distance(thetalab.canonical_image(TAU, COEFFS, z),
                                  thetalab.canonical_image(TAU, COEFFS, shifted))
    assert d < 1e-9
    assert thetalab.rank_ratio(TAU, COEFFS, z) > 1e-4


def test_legendre_special_values():
    tau = 1.3j
    a = thetalab.legendre_parameter(tau)
    assert abs(thetalab.legendre_x(tau, 0) - 1) < 1e-12
    assert abs(thetalab.legendre_x(tau, tau / 2) - a) < 1e-12


def test_ledger_records():
    records = thetalab.identity_ledger()
    assert len(records) == 10
    assert all(r["substitution_matches_expansion"] for r in records)
    assert sum(r["holds"] for r in records) == 3


def test_sections_antisymmetric():
    p = np.array([1, 2j, 3, -1], dtype=complex)
    q = np.array([0.5, 1, -2j, 4], dtype=complex)
    a = np.array(thetalab.canonical_sections(p, q))
    b = np.array(thetalab.canonical_sections(q, p))
    assert np.allclose(a, -b)


def test_run_theta_suite():
    report = thetalab.run(suites=["theta"], seed=3)
    assert report["summary"]["fail"] == 0
    assert {c["suite"] for c in report["checks"]} == {"theta"}


def test_run_rejects_unknown_suite():
    with pytest.raises(thetalab.ThetalabError, match="ConfigInvalid"):
        thetalab.run(suites=["nope"])
