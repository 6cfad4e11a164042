import numpy as np
import pytest

from openbaker.errors import ConfigurationError, NumericalFailureError
from openbaker.quantization import OpeningSpec, TorusHilbert, baker_open
from openbaker.spectral import (decay_rate, resonance_set, resonances,
                                tau_measure, weyl_count, weyl_fit)


def test_closed_spectrum_is_unitary(closed128):
    assert closed128.nullDim == 0
    assert len(closed128) == 128
    assert np.abs(closed128.moduli() - 1.0).max() < 1e-12
    assert np.abs(closed128.taus() - 1.0).max() < 1e-6
    assert all(r.parity in ("even", "odd") for r in closed128.resonances)


def test_sorting_contract(dyadic160, closed128):
    mods = dyadic160.moduli()
    assert np.all(np.diff(mods) <= 1e-15)
    # resorting the returned eigenvalues by (descending modulus, ascending
    # phase) must be the identity permutation: the list is already in order
    for rset in (dyadic160, closed128):
        lam = rset.lambdas()
        key = np.lexsort((np.mod(np.angle(lam), 2.0 * np.pi), -np.abs(lam)))
        assert np.array_equal(key, np.arange(len(lam)))


def test_null_dimension_accounting(dyadic160, triadic243):
    # every mode is either retained or counted as null
    assert len(dyadic160) + dyadic160.nullDim == 160
    assert len(triadic243) + triadic243.nullDim == 243
    # at least one null mode per structurally removed column
    assert dyadic160.nullDim >= OpeningSpec(family="dyadic", l=3).trace_pi_o(160)
    assert triadic243.nullDim >= OpeningSpec(family="triadic").trace_pi_o(243)


def test_eigenpairs_satisfy_the_map(dyadic160, hilbert160):
    M = baker_open(hilbert160, OpeningSpec(family="dyadic", l=3)).matrix
    lam = dyadic160.lambdas()
    right = np.abs(M @ dyadic160.V - dyadic160.V * lam[None, :]).max()
    left = np.abs(M.conj().T @ dyadic160.W - dyadic160.W * lam.conj()[None, :]).max()
    assert right < 1e-9
    assert left < 1e-9


def test_biorthogonality(dyadic160):
    S = dyadic160.W.conj().T @ dyadic160.V
    off = S - np.diag(np.diagonal(S))
    assert np.abs(off).max() < 1e-8


def test_tau_tracks_modulus_power(dyadic160):
    # l=3: tau ~ |lambda|^2 for the long-lived part of the spectrum; the
    # leading resonance obeys the power law tightly, the bulk within the
    # scatter seen at this N (the fitted-slope check lives in the
    # acceptance suite, where its outcome is reported per opening depth)
    taus = dyadic160.taus()
    assert np.all(taus >= 0.0) and np.all(taus <= 1.0)
    top = dyadic160.resonances[0]
    assert abs(top.tau - top.modulus ** 2) < 0.01
    exps = [np.log(r.tau) / np.log(r.modulus) for r in dyadic160.resonances
            if r.modulus > 0.3 and 0.0 < r.tau < 1.0]
    assert abs(float(np.median(exps)) - 2.0) < 0.35


def test_spectral_reconstruction_of_the_map():
    # sum_i lambda_i |psiR_i><psiL_i| / s_i rebuilds the open map wherever
    # the eigenvector matrix is well conditioned
    rset = resonance_set("dyadic", 512, l=6)
    assert rset.vCondition < 1e8
    hilbert = TorusHilbert(512)
    M = baker_open(hilbert, OpeningSpec(family="dyadic", l=6)).matrix
    s = rset.overlaps()
    rebuilt = (rset.V * (rset.lambdas() / s)[None, :]) @ rset.W.conj().T
    assert np.abs(rebuilt - M).max() < 1e-8


def test_tau_measure_matches_reported_value(dyadic160, hilbert160):
    for r in dyadic160.resonances[:5]:
        assert tau_measure(r, hilbert160) == pytest.approx(r.tau, abs=1e-12)


def test_long_lived_modes_have_definite_parity(dyadic160):
    for r in dyadic160.resonances:
        if r.modulus > 0.05:
            assert r.parity in ("even", "odd")


def test_triadic_spectrum_closed_under_conjugation(triadic243):
    lam = triadic243.lambdas()
    assert np.array_equal(np.sort_complex(lam), np.sort_complex(lam.conj()))


def test_eps_null_threshold_moves_modes_to_the_null_count(hilbert160):
    qmap = baker_open(hilbert160, OpeningSpec(family="dyadic", l=3))
    loose = resonances(qmap, eps_null=1e-1)
    tight = resonances(qmap, eps_null=1e-8)
    assert loose.nullDim > tight.nullDim
    assert len(loose) + loose.nullDim == 160
    assert all(r.modulus >= 1e-1 for r in loose.resonances)
    with pytest.raises(ConfigurationError):
        resonances(qmap, eps_null=0.0)


def test_condition_limit_gate(hilbert160):
    qmap = baker_open(hilbert160, OpeningSpec(family="dyadic", l=3))
    with pytest.raises(NumericalFailureError):
        resonances(qmap, condition_limit=1.0)


def test_resonance_set_parameter_validation():
    with pytest.raises(ConfigurationError):
        resonance_set("dyadic", 16)                 # open map needs l
    with pytest.raises(ConfigurationError):
        resonance_set("dyadic", 16, l=2, closed=True)
    with pytest.raises(ConfigurationError):
        resonance_set("dyadic", 20, l=3)            # divisibility


def test_decay_rate():
    assert decay_rate(1.0) == 0.0
    assert decay_rate(np.exp(-0.5)) == pytest.approx(1.0)
    with pytest.raises(ConfigurationError):
        decay_rate(0.0)
    with pytest.raises(ConfigurationError):
        decay_rate(1.5)


def test_weyl_count_and_fit(dyadic160):
    c_low = weyl_count(dyadic160, 0.1)
    c_high = weyl_count(dyadic160, 0.9)
    assert c_low >= c_high
    with pytest.raises(ConfigurationError):
        weyl_count(dyadic160, 1.5)
    # closed maps keep all N modes above any threshold: exponent exactly 1
    fit = weyl_fit([(32, 32), (64, 64), (128, 128)], 0.5)
    assert fit.exponent == pytest.approx(1.0, abs=1e-12)
    assert fit.dimensionEstimate == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ConfigurationError):
        weyl_fit([(32, 32), (64, 64)], 0.5)
    with pytest.raises(ConfigurationError):
        weyl_fit([(32, 32), (64, 0), (128, 128)], 0.5)


def test_overlaps_are_unit_for_unitary_maps(closed128):
    assert np.abs(np.abs(closed128.overlaps()) - 1.0).max() < 1e-8
