import numpy as np
import pytest

import contlim


def test_presets_listed():
    assert {"ferro", "aklt", "bracket"} <= set(contlim.presets())


def test_ferromagnet_is_divisible():
    t = contlim.preset("ferro")
    e = contlim.transfer_matrix(t)
    assert contlim.is_cptp(e)
    v = contlim.is_infinitely_divisible(e)
    assert v.status == "divisible"
    assert np.allclose(v.projector, e)
    assert np.allclose(v.generator @ v.projector, 0)


def test_aklt_needs_blocking():
    v = contlim.analyze(contlim.transfer_matrix(contlim.preset("aklt")))
    assert v.status == "not_divisible"
    assert v.coarse_power == 2
    assert v.generator is None


def test_bracket_reconstruction_and_density():
    t = contlim.preset("bracket", gamma=0.7)
    e = contlim.transfer_matrix(t)
    v = contlim.is_infinitely_divisible(e, spacing=1.0)
    assert v.status == "divisible"
    assert np.allclose(v.projector @ contlim.expm(v.generator), e, atol=1e-8)
    g = contlim.gcmps_from_verdict(v)
    assert g.K >= 1 and len(g.jumps) == 1
    assert np.allclose(g.transfer(1.0), e, atol=1e-8)
    assert g.density(2.0, 0, 1.0) > 0


def test_custom_tensor_and_errors():
    a0 = np.diag([1.0, 0.0]).astype(complex)
    a1 = np.diag([0.0, 1.0]).astype(complex)
    t = contlim.MpsTensor([a0, a1], spacing=0.5)
    assert (t.d, t.D) == (2, 2)
    assert contlim.has_continuum_limit(t).status == "divisible"
    with pytest.raises(contlim.ContlimError):
        contlim.is_infinitely_divisible(2 * np.eye(4, dtype=complex))
    with pytest.raises(ValueError):
        contlim.is_cptp(np.eye(3, dtype=complex))


def test_canonical_form_and_thermo():
    p = contlim.transfer_matrix(contlim.preset("depolarizing"))
    cf = contlim.canonical_form(p)
    assert cf.d0 == 0
    assert np.allclose(contlim.build_projector(cf), p, atol=1e-9)
    gen = contlim.thermo_generator(cf)
    assert np.allclose(contlim.expm(40 * gen.liouvillian()), p, atol=1e-7)


def test_structured_fuzz():
    out = contlim.fuzz_structured(5, 40)
    assert out["disagreements"] == 0
