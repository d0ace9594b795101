import math

import pytest
from hypothesis import given, settings, strategies as st

from decoherence_lab.catalog import (ChaosProfile, body_from_record, default_sigma_p0,
                                     dump_catalog, get_body, load_catalog, parse_catalog)
from decoherence_lab.constants import CGS
from decoherence_lab.errors import CatalogParseError, DomainError, ValidationError


@pytest.fixture(scope="module")
def bodies():
    return load_catalog()


def test_builtin_jupiter(bodies):
    j = get_body(bodies, "jupiter")
    assert j.mass == pytest.approx(1.9e30, rel=0.01)
    assert j.volume == pytest.approx(1.4e30, rel=0.03)
    assert j.temperature == 100.0
    assert j.relax_rate == 1e-26


def test_default_particle_count_is_nucleons(bodies):
    j = get_body(bodies, "jupiter")
    assert j.particle_count == pytest.approx(j.mass / CGS.proton_mass)
    assert j.particle_count == pytest.approx(1.1e54, rel=0.05)


def test_sigma_p0_from_orbital_speed(bodies):
    j = get_body(bodies, "jupiter")
    assert default_sigma_p0(j, 1.3e6) == pytest.approx(2.5e36, rel=0.02)
    lab = get_body(bodies, "lab_sphere_1g")
    assert default_sigma_p0(lab, 1.0) == 1.0
    with pytest.raises(DomainError):
        default_sigma_p0(j, 0.0)


def test_every_builtin_body_is_macroscopic(bodies):
    for body in bodies:
        assert body.sigma_p0 * body.nonlinearity_scale / CGS.hbar > 1e10
        assert ChaosProfile.strong_from_body(body).m0 > CGS.hbar


def test_missing_mass_names_field():
    record = {"name": "x", "volume_cm3": 1.0, "temperature_K": 1.0, "relax_rate_per_s": 0.0,
              "sigma_p0_g_cm_per_s": 1.0, "lyapunov_per_s": 1.0, "nonlinearity_scale_cm": 1.0}
    with pytest.raises(ValidationError) as info:
        body_from_record(record)
    assert info.value.field == "mass_g"


def test_negative_value_rejected():
    text = dump_catalog(load_catalog()).replace("mass_g: 1.0\n", "mass_g: -1.0\n")
    with pytest.raises(ValidationError) as info:
        parse_catalog(text)
    assert info.value.field == "mass"


def test_malformed_document():
    with pytest.raises(CatalogParseError):
        parse_catalog("bodies: [unclosed")
    with pytest.raises(CatalogParseError):
        parse_catalog("bodies: []")
    with pytest.raises(CatalogParseError) as info:
        parse_catalog("bodies:\n  - 3\n")
    assert info.value.index == 0


def test_non_macroscopic_body_rejected():
    record = ("bodies:\n  - {name: dust, mass_g: 1e-12, volume_cm3: 1e-12, temperature_K: 1,"
              " relax_rate_per_s: 0, sigma_p0_g_cm_per_s: 1e-20, lyapunov_per_s: 1,"
              " nonlinearity_scale_cm: 1e-4}\n")
    with pytest.raises(ValidationError):
        parse_catalog(record)


def test_unknown_body(bodies):
    with pytest.raises(KeyError):
        get_body(bodies, "nosuch")


def test_round_trip_is_bit_exact(bodies):
    assert parse_catalog(dump_catalog(bodies)) == bodies


@settings(max_examples=50, deadline=None)
@given(mass=st.floats(1e10, 1e35), density=st.floats(0.1, 20.0), speed=st.floats(1.0, 1e7),
       lyap=st.floats(1e-20, 1.0), chi=st.floats(1e8, 1e15))
def test_round_trip_property(mass, density, speed, lyap, chi):
    record = {"name": "b", "mass_g": mass, "volume_cm3": mass / density, "temperature_K": 50.0,
              "relax_rate_per_s": 1e-20, "orbital_speed_cm_per_s": speed,
              "lyapunov_per_s": lyap, "nonlinearity_scale_cm": chi}
    body = body_from_record(record)
    assert parse_catalog(dump_catalog([body])) == [body]


def test_chaos_profile_validation():
    with pytest.raises(ValidationError):
        ChaosProfile(q=1.5, lambda_q=1.0)
    with pytest.raises(ValidationError):
        ChaosProfile(q=1.0, lambda_q=0.0)
    with pytest.raises(ValidationError):
        ChaosProfile(q=1.0, lambda_q=1.0, dims=0)
    assert ChaosProfile(q=0.5, lambda_q=2.0, dims=3, m0=math.e).dims == 3
