import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wgslab.chain import (
    Boundary,
    ChainSpec,
    PhaseModel,
    coupling,
    phase,
    subsystem_size_limit,
)
from wgslab.errors import DomainError


def test_coupling_values():
    chain = ChainSpec(n_sites=10, local_dim=2, alpha=2.0)
    assert chain.coupling(1, 2) == 1.0
    assert chain.coupling(1, 3) == pytest.approx(0.25)
    assert chain.coupling(3, 1) == chain.coupling(1, 3)
    assert chain.coupling(2, 7) == pytest.approx(1.0 / 25.0)


def test_alpha_zero_is_all_to_all():
    chain = ChainSpec(n_sites=8, local_dim=3, alpha=0.0)
    for j in range(2, 9):
        assert chain.coupling(1, j) == 1.0


def test_max_range_truncation():
    chain = ChainSpec(n_sites=10, local_dim=2, alpha=1.0, max_range=1)
    assert chain.coupling(4, 5) == 1.0
    assert chain.coupling(4, 6) == 0.0
    assert chain.coupling(1, 10) == 0.0


def test_coupling_profile_matches_scalar():
    chain = ChainSpec(n_sites=12, local_dim=3, alpha=1.7, max_range=4)
    others = np.array([1, 2, 3, 5, 9, 12])
    profile = chain.coupling_profile(4, others)
    expected = [chain.coupling(4, int(o)) for o in others]
    np.testing.assert_allclose(profile, expected)


def test_phase_is_coupling_times_time():
    chain = ChainSpec(n_sites=6, local_dim=2, alpha=1.5)
    model = PhaseModel(chain, time=2.5)
    assert model.phase(2, 4) == pytest.approx(2.5 * 2.0**-1.5)
    assert phase(model, 2, 4) == model.phase(2, 4)
    assert coupling(chain, 2, 4) == chain.coupling(2, 4)


def test_validation_errors():
    with pytest.raises(DomainError):
        ChainSpec(n_sites=1, local_dim=2, alpha=1.0)
    with pytest.raises(DomainError):
        ChainSpec(n_sites=4, local_dim=1, alpha=1.0)
    with pytest.raises(DomainError):
        ChainSpec(n_sites=4, local_dim=2, alpha=-0.5)
    with pytest.raises(DomainError):
        ChainSpec(n_sites=4, local_dim=2, alpha=1.0, max_range=0)
    chain = ChainSpec(n_sites=4, local_dim=2, alpha=1.0)
    with pytest.raises(DomainError):
        chain.coupling(2, 2)
    with pytest.raises(DomainError):
        chain.coupling(0, 2)
    with pytest.raises(DomainError):
        chain.coupling(1, 5)
    with pytest.raises(DomainError):
        PhaseModel(chain, time=-1.0)


def test_boundary_is_open():
    chain = ChainSpec(n_sites=4, local_dim=2, alpha=1.0)
    assert chain.boundary is Boundary.OPEN
    # open boundary: distance 3 coupling differs from distance 1
    assert chain.coupling(1, 4) != chain.coupling(1, 2)


def test_subsystem_size_limit_defaults():
    assert subsystem_size_limit(2) == 12
    assert subsystem_size_limit(3) == 7
    assert subsystem_size_limit(4) == 6
    assert subsystem_size_limit(5) == 5


def test_subsystem_size_limit_exact_power():
    # cap exactly a power of d counts that power
    assert subsystem_size_limit(2, dim_cap=4096) == 12
    assert subsystem_size_limit(2, dim_cap=4095) == 11
    assert subsystem_size_limit(3, dim_cap=2187) == 7


@given(
    alpha=st.floats(min_value=0.0, max_value=6.0),
    r1=st.integers(min_value=1, max_value=20),
    r2=st.integers(min_value=1, max_value=20),
)
def test_coupling_monotone_in_distance(alpha, r1, r2):
    chain = ChainSpec(n_sites=32, local_dim=2, alpha=alpha)
    if r1 <= r2:
        assert chain.coupling(1, 1 + r1) >= chain.coupling(1, 1 + r2)


@given(
    alpha=st.floats(min_value=0.0, max_value=6.0),
    r=st.integers(min_value=1, max_value=30),
    t=st.floats(min_value=0.0, max_value=100.0),
    scale=st.floats(min_value=0.0, max_value=10.0),
)
def test_phase_linear_in_time(alpha, r, t, scale):
    chain = ChainSpec(n_sites=31, local_dim=3, alpha=alpha)
    p1 = PhaseModel(chain, time=t).phase(1, 1 + r)
    p2 = PhaseModel(chain, time=scale * t).phase(1, 1 + r)
    assert math.isclose(p2, scale * p1, rel_tol=1e-12, abs_tol=1e-12)
