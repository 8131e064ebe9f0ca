import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wgslab.chain import ChainSpec, PhaseModel
from wgslab.errors import DomainError
from wgslab.exact import build_state, exact_ggm, partial_trace
from wgslab.measures import (
    block_entropy,
    default_quadrature_step,
    entropy_profile,
    ggm,
    ggm_edge,
    ggm_edge_series,
    ggm_edge_time_average,
    mi_series,
    mi_site_pair,
    mi_time_average,
    mutual_information,
    time_average,
    u_l_bound,
)
from wgslab.rdm import entropy, spectrum


def _model(n, d, alpha, t, **kw):
    return PhaseModel(ChainSpec(n_sites=n, local_dim=d, alpha=alpha, **kw), t)


def test_block_entropy_zero_at_t0():
    assert block_entropy(_model(50, 2, 1.0, 0.0), 4) == pytest.approx(0.0, abs=1e-10)


def test_block_entropy_matches_oracle():
    model = _model(8, 2, 1.2, 2.4)
    s = block_entropy(model, 3)
    rho = partial_trace(build_state(model), (1, 2, 3))
    s_ref = entropy(spectrum(rho))
    assert s == pytest.approx(s_ref, abs=1e-10)


def test_u_l_degenerates_to_block_entropy():
    model = _model(60, 2, 1.5, 0.9)
    assert u_l_bound(model, 6, 6) == pytest.approx(block_entropy(model, 6), abs=1e-12)


def test_u_l_is_an_upper_bound():
    for t in (0.3, 0.9, 2.0):
        model = _model(40, 2, 1.0, t)
        s = block_entropy(model, 8)
        u = u_l_bound(model, 8, 4)
        assert u >= s - 1e-9


def test_u_l_validation():
    model = _model(40, 2, 1.0, 0.5)
    with pytest.raises(DomainError):
        u_l_bound(model, 8, 3)  # sub_len must divide block_len
    with pytest.raises(DomainError):
        u_l_bound(_model(40, 3, 1.0, 0.5), 20, 5)  # pairs exceed size limit


def test_mi_site_pair_centering():
    chain = ChainSpec(n_sites=10, local_dim=2, alpha=1.0)
    assert mi_site_pair(chain, 2) == (5, 7)
    assert mi_site_pair(chain, 9) == (1, 10)
    assert mi_site_pair(chain, 3, anchor=1) == (1, 4)
    with pytest.raises(DomainError):
        mi_site_pair(chain, 10)
    with pytest.raises(DomainError):
        mi_site_pair(chain, 5, anchor=8)


def test_mutual_information_oracle():
    model = _model(7, 3, 0.9, 1.8)
    i, j = mi_site_pair(model.chain, 2)
    state = build_state(model)
    s_i = entropy(spectrum(partial_trace(state, (i,))))
    s_j = entropy(spectrum(partial_trace(state, (j,))))
    s_ij = entropy(spectrum(partial_trace(state, (i, j))))
    assert mutual_information(model, 2) == pytest.approx(s_i + s_j - s_ij, abs=1e-10)


def test_mutual_information_nonnegative_and_bounded():
    for t in (0.0, 0.7, 2.9, 11.0):
        for r in (1, 3, 9):
            v = mutual_information(_model(60, 2, 0.8, t), r)
            assert -1e-10 <= v <= 2.0 + 1e-10


def test_mi_series_matches_pointwise():
    chain = ChainSpec(n_sites=30, local_dim=2, alpha=1.1)
    times = np.array([0.0, 0.5, 1.7, 4.0])
    series = mi_series(chain, 4, times)
    for k, t in enumerate(times):
        assert series.values[k] == pytest.approx(
            mutual_information(PhaseModel(chain, float(t)), 4), abs=1e-12
        )


def test_ggm_edge_ceiling_at_special_time():
    # at t = 2*pi/d the edge-site RDM is maximally mixed for every alpha
    for d in (2, 3, 4, 5):
        for alpha in (0.5, 1.5, 3.0):
            model = _model(24, d, alpha, 2 * np.pi / d)
            assert ggm_edge(model) == pytest.approx(1 - 1 / d, abs=1e-12)


def test_ggm_edge_zero_at_t0():
    assert ggm_edge(_model(100, 3, 1.0, 0.0)) == pytest.approx(0.0, abs=1e-12)


def test_ggm_edge_series_matches_scalar():
    chain = ChainSpec(n_sites=50, local_dim=3, alpha=2.0)
    times = np.linspace(0, 2 * np.pi, 9)
    series = ggm_edge_series(chain, times)
    for k, t in enumerate(times):
        assert series.values[k] == pytest.approx(
            ggm_edge(PhaseModel(chain, float(t))), abs=1e-12
        )


def test_ggm_dispatch_small_system_uses_exact():
    model = _model(5, 3, 2.0, 2 * np.pi)  # below the d=3 edge-proxy threshold
    assert ggm(model) == pytest.approx(exact_ggm(build_state(model)), abs=1e-12)
    # where the exact scan would disagree with the edge proxy, dispatch must
    # have picked the exact value
    assert abs(ggm(model) - ggm_edge(model)) > 1e-2


def test_ggm_dispatch_large_system_uses_edge():
    model = _model(500, 3, 2.0, 1.3)
    assert ggm(model) == pytest.approx(ggm_edge(model), abs=1e-15)


def test_default_quadrature_step():
    assert default_quadrature_step(2) == pytest.approx(np.pi / 16)
    assert default_quadrature_step(3) == pytest.approx(np.pi / 64)
    assert default_quadrature_step(4) == pytest.approx(np.pi / 144)


def test_time_average_constant():
    avg = time_average(lambda t: 0.7, t0=3.0, step=0.1)
    assert avg.value == pytest.approx(0.7, abs=1e-12)
    assert avg.half_step_delta < 1e-12
    assert avg.converged


def test_time_average_sin_squared():
    # mean of sin^2 over [0, 2*pi] is 1/2
    avg = time_average(lambda t: np.sin(t) ** 2, t0=2 * np.pi, step=np.pi / 64)
    assert avg.value == pytest.approx(0.5, abs=1e-6)
    assert avg.converged


def test_time_average_validation():
    with pytest.raises(DomainError):
        time_average(lambda t: t, t0=0.0, step=0.1)
    with pytest.raises(DomainError):
        time_average(lambda t: t, t0=1.0, step=-0.1)


def test_mi_time_average_matches_closure():
    chain = ChainSpec(n_sites=40, local_dim=2, alpha=1.0)
    direct = time_average(
        lambda t: mutual_information(PhaseModel(chain, t), 3), t0=4.0, step=0.05
    )
    fast = mi_time_average(chain, 3, t0=4.0, step=0.05)
    assert fast.value == pytest.approx(direct.value, abs=1e-10)
    assert fast.half_step_delta == pytest.approx(direct.half_step_delta, abs=1e-10)


def test_ggm_edge_time_average_certificate():
    chain = ChainSpec(n_sites=100, local_dim=2, alpha=3.0)
    coarse = ggm_edge_time_average(chain, t0=3 * np.pi)
    assert 0.0 < coarse.value < 0.5
    # halving the step must tighten the certificate and barely move the value
    fine = ggm_edge_time_average(chain, t0=3 * np.pi, step=coarse.quadrature_step / 4)
    assert fine.converged
    assert fine.half_step_delta < coarse.half_step_delta
    assert abs(fine.value - coarse.value) < 1e-3


def test_entropy_profile_shape():
    model = _model(80, 2, 1.0, 0.5)
    prof = entropy_profile(model, (1, 2, 4))
    assert len(prof) == 3
    assert prof[0] <= prof[1] + 1e-9  # small blocks grow monotonically here


@settings(max_examples=15, deadline=None)
@given(
    r=st.integers(min_value=1, max_value=8),
    t=st.floats(min_value=0.1, max_value=6.0),
)
def test_mi_symmetric_under_anchor_reflection(r, t):
    # open-boundary chain is reflection symmetric: the pair (1, 1+r) and its
    # mirror image carry the same mutual information
    chain = ChainSpec(n_sites=24, local_dim=2, alpha=1.3)
    left = mutual_information(PhaseModel(chain, t), r, anchor=1)
    right = mutual_information(PhaseModel(chain, t), r, anchor=24 - r)
    assert left == pytest.approx(right, abs=1e-9)
