from itertools import product

import pytest
from hypothesis import given, strategies as st

from symlag.dims import CoverData, coh_degree, riemann_hurwitz, vdim_domain, vdim_map, vdim_total


@pytest.mark.parametrize("chi,crit,expected", [(1, 2, 0), (1, 0, 2), (2, 2, 2)])
def test_riemann_hurwitz(chi, crit, expected):
    assert riemann_hurwitz(chi, crit) == expected


@pytest.mark.parametrize("k,l,expected", [(0, 2, 2), (2, 0, 0), (0, 0, -2)])
def test_vdim_domain(k, l, expected):
    assert vdim_domain(k, l) == expected


@pytest.mark.parametrize("orb,mu,expected", [(2, 2, 2), (0, 0, 4), (2, 0, 0)])
def test_vdim_map(orb, mu, expected):
    assert vdim_map(orb, mu) == expected


@pytest.mark.parametrize("k,smooth,mu,expected", [(0, 0, 2, 4), (2, 1, 0, 6)])
def test_vdim_total(k, smooth, mu, expected):
    assert vdim_total(k, smooth, mu) == expected


@pytest.mark.parametrize("mu,expected", [(2, 0), (0, 2), (4, -2)])
def test_coh_degree(mu, expected):
    assert coh_degree(mu) == expected


def test_dimension_identity_exhaustive():
    failures = 0
    for k, l, mu in product(range(21), range(21), range(0, 21, 2)):
        for orb in range(l + 1):
            ok = vdim_domain(k, l) + vdim_map(orb, mu) == vdim_total(k, l - orb, mu)
            # each smooth interior point adds two dimensions, nothing else does
            ok &= vdim_total(k, l - orb, mu) - 2 * (l - orb) == 4 + (k + 1) + mu - 3
            failures += not ok
    assert failures == 0


@given(st.integers(-10, 10), st.integers(0, 20).map(lambda n: 2 * n))
def test_branch_count_parity(chi, crit):
    # double covers of closed surfaces branch at an even number of points
    assert (riemann_hurwitz(chi, crit) - crit) % 2 == 0


def test_cover_data_report():
    rep = CoverData(0, 2, (True, True), 1, 2, 2).report()
    assert rep["vdim_domain"] == 2 and rep["vdim_map"] == 2 and rep["vdim_total"] == 4
    assert rep["identity_holds"] and rep["chi_Sigma"] == 0 and rep["coh_degree"] == 0


@pytest.mark.parametrize("kwargs", [dict(k=0, l=0, mu=3), dict(k=0, l=0, mu=-2), dict(k=0, l=1, orbifold_flags=(True, False))])
def test_cover_data_invariants(kwargs):
    with pytest.raises(ValueError):
        CoverData(**kwargs)
