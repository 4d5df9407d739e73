"""Mode functions: normalization, orthogonality, matching conditions, localization.

Reference norms come from scipy quad of the unnormalized piecewise mode
plus the chi |Phi(0)|^2 membrane term.
"""
import math

import numpy as np
import pytest

from dcecavity.cavity_spectrum import CavityParams, solve_spectrum
from dcecavity.errors import OutOfDomain
from dcecavity.mode_basis import (
    ModeSet, build_mode, eval_mode, inner_product, localization, overlap_matrix, right_factor,
)

from conftest import ASYM_COND, ASYM_FREE, LEFT_HEAVY

ORACLE_NORMS = {
    "free": [0.9878224935, 0.6510101681, 0.6152262685, 2.1640109353],
    "cond": [0.6024222038, 0.6050617061, 4.9453576637, 0.61034862],
    "left": [1.9803574064, 3.8024430261, 0.4548529425, 12.7305682842],
}
CONFIGS = {"free": ASYM_FREE, "cond": ASYM_COND, "left": LEFT_HEAVY}


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_norms_match_quadrature(name):
    modes = ModeSet.solve(CONFIGS[name], 4)
    np.testing.assert_allclose(modes.norm, ORACLE_NORMS[name], rtol=1e-9)


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_gram_matrix_is_identity(name):
    modes = ModeSet.solve(CONFIGS[name], 12)
    gram = overlap_matrix(modes, modes)
    assert np.max(np.abs(gram - np.eye(12))) < 1e-8


def test_quadrature_and_closed_form_inner_products_agree():
    modes = ModeSet.solve(LEFT_HEAVY, 4)
    a, b = modes.mode(1), modes.mode(3)
    closed = inner_product(a, a)
    numeric = inner_product(lambda x: a(x), lambda x: a(x), LEFT_HEAVY)
    assert closed == pytest.approx(1.0, abs=1e-12)
    assert numeric == pytest.approx(1.0, abs=1e-9)
    assert inner_product(lambda x: a(x), lambda x: b(x), LEFT_HEAVY) == pytest.approx(0.0, abs=1e-9)


def test_sampled_inner_product_needs_params():
    with pytest.raises(ValueError):
        inner_product(np.sin, np.cos)


@pytest.mark.parametrize("name", sorted(CONFIGS))
def test_matching_conditions_at_membrane(name):
    p = CONFIGS[name]
    h = 1e-7
    for k in solve_spectrum(p, 6).roots:
        m = build_mode(p, k)
        left = float(eval_mode(m, -1e-15))
        right = float(eval_mode(m, 0.0 + 1e-15))
        assert right == pytest.approx(left, abs=1e-9)
        d_minus = (float(eval_mode(m, 0.0)) - float(eval_mode(m, -h))) / h
        d_plus = (float(eval_mode(m, h)) - float(eval_mode(m, 1e-300))) / h
        jump = (p.v - k * k * p.chi) * m.at_membrane
        assert d_plus - d_minus == pytest.approx(jump, abs=1e-4 * max(1.0, k * k))


def test_mirror_boundary_conditions():
    m = build_mode(ASYM_FREE, solve_spectrum(ASYM_FREE, 3).roots[2])
    assert abs(float(eval_mode(m, -ASYM_FREE.L1))) < 1e-12
    assert abs(float(eval_mode(m, ASYM_FREE.L2))) < 1e-12


def test_out_of_domain_raises():
    m = ModeSet.solve(ASYM_FREE, 1).mode(0)
    with pytest.raises(OutOfDomain):
        m(ASYM_FREE.L2 + 0.1)


def test_right_factor_at_double_node():
    # k = 5 pi with L1 = 0.4, L2 = 0.6 is a node of both sub-cavities
    assert abs(right_factor(LEFT_HEAVY, 5 * math.pi)) == pytest.approx(1.0)


def test_localization_degree_and_side():
    k = solve_spectrum(ASYM_FREE, 4).roots
    rep = localization(ASYM_FREE, k[3])
    s1, s2 = math.sin(k[3] * ASYM_FREE.L1), math.sin(k[3] * ASYM_FREE.L2)
    assert rep.g == pytest.approx(2.0 * math.log(abs(s1 / s2)))
    assert rep.side == "right"
    flipped = localization(ASYM_FREE.replace(dL=-0.44), k[3])
    assert flipped.g == pytest.approx(-rep.g)
    assert flipped.side == "left"


def test_localization_delocalized_without_membrane():
    rep = localization(CavityParams(1.0, 0.0, 0.0, 0.0), math.pi)
    assert rep.side == "delocalized"
