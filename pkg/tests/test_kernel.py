import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from complementarity import InputDomainError, Kernel, KernelFamily, eval_kernel

GAUSS = Kernel(KernelFamily.GAUSSIAN, 1.0, 1.0)
IMQ = Kernel(KernelFamily.INVERSE_MULTIQUADRIC, 1.0, 1.0)


def test_gaussian_closed_form():
    assert eval_kernel(GAUSS, 0.0) == -1.0
    assert eval_kernel(GAUSS, 1.0) == pytest.approx(-0.6065306597, abs=1e-10)


def test_imq_closed_form_and_decay():
    assert eval_kernel(IMQ, 0.0) == -1.0
    assert abs(eval_kernel(IMQ, 1e6)) < 1e-5


@pytest.mark.parametrize("r", [-1e-9, -1.0, math.nan, math.inf])
def test_rejects_bad_distance(r):
    with pytest.raises(InputDomainError):
        eval_kernel(GAUSS, r)


@pytest.mark.parametrize("amp,width", [(0, 1), (1, 0), (-1, 1), (1, math.nan)])
def test_rejects_bad_parameters(amp, width):
    with pytest.raises(InputDomainError):
        Kernel("gaussian", amp, width)


def test_family_aliases():
    assert Kernel("GaussianAttractive").family is KernelFamily.GAUSSIAN
    assert Kernel("InverseMultiquadricAttractive").family is KernelFamily.INVERSE_MULTIQUADRIC
    with pytest.raises(InputDomainError):
        KernelFamily.parse("coulomb")


def test_vectorized_matches_scalar():
    r = np.linspace(0, 3, 7)
    np.testing.assert_array_equal(eval_kernel(IMQ, r), [eval_kernel(IMQ, x) for x in r])


kernels = st.builds(
    Kernel,
    st.sampled_from(list(KernelFamily)),
    st.floats(0.1, 10.0),
    st.floats(0.1, 5.0),
)


@given(kernels, st.floats(0, 30), st.floats(0, 30))
def test_negative_and_monotone(k, t1, t2):
    # distances in widths; beyond ~38 widths the Gaussian underflows to -0.0
    lo, hi = sorted((t1 * k.width, t2 * k.width))
    assert eval_kernel(k, lo) <= eval_kernel(k, hi) < 0


@settings(max_examples=60, deadline=None)
@given(
    kernels,
    arrays(np.float64, (5, 2), elements=st.floats(-3, 3)),
    arrays(np.float64, 5, elements=st.floats(0.1, 2.0)),
)
def test_weighted_gram_negative_definite(k, pts, w):
    d = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
    # well separated points keep the Gram matrix far from numerical singularity
    assume(np.min(d[np.triu_indices(5, 1)]) > 0.5 * k.width)
    gram = w[:, None] * eval_kernel(k, d) * w[None, :]
    assert np.max(np.linalg.eigvalsh(gram)) < 0
