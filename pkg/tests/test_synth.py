import numpy as np
import pytest

from hilbertcum.synth import SynthConfig, generate


def test_covariates_in_unit_cube_and_shapes():
    data, subpop = generate(SynthConfig(m=500, n=50, p=3, seed=4))
    assert data.covariates.shape == (500, 3)
    assert data.covariates.min() >= 0 and data.covariates.max() <= 1
    assert subpop.shape == (50,) and np.all(np.diff(subpop) > 0)
    assert data.subsets["subpop"].sum() == 50


def test_forced_ones():
    data, subpop = generate(SynthConfig(seed=1))
    assert np.all(data.responses[subpop] == 1)


def test_null_leaves_responses_alone():
    forced, sub = generate(SynthConfig(seed=3))
    null, sub2 = generate(SynthConfig(seed=3, force_subpop_ones=False))
    assert np.array_equal(sub, sub2)
    rest = np.setdiff1d(np.arange(1000), sub)
    assert np.array_equal(forced.responses[rest], null.responses[rest])
    assert not np.all(null.responses[sub] == 1)


def test_deterministic_in_seed():
    a, _ = generate(SynthConfig(seed=9, p=5))
    b, _ = generate(SynthConfig(seed=9, p=5))
    c, _ = generate(SynthConfig(seed=10, p=5))
    assert np.array_equal(a.covariates, b.covariates) and np.array_equal(a.responses, b.responses)
    assert not np.array_equal(a.covariates, c.covariates)


def test_response_mean_near_half():
    means = [generate(SynthConfig(m=4000, n=10, seed=s, force_subpop_ones=False))[0].responses.mean()
             for s in range(40)]
    # symmetric direction: E = 1/2; per-draw spread is dominated by the random direction
    se = np.std(means, ddof=1) / np.sqrt(len(means))
    assert abs(np.mean(means) - 0.5) < 3 * se + 1e-3


def test_bad_config():
    with pytest.raises(ValueError):
        SynthConfig(m=10, n=10)
    with pytest.raises(ValueError):
        SynthConfig(p=0)
