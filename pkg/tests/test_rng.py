import numpy as np
import pytest

from securenoma.rng import TrialStream, complex_normals, derive_trial_rng, stream_key, uniforms


def test_same_seed_and_index_repeat():
    a = derive_trial_rng(42, 17).uniform(100)
    b = derive_trial_rng(42, 17).uniform(100)
    assert np.array_equal(a, b)


def test_stream_advances():
    s = TrialStream(1, 0)
    first, second = s.uniform(4), s.uniform(4)
    assert not np.array_equal(first, second)
    assert np.array_equal(np.concatenate([first, second]), uniforms(1, [0], 8)[0])


def test_batch_matches_per_trial_streams():
    trials = np.array([0, 5, 123456, 2**40])
    batch = complex_normals(9, trials, 3, offset=2)
    for row, t in zip(batch, trials):
        s = derive_trial_rng(9, int(t))
        s.uniform(2)
        assert np.array_equal(row, s.complex_normal(3))


def test_adjacent_trials_uncorrelated():
    s0 = derive_trial_rng(3, 0).uniform(100_000)
    s1 = derive_trial_rng(3, 1).uniform(100_000)
    assert abs(np.corrcoef(s0, s1)[0, 1]) < 0.01
    # first draw across consecutive trials
    across = uniforms(3, np.arange(100_001), 1)[:, 0]
    assert abs(np.corrcoef(across[:-1], across[1:])[0, 1]) < 0.01


def test_uniform_range_and_moments():
    u = uniforms(11, np.arange(200_000), 2).ravel()
    assert u.min() > 0 and u.max() <= 1
    assert abs(u.mean() - 0.5) < 3 * np.sqrt(1 / 12 / u.size)


def test_complex_normal_moments():
    z = complex_normals(5, np.arange(200_000), 1)[:, 0]
    se = 1 / np.sqrt(z.size)
    assert abs(np.mean(np.abs(z) ** 2) - 1) < 4 * se
    assert abs(np.mean(z.real**2) - 0.5) < 4 * se
    assert abs(np.mean(z.real * z.imag)) < 4 * se


def test_stream_keys_differ_by_label():
    assert stream_key(1, "H0") != stream_key(1, "H1")
    assert stream_key(1, "H0") == stream_key(1, "H0")
    assert stream_key(1, 3) != stream_key(2, 3)


@pytest.mark.parametrize("seed", [-1, 2**64])
def test_seed_range(seed):
    with pytest.raises(ValueError):
        uniforms(seed, [0], 1)


def test_negative_trial_rejected():
    with pytest.raises(ValueError):
        derive_trial_rng(0, -1)
