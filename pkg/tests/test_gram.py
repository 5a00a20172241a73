import numpy as np
import pytest

from shiftinv.external import load_frequency_generators
from shiftinv.generators import BumpSpec, build_generators, make_bump
from shiftinv.gram import (FrameVerdict, frame_verdict, gap_condition, gram_grid, gram_matrix, nonsuccessive_verdict,
                           periodized_matrix, rank_profile, reduce_frequency, tail_mass, xi_grid)


@pytest.fixture(scope="module")
def g01():
    return build_generators((0, 1))


def test_gram_examples(g01):
    g0 = build_generators((0,))
    np.testing.assert_array_equal(gram_matrix(g0, 0.0), [[1.0]])
    np.testing.assert_allclose(gram_matrix(g01, 0.0), [[1.0, 0.0], [0.0, 0.0]], atol=0)
    g02 = build_generators((0, 2))
    for xi in xi_grid(128):
        assert gram_matrix(g02, xi)[0, 1] == 0


def test_gram_rejects_unreduced(g01):
    with pytest.raises(ValueError):
        gram_matrix(g01, np.pi)
    with pytest.raises(ValueError):
        gram_matrix(g01, -4.0)


def test_periodicity_through_reduction(g01):
    for xi in (2.5, 7.0, -9.3, 100.0):
        direct = periodized_matrix(g01, xi, J=g01.required_J() + 17)
        reduced = periodized_matrix(g01, reduce_frequency(xi), J=g01.required_J() + 17)
        # columns move by whole 2pi slots; the Gram matrix does not see it
        np.testing.assert_allclose(direct @ direct.conj().T, reduced @ reduced.conj().T, atol=1e-10)
        np.testing.assert_allclose(gram_matrix(g01, reduce_frequency(xi)), reduced @ reduced.conj().T, atol=1e-10)


def test_periodized_matrix_pattern():
    # columns -1, 0, 1 hold theta(xi - pi), theta(xi), theta(xi + pi) for the sign -1 layout
    theta = make_bump(BumpSpec())
    gens = build_generators((0, 1), sign=-1)
    xi = 0.7
    a = periodized_matrix(gens, xi, J=2)
    assert a.shape == (2, 5)
    np.testing.assert_allclose(a[0], [theta(xi + 2 * j * np.pi) for j in range(-2, 3)])
    np.testing.assert_allclose(a[1], [theta(xi + 2 * j * np.pi - np.pi) for j in range(-2, 3)])


def test_periodized_matrix_rejects_small_J():
    gens = build_generators((0, 1, 2, 3))
    with pytest.raises(ValueError):
        periodized_matrix(gens, 0.1, J=1)
    assert periodized_matrix(gens, 0.1).shape == (4, 2 * gens.required_J() + 1)


@pytest.mark.parametrize("idx", [(0, 1), (0, 1, 2), (0, 2, 5), (0, 1, 2, 3, 4)])
def test_gram_hermitian_psd(idx):
    gg = gram_grid(build_generators(idx), 256)
    m = gg.matrices
    assert np.abs(m - np.conj(np.swapaxes(m, 1, 2))).max() <= 1e-12
    w = gg.eigenvalues()
    assert w.min() >= -1e-10 * w.max()


def test_eigenvalues_continuous():
    gens = build_generators((0, 1, 2))
    jumps = []
    for m in (256, 512, 1024, 2048):
        w = gram_grid(gens, m).eigenvalues()
        jumps.append(np.abs(np.diff(w, axis=0)).max())
    assert all(b < a for a, b in zip(jumps, jumps[1:]))


def test_rank_profile_sign_mirror(g01):
    plus = rank_profile(g01)
    minus = rank_profile(build_generators((0, 1), sign=-1))
    assert plus.rank_near(np.pi / 2) == 2 and plus.rank_near(-np.pi / 2) == 1
    assert minus.rank_near(np.pi / 2) == 1 and minus.rank_near(-np.pi / 2) == 2
    assert plus.histogram == minus.histogram == {1: 515, 2: 509}


def test_rank_profile_transitions(g01):
    prof = rank_profile(g01)
    xs = sorted(t["xi"] for t in prof.transitions)
    assert len(xs) == 2
    # theta(xi) and theta(xi - pi) fall under the threshold within 0.011 of 0 and pi
    assert 0 < xs[0] < 0.011 and np.pi - 0.011 < xs[1] < np.pi


def test_rank_drop_sits_at_zero_and_pi():
    """Even successive counts lose a rank where a generator's bump vanishes: xi = 0 or pi."""
    gens = build_generators((0, 1, 2, 3))
    for approach in (lambda d: np.pi - d, lambda d: d):
        small = [np.linalg.eigvalsh(gram_matrix(gens, approach(d)))[1] for d in (0.15, 0.12, 0.1)]
        assert small[0] > small[1] > small[2] > 0
        assert np.linalg.eigvalsh(gram_matrix(gens, approach(0.005)))[1] < 1e-15
    near_half = np.linalg.eigvalsh(gram_matrix(gens, np.pi / 2))
    assert near_half[1] > 0.5


@pytest.mark.parametrize("idx,hist", [
    ((0, 1, 2), {1: 3, 2: 1021}),
    ((0, 1, 2, 3, 4), {2: 3, 3: 1021}),
    ((0, 1, 2, 3), {2: 515, 3: 509}),
])
def test_histograms(idx, hist):
    assert rank_profile(build_generators(idx), 1024, 1e-8, refine=False).histogram == hist


def test_odd_successive_rank_one_at_minus_pi_exactly():
    """At xi = -pi every even-indexed generator vanishes in every 2pi slot."""
    gens = build_generators((0, 1, 2))
    a = periodized_matrix(gens, -np.pi)
    assert np.count_nonzero(np.abs(a).sum(axis=1)) == 1


def test_rank_profile_preconditions(g01):
    with pytest.raises(ValueError):
        rank_profile(g01, m=32)
    with pytest.raises(ValueError):
        rank_profile(g01, tolerance=1.5)


def test_verdict_negative_for_pair(g01):
    v = frame_verdict(g01)
    assert not v.constant_rank and not v.positive
    assert v.C_estimate == np.inf
    assert v.rank_value == (1, 2)
    d = v.to_dict()
    assert d["verdict"] == "not a frame" and d["rank_value"] == [1, 2]


def test_verdict_positive_on_synthetic_frame():
    # a single generator with transform 1 on [-pi, pi): G == 1 everywhere
    from shiftinv.generators import GeneratorSet
    flat = GeneratorSet((0,), [lambda xi: ((np.asarray(xi) >= -np.pi) & (np.asarray(xi) < np.pi)).astype(float)], np.pi)
    v = frame_verdict(flat)
    assert v.positive and v.rank_value == 1 and v.C_estimate == pytest.approx(1.0)


def test_verdict_C_estimate_is_spectral_constant():
    from shiftinv.generators import GeneratorSet
    def flat(c):
        return GeneratorSet((0,), [lambda xi: c * ((np.asarray(xi) >= -np.pi) & (np.asarray(xi) < np.pi))], np.pi)

    v = frame_verdict(flat(2.0))
    assert v.positive and v.max_eig == pytest.approx(4.0) and v.C_estimate == pytest.approx(4.0)
    assert frame_verdict(flat(0.5)).C_estimate == pytest.approx(4.0)


def test_normalized_single_generator_is_not_a_frame():
    """The normalized bump still vanishes at +-pi, so G(-pi) = 0."""
    gens = build_generators((0,), BumpSpec(normalized=True))
    assert gram_matrix(gens, -np.pi)[0, 0] == 0
    assert gram_matrix(gens, 0.0)[0, 0] == 1
    assert not frame_verdict(gens).positive


def test_nonsuccessive_verdicts():
    assert not nonsuccessive_verdict([0, 1]).constant_rank
    for idx in ([0, 2, 5], [0, 1, 3, 4], [0, 1, 2]):
        v = nonsuccessive_verdict(idx)
        assert not v.constant_rank
        # the rank only moves on the few grid points next to xi = 0 or pi
        assert max(v.rank_histogram.values()) >= 1018


def test_gap_condition():
    assert gap_condition([0, 2, 5]) == "separated"
    assert gap_condition([0, 1, 2]) == "successive"
    assert gap_condition([0, 1, 2, 3, 4]) == "successive"
    assert gap_condition([0, 1, 2, 3]) is None
    assert gap_condition([0, 1]) is None
    assert gap_condition([0, 1, 3, 4]) is None
    assert gap_condition([3]) == "separated"


def test_external_csv(tmp_path):
    theta = make_bump(BumpSpec())
    xi = np.linspace(-12, 12, 24001)
    paths = []
    for k in (0, 1, 2):
        p = tmp_path / f"g{k}.csv"
        v = theta(xi + k * np.pi)
        np.savetxt(p, np.c_[xi, v, 0 * v], delimiter=",", header="xi,re,im", comments="")
        paths.append(p)
    gens = load_frequency_generators(paths, J=2)
    assert gens.diagnostics["tail_mass"] == 0.0
    assert frame_verdict(gens).rank_histogram == {1: 3, 2: 1021}
    assert gens.labels == ("g0", "g1", "g2")


def test_external_csv_tail_mass(tmp_path):
    xi = np.linspace(-40, 40, 8001)
    v = np.exp(-xi ** 2 / 50)
    p = tmp_path / "gauss.csv"
    np.savetxt(p, np.c_[xi, v, 0 * v], delimiter=",", header="xi,re,im", comments="")
    small = load_frequency_generators([p], J=1)
    large = load_frequency_generators([p], J=4)
    assert 0 < large.diagnostics["tail_mass"] < small.diagnostics["tail_mass"] < 1
    assert periodized_matrix(small, 0.0).shape == (1, 3)


def test_external_csv_rejects_bad_columns(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        load_frequency_generators([p])


def test_tail_mass_zero_for_compact():
    gens = build_generators((0, 1, 2))
    assert tail_mass(gens, gens.required_J()) == 0.0


def test_verdict_dict_fields():
    d = frame_verdict(build_generators((0, 1, 2))).to_dict()
    for key in ("indices", "epsilon", "m", "tolerance", "rank_histogram", "constant_rank", "C_estimate",
                "min_nonzero_eig", "max_eig"):
        assert key in d
    assert isinstance(FrameVerdict, type)
