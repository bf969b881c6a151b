import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localpriv import Alphabet, Channel, MetricSpace, Prior, SecretModel
from localpriv.core import (
    clamped_log,
    compose,
    log_diff,
    log_ratio,
    output_dist,
    posterior,
    validate_channel,
)
from localpriv.errors import (
    AlphabetMismatch,
    LocalPrivError,
    NegativeEntry,
    RowSumError,
    ShapeMismatch,
    UnknownSymbol,
    ZeroMarginal,
)

A2 = Alphabet.range(2)


def rr075():
    return Channel.from_rows([[0.75, 0.25], [0.25, 0.75]])


class TestValidate:
    def test_identity_ok(self):
        validate_channel(np.eye(2))

    def test_row_sum(self):
        with pytest.raises(RowSumError):
            validate_channel([[0.5, 0.6], [0.5, 0.5]])

    def test_negative(self):
        with pytest.raises(NegativeEntry):
            validate_channel([[-0.1, 1.1]])

    @pytest.mark.parametrize("m", [[1.0, 0.0], [[[1.0]]], np.zeros((0, 2)), [[np.nan, 1.0]]])
    def test_shape(self, m):
        with pytest.raises(ShapeMismatch):
            validate_channel(m)

    def test_alphabet_shape(self):
        with pytest.raises(ShapeMismatch):
            Channel(Alphabet.range(3), A2, np.eye(2))

    @pytest.mark.parametrize("dev", [1e-10, 5e-10, 9e-10, -9e-10])
    def test_accepts_within_tolerance(self, dev):
        validate_channel([[0.5, 0.5 + dev], [1.0, 0.0]])

    @pytest.mark.parametrize("dev", [1.2e-9, 2e-9, -1.5e-9, 1e-6])
    def test_rejects_beyond_tolerance(self, dev):
        with pytest.raises(RowSumError):
            validate_channel([[0.5, 0.5 + dev], [1.0, 0.0]])

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-3e-9, 3e-9))
    def test_perturbation_fuzz(self, dev):
        m = [[0.25, 0.75 + dev]]
        ok = abs((0.25 + (0.75 + dev)) - 1.0) <= 1e-9
        if ok:
            validate_channel(m)
        else:
            with pytest.raises(RowSumError):
                validate_channel(m)


class TestTypes:
    def test_alphabet_distinct(self):
        with pytest.raises(ShapeMismatch):
            Alphabet(("a", "a"))

    def test_alphabet_empty(self):
        with pytest.raises(ShapeMismatch):
            Alphabet(())

    def test_embedding_length(self):
        with pytest.raises(ShapeMismatch):
            Alphabet(("a", "b"), (1.0,))

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbol):
            A2.index("7")
        with pytest.raises(KeyError):
            A2.index("7")

    def test_prior_sum(self):
        with pytest.raises(RowSumError):
            Prior(A2, [0.5, 0.6])
        Prior(A2, [0.5, 0.5 + 5e-10])

    def test_immutable(self):
        c = rr075()
        with pytest.raises(ValueError):
            c.matrix[0, 0] = 1.0

    def test_metric_checks(self):
        a3 = Alphabet.range(3)
        MetricSpace(a3, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        with pytest.raises(LocalPrivError):
            MetricSpace(a3, [[0, 1, 3], [1, 0, 1], [3, 1, 0]])  # triangle
        with pytest.raises(LocalPrivError):
            MetricSpace(a3, [[0, 1, 2], [1, 0, 1], [2, 2, 0]])  # symmetry
        with pytest.raises(LocalPrivError):
            MetricSpace(a3, [[1, 1, 2], [1, 0, 1], [2, 1, 0]])  # diagonal

    def test_secret_model_checks(self):
        data = Alphabet.range(2)
        s = Alphabet(("a", "b"))
        SecretModel(s, (("a", "b"),), ({"a": [1, 0], "b": [0, 1]},), data)
        with pytest.raises(LocalPrivError):
            SecretModel(s, (("a", "a"),), ({"a": [1, 0]},), data)
        with pytest.raises(LocalPrivError):
            SecretModel(s, (("a", "c"),), ({"a": [1, 0]},), data)
        with pytest.raises(LocalPrivError):
            SecretModel(s, (), ({"a": [1, 0]},), data)
        with pytest.raises(RowSumError):
            SecretModel(s, (("a", "b"),), ({"a": [1, 1]},), data)


class TestOutputDist:
    def test_identity(self):
        q = output_dist(Channel.identity(A2), Prior(A2, [0.3, 0.7]))
        np.testing.assert_allclose(q.probs, [0.3, 0.7])

    def test_constant(self):
        c = Channel.constant(A2, A2, [1.0, 0.0])
        np.testing.assert_allclose(output_dist(c, Prior(A2, [0.2, 0.8])).probs, [1.0, 0.0])

    def test_rr_symmetric(self):
        # 0.5*0.75 + 0.5*0.25 = 0.5 for both outputs
        np.testing.assert_allclose(output_dist(rr075(), Prior.uniform(A2)).probs, [0.5, 0.5])

    def test_mismatch(self):
        with pytest.raises(AlphabetMismatch):
            output_dist(rr075(), Prior.uniform(Alphabet(("x", "y"))))


class TestPosterior:
    def test_identity(self):
        post = posterior(Channel.identity(A2), Prior(A2, [0.3, 0.7]), "0")
        np.testing.assert_array_equal(post.probs, [1.0, 0.0])

    def test_constant(self):
        p = Prior(A2, [0.3, 0.7])
        c = Channel.constant(A2, A2, [0.4, 0.6])
        np.testing.assert_allclose(posterior(c, p, "1").probs, p.probs)

    def test_hand_bayes(self):
        c = Channel.from_rows([[0.8, 0.2], [0.4, 0.6]])
        np.testing.assert_allclose(posterior(c, Prior.uniform(A2), "0").probs, [2 / 3, 1 / 3])

    def test_zero_marginal(self):
        c = Channel.constant(A2, A2, [1.0, 0.0])
        with pytest.raises(ZeroMarginal):
            posterior(c, Prior.uniform(A2), "1")


class TestCompose:
    def test_identity_neutral(self):
        c = rr075()
        e = Channel.identity(A2)
        np.testing.assert_array_equal(compose(c, e).matrix, c.matrix)
        np.testing.assert_array_equal(compose(e, c).matrix, c.matrix)

    def test_constant_absorbs(self):
        k = Channel.constant(A2, Alphabet.range(3), [0.2, 0.3, 0.5])
        out = compose(rr075(), k)
        np.testing.assert_allclose(out.matrix, np.tile([0.2, 0.3, 0.5], (2, 1)))

    def test_mismatch(self):
        with pytest.raises(AlphabetMismatch):
            compose(rr075(), Channel.identity(Alphabet.range(3)))


class TestLogRatio:
    def test_values(self):
        assert log_ratio(0.5, 0.5) == 0
        assert log_ratio(0.3, 0) == math.inf
        assert log_ratio(0, 0.3) == -math.inf
        assert log_ratio(0, 0) == 0
        assert abs(log_ratio(math.e * 0.1, 0.1) - 1.0) <= 1e-12

    def test_dust_is_zero(self):
        assert log_ratio(1e-13, 0.5) == -math.inf
        assert log_ratio(1e-13, 1e-14) == 0

    def test_vector_helpers(self):
        la = clamped_log([0.0, 0.5, 1e-13])
        lb = clamped_log([0.0, 0.25, 0.5])
        np.testing.assert_allclose(log_diff(la, lb), [0.0, math.log(2), -math.inf])


dims = st.integers(1, 8)


@st.composite
def channel_and_prior(draw):
    n_in, n_out = draw(dims), draw(dims)
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    c = Channel.from_rows(rng.dirichlet(np.ones(n_out), size=n_in))
    return c, Prior(c.input, rng.dirichlet(np.ones(n_in)))


@settings(max_examples=200, deadline=None)
@given(channel_and_prior())
def test_output_dist_sums_to_one(cp):
    c, p = cp
    assert abs(output_dist(c, p).probs.sum() - 1) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(channel_and_prior())
def test_total_probability(cp):
    c, p = cp
    q = output_dist(c, p)
    mix = np.zeros(len(p.alphabet))
    for y, qy in zip(c.output, q.probs):
        if qy > 1e-12:
            mix += qy * posterior(c, p, y).probs
    np.testing.assert_allclose(mix, p.probs, atol=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.integers(1, 6),
       st.integers(0, 2 ** 32 - 1))
def test_compose_associative(a, b, c_, d, seed):
    rng = np.random.default_rng(seed)
    alph = [Alphabet.range(n) for n in (a, b, c_, d)]
    chans = [Channel(alph[i], alph[i + 1], rng.dirichlet(np.ones(len(alph[i + 1])), size=len(alph[i])))
             for i in range(3)]
    left = compose(compose(chans[0], chans[1]), chans[2])
    right = compose(chans[0], compose(chans[1], chans[2]))
    np.testing.assert_allclose(left.matrix, right.matrix, atol=1e-12, rtol=0)
