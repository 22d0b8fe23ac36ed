import itertools

import numpy as np
import pytest

from modecollapse import (
    DiscreteDist, PayoffSpec, ValidationError, Verdict, factorize, is_more_informative,
    max_expected_payoff, region_boundary,
)
from modecollapse.blackwell import frobenius, random_payoff


def markov(rng, rows, cols):
    return rng.dirichlet(np.ones(cols), size=rows)


def exhaustive_payoff(b, spec):
    """max over every deterministic D of tr(B D U diag(p)), batched over all r^q rules."""
    q, r = b.shape[1], spec.payoff.shape[0]
    choices = np.array(list(itertools.product(range(r), repeat=q)))
    rules = np.zeros((len(choices), q, r))
    rules[np.arange(len(choices))[:, None], np.arange(q), choices] = 1.0
    right = spec.payoff @ np.diag(spec.prior)               # r x n
    values = np.einsum("ij,djk,ki->d", b, rules, right)      # trace of B D U P
    return values.max()


class TestMaxExpectedPayoff:
    def test_perfect_signal(self):
        spec = PayoffSpec(np.eye(2), [0.5, 0.5])
        assert max_expected_payoff(np.eye(2), spec) == pytest.approx(1.0, abs=1e-15)

    def test_uninformative_signal(self):
        spec = PayoffSpec(np.eye(2), [0.5, 0.5])
        b = np.array([[0.3, 0.7], [0.3, 0.7]])
        assert max_expected_payoff(b, spec) == pytest.approx(0.5, abs=1e-15)

    def test_decision_is_deterministic_and_attains(self, rng):
        b = markov(rng, 3, 4)
        spec = random_payoff(rng, 3, 3)
        value, d = max_expected_payoff(b, spec, return_decision=True)
        assert np.all(d.sum(axis=1) == 1) and set(np.unique(d)) <= {0.0, 1.0}
        assert np.trace(b @ d @ spec.payoff @ np.diag(spec.prior)) == pytest.approx(value, abs=1e-12)

    def test_greedy_matches_exhaustive(self, rng):
        checked = 0
        for n, q, r in itertools.product(range(1, 5), range(1, 6), range(1, 5)):
            for _ in range(3):
                b = markov(rng, n, q)
                spec = random_payoff(rng, r, n)
                assert max_expected_payoff(b, spec) == pytest.approx(
                    exhaustive_payoff(b, spec), abs=1e-12)
                checked += 1
        assert checked == 240

    def test_greedy_matches_exhaustive_at_size_limit(self, rng):
        b = markov(rng, 3, 5)
        spec = random_payoff(rng, 10, 3)   # 10^5 decision rules
        assert max_expected_payoff(b, spec) == pytest.approx(exhaustive_payoff(b, spec), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            max_expected_payoff(np.eye(3), PayoffSpec(np.eye(2), [0.5, 0.5]))
        with pytest.raises(ValidationError):
            PayoffSpec(np.eye(2), [0.2, 0.3, 0.5])

    def test_rejects_non_markov(self):
        with pytest.raises(ValidationError):
            max_expected_payoff(np.array([[0.5, 0.6], [0.5, 0.5]]), PayoffSpec(np.eye(2), [0.5, 0.5]))


class TestFactorize:
    def test_identity_channel(self, rng):
        c = markov(rng, 3, 4)
        m = factorize(np.eye(3), c)
        np.testing.assert_allclose(m, c, atol=1e-10)

    def test_rank_obstruction(self):
        b = np.array([[0.4, 0.6], [0.4, 0.6]])
        assert factorize(b, np.eye(2)) is None

    def test_round_trip(self, rng):
        for _ in range(200):
            n, q, q2 = (int(v) for v in rng.integers(2, 6, size=3))
            b, m0 = markov(rng, n, q), markov(rng, q, q2)
            c = b @ m0
            m = factorize(b, c)
            assert m is not None
            assert np.all(m >= 0)
            np.testing.assert_allclose(m.sum(axis=1), 1.0, atol=1e-12)
            assert np.max(np.abs(b @ m - c)) <= 1e-8

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            factorize(np.eye(2), np.eye(3))

    def test_size_guard(self):
        with pytest.raises(ValidationError):
            factorize(np.full((30, 20), 1 / 20), np.full((30, 2), 0.5))


class TestVerdict:
    def test_garbling_is_less_informative(self, rng):
        b = markov(rng, 4, 3)
        result = is_more_informative(b, b @ markov(rng, 3, 3))
        assert result.verdict is Verdict.MORE_INFORMATIVE
        assert result.mixing is not None

    def test_identity_case(self, rng):
        b = markov(rng, 3, 3)
        assert is_more_informative(b, b).verdict is Verdict.MORE_INFORMATIVE

    def test_uninformative_vs_perfect(self):
        b = np.array([[0.5, 0.5], [0.5, 0.5]])
        result = is_more_informative(b, np.eye(2))
        assert result.verdict is Verdict.NOT_MORE_INFORMATIVE
        np.testing.assert_array_equal(result.witness.payoff, np.eye(2))
        np.testing.assert_array_equal(result.witness.prior, [0.5, 0.5])
        assert result.payoff_gap == pytest.approx(0.5, abs=1e-12)

    def test_seeded_sampling_is_reproducible(self):
        b = np.array([[0.9, 0.1, 0.0], [0.1, 0.8, 0.1], [0.5, 0.0, 0.5]])
        c = np.array([[0.2, 0.8], [0.7, 0.3], [0.6, 0.4]])
        r1 = is_more_informative(b, c, payoff_trials=50, seed=3)
        r2 = is_more_informative(b, c, payoff_trials=50, seed=3)
        assert r1.verdict == r2.verdict
        if r1.witness is not None:
            np.testing.assert_array_equal(r1.witness.payoff, r2.witness.payoff)

    def test_witness_is_genuine(self, rng):
        for _ in range(20):
            b, c = markov(rng, 3, 2), markov(rng, 3, 3)
            result = is_more_informative(b, c, payoff_trials=200, seed=1)
            if result.verdict is Verdict.NOT_MORE_INFORMATIVE:
                spec = result.witness
                assert max_expected_payoff(c, spec) > max_expected_payoff(b, spec)


class TestProperties:
    def test_payoff_dominance(self, rng):
        for _ in range(200):
            n, q, q2 = (int(v) for v in rng.integers(2, 6, size=3))
            b = markov(rng, n, q)
            c = b @ markov(rng, q, q2)
            for _ in range(20):
                spec = random_payoff(rng, int(rng.integers(1, 6)), n)
                assert max_expected_payoff(b, spec) >= max_expected_payoff(c, spec) - 1e-10

    def test_trace_identities(self, rng):
        for _ in range(200):
            i, j, k = (int(v) for v in rng.integers(1, 7, size=3))
            a, b = rng.normal(size=(i, j)), rng.normal(size=(j, k))
            c = rng.normal(size=(i, k))
            # <AB, C> = tr(B'A'C) = tr(A'CB'): the right side pairs A' with CB' under trace.
            assert frobenius(a @ b, c) == pytest.approx(np.trace(a.T @ c @ b.T), abs=1e-10)
            assert frobenius(a @ b, c) == pytest.approx(frobenius(a, c @ b.T), abs=1e-10)

    def test_trace_of_product_with_diagonal(self, rng):
        for _ in range(200):
            n, q, r = (int(v) for v in rng.integers(1, 7, size=3))
            a, b, c = rng.normal(size=(n, q)), rng.normal(size=(q, r)), rng.normal(size=(r, n))
            d = np.diag(rng.dirichlet(np.ones(n)))   # the prior matrix is diagonal
            assert np.trace(a @ b @ c @ d) == pytest.approx(frobenius(a @ b @ c, d), abs=1e-10)
            # For a general square D the pairing picks up a transpose.
            g = rng.normal(size=(n, n))
            assert np.trace(a @ b @ c @ g) == pytest.approx(frobenius(a @ b @ c, g.T), abs=1e-10)

    def test_garbling_shrinks_region(self, rng):
        grid = np.linspace(0, 1, 201)
        for _ in range(100):
            q = int(rng.integers(2, 6))
            b = markov(rng, 2, q)                   # row 0 = Q, row 1 = P
            c = b @ markov(rng, q, int(rng.integers(2, 6)))
            assert factorize(b, c) is not None
            outer = region_boundary(DiscreteDist.from_probs(b[1]), DiscreteDist.from_probs(b[0]))
            inner = region_boundary(DiscreteDist.from_probs(c[1], normalize=True),
                                    DiscreteDist.from_probs(c[0], normalize=True))
            for e in grid:
                assert inner.delta_at(e) <= outer.delta_at(e) + 1e-12
