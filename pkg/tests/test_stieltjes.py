import math

import numpy as np
import pytest

from pseudomoment.stieltjes import (
    AtomicMeasure,
    IndefiniteHankelError,
    JacobiMatrix,
    MomentSequence,
    carleman_diagnostic,
    gauss_rule,
    orthogonal_recurrence,
    pushforward_sqrt,
    pushforward_square,
    tridiagonal_eigen,
)


def random_atomic(rng, m, lo=0.1, hi=2.5, min_gap=0.05):
    while True:
        nodes = np.sort(rng.uniform(lo, hi, m))
        if m < 2 or np.min(np.diff(nodes)) > min_gap:
            break
    weights = rng.uniform(0.1, 1.0, m)
    return AtomicMeasure(tuple(nodes), tuple(weights))


class TestMomentSequence:
    def test_order(self):
        assert MomentSequence((1.0, 2.0, 3.0)).order == 1
        assert MomentSequence((1.0,) * 7).order == 3

    def test_rejects_negative_mass(self):
        with pytest.raises(ValueError):
            MomentSequence((-1.0, 0.0))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            MomentSequence((1.0, math.inf))


class TestAtomicMeasure:
    def test_moments(self):
        m = AtomicMeasure((1.0, 2.0), (0.5, 0.25))
        assert m.moment(0) == 0.75
        assert m.moment(2) == 0.5 + 0.25 * 4

    def test_empty_is_zero_measure(self):
        m = AtomicMeasure()
        assert len(m) == 0
        assert m.moment(3) == 0
        assert m.total_mass() == 0

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            AtomicMeasure((2.0, 1.0), (1.0, 1.0))

    def test_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError):
            AtomicMeasure((1.0,), (0.0,))


class TestOrthogonalRecurrence:
    def test_single_atom(self):
        J = orthogonal_recurrence([2.0 ** j for j in range(5)])
        assert J.rank == 1
        assert abs(J.diag[0] - 2.0) <= 1e-13

    def test_laguerre(self):
        J = orthogonal_recurrence([math.factorial(j) for j in range(7)])
        assert abs(J.diag[0] - 1.0) <= 1e-12
        assert abs(J.diag[1] - 3.0) <= 1e-11
        assert abs(J.offdiag[0] - 1.0) <= 1e-12

    def test_dirac_at_zero(self):
        J = orthogonal_recurrence([1.0, 0.0, 0.0, 0.0, 0.0])
        assert J.rank == 1
        assert J.diag == (0.0,)

    def test_indefinite_raises_with_witness(self):
        with pytest.raises(IndefiniteHankelError) as exc:
            orthogonal_recurrence([1.0, 0.0, -1.0, 0.0, 1.0])
        assert exc.value.witness is not None

    def test_degenerate_two_atoms(self):
        gen = AtomicMeasure((0.5, 1.5), (1.0, 2.0))
        J = orthogonal_recurrence([gen.moment(j) for j in range(9)])
        assert J.rank == 2


class TestTridiagonalEigen:
    def test_diagonal(self):
        J = JacobiMatrix(diag=(1.0, 2.0, 3.0), offdiag=(0.0, 0.0), beta0=1.0)
        w, first = tridiagonal_eigen(J)
        assert np.allclose(w, [1.0, 2.0, 3.0])

    def test_two_by_two_swap(self):
        J = JacobiMatrix(diag=(0.0, 0.0), offdiag=(1.0,), beta0=1.0)
        w, first = tridiagonal_eigen(J)
        assert np.allclose(w, [-1.0, 1.0])
        assert np.allclose(first ** 2, [0.5, 0.5])

    def test_against_dense_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            diag = rng.normal(size=6)
            off = rng.uniform(0.1, 1.0, 5)
            J = JacobiMatrix(diag=tuple(diag), offdiag=tuple(off), beta0=1.0)
            w, first = tridiagonal_eigen(J)
            w_ref, v_ref = np.linalg.eigh(J.dense())
            assert np.max(np.abs(w - w_ref)) <= 1e-11 * max(1.0, np.max(np.abs(w_ref)))
            assert np.max(np.abs(np.abs(first) - np.abs(v_ref[0, :]))) <= 1e-10

    def test_trace_identity(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            diag = rng.normal(size=8)
            J = JacobiMatrix(diag=tuple(diag), offdiag=tuple(rng.uniform(0.1, 1, 7)), beta0=1.0)
            w, _ = tridiagonal_eigen(J)
            assert abs(np.sum(w) - np.sum(diag)) <= 1e-12 * max(1.0, abs(np.sum(diag)))


class TestGaussRule:
    def test_single_atom(self):
        m, info = gauss_rule([3.0 ** j for j in range(5)])
        assert len(m) == 1
        assert abs(m.nodes[0] - 3.0) <= 1e-13
        assert abs(m.weights[0] - 1.0) <= 1e-13
        assert info["rank"] == 1

    def test_lebesgue_two_point(self):
        m, _ = gauss_rule([1.0, 1 / 2, 1 / 3, 1 / 4], 2)
        lo = 0.5 - 1 / (2 * math.sqrt(3))
        hi = 0.5 + 1 / (2 * math.sqrt(3))
        assert abs(m.nodes[0] - lo) <= 1e-13
        assert abs(m.nodes[1] - hi) <= 1e-13
        assert abs(m.weights[0] - 0.5) <= 1e-13
        assert abs(m.weights[1] - 0.5) <= 1e-13

    def test_laguerre_two_point(self):
        m, _ = gauss_rule([1.0, 1.0, 2.0, 6.0], 2)
        assert abs(m.nodes[0] - (2 - math.sqrt(2))) <= 1e-12
        assert abs(m.nodes[1] - (2 + math.sqrt(2))) <= 1e-12
        assert abs(m.weights[0] - (2 + math.sqrt(2)) / 4) <= 1e-12
        assert abs(m.weights[1] - (2 - math.sqrt(2)) / 4) <= 1e-12
        for j in range(4):
            assert abs(m.moment(j) - math.factorial(j)) <= 1e-11 * math.factorial(j)

    def test_needs_enough_moments(self):
        with pytest.raises(ValueError, match="need moments"):
            gauss_rule([1.0, 0.5, 0.3], 2)

    def test_moment_reproduction_random(self):
        rng = np.random.default_rng(42)
        for _ in range(500):
            m_atoms = int(rng.integers(1, 5))
            gen = random_atomic(rng, m_atoms)
            n = int(rng.integers(m_atoms, m_atoms + 3))
            s = [gen.moment(j) for j in range(2 * n + 1)]
            rule, info = gauss_rule(s)
            m = info["rank"]
            for j in range(2 * m):
                assert abs(rule.moment(j) - s[j]) <= 1e-10 * max(1.0, abs(s[j]))

    def test_exact_recovery(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            gen = random_atomic(rng, int(rng.integers(1, 5)))
            s = [gen.moment(j) for j in range(2 * len(gen) + 3)]
            rule, info = gauss_rule(s)
            assert len(rule) == len(gen)
            # node gaps down to 0.05 make the Hankel problem mildly
            # ill-conditioned, so recovery is good to ~1e-7, not 1e-12
            assert np.max(np.abs(np.array(rule.nodes) - gen.nodes)) <= 1e-7
            assert np.max(np.abs(np.array(rule.weights) - gen.weights)) <= 1e-7

    def test_stieltjes_nonnegative_nodes(self):
        # shifted Hankel PSD (support on [0, inf)) keeps nodes non-negative
        rng = np.random.default_rng(44)
        for _ in range(100):
            gen = random_atomic(rng, 3, lo=0.0, hi=2.0)
            s = [gen.moment(j) for j in range(7)]
            rule, _ = gauss_rule(s)
            assert all(t >= -1e-12 for t in rule.nodes)

    def test_node_at_zero_flag(self):
        gen = AtomicMeasure((0.0, 1.0), (0.5, 0.5))
        s = [gen.moment(j) for j in range(5)]
        _, info = gauss_rule(s)
        assert info["node_at_zero"]

    def test_indefinite_propagates(self):
        with pytest.raises(IndefiniteHankelError):
            gauss_rule([1.0, 0.0, -1.0, 0.0, 1.0])

    def test_order_cap(self):
        with pytest.raises(ValueError, match="MAX_ORDER"):
            orthogonal_recurrence([1.0] * 45)


class TestPushforwards:
    def test_sqrt_single(self):
        nu = AtomicMeasure((4.0,), (1.0,))
        out = pushforward_sqrt(nu)
        assert out.nodes == (2.0,)
        assert out.weights == (1.0,)

    def test_fixed_points(self):
        nu = AtomicMeasure((0.0, 1.0), (0.3, 0.7))
        out = pushforward_sqrt(nu)
        assert out.nodes == (0.0, 1.0)
        assert out.weights == (0.3, 0.7)

    def test_change_of_variables(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            nu = random_atomic(rng, 3, lo=0.0)
            out = pushforward_sqrt(nu)
            assert abs(out.moment(2) - nu.moment(1)) <= 1e-12 * max(1.0, abs(nu.moment(1)))

    def test_square_single(self):
        nu = AtomicMeasure((2.0,), (1.0,))
        assert pushforward_square(nu).nodes == (4.0,)

    def test_bijection(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            nu = random_atomic(rng, 4, lo=0.0)
            back = pushforward_square(pushforward_sqrt(nu))
            assert np.max(np.abs(np.array(back.nodes) - nu.nodes)) <= 1e-12
            assert back.weights == nu.weights

    def test_empty(self):
        assert len(pushforward_sqrt(AtomicMeasure())) == 0
        assert len(pushforward_square(AtomicMeasure())) == 0

    def test_negative_node_rejected(self):
        with pytest.raises(ValueError):
            pushforward_sqrt(AtomicMeasure((-1.0,), (1.0,)))


class TestCarlemanDiagnostic:
    def test_compact_support(self):
        s = [2.0 ** j for j in range(30)]
        assert carleman_diagnostic(s) == "determinate_sufficient"

    def test_factorial_growth(self):
        s = [float(math.factorial(j)) for j in range(41)]
        assert carleman_diagnostic(s) == "determinate_sufficient"

    def test_double_factorial_growth_inconclusive(self):
        s = [float(math.factorial(2 * j)) for j in range(41)]
        assert carleman_diagnostic(s) == "inconclusive"

    def test_short_sequence_inconclusive(self):
        assert carleman_diagnostic([1.0, 1.0]) == "inconclusive"

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            carleman_diagnostic([1.0, 0.0, 1.0])
