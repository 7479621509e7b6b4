"""Local difference-of-submodular solvers: bound soundness, descent,
agreement with exhaustive minimization, and determinism."""

import itertools

import numpy as np
import pytest

from pfunnel import (
    GroundSetTooLarge,
    InvalidPermutation,
    JointPMF,
    MdsfInstance,
    MergeObjective,
    mdsf_bruteforce,
    modmod_minimize,
    modular_lower_bound,
    sfm_bruteforce,
    supsub_minimize,
)
from pfunnel.checks import random_pmf, random_submodular_oracle
from pfunnel.funnel import build_merge_instance
from pfunnel.mdsf import _singleton_gains
from pfunnel.sfm import SetFunctionOracle, modular_oracle


def all_subsets(n):
    for r in range(n + 1):
        yield from (frozenset(c) for c in itertools.combinations(range(n), r))


class TestModularLowerBound:
    def test_tight_at_empty_anchor(self):
        rng = np.random.default_rng(0)
        oracle = random_submodular_oracle(rng, 5)
        weights, tight = modular_lower_bound(oracle, frozenset(), rng.permutation(5))
        assert tight == frozenset()
        assert weights.shape == (5,)

    def test_tight_at_full_anchor(self):
        rng = np.random.default_rng(1)
        oracle = random_submodular_oracle(rng, 6)
        anchor = frozenset(range(6))
        weights, _ = modular_lower_bound(oracle, anchor, rng.permutation(6))
        assert weights.sum() == pytest.approx(oracle.evaluate(range(6)), abs=1e-9)

    def test_modular_oracle_reproduced_exactly(self):
        w = np.array([0.3, -1.0, 2.0, 0.7])
        oracle = modular_oracle(w)
        for anchor in ({1}, {0, 2}, set(), {0, 1, 2, 3}):
            anchor = frozenset(anchor)
            fill = list(sorted(anchor)) + [i for i in range(4) if i not in anchor]
            weights, _ = modular_lower_bound(oracle, anchor, fill)
            np.testing.assert_allclose(weights, w, atol=1e-12)

    def test_pointwise_lower_bound_and_anchor_tightness(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            n = int(rng.integers(2, 8))
            oracle = random_submodular_oracle(rng, n)
            anchor = frozenset(
                int(i) for i in rng.choice(n, size=int(rng.integers(0, n + 1)),
                                           replace=False))
            fill = np.concatenate([
                rng.permutation(sorted(anchor)),
                rng.permutation(sorted(set(range(n)) - anchor)),
            ]).astype(int)
            weights, _ = modular_lower_bound(oracle, anchor, fill)
            for w in all_subsets(n):
                bound = weights[list(w)].sum() if w else 0.0
                assert bound <= oracle.evaluate(w) + 1e-9
            anchor_bound = weights[list(anchor)].sum() if anchor else 0.0
            assert anchor_bound == pytest.approx(oracle.evaluate(anchor), abs=1e-9)

    def test_anchor_must_be_prefix(self):
        oracle = modular_oracle([1.0, 2.0, 3.0])
        with pytest.raises(InvalidPermutation):
            modular_lower_bound(oracle, {2}, [0, 1, 2])


class TestModularUpperBounds:
    def test_tight_at_anchor_and_above_everywhere(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            n = int(rng.integers(2, 7))
            oracle = random_submodular_oracle(rng, n)
            anchor = frozenset(
                int(i) for i in rng.choice(n, size=int(rng.integers(0, n + 1)),
                                           replace=False))
            c1, c2 = _singleton_gains(oracle, anchor)
            f_anchor = oracle.evaluate(anchor)
            full = oracle.evaluate(range(n))

            def bound1(w):
                return (f_anchor
                        - sum(c1[j] for j in anchor - w)
                        + sum(c1[j] for j in w - anchor))

            def bound2(w):
                return (f_anchor
                        - sum(c2[j] for j in anchor - w)
                        + sum(c2[j] for j in w - anchor))

            for w in all_subsets(n):
                val = oracle.evaluate(w)
                assert bound1(w) >= val - 1e-9
                assert bound2(w) >= val - 1e-9
            assert bound1(anchor) == pytest.approx(f_anchor, abs=1e-9)
            assert bound2(anchor) == pytest.approx(f_anchor, abs=1e-9)
            assert bound2(frozenset(range(n))) >= full - 1e-9


def pf_instance(pmf, lam):
    return build_merge_instance(MergeObjective(pmf, lam, "pf"))


def ib_instance(pmf, lam):
    return build_merge_instance(MergeObjective(pmf, lam, "ib"))


class TestSupSub:
    def test_identical_f_g_returns_zero(self):
        rng = np.random.default_rng(5)
        oracle = random_submodular_oracle(rng, 5)
        inst = MdsfInstance(F=oracle, G=oracle)
        w, v, trace = supsub_minimize(inst)
        assert v == pytest.approx(0.0, abs=1e-12)
        assert trace.iterates[0][1] == 0.0

    def test_d1_pf_matches_bruteforce(self, d1):
        # at lam = 0.8 every proper merge has positive cost: empty set wins
        inst = pf_instance(d1, 0.8)
        w, v, _ = supsub_minimize(inst)
        bw, bv = mdsf_bruteforce(inst)
        assert (bw, bv) == (frozenset(), 0.0)
        assert w == frozenset()
        assert v == pytest.approx(bv, abs=1e-12)

    def test_d3_ib_finds_equivalent_pair(self, d3):
        # independent enumeration: global minimum at {0, 2}, value
        # -0.04373732930498608, with no other negative set below it
        inst = ib_instance(d3, 0.1)
        bw, bv = mdsf_bruteforce(inst)
        assert bw == frozenset({0, 2})
        assert bv == pytest.approx(-0.04373732930498608, abs=1e-12)
        w, v, _ = supsub_minimize(inst, rng_seed=0)
        assert w == frozenset({0, 2})
        assert v == pytest.approx(bv, abs=1e-12)

    def test_random_instances_bounded_and_descending(self):
        rng = np.random.default_rng(6)
        for t in range(40):
            pmf = random_pmf(rng, max_x=6)
            lam = float(rng.random())
            inst = pf_instance(pmf, lam) if t % 2 else ib_instance(pmf, lam)
            w, v, trace = supsub_minimize(inst, rng_seed=t)
            _, brute = mdsf_bruteforce(inst)
            assert brute - 1e-9 <= v <= 1e-12
            seq = [val for _, val in trace.iterates]
            assert all(b <= a + 1e-12 for a, b in zip(seq, seq[1:]))
            assert v == seq[-1]

    def test_deterministic_for_fixed_seed(self, d3):
        inst = ib_instance(d3, 0.3)
        first = supsub_minimize(inst, rng_seed=11)
        second = supsub_minimize(inst, rng_seed=11)
        assert first[0] == second[0]
        assert first[1] == second[1]
        assert [w for w, _ in first[2].iterates] == [w for w, _ in second[2].iterates]

    def test_degrades_gracefully_when_sfm_fails(self, d3, monkeypatch):
        # a non-converged inner solve becomes a trace warning, not a failure
        import pfunnel.mdsf as mdsf_mod
        from pfunnel.errors import NotConverged

        real = mdsf_mod.min_norm_point
        calls = {"n": 0}

        def flaky(oracle, *args, **kwargs):
            calls["n"] += 1
            if calls["n"] == 1:
                w, v = real(oracle, *args, **kwargs)
                raise NotConverged("forced", minimizer=w, value=v, iterations=1)
            return real(oracle, *args, **kwargs)

        monkeypatch.setattr(mdsf_mod, "min_norm_point", flaky)
        inst = ib_instance(d3, 0.1)
        w, v, trace = supsub_minimize(inst, rng_seed=0)
        assert trace.warnings and "degraded" in trace.warnings[0]
        assert w == frozenset({0, 2})
        seq = [val for _, val in trace.iterates]
        assert all(b <= a + 1e-12 for a, b in zip(seq, seq[1:]))


class TestModMod:
    def test_modular_instance_solved_in_one_step(self):
        f_w = np.array([1.0, -0.5, 2.0, -1.0])
        g_w = np.array([0.5, 0.5, 0.5, 0.5])
        inst = MdsfInstance(F=modular_oracle(f_w), G=modular_oracle(g_w))
        w, v, trace = modmod_minimize(inst)
        bw, bv = mdsf_bruteforce(inst)
        assert w == bw
        assert v == pytest.approx(bv, abs=1e-12)
        assert len(trace.iterates) <= 2

    def test_d1_pf_bounded_below_by_bruteforce(self, d1):
        inst = pf_instance(d1, 0.8)
        _, v, _ = modmod_minimize(inst)
        _, bv = mdsf_bruteforce(inst)
        assert v >= bv - 1e-12
        assert v <= 1e-12

    def test_traces_nonincreasing_on_random_instances(self):
        rng = np.random.default_rng(13)
        for t in range(40):
            pmf = random_pmf(rng, max_x=6)
            lam = float(rng.random())
            inst = pf_instance(pmf, lam) if t % 2 else ib_instance(pmf, lam)
            _, v, trace = modmod_minimize(inst, rng_seed=t)
            seq = [val for _, val in trace.iterates]
            assert all(b <= a + 1e-12 for a, b in zip(seq, seq[1:]))
            _, brute = mdsf_bruteforce(inst)
            assert brute - 1e-9 <= v <= 1e-12


class TestBruteForce:
    def test_zero_g_reduces_to_sfm(self):
        rng = np.random.default_rng(14)
        oracle = random_submodular_oracle(rng, 6)
        zero = modular_oracle(np.zeros(6))
        inst = MdsfInstance(F=oracle, G=zero)
        assert mdsf_bruteforce(inst) == sfm_bruteforce(oracle)

    def test_identical_columns_full_set_for_bottleneck(self):
        # all released columns identical: merging is free in leakage, so the
        # rate-shedding (bottleneck) objective is exhaustively minimized by
        # merging everything
        pmf = JointPMF.from_joint(["a", "b"], ["u", "v", "w", "z"],
                                  np.tile([[0.15], [0.10]], (1, 4)))
        inst = ib_instance(pmf, 0.5)
        w, v = mdsf_bruteforce(inst)
        assert w == frozenset(range(4))
        assert v < 0

    def test_single_element_ground_set(self):
        inst = MdsfInstance(F=modular_oracle([2.0]), G=modular_oracle([1.0]))
        assert mdsf_bruteforce(inst) == (frozenset(), 0.0)

    def test_cap(self):
        big = SetFunctionOracle(23, lambda s: 0.0)
        with pytest.raises(GroundSetTooLarge):
            mdsf_bruteforce(MdsfInstance(F=big, G=big))
