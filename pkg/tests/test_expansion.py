import itertools
import math

import numpy as np
import pytest

from itofourier.basis import BasisSystem, Interval
from itofourier.coefficients import CoefficientTensor, coefficient_tensor
from itofourier.errors import (CompatibilityError, DomainError,
                               UnsupportedMultiplicityError)
from itofourier.expansion import (ExpansionResult, explicit_expansion,
                                  hermite_reference, truncated_expansion)
from itofourier.kernel import IntegralSpec, Weight, constant_spec
from itofourier.stochastic import gaussian_pool

UNIT = Interval(0.0, 1.0)
HALF_ROOT3 = 1.0 / (2.0 * math.sqrt(3.0))


def brute_expansion(tensor, pool):
    """Self-contained oracle: literal tuple-by-tuple bracket evaluation with
    partitions enumerated inline via combinations + recursive matching."""
    spec = tensor.spec
    k, idx = spec.k, spec.indices

    def matchings(elems):
        if not elems:
            yield ()
            return
        head, rest = elems[0], elems[1:]
        for i in range(len(rest)):
            for tail in matchings(rest[:i] + rest[i + 1:]):
                yield ((head, rest[i]),) + tail

    corrections = []
    universe = tuple(range(k))
    for r in range(1, k // 2 + 1):
        for paired in itertools.combinations(universe, 2 * r):
            singles = tuple(x for x in universe if x not in paired)
            for pairs in matchings(paired):
                corrections.append((r, pairs, singles))

    total = 0.0
    for jt in tensor.index_tuples():
        bracket = 1.0
        for level in range(k):
            bracket *= pool.values[idx[level], jt[level]]
        for r, pairs, singles in corrections:
            ok = all(idx[a] == idx[b] != 0 and jt[a] == jt[b] for a, b in pairs)
            if not ok:
                continue
            term = (-1.0) ** r
            for q in singles:
                term *= pool.values[idx[q], jt[q]]
            bracket += term
        total += float(tensor.values[jt]) * bracket
    return total


def random_instance(rng, k, allow_zero=True):
    lo = 0 if allow_zero else 1
    idx = tuple(int(x) for x in rng.integers(lo, 4, size=k))
    orders = tuple(int(x) for x in rng.integers(0, 4, size=k))
    spec = constant_spec(UNIT, idx)
    values = rng.standard_normal(tuple(p + 1 for p in orders))
    tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE,
                               orders=orders, values=values)
    pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 3, max(orders),
                         seed=int(rng.integers(1 << 30)))
    return tensor, pool


class TestTruncatedExpansion:
    def test_k1_is_linear_form(self):
        spec = constant_spec(UNIT, (1,))
        tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE, orders=(0,),
                                   values=np.array([math.sqrt(UNIT.length)]))
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 1, 0, seed=1)
        res = truncated_expansion(tensor, pool)
        assert res.value == pytest.approx(math.sqrt(UNIT.length) * pool.values[1, 0])
        assert res.terms_evaluated == 1
        assert res.orders == (0,)

    def test_k2_equal_components_hermite_bracket(self):
        spec = constant_spec(UNIT, (1, 1))
        c = 0.7
        tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE, orders=(0, 0),
                                   values=np.full((1, 1), c))
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 1, 0, seed=2)
        z = pool.values[1, 0]
        assert truncated_expansion(tensor, pool).value == pytest.approx(c * (z * z - 1.0))

    def test_zero_tensor(self):
        spec = constant_spec(UNIT, (1, 2, 1))
        tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE,
                                   orders=(1, 1, 1), values=np.zeros((2, 2, 2)))
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 2, 1, seed=3)
        assert truncated_expansion(tensor, pool).value == 0.0

    def test_k2_distinct_components_hand_expansion(self):
        spec = constant_spec(UNIT, (1, 2))
        tensor = coefficient_tensor(spec, BasisSystem.LEGENDRE, (1, 1))
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 2, 1, seed=4)
        a, b = pool.values[1]
        c, d = pool.values[2]
        hand = 0.5 * a * c + HALF_ROOT3 * a * d - HALF_ROOT3 * b * c
        assert truncated_expansion(tensor, pool).value == pytest.approx(hand, rel=1e-12)

    def test_time_component_uses_deterministic_row(self):
        # hand-computed expansion of the time-weighted single integral:
        # inner level is d-tau, so only its constant term survives
        spec = constant_spec(UNIT, (0, 1))
        tensor = coefficient_tensor(spec, BasisSystem.LEGENDRE, (1, 1))
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 1, 1, seed=5)
        z0, z1 = pool.values[1]
        expected = 0.5 * z0 + HALF_ROOT3 * z1
        assert truncated_expansion(tensor, pool).value == pytest.approx(expected, rel=1e-12)

    def test_time_components_never_pair(self):
        spec = constant_spec(UNIT, (0, 0))
        tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE, orders=(0, 0),
                                   values=np.full((1, 1), 1.0))
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 1, 0, seed=6)
        # both layers deterministic: value = zeta_0^{(0)} ** 2, no -1 correction
        assert truncated_expansion(tensor, pool).value == pytest.approx(UNIT.length)

    def test_multiplicity_cap(self):
        spec = constant_spec(UNIT, (1,) * 11)
        tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE,
                                   orders=(0,) * 11, values=np.zeros((1,) * 11))
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 1, 0, seed=7)
        with pytest.raises(UnsupportedMultiplicityError):
            truncated_expansion(tensor, pool)


class TestExplicitExpansion:
    def test_k4_two_indicator_pairs(self):
        spec = constant_spec(UNIT, (1, 1, 2, 2))
        c = 2.5
        tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE,
                                   orders=(0, 0, 0, 0), values=np.full((1, 1, 1, 1), c))
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 2, 0, seed=8)
        z, e = pool.values[1, 0], pool.values[2, 0]
        expected = c * (z * z - 1.0) * (e * e - 1.0)
        for op in (explicit_expansion, truncated_expansion):
            assert op(tensor, pool).value == pytest.approx(expected, rel=1e-12)

    def test_k5_distinct_components_plain_product(self):
        rng = np.random.default_rng(9)
        spec = constant_spec(UNIT, (1, 2, 3, 4, 5))
        orders = (1, 0, 1, 0, 1)
        values = rng.standard_normal(tuple(p + 1 for p in orders))
        tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE,
                                   orders=orders, values=values)
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 5, 1, seed=10)
        rows = [pool.values[spec.indices[l], :values.shape[l]] for l in range(5)]
        labels = [[0], [1], [2], [3], [4]]
        plain = float(np.einsum(values, list(range(5)),
                                *itertools.chain(*zip(rows, labels)), []))
        assert explicit_expansion(tensor, pool).value == pytest.approx(plain, rel=1e-12)
        assert truncated_expansion(tensor, pool).value == pytest.approx(plain, rel=1e-12)

    def test_k8_unsupported(self):
        spec = constant_spec(UNIT, (1,) * 8)
        tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE,
                                   orders=(0,) * 8, values=np.zeros((1,) * 8))
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 1, 0, seed=11)
        with pytest.raises(UnsupportedMultiplicityError):
            explicit_expansion(tensor, pool)


class TestOracleAgreement:
    def test_brute_oracle_small(self):
        rng = np.random.default_rng(12)
        for k in (1, 2, 3, 4):
            for _ in range(10):
                tensor, pool = random_instance(rng, k)
                brute = brute_expansion(tensor, pool)
                t = truncated_expansion(tensor, pool).value
                e = explicit_expansion(tensor, pool).value
                assert t == pytest.approx(brute, rel=1e-11, abs=1e-11)
                assert e == pytest.approx(brute, rel=1e-11, abs=1e-11)

    def test_routes_agree_k1_to_7(self):
        rng = np.random.default_rng(13)
        for k in range(1, 8):
            for _ in range(30):
                tensor, pool = random_instance(rng, k)
                t = truncated_expansion(tensor, pool).value
                e = explicit_expansion(tensor, pool).value
                assert abs(t - e) <= 1e-12 * max(abs(t), abs(e), 1e-9)

    def test_linearity(self):
        rng = np.random.default_rng(14)
        spec = constant_spec(UNIT, (1, 1, 2))
        orders = (2, 1, 2)
        shape = tuple(p + 1 for p in orders)
        pool = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 2, 2, seed=15)
        a, b = rng.standard_normal(shape), rng.standard_normal(shape)
        alpha, beta = 1.25, -0.75

        def val(arr):
            tensor = CoefficientTensor(spec=spec, basis=BasisSystem.LEGENDRE,
                                       orders=orders, values=arr)
            return truncated_expansion(tensor, pool).value

        assert val(alpha * a + beta * b) == pytest.approx(
            alpha * val(a) + beta * val(b), rel=1e-12)


class TestCompatibility:
    def test_mismatches_raise(self):
        spec = constant_spec(UNIT, (1, 2))
        tensor = coefficient_tensor(spec, BasisSystem.LEGENDRE, (1, 1))
        wrong_basis = gaussian_pool(UNIT, BasisSystem.HAAR, 2, 1, seed=1)
        wrong_iv = gaussian_pool(Interval(0.0, 2.0), BasisSystem.LEGENDRE, 2, 1, seed=1)
        small_m = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 1, 1, seed=1)
        small_j = gaussian_pool(UNIT, BasisSystem.LEGENDRE, 2, 0, seed=1)
        for pool in (wrong_basis, wrong_iv, small_m, small_j):
            with pytest.raises(CompatibilityError):
                truncated_expansion(tensor, pool)
            with pytest.raises(CompatibilityError):
                explicit_expansion(tensor, pool)


class TestHermiteReference:
    def test_values(self):
        assert hermite_reference(2, 1.0, 1.0) == 0.0
        assert hermite_reference(3, 0.0, 5.0) == 0.0
        assert hermite_reference(7, 1.0, 0.0) == pytest.approx(1.0 / 5040.0)
        assert hermite_reference(1, 2.5, 9.0) == 2.5
        assert hermite_reference(4, 2.0, 1.0) == pytest.approx((16 - 24 + 3) / 24.0)

    def test_guards(self):
        with pytest.raises(UnsupportedMultiplicityError):
            hermite_reference(0, 1.0, 1.0)
        with pytest.raises(UnsupportedMultiplicityError):
            hermite_reference(8, 1.0, 1.0)
        with pytest.raises(DomainError):
            hermite_reference(2, 1.0, -0.5)


class TestFiniteTruncationIdentity:
    """With equal weights and one Wiener component, every finite truncation
    collapses to the reference polynomial in the truncated (delta, variance)."""

    @pytest.mark.parametrize("basis", [BasisSystem.LEGENDRE, BasisSystem.TRIGONOMETRIC],
                             ids=lambda b: b.value)
    def test_small_orders(self, basis):
        w = Weight((1.0, 2.0))
        for k in (2, 3, 4):
            for p in (0, 1, 3):
                spec = IntegralSpec(iv=UNIT, k=k, indices=(1,) * k, weights=(w,) * k)
                spec1 = IntegralSpec(iv=UNIT, k=1, indices=(1,), weights=(w,))
                tensor = coefficient_tensor(spec, basis, (p,) * k)
                c1 = coefficient_tensor(spec1, basis, (p,)).values
                for seed in range(5):
                    pool = gaussian_pool(UNIT, basis, 1, p, seed=seed)
                    delta = float(np.dot(c1, pool.values[1]))
                    variance = float(np.dot(c1, c1))
                    want = hermite_reference(k, delta, variance)
                    got = truncated_expansion(tensor, pool).value
                    assert got == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_expansion_result_fields():
    res = ExpansionResult(value=1.5, terms_evaluated=8, orders=(1, 3))
    assert res.value == 1.5 and res.terms_evaluated == 8 and res.orders == (1, 3)
