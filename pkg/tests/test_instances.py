import itertools
import json
from fractions import Fraction

import pytest

from avalg.instances import (
    FiniteAlgebra,
    algebra_from_json,
    algebra_to_json,
    build_instance,
    central_multiplier,
    check_averaging,
    check_reynolds,
    decomposition_is_graded,
    group_average,
    is_idempotent,
    product_algebra,
    square_zero_derivation,
    standard_fixtures,
    super_projection,
    truncated_polynomial_algebra,
)

BASIS2, MUL2 = truncated_polynomial_algebra(2)  # k[y]/(y^2), basis 1, y


def dual_numbers_with(op):
    return FiniteAlgebra(BASIS2, MUL2, op)


class TestBuilders:
    def test_central_multiplier_dual_numbers(self):
        alg = build_instance("CentralMultiplier", basis=BASIS2, mul=MUL2, a=[0, 1])
        # multiplication by y sends 1 to y and y to 0
        assert alg.operator(alg.basis_vector(0)) == alg.basis_vector(1)
        assert alg.operator(alg.basis_vector(1)) == alg.zero
        assert check_averaging(alg) is None

    def test_group_algebra_z2(self):
        alg = build_instance("GroupAverage", table=[[0, 1], [1, 0]], labels=("e", "g"))
        everything = alg.add(alg.basis_vector(0), alg.basis_vector(1))
        assert alg.operator(alg.basis_vector(0)) == everything
        assert alg.operator(alg.basis_vector(1)) == everything
        assert check_averaging(alg) is None

    def test_permutation_action_average(self):
        basis, mul = product_algebra(3)
        cycle = (1, 2, 0)
        square = (2, 0, 1)
        alg = build_instance(
            "GroupAverage", basis=basis, mul=mul, perms=[(0, 1, 2), cycle, square]
        )
        ones = tuple(Fraction(1) for _ in range(3))
        assert alg.operator(alg.basis_vector(0)) == ones
        assert check_averaging(alg) is None

    def test_super_projection(self):
        alg = build_instance("SuperProjection", basis=BASIS2, mul=MUL2, grading=(0, 1))
        assert check_averaging(alg) is None
        assert is_idempotent(alg)

    def test_square_zero_derivation(self):
        basis3, mul3 = truncated_polynomial_algebra(3, "u")
        alg = build_instance(
            "SquareZeroDerivation",
            basis=basis3,
            mul=mul3,
            d=[[0, 0, 0], [0, 0, 1], [0, 0, 0]],
        )
        assert check_averaging(alg) is None

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            build_instance("Bogus")


class TestBuilderValidation:
    def test_non_central_element_rejected(self):
        # upper triangular 2x2 span of 1 and the nilpotent E12... use the
        # noncommutative semigroup algebra of left-zero multiplication
        basis = ("p", "q")
        mul = [
            [[1, 0], [0, 1]],  # p*p = p, p*q = q
            [[1, 0], [0, 1]],  # q*p = p, q*q = q  (right entries act as identity)
        ]
        with pytest.raises(ValueError, match="central"):
            central_multiplier(basis, mul, [1, 0])

    def test_non_automorphism_action_rejected(self):
        with pytest.raises(ValueError, match="automorphism"):
            group_average(BASIS2, MUL2, [(0, 1), (1, 0)])

    def test_action_must_be_a_group(self):
        basis, mul = product_algebra(3)
        with pytest.raises(ValueError, match="closed|identity"):
            group_average(basis, mul, [(0, 1, 2), (1, 2, 0), (1, 2, 0)][1:])

    def test_bad_grading_rejected(self):
        with pytest.raises(ValueError):
            super_projection(BASIS2, MUL2, (1, 0))  # 1 would be odd: 1*1=1 breaks

    def test_nonzero_square_rejected(self):
        with pytest.raises(ValueError, match="d\\^2"):
            square_zero_derivation(BASIS2, MUL2, [[0, 1], [1, 0]])

    def test_leibniz_failure_rejected(self):
        with pytest.raises(ValueError, match="Leibniz"):
            square_zero_derivation(BASIS2, MUL2, [[0, 1], [0, 0]])

    def test_associativity_checked_on_construction(self):
        basis = ("a", "b")
        mul = [
            [[0, 1], [1, 0]],
            [[1, 0], [0, 0]],
        ]
        with pytest.raises(ValueError, match="associative"):
            FiniteAlgebra(basis, mul, [[0, 0], [0, 0]])


class TestChecks:
    def test_all_fixtures_average(self):
        for name, alg in standard_fixtures().items():
            assert check_averaging(alg) is None, name

    def test_identity_operator_passes(self):
        ident = [[1, 0], [0, 1]]
        assert check_averaging(dual_numbers_with(ident)) is None

    def test_swap_operator_fails_with_real_counterexample(self):
        swap = dual_numbers_with([[0, 1], [1, 0]])
        pair = check_averaging(swap)
        assert pair is not None
        i, j = pair
        ei, ej = swap.basis_vector(i), swap.basis_vector(j)
        pi, pj = swap.operator(ei), swap.operator(ej)
        lhs = swap.multiply(pi, pj)
        assert lhs != swap.operator(swap.multiply(ei, pj)) or lhs != swap.operator(
            swap.multiply(pi, ej)
        )

    def test_zero_operator_reynolds(self):
        zero = dual_numbers_with([[0, 0], [0, 0]])
        assert check_reynolds(zero) is None
        assert check_averaging(zero) is None

    def test_idempotent_averaging_is_reynolds(self):
        for name, alg in standard_fixtures().items():
            if is_idempotent(alg):
                assert check_reynolds(alg) is None, name

    def test_nonidempotent_averaging_failing_reynolds_found_by_search(self):
        # brute force over central multipliers on k[y]/(y^k)
        found = None
        for k in (2, 3, 4):
            basis, mul = truncated_polynomial_algebra(k)
            for coeffs in itertools.product((0, 1), repeat=k):
                alg = central_multiplier(basis, mul, list(coeffs))
                if check_averaging(alg) is None and not is_idempotent(alg):
                    if check_reynolds(alg) is not None:
                        found = (k, coeffs, check_reynolds(alg))
                        break
            if found:
                break
        assert found is not None
        k, coeffs, pair = found
        # first hit: multiplication by 1 + y on the dual numbers
        assert k == 2 and coeffs == (1, 1)
        basis, mul = truncated_polynomial_algebra(k)
        alg = central_multiplier(basis, mul, list(coeffs))
        i, j = pair
        f, g = alg.basis_vector(i), alg.basis_vector(j)
        pf, pg = alg.operator(f), alg.operator(g)
        df = alg.add(f, alg.scale(-1, pf))
        dg = alg.add(g, alg.scale(-1, pg))
        lhs = alg.operator(alg.multiply(f, g))
        rhs = alg.add(alg.multiply(pf, pg), alg.operator(alg.multiply(df, dg)))
        assert lhs != rhs

    def test_nilpotent4_central_multiplier_fails_reynolds(self):
        alg = standard_fixtures()["central_nilpotent4"]
        assert check_averaging(alg) is None
        assert not is_idempotent(alg)
        assert check_reynolds(alg) is not None


def _enumerated_idempotents(basis, mul, entries=(0, 1)):
    dim = len(basis)
    for flat in itertools.product(entries, repeat=dim * dim):
        op = [list(flat[i * dim:(i + 1) * dim]) for i in range(dim)]
        alg = FiniteAlgebra(basis, mul, op)
        if is_idempotent(alg):
            yield alg


class TestStructure:
    def test_idempotent_averaging_iff_graded_dim2(self):
        for basis, mul in (truncated_polynomial_algebra(2), product_algebra(2)):
            for alg in _enumerated_idempotents(basis, mul):
                assert (check_averaging(alg) is None) == decomposition_is_graded(alg)

    def test_idempotent_averaging_iff_graded_dim3(self):
        basis, mul = truncated_polynomial_algebra(3)
        count = 0
        for alg in _enumerated_idempotents(basis, mul):
            count += 1
            assert (check_averaging(alg) is None) == decomposition_is_graded(alg)
        assert count > 10

    def test_idempotent_averaging_iff_reynolds(self):
        for basis, mul in (truncated_polynomial_algebra(2), product_algebra(2)):
            for alg in _enumerated_idempotents(basis, mul, entries=(0, 1, -1)):
                if not is_idempotent(alg):
                    continue
                assert (check_averaging(alg) is None) == (check_reynolds(alg) is None)

    def test_unit_fixed_implies_idempotent(self):
        # averaging operators fixing the unit are projections
        for basis, mul in (truncated_polynomial_algebra(2), product_algebra(2)):
            unit = FiniteAlgebra(basis, mul, [[0] * len(basis)] * len(basis)).unit()
            assert unit is not None
            for flat in itertools.product((0, 1), repeat=len(basis) ** 2):
                dim = len(basis)
                op = [list(flat[i * dim:(i + 1) * dim]) for i in range(dim)]
                alg = FiniteAlgebra(basis, mul, op)
                if check_averaging(alg) is None and alg.operator(unit) == unit:
                    assert is_idempotent(alg)


class TestJson:
    def test_round_trip(self, tmp_path):
        alg = standard_fixtures()["central_nilpotent4"]
        data = algebra_to_json(alg)
        path = tmp_path / "alg.json"
        path.write_text(json.dumps(data))
        loaded = algebra_from_json(json.loads(path.read_text()))
        assert loaded == alg

    def test_rationals_as_strings(self):
        alg = central_multiplier(BASIS2, MUL2, ["1/2", 0])
        data = algebra_to_json(alg)
        assert data["op"][0][0] == "1/2"
        assert algebra_from_json(data) == alg

    def test_dim_mismatch(self):
        data = algebra_to_json(standard_fixtures()["central_dual_numbers"])
        data["dim"] = 3
        with pytest.raises(ValueError):
            algebra_from_json(data)
