import random
from fractions import Fraction

import pytest

from ifgames.errors import SizeLimitError
from ifgames.linalg import solve_linear_system
from ifgames.matrix_game import GameMatrix, MixedStrategy, tallies
from ifgames.value_engine import (
    METHOD_BALANCED,
    METHOD_BALANCED_SUBMATRIX,
    METHOD_LP,
    METHOD_SUPPORT_ENUMERATION,
    METHOD_TRIVIAL_LOSS,
    METHOD_TRIVIAL_WIN,
    balanced_submatrix_certificate,
    balanced_value,
    detect_trivial,
    solve_by_support_enumeration,
    solve_value,
    submatrix_lower_bound,
    uniform_bounds,
    verify_equilibrium,
)

from conftest import (
    M4_LOSS,
    M4_MIXED,
    M4_WIN,
    M5X6_A,
    M5X6_B,
    circulant_matrix,
    identity_matrix,
    random_matrix,
)


class TestSolveValue:
    def test_losing_4x4(self):
        assert solve_value(M4_LOSS).value == 0

    def test_winning_4x4(self):
        assert solve_value(M4_WIN).value == 1

    def test_mixed_4x4_with_unique_optimum(self):
        report = solve_value(M4_MIXED)
        assert report.value == Fraction(2, 5)
        assert report.eloise.probs == (
            Fraction(2, 5),
            Fraction(1, 5),
            Fraction(1, 5),
            Fraction(1, 5),
        )

    def test_worked_5x6_variants(self):
        assert solve_value(M5X6_B).value == Fraction(3, 7)
        assert solve_value(M5X6_A).value == Fraction(1, 3)

    def test_identity_one_over_n(self):
        for n in range(1, 7):
            assert solve_value(identity_matrix(n)).value == Fraction(1, n)

    def test_reports_carry_method_and_verify(self):
        report = solve_value(M5X6_B)
        assert report.method == METHOD_LP
        assert verify_equilibrium(M5X6_B, report.eloise, report.abelard)


class TestSupportEnumerationOracle:
    def test_mixed_4x4(self):
        assert solve_by_support_enumeration(M4_MIXED).value == Fraction(2, 5)

    def test_single_winning_cell(self):
        report = solve_by_support_enumeration(GameMatrix([[1]]))
        assert report.value == 1
        assert report.method == METHOD_SUPPORT_ENUMERATION

    def test_size_cap(self):
        with pytest.raises(SizeLimitError):
            solve_by_support_enumeration(identity_matrix(8))

    def test_matches_lp_on_random_corpus(self, rng):
        for _ in range(60):
            u = random_matrix(rng, 6, 6)
            assert solve_value(u).value == solve_by_support_enumeration(u).value


class TestUniformBounds:
    def test_worked_5x6(self):
        assert uniform_bounds(M5X6_A) == (Fraction(1, 5), Fraction(1, 2))

    def test_identity(self):
        assert uniform_bounds(identity_matrix(4)) == (Fraction(1, 4), Fraction(1, 4))

    def test_all_ones(self):
        assert uniform_bounds(GameMatrix([[1, 1, 1], [1, 1, 1]])) == (1, 1)

    def test_sandwich_on_random_corpus(self, rng):
        for _ in range(100):
            u = random_matrix(rng, 8, 8)
            floor, ceil = uniform_bounds(u)
            assert floor <= solve_value(u).value <= ceil


class TestBalancedValue:
    def test_identity(self):
        for n in (1, 3, 5):
            report = balanced_value(identity_matrix(n))
            assert report is not None
            assert report.value == Fraction(1, n)
            assert report.method == METHOD_BALANCED
            assert report.eloise.probs == tuple(Fraction(1, n) for _ in range(n))

    def test_unbalanced_absent(self):
        assert balanced_value(M5X6_A) is None

    def test_all_ones(self):
        report = balanced_value(GameMatrix([[1, 1], [1, 1]]))
        assert report is not None and report.value == 1

    def test_circulant_corpus_matches_lp(self, rng):
        for _ in range(40):
            u = circulant_matrix(rng, 8)
            report = balanced_value(u)
            assert report is not None
            assert report.value == solve_value(u).value
            assert verify_equilibrium(u, report.eloise, report.abelard)


class TestSubmatrixLowerBound:
    def test_winning_row_found(self):
        bound, rows = submatrix_lower_bound(M4_WIN, "exhaustive")
        assert bound == 1 and rows == frozenset({3})

    def test_identity_needs_all_rows(self):
        bound, rows = submatrix_lower_bound(identity_matrix(3), "exhaustive")
        assert bound == Fraction(1, 3) and rows == frozenset({0, 1, 2})

    def test_zero_row(self):
        assert submatrix_lower_bound(GameMatrix([[0, 0]]), "exhaustive")[0] == 0

    def test_exhaustive_size_cap(self):
        big = GameMatrix([[1] * 2 for _ in range(16)])
        with pytest.raises(SizeLimitError):
            submatrix_lower_bound(big, "exhaustive")
        bound, _ = submatrix_lower_bound(big, "greedy")
        assert bound == 1

    def test_bounds_value_on_random_corpus(self, rng):
        for _ in range(60):
            u = random_matrix(rng, 10, 8)
            value = solve_value(u).value
            bound, _ = submatrix_lower_bound(u, "exhaustive")
            assert bound <= value
            greedy_bound, _ = submatrix_lower_bound(u, "greedy")
            assert greedy_bound <= bound


class TestBalancedSubmatrixCertificate:
    def test_balanced_game_uses_all_rows(self):
        report = balanced_submatrix_certificate(identity_matrix(3))
        assert report is not None
        assert report.value == Fraction(1, 3)
        assert report.method == METHOD_BALANCED_SUBMATRIX
        assert report.eloise.probs == (Fraction(1, 3),) * 3

    def test_duplicated_identity_row(self):
        u = GameMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 1]])
        report = balanced_submatrix_certificate(u)
        assert report is not None
        assert report.value == Fraction(1, 3)
        assert verify_equilibrium(u, report.eloise, report.abelard)

    def test_worked_5x6_never_unverified(self):
        for u in (M5X6_A, M5X6_B):
            report = balanced_submatrix_certificate(u)
            if report is not None:
                assert verify_equilibrium(u, report.eloise, report.abelard)
                assert report.value == solve_value(u).value

    def test_sound_on_random_corpus(self, rng):
        hits = 0
        for _ in range(80):
            u = random_matrix(rng, 7, 7)
            report = balanced_submatrix_certificate(u)
            if report is not None:
                hits += 1
                assert report.value == solve_value(u).value
        assert hits > 0

    def test_greedy_search_above_the_exhaustive_cap(self):
        u = GameMatrix([[1, 1, 1]] * 17)  # 17 candidate rows forces the greedy path
        report = balanced_submatrix_certificate(u)
        assert report is not None and report.value == 1

    def test_greedy_may_come_up_empty_but_never_lies(self):
        report = balanced_submatrix_certificate(identity_matrix(17))
        if report is not None:
            assert report.value == Fraction(1, 17)


class TestVerifyEquilibrium:
    def test_uniform_pair_on_identity(self):
        u = identity_matrix(2)
        assert verify_equilibrium(
            u, MixedStrategy.uniform(2, "row"), MixedStrategy.uniform(2, "column")
        )

    def test_point_mass_is_exploitable(self):
        u = identity_matrix(2)
        assert not verify_equilibrium(
            u, MixedStrategy.point_mass(2, 0, "row"), MixedStrategy.uniform(2, "column")
        )

    def test_single_winning_cell(self):
        u = GameMatrix([[1]])
        assert verify_equilibrium(
            u, MixedStrategy.point_mass(1, 0, "row"), MixedStrategy.point_mass(1, 0, "column")
        )


class TestDetectTrivial:
    def test_all_zero_column_means_loss(self):
        report = detect_trivial(M4_LOSS)
        assert report is not None
        assert (report.value, report.method) == (0, METHOD_TRIVIAL_LOSS)

    def test_all_ones_row_means_win(self):
        report = detect_trivial(M4_WIN)
        assert report is not None
        assert (report.value, report.method) == (1, METHOD_TRIVIAL_WIN)

    def test_undetermined_absent(self):
        assert detect_trivial(identity_matrix(2)) is None


class TestDuality:
    def test_primal_equals_dual_on_worked_games(self):
        for u in (M4_LOSS, M4_WIN, M4_MIXED, M5X6_A, M5X6_B):
            # The opponent's own maximization problem is the game on the
            # complemented transpose; by minimax the two optima are complementary.
            assert solve_value(u).value + solve_value(u.complement().transpose()).value == 1

    def test_corpus(self, rng):
        for _ in range(120):
            u = random_matrix(rng, 10, 12)
            report = solve_value(u)
            dual = solve_value(u.complement().transpose())
            assert report.value + dual.value == 1
            floor, ceil = uniform_bounds(u)
            assert floor <= report.value <= ceil
            assert verify_equilibrium(u, report.eloise, report.abelard)
            assert (report.value == 1) == (u.n in set(u.row_sums()))
            assert (report.value == 0) == (0 in u.col_sums())


class TestEqualitySystem:
    def test_worked_equalizing_system_is_infeasible(self):
        # Forcing every column of the worked 5x6 analysis to the same payoff v
        # (instead of at-least-v) together with total probability 1 admits no
        # solution, even before sign constraints.
        rows = [
            [1, 1, 0, 1, 0, -1],
            [0, 0, 1, 1, 0, -1],
            [0, 0, 1, 0, 1, -1],
            [0, 1, 1, 0, 0, -1],
            [0, 0, 0, 1, 1, -1],
            [1, 0, 0, 0, 1, -1],
            [1, 1, 1, 1, 1, 0],
        ]
        assert solve_linear_system(rows, [0] * 6 + [1]) is None

    def test_solver_finds_unique_solutions(self):
        solved = solve_linear_system([[1, 1], [1, -1]], [3, 1])
        assert solved == ([Fraction(2), Fraction(1)], True)

    def test_underdetermined_flagged(self):
        solved = solve_linear_system([[1, 1]], [2])
        assert solved is not None and solved[1] is False
