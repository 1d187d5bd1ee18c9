"""Generators and closed forms for the three case studies.

Matching Pennies, the birthday game (random draws simulated by sums of
mutually hidden choices over a cyclic group), and universal hashing (a hidden
choice among all hash functions against an adversary picking two keys).  The
hashing game is built through the general pipeline, not hand-coded, so the
equilibrium claims are exercised end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial

from .errors import SizeLimitError
from .formula import App, Atom, Connective, Equals, Formula, Quant, Var
from .matrix_game import MixedStrategy, expected_utility
from .semantic_game import (
    ABELARD,
    DEFAULT_STRATEGY_BUDGET,
    GameBuildReport,
    _build_plan,
    build_matrix,
    iter_strategy_tables,
)
from .structure import Structure, total_function_table
from .value_engine import verify_equilibrium

# ---------------------------------------------------------------------------
# Matching Pennies


def matching_pennies(n: int) -> tuple[Formula, Structure]:
    """The sentence 'Ax (Ey/x) x = y' with a bare n-element structure."""
    if n < 1:
        raise ValueError("structure size must be at least 1")
    sentence = Quant(
        "forall", "x", frozenset(), Quant("exists", "y", frozenset({"x"}), Equals(Var("x"), Var("y")))
    )
    return sentence, Structure(size=n)


# ---------------------------------------------------------------------------
# Birthday game


def cyclic_structure(n: int) -> Structure:
    """Universe 0..n-1 with one binary function `add`, addition modulo n."""
    if n < 1:
        raise ValueError("structure size must be at least 1")
    return Structure(
        size=n, functions={"add": total_function_table(n, 2, lambda a, b: (a + b) % n)}
    )


def birthday_sentence(m: int) -> Formula:
    """2m quantifiers, each hiding every earlier choice, then one flat
    disjunction asserting that some pair of the m blind sums coincides."""
    if m < 2:
        raise ValueError("the birthday game needs at least 2 draws")
    names = [f"x{k}" for k in range(2 * m)]

    def summed(k: int) -> App:
        return App("add", (Var(names[k]), Var(names[k + m])))

    disjuncts = [
        Equals(summed(i), summed(j)) for i in range(m) for j in range(i + 1, m)
    ]
    body: Formula = disjuncts[0] if len(disjuncts) == 1 else Connective("or", None, tuple(disjuncts))
    sentence = body
    for k in range(2 * m - 1, -1, -1):
        kind = "forall" if k < m else "exists"
        sentence = Quant(kind, names[k], frozenset(names[:k]), sentence)
    return sentence


def birthday_closed_form(n: int, m: int) -> tuple[Fraction, Fraction]:
    """(probability all m draws distinct, probability of at least one duplicate)."""
    if n < 1 or m < 1:
        raise ValueError("need a positive urn and sample size")
    if m > n:
        return Fraction(0), Fraction(1)
    all_distinct = Fraction(factorial(n), n**m * factorial(n - m))
    return all_distinct, 1 - all_distinct


# ---------------------------------------------------------------------------
# Universal hashing


@dataclass(frozen=True)
class HashStructureSpec:
    """Every function from `key_count` keys to `value_count` values, indexed
    lexicographically; tables map key index -> value index."""

    key_count: int
    value_count: int
    functions: tuple[tuple[int, ...], ...]

    @property
    def universe_size(self) -> int:
        return self.key_count + self.value_count


@dataclass(frozen=True)
class HashFunctionAnalysis:
    preimage_sizes: tuple[int, ...]  # ascending, one per value, empty pre-images included
    degree: int


@dataclass(frozen=True)
class HashingEquilibrium:
    eloise: MixedStrategy
    abelard: MixedStrategy
    verified: bool
    value: Fraction
    build: GameBuildReport
    minimal_degree: frozenset[int]
    adversary_pairs: frozenset[int]  # column indices realizing distinct key pairs


def hash_structure(
    key_count: int,
    value_count: int,
    max_universe: int = 64,
    max_functions: int = 4096,
) -> tuple[Structure, HashStructureSpec]:
    """Keys 0..k-1 marked by the unary relation U, values after them, and one
    unary function symbol per table (identity off the key block, which never
    matters because the sentence guards with U)."""
    if key_count < 1 or value_count < 1:
        raise ValueError("need at least one key and one value")
    if key_count + value_count > max_universe:
        raise SizeLimitError(
            f"universe of {key_count + value_count} exceeds the {max_universe} cap"
        )
    total = value_count**key_count
    if total > max_functions:
        raise SizeLimitError(f"{total} hash functions exceed the {max_functions} cap")
    tables = tuple(product(range(value_count), repeat=key_count))
    spec = HashStructureSpec(key_count=key_count, value_count=value_count, functions=tables)
    size = spec.universe_size
    functions = {}
    for i, table in enumerate(tables):
        functions[f"f{i}"] = {
            (x,): key_count + table[x] if x < key_count else x for x in range(size)
        }
    structure = Structure(
        size=size,
        relations={"U": frozenset((k,) for k in range(key_count))},
        functions=functions,
    )
    return structure, spec


def hashing_sentence(spec: HashStructureSpec) -> Formula:
    """A choice disjunction over all function indices; both universals hide the
    index; the guarded collision claim is expanded into NNF.

    With a single function there is no choice to hide, so the lone branch is
    emitted directly with empty slash sets."""

    def branch(i: int, slash: frozenset[str]) -> Formula:
        fx = App(f"f{i}", (Var("x"),))
        fy = App(f"f{i}", (Var("y"),))
        body = Connective(
            "or",
            None,
            (
                Atom("U", (Var("x"),), negated=True),
                Atom("U", (Var("y"),), negated=True),
                Equals(Var("x"), Var("y")),
                Equals(fx, fy, negated=True),
            ),
        )
        return Quant("forall", "x", slash, Quant("forall", "y", slash, body))

    count = len(spec.functions)
    if count == 1:
        return branch(0, frozenset())
    return Connective("or", "i", tuple(branch(i, frozenset({"i"})) for i in range(count)))


def function_degree(table: tuple[int, ...], value_count: int) -> HashFunctionAnalysis:
    """Pre-image sizes over all values (missed values count as 0) and their spread."""
    sizes = [0] * value_count
    for v in table:
        sizes[v] += 1
    ordered = tuple(sorted(sizes))
    return HashFunctionAnalysis(preimage_sizes=ordered, degree=ordered[-1] - ordered[0])


def lambda_step(table: tuple[int, ...], value_count: int) -> tuple[int, ...]:
    """Move one key from a largest pre-image to a smallest; identity at degree <= 1.

    Ties break to the smallest index everywhere: the first value with the
    largest pre-image, its first key, the first value with the smallest."""
    analysis = function_degree(table, value_count)
    if analysis.degree <= 1:
        return tuple(table)
    sizes = [0] * value_count
    for v in table:
        sizes[v] += 1
    v_max = sizes.index(max(sizes))
    v_min = sizes.index(min(sizes))
    k_star = table.index(v_max)
    moved = list(table)
    moved[k_star] = v_min
    return tuple(moved)


def colliding_pair_count(table: tuple[int, ...], value_count: int) -> int:
    """Ordered pairs of distinct keys the table sends to one value."""
    analysis = function_degree(table, value_count)
    return sum(z * (z - 1) for z in analysis.preimage_sizes)


def minimal_degree_indices(spec: HashStructureSpec) -> frozenset[int]:
    """Indices of tables at the least achievable degree, min(1, keys mod values)."""
    d = min(1, spec.key_count % spec.value_count)
    return frozenset(
        i
        for i, table in enumerate(spec.functions)
        if function_degree(table, spec.value_count).degree == d
    )


def adversary_pair_columns(spec: HashStructureSpec, structure: Structure) -> frozenset[int]:
    """Column indices of adversary strategies that realize two distinct keys.

    The adversary's decision points are the merged first and second universal;
    a strategy's realized play is its constant first pick c and its second-pick
    table entry at c."""
    plan = _build_plan(structure, hashing_sentence(spec), collapse=True)
    indices = plan.owner_points[ABELARD]
    chosen = []
    for j, tables in enumerate(iter_strategy_tables(plan.points, indices)):
        first = tables[0][0]
        second = tables[1][first]
        if first < spec.key_count and second < spec.key_count and first != second:
            chosen.append(j)
    return frozenset(chosen)


def hashing_equilibrium(
    spec: HashStructureSpec, max_strategies: int = DEFAULT_STRATEGY_BUDGET
) -> HashingEquilibrium:
    """The claimed equilibrium on the pipeline-built game: uniform over the
    minimal-degree indices against uniform over the distinct-key adversary
    strategies, checked against every pure deviation."""
    structure, spec = hash_structure(spec.key_count, spec.value_count)
    sentence = hashing_sentence(spec)
    build = build_matrix(structure, sentence, collapse=True, max_strategies=max_strategies)
    u = build.matrix
    chosen_rows = minimal_degree_indices(spec)
    mu = MixedStrategy.uniform_on(chosen_rows, u.m, "row")
    pair_cols = adversary_pair_columns(spec, structure)
    if pair_cols:
        nu = MixedStrategy.uniform_on(pair_cols, u.n, "column")
    else:
        # A single key admits no distinct pair: every adversary strategy is
        # losing and payoff-equivalent, so mix over all of them.
        nu = MixedStrategy.uniform(u.n, "column")
    verified = verify_equilibrium(u, mu, nu)
    return HashingEquilibrium(
        eloise=mu,
        abelard=nu,
        verified=verified,
        value=expected_utility(u, mu, nu),
        build=build,
        minimal_degree=chosen_rows,
        adversary_pairs=pair_cols,
    )
