"""Exact strategy tables for the three-colour anti-agreement game.

Two referees hand Alice and Bob one colour each, drawn uniformly from
{red, green, blue} = {0, 1, 2}.  Alice answers x, Bob answers y, and the
round is won when

    a != x  and  x != y  and  y != b.

Everything in this module is exact: probabilities are `fractions.Fraction`
throughout, and table equality means equality of every entry.  Float-valued
tables (produced by the quantum simulation) reuse the same container but are
validated with tolerances instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

RED, GREEN, BLUE = 0, 1, 2

#: Hard ceiling on brute-force search spaces (deterministic boxes/strategies).
ENUMERATION_GUARD = 10**9

#: Row-sum slack allowed for float-valued tables (exact tables get none).
FLOAT_ROW_TOL = 1e-9


def next_colour(c: int) -> int:
    """The colour one step forward in the red -> green -> blue cycle."""
    return (c + 1) % 3


def prev_colour(c: int) -> int:
    """The colour one step backward in the red -> green -> blue cycle."""
    return (c + 2) % 3


def rgb_predicate(a: int, b: int, x: int, y: int) -> bool:
    """Winning condition: neighbours in the chain a-x-y-b never agree."""
    return a != x and x != y and y != b


def _coerce(p):
    # Exact entries stay exact; only genuine floats stay floats.
    if isinstance(p, float):
        return p
    return Fraction(p)


@dataclass(frozen=True)
class StrategyTable:
    """A conditional distribution P(x, y | a, b) over finite alphabets.

    ``shape`` is (|A|, |B|, |X|, |Y|); symbols are 0-based.  ``probs`` is the
    dense row-major tuple of entries.  Exact tables (every entry a Fraction)
    must have every row summing to 1 exactly; float tables within 1e-9.
    """

    shape: tuple[int, int, int, int]
    probs: tuple

    def __post_init__(self):
        na, nb, nx, ny = self.shape
        if min(self.shape) < 1:
            raise ValueError(f"alphabet sizes must be positive, got {self.shape}")
        if len(self.probs) != na * nb * nx * ny:
            raise ValueError(
                f"need {na * nb * nx * ny} entries for shape {self.shape}, "
                f"got {len(self.probs)}"
            )
        exact = self.is_exact
        for a in range(na):
            for b in range(nb):
                row = self.row(a, b)
                total = sum(row.values())
                if exact:
                    if total != 1:
                        raise ValueError(f"row ({a},{b}) sums to {total}, not 1")
                    if any(p < 0 or p > 1 for p in row.values()):
                        raise ValueError(f"row ({a},{b}) has an entry outside [0,1]")
                else:
                    if abs(total - 1) > FLOAT_ROW_TOL:
                        raise ValueError(f"row ({a},{b}) sums to {total!r}, not 1")
                    if any(p < -1e-12 or p > 1 + 1e-9 for p in row.values()):
                        raise ValueError(f"row ({a},{b}) has an entry outside [0,1]")

    @property
    def is_exact(self) -> bool:
        return not any(isinstance(p, float) for p in self.probs)

    @classmethod
    def from_function(cls, shape, fn) -> "StrategyTable":
        """Build a table from fn(a, b, x, y) -> probability."""
        na, nb, nx, ny = shape
        probs = tuple(
            _coerce(fn(a, b, x, y))
            for a in range(na)
            for b in range(nb)
            for x in range(nx)
            for y in range(ny)
        )
        return cls(tuple(shape), probs)

    @classmethod
    def from_dict(cls, shape, entries: Mapping) -> "StrategyTable":
        """Build a table from {(a, b, x, y): p}; missing tuples are zero."""
        return cls.from_function(shape, lambda a, b, x, y: entries.get((a, b, x, y), 0))

    def _index(self, a, b, x, y) -> int:
        na, nb, nx, ny = self.shape
        for value, size, name in ((a, na, "a"), (b, nb, "b"), (x, nx, "x"), (y, ny, "y")):
            if not 0 <= value < size:
                raise ValueError(f"symbol {name}={value} outside range(0, {size})")
        return ((a * nb + b) * nx + x) * ny + y

    def prob(self, a: int, b: int, x: int, y: int):
        """The entry P(x, y | a, b)."""
        return self.probs[self._index(a, b, x, y)]

    def row(self, a: int, b: int) -> dict:
        """Nonzero output probabilities for one input pair, as {(x, y): p}."""
        _, _, nx, ny = self.shape
        entries = {
            (x, y): self.probs[self._index(a, b, x, y)]
            for x in range(nx)
            for y in range(ny)
        }
        return {xy: p for xy, p in entries.items() if p != 0}

    def support(self, a: int, b: int) -> set:
        """Output pairs with nonzero probability for one input pair."""
        return set(self.row(a, b))

    def inputs(self):
        na, nb = self.shape[:2]
        return itertools.product(range(na), range(nb))


@dataclass(frozen=True)
class Game:
    """A two-player game: alphabets, winning predicate, input distribution."""

    shape: tuple[int, int, int, int]
    predicate: Callable[[int, int, int, int], bool]
    input_dist: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        if min(self.shape) < 1:
            raise ValueError(f"alphabet sizes must be positive, got {self.shape}")
        total = sum(self.input_dist.values())
        if total != 1:
            raise ValueError(f"input distribution sums to {total}, not 1")
        if any(w < 0 for w in self.input_dist.values()):
            raise ValueError("input distribution has a negative weight")


def rgb_game() -> Game:
    """The colour game: uniform inputs over 3 x 3, anti-agreement predicate."""
    weight = Fraction(1, 9)
    dist = {(a, b): weight for a in range(3) for b in range(3)}
    return Game((3, 3, 3, 3), rgb_predicate, dist)


def chsh_game() -> Game:
    """The binary XOR game (x ^ y must equal a & b), uniform inputs."""
    weight = Fraction(1, 4)
    dist = {(a, b): weight for a in range(2) for b in range(2)}
    return Game((2, 2, 2, 2), lambda a, b, x, y: (x ^ y) == (a & b), dist)


def win_probability(table: StrategyTable, game: Game):
    """Expected winning probability of a strategy table in a game.

    Exact when the table is exact; float otherwise.
    """
    if table.shape != game.shape:
        raise ValueError(f"table shape {table.shape} != game shape {game.shape}")
    total = Fraction(0)
    for (a, b), weight in game.input_dist.items():
        if weight == 0:
            continue
        mass = sum(
            p for (x, y), p in table.row(a, b).items() if game.predicate(a, b, x, y)
        )
        total += weight * mass
    return total


def deterministic_strategy(f_a, f_b, shape=(3, 3, 3, 3)) -> StrategyTable:
    """The 0/1 table where Alice plays f_a[a] and Bob plays f_b[b]."""
    return StrategyTable.from_function(
        shape, lambda a, b, x, y: 1 if (x == f_a[a] and y == f_b[b]) else 0
    )


_CROSS_PAIRS = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))


def _check_unit(name, value) -> Fraction:
    value = Fraction(value)
    if not 0 <= value <= 1:
        raise ValueError(f"{name} = {value} outside [0, 1]")
    return value


@dataclass(frozen=True)
class WinningFamilyParams:
    """The 15 free parameters of the perfectly-winning no-signalling-free family.

    Same-colour rows (a = b = u) put mass p_u on (u+1, u-1) and 1 - p_u on
    (u-1, u+1).  Different-colour rows (a, b) = (u, v) with third colour w put
    p_cross[(u, v)] on (w, u), q_cross[(u, v)] on (v, w), and the remainder on
    (v, u).  Any assignment with every value in [0, 1] and
    p_cross + q_cross <= 1 per pair wins the colour game with certainty.
    """

    p0: Fraction
    p1: Fraction
    p2: Fraction
    p_cross: Mapping[tuple[int, int], Fraction] = field(hash=False)
    q_cross: Mapping[tuple[int, int], Fraction] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "p0", _check_unit("p0", self.p0))
        object.__setattr__(self, "p1", _check_unit("p1", self.p1))
        object.__setattr__(self, "p2", _check_unit("p2", self.p2))
        for name, table in (("p_cross", self.p_cross), ("q_cross", self.q_cross)):
            if set(table) != set(_CROSS_PAIRS):
                raise ValueError(f"{name} must be keyed by the 6 ordered colour pairs")
        p_cross = {uv: _check_unit(f"p_cross{uv}", p) for uv, p in self.p_cross.items()}
        q_cross = {uv: _check_unit(f"q_cross{uv}", q) for uv, q in self.q_cross.items()}
        for uv in _CROSS_PAIRS:
            if p_cross[uv] + q_cross[uv] > 1:
                raise ValueError(f"p_cross{uv} + q_cross{uv} exceeds 1")
        object.__setattr__(self, "p_cross", p_cross)
        object.__setattr__(self, "q_cross", q_cross)

    @property
    def p_same(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.p0, self.p1, self.p2)

    @classmethod
    def constant(cls, value) -> "WinningFamilyParams":
        """All 15 parameters set to the same value."""
        v = Fraction(value)
        return cls(v, v, v, dict.fromkeys(_CROSS_PAIRS, v), dict.fromkeys(_CROSS_PAIRS, v))

    @classmethod
    def from_vector(cls, values: Sequence) -> "WinningFamilyParams":
        """Inverse of as_vector (canonical order p0 p1 p2, p_uv, q_uv)."""
        if len(values) != 15:
            raise ValueError(f"need 15 parameters, got {len(values)}")
        p0, p1, p2 = values[:3]
        p_cross = dict(zip(_CROSS_PAIRS, values[3:9]))
        q_cross = dict(zip(_CROSS_PAIRS, values[9:15]))
        return cls(p0, p1, p2, p_cross, q_cross)

    def as_vector(self) -> tuple:
        """The 15 parameters in canonical order p0 p1 p2, p_uv, q_uv."""
        return (
            (self.p0, self.p1, self.p2)
            + tuple(self.p_cross[uv] for uv in _CROSS_PAIRS)
            + tuple(self.q_cross[uv] for uv in _CROSS_PAIRS)
        )


def parameter_names() -> tuple[str, ...]:
    """Canonical names matching WinningFamilyParams.as_vector order."""
    return (
        ("p0", "p1", "p2")
        + tuple(f"p{u}{v}" for u, v in _CROSS_PAIRS)
        + tuple(f"q{u}{v}" for u, v in _CROSS_PAIRS)
    )


def family_strategy(params: WinningFamilyParams) -> StrategyTable:
    """The exact strategy table realized by a family parameter assignment."""
    entries: dict[tuple[int, int, int, int], Fraction] = {}
    for u in range(3):
        entries[(u, u, next_colour(u), prev_colour(u))] = params.p_same[u]
        entries[(u, u, prev_colour(u), next_colour(u))] = 1 - params.p_same[u]
    for u, v in _CROSS_PAIRS:
        w = 3 - u - v  # the third colour
        p, q = params.p_cross[(u, v)], params.q_cross[(u, v)]
        entries[(u, v, w, u)] = p
        entries[(u, v, v, w)] = q
        entries[(u, v, v, u)] = 1 - p - q
    return StrategyTable.from_dict((3, 3, 3, 3), entries)


def rgb0() -> StrategyTable:
    """The deterministic winning box: x = a+1; y = a if b = a-1, else a-1."""
    def rule(a, b, x, y):
        wanted_y = a if b == prev_colour(a) else prev_colour(a)
        return 1 if (x == next_colour(a) and y == wanted_y) else 0

    return StrategyTable.from_function((3, 3, 3, 3), rule)


def rgrb() -> StrategyTable:
    """The symmetric winning box: every valid output except (b, a), each 1/2.

    This is family_strategy at the all-1/2 parameter point, and the unique
    no-signalling member of the winning family.
    """
    half = Fraction(1, 2)

    def rule(a, b, x, y):
        if (x, y) == (b, a) or not rgb_predicate(a, b, x, y):
            return 0
        return half

    return StrategyTable.from_function((3, 3, 3, 3), rule)


def enumerate_winning_deterministic_boxes(game: Game) -> int:
    """Count deterministic boxes (one output pair per input pair) that always win.

    The count is the product over input pairs of the number of winning output
    pairs, so an unsatisfiable row makes it zero.
    """
    na, nb, nx, ny = game.shape
    if (nx * ny) ** (na * nb) > ENUMERATION_GUARD:
        raise ValueError("deterministic box space exceeds the enumeration guard")
    count = 1
    for a in range(na):
        for b in range(nb):
            count *= sum(
                1
                for x in range(nx)
                for y in range(ny)
                if game.predicate(a, b, x, y)
            )
    return count


def local_bound(game: Game):
    """Maximum winning probability over unassisted deterministic pairs.

    Brute force over all |X|^|A| x |Y|^|B| function pairs.  Returns
    (value, f_a, f_b) where (f_a, f_b) is the lexicographically first argmax.
    """
    na, nb, nx, ny = game.shape
    if nx**na * ny**nb > ENUMERATION_GUARD:
        raise ValueError("deterministic strategy space exceeds the enumeration guard")
    best = None
    best_pair = None
    for f_a in itertools.product(range(nx), repeat=na):
        for f_b in itertools.product(range(ny), repeat=nb):
            value = sum(
                weight
                for (a, b), weight in game.input_dist.items()
                if game.predicate(a, b, f_a[a], f_b[b])
            )
            if best is None or value > best:
                best, best_pair = value, (f_a, f_b)
    return best, best_pair[0], best_pair[1]


def l1_distance(table_a: StrategyTable, table_b: StrategyTable):
    """Entrywise L1 distance between two tables on the same alphabets."""
    if table_a.shape != table_b.shape:
        raise ValueError(f"shape mismatch: {table_a.shape} != {table_b.shape}")
    return sum(abs(p - q) for p, q in zip(table_a.probs, table_b.probs))


def l1_distance_to_set(table: StrategyTable, tables) -> object:
    """Distance from a table to a finite nonempty set: the minimum member distance."""
    distances = [l1_distance(table, other) for other in tables]
    if not distances:
        raise ValueError("distance to an empty set is undefined")
    return min(distances)


def mix(tables: Sequence[StrategyTable], weights: Sequence) -> StrategyTable:
    """Convex combination of tables over identical alphabets."""
    if len(tables) != len(weights) or not tables:
        raise ValueError("need one weight per table and at least one table")
    shape = tables[0].shape
    if any(t.shape != shape for t in tables):
        raise ValueError("mixed tables must share alphabets")
    weights = [_coerce(w) for w in weights]
    slack = FLOAT_ROW_TOL if any(isinstance(w, float) for w in weights) else 0
    if any(w < 0 for w in weights) or abs(sum(weights) - 1) > slack:
        raise ValueError("weights must be nonnegative and sum to 1")
    probs = tuple(
        sum(w * t.probs[i] for w, t in zip(weights, tables))
        for i in range(len(tables[0].probs))
    )
    return StrategyTable(shape, probs)
