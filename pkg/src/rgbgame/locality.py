"""Signalling structure of boxes: canonical examples, checks, decompositions.

A box is a StrategyTable viewed as a physical device.  The checks here are
exact on rational tables (witnesses are produced on failure, never just a
boolean), and the one-way decompositions reconstruct their input exactly.

The module also carries the linear-algebra argument showing that the
perfectly-winning family of the colour game contains exactly one
no-signalling box: the all-1/2 member.  That computation is done with exact
Gaussian elimination over the 15 family parameters.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .strategies import (
    StrategyTable,
    WinningFamilyParams,
    next_colour,
    parameter_names,
    prev_colour,
)

# ---------------------------------------------------------------------------
# canonical boxes


def id_box(k: int = 3) -> StrategyTable:
    """Both parties output their own input: (x, y) = (a, b)."""
    _check_alphabet(k)
    return StrategyTable.from_function(
        (k, k, k, k), lambda a, b, x, y: 1 if (x, y) == (a, b) else 0
    )


def r_sig_box(k: int = 3) -> StrategyTable:
    """Alice's input appears on both sides: (x, y) = (a, a)."""
    _check_alphabet(k)
    return StrategyTable.from_function(
        (k, k, k, k), lambda a, b, x, y: 1 if (x, y) == (a, a) else 0
    )


def l_sig_box(k: int = 3) -> StrategyTable:
    """Bob's input appears on both sides: (x, y) = (b, b)."""
    _check_alphabet(k)
    return StrategyTable.from_function(
        (k, k, k, k), lambda a, b, x, y: 1 if (x, y) == (b, b) else 0
    )


def sig_box(k: int = 3) -> StrategyTable:
    """Inputs swap sides: (x, y) = (b, a).  Signals both ways."""
    _check_alphabet(k)
    return StrategyTable.from_function(
        (k, k, k, k), lambda a, b, x, y: 1 if (x, y) == (b, a) else 0
    )


def pr_box() -> StrategyTable:
    """The binary box winning the XOR game with certainty: uniform over
    the two output pairs with x ^ y = a & b."""
    half = Fraction(1, 2)
    return StrategyTable.from_function(
        (2, 2, 2, 2), lambda a, b, x, y: half if (x ^ y) == (a & b) else 0
    )


def _check_alphabet(k: int):
    if k < 1:
        raise ValueError(f"alphabet size must be at least 1, got {k}")


# ---------------------------------------------------------------------------
# no-signalling checks


@dataclass(frozen=True)
class SignallingWitness:
    """Evidence that one party's output distribution reacts to the other's input.

    ``side`` names the direction information flows: "right" means Bob's
    marginal changes with Alice's input a, "left" the mirror image.  The
    receiver's own input is held at ``fixed_input`` while the sender's input
    moves between ``sender_inputs``, shifting the probability of ``output``
    between the two ``marginals``.
    """

    side: str
    fixed_input: int
    output: int
    sender_inputs: tuple[int, int]
    marginals: tuple

    def to_json_dict(self) -> dict:
        return {
            "side": self.side,
            "fixed_input": self.fixed_input,
            "output": self.output,
            "sender_inputs": list(self.sender_inputs),
            "marginals": [_prob_str(m) for m in self.marginals],
        }

    def __str__(self):
        receiver, sender = ("y", "a") if self.side == "right" else ("x", "b")
        own = "b" if self.side == "right" else "a"
        i, j = self.sender_inputs
        p, q = self.marginals
        return (
            f"side={self.side}, {own}={self.fixed_input}, {receiver}={self.output}: "
            f"marginal is {_prob_str(p)} at {sender}={i} but {_prob_str(q)} at {sender}={j}"
        )


def _prob_str(p) -> str:
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return format(float(p), ".17g")


class SignallingError(ValueError):
    """A decomposition's required marginal independence fails."""

    def __init__(self, witness: SignallingWitness):
        super().__init__(f"box signals: {witness}")
        self.witness = witness


def x_marginal(table: StrategyTable, a: int, b: int) -> dict:
    """Alice's output distribution {x: P(x | a, b)}."""
    _, _, nx, ny = table.shape
    return {x: sum(table.prob(a, b, x, y) for y in range(ny)) for x in range(nx)}


def y_marginal(table: StrategyTable, a: int, b: int) -> dict:
    """Bob's output distribution {y: P(y | a, b)}."""
    _, _, nx, ny = table.shape
    return {y: sum(table.prob(a, b, x, y) for x in range(nx)) for y in range(ny)}


def _right_witness(table, atol):
    # Does Bob's marginal move when Alice's input does?
    na, nb, _, ny = table.shape
    for b in range(nb):
        reference = y_marginal(table, 0, b)
        for a in range(1, na):
            current = y_marginal(table, a, b)
            for y in range(ny):
                if abs(current[y] - reference[y]) > atol:
                    return SignallingWitness(
                        "right", b, y, (0, a), (reference[y], current[y])
                    )
    return None


def _left_witness(table, atol):
    # Does Alice's marginal move when Bob's input does?
    na, nb, nx, _ = table.shape
    for a in range(na):
        reference = x_marginal(table, a, 0)
        for b in range(1, nb):
            current = x_marginal(table, a, b)
            for x in range(nx):
                if abs(current[x] - reference[x]) > atol:
                    return SignallingWitness(
                        "left", a, x, (0, b), (reference[x], current[x])
                    )
    return None


def is_no_signalling(table: StrategyTable, atol=0):
    """Check both marginal-independence conditions.

    Returns (True, None) or (False, witness).  Exact comparison by default;
    pass a small ``atol`` for float-valued tables.
    """
    witness = _right_witness(table, atol) or _left_witness(table, atol)
    return (witness is None), witness


def is_symmetric(table: StrategyTable, atol=0) -> bool:
    """True when P(x, y | a, b) = P(y, x | b, a) everywhere."""
    na, nb, nx, ny = table.shape
    if na != nb or nx != ny:
        return False
    return all(
        abs(table.prob(a, b, x, y) - table.prob(b, a, y, x)) <= atol
        for a in range(na)
        for b in range(nb)
        for x in range(nx)
        for y in range(ny)
    )


# ---------------------------------------------------------------------------
# one-way simulation


class Direction(enum.Enum):
    LEFT_TO_RIGHT = "left-to-right"   # Alice samples first, then tells Bob
    RIGHT_TO_LEFT = "right-to-left"   # Bob samples first, then tells Alice


@dataclass(frozen=True)
class OneWayProtocol:
    """A box factored into sender-samples-then-receiver-samples form.

    ``sender`` maps the sender's input to a distribution over her output;
    ``receiver`` maps (sender input, receiver input, sender output) to a
    distribution over the receiver's output.  Recomposing the product
    reproduces the decomposed box exactly.
    """

    direction: Direction
    shape: tuple[int, int, int, int]
    sender: Mapping[int, Mapping[int, Fraction]]
    receiver: Mapping[tuple[int, int, int], Mapping[int, Fraction]]


def decompose_one_way(table: StrategyTable, direction: Direction) -> OneWayProtocol:
    """Factor a box along one direction of communication.

    LEFT_TO_RIGHT requires Alice's marginal to be independent of b (checked,
    witness raised otherwise); the mirror condition for RIGHT_TO_LEFT.  Rows
    conditioned on a zero-probability sender output are filled uniformly.
    """
    na, nb, nx, ny = table.shape
    if direction is Direction.LEFT_TO_RIGHT:
        witness = _left_witness(table, 0)
        if witness is not None:
            raise SignallingError(witness)
        sender = {a: x_marginal(table, a, 0) for a in range(na)}
        receiver = {}
        for a in range(na):
            for b in range(nb):
                for x in range(nx):
                    mass = sender[a][x]
                    if mass == 0:
                        receiver[(a, b, x)] = {y: Fraction(1, ny) for y in range(ny)}
                    else:
                        receiver[(a, b, x)] = {
                            y: table.prob(a, b, x, y) / mass for y in range(ny)
                        }
        return OneWayProtocol(direction, table.shape, sender, receiver)

    witness = _right_witness(table, 0)
    if witness is not None:
        raise SignallingError(witness)
    sender = {b: y_marginal(table, 0, b) for b in range(nb)}
    receiver = {}
    for b in range(nb):
        for a in range(na):
            for y in range(ny):
                mass = sender[b][y]
                if mass == 0:
                    receiver[(b, a, y)] = {x: Fraction(1, nx) for x in range(nx)}
                else:
                    receiver[(b, a, y)] = {
                        x: table.prob(a, b, x, y) / mass for x in range(nx)
                    }
    return OneWayProtocol(direction, table.shape, sender, receiver)


def recompose_one_way(protocol: OneWayProtocol) -> StrategyTable:
    """Multiply a one-way protocol back into a strategy table."""
    if protocol.direction is Direction.LEFT_TO_RIGHT:
        def entry(a, b, x, y):
            return protocol.sender[a][x] * protocol.receiver[(a, b, x)][y]
    else:
        def entry(a, b, x, y):
            return protocol.sender[b][y] * protocol.receiver[(b, a, y)][x]

    return StrategyTable.from_function(protocol.shape, entry)


# ---------------------------------------------------------------------------
# uniqueness of the no-signalling winner


@dataclass(frozen=True)
class LinearSystem:
    """An exact linear system over named variables.

    Equalities are (coefficients, constant) meaning coeffs . v = constant;
    inequalities use the same shape and mean coeffs . v >= constant.
    """

    variables: tuple[str, ...]
    equalities: tuple
    inequalities: tuple


def build_ns_constraints() -> LinearSystem:
    """No-signalling conditions on the winning family, as linear constraints.

    Both parties' marginals must forget the other party's input.  Comparing
    each same-colour row (a = b = u) with its two neighbouring rows gives, for
    every u: p_u = 1 - p_{u,u+1} = p_{u,u-1} on Alice's side and
    1 - p_u = 1 - q_{u+1,u} = q_{u-1,u} on Bob's, i.e. 12 equalities in the
    15 parameters, plus the range inequalities of the family itself.
    """
    names = parameter_names()
    index = {name: i for i, name in enumerate(names)}

    def row(terms: dict, constant) -> tuple:
        coeffs = [Fraction(0)] * len(names)
        for name, c in terms.items():
            coeffs[index[name]] += Fraction(c)
        return tuple(coeffs), Fraction(constant)

    equalities = []
    for u in range(3):
        nxt, prv = next_colour(u), prev_colour(u)
        # Alice's chance of answering u+1 must match across b = u, u+1, u-1.
        equalities.append(row({f"p{u}": 1, f"p{u}{nxt}": 1}, 1))
        equalities.append(row({f"p{u}": 1, f"p{u}{prv}": -1}, 0))
        # Bob's chance of answering u+1 must match across a = u, u+1, u-1.
        equalities.append(row({f"p{u}": 1, f"q{nxt}{u}": -1}, 0))
        equalities.append(row({f"p{u}": 1, f"q{prv}{u}": 1}, 1))

    inequalities = [row({name: 1}, 0) for name in names]
    for u in range(3):
        for v in range(3):
            if u != v:
                inequalities.append(row({f"p{u}{v}": -1, f"q{u}{v}": -1}, -1))

    return LinearSystem(names, tuple(equalities), tuple(inequalities))


def _rref(rows: list[list[Fraction]]):
    """In-place reduced row echelon form; returns [(row index, pivot column)].

    Rows have one trailing constant entry.  Raises on an inconsistent system.
    """
    if not rows:
        return []
    width = len(rows[0]) - 1
    pivots = []
    rank = 0
    for col in range(width):
        pivot_row = next(
            (r for r in range(rank, len(rows)) if rows[r][col] != 0), None
        )
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        scale = rows[rank][col]
        rows[rank] = [c / scale for c in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [c - factor * p for c, p in zip(rows[r], rows[rank])]
        pivots.append((rank, col))
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][-1] != 0:
            raise ArithmeticError("inconsistent linear system")
    return pivots


def _reduce_form(coeffs, constant, rows, pivots):
    """Residual of the affine form coeffs . v + constant modulo equality rows."""
    form = list(coeffs) + [Fraction(constant)]
    for r, col in pivots:
        factor = form[col]
        if factor != 0:
            # row r encodes: v_col + sum(tail) = const, i.e. the affine form
            # (row coeffs) . v - const vanishes on every solution.
            form = [
                f - factor * c for f, c in zip(form[:-1], rows[r][:-1])
            ] + [form[-1] + factor * rows[r][-1]]
    return form


def solve_ns_unique() -> WinningFamilyParams:
    """Solve the no-signalling constraints exactly; the solution is a point.

    Elimination of the 12 marginal equalities leaves the three same-colour
    parameters free, but the two entries P(v, u | u, v) and P(u, v | v, u)
    of the family reduce to opposite linear forms, so nonnegativity pins both
    to zero.  Adding those equalities collapses the system to the all-1/2
    assignment; any residual freedom or inconsistency raises.
    """
    system = build_ns_constraints()
    names = system.variables
    index = {name: i for i, name in enumerate(names)}

    def leftover_form(u, v):
        # P(v, u | u, v) = 1 - p_uv - q_uv as (coefficients, constant).
        coeffs = [Fraction(0)] * len(names)
        coeffs[index[f"p{u}{v}"]] = Fraction(-1)
        coeffs[index[f"q{u}{v}"]] = Fraction(-1)
        return coeffs, Fraction(1)

    rows = [list(coeffs) + [const] for coeffs, const in system.equalities]
    pivots = _rref(rows)

    extra = []
    for u in range(3):
        v = next_colour(u)
        coeffs_uv, const_uv = leftover_form(u, v)
        coeffs_vu, const_vu = leftover_form(v, u)
        paired = _reduce_form(
            [c1 + c2 for c1, c2 in zip(coeffs_uv, coeffs_vu)],
            const_uv + const_vu,
            rows,
            pivots,
        )
        if any(c != 0 for c in paired):
            raise ArithmeticError(
                "expected P(v,u|u,v) + P(u,v|v,u) to vanish modulo no-signalling"
            )
        # Both entries are probabilities and sum to zero, hence each is zero.
        extra.append([-c for c in coeffs_uv] + [const_uv])
        extra.append([-c for c in coeffs_vu] + [const_vu])

    rows = [list(coeffs) + [const] for coeffs, const in system.equalities] + extra
    pivots = _rref(rows)
    if len(pivots) != len(names):
        raise ArithmeticError(
            f"solution space is not a point: rank {len(pivots)} of {len(names)}"
        )
    solution = [Fraction(0)] * len(names)
    for r, col in pivots:
        solution[col] = rows[r][-1]

    for coeffs, const in system.inequalities:
        value = sum(c * s for c, s in zip(coeffs, solution))
        if value < const:
            raise ArithmeticError("unique solution violates a range inequality")
    return WinningFamilyParams.from_vector(solution)
