"""Baseline protocols the reductions and tests build on.

All of them are one-way and brute force: Alice ships her whole input, Bob
answers.  Their value is that the costs are exact, the behavior is obvious,
and the k-fold versions exercise the packed block layout end to end.
"""

from __future__ import annotations

from ..errors import ParameterRangeError
from .core import ALICE, BOB, Leaf, Node, ProgramProtocol, TreeProtocol
from .tasks import block

_TREE_MAX_N = 12


def index_bits(n: int) -> int:
    """Bits needed to name one of n items; 0 when there is nothing to pick."""
    if n < 1:
        raise ParameterRangeError(f"need a positive range, got {n}")
    return (n - 1).bit_length()


def trivial_ndisj(n: int) -> TreeProtocol:
    """Alice sends x coordinate by coordinate, Bob answers the one bit.

    Explicit tree with 2^n answer nodes; the leaf under Bob's bit b holds b.
    Every answer node keeps both leaves structurally present even when one
    of them is unreachable, which the leaf census is expected to count.
    """
    if not 1 <= n <= _TREE_MAX_N:
        raise ParameterRangeError(f"explicit tree supports 1 <= n <= {_TREE_MAX_N}, got {n}")

    def build(depth: int, known_x: int):
        if depth == n:
            return Node(
                owner=BOB,
                message=lambda y, _x=known_x: 1 if _x & y else 0,
                children=(Leaf(0), Leaf(1)),
            )
        return Node(
            owner=ALICE,
            message=lambda x, _d=depth: (x >> _d) & 1,
            children=(
                build(depth + 1, known_x),
                build(depth + 1, known_x | (1 << depth)),
            ),
        )

    return TreeProtocol(n, n, build(0, 0))


def trivial_ndisj_kfold(n: int, k: int) -> ProgramProtocol:
    """Alice sends all k blocks, Bob answers one bit per block: kn + k bits."""
    if n < 1 or k < 1:
        raise ParameterRangeError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    width = n * k

    def run_fn(x: int, y: int):
        transcript = [(x >> i) & 1 for i in range(width)]
        answers = 0
        for j in range(k):
            bit = 1 if block(x, j, n) & block(y, j, n) else 0
            answers |= bit << j
            transcript.append(bit)
        return answers, tuple(transcript)

    return ProgramProtocol(
        n_alice=width,
        n_bob=width,
        run_fn=run_fn,
        worst_cost=width + k,
        label=f"trivial-ndisj-{k}fold(n={n})",
    )


def trivial_search_kfold(n: int, k: int) -> ProgramProtocol:
    """Alice sends everything, Bob names the lowest shared coordinate per block.

    Per block Bob spends one validity bit plus an index of ceil(log2 n) bits,
    zero-padded when the block is disjoint: kn + k(1 + ceil(log2 n)) total.
    """
    if n < 1 or k < 1:
        raise ParameterRangeError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    width = n * k
    idx_bits = index_bits(n)

    def run_fn(x: int, y: int):
        transcript = [(x >> i) & 1 for i in range(width)]
        out = []
        for j in range(k):
            meet = block(x, j, n) & block(y, j, n)
            if meet:
                lowest = (meet & -meet).bit_length() - 1
                transcript.append(1)
                transcript.extend((lowest >> t) & 1 for t in range(idx_bits))
                out.append(lowest + 1)
            else:
                transcript.append(0)
                transcript.extend(0 for _ in range(idx_bits))
                out.append(0)
        return tuple(out), tuple(transcript)

    return ProgramProtocol(
        n_alice=width,
        n_bob=width,
        run_fn=run_fn,
        worst_cost=width + k * (1 + idx_bits),
        label=f"trivial-search-{k}fold(n={n})",
    )
