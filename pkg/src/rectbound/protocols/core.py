"""Deterministic and public-coin two-party protocols.

Inputs are plain bit masks: Alice holds x over `n_alice` coordinates, Bob
holds y over `n_bob`, bit j marking coordinate j + 1 as in the rest of the
package.  A protocol run produces an output and the transcript of exchanged
bits; its cost is the transcript length.

Two deterministic representations:

* `TreeProtocol` is the explicit object: inner nodes name a speaker and a
  message function of that speaker's input alone, and the spoken bit picks
  the child.  Everything about it can be inspected, counted, and serialized.
* `ProgramProtocol` is a closure that replays the conversation and returns
  (output, transcript).  Compositions and k-fold constructions live here,
  where the explicit tree would be exponentially large.

Public coins are a `RandomizedProtocol`: finitely many deterministic
branches with exact rational probabilities summing to one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Callable, Union

from ..errors import MalformedTreeError, ParameterRangeError, ProtocolContractError

ALICE = "alice"
BOB = "bob"


@dataclass(frozen=True)
class Leaf:
    value: object


@dataclass(frozen=True)
class Node:
    owner: str
    message: Callable[[int], int]
    children: tuple

    def __post_init__(self) -> None:
        if self.owner not in (ALICE, BOB):
            raise MalformedTreeError(f"speaker must be {ALICE!r} or {BOB!r}, got {self.owner!r}")
        if len(self.children) != 2:
            raise MalformedTreeError(f"a node needs exactly two children, got {len(self.children)}")
        for child in self.children:
            if not isinstance(child, (Leaf, Node)):
                raise MalformedTreeError(f"child of unsupported type {type(child).__name__}")


@dataclass(frozen=True)
class RunResult:
    output: object
    transcript: tuple[int, ...]

    @property
    def cost(self) -> int:
        return len(self.transcript)


def _check_input(n_alice: int, n_bob: int, x: int, y: int) -> None:
    if not 0 <= x < (1 << n_alice):
        raise ParameterRangeError(f"x={x} is not a {n_alice}-bit input")
    if not 0 <= y < (1 << n_bob):
        raise ParameterRangeError(f"y={y} is not a {n_bob}-bit input")


@dataclass(frozen=True)
class TreeProtocol:
    n_alice: int
    n_bob: int
    root: Union[Leaf, Node]

    def run(self, x: int, y: int) -> RunResult:
        _check_input(self.n_alice, self.n_bob, x, y)
        transcript: list[int] = []
        current = self.root
        while isinstance(current, Node):
            held = x if current.owner == ALICE else y
            bit = current.message(held)
            if bit not in (0, 1):
                raise MalformedTreeError(f"message produced {bit!r} instead of a bit")
            transcript.append(bit)
            current = current.children[bit]
        return RunResult(current.value, tuple(transcript))

    @property
    def worst_cost(self) -> int:
        depth: dict[int, int] = {}

        def walk(node) -> int:
            if isinstance(node, Leaf):
                return 0
            key = id(node)
            if key not in depth:
                depth[key] = 1 + max(walk(child) for child in node.children)
            return depth[key]

        return walk(self.root)

    def leaves(self) -> list[Leaf]:
        out: list[Leaf] = []

        def walk(node) -> None:
            if isinstance(node, Leaf):
                out.append(node)
            else:
                for child in node.children:
                    walk(child)

        walk(self.root)
        return out


@dataclass(frozen=True)
class ProgramProtocol:
    """A protocol given by its conversation replay function.

    `run_fn(x, y)` returns (output, transcript).  The output must be a
    function of the transcript so that both parties know it; the library
    constructions keep that property, closures supplied from outside are
    trusted.  Runs past `worst_cost` raise, runs under it are fine.
    """

    n_alice: int
    n_bob: int
    run_fn: Callable[[int, int], tuple[object, tuple[int, ...]]] = field(repr=False)
    worst_cost: int
    label: str = ""

    def run(self, x: int, y: int) -> RunResult:
        _check_input(self.n_alice, self.n_bob, x, y)
        output, transcript = self.run_fn(x, y)
        transcript = tuple(transcript)
        if any(bit not in (0, 1) for bit in transcript):
            raise ProtocolContractError(f"non-bit transcript entry in {self.label or 'program'}")
        if len(transcript) > self.worst_cost:
            raise ProtocolContractError(
                f"{self.label or 'program'} used {len(transcript)} bits, "
                f"declared at most {self.worst_cost}"
            )
        return RunResult(output, transcript)


DeterministicProtocol = Union[TreeProtocol, ProgramProtocol]


@dataclass(frozen=True)
class RandomizedProtocol:
    """A public-coin mixture of deterministic protocols."""

    branches: tuple[tuple[Fraction, DeterministicProtocol], ...]

    def __post_init__(self) -> None:
        if not self.branches:
            raise ParameterRangeError("a randomized protocol needs at least one branch")
        total = Fraction(0)
        for prob, proto in self.branches:
            if not isinstance(prob, Fraction) or prob <= 0:
                raise ParameterRangeError(f"branch probability must be a positive Fraction, got {prob!r}")
            total += prob
        if total != 1:
            raise ParameterRangeError(f"branch probabilities sum to {total}, expected 1")
        sizes = {(proto.n_alice, proto.n_bob) for _, proto in self.branches}
        if len(sizes) != 1:
            raise ParameterRangeError("all branches must share the input sizes")

    @property
    def n_alice(self) -> int:
        return self.branches[0][1].n_alice

    @property
    def n_bob(self) -> int:
        return self.branches[0][1].n_bob

    @property
    def worst_cost(self) -> int:
        return max(proto.worst_cost for _, proto in self.branches)

    def draw(self, rng: Random) -> DeterministicProtocol:
        roll = rng.random()
        acc = 0.0
        for prob, proto in self.branches:
            acc += float(prob)
            if roll < acc:
                return proto
        return self.branches[-1][1]

    def run(self, x: int, y: int, rng: Random) -> RunResult:
        return self.draw(rng).run(x, y)


AnyProtocol = Union[TreeProtocol, ProgramProtocol, RandomizedProtocol]


def as_randomized(proto: AnyProtocol) -> RandomizedProtocol:
    """Wrap a deterministic protocol as its own single certain branch."""
    if isinstance(proto, RandomizedProtocol):
        return proto
    return RandomizedProtocol(((Fraction(1), proto),))


def run_protocol(proto: AnyProtocol, x: int, y: int, rng: Random | None = None) -> RunResult:
    if isinstance(proto, RandomizedProtocol):
        if rng is None:
            raise ParameterRangeError("running a randomized protocol needs an rng")
        return proto.run(x, y, rng)
    return proto.run(x, y)


def constant_protocol(n_alice: int, n_bob: int, value: object) -> TreeProtocol:
    """Zero-bit protocol that outputs `value` on every input."""
    return TreeProtocol(n_alice, n_bob, Leaf(value))


def tree_records(proto: TreeProtocol) -> dict:
    """JSON-ready nested records with message functions turned into tables."""

    def encode(node) -> dict:
        if isinstance(node, Leaf):
            value = list(node.value) if isinstance(node.value, tuple) else node.value
            return {"kind": "leaf", "value": value}
        width = proto.n_alice if node.owner == ALICE else proto.n_bob
        table = []
        for held in range(1 << width):
            bit = node.message(held)
            if bit not in (0, 1):
                raise MalformedTreeError(f"message produced {bit!r} instead of a bit")
            table.append(bit)
        return {
            "kind": "node",
            "owner": node.owner,
            "table": table,
            "children": [encode(child) for child in node.children],
        }

    return {"n_alice": proto.n_alice, "n_bob": proto.n_bob, "root": encode(proto.root)}


def tree_from_records(records: dict) -> TreeProtocol:
    """Inverse of `tree_records`; leaf list values come back as tuples."""

    def decode(rec) -> Union[Leaf, Node]:
        if rec["kind"] == "leaf":
            value = rec["value"]
            return Leaf(tuple(value) if isinstance(value, list) else value)
        table = tuple(rec["table"])
        return Node(
            owner=rec["owner"],
            message=lambda held, _table=table: _table[held],
            children=tuple(decode(child) for child in rec["children"]),
        )

    return TreeProtocol(int(records["n_alice"]), int(records["n_bob"]), decode(records["root"]))
