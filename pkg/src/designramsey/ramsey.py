"""Free orderings and exhaustive checking of arrow statements ``C -> (B)^A_r``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import Budget, BudgetExceeded, EmptyPattern
from .morphisms import Copy, canonical_form, enumerate_copies, parts
from .structures import OrderedDesign, OrderedStructure, encode


def orderings(S, dedupe: bool = False, max_n: int = 8) -> list:
    """All linear orderings of S as ordered structures; one per order-isomorphism class if ``dedupe``."""
    design, _ = parts(S)
    if design.n > max_n:
        raise BudgetExceeded(f"{design.n}! orderings exceed the limit of {max_n} vertices")
    out, seen = [], set()
    for order in itertools.permutations(range(design.n)):
        ordered = encode(OrderedDesign(design, order))
        if dedupe:
            key = canonical_form(ordered, ordered=True)
            if key in seen:
                continue
            seen.add(key)
        out.append(ordered)
    return out


@dataclass
class ArrowInstance:
    C: object
    B: object
    A: object
    r: int
    copies_of_A: list = field(default_factory=list)
    copies_of_B: list = field(default_factory=list)
    # for each copy of B, indices of the copies of A lying inside it
    inside: list = field(default_factory=list)

    @classmethod
    def build(cls, C, B, A, r: int) -> "ArrowInstance":
        if r < 1:
            raise ValueError("need at least one colour")
        for name, x in (("C", C), ("B", B), ("A", A)):
            if parts(x)[1] is None:
                raise TypeError(f"{name} must be ordered")
        copies_a = enumerate_copies(A, C)
        copies_b = enumerate_copies(B, C)
        sets = [frozenset(c.vertices) for c in copies_a]
        inside = [
            tuple(i for i, s in enumerate(sets) if s <= frozenset(cb.vertices)) for cb in copies_b
        ]
        return cls(C, B, A, r, copies_a, copies_b, inside)


@dataclass(frozen=True)
class ArrowVerdict:
    holds: bool
    witness: Optional[tuple] = None
    nodes: int = 0


def find_mono_copy(inst: ArrowInstance, coloring: Sequence[int]) -> Optional[Copy]:
    """A copy of B all of whose copies of A share a colour, if one exists."""
    for cb, idx in zip(inst.copies_of_B, inst.inside):
        if len({coloring[i] for i in idx}) <= 1:
            return cb
    return None


def arrow_check(C, B, A, r: int, budget: Optional[int] = None) -> ArrowVerdict:
    return arrow_check_instance(ArrowInstance.build(C, B, A, r), budget)


def arrow_check_instance(inst: ArrowInstance, budget: Optional[int] = None) -> ArrowVerdict:
    """Depth-first over colourings in copy-index order, colours introduced in increasing order.

    A branch is cut as soon as some copy of B is fully coloured in one colour
    (every extension is good) or every copy of B already sees two colours (the
    branch, padded with colour 0, is a witness).
    """
    m = len(inst.copies_of_A)
    nb = len(inst.copies_of_B)
    if nb == 0:
        return ArrowVerdict(False, (0,) * m)
    if m == 0:
        raise EmptyPattern("B has copies in C but A has none")
    if any(len(idx) == 0 for idx in inst.inside):
        return ArrowVerdict(True)

    counter = Budget(budget)
    touching = [[] for _ in range(m)]
    for j, idx in enumerate(inst.inside):
        for i in idx:
            touching[i].append(j)
    seen = [-1] * nb                       # first colour seen on copy j, -1 if none yet
    dead = [False] * nb
    left = [len(idx) for idx in inst.inside]
    alive = [nb]
    colors = [0] * m

    def assign(i, c):
        changes = []
        mono = False
        for j in touching[i]:
            left[j] -= 1
            if dead[j]:
                continue
            if seen[j] == -1:
                seen[j] = c
                changes.append((j, "seen"))
            elif seen[j] != c:
                dead[j] = True
                alive[0] -= 1
                changes.append((j, "dead"))
                continue
            if left[j] == 0:
                mono = True
        return changes, mono

    def undo(i, changes):
        for j in touching[i]:
            left[j] += 1
        for j, kind in changes:
            if kind == "seen":
                seen[j] = -1
            else:
                dead[j] = False
                alive[0] += 1

    def search(i, used):
        counter.tick()
        if alive[0] == 0:
            return tuple(colors[:i]) + (0,) * (m - i)
        if i == m:
            return None
        for c in range(min(inst.r, used + 1)):
            colors[i] = c
            changes, mono = assign(i, c)
            found = None if mono else search(i + 1, max(used, c + 1))
            undo(i, changes)
            if found is not None:
                return found
        return None

    witness = search(0, 0)
    return ArrowVerdict(witness is None, witness, counter.nodes)


def naive_arrow_check(inst: ArrowInstance) -> ArrowVerdict:
    """Try all ``r ** m`` colourings; the reference for :func:`arrow_check_instance`."""
    if not inst.copies_of_B:
        return ArrowVerdict(False, (0,) * len(inst.copies_of_A))
    nodes = 0
    for coloring in itertools.product(range(inst.r), repeat=len(inst.copies_of_A)):
        nodes += 1
        if find_mono_copy(inst, coloring) is None:
            return ArrowVerdict(False, coloring, nodes)
    return ArrowVerdict(True, None, nodes)


def find_ramsey_witness(A, B, r: int, max_n: int, budget: Optional[int] = None) -> Optional[OrderedStructure]:
    """Smallest ordered partial design C (by vertex count) with ``C -> (B)^A_r``, searched up to ``max_n``."""
    from .enumeration import enumerate_partial_designs

    design_b, _ = parts(B)
    for n in range(design_b.n, max_n + 1):
        for d in enumerate_partial_designs(design_b.params, n, budget=budget).structures:
            for C in orderings(d, dedupe=True, max_n=max_n):
                inst = ArrowInstance.build(C, B, A, r)
                if not inst.copies_of_A:
                    continue
                if arrow_check_instance(inst, budget).holds:
                    return C
    return None
