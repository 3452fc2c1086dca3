"""Partial (k, t, lambda)-designs and their closure-structure encoding.

A partial design is kept as a set of unordered k-blocks on the vertex set
``0..n-1``.  The structure view adds, for every ordered t-tuple of distinct
vertices lying in some block, the neighbourhood of the tuple; a tuple whose
neighbourhood has size ``l`` is in the domain of the function ``F^l``.
"""

from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    ArityError,
    InconsistentStructure,
    InvalidDesign,
    MalformedInput,
    ParameterError,
)

Block = tuple  # sorted tuple of k distinct vertex ids


@dataclass(frozen=True)
class Params:
    k: int
    t: int
    lam: int

    @property
    def K(self) -> int:
        """Largest possible neighbourhood of a covered t-set."""
        return (self.k - self.t) * self.lam + self.t

    def __str__(self):
        return f"({self.k},{self.t},{self.lam})"


def make_params(k: int, t: int, lam: int) -> Params:
    if t < 2:
        raise ParameterError(f"t must be at least 2, got t={t}")
    if k < t:
        raise ParameterError(f"k must be at least t, got k={k}, t={t}")
    if lam < 1:
        raise ParameterError(f"lambda must be at least 1, got {lam}")
    return Params(int(k), int(t), int(lam))


@dataclass(frozen=True)
class PartialDesign:
    params: Params
    n: int
    blocks: frozenset = frozenset()

    @classmethod
    def build(cls, params: Params, n: int, blocks: Iterable[Iterable[int]] = ()) -> "PartialDesign":
        return cls(params, n, frozenset(tuple(sorted(b)) for b in blocks))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def sorted_blocks(self) -> list:
        return sorted(self.blocks)

    @cached_property
    def tset_index(self) -> dict:
        """Map each covered t-set (frozenset) to the blocks containing it."""
        index: dict = {}
        for b in self.blocks:
            for ts in itertools.combinations(b, self.params.t):
                index.setdefault(frozenset(ts), []).append(b)
        return index

    @cached_property
    def vertex_index(self) -> dict:
        index: dict = {v: [] for v in range(self.n)}
        for b in self.blocks:
            for v in b:
                if v in index:
                    index[v].append(b)
        return index

    def with_blocks(self, extra: Iterable[Iterable[int]]) -> "PartialDesign":
        return PartialDesign(
            self.params, self.n, self.blocks | {tuple(sorted(b)) for b in extra}
        )

    def with_n(self, n: int) -> "PartialDesign":
        return PartialDesign(self.params, n, self.blocks)

    def relabel(self, mapping: Mapping[int, int] | Sequence[int], n: Optional[int] = None) -> "PartialDesign":
        """Image of the design under ``v -> mapping[v]``."""
        blocks = frozenset(tuple(sorted(mapping[v] for v in b)) for b in self.blocks)
        return PartialDesign(self.params, self.n if n is None else n, blocks)

    def induced(self, subset: Iterable[int]) -> "PartialDesign":
        """Blocks inside ``subset``, relabelled to ``0..|subset|-1`` in id order."""
        verts = sorted(set(subset))
        pos = {v: i for i, v in enumerate(verts)}
        blocks = frozenset(
            tuple(pos[v] for v in b) for b in self.blocks if all(v in pos for v in b)
        )
        return PartialDesign(self.params, len(verts), blocks)


@dataclass(frozen=True)
class OrderedDesign:
    """A partial design with a linear order: ``order`` lists vertices from least to greatest."""

    design: PartialDesign
    order: tuple

    @classmethod
    def natural(cls, design: PartialDesign) -> "OrderedDesign":
        return cls(design, tuple(range(design.n)))

    @cached_property
    def rank(self) -> dict:
        return {v: i for i, v in enumerate(self.order)}


@dataclass(frozen=True)
class Violation:
    rule: str
    subset: tuple

    def __str__(self):
        return f"{self.rule} {' '.join(map(str, self.subset))}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(design: PartialDesign) -> ValidationReport:
    p = design.params
    out = []
    for b in design.sorted_blocks():
        if len(set(b)) != len(b) or len(b) != p.k:
            out.append(Violation("block-size", b))
        if any(not (0 <= v < design.n) for v in b):
            out.append(Violation("vertex-range", b))
    counts: dict = {}
    for b in design.blocks:
        for ts in itertools.combinations(sorted(set(b)), p.t):
            counts[ts] = counts.get(ts, 0) + 1
    for ts in sorted(counts):
        if counts[ts] > p.lam:
            out.append(Violation("lambda-bound", ts))
    return ValidationReport(tuple(out))


def require_valid(design: PartialDesign) -> None:
    report = validate(design)
    if not report.ok:
        raise InvalidDesign("; ".join(map(str, report.violations)))


def is_complete_design(design: PartialDesign) -> bool:
    require_valid(design)
    p = design.params
    if design.n < p.t:
        return True
    index = design.tset_index
    if len(index) != _binom(design.n, p.t):
        return False
    return all(len(bs) == p.lam for bs in index.values())


def neighborhood(design: PartialDesign, tset: Iterable[int]) -> frozenset:
    key = frozenset(tset)
    if len(key) != design.params.t:
        raise ArityError(f"expected {design.params.t} distinct vertices, got {sorted(key)}")
    blocks = design.tset_index.get(key)
    if not blocks:
        return frozenset()
    return frozenset().union(*blocks)


def function_table(design: PartialDesign) -> dict:
    """Every ordered t-tuple of distinct vertices with nonempty neighbourhood, mapped to it."""
    table = {}
    for key, blocks in design.tset_index.items():
        nb = frozenset().union(*blocks)
        for tup in itertools.permutations(sorted(key)):
            table[tup] = nb
    return table


@dataclass(frozen=True)
class ClosureStructure:
    design: PartialDesign
    functions: Mapping = field(default_factory=dict, compare=False)

    @classmethod
    def from_design(cls, design: PartialDesign) -> "ClosureStructure":
        return cls(design, function_table(design))

    @property
    def params(self) -> Params:
        return self.design.params

    @property
    def n(self) -> int:
        return self.design.n

    def relation(self):
        """Yield the full symmetric k-ary relation (all orderings of every block)."""
        for b in self.design.sorted_blocks():
            yield from itertools.permutations(b)

    def F(self, ell: int, tup: Sequence[int]) -> Optional[frozenset]:
        """Value of ``F^ell`` at ``tup``, or None when ``tup`` is outside its domain."""
        nb = self.functions.get(tuple(tup))
        if nb is None or len(nb) != ell:
            return None
        return nb

    def domain(self, ell: int) -> list:
        return sorted(tup for tup, nb in self.functions.items() if len(nb) == ell)

    def is_consistent(self) -> bool:
        return dict(self.functions) == function_table(self.design)

    def __eq__(self, other):
        if not isinstance(other, ClosureStructure):
            return NotImplemented
        return self.design == other.design and dict(self.functions) == dict(other.functions)

    def __hash__(self):
        return hash(self.design)


@dataclass(frozen=True)
class OrderedStructure:
    structure: ClosureStructure
    order: tuple

    @property
    def design(self) -> PartialDesign:
        return self.structure.design

    @property
    def params(self) -> Params:
        return self.structure.design.params

    @property
    def n(self) -> int:
        return self.structure.design.n

    @cached_property
    def rank(self) -> dict:
        return {v: i for i, v in enumerate(self.order)}


def check_order(order: Sequence[int], n: int) -> tuple:
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise InvalidDesign(f"order is not a permutation of 0..{n - 1}: {order}")
    return order


def encode(design: OrderedDesign | PartialDesign) -> OrderedStructure:
    if isinstance(design, PartialDesign):
        design = OrderedDesign.natural(design)
    require_valid(design.design)
    order = check_order(design.order, design.design.n)
    return OrderedStructure(ClosureStructure.from_design(design.design), order)


def decode(structure: OrderedStructure) -> OrderedDesign:
    if not structure.structure.is_consistent():
        raise InconsistentStructure("function table disagrees with the block relation")
    return OrderedDesign(structure.design, check_order(structure.order, structure.n))


def _binom(n: int, r: int) -> int:
    return comb(n, r) if 0 <= r <= n else 0


# -- text formats ------------------------------------------------------------


def _data_lines(text: str) -> list:
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


def _ints(fields: Sequence[str], what: str) -> list:
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise MalformedInput(f"non-integer field in {what}: {' '.join(fields)}") from None


def _parse_header(line: str, what: str, tag: Optional[str] = None):
    fields = line.split()
    if tag is not None:
        if not fields or fields[0] != tag:
            raise MalformedInput(f"{what}: expected header starting with '{tag}'")
        fields = fields[1:]
    if len(fields) != 4:
        raise MalformedInput(f"{what}: header must be 'k t lambda n'")
    k, t, lam, n = _ints(fields, what)
    try:
        params = make_params(k, t, lam)
    except ParameterError as e:
        raise MalformedInput(str(e)) from None
    if n < 0:
        raise MalformedInput(f"{what}: negative vertex count")
    return params, n


def _parse_order(lines: list, n: int, what: str):
    if lines and lines[0].split()[0] == "order":
        order = _ints(lines[0].split()[1:], what)
        if sorted(order) != list(range(n)):
            raise MalformedInput(f"{what}: order line is not a permutation of 0..{n - 1}")
        return tuple(order), lines[1:]
    return tuple(range(n)), lines


def parse_design(text: str, strict: bool = True) -> OrderedDesign:
    """Read a design file; with ``strict=False`` lambda and block-shape violations pass through."""
    lines = _data_lines(text)
    if not lines:
        raise MalformedInput("empty design file")
    params, n = _parse_header(lines[0], "design")
    order, rest = _parse_order(lines[1:], n, "design")
    blocks = [tuple(_ints(line.split(), "block")) for line in rest]
    design = PartialDesign.build(params, n, blocks)
    report = validate(design)
    if strict and not report.ok:
        raise MalformedInput("invalid design: " + "; ".join(map(str, report.violations)))
    return OrderedDesign(design, order)


def format_design(design: OrderedDesign | PartialDesign) -> str:
    if isinstance(design, PartialDesign):
        design = OrderedDesign.natural(design)
    d = design.design
    p = d.params
    lines = [f"{p.k} {p.t} {p.lam} {d.n}"]
    if tuple(design.order) != tuple(range(d.n)):
        lines.append("order " + " ".join(map(str, design.order)))
    lines.extend(" ".join(map(str, b)) for b in d.sorted_blocks())
    return "\n".join(lines) + "\n"


def format_structure(structure: OrderedStructure) -> str:
    """Structure file: ``structure k t lambda n``, optional order, ``R`` and ``F`` lines."""
    d = structure.design
    p = d.params
    lines = [f"structure {p.k} {p.t} {p.lam} {d.n}"]
    if tuple(structure.order) != tuple(range(d.n)):
        lines.append("order " + " ".join(map(str, structure.order)))
    lines.extend("R " + " ".join(map(str, b)) for b in d.sorted_blocks())
    for tup in sorted(structure.structure.functions):
        nb = structure.structure.functions[tup]
        lines.append(
            f"F {len(nb)} " + " ".join(map(str, tup)) + " : " + " ".join(map(str, sorted(nb)))
        )
    return "\n".join(lines) + "\n"


def parse_structure(text: str) -> OrderedStructure:
    lines = _data_lines(text)
    if not lines:
        raise MalformedInput("empty structure file")
    params, n = _parse_header(lines[0], "structure", tag="structure")
    order, rest = _parse_order(lines[1:], n, "structure")
    blocks, table = [], {}
    for line in rest:
        head, *body = line.split()
        if head == "R":
            blocks.append(tuple(_ints(body, "relation line")))
        elif head == "F":
            if ":" not in body:
                raise MalformedInput(f"function line lacks ':': {line}")
            cut = body.index(":")
            ell, *tup = _ints(body[:cut], "function line")
            value = frozenset(_ints(body[cut + 1:], "function line"))
            if len(tup) != params.t or len(set(tup)) != params.t:
                raise MalformedInput(f"function argument must be {params.t} distinct vertices: {line}")
            if len(value) != ell:
                raise MalformedInput(f"function value size differs from its index: {line}")
            table[tuple(tup)] = value
        else:
            raise MalformedInput(f"unknown line tag '{head}'")
    design = PartialDesign.build(params, n, blocks)
    report = validate(design)
    if not report.ok:
        raise MalformedInput("invalid relation: " + "; ".join(map(str, report.violations)))
    return OrderedStructure(ClosureStructure(design, table), order)


def parse_map(text: str) -> dict:
    """Map file: one ``a -> b`` pair per line."""
    mapping = {}
    for line in _data_lines(text):
        if "->" not in line:
            raise MalformedInput(f"map line must look like 'a -> b': {line}")
        a, b = line.split("->", 1)
        (a,) = _ints([a.strip()], "map line")
        (b,) = _ints([b.strip()], "map line")
        if a in mapping:
            raise MalformedInput(f"vertex {a} mapped twice")
        mapping[a] = b
    return mapping


def format_map(mapping: Mapping[int, int]) -> str:
    return "".join(f"{a} -> {mapping[a]}\n" for a in sorted(mapping))
