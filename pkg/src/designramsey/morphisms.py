"""Closures, strong embeddings, copies and canonical forms.

Every function here accepts any of the four carrier types from
:mod:`designramsey.structures`.  Orders are taken into account only when both
sides of a comparison carry one.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from math import comb, factorial
from typing import Iterable, Mapping, Optional, Sequence

from .errors import SizeLimit
from .structures import (
    ClosureStructure,
    OrderedDesign,
    OrderedStructure,
    PartialDesign,
    format_design,
)

CANONICAL_SIZE_LIMIT = 12


def parts(x) -> tuple:
    """Split a carrier into ``(design, rank)``; ``rank`` is None when unordered."""
    if isinstance(x, PartialDesign):
        return x, None
    if isinstance(x, ClosureStructure):
        return x.design, None
    if isinstance(x, (OrderedDesign, OrderedStructure)):
        return x.design, x.rank
    raise TypeError(f"not a design or structure: {type(x).__name__}")


def order_of(x) -> Optional[tuple]:
    if isinstance(x, (OrderedDesign, OrderedStructure)):
        return tuple(x.order)
    return None


def _as_mapping(mapping) -> dict:
    if isinstance(mapping, Mapping):
        return dict(mapping)
    return dict(enumerate(mapping))


# -- closures ----------------------------------------------------------------


def closure_of(x, subset: Iterable[int]) -> frozenset:
    """Least superset closed under taking neighbourhoods of its t-subsets."""
    design, _ = parts(x)
    t = design.params.t
    index = design.tset_index
    closed = set(subset)
    queue = list(closed)
    while queue:
        v = queue.pop()
        for b in design.vertex_index.get(v, ()):
            inside = [u for u in b if u in closed and u != v]
            if len(inside) < t - 1:
                continue
            # every t-subset through v of the part of b already in the set
            for rest in itertools.combinations(inside, t - 1):
                for blk in index[frozenset(rest + (v,))]:
                    for u in blk:
                        if u not in closed:
                            closed.add(u)
                            queue.append(u)
    return frozenset(closed)


def is_closed(x, subset: Iterable[int]) -> bool:
    subset = frozenset(subset)
    return closure_of(x, subset) == subset


def is_closed_by_blocks(x, subset: Iterable[int]) -> bool:
    """Closedness via block intersections: no outside block meets ``subset`` in t or more points."""
    design, _ = parts(x)
    subset = frozenset(subset)
    t = design.params.t
    for b in design.blocks:
        meet = sum(1 for v in b if v in subset)
        if meet >= t and meet < len(b):
            return False
    return True


def closed_subsets(x, size: Optional[int] = None):
    design, _ = parts(x)
    sizes = range(design.n + 1) if size is None else [size]
    for r in sizes:
        for sub in itertools.combinations(range(design.n), r):
            if is_closed_by_blocks(design, sub):
                yield sub


def induced(x, subset: Iterable[int]):
    """Substructure on a (closed) vertex set, relabelled in id order; keeps the order if any."""
    design, rank = parts(x)
    verts = sorted(set(subset))
    sub = design.induced(verts)
    if rank is None:
        return sub
    pos = {v: i for i, v in enumerate(verts)}
    order = tuple(pos[v] for v in sorted(verts, key=rank.__getitem__))
    return OrderedDesign(sub, order)


# -- embeddings --------------------------------------------------------------


def embedding_violations(mapping, A, B) -> list:
    """Names of the embedding conditions that ``mapping: A -> B`` fails."""
    da, rank_a = parts(A)
    db, rank_b = parts(B)
    f = _as_mapping(mapping)
    if set(f) != set(range(da.n)) or any(not (0 <= y < db.n) for y in f.values()):
        return ["domain"]
    out = []
    image = set(f.values())
    if len(image) != da.n:
        return ["injective"]

    mapped = {tuple(sorted(f[v] for v in b)) for b in da.blocks}
    inside_b = {b for b in db.blocks if all(v in image for v in b)}
    if not mapped <= db.blocks or inside_b != mapped:
        out.append("relation")

    if not _functions_preserved(da, db, f, image):
        out.append("functions")

    t = db.params.t
    if any(sum(1 for v in b if v in image) > t - 1 for b in db.blocks - mapped):
        out.append("iii-prime")

    if rank_a is not None and rank_b is not None:
        seq = [rank_b[f[v]] for v in sorted(range(da.n), key=rank_a.__getitem__)]
        if any(x >= y for x, y in zip(seq, seq[1:])):
            out.append("order")
    return out


def _functions_preserved(da: PartialDesign, db: PartialDesign, f: dict, image: set) -> bool:
    inv = {y: x for x, y in f.items()}
    keys = set(da.tset_index)
    keys.update(
        frozenset(inv[v] for v in tb) for tb in db.tset_index if all(v in image for v in tb)
    )
    for ta in keys:
        na = frozenset().union(*da.tset_index.get(ta, [()]))
        nb = frozenset().union(*db.tset_index.get(frozenset(f[v] for v in ta), [()]))
        if frozenset(f[v] for v in na) != nb:
            return False
    return True


def check_embedding(mapping, A, B) -> bool:
    return not embedding_violations(mapping, A, B)


def equivalence_iii_iii_prime(A, B, mapping) -> bool:
    """Whether function preservation and the outside-block condition agree for this map."""
    bad = embedding_violations(mapping, A, B)
    return ("functions" in bad) == ("iii-prime" in bad)


def injective_maps(na: int, nb: int):
    return itertools.permutations(range(nb), na)


def embeddings(A, B) -> list:
    """All embeddings ``A -> B`` as tuples indexed by A's vertices (brute force)."""
    da, _ = parts(A)
    db, _ = parts(B)
    return [f for f in injective_maps(da.n, db.n) if check_embedding(f, A, B)]


@dataclass(frozen=True)
class Embedding:
    source: object
    target: object
    mapping: tuple

    def __post_init__(self):
        bad = embedding_violations(self.mapping, self.source, self.target)
        if bad:
            raise ValueError(f"not an embedding: fails {', '.join(bad)}")

    @property
    def image(self) -> frozenset:
        return frozenset(self.mapping)


@dataclass(frozen=True)
class Copy:
    """A copy of A in B: a closed vertex set of B plus one embedding onto it."""

    vertices: tuple
    mapping: tuple

    def substructure(self, B):
        return induced(B, self.vertices)


def enumerate_copies(A, B) -> list:
    """Closed subsets of B whose induced substructure is isomorphic to A.

    Order-isomorphic when both carry an order; copies come out sorted by vertex set.
    """
    da, rank_a = parts(A)
    db, rank_b = parts(B)
    ordered = rank_a is not None and rank_b is not None
    nblocks = len(da.blocks)
    target = None if ordered else canonical_labeling(da)
    a_seq = sorted(range(da.n), key=rank_a.__getitem__) if ordered else None
    out = []
    for sub in itertools.combinations(range(db.n), da.n):
        members = set(sub)
        if sum(1 for b in db.blocks if members.issuperset(b)) != nblocks:
            continue
        if not is_closed_by_blocks(db, sub):
            continue
        if ordered:
            b_seq = sorted(sub, key=rank_b.__getitem__)
            f = [0] * da.n
            for a, b in zip(a_seq, b_seq):
                f[a] = b
            if check_embedding(f, A, B):
                out.append(Copy(sub, tuple(f)))
        else:
            lab_sub = canonical_labeling(db.induced(sub))
            if lab_sub.design != target.design:
                continue
            # compose: A -label-> canonical <-label- induced(sub) -> sub
            back = {lab: i for i, lab in enumerate(lab_sub.labels)}
            f = tuple(sub[back[target.labels[a]]] for a in range(da.n))
            out.append(Copy(sub, f))
    return out


# -- canonical forms ---------------------------------------------------------


@dataclass(frozen=True)
class Labeling:
    labels: tuple          # labels[v] is the canonical label of vertex v
    design: PartialDesign  # the relabelled design
    automorphisms: int


def _refine_colors(design: PartialDesign) -> list:
    """Iterated colour refinement of vertices by block membership."""
    inc = design.vertex_index
    color = [0 if not inc[v] else 1 for v in range(design.n)]
    color = _rank([(c == 0, -len(inc[v])) for v, c in enumerate(color)])
    while True:
        sigs = []
        for v in range(design.n):
            around = sorted(tuple(sorted(color[u] for u in b if u != v)) for b in inc[v])
            sigs.append((color[v], tuple(around)))
        new = _rank(sigs)
        if len(set(new)) == len(set(color)):
            return new
        color = new


def _rank(sigs: list) -> list:
    table = {s: i for i, s in enumerate(sorted(set(sigs)))}
    return [table[s] for s in sigs]


def _colex_rank(labels: Sequence[int]) -> int:
    return sum(comb(x, i + 1) for i, x in enumerate(sorted(labels)))


def canonical_labeling(x, limit: int = CANONICAL_SIZE_LIMIT) -> Labeling:
    """Labelling maximising the colex block-incidence string over colour-respecting orders.

    Isolated vertices are labelled last.  The search keeps, level by level, every
    partial labelling whose prefix ties for the maximum, so the count of
    survivors at the end is the automorphism group order.
    """
    design, _ = parts(x)
    if design.n > limit:
        raise SizeLimit(f"canonical labelling is limited to {limit} vertices, got {design.n}")
    k = design.params.k
    inc = design.vertex_index
    color = _refine_colors(design)
    live = sorted((v for v in range(design.n) if inc[v]), key=lambda v: (color[v], v))
    isolated = [v for v in range(design.n) if not inc[v]]
    slots = [color[v] for v in live]

    states = [()]
    for m, cell in enumerate(slots):
        width = comb(m, k - 1)
        best, survivors = -1, []
        for state in states:
            pos = {v: i for i, v in enumerate(state)}
            for v in live:
                if color[v] != cell or v in pos:
                    continue
                seg = 0
                for b in inc[v]:
                    others = [pos.get(u) for u in b if u != v]
                    if None in others:
                        continue
                    seg |= 1 << (width - 1 - _colex_rank(others))
                if seg > best:
                    best, survivors = seg, [state + (v,)]
                elif seg == best:
                    survivors.append(state + (v,))
        states = survivors
    chosen = min(states)
    labels = [0] * design.n
    for i, v in enumerate(chosen + tuple(isolated)):
        labels[v] = i
    relabelled = design.relabel(labels)
    return Labeling(tuple(labels), relabelled, len(states) * factorial(len(isolated)))


def _ordered_canonical_design(x) -> PartialDesign:
    design, rank = parts(x)
    return design.relabel(rank)


def canonical_design(x, ordered: Optional[bool] = None, limit: int = CANONICAL_SIZE_LIMIT) -> PartialDesign:
    _, rank = parts(x)
    if ordered is None:
        ordered = rank is not None
    if ordered:
        if rank is None:
            raise TypeError("ordered canonical form needs an ordered input")
        return _ordered_canonical_design(x)
    return canonical_labeling(x, limit).design


def canonical_form(x, ordered: Optional[bool] = None, limit: int = CANONICAL_SIZE_LIMIT) -> bytes:
    """Byte string equal for two inputs iff they are isomorphic (order-isomorphic if ordered)."""
    return format_design(canonical_design(x, ordered, limit)).encode()


def canonical_digest(x, ordered: Optional[bool] = None) -> str:
    return hashlib.sha256(canonical_form(x, ordered)).hexdigest()


def automorphism_count(x) -> int:
    _, rank = parts(x)
    if rank is not None:
        return 1
    return canonical_labeling(x).automorphisms


def are_isomorphic(x, y, ordered: Optional[bool] = None) -> bool:
    dx, _ = parts(x)
    dy, _ = parts(y)
    if dx.params != dy.params or dx.n != dy.n or len(dx.blocks) != len(dy.blocks):
        return False
    return canonical_form(x, ordered) == canonical_form(y, ordered)


def find_isomorphism_brute(x, y) -> Optional[tuple]:
    """Search all bijections; the reference oracle for :func:`canonical_form`."""
    dx, _ = parts(x)
    dy, _ = parts(y)
    if dx.n != dy.n or len(dx.blocks) != len(dy.blocks):
        return None
    for perm in itertools.permutations(range(dy.n)):
        if dx.relabel(perm).blocks == dy.blocks:
            return perm
    return None
