"""Small partial designs up to isomorphism, and backtracking completion."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable, Iterator, Optional

from .errors import Budget
from .morphisms import canonical_form, canonical_labeling
from .structures import Params, PartialDesign, format_design, is_complete_design, require_valid


@dataclass
class EnumerationCensus:
    params: Params
    n: int
    structures: list = field(default_factory=list)
    automorphisms: list = field(default_factory=list)

    @property
    def unlabeled(self) -> int:
        return len(self.structures)

    @property
    def labeled(self) -> int:
        return sum(factorial(self.n) // a for a in self.automorphisms)

    def summary(self) -> str:
        return f"{self.n} {self.unlabeled} {self.labeled}"


def _addable(design: PartialDesign, counts: dict, block: tuple) -> bool:
    if block in design.blocks:
        return False
    lam = design.params.lam
    return all(counts.get(ts, 0) < lam for ts in itertools.combinations(block, design.params.t))


def _tset_counts(design: PartialDesign) -> dict:
    counts: dict = {}
    for b in design.blocks:
        for ts in itertools.combinations(b, design.params.t):
            counts[ts] = counts.get(ts, 0) + 1
    return counts


def enumerate_partial_designs(
    params: Params, n: int, complete_only: bool = False, budget: Optional[int] = None
) -> EnumerationCensus:
    """All partial designs on ``n`` vertices, one canonical representative per class.

    Grows designs one block at a time and keeps a child only if its canonical
    form has not been seen at that block count.
    """
    counter = Budget(budget)
    candidates = list(itertools.combinations(range(n), params.k))
    level = {canonical_form(PartialDesign(params, n)): PartialDesign(params, n)}
    found = dict(level)
    while level:
        nxt: dict = {}
        for d in level.values():
            counts = _tset_counts(d)
            for b in candidates:
                if not _addable(d, counts, b):
                    continue
                counter.tick()
                child = d.with_blocks([b])
                lab = canonical_labeling(child)
                key = format_design(lab.design).encode()
                if key not in nxt:
                    nxt[key] = lab.design
        found.update(nxt)
        level = nxt
    census = EnumerationCensus(params, n)
    for key in sorted(found, key=lambda k: (len(found[k].blocks), k)):
        d = found[key]
        if complete_only and not is_complete_design(d):
            continue
        lab = canonical_labeling(d)
        census.structures.append(lab.design)
        census.automorphisms.append(lab.automorphisms)
    return census


def labeled_partial_designs(params: Params, n: int) -> Iterator[PartialDesign]:
    """Every labelled partial design on ``n`` vertices, by filtering block subsets depth-first."""
    candidates = list(itertools.combinations(range(n), params.k))

    def grow(start, blocks, counts):
        yield PartialDesign(params, n, frozenset(blocks))
        for i in range(start, len(candidates)):
            b = candidates[i]
            tsets = list(itertools.combinations(b, params.t))
            if any(counts.get(ts, 0) >= params.lam for ts in tsets):
                continue
            for ts in tsets:
                counts[ts] = counts.get(ts, 0) + 1
            blocks.append(b)
            yield from grow(i + 1, blocks, counts)
            blocks.pop()
            for ts in tsets:
                counts[ts] -= 1

    yield from grow(0, [], {})


# -- completion --------------------------------------------------------------


def divisibility_admissible(params: Params, n: int) -> bool:
    """Standard necessary conditions: C(k-i, t-i) divides lambda * C(n-i, t-i) for i < t."""
    return all(
        (params.lam * comb(max(n - i, 0), params.t - i)) % comb(params.k - i, params.t - i) == 0
        for i in range(params.t)
    )


def _completions(partial: PartialDesign, counter: Budget) -> Iterator[PartialDesign]:
    p = partial.params
    n = partial.n
    counts = _tset_counts(partial)
    blocks = set(partial.blocks)
    tsets = list(itertools.combinations(range(n), p.t))

    def open_block(b):
        return b not in blocks and all(
            counts.get(ts, 0) < p.lam for ts in itertools.combinations(b, p.t)
        )

    def candidates(T):
        rest = [v for v in range(n) if v not in T]
        out = []
        for extra in itertools.combinations(rest, p.k - p.t):
            b = tuple(sorted(T + extra))
            if open_block(b):
                out.append(b)
        return out

    def place(b, delta):
        for ts in itertools.combinations(b, p.t):
            counts[ts] = counts.get(ts, 0) + delta

    def search():
        counter.tick()
        # fail-first: the deficient t-set with the fewest candidate blocks
        best = None
        for T in tsets:
            need = p.lam - counts.get(T, 0)
            if need <= 0:
                continue
            cands = candidates(T)
            if len(cands) < need:
                return
            if best is None or len(cands) < len(best[2]):
                best = (T, need, cands)
        if best is None:
            yield PartialDesign(p, n, frozenset(blocks))
            return
        T, need, cands = best
        for chosen in itertools.combinations(cands, need):
            placed = []
            for b in chosen:
                if not open_block(b):
                    break
                place(b, 1)
                blocks.add(b)
                placed.append(b)
            else:
                yield from search()
            for b in placed:
                place(b, -1)
                blocks.discard(b)

    yield from search()


def complete_design(
    partial: PartialDesign,
    budget: Optional[int] = None,
    admissible: Optional[Callable[[Params, int], bool]] = None,
) -> Optional[PartialDesign]:
    """First completion on the same vertex set, or None if there is none.

    ``admissible`` is an optional precheck; when it rejects ``(params, n)`` the
    search is skipped.
    """
    require_valid(partial)
    if admissible is not None and not admissible(partial.params, partial.n):
        return None
    return next(_completions(partial, Budget(budget)), None)


def all_completions(partial: PartialDesign, budget: Optional[int] = None) -> list:
    require_valid(partial)
    return list(_completions(partial, Budget(budget)))


def count_completions(partial: PartialDesign, budget: Optional[int] = None) -> int:
    require_valid(partial)
    return sum(1 for _ in _completions(partial, Budget(budget)))


def complete_growing(
    partial: PartialDesign,
    max_n: int,
    budget: Optional[int] = None,
    admissible: Callable[[Params, int], bool] = divisibility_admissible,
) -> Optional[PartialDesign]:
    """Try completions on ``n, n+1, ..., max_n`` vertices, skipping inadmissible sizes."""
    require_valid(partial)
    for n in range(partial.n, max_n + 1):
        if not admissible(partial.params, n):
            continue
        found = complete_design(partial.with_n(n), budget)
        if found is not None:
            return found
    return None


def unlabeled_count(designs) -> int:
    return len({canonical_form(d, ordered=False) for d in designs})
