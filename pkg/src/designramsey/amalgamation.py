"""Free amalgamation over closed substructures and the class axiom audit."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import Budget, InvalidInput, NotClosed
from .morphisms import (
    check_embedding,
    closed_subsets,
    closure_of,
    embeddings,
    induced,
    is_closed,
    parts,
)
from .structures import OrderedDesign, Params, PartialDesign, validate


@dataclass(frozen=True)
class AmalgamProblem:
    A: object
    B1: object
    B2: object
    alpha1: tuple
    alpha2: tuple


@dataclass(frozen=True)
class Amalgam:
    C: object
    beta1: tuple
    beta2: tuple


def _is_ordered(x) -> bool:
    return parts(x)[1] is not None


def _check_problem(p: AmalgamProblem) -> None:
    designs = [parts(x)[0] for x in (p.A, p.B1, p.B2)]
    if len({d.params for d in designs}) != 1:
        raise InvalidInput("A, B1 and B2 must share parameters")
    for name, d in zip(("A", "B1", "B2"), designs):
        report = validate(d)
        if not report.ok:
            raise InvalidInput(f"{name} is not a partial design: {report.violations[0]}")
    for name, alpha, B in (("alpha1", p.alpha1, p.B1), ("alpha2", p.alpha2, p.B2)):
        if len(alpha) != designs[0].n or len(set(alpha)) != len(alpha):
            raise InvalidInput(f"{name} is not an injective map on A")
        if not is_closed(B, alpha):
            raise NotClosed(f"{name} image {sorted(alpha)} is not closed")
        if not check_embedding(alpha, p.A, B):
            raise InvalidInput(f"{name} is not an embedding")


def free_amalgam(p: AmalgamProblem, check: bool = True) -> Amalgam:
    """Glue B1 and B2 along the images of A, adding no block across the two sides.

    B1 keeps its vertex ids; the vertices of B2 outside the image of A follow in
    id order.  With ``check=False`` the inputs are glued without validation,
    which is how a non-closed base is shown to break the class.
    """
    if check:
        _check_problem(p)
    d1, rank1 = parts(p.B1)
    d2, rank2 = parts(p.B2)
    alpha1, alpha2 = tuple(p.alpha1), tuple(p.alpha2)
    from_a = {y: a for a, y in enumerate(alpha2)}
    fresh = [y for y in range(d2.n) if y not in from_a]
    beta2 = [0] * d2.n
    for y in range(d2.n):
        beta2[y] = alpha1[from_a[y]] if y in from_a else d1.n + fresh.index(y)
    n = d1.n + len(fresh)
    blocks = set(d1.blocks)
    blocks.update(tuple(sorted(beta2[v] for v in b)) for b in d2.blocks)
    design = PartialDesign(d1.params, n, frozenset(blocks))

    if all(_is_ordered(x) for x in (p.A, p.B1, p.B2)):
        C = OrderedDesign(design, _merge_orders(p.B1, p.B2, alpha1, alpha2, beta2))
    else:
        C = design
    return Amalgam(C, tuple(range(d1.n)), tuple(beta2))


def _merge_orders(B1, B2, alpha1, alpha2, beta2) -> tuple:
    """B1's order, with each new vertex of B2 placed right after its nearest A-predecessor in B2."""
    from_a = {y: a for a, y in enumerate(alpha2)}
    groups: dict = {}
    pred = None
    for y in B2.order:
        if y in from_a:
            pred = alpha1[from_a[y]]
        else:
            groups.setdefault(pred, []).append(beta2[y])
    order = list(groups.get(None, []))
    for x in B1.order:
        order.append(x)
        order.extend(groups.get(x, []))
    return tuple(order)


def certify(p: AmalgamProblem, amalgam: Amalgam) -> dict:
    """Check every property a free amalgam must have; maps condition name to verdict."""
    C = amalgam.C
    dc, _ = parts(C)
    d1, _ = parts(p.B1)
    b1, b2 = amalgam.beta1, amalgam.beta2
    img1, img2 = set(b1), set(b2)
    base = {b1[a] for a in p.alpha1}
    only1, only2 = img1 - base, img2 - base
    return {
        "valid-design": validate(dc).ok,
        "beta1-embedding": check_embedding(b1, p.B1, C),
        "beta2-embedding": check_embedding(b2, p.B2, C),
        "beta1-closed": is_closed(C, img1),
        "beta2-closed": is_closed(C, img2),
        "commutes": all(b1[x] == b2[y] for x, y in zip(p.alpha1, p.alpha2)),
        "overlap-is-base": img1 & img2 == base,
        "free": not any(
            any(v in only1 for v in b) and any(v in only2 for v in b) for b in dc.blocks
        ),
        "covers": img1 | img2 == set(range(dc.n)),
    }


def empty_like(x):
    d, rank = parts(x)
    empty = PartialDesign(d.params, 0)
    return OrderedDesign(empty, ()) if rank is not None else empty


def joint_embedding(B1, B2) -> Amalgam:
    """Free amalgam over the empty structure (a disjoint union)."""
    ordered = _is_ordered(B1) and _is_ordered(B2)
    A = empty_like(B1) if ordered else PartialDesign(parts(B1)[0].params, 0)
    return free_amalgam(AmalgamProblem(A, B1, B2, (), ()))


# -- class axioms ------------------------------------------------------------


@dataclass
class AxiomReport:
    params: Params
    size_bound: int
    structures: int = 0
    hereditary_checks: int = 0
    jep_checks: int = 0
    amalgamation_checks: int = 0
    counterexamples: list = field(default_factory=list)

    def holds(self, axiom: Optional[str] = None) -> bool:
        return not any(axiom is None or c[0] == axiom for c in self.counterexamples)

    @property
    def hereditary(self) -> bool:
        return self.holds("hereditary")

    @property
    def joint_embedding(self) -> bool:
        return self.holds("jep")

    @property
    def amalgamation(self) -> bool:
        return self.holds("amalgamation")


def class_members(params: Params, size_bound: int, budget: Optional[int] = None) -> list:
    """One representative per isomorphism class, all sizes ``0..size_bound``."""
    from .enumeration import enumerate_partial_designs

    reps = []
    for n in range(size_bound + 1):
        reps.extend(enumerate_partial_designs(params, n, budget=budget).structures)
    return reps


def check_class_axioms(params: Params, size_bound: int, budget: Optional[int] = None) -> AxiomReport:
    """Exhaustively audit hereditary, joint embedding and amalgamation properties up to ``size_bound``."""
    counter = Budget(budget)
    reps = class_members(params, size_bound, budget)
    report = AxiomReport(params, size_bound, structures=len(reps))

    for d in reps:
        for sub in closed_subsets(d):
            counter.tick()
            report.hereditary_checks += 1
            part = d.induced(sub)
            if not validate(part).ok or not check_embedding(sub, part, d):
                report.counterexamples.append(("hereditary", d, sub))

    for d1, d2 in itertools.product(reps, repeat=2):
        counter.tick()
        report.jep_checks += 1
        p = AmalgamProblem(PartialDesign(params, 0), d1, d2, (), ())
        bad = [k for k, ok in certify(p, free_amalgam(p)).items() if not ok]
        if bad:
            report.counterexamples.append(("jep", d1, d2, bad))

    emb_cache: dict = {}
    for a in reps:
        for b in reps:
            if a.n <= b.n:
                emb_cache[a, b] = embeddings(a, b)
    for a in reps:
        targets = [b for b in reps if (a, b) in emb_cache and emb_cache[a, b]]
        for b1, b2 in itertools.product(targets, repeat=2):
            for f1 in emb_cache[a, b1]:
                for f2 in emb_cache[a, b2]:
                    counter.tick()
                    report.amalgamation_checks += 1
                    p = AmalgamProblem(a, b1, b2, f1, f2)
                    bad = [k for k, ok in certify(p, free_amalgam(p)).items() if not ok]
                    if bad:
                        report.counterexamples.append(("amalgamation", a, b1, b2, f1, f2, bad))
    report.counterexamples.sort(key=repr)
    return report


# -- random problems ---------------------------------------------------------


def random_design(params: Params, n: int, rng: random.Random, tries: int = 30) -> PartialDesign:
    """Greedy random partial design: add random k-sets while the lambda bound allows."""
    counts: dict = {}
    blocks = set()
    if n < params.k:
        return PartialDesign(params, n)
    for _ in range(rng.randrange(tries + 1)):
        b = tuple(sorted(rng.sample(range(n), params.k)))
        if b in blocks:
            continue
        tsets = list(itertools.combinations(b, params.t))
        if all(counts.get(ts, 0) < params.lam for ts in tsets):
            blocks.add(b)
            for ts in tsets:
                counts[ts] = counts.get(ts, 0) + 1
    return PartialDesign(params, n, frozenset(blocks))


def _random_extension(A: PartialDesign, m: int, rng: random.Random, tries: int = 30):
    """Random design on ``A.n + m`` vertices containing a closed copy of A at random positions."""
    params = A.params
    n = A.n + m
    alpha = tuple(rng.sample(range(n), A.n))
    base = A.relabel(alpha, n)
    image = set(alpha)
    counts: dict = {}
    for b in base.blocks:
        for ts in itertools.combinations(b, params.t):
            counts[ts] = counts.get(ts, 0) + 1
    blocks = set(base.blocks)
    if n >= params.k:
        for _ in range(rng.randrange(tries + 1)):
            b = tuple(sorted(rng.sample(range(n), params.k)))
            if b in blocks or sum(v in image for v in b) >= params.t:
                continue
            tsets = list(itertools.combinations(b, params.t))
            if all(counts.get(ts, 0) < params.lam for ts in tsets):
                blocks.add(b)
                for ts in tsets:
                    counts[ts] = counts.get(ts, 0) + 1
    return PartialDesign(params, n, frozenset(blocks)), alpha


def _order_with(n: int, alpha: tuple, a_order: tuple, rng: random.Random) -> tuple:
    """Random order on ``0..n-1`` inducing ``a_order`` on the image of ``alpha``."""
    order = list(range(n))
    rng.shuffle(order)
    image = set(alpha)
    slots = [i for i, v in enumerate(order) if v in image]
    for i, a in zip(slots, a_order):
        order[i] = alpha[a]
    return tuple(order)


def random_problem(params: Params, rng: random.Random, max_n: int = 9, ordered: bool = False) -> AmalgamProblem:
    """Random amalgamation problem over a closed base (closure of a random small set in B1)."""
    n1 = rng.randint(0, max_n)
    B1 = random_design(params, n1, rng)
    seed = rng.sample(range(n1), rng.randint(0, min(n1, params.t + 1)))
    base = tuple(sorted(closure_of(B1, seed)))
    A = B1.induced(base)
    B2, alpha2 = _random_extension(A, rng.randint(0, max(0, max_n - A.n)), rng)
    alpha1 = base
    if not ordered:
        return AmalgamProblem(A, B1, B2, alpha1, alpha2)
    o1 = list(range(n1))
    rng.shuffle(o1)
    B1o = OrderedDesign(B1, tuple(o1))
    Ao = induced(B1o, base)
    B2o = OrderedDesign(B2, _order_with(B2.n, alpha2, Ao.order, rng))
    return AmalgamProblem(Ao, B1o, B2o, alpha1, alpha2)
