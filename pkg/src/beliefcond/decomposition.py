"""Split nonempty propositions into three classes relative to a conditioning event.

* ``D1``: parts of the event ``A``.
* ``D2``: in hyper mode, propositions generated by union and intersection from
  the atoms that do not occur in ``A``'s expression; in super mode, nonempty
  parts of the complement of ``A``.
* ``D3``: everything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import CapacityError, DomainError, ImpossibleProblemError
from .lattice import Model, Mode, Proposition, canonicalize, parse_expression, render

MAX_CLOSURE_GENERATORS = 5
MAX_SUPER_REGIONS = 16


class DecompositionClass(str, Enum):
    D1 = "D1"
    D2 = "D2"
    D3 = "D3"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class DecompositionContext:
    """Conditioning event with the atoms its expression mentions."""

    event: Proposition
    support_atoms: frozenset

    def __post_init__(self):
        if self.event.is_empty:
            raise ImpossibleProblemError("conditioning event is empty under model")
        object.__setattr__(self, "support_atoms", frozenset(self.support_atoms))
        for name in self.support_atoms:
            self.event.model.frame.index(name)

    @classmethod
    def from_expression(cls, expr, model: Model) -> DecompositionContext:
        if isinstance(expr, str):
            expr = parse_expression(expr, model.frame)
        return cls(canonicalize(expr, model), expr.atoms)

    @classmethod
    def from_event(cls, event: Proposition) -> DecompositionContext:
        """Use the atoms of the event's rendered form as its support."""
        text = render(event)
        return cls(event, parse_expression(text, event.model.frame).atoms)

    @property
    def model(self) -> Model:
        return self.event.model

    @property
    def outside_atoms(self) -> tuple:
        frame = self.model.frame
        return tuple(a for a in frame.atoms if a not in self.support_atoms)


def generated_hull(y: Proposition, atoms: Iterable[str]) -> Proposition | None:
    """Smallest proposition built from ``atoms`` with union/intersection containing ``y``.

    Returns None when some region of ``y`` lies outside every given atom.
    """
    model = y.model
    frame = model.frame
    mask = frame.subset_mask(atoms)
    hull = 0
    for region in y:
        inside = region & mask
        if not inside:
            return None
        hull |= frame.intersection_bits(inside)
    return Proposition(hull & model.full_bits, model)


def is_generated_by(y: Proposition, atoms: Iterable[str]) -> bool:
    """Whether ``y`` lies in the union/intersection closure of ``atoms``."""
    if y.is_empty:
        return False
    hull = generated_hull(y, atoms)
    return hull is not None and hull.regions == y.regions


def classify(y: Proposition, ctx: DecompositionContext) -> DecompositionClass:
    if y.is_empty:
        raise DomainError("cannot classify the empty proposition")
    event = ctx.event
    if y <= event:
        return DecompositionClass.D1
    if ctx.model.mode is Mode.SUPER:
        if not (y & event):
            return DecompositionClass.D2
        return DecompositionClass.D3
    if is_generated_by(y, ctx.outside_atoms):
        return DecompositionClass.D2
    return DecompositionClass.D3


def decompose(focals: Iterable[Proposition], ctx: DecompositionContext) -> dict:
    return {y: classify(y, ctx) for y in focals}


def enumerate_closure(atoms: Iterable[str], model: Model) -> set:
    """All nonempty propositions reachable from ``atoms`` by union and intersection.

    Computed as a fixpoint: first close the atoms under intersection, then
    close the result under union.
    """
    atoms = list(dict.fromkeys(atoms))
    if len(atoms) > MAX_CLOSURE_GENERATORS:
        raise CapacityError(
            f"closure of {len(atoms)} generators exceeds limit {MAX_CLOSURE_GENERATORS}")
    gens = {model.atom(a).regions for a in atoms}

    meets = set(gens)
    frontier = set(gens)
    while frontier:
        fresh = set()
        for x in frontier:
            for g in gens:
                value = x & g
                if value not in meets:
                    fresh.add(value)
        meets |= fresh
        frontier = fresh

    joins = set(meets)
    frontier = set(meets)
    while frontier:
        fresh = set()
        for x in frontier:
            for g in meets:
                value = x | g
                if value not in joins:
                    fresh.add(value)
        joins |= fresh
        frontier = fresh

    joins.discard(0)
    return {Proposition(bits, model) for bits in joins}


def enumerate_propositions(model: Model) -> list:
    """Every nonempty proposition of the model's lattice, ordered by bitset.

    Hyper mode yields the union/intersection closure of all atoms; super mode
    every nonempty set of regions.
    """
    if model.mode is Mode.HYPER:
        props = enumerate_closure(model.frame.atoms, model)
        return sorted(props, key=lambda p: p.regions)
    regions = model.nonempty_minterms
    if len(regions) > MAX_SUPER_REGIONS:
        raise CapacityError(f"{len(regions)} regions is too many to enumerate")
    out = []
    for choice in range(1, 1 << len(regions)):
        bits = 0
        for k, m in enumerate(regions):
            if choice >> k & 1:
                bits |= 1 << m
        out.append(Proposition(bits, model))
    return sorted(out, key=lambda p: p.regions)

