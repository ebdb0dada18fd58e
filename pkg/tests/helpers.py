"""Shared builders, random generators and brute-force oracles for the tests."""

import random
from functools import lru_cache
from fractions import Fraction

from hypothesis import strategies as st

from beliefcond import (
    BBA,
    QBBA,
    DecompositionClass,
    DecompositionContext,
    Frame,
    LabelScale,
    Model,
    classify,
    enumerate_propositions,
    label_sum,
)
from beliefcond.lattice import Atom, Complement, Intersection, Union

L6 = LabelScale(6)
ATOMS = ("A", "B", "C", "D")

# Venn models of the worked examples.
FIG1_CONSTRAINTS = ["A&C", "A&D", "B&C"]
FIG2_CONSTRAINTS = ["A&D&!B"]
FIG3_CONSTRAINTS = ["A&D", "B&D", "C&D"]


def fig1(mode="hyper"):
    return Model.from_constraints(Frame(ATOMS), FIG1_CONSTRAINTS, mode)


def fig2(mode="super"):
    return Model.from_constraints(Frame(ATOMS), FIG2_CONSTRAINTS, mode)


def fig3(mode="super"):
    return Model.from_constraints(Frame(ATOMS), FIG3_CONSTRAINTS, mode)


def shafer3(mode="hyper"):
    return Model.shafer(Frame(("t1", "t2", "t3")), mode)


def bba(model, masses):
    return BBA(model, [(model.parse(k), v) for k, v in masses.items()])


def qbba(model, masses, scale=L6):
    return QBBA(model, scale, [(model.parse(k), scale(v)) for k, v in masses.items()])


def as_text(masses):
    """``{rendered: value}`` with labels as ``L<k>`` strings."""
    return {str(p): (str(v) if hasattr(v, "scale") else v) for p, v in masses.items()}


def expect(model, table):
    """Canonical ``{Proposition: value}`` from ``{expression: value}``."""
    out = {}
    for text, value in table.items():
        out[model.parse(text)] = value
    return out


def as_props(masses):
    return {p: (v.index if hasattr(v, "scale") else v) for p, v in masses.items()}


# -- random generation ---------------------------------------------------------

def frame_of(n):
    return Frame([f"x{i}" for i in range(n)])


def random_model(rng: random.Random, n, mode="hyper", p_empty=None):
    """Random hybrid model: each region independently declared empty."""
    frame = frame_of(n)
    p = rng.random() if p_empty is None else p_empty
    while True:
        empty = [m for m in range(1, 1 << n) if rng.random() < p]
        if len(empty) < (1 << n) - 1:
            return Model(frame, empty, mode)


def all_models(n, mode="hyper"):
    """Every constraint set on ``n`` atoms that leaves some region nonempty."""
    frame = frame_of(n)
    size = (1 << n) - 1
    for choice in range(0, (1 << size) - 1):
        empty = [m for m in range(1, 1 << n) if choice >> (m - 1) & 1]
        yield Model(frame, empty, mode)


def random_bba(rng, props, k=None, denominator=20):
    k = k or rng.randint(1, min(6, len(props)))
    chosen = rng.sample(props, min(k, len(props)))
    weights = [rng.randint(1, denominator) for _ in chosen]
    total = sum(weights)
    return BBA(chosen[0].model, {p: Fraction(w, total) for p, w in zip(chosen, weights)})


def random_qbba(rng, props, scale=L6, exact=True):
    """Random qualitative assignment; ``exact`` makes indices sum to the top label."""
    k = rng.randint(1, min(5, len(props)))
    chosen = rng.sample(props, min(k, len(props)))
    top = scale.max_index
    if exact:
        cuts = sorted(rng.randint(0, top) for _ in range(len(chosen) - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [top])]
    else:
        parts = [rng.randint(0, top) for _ in chosen]
    return QBBA(chosen[0].model, scale, [(p, scale(i)) for p, i in zip(chosen, parts)])


def expression_trees(names, allow_complement=False):
    leaves = st.sampled_from(names).map(Atom)

    def extend(children):
        pair = st.lists(children, min_size=2, max_size=3).map(tuple)
        options = [pair.map(Union), pair.map(Intersection)]
        if allow_complement:
            options.append(children.map(Complement))
        return st.one_of(*options)

    return st.recursive(leaves, extend, max_leaves=8)


# -- direct transcriptions of the rule formulas over the full lattice -----------

@lru_cache(maxsize=4096)
def _context_and_classes(model, event):
    ctx = DecompositionContext.from_event(event)
    lattice = enumerate_propositions(model)
    classes = {x: classify(x, ctx) for x in lattice}
    d1 = [x for x in lattice if classes[x] is DecompositionClass.D1]
    d23 = [x for x in lattice if classes[x] is not DecompositionClass.D1]
    return lattice, d1, d23


def _strict(x, y):
    return x <= y and x != y


def _largest_parts(w, d1):
    inside = [x for x in d1 if _strict(x, w)]
    return [x for x in inside if not any(_strict(x, z) for z in inside)]


def bcr17_oracle(m, event):
    """Term-by-term evaluation of the BCR17 formula, summing over enumerated D1/D2/D3."""
    model = m.model
    _, d1, d23 = _context_and_classes(model, event)
    d1_total = sum(m[y] for y in d1)
    if d1_total == 0:
        return {event: Fraction(1)}

    def s_of(w):
        return sum((m[y] for y in d1 if _strict(y, w)), Fraction(0))

    outside = sum(m[z] for z in d23 if not any(_strict(y, z) for y in d1))
    s_d1 = (d1_total + outside) / d1_total
    result = {}
    for x in d1:
        value = m[x] * (s_d1 + sum((m[w] / s_of(w) for w in d23
                                    if _strict(x, w) and s_of(w) != 0), Fraction(0)))
        for w in d23:
            if m[w] and s_of(w) == 0:
                largest = _largest_parts(w, d1)
                if x in largest:
                    value += m[w] / len(largest)
        if value:
            result[x] = value
    return result


def _qualitative_oracle(qm, event, uniform):
    model, scale = qm.model, qm.scale
    _, d1, d23 = _context_and_classes(model, event)
    q_f = sum(1 for z in d1 if qm[z].index)
    result = {}
    for x in d1:
        terms = [qm[x]]
        for y in d23:
            if not qm[y].index:
                continue
            largest = _largest_parts(y, d1)
            assert len(largest) <= 1, "largest part inside the event must be unique"
            if largest and largest[0] == x:
                terms.append(qm[y])
            elif not largest:
                if not uniform:
                    if x == event:
                        terms.append(qm[y])
                elif q_f and qm[x].index:
                    terms.append(qm[y] // q_f)
                elif q_f == 0 and x == event:
                    terms.append(qm[y])
        total = label_sum(terms).label
        if total.index:
            result[x] = total
    return result


def qbcr1_oracle(qm, event):
    return _qualitative_oracle(qm, event, uniform=False)


def qbcr2_oracle(qm, event):
    return _qualitative_oracle(qm, event, uniform=True)


def bayes_condition(m, event):
    """Classical conditional probability of singleton masses."""
    inside = {p: v for p, v in m.items() if p <= event}
    total = sum(inside.values())
    return {p: v / total for p, v in inside.items()}
