"""Frames, hybrid models and propositions as sets of Venn regions.

A *minterm* is a nonempty subset of atoms, encoded as an int whose bit ``i``
is set when atom ``i`` contains the region.  A proposition is a bitset over
minterms (bit ``m`` set when region ``m`` belongs to it), always restricted
to the regions the model keeps nonempty.  With this encoding union,
intersection, complement and inclusion are single integer operations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, Union as TUnion

from .errors import (
    CapacityError,
    DomainError,
    ExpressionSyntaxError,
    ModeError,
    ModelMismatchError,
    UnknownAtomError,
)

MAX_ATOMS = 16
ENUM_MAX_ATOMS = 6
EMPTY_SYMBOL = "∅"

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Mode(str, Enum):
    HYPER = "hyper"  # propositions built with union and intersection only
    SUPER = "super"  # complement allowed as well

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Frame:
    atoms: tuple

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not 1 <= len(atoms) <= MAX_ATOMS:
            raise DomainError(f"frame needs 1..{MAX_ATOMS} atoms, got {len(atoms)}")
        for name in atoms:
            if not isinstance(name, str) or not _ATOM_RE.match(name):
                raise DomainError(f"invalid atom name {name!r}")
        if len(set(atoms)) != len(atoms):
            raise DomainError(f"duplicate atom names in {atoms}")

    @property
    def n(self) -> int:
        return len(self.atoms)

    @cached_property
    def _positions(self) -> dict:
        return {name: i for i, name in enumerate(self.atoms)}

    def index(self, name: str) -> int:
        try:
            return self._positions[name]
        except KeyError:
            raise DomainError(f"unknown atom {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._positions

    def subset_mask(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def names(self, mask: int) -> tuple:
        return tuple(a for i, a in enumerate(self.atoms) if mask >> i & 1)

    @cached_property
    def universe(self) -> int:
        """Bitset of every nonempty minterm, ignoring any model."""
        return ((1 << (1 << self.n)) - 1) & ~1

    @cached_property
    def atom_bits(self) -> tuple:
        """Per atom, the bitset of minterms lying inside it."""
        size = 1 << self.n
        bits = []
        for i in range(self.n):
            width = 1 << i
            period = width << 1
            block = ((1 << width) - 1) << width
            bits.append(block * (((1 << size) - 1) // ((1 << period) - 1)))
        return tuple(bits)

    def intersection_bits(self, mask: int) -> int:
        """Regions inside every atom of ``mask`` (unconstrained)."""
        bits = self.universe
        for i in range(self.n):
            if mask >> i & 1:
                bits &= self.atom_bits[i]
        return bits


# -- expression syntax -------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str
    offset: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Union:
    items: tuple


@dataclass(frozen=True)
class Intersection:
    items: tuple


@dataclass(frozen=True)
class Complement:
    operand: object
    offset: int = field(default=0, compare=False)


Node = TUnion[Atom, Union, Intersection, Complement]


@dataclass(frozen=True)
class Expression:
    """Parsed proposition expression plus the text it came from."""

    root: Node
    text: str = ""

    @property
    def atoms(self) -> frozenset:
        return atoms_of(self.root)

    @property
    def has_complement(self) -> bool:
        return _find_complement(self.root) is not None


def atoms_of(node) -> frozenset:
    """Atom names occurring syntactically in an expression."""
    if isinstance(node, Expression):
        node = node.root
    if isinstance(node, Atom):
        return frozenset([node.name])
    if isinstance(node, Complement):
        return atoms_of(node.operand)
    return frozenset().union(*(atoms_of(item) for item in node.items))


def _find_complement(node):
    if isinstance(node, Complement):
        return node
    if isinstance(node, (Union, Intersection)):
        for item in node.items:
            found = _find_complement(item)
            if found is not None:
                return found
    return None


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        char = text[pos]
        if char.isspace():
            pos += 1
            continue
        match = _IDENT_RE.match(text, pos)
        if match:
            tokens.append(("atom", match.group(), pos))
            pos = match.end()
            continue
        if char not in "|&!()":
            raise ExpressionSyntaxError(f"unexpected character {char!r}", pos)
        tokens.append((char, char, pos))
        pos += 1
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    # expr := term ('|' term)* ; term := factor ('&' factor)* ;
    # factor := '!' factor | '(' expr ')' | atom

    def __init__(self, text, frame):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.frame = frame

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expr(self):
        items = [self.term()]
        while self.peek()[0] == "|":
            self.take()
            items.append(self.term())
        return items[0] if len(items) == 1 else Union(tuple(items))

    def term(self):
        items = [self.factor()]
        while self.peek()[0] == "&":
            self.take()
            items.append(self.factor())
        return items[0] if len(items) == 1 else Intersection(tuple(items))

    def factor(self):
        kind, value, offset = self.take()
        if kind == "!":
            return Complement(self.factor(), offset)
        if kind == "(":
            inner = self.expr()
            kind, _, close = self.take()
            if kind != ")":
                raise ExpressionSyntaxError("expected ')'", close)
            return inner
        if kind == "atom":
            if self.frame is not None and value not in self.frame:
                raise UnknownAtomError(f"unknown atom {value!r}", offset)
            return Atom(value, offset)
        if kind == "end":
            raise ExpressionSyntaxError("unexpected end of expression", offset)
        raise ExpressionSyntaxError(f"unexpected {value!r}", offset)


def parse_expression(text: str, frame: Frame | None = None) -> Expression:
    """Parse ``text`` with ``!`` binding tighter than ``&``, and ``&`` than ``|``."""
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    parser = _Parser(text, frame)
    root = parser.expr()
    kind, value, offset = parser.peek()
    if kind != "end":
        raise ExpressionSyntaxError(f"unexpected {value!r}", offset)
    return Expression(root, text)


def _evaluate(node, frame: Frame, universe: int) -> int:
    if isinstance(node, Atom):
        return frame.atom_bits[frame.index(node.name)] & universe
    if isinstance(node, Complement):
        return universe & ~_evaluate(node.operand, frame, universe)
    values = [_evaluate(item, frame, universe) for item in node.items]
    result = values[0]
    if isinstance(node, Union):
        for value in values[1:]:
            result |= value
    else:
        for value in values[1:]:
            result &= value
    return result


# -- models and propositions ------------------------------------------------

class Model:
    """A frame together with the Venn regions its integrity constraints empty."""

    def __init__(self, frame: Frame, empty_minterms: Iterable[int] = (), mode=Mode.HYPER):
        if not isinstance(frame, Frame):
            frame = Frame(frame)
        self.frame = frame
        self.mode = Mode(mode)
        empty = frozenset(empty_minterms)
        for m in empty:
            if not 0 < m < 1 << frame.n:
                raise DomainError(f"minterm {m} is not a nonempty subset of the atoms")
        self.empty_minterms = empty
        full = frame.universe
        for m in empty:
            full &= ~(1 << m)
        if not full:
            raise DomainError("model declares every region empty")
        self.full_bits = full

    @classmethod
    def free(cls, frame, mode=Mode.HYPER) -> Model:
        return cls(frame, (), mode)

    @classmethod
    def shafer(cls, frame, mode=Mode.HYPER) -> Model:
        if not isinstance(frame, Frame):
            frame = Frame(frame)
        empty = [m for m in range(1, 1 << frame.n) if m & (m - 1)]
        return cls(frame, empty, mode)

    @classmethod
    def from_constraints(cls, frame, expressions: Iterable, mode=Mode.HYPER) -> Model:
        """Every region of each listed expression (evaluated unconstrained) is empty."""
        if not isinstance(frame, Frame):
            frame = Frame(frame)
        dead = 0
        for expr in expressions:
            if isinstance(expr, str):
                expr = parse_expression(expr, frame)
            dead |= _evaluate(expr.root, frame, frame.universe)
        empty = [m for m in range(1, 1 << frame.n) if dead >> m & 1]
        return cls(frame, empty, mode)

    def _key(self):
        return (self.frame, self.empty_minterms, self.mode)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Model) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"Model(atoms={list(self.frame.atoms)}, mode={self.mode.value}, "
                f"empty={sorted(self.frame.names(m) for m in self.empty_minterms)})")

    @cached_property
    def nonempty_minterms(self) -> tuple:
        return tuple(m for m in range(1, 1 << self.frame.n) if self.full_bits >> m & 1)

    def with_mode(self, mode) -> Model:
        return Model(self.frame, self.empty_minterms, mode)

    # constructors for propositions
    def proposition(self, regions: int) -> Proposition:
        return Proposition(regions, self)

    @property
    def empty(self) -> Proposition:
        return Proposition(0, self)

    @property
    def full(self) -> Proposition:
        return Proposition(self.full_bits, self)

    def atom(self, name: str) -> Proposition:
        return Proposition(self.frame.atom_bits[self.frame.index(name)] & self.full_bits, self)

    def intersection_of(self, names: Iterable[str]) -> Proposition:
        return Proposition(
            self.frame.intersection_bits(self.frame.subset_mask(names)) & self.full_bits, self)

    def parse(self, text: str) -> Proposition:
        return canonicalize(parse_expression(text, self.frame), self)

    def from_minterms(self, minterms: Iterable) -> Proposition:
        """Build from region names, e.g. ``[("A",), ("A", "B")]``."""
        bits = 0
        for m in minterms:
            if not isinstance(m, int):
                m = self.frame.subset_mask(m)
            bits |= 1 << m
        if bits & ~self.full_bits:
            raise DomainError("minterm declared empty by the model")
        return Proposition(bits, self)


class Proposition:
    """Canonical region set of a proposition; equality is region-set equality."""

    __slots__ = ("regions", "model")

    def __init__(self, regions: int, model: Model):
        if regions & ~model.full_bits:
            raise DomainError("proposition contains regions the model declares empty")
        self.regions = regions
        self.model = model

    def _same(self, other: Proposition) -> None:
        if not isinstance(other, Proposition):
            raise TypeError(f"expected Proposition, got {type(other).__name__}")
        if other.model is not self.model and other.model != self.model:
            raise ModelMismatchError("propositions belong to different models")

    def __eq__(self, other):
        if not isinstance(other, Proposition):
            return NotImplemented
        return self.regions == other.regions and (
            self.model is other.model or self.model == other.model)

    def __hash__(self):
        return hash(self.regions)

    def __or__(self, other):
        return prop_union(self, other)

    def __and__(self, other):
        return prop_intersect(self, other)

    def __invert__(self):
        return prop_complement(self)

    def __le__(self, other):
        return is_subset(self, other)

    def __lt__(self, other):
        return is_subset(self, other) and self.regions != other.regions

    def __bool__(self):
        return self.regions != 0

    def __iter__(self) -> Iterator[int]:
        """Yield the minterms (atom masks) in ascending order."""
        bits = self.regions
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self):
        return bin(self.regions).count("1")

    @property
    def is_empty(self) -> bool:
        return self.regions == 0

    @property
    def hex(self) -> str:
        return format(self.regions, "x")

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"<Proposition {render(self)} 0x{self.hex}>"


def prop_union(p: Proposition, q: Proposition) -> Proposition:
    p._same(q)
    return Proposition(p.regions | q.regions, p.model)


def prop_intersect(p: Proposition, q: Proposition) -> Proposition:
    p._same(q)
    return Proposition(p.regions & q.regions, p.model)


def prop_complement(p: Proposition) -> Proposition:
    if p.model.mode is not Mode.SUPER:
        raise ModeError("complement is only available on super-power set models")
    return Proposition(p.model.full_bits & ~p.regions, p.model)


def is_subset(p: Proposition, q: Proposition) -> bool:
    p._same(q)
    return p.regions & ~q.regions == 0


def is_empty(p: Proposition) -> bool:
    return p.regions == 0


def canonicalize(expr, model: Model) -> Proposition:
    """Evaluate an expression over the model's regions."""
    if isinstance(expr, str):
        expr = parse_expression(expr, model.frame)
    root = expr.root if isinstance(expr, Expression) else expr
    if model.mode is Mode.HYPER:
        found = _find_complement(root)
        if found is not None:
            raise ModeError(
                f"complement at offset {found.offset} is not allowed in hyper mode")
    for name in atoms_of(root):
        if name not in model.frame:
            raise UnknownAtomError(f"unknown atom {name!r}", 0)
    return Proposition(_evaluate(root, model.frame, model.full_bits), model)


# -- rendering ---------------------------------------------------------------

def _term_text(frame: Frame, pos: int, neg: int) -> str:
    parts = []
    for i, name in enumerate(frame.atoms):
        if pos >> i & 1:
            parts.append(name)
        elif neg >> i & 1:
            parts.append("!" + name)
    return "&".join(parts)


def _term_key(frame: Frame, pos: int, neg: int):
    literals = pos | neg
    order = tuple(i for i in range(frame.n) if literals >> i & 1)
    return (bin(literals).count("1"), order, bin(neg).count("1"), neg)


_EXACT_COVER_LIMIT = 24


def _best_cover(target: int, candidates: list):
    """Pick a cover of ``target`` from (bits, key, text) candidates.

    Candidates are each contained in ``target``.  Dominated ones are dropped
    first; the minimum number of terms is found exhaustively when few
    candidates remain, otherwise greedily.
    """
    best_by_bits = {}
    for cand in candidates:
        prev = best_by_bits.get(cand[0])
        if prev is None or cand[1] < prev[1]:
            best_by_bits[cand[0]] = cand
    kept = [c for c in best_by_bits.values()
            if not any(o[0] != c[0] and c[0] & ~o[0] == 0 for o in best_by_bits.values())]
    union = 0
    for c in kept:
        union |= c[0]
    if union != target:
        return None
    kept.sort(key=lambda c: c[1])
    if len(kept) <= _EXACT_COVER_LIMIT:
        for k in range(1, len(kept) + 1):
            best = None
            for combo in combinations(kept, k):
                bits = 0
                for c in combo:
                    bits |= c[0]
                if bits != target:
                    continue
                score = (sum(c[1][0] for c in combo), [c[1] for c in combo])
                if best is None or score < best[0]:
                    best = (score, combo)
            if best is not None:
                return list(best[1])
    chosen, covered = [], 0
    while covered != target:
        cand = min(kept, key=lambda c: (-bin(c[0] & ~covered).count("1"), c[1]))
        chosen.append(cand)
        covered |= cand[0]
    chosen.sort(key=lambda c: c[1])
    return chosen


def _large_frame_candidates(p: Proposition) -> list:
    """Positive terms for big frames: one per minimal region, shrunk greedily."""
    model, frame = p.model, p.model.frame
    target = p.regions
    regions = set(p)
    minimal = [r for r in regions
               if not any((r & ~(1 << i)) in regions for i in range(frame.n) if r >> i & 1)]
    candidates = []
    for r in minimal:
        mask = r
        for i in range(frame.n):
            if mask >> i & 1 and mask != 1 << i:
                smaller = mask & ~(1 << i)
                if frame.intersection_bits(smaller) & model.full_bits & ~target == 0:
                    mask = smaller
        bits = frame.intersection_bits(mask) & model.full_bits
        if bits & ~target == 0:
            candidates.append((bits, _term_key(frame, mask, 0), _term_text(frame, mask, 0)))
    return candidates


def render(p: Proposition) -> str:
    """Deterministic short text form that parses back to the same proposition."""
    if p.is_empty:
        return EMPTY_SYMBOL
    model, frame = p.model, p.model.frame
    n = frame.n
    target = p.regions

    if n > ENUM_MAX_ATOMS:
        candidates = _large_frame_candidates(p)
    else:
        candidates = []
        for mask in range(1, 1 << n):
            bits = frame.intersection_bits(mask) & model.full_bits
            if bits and bits & ~target == 0:
                candidates.append((bits, _term_key(frame, mask, 0), _term_text(frame, mask, 0)))
    cover = _best_cover(target, candidates) if candidates else None

    if cover is None and n <= ENUM_MAX_ATOMS:
        # cubes: some atoms required, some excluded
        candidates = []
        for signs in product((0, 1, 2), repeat=n):
            pos = sum(1 << i for i, s in enumerate(signs) if s == 1)
            neg = sum(1 << i for i, s in enumerate(signs) if s == 2)
            if not pos | neg:
                continue
            bits = frame.intersection_bits(pos) & model.full_bits
            for i in range(n):
                if neg >> i & 1:
                    bits &= ~frame.atom_bits[i]
            if bits and bits & ~target == 0:
                candidates.append((bits, _term_key(frame, pos, neg), _term_text(frame, pos, neg)))
        cover = _best_cover(target, candidates)

    if cover is None:
        full_mask = (1 << n) - 1
        return "|".join(_term_text(frame, m, full_mask & ~m) for m in p)
    return "|".join(c[2] for c in cover)
