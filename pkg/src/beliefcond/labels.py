"""Ordered linguistic labels L_0 < L_1 < ... < L_max and their arithmetic.

Addition saturates at the top label, multiplication takes the minimum and
division by a positive integer floors the index.  Labels remember the scale
they were drawn from; mixing scales raises :class:`ScaleMismatchError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import DomainError, EmptyInputError, ScaleMismatchError

_LABEL_RE = re.compile(r"^\s*L_?(\d+)\s*$")


@dataclass(frozen=True)
class LabelScale:
    """The extended label set ``{L_0, ..., L_max_index}``."""

    max_index: int

    def __post_init__(self):
        if not isinstance(self.max_index, int) or self.max_index < 1:
            raise DomainError(f"label scale needs max_index >= 1, got {self.max_index!r}")

    def __call__(self, index: int) -> Label:
        return Label(index, self)

    def __iter__(self):
        return (Label(i, self) for i in range(self.max_index + 1))

    def __len__(self):
        return self.max_index + 1

    @property
    def bottom(self) -> Label:
        return Label(0, self)

    @property
    def top(self) -> Label:
        return Label(self.max_index, self)

    def parse(self, text: str) -> Label:
        """Parse ``L4`` / ``L_4`` into a label on this scale."""
        match = _LABEL_RE.match(text)
        if not match:
            raise DomainError(f"not a label: {text!r}")
        return Label(int(match.group(1)), self)


@dataclass(frozen=True)
class Label:
    index: int
    scale: LabelScale

    def __post_init__(self):
        if not 0 <= self.index <= self.scale.max_index:
            raise DomainError(
                f"label index {self.index} outside 0..{self.scale.max_index}")

    def __add__(self, other: Label) -> Label:
        return label_add(self, other)

    def __mul__(self, other: Label) -> Label:
        return label_mul(self, other)

    def __floordiv__(self, j: int) -> Label:
        return label_div_scalar(self, j)

    __truediv__ = __floordiv__

    def __lt__(self, other: Label) -> bool:
        _same_scale(self, other)
        return self.index < other.index

    def __le__(self, other: Label) -> bool:
        _same_scale(self, other)
        return self.index <= other.index

    def __gt__(self, other: Label) -> bool:
        _same_scale(self, other)
        return self.index > other.index

    def __ge__(self, other: Label) -> bool:
        _same_scale(self, other)
        return self.index >= other.index

    def __bool__(self):
        return self.index != 0

    def __str__(self):
        return f"L{self.index}"

    def __repr__(self):
        return f"L{self.index}/{self.scale.max_index}"


def _same_scale(a: Label, b: Label) -> LabelScale:
    if a.scale != b.scale:
        raise ScaleMismatchError(
            f"cannot combine L{a.index} (max {a.scale.max_index}) with "
            f"L{b.index} (max {b.scale.max_index})")
    return a.scale


def label_add(a: Label, b: Label) -> Label:
    scale = _same_scale(a, b)
    return Label(min(a.index + b.index, scale.max_index), scale)


def label_mul(a: Label, b: Label) -> Label:
    scale = _same_scale(a, b)
    return Label(min(a.index, b.index), scale)


def label_div_scalar(a: Label, j: int) -> Label:
    if j == 0:
        raise ZeroDivisionError("label divided by zero")
    if j < 0:
        raise DomainError(f"label divisor must be positive, got {j}")
    return Label(a.index // j, a.scale)


@dataclass(frozen=True)
class LabelSum:
    """Saturated sum together with the raw (unclamped) index total."""

    label: Label
    raw_index_sum: int


def label_sum(values: Iterable[Label]) -> LabelSum:
    values = list(values)
    if not values:
        raise EmptyInputError("label_sum of an empty collection")
    total = values[0]
    raw = values[0].index
    for value in values[1:]:
        total = label_add(total, value)
        raw += value.index
    return LabelSum(total, raw)


def label_to_unit(a: Label) -> Fraction:
    """Equidistant embedding ``L_i -> i / max_index`` into [0, 1]."""
    return Fraction(a.index, a.scale.max_index)
