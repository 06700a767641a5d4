"""Weights of V_{omega_1}, simple roots and inner products for A_n, B_n, C_n, D_n.

Each family is realized in an orthogonal basis e_1..e_N with a gram scale on
the Euclidean dot product:

    A_n  lambda^i = e_{i+1} - centroid,  alpha_i = e_i - e_{i+1},  scale 1
    B_n  (e_1..e_n, 0, -e_n..-e_1),      alpha_n = e_n,             scale 1
    C_n  (e_1..e_n, -e_n..-e_1),         alpha_n = 2 e_n,           scale 1/2
    D_n  lambda^{n-1} = e_n, lambda^{n-1'} = -e_n, alpha_n = e_{n-1} + e_n, scale 1

Weight slots follow the enumeration lambda^0 = omega_1, lambda^i = lambda^{i-1}
minus one simple root; D_n has the extra slot n-1' which sits at order n.

B_1 is accepted but degenerate: its vector representation has highest weight
2 omega_1 in the fundamental-weight basis, so 2(omega_1, alpha_1)/(alpha_1, alpha_1)
is 2 there and 1 for every other type.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from .errors import InvalidLieTypeError

Vector = Tuple[Fraction, ...]


class Family(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


_MIN_RANK = {Family.A: 1, Family.B: 1, Family.C: 2, Family.D: 3}


class LieType(BaseModel):
    """A classical Lie type X_n."""

    model_config = ConfigDict(frozen=True)

    family: Family
    rank: int

    @field_validator("family", mode="before")
    @classmethod
    def _upper_family(cls, value):
        if isinstance(value, str):
            value = value.strip().upper()
            if value not in Family.__members__:
                raise InvalidLieTypeError(f"unknown family {value!r}")
        return value

    @model_validator(mode="after")
    def _check_rank(self) -> "LieType":
        if self.rank < _MIN_RANK[self.family]:
            raise InvalidLieTypeError(
                f"{self.family.value}_n requires n >= {_MIN_RANK[self.family]}, got {self.rank}"
            )
        return self

    @classmethod
    def of(cls, family, rank: int) -> "LieType":
        """Validated constructor raising InvalidLieTypeError instead of ValidationError."""
        try:
            return cls(family=family, rank=rank)
        except ValidationError as exc:
            raise InvalidLieTypeError(str(exc)) from exc

    @classmethod
    def parse(cls, text: str) -> "LieType":
        """'B3' or 'b3' -> LieType(B, 3)."""
        match = re.fullmatch(r"\s*([A-Za-z])_?(\d+)\s*", text)
        if not match:
            raise InvalidLieTypeError(f"cannot parse Lie type {text!r}")
        return cls.of(match.group(1), int(match.group(2)))

    @property
    def n(self) -> int:
        return self.rank

    def __str__(self) -> str:
        return f"{self.family.value}{self.rank}"


@dataclass(frozen=True, order=True)
class WeightIndex:
    """Slot in the weight enumeration; primed only for D_n's n-1'."""

    slot: int
    primed: bool = False

    def __str__(self) -> str:
        return f"{self.slot}p" if self.primed else str(self.slot)

    @classmethod
    def parse(cls, text: Union[str, int, "WeightIndex"]) -> "WeightIndex":
        if isinstance(text, WeightIndex):
            return text
        if isinstance(text, int):
            return cls(text)
        match = re.fullmatch(r"\s*(\d+)\s*(p|')?\s*", str(text))
        if not match:
            raise InvalidLieTypeError(f"cannot parse weight index {text!r}")
        return cls(int(match.group(1)), primed=match.group(2) is not None)


def dim_fundamental(lie_type: LieType) -> int:
    """Dimension of V_{omega_1}."""
    n = lie_type.rank
    return {Family.A: n + 1, Family.B: 2 * n + 1, Family.C: 2 * n, Family.D: 2 * n}[lie_type.family]


def _unit(size: int, k: int, sign: int = 1) -> Vector:
    vec = [Fraction(0)] * size
    vec[k] = Fraction(sign)
    return tuple(vec)


def _sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def _add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


class WeightTable:
    """Realized weight and root data for one LieType.

    ``indices`` lists the weight slots by order position, so
    ``indices[p]`` is the slot with o(slot) = p.
    """

    def __init__(
        self,
        lie_type: LieType,
        indices: List[WeightIndex],
        weights: Dict[WeightIndex, Vector],
        roots: List[Vector],
        rho: Vector,
        gram_scale: Fraction,
    ):
        self.type = lie_type
        self.indices = tuple(indices)
        self.weights = weights
        self.roots = tuple(roots)
        self.rho = rho
        self.gram_scale = gram_scale
        self._position = {idx: p for p, idx in enumerate(self.indices)}

    @property
    def dim(self) -> int:
        return len(self.indices)

    @property
    def omega1(self) -> Vector:
        return self.weights[WeightIndex(0)]

    def inner(self, u: Vector, v: Vector) -> Fraction:
        return self.gram_scale * sum((a * b for a, b in zip(u, v)), Fraction(0))

    def order(self, idx: WeightIndex) -> int:
        try:
            return self._position[idx]
        except KeyError:
            raise InvalidLieTypeError(f"weight index {idx} is not valid for {self.type}") from None

    def weight(self, idx: WeightIndex) -> Vector:
        return self.weights[self.indices[self.order(idx)]]

    def weight_at(self, position: int) -> Vector:
        return self.weights[self.indices[position]]

    def weight_inner(self, s: WeightIndex, t: WeightIndex) -> Fraction:
        return self.inner(self.weight(s), self.weight(t))

    def root(self, label: int) -> Vector:
        if not 1 <= label <= len(self.roots):
            raise InvalidLieTypeError(f"root label {label} out of range for {self.type}")
        return self.roots[label - 1]

    def root_inner(self, i: int, k: int) -> Fraction:
        return self.inner(self.root(i), self.root(k))

    def root_gram(self) -> List[List[Fraction]]:
        n = len(self.roots)
        return [[self.root_inner(i, k) for k in range(1, n + 1)] for i in range(1, n + 1)]

    def rho_pairing(self, label: int) -> Fraction:
        return self.inner(self.rho, self.root(label))

    def omega1_pairing(self, label: int) -> Fraction:
        return self.inner(self.omega1, self.root(label))


def _table_A(lie_type: LieType) -> WeightTable:
    n = lie_type.rank
    size = n + 1
    centroid = tuple(Fraction(1, size) for _ in range(size))
    indices = [WeightIndex(i) for i in range(size)]
    weights = {WeightIndex(i): _sub(_unit(size, i), centroid) for i in range(size)}
    roots = [_sub(_unit(size, i), _unit(size, i + 1)) for i in range(n)]
    rho = tuple(Fraction(n - 2 * i, 2) for i in range(size))
    return WeightTable(lie_type, indices, weights, roots, rho, Fraction(1))


def _table_B(lie_type: LieType) -> WeightTable:
    n = lie_type.rank
    indices = [WeightIndex(i) for i in range(2 * n + 1)]
    weights = {}
    for i in range(2 * n + 1):
        if i < n:
            weights[WeightIndex(i)] = _unit(n, i)
        elif i == n:
            weights[WeightIndex(i)] = tuple(Fraction(0) for _ in range(n))
        else:
            weights[WeightIndex(i)] = _unit(n, 2 * n - i, -1)
    roots = [_sub(_unit(n, i), _unit(n, i + 1)) for i in range(n - 1)] + [_unit(n, n - 1)]
    rho = tuple(Fraction(2 * (n - i) - 1, 2) for i in range(n))
    return WeightTable(lie_type, indices, weights, roots, rho, Fraction(1))


def _table_C(lie_type: LieType) -> WeightTable:
    n = lie_type.rank
    indices = [WeightIndex(i) for i in range(2 * n)]
    weights = {}
    for i in range(2 * n):
        weights[WeightIndex(i)] = _unit(n, i) if i < n else _unit(n, 2 * n - 1 - i, -1)
    roots = [_sub(_unit(n, i), _unit(n, i + 1)) for i in range(n - 1)] + [_unit(n, n - 1, 2)]
    rho = tuple(Fraction(n - i) for i in range(n))
    return WeightTable(lie_type, indices, weights, roots, rho, Fraction(1, 2))


def _table_D(lie_type: LieType) -> WeightTable:
    n = lie_type.rank
    indices = [WeightIndex(i) for i in range(n)] + [WeightIndex(n - 1, primed=True)]
    indices += [WeightIndex(i) for i in range(n, 2 * n - 1)]
    weights = {}
    for i in range(n):
        weights[WeightIndex(i)] = _unit(n, i)
    weights[WeightIndex(n - 1, primed=True)] = _unit(n, n - 1, -1)
    for i in range(n, 2 * n - 1):
        weights[WeightIndex(i)] = _unit(n, 2 * n - 2 - i, -1)
    roots = [_sub(_unit(n, i), _unit(n, i + 1)) for i in range(n - 1)]
    roots.append(_add(_unit(n, n - 2), _unit(n, n - 1)))
    rho = tuple(Fraction(n - 1 - i) for i in range(n))
    return WeightTable(lie_type, indices, weights, roots, rho, Fraction(1))


_BUILDERS = {Family.A: _table_A, Family.B: _table_B, Family.C: _table_C, Family.D: _table_D}


@lru_cache(maxsize=None)
def weight_table(lie_type: LieType) -> WeightTable:
    """Cached WeightTable for a type."""
    return _BUILDERS[lie_type.family](lie_type)


def order(lie_type: LieType, idx: Union[WeightIndex, int, str]) -> int:
    """Order map o: identity for A/B/C; D_n puts n-1' at n and shifts i >= n by one."""
    idx = WeightIndex.parse(idx)
    if idx.primed and lie_type.family != Family.D:
        raise InvalidLieTypeError(f"primed index {idx} only exists for D_n")
    return weight_table(lie_type).order(idx)


def inner_product_weights(lie_type: LieType, s, t) -> Fraction:
    table = weight_table(lie_type)
    return table.weight_inner(WeightIndex.parse(s), WeightIndex.parse(t))


def root_data(lie_type: LieType):
    """(roots, rho_pairings, root_gram) with rho_pairings[i-1] = (rho, alpha_i)."""
    table = weight_table(lie_type)
    rho_pairings = [table.rho_pairing(i) for i in range(1, lie_type.rank + 1)]
    return list(table.roots), rho_pairings, table.root_gram()


def max_level(lie_type: LieType) -> int:
    n = lie_type.rank
    return {Family.A: n, Family.B: 2 * n, Family.C: 2 * n - 1, Family.D: 2 * n - 2}[lie_type.family]


def admissible_levels(lie_type: LieType) -> List[WeightIndex]:
    """Every weight slot reachable from omega_1 by at least one lowering."""
    levels = [WeightIndex(l) for l in range(1, max_level(lie_type) + 1)]
    if lie_type.family == Family.D:
        levels.insert(lie_type.rank - 1, WeightIndex(lie_type.rank - 1, primed=True))
    return levels


def chain_labels(lie_type: LieType, level: Union[WeightIndex, int, str]) -> List[int]:
    """Root labels i_1..i_l lowering omega_1 to lambda^level, one root per step."""
    level = WeightIndex.parse(level)
    n = lie_type.rank
    family = lie_type.family
    if level.primed:
        if family != Family.D or level.slot != n - 1:
            raise InvalidLieTypeError(f"level {level} is not valid for {lie_type}")
        return list(range(1, n - 1)) + [n]
    l = level.slot
    if not 0 <= l <= max_level(lie_type):
        raise InvalidLieTypeError(f"level {l} out of range for {lie_type}")
    labels = []
    for j in range(1, l + 1):
        if j <= n:
            labels.append(j)
        elif family == Family.B:
            labels.append(2 * n + 1 - j)
        elif family == Family.C:
            labels.append(2 * n - j)
        else:
            labels.append(2 * n - 1 - j)
    return labels


def pairing_labels(lie_type: LieType) -> List[int]:
    """Roots of the lowest singular vector of V_{omega_1} (x) V_{omega_1}.

    alpha_1 alone for A_n (the exterior square); the full chain down to the
    lowest weight for B/C/D (the invariant line).
    """
    if lie_type.family == Family.A:
        return [1]
    return chain_labels(lie_type, max_level(lie_type))
