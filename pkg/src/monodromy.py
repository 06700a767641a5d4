"""Monodromy R-matrix B_YY on V_{omega_1} (x) V_{omega_1}, pairing data and checks.

Matrices are stored sparsely by order position: ``rows[(a, b)]`` maps each
target pair ``(c, d)`` to the coefficient of J_{c,d} in B J_{a,b}. Positions
are o(slot), so the antidiagonal sector is a + b = dim - 1 for B/C/D.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from .config import get_settings
from .errors import MinimalPolynomialError, PairingNotInvertibleError
from .liedata import Family, LieType, WeightIndex, dim_fundamental, pairing_labels, weight_table
from .logger_config import setup_logger
from .ring import ONE, ZERO, QFraction, QLaurent, laurent_div_exact, laurent_eval_numeric, laurent_unit_inverse, q

logger = setup_logger(__name__)

Pair = Tuple[int, int]
Rows = Dict[Pair, Dict[Pair, QLaurent]]

# (q^{1/2} - q^{-1/2}) and its quarter-power cousin
_H = q(Fraction(1, 2)) - q(Fraction(-1, 2))
_HC = q(Fraction(1, 4)) - q(Fraction(-1, 4))
_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass
class RMatrix:
    """Sparse dim^2 x dim^2 matrix over QLaurent acting on basis pairs."""

    type: Optional[LieType]
    dim: int
    rows: Rows = field(default_factory=dict)

    @classmethod
    def identity(cls, lie_type: Optional[LieType], dim: Optional[int] = None) -> "RMatrix":
        dim = dim if dim is not None else dim_fundamental(lie_type)
        rows = {(a, b): {(a, b): ONE} for a in range(dim) for b in range(dim)}
        return cls(lie_type, dim, rows)

    def pairs(self) -> Iterable[Pair]:
        return itertools.product(range(self.dim), repeat=2)

    def entry(self, src: Pair, dst: Pair) -> QLaurent:
        return self.rows.get(src, {}).get(dst, ZERO)

    def with_entry(self, src: Pair, dst: Pair, value: QLaurent) -> "RMatrix":
        rows = {key: dict(row) for key, row in self.rows.items()}
        row = rows.setdefault(src, {})
        if value:
            row[dst] = value
        else:
            row.pop(dst, None)
        return RMatrix(self.type, self.dim, rows)

    def nonzero_entries(self) -> Iterable[Tuple[Pair, Pair, QLaurent]]:
        for src in sorted(self.rows):
            row = self.rows[src]
            for dst in sorted(row):
                yield src, dst, row[dst]

    def apply(self, vector: Dict[Pair, QLaurent]) -> Dict[Pair, QLaurent]:
        out: Dict[Pair, QLaurent] = {}
        for src, coeff in vector.items():
            for dst, value in self.rows.get(src, {}).items():
                _accumulate(out, dst, coeff * value)
        return out

    def compose(self, other: "RMatrix") -> "RMatrix":
        """self o other: apply ``other`` first."""
        rows = {src: self.apply(row) for src, row in other.rows.items()}
        return RMatrix(self.type, self.dim, {k: v for k, v in rows.items() if v})

    def scale(self, factor: QLaurent) -> "RMatrix":
        rows = {src: {dst: v * factor for dst, v in row.items()} for src, row in self.rows.items()}
        return RMatrix(self.type, self.dim, rows) if factor else RMatrix(self.type, self.dim, {})

    def __add__(self, other: "RMatrix") -> "RMatrix":
        rows = {src: dict(row) for src, row in self.rows.items()}
        for src, row in other.rows.items():
            target = rows.setdefault(src, {})
            for dst, value in row.items():
                _accumulate(target, dst, value)
        return RMatrix(self.type, self.dim, {k: v for k, v in rows.items() if v})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RMatrix):
            return NotImplemented
        keys = set(self.rows) | set(other.rows)
        return self.dim == other.dim and all(
            _clean(self.rows.get(k, {})) == _clean(other.rows.get(k, {})) for k in keys
        )


def _accumulate(target: Dict, key, value: QLaurent) -> None:
    total = target.get(key, ZERO) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def _clean(row: Dict) -> Dict:
    return {k: v for k, v in row.items() if v}


# -- antidiagonal coefficient tables ------------------------------------------------
#
# Source J_{dim-1-i, i} (second slot at position i), target J_{i-j, dim-1-i+j}, j >= 1.


def _table_B(n: int, i: int, j: int) -> QLaurent:
    s = _sign(j)
    if (i > n and i - j > n) or (0 < j <= i <= n - 1):
        return q(Fraction(j, 2), s) * _H
    if i == n:
        return q(Fraction(j, 2), s) * (ONE - q(-_HALF))
    if i - j == n:
        return q(Fraction(j, 2) + _QUARTER, s) * (q(_QUARTER) + q(-_QUARTER)) * (ONE - q(-1))
    if i - j == 2 * n - i:
        return _H * (q(n - i + j - _HALF, s) - ONE)
    return q(Fraction(j - 1, 2), s) * _H


def _table_C(n: int, i: int, j: int) -> QLaurent:
    x = (ONE - q(-_HALF)) * _sign(j)
    if i < n:
        return q(Fraction(j + 1, 4)) * x
    if i == n:
        if j == 1:
            return q(Fraction(3, 4)) * (q(-1) - ONE)
        return q(Fraction(j + 2, 4)) * x
    if i - j >= n:
        return q(Fraction(j + 1, 4)) * x
    if i - j == 2 * n - 1 - i:
        return (ONE - q(Fraction(n - i + j, 2), _sign(j))) * (q(-_QUARTER) - q(_QUARTER))
    return q(Fraction(j + 2, 4)) * x


def _table_D(n: int, p: int, j: int) -> QLaurent:
    if (p > n and p - j >= n) or p < n:
        return q(Fraction(j + 1, 2), _sign(j)) * (ONE - q(-1))
    value = q(Fraction(j, 2), _sign(j - 1)) * (ONE - q(-1))
    if 2 * p - j == 2 * n - 1:
        value = value - _H
    return value


_TABLES = {Family.B: _table_B, Family.C: _table_C, Family.D: _table_D}


def antidiagonal_summary(lie_type: LieType, a: int, b: int) -> Optional[QLaurent]:
    """Closed re-indexed form of the antidiagonal block.

    ``a`` and ``b`` are the order positions of the second slots of source and
    target. Only non-swap targets (b > dim - 1 - a) are covered; None elsewhere.
    """
    n = lie_type.rank
    dim = dim_fundamental(lie_type)
    if lie_type.family == Family.A or b <= dim - 1 - a:
        return None
    delta = 1 if a == b else 0
    if lie_type.family == Family.B:
        if a > n and b == n:
            return q(Fraction(a - n, 2), _sign(a + n)) * _H * (ONE + q(-_HALF))
        if (a < n < b) or (b < n < a):
            return q(Fraction(a + b, 2) - n, _sign(a + b)) * _H
        if a > n and b > n:
            return _H * (q(Fraction(a + b - 1, 2) - n, _sign(a + b)) - delta)
        if a == n and b > n:
            return q(Fraction(b - n, 2), _sign(n + b)) * (ONE - q(-_HALF))
        return None
    if lie_type.family == Family.C:
        if (a <= n - 1 and b >= n) or (a >= n and b <= n - 1):
            return q(-Fraction(2 * n - a - b - 1, 4), _sign(a + b + 1)) * _HC
        if a >= n and b >= n:
            return q(-Fraction(2 * n - a - b - 2, 4), _sign(a + b + 1)) * _HC - _HC * delta
        return None
    if (a <= n - 1 and b >= n) or (a > n and b <= n - 1):
        return q(Fraction(a + b + 1, 2) - n, _sign(a + b - 1)) * _H
    if a >= n and b >= n:
        return q(Fraction(a + b, 2) - n, _sign(a + b)) * _H - _H * delta
    return None


def correction_exponent(lie_type: LieType) -> Fraction:
    """kappa = (omega_1, alpha_1), the exponent scale of the same-pair correction."""
    return weight_table(lie_type).omega1_pairing(1)


@lru_cache(maxsize=None)
def build_monodromy(lie_type: LieType) -> RMatrix:
    """Assemble B_YY from the swap term, same-pair corrections and antidiagonal tables."""
    table = weight_table(lie_type)
    dim = table.dim
    kappa = correction_exponent(lie_type)
    correction = q(-kappa / 2) - q(kappa / 2)
    antidiagonal = lie_type.family != Family.A
    rows: Rows = {}
    for a, b in itertools.product(range(dim), repeat=2):
        swap = q(-table.inner(table.weight_at(a), table.weight_at(b)) / 2)
        row = {(b, a): swap}
        if antidiagonal and a + b == dim - 1:
            coefficient = _TABLES[lie_type.family]
            for j in range(1, b + 1):
                value = coefficient(lie_type.rank, b, j)
                if value:
                    row[(b - j, dim - 1 - b + j)] = value
        elif a < b:
            row[(a, b)] = swap * correction
        rows[(a, b)] = row
    logger.debug(f"built B_YY for {lie_type}: {sum(len(r) for r in rows.values())} nonzero entries")
    return RMatrix(lie_type, dim, rows)


# -- pairing ------------------------------------------------------------------------


@dataclass
class PairingData:
    """Creation coefficients e^{a,b}, their inverse M_{a,b}, and the twist d."""

    type: LieType
    dim: int
    creation: Dict[Pair, QLaurent]
    annihilation: Dict[Pair, QFraction]
    twist: QLaurent

    def partner(self, a: int) -> int:
        return self.dim - 1 - a


def _creation_B(n: int, i: int) -> QLaurent:
    if i < n:
        return q(-Fraction(n - i, 2) + _QUARTER, _sign(i))
    if i == n:
        return (q(_QUARTER) + q(-_QUARTER)) * _sign(n)
    return q(-Fraction(n - i, 2) - _QUARTER, _sign(i))


def _creation_C(n: int, i: int) -> QLaurent:
    if i < n:
        return q(-Fraction(n - i, 4), _sign(i))
    return q(-Fraction(n - i - 1, 4), _sign(i))


def _creation_D(n: int, p: int) -> QLaurent:
    # positions n-1 and n are the slots n-1 and n-1'
    if p in (n - 1, n):
        return q(0, _sign(n - 1))
    slot = p if p < n else p - 1
    return q(-Fraction(n - 1 - slot, 2), _sign(slot))


def _creation(lie_type: LieType, second: int) -> QLaurent:
    n = lie_type.rank
    family = lie_type.family
    if family == Family.A:
        return _creation_C(1, second)
    if family == Family.B:
        return _creation_B(n, second)
    if family == Family.C:
        return _creation_C(n, second)
    return _creation_D(n, second)


def _require_pairing(lie_type: LieType) -> None:
    if lie_type.family == Family.A and lie_type.rank >= 2:
        raise PairingNotInvertibleError(
            f"pairing not invertible for {lie_type}: the creation vector has rank 2 in dimension {lie_type.rank + 1}"
        )


_TWIST_SIGN = {Family.A: -1, Family.B: 1, Family.C: -1, Family.D: 1}


def twist_eigenvalue(lie_type: LieType) -> QLaurent:
    """d with B_YY J = d J on the lowest singular vector.

    |d| = q^{-[(w1,w1) - 2(w1, sum alpha_I) + SI]/2}; the sign is + on the
    symmetric invariant (B, D) and - on antisymmetric ones (C, and the
    exterior square for A).
    """
    table = weight_table(lie_type)
    omega = table.omega1
    total = sum((table.omega1_pairing(i) for i in pairing_labels(lie_type)), Fraction(0))
    exponent = -(table.inner(omega, omega) - 2 * total + self_intersection(lie_type)) / 2
    return q(exponent, _TWIST_SIGN[lie_type.family])


def self_intersection(lie_type: LieType) -> Fraction:
    """SI(alpha_I) = sum over j < s of (alpha_{i_j}, alpha_{i_s})."""
    table = weight_table(lie_type)
    labels = pairing_labels(lie_type)
    return sum(
        (table.root_inner(labels[j], labels[s]) for j in range(len(labels)) for s in range(j + 1, len(labels))),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def build_pairing(lie_type: LieType) -> PairingData:
    """Creation and annihilation coefficients, eta inputs and the twist d.

    Args:
        lie_type: A_1 or any B/C/D type.

    Returns:
        PairingData with creation e^{a,b} on the antidiagonal, annihilation as
        the inverse matrix (QFraction entries) and twist d.

    Raises:
        PairingNotInvertibleError: A_n with n >= 2.
    """
    _require_pairing(lie_type)
    dim = dim_fundamental(lie_type)
    creation = {}
    for second in range(dim):
        creation[(dim - 1 - second, second)] = _creation(lie_type, second)
    annihilation = {(a, b): QFraction(ONE, creation[(b, a)]) for (a, b) in creation}
    return PairingData(lie_type, dim, creation, annihilation, twist_eigenvalue(lie_type))


def build_Q(lie_type: LieType) -> Dict[Pair, QFraction]:
    """Diagonal similarity Q on basis pairs; identity off the antidiagonal sector."""
    dim = dim_fundamental(lie_type)
    n = lie_type.rank
    family = lie_type.family
    entries = {}
    for a, b in itertools.product(range(dim), repeat=2):
        value = QFraction(ONE)
        if family != Family.A and a + b == dim - 1:
            if family == Family.B:
                if a == n:
                    value = QFraction(_sign(n), q(_QUARTER) + q(-_QUARTER))
                else:
                    value = QFraction(_sign(a))
            else:
                value = QFraction(_sign(a) if a < n else _sign(a - 1))
        entries[(a, b)] = value
    return entries


# -- verification -------------------------------------------------------------------


def apply_on_slots(rows: Rows, vector: Dict[Tuple[int, ...], QLaurent], k: int) -> Dict[Tuple[int, ...], QLaurent]:
    """Act with a two-slot matrix on tensor slots (k, k+1) of a sparse vector."""
    out: Dict[Tuple[int, ...], QLaurent] = {}
    for key, coeff in vector.items():
        for (c, d), value in rows[(key[k], key[k + 1])].items():
            _accumulate(out, key[:k] + (c, d) + key[k + 2:], coeff * value)
    return out


def verify_yang_baxter(R: RMatrix) -> bool:
    """(R x 1)(1 x R)(R x 1) == (1 x R)(R x 1)(1 x R) exactly on every basis triple."""
    return not yang_baxter_counterexamples(R, limit=1)


def yang_baxter_counterexamples(R: RMatrix, limit: Optional[int] = None) -> List[Tuple[int, int, int]]:
    settings = get_settings()
    rows = {pair: R.rows.get(pair, {}) for pair in R.pairs()}
    failures = []
    triples = list(itertools.product(range(R.dim), repeat=3))
    for triple in tqdm(triples, desc=f"YBE {R.type}", disable=not settings.progress, leave=False):
        start = {triple: ONE}
        lhs = apply_on_slots(rows, apply_on_slots(rows, apply_on_slots(rows, start, 0), 1), 0)
        rhs = apply_on_slots(rows, apply_on_slots(rows, apply_on_slots(rows, start, 1), 0), 1)
        if lhs != rhs:
            failures.append(triple)
            logger.debug(f"Yang-Baxter fails on basis triple {triple}")
            if limit is not None and len(failures) >= limit:
                break
    return failures


def pairing_eigen_defect(R: RMatrix, pairing: PairingData) -> Dict[Pair, QLaurent]:
    """sum e^{a,b} B_{a,b}^{c,d} - d e^{c,d}, nonzero entries only."""
    image = R.apply(dict(pairing.creation))
    defect = dict(image)
    for pair, value in pairing.creation.items():
        _accumulate(defect, pair, -(pairing.twist * value))
    return defect


def verify_pairing_eigenvector(lie_type: LieType) -> bool:
    return not pairing_eigen_defect(build_monodromy(lie_type), build_pairing(lie_type))


def verify_weight_conservation(R: RMatrix) -> bool:
    table = weight_table(R.type)
    for (a, b), (c, d), _ in R.nonzero_entries():
        lhs = tuple(x + y for x, y in zip(table.weight_at(a), table.weight_at(b)))
        rhs = tuple(x + y for x, y in zip(table.weight_at(c), table.weight_at(d)))
        if lhs != rhs:
            logger.debug(f"entry ({a},{b})->({c},{d}) breaks weight conservation")
            return False
    return True


def verify_pure_swap_rows(R: RMatrix) -> bool:
    """Rows without wall-crossing hold a single q^{-(la,lb)/2} at the swapped pair."""
    table = weight_table(R.type)
    for a, b in R.pairs():
        if a < b or (R.type.family != Family.A and a + b == R.dim - 1):
            continue
        row = _clean(R.rows.get((a, b), {}))
        expected = q(-table.inner(table.weight_at(a), table.weight_at(b)) / 2)
        if row != {(b, a): expected}:
            logger.debug(f"row ({a},{b}) is not a pure swap: {row}")
            return False
    return True


# -- minimal polynomial and inverse -------------------------------------------------


def _det(matrix: List[List[QLaurent]]) -> QLaurent:
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    total = ZERO
    for col in range(size):
        if not matrix[0][col]:
            continue
        minor = [row[:col] + row[col + 1:] for row in matrix[1:]]
        term = matrix[0][col] * _det(minor)
        total = total + (term if col % 2 == 0 else -term)
    return total


_PROBE_Q = 1.37 * np.exp(0.61j)


def _independent_rows(candidates: List[List[QLaurent]], size: int) -> Optional[List[int]]:
    """Greedy choice of ``size`` rows with full numeric rank at a generic q."""
    chosen: List[int] = []
    for idx, row in enumerate(candidates):
        trial = [candidates[k] for k in chosen] + [row]
        numeric = np.array([[laurent_eval_numeric(v, _PROBE_Q) for v in r] for r in trial])
        if np.linalg.matrix_rank(numeric, tol=1e-9) == len(trial):
            chosen.append(idx)
            if len(chosen) == size:
                return chosen
    return None


def _solve_dependence(powers: List[RMatrix], degree: int) -> Optional[List[QLaurent]]:
    """Coefficients c_i with R^degree = sum c_i R^i, or None."""
    keys = sorted({(src, dst) for P in powers[: degree + 1] for src, dst, _ in P.nonzero_entries()})
    rows = [[powers[i].entry(*key) for i in range(degree)] for key in keys]
    rhs = [powers[degree].entry(*key) for key in keys]
    chosen = _independent_rows(rows, degree)
    if chosen is None:
        return None
    system = [rows[k] for k in chosen]
    target = [rhs[k] for k in chosen]
    det = _det(system)
    if not det:
        return None
    coeffs = []
    for col in range(degree):
        replaced = [row[:col] + [t] + row[col + 1:] for row, t in zip(system, target)]
        try:
            coeffs.append(laurent_div_exact(_det(replaced), det))
        except ArithmeticError:
            return None
    for row, value in zip(rows, rhs):
        combo = ZERO
        for c, entry in zip(coeffs, row):
            combo = combo + c * entry
        if combo != value:
            return None
    return coeffs


def minimal_polynomial(R: RMatrix) -> List[QLaurent]:
    """Monic p of least degree (<= 3) with p(R) = 0, coefficients from x^0 upward.

    Raises:
        MinimalPolynomialError: no dependence up to degree 3, or a non-unit
            constant term.
    """
    powers = [RMatrix.identity(R.type, R.dim), R]
    for degree in range(1, 4):
        if len(powers) <= degree:
            powers.append(R.compose(powers[-1]))
        coeffs = _solve_dependence(powers, degree)
        if coeffs is None:
            continue
        poly = [-c for c in coeffs] + [ONE]
        if not poly[0].is_unit():
            raise MinimalPolynomialError(f"constant term {poly[0]} of the minimal polynomial is not a unit")
        logger.debug(f"minimal polynomial of {R.type} has degree {degree}")
        return poly
    raise MinimalPolynomialError(f"no polynomial relation of degree <= 3 for {R.type}")


def evaluate_polynomial(poly: List[QLaurent], R: RMatrix) -> RMatrix:
    """p(R) by Horner's rule."""
    result = RMatrix.identity(R.type, R.dim).scale(poly[-1])
    for coeff in reversed(poly[:-1]):
        result = R.compose(result) + RMatrix.identity(R.type, R.dim).scale(coeff)
    return result


def inverse(R: RMatrix) -> RMatrix:
    """R^{-1} = -p_0^{-1} (R^{k-1} + p_{k-1} R^{k-2} + ... + p_1)."""
    poly = minimal_polynomial(R)
    return inverse_from_polynomial(R, poly)


def inverse_from_polynomial(R: RMatrix, poly: List[QLaurent]) -> RMatrix:
    quotient = evaluate_polynomial(poly[1:], R)
    return quotient.scale(-laurent_unit_inverse(poly[0]))


@lru_cache(maxsize=None)
def monodromy_inverse(lie_type: LieType) -> RMatrix:
    return inverse(build_monodromy(lie_type))


def eigenvalues(lie_type: LieType) -> List[QLaurent]:
    """Eigenvalues of B_YY: two for A_n, three for B/C/D."""
    n = lie_type.rank
    family = lie_type.family
    if family == Family.A:
        shift = Fraction(1, 2 * (n + 1))
        return [q(shift - _HALF), q(shift + _HALF, -1)]
    if family == Family.C:
        return [q(-_QUARTER), q(_QUARTER, -1), q(Fraction(2 * n + 1, 4), -1)]
    big = dim_fundamental(lie_type)
    return [q(-_HALF), q(_HALF, -1), q(Fraction(big - 1, 2))]


def polynomial_at(poly: List[QLaurent], value: QLaurent) -> QLaurent:
    total = ZERO
    for coeff in reversed(poly):
        total = total * value + coeff
    return total


def index_pair(lie_type: LieType, pair: Pair) -> Tuple[WeightIndex, WeightIndex]:
    indices = weight_table(lie_type).indices
    return indices[pair[0]], indices[pair[1]]
