"""Braid words, their tensor representations, quantum trace and knot invariants.

Conventions:
    * a positive letter s_k acts by B_YY on tensor slots (k-1, k), a negative
      one by its inverse; letters act left to right;
    * eta_a = e^{a, a'} / e^{a', a} (a' the partner of a under the pairing);
    * Tr_q T = sum_i T_{i -> i} prod_k eta_{i_k};
    * P(beta) = d^{writhe} Tr_q(beta) / U with U the one-strand trace.

With these choices contracting eta into the second factor of R gives d^{-1}
times the identity, which is what makes P invariant under stabilization.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from tqdm import tqdm

from .config import get_settings
from .errors import BraidParseError
from .liedata import LieType
from .logger_config import setup_logger
from .monodromy import (
    PairingData,
    RMatrix,
    apply_on_slots,
    build_monodromy,
    build_pairing,
    inverse,
    monodromy_inverse,
)
from .ring import ONE, ZERO, QFraction, QLaurent, laurent_sum

logger = setup_logger(__name__)

Basis = Tuple[int, ...]
Vector = Dict[Basis, QLaurent]

_TOKEN = re.compile(r"(?:s|σ)(\d+)(?:\^\{?(-?\d+)\}?)?")


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise BraidParseError(f"a braid needs at least one strand, got {self.strands}")
        for letter in self.letters:
            if letter == 0 or abs(letter) >= self.strands:
                raise BraidParseError(f"generator s{abs(letter)} does not exist on {self.strands} strands")

    @property
    def writhe(self) -> int:
        return sum(1 if letter > 0 else -1 for letter in self.letters)

    def mirror(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-letter for letter in self.letters))

    def rotated(self, k: int) -> "BraidWord":
        """Cyclic conjugate: letters[k:] + letters[:k]."""
        if not self.letters:
            return self
        k %= len(self.letters)
        return BraidWord(self.strands, self.letters[k:] + self.letters[:k])

    def stabilized(self, sign: int = 1) -> "BraidWord":
        """beta * s_m^{+-1} on m + 1 strands."""
        return BraidWord(self.strands + 1, self.letters + ((self.strands if sign > 0 else -self.strands),))

    def __str__(self) -> str:
        return " ".join(f"s{letter}" if letter > 0 else f"s{-letter}^-1" for letter in self.letters)


def parse_braid(text: str, strands_hint: Optional[int] = None) -> BraidWord:
    """Parse 's1 s2^-1 s1' (sigma accepted for s); strands default to max index + 1."""
    letters: List[int] = []
    for token in text.split():
        match = _TOKEN.fullmatch(token)
        if not match:
            raise BraidParseError(f"malformed braid token {token!r}")
        index = int(match.group(1))
        power = int(match.group(2)) if match.group(2) is not None else 1
        if index == 0:
            raise BraidParseError("generator indices start at 1")
        if power == 0:
            continue
        letters.extend([index if power > 0 else -index] * abs(power))
    strands = strands_hint if strands_hint is not None else max((abs(x) for x in letters), default=0) + 1
    return BraidWord(strands, tuple(letters))


def _dense_rows(R: RMatrix):
    return {pair: R.rows.get(pair, {}) for pair in R.pairs()}


class TensorOperator:
    """Sparse operator on V^{(x) m}, evaluated column by column on demand."""

    def __init__(self, dim: int, word: BraidWord, rows, inverse_rows):
        self.dim = dim
        self.word = word
        self.strands = word.strands
        self._rows = rows
        self._inverse_rows = inverse_rows
        self._cache: Dict[Basis, Vector] = {}

    def basis(self) -> Iterator[Basis]:
        return itertools.product(range(self.dim), repeat=self.strands)

    def column(self, basis: Basis) -> Vector:
        cached = self._cache.get(basis)
        if cached is not None:
            return cached
        vector: Vector = {basis: ONE}
        for letter in self.word.letters:
            rows = self._rows if letter > 0 else self._inverse_rows
            vector = apply_on_slots(rows, vector, abs(letter) - 1)
        self._cache[basis] = vector
        return vector

    def entry(self, src: Basis, dst: Basis) -> QLaurent:
        return self.column(src).get(dst, ZERO)

    def diagonal(self, basis: Basis) -> QLaurent:
        return self.entry(basis, basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorOperator):
            return NotImplemented
        if (self.dim, self.strands) != (other.dim, other.strands):
            return False
        return all(self.column(b) == other.column(b) for b in self.basis())

    def is_identity(self) -> bool:
        return all(self.column(b) == {b: ONE} for b in self.basis())

    def stabilized_trace(self, eta: Sequence[QLaurent], sign: int = 1) -> QLaurent:
        """Tr_q of this operator followed by s_m^{+-1} on m + 1 strands.

        Reuses the m-strand columns and reads only the diagonal of the final letter.
        """
        rows = self._rows if sign > 0 else self._inverse_rows
        last = self.strands - 1
        terms = []
        for basis in self.basis():
            weight = ONE
            for slot in basis:
                weight = weight * eta[slot]
            column = self.column(basis)
            for x in range(self.dim):
                hits = []
                for key, value in column.items():
                    if key[:last] != basis[:last]:
                        continue
                    entry = rows[(key[last], x)].get((basis[last], x))
                    if entry is not None:
                        hits.append(value * entry)
                if hits:
                    terms.append(laurent_sum(hits) * weight * eta[x])
        return laurent_sum(terms)


def represent(R: RMatrix, beta: BraidWord, R_inverse: Optional[RMatrix] = None) -> TensorOperator:
    """Tensor operator of beta on V^{(x) m}; R_inverse defaults to the cached inverse."""
    if R_inverse is None:
        if R.type is not None and R is build_monodromy(R.type):
            R_inverse = monodromy_inverse(R.type)
        else:
            R_inverse = inverse(R)
    return TensorOperator(R.dim, beta, _dense_rows(R), _dense_rows(R_inverse))


def eta_diagonal(p: PairingData) -> List[QLaurent]:
    """Diagonal of the eta matrix, indexed by weight position."""
    return list(_eta_for(p.type)) if p is build_pairing(p.type) else _diagonal(eta_matrix(p))


def _diagonal(matrix: List[List[QLaurent]]) -> List[QLaurent]:
    return [matrix[a][a] for a in range(len(matrix))]


@lru_cache(maxsize=None)
def _eta_for(lie_type: LieType) -> Tuple[QLaurent, ...]:
    return tuple(_diagonal(eta_matrix(build_pairing(lie_type))))


def eta_matrix(p: PairingData) -> List[List[QLaurent]]:
    """eta^i_j = sum_l M^{i,l} M_{j,l}; diagonal for an antidiagonal pairing."""
    matrix = []
    for i in range(p.dim):
        row = []
        for j in range(p.dim):
            total = QFraction(ZERO)
            for l in range(p.dim):
                creation = p.creation.get((i, l))
                annihilation = p.annihilation.get((j, l))
                if creation is not None and annihilation is not None:
                    total = total + annihilation * creation
            total = total.reduced()
            if not total.is_laurent():
                raise ArithmeticError(f"eta^{i}_{j} is not a Laurent polynomial")
            row.append(total.num)
        matrix.append(row)
    return matrix


def quantum_trace(T: TensorOperator, p: PairingData) -> QLaurent:
    """Eta-weighted trace of T.

    Args:
        T: operator of a braid on m strands.
        p: pairing data supplying eta.

    Returns:
        sum over basis tensors i of T_{i -> i} * eta_{i_1} ... eta_{i_m}.
    """
    eta = eta_diagonal(p)
    terms = []
    for basis in T.basis():
        value = T.diagonal(basis)
        if not value:
            continue
        for slot in basis:
            value = value * eta[slot]
        terms.append(value)
    return laurent_sum(terms)


def unknot_value(lie_type: LieType) -> QLaurent:
    """U, the quantum trace of the one-strand identity."""
    return laurent_sum(eta_diagonal(build_pairing(lie_type)))


def framed_trace(lie_type: LieType, beta: BraidWord) -> QLaurent:
    """Tr_q of beta before the writhe correction."""
    R = build_monodromy(lie_type)
    return quantum_trace(represent(R, beta), build_pairing(lie_type))


def normalize_trace(lie_type: LieType, trace: QLaurent, writhe: int) -> QFraction:
    """d^{writhe} * trace / U, reduced when U divides exactly."""
    framing = build_pairing(lie_type).twist ** writhe
    return QFraction(framing * trace, unknot_value(lie_type)).reduced()


def knot_invariant(lie_type: LieType, beta: BraidWord) -> QFraction:
    """Normalized invariant P(beta) = d^{w} Tr_q / U of the braid closure.

    Args:
        lie_type: a type with an invertible pairing.
        beta: the braid word.

    Returns:
        The reduced fraction; a Laurent polynomial whenever U divides exactly.
    """
    return normalize_trace(lie_type, framed_trace(lie_type, beta), beta.writhe)


def partial_trace(R: RMatrix, eta: Sequence[QLaurent]) -> Dict[Tuple[int, int], QLaurent]:
    """(Tr_2 R(1 x eta))_{a -> c} = sum_b R_{(a,b) -> (c,b)} eta_b."""
    out: Dict[Tuple[int, int], QLaurent] = {}
    for (a, b), row in R.rows.items():
        for (c, d), value in row.items():
            if d == b:
                total = out.get((a, c), ZERO) + value * eta[b]
                if total:
                    out[(a, c)] = total
                else:
                    out.pop((a, c), None)
    return out


def verify_partial_trace_twist(lie_type: LieType) -> bool:
    """Tr_2 R(1 x eta) = d^{-1} Id and Tr_2 R^{-1}(1 x eta) = d Id."""
    pairing = build_pairing(lie_type)
    eta = eta_diagonal(pairing)
    dim = pairing.dim
    d = pairing.twist
    expect_pos = {(a, a): d ** -1 for a in range(dim)}
    expect_neg = {(a, a): d for a in range(dim)}
    return (
        partial_trace(build_monodromy(lie_type), eta) == expect_pos
        and partial_trace(monodromy_inverse(lie_type), eta) == expect_neg
    )


def random_braid(rng: random.Random, max_strands: int, max_length: int, min_strands: int = 1) -> BraidWord:
    strands = rng.randint(min_strands, max_strands)
    if strands == 1:
        return BraidWord(1, ())
    length = rng.randint(0, max_length)
    letters = tuple(rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length))
    return BraidWord(strands, letters)


@dataclass
class MarkovFailure:
    move: str
    word: str
    strands: int
    lhs: QFraction
    rhs: QFraction


def markov_counterexamples(
    lie_type: LieType,
    samples: int,
    seed: int,
    max_strands: int,
    max_length: int,
) -> List[MarkovFailure]:
    """Check conjugation and +-stabilization invariance on random words."""
    rng = random.Random(seed)
    settings = get_settings()
    R = build_monodromy(lie_type)
    R_inverse = monodromy_inverse(lie_type)
    pairing = build_pairing(lie_type)
    eta = eta_diagonal(pairing)
    failures: List[MarkovFailure] = []
    for _ in tqdm(range(samples), desc=f"Markov {lie_type}", disable=not settings.progress, leave=False):
        beta = random_braid(rng, max(1, max_strands - 1), max_length)
        T = represent(R, beta, R_inverse)
        base = normalize_trace(lie_type, quantum_trace(T, pairing), beta.writhe)
        if beta.letters:
            k = rng.randrange(len(beta.letters))
            conj = knot_invariant(lie_type, beta.rotated(k))
            if conj != base:
                failures.append(MarkovFailure("conjugation", str(beta), beta.strands, base, conj))
        sign = rng.choice((1, -1))
        stab = normalize_trace(lie_type, T.stabilized_trace(eta, sign), beta.writhe + sign)
        if stab != base:
            failures.append(MarkovFailure(f"stabilization{'+' if sign > 0 else '-'}", str(beta), beta.strands, base, stab))
    if failures:
        logger.error(f"{len(failures)} Markov failures for {lie_type}")
    return failures
