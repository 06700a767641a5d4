"""Yang-Yang critical points: critical equations, closed forms, Newton and c-continuation.

The critical system for roots alpha_{i_1}..alpha_{i_l} at sites z_a (each of
weight omega_1) reads, for every j,

    sum_a (alpha_{i_j}, omega_1) / (w_j - z_a)
        - sum_{s != j} (alpha_{i_j}, alpha_{i_s}) / (w_j - w_s) - c (rho, alpha_{i_j}) = 0.

Coordinates are kept in chain order: w_j carries the j-th root of the
lowering chain omega_1 -> lambda^l (see liedata.chain_labels). A root label
that occurs twice forms a symmetric pair (w_k, w_k'), reconstructed from its
sum and squared difference.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import get_settings
from .errors import (
    ClosedFormResidualError,
    ContinuationError,
    InvalidConfigurationError,
    InvalidLieTypeError,
    NewtonDivergenceError,
    SingularConfigurationError,
)
from .liedata import Family, LieType, WeightIndex, admissible_levels, chain_labels, pairing_labels, weight_table
from .logger_config import setup_logger

logger = setup_logger(__name__)

_COINCIDENT = 1e-14


@dataclass(frozen=True)
class CriticalConfig:
    type: LieType
    roots: Tuple[int, ...]
    z: Tuple[complex, ...]
    c: float = 0.0
    level: Optional[WeightIndex] = None

    def __post_init__(self):
        if self.c < 0:
            raise InvalidConfigurationError(f"c must be nonnegative, got {self.c}")
        for label in self.roots:
            if not 1 <= label <= self.type.rank:
                raise InvalidLieTypeError(f"root label {label} invalid for {self.type}")
        for a in range(len(self.z)):
            for b in range(a + 1, len(self.z)):
                if abs(self.z[a] - self.z[b]) < _COINCIDENT:
                    raise SingularConfigurationError("z entries must be pairwise distinct")

    def at(self, c: float) -> "CriticalConfig":
        return CriticalConfig(self.type, self.roots, self.z, c, self.level)


@dataclass
class CriticalSolution:
    config: CriticalConfig
    coords: np.ndarray
    residual: float
    meta: str = ""
    iterations: int = field(default=0)


@lru_cache(maxsize=None)
def _couplings(lie_type: LieType, roots: Tuple[int, ...]):
    table = weight_table(lie_type)
    gram = np.array([[float(table.root_inner(i, k)) for k in roots] for i in roots])
    np.fill_diagonal(gram, 0.0)
    site = np.array([float(table.omega1_pairing(i)) for i in roots])
    rho = np.array([float(table.rho_pairing(i)) for i in roots])
    return gram, site, rho


def _terms(cfg: CriticalConfig, w) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Site terms (l, m), pair terms (l, l) and the c-term of the critical equations."""
    gram, site, rho = _couplings(cfg.type, cfg.roots)
    w = np.asarray(w, dtype=complex)
    z = np.asarray(cfg.z, dtype=complex)
    dz = w[:, None] - z[None, :]
    site_mask = np.broadcast_to(site[:, None] != 0, dz.shape)
    if np.any(site_mask & (np.abs(dz) < _COINCIDENT)):
        raise SingularConfigurationError("a coordinate coincides with a site z_a")
    dw = w[:, None] - w[None, :]
    pair_mask = gram != 0
    if np.any(pair_mask & (np.abs(dw) < _COINCIDENT)):
        raise SingularConfigurationError("two coupled coordinates coincide")
    site_terms = np.zeros(dz.shape, dtype=complex)
    np.divide(np.broadcast_to(site[:, None], dz.shape), dz, out=site_terms, where=site_mask)
    pair_terms = np.zeros(dw.shape, dtype=complex)
    np.divide(gram, dw, out=pair_terms, where=pair_mask)
    return site_terms, pair_terms, cfg.c * rho


def yy_gradient(cfg: CriticalConfig, w: Sequence[complex]) -> np.ndarray:
    """Left-hand sides of the critical equations at w, one per coordinate."""
    site_terms, pair_terms, c_terms = _terms(cfg, w)
    return site_terms.sum(axis=1) - pair_terms.sum(axis=1) - c_terms


def relative_residual(cfg: CriticalConfig, w: Sequence[complex]) -> float:
    """max_j |gradient_j| over the largest single term of the system."""
    site_terms, pair_terms, c_terms = _terms(cfg, w)
    gradient = site_terms.sum(axis=1) - pair_terms.sum(axis=1) - c_terms
    scale = max(
        np.abs(site_terms).max(initial=0.0),
        np.abs(pair_terms).max(initial=0.0),
        np.abs(c_terms).max(initial=0.0),
    )
    top = float(np.abs(gradient).max(initial=0.0))
    return top / scale if scale > 0 else top


def yy_jacobian(cfg: CriticalConfig, w: Sequence[complex]) -> np.ndarray:
    """Complex Jacobian of yy_gradient with respect to w."""
    gram, site, _ = _couplings(cfg.type, cfg.roots)
    site_terms, pair_terms, _ = _terms(cfg, w)
    w = np.asarray(w, dtype=complex)
    dz = w[:, None] - np.asarray(cfg.z, dtype=complex)[None, :]
    dw = w[:, None] - w[None, :]
    pair_sq = np.zeros(dw.shape, dtype=complex)
    np.divide(pair_terms, dw, out=pair_sq, where=gram != 0)
    site_sq = np.zeros(dz.shape, dtype=complex)
    np.divide(site_terms, dz, out=site_sq, where=site_terms != 0)
    jac = -pair_sq
    np.fill_diagonal(jac, -site_sq.sum(axis=1) + pair_sq.sum(axis=1))
    return jac


def yy_value(cfg: CriticalConfig, w: Sequence[complex]) -> complex:
    """Symmetry-breaking Yang-Yang function on principal-branch logarithms.

    Diagnostic only: the value depends on the branch, its gradient does not.
    """
    table = weight_table(cfg.type)
    gram, site, rho = _couplings(cfg.type, cfg.roots)
    w = np.asarray(w, dtype=complex)
    z = np.asarray(cfg.z, dtype=complex)
    omega = table.omega1
    site_site = float(table.inner(omega, omega))
    rho_site = float(table.inner(table.rho, omega))
    total = 0j
    for j in range(len(w)):
        for a in range(len(z)):
            if site[j]:
                total += site[j] * cmath.log(w[j] - z[a])
        for s in range(j + 1, len(w)):
            if gram[j, s]:
                total -= gram[j, s] * cmath.log(w[j] - w[s])
    for a in range(len(z)):
        for b in range(a + 1, len(z)):
            total -= site_site * cmath.log(z[a] - z[b])
    total -= cfg.c * complex(np.dot(rho, w))
    total += cfg.c * rho_site * complex(z.sum())
    return total


# -- Newton -----------------------------------------------------------------------


def newton_refine(
    cfg: CriticalConfig,
    w0: Sequence[complex],
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    meta: str = "newton",
) -> CriticalSolution:
    """Newton iteration on the critical equations from w0.

    Raises:
        SingularConfigurationError: coincident coordinates or singular Jacobian.
        NewtonDivergenceError: residual above the acceptance tolerance after
            max_iter steps.
    """
    settings = get_settings()
    tol = settings.newton_tol if tol is None else tol
    max_iter = settings.newton_max_iter if max_iter is None else max_iter
    w = np.array(w0, dtype=complex)
    residual = relative_residual(cfg, w)
    iterations = 0
    while residual >= tol and iterations < max_iter:
        jac = yy_jacobian(cfg, w)
        try:
            step = np.linalg.solve(jac, -yy_gradient(cfg, w))
        except np.linalg.LinAlgError as exc:
            raise SingularConfigurationError("singular Jacobian") from exc
        if not np.all(np.isfinite(step)):
            raise SingularConfigurationError("singular Jacobian")
        w = w + step
        iterations += 1
        residual = relative_residual(cfg, w)
        if np.abs(step).max() <= 1e-16 * max(1.0, np.abs(w).max()):
            break
    if residual > settings.residual_tol:
        raise NewtonDivergenceError(
            f"Newton stopped at residual {residual:.3e} after {iterations} iterations", residual
        )
    return CriticalSolution(cfg, w, residual, meta, iterations)


# -- closed forms ---------------------------------------------------------------


def _ordered_pair(total: complex, delta: complex) -> Tuple[complex, complex]:
    """Roots of x^2 - total x + (total^2 - delta)/4: larger imaginary part first,
    smaller real part first when both are real."""
    root = cmath.sqrt(delta)
    first, second = (total - root) / 2, (total + root) / 2
    scale = max(1.0, abs(total), abs(root))
    if abs(first.imag - second.imag) > 1e-12 * scale:
        return (first, second) if first.imag > second.imag else (second, first)
    return (first, second) if first.real <= second.real else (second, first)


def _chain(c: float, denominators: Sequence[float]) -> List[float]:
    out, acc = [], 0.0
    for den in denominators:
        acc += 1.0 / (c * den)
        out.append(acc)
    return out


def _offsets_B(n: int, l: int, c: float) -> List[complex]:
    if l < n:
        return _chain(c, [l - i + 1 for i in range(1, l + 1)])
    if l == n:
        return _chain(c, [l - i + 0.5 for i in range(1, l + 1)])
    w: List[complex] = [0j] * l
    singles = _chain(c, [l - i for i in range(1, 2 * n - l + 1)])
    w[: len(singles)] = singles
    anchor = singles[-1] if singles else 0.0
    h = lambda x: 1.0 / (c * x)  # noqa: E731
    eps = 1.0 / (c * (l - n - 0.5))
    for k in range(2 * n + 1 - l, n + 1):
        total = eps + 2 * anchor
        total += sum(h(l - j - 1) for j in range(2 * n - l + 1, k))
        total += sum(h(l - j - 1) for j in range(2 * n - l + 1, 2 * n - k))
        inner = sum(h(l - j - 1) for j in range(k, 2 * n - k))
        w[k - 1], w[2 * n - k] = _ordered_pair(total, inner ** 2 - eps ** 2)
    return w


def _offsets_C(n: int, l: int, c: float) -> List[complex]:
    if l < n:
        return _chain(c, [l - i + 1 for i in range(1, l + 1)])
    if l == n:
        w = _chain(c, [n - i + 2 for i in range(1, n)])
        return w + [1.0 / c + (w[-1] if w else 0.0)]
    h = lambda x: 1.0 / (c * x)  # noqa: E731
    w: List[complex] = [0j] * l
    singles = _chain(c, [l + 2 - i for i in range(1, 2 * n - l)])
    w[: len(singles)] = singles
    anchor = singles[-1] if singles else 0.0
    w[n - 1] = anchor + sum(h(l + 1 - i) for i in range(2 * n - l, n + 1))
    for k in range(2 * n - l, n):
        tail = sum(h(l - i + 1) + h(l - 2 * n + i + 1) for i in range(k, n + 1))
        total = 2 * anchor + sum(2 * h(l - i + 1) for i in range(2 * n - l, k)) + tail
        delta = tail * (tail - 2 * h(l - n + 1))
        w[k - 1], w[2 * n - k - 1] = _ordered_pair(total, delta)
    return w


def _offsets_D(n: int, level: WeightIndex, c: float) -> List[complex]:
    l = level.slot
    if level.primed:
        return _chain(c, [n - i for i in range(1, n)])
    if l < n:
        return _chain(c, [l - i + 1 for i in range(1, l + 1)])
    if l == n:
        w = _chain(c, [n + 1 - i for i in range(1, n - 1)])
        fork = 1.0 / c + (w[-1] if w else 0.0)
        return w + [fork, fork]
    h = lambda x: 1.0 / (c * x)  # noqa: E731
    m = l - n
    w: List[complex] = [0j] * l
    singles = _chain(c, [l + 1 - i for i in range(1, 2 * n - 1 - l)])
    w[: len(singles)] = singles
    anchor = singles[-1] if singles else 0.0
    fork = anchor + sum(h(m + 1 + a) for a in range(0, m + 1))
    w[n - 2] = w[n - 1] = fork
    for t in range(1, m + 1):
        k = n - 2 - m + t
        tail = sum(h(m + 1 + a) + h(m + 1 - a) for a in range(0, m + 2 - t))
        total = 2 * anchor + sum(2 * h(m + 1 + a) for a in range(m + 2 - t, m + 1)) + tail
        delta = tail * (tail - 2 * h(m + 1))
        w[k - 1], w[2 * n - 2 - k] = _ordered_pair(total, delta)
    return w


def _one_point_offsets(lie_type: LieType, level: WeightIndex, c: float) -> List[complex]:
    n = lie_type.rank
    family = lie_type.family
    if family == Family.A:
        l = level.slot
        return _chain(c, [l - i + 1 for i in range(1, l + 1)])
    if family == Family.B:
        return _offsets_B(n, level.slot, c)
    if family == Family.C:
        return _offsets_C(n, level.slot, c)
    return _offsets_D(n, level, c)


def _check(solution: CriticalSolution, tol: Optional[float] = None) -> CriticalSolution:
    tol = get_settings().residual_tol if tol is None else tol
    if not solution.residual < tol:
        raise ClosedFormResidualError(
            f"{solution.meta}: closed form residual {solution.residual:.3e} exceeds {tol:.1e}",
            solution.residual,
        )
    return solution


def closed_form_one_point(
    lie_type: LieType,
    l: Union[int, str, WeightIndex],
    c: float,
    z: complex = 0j,
    tol: Optional[float] = None,
) -> CriticalSolution:
    """Closed-form critical point for one site of weight omega_1 and level l."""
    level = WeightIndex.parse(l)
    if level not in admissible_levels(lie_type):
        raise InvalidLieTypeError(f"level {level} is not admissible for {lie_type}")
    if not c > 0:
        raise InvalidConfigurationError(f"one-point closed forms need c > 0, got {c}")
    roots = tuple(chain_labels(lie_type, level))
    cfg = CriticalConfig(lie_type, roots, (complex(z),), float(c), level)
    coords = np.array(_one_point_offsets(lie_type, level, float(c)), dtype=complex) + complex(z)
    solution = CriticalSolution(cfg, coords, relative_residual(cfg, coords), f"one-point {lie_type} l={level}")
    return _check(solution, tol)


def two_point_product(lie_type: LieType, label: int, z1: complex, z2: complex) -> complex:
    """w^1 w^2 for the pair of root label ``label`` at c = 0."""
    n = lie_type.rank
    family = lie_type.family
    if family == Family.B:
        ratio = label * (2 * n - label) / (4 * n * n - 1)
    elif family == Family.C:
        ratio = label * (2 * n + 1 - label) / (4 * n * (n + 1))
    elif family == Family.D:
        ratio = label * (2 * n - 1 - label) / (4 * n * (n - 1))
    else:
        raise InvalidLieTypeError(f"{lie_type} has no paired roots at c = 0")
    return z1 * z2 + (z1 - z2) ** 2 * ratio


def two_point_pairs(lie_type: LieType) -> List[Tuple[int, int, int]]:
    """(label, index of w^1, index of w^2) for every doubled root at c = 0, 0-based."""
    n = lie_type.rank
    family = lie_type.family
    if family == Family.B:
        return [(k, k - 1, 2 * n - k) for k in range(1, n + 1)]
    if family == Family.C:
        return [(k, k - 1, 2 * n - k - 1) for k in range(1, n)]
    if family == Family.D:
        return [(k, k - 1, 2 * n - 2 - k) for k in range(1, n - 1)]
    return []


def closed_form_two_point_c0(
    lie_type: LieType, z1: complex, z2: complex, tol: Optional[float] = None
) -> CriticalSolution:
    """Lowest singular vector of V_{omega_1} (x) V_{omega_1} at c = 0."""
    z1, z2 = complex(z1), complex(z2)
    roots = tuple(pairing_labels(lie_type))
    cfg = CriticalConfig(lie_type, roots, (z1, z2), 0.0)
    middle = (z1 + z2) / 2
    coords = np.full(len(roots), middle, dtype=complex)
    for label, first, second in two_point_pairs(lie_type):
        total = z1 + z2
        delta = total ** 2 - 4 * two_point_product(lie_type, label, z1, z2)
        coords[first], coords[second] = _ordered_pair(total, delta)
    solution = CriticalSolution(cfg, coords, relative_residual(cfg, coords), f"two-point c=0 {lie_type}")
    return _check(solution, tol)


def closed_form_two_point_first(
    lie_type: LieType, z1: complex, z2: complex, tol: Optional[float] = None
) -> CriticalSolution:
    """Singular vector of weight 2 omega_1 - alpha_1 at c = 0: one root at the midpoint."""
    z1, z2 = complex(z1), complex(z2)
    cfg = CriticalConfig(lie_type, (1,), (z1, z2), 0.0)
    coords = np.array([(z1 + z2) / 2], dtype=complex)
    solution = CriticalSolution(cfg, coords, relative_residual(cfg, coords), f"two-point c=0 {lie_type} l=1")
    return _check(solution, tol)


def two_point_critical_points(
    lie_type: LieType, z1: complex, z2: complex, tol: Optional[float] = None
) -> List[CriticalSolution]:
    """One c = 0 critical point per summand of V_{omega_1} (x) V_{omega_1}, highest first.

    The highest summand has no roots (the empty critical point). For A_n the
    alpha_1 summand is already the lowest, so there are two points; B/C/D add
    the invariant line for three.
    """
    z1, z2 = complex(z1), complex(z2)
    highest = CriticalSolution(
        CriticalConfig(lie_type, (), (z1, z2), 0.0), np.zeros(0, dtype=complex), 0.0, f"two-point c=0 {lie_type} l=0"
    )
    points = [highest, closed_form_two_point_first(lie_type, z1, z2, tol)]
    if lie_type.family != Family.A:
        points.append(closed_form_two_point_c0(lie_type, z1, z2, tol))
    return points


# -- ordering ---------------------------------------------------------------------


def _strictly_increasing_real(values: Sequence[complex], tol: float) -> bool:
    if any(abs(v.imag) > tol for v in values):
        return False
    reals = [v.real for v in values]
    return reals[0] > tol and all(b - a > tol for a, b in zip(reals, reals[1:]))


def verify_ordering(sol: CriticalSolution) -> bool:
    """Real ordering of one-point coordinates, pair by pair, including the
    vertical middle pair of B_n beyond level n."""
    cfg = sol.config
    if cfg.level is None or len(cfg.z) != 1:
        raise ValueError("ordering is defined for one-point solutions only")
    w = [complex(x) - cfg.z[0] for x in sol.coords]
    n = cfg.type.rank
    family = cfg.type.family
    level = cfg.level
    tol = 1e-9 * max(1.0, max(abs(x) for x in w))
    if family == Family.B and level.slot > n:
        middle, partner = w[n - 1], w[n]
        if not middle.imag > tol or abs(partner - middle.conjugate()) > tol:
            return False
        chain = w[: n - 1] + [complex(middle.real)] + w[n + 1:]
        return _strictly_increasing_real(chain, tol)
    if family == Family.D and not level.primed and level.slot >= n:
        if abs(w[n - 2] - w[n - 1]) > tol:
            return False
        return _strictly_increasing_real(w[: n - 1] + w[n:], tol)
    return _strictly_increasing_real(w, tol)


# -- continuation in c ----------------------------------------------------------


def _spacing(cfg: CriticalConfig, w: np.ndarray) -> float:
    gram, site, _ = _couplings(cfg.type, cfg.roots)
    z = np.asarray(cfg.z, dtype=complex)
    dz = np.abs(w[:, None] - z[None, :])
    dw = np.abs(w[:, None] - w[None, :])
    candidates = [dz[site != 0].min(initial=np.inf), dw[gram != 0].min(initial=np.inf)]
    return float(min(candidates))


def _schedule(start: float, target: float, steps_per_decade: int) -> List[float]:
    if start <= 0:
        ramp = np.linspace(0.0, target, steps_per_decade + 1)[1:]
        return [float(x) for x in ramp]
    decades = np.log10(target / start)
    count = max(1, int(np.ceil(abs(decades) * steps_per_decade)))
    return [float(x) for x in np.geomspace(start, target, count + 1)[1:]]


def continue_in_c(
    cfg: CriticalConfig,
    w0: Sequence[complex],
    c_values: Sequence[float],
    steps_per_decade: Optional[int] = None,
) -> List[CriticalSolution]:
    """Follow a critical point from cfg.c through increasing c_values.

    Uses a secant predictor, Newton correction and step halving; a step is
    rejected when Newton fails or jumps by more than half the local spacing.

    Raises:
        ContinuationError: the branch cannot be followed.
    """
    settings = get_settings()
    steps = steps_per_decade or settings.continuation_steps_per_decade
    current_c = cfg.c
    current_w = np.array(w0, dtype=complex)
    previous: Optional[Tuple[float, np.ndarray]] = None
    results: List[CriticalSolution] = []
    for target in c_values:
        if target < current_c:
            raise ContinuationError(f"c values must increase, got {target} after {current_c}")
        pending = _schedule(current_c, target, steps) if target > current_c else []
        while pending:
            next_c = pending[0]
            for _ in range(30):
                if previous is not None and current_c != previous[0]:
                    slope = (current_w - previous[1]) / (current_c - previous[0])
                    guess = current_w + slope * (next_c - current_c)
                else:
                    guess = current_w
                try:
                    solution = newton_refine(cfg.at(next_c), guess, meta=f"continuation c={next_c:g}")
                    if np.abs(solution.coords - guess).max() <= 0.5 * _spacing(cfg, current_w):
                        break
                except (SingularConfigurationError, NewtonDivergenceError):
                    pass
                next_c = (current_c + next_c) / 2
            else:
                raise ContinuationError(f"lost the branch near c = {current_c:g}")
            previous = (current_c, current_w)
            current_c, current_w = next_c, solution.coords
            if next_c == pending[0]:
                pending.pop(0)
        results.append(CriticalSolution(cfg.at(target), current_w.copy(), relative_residual(cfg.at(target), current_w), f"continuation c={target:g}"))
    return results


@dataclass
class LimitProfile:
    c_values: List[float]
    distances: np.ndarray  # (len(c_values), l)

    def decreasing(self) -> bool:
        return bool(np.all(np.diff(self.distances, axis=0) < 0))

    def scaled(self) -> np.ndarray:
        return self.distances * np.asarray(self.c_values)[:, None]


def c_limit_profile(lie_type: LieType, z: Sequence[complex]) -> LimitProfile:
    """Distances of each coordinate to the nearest site along the c checkpoints."""
    z1, z2 = complex(z[0]), complex(z[1])
    seed = closed_form_two_point_c0(lie_type, z1, z2)
    checkpoints = list(get_settings().continuation_checkpoints)
    solutions = continue_in_c(seed.config, seed.coords, checkpoints)
    sites = np.array([z1, z2])
    distances = np.array([np.abs(s.coords[:, None] - sites[None, :]).min(axis=1) for s in solutions])
    return LimitProfile(checkpoints, distances)


def verify_c_limit(lie_type: LieType, l: Optional[int] = None, z: Sequence[complex] = (0j, 1 + 0j)) -> bool:
    """Coordinates approach {z_1, z_2} monotonically, at rate 1/c at the far end."""
    if l is not None and l != len(pairing_labels(lie_type)):
        raise InvalidLieTypeError(f"the two-point lowest singular vector of {lie_type} has l = {len(pairing_labels(lie_type))}")
    profile = c_limit_profile(lie_type, z)
    factor = get_settings().limit_ratio_factor
    scaled = profile.scaled()
    ratio = scaled[-1] / scaled[-2]
    ok = profile.decreasing() and bool(np.all((ratio < factor) & (ratio > 1.0 / factor)))
    logger.info(f"c-limit for {lie_type}: decreasing={profile.decreasing()}, final c*distance ratios={np.round(ratio, 4)}")
    return ok
