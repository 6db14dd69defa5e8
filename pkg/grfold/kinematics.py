"""Dual-conformal kinematics in spinor, dual-coordinate and twistor variables.

Two kinds of samples are produced.  D=3 samples are floating point: momenta
are ``p_i = lambda_i lambda_i^T`` and momentum conservation is imposed by
solving a complex conic for the last two spinors.  D=4 samples start from a
random integer ``4 x n`` twistor matrix and are kept in exact rational
arithmetic (numpy object arrays holding sympy numbers).

Conventions
-----------
``J = [[0, 1], [-1, 0]]`` and ``<a, b> = a^T J b``.  Dual coordinates start
at ``x_1 = 0`` with ``x_{i+1} = x_i + lambda_i lambdat_i^T``; the twistor of
particle ``i`` is ``Z_i = (lambda_i, x_i J lambda_i)``.  The square of a
bispinor is its determinant.  Indices are cyclic and 1-based throughout.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
import pandas as pd
import sympy

from .config import VerificationConfig
from .errors import (
    DegenerateSampleError,
    InvalidParametersError,
    SamplingError,
    UnsupportedEvaluationError,
)
from .folding import (
    EquationForm,
    PluckerSymbol,
    canonical_symbol,
    closed_form_equations,
    reduce_index,
    run_schedule,
)
from .schemas import IdentityStats, ResidualReport
from .seeds import ExchangeRecord, verify_exchange

LOGGER = logging.getLogger(__name__)

J = np.array([[0, 1], [-1, 0]])

_SIGMA = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_ETA = (-1.0, 1.0, 1.0, 1.0)


def pauli_encode(p: Sequence[complex]) -> np.ndarray:
    """Bispinor ``sum_mu eta^{mu mu} p^mu sigma^mu``; its determinant is ``-p.p``."""

    return sum(_ETA[mu] * p[mu] * _SIGMA[mu] for mu in range(4))  # type: ignore[return-value]


def minkowski_square(p: Sequence[complex]) -> complex:
    return -p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]


def det2(matrix: np.ndarray) -> object:
    return matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]


def angle(a: Sequence[object], b: Sequence[object]) -> object:
    """``<a, b> = a^1 b^2 - a^2 b^1``."""

    return a[0] * b[1] - a[1] * b[0]  # type: ignore[operator]


def relative_residual(lhs: object, rhs: object) -> float:
    """``|lhs - rhs| / max(|lhs|, |rhs|)``, and 0 when both vanish."""

    scale = max(abs(lhs), abs(rhs))  # type: ignore[arg-type]
    if scale == 0:
        return 0.0
    return float(abs(lhs - rhs) / scale)  # type: ignore[operator]


def dual_from_spinors(
    lam: np.ndarray, lamt: np.ndarray, tolerance: float = 1e-10
) -> np.ndarray:
    """Dual coordinates ``x_1 .. x_n`` as an ``(n, 2, 2)`` array.

    Raises :class:`DegenerateSampleError` when ``x_{n+1}`` misses ``x_1`` by
    more than ``tolerance`` relative to the largest momentum.
    """

    momenta = np.einsum("ia,ib->iab", lam, lamt)
    x = np.concatenate([np.zeros_like(momenta[:1]), np.cumsum(momenta, axis=0)])
    scale = max(float(np.abs(momenta).max()), 1e-300)
    closure = float(np.abs(x[-1]).max()) / scale
    if closure > tolerance:
        raise DegenerateSampleError(f"dual coordinates do not close: residual {closure:.3e}")
    return x[:-1]


def twistors_from(lam: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``4 x n`` matrix with columns ``(lambda_i, x_i J lambda_i)``."""

    mu = np.einsum("iab,bc,ic->ia", x, J, lam)
    return np.concatenate([lam, mu], axis=1).T


# ----------------------------------------------------------------------


@dataclass(eq=False)
class KinematicsSample:
    """One kinematic point; ``twistors`` holds ``Z_1 .. Z_n`` as columns."""

    dim: int
    lam: np.ndarray
    x: np.ndarray
    twistors: np.ndarray
    _plucker_cache: Dict[Tuple[int, ...], object] = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return int(self.twistors.shape[1])

    @property
    def exact(self) -> bool:
        return self.twistors.dtype == object

    @classmethod
    def from_spinors(cls, lam: np.ndarray, closure_tolerance: float = 1e-10) -> "KinematicsSample":
        lam = np.asarray(lam, dtype=complex)
        x = dual_from_spinors(lam, lam, closure_tolerance)
        return cls(3, lam, x, twistors_from(lam, x))

    @classmethod
    def from_twistors(cls, matrix: sympy.Matrix) -> "KinematicsSample":
        """Exact D=4 sample; ``x_i`` is the line through ``Z_{i-1}`` and ``Z_i``."""

        z = np.array(matrix.tolist(), dtype=object)
        if z.shape[0] != 4:
            raise InvalidParametersError(f"twistor matrix must have 4 rows, got {z.shape[0]}")
        n = z.shape[1]
        lam = z[:2, :].T
        mu = z[2:, :].T
        x = np.empty((n, 2, 2), dtype=object)
        for i in range(n):
            prev = i - 1
            bracket = angle(lam[prev], lam[i])
            if bracket == 0:
                raise DegenerateSampleError(f"<{reduce_index(i, n)},{i + 1}> vanishes")
            spinors = np.column_stack([J @ lam[prev], J @ lam[i]])
            twisted = np.column_stack([mu[prev], mu[i]])
            x[i] = twisted @ _inverse2(spinors)
        return cls(4, lam, x, z)

    # ------------------------------------------------------------------
    def spinor(self, i: int) -> np.ndarray:
        return self.lam[reduce_index(i, self.n) - 1]

    def dual(self, i: int) -> np.ndarray:
        return self.x[reduce_index(i, self.n) - 1]

    def bracket(self, i: int, j: int) -> object:
        return angle(self.spinor(i), self.spinor(j))

    def momentum(self, i: int) -> np.ndarray:
        if self.dim != 3:
            raise UnsupportedEvaluationError("momenta are only formed for D=3 samples")
        spinor = self.spinor(i)
        return np.outer(spinor, spinor)

    def momentum_sum(self, first: int, count: int) -> np.ndarray:
        """``p_first + p_{first+1} + ...`` over ``count`` cyclic terms."""

        total = np.zeros((2, 2), dtype=self.lam.dtype)
        for offset in range(count):
            total = total + self.momentum(first + offset)
        return total

    def plucker(self, indices: Sequence[int]) -> object:
        """Determinant of the listed twistor columns (cyclic indices)."""

        symbol, sign = canonical_symbol(indices, self.n)
        if symbol is None:
            return 0
        return sign * self.sorted_plucker(symbol.indices)

    def sorted_plucker(self, indices: Tuple[int, ...]) -> object:
        if indices not in self._plucker_cache:
            columns = [index - 1 for index in indices]
            block = self.twistors[:, columns]
            if self.exact:
                value = sympy.Matrix(block.tolist()).det(method="bareiss")
            else:
                value = complex(np.linalg.det(block.astype(complex)))
            self._plucker_cache[indices] = value
        return self._plucker_cache[indices]

    def plucker_values(self, symbols: Iterable[PluckerSymbol]) -> Dict[PluckerSymbol, object]:
        return {symbol: self.sorted_plucker(symbol.indices) for symbol in symbols}

    def shifted(self, shift: int) -> "KinematicsSample":
        """Relabel particles ``i -> i - shift``."""

        if self.dim == 3:
            return KinematicsSample.from_spinors(np.roll(self.lam, -shift, axis=0))
        return KinematicsSample.from_twistors(
            sympy.Matrix(np.roll(self.twistors, -shift, axis=1).tolist())
        )


def _inverse2(matrix: np.ndarray) -> np.ndarray:
    determinant = det2(matrix)
    adjugate = np.array([[matrix[1, 1], -matrix[0, 1]], [-matrix[1, 0], matrix[0, 0]]])
    if adjugate.dtype == object:
        return np.array([[entry / determinant for entry in row] for row in adjugate], dtype=object)
    return adjugate / determinant


def rescale_columns(sample: KinematicsSample, scales: Sequence[object]) -> KinematicsSample:
    """Scale ``Z_i`` and ``lambda_i`` by ``scales[i-1]``; dual coordinates are unchanged."""

    if len(scales) != sample.n:
        raise InvalidParametersError(f"expected {sample.n} scales, got {len(scales)}")
    dtype = object if sample.exact else complex
    factors = np.array(list(scales), dtype=dtype)
    return KinematicsSample(
        sample.dim,
        sample.lam * factors[:, None],
        sample.x.copy(),
        sample.twistors * factors[None, :],
    )


# ----------------------------------------------------------------------
# Sampling


def pairwise_quadruples(n: int) -> Set[Tuple[int, ...]]:
    """Sorted index sets ``{i-1, i, j-1, j}`` with four distinct members."""

    quadruples = set()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            symbol, _ = canonical_symbol((i - 1, i, j - 1, j), n)
            if symbol is not None:
                quadruples.add(symbol.indices)
    return quadruples


def folding_pairs(n: int) -> List[Tuple[int, int]]:
    """Unordered pairs ``a < c`` whose cyclic separation is at least three."""

    return [(a, c) for a, c in combinations(range(1, n + 1), 2) if 3 <= c - a <= n - 3]


def _grid_complex(rng: np.random.Generator, size: Tuple[int, ...], grid_range: int) -> np.ndarray:
    real = rng.integers(-grid_range, grid_range + 1, size=size)
    imag = rng.integers(-grid_range, grid_range + 1, size=size)
    return real + 1j * imag


def _d3_candidate(n: int, rng: np.random.Generator, grid_range: int) -> Optional[np.ndarray]:
    lam = _grid_complex(rng, (n - 2, 2), grid_range).astype(complex)
    m = -np.einsum("ia,ib->ab", lam, lam)
    determinant = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(m[0, 0]) < 1e-9 or abs(determinant) < 1e-9:
        return None

    u1 = complex(_grid_complex(rng, (1,), grid_range)[0])
    root = np.sqrt(complex(determinant * (m[0, 0] - u1 * u1)))
    u2 = (m[0, 1] * u1 + (root if rng.integers(2) else -root)) / m[0, 0]
    u = np.array([u1, u2])

    rest = m - np.outer(u, u)
    if abs(rest[0, 0]) >= abs(rest[1, 1]):
        if abs(rest[0, 0]) < 1e-12:
            return None
        v1 = np.sqrt(rest[0, 0])
        v = np.array([v1, rest[0, 1] / v1])
    else:
        v2 = np.sqrt(rest[1, 1])
        v = np.array([rest[0, 1] / v2, v2])
    return np.vstack([lam, u, v])


def _is_generic_d3(
    sample: KinematicsSample, bracket_floor: float, plucker_floor: float
) -> Optional[str]:
    n = sample.n
    norms = np.linalg.norm(sample.lam, axis=1)
    for i in range(1, n + 1):
        j = i % n + 1
        if abs(sample.bracket(i, j)) < bracket_floor * norms[i - 1] * norms[j - 1]:
            return f"small bracket <{i},{j}>"

    quadruples = np.array(sorted(pairwise_quadruples(n))) - 1
    blocks = np.transpose(sample.twistors[:, quadruples], (1, 0, 2))
    dets = np.abs(np.linalg.det(blocks))
    column_norms = np.linalg.norm(sample.twistors, axis=0)
    scales = np.prod(column_norms[quadruples], axis=1)
    if np.any(dets < plucker_floor * scales):
        return "small Plücker coordinate"
    return None


def sample_d3(
    n: int, rng: np.random.Generator, config: Optional[VerificationConfig] = None
) -> KinematicsSample:
    """Generic D=3 sample with ``sum_i lambda_i lambda_i^T = 0``."""

    if n < 6:
        raise InvalidParametersError(f"D=3 sampling needs n >= 6, got {n}")
    config = config or VerificationConfig()
    reason = "no candidate"
    for attempt in range(1, config.resample_limit + 1):
        lam = _d3_candidate(n, rng, config.grid_range)
        if lam is None:
            reason = "singular conic"
        else:
            try:
                sample = KinematicsSample.from_spinors(lam)
            except DegenerateSampleError as exc:
                reason = str(exc)
            else:
                failure = _is_generic_d3(sample, config.bracket_floor, config.plucker_floor)
                if failure is None:
                    return sample
                reason = failure
        LOGGER.debug("Rejected D=3 candidate %d: %s", attempt, reason)
        if attempt == max(1, config.resample_limit * 4 // 5):
            LOGGER.warning("D=3 sampler close to its resample limit (%d)", config.resample_limit)
    raise SamplingError(f"no generic D=3 sample for n={n}", config.resample_limit, reason)


def sample_d3_spinors(
    n: int, rng: np.random.Generator, config: Optional[VerificationConfig] = None
) -> np.ndarray:
    """Spinors ``lambda_1 .. lambda_n`` of a generic D=3 sample, shape ``(n, 2)``."""

    return sample_d3(n, rng, config).lam


def d4_relevant_quadruples(n: int) -> Set[Tuple[int, ...]]:
    quadruples = pairwise_quadruples(n)
    for equation in closed_form_equations(n):
        quadruples.update(symbol.indices for symbol in equation.symbols())
    return quadruples


def sample_d4_twistors(
    n: int, rng: np.random.Generator, config: Optional[VerificationConfig] = None
) -> sympy.Matrix:
    """Integer ``4 x n`` twistor matrix at which every relevant Plücker is nonzero."""

    if n < 6:
        raise InvalidParametersError(f"D=4 sampling needs n >= 6, got {n}")
    config = config or VerificationConfig()
    quadruples = sorted(d4_relevant_quadruples(n))
    bound = config.entry_range
    for attempt in range(1, config.resample_limit + 1):
        matrix = sympy.Matrix(rng.integers(-bound, bound + 1, size=(4, n)).tolist())
        brackets = [
            matrix[0, i] * matrix[1, (i + 1) % n] - matrix[1, i] * matrix[0, (i + 1) % n]
            for i in range(n)
        ]
        if all(brackets) and all(
            matrix.extract([0, 1, 2, 3], [index - 1 for index in quad]).det(method="bareiss") != 0
            for quad in quadruples
        ):
            return matrix
        LOGGER.debug("Rejected D=4 candidate %d", attempt)
    raise SamplingError(f"no generic D=4 twistors for n={n}", config.resample_limit, "vanishing minor")


# ----------------------------------------------------------------------
# Identities


def _nonzero(value: object, what: str) -> object:
    if value == 0:
        raise DegenerateSampleError(f"{what} vanishes")
    return value


def _norm(value: np.ndarray) -> float:
    return float(np.abs(value.astype(complex)).max()) if value.size else 0.0


def _vanishing_residual(value: object, scale: float) -> float:
    """Residual of an identity whose right-hand side vanishes identically."""

    if value == 0:
        return 0.0
    if scale == 0:
        return float("inf")
    return float(abs(value)) / scale  # type: ignore[arg-type]


def check_xij(sample: KinematicsSample, i: int, j: int) -> float:
    """``x_ij^2`` against ``P[i-1,i,j-1,j] / (<i-1,i><j-1,j>)``."""

    difference = sample.dual(i) - sample.dual(j)
    lhs = det2(difference)
    if canonical_symbol((i - 1, i, j - 1, j), sample.n)[0] is None:
        scale = max(_norm(sample.dual(i)), _norm(sample.dual(j)), _norm(difference)) ** 2
        return _vanishing_residual(lhs, scale)
    brackets = _nonzero(sample.bracket(i - 1, i), f"<{i - 1},{i}>") * _nonzero(  # type: ignore[operator]
        sample.bracket(j - 1, j), f"<{j - 1},{j}>"
    )
    rhs = sample.plucker((i - 1, i, j - 1, j)) / brackets  # type: ignore[operator]
    return relative_residual(lhs, rhs)


def sandwich(sample: KinematicsSample, i: int, k: int, j: int) -> object:
    """``<i| x_ik x_kj |j>`` with both bispinors contracted through ``J``."""

    x_ik = sample.dual(i) - sample.dual(k)
    x_kj = sample.dual(k) - sample.dual(j)
    return sample.spinor(i) @ J @ x_ik.T @ J @ x_kj @ J @ sample.spinor(j)


def check_bracket_identity(sample: KinematicsSample, i: int, k: int, j: int) -> float:
    """``<i| x_ik x_kj |j>`` against ``P[i,k-1,k,j] / <k-1,k>``."""

    lhs = sandwich(sample, i, k, j)
    if canonical_symbol((i, k - 1, k, j), sample.n)[0] is None:
        scale = (
            _norm(sample.spinor(i))
            * _norm(sample.spinor(j))
            * max(_norm(sample.dual(i)), _norm(sample.dual(k)), _norm(sample.dual(j))) ** 2
        )
        return _vanishing_residual(lhs, scale)
    rhs = sample.plucker((i, k - 1, k, j)) / _nonzero(  # type: ignore[operator]
        sample.bracket(k - 1, k), f"<{k - 1},{k}>"
    )
    return relative_residual(lhs, rhs)


def check_d3_consecutive(sample: KinematicsSample, a: int, allow_d4: bool = False) -> float:
    """``<a-1,a><a+1,a+2><a,a+1>^2`` against ``P[a-1,a,a+1,a+2]``.

    Only D=3 kinematics satisfies this; ``allow_d4`` evaluates it anyway.
    """

    if sample.dim != 3 and not allow_d4:
        raise UnsupportedEvaluationError("the consecutive-bracket identity needs D=3 kinematics")
    lhs = sample.bracket(a - 1, a) * sample.bracket(a + 1, a + 2) * sample.bracket(a, a + 1) ** 2  # type: ignore[operator]
    return relative_residual(lhs, sample.plucker((a - 1, a, a + 1, a + 2)))


def trace_contract(matrices: Sequence[np.ndarray]) -> object:
    """``[[m_1, ..., m_k]] = tr(m_1 E m_2 E ... m_k E)`` with ``E = J^T``."""

    product = np.eye(2, dtype=matrices[0].dtype)
    for matrix in matrices:
        product = product @ matrix @ J.T
    return np.trace(product)


def calibrate_trace_sign(sample: KinematicsSample, a: int = 1, b: int = 2) -> int:
    """Sign ``s`` with ``[[p_a, p_b]] = s <a,b>^2`` on a D=3 sample."""

    contracted = trace_contract([sample.momentum(a), sample.momentum(b)])
    square = sample.bracket(a, b) ** 2  # type: ignore[operator]
    if abs(square) == 0:
        raise DegenerateSampleError(f"<{a},{b}> vanishes")
    return 1 if abs(contracted - square) <= abs(contracted + square) else -1  # type: ignore[operator]


def _check_separation(a: int, c: int, n: int) -> None:
    if not 3 <= (c - a) % n <= n - 3:
        raise InvalidParametersError(f"c - a must lie in [3, {n - 3}] cyclically, got a={a}, c={c}")


def s_quantity(sample: KinematicsSample, a: int, c: int) -> Tuple[object, object, object]:
    """The trace ``S`` at ``(a, c)`` directly and in its two Plücker forms."""

    n = sample.n
    _check_separation(a, c, n)
    gap = (c - a) % n
    middle = sample.momentum_sum(a + 2, gap - 2)
    rest = sample.momentum_sum(c + 2, n - gap - 2)
    direct = trace_contract(
        [sample.momentum(a), sample.momentum(a + 1), middle, sample.momentum(c), sample.momentum(c + 1), rest]
    )
    br = sample.bracket
    p = sample.plucker
    form_a = (
        p((c, c + 1, c + 2, a))
        * br(a, a + 1)
        * p((a + 1, c - 1, c, c + 1))
        / (br(c - 1, c) * br(c + 1, c + 2) * br(c, c + 1))  # type: ignore[operator]
    )
    form_b = (
        p((a, a + 1, a + 2, c))
        * br(c, c + 1)
        * p((c + 1, a - 1, a, a + 1))
        / (br(a - 1, a) * br(a + 1, a + 2) * br(a, a + 1))  # type: ignore[operator]
    )
    return direct, form_a, form_b


def folding_sides(sample: KinematicsSample, a: int, c: int) -> Tuple[object, object]:
    p = sample.plucker
    common = _nonzero(p((a, a + 1, c, c + 1)), f"P[{a},{a + 1},{c},{c + 1}]")
    lhs = p((a, a + 1, a + 2, c)) * p((a - 1, a, a + 1, c + 1)) / (  # type: ignore[operator]
        _nonzero(p((a - 1, a, a + 1, a + 2)), f"P[{a - 1}..{a + 2}]") * common  # type: ignore[operator]
    )
    rhs = p((a + 1, c - 1, c, c + 1)) * p((a, c, c + 1, c + 2)) / (  # type: ignore[operator]
        _nonzero(p((c - 1, c, c + 1, c + 2)), f"P[{c - 1}..{c + 2}]") * common  # type: ignore[operator]
    )
    return lhs, rhs


def folding_residual(sample: KinematicsSample, a: int, c: int) -> float:
    """Relative residual of the kinematic constraint at ``(a, c)``."""

    _check_separation(a, c, sample.n)
    return relative_residual(*folding_sides(sample, a, c))


def equation_residual(sample: KinematicsSample, equation: EquationForm) -> float:
    values = sample.plucker_values(equation.symbols())
    if any(value == 0 for value in values.values()):
        raise DegenerateSampleError(f"vanishing Plücker in {equation.source or 'equation'}")
    return relative_residual(*equation.evaluate(values))


def plucker_relation_residual(
    sample: KinematicsSample, shared: Tuple[int, int], quad: Tuple[int, int, int, int]
) -> float:
    """Three-term relation ``[S i k][S j l] = [S i j][S k l] + [S i l][S j k]``."""

    i, j, k, l = quad
    p = sample.plucker
    lhs = p(shared + (i, k)) * p(shared + (j, l))  # type: ignore[operator]
    rhs = p(shared + (i, j)) * p(shared + (k, l)) + p(shared + (i, l)) * p(shared + (j, k))  # type: ignore[operator]
    return relative_residual(lhs, rhs)


def momentum_conservation_residual(sample: KinematicsSample) -> float:
    momenta = np.einsum("ia,ib->iab", sample.lam, sample.lam)
    return float(np.abs(momenta.sum(axis=0)).max() / np.abs(momenta).max())


# ----------------------------------------------------------------------
# Suites


Row = Tuple[int, str, float]


def _rows(trial: int, name: str, residuals: Iterable[float]) -> List[Row]:
    return [(trial, name, float(value)) for value in residuals]


def d3_trial_rows(
    sample: KinematicsSample, trial: int, trace_sign: int, rng: np.random.Generator
) -> List[Row]:
    """Residuals of every D=3 identity on one sample."""

    n = sample.n
    points = range(1, n + 1)
    rows: List[Row] = []
    rows += _rows(trial, "momentum_conservation", [momentum_conservation_residual(sample)])
    rows += _rows(trial, "xij", (check_xij(sample, i, j) for i in points for j in points))
    rows += _rows(
        trial,
        "bracket_identity",
        (check_bracket_identity(sample, i, k, j) for i in points for k in points for j in points),
    )
    rows += _rows(trial, "consecutive", (check_d3_consecutive(sample, a) for a in points))
    rows += _rows(
        trial,
        "trace_sign",
        (
            relative_residual(
                trace_contract([sample.momentum(a), sample.momentum(a + 1)]),
                trace_sign * sample.bracket(a, a + 1) ** 2,  # type: ignore[operator]
            )
            for a in points
        ),
    )

    s_form_a: List[float] = []
    s_form_b: List[float] = []
    for a in points:
        for c in points:
            if 3 <= (c - a) % n <= n - 3:
                direct, form_a, form_b = s_quantity(sample, a, c)
                s_form_a.append(relative_residual(direct, form_a))
                s_form_b.append(relative_residual(direct, form_b))
    rows += _rows(trial, "s_form_a", s_form_a)
    rows += _rows(trial, "s_form_b", s_form_b)

    pairs = folding_pairs(n)
    rows += _rows(trial, "folding", (folding_residual(sample, a, c) for a, c in pairs))
    rows += _rows(
        trial,
        "folding_equations",
        (equation_residual(sample, equation) for equation in closed_form_equations(n)),
    )

    scales = rng.uniform(0.5, 2.0, size=n) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
    rescaled = rescale_columns(sample, scales.tolist())
    rows += _rows(
        trial,
        "rescaled",
        [check_xij(rescaled, i, j) for i in points for j in points]
        + [check_bracket_identity(rescaled, i, k, j) for i in points for k in points for j in points]
        + [folding_residual(rescaled, a, c) for a, c in pairs],
    )
    return rows


def trial_streams(rng_seed: int, trials: int) -> List[np.random.Generator]:
    """One independent generator per trial, spawned from the master seed."""

    children = np.random.SeedSequence(rng_seed).spawn(trials)
    return [np.random.default_rng(child) for child in children]


def aggregate(rows: Sequence[Row], threshold: float) -> Dict[str, IdentityStats]:
    """Per-identity max, median and share of residuals above ``threshold``."""

    if not rows:
        return {}
    frame = pd.DataFrame(rows, columns=["trial", "identity", "residual"])
    frame["violated"] = frame["residual"] > threshold
    grouped = frame.groupby("identity", sort=True).agg(
        max=("residual", "max"),
        median=("residual", "median"),
        violation_rate=("violated", "mean"),
        count=("residual", "size"),
    )
    return {
        str(name): IdentityStats(
            float(row["max"]), float(row["median"]), float(row["violation_rate"]), int(row["count"])
        )
        for name, row in grouped.iterrows()
    }


def _require_trials(config: VerificationConfig) -> None:
    if config.trials < 1:
        raise InvalidParametersError(f"a suite needs at least one trial, got {config.trials}")


def run_d3_suite(
    n: int, config: Optional[VerificationConfig] = None
) -> ResidualReport:
    """Check every D=3 identity on ``config.trials`` independent samples."""

    config = config or VerificationConfig()
    if n < 6:
        raise InvalidParametersError(f"the D=3 suite needs n >= 6, got {n}")
    _require_trials(config)
    rows: List[Row] = []
    failures = 0
    trace_sign: Optional[int] = None
    for trial, rng in enumerate(trial_streams(config.rng_seed, config.trials)):
        try:
            sample = sample_d3(n, rng, config)
        except SamplingError as exc:
            LOGGER.warning("Trial %d: %s", trial, exc)
            failures += 1
            continue
        if trace_sign is None:
            trace_sign = calibrate_trace_sign(sample)
        rows.extend(d3_trial_rows(sample, trial, trace_sign, rng))

    identities = aggregate(rows, config.tolerance)
    passed = (
        bool(identities)
        and failures == 0
        and all(stats.max <= config.tolerance for stats in identities.values())
    )
    LOGGER.info("D=3 suite n=%d: %s", n, "pass" if passed else "FAIL")
    return ResidualReport(
        dim=3,
        n=n,
        trials=config.trials,
        tolerance=config.tolerance,
        rng_seed=config.rng_seed,
        passed=passed,
        identities=identities,
        sampler_failures=failures,
        trace_sign=trace_sign,
    )


EXACT_D4_IDENTITIES = ("xij", "bracket_identity", "plucker_relations", "exchange")


def d4_trial_rows(
    sample: KinematicsSample,
    matrix: sympy.Matrix,
    trial: int,
    equations: Sequence[EquationForm],
    records: Sequence[ExchangeRecord],
) -> List[Row]:
    """Folding residuals and the exact D=4 identities on one sample."""

    n = sample.n
    points = range(1, n + 1)
    rows: List[Row] = []
    for equation in equations:
        rows.append((trial, f"folding[{equation.source}]", equation_residual(sample, equation)))

    rows += _rows(trial, "xij", (check_xij(sample, i, j) for i in points for j in points))
    rows += _rows(
        trial,
        "bracket_identity",
        (
            check_bracket_identity(sample, i, k, j)
            for i in points
            for k in points
            for j in points
        ),
    )
    rows += _rows(
        trial,
        "plucker_relations",
        (
            plucker_relation_residual(sample, (a, a + 1), quad)  # type: ignore[arg-type]
            for a in points
            for quad in combinations(
                [reduce_index(a + offset, n) for offset in range(2, n)], 4
            )
        ),
    )
    rows += _rows(
        trial, "exchange", (0.0 if verify_exchange(record, matrix) else 1.0 for record in records)
    )
    return rows


def run_d4_control(
    n: int, config: Optional[VerificationConfig] = None
) -> ResidualReport:
    """Show that generic D=4 twistors violate the folding equations.

    Passes when every folding equation exceeds ``config.d4_threshold`` in at
    least ``config.d4_violation_rate`` of the trials while the identities that
    hold in any dimension stay exactly zero.
    """

    config = config or VerificationConfig()
    _require_trials(config)
    equations = closed_form_equations(n)
    records = run_schedule(4, n).records
    rows: List[Row] = []
    failures = 0
    for trial, rng in enumerate(trial_streams(config.rng_seed, config.trials)):
        try:
            matrix = sample_d4_twistors(n, rng, config)
        except SamplingError as exc:
            LOGGER.warning("Trial %d: %s", trial, exc)
            failures += 1
            continue
        sample = KinematicsSample.from_twistors(matrix)
        rows.extend(d4_trial_rows(sample, matrix, trial, equations, records))

    identities = aggregate(rows, config.d4_threshold)
    folding = [stats for name, stats in identities.items() if name.startswith("folding[")]
    exact = [identities[name] for name in EXACT_D4_IDENTITIES if name in identities]
    passed = (
        failures == 0
        and len(folding) == len(equations)
        and all(stats.violation_rate >= config.d4_violation_rate for stats in folding)
        and len(exact) == len(EXACT_D4_IDENTITIES)
        and all(stats.max == 0 for stats in exact)
    )
    LOGGER.info("D=4 control n=%d: %s", n, "pass" if passed else "FAIL")
    return ResidualReport(
        dim=4,
        n=n,
        trials=config.trials,
        tolerance=config.d4_threshold,
        rng_seed=config.rng_seed,
        passed=passed,
        identities=identities,
        sampler_failures=failures,
    )


__all__ = [
    "EXACT_D4_IDENTITIES",
    "J",
    "KinematicsSample",
    "aggregate",
    "angle",
    "calibrate_trace_sign",
    "check_bracket_identity",
    "check_d3_consecutive",
    "check_xij",
    "d3_trial_rows",
    "d4_trial_rows",
    "det2",
    "dual_from_spinors",
    "equation_residual",
    "folding_pairs",
    "folding_residual",
    "folding_sides",
    "minkowski_square",
    "momentum_conservation_residual",
    "pairwise_quadruples",
    "pauli_encode",
    "plucker_relation_residual",
    "relative_residual",
    "rescale_columns",
    "run_d3_suite",
    "run_d4_control",
    "s_quantity",
    "sample_d3",
    "sample_d3_spinors",
    "sample_d4_twistors",
    "sandwich",
    "trace_contract",
    "trial_streams",
    "twistors_from",
]
