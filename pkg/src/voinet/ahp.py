"""Pairwise-comparison mathematics for priority derivation.

Implements the eigenvector prioritization pipeline over square reciprocal
judgment matrices: structural validation, principal-eigenvector weight
extraction via power iteration, consistency diagnostics (CI / CR against
the random-index table), and hierarchical synthesis of criterion weights
with conditional alternative weights.

All functions are pure; a comparison matrix is a plain ``numpy`` array of
positive judgment scores with unit diagonal and reciprocal symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    StructureError,
    UnsupportedDimensionError,
)

#: Judgment-score bounds of the Saaty comparison scale.
SAATY_MIN = 1.0 / 9.0
SAATY_MAX = 9.0

#: Random consistency index by matrix dimension (Saaty's RI table).
RANDOM_INDEX = {2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49}

DEFAULT_CR_THRESHOLD = 0.10
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000

#: Relative tolerance for the reciprocity invariant a[i,j] * a[j,i] == 1.
RECIPROCITY_RTOL = 1e-12

#: Absolute tolerance for "weights sum to one" preconditions.
ROW_SUM_ATOL = 1e-9


@dataclass(frozen=True)
class Violation:
    """One invariant violation found in a comparison matrix.

    ``kind`` is one of ``"diagonal"``, ``"reciprocity"``, ``"saaty_bounds"``;
    ``index`` is the offending (row, col) pair.
    """

    kind: str
    index: tuple[int, int]
    message: str


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class WeightVector:
    """Normalized priority vector together with the dominant eigenvalue."""

    weights: np.ndarray
    lambda_max: float


@dataclass(frozen=True)
class ConsistencyReport:
    lambda_max: float
    consistency_index: float
    consistency_ratio: float
    is_consistent: bool


def as_matrix(entries) -> np.ndarray:
    """Coerce ``entries`` to a float array, enforcing shape and positivity.

    Raises ``StructureError`` for non-square input or n < 2 and
    ``DomainError`` for non-positive or non-finite entries.
    """
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructureError(f"comparison matrix must be square, got shape {m.shape}")
    if m.shape[0] < 2:
        raise StructureError(f"comparison matrix needs dimension >= 2, got {m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise DomainError("comparison matrix entries must be finite")
    if np.any(m <= 0.0):
        i, j = map(int, np.argwhere(m <= 0.0)[0])
        raise DomainError(f"comparison matrix entry ({i},{j}) = {m[i, j]} is not positive")
    return m


def validate(entries) -> ValidationResult:
    """Check the three reciprocal-matrix invariants.

    Returns a result whose ``violations`` list each offending index pair:
    diagonal entries must equal 1 exactly, below-diagonal entries must be
    the reciprocal of their mirror within ``RECIPROCITY_RTOL``, and every
    entry must lie in [1/9, 9].
    """
    m = as_matrix(entries)
    n = m.shape[0]
    violations = []
    for i in range(n):
        if m[i, i] != 1.0:
            violations.append(
                Violation("diagonal", (i, i), f"diagonal entry ({i},{i}) = {m[i, i]} != 1")
            )
    for i in range(n):
        for j in range(i):
            prod = m[i, j] * m[j, i]
            if abs(prod - 1.0) > RECIPROCITY_RTOL:
                violations.append(
                    Violation(
                        "reciprocity",
                        (i, j),
                        f"entries ({i},{j}) and ({j},{i}) multiply to {prod!r}, not 1",
                    )
                )
    for i in range(n):
        for j in range(n):
            if not (SAATY_MIN <= m[i, j] <= SAATY_MAX):
                violations.append(
                    Violation(
                        "saaty_bounds",
                        (i, j),
                        f"entry ({i},{j}) = {m[i, j]} outside [1/9, 9]",
                    )
                )
    return ValidationResult(tuple(violations))


def principal_eigenvector(
    entries, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> WeightVector:
    """Dominant eigenvector of a positive reciprocal matrix, normalized to sum 1.

    Power iteration with per-step sum normalization; converged when two
    successive iterates differ by less than ``tol`` in max-norm.  The
    dominant eigenvalue is estimated as mean((Mv)_i / v_i) at the converged
    vector, which is exact for an eigenvector.  Positive matrices have a
    simple dominant eigenvalue, so the iteration always converges for valid
    input; ``ConvergenceError`` carries the last iterate otherwise.
    """
    m = as_matrix(entries)
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    n = m.shape[0]
    v = np.full(n, 1.0 / n)
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        w = m @ v
        w /= w.sum()
        residual = float(np.max(np.abs(w - v)))
        v = w
        if residual < tol:
            lambda_max = float(np.mean((m @ v) / v))
            return WeightVector(weights=v, lambda_max=lambda_max)
    raise ConvergenceError(
        f"power iteration did not converge within {max_iter} iterations "
        f"(last residual {residual:.3e})",
        last_iterate=v,
        residual=residual,
        iterations=max_iter,
    )


def consistency(entries, threshold: float = DEFAULT_CR_THRESHOLD) -> ConsistencyReport:
    """Consistency diagnostics: CI = (lambda_max - n) / (n - 1), CR = CI / RI(n).

    A 2x2 reciprocal matrix is always consistent, so CR is defined as 0 for
    n = 2 (RI(2) = 0 would otherwise leave it undefined).  Dimensions beyond
    the random-index table raise ``UnsupportedDimensionError``.
    """
    m = as_matrix(entries)
    n = m.shape[0]
    if n not in RANDOM_INDEX:
        raise UnsupportedDimensionError(
            f"no random index for dimension {n}; supported: 2..{max(RANDOM_INDEX)}"
        )
    lambda_max = principal_eigenvector(m).lambda_max
    ci = (lambda_max - n) / (n - 1)
    cr = 0.0 if n == 2 else ci / RANDOM_INDEX[n]
    return ConsistencyReport(
        lambda_max=lambda_max,
        consistency_index=ci,
        consistency_ratio=cr,
        is_consistent=cr <= threshold,
    )


def synthesize(attribute_weights, conditional) -> np.ndarray:
    """Combine criterion weights with per-criterion conditional weights.

    ``attribute_weights`` is a priority vector over A criteria (a
    ``WeightVector`` or plain array); ``conditional`` is an A x S array
    whose row a holds the alternative weights conditioned on criterion a.
    Returns score[s] = sum_a w_a * conditional[a, s], a vector over the S
    alternatives that sums to 1.
    """
    w = np.asarray(getattr(attribute_weights, "weights", attribute_weights), dtype=float)
    c = np.asarray(conditional, dtype=float)
    if w.ndim != 1:
        raise StructureError(f"attribute weights must be a vector, got ndim {w.ndim}")
    if c.ndim != 2:
        raise StructureError(f"conditional weights must be a 2-D array, got ndim {c.ndim}")
    if c.shape[0] != w.shape[0]:
        raise StructureError(
            f"dimension mismatch: {w.shape[0]} attribute weights vs {c.shape[0]} conditional rows"
        )
    if np.any(w < 0.0) or np.any(c < 0.0):
        raise DomainError("weights must be non-negative")
    if abs(w.sum() - 1.0) > ROW_SUM_ATOL:
        raise DomainError(f"attribute weights sum to {w.sum()!r}, expected 1")
    row_sums = c.sum(axis=1)
    bad = np.where(np.abs(row_sums - 1.0) > ROW_SUM_ATOL)[0]
    if bad.size:
        raise DomainError(f"conditional row {bad[0]} sums to {row_sums[bad[0]]!r}, expected 1")
    return w @ c
