"""Dense linear-algebra primitives shared by the estimation pipeline.

Everything operates on float64 ndarrays. Problem sizes stay in the
low thousands per axis, so dense storage and LAPACK-backed routines
are the right tool.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "NonFiniteError",
    "SymmetryError",
    "gram",
    "strict_upper",
    "sym_eigenvalues",
    "empirical_spectrum",
    "load_matrix_csv",
    "save_matrix_csv",
]


class NonFiniteError(ArithmeticError):
    """A computation produced NaN or infinity."""


class SymmetryError(ValueError):
    """Matrix is not symmetric within tolerance."""


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be non-empty, got shape {arr.shape}")
    return arr


def _require_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    arr = _as_matrix(a, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    return arr


def gram(y) -> np.ndarray:
    """Gram matrix of the rows of ``y``: out[i, j] = <row i, row j>."""
    arr = _as_matrix(y, "data matrix")
    if not np.isfinite(arr).all():
        raise NonFiniteError("data matrix contains non-finite entries")
    a = arr @ arr.T
    # Symmetrize so downstream symmetry checks hold exactly.
    a = 0.5 * (a + a.T)
    if not np.isfinite(a).all():
        raise NonFiniteError("gram matrix overflowed to non-finite values")
    return a


def strict_upper(a) -> np.ndarray:
    """Copy of ``a`` with the diagonal and lower triangle zeroed."""
    arr = _require_square(a)
    return np.triu(arr, k=1)


def sym_eigenvalues(a, *, tol: float = 1e-8) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, ascending.

    ``a`` must be symmetric up to a relative tolerance of ``tol``;
    anything worse raises :class:`SymmetryError` instead of silently
    symmetrizing garbage.
    """
    arr = _require_square(a)
    if not np.isfinite(arr).all():
        raise NonFiniteError("matrix contains non-finite entries")
    scale = np.abs(arr).max()
    dev = np.abs(arr - arr.T).max()
    if dev > tol * max(scale, 1.0):
        raise SymmetryError(
            f"matrix is not symmetric: max asymmetry {dev:.3e} exceeds "
            f"tolerance {tol:.1e} * {max(scale, 1.0):.3e}"
        )
    return np.linalg.eigvalsh(0.5 * (arr + arr.T))


def empirical_spectrum(y) -> np.ndarray:
    """Eigenvalues of (1/n) * Y^T Y, ascending, as a length-d vector.

    Computed through the smaller of the two gram matrices; when n < d
    the spectrum is padded with the d - n structural zeros. Tiny
    negative values from rounding are clamped to zero.
    """
    arr = _as_matrix(y, "data matrix")
    n, d = arr.shape
    if n <= d:
        vals = sym_eigenvalues(gram(arr)) / n
    else:
        vals = sym_eigenvalues(gram(arr.T)) / n
    vals = np.clip(vals, 0.0, None)
    if n < d:
        vals = np.concatenate([np.zeros(d - n), vals])
    elif n > d:
        pass  # gram(arr.T) is already d x d
    return np.sort(vals)


def load_matrix_csv(path) -> np.ndarray:
    """Load a sample matrix from CSV: one sample per line, no header.

    Raises ValueError naming the offending 1-based line on ragged rows
    or unparseable fields.
    """
    rows: list[list[float]] = []
    width: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            fields = stripped.split(",")
            try:
                row = [float(f) for f in fields]
            except ValueError as exc:
                raise ValueError(f"line {lineno}: unparseable value ({exc})") from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError(
                    f"line {lineno}: expected {width} fields, got {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise ValueError("no data rows found")
    return np.asarray(rows, dtype=float)


def save_matrix_csv(path, y) -> None:
    """Write a matrix in the same CSV layout ``load_matrix_csv`` reads."""
    arr = _as_matrix(y, "matrix")
    with open(path, "w", encoding="utf-8") as fh:
        for row in arr:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")
