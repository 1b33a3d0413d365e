# src/qaspectral/linalg.py

"""Dense complex matrix kernel.

Everything in the package models operators as square numpy arrays of
complex128.  This module holds the shared primitives: validation, the
operator (largest-singular-value) norm, Hermitian square roots formed
from a single eigendecomposition, Kronecker products with a desk-scale
dimension cap, and the JSON matrix file format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, InputError, ResourceError

# Kronecker results above this dimension are refused.
DIMENSION_CAP = 4096


@dataclass(frozen=True)
class Tolerance:
    """Absolute / relative comparison tolerances used throughout."""

    abs: float = 1e-10
    rel: float = 1e-8

    def __post_init__(self) -> None:
        if self.abs < 0 or self.rel < 0:
            raise InputError("tolerances must be nonnegative")


DEFAULT_TOL = Tolerance()


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Validate and return M as a square complex128 array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"{name} must be square, got shape {A.shape}")
    if A.shape[0] == 0:
        raise InputError(f"{name} must be nonempty")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} has non-finite entries")
    return A


def adjoint(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2


def op_norm(M) -> float:
    """Largest singular value of a square matrix."""
    A = as_matrix(M)
    return float(np.linalg.norm(A, 2))


def smallest_singular_value(M) -> float:
    A = as_matrix(M)
    return float(np.linalg.svd(A, compute_uv=False)[-1])


def is_invertible(M, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when the smallest singular value exceeds tol.abs."""
    return smallest_singular_value(M) > tol.abs


def psd_sqrt(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in [-tol.abs, 0) are clamped to zero so that boundary
    matrices (a zero defect, say) stay inside the domain.  Eigenvalues
    below -tol.abs are a domain error, not something to paper over.
    """
    A = as_matrix(M)
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A - A.conj().T).max() > tol.abs * scale:
        raise InputError("psd_sqrt requires a Hermitian matrix")
    w, V = np.linalg.eigh(hermitian_part(A))
    if w[0] < -tol.abs * scale:
        raise DomainError(f"matrix is not PSD: smallest eigenvalue {w[0]:.3e}")
    w = np.maximum(w, 0.0)
    return hermitian_part((V * np.sqrt(w)) @ V.conj().T)


def kron(A, B) -> np.ndarray:
    """Kronecker product with the desk-scale dimension cap."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    dim = A.shape[0] * B.shape[0]
    if dim > DIMENSION_CAP:
        raise ResourceError(
            f"Kronecker product dimension {dim} exceeds cap {DIMENSION_CAP}"
        )
    return np.kron(A, B)


def matrix_power(M: np.ndarray, n: int) -> np.ndarray:
    """M**n for any integer n; negative powers go through the inverse."""
    A = as_matrix(M)
    if n >= 0:
        return np.linalg.matrix_power(A, n)
    return np.linalg.matrix_power(np.linalg.inv(A), -n)


def save_matrix(path, M) -> None:
    """Write a matrix as JSON: {"dim": k, "entries": [[[re, im], ...], ...]}."""
    A = as_matrix(M)
    payload = {
        "dim": int(A.shape[0]),
        "entries": [
            [[float(z.real), float(z.imag)] for z in row] for row in A
        ],
    }
    Path(path).write_text(json.dumps(payload) + "\n")


def load_matrix(path) -> np.ndarray:
    """Read the JSON matrix format; rejects non-square payloads."""
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read matrix from {path}: {exc}") from exc
    if not isinstance(payload, dict) or "dim" not in payload or "entries" not in payload:
        raise InputError(f"{path}: expected an object with 'dim' and 'entries'")
    dim = payload["dim"]
    rows = payload["entries"]
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"{path}: 'dim' must be a positive integer")
    if len(rows) != dim or any(len(row) != dim for row in rows):
        raise InputError(f"{path}: entries are not a {dim}x{dim} square array")
    A = np.empty((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        for j, pair in enumerate(row):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise InputError(f"{path}: entry ({i},{j}) is not a [re, im] pair")
            A[i, j] = complex(pair[0], pair[1])
    return as_matrix(A, str(path))
