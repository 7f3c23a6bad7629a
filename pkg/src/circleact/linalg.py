"""Dense complex matrix kernel.

Everything downstream works with square complex matrices of modest size
(n <= 16 or so).  Matrices are plain numpy arrays of dtype complex128;
helpers here add the validation, the eigensolver, the nullspace
extraction, and the JSON codecs that the rest of the package relies on.

The eigensolver is a self-contained cyclic Jacobi iteration rather than
a LAPACK call so that the certification path does not depend on an
opaque backend.  numpy/scipy are still used for ordinary arithmetic,
Kronecker products, and the pivoted QR factorization underlying
nullspace extraction.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes."""


class NotHermitian(ValueError):
    """Matrix handed to the Hermitian eigensolver is not Hermitian."""


class NoConvergence(RuntimeError):
    """Iteration exceeded its sweep budget without meeting tolerance."""


class SchemaError(ValueError):
    """JSON payload does not match the documented schema.

    The message always names the offending JSON path.
    """


def as_matrix(data, *, path: str = "matrix") -> np.ndarray:
    """Validate and convert to a 2-D complex128 array.

    Rejects non-2-D input and non-finite entries.
    """
    arr = np.asarray(data, dtype=complex)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{path}: expected a 2-D array, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{path}: non-finite entries are not admitted")
    return arr


def as_vector(data, *, path: str = "vector") -> np.ndarray:
    """Validate and convert to a 1-D complex128 array."""
    arr = np.asarray(data, dtype=complex)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{path}: expected a 1-D array, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{path}: non-finite entries are not admitted")
    return arr


def adjoint(M: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return M.conj().T


def frobenius(M: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(M))


def opnorm_bound(M: np.ndarray) -> float:
    """Upper bound on the operator norm (the Frobenius norm dominates it)."""
    return frobenius(M)


def kron(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Kronecker product with flat row-major indexing.

    Entry convention: (X kron Y)[(i, k), (j, l)] = X[i, j] * Y[k, l] where
    the flat row index is i * Y.shape[0] + k and the flat column index is
    j * Y.shape[1] + l.  With this convention and row-major vectorization
    vec(M) of a matrix M, (X kron Y) vec(M) = vec(X @ M @ Y.T).
    """
    return np.kron(X, Y)


def vec(M: np.ndarray) -> np.ndarray:
    """Row-major vectorization, the inverse of ``unvec``."""
    return np.ravel(M, order="C")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Reshape a flat vector back to a rows x cols matrix, row-major."""
    v = np.asarray(v)
    if v.size != rows * cols:
        raise DimensionMismatch(
            f"cannot reshape a vector of length {v.size} to {rows}x{cols}"
        )
    return v.reshape(rows, cols, order="C")


def hermitian_eig(H, *, herm_tol: float = 1e-12):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, W) with eigenvalues real and ascending and W
    unitary, H = W @ diag(eigenvalues) @ W*.  Raises NotHermitian when
    the input deviates from its adjoint by more than herm_tol relative to
    max(1, frobenius(H)), and NoConvergence if the off-diagonal mass has
    not collapsed after 100*n sweeps.
    """
    H = as_matrix(H, path="hermitian matrix")
    n = H.shape[0]
    if H.shape[1] != n:
        raise DimensionMismatch(f"expected a square matrix, got {H.shape}")
    scale = max(1.0, frobenius(H))
    if frobenius(H - adjoint(H)) > herm_tol * scale:
        raise NotHermitian(
            f"matrix deviates from its adjoint by more than {herm_tol} relative"
        )
    A = (H + adjoint(H)) / 2.0
    W = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([A[0, 0].real]), W

    off_tol = 5e-15 * scale
    max_sweeps = 100 * n
    for _ in range(max_sweeps):
        # Off-diagonal mass measured entrywise; a difference of squared
        # norms would cancel catastrophically near convergence.
        off = frobenius(A - np.diag(np.diag(A)))
        if off <= off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= off_tol / n:
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                # Unitary plane rotation zeroing A[p, q]: beta carries the
                # phase, t is the smaller root of t^2 - 2*tau*t - 1 = 0.
                beta = apq / abs(apq)
                tau = (aqq - app) / (2.0 * abs(apq))
                if tau == 0.0:
                    t = 1.0
                else:
                    t = -np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                J2 = np.array([[c, -s * beta], [s * np.conj(beta), c]])
                A[:, [p, q]] = A[:, [p, q]] @ J2
                A[[p, q], :] = adjoint(J2) @ A[[p, q], :]
                W[:, [p, q]] = W[:, [p, q]] @ J2
    else:
        raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], W[:, order]


def nullspace_basis(M, tol: float = 1e-9) -> list[np.ndarray]:
    """Orthonormal basis of the numerical nullspace of M.

    Uses Householder QR with column pivoting on the adjoint; the rank is
    the number of diagonal entries of R exceeding tol * frobenius(M).
    Returns a list of 1-D vectors (possibly empty).
    """
    M = as_matrix(M, path="nullspace input")
    rows, cols = M.shape
    Q, R, _ = scipy.linalg.qr(adjoint(M), pivoting=True)
    thresh = tol * frobenius(M)
    rank = 0
    for i in range(min(rows, cols)):
        if abs(R[i, i]) > thresh:
            rank += 1
        else:
            break
    return [np.ascontiguousarray(Q[:, j]) for j in range(rank, cols)]


def split_by_gaps(values: np.ndarray, gap: float) -> list[np.ndarray]:
    """Split ascending values into index runs separated by more than gap."""
    values = np.asarray(values)
    if values.size == 0:
        return []
    idx = np.arange(values.size)
    breaks = np.nonzero(np.diff(values) > gap)[0]
    return list(np.split(idx, breaks + 1))


def matrix_to_json(M: np.ndarray) -> dict:
    """Serialize to {"rows", "cols", "data"} with row-major [re, im] pairs."""
    M = as_matrix(M)
    rows, cols = M.shape
    data = [[float(z.real), float(z.imag)] for z in M.ravel(order="C")]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(obj, *, path: str = "matrix") -> np.ndarray:
    """Parse the matrix schema, raising SchemaError with the faulty path."""
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object, got {type(obj).__name__}")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise SchemaError(f"{path}.{key}: missing")
    rows, cols = obj["rows"], obj["cols"]
    if not isinstance(rows, int) or rows < 0:
        raise SchemaError(f"{path}.rows: expected a non-negative integer")
    if not isinstance(cols, int) or cols < 0:
        raise SchemaError(f"{path}.cols: expected a non-negative integer")
    data = obj["data"]
    if not isinstance(data, list) or len(data) != rows * cols:
        raise SchemaError(f"{path}.data: expected a list of {rows * cols} entries")
    flat = np.empty(rows * cols, dtype=complex)
    for i, entry in enumerate(data):
        flat[i] = _parse_complex(entry, path=f"{path}.data[{i}]")
    return flat.reshape(rows, cols)


def vector_to_json(v: np.ndarray) -> dict:
    """Serialize to {"dim", "data"} with [re, im] pairs."""
    v = as_vector(v)
    return {
        "dim": int(v.size),
        "data": [[float(z.real), float(z.imag)] for z in v],
    }


def vector_from_json(obj, *, path: str = "vector") -> np.ndarray:
    """Parse the vector schema, raising SchemaError with the faulty path."""
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object, got {type(obj).__name__}")
    for key in ("dim", "data"):
        if key not in obj:
            raise SchemaError(f"{path}.{key}: missing")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 0:
        raise SchemaError(f"{path}.dim: expected a non-negative integer")
    data = obj["data"]
    if not isinstance(data, list) or len(data) != dim:
        raise SchemaError(f"{path}.data: expected a list of {dim} entries")
    out = np.empty(dim, dtype=complex)
    for i, entry in enumerate(data):
        out[i] = _parse_complex(entry, path=f"{path}.data[{i}]")
    return out


def _parse_complex(entry, *, path: str) -> complex:
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        raise SchemaError(f"{path}: expected a [re, im] pair of numbers")
    z = complex(float(entry[0]), float(entry[1]))
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise SchemaError(f"{path}: non-finite entries are not admitted")
    return z
