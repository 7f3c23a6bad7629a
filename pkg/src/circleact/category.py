"""Monoidal structure on coaction candidates.

Objects are the (A, B) candidates of the coaction layer; morphisms
X -> Y are matrices T intertwining the two candidates on the circle
generator: T A_X = A_Y T and T B_X = B_Y T.  Direct sums, tensor
products, conjugates, morphism spaces, irreducibility tests, and a
seeded decomposition into irreducible summands all live here, together
with the pairing-vector sanity check for conjugation.

The tensor product is implemented in closed form; applying the left
factor's coaction on top of the right factor's generator image gives an
independent symbolic route to the same coefficients, and the test suite
holds the two routes against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .linalg import (
    DimensionMismatch,
    adjoint,
    as_vector,
    frobenius,
    hermitian_eig,
    kron,
    matrix_to_json,
    nullspace_basis,
    split_by_gaps,
    unvec,
)
from .coaction import CertificateReport, CheckResult, LinearObject


class DecompositionFailure(RuntimeError):
    """Decomposition into irreducible summands did not certify."""


def direct_sum(X: LinearObject, Y: LinearObject) -> LinearObject:
    """Block diagonal sum of two candidates."""
    return LinearObject(
        X.n + Y.n,
        scipy.linalg.block_diag(X.A, Y.A),
        scipy.linalg.block_diag(X.B, Y.B),
    )


def tensor_product(X: LinearObject, Y: LinearObject) -> LinearObject:
    """Tensor product candidate on the Kronecker product space.

    Closed form: the degree +1 coefficient is
    kron(A_X, A_Y) + kron(adjoint(B_X), B_Y) and the degree -1
    coefficient is kron(B_X, A_Y) + kron(adjoint(A_X), B_Y), the left
    factor occupying the left Kronecker slot.
    """
    A = kron(X.A, Y.A) + kron(adjoint(X.B), Y.B)
    B = kron(X.B, Y.A) + kron(adjoint(X.A), Y.B)
    return LinearObject(X.n * Y.n, A, B)


def conjugate_object(X: LinearObject) -> LinearObject:
    """The conjugate candidate: entrywise conjugate of A, transpose of B.

    Meaningful for valid commutative candidates; involutive on the nose
    for every input.
    """
    return LinearObject(X.n, X.A.conj(), X.B.T)


@dataclass(frozen=True)
class MorphismBasis:
    """Orthonormal basis (Frobenius inner product) of morphisms X -> Y."""

    source: LinearObject
    target: LinearObject
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


def morphism_space(X: LinearObject, Y: LinearObject, tol: float = 1e-9) -> MorphismBasis:
    """Solve the intertwiner equations T A_X = A_Y T, T B_X = B_Y T.

    Both equations are imposed on the generator only; a basis of the
    joint nullspace of the two linearized equations is returned, each
    vector reshaped to an n_Y x n_X matrix.
    """
    nx, ny = X.n, Y.n
    Iy = np.eye(ny, dtype=complex)
    Ix = np.eye(nx, dtype=complex)
    KA = kron(Iy, X.A.T) - kron(Y.A, Ix)
    KB = kron(Iy, X.B.T) - kron(Y.B, Ix)
    M = np.vstack([KA, KB])
    vectors = nullspace_basis(M, tol)
    basis = tuple(unvec(v, ny, nx) for v in vectors)
    return MorphismBasis(X, Y, basis)


def is_irreducible(X: LinearObject, tol: float = 1e-9) -> bool:
    """Whether the self morphism space is spanned by the identity."""
    return morphism_space(X, X, tol).dim == 1


@dataclass(frozen=True)
class Decomposition:
    """Parent object split into summands via orthonormal isometries."""

    parent: LinearObject
    summands: tuple
    seed: int

    def to_json(self) -> dict:
        return {
            "summands": [
                {"object": obj.to_json(), "isometry": matrix_to_json(V)}
                for obj, V in self.summands
            ],
            "seed": self.seed,
        }


def decompose(X: LinearObject, tol: float = 1e-9, seed: int = 0) -> Decomposition:
    """Split a candidate into irreducible summands.

    Strategy: draw a random self adjoint element of the self morphism
    space, split its spectrum into well separated clusters, compress the
    candidate onto each cluster and recurse.  Depth is capped by the
    dimension.  The collected isometries are certified (orthonormal
    columns, complete, intertwining within tol*sqrt(n)); any failure
    raises DecompositionFailure.

    Deterministic for fixed (X, tol, seed); summands come out ordered by
    the eigenvalue clusters of the random words.
    """
    rng = np.random.default_rng(np.random.SeedSequence((seed, X.n)))
    gap_tol = max(1e-7, 100.0 * tol)

    def scalar_defect(H):
        m = H.shape[0]
        return frobenius(H - (np.trace(H) / m) * np.eye(m))

    def rec(obj, depth):
        if depth > X.n:
            raise DecompositionFailure("recursion exceeded the dimension bound")
        mor = morphism_space(obj, obj, tol)
        if mor.dim <= 1:
            return [(obj, np.eye(obj.n, dtype=complex))]
        for _ in range(6):
            coeffs = rng.standard_normal(mor.dim) + 1j * rng.standard_normal(mor.dim)
            R = sum(c * T for c, T in zip(coeffs, mor.basis))
            for H in ((R + adjoint(R)) / 2.0, (R - adjoint(R)) / 2.0j):
                if scalar_defect(H) <= gap_tol:
                    continue
                w, U = hermitian_eig(H)
                scale = max(1.0, float(np.max(np.abs(w))))
                clusters = split_by_gaps(w, gap_tol * scale)
                if len(clusters) <= 1:
                    continue
                out = []
                for cl in clusters:
                    S = U[:, cl]
                    sub = LinearObject(
                        len(cl), adjoint(S) @ obj.A @ S, adjoint(S) @ obj.B @ S
                    )
                    for leaf, V in rec(sub, depth + 1):
                        out.append((leaf, S @ V))
                return out
        raise DecompositionFailure("no splitting word found for a reducible candidate")

    summands = rec(X, 0)

    n = X.n
    check_tol = tol * np.sqrt(n)
    total = np.zeros((n, n), dtype=complex)
    for leaf, V in summands:
        total = total + V @ adjoint(V)
        if frobenius(adjoint(V) @ V - np.eye(leaf.n)) > check_tol:
            raise DecompositionFailure("summand isometry is not orthonormal")
        if frobenius(X.A @ V - V @ leaf.A) > check_tol:
            raise DecompositionFailure("summand does not intertwine the +1 coefficient")
        if frobenius(X.B @ V - V @ leaf.B) > check_tol:
            raise DecompositionFailure("summand does not intertwine the -1 coefficient")
    if frobenius(total - np.eye(n)) > check_tol:
        raise DecompositionFailure("summand isometries do not resolve the identity")
    return Decomposition(X, tuple(summands), seed)


def check_snake(s, t, n: int, tol: float = 1e-9) -> CertificateReport:
    """Certify the conjugation pairing conditions for vectors s, t.

    Folding s and t to n x n matrices S and T by flat row-major index,
    the two composite pairings must both be the identity:
    transpose(conj(T) @ S) and transpose(conj(S) @ T).  The standard
    vectors pass exactly; any rescaling fails, which is the point of the
    normalization.
    """
    s = as_vector(s, path="s")
    t = as_vector(t, path="t")
    if s.size != n * n or t.size != n * n:
        raise DimensionMismatch(f"pairing vectors must have length {n * n}")
    S = unvec(s, n, n)
    T = unvec(t, n, n)
    I = np.eye(n, dtype=complex)
    M1 = (T.conj() @ S).T
    M2 = (S.conj() @ T).T
    checks = (
        CheckResult("pairing[t*,s]-I", frobenius(M1 - I), tol),
        CheckResult("pairing[s*,t]-I", frobenius(M2 - I), tol),
    )
    return CertificateReport(tol, checks)
