"""Linear coactions of the circle algebra on finite dimensional spaces.

A coaction candidate on an n dimensional space is a pair of n x n
matrices (A, B): the generator of the circle algebra is sent to
deg(+1) x A + deg(-1) x B, where deg(k) denotes the k-th power of the
generator.  A candidate is an actual coaction exactly when six matrix
equations hold; ``check_homomorphism`` certifies them.

A conjugate pair adds a second candidate (C, D) on the same space
together with two pairing vectors s, t of length n^2.  Compatibility of
the two candidates can be certified along two independent routes:

* ``check_conjugate_matrix`` evaluates fourteen matrix equations
  directly (eight duality equations plus the six equations making
  (C, D) a coaction candidate in its own right);
* ``check_conjugate_raw`` expands both composite coactions degree by
  degree on the n^2 dimensional pairing space and applies them to s and
  t, without ever forming the matrix equations.

For the standard pairing vectors the two routes agree exactly; keeping
both guards against errors in either derivation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DimensionMismatch,
    SchemaError,
    adjoint,
    as_matrix,
    as_vector,
    frobenius,
    kron,
    matrix_from_json,
    matrix_to_json,
    vector_from_json,
    vector_to_json,
)

#: Hard cap on the degree support of Laurent expressions, to catch
#: runaway symbolic computations early.
SUPPORT_BOUND = 64


def kac_vector(n: int) -> np.ndarray:
    """The standard pairing vector: 1 at the flat indices i*n+i, else 0."""
    v = np.zeros(n * n, dtype=complex)
    for i in range(n):
        v[i * n + i] = 1.0
    return v


@dataclass(frozen=True, eq=False)
class LinearObject:
    """A coaction candidate (A, B) on an n dimensional space."""

    n: int
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, path="A")
        B = as_matrix(self.B, path="B")
        if A.shape != (self.n, self.n) or B.shape != (self.n, self.n):
            raise DimensionMismatch(
                f"expected two {self.n}x{self.n} matrices, got {A.shape} and {B.shape}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    def to_json(self) -> dict:
        return {"n": self.n, "A": matrix_to_json(self.A), "B": matrix_to_json(self.B)}

    @classmethod
    def from_json(cls, obj, *, path: str = "object") -> "LinearObject":
        if not isinstance(obj, dict):
            raise SchemaError(f"{path}: expected an object")
        for key in ("n", "A", "B"):
            if key not in obj:
                raise SchemaError(f"{path}.{key}: missing")
        n = obj["n"]
        if not isinstance(n, int) or n < 1:
            raise SchemaError(f"{path}.n: expected a positive integer")
        A = matrix_from_json(obj["A"], path=f"{path}.A")
        B = matrix_from_json(obj["B"], path=f"{path}.B")
        try:
            return cls(n, A, B)
        except DimensionMismatch as exc:
            raise SchemaError(f"{path}: {exc}") from exc


def rotation(phase: complex) -> LinearObject:
    """One dimensional object sending the generator to deg(+1) x phase."""
    return LinearObject(1, np.array([[phase]], dtype=complex), np.zeros((1, 1), complex))


def reflection(phase: complex) -> LinearObject:
    """One dimensional object sending the generator to deg(-1) x phase."""
    return LinearObject(1, np.zeros((1, 1), complex), np.array([[phase]], dtype=complex))


@dataclass(frozen=True, eq=False)
class ConjugatePair:
    """A candidate (A, B) with a candidate dual (C, D) and pairing vectors."""

    object: LinearObject
    C: np.ndarray
    D: np.ndarray
    s: np.ndarray = None
    t: np.ndarray = None

    def __post_init__(self):
        n = self.object.n
        C = as_matrix(self.C, path="C")
        D = as_matrix(self.D, path="D")
        if C.shape != (n, n) or D.shape != (n, n):
            raise DimensionMismatch(
                f"expected two {n}x{n} matrices, got {C.shape} and {D.shape}"
            )
        s = kac_vector(n) if self.s is None else as_vector(self.s, path="s")
        t = kac_vector(n) if self.t is None else as_vector(self.t, path="t")
        if s.size != n * n:
            raise DimensionMismatch(f"s: expected length {n * n}, got {s.size}")
        if t.size != n * n:
            raise DimensionMismatch(f"t: expected length {n * n}, got {t.size}")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    @property
    def dual_object(self) -> LinearObject:
        """The candidate (C, D) viewed as a coaction candidate itself."""
        return LinearObject(self.object.n, self.C, self.D)

    def to_json(self) -> dict:
        out = self.object.to_json()
        out["C"] = matrix_to_json(self.C)
        out["D"] = matrix_to_json(self.D)
        out["s"] = vector_to_json(self.s)
        out["t"] = vector_to_json(self.t)
        return out

    @classmethod
    def from_json(cls, obj, *, path: str = "pair") -> "ConjugatePair":
        base = LinearObject.from_json(obj, path=path)
        for key in ("C", "D"):
            if key not in obj:
                raise SchemaError(f"{path}.{key}: missing")
        C = matrix_from_json(obj["C"], path=f"{path}.C")
        D = matrix_from_json(obj["D"], path=f"{path}.D")
        s = vector_from_json(obj["s"], path=f"{path}.s") if "s" in obj else None
        t = vector_from_json(obj["t"], path=f"{path}.t") if "t" in obj else None
        try:
            return cls(base, C, D, s, t)
        except DimensionMismatch as exc:
            raise SchemaError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class CheckResult:
    """A single named residual with its threshold."""

    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "residual": float(self.residual),
            "threshold": float(self.threshold),
            "pass": self.passed,
        }


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of a batch of residual checks at a common base tolerance."""

    tolerance: float
    checks: tuple = field(default_factory=tuple)

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def residual(self, name: str) -> float:
        for c in self.checks:
            if c.name == name:
                return c.residual
        raise KeyError(name)

    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def to_json(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "checks": [c.to_json() for c in self.checks],
            "overall_pass": self.overall_pass,
        }

    @classmethod
    def from_json(cls, obj, *, path: str = "report") -> "CertificateReport":
        if not isinstance(obj, dict):
            raise SchemaError(f"{path}: expected an object")
        for key in ("tolerance", "checks"):
            if key not in obj:
                raise SchemaError(f"{path}.{key}: missing")
        checks = []
        if not isinstance(obj["checks"], list):
            raise SchemaError(f"{path}.checks: expected a list")
        for i, c in enumerate(obj["checks"]):
            if not isinstance(c, dict) or not {"name", "residual", "threshold"} <= set(c):
                raise SchemaError(f"{path}.checks[{i}]: malformed check record")
            checks.append(CheckResult(c["name"], float(c["residual"]), float(c["threshold"])))
        return cls(float(obj["tolerance"]), tuple(checks))


def _merge_reports(tolerance: float, *reports: CertificateReport) -> CertificateReport:
    checks = []
    for r in reports:
        checks.extend(r.checks)
    return CertificateReport(tolerance, tuple(checks))


class LaurentMatrixPoly:
    """Finite matrix valued Laurent expression over the circle generator.

    Stored as a mapping degree -> n x n coefficient matrix with
    normalized support: exactly zero coefficients are dropped.  Degrees
    are capped at +-SUPPORT_BOUND.
    """

    def __init__(self, n: int, coeffs=None):
        self.n = int(n)
        clean = {}
        for k, M in (coeffs or {}).items():
            k = int(k)
            if abs(k) > SUPPORT_BOUND:
                raise ValueError(f"degree {k} exceeds the support bound {SUPPORT_BOUND}")
            M = as_matrix(M, path=f"coefficient[{k}]")
            if M.shape != (self.n, self.n):
                raise DimensionMismatch(
                    f"coefficient[{k}]: expected {self.n}x{self.n}, got {M.shape}"
                )
            if frobenius(M) != 0.0:
                clean[k] = M
        self.coeffs = clean

    @classmethod
    def zero(cls, n: int) -> "LaurentMatrixPoly":
        return cls(n, {})

    @classmethod
    def one(cls, n: int) -> "LaurentMatrixPoly":
        return cls(n, {0: np.eye(n, dtype=complex)})

    def coeff(self, k: int) -> np.ndarray:
        return self.coeffs.get(k, np.zeros((self.n, self.n), dtype=complex))

    def degrees(self) -> list[int]:
        return sorted(self.coeffs)

    def __add__(self, other: "LaurentMatrixPoly") -> "LaurentMatrixPoly":
        if self.n != other.n:
            raise DimensionMismatch("cannot add expressions of different fiber size")
        out = dict(self.coeffs)
        for k, M in other.coeffs.items():
            out[k] = out.get(k, 0) + M
        return LaurentMatrixPoly(self.n, out)

    def __mul__(self, other):
        if np.isscalar(other):
            return LaurentMatrixPoly(self.n, {k: other * M for k, M in self.coeffs.items()})
        if self.n != other.n:
            raise DimensionMismatch("cannot multiply expressions of different fiber size")
        out: dict = {}
        for j, M in self.coeffs.items():
            for k, N in other.coeffs.items():
                out[j + k] = out.get(j + k, 0) + M @ N
        return LaurentMatrixPoly(self.n, out)

    def __rmul__(self, scalar):
        return self.__mul__(scalar)

    def __pow__(self, k: int) -> "LaurentMatrixPoly":
        if k < 0:
            raise ValueError("negative powers are expressed via the adjoint")
        out = LaurentMatrixPoly.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def adjoint(self) -> "LaurentMatrixPoly":
        """Star operation: degree k -> -k, coefficient -> its adjoint."""
        return LaurentMatrixPoly(self.n, {-k: adjoint(M) for k, M in self.coeffs.items()})

    def distance(self, other: "LaurentMatrixPoly") -> float:
        """Max over degrees of the Frobenius distance of coefficients."""
        degs = set(self.coeffs) | set(other.coeffs)
        return max((frobenius(self.coeff(k) - other.coeff(k)) for k in degs), default=0.0)


def generator_image(obj: LinearObject) -> LaurentMatrixPoly:
    """Image of the circle generator: deg(+1) x A + deg(-1) x B."""
    return LaurentMatrixPoly(obj.n, {1: obj.A, -1: obj.B})


def apply_coaction(obj: LinearObject, p) -> LaurentMatrixPoly:
    """Image of a scalar Laurent polynomial under the coaction candidate.

    ``p`` maps degree -> complex coefficient.  Positive powers of the
    generator go through powers of the generator image, negative powers
    through powers of its adjoint, so the result of a valid candidate is
    automatically star compatible.
    """
    img = generator_image(obj)
    img_bar = img.adjoint()
    out = LaurentMatrixPoly.zero(obj.n)
    for k, coef in p.items():
        k = int(k)
        if coef == 0:
            continue
        base = img ** k if k >= 0 else img_bar ** (-k)
        out = out + coef * base
    return out


def compose_image(outer: LinearObject, inner: LaurentMatrixPoly) -> LaurentMatrixPoly:
    """Apply the outer coaction to the circle leg of a matrix expression.

    For inner = sum_k deg(k) x M_k the result is
    sum_k apply_coaction(outer, deg(k)) kron M_k, an expression over the
    product space (outer fiber on the left Kronecker slot).
    """
    out: dict = {}
    for k, M in inner.coeffs.items():
        outer_poly = apply_coaction(outer, {k: 1.0})
        for d, G in outer_poly.coeffs.items():
            out[d] = out.get(d, 0) + kron(G, M)
    return LaurentMatrixPoly(outer.n * inner.n, out)


def check_homomorphism(obj: LinearObject, tol: float = 1e-9) -> CertificateReport:
    """Certify the six equations making (A, B) a coaction.

    The equations say that A + B is unitary and that A and B are
    supported on complementary ranges: A A* + B B* = I, A B* = 0,
    B A* = 0, A* A + B* B = I, B* A = 0, A* B = 0.
    """
    A, B = obj.A, obj.B
    I = np.eye(obj.n, dtype=complex)
    checks = (
        CheckResult("AA*+BB*-I", frobenius(A @ adjoint(A) + B @ adjoint(B) - I), tol),
        CheckResult("AB*", frobenius(A @ adjoint(B)), tol),
        CheckResult("BA*", frobenius(B @ adjoint(A)), tol),
        CheckResult("A*A+B*B-I", frobenius(adjoint(A) @ A + adjoint(B) @ B - I), tol),
        CheckResult("B*A", frobenius(adjoint(B) @ A), tol),
        CheckResult("A*B", frobenius(adjoint(A) @ B), tol),
    )
    return CertificateReport(tol, checks)


def check_conjugate_matrix(pair: ConjugatePair, tol: float = 1e-9) -> CertificateReport:
    """Certify duality of (A, B) and (C, D) at the matrix level.

    Fourteen residuals: eight duality equations coupling the two
    candidates, plus the six homomorphism equations for (C, D).  The
    homomorphism equations for (A, B) are the business of
    ``check_homomorphism`` and are not repeated here.
    """
    A, B, C, D = pair.object.A, pair.object.B, pair.C, pair.D
    I = np.eye(pair.object.n, dtype=complex)
    duality = (
        CheckResult("CAt+D*Bt-I", frobenius(C @ A.T + adjoint(D) @ B.T - I), tol),
        CheckResult("DAt+C*Bt", frobenius(D @ A.T + adjoint(C) @ B.T), tol),
        CheckResult("C*Abar+DBbar-I", frobenius(adjoint(C) @ A.conj() + D @ B.conj() - I), tol),
        CheckResult("D*Abar+CBbar", frobenius(adjoint(D) @ A.conj() + C @ B.conj()), tol),
        CheckResult("ACt+B*Dt-I", frobenius(A @ C.T + adjoint(B) @ D.T - I), tol),
        CheckResult("BCt+A*Dt", frobenius(B @ C.T + adjoint(A) @ D.T), tol),
        CheckResult("A*Cbar+BDbar-I", frobenius(adjoint(A) @ C.conj() + B @ D.conj() - I), tol),
        CheckResult("B*Cbar+ADbar", frobenius(adjoint(B) @ C.conj() + A @ D.conj()), tol),
    )
    dual_hom = tuple(
        CheckResult(c.name.replace("A", "C").replace("B", "D"), c.residual, c.threshold)
        for c in check_homomorphism(pair.dual_object, tol).checks
    )
    return CertificateReport(tol, duality + dual_hom)


def check_conjugate_raw(pair: ConjugatePair, tol: float = 1e-9) -> CertificateReport:
    """Certify duality by expanding composites on the pairing space.

    Both composite coactions are expanded degree by degree over the n^2
    dimensional product space and applied to the pairing vectors: the
    dual-after-primal composite must fix s on the generator (degree +1
    slot) and on its adjoint (degree -1 slot) while every other degree
    annihilates s, and symmetrically for the primal-after-dual composite
    on t.  Eight residuals; no matrix equation is formed anywhere.
    """
    obj = pair.object
    n = obj.n
    s, t = pair.s, pair.t
    if s.size != n * n or t.size != n * n:
        raise DimensionMismatch(f"pairing vectors must have length {n * n}")
    dual = pair.dual_object

    checks = []

    def expand(outer, inner_obj):
        gen = generator_image(inner_obj)
        return compose_image(outer, gen), compose_image(outer, gen.adjoint())

    # Dual composite applied to s, then primal composite applied to t.
    for label, outer, inner, vecv in (("s", dual, obj, s), ("t", obj, dual, t)):
        on_gen, on_adj = expand(outer, inner)
        for gen_label, poly, fix_deg in ((f"gen,{label}", on_gen, +1), (f"gen*,{label}", on_adj, -1)):
            for d in sorted(set(poly.degrees()) | {+1, -1}):
                w = poly.coeff(d) @ vecv
                target = vecv if d == fix_deg else 0.0
                checks.append(
                    CheckResult(
                        f"raw[{gen_label},deg{d:+d}]",
                        float(np.linalg.norm(w - target)),
                        tol,
                    )
                )
    return CertificateReport(tol, tuple(checks))
