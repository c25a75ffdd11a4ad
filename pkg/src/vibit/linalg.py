"""Small dense complex linear algebra: states, unitaries, projectors.

Everything is complex128.  Objects validate their algebraic invariants at
construction time and are immutable afterwards, so they can be shared freely.
Tolerances are max-absolute-entry norms: ``EPS_MAT`` for matrix identities and
``EPS_NORM`` for vector norms.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimError, InvalidState, NotAProjector, NotUnitary, NumericalError

EPS_MAT = 1e-10
EPS_NORM = 1e-10

#: Accepted by most operations wherever a state or matrix is expected.
AmplitudesLike = "StateVector | np.ndarray | Sequence[complex]"
MatrixLike = "UnitaryMatrix | Projector | np.ndarray | Sequence[Sequence[complex]]"


def as_amplitudes(psi) -> np.ndarray:
    """Coerce a vector-like object to a 1-D complex128 array (no validation)."""
    if isinstance(psi, StateVector):
        return psi.amps
    arr = np.asarray(psi, dtype=complex)
    if arr.ndim != 1:
        raise DimError(f"expected a vector, got shape {arr.shape}")
    return arr


def as_matrix(m) -> np.ndarray:
    """Coerce a matrix-like object to a square 2-D complex128 array."""
    if isinstance(m, (UnitaryMatrix, Projector)):
        return m.entries
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def max_abs_diff(a, b) -> float:
    """Maximum absolute entrywise difference between two arrays."""
    aa, bb = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if aa.shape != bb.shape:
        raise DimError(f"shape mismatch {aa.shape} vs {bb.shape}")
    return float(np.max(np.abs(aa - bb))) if aa.size else 0.0


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


class StateVector:
    """Unit-norm complex amplitude vector."""

    __slots__ = ("amps",)

    def __init__(self, amps):
        arr = as_amplitudes(amps)
        if arr.size == 0:
            raise InvalidState("empty amplitude vector")
        if not np.all(np.isfinite(arr.view(float))):
            raise InvalidState("non-finite amplitude")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > EPS_NORM:
            raise InvalidState(f"norm {norm!r} is not 1 within {EPS_NORM}")
        self.amps = _frozen(arr)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amps, dtype=dtype)

    def __repr__(self):
        return f"StateVector({np.array2string(self.amps, precision=6)})"


class UnitaryMatrix:
    """Square complex matrix with U†U = I within ``EPS_MAT``."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = as_matrix(entries)
        if not np.all(np.isfinite(arr.view(float))):
            raise NotUnitary("non-finite entry")
        resid = max_abs_diff(arr.conj().T @ arr, np.eye(arr.shape[0]))
        if resid > EPS_MAT:
            raise NotUnitary(f"U†U deviates from I by {resid:.3e}")
        self.entries = _frozen(arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __matmul__(self, other):
        return self.entries @ np.asarray(other, dtype=complex)

    def __repr__(self):
        return f"UnitaryMatrix(dim={self.dim})"


class Projector:
    """Hermitian idempotent matrix; ``rank`` is recovered from the trace."""

    __slots__ = ("entries", "rank")

    def __init__(self, entries):
        arr = as_matrix(entries)
        if not np.all(np.isfinite(arr.view(float))):
            raise NotAProjector("non-finite entry")
        herm = max_abs_diff(arr, arr.conj().T)
        idem = max_abs_diff(arr @ arr, arr)
        if herm > EPS_MAT:
            raise NotAProjector(f"not Hermitian (residual {herm:.3e})")
        if idem > EPS_MAT:
            raise NotAProjector(f"not idempotent (residual {idem:.3e})")
        tr = float(np.trace(arr).real)
        rank = round(tr)
        if abs(tr - rank) > EPS_MAT * arr.shape[0]:
            raise NotAProjector(f"trace {tr!r} is not an integer rank")
        self.entries = _frozen(arr)
        self.rank = rank

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self):
        return f"Projector(dim={self.dim}, rank={self.rank})"


def projector_from_state(psi) -> Projector:
    """Rank-1 projector onto span(psi); accepts unnormalized nonzero input."""
    arr = as_amplitudes(psi)
    nrm2 = float(np.vdot(arr, arr).real)
    if nrm2 <= 0.0 or not np.isfinite(nrm2):
        raise InvalidState("cannot project onto the zero vector")
    return Projector(np.outer(arr, arr.conj()) / nrm2)


def born_probability(prep: Projector, meas: Projector) -> float:
    """Tr(prep · meas); equals |<phi|psi>|^2 for rank-1 arguments."""
    p, m = as_matrix(prep), as_matrix(meas)
    if p.shape != m.shape:
        raise DimError(f"projector dims differ: {p.shape[0]} vs {m.shape[0]}")
    return float(np.trace(p @ m).real)


def compose(a, b) -> UnitaryMatrix:
    """Matrix product a·b (so ``a`` acts after ``b``)."""
    aa, bb = as_matrix(a), as_matrix(b)
    if aa.shape != bb.shape:
        raise DimError(f"dims differ: {aa.shape[0]} vs {bb.shape[0]}")
    return UnitaryMatrix(aa @ bb)


def adjoint(a) -> UnitaryMatrix:
    """Conjugate transpose."""
    return UnitaryMatrix(as_matrix(a).conj().T)


def verify_conjugation(v, a, b, tol: float = EPS_MAT) -> bool:
    """True iff V†AV = B entrywise within ``tol`` (V validated as unitary)."""
    vm = UnitaryMatrix(as_matrix(v)).entries
    am, bm = as_matrix(a), as_matrix(b)
    if not (vm.shape == am.shape == bm.shape):
        raise DimError("conjugation operands must share one dimension")
    return max_abs_diff(vm.conj().T @ am @ vm, bm) < tol


def is_orthonormal_context(vectors: Iterable) -> bool:
    """True iff the family is exactly n unit vectors in C^n, pairwise orthogonal."""
    arrs = [as_amplitudes(v) for v in vectors]
    if not arrs:
        return False
    n = arrs[0].shape[0]
    if any(a.shape[0] != n for a in arrs) or len(arrs) != n:
        return False
    g = np.array([[np.vdot(u, w) for w in arrs] for u in arrs])
    return max_abs_diff(g, np.eye(n)) < EPS_MAT


def equal_up_to_phase(u, w, tol: float = EPS_MAT) -> bool:
    """State equality modulo a global unit-modulus factor.

    The comparison phase is read off the largest-magnitude component of ``u``,
    which keeps the check stable when small components carry noise.
    """
    ua, wa = as_amplitudes(u), as_amplitudes(w)
    if ua.shape != wa.shape:
        raise DimError("dimension mismatch")
    k = int(np.argmax(np.abs(ua)))
    if abs(ua[k]) < tol:
        return bool(max_abs_diff(ua, wa) < tol)
    if abs(wa[k]) < tol:
        return False
    phase = (wa[k] / ua[k]) / abs(wa[k] / ua[k])
    return max_abs_diff(ua * phase, wa) < tol


# --- eigenvalues -----------------------------------------------------------

_TINY = 1e-13


def _depressed_roots_real(p: float, q: float) -> np.ndarray:
    """Roots of t^3 + p t + q with real coefficients."""
    if abs(p) < _TINY and abs(q) < _TINY:
        return np.zeros(3, dtype=complex)
    disc = -4.0 * p ** 3 - 27.0 * q ** 2
    if p < 0.0 and disc > -_TINY:
        # three real roots (possibly repeated): trigonometric form, with the
        # acos argument clamped so exact double roots stay exact
        m = 2.0 * np.sqrt(-p / 3.0)
        arg = np.clip(3.0 * q / (p * m), -1.0, 1.0)
        theta = np.arccos(arg) / 3.0
        ks = np.arange(3)
        return (m * np.cos(theta - 2.0 * np.pi * ks / 3.0)).astype(complex)
    # one real root, one conjugate pair
    sq = np.sqrt(q * q / 4.0 + p ** 3 / 27.0)
    w = -q / 2.0 - sq if abs(-q / 2.0 - sq) > abs(-q / 2.0 + sq) else -q / 2.0 + sq
    u = np.cbrt(w)
    v = -p / (3.0 * u) if abs(u) > _TINY else 0.0
    t1 = u + v
    # remaining quadratic: t^2 + t1 t + (t1^2 + p)
    pair_disc = complex(t1 * t1 - 4.0 * (t1 * t1 + p))
    root = np.sqrt(pair_disc)
    return np.array([t1, (-t1 + root) / 2.0, (-t1 - root) / 2.0], dtype=complex)


def _depressed_roots_complex(p: complex, q: complex) -> np.ndarray:
    """Roots of t^3 + p t + q with complex coefficients (Cardano)."""
    if abs(p) < _TINY and abs(q) < _TINY:
        return np.zeros(3, dtype=complex)
    sq = np.sqrt(q * q / 4.0 + p ** 3 / 27.0 + 0j)
    w = -q / 2.0 - sq if abs(-q / 2.0 - sq) > abs(-q / 2.0 + sq) else -q / 2.0 + sq
    u = w ** (1.0 / 3.0)
    v = -p / (3.0 * u) if abs(u) > _TINY else 0.0
    omega = np.exp(2j * np.pi / 3.0)
    return np.array(
        [u + v, u * omega + v / omega, u / omega + v * omega], dtype=complex
    )


def _cubic_eigenvalues(m: np.ndarray) -> np.ndarray:
    c2 = m[0, 0] + m[1, 1] + m[2, 2]
    c1 = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    c0 = (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )
    # characteristic polynomial x^3 + a x^2 + b x + c, depressed at x = t - a/3
    a, b, c = -c2, c1, -c0
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
    if abs(p.imag) < _TINY and abs(q.imag) < _TINY:
        roots = _depressed_roots_real(p.real, q.real)
    else:
        roots = _depressed_roots_complex(p, q)
    lam = roots + c2 / 3.0

    # one Newton polish per root, skipped near repeated roots where the
    # derivative is ill-conditioned
    def f(x):
        return ((x + a) * x + b) * x + c

    def fp(x):
        return (3.0 * x + 2.0 * a) * x + b

    for i in range(3):
        d = fp(lam[i])
        if abs(d) > 1e-6:
            lam[i] = lam[i] - f(lam[i]) / d
    return lam


def eigenvalues(a) -> np.ndarray:
    """Eigenvalue multiset of a unitary matrix, sorted by (real, imag).

    Dimension 3 is solved in closed form from the characteristic cubic
    (trigonometric branch for real coefficients, Cardano otherwise), which
    keeps exact double eigenvalues exact.  Larger dimensions use LAPACK.
    """
    m = as_matrix(a)
    if m.shape[0] == 3:
        lam = _cubic_eigenvalues(m)
    else:
        try:
            lam = np.linalg.eigvals(m)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc
    if not np.all(np.isfinite(lam.view(float))):
        raise NumericalError("non-finite eigenvalue")
    return np.sort_complex(lam)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary: QR of a complex Gaussian matrix, phases fixed."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q @ np.diag(d / np.abs(d))
