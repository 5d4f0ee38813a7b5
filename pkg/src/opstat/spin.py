"""Finite sub-manuals of the spin-one manual.

Outcomes are projections on C^3, operations are frames (maximal sets of
mutually orthogonal projections) and states are density operators acting
through the trace rule. Projections are compared by matrix, never by a
generating vector, so vector phase cannot leak into outcome identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NotInFrame, NotOrthogonal, SpinError, Underdetermined, ZeroVector
from .manual import Manual, validate_manual

__all__ = [
    "Projection",
    "Frame",
    "DensityOperator",
    "DensityFit",
    "hermitian_eigvals",
    "frame_from_basis",
    "coarsen_frame",
    "frame_weights",
    "manual_from_frames",
    "fit_density",
    "random_frame",
    "random_density",
    "random_unitary",
]

IDEMPOTENT_TOL = 1e-10
EQUAL_TOL = 1e-9
POSITIVITY_TOL = 1e-8
RANK_RTOL = 1e-10


def hermitian_eigvals(m, tol: float = 1e-15, max_sweeps: int = 50) -> np.ndarray:
    """Ascending eigenvalues of a 3x3 Hermitian matrix by cyclic complex Jacobi.

    Sweeps stop once the off-diagonal Frobenius mass falls below ``tol`` times
    the matrix norm; converged eigenvalues are good to about 1e-14 relative,
    well inside the 1e-10 budget callers rely on.
    """
    a = np.array(m, dtype=complex)
    if a.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    scale = max(1.0, float(np.sum(np.abs(a) ** 2)))
    for _ in range(max_sweeps):
        off = np.sum(np.abs(a - np.diag(np.diag(a))) ** 2)
        if off <= tol**2 * scale:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            mag = abs(a[p, q])
            if mag == 0.0:
                continue
            phase = a[p, q] / mag
            tau = (a[q, q].real - a[p, p].real) / (2 * mag)
            t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1 + tau * tau))
            c = 1 / np.sqrt(1 + t * t)
            s = t * c
            rot = np.eye(3, dtype=complex)
            rot[p, p] = rot[q, q] = c
            rot[p, q] = s * phase
            rot[q, p] = -s * np.conj(phase)
            a = rot.conj().T @ a @ rot
    return np.sort(np.diag(a).real)


class Projection:
    """Orthogonal projection on C^3. Equality is entrywise within 1e-9."""

    __slots__ = ("matrix", "rank")
    __hash__ = None

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.shape != (3, 3):
            raise SpinError("projection must be 3x3")
        if not np.allclose(m, m.conj().T, rtol=0, atol=IDEMPOTENT_TOL):
            raise SpinError("projection is not Hermitian")
        if not np.allclose(m @ m, m, rtol=0, atol=IDEMPOTENT_TOL):
            raise SpinError("projection is not idempotent")
        rank = int(round(np.trace(m).real))
        if rank not in (1, 2, 3):
            raise SpinError(f"projection rank {rank} not in 1..3")
        m.setflags(write=False)
        self.matrix = m
        self.rank = rank

    @classmethod
    def onto(cls, v) -> "Projection":
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    def __eq__(self, other):
        if not isinstance(other, Projection):
            return NotImplemented
        return bool(np.all(np.abs(self.matrix - other.matrix) <= EQUAL_TOL))

    def __add__(self, other: "Projection") -> "Projection":
        return Projection(self.matrix + other.matrix)

    def __repr__(self):
        return f"Projection(rank={self.rank})"


@dataclass(frozen=True, eq=False)
class Frame:
    projections: tuple[Projection, ...]

    def __post_init__(self):
        ps = self.projections
        if sum(p.rank for p in ps) != 3:
            raise SpinError("frame ranks must sum to 3")
        for i, p in enumerate(ps):
            for q in ps[i + 1 :]:
                if np.max(np.abs(p.matrix @ q.matrix)) > IDEMPOTENT_TOL:
                    raise NotOrthogonal("frame projections are not mutually orthogonal")
        total = sum(p.matrix for p in ps)
        if np.max(np.abs(total - np.eye(3))) > IDEMPOTENT_TOL:
            raise SpinError("frame projections do not resolve the identity")

    def __len__(self):
        return len(self.projections)

    def __iter__(self):
        return iter(self.projections)

    def __getitem__(self, i):
        return self.projections[i]

    def index(self, p: Projection) -> int:
        for i, q in enumerate(self.projections):
            if q == p:
                return i
        raise NotInFrame("projection is not in the frame")

    def transformed(self, u) -> "Frame":
        """The frame U P U† for a unitary U."""
        u = np.asarray(u, dtype=complex)
        return Frame(tuple(Projection(u @ p.matrix @ u.conj().T) for p in self.projections))


class DensityOperator:
    """Trace-one positive semidefinite Hermitian operator on C^3."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.shape != (3, 3):
            raise SpinError("density operator must be 3x3")
        if not np.allclose(m, m.conj().T, rtol=0, atol=IDEMPOTENT_TOL):
            raise SpinError("density operator is not Hermitian")
        if abs(np.trace(m).real - 1) > IDEMPOTENT_TOL:
            raise SpinError("density operator trace is not 1")
        if hermitian_eigvals(m)[0] < -POSITIVITY_TOL:
            raise SpinError("density operator is not positive")
        m.setflags(write=False)
        self.matrix = m

    @classmethod
    def pure(cls, v) -> "DensityOperator":
        return cls(Projection.onto(v).matrix)

    def conjugated(self, u) -> "DensityOperator":
        u = np.asarray(u, dtype=complex)
        return DensityOperator(u @ self.matrix @ u.conj().T)

    def __repr__(self):
        return f"DensityOperator({self.matrix.tolist()!r})"


def frame_from_basis(vectors: Sequence) -> Frame:
    vs = [np.asarray(v, dtype=complex) for v in vectors]
    if len(vs) != 3 or any(v.shape != (3,) for v in vs):
        raise SpinError("need three vectors in C^3")
    normed = []
    for v in vs:
        n = np.linalg.norm(v)
        if not np.isfinite(n) or n < EQUAL_TOL:
            raise ZeroVector("basis vector is zero")
        normed.append(v / n)
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(np.vdot(normed[i], normed[j])) > EQUAL_TOL:
                raise NotOrthogonal(f"vectors {i} and {j} are not orthogonal")
    return Frame(tuple(Projection.onto(v) for v in normed))


def coarsen_frame(frame: Frame, p: Projection, q: Projection) -> Frame:
    """Replace two members of ``frame`` by their sum, keeping the others in place."""
    i, j = frame.index(p), frame.index(q)
    if i == j:
        raise SpinError("cannot merge a projection with itself")
    merged = frame[i] + frame[j]
    out = []
    for k, r in enumerate(frame):
        if k == min(i, j):
            out.append(merged)
        elif k != max(i, j):
            out.append(r)
    return Frame(tuple(out))


def frame_weights(rho: DensityOperator, frame: Frame) -> list[float]:
    out = []
    for p in frame:
        w = float(np.trace(rho.matrix @ p.matrix).real)
        if -IDEMPOTENT_TOL <= w < 0:
            w = 0.0
        elif 1 < w <= 1 + IDEMPOTENT_TOL:
            w = 1.0
        out.append(w)
    return out


def manual_from_frames(frames: Sequence[Frame]) -> tuple[Manual, dict[str, Projection]]:
    """Manual whose outcomes are projections; equal projections share one id."""
    if not frames:
        raise SpinError("need at least one frame")
    table: dict[str, Projection] = {}
    ops = []
    for frame in frames:
        op = []
        for p in frame:
            name = next((k for k, q in table.items() if q == p), None)
            if name is None:
                name = f"P{len(table) + 1}"
                table[name] = p
            op.append(name)
        ops.append(op)
    return validate_manual(ops), table


# Hermitian trace-one matrices as I/3 plus a traceless part:
# rho = diag(1/3 + a, 1/3 + b, 1/3 - a - b) + off-diagonals (x01 + i y01, ...).
_OFF = ((0, 1), (0, 2), (1, 2))


def _basis() -> list[np.ndarray]:
    out = []
    for k in (0, 1):
        m = np.zeros((3, 3), complex)
        m[k, k], m[2, 2] = 1, -1
        out.append(m)
    for i, j in _OFF:
        m = np.zeros((3, 3), complex)
        m[i, j] = m[j, i] = 1
        out.append(m)
        m = np.zeros((3, 3), complex)
        m[i, j], m[j, i] = 1j, -1j
        out.append(m)
    return out


_HERMITIAN_BASIS = _basis()


@dataclass(frozen=True)
class DensityFit:
    matrix: np.ndarray
    residual: float
    min_eigenvalue: float
    not_positive: bool

    def density(self) -> DensityOperator:
        return DensityOperator(self.matrix)


def fit_density(frames: Sequence[Frame], observed: Sequence[Sequence[float]]) -> DensityFit:
    """Least-squares density matrix from per-frame outcome weights.

    Minimizes the summed squared difference between Tr(rho P) and the observed
    weights over the 8 free real parameters of a trace-one Hermitian matrix.
    Positivity is reported, not imposed.
    """
    if len(frames) != len(observed):
        raise SpinError("one weight list per frame required")
    rows, rhs = [], []
    for frame, ws in zip(frames, observed):
        if len(ws) != len(frame):
            raise SpinError("weight list does not match frame size")
        for p, w in zip(frame, ws):
            rows.append([np.trace(g @ p.matrix).real for g in _HERMITIAN_BASIS])
            rhs.append(float(w) - p.rank / 3)
    a = np.array(rows)
    b = np.array(rhs)
    sv = np.linalg.svd(a, compute_uv=False)
    rank = int(np.sum(sv > RANK_RTOL * max(sv.max(), 1.0)))
    if rank < len(_HERMITIAN_BASIS):
        raise Underdetermined(len(_HERMITIAN_BASIS) - rank)
    x = np.linalg.lstsq(a, b, rcond=None)[0]
    m = np.eye(3, dtype=complex) / 3 + sum(c * g for c, g in zip(x, _HERMITIAN_BASIS))
    residual = float(np.sum((a @ x - b) ** 2))
    lo = float(hermitian_eigvals(m)[0])
    return DensityFit(m, residual, lo, lo < -POSITIVITY_TOL)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from QR of a complex Gaussian matrix."""
    z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_frame(rng: np.random.Generator) -> Frame:
    u = random_unitary(rng)
    return frame_from_basis([u[:, k] for k in range(3)])


def random_density(rng: np.random.Generator, rank: int = 3) -> DensityOperator:
    g = rng.standard_normal((3, rank)) + 1j * rng.standard_normal((3, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityOperator(m / np.trace(m).real)
