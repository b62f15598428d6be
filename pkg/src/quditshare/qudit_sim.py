"""Dense state-vector engine for registers of t qudits of equal dimension d.

Basis convention: the flat index I encodes digits (k_1, ..., k_t) with qudit 1
as the MOST significant digit, I = k_1*d^(t-1) + ... + k_t. All reduced
statistics (marginal, measure, joint_distribution) follow this convention.

Registers and gates are immutable; every operation returns a fresh value, so
they are safe to share across threads. Phase exponents are reduced mod d
before exponentiation, keeping equal roots of unity bitwise-comparable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

DEFAULT_SIZE_CAP = 1 << 22  # amplitudes
SIZE_CAP_ENV = "QUDITSHARE_SIZE_CAP"

NORM_TOL = 1e-10
PRUNE_TOL = 1e-12


class SizeCapExceeded(ValueError):
    """Requested register would exceed the configured amplitude cap."""


class DimensionMismatch(ValueError):
    """Gate dimension does not match the register's local dimension."""


class IndexOutOfRange(IndexError):
    """Qudit index outside [1, t]."""


class ZeroNormProjection(ArithmeticError):
    """Projection onto a branch of probability below PRUNE_TOL."""


def size_cap() -> int:
    """Current amplitude-count cap; override with the QUDITSHARE_SIZE_CAP env var."""
    return int(os.environ.get(SIZE_CAP_ENV, DEFAULT_SIZE_CAP))


def _check_size(d: int, t: int) -> None:
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    if t < 1:
        raise ValueError(f"qudit count must be >= 1, got {t}")
    cap = size_cap()
    if d**t > cap:
        raise SizeCapExceeded(f"{d}^{t} amplitudes exceed the cap of {cap}")


def _check_qudit_index(q: int, t: int) -> None:
    if not 1 <= q <= t:
        raise IndexOutOfRange(f"qudit index must be in [1, {t}], got {q}")


def basis_digits(index: int, d: int, t: int) -> tuple[int, ...]:
    """Digits (k_1, ..., k_t) of a flat basis index, qudit 1 first."""
    digs = []
    for _ in range(t):
        index, k = divmod(index, d)
        digs.append(k)
    return tuple(reversed(digs))


def basis_label(digits: tuple[int, ...], d: int) -> str:
    """Render digits as a compact label: '012' for d <= 10, dot-separated above."""
    if d <= 10:
        return "".join(str(k) for k in digits)
    return ".".join(str(k) for k in digits)


@dataclass(frozen=True, eq=False)
class QuditRegister:
    """Normalized pure state of t qudits; amps has length d**t and unit norm."""

    d: int
    t: int
    amps: np.ndarray

    def __post_init__(self):
        if self.d < 2 or self.t < 1:
            raise ValueError("need d >= 2 and t >= 1")
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != self.d**self.t:
            raise ValueError(f"expected {self.d ** self.t} amplitudes, got {amps.size}")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"register is not normalized: |amps|^2 = {norm_sq}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    def isclose(self, other: "QuditRegister", tol: float = NORM_TOL) -> bool:
        """Entrywise amplitude comparison (no global-phase slack)."""
        return (
            self.d == other.d
            and self.t == other.t
            and bool(np.max(np.abs(self.amps - other.amps)) <= tol)
        )


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """A d x d unitary acting on a single qudit."""

    d: int
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=np.complex128)
        if m.shape != (self.d, self.d):
            raise ValueError(f"expected a {self.d}x{self.d} matrix, got {m.shape}")
        defect = np.max(np.abs(m @ m.conj().T - np.eye(self.d)))
        if defect > NORM_TOL:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)


@dataclass(frozen=True, eq=False)
class MarginalDistribution:
    """Born-rule outcome probabilities of one qudit."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if np.any(probs < -NORM_TOL) or np.any(probs > 1.0 + NORM_TOL):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(float(probs.sum()) - 1.0) > NORM_TOL:
            raise ValueError("probabilities must sum to 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)


@dataclass(frozen=True)
class JointDistribution:
    """Full-register outcome distribution; tuples below PRUNE_TOL are omitted."""

    entries: dict[tuple[int, ...], float]

    def __post_init__(self):
        total = sum(self.entries.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"retained probabilities sum to {total}, not 1")


def make_ghz(d: int, t: int) -> QuditRegister:
    """Maximally entangled state (1/sqrt d) * sum_k |k k ... k> on t qudits."""
    _check_size(d, t)
    amps = np.zeros(d**t, dtype=np.complex128)
    stride = (d**t - 1) // (d - 1)  # index of |k...k> is k * (1 + d + ... + d^(t-1))
    amps[np.arange(d) * stride] = 1.0 / np.sqrt(d)
    return QuditRegister(d, t, amps)


def phase_gate(d: int, s: int) -> LocalUnitary:
    """Diagonal gate |k> -> w^(s*k) |k| with w = exp(2*pi*i/d)."""
    if not 0 <= s < d:
        raise ValueError(f"phase exponent must be in [0, {d}), got {s}")
    k = np.arange(d)
    return LocalUnitary(d, np.diag(np.exp(2j * np.pi * (s * k % d) / d)))


def qft_inv(d: int) -> LocalUnitary:
    """Inverse Fourier transform; entry (j, k) is w^(-j*k) / sqrt(d).

    With this sign convention the state (1/sqrt d) * sum_k w^(S*k) |k> of a
    single qudit maps exactly to |S mod d>.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    jk = np.outer(np.arange(d), np.arange(d)) % d
    return LocalUnitary(d, np.exp(-2j * np.pi * jk / d) / np.sqrt(d))


def qft(d: int) -> LocalUnitary:
    """Forward Fourier transform, the conjugate transpose of qft_inv."""
    return LocalUnitary(d, qft_inv(d).m.conj().T)


def apply_local(reg: QuditRegister, q: int, u: LocalUnitary) -> QuditRegister:
    """Apply u to qudit q (1-based), identity on the rest."""
    if u.d != reg.d:
        raise DimensionMismatch(f"gate dimension {u.d} != register dimension {reg.d}")
    _check_qudit_index(q, reg.t)
    psi = reg.amps.reshape((reg.d,) * reg.t)
    out = np.tensordot(u.m, psi, axes=([1], [q - 1]))  # contracted axis lands in front
    out = np.moveaxis(out, 0, q - 1)
    return QuditRegister(reg.d, reg.t, out.reshape(-1))


def marginal(reg: QuditRegister, q: int) -> MarginalDistribution:
    """Outcome distribution of measuring qudit q alone."""
    _check_qudit_index(q, reg.t)
    probs = np.abs(reg.amps.reshape((reg.d,) * reg.t)) ** 2
    others = tuple(i for i in range(reg.t) if i != q - 1)
    if others:
        probs = probs.sum(axis=others)
    return MarginalDistribution(probs)


def measure(
    reg: QuditRegister, q: int, rng: np.random.Generator
) -> tuple[int, QuditRegister]:
    """Projective measurement of qudit q in the computational basis.

    Samples the outcome from marginal(reg, q) using rng, so identical seeds
    reproduce identical outcome sequences. Returns the outcome and the
    renormalized post-measurement register.
    """
    probs = marginal(reg, q).probs
    v = int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
    v = min(v, reg.d - 1)
    if probs[v] < PRUNE_TOL:
        raise ZeroNormProjection(
            f"branch {v} of qudit {q} has probability below {PRUNE_TOL}"
        )
    psi = reg.amps.reshape((reg.d,) * reg.t)
    sel: list[object] = [slice(None)] * reg.t
    sel[q - 1] = v
    proj = np.zeros_like(psi)
    proj[tuple(sel)] = psi[tuple(sel)]
    post = QuditRegister(reg.d, reg.t, proj.reshape(-1) / np.sqrt(probs[v]))
    return v, post


def joint_distribution(reg: QuditRegister) -> JointDistribution:
    """All outcome tuples with probability above PRUNE_TOL, in basis order."""
    if reg.amps.size > size_cap():
        raise SizeCapExceeded(f"{reg.amps.size} amplitudes exceed the cap of {size_cap()}")
    probs = np.abs(reg.amps) ** 2
    entries = {
        basis_digits(int(i), reg.d, reg.t): float(probs[i])
        for i in np.nonzero(probs > PRUNE_TOL)[0]
    }
    return JointDistribution(entries)
