"""Reconstruction-protocol runs over an ideal authenticated channel.

Variants:

- song-original: the published flow. The first agent prepares a GHZ state and
  distributes one qudit per agent; every agent encodes its Lagrange term as a
  diagonal phase; only the first agent Fourier-inverts and measures, receiving
  no announcements. Its outcome is uniform over Z_d, so the secret is
  recovered with probability exactly 1/d.
- product-counterfactual: the same inversion on a single unentangled qudit,
  where it does return the encoded phase slope with certainty.
- repaired: a diagnostic (non-published) variant in which every agent
  Fourier-inverts, measures, and announces; the announced results sum to the
  secret mod d on every run.

The channel is ideal (no loss, no adversary); transfers exist only as
transcript events. Runs are deterministic given (params, seed); concurrent
runs should use derived_seed(seed, index) so results are order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .modmath import (
    SharePolynomial,
    _check_abscissa,
    _check_modulus,
    gen_shares,
    lagrange_term,
)
from .qudit_sim import QuditRegister, apply_local, make_ghz, measure, phase_gate, qft_inv

SONG_ORIGINAL = "song-original"
PRODUCT_COUNTERFACTUAL = "product-counterfactual"
REPAIRED = "repaired"
VARIANTS = (SONG_ORIGINAL, PRODUCT_COUNTERFACTUAL, REPAIRED)

FOURIER_BASIS = "fourier"

# Fixed default so published transcripts reproduce bit-for-bit.
DEFAULT_SEED = 12345


def derived_seed(seed: int, index: int) -> int:
    """Per-trial seed from (seed, index); stable across run order and platforms."""
    return int(np.random.SeedSequence((seed, index)).generate_state(1)[0])


@dataclass(frozen=True)
class QuditSent:
    sender: int
    recipient: int
    qudit: int

    def describe(self) -> str:
        return f"send: qudit {self.qudit} from agent {self.sender} to agent {self.recipient}"

    def to_dict(self) -> dict:
        return {"type": "qudit_sent", "from": self.sender, "to": self.recipient, "qudit": self.qudit}


@dataclass(frozen=True)
class GateApplied:
    agent: int
    gate: str
    s: int

    def describe(self) -> str:
        return f"gate: agent {self.agent} applies {self.gate} on qudit {self.agent}"

    def to_dict(self) -> dict:
        return {"type": "gate_applied", "agent": self.agent, "gate": self.gate, "s": self.s}


@dataclass(frozen=True)
class Measured:
    agent: int
    basis: str
    outcome: int

    def describe(self) -> str:
        return f"measure: agent {self.agent} measures qudit {self.agent} in {self.basis} basis -> {self.outcome}"

    def to_dict(self) -> dict:
        return {"type": "measured", "agent": self.agent, "basis": self.basis, "outcome": self.outcome}


@dataclass(frozen=True)
class Announced:
    agent: int
    value: int

    def describe(self) -> str:
        return f"announce: agent {self.agent} broadcasts {self.value}"

    def to_dict(self) -> dict:
        return {"type": "announced", "agent": self.agent, "value": self.value}


ProtocolEvent = QuditSent | GateApplied | Measured | Announced


@dataclass(frozen=True)
class Transcript:
    """Ordered event log of one protocol run plus its outcome."""

    variant: str
    d: int
    t: int
    seed: int
    events: tuple[ProtocolEvent, ...]
    final_outcome: int
    expected_secret: int

    def to_lines(self) -> list[str]:
        lines = [f"variant: {self.variant} d={self.d} t={self.t} seed={self.seed}"]
        lines.extend(ev.describe() for ev in self.events)
        lines.append(f"final outcome: {self.final_outcome}")
        lines.append(f"expected secret: {self.expected_secret}")
        return lines

    def to_text(self) -> str:
        return "\n".join(self.to_lines()) + "\n"

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "d": self.d,
            "t": self.t,
            "seed": self.seed,
            "events": [ev.to_dict() for ev in self.events],
            "final_outcome": self.final_outcome,
            "expected_secret": self.expected_secret,
        }


@dataclass(frozen=True)
class ProtocolParams:
    """Run configuration: modulus, threshold, agent count, secret source, seed.

    The secret comes either from a SharePolynomial plus n distinct abscissae
    (the first t agents participate) or directly from the encoded term vector
    (s_1, ..., s_t); exactly one of the two.
    """

    d: int
    t: int
    n: int | None = None
    polynomial: SharePolynomial | None = None
    abscissae: tuple[int, ...] | None = None
    s_vector: tuple[int, ...] | None = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        _check_modulus(self.d)
        if self.t < 1:
            raise ValueError(f"threshold must be >= 1, got {self.t}")
        has_poly = self.polynomial is not None
        if has_poly != (self.abscissae is not None):
            raise ValueError("the polynomial path needs both polynomial and abscissae")
        if has_poly == (self.s_vector is not None):
            raise ValueError("give exactly one of (polynomial, abscissae) or s_vector")
        if has_poly:
            object.__setattr__(self, "abscissae", tuple(self.abscissae))
            if self.polynomial.d != self.d:
                raise ValueError("polynomial modulus does not match d")
            if self.polynomial.threshold != self.t:
                raise ValueError("polynomial degree+1 does not match threshold t")
            seen: set[int] = set()
            for x in self.abscissae:
                _check_abscissa(x, self.d)
                if x in seen:
                    raise ValueError(f"abscissa {x} appears twice")
                seen.add(x)
            if self.n is None:
                object.__setattr__(self, "n", len(self.abscissae))
            if self.n != len(self.abscissae):
                raise ValueError("n does not match the number of abscissae")
        else:
            object.__setattr__(self, "s_vector", tuple(self.s_vector))
            if len(self.s_vector) != self.t:
                raise ValueError("s_vector length must equal the threshold t")
            if any(not 0 <= s < self.d for s in self.s_vector):
                raise ValueError("s_vector entries must be residues in [0, d)")
            if self.n is None:
                object.__setattr__(self, "n", self.t)
        if self.t > self.n:
            raise ValueError(f"threshold t={self.t} exceeds agent count n={self.n}")

    def share_terms(self) -> tuple[int, ...]:
        """The encoded term per participating agent (first t of n)."""
        if self.s_vector is not None:
            return self.s_vector
        shares = gen_shares(self.polynomial, self.abscissae)[: self.t]
        return tuple(lagrange_term(shares, r, self.d).s for r in range(1, self.t + 1))

    @property
    def expected_secret(self) -> int:
        """a_0 on the polynomial path, sum of the direct terms mod d otherwise."""
        if self.polynomial is not None:
            return self.polynomial.secret
        return sum(self.s_vector) % self.d

    def with_seed(self, seed: int) -> "ProtocolParams":
        return replace(self, seed=seed)


def _encode(params: ProtocolParams) -> tuple[QuditRegister, list[ProtocolEvent]]:
    """Prepare, distribute, and phase-encode: the shared part of every variant."""
    terms = params.share_terms()
    reg = make_ghz(params.d, params.t)
    events: list[ProtocolEvent] = [
        QuditSent(sender=1, recipient=r, qudit=r) for r in range(2, params.t + 1)
    ]
    for r, s_r in enumerate(terms, start=1):
        reg = apply_local(reg, r, phase_gate(params.d, s_r))
        events.append(GateApplied(agent=r, gate=f"U(0,{s_r})", s=s_r))
    return reg, events


def post_encoding_state(params: ProtocolParams) -> QuditRegister:
    """The register after all phase encodings, before any measurement."""
    reg, _ = _encode(params)
    return reg


def run_song_original(params: ProtocolParams) -> Transcript:
    """Published flow: only agent 1 Fourier-inverts and measures.

    The final outcome is agent 1's measurement result; it matches the secret
    with probability exactly 1/d once t >= 2 (the register stays entangled).
    """
    reg, events = _encode(params)
    reg = apply_local(reg, 1, qft_inv(params.d))
    outcome, _ = measure(reg, 1, np.random.default_rng(params.seed))
    events.append(Measured(agent=1, basis=FOURIER_BASIS, outcome=outcome))
    return Transcript(
        variant=SONG_ORIGINAL,
        d=params.d,
        t=params.t,
        seed=params.seed,
        events=tuple(events),
        final_outcome=outcome,
        expected_secret=params.expected_secret,
    )


def run_product_counterfactual(s_total: int, d: int, seed: int = DEFAULT_SEED) -> int:
    """Fourier inversion on one unentangled qudit carrying phase slope s_total.

    Builds (1/sqrt d) * sum_k w^(s_total*k) |k>, inverts, measures; returns
    s_total with certainty. This is the only setting where the lone
    measurement recovers the encoded sum.
    """
    if not 0 <= s_total < d:
        raise ValueError(f"phase slope must be in [0, {d}), got {s_total}")
    reg = apply_local(make_ghz(d, 1), 1, phase_gate(d, s_total))
    reg = apply_local(reg, 1, qft_inv(d))
    outcome, _ = measure(reg, 1, np.random.default_rng(seed))
    return outcome


def run_repaired_all_measure(params: ProtocolParams) -> Transcript:
    """Diagnostic variant: every agent Fourier-inverts, measures, announces.

    The final outcome is the announced sum mod d, which equals the expected
    secret on every seed.
    """
    reg, events = _encode(params)
    rng = np.random.default_rng(params.seed)
    results: list[int] = []
    for r in range(1, params.t + 1):
        reg = apply_local(reg, r, qft_inv(params.d))
        m_r, reg = measure(reg, r, rng)
        events.append(Measured(agent=r, basis=FOURIER_BASIS, outcome=m_r))
        events.append(Announced(agent=r, value=m_r))
        results.append(m_r)
    return Transcript(
        variant=REPAIRED,
        d=params.d,
        t=params.t,
        seed=params.seed,
        events=tuple(events),
        final_outcome=sum(results) % params.d,
        expected_secret=params.expected_secret,
    )
