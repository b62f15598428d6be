"""Reference-example reproduction and exact/sampled success statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .protocol import (
    DEFAULT_SEED,
    REPAIRED,
    SONG_ORIGINAL,
    ProtocolParams,
    derived_seed,
    post_encoding_state,
    run_repaired_all_measure,
    run_song_original,
)
from .qudit_sim import (
    PRUNE_TOL,
    MarginalDistribution,
    QuditRegister,
    SizeCapExceeded,
    apply_local,
    basis_digits,
    basis_label,
    joint_distribution,
    marginal,
    qft_inv,
    size_cap,
)

# Built-in reference example: d=4, t=3, secret 3, w = exp(2*pi*i/4) = i.
# Encoded register: (1/2) * sum_k w^(3k) |kkk>, branch phases w^(3k) below.
REF_D = 4
REF_T = 3
REF_SECRET = 3
REF_TOL = 1e-12
_REF_BRANCH_PHASES = (1, -1j, -1, 1j)
# After the inverse Fourier transform on qudit 1, branch k carries amplitude
# w^(3k) * w^(-jk) / 4 on |j, k, k>; column k lists j = 0..3.
_REF_TRANSFORMED_COLUMNS = (
    (1, 1, 1, 1),
    (-1j, -1, 1j, 1),
    (-1, 1, -1, 1),
    (1j, -1, -1j, 1),
)


class ReproductionError(AssertionError):
    """A computed state disagrees with its pinned closed form."""


@dataclass(frozen=True)
class AmplitudeTable:
    """Nonzero amplitudes of a register, ordered by basis index.

    Rows are (label, re, im) with raw float values; rendering rounds to 12
    significant digits and snaps sub-PRUNE_TOL components to zero for a clean
    +-i style display. norm_check is the squared-modulus sum of listed rows.
    """

    d: int
    t: int
    rows: tuple[tuple[str, float, float], ...]
    norm_check: float

    def __post_init__(self):
        if abs(self.norm_check - 1.0) > 1e-9:
            raise ValueError(f"listed rows have squared-modulus sum {self.norm_check}")

    def to_text_rows(self, indent: str = "  ") -> list[str]:
        width = max(len(label) for label, _, _ in self.rows)
        return [
            f"{indent}{label:<{width}}  {_fmt_complex(re, im)}"
            for label, re, im in self.rows
        ]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "t": self.t,
            "rows": [[label, re, im] for label, re, im in self.rows],
            "norm_check": self.norm_check,
        }


def _fmt_component(x: float) -> str:
    if abs(x) < PRUNE_TOL:
        x = 0.0
    return f"{x + 0.0:+.12g}"  # +0.0 normalizes a negative zero


def _fmt_complex(re: float, im: float) -> str:
    return f"{_fmt_component(re)}{_fmt_component(im)}i"


def amplitude_table(reg: QuditRegister) -> AmplitudeTable:
    """Tabulate every amplitude of modulus >= PRUNE_TOL, in basis order."""
    if reg.amps.size > size_cap():
        raise SizeCapExceeded(f"{reg.amps.size} amplitudes exceed the cap of {size_cap()}")
    rows = []
    total = 0.0
    for i, a in enumerate(reg.amps):
        mag = abs(a)
        if mag < PRUNE_TOL:
            continue
        rows.append((basis_label(basis_digits(i, reg.d, reg.t), reg.d), float(a.real), float(a.imag)))
        total += mag * mag
    return AmplitudeTable(d=reg.d, t=reg.t, rows=tuple(rows), norm_check=total)


def outcome_marginal(params: ProtocolParams) -> MarginalDistribution:
    """Exact distribution of agent 1's Fourier-basis measurement."""
    reg = post_encoding_state(params)
    return marginal(apply_local(reg, 1, qft_inv(params.d)), 1)


def success_probability_exact(params: ProtocolParams) -> float:
    """Exact Pr[agent 1's outcome equals the secret] in the published flow.

    Equals 1/d whenever t >= 2: the other agents' qudits leave agent 1's
    reduced state maximally mixed, untouched by any local unitary.
    """
    return float(outcome_marginal(params).probs[params.expected_secret])


def repaired_success_probability_exact(params: ProtocolParams) -> float:
    """Total probability that the all-measure variant's announced sum is the secret."""
    reg = post_encoding_state(params)
    for r in range(1, params.t + 1):
        reg = apply_local(reg, r, qft_inv(params.d))
    joint = joint_distribution(reg)
    secret = params.expected_secret
    return sum(p for m, p in joint.entries.items() if sum(m) % params.d == secret)


def success_probability_mc(
    params: ProtocolParams,
    trials: int,
    seed: int = DEFAULT_SEED,
    variant: str = SONG_ORIGINAL,
) -> tuple[float, float]:
    """Sampled success fraction and its binomial standard error.

    Trial i runs with a seed derived from (seed, i), so estimates are
    reproducible and independent of execution order.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if variant == SONG_ORIGINAL:
        run = run_song_original
    elif variant == REPAIRED:
        run = run_repaired_all_measure
    else:
        raise ValueError(f"no Monte-Carlo runner for variant {variant!r}")
    hits = 0
    for i in range(trials):
        tr = run(params.with_seed(derived_seed(seed, i)))
        hits += tr.final_outcome == tr.expected_secret
    estimate = hits / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    return estimate, stderr


def _reference_encoded_amps() -> np.ndarray:
    amps = np.zeros(REF_D**REF_T, dtype=np.complex128)
    stride = (REF_D**REF_T - 1) // (REF_D - 1)
    for k in range(REF_D):
        amps[k * stride] = _REF_BRANCH_PHASES[k] / 2.0
    return amps


def _reference_transformed_amps() -> np.ndarray:
    amps = np.zeros(REF_D**REF_T, dtype=np.complex128)
    for k in range(REF_D):
        for j in range(REF_D):
            amps[j * REF_D**2 + k * REF_D + k] = _REF_TRANSFORMED_COLUMNS[k][j] / 4.0
    return amps


def verify_reference_states(
    s_split: tuple[int, int, int] = (3, 0, 0),
) -> tuple[QuditRegister, QuditRegister]:
    """Build the reference example's states and check them against closed forms.

    s_split is the per-agent split of the accumulated phase; any split summing
    to 3 mod 4 produces the same register. Raises ReproductionError if either
    the encoded state (4 amplitudes) or the transformed state (16 amplitudes)
    deviates beyond REF_TOL.
    """
    params = ProtocolParams(d=REF_D, t=REF_T, s_vector=tuple(s_split))
    if params.expected_secret != REF_SECRET:
        raise ValueError(f"split {s_split} does not sum to {REF_SECRET} mod {REF_D}")
    encoded = post_encoding_state(params)
    err = float(np.max(np.abs(encoded.amps - _reference_encoded_amps())))
    if err > REF_TOL:
        raise ReproductionError(f"encoded state deviates by {err:.3e} (> {REF_TOL})")
    transformed = apply_local(encoded, 1, qft_inv(REF_D))
    err = float(np.max(np.abs(transformed.amps - _reference_transformed_amps())))
    if err > REF_TOL:
        raise ReproductionError(f"transformed state deviates by {err:.3e} (> {REF_TOL})")
    return encoded, transformed


@dataclass(frozen=True)
class ExampleReport:
    """Everything the reference example produces, reproducible byte-for-byte."""

    d: int
    t: int
    secret: int
    s_split: tuple[int, ...]
    encoded_table: AmplitudeTable
    transformed_table: AmplitudeTable
    marginal: tuple[float, ...]
    exact_p: float
    mc_trials: int
    mc_seed: int
    mc_estimate: float
    mc_stderr: float
    verdict: str

    def to_dict(self) -> dict:
        return {
            "params": {
                "d": self.d,
                "t": self.t,
                "secret": self.secret,
                "s_split": list(self.s_split),
            },
            "encoded_table": self.encoded_table.to_dict(),
            "transformed_table": self.transformed_table.to_dict(),
            "marginal": list(self.marginal),
            "exact_p": self.exact_p,
            "mc": {
                "trials": self.mc_trials,
                "seed": self.mc_seed,
                "estimate": self.mc_estimate,
                "stderr": self.mc_stderr,
            },
            "verdict": self.verdict,
        }

    def to_text(self) -> str:
        lines = [
            f"reference example: d={self.d} t={self.t} secret={self.secret} "
            f"split={','.join(str(s) for s in self.s_split)}",
            "",
            f"encoded state ({len(self.encoded_table.rows)} rows):",
            *self.encoded_table.to_text_rows(),
            "",
            f"after inverse Fourier on qudit 1 ({len(self.transformed_table.rows)} rows):",
            *self.transformed_table.to_text_rows(),
            "",
            "marginal of qudit 1: " + " ".join(f"{p:.12g}" for p in self.marginal),
            f"exact success probability: {self.exact_p:.12g}",
            f"monte carlo: trials={self.mc_trials} seed={self.mc_seed} "
            f"estimate={self.mc_estimate:.12g} stderr={self.mc_stderr:.12g}",
            f"verdict: {self.verdict}",
        ]
        return "\n".join(lines) + "\n"


def reproduce_example_d4(
    trials: int = 10000,
    seed: int = DEFAULT_SEED,
    s_split: tuple[int, int, int] = (3, 0, 0),
) -> ExampleReport:
    """Reproduce the d=4, t=3, secret-3 example and report its statistics.

    Asserts the encoded and transformed registers against their closed forms
    (ReproductionError on mismatch), then reports agent 1's exact marginal,
    the exact success probability, and a seeded Monte-Carlo estimate.
    """
    encoded, transformed = verify_reference_states(s_split)
    marg = marginal(transformed, 1).probs
    exact_p = float(marg[REF_SECRET])
    params = ProtocolParams(d=REF_D, t=REF_T, s_vector=tuple(s_split), seed=seed)
    estimate, stderr = success_probability_mc(params, trials, seed)
    verdict = (
        f"outcome uniform over {REF_D} values (exact p = {exact_p:.12g}); "
        "the lone measuring agent cannot recover the secret without announcements"
    )
    return ExampleReport(
        d=REF_D,
        t=REF_T,
        secret=REF_SECRET,
        s_split=tuple(s_split),
        encoded_table=amplitude_table(encoded),
        transformed_table=amplitude_table(transformed),
        marginal=tuple(float(p) for p in marg),
        exact_p=exact_p,
        mc_trials=trials,
        mc_seed=seed,
        mc_estimate=estimate,
        mc_stderr=stderr,
        verdict=verdict,
    )
