"""Shared protocol substrate: parameters, transcripts, views, encryption, subset selection."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .channel import ERASED, as_bits, restrict
from .hashing import LinearHash, apply, pack_bits, serialize_hash

__all__ = [
    "ParamError",
    "AbortSignal",
    "DecodeError",
    "ProtocolParams",
    "validate_params",
    "snap_params",
    "Transcript",
    "TranscriptMessage",
    "AliceView",
    "BobView",
    "OtOutcome",
    "ProtocolRun",
    "sample_subset",
    "select_subsets",
    "encrypt",
    "decode_chosen",
]


class ParamError(ValueError):
    """Parameter rejection; .constraint names the violated invariant."""

    def __init__(self, constraint: str, message: str):
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint
        self.message = message


class AbortSignal(Exception):
    """Protocol abort (set-size shortfall); not an error, surfaces in the outcome."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class DecodeError(Exception):
    """Decoding failure (erased chosen position or verification mismatch)."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _near_int(x, tol: float = 1e-9):
    """Integer value of x if x is within tol of one, else None."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else None
    r = round(float(x))
    return r if abs(float(x) - r) <= tol else None


def _ceil(x) -> int:
    if isinstance(x, Fraction):
        return math.ceil(x)
    return math.ceil(float(x) - 1e-12)


def _floor(x) -> int:
    if isinstance(x, Fraction):
        return math.floor(x)
    return math.floor(float(x) + 1e-12)


@dataclass(frozen=True)
class ProtocolParams:
    """Parameters shared by both protocol variants.

    Rates and slacks may be floats or exact Fractions; integrality checks are
    exact for Fractions and tolerance-based (1e-9) for floats. `order` names the
    phase-1 receiver of the colluding variant.
    """

    n: int
    p1: float
    p2: float
    r1: float
    r2: float
    lam: float
    lam_prime: float
    s1: float | None = None
    s2: float | None = None
    variant: str = "noncolluding"
    order: int = 1

    def __post_init__(self) -> None:
        if self.s1 is None:
            object.__setattr__(self, "s1", self.lam_prime)
        if self.s2 is None:
            object.__setattr__(self, "s2", self.lam_prime)

    def p(self, i: int) -> float:
        return self.p1 if i == 1 else self.p2

    def r(self, i: int):
        return self.r1 if i == 1 else self.r2

    def s(self, i: int):
        return self.s1 if i == 1 else self.s2

    def mask_size(self, i: int) -> int:
        """Label-set size r_i * n of the plain protocol (and the abort threshold of both)."""
        v = _near_int(self.r(i) * self.n)
        if v is None:
            raise ParamError("set size integrality", f"r{i}*n = {float(self.r(i)) * self.n} is not an integer")
        return v

    def key_len(self, i: int) -> int:
        """Message length k_i = n(r_i - lambda')."""
        v = _near_int((self.r(i) - self.lam_prime) * self.n)
        if v is None:
            raise ParamError("integrality", f"n(r{i} - lambda') = {(float(self.r(i)) - float(self.lam_prime)) * self.n} is not an integer")
        return v

    def verify_bits(self, i: int) -> int:
        """Verification hash output length s_i * n."""
        v = _near_int(self.s(i) * self.n)
        if v is None:
            raise ParamError("verification hash length", f"s{i}*n = {float(self.s(i)) * self.n} is not an integer")
        return v

    def phase1_size(self, i: int) -> int:
        """Colluding phase-1 label-set size ceil(r_i / (p_other - lambda') * n)."""
        other = self.p(3 - i)
        denom = other - self.lam_prime
        if denom <= 0:
            raise ParamError("phase-one inflation", f"p{3 - i} - lambda' = {float(denom)} must be positive")
        if isinstance(self.r(i), Fraction) and isinstance(self.lam_prime, Fraction):
            return _ceil(Fraction(self.r(i)) / Fraction(denom) * self.n)
        return _ceil(float(self.r(i)) / float(denom) * self.n)

    def sprime_size(self) -> int:
        """Leftover-erasure set size for the phase-1 receiver; 0 when p_i <= 1/2."""
        i = self.order
        if not float(self.p(i)) > 0.5:
            return 0
        inner = float(self.p(i)) - float(self.lam) - float(self.r(i)) / (float(self.p(3 - i)) - float(self.lam_prime))
        return max(0, _floor(inner * self.n))


def validate_params(params: ProtocolParams) -> ProtocolParams:
    """Check every parameter invariant; raise ParamError naming the violated constraint."""
    p = params
    if not (isinstance(p.n, int) and p.n >= 1):
        raise ParamError("block length", f"n must be a positive integer, got {p.n}")
    for i in (1, 2):
        if not 0 <= float(p.p(i)) <= 1:
            raise ParamError("erasure probability", f"p{i} = {p.p(i)} not in [0, 1]")
    if not 0 < float(p.lam) < 1:
        raise ParamError("lambda range", f"lambda = {p.lam} not in (0, 1)")
    if p.variant not in ("noncolluding", "colluding"):
        raise ParamError("variant", f"unknown variant {p.variant!r}")
    if p.order not in (1, 2):
        raise ParamError("order", f"phase-1 receiver must be 1 or 2, got {p.order}")
    for i in (1, 2):
        if not 0 < float(p.lam_prime) < float(p.r(i)):
            raise ParamError("lambda-prime range", f"need 0 < lambda' < r{i}, got lambda' = {p.lam_prime}, r{i} = {p.r(i)}")
        if p.mask_size(i) < 1:
            raise ParamError("set size integrality", f"r{i}*n must be a positive integer")
        if p.key_len(i) < 1:
            raise ParamError("integrality", f"n(r{i} - lambda') must be a positive integer")
        if p.verify_bits(i) < 1:
            raise ParamError("verification hash length", f"s{i}*n must be a positive integer")
        cap = min(float(p.p(i)), 1 - float(p.p(i)))
        if p.variant == "noncolluding":
            if not float(p.r(i)) < cap - float(p.lam):
                raise ParamError("rate constraint", f"need r{i} < min(p{i}, 1-p{i}) - lambda = {cap - float(p.lam)}, got {float(p.r(i))}")
        else:
            bound = float(p.p(3 - i)) * cap - float(p.lam)
            if not float(p.r(i)) < bound:
                raise ParamError("rate constraint", f"need r{i} < p{3 - i}*min(p{i}, 1-p{i}) - lambda = {bound}, got {float(p.r(i))}")
    if p.variant == "colluding":
        for i in (1, 2):
            p.phase1_size(i)  # raises on nonpositive inflation denominator
        i = p.order
        if float(p.p(i)) > 0.5:
            inner = float(p.p(i)) - float(p.lam) - float(p.r(i)) / (float(p.p(3 - i)) - float(p.lam_prime))
            if inner <= 0:
                raise ParamError("leftover set size", f"p{i} - lambda - r{i}/(p{3 - i} - lambda') = {inner} must be positive")
    return params


def snap_params(
    n: int,
    p1: float,
    p2: float,
    r1,
    r2,
    lam,
    lam_prime,
    s1=None,
    s2=None,
    variant: str = "noncolluding",
    order: int = 1,
) -> tuple[ProtocolParams, dict]:
    """Build validated params from possibly non-integral rate requests.

    Set sizes, key lengths and verification lengths are rounded to integers, so
    effective rates become multiples of 1/n (stored as exact Fractions). Returns
    the params plus a record of every adjusted quantity. The strict validator
    still runs; constraint violations that survive snapping are real rejections.
    """
    if not (isinstance(n, int) and n >= 1):
        raise ParamError("block length", f"n must be a positive integer, got {n}")
    adjustments: dict = {}

    def snap(label, value, minimum=1):
        bits = max(minimum, round(float(value) * n))
        eff = Fraction(bits, n)
        if abs(float(eff) - float(value)) > 1e-12:
            adjustments[label] = {"requested": float(value), "effective": float(eff)}
        return bits, eff

    mask1, r1_eff = snap("r1", r1)
    mask2, r2_eff = snap("r2", r2)
    lp_bits = max(1, round(float(lam_prime) * n))
    # keep both key lengths positive: k_i = mask_i - lp_bits
    lp_bits = min(lp_bits, mask1 - 1, mask2 - 1)
    if lp_bits < 1:
        raise ParamError("integrality", f"block length {n} too small to separate r*n from n(r - lambda')")
    lp_eff = Fraction(lp_bits, n)
    if abs(float(lp_eff) - float(lam_prime)) > 1e-12:
        adjustments["lambda_prime"] = {"requested": float(lam_prime), "effective": float(lp_eff)}
    _, s1_eff = snap("s1", lam_prime if s1 is None else s1)
    _, s2_eff = snap("s2", lam_prime if s2 is None else s2)
    params = ProtocolParams(
        n=n, p1=p1, p2=p2, r1=r1_eff, r2=r2_eff, lam=lam,
        lam_prime=lp_eff, s1=s1_eff, s2=s2_eff, variant=variant, order=order,
    )
    return validate_params(params), adjustments


# --- transcript ---------------------------------------------------------------

PAYLOAD_KINDS = ("index-sets", "hash-descriptions", "ciphertexts", "phase-marker")


@dataclass
class TranscriptMessage:
    """One public-channel message; payload values keep their structured form.

    payload_bytes() is the canonical encoding used in serialized transcripts:
    entries in sorted name order, hash matrices as (rows, cols)-headed row-major
    MSB-first packings, bit vectors with a bit-length header, index sets as
    big-endian uint32 sequences.
    """

    sender: str
    link: int
    kind: str
    payload: object

    def payload_bytes(self) -> bytes:
        if self.kind == "phase-marker":
            return str(self.payload).encode()
        parts = []
        for name in sorted(self.payload):
            value = self.payload[name]
            parts.append(name.encode() + b"=")
            if isinstance(value, LinearHash):
                parts.append(serialize_hash(value))
            elif isinstance(value, np.ndarray) and value.dtype == np.uint8:
                parts.append(pack_bits(value))
            else:
                idx = np.asarray(value, dtype=np.int64)
                parts.append(struct.pack(">I", idx.size))
                parts.append(b"".join(struct.pack(">I", int(v)) for v in idx))
            parts.append(b";")
        return b"".join(parts)

    def to_json(self) -> dict:
        return {
            "sender": self.sender,
            "link": self.link,
            "kind": self.kind,
            "payload": self.payload_bytes().hex(),
        }


class Transcript:
    """Append-only record of all public-channel messages, readable by every party."""

    def __init__(self) -> None:
        self.messages: list[TranscriptMessage] = []

    def append(self, sender: str, link: int, kind: str, payload) -> TranscriptMessage:
        if kind not in PAYLOAD_KINDS:
            raise ValueError(f"unknown payload kind {kind!r}")
        msg = TranscriptMessage(sender, link, kind, payload)
        self.messages.append(msg)
        return msg

    def __iter__(self):
        return iter(self.messages)

    def __len__(self) -> int:
        return len(self.messages)

    def to_json(self) -> list[dict]:
        return [m.to_json() for m in self.messages]


# --- views and outcomes -------------------------------------------------------


@dataclass
class AliceView:
    """Everything the sender holds: messages, randomness record, input block, transcript."""

    messages: tuple
    randomness: dict
    x: np.ndarray
    transcript: Transcript


@dataclass
class BobView:
    """Everything one receiver holds: choice, subset draws, channel observations, transcript."""

    index: int
    z: int
    randomness: dict
    observations: dict
    transcript: Transcript

    def __post_init__(self) -> None:
        if self.z not in (0, 1):
            raise ValueError("choice bit must be 0 or 1")


@dataclass
class OtOutcome:
    """Result of one OT link: status, decoded message if completed, diagnostics."""

    status: str
    decoded: np.ndarray | None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in ("completed", "aborted", "decode-error", "no-second-phase"):
            raise ValueError(f"unknown outcome status {self.status!r}")
        if (self.decoded is not None) != (self.status == "completed"):
            raise ValueError("decoded message present iff status is completed")


@dataclass
class ProtocolRun:
    """Full result of one protocol execution over both links.

    `record` is the omniscient trace (inputs, observations, subset draws, hash
    draws, ciphertexts) used by audits and tests; honest parties only ever see
    their own view plus the transcript.
    """

    params: ProtocolParams
    outcomes: tuple
    alice_view: AliceView
    bob_views: tuple
    transcript: Transcript
    record: dict


# --- core operations ----------------------------------------------------------


def sample_subset(pool: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform size-subset of pool via a seeded partial Fisher-Yates shuffle, returned sorted."""
    pool = np.asarray(pool, dtype=np.int64)
    if size > pool.size:
        raise AbortSignal(f"cannot draw {size} indices from a pool of {pool.size}")
    a = pool.copy()
    for j in range(size):
        t = j + int(rng.integers(0, a.size - j))
        a[j], a[t] = a[t], a[j]
    return np.sort(a[:size])


def select_subsets(
    e: np.ndarray, ebar: np.ndarray, z: int, size: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw the label-indexed pair (S_0, S_1): the chosen label's set from the
    non-erased positions, the other from the erased ones.

    Draw order is fixed (chosen set first) so runs replay identically.
    """
    if z not in (0, 1):
        raise ValueError("choice bit must be 0 or 1")
    if ebar.size < size or e.size < size:
        raise AbortSignal(
            f"cannot host index sets of size {size}: |Ebar| = {ebar.size}, |E| = {e.size}"
        )
    s_chosen = sample_subset(ebar, size, rng)
    s_other = sample_subset(e, size, rng)
    return (s_chosen, s_other) if z == 0 else (s_other, s_chosen)


def encrypt(m: np.ndarray, kappa: LinearHash, key_material: np.ndarray) -> np.ndarray:
    """One-time-pad the message with the hashed key material: m xor kappa(key)."""
    m = as_bits(m)
    if m.size != kappa.rows:
        raise ValueError(f"message length {m.size} does not match hash output length {kappa.rows}")
    return (m ^ apply(kappa, key_material)).astype(np.uint8)


def decode_chosen(
    y: np.ndarray,
    s_z: np.ndarray,
    kappa_z: LinearHash,
    h_z: LinearHash,
    h_commitment: np.ndarray,
    ciphertext: np.ndarray,
) -> np.ndarray:
    """Recover the chosen message from the receiver's observation.

    On an erasure channel the non-erased symbols determine the key material
    exactly, so decoding is a direct read-off followed by the verification-hash
    equality check against the sender's commitment.
    """
    picked = restrict(y, s_z)
    if (picked == ERASED).any():
        raise DecodeError("erased position in the chosen index set")
    x_hat = picked.astype(np.uint8)
    if not np.array_equal(apply(h_z, x_hat), as_bits(h_commitment)):
        raise DecodeError("verification hash mismatch")
    return (as_bits(ciphertext) ^ apply(kappa_z, x_hat)).astype(np.uint8)
