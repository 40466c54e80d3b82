"""Plain protocol variant: an independent string OT on each broadcast link.

Secure against honest-but-curious receivers that do not share information;
the broadcast block is common to both links, everything else is per-link.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import beta, binom

from .channel import as_bits, broadcast, BroadcastParams, erasure_partition, restrict
from .hashing import apply, sample_linear_hash
from .protocol_core import (
    AbortSignal,
    AliceView,
    BobView,
    DecodeError,
    OtOutcome,
    ParamError,
    ProtocolParams,
    ProtocolRun,
    Transcript,
    _near_int,
    decode_chosen,
    encrypt,
    select_subsets,
    validate_params,
)

__all__ = [
    "run_protocol1",
    "AbortEstimate",
    "abort_probability",
    "exact_abort_probability",
]


def _check_messages(params: ProtocolParams, messages) -> tuple:
    out = []
    for i in (1, 2):
        pair = messages[i - 1]
        if len(pair) != 2:
            raise ValueError(f"link {i} needs a message pair")
        k = params.key_len(i)
        coerced = tuple(as_bits(m) for m in pair)
        for m in coerced:
            if m.size != k:
                raise ValueError(f"link {i} messages must have length k{i} = {k}, got {m.size}")
        out.append(coerced)
    return tuple(out)


def run_protocol1(
    params: ProtocolParams,
    messages,
    z: tuple[int, int],
    rng: np.random.Generator,
) -> ProtocolRun:
    """Execute the plain variant once.

    messages is ((m10, m11), (m20, m21)) with length-k_i bit vectors, z the two
    choice bits. Randomness is drawn in a fixed documented order (input block,
    observations for receiver 1 then 2, subset pairs for link 1 then 2, hash
    descriptions for link 1 then 2) so a seeded generator replays the run.
    A link that cannot host its index sets aborts publicly; the other link
    proceeds on the same broadcast block.
    """
    validate_params(params)
    if params.variant != "noncolluding":
        raise ParamError("variant", "run_protocol1 executes the noncolluding variant only")
    messages = _check_messages(params, messages)
    z = (int(z[0]), int(z[1]))
    transcript = Transcript()

    x = rng.integers(0, 2, size=params.n, dtype=np.int64).astype(np.uint8)
    y1, y2 = broadcast(x, BroadcastParams(float(params.p1), float(params.p2)), rng)
    observations = {1: y1, 2: y2}

    sets: dict[int, tuple] = {}
    aborted: dict[int, str] = {}
    for i in (1, 2):
        e, ebar = erasure_partition(observations[i])
        try:
            s0, s1 = select_subsets(e, ebar, z[i - 1], params.mask_size(i), rng)
        except AbortSignal as sig:
            aborted[i] = sig.reason
            transcript.append(f"bob{i}", i, "phase-marker", f"abort link {i}: {sig.reason}")
            continue
        sets[i] = (s0, s1)
        transcript.append(f"bob{i}", i, "index-sets", {"S0": s0, "S1": s1})

    hashes: dict[int, dict] = {}
    commitments: dict[int, tuple] = {}
    ciphertexts: dict[int, tuple] = {}
    for i in (1, 2):
        if i in aborted:
            continue
        mask = params.mask_size(i)
        h_pair = tuple(sample_linear_hash(mask, params.verify_bits(i), rng) for _ in range(2))
        kappa_pair = tuple(sample_linear_hash(mask, params.key_len(i), rng) for _ in range(2))
        keys = tuple(restrict(x, sets[i][j]).astype(np.uint8) for j in (0, 1))
        commit = tuple(apply(h_pair[j], keys[j]) for j in (0, 1))
        cipher = tuple(encrypt(messages[i - 1][j], kappa_pair[j], keys[j]) for j in (0, 1))
        hashes[i] = {"h": h_pair, "kappa": kappa_pair}
        commitments[i] = commit
        ciphertexts[i] = cipher
        transcript.append(
            "alice", i, "hash-descriptions",
            {"h0": h_pair[0], "h1": h_pair[1], "kappa0": kappa_pair[0], "kappa1": kappa_pair[1],
             "t0": commit[0], "t1": commit[1]},
        )
        transcript.append("alice", i, "ciphertexts", {"c0": cipher[0], "c1": cipher[1]})

    outcomes = []
    for i in (1, 2):
        if i in aborted:
            outcomes.append(OtOutcome("aborted", None, {"reason": aborted[i]}))
            continue
        zi = z[i - 1]
        try:
            decoded = decode_chosen(
                observations[i], sets[i][zi], hashes[i]["kappa"][zi],
                hashes[i]["h"][zi], commitments[i][zi], ciphertexts[i][zi],
            )
        except DecodeError as err:
            outcomes.append(OtOutcome("decode-error", None, {"reason": err.reason}))
            continue
        outcomes.append(OtOutcome("completed", decoded, {"correct": bool(np.array_equal(decoded, messages[i - 1][zi]))}))

    alice_view = AliceView(
        messages=messages,
        randomness={"hashes": hashes, "commitments": commitments, "ciphertexts": ciphertexts},
        x=x,
        transcript=transcript,
    )
    bob_views = tuple(
        BobView(
            index=i,
            z=z[i - 1],
            randomness={"sets": sets.get(i)},
            observations={"y": observations[i]},
            transcript=transcript,
        )
        for i in (1, 2)
    )
    record = {
        "x": x, "y1": y1, "y2": y2, "z": z, "messages": messages,
        "sets": sets, "hashes": hashes, "commitments": commitments,
        "ciphertexts": ciphertexts, "aborted": aborted,
    }
    return ProtocolRun(params, tuple(outcomes), alice_view, bob_views, transcript, record)


def _clopper_pearson(successes: int, trials: int, alpha: float = 0.05) -> tuple[float, float]:
    lo = 0.0 if successes == 0 else float(beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


@dataclass(frozen=True)
class AbortEstimate:
    """Monte Carlo abort-probability estimate with an exact binomial interval."""

    estimate: float
    ci: tuple[float, float]
    trials: int


def abort_probability(
    params: ProtocolParams,
    trials: int,
    rng: np.random.Generator,
    receiver: int = 1,
) -> AbortEstimate:
    """Estimate the probability that one receiver's partition cannot host its index sets.

    Only the broadcast and partition steps matter, so each trial reduces to the
    erasure count, a Binomial(n, p) draw; the abort event is a two-sided tail.
    """
    validate_params(params)
    if receiver not in (1, 2):
        raise ValueError("receiver must be 1 or 2")
    if trials < 1:
        raise ValueError("trials must be positive")
    need = params.mask_size(receiver)
    erased = rng.binomial(params.n, float(params.p(receiver)), size=trials)
    hits = int(((erased < need) | (params.n - erased < need)).sum())
    return AbortEstimate(hits / trials, _clopper_pearson(hits, trials), trials)


def exact_abort_probability(n: int, p: float, r) -> float:
    """Exact abort probability: a two-sided Binomial(n, p) tail.

    The partition aborts when fewer than r*n positions are erased or fewer than
    r*n are intact, so the survival region is r*n <= |E| <= n - r*n.
    """
    if not (isinstance(n, int) and n >= 1):
        raise ParamError("block length", f"n must be a positive integer, got {n}")
    if not 0 <= float(p) <= 1:
        raise ParamError("erasure probability", f"p = {p} not in [0, 1]")
    need = _near_int(float(r) * n)
    if need is None or need < 1:
        raise ParamError("set size integrality", f"r*n = {float(r) * n} is not a positive integer")
    if need > n:
        return 1.0
    inside = binom.cdf(n - need, n, float(p)) - binom.cdf(need - 1, n, float(p))
    return float(min(1.0, max(0.0, 1.0 - inside)))
