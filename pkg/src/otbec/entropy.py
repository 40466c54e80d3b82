"""Finite-distribution information toolkit: entropies, distances, and extraction bounds."""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "FiniteDistribution",
    "JointDistribution",
    "min_entropy",
    "cond_min_entropy",
    "smooth_min_entropy",
    "renyi2_entropy",
    "statistical_distance",
    "zero_entropy",
    "mutual_information",
    "privacy_amp_bound",
    "dlhl_closeness",
    "dlhl_condition",
    "chain_bound",
]

MASS_TOL = 1e-9


def _check_mass(probs) -> None:
    if not probs:
        raise ValueError("distribution must have at least one outcome")
    total = sum(probs)
    if any(p < 0 for p in probs):
        raise ValueError("probabilities must be nonnegative")
    if abs(float(total) - 1.0) > MASS_TOL:
        raise ValueError(f"probabilities must sum to 1 within {MASS_TOL}, got {float(total)}")


def _prob_repr(p):
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return p


def _prob_parse(v):
    if isinstance(v, str):
        num, den = v.split("/")
        return Fraction(int(num), int(den))
    return v


class FiniteDistribution:
    """Explicit probability vector over an enumerable outcome space.

    Probabilities may be floats or exact Fractions; operations preserve exactness
    where they can.
    """

    __slots__ = ("outcomes", "probs")

    def __init__(self, outcomes, probs):
        outcomes = tuple(outcomes)
        probs = tuple(probs)
        if len(outcomes) != len(probs):
            raise ValueError("outcomes and probs must have equal length")
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("outcomes must be distinct")
        _check_mass(probs)
        self.outcomes = outcomes
        self.probs = probs

    @classmethod
    def from_mapping(cls, mapping) -> "FiniteDistribution":
        items = list(mapping.items())
        return cls([o for o, _ in items], [p for _, p in items])

    def as_mapping(self) -> dict:
        return dict(zip(self.outcomes, self.probs))

    def __len__(self) -> int:
        return len(self.outcomes)

    def __repr__(self) -> str:
        pairs = ", ".join(f"{o!r}: {p}" for o, p in zip(self.outcomes, self.probs))
        return f"FiniteDistribution({{{pairs}}})"

    def to_json(self) -> dict:
        return {"outcomes": list(self.outcomes), "probs": [_prob_repr(p) for p in self.probs]}

    @classmethod
    def from_json(cls, obj) -> "FiniteDistribution":
        outcomes = [tuple(o) if isinstance(o, list) else o for o in obj["outcomes"]]
        return cls(outcomes, [_prob_parse(p) for p in obj["probs"]])


class JointDistribution:
    """Distribution over (x, y) pairs with marginal and conditional accessors."""

    __slots__ = ("_items", "built_as_product")

    def __init__(self, pairs_to_probs):
        if hasattr(pairs_to_probs, "items"):
            items = list(pairs_to_probs.items())
        else:
            items = list(pairs_to_probs)
        for pair, _ in items:
            if not (isinstance(pair, tuple) and len(pair) == 2):
                raise ValueError("joint outcomes must be (x, y) pairs")
        _check_mass([p for _, p in items])
        self._items = tuple(items)
        self.built_as_product = False

    @classmethod
    def product(cls, px: FiniteDistribution, py: FiniteDistribution) -> "JointDistribution":
        j = cls({(x, y): p * q for x, p in zip(px.outcomes, px.probs)
                 for y, q in zip(py.outcomes, py.probs)})
        j.built_as_product = True
        return j

    @classmethod
    def from_samples(cls, pairs) -> "JointDistribution":
        """Empirical (plug-in) joint from observed (x, y) samples."""
        counts: dict = {}
        n = 0
        for pair in pairs:
            counts[pair] = counts.get(pair, 0) + 1
            n += 1
        if n == 0:
            raise ValueError("no samples")
        return cls({pair: c / n for pair, c in counts.items()})

    def items(self):
        return self._items

    def mass(self, pair):
        for q, p in self._items:
            if q == pair:
                return p
        return 0

    def marginal_x(self) -> FiniteDistribution:
        acc: dict = {}
        for (x, _), p in self._items:
            acc[x] = acc.get(x, 0) + p
        return FiniteDistribution.from_mapping(acc)

    def marginal_y(self) -> FiniteDistribution:
        acc: dict = {}
        for (_, y), p in self._items:
            acc[y] = acc.get(y, 0) + p
        return FiniteDistribution.from_mapping(acc)

    def conditional_x_given(self, y) -> FiniteDistribution:
        acc: dict = {}
        for (x, yy), p in self._items:
            if yy == y and p > 0:
                acc[x] = acc.get(x, 0) + p
        total = sum(acc.values())
        if total == 0:
            raise ValueError(f"conditioning event {y!r} has zero probability")
        if isinstance(total, Fraction) or any(isinstance(v, Fraction) for v in acc.values()):
            return FiniteDistribution.from_mapping({x: Fraction(v) / Fraction(total) for x, v in acc.items()})
        return FiniteDistribution.from_mapping({x: v / total for x, v in acc.items()})

    def as_distribution(self) -> FiniteDistribution:
        return FiniteDistribution([q for q, _ in self._items], [p for _, p in self._items])


def min_entropy(d: FiniteDistribution) -> float:
    """H_inf = log2(1 / max_x P(x))."""
    top = max(d.probs)
    if top <= 0:
        raise ValueError("distribution has no positive mass")
    return -math.log2(float(top))


def cond_min_entropy(j: JointDistribution) -> float:
    """H_inf(X|Y) = min over positive-mass y of H_inf(X | Y = y)."""
    rows: dict = {}
    masses: dict = {}
    for (x, y), p in j.items():
        if p > 0:
            rows[y] = max(rows.get(y, 0), p)
            masses[y] = masses.get(y, 0) + p
    if not rows:
        raise ValueError("joint has no positive mass")
    # max_x P(x|y) = max_x p(x,y) / p(y); minimize entropy over y
    worst = max(float(rows[y]) / float(masses[y]) for y in rows)
    return -math.log2(worst)


def smooth_min_entropy(d: FiniteDistribution, eps: float) -> float:
    """Greedy smoothing surrogate: level the largest atoms down, then report min-entropy.

    The neighborhood is mass removal without renormalization; total removed mass is
    capped at 2*eps so the trimmed vector stays within statistical distance eps
    (with the 1/2-sum convention) of the original. Equals min_entropy at eps = 0
    and is nondecreasing in eps. This is a documented stand-in for the exact
    optimization, validated exhaustively on small spaces.
    """
    if not 0 <= eps < 1:
        raise ValueError("smoothing budget must lie in [0, 1)")
    budget = 2 * float(eps)
    probs = sorted((float(p) for p in d.probs), reverse=True)
    if probs[0] <= 0:
        raise ValueError("distribution has no positive mass")
    if budget == 0:
        return -math.log2(probs[0])
    # Water-filling: find the lowest level L with sum_i max(p_i - L, 0) <= budget.
    removed = 0.0
    level = probs[0]
    for j in range(len(probs)):
        nxt = probs[j + 1] if j + 1 < len(probs) else 0.0
        step = (j + 1) * (probs[j] - nxt)
        if removed + step >= budget:
            level = probs[j] - (budget - removed) / (j + 1)
            break
        removed += step
        level = nxt
    if level <= 0:
        return math.inf
    return -math.log2(level)


def renyi2_entropy(d: FiniteDistribution) -> float:
    """H_2 = log2(1 / sum_x P(x)^2)."""
    coll = sum(p * p for p in d.probs)
    return -math.log2(float(coll))


def statistical_distance(p: FiniteDistribution, q: FiniteDistribution) -> float:
    """(1/2) sum_x |p(x) - q(x)| over a shared outcome space."""
    if set(p.outcomes) != set(q.outcomes):
        raise ValueError("distributions must share an outcome space")
    qm = q.as_mapping()
    total = sum(abs(pp - qm[o]) for o, pp in zip(p.outcomes, p.probs))
    if isinstance(total, Fraction):
        return total / 2
    return float(total) / 2


def zero_entropy(d) -> float:
    """H_0 = log2 |support|; for a joint, the conditional form max_y log2 |support(X|Y=y)|."""
    if isinstance(d, JointDistribution):
        support: dict = {}
        for (x, y), p in d.items():
            if p > 0:
                support.setdefault(y, set()).add(x)
        if not support:
            raise ValueError("joint has no positive mass")
        return math.log2(max(len(s) for s in support.values()))
    n = sum(1 for p in d.probs if p > 0)
    if n == 0:
        raise ValueError("distribution has no positive mass")
    return math.log2(n)


def mutual_information(j: JointDistribution):
    """Shannon mutual information in bits.

    Product structure is detected exactly (p(x,y) == p(x) p(y) for every pair,
    or the joint was built by JointDistribution.product), in which case an
    exact 0 is returned; this keeps rational-arithmetic joints exactly zero
    instead of accumulating rounding noise. Residual float rounding below
    1e-12 is clamped to zero so the plug-in estimate stays nonnegative.
    """
    px = j.marginal_x().as_mapping()
    py = j.marginal_y().as_mapping()
    if j.built_as_product or all(p == px[x] * py[y] for (x, y), p in j.items()):
        return 0 if _all_rational(j) else 0.0
    total = 0.0
    for (x, y), p in j.items():
        if p > 0:
            total += float(p) * math.log2(float(p) / (float(px[x]) * float(py[y])))
    if -1e-12 < total < 0.0:
        return 0.0
    return total


def _all_rational(j: JointDistribution) -> bool:
    return all(isinstance(p, (Fraction, int)) for _, p in j.items())


def privacy_amp_bound(l: float, c: float) -> float:
    """Extractable key entropy max(0, l - log2(1 + 2^(l - c))) for key length l and order-2 bound c."""
    t = l - c
    if t > 0:
        soft = t + math.log2(1.0 + 2.0 ** (-t))
    else:
        soft = math.log2(1.0 + 2.0 ** t)
    return max(0.0, l - soft)


def dlhl_closeness(m: int, eps: float, eps_prime: float) -> float:
    """Distance-from-uniform bound 2^m * eps / 2 + 2^m * eps_prime for m simultaneous hashes."""
    if eps < 0 or eps_prime < 0:
        raise ValueError("eps and eps_prime must be nonnegative")
    return (2 ** m) * eps / 2 + (2 ** m) * eps_prime


def dlhl_condition(entropy, key_lengths, eps: float) -> bool:
    """Entropy condition for extraction: H >= sum of key lengths + 2 log2(1/eps).

    `entropy` is either a single smooth-min-entropy figure for the full key set,
    or a mapping {subset-of-key-indices: entropy}; every provided subset is checked.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")

    def holds(h, lengths):
        if eps == 0:
            return False  # 2 log2(1/0) is infinite; no finite entropy satisfies it
        return h >= sum(lengths) + 2 * math.log2(1 / eps)

    if hasattr(entropy, "items"):
        return all(
            holds(h, [key_lengths[i] for i in subset]) for subset, h in entropy.items()
        )
    return holds(entropy, key_lengths)


def chain_bound(hinf_u_given_w: float, hinf_eps_v_given_uw: float,
                h0_v_given_w: float, eps_prime: float) -> float:
    """Smooth-entropy chain certificate: H_inf(U|W) + H_inf^eps(V|U,W) - H_0(V|W) - log2(1/eps')."""
    if eps_prime <= 0:
        raise ValueError("eps_prime must be positive")
    return hinf_u_given_w + hinf_eps_v_given_uw - h0_v_given_w - math.log2(1 / eps_prime)
