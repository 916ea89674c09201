"""Arrow configurations and the rewrite system that canonicalizes permutations.

A permutation of {1, ..., 2r} acts on the row/column indices of an
r-subsystem density matrix.  Modulo the group of norm-preserving
permutations, every permutation reduces to a product of disjoint
transpositions drawn from a small dictionary:

    arrow k -> l   <->  transposition (2k, 2l-1)     (a reshuffle)
    loop @k        <->  transposition (2k-1, 2k)     (a partial transpose)

Such a product is drawn as a set of arrows and loops on the subsystems
{1, ..., r}.  Four rewrite rules, each realized by multiplying a
norm-preserving permutation from the right, reduce any permutation to a
*disjoint* configuration (no two arrows touch a common subsystem):

    prune           drop a point whose cyclic neighbour has equal parity
    chop            split an alternating-parity cycle into transpositions
    exchange heads  swap the heads of two arrows (collapses chains)
    flip            reverse arrows, trade loops for free subsystems

The class of a permutation is the pair (head set, tail set) of its
disjoint configuration, taken modulo flipping.  ``canonical_key`` picks a
fixed representative of each class; two permutations yield the same
separability criterion exactly when their keys agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .perms import Permutation, compose, inverse, permutation_from_cycles, _cycles_of_images

__all__ = [
    "Arrow",
    "ArrowConfiguration",
    "CanonicalKey",
    "RewriteStep",
    "CanonicalizationTrace",
    "prune",
    "chop",
    "exchange_heads",
    "flip",
    "normal_form",
    "as_permutation",
    "canonical_key",
    "equivalent",
    "canonicalize",
]


class Arrow(NamedTuple):
    tail: int
    head: int

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    def render(self) -> str:
        if self.is_loop:
            return f"@{self.tail}"
        return f"{self.tail}->{self.head}"


@dataclass(frozen=True)
class ArrowConfiguration:
    """A valid set of arrows/loops on subsystems {1, ..., r}.

    Valid means: no two arrows share a head, no two share a tail, and no
    arrow other than a loop itself touches a loop's subsystem.  Validity
    keeps the corresponding transpositions unambiguous; disjointness
    (``is_disjoint``) is the stronger normal-form property that no two
    arrows touch a common subsystem at all.
    """

    r: int
    arrows: frozenset[Arrow]

    def __post_init__(self) -> None:
        # a loop occupies its subsystem as both head and tail, so the two
        # uniqueness checks also ban arrows touching a loop's subsystem
        heads: set[int] = set()
        tails: set[int] = set()
        for a in sorted(self.arrows):
            if not (1 <= a.tail <= self.r and 1 <= a.head <= self.r):
                raise ValueError(f"arrow {a.render()} leaves subsystems 1..{self.r}")
            if a.head in heads:
                raise ValueError(f"two arrows share head {a.head}")
            if a.tail in tails:
                raise ValueError(f"two arrows share tail {a.tail}")
            heads.add(a.head)
            tails.add(a.tail)

    @property
    def heads(self) -> frozenset[int]:
        return frozenset(a.head for a in self.arrows)

    @property
    def tails(self) -> frozenset[int]:
        return frozenset(a.tail for a in self.arrows)

    @property
    def loops(self) -> frozenset[int]:
        return frozenset(a.tail for a in self.arrows if a.is_loop)

    @property
    def free(self) -> frozenset[int]:
        touched = self.heads | self.tails
        return frozenset(k for k in range(1, self.r + 1) if k not in touched)

    def sorted_arrows(self) -> tuple[Arrow, ...]:
        return tuple(sorted(self.arrows))

    def is_disjoint(self) -> bool:
        """True when the supports of all pairs of arrows are disjoint."""
        seen: set[int] = set()
        for a in self.arrows:
            support = {a.tail, a.head}
            if seen & support:
                return False
            seen |= support
        return True

    def render(self) -> str:
        if not self.arrows:
            return "()"
        return ", ".join(a.render() for a in self.sorted_arrows())


@dataclass(frozen=True)
class CanonicalKey:
    """Flip-reduced (head set, tail set) pair; one per equivalence class.

    Loops belong to both sets.  Of the two flip-related candidates the
    constructor demands the one with the smaller rank
    (#heads, tails, heads); ``canonical_key`` always produces that form.
    """

    r: int
    heads: tuple[int, ...]
    tails: tuple[int, ...]

    def __post_init__(self) -> None:
        for name, seq in (("heads", self.heads), ("tails", self.tails)):
            if list(seq) != sorted(set(seq)):
                raise ValueError(f"{name} must be strictly sorted: {seq}")
            if seq and not (1 <= seq[0] and seq[-1] <= self.r):
                raise ValueError(f"{name} leave subsystems 1..{self.r}: {seq}")
        if len(self.heads) != len(self.tails):
            raise ValueError("head and tail sets must have equal size")
        partner = _flip_sets(self.r, self.heads, self.tails)
        if _key_rank(partner) < _key_rank((self.heads, self.tails)):
            raise ValueError(
                f"key H={set(self.heads) or {}} T={set(self.tails) or {}} "
                "is not flip-reduced"
            )

    @property
    def is_trivial(self) -> bool:
        return not self.heads

    @property
    def loop_count(self) -> int:
        return len(set(self.heads) & set(self.tails))

    @property
    def arrow_count(self) -> int:
        return len(self.heads) - self.loop_count

    @property
    def rank(self) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        """Deterministic sort rank: (#arrows + #loops, tails, heads)."""
        return (len(self.heads), self.tails, self.heads)

    def render(self) -> str:
        h = "{" + ",".join(str(k) for k in self.heads) + "}"
        t = "{" + ",".join(str(k) for k in self.tails) + "}"
        return f"H={h} T={t}"


@dataclass(frozen=True)
class RewriteStep:
    """One rule application: ``after = before * multiplier`` exactly.

    ``multiplier`` is a tuple of cycles composed left to right; it is
    always norm-preserving.  ``state`` renders the decomposition or the
    configuration after the step.
    """

    rule: str
    detail: str
    multiplier: tuple[tuple[int, ...], ...]
    state: str


@dataclass(frozen=True)
class CanonicalizationTrace:
    degree: int
    input_cycles: tuple[tuple[int, ...], ...]
    steps: tuple[RewriteStep, ...]
    configuration: ArrowConfiguration
    key: CanonicalKey


# --- the rewrite rules on plain data  ---------------------------------------
#
# The workers below operate on lists of ints so that exhaustive runs over
# whole symmetric groups stay cheap.  `steps` is either None or a list
# collecting RewriteStep records.


def _render_cycles(cycles: Sequence[Sequence[int]]) -> str:
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(p) for p in c) + ")" for c in cycles)


def _prune_cycles(
    cycles: list[list[int]], steps: list[RewriteStep] | None
) -> list[list[int]]:
    """Drop points that sit next to an equal-parity point, cyclically.

    Scans each cycle left to right, removes the first point of the first
    matching pair, and restarts; the removal multiplies the permutation by
    the transposition of the pair, which preserves parity.
    """
    work = [list(c) for c in cycles]
    for ci in range(len(work)):
        c = work[ci]
        changed = True
        while changed and len(c) > 1:
            changed = False
            for i in range(len(c)):
                n1 = c[i]
                n2 = c[(i + 1) % len(c)]
                if (n1 ^ n2) & 1 == 0:
                    del c[i]
                    if steps is not None:
                        steps.append(
                            RewriteStep(
                                rule="prune",
                                detail=f"drop {n1} (equal parity neighbour {n2})",
                                multiplier=((n1, n2),),
                                state=_render_cycles([x for x in work if len(x) > 1]),
                            )
                        )
                    changed = True
                    break
    return [c for c in work if len(c) > 1]


def _check_pruned(cycles: Sequence[Sequence[int]]) -> None:
    for c in cycles:
        if len(c) < 2 or len(c) % 2 != 0:
            raise ValueError(f"cycle {tuple(c)} is not pruned (odd length)")
        for i in range(len(c)):
            if (c[i] ^ c[(i + 1) % len(c)]) & 1 == 0:
                raise ValueError(
                    f"cycle {tuple(c)} is not pruned: {c[i]} and "
                    f"{c[(i + 1) % len(c)]} have equal parity"
                )


def _chop_cycles(
    cycles: Sequence[Sequence[int]], steps: list[RewriteStep] | None
) -> list[tuple[int, int]]:
    """Split pruned cycles into disjoint transpositions.

    A pruned cycle (n1, p1, ..., nk, pk) alternates parity, so the points
    n1, n3, ... in even positions share one parity; multiplying by the
    cycle (n1, nk, ..., n2) on those points yields (n1,p1)...(nk,pk).
    """
    _check_pruned(cycles)
    out: list[tuple[int, int]] = []
    multipliers: list[tuple[int, ...]] = []
    for c in cycles:
        out.extend((c[i], c[i + 1]) for i in range(0, len(c), 2))
        ns = list(c[0::2])
        if len(ns) >= 2:
            multipliers.append((ns[0], *reversed(ns[1:])))
    if steps is not None and multipliers:
        steps.append(
            RewriteStep(
                rule="chop",
                detail="split cycles into disjoint transpositions",
                multiplier=tuple(multipliers),
                state=_render_cycles(out),
            )
        )
    return out


def _arrow_of_transposition(t: tuple[int, int]) -> tuple[int, int]:
    a, b = t
    even, odd = (a, b) if a % 2 == 0 else (b, a)
    if even % 2 != 0 or odd % 2 != 1:
        raise ValueError(f"transposition {t} does not mix parities")
    return (even // 2, (odd + 1) // 2)


def _transposition_of_arrow(tail: int, head: int) -> tuple[int, int]:
    if tail == head:
        return (2 * tail - 1, 2 * tail)
    return (2 * tail, 2 * head - 1)


def _render_arrows(arrows: Iterable[tuple[int, int]]) -> str:
    items = sorted(arrows)
    if not items:
        return "()"
    return ", ".join(f"@{t}" if t == h else f"{t}->{h}" for t, h in items)


def _exchange_multiplier(
    a: tuple[int, int], b: tuple[int, int]
) -> tuple[tuple[int, ...], ...]:
    t1, h1 = a
    t2, h2 = b
    return ((2 * h1 - 1, 2 * h2 - 1), (2 * t1, 2 * t2))


def _untangle(
    arrows: list[tuple[int, int]], steps: list[RewriteStep] | None
) -> list[tuple[int, int]]:
    """Exchange heads until the configuration is disjoint.

    Deterministic order: among arrows whose head is the tail of another
    arrow, pick the one with the lowest tail and exchange heads with that
    successor.  The exchange turns the pair (t -> h, h -> h') into
    (t -> h', loop @h); closed paths dissolve into loops, open paths into
    interior loops plus one start-to-end arrow.
    """
    work = sorted(arrows)
    while True:
        tails = {t: (t, h) for t, h in work}
        pick = None
        for t, h in work:
            if t != h and h in tails:
                pick = ((t, h), tails[h])
                break
        if pick is None:
            return work
        a, b = pick
        assert a != b and b[0] != b[1], "chain successor must be a non-loop arrow"
        new_a = (a[0], b[1])
        new_b = (b[0], a[1])
        work.remove(a)
        work.remove(b)
        work.extend([new_a, new_b])
        work.sort()
        if steps is not None:
            steps.append(
                RewriteStep(
                    rule="exchange-heads",
                    detail=(
                        f"exchange heads of {_render_arrows([a])} "
                        f"and {_render_arrows([b])}"
                    ),
                    multiplier=_exchange_multiplier(a, b),
                    state=_render_arrows(work),
                )
            )


def _flip_sets(
    r: int, heads: Iterable[int], tails: Iterable[int]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(head, tail) sets of the flipped configuration.

    Flipping reverses arrows, removes loops, and puts loops on every free
    subsystem: new heads are the old non-loop tails plus the old free set,
    and symmetrically for tails.
    """
    hs, ts = set(heads), set(tails)
    loops = hs & ts
    free = set(range(1, r + 1)) - hs - ts
    new_heads = (ts - loops) | free
    new_tails = (hs - loops) | free
    return (tuple(sorted(new_heads)), tuple(sorted(new_tails)))


def _key_rank(
    sets: tuple[tuple[int, ...], tuple[int, ...]]
) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    heads, tails = sets
    return (len(heads), tails, heads)


def _reduce_sets(
    r: int, heads: Iterable[int], tails: Iterable[int]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    mine = (tuple(sorted(heads)), tuple(sorted(tails)))
    partner = _flip_sets(r, *mine)
    if _key_rank(partner) < _key_rank(mine):
        return partner
    if _key_rank(partner) == _key_rank(mine) and partner != mine:
        raise RuntimeError(f"flip tie between distinct keys {mine} and {partner}")
    return mine


def _canonical_key_sets(
    images: Sequence[int],
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Lean pipeline: cycles -> prune -> chop -> untangle -> reduced key."""
    cycles = _cycles_of_images(images)
    pruned = _prune_cycles(cycles, None)
    transpositions = _chop_cycles(pruned, None)
    arrows = _untangle([_arrow_of_transposition(t) for t in transpositions], None)
    r = len(images) // 2
    return _reduce_sets(r, (h for _, h in arrows), (t for t, _ in arrows))


# --- public operations -------------------------------------------------------


def prune(
    cycles: Sequence[Sequence[int]],
) -> tuple[tuple[int, ...], ...]:
    """Remove cyclically adjacent equal-parity points from every cycle.

    Each removal multiplies the permutation by the transposition of the
    offending pair, a norm-preserving move.  Cycles that shrink to a
    single point are dropped.
    """
    return tuple(tuple(c) for c in _prune_cycles([list(c) for c in cycles], None))


def chop(cycles: Sequence[Sequence[int]]) -> tuple[tuple[int, int], ...]:
    """Split pruned cycles into disjoint transpositions.

    Raises ValueError when a cycle still has an equal-parity adjacency.
    """
    return tuple(_chop_cycles([list(c) for c in cycles], None))


def exchange_heads(
    config: ArrowConfiguration, a: Arrow, b: Arrow
) -> ArrowConfiguration:
    """Swap the heads of two arrows of the configuration.

    (t1 -> h1, t2 -> h2) becomes (t1 -> h2, t2 -> h1); one or both arrows
    may be loops.  Realized by the norm-preserving right multiplier
    (2*h1-1, 2*h2-1)(2*t1, 2*t2).
    """
    if a not in config.arrows or b not in config.arrows:
        raise ValueError("both arrows must belong to the configuration")
    if a == b:
        raise ValueError("cannot exchange an arrow with itself")
    new = set(config.arrows) - {a, b}
    new.add(Arrow(a.tail, b.head))
    new.add(Arrow(b.tail, a.head))
    return ArrowConfiguration(config.r, frozenset(new))


def flip(config: ArrowConfiguration) -> ArrowConfiguration:
    """Reverse every arrow, drop every loop, and loop every free subsystem.

    Corresponds to composing with the global transpose followed by a
    norm-preserving correction; flipping twice is the identity.
    """
    if not config.is_disjoint():
        raise ValueError("flip requires a disjoint configuration")
    new: set[Arrow] = set()
    for a in config.arrows:
        if not a.is_loop:
            new.add(Arrow(a.head, a.tail))
    for k in config.free:
        new.add(Arrow(k, k))
    return ArrowConfiguration(config.r, frozenset(new))


def as_permutation(config: ArrowConfiguration) -> Permutation:
    """Product of the transpositions encoded by the arrows.

    For a disjoint configuration the order is irrelevant; chained but
    valid configurations compose in ascending tail order.
    """
    transpositions = [
        _transposition_of_arrow(a.tail, a.head) for a in config.sorted_arrows()
    ]
    return permutation_from_cycles(transpositions, 2 * config.r)


def normal_form(sigma: Permutation) -> ArrowConfiguration:
    """Disjoint arrow configuration equivalent to sigma.

    Pipeline: disjoint cycles, prune, chop, read off arrows, then exchange
    heads (lowest tail first) until no arrow's head is another's tail.
    The result differs from sigma by a norm-preserving right factor.
    """
    cycles = _cycles_of_images(sigma.images)
    pruned = _prune_cycles(cycles, None)
    transpositions = _chop_cycles(pruned, None)
    arrows = _untangle([_arrow_of_transposition(t) for t in transpositions], None)
    return ArrowConfiguration(
        sigma.subsystems, frozenset(Arrow(t, h) for t, h in arrows)
    )


def canonical_key(sigma: Permutation) -> CanonicalKey:
    """Flip-reduced (heads, tails) pair of sigma's disjoint configuration.

    Two permutations of equal degree share a key exactly when one is the
    other times a norm-preserving permutation on the right.
    """
    heads, tails = _canonical_key_sets(sigma.images)
    return CanonicalKey(sigma.subsystems, heads, tails)


def key_of_configuration(config: ArrowConfiguration) -> CanonicalKey:
    heads, tails = _reduce_sets(config.r, config.heads, config.tails)
    return CanonicalKey(config.r, heads, tails)


def equivalent(sigma: Permutation, tau: Permutation) -> bool:
    """True when sigma and tau define the same separability criterion.

    Computes both canonical keys and, independently, the parity membership
    test on tau^-1 * sigma; the two routes must agree or a RuntimeError is
    raised.
    """
    from .normgroup import is_norm_preserving

    if sigma.degree != tau.degree:
        raise ValueError(f"degree mismatch: {sigma.degree} vs {tau.degree}")
    by_key = canonical_key(sigma) == canonical_key(tau)
    by_parity = is_norm_preserving(compose(inverse(tau), sigma))
    if by_key != by_parity:
        raise RuntimeError(
            "internal error: canonical keys and the parity membership test "
            f"disagree for {sigma} and {tau}"
        )
    return by_key


def canonicalize(sigma: Permutation) -> CanonicalizationTrace:
    """Full canonicalization with a step-by-step rewrite trace."""
    steps: list[RewriteStep] = []
    cycles = _cycles_of_images(sigma.images)
    input_cycles = tuple(tuple(c) for c in cycles)
    pruned = _prune_cycles(cycles, steps)
    transpositions = _chop_cycles(pruned, steps)
    arrows = [_arrow_of_transposition(t) for t in transpositions]
    steps.append(
        RewriteStep(
            rule="read-arrows",
            detail="read arrows off the transpositions",
            multiplier=(),
            state=_render_arrows(arrows),
        )
    )
    final = _untangle(arrows, steps)
    config = ArrowConfiguration(
        sigma.subsystems, frozenset(Arrow(t, h) for t, h in final)
    )
    return CanonicalizationTrace(
        degree=sigma.degree,
        input_cycles=input_cycles,
        steps=tuple(steps),
        configuration=config,
        key=key_of_configuration(config),
    )
