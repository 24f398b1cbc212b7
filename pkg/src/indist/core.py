"""Domain types shared by the simulator and the inference engine.

Photons are labelled with single letters (``"A"``..``"D"`` by default).  A
distinguishability partition groups labels into blocks of mutually identical
photons; a mixture model is a convex combination of partitions.  Mode
occupations are plain tuples of ints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

LABELS: tuple[str, ...] = ("A", "B", "C", "D")
CHAIN_EDGES: tuple[str, ...] = ("AB", "BC", "CD")

ModeOccupation = tuple[int, ...]


class IndistError(Exception):
    """Base class for domain errors."""


class OutOfRangeOverlap(IndistError, ValueError):
    pass


class OutOfRangeProbability(IndistError, ValueError):
    pass


class DuplicateEdge(IndistError, ValueError):
    pass


class SelfLoop(IndistError, ValueError):
    pass


class MissingEdge(IndistError, KeyError):
    pass


class LengthMismatch(IndistError, ValueError):
    pass


class InvalidMixture(IndistError, ValueError):
    pass


def clamp_unit(x: float) -> tuple[float, bool]:
    """Clamp ``x`` to [0, 1]; the flag is True when clamping changed it."""
    if x < 0.0:
        return 0.0, True
    if x > 1.0:
        return 1.0, True
    return float(x), False


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


ROUNDING_SLACK = 1e-12


@dataclass(frozen=True)
class Interval:
    """Closed sub-interval of [0, 1].

    ``raw_lo``/``raw_hi`` keep the endpoints before clamping so callers can
    see when a formula produced e.g. a negative lower bound.
    """

    lo: float
    hi: float
    raw_lo: float | None = None
    raw_hi: float | None = None

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def clamped(cls, lo: float, hi: float) -> "Interval | ModelInconsistent":
        lo_c, _ = clamp_unit(lo)
        hi_c, _ = clamp_unit(hi)
        if lo_c > hi_c:
            if lo_c - hi_c > ROUNDING_SLACK:
                return ModelInconsistent(float(lo), float(hi))
            lo_c = hi_c  # rounding noise on a degenerate interval
        return cls(lo_c, hi_c, float(lo), float(hi))

    @property
    def was_clamped(self) -> bool:
        return (self.raw_lo is not None and self.raw_lo != self.lo) or (
            self.raw_hi is not None and self.raw_hi != self.hi
        )

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def intersect(self, other: "Interval") -> "Interval | ModelInconsistent":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            if lo - hi > ROUNDING_SLACK:
                return ModelInconsistent(lo, hi)
            lo = hi
        return Interval(lo, hi)

    def as_tuple(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    def __iter__(self):
        yield self.lo
        yield self.hi


@dataclass(frozen=True)
class ModelInconsistent:
    """Outcome returned instead of an Interval when lower > upper.

    Not an exception: data that cannot come from the assumed state model is a
    legitimate result.
    """

    raw_lo: float
    raw_hi: float

    def __bool__(self) -> bool:
        return False


# ---------------------------------------------------------------------------
# Overlap graph
# ---------------------------------------------------------------------------


def _edge_key(pair: str | Sequence[str]) -> tuple[str, str]:
    if isinstance(pair, str):
        if len(pair) != 2:
            raise ValueError(f"edge name must have two labels, got {pair!r}")
        u, v = pair[0], pair[1]
    else:
        u, v = pair
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    value: float
    sigma: float = 0.0
    clamped: bool = False

    @property
    def name(self) -> str:
        return self.u + self.v


@dataclass(frozen=True)
class OverlapGraph:
    """Photon vertices plus measured overlap edges.

    Edges are stored as given (duplicates and self-loops included) so that
    :func:`validate_graph` can report them; lookups use the first match.
    """

    vertices: tuple[str, ...] = LABELS
    edges: tuple[Edge, ...] = ()

    @classmethod
    def from_edges(
        cls,
        values: Mapping[str, float] | Iterable[tuple[str, float]],
        sigmas: Mapping[str, float] | None = None,
        vertices: Sequence[str] = LABELS,
        clamp: bool = False,
    ) -> "OverlapGraph":
        items = values.items() if isinstance(values, Mapping) else values
        sigmas = sigmas or {}
        edges = []
        for name, val in items:
            name = name if isinstance(name, str) else "".join(name)
            u, v = name[0], name[1]
            sig = float(sigmas.get(name, 0.0))
            flagged = False
            if clamp:
                val, flagged = clamp_unit(val)
            edges.append(Edge(u, v, float(val), sig, flagged))
        return cls(tuple(vertices), tuple(edges))

    @classmethod
    def chain(cls, r_ab: float, r_bc: float, r_cd: float, sigmas=None, clamp=False):
        """The P4 graph A-B-C-D."""
        vals = {"AB": r_ab, "BC": r_bc, "CD": r_cd}
        sig = dict(zip(CHAIN_EDGES, sigmas)) if sigmas is not None else None
        return cls.from_edges(vals, sig, clamp=clamp)

    def find(self, pair) -> Edge | None:
        key = _edge_key(pair)
        for e in self.edges:
            if _edge_key((e.u, e.v)) == key:
                return e
        return None

    def overlap(self, pair) -> float:
        e = self.find(pair)
        if e is None:
            raise MissingEdge(f"edge {pair!r} not in graph")
        return e.value

    def sigma(self, pair) -> float:
        e = self.find(pair)
        if e is None:
            raise MissingEdge(f"edge {pair!r} not in graph")
        return e.sigma

    def chain_values(self) -> tuple[float, float, float]:
        return tuple(self.overlap(p) for p in CHAIN_EDGES)  # type: ignore[return-value]

    def chain_sigmas(self) -> tuple[float, float, float]:
        return tuple(self.sigma(p) for p in CHAIN_EDGES)  # type: ignore[return-value]


def validate_graph(g: OverlapGraph) -> None:
    seen = set()
    vertices = set(g.vertices)
    if len(vertices) != len(g.vertices):
        raise ValueError("photon labels must be distinct")
    for e in g.edges:
        if e.u == e.v:
            raise SelfLoop(f"self-loop on {e.u}")
        if e.u not in vertices or e.v not in vertices:
            raise MissingEdge(f"edge {e.name} references unknown vertex")
        if not (0.0 <= e.value <= 1.0) or math.isnan(e.value):
            raise OutOfRangeOverlap(f"overlap {e.name}={e.value} outside [0, 1]")
        if e.sigma < 0:
            raise ValueError(f"negative sigma on {e.name}")
        key = _edge_key((e.u, e.v))
        if key in seen:
            raise DuplicateEdge(f"duplicate edge {e.name}")
        seen.add(key)


# ---------------------------------------------------------------------------
# Partitions and mixtures
# ---------------------------------------------------------------------------

_RENDER_LETTERS = "XYZWVUTS"


@dataclass(frozen=True)
class DistinguishabilityPartition:
    """Blocks of mutually identical photons, in canonical order.

    Canonical form: labels sorted within each block by their position in
    ``labels``, blocks sorted by their smallest member.
    """

    blocks: tuple[tuple[str, ...], ...]
    labels: tuple[str, ...] = LABELS

    def __post_init__(self):
        order = {lab: i for i, lab in enumerate(self.labels)}
        flat = [x for b in self.blocks for x in b]
        if sorted(flat, key=order.__getitem__) != list(self.labels) or any(not b for b in self.blocks):
            raise ValueError(f"blocks {self.blocks} do not partition {self.labels}")
        canon = tuple(
            sorted((tuple(sorted(b, key=order.__getitem__)) for b in self.blocks), key=lambda b: order[b[0]])
        )
        object.__setattr__(self, "blocks", canon)

    def block_of(self, label: str) -> int:
        for i, b in enumerate(self.blocks):
            if label in b:
                return i
        raise KeyError(label)

    def identical(self, u: str, v: str) -> bool:
        return self.block_of(u) == self.block_of(v)

    @property
    def is_fully_indistinguishable(self) -> bool:
        return len(self.blocks) == 1

    def render(self) -> str:
        return "".join(_RENDER_LETTERS[self.block_of(lab)] for lab in self.labels)

    def __str__(self) -> str:
        return self.render()


def canonical_partition(assignment: str, labels: Sequence[str] = LABELS) -> DistinguishabilityPartition:
    """Partition from a class-assignment string such as ``"XXYY"``."""
    if len(assignment) != len(labels):
        raise LengthMismatch(f"{assignment!r} has {len(assignment)} letters for {len(labels)} photons")
    groups: dict[str, list[str]] = {}
    for letter, lab in zip(assignment, labels):
        groups.setdefault(letter, []).append(lab)
    return DistinguishabilityPartition(tuple(tuple(g) for g in groups.values()), tuple(labels))


def render(p: DistinguishabilityPartition) -> str:
    return p.render()


def _set_partitions(items: list[str]) -> Iterator[list[list[str]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def all_partitions(labels: Sequence[str] = LABELS) -> list[DistinguishabilityPartition]:
    """Every set partition of ``labels`` (Bell number many), sorted by rendering."""
    parts = {
        DistinguishabilityPartition(tuple(tuple(b) for b in p), tuple(labels))
        for p in _set_partitions(list(labels))
    }
    return sorted(parts, key=lambda p: p.render())


@dataclass(frozen=True)
class MixtureModel:
    """Convex mixture of partitions (the classical state model).

    Zero-weight terms are dropped on construction.
    """

    terms: tuple[tuple[float, DistinguishabilityPartition], ...]
    tol: float = field(default=1e-12, compare=False)

    def __post_init__(self):
        terms = tuple((float(w), p) for w, p in self.terms if w != 0.0)
        if any(w < 0 for w, _ in terms):
            raise InvalidMixture("negative mixture weight")
        total = math.fsum(w for w, _ in terms)
        if abs(total - 1.0) > self.tol:
            raise InvalidMixture(f"weights sum to {total!r}")
        parts = [p for _, p in terms]
        if len(set(parts)) != len(parts):
            raise InvalidMixture("repeated partition in mixture")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def single(cls, p: DistinguishabilityPartition | str) -> "MixtureModel":
        if isinstance(p, str):
            p = canonical_partition(p)
        return cls(((1.0, p),))

    @classmethod
    def from_weights(cls, weights: Mapping[str, float], labels=LABELS, tol=1e-12) -> "MixtureModel":
        merged: dict[DistinguishabilityPartition, float] = {}
        for name, w in weights.items():
            p = canonical_partition(name, labels)
            merged[p] = merged.get(p, 0.0) + w
        return cls(tuple((w, p) for p, w in merged.items()), tol=tol)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.terms[0][1].labels

    def weight(self, p: DistinguishabilityPartition | str) -> float:
        if isinstance(p, str):
            p = canonical_partition(p, self.labels)
        return math.fsum(w for w, q in self.terms if q == p)

    @property
    def c1(self) -> float:
        """Weight of the fully indistinguishable component."""
        return math.fsum(w for w, p in self.terms if p.is_fully_indistinguishable)

    def pair_overlap(self, u: str, v: str) -> float:
        """Probability that photons u and v are identical, i.e. their overlap."""
        return math.fsum(w for w, p in self.terms if p.identical(u, v))

    def overlaps(self) -> dict[str, float]:
        return {u + v: self.pair_overlap(u, v) for u, v in combinations(self.labels, 2)}


# ---------------------------------------------------------------------------
# Distributions over mode occupations
# ---------------------------------------------------------------------------


class OutputDistribution(Mapping):
    """Immutable probability map over outcome tuples.

    Missing outcomes have probability 0.  Iteration is in lexicographic order
    of the outcome tuples.
    """

    __slots__ = ("_probs",)

    def __init__(self, probs: Mapping[tuple, float] | Iterable[tuple[tuple, float]] = ()):
        items = probs.items() if isinstance(probs, Mapping) else probs
        acc: dict[tuple, float] = {}
        for k, p in items:
            if p < 0:
                if p < -1e-14:
                    raise ValueError(f"negative probability {p} for {k}")
                p = 0.0
            acc[tuple(k)] = acc.get(tuple(k), 0.0) + float(p)
        self._probs = MappingProxyType(dict(sorted(acc.items())))

    def __getitem__(self, key) -> float:
        return self._probs.get(tuple(key), 0.0)

    def __iter__(self):
        return iter(self._probs)

    def __len__(self) -> int:
        return len(self._probs)

    def __contains__(self, key) -> bool:
        return tuple(key) in self._probs

    def __repr__(self) -> str:
        return f"OutputDistribution({len(self)} outcomes, total={self.total():.12g})"

    def total(self) -> float:
        return math.fsum(self._probs.values())

    def support(self, tol: float = 0.0) -> set:
        return {k for k, p in self._probs.items() if p > tol}

    def normalized(self) -> "OutputDistribution":
        t = self.total()
        if t <= 0:
            raise ValueError("cannot normalize a zero-mass distribution")
        return OutputDistribution({k: p / t for k, p in self._probs.items()})

    def scaled(self, s: float) -> "OutputDistribution":
        return OutputDistribution({k: s * p for k, p in self._probs.items()})

    def pruned(self, tol: float = 0.0) -> "OutputDistribution":
        return OutputDistribution({k: p for k, p in self._probs.items() if p > tol})

    def __add__(self, other: "OutputDistribution") -> "OutputDistribution":
        acc = dict(self._probs)
        for k, p in other.items():
            acc[k] = acc.get(k, 0.0) + p
        return OutputDistribution(acc)

    def l1(self, other: Mapping) -> float:
        keys = set(self) | set(other)
        return math.fsum(abs(self[k] - other.get(k, 0.0)) for k in keys)


def photon_number(occ: Sequence[int]) -> int:
    return int(sum(occ))
