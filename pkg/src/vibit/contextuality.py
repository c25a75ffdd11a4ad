"""Context hypergraphs, admissible value assignments, and gadget analysis.

A hypergraph is a set of observables (vertices) plus size-n contexts; a value
assignment maps observables to 0, 1, or undefined.  Admissibility is the pair
of local rules

* exclusivity: a 1 in a context forces 0 on every other member, and
* completeness: n-1 zeros in a context force a 1 on the remaining member.

``propagate`` runs these rules to a fixpoint or to a contradiction (a context
holding two 1s or all 0s).  Zeros flood eagerly; 1-creating completeness
firings are applied one at a time in context declaration order, which makes
derivations reproducible and makes the built-in gadget runs land on the same
violated contexts that the admissibility arguments for the shipped hypergraph
exhibit.

Assignments are plain dicts ``{label: 0|1}``; absent labels are undefined.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import DimError, FormatError, InvalidQuery
from .linalg import EPS_MAT, as_amplitudes

ZERO = 0
ONE = 1


def label_key(label: str):
    """Natural sort key: numeric labels in numeric order, then alphabetic."""
    return (0, int(label), "") if label.isdigit() else (1, 0, label)


@dataclass(frozen=True)
class ContextHypergraph:
    """Vertices plus size-``rank`` contexts, both in declaration order."""

    rank: int
    vertices: tuple[str, ...]
    contexts: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        seen = set(self.vertices)
        if len(seen) != len(self.vertices):
            raise InvalidQuery("duplicate vertex label")
        in_some_context: set[str] = set()
        for ctx in self.contexts:
            if len(ctx) != self.rank or len(set(ctx)) != self.rank:
                raise InvalidQuery(f"context {ctx} must have {self.rank} distinct members")
            for x in ctx:
                if x not in seen:
                    raise KeyError(x)
            in_some_context.update(ctx)
        missing = seen - in_some_context
        if missing:
            raise InvalidQuery(f"vertices outside every context: {sorted(missing)}")

    def contexts_with(self, label: str) -> list[tuple[str, ...]]:
        if label not in self.vertices:
            raise KeyError(label)
        return [c for c in self.contexts if label in c]

    def without_vertices(self, removed: Iterable[str]) -> "ContextHypergraph":
        """Delete vertices together with every context containing one of them."""
        gone = set(removed)
        for x in gone:
            if x not in self.vertices:
                raise KeyError(x)
        kept_ctx = tuple(c for c in self.contexts if not (set(c) & gone))
        kept_vs = tuple(v for v in self.vertices
                        if v not in gone and any(v in c for c in kept_ctx))
        return ContextHypergraph(self.rank, kept_vs, kept_ctx)


@dataclass(frozen=True)
class Violation:
    context: tuple[str, ...]
    kind: str  # "exclusivity" | "completeness" | "all-zero"
    detail: str


@dataclass(frozen=True)
class TraceStep:
    rule: str  # "seed" | "exclusivity" | "completeness"
    context: tuple[str, ...] | None
    vertex: str
    value: int


@dataclass(frozen=True)
class Fixpoint:
    assignment: dict[str, int]
    trace: tuple[TraceStep, ...]


@dataclass(frozen=True)
class Contradiction:
    context: tuple[str, ...]
    kind: str  # "all-zero" | "two-ones"
    assignment: dict[str, int]
    trace: tuple[TraceStep, ...]


class GadgetClass(enum.Enum):
    TIFS = "TIFS"
    TITS = "TITS"
    BOTH = "Both"
    NEITHER = "Neither"


def _normalize_assignment(h: ContextHypergraph, v: Mapping[str, int | None]) -> dict[str, int]:
    out: dict[str, int] = {}
    for label, value in v.items():
        if label not in h.vertices:
            raise KeyError(label)
        if value is None:
            continue
        if value not in (ZERO, ONE):
            raise InvalidQuery(f"value for {label!r} must be 0, 1, or None")
        out[label] = value
    return out


def check_admissible(h: ContextHypergraph, v: Mapping[str, int | None]) -> list[Violation]:
    """Closure-style admissibility check; one violation per offending context.

    A context passes when: it holds at most one 1; if it holds a 1 the other
    members are all 0; it is not all 0; and n-1 zeros are completed by a 1.
    Partially propagated assignments (a 1 with undefined siblings, or n-1
    zeros with the last member undefined) are therefore flagged.
    """
    vv = _normalize_assignment(h, v)
    out: list[Violation] = []
    for ctx in h.contexts:
        ones = [x for x in ctx if vv.get(x) == ONE]
        zeros = [x for x in ctx if vv.get(x) == ZERO]
        if len(ones) >= 2:
            out.append(Violation(ctx, "exclusivity", f"two 1s: {ones}"))
        elif len(ones) == 1 and len(zeros) != len(ctx) - 1:
            out.append(Violation(ctx, "exclusivity",
                                  f"1 at {ones[0]} with undefined siblings"))
        elif len(zeros) == len(ctx):
            out.append(Violation(ctx, "all-zero", "every member is 0"))
        elif len(zeros) == len(ctx) - 1 and not ones:
            missing = next(x for x in ctx if x not in vv)
            out.append(Violation(ctx, "completeness",
                                  f"{missing} must be 1 but is undefined"))
    return out


def _seed_violation(h: ContextHypergraph, v: Mapping[str, int]) -> Violation | None:
    for ctx in h.contexts:
        ones = [x for x in ctx if v.get(x) == ONE]
        if len(ones) >= 2:
            return Violation(ctx, "exclusivity", f"two 1s: {ones}")
        if all(v.get(x) == ZERO for x in ctx):
            return Violation(ctx, "all-zero", "every member is 0")
    return None


def propagate(h: ContextHypergraph, seed: Mapping[str, int | None]) -> Fixpoint | Contradiction:
    """Run admissibility rules from ``seed`` to a fixpoint or contradiction.

    The seed must not itself contain a violated context.  Zeros coming from
    exclusivity are applied to closure before any completeness firing, and
    completeness fires on the first eligible context in declaration order;
    the first context found violated (two 1s, or all 0s) is reported together
    with the full derivation trace.
    """
    v = _normalize_assignment(h, seed)
    bad = _seed_violation(h, v)
    if bad is not None:
        raise InvalidQuery(f"seed already violates {bad.context}: {bad.detail}")
    trace: list[TraceStep] = [
        TraceStep("seed", None, x, val) for x, val in sorted(v.items(), key=lambda k: label_key(k[0]))
    ]
    while True:
        fired = True
        while fired:  # exclusivity closure
            fired = False
            for ctx in h.contexts:
                ones = [x for x in ctx if v.get(x) == ONE]
                if len(ones) >= 2:
                    return Contradiction(ctx, "two-ones", dict(v), tuple(trace))
                if len(ones) == 1:
                    for y in ctx:
                        if y != ones[0] and y not in v:
                            v[y] = ZERO
                            trace.append(TraceStep("exclusivity", ctx, y, ZERO))
                            fired = True
        for ctx in h.contexts:  # first completeness firing in declaration order
            zeros = [x for x in ctx if v.get(x) == ZERO]
            if len(zeros) == len(ctx):
                return Contradiction(ctx, "all-zero", dict(v), tuple(trace))
            if len(zeros) == len(ctx) - 1:
                rest = [x for x in ctx if x not in v]
                if rest:
                    v[rest[0]] = ONE
                    trace.append(TraceStep("completeness", ctx, rest[0], ONE))
                    break
        else:
            return Fixpoint(dict(v), tuple(trace))


def _forces_contradiction(h: ContextHypergraph, seed: dict[str, int]) -> bool:
    if _seed_violation(h, seed) is not None:
        return True
    return isinstance(propagate(h, seed), Contradiction)


def classify_gadget(h: ContextHypergraph, a: str, b: str) -> GadgetClass:
    """Classify what v(a)=1 forces on b under admissibility propagation.

    TIFS: v(a)=1, v(b)=1 contradicts (so b cannot be 1).
    TITS: v(a)=1, v(b)=0 contradicts (so b cannot be 0).
    Both together certify that b is value indefinite once a is preselected.
    """
    if a == b:
        raise InvalidQuery("gadget query requires two distinct observables")
    for x in (a, b):
        if x not in h.vertices:
            raise KeyError(x)
    tifs = _forces_contradiction(h, {a: ONE, b: ONE})
    tits = _forces_contradiction(h, {a: ONE, b: ZERO})
    if tifs and tits:
        return GadgetClass.BOTH
    if tifs:
        return GadgetClass.TIFS
    if tits:
        return GadgetClass.TITS
    return GadgetClass.NEITHER


def enumerate_two_valued_states(h: ContextHypergraph) -> list[dict[str, int]]:
    """All total assignments with exactly one 1 per context.

    Backtracking over contexts: repeatedly take the first context without a 1
    and branch over which member carries it, zeroing the siblings.  Output is
    sorted by the value tuple over label-sorted vertices.
    """
    order = sorted(h.vertices, key=label_key)
    states: list[dict[str, int]] = []
    v: dict[str, int] = {}

    def place(x: str, val: int, undo: list[str]) -> bool:
        if x in v:
            return v[x] == val
        v[x] = val
        undo.append(x)
        return True

    def choose():
        ctx = next((c for c in h.contexts if not any(v.get(x) == ONE for x in c)), None)
        if ctx is None:
            # every context holds a 1, and exclusivity zeroed all siblings
            states.append({x: v[x] for x in h.vertices})
            return
        if any(x not in v for x in ctx):
            for m in sorted(ctx, key=label_key):
                if v.get(m) == ZERO:
                    continue
                undo: list[str] = []
                ok = place(m, ONE, undo)
                for c in h.contexts:
                    if not ok:
                        break
                    if m in c:
                        for y in c:
                            ok = ok and (y == m or place(y, ZERO, undo))
                if ok and all(
                    any(v.get(x) != ZERO for x in c)
                    for c in h.contexts
                    if any(z in c for z in undo)
                ):
                    choose()
                for y in undo:
                    del v[y]
        # a fully zeroed context with no 1 is a dead branch: fall through

    choose()
    states.sort(key=lambda s: tuple(s[x] for x in order))
    return states


def is_unital(h: ContextHypergraph) -> tuple[bool, dict[str, int | None]]:
    """Whether every vertex takes value 1 in some two-valued state.

    Returns the flag plus a witness map from vertex to the index of a state
    (in ``enumerate_two_valued_states`` order) assigning it 1, or None.
    """
    states = enumerate_two_valued_states(h)
    witness: dict[str, int | None] = {}
    for x in h.vertices:
        witness[x] = next((i for i, s in enumerate(states) if s[x] == ONE), None)
    return all(w is not None for w in witness.values()), witness


@dataclass(frozen=True)
class Coordinatization:
    """Partial assignment of vectors to vertices (a faithful representation
    when every co-context pair is orthogonal)."""

    vectors: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        frozen = {}
        for label, vec in self.vectors.items():
            arr = np.array(as_amplitudes(vec), dtype=complex)
            arr.setflags(write=False)
            frozen[label] = arr
        object.__setattr__(self, "vectors", frozen)


def verify_coordinatization(
    h: ContextHypergraph, coord: Coordinatization, tol: float = EPS_MAT
) -> list[Violation]:
    """Flag coordinatized co-context pairs that fail orthogonality."""
    out: list[Violation] = []
    for ctx in h.contexts:
        labelled = [x for x in ctx if x in coord.vectors]
        for i, x in enumerate(labelled):
            for y in labelled[i + 1:]:
                u, w = coord.vectors[x], coord.vectors[y]
                if u.shape != w.shape:
                    raise DimError(f"vectors for {x} and {y} have different dims")
                ip = abs(np.vdot(u, w))
                if ip >= tol:
                    out.append(Violation(ctx, "orthogonality",
                                          f"|<{x}|{y}>| = {ip:.3e}"))
    return out


# --- built-in hypergraph -----------------------------------------------------

_FIG4_CONTEXTS = (
    ("b", "2", "3"), ("3", "21", "23"), ("23", "29", "5"), ("5", "a", "4"),
    ("4", "10", "7"), ("7", "6", "b"), ("a", "1", "2"), ("5", "11", "9"),
    ("9", "8", "b"), ("4", "28", "22"), ("22", "19", "3"), ("22", "24", "25"),
    ("25", "35", "9"), ("7", "34", "27"), ("27", "26", "23"), ("10", "12", "13"),
    ("13", "31", "29"), ("28", "30", "15"), ("15", "14", "11"), ("15", "17", "1"),
    ("1", "16", "13"), ("19", "18", "16"), ("16", "32", "8"), ("6", "33", "17"),
    ("17", "20", "21"), ("25", "1", "27"),
)

# Completeness firings follow declaration order, so the two contexts that the
# gadget derivations exhibit as their all-zero witnesses are declared last:
# every other inference then lands before either of them is examined.
_WITNESSES = ({"7", "6", "b"}, {"3", "21", "23"})
_FIG4_ORDERED = tuple(
    c for c in _FIG4_CONTEXTS if set(c) not in _WITNESSES
) + (("7", "6", "b"), ("3", "21", "23"))

_FIG4_VERTICES = ("a", "b") + tuple(str(k) for k in range(1, 36))


def fig4_hypergraph() -> ContextHypergraph:
    """The built-in 37-observable hypergraph (26 three-element contexts)."""
    return ContextHypergraph(3, _FIG4_VERTICES, _FIG4_ORDERED)


def fig4_tifs() -> ContextHypergraph:
    """Sub-hypergraph with {29, 31} deleted: a true-implies-false gadget for
    b given v(a)=1."""
    return fig4_hypergraph().without_vertices({"29", "31"})


def fig4_tits() -> ContextHypergraph:
    """Sub-hypergraph with {10, 12} deleted: a true-implies-true gadget for
    b given v(a)=1."""
    return fig4_hypergraph().without_vertices({"10", "12"})


BUILTIN_HYPERGRAPHS = {
    "fig4": fig4_hypergraph,
    "fig4-tifs": fig4_tifs,
    "fig4-tits": fig4_tits,
}


def builtin_coordinatization() -> Coordinatization:
    from .constants import COORDINATIZATION

    return Coordinatization(dict(COORDINATIZATION))


# --- text format -------------------------------------------------------------


def format_hypergraph(h: ContextHypergraph) -> str:
    lines = [f"rank {h.rank}"]
    lines += [f"vertex {x}" for x in h.vertices]
    lines += ["context " + " ".join(c) for c in h.contexts]
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> ContextHypergraph:
    """Parse the line-oriented hypergraph format (``#`` starts a comment)."""
    rank: int | None = None
    vertices: list[str] = []
    contexts: list[tuple[str, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind, args = fields[0], fields[1:]
        if kind == "rank":
            if rank is not None:
                raise FormatError("duplicate rank line", lineno)
            if len(args) != 1 or not args[0].isdigit() or int(args[0]) < 2:
                raise FormatError("rank takes one integer >= 2", lineno)
            rank = int(args[0])
        elif kind == "vertex":
            if len(args) != 1:
                raise FormatError("vertex takes exactly one label", lineno)
            if args[0] in vertices:
                raise FormatError(f"duplicate vertex {args[0]!r}", lineno)
            vertices.append(args[0])
        elif kind == "context":
            if rank is None:
                raise FormatError("context before rank", lineno)
            if len(args) != rank or len(set(args)) != rank:
                raise FormatError(f"context needs {rank} distinct labels", lineno)
            for x in args:
                if x not in vertices:
                    raise FormatError(f"undeclared vertex {x!r}", lineno)
            contexts.append(tuple(args))
        else:
            raise FormatError(f"unknown directive {kind!r}", lineno)
    if rank is None:
        raise FormatError("missing rank line")
    try:
        return ContextHypergraph(rank, tuple(vertices), tuple(contexts))
    except (InvalidQuery, KeyError) as exc:
        raise FormatError(str(exc)) from exc
