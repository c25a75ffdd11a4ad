"""Generation pipeline: prepared states, Born sampling, ternary-to-binary output.

The simulator reproduces the *probability structure* of the physical protocol
with a seeded classical PRNG.  The claims that motivate the protocol --
value indefiniteness of the measured observable as a physical fact, and
maximal unpredictability of the infinite output sequence -- are not
reproducible by any classical simulation; what this package certifies at desk
scale is (i) the analytic outcome distributions, (ii) the hypergraph gadget
certification in :mod:`vibit.contextuality`, and (iii) byte-level determinism
of the sampled streams under a fixed seed.

Streams are sampled segment-by-segment with per-segment generators derived
from ``(seed, segment_index)``, so disjoint segments can be produced in any
order (or in parallel) without changing the concatenated result.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .beamsplitter import fig5_network, network_unitary
from .constants import UX, UX_MERGED
from .errors import (
    AlphabetError,
    DimError,
    FormatError,
    InvalidDistribution,
    NotAContext,
)
from .linalg import (
    Projector,
    StateVector,
    UnitaryMatrix,
    as_amplitudes,
    compose,
    is_orthonormal_context,
    projector_from_state,
)

TERNARY = "ternary"
BINARY = "binary"

MODE_MORPHISM = "morphism"
MODE_MERGE = "merge"

GENERATOR_NAME = "pcg64-seedseq"
SEGMENT = 1 << 16

DIST_TOL = 1e-12


@dataclass(frozen=True)
class Distribution:
    """Target outcome probabilities for a prepared state: each p in [0, 1),
    summing to 1, over at least three outcomes."""

    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.probs) < 3:
            raise InvalidDistribution("need at least three outcomes")
        for p in self.probs:
            if not np.isfinite(p) or p < 0.0 or p >= 1.0:
                raise InvalidDistribution(f"probability {p!r} outside [0, 1)")
        if abs(sum(self.probs) - 1.0) > DIST_TOL:
            raise InvalidDistribution(f"probabilities sum to {sum(self.probs)!r}")

    @property
    def dim(self) -> int:
        return len(self.probs)


def build_vi_state(d: Distribution) -> StateVector:
    """Prepared state with real nonnegative amplitudes sqrt(p_i)."""
    return StateVector(np.sqrt(np.asarray(d.probs, dtype=float)).astype(complex))


@dataclass(frozen=True)
class MeasurementSetup:
    """Prepared state, instrument unitary, and detector basis.

    ``basis is None`` means the Cartesian standard basis; otherwise the rows
    of ``basis`` are the detector vectors, in symbol order.
    """

    prepared: StateVector
    operator: UnitaryMatrix
    basis: UnitaryMatrix | None = None
    label: str = ""

    def __post_init__(self):
        if self.prepared.dim != self.operator.dim:
            raise DimError("prepared state and operator dims differ")
        if self.basis is not None and self.basis.dim != self.operator.dim:
            raise DimError("basis and operator dims differ")

    @property
    def dim(self) -> int:
        return self.operator.dim


def standardized(setup: MeasurementSetup) -> MeasurementSetup:
    """Equivalent setup measured in the standard basis (basis folded into the
    instrument)."""
    if setup.basis is None:
        return setup
    folded = UnitaryMatrix(setup.basis.entries.conj() @ setup.operator.entries)
    return MeasurementSetup(setup.prepared, folded, None, setup.label)


def outcome_distribution(setup: MeasurementSetup) -> np.ndarray:
    """Analytic outcome probabilities |<f_i| operator |prepared>|^2."""
    out = setup.operator.entries @ setup.prepared.amps
    if setup.basis is not None:
        out = setup.basis.entries.conj() @ out
    p = np.abs(out) ** 2
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise DimError(f"outcome probabilities sum to {total!r}")
    return p


def universal_measurement_check(d: Distribution, u: UnitaryMatrix, tol: float = 1e-10) -> bool:
    """Check that one instrument reproduces ``d`` under both protocol variants.

    Variant one measures the transformed state in the basis of transformed
    detector vectors (columns of ``u``); variant two pre-processes the state
    with the inverse instrument and reads the standard detectors.  Both must
    match ``d`` within ``tol``; any unitary passes analytically.
    """
    psi = build_vi_state(d).amps
    if u.dim != len(psi):
        raise DimError("distribution and unitary dims differ")
    out = u.entries @ psi
    p1 = np.abs(u.entries.conj().T @ out) ** 2          # <f_i|U psi>, f_i = U e_i
    p2 = np.abs(u.entries @ (u.entries.conj().T @ psi)) ** 2
    target = np.asarray(d.probs)
    return bool(np.max(np.abs(p1 - target)) < tol and np.max(np.abs(p2 - target)) < tol)


def merge_postprocess(u_post: UnitaryMatrix, setup: MeasurementSetup) -> MeasurementSetup:
    """Compose a further instrument after the setup's own (state and detector
    basis unchanged)."""
    if u_post.dim != setup.dim:
        raise DimError("post-processor dim differs from setup dim")
    return MeasurementSetup(
        setup.prepared,
        compose(u_post, setup.operator),
        setup.basis,
        f"{setup.label}+merge" if setup.label else "merged",
    )


def merged_complement_projector(context, keep: int) -> Projector:
    """Projector onto the span of a context minus its kept member.

    The result has rank n-1, annihilates the kept vector, and sums with the
    kept member's projector to the identity.
    """
    vectors = [as_amplitudes(v) for v in context]
    if not is_orthonormal_context(vectors):
        raise NotAContext("vectors do not form an orthonormal context")
    if not 0 <= keep < len(vectors):
        raise DimError(f"keep index {keep} outside context of size {len(vectors)}")
    dim = vectors[0].shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    for idx, vec in enumerate(vectors):
        if idx != keep:
            total += projector_from_state(vec).entries
    return Projector(total)


def merging_rotation(amplitudes, ports: tuple[int, int] = (1, 2)) -> UnitaryMatrix:
    """Two-port rotation sending the amplitude pair at ``ports`` to
    (combined, 0), i.e. folding the second port into the first."""
    amps = as_amplitudes(amplitudes)
    i, j = ports
    c1, c2 = amps[i], amps[j]
    r = float(np.hypot(abs(c1), abs(c2)))
    m = np.eye(len(amps), dtype=complex)
    if r > 0.0:
        m[i, i] = np.conj(c1) / r
        m[i, j] = np.conj(c2) / r
        m[j, i] = -c2 / r
        m[j, j] = c1 / r
    return UnitaryMatrix(m)


# --- symbol streams -----------------------------------------------------------


@dataclass(frozen=True)
class SymbolStream:
    alphabet: str  # TERNARY | BINARY
    symbols: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.asarray(self.symbols, dtype=np.uint8)
        limit = 3 if self.alphabet == TERNARY else 2
        if self.alphabet not in (TERNARY, BINARY):
            raise AlphabetError(f"unknown alphabet {self.alphabet!r}")
        if arr.size and int(arr.max(initial=0)) >= limit:
            raise AlphabetError(f"symbol outside {self.alphabet} alphabet")
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    def __len__(self):
        return int(self.symbols.size)

    def counts(self) -> dict[str, int]:
        width = 3 if self.alphabet == TERNARY else 2
        bc = np.bincount(self.symbols, minlength=width)
        return {str(s): int(bc[s]) for s in range(width)}


def _segment_generator(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


def sample(setup: MeasurementSetup, count: int, seed: int) -> SymbolStream:
    """Draw ``count`` i.i.d. ternary symbols from the setup's analytic
    distribution by inverse CDF; identical (setup, count, seed) give identical
    streams, and zero-probability outcomes are never drawn."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if setup.dim != 3:
        raise DimError("symbol sampling is defined for three-outcome setups")
    probs = outcome_distribution(setup)
    edges = np.cumsum(probs)
    edges[-1] = 1.0  # guard against accumulated rounding in the last bin
    out = np.empty(count, dtype=np.uint8)
    for seg_index, start in enumerate(range(0, count, SEGMENT)):
        k = min(SEGMENT, count - start)
        u = _segment_generator(seed, seg_index).random(k)
        out[start:start + k] = np.searchsorted(edges, u, side="right").astype(np.uint8)
    meta = {
        "seed": int(seed),
        "count": int(count),
        "setup": setup.label or "custom",
        "generator": GENERATOR_NAME,
        "segment": SEGMENT,
        "distribution": [float(p) for p in probs],
    }
    return SymbolStream(TERNARY, out, meta)


def apply_morphism(stream: SymbolStream) -> SymbolStream:
    """Alphabetic conversion 0 -> 1, 1 -> 0, 2 -> 0 (length preserved)."""
    if stream.alphabet != TERNARY:
        raise AlphabetError("morphism conversion expects a ternary stream")
    bits = (stream.symbols == 0).astype(np.uint8)
    meta = dict(stream.meta)
    meta["mode"] = MODE_MORPHISM
    return SymbolStream(BINARY, bits, meta)


# --- presets -------------------------------------------------------------------

PRESET_NAMES = ("Ux-a010", "Ux-a100", "merged-Eq6", "fig5")

_SWAP01 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)


def preset_setup(name: str) -> MeasurementSetup:
    """Built-in measurement setups.

    Ux-a010      prepare (0,1,0), instrument Ux, standard detectors
                 -> (1/2, 0, 1/2)
    Ux-a100      prepare (1,0,0), instrument Ux, detectors enumerated in the
                 published symbol order (the middle port, which carries
                 probability 1/2, reports symbol 0) -> (1/2, 1/4, 1/4)
    merged-Eq6   prepare (1,0,0), merged instrument -> (1/2, 1/2, 0)
    fig5         prepare the first rail of the built-in triangular network
                 -> (1/2, 1/4, 1/4)
    """
    if name == "Ux-a010":
        return MeasurementSetup(
            StateVector([0, 1, 0]), UnitaryMatrix(UX), None, name)
    if name == "Ux-a100":
        return MeasurementSetup(
            StateVector([1, 0, 0]), UnitaryMatrix(UX), UnitaryMatrix(_SWAP01), name)
    if name == "merged-Eq6":
        return MeasurementSetup(
            StateVector([1, 0, 0]), UnitaryMatrix(UX_MERGED), None, name)
    if name == "fig5":
        return MeasurementSetup(
            StateVector([1, 0, 0]), network_unitary(fig5_network()), None, name)
    raise KeyError(name)


def resolve_setup(source) -> MeasurementSetup:
    """Accept a preset name, a Distribution (measured by the identity
    instrument), or an explicit setup."""
    if isinstance(source, MeasurementSetup):
        return source
    if isinstance(source, Distribution):
        ident = UnitaryMatrix(np.eye(source.dim, dtype=complex))
        return MeasurementSetup(build_vi_state(source), ident, None, "dist")
    if isinstance(source, str):
        return preset_setup(source)
    raise TypeError(f"cannot build a setup from {type(source).__name__}")


def binary_pipeline(source, count: int, seed: int, mode: str = MODE_MORPHISM) -> SymbolStream:
    """Binary stream from a preset name, Distribution, or explicit setup.

    ``morphism`` samples the ternary stream and converts it symbol-wise.
    ``merge`` folds the third output port into the second with an exact
    two-port rotation before sampling (a no-op when that port already carries
    probability zero), so the dead symbol is never drawn; output ports 0 and 1
    map to bits 0 and 1, and any residual third-port hit is counted in the
    metadata rather than raised.
    """
    setup = resolve_setup(source)
    if mode == MODE_MORPHISM:
        return apply_morphism(sample(setup, count, seed))
    if mode != MODE_MERGE:
        raise ValueError(f"unknown mode {mode!r}")
    flat = standardized(setup)
    out_amps = flat.operator.entries @ flat.prepared.amps
    if abs(out_amps[2]) > 0.0:
        flat = merge_postprocess(merging_rotation(out_amps, (1, 2)), flat)
    ternary = sample(flat, count, seed)
    port2 = int(np.count_nonzero(ternary.symbols == 2))
    bits = np.where(ternary.symbols == 1, 1, 0).astype(np.uint8)
    meta = dict(ternary.meta)
    meta["mode"] = MODE_MERGE
    meta["dead_port_hits"] = port2
    meta["setup"] = setup.label or "custom"
    return SymbolStream(BINARY, bits, meta)


# --- stream files ---------------------------------------------------------------

FORMAT_ASCII = "ascii"
FORMAT_BITS = "bits"


def write_stream(stream: SymbolStream, path: str | Path, fmt: str = FORMAT_ASCII) -> None:
    """Write symbols plus a JSON sidecar (``<path>.meta.json``).

    ``ascii`` stores one character per symbol; ``bits`` packs a binary stream
    eight bits per byte, big-endian within the byte.  Output bytes depend only
    on the stream, so identical streams give identical files.
    """
    path = Path(path)
    if fmt == FORMAT_ASCII:
        payload = (stream.symbols + ord("0")).astype(np.uint8).tobytes()
    elif fmt == FORMAT_BITS:
        if stream.alphabet != BINARY:
            raise AlphabetError("bit packing requires a binary stream")
        payload = np.packbits(stream.symbols, bitorder="big").tobytes()
    else:
        raise ValueError(f"unknown stream format {fmt!r}")
    path.write_bytes(payload)
    sidecar = {
        "alphabet": stream.alphabet,
        "format": fmt,
        "count": len(stream),
        **{k: stream.meta[k] for k in sorted(stream.meta)},
    }
    Path(str(path) + ".meta.json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def read_stream(path: str | Path) -> SymbolStream:
    """Read a stream written by :func:`write_stream` (sidecar required for the
    packed-bit format; optional for ascii)."""
    path = Path(path)
    sidecar_path = Path(str(path) + ".meta.json")
    sidecar = None
    if sidecar_path.exists():
        sidecar = json.loads(sidecar_path.read_text())
    raw = path.read_bytes()
    if sidecar is not None and sidecar.get("format") == FORMAT_BITS:
        count = int(sidecar["count"])
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="big")
        if bits.size < count:
            raise FormatError(f"packed stream holds {bits.size} bits, expected {count}")
        symbols = bits[:count]
        alphabet = BINARY
    else:
        text = raw.decode("ascii", errors="strict").strip()
        if any(ch not in "012" for ch in text):
            bad = next(ch for ch in text if ch not in "012")
            raise FormatError(f"unexpected symbol {bad!r} in stream")
        symbols = np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")
        alphabet = (sidecar or {}).get(
            "alphabet", BINARY if symbols.size and symbols.max() < 2 else TERNARY)
        if sidecar is None and symbols.size == 0:
            alphabet = BINARY
    meta = {k: v for k, v in (sidecar or {}).items()
            if k not in ("alphabet", "format", "count")}
    return SymbolStream(alphabet, symbols, meta)
