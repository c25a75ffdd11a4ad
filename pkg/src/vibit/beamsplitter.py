"""Beam-splitter networks: elements, simulation, and triangular decomposition.

A network is an ordered list of elements acting on ``dim`` rails; application
order is physical traversal order.  Three element kinds exist:

* ``SplitterElement`` -- the general two-port splitter B(omega, phi) whose
  reflection phase sits on the second row:
  ``[[sin w, cos w], [e^{-i phi} cos w, -e^{-i phi} sin w]]``.
  ``decompose`` emits these.
* ``SymmetricSplitterElement`` -- a lossless symmetric plate whose reflected
  amplitude picks up +pi/2 from either side:
  ``[[sin w, i cos w], [i cos w, sin w]]``.  The built-in triangular network
  uses these (the one-sided B form cannot produce equal reflection phases on
  both sides, which the constant network's published amplitudes require).
* ``PhaseElement`` -- e^{i phi} on a single rail.  Corner mirrors of the
  triangular array redirect a whole rail, so in rail coordinates they reduce
  to a pi/2 phase on that rail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimError, FormatError, NumericalError
from .linalg import UnitaryMatrix, as_amplitudes, as_matrix, max_abs_diff

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PhaseElement:
    port: int
    phase: float

    def matrix(self, dim: int) -> np.ndarray:
        if not 0 <= self.port < dim:
            raise DimError(f"port {self.port} outside dim {dim}")
        m = np.eye(dim, dtype=complex)
        m[self.port, self.port] = np.exp(1j * self.phase)
        return m


@dataclass(frozen=True)
class SplitterElement:
    """General two-port splitter; transmissivity T = sin(omega)^2."""

    i: int
    j: int
    omega: float
    phi: float

    def __post_init__(self):
        if self.i >= self.j:
            raise DimError("splitter ports must satisfy i < j")

    @property
    def transmissivity(self) -> float:
        return float(np.sin(self.omega) ** 2)

    def matrix(self, dim: int) -> np.ndarray:
        if self.j >= dim:
            raise DimError(f"port {self.j} outside dim {dim}")
        s, c = np.sin(self.omega), np.cos(self.omega)
        r = np.exp(-1j * self.phi)
        m = np.eye(dim, dtype=complex)
        m[self.i, self.i] = s
        m[self.i, self.j] = c
        m[self.j, self.i] = r * c
        m[self.j, self.j] = -r * s
        return m


@dataclass(frozen=True)
class SymmetricSplitterElement:
    """Symmetric lossless plate; reflections from both sides carry +pi/2."""

    i: int
    j: int
    omega: float

    def __post_init__(self):
        if self.i >= self.j:
            raise DimError("splitter ports must satisfy i < j")

    @property
    def transmissivity(self) -> float:
        return float(np.sin(self.omega) ** 2)

    def matrix(self, dim: int) -> np.ndarray:
        if self.j >= dim:
            raise DimError(f"port {self.j} outside dim {dim}")
        s, c = np.sin(self.omega), np.cos(self.omega)
        m = np.eye(dim, dtype=complex)
        m[self.i, self.i] = s
        m[self.j, self.j] = s
        m[self.i, self.j] = 1j * c
        m[self.j, self.i] = 1j * c
        return m


Element = Union[PhaseElement, SplitterElement, SymmetricSplitterElement]


@dataclass(frozen=True)
class BeamSplitterNetwork:
    dim: int
    elements: tuple[Element, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        for e in self.elements:
            e.matrix(self.dim)  # validates port ranges

    def splitters(self) -> list[Element]:
        return [e for e in self.elements if not isinstance(e, PhaseElement)]

    def transmissivities(self) -> list[float]:
        return [e.transmissivity for e in self.splitters()]


def network_unitary(net: BeamSplitterNetwork) -> UnitaryMatrix:
    """Ordered product of the element matrices (first element acts first)."""
    m = np.eye(net.dim, dtype=complex)
    for e in net.elements:
        m = e.matrix(net.dim) @ m
    return UnitaryMatrix(m)


def path_contributions(net: BeamSplitterNetwork, port: int) -> list[tuple[int, complex]]:
    """All forward-path amplitudes for light entering one input port.

    Each entry is ``(output_port, product of per-element factors)`` for one
    path through the element list; a splitter branches a path in two, and
    exactly-zero branches are dropped.
    """
    if not 0 <= port < net.dim:
        raise DimError(f"port {port} outside dim {net.dim}")
    paths: list[tuple[int, complex]] = [(port, 1.0 + 0.0j)]
    for e in net.elements:
        nxt: list[tuple[int, complex]] = []
        if isinstance(e, PhaseElement):
            f = np.exp(1j * e.phase)
            for p, amp in paths:
                nxt.append((p, amp * f) if p == e.port else (p, amp))
        else:
            m = e.matrix(net.dim)
            for p, amp in paths:
                if p in (e.i, e.j):
                    for q in (e.i, e.j):
                        factor = m[q, p]
                        if factor != 0.0:
                            nxt.append((q, amp * factor))
                else:
                    nxt.append((p, amp))
        paths = nxt
    return paths


def forward_paths(net: BeamSplitterNetwork, state) -> np.ndarray:
    """Output amplitudes by coherent summation over all forward paths.

    Agrees with ``network_unitary(net) @ state`` to well below 1e-10; the
    path route exists to validate the element conventions, the matrix product
    is the production route.
    """
    amps = as_amplitudes(state)
    if amps.shape[0] != net.dim:
        raise DimError(f"state dim {amps.shape[0]} != network dim {net.dim}")
    out = np.zeros(net.dim, dtype=complex)
    for port in range(net.dim):
        if amps[port] == 0.0:
            continue
        for q, contrib in path_contributions(net, port):
            out[q] += amps[port] * contrib
    return out


def decompose(u) -> BeamSplitterNetwork:
    """Triangular decomposition into two-port splitters plus rail phases.

    Sub-diagonal entries are nulled column by column, bottom up, each by an
    adjacent-pair rotation; the unitary residue is a diagonal of phases.  With
    the splitter's reflection phase tied to its second row, that diagonal
    lands on the input side, so the element list is n phase shifters followed
    by at most n(n-1)/2 splitters.  Ties at exact zeros resolve to full
    transmission (omega = pi/2).
    """
    um = UnitaryMatrix(as_matrix(u))
    n = um.dim
    m = np.array(um.entries, dtype=complex)
    splitters: list[SplitterElement] = []
    for col in range(n - 1):
        for row in range(n - 1, col, -1):
            i, j = row - 1, row
            a, b = m[i, col], m[j, col]
            if abs(b) == 0.0:
                omega, phi = np.pi / 2.0, np.pi
            else:
                omega = float(np.arctan2(abs(a), abs(b)))
                phi = float(np.angle(a) - np.angle(b)) if abs(a) > 0.0 else 0.0
            phi %= TWO_PI
            s, c = np.sin(omega), np.cos(omega)
            g = np.array([[s, np.exp(1j * phi) * c],
                          [c, -np.exp(1j * phi) * s]])
            m[[i, j], :] = g @ m[[i, j], :]
            splitters.append(SplitterElement(i, j, float(omega), float(phi)))
    off = max_abs_diff(m, np.diag(np.diag(m)))
    if off > 1e-9:
        raise NumericalError(f"nulling left off-diagonal residue {off:.3e}")
    phases = [PhaseElement(p, float(np.angle(m[p, p]) % TWO_PI)) for p in range(n)]
    net = BeamSplitterNetwork(n, tuple(phases) + tuple(reversed(splitters)))
    err = max_abs_diff(network_unitary(net).entries, um.entries)
    if err > 1e-9:
        raise NumericalError(f"reconstruction error {err:.3e}")
    return net


def _omega_for(transmissivity: float) -> float:
    return float(np.arcsin(np.sqrt(transmissivity)))


def fig5_network() -> BeamSplitterNetwork:
    """The built-in triangular three-rail network.

    Carries the preparation context rails (a, 5, 4) = ports (0, 1, 2) onto
    the measurement context (b, 3, 2) on the same ports.  Input phase
    shifters (3pi/2, pi/2, 0) feed three symmetric plates with
    transmissivities (2/3, 3/4, 2/3); the diagonal corner mirrors reduce to
    pi/2 rail phases, and the two drawn internal shifters are pi/2 and 0.
    """
    half_pi = np.pi / 2.0
    return BeamSplitterNetwork(3, (
        PhaseElement(0, 3.0 * half_pi),          # input shifter on the a rail
        PhaseElement(1, half_pi),                # input shifter on rail 5
        PhaseElement(2, 0.0),                    # input shifter on rail 4
        PhaseElement(2, half_pi),                # corner mirror, rail 4
        PhaseElement(2, half_pi),                # drawn internal shifter
        SymmetricSplitterElement(1, 2, _omega_for(2.0 / 3.0)),
        PhaseElement(1, half_pi),                # corner mirror, rail 5
        SymmetricSplitterElement(0, 2, _omega_for(3.0 / 4.0)),
        PhaseElement(1, 0.0),                    # drawn internal shifter
        SymmetricSplitterElement(0, 1, _omega_for(2.0 / 3.0)),
        PhaseElement(0, half_pi),                # corner mirror, rail a
    ))


# --- netlist text format ------------------------------------------------------


def format_netlist(net: BeamSplitterNetwork) -> str:
    """Serialize a network; floats use repr so parsing is bit-exact."""
    lines = [f"dim {net.dim}"]
    for e in net.elements:
        if isinstance(e, PhaseElement):
            lines.append(f"ps {e.port} {e.phase!r}")
        elif isinstance(e, SplitterElement):
            lines.append(f"bs {e.i} {e.j} {e.omega!r} {e.phi!r}")
        else:
            lines.append(f"sym {e.i} {e.j} {e.omega!r}")
    return "\n".join(lines) + "\n"


def parse_netlist(text: str) -> BeamSplitterNetwork:
    dim: int | None = None
    elements: list[Element] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind, args = fields[0], fields[1:]
        try:
            if kind == "dim":
                if dim is not None:
                    raise FormatError("duplicate dim line", lineno)
                if len(args) != 1 or int(args[0]) < 1:
                    raise FormatError("dim takes one positive integer", lineno)
                dim = int(args[0])
            elif kind == "ps":
                if len(args) != 2:
                    raise FormatError("ps takes: port phase", lineno)
                elements.append(PhaseElement(int(args[0]), float(args[1])))
            elif kind == "bs":
                if len(args) != 4:
                    raise FormatError("bs takes: i j omega phi", lineno)
                elements.append(SplitterElement(
                    int(args[0]), int(args[1]), float(args[2]), float(args[3])))
            elif kind == "sym":
                if len(args) != 3:
                    raise FormatError("sym takes: i j omega", lineno)
                elements.append(SymmetricSplitterElement(
                    int(args[0]), int(args[1]), float(args[2])))
            else:
                raise FormatError(f"unknown element {kind!r}", lineno)
        except (ValueError, IndexError, DimError) as exc:
            raise FormatError(str(exc), lineno) from exc
    if dim is None:
        raise FormatError("missing dim line")
    try:
        return BeamSplitterNetwork(dim, tuple(elements))
    except DimError as exc:
        raise FormatError(str(exc)) from exc
