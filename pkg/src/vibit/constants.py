"""Built-in matrices and kets used throughout the pipeline.

``UX`` is the spin-1 x-axis measurement unitary (rows are the eigenvectors of
the spin-1 x operator).  ``U_MERGE`` post-processes its output so that the
three-port amplitude pattern folds into two equal-probability live ports;
``UX_MERGED`` is the composed instrument.  ``V_EQUIV`` conjugates ``UX`` into
``UX_MERGED``, witnessing their unitary equivalence.

The kets coordinatize the six labelled observables of the built-in hypergraph
that carry explicit vectors; ``U_CONTEXT_MAP`` is the unitary that carries the
preparation context {a, 4, 5} onto the measurement context {b, 2, 3}, and
``U_FOLD_2TO1`` folds two of its live output ports into one.
"""

from __future__ import annotations

import numpy as np

SQRT2 = np.sqrt(2.0)

_frozen = lambda a: (a.setflags(write=False), a)[1]

#: Universal three-port measurement unitary (real symmetric, an involution).
UX = _frozen(0.5 * np.array(
    [[1.0, SQRT2, 1.0],
     [SQRT2, 0.0, -SQRT2],
     [1.0, -SQRT2, 1.0]], dtype=complex))

#: Merging post-processor: folds the three-port output of ``UX`` into two
#: balanced live ports.
U_MERGE = _frozen((1.0 / (2.0 * SQRT2)) * np.array(
    [[1.0 + SQRT2, SQRT2, 1.0 - SQRT2],
     [1.0 - SQRT2, SQRT2, 1.0 + SQRT2],
     [SQRT2, -2.0, SQRT2]], dtype=complex))

#: The composed instrument U_MERGE · UX: a Hadamard on the first two ports.
UX_MERGED = _frozen((1.0 / SQRT2) * np.array(
    [[1.0, 1.0, 0.0],
     [1.0, -1.0, 0.0],
     [0.0, 0.0, SQRT2]], dtype=complex))

_R3 = np.sqrt(3.0)
_INNER = np.sqrt(2.0 + _R3)
_AM = np.sqrt(2.0 - _INNER)
_AP = np.sqrt(2.0 + _INNER)

#: Real orthogonal witness of unitary equivalence: V.T @ UX @ V == UX_MERGED.
V_EQUIV = _frozen(np.array(
    [[_AM / (2.0 * _R3), _AP / (2.0 * _R3), np.sqrt(2.0 / 3.0)],
     [-_AM / np.sqrt(6.0), -_AP / np.sqrt(6.0), 1.0 / _R3],
     [_AP / 2.0, -_AM / 2.0, 0.0]], dtype=complex))

# Coordinatization kets for the six explicitly coordinatized observables.
KET_A = _frozen(np.array([1.0, 0.0, 0.0], dtype=complex))
KET_B = _frozen(np.array([1.0 / SQRT2, 0.5, 0.5], dtype=complex))
KET_2 = _frozen(np.array([0.0, 1.0 / SQRT2, -1.0 / SQRT2], dtype=complex))
KET_3 = _frozen(np.array([1.0 / SQRT2, -0.5, -0.5], dtype=complex))
KET_4 = _frozen(np.array([0.0, 0.0, 1.0], dtype=complex))
KET_5 = _frozen(np.array([0.0, 1.0, 0.0], dtype=complex))

#: label -> ket for the built-in partial coordinatization.
COORDINATIZATION = {
    "a": KET_A, "b": KET_B, "2": KET_2, "3": KET_3, "4": KET_4, "5": KET_5,
}

#: Context-to-context mapper |b><a| + |2><4| + |3><5|.
U_CONTEXT_MAP = _frozen(
    np.outer(KET_B, KET_A.conj())
    + np.outer(KET_2, KET_4.conj())
    + np.outer(KET_3, KET_5.conj()))

#: Two-to-one folding unitary: leaves port 0 alone, Hadamard on ports 1 and 2.
U_FOLD_2TO1 = _frozen((1.0 / SQRT2) * np.array(
    [[SQRT2, 0.0, 0.0],
     [0.0, 1.0, 1.0],
     [0.0, 1.0, -1.0]], dtype=complex))

#: Named builtin matrices exposed by the CLI.
BUILTIN_MATRICES = {
    "Ux": UX,
    "U-merge": U_MERGE,
    "UxMerged": UX_MERGED,
    "V-equiv": V_EQUIV,
    "U-fig5": U_CONTEXT_MAP,
    "U-fold": U_FOLD_2TO1,
    "identity3": _frozen(np.eye(3, dtype=complex)),
}
