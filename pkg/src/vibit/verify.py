"""Built-in identity suite: every closed-form equality the package relies on.

Each check recomputes one published identity from scratch and compares at the
stated tolerance.  ``run_verify`` returns all results; the CLI prints one line
per item and fails if any item fails.  ``perturb_ux`` is a test hook that
injects an error into the first entry of ``UX`` before checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import contextuality as ctx
from .beamsplitter import decompose, fig5_network, forward_paths, network_unitary, path_contributions
from .constants import (
    KET_2,
    KET_3,
    KET_4,
    KET_5,
    KET_A,
    KET_B,
    SQRT2,
    U_CONTEXT_MAP,
    U_FOLD_2TO1,
    U_MERGE,
    UX,
    UX_MERGED,
    V_EQUIV,
)
from .linalg import (
    UnitaryMatrix,
    born_probability,
    eigenvalues,
    equal_up_to_phase,
    is_orthonormal_context,
    max_abs_diff,
    projector_from_state,
    random_unitary,
    verify_conjugation,
)
from .pipeline import (
    Distribution,
    apply_morphism,
    build_vi_state,
    merged_complement_projector,
    outcome_distribution,
    preset_setup,
    SymbolStream,
    universal_measurement_check,
)

# Frozen closed-form targets.
_PROJ_B = 0.5 * np.array(
    [[1.0, 1.0 / SQRT2, 1.0 / SQRT2],
     [1.0 / SQRT2, 0.5, 0.5],
     [1.0 / SQRT2, 0.5, 0.5]], dtype=complex)
_PROJ_3 = 0.5 * np.array(
    [[1.0, -1.0 / SQRT2, -1.0 / SQRT2],
     [-1.0 / SQRT2, 0.5, 0.5],
     [-1.0 / SQRT2, 0.5, 0.5]], dtype=complex)
_COMPLEMENT_23 = 0.5 * np.array(
    [[1.0, -1.0 / SQRT2, -1.0 / SQRT2],
     [-1.0 / SQRT2, 1.5, -0.5],
     [-1.0 / SQRT2, -0.5, 1.5]], dtype=complex)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name, bool(passed), detail)


def _eig_multiset_is(m, target, tol) -> tuple[bool, str]:
    lam = eigenvalues(m)
    tgt = np.sort_complex(np.asarray(target, dtype=complex))
    err = float(np.max(np.abs(lam - tgt)))
    return err < tol, f"max deviation {err:.3e}"


def run_verify(perturb_ux: float = 0.0) -> list[CheckResult]:
    out: list[CheckResult] = []
    ux = np.array(UX)
    ux[0, 0] += perturb_ux

    resid = max_abs_diff(ux.conj().T @ ux, np.eye(3))
    out.append(_check("ux-unitary", resid < 1e-10, f"U†U residual {resid:.3e}"))

    err = max_abs_diff(U_MERGE @ UX, UX_MERGED)
    out.append(_check("merge-product", err < 1e-12, f"entrywise error {err:.3e}"))

    out.append(_check(
        "equivalence-conjugation",
        verify_conjugation(V_EQUIV, UX, UX_MERGED, tol=1e-10),
        "V†·Ux·V vs merged instrument at 1e-10"))

    ok, detail = _eig_multiset_is(UX, [-1, 1, 1], 1e-8)
    out.append(_check("eigenvalues-ux", ok, detail))
    ok, detail = _eig_multiset_is(UX_MERGED, [-1, 1, 1], 1e-8)
    out.append(_check("eigenvalues-merged", ok, detail))

    err = max_abs_diff(projector_from_state(KET_A).entries, np.diag([1, 0, 0]))
    out.append(_check("projector-a", err < 1e-12, f"error {err:.3e}"))
    err = max_abs_diff(projector_from_state(KET_B).entries, _PROJ_B)
    out.append(_check("projector-b", err < 1e-12, f"error {err:.3e}"))
    err = max_abs_diff(projector_from_state(KET_3).entries, _PROJ_3)
    out.append(_check("projector-3", err < 1e-12, f"error {err:.3e}"))

    ea, eb = projector_from_state(KET_A), projector_from_state(KET_B)
    e2, e3 = projector_from_state(KET_2), projector_from_state(KET_3)
    for name, meas, want in (
        ("born-ab", eb, 0.5), ("born-a3", e3, 0.5),
        ("born-a2", e2, 0.0), ("born-aa", ea, 1.0),
    ):
        got = born_probability(ea, meas)
        out.append(_check(name, abs(got - want) < 1e-12, f"Tr = {got!r}"))

    comp = merged_complement_projector([KET_B, KET_2, KET_3], keep=0)
    err = max_abs_diff(comp.entries, _COMPLEMENT_23)
    out.append(_check("complement-projector", err < 1e-12, f"error {err:.3e}"))
    err = max_abs_diff(eb.entries + comp.entries, np.eye(3))
    out.append(_check("complement-resolution", err < 1e-12, f"error {err:.3e}"))

    out.append(_check("context-ux-rows", is_orthonormal_context(list(np.array(UX))),
                      "rows of the measurement unitary"))
    out.append(_check("context-b23", is_orthonormal_context([KET_B, KET_2, KET_3]),
                      "measurement context"))
    out.append(_check("context-a45", is_orthonormal_context([KET_A, KET_4, KET_5]),
                      "preparation context"))

    for name, target in (
        ("distribution-a010", (0.5, 0.0, 0.5)),
        ("distribution-a100", (0.5, 0.25, 0.25)),
        ("distribution-merged", (0.5, 0.5, 0.0)),
    ):
        preset = {"distribution-a010": "Ux-a010",
                  "distribution-a100": "Ux-a100",
                  "distribution-merged": "merged-Eq6"}[name]
        got = outcome_distribution(preset_setup(preset))
        err = float(np.max(np.abs(got - np.asarray(target))))
        out.append(_check(name, err < 1e-12, f"max error {err:.3e}"))

    merged_state = U_FOLD_2TO1 @ (U_CONTEXT_MAP @ KET_A)
    ok = equal_up_to_phase(merged_state, np.array([1, 1, 0]) / SQRT2, tol=1e-12)
    out.append(_check("merged-output-state", ok, "folded context map on the a rail"))

    err = max_abs_diff(build_vi_state(Distribution((0.5, 0.25, 0.25))).amps, KET_B)
    out.append(_check("vi-state", err < 1e-12, f"amplitude error {err:.3e}"))

    ident = UnitaryMatrix(np.eye(3, dtype=complex))
    d = Distribution((0.5, 0.25, 0.25))
    out.append(_check("universality-identity", universal_measurement_check(d, ident),
                      "identity instrument"))
    out.append(_check("universality-ux", universal_measurement_check(d, UnitaryMatrix(UX)),
                      "three-port instrument"))
    rng = np.random.default_rng(20230814)
    all_ok = True
    for _ in range(20):
        probs = rng.dirichlet(np.ones(3))
        while probs.max() >= 1.0:
            probs = rng.dirichlet(np.ones(3))
        du = Distribution(tuple(probs))
        if not universal_measurement_check(du, UnitaryMatrix(random_unitary(3, rng))):
            all_ok = False
    out.append(_check("universality-random", all_ok, "20 seeded (distribution, unitary) pairs"))

    conv = apply_morphism(SymbolStream("ternary", np.array([0, 1, 2, 0], dtype=np.uint8)))
    out.append(_check("morphism", list(conv.symbols) == [1, 0, 0, 1], "0,1,2,0 -> 1,0,0,1"))

    net = fig5_network()
    nu = network_unitary(net).entries
    col_ok = all(
        equal_up_to_phase(nu @ inp, want, tol=1e-10)
        for inp, want in ((KET_A, KET_B), (KET_5, KET_3), (KET_4, KET_2))
    )
    out.append(_check("fig5-columns", col_ok, "a->b, 5->3, 4->2 up to phase"))

    path_ok = all(
        max_abs_diff(forward_paths(net, np.eye(3)[k]), nu[:, k]) < 1e-10
        for k in range(3)
    )
    out.append(_check("fig5-pathsum", path_ok, "coherent path sum vs matrix product"))

    ts = net.transmissivities()
    ts_ok = np.allclose(ts, [2 / 3, 3 / 4, 2 / 3], atol=1e-12)
    out.append(_check("fig5-transmissivities", ts_ok, f"read back {ts}"))

    contribs = sorted(path_contributions(net, 0))
    want = [(0, 1 / SQRT2 + 0j), (1, 0.5 + 0j), (2, 0.5 + 0j)]
    terms_ok = len(contribs) == 3 and all(
        p == q and abs(x - y) < 1e-12 for (p, x), (q, y) in zip(contribs, want))
    out.append(_check("fig5-path-terms", terms_ok,
                      "three single-path amplitudes on the a rail"))

    err = max_abs_diff(network_unitary(decompose(U_CONTEXT_MAP)).entries, U_CONTEXT_MAP)
    out.append(_check("decompose-roundtrip", err < 1e-9, f"reconstruction error {err:.3e}"))

    h = ctx.fig4_hypergraph()
    res = ctx.propagate(h, {"a": 1})
    star = {"a": 1, "1": 0, "2": 0, "4": 0, "5": 0}
    out.append(_check("star-fixpoint",
                      isinstance(res, ctx.Fixpoint) and res.assignment == star,
                      "definite values exactly on {a, 1, 2, 4, 5}"))

    res = ctx.propagate(ctx.fig4_tifs(), {"a": 1, "b": 1})
    ok = isinstance(res, ctx.Contradiction) and set(res.context) == {"3", "21", "23"}
    out.append(_check("tifs-witness", ok, "all-zero context {3, 21, 23}"))
    res = ctx.propagate(ctx.fig4_tits(), {"a": 1, "b": 0})
    ok = isinstance(res, ctx.Contradiction) and set(res.context) == {"6", "7", "b"}
    out.append(_check("tits-witness", ok, "all-zero context {6, 7, b}"))

    states = ctx.enumerate_two_valued_states(h)
    ok = (len(states) == 8
          and all(s["1"] == 1 for s in states)
          and all(s["a"] == 0 for s in states))
    out.append(_check("eight-states", ok, f"{len(states)} total two-valued states"))

    out.append(_check("gadget-ab",
                      ctx.classify_gadget(h, "a", "b") is ctx.GadgetClass.BOTH,
                      "value indefiniteness of b given a"))
    out.append(_check("gadget-a3",
                      ctx.classify_gadget(h, "a", "3") is ctx.GadgetClass.BOTH,
                      "value indefiniteness of 3 given a"))

    unital, witness = ctx.is_unital(h)
    out.append(_check("non-unital", (not unital) and witness["a"] is None,
                      "no two-valued state assigns 1 to a"))

    bad = ctx.verify_coordinatization(h, ctx.builtin_coordinatization())
    out.append(_check("coordinatization", not bad, f"{len(bad)} orthogonality violations"))

    return out
