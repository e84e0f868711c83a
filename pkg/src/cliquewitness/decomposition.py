"""Component matrices of the deviation H - E{H} and their exact identities.

The pair-block deviation splits exactly into a one-overlap matrix K plus the
four-cross-edge families J(eta, nu), where eta counts how many of the four
cross edges {h(A)h(B), h(A)t(B), t(A)h(B), t(A)t(B)} contribute a centered
factor g and nu enumerates which subset of that size.  J restricts support to
disjoint index pairs; the relaxed Jtilde drops that restriction (with the
g_ii = 0 convention).  The mixed-block deviation splits into the three rank
structured matrices L(1,1), L(1,2), L(2,1).

Everything here is verified by exact reconstruction: the residual of the
deviation minus the component sum is floating-point zero, which pins down the
(eta, nu) -> edge-subset convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional, Tuple, Union

import numpy as np
from scipy.sparse.linalg import LinearOperator

from .models import GraphInstance
from .params import WitnessParams
from .spectral import (
    ProjectorFamily,
    _pairs_count,
    expected_block,
    rect_operator_norm,
    sym_operator_norm,
)
from .subsets import SubsetIndexer
from .witness import build_matrix, extract_blocks

__all__ = [
    "ComponentKind",
    "ComponentMatrix",
    "EDGE_CHOICES",
    "build_component",
    "component_operator",
    "class1_sum_operator",
    "component_norm",
    "class1_sum_norm",
    "verify_expansion_H22",
    "verify_expansion_H12",
    "KernelReport",
    "kernel_identities",
    "projected_norm",
]

# (eta, nu) -> cross edges carrying a centered factor.  Codes: first letter
# picks h(A)/t(A), second picks h(B)/t(B).  nu ordering within each class is
# pinned by the exact kernel identities (see kernel_identities): the class-1
# sum and the (2,2)+(2,4), (2,3)+(2,5) combinations must annihilate the V2
# projector, and (2,2)/(2,3) must be transposes.
EDGE_CHOICES = {
    (1, 1): ("hh",),
    (1, 2): ("ht",),
    (1, 3): ("th",),
    (1, 4): ("tt",),
    (2, 1): ("hh", "tt"),
    (2, 2): ("hh", "th"),
    (2, 3): ("hh", "ht"),
    (2, 4): ("ht", "tt"),
    (2, 5): ("th", "tt"),
    (2, 6): ("ht", "th"),
    (3, 1): ("hh", "ht", "th"),
    (3, 2): ("hh", "th", "tt"),
    (3, 3): ("hh", "ht", "tt"),
    (3, 4): ("ht", "th", "tt"),
    (4, 1): ("hh", "ht", "th", "tt"),
}

_L_KINDS = ((1, 1), (1, 2), (2, 1))


@dataclass(frozen=True)
class ComponentKind:
    """Identifier of one component family member."""

    family: str
    eta: Optional[int] = None
    nu: Optional[int] = None

    def __post_init__(self) -> None:
        if self.family not in ("K", "J", "Jtilde", "L"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "K":
            if self.eta is not None or self.nu is not None:
                raise ValueError("K carries no (eta, nu)")
            return
        if self.family == "L":
            if (self.eta, self.nu) not in _L_KINDS:
                raise ValueError(f"L restricted to {_L_KINDS}, got ({self.eta}, {self.nu})")
            return
        if (self.eta, self.nu) not in EDGE_CHOICES:
            raise ValueError(f"invalid (eta, nu) = ({self.eta}, {self.nu})")

    def label(self) -> str:
        if self.family == "K":
            return "K"
        name = {"J": "J", "Jtilde": "Jt", "L": "L"}[self.family]
        return f"{name}({self.eta},{self.nu})"


@dataclass(frozen=True)
class ComponentMatrix:
    """Dense component with its scalar prefactor recorded for norm ratios."""

    kind: ComponentKind
    values: np.ndarray
    prefactor: float


def _edge_factor(code: str, g: np.ndarray, i: int, j: int, hi: np.ndarray, ti: np.ndarray) -> np.ndarray:
    if code == "hh":
        return g[i, hi]
    if code == "ht":
        return g[i, ti]
    if code == "th":
        return g[j, hi]
    return g[j, ti]


def _prefactor(kind: ComponentKind, params: WitnessParams) -> float:
    if kind.family == "K":
        return params.alpha3
    if kind.family == "L":
        return params.alpha3 * params.p if kind.eta == 1 else params.alpha3
    return params.alpha4 * params.p ** (4 - kind.eta)


def build_component(graph: GraphInstance, params: WitnessParams, kind: ComponentKind) -> ComponentMatrix:
    """Dense component matrix (pairs x pairs, or singletons x pairs for L)."""
    ix = SubsetIndexer(graph.n)
    g = graph.centered
    hi = ix.pair_heads - 1
    ti = ix.pair_tails - 1
    npairs = ix.num_pairs
    pref = _prefactor(kind, params)

    if kind.family == "L":
        vals = np.empty((graph.n, npairs))
        for a in range(graph.n):
            if kind.eta == 1:
                col = g[a, hi] if kind.nu == 1 else g[a, ti]
            else:
                col = g[a, hi] * g[a, ti]
            col = col * ((hi != a) & (ti != a))
            vals[a] = col
        return ComponentMatrix(kind=kind, values=pref * vals, prefactor=pref)

    vals = np.empty((npairs, npairs))
    if kind.family == "K":
        for t in range(npairs):
            i, j = int(hi[t]), int(ti[t])
            share_i = (hi == i) | (ti == i)
            share_j = (hi == j) | (ti == j)
            one = share_i ^ share_j
            row = np.zeros(npairs)
            x = np.where(share_i[one], j, i)
            y = hi[one] + ti[one] - np.where(share_i[one], i, j)
            row[one] = g[x, y]
            vals[t] = row
        return ComponentMatrix(kind=kind, values=pref * vals, prefactor=pref)

    codes = EDGE_CHOICES[(kind.eta, kind.nu)]
    disjoint_only = kind.family == "J"
    for t in range(npairs):
        i, j = int(hi[t]), int(ti[t])
        row = np.ones(npairs)
        for code in codes:
            row = row * _edge_factor(code, g, i, j, hi, ti)
        if disjoint_only:
            share = (hi == i) | (ti == i) | (hi == j) | (ti == j)
            row[share] = 0.0
        vals[t] = row
    return ComponentMatrix(kind=kind, values=pref * vals, prefactor=pref)


# ----------------------------------------------------------------------
# matrix-free operators for the large-n norm probes
# ----------------------------------------------------------------------


def _pair_lift(v: np.ndarray, hi: np.ndarray, ti: np.ndarray, n: int) -> np.ndarray:
    V = np.zeros((n, n))
    V[hi, ti] = v
    V[ti, hi] = v
    return V


def component_operator(
    graph: GraphInstance, params: WitnessParams, kind: ComponentKind
) -> LinearOperator:
    """Matrix-free matvec for the components probed at large n.

    Supported: K and J(4,1) (= Jtilde(4,1)); other single components are cheap
    enough to densify.  The class-1 relaxed sum has its own operator below.
    """
    ix = SubsetIndexer(graph.n)
    g = graph.centered
    hi = ix.pair_heads - 1
    ti = ix.pair_tails - 1
    n = graph.n
    npairs = ix.num_pairs

    if kind.family == "K":
        a3 = params.alpha3

        def matvec(v: np.ndarray) -> np.ndarray:
            V = _pair_lift(np.asarray(v).ravel(), hi, ti, n)
            W = V @ g
            return a3 * (W + W.T)[hi, ti]

    elif kind.family in ("J", "Jtilde") and kind.eta == 4:
        a4 = params.alpha4

        def matvec(v: np.ndarray) -> np.ndarray:
            V = _pair_lift(np.asarray(v).ravel(), hi, ti, n)
            out = np.empty(npairs)
            pos = 0
            for i in range(n - 1):
                W = V * np.outer(g[i], g[i])
                s = ((g @ W) * g).sum(axis=1)
                cnt = n - 1 - i
                out[pos : pos + cnt] = 0.5 * a4 * s[i + 1 :]
                pos += cnt
            return out

    else:
        raise ValueError(f"no matrix-free route for {kind.label()}")

    return LinearOperator((npairs, npairs), matvec=matvec, rmatvec=matvec, dtype=np.float64)


def class1_sum_operator(graph: GraphInstance, params: WitnessParams) -> LinearOperator:
    """Matrix-free sum of the four class-1 relaxed components."""
    ix = SubsetIndexer(graph.n)
    g = graph.centered
    hi = ix.pair_heads - 1
    ti = ix.pair_tails - 1
    n = graph.n
    npairs = ix.num_pairs
    scale = params.alpha4 * params.p ** 3

    def matvec(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v).ravel()
        w = np.bincount(hi, weights=v, minlength=n) + np.bincount(ti, weights=v, minlength=n)
        u = g @ w
        return scale * (u[hi] + u[ti])

    return LinearOperator((npairs, npairs), matvec=matvec, rmatvec=matvec, dtype=np.float64)


_DENSE_COMPONENT_LIMIT = 140


def component_norm(graph: GraphInstance, params: WitnessParams, kind: ComponentKind) -> float:
    """Spectral norm of a component, dense at small n, matrix-free above."""
    if kind.family == "L":
        return rect_operator_norm(build_component(graph, params, kind).values)
    if graph.n <= _DENSE_COMPONENT_LIMIT:
        vals = build_component(graph, params, kind).values
        if np.array_equal(vals, vals.T):
            return sym_operator_norm(vals)
        return rect_operator_norm(vals)
    return sym_operator_norm(component_operator(graph, params, kind))


def class1_sum_norm(graph: GraphInstance, params: WitnessParams) -> float:
    """Spectral norm of the class-1 relaxed sum at any n."""
    return sym_operator_norm(class1_sum_operator(graph, params))


# ----------------------------------------------------------------------
# exact expansions
# ----------------------------------------------------------------------


def verify_expansion_H22(graph: GraphInstance, params: WitnessParams) -> float:
    """Max abs residual of the exact pair-block deviation reconstruction."""
    h = build_matrix(graph, params, kind="H")
    _, _, h22 = extract_blocks(h)
    target = h22 - expected_block("H22", graph.n, params)

    def J(eta, nu):
        return build_component(graph, params, ComponentKind("J", eta, nu)).values

    def Jt(eta, nu):
        return build_component(graph, params, ComponentKind("Jtilde", eta, nu)).values

    recon = build_component(graph, params, ComponentKind("K")).values
    recon += J(2, 1) + J(2, 6) + J(4, 1)
    for nu in range(1, 5):
        recon += J(3, nu)
    for nu in range(1, 5):
        recon += J(1, nu) - Jt(1, nu)
    for nu in range(2, 6):
        recon += J(2, nu) - Jt(2, nu)
    for nu in range(1, 5):
        recon += Jt(1, nu)
    for nu in range(2, 6):
        recon += Jt(2, nu)
    return float(np.max(np.abs(target - recon)))


def verify_expansion_H12(graph: GraphInstance, params: WitnessParams) -> float:
    """Max abs residual of the exact mixed-block deviation reconstruction."""
    h = build_matrix(graph, params, kind="H")
    _, h12, _ = extract_blocks(h)
    target = h12 - expected_block("H12", graph.n, params)
    recon = (
        build_component(graph, params, ComponentKind("L", 1, 1)).values
        + build_component(graph, params, ComponentKind("L", 1, 2)).values
        + build_component(graph, params, ComponentKind("L", 2, 1)).values
    )
    return float(np.max(np.abs(target - recon)))


# ----------------------------------------------------------------------
# kernel identities and projected norms
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class KernelReport:
    """Norms of the four compositions that vanish identically."""

    left_class1: float
    right_class1: float
    right_22_24: float
    left_23_25: float
    prefactor: float

    def max_norm(self) -> float:
        return max(self.left_class1, self.right_class1, self.right_22_24, self.left_23_25)


def kernel_identities(graph: GraphInstance, params: WitnessParams) -> KernelReport:
    """Measure the exact projector kernels of the relaxed class-1/2 sums."""
    fam = ProjectorFamily(graph.n)
    p2 = fam.dense(2)

    def Jt(eta, nu):
        return build_component(graph, params, ComponentKind("Jtilde", eta, nu)).values

    sum1 = Jt(1, 1) + Jt(1, 2) + Jt(1, 3) + Jt(1, 4)
    a = np.linalg.norm(p2 @ sum1, 2)
    b = np.linalg.norm(sum1 @ p2, 2)
    c = np.linalg.norm((Jt(2, 2) + Jt(2, 4)) @ p2, 2)
    d = np.linalg.norm(p2 @ (Jt(2, 3) + Jt(2, 5)), 2)
    pref = params.alpha4 * params.p ** 2
    return KernelReport(
        left_class1=float(a),
        right_class1=float(b),
        right_22_24=float(c),
        left_23_25=float(d),
        prefactor=pref,
    )


def projected_norm(
    a: int,
    x: Union[np.ndarray, ComponentMatrix],
    b: int,
    tol: float = 1e-6,
    max_iter: int = 5000,
) -> float:
    """Spectral norm of P_a X P_b by power iteration with matrix-free projectors.

    Two deterministic restarts, max taken.  Raises on non-convergence with the
    last relative residual in the message.
    """
    if a not in (0, 1, 2) or b not in (0, 1, 2):
        raise ValueError(f"projector labels must be 0, 1 or 2, got ({a}, {b})")
    vals = x.values if isinstance(x, ComponentMatrix) else np.asarray(x)
    npairs = vals.shape[0]
    if vals.shape != (npairs, npairs):
        raise ValueError(f"square pairs x pairs matrix required, got {vals.shape}")
    fam = ProjectorFamily(_pairs_count(npairs))

    def apply_y(v: np.ndarray) -> np.ndarray:
        return fam.apply(a, vals @ fam.apply(b, v))

    def apply_yt(v: np.ndarray) -> np.ndarray:
        return fam.apply(b, vals.T @ fam.apply(a, v))

    scale = float(np.max(np.abs(vals)))
    if scale == 0.0:
        return 0.0
    # compositions that are exact zeros leave only rounding noise; anything
    # this far below the entry scale is treated as a converged zero
    floor = 1e-13 * scale
    best = 0.0
    for restart in range(2):
        rng = np.random.default_rng(restart)
        v = rng.standard_normal(npairs)
        v /= np.linalg.norm(v)
        sigma = 0.0
        converged = False
        residual = np.inf
        for _ in range(max_iter):
            w = apply_yt(apply_y(v))
            nw = np.linalg.norm(w)
            new_sigma = np.sqrt(nw)
            if new_sigma <= floor:
                sigma = 0.0
                converged = True
                break
            residual = abs(new_sigma - sigma) / max(new_sigma, 1e-300)
            v = w / nw
            sigma = new_sigma
            if residual <= tol:
                converged = True
                break
        if not converged:
            raise RuntimeError(
                f"power iteration for ||P_{a} X P_{b}|| did not converge in "
                f"{max_iter} iterations (last relative residual {residual:.3e})"
            )
        best = max(best, sigma)
    return float(best)
