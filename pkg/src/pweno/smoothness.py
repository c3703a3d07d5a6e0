"""Smoothness indicators for base sub-stencil interpolants.

The indicator of a sub-stencil polynomial p over the central cell G is

    I = sum_{l in J} (prod_j h_j^(2 l_j - 1)) * integral_G (d^l p)^2 dx,

with J = {0..r}^n \\ {0} and h_j the per-axis mesh width. Each term is
evaluated by applying per-axis basis-derivative matrices to the sample block
and squaring the result at tensor Gauss-Legendre points (exact: the
integrands are polynomials of per-axis degree <= 2r). Derivatives are applied
to the samples before squaring; folding the squares into Gram matrices first
loses the indicator to cancellation when sub-stencil nodes cluster.
Indicators are computed once per cell at level r; higher recursion levels
reuse them through level_lookup.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from numpy.polynomial.legendre import leggauss

from .grid import CellIndex, GridFunction
from .stencil import StencilND, basis_derivative_matrix, resolve_stencil


class SmoothnessError(ValueError):
    pass


@dataclass(frozen=True)
class IndicatorParams:
    """q: Gauss-Legendre points per axis (default r+1, the exactness minimum);
    local_h: use the sub-stencil's own max gap instead of the global per-axis
    mesh width (off by default)."""

    q: int | None = None
    local_h: bool = False

    def resolve_q(self, r: int) -> int:
        q = self.q if self.q is not None else r + 1
        if q < r + 1:
            raise SmoothnessError(f"q={q} too small: need q >= r+1 = {r + 1}")
        return q


@dataclass(frozen=True)
class SmoothnessTable:
    """Indicators I^r_k for every base sub-stencil k in {0..r-1}^n."""

    r: int
    ndim: int
    entries: np.ndarray
    cell_bounds: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.float64)
        if entries.shape != (self.r,) * self.ndim:
            raise SmoothnessError(
                f"entries shape {entries.shape} does not match ({self.r},)*{self.ndim}"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)


def cell_quadrature(a: float, b: float, q: int):
    """Gauss-Legendre nodes and weights mapped to [a, b]."""
    pts, wts = leggauss(q)
    half = 0.5 * (b - a)
    return a + half * (pts + 1.0), half * wts


def axis_derivative_samples(stencil_nodes, a: float, b: float, q: int):
    """Per-order basis-derivative values on one axis.

    Returns (S, wts): S[m, p, j] is the m-th derivative of basis function j at
    quadrature point p of [a, b], for m = 0..degree.
    """
    nodes = np.asarray(stencil_nodes, dtype=np.float64)
    pts, wts = cell_quadrature(a, b, q)
    sam = np.stack([basis_derivative_matrix(nodes, m, pts) for m in range(nodes.size)])
    return sam, wts


def _indicator_value(block: np.ndarray, sams, wts, hs, r: int) -> float:
    """Sum over multi-indices l in {0..r}^n \\ {0} of the weighted square terms."""
    n = block.ndim
    # every term differentiates at least once, so any constant shift is inert;
    # centering makes constant data give exactly zero
    block = block - block.mean()
    total = 0.0
    with np.errstate(over="ignore"):    # inf indicators trigger the fallback
        for l in product(range(r + 1), repeat=n):
            if not any(l):
                continue
            T = block
            coeff = 1.0
            for axis, m in enumerate(l):
                T = np.moveaxis(np.tensordot(sams[axis][m], T, axes=(1, axis)), 0, axis)
                coeff *= hs[axis] ** (2 * m - 1)
            sq = T * T
            for w in reversed(wts):
                sq = sq @ w
            total += coeff * float(sq)
    return float(total)


def _axis_h(gf: GridFunction, axis: int, nodes: np.ndarray, local_h: bool) -> float:
    if local_h:
        return float(np.diff(nodes).max())
    return gf.grid.axes[axis].h_max


def smoothness_indicator(
    gf: GridFunction, stencil: StencilND, cell: CellIndex, params: IndicatorParams
) -> float:
    """Indicator of one sub-stencil interpolant over the central cell."""
    n = gf.grid.ndim
    r = stencil.axes[0].r
    if any(st.m != st.r or st.r != r for st in stencil.axes):
        raise SmoothnessError("sub-stencil width must be r+1 on every axis")
    q = params.resolve_q(r)
    node_lists, block = resolve_stencil(gf, stencil)
    sams = []
    wts = []
    hs = []
    for axis in range(n):
        i = cell.i[axis]
        ax_nodes = gf.grid.axes[axis].nodes
        a, b = ax_nodes[i - 1], ax_nodes[i]
        S, w = axis_derivative_samples(node_lists[axis], a, b, q)
        sams.append(S)
        wts.append(w)
        hs.append(_axis_h(gf, axis, node_lists[axis], params.local_h))
    return _indicator_value(block, sams, wts, hs, r)


def build_table(
    gf: GridFunction, cell: CellIndex, r: int, params: IndicatorParams
) -> SmoothnessTable:
    """Indicators for all r^n base sub-stencils around a cell."""
    n = gf.grid.ndim
    q = params.resolve_q(r)
    per_axis: list[list[tuple[np.ndarray, float]]] = []
    wts = []
    bounds = []
    blocks_index = []
    for axis in range(n):
        i = cell.i[axis]
        ax_nodes = gf.grid.axes[axis].nodes
        if i - r < 0 or i + r - 1 > ax_nodes.size - 1:
            raise SmoothnessError("full 2r window unavailable around the cell")
        a, b = ax_nodes[i - 1], ax_nodes[i]
        bounds.append((float(a), float(b)))
        mats = []
        w = None
        for k in range(r):
            sub = ax_nodes[i - r + k : i - r + k + r + 1]
            S, w = axis_derivative_samples(sub, a, b, q)
            mats.append((S, _axis_h(gf, axis, sub, params.local_h)))
        per_axis.append(mats)
        wts.append(w)
        blocks_index.append(i)
    entries = np.empty((r,) * n)
    for k in product(range(r), repeat=n):
        slices = tuple(
            slice(blocks_index[axis] - r + k[axis], blocks_index[axis] - r + k[axis] + r + 1)
            for axis in range(n)
        )
        block = gf.values[slices]
        sams = [per_axis[axis][k[axis]][0] for axis in range(n)]
        hs = [per_axis[axis][k[axis]][1] for axis in range(n)]
        entries[k] = _indicator_value(block, sams, wts, hs, r)
    return SmoothnessTable(r=r, ndim=n, entries=entries, cell_bounds=tuple(bounds))


def level_lookup(table: SmoothnessTable, l: int, k, v) -> float:
    """Level-l indicator: I^l_{k,k+v} = I^r_{k + (l-(r-1))*v}."""
    r = table.r
    k = tuple(int(c) for c in np.atleast_1d(k))
    v = tuple(int(c) for c in np.atleast_1d(v))
    if len(k) != table.ndim or len(v) != table.ndim:
        raise SmoothnessError("k and v must have one component per axis")
    if not r <= l <= 2 * r - 2:
        raise SmoothnessError(f"level l={l} out of range [{r}, {2 * r - 2}]")
    shift = l - (r - 1)
    idx = []
    for kj, vj in zip(k, v):
        if not 0 <= kj <= 2 * r - 2 - l:
            raise SmoothnessError(f"k component {kj} out of range at level {l}")
        if vj not in (0, 1):
            raise SmoothnessError("v components must be 0 or 1")
        idx.append(kj + shift * vj)
    return float(table.entries[tuple(idx)])
