"""Classical and progressive WENO-2r interpolation engines.

Both engines act on the 2r-per-axis window around the query's central cell.
The classical path forms one convex combination of the r^n base sub-stencil
interpolants. The progressive path runs the Aitken-Neville recursion: seed
level r with the base values, then combine 2^n children per node with
indicator-modulated affine weights until a single level-(2r-1) value remains.
Smoothness indicators are computed once, at level r, and reused at every
recursion level through level_lookup.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .grid import CellIndex, GridFunction, locate_cell
from .smoothness import IndicatorParams, SmoothnessTable, build_table, level_lookup
from .stencil import Stencil1D, StencilND, tensor_lagrange_eval
from .weights import classical_optimal_general, tensor_weight, weight_pair_general

METHODS = ("progressive", "classical", "linear")


class WenoError(ValueError):
    pass


class DiagnosticsNotCaptured(RuntimeError):
    pass


@dataclass(frozen=True)
class WenoParams:
    """r >= 2; epsilon_rule is "h_squared" (eps = h^2, h the global mesh width)
    or an explicit positive constant; t defaults to (r+1)/2."""

    r: int
    method: str = "progressive"
    epsilon_rule: str | float = "h_squared"
    t: float | None = None
    indicator: IndicatorParams = field(default_factory=IndicatorParams)

    def __post_init__(self) -> None:
        if self.r < 2:
            raise WenoError(f"need r >= 2, got {self.r}")
        if self.method not in METHODS:
            raise WenoError(f"unknown method {self.method!r}; choose from {METHODS}")
        if isinstance(self.epsilon_rule, str):
            if self.epsilon_rule != "h_squared":
                raise WenoError(f"unknown epsilon rule {self.epsilon_rule!r}")
        elif not self.epsilon_rule > 0:
            raise WenoError("explicit epsilon must be positive")
        if self.t is not None and not self.t > 0:
            raise WenoError("exponent t must be positive")

    def resolve_t(self) -> float:
        return float(self.t) if self.t is not None else (self.r + 1) / 2.0

    def resolve_eps(self, grid) -> float:
        if isinstance(self.epsilon_rule, str):
            return float(grid.h) ** 2
        return float(self.epsilon_rule)


@dataclass
class NevilleState:
    """Per-level values of the recursion and the weights used at each node.

    values[l][j] is p~^l_j(x*) for l = r..2r-1, j in {0..2r-1-l}^n.
    weights[(l, j)] maps each child v in {0,1}^n (lexicographic) to its
    nonlinear weight.
    """

    r: int
    ndim: int
    values: dict[int, dict[tuple, float]] = field(default_factory=dict)
    weights: dict[tuple, dict[tuple, float]] = field(default_factory=dict)


@dataclass
class InterpResult:
    value: float
    cell: CellIndex
    table: SmoothnessTable
    base_values: np.ndarray
    linear_fallback: bool = False
    neville: NevilleState | None = None


def capture_diagnostics(result: InterpResult) -> NevilleState:
    """Recursion triangle of a progressive evaluation (capture must be on)."""
    if result.neville is None:
        raise DiagnosticsNotCaptured(
            "interpolate was called without capture=True or with a non-progressive method"
        )
    return result.neville


def nonlinear_pair(linear_weights, indicators, eps: float, t: float):
    """Indicator-modulated normalization of a set of linear weights.

    alpha_v = C_v / (eps + I_v)^t, omega_v = alpha_v / sum(alpha). If the sum
    underflows to zero or is not finite, falls back to the linear weights and
    reports it in the second return value.
    """
    C = np.asarray(linear_weights, dtype=np.float64)
    I = np.asarray(indicators, dtype=np.float64)
    alpha = C / (eps + I) ** t
    s = alpha.sum()
    if s <= 0.0 or not np.isfinite(s):
        return C.copy(), True
    return alpha / s, False


def _window_slices(gf: GridFunction, cell: CellIndex, r: int) -> list[slice]:
    slices = []
    for axis, i in enumerate(cell.i):
        J = gf.grid.axes[axis].n_cells
        if i - r < 0 or i + r - 1 > J:
            raise WenoError(f"cell {i} lacks a full 2r window on axis {axis}")
        slices.append(slice(i - r, i + r))
    return slices


def _base_values(gf: GridFunction, cell: CellIndex, r: int, x_star: np.ndarray) -> np.ndarray:
    n = gf.grid.ndim
    out = np.empty((r,) * n)
    for k in product(range(r), repeat=n):
        st = StencilND(tuple(Stencil1D(i=cell.i[a], r=r, k=k[a], m=r) for a in range(n)))
        out[k] = tensor_lagrange_eval(gf, st, x_star)
    return out


def interpolate_nd(
    gf: GridFunction,
    x_star,
    params: WenoParams,
    capture: bool = False,
    smoothness_override: np.ndarray | None = None,
) -> InterpResult:
    """Interpolate gf at one point with the configured method.

    smoothness_override is a test hook: an array of shape (r,)*n used in place
    of the computed indicator table.
    """
    r = params.r
    n = gf.grid.ndim
    x_star = np.atleast_1d(np.asarray(x_star, dtype=np.float64))
    if x_star.size != n:
        raise WenoError(f"query has {x_star.size} coordinates, data has {n}")
    cell = locate_cell(gf.grid, x_star, r=r)
    windows = [gf.grid.axes[a].nodes[cell.i[a] - r : cell.i[a] + r] for a in range(n)]
    base = _base_values(gf, cell, r, x_star)
    if smoothness_override is not None:
        entries = np.broadcast_to(np.asarray(smoothness_override, dtype=np.float64), (r,) * n)
        bounds = tuple(
            (float(gf.grid.axes[a].nodes[cell.i[a] - 1]), float(gf.grid.axes[a].nodes[cell.i[a]]))
            for a in range(n)
        )
        table = SmoothnessTable(r=r, ndim=n, entries=np.array(entries), cell_bounds=bounds)
    else:
        table = build_table(gf, cell, r, params.indicator)
    eps = params.resolve_eps(gf.grid)
    t = params.resolve_t()

    if params.method == "linear":
        st = StencilND(tuple(Stencil1D(i=cell.i[a], r=r, k=0, m=2 * r - 1) for a in range(n)))
        value = tensor_lagrange_eval(gf, st, x_star)
        return InterpResult(value, cell, table, base)

    if params.method == "classical":
        per_axis = [classical_optimal_general(windows[a], float(x_star[a])).c for a in range(n)]
        C = per_axis[0]
        for a in range(1, n):
            C = np.multiply.outer(C, per_axis[a])
        omega, fell_back = nonlinear_pair(C, table.entries, eps, t)
        value = float(np.sum(omega * base))
        return InterpResult(value, cell, table, base, linear_fallback=fell_back)

    # progressive
    state = NevilleState(r=r, ndim=n) if capture else None
    vlist = list(product((0, 1), repeat=n))  # lexicographic
    level: dict[tuple, float] = {k: float(base[k]) for k in product(range(r), repeat=n)}
    if state is not None:
        state.values[r] = dict(level)
    fell_back = False
    for l in range(r, 2 * r - 1):
        nxt: dict[tuple, float] = {}
        for j in product(range(2 * r - 1 - l), repeat=n):
            pairs = [weight_pair_general(windows[a], l, j[a], float(x_star[a])) for a in range(n)]
            C = np.array(
                [
                    tensor_weight(
                        [(p.c_keep if va == 0 else p.c_shift) for p, va in zip(pairs, v)]
                    )
                    for v in vlist
                ]
            )
            I = np.array([level_lookup(table, l, j, v) for v in vlist])
            omega, bad = nonlinear_pair(C, I, eps, t)
            fell_back = fell_back or bad
            nxt[j] = float(
                sum(
                    w * level[tuple(jj + vv for jj, vv in zip(j, v))]
                    for w, v in zip(omega, vlist)
                )
            )
            if state is not None:
                state.weights[(l, j)] = {v: float(w) for v, w in zip(vlist, omega)}
        level = nxt
        if state is not None:
            state.values[l + 1] = dict(level)
    value = level[(0,) * n]
    return InterpResult(value, cell, table, base, linear_fallback=fell_back, neville=state)


def interpolate_1d(
    gf: GridFunction,
    x_star: float,
    params: WenoParams,
    capture: bool = False,
    smoothness_override: np.ndarray | None = None,
) -> InterpResult:
    """1-D convenience wrapper around interpolate_nd."""
    if gf.grid.ndim != 1:
        raise WenoError(f"interpolate_1d needs 1-D data, got {gf.grid.ndim}-D")
    return interpolate_nd(gf, [x_star], params, capture, smoothness_override)
