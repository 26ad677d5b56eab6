"""Finitely supported real-valued functions on Z^d and their spherical slices.

A GridFunction is a sparse point -> value map (zeros are never stored);
evaluation anywhere off the support is 0.  The slice transform turns a
function f into the family

    F_mu(x) = sum_{u : |u_1|^k + ... + |u_d|^k = mu} f(x - u),

which is the building block for every averaging operator: a sphere sum in a
product space collapses to a one-dimensional convolution of slice levels.

Supports stay sparse; a configurable budget (default 10^7 points) converts
would-be memory blowups into clean BudgetError exceptions.  Accumulation
order is fixed (sorted support, lexicographic shells) so results are
bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .counts import SphereSpec, enumerate_shell, rep_counts
from .errors import BudgetError, ParameterError

DEFAULT_SUPPORT_BUDGET = 10**7
DEFAULT_SLICE_WORK_BUDGET = 5 * 10**7

Point = tuple[int, ...]


class GridFunction:
    """Immutable finitely supported function on Z^d."""

    __slots__ = ("dim", "_values", "bbox")

    def __init__(self, dim: int, values: dict[Point, float], *, budget: int = DEFAULT_SUPPORT_BUDGET):
        if not isinstance(dim, int) or dim < 1:
            raise ParameterError(f"dim must be a positive integer, got {dim!r}")
        if len(values) > budget:
            raise BudgetError(f"support of {len(values)} points exceeds budget {budget}")
        clean: dict[Point, float] = {}
        for p, v in values.items():
            pt = tuple(int(c) for c in p)
            if len(pt) != dim:
                raise ParameterError(f"point {p!r} does not have dimension {dim}")
            fv = float(v)
            if fv != 0.0:
                clean[pt] = fv
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_values", clean)
        if clean:
            lo = tuple(min(p[i] for p in clean) for i in range(dim))
            hi = tuple(max(p[i] for p in clean) for i in range(dim))
            object.__setattr__(self, "bbox", (lo, hi))
        else:
            object.__setattr__(self, "bbox", None)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    @property
    def values(self):
        return MappingProxyType(self._values)

    def value(self, point) -> float:
        return self._values.get(tuple(int(c) for c in point), 0.0)

    def support_size(self) -> int:
        return len(self._values)

    def is_zero(self) -> bool:
        return not self._values

    def mass(self) -> float:
        return sum(v for _, v in self.items_sorted())

    def items_sorted(self):
        """Support points in lexicographic order (the fixed accumulation order)."""
        return sorted(self._values.items())

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(points (N,d) int64, values (N,) float64), lexicographic rows."""
        if not self._values:
            return np.zeros((0, self.dim), dtype=np.int64), np.zeros(0)
        items = self.items_sorted()
        pts = np.array([p for p, _ in items], dtype=np.int64)
        vals = np.array([v for _, v in items], dtype=np.float64)
        return pts, vals

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GridFunction)
            and self.dim == other.dim
            and self._values == other._values
        )

    def __repr__(self) -> str:
        return f"GridFunction(dim={self.dim}, support={len(self._values)})"


def make_delta(dim: int) -> GridFunction:
    """Point mass of size 1 at the origin."""
    return GridFunction(dim, {(0,) * dim: 1.0})


def make_box_indicator(dim: int, radius: int, *, budget: int = DEFAULT_SUPPORT_BUDGET) -> GridFunction:
    """Indicator of the cube [-radius, radius]^dim."""
    if not isinstance(radius, int) or radius < 0:
        raise ParameterError(f"radius must be a nonnegative integer, got {radius!r}")
    side = 2 * radius + 1
    if side**dim > budget:
        raise BudgetError(f"box has {side**dim} points, budget is {budget}")
    pts = np.stack(
        np.meshgrid(*([np.arange(-radius, radius + 1)] * dim), indexing="ij"),
        axis=-1,
    ).reshape(-1, dim)
    vals = {tuple(int(c) for c in row): 1.0 for row in pts}
    return GridFunction(dim, vals, budget=budget)


def translate(f: GridFunction, shift) -> GridFunction:
    shift = tuple(int(c) for c in shift)
    if len(shift) != f.dim:
        raise ParameterError(f"shift {shift!r} does not have dimension {f.dim}")
    return GridFunction(f.dim, {tuple(p + s for p, s in zip(pt, shift)): v for pt, v in f.values.items()})


def scale(f: GridFunction, c: float) -> GridFunction:
    return GridFunction(f.dim, {p: c * v for p, v in f.values.items()})


def add(f: GridFunction, g: GridFunction) -> GridFunction:
    if f.dim != g.dim:
        raise ParameterError(f"dimension mismatch: {f.dim} vs {g.dim}")
    out = dict(f.values)
    for p, v in g.items_sorted():
        out[p] = out.get(p, 0.0) + v
    return GridFunction(f.dim, out)


def pointwise_mul(f: GridFunction, g: GridFunction) -> GridFunction:
    if f.dim != g.dim:
        raise ParameterError(f"dimension mismatch: {f.dim} vs {g.dim}")
    small, big = (f, g) if f.support_size() <= g.support_size() else (g, f)
    out = {}
    for p, v in small.items_sorted():
        w = big.value(p)
        if w != 0.0:
            out[p] = v * w
    return GridFunction(f.dim, out)


def pointwise_max(f: GridFunction, g: GridFunction) -> GridFunction:
    if f.dim != g.dim:
        raise ParameterError(f"dimension mismatch: {f.dim} vs {g.dim}")
    out = dict(f.values)
    for p, v in g.items_sorted():
        out[p] = max(out.get(p, 0.0), v)
    return GridFunction(f.dim, out)


def absolute(f: GridFunction) -> GridFunction:
    return GridFunction(f.dim, {p: abs(v) for p, v in f.values.items()})


def lp_norm(f: GridFunction, p: float) -> float:
    """(sum |f(x)|^p)^(1/p) for 0 < p < infinity (quasi-norms included)."""
    if not p > 0:
        raise ParameterError(f"p must be positive, got {p!r}")
    total = sum(abs(v) ** p for _, v in f.items_sorted())
    return total ** (1.0 / p)


@dataclass(frozen=True)
class SliceFamily:
    """The slice levels F_mu of a source function, mu = 0..mu_max."""

    source: GridFunction
    spec: SphereSpec
    mu_max: int
    slices: tuple[GridFunction, ...] = field(repr=False)

    def slice(self, mu: int) -> GridFunction:
        if not 0 <= mu <= self.mu_max:
            raise ParameterError(f"mu={mu} outside 0..{self.mu_max}")
        return self.slices[mu]


def slice_family(
    f: GridFunction,
    spec: SphereSpec,
    mu_max: int,
    *,
    work_budget: int = DEFAULT_SLICE_WORK_BUDGET,
) -> SliceFamily:
    """Build F_mu(x) = sum_{shell mu} f(x - u) for every mu = 0..mu_max.

    Work is pre-estimated as sum_mu r(mu) * |supp f|; exceeding the budget
    raises BudgetError naming the offending level.
    """
    if f.dim != spec.dim:
        raise ParameterError(f"function dim {f.dim} != spec dim {spec.dim}")
    if not isinstance(mu_max, int) or mu_max < 0:
        raise ParameterError(f"mu_max must be a nonnegative integer, got {mu_max!r}")
    table = rep_counts(spec, mu_max)
    support = f.items_sorted()
    work = 0
    for mu in range(mu_max + 1):
        work += table.counts[mu] * len(support)
        if work > work_budget:
            raise BudgetError(
                f"slice family work estimate exceeds budget {work_budget} at mu={mu}"
            )
    slices = []
    for mu in range(mu_max + 1):
        shell = enumerate_shell(spec, mu)
        acc: dict[Point, float] = {}
        for y, v in support:
            for u in shell.points:
                x = tuple(a + b for a, b in zip(y, u))
                acc[x] = acc.get(x, 0.0) + v
        slices.append(GridFunction(f.dim, acc))
    return SliceFamily(source=f, spec=spec, mu_max=mu_max, slices=tuple(slices))


def write_grid_text(f: GridFunction, stream) -> None:
    """Text format: first line d, then 'x1 ... xd value' rows, lexicographic."""
    stream.write(f"{f.dim}\n")
    for p, v in f.items_sorted():
        stream.write(" ".join(str(c) for c in p) + f" {v!r}\n")


def read_grid_text(stream) -> GridFunction:
    header = stream.readline()
    try:
        dim = int(header.strip())
    except ValueError as exc:
        raise ParameterError(f"bad grid-function header {header!r}") from exc
    vals: dict[Point, float] = {}
    for line in stream:
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != dim + 1:
            raise ParameterError(f"bad grid-function row {line!r} for dim {dim}")
        vals[tuple(int(c) for c in parts[:dim])] = float(parts[dim])
    return GridFunction(dim, vals)
