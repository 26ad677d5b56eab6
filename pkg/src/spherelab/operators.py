"""Multilinear spherical averages and maximal operators on Z^d.

The signed l-linear degree-k average at level lam is

    T_lam(f_1..f_l)(x) = (1/norm(lam)) * sum f_1(x-u_1) ... f_l(x-u_l),

the sum running over (u_1..u_l) with |u_1|^k + ... + |u_l|^k = lam
(each |u_j|^k meaning the coordinate sum of k-th powers).  norm(lam) is
either the exact joint count N(lam) or the asymptotic power lam^(l*d/k - 1).
The absolute value lives in the maximal operator, not the average, so the
average stays multilinear.

Evaluation strategy: sphere sums in Z^(l*d) collapse to one-dimensional
convolutions of per-function slice levels.  For every evaluation point x we
form the level profile  A_j(x, nu) = sum_{|u|^k = nu} f_j(x - u)  (built by
scattering each support point of f_j over its distance levels) and left-fold
pairwise level convolutions

    P(x, .) = A_1(x, .) * A_2(x, .) * ... * A_l(x, .),

so T_lam(x) = P(x, lam) / norm(lam).  Evaluation points are the integer
points of the sup-norm dilation (radius floor(Lam^(1/k))) of the supports'
bounding boxes, intersected across inputs, processed in fixed-size chunks
in lexicographic order.  Rows whose bbox k-distance to some support exceeds
lambda_max are pruned first; such rows have identically zero profiles, so
pruning never changes a value.  All reductions have a fixed order, so
outputs are independent of chunking and thread count.

Pointwise domination: for nonnegative inputs and asymptotic normalization,

    sup_lam T_lam(f_1..f_l) <= M(f_1) * S~^(l-1)(f_2..f_l)

with constant exactly 1, where M is the k-ball Hardy-Littlewood maximal
function and S~^(l-1) is the (l-1)-linear spherical maximal operator
*including its level-zero term* (the trivial shell {0}, normalized by 1).
The level-zero term is forced by the discrete splitting: the inner sphere
sum at level lam - |u_1|^k degenerates to a point mass when |u_1|^k = lam,
and dropping it breaks the inequality at points where the remaining inputs
have mass (e.g. f_2 = delta_0 at x = 0).  domination_check verifies the
inequality with that convention; the standalone spherical maximal operator
keeps the conventional range mu >= 1.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .counts import DEFAULT_CACHE, SphereSpec, TableCache, kth_root_floor
from .errors import EmptySphereWarning, ParameterError
from .grids import GridFunction
from .reports import DominationReport

_CHUNK_ROWS = 1 << 16


class Normalization(enum.Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"

    @classmethod
    def parse(cls, text: str) -> "Normalization":
        try:
            return cls(text.lower())
        except ValueError:
            raise ParameterError(
                f"normalization must be 'exact' or 'asymptotic', got {text!r}"
            ) from None


@dataclass(frozen=True)
class OperatorConfig:
    """Shared configuration of the averaging/maximal operators."""

    spec: SphereSpec
    linearity: int
    lambda_max: int
    normalization: Normalization = Normalization.EXACT
    lambda_min: int = 1

    def __post_init__(self):
        if not isinstance(self.linearity, int) or self.linearity < 1:
            raise ParameterError(f"linearity must be an integer >= 1, got {self.linearity!r}")
        if not isinstance(self.lambda_max, int) or not isinstance(self.lambda_min, int):
            raise ParameterError("lambda_min and lambda_max must be integers")
        if not 1 <= self.lambda_min <= self.lambda_max:
            raise ParameterError(
                f"need 1 <= lambda_min <= lambda_max, got [{self.lambda_min}, {self.lambda_max}]"
            )
        if not isinstance(self.normalization, Normalization):
            raise ParameterError("normalization must be a Normalization value")


def _check_dims(fs: list[GridFunction], spec: SphereSpec, linearity: int) -> None:
    if len(fs) != linearity:
        raise ParameterError(f"expected {linearity} input functions, got {len(fs)}")
    for f in fs:
        if f.dim != spec.dim:
            raise ParameterError(f"input dimension {f.dim} != spec dimension {spec.dim}")


def _common_grid_box(fs: list[GridFunction], radius: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Intersection of each support bbox dilated by radius in sup-norm."""
    lo = None
    hi = None
    for f in fs:
        if f.bbox is None:
            return None
        flo = tuple(c - radius for c in f.bbox[0])
        fhi = tuple(c + radius for c in f.bbox[1])
        lo = flo if lo is None else tuple(max(a, b) for a, b in zip(lo, flo))
        hi = fhi if hi is None else tuple(min(a, b) for a, b in zip(hi, fhi))
    if any(a > b for a, b in zip(lo, hi)):
        return None
    return lo, hi


def _iter_grid_chunks(box, dim):
    """Yield (N,dim) int64 arrays covering the box in lexicographic order."""
    lo, hi = box
    shape = tuple(h - l + 1 for l, h in zip(lo, hi))
    total = 1
    for s in shape:
        total *= s
    lo_arr = np.array(lo, dtype=np.int64)
    start = 0
    while start < total:
        stop = min(start + _CHUNK_ROWS, total)
        flat = np.arange(start, stop, dtype=np.int64)
        coords = np.stack(np.unravel_index(flat, shape), axis=1).astype(np.int64)
        yield coords + lo_arr
        start = stop


def _bbox_reach_mask(points: np.ndarray, f: GridFunction, degree: int, lam_max: int) -> np.ndarray:
    """Rows whose k-distance to the support's bounding box is <= lam_max.

    A lower bound on the distance to the support itself, so the complement
    has identically zero level profiles.
    """
    lo, hi = f.bbox
    gap_sum = np.zeros(len(points), dtype=np.int64)
    for axis in range(points.shape[1]):
        col = points[:, axis]
        gap = np.maximum(np.maximum(lo[axis] - col, col - hi[axis]), 0)
        gap_sum += gap**degree
    return gap_sum <= lam_max


class _FunctionArrays:
    """Support points/values of one input, ready for vectorized scattering."""

    __slots__ = ("points", "values", "size")

    def __init__(self, f: GridFunction, absolute: bool = False):
        pts, vals = f.arrays()
        self.points = pts
        self.values = np.abs(vals) if absolute else vals
        self.size = len(vals)


def _level_profile(points: np.ndarray, fa: _FunctionArrays, degree: int, lam_max: int) -> np.ndarray:
    """Profile A(i, nu) = sum over supp f of f(s) at level nu = |x_i - s|^k.

    Support points are processed in fixed-size blocks; each block scatters
    through one weighted bincount, so the accumulation order is fixed.
    """
    n = len(points)
    width = lam_max + 1
    prof = np.zeros(n * width, dtype=np.float64)
    if n == 0 or fa.size == 0:
        return prof.reshape(n, width)
    rows = np.arange(n, dtype=np.int64) * width
    block = max(1, min(fa.size, 2_000_000 // max(n, 1)))
    dim = points.shape[1]
    for start in range(0, fa.size, block):
        sup = fa.points[start : start + block]          # (B, d)
        vals = fa.values[start : start + block]         # (B,)
        lev = np.zeros((n, len(sup)), dtype=np.int64)
        for axis in range(dim):
            dcol = points[:, axis][:, None] - sup[None, :, axis]
            if degree == 2:
                lev += dcol * dcol
            else:
                lev += np.abs(dcol) ** degree
        mask = lev <= lam_max
        idx = (rows[:, None] + lev)[mask]
        weights = np.broadcast_to(vals[None, :], mask.shape)[mask]
        prof += np.bincount(idx, weights=weights, minlength=n * width)
    return prof.reshape(n, width)


def _level_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise truncated convolution along the level axis."""
    n, width = a.shape
    out = np.zeros_like(a)
    for mu in range(width):
        col = a[:, mu]
        if not col.any():
            continue
        out[:, mu:] += col[:, None] * b[:, : width - mu]
    return out


def _pruned_profiles(
    pts: np.ndarray,
    fas: list[_FunctionArrays],
    fs: list[GridFunction],
    degree: int,
    lam_max: int,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Row indices with every input reachable, plus the profiles there.

    Profiles are built smallest support first, shrinking the live set as
    empty rows appear, so large supports are only scattered where needed.
    """
    live = np.ones(len(pts), dtype=bool)
    for f in fs:
        live &= _bbox_reach_mask(pts, f, degree, lam_max)
    idx = np.flatnonzero(live)
    order = sorted(range(len(fas)), key=lambda j: fas[j].size)
    profiles: list[np.ndarray | None] = [None] * len(fas)
    for j in order:
        if len(idx) == 0:
            break
        prof = _level_profile(pts[idx], fas[j], degree, lam_max)
        keep = prof.any(axis=1)
        if not keep.all():
            idx = idx[keep]
            prof = prof[keep]
            for jj in order:
                if profiles[jj] is not None:
                    profiles[jj] = profiles[jj][keep]
        profiles[j] = prof
    if len(idx) == 0:
        width = lam_max + 1
        return idx, [np.zeros((0, width)) for _ in fas]
    return idx, profiles  # type: ignore[return-value]


def _norm_factors(cfg: OperatorConfig, cache: TableCache) -> np.ndarray:
    """norm(lam) for lam = 0..lambda_max; 0 marks an empty sphere (skip)."""
    spec, ell, lam_max = cfg.spec, cfg.linearity, cfg.lambda_max
    if cfg.normalization is Normalization.ASYMPTOTIC:
        expo = ell * spec.dim / spec.degree - 1.0
        lam = np.arange(lam_max + 1, dtype=np.float64)
        lam[0] = 1.0  # level zero uses unit normalization
        return lam**expo
    joint = SphereSpec(dim=spec.dim * ell, degree=spec.degree)
    tab = cache.table(joint, lam_max)
    return np.array([float(c) for c in tab.counts[: lam_max + 1]], dtype=np.float64)


def _collect_sparse(chunks, dim: int) -> GridFunction:
    vals: dict[tuple[int, ...], float] = {}
    for pts, vv in chunks:
        nz = np.flatnonzero(vv)
        for i in nz:
            vals[tuple(int(c) for c in pts[i])] = float(vv[i])
    return GridFunction(dim, vals)


def multilinear_average(fs: list[GridFunction], lam: int, cfg: OperatorConfig,
                        cache: TableCache | None = None) -> GridFunction:
    """Signed l-linear spherical average at a single level lam.

    Exact normalization at an empty sphere (N(lam) = 0) returns the zero
    function and emits EmptySphereWarning; a supremum scan must skip such
    levels rather than abort.
    """
    _check_dims(fs, cfg.spec, cfg.linearity)
    if not isinstance(lam, int) or not cfg.lambda_min <= lam <= cfg.lambda_max:
        raise ParameterError(
            f"lam={lam!r} outside [{cfg.lambda_min}, {cfg.lambda_max}]"
        )
    cache = cache if cache is not None else DEFAULT_CACHE
    norms = _norm_factors(
        OperatorConfig(cfg.spec, cfg.linearity, lam, cfg.normalization,
                       min(cfg.lambda_min, lam)), cache
    )
    if cfg.normalization is Normalization.EXACT and norms[lam] == 0.0:
        warnings.warn(f"empty sphere at lam={lam}: average defined as 0", EmptySphereWarning)
        return GridFunction(cfg.spec.dim, {})
    radius = kth_root_floor(lam, cfg.spec.degree)
    box = _common_grid_box(fs, radius)
    if box is None:
        return GridFunction(cfg.spec.dim, {})
    fas = [_FunctionArrays(f) for f in fs]
    chunks = []
    for pts in _iter_grid_chunks(box, cfg.spec.dim):
        idx, profs = _pruned_profiles(pts, fas, fs, cfg.spec.degree, lam)
        prof = profs[0]
        for p in profs[1:]:
            prof = _level_convolve(prof, p)
        chunks.append((pts[idx], prof[:, lam] / norms[lam]))
    return _collect_sparse(chunks, cfg.spec.dim)


def multilinear_maximal(fs: list[GridFunction], cfg: OperatorConfig,
                        cache: TableCache | None = None) -> GridFunction:
    """sup over lam in [lambda_min, lambda_max] of |T_lam(f_1..f_l)|."""
    _check_dims(fs, cfg.spec, cfg.linearity)
    cache = cache if cache is not None else DEFAULT_CACHE
    norms = _norm_factors(cfg, cache)
    live_levels = [
        lam for lam in range(cfg.lambda_min, cfg.lambda_max + 1) if norms[lam] != 0.0
    ]
    radius = kth_root_floor(cfg.lambda_max, cfg.spec.degree)
    box = _common_grid_box(fs, radius)
    if box is None or not live_levels:
        return GridFunction(cfg.spec.dim, {})
    fas = [_FunctionArrays(f) for f in fs]
    chunks = []
    for pts in _iter_grid_chunks(box, cfg.spec.dim):
        idx, profs = _pruned_profiles(pts, fas, fs, cfg.spec.degree, cfg.lambda_max)
        prof = profs[0]
        for p in profs[1:]:
            prof = _level_convolve(prof, p)
        best = np.zeros(len(idx))
        for lam in live_levels:
            np.maximum(best, np.abs(prof[:, lam]) / norms[lam], out=best)
        chunks.append((pts[idx], best))
    return _collect_sparse(chunks, cfg.spec.dim)


def hl_maximal(f: GridFunction, spec: SphereSpec, lambda_max: int) -> GridFunction:
    """Discrete Hardy-Littlewood maximal function over k-balls:

    M(f)(x) = max_{1 <= lam <= lambda_max} lam^(-d/k) * sum_{|u|^k <= lam} |f(x-u)|.
    """
    if f.dim != spec.dim:
        raise ParameterError(f"input dimension {f.dim} != spec dimension {spec.dim}")
    if not isinstance(lambda_max, int) or lambda_max < 1:
        raise ParameterError(f"lambda_max must be an integer >= 1, got {lambda_max!r}")
    if f.bbox is None:
        return GridFunction(spec.dim, {})
    radius = kth_root_floor(lambda_max, spec.degree)
    box = _common_grid_box([f], radius)
    fa = _FunctionArrays(f, absolute=True)
    lam = np.arange(1, lambda_max + 1, dtype=np.float64)
    weights = lam ** (-spec.dim / spec.degree)
    chunks = []
    for pts in _iter_grid_chunks(box, spec.dim):
        idx, (prof,) = _pruned_profiles(pts, [fa], [f], spec.degree, lambda_max)
        cum = np.cumsum(prof, axis=1)
        best = (cum[:, 1:] * weights).max(axis=1) if len(idx) else np.zeros(0)
        chunks.append((pts[idx], best))
    return _collect_sparse(chunks, spec.dim)


def linear_spherical_maximal(g: GridFunction, spec: SphereSpec, lambda_max: int) -> GridFunction:
    """Discrete linear spherical maximal function:

    S(g)(x) = max_{1 <= mu <= lambda_max} mu^(-(d/k - 1)) * |G_mu(x)|
    with G_mu the slice levels of g.
    """
    if g.dim != spec.dim:
        raise ParameterError(f"input dimension {g.dim} != spec dimension {spec.dim}")
    if not isinstance(lambda_max, int) or lambda_max < 1:
        raise ParameterError(f"lambda_max must be an integer >= 1, got {lambda_max!r}")
    if g.bbox is None:
        return GridFunction(spec.dim, {})
    radius = kth_root_floor(lambda_max, spec.degree)
    box = _common_grid_box([g], radius)
    fa = _FunctionArrays(g)
    mu = np.arange(1, lambda_max + 1, dtype=np.float64)
    weights = mu ** (-(spec.dim / spec.degree - 1.0))
    chunks = []
    for pts in _iter_grid_chunks(box, spec.dim):
        idx, (prof,) = _pruned_profiles(pts, [fa], [g], spec.degree, lambda_max)
        best = (np.abs(prof[:, 1:]) * weights).max(axis=1) if len(idx) else np.zeros(0)
        chunks.append((pts[idx], best))
    return _collect_sparse(chunks, spec.dim)


def _require_nonnegative(f: GridFunction, name: str) -> None:
    for _, v in f.items_sorted():
        if v < 0.0:
            raise ParameterError(f"{name} must be nonnegative for the domination check")


def domination_check_multilinear(
    fs: list[GridFunction],
    spec: SphereSpec,
    lambda_max: int,
) -> DominationReport:
    """Check sup_lam T_lam(f_1..f_l) <= M(f_1) * S~^(l-1)(f_2..f_l) pointwise.

    Asymptotic normalization throughout; inputs must be nonnegative.  The
    majorant's spherical factor includes its level-zero term (see module
    docstring).  Returns the maximum of LHS - RHS over the evaluation grid,
    which for a correct implementation is <= float tolerance.

    Pruned rows (some input unreachable within lambda_max) have LHS = 0 and
    RHS = 0 exactly, hence violation 0; they are counted, not recomputed.
    """
    if len(fs) < 2:
        raise ParameterError("domination check needs at least two input functions")
    for i, f in enumerate(fs):
        if f.dim != spec.dim:
            raise ParameterError(f"input dimension {f.dim} != spec dimension {spec.dim}")
        _require_nonnegative(f, f"input {i}")
    if not isinstance(lambda_max, int) or lambda_max < 1:
        raise ParameterError(f"lambda_max must be an integer >= 1, got {lambda_max!r}")
    if (len(fs) - 1) * spec.dim < spec.degree:
        raise ParameterError(
            f"domination needs (linearity-1)*dim >= degree; got "
            f"({len(fs)} - 1) * {spec.dim} < {spec.degree} (the spherical "
            "normalization is not monotone there and the bound fails)"
        )
    d, k, ell = spec.dim, spec.degree, len(fs)
    radius = kth_root_floor(lambda_max, k)
    box = _common_grid_box(fs, radius)
    if box is None:
        return DominationReport(0.0, None, lambda_max, 0)

    lam = np.arange(lambda_max + 1, dtype=np.float64)
    lam[0] = 1.0
    full_norm = lam ** (ell * d / k - 1.0)        # joint average, level 0 unit
    ball_w = np.arange(1, lambda_max + 1, dtype=np.float64) ** (-d / k)
    rest_norm = lam ** ((ell - 1) * d / k - 1.0)  # (l-1)-linear, level 0 unit

    fas = [_FunctionArrays(f) for f in fs]
    worst = -math.inf
    worst_pt: tuple[int, ...] | None = None
    pruned_pt: tuple[int, ...] | None = None
    checked = 0
    for pts in _iter_grid_chunks(box, d):
        checked += len(pts)
        idx, profs = _pruned_profiles(pts, fas, fs, k, lambda_max)
        if pruned_pt is None and len(idx) < len(pts):
            pruned = np.setdiff1d(np.arange(len(pts)), idx, assume_unique=True)
            pruned_pt = tuple(int(c) for c in pts[pruned[0]])
        if len(idx) == 0:
            continue
        a = profs[0]
        rest = profs[1]
        for p in profs[2:]:
            rest = _level_convolve(rest, p)
        joint = _level_convolve(a, rest)
        lhs = (joint[:, 1:] / full_norm[1:]).max(axis=1)
        m_side = (np.cumsum(a, axis=1)[:, 1:] * ball_w).max(axis=1)
        s_side = (rest / rest_norm).max(axis=1)   # includes the level-zero term
        viol = lhs - m_side * s_side
        i = int(np.argmax(viol))
        if viol[i] > worst:
            worst = float(viol[i])
            worst_pt = tuple(int(c) for c in pts[idx[i]])
    if pruned_pt is not None and 0.0 > worst:
        worst, worst_pt = 0.0, pruned_pt  # pruned rows attain LHS - RHS = 0
    if worst == -math.inf:
        worst, worst_pt = 0.0, None
    return DominationReport(worst, worst_pt, lambda_max, checked)


def domination_check(
    f: GridFunction,
    g: GridFunction,
    spec: SphereSpec,
    lambda_max: int,
) -> DominationReport:
    """Bilinear domination check: sup_lam T_lam(f, g) <= M(f) * S~(g)."""
    return domination_check_multilinear([f, g], spec, lambda_max)
