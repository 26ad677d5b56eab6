"""Sharpness machinery: witness family, decay fits, norm scans, exponents.

The witness family is f_1 = indicator of [-L, L]^d with the other l-1
inputs equal to delta_0.  For this family the maximal operator has an exact
closed form, no level truncation: at a point x the average is nonzero only
for levels in the finite candidate set

    lam(w) = (l-1) * sum_i |x_i|^k + sum_i |x_i - w_i|^k,   w in [-L, L]^d,

and under asymptotic normalization

    witness_value(x) = max over candidate lam >= 1 of
                       #(w attaining lam) * lam^-(l*d/k - 1).

The candidate lam = l * sum |x_i|^k (from w = 0) is always present, so
witness_value(x) >= (l * sum |x_i|^k)^-(l*d/k - 1) for x != 0.  The level
lam = 0 arises only at x = 0, w = 0 and is excluded (level scans start at 1).

Pointwise this family decays like |x|^-(l*d - k), so its l^r norm over a
ball diverges as the radius grows exactly when r <= d/(l*d - k); dyadic
shell sums of witness^r then have asymptotic ratio 2^(d - (l*d - k) * r).
At desk scale the observed ratios sit somewhat below that limit: candidate
levels collide on lattice-special directions (axes, hyperplanes x.w = c)
and those collisions thin out only slowly with the radius.

critical_r / r0_bound / p0_bound are exact rational evaluations of the
threshold formulas; region_classify applies the bilinear degree-2 verdict
rules to an (p, q, r, d) tuple.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .counts import DEFAULT_CACHE, SphereSpec
from .errors import AnalysisError, ParameterError
from .reports import ExponentReport, RegionVerdict, ScanReport

_EXACT_REGION_BUDGET = 200_000
_DEFAULT_SAMPLES = 8_000
_DEFAULT_SEED = 20250808


@dataclass(frozen=True)
class WitnessSpec:
    """Witness family: one box of radius box_radius, linearity-1 deltas."""

    dim: int
    degree: int
    linearity: int
    box_radius: int

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ParameterError(f"dim must be a positive integer, got {self.dim!r}")
        if not isinstance(self.degree, int) or self.degree < 2:
            raise ParameterError(f"degree must be >= 2, got {self.degree!r}")
        if not isinstance(self.linearity, int) or self.linearity < 2:
            raise ParameterError(f"linearity must be >= 2, got {self.linearity!r}")
        if not isinstance(self.box_radius, int) or self.box_radius < 1:
            raise ParameterError(f"box_radius must be >= 1, got {self.box_radius!r}")

    @property
    def sphere(self) -> SphereSpec:
        return SphereSpec(self.dim, self.degree)

    def decay_exponent(self) -> int:
        return self.linearity * self.dim - self.degree


def critical_r(dim: int, degree: int, linearity: int) -> Fraction:
    """Exact l^r threshold d / (l*d - k) below which the witness norm diverges."""
    if not (isinstance(dim, int) and isinstance(degree, int) and isinstance(linearity, int)):
        raise ParameterError("dim, degree, linearity must be integers")
    if dim < 1 or degree < 2 or linearity < 1:
        raise ParameterError(f"invalid (dim, degree, linearity) = ({dim}, {degree}, {linearity})")
    if linearity * dim <= degree:
        raise ParameterError(
            f"need linearity*dim > degree, got {linearity}*{dim} <= {degree}"
        )
    return Fraction(dim, linearity * dim - degree)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact binary value of the float
    if isinstance(x, str):
        return Fraction(x)
    raise ParameterError(f"cannot interpret {x!r} as a rational number")


def r0_bound(delta0, linearity: int) -> Fraction:
    """(2 + 2*delta0) / ((l-1)*(2 + 2*delta0) + (1 + 2*delta0)), exact."""
    d0 = _as_fraction(delta0)
    if d0 < 0:
        raise ParameterError(f"delta0 must be >= 0, got {delta0!r}")
    if not isinstance(linearity, int) or linearity < 1:
        raise ParameterError(f"linearity must be an integer >= 1, got {linearity!r}")
    top = 2 + 2 * d0
    return top / ((linearity - 1) * top + (1 + 2 * d0))


def p0_bound(delta0, dim: int, degree: int) -> Fraction:
    """max(1 + 1/(1 + 2*delta0), d/(d - k)), exact."""
    d0 = _as_fraction(delta0)
    if d0 < 0:
        raise ParameterError(f"delta0 must be >= 0, got {delta0!r}")
    if not (isinstance(dim, int) and isinstance(degree, int)):
        raise ParameterError("dim and degree must be integers")
    if dim <= degree:
        raise ParameterError(f"need dim > degree, got {dim} <= {degree}")
    return max(1 + 1 / (1 + 2 * d0), Fraction(dim, dim - degree))


def _box_offsets(spec: WitnessSpec) -> np.ndarray:
    L = spec.box_radius
    return np.array(
        list(itertools.product(range(-L, L + 1), repeat=spec.dim)), dtype=np.int64
    )


def witness_values(points: np.ndarray, spec: WitnessSpec, *, exact: bool = False) -> np.ndarray:
    """Exact witness supremum at every row of points ((N, dim) integer array).

    Candidate levels are grouped by a row-sorted run-length pass; the level
    lam = 0 (only at x = 0) is excluded from the supremum.

    exact=True divides candidate counts by the true joint count N(lam)
    instead of lam^(l*d/k - 1).  This secondary mode needs the joint count
    table up to the largest candidate level, so keep |x| moderate there;
    decay fits and norm scans always use the asymptotic normalization.
    """
    pts = np.asarray(points, dtype=np.int64)
    if pts.ndim != 2 or pts.shape[1] != spec.dim:
        raise ParameterError(f"points must be an (N, {spec.dim}) integer array")
    box = _box_offsets(spec)
    nb = len(box)
    n = len(pts)
    if n == 0:
        return np.zeros(0)
    k = spec.degree
    base = (spec.linearity - 1) * (np.abs(pts) ** k).sum(axis=1)
    lam = base[:, None] + (np.abs(pts[:, None, :] - box[None, :, :]) ** k).sum(axis=2)
    levels = np.sort(lam, axis=1)
    flat = levels.ravel()
    run_start = np.empty(n * nb, dtype=bool)
    run_start[0] = True
    run_start[1:] = flat[1:] != flat[:-1]
    run_start[::nb] = True  # never merge runs across rows
    starts = np.flatnonzero(run_start)
    counts = np.diff(np.append(starts, n * nb))
    lam_vals = flat[starts]
    if exact:
        joint = SphereSpec(spec.dim * spec.linearity, k)
        table = DEFAULT_CACHE.table(joint, int(lam_vals.max()))
        denom = np.array(
            [float(table.count(int(l))) if l >= 1 else 0.0 for l in lam_vals]
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(denom > 0.0, counts / np.where(denom > 0.0, denom, 1.0), 0.0)
    else:
        lamf = lam_vals.astype(np.float64)
        expo = spec.linearity * spec.dim / k - 1.0
        safe = np.where(lamf >= 1.0, lamf, 1.0)
        vals = np.where(lamf >= 1.0, counts * safe ** (-expo), 0.0)
    rows = starts // nb
    row_start = np.searchsorted(rows, np.arange(n))
    return np.maximum.reduceat(vals, row_start)


def witness_value(x, spec: WitnessSpec, *, exact: bool = False) -> float:
    """Closed-form supremum of the witness maximal function at x.

    Asymptotic normalization by default; exact=True is the comparison mode
    dividing by true joint counts (see witness_values).
    """
    pt = np.array([tuple(int(c) for c in x)], dtype=np.int64)
    if pt.shape[1] != spec.dim:
        raise ParameterError(f"point {x!r} does not have dimension {spec.dim}")
    return float(witness_values(pt, spec, exact=exact)[0])


def decay_fit(
    spec: WitnessSpec,
    direction,
    t_range: tuple[int, int],
    num_samples: int = 64,
) -> ExponentReport:
    """Fit log witness_value(t * direction) against log |t * direction|.

    Expected slope is -(l*d - k); samples are log-spaced integers in t_range.
    """
    direction = tuple(int(c) for c in direction)
    if len(direction) != spec.dim:
        raise ParameterError(f"direction {direction!r} does not have dimension {spec.dim}")
    if all(c == 0 for c in direction):
        raise ParameterError("direction must be nonzero")
    t_lo, t_hi = t_range
    if not (isinstance(t_lo, int) and isinstance(t_hi, int)) or t_lo < 1 or t_hi < t_lo:
        raise ParameterError(f"t_range must be integers with 1 <= t_lo <= t_hi, got {t_range!r}")
    if num_samples < 2:
        raise ParameterError(f"num_samples must be >= 2, got {num_samples!r}")
    if t_lo == t_hi:
        raise AnalysisError("degenerate t_range: a single sample point cannot be fitted")
    if t_hi < 10 * t_lo:
        raise ParameterError(f"t_range {t_range!r} spans less than one decade")
    ts = sorted(
        {
            int(round(t_lo * (t_hi / t_lo) ** (i / (num_samples - 1))))
            for i in range(num_samples)
        }
    )
    dir_arr = np.array(direction, dtype=np.int64)
    pts = np.array(ts, dtype=np.int64)[:, None] * dir_arr[None, :]
    vals = witness_values(pts, spec)
    if not np.all(vals > 0.0):
        raise AnalysisError("witness values vanished along the ray; fit is degenerate")
    xs = np.log(np.sqrt((pts.astype(np.float64) ** 2).sum(axis=1)))
    ys = np.log(vals)
    mx, my = xs.mean(), ys.mean()
    slope = float(((xs - mx) * (ys - my)).sum() / ((xs - mx) ** 2).sum())
    resid = ys - (my + slope * (xs - mx))
    return ExponentReport(
        fitted_slope=slope,
        expected_slope=-float(spec.decay_exponent()),
        residual=float(np.sqrt(np.mean(resid**2))),
        sample_range=f"t in [{t_lo}, {t_hi}] along {direction}, {len(ts)} samples",
    )


def _ball_volume(dim: int, radius: float) -> float:
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1) * radius**dim


def _region_exact_sum(spec: WitnessSpec, r_lo: float, r_hi: float, r_exp: float) -> float:
    """Exact sum of witness^r over r_lo < |x| <= r_hi, chunked enumeration."""
    R = int(math.floor(r_hi))
    d = spec.dim
    tail_axes = [np.arange(-R, R + 1)] * (d - 1)
    if d == 1:
        tail = np.zeros((1, 0), dtype=np.int64)
        tail_norm = np.zeros(1)
    else:
        tail = np.stack(np.meshgrid(*tail_axes, indexing="ij"), axis=-1).reshape(-1, d - 1)
        tail = tail.astype(np.int64)
        tail_norm = (tail.astype(np.float64) ** 2).sum(axis=1)
    total = 0.0
    for x0 in range(-R, R + 1):
        nrm = tail_norm + float(x0) * x0
        mask = (nrm > r_lo * r_lo) & (nrm <= r_hi * r_hi)
        m = int(mask.sum())
        if m == 0:
            continue
        pts = np.concatenate([np.full((m, 1), x0, dtype=np.int64), tail[mask]], axis=1)
        for i in range(0, m, 60_000):
            total += float((witness_values(pts[i : i + 60_000], spec) ** r_exp).sum())
    return total


def _region_sampled_sum(
    spec: WitnessSpec, r_lo: float, r_hi: float, r_exp: float, rng, samples: int
) -> float:
    """Unbiased volume-weighted estimate of the region sum.

    Points are drawn uniformly from the continuous annulus and rounded to
    the lattice; the mean is weighted by the annulus volume, which estimates
    the cell-weighted lattice sum (boundary cells carry fractional weight).
    """
    d = spec.dim
    total = 0.0
    done = 0
    batch = 30_000
    while done < samples:
        nbatch = min(batch, samples - done)
        u = rng.standard_normal((nbatch, d))
        u /= np.linalg.norm(u, axis=1)[:, None]
        rho = (rng.random(nbatch) * (r_hi**d - r_lo**d) + r_lo**d) ** (1.0 / d)
        pts = np.rint(u * rho[:, None]).astype(np.int64)
        total += float((witness_values(pts, spec) ** r_exp).sum())
        done += nbatch
    vol = _ball_volume(d, r_hi) - _ball_volume(d, r_lo)
    return vol * total / samples


def partial_norm_scan(
    spec: WitnessSpec,
    r: float,
    radii: list[int],
    *,
    seed: int = _DEFAULT_SEED,
    exact_budget: int = _EXACT_REGION_BUDGET,
    samples_per_region: int = _DEFAULT_SAMPLES,
) -> ScanReport:
    """Partial l^r norms of witness_value over |x| <= R plus shell sums.

    Regions are the inner ball (0, radii[0]] and annuli between consecutive
    radii.  Regions whose estimated lattice count fits the budget are
    enumerated exactly; larger ones are sampled (seeded per region, so the
    result is independent of any execution partitioning).
    """
    if not r > 0:
        raise ParameterError(f"r must be positive, got {r!r}")
    if len(radii) < 2:
        raise ParameterError("need at least two radii")
    if any(not isinstance(R, int) or R < 1 for R in radii):
        raise ParameterError(f"radii must be positive integers, got {radii!r}")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ParameterError(f"radii must be strictly increasing, got {radii!r}")
    if not isinstance(seed, int) or seed < 0:
        raise ParameterError(f"seed must be a nonnegative integer, got {seed!r}")
    if exact_budget < 0 or samples_per_region < 1:
        raise ParameterError("exact_budget must be >= 0 and samples_per_region >= 1")
    bounds = [(0.0, float(radii[0]))] + [
        (float(a), float(b)) for a, b in zip(radii, radii[1:])
    ]
    region_sums: list[float] = []
    modes: list[str] = []
    for idx, (lo, hi) in enumerate(bounds):
        est = _ball_volume(spec.dim, hi) - _ball_volume(spec.dim, lo)
        if est <= exact_budget:
            s = _region_exact_sum(spec, lo, hi, r)
            if idx == 0:  # the inner region includes the origin itself
                s += witness_value((0,) * spec.dim, spec) ** r
            modes.append("exact")
        else:
            s = _region_sampled_sum(
                spec, lo, hi, r, np.random.default_rng([seed, idx]), samples_per_region
            )
            modes.append("sampled")
        region_sums.append(s)
    partial = []
    acc = 0.0
    for s in region_sums:
        acc += s
        partial.append(acc ** (1.0 / r))
    shell_sums = region_sums[1:]
    ratios = [b / a for a, b in zip(shell_sums, shell_sums[1:])]
    return ScanReport(
        r=float(r),
        radii=list(radii),
        partial_norms=partial,
        shell_sums=shell_sums,
        ratios=ratios,
        seed=seed,
        region_modes=modes,
    )


def region_classify(p, q, r, dim: int, *, degree: int = 2, linearity: int = 2) -> RegionVerdict:
    """Boundedness verdict for the bilinear degree-2 maximal operator.

    BOUNDED:   dim >= 5, p > 1, q > 1, 1/p + 1/q >= 1/r, r > d/(2d-2).
    UNBOUNDED: r <= d/(2d-2)  (witness norm diverges; at equality the strict
               convention is used and the reason notes that the degree-k
               divergence statement includes equality).
    UNKNOWN:   endpoints p = 1 or q = 1, dimensions 3-4 (different methods
               give r > d/(d-2) there), dim < 3, or 1/p + 1/q < 1/r.
    """
    if degree != 2 or linearity != 2:
        raise ParameterError("region_classify covers the bilinear degree-2 operator only")
    if not isinstance(dim, int) or dim < 1:
        raise ParameterError(f"dim must be a positive integer, got {dim!r}")
    pf, qf, rf = _as_fraction(p), _as_fraction(q), _as_fraction(r)
    if pf <= 0 or qf <= 0 or rf <= 0:
        raise ParameterError(f"p, q, r must be positive, got ({p!r}, {q!r}, {r!r})")
    if 2 * dim - 2 <= 0:
        raise ParameterError(f"dim {dim} gives a degenerate critical exponent")
    r_disp = repr(r) if isinstance(r, float) else str(rf)
    crit = Fraction(dim, 2 * dim - 2)
    if rf <= crit:
        reason = f"r = {r_disp} <= d/(2d-2) = {crit}: witness l^r norm diverges"
        if rf == crit:
            reason += (
                " (strict-inequality convention; the degree-k divergence "
                "statement includes equality, the conventions disagree only here)"
            )
        return RegionVerdict(verdict="UNBOUNDED", reason=reason)
    problems = []
    if dim < 5:
        if dim >= 3:
            problems.append(
                f"dim {dim} in {{3,4}}: this method needs d >= 5; other methods "
                f"give r > d/(d-2) = {Fraction(dim, dim - 2)} there"
            )
        else:
            problems.append(f"dim {dim} < 3: outside the studied range")
    p_disp = repr(p) if isinstance(p, float) else str(pf)
    q_disp = repr(q) if isinstance(q, float) else str(qf)
    if pf <= 1:
        problems.append(f"p = {p_disp} <= 1 endpoint (restricted weak-type territory)")
    if qf <= 1:
        problems.append(f"q = {q_disp} <= 1 endpoint (restricted weak-type territory)")
    if 1 / pf + 1 / qf < 1 / rf:
        problems.append(
            f"1/p + 1/q = {float(1 / pf + 1 / qf):.6g} < 1/r = {float(1 / rf):.6g}: "
            "outside the Holder range; no divergence witness is known for this regime"
        )
    if problems:
        return RegionVerdict(verdict="UNKNOWN", reason="; ".join(problems))
    return RegionVerdict(
        verdict="BOUNDED",
        reason=f"d = {dim} >= 5, p > 1, q > 1, 1/p + 1/q >= 1/r, r > d/(2d-2) = {crit}",
    )
