"""Growth functionals of tensor powers and the inequality audit.

For a representation given as a :class:`~qdim.fusion.Decomposition` this
module measures P(n), the largest irrep dimension inside the n-th tensor
power, and b(n), the sum of squared dimensions of all distinct irreps met
in powers 0..n.  A finite-sample rate classifier labels the growth of
b(n), and :func:`theorem_audit` re-checks, row by row, the bounds that tie
the power-sum functionals d_t to P(n).  Those bounds are theorems: any
numerical violation is an implementation bug and raises, it is never
reported as a finding.  :func:`build_counterexample` constructs the
diagonal 3x3 family whose spectrum satisfies the trace identity but is
not symmetric under inversion.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .errors import (
    InternalInvariantError,
    TheoremViolationError,
    ValidationError,
)
from .fusion import Decomposition, FreeUnitaryRing, FusionRing, Guards
from .numerics import Scalar, as_scalar, scalar_sqrt, solve_quadratic_positive, tolerance
from .spectra import (
    RhoSpectrum,
    SymmetryVerdict,
    d_t,
    is_symmetric,
    rho_from_F,
    symmetric_by_newton,
)

__all__ = [
    "GrowthRow",
    "GrowthTable",
    "RateEstimate",
    "AuditRow",
    "AsymmetryRecord",
    "TheoremAudit",
    "CounterexampleReport",
    "p_growth",
    "b_growth",
    "growth_table",
    "estimate_rate",
    "theorem_audit",
    "build_counterexample",
    "counterexample_ring",
    "default_max_n",
]

_HEURISTIC_NOTE = (
    "finite-sample classification over the computed rows; not a statement "
    "about the n -> infinity limit"
)


def default_max_n(ring: FusionRing) -> int:
    """Desk-scale defaults keyed to how fast each catalog grows."""
    if ring.kind == "au":
        return 6
    if ring.kind == "group_dual":
        return 12
    return 8


def p_growth(ring: FusionRing, u: Decomposition, n: int) -> int:
    """Largest irrep dimension inside the n-th tensor power of u."""
    if u.ring is not ring:
        raise ValidationError("decomposition does not belong to this catalog")
    return u.power(n).max_dim()


def b_growth(ring: FusionRing, u: Decomposition, n: int) -> int:
    """Sum of squared dimensions over distinct irreps in powers 0..n."""
    return growth_table(ring, u, n).rows[-1].b_sum


@dataclass(frozen=True)
class GrowthRow:
    n: int
    p_max: int
    b_sum: int
    b_root: Scalar | None  # b(n)^(1/n), defined for n >= 1
    local_base: Scalar | None  # sqrt(b(n)/b(n-1)), running dimension-base


@dataclass(frozen=True)
class GrowthTable:
    rows: tuple[GrowthRow, ...]

    @property
    def n_max(self) -> int:
        return self.rows[-1].n


def growth_table(ring: FusionRing, u: Decomposition, n_max: int) -> GrowthTable:
    if u.ring is not ring:
        raise ValidationError("decomposition does not belong to this catalog")
    if not isinstance(n_max, int) or n_max < 0:
        raise ValidationError("n_max must be a non-negative integer")
    rows = []
    seen: set = set()
    current = Decomposition.unit(ring)
    prev_b = None
    for n in range(n_max + 1):
        if n > 0:
            current = current.fuse(u)
        seen.update(current.labels())
        p_max = current.max_dim()
        b_sum = sum(ring.dim(label) ** 2 for label in seen)
        if p_max > b_sum:
            raise InternalInvariantError(
                f"P(n) = {p_max} exceeded b(n) = {b_sum} at n = {n}"
            )
        if prev_b is not None and b_sum < prev_b:
            raise InternalInvariantError(f"b(n) decreased at n = {n}")
        b_root = Scalar(mp.power(b_sum, mp.mpf(1) / n)) if n >= 1 else None
        local = (
            scalar_sqrt(as_scalar(b_sum) / as_scalar(prev_b))
            if prev_b is not None
            else None
        )
        rows.append(GrowthRow(n, p_max, b_sum, b_root, local))
        prev_b = b_sum
    return GrowthTable(tuple(rows))


@dataclass(frozen=True)
class RateEstimate:
    n_max: int
    b_final: int
    root_final: Scalar  # b(N)^(1/N)
    half_window_slope: Scalar  # least-squares slope of ln b over last half
    base_estimate: Scalar  # sqrt(b(N)/b(N-1)): dimension growth base
    rates_nonincreasing: bool
    classification: str  # "subexponential-consistent" | "exponential-consistent"
    band: tuple[Scalar, Scalar]
    note: str = _HEURISTIC_NOTE


def estimate_rate(table: GrowthTable, band=("1", "1.05")) -> RateEstimate:
    """Classify the growth of b(n) from its computed rows.

    ``base_estimate`` is the square root of the last b-ratio: b sums
    squared dimensions, so this tracks how dimensions themselves grow.
    The verdict is "subexponential-consistent" when that estimate sits in
    the configured band around 1 and the sequence b(n)^(1/n) has been
    non-increasing over the last half-window; otherwise the table is
    labeled "exponential-consistent" with the estimated base.  Either way
    this is a heuristic about the computed rows, never a limit claim.
    """
    rows = table.rows
    n_max = rows[-1].n
    if n_max < 4:
        raise ValidationError("rate estimation needs a table with n_max >= 4")
    lo, hi = as_scalar(band[0]), as_scalar(band[1])
    window = [row for row in rows if row.n >= n_max - n_max // 2]
    slope = _ls_slope(
        [mp.mpf(row.n) for row in window],
        [mp.log(mp.mpf(row.b_sum)) for row in window],
    )
    base = scalar_sqrt(as_scalar(rows[-1].b_sum) / as_scalar(rows[-2].b_sum))
    roots = [row.b_root.mpf() for row in window if row.b_root is not None]
    slack = tolerance()
    nonincreasing = all(b <= a + slack for a, b in zip(roots, roots[1:]))
    if lo <= base <= hi and nonincreasing:
        verdict = "subexponential-consistent"
    else:
        verdict = "exponential-consistent"
    return RateEstimate(
        n_max=n_max,
        b_final=rows[-1].b_sum,
        root_final=rows[-1].b_root,
        half_window_slope=Scalar(slope),
        base_estimate=base,
        rates_nonincreasing=nonincreasing,
        classification=verdict,
        band=(lo, hi),
    )


def _ls_slope(xs, ys):
    n = len(xs)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    num = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    den = sum((x - xbar) ** 2 for x in xs)
    return num / den


@dataclass(frozen=True)
class AuditRow:
    """One audited pair of bounds at a given (n, t).

    forward:  d_t(U)^n  <= P(n)^(t-1) d_{-t}(U)^n
    backward: d_{-t}(U)^n <= P(n)^(t-1) d_t(U)^n
    Margins are right side over left side (>= 1 when the bound holds).
    """

    n: int
    t: Scalar
    p_n: int
    forward_lhs: Scalar
    forward_rhs: Scalar
    forward_margin: Scalar
    backward_lhs: Scalar
    backward_rhs: Scalar
    backward_margin: Scalar


@dataclass(frozen=True)
class ContrapositiveRow:
    n: int
    c_power_n: Scalar
    p_n: int
    margin: Scalar  # P(n) / c^n


@dataclass(frozen=True)
class AsymmetryRecord:
    """Asymmetry detected at probe t: the forced growth constant c > 1
    together with the per-n confirmation that P(n) >= c^n."""

    t: Scalar
    c: Scalar
    rows: tuple[ContrapositiveRow, ...]


@dataclass(frozen=True)
class TheoremAudit:
    n_max: int
    probes: tuple[Scalar, ...]
    rows: tuple[AuditRow, ...]
    verdict: SymmetryVerdict
    newton_agrees: bool
    asymmetry: tuple[AsymmetryRecord, ...]


def theorem_audit(
    ring: FusionRing,
    u: Decomposition,
    n_max: int | None = None,
    probes=(as_scalar("1.5"), as_scalar(2), as_scalar(3)),
) -> TheoremAudit:
    """Check the proof bounds row by row and decide spectrum symmetry.

    For every n <= n_max and probe t > 1 both bounds tying d_t, d_{-t}
    and P(n) are evaluated; a failed bound raises
    :class:`TheoremViolationError` (exit code 4 in the CLI) because these
    are proven statements.  When the spectrum is asymmetric, each probe
    that separates d_t from d_{-t} yields a constant c > 1, and the audit
    confirms P(n) >= c^n over the whole range, which is how asymmetry
    forces exponential growth.
    """
    if u.ring is not ring:
        raise ValidationError("decomposition does not belong to this catalog")
    if n_max is None:
        n_max = default_max_n(ring)
    if not isinstance(n_max, int) or n_max < 1:
        raise ValidationError("n_max must be an integer >= 1")
    ts = tuple(as_scalar(t) for t in probes)
    for t in ts:
        if not t > as_scalar(1):
            raise ValidationError(f"probe exponents must be > 1, got {t}")

    spectrum = u.spectrum()
    pairs = {t: (d_t(spectrum, t), d_t(spectrum, -t)) for t in ts}

    rel = tolerance()
    rows = []
    p_values = []
    current = Decomposition.unit(ring)
    for n in range(1, n_max + 1):
        current = current.fuse(u)
        p_n = current.max_dim()
        p_values.append(p_n)
        for t in ts:
            dt_val, dmt_val = pairs[t]
            factor = as_scalar(p_n) ** (t - as_scalar(1))
            fwd_lhs = dt_val ** n
            fwd_rhs = factor * dmt_val ** n
            bwd_lhs = dmt_val ** n
            bwd_rhs = factor * dt_val ** n
            _require_bound(fwd_lhs, fwd_rhs, n, t, "d_t(U)^n", rel)
            _require_bound(bwd_lhs, bwd_rhs, n, t, "d_-t(U)^n", rel)
            rows.append(
                AuditRow(
                    n=n,
                    t=t,
                    p_n=p_n,
                    forward_lhs=fwd_lhs,
                    forward_rhs=fwd_rhs,
                    forward_margin=fwd_rhs / fwd_lhs,
                    backward_lhs=bwd_lhs,
                    backward_rhs=bwd_rhs,
                    backward_margin=bwd_rhs / bwd_lhs,
                )
            )

    verdict = is_symmetric(spectrum)
    newton = symmetric_by_newton(spectrum)
    if bool(verdict) != newton:
        raise InternalInvariantError(
            "sorted-list and power-sum symmetry decisions disagree"
        )

    asymmetry = []
    if not verdict:
        one = as_scalar(1)
        for t in ts:
            dt_val, dmt_val = pairs[t]
            ratio = dt_val / dmt_val
            if ratio.close_to(one):
                continue
            c = max(ratio, one / ratio) ** (one / (t - one))
            crows = []
            for n in range(1, n_max + 1):
                cn = c ** n
                p_n = as_scalar(p_values[n - 1])
                if p_n.mpf() < cn.mpf() * (1 - rel):
                    raise TheoremViolationError(
                        f"P({n}) = {p_n} fell below c^{n} = "
                        f"{cn.decimal_str(20)} at probe t = {t}"
                    )
                crows.append(
                    ContrapositiveRow(
                        n=n, c_power_n=cn, p_n=p_values[n - 1], margin=p_n / cn
                    )
                )
            asymmetry.append(AsymmetryRecord(t=t, c=c, rows=tuple(crows)))

    return TheoremAudit(
        n_max=n_max,
        probes=ts,
        rows=tuple(rows),
        verdict=verdict,
        newton_agrees=True,
        asymmetry=tuple(asymmetry),
    )


def _require_bound(lhs, rhs, n, t, name, rel):
    if lhs.mpf() > rhs.mpf() * (1 + rel):
        raise TheoremViolationError(
            f"{name} exceeded its bound at n = {n}, t = {t}: "
            f"{lhs.decimal_str(20)} > {rhs.decimal_str(20)}"
        )


@dataclass(frozen=True)
class CounterexampleReport:
    """The diagonal family diag(y, x, x), y > 1, whose spectrum satisfies
    the trace identity yet is not symmetric under inversion."""

    y: Scalar
    x: Scalar
    x_squared: Scalar
    f_diagonal: tuple[Scalar, Scalar, Scalar]
    spectrum: RhoSpectrum
    trace: Scalar
    trace_inverse: Scalar
    trace_residual: Scalar
    quadratic_residual: Scalar
    verdict: SymmetryVerdict


def build_counterexample(y) -> CounterexampleReport:
    """Build F = diag(y, x, x) with x > 0 chosen so the trace identity
    holds, and verify the resulting spectrum {y^2, x^2, x^2} is asymmetric.

    x^2 is the positive root of 2 s^2 + (y^2 - y^-2) s - 2 = 0, which is
    the trace identity 2/x^2 + 1/y^2 = 2 x^2 + y^2 cleared of
    denominators.
    """
    y = as_scalar(y)
    if not y > as_scalar(1):
        raise ValidationError("y must be strictly greater than 1")
    linear = y ** 2 - y ** -2
    s = solve_quadratic_positive(2, linear, -2)
    residual = abs(as_scalar(2) * s * s + linear * s - as_scalar(2))
    x = scalar_sqrt(s)
    zero = as_scalar(0)
    F = [[y, zero, zero], [zero, x, zero], [zero, zero, x]]
    spectrum = rho_from_F(F, auto_normalize=False)
    trace = d_t(spectrum, 1)
    trace_inverse = d_t(spectrum, -1)
    verdict = is_symmetric(spectrum)
    if verdict:
        raise InternalInvariantError(
            "counterexample spectrum came out symmetric; this cannot happen "
            "for y > 1"
        )
    return CounterexampleReport(
        y=y,
        x=x,
        x_squared=s,
        f_diagonal=(y, x, x),
        spectrum=spectrum,
        trace=trace,
        trace_inverse=trace_inverse,
        trace_residual=abs(trace - trace_inverse),
        quadratic_residual=residual,
        verdict=verdict,
    )


def counterexample_ring(y, guards: Guards | None = None) -> FreeUnitaryRing:
    """Word-fusion catalog whose fundamental spectrum is the asymmetric
    counterexample at the given y."""
    report = build_counterexample(y)
    return FreeUnitaryRing(fundamental_spectrum=report.spectrum, guards=guards)
