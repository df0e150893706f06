"""Eigenvalue-multiset algebra for rho operators.

A :class:`RhoSpectrum` is the sorted multiset of strictly positive
eigenvalues attached to a unitary representation.  The module builds
spectra from invertible F matrices, evaluates the power-sum functionals
d_t, decides spectrum symmetry under inversion, combines spectra under
tensor product and direct sum, and reconstructs elementary symmetric
values from power sums (the decidable form of multiset equality).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MultisetMismatchError, ValidationError
from .numerics import (
    ComplexScalar,
    HermitianMatrix,
    Scalar,
    as_complex,
    as_scalar,
    eigenvalues_hermitian,
    scalar_sqrt,
    tolerance,
)

__all__ = [
    "RhoSpectrum",
    "SymmetryVerdict",
    "DtProfile",
    "rho_from_F",
    "d_t",
    "inverse_spectrum",
    "is_symmetric",
    "tensor",
    "direct_sum",
    "multiset_subtract",
    "power_sums",
    "newton_reconstruct",
    "newton_equal",
    "symmetric_by_newton",
    "eigenvalue_close",
    "spectra_close",
    "max_pairwise_gap",
]


class RhoSpectrum:
    """Sorted multiset of strictly positive eigenvalues.

    Stored in descending order.  The constructor tags whether the trace
    identity sum(lam) = sum(1/lam) holds (a *normalized* spectrum).  The
    empty spectrum is permitted as the unit of direct sums.
    """

    __slots__ = ("_eigs", "_normalized")

    def __init__(self, eigenvalues):
        eigs = sorted((as_scalar(x) for x in eigenvalues), reverse=True)
        for lam in eigs:
            if not lam.is_positive():
                raise ValidationError(
                    f"eigenvalues must be strictly positive, got {lam}"
                )
        self._eigs = tuple(eigs)
        self._normalized = self._check_normalized()

    def _check_normalized(self) -> bool:
        if not self._eigs:
            return True
        total = _ZERO
        total_inv = _ZERO
        for lam in self._eigs:
            total = total + lam
            total_inv = total_inv + _ONE / lam
        scale = tolerance() * max(as_scalar(1), total).mpf()
        return total.close_to(total_inv, scale)

    @property
    def eigenvalues(self) -> tuple[Scalar, ...]:
        return self._eigs

    @property
    def dim(self) -> int:
        return len(self._eigs)

    @property
    def normalized(self) -> bool:
        return self._normalized

    def __len__(self):
        return len(self._eigs)

    def __iter__(self):
        return iter(self._eigs)

    def __repr__(self):
        shown = ", ".join(e.decimal_str(10) for e in self._eigs[:6])
        if len(self._eigs) > 6:
            shown += ", ..."
        return f"RhoSpectrum([{shown}], dim={self.dim})"


_ZERO = as_scalar(0)
_ONE = as_scalar(1)


@dataclass(frozen=True)
class SymmetryVerdict:
    """Outcome of the symmetry decision, with a witness on failure.

    ``witness`` is ``(index, value, inverse_value)`` for the first position
    where the sorted spectrum and the sorted inverse spectrum disagree.
    """

    symmetric: bool
    witness: tuple[int, Scalar, Scalar] | None = None

    def __bool__(self) -> bool:
        return self.symmetric


@dataclass(frozen=True)
class DtProfile:
    """Evaluations of t -> sum(lam^t) over a list of probe exponents."""

    exponents: tuple[Scalar, ...]
    values: tuple[Scalar, ...]

    @classmethod
    def compute(cls, spectrum: RhoSpectrum, exponents) -> "DtProfile":
        if spectrum.dim == 0:
            raise ValidationError("cannot profile the empty spectrum")
        ts = tuple(as_scalar(t) for t in exponents)
        return cls(ts, tuple(d_t(spectrum, t) for t in ts))


def eigenvalue_close(a, b) -> bool:
    """Eigenvalue equality test: exact in exact mode, else scaled tolerance.

    Two eigenvalues match when |a - b| <= 10^(-P/2) * max(1, a, b).
    """
    a, b = as_scalar(a), as_scalar(b)
    if a.is_exact and b.is_exact:
        return a.value == b.value
    scale = max(_ONE, a, b).mpf()
    return abs(a.mpf() - b.mpf()) <= tolerance() * scale


def rho_from_F(F, auto_normalize: bool = False) -> RhoSpectrum:
    """Spectrum of the positive operator built from an invertible matrix F.

    Computes the eigenvalues of F*F (the adjoint of F times F; transposing
    does not change them).  The trace identity Tr = Tr of the inverse is
    required: if it fails and ``auto_normalize`` is set, the spectrum is
    rescaled by the fourth-root factor that restores it, otherwise the
    violation is reported with both traces attached.
    """
    rows = [[as_complex(e) for e in row] for row in F]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValidationError("F must be a non-empty square matrix")
    gram = _adjoint_times_self(rows, n)
    eigs = eigenvalues_hermitian(gram)
    floor = tolerance()
    if eigs[-1].mpf() <= floor:
        raise ValidationError(
            "F is singular (F*F has an eigenvalue below tolerance)"
        )
    total = _ZERO
    total_inv = _ZERO
    for lam in eigs:
        total = total + lam
        total_inv = total_inv + _ONE / lam
    scale = tolerance() * max(_ONE, total).mpf()
    if not total.close_to(total_inv, scale):
        if not auto_normalize:
            err = ValidationError(
                "trace condition violated: Tr = "
                f"{total.decimal_str(20)} but inverse trace = "
                f"{total_inv.decimal_str(20)}; pass auto_normalize to rescale"
            )
            err.trace = total
            err.trace_inverse = total_inv
            raise err
        c_squared = scalar_sqrt(total_inv / total)
        eigs = [lam * c_squared for lam in eigs]
    return RhoSpectrum(eigs)


def _adjoint_times_self(rows, n) -> HermitianMatrix:
    entries = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = ComplexScalar(0, 0)
            for k in range(n):
                acc = acc + rows[k][i].conjugate() * rows[k][j]
            entries[i][j] = acc
            if i != j:
                entries[j][i] = acc.conjugate()
    return HermitianMatrix(entries)


def d_t(s: RhoSpectrum, t) -> Scalar:
    """The power-sum functional sum(lam^t); d_0 is the dimension."""
    t = as_scalar(t)
    total = _ZERO
    for lam in s:
        total = total + lam ** t
    return total


def inverse_spectrum(s: RhoSpectrum) -> RhoSpectrum:
    """Multiset of reciprocals; also the conjugate representation's spectrum."""
    return RhoSpectrum([_ONE / lam for lam in s])


def is_symmetric(s: RhoSpectrum) -> SymmetryVerdict:
    """Whether the sorted spectrum equals its sorted inverse, elementwise."""
    inv = inverse_spectrum(s)
    for i, (lam, mu) in enumerate(zip(s.eigenvalues, inv.eigenvalues)):
        if not eigenvalue_close(lam, mu):
            return SymmetryVerdict(False, (i, lam, mu))
    return SymmetryVerdict(True)


def tensor(a: RhoSpectrum, b: RhoSpectrum) -> RhoSpectrum:
    """All pairwise products; realizes the product representation's spectrum."""
    return RhoSpectrum([lam * mu for lam in a for mu in b])


def direct_sum(a: RhoSpectrum, b: RhoSpectrum) -> RhoSpectrum:
    """Multiset union; realizes the direct sum's spectrum."""
    return RhoSpectrum(list(a.eigenvalues) + list(b.eigenvalues))


def multiset_subtract(whole: RhoSpectrum, part: RhoSpectrum) -> RhoSpectrum:
    """Remove one copy of each element of ``part`` from ``whole``.

    Matching is greedy nearest-value pairing: float spectra arriving from
    independent computations differ in their last digits, so each element
    of ``part`` takes the closest unused element of ``whole`` and fails
    only when that gap exceeds the eigenvalue tolerance.
    """
    pool = list(whole.eigenvalues)
    used = [False] * len(pool)
    for x in part.eigenvalues:
        best = None
        best_gap = None
        for i, lam in enumerate(pool):
            if used[i]:
                continue
            gap = abs((lam - x).mpf())
            if best is None or gap < best_gap:
                best, best_gap = i, gap
        if best is None:
            raise MultisetMismatchError(
                f"nothing left to match {x.decimal_str(20)}", orphan=x
            )
        if not eigenvalue_close(pool[best], x):
            raise MultisetMismatchError(
                f"no match for {x.decimal_str(20)}: closest candidate "
                f"{pool[best].decimal_str(20)} differs by {best_gap}",
                orphan=x,
                closest=pool[best],
                gap=Scalar(best_gap),
            )
        used[best] = True
    return RhoSpectrum([lam for i, lam in enumerate(pool) if not used[i]])


def power_sums(s: RhoSpectrum, n: int | None = None) -> list[Scalar]:
    """The integer power sums p_1 .. p_n of the spectrum (n defaults to dim)."""
    if n is None:
        n = s.dim
    return [d_t(s, k) for k in range(1, n + 1)]


def newton_reconstruct(sums, n: int) -> list[Scalar]:
    """Elementary symmetric values e_1 .. e_n from power sums p_1 .. p_n.

    Uses the triangular recurrence k*e_k = sum_{i=1..k} (-1)^(i-1)
    e_{k-i} p_i.  Two positive multisets of cardinality <= n are equal
    exactly when their reconstructed e-vectors agree.
    """
    p = [as_scalar(x) for x in sums]
    if len(p) != n:
        raise ValidationError(
            f"need exactly {n} power sums, got {len(p)}"
        )
    e = [_ONE]  # e_0
    for k in range(1, n + 1):
        acc = _ZERO
        sign = 1
        for i in range(1, k + 1):
            term = e[k - i] * p[i - 1]
            acc = acc + term if sign > 0 else acc - term
            sign = -sign
        e.append(acc / as_scalar(k))
    return e[1:]


def newton_equal(a: RhoSpectrum, b: RhoSpectrum) -> bool:
    """Multiset equality decided through reconstructed e-vectors."""
    if a.dim != b.dim:
        return False
    n = a.dim
    ea = newton_reconstruct(power_sums(a, n), n)
    eb = newton_reconstruct(power_sums(b, n), n)
    for x, y in zip(ea, eb):
        if x.is_exact and y.is_exact:
            if x.value != y.value:
                return False
            continue
        scale = max(_ONE, abs(x), abs(y)).mpf()
        if abs(x.mpf() - y.mpf()) > tolerance() * scale:
            return False
    return True


def symmetric_by_newton(s: RhoSpectrum) -> bool:
    """Symmetry decided via power sums, independent of sorted comparison."""
    return newton_equal(s, inverse_spectrum(s))


def spectra_close(a: RhoSpectrum, b: RhoSpectrum, tol=None) -> bool:
    """Same cardinality and pairwise |a_i - b_i| <= tol (absolute)."""
    if a.dim != b.dim:
        return False
    if a.dim == 0:
        return True
    return max_pairwise_gap(a, b).mpf() <= as_scalar(
        tol if tol is not None else Scalar(tolerance())
    ).mpf()


def max_pairwise_gap(a: RhoSpectrum, b: RhoSpectrum) -> Scalar:
    """Largest elementwise gap between two equal-cardinality spectra."""
    if a.dim != b.dim:
        raise ValidationError("spectra have different cardinalities")
    gap = _ZERO
    for lam, mu in zip(a.eigenvalues, b.eigenvalues):
        gap = max(gap, abs(lam - mu))
    return gap
