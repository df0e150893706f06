"""Number backend: exact rationals, arbitrary-precision floats, and a
small Hermitian eigensolver.

Every real quantity in the package is a :class:`Scalar`, which holds either
an exact ``fractions.Fraction`` or an ``mpmath.mpf`` evaluated at the
process-wide working precision.  Arithmetic stays exact as long as both
operands are exact and the operation is rational; anything else drops to
the float backend.  The working precision (decimal digits, default 60) is
global configuration, like mpmath's own context; all derived tolerances
come from it so nothing downstream hardcodes an epsilon.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import ConvergenceError, ValidationError

__all__ = [
    "Scalar",
    "as_scalar",
    "scalar_sqrt",
    "set_precision",
    "get_precision",
    "precision",
    "tolerance",
    "ComplexScalar",
    "as_complex",
    "HermitianMatrix",
    "eigenvalues_hermitian",
    "solve_quadratic_positive",
]

# Guard digits beyond the advertised precision absorb roundoff in long
# product chains and in the eigensolver's rotations.
_GUARD_DIGITS = 10

_digits = 60
mp.dps = _digits + _GUARD_DIGITS


def set_precision(digits: int) -> None:
    """Set the working precision to ``digits`` decimal digits (global)."""
    digits = int(digits)
    if digits < 1:
        raise ValidationError("precision must be at least 1 decimal digit")
    global _digits
    _digits = digits
    mp.dps = digits + _GUARD_DIGITS


def get_precision() -> int:
    return _digits


@contextmanager
def precision(digits: int):
    """Temporarily run at a different working precision."""
    saved = _digits
    set_precision(digits)
    try:
        yield
    finally:
        set_precision(saved)


def tolerance():
    """Absolute comparison tolerance 10^(-P/2) at the current precision."""
    return mp.mpf(10) ** (-mp.mpf(_digits) / 2)


def _is_fraction(v) -> bool:
    return isinstance(v, Fraction)


class Scalar:
    """A real number backed by an exact rational or an mpf.

    Construct through :func:`as_scalar`; ints, Fractions and numeric
    strings (``"3/4"``, ``"2.5"``, ``"1e-3"``) stay exact, Python floats
    and mpfs use the float backend.
    """

    __slots__ = ("_v",)

    def __init__(self, value):
        # internal: value must already be a Fraction or an mpf
        self._v = value

    @property
    def is_exact(self) -> bool:
        return _is_fraction(self._v)

    @property
    def value(self):
        return self._v

    def mpf(self):
        """The value as an mpf at the current working precision."""
        if _is_fraction(self._v):
            return mp.mpf(self._v.numerator) / self._v.denominator
        return self._v

    def fraction(self) -> Fraction:
        if not _is_fraction(self._v):
            raise ValidationError("scalar is not exact")
        return self._v

    # -- arithmetic ----------------------------------------------------

    def _binop(self, other, frac_op, mpf_op):
        other = as_scalar(other)
        if _is_fraction(self._v) and _is_fraction(other._v):
            return Scalar(frac_op(self._v, other._v))
        return Scalar(mpf_op(self.mpf(), other.mpf()))

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b, lambda a, b: a - b)

    def __rsub__(self, other):
        return as_scalar(other).__sub__(self)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return as_scalar(other).__truediv__(self)

    def __neg__(self):
        return Scalar(-self._v)

    def __abs__(self):
        return Scalar(abs(self._v))

    def __pow__(self, exponent):
        """Power by integer exponent, or by any Scalar for a positive base.

        Integer exponents keep the backend (exact stays exact); non-integer
        exponents require a strictly positive base and go through mpf.
        """
        exponent = as_scalar(exponent)
        n = exponent.as_integer()
        if n is not None:
            if _is_fraction(self._v):
                return Scalar(self._v ** n)
            return Scalar(mp.power(self._v, n))
        if not self.is_positive():
            raise ValidationError(
                "non-integer exponent requires a strictly positive base"
            )
        return Scalar(mp.power(self.mpf(), exponent.mpf()))

    def as_integer(self):
        """The exact integer value, or None if not an integer."""
        if _is_fraction(self._v):
            if self._v.denominator == 1:
                return self._v.numerator
            return None
        if mp.isint(self._v):
            return int(self._v)
        return None

    # -- comparisons (raw ordering, no tolerance) ----------------------

    def _cmp_pair(self, other):
        other = as_scalar(other)
        if _is_fraction(self._v) and _is_fraction(other._v):
            return self._v, other._v
        return self.mpf(), other.mpf()

    def __eq__(self, other):
        try:
            a, b = self._cmp_pair(other)
        except (TypeError, ValidationError):
            return NotImplemented
        return a == b

    def __lt__(self, other):
        a, b = self._cmp_pair(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_pair(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_pair(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_pair(other)
        return a >= b

    def __hash__(self):
        return hash(self._v)

    def is_positive(self) -> bool:
        if _is_fraction(self._v):
            return self._v > 0
        return self._v > 0

    def is_zero(self) -> bool:
        return self._v == 0

    def close_to(self, other, tol=None) -> bool:
        """Comparison at the working tolerance.

        Exact when both sides are exact; otherwise an absolute
        |a - b| <= tol test with tol defaulting to 10^(-P/2).
        """
        other = as_scalar(other)
        if _is_fraction(self._v) and _is_fraction(other._v):
            return self._v == other._v
        if tol is None:
            tol = tolerance()
        return abs(self.mpf() - other.mpf()) <= as_scalar(tol).mpf()

    # -- formatting ----------------------------------------------------

    def decimal_str(self, digits: int | None = None) -> str:
        """Decimal rendering at ``digits`` significant digits (default P).

        Integers and terminating rationals render exactly; everything else
        is rounded decimal output.
        """
        if digits is None:
            digits = _digits
        if _is_fraction(self._v):
            exact = _terminating_decimal(self._v)
            if exact is not None:
                return exact
        return mp.nstr(self.mpf(), digits, strip_zeros=True)

    def __str__(self):
        return self.decimal_str()

    def __repr__(self):
        if _is_fraction(self._v):
            return f"Scalar({self._v})"
        return f"Scalar({mp.nstr(self._v, 15)})"


def _terminating_decimal(f: Fraction) -> str | None:
    """Exact decimal string for fractions with a 2^a 5^b denominator."""
    if f.denominator == 1:
        return str(f.numerator)
    den = f.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    shift = max(twos, fives)
    scaled = abs(f.numerator) * 10 ** shift // f.denominator
    text = str(scaled).rjust(shift + 1, "0")
    out = text[:-shift] + "." + text[-shift:]
    out = out.rstrip("0").rstrip(".")
    return ("-" if f.numerator < 0 else "") + out


def as_scalar(x) -> Scalar:
    """Coerce ``x`` to a Scalar; exactness is kept whenever possible."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, bool):
        raise ValidationError("booleans are not scalars")
    if isinstance(x, int):
        return Scalar(Fraction(x))
    if isinstance(x, Fraction):
        return Scalar(x)
    if isinstance(x, str):
        try:
            return Scalar(Fraction(x))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse scalar from {x!r}") from exc
    if isinstance(x, float):
        return Scalar(mp.mpf(x))
    if isinstance(x, mp.mpf):
        return Scalar(x)
    raise ValidationError(f"cannot interpret {type(x).__name__} as a scalar")


def scalar_sqrt(x) -> Scalar:
    """Square root; exact for perfect-square rationals, mpf otherwise."""
    x = as_scalar(x)
    if x < 0:
        raise ValidationError("square root of a negative scalar")
    if x.is_exact:
        f = x.fraction()
        rn = math.isqrt(f.numerator)
        rd = math.isqrt(f.denominator)
        if rn * rn == f.numerator and rd * rd == f.denominator:
            return Scalar(Fraction(rn, rd))
    return Scalar(mp.sqrt(x.mpf()))


_ZERO = Scalar(Fraction(0))
_ONE = Scalar(Fraction(1))


class ComplexScalar:
    """A complex number stored as a pair of Scalars."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = as_scalar(re)
        self.im = as_scalar(im)

    def conjugate(self) -> "ComplexScalar":
        return ComplexScalar(self.re, -self.im)

    def __add__(self, other):
        other = as_complex(other)
        return ComplexScalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = as_complex(other)
        return ComplexScalar(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = as_complex(other)
        return ComplexScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def abs2(self) -> Scalar:
        return self.re * self.re + self.im * self.im

    def is_exact_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def close_to(self, other, tol=None) -> bool:
        other = as_complex(other)
        return self.re.close_to(other.re, tol) and self.im.close_to(other.im, tol)

    def mpc(self):
        return mpmath.mpc(self.re.mpf(), self.im.mpf())

    def __repr__(self):
        return f"ComplexScalar({self.re!r}, {self.im!r})"


def as_complex(x) -> ComplexScalar:
    if isinstance(x, ComplexScalar):
        return x
    if isinstance(x, complex):
        return ComplexScalar(x.real, x.imag)
    if isinstance(x, (tuple, list)):
        if len(x) != 2:
            raise ValidationError("complex entries must be [re, im] pairs")
        return ComplexScalar(as_scalar(x[0]), as_scalar(x[1]))
    return ComplexScalar(as_scalar(x), _ZERO)


class HermitianMatrix:
    """A dim x dim conjugate-symmetric matrix of ComplexScalar entries."""

    __slots__ = ("dim", "entries")

    def __init__(self, entries):
        rows = [tuple(as_complex(e) for e in row) for row in entries]
        dim = len(rows)
        if dim == 0 or any(len(row) != dim for row in rows):
            raise ValidationError("matrix must be square and non-empty")
        for i in range(dim):
            if not rows[i][i].im.close_to(_ZERO):
                raise ValidationError(
                    f"diagonal entry ({i},{i}) has a non-real value"
                )
            for j in range(i + 1, dim):
                if not rows[i][j].close_to(rows[j][i].conjugate()):
                    raise ValidationError(
                        f"entries ({i},{j}) and ({j},{i}) are not conjugate"
                    )
        self.dim = dim
        self.entries = tuple(rows)

    def trace(self) -> Scalar:
        t = _ZERO
        for i in range(self.dim):
            t = t + self.entries[i][i].re
        return t

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j].is_exact_zero()
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        )


def eigenvalues_hermitian(m: HermitianMatrix, max_sweeps: int = 100) -> list[Scalar]:
    """All eigenvalues of a Hermitian matrix, descending.

    Cyclic Jacobi rotations run until the off-diagonal Frobenius norm drops
    below 10^(-P+5).  Exactly diagonal input short-circuits, which keeps
    exact-rational spectra exact.  Dimension is capped at 64; this is a
    small-matrix routine, not general linear algebra.
    """
    if not isinstance(m, HermitianMatrix):
        m = HermitianMatrix(m)
    if m.dim > 64:
        raise ValidationError("eigensolver supports dimension <= 64")
    if m.is_diagonal():
        return sorted((e[i].re for i, e in enumerate(m.entries)), reverse=True)

    a = [[m.entries[i][j].mpc() for j in range(m.dim)] for i in range(m.dim)]
    diag = _jacobi(a, m.dim, max_sweeps)
    return sorted((Scalar(d) for d in diag), reverse=True)


def _offdiag_norm(a, n):
    s = mp.mpf(0)
    for i in range(n):
        for j in range(n):
            if i != j:
                s += abs(a[i][j]) ** 2
    return mp.sqrt(s)


def _jacobi(a, n, max_sweeps):
    threshold = mp.mpf(10) ** (-(get_precision()) + 5)
    for _ in range(max_sweeps):
        if _offdiag_norm(a, n) < threshold:
            return [a[i][i].real for i in range(n)]
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0:
                    continue
                r = abs(apq)
                phase = apq / r
                tau = (a[q][q].real - a[p][p].real) / (2 * r)
                if tau == 0:
                    t = mp.mpf(1)
                else:
                    t = mp.sign(tau) / (abs(tau) + mp.sqrt(tau * tau + 1))
                c = 1 / mp.sqrt(t * t + 1)
                s = t * c
                # unitary U: identity except U[pp]=c, U[pq]=s,
                # U[qp]=-s*conj(phase), U[qq]=c*conj(phase)
                u_qp = -s * mpmath.conj(phase)
                u_qq = c * mpmath.conj(phase)
                for k in range(n):  # A <- A U
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = akp * c + akq * u_qp
                    a[k][q] = akp * s + akq * u_qq
                for k in range(n):  # A <- U* A
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk + mpmath.conj(u_qp) * aqk
                    a[q][k] = s * apk + mpmath.conj(u_qq) * aqk
                a[p][p] = mpmath.mpc(a[p][p].real, 0)
                a[q][q] = mpmath.mpc(a[q][q].real, 0)
    if _offdiag_norm(a, n) < threshold:
        return [a[i][i].real for i in range(n)]
    raise ConvergenceError(
        f"Jacobi eigensolver did not converge within {max_sweeps} sweeps"
    )


def solve_quadratic_positive(a, b, c) -> Scalar:
    """The unique positive root of a*s^2 + b*s + c = 0.

    Requires a > 0 and exactly one root in ]0, +inf[; anything else is an
    error naming the violated condition.
    """
    a, b, c = as_scalar(a), as_scalar(b), as_scalar(c)
    if not a.is_positive():
        raise ValidationError("leading coefficient must be positive")
    disc = b * b - as_scalar(4) * a * c
    if disc < 0:
        raise ValidationError("no positive root: discriminant is negative")
    root_disc = scalar_sqrt(disc)
    two_a = as_scalar(2) * a
    if disc.is_zero():
        roots = [(-b) / two_a]
    else:
        roots = [(-b + root_disc) / two_a, (-b - root_disc) / two_a]
    positive = [r for r in roots if r.is_positive()]
    if len(positive) == 0:
        raise ValidationError("no positive root")
    if len(positive) > 1:
        raise ValidationError(
            "two positive roots: "
            + ", ".join(r.decimal_str(12) for r in positive)
        )
    return positive[0]
