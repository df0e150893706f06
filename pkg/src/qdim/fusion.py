"""Fusion-ring catalogs: irrep labels, dimensions, conjugation, derived
eigenvalue multisets, and memoized tensor-power decomposition.

Three catalog families are shipped:

* :class:`TemperleyLiebRing` -- irreps labeled by ranks r >= 0 with the
  truncation-free recoupling rule V(r) x V(s) = sum of V(r+s-2k); covers
  both the rank-n orthogonal family and its 2x2 q-deformed form.
* :class:`FreeUnitaryRing` -- irreps labeled by words over {u, U} (U is
  the conjugate letter) with splitting fusion.
* :class:`FreeAbelianDualRing` / :class:`FreeGroupDualRing` -- duals of
  free abelian and free groups; every irrep is one-dimensional.

Irrep spectra are derived recursively: a new label first appears inside a
product of known labels, and its spectrum is that product's spectrum minus
the spectra of the previously known summands.  Catalogs are immutable
after construction; memo tables only cache deterministic values, so
concurrent fills of the same key write identical entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ResourceGuardError, ValidationError
from .numerics import as_scalar
from .spectra import (
    RhoSpectrum,
    inverse_spectrum,
    multiset_subtract,
    rho_from_F,
    tensor,
)

__all__ = [
    "Guards",
    "FusionRing",
    "Decomposition",
    "TemperleyLiebRing",
    "FreeUnitaryRing",
    "FreeAbelianDualRing",
    "FreeGroupDualRing",
    "tl_dimension",
    "fuse",
    "decompose_power",
    "irrep_spectrum",
    "conjugate_label",
]


@dataclass(frozen=True)
class Guards:
    """Size bounds that make runaway fusion fail gracefully."""

    max_total_dim: int = 10 ** 12
    max_labels: int = 100_000


class FusionRing:
    """Base class: label bookkeeping plus memoized fuse/dim/spectrum."""

    kind = "?"

    def __init__(self, guards: Guards | None = None):
        self.guards = guards or Guards()
        # fuse memo keys are ordered pairs: word fusion is not commutative
        self._fuse_memo: dict = {}
        self._dim_memo: dict = {}
        self._spectrum_memo: dict = {}

    # -- subclass hooks -------------------------------------------------

    def contains(self, label) -> bool:
        raise NotImplementedError

    def trivial(self):
        raise NotImplementedError

    def conjugate(self, label):
        raise NotImplementedError

    def fundamental(self) -> "Decomposition":
        raise NotImplementedError

    def label_key(self, label):
        """Deterministic sort key for output ordering."""
        return label

    def label_str(self, label) -> str:
        return str(label)

    def _dim(self, label) -> int:
        raise NotImplementedError

    def _fuse(self, a, b) -> dict:
        raise NotImplementedError

    def _spectrum(self, label) -> RhoSpectrum:
        raise NotImplementedError

    # -- public, memoized ------------------------------------------------

    def check_label(self, label):
        if not self.contains(label):
            raise ValidationError(
                f"foreign label {label!r} for a {self.kind!r} catalog"
            )
        return label

    def dim(self, label) -> int:
        self.check_label(label)
        if label not in self._dim_memo:
            self._dim_memo[label] = self._dim(label)
        return self._dim_memo[label]

    def fuse_labels(self, a, b) -> dict:
        self.check_label(a)
        self.check_label(b)
        key = (a, b)
        if key not in self._fuse_memo:
            out = self._fuse(a, b)
            total = sum(m * self.dim(l) for l, m in out.items())
            if total != self.dim(a) * self.dim(b):
                raise ValidationError(
                    "fusion rule broke dimension bookkeeping for "
                    f"{self.label_str(a)} x {self.label_str(b)}"
                )
            self._fuse_memo[key] = out
        return self._fuse_memo[key]

    def irrep_spectrum(self, label) -> RhoSpectrum:
        self.check_label(label)
        if label not in self._spectrum_memo:
            self._spectrum_memo[label] = self._spectrum(label)
        return self._spectrum_memo[label]


class Decomposition:
    """Sparse map from irrep labels to positive integer multiplicities."""

    __slots__ = ("ring", "_mult")

    def __init__(self, ring: FusionRing, multiplicities: dict):
        self.ring = ring
        mult = {}
        for label, m in multiplicities.items():
            ring.check_label(label)
            if not isinstance(m, int) or m <= 0:
                raise ValidationError(
                    f"multiplicity of {ring.label_str(label)} must be a "
                    f"positive integer, got {m!r}"
                )
            mult[label] = m
        self._mult = mult

    @classmethod
    def unit(cls, ring: FusionRing) -> "Decomposition":
        return cls(ring, {ring.trivial(): 1})

    def items(self):
        return sorted(self._mult.items(), key=lambda kv: self.ring.label_key(kv[0]))

    def labels(self):
        return [label for label, _ in self.items()]

    def multiplicity(self, label) -> int:
        return self._mult.get(label, 0)

    def __len__(self):
        return len(self._mult)

    def __eq__(self, other):
        if not isinstance(other, Decomposition):
            return NotImplemented
        return self.ring is other.ring and self._mult == other._mult

    def __hash__(self):
        return hash((id(self.ring), tuple(self.items())))

    def __repr__(self):
        body = ", ".join(
            f"{self.ring.label_str(l)}:{m}" for l, m in self.items()
        )
        return f"Decomposition({{{body}}})"

    def total_dim(self) -> int:
        return sum(m * self.ring.dim(l) for l, m in self._mult.items())

    def max_dim(self) -> int:
        if not self._mult:
            return 0
        return max(self.ring.dim(l) for l in self._mult)

    def _guard(self, mult: dict) -> dict:
        guards = self.ring.guards
        if len(mult) > guards.max_labels:
            raise ResourceGuardError(
                f"decomposition would hold {len(mult)} labels "
                f"(limit {guards.max_labels})"
            )
        total = sum(m * self.ring.dim(l) for l, m in mult.items())
        if total > guards.max_total_dim:
            raise ResourceGuardError(
                f"decomposition would reach total dimension {total} "
                f"(limit {guards.max_total_dim})"
            )
        return mult

    def add(self, other: "Decomposition") -> "Decomposition":
        """Direct sum: multiplicities add."""
        self._same_ring(other)
        mult = dict(self._mult)
        for label, m in other._mult.items():
            mult[label] = mult.get(label, 0) + m
        return Decomposition(self.ring, self._guard(mult))

    def fuse(self, other: "Decomposition") -> "Decomposition":
        """Tensor product, extended linearly over both sides."""
        self._same_ring(other)
        mult: dict = {}
        for a, ma in self._mult.items():
            for b, mb in other._mult.items():
                for label, m in self.ring.fuse_labels(a, b).items():
                    mult[label] = mult.get(label, 0) + ma * mb * m
        return Decomposition(self.ring, self._guard(mult))

    def power(self, n: int) -> "Decomposition":
        """n-th tensor power; n = 0 gives the trivial representation."""
        if not isinstance(n, int) or n < 0:
            raise ValidationError("tensor power must be a non-negative integer")
        acc = Decomposition.unit(self.ring)
        for _ in range(n):
            acc = acc.fuse(self)
        return acc

    def conjugate(self) -> "Decomposition":
        mult: dict = {}
        for label, m in self._mult.items():
            conj = self.ring.conjugate(label)
            mult[conj] = mult.get(conj, 0) + m
        return Decomposition(self.ring, mult)

    def spectrum(self) -> RhoSpectrum:
        """Direct sum of the irrep spectra, with multiplicity."""
        eigs = []
        for label, m in self.items():
            part = self.ring.irrep_spectrum(label)
            for _ in range(m):
                eigs.extend(part.eigenvalues)
        return RhoSpectrum(eigs)

    def _same_ring(self, other):
        if self.ring is not other.ring:
            raise ValidationError("decompositions belong to different catalogs")


class TemperleyLiebRing(FusionRing):
    """Rank-labeled self-conjugate catalog with recoupling fusion.

    Parametrized either by the matrix size ``n`` (dimensions follow the
    z-recursion z_0 = 1, z_1 = n, z_{r+1} = n z_r - z_{r-1}; the
    fundamental spectrum is taken to be n ones, the Kac choice) or by a
    deformation parameter ``q`` (2x2 case: dimensions r+1, fundamental
    spectrum {1/q, q}).
    """

    kind = "ao"

    def __init__(self, n: int | None = None, q=None, guards: Guards | None = None):
        super().__init__(guards)
        if (n is None) == (q is None):
            raise ValidationError("give exactly one of n (size) or q")
        if q is not None:
            q = as_scalar(q)
            if not q.is_positive():
                raise ValidationError("q must be strictly positive")
            self.q = q
            self.n = 2
        else:
            if not isinstance(n, int) or n < 2:
                raise ValidationError("matrix size n must be an integer >= 2")
            self.q = None
            self.n = n

    def contains(self, label) -> bool:
        return isinstance(label, int) and label >= 0

    def trivial(self):
        return 0

    def conjugate(self, label):
        self.check_label(label)
        return label

    def fundamental(self) -> Decomposition:
        return Decomposition(self, {1: 1})

    def label_str(self, label) -> str:
        return f"V({label})"

    def _dim(self, r: int) -> int:
        if r == 0:
            return 1
        if r == 1:
            return self.n
        return self.n * self.dim(r - 1) - self.dim(r - 2)

    def _fuse(self, r: int, s: int) -> dict:
        return {r + s - 2 * k: 1 for k in range(min(r, s) + 1)}

    def _spectrum(self, r: int) -> RhoSpectrum:
        if r == 0:
            return RhoSpectrum([1])
        if r == 1:
            if self.q is not None:
                return RhoSpectrum([_ONE / self.q, self.q])
            return RhoSpectrum([1] * self.n)
        prod = tensor(self.irrep_spectrum(r - 1), self.irrep_spectrum(1))
        return multiset_subtract(prod, self.irrep_spectrum(r - 2))

    def closed_form_spectrum(self, r: int) -> RhoSpectrum:
        """Independent cross-check: the geometric ladder q^r, q^(r-2), ..., q^(-r)
        in the deformed case, z_r ones otherwise."""
        self.check_label(r)
        if self.q is not None:
            return RhoSpectrum([self.q ** (r - 2 * k) for k in range(r + 1)])
        return RhoSpectrum([1] * self.dim(r))


_ONE = as_scalar(1)


def _conjugate_word(word: str) -> str:
    return word[::-1].swapcase()


class FreeUnitaryRing(FusionRing):
    """Word-labeled catalog with splitting fusion.

    Labels are words over ``u`` (fundamental letter) and ``U`` (its
    conjugate); the empty word is trivial.  A product w x w' decomposes as
    the sum of a.b over all splittings w = a.g, w' = conj(g).b.  Built
    from an invertible matrix F (fundamental spectrum via
    :func:`qdim.spectra.rho_from_F`) or directly from a normalized
    fundamental spectrum.
    """

    kind = "au"

    def __init__(
        self,
        F=None,
        fundamental_spectrum: RhoSpectrum | None = None,
        normalize: bool = True,
        guards: Guards | None = None,
    ):
        super().__init__(guards)
        if (F is None) == (fundamental_spectrum is None):
            raise ValidationError("give exactly one of F or fundamental_spectrum")
        if F is not None:
            fundamental_spectrum = rho_from_F(F, auto_normalize=normalize)
        if fundamental_spectrum.dim < 1:
            raise ValidationError("fundamental spectrum must be non-empty")
        if not fundamental_spectrum.normalized:
            raise ValidationError(
                "fundamental spectrum must satisfy the trace identity"
            )
        self.fundamental_spectrum = fundamental_spectrum
        self.n = fundamental_spectrum.dim

    def contains(self, label) -> bool:
        return isinstance(label, str) and all(c in "uU" for c in label)

    def trivial(self):
        return ""

    def conjugate(self, label):
        self.check_label(label)
        return _conjugate_word(label)

    def fundamental(self) -> Decomposition:
        return Decomposition(self, {"u": 1})

    def label_key(self, label):
        return (len(label), label)

    def label_str(self, label) -> str:
        return label if label else "1"

    def _dim(self, word: str) -> int:
        if not word:
            return 1
        head, last = word[:-1], word[-1]
        value = self.dim(head) * self.n
        if head and head[-1] == last.swapcase():
            value -= self.dim(head[:-1])
        return value

    def _fuse(self, w: str, w2: str) -> dict:
        out: dict = {}
        for k in range(min(len(w), len(w2)) + 1):
            tail = w[len(w) - k:]
            if _conjugate_word(tail) != w2[:k]:
                continue
            label = w[: len(w) - k] + w2[k:]
            out[label] = out.get(label, 0) + 1
        return out

    def _spectrum(self, word: str) -> RhoSpectrum:
        if not word:
            return RhoSpectrum([1])
        if word == "u":
            return self.fundamental_spectrum
        if word == "U":
            return inverse_spectrum(self.fundamental_spectrum)
        head, last = word[:-1], word[-1]
        prod = tensor(self.irrep_spectrum(head), self.irrep_spectrum(last))
        if head[-1] == last.swapcase():
            return multiset_subtract(prod, self.irrep_spectrum(head[:-1]))
        return prod


class FreeAbelianDualRing(FusionRing):
    """Dual of the free abelian group of a given rank: labels are integer
    vectors, every irrep is one-dimensional with spectrum {1}."""

    kind = "group_dual"

    def __init__(self, rank: int, guards: Guards | None = None):
        super().__init__(guards)
        if not isinstance(rank, int) or rank < 1:
            raise ValidationError("rank must be a positive integer")
        self.rank = rank

    def contains(self, label) -> bool:
        return (
            isinstance(label, tuple)
            and len(label) == self.rank
            and all(isinstance(c, int) for c in label)
        )

    def trivial(self):
        return (0,) * self.rank

    def conjugate(self, label):
        self.check_label(label)
        return tuple(-c for c in label)

    def fundamental(self) -> Decomposition:
        mult: dict = {}
        for i in range(self.rank):
            plus = tuple(1 if j == i else 0 for j in range(self.rank))
            minus = tuple(-1 if j == i else 0 for j in range(self.rank))
            mult[plus] = mult.get(plus, 0) + 1
            mult[minus] = mult.get(minus, 0) + 1
        return Decomposition(self, mult)

    def label_str(self, label) -> str:
        return "g(" + ",".join(str(c) for c in label) + ")"

    def _dim(self, label) -> int:
        return 1

    def _fuse(self, a, b) -> dict:
        return {tuple(x + y for x, y in zip(a, b)): 1}

    def _spectrum(self, label) -> RhoSpectrum:
        return RhoSpectrum([1])


def _reduce_free_word(letters) -> tuple:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


class FreeGroupDualRing(FusionRing):
    """Dual of the free group of a given rank: labels are reduced words of
    signed generator indices, every irrep one-dimensional."""

    kind = "group_dual"

    def __init__(self, rank: int, guards: Guards | None = None):
        super().__init__(guards)
        if not isinstance(rank, int) or rank < 1:
            raise ValidationError("rank must be a positive integer")
        self.rank = rank

    def contains(self, label) -> bool:
        if not isinstance(label, tuple):
            return False
        for x in label:
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                return False
        return _reduce_free_word(label) == label

    def trivial(self):
        return ()

    def conjugate(self, label):
        self.check_label(label)
        return tuple(-x for x in reversed(label))

    def fundamental(self) -> Decomposition:
        mult = {}
        for i in range(1, self.rank + 1):
            mult[(i,)] = 1
            mult[(-i,)] = 1
        return Decomposition(self, mult)

    def label_key(self, label):
        return (len(label), label)

    def label_str(self, label) -> str:
        if not label:
            return "1"
        return "g(" + ",".join(str(x) for x in label) + ")"

    def _dim(self, label) -> int:
        return 1

    def _fuse(self, a, b) -> dict:
        return {_reduce_free_word(a + b): 1}

    def _spectrum(self, label) -> RhoSpectrum:
        return RhoSpectrum([1])


# -- operation-style entry points ----------------------------------------


def tl_dimension(ring: TemperleyLiebRing, r: int) -> int:
    """Dimension of the rank-r irrep in a recoupling catalog."""
    if not isinstance(ring, TemperleyLiebRing):
        raise ValidationError("tl_dimension needs a rank-labeled catalog")
    return ring.dim(r)


def fuse(ring: FusionRing, a, b) -> Decomposition:
    """Decomposition of the product of two irreps."""
    return Decomposition(ring, dict(ring.fuse_labels(a, b)))


def decompose_power(ring: FusionRing, u: Decomposition, n: int) -> Decomposition:
    """Decomposition of the n-th tensor power of ``u``."""
    if u.ring is not ring:
        raise ValidationError("decomposition does not belong to this catalog")
    return u.power(n)


def irrep_spectrum(ring: FusionRing, label) -> RhoSpectrum:
    """Eigenvalue multiset of a single irrep."""
    return ring.irrep_spectrum(label)


def conjugate_label(ring: FusionRing, label):
    """Label of the conjugate irrep."""
    return ring.conjugate(label)
