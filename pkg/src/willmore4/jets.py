"""Truncated Taylor arithmetic in four chart variables.

A :class:`Jet` stores the Taylor coefficients ``c[alpha] = d^alpha f / alpha!``
of a (possibly tensor- and batch-valued) function for every multi-index
``|alpha| <= K``.  Coefficients live on axis 0, in graded order, so that
truncating to a lower degree is a prefix slice.  Trailing axes are ordinary
numpy axes and broadcast like numpy arrays; by convention the last axis is
the batch of expansion points.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InsufficientOrderError, SingularityError

NVARS = 4
MAX_DEGREE = 6


def _graded_indices(max_degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(max_degree + 1):
        level = [a for a in itertools.product(range(d + 1), repeat=NVARS) if sum(a) == d]
        out.extend(sorted(level, reverse=True))
    return out


MULTI_INDICES: tuple[tuple[int, ...], ...] = tuple(_graded_indices(MAX_DEGREE))
INDEX: dict[tuple[int, ...], int] = {a: i for i, a in enumerate(MULTI_INDICES)}


def ncoef(degree: int) -> int:
    """Number of monomials of total degree <= ``degree`` in four variables."""
    return math.comb(degree + NVARS, NVARS)


def _check_degree(degree: int) -> None:
    if not 0 <= degree <= MAX_DEGREE:
        raise DomainError(f"jet degree must lie in [0, {MAX_DEGREE}], got {degree}")


@lru_cache(maxsize=None)
def _product_table(degree: int):
    m = ncoef(degree)
    rows = []
    for i in range(m):
        a = MULTI_INDICES[i]
        for j in range(m):
            b = MULTI_INDICES[j]
            if sum(a) + sum(b) <= degree:
                k = INDEX[tuple(x + y for x, y in zip(a, b))]
                rows.append((k, i, j))
    rows.sort()
    table = np.array(rows, dtype=np.intp)
    out, left, right = table[:, 0], table[:, 1], table[:, 2]
    starts = np.flatnonzero(np.r_[True, out[1:] != out[:-1]])
    return left, right, starts


@lru_cache(maxsize=None)
def _derivative_table(degree: int, var: int):
    src, fac = [], []
    for a in MULTI_INDICES[: ncoef(degree - 1)]:
        b = list(a)
        b[var] += 1
        src.append(INDEX[tuple(b)])
        fac.append(a[var] + 1)
    return np.array(src, dtype=np.intp), np.array(fac, dtype=float)


def _lift(coef: np.ndarray, ndim: int) -> np.ndarray:
    # pad trailing shape on the left so numpy broadcasting never touches axis 0
    extra = ndim - (coef.ndim - 1)
    if extra <= 0:
        return coef
    return coef.reshape(coef.shape[:1] + (1,) * extra + coef.shape[1:])


class Jet:
    """Truncated Taylor expansion with coefficient axis first."""

    __slots__ = ("coef", "degree")
    __array_ufunc__ = None

    def __init__(self, coef, degree: int):
        _check_degree(degree)
        coef = np.asarray(coef, dtype=float)
        if coef.shape[0] != ncoef(degree):
            raise DomainError(
                f"degree {degree} needs {ncoef(degree)} coefficients, got {coef.shape[0]}"
            )
        self.coef = coef
        self.degree = degree

    # -- construction -------------------------------------------------
    @classmethod
    def constant(cls, value, degree: int) -> "Jet":
        value = np.asarray(value, dtype=float)
        coef = np.zeros((ncoef(degree),) + value.shape)
        coef[0] = value
        return cls(coef, degree)

    # -- array-like protocol ------------------------------------------
    @property
    def shape(self) -> tuple[int, ...]:
        return self.coef.shape[1:]

    @property
    def ndim(self) -> int:
        return self.coef.ndim - 1

    @property
    def value(self) -> np.ndarray:
        """Function value at the expansion point."""
        return self.coef[0]

    def __len__(self) -> int:
        return self.shape[0]

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, key) -> "Jet":
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.coef[(slice(None),) + key], self.degree)

    def __repr__(self) -> str:
        return f"Jet(degree={self.degree}, shape={self.shape})"

    def truncate(self, degree: int) -> "Jet":
        if degree > self.degree:
            raise InsufficientOrderError(f"cannot raise jet degree {self.degree} to {degree}")
        return Jet(self.coef[: ncoef(degree)], degree)

    def reshape(self, *shape) -> "Jet":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return Jet(self.coef.reshape((self.coef.shape[0],) + tuple(shape)), self.degree)

    def sum(self, axis=None) -> "Jet":
        if axis is None:
            axis = tuple(range(self.ndim))
        elif isinstance(axis, int):
            axis = (axis,)
        axis = tuple(a % self.ndim + 1 for a in axis)
        return Jet(self.coef.sum(axis=axis), self.degree)

    def moveaxis(self, source: int, destination: int) -> "Jet":
        return Jet(np.moveaxis(self.coef, source % self.ndim + 1, destination % self.ndim + 1), self.degree)

    # -- arithmetic ---------------------------------------------------
    def _binary_prep(self, other: "Jet"):
        k = min(self.degree, other.degree)
        a = self.coef[: ncoef(k)]
        b = other.coef[: ncoef(k)]
        nd = max(a.ndim, b.ndim) - 1
        return _lift(a, nd), _lift(b, nd), k

    def __add__(self, other) -> "Jet":
        if isinstance(other, Jet):
            a, b, k = self._binary_prep(other)
            return Jet(a + b, k)
        c = np.asarray(other, dtype=float)
        coef = _lift(self.coef, c.ndim)
        shape = np.broadcast_shapes(coef.shape[1:], c.shape)
        out = np.broadcast_to(coef, coef.shape[:1] + shape).copy()
        out[0] += c
        return Jet(out, self.degree)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(-self.coef, self.degree)

    def __pos__(self) -> "Jet":
        return self

    def __sub__(self, other) -> "Jet":
        return self + (-other)

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def __mul__(self, other) -> "Jet":
        if isinstance(other, Jet):
            a, b, k = self._binary_prep(other)
            left, right, starts = _product_table(k)
            return Jet(np.add.reduceat(a[left] * b[right], starts, axis=0), k)
        c = np.asarray(other, dtype=float)
        return Jet(_lift(self.coef, c.ndim) * c, self.degree)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return self * recip(other)
        c = np.asarray(other, dtype=float)
        if np.any(c == 0):
            raise SingularityError("division by zero constant")
        return self * (1.0 / c)

    def __rtruediv__(self, other) -> "Jet":
        return recip(self) * other

    def __pow__(self, exponent) -> "Jet":
        if isinstance(exponent, (int, np.integer)) and exponent >= 0:
            result = Jet.constant(np.ones(self.shape), self.degree)
            base = self
            n = int(exponent)
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        return power(self, float(exponent))

    # -- calculus -----------------------------------------------------
    def d(self, var: int) -> "Jet":
        """Partial derivative with respect to chart variable ``var``."""
        if self.degree < 1:
            raise InsufficientOrderError("cannot differentiate a degree-0 jet")
        src, fac = _derivative_table(self.degree, var)
        coef = self.coef[src] * fac.reshape((-1,) + (1,) * self.ndim)
        return Jet(coef, self.degree - 1)

    def grad(self) -> "Jet":
        """Stack of the four partial derivatives on a new leading axis."""
        return stack([self.d(i) for i in range(NVARS)])

    def coefficient(self, alpha: Sequence[int]) -> np.ndarray:
        alpha = tuple(int(a) for a in alpha)
        if sum(alpha) > self.degree:
            raise InsufficientOrderError(f"|alpha| = {sum(alpha)} exceeds degree {self.degree}")
        return self.coef[INDEX[alpha]]

    def partial(self, alpha: Sequence[int]) -> np.ndarray:
        """Partial derivative ``d^alpha f`` at the expansion point."""
        fact = math.prod(math.factorial(int(a)) for a in alpha)
        return fact * self.coefficient(alpha)


def extract_partial(a: Jet, alpha: Sequence[int]) -> np.ndarray:
    return a.partial(alpha)


def variables(point, degree: int) -> Jet:
    """Coordinate jets ``x^i`` expanded at ``point`` (shape ``(4, ...)``)."""
    point = np.asarray(point, dtype=float)
    if point.shape[0] != NVARS:
        raise DomainError(f"chart points need {NVARS} coordinates on axis 0")
    coef = np.zeros((ncoef(degree),) + point.shape)
    coef[0] = point
    if degree >= 1:
        for i in range(NVARS):
            e = [0] * NVARS
            e[i] = 1
            coef[INDEX[tuple(e)], i] = 1.0
    return Jet(coef, degree)


def as_jet(x, degree: int) -> Jet:
    return x if isinstance(x, Jet) else Jet.constant(x, degree)


def stack(items: Sequence, axis: int = 0) -> Jet:
    """Stack jets (or constants) along a new trailing axis."""
    jets = [x for x in items if isinstance(x, Jet)]
    if not jets:
        raise DomainError("stack needs at least one jet")
    k = min(j.degree for j in jets)
    parts = [as_jet(x, k).truncate(k).coef for x in items]
    nd = max(p.ndim for p in parts) - 1
    parts = [_lift(p, nd) for p in parts]
    shape = np.broadcast_shapes(*(p.shape for p in parts))
    parts = [np.broadcast_to(p, shape) for p in parts]
    if axis < 0:
        axis += nd + 1
    return Jet(np.stack(parts, axis=axis + 1), k)


def _parse_einsum(subscripts: str):
    lhs, out = subscripts.replace(" ", "").split("->")
    return lhs.split(","), out


def _einsum2(sa: str, a, sb: str, b, so: str):
    if isinstance(a, Jet) and isinstance(b, Jet):
        k = min(a.degree, b.degree)
        left, right, starts = _product_table(k)
        prod = np.einsum(f"Z{sa},Z{sb}->Z{so}", a.coef[left], b.coef[right])
        return Jet(np.add.reduceat(prod, starts, axis=0), k)
    if isinstance(a, Jet):
        return Jet(np.einsum(f"Z{sa},{sb}->Z{so}", a.coef, np.asarray(b, dtype=float)), a.degree)
    if isinstance(b, Jet):
        return Jet(np.einsum(f"{sa},Z{sb}->Z{so}", np.asarray(a, dtype=float), b.coef), b.degree)
    return np.einsum(f"{sa},{sb}->{so}", a, b)


def einsum(subscripts: str, *operands):
    """Einstein summation over jets and constant arrays.

    Subscripts follow :func:`numpy.einsum` (with ``...`` for batch axes);
    the letter ``Z`` is reserved for the coefficient axis.  Operands are
    folded left to right, so put the cheapest contractions first.
    """
    ins, out = _parse_einsum(subscripts)
    if len(ins) != len(operands):
        raise DomainError("einsum operand count mismatch")
    if len(operands) == 1:
        (a,) = operands
        if isinstance(a, Jet):
            return Jet(np.einsum(f"Z{ins[0]}->Z{out}", a.coef), a.degree)
        return np.einsum(f"{ins[0]}->{out}", a)
    acc, sacc = operands[0], ins[0]
    for pos in range(1, len(operands)):
        later = "".join(ins[pos + 1 :]) + out
        sb = ins[pos]
        keep = []
        for ch in sacc + sb:
            if ch == ".":
                continue
            if ch in later and ch not in keep:
                keep.append(ch)
        so = "".join(keep)
        if "..." in sacc or "..." in sb:
            so += "..."
        if pos == len(operands) - 1:
            so = out
        acc = _einsum2(sacc, acc, sb, operands[pos], so)
        sacc = so
    return acc


def _series(a: Jet, derivs: Sequence) -> Jet:
    # f(a0 + t) = sum_k f^(k)(a0) t^k / k!, evaluated by Horner in t = a - a0
    tail = Jet(a.coef.copy(), a.degree)
    tail.coef[0] = 0.0
    k = a.degree
    result = Jet.constant(np.broadcast_to(derivs[k] / math.factorial(k), a.shape), k)
    for j in range(k - 1, -1, -1):
        result = result * tail + derivs[j] / math.factorial(j)
    return result


def exp(a):
    if not isinstance(a, Jet):
        return np.exp(a)
    e = np.exp(a.value)
    return _series(a, [e] * (a.degree + 1))


def log(a):
    if not isinstance(a, Jet):
        return np.log(a)
    x = a.value
    if np.any(x <= 0):
        raise DomainError("log of a jet with nonpositive constant term")
    derivs = [np.log(x)] + [(-1.0) ** (k - 1) * math.factorial(k - 1) / x**k for k in range(1, a.degree + 1)]
    return _series(a, derivs)


def sin(a):
    if not isinstance(a, Jet):
        return np.sin(a)
    s, c = np.sin(a.value), np.cos(a.value)
    cycle = [s, c, -s, -c]
    return _series(a, [cycle[k % 4] for k in range(a.degree + 1)])


def cos(a):
    if not isinstance(a, Jet):
        return np.cos(a)
    s, c = np.sin(a.value), np.cos(a.value)
    cycle = [c, -s, -c, s]
    return _series(a, [cycle[k % 4] for k in range(a.degree + 1)])


def power(a, r: float):
    """``a ** r`` for real ``r``; the base must be positive unless ``r`` is an integer."""
    if not isinstance(a, Jet):
        return np.power(a, r)
    x = a.value
    if float(r).is_integer():
        if r >= 0:
            return a ** int(r)
        if np.any(x == 0):
            raise SingularityError("negative power of a jet with zero constant term")
    elif np.any(x <= 0):
        raise DomainError("fractional power of a jet with nonpositive constant term")
    derivs = []
    coeff = 1.0
    for k in range(a.degree + 1):
        derivs.append(coeff * np.power(x, r - k))
        coeff *= r - k
    return _series(a, derivs)


def sqrt(a):
    if not isinstance(a, Jet):
        return np.sqrt(a)
    if np.any(a.value <= 0):
        raise DomainError("sqrt of a jet with nonpositive constant term")
    return power(a, 0.5)


def recip(a):
    if not isinstance(a, Jet):
        a = np.asarray(a, dtype=float)
        if np.any(a == 0):
            raise SingularityError("reciprocal of zero")
        return 1.0 / a
    if np.any(a.value == 0):
        raise SingularityError("reciprocal of a jet with zero constant term")
    return power(a, -1.0)


def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    ops: dict[str, Callable] = {
        "+": lambda: a + b,
        "-": lambda: a - b,
        "*": lambda: a * b,
        "/": lambda: a / b,
    }
    if op not in ops:
        raise DomainError(f"unknown jet operation {op!r}")
    return ops[op]()


def jet_elementary(a: Jet, fn: str, r: float | None = None) -> Jet:
    table = {"sin": sin, "cos": cos, "exp": exp, "sqrt": sqrt, "recip": recip, "log": log}
    if fn == "pow":
        if r is None:
            raise DomainError("pow needs an exponent")
        return power(a, r)
    if fn not in table:
        raise DomainError(f"unknown elementary function {fn!r}")
    return table[fn](a)


def compose_ambient(map5: Callable, phi: Jet) -> Jet:
    """Apply an analytic map of 5-space to the jets of an immersion.

    ``map5`` receives the list of five component jets and returns five
    components; it is evaluated in jet arithmetic, so the result is the jet
    of the composed map.
    """
    comps = map5([phi[a] for a in range(phi.shape[0])])
    return stack(comps)
