"""Exterior algebra of 5-space and multivector-valued forms on a 4-chart.

Grade-k parts are stored as arrays of shape ``(C(5, k), ...)`` with basis
blades ``e_I`` for increasing index tuples ``I`` in lexicographic order.
Coefficient arrays may be plain numpy arrays or :class:`~willmore4.jets.Jet`
objects; every product is a bilinear contraction against a sign table that
is built once at import time.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import jets
from .errors import DomainError, UnsupportedOperationError
from .jets import Jet

DIM = 5
CHART_DIM = 4

BASIS: tuple[tuple[tuple[int, ...], ...], ...] = tuple(
    tuple(itertools.combinations(range(DIM), k)) for k in range(DIM + 1)
)
POSITION = tuple({blade: i for i, blade in enumerate(BASIS[k])} for k in range(DIM + 1))


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (0 if it has repeats)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


def levi_civita(n: int) -> np.ndarray:
    eps = np.zeros((n,) * n)
    for p in itertools.permutations(range(n)):
        eps[p] = perm_sign(p)
    return eps


def generalized_delta(k: int, n: int = CHART_DIM) -> np.ndarray:
    """``delta^{a1..ak}_{i1..ik}`` as an array with upper indices first."""
    delta = np.zeros((n,) * (2 * k))
    for upper in itertools.product(range(n), repeat=k):
        if len(set(upper)) != k:
            continue
        for sigma in itertools.permutations(range(k)):
            lower = tuple(upper[s] for s in sigma)
            delta[upper + lower] = perm_sign(sigma)
    return delta


@dataclass(frozen=True)
class EpsilonTables:
    eps4: np.ndarray
    eps5: np.ndarray
    delta3: np.ndarray


EPSILON = EpsilonTables(eps4=levi_civita(CHART_DIM), eps5=levi_civita(DIM), delta3=generalized_delta(3))


def _wedge_table(p: int, q: int) -> np.ndarray:
    r = p + q
    table = np.zeros((len(BASIS[p]), len(BASIS[q]), len(BASIS[r]) if r <= DIM else 0))
    if r > DIM:
        return table
    for i, a in enumerate(BASIS[p]):
        for j, b in enumerate(BASIS[q]):
            s = perm_sign(a + b)
            if s:
                table[i, j, POSITION[r][tuple(sorted(a + b))]] = s
    return table


WEDGE = {(p, q): _wedge_table(p, q) for p in range(DIM + 1) for q in range(DIM + 1)}
# <A _| B, C> = <A, B ^ C>: the interior table is a transposed wedge table
INTERIOR = {(p, q): np.transpose(WEDGE[(q, p - q)], (2, 0, 1)) for p in range(DIM + 1) for q in range(p + 1)}


def _hodge_table(k: int) -> np.ndarray:
    table = np.zeros((len(BASIS[k]), len(BASIS[DIM - k])))
    for i, a in enumerate(BASIS[k]):
        rest = tuple(x for x in range(DIM) if x not in a)
        table[i, POSITION[DIM - k][rest]] = perm_sign(a + rest)
    return table


HODGE = {k: _hodge_table(k) for k in range(DIM + 1)}


# -- generic coefficient helpers (numpy arrays or jets) ---------------------

def _is_zero(x) -> bool:
    return x is None


def _bilinear(table: np.ndarray, a, b):
    if isinstance(a, Jet) or isinstance(b, Jet):
        return jets.einsum("xyr,x...,y...->r...", table, a, b)
    return np.einsum("xyr,x...,y...->r...", table, np.asarray(a), np.asarray(b))


def _linear(table: np.ndarray, a):
    if isinstance(a, Jet):
        return jets.einsum("xr,x...->r...", table, a)
    return np.einsum("xr,x...->r...", table, np.asarray(a))


def _contract(a, b):
    if isinstance(a, Jet) or isinstance(b, Jet):
        return jets.einsum("x...,x...->...", a, b)
    return np.einsum("x...,x...->...", np.asarray(a), np.asarray(b))


def _expand(x, axis: int, count: int = 1):
    # insert ``count`` singleton axes at position ``axis`` (coefficient axis excluded)
    if isinstance(x, Jet):
        shape = x.shape
        return x.reshape(shape[:axis] + (1,) * count + shape[axis:])
    x = np.asarray(x)
    return x.reshape(x.shape[:axis] + (1,) * count + x.shape[axis:])


def _transpose(x, axes: Sequence[int]):
    if isinstance(x, Jet):
        return Jet(np.transpose(x.coef, [0] + [a + 1 for a in axes]), x.degree)
    return np.transpose(x, axes)


def _add(x, y):
    if x is None:
        return y
    if y is None:
        return x
    if isinstance(x, Jet) or isinstance(y, Jet):
        return x + y
    return np.add(x, y)


class Multivector5:
    """Element of the exterior algebra of 5-space."""

    __slots__ = ("parts",)

    def __init__(self, parts: dict[int, object] | None = None):
        clean = {}
        for k, v in (parts or {}).items():
            if v is None:
                continue
            if not 0 <= k <= DIM:
                raise DomainError(f"grade {k} out of range")
            if (v.shape[0] if hasattr(v, "shape") else np.shape(v)[0]) != len(BASIS[k]):
                raise DomainError(f"grade {k} needs {len(BASIS[k])} coefficients")
            clean[k] = v if isinstance(v, Jet) else np.asarray(v, dtype=float)
        self.parts = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def scalar(cls, s) -> "Multivector5":
        if isinstance(s, Jet):
            return cls({0: s.reshape((1,) + s.shape)})
        return cls({0: np.asarray(s, dtype=float)[None]})

    @classmethod
    def vector(cls, v) -> "Multivector5":
        return cls({1: v})

    @classmethod
    def blade(cls, *indices: int) -> "Multivector5":
        """Basis blade ``e_{i1} ^ ... ^ e_{ik}`` (1-based indices, any order)."""
        idx = [i - 1 for i in indices]
        k = len(idx)
        s = perm_sign(idx)
        coef = np.zeros(len(BASIS[k]))
        if s:
            coef[POSITION[k][tuple(sorted(idx))]] = s
        return cls({k: coef})

    @classmethod
    def volume(cls) -> "Multivector5":
        return cls.blade(1, 2, 3, 4, 5)

    # -- inspection ---------------------------------------------------
    def part(self, k: int):
        return self.parts.get(k)

    def grade(self, k: int) -> "Multivector5":
        return Multivector5({k: self.parts[k]} if k in self.parts else {})

    @property
    def grades(self) -> tuple[int, ...]:
        return tuple(sorted(self.parts))

    def coefficients(self, k: int) -> np.ndarray:
        """Grade-k coefficients as a numpy array (zeros if absent)."""
        v = self.parts.get(k)
        if v is None:
            return np.zeros(len(BASIS[k]))
        return v.value if isinstance(v, Jet) else v

    def __repr__(self) -> str:
        return f"Multivector5(grades={self.grades})"

    # -- linear structure ---------------------------------------------
    def __add__(self, other: "Multivector5") -> "Multivector5":
        keys = set(self.parts) | set(other.parts)
        return Multivector5({k: _add(self.parts.get(k), other.parts.get(k)) for k in keys})

    def __neg__(self) -> "Multivector5":
        return Multivector5({k: -v for k, v in self.parts.items()})

    def __sub__(self, other: "Multivector5") -> "Multivector5":
        return self + (-other)

    def __mul__(self, s) -> "Multivector5":
        if isinstance(s, Multivector5):
            raise TypeError("use wedge/dot/interior/bullet for products of multivectors")
        out = {}
        for k, v in self.parts.items():
            out[k] = v * _expand(s, 0) if isinstance(s, Jet) or np.ndim(s) else v * s
        return Multivector5(out)

    __rmul__ = __mul__

    def __xor__(self, other: "Multivector5") -> "Multivector5":
        return wedge(self, other)

    def norm(self):
        return np.sqrt(np.abs(np.asarray(dot(self, self) if not self._has_jets() else dot(self, self).value)))

    def _has_jets(self) -> bool:
        return any(isinstance(v, Jet) for v in self.parts.values())


def wedge(a: Multivector5, b: Multivector5) -> Multivector5:
    out: dict[int, object] = {}
    for p, x in a.parts.items():
        for q, y in b.parts.items():
            if p + q > DIM:
                continue
            out[p + q] = _add(out.get(p + q), _bilinear(WEDGE[(p, q)], x, y))
    return Multivector5(out)


def dot(a: Multivector5, b: Multivector5):
    """Induced inner product; parts of different grade are orthogonal."""
    total = None
    for k, x in a.parts.items():
        y = b.parts.get(k)
        if y is not None:
            total = _add(total, _contract(x, y))
    return 0.0 if total is None else total


def interior(a: Multivector5, b: Multivector5) -> Multivector5:
    """Left contraction ``a _| b`` defined by ``<a _| b, c> = <a, b ^ c>``."""
    out: dict[int, object] = {}
    for p, x in a.parts.items():
        for q, y in b.parts.items():
            if p < q:
                raise DomainError(f"interior product needs grade(a) >= grade(b), got {p} < {q}")
            out[p - q] = _add(out.get(p - q), _bilinear(INTERIOR[(p, q)], x, y))
    return Multivector5(out)


def _basis_mv(k: int, i: int) -> Multivector5:
    coef = np.zeros(len(BASIS[k]))
    coef[i] = 1.0
    return Multivector5({k: coef})


def _bullet_basis(ia: int, blade: tuple[int, ...]) -> Multivector5:
    # A . (b ^ C) = (A . b) ^ C + (-1)^{|b||C|} (A . C) ^ b, with A . b = A _| b
    a = _basis_mv(2, ia)
    first = Multivector5.blade(blade[0] + 1)
    if len(blade) == 1:
        return interior(a, first)
    rest = Multivector5.blade(*(i + 1 for i in blade[1:]))
    sign = (-1) ** (len(blade) - 1)
    return wedge(interior(a, first), rest) + sign * wedge(_bullet_basis(ia, blade[1:]), first)


def _bullet_table(q: int) -> np.ndarray:
    r = q
    table = np.zeros((len(BASIS[2]), len(BASIS[q]), len(BASIS[r])))
    for ia in range(len(BASIS[2])):
        for jb, blade in enumerate(BASIS[q]):
            table[ia, jb] = _bullet_basis(ia, blade).coefficients(r)
    return table


BULLET = {1: INTERIOR[(2, 1)], 2: _bullet_table(2), 3: _bullet_table(3)}


def bullet(a: Multivector5, b: Multivector5) -> Multivector5:
    """First-order contraction ``a . b`` for grade pairs 2.1, 2.2 and 2.3."""
    out: dict[int, object] = {}
    for p, x in a.parts.items():
        for q, y in b.parts.items():
            if p != 2 or q not in BULLET:
                raise UnsupportedOperationError(f"bullet product of grades {p} and {q} is not implemented")
            r = p + q - 2
            out[r] = _add(out.get(r), _bilinear(BULLET[q], x, y))
    return Multivector5(out)


def hodge5(a: Multivector5) -> Multivector5:
    """Ambient Hodge star with orientation ``e1 ^ ... ^ e5``."""
    return Multivector5({DIM - k: _linear(HODGE[k], x) for k, x in a.parts.items()})


def vectors_wedge(vectors: Iterable) -> Multivector5:
    """Wedge of a sequence of grade-1 coefficient arrays."""
    out = None
    for v in vectors:
        mv = Multivector5.vector(v)
        out = mv if out is None else wedge(out, mv)
    return out


# -- multivector-valued forms on a 4-chart -----------------------------------

_PRODUCTS = {"dot": dot, "wedge": wedge, "bullet": bullet}
MODE_ALIASES = {"·∧": "dot", ".^": "dot", "dot": "dot", "∧∧": "wedge", "^^": "wedge", "wedge": "wedge",
                "•∧": "bullet", "*^": "bullet", "bullet": "bullet"}


def _antisymmetrize(x, first: int, count: int):
    # average over signed permutations of chart axes first..first+count-1
    total = None
    for perm in itertools.permutations(range(count)):
        axes = list(range(first)) + [first + p for p in perm]
        nd = x.ndim if not isinstance(x, Jet) else x.ndim
        axes += list(range(first + count, nd))
        term = _transpose(x, axes) * float(perm_sign(perm))
        total = term if total is None else total + term
    return total * (1.0 / math.factorial(count))


class ChartForm:
    """A multivector-valued k-form on a 4-chart.

    Components are stored as a :class:`Multivector5` whose grade parts have
    shape ``(C(5, g), 4, ..., 4, *batch)`` with ``k`` chart axes, fully
    antisymmetric, so that the form equals ``(1/k!) w_{i1..ik} dx^i1 ^ ... ^ dx^ik``.
    """

    __slots__ = ("degree", "value")

    def __init__(self, degree: int, value: Multivector5):
        if not 0 <= degree <= CHART_DIM:
            raise DomainError(f"form degree {degree} out of range")
        self.degree = degree
        self.value = value

    @classmethod
    def from_components(cls, degree: int, value: Multivector5, antisymmetrize: bool = True) -> "ChartForm":
        if antisymmetrize and degree > 1:
            value = Multivector5({g: _antisymmetrize(v, 1, degree) for g, v in value.parts.items()})
        return cls(degree, value)

    @classmethod
    def one_form(cls, grade: int, components) -> "ChartForm":
        """1-form from per-index multivector coefficients shaped ``(4, C(5, g), ...)``."""
        if isinstance(components, Jet):
            comp = components.moveaxis(0, 1)
        else:
            comp = np.moveaxis(np.asarray(components, dtype=float), 0, 1)
        return cls(1, Multivector5({grade: comp}))

    def component(self, grade: int, *idx: int):
        """Coefficient array of ``w_{idx}`` for the given multivector grade."""
        part = self.value.parts.get(grade)
        if part is None:
            return np.zeros(len(BASIS[grade]))
        return part[(slice(None),) + tuple(idx)]

    def __add__(self, other: "ChartForm") -> "ChartForm":
        if self.degree != other.degree:
            raise DomainError("cannot add forms of different degree")
        return ChartForm(self.degree, self.value + other.value)

    def __neg__(self) -> "ChartForm":
        return ChartForm(self.degree, -self.value)

    def __sub__(self, other: "ChartForm") -> "ChartForm":
        return self + (-other)

    def __mul__(self, s) -> "ChartForm":
        return ChartForm(self.degree, self.value * s)

    __rmul__ = __mul__


def chart_products(A: ChartForm, B: ChartForm, mode: str, weights: str = "exterior") -> ChartForm:
    """Product of multivector-valued forms: ``mode`` acts on values, wedge on forms.

    ``weights="exterior"`` is the usual exterior product of forms,
    ``(A ^ B)_{IJ} = (k+l)!/(k! l!) Alt(A_I B_J)``.  ``weights="average"``
    drops the combinatorial factor, ``(A ^ B)_{IJ} = Alt(A_I B_J)``, which is
    the normalization used by the componentwise displays of the appendix
    identities (there ``dPhi ^^ dPhi`` has components ``d_i Phi ^ d_j Phi``).
    """
    key = MODE_ALIASES.get(mode)
    if key is None:
        raise DomainError(f"unknown chart product mode {mode!r}")
    k, l = A.degree, B.degree
    if k + l > CHART_DIM:
        raise DomainError(f"form degrees {k} + {l} exceed the chart dimension")
    if weights not in ("exterior", "average"):
        raise DomainError(f"unknown weights {weights!r}")
    # line up chart axes: A gets l trailing singleton chart axes, B gets k leading ones
    a = Multivector5({g: _expand(v, 1 + k, l) for g, v in A.value.parts.items()})
    b = Multivector5({g: _expand(v, 1, k) for g, v in B.value.parts.items()})
    prod = _PRODUCTS[key](a, b)
    if key == "dot":
        prod = Multivector5.scalar(prod) if not isinstance(prod, float) else Multivector5({})
    factor = math.comb(k + l, k) if weights == "exterior" else 1.0
    parts = {}
    for g, v in prod.parts.items():
        parts[g] = _antisymmetrize(v, 1, k + l) * float(factor) if k + l > 1 else v
    return ChartForm(k + l, Multivector5(parts))


def chart_hodge(form: ChartForm, metric) -> ChartForm:
    """Chart Hodge star for a positive definite metric ``(4, 4, *batch)``.

    ``(*w)_J = (1/k!) sqrt|g| w^I eps_{IJ}`` with ``eps_{1234} = 1``; on
    k-forms ``** = (-1)^{k(4-k)}``.
    """
    g = np.asarray(metric, dtype=float)
    gm = np.moveaxis(g, (0, 1), (-2, -1))
    ginv = np.moveaxis(np.linalg.inv(gm), (-2, -1), (0, 1))
    vol = np.sqrt(np.linalg.det(gm))
    k = form.degree
    letters = "abcd"
    parts = {}
    for grade, v in form.value.parts.items():
        x = np.asarray(v)
        for pos in range(k):
            # raise chart index at axis 1 + pos
            src = "x" + "".join("ABCD"[i] if i != pos else "m" for i in range(k)) + "..."
            dst = "x" + "".join("ABCD"[i] if i != pos else "n" for i in range(k)) + "..."
            x = np.einsum(f"nm...,{src}->{dst}", ginv, x)
        up = "".join(letters[:k])
        rest = "".join("efgh"[: CHART_DIM - k])
        y = np.einsum(f"{up}{rest},x{up}...->x{rest}...", EPSILON.eps4, x)
        parts[grade] = y * vol / math.factorial(k)
    return ChartForm(CHART_DIM - k, Multivector5(parts))
