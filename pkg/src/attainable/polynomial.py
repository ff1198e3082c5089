"""Sparse multivariate polynomials and polynomial vector fields.

A polynomial is a tuple of ``(coefficient, exponent_vector)`` terms. Terms
are merged on their integer exponent keys, so like monomials combine exactly
and zero coefficients never survive construction.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Exponent = tuple[int, ...]
Term = tuple[float, Exponent]


def _merge_terms(nvars: int, terms: Iterable[tuple[float, Sequence[int]]]) -> tuple[Term, ...]:
    acc: dict[Exponent, float] = defaultdict(float)
    for coef, exps in terms:
        key = tuple(int(e) for e in exps)
        if len(key) != nvars:
            raise ValueError(f"exponent vector {key} has length {len(key)}, expected {nvars}")
        if any(e < 0 for e in key):
            raise ValueError(f"negative exponent in {key}")
        acc[key] += float(coef)
    return tuple((c, e) for e, c in sorted(acc.items(), reverse=True) if c != 0.0)


@dataclass(frozen=True)
class Polynomial:
    nvars: int
    terms: tuple[Term, ...]

    @classmethod
    def from_terms(cls, nvars: int, terms: Iterable[tuple[float, Sequence[int]]]) -> Polynomial:
        return cls(nvars, _merge_terms(nvars, terms))

    @property
    def degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    def coefficients(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms], dtype=float)

    def __call__(self, x) -> np.ndarray | float:
        """Evaluate at a point (shape ``(nvars,)``) or a batch ``(N, nvars)``."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.nvars:
            raise ValueError(f"point has dimension {x.shape[-1]}, polynomial has {self.nvars} variables")
        if not self.terms:
            return np.zeros(x.shape[:-1]) if x.ndim > 1 else 0.0
        exps = np.array([e for _, e in self.terms])
        coefs = self.coefficients()
        monos = np.prod(x[..., None, :] ** exps, axis=-1)
        out = monos @ coefs
        return out if x.ndim > 1 else float(out)

    def __add__(self, other: Polynomial) -> Polynomial:
        return Polynomial.from_terms(self.nvars, self.terms + other.terms)

    def __str__(self) -> str:
        return format_polynomial(self)


@dataclass(frozen=True)
class PolynomialVectorField:
    """``s`` polynomial components in ``s`` variables."""

    species_count: int
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        if len(self.components) != self.species_count:
            raise ValueError(
                f"{len(self.components)} components given for {self.species_count} species"
            )
        for comp in self.components:
            if comp.nvars != self.species_count:
                raise ValueError("component variable count differs from species count")

    @classmethod
    def from_terms(cls, species_count: int, components) -> PolynomialVectorField:
        return cls(
            species_count,
            tuple(Polynomial.from_terms(species_count, terms) for terms in components),
        )

    @cached_property
    def monomials(self) -> np.ndarray:
        """Distinct exponent vectors across all components, shape ``(m, s)``."""
        keys = sorted({e for comp in self.components for _, e in comp.terms}, reverse=True)
        if not keys:
            return np.zeros((0, self.species_count), dtype=np.int64)
        return np.array(keys, dtype=np.int64)

    @cached_property
    def coefficient_matrix(self) -> np.ndarray:
        """``C[k, i]`` is the coefficient of monomial ``k`` in component ``i``."""
        index = {tuple(int(v) for v in e): k for k, e in enumerate(self.monomials)}
        mat = np.zeros((len(index), self.species_count))
        for i, comp in enumerate(self.components):
            for c, e in comp.terms:
                mat[index[e], i] = c
        return mat

    @property
    def degree(self) -> int:
        return max((c.degree for c in self.components), default=0)

    def is_linear(self) -> bool:
        return all(sum(e) == 1 for e in map(tuple, self.monomials))

    def linear_matrix(self) -> np.ndarray:
        """Matrix ``A`` with ``f(x) = x @ A`` for a homogeneous linear field."""
        if not self.is_linear():
            raise ValueError("field is not homogeneous linear")
        A = np.zeros((self.species_count, self.species_count))
        for k, e in enumerate(self.monomials):
            A[int(np.argmax(e))] += self.coefficient_matrix[k]
        return A

    def __call__(self, x) -> np.ndarray:
        return evaluate_field(self, x)

    def __str__(self) -> str:
        return "\n".join(f"dx{i + 1}/dt = {format_polynomial(c)}" for i, c in enumerate(self.components))


def evaluate_field(field: PolynomialVectorField, x) -> np.ndarray:
    """Evaluate every component at ``x`` (a point or an ``(N, s)`` batch)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != field.species_count:
        raise ValueError(
            f"point has dimension {x.shape[-1]}, field has {field.species_count} species"
        )
    E = field.monomials
    if len(E) == 0:
        return np.zeros_like(x)
    monos = np.prod(x[..., None, :] ** E, axis=-1)
    return monos @ field.coefficient_matrix


_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?P<coef>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*
        (?P<vars>(?:\*?\s*x\d+\s*(?:(?:\^|\*\*)\s*\d+)?\s*)*)""",
    re.VERBOSE,
)
_VAR_RE = re.compile(r"x(\d+)\s*(?:(?:\^|\*\*)\s*(\d+))?")


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Parse text such as ``"-2*x1^2 - 6*x1*x4 + 10*x3*x4"``.

    Variables are ``x1 .. x{nvars}`` (1-based); ``^`` and ``**`` both mean power.
    """
    src = text.strip()
    if not src:
        raise ValueError("empty polynomial")
    terms = []
    pos = 0
    while pos < len(src):
        m = _TERM_RE.match(src, pos)
        if m is None or m.end() == pos or (not m.group("coef") and not m.group("vars").strip()):
            raise ValueError(f"cannot parse polynomial near column {pos + 1}: {src[pos:pos + 12]!r}")
        if terms and not m.group("sign"):
            raise ValueError(f"missing operator before column {pos + 1} in {src!r}")
        coef = float(m.group("coef")) if m.group("coef") else 1.0
        if m.group("sign") == "-":
            coef = -coef
        exps = [0] * nvars
        for var, power in _VAR_RE.findall(m.group("vars")):
            idx = int(var) - 1
            if not 0 <= idx < nvars:
                raise ValueError(f"variable x{var} out of range 1..{nvars}")
            exps[idx] += int(power) if power else 1
        terms.append((coef, exps))
        pos = m.end()
    return Polynomial.from_terms(nvars, terms)


def _fmt_coef(c: float) -> str:
    return str(int(c)) if float(c).is_integer() and abs(c) < 1e15 else repr(float(c))


def format_polynomial(poly: Polynomial) -> str:
    """Inverse of :func:`parse_polynomial` (round-trips exactly)."""
    if not poly.terms:
        return "0"
    parts = []
    for k, (c, e) in enumerate(poly.terms):
        factors = [f"x{i + 1}" + (f"^{p}" if p > 1 else "") for i, p in enumerate(e) if p]
        mag = abs(c)
        if factors and mag == 1.0:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_coef(mag)] + factors)
        sign = "-" if c < 0 else "+"
        parts.append((("-" if sign == "-" else "") if k == 0 else f" {sign} ") + body)
    return "".join(parts)
