"""Integer Laurent polynomials in one variable."""

from __future__ import annotations

from typing import Iterable, Mapping

__all__ = ["LaurentPolynomial"]


class LaurentPolynomial:
    """Sparse integer Laurent polynomial; zero coefficients are never stored."""

    __slots__ = ("_terms", "var")

    def __init__(self, terms: Mapping[int, int] | None = None, var: str = "A"):
        self._terms = {int(e): int(c) for e, c in (terms or {}).items() if c}
        self.var = var

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1, var: str = "A") -> "LaurentPolynomial":
        return cls({exponent: coeff}, var)

    @classmethod
    def constant(cls, c: int, var: str = "A") -> "LaurentPolynomial":
        return cls({0: c}, var)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[int], low: int = 0, var: str = "A"):
        """Coefficients listed from exponent `low` upwards."""
        return cls({low + i: c for i, c in enumerate(coeffs)}, var)

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def exponents(self) -> list[int]:
        return sorted(self._terms)

    def coefficient(self, e: int) -> int:
        return self._terms.get(e, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def min_degree(self) -> int:
        return min(self._terms)

    def max_degree(self) -> int:
        return max(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self._terms.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPolynomial({-e * -k: c ** -k}, self.var)
        out = LaurentPolynomial.constant(1, self.var)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by var**k."""
        return LaurentPolynomial({e + k: c for e, c in self._terms.items()}, self.var)

    def substitute_inverse(self) -> "LaurentPolynomial":
        """var -> var**-1 (mirror image for the bracket)."""
        return LaurentPolynomial({-e: c for e, c in self._terms.items()}, self.var)

    def evaluate(self, x):
        return sum(c * x ** e for e, c in self._terms.items())

    def term_list(self) -> list[str]:
        """Stable ``coeff*var^exp`` serialization, ascending exponents."""
        return [f"{self._terms[e]}*{self.var}^{e}" for e in sorted(self._terms)]

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self._terms!r}, var={self.var!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = self.var if e == 1 else f"{self.var}^{e}"
                body = power if mag == 1 else f"{mag}*{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)
