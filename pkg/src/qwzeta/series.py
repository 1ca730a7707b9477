"""Complex power series in ``t`` truncated at a fixed order."""
from __future__ import annotations

import numpy as np

from .errors import InputError, SingularityError


class TruncatedSeries:
    """Coefficients ``c_0 .. c_L`` of a series known modulo ``t^(L+1)``.

    Binary operations between series of different orders truncate to the
    smaller order.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order=None):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise InputError("series order must be >= 0")
        out = np.zeros(order + 1, dtype=complex)
        m = min(len(c), order + 1)
        out[:m] = c[:m]
        self.coeffs = out

    @classmethod
    def one(cls, order):
        return cls([1.0], order)

    @classmethod
    def monomial(cls, power, order, coefficient=1.0):
        c = np.zeros(order + 1, dtype=complex)
        if power <= order:
            c[power] = coefficient
        return cls(c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            L = min(self.order, other.order)
            return self.coeffs[: L + 1], other.coeffs[: L + 1], L
        c = np.zeros_like(self.coeffs)
        c[0] = other
        return self.coeffs, c, self.order

    def __add__(self, other):
        a, b, L = self._coerce(other)
        return TruncatedSeries(a + b, L)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        a, b, L = self._coerce(other)
        return TruncatedSeries(a - b, L)

    def __rsub__(self, other):
        a, b, L = self._coerce(other)
        return TruncatedSeries(b - a, L)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.coeffs * other)
        a, b, L = self._coerce(other)
        return TruncatedSeries(np.convolve(a, b)[: L + 1], L)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return TruncatedSeries(self.coeffs / other)

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        result = TruncatedSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def reciprocal(self) -> "TruncatedSeries":
        c = self.coeffs
        if c[0] == 0:
            raise SingularityError("series with zero constant term has no reciprocal")
        r = np.zeros_like(c)
        r[0] = 1 / c[0]
        for n in range(1, len(c)):
            r[n] = -np.dot(c[1 : n + 1], r[n - 1 :: -1][:n]) / c[0]
        return TruncatedSeries(r)

    def exp(self) -> "TruncatedSeries":
        """exp of a series with zero constant term (``n f_n = sum k g_k f_{n-k}``)."""
        g = self.coeffs
        if g[0] != 0:
            raise InputError("exp needs a zero constant term to stay a formal series")
        f = np.zeros_like(g)
        f[0] = 1
        k = np.arange(len(g))
        for n in range(1, len(g)):
            f[n] = np.dot(k[1 : n + 1] * g[1 : n + 1], f[n - 1 :: -1][:n]) / n
        return TruncatedSeries(f)

    def log(self) -> "TruncatedSeries":
        f = self.coeffs
        if f[0] != 1:
            raise InputError("log needs constant term 1")
        g = np.zeros_like(f)
        k = np.arange(len(f))
        for n in range(1, len(f)):
            # n f_n = sum_{k=1}^{n} k g_k f_{n-k}
            acc = np.dot(k[1:n] * g[1:n], f[n - 1 : 0 : -1]) if n > 1 else 0
            g[n] = (n * f[n] - acc) / n
        return TruncatedSeries(g)

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, self.coeffs)

    def max_deviation(self, other: "TruncatedSeries") -> float:
        a, b, _ = self._coerce(other)
        return float(np.max(np.abs(a - b)))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"TruncatedSeries({self.coeffs.tolist()!r})"
