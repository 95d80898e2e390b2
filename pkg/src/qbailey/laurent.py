"""Exact arithmetic on truncated formal Laurent series in q.

A ``LaurentSeries`` stores a finite map exponent -> integer coefficient
together with a truncation order ``trunc``: the series is known exactly at
every exponent <= trunc and unknown above.  All coefficients are Python
ints, so arithmetic is exact at arbitrary precision.  Truncation is
propagated conservatively through multiplication (via valuations), so a
result never reports a coefficient it does not actually know.

Values are immutable after construction and safe to share between threads.
"""

from __future__ import annotations


class TruncationError(ValueError):
    """A coefficient or comparison beyond the known truncation order."""


class InversionError(ValueError):
    """Inversion of a series that is zero to truncation or not unit-leading."""


class RunawayValuationError(ArithmeticError):
    """Exponents fell below the configured floor; computation is diverging."""


# Exponents below -RUNAWAY_FACTOR * max(|trunc|, RUNAWAY_BASE) abort.  Every
# quantity of interest has valuation bounded well above this; hitting the
# floor means a schedule or product was set up wrong and is running away.
RUNAWAY_FACTOR = 10
RUNAWAY_BASE = 50


def _floor_for(trunc: int) -> int:
    return -RUNAWAY_FACTOR * max(abs(trunc), RUNAWAY_BASE)


class LaurentSeries:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms: dict[int, int], trunc: int):
        """Build from an exponent -> coefficient map, canonicalizing.

        Zero coefficients are dropped.  Exponents above ``trunc`` are an
        error: the caller would be claiming knowledge it cannot have.
        """
        clean = {e: c for e, c in terms.items() if c != 0}
        if clean:
            lo, hi = min(clean), max(clean)
            if hi > trunc:
                raise TruncationError(
                    f"exponent {hi} exceeds truncation order {trunc}"
                )
            if lo < _floor_for(trunc):
                raise RunawayValuationError(
                    f"exponent {lo} below valuation floor {_floor_for(trunc)}"
                )
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, trunc: int) -> "LaurentSeries":
        return cls({}, trunc)

    @classmethod
    def one(cls, trunc: int) -> "LaurentSeries":
        return cls({0: 1}, trunc)

    @classmethod
    def monomial(cls, coeff: int, exp: int, trunc: int) -> "LaurentSeries":
        return cls({exp: coeff}, trunc)

    # -- inspection --------------------------------------------------------

    def val(self) -> int | None:
        """Lowest exponent with nonzero coefficient, or None if zero."""
        return min(self.terms) if self.terms else None

    def _effval(self) -> int:
        # For truncation bookkeeping a series that is zero to its truncation
        # behaves as if its valuation were trunc + 1 (it could start there).
        return min(self.terms) if self.terms else self.trunc + 1

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp: int) -> int:
        if exp > self.trunc:
            raise TruncationError(
                f"coefficient at q^{exp} unknown (trunc={self.trunc})"
            )
        return self.terms.get(exp, 0)

    def coefficients(self, lo: int, hi: int) -> list[int]:
        """Coefficients of q^lo .. q^hi inclusive."""
        if hi > self.trunc:
            raise TruncationError(
                f"coefficient at q^{hi} unknown (trunc={self.trunc})"
            )
        return [self.terms.get(e, 0) for e in range(lo, hi + 1)]

    def eq_to_order(self, other: "LaurentSeries", order: int) -> bool:
        """True iff all coefficients agree at every exponent <= order."""
        if order > self.trunc or order > other.trunc:
            raise TruncationError(
                f"cannot compare to order {order}: truncations are "
                f"{self.trunc} and {other.trunc}"
            )
        for e, c in self.terms.items():
            if e <= order and other.terms.get(e, 0) != c:
                return False
        for e, c in other.terms.items():
            if e <= order and e not in self.terms:
                return False
        return True

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        trunc = min(self.trunc, other.trunc)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentSeries({e: c for e, c in out.items() if e <= trunc}, trunc)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries({e: -c for e, c in self.terms.items()}, self.trunc)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentSeries(
                {e: c * other for e, c in self.terms.items()}, self.trunc
            )
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        trunc = min(self.trunc + other._effval(), other.trunc + self._effval())
        out: dict[int, int] = {}
        ys = sorted(other.terms.items())
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in ys:
                e = e1 + e2
                if e > trunc:
                    break
                out[e] = get(e, 0) + c1 * c2
        return LaurentSeries(out, trunc)

    __rmul__ = __mul__

    def shift(self, m: int) -> "LaurentSeries":
        """Multiply by q^m: all exponents and the truncation move by m."""
        if m == 0:
            return self
        return LaurentSeries(
            {e + m: c for e, c in self.terms.items()}, self.trunc + m
        )

    def invert(self) -> "LaurentSeries":
        """Multiplicative inverse.

        Requires the lowest coefficient to be +1 or -1 (all inversions this
        engine needs are unit-leading, which keeps every expansion integral).
        The result is exact to trunc - 2*val.
        """
        v = self.val()
        if v is None:
            raise InversionError("cannot invert a series that is zero to truncation")
        lead = self.terms[v]
        if lead not in (1, -1):
            raise InversionError(f"leading coefficient {lead} is not a unit")
        m = self.trunc - v  # known length of the monic tail
        # u = lead * q^-v * self  is 1 + (terms of positive exponent)
        u = [0] * (m + 1)
        for e, c in self.terms.items():
            u[e - v] = lead * c
        inv = [0] * (m + 1)
        inv[0] = 1
        for e in range(1, m + 1):
            s = 0
            for d in range(1, e + 1):
                if u[d]:
                    s += u[d] * inv[e - d]
            inv[e] = -s
        terms = {e - v: lead * c for e, c in enumerate(inv) if c}
        return LaurentSeries(terms, self.trunc - 2 * v)

    def truncated(self, order: int) -> "LaurentSeries":
        """Forget everything above ``order`` (order must be <= trunc)."""
        if order > self.trunc:
            raise TruncationError(
                f"cannot extend truncation {self.trunc} to {order}"
            )
        if order == self.trunc:
            return self
        return LaurentSeries(
            {e: c for e, c in self.terms.items() if e <= order}, order
        )

    # -- equality / text form ---------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentSeries)
            and self.trunc == other.trunc
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.trunc, tuple(sorted(self.terms.items()))))

    def to_text(self) -> str:
        """Canonical text form, e.g. ``trunc=10; -1:1 0:2 3:-5``."""
        body = " ".join(f"{e}:{c}" for e, c in sorted(self.terms.items()))
        return f"trunc={self.trunc};" + (f" {body}" if body else "")

    def __repr__(self) -> str:
        return f"LaurentSeries({self.to_text()!r})"


def from_text(text: str) -> LaurentSeries:
    """Parse the canonical text form produced by ``to_text``."""
    head, _, body = text.partition(";")
    head = head.strip()
    if not head.startswith("trunc="):
        raise ValueError(f"malformed series text: {text!r}")
    trunc = int(head[len("trunc="):])
    terms: dict[int, int] = {}
    for chunk in body.split():
        e, _, c = chunk.partition(":")
        terms[int(e)] = int(c)
    return LaurentSeries(terms, trunc)


def zero(trunc: int) -> LaurentSeries:
    return LaurentSeries.zero(trunc)


def one(trunc: int) -> LaurentSeries:
    return LaurentSeries.one(trunc)


def monomial(coeff: int, exp: int, trunc: int) -> LaurentSeries:
    return LaurentSeries.monomial(coeff, exp, trunc)
