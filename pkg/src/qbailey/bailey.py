"""Bailey pairs: the defining relation, moves, base shift, and the registry.

A Bailey pair relative to the base a = q^c is a pair of sequences
(alpha_n, beta_n) of Laurent series with

    beta_n = sum_{t=0..n} alpha_t / ((q;q)_{n-t} (q^{c+1};q)_{n+t}).

Pairs are carried around with the normalized sequence

    alpha~_n = (1 - q^c)/(1 - q^{c+2n}) * alpha_n,

which is how the registry states its five pairs and what the base-change
moves consume.  The six moves (two forward, two backward, two base changes)
and the base shift each produce a new pair whose sequences are evaluated on
demand and memoized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Callable

from .laurent import LaurentSeries, monomial, one, zero
from .qproducts import (
    PochFactor,
    Q_FACTOR,
    inv_poch_finite,
    poch_finite,
)

_DEFAULT_REGISTRY = Path(__file__).parent / "data" / "bailey_pairs.json"

SeqFn = Callable[[int, int], LaurentSeries]


class RegistryError(ValueError):
    """The Bailey-pair data file is missing, malformed, or inconsistent."""


class Move(Enum):
    F1 = "F1"
    B1 = "B1"
    F2 = "F2"
    B2 = "B2"
    BC1 = "BC1"
    BC2 = "BC2"
    BASE_SHIFT = "BaseShift"

    @property
    def base_delta(self) -> int:
        if self in (Move.BC1, Move.BC2):
            return -1
        if self is Move.BASE_SHIFT:
            return 1
        return 0


def _binom2(x: int) -> int:
    return x * (x - 1) // 2


def _neg_q(c: int = 1) -> PochFactor:
    """(-q^c; q) base."""
    return PochFactor(-1, c, 1)


class BaileyPair:
    """A Bailey pair with lazily evaluated, memoized sequences.

    Exactly one of ``alpha`` / ``alpha_tilde`` is supplied; the other is
    derived.  Each sequence function takes (n, order) and must return a
    series exact at least to ``order``.  Memoization keeps the deepest
    (highest-order) evaluation per index; instances are immutable apart
    from these caches, so sharing across threads is safe under the GIL.
    """

    def __init__(self, base_exp: int, *, alpha: SeqFn | None = None,
                 alpha_tilde: SeqFn | None = None, beta: SeqFn,
                 provenance: tuple[str, ...] = ()):
        if (alpha is None) == (alpha_tilde is None):
            raise ValueError("supply exactly one of alpha / alpha_tilde")
        self.base_exp = base_exp
        self.provenance = provenance
        self._alpha_fn = alpha
        self._tilde_fn = alpha_tilde
        self._beta_fn = beta
        self._alpha_cache: dict[int, LaurentSeries] = {}
        self._tilde_cache: dict[int, LaurentSeries] = {}
        self._beta_cache: dict[int, LaurentSeries] = {}

    def _cached(self, cache, fn, n: int, order: int) -> LaurentSeries:
        hit = cache.get(n)
        if hit is None or hit.trunc < order:
            hit = fn(n, order)
            if hit.trunc < order:
                raise AssertionError("sequence evaluation lost truncation")
            cache[n] = hit
        return hit

    def alpha(self, n: int, order: int) -> LaurentSeries:
        if self._alpha_fn is not None:
            return self._cached(self._alpha_cache, self._alpha_fn, n, order)
        return self._cached(self._alpha_cache, self._alpha_from_tilde, n, order)

    def alpha_tilde(self, n: int, order: int) -> LaurentSeries:
        if self._tilde_fn is not None:
            return self._cached(self._tilde_cache, self._tilde_fn, n, order)
        return self._cached(self._tilde_cache, self._tilde_from_alpha, n, order)

    def beta(self, n: int, order: int) -> LaurentSeries:
        return self._cached(self._beta_cache, self._beta_fn, n, order)

    def _alpha_from_tilde(self, n: int, order: int) -> LaurentSeries:
        # alpha_n = (1 - q^{c+2n}) / (1 - q^c) * alpha~_n, needs c >= 1
        c = self.base_exp
        if c < 1:
            raise ValueError("alpha from alpha~ needs base exponent >= 1")
        return compose_exact(order, 0,
                        lambda o: self.alpha_tilde(n, o),
                        lambda o: poch_finite(PochFactor(1, c + 2 * n, 1), 1, o),
                        lambda o: inv_poch_finite(PochFactor(1, c, 1), 1, o))

    def _tilde_from_alpha(self, n: int, order: int) -> LaurentSeries:
        c = self.base_exp
        if c < 1:
            raise ValueError("alpha~ undefined at base exponent 0 (1 - a = 0)")
        return compose_exact(order, 0,
                        lambda o: self.alpha(n, o),
                        lambda o: poch_finite(PochFactor(1, c, 1), 1, o),
                        lambda o: inv_poch_finite(PochFactor(1, c + 2 * n, 1), 1, o))


def compose_exact(order: int, shift: int, parent_get: Callable[[int], LaurentSeries],
             *unit_gets: Callable[[int], LaurentSeries]) -> LaurentSeries:
    """parent * (valuation-zero unit factors) * q^shift, exact to order.

    The parent is re-requested at a deeper order when its valuation turns
    out negative, so stacked backward moves stay exact.
    """
    p = parent_get(order - shift)
    v = min(0, p._effval())
    if v < 0:
        p = parent_get(order - shift - v)
        v = min(0, p._effval())
    if p.is_zero():
        # parent vanishes to at least order - shift, so the piece vanishes
        # to at least order
        return zero(order)
    need = order - shift - v
    if need < 0:
        # every exponent of the piece lies above order
        return zero(order)
    acc = p
    for g in unit_gets:
        acc = acc * g(need)
    acc = acc.shift(shift)
    if acc.trunc < order:
        raise AssertionError("truncation underflow in move composition")
    return acc.truncated(order)


def apply_move(pair: BaileyPair, move: Move) -> BaileyPair:
    """Apply one of the six moves (or the base shift) to a Bailey pair."""
    if move is Move.BASE_SHIFT:
        return base_shift(pair.alpha, pair.beta, pair.base_exp,
                          provenance=pair.provenance + (move.value,))
    c = pair.base_exp
    prov = pair.provenance + (move.value,)

    if move is Move.F1:
        def alpha(n, order):
            return compose_exact(order, c * n + n * n,
                            lambda o: pair.alpha(n, o))

        def beta(n, order):
            total = zero(order)
            for j in range(n + 1):
                piece = compose_exact(order, c * j + j * j,
                                 lambda o, j=j: pair.beta(j, o),
                                 lambda o, j=j: inv_poch_finite(Q_FACTOR, n - j, o))
                total = total + piece
            return total
        return BaileyPair(c, alpha=alpha, beta=beta, provenance=prov)

    if move is Move.B1:
        def alpha(n, order):
            return compose_exact(order, -c * n - n * n,
                            lambda o: pair.alpha(n, o))

        def beta(n, order):
            total = zero(order)
            for j in range(n + 1):
                sgn = -1 if (n + j) % 2 else 1
                piece = compose_exact(order, -c * n - n * n + _binom2(n - j),
                                 lambda o, j=j: pair.beta(j, o),
                                 lambda o, j=j: inv_poch_finite(Q_FACTOR, n - j, o))
                total = total + piece * sgn
            return total
        return BaileyPair(c, alpha=alpha, beta=beta, provenance=prov)

    if move is Move.F2:
        def alpha(n, order):
            return compose_exact(order, _binom2(n) + c * n,
                            lambda o: pair.alpha(n, o),
                            lambda o: poch_finite(_neg_q(), n, o),
                            lambda o: inv_poch_finite(_neg_q(c), n, o))

        def beta(n, order):
            total = zero(order)
            for j in range(n + 1):
                piece = compose_exact(order, _binom2(j) + c * j,
                                 lambda o, j=j: pair.beta(j, o),
                                 lambda o, j=j: poch_finite(_neg_q(), j, o),
                                 lambda o: inv_poch_finite(_neg_q(c), n, o),
                                 lambda o, j=j: inv_poch_finite(Q_FACTOR, n - j, o))
                total = total + piece
            return total
        return BaileyPair(c, alpha=alpha, beta=beta, provenance=prov)

    if move is Move.B2:
        def alpha(n, order):
            return compose_exact(order, -_binom2(n) - c * n,
                            lambda o: pair.alpha(n, o),
                            lambda o: poch_finite(_neg_q(c), n, o),
                            lambda o: inv_poch_finite(_neg_q(), n, o))

        def beta(n, order):
            total = zero(order)
            for j in range(n + 1):
                sgn = -1 if (n + j) % 2 else 1
                piece = compose_exact(order, -c * n - _binom2(n) + _binom2(n - j),
                                 lambda o, j=j: pair.beta(j, o),
                                 lambda o, j=j: poch_finite(_neg_q(c), j, o),
                                 lambda o: inv_poch_finite(_neg_q(), n, o),
                                 lambda o, j=j: inv_poch_finite(Q_FACTOR, n - j, o))
                total = total + piece * sgn
            return total
        return BaileyPair(c, alpha=alpha, beta=beta, provenance=prov)

    if move in (Move.BC1, Move.BC2):
        # alpha'_0 = alpha_0; for n >= 1 both moves combine
        # alpha~_n - a q^{2n-2} alpha~_{n-1} of the *original* base.
        def bracket(n, o):
            s = c + 2 * n - 2
            t1 = pair.alpha_tilde(n, o)
            t2 = pair.alpha_tilde(n - 1, o - s)
            return t1 - t2.shift(s)

        if move is Move.BC1:
            def alpha(n, order):
                if n == 0:
                    return pair.alpha(0, order)
                return compose_exact(order, c * n + n * n - n,
                                lambda o: bracket(n, o))

            def beta(n, order):
                total = zero(order)
                for j in range(n + 1):
                    piece = compose_exact(order, c * j + j * j - j,
                                     lambda o, j=j: pair.beta(j, o),
                                     lambda o, j=j: inv_poch_finite(Q_FACTOR, n - j, o))
                    total = total + piece
                return total
        else:
            def alpha(n, order):
                if n == 0:
                    return pair.alpha(0, order)
                return compose_exact(order, c * n + _binom2(n) - n,
                                lambda o: bracket(n, o),
                                lambda o: poch_finite(_neg_q(), n, o),
                                lambda o: inv_poch_finite(_neg_q(c - 1), n, o))

            def beta(n, order):
                total = zero(order)
                for j in range(n + 1):
                    piece = compose_exact(order, c * j + _binom2(j) - j,
                                     lambda o, j=j: pair.beta(j, o),
                                     lambda o, j=j: poch_finite(_neg_q(), j, o),
                                     lambda o: inv_poch_finite(_neg_q(c - 1), n, o),
                                     lambda o, j=j: inv_poch_finite(Q_FACTOR, n - j, o))
                    total = total + piece
                return total
        return BaileyPair(c - 1, alpha=alpha, beta=beta, provenance=prov)

    raise ValueError(f"unknown move {move!r}")


def apply_moves(pair: BaileyPair, moves) -> BaileyPair:
    for m in moves:
        pair = apply_move(pair, m)
    return pair


def base_shift(alpha_prime: SeqFn, beta: SeqFn, base_exp: int, *,
               provenance: tuple[str, ...] = ()) -> BaileyPair:
    """Shift a pair at base q^c to base q^{c+1}, keeping beta.

    The new pair's alpha~ is built by the recurrence
    alpha~_0 = alpha'_0, alpha~_{n+1} = q^{c+2n+1} alpha~_n + alpha'_{n+1}.
    """
    c = base_exp
    cache: dict[int, LaurentSeries] = {}

    def tilde(n: int, order: int) -> LaurentSeries:
        hit = cache.get(n)
        if hit is not None and hit.trunc >= order:
            return hit
        if n == 0:
            out = alpha_prime(0, order)
        else:
            s = c + 2 * n - 1
            out = tilde(n - 1, order - s).shift(s) + alpha_prime(n, order)
        out = out.truncated(order)
        cache[n] = out
        return out

    return BaileyPair(c + 1, alpha_tilde=tilde, beta=beta,
                      provenance=provenance + (Move.BASE_SHIFT.value,))


def base_shift_closed_tilde(alpha_prime: SeqFn, base_exp: int, n: int,
                            order: int) -> LaurentSeries:
    """Closed-sum form of the shifted alpha~:
    alpha~_n = sum_{r=0..n} q^{c(n-r) + n^2 - r^2} alpha'_r."""
    c = base_exp
    total = zero(order)
    for r in range(n + 1):
        s = c * (n - r) + n * n - r * r
        total = total + alpha_prime(r, order - s).shift(s).truncated(order)
    return total


def verify_pair(pair: BaileyPair, n_max: int, order: int) -> list[bool]:
    """Check the defining relation for each 0 <= n <= n_max to the given order."""
    c = pair.base_exp
    results = []
    for n in range(n_max + 1):
        lhs = pair.beta(n, order)
        rhs = zero(order)
        for t in range(n + 1):
            piece = compose_exact(order, 0,
                             lambda o, t=t: pair.alpha(t, o),
                             lambda o, t=t: inv_poch_finite(Q_FACTOR, n - t, o),
                             lambda o, t=t: inv_poch_finite(
                                 PochFactor(1, c + 1, 1), n + t, o))
            rhs = rhs + piece
        results.append(lhs.eq_to_order(rhs, order))
    return results


# -- registry ----------------------------------------------------------------

@dataclass(frozen=True)
class TildeCase:
    """alpha~_m = sign * q^{(quad*m^2 + lin*m)/den} on one residue class mod 3."""

    sign: int
    quad: int
    lin: int
    den: int

    def exponent(self, m: int) -> int:
        num = self.quad * m * m + self.lin * m
        if num % self.den:
            raise RegistryError(
                f"exponent ({self.quad}m^2{self.lin:+d}m)/{self.den} "
                f"is not integral at m={m}"
            )
        return num // self.den


@dataclass(frozen=True)
class BetaSpec:
    """beta_n = q^{mono_quad*n^2 + mono_lin*n} * prod(numerator) / prod(denominator),
    with Pochhammer lengths given per factor as a multiple of n."""

    mono_quad: int
    mono_lin: int
    numerator: tuple[tuple[PochFactor, str], ...]
    denominator: tuple[tuple[PochFactor, str], ...]


@dataclass(frozen=True)
class RegistryEntry:
    id: int
    base_exp: int
    source: str
    moduli: tuple[str, str]
    alpha_cases: tuple[TildeCase | None, TildeCase | None, TildeCase | None]
    beta: BetaSpec

    def alpha_tilde_monomial(self, m: int) -> tuple[int, int] | None:
        """(sign, exponent) of alpha~_m, or None when alpha~_m = 0."""
        case = self.alpha_cases[m % 3]
        if case is None:
            return None
        return case.sign, case.exponent(m)


def _length(kind: str, n: int) -> int:
    if kind == "n":
        return n
    if kind == "2n":
        return 2 * n
    raise RegistryError(f"unknown Pochhammer length kind {kind!r}")


def _poch_with_unit_base(f: PochFactor, length: int, order: int):
    """(scalar, series) for a finite symbol, normalizing (-1; q^d)_L, whose
    leading coefficient is 2, to 2 * (-q^d; q^d)_{L-1} so the series part
    stays unit-leading (and hence invertible)."""
    if f.sign == -1 and f.base_exp == 0:
        if length == 0:
            return 1, one(order)
        return 2, poch_finite(PochFactor(-1, f.step, f.step), length - 1, order)
    return 1, poch_finite(f, length, order)


def beta_from_spec(spec: BetaSpec, n: int, order: int) -> LaurentSeries:
    if order < 0:
        return zero(order)  # beta has valuation >= 0, so nothing is visible
    shift = spec.mono_quad * n * n + spec.mono_lin * n
    work = order - min(shift, 0)
    num_scalar = 1
    acc = one(work)
    for f, kind in spec.numerator:
        scal, series = _poch_with_unit_base(f, _length(kind, n), work)
        num_scalar *= scal
        acc = acc * series
    den_scalar = 1
    for f, kind in spec.denominator:
        scal, series = _poch_with_unit_base(f, _length(kind, n), work)
        den_scalar *= scal
        acc = acc * series.invert().truncated(work)
    if num_scalar % den_scalar:
        raise RegistryError(
            f"non-integral scalar {num_scalar}/{den_scalar} in beta evaluation"
        )
    acc = acc * (num_scalar // den_scalar)
    return acc.shift(shift).truncated(order)


def _parse_factor(obj) -> PochFactor:
    try:
        return PochFactor(obj["sign"], obj["base_exp"], obj["step"])
    except (KeyError, TypeError, ValueError) as exc:
        raise RegistryError(f"bad Pochhammer factor {obj!r}: {exc}") from exc


def _parse_entry(obj) -> RegistryEntry:
    try:
        cases = []
        for residue in ("0", "1", "2"):
            case = obj["alpha_tilde"][residue]
            if case is None:
                cases.append(None)
            else:
                tc = TildeCase(case["sign"], case["quad"], case["lin"], case["den"])
                if tc.sign not in (1, -1) or tc.den < 1:
                    raise RegistryError(f"bad alpha~ case {case!r}")
                cases.append(tc)
        beta = obj["beta"]
        spec = BetaSpec(
            beta["mono_quad"], beta["mono_lin"],
            tuple((_parse_factor(f), f["length"]) for f in beta["numerator"]),
            tuple((_parse_factor(f), f["length"]) for f in beta["denominator"]),
        )
        entry = RegistryEntry(
            id=obj["id"], base_exp=obj["base_exp"], source=obj["source"],
            moduli=tuple(obj["moduli"]), alpha_cases=tuple(cases), beta=spec,
        )
    except RegistryError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise RegistryError(f"malformed registry entry: {exc}") from exc
    if entry.base_exp < 1:
        raise RegistryError(f"pair {entry.id}: base exponent must be >= 1")
    if entry.alpha_tilde_monomial(0) != (1, 0):
        raise RegistryError(f"pair {entry.id}: alpha~_0 must equal 1")
    for kind in ("n", "2n"):
        _length(kind, 0)
    # every exponent in the case table must be integral on its residue class
    for m in range(12):
        entry.alpha_tilde_monomial(m)
    return entry


@lru_cache(maxsize=None)
def load_registry(path: str | None = None) -> dict[int, RegistryEntry]:
    """Load and validate the Table-of-pairs data file."""
    p = Path(path) if path else _DEFAULT_REGISTRY
    try:
        raw = json.loads(p.read_text())
    except OSError as exc:
        raise RegistryError(f"cannot read registry {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RegistryError(f"registry {p} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or raw.get("schema_version") != 1:
        raise RegistryError(f"registry {p}: unsupported or missing schema_version")
    entries = {}
    for obj in raw.get("pairs", ()):
        entry = _parse_entry(obj)
        if entry.id in entries:
            raise RegistryError(f"duplicate pair id {entry.id}")
        entries[entry.id] = entry
    if sorted(entries) != [1, 2, 3, 4, 5]:
        raise RegistryError(f"registry must define pairs 1..5, got {sorted(entries)}")
    return entries


def registry_entry(pair_id: int, path: str | None = None) -> RegistryEntry:
    entries = load_registry(path)
    if pair_id not in entries:
        raise ValueError(f"no Bailey pair with id {pair_id} (valid: 1..5)")
    return entries[pair_id]


def registry_pair(pair_id: int, path: str | None = None) -> BaileyPair:
    """Instantiate one of the five registry pairs as a BaileyPair."""
    entry = registry_entry(pair_id, path)

    def tilde(n: int, order: int) -> LaurentSeries:
        mono = entry.alpha_tilde_monomial(n)
        if mono is None:
            return zero(order)
        sign, exp = mono
        return monomial(sign, exp, max(order, exp))

    def beta(n: int, order: int) -> LaurentSeries:
        return beta_from_spec(entry.beta, n, order)

    return BaileyPair(entry.base_exp, alpha_tilde=tilde, beta=beta,
                      provenance=(f"pair{pair_id}",))


def slater_a1_pair() -> BaileyPair:
    """The unshifted pair behind registry pair 1 (base a = 1), kept to
    exercise the base shift: alpha'_0 = 1, alpha'_{3t-1} = -q^{6t^2-5t+1},
    alpha'_{3t} = q^{6t^2-t} + q^{6t^2+t}, alpha'_{3t+1} = -q^{6t^2+5t+1},
    with beta_n = 1/(q;q)_{2n}."""

    def alpha(m: int, order: int) -> LaurentSeries:
        if m == 0:
            return one(order) if order >= 0 else zero(order)
        r = m % 3
        if r == 2:
            t = (m + 1) // 3
            e = 6 * t * t - 5 * t + 1
            return monomial(-1, e, max(order, e))
        if r == 0:
            t = m // 3
            e1, e2 = 6 * t * t - t, 6 * t * t + t
            return LaurentSeries({e1: 1, e2: 1}, max(order, e2))
        t = (m - 1) // 3
        e = 6 * t * t + 5 * t + 1
        return monomial(-1, e, max(order, e))

    def beta(n: int, order: int) -> LaurentSeries:
        return inv_poch_finite(Q_FACTOR, 2 * n, order)

    return BaileyPair(0, alpha=alpha, beta=beta, provenance=("slaterA1",))
