"""Exact truncated power series in q (and in z, q) with q-Pochhammer expansion.

All coefficients are Python ints, so nothing ever rounds or overflows.  A
series remembers the highest q-degree it is valid to (``trunc``); combining
two series keeps the smaller of the two so that no result claims knowledge
beyond what both operands carry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "QPoly",
    "ZQPoly",
    "Factor",
    "Extra",
    "ProductSpec",
    "NonUnitConstantTerm",
    "DivisionError",
    "INF",
    "expand",
    "generators",
    "pochhammer",
    "first_negative",
    "rr_sum_side",
]

INF = None  # sentinel for an infinite product length


class NonUnitConstantTerm(ValueError):
    """Raised when inverting a series whose constant term is not +1 or -1."""


class DivisionError(ArithmeticError):
    """Raised when an exact division by a power of q leaves a remainder."""


class QPoly:
    """Dense series ``sum c[n] q^n`` known exactly for ``0 <= n <= trunc``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[int], trunc: int | None = None):
        c = [int(x) for x in coeffs]
        if trunc is None:
            trunc = len(c) - 1
        if trunc < 0:
            raise ValueError("trunc must be >= 0")
        if len(c) > trunc + 1:
            c = c[: trunc + 1]
        else:
            c.extend([0] * (trunc + 1 - len(c)))
        self._c = tuple(c)

    # construction helpers -------------------------------------------------
    @classmethod
    def one(cls, trunc: int) -> QPoly:
        return cls([1], trunc)

    @classmethod
    def zero(cls, trunc: int) -> QPoly:
        return cls([], trunc)

    @classmethod
    def monomial(cls, degree: int, trunc: int, coeff: int = 1) -> QPoly:
        c = [0] * (trunc + 1)
        if 0 <= degree <= trunc:
            c[degree] = coeff
        return cls(c, trunc)

    @classmethod
    def from_terms(cls, terms: Mapping[int, int], trunc: int) -> QPoly:
        c = [0] * (trunc + 1)
        for n, v in terms.items():
            if n < 0:
                raise ValueError("negative exponent")
            if n <= trunc:
                c[n] += v
        return cls(c, trunc)

    # basic access -----------------------------------------------------------
    @property
    def trunc(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._c

    def __getitem__(self, n: int) -> int:
        if n < 0 or n > self.trunc:
            raise IndexError(f"degree {n} outside 0..{self.trunc}")
        return self._c[n]

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QPoly):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"QPoly({list(self._c)!r}, trunc={self.trunc})"

    def __str__(self) -> str:
        return format_series({(0, n): v for n, v in enumerate(self._c)}, with_z=False)

    def truncate(self, trunc: int) -> QPoly:
        if trunc > self.trunc:
            raise ValueError("cannot extend a truncated series")
        return QPoly(self._c[: trunc + 1], trunc)

    def is_zero(self) -> bool:
        return not any(self._c)

    def valuation(self) -> int | None:
        """Lowest degree with a nonzero coefficient, or None for zero."""
        for n, v in enumerate(self._c):
            if v:
                return n
        return None

    # ring operations ----------------------------------------------------------
    def _coerce(self, other) -> QPoly:
        if isinstance(other, QPoly):
            return other
        if isinstance(other, int):
            return QPoly([other], self.trunc)
        return NotImplemented

    def __add__(self, other) -> QPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = min(self.trunc, other.trunc)
        return QPoly([x + y for x, y in zip(self._c[: t + 1], other._c[: t + 1])], t)

    __radd__ = __add__

    def __neg__(self) -> QPoly:
        return QPoly([-x for x in self._c], self.trunc)

    def __sub__(self, other) -> QPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = min(self.trunc, other.trunc)
        return QPoly([x - y for x, y in zip(self._c[: t + 1], other._c[: t + 1])], t)

    def __rsub__(self, other) -> QPoly:
        return (-self) + other

    def __mul__(self, other) -> QPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = min(self.trunc, other.trunc)
        a, b = self._c, other._c
        # iterate over the sparser operand
        if sum(1 for x in a[: t + 1] if x) > sum(1 for x in b[: t + 1] if x):
            a, b = b, a
        out = [0] * (t + 1)
        for i in range(t + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(t + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return QPoly(out, t)

    __rmul__ = __mul__

    def shift(self, k: int) -> QPoly:
        """Multiply by q^k, dropping degrees past trunc."""
        if k < 0:
            raise ValueError("use divide_q for negative shifts")
        t = self.trunc
        return QPoly([0] * k + list(self._c[: max(t + 1 - k, 0)]), t)

    def divide_q(self, k: int) -> QPoly:
        """Exact division by q^k; the result is valid to trunc - k."""
        if k < 0:
            raise ValueError("k must be >= 0")
        if k > self.trunc:
            raise DivisionError(f"cannot divide a series known to degree {self.trunc} by q^{k}")
        low = self._c[:k]
        for n, v in enumerate(low):
            if v:
                raise DivisionError(f"coefficient of q^{n} is {v}, not divisible by q^{k}")
        return QPoly(self._c[k:], self.trunc - k)

    def invert(self) -> QPoly:
        """Reciprocal series; the constant term must be a unit."""
        a0 = self._c[0]
        if a0 not in (1, -1):
            raise NonUnitConstantTerm(f"constant term {a0} is not +-1")
        t = self.trunc
        a = self._c
        support = [i for i in range(1, t + 1) if a[i]]
        g = [0] * (t + 1)
        g[0] = a0  # 1/a0 == a0 for units
        for n in range(1, t + 1):
            s = 0
            for i in support:
                if i > n:
                    break
                s += a[i] * g[n - i]
            g[n] = -a0 * s
        return QPoly(g, t)

    def to_dict(self) -> dict:
        return {"trunc": self.trunc, "coeffs": list(self._c)}


class ZQPoly:
    """Bivariate series ``sum c[m][n] z^m q^n``, truncated in q only.

    Stored sparse in the z-degree ``m`` (a dict of dense q-rows), since the
    products used here only populate a thin band of z-degrees per q-degree.
    """

    __slots__ = ("_rows", "_trunc")

    def __init__(self, rows: Mapping[int, Sequence[int]], trunc: int):
        if trunc < 0:
            raise ValueError("trunc must be >= 0")
        clean: dict[int, tuple[int, ...]] = {}
        for m, row in rows.items():
            if m < 0:
                raise ValueError("negative z-degree")
            r = [int(x) for x in row[: trunc + 1]]
            r.extend([0] * (trunc + 1 - len(r)))
            if any(r):
                clean[m] = tuple(r)
        self._rows = dict(sorted(clean.items()))
        self._trunc = trunc

    @classmethod
    def from_coeffs(cls, coeffs: Mapping[tuple[int, int], int], trunc: int) -> ZQPoly:
        rows: dict[int, list[int]] = {}
        for (m, n), v in coeffs.items():
            if n > trunc:
                continue
            rows.setdefault(m, [0] * (trunc + 1))[n] += v
        return cls(rows, trunc)

    @classmethod
    def one(cls, trunc: int) -> ZQPoly:
        return cls({0: [1]}, trunc)

    @property
    def trunc(self) -> int:
        return self._trunc

    @property
    def max_z(self) -> int:
        return max(self._rows, default=0)

    def row(self, m: int) -> QPoly:
        return QPoly(self._rows.get(m, ()), self._trunc)

    def rows(self) -> dict[int, tuple[int, ...]]:
        return dict(self._rows)

    def coeff(self, m: int, n: int) -> int:
        if n < 0 or n > self._trunc:
            raise IndexError(f"q-degree {n} outside 0..{self._trunc}")
        r = self._rows.get(m)
        return r[n] if r else 0

    def __getitem__(self, mn: tuple[int, int]) -> int:
        return self.coeff(*mn)

    def items(self):
        """Nonzero coefficients as ((m, n), value), ordered by (m, n)."""
        for m, r in self._rows.items():
            for n, v in enumerate(r):
                if v:
                    yield (m, n), v

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ZQPoly):
            return self._trunc == other._trunc and self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._trunc, tuple(self._rows.items())))

    def __repr__(self) -> str:
        return f"ZQPoly(terms={len(list(self.items()))}, trunc={self._trunc})"

    def __str__(self) -> str:
        return format_series(dict(self.items()), with_z=True)

    def _binop(self, other: ZQPoly, sign: int) -> ZQPoly:
        t = min(self._trunc, other._trunc)
        rows: dict[int, list[int]] = {}
        for m, r in self._rows.items():
            rows[m] = list(r[: t + 1])
        for m, r in other._rows.items():
            acc = rows.setdefault(m, [0] * (t + 1))
            for n in range(t + 1):
                acc[n] += sign * r[n]
        return ZQPoly(rows, t)

    def __add__(self, other: ZQPoly) -> ZQPoly:
        if not isinstance(other, ZQPoly):
            return NotImplemented
        return self._binop(other, 1)

    def __sub__(self, other: ZQPoly) -> ZQPoly:
        if not isinstance(other, ZQPoly):
            return NotImplemented
        return self._binop(other, -1)

    def __neg__(self) -> ZQPoly:
        return ZQPoly({m: [-x for x in r] for m, r in self._rows.items()}, self._trunc)

    def __mul__(self, other: ZQPoly | QPoly) -> ZQPoly:
        if isinstance(other, QPoly):
            return ZQPoly({m: (QPoly(r, self._trunc) * other).coeffs for m, r in self._rows.items()},
                          min(self._trunc, other.trunc))
        if not isinstance(other, ZQPoly):
            return NotImplemented
        t = min(self._trunc, other._trunc)
        out: dict[int, QPoly] = {}
        for m1, r1 in self._rows.items():
            p1 = QPoly(r1, t)
            for m2, r2 in other._rows.items():
                prod = p1 * QPoly(r2, t)
                out[m1 + m2] = out[m1 + m2] + prod if m1 + m2 in out else prod
        return ZQPoly({m: p.coeffs for m, p in out.items()}, t)

    def to_dict(self) -> dict:
        return {"trunc": self._trunc, "coeffs": [[m, n, v] for (m, n), v in self.items()]}


def format_series(terms: Mapping[tuple[int, int], int], with_z: bool) -> str:
    """Human-readable rendering, e.g. ``1 + q - 2z^2q^4``."""
    parts = []
    for (m, n), v in sorted(terms.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if not v:
            continue
        mono = ""
        if with_z and m:
            mono += "z" if m == 1 else f"z^{m}"
        if n:
            mono += "q" if n == 1 else f"q^{n}"
        mag = abs(v)
        body = str(mag) if (mag != 1 or not mono) else ""
        body += mono
        if not parts:
            parts.append(body if v > 0 else "-" + body)
        else:
            parts.append(("+ " if v > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


# --------------------------------------------------------------------------
# product specifications


@dataclass(frozen=True)
class Factor:
    """A Pochhammer argument ``z^[z] q^shift`` stepped by q^M.

    ``sign=+1`` contributes ``1/(1 - x)``; ``sign=-1`` contributes ``(1 + x)``.
    """

    shift: int
    z: bool = False
    sign: int = 1

    def __post_init__(self):
        if self.shift <= 0:
            raise ValueError(f"shift must be positive, got {self.shift}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class Extra:
    """A single standalone factor at a fixed exponent."""

    exponent: int
    z: bool = False
    sign: int = 1

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError(f"exponent must be positive, got {self.exponent}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class ProductSpec:
    modulus: int
    length: int | None  # None means infinite
    factors: tuple[Factor, ...] = ()
    extras: tuple[Extra, ...] = ()

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if self.length is not None and self.length < 0:
            raise ValueError("length must be >= 0 or infinite")
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "extras", tuple(self.extras))

    @classmethod
    def reciprocal(cls, shifts: Iterable[int], modulus: int, length: int | None, z: bool = False) -> ProductSpec:
        """``1/(q^s1, q^s2, ...; q^M)_L``."""
        return cls(modulus, length, tuple(Factor(s, z, 1) for s in shifts))

    @classmethod
    def distinct(cls, shifts: Iterable[int], modulus: int, length: int | None, z: bool = False) -> ProductSpec:
        """``(-q^s1, -q^s2, ...; q^M)_L``."""
        return cls(modulus, length, tuple(Factor(s, z, -1) for s in shifts))

    @property
    def bivariate(self) -> bool:
        return any(f.z for f in self.factors) or any(e.z for e in self.extras)

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "length": "inf" if self.length is None else self.length,
            "factors": [{"shift": f.shift, "z": f.z, "sign": f.sign} for f in self.factors],
            "extras": [{"exponent": e.exponent, "z": e.z, "sign": e.sign} for e in self.extras],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> ProductSpec:
        length = d.get("length", "inf")
        if length == "inf":
            length = None
        elif not isinstance(length, int) or isinstance(length, bool):
            raise ValueError(f"length must be an integer or 'inf', got {length!r}")
        return cls(
            int(d["modulus"]),
            length,
            tuple(Factor(int(f["shift"]), bool(f.get("z", False)), int(f.get("sign", 1)))
                  for f in d.get("factors", ())),
            tuple(Extra(int(e["exponent"]), bool(e.get("z", False)), int(e.get("sign", 1)))
                  for e in d.get("extras", ())),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> ProductSpec:
        return cls.from_dict(json.loads(text))


Generator = tuple  # (exponent, z, sign)


def generators(spec: ProductSpec, N: int) -> list[tuple[int, bool, int]]:
    """All (exponent, z, sign) generators of ``spec`` with exponent <= N."""
    out = []
    M = spec.modulus
    for f in spec.factors:
        if f.shift > N:
            continue
        top = (N - f.shift) // M + 1  # effective length for an infinite product
        count = top if spec.length is None else min(spec.length, top)
        out.extend((f.shift + j * M, f.z, f.sign) for j in range(count))
    out.extend((e.exponent, e.z, e.sign) for e in spec.extras if e.exponent <= N)
    return out


def _apply_q(c: list[int], e: int, sign: int) -> None:
    # in place: c <- c/(1-q^e) if sign>0 else c*(1+q^e)
    t = len(c) - 1
    if sign > 0:
        for n in range(e, t + 1):
            c[n] += c[n - e]
    else:
        for n in range(t, e - 1, -1):
            c[n] += c[n - e]


def _apply_zq(rows: dict[int, list[int]], e: int, sign: int, t: int) -> None:
    # in place on a bivariate table: rows <- rows/(1-zq^e) or rows*(1+zq^e)
    if sign > 0:
        top = max(rows) + t // e
        for m in range(1, top + 1):
            prev = rows.get(m - 1)
            if prev is None or not any(prev[: t + 1 - e]):
                continue
            cur = rows.setdefault(m, [0] * (t + 1))
            for n in range(e, t + 1):
                cur[n] += prev[n - e]
    else:
        for m in sorted(rows, reverse=True):
            src = rows[m]
            if not any(src[: t + 1 - e]):
                continue
            dst = rows.setdefault(m + 1, [0] * (t + 1))
            for n in range(t, e - 1, -1):
                dst[n] += src[n - e]


def expand_generators(gens: Iterable[tuple[int, bool, int]], N: int, bivariate: bool = False) -> QPoly | ZQPoly:
    gens = list(gens)
    if not bivariate and not any(z for _, z, _ in gens):
        c = [0] * (N + 1)
        c[0] = 1
        for e, _, s in gens:
            if e <= N:
                _apply_q(c, e, s)
        return QPoly(c, N)
    rows: dict[int, list[int]] = {0: [1] + [0] * N}
    for e, z, s in gens:
        if e > N:
            continue
        if z:
            _apply_zq(rows, e, s, N)
        else:
            for r in rows.values():
                _apply_q(r, e, s)
    return ZQPoly(rows, N)


def expand(spec: ProductSpec, N: int) -> QPoly | ZQPoly:
    """Exact expansion of ``spec`` to q-degree N.

    Returns a ZQPoly exactly when some factor or extra carries z.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    return expand_generators(generators(spec, N), N, spec.bivariate)


def pochhammer(exponents: Iterable[int], N: int) -> QPoly:
    """The finite polynomial ``prod (1 - q^e)`` truncated at N."""
    c = [0] * (N + 1)
    c[0] = 1
    for e in exponents:
        if e <= 0:
            raise ValueError("exponents must be positive")
        if e > N:
            continue
        for n in range(N, e - 1, -1):
            c[n] -= c[n - e]
    return QPoly(c, N)


def first_negative(f: QPoly | ZQPoly) -> tuple[int | None, int, int] | None:
    """Least (n, m) with a negative coefficient, as ``(m, n, value)``.

    ``m`` is None for a univariate series.  Returns None when f is nonnegative.
    """
    if isinstance(f, QPoly):
        for n, v in enumerate(f.coeffs):
            if v < 0:
                return (None, n, v)
        return None
    best = None
    for (m, n), v in f.items():
        if v < 0 and (best is None or (n, m) < (best[1], best[0])):
            best = (m, n, v)
    return best


def rr_sum_side(variant: int, N: int) -> QPoly:
    """``sum_n q^(n^2) / (q;q)_n`` (variant 1) or with ``q^(n^2+n)`` (variant 2)."""
    if variant not in (1, 2):
        raise ValueError("variant must be 1 or 2")
    if N < 0:
        raise ValueError("N must be >= 0")
    total = [0] * (N + 1)
    inv = [0] * (N + 1)  # running 1/(q;q)_n
    inv[0] = 1
    n = 0
    while True:
        lead = n * n + (n if variant == 2 else 0)
        if lead > N:
            break
        if n > 0:
            _apply_q(inv, n, 1)
        for i in range(N + 1 - lead):
            total[lead + i] += inv[i]
        n += 1
    return QPoly(total, N)
