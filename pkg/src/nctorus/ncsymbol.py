"""Exact algebra of noncommutative symbols.

A term is ``coeff * (pi^2)^p * xi^alpha |xi|^(2m) * w`` where ``w`` is a word
in the atoms ``e^{+-h}``, ``delta^alpha(e^{+-h})`` and ``delta^alpha(h)``.
The xi-part is central, so it is kept apart from the word; words never
commute.  Values are immutable and normalised on construction:
like terms are merged, zero terms dropped and adjacent ``e^h e^{-h}`` pairs
cancelled.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

DIM = 4
ZERO_INDEX = (0, 0, 0, 0)

# atom kinds, in canonical sort order
EXP_H = 0
DELTA_EXP_H = 1
DELTA_H = 2
_KIND_NAMES = {EXP_H: "exp_h", DELTA_EXP_H: "delta_exp_h", DELTA_H: "delta_h"}
_KIND_CODES = {v: k for k, v in _KIND_NAMES.items()}


def unit(i: int) -> tuple:
    """Multi-index ``e_i`` for a direction ``i`` in 1..4."""
    if not 1 <= i <= DIM:
        raise ValueError(f"direction must be in 1..{DIM}, got {i}")
    return tuple(1 if k == i - 1 else 0 for k in range(DIM))


def index_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def order(alpha: tuple) -> int:
    return sum(alpha)


def factorial(alpha: tuple) -> int:
    return math.prod(math.factorial(x) for x in alpha)


def multi_indices(total: int, dim: int = DIM):
    """All exponent tuples of length ``dim`` summing to ``total``."""
    if dim == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in multi_indices(total - first, dim - 1):
            yield (first,) + rest


@dataclass(frozen=True, order=True)
class Atom:
    kind: int
    index: tuple = ZERO_INDEX
    sign: int = 1

    def __post_init__(self):
        if len(self.index) != DIM or any(x < 0 for x in self.index):
            raise ValueError(f"bad multi-index {self.index}")
        if self.kind == DELTA_H:
            if order(self.index) == 0:
                raise ValueError("delta^0(h) is not an atom")
            if self.sign != 0:
                object.__setattr__(self, "sign", 0)
        elif self.kind == DELTA_EXP_H:
            if order(self.index) == 0:
                object.__setattr__(self, "kind", EXP_H)
        if self.kind != DELTA_H and self.sign not in (1, -1):
            raise ValueError("exponential atoms carry sign +1 or -1")

    def derive(self, i: int) -> "Atom":
        if self.kind == DELTA_H:
            return Atom(DELTA_H, index_add(self.index, unit(i)))
        return Atom(DELTA_EXP_H, index_add(self.index, unit(i)), self.sign)

    def latex(self) -> str:
        if self.kind == EXP_H:
            return "e^{h}" if self.sign > 0 else "e^{-h}"
        ops = "".join(
            f"\\delta_{k + 1}" + (f"^{{{e}}}" if e > 1 else "") for k, e in enumerate(self.index) if e
        )
        inner = "h" if self.kind == DELTA_H else ("e^{h}" if self.sign > 0 else "e^{-h}")
        return f"{ops}({inner})"

    def to_json(self) -> dict:
        rec = {"kind": _KIND_NAMES[self.kind]}
        if self.kind != EXP_H:
            rec["index"] = list(self.index)
        if self.kind != DELTA_H:
            rec["sign"] = self.sign
        return rec

    @classmethod
    def from_json(cls, rec: dict) -> "Atom":
        kind = _KIND_CODES[rec["kind"]]
        return cls(kind, tuple(rec.get("index", ZERO_INDEX)), rec.get("sign", 0 if kind == DELTA_H else 1))

    def __repr__(self):
        return self.latex()


def exp_h(sign: int = 1) -> Atom:
    return Atom(EXP_H, ZERO_INDEX, sign)


def delta_exp_h(index, sign: int = 1) -> Atom:
    return Atom(DELTA_EXP_H, tuple(index), sign)


def delta_h(index) -> Atom:
    return Atom(DELTA_H, tuple(index), 0)


E_PLUS = exp_h(1)
E_MINUS = exp_h(-1)


def normalize_word(word: Iterable[Atom]) -> tuple:
    """Cancel adjacent ``e^h e^{-h}`` and ``e^{-h} e^h`` pairs."""
    out: list[Atom] = []
    for a in word:
        if out and a.kind == EXP_H and out[-1].kind == EXP_H and out[-1].sign == -a.sign:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


class XiPart(NamedTuple):
    """``xi^mono * |xi|^(2*radial)``."""

    mono: tuple = ZERO_INDEX
    radial: int = 0

    @property
    def degree(self) -> int:
        return sum(self.mono) + 2 * self.radial

    def latex(self) -> str:
        parts = []
        for k, e in enumerate(self.mono):
            if e:
                parts.append(f"\\xi_{k + 1}" + (f"^{{{e}}}" if e > 1 else ""))
        if self.radial:
            parts.append(f"|\\xi|^{{{2 * self.radial}}}")
        return "".join(parts)


ONE_XI = XiPart()


class Term(NamedTuple):
    coeff: Fraction
    pi2: int
    xi: XiPart
    word: tuple


def _coeff_latex(c: Fraction, pi2: int) -> str:
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if a.denominator == 1:
        body = "" if (a == 1 and pi2) else str(a.numerator)
    else:
        body = f"\\frac{{{a.numerator}}}{{{a.denominator}}}"
    if pi2:
        body += "\\pi^{2}" if pi2 == 1 else f"\\pi^{{{2 * pi2}}}"
    return sign, body


class SymbolExpr:
    """Immutable normalised sum of terms."""

    __slots__ = ("_items", "_hash")

    def __init__(self, data: dict | None = None):
        # data: (xi, word, pi2) -> Fraction
        items = []
        for key, c in (data or {}).items():
            if c != 0:
                items.append((key, Fraction(c)))
        items.sort(key=lambda kv: kv[0])
        self._items = tuple(items)
        self._hash = None

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Iterable[Term]) -> "SymbolExpr":
        acc: dict = {}
        for c, p, xi, word in terms:
            if p not in (0, 1):
                raise ValueError("coefficients carry at most one factor of pi^2")
            key = (XiPart(*xi), normalize_word(word), p)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        return cls(acc)

    @classmethod
    def monomial(cls, coeff=1, word=(), mono=ZERO_INDEX, radial=0, pi2=0) -> "SymbolExpr":
        return cls.from_terms([Term(Fraction(coeff), pi2, XiPart(tuple(mono), radial), tuple(word))])

    @classmethod
    def one(cls) -> "SymbolExpr":
        return cls.monomial(1)

    @classmethod
    def zero(cls) -> "SymbolExpr":
        return cls()

    # -- access ---------------------------------------------------------------
    @property
    def terms(self) -> tuple:
        return tuple(Term(c, p, xi, word) for (xi, word, p), c in self._items)

    def items(self):
        return self._items

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        return bool(self._items)

    def __eq__(self, other):
        if not isinstance(other, SymbolExpr):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __repr__(self):
        return f"SymbolExpr({self.latex()})"

    # -- algebra --------------------------------------------------------------
    def __add__(self, other: "SymbolExpr") -> "SymbolExpr":
        acc = dict(self._items)
        for key, c in other._items:
            acc[key] = acc.get(key, Fraction(0)) + c
        return SymbolExpr(acc)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SymbolExpr":
        c = Fraction(c)
        return SymbolExpr({key: v * c for key, v in self._items})

    def __mul__(self, other):
        if isinstance(other, SymbolExpr):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    # -- grading --------------------------------------------------------------
    def degrees(self) -> set:
        return {xi.degree for (xi, _, _), _ in self._items}

    def is_xi_free(self) -> bool:
        return all(xi == ONE_XI for (xi, _, _), _ in self._items)

    def latex(self) -> str:
        if not self._items:
            return "0"
        out = []
        for (xi, word, p), c in self._items:
            sign, body = _coeff_latex(c, p)
            factors = xi.latex() + "".join(a.latex() for a in word)
            if not factors and not body:
                body = "1"
            out.append(f"{sign}{body}{factors}")
        text = " ".join(out)
        return text[1:] if text.startswith("+") else text

    # -- serialisation --------------------------------------------------------
    def to_json(self) -> list:
        return [
            {
                "coeff": {"num": c.numerator, "den": c.denominator, "pi2": bool(p)},
                "xi": {"mono": list(xi.mono), "radial": xi.radial},
                "word": [a.to_json() for a in word],
            }
            for (xi, word, p), c in self._items
        ]

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, data: list) -> "SymbolExpr":
        return cls.from_terms(
            Term(
                Fraction(rec["coeff"]["num"], rec["coeff"]["den"]),
                int(bool(rec["coeff"]["pi2"])),
                XiPart(tuple(rec["xi"]["mono"]), rec["xi"]["radial"]),
                tuple(Atom.from_json(a) for a in rec["word"]),
            )
            for rec in data
        )


def normalize(x: SymbolExpr) -> SymbolExpr:
    """Re-run normalisation; the identity on well-formed values."""
    return SymbolExpr.from_terms(x.terms)


def add(a: SymbolExpr, b: SymbolExpr) -> SymbolExpr:
    return a + b


def mul(a: SymbolExpr, b: SymbolExpr) -> SymbolExpr:
    """Pointwise product: words concatenate, xi-parts multiply."""
    acc: dict = {}
    for (xa, wa, pa), ca in a._items:
        for (xb, wb, pb), cb in b._items:
            p = pa + pb
            if p > 1:
                raise ValueError("product would carry pi^4")
            xi = XiPart(index_add(xa.mono, xb.mono), xa.radial + xb.radial)
            key = (xi, normalize_word(wa + wb), p)
            acc[key] = acc.get(key, Fraction(0)) + ca * cb
    return SymbolExpr(acc)


def delta_derive(a: SymbolExpr, i: int) -> SymbolExpr:
    """Apply the derivation ``delta_i`` by the Leibniz rule."""
    unit(i)
    acc: dict = {}
    for (xi, word, p), c in a._items:
        for pos, atom in enumerate(word):
            new = word[:pos] + (atom.derive(i),) + word[pos + 1 :]
            key = (xi, normalize_word(new), p)
            acc[key] = acc.get(key, Fraction(0)) + c
    return SymbolExpr(acc)


def xi_derive(a: SymbolExpr, i: int) -> SymbolExpr:
    """Partial derivative in ``xi_i``; words are untouched."""
    e = unit(i)
    k = i - 1
    acc: dict = {}
    for (xi, word, p), c in a._items:
        mono, m = xi.mono, xi.radial
        if mono[k]:
            key = (XiPart(tuple(x - y for x, y in zip(mono, e)), m), word, p)
            acc[key] = acc.get(key, Fraction(0)) + c * mono[k]
        if m:
            key = (XiPart(index_add(mono, e), m - 1), word, p)
            acc[key] = acc.get(key, Fraction(0)) + c * 2 * m
    return SymbolExpr(acc)


def delta_multi(a: SymbolExpr, alpha: tuple) -> SymbolExpr:
    """``delta^alpha = delta_1^a1 ... delta_4^a4`` (delta_4 applied first)."""
    for k in range(DIM - 1, -1, -1):
        for _ in range(alpha[k]):
            a = delta_derive(a, k + 1)
    return a


def xi_multi(a: SymbolExpr, alpha: tuple) -> SymbolExpr:
    for k in range(DIM):
        for _ in range(alpha[k]):
            a = xi_derive(a, k + 1)
    return a


INHOMOGENEOUS = "inhomogeneous"


def degree(a: SymbolExpr):
    """Common xi-degree of all terms, or ``"inhomogeneous"``.

    The zero symbol is reported as inhomogeneous as well, since it has no
    terms to fix a degree.
    """
    degs = a.degrees()
    if len(degs) == 1:
        return next(iter(degs))
    return INHOMOGENEOUS
