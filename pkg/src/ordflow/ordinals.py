"""Exact arithmetic for ordinals below epsilon_0 in Cantor normal form.

An ordinal is a sorted list of (exponent, coefficient) pairs standing for
w^e1*c1 + ... + w^en*cn with exponents strictly decreasing and every
coefficient >= 1.  The empty list is zero.  Values are immutable and
canonical: two ordinals are equal exactly when they are structurally equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key, lru_cache

from .errors import (
    DivisionByZeroOrdinal,
    InvalidCode,
    NotFinite,
    NotSuccessor,
    ParseError,
)

LESS, EQUAL, GREATER = -1, 0, 1


@dataclass(frozen=True, slots=True)
class Ordinal:
    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        for exp, coeff in self.terms:
            if coeff < 1:
                raise ValueError(f"coefficient {coeff} < 1")
        for (e1, _), (e2, _) in zip(self.terms, self.terms[1:]):
            if compare(e1, e2) != GREATER:
                raise ValueError("exponents not strictly decreasing")

    def __bool__(self):
        return bool(self.terms)

    def __lt__(self, other):
        return compare(self, other) == LESS

    def __le__(self, other):
        return compare(self, other) != GREATER

    def __gt__(self, other):
        return compare(self, other) == GREATER

    def __ge__(self, other):
        return compare(self, other) != LESS

    def __repr__(self):
        return f"Ordinal({print_ordinal(self)!r})"

    def __str__(self):
        return print_ordinal(self)


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """Total order on canonical forms: LESS, EQUAL or GREATER.

    Compares term lists position by position, exponent first and then
    coefficient; if one list is a prefix of the other, the shorter is
    smaller.
    """
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c != EQUAL:
            return c
        if ca != cb:
            return LESS if ca < cb else GREATER
    if len(a.terms) == len(b.terms):
        return EQUAL
    return LESS if len(a.terms) < len(b.terms) else GREATER


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal addition: terms of `a` below the head of `b` are absorbed."""
    if not b.terms:
        return a
    if not a.terms:
        return b
    head = b.terms[0][0]
    keep = [t for t in a.terms if compare(t[0], head) == GREATER]
    k = len(keep)
    if k < len(a.terms) and compare(a.terms[k][0], head) == EQUAL:
        merged = (head, a.terms[k][1] + b.terms[0][1])
        return Ordinal(tuple(keep) + (merged,) + b.terms[1:])
    return Ordinal(tuple(keep) + b.terms)


def monus(a: Ordinal, b: Ordinal) -> Ordinal:
    """Left subtraction: zero when a < b, else the unique g with b + g = a."""
    k = 0
    while k < len(a.terms) and k < len(b.terms) and a.terms[k] == b.terms[k]:
        k += 1
    if k == len(a.terms):
        return ZERO  # a is a prefix of b (or a == b), so a <= b
    if k == len(b.terms):
        return Ordinal(a.terms[k:])
    (ea, ca), (eb, cb) = a.terms[k], b.terms[k]
    c = compare(ea, eb)
    if c == LESS:
        return ZERO
    if c == GREATER:
        return Ordinal(a.terms[k:])
    if ca < cb:
        return ZERO
    if ca > cb:
        return Ordinal(((ea, ca - cb),) + a.terms[k + 1:])
    raise AssertionError("unreachable: equal pairs extend the common prefix")


def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal multiplication on canonical forms."""
    if not a.terms or not b.terms:
        return ZERO
    e1, c1 = a.terms[0]
    out: list[tuple[Ordinal, int]] = []
    for eb, cb in b.terms:
        if eb.terms:
            out.append((add(e1, eb), cb))
        else:
            # finite part of b: multiplies the leading coefficient of a and
            # re-attaches the tail of a
            out.append((e1, c1 * cb))
            out.extend(a.terms[1:])
    return Ordinal(tuple(out))


def div_left(a: Ordinal, b: Ordinal) -> Ordinal:
    """Left division: the unique g with b*g <= a and a - b*g < b."""
    if not b.terms:
        raise DivisionByZeroOrdinal("division by the zero ordinal")
    if not a.terms:
        return ZERO
    eb, cb = b.terms[0]
    if compare(a.terms[0][0], eb) == LESS:
        return ZERO
    k = len([t for t in a.terms if compare(t[0], eb) != LESS])
    out = [(monus(a.terms[i][0], eb), a.terms[i][1]) for i in range(k - 1)]
    ek, ck = a.terms[k - 1]
    if compare(ek, eb) == GREATER:
        out.append((monus(ek, eb), ck))
    else:
        q = ck // cb
        # with quotient q at the seam, check whether the remainder of a from
        # the seam onward still covers w^ek*cb*q plus the tail of b
        seam_rest = Ordinal(a.terms[k - 1:])
        covered = Ordinal(((ek, cb * q),)) if q else ZERO
        covered = add(covered, Ordinal(b.terms[1:]))
        if compare(seam_rest, covered) == LESS:
            q -= 1
        if q:
            out.append((ZERO, q))
    return Ordinal(tuple(out))


def omega_pow(a: Ordinal) -> Ordinal:
    """The single-term ordinal w^a."""
    return Ordinal(((a, 1),))


def from_nat(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("naturals only")
    return Ordinal(((ZERO, n),)) if n else ZERO


def to_nat(a: Ordinal) -> int:
    """Inverse of from_nat; defined only below omega."""
    if not a.terms:
        return 0
    if len(a.terms) == 1 and not a.terms[0][0].terms:
        return a.terms[0][1]
    raise NotFinite(f"{a} >= omega")


def is_limit(a: Ordinal) -> bool:
    """Nonzero with no finite part.  Zero is neither limit nor successor."""
    return bool(a.terms) and bool(a.terms[-1][0].terms)


def is_successor(a: Ordinal) -> bool:
    return bool(a.terms) and not a.terms[-1][0].terms


def pred(a: Ordinal) -> Ordinal:
    """Strip one from the finite part of a successor."""
    if not is_successor(a):
        raise NotSuccessor(f"{a} has no predecessor")
    exp, coeff = a.terms[-1]
    if coeff > 1:
        return Ordinal(a.terms[:-1] + ((exp, coeff - 1),))
    return Ordinal(a.terms[:-1])


def succ(a: Ordinal) -> Ordinal:
    return add(a, ONE)


# -- Godel coding ------------------------------------------------------------
#
# An ordinal is coded by a self-delimiting bit string read off a natural
# number (the number's binary form with its leading 1 removed):
#
#   "0"                                     zero
#   "10" gamma(n)                           the finite ordinal n >= 1
#   "11" gamma(#terms) (code(exp) gamma(coeff))*   anything >= omega
#
# where gamma is the Elias gamma code of a positive integer.  The bit string
# has length linear in the number of symbols of the printed form, and decode
# rejects anything that is not the canonical spelling of a canonical form.


def _gamma(n: int) -> str:
    bits = bin(n)[2:]
    return "0" * (len(bits) - 1) + bits


class _BitReader:
    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def take(self, n: int) -> str:
        if self.pos + n > len(self.bits):
            raise InvalidCodeSignal
        out = self.bits[self.pos:self.pos + n]
        self.pos += n
        return out

    def gamma(self) -> int:
        zeros = 0
        while self.take(1) == "0":
            zeros += 1
        rest = self.take(zeros)
        return int("1" + rest, 2)

    def done(self) -> bool:
        return self.pos == len(self.bits)


class InvalidCodeSignal(Exception):
    pass


def _bits_of(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    if len(a.terms) == 1 and not a.terms[0][0].terms:
        return "10" + _gamma(a.terms[0][1])
    out = ["11", _gamma(len(a.terms))]
    for exp, coeff in a.terms:
        out.append(_bits_of(exp))
        out.append(_gamma(coeff))
    return "".join(out)


def _read_ordinal(r: _BitReader) -> Ordinal:
    tag = r.take(1)
    if tag == "0":
        return ZERO
    tag2 = r.take(1)
    if tag2 == "0":
        return Ordinal(((ZERO, r.gamma()),))
    n = r.gamma()
    terms = []
    for _ in range(n):
        exp = _read_ordinal(r)
        terms.append((exp, r.gamma()))
    if len(terms) == 1 and not terms[0][0].terms:
        raise InvalidCodeSignal  # finite ordinals must use the short form
    for (e1, _), (e2, _) in zip(terms, terms[1:]):
        if compare(e1, e2) != GREATER:
            raise InvalidCodeSignal
    return Ordinal(tuple(terms))


@lru_cache(maxsize=None)
def encode(a: Ordinal) -> int:
    return int("1" + _bits_of(a), 2)


@lru_cache(maxsize=None)
def _decode_or_none(code: int):
    if code < 2:
        return None
    bits = bin(code)[3:]  # strip "0b" and the sentinel 1
    r = _BitReader(bits)
    try:
        a = _read_ordinal(r)
    except InvalidCodeSignal:
        return None
    if not r.done():
        return None
    return a


def is_valid_code(code: int) -> bool:
    return code >= 0 and _decode_or_none(code) is not None


def decode(code: int) -> Ordinal:
    a = _decode_or_none(code) if code >= 0 else None
    if a is None:
        raise InvalidCode(f"{code} is not an ordinal code")
    return a


def decode_total(code: int) -> Ordinal:
    """Decode with the zero-ordinal fallback used by the term primitives."""
    a = _decode_or_none(code) if code >= 0 else None
    return ZERO if a is None else a


def valid_codes_upto(bound: int) -> list[int]:
    return [c for c in range(bound + 1) if is_valid_code(c)]


ordinal_sort_key = cmp_to_key(compare)


def ordinals_with_code_upto(bound: int) -> list[Ordinal]:
    """All ordinals whose codes fit below the bound, in increasing order."""
    found = [decode(c) for c in valid_codes_upto(bound)]
    found.sort(key=ordinal_sort_key)
    return found


# -- text form ---------------------------------------------------------------
#
# ordinal := "0" | term ("+" term)*
# term    := nat | "w" | "w" "*" nat | "w^(" ordinal ")" | "w^(" ordinal ")" "*" nat
#
# Whitespace is insignificant.  Printing uses strictly decreasing exponents,
# omits coefficient 1, prints exponent-zero terms as bare decimals and
# exponent-one terms as "w".  Parsing rejects non-decreasing exponents and
# zero coefficients instead of normalizing.


def print_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if not exp.terms:
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        else:
            base = f"w^({print_ordinal(exp)})"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return "+".join(parts)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, lit: str):
        self.skip_ws()
        if not self.text.startswith(lit, self.pos):
            raise ParseError(f"expected {lit!r}", self.pos)
        self.pos += len(lit)

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a number", start)
        digits = self.text[start:self.pos]
        if len(digits) > 1 and digits[0] == "0":
            raise ParseError("leading zero", start)
        return int(digits)

    def term(self) -> tuple[Ordinal, int]:
        self.skip_ws()
        ch = self.peek()
        if ch.isdigit():
            n = self.nat()
            if n == 0:
                raise ParseError("zero term", self.pos)
            return ZERO, n
        if ch != "w":
            raise ParseError("expected a term", self.pos)
        self.pos += 1
        exp = ONE
        if self.peek() == "^":
            self.expect("^")
            self.expect("(")
            exp = self.ordinal()
            self.expect(")")
        coeff = 1
        if self.peek() == "*":
            self.expect("*")
            coeff = self.nat()
            if coeff == 0:
                raise ParseError("zero coefficient", self.pos)
        return exp, coeff

    def ordinal(self) -> Ordinal:
        self.skip_ws()
        if self.peek() == "0":
            mark = self.pos
            self.pos += 1
            if self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos = mark  # a longer numeral such as "05"
                raise ParseError("leading zero", mark)
            return ZERO
        terms = [self.term()]
        while self.peek() == "+":
            self.expect("+")
            terms.append(self.term())
        for (e1, _), (e2, _) in zip(terms, terms[1:]):
            if compare(e1, e2) != GREATER:
                raise ParseError("non-decreasing exponents", self.pos)
        return Ordinal(tuple(terms))


def parse_ordinal(text: str) -> Ordinal:
    p = _Parser(text)
    a = p.ordinal()
    p.skip_ws()
    if p.pos != len(text):
        raise ParseError("trailing input", p.pos)
    return a
