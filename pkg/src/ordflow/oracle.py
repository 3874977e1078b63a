"""Independent brute-force ordinal arithmetic on triples below w^3.

A triple (a, b, c) stands for w^2*a + w*b + c.  The operations here are
written against the textbook recursive definitions on triples, deliberately
not against the normal-form case analysis used by the main arithmetic, so
that agreement between the two is a genuine cross-check.
"""

from __future__ import annotations

from .errors import DivisionByZeroOrdinal, TooLarge
from .ordinals import ONE, ZERO, Ordinal, from_nat, omega_pow

SmallOrdinal = tuple[int, int, int]

SMALL_ZERO: SmallOrdinal = (0, 0, 0)


def oracle_cmp(x: SmallOrdinal, y: SmallOrdinal) -> int:
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


def oracle_add(x: SmallOrdinal, y: SmallOrdinal) -> SmallOrdinal:
    a1, b1, c1 = x
    a2, b2, c2 = y
    if a2 > 0:
        return (a1 + a2, b2, c2)
    if b2 > 0:
        return (a1, b1 + b2, c2)
    return (a1, b1, c1 + c2)


def oracle_monus(x: SmallOrdinal, y: SmallOrdinal) -> SmallOrdinal:
    if x < y:
        return SMALL_ZERO
    a1, b1, c1 = x
    a2, b2, c2 = y
    if a1 > a2:
        return (a1 - a2, b1, c1)
    if b1 > b2:
        return (0, b1 - b2, c1)
    return (0, 0, c1 - c2)


def oracle_mul(x: SmallOrdinal, y: SmallOrdinal) -> SmallOrdinal:
    """Multiplication by splitting the right factor into w^2, w and finite
    parts; raises TooLarge when the true product reaches w^3."""
    if x == SMALL_ZERO or y == SMALL_ZERO:
        return SMALL_ZERO
    a1, b1, c1 = x
    a2, b2, c2 = y
    acc = SMALL_ZERO
    if a2 > 0:
        # x * w^2: w^(deg(x)+2), out of range unless x is finite
        if a1 > 0 or b1 > 0:
            raise TooLarge("product reaches w^3")
        acc = oracle_add(acc, (a2, 0, 0))
    if b2 > 0:
        # x * w = w^(deg(x)+1)
        if a1 > 0:
            raise TooLarge("product reaches w^3")
        part = (b2, 0, 0) if b1 > 0 else (0, b2, 0)
        acc = oracle_add(acc, part)
    if c2 > 0:
        # x * n repeats x, absorbing all but the last copy's low parts
        if a1 > 0:
            part = (a1 * c2, b1, c1)
        elif b1 > 0:
            part = (0, b1 * c2, c1)
        else:
            part = (0, 0, c1 * c2)
        acc = oracle_add(acc, part)
    return acc


def oracle_div(x: SmallOrdinal, y: SmallOrdinal) -> SmallOrdinal:
    """Left division by exhaustive search for the unique quotient."""
    if y == SMALL_ZERO:
        raise DivisionByZeroOrdinal("division by zero triple")
    limit = max(max(x), 1) + 1
    for a in range(limit):
        for b in range(limit):
            for c in range(limit):
                g = (a, b, c)
                try:
                    prod = oracle_mul(y, g)
                except TooLarge:
                    continue
                if prod <= x and oracle_monus(x, prod) < y:
                    return g
    raise AssertionError(f"no quotient found for {x} / {y}")


OMEGA_SQ = omega_pow(from_nat(2))


def embed(s: SmallOrdinal) -> Ordinal:
    a, b, c = s
    terms = []
    if a:
        terms.append((from_nat(2), a))
    if b:
        terms.append((ONE, b))
    if c:
        terms.append((ZERO, c))
    return Ordinal(tuple(terms))


def restrict(x: Ordinal) -> SmallOrdinal:
    a = b = c = 0
    for exp, coeff in x.terms:
        if exp == ZERO:
            c = coeff
        elif exp == ONE:
            b = coeff
        elif exp == from_nat(2):
            a = coeff
        else:
            raise TooLarge(f"{x} is not below w^3")
    return (a, b, c)


def all_triples(max_coeff: int) -> list[SmallOrdinal]:
    rng = range(max_coeff + 1)
    return [(a, b, c) for a in rng for b in rng for c in rng]
