"""Exact coefficient fields: GF(p^e) and rational function fields over them.

Finite field elements are integers 0..q-1 read as base-p digit vectors, i.e.
polynomials in a generator w modulo the lexicographically least monic
irreducible of degree e, which makes element order and labels deterministic.
Rational function field elements are reduced fractions of coefficient tuples
with monic denominator.  Both fields expose the same duck-typed surface
(add/mul/inv/pth_root/label), which is all the series layer needs.
"""

from __future__ import annotations

from typing import Sequence


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- polynomials over Z/p as little-endian int tuples -----------------------


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _strip(out)


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        k = len(a) - 1 - dm
        factor = (a[-1] * inv_lead) % p
        for i, c in enumerate(m):
            a[k + i] = (a[k + i] - factor * c) % p
        while a and a[-1] == 0:
            a.pop()
    return _strip(a)


def _irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree e over Z/p."""
    if e == 1:
        return (0, 1)
    for code in range(p**e):
        coeffs = []
        c = code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        cand = tuple(coeffs) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")


def _is_irreducible(f, p):
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for code in range(p**d):
            coeffs = []
            c = code
            for _ in range(d):
                coeffs.append(c % p)
                c //= p
            g = tuple(coeffs) + (1,)
            if _pmod(f, g, p) == ():
                return False
    return True


class FiniteField:
    """GF(p^e) with exact table-backed arithmetic on integer-coded elements."""

    def __init__(self, p: int, e: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        if e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e}")
        self.p = p
        self.e = e
        self.q = p**e
        self.char = p
        self.modulus = _irreducible(p, e)
        self.zero = 0
        self.one = 1
        self._mul = None
        self._inv = None

    # -- encoding ------------------------------------------------------------

    def _digits(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            out.append(x % self.p)
            x //= self.p
        return tuple(out)

    def _encode(self, digits: Sequence[int]) -> int:
        x = 0
        for d in reversed(list(digits)[: self.e]):
            x = x * self.p + (d % self.p)
        return x

    def elements(self) -> range:
        return range(self.q)

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        return self._encode([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self._encode([(-x) % self.p for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul is None:
            self._build_tables()
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self._inv is None:
            self._build_tables()
        return self._inv[a]

    def _raw_mul(self, a: int, b: int) -> int:
        prod = _pmul(_strip(self._digits(a)), _strip(self._digits(b)), self.p)
        red = _pmod(prod, self.modulus, self.p) if len(prod) >= self.e + 1 else prod
        return self._encode(list(red) + [0] * self.e)

    def _build_tables(self) -> None:
        q = self.q
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                v = self._raw_mul(a, b)
                mul[a][b] = v
                mul[b][a] = v
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        self._mul = [tuple(row) for row in mul]
        self._inv = tuple(inv)

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc, base = 1, a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    def pth_root(self, a: int) -> int:
        """The unique p-th root (Frobenius is bijective on a finite field)."""
        return self.pow(a, self.p ** (self.e - 1))

    def in_subfield(self, a: int, degree: int) -> bool:
        """Membership in the subfield GF(p^degree); degree must divide e."""
        if self.e % degree != 0:
            raise ValueError(f"GF({self.p}^{degree}) is not a subfield of GF({self.p}^{self.e})")
        return self.pow(a, self.p**degree) == a

    def generator(self) -> int:
        """Least multiplicative generator."""
        for a in range(2, self.q):
            x, k = a, 1
            while x != 1:
                x = self.mul(x, a)
                k += 1
            if k == self.q - 1:
                return a
        return 1

    def label(self, a: int) -> str:
        if self.e == 1:
            return str(a)
        digits = self._digits(a)
        parts = []
        for i in range(self.e - 1, -1, -1):
            c = digits[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                parts.append(f"{head}w^{i}" if i > 1 else f"{head}w")
        return "+".join(parts) if parts else "0"

    def parse(self, text: str | int) -> int:
        """Accept an element index, or '0', '1', 'w' for convenience."""
        if isinstance(text, int):
            a = text
        elif text.strip().lstrip("-").isdigit():
            a = int(text)
        elif text.strip() == "w":
            a = self.p
        else:
            raise ValueError(f"cannot parse field element {text!r}")
        if not 0 <= a < self.q:
            raise ValueError(f"element index {a} out of range for GF({self.q})")
        return a

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash(("FiniteField", self.p, self.e))

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"


# -- polynomials over a FiniteField as little-endian tuples ------------------


def poly_strip(field, coeffs) -> tuple:
    c = list(coeffs)
    while c and c[-1] == field.zero:
        c.pop()
    return tuple(c)


def poly_add(field, a, b) -> tuple:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else field.zero
        y = b[i] if i < len(b) else field.zero
        out.append(field.add(x, y))
    return poly_strip(field, out)


def poly_neg(field, a) -> tuple:
    return tuple(field.neg(x) for x in a)


def poly_mul(field, a, b) -> tuple:
    if not a or not b:
        return ()
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == field.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return poly_strip(field, out)


def poly_divmod(field, a, b) -> tuple[tuple, tuple]:
    b = poly_strip(field, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_strip(field, a))
    q = [field.zero] * max(len(rem) - len(b) + 1, 0)
    inv_lead = field.inv(b[-1])
    while len(rem) >= len(b):
        factor = field.mul(rem[-1], inv_lead)
        k = len(rem) - len(b)
        q[k] = factor
        for i, c in enumerate(b):
            rem[k + i] = field.sub(rem[k + i], field.mul(factor, c))
        while rem and rem[-1] == field.zero:
            rem.pop()
    return poly_strip(field, q), tuple(rem)


def poly_gcd(field, a, b) -> tuple:
    a, b = poly_strip(field, a), poly_strip(field, b)
    while b:
        _, r = poly_divmod(field, a, b)
        a, b = b, r
    if a:
        lead_inv = field.inv(a[-1])
        a = tuple(field.mul(lead_inv, c) for c in a)
    return a


def poly_label(field, coeffs, var: str = "s") -> str:
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == field.zero:
            continue
        cl = field.label(c)
        if i == 0:
            parts.append(cl)
        else:
            head = "" if cl == "1" else f"{cl}*"
            parts.append(f"{head}{var}^{i}" if i > 1 else f"{head}{var}")
    return "+".join(parts)


class RationalFunctionField:
    """F_q(s): reduced fractions (num, den) with monic denominator."""

    def __init__(self, base: FiniteField, var: str = "s"):
        self.base = base
        self.var = var
        self.char = base.p
        self.zero = ((), (base.one,))
        self.one = ((base.one,), (base.one,))

    def make(self, num, den=None):
        den = den if den is not None else (self.base.one,)
        num = poly_strip(self.base, num)
        den = poly_strip(self.base, den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(self.base, num, den)
        if g and g != (self.base.one,):
            num, _ = poly_divmod(self.base, num, g)
            den, _ = poly_divmod(self.base, den, g)
        lead = den[-1]
        if lead != self.base.one:
            inv = self.base.inv(lead)
            num = tuple(self.base.mul(inv, c) for c in num)
            den = tuple(self.base.mul(inv, c) for c in den)
        return (num, den)

    def s(self):
        return ((self.base.zero, self.base.one), (self.base.one,))

    def constant(self, c):
        return self.make((c,))

    def add(self, a, b):
        (na, da), (nb, db) = a, b
        num = poly_add(
            self.base, poly_mul(self.base, na, db), poly_mul(self.base, nb, da)
        )
        return self.make(num, poly_mul(self.base, da, db))

    def neg(self, a):
        return (poly_neg(self.base, a[0]), a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return self.make(poly_mul(self.base, a[0], b[0]), poly_mul(self.base, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError("inverse of 0")
        return self.make(a[1], a[0])

    def pth_root(self, a):
        """The p-th root if one exists, else None (the field is imperfect)."""
        num, den = a
        if not num:
            return self.zero
        root_parts = []
        for part in (num, den):
            root = [self.base.zero] * ((len(part) - 1) // self.char + 1)
            for i, c in enumerate(part):
                if c == self.base.zero:
                    continue
                if i % self.char != 0:
                    return None
                root[i // self.char] = self.base.pth_root(c)
            root_parts.append(poly_strip(self.base, root))
        return self.make(root_parts[0], root_parts[1])

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc = self.one
        for _ in range(n):
            acc = self.mul(acc, a)
        return acc

    def is_constant(self, a) -> bool:
        return len(a[0]) <= 1 and len(a[1]) <= 1

    def label(self, a) -> str:
        num, den = a
        ns = poly_label(self.base, num, self.var)
        if den == (self.base.one,):
            return ns
        return f"({ns})/({poly_label(self.base, den, self.var)})"

    def parse(self, spec):
        """Accept 's', an integer constant, or {'num': [...], 'den': [...]}."""
        if isinstance(spec, str) and spec.strip() == self.var:
            return self.s()
        if isinstance(spec, int):
            return self.constant(self.base.parse(spec))
        if isinstance(spec, str) and spec.strip().isdigit():
            return self.constant(self.base.parse(spec))
        if isinstance(spec, dict):
            num = tuple(self.base.parse(c) for c in spec.get("num", []))
            den = tuple(self.base.parse(c) for c in spec.get("den", [self.base.one]))
            return self.make(num, den)
        raise ValueError(f"cannot parse rational function {spec!r}")

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunctionField)
            and self.base == other.base
            and self.var == other.var
        )

    def __hash__(self):
        return hash(("RationalFunctionField", self.base, self.var))

    def __repr__(self):
        return f"{self.base!r}({self.var})"
