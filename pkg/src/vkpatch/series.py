"""Truncated Laurent series over exact coefficient fields.

A series knows its coefficients for every exponent up to its order; an order
of None means the series is exact (a Laurent polynomial: all higher
coefficients are zero).  Operations propagate the exactly attainable
precision and refuse comparisons beyond it, so a verdict can never silently
depend on unknown coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

_INF = float("inf")


class PrecisionError(ArithmeticError):
    """An operation or comparison exceeds the known precision."""


class LaurentSeries:
    """Coefficients from ``valuation`` up to ``order`` (None = exact)."""

    __slots__ = ("field", "var", "valuation", "coeffs", "order")

    def __init__(self, field, coeffs: Mapping[int, object] | None = None, order: int | None = None, var: str = "t"):
        self.field = field
        self.var = var
        items = {int(k): v for k, v in (coeffs or {}).items() if v != field.zero}
        if order is not None:
            for k in items:
                if k > order:
                    raise ValueError(f"coefficient at exponent {k} beyond order {order}")
        if items:
            lo, hi = min(items), max(items)
            self.valuation = lo
            top = hi if order is None else order
            self.coeffs = tuple(items.get(k, field.zero) for k in range(lo, top + 1))
        else:
            self.valuation = 0
            self.coeffs = ()
        self.order = order

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, field, order: int | None = None, var: str = "t") -> "LaurentSeries":
        return cls(field, {}, order=order, var=var)

    @classmethod
    def one(cls, field, var: str = "t") -> "LaurentSeries":
        return cls(field, {0: field.one}, var=var)

    @classmethod
    def t_power(cls, field, k: int, var: str = "t") -> "LaurentSeries":
        return cls(field, {k: field.one}, var=var)

    @classmethod
    def constant(cls, field, c, var: str = "t") -> "LaurentSeries":
        return cls(field, {0: c}, var=var)

    # -- inspection --------------------------------------------------------

    def is_exact(self) -> bool:
        return self.order is None

    def is_exactly_zero(self) -> bool:
        return not self.coeffs and self.order is None

    def is_zero_to_order(self) -> bool:
        return not self.coeffs

    def known_to(self):
        return _INF if self.order is None else self.order

    def _low_bound(self):
        """Least exponent at which the series might be nonzero."""
        if self.coeffs:
            return self.valuation
        return _INF if self.order is None else self.order + 1

    def coefficient(self, exp: int):
        if self.order is not None and exp > self.order:
            raise PrecisionError(
                f"coefficient of {self.var}^{exp} unknown beyond order {self.order}"
            )
        if not self.coeffs or exp < self.valuation or exp > self.valuation + len(self.coeffs) - 1:
            return self.field.zero
        return self.coeffs[exp - self.valuation]

    def terms(self):
        for i, c in enumerate(self.coeffs):
            if c != self.field.zero:
                yield (self.valuation + i, c)

    def support(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.terms())

    def _check_compatible(self, other: "LaurentSeries") -> None:
        if self.field != other.field:
            raise ValueError("coefficient fields differ")
        if self.var != other.var:
            raise ValueError("series variables differ")

    # -- ring operations -----------------------------------------------------

    def add(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check_compatible(other)
        order = _min_order(self.known_to(), other.known_to())
        items: dict[int, object] = {}
        for e, c in list(self.terms()) + list(other.terms()):
            if order is not None and e > order:
                continue
            items[e] = self.field.add(items.get(e, self.field.zero), c)
        return LaurentSeries(self.field, items, order=order, var=self.var)

    def neg(self) -> "LaurentSeries":
        items = {e: self.field.neg(c) for e, c in self.terms()}
        return LaurentSeries(self.field, items, order=self.order, var=self.var)

    def sub(self, other: "LaurentSeries") -> "LaurentSeries":
        return self.add(other.neg())

    def mul(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check_compatible(other)
        order = _min_order(
            self.known_to() + other._low_bound(),
            other.known_to() + self._low_bound(),
        )
        items: dict[int, object] = {}
        for e1, c1 in self.terms():
            for e2, c2 in other.terms():
                e = e1 + e2
                if order is not None and e > order:
                    continue
                items[e] = self.field.add(
                    items.get(e, self.field.zero), self.field.mul(c1, c2)
                )
        return LaurentSeries(self.field, items, order=order, var=self.var)

    def scale(self, c) -> "LaurentSeries":
        items = {e: self.field.mul(c, v) for e, v in self.terms()}
        return LaurentSeries(self.field, items, order=self.order, var=self.var)

    def shift(self, k: int) -> "LaurentSeries":
        items = {e + k: c for e, c in self.terms()}
        order = None if self.order is None else self.order + k
        return LaurentSeries(self.field, items, order=order, var=self.var)

    def pow(self, n: int) -> "LaurentSeries":
        if n < 0:
            raise ValueError("use inverse() for negative powers")
        acc = LaurentSeries.one(self.field, var=self.var)
        for _ in range(n):
            acc = acc.mul(self)
        return acc

    def inverse(self, to_order: int | None = None) -> "LaurentSeries":
        """Multiplicative inverse.

        An exact monomial inverts exactly; otherwise the result is computed
        to the propagated precision, or to ``to_order`` when the input is
        exact (an exact non-monomial has an infinite expansion, so a target
        order is then required).
        """
        if self.is_zero_to_order():
            raise ZeroDivisionError("cannot invert a series that vanishes to its order")
        v = self.valuation
        nonzero = [(e, c) for e, c in self.terms()]
        if len(nonzero) == 1 and self.order is None:
            e, c = nonzero[0]
            result = LaurentSeries(self.field, {-e: self.field.inv(c)}, var=self.var)
            if to_order is not None:
                return result.truncate(to_order)
            return result
        if self.order is None:
            if to_order is None:
                raise PrecisionError(
                    "inverse of an exact non-monomial needs a target order"
                )
            target = to_order
        else:
            target = self.order - 2 * v
            if to_order is not None:
                target = min(target, to_order)
        # unit part u with u_0 != 0: invert by recursion, then shift by -v
        rel = target + v
        if rel < 0:
            return LaurentSeries.zero(self.field, order=target, var=self.var)
        u = {e - v: c for e, c in nonzero}
        u0_inv = self.field.inv(u[0])
        inv_coeffs = {0: u0_inv}
        for k in range(1, rel + 1):
            acc = self.field.zero
            for j in range(1, k + 1):
                uj = u.get(j, self.field.zero)
                if uj == self.field.zero:
                    continue
                acc = self.field.add(acc, self.field.mul(uj, inv_coeffs.get(k - j, self.field.zero)))
            inv_coeffs[k] = self.field.neg(self.field.mul(u0_inv, acc))
        items = {k - v: c for k, c in inv_coeffs.items()}
        return LaurentSeries(self.field, items, order=target, var=self.var)

    def divide(self, other: "LaurentSeries", to_order: int | None = None) -> "LaurentSeries":
        """self / other, exact when the division terminates."""
        self._check_compatible(other)
        if other.is_zero_to_order():
            raise ZeroDivisionError("division by a series that vanishes to its order")
        if self.order is None and other.order is None and to_order is None:
            exact = _exact_divide(self, other)
            if exact is not None:
                return exact
            raise PrecisionError("division does not terminate; pass to_order")
        inv_target = None
        if to_order is not None:
            inv_target = to_order - int(self._low_bound()) if self.coeffs else to_order
        return self.mul(other.inverse(to_order=inv_target)).truncate(to_order)

    def truncate(self, order: int | None) -> "LaurentSeries":
        if order is None:
            return self
        if self.order is not None and self.order < order:
            raise PrecisionError(f"cannot extend precision from {self.order} to {order}")
        items = {e: c for e, c in self.terms() if e <= order}
        return LaurentSeries(self.field, items, order=order, var=self.var)

    def truncate_if_needed(self, order: int) -> "LaurentSeries":
        """Truncate to the given order unless already known less precisely."""
        if self.order is not None and self.order < order:
            return self
        return self.truncate(order)

    # -- comparisons -----------------------------------------------------

    def eq_to_order(self, other: "LaurentSeries", upto: int) -> bool:
        """Exact coefficient agreement for all exponents <= upto."""
        self._check_compatible(other)
        if self.known_to() < upto or other.known_to() < upto:
            raise PrecisionError(f"cannot compare to order {upto}: insufficient precision")
        lo = min(self._low_bound(), other._low_bound())
        if lo == _INF:
            return True
        e = int(lo)
        while e <= upto:
            if self.coefficient(e) != other.coefficient(e):
                return False
            e += 1
        return True

    def equals_exact(self, other: "LaurentSeries") -> bool:
        if self.order is not None or other.order is not None:
            raise PrecisionError("exact comparison needs exact operands")
        return dict(self.terms()) == dict(other.terms())

    def render(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for e, c in self.terms():
                cl = self.field.label(c)
                if e == 0:
                    parts.append(cl)
                else:
                    head = "" if cl == "1" else f"{cl}*"
                    parts.append(f"{head}{self.var}^{e}" if e != 1 else f"{head}{self.var}")
            body = " + ".join(parts)
        if self.order is not None:
            body += f" + O({self.var}^{self.order + 1})"
        return body

    def __repr__(self):
        return f"LaurentSeries({self.render()})"


def _min_order(*orders):
    finite = [o for o in orders if o != _INF]
    return int(min(finite)) if finite else None


def _exact_divide(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries | None:
    """Quotient of Laurent polynomials when the remainder vanishes."""
    f = a.field
    bv = b.valuation if b.coeffs else 0
    av = a.valuation if a.coeffs else 0
    if a.is_exactly_zero():
        return LaurentSeries.zero(f, var=a.var)
    pa = [a.coefficient(av + i) for i in range(max(e for e, _ in a.terms()) - av + 1)]
    pb = [b.coefficient(bv + i) for i in range(max(e for e, _ in b.terms()) - bv + 1)]
    from .fields import poly_divmod, poly_strip

    q, r = poly_divmod(f, poly_strip(f, pa), poly_strip(f, pb))
    if r:
        return None
    items = {av - bv + i: c for i, c in enumerate(q)}
    return LaurentSeries(f, items, var=a.var)


def series_arith(a: LaurentSeries, b: LaurentSeries, op: str, to_order: int | None = None) -> LaurentSeries:
    """Dispatch add/mul/div with exact precision propagation."""
    if op == "add":
        return a.add(b)
    if op == "mul":
        return a.mul(b)
    if op == "div":
        return a.divide(b, to_order=to_order)
    raise ValueError(f"unknown series operation {op!r}")


# ---------------------------------------------------------------------------
# p-th power testing


@dataclass(frozen=True)
class PthPowerResult:
    root: LaurentSeries | None
    witness: str | None

    @property
    def is_power(self) -> bool:
        return self.root is not None


def pth_power_test(a: LaurentSeries) -> PthPowerResult:
    """Return the unique p-th root within precision, or a refusal witness.

    A series is a p-th power iff its valuation and every exponent in its
    support are divisible by p and every coefficient is a p-th power in the
    coefficient field.
    """
    p = a.field.char
    if a.is_zero_to_order():
        raise ValueError("p-th power test requires a nonzero series")
    if a.valuation % p != 0:
        return PthPowerResult(None, f"valuation {a.valuation} not divisible by {p}")
    root_items = {}
    for e, c in a.terms():
        if e % p != 0:
            return PthPowerResult(None, f"exponent {e} not divisible by {p}")
        r = a.field.pth_root(c)
        if r is None:
            return PthPowerResult(
                None, f"coefficient {a.field.label(c)} at exponent {e} is not a {p}-th power"
            )
        root_items[e // p] = r
    order = None if a.order is None else a.order // p
    return PthPowerResult(LaurentSeries(a.field, root_items, order=order, var=a.var), None)


# ---------------------------------------------------------------------------
# Artin-Schreier reduction of principal parts


@dataclass(frozen=True)
class ASReduction:
    """Canonical representative of a principal part modulo gamma^p - gamma.

    ``reduced + (gamma^p - gamma) + nonnegative`` reconstructs the input
    exactly; ``halted`` lists terms that could not be lowered because their
    coefficient has no p-th root in the coefficient field.
    """

    input: LaurentSeries
    reduced: LaurentSeries
    gamma: LaurentSeries
    nonnegative: LaurentSeries
    halted: tuple[tuple[int, str], ...]

    def verify(self) -> bool:
        p = self.input.field.char
        wp = self.gamma.pow(p).sub(self.gamma)
        recombined = self.reduced.add(wp).add(self.nonnegative)
        upto = self.input.known_to()
        if upto == _INF:
            return recombined.equals_exact(self.input)
        return recombined.eq_to_order(self.input, int(upto))


def as_reduce(beta: LaurentSeries) -> ASReduction:
    """Lower the principal part along c*t^(-pm) == c^(1/p)*t^(-m).

    Each replacement subtracts an explicit gamma^p - gamma, so the output
    differs from the input by the emitted gamma and the discarded
    nonnegative part.  Over a finite coefficient field the result is
    supported on exponents prime to p; over a rational function field the
    reduction halts at coefficients without p-th roots and reports them.
    """
    field = beta.field
    p = field.char
    if beta.order is not None and beta.order < -1:
        raise PrecisionError("principal part is not known in full")
    work = {e: c for e, c in beta.terms() if e < 0}
    nonneg = {e: c for e, c in beta.terms() if e >= 0}
    gamma_items: dict[int, object] = {}

    while True:
        progressed = False
        for e in sorted(work):
            if e % p != 0:
                continue
            root = field.pth_root(work[e])
            if root is None:
                continue
            del work[e]
            target = e // p
            gamma_items[target] = field.add(gamma_items.get(target, field.zero), root)
            merged = field.add(work.get(target, field.zero), root)
            if merged == field.zero:
                work.pop(target, None)
            else:
                work[target] = merged
            progressed = True
            break
        if not progressed:
            break

    halted = [(e, field.label(work[e])) for e in sorted(work) if e % p == 0]
    reduced = LaurentSeries(field, work, var=beta.var)
    gamma = LaurentSeries(field, gamma_items, var=beta.var)
    nonnegative = LaurentSeries(field, nonneg, order=beta.order, var=beta.var)
    return ASReduction(
        input=beta,
        reduced=reduced,
        gamma=gamma,
        nonnegative=nonnegative,
        halted=tuple(halted),
    )
