"""Normal-ordered elements of U_q(b), U_q(sl2) and their finite quotients.

Monomials are exponent tuples in normal order: ``(a, b)`` for ``g^a x^b``
and ``(a, e, f)`` for ``K^a E^e F^f``. Elements are dictionaries from
monomials to nonzero field scalars. Tensor elements key on tuples of
monomials, one per tensor factor.
"""

from __future__ import annotations

import itertools
import random
from typing import Any, Iterable, Sequence

from .errors import OutOfRange, WrongOrderOfQ
from .field import QContext
from .qcombinatorics import partial_sums, q_multinomial, weak_compositions

Mono = tuple


class Element:
    """Linear combination of normal-ordered monomials."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "HopfAlgebra", terms: dict | None = None) -> None:
        self.alg = alg
        self.terms = {m: c for m, c in (terms or {}).items() if not alg.field.is_zero(c)}

    def __add__(self, other: "Element") -> "Element":
        f = self.alg.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = f.add(out.get(m, f.zero), c)
        return Element(self.alg, out)

    def __neg__(self) -> "Element":
        f = self.alg.field
        return Element(self.alg, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __mul__(self, other: "Element") -> "Element":
        f = self.alg.field
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                for m, c in self.alg.mono_mul(m1, m2).items():
                    out[m] = f.add(out.get(m, f.zero), f.mul(f.mul(c1, c2), c))
        return Element(self.alg, out)

    def scale(self, c) -> "Element":
        f = self.alg.field
        return Element(self.alg, {m: f.mul(c, v) for m, v in self.terms.items()})

    def __pow__(self, k: int) -> "Element":
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Element) and self.terms == other.terms

    def __repr__(self) -> str:
        f = self.alg.field
        if not self.terms:
            return "0"
        return " + ".join(f"{f.fmt(c)}*{self.alg.mono_str(m)}" for m, c in sorted(self.terms.items()))


class TensorElement:
    """Element of the (l+1)-fold tensor power; multiplication is factorwise."""

    __slots__ = ("alg", "nslots", "terms")

    def __init__(self, alg: "HopfAlgebra", nslots: int, terms: dict | None = None) -> None:
        self.alg = alg
        self.nslots = nslots
        self.terms = {m: c for m, c in (terms or {}).items() if not alg.field.is_zero(c)}

    @classmethod
    def pure(cls, alg: "HopfAlgebra", monos: Sequence[Mono], coef=None) -> "TensorElement":
        coef = alg.field.one if coef is None else coef
        return cls(alg, len(monos), {tuple(monos): coef})

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if other.nslots != self.nslots:
            raise ValueError("tensor powers differ")
        f = self.alg.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = f.add(out.get(m, f.zero), c)
        return TensorElement(self.alg, self.nslots, out)

    def scale(self, c) -> "TensorElement":
        f = self.alg.field
        return TensorElement(self.alg, self.nslots, {m: f.mul(c, v) for m, v in self.terms.items()})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        if other.nslots != self.nslots:
            raise ValueError("tensor powers differ")
        f = self.alg.field
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                slot_products = [self.alg.mono_mul(a, b) for a, b in zip(k1, k2)]
                if any(not p for p in slot_products):
                    continue
                base = f.mul(c1, c2)
                for combo in itertools.product(*(p.items() for p in slot_products)):
                    coef = base
                    for _, c in combo:
                        coef = f.mul(coef, c)
                    key = tuple(m for m, _ in combo)
                    out[key] = f.add(out.get(key, f.zero), coef)
        return TensorElement(self.alg, self.nslots, out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TensorElement) and self.nslots == other.nslots and self.terms == other.terms

    def __repr__(self) -> str:
        f = self.alg.field
        if not self.terms:
            return "0"
        parts = []
        for key, c in sorted(self.terms.items()):
            parts.append(f"{f.fmt(c)}*" + "(x)".join(self.alg.mono_str(m) for m in key))
        return " + ".join(parts)


class HopfAlgebra:
    """Shared machinery: word rewriting, coproducts, tensor powers."""

    letters: tuple[str, ...]
    rank: dict[str, int]

    def __init__(self, ctx: QContext) -> None:
        self.ctx = ctx
        self.field = ctx.field
        self._mul_cache: dict = {}
        self._delta_cache: dict = {}

    # to be provided by subclasses
    def _rewrite(self, left: str, right: str) -> list[tuple[Any, tuple[str, ...]]] | None:
        raise NotImplementedError

    def word_to_mono(self, word: Sequence[str]) -> Mono:
        raise NotImplementedError

    def reduce(self, mono: Mono) -> Mono | None:
        return mono

    def mono_str(self, mono: Mono) -> str:
        raise NotImplementedError

    def identity_mono(self) -> Mono:
        raise NotImplementedError

    def _mono_mul_raw(self, m1: Mono, m2: Mono) -> dict:
        raise NotImplementedError

    def counit_mono(self, mono: Mono):
        raise NotImplementedError

    def _delta_generators(self, mono: Mono) -> TensorElement:
        raise NotImplementedError

    # common API
    def one(self) -> Element:
        return Element(self, {self.identity_mono(): self.field.one})

    def element(self, mono: Mono, coef=None) -> Element:
        red = self.reduce(tuple(mono))
        if red is None:
            return Element(self, {})
        return Element(self, {red: self.field.one if coef is None else coef})

    def mono_mul(self, m1: Mono, m2: Mono) -> dict:
        key = (m1, m2)
        hit = self._mul_cache.get(key)
        if hit is None:
            f = self.field
            hit = {}
            for m, c in self._mono_mul_raw(m1, m2).items():
                red = self.reduce(m)
                if red is not None:
                    hit[red] = f.add(hit.get(red, f.zero), c)
            hit = {m: c for m, c in hit.items() if not f.is_zero(c)}
            self._mul_cache[key] = hit
        return hit

    def normal_form(self, word: Sequence[str], rng: random.Random | None = None) -> Element:
        """Rewrite a word in the generators to normal order.

        With ``rng`` the reducible position is picked at random at every step;
        the result does not depend on that choice.
        """
        f = self.field
        for letter in word:
            if letter not in self.letters:
                raise ValueError(f"unknown generator {letter!r}")
        pending: list[tuple[Any, tuple[str, ...]]] = [(f.one, tuple(word))]
        done: dict = {}
        while pending:
            coef, w = pending.pop()
            positions = [i for i in range(len(w) - 1) if self._rewrite(w[i], w[i + 1]) is not None]
            if not positions:
                mono = self.reduce(self.word_to_mono(w))
                if mono is not None:
                    done[mono] = f.add(done.get(mono, f.zero), coef)
                continue
            i = rng.choice(positions) if rng is not None else positions[0]
            for c, repl in self._rewrite(w[i], w[i + 1]):
                pending.append((f.mul(coef, c), w[:i] + repl + w[i + 2:]))
        return Element(self, done)

    def counit(self, elem: Element):
        f = self.field
        total = f.zero
        for m, c in elem.terms.items():
            total = f.add(total, f.mul(c, self.counit_mono(m)))
        return total

    def delta_mono(self, mono: Mono) -> TensorElement:
        hit = self._delta_cache.get(mono)
        if hit is None:
            hit = self._delta_generators(mono)
            self._delta_cache[mono] = hit
        return hit

    def tensor_one(self, nslots: int) -> TensorElement:
        return TensorElement.pure(self, [self.identity_mono()] * nslots)

    def as_tensor(self, elem: Element) -> TensorElement:
        return TensorElement(self, 1, {(m,): c for m, c in elem.terms.items()})

    def apply_delta(self, t: TensorElement, slot: int) -> TensorElement:
        """Apply the coproduct to tensor factor ``slot``."""
        if not 0 <= slot < t.nslots:
            raise OutOfRange(f"slot {slot} of {t.nslots}")
        f = self.field
        out: dict = {}
        for key, c in t.terms.items():
            for pair, d in self.delta_mono(key[slot]).terms.items():
                new_key = key[:slot] + pair + key[slot + 1:]
                out[new_key] = f.add(out.get(new_key, f.zero), f.mul(c, d))
        return TensorElement(self, t.nslots + 1, out)

    def coproduct_power(self, l: int, elem: Element, slots: Iterable[int] | None = None) -> TensorElement:
        """``Delta^l(elem)``; ``slots`` picks which factor to expand at each step (default: the last)."""
        if l < 0:
            raise OutOfRange("l must be nonnegative")
        t = self.as_tensor(elem)
        slots = list(slots) if slots is not None else [None] * l
        if len(slots) != l:
            raise OutOfRange("need one slot per coproduct application")
        for s in slots:
            t = self.apply_delta(t, t.nslots - 1 if s is None else s)
        return t


class BorelAlgebra(HopfAlgebra):
    """U_q(b) = <g, g^-1, x | g x g^-1 = q x>, or T(r, n) with ``quotient=(r, n)``."""

    letters = ("g", "G", "x")  # G stands for g^-1
    kind = "borel"

    def __init__(self, ctx: QContext, quotient: tuple[int, int] | None = None) -> None:
        super().__init__(ctx)
        if quotient is not None:
            r, n = quotient
            if ctx.order != r:
                raise WrongOrderOfQ(f"T({r},{n}) needs q of order {r}, got {ctx.order}")
            if n % r:
                raise WrongOrderOfQ(f"T({r},{n}) needs r | n")
        self.quotient = quotient
        f = self.field
        q, qi = ctx.q, ctx.q_inv
        self._rules = {
            ("g", "G"): [(f.one, ())],
            ("G", "g"): [(f.one, ())],
            ("x", "g"): [(qi, ("g", "x"))],
            ("x", "G"): [(q, ("G", "x"))],
        }

    def _rewrite(self, left, right):
        return self._rules.get((left, right))

    def word_to_mono(self, word):
        return (word.count("g") - word.count("G"), word.count("x"))

    def reduce(self, mono):
        if self.quotient is None:
            return mono
        r, n = self.quotient
        a, b = mono
        if b >= r:
            return None
        return (a % n, b)

    def identity_mono(self):
        return (0, 0)

    def mono_str(self, mono):
        a, b = mono
        parts = ([f"g^{a}"] if a else []) + ([f"x^{b}"] if b else [])
        return "".join(parts) or "1"

    def _mono_mul_raw(self, m1, m2):
        a, b = m1
        c, d = m2
        # x^b g^c = q^(-bc) g^c x^b
        return {(a + c, b + d): self.ctx.qpow(-b * c)}

    def counit_mono(self, mono):
        return self.field.one if mono[1] == 0 else self.field.zero

    def _delta_generators(self, mono):
        a, b = mono
        one = self.identity_mono()
        g_part = TensorElement.pure(self, [(a, 0), (a, 0)])
        x_delta = TensorElement.pure(self, [one, (0, 1)]) + TensorElement.pure(self, [(0, 1), (1, 0)])
        out = g_part
        for _ in range(b):
            out = out * x_delta
        return out

    def generator(self, name: str) -> Element:
        return self.normal_form([name])

    @property
    def skew_parameter(self):
        return self.ctx.q

    def grouplike_mono(self, a: int) -> Mono:
        return (a, 0)

    def skew_mono(self, a: int, b: int) -> Mono:
        return (a, b)


class SL2Algebra(HopfAlgebra):
    """U_q(sl2), or u_q(sl2) with ``quotient=n`` (n odd, n > 2, q of order n)."""

    letters = ("K", "k", "E", "F")  # k stands for K^-1
    kind = "sl2"

    def __init__(self, ctx: QContext, quotient: int | None = None) -> None:
        super().__init__(ctx)
        f = self.field
        q, qi = ctx.q, ctx.q_inv
        if f.is_zero(f.sub(f.mul(q, q), f.one)):
            raise WrongOrderOfQ("U_q(sl2) needs q^2 != 1")
        if quotient is not None:
            n = quotient
            if n <= 2 or n % 2 == 0:
                raise WrongOrderOfQ(f"u_q(sl2) needs n odd and n > 2, got n = {n}")
            if ctx.order != n:
                raise WrongOrderOfQ(f"u_q(sl2) with n = {n} needs q of order {n}, got {ctx.order}")
        self.quotient = quotient
        q2, qi2 = f.mul(q, q), f.mul(qi, qi)
        c = f.inv(f.sub(q, qi))
        self._rules = {
            ("K", "k"): [(f.one, ())],
            ("k", "K"): [(f.one, ())],
            ("E", "K"): [(qi2, ("K", "E"))],
            ("E", "k"): [(q2, ("k", "E"))],
            ("F", "K"): [(q2, ("K", "F"))],
            ("F", "k"): [(qi2, ("k", "F"))],
            ("F", "E"): [(f.one, ("E", "F")), (f.neg(c), ("K",)), (c, ("k",))],
        }
        self._fe_cache: dict = {}

    def _rewrite(self, left, right):
        return self._rules.get((left, right))

    def word_to_mono(self, word):
        return (word.count("K") - word.count("k"), word.count("E"), word.count("F"))

    def reduce(self, mono):
        if self.quotient is None:
            return mono
        n = self.quotient
        a, e, f = mono
        if e >= n or f >= n:
            return None
        return (a % n, e, f)

    def identity_mono(self):
        return (0, 0, 0)

    def mono_str(self, mono):
        a, e, f = mono
        parts = ([f"K^{a}"] if a else []) + ([f"E^{e}"] if e else []) + ([f"F^{f}"] if f else [])
        return "".join(parts) or "1"

    def _f_times_e(self, f_exp: int, e_exp: int) -> dict:
        """Normal form of F^f E^e in the full (unreduced) algebra."""
        key = (f_exp, e_exp)
        hit = self._fe_cache.get(key)
        if hit is None:
            saved, self.quotient = self.quotient, None
            try:
                hit = dict(self.normal_form(["F"] * f_exp + ["E"] * e_exp).terms)
            finally:
                self.quotient = saved
            self._fe_cache[key] = hit
        return hit

    def _mono_mul_raw(self, m1, m2):
        fld = self.field
        a, e, f = m1
        c, g, h = m2
        # E^e F^f K^c = q^(2(f-e)c) K^c E^e F^f
        base = self.ctx.qpow(2 * (f - e) * c)
        out: dict = {}
        for (x, y, z), coef in self._f_times_e(f, g).items():
            # K^(a+c) E^e K^x E^y F^z F^h
            scalar = fld.mul(fld.mul(base, coef), self.ctx.qpow(-2 * e * x))
            key = (a + c + x, e + y, z + h)
            out[key] = fld.add(out.get(key, fld.zero), scalar)
        return out

    def counit_mono(self, mono):
        return self.field.one if mono[1] == 0 and mono[2] == 0 else self.field.zero

    def _delta_generators(self, mono):
        a, e, f = mono
        one = self.identity_mono()
        out = TensorElement.pure(self, [(a, 0, 0), (a, 0, 0)])
        e_delta = TensorElement.pure(self, [one, (0, 1, 0)]) + TensorElement.pure(self, [(0, 1, 0), (1, 0, 0)])
        f_delta = TensorElement.pure(self, [(-1, 0, 0), (0, 0, 1)]) + TensorElement.pure(self, [(0, 0, 1), one])
        for _ in range(e):
            out = out * e_delta
        for _ in range(f):
            out = out * f_delta
        return out

    def generator(self, name: str) -> Element:
        return self.normal_form([name])

    @property
    def skew_parameter(self):
        # K E = q^2 E K, so (E, K) generate a copy of U_{q^2}(b)
        return self.field.mul(self.ctx.q, self.ctx.q)

    def grouplike_mono(self, a: int) -> Mono:
        return (a, 0, 0)

    def skew_mono(self, a: int, b: int) -> Mono:
        return (a, b, 0)


def g_tensor_lambda(lam: Sequence[int], alg: HopfAlgebra) -> TensorElement:
    """``G^(lam^1) X^(lam_1) (x) ... (x) G^(lam^(l+1)) X^(lam_(l+1))`` with (G, X) = (g, x) or (K, E)."""
    lam = tuple(lam)
    if not lam or any(x < 0 for x in lam):
        raise OutOfRange(f"{lam} is not a weak composition")
    monos = [alg.skew_mono(before, part) for before, part in zip(partial_sums(lam), lam)]
    reduced = [alg.reduce(m) for m in monos]
    if any(m is None for m in reduced):
        return TensorElement(alg, len(lam), {})
    return TensorElement.pure(alg, reduced)


def skew_power_closed_form(l: int, k: int, alg: HopfAlgebra) -> TensorElement:
    """``sum over lam in WC(k, l+1) of [k; lam]_(p^-1) G(x)^lam X`` where ``G X = p X G``."""
    if l < 0 or k < 0:
        raise OutOfRange("l and k must be nonnegative")
    f = alg.field
    p_inv = f.inv(alg.skew_parameter)
    out = TensorElement(alg, l + 1, {})
    for lam in weak_compositions(k, l + 1):
        coef = q_multinomial(k, lam, alg.ctx, q=p_inv)
        out = out + g_tensor_lambda(lam, alg).scale(coef)
    return out


def skew_power(alg: HopfAlgebra, k: int) -> Element:
    """``x^k`` (Borel) or ``E^k`` (sl2) as an algebra element."""
    return alg.element(alg.skew_mono(0, k))
