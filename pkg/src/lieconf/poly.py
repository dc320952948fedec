"""Exact polynomials over Q and the Hopf structure of H = Q[D].

``RatPoly`` is a dense univariate polynomial (in ``D`` by default), ``MPoly`` a
sparse multivariate one.  Bivariate polynomials in ``(x, y)`` stand for
elements of H (x) H with ``x = D (x) 1`` and ``y = 1 (x) D``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class RatPoly:
    """Dense univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> RatPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, n: int, c: Scalar = 1) -> RatPoly:
        return cls([0] * n + [c])

    @classmethod
    def var(cls) -> RatPoly:
        return cls((0, 1))

    # -- basic queries ------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RatPoly({self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self, var: str = "D") -> str:
        return MPoly({(i,): c for i, c in enumerate(self.coeffs) if c}, 1).to_str((var,))

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _coerce(other) -> RatPoly:
        if isinstance(other, RatPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RatPoly.const(other)
        raise TypeError(f"cannot combine RatPoly with {type(other).__name__}")

    def __add__(self, other) -> RatPoly:
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    __radd__ = __add__

    def __neg__(self) -> RatPoly:
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> RatPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> RatPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> RatPoly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatPoly()
            return RatPoly(c * other for c in self.coeffs)
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> RatPoly:
        result = RatPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> tuple[RatPoly, RatPoly]:
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lc
        if len(rem) - 1 < dq:
            return RatPoly(), self
        quo = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lead
            if c:
                quo[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return RatPoly(quo), RatPoly(rem[:dq])

    def __floordiv__(self, other) -> RatPoly:
        return divmod(self, other)[0]

    def __mod__(self, other) -> RatPoly:
        return divmod(self, other)[1]

    def monic(self) -> RatPoly:
        return self * (1 / self.lc) if self.coeffs else self

    def divides(self, other: RatPoly) -> bool:
        if not self.coeffs:
            return not other.coeffs
        return not (other % self).coeffs

    # -- evaluation and substitution ----------------------------------
    def __call__(self, value):
        """Horner evaluation at a scalar, a RatPoly or an MPoly."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        if acc is None:
            return value * 0 if not isinstance(value, (int, Fraction)) else Fraction(0)
        if isinstance(value, (RatPoly, MPoly)) and isinstance(acc, Fraction):
            return value * 0 + acc
        return acc

    def shift(self, c: Scalar) -> RatPoly:
        """p(D + c)."""
        return self(RatPoly((c, 1)))

    def reflect(self) -> RatPoly:
        """p(-D)."""
        return RatPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def derivative(self) -> RatPoly:
        return RatPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def to_mpoly(self, nvars: int, index: int) -> MPoly:
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c:
                e = [0] * nvars
                e[index] = i
                terms[tuple(e)] = c
        return MPoly(terms, nvars)

    def integer_content_form(self) -> list[int]:
        """Coefficients scaled to coprime integers (used for root finding)."""
        from math import gcd, lcm

        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return [v // g for v in ints] if g else ints


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    while b:
        a, b = b, a % b
    return a.monic()


def rational_roots(p: RatPoly) -> list[Fraction]:
    """All distinct rational roots of ``p``, sorted.

    Real roots of the squarefree part are isolated by Sturm sequences until
    each interval is narrower than ``1/a`` (``a`` the integer leading
    coefficient); a rational root has denominator dividing ``a``, so only the
    points ``k/a`` inside need an exact check.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has every root")
    roots: set[Fraction] = set()
    q = p
    while q.degree > 0 and q[0] == 0:
        roots.add(Fraction(0))
        q = q // RatPoly.var()
    if q.degree <= 0:
        return sorted(roots)
    g = poly_gcd(q, q.derivative())
    if g.degree > 0:
        q = q // g
    ints = q.integer_content_form()
    a = abs(ints[-1])
    q = RatPoly(ints)
    chain = _sturm_chain(q)
    bound = 1 + max(abs(Fraction(c, ints[-1])) for c in ints[:-1])
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        if _variations(chain, lo) - _variations(chain, hi) == 0:
            continue
        if (hi - lo) * a < 1:
            k = -((-lo.numerator * a) // lo.denominator)  # ceil(lo * a)
            while Fraction(k, a) <= hi:
                r = Fraction(k, a)
                if q(r) == 0:
                    roots.add(r)
                k += 1
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(roots)


def _sturm_chain(q: RatPoly) -> list[RatPoly]:
    chain = [q, q.derivative()]
    while chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        chain.append(-r)
    return chain


def _variations(chain: Sequence[RatPoly], x: Fraction) -> int:
    """Sign changes of the Sturm chain at ``x``."""
    n = 0
    prev = 0
    for f in chain:
        v = f(x)
        if v:
            s = 1 if v > 0 else -1
            if prev and s != prev:
                n += 1
            prev = s
    return n


def strip_rational_roots(p: RatPoly) -> RatPoly:
    """Divide out every rational linear factor (with multiplicity)."""
    q = p
    for r in rational_roots(p):
        lin = RatPoly((-r, 1))
        while q.degree > 0 and lin.divides(q):
            q = q // lin
    return q


class MPoly:
    """Sparse multivariate polynomial: ``{exponent tuple: Fraction}``."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms=None, nvars: int = 2):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = _frac(c)
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def const(cls, c: Scalar, nvars: int = 2) -> MPoly:
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def gen(cls, i: int, nvars: int = 2) -> MPoly:
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.const(other, self.nvars)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other, self.nvars)
        raise TypeError(f"cannot combine MPoly with {type(other).__name__}")

    def __add__(self, other) -> MPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other) -> MPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> MPoly:
        if isinstance(other, (int, Fraction)):
            return MPoly({e: c * other for e, c in self.terms.items()}, self.nvars)
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MPoly:
        result = MPoly.const(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def degree(self, var: int | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        return max(e[var] for e in self.terms)

    def substitute(self, images: Sequence[MPoly]) -> MPoly:
        """Compose: replace variable ``i`` by ``images[i]`` (all with equal nvars)."""
        nv = images[0].nvars
        out = MPoly({}, nv)
        cache: dict[tuple[int, int], MPoly] = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        for e, c in self.terms.items():
            term = MPoly.const(c, nv)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def coefficient_in(self, var: int, n: int) -> MPoly:
        """Coefficient of ``var**n`` (the variable is kept with exponent 0)."""
        out = {}
        for e, c in self.terms.items():
            if e[var] == n:
                e2 = list(e)
                e2[var] = 0
                out[tuple(e2)] = c
        return MPoly(out, self.nvars)

    def univariate(self, var: int) -> RatPoly:
        """View as a RatPoly in ``var``; all other exponents must be zero."""
        cs: dict[int, Fraction] = {}
        for e, c in self.terms.items():
            if any(k for i, k in enumerate(e) if i != var):
                raise ValueError("polynomial depends on other variables")
            cs[e[var]] = c
        if not cs:
            return RatPoly()
        return RatPoly([cs.get(i, 0) for i in range(max(cs) + 1)])

    def __repr__(self) -> str:
        return f"MPoly({self.terms!r}, nvars={self.nvars})"

    def to_str(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        # graded order, high degree first, for readability and determinism
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            mon = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mon:
                body = _fmt_coeff(a)
            elif a == 1:
                body = mon
            else:
                body = f"{_fmt_coeff(a)}*{mon}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


BiPoly = MPoly
X = MPoly.gen(0, 2)
Y = MPoly.gen(1, 2)


def bipoly(terms: dict) -> MPoly:
    return MPoly(terms, 2)


# -- Hopf algebra structure of H = Q[D] -----------------------------------

def coproduct(h: RatPoly) -> MPoly:
    """Delta(D^k) = (x + y)^k, extended linearly."""
    return h(X + Y)


def counit(h: RatPoly) -> Fraction:
    return h[0]


def antipode(h: RatPoly) -> RatPoly:
    return h.reflect()


def fourier(p: MPoly) -> MPoly:
    """h (x) k  ->  h k_(1) (x) k_(2), i.e. y -> x + y."""
    return p.substitute([X, X + Y])


def fourier_inverse(p: MPoly) -> MPoly:
    """y -> y - x; inverse of :func:`fourier`."""
    return p.substitute([X, Y - X])


def straighten(p: MPoly) -> list[tuple[RatPoly, int]]:
    """Write ``p = sum_n (h_n(x) (x) 1) * Delta(D^n)`` with distinct ``n``.

    Returns the nonzero ``(h_n, n)`` pairs sorted by ``n``.
    """
    q = fourier_inverse(p)
    out = []
    for n in range(q.degree(1) + 1):
        h = q.coefficient_in(1, n).univariate(0)
        if h:
            out.append((h, n))
    return out


def unstraighten(parts: Iterable[tuple[RatPoly, int]]) -> MPoly:
    acc = MPoly({}, 2)
    for h, n in parts:
        acc = acc + h.to_mpoly(2, 0) * (X + Y) ** n
    return acc


# -- the lambda-bracket dictionary ------------------------------------------
# Variables of a "lambda polynomial" are (L, D) = (lambda, D).

LAM = MPoly.gen(0, 2)
DEL = MPoly.gen(1, 2)


def pseudo_to_lambda(p: MPoly) -> MPoly:
    """P(x, y) -> P(-lambda, D + lambda)."""
    return p.substitute([-LAM, DEL + LAM])


def lambda_to_pseudo(q: MPoly) -> MPoly:
    """Q(lambda, D) -> Q(-x, x + y); inverse of :func:`pseudo_to_lambda`."""
    return q.substitute([-X, X + Y])


def falling(n: int, r: int) -> int:
    """Falling factorial n (n-1) ... (n-r+1); valid for negative n too."""
    out = 1
    for i in range(r):
        out *= n - i
    return out


def binomial(n: int, r: int) -> int:
    if r < 0:
        return 0
    if n >= 0:
        return comb(n, r) if r <= n else 0
    return falling(n, r) // factorial(r)
