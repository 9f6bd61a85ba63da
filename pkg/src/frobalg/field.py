"""Exact arithmetic in GF(q) and GF(s^e).

Elements are encoded as integers: the polynomial c_0 + c_1 x + ... + c_{e-1} x^{e-1}
over GF(s) is stored as the code sum(c_i * s**i).  For prime fields the code is
the residue itself.  Scalar helpers (``add``, ``mul``, ...) work on codes, the
``v*`` helpers on numpy arrays of codes; :class:`FieldElement` wraps a code for
the public API.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import factorint, isprime, nextprime, primitive_root
from sympy.ntheory import n_order


class InvalidParameter(ValueError):
    """A construction parameter (prime, degree, field) is not admissible."""


class NoRootOfUnity(ValueError):
    """The requested root of unity does not exist in the field."""


# -- polynomials over GF(s), coefficient tuples low-to-high -----------------


def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, s):
    """Remainder of a modulo the monic polynomial m over GF(s)."""
    a = _poly_trim(x % s for x in a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % s
        a = _poly_trim(a)
    return a


def _poly_mul(a, b, s):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % s
    return out


def _monic_polys(s, d):
    """Monic degree-d polynomials over GF(s), in increasing integer-code order."""
    for tail in range(s**d):
        coeffs = [(tail // s**i) % s for i in range(d)]
        yield coeffs + [1]


def is_irreducible(m, s) -> bool:
    """Exhaustive factor search: no monic factor of degree 1..deg/2 divides m."""
    d = len(m) - 1
    if d < 1:
        return False
    for fd in range(1, d // 2 + 1):
        for f in _monic_polys(s, fd):
            if not _poly_mod(m, f, s):
                return False
    return True


def smallest_irreducible(s: int, e: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree e over GF(s), leading coefficient most significant."""
    for m in _monic_polys(s, e):
        if is_irreducible(m, s):
            return tuple(m)
    raise AssertionError("irreducible polynomials exist in every degree")


def format_poly(coeffs, var="x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "1" if i == 0 else var if i == 1 else f"{var}^{i}"
        if i == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


# -- contexts ---------------------------------------------------------------


@dataclass(frozen=True)
class FieldContext:
    """GF(s^e) with the given monic irreducible modulus (low-to-high coefficients).

    For e == 1 the modulus is the placeholder (0, 1) and elements are residues mod s.
    """

    s: int
    e: int = 1
    modulus: tuple[int, ...] = (0, 1)

    def __post_init__(self):
        if not isprime(self.s):
            raise InvalidParameter(f"characteristic {self.s} is not prime")
        if self.e < 1 or len(self.modulus) != self.e + 1 or self.modulus[-1] != 1:
            raise InvalidParameter("modulus must be monic of degree e")

    @property
    def order(self) -> int:
        return self.s**self.e

    @property
    def characteristic(self) -> int:
        return self.s

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def describe(self) -> str:
        if self.is_prime_field:
            return f"GF({self.s})"
        return f"GF({self.s}^{self.e}) mod {format_poly(self.modulus)}"

    def __repr__(self):
        return f"FieldContext({self.describe()})"

    # tables for extension fields

    def _code_to_poly(self, c):
        return [(c // self.s**i) % self.s for i in range(self.e)]

    def _poly_to_code(self, a):
        return sum(int(x) * self.s**i for i, x in enumerate(a))

    def _slow_mul(self, a, b):
        prod = _poly_mul(self._code_to_poly(a), self._code_to_poly(b), self.s)
        return self._poly_to_code(_poly_mod(prod, list(self.modulus), self.s))

    @cached_property
    def _tables(self):
        """(exp, log) tables with respect to the smallest multiplicative generator."""
        n = self.order - 1
        g = self.generator_code
        exp = np.zeros(2 * n, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self.mul(x, g) if self.is_prime_field else self._slow_mul(x, g)
        exp[n:] = exp[:n]
        return exp, log

    @cached_property
    def generator_code(self) -> int:
        """Smallest code (coefficient-lex, leading coefficient first) generating GF*."""
        n = self.order - 1
        if n == 1:
            return 1
        primes = list(factorint(n))
        mul = (lambda a, b: a * b % self.s) if self.is_prime_field else self._slow_mul
        for g in range(2, self.order):
            if all(self._pow_by(g, n // f, mul) != 1 for f in primes):
                return g
        raise AssertionError("multiplicative group is cyclic")

    @staticmethod
    def _pow_by(a, k, mul):
        r = 1
        while k:
            if k & 1:
                r = mul(r, a)
            a = mul(a, a)
            k >>= 1
        return r

    @cached_property
    def _prime_inverses(self):
        inv = np.zeros(self.s, dtype=np.int64)
        inv[1:] = [pow(x, -1, self.s) for x in range(1, self.s)]
        return inv

    # scalar ops on codes

    def add(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return (a + b) % self.s
        if self.s == 2:
            return a ^ b
        return self._poly_to_code(
            (x + y) % self.s for x, y in zip(self._code_to_poly(a), self._code_to_poly(b))
        )

    def neg(self, a: int) -> int:
        if self.is_prime_field:
            return (-a) % self.s
        if self.s == 2:
            return a
        return self._poly_to_code((-x) % self.s for x in self._code_to_poly(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return a * b % self.s
        if a == 0 or b == 0:
            return 0
        exp, log = self._tables
        return int(exp[log[a] + log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + self.describe())
        if self.is_prime_field:
            return pow(a, -1, self.s)
        exp, log = self._tables
        return int(exp[(self.order - 1 - log[a]) % (self.order - 1)])

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        return self._pow_by(a, k, self.mul)

    def from_int(self, n: int) -> int:
        """Code of the image of the integer n (n times the identity)."""
        return n % self.s

    # vectorised ops on int64 arrays of codes

    def vadd(self, a, b):
        if self.is_prime_field:
            return (a + b) % self.s
        if self.s == 2:
            return np.bitwise_xor(a, b)
        return self._digitwise(a, b, 1)

    def vneg(self, a):
        if self.is_prime_field:
            return (-a) % self.s
        if self.s == 2:
            return a
        return self._digitwise(np.zeros_like(a), a, -1)

    def vsub(self, a, b):
        if self.is_prime_field:
            return (a - b) % self.s
        if self.s == 2:
            return np.bitwise_xor(a, b)
        return self._digitwise(a, b, -1)

    def _digitwise(self, a, b, sign):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.zeros(a.shape, dtype=np.int64)
        for i in range(self.e):
            w = self.s**i
            out += (((a // w) % self.s + sign * ((b // w) % self.s)) % self.s) * w
        return out

    def vmul(self, a, b):
        if self.is_prime_field:
            return a * b % self.s
        exp, log = self._tables
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime_field:
            return self._prime_inverses[a]
        exp, log = self._tables
        return exp[(self.order - 1 - log[a]) % (self.order - 1)]

    def matmul(self, A, B):
        """Matrix product over the field."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        inner = A.shape[-1]
        if self.is_prime_field:
            if inner * (self.s - 1) ** 2 < 2**52:
                prod = A.astype(np.float64) @ B.astype(np.float64)
                return np.rint(prod).astype(np.int64) % self.s
            return (A.astype(object) @ B.astype(object) % self.s).astype(np.int64)
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for t in range(inner):
            col = A[:, t]
            if col.any():
                out = self.vadd(out, self.vmul(col[:, None], B[t][None, :]))
        return out

    def vsum(self, a, axis=0):
        a = np.asarray(a, dtype=np.int64)
        if self.is_prime_field:
            return a.sum(axis=axis) % self.s
        if self.s == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        out = np.take(a, 0, axis=axis)
        for i in range(1, a.shape[axis]):
            out = self.vadd(out, np.take(a, i, axis=axis))
        return out

    # elements

    def element(self, value) -> "FieldElement":
        """Element from a code (int) or a low-to-high coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) > self.e:
                raise ValueError("too many coefficients")
            return FieldElement(self, self._poly_to_code(x % self.s for x in value))
        value = int(value)
        if self.is_prime_field:
            return FieldElement(self, value % self.s)
        if not 0 <= value < self.order:
            raise ValueError(f"code {value} out of range for {self.describe()}")
        return FieldElement(self, value)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self):
        return [FieldElement(self, c) for c in range(self.order)]

    def render(self, code: int) -> str:
        if self.is_prime_field:
            return str(code)
        return format_poly(self._code_to_poly(code))


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldContext
    code: int

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ValueError("operands live in different fields")
            return other.code
        return self.ctx.from_int(int(other))

    def __add__(self, other):
        return FieldElement(self.ctx, self.ctx.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElement(self.ctx, self.ctx.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.code))

    def __truediv__(self, other):
        return self * FieldElement(self.ctx, self._other(other)).inv()

    def __pow__(self, k: int):
        return FieldElement(self.ctx, self.ctx.pow(self.code, k))

    def inv(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.code))

    def __bool__(self):
        return self.code != 0

    @property
    def coefficients(self) -> tuple[int, ...]:
        return tuple(self.ctx._code_to_poly(self.code))

    def multiplicative_order(self) -> int:
        if self.code == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.ctx.order - 1
        for d in sorted(_divisors(n)):
            if self.ctx.pow(self.code, d) == 1:
                return d
        return n

    def __str__(self):
        return self.ctx.render(self.code)

    def __repr__(self):
        return f"FieldElement({self}, {self.ctx.describe()})"


def _divisors(n):
    ds = [1]
    for prime, mult in factorint(n).items():
        ds = [d * prime**k for d in ds for k in range(mult + 1)]
    return ds


def field_arithmetic(a: FieldElement, b: FieldElement | None, op: str, exponent: int | None = None) -> FieldElement:
    """Dispatch one of add, sub, mul, inv, pow (``b`` ignored for inv and pow)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "pow":
        return a ** (exponent if exponent is not None else int(b.code))
    raise ValueError(f"unknown op {op!r}")


def make_prime_field(q: int) -> FieldContext:
    if q < 2 or not isprime(q):
        raise InvalidParameter(f"{q} is not prime")
    return FieldContext(q)


def make_extension_field(s: int, e: int) -> FieldContext:
    if not isprime(s):
        raise InvalidParameter(f"{s} is not prime")
    if e < 1:
        raise InvalidParameter("extension degree must be >= 1")
    if e == 1:
        return FieldContext(s)
    return FieldContext(s, e, smallest_irreducible(s, e))


def root_of_unity(ctx: FieldContext, p: int) -> FieldElement:
    """g^((|K|-1)/p) for the smallest generator g; an element of order exactly p."""
    if not isprime(p):
        raise InvalidParameter(f"{p} is not prime")
    n = ctx.order - 1
    if n % p:
        raise NoRootOfUnity(f"{p} does not divide {n} = |{ctx.describe()}*|")
    return FieldElement(ctx, ctx.pow(ctx.generator_code, n // p))


def smallest_primitive_root(p: int) -> int:
    return int(primitive_root(p))


@dataclass(frozen=True)
class ConstructionParams:
    """Prime p, a field with a primitive p-th root of unity omega, and a primitive root r mod p."""

    p: int
    ctx: FieldContext
    omega: FieldElement
    r: int

    @property
    def q(self) -> int:
        return self.ctx.order

    @cached_property
    def omega_powers(self) -> np.ndarray:
        return np.array([self.ctx.pow(self.omega.code, j) for j in range(self.p)], dtype=np.int64)

    def validate(self) -> "ConstructionParams":
        p = self.p
        if p < 3 or not isprime(p):
            raise InvalidParameter(f"p = {p} must be a prime >= 3")
        if self.ctx.characteristic == p:
            raise InvalidParameter("field characteristic equals p")
        if self.omega.ctx != self.ctx or self.omega.code == 0 or self.omega.multiplicative_order() != p:
            raise InvalidParameter(f"omega = {self.omega} is not a primitive {p}-th root of unity")
        if {pow(self.r, j, p) for j in range(p - 1)} != set(range(1, p)):
            raise InvalidParameter(f"r = {self.r} is not a primitive root mod {p}")
        return self

    def describe(self) -> dict:
        return {
            "p": self.p,
            "field": self.ctx.describe(),
            "q": self.q,
            "omega": str(self.omega),
            "r": self.r,
        }


def _check_p(p: int):
    if not isinstance(p, int) or p < 3 or not isprime(p):
        raise InvalidParameter(f"p = {p} must be a prime >= 3")


def params_for_field(p: int, ctx: FieldContext) -> ConstructionParams:
    _check_p(p)
    if ctx.characteristic == p:
        raise InvalidParameter("field characteristic must differ from p")
    omega = root_of_unity(ctx, p)
    return ConstructionParams(p, ctx, omega, smallest_primitive_root(p)).validate()


def lazard_prime(p: int) -> int:
    """Smallest prime q > p with q = 1 mod p."""
    q = p
    while True:
        q = nextprime(q)
        if q % p == 1:
            return q


def find_parameters(p: int, mode: str = "lazard") -> ConstructionParams:
    """Deterministic construction parameters.

    ``lazard``: GF(q) for the least prime q > p with q = 1 mod p.
    ``noncoprime``: GF(s^e) for the least prime s dividing p - 1, e = ord_p(s).
    """
    _check_p(p)
    if mode == "lazard":
        ctx = make_prime_field(lazard_prime(p))
    elif mode == "noncoprime":
        s = min(factorint(p - 1))
        ctx = make_extension_field(s, int(n_order(s, p)))
    else:
        raise InvalidParameter(f"unknown mode {mode!r}")
    return params_for_field(p, ctx)


def admissible_prime_fields(p: int, limit: int):
    """Primes q < limit, q != p, whose multiplicative group contains an element of order p."""
    for q in itertools.count(p + 1):
        if q >= limit:
            return
        if isprime(q) and (q - 1) % p == 0:
            yield q
