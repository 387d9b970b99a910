"""Exact arithmetic in F_{p^{h*2n}}, viewed as the tower F_p < F_q < F_{q^n} < F_{q^{2n}}.

Elements are canonical non-negative integers: the base-p digits (little endian)
are the coefficients of the element in the power basis 1, t, t^2, ... where t is
a root of the field modulus.  Subfields are not embedded separately; an element
lies in F_{q^k} exactly when it is fixed by x -> x^{q^k}.

Small fields (order <= ``element_cap``) carry discrete-log, antilog and Zech
tables, which back both the scalar operations and the vectorised kernels used by
the exhaustive searches.  Larger fields fall back to digit-vector arithmetic with
precomputed Frobenius matrices.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import FieldError, SubfieldError

DEFAULT_ELEMENT_CAP = 2**22


# --- polynomials over F_p, coefficient lists with the constant term first ---

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    df = len(f) - 1
    while len(a) - 1 >= df:
        c = a[-1]
        if c:
            shift = len(a) - 1 - df
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fi) % p
        a.pop()
        _trim(a)
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] = ai
    for i, bi in enumerate(b):
        out[i] = (out[i] - bi) % p
    return _trim(out)


def _poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        b = [(c * inv) % p for c in b]
        a, b = b, _poly_mod(a, b, p)
    return a


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: list[int] | tuple[int, ...], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    f = _trim(list(f))
    d = len(f) - 1
    if d < 1 or f[-1] != 1:
        return False
    if d == 1:
        return True
    x = [0, 1]

    def x_pow_p_pow(k):
        r = x
        for _ in range(k):
            r = _poly_powmod(r, p, f, p)
        return r

    if _poly_sub(x_pow_p_pow(d), x, p):
        return False
    for r in prime_factors(d):
        g = _poly_gcd(f, _poly_sub(x_pow_p_pow(d // r), x, p), p)
        if len(g) != 1:
            return False
    return True


def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ``d`` over F_p.

    Order: compare the integers sum(c_i p^i) built from the non-leading
    coefficients, i.e. lexicographic on (c_{d-1}, ..., c_0).
    """
    for c in range(p**d):
        coeffs = [(c // p**i) % p for i in range(d)] + [1]
        if d > 1 and coeffs[0] == 0:
            continue
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {d} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """Parameters of the tower F_p < F_q < F_{q^n} < F_{q^{2n}} with q = p^h."""

    p: int
    h: int
    n: int
    modulus: tuple[int, ...] | None = None
    element_cap: int = DEFAULT_ELEMENT_CAP

    def __post_init__(self):
        if self.modulus is not None:
            object.__setattr__(self, "modulus", tuple(int(c) for c in self.modulus))

    @property
    def q(self) -> int:
        return self.p**self.h

    @property
    def m(self) -> int:
        return 2 * self.n

    @property
    def degree(self) -> int:
        return self.h * 2 * self.n

    @property
    def order(self) -> int:
        return self.p**self.degree

    def validate(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"p={self.p} is not prime")
        if self.h < 1:
            raise FieldError(f"h={self.h} must be positive")
        if self.n < 2:
            raise FieldError(f"n={self.n} must be at least 2")
        if self.modulus is not None:
            f = list(self.modulus)
            if len(f) - 1 != self.degree:
                raise FieldError(
                    f"modulus has degree {len(f) - 1}, expected {self.degree}")
            if any(not 0 <= c < self.p for c in f):
                raise FieldError("modulus coefficients must lie in [0, p)")
            if f[-1] != 1:
                raise FieldError("modulus must be monic")
            if not is_irreducible(f, self.p):
                raise FieldError("modulus is reducible over F_p")

    def to_dict(self) -> dict:
        return {"p": self.p, "h": self.h, "n": self.n,
                "modulus": list(self.modulus) if self.modulus else None,
                "element_cap": self.element_cap}

    @classmethod
    def from_dict(cls, data: dict) -> "FieldSpec":
        return cls(p=int(data["p"]), h=int(data.get("h", 1)), n=int(data["n"]),
                   modulus=data.get("modulus"),
                   element_cap=int(data.get("element_cap", DEFAULT_ELEMENT_CAP)))


class FieldCtx:
    """Arithmetic context for F_{q^{2n}}; immutable after construction.

    Attributes mirror the tower: ``p``, ``h``, ``q``, ``n``, ``m`` (= 2n),
    ``d`` (= h*m, the degree over F_p) and ``order`` (= q^m).
    """

    def __init__(self, spec: FieldSpec):
        spec.validate()
        self.spec = spec
        self.p, self.h, self.n = spec.p, spec.h, spec.n
        self.q = spec.q
        self.m = spec.m
        self.d = spec.degree
        self.order = spec.order
        self.modulus = spec.modulus or smallest_irreducible(self.p, self.d)
        self._f = list(self.modulus)
        self._pw = self.p ** np.arange(self.d, dtype=np.int64)
        self.minus_one = 1 if self.p == 2 else self.p - 1
        # discrete log of -1 (with respect to any primitive element)
        self.log_minus_one = 0 if self.p == 2 else (self.order - 1) // 2

        t_p = _poly_powmod([0, 1], self.p, self._f, self.p)
        self._frob_p = self._power_map_matrix(t_p)
        self._frob_q = np.eye(self.d, dtype=np.int64)
        for _ in range(self.h):
            self._frob_q = self._frob_q @ self._frob_p % self.p
        self._frob_q_powers = [np.eye(self.d, dtype=np.int64)]
        for _ in range(1, self.m):
            self._frob_q_powers.append(self._frob_q_powers[-1] @ self._frob_q % self.p)
        self._frob_p_powers = [np.eye(self.d, dtype=np.int64)]
        for _ in range(1, self.d):
            self._frob_p_powers.append(self._frob_p_powers[-1] @ self._frob_p % self.p)

        self.has_tables = self.order <= spec.element_cap
        self.exp = self.log = self.zech = None
        self.primitive = self._find_primitive()
        if self.has_tables:
            self._build_tables()

    # --- encoding ---

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.d):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, v) -> int:
        out = 0
        for c in reversed(list(v)):
            out = out * self.p + int(c) % self.p
        return out

    def to_digit_array(self, arr) -> np.ndarray:
        """Vectorised decode: integer array of shape (K,) -> digits of shape (K, d)."""
        arr = np.asarray(arr, dtype=np.int64)
        return (arr[..., None] // self._pw) % self.p

    def from_digit_array(self, digits) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) % self.p) @ self._pw

    def _power_map_matrix(self, t_img: list[int]) -> np.ndarray:
        # row i holds the digits of (t^i)^e where t^e = t_img
        rows = []
        cur = [1]
        for _ in range(self.d):
            rows.append(cur + [0] * (self.d - len(cur)))
            cur = _poly_mod(_poly_mul(cur, t_img, self.p), self._f, self.p)
        return np.array(rows, dtype=np.int64)

    # --- polynomial-basis arithmetic (always available; the log tables are checked against it) ---

    def poly_mul(self, a: int, b: int) -> int:
        prod = _poly_mod(_poly_mul(_trim(self.digits(a)), _trim(self.digits(b)), self.p),
                         self._f, self.p)
        return self.from_digits(prod)

    def poly_pow(self, a: int, e: int) -> int:
        r = _poly_powmod(_trim(self.digits(a)), e, self._f, self.p)
        return self.from_digits(r)

    def poly_add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        da, db = self.digits(a), self.digits(b)
        return self.from_digits([(x + y) % self.p for x, y in zip(da, db)])

    # --- scalar arithmetic ---

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.has_tables:
            if a == 0:
                return b
            if b == 0:
                return a
            la, lb = int(self.log[a]), int(self.log[b])
            z = int(self.zech[(lb - la) % (self.order - 1)])
            if z == self.order - 1:
                return 0
            return int(self.exp[(la + z) % (self.order - 1)])
        return self.poly_add(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return self.from_digits([(-c) % self.p for c in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            return int(self.exp[(int(self.log[a]) + int(self.log[b])) % (self.order - 1)])
        return self.poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.has_tables:
            return int(self.exp[(-int(self.log[a])) % (self.order - 1)])
        return self.poly_pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.has_tables:
            return int(self.exp[(int(self.log[a]) * e) % (self.order - 1)])
        return self.poly_pow(a, e % (self.order - 1))

    def scalar(self, k: int) -> int:
        """The prime-field element k mod p."""
        return k % self.p

    def sum(self, items) -> int:
        out = 0
        for x in items:
            out = self.add(out, x)
        return out

    def prod(self, items) -> int:
        out = 1
        for x in items:
            out = self.mul(out, x)
        return out

    # --- Frobenius, norm, trace ---

    def frob(self, x: int, k: int = 1) -> int:
        """x^{q^k}; k is reduced modulo m = 2n."""
        k %= self.m
        if k == 0 or x == 0:
            return x
        if self.has_tables:
            e = pow(self.q, k, self.order - 1)
            return int(self.exp[(int(self.log[x]) * e) % (self.order - 1)])
        v = np.array(self.digits(x), dtype=np.int64) @ self._frob_q_powers[k] % self.p
        return self.from_digits(v)

    def frob_p(self, x: int, e: int = 1) -> int:
        """x^{p^e}; e is reduced modulo the degree over F_p."""
        e %= self.d
        if e == 0 or x == 0:
            return x
        if self.has_tables:
            ex = pow(self.p, e, self.order - 1)
            return int(self.exp[(int(self.log[x]) * ex) % (self.order - 1)])
        v = np.array(self.digits(x), dtype=np.int64) @ self._frob_p_powers[e] % self.p
        return self.from_digits(v)

    def frob_power(self, x: int, exps) -> int:
        """x^{q^{e_1} + q^{e_2} + ...}: the product of the listed conjugates."""
        return self.prod(self.frob(x, e) for e in exps)

    def in_subfield(self, x: int, deg: int) -> bool:
        if deg <= 0:
            raise ValueError("subfield degree must be positive")
        return self.frob(x, deg) == x

    def _check_relative(self, x: int, from_deg: int, to_deg: int) -> None:
        if from_deg <= 0 or to_deg <= 0 or from_deg % to_deg:
            raise SubfieldError(f"{to_deg} does not divide {from_deg}")
        if self.m % from_deg:
            raise SubfieldError(f"F_q^{from_deg} is not a subfield of F_q^{self.m}")
        if not self.in_subfield(x, from_deg):
            raise SubfieldError(f"element {x} is not in F_q^{from_deg}")

    def norm(self, x: int, from_deg: int | None = None, to_deg: int | None = None) -> int:
        """Relative norm N_{q^from_deg / q^to_deg}; defaults to N_{q^{2n}/q^n}."""
        from_deg = self.m if from_deg is None else from_deg
        to_deg = self.n if to_deg is None else to_deg
        self._check_relative(x, from_deg, to_deg)
        return self.prod(self.frob(x, to_deg * i) for i in range(from_deg // to_deg))

    def trace(self, x: int, from_deg: int | None = None, to_deg: int = 1) -> int:
        """Relative trace Tr_{q^from_deg / q^to_deg}; defaults to Tr_{q^{2n}/q}."""
        from_deg = self.m if from_deg is None else from_deg
        self._check_relative(x, from_deg, to_deg)
        return self.sum(self.frob(x, to_deg * i) for i in range(from_deg // to_deg))

    def absolute_trace(self, x: int) -> int:
        """Tr_{q^{2n}/p}(x), as an integer in [0, p)."""
        return self.sum(self.frob_p(x, i) for i in range(self.d))

    # --- structure ---

    def _find_primitive(self) -> int:
        factors = prime_factors(self.order - 1)
        for g in range(2, self.order):
            if all(self.poly_pow(g, (self.order - 1) // r) != 1 for r in factors):
                return g
        return 1  # pragma: no cover - order 2 only, excluded by n >= 2

    def _build_tables(self) -> None:
        N, d, p = self.order, self.d, self.p
        total = N - 1
        block = max(1, math.isqrt(total))
        mg = self.mul_matrix(self.primitive, poly=True)
        first = np.zeros((block, d), dtype=np.int64)
        cur = np.zeros(d, dtype=np.int64)
        cur[0] = 1
        for i in range(block):
            first[i] = cur
            cur = cur @ mg % p
        step = self.mul_matrix(self.poly_pow(self.primitive, block), poly=True)
        chunks = []
        cur_block = first
        for _ in range(-(-total // block)):
            chunks.append(cur_block)
            cur_block = cur_block @ step % p
        digits = np.concatenate(chunks)[:total]
        exp = digits @ self._pw
        log = np.full(N, total, dtype=np.int64)
        log[exp] = np.arange(total, dtype=np.int64)
        if np.count_nonzero(log == total) != 1:
            raise FieldError("generator is not primitive")  # pragma: no cover
        d0 = exp % p
        zech = log[exp - d0 + (d0 + 1) % p]
        self.exp, self.log, self.zech = exp, log, zech

    def mul_matrix(self, a: int, poly: bool = False) -> np.ndarray:
        """d x d matrix over F_p of x -> a*x acting on row vectors of digits."""
        mul = self.poly_mul if poly else self.mul
        return np.array([self.digits(mul(a, self.p**i)) for i in range(self.d)], dtype=np.int64)

    def frob_matrix(self, k: int = 1) -> np.ndarray:
        return self._frob_q_powers[k % self.m]

    def frob_p_matrix(self, e: int = 1) -> np.ndarray:
        return self._frob_p_powers[e % self.d]

    @functools.cached_property
    def fq_basis(self) -> list[int]:
        """An F_q-basis of F_{q^{2n}}: the powers t^0..t^{m-1} of the modulus root."""
        return [self.p**i for i in range(self.m)]

    @functools.cached_property
    def fp_basis_of_fq(self) -> list[int]:
        """An F_p-basis of the subfield F_q."""
        omega = self.pow(self.primitive, (self.order - 1) // (self.q - 1))
        return [self.pow(omega, j) for j in range(self.h)]

    def subfield_elements(self, deg: int) -> list[int]:
        """All elements of F_{q^deg} (deg must divide 2n), sorted by encoding."""
        if self.m % deg:
            raise SubfieldError(f"{deg} does not divide {self.m}")
        size = self.q**deg
        zeta = self.pow(self.primitive, (self.order - 1) // (size - 1))
        out = [0]
        cur = 1
        for _ in range(size - 1):
            out.append(cur)
            cur = self.mul(cur, zeta)
        return sorted(out)

    def sqrt_of_minus_one(self) -> int | None:
        """A square root of -1 lying in F_{q^2}; ``None`` in characteristic 2.

        The root lies in F_q when q = 1 (mod 4) and in F_{q^2} \\ F_q otherwise.
        """
        if self.p == 2:
            return None
        zeta = self.pow(self.primitive, (self.order - 1) // (self.q**2 - 1))
        return self.pow(zeta, (self.q**2 - 1) // 4)

    def random_element(self, rng: np.random.Generator, nonzero: bool = False) -> int:
        lo = 1 if nonzero else 0
        return int(rng.integers(lo, self.order))

    # --- vectorised arithmetic on integer-encoded arrays ---

    def vadd(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        return self.from_digit_array(self.to_digit_array(a) + self.to_digit_array(b))

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return self.from_digit_array(-self.to_digit_array(a))

    def vmul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if self.has_tables:
            out = self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]
            return np.where((a == 0) | (b == 0), 0, out)
        return self.from_digit_array(self.digit_mul(self.to_digit_array(a), self.to_digit_array(b)))

    def vfrob(self, a, k: int = 1) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        k %= self.m
        if self.has_tables:
            e = pow(self.q, k, self.order - 1)
            out = self.exp[(self.log[a] * e) % (self.order - 1)]
            return np.where(a == 0, 0, out)
        return self.from_digit_array(self.to_digit_array(a) @ self._frob_q_powers[k] % self.p)

    @functools.cached_property
    def _reduction_matrix(self) -> np.ndarray:
        # row k: digits of t^k mod the modulus, k < 2d - 1
        rows = []
        for k in range(2 * self.d - 1):
            r = _poly_mod([0] * k + [1], self._f, self.p)
            rows.append(r + [0] * (self.d - len(r)))
        return np.array(rows, dtype=np.float64)

    def digit_mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Product of digit arrays of shape (K, d) without log tables."""
        K, d = A.shape
        conv = np.zeros((K, 2 * d - 1), dtype=np.float64)
        Bf = B.astype(np.float64)
        for i in range(d):
            conv[:, i:i + d] += A[:, i, None] * Bf
        conv %= self.p
        return (conv @ self._reduction_matrix % self.p).astype(np.int64)

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, h={self.h}, n={self.n}, q={self.q}, order={self.order})"


@functools.lru_cache(maxsize=32)
def make_field(spec: FieldSpec) -> FieldCtx:
    """Build (and cache) the arithmetic context for ``spec``."""
    return FieldCtx(spec)


def field(p: int, n: int, h: int = 1, **kwargs) -> FieldCtx:
    """Shorthand for ``make_field(FieldSpec(p, h, n, ...))``."""
    return make_field(FieldSpec(p=p, h=h, n=n, **kwargs))


def frobenius_q(ctx: FieldCtx, x: int, k: int) -> int:
    return ctx.frob(x, k)


def norm_rel(ctx: FieldCtx, x: int, from_deg: int, to_deg: int) -> int:
    return ctx.norm(x, from_deg, to_deg)


def trace_rel(ctx: FieldCtx, x: int, from_deg: int, to_deg: int) -> int:
    return ctx.trace(x, from_deg, to_deg)


def in_subfield(ctx: FieldCtx, x: int, deg: int) -> bool:
    return ctx.in_subfield(x, deg)


def sqrt_of_minus_one(ctx: FieldCtx) -> int | None:
    return ctx.sqrt_of_minus_one()
