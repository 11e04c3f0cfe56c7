"""Arithmetic in GF(p^e), with elements packed as integers.

An element is an integer in [0, q) whose base-p digits, least significant
first, are the coefficients of a polynomial over GF(p): digit i is the
coefficient of x^i.  Extension-field arithmetic is reduction modulo a monic
irreducible polynomial of degree e, stored the same way as e+1 digits.

Fields with q <= 2**16 carry exp/log tables over a fixed generator; every
extension field must fit that bound.  Prime fields of any size are allowed
(plain modular arithmetic, no tables) -- they back the very-large-field
preconditioning route, where only the order matters.  Python integers make
the wide intermediate products exact without any special handling.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    EmptySubset,
    FieldTooLarge,
    NotPrime,
    ReducibleModulus,
    ValueOutOfRange,
    ZeroInverse,
)

TABLE_LIMIT = 1 << 16

# Deterministic Miller-Rabin witness set, valid for n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == small:
            return True
        if n % small == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _int_nth_root(n: int, k: int) -> int:
    """Floor of the k-th root of n."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    x = int(round(n ** (1.0 / k))) + 1
    while x ** k > n:
        x -= 1
    return x


def prime_power(q: int) -> tuple[int, int] | None:
    """Decompose q as p**e with p prime, or return None."""
    if q < 2:
        return None
    if is_prime(q):
        return q, 1
    for e in range(2, q.bit_length() + 1):
        r = _int_nth_root(q, e)
        if r >= 2 and r ** e == q and is_prime(r):
            return r, e
    return None


def largest_prime_power_leq(x: int) -> int:
    """Largest prime power <= x (x >= 2)."""
    if x < 2:
        raise ValueError("no prime power below 2")
    for q in range(x, 1, -1):
        if prime_power(q) is not None:
            return q
    raise AssertionError("unreachable")


def _factor_small(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (n stays desk-sized here)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p), as little-endian digit tuples ---------------------

def _poly_trim(a):
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_mulmod(a, b, f, p):
    """(a*b) mod f over GF(p); f monic."""
    n, m = len(a), len(b)
    prod = [0] * (n + m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(prod, f, p)


def _poly_mod(a, f, p):
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return tuple(a[:df]) + (0,) * (df - len(a[:df]))


def _poly_powmod(a, k, f, p):
    result = (1,) + (0,) * (len(f) - 2)
    base = _poly_mod(a, f, p)
    while k:
        if k & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        k >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim(tuple(x % p for x in a)), _poly_trim(tuple(x % p for x in b))
    while any(b):
        lead_inv = pow(b[-1], p - 2, p)
        monic_b = tuple(c * lead_inv % p for c in b)
        a = _poly_trim(_poly_divrem(a, monic_b, p))
        a, b = b, a
    return _poly_trim(a)


def _poly_divrem(a, b, p):
    """Remainder of a by monic b over GF(p)."""
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        if a[-1] % p == 0:
            a.pop()
            continue
        c = a[-1] % p
        shift = len(a) - 1 - db
        for j in range(db + 1):
            a[shift + j] = (a[shift + j] - c * b[j]) % p
        a.pop()
    return tuple(a) if a else (0,)


def _is_irreducible(coeffs, p) -> bool:
    """Irreducibility of a monic polynomial over GF(p).

    Degree <= 4 is settled by exhaustive search for low-degree monic factors;
    beyond that the derivative-free criterion via x^(p^m) residues is used.
    """
    e = len(coeffs) - 1
    if e == 1:
        return True
    if any(c % p != c for c in coeffs):
        raise ValueError("coefficients must be reduced mod p")
    if coeffs[0] == 0:  # divisible by x
        return False
    if e <= 4:
        for d in range(1, e // 2 + 1):
            for v in range(p ** d):
                cand = _digits(v, p, d) + (1,)
                rem = _poly_divrem(coeffs, cand, p)
                if not any(rem):
                    return False
        return True
    x = (0, 1)
    xq = _poly_powmod(x, p ** e, coeffs, p)
    if _poly_trim(xq) != _poly_trim(x):
        return False
    for r in _factor_small(e):
        xm = _poly_powmod(x, p ** (e // r), coeffs, p)
        diff = tuple((a - b) % p for a, b in zip(xm, x + (0,) * (len(xm) - 2)))
        if not any(diff):
            return False  # x^(p^(e/r)) == x, so f splits over a subfield
        if _poly_trim(_poly_gcd(diff, coeffs, p)) != (1,):
            return False
    return True


def _digits(value: int, p: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        value, d = divmod(value, p)
        out.append(d)
    return tuple(out)


def _undigits(digits, p: int) -> int:
    v = 0
    for d in reversed(digits):
        v = v * p + d
    return v


class Field:
    """GF(p^e) with integer-packed elements.

    Construction validates primality of p and irreducibility of the modulus;
    when the modulus is omitted the lexicographically least monic irreducible
    of degree e is selected, so identical (p, e) always give the same field.
    """

    __slots__ = ("p", "e", "q", "modulus", "generator", "exp_table", "log_table",
                 "_xpow_cache")

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not isinstance(p, int) or not is_prime(p):
            raise NotPrime(f"p = {p} is not prime")
        if not isinstance(e, int) or e < 1:
            raise ValueError(f"extension degree must be a positive integer, got {e}")
        q = p ** e
        if e > 1 and q > TABLE_LIMIT:
            raise FieldTooLarge(f"GF({p}^{e}) exceeds the table bound 2^16")
        self.p = p
        self.e = e
        self.q = q
        self._xpow_cache = None
        if e == 1:
            self.modulus = None  # unused for prime fields
        elif modulus is not None:
            mod = tuple(int(c) for c in modulus)
            if len(mod) != e + 1 or mod[-1] != 1:
                raise ReducibleModulus(f"modulus must be monic of degree {e}")
            if any(not 0 <= c < p for c in mod):
                raise ReducibleModulus("modulus coefficients must lie in [0, p)")
            if not _is_irreducible(mod, p):
                raise ReducibleModulus(f"{mod} is reducible over GF({p})")
            self.modulus = mod
        else:
            self.modulus = self._default_modulus()
        if q <= TABLE_LIMIT:
            self._build_tables()
        else:
            self.generator = None
            self.exp_table = None
            self.log_table = None

    def _default_modulus(self):
        p, e = self.p, self.e
        for v in range(p ** e):
            cand = _digits(v, p, e) + (1,)
            if _is_irreducible(cand, p):
                return cand
        raise AssertionError("no irreducible polynomial found")  # impossible

    # -- raw polynomial arithmetic used to bootstrap the tables ---------------

    def _mul_raw(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        if e == 1:
            return a * b % p
        if p == 2:
            # carry-free multiply on bit-packed polynomials
            mod_int = _undigits(self.modulus, 2)
            prod = 0
            x = a
            while b:
                if b & 1:
                    prod ^= x
                x <<= 1
                b >>= 1
            top = prod.bit_length()
            while top > e:
                prod ^= mod_int << (top - 1 - e)
                top = prod.bit_length()
            return prod
        da = _digits(a, p, e)
        db = _digits(b, p, e)
        return _undigits(_poly_mulmod(da, db, self.modulus, p), p)

    def _pow_raw(self, a: int, k: int) -> int:
        result = 1
        base = a
        while k:
            if k & 1:
                result = self._mul_raw(result, base)
            base = self._mul_raw(base, base)
            k >>= 1
        return result

    def _build_tables(self):
        q = self.q
        factors = _factor_small(q - 1)
        gen = None
        for cand in range(2, q):
            if all(self._pow_raw(cand, (q - 1) // r) != 1 for r in factors):
                gen = cand
                break
        if gen is None:  # q == 2: trivial group
            gen = 1
        self.generator = gen
        exp = np.zeros(max(q - 1, 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = 1
        for i in range(q - 1):
            exp[i] = cur
            log[cur] = i
            cur = self._mul_raw(cur, gen)
        if cur != 1:
            raise AssertionError("generator order mismatch")
        log[0] = -1
        self.exp_table = exp
        self.log_table = log

    # -- scalar element operations ---------------------------------------------

    def check(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.q:
            raise ValueOutOfRange(f"{a!r} is not an element of {self}")
        return int(a)

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        out, shift = 0, 1
        for _ in range(self.e):
            out += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        out, shift = 0, 1
        for _ in range(self.e):
            out += ((-a) % p) * shift
            a //= p
            shift *= p
        return out

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        la = self.log_table[a]
        lb = self.log_table[b]
        return int(self.exp_table[(la + lb) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse(f"0 has no inverse in {self}")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return int(self.exp_table[(-self.log_table[a]) % (self.q - 1)])

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.e == 1:
            return pow(a, k, self.p)
        if a == 0:
            return 0 if k else 1
        return int(self.exp_table[(self.log_table[a] * k) % (self.q - 1)])

    # -- vectorized helpers over numpy arrays of element values ------------------

    def add_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        aa, bb, shift = a.astype(np.int64), b.astype(np.int64), 1
        for _ in range(self.e):
            out += ((aa + bb) % p) * shift
            aa //= p
            bb //= p
            shift *= p
        return out

    def mul_scalar_vec(self, f: int, values: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return values * f % self.p
        out = np.zeros_like(values, dtype=np.int64)
        if f == 0:
            return out
        lf = int(self.log_table[f])
        mask = values != 0
        out[mask] = self.exp_table[(self.log_table[values[mask]] + lf) % (self.q - 1)]
        return out

    def digits_vec(self, values: np.ndarray) -> np.ndarray:
        """Shape (e, ...) array of base-p digit planes."""
        p = self.p
        planes = np.zeros((self.e,) + values.shape, dtype=np.int64)
        v = values.astype(np.int64)
        for i in range(self.e):
            planes[i] = v % p
            v //= p
        return planes

    def undigits_vec(self, planes: np.ndarray) -> np.ndarray:
        out = np.zeros(planes.shape[1:], dtype=np.int64)
        shift = 1
        for i in range(self.e):
            out += (planes[i] % self.p) * shift
            shift *= self.p
        return out

    def xpow_digits(self, s: int) -> tuple[int, ...]:
        """Digits of x^s reduced modulo the field modulus (s <= 2e-2)."""
        if self._xpow_cache is None:
            cache = []
            v = 1
            for _ in range(2 * self.e - 1):
                cache.append(_digits(v, self.p, self.e))
                v = self._mul_raw(v, self.p if self.e > 1 else 1)
            self._xpow_cache = cache
        return self._xpow_cache[s]

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus))

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e})"


def make_field(p: int, e: int = 1, modulus=None) -> Field:
    """Construct and validate a field description (see Field)."""
    return Field(p, e, modulus)


def field_from_order(q: int) -> Field:
    from .errors import NotPrimePower

    pe = prime_power(q)
    if pe is None:
        raise NotPrimePower(f"{q} is not a prime power")
    return Field(*pe)


def field_arith(field: Field, op: str, a: int, b: int | None = None) -> int:
    """Dispatch a single arithmetic operation by name."""
    a = field.check(a)
    if op in ("add", "sub", "mul"):
        if b is None:
            raise ValueError(f"{op} needs two operands")
        b = field.check(b)
        return getattr(field, op)(a, b)
    if op == "neg":
        return field.neg(a)
    if op == "inv":
        return field.inv(a)
    raise ValueError(f"unknown op {op!r}")


def sample(field: Field, rng: np.random.Generator, mode: str = "uniform",
           subset=None) -> int:
    """Draw one element: uniform, uniform over nonzeros, or uniform over a subset.

    Bounded draws go through the generator's unbiased integer routine, so no
    modulo bias is introduced for any field order.
    """
    if mode == "uniform":
        return int(rng.integers(0, field.q))
    if mode == "uniform_nonzero":
        return int(rng.integers(1, field.q))
    if mode == "subset":
        if subset is None or len(subset) == 0:
            raise EmptySubset("subset mode needs a non-empty subset")
        vals = [field.check(v) for v in subset]
        return vals[int(rng.integers(0, len(vals)))]
    raise ValueError(f"unknown sampling mode {mode!r}")


def sample_vec(field: Field, rng: np.random.Generator, size: int,
               mode: str = "uniform") -> np.ndarray:
    if mode == "uniform":
        return rng.integers(0, field.q, size=size, dtype=np.int64)
    if mode == "uniform_nonzero":
        return rng.integers(1, field.q, size=size, dtype=np.int64)
    raise ValueError(f"unknown sampling mode {mode!r}")
