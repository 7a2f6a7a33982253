"""Sparse multivariate polynomials and exact integration of monomials over spheres.

Coefficients are double-precision complex.  Exponent vectors are tuples of
non-negative ints of fixed length ``dim``.  Terms with zero coefficient are
never stored.  All operations are pure; instances are treated as immutable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

__all__ = [
    "MultiPoly",
    "UniPoly",
    "gamma_half_integer",
    "sphere_integral_monomial",
    "sphere_inner_product",
    "grlex_key",
    "parse_poly",
]

_ZERO_TOL = 0.0  # exact-zero dropping only; numerical cleanup is the caller's job


def grlex_key(alpha):
    """Graded-lexicographic sort key for an exponent tuple."""
    return (sum(alpha), tuple(-a for a in alpha))


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial in ``dim`` variables with complex coefficients."""

    dim: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        cleaned = {}
        for alpha, c in self.terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.dim:
                raise ValueError(f"exponent {alpha} has wrong length for dim {self.dim}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            c = complex(c)
            if c != 0:
                cleaned[alpha] = cleaned.get(alpha, 0) + c
        object.__setattr__(self, "terms", {a: c for a, c in cleaned.items() if c != 0})

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(dim):
        return MultiPoly(dim, {})

    @staticmethod
    def constant(dim, c):
        c = complex(c)
        return MultiPoly(dim, {(0,) * dim: c} if c != 0 else {})

    @staticmethod
    def variable(dim, i):
        """The monomial x_{i+1} (0-based index i)."""
        alpha = tuple(1 if j == i else 0 for j in range(dim))
        return MultiPoly(dim, {alpha: 1.0})

    @staticmethod
    def monomial(alpha, coeff=1.0):
        return MultiPoly(len(alpha), {tuple(alpha): coeff})

    # -- queries -----------------------------------------------------------

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(a) for a in self.terms)

    def is_zero(self):
        return not self.terms

    def coeff(self, alpha):
        return self.terms.get(tuple(alpha), 0j)

    def max_abs_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def sorted_terms(self):
        """Terms in canonical graded-lex order (deterministic serialization)."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return MultiPoly(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.dim, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return MultiPoly(self.dim, {a: c * other for a, c in self.terms.items()})
        if other.dim != self.dim:
            raise ValueError("dimension mismatch in multiply")
        out = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, 0) + ca * cb
        return MultiPoly(self.dim, out)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.dim != self.dim:
                raise ValueError("dimension mismatch")
            return other
        return MultiPoly.constant(self.dim, other)

    def conjugate(self):
        """Coefficientwise complex conjugate (an involution)."""
        return MultiPoly(self.dim, {a: c.conjugate() for a, c in self.terms.items()})

    def scale(self, s):
        return self * s

    def __call__(self, point):
        if len(point) != self.dim:
            raise ValueError("point has wrong dimension")
        total = 0j
        for alpha, c in self.terms.items():
            v = c
            for x, a in zip(point, alpha):
                if a:
                    v *= x ** a
            total += v
        return total

    def homogeneous_parts(self):
        """Split into homogeneous pieces: returns [P_0, ..., P_deg], sum = self.

        The zero polynomial yields an empty list.
        """
        if not self.terms:
            return []
        deg = self.degree
        parts = [dict() for _ in range(deg + 1)]
        for a, c in self.terms.items():
            parts[sum(a)][a] = c
        return [MultiPoly(self.dim, p) for p in parts]

    def laplacian(self):
        """Exact polynomial Laplacian."""
        out = {}
        for alpha, c in self.terms.items():
            for i, a in enumerate(alpha):
                if a >= 2:
                    beta = list(alpha)
                    beta[i] = a - 2
                    key = tuple(beta)
                    out[key] = out.get(key, 0) + c * a * (a - 1)
        return MultiPoly(self.dim, out)

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        bits = []
        for a, c in self.sorted_terms():
            mono = "*".join(f"x{i+1}^{e}" for i, e in enumerate(a) if e)
            bits.append(f"({c}){'*' + mono if mono else ''}")
        return " + ".join(bits)


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial c_0 + c_1 t + ... with complex coefficients."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = [complex(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __call__(self, t):
        total = 0j
        for c in reversed(self.coeffs):
            total = total * t + c
        return total

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return UniPoly(tuple(c * other for c in self.coeffs))
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1) if self.coeffs and other.coeffs else []
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(tuple(out))

    __rmul__ = __mul__

    def conjugate(self):
        return UniPoly(tuple(c.conjugate() for c in self.coeffs))

    def __repr__(self):
        return f"UniPoly{self.coeffs}"


# ---------------------------------------------------------------------------
# Exact sphere integrals
# ---------------------------------------------------------------------------

_SQRT_PI = math.sqrt(math.pi)


def gamma_half_integer(twice_x):
    """Gamma(twice_x / 2) for a positive integer twice_x, in closed form.

    Half-integer arguments use Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!),
    integer arguments use the factorial.  Only these cases arise in the
    sphere-integral formula, and the closed forms keep it at full precision.
    """
    if twice_x <= 0:
        raise ValueError("argument must be positive")
    if twice_x % 2 == 0:
        return float(math.factorial(twice_x // 2 - 1))
    n = (twice_x - 1) // 2
    return math.factorial(2 * n) * _SQRT_PI / (4 ** n * math.factorial(n))


def sphere_integral_monomial(alpha, d=None):
    """Exact integral of theta^alpha over the unit sphere S^{d-1}, d >= 2.

    Zero when any exponent is odd; otherwise
    2 * prod Gamma((a_i+1)/2) / Gamma((|a|+d)/2).
    """
    alpha = tuple(int(a) for a in alpha)
    if d is None:
        d = len(alpha)
    if d != len(alpha):
        raise ValueError("exponent length must equal dimension")
    if d < 2:
        raise ValueError("use the two-point rule for d = 1")
    if any(a % 2 for a in alpha):
        return 0.0
    num = 1.0
    for a in alpha:
        num *= gamma_half_integer(a + 1)
    return 2.0 * num / gamma_half_integer(sum(alpha) + d)


def sphere_inner_product(f, g):
    """<f, g> = integral over S^{d-1} of f * conj(g); exact on polynomials.

    For d = 1 the "sphere" is {-1, +1} with weight 1/2 at each point.
    """
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    d = f.dim
    if d == 1:
        gc = g.conjugate()
        return 0.5 * f((1.0,)) * gc((1.0,)) + 0.5 * f((-1.0,)) * gc((-1.0,))
    # extended-precision accumulation: basis coefficients reach ~1e2 at high
    # degree, and plain double products lose ~1e-12 of cancellation here
    import numpy as np

    re_acc = np.longdouble(0.0)
    im_acc = np.longdouble(0.0)
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            key = tuple(x + y for x, y in zip(a, b))
            w = sphere_integral_monomial(key, d)
            if w == 0.0:
                continue
            wl = np.longdouble(w)
            ar, ai = np.longdouble(ca.real), np.longdouble(ca.imag)
            br, bi = np.longdouble(cb.real), np.longdouble(-cb.imag)
            re_acc += (ar * br - ai * bi) * wl
            im_acc += (ar * bi + ai * br) * wl
    return complex(float(re_acc), float(im_acc))


# ---------------------------------------------------------------------------
# Text format:  sum of terms  coeff*x1^a1*...*xd^ad, complex coeffs as a+bi
# ---------------------------------------------------------------------------

_TERM_SPLIT = re.compile(r"(?<![eE(^*+-])([+-])")
_VAR = re.compile(r"^x(\d+)(?:\s*(?:\^|\*\*)\s*(\d+))?$")


def parse_poly(text, dim):
    """Parse the CLI polynomial format into a MultiPoly.

    Terms look like ``2*x1^3*x2``, ``(1+2i)*x1``, ``-4``, joined by + or -.
    ``**`` is accepted as an exponent synonym; whitespace is ignored.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    s = s.replace("**", "^")
    terms = {}
    for piece in _split_terms(s):
        coeff, alpha = _parse_term(piece, dim)
        alpha = tuple(alpha)
        terms[alpha] = terms.get(alpha, 0) + coeff
    return MultiPoly(dim, terms)


def _split_terms(s):
    pieces = []
    depth = 0
    cur = ""
    prev = ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and prev not in "eE^*/(+-":
            pieces.append(cur)
            cur = ch
        else:
            cur += ch
        if not ch.isspace():
            prev = ch
    if cur.strip():
        pieces.append(cur)
    return pieces


def _parse_term(piece, dim):
    piece = piece.strip()
    sign = 1.0
    while piece and piece[0] in "+-":
        if piece[0] == "-":
            sign = -sign
        piece = piece[1:].strip()
    if not piece:
        raise ValueError("dangling sign in polynomial text")
    coeff = complex(sign)
    alpha = [0] * dim
    for factor in (f.strip() for f in piece.split("*")):
        if not factor:
            raise ValueError(f"empty factor in term {piece!r}")
        m = _VAR.match(factor)
        if m:
            idx = int(m.group(1))
            if not 1 <= idx <= dim:
                raise ValueError(f"variable x{idx} out of range for dimension {dim}")
            alpha[idx - 1] += int(m.group(2) or 1)
        else:
            coeff *= _parse_complex(factor)
    return coeff, alpha


def _parse_complex(tok):
    tok = tok.strip()
    if tok.startswith("(") and tok.endswith(")"):
        tok = tok[1:-1].strip()
    tok = tok.replace(" ", "")
    try:
        return complex(tok.replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse coefficient {tok!r}") from None
