"""Univariate polynomial arithmetic and real root isolation.

Coefficients are stored ascending by power, so ``Polynomial((c0, c1, c2))``
is c0 + c1*x + c2*x**2.  Everything here runs on plain floats.  Degrees in
this package stay small (at most five), which keeps the Sturm-sequence
machinery below both exact and fast.
"""

from __future__ import annotations

from dataclasses import dataclass

# Relative threshold below which a remainder in the Sturm chain is treated
# as identically zero.  Scaled by the magnitude of the operands.
_EPS = 1e-12


@dataclass(frozen=True)
class Polynomial:
    """Immutable real polynomial, coefficients ascending by power."""

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("polynomial needs at least one coefficient")
        object.__setattr__(
            self, "coefficients", tuple(float(c) for c in self.coefficients)
        )

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls((0.0,))

    @classmethod
    def constant(cls, value: float) -> "Polynomial":
        return cls((float(value),))

    @property
    def degree(self) -> int:
        """Effective degree; -1 for the zero polynomial.

        Trailing stored coefficients may be exact zeros, so the tuple
        length only bounds the degree.
        """
        for k in range(len(self.coefficients) - 1, -1, -1):
            if self.coefficients[k] != 0.0:
                return k
        return -1

    def is_zero(self) -> bool:
        return self.degree < 0

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coefficients))

    def __add__(self, other: "Polynomial | float") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0.0,) * (n - len(self.coefficients))
        b = other.coefficients + (0.0,) * (n - len(other.coefficients))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __sub__(self, other: "Polynomial | float") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other: float) -> "Polynomial":
        return Polynomial.constant(other) + (-self)

    def __mul__(self, other: "Polynomial | float") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial(tuple(float(other) * c for c in self.coefficients))
        out = [0.0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0.0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> "Polynomial":
        if len(self.coefficients) == 1:
            return Polynomial.zero()
        return Polynomial(
            tuple(k * c for k, c in enumerate(self.coefficients) if k > 0)
        )

    def antiderivative(self, constant: float = 0.0) -> "Polynomial":
        out = [float(constant)]
        out.extend(c / (k + 1) for k, c in enumerate(self.coefficients))
        return Polynomial(tuple(out))

    def integrate(self, a: float, b: float) -> float:
        """Definite integral over [a, b] from the antiderivative."""
        anti = self.antiderivative()
        return anti(b) - anti(a)

    def trimmed(self) -> "Polynomial":
        d = self.degree
        if d < 0:
            return Polynomial.zero()
        return Polynomial(self.coefficients[: d + 1])

    def scale(self) -> float:
        return max(abs(c) for c in self.coefficients)

    def format_descending(self, var: str = "t", digits: int = 6) -> str:
        """Human-readable form, highest power first, e.g. '-0.06 t^4 + ...'."""
        d = self.degree
        if d < 0:
            return "0"
        parts: list[str] = []
        for k in range(d, -1, -1):
            c = self.coefficients[k]
            if c == 0.0 and d > 0:
                continue
            mag = f"{abs(c):.{digits}g}"
            if k == 0:
                term = mag
            elif k == 1:
                term = f"{mag} {var}"
            else:
                term = f"{mag} {var}^{k}"
            if not parts:
                parts.append(term if c >= 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c >= 0 else f"- {term}")
        return " ".join(parts)


def divmod_poly(f: Polynomial, g: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Quotient and remainder of f by g (float long division)."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    f = f.trimmed()
    g = g.trimmed()
    if f.degree < g.degree:
        return Polynomial.zero(), f
    rem = list(f.coefficients)
    dg = g.degree
    lead = g.coefficients[dg]
    quot = [0.0] * (f.degree - dg + 1)
    for k in range(f.degree - dg, -1, -1):
        q = rem[k + dg] / lead
        quot[k] = q
        for j in range(dg + 1):
            rem[k + j] -= q * g.coefficients[j]
    r = Polynomial(tuple(rem[:dg]) if dg > 0 else (0.0,))
    return Polynomial(tuple(quot)), r


def _cleanup(p: Polynomial, scale: float) -> Polynomial:
    """Zero out coefficients that are noise relative to the given scale."""
    tol = _EPS * scale
    return Polynomial(
        tuple(0.0 if abs(c) < tol else c for c in p.coefficients)
    ).trimmed()


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    """Sturm chain of p, divided through by any nontrivial gcd(p, p').

    The returned chain belongs to the square-free part of p, so repeated
    roots are counted once.
    """
    p = p.trimmed()
    if p.degree <= 0:
        return [p]
    scale = p.scale()
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        _, r = divmod_poly(chain[-2], chain[-1])
        r = _cleanup(r, scale)
        if r.is_zero():
            break
        chain.append(-r)
    last = chain[-1]
    if last.degree > 0:
        # Nontrivial gcd: p has repeated roots.  Restart on p / gcd.
        reduced, _ = divmod_poly(p, last)
        return sturm_sequence(reduced)
    return chain


def _variations(chain: list[Polynomial], x: float) -> int:
    signs = []
    for q in chain:
        v = q(x)
        if v != 0.0:
            signs.append(v > 0.0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(chain: list[Polynomial], a: float, b: float) -> int:
    """Distinct real roots in the half-open interval (a, b]."""
    if b < a:
        raise ValueError("interval endpoints out of order")
    return _variations(chain, a) - _variations(chain, b)


def isolate_roots(
    p: Polynomial, a: float, b: float, max_depth: int = 80
) -> list[tuple[float, float]]:
    """Brackets (lo, hi], each containing exactly one distinct root of p."""
    chain = sturm_sequence(p)
    sq = chain[0]
    if sq.degree <= 0:
        return []
    out: list[tuple[float, float]] = []
    stack = [(a, b, count_roots(chain, a, b), 0)]
    while stack:
        lo, hi, n, depth = stack.pop()
        if n == 0:
            continue
        if n == 1 or depth >= max_depth:
            out.append((lo, hi))
            continue
        mid = 0.5 * (lo + hi)
        stack.append((lo, mid, count_roots(chain, lo, mid), depth + 1))
        stack.append((mid, hi, count_roots(chain, mid, hi), depth + 1))
    out.sort()
    return out


def bisect_root(
    p: Polynomial, lo: float, hi: float, tol: float = 1e-10
) -> float:
    """Refine a sign-change bracket by bisection to width tol."""
    flo, fhi = p(lo), p(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError("bracket does not straddle a sign change")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = p(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_roots(
    p: Polynomial, a: float, b: float, tol: float = 1e-10
) -> tuple[float, ...]:
    """Distinct real roots of p in the closed interval [a, b], sorted.

    Sturm counting is half-open at the left end, so the interval is padded
    slightly to catch a root sitting exactly on a; results are clamped
    back into [a, b].
    """
    p = p.trimmed()
    if p.degree <= 0:
        return ()
    pad = 1e-9 * (1.0 + abs(a)) + 1e-9 * (b - a)
    brackets = isolate_roots(p, a - pad, b)
    sq = sturm_sequence(p)[0]
    roots = []
    for lo, hi in brackets:
        roots.append(min(max(bisect_root(sq, lo, hi, tol), a), b))
    return tuple(sorted(roots))
