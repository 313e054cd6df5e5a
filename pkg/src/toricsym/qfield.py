"""Exact arithmetic in Q and quadratic extensions Q(sqrt(d)).

Elements are a + b*sqrt(d) with Fraction coefficients.  Field descriptors
declare, rather than decide, whether -1 is a sum of two squares; where the
declaration is negative the table carries an explicit witness pair that is
verified exactly.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import ParseError, PreconditionError

RationalLike = int | Fraction


def _is_squarefree(d: int) -> bool:
    n = abs(d)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


@dataclass(frozen=True, eq=False)
class QuadElement:
    """a + b*sqrt(d) with exact rational a, b.

    ``d`` is a squarefree integer != 0, 1, or None for a plain rational
    (then b = 0).  Elements with b = 0 compare equal across fields.
    """

    d: int | None
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.d is not None:
            if self.d in (0, 1) or not _is_squarefree(self.d):
                raise ValueError(f"d must be squarefree and != 0, 1, got {self.d}")
        elif self.b != 0:
            raise ValueError("rational elements must have b = 0")

    @classmethod
    def rational(cls, x: RationalLike) -> "QuadElement":
        return cls(None, Fraction(x), Fraction(0))

    @classmethod
    def sqrt_of(cls, d: int) -> "QuadElement":
        return cls(d, Fraction(0), Fraction(1))

    def _key(self):
        return (self.a, self.b, self.d) if self.b else (self.a, Fraction(0), None)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadElement.rational(other)
        if not isinstance(other, QuadElement):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _join(self, other: "QuadElement | RationalLike") -> tuple["QuadElement", "QuadElement", int | None]:
        if isinstance(other, (int, Fraction)):
            other = QuadElement.rational(other)
        if not isinstance(other, QuadElement):
            raise TypeError(f"cannot combine QuadElement with {type(other).__name__}")
        if self.d is None:
            d = other.d
        elif other.d is None or other.d == self.d:
            d = self.d
        else:
            raise PreconditionError(
                "mixed-radicands",
                f"cannot mix sqrt({self.d}) with sqrt({other.d})",
            )
        return self, other, d

    def __add__(self, other):
        x, y, d = self._join(other)
        return QuadElement(d, x.a + y.a, x.b + y.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(self.d, -self.a, -self.b)

    def __sub__(self, other):
        x, y, d = self._join(other)
        return x + (-y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        x, y, d = self._join(other)
        if d is None:
            return QuadElement(None, x.a * y.a, Fraction(0))
        return QuadElement(d, x.a * y.a + d * x.b * y.b, x.a * y.b + x.b * y.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm a^2 - d b^2 (just a^2 for rationals)."""
        return self.a * self.a - (self.d or 0) * self.b * self.b

    def conjugate(self) -> "QuadElement":
        return QuadElement(self.d, self.a, -self.b)

    def inverse(self) -> "QuadElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        conj = self.conjugate()
        return QuadElement(self.d, conj.a / n, conj.b / n)

    def __truediv__(self, other):
        x, y, _ = self._join(other)
        return x * y.inverse()

    def __rtruediv__(self, other):
        return QuadElement.rational(other) / self if isinstance(other, (int, Fraction)) else NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadElement.rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        tail = f"sqrt({self.d})" if abs(self.b) == 1 else f"{abs(self.b)}*sqrt({self.d})"
        sign = "-" if self.b < 0 else "+"
        if self.a == 0:
            return tail if self.b > 0 else f"-{tail}"
        return f"{self.a} {sign} {tail}"


_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub, ast.Mult,
    ast.Div, ast.Pow, ast.USub, ast.UAdd, ast.Constant, ast.Name, ast.Load,
)


def quad_eval(expr: str, variables: Mapping[str, QuadElement] | None = None) -> QuadElement:
    """Evaluate an arithmetic expression over QuadElements, exactly.

    Supports +, -, *, /, integer ** and integer literals; names resolve in
    ``variables``.  Division by zero and mixed radicands raise.
    """
    env = dict(variables or {})
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"bad expression: {exc}") from exc

    def ev(node: ast.AST):
        if not isinstance(node, _ALLOWED_NODES):
            raise ParseError(f"unsupported syntax: {ast.dump(node)[:40]}")
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ParseError("only integer literals are allowed")
            return QuadElement.rational(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ParseError(f"unknown name {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp):
            val = ev(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        assert isinstance(node, ast.BinOp)
        lhs, rhs = ev(node.left), ev(node.right)
        if isinstance(node.op, ast.Add):
            return lhs + rhs
        if isinstance(node.op, ast.Sub):
            return lhs - rhs
        if isinstance(node.op, ast.Mult):
            return lhs * rhs
        if isinstance(node.op, ast.Div):
            return lhs / rhs
        if not (rhs.is_rational and rhs.a.denominator == 1):
            raise ParseError("exponent must be an integer")
        return lhs ** int(rhs.a)

    return ev(tree)


@dataclass(frozen=True)
class FieldDescriptor:
    """Declared arithmetic profile of a characteristic-zero field.

    ``star_clause2`` declares that -1 is NOT a sum of two squares in the
    field; ``star_clause3`` declares the sqrt(5) clause.  When clause 2
    fails, ``witness`` holds a pair (a, b) with a^2 + b^2 = -1.
    """

    name: str
    kind: str  # "rationals" | "reals" | "quadratic"
    d: int | None = None
    star_clause2: bool = True
    star_clause3: bool = True
    witness: tuple[QuadElement, QuadElement] | None = None

    def __post_init__(self):
        if self.kind not in ("rationals", "reals", "quadratic"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "quadratic":
            if self.d is None:
                raise ValueError("quadratic descriptor needs d")
        elif self.d is not None:
            raise ValueError(f"{self.kind} descriptor must not carry d")
        if self.kind in ("rationals", "reals") and not self.star_clause2:
            raise ValueError(f"-1 is not a sum of two squares in {self.name}")
        if self.witness is not None:
            for w in self.witness:
                if w.d is not None and w.d != self.d:
                    raise ValueError("witness lives in a different field")

    @property
    def char_zero(self) -> bool:
        return True


def verify_negative_one_witness(descriptor: FieldDescriptor) -> bool:
    """True iff the declared witness (a, b) satisfies a^2 + b^2 = -1 exactly."""
    if descriptor.witness is None:
        raise PreconditionError("witness-absent", f"{descriptor.name} carries no witness")
    a, b = descriptor.witness
    return a * a + b * b == QuadElement.rational(-1)


def satisfies_star(descriptor: FieldDescriptor) -> bool:
    """Conjunction of the three declared clauses of the field condition.

    Declaring clause 2 true while carrying a verifying witness is an
    inconsistency and raises.
    """
    if descriptor.star_clause2 and descriptor.witness is not None and verify_negative_one_witness(descriptor):
        raise PreconditionError(
            "inconsistent-descriptor",
            f"{descriptor.name} declares -1 not a sum of two squares yet carries a verifying witness",
        )
    return descriptor.char_zero and descriptor.star_clause2 and descriptor.star_clause3


def standard_field_table() -> dict[str, FieldDescriptor]:
    """The descriptors shipped with the package.

    Q, R and Q(sqrt5) satisfy the field condition; Q(sqrt-1) and Q(sqrt-3)
    fail clause 2 with explicit witnesses; Q(sqrt-7) fails clause 3 (its
    extension by sqrt5 admits a sum-of-two-squares representation of -1).
    """
    half = Fraction(1, 2)
    return {
        "Q": FieldDescriptor(name="Q", kind="rationals"),
        "R": FieldDescriptor(name="R", kind="reals"),
        "Q(sqrt5)": FieldDescriptor(name="Q(sqrt5)", kind="quadratic", d=5),
        "Q(sqrt-1)": FieldDescriptor(
            name="Q(sqrt-1)",
            kind="quadratic",
            d=-1,
            star_clause2=False,
            star_clause3=False,
            witness=(QuadElement.sqrt_of(-1), QuadElement.rational(0)),
        ),
        "Q(sqrt-3)": FieldDescriptor(
            name="Q(sqrt-3)",
            kind="quadratic",
            d=-3,
            star_clause2=False,
            star_clause3=False,
            witness=(QuadElement(-3, half, half), QuadElement(-3, half, -half)),
        ),
        "Q(sqrt-7)": FieldDescriptor(
            name="Q(sqrt-7)",
            kind="quadratic",
            d=-7,
            star_clause2=True,
            star_clause3=False,
        ),
    }


def descriptor_from_dict(data: dict) -> FieldDescriptor:
    """Build a descriptor from a parsed config entry."""
    try:
        name = data["name"]
        kind = data["kind"]
        d = data.get("d")
        witness = None
        if data.get("witness") is not None:
            pairs = data["witness"]
            if len(pairs) != 2:
                raise ParseError("witness must be a pair")
            witness = tuple(
                QuadElement(d, Fraction(str(p[0])), Fraction(str(p[1]))) for p in pairs
            )
        return FieldDescriptor(
            name=name,
            kind=kind,
            d=d,
            star_clause2=bool(data.get("star_clause2", True)),
            star_clause3=bool(data.get("star_clause3", True)),
            witness=witness,
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"bad field descriptor: {exc}") from exc


def load_field_descriptors(entries: list[dict]) -> dict[str, FieldDescriptor]:
    """Parse a list of config entries into a descriptor table."""
    table = {}
    for entry in entries:
        desc = descriptor_from_dict(entry)
        table[desc.name] = desc
    return table
