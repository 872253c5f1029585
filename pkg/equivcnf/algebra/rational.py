from equivcnf.algebra.field import FqField
from equivcnf.algebra.poly import FqPoly, poly_gcd
from equivcnf.errors import InvertZero


class RationalFunction:
    """Reduced quotient num/den in F_q(t) with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: FqPoly, den: FqPoly | None = None):
        field = num.field
        if den is None:
            den = FqPoly.constant(field, 1)
        if den.is_zero:
            raise InvertZero("Rational function with zero denominator")
        if num.is_zero:
            den = FqPoly.constant(field, 1)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = int(field.inv(den.leading))
            num, den = num.scale(lead), den.scale(lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, key, value):
        raise AttributeError("RationalFunction is immutable")

    @property
    def field(self) -> FqField:
        return self.num.field

    @classmethod
    def from_ints(cls, field: FqField, num, den=(1,)) -> "RationalFunction":
        return cls(FqPoly.from_ints(field, num), FqPoly.from_ints(field, den))

    @classmethod
    def constant(cls, field: FqField, c: int) -> "RationalFunction":
        return cls(FqPoly.constant(field, c))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    @property
    def degree(self) -> int:
        """Valuation at infinity with sign flipped: deg num - deg den (zero gives ZERO_DEGREE of num)."""
        if self.is_zero:
            return self.num.degree
        return self.num.degree - self.den.degree

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, FqPoly):
            return RationalFunction(other)
        if isinstance(other, int):
            return RationalFunction(FqPoly.from_ints(self.field, [other]))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero:
            raise InvertZero("Cannot invert the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def spread(self, q: int) -> "RationalFunction":
        """f(t^q), equal to f^q over F_q."""
        return RationalFunction(self.num.spread(q), self.den.spread(q))

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __ne__(self, other) -> bool:
        return not self == other

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        if self.is_polynomial:
            return repr(self.num)
        return f"({self.num})/({self.den})"

    def to_laurent(self, floor: int):
        """Expansion in F_q((1/t)) known down to t^floor."""
        from equivcnf.algebra.laurent import LaurentSeries

        num = LaurentSeries.from_poly(self.num)
        if self.is_polynomial:
            return num.truncate(floor)
        den = LaurentSeries.from_poly(self.den)
        return (num * den.inverse(floor - self.num.degree)).truncate(floor)
