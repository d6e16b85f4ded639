"""Complex immittance primitives, two-port ABCD stamps, and one-port trees.

A circuit is described as a recursive one-port tree seen from a single
observation node.  Every leaf is a termination (open, short, or resistor);
interior nodes add a series lumped element, a shunt one-port branch, or a
transmission-line section.  `input_admittance` evaluates the admittance the
observation node sees at a given angular frequency.

All values are SI: ohms, siemens, farads, henries, meters, rad/s.
"""

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import InvalidElementError, NumericOverflowError, SingularityError

TWO_PI = 2.0 * math.pi


class ImmittanceKind(enum.Enum):
    IMPEDANCE = "impedance"
    ADMITTANCE = "admittance"


@dataclass(frozen=True)
class ComplexImmittance:
    """A complex impedance (ohms) or admittance (siemens)."""

    value: complex
    kind: ImmittanceKind

    def as_admittance(self) -> "ComplexImmittance":
        if self.kind is ImmittanceKind.ADMITTANCE:
            return self
        if self.value == 0:
            raise SingularityError("exact short has no finite admittance")
        return ComplexImmittance(1.0 / self.value, ImmittanceKind.ADMITTANCE)

    def as_impedance(self) -> "ComplexImmittance":
        if self.kind is ImmittanceKind.IMPEDANCE:
            return self
        if self.value == 0:
            raise SingularityError("exact open has no finite impedance")
        return ComplexImmittance(1.0 / self.value, ImmittanceKind.IMPEDANCE)

    @property
    def admittance(self) -> complex:
        return self.as_admittance().value

    @property
    def impedance(self) -> complex:
        return self.as_impedance().value


# --- elements -------------------------------------------------------------


def _require_positive(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise InvalidElementError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class Resistor:
    resistance: float  # ohms

    def __post_init__(self):
        _require_positive("resistance", self.resistance)


@dataclass(frozen=True)
class Capacitor:
    capacitance: float  # farads

    def __post_init__(self):
        _require_positive("capacitance", self.capacitance)


@dataclass(frozen=True)
class Inductor:
    inductance: float  # henries

    def __post_init__(self):
        _require_positive("inductance", self.inductance)


@dataclass(frozen=True)
class ParallelRLC:
    """Parallel L-C tank with an optional parallel loss resistor."""

    inductance: float
    capacitance: float
    resistance: float | None = None  # None means lossless (R -> infinity)

    def __post_init__(self):
        _require_positive("inductance", self.inductance)
        _require_positive("capacitance", self.capacitance)
        if self.resistance is not None:
            _require_positive("resistance", self.resistance)

    @property
    def resonance_hz(self) -> float:
        return 1.0 / (TWO_PI * math.sqrt(self.inductance * self.capacitance))


@dataclass(frozen=True)
class TransmissionLine:
    """Uniform line section.  `length` may be zero (identity section)."""

    z0: float  # ohms
    length: float  # meters
    vp: float  # phase velocity, m/s
    alpha: float = 0.0  # loss, nepers/meter

    def __post_init__(self):
        _require_positive("z0", self.z0)
        _require_positive("vp", self.vp)
        if not (self.length >= 0 and math.isfinite(self.length)):
            raise InvalidElementError(f"length must be >= 0, got {self.length!r}")
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise InvalidElementError(f"alpha must be >= 0, got {self.alpha!r}")

    def beta(self, omega: float) -> float:
        return omega / self.vp


LumpedElement = Resistor | Capacitor | Inductor | ParallelRLC
Element = LumpedElement | TransmissionLine


def lumped_admittance(element: LumpedElement, omega: float) -> complex:
    """Admittance of a two-terminal lumped element at omega (rad/s)."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    match element:
        case Resistor(resistance=r):
            return complex(1.0 / r)
        case Capacitor(capacitance=c):
            return 1j * omega * c
        case Inductor(inductance=ind):
            return -1j / (omega * ind)
        case ParallelRLC(inductance=ind, capacitance=c, resistance=r):
            y = 1j * (omega * c - 1.0 / (omega * ind))
            if r is not None:
                y += 1.0 / r
            return y
    raise InvalidElementError(f"not a lumped element: {element!r}")


def lumped_impedance(element: LumpedElement, omega: float) -> complex:
    y = lumped_admittance(element, omega)
    if y == 0:
        raise SingularityError("element is open at this frequency")
    return 1.0 / y


# --- two-port ABCD matrices ------------------------------------------------


@dataclass(frozen=True)
class TwoPortABCD:
    """Transfer matrix [[a, b], [c, d]]; b in ohms, c in siemens."""

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def identity(cls) -> "TwoPortABCD":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "TwoPortABCD") -> "TwoPortABCD":
        return cascade(self, other)


def cascade(m1: TwoPortABCD, m2: TwoPortABCD) -> TwoPortABCD:
    """Matrix product m1 @ m2 (m1 nearer the observation port)."""
    return TwoPortABCD(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )


# cosh/sinh of gamma*length overflow for arguments beyond ~700
_MAX_LOSS_ARG = 700.0


def element_abcd(element: Element, omega: float, as_shunt: bool = False) -> TwoPortABCD:
    """ABCD stamp of a single element.

    Lumped elements stamp as a series impedance [[1, Z], [0, 1]] by default,
    or as a shunt admittance [[1, 0], [Y, 1]] with `as_shunt`.  Transmission
    lines use cos/sin (lossless) or cosh/sinh (lossy) section matrices and
    reject `as_shunt`.
    """
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    if isinstance(element, TransmissionLine):
        if as_shunt:
            raise InvalidElementError("a transmission line has no shunt stamp; use a Line node")
        bl = element.beta(omega) * element.length
        if element.alpha == 0.0:
            cos_bl = math.cos(bl)
            sin_bl = math.sin(bl)
            return TwoPortABCD(
                complex(cos_bl),
                1j * element.z0 * sin_bl,
                1j * sin_bl / element.z0,
                complex(cos_bl),
            )
        al = element.alpha * element.length
        if al > _MAX_LOSS_ARG:
            raise NumericOverflowError(f"line loss argument alpha*length={al!r} overflows")
        gl = complex(al, bl)
        cosh_gl = cmath.cosh(gl)
        sinh_gl = cmath.sinh(gl)
        return TwoPortABCD(cosh_gl, element.z0 * sinh_gl, sinh_gl / element.z0, cosh_gl)
    if as_shunt:
        return TwoPortABCD(1.0, 0.0, lumped_admittance(element, omega), 1.0)
    return TwoPortABCD(1.0, lumped_impedance(element, omega), 0.0, 1.0)


# --- one-port network trees -------------------------------------------------


@dataclass(frozen=True)
class TermOpen:
    pass


@dataclass(frozen=True)
class TermShort:
    pass


@dataclass(frozen=True)
class TermResistor:
    resistance: float

    def __post_init__(self):
        _require_positive("resistance", self.resistance)


@dataclass(frozen=True)
class Series:
    """A lumped element in series with the rest of the network."""

    element: LumpedElement
    rest: "NetworkTree"

    def __post_init__(self):
        if isinstance(self.element, TransmissionLine):
            raise InvalidElementError("use a Line node for transmission-line sections")


@dataclass(frozen=True)
class Shunt:
    """A one-port branch shunted at the current node."""

    branch: "NetworkTree"
    rest: "NetworkTree"


@dataclass(frozen=True)
class Line:
    """A transmission-line section toward the rest of the network."""

    line: TransmissionLine
    rest: "NetworkTree"

    def __post_init__(self):
        if not isinstance(self.line, TransmissionLine):
            raise InvalidElementError("Line node requires a TransmissionLine element")


NetworkTree = TermOpen | TermShort | TermResistor | Series | Shunt | Line


def one_port(element: LumpedElement) -> Series:
    """A single element from a node to ground, as a one-port branch."""
    return Series(element, TermShort())


# Internal evaluation result: ("y"|"z", value, short_origin_path_or_None).
# Opens are ("y", 0), exact shorts are ("z", 0) so neither form ever
# holds an infinity.
_OPEN = ("y", 0j, None)


def _as_admittance(kind: str, value: complex) -> complex:
    if kind == "y":
        return value
    return 1.0 / value  # caller guarantees value != 0


def _eval(net: NetworkTree, omega: float, path: tuple[str, ...]):
    match net:
        case TermOpen():
            return _OPEN
        case TermShort():
            return ("z", 0j, path + ("termShort",))
        case TermResistor(resistance=r):
            return ("y", complex(1.0 / r), None)

        case Series(element=e, rest=rest):
            ye = lumped_admittance(e, omega)
            if ye == 0:
                # element is open at this frequency; the branch is open
                return _OPEN
            kind, val, origin = _eval(rest, omega, path + ("series.rest",))
            if kind == "y" and val == 0:
                return _OPEN
            z = 1.0 / ye + (val if kind == "z" else 1.0 / val)
            if z == 0:
                return ("z", 0j, path + ("series",))
            return ("z", z, None)

        case Shunt(branch=branch, rest=rest):
            bk, bv, borigin = _eval(branch, omega, path + ("shunt.branch",))
            if bk == "z" and bv == 0:
                return ("z", 0j, borigin)
            rk, rv, rorigin = _eval(rest, omega, path + ("shunt.rest",))
            if rk == "z" and rv == 0:
                return ("z", 0j, rorigin)
            return ("y", _as_admittance(bk, bv) + _as_admittance(rk, rv), None)

        case Line(line=t, rest=rest):
            kind, val, _ = _eval(rest, omega, path + ("line.rest",))
            m = element_abcd(t, omega)
            if kind == "y":
                # Z = (a + b y) / (c + d y), valid for y == 0 (open) too
                num = m.a + m.b * val
                den = m.c + m.d * val
            else:
                num = m.a * val + m.b
                den = m.c * val + m.d
            if den == 0:
                return _OPEN
            z = num / den
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise NumericOverflowError(
                    f"non-finite impedance at {'/'.join(path + ('line',))}"
                )
            if z == 0:
                return ("z", 0j, path + ("line",))
            return ("z", z, None)

    raise TypeError(f"not a NetworkTree node: {net!r}")


def input_admittance(net: NetworkTree, omega: float) -> ComplexImmittance:
    """Admittance seen from the observation node at omega (rad/s).

    Raises SingularityError when the network is an exact short at omega
    (the error carries the offending subtree path) and NumericOverflowError
    on non-finite intermediates.
    """
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    kind, value, origin = _eval(net, omega, ())
    if kind == "z":
        if value == 0:
            raise SingularityError(
                "network is an exact short at this frequency", path=origin or ()
            )
        value = 1.0 / value
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NumericOverflowError("non-finite admittance")
    return ComplexImmittance(value, ImmittanceKind.ADMITTANCE)


def input_impedance(net: NetworkTree, omega: float) -> ComplexImmittance:
    """Impedance seen from the observation node; raises on an exact open."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    kind, value, origin = _eval(net, omega, ())
    if kind == "y":
        if value == 0:
            raise SingularityError("network is an exact open at this frequency")
        value = 1.0 / value
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NumericOverflowError("non-finite impedance")
    return ComplexImmittance(value, ImmittanceKind.IMPEDANCE)
