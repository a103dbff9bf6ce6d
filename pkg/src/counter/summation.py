from __future__ import annotations


class NeumaierSum:
    """Compensated running sum of floats (Neumaier's variant of Kahan)."""

    __slots__ = ("total", "compensation")

    def __init__(self) -> None:
        self.total = 0.0
        self.compensation = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.compensation += (self.total - t) + x
        else:
            self.compensation += (x - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.compensation


class ComplexAccumulator:
    """Real and imaginary parts compensated independently."""

    __slots__ = ("real", "imag", "terms")

    def __init__(self) -> None:
        self.real = NeumaierSum()
        self.imag = NeumaierSum()
        self.terms = 0

    def add(self, z: complex) -> None:
        self.real.add(float(z.real))
        self.imag.add(float(z.imag))
        self.terms += 1

    @property
    def value(self) -> complex:
        return complex(self.real.value, self.imag.value)
