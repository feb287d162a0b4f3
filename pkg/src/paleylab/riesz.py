"""Riesz products: exact dyadic-rational expansion and sampled evaluation.

R_K = Π_{γ ∈ K'} (1 + (γ + conj γ)/2) over K' = K \\ {0}.  The expansion is
computed by iterated convolution in exponent space with Fraction coefficients
(all denominators powers of two); the coefficient facts c(0) = 1 and
c(γ) >= 1/2 on K' for strongly lacunary K are exact statements about these
rationals, not floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cones import Vec, as_vec, vec_add, vec_scale
from .grid import GridFunction, GridSpec, grid_character


@dataclass(frozen=True)
class RieszExpansion:
    """Exact map frequency -> rational coefficient of the product expansion."""

    coeffs: dict

    def __init__(self, coeffs):
        object.__setattr__(
            self, "coeffs", {as_vec(k): Fraction(v) for k, v in coeffs.items()}
        )

    def __getitem__(self, n) -> Fraction:
        return self.coeffs.get(as_vec(n), Fraction(0))

    def support(self) -> list[Vec]:
        return sorted(self.coeffs)

    def spectrum(self) -> dict[Vec, complex]:
        return {n: complex(float(c), 0.0) for n, c in self.coeffs.items()}

    def to_json(self) -> list:
        """Triples (frequency, numerator, exponent of 2 in the denominator)."""
        out = []
        for n in sorted(self.coeffs):
            c = self.coeffs[n]
            denom_exp = c.denominator.bit_length() - 1
            if 1 << denom_exp != c.denominator:
                raise AssertionError("Riesz coefficient denominator is not dyadic")
            key = n[0] if len(n) == 1 else list(n)
            out.append([key, c.numerator, denom_exp])
        return out


def riesz_expansion(K) -> RieszExpansion:
    """Expand Π (1 + (γ' + conj γ')/2) exactly in exponent space."""
    pts = sorted({as_vec(g) for g in K})
    d = len(pts[0]) if pts else 1
    zero = tuple(0 for _ in range(d))
    kprime = [g for g in pts if g != zero]
    coeffs: dict[Vec, Fraction] = {zero: Fraction(1)}
    half = Fraction(1, 2)
    for g in kprime:
        nxt: dict[Vec, Fraction] = {}
        for n, c in coeffs.items():
            for shift, w in ((zero, Fraction(1)), (g, half), (vec_scale(-1, g), half)):
                m = vec_add(n, shift)
                nxt[m] = nxt.get(m, Fraction(0)) + c * w
        coeffs = nxt
    return RieszExpansion(coeffs)


def riesz_polynomial(K, spec: GridSpec) -> tuple[GridFunction, RieszExpansion]:
    """Sampled Riesz product and its exact expansion.

    Samples come from the pointwise product of the nonnegative factors
    1 + cos(γ'·t); they must match the synthesized expansion to 1e-12, and
    the whole support must fit the spec window (coefficients wrap otherwise).
    """
    expansion = riesz_expansion(K)
    for n in expansion.support():
        spec.require_window(n)
    samples = np.ones(spec.dims, float)
    pts = sorted({as_vec(g) for g in K})
    zero = tuple(0 for _ in range(spec.ndim))
    for g in pts:
        if g == zero:
            continue
        samples = samples * (1.0 + np.real(grid_character(spec, g)))
    f = GridFunction(spec, samples.astype(complex))
    return f, expansion
