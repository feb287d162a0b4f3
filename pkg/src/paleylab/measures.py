"""Measure-level inequality chains and the product-group lift pipeline.

Two desk-scale measure models: finitely many atoms (total variation the sum
of |mass|) and densities against the uniform grid measure (total variation
the discrete L1 norm).  Convolving with the Riesz product of K keeps total
variation, halves nothing on K (coefficients stay >= 1/2 there) and produces
a function the projection replay certifies, giving the chain

    |mu-hat restricted to K|_2 <= 2 |f_K-hat|K|_2 <= 4 |f_K|_1 <= 4 |mu|.

The lift pipeline pairs frequencies with standard basis vectors, replays on
the product grid (three points per lifted axis suffice: all lifted
frequencies in play have coordinates in {-1,0,1}), and pulls the bound back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cones import ConeOrder, as_vec
from .grid import GridFunction, GridSpec, coeff, norm_l1, synth
from .lift import (
    LiftedEnumeration,
    lift_enumeration,
    lifted_d_sets,
    lifted_riesz_support,
    lifted_schur_set,
    lifted_s_set,
)
from .proofkit import ProofTrace, replay, replay_group, replay_sets
from .riesz import riesz_expansion
from .sets import Enumeration, Window, riesz_support, s_set, schur_set


@dataclass(frozen=True)
class AtomicMeasure:
    """Finitely many point masses at arbitrary (off-grid) locations."""

    atoms: tuple  # pairs (location tuple of floats, complex mass)

    def __init__(self, atoms):
        canon = []
        for loc, mass in atoms:
            loc = tuple(float(x) for x in (loc if hasattr(loc, "__iter__") else [loc]))
            canon.append((loc, complex(mass)))
        object.__setattr__(self, "atoms", tuple(canon))

    @property
    def total_variation(self) -> float:
        return float(sum(abs(m) for _, m in self.atoms))

    def hat(self, n) -> complex:
        v = as_vec(n)
        out = 0.0 + 0.0j
        for loc, mass in self.atoms:
            out += mass * np.exp(-1j * sum(c * x for c, x in zip(v, loc)))
        return complex(out)

    def to_json(self) -> dict:
        return {
            "atoms": [[list(loc), m.real, m.imag] for loc, m in self.atoms]
        }


@dataclass(frozen=True)
class DensityMeasure:
    """Absolutely continuous measure d mu = f d(uniform)."""

    density: GridFunction

    @property
    def total_variation(self) -> float:
        return norm_l1(self.density)

    def hat(self, n) -> complex:
        # the density is a trig polynomial of windowed degree, so its
        # transform vanishes identically beyond the window
        if not self.density.spec.in_window(n):
            return 0.0 + 0.0j
        return coeff(self.density, n)

    def to_json(self) -> dict:
        from .grid import spectrum_of, spectrum_to_json

        return {"density_spectrum": spectrum_to_json(spectrum_of(self.density))}


def measure_hat(mu, n) -> complex:
    return mu.hat(n)


def riesz_convolve(mu, K, spec: GridSpec | None = None) -> dict:
    """Spectrum of mu convolved with the Riesz product of K.

    Entries are mu-hat(n) * c(n) over the Riesz support; everything must fit
    the window of the target grid.
    """
    if spec is None:
        if isinstance(mu, DensityMeasure):
            spec = mu.density.spec
        else:
            raise ValueError("atomic measures need an explicit grid spec")
    expansion = riesz_expansion(K)
    out = {}
    for n in expansion.support():
        spec.require_window(n)
        out[n] = mu.hat(n) * float(expansion[n])
    return out


@dataclass(frozen=True)
class MeasureChainReport:
    hypothesis: str
    hypothesis_members: tuple
    links: tuple  # triples (name, lhs, rhs); each asserts lhs <= rhs + slack
    ratio: float  # |mu-hat|K|_2 / |mu|
    trace: ProofTrace
    ceiling: float

    def check(self, tol: float = 1e-9) -> list[str]:
        out = []
        for name, lhs, rhs in self.links:
            if lhs > rhs * (1 + tol) + tol:
                out.append(f"chain link {name}: {lhs:.9e} > {rhs:.9e}")
        out.extend(self.trace.check(tol))
        if self.ratio > self.ceiling + 1e-6:
            out.append(f"measure ratio {self.ratio:.9f} exceeds ceiling {self.ceiling:.9f}")
        return out

    @property
    def ok(self) -> bool:
        return not self.check()

    def to_json(self) -> dict:
        return {
            "hypothesis": self.hypothesis,
            "hypothesis_members": [
                m[0] if len(m) == 1 else list(m) for m in self.hypothesis_members
            ],
            "links": [[n, a, b] for n, a, b in self.links],
            "ratio": self.ratio,
            "ceiling": self.ceiling,
            "trace": self.trace.to_json(),
        }


def _hypothesis_members(e: Enumeration, M: int, hypothesis: str):
    w = Window(-M, M)
    if hypothesis == "schur":
        return schur_set(e, w).members
    if hypothesis == "schur-riesz":
        schur = schur_set(e, w).as_set()
        riesz = riesz_support(e.entries).as_set()
        return tuple(sorted(schur & riesz))
    if hypothesis == "negative":
        return tuple((n,) for n in range(-M, 0))
    raise ValueError(f"unknown hypothesis selector {hypothesis!r}")


def check_measure_bound(
    mu,
    e: Enumeration,
    hypothesis: str = "schur-riesz",
    M: int | None = None,
    N: int | None = None,
    tol: float = 1e-9,
) -> MeasureChainReport:
    """Verify the measure chain for an increasing strongly lacunary K on Z.

    mu-hat must vanish on the hypothesis set inside the window; the middle
    chain link runs the projection replay on the Riesz convolution f_K.
    """
    ks = e.scalars()
    if not all(b > 2 * a for a, b in zip(ks, ks[1:])):
        raise ValueError("measure chain requires a strongly lacunary increasing K")
    expansion = riesz_expansion(e.entries)
    support = expansion.support()
    need = max(abs(n[0]) for n in support)
    if M is None:
        M = need
    if M < need:
        raise ValueError("window too small for the Riesz support")
    from .grid import _smooth_size

    spec = GridSpec((N if N is not None else _smooth_size(2 * M + 2),), (M,))

    members = _hypothesis_members(e, M, hypothesis)
    scale = max(mu.total_variation, 1e-300)
    for m in members:
        v = abs(mu.hat(m))
        if v > 1e-10 * scale:
            raise ValueError(
                f"hypothesis violation: mu-hat({m[0] if len(m) == 1 else m}) = {v:.3e}"
            )

    fk_spectrum = {n: mu.hat(n) * float(expansion[n]) for n in support}
    f_k = synth(fk_spectrum, spec)

    if hypothesis == "negative":
        trace = replay(f_k, e, mode="new")
    else:
        gaps = [b - a for a, b in zip(ks, ks[1:])]
        depth = (max(gaps) if gaps else max(ks[0], 1)) + 1
        from .sets import d_set

        dsets = [list(d_set(j, e, Window(-depth, -1)).members) for j in range(1, e.J + 1)]
        trace = replay(f_k, e, mode="new", dsets=dsets)

    mu_on_k = math.sqrt(sum(abs(mu.hat(k)) ** 2 for k in e.entries))
    fk_on_k = trace.coeff_l2_on_k
    fk_l1 = trace.f_l1
    tv = mu.total_variation
    links = (
        ("mu-hat on K vs 2 f_K-hat on K", mu_on_k, 2 * fk_on_k),
        ("2 f_K-hat on K vs 4 |f_K|_1", 2 * fk_on_k, 4 * fk_l1),
        ("4 |f_K|_1 vs 4 |mu|", 4 * fk_l1, 4 * tv),
    )
    return MeasureChainReport(
        hypothesis=hypothesis,
        hypothesis_members=members,
        links=links,
        ratio=mu_on_k / tv,
        trace=trace,
        ceiling=2 * math.sqrt(2.0),
    )


def lifted_grid(le: LiftedEnumeration, gamma_half: int) -> GridSpec:
    """Product grid: one gamma axis plus a three-point axis per lifted entry.

    Three points per axis separate all coefficient coordinates in {-1,0,1}.
    A subspace shift can push one coordinate to 2, which wraps to -1; that
    wrapped residue collides with a live support point exactly when
    3 gamma_j = 0 mod the gamma axis size, so such an axis (the gamma_j = 0
    one, in practice) is widened to four points to keep the wrap off the
    window.
    """
    from .grid import _smooth_size

    n_gamma = _smooth_size(2 * gamma_half + 2)
    axis_sizes = tuple(
        4 if (3 * g) % n_gamma == 0 else 3 for g in le.gammas()
    )
    dims = (n_gamma,) + axis_sizes
    window = (gamma_half,) + (1,) * le.J
    return GridSpec(dims, window)


def check_measure_bound_via_lift(mu, e: Enumeration, tol: float = 1e-9) -> MeasureChainReport:
    """The full lift pipeline for an arbitrary (unordered, non-lacunary) K.

    Requires mu-hat to vanish on S((gamma_j)); lifts, replays on the product
    grid against the lifted Schur sets, and pulls the bound back through
    |mu-tilde| = |mu| and mu-tilde-hat(gamma, n) = mu-hat(gamma).
    """
    le = lift_enumeration(e)
    pairs = le.pairs()
    J = le.J

    s_members = lifted_s_set(le).members
    base_s = sorted({m[0] for m in s_members})
    scale = max(mu.total_variation, 1e-300)
    for g in base_s:
        v = abs(mu.hat(g))
        if v > 1e-10 * scale:
            raise ValueError(f"hypothesis violation: mu-hat({g}) = {v:.3e}")

    riesz = lifted_riesz_support(le)
    dsets = lifted_d_sets(le)
    schur = lifted_schur_set(le)
    gamma_need = max(
        [abs(m[0]) for m in riesz.members]
        + [abs(m[0]) for ds in dsets for m in ds]
        + [abs(m[0] + p[0]) for ds, p in zip(dsets, pairs) for m in ds]
        + [abs(m[0] + p[0]) for ds, p in zip(dsets[:-1], pairs[1:]) for m in ds]
        + [abs(m[0]) for m in schur.members]
        + [abs(g) for g in le.gammas()]
    )
    spec = lifted_grid(le, gamma_need)

    # f-tilde_K = lifted mu convolved with the lifted Riesz product
    expansion = riesz_expansion(pairs)
    fk_spectrum = {}
    for n in expansion.support():
        fk_spectrum[n] = mu.hat(n[0]) * float(expansion[n])
    f_k = synth(fk_spectrum, spec)

    forbidden = [m for m in schur.members if spec.in_window(m)]
    trace = replay_sets(
        f_k,
        pairs,
        dsets,
        window_lo=(-gamma_need,) + (-1,) * J,
        window_hi=(gamma_need,) + (1,) * J,
        forbidden=forbidden,
    )

    # pull-back: the lifted transform of mu-tilde at (gamma, n) is mu-hat(gamma)
    mu_on_k = math.sqrt(sum(abs(mu.hat(g)) ** 2 for g in le.gammas()))
    fk_on_k = trace.coeff_l2_on_k
    fk_l1 = trace.f_l1
    tv = mu.total_variation
    links = (
        ("mu-hat on K vs 2 f_K-hat on lifted K", mu_on_k, 2 * fk_on_k),
        ("2 f_K-hat on lifted K vs 4 |f_K|_1", 2 * fk_on_k, 4 * fk_l1),
        ("4 |f_K|_1 vs 4 |mu|", 4 * fk_l1, 4 * tv),
    )
    return MeasureChainReport(
        hypothesis="s",
        hypothesis_members=tuple((g,) for g in base_s),
        links=links,
        ratio=mu_on_k / tv,
        trace=trace,
        ceiling=2 * math.sqrt(2.0),
    )


def random_density_measure(
    e: Enumeration,
    hypothesis: str,
    M: int,
    seed: int = 0,
    N: int | None = None,
) -> DensityMeasure:
    """Seeded density with mu-hat vanishing on the hypothesis set, nonzero on K."""
    from .grid import _smooth_size

    spec = GridSpec((N if N is not None else _smooth_size(2 * M + 2),), (M,))
    if hypothesis == "s":
        forbidden = {m[0] for m in s_set(e).members if abs(m[0]) <= M}
    else:
        forbidden = {m[0] for m in _hypothesis_members(e, M, hypothesis)}
    rng = np.random.default_rng([seed, 211])
    spectrum = {}
    for n in range(-M, M + 1):
        if n in forbidden:
            continue
        spectrum[(n,)] = complex(rng.standard_normal(), rng.standard_normal())
    for k in e.scalars():
        # the hypothesis wins where it overlaps K: those coefficients stay 0
        if k not in forbidden and abs(k) <= M and abs(spectrum[(k,)]) < 1e-6:
            spectrum[(k,)] = 1.0 + 0.5j
    f = synth(spectrum, spec)
    scale = norm_l1(f)
    return DensityMeasure(GridFunction(spec, f.samples / scale))


def random_atomic_measure(
    e: Enumeration,
    hypothesis: str,
    M: int,
    seed: int = 0,
    extra_atoms: int = 4,
) -> AtomicMeasure:
    """Random atoms whose masses solve the vanishing constraints.

    Given random locations, the masses are drawn from the null space of the
    constraint matrix e^{-i n y_i} over the hypothesis frequencies; the
    residual of every constraint must come out below 1e-10.
    """
    if hypothesis == "s":
        constraints = sorted({m[0] for m in s_set(e).members if abs(m[0]) <= M})
    else:
        constraints = sorted({m[0] for m in _hypothesis_members(e, M, hypothesis)})
    rng = np.random.default_rng([seed, 73])
    n_atoms = len(constraints) + max(extra_atoms, 2)
    locs = rng.uniform(-np.pi, np.pi, size=n_atoms)
    if constraints:
        A = np.exp(-1j * np.outer(np.array(constraints, float), locs))
        _, s, vh = np.linalg.svd(A)
        null_dim = n_atoms - int(np.sum(s > s[0] * 1e-12)) if s.size else n_atoms
        if null_dim == 0:
            raise ValueError("no admissible masses for these atom locations")
        basis = vh.conj().T[:, n_atoms - null_dim :]
        weights = rng.standard_normal(null_dim) + 1j * rng.standard_normal(null_dim)
        masses = basis @ weights
        residual = float(np.max(np.abs(A @ masses)))
        if residual > 1e-10 * max(float(np.sum(np.abs(masses))), 1e-300):
            raise ValueError(f"vanishing constraints unsolved: residual {residual:.3e}")
    else:
        masses = rng.standard_normal(n_atoms) + 1j * rng.standard_normal(n_atoms)
    total = float(np.sum(np.abs(masses)))
    masses = masses / total
    return AtomicMeasure([((t,), m) for t, m in zip(locs, masses)])


def measure_bound_via_total_order(
    mu,
    e: Enumeration,
    cone: ConeOrder,
    spec: GridSpec,
    tol: float = 1e-9,
) -> MeasureChainReport:
    """Reduction of a partial-order chain to the lex-last total order.

    When every cone generator is positive for the lex-last order, the cone
    imbeds in that total order, K stays strongly lacunary there, and the
    chain runs with the group replay's constant doubled.
    """
    total = ConeOrder("lex-last", dim=cone.dim)
    if cone.kind == "generators":
        for g in cone.generators:
            if not total.in_strict_cone(g):
                raise ValueError("cone does not imbed in the lex-last order")
    members = [
        tuple(int(o) - m for o, m in zip(offsets, spec.window_half))
        for offsets in np.ndindex(*(2 * m + 1 for m in spec.window_half))
    ]
    negatives = [v for v in members if total.in_strict_cone(tuple(-c for c in v))]
    scale = max(mu.total_variation, 1e-300)
    for m in negatives:
        if abs(mu.hat(m)) > 1e-10 * scale:
            raise ValueError(f"hypothesis violation: mu-hat({m}) nonzero")
    expansion = riesz_expansion(e.entries)
    fk_spectrum = {n: mu.hat(n) * float(expansion[n]) for n in expansion.support()}
    f_k = synth(fk_spectrum, spec)
    trace = replay_group(f_k, e, total)
    mu_on_k = math.sqrt(sum(abs(mu.hat(g)) ** 2 for g in e.entries))
    links = (
        ("mu-hat on K vs 2 f_K-hat on K", mu_on_k, 2 * trace.coeff_l2_on_k),
        ("2 f_K-hat on K vs 2C |f_K|_1", 2 * trace.coeff_l2_on_k, 4 * trace.f_l1),
        ("2C |f_K|_1 vs 2C |mu|", 4 * trace.f_l1, 4 * mu.total_variation),
    )
    return MeasureChainReport(
        hypothesis="negative-cone",
        hypothesis_members=tuple(negatives),
        links=links,
        ratio=mu_on_k / mu.total_variation,
        trace=trace,
        ceiling=2 * math.sqrt(2.0),
    )
