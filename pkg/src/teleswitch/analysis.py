"""Closed-form fidelities, advantage regions, figures of merit, and outcome search.

The post-selected fidelity of an isotropic n-path switch is a ratio of
degree-n polynomials in the noise weight p (see switch.post_selected_polynomials),
so every quantity here reduces to polynomial arithmetic plus piecewise-smooth
quadrature of max(F - 2/3, 0) over p in [0, 1/3].
"""
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .channels import no_switch_fidelity, no_switch_threshold
from .linalg import normalize_state
from .switch import (
    ControlState,
    DegenerateOutcomeError,
    branch_pair_weight_counts,
    pauli_basis_monomials,
    post_selected_polynomials,
    uniform_control,
)

CLASSICAL_THRESHOLD = 2 / 3

# below this, a polynomial value of the success probability counts as zero
_PROB_FLOOR = 1e-11


class QuadratureError(RuntimeError):
    """Figure-of-merit quadrature failed to converge."""


@dataclass(frozen=True)
class SwitchParams:
    """Noise weight p and control weight q of the two-path switch."""

    p: float
    q: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1 / 3 + 1e-12:
            raise ValueError(f"p={self.p} outside [0, 1/3]")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q={self.q} outside [0, 1]")

    @property
    def mu(self):
        return math.sqrt(max(self.q * (1 - self.q), 0.0))


@dataclass(frozen=True)
class AdvantageRegions:
    """Noise intervals with post-selected fidelity above 2/3.

    region1 = [0, p_lo); region2 = (p_hi, 1/3], empty when p_hi >= 1/3.
    """

    p_lo: float
    p_hi: float

    @property
    def region2_exists(self):
        return self.p_hi < 1 / 3 - 1e-12

    @property
    def region1(self):
        return (0.0, self.p_lo)

    @property
    def region2(self):
        return (self.p_hi, 1 / 3) if self.region2_exists else None


@dataclass(frozen=True)
class QuadratureSpec:
    points: int = 3001
    tol: float = 1e-8
    kink_tol: float = 1e-12


DEFAULT_QUADRATURE = QuadratureSpec()


def switched_fidelity(params):
    """Fidelity of the two-path switch post-selected on outcome +:

    F = [1 + 2mu - p(4 + 8mu) + 8p^2(1 + mu)] / [1 + 2mu(1 - 12p^2)].
    """
    p, mu = params.p, params.mu
    num = 1 + 2 * mu - p * (4 + 8 * mu) + 8 * p * p * (1 + mu)
    den = 1 + 2 * mu * (1 - 12 * p * p)
    return num / den


def advantage_regions(mu):
    """Roots of (1+2mu)/3 - 4(1+2mu)p + 8(1+3mu)p^2 = 0 bounding the regions."""
    if not 0.0 <= mu <= 0.5 + 1e-12:
        raise ValueError(f"mu={mu} outside [0, 1/2]")
    a = 8 * (1 + 3 * mu)
    b = -4 * (1 + 2 * mu)
    c = (1 + 2 * mu) / 3
    disc = math.sqrt(b * b - 4 * a * c)
    return AdvantageRegions(float((-b - disc) / (2 * a)), float((-b + disc) / (2 * a)))


def mu_threshold():
    """Minimal superposition mu for the large-noise advantage region to exist."""
    return 1 / 6


def mu_threshold_bisection(tol=1e-10):
    """Locate the region2 existence boundary by bisection on mu."""
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if advantage_regions(mid).region2_exists:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def l1_coherence(state):
    """Sum of absolute off-diagonal entries of |psi><psi| in the computational basis."""
    v = normalize_state(state)
    rho = np.outer(v, v.conj())
    return float(np.sum(np.abs(rho)) - np.sum(np.abs(np.diag(rho))))


# --------------------------------------------------------------------------
# measurement outcome families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OutcomeFamily2:
    """Two-path control outcome proportional to |0> + lambda e^{i phi} |1>."""

    lam: float
    phi: float
    paths = 2

    def vector(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        return normalize_state([1.0, self.lam * np.exp(1j * self.phi)])


@dataclass(frozen=True)
class OutcomeFamily3:
    """Three-path outcome: even-permutation kets minus lambda e^{i phi} odd ones."""

    lam: float
    phi: float
    paths = 3

    def vector(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        odd = -self.lam * np.exp(1j * self.phi)
        # lexicographic permutation parities for n=3: even at 0, 3, 4
        return normalize_state([1.0, odd, odd, 1.0, 1.0, odd])


@dataclass(frozen=True)
class AlphaOutcome:
    """Three-path outcome with odd-permutation coefficients (a1, a2, a3), even fixed at 1."""

    a1: float
    a2: float
    a3: float

    def vector(self):
        return normalize_state([1.0, self.a1, self.a2, 1.0, 1.0, self.a3])

    def label(self):
        def fmt(x):
            return f"{x:g}"

        return f"({fmt(self.a1)},{fmt(self.a2)},{fmt(self.a3)})"


# --------------------------------------------------------------------------
# rational fidelity evaluation
# --------------------------------------------------------------------------


def _paths_from_control(control):
    for n in (2, 3, 4):
        if math.factorial(n) == control.dim:
            return n
    raise ValueError(f"control dimension {control.dim} is not a supported factorial")


def fidelity_polynomials(control, outcome, n=None):
    """Ascending coefficient arrays (num, den) with F(p) = num(p)/den(p).

    den(p) is the outcome probability. Valid for pure system inputs; the
    three nonidentity weights coincide by Pauli relabeling, which makes the
    ratio input-independent.
    """
    if n is None:
        n = _paths_from_control(control)
    w = post_selected_polynomials(control, outcome, n)
    if not (np.allclose(w[1], w[2], atol=1e-12) and np.allclose(w[1], w[3], atol=1e-12)):
        raise AssertionError("nonidentity weights differ; input independence lost")
    num = w[0] + w[1]
    den = w.sum(axis=0)
    return num, den


def _lhopital(num, den, p):
    n_, d_ = np.array(num), np.array(den)
    scale = max(np.max(np.abs(d_)), 1e-300)
    for _ in range(len(den)):
        n_, d_ = P.polyder(n_), P.polyder(d_)
        dv = P.polyval(p, d_)
        if abs(dv) > 1e-9 * scale:
            return float(P.polyval(p, n_) / dv)
    raise DegenerateOutcomeError(f"outcome probability vanishes identically near p={p}")


def evaluate_fidelity(num, den, ps):
    """F(p) = num/den elementwise, filling isolated 0/0 points by L'Hopital."""
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    nv = P.polyval(ps, num)
    dv = P.polyval(ps, den)
    out = np.empty_like(nv)
    ok = np.abs(dv) > _PROB_FLOOR
    out[ok] = nv[ok] / dv[ok]
    for i in np.nonzero(~ok)[0]:
        out[i] = _lhopital(num, den, ps[i])
    return out


def fidelity_profile(control, outcome, ps, n=None):
    """Post-selected fidelity at each p, continuous through isolated degeneracies."""
    num, den = fidelity_polynomials(control, outcome, n)
    return evaluate_fidelity(num, den, ps)


# --------------------------------------------------------------------------
# figure-of-merit quadrature
# --------------------------------------------------------------------------


def _simpson(values, h):
    return h / 3 * (values[0] + values[-1] + 4 * values[1:-1:2].sum() + 2 * values[2:-1:2].sum())


def _bisect_root(g, lo, hi, tol):
    glo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol:
            return mid
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (glo < 0) == (gm < 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _kink_points(num, den, spec):
    """Roots of F(p) = 2/3 in (0, 1/3), located by sign scan plus bisection."""
    g_coeffs = P.polysub(num, CLASSICAL_THRESHOLD * np.asarray(den))

    def g(p):
        return P.polyval(p, g_coeffs)

    ps = np.linspace(0.0, 1 / 3, spec.points)
    gv = P.polyval(ps, g_coeffs)
    kinks = []
    for i in range(len(ps) - 1):
        if gv[i] == 0.0 and 0 < i:
            kinks.append(ps[i])
        elif gv[i] * gv[i + 1] < 0:
            kinks.append(_bisect_root(g, ps[i], ps[i + 1], spec.kink_tol))
    return kinks


def _odd_nodes(count):
    count = max(int(count), 5)
    return count if count % 2 == 1 else count + 1


def _integrate_pieces(num, den, kinks, points):
    bounds = [0.0] + list(kinks) + [1 / 3]
    total = 0.0
    for a, b in zip(bounds[:-1], bounds[1:]):
        if b - a < 1e-14:
            continue
        mid = evaluate_fidelity(num, den, 0.5 * (a + b))[0]
        if mid <= CLASSICAL_THRESHOLD:
            continue
        nodes = _odd_nodes(round(points * (b - a) / (1 / 3)))
        ps = np.linspace(a, b, nodes)
        vals = evaluate_fidelity(num, den, ps) - CLASSICAL_THRESHOLD
        total += _simpson(vals, ps[1] - ps[0])
    return total


def _merit_from_polynomials(num, den, spec):
    kinks = _kink_points(num, den, spec)
    coarse = _integrate_pieces(num, den, kinks, spec.points)
    fine = _integrate_pieces(num, den, kinks, 2 * spec.points)
    if abs(fine - coarse) > spec.tol:
        raise QuadratureError(
            f"step halving changed K by {abs(fine - coarse):.3e} > {spec.tol}"
        )
    return fine


def _complement_outcome(outcome):
    m = normalize_state(outcome)
    return np.array([-np.conj(m[1]), np.conj(m[0])])


def figure_of_merit(outcome, control, n=None, quad=DEFAULT_QUADRATURE):
    """K = integral over p in [0, 1/3] of max(F(p) - 2/3, 0).

    An outcome that never fires (probability identically zero) is replaced by
    its orthogonal complement when the control is two-dimensional, since the
    complement then fires with certainty; larger controls raise instead.
    """
    outcome = outcome.vector() if hasattr(outcome, "vector") else outcome
    num, den = fidelity_polynomials(control, outcome, n)
    if np.max(np.abs(den)) < 1e-13:
        if control.dim != 2:
            raise DegenerateOutcomeError(
                "outcome probability is identically zero and the control is not a qubit"
            )
        num, den = fidelity_polynomials(control, _complement_outcome(outcome), n)
    return _merit_from_polynomials(num, den, quad)


def no_switch_merit(n, quad=DEFAULT_QUADRATURE):
    """K of n sequential channels without a switch.

    F_n - 2/3 is nonnegative exactly on [0, p_n*], so the integral runs to the
    analytic threshold and the integrand is a polynomial there.
    """
    upper = no_switch_threshold(n)
    ps = np.linspace(0.0, upper, _odd_nodes(quad.points))
    vals = no_switch_fidelity(ps, n) - CLASSICAL_THRESHOLD
    return float(_simpson(vals, ps[1] - ps[0]))


def k_total(control, outcome_label="plus", quad=DEFAULT_QUADRATURE):
    """Integral over p of the joint fidelity between rho o rho_c and the
    pre-measurement switch output, for pure system and control states.

    The joint is taken before the control measurement, so the value does not
    depend on outcome_label; the label is kept for tabulation alongside the
    per-outcome figure of merit.
    """
    if control.dim != 2:
        raise ValueError("k_total is defined for the two-path switch")
    counts = branch_pair_weight_counts(2)
    pops = np.abs(control.amplitudes) ** 2
    per_basis = np.einsum("a,kabz,b->kz", pops, counts, pops)
    polys = per_basis @ pauli_basis_monomials(2)
    g_poly = polys[0] + polys[1]  # pure inputs: nonidentity weights coincide
    ps = np.linspace(0.0, 1 / 3, _odd_nodes(quad.points))
    vals = P.polyval(ps, g_poly)
    coarse = _simpson(vals, ps[1] - ps[0])
    ps2 = np.linspace(0.0, 1 / 3, _odd_nodes(2 * quad.points))
    fine = _simpson(P.polyval(ps2, g_poly), ps2[1] - ps2[0])
    if abs(fine - coarse) > quad.tol:
        raise QuadratureError("k_total quadrature did not converge")
    return float(fine)


def optimize_outcome(control, family, lambdas, phis, quad=DEFAULT_QUADRATURE):
    """Exhaustive (lambda, phi) grid search of the figure of merit.

    Returns ((lambda, phi), K) at the argmax; ties break toward smaller
    lambda, then smaller phi.
    """
    best = None
    for lam in sorted(lambdas):
        for phi in sorted(phis):
            k = figure_of_merit(family(lam, phi), control, quad=quad)
            if best is None or k > best[1] + 1e-15:
                best = ((lam, phi), k)
    if best is None:
        raise ValueError("empty search grid")
    return best


@dataclass(frozen=True)
class ProfilePoint:
    p: float
    fidelity: float
    degenerate: bool


def alpha_fidelity_profile(alpha, p_grid):
    """Fidelity curve of the three-path switch post-selected on an alpha outcome.

    Requires the uniform six-dimensional control. At grid points where the
    outcome probability vanishes identically (e.g. the alternating outcome at
    p = 0) the reported value is the fidelity of the control-traced marginal,
    which equals the no-switch triple-channel fidelity, and the point is
    flagged degenerate.
    """
    control = uniform_control(3)
    outcome = alpha.vector() if hasattr(alpha, "vector") else AlphaOutcome(*alpha).vector()
    num, den = fidelity_polynomials(control, outcome, 3)
    points = []
    for p in np.asarray(p_grid, dtype=float):
        prob = float(P.polyval(p, den))
        if prob > _PROB_FLOOR:
            points.append(ProfilePoint(float(p), float(P.polyval(p, num) / prob), False))
        else:
            points.append(ProfilePoint(float(p), float(no_switch_fidelity(p, 3)), True))
    return points
