"""Piecewise-constant profiles on the line and their integral functionals.

A Profile is a right-continuous step function: ``breakpoints`` strictly
increasing, ``values`` one longer, adjacent values distinct (no zero-strength
jumps are stored; use :meth:`Profile.compacted` to build from raw data).

All integrals here are exact piecewise sums, so they are closed over
``fractions.Fraction`` inputs.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .fluxes import FluxModel, secant_speed


class Profile:
    """Right-continuous step function with finitely many jumps."""

    __slots__ = ("breakpoints", "values")

    def __init__(self, breakpoints, values):
        breakpoints = tuple(breakpoints)
        values = tuple(values)
        if len(values) != len(breakpoints) + 1:
            raise ValueError("values: need exactly one more value than breakpoints")
        for a, b in zip(breakpoints, breakpoints[1:]):
            if not a < b:
                raise ValueError("breakpoints: must be strictly increasing")
        for i, (a, b) in enumerate(zip(values, values[1:])):
            if a == b:
                raise ValueError(
                    f"values: zero-strength jump stored at breakpoint index {i}"
                )
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "values", values)

    def __setattr__(self, *_):
        raise AttributeError("Profile is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Profile)
            and self.breakpoints == other.breakpoints
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.breakpoints, self.values))

    def __repr__(self):
        return f"Profile(breakpoints={self.breakpoints!r}, values={self.values!r})"

    @classmethod
    def compacted(cls, breakpoints, values):
        """Build a profile, dropping zero-strength jumps from raw data."""
        bps, vals = [], [values[0]]
        for x, v in zip(breakpoints, values[1:]):
            if v == vals[-1]:
                continue
            bps.append(x)
            vals.append(v)
        return cls(bps, vals)

    @classmethod
    def constant(cls, value):
        return cls((), (value,))

    # -- point queries ---------------------------------------------------

    def value_at(self, x):
        """Right-continuous evaluation u(x+)."""
        return self.values[bisect_right(self.breakpoints, x)]

    def left_value_at(self, x):
        """Left trace u(x-)."""
        return self.values[bisect_left(self.breakpoints, x)]

    @property
    def far_left(self):
        return self.values[0]

    @property
    def far_right(self):
        return self.values[-1]

    def jumps(self):
        """List of (x, left value, right value) over all breakpoints."""
        return [
            (x, self.values[i], self.values[i + 1])
            for i, x in enumerate(self.breakpoints)
        ]

    def pieces(self, window):
        """Constant pieces of the profile clipped to window = (lo, hi).

        Yields (a, b, value) with lo <= a < b <= hi.  The window must be
        finite and nonempty.
        """
        lo, hi = window
        if not lo < hi:
            return
        edges = [lo]
        for x in self.breakpoints:
            if lo < x < hi:
                edges.append(x)
        edges.append(hi)
        for a, b in zip(edges, edges[1:]):
            yield a, b, self.value_at(a)

    def restrict_support(self):
        """(first breakpoint, last breakpoint), or None for a constant."""
        if not self.breakpoints:
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    def as_dict(self):
        return {
            "breakpoints": [_plain(x) for x in self.breakpoints],
            "values": [_plain(v) for v in self.values],
        }


def _plain(x):
    """JSON-friendly scalar: Fractions go out as 'p/q' strings."""
    from fractions import Fraction

    if isinstance(x, Fraction):
        return str(x)
    return x


plain_number = _plain


def profile_map2(p: Profile, q: Profile, fn) -> Profile:
    """Pointwise combination fn(p, q) as a compacted profile."""
    bps = sorted(set(p.breakpoints) | set(q.breakpoints))
    vals = [fn(p.far_left, q.far_left)]
    for x in bps:
        vals.append(fn(p.value_at(x), q.value_at(x)))
    return Profile.compacted(bps, vals)


def profile_difference(p: Profile, q: Profile) -> Profile:
    """p - q as a profile (used for the difference of two solutions)."""
    return profile_map2(p, q, lambda a, b: a - b)


def total_variation(p: Profile, window=None):
    """Sum of jump strengths, optionally only over breakpoints in [lo, hi]."""
    if window is None:
        return sum(
            (abs(b - a) for a, b in zip(p.values, p.values[1:])),
            start=_zero_like(p.values[0]),
        )
    lo, hi = window
    total = _zero_like(p.values[0])
    for x, vm, vp in p.jumps():
        if lo <= x <= hi:
            total += abs(vp - vm)
    return total


def _zero_like(x):
    return x - x


def l1_norm(p: Profile, window=None):
    """Integral of |p|.

    Without a window the profile must be compactly supported: both far
    values equal to zero.  With window = (lo, hi) the integral is taken
    over that finite interval, no support condition.
    """
    if window is None:
        if p.far_left != 0 or p.far_right != 0:
            raise ValueError(
                "l1_norm: profile lacks compact support; far values "
                f"({p.far_left}, {p.far_right}) must both be 0, or pass a window"
            )
        support = p.restrict_support()
        if support is None:
            return _zero_like(p.values[0])
        window = support
    lo, hi = window
    total = _zero_like(p.values[0])
    for a, b, v in p.pieces((lo, hi)):
        total += abs(v) * (b - a)
    return total


def lp_norm_power(p: Profile, exponent: int, window=None):
    """Integral of |p|^exponent (the p-th power, no root; exact over rationals)."""
    if window is None:
        if p.far_left != 0 or p.far_right != 0:
            raise ValueError("lp_norm_power: profile lacks compact support")
        support = p.restrict_support()
        if support is None:
            return _zero_like(p.values[0])
        window = support
    total = _zero_like(p.values[0])
    for a, b, v in p.pieces(window):
        total += abs(v) ** exponent * (b - a)
    return total


def sup_norm(p: Profile):
    return max(abs(v) for v in p.values)


def weighted_l1_norm(p: Profile, w: Profile, window=None):
    """Integral of |p| * w; w must be strictly positive everywhere."""
    if any(v <= 0 for v in w.values):
        raise ValueError("weighted_l1_norm: weight must be strictly positive")
    if window is None:
        if p.far_left != 0 or p.far_right != 0:
            raise ValueError("weighted_l1_norm: profile lacks compact support")
        support = p.restrict_support()
        if support is None:
            return _zero_like(p.values[0])
        window = support
    bps = sorted(set(p.breakpoints) | set(w.breakpoints))
    lo, hi = window
    total = _zero_like(p.values[0])
    edges = [lo] + [x for x in bps if lo < x < hi] + [hi]
    for a, b in zip(edges, edges[1:]):
        total += abs(p.value_at(a)) * w.value_at(a) * (b - a)
    return total


@dataclass(frozen=True)
class VariationFunction:
    """Cumulative variation x -> sum of |jump| of ``base`` at points <= x."""

    base: Profile

    def cumulative(self, x):
        total = _zero_like(self.base.values[0])
        for bp, vm, vp in self.base.jumps():
            if bp <= x:
                total += abs(vp - vm)
        return total

    @property
    def total(self):
        return total_variation(self.base)

    def atom_positions(self):
        return self.base.breakpoints


def mu_psi_atom(a_minus, lam, psi_minus, jump_size):
    """Point mass of the transport defect measure at a single jump.

    ``jump_size`` is the nonnegative strength |u(x+) - u(x-)| of the
    underlying solution's jump; ``a_minus`` the left trace of the averaged
    coefficient; ``lam`` the jump's propagation speed; ``psi_minus`` the left
    trace of the transported quantity.
    """
    if jump_size < 0:
        raise ValueError("jump_size: must be nonnegative")
    return (a_minus - lam) * psi_minus * jump_size


def nonconservative_product(
    flux: FluxModel, u: Profile, v: Profile, w_bv: VariationFunction, region,
    continuous_weight=None,
):
    """Measure of the nonconservative product (a(u, v) - f'(u)) (v - u) dW.

    ``w_bv`` supplies the BV weight W whose distributional derivative the
    product is taken against.  For piecewise-constant data the measure is
    purely atomic: at each atom x of W sitting on a jump of u, the atom is

        1/2 [ (a(u+, v+) - a(u-, u+)) (v+ - u+)
            + (a(u-, v-) - a(u-, u+)) (v- - u-) ] * |W(x+) - W(x-)|.

    ``region`` is a point x or an interval (lo, hi) (closed, atoms at the
    endpoints included).  ``continuous_weight`` optionally supplies a
    discretized absolutely-continuous part of dW as (x_k, mass_k) pairs,
    evaluated at continuity points of u, for resolution studies.
    """
    try:
        lo, hi = region
    except TypeError:
        lo = hi = region
    if lo > hi:
        raise ValueError("region: lo exceeds hi")

    total = _zero_like(u.values[0])
    for x in w_bv.atom_positions():
        if not lo <= x <= hi:
            continue
        um, up = u.left_value_at(x), u.value_at(x)
        vm, vp = v.left_value_at(x), v.value_at(x)
        if um == up:
            a_uu = flux.derivative(um)
        else:
            a_uu = secant_speed(flux, um, up)
        bm, bp = w_bv.base.left_value_at(x), w_bv.base.value_at(x)
        mass = abs(bp - bm)
        plus_term = (secant_speed(flux, up, vp) - a_uu) * (vp - up)
        minus_term = (secant_speed(flux, um, vm) - a_uu) * (vm - um)
        total += (plus_term + minus_term) * mass / 2

    if continuous_weight is not None:
        for x, mass in continuous_weight:
            if not lo <= x <= hi:
                continue
            ux = u.value_at(x)
            vx = v.value_at(x)
            total += (secant_speed(flux, ux, vx) - flux.derivative(ux)) * (vx - ux) * mass
    return total
