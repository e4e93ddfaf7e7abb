"""Event-driven front tracking for a scalar conservation law with convex flux.

Every Riemann problem in the initial data is resolved into finitely many
fronts: a single shock for a down jump, a fan of small entropy-violating
up-jumps (state increments at most h) for an up jump.  Fronts travel at
their exact jump speed, so the piecewise-constant profile is an exact weak
solution; the only approximation is the h-resolution of rarefactions.

Collisions are handled through a priority queue keyed by adjacent-pair
collision times.  Colliding fronts merge into a single outgoing front (for
convex flux no interaction can emit more than one wave), so the front count
is strictly decreasing and the run terminates.
"""
from __future__ import annotations

import csv
import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

from .fluxes import FluxModel, rankine_hugoniot_speed
from .profiles import Profile

SHOCK = "shock"
FAN = "fan"

# Simultaneity window for collision events; exact mode uses 0.
TIE_TOL = 1e-12
# A recomputed collision time may precede the current time by at most this
# much before the run is declared inconsistent.
TIME_TOL = 1e-9


@dataclass
class Front:
    """One straight-line front: constant states and constant speed for life."""

    uid: int
    left_state: object
    right_state: object
    speed: object
    kind: str
    birth_time: object = 0
    birth_position: object = 0
    death_time: Optional[object] = None

    def position_at(self, t):
        return self.birth_position + self.speed * (t - self.birth_time)

    @property
    def strength(self):
        return abs(self.right_state - self.left_state)

    @property
    def signed_jump(self):
        return self.right_state - self.left_state


@dataclass(frozen=True)
class InteractionEvent:
    time: object
    position: object
    incoming: tuple
    outgoing: Optional[int]


def solve_riemann(flux: FluxModel, u_left, u_right, h):
    """Resolve one Riemann problem into a list of fronts at the origin.

    Down jump -> one shock at the Rankine-Hugoniot speed.  Up jump -> a fan
    of ceil((u_right - u_left)/h) fronts with equal state increments, whose
    speeds are strictly increasing by convexity.  Equal states -> no fronts.
    """
    if not h > 0:
        raise ValueError("h: resolution must be > 0")
    if u_left == u_right:
        return []
    if u_left > u_right:
        return [
            Front(
                uid=-1,
                left_state=u_left,
                right_state=u_right,
                speed=rankine_hugoniot_speed(flux, u_left, u_right),
                kind=SHOCK,
            )
        ]
    n = math.ceil((u_right - u_left) / h)
    step = (u_right - u_left) / n
    fronts = []
    lo = u_left
    for k in range(n):
        hi = u_right if k == n - 1 else u_left + (k + 1) * step
        fronts.append(
            Front(
                uid=-1,
                left_state=lo,
                right_state=hi,
                speed=rankine_hugoniot_speed(flux, lo, hi),
                kind=FAN,
            )
        )
        lo = hi
    for a, b in zip(fronts, fronts[1:]):
        if not a.speed < b.speed:
            raise AssertionError("fan speeds must increase strictly")
    return fronts


def sample_initial_data(generator, support, n_cells: int) -> Profile:
    """Midpoint-sample a function on [lo, hi] into a compact profile.

    The background outside the support is 0, with breakpoints at both
    support edges; cell values are the generator at cell midpoints.
    """
    lo, hi = support
    if not lo < hi:
        raise ValueError("support: must satisfy lo < hi")
    if n_cells < 1:
        raise ValueError("n_cells: must be >= 1")
    width = (hi - lo) / n_cells
    bps = [lo + k * width for k in range(n_cells)] + [hi]
    vals = [width * 0]  # zero in the arithmetic of the support endpoints
    for k in range(n_cells):
        vals.append(generator(lo + k * width + width / 2))
    vals.append(width * 0)
    return Profile.compacted(bps, vals)


class FrontTrackingRun:
    """Full space-time wave pattern of one front-tracking solution.

    The run is built from an initial profile and evolved lazily with
    :meth:`evolve`; a completed run is treated as immutable and can be
    sampled at any time up to the evolved horizon.
    """

    def __init__(self, flux: FluxModel, initial: Profile, h, *, exact=False):
        if not h > 0:
            raise ValueError("h: resolution must be > 0")
        for v in initial.values:
            if not flux.contains(v):
                raise ValueError(
                    f"initial data value {v} outside flux working interval "
                    f"{flux.working_interval}"
                )
        self.flux = flux
        self.h = h
        self.initial = initial
        self.exact = exact
        self.tie_tol = 0 if exact else TIE_TOL
        self.time_tol = 0 if exact else TIME_TOL

        self.fronts: list[Front] = []
        self.events: list[InteractionEvent] = []
        self._next: dict[int, Optional[int]] = {}
        self._prev: dict[int, Optional[int]] = {}
        self._heap: list = []
        self._seq = 0
        self._clock = initial.breakpoints[0] * 0 if initial.breakpoints else 0
        self.evolved_until = self._clock

        prev_uid = None
        for x, vm, vp in initial.jumps():
            for f in solve_riemann(flux, vm, vp, h):
                uid = len(self.fronts)
                placed = Front(
                    uid=uid,
                    left_state=f.left_state,
                    right_state=f.right_state,
                    speed=f.speed,
                    kind=f.kind,
                    birth_time=self._clock,
                    birth_position=x,
                )
                self.fronts.append(placed)
                self._prev[uid] = prev_uid
                self._next[uid] = None
                if prev_uid is not None:
                    self._next[prev_uid] = uid
                prev_uid = uid
        self._first = 0 if self.fronts else None
        for f in self.fronts:
            nxt = self._next[f.uid]
            if nxt is not None:
                self._schedule(f.uid, nxt)

    # -- queue mechanics ---------------------------------------------------

    def _alive(self, uid):
        return self.fronts[uid].death_time is None

    def _collision(self, uid_l, uid_r):
        """(time, position) where two adjacent fronts meet, or None."""
        fl, fr = self.fronts[uid_l], self.fronts[uid_r]
        ds = fl.speed - fr.speed
        if not ds > 0:
            return None
        gap = fr.position_at(self._clock) - fl.position_at(self._clock)
        t = self._clock + gap / ds
        if t < self._clock - self.time_tol:
            raise RuntimeError(
                f"collision time {t} precedes current time {self._clock}: "
                "inconsistent front kinematics"
            )
        if t < self._clock:
            t = self._clock
        x = fl.position_at(t)
        return t, x

    def _schedule(self, uid_l, uid_r):
        hit = self._collision(uid_l, uid_r)
        if hit is None:
            return
        t, x = hit
        heapq.heappush(self._heap, (t, x, self._seq, uid_l, uid_r))
        self._seq += 1

    def _pop_next_event(self, t_end):
        """Earliest valid collision at or before t_end; ties resolved
        left-to-right by collision position."""
        while self._heap:
            top = self._heap[0]
            t0 = top[0]
            if t0 > t_end:
                return None
            batch = []
            while self._heap and self._heap[0][0] <= t0 + self.tie_tol:
                entry = heapq.heappop(self._heap)
                _, _, _, ul, ur = entry
                if self._alive(ul) and self._alive(ur) and self._next[ul] == ur:
                    batch.append(entry)
            if not batch:
                continue
            batch.sort(key=lambda e: (e[1], e[0], e[2]))
            chosen = batch[0]
            for other in batch[1:]:
                heapq.heappush(self._heap, other)
            return chosen
        return None

    # -- evolution ----------------------------------------------------------

    def evolve(self, t_end):
        """Advance through all collisions up to and including time t_end."""
        if t_end < self.evolved_until:
            return self
        while True:
            entry = self._pop_next_event(t_end)
            if entry is None:
                break
            t, x, _, ul, ur = entry
            self._process(t, x, ul, ur)
        self.evolved_until = t_end
        return self

    def _process(self, t, x, uid_l, uid_r):
        fl, fr = self.fronts[uid_l], self.fronts[uid_r]
        if fl.right_state != fr.left_state:
            raise AssertionError("adjacent fronts lost state continuity")
        fl.death_time = t
        fr.death_time = t
        self._clock = t

        before = self._prev[uid_l]
        after = self._next[uid_r]
        waves = solve_riemann(self.flux, fl.left_state, fr.right_state, self.h)
        if len(waves) > 1:
            raise AssertionError("interaction emitted more than one front")

        out_uid = None
        if waves:
            w = waves[0]
            # convex interactions only ever merge into a down jump
            if w.right_state > w.left_state and w.strength > self.h * (1 + 1e-9):
                raise AssertionError("interaction produced an oversized up-jump")
            out_uid = len(self.fronts)
            self.fronts.append(
                Front(
                    uid=out_uid,
                    left_state=w.left_state,
                    right_state=w.right_state,
                    speed=w.speed,
                    kind=SHOCK if w.right_state < w.left_state else FAN,
                    birth_time=t,
                    birth_position=x,
                )
            )
            self._prev[out_uid] = before
            self._next[out_uid] = after

        link = out_uid  # may be None when states cancelled exactly
        if before is not None:
            self._next[before] = link if link is not None else after
        else:
            self._first = link if link is not None else after
        if after is not None:
            self._prev[after] = link if link is not None else before
        if link is None and after is not None and before is not None:
            # bridge: neighbours become adjacent
            self._schedule(before, after)
        if link is not None:
            if before is not None:
                self._schedule(before, link)
            if after is not None:
                self._schedule(link, after)

        self.events.append(
            InteractionEvent(time=t, position=x, incoming=(uid_l, uid_r), outgoing=out_uid)
        )

    # -- queries ------------------------------------------------------------

    def _check_horizon(self, t):
        if t > self.evolved_until:
            raise ValueError(
                f"t={t} beyond evolved horizon {self.evolved_until}; call evolve first"
            )

    def fronts_at(self, t):
        """Alive fronts at time t (post-interaction at event times), ordered."""
        self._check_horizon(t)
        out = [
            f
            for f in self.fronts
            if f.birth_time <= t and (f.death_time is None or f.death_time > t)
        ]
        out.sort(key=lambda f: (f.position_at(t), f.speed))
        return out

    def sample(self, t) -> Profile:
        """Solution profile at time t."""
        fronts = self.fronts_at(t)
        if not fronts:
            return Profile.constant(self.initial.far_left)
        bps = [fronts[0].position_at(t)]
        vals = [fronts[0].left_state, fronts[0].right_state]
        for f in fronts[1:]:
            if f.left_state != vals[-1]:
                raise AssertionError("state chain broken while sampling")
            x = f.position_at(t)
            if x == bps[-1]:
                # transient zero-width piece exactly at an interaction point
                vals[-1] = f.right_state
                continue
            bps.append(x)
            vals.append(f.right_state)
        return Profile.compacted(bps, vals)

    def event_times(self):
        return [e.time for e in self.events]

    @property
    def alive_count(self):
        return sum(1 for f in self.fronts if f.death_time is None)

    def wave_segments(self, horizon=None):
        """One row per front for the space-time wave diagram."""
        horizon = self.evolved_until if horizon is None else horizon
        rows = []
        for f in self.fronts:
            t_end = f.death_time if f.death_time is not None else horizon
            rows.append(
                {
                    "front": f.uid,
                    "t_start": f.birth_time,
                    "x_start": f.birth_position,
                    "t_end": t_end,
                    "x_end": f.position_at(t_end),
                    "left": f.left_state,
                    "right": f.right_state,
                    "kind": f.kind,
                }
            )
        return rows

    def export_wave_csv(self, fileobj, horizon=None):
        writer = csv.DictWriter(
            fileobj,
            fieldnames=[
                "front", "t_start", "x_start", "t_end", "x_end",
                "left", "right", "kind",
            ],
        )
        writer.writeheader()
        for row in self.wave_segments(horizon):
            writer.writerow(row)
