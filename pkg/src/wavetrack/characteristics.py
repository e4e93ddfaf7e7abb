"""Characteristic curves of the averaged transport coefficient.

The coefficient a(x, t) of the difference equation is piecewise constant
with finitely many straight jump curves between interaction times, so its
characteristics are exact polygonal lines.  Forward curves are unique in the
Filippov sense: compressive jumps capture them, undercompressive jumps let
them cross at the far-side speed, rarefaction-side jumps repel them.
Backward curves are generally non-unique at compressive jumps; the extremal
(leftmost / rightmost footed) selections are provided.

Works against a :class:`~wavetrack.coupling.CoefficientField` or against a
hand-built :class:`StaticField`.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field as dataclass_field

from .coupling import (
    FAST,
    LAX,
    RAREFACTION_SHOCK,
    SLOW,
    ClassifiedJump,
    CoefficientField,
    classify,
    _collapse_steps,
)
from .coupling import FieldSlice
from .tracking import FrontTrackingRun

ANCHOR_TOL = 1e-9


class StaticField:
    """Frozen coefficient field built by hand: straight jump curves forever.

    ``jumps`` is a list of (position at time 0, speed) pairs, ordered left to
    right; ``region_values`` the coefficient values between them (one more
    entry than jumps).  Optional ``kappa_values`` give a transported profile
    for the same geometry.  Queries past the first internal crossing of two
    jump curves are refused.
    """

    def __init__(self, jumps, region_values, kappa_values=None, *,
                 classification_tol=None, exact=False):
        jumps = [tuple(j) for j in jumps]
        region_values = tuple(region_values)
        if len(region_values) != len(jumps) + 1:
            raise ValueError("region_values: need one more value than jumps")
        for (xa, _), (xb, _) in zip(jumps, jumps[1:]):
            if not xa < xb:
                raise ValueError("jumps: positions must be strictly increasing")
        if kappa_values is None:
            kappa_values = tuple(v - v for v in region_values)
        kappa_values = tuple(kappa_values)
        if len(kappa_values) != len(region_values):
            raise ValueError("kappa_values: need one value per region")
        self.jump_data = jumps
        self.region_values = region_values
        self.kappa_values = kappa_values
        self.exact = exact
        self.classification_tol = (
            (0 if exact else 1e-10) if classification_tol is None
            else classification_tol
        )
        self.horizon = self._first_crossing()

    def _first_crossing(self):
        best = None
        for (xa, sa), (xb, sb) in zip(self.jump_data, self.jump_data[1:]):
            if sa > sb:
                t = (xb - xa) / (sa - sb)
                if best is None or t < best:
                    best = t
        return best

    def at(self, t) -> FieldSlice:
        if self.horizon is not None and t > self.horizon:
            raise ValueError(
                f"static field queried at t={t}, beyond the first internal "
                f"crossing at t={self.horizon}"
            )
        positions = [x + s * t for x, s in self.jump_data]
        jumps = []
        for i, ((_, lam), x) in enumerate(zip(self.jump_data, positions)):
            am, ap = self.region_values[i], self.region_values[i + 1]
            jumps.append(
                ClassifiedJump(
                    position=x,
                    time=t,
                    lam=lam,
                    a_minus=am,
                    a_plus=ap,
                    kind=classify(am, ap, lam, self.classification_tol),
                    partition="I",
                    b_jump=ap - am,
                    kappa_minus=self.kappa_values[i],
                    kappa_plus=self.kappa_values[i + 1],
                    source_kind="static",
                    front_uid=i,
                )
            )
        zero = [v - v for v in self.region_values]
        return FieldSlice(
            time=t,
            jumps=tuple(jumps),
            a_values=self.region_values,
            uI_values=tuple(zero),
            uII_values=self.kappa_values,
            a_profile=_collapse_steps(positions, list(self.region_values)),
            psi=_collapse_steps(positions, list(self.kappa_values)),
        )

    def event_times(self, s, t):
        return []


@dataclass(frozen=True)
class PathSegment:
    t0: object
    t1: object
    x0: object
    x1: object
    speed: object
    mode: str            # "region" or "front"
    detail: object = None

    def position_at(self, t):
        return self.x0 + self.speed * (t - self.t0)


@dataclass
class CharacteristicPath:
    """Polygonal characteristic, segments in increasing time order."""

    segments: list = dataclass_field(default_factory=list)

    @property
    def t_start(self):
        return self.segments[0].t0

    @property
    def t_end(self):
        return self.segments[-1].t1

    @property
    def start_position(self):
        return self.segments[0].x0

    @property
    def end_position(self):
        return self.segments[-1].x1

    def position_at(self, t):
        if not self.t_start <= t <= self.t_end:
            raise ValueError(f"t={t} outside path range "
                             f"[{self.t_start}, {self.t_end}]")
        for seg in self.segments:
            if t <= seg.t1:
                return seg.position_at(t)
        return self.segments[-1].x1

    def vertices(self):
        out = [(self.segments[0].t0, self.segments[0].x0)]
        out.extend((seg.t1, seg.x1) for seg in self.segments)
        return out

    def rides(self):
        """Segments spent locked onto a jump curve."""
        return [seg for seg in self.segments if seg.mode == "front"]


def _anchor_tol(field, x):
    return 0 if field.exact else ANCHOR_TOL * (1 + abs(x))


def _members_at(fslice, x, t, tol):
    """Slice indices of jump curves passing within tol of (x, t)."""
    return [
        k for k, j in enumerate(fslice.jumps)
        if abs(j.position + j.lam * (t - fslice.time) - x) <= tol
    ]


def _region_index(fslice, x, t):
    positions = [j.position + j.lam * (t - fslice.time) for j in fslice.jumps]
    return bisect_right(positions, x)


def _resolve(fslice, members, *, backward, tie_bias, where):
    """Feasible continuations from a point lying on a stack of jump curves.

    Returns ("region", index, speed) or ("ride", index, speed).  Forward, a
    gap between neighbours is feasible when its value is sandwiched by their
    speeds and a ride needs a compressive jump; backward the sandwich is
    reversed (faster curves lie to the left) and rides are never needed.
    """
    jumps = fslice.jumps
    k0, k1 = members[0], members[-1]
    candidates = []
    for rho in range(k0, k1 + 2):
        v = fslice.a_values[rho]
        if backward:
            ok_left = rho == k0 or v <= jumps[rho - 1].lam
            ok_right = rho == k1 + 1 or v >= jumps[rho].lam
        else:
            ok_left = rho == k0 or v >= jumps[rho - 1].lam
            ok_right = rho == k1 + 1 or v <= jumps[rho].lam
        if ok_left and ok_right:
            candidates.append(("region", rho, v))
    if not backward:
        for k in members:
            if jumps[k].kind == LAX:
                candidates.append(("ride", k, jumps[k].lam))
    if not candidates:
        kinds = sorted({jumps[k].kind for k in members})
        raise RuntimeError(
            f"no continuation {'backward' if backward else 'forward'} "
            f"at {where}: stack of {kinds} jumps offers no admissible branch"
        )
    if len(candidates) == 1:
        return candidates[0]
    if backward:
        # extremal selection: tie_bias=+1 largest speed (leftmost foot),
        # -1 smallest (rightmost foot)
        key = max if tie_bias > 0 else min
        return key(candidates, key=lambda c: c[2])
    if tie_bias > 0:
        return max(candidates, key=lambda c: c[2])
    if tie_bias < 0:
        return min(candidates, key=lambda c: c[2])
    raise RuntimeError(
        f"ambiguous start at {where}: {len(candidates)} feasible forward "
        "continuations; pass tie_bias=+1 or -1 to pick a side"
    )


def _state_at(field, fslice, x, t, *, backward, tie_bias):
    tol = _anchor_tol(field, x)
    members = _members_at(fslice, x, t, tol)
    if members:
        return _resolve(fslice, members, backward=backward,
                        tie_bias=tie_bias, where=f"(x={x}, t={t})")
    rho = _region_index(fslice, x, t)
    return ("region", rho, fslice.a_values[rho])


def _advance_forward(field, fslice, state, x, t_from, t_to, segments):
    """March within one interaction-free interval; returns final (state, x)."""
    jumps = fslice.jumps
    guard = 4 * len(jumps) + 16
    t = t_from
    while t < t_to:
        guard -= 1
        if guard < 0:
            raise RuntimeError("forward characteristic failed to make progress")
        mode, idx, speed = state
        if mode == "ride":
            j = jumps[idx]
            x1 = j.position + j.lam * (t_to - fslice.time)
            segments.append(PathSegment(t, t_to, x, x1, j.lam, "front",
                                        (j.partition, j.front_uid, j.kind)))
            return state, x1
        # find the first jump curve this region speed runs into
        hit_t, hit_k = None, None
        for k in (idx - 1, idx):
            if not 0 <= k < len(jumps):
                continue
            lam = jumps[k].lam
            q = jumps[k].position + lam * (t - fslice.time)
            gap = q - x
            rel = speed - lam
            if rel == 0:
                continue
            dt = gap / rel
            if dt <= 0:
                # a curve we are moving away from (or float-grazing)
                continue
            cand = t + dt
            if cand <= t_to and (hit_t is None or cand < hit_t):
                hit_t, hit_k = cand, k
        if hit_t is None:
            x1 = x + speed * (t_to - t)
            segments.append(PathSegment(t, t_to, x, x1, speed, "region", speed))
            return state, x1
        j = jumps[hit_k]
        x_hit = j.position + j.lam * (hit_t - fslice.time)
        segments.append(PathSegment(t, hit_t, x, x_hit, speed, "region", speed))
        x, t = x_hit, hit_t
        if j.kind == LAX:
            state = ("ride", hit_k, j.lam)
        elif j.kind == SLOW:
            state = ("region", hit_k + 1, fslice.a_values[hit_k + 1])
        elif j.kind == FAST:
            state = ("region", hit_k, fslice.a_values[hit_k])
        else:
            raise RuntimeError(
                f"forward characteristic ran into a rarefaction-side jump "
                f"at (x={x}, t={t}); the geometry is degenerate"
            )
    return state, x


def forward_characteristic(field, x0, t0, t_end, tie_bias=0):
    """Unique forward characteristic of the coefficient from (x0, t0).

    ``tie_bias`` only matters when the start point sits exactly on a jump
    curve with several feasible continuations (a rarefaction-side jump or a
    newborn fan stack): +1 picks the fastest branch, -1 the slowest, 0
    raises.
    """
    if not t0 < t_end:
        raise ValueError("need t0 < t_end")
    boundaries = [t0] + list(field.event_times(t0, t_end)) + [t_end]
    path = CharacteristicPath()
    x = x0
    for T0, T1 in zip(boundaries, boundaries[1:]):
        mid = T0 + (T1 - T0) / 2
        fslice = field.at(mid)
        state = _state_at(field, fslice, x, T0, backward=False,
                          tie_bias=tie_bias)
        state, x = _advance_forward(field, fslice, state, x, T0, T1,
                                    path.segments)
    return path


def _advance_backward(field, fslice, state, x, t_from, t_to, segments,
                      tie_bias):
    """March backward (t_from down to t_to) within one interval."""
    jumps = fslice.jumps
    guard = 4 * len(jumps) + 16
    t = t_from
    while t > t_to:
        guard -= 1
        if guard < 0:
            raise RuntimeError("backward characteristic failed to make progress")
        mode, idx, speed = state
        hit_t, hit_k = None, None
        for k in (idx - 1, idx):
            if not 0 <= k < len(jumps):
                continue
            lam = jumps[k].lam
            q = jumps[k].position + lam * (t - fslice.time)
            gap = q - x
            rel = speed - lam
            if rel == 0:
                continue
            dt = gap / rel     # going backward: need dt < 0
            if dt >= 0:
                continue
            cand = t + dt
            if cand >= t_to and (hit_t is None or cand > hit_t):
                hit_t, hit_k = cand, k
        if hit_t is None:
            x1 = x + speed * (t_to - t)
            segments.append(PathSegment(t_to, t, x1, x, speed, "region", speed))
            return state, x1
        j = jumps[hit_k]
        x_hit = j.position + j.lam * (hit_t - fslice.time)
        segments.append(PathSegment(hit_t, t, x_hit, x, speed, "region", speed))
        x, t = x_hit, hit_t
        if j.kind == SLOW:
            state = ("region", hit_k, fslice.a_values[hit_k])
        elif j.kind == FAST:
            state = ("region", hit_k + 1, fslice.a_values[hit_k + 1])
        elif j.kind == RAREFACTION_SHOCK:
            raise RuntimeError(
                f"backward characteristic captured by a rarefaction-side "
                f"jump at (x={x}, t={t})"
            )
        else:
            # compressive jumps repel backward paths; meeting one mid-interval
            # is a float-tie: resolve by feasibility
            state = _resolve(fslice, [hit_k], backward=True, tie_bias=tie_bias,
                             where=f"(x={x}, t={t})")
    return state, x


def backward_characteristic(field, x0, t0, t_stop=0, extremal="min"):
    """Extremal backward characteristic from (x0, t0) down to t_stop.

    ``extremal="min"`` follows the leftmost-footed branch (largest feasible
    speed at every decision point), ``"max"`` the rightmost-footed one.
    Decision points only arise on compressive jumps; rarefaction-side jumps
    capture backward paths and raise.
    """
    if extremal not in ("min", "max"):
        raise ValueError("extremal: must be 'min' or 'max'")
    if not t_stop < t0:
        raise ValueError("need t_stop < t0")
    tie_bias = 1 if extremal == "min" else -1
    boundaries = [t_stop] + list(field.event_times(t_stop, t0)) + [t0]
    rev_segments = []
    x = x0
    for T0, T1 in zip(boundaries[:-1][::-1], boundaries[1:][::-1]):
        # walking the interval [T0, T1] from T1 down to T0
        mid = T0 + (T1 - T0) / 2
        fslice = field.at(mid)
        state = _state_at(field, fslice, x, T1, backward=True,
                          tie_bias=tie_bias)
        chunk = []
        state, x = _advance_backward(field, fslice, state, x, T1, T0, chunk,
                                     tie_bias)
        rev_segments.extend(chunk)
    path = CharacteristicPath()
    path.segments = rev_segments[::-1]
    return path


def export_paths_csv(paths, fileobj):
    """Vertex table (path_id, t, x) of a list of characteristic paths."""
    import csv

    writer = csv.writer(fileobj)
    writer.writerow(["path_id", "t", "x"])
    for pid, path in enumerate(paths):
        for t, x in path.vertices():
            writer.writerow([pid, t, x])


# ---------------------------------------------------------------------------
# Entropy geometry checks


@dataclass
class OleinikReport:
    """One-sided compression check of a coefficient or solution field."""

    times: list
    shock_violations: list
    fan_allowance: object
    max_fan_jump: object
    fan_slope_constant: object   # sup over sampled times of t * du/dx on fans
    spread_constant: object      # sup f'' times mean of the two slope constants
    violations: list

    @property
    def passed(self):
        return not self.violations

    def to_dict(self):
        from .profiles import plain_number

        return {
            "times": [plain_number(t) for t in self.times],
            "fan_allowance": plain_number(self.fan_allowance),
            "max_fan_jump": plain_number(self.max_fan_jump),
            "fan_slope_constant": plain_number(self.fan_slope_constant),
            "spread_constant": plain_number(self.spread_constant),
            "passed": self.passed,
            "violations": list(self.violations),
        }


def _run_fan_slope(run: FrontTrackingRun, t):
    """Largest t * (state step) / (gap) over adjacent fan-member pairs."""
    fronts = run.fronts_at(t)
    best = 0
    for f, g in zip(fronts, fronts[1:]):
        if f.kind != "fan" or g.kind != "fan":
            continue
        if f.right_state != g.left_state:
            continue
        dx = g.position_at(t) - f.position_at(t)
        if dx <= 0:
            continue
        # state separation between the member midlevels
        du = abs((g.left_state + g.right_state) - (f.left_state + f.right_state)) / 2
        ratio = t * du / dx
        if ratio > best:
            best = ratio
    return best


def oleinik_report(target, times, tol_scale=1e-8) -> OleinikReport:
    """One-sided entropy geometry of a field at the given times.

    For a :class:`CoefficientField`, shock-borne coefficient jumps must be
    compressive or undercompressive (a_+ <= a_-) while fan-borne jumps may
    expand by at most sup|f''| h; rarefaction-side jumps on a shock are
    violations.  For a :class:`FrontTrackingRun`, shocks must be down-jumps
    and the discrete fan slopes stay below 1/c0.  For a :class:`StaticField`
    every expanding jump is flagged.
    """
    shock_violations = []
    violations = []
    max_fan_jump = 0
    fan_slope = 0
    spread = 0
    times = list(times)

    if isinstance(target, CoefficientField):
        exact = target.exact
        tol = 0 if exact else tol_scale
        f2 = target.flux.sup_f2
        h_by_partition = {"I": target.run_I.h, "II": target.run_II.h}
        allowance = f2 * max(h_by_partition.values())
        for t in times:
            fs = target.at(t)
            for j in fs.jumps:
                da = j.a_plus - j.a_minus
                if j.source_kind == "shock":
                    if da > tol:
                        shock_violations.append((t, j.position, da))
                        violations.append(
                            f"t={t}: shock-borne coefficient jump expands by "
                            f"{da} at x={j.position}"
                        )
                else:
                    cap = f2 * h_by_partition[j.partition]
                    if da > max_fan_jump:
                        max_fan_jump = da
                    if da > cap + tol:
                        violations.append(
                            f"t={t}: fan-borne coefficient jump {da} exceeds "
                            f"the resolution allowance {cap} at x={j.position}"
                        )
            cI = _run_fan_slope(target.run_I, t)
            cII = _run_fan_slope(target.run_II, t)
            fan_slope = max(fan_slope, cI, cII)
            spread = max(spread, f2 * (cI + cII) / 2)
            c0 = target.flux.convexity_modulus
            for run_name, c in (("first", cI), ("second", cII)):
                if c > 1 / c0 + tol_scale * (1 + 1 / c0):
                    violations.append(
                        f"t={t}: discrete fan slope {c} of the {run_name} run "
                        f"exceeds 1/c0 = {1 / c0}"
                    )
        return OleinikReport(times, shock_violations, allowance, max_fan_jump,
                             fan_slope, spread, violations)

    if isinstance(target, FrontTrackingRun):
        tol = 0 if target.exact else tol_scale
        c0 = target.flux.convexity_modulus
        f2 = target.flux.sup_f2
        for t in times:
            for f in target.fronts_at(t):
                if f.kind == "shock" and f.left_state - f.right_state <= -tol:
                    violations.append(
                        f"t={t}: shock with nondecreasing states "
                        f"({f.left_state} -> {f.right_state}) at "
                        f"x={f.position_at(t)}"
                    )
                if f.kind == "fan":
                    if f.signed_jump > max_fan_jump:
                        max_fan_jump = f.signed_jump
                    if f.signed_jump > target.h * (1 + tol_scale):
                        violations.append(
                            f"t={t}: fan member jump {f.signed_jump} exceeds "
                            f"the increment {target.h}"
                        )
            c = _run_fan_slope(target, t)
            fan_slope = max(fan_slope, c)
            spread = max(spread, f2 * c)
            if c > 1 / c0 + tol_scale * (1 + 1 / c0):
                violations.append(
                    f"t={t}: discrete fan slope {c} exceeds 1/c0 = {1 / c0}"
                )
        return OleinikReport(times, shock_violations, target.h, max_fan_jump,
                             fan_slope, spread, violations)

    # StaticField: strict, no resolution allowance
    tol = 0 if target.exact else tol_scale
    for t in times:
        fs = target.at(t)
        for j in fs.jumps:
            da = j.a_plus - j.a_minus
            if da > tol:
                shock_violations.append((t, j.position, da))
                violations.append(
                    f"t={t}: expanding jump ({j.kind}) of size {da} at "
                    f"x={j.position}"
                )
    return OleinikReport(times, shock_violations, 0, max_fan_jump,
                         fan_slope, spread, violations)


@dataclass
class MaxPrincipleReport:
    """Funnel nonnegativity and between-characteristics conservation."""

    interval: tuple
    t_end: object
    min_psi: object
    conservation_drift: object
    sample_times: list
    left_path: CharacteristicPath
    right_path: CharacteristicPath
    back_left: CharacteristicPath
    back_right: CharacteristicPath
    violations: list

    @property
    def passed(self):
        return not self.violations

    def to_dict(self):
        from .profiles import plain_number

        return {
            "interval": [plain_number(v) for v in self.interval],
            "t_end": plain_number(self.t_end),
            "min_psi": plain_number(self.min_psi),
            "conservation_drift": plain_number(self.conservation_drift),
            "n_samples": len(self.sample_times),
            "passed": self.passed,
            "violations": list(self.violations),
        }


def _psi_extent(fslice, lo, hi, *, want_min):
    """Min of psi over positive-width pieces meeting the open window."""
    best = None
    positions = [j.position for j in fslice.jumps]
    cuts = [lo] + [min(max(p, lo), hi) for p in positions] + [hi]
    for i in range(len(cuts) - 1):
        if cuts[i + 1] > cuts[i]:
            v = fslice.uII_values[i] - fslice.uI_values[i]
            if best is None or (v < best if want_min else v > best):
                best = v
    return best


def _psi_integral(fslice, lo, hi):
    """Signed integral of psi over (lo, hi); sign flips when lo > hi."""
    sign = 1
    if lo > hi:
        lo, hi, sign = hi, lo, -1
    positions = [j.position for j in fslice.jumps]
    cuts = [lo] + [min(max(p, lo), hi) for p in positions] + [hi]
    total = 0
    for i in range(len(cuts) - 1):
        if cuts[i + 1] > cuts[i]:
            v = fslice.uII_values[i] - fslice.uI_values[i]
            total += v * (cuts[i + 1] - cuts[i])
    return sign * total


def maximum_principle_check(field, interval, t_end, n_times=50, tol=1e-10):
    """Propagation of a sign through a characteristic funnel, plus the
    conserved mass between backward characteristics.

    Traces the forward characteristics from both ends of ``interval`` at
    t=0 and checks that the minimum of the transported difference inside
    the (open) funnel never falls below -tol at sampled times.  Separately,
    integrates the difference between the extremal backward characteristics
    dropped from the funnel ends at ``t_end`` and checks the integral is
    time invariant.
    """
    xi0, zeta0 = interval
    if not xi0 < zeta0:
        raise ValueError("interval: need xi0 < zeta0")
    if field.exact:
        tol = 0
    left = forward_characteristic(field, xi0, 0, t_end, tie_bias=-1)
    right = forward_characteristic(field, zeta0, 0, t_end, tie_bias=1)

    events = list(field.event_times(0, t_end))
    boundaries = [0] + events + [t_end]
    samples = [a + (b - a) / 2 for a, b in zip(boundaries, boundaries[1:])]
    gap_tol = 0 if field.exact else 1e-9
    for k in range(1, n_times):
        tau = k * t_end / n_times
        if all(abs(tau - e) > gap_tol for e in events):
            samples.append(tau)
    samples = sorted(set(samples))

    violations = []
    min_psi = None
    for tau in samples:
        fs = field.at(tau)
        lo = left.position_at(tau)
        hi = right.position_at(tau)
        if not lo < hi:
            continue
        m = _psi_extent(fs, lo, hi, want_min=True)
        if m is None:
            continue
        if min_psi is None or m < min_psi:
            min_psi = m
        if m < -tol:
            violations.append(
                f"t={tau}: transported difference dips to {m} inside the "
                f"funnel ({lo}, {hi})"
            )

    # conserved mass between extremal backward characteristics
    back_left = backward_characteristic(field, left.end_position, t_end,
                                        extremal="max")
    back_right = backward_characteristic(field, right.end_position, t_end,
                                         extremal="min")
    ref = None
    drift = 0
    for tau in samples:
        fs = field.at(tau)
        mass = _psi_integral(fs, back_left.position_at(tau),
                             back_right.position_at(tau))
        if ref is None:
            ref = mass
        else:
            d = abs(mass - ref)
            if d > drift:
                drift = d
    scale = 1 + (abs(ref) if ref is not None else 0)
    if drift > tol * scale:
        violations.append(
            f"mass between backward characteristics drifts by {drift}"
        )
    return MaxPrincipleReport(
        interval=tuple(interval),
        t_end=t_end,
        min_psi=min_psi,
        conservation_drift=drift,
        sample_times=samples,
        left_path=left,
        right_path=right,
        back_left=back_left,
        back_right=back_right,
        violations=violations,
    )
