"""Averaged transport coefficient of a pair of tracked solutions.

Given two front-tracking runs u^I and u^II of the same conservation law, the
difference psi = u^II - u^I solves a linear transport equation whose
coefficient is the state-averaged (secant) speed a(x, t) between the two
solutions.  Every jump of a sits on a front of exactly one of the runs; this
module classifies those jumps (Lax / slow or fast undercompressive /
rarefaction-shock), partitions them by owning run, and builds the strength
weight used by the weighted-L1 decay functional.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

from .fluxes import secant_speed
from .profiles import Profile
from .tracking import FrontTrackingRun

LAX = "lax"
SLOW = "slow"
FAST = "fast"
RAREFACTION_SHOCK = "rarefaction_shock"

CLASSIFY_TOL = 1e-10
POSITION_TOL = 1e-12
TIE_MERGE = 1e-12


class DegenerateFieldError(ValueError):
    """Fronts of the two runs coincide: the averaged coefficient is ambiguous."""

    def __init__(self, position, time):
        self.position = position
        self.time = time
        super().__init__(
            f"fronts of both runs coincide at x={position} (t={time}); the "
            "coefficient field is degenerate there.  Perturb one run's initial "
            "breakpoints by at least 1e-9 to separate them."
        )


def _collapse_steps(positions, values) -> Profile:
    """Profile from raw step data that may contain zero-width pieces.

    At an event instant (fans at birth, fronts at a collision) several jumps
    share one position; only the net transition across the stack survives.
    """
    bps, vals = [], [values[0]]
    i, n = 0, len(positions)
    while i < n:
        j = i
        while j + 1 < n and positions[j + 1] == positions[i]:
            j += 1
        bps.append(positions[i])
        vals.append(values[j + 1])
        i = j + 1
    return Profile.compacted(bps, vals)


def classify(a_minus, a_plus, lam, tol=CLASSIFY_TOL):
    """Jump type of the coefficient from its traces and propagation speed.

    Lax: a_- > lam > a_+.  Slow undercompressive: lam <= min(a_-, a_+).
    Fast undercompressive: lam >= max(a_-, a_+).  Rarefaction-shock:
    a_- < lam < a_+.  Trace gaps within ``tol`` of zero snap to equality, so
    boundary cases land in the undercompressive classes; the doubly
    degenerate a_- = lam = a_+ resolves to "slow".
    """
    dm = a_minus - lam
    dp = a_plus - lam
    if abs(dm) <= tol:
        dm = 0
    if abs(dp) <= tol:
        dp = 0
    if dm > 0 and dp < 0:
        return LAX
    if dm < 0 and dp > 0:
        return RAREFACTION_SHOCK
    if dm >= 0 and dp >= 0:
        return SLOW
    return FAST


@dataclass(frozen=True)
class ClassifiedJump:
    """One jump of the averaged coefficient at a fixed time."""

    position: object
    time: object
    lam: object          # propagation speed of the owning front
    a_minus: object
    a_plus: object
    kind: str
    partition: str       # "I" or "II": which run's front carries the jump
    b_jump: object       # signed state jump of the owning run
    kappa_minus: object  # (u^II - u^I)(x-)
    kappa_plus: object   # (u^II - u^I)(x+)
    source_kind: str     # shock or fan provenance of the owning front
    front_uid: int

    @property
    def strength(self):
        return abs(self.b_jump)

    @property
    def key(self):
        return (self.partition, self.front_uid)

    def sign_table_consistent(self, state_tol=0):
        """Trace-sign relation: sgn(a_+- - lam) against -+sgn(kappa_-+).

        For partition I jumps sgn(a_- - lam) = sgn(kappa_+) and
        sgn(a_+ - lam) = sgn(kappa_-); partition II negates both.  Returns
        False only on a hard contradiction (both signs nonzero and opposed).
        """
        flip = 1 if self.partition == "I" else -1
        for d, kappa in (
            (self.a_minus - self.lam, self.kappa_plus),
            (self.a_plus - self.lam, self.kappa_minus),
        ):
            sd = 0 if abs(d) <= CLASSIFY_TOL else (1 if d > 0 else -1)
            sk = 0 if abs(kappa) <= state_tol else (1 if kappa > 0 else -1)
            if sd != 0 and sk != 0 and sd != flip * sk:
                return False
        return True


@dataclass(frozen=True)
class FieldSlice:
    """The coefficient field frozen at one interaction-free time."""

    time: object
    jumps: tuple            # ClassifiedJump, ordered by position
    a_values: tuple         # len(jumps) + 1 region values of a
    uI_values: tuple
    uII_values: tuple
    a_profile: Profile
    psi: Profile            # u^II - u^I

    def positions(self):
        return tuple(j.position for j in self.jumps)

    def position_of(self, jump, t):
        return jump.position + jump.lam * (t - self.time)

    def tv_b(self):
        z = self.time * 0
        return sum((j.strength for j in self.jumps), start=z)

    def tv_a(self):
        z = self.time * 0
        return sum((abs(j.a_plus - j.a_minus) for j in self.jumps), start=z)

    def strength_ratio_range(self):
        """(min, max) of |b jump| / |a jump| over the slice, None if no jumps."""
        ratios = [
            j.strength / abs(j.a_plus - j.a_minus)
            for j in self.jumps
            if j.a_plus != j.a_minus
        ]
        if not ratios:
            return None
        return min(ratios), max(ratios)


class CoefficientField:
    """Time-indexed view of the averaged coefficient of a run pair."""

    def __init__(self, run_I: FrontTrackingRun, run_II: FrontTrackingRun,
                 *, classification_tol=None):
        fI, fII = run_I.flux, run_II.flux
        if fI is not fII:
            lo, hi = fI.working_interval
            probes = (lo, (lo + hi) / 2, hi)
            same = (
                fI.name == fII.name
                and fI.working_interval == fII.working_interval
                and all(fI.evaluate(u) == fII.evaluate(u) for u in probes)
                and all(fI.derivative(u) == fII.derivative(u) for u in probes)
            )
            if not same:
                raise ValueError("runs must share a flux model")
        self.run_I = run_I
        self.run_II = run_II
        self.flux = fI
        self.exact = run_I.exact and run_II.exact
        if classification_tol is None:
            classification_tol = 0 if self.exact else CLASSIFY_TOL
        self.classification_tol = classification_tol
        self.position_tol = 0 if self.exact else POSITION_TOL
        self._crossings = None

    # -- slicing ------------------------------------------------------------

    def at(self, t) -> FieldSlice:
        fronts = [("I", f) for f in self.run_I.fronts_at(t)]
        fronts += [("II", f) for f in self.run_II.fronts_at(t)]
        tagged = sorted(
            ((f.position_at(t), tag, f) for tag, f in fronts), key=lambda r: r[0]
        )
        for (xa, tag_a, _), (xb, tag_b, _) in zip(tagged, tagged[1:]):
            if tag_a != tag_b and abs(xb - xa) <= self.position_tol * (1 + abs(xa)):
                raise DegenerateFieldError(xa, t)

        cur_I = (
            self.run_I.fronts_at(t)[0].left_state
            if self.run_I.fronts_at(t)
            else self.run_I.sample(t).far_left
        )
        cur_II = (
            self.run_II.fronts_at(t)[0].left_state
            if self.run_II.fronts_at(t)
            else self.run_II.sample(t).far_left
        )
        uI_vals = [cur_I]
        uII_vals = [cur_II]
        records = []
        for x, tag, f in tagged:
            records.append((x, tag, f, cur_I, cur_II))
            if tag == "I":
                cur_I = f.right_state
            else:
                cur_II = f.right_state
            uI_vals.append(cur_I)
            uII_vals.append(cur_II)

        a_vals = [secant_speed(self.flux, uI_vals[i], uII_vals[i])
                  for i in range(len(uI_vals))]
        jumps = []
        for i, (x, tag, f, uI_m, uII_m) in enumerate(records):
            jumps.append(
                ClassifiedJump(
                    position=x,
                    time=t,
                    lam=f.speed,
                    a_minus=a_vals[i],
                    a_plus=a_vals[i + 1],
                    kind=classify(a_vals[i], a_vals[i + 1], f.speed,
                                  self.classification_tol),
                    partition=tag,
                    b_jump=f.signed_jump,
                    kappa_minus=uII_vals[i] - uI_vals[i],
                    kappa_plus=uII_vals[i + 1] - uI_vals[i + 1],
                    source_kind=f.kind,
                    front_uid=f.uid,
                )
            )
        positions = [x for x, *_ in records]
        psi_vals = [uII_vals[i] - uI_vals[i] for i in range(len(uI_vals))]
        return FieldSlice(
            time=t,
            jumps=tuple(jumps),
            a_values=tuple(a_vals),
            uI_values=tuple(uI_vals),
            uII_values=tuple(uII_vals),
            a_profile=_collapse_steps(positions, a_vals),
            psi=_collapse_steps(positions, psi_vals),
        )

    # -- interaction structure ----------------------------------------------

    def _front_crossings(self):
        """Times where a run-I front crosses a run-II front.

        The two runs do not interact, so their fronts pass through each
        other; at the crossing instant the coefficient's jump set is
        degenerate and its traces rearrange.  These times delimit the
        interaction-free intervals together with both runs' own events.
        """
        if self._crossings is not None:
            return self._crossings
        horizon = min(self.run_I.evolved_until, self.run_II.evolved_until)
        out = []
        for fI in self.run_I.fronts:
            endI = fI.death_time if fI.death_time is not None else horizon
            for fII in self.run_II.fronts:
                ds = fI.speed - fII.speed
                if ds == 0:
                    continue
                endII = fII.death_time if fII.death_time is not None else horizon
                lo = max(fI.birth_time, fII.birth_time)
                hi = min(endI, endII)
                if not lo < hi:
                    continue
                tx = (
                    fII.birth_position - fII.speed * fII.birth_time
                    - fI.birth_position + fI.speed * fI.birth_time
                ) / ds
                if lo <= tx <= hi:
                    out.append(tx)
        self._crossings = sorted(out)
        return self._crossings

    def event_times(self, s, t):
        """Interaction times of the coefficient strictly inside (s, t)."""
        times = [e for e in self.run_I.event_times() if s < e < t]
        times += [e for e in self.run_II.event_times() if s < e < t]
        times += [e for e in self._front_crossings() if s < e < t]
        times.sort()
        merge_tol = 0 if self.exact else TIE_MERGE
        merged = []
        for e in times:
            if merged and e - merged[-1] <= merge_tol * (1 + abs(e)):
                continue
            merged.append(e)
        return merged


def build_coefficient(run_I, run_II, t, *, classification_tol=None):
    """One-off slice: (coefficient profile, classified jumps) at time t."""
    field = CoefficientField(run_I, run_II, classification_tol=classification_tol)
    s = field.at(t)
    return s.a_profile, list(s.jumps)


# ---------------------------------------------------------------------------
# Strength weight


@dataclass(frozen=True)
class WeightSlice:
    """Piecewise weight built from cumulative jump strengths at one time."""

    time: object
    m: object
    piece_values: tuple       # aligned with the field slice's pieces
    traces: tuple             # (w_minus, w_plus) per jump
    v_I_total: object
    v_II_total: object
    profile: Profile

    @property
    def tv_b(self):
        return self.v_I_total + self.v_II_total


class WeightField:
    """m plus cumulative strength, branch chosen by the sign of u^II - u^I.

    On pieces where the difference is positive the weight counts run-I
    strength still ahead plus run-II strength already passed; on the
    complement the roles swap.  Values stay within [m, m + TV(b)] and the
    jump of the weight across a slow (fast) undercompressive front is
    nonpositive (nonnegative).
    """

    def __init__(self, field: CoefficientField, m):
        if m < 0:
            raise ValueError("m: weight offset must be >= 0")
        self.field = field
        self.m = m

    def slice_at(self, t, fslice: Optional[FieldSlice] = None) -> WeightSlice:
        fs = fslice if fslice is not None else self.field.at(t)
        z = self.m * 0
        v_I_total = sum((j.strength for j in fs.jumps if j.partition == "I"), start=z)
        v_II_total = sum((j.strength for j in fs.jumps if j.partition == "II"), start=z)
        v_I = z
        v_II = z
        pieces = []
        n = len(fs.jumps)
        for i in range(n + 1):
            kappa = fs.uII_values[i] - fs.uI_values[i]
            if kappa > 0:
                w = self.m + (v_I_total - v_I) + v_II
            else:
                w = self.m + v_I + (v_II_total - v_II)
            pieces.append(w)
            if i < n:
                j = fs.jumps[i]
                if j.partition == "I":
                    v_I += j.strength
                else:
                    v_II += j.strength
        traces = tuple((pieces[i], pieces[i + 1]) for i in range(n))
        positions = [j.position for j in fs.jumps]
        return WeightSlice(
            time=t,
            m=self.m,
            piece_values=tuple(pieces),
            traces=traces,
            v_I_total=v_I_total,
            v_II_total=v_II_total,
            profile=_collapse_steps(positions, pieces),
        )


def build_weight(run_I, run_II, m, t):
    """One-off weight profile for a run pair at time t."""
    field = CoefficientField(run_I, run_II)
    return WeightField(field, m).slice_at(t).profile


def export_jumps_csv(field: CoefficientField, weight: WeightField, times, fileobj):
    """Classified-jump table (with weight traces) at the given times."""
    writer = csv.writer(fileobj)
    writer.writerow(
        ["t", "x", "kind", "partition", "lambda", "a_minus", "a_plus",
         "b_jump", "w_minus", "w_plus"]
    )
    for t in times:
        fs = field.at(t)
        ws = weight.slice_at(t, fs)
        for j, (wm, wp) in zip(fs.jumps, ws.traces):
            writer.writerow(
                [t, j.position, j.kind, j.partition, j.lam, j.a_minus,
                 j.a_plus, j.b_jump, wm, wp]
            )
