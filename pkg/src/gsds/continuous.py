"""Piecewise-linear concentration curves and the hybrid simulator.

A sectional linear function is a continuous piecewise-linear curve:
strictly increasing breakpoints t0 < ... < tn and one (slope,
intercept) pair per interval [ti, ti+1], with adjacent segments agreeing
at the shared breakpoint.  Outside [t0, tn] the value is 0 by default
("zero"); "extend-last" instead continues the final segment past tn,
which the worked concentration curves use for their open-ended last
branch (the left side stays 0).

The hybrid simulator couples a discrete model to real concentrations:
each gene's concentration grows linearly with a slope chosen by its
current *activity* - the gene's coordinate of F(state), where state is
the thresholded concentration vector - and slopes are recomputed at
events.  Events are exact threshold crossings (roots of linear
equations, no numerical integration) plus floor hits at 0 for decaying
genes.  A concentration sitting exactly on a threshold classifies to
that threshold's "equal" level, so the state used to recompute slopes
at a crossing instant is the on-threshold one.

Sample files are CSV with header ``t,<gene>,<gene>,...``, one row per
time point.
"""

import csv
import json

from .errors import ContinuityError, ZenoError
from .network import global_map
from .translate import discretize

CONTINUITY_TOL = 1e-9
MAX_EVENTS = 10**6


class SectionalLinear:
    """A continuity-checked piecewise-linear function of time."""

    __slots__ = ("breakpoints", "segments", "outside_mode")

    def __init__(self, breakpoints, segments, outside_mode="zero"):
        breakpoints = tuple(float(t) for t in breakpoints)
        segments = tuple((float(a), float(b)) for a, b in segments)
        if len(breakpoints) < 2:
            raise ValueError("need at least two breakpoints")
        if any(b <= a for a, b in zip(breakpoints, breakpoints[1:])):
            raise ValueError(f"breakpoints must be strictly increasing: {breakpoints}")
        if len(segments) != len(breakpoints) - 1:
            raise ValueError(
                f"{len(breakpoints)} breakpoints need {len(breakpoints) - 1} "
                f"segments, got {len(segments)}"
            )
        if outside_mode not in ("zero", "extend-last"):
            raise ValueError(f"unknown outside_mode {outside_mode!r}")
        for k in range(len(segments) - 1):
            t = breakpoints[k + 1]
            left = segments[k][0] * t + segments[k][1]
            right = segments[k + 1][0] * t + segments[k + 1][1]
            if abs(left - right) > CONTINUITY_TOL:
                raise ContinuityError(t, right - left)
        self.breakpoints = breakpoints
        self.segments = segments
        self.outside_mode = outside_mode

    @property
    def support(self):
        return (self.breakpoints[0], self.breakpoints[-1])

    def value(self, t):
        t = float(t)
        if t < self.breakpoints[0]:
            return 0.0
        if t > self.breakpoints[-1]:
            if self.outside_mode == "extend-last":
                a, b = self.segments[-1]
                return a * t + b
            return 0.0
        # find the segment whose interval contains t; at an interior
        # breakpoint both neighbors agree by the continuity invariant
        lo, hi = 0, len(self.segments) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if t <= self.breakpoints[mid + 1]:
                hi = mid
            else:
                lo = mid + 1
        a, b = self.segments[lo]
        return a * t + b

    __call__ = value

    def sample(self, times):
        return [self.value(t) for t in times]


def make_sectional_linear(breakpoints, segments, outside_mode="zero"):
    return SectionalLinear(breakpoints, segments, outside_mode)


def eval_sectional(func, t):
    return func.value(t)


def fit_from_samples(times, values, outside_mode="zero"):
    """The piecewise-linear interpolant through consecutive samples."""
    times = [float(t) for t in times]
    values = [float(v) for v in values]
    if len(times) != len(values):
        raise ValueError("times and values differ in length")
    if len(times) < 2:
        raise ValueError("need at least two samples")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError(f"sample times must be strictly increasing: {times}")
    segments = []
    for k in range(len(times) - 1):
        a = (values[k + 1] - values[k]) / (times[k + 1] - times[k])
        segments.append((a, values[k] - a * times[k]))
    return SectionalLinear(times, segments, outside_mode)


class RatePolicy:
    """Per-gene map from discrete activity level to growth slope."""

    def __init__(self, rates, floor_at_zero=True):
        # rates: one {level: slope} dict per gene
        self.rates = [dict(r) for r in rates]
        self.floor_at_zero = floor_at_zero

    def slope(self, gene, level):
        try:
            return self.rates[gene][level]
        except KeyError:
            raise KeyError(
                f"no rate for gene index {gene} at level {level}"
            ) from None

    def check_coverage(self, model):
        for j, values in enumerate(model.state_sets):
            for v in values:
                self.slope(j, v)


class HybridEvent:
    """One threshold crossing or floor hit during a hybrid run."""

    __slots__ = ("time", "gene", "threshold", "kind", "old_state", "new_state")

    def __init__(self, time, gene, threshold, kind, old_state, new_state):
        self.time = time
        self.gene = gene
        self.threshold = threshold
        self.kind = kind  # "threshold" | "floor"
        self.old_state = old_state
        self.new_state = new_state

    def __repr__(self):
        return (
            f"HybridEvent(t={self.time}, gene={self.gene}, "
            f"threshold={self.threshold}, kind={self.kind}, "
            f"{self.old_state} -> {self.new_state})"
        )


class HybridResult:
    """Trajectories, events, and constant-state phases of a hybrid run."""

    def __init__(self, trajectories, events, phases, t_end):
        self.trajectories = trajectories  # one SectionalLinear per gene
        self.events = events
        self.phases = phases  # (t_start, t_end, discrete state at phase start)
        self.t_end = t_end


def hybrid_simulate(model, rates, tmap, c0, t_end, max_events=MAX_EVENTS):
    """Event-driven exact simulation of the coupled dynamics.

    Between events every concentration is linear with slope
    rates[gene][activity], activity being the gene's coordinate of
    F(discretize(c)) fixed at the latest event.  Event times are exact
    roots of the linear segments; simultaneous crossings are processed
    together, logged in ascending (gene, threshold) order.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    n = model.n
    if len(c0) != n or tmap.n != n:
        raise ValueError("initial vector, model, and thresholds disagree on gene count")
    rates.check_coverage(model)
    fmap = global_map(model)

    def slopes_for(state, conc):
        act = fmap(state)
        out = []
        for j in range(n):
            v = rates.slope(j, act[j])
            if rates.floor_at_zero and conc[j] <= 0 and v < 0:
                v = 0.0
            out.append(float(v))
        return out

    t = 0.0
    conc = [float(c) for c in c0]
    state = discretize(tmap, conc)
    slopes = slopes_for(state, conc)
    events = []
    phases = []
    breakpoints = [0.0]
    columns = [[c] for c in conc]  # concentration at each breakpoint
    phase_start = 0.0

    while True:
        # next crossing over all genes and thresholds, plus floor hits
        best_t = None
        crossings = []
        for j in range(n):
            v = slopes[j]
            if v == 0:
                continue
            targets = [(theta, "threshold") for theta in tmap.genes[j].thresholds]
            if rates.floor_at_zero and v < 0 and 0.0 not in tmap.genes[j].thresholds:
                targets.append((0.0, "floor"))
            for theta, kind in targets:
                if (v > 0 and conc[j] < theta) or (v < 0 and conc[j] > theta):
                    when = t + (theta - conc[j]) / v
                    if best_t is None or when < best_t:
                        best_t = when
                        crossings = [(j, theta, kind)]
                    elif when == best_t:
                        crossings.append((j, theta, kind))
        if best_t is None or best_t >= t_end:
            break
        if len(events) + len(crossings) > max_events:
            raise ZenoError(
                f"more than {max_events} events by t={best_t}; "
                f"the dynamics look Zeno"
            )
        # advance to the event and snap crossing genes exactly on target
        for j in range(n):
            conc[j] += slopes[j] * (best_t - t)
        for j, theta, _ in crossings:
            conc[j] = theta
        t = best_t
        old_state = state
        state = discretize(tmap, conc)
        for j, theta, kind in sorted(crossings):
            events.append(HybridEvent(t, j, theta, kind, old_state, state))
        phases.append((phase_start, t, old_state))
        phase_start = t
        breakpoints.append(t)
        for j in range(n):
            columns[j].append(conc[j])
        slopes = slopes_for(state, conc)

    # close the final phase and extend trajectories to t_end
    if t < t_end:
        phases.append((phase_start, t_end, state))
        breakpoints.append(t_end)
        for j in range(n):
            columns[j].append(conc[j] + slopes[j] * (t_end - t))
    trajectories = tuple(
        fit_from_samples(breakpoints, columns[j]) for j in range(n)
    )
    return HybridResult(trajectories, events, phases, t_end)


# -- rate files ----------------------------------------------------------


def rates_to_dict(policy, model):
    levels = {}
    for name, table in zip(model.genes, policy.rates):
        levels[name] = {
            model.format_level(level): slope for level, slope in sorted(table.items())
        }
    return {
        "format_version": 1,
        "floor_at_zero": policy.floor_at_zero,
        "rates": levels,
    }


def rates_from_dict(d, model):
    version = d.get("format_version", 1)
    if version != 1:
        raise ValueError(f"unsupported rates format_version {version}")
    rates = []
    for name in model.genes:
        table = d["rates"].get(name)
        if table is None:
            raise ValueError(f"rates missing for gene {name!r}")
        rates.append(
            {model.encode_level(int(k)): float(v) for k, v in table.items()}
        )
    return RatePolicy(rates, floor_at_zero=d.get("floor_at_zero", True))


def load_rates(path, model):
    with open(path) as fh:
        return rates_from_dict(json.load(fh), model)


def save_events_csv(path, events, genes, format_level=str):
    """Write a hybrid event log as CSV, one crossing per row."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "gene", "threshold", "kind", "old_state", "new_state"])
        for e in events:
            writer.writerow([
                _fmt(e.time),
                genes[e.gene],
                _fmt(e.threshold),
                e.kind,
                " ".join(format_level(v) for v in e.old_state),
                " ".join(format_level(v) for v in e.new_state),
            ])


# -- CSV samples ---------------------------------------------------------


def load_samples_csv(path):
    """Read a time series: returns (gene_names, times, sample_vectors)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0].strip() != "t":
            raise ValueError("sample CSV must start with a 't' header column")
        genes = [h.strip() for h in header[1:]]
        if not genes:
            raise ValueError("sample CSV has no gene columns")
        times = []
        rows = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(genes) + 1:
                raise ValueError(f"row {row!r} does not match the header")
            times.append(float(row[0]))
            rows.append(tuple(float(v) for v in row[1:]))
    return genes, times, rows


def save_samples_csv(path, genes, times, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + list(genes))
        for t, row in zip(times, rows):
            writer.writerow([_fmt(t)] + [_fmt(v) for v in row])


def _fmt(x):
    return format(float(x), "g")
