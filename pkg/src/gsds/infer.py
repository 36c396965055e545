"""Reverse-engineering of network models from observed state transitions.

A set of observed transitions is a *partially defined function*: outputs
are known on some subset S of GF(q)^n.  Per coordinate, the interpolants
form an affine space of dimension q^n - |S|: one particular solution
(the indicator-sum interpolant, which vanishes off S) plus the span of
the indicator polynomials of the unspecified points.  The sparsest
member with respect to variable support is found by searching variable
subsets in order of increasing size and solving the interpolation
constraints restricted to monomials in those variables.

Series files are JSON:

    {
      "format_version": 1,
      "field": 3,
      "genes": ["g1", "g2", "g3"],      # optional
      "display": "balanced",            # optional
      "states": [[-1, 1, -1], [0, 1, 0], ...]
    }
"""

import itertools
import json

from .errors import ContradictoryDataError
from .ffield import Field, balanced_decode, balanced_encode
from .network import DependencyGraph, GsdsModel
from .polyring import Polynomial, indicator_poly, iter_points

FORMAT_VERSION = 1
SPARSEST_MAX_VARS = 12
CONSTRAINED_MAX_UNKNOWNS = 1 << 14


class TransitionData:
    """Deterministic input -> output state observations over GF(q)^n."""

    def __init__(self, field, n, pairs):
        self.field = field
        self.n = n
        mapping = {}
        ordered = []
        for state, image in pairs:
            state = tuple(field.check(v) for v in state)
            image = tuple(field.check(v) for v in image)
            if len(state) != n or len(image) != n:
                raise ValueError(f"transition {state} -> {image} is not {n}-dimensional")
            if state in mapping:
                if mapping[state] != image:
                    raise ContradictoryDataError(state, mapping[state], image)
                continue
            mapping[state] = image
            ordered.append((state, image))
        self.pairs = tuple(ordered)

    @classmethod
    def from_series(cls, field, states):
        states = [tuple(s) for s in states]
        return cls(field, len(states[0]) if states else 0,
                   list(zip(states, states[1:])))

    def inputs(self):
        return [s for s, _ in self.pairs]

    def coordinate_view(self, coordinate):
        return [(s, image[coordinate]) for s, image in self.pairs]

    def __len__(self):
        return len(self.pairs)


def interpolate(data, coordinate):
    """The indicator-sum interpolant for one coordinate.

    Exact on every observed input and zero on all unspecified points,
    making it the canonical particular solution.
    """
    result = Polynomial.zero(data.field, data.n)
    for state, value in data.coordinate_view(coordinate):
        if value:
            result = result + indicator_poly(data.field, state).scale(value)
    return result


class SolutionSpace:
    """All interpolants of one coordinate: particular + indicator span."""

    def __init__(self, field, n, pairs, particular, basis):
        self.field = field
        self.n = n
        self.pairs = pairs  # (input state, output value)
        self.particular = particular
        self.basis = basis

    @property
    def dimension(self):
        return len(self.basis)

    def is_solution(self, poly):
        """Membership test: a polynomial is a solution iff it interpolates
        every specified point."""
        return all(poly.eval(state) == value for state, value in self.pairs)

    def member(self, coefficients):
        """particular + sum of coefficient * basis polynomial."""
        if len(coefficients) != len(self.basis):
            raise ValueError(f"need {len(self.basis)} coefficients")
        result = self.particular
        for c, b in zip(coefficients, self.basis):
            if c:
                result = result + b.scale(c)
        return result


def solution_space(data, coordinate):
    specified = set(data.inputs())
    basis = tuple(
        indicator_poly(data.field, p)
        for p in iter_points(data.field, data.n)
        if p not in specified
    )
    return SolutionSpace(
        data.field,
        data.n,
        tuple(data.coordinate_view(coordinate)),
        interpolate(data, coordinate),
        basis,
    )


def _solve_linear(field, rows, rhs):
    """One solution of A x = b over the field (free unknowns set to 0),
    or None if the system is inconsistent."""
    rows = [list(r) + [b] for r, b in zip(rows, rhs)]
    cols = len(rows[0]) - 1 if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [
                    field.sub(v, field.mul(factor, w))
                    for v, w in zip(rows[i], rows[r])
                ]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            return None
    solution = [0] * cols
    for i, c in enumerate(pivots):
        solution[c] = rows[i][-1]
    return solution


def constrained_interpolate(data, coordinate, allowed_vars):
    """An interpolant supported on the given variables, or None.

    Solves the interpolation constraints restricted to monomials in
    ``allowed_vars`` (1-based indices); free coefficients are set to 0,
    so the result is deterministic.
    """
    allowed = sorted(set(allowed_vars))
    for v in allowed:
        if not 1 <= v <= data.n:
            raise ValueError(f"variable index {v} outside 1..{data.n}")
    q = data.field.order
    if q ** len(allowed) > CONSTRAINED_MAX_UNKNOWNS:
        raise ValueError(
            f"{q}^{len(allowed)} unknowns exceed the solver limit "
            f"({CONSTRAINED_MAX_UNKNOWNS})"
        )
    monomials = []
    for partial in itertools.product(range(q), repeat=len(allowed)):
        exps = [0] * data.n
        for v, e in zip(allowed, partial):
            exps[v - 1] = e
        monomials.append(tuple(exps))
    view = data.coordinate_view(coordinate)
    f = data.field
    rows = []
    for state, _ in view:
        row = []
        for exps in monomials:
            v = 1
            for x, e in zip(state, exps):
                if e:
                    v = f.mul(v, f.pow(x, e))
            row.append(v)
        rows.append(row)
    solution = _solve_linear(f, rows, [value for _, value in view])
    if solution is None:
        return None
    return Polynomial(
        f, data.n, {e: c for e, c in zip(monomials, solution) if c}
    )


def sparsest_interpolate(data, coordinate):
    """The interpolant with the fewest support variables.

    Searches subsets in order of increasing size, lexicographic within a
    size, and returns the first feasible constrained interpolant; by the
    search order no strict subset of its support is feasible.
    """
    if data.n > SPARSEST_MAX_VARS:
        raise ValueError(
            f"sparsest search supports at most {SPARSEST_MAX_VARS} variables, "
            f"got {data.n}"
        )
    for size in range(data.n + 1):
        for subset in itertools.combinations(range(1, data.n + 1), size):
            poly = constrained_interpolate(data, coordinate, subset)
            if poly is not None:
                return poly
    raise AssertionError("unreachable: the full variable set always interpolates")


class InferenceResult:
    """Inferred coordinate polynomials packaged as a parallel model."""

    def __init__(self, model, coordinate_polys, dimensions, preference):
        self.model = model
        self.coordinate_polys = coordinate_polys
        self.dimensions = dimensions
        self.preference = preference

    @property
    def edges(self):
        return sorted(self.model.graph.edges)


def infer_network(field, series, preference="canonical", genes=None,
                  display="canonical"):
    """Fit one polynomial per coordinate to consecutive series pairs.

    ``canonical`` uses the indicator-sum interpolant; ``sparsest``
    minimizes the number of support variables.  The dependency graph has
    an edge j -> i exactly when coordinate i's polynomial depends on
    x_j.  The model is parallel (no schedule): the inferred polynomials
    are coordinate functions of the global map, not local update order.
    """
    if preference not in ("canonical", "sparsest"):
        raise ValueError(f"unknown preference {preference!r}")
    if len(series) < 2:
        raise ValueError("need at least two states to form transitions")
    data = TransitionData.from_series(field, series)
    n = data.n
    if genes is None:
        genes = [f"g{j + 1}" for j in range(n)]
    polys = []
    dimensions = []
    for i in range(n):
        if preference == "sparsest":
            polys.append(sparsest_interpolate(data, i))
        else:
            polys.append(interpolate(data, i))
        dimensions.append(field.order**n - len(data))
    edges = set()
    for i, poly in enumerate(polys):
        for var in poly.support():
            edges.add((var - 1, i))
    model = GsdsModel(
        field,
        genes,
        DependencyGraph(n, edges),
        polys,
        schedule=None,
        display=display,
    )
    return InferenceResult(model, tuple(polys), dimensions, preference)


# -- series files -------------------------------------------------------


class StateSeries:
    """A sequence of observed discrete states with display metadata."""

    def __init__(self, field, states, genes=None, display="canonical"):
        self.field = field
        self.states = [tuple(field.check(v) for v in s) for s in states]
        self.genes = list(genes) if genes else None
        self.display = display


def series_to_dict(series):
    decode = (
        (lambda v: balanced_decode(series.field, v))
        if series.display == "balanced"
        else (lambda v: v)
    )
    d = {"format_version": FORMAT_VERSION, "field": series.field.order}
    if series.genes:
        d["genes"] = series.genes
    if series.display != "canonical":
        d["display"] = series.display
    d["states"] = [[decode(v) for v in s] for s in series.states]
    return d


def series_from_dict(d):
    version = d.get("format_version", 1)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported series format_version {version}")
    field = Field(d["field"])
    display = d.get("display", "canonical")
    encode = (
        (lambda v: balanced_encode(field, v))
        if display == "balanced"
        else (lambda v: field.check(v))
    )
    states = [tuple(encode(v) for v in s) for s in d["states"]]
    return StateSeries(field, states, d.get("genes"), display)


def save_series(series, path):
    with open(path, "w") as fh:
        json.dump(series_to_dict(series), fh, indent=2)
        fh.write("\n")


def load_series(path):
    with open(path) as fh:
        return series_from_dict(json.load(fh))
