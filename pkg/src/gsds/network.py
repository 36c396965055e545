"""Gene-network models: dependency graph, per-gene state sets, local
update polynomials, and schedule words composed into a global map.

A model has n genes.  Gene i carries a coordinate polynomial f_i in the
variables x1..xn; the *local* update at i rewrites coordinate i to
f_i(x) and leaves every other coordinate alone.  A schedule word is a
sequence of gene indices; the global map applies the local updates in
word order (first entry first).  A model may instead be *parallel*
(schedule None): all coordinates are rewritten simultaneously, which is
how inferred coordinate functions are packaged.

Model files are JSON:

    {
      "format_version": 1,
      "field": 3,
      "genes": ["g1", "g2", "g3"],
      "states": {"g2": [0, 1]},            # optional, canonical values
      "edges": [["g1", "g2"], ...],
      "locals": {"g1": "x1 + x2", ...},
      "schedule": ["g1", "g2", "g3"],      # or null for parallel
      "display": "balanced"                # optional
    }
"""

import itertools
import json

from .errors import FieldMismatchError, ModelValidationError
from .ffield import Field, balanced_decode, balanced_encode
from .polyring import Polynomial, iter_points, parse_poly

FORMAT_VERSION = 1


class DependencyGraph:
    """Directed gene-interaction graph with symmetric 1-neighborhoods.

    Edges are stored directed (the worked examples draw directed
    graphs), but locality is an undirected notion: the neighborhood of a
    vertex is itself plus every vertex it shares an edge with, in either
    direction.
    """

    __slots__ = ("n", "edges")

    def __init__(self, n, edges):
        self.n = n
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a},{b}) references an unknown vertex")
        self.edges = frozenset((a, b) for a, b in edges)

    def neighborhood(self, i):
        """Vertex i, plus everything adjacent to it in either direction."""
        out = {i}
        for a, b in self.edges:
            if a == i:
                out.add(b)
            elif b == i:
                out.add(a)
        return frozenset(out)

    def __eq__(self, other):
        return (
            isinstance(other, DependencyGraph)
            and self.n == other.n
            and self.edges == other.edges
        )


class ValidationReport:
    """Violations found by validate_model; empty lists mean valid."""

    def __init__(self):
        self.locality = []  # (gene, variable, witness state pair)
        self.range = []  # (gene, input state, value)
        self.schedule = []  # (position, entry)

    @property
    def valid(self):
        return not (self.locality or self.range or self.schedule)

    def lines(self, genes=None):
        name = lambda i: genes[i] if genes else f"#{i}"
        out = []
        for gene, var, (s1, s2) in self.locality:
            out.append(
                f"locality: f[{name(gene)}] depends on x{var} outside its "
                f"neighborhood (witness {s1} vs {s2})"
            )
        for gene, state, value in self.range:
            out.append(
                f"range: f[{name(gene)}]{state} = {value}, outside the "
                f"gene's state set"
            )
        for pos, entry in self.schedule:
            out.append(f"schedule: entry {entry!r} at position {pos} is not a gene")
        return out

    def __str__(self):
        return "\n".join(self.lines()) if not self.valid else "valid"


class GsdsModel:
    """A gene network: graph, state sets, local polynomials, schedule."""

    def __init__(self, field, genes, graph, local_polys, schedule,
                 state_sets=None, display="canonical"):
        n = len(genes)
        if len(set(genes)) != n:
            raise ValueError("gene names must be distinct")
        if len(local_polys) != n:
            raise ValueError(f"need one local polynomial per gene, got {len(local_polys)}")
        for p in local_polys:
            if p.field != field or p.n_vars != n:
                raise FieldMismatchError(
                    f"local polynomial {p!r} does not live in GF({field.order})[x1..x{n}]"
                )
        if graph.n != n:
            raise ValueError("graph vertex count does not match gene count")
        if state_sets is None:
            state_sets = [tuple(field.elements())] * n
        state_sets = tuple(tuple(sorted(field.check(v) for v in s)) for s in state_sets)
        for name, s in zip(genes, state_sets):
            if not s:
                raise ValueError(f"gene {name!r} has an empty state set")
        if schedule is not None:
            schedule = tuple(schedule)
            for i in schedule:
                if not 0 <= i < n:
                    raise ValueError(f"schedule entry {i} is not a gene index")
        if display not in ("canonical", "balanced"):
            raise ValueError(f"unknown display mode {display!r}")
        if display == "balanced":
            balanced_encode(field, 0)  # raises for fields without the encoding
        self.field = field
        self.genes = tuple(genes)
        self.graph = graph
        self.local_polys = tuple(local_polys)
        self.schedule = schedule
        self.state_sets = state_sets
        self.display = display

    @property
    def n(self):
        return len(self.genes)

    @property
    def parallel(self):
        return self.schedule is None

    def gene_index(self, name):
        try:
            return self.genes.index(name)
        except ValueError:
            raise KeyError(f"unknown gene {name!r}") from None

    # -- state space ---------------------------------------------------

    def state_count(self):
        total = 1
        for s in self.state_sets:
            total *= len(s)
        return total

    def iter_states(self):
        """All states of the product space, first gene most significant."""
        return itertools.product(*self.state_sets)

    def state_index(self, state):
        """Mixed-radix index of a state (gene 1 most significant)."""
        idx = 0
        for v, values in zip(state, self.state_sets):
            idx = idx * len(values) + values.index(v)
        return idx

    def state_at(self, index):
        digits = []
        for values in reversed(self.state_sets):
            index, r = divmod(index, len(values))
            digits.append(values[r])
        return tuple(reversed(digits))

    def contains_state(self, state):
        return len(state) == self.n and all(
            v in values for v, values in zip(state, self.state_sets)
        )

    def check_state(self, state):
        if not self.contains_state(state):
            raise ValueError(f"state {state} is outside the model's state space")
        return tuple(state)

    # -- display -------------------------------------------------------

    def format_level(self, value):
        if self.display == "balanced":
            return str(balanced_decode(self.field, value))
        return str(value)

    def encode_level(self, value):
        """External level (balanced or canonical per display) to canonical."""
        if self.display == "balanced":
            return balanced_encode(self.field, value)
        return self.field.check(value)

    def decode_level(self, value):
        if self.display == "balanced":
            return balanced_decode(self.field, value)
        return value

    def format_state(self, state):
        return "(" + ",".join(self.format_level(v) for v in state) + ")"


def apply_local(model, i, state):
    """Apply gene i's local update: only coordinate i may change."""
    state = model.check_state(state)
    value = model.local_polys[i].eval(state)
    return state[:i] + (value,) + state[i + 1 :]


class GlobalMap:
    """The composed update map of a model, callable on states."""

    def __init__(self, model):
        self.model = model
        self._poly_cache = {}

    def __call__(self, state):
        m = self.model
        if m.parallel:
            return tuple(p.eval(state) for p in m.local_polys)
        current = list(state)
        for i in m.schedule:
            current[i] = m.local_polys[i].eval(current)
        return tuple(current)

    def coordinate_polys(self, method="symbolic"):
        """The parallel coordinate functions F1..Fn as reduced polynomials.

        ``symbolic`` composes the local polynomials along the schedule;
        ``interpolate`` rebuilds each coordinate from the full truth
        table over the ambient field.  The two agree on reduced form.
        """
        if method in self._poly_cache:
            return self._poly_cache[method]
        m = self.model
        if method == "symbolic":
            coords = [
                Polynomial.variable(m.field, m.n, j + 1) for j in range(m.n)
            ]
            if m.parallel:
                coords = list(m.local_polys)
            else:
                for i in m.schedule:
                    coords[i] = m.local_polys[i].compose(coords)
            result = tuple(coords)
        elif method == "interpolate":
            from .infer import TransitionData, interpolate

            pairs = [(p, self(p)) for p in iter_points(m.field, m.n)]
            data = TransitionData(m.field, m.n, pairs)
            result = tuple(interpolate(data, i) for i in range(m.n))
        else:
            raise ValueError(f"unknown method {method!r}")
        self._poly_cache[method] = result
        return result

    def truth_table(self, ambient=False):
        """Outputs over the model's state space (or the full field space)."""
        m = self.model
        points = iter_points(m.field, m.n) if ambient else m.iter_states()
        return tuple(self(p) for p in points)


def global_map(model, validate=True):
    """The model's composed map; validates the model first by default."""
    if validate:
        report = validate_model(model)
        if not report.valid:
            raise ModelValidationError(report)
    return GlobalMap(model)


def step(model, state):
    return GlobalMap(model)(state)


def trajectory(model, state, steps):
    """The orbit [state, F(state), ..., F^steps(state)]."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    f = GlobalMap(model)
    out = [model.check_state(state)]
    for _ in range(steps):
        out.append(f(out[-1]))
    return out


def validate_model(model):
    """Exhaustively check locality, value ranges, and the schedule.

    Dependence over any product domain implies membership in the
    reduced-form support, so only support variables outside a vertex's
    neighborhood are probed for a witness pair.
    """
    report = ValidationReport()
    domain = list(model.state_sets)
    for i, poly in enumerate(model.local_polys):
        allowed = model.graph.neighborhood(i)
        for var in sorted(poly.support()):
            if (var - 1) in allowed:
                continue
            witness = poly._probe_variable(var - 1, domain)
            if witness:
                report.locality.append((i, var, witness))
        values = set(model.state_sets[i])
        for state in model.iter_states():
            v = poly.eval(state)
            if v not in values:
                report.range.append((i, state, v))
    return report


def parallel_to_sequential(coordinate_polys, field=None, genes=None):
    """Represent a parallel map as a schedule-driven model on 2n genes.

    Shadow genes first copy the current state; the original genes are
    then rewritten from the shadows, so the composed map restricted to
    the first n coordinates equals the parallel map.
    """
    polys = list(coordinate_polys)
    if not polys:
        raise ValueError("need at least one coordinate function")
    field = field or polys[0].field
    n = polys[0].n_vars
    if genes is None:
        genes = [f"g{j + 1}" for j in range(n)]
    names = list(genes) + [f"{g}__copy" for g in genes]

    def widen(poly, shift):
        terms = {}
        for exps, coeff in poly.terms.items():
            wide = [0] * (2 * n)
            for j, e in enumerate(exps):
                wide[j + shift] = e
            terms[tuple(wide)] = coeff
        return Polynomial(field, 2 * n, terms)

    locals_ = [widen(p, n) for p in polys]  # originals read the shadows
    locals_ += [
        Polynomial.variable(field, 2 * n, j + 1) for j in range(n)
    ]  # shadows copy the originals
    edges = set()
    for j in range(n):
        edges.add((j, n + j))  # original feeds its shadow
        for var in sorted(locals_[j].support()):
            edges.add((var - 1, j))  # shadow feeds the original
    schedule = tuple(range(n, 2 * n)) + tuple(range(n))
    return GsdsModel(
        field,
        names,
        DependencyGraph(2 * n, edges),
        locals_,
        schedule,
    )


# -- model files -------------------------------------------------------


def model_to_dict(model):
    d = {
        "format_version": FORMAT_VERSION,
        "field": model.field.order,
        "genes": list(model.genes),
    }
    default = tuple(model.field.elements())
    states = {
        g: [model.decode_level(v) for v in values]
        for g, values in zip(model.genes, model.state_sets)
        if values != default
    }
    if states:
        d["states"] = states
    d["edges"] = sorted(
        [model.genes[a], model.genes[b]] for a, b in model.graph.edges
    )
    d["locals"] = {g: p.render() for g, p in zip(model.genes, model.local_polys)}
    d["schedule"] = (
        None if model.parallel else [model.genes[i] for i in model.schedule]
    )
    if model.display != "canonical":
        d["display"] = model.display
    return d


def model_from_dict(d):
    version = d.get("format_version", 1)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {version}")
    field = Field(d["field"])
    genes = list(d["genes"])
    n = len(genes)
    index = {g: i for i, g in enumerate(genes)}
    display = d.get("display", "canonical")

    def decode(v):
        return balanced_encode(field, v) if display == "balanced" else field.check(v)

    state_sets = None
    if d.get("states"):
        state_sets = []
        for g in genes:
            raw = d["states"].get(g)
            state_sets.append(
                tuple(field.elements()) if raw is None else tuple(decode(v) for v in raw)
            )
    edges = set()
    for a, b in d.get("edges", []):
        if a not in index or b not in index:
            raise ValueError(f"edge [{a!r}, {b!r}] references an unknown gene")
        edges.add((index[a], index[b]))
    locals_ = []
    for g in genes:
        text = d["locals"].get(g)
        if text is None:
            raise ValueError(f"missing local polynomial for gene {g!r}")
        locals_.append(parse_poly(text, n, field))
    schedule = d.get("schedule")
    if schedule is not None:
        report = ValidationReport()
        resolved = []
        for pos, name in enumerate(schedule):
            if name in index:
                resolved.append(index[name])
            else:
                report.schedule.append((pos, name))
        if not report.valid:
            raise ModelValidationError(report)
        schedule = resolved
    return GsdsModel(
        field,
        genes,
        DependencyGraph(n, edges),
        locals_,
        schedule,
        state_sets=state_sets,
        display=display,
    )


def save_model(model, path):
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))
