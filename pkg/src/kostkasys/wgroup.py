"""Finite complex reflection groups, character tables and preorders on Irr(W).

A group is given by matrices acting on h.  The representation is faithful,
so matrices double as group elements.  Elements are enumerated breadth
first from the generators, each with a word in the generators
(``word = [i, j, ...]`` means ``g_i g_j ...``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from math import gcd

import jsonschema

from .errors import InputError, MalleViolation
from .linalg import gauss_rank, gauss_rref, identity, matmul
from .scalars import Cyclo, as_cyclo, cyclo_conj, poly_trim


def _key(M):
    return tuple(tuple(x.coeffs for x in row) for row in M)


def _lcm(a, b):
    return a * b // gcd(a, b)


class ReflectionGroup:
    """Elements, words, multiplication table and conjugacy classes."""

    def __init__(self, name, conductor, dim_h, generators, elements, words):
        self.name = name
        self.conductor = conductor
        self.dim_h = dim_h
        self.generators = generators
        self.elements = elements
        self.words = words
        self.order = len(elements)
        self._index = {_key(M): i for i, M in enumerate(elements)}
        self.classes = self._conjugacy_classes()

    # -- element bookkeeping ---------------------------------------------
    def index(self, M):
        return self._index[_key(M)]

    def element_of_word(self, word):
        M = identity(self.dim_h, Cyclo.rational(1, self.conductor))
        for i in word:
            M = matmul(M, self.generators[i])
        return self.index(M)

    @cached_property
    def mult_table(self):
        table = []
        for A in self.elements:
            table.append([self.index(matmul(A, B)) for B in self.elements])
        return table

    @cached_property
    def inverses(self):
        e = 0
        inv = [None] * self.order
        for i in range(self.order):
            for j in range(self.order):
                if self.mult_table[i][j] == e:
                    inv[i] = j
                    break
        return inv

    def mul(self, i, j):
        return self.mult_table[i][j]

    def _conjugacy_classes(self):
        gens_inv = []
        for g in self.generators:
            R, _ = gauss_rref([list(row) + [Cyclo.rational(int(i == j), self.conductor)
                                            for j in range(self.dim_h)]
                               for i, row in enumerate(g)])
            gens_inv.append([row[self.dim_h:] for row in R])
        seen = [None] * self.order
        classes = []
        for start in range(self.order):
            if seen[start] is not None:
                continue
            orbit = [start]
            seen[start] = len(classes)
            frontier = [start]
            while frontier:
                nxt = []
                for x in frontier:
                    X = self.elements[x]
                    for g, gi in zip(self.generators, gens_inv):
                        y = self.index(matmul(matmul(g, X), gi))
                        if seen[y] is None:
                            seen[y] = len(classes)
                            orbit.append(y)
                            nxt.append(y)
                frontier = nxt
            classes.append(sorted(orbit))
        self.class_of = seen
        return classes

    def reorder_classes(self, order):
        """Permute the class list (used to align with a given table)."""
        self.classes = [self.classes[i] for i in order]
        for c, members in enumerate(self.classes):
            for x in members:
                self.class_of[x] = c

    @property
    def class_sizes(self):
        return [len(c) for c in self.classes]

    @property
    def class_reps(self):
        return [c[0] for c in self.classes]

    def trace(self, i):
        M = self.elements[i]
        acc = Cyclo.rational(0, self.conductor)
        for k in range(self.dim_h):
            acc = acc + M[k][k]
        return acc

    def __repr__(self):
        return f"ReflectionGroup({self.name!r}, order={self.order}, classes={len(self.classes)})"


def generate_group(generators, bound=10000, dim_h=None, conductor=None, name=""):
    """Breadth-first closure of a set of matrices over Cyclo."""
    gens = [[[as_cyclo(x) for x in row] for row in g] for g in generators]
    if dim_h is None:
        if not gens:
            raise ValueError("dim_h is required when there are no generators")
        dim_h = len(gens[0])
    for g in gens:
        if len(g) != dim_h or any(len(row) != dim_h for row in g):
            raise InputError("invalid-generator: generators must be square of equal size")
    N = 1
    for g in gens:
        for row in g:
            for x in row:
                N = _lcm(N, x.conductor)
    if conductor is not None:
        if conductor % N:
            raise InputError("invalid-generator: entries outside the declared conductor")
        N = conductor
    gens = [[[x.lift(N) for x in row] for row in g] for g in gens]
    for g in gens:
        if gauss_rank(g) < dim_h:
            raise InputError("invalid-generator: generator is not invertible")
    one = identity(dim_h, Cyclo.rational(1, N))
    elements = [one]
    words = [[]]
    index = {_key(one): 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(gens):
                Y = matmul(g, elements[x])
                k = _key(Y)
                if k not in index:
                    if len(elements) >= bound:
                        raise InputError(f"group-too-large: closure exceeds {bound} elements")
                    index[k] = len(elements)
                    elements.append(Y)
                    words.append([gi] + words[x])
                    nxt.append(index[k])
        frontier = nxt
    return ReflectionGroup(name, N, dim_h, gens, elements, words)


def char_poly_h(G, w):
    """det(1 - q w) on h as a coefficient tuple (Cyclo entries, low degree first).

    Uses the Faddeev-LeVerrier recursion: the coefficients of det(1 - q w)
    are those of det(x - w) read from the top.
    """
    A = G.elements[w] if isinstance(w, int) else w
    n = len(A)
    N = G.conductor
    one = Cyclo.rational(1, N)
    zero = Cyclo.rational(0, N)
    coeffs = [one]
    M = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        M = matmul(A, M)
        M = [[M[i][j] + (coeffs[-1] if i == j else zero) for j in range(n)] for i in range(n)]
        AM = matmul(A, M)
        tr = zero
        for i in range(n):
            tr = tr + AM[i][i]
        coeffs.append(tr * Fraction(-1, k))
    return tuple(coeffs)


def cycle_type(G, w):
    """Cycle type of a permutation matrix element, read off det(1 - q w).

    For S_n acting on its reflection representation, (1 - q) det(1 - q w)
    equals the product over cycles of (1 - q^len).
    """
    from .scalars import poly_divmod, poly_mul
    p = tuple(c.to_fraction() for c in char_poly_h(G, w))
    p = poly_mul(p, (Fraction(1), Fraction(-1)))
    parts = []
    while len(poly_trim(p)) > 1:
        k = next(i for i in range(1, len(p)) if p[i] != 0)
        f = tuple([Fraction(1)] + [Fraction(0)] * (k - 1) + [Fraction(-1)])
        q, r = poly_divmod(p, f)
        if r:
            raise ValueError("not a permutation-type element")
        p = q
        parts.append(k)
    parts += [1] * (G.dim_h + 1 - sum(parts))
    return tuple(sorted(parts, reverse=True))


# ---------------------------------------------------------------------------
# character tables

@dataclass
class CharacterTable:
    names: list
    rows: list  # rows[chi][class] : Cyclo
    class_labels: list = None
    aliases: dict = field(default_factory=dict)

    @property
    def dims(self):
        return [int(r[0].to_fraction()) for r in self.rows]

    def __len__(self):
        return len(self.rows)

    def index(self, label):
        if isinstance(label, int):
            return label
        if label in self.names:
            return self.names.index(label)
        if label in self.aliases:
            return self.aliases[label]
        raise InputError(f"unknown character label {label!r}")

    def trivial(self):
        for i, r in enumerate(self.rows):
            if all(x == 1 for x in r):
                return i
        raise InputError("table has no trivial character")

    def value(self, G, chi, w):
        return self.rows[chi][G.class_of[w]]


def partitions(n, largest=None):
    """Partitions of n, each as a tuple, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return out


@lru_cache(maxsize=None)
def mn_character(lam, mu):
    """chi_lam(mu) by the Murnaghan-Nakayama rule on beta-numbers."""
    if not mu:
        return 1 if sum(lam) == 0 else 0
    r, rest = mu[0], mu[1:]
    ell = len(lam)
    beta = [lam[i] + (ell - 1 - i) for i in range(ell)]
    bset = set(beta)
    total = 0
    for b in beta:
        t = b - r
        if t < 0 or t in bset:
            continue
        height = sum(1 for x in beta if t < x < b)
        nb = sorted((bset - {b}) | {t}, reverse=True)
        new = tuple(x - (ell - 1 - i) for i, x in enumerate(nb))
        new = tuple(x for x in new if x > 0)
        total += (-1) ** height * mn_character(new, rest)
    return total


def partition_name(lam):
    return "(" + ",".join(str(x) for x in lam) + ")"


def sn_character_table(n):
    """Character table of S_n; rows and columns both indexed by partitions in
    lexicographically increasing order, so (1^n) comes first."""
    if not 1 <= n <= 8:
        raise InputError("unsupported-rank: n must lie in 1..8")
    parts = sorted(partitions(n))
    rows = [[Cyclo.rational(mn_character(lam, mu)) for mu in parts] for lam in parts]
    names = [partition_name(lam) for lam in parts]
    aliases = {}
    for i, lam in enumerate(parts):
        aliases["".join(map(str, lam))] = i
        aliases[lam] = i
    aliases["triv"] = parts.index((n,))
    aliases["sgn"] = parts.index(tuple([1] * n))
    return CharacterTable(names, rows, class_labels=parts, aliases=aliases)


@dataclass
class ValidationReport:
    ok: bool
    failures: list
    checked: list

    def __bool__(self):
        return self.ok


def _inner(G, a, b):
    acc = Cyclo.rational(0, G.conductor)
    for c, size in enumerate(G.class_sizes):
        acc = acc + a[c] * cyclo_conj(b[c]) * size
    return acc / G.order


def validate_character_table(G, T):
    """Check the orthogonality relations and the reflection character."""
    failures, checked = [], []
    k = len(G.classes)
    checked.append("row count")
    if len(T.rows) != k or any(len(r) != k for r in T.rows):
        failures.append(f"row count: table has {len(T.rows)} rows of lengths "
                        f"{sorted(set(len(r) for r in T.rows))}, group has {k} classes")
        return ValidationReport(False, failures, checked)
    rows = [[as_cyclo(x, G.conductor) for x in r] for r in T.rows]
    for i in range(k):
        for j in range(i, k):
            v = _inner(G, rows[i], rows[j])
            checked.append(f"row orthogonality <{T.names[i]},{T.names[j]}>")
            if v != (1 if i == j else 0):
                failures.append(f"row orthogonality <{T.names[i]},{T.names[j]}> = {v}, "
                                f"expected {1 if i == j else 0}")
    for c in range(k):
        for d in range(c, k):
            acc = Cyclo.rational(0, G.conductor)
            for r in rows:
                acc = acc + r[c] * cyclo_conj(r[d])
            want = Fraction(G.order, G.class_sizes[c]) if c == d else 0
            checked.append(f"column orthogonality ({c},{d})")
            if acc != want:
                failures.append(f"column orthogonality ({c},{d}) = {acc}, expected {want}")
    checked.append("sum of squared degrees")
    try:
        dims = [r[0].to_fraction() for r in rows]
        if sum(d * d for d in dims) != G.order:
            failures.append(f"sum of squared degrees = {sum(d * d for d in dims)}, "
                            f"expected {G.order}")
    except ValueError:
        failures.append("sum of squared degrees: degree is not rational")
    checked.append("reflection character")
    refl = [G.trace(G.class_reps[c]) for c in range(k)]
    for i, r in enumerate(rows):
        m = _inner(G, refl, r)
        if not m.is_rational() or m.to_fraction() < 0 or m.to_fraction().denominator != 1:
            failures.append(f"reflection character: multiplicity of {T.names[i]} is {m}")
    return ValidationReport(not failures, failures, checked)


def conjugate_character(T, chi):
    target = [cyclo_conj(x) for x in T.rows[chi]]
    for j, r in enumerate(T.rows):
        if all(a == b for a, b in zip(r, target)):
            return j
    raise InputError(f"table-not-closed-under-conjugation at {T.names[chi]}")


def conjugation_map(T):
    return [conjugate_character(T, i) for i in range(len(T.rows))]


# ---------------------------------------------------------------------------
# group data files

_CYCLO_SCHEMA = {
    "type": "object",
    "required": ["conductor", "coeffs"],
    "properties": {
        "conductor": {"type": "integer", "minimum": 1},
        "coeffs": {"type": "array", "items": {
            "type": "array", "minItems": 2, "maxItems": 2,
            "items": {"type": "string", "pattern": "^-?[0-9]+$"}}},
    },
    "additionalProperties": False,
}

GROUP_SCHEMA = {
    "type": "object",
    "required": ["format", "name", "conductor", "dim_h", "generators", "characters",
                 "class_reps", "class_sizes"],
    "properties": {
        "format": {"const": 1},
        "name": {"type": "string"},
        "conductor": {"type": "integer", "minimum": 1},
        "dim_h": {"type": "integer", "minimum": 0},
        "generators": {"type": "array", "items": {
            "type": "array", "items": {"type": "array", "items": _CYCLO_SCHEMA}}},
        "characters": {"type": "array", "items": {
            "type": "object", "required": ["name", "values"],
            "properties": {"name": {"type": "string"},
                           "values": {"type": "array", "items": _CYCLO_SCHEMA}},
            "additionalProperties": False}},
        "class_reps": {"type": "array", "items": {
            "type": "array", "items": {"type": "integer", "minimum": 0}}},
        "class_sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
}

PREORDER_SCHEMA = {
    "type": "object",
    "required": ["phyla"],
    "properties": {
        "format": {"const": 1},
        "group": {"type": "string"},
        "description": {"type": "string"},
        "phyla": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
    },
    "additionalProperties": False,
}


def load_group_file(doc, bound=10000):
    """Build and validate (group, table) from a group data document."""
    try:
        jsonschema.validate(doc, GROUP_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(f"group file schema violation: {exc.message}") from None
    N = doc["conductor"]
    gens = [[[Cyclo.from_json(x) for x in row] for row in g] for g in doc["generators"]]
    G = generate_group(gens, bound=bound, dim_h=doc["dim_h"], conductor=N, name=doc["name"])
    reps = doc["class_reps"]
    if len(reps) != len(G.classes):
        raise InputError(f"group file lists {len(reps)} classes, closure has {len(G.classes)}")
    order = []
    for word in reps:
        if any(i >= len(gens) for i in word):
            raise InputError("class representative word uses an unknown generator")
        order.append(G.class_of[G.element_of_word(word)])
    if sorted(order) != list(range(len(G.classes))):
        raise InputError("class representatives do not hit every class exactly once")
    if order[0] != G.class_of[0]:
        raise InputError("the first class representative must be the identity")
    G.reorder_classes(order)
    if list(doc["class_sizes"]) != G.class_sizes:
        raise InputError(f"class sizes {doc['class_sizes']} do not match closure "
                         f"{G.class_sizes}")
    names = [c["name"] for c in doc["characters"]]
    if len(set(names)) != len(names):
        raise InputError("duplicate character names")
    rows = [[Cyclo.from_json(v).lift(N) if N % Cyclo.from_json(v).conductor == 0
             else _bad_conductor() for v in c["values"]] for c in doc["characters"]]
    T = CharacterTable(names, rows)
    rep = validate_character_table(G, T)
    if not rep.ok:
        raise InputError("character table validation failed: " + "; ".join(rep.failures))
    return G, T


def _bad_conductor():
    raise InputError("character value outside the declared conductor")


def _data_doc(filename):
    return json.loads(resources.files("kostkasys").joinpath("data", filename).read_text())


# ---------------------------------------------------------------------------
# built-in groups

def symmetric_group(n):
    """S_n on its reflection representation, basis e_i - e_n (i < n).

    Classes are aligned with the columns of ``sn_character_table(n)``.
    """
    if not 2 <= n <= 8:
        raise InputError("unsupported-rank: built-in S_n needs 2 <= n <= 8")
    gens = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(_perm_on_h(perm))
    G = generate_group(gens, bound=50000, name=f"S{n}")
    T = sn_character_table(n)
    types = [cycle_type(G, G.class_reps[c]) for c in range(len(G.classes))]
    order = [types.index(lab) for lab in T.class_labels]
    G.reorder_classes(order)
    return G, T


def _perm_on_h(perm):
    n = len(perm)
    # image of e_j - e_n is e_perm(j) - e_perm(n), expressed in the basis
    M = [[0] * (n - 1) for _ in range(n - 1)]
    for j in range(n - 1):
        vec = [0] * n
        vec[perm[j]] += 1
        vec[perm[n - 1]] -= 1
        # v = sum c_i (e_i - e_n) has c_i = v_i for i < n
        for i in range(n - 1):
            M[i][j] = vec[i]
    return [[Cyclo.rational(x) for x in row] for row in M]


def trivial_group():
    G = generate_group([], dim_h=1, name="trivial")
    T = CharacterTable(["triv"], [[Cyclo.rational(1)]])
    return G, T


DATA_GROUPS = {"B2": "B2.json", "G2": "G2.json", "C3": "C3.json"}
DATA_PREORDERS = {"B2": "B2-springer.json", "G2": "G2-springer.json", "C3": "C3-default.json"}
BUILTIN_NAMES = ["trivial", "S2", "S3", "S4", "B2", "G2", "C3"]


@lru_cache(maxsize=None)
def builtin_group(name):
    if name == "trivial":
        return trivial_group()
    if name.startswith("S") and name[1:].isdigit():
        return symmetric_group(int(name[1:]))
    if name in DATA_GROUPS:
        return load_group_file(_data_doc(DATA_GROUPS[name]))
    raise InputError(f"unknown built-in group {name!r}")


# ---------------------------------------------------------------------------
# preorders

@dataclass(frozen=True)
class Preorder:
    """Phyla listed from minimal to maximal; each phylum a tuple of row indices."""
    phyla: tuple

    @cached_property
    def phylum_of(self):
        out = {}
        for p, ph in enumerate(self.phyla):
            for i in ph:
                out[i] = p
        return out

    def le(self, a, b):
        return self.phylum_of[a] <= self.phylum_of[b]

    def lt(self, a, b):
        return self.phylum_of[a] < self.phylum_of[b]

    def equiv(self, a, b):
        return self.phylum_of[a] == self.phylum_of[b]

    def ordering(self):
        return [i for ph in self.phyla for i in sorted(ph)]

    def blocks(self):
        """Phyla as lists of positions in ``ordering()``."""
        out, pos = [], 0
        for ph in self.phyla:
            out.append(list(range(pos, pos + len(ph))))
            pos += len(ph)
        return out


def load_preorder(T, phyla):
    """Preorder from an ascending list of label lists."""
    seen = []
    out = []
    for ph in phyla:
        if not ph:
            raise InputError("invalid-partition: empty phylum")
        idx = []
        for label in ph:
            i = T.index(label)
            if i in seen:
                raise InputError(f"invalid-partition: {T.names[i]} listed twice")
            seen.append(i)
            idx.append(i)
        out.append(tuple(sorted(idx)))
    missing = [T.names[i] for i in range(len(T.rows)) if i not in seen]
    if missing:
        raise InputError(f"invalid-partition: missing characters {missing}")
    return Preorder(tuple(out))


def load_preorder_file(T, doc):
    try:
        jsonschema.validate(doc, PREORDER_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(f"preorder file schema violation: {exc.message}") from None
    return load_preorder(T, doc["phyla"])


def malle_violations(P, T):
    conj = conjugation_map(T)
    return [i for i in P.ordering() if not P.equiv(i, conj[i])]


def validate_malle(P, T):
    bad = malle_violations(P, T)
    if bad:
        raise MalleViolation(T.names[bad[0]])
    return True


def dominates(lam, mu):
    """lam dominates mu (both partitions of the same n)."""
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def dominance_preorder_sn(n, T=None):
    """Dominance order on partitions of n as a preorder with singleton phyla.

    Dominance is total only for n <= 5; for larger n a linear extension has
    to be supplied explicitly, so this raises instead of choosing one.
    """
    if T is None:
        T = sn_character_table(n)
    parts = partitions(n)
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            if not dominates(a, b) and not dominates(b, a):
                raise InputError(
                    f"dominance order on partitions of {n} is not total "
                    f"({partition_name(a)} and {partition_name(b)} are incomparable); "
                    f"supply an explicit preorder file")
    asc = sorted(parts, key=lambda lam: sum(1 for mu in parts if dominates(lam, mu)))
    return load_preorder(T, [[partition_name(lam)] for lam in asc])


def one_phylum(T):
    return Preorder((tuple(range(len(T.rows))),))


def builtin_preorder(group_name, T, name="default"):
    if name == "one-phylum":
        return one_phylum(T)
    if name in ("dominance", "default") and group_name.startswith("S") and group_name[1:].isdigit():
        return dominance_preorder_sn(int(group_name[1:]), T)
    if name == "default" and group_name == "trivial":
        return one_phylum(T)
    if name in ("default", "springer") and group_name in DATA_PREORDERS:
        return load_preorder_file(T, _data_doc(DATA_PREORDERS[group_name]))
    raise InputError(f"unknown preorder {name!r} for group {group_name!r}")
