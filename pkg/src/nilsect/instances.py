"""Line-oriented instance files and their parsing/serialization.

Grammar (one directive per line; blank lines and '#' comments ignored;
all numbers are exact rationals written as "p" or "p/q", never floats):

    file        = "version 1" group element* semigroup+ problem option*
    group       = "group ut-q" N
                | "group heisenberg-k" N "minpoly" COEFF+      ; descending,
                                                               ; monic
                | "group product" ("factor heisenberg-k" N "minpoly" COEFF+)+
    element     = "matrix" NAME ROW{N}                         ; ut-q groups
                | "element" NAME heisbody                      ; heisenberg
                | "element" NAME ("factor" IDX heisbody)+      ; product
    heisbody    = "a" FIELDVEC  "b" FIELDVEC  "c" FIELDELEM
    FIELDVEC    = FIELDELEM{N-2}          ; space separated
    FIELDELEM   = RAT ("," RAT)*          ; d comma separated coordinates
    semigroup   = "semigroup" NAME MEMBER+
    problem     = "problem intersection" SETNAME+
                | "problem orbit" TNAME SNAME GSET HSET
    option      = "option" KEY VALUE

Heisenberg and product elements are embedded into UT(n*d, Q) (block
substitution by the multiplication matrix of each field entry; factors
go block-diagonally), so downstream code sees plain unipotent rational
matrices regardless of the surface group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UnsupportedInstance
from .matlie import GeneratorSystem, UnipotentMatrix, direct_sum
from .numfield import HeisenbergElemK, NumberField, embed_heisenberg
from .intersect import IntersectionInstance
from .orbit import H3Elem, OrbitInstance

KNOWN_OPTIONS = {
    "oracle-depth": ("oracle_depth", int),
    "interleave-budget": ("interleave_budget", int),
    "letters-cap": ("letters_cap", int),
    "parity-cap": ("parity_cap", int),
    "memory-budget": ("memory_budget", int),
}


class ParseError(ValueError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(ValueError):
    """Instance is well-formed but violates a structural invariant."""


@dataclass
class InstanceFile:
    """Parsed instance: group spec, named elements, sets, problem, options."""

    version: int
    group: tuple
    elements: dict  # name -> UnipotentMatrix (embedded)
    surface: dict  # name -> surface form, for serialization
    semigroups: dict  # name -> tuple of member names
    problem: tuple  # ("intersection", names) | ("orbit", T, S, G, H)
    options: dict = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return next(iter(self.elements.values())).n if self.elements else 0

    def build(self):
        """Validated IntersectionInstance or OrbitInstance."""
        kind = self.problem[0]
        if kind == "intersection":
            names = self.problem[1]
            systems = []
            for set_name in names:
                members = self.semigroups[set_name]
                systems.append(
                    GeneratorSystem(
                        [self.elements[m] for m in members], names=members
                    )
                )
            try:
                return IntersectionInstance(systems, set_names=names)
            except ValueError as exc:
                raise ValidationError(str(exc)) from exc
        t_name, s_name, g_name, h_name = self.problem[1:]
        t_mat = self.elements[t_name]
        s_mat = self.elements[s_name]
        if t_mat.n != 3:
            raise ValidationError(
                "orbit problems are decided in dimension 3 only; this "
                f"instance embeds into dimension {t_mat.n}"
            )
        g_members = self.semigroups[g_name]
        h_members = self.semigroups[h_name]
        return OrbitInstance(
            H3Elem.from_matrix(t_mat),
            H3Elem.from_matrix(s_mat),
            GeneratorSystem([self.elements[m] for m in g_members], names=g_members),
            GeneratorSystem([self.elements[m] for m in h_members], names=h_members),
            options=self.options,
        )

    def __eq__(self, other):
        return (
            isinstance(other, InstanceFile)
            and self.version == other.version
            and self.group == other.group
            and self.elements == other.elements
            and self.semigroups == other.semigroups
            and self.problem == other.problem
            and self.options == other.options
        )


_RAT_SHAPE = re.compile(r"^[+-]?\d+(/\d+)?$")


def _rat(tok, line_no):
    # only integers and p/q are rationals here; no decimal or float forms
    if not _RAT_SHAPE.match(tok):
        raise ParseError(line_no, f"bad rational {tok!r} (use p or p/q)")
    try:
        return Fraction(tok)
    except ZeroDivisionError as exc:
        raise ParseError(line_no, f"bad rational {tok!r}: {exc}") from exc


def _field_elem(field_obj, tok, line_no):
    coords = [_rat(t, line_no) for t in tok.split(",")]
    if len(coords) != field_obj.degree:
        raise ParseError(
            line_no,
            f"field element needs {field_obj.degree} coordinates, got {len(coords)}",
        )
    return field_obj.element(coords)


class _Lines:
    def __init__(self, text):
        self.items = []
        for no, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.split("#", 1)[0].strip()
            if stripped:
                self.items.append((no, stripped))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else (None, None)

    def next(self, context):
        if self.pos >= len(self.items):
            raise ParseError(
                self.items[-1][0] if self.items else 0,
                f"unexpected end of file while reading {context}",
            )
        item = self.items[self.pos]
        self.pos += 1
        return item

    def done(self):
        return self.pos >= len(self.items)


def _parse_group(lines):
    no, line = lines.next("group declaration")
    toks = line.split()
    if toks[0] != "group":
        raise ParseError(no, f"expected 'group', got {toks[0]!r}")
    if toks[1] == "ut-q":
        if len(toks) != 3:
            raise ParseError(no, "usage: group ut-q N")
        n = int(toks[2])
        if n < 1:
            raise ParseError(no, "dimension must be positive")
        return ("ut-q", n)
    if toks[1] == "heisenberg-k":
        factor = _parse_factor_spec(toks[1:], no)
        return ("heisenberg", (factor,))
    if toks[1] == "product":
        factors = []
        while True:
            no2, line2 = lines.peek()
            if line2 is None or not line2.startswith("factor "):
                break
            lines.next("factor")
            toks2 = line2.split()
            factors.append(_parse_factor_spec(toks2[1:], no2))
        if not factors:
            raise ParseError(no, "product group needs at least one factor")
        return ("heisenberg", tuple(factors))
    raise ParseError(no, f"unknown group kind {toks[1]!r}")


def _parse_factor_spec(toks, no):
    # toks: ["heisenberg-k", N, "minpoly", c_d, ..., c_0] (descending, monic)
    if toks[0] != "heisenberg-k" or len(toks) < 4 or toks[2] != "minpoly":
        raise ParseError(no, "usage: heisenberg-k N minpoly C_d ... C_0")
    n = int(toks[1])
    if n < 3:
        raise ParseError(no, "Heisenberg dimension must be >= 3")
    coeffs_desc = [_rat(t, no) for t in toks[3:]]
    try:
        fld = NumberField(list(reversed(coeffs_desc)))
    except ValueError as exc:
        raise ParseError(no, f"bad minimal polynomial: {exc}") from exc
    return (n, fld)


def _parse_heis_body(lines, n, fld, name):
    vals = {}
    for key in ("a", "b", "c"):
        no, line = lines.next(f"'{key}' row of element {name}")
        toks = line.split()
        if toks[0] != key:
            raise ParseError(no, f"expected '{key} ...', got {line!r}")
        want = 1 if key == "c" else n - 2
        if len(toks) - 1 != want:
            raise ParseError(
                no, f"'{key}' needs {want} field element(s), got {len(toks) - 1}"
            )
        vals[key] = [_field_elem(fld, t, no) for t in toks[1:]]
    return HeisenbergElemK(n, vals["a"], vals["b"], vals["c"][0])


def parse_instance_text(text: str) -> InstanceFile:
    lines = _Lines(text)
    no, line = lines.next("version")
    toks = line.split()
    if toks[:1] != ["version"] or len(toks) != 2:
        raise ParseError(no, "file must start with 'version 1'")
    version = int(toks[1])
    if version != 1:
        raise ParseError(no, f"unsupported version {version}")

    group = _parse_group(lines)
    elements = {}
    surface = {}
    semigroups = {}
    problem = None
    options = {}

    while not lines.done():
        no, line = lines.next("directive")
        toks = line.split()
        head = toks[0]
        if head == "matrix":
            if group[0] != "ut-q":
                raise ParseError(no, "'matrix' is only valid in ut-q groups")
            if len(toks) != 2:
                raise ParseError(no, "usage: matrix NAME")
            name = toks[1]
            if name in elements:
                raise ParseError(no, f"duplicate element name {name!r}")
            n = group[1]
            rows = []
            for _ in range(n):
                no2, row_line = lines.next(f"row of matrix {name}")
                entries = [_rat(t, no2) for t in row_line.split()]
                if len(entries) != n:
                    raise ParseError(no2, f"row needs {n} entries")
                rows.append(entries)
            try:
                mat = UnipotentMatrix(rows)
            except ValueError as exc:
                raise ParseError(no, f"matrix {name!r}: {exc}") from exc
            elements[name] = mat
            surface[name] = ("matrix", mat)
        elif head == "element":
            if group[0] != "heisenberg":
                raise ParseError(no, "'element' is only valid in heisenberg groups")
            if len(toks) != 2:
                raise ParseError(no, "usage: element NAME")
            name = toks[1]
            if name in elements:
                raise ParseError(no, f"duplicate element name {name!r}")
            factors = group[1]
            parts = []
            if len(factors) == 1:
                parts.append(_parse_heis_body(lines, factors[0][0], factors[0][1], name))
            else:
                for idx, (n, fld) in enumerate(factors, start=1):
                    no2, line2 = lines.next(f"factor {idx} of element {name}")
                    if line2.split() != ["factor", str(idx)]:
                        raise ParseError(
                            no2, f"expected 'factor {idx}', got {line2!r}"
                        )
                    parts.append(_parse_heis_body(lines, n, fld, name))
            embedded = direct_sum([embed_heisenberg(h) for h in parts])
            elements[name] = embedded
            surface[name] = ("heis", tuple(parts))
        elif head == "semigroup":
            if len(toks) < 3:
                raise ParseError(no, "usage: semigroup NAME MEMBER...")
            name = toks[1]
            if name in semigroups:
                raise ParseError(no, f"duplicate semigroup name {name!r}")
            members = tuple(toks[2:])
            for m in members:
                if m not in elements:
                    raise ParseError(no, f"unknown element {m!r}")
            semigroups[name] = members
        elif head == "problem":
            if problem is not None:
                raise ParseError(no, "duplicate problem declaration")
            if len(toks) < 2:
                raise ParseError(no, "usage: problem intersection|orbit ...")
            if toks[1] == "intersection":
                names = tuple(toks[2:])
                if len(names) < 1:
                    raise ParseError(no, "intersection needs at least one set")
                for s in names:
                    if s not in semigroups:
                        raise ParseError(no, f"unknown semigroup {s!r}")
                problem = ("intersection", names)
            elif toks[1] == "orbit":
                if len(toks) != 6:
                    raise ParseError(no, "usage: problem orbit T S G H")
                t_name, s_name, g_name, h_name = toks[2:]
                for e in (t_name, s_name):
                    if e not in elements:
                        raise ParseError(no, f"unknown element {e!r}")
                for s in (g_name, h_name):
                    if s not in semigroups:
                        raise ParseError(no, f"unknown semigroup {s!r}")
                problem = ("orbit", t_name, s_name, g_name, h_name)
            else:
                raise ParseError(no, f"unknown problem kind {toks[1]!r}")
        elif head == "option":
            if len(toks) != 3:
                raise ParseError(no, "usage: option KEY VALUE")
            key = toks[1]
            if key not in KNOWN_OPTIONS:
                raise ParseError(no, f"unknown option {key!r}")
            attr, conv = KNOWN_OPTIONS[key]
            try:
                options[attr] = conv(toks[2])
            except ValueError as exc:
                raise ParseError(no, f"bad value for {key}: {exc}") from exc
        else:
            raise ParseError(no, f"unknown directive {head!r}")

    if problem is None:
        raise ParseError(0, "missing problem declaration")
    return InstanceFile(
        version=version,
        group=group,
        elements=elements,
        surface=surface,
        semigroups=semigroups,
        problem=problem,
        options=options,
    )


def load_instance_file(path) -> InstanceFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance_text(fh.read())


def parse_instance(path):
    """Parse and build: returns IntersectionInstance or OrbitInstance."""
    return load_instance_file(path).build()


def _fmt_rat(x: Fraction) -> str:
    return str(x)


def serialize_instance(inst_file: InstanceFile) -> str:
    """Textual form that parses back to an equal InstanceFile."""
    out = [f"version {inst_file.version}"]
    group = inst_file.group
    if group[0] == "ut-q":
        out.append(f"group ut-q {group[1]}")
    else:
        factors = group[1]

        def factor_line(n, fld):
            coeffs = " ".join(_fmt_rat(c) for c in reversed(fld.coeffs))
            return f"heisenberg-k {n} minpoly {coeffs}"

        if len(factors) == 1:
            out.append("group " + factor_line(*factors[0]))
        else:
            out.append("group product")
            for n, fld in factors:
                out.append("factor " + factor_line(n, fld))
    for name, form in inst_file.surface.items():
        if form[0] == "matrix":
            out.append(f"matrix {name}")
            for row in form[1].rows:
                out.append(" ".join(_fmt_rat(x) for x in row))
        else:
            out.append(f"element {name}")
            parts = form[1]
            for idx, h in enumerate(parts, start=1):
                if len(parts) > 1:
                    out.append(f"factor {idx}")
                avec = " ".join(
                    ",".join(_fmt_rat(c) for c in e.coords) for e in h.a
                )
                bvec = " ".join(
                    ",".join(_fmt_rat(c) for c in e.coords) for e in h.b
                )
                cval = ",".join(_fmt_rat(c) for c in h.c.coords)
                out.append(f"a {avec}")
                out.append(f"b {bvec}")
                out.append(f"c {cval}")
    for name, members in inst_file.semigroups.items():
        out.append(f"semigroup {name} " + " ".join(members))
    if inst_file.problem[0] == "intersection":
        out.append("problem intersection " + " ".join(inst_file.problem[1]))
    else:
        out.append("problem orbit " + " ".join(inst_file.problem[1:]))
    reverse_opts = {attr: key for key, (attr, _) in KNOWN_OPTIONS.items()}
    for attr, value in inst_file.options.items():
        out.append(f"option {reverse_opts[attr]} {value}")
    return "\n".join(out) + "\n"
