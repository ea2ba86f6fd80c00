"""Parser for the line-oriented model-definition format.

Grammar (see FORMAT.md)::

    coradical-model 1          # header, required, first non-comment line
    kind: hilb                 # key: value parameters
    n: 3
    [section name]             # sections hold raw whitespace-separated lines
    ...

``#`` starts a comment.  Rational literals are integers or ``p/q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .coalgebra import DEFAULT_TENSOR_CAP, TENSOR_SEP, Coalgebra, GradedSpace, check_cap
from .linalg import Matrix

FORMAT_VERSION = 1
HEADER = "coradical-model"
KINDS = ("k3", "hilb", "fano", "abelian-trunc", "abelian-lazy", "incidence", "raw-coalgebra")


class ModelError(ValueError):
    """Malformed or inconsistent model-definition file."""


@dataclass
class ModelDefinition:
    kind: str
    params: dict[str, str]
    sections: list[tuple[str, list[list[str]]]] = field(default_factory=list)
    source: str = ""

    def get_int(self, key: str, default: int | None = None) -> int:
        if key not in self.params:
            if default is None:
                raise ModelError(f"missing parameter {key!r}")
            return default
        try:
            return int(self.params[key])
        except ValueError:
            raise ModelError(f"parameter {key!r} must be an integer") from None

    def section(self, name: str) -> list[list[str]]:
        for n, lines in self.sections:
            if n == name:
                return lines
        return []

    def sections_named(self, prefix: str) -> list[tuple[str, list[list[str]]]]:
        out = []
        for n, lines in self.sections:
            head, _, rest = n.partition(" ")
            if head == prefix:
                out.append((rest.strip(), lines))
        return out

    @property
    def name(self) -> str:
        return self.params.get("name", "")


def parse_rational(text: str) -> Fraction:
    try:
        if "." in text or "e" in text.lower():
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ModelError(f"not a rational literal: {text!r}") from None


def parse_text(text: str, source: str = "") -> ModelDefinition:
    header_seen = False
    params: dict[str, str] = {}
    sections: list[tuple[str, list[list[str]]]] = []
    current: list[list[str]] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not header_seen:
            parts = line.split()
            if len(parts) != 2 or parts[0] != HEADER:
                raise ModelError(f"{source}:{lineno}: expected header '{HEADER} {FORMAT_VERSION}'")
            if parts[1] != str(FORMAT_VERSION):
                raise ModelError(f"{source}:{lineno}: unsupported format version {parts[1]}")
            header_seen = True
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ModelError(f"{source}:{lineno}: unterminated section header")
            current = []
            sections.append((" ".join(line[1:-1].split()), current))
            continue
        if current is None:
            key, sep, value = line.partition(":")
            if not sep or not key.strip():
                raise ModelError(f"{source}:{lineno}: expected 'key: value'")
            params[key.strip()] = value.strip()
        else:
            current.append(line.split())
    if not header_seen:
        raise ModelError(f"{source}: empty file or missing header")
    kind = params.pop("kind", None)
    if kind not in KINDS:
        raise ModelError(f"{source}: unknown or missing kind {kind!r}")
    return ModelDefinition(kind, params, sections, source)


def load(path: str | Path) -> ModelDefinition:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ModelError(f"cannot read {path}: {exc}") from None
    return parse_text(text, str(p.name))


# ---------------------------------------------------------------------------
# builders


def build_raw_coalgebra(d: ModelDefinition, cap: int | None = DEFAULT_TENSOR_CAP) -> Coalgebra:
    basis = d.section("basis")
    if not basis:
        raise ModelError("raw-coalgebra needs a [basis] section")
    labels, grades = [], []
    for row in basis:
        if len(row) not in (1, 2):
            raise ModelError(f"[basis] line {' '.join(row)!r}: expected 'label [grade]'")
        labels.append(row[0])
        if len(row) == 2:
            try:
                grades.append(int(row[1]))
            except ValueError:
                raise ModelError(f"bad grade {row[1]!r}") from None
    if grades and len(grades) != len(labels):
        raise ModelError("either every basis vector has a grade or none does")
    try:
        space = GradedSpace(tuple(labels), tuple(grades) if grades else None)
    except ValueError as exc:
        raise ModelError(str(exc)) from None
    n = space.dim
    check_cap(n * n, n, cap, "raw co-multiplication")
    index = {l: i for i, l in enumerate(labels)}

    def vec_index(tok: str, bound: int) -> int:
        if tok.lstrip("-").isdigit():
            i = int(tok)
            if not 0 <= i < bound:
                raise ModelError(f"index {i} out of range")
            return i
        if tok not in index:
            raise ModelError(f"unknown basis label {tok!r}")
        return index[tok]

    def row_index(tok: str) -> int:
        if tok.lstrip("-").isdigit():
            return vec_index(tok, n * n)
        for sep in ("|", TENSOR_SEP):
            if sep in tok:
                a, _, b = tok.partition(sep)
                return vec_index(a, n) * n + vec_index(b, n)
        raise ModelError(f"co-multiplication row {tok!r}: use a flat index or 'left|right'")

    triples = []
    for row in d.section("comult"):
        if len(row) != 3:
            raise ModelError(f"[comult] line {' '.join(row)!r}: expected 'row col value'")
        triples.append((row_index(row[0]), vec_index(row[1], n), parse_rational(row[2])))
    comult = Matrix.from_triples(n * n, n, triples)
    cu = []
    for row in d.section("counit"):
        if len(row) != 2:
            raise ModelError("[counit] lines are 'col value'")
        cu.append((0, vec_index(row[0], n), parse_rational(row[1])))
    counit = Matrix.from_triples(1, n, cu)
    unit = None
    if d.section("unit"):
        unit = [Fraction(0)] * n
        for row in d.section("unit"):
            if len(row) != 2:
                raise ModelError("[unit] lines are 'label value'")
            unit[vec_index(row[0], n)] += parse_rational(row[1])
        unit = tuple(unit)
    return Coalgebra(space, comult, counit, unit, None, True, d.name or "raw")


def parse_points(d: ModelDefinition, rank: int) -> list[tuple[int, ...]]:
    out = []
    for row in d.section("points"):
        try:
            p = tuple(int(x) for x in row)
        except ValueError:
            raise ModelError(f"[points] line {' '.join(row)!r}: integers expected") from None
        if len(p) != rank:
            raise ModelError(f"point {p} should have {rank} coordinates")
        out.append(p)
    return out


def parse_triangles(d: ModelDefinition, lines: int) -> list[tuple[int, int, int]]:
    tris = []
    for row in d.section("triangles"):
        if len(row) != 3:
            raise ModelError(f"triangle {' '.join(row)!r}: three line numbers expected")
        try:
            tri = tuple(int(x) - 1 for x in row)
        except ValueError:
            raise ModelError(f"triangle {' '.join(row)!r}: integers expected") from None
        tris.append(tri)
    return tris


def build_incidence(d: ModelDefinition):
    from .incidence import Cover, FiniteVariety, InvalidCover

    varieties = {}
    for name, lines in d.sections_named("variety"):
        pts: list[str] = []
        rels = []
        for row in lines:
            if row[0] == "points":
                pts.extend(row[1:])
            elif row[0] == "relation":
                rel = {}
                for term in row[1:]:
                    p, sep, c = term.partition(":")
                    if not sep:
                        raise ModelError(f"relation term {term!r}: expected point:coefficient")
                    rel[p] = rel.get(p, 0) + parse_rational(c)
                rels.append(rel)
            else:
                raise ModelError(f"[variety {name}] unknown line {row[0]!r}")
        try:
            varieties[name] = FiniteVariety.make(pts, rels, name)
        except ValueError as exc:
            raise ModelError(f"variety {name}: {exc}") from None
    covers = {}
    for name, lines in d.sections_named("cover"):
        refs, phi, psi = {}, {}, {}
        for row in lines:
            key = row[0]
            if key in ("gamma", "x", "y") and len(row) == 2:
                if row[1] not in varieties:
                    raise ModelError(f"cover {name}: unknown variety {row[1]!r}")
                refs[key] = varieties[row[1]]
            elif key in ("phi", "psi") and len(row) in (3, 4):
                if len(row) == 4 and not row[3].isdigit():
                    raise ModelError(f"cover {name}: multiplicity {row[3]!r} must be a positive integer")
                mult = int(row[3]) if len(row) == 4 else 1
                (phi if key == "phi" else psi)[row[1]] = (row[2], mult)
            else:
                raise ModelError(f"cover {name}: bad line {' '.join(row)!r}")
        if set(refs) != {"gamma", "x", "y"}:
            raise ModelError(f"cover {name}: needs gamma, x and y")
        try:
            covers[name] = Cover.make(refs["gamma"], refs["x"], refs["y"], phi, psi)
        except InvalidCover as exc:
            raise ModelError(f"cover {name}: {exc}") from None
    composes = []
    for row in d.section("compose"):
        if len(row) != 2 or any(r not in covers for r in row):
            raise ModelError(f"[compose] line {' '.join(row)!r}: two cover names expected")
        composes.append((row[0], row[1]))
    if not covers:
        raise ModelError("incidence model defines no covers")
    return varieties, covers, composes


def bundled_models() -> list[str]:
    """Names of the model files shipped with the package."""
    from importlib.resources import files

    return sorted(p.name for p in files("coradical").joinpath("models").iterdir() if p.name.endswith(".model"))


def bundled_path(name: str) -> Path:
    from importlib.resources import files

    return Path(str(files("coradical").joinpath("models", name)))
