"""The bundled records of the 26 rank-three lattices, and lattice input parsing."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .lattice import Lattice, LatticeError, Matrix, Vector, as_matrix, as_vector, mat_mul, transpose

BASE_FORM: Matrix = ((-2, 0, 1), (0, -2, 2), (1, 2, -2))
A2: Matrix = ((-2, 1), (1, -2))


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorDegree:
    degree: Vector
    starred: bool = False


@dataclass
class LatticeRecord:
    name: str
    gram: Matrix
    neg_curves: list[Vector] = field(default_factory=list)
    row: int | None = None
    expected_beff: list[Vector] | None = None
    expected_n: list[Vector] | None = None
    expected_bnef: list[Vector] | None = None
    expected_generators: list[GeneratorDegree] | None = None
    involutions: list[Matrix] = field(default_factory=list)
    stored_answer: bool = False
    provenance: str = "database"

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.gram)

    @property
    def starred(self) -> set[Vector]:
        return {g.degree for g in self.expected_generators or () if g.starred}

    def to_json(self) -> dict:
        out = {"name": self.name, "gram": [list(r) for r in self.gram], "neg_curves": [list(c) for c in self.neg_curves]}
        if self.row is not None:
            out["row"] = self.row
        for key in ("expected_beff", "expected_n", "expected_bnef"):
            val = getattr(self, key)
            if val is not None:
                out[key] = [list(v) for v in val]
        if self.expected_generators is not None:
            out["expected_generators"] = [
                {"degree": list(g.degree), "starred": g.starred} for g in self.expected_generators
            ]
        if self.involutions:
            out["involutions"] = [[list(r) for r in m] for m in self.involutions]
        if self.stored_answer:
            out["stored_answer"] = True
        return out

    @classmethod
    def from_json(cls, obj: dict, provenance: str = "database") -> "LatticeRecord":
        try:
            name = str(obj["name"])
            gram = as_matrix(obj["gram"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"record needs 'name' and 'gram': {exc}") from exc
        vecs = lambda key: None if obj.get(key) is None else [as_vector(v) for v in obj[key]]
        gens = obj.get("expected_generators")
        if gens is not None:
            gens = [
                GeneratorDegree(as_vector(g["degree"]), bool(g.get("starred", False))) if isinstance(g, dict)
                else GeneratorDegree(as_vector(g))
                for g in gens
            ]
        rec = cls(
            name=name,
            gram=gram,
            neg_curves=vecs("neg_curves") or [],
            row=obj.get("row"),
            expected_beff=vecs("expected_beff"),
            expected_n=vecs("expected_n"),
            expected_bnef=vecs("expected_bnef"),
            expected_generators=gens,
            involutions=[as_matrix(m) for m in obj.get("involutions", [])],
            stored_answer=bool(obj.get("stored_answer", False)),
            provenance=provenance,
        )
        rec.validate()
        return rec

    def validate(self) -> None:
        lat = self.lattice  # raises LatticeError on a bad form
        n = lat.rank
        for c in self.neg_curves:
            if len(c) != n:
                raise ParseError(f"class {c} has the wrong length")
            if lat.square(c) != -2:
                raise LatticeError(f"listed curve {c} has square {lat.square(c)}, not -2")
        for m in self.involutions:
            if len(m) != n or any(len(r) != n for r in m):
                raise ParseError("involution has the wrong shape")


def constructed_gram(name: str) -> Matrix:
    """Gram matrix rebuilt from the name, as a sublattice of the base form or a direct sum."""
    m = re.fullmatch(r"S_\{(\d+),(\d+),(\d+)\}", name)
    if m:
        a, b, c = map(int, m.groups())
        return _sublattice(((a, 0, 0), (0, b, 0), (0, 0, c)))
    if name == "S'_{4,1,2}":
        return _sublattice(((2, 0, 1), (0, 1, 0), (0, 0, 2)))
    m = re.fullmatch(r"S_(\d+)", name)
    if m:
        k = int(m.group(1))
        if k == 1:
            return ((6, 0, 0), (0, -2, 0), (0, 0, -2))
        if k in (2, 3, 5):
            top = {2: 36, 3: 12, 5: 4}[k]
            return ((top, 0, 0), (0,) + A2[0], (0,) + A2[1])
        if k in (4, 6):
            top = {4: 6, 6: 14}[k]
            return ((top, 0, -1), (0, -2, 1), (-1, 1, -2))
    raise KeyError(f"no construction known for {name}")


def _sublattice(basis) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in mat_mul(mat_mul(basis, BASE_FORM), transpose(basis)))


@lru_cache(maxsize=1)
def _raw_database() -> tuple[dict, ...]:
    text = resources.files("k3cox").joinpath("data/lattices.json").read_text()
    return tuple(json.loads(text)["lattices"])


def database() -> list[LatticeRecord]:
    return [LatticeRecord.from_json(obj) for obj in _raw_database()]


def names() -> list[str]:
    return [obj["name"] for obj in _raw_database()]


def get_record(key: str | int) -> LatticeRecord:
    """Look a record up by name (``S_{4,1,1}``, ``S_1``) or table row number."""
    key = str(key).strip()
    for obj in _raw_database():
        if obj["name"] == key or str(obj.get("row")) == key:
            return LatticeRecord.from_json(obj)
    raise KeyError(f"unknown lattice {key!r}")


_CLASS = re.compile(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)")


def parse_text(text: str) -> LatticeRecord:
    """Parse the line format: name, rank n, n matrix rows, then ``label: (a,b,c), ...`` lines."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2:
        raise ParseError("expected a name line and a rank line")
    name = lines[0]
    try:
        n = int(lines[1])
    except ValueError as exc:
        raise ParseError(f"bad rank line {lines[1]!r}") from exc
    if n < 1 or len(lines) < 2 + n:
        raise ParseError("not enough matrix rows")
    try:
        rows = [tuple(int(x) for x in re.split(r"[\s,]+", ln.strip("[]() ")) if x) for ln in lines[2:2 + n]]
    except ValueError as exc:
        raise ParseError(f"bad matrix row: {exc}") from exc
    if any(len(r) != n for r in rows):
        raise ParseError("matrix rows must have n entries")
    if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
        raise ParseError("matrix is not symmetric")
    lists: dict[str, list[Vector]] = {}
    for ln in lines[2 + n:]:
        if ":" not in ln:
            raise ParseError(f"expected 'label: classes', got {ln!r}")
        label, body = ln.split(":", 1)
        classes = [tuple(int(x) for x in m.group(1).split(",")) for m in _CLASS.finditer(body)]
        lists.setdefault(label.strip().lower(), []).extend(classes)
    obj = {"name": name, "gram": rows}
    aliases = {
        "neg": "neg_curves", "neg_curves": "neg_curves", "e": "neg_curves",
        "beff": "expected_beff", "n": "expected_n", "nef_rays": "expected_n",
        "bnef": "expected_bnef", "generators": "expected_generators",
    }
    for label, classes in lists.items():
        if label not in aliases:
            raise ParseError(f"unknown label {label!r}")
        obj[aliases[label]] = classes
    return LatticeRecord.from_json(obj, provenance="input")


def load_lattice(source: str) -> LatticeRecord:
    """A bundled record by name or row, or a record read from a text or JSON file."""
    path = Path(source)
    if not path.exists():
        return get_record(source)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        if isinstance(obj.get("gram"), list) and any(
            obj["gram"][i][j] != obj["gram"][j][i] for i in range(len(obj["gram"])) for j in range(len(obj["gram"]))
        ):
            raise ParseError("matrix is not symmetric")
        return LatticeRecord.from_json(obj, provenance="input")
    return parse_text(text)
