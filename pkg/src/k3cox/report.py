"""Reports: what was computed for one lattice, serialized deterministically."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from .coxgen import DegreeVerdict, GeneratorResult
from .lattice import Vector
from .minimal import MinimalityEvidence


def fmt_class(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def fmt_classes(vs) -> str:
    return " ".join(fmt_class(v) for v in vs) if vs else "-"


def _vec(v) -> Vector:
    return tuple(int(x) for x in v)


def _vecs(vs) -> list[Vector]:
    return [_vec(v) for v in vs]


@dataclass
class VerdictEntry:
    degree: Vector
    tiers: list[str]
    status: str  # kept | eliminated | l1-unresolved
    test: int | None = None
    witness: list[Vector] = field(default_factory=list)

    @classmethod
    def from_verdict(cls, v: DegreeVerdict, witnesses: bool) -> "VerdictEntry":
        if v.note == "l1-unresolved":
            status = "l1-unresolved"
        else:
            status = "kept" if v.kept else "eliminated"
        return cls(v.degree, list(v.tiers), status, v.eliminated_by, list(v.witness) if witnesses else [])


@dataclass
class MinimalityEntry:
    degree: Vector
    certified: bool
    reason: str
    b1: list[Vector] = field(default_factory=list)
    b2: list[list[Vector]] = field(default_factory=list)
    b3: list[list[Vector]] = field(default_factory=list)
    koszul_pairs: list[list[Vector]] = field(default_factory=list)
    span_bound: int | None = None
    starred: bool = False

    @classmethod
    def from_evidence(cls, d, ok: bool, ev: MinimalityEvidence, starred: bool = False) -> "MinimalityEntry":
        return cls(
            tuple(d), ok, ev.reason, list(ev.b1),
            [list(p) for p in ev.b2], [list(t) for t in ev.b3], [list(p) for p in ev.koszul_pairs],
            ev.span_bound, starred,
        )


@dataclass
class GeneratorReport:
    lattice: str
    provenance: str = "computed"
    curves: list[Vector] | None = None
    cones: dict[str, list[Vector]] | None = None
    degrees: list[Vector] | None = None
    l1_unresolved: list[Vector] | None = None
    verdicts: list[VerdictEntry] | None = None
    minimality: list[MinimalityEntry] | None = None
    verification: dict[str, dict[str, Any]] | None = None
    timing: dict[str, float] = field(default_factory=dict)

    def set_generators(self, res: GeneratorResult, witnesses: bool = False) -> None:
        self.degrees = list(res.degrees)
        self.l1_unresolved = list(res.l1_unresolved)
        self.verdicts = [VerdictEntry.from_verdict(v, witnesses) for v in sorted(res.verdicts, key=lambda v: v.degree)]
        if res.provenance == "stored":
            self.provenance = "stored"

    @property
    def ok(self) -> bool:
        return all(v["match"] for v in (self.verification or {}).values())

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        return _jsonable(asdict(self))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorReport":
        rep = cls(obj["lattice"], obj.get("provenance", "computed"))
        if obj.get("curves") is not None:
            rep.curves = _vecs(obj["curves"])
        if obj.get("cones") is not None:
            rep.cones = {k: _vecs(v) for k, v in obj["cones"].items()}
        for key in ("degrees", "l1_unresolved"):
            if obj.get(key) is not None:
                setattr(rep, key, _vecs(obj[key]))
        if obj.get("verdicts") is not None:
            rep.verdicts = [
                VerdictEntry(_vec(v["degree"]), list(v["tiers"]), v["status"], v.get("test"), _vecs(v.get("witness", [])))
                for v in obj["verdicts"]
            ]
        if obj.get("minimality") is not None:
            rep.minimality = [
                MinimalityEntry(
                    _vec(m["degree"]), m["certified"], m["reason"], _vecs(m.get("b1", [])),
                    [_vecs(p) for p in m.get("b2", [])], [_vecs(t) for t in m.get("b3", [])],
                    [_vecs(p) for p in m.get("koszul_pairs", [])], m.get("span_bound"), m.get("starred", False),
                )
                for m in obj["minimality"]
            ]
        if obj.get("verification") is not None:
            rep.verification = {
                k: {kk: (_vecs(vv) if kk in ("missing", "extra") else vv) for kk, vv in v.items()}
                for k, v in obj["verification"].items()
            }
        rep.timing = dict(obj.get("timing", {}))
        return rep

    @classmethod
    def loads(cls, text: str) -> "GeneratorReport":
        return cls.from_json(json.loads(text))

    def text(self, witnesses: bool = False) -> str:
        out = [f"lattice: {self.lattice}", f"provenance: {self.provenance}"]
        if self.curves is not None:
            out.append(f"curves[{len(self.curves)}]: {fmt_classes(self.curves)}")
        if self.cones is not None:
            for key in ("E", "BEff", "N", "BNef"):
                if key in self.cones:
                    out.append(f"{key}[{len(self.cones[key])}]: {fmt_classes(self.cones[key])}")
        if self.degrees is not None:
            out.append(f"generators[{len(self.degrees)}]: {fmt_classes(self.degrees)}")
            if self.l1_unresolved:
                out.append(f"l1-unresolved: {fmt_classes(self.l1_unresolved)}")
        if self.verdicts is not None:
            kept = [v for v in self.verdicts if v.status != "eliminated"]
            out.append(f"candidates: {len(self.verdicts)} ({len(self.verdicts) - len(kept)} eliminated)")
            for v in self.verdicts if witnesses else kept:
                line = f"  {fmt_class(v.degree)} {v.status}"
                if v.test is not None:
                    line += f" test{v.test}"
                line += f" [{','.join(v.tiers)}]"
                if witnesses and v.witness:
                    line += f" witness {fmt_classes(v.witness)}"
                out.append(line)
        if self.minimality is not None:
            out.append("minimality:")
            for m in self.minimality:
                tag = "necessary" if m.certified else "inconclusive"
                star = "*" if m.starred else ""
                out.append(f"  {fmt_class(m.degree)}{star} {tag} ({m.reason})")
        if self.verification is not None:
            for k in sorted(self.verification):
                v = self.verification[k]
                line = f"verify {k}: {'match' if v['match'] else 'MISMATCH'}"
                if v.get("missing"):
                    line += f" missing {fmt_classes(v['missing'])}"
                if v.get("extra"):
                    line += f" extra {fmt_classes(v['extra'])}"
                if v.get("note"):
                    line += f" ({v['note']})"
                out.append(line)
        if self.timing:
            out.append("timing: " + " ".join(f"{k}={v:.2f}s" for k, v in sorted(self.timing.items())))
        return "\n".join(out)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x
