"""Reading and writing link specifications as JSON documents.

Documents are checked against ``schemas/linkspec.schema.json`` before any
group data is built. Shorthands: ``{"unlink": n}``, ``{"htrivial": [n, m]}``
and pieces of the form ``{"builtin": "unknot"}``; built-in pieces name their
complement generators after their 1-based position (``a2``, ``b2``, ...).
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .catalog import LinkSpec, PieceSpec, builtin_piece, htrivial, unlink
from .errors import InvalidSpec, MotionGroupError
from .fpauto import FactorAut
from .freeprod import FINITE, FREE, FactorGroup

_TERM = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*(-?\d+))?\s*$")


@lru_cache(maxsize=None)
def load_schema(name: str = "linkspec") -> dict:
    text = resources.files("linkmotion").joinpath(f"schemas/{name}.schema.json").read_text("utf-8")
    return json.loads(text)


def parse_group_word(text: str, group: FactorGroup):
    """Payload of a word like ``a1*b1^-1`` over the generators of ``group``."""
    text = text.strip()
    if text in ("", "1"):
        return group.identity()
    word = []
    for part in text.split("*"):
        m = _TERM.match(part)
        if not m or m.group(1) not in group.generator_names:
            raise InvalidSpec([f"cannot read {part.strip()!r} in word {text!r}"])
        word.append((group.generator_names.index(m.group(1)), int(m.group(2) or 1)))
    return group.from_word(word)


def _group(doc: dict) -> FactorGroup:
    kind = doc["kind"]
    if kind == "free":
        return FactorGroup.free(doc["generators"])
    if kind == "free_abelian":
        return FactorGroup.free_abelian(doc["generators"])
    return FactorGroup.finite(
        doc["table"],
        list(doc["generators"].items()),
        identity=doc.get("identity"),
        element_names=doc.get("element_names"),
    )


def _action(doc: dict, H: FactorGroup) -> FactorAut:
    if "images" in doc:
        if H.kind != FREE:
            raise InvalidSpec(["word images given for a complement that is not free"])
        imgs = [parse_group_word(w, H) for w in doc["images"]]
        inv = doc.get("inverse_images")
        inv = None if inv is None else [parse_group_word(w, H) for w in inv]
        return FactorAut.free(H, imgs, inv)
    if "matrix" in doc:
        return FactorAut.matrix(H, doc["matrix"])
    return FactorAut.permutation(H, doc["permutation"])


def _self_conjugation(doc, H: FactorGroup, G: FactorGroup):
    if doc is None:
        return None
    if doc == "trivial":
        return (G.identity(),) * H.rank
    missing = [name for name in H.generator_names if name not in doc]
    extra = [name for name in doc if name not in H.generator_names]
    if missing or extra:
        raise InvalidSpec([f"self_conjugation must list exactly {list(H.generator_names)}"])
    return tuple(parse_group_word(doc[name], G) for name in H.generator_names)


def _piece(doc: dict, position: int) -> PieceSpec:
    if "builtin" in doc:
        base = builtin_piece(doc["builtin"], str(position))
        sc = _self_conjugation(doc.get("self_conjugation"), base.complement, base.motion)
        return PieceSpec(
            base.id, base.isotopy_class, base.components, base.complement, base.motion, base.dahm_action, sc
        )
    H, G = _group(doc["complement"]), _group(doc["motion"])
    action = doc["dahm_action"]
    if sorted(action) != sorted(G.generator_names):
        raise InvalidSpec([f"piece {doc['id']}: dahm_action must list exactly {list(G.generator_names)}"])
    return PieceSpec(
        id=doc["id"],
        isotopy_class=doc["isotopy_class"],
        components=doc.get("components", 1),
        complement=H,
        motion=G,
        dahm_action=tuple(_action(action[name], H) for name in G.generator_names),
        self_conjugation=_self_conjugation(doc.get("self_conjugation"), H, G),
    )


def spec_from_document(doc: Any) -> LinkSpec:
    """Build a :class:`LinkSpec`; any structural problem becomes :class:`InvalidSpec`."""
    try:
        jsonschema.validate(doc, load_schema("linkspec"))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "document"
        raise InvalidSpec([f"{where}: {exc.message}"]) from None
    try:
        sc = doc.get("self_conjugation")
        if "unlink" in doc:
            return unlink(doc["unlink"], sc)
        if "htrivial" in doc:
            return htrivial(*doc["htrivial"], self_conjugation=sc)
        return LinkSpec(tuple(_piece(p, k + 1) for k, p in enumerate(doc["pieces"])))
    except InvalidSpec:
        raise
    except MotionGroupError as exc:
        raise InvalidSpec([str(exc)]) from None


def load_spec(path: str | Path) -> LinkSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpec([f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})"]) from None
    return spec_from_document(doc)


def _group_document(G: FactorGroup) -> dict:
    if G.kind != FINITE:
        return {"kind": G.kind, "generators": list(G.generator_names)}
    out = {
        "kind": FINITE,
        "table": [list(row) for row in G.table],
        "identity": G.identity_index,
        "generators": dict(zip(G.generator_names, G.generator_elements)),
    }
    if G.element_names is not None:
        out["element_names"] = list(G.element_names)
    return out


def _action_document(phi: FactorAut, H: FactorGroup) -> dict:
    if H.kind == FREE:
        return {
            "images": [H.format(w) for w in phi.data],
            "inverse_images": [H.format(w) for w in phi.inverse_data],
        }
    if H.kind == FINITE:
        return {"permutation": list(phi.data)}
    return {"matrix": [list(row) for row in phi.data]}


def spec_to_document(spec: LinkSpec) -> dict:
    """Explicit document (no shorthands) that reloads to an equal spec."""
    pieces = []
    for p in spec.pieces:
        doc = {
            "id": p.id,
            "isotopy_class": p.isotopy_class,
            "components": p.components,
            "complement": _group_document(p.complement),
            "motion": _group_document(p.motion),
            "dahm_action": {
                name: _action_document(phi, p.complement)
                for name, phi in zip(p.motion.generator_names, p.dahm_action)
            },
        }
        if p.self_conjugation is not None:
            doc["self_conjugation"] = {
                name: p.motion.format(g) for name, g in zip(p.complement.generator_names, p.self_conjugation)
            }
        pieces.append(doc)
    return {"pieces": pieces}


def dump_spec(spec: LinkSpec) -> str:
    return json.dumps(spec_to_document(spec), indent=2, ensure_ascii=False) + "\n"
