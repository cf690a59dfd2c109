"""Reading and writing hypergraphs as ``.khg`` text or JSON.

``.khg``: the first non-comment line is ``k n``, every later non-comment
line one edge of k vertex ids; ``#`` starts a comment line.  A comment of
the form ``# provenance: {...}`` carries construction metadata.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .core import Hypergraph, HypergraphError, Provenance, make_hypergraph

PROVENANCE_TAG = "# provenance: "


class HypergraphFormatError(HypergraphError):
    def __init__(self, code: str, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(code, where + message)
        self.line = line


def _edge_json(e: tuple[int, ...]) -> list[int]:
    return list(e)


def to_json_obj(H: Hypergraph) -> dict:
    out: dict = {"k": H.k, "n": H.n, "edges": [_edge_json(e) for e in H.edges]}
    if H.provenance is not None:
        out["provenance"] = H.provenance.to_json()
    return out


def dumps_json(H: Hypergraph) -> str:
    return json.dumps(to_json_obj(H), sort_keys=True, indent=2) + "\n"


def dumps_khg(H: Hypergraph) -> str:
    lines = []
    if H.provenance is not None:
        lines.append(PROVENANCE_TAG + json.dumps(H.provenance.to_json(), sort_keys=True, separators=(",", ":")))
    lines.append(f"{H.k} {H.n}")
    lines.extend(" ".join(str(v) for v in e) for e in H.edges)
    return "\n".join(lines) + "\n"


def loads_khg(text: str) -> Hypergraph:
    header = None
    provenance = None
    edges: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if raw.startswith(PROVENANCE_TAG):
                try:
                    provenance = Provenance.from_json(json.loads(raw[len(PROVENANCE_TAG):]))
                except (ValueError, KeyError, TypeError) as exc:
                    raise HypergraphFormatError("bad_provenance", f"unreadable provenance: {exc}", lineno)
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise HypergraphFormatError("not_integer", f"expected integers, got {line!r}", lineno)
        if header is None:
            if len(nums) != 2:
                raise HypergraphFormatError("bad_header", f"header must be 'k n', got {line!r}", lineno)
            header = (nums[0], nums[1])
            try:
                make_hypergraph(header[0], header[1], [])
            except HypergraphError as exc:
                raise HypergraphFormatError(exc.code, str(exc), lineno)
            continue
        try:
            make_hypergraph(header[0], header[1], [nums])
        except HypergraphError as exc:
            raise HypergraphFormatError(exc.code, str(exc), lineno)
        edges.append(tuple(nums))
    if header is None:
        raise HypergraphFormatError("bad_header", "missing 'k n' header line")
    return make_hypergraph(header[0], header[1], edges, provenance)


def loads_json(text: str) -> Hypergraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HypergraphFormatError("bad_json", exc.msg, exc.lineno)
    if not isinstance(data, dict) or not {"k", "n", "edges"} <= data.keys():
        raise HypergraphFormatError("bad_json", "expected an object with fields k, n, edges")
    provenance = Provenance.from_json(data["provenance"]) if data.get("provenance") else None
    edges = data["edges"]
    if not isinstance(edges, list):
        raise HypergraphFormatError("bad_json", "edges must be an array")
    for idx, e in enumerate(edges):
        try:
            make_hypergraph(data["k"], data["n"], [e])
        except HypergraphError as exc:
            raise HypergraphFormatError(exc.code, f"edge #{idx}: {exc}")
        except TypeError as exc:
            raise HypergraphFormatError("bad_json", f"edge #{idx}: {exc}")
    return make_hypergraph(data["k"], data["n"], edges, provenance)


def parse_hypergraph_file(path: str | os.PathLike) -> Hypergraph:
    """Read a ``.khg`` or JSON file; JSON is recognised by suffix or a leading ``{``."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        return loads_json(text)
    return loads_khg(text)


def write_hypergraph_file(H: Hypergraph, path: str | os.PathLike, fmt: str | None = None) -> None:
    p = Path(path)
    fmt = fmt or ("json" if p.suffix.lower() == ".json" else "khg")
    atomic_write(p, dumps_json(H) if fmt == "json" else dumps_khg(H))


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the same directory, then rename over ``path``."""
    p = Path(path)
    fd, tmp = tempfile.mkstemp(dir=p.parent or ".", prefix=f".{p.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
