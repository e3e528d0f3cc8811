"""JSON certificates ("pgc-1") for embedded cycles.

A certificate carries the field (including its modulus), the vertices
and the line of every edge, so it can be checked without rerunning the
construction.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

from . import __version__
from .embedding import CycleEmbedding
from .geometry import GeometryContext, Subspace
from .gf import FieldSpec, _is_irreducible, is_prime
from .verifier import VerificationReport, verify_cycle, verify_sigma_properties

VERSION = "pgc-1"


class MalformedCertificate(ValueError):
    pass


@dataclass
class LoadedCertificate:
    ctx: GeometryContext
    k: int
    cycle: CycleEmbedding
    edge_order_ok: bool
    anchor: Subspace | None
    expected: tuple[int, int] | None
    provenance: dict


def to_certificate(
    ctx: GeometryContext,
    cycle: CycleEmbedding,
    *,
    command: str,
    seed: int,
    anchor: Subspace | None = None,
    expected: tuple[int, int] = (2, 1),
) -> dict:
    F = ctx.field
    k = len(cycle.vertices)
    cert = {
        "version": VERSION,
        "p": F.p,
        "e": F.e,
        "q": F.q,
        "n": ctx.n,
        "modulus": list(F.modulus),
        "k": k,
        "vertices": [list(v) for v in cycle.vertices],
        "edges": [
            {"from": j, "to": (j + 1) % k, "line": L.serialize()} for j, L in enumerate(cycle.edge_lines)
        ],
    }
    if anchor is not None:
        cert["anchor"] = {
            "basis": anchor.serialize(),
            "expected_vertices": expected[0],
            "expected_edges": expected[1],
        }
    cert["provenance"] = {"command": command, "seed": seed, "artifact_version": __version__}
    return cert


def dumps(cert: dict) -> str:
    return json.dumps(cert, indent=1) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _int(data: dict, key: str) -> int:
    v = data.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise MalformedCertificate(f"field {key!r} must be an integer")
    return v


def _rows(obj, width: int, what: str) -> tuple[tuple[int, ...], ...]:
    if not isinstance(obj, list) or not obj:
        raise MalformedCertificate(f"{what} must be a nonempty list of rows")
    rows = []
    for r in obj:
        if not isinstance(r, list) or len(r) != width or not all(isinstance(x, int) for x in r):
            raise MalformedCertificate(f"{what} has a malformed row")
        rows.append(tuple(r))
    return tuple(rows)


def from_certificate(data) -> LoadedCertificate:
    """Rebuild the geometry and cycle from a parsed certificate."""
    if not isinstance(data, dict):
        raise MalformedCertificate("certificate must be a JSON object")
    if data.get("version") != VERSION:
        raise MalformedCertificate(f"unsupported version {data.get('version')!r}")
    p, e, q, n, k = (_int(data, key) for key in ("p", "e", "q", "n", "k"))
    modulus = data.get("modulus")
    if not is_prime(p) or e < 1 or q != p**e or n < 2:
        raise MalformedCertificate("inconsistent field or dimension header")
    if (
        not isinstance(modulus, list)
        or len(modulus) != e + 1
        or modulus[-1] != 1
        or not all(isinstance(c, int) and 0 <= c < p for c in modulus)
        or not _is_irreducible(modulus, p)
    ):
        raise MalformedCertificate("modulus is not a monic irreducible polynomial of degree e")
    ctx = GeometryContext(n, FieldSpec(p, e, q, tuple(modulus)))
    width = n + 1
    vertices = _rows(data.get("vertices"), width, "vertices")
    edges = data.get("edges")
    if not isinstance(edges, list):
        raise MalformedCertificate("edges must be a list")
    lines = []
    order_ok = len(vertices) == k
    for j, edge in enumerate(edges):
        if not isinstance(edge, dict) or not {"from", "to", "line"} <= edge.keys():
            raise MalformedCertificate(f"edge {j} is malformed")
        if (edge["from"], edge["to"]) != (j, (j + 1) % max(len(vertices), 1)):
            order_ok = False
        lines.append(Subspace(_rows(edge["line"], width, f"edge {j} line")))
    anchor = expected = None
    if "anchor" in data:
        a = data["anchor"]
        if not isinstance(a, dict):
            raise MalformedCertificate("anchor must be an object")
        basis = _rows(a.get("basis"), width, "anchor basis")
        if any(not 0 <= x < q for r in basis for x in r):
            raise MalformedCertificate("anchor basis has entries outside the field")
        anchor = Subspace(basis)
        expected = (_int(a, "expected_vertices"), _int(a, "expected_edges"))
    provenance = data.get("provenance", {})
    return LoadedCertificate(ctx, k, CycleEmbedding(vertices, tuple(lines)), order_ok, anchor, expected, provenance)


def load(path: str) -> LoadedCertificate:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedCertificate(f"cannot read certificate: {exc}") from exc
    return from_certificate(data)


def verify_certificate(cert: LoadedCertificate) -> VerificationReport:
    if cert.anchor is not None:
        report = verify_sigma_properties(cert.ctx, cert.cycle, cert.anchor, cert.expected)
    else:
        report = verify_cycle(cert.ctx, cert.cycle)
    if len(cert.cycle.vertices) != cert.k:
        report.fail("length", f"header says k={cert.k}, certificate has {len(cert.cycle.vertices)} vertices")
    if not cert.edge_order_ok:
        report.fail("edge-order", "edges do not follow the vertex order")
    return report
