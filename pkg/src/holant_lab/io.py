"""Line-oriented text formats: signature files, grid files, 0/1 matrices.

Signature file:
    signature <name> table <v0> <v1> ... tail (zero | geom <r> | periodic <P> | undef) [allow-zero]
    signature <name> builtin <kind> [args] [allow-zero]
        kinds: const <c> | geometric <c> <r> (s(x) = c*r^x) | hw_le_1 | hw_eq_1
               | even | odd | indicator <items>  (items: n, a..b, a.., even, odd)

Grid file:
    vertex <id> <signature-name>
    edge <u> <v> [colour]
    hcolour <id> <pattern-vertex-id>
    hedge <a> <b>            (extra pattern edges; by default H is the image graph)

`#` starts a comment; blank lines are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .grids import Graph, GridError, SignatureGrid
from .scalars import RATIONAL, Field, FieldError
from .signatures import Signature, SignatureError, builtin

__all__ = [
    "ParseError",
    "SignatureLibrary",
    "parse_signatures",
    "emit_signatures",
    "signature_line",
    "parse_grid",
    "emit_grid",
    "parse_instance",
    "parse_matrix",
    "normalize_text",
]


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def normalize_text(text: str) -> str:
    """Comments and blank lines dropped, whitespace collapsed."""
    return "".join(" ".join(words) + "\n" for _, words in _lines(text))


@dataclass
class SignatureLibrary:
    field: Field
    signatures: dict[str, Signature] = field(default_factory=dict)
    lines: dict[str, str] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Signature:
        return self.signatures[name]

    def __contains__(self, name: str) -> bool:
        return name in self.signatures

    def __iter__(self):
        return iter(self.signatures.values())

    def __len__(self) -> int:
        return len(self.signatures)

    def add(self, s: Signature) -> None:
        self.signatures[s.name] = s
        self.lines[s.name] = signature_line(s)


def signature_line(s: Signature) -> str:
    """Table form of any signature."""
    F = s.field
    words = ["signature", s.name, "table"] + [F.format(v) for v in s.table] + ["tail", s.tail]
    if s.tail == "geom":
        words.append(F.format(s.tail_param))
    elif s.tail == "periodic":
        words.append(str(s.tail_param))
    if s.allows_zero and s.zero_at_0:
        words.append("allow-zero")
    return " ".join(words)


def parse_signatures(text: str, F: Field = RATIONAL) -> SignatureLibrary:
    lib = SignatureLibrary(F)
    for no, w in _lines(text):
        if w[0] != "signature" or len(w) < 3:
            raise ParseError("expected `signature <name> table|builtin ...`", no)
        name, kind = w[1], w[2]
        if name in lib:
            raise ParseError(f"duplicate signature {name!r}", no)
        rest = w[3:]
        allow = bool(rest) and rest[-1] == "allow-zero"
        if allow:
            rest = rest[:-1]
        try:
            if kind == "table":
                if "tail" not in rest:
                    raise ParseError("table signature needs `tail ...`", no)
                cut = rest.index("tail")
                vals = [F.parse(t) for t in rest[:cut]]
                tail_words = rest[cut + 1:]
                if not tail_words:
                    raise ParseError("missing tail kind", no)
                tail = tail_words[0]
                param = None
                if tail == "geom":
                    if len(tail_words) != 2:
                        raise ParseError("geom tail takes one ratio", no)
                    param = F.parse(tail_words[1])
                elif tail == "periodic":
                    if len(tail_words) != 2:
                        raise ParseError("periodic tail takes one period", no)
                    param = int(tail_words[1])
                elif tail in ("zero", "undef"):
                    if len(tail_words) != 1:
                        raise ParseError(f"{tail} tail takes no argument", no)
                else:
                    raise ParseError(f"unknown tail {tail!r}", no)
                s = Signature(name, tuple(vals), tail, param, allow, F)
                canonical = " ".join(["signature", name, "table"] + [F.format(v) for v in vals]
                                     + ["tail", tail] + ([F.format(param)] if tail == "geom" else [])
                                     + ([str(param)] if tail == "periodic" else [])
                                     + (["allow-zero"] if allow else []))
            elif kind == "builtin":
                if not rest:
                    raise ParseError("missing builtin kind", no)
                s = builtin(name, rest[0], rest[1:], F)
                if allow and not s.allows_zero:
                    s = Signature(s.name, s.table, s.tail, s.tail_param, True, F)
                args = rest[1:]
                if rest[0] in ("const", "geometric"):
                    args = [F.format(F.parse(a)) for a in args]
                canonical = " ".join(["signature", name, "builtin", rest[0]] + args
                                     + (["allow-zero"] if allow else []))
            else:
                raise ParseError(f"unknown signature kind {kind!r}", no)
        except ParseError:
            raise
        except (SignatureError, FieldError, ValueError) as exc:
            raise ParseError(str(exc), no) from None
        lib.signatures[name] = s
        lib.lines[name] = canonical
    return lib


def emit_signatures(lib: SignatureLibrary) -> str:
    return "".join(lib.lines[n] + "\n" for n in lib.signatures)


def parse_grid(text: str, lib: SignatureLibrary | None, require_signatures: bool = True) -> SignatureGrid:
    """Parse a grid file; with lib=None and require_signatures=False the
    signature column is optional and every vertex gets the constant 1."""
    ids: dict[str, int] = {}
    labels: list[str] = []
    sig_names: list[str | None] = []
    edges: list[tuple[int, int]] = []
    colours: list[int | None] = []
    hcol: dict[int, str] = {}
    hedges: list[tuple[str, str]] = []
    seen_edges: set[tuple[int, int]] = set()
    for no, w in _lines(text):
        head = w[0]
        if head == "vertex":
            if len(w) not in (2, 3) or (require_signatures and len(w) != 3):
                raise ParseError("expected `vertex <id> <signature>`", no)
            if w[1] in ids:
                raise ParseError(f"duplicate vertex {w[1]!r}", no)
            name = w[2] if len(w) == 3 else None
            if name is not None and lib is not None and name not in lib:
                raise ParseError(f"unknown signature {name!r}", no)
            ids[w[1]] = len(labels)
            labels.append(w[1])
            sig_names.append(name)
        elif head == "edge":
            if len(w) not in (3, 4):
                raise ParseError("expected `edge <u> <v> [colour]`", no)
            for x in w[1:3]:
                if x not in ids:
                    raise ParseError(f"vertex {x!r} used before declaration", no)
            u, v = ids[w[1]], ids[w[2]]
            if u == v:
                raise ParseError(f"loop at {w[1]!r} rejected", no)
            key = (min(u, v), max(u, v))
            if key in seen_edges:
                raise ParseError(f"duplicate edge {w[1]}-{w[2]}", no)
            seen_edges.add(key)
            edges.append((u, v))
            if len(w) == 4:
                try:
                    c = int(w[3])
                except ValueError:
                    raise ParseError(f"bad colour {w[3]!r}", no) from None
                if c < 1:
                    raise ParseError("colours must be positive integers", no)
                colours.append(c)
            else:
                colours.append(None)
        elif head == "hcolour":
            if len(w) != 3:
                raise ParseError("expected `hcolour <id> <pattern-vertex>`", no)
            if w[1] not in ids:
                raise ParseError(f"vertex {w[1]!r} used before declaration", no)
            if ids[w[1]] in hcol:
                raise ParseError(f"vertex {w[1]!r} coloured twice", no)
            hcol[ids[w[1]]] = w[2]
        elif head == "hedge":
            if len(w) != 3 or w[1] == w[2]:
                raise ParseError("expected `hedge <a> <b>` with a != b", no)
            hedges.append((w[1], w[2]))
        else:
            raise ParseError(f"unknown directive {head!r}", no)
    if any(c is None for c in colours) and any(c is not None for c in colours):
        raise ParseError("either every edge or no edge carries a colour")
    g = Graph(len(labels), edges)
    if lib is None:
        sig = Signature("one", (1,), "geom", 1)
        sigs = [sig] * len(labels)
    else:
        missing = [labels[i] for i, s in enumerate(sig_names) if s is None]
        if missing:
            raise ParseError(f"vertex {missing[0]!r} has no signature")
        sigs = [lib[s] for s in sig_names]
    edge_colours = [c for c in colours] if colours and colours[0] is not None else None
    h = H = None
    if hcol or hedges:
        if len(hcol) != len(labels):
            raise GridError("h-colouring must cover every vertex")
        hv: dict[str, int] = {}
        hlabels: list[str] = []
        for v in range(len(labels)):
            hv.setdefault(hcol[v], len(hv))
        for a, b in hedges:
            hv.setdefault(a, len(hv))
            hv.setdefault(b, len(hv))
        hlabels = list(hv)
        hes = set()
        for u, v in edges:
            a, b = hv[hcol[u]], hv[hcol[v]]
            if a == b:
                raise GridError(f"h-colouring maps edge {labels[u]}-{labels[v]} to a loop")
            hes.add((min(a, b), max(a, b)))
        for a, b in hedges:
            x, y = hv[a], hv[b]
            hes.add((min(x, y), max(x, y)))
        H = Graph(len(hlabels), sorted(hes))
        h = [hv[hcol[v]] for v in range(len(labels))]
        if edge_colours is not None:
            raise GridError("give either explicit edge colours or an h-colouring, not both")
        return SignatureGrid(g, sigs, labels=labels, h_colouring=h, H=H, h_labels=hlabels,
                             extra_hedges=hedges, written_edges=edges)
    return SignatureGrid(g, sigs, labels=labels, edge_colours=edge_colours, written_edges=edges)


def emit_grid(grid: SignatureGrid) -> str:
    out = []
    for lab, s in zip(grid.labels, grid.signatures):
        out.append(f"vertex {lab} {s.name}")
    for i, (u, v) in enumerate(grid.written_edges):
        line = f"edge {grid.labels[u]} {grid.labels[v]}"
        if grid.edge_colours is not None:
            line += f" {grid.edge_colours[i]}"
        out.append(line)
    if grid.h_colouring is not None:
        hl = grid.h_labels or tuple(str(i + 1) for i in range(grid.H.n))
        for lab, x in zip(grid.labels, grid.h_colouring):
            out.append(f"hcolour {lab} {hl[x]}")
        for a, b in grid.extra_hedges:
            out.append(f"hedge {a} {b}")
    return "".join(line + "\n" for line in out)


def parse_instance(grid_text: str, sig_text: str, F: Field = RATIONAL) -> SignatureGrid:
    return parse_grid(grid_text, parse_signatures(sig_text, F))


def parse_matrix(text: str) -> list[list[int]]:
    """Dense 0/1 matrix; rows are whitespace-separated or contiguous digits."""
    rows = []
    for no, w in _lines(text):
        toks = list(w[0]) if len(w) == 1 and len(w[0]) > 1 else w
        try:
            row = [int(t) for t in toks]
        except ValueError:
            raise ParseError("matrix entries must be 0 or 1", no) from None
        if any(x not in (0, 1) for x in row):
            raise ParseError("matrix entries must be 0 or 1", no)
        if rows and len(row) != len(rows[0]):
            raise ParseError("ragged matrix row", no)
        rows.append(row)
    return rows
