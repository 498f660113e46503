"""Line-oriented text formats for complexes, covers, simplicial sets, categories
and chain complexes.

Identifiers are whitespace-free tokens: integers, bare names, or tuples and
sets of tokens written ``(a,b)`` / ``{a,b}``. Subdivision vertices such as
``(0,1)`` therefore survive a write/read cycle unchanged. ``#`` starts a
comment anywhere on a line.
"""

from __future__ import annotations

import re
from typing import Iterable

from .complexes import Cover, SimplicialComplex, vertex_key
from .homology import IntegerChainComplex
from .sset import FiniteSimplicialSet, SmallCategory, SSimplex


class FormatError(ValueError):
    """Malformed input; ``line`` is 1-based (0 when no single line is to blame)."""

    def __init__(self, message: str, line: int = 0, source: str = "<input>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + message)


_INT = re.compile(r"-?\d+\Z")
_NAME = re.compile(r"[A-Za-z_*][A-Za-z0-9_*'+\-.]*\Z")


# -- tokens -----------------------------------------------------------------------

def format_token(v) -> str:
    if isinstance(v, bool):
        raise ValueError("booleans are not valid identifiers")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        if not _NAME.match(v):
            raise ValueError(f"identifier {v!r} cannot be written as a token")
        return v
    if isinstance(v, tuple):
        inner = ",".join(format_token(x) for x in v)
        return f"({inner},)" if len(v) == 1 else f"({inner})"
    if isinstance(v, frozenset):
        return "{" + ",".join(format_token(x) for x in sorted(v, key=vertex_key)) + "}"
    raise ValueError(f"cannot write identifier of type {type(v).__name__}")


def parse_token(s: str):
    value, pos = _parse(s, 0)
    if pos != len(s):
        raise ValueError(f"trailing characters in token {s!r}")
    return value


def _parse(s: str, i: int):
    if i >= len(s):
        raise ValueError("unexpected end of token")
    if s[i] in "({":
        close = ")" if s[i] == "(" else "}"
        items, i = [], i + 1
        while i < len(s) and s[i] != close:
            x, i = _parse(s, i)
            items.append(x)
            if i < len(s) and s[i] == ",":
                i += 1
            elif i < len(s) and s[i] != close:
                raise ValueError(f"expected ',' or {close!r} in {s!r}")
        if i >= len(s):
            raise ValueError(f"unbalanced brackets in {s!r}")
        return (tuple(items) if close == ")" else frozenset(items)), i + 1
    j = i
    while j < len(s) and s[j] not in ",(){}":
        j += 1
    word = s[i:j]
    if _INT.match(word):
        return int(word), j
    if _NAME.match(word):
        return word, j
    raise ValueError(f"bad identifier {word!r}")


def _lines(text: str) -> Iterable[tuple[int, list]]:
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield n, body.split()


def _tokens(words, n, source):
    try:
        return [parse_token(w) for w in words]
    except ValueError as e:
        raise FormatError(str(e), n, source) from None


# -- complexes and covers -----------------------------------------------------------

def _default_order(K: SimplicialComplex) -> bool:
    return list(K.vertices) == sorted(K.vertices, key=vertex_key)


def _simplex_lines(K: SimplicialComplex) -> list:
    # maximal simplices suffice: closure is completed on load
    return [" ".join(format_token(v) for v in s) for s in K.maximal_simplices()]


def write_complex(K: SimplicialComplex, header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines.append("# f-vector " + (" ".join(map(str, K.f_vector)) or "empty"))
    if not _default_order(K):
        lines.append("vertices " + " ".join(format_token(v) for v in K.vertices))
    lines.extend(_simplex_lines(K))
    return "\n".join(lines) + "\n"


def read_complex(text: str, source: str = "<input>") -> SimplicialComplex:
    simplices, order = [], None
    for n, words in _lines(text):
        if words[0] == "vertices":
            if order is not None:
                raise FormatError("repeated 'vertices' line", n, source)
            order = _tokens(words[1:], n, source)
            continue
        if words[0] in ("part", "base"):
            raise FormatError(f"'{words[0]}' header in a complex file (is this a cover?)", n, source)
        s = _tokens(words, n, source)
        if len(set(s)) != len(s):
            raise FormatError("repeated vertex in simplex", n, source)
        simplices.append(s)
    try:
        return SimplicialComplex(simplices, vertices=order)
    except ValueError as e:
        raise FormatError(str(e), 0, source) from None


def write_cover(cover: Cover, header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines.append("base")
    if not _default_order(cover.base):
        lines.append("vertices " + " ".join(format_token(v) for v in cover.base.vertices))
    lines.extend(_simplex_lines(cover.base))
    for name in cover.names:
        lines.append(f"part {format_token(name)}")
        lines.extend(_simplex_lines(cover.part(name)))
    return "\n".join(lines) + "\n"


def read_cover(text: str, source: str = "<input>") -> Cover:
    """Cover file: optional ``base`` section, then ``part <name>`` sections.

    Without a base section the base is the union of the parts.
    """
    base, order, parts = None, None, []
    current = None
    for n, words in _lines(text):
        head = words[0]
        if head == "base":
            if base is not None or parts:
                raise FormatError("'base' must come first and only once", n, source)
            base = current = []
            continue
        if head == "part":
            if len(words) != 2:
                raise FormatError("expected 'part <name>'", n, source)
            name = _tokens(words[1:], n, source)[0]
            current = []
            parts.append((name, current))
            continue
        if head == "vertices":
            if current is not base or base is None:
                raise FormatError("'vertices' is only allowed in the base section", n, source)
            order = _tokens(words[1:], n, source)
            continue
        if current is None:
            raise FormatError("simplex before any 'base' or 'part' header", n, source)
        current.append((_tokens(words, n, source), n))
    if not parts:
        raise FormatError("no 'part' sections", 0, source)
    try:
        if base is None:
            base_cplx = SimplicialComplex([s for _, ss in parts for s, _ in ss])
        else:
            base_cplx = SimplicialComplex([s for s, _ in base], vertices=order)
    except ValueError as e:
        raise FormatError(str(e), 0, source) from None
    for name, ss in parts:
        for s, n in ss:
            if s not in base_cplx:
                raise FormatError(f"simplex {' '.join(map(format_token, s))} of part {name!r} is not in the base",
                                  n, source)
    try:
        return Cover(base_cplx, [(name, [s for s, _ in ss]) for name, ss in parts])
    except ValueError as e:
        raise FormatError(str(e), 0, source) from None


# -- simplicial sets ---------------------------------------------------------------

_FACE = re.compile(r"((?:s\d+)*)\.?g(\d+)\Z")


def _word_str(word: tuple) -> str:
    return "".join(f"s{i}" for i in word) + "." if word else ""


def write_sset(X: FiniteSimplicialSet, header: str | None = None) -> str:
    """Generators are numbered in generator order; original ids go in comments."""
    ids = {g: i for i, g in enumerate(X.dims)}
    lines = [f"# {header}"] if header else []
    for g, n in X.dims.items():
        faces = ",".join(f"{_word_str(f.word)}g{ids[f.gen]}" for f in X.generator_faces(g))
        line = f"g{ids[g]} dim={n}" + (f" faces={faces}" if n else "")
        try:
            line += f"  # {format_token(g)}"
        except ValueError:
            pass
        lines.append(line)
    return "\n".join(lines) + "\n"


def read_sset(text: str, source: str = "<input>") -> FiniteSimplicialSet:
    dims, faces, where = {}, {}, {}
    for n, words in _lines(text):
        if not re.match(r"g\d+\Z", words[0]):
            raise FormatError(f"expected 'g<id>', got {words[0]!r}", n, source)
        g = int(words[0][1:])
        if g in dims:
            raise FormatError(f"generator g{g} defined twice", n, source)
        fields = {}
        for w in words[1:]:
            key, eq, val = w.partition("=")
            if not eq or key not in ("dim", "faces") or key in fields:
                raise FormatError(f"bad field {w!r}", n, source)
            fields[key] = val
        if "dim" not in fields or not fields["dim"].isdigit():
            raise FormatError("missing or bad 'dim='", n, source)
        dims[g] = int(fields["dim"])
        fs = []
        for f in filter(None, fields.get("faces", "").split(",")):
            m = _FACE.match(f)
            if not m:
                raise FormatError(f"bad face {f!r}", n, source)
            word = tuple(int(x) for x in re.findall(r"s(\d+)", m.group(1)))
            fs.append(SSimplex(int(m.group(2)), word))
        faces[g] = fs
        where[g] = n
    for g, fs in faces.items():
        for f in fs:
            if f.gen not in dims:
                raise FormatError(f"face refers to undefined generator g{f.gen}", where[g], source)
    try:
        return FiniteSimplicialSet(dims, faces)
    except ValueError as e:
        raise FormatError(str(e), 0, source) from None


def canonical_sset(X: FiniteSimplicialSet) -> FiniteSimplicialSet:
    """Copy of X with generators renamed 0, 1, ... in generator order."""
    ids = {g: i for i, g in enumerate(X.dims)}
    return FiniteSimplicialSet({ids[g]: n for g, n in X.dims.items()},
                               {ids[g]: [SSimplex(ids[f.gen], f.word) for f in X.generator_faces(g)]
                                for g in X.dims}, check=False)


# -- categories -------------------------------------------------------------------

def write_category(C: SmallCategory, header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines.append("objects " + " ".join(format_token(x) for x in C.objects))
    for x in C.objects:
        lines.append(f"identity {format_token(x)} {format_token(C.identities[x])}")
    for f in C.non_identity_arrows():
        a, b = C.arrows[f]
        lines.append(f"arrow {format_token(f)} {format_token(a)} {format_token(b)}")
    for f in C.non_identity_arrows():
        for g in C.arrows_from(C.target(f)):
            if not C.is_identity(g):
                lines.append(f"compose {format_token(g)} {format_token(f)} {format_token(C.compose(g, f))}")
    return "\n".join(lines) + "\n"


def read_category(text: str, source: str = "<input>") -> SmallCategory:
    """``objects``, ``identity <obj> <arrow>``, ``arrow <name> <src> <tgt>`` and
    ``compose <g> <f> <g o f>`` lines. Missing identities are named ``id_<obj>``."""
    objects, ids, arrows, comp = None, {}, {}, {}
    for n, words in _lines(text):
        head, rest = words[0], _tokens(words[1:], n, source)
        if head == "objects":
            if objects is not None:
                raise FormatError("repeated 'objects' line", n, source)
            objects = rest
        elif head == "identity" and len(rest) == 2:
            ids[rest[0]] = rest[1]
        elif head == "arrow" and len(rest) == 3:
            if rest[0] in arrows:
                raise FormatError(f"arrow {words[1]} defined twice", n, source)
            arrows[rest[0]] = (rest[1], rest[2])
        elif head == "compose" and len(rest) == 3:
            comp[(rest[0], rest[1])] = rest[2]
        else:
            raise FormatError(f"unrecognized line starting with {head!r}", n, source)
    if objects is None:
        raise FormatError("missing 'objects' line", 0, source)
    for x in objects:
        e = ids.setdefault(x, f"id_{format_token(x)}" if not isinstance(x, tuple) else ("id", x))
        arrows[e] = (x, x)
    try:
        return SmallCategory(objects, arrows, ids, comp)
    except ValueError as e:
        raise FormatError(str(e), 0, source) from None


# -- chain complexes -----------------------------------------------------------------

def write_chain_complex(C: IntegerChainComplex, header: str | None = None, labels: bool = False) -> str:
    """``rank <n> <r>`` per degree, then ``d <n> <j> <i>:<v> ...`` for nonzero columns."""
    lines = [f"# {header}"] if header else []
    for n in range(C.top + 1):
        lines.append(f"rank {n} {len(C.basis(n))}")
    if labels:
        for n in range(C.top + 1):
            for j, lab in enumerate(C.basis(n)):
                lines.append(f"cell {n} {j} {format_token(lab)}")
    for n in range(1, C.top + 1):
        indptr, indices, data = C.csc(n)
        for j in range(len(indptr) - 1):
            lo, hi = int(indptr[j]), int(indptr[j + 1])
            if lo == hi:
                continue
            pairs = sorted(zip(indices[lo:hi].tolist(), data[lo:hi].tolist()))
            terms = " ".join(f"{i}:{v}" for i, v in pairs if v)
            if terms:
                lines.append(f"d {n} {j} {terms}")
    return "\n".join(lines) + "\n"


def read_chain_complex(text: str, source: str = "<input>") -> IntegerChainComplex:
    ranks, cols, labels = {}, {}, {}
    for n, words in _lines(text):
        head = words[0]
        try:
            if head == "rank" and len(words) == 3:
                ranks[int(words[1])] = int(words[2])
            elif head == "cell" and len(words) == 4:
                labels[(int(words[1]), int(words[2]))] = parse_token(words[3])
            elif head == "d" and len(words) >= 3:
                deg, j = int(words[1]), int(words[2])
                col = {}
                for t in words[3:]:
                    i, v = t.split(":")
                    col[int(i)] = col.get(int(i), 0) + int(v)
                cols[(deg, j)] = {i: v for i, v in col.items() if v}
            else:
                raise ValueError(f"unrecognized line starting with {head!r}")
        except ValueError as e:
            raise FormatError(str(e), n, source) from None
    top = max(ranks, default=-1)
    if sorted(ranks) != list(range(top + 1)):
        raise FormatError("rank lines must cover degrees 0..top", 0, source)
    bases = [[labels.get((n, j), j) for j in range(ranks[n])] for n in range(top + 1)]
    columns = [[{} for _ in range(ranks[n])] for n in range(top + 1)]
    for (deg, j), col in cols.items():
        if not 1 <= deg <= top or not 0 <= j < ranks[deg] or any(not 0 <= i < ranks[deg - 1] for i in col):
            raise FormatError(f"boundary entry out of range in degree {deg}, column {j}", 0, source)
        columns[deg][j] = col
    try:
        return IntegerChainComplex(bases, columns)
    except ValueError as e:
        raise FormatError(str(e), 0, source) from None


def read_path(path: str, reader):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return reader(text, source=path)
