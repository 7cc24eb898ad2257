"""Line-oriented input files for extensions and presentations.

Group file::

    name    F2 x F2
    fiber   free a b               # or: presented a b c d / abelian x y z
    rel     a b a- b- c d c- d-    # presented fibers only, repeatable
    relation 2 0 0                 # abelian fibers only: one relation vector
    base    s t
    action  s                      # free / presented fibers
      a -> a
      b -> b
    matrix  t                      # abelian fibers: m rows of m integers
      1 0 0
      0 1 0
      0 0 1
    flag    surface-fiber          # or: assert-nonfibering

Presentation file::

    gens a b
    rel  a a

``#`` starts a comment.  Words are whitespace-separated generator names, a
trailing ``-`` marks an inverse and ``1`` is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .endos import parse_automorphism
from .fpgroups import ExtensionSpec, Presentation
from .words import parse_word
from .zmat import IntMatrix

FLAGS = {"surface-fiber": "surface-genus>=2", "assert-nonfibering": "user-asserted"}


class GroupFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass
class GroupFile:
    name: str
    extension: ExtensionSpec


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _ints(text: str, n: int) -> list[int]:
    try:
        return [int(x) for x in text.split()]
    except ValueError:
        raise GroupFileError(f"expected integers, got {text!r}", n) from None


def parse_group(text: str) -> GroupFile:
    name = "G"
    mode = None
    fiber: list[str] = []
    base: list[str] | None = None
    rels: list[tuple[int, str]] = []
    relations: list[list[int]] = []
    blocks: dict[str, tuple[str, int, list[tuple[int, str]]]] = {}
    current: list[tuple[int, str]] | None = None
    flags: list[str] = []

    for n, line in _lines(text):
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head in ("action", "matrix"):
            if not rest or len(rest.split()) != 1:
                raise GroupFileError(f"'{head}' needs exactly one base generator", n)
            if rest in blocks:
                raise GroupFileError(f"second block for {rest!r}", n)
            current = []
            blocks[rest] = (head, n, current)
            continue
        if head == "name":
            name = rest
        elif head == "fiber":
            words = rest.split()
            if not words or words[0] not in ("free", "presented", "abelian"):
                raise GroupFileError("fiber must be 'free', 'presented' or 'abelian'", n)
            mode, fiber = words[0], words[1:]
            if not fiber:
                raise GroupFileError("fiber needs at least one generator name", n)
            if len(set(fiber)) != len(fiber):
                raise GroupFileError("repeated fiber generator", n)
        elif head == "rel":
            rels.append((n, rest))
        elif head == "relation":
            relations.append(_ints(rest, n))
        elif head == "base":
            base = rest.split()
            if not base:
                raise GroupFileError("base needs at least one generator name", n)
        elif head == "flag":
            if rest not in FLAGS:
                raise GroupFileError(f"unknown flag {rest!r}", n)
            flags.append(rest)
        elif current is not None:
            current.append((n, line))
        else:
            raise GroupFileError(f"unexpected line {line!r}", n)
        if head in ("name", "fiber", "rel", "relation", "base", "flag"):
            current = None

    if mode is None:
        raise GroupFileError("missing 'fiber' line")
    if base is None:
        raise GroupFileError("missing 'base' line")
    if set(base) & set(fiber):
        raise GroupFileError("fiber and base generator names overlap")
    for g in blocks:
        if g not in base:
            raise GroupFileError(f"block for unknown base generator {g!r}", blocks[g][1])
    missing = [g for g in base if g not in blocks]
    if missing:
        raise GroupFileError(f"no action given for {', '.join(missing)}")
    if rels and mode != "presented":
        raise GroupFileError("'rel' lines need a presented fiber", rels[0][0])
    if relations and mode != "abelian":
        raise GroupFileError("'relation' lines need an abelian fiber")

    nonfibering = FLAGS[flags[-1]] if flags else None
    m = len(fiber)
    kw = {"fiber_names": tuple(fiber), "base_names": tuple(base)}
    try:
        if mode == "abelian":
            mats = []
            for g in base:
                kind, n, body = blocks[g]
                if kind != "matrix":
                    raise GroupFileError("abelian fibers take 'matrix' blocks", n)
                rows = [_ints(line, ln) for ln, line in body]
                if len(rows) != m or any(len(r) != m for r in rows):
                    raise GroupFileError(f"matrix for {g!r} must be {m}x{m}", n)
                mats.append(IntMatrix(rows, m, m))
            for r in relations:
                if len(r) != m:
                    raise GroupFileError(f"relation vectors need {m} entries")
            rel_mat = IntMatrix.from_columns(relations, m) if relations else None
            ext = ExtensionSpec.abelian(mats, fiber_rank=m, relations=rel_mat,
                                        nonfibering=nonfibering or "unknown", **kw)
        else:
            actions = []
            for g in base:
                kind, n, body = blocks[g]
                if kind != "action":
                    raise GroupFileError("free and presented fibers take 'action' blocks", n)
                try:
                    actions.append(parse_automorphism([line for _, line in body], fiber))
                except ValueError as exc:
                    raise GroupFileError(f"action {g}: {exc}", n) from None
            if mode == "free":
                ext = ExtensionSpec.free(m, actions, nonfibering=nonfibering, **kw)
            else:
                words = []
                for n, r in rels:
                    try:
                        words.append(parse_word(r, fiber))
                    except ValueError as exc:
                        raise GroupFileError(str(exc), n) from None
                ext = ExtensionSpec.presented(m, words, actions, nonfibering=nonfibering or "unknown", **kw)
    except GroupFileError:
        raise
    except ValueError as exc:
        raise GroupFileError(str(exc)) from None
    return GroupFile(name, ext)


def parse_presentation(text: str) -> Presentation:
    names: list[str] | None = None
    rels = []
    for n, line in _lines(text):
        head, _, rest = line.partition(" ")
        if head == "gens":
            names = rest.split()
        elif head == "rel":
            if names is None:
                raise GroupFileError("'rel' before 'gens'", n)
            try:
                rels.append(parse_word(rest, names))
            except ValueError as exc:
                raise GroupFileError(str(exc), n) from None
        elif head == "name":
            continue
        else:
            raise GroupFileError(f"unexpected line {line!r}", n)
    if names is None:
        raise GroupFileError("missing 'gens' line")
    return Presentation(len(names), tuple(rels), tuple(names))


def is_presentation_file(text: str) -> bool:
    return any(line.split()[0] == "gens" for _, line in _lines(text))
