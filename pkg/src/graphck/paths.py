"""Reduced walks in a doubled graph, with groupoid composition.

A path is an origin vertex plus a reduced word of signed edges: consecutive
letters are composable and no letter is immediately followed by its own
reversal.  Length-0 paths are vertices.  A path is directed when every
letter is traversed forward.  Composition concatenates and cancels at the
junction; inverses reverse the word.  Paths form a groupoid with the
vertices as units.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import EdgeInstance, Graph, GraphError, SignedEdge


class PathError(GraphError):
    pass


def reduce_word(word: list[SignedEdge], more) -> list[SignedEdge]:
    # stack reduction; valid because both inputs are already reduced
    for s in more:
        if word and word[-1] == s.reverse():
            word.pop()
        else:
            word.append(s)
    return word


@dataclass(frozen=True)
class Path:
    origin: str
    word: tuple[SignedEdge, ...] = ()

    def __post_init__(self):
        at = self.origin
        prev = None
        for s in self.word:
            if s.origin != at:
                raise PathError("letter %s does not start at %s" % (s, at))
            if prev is not None and s == prev.reverse():
                raise PathError("word is not reduced at %s" % (s,))
            at = s.terminus
            prev = s

    @classmethod
    def unit(cls, v: str) -> "Path":
        return cls(v, ())

    @classmethod
    def of(cls, origin: str, letters) -> "Path":
        word: list[SignedEdge] = []
        for x in letters:
            if isinstance(x, EdgeInstance):
                x = SignedEdge(x)
            word.append(x)
        return cls(origin, tuple(word))

    @property
    def terminus(self) -> str:
        return self.word[-1].terminus if self.word else self.origin

    def __len__(self) -> int:
        return len(self.word)

    @property
    def is_unit(self) -> bool:
        return not self.word

    @property
    def is_directed(self) -> bool:
        return all(s.forward for s in self.word)

    def concat(self, other: "Path") -> "Path":
        if self.terminus != other.origin:
            raise PathError(
                "cannot compose: %s ends at %s, %s starts at %s"
                % (self, self.terminus, other, other.origin)
            )
        word = reduce_word(list(self.word), other.word)
        return Path(self.origin, tuple(word))

    __mul__ = concat

    def inverse(self) -> "Path":
        return Path(self.terminus, tuple(s.reverse() for s in reversed(self.word)))

    def prefix(self, n: int) -> "Path":
        return Path(self.origin, self.word[:n])

    def drop(self, n: int) -> "Path":
        """The path left after removing the first n letters."""
        if n == 0:
            return self
        return Path(self.word[n - 1].terminus, self.word[n:])

    def append(self, e: EdgeInstance) -> "Path":
        """Right-multiply by a single forward edge, cancelling if needed."""
        s = SignedEdge(e)
        if s.origin != self.terminus:
            raise PathError("edge %s does not continue %s" % (e, self))
        if self.word and self.word[-1] == s.reverse():
            return Path(self.origin, self.word[:-1])
        return Path(self.origin, self.word + (s,))

    def sort_key(self):
        return (len(self.word), tuple(s.sort_key() for s in self.word), self.origin)

    def __str__(self) -> str:
        if not self.word:
            return self.origin
        return ".".join(str(s) for s in self.word)

    __repr__ = __str__


def parse_path(graph: Graph, text: str) -> Path:
    """Parse ``e.f.~g`` (or a bare vertex name for a length-0 path)."""
    text = text.strip()
    if not text:
        raise PathError("empty path text")
    if "." not in text and "~" not in text and graph.has_vertex(text):
        return Path.unit(text)
    letters = []
    for part in text.split("."):
        part = part.strip()
        if not part:
            raise PathError("empty letter in path %r" % text)
        forward = True
        if part.startswith("~"):
            forward = False
            part = part[1:]
        try:
            e = graph.instance(part)
        except GraphError as exc:
            raise PathError("in path %r: %s" % (text, exc)) from None
        letters.append(SignedEdge(e, forward))
    return Path(letters[0].origin, tuple(letters))
