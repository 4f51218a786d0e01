"""Sensibility-assertion corpus: data model, line parser, and extents.

An assertion records a judgment that a property can (or cannot) sensibly be
predicated of a concept: "delicious apple" is sensible, "delicious thursday"
is not.  Truth is irrelevant at this layer; only predicability is recorded.

Corpus line format (UTF-8, one fact per line):

    + DELICIOUS apple          sensible unary fact
    - DELICIOUS thursday       nonsensical unary fact
    + RIDE(human, bike)        sensible binary fact; expands to two positional
                               facts RIDE@agent human and RIDE@object bike
    + RIDE@object bike         positional fact written directly
    # comment                  '#' starts a comment at start of line or after
                               whitespace ('book#1' stays a sense suffix)

Binary facts are decomposed into positional pseudo-properties (REL@agent,
REL@object) so that every downstream computation works over monadic
applicability facts.  The pairing of the two argument positions is not
retained; serialization always emits positional lines.

Absence of an assertion means "unknown", which extent() treats as
"not sensible" (closed-world reading).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from . import jsonio
from .errors import CorpusSyntaxError, InputDataError

SENSIBLE = "sensible"
NONSENSICAL = "nonsensical"

AGENT = "agent"
OBJECT = "object"

_CONCEPT_RE = re.compile(r"^[a-z][a-z0-9_-]*(?:#[1-9][0-9]*)?$")
_PROPERTY_RE = re.compile(r"^[A-Z][A-Z0-9_-]*$")

_UNARY_LINE_RE = re.compile(
    r"^([+-])\s+([A-Z][A-Z0-9_-]*(?:@(?:agent|object))?)\s+(\S+)$"
)
_BINARY_LINE_RE = re.compile(
    r"^([+-])\s+([A-Z][A-Z0-9_-]*)\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)$"
)


@dataclass(frozen=True)
class ConceptId:
    """A noun or noun-sense token such as ``apple`` or ``book#1``."""

    name: str

    def __post_init__(self) -> None:
        if not _CONCEPT_RE.match(self.name):
            raise ValueError(
                f"invalid concept id {self.name!r}: expected a lowercase token "
                "with an optional #k sense suffix (k >= 1)"
            )

    @property
    def base(self) -> str:
        """Surface form without the ``#k`` sense suffix."""
        return self.name.split("#", 1)[0]

    @property
    def sense(self) -> int | None:
        if "#" in self.name:
            return int(self.name.split("#", 1)[1])
        return None

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PropertyKey:
    """An applicability-property key.

    Unary properties (DELICIOUS) have arity 1 and no position.  Binary
    relations (RIDE) are represented by two positional pseudo-properties of
    arity 2: RIDE@agent constrains the agent slot, RIDE@object the object
    slot.
    """

    name: str
    arity: int = 1
    position: str | None = None

    def __post_init__(self) -> None:
        if not _PROPERTY_RE.match(self.name):
            raise ValueError(
                f"invalid property name {self.name!r}: expected an uppercase token"
            )
        if self.arity == 1:
            if self.position is not None:
                raise ValueError("arity-1 properties take no position")
        elif self.arity == 2:
            if self.position not in (AGENT, OBJECT):
                raise ValueError(
                    f"arity-2 properties need position 'agent' or 'object', "
                    f"got {self.position!r}"
                )
        else:
            raise ValueError(f"arity must be 1 or 2, got {self.arity}")

    @property
    def token(self) -> str:
        """Display form: ``DELICIOUS`` or ``RIDE@object``."""
        if self.arity == 1:
            return self.name
        return f"{self.name}@{self.position}"

    @classmethod
    def from_token(cls, token: str) -> "PropertyKey":
        if "@" in token:
            name, _, position = token.partition("@")
            return cls(name, arity=2, position=position)
        return cls(token)

    def __str__(self) -> str:
        return self.token


@dataclass(frozen=True)
class Assertion:
    """A polarity-tagged applicability fact between a property and a concept."""

    property: PropertyKey
    concept: ConceptId
    polarity: str

    def __post_init__(self) -> None:
        if self.polarity not in (SENSIBLE, NONSENSICAL):
            raise ValueError(f"polarity must be sensible/nonsensical, got {self.polarity!r}")

    @property
    def is_sensible(self) -> bool:
        return self.polarity == SENSIBLE


def _assertion_key(a: Assertion) -> tuple[str, str, str, str]:
    return (a.property.name, a.property.position or "", a.concept.name, a.polarity)


@dataclass(frozen=True)
class AssertionSet:
    """A normalized collection of assertions.

    Construction deduplicates exact repeats and sorts assertions into a
    canonical order, so equal corpora compare equal regardless of input
    order.  Conflicting polarities for the same (property, concept) pair are
    retained; check_consistency() reports them.
    """

    assertions: tuple[Assertion, ...]
    concepts: frozenset[ConceptId] = field(init=False)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(set(self.assertions), key=_assertion_key))
        object.__setattr__(self, "assertions", ordered)
        object.__setattr__(self, "concepts", frozenset(a.concept for a in ordered))

    @property
    def properties(self) -> tuple[PropertyKey, ...]:
        """All distinct property keys mentioned, in token order."""
        seen = {a.property.token: a.property for a in self.assertions}
        return tuple(seen[t] for t in sorted(seen))

    def sensible_properties(self) -> tuple[PropertyKey, ...]:
        seen = {a.property.token: a.property for a in self.assertions if a.is_sensible}
        return tuple(seen[t] for t in sorted(seen))

    def __len__(self) -> int:
        return len(self.assertions)


def _strip_comment(raw: str) -> str:
    # '#' opens a comment only at the start of the line or after whitespace,
    # so sense suffixes like book#1 survive.
    for i, ch in enumerate(raw):
        if ch == "#" and (i == 0 or raw[i - 1].isspace()):
            return raw[:i]
    return raw


def scan_corpus(text: str) -> list[tuple[int, Assertion]]:
    """Parse corpus text into (line number, assertion) pairs.

    Binary lines contribute two entries with the same line number.  Raises
    CorpusSyntaxError with the offending line number on any malformed line.
    """
    out: list[tuple[int, Assertion]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _BINARY_LINE_RE.match(line)
        if m:
            sign, name, agent_tok, object_tok = m.groups()
            polarity = SENSIBLE if sign == "+" else NONSENSICAL
            try:
                agent_c = ConceptId(agent_tok)
                object_c = ConceptId(object_tok)
                agent_p = PropertyKey(name, arity=2, position=AGENT)
                object_p = PropertyKey(name, arity=2, position=OBJECT)
            except ValueError as exc:
                raise CorpusSyntaxError(lineno, str(exc)) from exc
            out.append((lineno, Assertion(agent_p, agent_c, polarity)))
            out.append((lineno, Assertion(object_p, object_c, polarity)))
            continue
        m = _UNARY_LINE_RE.match(line)
        if m:
            sign, prop_tok, concept_tok = m.groups()
            polarity = SENSIBLE if sign == "+" else NONSENSICAL
            try:
                prop = PropertyKey.from_token(prop_tok)
                concept = ConceptId(concept_tok)
            except ValueError as exc:
                raise CorpusSyntaxError(lineno, str(exc)) from exc
            out.append((lineno, Assertion(prop, concept, polarity)))
            continue
        raise CorpusSyntaxError(
            lineno,
            f"cannot parse {line!r}: expected '+ PROP concept', '- PROP concept', "
            "'+ REL(a, b)', or '- REL(a, b)'",
        )
    return out


def parse_corpus(text: str) -> AssertionSet:
    """Parse corpus text into a normalized AssertionSet."""
    return AssertionSet(tuple(a for _, a in scan_corpus(text)))


def serialize_corpus(aset: AssertionSet) -> str:
    """Render an AssertionSet back to corpus text (canonical line order).

    parse_corpus(serialize_corpus(s)) == s for every AssertionSet; binary
    facts come back as their positional halves.
    """
    lines = [
        f"{'+' if a.is_sensible else '-'} {a.property.token} {a.concept.name}"
        for a in aset.assertions
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def extent(aset: AssertionSet, prop: PropertyKey) -> frozenset[ConceptId]:
    """Concepts with a sensible assertion for prop (closed world).

    Nonsensical assertions never contribute; an unknown property yields the
    empty set rather than an error.
    """
    return frozenset(
        a.concept for a in aset.assertions if a.is_sensible and a.property == prop
    )


def check_consistency(aset: AssertionSet) -> list[tuple[PropertyKey, ConceptId]]:
    """Every (property, concept) pair asserted with both polarities, sorted."""
    by_pair: dict[tuple[PropertyKey, ConceptId], set[str]] = {}
    for a in aset.assertions:
        by_pair.setdefault((a.property, a.concept), set()).add(a.polarity)
    conflicts = [pair for pair, pols in by_pair.items() if len(pols) == 2]
    conflicts.sort(key=lambda pc: (pc[0].token, pc[1].name))
    return conflicts


def conflict_line_numbers(
    scanned: Iterable[tuple[int, Assertion]],
) -> dict[tuple[PropertyKey, ConceptId], tuple[int, int]]:
    """Map each conflicting pair to the first line of each polarity."""
    first_seen: dict[tuple[PropertyKey, ConceptId, str], int] = {}
    for lineno, a in scanned:
        first_seen.setdefault((a.property, a.concept, a.polarity), lineno)
    out: dict[tuple[PropertyKey, ConceptId], tuple[int, int]] = {}
    for (prop, concept, polarity), lineno in first_seen.items():
        other = NONSENSICAL if polarity == SENSIBLE else SENSIBLE
        partner = first_seen.get((prop, concept, other))
        if partner is not None:
            lo, hi = sorted((lineno, partner))
            out[(prop, concept)] = (lo, hi)
    return out


# --- JSON export / import ---------------------------------------------------

def corpus_to_json(aset: AssertionSet) -> dict:
    return {
        "assertions": [
            {
                "prop": a.property.name,
                "arity": a.property.arity,
                "position": a.property.position,
                "concept": a.concept.name,
                "polarity": a.polarity,
            }
            for a in aset.assertions
        ]
    }


def corpus_to_json_text(aset: AssertionSet) -> str:
    return jsonio.dumps(corpus_to_json(aset))


def corpus_from_json(data: object) -> AssertionSet:
    if not isinstance(data, dict) or not isinstance(data.get("assertions"), list):
        raise InputDataError("corpus JSON must be an object with an 'assertions' list")
    assertions = []
    for i, entry in enumerate(data["assertions"]):
        if not isinstance(entry, dict):
            raise InputDataError(f"corpus JSON: assertion {i} is not an object")
        try:
            prop = PropertyKey(
                str(entry["prop"]),
                arity=int(entry.get("arity", 1)),
                position=entry.get("position"),
            )
            concept = ConceptId(str(entry["concept"]))
            assertions.append(Assertion(prop, concept, str(entry["polarity"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputDataError(f"corpus JSON: assertion {i}: {exc}") from exc
    return AssertionSet(tuple(assertions))


def corpus_from_json_text(text: str) -> AssertionSet:
    return corpus_from_json(jsonio.loads(text, what="corpus JSON"))
