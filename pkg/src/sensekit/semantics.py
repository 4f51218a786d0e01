"""Nominalization into primitive-relation triples and per-sense meaning records.

An applicability fact like "ARTICULATE can be said of humans" says more once
the adjective is reified into an abstract object (a trope): a human can have
the property of articulation.  This module performs that conversion, both for
pre-segmented copular statements ("Mary is wise") and for corpus assertions,
and it maintains MeaningRecords: per word-sense maps from a primitive
relation (the dimension) to weighted property tokens.

The primitive-relation inventory is a closed enumeration; alternate names
from other inventories (Inst, HasAgent, ...) resolve through an alias table.
"""

from __future__ import annotations

import enum
import os
import re
import tempfile
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import jsonio
from .corpus import Assertion, ConceptId
from .errors import InputDataError, LexiconError, MeaningStoreError


class PrimitiveRelation(str, enum.Enum):
    """Language-agnostic primitive relations usable as dimensions of meaning."""

    INSTANCE_OF = "instanceOf"
    EQ = "eq"
    HAS_PROP = "hasProp"
    IN_STATE = "inState"
    AGENT_OF = "agentOf"
    OBJECT_OF = "objectOf"
    HAS_VALUE = "hasValue"
    PARTICIPANT_IN = "participantIn"
    PART_OF = "partOf"
    IS_A = "isA"
    PRECEDES = "precedes"
    INHERES_IN = "inheresIn"
    DEPENDS_ON = "dependsOn"
    EXEMPLIFIES = "exemplifies"
    REALIZES = "realizes"
    TYPE_OF = "typeOf"

    def __str__(self) -> str:
        return self.value


RELATION_ALIASES: dict[str, PrimitiveRelation] = {
    "Inst": PrimitiveRelation.INSTANCE_OF,
    "Eq": PrimitiveRelation.EQ,
    "Part": PrimitiveRelation.PART_OF,
    "IsA": PrimitiveRelation.IS_A,
    "HasAgent": PrimitiveRelation.AGENT_OF,
    "HasParticipant": PrimitiveRelation.PARTICIPANT_IN,
    "Inhere": PrimitiveRelation.INHERES_IN,
    "Dep": PrimitiveRelation.DEPENDS_ON,
    "Exemp": PrimitiveRelation.EXEMPLIFIES,
    "Precedes": PrimitiveRelation.PRECEDES,
    "Realizes": PrimitiveRelation.REALIZES,
    "TypeOf": PrimitiveRelation.TYPE_OF,
}

#: Default dimensions along which word senses collect weighted properties.
DEFAULT_DIMS: tuple[PrimitiveRelation, ...] = (
    PrimitiveRelation.HAS_PROP,
    PrimitiveRelation.AGENT_OF,
    PrimitiveRelation.OBJECT_OF,
    PrimitiveRelation.IN_STATE,
    PrimitiveRelation.PART_OF,
)


def resolve_relation(name: str) -> PrimitiveRelation:
    """Resolve a canonical name or alias (case-insensitively) to a relation."""
    for rel in PrimitiveRelation:
        if rel.value == name:
            return rel
    if name in RELATION_ALIASES:
        return RELATION_ALIASES[name]
    folded = name.casefold()
    for rel in PrimitiveRelation:
        if rel.value.casefold() == folded:
            return rel
    for alias, rel in RELATION_ALIASES.items():
        if alias.casefold() == folded:
            return rel
    raise InputDataError(f"unknown primitive relation {name!r}")


# --- nominalization lexicon ---------------------------------------------------

CATEGORY_PROPERTY = "property"
CATEGORY_STATE = "state"
CATEGORY_ACTIVITY = "activity"
CATEGORY_EVENT = "event"

_CATEGORIES = (CATEGORY_PROPERTY, CATEGORY_STATE, CATEGORY_ACTIVITY, CATEGORY_EVENT)
_TROPE_RE = re.compile(r"^[a-z][a-z0-9'_-]*$")


@dataclass(frozen=True)
class LexiconEntry:
    trope: str
    category: str

    def __post_init__(self) -> None:
        if not _TROPE_RE.match(self.trope):
            raise ValueError(f"trope must be a lowercase token, got {self.trope!r}")
        if self.category not in _CATEGORIES:
            raise ValueError(
                f"category must be one of {', '.join(_CATEGORIES)}, got {self.category!r}"
            )


@dataclass(frozen=True)
class NominalizationLexicon:
    """Map from property key name (uppercase) to its trope noun and category."""

    entries: Mapping[str, LexiconEntry]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", dict(self.entries))

    def get(self, name: str) -> LexiconEntry | None:
        return self.entries.get(name)

    def require(self, name: str) -> LexiconEntry:
        entry = self.entries.get(name)
        if entry is None:
            raise LexiconError(f"no lexicon entry for property {name!r}")
        return entry

    def __len__(self) -> int:
        return len(self.entries)


EMPTY_LEXICON = NominalizationLexicon({})


def lexicon_from_json(data: object) -> NominalizationLexicon:
    if not isinstance(data, dict):
        raise LexiconError("lexicon JSON must be an object keyed by property name")
    entries: dict[str, LexiconEntry] = {}
    for key, raw in data.items():
        if not isinstance(raw, dict):
            raise LexiconError(f"lexicon entry {key!r} must be an object")
        try:
            entries[str(key)] = LexiconEntry(
                trope=str(raw["trope"]), category=str(raw["cat"])
            )
        except (KeyError, ValueError) as exc:
            raise LexiconError(f"lexicon entry {key!r}: {exc}") from exc
    return NominalizationLexicon(entries)


def lexicon_to_json(lexicon: NominalizationLexicon) -> dict:
    return {
        name: {"trope": e.trope, "cat": e.category}
        for name, e in sorted(lexicon.entries.items())
    }


def load_lexicon(path: str) -> NominalizationLexicon:
    with open(path, encoding="utf-8") as fh:
        return lexicon_from_json(jsonio.loads(fh.read(), what=f"lexicon {path}"))


# --- morphology helpers -------------------------------------------------------

_VOWELS = "aeiou"


def gerund(stem: str) -> str:
    """Best-effort -ing form of a lowercase verb stem (lexicon overrides it)."""
    stem = stem.lower()
    if stem.endswith("e") and not stem.endswith("ee"):
        return stem[:-1] + "ing"
    if (
        len(stem) >= 3
        and stem[-1] not in _VOWELS + "wxy"
        and stem[-2] in _VOWELS
        and stem[-3] not in _VOWELS
    ):
        return stem + stem[-1] + "ing"
    return stem + "ing"


def participle_stem(participle: str) -> str:
    token = participle.lower()
    if token.endswith("ied"):
        return token[:-3] + "y"
    if token.endswith("ed"):
        return token[:-2]
    return token


# --- primitive triples ----------------------------------------------------------

@dataclass(frozen=True)
class PrimitiveTriple:
    """(entity, primitive relation, filler) in canonical argument order.

    The filler kind depends on the relation: a type label for instanceOf/isA,
    a trope or gerund for hasProp/inState/agentOf/objectOf/participantIn, a
    quantity with units for hasValue.
    """

    subject: str
    relation: PrimitiveRelation
    obj: str

    def serialize(self) -> str:
        return f"{self.subject} {self.relation.value} {self.obj}"

    def to_json(self) -> dict:
        return {"subject": self.subject, "relation": self.relation.value, "object": self.obj}


# --- copular statement classification -------------------------------------------

class CopularForm(str, enum.Enum):
    NP_PREDICATE = "np_predicate"
    PROPER_IDENTITY = "proper_identity"
    ADJECTIVE = "adjective"
    STATE_ADJECTIVE = "state_adjective"
    PROGRESSIVE = "progressive"
    PASSIVE_PARTICIPLE = "passive_participle"
    MEASURE = "measure"


@dataclass(frozen=True)
class CopularStatement:
    """A pre-segmented "x is P" statement.

    payload carries the predicate tokens: one token for every form except
    measure, which takes (attribute, quantity) — e.g. ("height", "5'10\"").
    """

    subject: str
    form: CopularForm
    payload: tuple[str, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.form, CopularForm):
            try:
                object.__setattr__(self, "form", CopularForm(self.form))
            except ValueError:
                raise InputDataError(f"unknown copular form {self.form!r}") from None
        object.__setattr__(self, "payload", tuple(self.payload))
        expected = 2 if self.form is CopularForm.MEASURE else 1
        if len(self.payload) != expected:
            raise InputDataError(
                f"form {self.form.value} takes {expected} payload token(s), "
                f"got {len(self.payload)}"
            )


def classify(
    statement: CopularStatement,
    lexicon: NominalizationLexicon = EMPTY_LEXICON,
) -> PrimitiveTriple:
    """Map a copular statement to its implicit primitive-relation triple.

    Adjective and state-adjective forms require a lexicon entry (the trope).
    Progressive verbs default to the agentive reading; a lexicon entry with
    category "event" switches the statement to participantIn.
    """
    subject, form, payload = statement.subject, statement.form, statement.payload
    if form is CopularForm.NP_PREDICATE:
        return PrimitiveTriple(subject, PrimitiveRelation.INSTANCE_OF, payload[0])
    if form is CopularForm.PROPER_IDENTITY:
        return PrimitiveTriple(subject, PrimitiveRelation.EQ, payload[0])
    if form is CopularForm.ADJECTIVE:
        entry = lexicon.require(payload[0].upper())
        return PrimitiveTriple(subject, PrimitiveRelation.HAS_PROP, entry.trope)
    if form is CopularForm.STATE_ADJECTIVE:
        entry = lexicon.require(payload[0].upper())
        return PrimitiveTriple(subject, PrimitiveRelation.IN_STATE, entry.trope)
    if form is CopularForm.PROGRESSIVE:
        entry = lexicon.get(payload[0].upper())
        relation = (
            PrimitiveRelation.PARTICIPANT_IN
            if entry is not None and entry.category == CATEGORY_EVENT
            else PrimitiveRelation.AGENT_OF
        )
        return PrimitiveTriple(subject, relation, payload[0])
    if form is CopularForm.PASSIVE_PARTICIPLE:
        entry = lexicon.get(payload[0].upper())
        noun = entry.trope if entry is not None else gerund(participle_stem(payload[0]))
        return PrimitiveTriple(subject, PrimitiveRelation.OBJECT_OF, noun)
    if form is CopularForm.MEASURE:
        attribute, quantity = payload
        return PrimitiveTriple(
            f"{subject}'s {attribute}", PrimitiveRelation.HAS_VALUE, quantity
        )
    raise InputDataError(f"unknown copular form {form!r}")  # pragma: no cover


def nominalize_assertion(
    assertion: Assertion,
    lexicon: NominalizationLexicon = EMPTY_LEXICON,
) -> PrimitiveTriple:
    """Reify a sensible assertion into a primitive-relation triple.

    Unary properties need a lexicon entry whose category picks the relation
    (property -> hasProp, state -> inState).  Positional pseudo-properties
    need no lexicon: the relation name becomes a gerund (lexicon trope wins
    when present).
    """
    if not assertion.is_sensible:
        raise InputDataError(
            f"cannot nominalize nonsensical assertion "
            f"({assertion.property.token}, {assertion.concept.name}): "
            "tropes attach only where predication is sensible"
        )
    prop = assertion.property
    subject = assertion.concept.name
    if prop.arity == 2:
        entry = lexicon.get(prop.name)
        noun = entry.trope if entry is not None else gerund(prop.name.lower())
        relation = (
            PrimitiveRelation.AGENT_OF
            if prop.position == "agent"
            else PrimitiveRelation.OBJECT_OF
        )
        return PrimitiveTriple(subject, relation, noun)
    entry = lexicon.require(prop.name)
    if entry.category == CATEGORY_PROPERTY:
        return PrimitiveTriple(subject, PrimitiveRelation.HAS_PROP, entry.trope)
    if entry.category == CATEGORY_STATE:
        return PrimitiveTriple(subject, PrimitiveRelation.IN_STATE, entry.trope)
    raise LexiconError(
        f"unary property {prop.name!r} has category {entry.category!r}; "
        "only 'property' and 'state' nominalize to hasProp/inState"
    )


# --- meaning records ------------------------------------------------------------

WeightedProperty = tuple[float, str]


def _validate_dims(
    dims: Mapping[PrimitiveRelation, Sequence[WeightedProperty]],
    *,
    where: str = "meaning record",
) -> dict[PrimitiveRelation, tuple[WeightedProperty, ...]]:
    clean: dict[PrimitiveRelation, tuple[WeightedProperty, ...]] = {}
    for relation, pairs in dims.items():
        if not isinstance(relation, PrimitiveRelation):
            raise MeaningStoreError(f"{where}: dimension key {relation!r} is not a relation")
        seen: set[str] = set()
        normalized: list[WeightedProperty] = []
        for weight, token in pairs:
            weight = float(weight)
            if not 0.0 < weight <= 1.0:
                raise MeaningStoreError(
                    f"{where}, dimension {relation.value!r}: "
                    f"weight {weight} outside (0, 1]"
                )
            if token in seen:
                raise MeaningStoreError(
                    f"{where}, dimension {relation.value!r}: "
                    f"duplicate property token {token!r}"
                )
            seen.add(token)
            normalized.append((weight, token))
        clean[relation] = tuple(normalized)
    return clean


@dataclass(frozen=True)
class MeaningRecord:
    """Weighted property sets along primitive-relation dimensions for one sense."""

    sense: str
    gloss: str
    dims: Mapping[PrimitiveRelation, tuple[WeightedProperty, ...]]

    def __post_init__(self) -> None:
        ConceptId(self.sense)  # validates the token shape
        object.__setattr__(
            self, "dims", _validate_dims(self.dims, where=f"record {self.sense!r}")
        )

    def dimension(self, relation: PrimitiveRelation) -> tuple[WeightedProperty, ...]:
        """Pairs along one dimension; absent dimensions are empty, not errors."""
        return self.dims.get(relation, ())


def build_meaning(
    sense: str,
    counted_triples: Iterable[tuple[PrimitiveTriple, int]],
    gloss: str = "",
) -> MeaningRecord:
    """Aggregate usage counts into a weighted meaning record.

    Weights are max-normalized per dimension: the most frequent property gets
    1.0 and count ordering is preserved exactly (a > b implies w(a) > w(b)).
    """
    counts: dict[PrimitiveRelation, dict[str, int]] = {}
    total = 0
    for triple, count in counted_triples:
        total += 1
        if count < 1:
            raise InputDataError(f"count for {triple.serialize()!r} must be >= 1")
        if triple.subject != sense:
            raise InputDataError(
                f"triple subject {triple.subject!r} does not match sense {sense!r}"
            )
        per_dim = counts.setdefault(triple.relation, {})
        per_dim[triple.obj] = per_dim.get(triple.obj, 0) + count
    if total == 0:
        raise InputDataError("cannot build a meaning record from no triples")
    dims: dict[PrimitiveRelation, tuple[WeightedProperty, ...]] = {}
    for relation in sorted(counts, key=lambda r: r.value):
        per_dim = counts[relation]
        top = max(per_dim.values())
        pairs = tuple(
            (per_dim[token] / top, token)
            for token in sorted(per_dim, key=lambda t: (-per_dim[t], t))
        )
        dims[relation] = pairs
    return MeaningRecord(sense=sense, gloss=gloss, dims=dims)


# --- meaning store --------------------------------------------------------------

def meaning_record_to_json(record: MeaningRecord) -> dict:
    return {
        "sense": record.sense,
        "gloss": record.gloss,
        "dims": {
            relation.value: [
                [weight, token]
                for weight, token in sorted(pairs, key=lambda p: (-p[0], p[1]))
            ]
            for relation, pairs in sorted(record.dims.items(), key=lambda kv: kv[0].value)
        },
    }


def meaning_record_from_json(data: object, *, where: str = "meaning record") -> MeaningRecord:
    if not isinstance(data, dict):
        raise MeaningStoreError(f"{where}: record must be an object")
    try:
        sense = str(data["sense"])
        gloss = str(data.get("gloss", ""))
        raw_dims = data["dims"]
    except KeyError as exc:
        raise MeaningStoreError(f"{where}: missing field {exc}") from exc
    if not isinstance(raw_dims, dict):
        raise MeaningStoreError(f"{where}: 'dims' must be an object")
    dims: dict[PrimitiveRelation, list[WeightedProperty]] = {}
    for rel_name, raw_pairs in raw_dims.items():
        try:
            relation = resolve_relation(str(rel_name))
        except InputDataError as exc:
            raise MeaningStoreError(f"{where}: {exc}") from exc
        if not isinstance(raw_pairs, list):
            raise MeaningStoreError(
                f"{where}, dimension {rel_name!r}: expected a list of [weight, token]"
            )
        pairs: list[WeightedProperty] = []
        for raw in raw_pairs:
            try:
                weight, token = float(raw[0]), str(raw[1])
            except (TypeError, ValueError, IndexError) as exc:
                raise MeaningStoreError(
                    f"{where}, dimension {rel_name!r}: malformed pair {raw!r}"
                ) from exc
            pairs.append((weight, token))
        dims[relation] = pairs
    try:
        return MeaningRecord(sense=sense, gloss=gloss, dims=dims)
    except ValueError as exc:
        raise MeaningStoreError(f"{where}: {exc}") from exc


def meanings_to_json_text(records: Iterable[MeaningRecord]) -> str:
    ordered = sorted(records, key=lambda r: r.sense)
    senses = [r.sense for r in ordered]
    for a, b in zip(senses, senses[1:]):
        if a == b:
            raise MeaningStoreError(f"duplicate sense {a!r} in meaning store")
    return jsonio.dumps([meaning_record_to_json(r) for r in ordered])


def meanings_from_json_text(text: str, *, what: str = "meaning store") -> tuple[MeaningRecord, ...]:
    data = jsonio.loads(text, what=what)
    if not isinstance(data, list):
        raise MeaningStoreError(f"{what}: expected a JSON array of records")
    records = []
    seen: set[str] = set()
    for i, raw in enumerate(data):
        record = meaning_record_from_json(raw, where=f"{what}: record {i}")
        if record.sense in seen:
            raise MeaningStoreError(f"{what}: record {i}: duplicate sense {record.sense!r}")
        seen.add(record.sense)
        records.append(record)
    return tuple(records)


def save_meanings(records: Iterable[MeaningRecord], path: str) -> None:
    """Write the store atomically (single writer, readers never see partial files)."""
    text = meanings_to_json_text(records)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_meanings(path: str) -> tuple[MeaningRecord, ...]:
    with open(path, encoding="utf-8") as fh:
        return meanings_from_json_text(fh.read(), what=f"meaning store {path}")
