"""Masked-completion elicitation of draft meaning records and assertions.

A sentence frame with a [MASK] slot ("The game was very [MASK].") is rendered
for a subject and sent to a completion provider, which returns ranked
plausible fillers.  Rank r of n becomes weight (n - r + 1) / n, completions
are deduplicated keeping their first rank, and every kept token also yields a
sensible assertion so elicited vocabularies can feed hierarchy induction.

Providers are opaque: prompt text and a count go in, an ordered token list
comes out.  The shipped mock provider answers from a fixture file; the remote
provider speaks a single-exchange JSON protocol over HTTP.
"""

from __future__ import annotations

import importlib.resources
import os
from dataclasses import dataclass, field
from typing import Mapping, Protocol, Sequence

import requests

from . import jsonio
from .corpus import AGENT, OBJECT, Assertion, AssertionSet, ConceptId, PropertyKey, SENSIBLE
from .errors import ElicitationError, InputDataError, ProviderError, TemplateError
from .semantics import MeaningRecord, PrimitiveRelation, WeightedProperty, resolve_relation

_FIXTURE_RESOURCE = "masked_completions.json"


@dataclass(frozen=True)
class PromptTemplate:
    """A sentence frame with one {X} subject slot and one [MASK] slot."""

    dimension: PrimitiveRelation
    pattern: str

    def __post_init__(self) -> None:
        if self.pattern.count("{X}") != 1:
            raise TemplateError(
                f"template for {self.dimension.value} must contain exactly one "
                f"'{{X}}' slot: {self.pattern!r}"
            )
        if self.pattern.count("[MASK]") != 1:
            raise TemplateError(
                f"template for {self.dimension.value} must contain exactly one "
                f"'[MASK]' token: {self.pattern!r}"
            )


def render(template: PromptTemplate, subject: str | ConceptId) -> str:
    """Fill the subject slot with the surface form; [MASK] stays verbatim."""
    if isinstance(subject, str):
        subject = ConceptId(subject)
    return template.pattern.replace("{X}", subject.base)


def _templates(*pairs: tuple[PrimitiveRelation, str]) -> dict[PrimitiveRelation, PromptTemplate]:
    return {dim: PromptTemplate(dim, pattern) for dim, pattern in pairs}


#: Generic frames usable for any subject.
DEFAULT_TEMPLATES: dict[PrimitiveRelation, PromptTemplate] = _templates(
    (PrimitiveRelation.OBJECT_OF, "John has [MASK] the {X}."),
    (PrimitiveRelation.AGENT_OF, "The {X} [MASK] everyone."),
    (PrimitiveRelation.HAS_PROP, "The {X} was very [MASK]."),
)

#: The frames the shipped book fixture was collected with; they hard-code
#: their surrounding context, so use them only to reproduce that fixture.
BOOK_FIXTURE_TEMPLATES: dict[PrimitiveRelation, PromptTemplate] = _templates(
    (PrimitiveRelation.AGENT_OF, "The {X} has [MASK] millions of people"),
    (PrimitiveRelation.OBJECT_OF, "Jon has [MASK] the {X}"),
    (PrimitiveRelation.HAS_PROP, "Das Kapital was a very [MASK] {X}"),
)

TEMPLATE_SETS: dict[str, dict[PrimitiveRelation, PromptTemplate]] = {
    "default": DEFAULT_TEMPLATES,
    "book-fixture": BOOK_FIXTURE_TEMPLATES,
}


def rank_to_weight(rank: int, n: int) -> float:
    """Linear rank weighting: rank 1 of n maps to 1.0, rank n to 1/n."""
    if n < 1:
        raise InputDataError(f"completion list length must be >= 1, got {n}")
    if not 1 <= rank <= n:
        raise InputDataError(f"rank {rank} out of range 1..{n}")
    return (n - rank + 1) / n


@dataclass(frozen=True)
class CompletionList:
    """Ranked completions for one subject and dimension, deduplicated.

    original_ranks keeps each surviving token's 1-based rank in the raw
    provider output and total is the raw output length, so weights computed
    from original ranks still decrease strictly after deduplication.
    """

    subject: str
    dimension: PrimitiveRelation
    completions: tuple[str, ...]
    original_ranks: tuple[int, ...]
    total: int

    def __post_init__(self) -> None:
        if not self.completions:
            raise InputDataError("completion list must not be empty")
        if len(self.completions) != len(set(self.completions)):
            raise InputDataError("completion list must be deduplicated")
        if len(self.original_ranks) != len(self.completions):
            raise InputDataError("original_ranks must parallel completions")

    @classmethod
    def from_raw(
        cls, subject: str, dimension: PrimitiveRelation, raw: Sequence[str]
    ) -> "CompletionList":
        seen: set[str] = set()
        tokens: list[str] = []
        ranks: list[int] = []
        for rank, token in enumerate(raw, start=1):
            if token in seen:
                continue
            seen.add(token)
            tokens.append(token)
            ranks.append(rank)
        return cls(
            subject=subject,
            dimension=dimension,
            completions=tuple(tokens),
            original_ranks=tuple(ranks),
            total=len(raw),
        )

    def weighted(self) -> tuple[WeightedProperty, ...]:
        return tuple(
            (rank_to_weight(rank, self.total), token)
            for rank, token in zip(self.original_ranks, self.completions)
        )


class CompletionProvider(Protocol):
    def complete(self, prompt: str, n: int) -> list[str]:
        """Return up to n ranked completions for the [MASK] in prompt."""
        ...


class MockProvider:
    """Deterministic provider answering from a (subject, dimension) fixture.

    The fixture maps subjects to dimensions to ordered token lists; prompts
    are matched by pre-rendering every fixture entry through the given
    template sets, so the provider still only sees prompt text at call time.
    """

    def __init__(
        self,
        fixture: Mapping[str, Mapping[str, Sequence[str]]],
        template_sets: Sequence[Mapping[PrimitiveRelation, PromptTemplate]] = (
            DEFAULT_TEMPLATES,
            BOOK_FIXTURE_TEMPLATES,
        ),
    ) -> None:
        prompts: dict[str, tuple[str, ...]] = {}
        for subject in sorted(fixture):
            per_dim = fixture[subject]
            for dim_name in sorted(per_dim):
                dimension = resolve_relation(dim_name)
                tokens = tuple(str(t) for t in per_dim[dim_name])
                for templates in template_sets:
                    template = templates.get(dimension)
                    if template is None:
                        continue
                    prompt = render(template, subject)
                    existing = prompts.get(prompt)
                    if existing is not None and existing != tokens:
                        raise InputDataError(
                            f"fixture renders two different completion lists "
                            f"for prompt {prompt!r}"
                        )
                    prompts[prompt] = tokens
        self._prompts = prompts

    @classmethod
    def from_file(cls, path: str | None = None, **kwargs) -> "MockProvider":
        if path is None:
            text = (
                importlib.resources.files("sensekit.data")
                .joinpath(_FIXTURE_RESOURCE)
                .read_text(encoding="utf-8")
            )
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        data = jsonio.loads(text, what="completion fixture")
        if not isinstance(data, dict):
            raise InputDataError("completion fixture must map subjects to dimensions")
        return cls(data, **kwargs)

    def complete(self, prompt: str, n: int) -> list[str]:
        if n < 1:
            raise ProviderError(f"completion count must be >= 1, got {n}")
        tokens = self._prompts.get(prompt)
        if tokens is None:
            raise ProviderError(f"mock provider has no completions for prompt {prompt!r}")
        return list(tokens[:n])


class RemoteProvider:
    """HTTP provider: POST {"prompt", "n"}, receive {"completions": [...]}.

    The bearer token is read from the environment variable named by
    auth_env (never from config files).  A request is retried up to
    `retries` additional times; exhausting the budget raises ProviderError.
    """

    def __init__(
        self,
        endpoint: str,
        auth_env: str = "SENSEKIT_PROVIDER_TOKEN",
        timeout: float = 10.0,
        retries: int = 2,
        session: object | None = None,
    ) -> None:
        if not endpoint:
            raise ProviderError("remote provider needs an endpoint URL")
        self.endpoint = endpoint
        self.auth_env = auth_env
        self.timeout = float(timeout)
        self.retries = int(retries)
        self._session = session if session is not None else requests

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.auth_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def complete(self, prompt: str, n: int) -> list[str]:
        last_error = "no attempt made"
        for _ in range(self.retries + 1):
            try:
                response = self._session.post(
                    self.endpoint,
                    json={"prompt": prompt, "n": n},
                    headers=self._headers(),
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                last_error = f"request failed: {exc}"
                continue
            status = getattr(response, "status_code", 0)
            if not 200 <= status < 300:
                last_error = f"provider returned HTTP {status}"
                continue
            try:
                body = response.json()
            except ValueError:
                last_error = "provider response is not JSON"
                continue
            completions = body.get("completions") if isinstance(body, dict) else None
            if not isinstance(completions, list) or not all(
                isinstance(t, str) for t in completions
            ):
                last_error = "provider response lacks a 'completions' string list"
                continue
            return completions[:n]
        raise ProviderError(
            f"remote provider at {self.endpoint} failed after "
            f"{self.retries + 1} attempt(s): {last_error}"
        )


_DIM_POSITION = {
    PrimitiveRelation.AGENT_OF: AGENT,
    PrimitiveRelation.OBJECT_OF: OBJECT,
}


def _assertion_property(token: str, dimension: PrimitiveRelation) -> PropertyKey | None:
    name = token.strip().upper().replace(" ", "-")
    position = _DIM_POSITION.get(dimension)
    try:
        if position is None:
            return PropertyKey(name)
        return PropertyKey(name, arity=2, position=position)
    except ValueError:
        return None


@dataclass(frozen=True)
class ElicitResult:
    record: MeaningRecord
    assertions: AssertionSet
    failures: Mapping[PrimitiveRelation, str] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()


def elicit(
    provider: CompletionProvider,
    subject: str,
    dims: Sequence[PrimitiveRelation],
    n: int,
    templates: Mapping[PrimitiveRelation, PromptTemplate] | None = None,
) -> ElicitResult:
    """Build a draft meaning record and draft assertions for one subject.

    Dimensions are processed in declaration order; a provider failure on one
    dimension is recorded in failures and does not discard the others.  Only
    when every dimension fails is ElicitationError raised.
    """
    if templates is None:
        templates = DEFAULT_TEMPLATES
    if n < 1:
        raise InputDataError(f"completion count must be >= 1, got {n}")
    if not dims:
        raise InputDataError("at least one dimension is required")
    missing = [d.value for d in dims if d not in templates]
    if missing:
        raise TemplateError(f"no template for dimension(s): {', '.join(missing)}")
    concept = ConceptId(subject)

    entries: dict[PrimitiveRelation, tuple[WeightedProperty, ...]] = {}
    assertions: list[Assertion] = []
    failures: dict[PrimitiveRelation, str] = {}
    warnings: list[str] = []
    for dimension in dims:
        prompt = render(templates[dimension], concept)
        try:
            raw = provider.complete(prompt, n)
        except ProviderError as exc:
            failures[dimension] = str(exc)
            continue
        raw = [str(t) for t in raw[:n]]
        if not raw:
            failures[dimension] = "provider returned no completions"
            continue
        completion_list = CompletionList.from_raw(concept.name, dimension, raw)
        entries[dimension] = completion_list.weighted()
        for token in completion_list.completions:
            prop = _assertion_property(token, dimension)
            if prop is None:
                warnings.append(
                    f"{dimension.value}: completion {token!r} is not a usable "
                    "property token; no assertion recorded"
                )
                continue
            assertions.append(Assertion(prop, concept, SENSIBLE))
    if not entries:
        detail = "; ".join(f"{d.value}: {msg}" for d, msg in failures.items())
        raise ElicitationError(f"all dimensions failed: {detail}")

    record = MeaningRecord(sense=concept.name, gloss="", dims=entries)
    return ElicitResult(
        record=record,
        assertions=AssertionSet(tuple(assertions)),
        failures=failures,
        warnings=tuple(warnings),
    )
