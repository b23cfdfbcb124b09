"""Chat-completions gateway: HTTP backend with retries, plus a hermetic mock.

Wire shape is the standard chat-completions JSON: POST with
{"model", "messages", "temperature", "max_tokens"}; the assistant text is
read from choices[0].message.content.
"""

import hashlib
import logging
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import requests

from . import mockdata, prompts
from .errors import (
    AuthError,
    ConfigError,
    ProtocolError,
    RateLimited,
    TransportError,
    UnclassifiableRequest,
)

log = logging.getLogger(__name__)

ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"bad role: {self.role!r}")
        if not self.content:
            raise ValueError("message content must be non-empty")


@dataclass(frozen=True)
class ChatRequest:
    messages: tuple
    model_name: str = "gpt-3.5-turbo"
    temperature: float = 1.0
    max_output_tokens: int = 2048

    def __post_init__(self):
        if not self.messages:
            raise ValueError("request needs at least one message")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    def first_content(self, role: str):
        for message in self.messages:
            if message.role == role:
                return message.content
        return None


@dataclass
class BackendConfig:
    endpoint_url: str = "https://api.openai.com/v1/chat/completions"
    api_key_source: str = "LLM_API_KEY"
    max_in_flight: int = 4
    max_retries: int = 3
    backoff_base: float = 1.0  # seconds
    timeout: float = 60.0

    def __post_init__(self):
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


class HttpBackend:
    """Real chat-completions endpoint with exponential-backoff retries."""

    def __init__(self, config: BackendConfig, session=None):
        self.config = config
        api_key = os.environ.get(config.api_key_source)
        if not api_key:
            raise ConfigError(
                f"environment variable {config.api_key_source} is not set"
            )
        self._session = session or requests.Session()
        self._headers = {
            "Authorization": f"Bearer {api_key}",
            "Content-Type": "application/json",
        }

    def complete(self, request: ChatRequest) -> str:
        body = {
            "model": request.model_name,
            "messages": [
                {"role": m.role, "content": m.content} for m in request.messages
            ],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        last_error = None
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                delay = self.config.backoff_base * (2 ** (attempt - 1))
                if isinstance(last_error, RateLimited) and last_error.retry_after:
                    delay = max(delay, last_error.retry_after)
                log.debug("retrying after %.1fs (attempt %d)", delay, attempt + 1)
                time.sleep(delay)
            try:
                return self._post(body)
            except (AuthError, ProtocolError):
                raise
            except TransportError as exc:
                last_error = exc
        raise last_error

    def _post(self, body) -> str:
        try:
            response = self._session.post(
                self.config.endpoint_url,
                json=body,
                headers=self._headers,
                timeout=self.config.timeout,
            )
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc
        if response.status_code in (401, 403):
            raise AuthError(f"authentication rejected ({response.status_code})")
        if response.status_code == 429:
            retry_after = response.headers.get("Retry-After")
            raise RateLimited(
                "rate limited",
                retry_after=float(retry_after) if retry_after else None,
            )
        if response.status_code >= 500:
            raise TransportError(f"server error {response.status_code}")
        if response.status_code != 200:
            raise ProtocolError(
                f"unexpected status {response.status_code}: {response.text[:200]}"
            )
        try:
            payload = response.json()
            return payload["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(f"malformed response body: {exc}") from exc


class MockBackend:
    """Deterministic offline backend emulating the three generation stages.

    Classifies each request by matching its system message against the
    configured templates, then answers from bundled word lists, repetitive
    sentence templates, and a toy word-by-word lexicon. Identical
    (request, mock_seed) always yields identical bytes.
    """

    def __init__(self, templates: prompts.PromptTemplateSet = None, mock_seed: int = 0):
        self.templates = templates or prompts.PromptTemplateSet.defaults()
        self.mock_seed = mock_seed

    def _rng(self, request: ChatRequest) -> random.Random:
        digest = hashlib.sha256()
        digest.update(str(self.mock_seed).encode())
        for message in request.messages:
            digest.update(message.role.encode())
            digest.update(b"\x00")
            digest.update(message.content.encode())
            digest.update(b"\x00")
        return random.Random(int.from_bytes(digest.digest()[:8], "big"))

    def complete(self, request: ChatRequest) -> str:
        system_text = request.first_content("system")
        if system_text is None:
            raise UnclassifiableRequest("request has no system message")
        stage, n = prompts.classify_system_text(self.templates, system_text)
        if stage is None:
            raise UnclassifiableRequest(
                f"system message matches no stage template: {system_text[:80]!r}"
            )
        user_text = request.first_content("user")
        if stage == prompts.STAGE_SEED_NOUNS:
            return self._seed_list(request, mockdata.NOUNS, n or 10)
        if stage == prompts.STAGE_SEED_VERBS:
            return self._seed_list(request, mockdata.VERBS, n or 10)
        if stage == prompts.STAGE_SENTENCES:
            if user_text is None:
                raise UnclassifiableRequest("sentence request has no user message")
            return self._sentences(user_text, n or len(mockdata.SENTENCE_TEMPLATES))
        if user_text is None:
            raise UnclassifiableRequest("translation request has no user message")
        return mockdata.translate_sentence(user_text)

    def _seed_list(self, request, pool, n) -> str:
        rng = self._rng(request)
        picked = rng.sample(pool, min(n, len(pool)))
        return ", ".join(picked)

    def _sentences(self, seed: str, n: int) -> str:
        templates = mockdata.SENTENCE_TEMPLATES
        rendered = [templates[i % len(templates)].format(seed=seed) for i in range(n)]
        return ";".join(rendered) + ";"


class Gateway:
    """Bounded-concurrency front door over a backend."""

    def __init__(self, backend, max_in_flight: int = 4):
        self.backend = backend
        self.max_in_flight = max_in_flight

    def complete(self, request: ChatRequest) -> str:
        return self.backend.complete(request)

    def complete_batch(self, requests_):
        """Run requests with at most max_in_flight outstanding.

        Returns [(index, result_or_exception), ...] in input order; per-item
        failures do not abort the batch.
        """
        requests_ = list(requests_)
        results = [None] * len(requests_)

        def run(i):
            try:
                return i, self.backend.complete(requests_[i])
            except Exception as exc:
                return i, exc

        if not requests_:
            return []
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            for i, outcome in pool.map(run, range(len(requests_))):
                results[i] = (i, outcome)
        return results


def make_backend(backend_name: str, config: BackendConfig = None,
                 templates=None, mock_seed: int = 0):
    if backend_name == "mock":
        return MockBackend(templates=templates, mock_seed=mock_seed)
    if backend_name == "http":
        return HttpBackend(config or BackendConfig())
    raise ConfigError(f"unknown backend: {backend_name!r}")
