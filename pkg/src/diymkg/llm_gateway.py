"""Backend-agnostic chat-completion client.

Talks OpenAI-style ``/chat/completions`` JSON over HTTP, which covers both
hosted APIs and local model servers. A scripted mock backend is a first-class
option (``base_url`` starting with ``mock:``) so every downstream pipeline is
reproducible without a model.
"""

from __future__ import annotations

import json
import os
import re
import string
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import httpx

from .errors import (
    AuthError,
    ConfigError,
    MalformedOutput,
    RequestTimeout,
    TemplateError,
    TransportError,
)
from .prompts import DEFAULT_TEMPLATES, template_expects

EXPECT_SHAPES = ("free_text", "json_array", "json_object")

ENV_BASE_URL = "DIYMKG_LLM_BASE_URL"
ENV_MODEL = "DIYMKG_LLM_MODEL"
ENV_API_KEY = "DIYMKG_LLM_API_KEY"
ENV_SAFE_MODE = "DIYMKG_SAFE_MODE"


@dataclass(frozen=True)
class LlmBackendConfig:
    base_url: str
    model_name: str = "mock"
    api_key_env: str | None = None
    timeout: float = 60.0
    max_retries: int = 2

    def __post_init__(self):
        if self.timeout <= 0:
            raise ConfigError("timeout must be positive")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")
        if not self.base_url:
            raise ConfigError("base_url is required")

    @classmethod
    def from_env(cls) -> "LlmBackendConfig":
        return cls(
            base_url=os.environ.get(ENV_BASE_URL, "mock:"),
            model_name=os.environ.get(ENV_MODEL, "mock"),
            api_key_env=ENV_API_KEY if os.environ.get(ENV_API_KEY) else None,
        )


def safe_mode_from_env() -> bool:
    return os.environ.get(ENV_SAFE_MODE, "").strip().lower() in ("1", "true", "yes")


# --- prompt templates ---

@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    body: str
    expects: str = "free_text"
    description: str = ""

    def __post_init__(self):
        if self.expects not in EXPECT_SHAPES:
            raise ConfigError(f"unknown output shape {self.expects!r}")

    @property
    def placeholders(self) -> set[str]:
        names = set()
        for _, name, _, _ in string.Formatter().parse(self.body):
            if name:
                names.add(name.split(".")[0].split("[")[0])
        return names


class TemplateRegistry:
    """Templates keyed by id; defaults plus optional on-disk overrides."""

    def __init__(self):
        self._templates: dict[str, PromptTemplate] = {}
        for template_id, (expects, body) in DEFAULT_TEMPLATES.items():
            self.register(PromptTemplate(template_id, body, expects))

    def register(self, template: PromptTemplate) -> None:
        self._templates[template.template_id] = template

    def load_dir(self, prompts_dir: str | Path) -> None:
        for path in sorted(Path(prompts_dir).glob("*.txt")):
            template_id = path.stem
            self.register(PromptTemplate(
                template_id, path.read_text(encoding="utf-8"),
                template_expects(template_id),
            ))

    def get(self, template_id: str) -> PromptTemplate:
        template = self._templates.get(template_id)
        if template is None:
            raise TemplateError(f"no template {template_id!r}")
        return template

    def render(self, template_id: str, variables: dict[str, Any]) -> str:
        template = self.get(template_id)
        missing = sorted(template.placeholders - set(variables))
        if missing:
            raise TemplateError(
                f"template {template_id!r} missing variables: {', '.join(missing)}",
                missing=missing,
            )
        return template.body.format_map(_Permissive(variables))


class _Permissive(dict):
    def __missing__(self, key):
        # unreachable for declared placeholders; keeps odd format specs alive
        return "{" + key + "}"


# --- tasks ---

@dataclass
class LlmTask:
    template_id: str
    variables: dict[str, Any] = field(default_factory=dict)
    temperature: float = 0.0
    expects: str = "free_text"

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ConfigError("temperature must be in [0, 2]")
        if self.expects not in EXPECT_SHAPES:
            raise ConfigError(f"unknown output shape {self.expects!r}")


@dataclass
class StructuredResult:
    value: Any
    raw: str


# --- backends ---

class HttpBackend:
    """OpenAI-compatible chat-completions endpoint over HTTP(S)."""

    def __init__(self, config: LlmBackendConfig):
        self.config = config

    def send(self, prompt: str, *, temperature: float = 0.0,
             template_id: str = "", variables: dict | None = None) -> str:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key_env:
            key = os.environ.get(self.config.api_key_env, "")
            if not key:
                raise AuthError(
                    f"environment variable {self.config.api_key_env} is not set")
            headers["Authorization"] = f"Bearer {key}"
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": self.config.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": temperature,
        }
        try:
            response = httpx.post(url, json=payload, headers=headers,
                                  timeout=self.config.timeout)
        except httpx.TimeoutException as exc:
            raise RequestTimeout(str(exc)) from exc
        except httpx.HTTPError as exc:
            raise TransportError(str(exc)) from exc
        if response.status_code in (401, 403):
            raise AuthError(f"backend returned {response.status_code}")
        if response.status_code != 200:
            raise TransportError(f"backend returned {response.status_code}")
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise TransportError(f"unexpected response shape: {exc}") from exc


ScriptEntry = str | list | Callable[[dict], str] | Exception


class MockBackend:
    """Deterministic scripted backend keyed by template id.

    Script values may be a single response string, a list of responses
    (consumed in order, last one repeating), a callable taking the rendered
    variables, or an exception instance to raise (simulating transport
    failures).
    """

    def __init__(self, script: dict[str, ScriptEntry] | None = None):
        self.script = dict(script or {})
        self.calls: list[str] = []

    def send(self, prompt: str, *, temperature: float = 0.0,
             template_id: str = "", variables: dict | None = None) -> str:
        self.calls.append(template_id)
        entry = self.script.get(template_id)
        if entry is None:
            raise TransportError(f"mock has no script for {template_id!r}")
        if isinstance(entry, list):
            item = entry.pop(0) if len(entry) > 1 else entry[0]
        else:
            item = entry
        if isinstance(item, Exception):
            raise item
        if callable(item):
            return item(variables or {})
        return item


def backend_from_config(config: LlmBackendConfig):
    if config.base_url.startswith("mock:"):
        ref = config.base_url[len("mock:"):]
        if ref.startswith("//"):
            ref = ref[len("//"):]
        script: dict[str, ScriptEntry] = {}
        if ref:
            try:
                script = json.loads(Path(ref).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot load mock script {ref}: {exc}") from exc
        return MockBackend(script)
    return HttpBackend(config)


# --- gateway ---

_FENCE = re.compile(r"```[a-zA-Z0-9_-]*")


def extract_json(text: str, expects: str) -> Any:
    """Pull the first JSON value of the expected shape out of decorated text."""
    cleaned = _FENCE.sub("", text)
    opener = "[" if expects == "json_array" else "{"
    decoder = json.JSONDecoder()
    idx = cleaned.find(opener)
    while idx != -1:
        try:
            value, _ = decoder.raw_decode(cleaned, idx)
            return value
        except json.JSONDecodeError:
            idx = cleaned.find(opener, idx + 1)
    raise MalformedOutput(f"no parseable {expects} in model output")


class LlmGateway:
    """One object bundling templates, backend, and config for the pipelines."""

    def __init__(self, config: LlmBackendConfig,
                 registry: TemplateRegistry | None = None,
                 backend=None, backoff_base: float = 0.2):
        self.config = config
        self.registry = registry or TemplateRegistry()
        self.backend = backend if backend is not None else backend_from_config(config)
        self.backoff_base = backoff_base
        self.retry_log: list[str] = []

    def render(self, template_id: str, variables: dict[str, Any]) -> str:
        return self.registry.render(template_id, variables)

    def complete(self, task: LlmTask) -> str:
        prompt = self.render(task.template_id, task.variables)
        attempts = self.config.max_retries + 1
        last_exc: Exception | None = None
        for attempt in range(attempts):
            try:
                return self.backend.send(
                    prompt, temperature=task.temperature,
                    template_id=task.template_id, variables=task.variables,
                )
            except (TransportError, RequestTimeout) as exc:
                last_exc = exc
                self.retry_log.append(
                    f"{task.template_id}: attempt {attempt + 1} failed: {exc}")
                if attempt + 1 < attempts and self.backoff_base > 0:
                    time.sleep(self.backoff_base * (2 ** attempt))
        raise last_exc  # type: ignore[misc]

    def complete_structured(self, task: LlmTask) -> StructuredResult:
        if task.expects not in ("json_array", "json_object"):
            raise ConfigError("complete_structured needs a JSON output shape")
        attempts = self.config.max_retries + 1
        last_exc: Exception | None = None
        for attempt in range(attempts):
            raw = self.complete(task)
            try:
                value = extract_json(raw, task.expects)
            except MalformedOutput as exc:
                last_exc = exc
                self.retry_log.append(
                    f"{task.template_id}: unparseable output on attempt {attempt + 1}")
                continue
            if task.expects == "json_array" and not isinstance(value, list):
                last_exc = MalformedOutput("expected a JSON array")
                continue
            if task.expects == "json_object" and not isinstance(value, dict):
                last_exc = MalformedOutput("expected a JSON object")
                continue
            return StructuredResult(value=value, raw=raw)
        raise last_exc  # type: ignore[misc]
