"""OpenAI-compatible chat-completions client with retries and usage counts."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

import httpx

from .errors import PermanentGatewayError, TransientGatewayError

ENV_API_BASE = "RDGAI_API_BASE"
ENV_MODEL = "RDGAI_MODEL"
ENV_API_KEY = "RDGAI_API_KEY"

# Patched in tests so retry backoff does not slow the suite down.
_sleep = time.sleep


@dataclass
class ModelConfig:
    endpoint_url: str = ""
    model_name: str = ""
    api_key: str = ""
    temperature: float = 0.0
    max_output_tokens: int = 4096
    timeout: float = 120.0
    max_retries: int = 3


@dataclass
class CompletionResult:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    cached: bool = False


def load_config(environ=None, **overrides) -> ModelConfig:
    """Config from RDGAI_* environment variables; keyword overrides win.
    A missing API key is reported at call time, not here, so offline
    subcommands keep working."""
    env = os.environ if environ is None else environ
    config = ModelConfig(
        endpoint_url=env.get(ENV_API_BASE, ""),
        model_name=env.get(ENV_MODEL, ""),
        api_key=env.get(ENV_API_KEY, ""),
    )
    mapping = {
        "api_base": "endpoint_url",
        "model": "model_name",
        "api_key": "api_key",
        "temperature": "temperature",
        "max_output_tokens": "max_output_tokens",
        "timeout": "timeout",
        "max_retries": "max_retries",
    }
    for key, attr in mapping.items():
        value = overrides.get(key)
        if value is not None:
            setattr(config, attr, value)
    return config


def _extract(data: dict) -> CompletionResult:
    try:
        text = data["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise PermanentGatewayError("provider response lacks a message text")
    if not isinstance(text, str):
        raise PermanentGatewayError("provider response lacks a message text")
    usage = data.get("usage") or {}
    details = usage.get("prompt_tokens_details") or {}
    return CompletionResult(
        text=text,
        prompt_tokens=int(usage.get("prompt_tokens") or 0),
        completion_tokens=int(usage.get("completion_tokens") or 0),
        cached=int(details.get("cached_tokens") or 0) > 0,
    )


def complete(config: ModelConfig, system_text: str, user_text: str) -> CompletionResult:
    """One chat completion: system message = stable prefix, user message =
    unit query. 429/5xx/timeouts are retried with 1s, 2s, 4s... backoff."""
    if not config.api_key:
        raise PermanentGatewayError(f"missing API key ({ENV_API_KEY})")
    if not config.endpoint_url:
        raise PermanentGatewayError(f"missing endpoint URL ({ENV_API_BASE})")
    if not config.model_name:
        raise PermanentGatewayError(f"missing model name ({ENV_MODEL})")
    url = config.endpoint_url.rstrip("/") + "/chat/completions"
    payload = {
        "model": config.model_name,
        "messages": [
            {"role": "system", "content": system_text},
            {"role": "user", "content": user_text},
        ],
        "temperature": config.temperature,
        "max_tokens": config.max_output_tokens,
    }
    headers = {"Authorization": f"Bearer {config.api_key}"}
    last_failure = "no attempt made"
    for attempt in range(config.max_retries + 1):
        if attempt:
            _sleep(2 ** (attempt - 1))
        try:
            response = httpx.post(url, json=payload, headers=headers, timeout=config.timeout)
        except httpx.HTTPError as exc:
            last_failure = f"network failure: {exc}"
            continue
        if response.status_code == 429 or response.status_code >= 500:
            last_failure = f"HTTP {response.status_code}: {response.text[:200]}"
            continue
        if response.status_code >= 400:
            raise PermanentGatewayError(f"HTTP {response.status_code}: {response.text[:200]}")
        try:
            data = response.json()
        except ValueError:
            raise PermanentGatewayError("provider response is not JSON")
        return _extract(data)
    raise TransientGatewayError(f"retries exhausted; last failure: {last_failure}")
