"""Optional Bearer token for ``/api/v1``.

The token lives in ``server.token``.  While it is empty the API is open.
"""

from __future__ import annotations

import hmac
from typing import Annotated

from fastapi import HTTPException, Security, status
from fastapi.security import HTTPAuthorizationCredentials, HTTPBearer

from app.core.config import section

_scheme = HTTPBearer(auto_error=False, description="server.token from config.yaml")


def configured_token() -> str:
    token = section("server").get("token", "")
    return token.strip() if isinstance(token, str) else ""


def token_matches(presented: str, expected: str) -> bool:
    return hmac.compare_digest(presented.encode("utf-8"), expected.encode("utf-8"))


async def verify_token(
    credentials: Annotated[HTTPAuthorizationCredentials | None, Security(_scheme)],
) -> None:
    """FastAPI dependency for every ``/api/v1`` route."""
    expected = configured_token()
    if not expected:
        return
    if credentials is None or not token_matches(credentials.credentials, expected):
        raise HTTPException(
            status.HTTP_401_UNAUTHORIZED,
            "missing or invalid token",
            headers={"WWW-Authenticate": "Bearer"},
        )
