"""Per-trial transcript files.

JSON Lines: a header line with the game parameters, the secret (when the
codemaker committed to one) and the winning index, then one line per query
with its index, guess text, answer and phase label.  Every line is written with
a fixed key order and no padding, so equal games give equal bytes.  Memory
states are not written; they are recomputable by replaying the strategy.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from app.core.errors import ArgumentError
from app.core.game import GameParams, code_from_text, code_to_text
from app.core.harness import GameTranscript, QueryRecord

_log = logging.getLogger(__name__)

FORMAT_VERSION = 2


def _line(data: dict[str, Any]) -> str:
    return json.dumps(data, separators=(",", ":"), ensure_ascii=True)


def transcript_filename(transcript: GameTranscript, trial: int) -> str:
    p = transcript.params
    return f"{transcript.strategy_name}_{transcript.codemaker_name}_n{p.n}_k{p.k}_t{trial:04d}.jsonl"


def transcript_lines(transcript: GameTranscript) -> list[str]:
    """Header line followed by one line per query, without newlines."""
    k = transcript.params.k
    header = {
        "version": FORMAT_VERSION,
        "n": transcript.params.n,
        "k": k,
        "mu": transcript.mu,
        "seed": transcript.seed,
        "strategy": transcript.strategy_name,
        "codemaker": transcript.codemaker_name,
        "secret": None if transcript.secret is None else code_to_text(transcript.secret, k),
        "winning_index": transcript.winning_index,
    }
    lines = [_line(header)]
    for index, q in enumerate(transcript.queries):
        lines.append(
            _line(
                {"index": index, "guess": code_to_text(q.guess, k), "black": q.black, "phase": q.phase}
            )
        )
    return lines


def transcript_from_lines(lines: Iterable[str]) -> GameTranscript:
    rows = [line for line in lines if line.strip()]
    if not rows:
        raise ArgumentError("empty transcript")
    try:
        records = [json.loads(row) for row in rows]
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"malformed transcript line: {exc}") from exc
    if not all(isinstance(r, dict) for r in records):
        raise ArgumentError("every transcript line must be a JSON object")
    header, queries = records[0], records[1:]
    try:
        params = GameParams(int(header["n"]), int(header["k"]))
        transcript = GameTranscript(
            params=params,
            mu=int(header["mu"]),
            seed=int(header["seed"]),
            strategy_name=str(header["strategy"]),
            codemaker_name=str(header["codemaker"]),
            winning_index=header.get("winning_index"),
        )
        secret = header.get("secret")
        if secret is not None:
            transcript.secret = code_from_text(secret, params)
        for expected, q in enumerate(queries):
            if int(q["index"]) != expected:
                raise ArgumentError(f"query line {q['index']} out of order, expected {expected}")
            transcript.queries.append(
                QueryRecord(code_from_text(q["guess"], params), int(q["black"]), str(q["phase"]))
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ArgumentError(f"malformed transcript: {exc}") from exc
    return transcript


def write_transcript(transcript: GameTranscript, directory: Path, trial: int) -> Path:
    """Atomic write via temp-file + rename; returns the final path."""
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / transcript_filename(transcript, trial)
    fd, tmp = tempfile.mkstemp(suffix=".tmp", prefix="game_", dir=str(directory))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            for line in transcript_lines(transcript):
                f.write(line + "\n")
        os.replace(tmp, str(target))
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    _log.debug("transcript written: %s", target)
    return target


def read_transcript(path: Path) -> GameTranscript:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return transcript_from_lines(f)
    except ArgumentError as exc:
        raise ArgumentError(f"{path} is not a transcript file: {exc}") from exc
