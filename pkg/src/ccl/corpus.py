"""Walk a repository work tree and lex its Java sources.

Files whose name or any path segment contains the exclude pattern
(case-insensitive substring, default "test") are dropped before any
analysis, mirroring the target-selection rule of the pipeline.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import lexer
from .lexer import Token


@dataclass(frozen=True)
class TokenizedFile:
    """A lexed source file: raw tokens plus their normalized symbols."""

    path: str               # repository-relative, "/" separated
    tokens: tuple[Token, ...]
    symbols: tuple[str, ...]
    loc: int                # physical line count


def is_excluded(rel_path: str, exclude_pattern: str) -> bool:
    if not exclude_pattern:
        return False
    needle = exclude_pattern.lower()
    return any(needle in part.lower() for part in Path(rel_path).parts)


def iter_java_files(repo_path: str, exclude_pattern: str = "test") -> list[str]:
    """Repository-relative paths of non-excluded .java files, sorted."""
    root = Path(repo_path)
    found = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = [d for d in dirnames if d != ".git"]
        for name in filenames:
            if not name.endswith(".java"):
                continue
            rel = os.path.relpath(os.path.join(dirpath, name), root)
            rel = rel.replace(os.sep, "/")
            if not is_excluded(rel, exclude_pattern):
                found.append(rel)
    found.sort()
    return found


def read_source(path: Path) -> str:
    data = path.read_bytes()
    return data.decode("utf-8", errors="replace")


def count_loc(text: str) -> int:
    if not text:
        return 0
    return text.count("\n") + (0 if text.endswith("\n") else 1)


def tokenize_file(path: str, text: str,
                  warnings: Optional[list[str]] = None) -> TokenizedFile:
    file_warnings: list[str] = []
    tokens = lexer.tokenize(text, file_warnings)
    if warnings is not None:
        warnings.extend(f"{path}: {w}" for w in file_warnings)
    return TokenizedFile(
        path=path,
        tokens=tuple(tokens),
        symbols=tuple(lexer.normalize(tokens)),
        loc=count_loc(text),
    )


def build_corpus(repo_path: str, exclude_pattern: str = "test",
                 warnings: Optional[list[str]] = None) -> dict[str, TokenizedFile]:
    """Lex every non-excluded Java file under ``repo_path``."""
    corpus: dict[str, TokenizedFile] = {}
    root = Path(repo_path)
    for rel in iter_java_files(repo_path, exclude_pattern):
        text = read_source(root / rel)
        corpus[rel] = tokenize_file(rel, text, warnings)
    return corpus


def file_locs(repo_path: str, exclude_pattern: str = "test") -> dict[str, int]:
    """Line counts of the non-excluded Java files (no lexing)."""
    root = Path(repo_path)
    return {
        rel: count_loc(read_source(root / rel))
        for rel in iter_java_files(repo_path, exclude_pattern)
    }
