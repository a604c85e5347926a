"""Shared fixtures: synthetic corpora and scripted git repositories."""

from __future__ import annotations

import random
import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for `oracles`

from ccl.corpus import TokenizedFile
from ccl.lexer import Token, TokenKind


def make_token_file(path: str, symbols: list[str],
                    tokens_per_line: int = 1,
                    raw_texts: list[str] | None = None) -> TokenizedFile:
    """Synthetic TokenizedFile; raw text defaults to the symbol itself."""
    raw = raw_texts if raw_texts is not None else symbols
    assert len(raw) == len(symbols)
    toks = []
    for i, text in enumerate(raw):
        line = i // tokens_per_line + 1
        col = i % tokens_per_line + 1
        toks.append(Token(TokenKind.IDENTIFIER, text, line, col))
    loc = toks[-1].line if toks else 0
    return TokenizedFile(path, tuple(toks), tuple(symbols), loc)


def random_corpus(rng: random.Random, max_files: int = 5,
                  max_tokens: int = 500, alphabet: int = 8,
                  plant: bool = True) -> dict[str, TokenizedFile]:
    """Random symbol corpus with planted clone blocks so that long matches
    actually occur; exercises type-2 via raw-text renamings."""
    letters = [chr(97 + i) for i in range(rng.randint(2, alphabet))]
    n_files = rng.randint(1, max_files)
    texts = [[rng.choice(letters) for _ in range(rng.randint(5, max_tokens))]
             for _ in range(n_files)]
    if plant:
        for _ in range(rng.randint(0, 3)):
            src = rng.randrange(n_files)
            if len(texts[src]) < 15:
                continue
            start = rng.randrange(len(texts[src]) - 14)
            limit = min(40, len(texts[src]) - start)
            block = texts[src][start:start + rng.randint(12, limit)]
            dst = rng.randrange(n_files)
            pos = rng.randint(0, len(texts[dst]))
            texts[dst] = texts[dst][:pos] + block + texts[dst][pos:]
    corpus = {}
    for i, symbols in enumerate(texts):
        # sometimes give tokens distinct raw spellings (type-2 material)
        if rng.random() < 0.4:
            suffix = rng.choice(["x", "y"])
            raw = [f"{s}{suffix}{rng.randrange(2)}" for s in symbols]
        else:
            raw = None
        path = f"f{i}.java"
        corpus[path] = make_token_file(
            path, symbols, tokens_per_line=rng.choice([1, 1, 3]), raw_texts=raw)
    return corpus


def git(repo: Path, *args: str, check: bool = True,
        date: str | None = None) -> subprocess.CompletedProcess:
    import os
    env = dict(os.environ)
    env.update({
        "GIT_AUTHOR_NAME": "Fixture", "GIT_AUTHOR_EMAIL": "fixture@example.com",
        "GIT_COMMITTER_NAME": "Fixture", "GIT_COMMITTER_EMAIL": "fixture@example.com",
        "GIT_PAGER": "cat", "LC_ALL": "C",
    })
    if date:
        env["GIT_AUTHOR_DATE"] = date
        env["GIT_COMMITTER_DATE"] = date
    return subprocess.run(["git", "-C", str(repo), *args],
                          check=check, capture_output=True, text=True, env=env)


def init_repo(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    subprocess.run(["git", "init", "-q", "-b", "main", str(path)],
                   check=True, capture_output=True)
    return path


def commit_all(repo: Path, message: str, date: str) -> str:
    git(repo, "add", "-A")
    git(repo, "commit", "-q", "-m", message, date=date)
    return git(repo, "rev-parse", "HEAD").stdout.strip()


# --- the six-commit twin-clone repository ---------------------------------

_BLOCK_V1 = [
    "a = b + c;",
    "d = e * f + g;",
    "mm = 0;",
    "h = i - j * k;",
    "l = (m + n) * o;",
    "e = f / g;",
    "s = t % u;",
    "v = w & x;",
    "y = z | a;",
    "b = c ^ d;",
    "e = f << g;",
    "h = i >> j;",
]

_FILE_A_HEAD = [
    "class TwinA {",
    "    void run() {",
    "        int q = 0;",
    "        if (q > 0) { q = 2; }",
]
_FILE_A_TAIL = [
    "    }",
    "}",
]
_FILE_B_HEAD = [
    "class TwinB {",
    "    void run() {",
    "        int q = 0;",
    "        q = q + 3;",
]
_FILE_B_TAIL = [
    "        q = 1;",
    "    }",
    "}",
]

BLOCK_START_LINE = 5                      # first block line in both files
BLOCK_END_LINE = BLOCK_START_LINE + len(_BLOCK_V1) - 1


def _write_twin(repo: Path, block_a: list[str], block_b: list[str]) -> None:
    indent = "        "
    a = _FILE_A_HEAD + [indent + line for line in block_a] + _FILE_A_TAIL
    b = _FILE_B_HEAD + [indent + line for line in block_b] + _FILE_B_TAIL
    (repo / "TwinA.java").write_text("\n".join(a) + "\n", encoding="utf-8")
    (repo / "TwinB.java").write_text("\n".join(b) + "\n", encoding="utf-8")


def _edit(block: list[str], old: str, new: str) -> list[str]:
    out = [new if line == old else line for line in block]
    assert out != block or old == new, f"{old!r} not found"
    return out


def build_twin_repo(path: Path) -> dict:
    """Two files with one identical block; six commits:

    c1 introduce both, c2 co-change identically, c3 touch only B,
    c4 co-change divergently with token-disjoint patches, c5 touch only B
    (restoring it to A's content), c6 co-change identically.
    """
    repo = init_repo(path)
    hashes = {}

    block_a = list(_BLOCK_V1)
    block_b = list(_BLOCK_V1)
    _write_twin(repo, block_a, block_b)
    hashes["c1"] = commit_all(repo, "introduce twin blocks", "2020-01-01T12:00:00 +0000")

    block_a = _edit(block_a, "s = t % u;", "s = u % t;")
    block_b = _edit(block_b, "s = t % u;", "s = u % t;")
    _write_twin(repo, block_a, block_b)
    hashes["c2"] = commit_all(repo, "co-change identically", "2020-01-02T12:00:00 +0000")

    block_b = _edit(block_b, "mm = 0;", "m = 0;")
    _write_twin(repo, block_a, block_b)
    hashes["c3"] = commit_all(repo, "touch only B", "2020-01-03T12:00:00 +0000")

    block_a = _edit(block_a, "e = f / g;", "e = f / vv;")
    block_b = _edit(block_b, "e = f / g;", "e = f / ww;")
    _write_twin(repo, block_a, block_b)
    hashes["c4"] = commit_all(repo, "co-change divergently", "2020-01-04T12:00:00 +0000")

    block_b = _edit(block_b, "m = 0;", "mm = 0;")
    block_b = _edit(block_b, "e = f / ww;", "e = f / vv;")
    _write_twin(repo, block_a, block_b)
    hashes["c5"] = commit_all(repo, "restore B to match A", "2020-01-05T12:00:00 +0000")

    block_a = _edit(block_a, "h = i >> j;", "h = j >> i;")
    block_b = _edit(block_b, "h = i >> j;", "h = j >> i;")
    _write_twin(repo, block_a, block_b)
    hashes["c6"] = commit_all(repo, "co-change identically again", "2020-01-06T12:00:00 +0000")

    assert block_a == block_b
    return {"path": repo, "hashes": hashes}


@pytest.fixture(scope="session")
def twin_repo(tmp_path_factory) -> dict:
    return build_twin_repo(tmp_path_factory.mktemp("twin") / "repo")
