#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Builds a synthetic corpus with planted clones, then times suffix array
construction, LCP, the repetition metric and a full detector pass under
each available backend.

    python benchmarks/bench_kernels.py --tokens 200000 --files 40
"""

from __future__ import annotations

import argparse
import random
import time

from ccl.clonedet import DetectorParams, _kernels
from ccl.clonedet.engine import _maximal_window_pairs, detect_clone_pairs
from ccl.corpus import TokenizedFile
from ccl.lexer import Token, TokenKind

try:
    from ccl.clonedet import _ckernels
    BACKENDS = [_ckernels, _kernels]
except ImportError:
    print("note: compiled kernels not built, benchmarking the fallback only")
    BACKENDS = [_kernels]


def synthetic_corpus(total_tokens: int, n_files: int, seed: int) -> dict[str, TokenizedFile]:
    rng = random.Random(seed)
    vocab = [f"sym{i}" for i in range(200)]
    per_file = total_tokens // n_files
    texts = [[rng.choice(vocab) for _ in range(per_file)] for _ in range(n_files)]
    for _ in range(n_files):  # plant 60..120-token clones
        src = rng.randrange(n_files)
        start = rng.randrange(max(1, len(texts[src]) - 130))
        block = texts[src][start:start + rng.randint(60, 120)]
        dst = rng.randrange(n_files)
        pos = rng.randrange(len(texts[dst]))
        texts[dst] = texts[dst][:pos] + block + texts[dst][pos:]
    corpus = {}
    for i, symbols in enumerate(texts):
        path = f"f{i:03d}.java"
        tokens = tuple(Token(TokenKind.IDENTIFIER, s, j + 1, 1)
                       for j, s in enumerate(symbols))
        corpus[path] = TokenizedFile(path, tokens, tuple(symbols), len(symbols))
    return corpus


def flat_sequence(corpus: dict[str, TokenizedFile]) -> list[int]:
    ids: dict[str, int] = {}
    seq: list[int] = []
    sentinel = 10 ** 6
    seq.append(sentinel)
    for path in sorted(corpus):
        seq.extend(ids.setdefault(s, len(ids)) for s in corpus[path].symbols)
        sentinel += 1
        seq.append(sentinel)
    return seq


def timed(label: str, fn, *args):
    started = time.perf_counter()
    result = fn(*args)
    print(f"    {label:<28} {time.perf_counter() - started:8.3f}s")
    return result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tokens", type=int, default=100_000)
    parser.add_argument("--files", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    corpus = synthetic_corpus(args.tokens, args.files, args.seed)
    seq = flat_sequence(corpus)
    rnr_probe = seq[1:4001]
    params = DetectorParams(min_token=50, min_rnr=0.0, min_tks=1)
    print(f"corpus: {len(corpus)} files, {sum(f.loc for f in corpus.values())} tokens")

    for backend in BACKENDS:
        print(f"backend: {backend.BACKEND}")
        sa = timed("suffix_array", backend.suffix_array, seq)
        timed("lcp_array", backend.lcp_array, seq, sa)
        timed("nonrepeat_count (4k window)", backend.nonrepeat_count, rnr_probe)

        # route the whole detector through this backend
        import ccl.clonedet.backend as selected
        saved = (selected.suffix_array, selected.lcp_array, selected.nonrepeat_count)
        selected.suffix_array = backend.suffix_array
        selected.lcp_array = backend.lcp_array
        selected.nonrepeat_count = backend.nonrepeat_count
        try:
            timed("maximal_window_pairs", _maximal_window_pairs, seq, params.min_token)
            pairs = timed("detect_clone_pairs", detect_clone_pairs, corpus, params)
        finally:
            (selected.suffix_array, selected.lcp_array,
             selected.nonrepeat_count) = saved
        print(f"    -> {len(pairs)} pairs")


if __name__ == "__main__":
    main()
