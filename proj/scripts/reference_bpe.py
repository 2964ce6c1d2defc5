#!/usr/bin/env python3
"""Reference byte-pair-encoding token counter.

Independent oracle for the C++ counter: loads a .tiktoken rank file
(base64 byte-sequence + rank per line), pre-tokenizes with the named
pattern, and applies lowest-rank-first pair merging within each
pre-token. Counts must agree with the production counter exactly.
"""

import base64
import sys

import regex

CL100K_PATTERN = (
    r"""'(?i:[sdmt]|ll|ve|re)"""
    r"""|[^\r\n\p{L}\p{N}]?+\p{L}+"""
    r"""|\p{N}{1,3}"""
    r"""| ?[^\s\p{L}\p{N}]++[\r\n]*"""
    r"""|\s*[\r\n]+"""
    r"""|\s+(?!\S)"""
    r"""|\s+"""
)

O200K_PATTERN = "|".join(
    [
        r"""[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]*[\p{Ll}\p{Lm}\p{Lo}\p{M}]+(?i:'s|'t|'re|'ve|'m|'ll|'d)?""",
        r"""[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]+[\p{Ll}\p{Lm}\p{Lo}\p{M}]*(?i:'s|'t|'re|'ve|'m|'ll|'d)?""",
        r"""\p{N}{1,3}""",
        r""" ?[^\s\p{L}\p{N}]+[\r\n/]*""",
        r"""\s*[\r\n]+""",
        r"""\s+(?!\S)""",
        r"""\s+""",
    ]
)

PATTERNS = {"cl100k": CL100K_PATTERN, "o200k": O200K_PATTERN}


def load_ranks(path):
    ranks = {}
    with open(path, "rb") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            tok_b64, rank_str = line.split()
            ranks[base64.b64decode(tok_b64)] = int(rank_str)
    return ranks


def pretokenize(text, pattern_name):
    pat = regex.compile(PATTERNS[pattern_name])
    return [m.group(0) for m in pat.finditer(text)]


def bpe_count_piece(piece, ranks):
    if piece in ranks:
        return 1
    parts = [piece[i : i + 1] for i in range(len(piece))]
    while len(parts) > 1:
        best_rank = None
        best_i = None
        for i in range(len(parts) - 1):
            r = ranks.get(parts[i] + parts[i + 1])
            if r is not None and (best_rank is None or r < best_rank):
                best_rank = r
                best_i = i
        if best_i is None:
            break
        parts[best_i : best_i + 2] = [parts[best_i] + parts[best_i + 1]]
    return len(parts)


def count_tokens(text, ranks, pattern_name):
    total = 0
    for piece in pretokenize(text, pattern_name):
        total += bpe_count_piece(piece.encode("utf-8"), ranks)
    return total


def main():
    if len(sys.argv) != 3:
        print("usage: reference_bpe.py <rank-file> <cl100k|o200k>  (text on stdin)", file=sys.stderr)
        return 2
    ranks = load_ranks(sys.argv[1])
    text = sys.stdin.read()
    print(count_tokens(text, ranks, sys.argv[2]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
