#!/usr/bin/env python3
"""Generates src/unicode_tables.cpp: codepoint-range tables for the
character classes used by the cl100k/o200k pre-tokenization patterns
(Lu, Ll, Lt, Lm, Lo, M, N, whitespace). Ranges are probed through the
`regex` module so the C++ classifier agrees with reference_bpe.py by
construction. Do not edit the output by hand; rerun this script."""

import sys

import regex

CLASSES = [
    ("Lu", 1 << 0),
    ("Ll", 1 << 1),
    ("Lt", 1 << 2),
    ("Lm", 1 << 3),
    ("Lo", 1 << 4),
    ("M", 1 << 5),
    ("N", 1 << 6),
]
WS_FLAG = 1 << 7

MAX_CP = 0x110000


def main():
    if len(sys.argv) != 2:
        print("usage: gen_unicode_tables.py <out.cpp>", file=sys.stderr)
        return 2

    pats = [(regex.compile(rf"\p{{{name}}}"), flag) for name, flag in CLASSES]
    ws = regex.compile(r"\s")

    flags = bytearray(MAX_CP)
    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        ch = chr(cp)
        f = 0
        for pat, flag in pats:
            if pat.match(ch):
                f |= flag
        if ws.match(ch):
            f |= WS_FLAG
        flags[cp] = f

    runs = []
    start = 0
    for cp in range(1, MAX_CP + 1):
        cur = flags[cp] if cp < MAX_CP else -1
        if cur != flags[start]:
            if flags[start]:
                runs.append((start, cp - 1, flags[start]))
            start = cp

    with open(sys.argv[1], "w") as f:
        f.write("// Generated by scripts/gen_unicode_tables.py. Do not edit.\n")
        f.write('#include "semzip/unicode_tables.hpp"\n\n')
        f.write("namespace semzip::uni {\n\n")
        f.write(f"const CharRange kCharRanges[] = {{\n")
        for lo, hi, fl in runs:
            f.write(f"    {{0x{lo:X}, 0x{hi:X}, 0x{fl:02X}}},\n")
        f.write("};\n\n")
        f.write(f"const std::size_t kCharRangeCount = {len(runs)};\n\n")
        f.write("}  // namespace semzip::uni\n")
    print(f"wrote {len(runs)} ranges")
    return 0


if __name__ == "__main__":
    sys.exit(main())
