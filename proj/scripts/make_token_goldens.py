#!/usr/bin/env python3
"""Generates tests/data/token_goldens.tsv: reference token counts for the
conformance corpus under the bundled test vocabularies. Committed before
the production counter is built; the counter must agree exactly."""

import json
import sys

import reference_bpe as ref


def main():
    if len(sys.argv) != 4:
        print("usage: make_token_goldens.py <vocab-dir> <corpus.jsonl> <out.tsv>", file=sys.stderr)
        return 2
    vdir, corpus_path, out_path = sys.argv[1:]
    corpus = [json.loads(line) for line in open(corpus_path) if line.strip()]
    rows = []
    for name, pat in (("cl100k_test", "cl100k"), ("o200k_test", "o200k")):
        ranks = ref.load_ranks(f"{vdir}/{name}.tiktoken")
        for i, s in enumerate(corpus):
            rows.append(f"{name}\t{i}\t{ref.count_tokens(s, ranks, pat)}")
    with open(out_path, "w") as f:
        f.write("\n".join(rows) + "\n")
    print(f"wrote {len(rows)} golden counts to {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
