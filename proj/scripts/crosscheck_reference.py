#!/usr/bin/env python3
"""Cross-validates reference_bpe.py against js-tiktoken on the real
cl100k_base / o200k_base vocabularies (dumped by dump_real_ranks.cjs).
Run before regenerating goldens; must report 100/100 agreement."""

import json
import sys

import reference_bpe as ref


def main():
    if len(sys.argv) != 3:
        print("usage: crosscheck_reference.py <realvocab-dir> <corpus.jsonl>", file=sys.stderr)
        return 2
    vdir, corpus_path = sys.argv[1], sys.argv[2]
    corpus = [json.loads(line) for line in open(corpus_path) if line.strip()]

    expected = {}
    for line in open(f"{vdir}/real_counts.tsv"):
        name, idx, cnt = line.split()
        expected[(name, int(idx))] = int(cnt)

    ok = bad = 0
    for name, pat in (("cl100k_base", "cl100k"), ("o200k_base", "o200k")):
        ranks = ref.load_ranks(f"{vdir}/{name}.tiktoken")
        for i, s in enumerate(corpus):
            got = ref.count_tokens(s, ranks, pat)
            want = expected[(name, i)]
            if got == want:
                ok += 1
            else:
                bad += 1
                print(f"MISMATCH {name} #{i}: ref={got} js={want} text={s!r}")
    print(f"agreement: {ok}/{ok + bad}")
    return 0 if bad == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
