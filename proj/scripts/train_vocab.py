#!/usr/bin/env python3
"""Trains the bundled test-scale BPE vocabularies.

The real cl100k_base / o200k_base rank files are user-supplied inputs
(size and licensing); the repository ships two small vocabularies in the
same .tiktoken format, trained with the matching pre-tokenization
patterns, so the counter and the evaluation pipeline run self-contained.

Deterministic: fixed corpus, lowest-frequency ties broken by pair bytes.
"""

import base64
import sys
from collections import Counter

import reference_bpe as ref

TRAIN_TEXT = """
Plan a four-day trip to Lisbon in early October on a moderate budget. We
prefer walking, local food, bookstores, and viewpoints. Include a day trip
to Sintra. Avoid nightlife-heavy plans and do not rent a car. Produce a
day-by-day itinerary with transit notes, rainy-day alternatives, and cost
estimates for the whole stay. The hotel should be in Baixa or Chiado.

Write a single-file HTML page with a JavaScript canvas simulation of
gravity between a galaxy, a comet, and a ball. Use inverse-square gravity,
friction 0.99, and pointer lock for mouse control. No external libraries
are allowed. Target 60 frames per second and keep the code commented.

Write a Python script that cleans a CSV file: drop duplicate rows, impute
missing numeric values with the median, normalize all date columns to ISO
8601, and write a summary report of rows dropped and null counts per
column. Use pandas and assume UTF-8 encoding throughout the pipeline.

Design a React dashboard for a SaaS product with pages for overview,
billing, and settings. Authentication uses OAuth2. Charts should include
monthly recurring revenue and churn rate. The layout must be responsive
and support dark mode. Manage state with Redux and keep components small.

Draft a research outline about lossy context compression for language
models: motivation, methods, experiments, and limitations, in about 800
words for machine learning researchers, formal tone, with citations.

The compressed context below encodes semantic atoms: type, subject,
predicate, value, modality, scope. Reconstruct the atoms as JSON. Use
snake_case for subjects and values. Convert negations into predicate and
value pairs. Do not infer facts not supported by the compressed context.

{"atoms":[{"type":"constraint","subject":"rental_car","predicate":"allowed",
"value":false,"modality":"must","scope":"trip"},{"type":"preference",
"subject":"activity_style","predicate":"includes","value":"bookstores",
"modality":"should","scope":"trip"},{"type":"output","subject":"itinerary",
"predicate":"required","value":"day_by_day","modality":"must","scope":"output"}]}

@CCL/1 TASK=travel.plan DEST=lisbon DAYS=4 WHEN=october_early
BUDGET=moderate PREF={walkable,local_food,bookstores,viewpoints}
INCLUDE={sintra} BASE={baixa,chiado} AVOID={nightlife,rental_car}
OUT={day_by_day,transit,rainy_day_alternatives,costs}
@C1 T=trip DEST=LIS D=4 WHEN=Oct.early P=walk,foodL,books,views B=$mod
INC=Sintra BASE=Baixa,Chiado NO=nightlife,car OUT=d2d,transit,rain,costs
TRIP:LIS/4d/Oct.early/$mod P:walk,food.local,books,views +Sintra
BASE:Baixa|Chiado !nightlife !car OUT:d2d,transit,rain,costs
@SAFE{rental_car:false; allergy:peanuts,severe; budget_max:1200_EUR}
@SZIP{TRIP:LIS/4d/Oct.early/$mod P:walk,food.local,views +Sintra}
@DICT/TRIP: D=days; $mod=moderate_budget; d2d=day_by_day;
!car=avoid_rental_car; rain=rainy_day_alternatives
CODE:JS/canvas/1file G:inverse_square F:0.99 LOCK:pointer !libs FPS:60
DATA:PY/csv MISS:median DATE:iso8601 +dedupe ENC:utf8 OUT:report
APP:react PAGES:overview,billing,settings AUTH:oauth2 STATE:redux
RSRCH:semzip SEC:motivation,methods,experiments,limitations W:800

for (let i = 0; i < bodies.length; i++) { const b = bodies[i];
b.vx *= friction; b.vy *= friction; ctx.drawImage(sprite, b.x, b.y); }
df = df.drop_duplicates(); df = df.fillna(df.median(numeric_only=True))
const routes = ["/overview", "/billing", "/settings"]; export default App;
SELECT count(*) FROM runs WHERE regime = 'szip_ascii' AND war >= 0.8;

token gain is one minus compressed tokens over original tokens, positive
values indicate compression and negative values indicate expansion, the
weighted similarity is 0.40 subject, 0.20 predicate, 0.30 value, 0.10 type
and the match threshold defaults to 0.72 with sensitivity at 0.65 and 0.80.
critical atom recall, weighted atom recall, precision, matched, unmatched.

🧳 📍 🗓 💶 🚶 🍽️ 📚 🌅 ➕ 🚫 🔒 🚀 ☄️ 🎾 🌌 👍 ✅ ❌ ⚠️
🧳TRIP 📍LIS 🗓4d 💶mod 🚶walk 🍽food 📚books 🌅views ➕Sintra 🚫car
emoji codes are visually compact but can be semantically broad for models.
Olá! Lisboa é linda em outubro. Açaí, café, résumé, naïve. 東京 京都.
привет мир. αβγ δέλτα. 1 2 3 42 365 1200 2048 0.99 3.14159 8601 100 200

Long prompts and chat histories carry more than their surface wording: a
handful of commitments decide whether the answer is usable. A compressed
context should keep the commitments and may lose the phrasing. When the
decompressor is a language model, the code can lean on shared priors: a
city code, a date shorthand, a budget tag, and a short list of tagged
preferences reconstruct most of a request. The protected channel keeps
what must never be paraphrased: boundaries, exact numbers, refusals,
allergies, legal and medical facts, and anything private. The lossy
channel keeps the predictable rest. A packet combines the two, and a
small shared dictionary amortizes its own cost after a few reuses.

The evaluation loop renders each case into every regime, counts tokens
under each vocabulary, asks an independent decoder to reconstruct the
atoms, and scores recall over the critical subset. Reports include one
row per regime with mean gains and mean recall, plus a sensitivity table
over the match thresholds. All artifacts of a run are written to a run
directory: the cases, the gold atoms, the exported prompts, the raw
decoder outputs, and the scorer tables, each stage resumable on its own.

def clean(frame): return frame.drop_duplicates().reset_index(drop=True)
def report(frame): return {"rows": len(frame), "nulls": frame.isna().sum()}
class Runner { constructor(config) { this.config = config; } }
if (response.status === 429) { await sleep(backoff); continue; }
while minRank is not None: merge(parts, minRank); minRank = scan(parts)
curl -X POST https://api.example.com/v1/chat/completions -d @batch.json
run_id, case_id, regime, threshold, car, war, precision, o200k, cl100k
validate tokenize render export-prompts decode score aggregate packet run

The itinerary should balance walking time against transit hops, keep one
anchor activity per day, and leave the evening open near the hotel. Rainy
days swap viewpoints for covered markets, bookshops, and museums. Costs
are listed per day with a running total and a contingency line. Trains to
Sintra leave from Rossio; buy the combined ticket and start with the
furthest palace, then walk downhill through the old town before heading
back. Street food near the market is the cheapest good lunch in town.

A robust data cleaning pass starts with column type inference, trims
whitespace, lowercases headers to snake case, parses dates with an
explicit format list, and only then deduplicates rows. Imputation comes
last so that duplicate rows never vote on the median. The report lists
rows in, rows out, duplicates dropped, nulls per column before and after,
and every date column with its detected input format and the normalized
output format. Encoding errors are replaced, counted, and reported.

Dashboards earn their keep when every chart answers one question. The
overview page shows monthly recurring revenue, net churn, and active
seats; billing shows invoices, payment methods, and plan changes; and
settings covers members, roles, tokens, and the audit log. Responsive
layout means the tables collapse into cards on narrow screens, and dark
mode follows the system preference with a manual override stored per user.
"""


def train(pattern_name, n_merges):
    words = Counter()
    for piece in ref.pretokenize(TRAIN_TEXT, pattern_name):
        words[tuple(piece.encode("utf-8")[i : i + 1] for i in range(len(piece.encode("utf-8"))))] += 1

    merges = []
    for _ in range(n_merges):
        pairs = Counter()
        for word, cnt in words.items():
            for a, b in zip(word, word[1:]):
                pairs[(a, b)] += cnt
        if not pairs:
            break
        best_n = max(pairs.values())
        if best_n < 2:
            break
        best = min(p for p, c in pairs.items() if c == best_n)
        merges.append(best[0] + best[1])
        merged = Counter()
        for word, cnt in words.items():
            out = []
            i = 0
            while i < len(word):
                if i + 1 < len(word) and (word[i], word[i + 1]) == best:
                    out.append(word[i] + word[i + 1])
                    i += 2
                else:
                    out.append(word[i])
                    i += 1
            merged[tuple(out)] += cnt
        words = merged

    ranks = {bytes([b]): b for b in range(256)}
    for i, m in enumerate(merges):
        ranks[m] = 256 + i
    return ranks


def write_ranks(ranks, path):
    with open(path, "w") as f:
        for tok, rank in sorted(ranks.items(), key=lambda kv: kv[1]):
            f.write(f"{base64.b64encode(tok).decode()} {rank}\n")


def main():
    if len(sys.argv) != 2:
        print("usage: train_vocab.py <out-dir>", file=sys.stderr)
        return 2
    out = sys.argv[1]
    for name, pat, n in (("cl100k_test", "cl100k", 1800), ("o200k_test", "o200k", 2600)):
        ranks = train(pat, n)
        write_ranks(ranks, f"{out}/{name}.tiktoken")
        print(f"{name}: {len(ranks)} ranks")
    return 0


if __name__ == "__main__":
    sys.exit(main())
