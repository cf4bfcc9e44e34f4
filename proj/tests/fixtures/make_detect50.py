"""Builds detect50.jsonl: 50 utterances with planted code-switching.

Words come only from the unambiguous parts of fixtures/lexicon, so the
language of every token is known here and the expectations stored in each
record do not depend on the classifier under test.
"""
import json
import random
from pathlib import Path

root = Path(__file__).resolve().parents[2] / "fixtures" / "lexicon"
ca = set(root.joinpath("ca.txt").read_text(encoding="utf-8").split())
es = set(root.joinpath("es.txt").read_text(encoding="utf-8").split())
shared = set(root.joinpath("shared.txt").read_text(encoding="utf-8").split()) | (ca & es)
ca_words = sorted(w for w in ca - shared if "'" not in w and w != "i")
es_words = sorted(w for w in es - shared if w != "y")

rng = random.Random(50)


def sentence(pattern):
    """pattern: string over {c, e, y}; y is the keyword."""
    out = []
    for p in pattern:
        out.append({"c": lambda: rng.choice(ca_words), "e": lambda: rng.choice(es_words), "y": lambda: "y"}[p]())
    return out


def longest(pattern, ch):
    best = cur = 0
    for p in pattern:
        cur = cur + 1 if p == ch else 0
        best = max(best, cur)
    return best


patterns = []
patterns += ["c" * rng.randint(4, 9) for _ in range(8)]                 # Catalan only
patterns += ["e" * rng.randint(4, 9) for _ in range(8)]                 # Spanish only
patterns += ["cccceee", "ccceeee", "eeeccc", "cceeecc", "ceceeecc", "ccccecee", "eceecc"]  # >=3 each
patterns += ["cecece", "ceceecc", "ecccecec"]                           # >=3 each, Spanish run < 3
patterns += ["ccccee", "ccecc", "ceeeeeec", "eeeeecc", "ccccccce", "cceeeeee"]  # near misses
patterns += ["ccyeee", "cccyeecc", "ccyceecc", "ccceyeee", "cccy", "ceyec"]      # keyword, mixed
patterns += ["eeyee", "ccyccc", "cycec", "cccyee"]                      # keyword, other shapes
patterns += ["cccceeee", "eeeecccc", "ccceee"]
while len(patterns) < 50:
    patterns.append("".join(rng.choice("ce") for _ in range(rng.randint(5, 10))))

records = []
for i, pat in enumerate(patterns):
    words = sentence(pat)
    n_ca = pat.count("c")
    n_es = pat.count("e") + pat.count("y")
    text = " ".join(words)
    text = text[0].upper() + text[1:] + "."
    records.append({
        "id": f"d{i:02d}",
        "text": text,
        "lang": "unknown",
        "expect_ca": n_ca,
        "expect_es": n_es,
        "expect_cs": n_ca >= 3 and n_es >= 3,
        "expect_keyword": "y" in pat,
        "expect_max_run_es": longest(pat.replace("y", "e"), "e"),
    })

out = Path(__file__).with_name("detect50.jsonl")
with out.open("w", encoding="utf-8") as f:
    for r in records:
        f.write(json.dumps(r, ensure_ascii=False) + "\n")
print(len(records), sum(r["expect_cs"] for r in records), sum(r["expect_keyword"] for r in records))
