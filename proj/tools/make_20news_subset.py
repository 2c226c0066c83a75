#!/usr/bin/env python3
"""Write a balanced 20-Newsgroups subset as one directory per class.

Needs scikit-learn and network access on first use:
    python3 tools/make_20news_subset.py data/20news-2000 --per-class 100
"""
import argparse
import pathlib
import random

from sklearn.datasets import fetch_20newsgroups


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out", type=pathlib.Path)
    ap.add_argument("--per-class", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    data = fetch_20newsgroups(subset="all", remove=("headers", "footers", "quotes"))
    by_class = {}
    for text, target in zip(data.data, data.target):
        if text.strip():
            by_class.setdefault(data.target_names[target], []).append(text)

    rng = random.Random(args.seed)
    for name, docs in sorted(by_class.items()):
        picked = rng.sample(docs, args.per_class)
        d = args.out / name
        d.mkdir(parents=True, exist_ok=True)
        for n, text in enumerate(picked):
            (d / f"{n:04d}.txt").write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main()
