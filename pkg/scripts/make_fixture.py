"""Regenerate the bundled bank/country fixture in data/fixture/.

A small synthetic encyclopedia: generic articles, a handful of "country"
articles that attract many links and "bank" articles that link to their
home country and to each other. Deterministic for a fixed seed.
"""
import argparse
from pathlib import Path

import numpy as np

COUNTRIES = [("United States", "US"), ("United Kingdom", "UK"), ("Germany", "DE"),
             ("France", "FR"), ("China", "CN"), ("Japan", "JP"), ("India", "IN"),
             ("Nigeria", "NG"), ("Mexico", "MX"), ("Vietnam", "VN")]
# (name, home country index, group, asset rank)
BANKS = [("Alpha Bank", 0, 1, 5), ("Beta Capital", 0, 1, 9), ("Gamma Trust", 0, 1, 12),
         ("Delta Holdings", 1, 2, 4), ("Epsilon Bank", 1, 2, 10),
         ("Zeta Bank", 2, 3, 6), ("Eta Credit", 3, 3, 7), ("Theta Bank", 3, 3, 11),
         ("Iota Financial", 5, 4, 3), ("Kappa Bank", 6, 4, 8),
         ("Lambda Bank", 4, 5, 1), ("Mu Commercial", 4, 5, 2)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/fixture")
    ap.add_argument("--n-articles", type=int, default=580)
    ap.add_argument("--seed", type=int, default=2017)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    n_c, n_b = len(COUNTRIES), len(BANKS)
    n = n_c + n_b + args.n_articles
    countries = np.arange(n_c)
    banks = n_c + np.arange(n_b)
    articles = n_c + n_b + np.arange(args.n_articles)
    edges = set()
    bank_weight = 1.0 / np.arange(1, n_b + 1)
    bank_weight /= bank_weight.sum()
    popularity = rng.pareto(1.5, n) + 1.0
    popularity[countries] = np.linspace(0.08, 0.01, n_c) * n
    popularity /= popularity.sum()
    for j in articles:
        k = rng.poisson(5)
        for i in rng.choice(n, size=k, p=popularity):
            edges.add((int(j), int(i)))
        if rng.random() < 0.12:
            edges.add((int(j), int(rng.choice(banks, p=bank_weight))))
    for b, (_, home, _, _) in zip(banks, BANKS):
        edges.add((int(b), int(countries[home])))
        for i in rng.choice(articles, size=4, replace=False):
            edges.add((int(b), int(i)))
        for other in rng.choice(banks, size=2, replace=False):
            if other != b:
                edges.add((int(b), int(other)))
    for c in countries:
        for i in rng.choice(n, size=8, p=popularity):
            edges.add((int(c), int(i)))
    # Alpha Bank and Mu Commercial must stay unlinked in both directions
    edges.discard((int(banks[0]), int(banks[-1])))
    edges.discard((int(banks[-1]), int(banks[0])))
    # a few dangling articles
    dangling = set(int(j) for j in articles[-15:])
    edges = sorted((s, t) for s, t in edges if s not in dangling)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "edges.txt", "w") as fh:
        fh.write(f"# synthetic bank/country fixture, seed {args.seed}, {n} nodes\n")
        for s, t in edges:
            fh.write(f"{s} {t}\n")
    labels = [c for c, _ in COUNTRIES] + [b for b, *_ in BANKS] + [f"Article {k}" for k in range(args.n_articles)]
    with open(out / "labels.tsv", "w") as fh:
        for j, lab in enumerate(labels):
            fh.write(f"{j}\t{lab}\n")
    with open(out / "selection.csv", "w") as fh:
        fh.write("node_label,category,group,external_rank,code\n")
        for name, _, group, ka in BANKS:
            fh.write(f"{name},bank,{group},{ka},\n")
        for name, code in COUNTRIES:
            fh.write(f"{name},country,0,,{code}\n")


if __name__ == "__main__":
    main()
