#!/usr/bin/env python3
"""Reduce a raw SentiWordNet 3.0 distribution file to the labeled lexicon format.

The toolkit consumes only two lexicon formats (labeled ``term<TAB>POS|NEG``
and scored ``term<TAB>number``); graded sense-level resources are reduced
up front so the core stays independent of any one lexicon's native schema.

Input lines look like::

    a\t00001740\t0.125\t0\table#1 unable#2\t(gloss ...)

Scores are summed per surface term across all its senses and the dominant
polarity wins; ties and all-zero terms are dropped, as are multi-word terms
(the tagger is strictly word-level).

Usage: sentiwordnet_to_labeled.py SentiWordNet_3.0.0.txt en.labeled.tsv
"""

import argparse
import sys
from collections import defaultdict


def reduce_lexicon(lines, min_margin=0.0):
    totals = defaultdict(lambda: [0.0, 0.0])  # term -> [pos, neg]
    for line in lines:
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) < 5:
            continue
        try:
            pos_score = float(fields[2])
            neg_score = float(fields[3])
        except ValueError:
            continue
        for item in fields[4].split():
            term = item.rsplit("#", 1)[0].lower()
            if not term or "_" in term:
                continue
            totals[term][0] += pos_score
            totals[term][1] += neg_score
    for term in sorted(totals):
        pos_total, neg_total = totals[term]
        if pos_total - neg_total > min_margin:
            yield f"{term}\tPOS"
        elif neg_total - pos_total > min_margin:
            yield f"{term}\tNEG"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("source", help="raw SentiWordNet 3.0 file")
    parser.add_argument("output", help="labeled TSV to write")
    parser.add_argument(
        "--min-margin",
        type=float,
        default=0.0,
        help="minimum dominant-polarity score margin (default 0)",
    )
    args = parser.parse_args(argv)
    with open(args.source, encoding="utf-8") as src:
        rows = list(reduce_lexicon(src, args.min_margin))
    with open(args.output, "w", encoding="utf-8") as out:
        out.write("".join(row + "\n" for row in rows))
    print(f"wrote {len(rows)} entries -> {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
