#!/usr/bin/env python3
"""Regenerate the bundled synthetic 3-topic corpus.

The corpus is planted: each reference article interleaves 12 distinctive
"core" sentences (which also make up the gold summaries) with 36 generic
filler sentences; every citation paraphrases exactly one core sentence and
carries a facet annotation whose marker vocabulary is disjoint across
facets, so the facet classification task is linearly separable.

Deterministic; writes JSON into src/citescope/data/corpus/.
"""

import json
import os
import random

OUT_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "src", "citescope", "data", "corpus",
)

FACETS = ["hypothesis", "method", "results", "implication", "discussion", "data_set_used"]

FACET_CLAUSES = {
    "hypothesis": "supporting the central hypothesis and the conjecture postulated beforehand",
    "method": "using the staining workflow and the immunoblot pipeline standardized here",
    "results": "yielding a pronounced readout and a strong signal magnitude overall",
    "implication": "an outcome carrying broad ramifications and downstream repercussions clinically",
    "discussion": "a point of ongoing debate and divergent commentary among groups",
    "data_set_used": "drawing on the public registry cohort and archived specimen collection",
}

FILLER_POOL = [
    "aliquot", "buffer", "reagent", "centrifuge", "pellet", "supernatant",
    "dilution", "vortex", "pipette", "cuvette", "agitation", "incubation",
    "freezer", "labeling",
]

TOPICS = [
    {
        "id": "t1",
        "anchor": "p53",
        "title_ref": "Regulation of the p53 damage response network",
        "authors": ["Marlowe", "Keating", "Osei"],
        "words": [
            "mdm2", "gadd45", "puma", "noxa", "chk2", "atm", "bax", "cdkn1a",
            "rpa32", "brca1", "fanc", "mre11", "rad51", "ku70", "ligase4",
            "parp1", "xrcc1", "ercc1", "msh2", "mlh1", "pold1", "pole",
            "topbp1", "claspin", "timeless", "tipin", "cdc25", "wee1",
            "plk1", "aurka", "bub1", "mad2", "cenpa", "incenp", "survivin",
            "borealin", "sgo1", "espl1", "pttg1", "cohesin", "smc1", "smc3",
            "rad21", "stag2", "nipbl", "wapl", "esco2", "haspin",
        ],
    },
    {
        "id": "t2",
        "anchor": "mapk",
        "title_ref": "Scaffold control of mapk cascade amplitude",
        "authors": ["Tanaka", "Bruckner", "Silva"],
        "words": [
            "ksr1", "braf", "mek1", "erk2", "rsk1", "elk1", "dusp6", "spry2",
            "grb2", "sos1", "shc1", "rasgrp", "pea15", "mnk1", "msk1",
            "creb", "fos", "jun", "egr1", "ets1", "myc", "stat3", "socs3",
            "ptpn11", "gab1", "cbl", "sprouty", "sef", "mkp3", "paxillin",
            "talin", "vinculin", "zyxin", "fak", "src", "csk", "pxn",
            "crk", "dock1", "rac1", "pak1", "limk", "cofilin", "arp2",
            "wave2", "formin", "profilin", "gelsolin",
        ],
    },
    {
        "id": "t3",
        "anchor": "autophagy",
        "title_ref": "Nutrient signals gating autophagy initiation",
        "authors": ["Okafor", "Lindgren", "Peralta"],
        "words": [
            "ulk1", "atg13", "fip200", "beclin1", "vps34", "atg14", "ambra1",
            "wipi2", "atg16", "lc3b", "gabarap", "p62", "nbr1", "optineurin",
            "tbk1", "stx17", "snap29", "vamp8", "rab7", "hops", "plekhm1",
            "lamp1", "lamp2", "ctsb", "ctsd", "mcoln1", "tfeb", "tfe3",
            "mitf", "rragc", "ragulator", "lamtor", "flcn", "depdc5",
            "nprl2", "nprl3", "sesn2", "castor1", "samtor", "slc38a9",
            "arl8b", "borc", "kif5b", "dynein", "snapin", "bloc1", "myrf",
            "spns1",
        ],
    },
]


def core_sentence(anchor, w):
    return (
        f"Loss of {anchor} signaling markedly elevates {w[0]} and {w[1]} "
        f"expression while {w[2]} binding to {w[3]} declines sharply."
    )


def citation_sentence(anchor, w, author, year, facet):
    clause = FACET_CLAUSES[facet]
    return (
        f"Earlier work reported that reduced {anchor} signaling elevates "
        f"{w[0]} and {w[1]} as {w[2]} binding to {w[3]} declines "
        f"({author} et al., {year}), {clause}."
    )


def filler_sentence(rng):
    words = rng.sample(FILLER_POOL, 6)
    return (
        f"Samples received {words[0]} treatment in cold {words[1]} with "
        f"{words[2]} steps before {words[3]} and {words[4]} under mild "
        f"{words[5]} conditions."
    )


def build_topic(spec, rng):
    anchor = spec["anchor"]
    words = spec["words"]
    core_words = [words[4 * i : 4 * i + 4] for i in range(12)]
    cores = [core_sentence(anchor, w) for w in core_words]
    fillers = [filler_sentence(rng) for _ in range(36)]

    # interleave: filler, filler, core, filler, ... (each core flanked by fillers)
    ref_sentences = []
    fi = iter(fillers)
    for i in range(12):
        ref_sentences.append(next(fi))
        ref_sentences.append(next(fi))
        ref_sentences.append(cores[i])
        ref_sentences.append(next(fi))
    ref_text = " ".join(ref_sentences)

    # 12 citations over 3 citing articles, 2 citations per facet per topic
    facet_of = [FACETS[i % 6] for i in range(12)]
    citing_articles = []
    citations = []
    year = 2001
    for a in range(3):
        art_id = f"{spec['id']}-c{a + 1}"
        parts = [
            f"This article surveys recent findings about {anchor} regulation."
        ]
        text = parts[0]
        for j in range(4):
            idx = a * 4 + j
            author = spec["authors"][idx % 3]
            marker = f"({author} et al., {year + idx})"
            cite_text = citation_sentence(
                anchor, core_words[idx], author, year + idx, facet_of[idx]
            )
            connective = " Additional observations refined this picture. "
            start = len(text) + len(connective)
            text = text + connective + cite_text
            citations.append(
                {
                    "id": f"{spec['id']}-cit{idx + 1}",
                    "citing_article_id": art_id,
                    "text": cite_text,
                    "char_start": start,
                    "char_end": start + len(cite_text),
                    "marker": marker,
                    "facet": facet_of[idx],
                }
            )
        text += " The broader literature continues to expand on these themes."
        citing_articles.append(
            {
                "id": art_id,
                "title": f"Perspectives on {anchor} signaling, part {a + 1}",
                "text": text,
            }
        )

    golds = []
    for g in range(4):
        order = list(range(12))
        rot = rng.randrange(12)
        order = order[rot:] + order[:rot]
        golds.append(
            {
                "annotator_id": f"ann{g + 1}",
                "text": " ".join(cores[i] for i in order),
            }
        )

    return {
        "id": spec["id"],
        "reference_article": {
            "id": f"{spec['id']}-ref",
            "title": spec["title_ref"],
            "text": ref_text,
        },
        "citing_articles": citing_articles,
        "citations": citations,
        "gold_summaries": golds,
    }


def main():
    rng = random.Random(20240917)
    os.makedirs(OUT_DIR, exist_ok=True)
    names = []
    for spec in TOPICS:
        topic = build_topic(spec, rng)
        name = f"{topic['id']}.json"
        names.append(name)
        with open(os.path.join(OUT_DIR, name), "w", encoding="utf-8") as fh:
            json.dump(topic, fh, ensure_ascii=False, indent=2)
    with open(os.path.join(OUT_DIR, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump({"topics": names}, fh, indent=2)
    print(f"wrote {len(names)} topics to {OUT_DIR}")


if __name__ == "__main__":
    main()
