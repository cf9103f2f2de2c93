"""Seeded generator for a small PLOS/eLife-like corpus.

Articles are template-built: abstracts lean on invented jargon and long
clauses, PLOS-style lay summaries are mid-length, eLife-style ones are long
and plain with more background sentences. Good enough to exercise every
pipeline stage end to end; no claim to linguistic realism.
"""

from __future__ import annotations

import random
from importlib import resources

from .corpus import Article, Split, Venue, load_corpus

_ONSETS = ["cyto", "neuro", "gluco", "phospho", "hepato", "myo", "lipo", "immuno", "angio", "osteo", "nephro", "chromo"]
_CORES = ["kin", "trop", "lys", "gen", "fibr", "plast", "mod", "syn", "glob", "ferr", "sulf", "tax"]
_TAILS = ["ase", "in", "ogen", "ulin", "oside", "amide", "ectin", "osin", "ophore", "idase"]

_ORGANISMS = ["murine", "zebrafish", "Drosophila", "human", "yeast", "Arabidopsis", "primate"]
_TISSUES = ["epithelial cells", "cortical neurons", "hepatocytes", "fibroblasts", "T cells", "cardiomyocytes", "root tissue"]
_PROCESSES = ["phosphorylation", "transcriptional repression", "proteolytic cleavage", "allosteric inhibition",
              "endocytic trafficking", "chromatin remodelling", "oxidative signalling"]
_METHODS = ["single-cell sequencing", "quantitative proteomics", "CRISPR knockout screens", "live imaging",
            "mass spectrometry", "electrophysiological recordings", "mathematical modelling"]
_SIMPLE_THINGS = ["cells", "the body", "the brain", "the liver", "blood sugar", "muscles", "plants", "infections", "the heart"]
_SIMPLE_VERBS = ["helps", "changes", "controls", "protects", "slows down", "speeds up", "switches on", "switches off"]
_CONDITIONS = ["diabetes", "cancer", "heart disease", "dementia", "malaria", "obesity", "infection"]

_ABSTRACT_T = [
    "{J1} {proc} of {J2} is required for {J3}-dependent homeostasis in {org} {tissue}.",
    "Using {method}, we demonstrate that {J1} modulates {J2} through {proc} at conserved regulatory residues.",
    "Quantitative characterization revealed that {J2} deficiency attenuates {J3} expression and disrupts {J4} localization.",
    "These findings establish {J1} as a mechanistic determinant of {J3} signalling and identify {J4} as a therapeutic vulnerability.",
    "Comparative analyses across {org} {tissue} indicate substantial heterogeneity in {J2}-mediated {proc}.",
    "Pharmacological inhibition of {J4} recapitulated the phenotype, implicating {proc} in {J1} stabilization.",
    "Collectively, our data delineate a hierarchical regulatory architecture coupling {J1}, {J2} and {J3}.",
]
_BODY_T = _ABSTRACT_T + [
    "Previous studies have characterized {J1} in {org} {tissue}, but its interaction with {J2} remains unclear.",
    "We quantified {J3} abundance in {n} independent replicates using {method}.",
    "Figure {n} shows that {J2} accumulates following {proc} of {J4}.",
    "Statistical significance was assessed with permutation testing across {n} conditions.",
    "Loss of {J1} reduced {J3} levels by approximately {n} percent relative to controls.",
    "Our model predicts that {J4} buffers fluctuations in {J2} during {proc}.",
    "Together with earlier work, these results suggest that {J1} and {J3} act in parallel pathways.",
]
_LAY_T = [
    "{S1} {verb} how {S2} work, but scientists still do not fully understand how.",
    "A molecule called {J1} is known to play a role in {S1} and in diseases such as {cond}.",
    "Previous studies found that {J1} works together with another molecule, {J2}.",
    "In this study, the researchers looked at {org} {tissue} to see what {J1} does.",
    "They found that when {J1} is missing, {S1} cannot make enough {J2}.",
    "This means that {J1} {verb} the way {S2} respond to stress.",
    "The team used a method called {method} to follow these molecules over time.",
    "These results could help doctors to find new ways to treat {cond}.",
    "Future work will need to test whether the same is true in people.",
    "{S1} need to keep a careful balance to stay healthy.",
    "When this balance is lost, it can lead to {cond}.",
    "The results show that small changes inside {S1} can have big effects.",
]


def _jargon(rng: random.Random) -> str:
    return rng.choice(_ONSETS) + rng.choice(_CORES) + rng.choice(_TAILS)


def _fill(template: str, rng: random.Random, terms: list[str]) -> str:
    s = template.format(
        J1=terms[0], J2=terms[1], J3=terms[2], J4=terms[3],
        org=rng.choice(_ORGANISMS), tissue=rng.choice(_TISSUES), proc=rng.choice(_PROCESSES),
        method=rng.choice(_METHODS), n=rng.randint(2, 40),
        S1=rng.choice(_SIMPLE_THINGS), S2=rng.choice(_SIMPLE_THINGS),
        verb=rng.choice(_SIMPLE_VERBS), cond=rng.choice(_CONDITIONS),
    )
    return s[0].upper() + s[1:]


def _paragraph(templates: list[str], n: int, rng: random.Random, terms: list[str]) -> str:
    return " ".join(_fill(rng.choice(templates), rng, terms) for _ in range(n))


def make_article(idx: int, venue: Venue, split: Split, rng: random.Random, jargon: list[str]) -> Article:
    terms = rng.sample(jargon, 4)
    sections = tuple(
        (heading, _paragraph(_BODY_T, rng.randint(6, 12), rng, terms))
        for heading in ("Introduction", "Results", "Discussion", "Methods")
    )
    abstract = _paragraph(_ABSTRACT_T, rng.randint(5, 9), rng, terms)
    lay_sentences = rng.randint(8, 11) if venue is Venue.PLOS else rng.randint(16, 24)
    lay_pool = _LAY_T if venue is Venue.ELIFE else _LAY_T + _ABSTRACT_T[:3]
    lay = _paragraph(lay_pool, lay_sentences, rng, terms)
    title = f"{terms[0].capitalize()} regulates {terms[1]} in {rng.choice(_ORGANISMS)} {rng.choice(_TISSUES)}"
    return Article(
        id=f"{venue.value.lower()}-{idx:04d}",
        title=title,
        sections=sections,
        abstract=abstract,
        lay_summary=lay,
        venue=venue,
        split=split,
    )


def generate_corpus(n_articles: int = 100, seed: int = 13, elife_fraction: float = 0.4) -> list[Article]:
    """PLOS articles first, then eLife; 70/10/20 train/val/test within each venue."""
    rng = random.Random(seed)
    jargon = sorted({_jargon(rng) for _ in range(40)})
    n_elife = round(n_articles * elife_fraction)
    out = []
    for venue, count in ((Venue.PLOS, n_articles - n_elife), (Venue.ELIFE, n_elife)):
        for i in range(count):
            frac = i / count
            split = Split.TRAIN if frac < 0.7 else Split.VAL if frac < 0.8 else Split.TEST
            out.append(make_article(i, venue, split, rng, jargon))
    return out


def bundled_corpus_path():
    return resources.files("laysumm").joinpath("data").joinpath("synthetic_corpus.jsonl")


def load_bundled_corpus() -> list[Article]:
    with resources.as_file(bundled_corpus_path()) as p:
        return load_corpus(p)
