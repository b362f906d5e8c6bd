#!/usr/bin/env python3
"""Regenerate the shipped sample corpus, reference frequency lists and stoplist.

Output is a pure function of --seed, so rerunning leaves data/sample unchanged.
"""
import argparse
import csv
import random
from collections import Counter
from pathlib import Path

# Concordance contexts for the "China virus" / "Chinese virus" node, kept verbatim.
NODE_SNIPPETS = [
    'interactions-referencing the novel coronavirus as the "Chinese virus" or "China virus" has the potential to create and perpetuate stigma.',
    'the prevalence and frequency of the phrases "Chinese virus" and "China virus" on Twitter after the March 16, 2020, US presidential reference',
    'level heat map.; RESULTS: A total of 16,535 "Chinese virus" or "China virus" tweets were identified in the preperiod, and 177,327 tweets',
    'in the number of tweets exclusively mentioning "Chinese virus" or "China virus" instead of coronavirus disease (COVID-19) or coronavirus. On',
    'average, 0.38 tweets referencing "Chinese virus" or "China virus" were posted per 10,000 people at the state level',
    'n=670/46, 1457%).; CONCLUSIONS: The rise in tweets referencing "Chinese virus" or "China virus," along with the content of these tweets, indicate',
    'in relation to coronavirus diagnosis, those that matched with the 2019 China virus diagnosis clinical guide included Amyloid-A in the',
    'Since that time, SARS-CoV-2 - hereinafter referred to as the China Virus - has taken a horrific toll. Over 160,000 Americans have',
    'there was a 650% increase in Twitter retweets using the term "Chinese virus" and related terms. On March 9, there was an 800%',
    'health infrastructure is underdeveloped. [...]the use of phrases such as Chinese virus" directly contradicts calls from the WHO, the Centers',
    'has officially announced the disease as COVID-19, one controversial term - "Chinese Virus" is still being used by a great number',
    'COVID-19, there are mainly two ways: using controversial terms like "Chinese Virus", or using non-controversial terms like "Coronavirus". We',
    'As of this writing, the precise origin of the Chinese virus, SARS CoV-2, remains unclear. It is however known',
    'been encountered all over. With Donald Trump using the term Chinese Virus, this cause has gained momentum and Ethnic Asians',
    'and sentiments that have been associated with the terms like Chinese Virus, Wuhan Virus and Chinese Corona Virus. METHODS: 16,000 tweets',
    'This paper traces the emergence of the racist term "Chinese virus" used by the President of the United',
    'nationalism and modernism Ultimately, combatting the English racist term "Chinese virus" with a creative mixture of English and',
    'inappropriately labelled the coronavirus by race, using such headlines as “Chinese virus pandemonium” and even suggesting “China kids stay home.”',
    'President Donald Trump?s racist remarks calling the coronavirus the ?Chinese virus? This essay offers a historical lens through which',
    'job markets and potential racism toward Asians in relation with “Chinese virus” may cause the mental distress of these students.',
]

# Sentences that model summaries cite from the corpus.
CITED = [
    "Coronavirus disease (COVID-19) first emerged in China and rapidly spread in the world causing a pandemic.",
    "Efforts to stem the spread of COVID-19 in China hinged on severe restrictions to human movement starting 23 January 2020.",
    "Objectives: COVID-19 has spread beyond Hubei Province of China to Europe, North America, and Asian countries including Korea.",
]

OPENERS = [
    "BACKGROUND: {topic} remains a major concern for {group} during the COVID-19 pandemic.",
    "The outbreak of the novel coronavirus in Wuhan, China in December 2019 changed {field} worldwide.",
    "Since the first cases were reported in Hubei province, {topic} has attracted wide attention.",
    "OBJECTIVE: This study aimed to describe {topic} among {group} in {place}.",
    "Little is known about {topic} in {place} after the spread of SARS-CoV-2.",
]
MIDDLES = [
    "METHODS: We conducted a {design} of {n} {group} admitted to {count} hospitals between January and {month} 2020.",
    "Data were collected from {source} and analysed with {method}.",
    "Patients with severe disease were older and more likely to have {condition}.",
    "The median age of the {n} participants was {age} years, and {pct}% were women.",
    "Clinical characteristics, laboratory findings and treatment outcomes were compared between groups.",
    "RESULTS: The incidence of {condition} was higher in {group} than in the general population.",
    "Public health measures such as lockdown and social distancing reduced transmission in {place}.",
    "We identified {count} risk factors associated with mortality, including {condition}.",
    "Viral RNA was detected in {pct}% of samples collected from {group}.",
    "The number of confirmed cases in {place} increased rapidly during {month}.",
    "Ethics approval was obtained from the institutional review board, and informed consent was waived.",
    "Trial registration details and funding sources are listed in the supplementary material.",
    "China implemented national control measures and research programs in hospitals across the country.",
    "Countries outside China reported imported cases within weeks of the initial outbreak.",
]
CLOSERS = [
    "CONCLUSIONS: {topic} should be considered when planning care for {group}.",
    "These findings support targeted interventions for {group} in {place}.",
    "Further studies are needed to confirm the long-term effects of the pandemic on {field}.",
    "Our results provide evidence for policy makers responding to COVID-19.",
]
SLOTS = {
    "topic": ["mental health", "vaccine hesitancy", "hospital capacity", "viral transmission", "antibody response",
              "telemedicine use", "misinformation on social media", "stigma toward Asian communities"],
    "group": ["health care workers", "older adults", "children", "pregnant women", "university students",
              "patients with cancer", "nursing home residents"],
    "field": ["clinical practice", "medical education", "public health policy", "global travel"],
    "place": ["Wuhan", "Italy", "New York", "South Korea", "the United Kingdom", "Brazil", "India"],
    "design": ["retrospective cohort study", "cross-sectional survey", "systematic review", "randomized trial"],
    "n": ["120", "342", "1,024", "58", "2,310", "415"],
    "count": ["two", "three", "five", "seven", "nine"],
    "month": ["February", "March", "April", "May"],
    "source": ["electronic medical records", "an online questionnaire", "national surveillance data", "Twitter posts"],
    "method": ["logistic regression", "a mixed-effects model", "thematic analysis", "descriptive statistics"],
    "condition": ["hypertension", "diabetes", "pneumonia", "acute respiratory distress", "anxiety", "depression"],
    "age": ["47", "56", "63", "38", "71"],
    "pct": ["12", "24", "37", "51", "68"],
}

GENERAL_WORDS = (
    "the of and to a in is that for it was on with he as be by at this had not are but from or have an they which "
    "one you were her all she there would their we him been has when who will more no if out so said what up its "
    "about into than them can only other new some could time these two may then do first any my now such like our "
    "over man me even most made after also did many before must through back years where much your way well down "
    "should because each just those people how too little state good very make world still own see men work long "
    "get here between both life being under never day same another know while last might us great old year off "
    "come since against go came right used take three states himself few house use during without again place "
    "american around however home small found thought went say part once general high upon school every does got "
    "united left number course war until always away something fact though water less public put think almost hand "
    "enough far took head yet government system better set told nothing night end why called eyes find going look "
    "asked later knew point next program city business give group toward young days let room president side social "
    "given present several order national possible rather second face per among form important often things looked "
    "early white case john become large big need four within felt children along saw best church ever least power "
    "development light thing seemed family interest want members mind country area others done turned although open "
    "god service certain kind problem began different door thus help means sense whole matter perhaps itself york "
    "times law human line above name example action company hands local show whether five history gave today either "
    "act feet across taken past quite anything seen having death experience body word half really week free "
    "field car words order study research health data results analysis patients hospital disease virus china"
).split()


def abstract_text(rng: random.Random, extra: list[str]) -> str:
    fill = lambda s: s.format(**{k: rng.choice(v) for k, v in SLOTS.items()})
    parts = [fill(rng.choice(OPENERS))]
    parts += [fill(s) for s in rng.sample(MIDDLES, rng.randint(4, 7))]
    for e in extra:
        parts.insert(rng.randint(1, len(parts)), e)
    parts.append(fill(rng.choice(CLOSERS)))
    return " ".join(parts)


def reference_list(rng: random.Random, skew: float) -> list[tuple[str, int, int]]:
    words = list(dict.fromkeys(GENERAL_WORDS))
    rows = []
    for i, w in enumerate(words):
        base = 2_000_000 / (i + 1) ** 1.07
        count = max(1, int(base * rng.uniform(1 - skew, 1 + skew)))
        rows.append((w, count, min(500, max(1, count // 40))))
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows


def write_reference(path: Path, rows) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as f:
        f.write("rank\ttoken\traw_count\tdoc_count\n")
        for rank, (w, c, d) in enumerate(rows, start=1):
            f.write(f"{rank}\t{w}\t{c}\t{d}\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "sample")
    ap.add_argument("--seed", type=int, default=20240901)
    ap.add_argument("--count", type=int, default=200)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)

    extras = {i: [] for i in range(args.count)}
    slots = rng.sample(range(args.count), len(NODE_SNIPPETS) + len(CITED))
    for snippet, idx in zip(NODE_SNIPPETS + CITED, slots):
        extras[idx].append(snippet)

    with (args.out / "abstracts.csv").open("w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "title", "abstract"])
        for i in range(args.count):
            w.writerow([f"A{i + 1:04d}", f"Sample abstract {i + 1}", abstract_text(rng, extras[i])])

    write_reference(args.out / "reference_a.tsv", reference_list(rng, 0.15))
    write_reference(args.out / "reference_b.tsv", reference_list(rng, 0.30))
    (args.out / "stoplist.txt").write_text("# one token per line\net\nal\ni\nii\n", encoding="utf-8")


if __name__ == "__main__":
    main()
