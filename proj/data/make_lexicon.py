"""Regenerates data/lexicon.txt: a small GloVe-style word-vector file.

Words in one synonym cluster share a base vector plus small noise, so their
cosine similarity is high; unrelated words are independent random vectors.
"""
import pathlib
import random

DIM = 50
SEED = 7

CLUSTERS = [
    ["price", "cost", "fare", "charge"],
    ["weight", "mass"],
    ["height", "stature"],
    ["age", "years"],
    ["city", "town", "municipality"],
    ["country", "nation"],
    ["salary", "wage", "income", "earnings"],
    ["quantity", "amount", "count", "number"],
    ["rating", "score", "grade"],
    ["review", "comment", "feedback", "remark"],
    ["category", "class", "kind", "genre"],
    ["colour", "color", "hue"],
    ["speed", "velocity", "pace"],
    ["distance", "length", "range"],
    ["temperature", "temp", "heat"],
    ["team", "squad", "club"],
    ["player", "athlete", "competitor"],
    ["company", "firm", "employer", "business"],
    ["product", "item", "article", "goods"],
    ["customer", "client", "buyer", "purchaser"],
    ["email", "mail"],
    ["phone", "telephone", "mobile"],
    ["address", "location", "residence"],
    ["id", "identifier", "key", "code"],
    ["gender", "sex"],
    ["start", "begin", "commence"],
    ["end", "finish", "stop"],
    ["total", "sum", "aggregate"],
    ["population", "inhabitants", "residents"],
    ["region", "area", "zone", "district"],
    ["street", "road", "avenue"],
    ["title", "heading", "caption"],
    ["author", "writer", "creator"],
    ["duration", "period", "span"],
    ["date", "day"],
    ["name", "label", "designation"],
    ["survived", "alive", "lived"],
    ["home", "host"],
    ["visitor", "guest", "away"],
    ["goals", "points", "tally"],
    ["patient", "subject", "case"],
    ["disease", "illness", "condition", "disorder"],
    ["doctor", "physician", "clinician"],
    ["hospital", "clinic"],
    ["student", "pupil", "learner"],
    ["teacher", "instructor", "tutor"],
    ["school", "academy"],
    ["course", "module"],
    ["movie", "film"],
    ["song", "track", "tune"],
    ["artist", "performer", "musician"],
    ["album", "record"],
    ["book", "volume", "publication"],
    ["publisher", "imprint"],
    ["vehicle", "car", "automobile"],
    ["engine", "motor"],
    ["fuel", "petrol", "gasoline"],
    ["flight", "trip", "journey"],
    ["airline", "carrier"],
    ["origin", "source", "departure"],
    ["destination", "target", "arrival"],
    ["store", "shop", "outlet"],
    ["sales", "revenue", "turnover"],
    ["discount", "rebate", "markdown"],
    ["tax", "levy", "duty"],
    ["balance", "remainder"],
    ["account", "profile"],
    ["employee", "worker", "staff"],
    ["department", "division", "unit"],
    ["manager", "supervisor", "boss"],
    ["house", "dwelling", "property"],
    ["rooms", "chambers"],
    ["size", "dimension", "magnitude"],
    ["latitude", "lat"],
    ["longitude", "lon", "lng"],
    ["description", "overview"],
    ["status", "state", "situation"],
    ["language", "tongue"],
    ["species", "breed"],
    ["animal", "creature", "beast"],
    ["crop", "harvest", "yield"],
    ["rainfall", "precipitation"],
    ["wind", "breeze"],
    ["humidity", "moisture"],
    ["budget", "allocation"],
    ["profit", "gain", "margin"],
    ["loss", "deficit"],
    ["order", "purchase"],
    ["shipping", "delivery", "dispatch"],
    ["stock", "inventory", "supply"],
    ["brand", "make", "marque"],
    ["model", "variant"],
    ["year", "season"],
    ["month", "mo"],
    ["width", "breadth"],
    ["depth", "thickness"],
    ["loudness", "noise"],
    ["energy", "power"],
    ["sample", "specimen"],
    ["reading", "measurement", "observation"],
]

# Common English words for natural-language detection.
COMMON = """
the a an and or but if then so because very really quite too not no never always often
i you he she it we they me him her us them my your his its our their this that these those
is are was were be been being have has had do does did will would can could should may might must
great good bad terrible awesome excellent poor nice love loved hate hated like liked enjoy enjoyed
buy bought again would recommend recommended product service quality fast slow delivery arrived broken
work works worked working easy hard difficult simple cheap expensive worth money time day night
first last best worst better worse more less most least much many few some any all every each
of in on at to for with from by about into over after before under between through during without
what which who whom whose when where why how there here out up down off just only also even still
new old big small long short high low large little early late happy sad angry satisfied disappointed
customer staff friendly helpful rude clean dirty room food tasty delicious cold hot warm fresh stale
one two three four five six seven eight nine ten once twice week weeks months year years
get got give gave make made take took see saw look looked use used want wanted need needed feel felt
thing things people person place way back well thanks thank please sorry yes ok okay definitely
item order returned return refund package box price value star stars experience went came come go
""".split()


def main():
    rng = random.Random(SEED)
    vectors = {}
    for cluster in CLUSTERS:
        base = [rng.gauss(0, 1) for _ in range(DIM)]
        for word in cluster:
            if word in vectors:
                raise SystemExit(f"duplicate word {word}")
            vectors[word] = [b + rng.gauss(0, 0.25) for b in base]
    for word in COMMON:
        if word not in vectors:
            vectors[word] = [rng.gauss(0, 1) for _ in range(DIM)]
    # Unit abbreviations and connectors seen in column names.
    for word in ["kg", "lb", "cm", "m", "km", "usd", "eur", "pct", "avg", "min", "max", "num", "nr",
                 "last"]:
        if word not in vectors:
            vectors[word] = [rng.gauss(0, 1) for _ in range(DIM)]
    out = pathlib.Path(__file__).with_name("lexicon.txt")
    with out.open("w") as f:
        for word in sorted(vectors):
            f.write(word + " " + " ".join(f"{x:.5f}" for x in vectors[word]) + "\n")
    print(f"wrote {len(vectors)} words to {out}")


if __name__ == "__main__":
    main()
