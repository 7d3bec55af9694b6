#!/usr/bin/env python3
"""Regenerates the pinned lexical resources and the test fixtures.

Everything downstream (substitution resources, NER gazetteer, datasets,
span labels, metric fixtures) is derived from the vocabulary tables in
this file, so the resources and the fixtures cannot drift apart.

Run from the repository root:  python3 scripts/make_test_data.py
"""

import json
import os
import random
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
RES = os.path.join(ROOT, "resources")
DATA = os.path.join(ROOT, "tests", "data")

sys.path.insert(0, os.path.join(ROOT, "tests", "oracle"))
import hotpot_eval_reference as oracle  # noqa: E402

# ---------------------------------------------------------------------------
# embedding clusters: within a cluster, the nearest neighbour of every
# member is the first entry (and the first entry's neighbour is the
# second), so ordering encodes the intended replacement.

CLUSTERS = [
    ["named", "born"],
    ["situated", "located"],
    ["penned", "written"],
    ["composed", "wrote"],
    ["served", "worked"],
    ["produced", "directed"],
    ["established", "founded"],
    ["appeared", "starred"],
    ["l/s", "nmi", "km"],
    ["southwest", "northwest", "northeast"],
    ["city", "island", "town"],
    ["nephew", "grandson", "cousin"],
    ["niece", "granddaughter"],
    ["port", "capital", "harbor"],
    ["river", "lake", "mountain"],
    ["team", "band", "group"],
    ["players", "members", "employees"],
    ["player", "member", "employee"],
    ["essayists", "novelists", "poets"],
    ["essayist", "novelist", "poet"],
    ["chemists", "biologists", "physicists"],
    ["chemist", "biologist", "physicist"],
    ["editor", "author", "publisher"],
    ["painter", "sculptor"],
    ["architect", "engineer"],
    ["mayor", "governor", "senator"],
    ["coach", "manager"],
    ["university", "college", "institute"],
    ["magazine", "journal"],
    ["archivist", "historian"],
    ["Italian", "French", "German", "Spanish"],
    ["American", "British", "Canadian", "Japanese"],
    ["1999", "1998"],
    ["1933", "1932"],
    ["1886", "1885"],
    ["2001", "2000"],
    ["1971", "1970"],
    ["1956", "1955"],
    ["three", "two"],
    ["five", "four"],
    ["seven", "six"],
    ["nine", "eight"],
]

ANTONYMS = {
    "first": ["last"], "last": ["first"],
    "son": ["daughter"], "daughter": ["son"],
    "brother": ["sister"], "sister": ["brother"],
    "father": ["mother"], "mother": ["father"],
    "husband": ["wife"], "wife": ["husband"],
    "king": ["queen"], "queen": ["king"],
    "more": ["fewer"], "fewer": ["more"],
    "older": ["younger"], "younger": ["older"],
    "oldest": ["youngest"], "youngest": ["oldest"],
    "larger": ["smaller"], "smaller": ["larger"],
    "largest": ["smallest"], "smallest": ["largest"],
    "longer": ["shorter"], "shorter": ["longer"],
    "higher": ["lower"], "lower": ["higher"],
    "taller": ["shorter"],
    "north": ["south"], "south": ["north"],
    "earlier": ["later"], "later": ["earlier"],
    "male": ["female"], "female": ["male"],
}

POS_EXTRA = {
    # verbs
    "named": ["VBN"], "born": ["VBN"], "situated": ["VBN"], "located": ["VBN"],
    "penned": ["VBN"], "written": ["VBN"], "composed": ["VBN", "VBD"],
    "wrote": ["VBD"], "served": ["VBD", "VBN"], "worked": ["VBD", "VBN"],
    "produced": ["VBN", "VBD"], "directed": ["VBN", "VBD"],
    "established": ["VBN", "VBD"], "founded": ["VBN", "VBD"],
    "appeared": ["VBD"], "starred": ["VBD"], "published": ["VBD", "VBN"],
    "lived": ["VBD"], "plays": ["VBZ"], "holds": ["VBZ"],
    # adjectives
    "first": ["JJ"], "last": ["JJ"], "male": ["JJ"], "female": ["JJ"],
    "more": ["JJR"], "fewer": ["JJR"], "older": ["JJR"], "younger": ["JJR"],
    "larger": ["JJR"], "smaller": ["JJR"], "longer": ["JJR"], "shorter": ["JJR"],
    "higher": ["JJR"], "lower": ["JJR"], "taller": ["JJR"],
    "earlier": ["JJR"], "later": ["JJR"],
    "largest": ["JJS"], "smallest": ["JJS"], "oldest": ["JJS"],
    "youngest": ["JJS"], "eldest": ["JJS"],
    "marine": ["JJ"], "nautical": ["JJ"], "fisheries": ["NN"],
    # nouns used by templates
    "north": ["NN"], "south": ["NN"], "scientist": ["NN"], "writer": ["NN"],
    "artist": ["NN"], "miles": ["NNS"], "economy": ["NN"], "tourism": ["NN"],
    "seabird": ["NN"], "colony": ["NN"], "poems": ["NNS"], "score": ["NN"],
    "career": ["NN"], "state": ["NN"], "populous": ["JJ"], "most": ["RBS"],
    "both": ["DT"],
}

NER_TAG_SET = ["PERSON", "ORG", "LOC", "NUMBER", "DATE", "MISC"]

FIRST_NAMES = [
    "Abel", "Beatrice", "Caleb", "Dora", "Edmund", "Faye", "Gilbert",
    "Helena", "Isaac", "Jemima", "Kurt", "Lydia", "Marcus", "Nina",
    "Oswald", "Petra", "Quentin", "Rosa", "Silas", "Thea", "Ulric",
    "Vera", "Wendell", "Xenia", "Yusuf", "Zelda",
]
LAST_NAMES = [
    "Ashford", "Blackwood", "Carver", "Dunmore", "Ellery", "Fairbanks",
    "Granger", "Holloway", "Irving", "Jessop", "Kendrick", "Lockhart",
    "Merriweather", "Norwood", "Ogden", "Pembroke", "Quill", "Ravenscroft",
    "Sutcliffe", "Thorne", "Underhill", "Vance", "Whitfield", "Yardley",
]
CITIES = [
    "Ardenville", "Briarton", "Dunhaven", "Eastmere", "Fallowfield",
    "Glenrock", "Harrowgate", "Inslow", "Jarvisport", "Kelders",
    "Larkspur", "Mirefield", "Northam", "Oakbridge", "Pellworth",
    "Quarrytown", "Redmoor", "Seabrook", "Tallowmere", "Umberton",
    "Vexley", "Westhollow", "Yarrowdale", "Calderport",
]
ISLANDS = [
    "Avelorn", "Brancaster", "Corvane", "Drellin", "Esmara", "Farholm",
    "Gullwick", "Hestria", "Ilmarsh", "Joskel", "Kestrelholm", "Lowan",
    "Marrowick", "Nethersay", "Orlith", "Pethmoor",
]
REGIONS = [
    "Caldera", "Westmark", "Norlund", "Eastvale", "Sundale", "Veyland",
    "Ostmark", "Highfen", "Tarnwold", "Umbria Vale",
]
ORGS = [
    "Ironvale Works", "Calder Institute", "Northam Press", "Gildern Society",
    "Varrow Labs", "Halden Foundry", "Merrow College", "Stellar Dynamics",
    "Orchard Chemicals", "Bluewater Shipping", "Fenwick Observatory",
    "Latchford Mills", "Harrowgate Archive", "Pellworth Atelier",
]
BANDS = [
    "Glenrock Harriers", "Redmoor Quartet", "Briarton Wanderers",
    "Seabrook Ramblers", "Vexley Union", "Larkspur Nine",
    "Oakbridge Settlers", "Kelders Choir", "Mirefield Rovers",
    "Northam Pipers", "Tallowmere Eleven", "Dunhaven Circle",
]
BOOKS = [
    "The Silent Meadow", "Winter Apples", "The Glass Harbor",
    "Songs of Ashfield", "A Far Shore", "The Copper Orchard",
    "Letters from Esmara", "The Long Thaw", "Maps of Nowhere",
    "The Quiet Anvil", "Salt and Timber", "The Paper Lighthouse",
]

RESERVED_PERSONS = [
    "Aurelia Plath", "Sylvia Plath", "Nicholas Farrar Hughes",
    "Otto Emil Plath", "Ted Hughes",
]
RESERVED_LOCS = ["Hawaii", "Honolulu", "Guangzhou", "Laysan", "Paris"]

NAT_PAIRS = ["French", "German", "Spanish", "British", "Canadian", "Japanese"]
PROF_PAIRS = [
    ("novelist", "novelists"), ("poet", "poets"), ("biologist", "biologists"),
    ("physicist", "physicists"), ("essayist", "essayists"),
]
KIN_ANTONYM = ["son", "daughter", "brother", "sister"]
KIN_EMBED = ["grandson", "granddaughter"]
PROFS = ["biologist", "chemist", "novelist", "poet", "painter", "architect",
         "governor", "historian", "sculptor", "engineer"]
YEARS = ["1885", "1932", "1955", "1970", "1998", "2000"]
NUM_WORDS = ["two", "four", "six", "eight"]
NUM_BIGGER = {"two": "three", "four": "five", "six": "seven", "eight": "nine"}

STOPWORDS = """a an the of in on at to for with by from as and or but nor is are was
were be been being am do does did have has had will would can could may
might must shall should not this that these those it its he she his her
they them their we our you your i my who whom what which where when why
how there here than then so if because while about into over under""".split()

DISTRACTORS = [
    ("Glass Kilns", ["Traditional glass kilns burn for several days.",
                     "Artisans rotate the molten batch hourly.",
                     "The cooling stage takes another week."]),
    ("Rope Bridges", ["Rope walkways sway under steady foot traffic.",
                      "Villagers replace the planks each spring."]),
    ("Tidal Clocks", ["Tidal clocks track the harbor swell.",
                      "Brass gears resist the salt air poorly.",
                      "Keepers oil the mechanism at dawn."]),
    ("Moss Gardens", ["Shaded moss gardens need constant moisture.",
                      "Caretakers mist the stones twice daily."]),
    ("Grain Barges", ["Flat-bottomed barges carry the autumn harvest.",
                      "Crews pole the cargo along shallow canals."]),
    ("Candle Making", ["Dipped candles require forty coats of wax.",
                       "The wicks are braided from flax cord."]),
    ("Falcon Posts", ["Messenger falcons rest at relay posts.",
                      "Handlers log every arrival in chalk."]),
    ("Salt Pans", ["Evaporation pans yield coarse grey salt.",
                   "Rakers gather the crust before noon."]),
    ("Clock Towers", ["The old tower chimes eleven times at dusk.",
                      "Pigeons nest behind the numeral plates."]),
    ("Peat Cutting", ["Cutters stack the sod bricks to dry.",
                      "A wet season ruins the whole yield."]),
    ("Loom Halls", ["Weaving halls echo with shuttle clatter.",
                    "Apprentices thread the heddles by lamplight."]),
    ("Ferry Lines", ["The crossing runs every other hour.",
                     "Ice closes the route for part of winter."]),
    ("Bee Skeps", ["Straw skeps shelter the hives from rain.",
                   "Keepers smoke the combs before harvest."]),
    ("Chalk Quarries", ["The quarry face gleams after rainfall.",
                        "Carts haul the blocks downhill on rails."]),
    ("Mill Ponds", ["The pond gate feeds the grinding wheel.",
                    "Eels gather in the spill channel."]),
    ("Star Charts", ["Hand-drawn charts fade under lamplight.",
                     "Copyists renew the ink each decade."]),
]


def person_name(i):
    return FIRST_NAMES[i % len(FIRST_NAMES)] + " " + LAST_NAMES[(i * 7 + i // len(FIRST_NAMES)) % len(LAST_NAMES)]


def build_resources():
    os.makedirs(RES, exist_ok=True)

    # vectors: cluster basis + per-member magnitude offset; nearest
    # neighbour of member i>0 is member 0, and of member 0 is member 1
    dim = 56
    noise_base = 44
    lines = []
    seen = set()
    for k, cluster in enumerate(CLUSTERS):
        assert k < noise_base, "too many clusters for the basis layout"
        for i, word in enumerate(cluster):
            assert word not in seen, "duplicate vector word: " + word
            seen.add(word)
            vec = [0.0] * dim
            vec[k] = 1.0
            vec[noise_base + (i % (dim - noise_base))] = 0.05 * (i + 1)
            lines.append(word + " " + " ".join("%.4f" % x for x in vec))
    with open(os.path.join(RES, "vectors.txt"), "w") as f:
        f.write("\n".join(lines) + "\n")

    with open(os.path.join(RES, "antonyms.json"), "w") as f:
        json.dump(ANTONYMS, f, indent=1, sort_keys=True)
        f.write("\n")

    pos = {}
    noun_clusters = {"l/s", "nmi", "km", "southwest", "northwest", "northeast",
                     "city", "island", "town", "nephew", "grandson", "cousin",
                     "niece", "granddaughter", "port", "capital", "harbor",
                     "river", "lake", "mountain", "team", "band", "group",
                     "player", "member", "employee", "essayist", "novelist",
                     "poet", "chemist", "biologist", "physicist", "editor",
                     "author", "publisher", "painter", "sculptor", "architect",
                     "engineer", "mayor", "governor", "senator", "coach",
                     "manager", "university", "college", "institute",
                     "magazine", "journal", "archivist", "historian"}
    plural_clusters = {"players", "members", "employees", "essayists",
                       "novelists", "poets", "chemists", "biologists",
                       "physicists"}
    nat_words = {"Italian", "French", "German", "Spanish", "American",
                 "British", "Canadian", "Japanese"}
    for w in noun_clusters:
        pos[w] = ["NN"]
    for w in plural_clusters:
        pos[w] = ["NNS"]
    for w in nat_words:
        pos[w.lower()] = ["JJ"]
    for w in ["two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"]:
        pos[w] = ["CD"]
    for w, tags in POS_EXTRA.items():
        pos[w] = tags
    for w in ANTONYMS:
        pos.setdefault(w, ["NN"])
    with open(os.path.join(RES, "pos_lexicon.json"), "w") as f:
        json.dump(pos, f, indent=1, sort_keys=True)
        f.write("\n")

    ner = {}
    for name in [person_name(i) for i in range(60)] + RESERVED_PERSONS:
        ner[name.lower()] = "PERSON"
    for loc in CITIES + ISLANDS + REGIONS + RESERVED_LOCS:
        ner[loc.lower()] = "LOC"
    for org in ORGS:
        ner[org.lower()] = "ORG"
    for band in BANDS:
        ner[band.lower()] = "ORG"
    for book in BOOKS:
        ner[book.lower()] = "MISC"
    with open(os.path.join(RES, "ner_lexicon.json"), "w") as f:
        json.dump({"tag_set": NER_TAG_SET, "entries": ner}, f, indent=1, sort_keys=True)
        f.write("\n")

    with open(os.path.join(RES, "stopwords.txt"), "w") as f:
        f.write("\n".join(STOPWORDS) + "\n")

    rules = {
        "version": 1,
        "rules": [
            {"name": "wh-subject-copula", "enabled": True},
            {"name": "wh-subject-verb", "enabled": True},
            {"name": "wh-object-aux", "enabled": True},
            {"name": "wh-adverb-place-time", "enabled": True},
            {"name": "comparative-competitor", "enabled": True},
            {"name": "yesno-polarity", "enabled": True},
        ],
    }
    with open(os.path.join(RES, "conversion_rules.json"), "w") as f:
        json.dump(rules, f, indent=1)
        f.write("\n")


# ---------------------------------------------------------------------------
# fixtures


def example(eid, question, answer, gold_paragraphs, facts, qtype, level, span=None,
            span_type=None):
    """gold_paragraphs: list of (title, sentences). facts: list of (title, idx)."""
    rnd = random.Random(eid)
    distractors = rnd.sample(DISTRACTORS, rnd.randint(3, 6))
    context = [[t, list(s)] for t, s in gold_paragraphs]
    for t, s in distractors:
        context.insert(rnd.randint(0, len(context)), [t, list(s)])
    rec = {
        "_id": eid,
        "question": question,
        "answer": answer,
        "type": qtype,
        "level": level,
        "supporting_facts": [[t, i] for t, i in facts],
        "context": context,
    }
    meta = {}
    if span is not None:
        start = question.find(span)
        assert start >= 0, "span %r not found in %r" % (span, question)
        meta = {"id": eid, "span_start": start, "span_end": start + len(span),
                "type": span_type or "bridging"}
    return rec, meta


def make_examples(prefix, count):
    """Deterministic mixed-type dataset with a couple of planned skips."""
    rnd = random.Random(prefix)
    examples, labels = [], []
    levels = ["easy", "medium", "hard"]

    def nid():
        return "%s-%03d" % (prefix, len(examples))

    # two pinned pipeline traces first
    rec, meta = example(
        nid(),
        "What island is located 808 nmi northwest of Honolulu, the capital of Hawaii?",
        "Laysan",
        [
            ("Honolulu", ["Honolulu is the capital and most populous city of the state of Hawaii.",
                          "The economy of Honolulu relies on tourism."]),
            ("Laysan", ["Laysan is located 808 nmi northwest of Honolulu.",
                        "Laysan holds a large seabird colony."]),
        ],
        [("Honolulu", 0), ("Laysan", 0)],
        "bridge", "hard",
        span="the capital of Hawaii", span_type="bridging",
    )
    examples.append(rec)
    labels.append(meta)

    rec, meta = example(
        nid(),
        "Who was a grandson of Aurelia Plath and was a fisheries biologist?",
        "Nicholas Farrar Hughes",
        [
            ("Sylvia Plath", ["Sylvia Plath was a daughter of Aurelia Plath.",
                              "Sylvia Plath published several poems."]),
            ("Nicholas Farrar Hughes", ["Nicholas Farrar Hughes was a son of Sylvia Plath.",
                                        "Nicholas Farrar Hughes was a fisheries biologist."]),
        ],
        [("Sylvia Plath", 0), ("Nicholas Farrar Hughes", 0), ("Nicholas Farrar Hughes", 1)],
        "bridge", "medium",
        span="a grandson of Aurelia Plath", span_type="bridging",
    )
    examples.append(rec)
    labels.append(meta)

    serial = 0
    while len(examples) < count - 2:
        kind = serial % 8
        level = levels[serial % 3]
        serial += 1
        i = serial + (17 if prefix.endswith("200") else 0)

        if kind == 0:  # kinship bridging, 2 hops
            a = person_name(3 * i)
            b = person_name(3 * i + 1)
            c = person_name(3 * i + 2)
            if "Otto" in c:
                continue
            kin_q = KIN_EMBED[i % len(KIN_EMBED)]
            kin1 = KIN_ANTONYM[i % len(KIN_ANTONYM)]
            kin2 = KIN_ANTONYM[(i + 1) % len(KIN_ANTONYM)]
            prof = PROFS[i % len(PROFS)]
            city = CITIES[i % len(CITIES)]
            q = "Who was a %s of %s and was a %s?" % (kin_q, a, prof)
            rec, meta = example(
                nid(), q, c,
                [(b, ["%s was a %s of %s." % (b, kin1, a),
                      "%s lived in %s." % (b, city)]),
                 (c, ["%s was a %s of %s." % (c, kin2, b),
                      "%s was a %s." % (c, prof)])],
                [(b, 0), (c, 0), (c, 1)],
                "bridge", level,
                span="a %s of %s" % (kin_q, a), span_type="bridging",
            )
        elif kind == 1:  # geography bridging, 2 hops
            island = ISLANDS[i % len(ISLANDS)]
            city = CITIES[(i + 3) % len(CITIES)]
            region = REGIONS[i % len(REGIONS)]
            dist = str(100 + (i * 37) % 800)
            q = "What island is located %s nmi northwest of the capital of %s?" % (dist, region)
            rec, meta = example(
                nid(), q, island,
                [(city, ["%s is the capital and most populous city of the state of %s." % (city, region),
                         "The economy of %s relies on tourism." % city]),
                 (island, ["%s is located %s nmi northwest of %s." % (island, dist, city),
                           "%s holds a large seabird colony." % island])],
                [(city, 0), (island, 0)],
                "bridge", level,
                span="the capital of %s" % region, span_type="bridging",
            )
        elif kind == 2:  # authorship bridging, 2 hops
            book = BOOKS[i % len(BOOKS)]
            s = person_name(3 * i + 40)
            o = person_name(3 * i + 41)
            if "Otto" in o:
                continue
            q = "Who was the father of the author of %s?" % book
            rec, meta = example(
                nid(), q, o,
                [(book, ["%s was written by %s." % (book, s),
                         "%s sold well in %s." % (book, CITIES[i % len(CITIES)])]),
                 (s, ["%s was a daughter of %s." % (s, o),
                      "%s lived in %s." % (s, CITIES[(i + 5) % len(CITIES)])])],
                [(book, 0), (s, 0)],
                "bridge", level,
                span="the author of %s" % book, span_type="bridging",
            )
        elif kind == 3:  # intersection, two one-hop conditions
            s = person_name(3 * i + 20)
            if "Otto" in s:
                continue
            city = CITIES[(i + 7) % len(CITIES)]
            org = ORGS[i % len(ORGS)]
            noun = ["scientist", "writer", "artist"][i % 3]
            q = "Which %s was born in %s and worked at %s?" % (noun, city, org)
            rec, meta = example(
                nid(), q, s,
                [(s, ["%s was born in %s." % (s, city),
                      "%s published several poems." % s]),
                 (org, ["%s worked at %s." % (s, org),
                        "%s was founded in %s." % (org, YEARS[i % len(YEARS)])])],
                [(s, 0), (org, 0)],
                "bridge", level,
                span="was born in %s" % city, span_type="intersection",
            )
        elif kind == 4:  # comparatives
            a = BANDS[i % len(BANDS)]
            b = BANDS[(i + 1) % len(BANDS)]
            n1 = NUM_WORDS[i % len(NUM_WORDS)]
            n2 = NUM_BIGGER[n1]
            q = "Which band has more members, %s or %s?" % (a, b)
            rec, meta = example(
                nid(), q, b,
                [(a, ["%s has %s members." % (a, n1),
                      "%s was founded in %s." % (a, YEARS[(i + 1) % len(YEARS)])]),
                 (b, ["%s has %s members." % (b, n2),
                      "%s played across %s." % (b, REGIONS[i % len(REGIONS)])])],
                [(a, 0), (b, 0)],
                "comparison", level,
            )
        elif kind == 5:  # yes/no
            a = person_name(3 * i + 30)
            b = person_name(3 * i + 31)
            nat = NAT_PAIRS[i % len(NAT_PAIRS)]
            prof, profs = PROF_PAIRS[i % len(PROF_PAIRS)]
            same = i % 2 == 0
            nat_b = nat if same else NAT_PAIRS[(i + 1) % len(NAT_PAIRS)]
            q = "Are %s and %s both %s %s?" % (a, b, nat, profs)
            rec, meta = example(
                nid(), q, "yes" if same else "no",
                [(a, ["%s was a %s %s." % (a, nat, prof),
                      "%s lived in %s." % (a, CITIES[i % len(CITIES)])]),
                 (b, ["%s was a %s %s." % (b, nat_b, prof),
                      "%s lived in %s." % (b, CITIES[(i + 9) % len(CITIES)])])],
                [(a, 0), (b, 0)],
                "comparison", level,
            )
        elif kind == 6:  # one-hop kinship
            a = person_name(3 * i + 50)
            b = person_name(3 * i + 51)
            if "Otto" in b:
                continue
            kin = KIN_ANTONYM[i % len(KIN_ANTONYM)]
            q = "Who was the %s of %s?" % (kin, a)
            rec, meta = example(
                nid(), q, b,
                [(b, ["%s was the %s of %s." % (b, kin, a),
                      "%s worked at %s." % (b, ORGS[(i + 2) % len(ORGS)])]),
                 (a, ["%s lived in %s." % (a, CITIES[(i + 11) % len(CITIES)]),
                      "%s published several poems." % a])],
                [(b, 0), (a, 0)],
                "bridge", level,
            )
        else:  # where-born
            p = person_name(3 * i + 55)
            city = CITIES[(i + 13) % len(CITIES)]
            region = REGIONS[(i + 1) % len(REGIONS)]
            q = "Where was %s born?" % p
            rec, meta = example(
                nid(), q, city,
                [(p, ["%s was born in %s." % (p, city),
                      "%s published several poems." % p]),
                 (city, ["%s is a city in %s." % (city, region),
                         "The economy of %s relies on tourism." % city])],
                [(p, 0), (city, 0)],
                "bridge", level,
            )
        examples.append(rec)
        if meta:
            labels.append(meta)

    # planned skips: no graphable entities, and a comparison without a
    # coordinator
    rec, _ = example(
        nid(),
        "What did the committee decide after the long recess?",
        "a new charter",
        [("Committee Notes", ["The committee met for three hours.",
                              "A new charter was adopted after the recess."]),
         ("Recess Rules", ["Recesses may not exceed a week.",
                           "The chair schedules every session."])],
        [("Committee Notes", 1)],
        "bridge", "hard",
    )
    examples.append(rec)
    rec, _ = example(
        nid(),
        "Is the lantern festival held in spring?",
        "yes",
        [("Lantern Festival", ["The lantern festival is held each spring.",
                               "Lanterns float down the river at dusk."]),
         ("Festival Rules", ["Stalls close at midnight.",
                             "The route changes every year."])],
        [("Lantern Festival", 0)],
        "comparison", "easy",
    )
    examples.append(rec)
    rnd.shuffle(labels)
    return examples, labels


def make_train_fixture():
    """Small training split: its answers seed the fake answer pool."""
    recs = []
    entries = [
        ("Otto Emil Plath", "Otto Emil Plath taught at Merrow College.", "bridge"),
        ("Guangzhou", "The expedition sailed for Guangzhou.", "bridge"),
        ("Calder Institute", "The award went to Calder Institute.", "bridge"),
        ("1999", "The archive opened in 1999.", "bridge"),
        ("yes", "The harbor froze that winter.", "comparison"),
        ("The Copper Orchard", "The Copper Orchard won the regional prize.", "bridge"),
    ]
    for i, (answer, sentence, qtype) in enumerate(entries):
        recs.append({
            "_id": "train-%03d" % i,
            "question": "What does record %d describe?" % i,
            "answer": answer,
            "type": qtype,
            "level": "easy",
            "supporting_facts": [["Record %d" % i, 0]],
            "context": [["Record %d" % i, [sentence, "The entry was checked twice."]]],
        })
    return recs


def make_metric_fixture():
    """20 hand-built scoring cases frozen against the reference scorer."""
    gold, answers, sp = [], {}, {}

    def add(eid, gold_answer, pred_answer, gold_sp, pred_sp):
        para_titles = sorted({t for t, _ in gold_sp} | {"Filler"})
        context = [[t, ["Sentence zero about %s." % t, "Sentence one.", "Sentence two."]]
                   for t in para_titles]
        gold.append({
            "_id": eid, "question": "Question for %s?" % eid, "answer": gold_answer,
            "type": "bridge", "level": "easy",
            "supporting_facts": [[t, i] for t, i in gold_sp],
            "context": context,
        })
        answers[eid] = pred_answer
        sp[eid] = [[t, i] for t, i in pred_sp]

    add("m00", "Laysan", "Laysan", [("A", 0)], [("A", 0)])
    add("m01", "Barack Obama", "Obama", [("A", 0), ("B", 1)], [("A", 0)])
    add("m02", "Paris", "Vienna", [("A", 0)], [("B", 2)])
    add("m03", "yes", "", [("A", 1)], [("A", 1)])
    add("m04", "yes", "yes", [("A", 0), ("B", 0)], [("A", 0), ("B", 0)])
    add("m05", "no", "yes", [("A", 0)], [("A", 0), ("A", 1)])
    add("m06", "The Answer", "answer", [("A", 0)], [("A", 0)])
    add("m07", "U.S.A.", "USA", [("A", 0), ("B", 1)], [("B", 1), ("A", 0)])
    add("m08", "cat", "the cat cat", [("A", 0)], [("A", 0), ("A", 1), ("A", 2)])
    add("m09", "seven brides", "seven", [("A", 0), ("A", 1)], [("A", 1)])
    add("m10", "a quiet harbor town", "quiet harbor", [("A", 0)], [])
    add("m11", "1,998 miles", "1998 miles", [("A", 0)], [("A", 0)])
    add("m12", "no", "no", [("A", 0), ("B", 2)], [("B", 2), ("A", 0), ("A", 1)])
    add("m13", "Ted Hughes", "ted hughes", [("A", 0)], [("A", 2)])
    add("m14", "cafe terrace", "cafe terrace at night", [("A", 0)], [("A", 0)])
    add("m15", "empty pred", "", [("A", 0)], [("A", 0)])
    add("m16", "the the the", "the", [("A", 0)], [("A", 0)])
    add("m17", "noanswer", "something", [("A", 0)], [("A", 0)])
    add("m18", "twelve", "twelve", [("A", 0), ("B", 0), ("B", 1)], [("A", 0), ("B", 0)])
    add("m19", "long answer with many words", "answer with words",
        [("A", 0)], [("A", 0), ("B", 0)])

    pred = {"answer": answers, "sp": sp}
    expected = oracle.evaluate(pred, gold)
    return gold, pred, expected


def main():
    build_resources()
    os.makedirs(DATA, exist_ok=True)

    fix50, labels50 = make_examples("fix50", 50)
    with open(os.path.join(DATA, "fixture_50.json"), "w") as f:
        json.dump(fix50, f, indent=1)
        f.write("\n")

    fix200, _ = make_examples("fix200", 200)
    with open(os.path.join(DATA, "fixture_200.json"), "w") as f:
        json.dump(fix200, f, indent=1)
        f.write("\n")

    with open(os.path.join(DATA, "fixture_train.json"), "w") as f:
        json.dump(make_train_fixture(), f, indent=1)
        f.write("\n")

    # ten span labels: bridging and intersection both present
    bridging = [m for m in labels50 if m and m["type"] == "bridging"][:7]
    intersect = [m for m in labels50 if m and m["type"] == "intersection"][:3]
    with open(os.path.join(DATA, "span_labels.jsonl"), "w") as f:
        for m in bridging + intersect:
            f.write(json.dumps(m, sort_keys=True) + "\n")

    gold, pred, expected = make_metric_fixture()
    os.makedirs(os.path.join(DATA, "metric_fixture"), exist_ok=True)
    with open(os.path.join(DATA, "metric_fixture", "gold.json"), "w") as f:
        json.dump(gold, f, indent=1)
        f.write("\n")
    with open(os.path.join(DATA, "metric_fixture", "pred.json"), "w") as f:
        json.dump(pred, f, indent=1)
        f.write("\n")
    with open(os.path.join(DATA, "metric_fixture", "expected.json"), "w") as f:
        json.dump(expected, f, indent=1, sort_keys=True)
        f.write("\n")

    print("resources ->", RES)
    print("fixtures  ->", DATA)
    print("fixture_50: %d examples, fixture_200: %d examples" % (len(fix50), len(fix200)))


if __name__ == "__main__":
    main()
