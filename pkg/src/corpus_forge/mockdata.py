"""Bundled word lists and toy lexicon backing the deterministic mock backend."""

NOUNS = [
    "Hund", "Katze", "Haus", "Buch", "Baum", "Auto", "Stadt", "Fluss",
    "Berg", "Vogel", "Fisch", "Brot", "Wasser", "Milch", "Apfel", "Tisch",
    "Stuhl", "Fenster", "Garten", "Schule", "Lehrer", "Kind", "Frau",
    "Mann", "Blume", "Sonne", "Mond", "Stern", "Nacht", "Tag", "Jahr",
    "Zeit", "Hand", "Kopf", "Auge", "Herz", "Brief", "Bild", "Musik",
    "Eule", "Pferd", "Schiff", "Zug", "Wald", "See", "Insel", "Wolke",
    "Stein", "Feuer", "Regen",
]

VERBS = [
    "laufen", "springen", "singen", "tanzen", "lesen", "schreiben",
    "essen", "trinken", "schlafen", "arbeiten", "spielen", "lernen",
    "kochen", "fahren", "fliegen", "schwimmen", "sprechen", "denken",
    "lachen", "kaufen", "bauen", "malen", "suchen", "finden", "rufen",
    "tragen", "werfen", "fangen", "geben", "nehmen",
]

# deliberately small and repetitive: the mock emulates low-diversity output
SENTENCE_TEMPLATES = [
    "Der {seed} ist gut.",
    "Ich sehe den {seed} heute.",
    "Das {seed} ist hier.",
    "Wir mögen das {seed} sehr.",
    "Ein {seed} kommt morgen.",
    "Mein {seed} ist alt.",
]

LEXICON = {
    # function words used by the sentence templates
    "der": "the", "die": "the", "das": "the", "den": "the",
    "ein": "a", "eine": "an", "ruft": "calls",
    "ist": "is", "war": "was", "sind": "are",
    "gut": "good", "hier": "here", "sehr": "very",
    "heute": "today", "morgen": "tomorrow",
    "mein": "my", "alt": "old", "ich": "I", "wir": "we",
    "sehe": "see", "mögen": "like", "kommt": "comes",
    # nouns
    "hund": "dog", "katze": "cat", "haus": "house", "buch": "book",
    "baum": "tree", "auto": "car", "stadt": "city", "fluss": "river",
    "berg": "mountain", "vogel": "bird", "fisch": "fish", "brot": "bread",
    "wasser": "water", "milch": "milk", "apfel": "apple", "tisch": "table",
    "stuhl": "chair", "fenster": "window", "garten": "garden",
    "schule": "school", "lehrer": "teacher", "kind": "child",
    "frau": "woman", "mann": "man", "blume": "flower", "sonne": "sun",
    "mond": "moon", "stern": "star", "nacht": "night", "tag": "day",
    "jahr": "year", "zeit": "time", "hand": "hand", "kopf": "head",
    "auge": "eye", "herz": "heart", "brief": "letter", "bild": "picture",
    "musik": "music", "eule": "owl", "pferd": "horse", "schiff": "ship",
    "zug": "train", "wald": "forest", "see": "lake", "insel": "island",
    "wolke": "cloud", "stein": "stone", "feuer": "fire", "regen": "rain",
    # verbs
    "laufen": "run", "springen": "jump", "singen": "sing",
    "tanzen": "dance", "lesen": "read", "schreiben": "write",
    "essen": "eat", "trinken": "drink", "schlafen": "sleep",
    "arbeiten": "work", "spielen": "play", "lernen": "learn",
    "kochen": "cook", "fahren": "drive", "fliegen": "fly",
    "schwimmen": "swim", "sprechen": "speak", "denken": "think",
    "lachen": "laugh", "kaufen": "buy", "bauen": "build", "malen": "paint",
    "suchen": "search", "finden": "find", "rufen": "call",
    "tragen": "carry", "werfen": "throw", "fangen": "catch",
    "geben": "give", "nehmen": "take",
}

_PUNCT = ".,;:!?"


def translate_word(word: str) -> str:
    """Toy word-by-word translation; unknown words pass through unchanged."""
    stripped = word.rstrip(_PUNCT)
    trailing = word[len(stripped):]
    return LEXICON.get(stripped.casefold(), stripped) + trailing


def translate_sentence(sentence: str) -> str:
    words = [translate_word(w) for w in sentence.split()]
    if words and words[0]:
        words[0] = words[0][0].upper() + words[0][1:]
    return " ".join(words)
