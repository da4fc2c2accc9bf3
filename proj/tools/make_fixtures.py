#!/usr/bin/env python3
"""Regenerates the checked-in test fixtures under tests/fixtures.

Everything is derived from a fixed seed with the standard library only, so
re-running the script reproduces the same bytes.
"""
import json
import math
import pathlib
import random
import struct

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# intent -> list of templates; {slot} placeholders draw from VALUES.
TEMPLATES = {
    "AddToPlaylist": ["add {artist} to my {playlist} playlist",
                      "put this song on {playlist_owner} {playlist}"],
    "BookRestaurant": ["book a table at {restaurant_name} in {city}",
                       "reserve {restaurant_name} for {party_size} people"],
    "GetWeather": ["what is the weather in {city} {timeRange}",
                   "will it rain in {city}"],
    "PlayMusic": ["play {artist} on {service}", "play some {genre} music"],
    "RateBook": ["rate {object_name} {rating} stars", "give {object_name} a rating of {rating}"],
    "SearchCreativeWork": ["find the {object_type} {object_name}", "show me {object_name}"],
    "SearchScreeningEvent": ["when is {movie_name} playing {timeRange}",
                             "find movie times for {movie_name} in {city}"],
}
VALUES = {
    "artist": ["adele", "miles davis", "the beatles", "nina simone", "bjork"],
    "playlist": ["road trip", "chill vibes", "workout", "sunday morning"],
    "playlist_owner": ["my", "her", "jamie s"],
    "restaurant_name": ["luigi s", "the golden fork", "sakura", "blue plate"],
    "city": ["paris", "new york", "lagos", "osaka", "lima"],
    "party_size": ["two", "four", "6"],
    "timeRange": ["tomorrow", "this weekend", "tonight", "next friday"],
    "service": ["spotify", "deezer", "youtube"],
    "genre": ["jazz", "blues", "techno", "folk"],
    "object_name": ["the hobbit", "dune", "beloved", "pale fire"],
    "rating": ["three", "5", "four"],
    "object_type": ["book", "album", "tv show"],
    "movie_name": ["alien", "the matrix", "spirited away", "heat"],
}


def realize(rng, template):
    tokens, tags = [], []
    for piece in template.split():
        if piece.startswith("{"):
            slot = piece[1:-1]
            words = rng.choice(VALUES[slot]).split()
            tokens += words
            tags += ["B-" + slot] + ["I-" + slot] * (len(words) - 1)
        else:
            tokens.append(piece)
            tags.append("O")
    return tokens, tags


def normalize(label):
    out, word = [], ""
    for ch in label:
        if ch in "_.- ":
            if word:
                out.append(word)
            word = ""
        elif ch.isupper() and word and not word[-1].isupper():
            out.append(word)
            word = ch
        else:
            word += ch
    if word:
        out.append(word)
    return " ".join(w.lower() for w in out)


def augmented(intent, tokens, tags):
    body, i = [], 0
    while i < len(tokens):
        if tags[i].startswith("B-"):
            slot = tags[i][2:]
            j = i + 1
            while j < len(tokens) and tags[j] == "I-" + slot:
                j += 1
            body += ["["] + tokens[i:j] + [":", normalize(slot), "]"]
            i = j
        else:
            body.append(tokens[i])
            i += 1
    return "intent : " + normalize(intent) + " ; " + " ".join(body)


def write_conll(path, examples):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for intent, tokens, tags in examples:
            f.write(f"# intent = {intent}\n")
            for t, g in zip(tokens, tags):
                f.write(f"{t}\t{g}\n")
            f.write("\n")


def write_emb1(path, rows):
    with open(path, "wb") as f:
        f.write(b"EMB1" + struct.pack("<II", len(rows), len(rows[0])))
        for row in rows:
            f.write(struct.pack("<%df" % len(row), *row))


def main():
    rng = random.Random(20240611)
    OUT.mkdir(parents=True, exist_ok=True)

    train = []
    for intent, templates in TEMPLATES.items():
        for k in range(12):
            tokens, tags = realize(rng, templates[k % len(templates)])
            train.append((intent, tokens, tags))
    rng.shuffle(train)
    write_conll(OUT / "toy_train.conll", train)

    # 5 generations per intent in intent mode (35 prompts): valid lines plus a
    # few broken ones and one copy of a training sentence.
    lines = []
    for intent, templates in TEMPLATES.items():
        for k in range(5):
            tokens, tags = realize(rng, rng.choice(templates))
            lines.append(augmented(intent, tokens, tags))
    lines[3] = "intent : play music ; play [ adele artist ]"
    lines[9] = "intent : get weather ; weather in [ paris : planet ]"
    lines[17] = "intent : order pizza ; one [ large : size ] pizza"
    lines[24] = "play some jazz"
    lines[30] = augmented(*train[0])
    (OUT / "toy_generations.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    gauss = random.Random(7)
    real = [[gauss.gauss(0, 1) for _ in range(16)] for _ in range(300)]
    fake = [[gauss.gauss(0.5 if j < 4 else 0, 1.2) for j in range(16)] for _ in range(300)]
    write_emb1(OUT / "real_plain.emb1", real)
    write_emb1(OUT / "fake_plain.emb1", fake)

    with open(OUT / "fake_logprobs.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for n in (4, 7, 3, 9):
            lp = [round(math.log(gauss.uniform(0.05, 0.9)), 6) for _ in range(n)]
            f.write(json.dumps({"logprobs": lp}) + "\n")


if __name__ == "__main__":
    main()
