"""Writes embeddings50.txt: 50 words in 8 dimensions, five loose topics."""
import sys

import numpy as np

TOPICS = {
    "quake": ["earthquake", "quake", "tremor", "aftershock", "seismic", "Aftershocks",
              "magnitude", "epicenter", "rubble"],
    "flood": ["flood", "flooding", "deluge", "inundation", "rain", "storm", "river",
              "downpour"],
    "arrest": ["arrest", "capture", "detain", "detained", "apprehend", "custody", "police",
               "seize", "handcuffed", "suspect"],
    "war": ["invade", "conquer", "occupy", "troops", "army", "seized", "annex", "siege"],
    "death": ["death", "killed", "died", "dead", "fatal", "murdered", "victims", "funeral"],
}
FILLER = ["market", "music", "school", "film", "garden", "teacher", "bread"]


def main(path):
    rng = np.random.default_rng(7)
    centers = {t: rng.normal(size=8) for t in TOPICS}
    rows = []
    for topic, words in TOPICS.items():
        for w in words:
            rows.append((w, centers[topic] + 0.6 * rng.normal(size=8)))
    for w in FILLER:
        rows.append((w, rng.normal(size=8)))
    assert len(rows) == 50
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{len(rows)} 8\n")
        for w, v in rows:
            f.write(w + " " + " ".join(f"{x:.4f}" for x in v) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
